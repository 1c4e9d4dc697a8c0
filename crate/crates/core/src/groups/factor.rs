use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};

/// Factor `n >= 2` into (prime, exponent) pairs, sorted by prime.
///
/// Trial division handles the small part; the rest goes through
/// Miller-Rabin and Pollard's rho (Brent cycle detection). Deterministic.
pub fn factorize(n: &BigUint) -> Vec<(BigUint, u32)> {
    assert!(n >= &BigUint::from(2u32), "factorize expects n >= 2");
    let mut factors: Vec<BigUint> = Vec::new();
    let mut remaining = n.clone();

    for p in small_primes() {
        let p = BigUint::from(p);
        if &p * &p > remaining {
            break;
        }
        while (&remaining % &p).is_zero() {
            factors.push(p.clone());
            remaining /= &p;
        }
    }
    if remaining > BigUint::one() {
        split_into_primes(remaining, &mut factors);
    }

    factors.sort();
    let mut out: Vec<(BigUint, u32)> = Vec::new();
    for f in factors {
        match out.last_mut() {
            Some((p, e)) if *p == f => *e += 1,
            _ => out.push((f, 1)),
        }
    }
    out
}

pub fn is_prime(n: &BigUint) -> bool {
    let two = BigUint::from(2u32);
    if n < &two {
        return false;
    }
    for p in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let p = BigUint::from(p);
        if n == &p {
            return true;
        }
        if (n % &p).is_zero() {
            return false;
        }
    }
    miller_rabin(n)
}

pub fn is_prime_u64(n: u64) -> bool {
    is_prime(&BigUint::from(n))
}

fn small_primes() -> impl Iterator<Item = u32> {
    (2u32..10_000).filter(|&n| {
        if n < 4 {
            return true;
        }
        if n % 2 == 0 {
            return false;
        }
        let mut d = 3;
        while d * d <= n {
            if n % d == 0 {
                return false;
            }
            d += 2;
        }
        true
    })
}

fn split_into_primes(n: BigUint, out: &mut Vec<BigUint>) {
    if n.is_one() {
        return;
    }
    if is_prime(&n) {
        out.push(n);
        return;
    }
    let d = pollard_rho(&n);
    let q = &n / &d;
    split_into_primes(d, out);
    split_into_primes(q, out);
}

/// Miller-Rabin with the first twelve prime bases; deterministic for all
/// inputs below 3.3e24 and overwhelmingly reliable beyond.
fn miller_rabin(n: &BigUint) -> bool {
    let one = BigUint::one();
    let two = BigUint::from(2u32);
    let n_minus_1 = n - &one;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;

    'witness: for a in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let a = BigUint::from(a);
        if &a >= n {
            continue;
        }
        let mut x = a.modpow(&d, n);
        if x.is_one() || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&two, n);
            if x == n_minus_1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Brent's variant of Pollard's rho; assumes `n` is odd, composite, and not
/// a small prime power already removed by trial division.
fn pollard_rho(n: &BigUint) -> BigUint {
    let one = BigUint::one();
    if (n % 2u32).is_zero() {
        return BigUint::from(2u32);
    }
    let mut c = BigUint::one();
    loop {
        let mut x = BigUint::from(2u32);
        let mut y = BigUint::from(2u32);
        let mut d = BigUint::one();
        let step = |v: &BigUint| (v * v + &c) % n;
        while d.is_one() {
            x = step(&x);
            y = step(&step(&y));
            let diff = if x > y { &x - &y } else { &y - &x };
            if diff.is_zero() {
                break; // cycle without factor; retry with next constant
            }
            d = diff.gcd(n);
        }
        if !d.is_one() && &d != n {
            return d;
        }
        c += &one;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn factor_u64(n: u64) -> Vec<(u64, u32)> {
        factorize(&BigUint::from(n))
            .into_iter()
            .map(|(p, e)| (u64::try_from(&p).unwrap(), e))
            .collect()
    }

    #[test]
    fn small_factorizations() {
        assert_eq!(factor_u64(6), vec![(2, 1), (3, 1)]);
        assert_eq!(factor_u64(12), vec![(2, 2), (3, 1)]);
        assert_eq!(factor_u64(1024), vec![(2, 10)]);
        assert_eq!(factor_u64(97), vec![(97, 1)]);
    }

    #[test]
    fn larger_semiprime() {
        // 1_000_003 * 1_000_033
        let n = BigUint::from(1_000_003u64) * BigUint::from(1_000_033u64);
        let f = factorize(&n);
        assert_eq!(f.len(), 2);
        assert_eq!(f[0].0, BigUint::from(1_000_003u64));
        assert_eq!(f[1].0, BigUint::from(1_000_033u64));
    }

    #[test]
    fn primality() {
        assert!(is_prime_u64(2));
        assert!(is_prime_u64(3));
        assert!(!is_prime_u64(1));
        assert!(!is_prime_u64(561)); // Carmichael
        assert!(is_prime_u64(2_147_483_647));
    }
}

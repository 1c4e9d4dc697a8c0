//! Finite groups as multiplication tables, and the necessary-condition
//! screen for acting freely by isometries on a sphere: at most one
//! involution and it must be central, and commuting elements with
//! non-coprime orders must share a nontrivial common power.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A finite group as an n x n multiplication table over indices 0..n.
/// Validated eagerly: rows and columns are permutations, the identity acts
/// as such, and associativity holds for every triple.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CayleyTable {
    order: usize,
    table: Vec<Vec<usize>>,
    identity: usize,
}

/// Wire form: `{"cayley": [[...]], "identity": 0}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CayleyDocument {
    pub cayley: Vec<Vec<usize>>,
    pub identity: usize,
}

impl CayleyTable {
    pub fn new(table: Vec<Vec<usize>>, identity: usize) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::InvalidCayleyTable("table is empty".into()));
        }
        if identity >= n {
            return Err(Error::InvalidCayleyTable(format!(
                "identity index {identity} out of range for order {n}"
            )));
        }
        for (i, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidCayleyTable(format!(
                    "row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            if row.iter().any(|&v| v >= n) {
                return Err(Error::InvalidCayleyTable(format!(
                    "row {i} contains an out-of-range index"
                )));
            }
            let mut seen = vec![false; n];
            for &v in row {
                if seen[v] {
                    return Err(Error::InvalidCayleyTable(format!(
                        "row {i} is not a permutation"
                    )));
                }
                seen[v] = true;
            }
        }
        for j in 0..n {
            let mut seen = vec![false; n];
            for row in &table {
                if seen[row[j]] {
                    return Err(Error::InvalidCayleyTable(format!(
                        "column {j} is not a permutation"
                    )));
                }
                seen[row[j]] = true;
            }
        }
        for (j, &v) in table[identity].iter().enumerate() {
            if v != j || table[j][identity] != j {
                return Err(Error::InvalidCayleyTable(format!(
                    "index {identity} does not act as the identity"
                )));
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(Error::InvalidCayleyTable(format!(
                            "associativity fails at ({a}, {b}, {c})"
                        )));
                    }
                }
            }
        }
        Ok(CayleyTable {
            order: n,
            table,
            identity,
        })
    }

    pub fn from_document(doc: &CayleyDocument) -> Result<Self> {
        Self::new(doc.cayley.clone(), doc.identity)
    }

    /// Table of the direct product Z_{m_1} x ... x Z_{m_k}, elements in
    /// mixed-radix order.
    pub fn cyclic_product(moduli: &[u64]) -> Result<Self> {
        if moduli.contains(&0) {
            return Err(Error::InvalidArgument("moduli must be positive".into()));
        }
        let n: u64 = moduli.iter().product();
        let n = usize::try_from(n)
            .map_err(|_| Error::InvalidArgument("group order exceeds usize".into()))?;
        let decode = |mut idx: u64| -> Vec<u64> {
            let mut residues = Vec::with_capacity(moduli.len());
            for &m in moduli.iter().rev() {
                residues.push(idx % m);
                idx /= m;
            }
            residues.reverse();
            residues
        };
        let encode = |residues: &[u64]| -> u64 {
            residues
                .iter()
                .zip(moduli)
                .fold(0u64, |acc, (&r, &m)| acc * m + r)
        };
        let mut table = vec![vec![0usize; n]; n];
        for (i, row) in table.iter_mut().enumerate() {
            let a = decode(i as u64);
            for (j, cell) in row.iter_mut().enumerate() {
                let b = decode(j as u64);
                let sum: Vec<u64> = a
                    .iter()
                    .zip(&b)
                    .zip(moduli)
                    .map(|((&x, &y), &m)| (x + y) % m)
                    .collect();
                *cell = encode(&sum) as usize;
            }
        }
        Self::new(table, 0)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    /// Smallest m >= 1 with g^m = identity.
    pub fn element_order(&self, g: usize) -> usize {
        let mut power = g;
        let mut m = 1;
        while power != self.identity {
            power = self.mul(power, g);
            m += 1;
        }
        m
    }

    pub fn commutes(&self, a: usize, b: usize) -> bool {
        self.mul(a, b) == self.mul(b, a)
    }

    pub fn is_central(&self, g: usize) -> bool {
        (0..self.order).all(|h| self.commutes(g, h))
    }

    /// The cyclic subgroup generated by `g`, as a sorted index list.
    pub fn cyclic_subgroup(&self, g: usize) -> Vec<usize> {
        let mut members = vec![self.identity];
        let mut power = g;
        while power != self.identity {
            members.push(power);
            power = self.mul(power, g);
        }
        members.sort_unstable();
        members
    }

    /// Run the necessary-condition screen. A report that passes does not
    /// certify a free action; a violation rules one out.
    pub fn screen(&self) -> ScreeningReport {
        let mut violations = Vec::new();

        let involutions: Vec<usize> = (0..self.order)
            .filter(|&g| self.element_order(g) == 2)
            .collect();
        if involutions.len() >= 2 {
            violations.push(Violation::MultipleInvolutions {
                witnesses: involutions.clone(),
            });
        }
        for &g in &involutions {
            if !self.is_central(g) {
                let blocker = (0..self.order)
                    .find(|&h| !self.commutes(g, h))
                    .expect("non-central element has a non-commuting partner");
                violations.push(Violation::NonCentralInvolution {
                    witness: g,
                    non_commuting: blocker,
                });
            }
        }

        for g in 0..self.order {
            if g == self.identity {
                continue;
            }
            for m in g + 1..self.order {
                if m == self.identity || !self.commutes(g, m) {
                    continue;
                }
                let og = self.element_order(g);
                let om = self.element_order(m);
                if gcd(og, om) == 1 {
                    continue;
                }
                let sub_g = self.cyclic_subgroup(g);
                let sub_m = self.cyclic_subgroup(m);
                let shared = intersection_size(&sub_g, &sub_m);
                if shared == 1 {
                    violations.push(Violation::CommutingWithoutCommonPower {
                        pair: (g, m),
                        orders: (og, om),
                    });
                }
            }
        }

        ScreeningReport { violations }
    }
}

/// Outcome of [`CayleyTable::screen`]: pass, or the list of violated
/// necessary conditions with concrete witnesses.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScreeningReport {
    pub violations: Vec<Violation>,
}

impl ScreeningReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum Violation {
    /// A freely acting group has at most one element of order two.
    MultipleInvolutions { witnesses: Vec<usize> },
    /// The unique element of order two must lie in the center.
    NonCentralInvolution {
        witness: usize,
        non_commuting: usize,
    },
    /// Commuting elements of non-coprime finite orders must share a
    /// nontrivial common power.
    CommutingWithoutCommonPower {
        pair: (usize, usize),
        orders: (usize, usize),
    },
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn intersection_size(a: &[usize], b: &[usize]) -> usize {
    let mut count = 0;
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                count += 1;
                i += 1;
                j += 1;
            }
        }
    }
    count
}

#[cfg(test)]
mod tests {
    use super::*;

    /// S3 with elements e, r, r2, s, sr, sr2 (r of order 3, s of order 2).
    pub fn s3_table() -> CayleyTable {
        let names = ["e", "r", "rr", "s", "sr", "srr"];
        let compose = |a: &str, b: &str| -> String {
            // normalize words in r, s with s r = r^2 s
            let word = format!("{}{}", strip(a), strip(b));
            normalize(&word)
        };
        let mut table = vec![vec![0usize; 6]; 6];
        for (i, a) in names.iter().enumerate() {
            for (j, b) in names.iter().enumerate() {
                let c = compose(a, b);
                table[i][j] = names
                    .iter()
                    .position(|n| strip(n) == c)
                    .unwrap_or_else(|| panic!("product {c} missing"));
            }
        }
        return CayleyTable::new(table, 0).unwrap();

        fn strip(name: &str) -> String {
            if name == "e" {
                String::new()
            } else {
                name.to_string()
            }
        }

        fn normalize(word: &str) -> String {
            let mut letters: Vec<char> = word.chars().collect();
            loop {
                let mut changed = false;
                // push every s to the left, rewriting r s -> s r^2
                for i in 0..letters.len().saturating_sub(1) {
                    if letters[i] == 'r' && letters[i + 1] == 's' {
                        letters.splice(i..i + 2, ['s', 'r', 'r']);
                        changed = true;
                        break;
                    }
                }
                if changed {
                    continue;
                }
                let s_count = letters.iter().filter(|&&c| c == 's').count();
                let r_count = letters.iter().filter(|&&c| c == 'r').count();
                let mut out = String::new();
                if s_count % 2 == 1 {
                    out.push('s');
                }
                for _ in 0..r_count % 3 {
                    out.push('r');
                }
                return out;
            }
        }
    }

    #[test]
    fn identity_has_order_one() {
        let z6 = CayleyTable::cyclic_product(&[6]).unwrap();
        assert_eq!(z6.element_order(0), 1);
    }

    #[test]
    fn z6_generator_has_order_six() {
        let z6 = CayleyTable::cyclic_product(&[6]).unwrap();
        assert_eq!(z6.element_order(1), 6);
        assert!(z6.screen().passed());
    }

    #[test]
    fn klein_group_fails_with_three_involutions() {
        let k4 = CayleyTable::cyclic_product(&[2, 2]).unwrap();
        let report = k4.screen();
        assert!(!report.passed());
        let found = report.violations.iter().any(
            |v| matches!(v, Violation::MultipleInvolutions { witnesses } if witnesses.len() == 3),
        );
        assert!(found, "expected three involutions in {report:?}");
    }

    #[test]
    fn z2_z2_also_fails_common_power_rule() {
        let k4 = CayleyTable::cyclic_product(&[2, 2]).unwrap();
        let report = k4.screen();
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, Violation::CommutingWithoutCommonPower { .. })));
    }

    #[test]
    fn s3_fails_with_non_central_involutions() {
        let s3 = s3_table();
        assert_eq!(s3.order(), 6);
        let report = s3.screen();
        assert!(!report.passed());
        let involutions: Vec<usize> = (0..6).filter(|&g| s3.element_order(g) == 2).collect();
        assert_eq!(involutions.len(), 3);
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, Violation::NonCentralInvolution { .. })));
    }

    /// Dihedral group of order 8: r of order 4, s of order 2, srs = r^-1.
    /// Elements 0..8 are e, r, r2, r3, s, sr, sr2, sr3.
    pub fn dihedral8_table() -> CayleyTable {
        let mut table = vec![vec![0usize; 8]; 8];
        // element (a, b) = s^a r^b with (a,b)*(c,d) = s^(a+c) r^(d + b*(-1)^c)
        let encode = |a: usize, b: usize| a * 4 + b;
        for a in 0..2 {
            for b in 0..4 {
                for c in 0..2 {
                    for d in 0..4 {
                        let exp = if c == 1 { (4 - b) % 4 } else { b };
                        table[encode(a, b)][encode(c, d)] = encode((a + c) % 2, (d + exp) % 4);
                    }
                }
            }
        }
        CayleyTable::new(table, 0).unwrap()
    }

    /// Quaternion group: 1, -1, i, -i, j, -j, k, -k as indices 0..8.
    pub fn quaternion_table() -> CayleyTable {
        // sign in bit 0, axis (1, i, j, k) in bits 1-2
        let mul = |x: usize, y: usize| -> usize {
            let (sx, ax) = (x & 1, x >> 1);
            let (sy, ay) = (y & 1, y >> 1);
            let (axis, extra) = match (ax, ay) {
                (0, a) | (a, 0) => (a, 0),
                (a, b) if a == b => (0, 1),
                (1, 2) => (3, 0),
                (2, 3) => (1, 0),
                (3, 1) => (2, 0),
                (2, 1) => (3, 1),
                (3, 2) => (1, 1),
                (1, 3) => (2, 1),
                _ => unreachable!(),
            };
            (axis << 1) | ((sx + sy + extra) % 2)
        };
        let table: Vec<Vec<usize>> = (0..8)
            .map(|x| (0..8).map(|y| mul(x, y)).collect())
            .collect();
        CayleyTable::new(table, 0).unwrap()
    }

    #[test]
    fn dihedral_of_order_eight_fails_screening() {
        let d8 = dihedral8_table();
        let report = d8.screen();
        assert!(!report.passed());
        // r^2 plus four reflections: five involutions in all
        let involutions: Vec<usize> = (0..8).filter(|&g| d8.element_order(g) == 2).collect();
        assert_eq!(involutions.len(), 5);
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, Violation::MultipleInvolutions { .. })));
    }

    #[test]
    fn quaternion_group_passes_screening() {
        let q8 = quaternion_table();
        let involutions: Vec<usize> = (0..8).filter(|&g| q8.element_order(g) == 2).collect();
        assert_eq!(involutions, vec![1], "-1 is the unique involution");
        assert!(q8.is_central(1));
        // every pair of commuting non-identity elements shares -1 as a power
        assert!(q8.screen().passed());
    }

    #[test]
    fn malformed_tables_are_rejected() {
        // row not a permutation
        let err = CayleyTable::new(vec![vec![0, 0], vec![1, 1]], 0).unwrap_err();
        assert!(matches!(err, Error::InvalidCayleyTable(_)));
        // valid latin square, broken associativity would need order >= 5;
        // here: wrong identity index
        let err = CayleyTable::new(vec![vec![0, 1], vec![1, 0]], 1).unwrap_err();
        assert!(matches!(err, Error::InvalidCayleyTable(_)));
    }

    #[test]
    fn trivial_group_passes() {
        let t = CayleyTable::new(vec![vec![0]], 0).unwrap();
        assert!(t.screen().passed());
    }
}

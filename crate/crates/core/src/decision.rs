//! Admissibility of free, properly discontinuous isometric sphere actions
//! for finitely generated Abelian groups: admissible exactly when the
//! torsion part splits into prime-power factors with pairwise distinct
//! primes. The free rank never obstructs.

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groups::{factorize, FgAbelianPresentation, PrimaryDecomposition, PrimePower};

/// Outcome of the decision procedure. Exactly one of `certificate` and
/// `witness` is present: the canonical form on success, a pair of torsion
/// factors sharing a prime on refusal.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub admissible: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub certificate: Option<PrimaryDecomposition>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<SharedPrimeWitness>,
}

/// Two torsion factors p^a >= p^b over the same prime. Serializes as the
/// bare value pair `[p^a, p^b]`, as numbers when they fit in 64 bits and as
/// decimal strings otherwise.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "[FactorValue; 2]", try_from = "[FactorValue; 2]")]
pub struct SharedPrimeWitness {
    pub factors: [PrimePower; 2],
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum FactorValue {
    Small(u64),
    Big(String),
}

impl From<&PrimePower> for FactorValue {
    fn from(pp: &PrimePower) -> Self {
        let value = pp.value();
        match u64::try_from(&value) {
            Ok(v) => FactorValue::Small(v),
            Err(_) => FactorValue::Big(value.to_string()),
        }
    }
}

impl From<SharedPrimeWitness> for [FactorValue; 2] {
    fn from(w: SharedPrimeWitness) -> Self {
        [(&w.factors[0]).into(), (&w.factors[1]).into()]
    }
}

impl TryFrom<[FactorValue; 2]> for SharedPrimeWitness {
    type Error = Error;

    fn try_from(wire: [FactorValue; 2]) -> Result<Self> {
        let parse = |fv: &FactorValue| -> Result<PrimePower> {
            let value: BigUint = match fv {
                FactorValue::Small(v) => BigUint::from(*v),
                FactorValue::Big(s) => s
                    .parse()
                    .map_err(|_| Error::MalformedInput(format!("bad factor {s:?}")))?,
            };
            let factors = factorize(&value);
            match factors.as_slice() {
                [(prime, exponent)] => Ok(PrimePower {
                    prime: prime.clone(),
                    exponent: *exponent,
                }),
                _ => Err(Error::MalformedInput(format!(
                    "witness factor {value} is not a prime power"
                ))),
            }
        };
        let hi = parse(&wire[0])?;
        let lo = parse(&wire[1])?;
        if hi.prime != lo.prime {
            return Err(Error::MalformedInput(
                "witness factors do not share a prime".into(),
            ));
        }
        if hi.exponent < lo.exponent {
            return Err(Error::MalformedInput("witness factors out of order".into()));
        }
        Ok(SharedPrimeWitness { factors: [hi, lo] })
    }
}

impl SharedPrimeWitness {
    fn from_pair(a: &PrimePower, b: &PrimePower) -> Self {
        debug_assert_eq!(a.prime, b.prime);
        let (hi, lo) = if a.exponent >= b.exponent {
            (a, b)
        } else {
            (b, a)
        };
        SharedPrimeWitness {
            factors: [hi.clone(), lo.clone()],
        }
    }

    pub fn prime(&self) -> &BigUint {
        &self.factors[0].prime
    }

    pub fn values(&self) -> [BigUint; 2] {
        [self.factors[0].value(), self.factors[1].value()]
    }
}

pub fn decide_fg_abelian(presentation: &FgAbelianPresentation) -> Verdict {
    decide_decomposition(presentation.primary_decomposition())
}

pub fn decide_decomposition(decomposition: PrimaryDecomposition) -> Verdict {
    match check_distinct_primes(&decomposition) {
        None => Verdict {
            admissible: true,
            certificate: Some(decomposition),
            witness: None,
        },
        Some(witness) => Verdict {
            admissible: false,
            certificate: None,
            witness: Some(witness),
        },
    }
}

/// `None` when all torsion primes are pairwise distinct; otherwise the
/// offending pair for the smallest repeated prime, largest exponents first.
pub fn check_distinct_primes(d: &PrimaryDecomposition) -> Option<SharedPrimeWitness> {
    // torsion is sorted by (prime, exponent), so a repeated prime occupies a
    // contiguous run; the smallest repeated prime is the first adjacent match
    for window in d.torsion.windows(2) {
        if window[0].prime == window[1].prime {
            let run: Vec<&PrimePower> = d
                .torsion
                .iter()
                .filter(|pp| pp.prime == window[0].prime)
                .collect();
            let n = run.len();
            return Some(SharedPrimeWitness::from_pair(run[n - 1], run[n - 2]));
        }
    }
    None
}

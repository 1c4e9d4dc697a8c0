//! Exact algebra of finitely generated Abelian groups, plus
//! necessary-condition screening of arbitrary finite groups given by
//! Cayley tables.

pub mod cayley;
mod factor;
pub mod matrix;
mod snf;

pub use cayley::{CayleyDocument, CayleyTable, ScreeningReport, Violation};
pub use factor::{factorize, is_prime, is_prime_u64};
pub use snf::{smith_normal_form, SmithNormalForm};

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use matrix::IntMatrix;

/// A finitely generated Abelian group given by generators and relators.
/// Rows of `relations` are relators written over the generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FgAbelianPresentation {
    num_generators: usize,
    relations: IntMatrix,
}

/// Wire form of a presentation: `{"generators": n, "relations": [[...]]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PresentationDocument {
    pub generators: usize,
    pub relations: Vec<Vec<i64>>,
}

impl FgAbelianPresentation {
    pub fn new(num_generators: usize, relations: IntMatrix) -> Result<Self> {
        let relations = if relations.rows() == 0 {
            IntMatrix::zeros(0, num_generators)
        } else if relations.cols() == num_generators {
            relations
        } else {
            return Err(Error::InvalidPresentation(format!(
                "relation rows have {} columns but the presentation has {} generators",
                relations.cols(),
                num_generators
            )));
        };
        Ok(FgAbelianPresentation {
            num_generators,
            relations,
        })
    }

    pub fn from_document(doc: &PresentationDocument) -> Result<Self> {
        let relations = if doc.relations.is_empty() {
            IntMatrix::zeros(0, doc.generators)
        } else {
            if doc.relations.iter().any(|r| r.len() != doc.generators) {
                return Err(Error::InvalidPresentation(format!(
                    "every relation must have one entry per generator ({})",
                    doc.generators
                )));
            }
            IntMatrix::from_i64_rows(&doc.relations)
        };
        Self::new(doc.generators, relations)
    }

    /// Convenience: the direct sum Z^{free_rank} + Z_{m_1} + ... + Z_{m_k}.
    pub fn direct_sum(free_rank: usize, moduli: &[u64]) -> Self {
        let n = free_rank + moduli.len();
        let mut relations = IntMatrix::zeros(moduli.len(), n);
        for (i, &m) in moduli.iter().enumerate() {
            relations[(i, free_rank + i)] = BigInt::from(m);
        }
        FgAbelianPresentation {
            num_generators: n,
            relations,
        }
    }

    pub fn num_generators(&self) -> usize {
        self.num_generators
    }

    pub fn relations(&self) -> &IntMatrix {
        &self.relations
    }

    /// Canonical form through Smith reduction of the relation matrix.
    /// Generators not covered by a diagonal slot are free; zero invariant
    /// factors add further free summands inside [`primary_decomposition`].
    pub fn primary_decomposition(&self) -> PrimaryDecomposition {
        let snf = smith_normal_form(&self.relations);
        let uncovered = self.num_generators - snf.diagonal.len();
        primary_decomposition(&snf.diagonal, uncovered)
    }
}

/// A prime-power cyclic factor Z_{p^exponent}. Serializes with decimal
/// strings so arbitrarily large primes survive JSON.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "PrimePowerWire", try_from = "PrimePowerWire")]
pub struct PrimePower {
    pub prime: BigUint,
    pub exponent: u32,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PrimePowerWire {
    prime: String,
    exponent: u32,
    value: String,
}

impl From<PrimePower> for PrimePowerWire {
    fn from(pp: PrimePower) -> Self {
        PrimePowerWire {
            prime: pp.prime.to_string(),
            exponent: pp.exponent,
            value: pp.value().to_string(),
        }
    }
}

impl TryFrom<PrimePowerWire> for PrimePower {
    type Error = Error;

    fn try_from(wire: PrimePowerWire) -> Result<Self> {
        let prime: BigUint = wire
            .prime
            .parse()
            .map_err(|_| Error::MalformedInput(format!("bad prime {:?}", wire.prime)))?;
        let pp = PrimePower {
            prime,
            exponent: wire.exponent,
        };
        if pp.value().to_string() != wire.value {
            return Err(Error::MalformedInput(format!(
                "value {} is not {}^{}",
                wire.value, pp.prime, pp.exponent
            )));
        }
        Ok(pp)
    }
}

impl PrimePower {
    pub fn value(&self) -> BigUint {
        self.prime.pow(self.exponent)
    }
}

/// Canonical form of a finitely generated Abelian group: free rank plus a
/// multiset of prime-power torsion factors. Stored sorted so that equal
/// groups compare equal.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimaryDecomposition {
    pub free_rank: usize,
    pub torsion: Vec<PrimePower>,
}

impl PrimaryDecomposition {
    pub fn new(free_rank: usize, mut torsion: Vec<PrimePower>) -> Self {
        torsion.sort();
        PrimaryDecomposition { free_rank, torsion }
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    /// Recombine the prime powers into an invariant-factor list. Inverse of
    /// [`primary_decomposition`] up to dropped 1-factors and reordering.
    pub fn invariant_factors(&self) -> Vec<BigUint> {
        let mut by_prime: Vec<Vec<&PrimePower>> = Vec::new();
        let mut current_prime: Option<&BigUint> = None;
        for pp in &self.torsion {
            if current_prime == Some(&pp.prime) {
                by_prime.last_mut().unwrap().push(pp);
            } else {
                current_prime = Some(&pp.prime);
                by_prime.push(vec![pp]);
            }
        }
        // largest exponents multiply into the last invariant factor
        let depth = by_prime.iter().map(|v| v.len()).max().unwrap_or(0);
        let mut factors = vec![BigUint::one(); depth];
        for group in &by_prime {
            // group is sorted ascending by exponent
            for (slot, pp) in group.iter().rev().enumerate() {
                let idx = depth - 1 - slot;
                factors[idx] *= pp.value();
            }
        }
        factors
    }
}

/// Split invariant factors into prime powers: factors of 1 vanish, 0 counts
/// toward the free rank, everything else factors into Z_{p^a} summands.
pub fn primary_decomposition(
    invariant_factors: &[BigInt],
    free_rank: usize,
) -> PrimaryDecomposition {
    let mut rank = free_rank;
    let mut torsion = Vec::new();
    for d in invariant_factors {
        debug_assert!(!d.is_negative(), "invariant factors are nonnegative");
        if d.is_zero() {
            rank += 1;
            continue;
        }
        if d.is_one() {
            continue;
        }
        let value = d.magnitude().clone();
        for (prime, exponent) in factorize(&value) {
            torsion.push(PrimePower { prime, exponent });
        }
    }
    PrimaryDecomposition::new(rank, torsion)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pp(p: u64, e: u32) -> PrimePower {
        PrimePower {
            prime: BigUint::from(p),
            exponent: e,
        }
    }

    #[test]
    fn invariant_factors_1_6_split() {
        let d = primary_decomposition(&[BigInt::from(1), BigInt::from(6)], 0);
        assert_eq!(d.free_rank, 0);
        assert_eq!(d.torsion, vec![pp(2, 1), pp(3, 1)]);
    }

    #[test]
    fn twelve_splits_into_4_and_3() {
        let d = primary_decomposition(&[BigInt::from(12)], 0);
        assert_eq!(d.torsion, vec![pp(2, 2), pp(3, 1)]);
    }

    #[test]
    fn zeros_count_toward_free_rank() {
        let d = primary_decomposition(&[BigInt::zero(), BigInt::zero()], 1);
        assert_eq!(d.free_rank, 3);
        assert!(d.torsion.is_empty());
    }

    #[test]
    fn presentation_pipeline_diag_2_3() {
        let p = FgAbelianPresentation::direct_sum(0, &[2, 3]);
        let d = p.primary_decomposition();
        assert_eq!(d.free_rank, 0);
        assert_eq!(d.torsion, vec![pp(2, 1), pp(3, 1)]);
    }

    #[test]
    fn free_group_of_rank_three() {
        let p = FgAbelianPresentation::from_document(&PresentationDocument {
            generators: 3,
            relations: vec![],
        })
        .unwrap();
        let d = p.primary_decomposition();
        assert_eq!(d.free_rank, 3);
        assert!(d.torsion.is_empty());
    }

    #[test]
    fn recombination_reproduces_invariant_factors() {
        let d = PrimaryDecomposition::new(0, vec![pp(2, 2), pp(2, 1), pp(3, 1), pp(5, 1)]);
        let factors = d.invariant_factors();
        let values: Vec<u64> = factors.iter().map(|f| u64::try_from(f).unwrap()).collect();
        // Z_4+Z_2+Z_3+Z_5 has invariant factors (2, 60)
        assert_eq!(values, vec![2, 60]);
    }

    #[test]
    fn multiset_order_independent() {
        let a = PrimaryDecomposition::new(1, vec![pp(3, 1), pp(2, 1)]);
        let b = PrimaryDecomposition::new(1, vec![pp(2, 1), pp(3, 1)]);
        assert_eq!(a, b);
    }
}

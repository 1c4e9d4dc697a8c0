//! Finite truncations of l2(G).
//!
//! A concrete group (free Abelian, free, or a finite product of cyclic
//! groups) is truncated to the ball of elements of word length at most R
//! under the standard generating set. The ball enumerates a finite slice of
//! the Hilbert basis {e_h}, and [`TruncatedVector`] carries finitely
//! supported coefficients over it. Inner products and norms use
//! order-independent summation, so the unordered-summation semantics of
//! l2(G) survive truncation as a testable contract.

mod ball;
pub mod summation;
mod vector;

pub use ball::{Ball, BallDescriptor, DEFAULT_BALL_CAP};
pub use vector::TruncatedVector;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The concrete groups whose l2 spaces we truncate.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GroupKind {
    /// Z^r under the standard basis generators.
    FreeAbelian(usize),
    /// Free group on k generators; elements are reduced words.
    Free(usize),
    /// Z_{m_1} x ... x Z_{m_k}; elements are residue vectors.
    FiniteCyclicProduct(Vec<u64>),
}

impl std::fmt::Display for GroupKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            GroupKind::FreeAbelian(r) => write!(f, "Z^{r}"),
            GroupKind::Free(k) => write!(f, "F_{k}"),
            GroupKind::FiniteCyclicProduct(moduli) => {
                let parts: Vec<String> = moduli.iter().map(|m| format!("Z_{m}")).collect();
                write!(f, "{}", parts.join(" x "))
            }
        }
    }
}

/// An element of one of the [`GroupKind`] groups.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GroupElement {
    /// Exponent vector in Z^r.
    FreeAbelian(Vec<i64>),
    /// Reduced word: no letter is followed by its inverse.
    Free(Vec<Letter>),
    /// Residues, each within its modulus.
    CyclicProduct(Vec<u64>),
}

/// A single generator or inverse-generator occurrence in a word.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Letter {
    pub generator: usize,
    pub inverse: bool,
}

impl Letter {
    /// Alphabet position: generators first, then their inverses.
    fn key(self, rank: usize) -> usize {
        if self.inverse {
            rank + self.generator
        } else {
            self.generator
        }
    }

    fn inverted(self) -> Self {
        Letter {
            generator: self.generator,
            inverse: !self.inverse,
        }
    }
}

impl GroupKind {
    pub fn validate(&self) -> Result<()> {
        match self {
            GroupKind::FreeAbelian(rank) | GroupKind::Free(rank) if *rank == 0 => Err(
                Error::InvalidArgument("group rank must be at least 1".into()),
            ),
            GroupKind::FiniteCyclicProduct(moduli) if moduli.is_empty() => Err(
                Error::InvalidArgument("cyclic product needs at least one modulus".into()),
            ),
            GroupKind::FiniteCyclicProduct(moduli) if moduli.iter().any(|&m| m < 2) => Err(
                Error::InvalidArgument("cyclic moduli must be at least 2".into()),
            ),
            _ => Ok(()),
        }
    }

    pub fn identity(&self) -> GroupElement {
        match self {
            GroupKind::FreeAbelian(rank) => GroupElement::FreeAbelian(vec![0; *rank]),
            GroupKind::Free(_) => GroupElement::Free(Vec::new()),
            GroupKind::FiniteCyclicProduct(moduli) => {
                GroupElement::CyclicProduct(vec![0; moduli.len()])
            }
        }
    }

    /// Check that `g` is a well-formed element of this group.
    pub fn contains(&self, g: &GroupElement) -> bool {
        match (self, g) {
            (GroupKind::FreeAbelian(rank), GroupElement::FreeAbelian(v)) => v.len() == *rank,
            (GroupKind::Free(rank), GroupElement::Free(word)) => {
                word.iter().all(|l| l.generator < *rank)
                    && word.windows(2).all(|w| w[1] != w[0].inverted())
            }
            (GroupKind::FiniteCyclicProduct(moduli), GroupElement::CyclicProduct(r)) => {
                r.len() == moduli.len() && r.iter().zip(moduli).all(|(ri, mi)| ri < mi)
            }
            _ => false,
        }
    }

    /// Group operation a * b.
    pub fn compose(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
        self.check_member(a)?;
        self.check_member(b)?;
        Ok(match (self, a, b) {
            (
                GroupKind::FreeAbelian(_),
                GroupElement::FreeAbelian(x),
                GroupElement::FreeAbelian(y),
            ) => GroupElement::FreeAbelian(x.iter().zip(y).map(|(u, v)| u + v).collect()),
            (GroupKind::Free(_), GroupElement::Free(x), GroupElement::Free(y)) => {
                let mut word = x.clone();
                for &letter in y {
                    if word.last() == Some(&letter.inverted()) {
                        word.pop();
                    } else {
                        word.push(letter);
                    }
                }
                GroupElement::Free(word)
            }
            (
                GroupKind::FiniteCyclicProduct(moduli),
                GroupElement::CyclicProduct(x),
                GroupElement::CyclicProduct(y),
            ) => GroupElement::CyclicProduct(
                x.iter()
                    .zip(y)
                    .zip(moduli)
                    .map(|((u, v), m)| (u + v) % m)
                    .collect(),
            ),
            _ => unreachable!("membership checked above"),
        })
    }

    pub fn inverse(&self, g: &GroupElement) -> Result<GroupElement> {
        self.check_member(g)?;
        Ok(match (self, g) {
            (GroupKind::FreeAbelian(_), GroupElement::FreeAbelian(v)) => {
                GroupElement::FreeAbelian(v.iter().map(|x| -x).collect())
            }
            (GroupKind::Free(_), GroupElement::Free(word)) => {
                GroupElement::Free(word.iter().rev().map(|l| l.inverted()).collect())
            }
            (GroupKind::FiniteCyclicProduct(moduli), GroupElement::CyclicProduct(r)) => {
                GroupElement::CyclicProduct(
                    r.iter()
                        .zip(moduli)
                        .map(|(ri, mi)| if *ri == 0 { 0 } else { mi - ri })
                        .collect(),
                )
            }
            _ => unreachable!("membership checked above"),
        })
    }

    /// Word length under the standard generating set.
    pub fn word_length(&self, g: &GroupElement) -> Result<u32> {
        self.check_member(g)?;
        Ok(match (self, g) {
            (GroupKind::FreeAbelian(_), GroupElement::FreeAbelian(v)) => {
                v.iter().map(|x| x.unsigned_abs() as u32).sum()
            }
            (GroupKind::Free(_), GroupElement::Free(word)) => word.len() as u32,
            (GroupKind::FiniteCyclicProduct(moduli), GroupElement::CyclicProduct(r)) => r
                .iter()
                .zip(moduli)
                .map(|(ri, mi)| (*ri).min(mi - ri) as u32)
                .sum(),
            _ => unreachable!("membership checked above"),
        })
    }

    /// Canonical letter spelling used for the ball order: per-generator runs,
    /// generators ranked before inverses.
    fn canonical_letters(&self, g: &GroupElement) -> Vec<usize> {
        match (self, g) {
            (GroupKind::FreeAbelian(rank), GroupElement::FreeAbelian(v)) => {
                let mut letters = Vec::new();
                for (i, &x) in v.iter().enumerate() {
                    let l = Letter {
                        generator: i,
                        inverse: x < 0,
                    };
                    letters.extend(std::iter::repeat_n(l.key(*rank), x.unsigned_abs() as usize));
                }
                letters
            }
            (GroupKind::Free(rank), GroupElement::Free(word)) => {
                word.iter().map(|l| l.key(*rank)).collect()
            }
            (GroupKind::FiniteCyclicProduct(moduli), GroupElement::CyclicProduct(r)) => {
                let rank = moduli.len();
                let mut letters = Vec::new();
                for (i, (&ri, &mi)) in r.iter().zip(moduli).enumerate() {
                    // spell via the shorter arc, generator on ties
                    let (count, inverse) = if ri <= mi - ri {
                        (ri, false)
                    } else {
                        (mi - ri, true)
                    };
                    let l = Letter {
                        generator: i,
                        inverse,
                    };
                    letters.extend(std::iter::repeat_n(l.key(rank), count as usize));
                }
                letters
            }
            _ => unreachable!("callers validate membership"),
        }
    }

    /// Deterministic ball order: word length, then lexicographic spelling.
    pub fn sort_key(&self, g: &GroupElement) -> (u32, Vec<usize>) {
        let length = self
            .word_length(g)
            .expect("sort_key requires a member element");
        (length, self.canonical_letters(g))
    }

    fn check_member(&self, g: &GroupElement) -> Result<()> {
        if self.contains(g) {
            Ok(())
        } else {
            Err(Error::ElementMismatch(format!("{g:?} not in {self:?}")))
        }
    }
}

impl GroupElement {
    /// Convenience constructor for Z^r vectors.
    pub fn free_abelian(v: impl Into<Vec<i64>>) -> Self {
        GroupElement::FreeAbelian(v.into())
    }

    /// Convenience constructor for residue vectors.
    pub fn cyclic(v: impl Into<Vec<u64>>) -> Self {
        GroupElement::CyclicProduct(v.into())
    }

    /// Reduced word from signed generator indices (1-based; negative = inverse).
    pub fn word(signed: &[i32]) -> Self {
        let letters = signed
            .iter()
            .map(|&s| {
                assert!(s != 0, "generator indices are 1-based and nonzero");
                Letter {
                    generator: (s.unsigned_abs() - 1) as usize,
                    inverse: s < 0,
                }
            })
            .collect();
        GroupElement::Free(letters)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_word_reduction() {
        let kind = GroupKind::Free(2);
        let a = GroupElement::word(&[1, 2]);
        let b = GroupElement::word(&[-2, -1]);
        assert_eq!(kind.compose(&a, &b).unwrap(), kind.identity());
        assert_eq!(kind.inverse(&a).unwrap(), b);
    }

    #[test]
    fn cyclic_word_length_uses_shorter_arc() {
        let kind = GroupKind::FiniteCyclicProduct(vec![6]);
        assert_eq!(kind.word_length(&GroupElement::cyclic([5])).unwrap(), 1);
        assert_eq!(kind.word_length(&GroupElement::cyclic([3])).unwrap(), 3);
    }

    #[test]
    fn free_abelian_length_is_l1() {
        let kind = GroupKind::FreeAbelian(3);
        let g = GroupElement::free_abelian([2, -1, 0]);
        assert_eq!(kind.word_length(&g).unwrap(), 3);
    }

    #[test]
    fn membership_rejects_unreduced_words() {
        let kind = GroupKind::Free(2);
        let unreduced = GroupElement::Free(vec![
            Letter {
                generator: 0,
                inverse: false,
            },
            Letter {
                generator: 0,
                inverse: true,
            },
        ]);
        assert!(!kind.contains(&unreduced));
    }

    #[test]
    fn generators_sort_before_inverses() {
        let kind = GroupKind::FreeAbelian(1);
        let pos = kind.sort_key(&GroupElement::free_abelian([1]));
        let neg = kind.sort_key(&GroupElement::free_abelian([-1]));
        assert!(pos < neg);
    }
}

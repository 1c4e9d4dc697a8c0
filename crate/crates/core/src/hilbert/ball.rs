use std::collections::HashMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hilbert::{GroupElement, GroupKind, Letter};

/// Default cap on ball sizes; free-group balls grow exponentially and we
/// want the failure to be loud and early.
pub const DEFAULT_BALL_CAP: usize = 1_000_000;

/// All elements of word length at most `radius`, in a deterministic order:
/// word length first, then lexicographic spelling with generators ranked
/// before inverses. The identity is always at position 0 and the ball is
/// closed under inversion.
#[derive(Debug, PartialEq, Eq)]
pub struct Ball {
    kind: GroupKind,
    radius: u32,
    elements: Vec<GroupElement>,
    index: HashMap<GroupElement, usize>,
    lengths: Vec<u32>,
}

/// Serializable identification of a ball; two balls with equal descriptors
/// enumerate identical element lists.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BallDescriptor {
    pub kind: GroupKind,
    pub radius: u32,
}

impl Ball {
    /// Enumerate the ball of `kind` at `radius` under the default size cap.
    pub fn enumerate(kind: GroupKind, radius: u32) -> Result<Arc<Ball>> {
        Self::enumerate_with_cap(kind, radius, DEFAULT_BALL_CAP)
    }

    /// Enumerate with an explicit size cap.
    pub fn enumerate_with_cap(kind: GroupKind, radius: u32, cap: usize) -> Result<Arc<Ball>> {
        kind.validate()?;
        let mut elements = match &kind {
            GroupKind::FreeAbelian(rank) => free_abelian_ball(*rank, radius, cap)?,
            GroupKind::Free(rank) => free_ball(*rank, radius, cap)?,
            GroupKind::FiniteCyclicProduct(moduli) => cyclic_ball(moduli, radius, cap)?,
        };
        if elements.len() > cap {
            return Err(Error::BallCapExceeded {
                kind: format!("{kind:?}"),
                radius,
                size: elements.len(),
                cap,
            });
        }
        elements.sort_by_cached_key(|g| kind.sort_key(g));
        let index = elements
            .iter()
            .enumerate()
            .map(|(i, g)| (g.clone(), i))
            .collect();
        let lengths = elements
            .iter()
            .map(|g| kind.word_length(g).expect("enumerated element"))
            .collect();
        Ok(Arc::new(Ball {
            kind,
            radius,
            elements,
            index,
            lengths,
        }))
    }

    pub fn kind(&self) -> &GroupKind {
        &self.kind
    }

    pub fn radius(&self) -> u32 {
        self.radius
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    pub fn element(&self, position: usize) -> &GroupElement {
        &self.elements[position]
    }

    /// Position of `g` in the ball, if it lies within the radius.
    pub fn position(&self, g: &GroupElement) -> Option<usize> {
        self.index.get(g).copied()
    }

    /// Word length of the element at `position`.
    pub fn length_at(&self, position: usize) -> u32 {
        self.lengths[position]
    }

    /// Positions of all elements of word length at most `r`. Because the
    /// ball is sorted by length these form a prefix.
    pub fn prefix_within(&self, r: u32) -> usize {
        self.lengths.partition_point(|&l| l <= r)
    }

    pub fn descriptor(&self) -> BallDescriptor {
        BallDescriptor {
            kind: self.kind.clone(),
            radius: self.radius,
        }
    }

    /// Two balls index the same space iff their descriptors agree.
    pub fn same_space(&self, other: &Ball) -> bool {
        self.kind == other.kind && self.radius == other.radius
    }
}

fn free_abelian_ball(rank: usize, radius: u32, cap: usize) -> Result<Vec<GroupElement>> {
    let mut out = Vec::new();
    let mut current = vec![0i64; rank];
    fill_lattice(&mut out, &mut current, 0, radius as i64, rank, radius, cap)?;
    Ok(out)
}

fn fill_lattice(
    out: &mut Vec<GroupElement>,
    current: &mut Vec<i64>,
    coord: usize,
    budget: i64,
    rank: usize,
    radius: u32,
    cap: usize,
) -> Result<()> {
    if coord == rank {
        if out.len() >= cap {
            return Err(Error::BallCapExceeded {
                kind: format!("{:?}", GroupKind::FreeAbelian(rank)),
                radius,
                size: out.len() + 1,
                cap,
            });
        }
        out.push(GroupElement::FreeAbelian(current.clone()));
        return Ok(());
    }
    for v in -budget..=budget {
        current[coord] = v;
        fill_lattice(out, current, coord + 1, budget - v.abs(), rank, radius, cap)?;
    }
    current[coord] = 0;
    Ok(())
}

fn free_ball(rank: usize, radius: u32, cap: usize) -> Result<Vec<GroupElement>> {
    let mut out = vec![GroupElement::Free(Vec::new())];
    let mut frontier = vec![Vec::<Letter>::new()];
    for _ in 0..radius {
        let mut next = Vec::new();
        for word in &frontier {
            for generator in 0..rank {
                for inverse in [false, true] {
                    let letter = Letter { generator, inverse };
                    if word.last() == Some(&letter.inverted()) {
                        continue;
                    }
                    let mut extended = word.clone();
                    extended.push(letter);
                    if out.len() + next.len() >= cap {
                        return Err(Error::BallCapExceeded {
                            kind: format!("{:?}", GroupKind::Free(rank)),
                            radius,
                            size: out.len() + next.len() + 1,
                            cap,
                        });
                    }
                    next.push(extended);
                }
            }
        }
        out.extend(next.iter().cloned().map(GroupElement::Free));
        frontier = next;
    }
    Ok(out)
}

fn cyclic_ball(moduli: &[u64], radius: u32, cap: usize) -> Result<Vec<GroupElement>> {
    let mut out = Vec::new();
    let mut current = vec![0u64; moduli.len()];
    fill_residues(&mut out, &mut current, 0, radius, moduli, radius, cap)?;
    Ok(out)
}

fn fill_residues(
    out: &mut Vec<GroupElement>,
    current: &mut Vec<u64>,
    coord: usize,
    budget: u32,
    moduli: &[u64],
    radius: u32,
    cap: usize,
) -> Result<()> {
    if coord == moduli.len() {
        if out.len() >= cap {
            return Err(Error::BallCapExceeded {
                kind: format!("{:?}", GroupKind::FiniteCyclicProduct(moduli.to_vec())),
                radius,
                size: out.len() + 1,
                cap,
            });
        }
        out.push(GroupElement::CyclicProduct(current.clone()));
        return Ok(());
    }
    let m = moduli[coord];
    for r in 0..m {
        let length = r.min(m - r) as u32;
        if length > budget {
            continue;
        }
        current[coord] = r;
        fill_residues(
            out,
            current,
            coord + 1,
            budget - length,
            moduli,
            radius,
            cap,
        )?;
    }
    current[coord] = 0;
    Ok(())
}

//! Finitely generated Abelian groups acting freely and isometrically on the
//! unit sphere of a separable Hilbert space.
//!
//! The crate answers one decision question — which finitely generated
//! Abelian groups admit a free, properly discontinuous isometric action on
//! the unit sphere — and backs the positive answer with an explicit,
//! numerically checkable construction:
//!
//! * [`groups`] turns integer relation matrices into invariant factors and
//!   prime-power decompositions, and screens finite multiplication tables
//!   against necessary conditions for free actions.
//! * [`decision`] applies the distinct-torsion-primes criterion and emits a
//!   machine-readable verdict with a witness on refusal.
//! * [`hilbert`] models finite truncations of the square-summable space on
//!   a countable group, with order-independent exact inner products.
//! * [`operators`] builds the isometries themselves: basis translations,
//!   exact planar rotations, and their block-diagonal combinations.
//! * [`verify`] samples the constructed action and reports isometry,
//!   freeness, and orbit-separation margins as a structured document.

pub mod decision;
pub mod error;
pub mod groups;
pub mod hilbert;
pub mod operators;
pub mod verify;

pub use decision::{check_distinct_primes, decide_decomposition, decide_fg_abelian, Verdict};
pub use error::{Error, Result};
pub use groups::{
    factorize, smith_normal_form, CayleyTable, FgAbelianPresentation, PrimaryDecomposition,
    PrimePower, ScreeningReport, SmithNormalForm, Violation,
};
pub use hilbert::{Ball, GroupElement, GroupKind, TruncatedVector};
pub use operators::{ExactAngle, SphereIsometry};
pub use verify::{verify_construction, VerificationConfig, VerificationReport};

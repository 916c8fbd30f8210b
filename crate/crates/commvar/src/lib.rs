//! Commutator level sets in SU(2)², explicit homeomorphisms X_θ ≅ RP³,
//! retractions and gradient flow on the pair space, and a small graded
//! homological-algebra engine for Mayer–Vietoris, Bockstein and Gysin
//! bookkeeping.

pub mod error;
pub mod geom;
pub mod gradflow;
pub mod homalg;
pub mod homeo;
pub mod quat;
pub mod retract;
pub mod tol;
pub mod verify;
pub mod waves;

#[cfg(feature = "cli")]
pub mod cli;

pub use error::{Error, Result};
pub use quat::{GroupElement, LieVector, ProjectivePoint, Quaternion, TorusElement};
pub use tol::Tolerances;

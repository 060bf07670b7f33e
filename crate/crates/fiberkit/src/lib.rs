//! Rigid circle fiberings of `S^1 x S^2` driven by based loops in `SO(3)`.
//!
//! The library models:
//!
//! * exact-formula algebra on `S^3`, `SO(3)`, `O(3)` and `O(2)` ([`rotation`]),
//! * based loops in `SO(3)` as sign-consistent sampled quaternion lifts, with
//!   concatenation, transport and homotopy-class detection through the double
//!   cover `S^3 -> SO(3)` ([`loops`]),
//! * the rigid diffeomorphism group `O(2) x Omega'O(3)` of `S^1 x S^2` and its
//!   factorization into `O(2) x O(3) x Omega SO(3)` ([`diffeo`]),
//! * rigid circle fiberings of `S^1 x S^2`, the group action on them, and the
//!   local trivialization of the rigid group over the fibering space
//!   ([`fibering`]),
//! * reduced-product words on `S^2`, the meridian-loop maps, and the Gluck
//!   generator families for both loop components ([`james`]),
//! * the canonical deformation of circle-valued maps on the sphere to
//!   constants by average-value lifting ([`nullhomotopy`]).
//!
//! Randomized verification suites live in [`verify`]; the `fiberkit` binary
//! exposes fiber export, classification, family generation, and the suites.

// numeric guards are written as negated comparisons (`!(x < tol)`) so NaN
// takes the rejecting branch
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod diffeo;
pub mod export;
pub mod fibering;
pub mod james;
pub mod loops;
pub mod loopspec;
pub mod nullhomotopy;
pub mod rotation;
pub mod verify;

pub use diffeo::{RigidDiffeo, RigidTriple};
pub use fibering::{FiberCurve, Fibering};
pub use james::{GeneratorFamily, JamesWord, SphereGrid};
pub use loops::{ComponentClass, LoopSO3, RotationPath};
pub use rotation::{CircleMap, OrthogonalMap3, Rotation, S2Point, Sign, UnitQuaternion};

/// Tolerance conventions used throughout.
///
/// Algebraic identities (quaternion products, orthogonal-map composition)
/// are held to `ALGEBRA`; comparisons between sampled loops, which carry
/// discretization error, are held to `LOOP` (radians).
pub mod tol {
    /// Pointwise algebraic tolerance.
    pub const ALGEBRA: f64 = 1e-9;
    /// Loop comparison tolerance, in radians of geodesic distance.
    pub const LOOP: f64 = 1e-6;
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("insufficient resolution: {0}")]
    InsufficientResolution(String),
    #[error("invalid loop: {0}")]
    InvalidLoop(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("map is not liftable: {0}")]
    NonLiftable(String),
    #[error("malformed spec: {0}")]
    MalformedSpec(String),
    #[error("verification failed: {0}")]
    VerificationFailed(String),
}

pub type Result<T> = std::result::Result<T, Error>;

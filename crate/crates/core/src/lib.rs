//! Exact computational engine for Riemannian geometry presented on
//! anholonomic frames with constant structure coefficients.
//!
//! The crate computes Levi-Civita connections, curvature tensors, the two
//! fundamental tensors of a submersion split, and solves the
//! eta-Ricci-Yamabe soliton equation exactly over the field Q(sqrt 2).
//! Manifolds enter as JSON manifests; claimed values carried by a manifest
//! are compared against engine results in a verification ledger.

pub mod frame;
pub mod harmonic;
pub mod ledger;
pub mod linalg;
pub mod manifest;
pub mod report;
pub mod scalar;
pub mod soliton;
pub mod submersion;

pub mod cli;

pub use frame::{CurvaturePackage, FrameManifold, FrameVectorField};
pub use scalar::Scalar;
pub use soliton::{Classification, SolitonParams, SolitonSolution};
pub use submersion::{ONeillTensors, SubmersionSplit};

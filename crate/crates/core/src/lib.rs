//! Numerical laboratory for sharp stability estimates in L_p Brunn-Minkowski
//! theory.
//!
//! The crate has four kernels:
//!
//! - [`jensen`]: the sharpened Jensen inequality for Tsallis entropy on
//!   finite probability spaces, its two-parameter reduction, and the
//!   logarithmic limit;
//! - [`geom`]: an exact planar convex-body engine (polygons, support
//!   oracles, Firey L_p combinations, hulls, clipping, symmetric
//!   differences);
//! - [`mixed`]: L_p mixed volumes, the deficits `delta_p` and `beta_p`,
//!   relative asymmetry, the two stability checks, and the full per-step
//!   derivation margins;
//! - [`sharpness`]: closed-form deficits and asymmetries for translated
//!   balls in any dimension, with scans that confirm the quadratic scaling
//!   of both sides of the stability bounds.
//!
//! Everything is pure and deterministic; randomized suites draw per-instance
//! seeds from [`sample`].

pub mod error;
pub mod geom;
pub mod jensen;
pub mod mixed;
pub mod quad;
pub mod report;
pub mod sample;
pub mod sharpness;
pub mod special;

pub use error::{Error, Result};
pub use geom::{Body, Polygon, SurfaceMeasure, Vec2};
pub use jensen::{DiscreteDistribution, JensenReport, PsiGridScan};
pub use mixed::{ProofChainReport, ProofSteps, StabilityReport};
pub use sharpness::EpsilonScan;

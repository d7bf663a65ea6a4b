//! Birkhoff-orthogonality geometric constants of planar normed spaces.
//!
//! The central quantity is the Heinz mean constant
//!
//! ```text
//! H_ν(X,B) = sup { (‖x+y‖^ν ‖x−y‖^{1−ν} + ‖x+y‖^{1−ν} ‖x−y‖^ν) / 2 : x, y ∈ S_X, x ⊥_B y }
//! ```
//!
//! together with the James, Schäffer, A₂, rectangular constants and the
//! Birkhoff moduli δ_B, ρ_B. Modules:
//!
//! - [`norm`], [`norm_spec`]: planar norms and their text format
//! - [`birkhoff`]: numerical Birkhoff orthogonality and companion arcs
//! - [`constants`]: grid-and-refine estimators
//! - [`verify`]: inequality catalog with signed margins
//! - [`cli`], [`svg`]: command-line front end and figures

pub mod birkhoff;
pub mod cli;
pub mod constants;
pub mod geometry;
pub mod norm;
pub mod norm_spec;
pub mod svg;
pub mod verify;

pub use birkhoff::{companion_arcs, defect, is_orthogonal, minimize_lambda, CompanionArc, OrthoPair};
pub use constants::{
    classify_nonsquare, estimate_constant, heinz_mean, pair_objective, radon_defect, ConstantEstimate,
    ConstantKind, Estimator, GridParams, NonSquareClass,
};
pub use geometry::Point2;
pub use norm::{Norm, NormError, SpherePoint};
pub use norm_spec::{parse_norm_spec, SpecError};

pub use verify::{run_checks, VerificationReport};

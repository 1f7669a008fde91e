//! Numerical verification toolkit for sharp Fourier inequalities on binary
//! cubes.
//!
//! The crate verifies, at machine precision with explicit tolerances, the
//! family of statements behind the sharp Hausdorff–Young and diagonal Young
//! convolution inequalities for functions supported in {0,1}^d: endpoint
//! exponent curves and region geometry, the one- and two-variable extremal
//! functions F_q and G_q with their ODE/PDE identities, cosh inequalities
//! and a Lipschitz-grid certificate, generalized additive energies,
//! entropic uncertainty, and entropy-of-sum bounds.
//!
//! Every suite produces a [`report::Report`] that serializes to canonical
//! JSON; the companion CLI exposes the suites as batch subcommands.

pub mod certify;
pub mod cube;
pub mod entropy;
pub mod error;
pub mod fourpoint;
pub mod integrate;
pub mod regions;
pub mod report;
pub mod specfun;
pub mod tolerances;
pub mod twopoint;

pub use error::{Error, Result};
pub use integrate::{IntegralEstimate, Method, QuadratureSpec};
pub use regions::{Exponent, ExponentPair, Regime};
pub use report::{Check, Report, Verdict};

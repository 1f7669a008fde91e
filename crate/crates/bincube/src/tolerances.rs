//! The tolerance table: every default threshold used by the verification
//! checks, in one place. The acceptance suite pins these values; checks
//! reference them by name rather than repeating literals.
//!
//! Deterministic quadrature paths compare against fixed slacks; the
//! statistical paths widen them by three times the reported error bound
//! at the call site.

/// Absolute quadrature target for extremal-function moments.
pub const MOMENT_QUADRATURE_ABS: f64 = 1e-12;

/// Relative quadrature target keeping large moments above the f64
/// rounding floor.
pub const MOMENT_QUADRATURE_REL: f64 = 1e-13;

/// Slack on the bound F_q <= 1.
pub const F_MAX_SLACK: f64 = 1e-10;

/// Agreement between the direct quadrature of F_q and its
/// Legendre-function representation.
pub const F_LEGENDRE_TOL: f64 = 1e-9;

/// Relative slack for the two-point inequality verdict.
pub const TWO_POINT_SLACK: f64 = 1e-10;

/// Relative tolerance at which two sides count as an equality case.
pub const EQUALITY_TOL: f64 = 1e-10;

/// Slack on the bound G_q <= 1.
pub const G_MAX_SLACK: f64 = 1e-10;

/// Relative slack for the four-point inequality verdict.
pub const FOUR_POINT_SLACK: f64 = 1e-12;

/// Rounding slack for the printed form of the primary cosh inequality.
pub const COSH_PRINTED_SLACK: f64 = 1e-12;

/// Margin required of strict inequalities between smooth functions.
pub const STRICTNESS_MARGIN: f64 = 1e-12;

/// Band around (1/2) log2 t containing the duality gap on [2, 512].
pub const DUALITY_GAP_DEVIATION_BOUND: f64 = 1.0;

/// Forward-error pad recorded by the reference grid certificate.
pub const CERTIFICATE_EVAL_PAD: f64 = 1e-6;

/// Floor of the transform-ratio pass tolerance (widened by 3x the
/// quadrature error bound).
pub const HY_RATIO_SLACK: f64 = 1e-9;

/// Pass tolerance for the exact-sum convolution ratio.
pub const YOUNG_RATIO_SLACK: f64 = 1e-10;

/// Relative slack on the sharp energy bounds (widened by 3x the error
/// bound on quadrature paths).
pub const ENERGY_BOUND_SLACK: f64 = 1e-9;

/// Floor of the uncertainty-bound pass tolerance.
pub const UNCERTAINTY_SLACK: f64 = 1e-7;

/// Slack on the exact-sum entropy inequalities.
pub const ENTROPY_SUM_SLACK: f64 = 1e-10;

/// Scaled ODE residual allowed across the (q, x) battery.
pub const ODE_RESIDUAL_BOUND: f64 = 1e-7;

/// Scaled PDE residual allowed across the random battery.
pub const PDE_RESIDUAL_BOUND: f64 = 1e-9;

//! Exponent-region geometry: endpoint curves, membership predicates for the
//! four exponent regions, and the analytic facts about the Hausdorff–Young
//! boundary (monotonicity, sub-Hölder strictness, trigamma convexity,
//! logarithmic growth of the duality gap).

use std::f64::consts::LN_2;

use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, Error, Result};
use crate::report::{Check, Report};
use crate::specfun::{log2_binom_gen, trigamma};

/// A Lebesgue exponent in [1, ∞]; infinity is a distinguished variant, not
/// a large float.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Exponent {
    Finite(f64),
    Infinite,
}

impl Exponent {
    pub fn new(value: f64) -> Result<Self> {
        ensure_finite("exponent", value)?;
        if value < 1.0 {
            return Err(Error::domain(format!("exponent must be >= 1, got {value}")));
        }
        Ok(Exponent::Finite(value))
    }

    /// The reciprocal 1/p, with 1/∞ = 0.
    pub fn inv(self) -> f64 {
        match self {
            Exponent::Finite(p) => 1.0 / p,
            Exponent::Infinite => 0.0,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Exponent::Infinite)
    }
}

/// Which of the four inequality families an exponent pair refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// Hausdorff–Young for general discrete functions.
    HyClassical,
    /// Hausdorff–Young for functions supported in the binary cube.
    HyBinary,
    /// Diagonal Young convolution for general discrete functions.
    YoungClassical,
    /// Diagonal Young convolution on the binary cube.
    YoungBinary,
}

/// An exponent pair (p, q) tagged with its regime.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExponentPair {
    pub p: Exponent,
    pub q: Exponent,
    pub regime: Regime,
}

impl ExponentPair {
    pub fn new(p: Exponent, q: Exponent, regime: Regime) -> Self {
        ExponentPair { p, q, regime }
    }
}

/// The binary Hausdorff–Young endpoint curve p(q) = q / log2 C(q, q/2),
/// defined for q ≥ 2; maps [2, ∞) into (1, 2], with p(2) = 2.
pub fn hy_endpoint_p(q: f64) -> Result<f64> {
    ensure_finite("q", q)?;
    if q < 2.0 {
        return Err(Error::domain(format!(
            "hy endpoint curve is defined for q >= 2, got {q}"
        )));
    }
    Ok(q / log2_binom_gen(q, q / 2.0)?)
}

/// 1/p on the binary Hausdorff–Young boundary: (1/q) log2 C(q, q/2).
pub fn hy_inv_boundary(q: f64) -> Result<f64> {
    ensure_finite("q", q)?;
    if q < 2.0 {
        return Err(Error::domain(format!(
            "hy boundary is defined for q >= 2, got {q}"
        )));
    }
    Ok(log2_binom_gen(q, q / 2.0)? / q)
}

/// log2(2^q + 2), computed without overflow for large q.
fn log2_pow2q_plus_2(q: f64) -> f64 {
    q + (2.0_f64.powf(1.0 - q)).ln_1p() / LN_2
}

/// The binary diagonal-Young endpoint curve p(q) = 2q / log2(2^q + 2),
/// defined for q ≥ 1; satisfies 1 < p < min{q, 2} for q > 1 and p(1) = 1.
pub fn young_endpoint_p(q: f64) -> Result<f64> {
    ensure_finite("q", q)?;
    if q < 1.0 {
        return Err(Error::domain(format!(
            "young endpoint curve is defined for q >= 1, got {q}"
        )));
    }
    Ok(2.0 * q / log2_pow2q_plus_2(q))
}

/// Closed-form derivative of the Young endpoint curve:
/// p'(q) = (p/q)(1 − p·2^q / (2(2^q + 2))).
pub fn young_endpoint_p_prime(q: f64) -> Result<f64> {
    let p = young_endpoint_p(q)?;
    let t = 2.0_f64.powf(q);
    Ok((p / q) * (1.0 - p * t / (2.0 * (t + 2.0))))
}

/// Closed-form second derivative of the Young endpoint curve, obtained by
/// differentiating p = 2q/L with L = log2(2^q + 2) twice.
pub fn young_endpoint_p_second(q: f64) -> Result<f64> {
    ensure_finite("q", q)?;
    if q < 1.0 {
        return Err(Error::domain(format!(
            "young endpoint curve is defined for q >= 1, got {q}"
        )));
    }
    let l = log2_pow2q_plus_2(q);
    let t = 2.0_f64.powf(q);
    let lp = t / (t + 2.0);
    let lpp = 2.0 * t * LN_2 / ((t + 2.0) * (t + 2.0));
    Ok(-4.0 * lp / (l * l) - 2.0 * q * lpp / (l * l) + 4.0 * q * lp * lp / (l * l * l))
}

/// Rounding forgiveness at the region boundary: a reciprocal computed as
/// 1/(q/L) differs from L/q by a few ulp, and endpoint pairs must count
/// as members of their own region.
const BOUNDARY_ULP_FUZZ: f64 = 1e-13;

fn meets_bound(inv_p: f64, bound: f64) -> bool {
    inv_p >= bound - BOUNDARY_ULP_FUZZ * bound.abs().max(1.0)
}

/// Membership predicate for an exponent pair in its regime's sharp range,
/// including the q = ∞ and q < 2 branches. Exact up to a relative
/// boundary fuzz of 1e-13, so endpoint pairs are members of their region
/// despite floating-point rounding.
pub fn in_range(pair: &ExponentPair) -> bool {
    let inv_p = pair.p.inv();
    let inv_q = pair.q.inv();
    match pair.regime {
        Regime::HyClassical => match pair.q {
            Exponent::Infinite => meets_bound(inv_p, 1.0 - inv_q),
            Exponent::Finite(q) if q >= 2.0 => meets_bound(inv_p, 1.0 - inv_q),
            Exponent::Finite(_) => meets_bound(inv_p, 0.5),
        },
        Regime::HyBinary => match pair.q {
            Exponent::Infinite => meets_bound(inv_p, 1.0),
            Exponent::Finite(q) if q >= 2.0 => match hy_inv_boundary(q) {
                Ok(bound) => meets_bound(inv_p, bound),
                Err(_) => false,
            },
            Exponent::Finite(_) => meets_bound(inv_p, 0.5),
        },
        Regime::YoungClassical => meets_bound(2.0 * inv_p, 1.0 + inv_q),
        Regime::YoungBinary => match pair.q {
            Exponent::Infinite => meets_bound(inv_p, 0.5),
            Exponent::Finite(q) => meets_bound(inv_p, log2_pow2q_plus_2(q) / (2.0 * q)),
        },
    }
}

/// Monotone-in-q samples of a regime's boundary in the (1/p, 1/q) square,
/// endpoints included; the piecewise breakpoint at 1/q = 1/2 is always a
/// sample. Serializes to CSV columns (inv_p, inv_q).
pub fn boundary_samples(regime: Regime, resolution: u32) -> Result<Vec<(f64, f64)>> {
    if resolution < 2 {
        return Err(Error::usage(format!(
            "resolution must be at least 2, got {resolution}"
        )));
    }
    let n = resolution as usize;
    let mut grid: Vec<f64> = (0..n).map(|k| k as f64 / (n - 1) as f64).collect();
    if !grid.contains(&0.5) {
        grid.push(0.5);
        grid.sort_by(f64::total_cmp);
    }
    let mut points = Vec::with_capacity(grid.len());
    for inv_q in grid {
        let inv_p = match regime {
            Regime::HyClassical => {
                if inv_q <= 0.5 {
                    1.0 - inv_q
                } else {
                    0.5
                }
            }
            Regime::HyBinary => {
                if inv_q == 0.0 {
                    1.0
                } else if inv_q <= 0.5 {
                    hy_inv_boundary(1.0 / inv_q)?
                } else {
                    0.5
                }
            }
            Regime::YoungClassical => (1.0 + inv_q) / 2.0,
            Regime::YoungBinary => {
                if inv_q == 0.0 {
                    0.5
                } else {
                    let q = 1.0 / inv_q;
                    log2_pow2q_plus_2(q) / (2.0 * q)
                }
            }
        };
        points.push((inv_p, inv_q));
    }
    Ok(points)
}

pub use crate::tolerances::STRICTNESS_MARGIN;

pub use crate::tolerances::DUALITY_GAP_DEVIATION_BOUND;

/// Runs the analytic checks for the Hausdorff–Young boundary on a grid of
/// exponents q in [2, 512]:
///
/// (a) p(q) strictly decreases; (b) q ↦ (1/q) log2 C(q, q/2) strictly
/// increases; (c) 1/p + 1/q < 1 strictly for q > 2 (equality at q = 2 is
/// excluded); (d) the convexity expression
/// (1/(4 ln 2)) (ψ′(t/2 + 1/2) − ψ′(t/2 + 1)) is positive; (e) the duality
/// gap stays within a bounded band of (1/2) log2 t.
pub fn section2_report(q_grid: &[f64]) -> Result<Report> {
    if q_grid.len() < 2 {
        return Err(Error::usage("q grid needs at least two points"));
    }
    for &q in q_grid {
        ensure_finite("q", q)?;
        if !(2.0..=512.0).contains(&q) {
            return Err(Error::usage(format!("grid point {q} outside [2, 512]")));
        }
    }
    let mut sorted = q_grid.to_vec();
    sorted.sort_by(f64::total_cmp);

    let mut report = Report::new("regions.section2")
        .input("q_min", sorted.first().unwrap())
        .input("q_max", sorted.last().unwrap())
        .input("points", sorted.len());

    let mut min_p_decrease = f64::INFINITY;
    let mut min_bound_increase = f64::INFINITY;
    let mut prev: Option<(f64, f64)> = None;
    let mut min_subholder = f64::INFINITY;
    let mut min_convexity = f64::INFINITY;
    let mut max_gap_dev: f64 = 0.0;
    let mut worst_q = sorted[0];

    for &q in &sorted {
        let p = hy_endpoint_p(q)?;
        let bound = hy_inv_boundary(q)?;
        if let Some((pp, pb)) = prev {
            min_p_decrease = min_p_decrease.min(pp - p);
            min_bound_increase = min_bound_increase.min(bound - pb);
        }
        prev = Some((p, bound));
        if q > 2.0 {
            let gap = 1.0 - 1.0 / p - 1.0 / q;
            if gap < min_subholder {
                min_subholder = gap;
                worst_q = q;
            }
        }
        let convexity = (trigamma(q / 2.0 + 0.5)? - trigamma(q / 2.0 + 1.0)?) / (4.0 * LN_2);
        min_convexity = min_convexity.min(convexity);
        let duality_gap = q - 1.0 - q * bound;
        max_gap_dev = max_gap_dev.max((duality_gap - 0.5 * q.log2()).abs());
    }

    report.push(
        Check::lower_bound(
            "a_endpoint_p_strictly_decreasing",
            "hy_endpoint_monotone",
            min_p_decrease,
            STRICTNESS_MARGIN,
            0.0,
        )
        .with_note("min decrement of p(q) across consecutive grid points"),
    );
    report.push(
        Check::lower_bound(
            "b_inv_p_boundary_strictly_increasing",
            "hy_boundary_monotone",
            min_bound_increase,
            STRICTNESS_MARGIN,
            0.0,
        )
        .with_note("min increment of (1/q) log2 C(q, q/2)"),
    );
    report.push(
        Check::lower_bound(
            "c_sub_holder_strict",
            "sub_holder_regime",
            min_subholder,
            STRICTNESS_MARGIN,
            0.0,
        )
        .with_note(format!("tightest at q = {worst_q}")),
    );
    report.push(
        Check::lower_bound(
            "d_convexity_trigamma_positive",
            "duality_gap_convexity",
            min_convexity,
            STRICTNESS_MARGIN,
            0.0,
        )
        .with_note("(1/(4 ln 2)) (psi'(t/2+1/2) - psi'(t/2+1)) > 0"),
    );
    report.push(
        Check::upper_bound(
            "e_duality_gap_log_band",
            "duality_gap_growth",
            max_gap_dev,
            DUALITY_GAP_DEVIATION_BOUND,
            0.0,
        )
        .with_note("sup |gap(t) - (1/2) log2 t| over the grid"),
    );
    Ok(report.finish())
}

/// Log-spaced grid of n points on [lo, hi].
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    assert!(n >= 2 && lo > 0.0 && hi > lo);
    (0..n)
        .map(|k| lo * (hi / lo).powf(k as f64 / (n - 1) as f64))
        .collect()
}

//! The Young-inequality extremal analysis: the two-variable extremal
//! function G_q, the four-point inequality, the cosh inequalities behind
//! the anti-diagonal bound, the endpoint-derivative bounds, the dissecting
//! curves with their polynomial-chain argument, the PDE identity satisfied
//! by G_q, and the center Hessian diagnostics for the three-exponent case.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, Error, Result};
use crate::regions::{self, Exponent, ExponentPair, Regime};
use crate::report::{Check, Report};

pub use crate::tolerances::{COSH_PRINTED_SLACK, FOUR_POINT_SLACK, G_MAX_SLACK};

/// Scalar input of the four-point inequality.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FourPointInput {
    pub alpha0: f64,
    pub alpha1: f64,
    pub beta0: f64,
    pub beta1: f64,
    pub p: f64,
    pub q: f64,
}

impl FourPointInput {
    pub fn new(alpha0: f64, alpha1: f64, beta0: f64, beta1: f64, p: f64, q: f64) -> Result<Self> {
        for (name, v) in [
            ("alpha0", alpha0),
            ("alpha1", alpha1),
            ("beta0", beta0),
            ("beta1", beta1),
            ("p", p),
            ("q", q),
        ] {
            ensure_finite(name, v)?;
        }
        if alpha0 < 0.0 || alpha1 < 0.0 || beta0 < 0.0 || beta1 < 0.0 {
            return Err(Error::domain("four-point inputs must be nonnegative"));
        }
        Ok(FourPointInput {
            alpha0,
            alpha1,
            beta0,
            beta1,
            p,
            q,
        })
    }
}

/// Parameter of a dissecting curve y = a x / (1 − x + a x), a ∈ (0, 1].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurveParam(f64);

impl CurveParam {
    pub fn new(a: f64) -> Result<Self> {
        ensure_finite("a", a)?;
        if !(0.0 < a && a <= 1.0) {
            return Err(Error::domain(format!(
                "curve parameter must lie in (0, 1], got {a}"
            )));
        }
        Ok(CurveParam(a))
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

fn check_q_young(q: f64) -> Result<f64> {
    ensure_finite("q", q)?;
    if q <= 1.0 {
        return Err(Error::domain(format!(
            "young extremal analysis requires q > 1, got {q}"
        )));
    }
    regions::young_endpoint_p(q)
}

fn check_xy_unit(x: f64, y: f64) -> Result<()> {
    ensure_finite("x", x)?;
    ensure_finite("y", y)?;
    if !(0.0..=1.0).contains(&x) || !(0.0..=1.0).contains(&y) {
        return Err(Error::domain(format!(
            "(x, y) must lie in [0,1]^2, got ({x}, {y})"
        )));
    }
    Ok(())
}

/// The two-variable extremal function
/// G_q(x, y) = (1−x)^{q/p}(1−y)^{q/p}
///           + ((1−x)^{1/p} y^{1/p} + x^{1/p} (1−y)^{1/p})^q
///           + x^{q/p} y^{q/p}
/// at the endpoint exponent p = p(q). The inequality under test is
/// G_q ≤ 1 on the unit square, with equality at the four corners and the
/// center.
pub fn g_extremal(q: f64, x: f64, y: f64) -> Result<f64> {
    let p = check_q_young(q)?;
    check_xy_unit(x, y)?;
    Ok(g_at(q, p, x, y))
}

fn g_at(q: f64, p: f64, x: f64, y: f64) -> f64 {
    let e = q / p;
    let m = (1.0 - x).powf(1.0 / p) * y.powf(1.0 / p) + x.powf(1.0 / p) * (1.0 - y).powf(1.0 / p);
    ((1.0 - x) * (1.0 - y)).powf(e) + m.powf(q) + (x * y).powf(e)
}

/// Gradient and Hessian of G_q, all in closed form.
fn g_derivatives(q: f64, p: f64, x: f64, y: f64) -> (f64, [f64; 2], [f64; 3]) {
    let e = q / p;
    let r = 1.0 / p;
    let omx = 1.0 - x;
    let omy = 1.0 - y;
    let m = omx.powf(r) * y.powf(r) + x.powf(r) * omy.powf(r);
    let mx = r * (x.powf(r - 1.0) * omy.powf(r) - omx.powf(r - 1.0) * y.powf(r));
    let my = r * (omx.powf(r) * y.powf(r - 1.0) - x.powf(r) * omy.powf(r - 1.0));
    let mxx = r * (r - 1.0) * (omx.powf(r - 2.0) * y.powf(r) + x.powf(r - 2.0) * omy.powf(r));
    let myy = r * (r - 1.0) * (omx.powf(r) * y.powf(r - 2.0) + x.powf(r) * omy.powf(r - 2.0));
    let mxy = -r * r * (omx.powf(r - 1.0) * y.powf(r - 1.0) + x.powf(r - 1.0) * omy.powf(r - 1.0));

    let g = (omx * omy).powf(e) + m.powf(q) + (x * y).powf(e);
    let gx = -e * omx.powf(e - 1.0) * omy.powf(e)
        + q * m.powf(q - 1.0) * mx
        + e * x.powf(e - 1.0) * y.powf(e);
    let gy = -e * omx.powf(e) * omy.powf(e - 1.0)
        + q * m.powf(q - 1.0) * my
        + e * x.powf(e) * y.powf(e - 1.0);
    let gxx = e * (e - 1.0) * omx.powf(e - 2.0) * omy.powf(e)
        + q * (q - 1.0) * m.powf(q - 2.0) * mx * mx
        + q * m.powf(q - 1.0) * mxx
        + e * (e - 1.0) * x.powf(e - 2.0) * y.powf(e);
    let gyy = e * (e - 1.0) * omx.powf(e) * omy.powf(e - 2.0)
        + q * (q - 1.0) * m.powf(q - 2.0) * my * my
        + q * m.powf(q - 1.0) * myy
        + e * (e - 1.0) * x.powf(e) * y.powf(e - 2.0);
    let gxy = e * e * omx.powf(e - 1.0) * omy.powf(e - 1.0)
        + q * (q - 1.0) * m.powf(q - 2.0) * mx * my
        + q * m.powf(q - 1.0) * mxy
        + e * e * x.powf(e - 1.0) * y.powf(e - 1.0);
    (g, [gx, gy], [gxx, gxy, gyy])
}

/// Verifies the four-point inequality
/// ((α₀β₀)^q + (α₀β₁ + α₁β₀)^q + (α₁β₁)^q)^{1/q}
///   ≤ (α₀^p + α₁^p)^{1/p} (β₀^p + β₁^p)^{1/p}
/// for an exponent pair in the sharp binary Young range.
pub fn four_point_check(input: &FourPointInput) -> Result<Report> {
    let FourPointInput {
        alpha0,
        alpha1,
        beta0,
        beta1,
        p,
        q,
    } = *input;
    let pair = ExponentPair::new(Exponent::new(p)?, Exponent::new(q)?, Regime::YoungBinary);
    if !regions::in_range(&pair) {
        return Err(Error::usage(format!(
            "(p, q) = ({p}, {q}) lies outside the sharp binary Young range"
        )));
    }
    let lhs = ((alpha0 * beta0).powf(q)
        + (alpha0 * beta1 + alpha1 * beta0).powf(q)
        + (alpha1 * beta1).powf(q))
    .powf(1.0 / q);
    let rhs = (alpha0.powf(p) + alpha1.powf(p)).powf(1.0 / p)
        * (beta0.powf(p) + beta1.powf(p)).powf(1.0 / p);

    let mut report = Report::new("fourpoint.four_point_check")
        .input("alpha0", alpha0)
        .input("alpha1", alpha1)
        .input("beta0", beta0)
        .input("beta1", beta1)
        .input("p", p)
        .input("q", q);
    let mut check = Check::upper_bound(
        "lhs_leq_rhs",
        "four_point_inequality",
        lhs,
        rhs,
        FOUR_POINT_SLACK * rhs.abs().max(1e-300),
    );
    if (lhs - rhs).abs() <= FOUR_POINT_SLACK * rhs.abs().max(1e-300) {
        check = check.with_note("equality case");
    }
    report.push(check);
    Ok(report.finish())
}

/// The five equality points of G_q on the unit square.
pub const G_EQUALITY_POINTS: [(f64, f64); 5] =
    [(0.0, 0.0), (0.0, 1.0), (1.0, 0.0), (1.0, 1.0), (0.5, 0.5)];

/// Values (x, y, G_q(x, y)) on a uniform grid; the data behind the surface
/// plot of G_q. The point count is rounded up to odd so the center is a
/// node.
pub fn g_surface(q: f64, grid_size: usize) -> Result<Vec<(f64, f64, f64)>> {
    let p = check_q_young(q)?;
    if grid_size < 2 {
        return Err(Error::usage("grid_size must be at least 2"));
    }
    let n = grid_size | 1;
    let rows: Vec<Vec<(f64, f64, f64)>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let x = i as f64 / (n - 1) as f64;
            (0..n)
                .map(|j| {
                    let y = j as f64 / (n - 1) as f64;
                    (x, y, g_at(q, p, x, y))
                })
                .collect()
        })
        .collect();
    Ok(rows.into_iter().flatten().collect())
}

/// Local maximization of G by alternating golden-section line searches.
fn refine_local_max(q: f64, p: f64, start: (f64, f64), radius: f64) -> (f64, f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let (mut x, mut y) = start;
    let mut r = radius;
    for _ in 0..40 {
        for axis in 0..2 {
            let (mut lo, mut hi) = if axis == 0 {
                ((x - r).max(0.0), (x + r).min(1.0))
            } else {
                ((y - r).max(0.0), (y + r).min(1.0))
            };
            let eval = |t: f64| {
                if axis == 0 {
                    g_at(q, p, t, y)
                } else {
                    g_at(q, p, x, t)
                }
            };
            let mut t1 = hi - INV_PHI * (hi - lo);
            let mut t2 = lo + INV_PHI * (hi - lo);
            let mut g1 = eval(t1);
            let mut g2 = eval(t2);
            for _ in 0..40 {
                if g1 < g2 {
                    lo = t1;
                    t1 = t2;
                    g1 = g2;
                    t2 = lo + INV_PHI * (hi - lo);
                    g2 = eval(t2);
                } else {
                    hi = t2;
                    t2 = t1;
                    g2 = g1;
                    t1 = hi - INV_PHI * (hi - lo);
                    g1 = eval(t1);
                }
            }
            let best = [(t1, g1), (t2, g2), (lo, eval(lo)), (hi, eval(hi))]
                .into_iter()
                .max_by(|u, v| u.1.total_cmp(&v.1))
                .unwrap();
            if axis == 0 {
                x = best.0;
            } else {
                y = best.0;
            }
        }
        r *= 0.7;
    }
    (x, y, g_at(q, p, x, y))
}

/// Verifies G_q ≤ 1 on a uniform grid of the unit square with local
/// refinement near the five equality points and every interior grid
/// maximizer.
pub fn check_g_max(q: f64, grid_size: usize) -> Result<Report> {
    let p = check_q_young(q)?;
    if grid_size < 101 {
        return Err(Error::usage(format!(
            "grid_size must be at least 101, got {grid_size}"
        )));
    }
    let n = grid_size;
    let step = 1.0 / (n - 1) as f64;
    let grid: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let x = i as f64 / (n - 1) as f64;
            (0..n)
                .map(|j| g_at(q, p, x, j as f64 / (n - 1) as f64))
                .collect()
        })
        .collect();

    let mut best = f64::NEG_INFINITY;
    let mut best_xy = (0.0, 0.0);
    for (i, row) in grid.iter().enumerate() {
        for (j, &g) in row.iter().enumerate() {
            if g > best {
                best = g;
                best_xy = (i as f64 * step, j as f64 * step);
            }
        }
    }

    // refinement seeds: equality points, grid argmax, interior local maxima
    let mut seeds: Vec<(f64, f64)> = G_EQUALITY_POINTS.to_vec();
    seeds.push(best_xy);
    for i in 1..n - 1 {
        for j in 1..n - 1 {
            let g = grid[i][j];
            if g >= grid[i - 1][j]
                && g >= grid[i + 1][j]
                && g >= grid[i][j - 1]
                && g >= grid[i][j + 1]
                && g >= grid[i - 1][j - 1]
                && g >= grid[i - 1][j + 1]
                && g >= grid[i + 1][j - 1]
                && g >= grid[i + 1][j + 1]
            {
                seeds.push((i as f64 * step, j as f64 * step));
            }
        }
    }

    let mut equality_points: Vec<(f64, f64)> = Vec::new();
    for &(sx, sy) in &seeds {
        let (rx, ry, rg) = refine_local_max(q, p, (sx, sy), step);
        if rg > best {
            best = rg;
            best_xy = (rx, ry);
        }
        if (rg - 1.0).abs() <= 1e-8
            && !equality_points
                .iter()
                .any(|&(ex, ey)| (ex - rx).abs() <= 1e-6 && (ey - ry).abs() <= 1e-6)
        {
            equality_points.push((rx, ry));
        }
    }

    // direct values at the five expected equality points
    let max_equality_defect = G_EQUALITY_POINTS
        .iter()
        .map(|&(x, y)| (g_at(q, p, x, y) - 1.0).abs())
        .fold(0.0_f64, f64::max);
    let max_equality_dist = equality_points
        .iter()
        .map(|&(x, y)| {
            G_EQUALITY_POINTS
                .iter()
                .map(|&(ex, ey)| ((x - ex).abs()).max((y - ey).abs()))
                .fold(f64::INFINITY, f64::min)
        })
        .fold(0.0_f64, f64::max);

    let mut report = Report::new("fourpoint.check_g_max")
        .input("q", q)
        .input("grid_size", grid_size);
    report.push(
        Check::upper_bound("g_max_leq_one", "g_upper_bound", best, 1.0, G_MAX_SLACK)
            .with_note(format!("max at (x, y) = {best_xy:?}")),
    );
    report.push(
        Check::equality(
            "equality_point_count",
            "g_equality_points",
            equality_points.len() as f64,
            5.0,
            0.0,
        )
        .with_note(format!("equality points at {equality_points:?}")),
    );
    report.push(Check::upper_bound(
        "equality_defect_at_named_points",
        "g_equality_points",
        max_equality_defect,
        1e-8,
        0.0,
    ));
    report.push(Check::upper_bound(
        "equality_points_near_expected",
        "g_equality_points",
        max_equality_dist,
        1e-6,
        0.0,
    ));
    Ok(report.finish())
}

/// ln(2 cosh z), stable for all magnitudes of z.
pub(crate) fn ln_2cosh(z: f64) -> f64 {
    let az = z.abs();
    az + (-2.0 * az).exp().ln_1p()
}

/// Verifies the two hyperbolic-cosine inequalities at the Young endpoint:
///
/// 1. 2^{2q/p}((cosh(pt/2q))^{2q/p} − 1) ≥ 2^q((cosh(t/q))^q − 1), with
///    equality at t = 0;
/// 2. (2 cosh(t/q))^q > (2(2q−p)/p) cosh(pt/q), strictly.
///
/// Both are checked as printed (with an f64 rounding slack) and in log
/// space, where the identity 2^{2q/p} − 2^q = 2 turns the first inequality
/// into (2q/p) ln(2 cosh(pt/2q)) ≥ ln((2 cosh(t/q))^q + 2).
pub fn cosh_check(p: f64, q: f64, t_grid: &[f64]) -> Result<Report> {
    let p_expected = check_q_young(q)?;
    ensure_finite("p", p)?;
    if (p - p_expected).abs() > 1e-10 * p_expected {
        return Err(Error::usage(format!(
            "cosh inequalities hold at the endpoint exponent p(q) = {p_expected}, got p = {p}"
        )));
    }
    if t_grid.is_empty() {
        return Err(Error::usage("t grid must be nonempty"));
    }
    for &t in t_grid {
        ensure_finite("t", t)?;
    }

    let mut printed_min = f64::INFINITY;
    let mut printed_worst_t = 0.0;
    let mut log_min = f64::INFINITY;
    let mut log_worst_t = 0.0;
    let mut strict_min = f64::INFINITY;
    let mut strict_worst_t = 0.0;

    for &t in t_grid {
        // first inequality, as printed (skipped where f64 overflows)
        let lhs = 2.0_f64.powf(2.0 * q / p) * ((p * t / (2.0 * q)).cosh().powf(2.0 * q / p) - 1.0);
        let rhs = 2.0_f64.powf(q) * ((t / q).cosh().powf(q) - 1.0);
        if lhs.is_finite() && rhs.is_finite() {
            let margin = (lhs - rhs) / lhs.abs().max(rhs.abs()).max(1.0);
            if margin < printed_min {
                printed_min = margin;
                printed_worst_t = t;
            }
        }
        // first inequality in log space
        let l_log = (2.0 * q / p) * ln_2cosh(p * t / (2.0 * q));
        let rq = q * ln_2cosh(t / q);
        let r_log = rq + (2.0 * (-rq).exp()).ln_1p();
        if l_log - r_log < log_min {
            log_min = l_log - r_log;
            log_worst_t = t;
        }
        // second inequality in log space
        let l2 = q * ln_2cosh(t / q);
        let r2 = (2.0 * (2.0 * q - p) / p).ln() + ln_2cosh(p * t / q) - std::f64::consts::LN_2;
        if l2 - r2 < strict_min {
            strict_min = l2 - r2;
            strict_worst_t = t;
        }
    }

    // equality of the first inequality at t = 0, as printed
    let eq_zero = {
        let lhs = 2.0_f64.powf(2.0 * q / p) * (1.0_f64.min(0.0_f64.cosh()).powf(2.0 * q / p) - 1.0);
        let rhs = 2.0_f64.powf(q) * (0.0_f64.cosh().powf(q) - 1.0);
        (lhs - rhs).abs()
    };

    let mut report = Report::new("fourpoint.cosh_check")
        .input("p", p)
        .input("q", q)
        .input("t_points", t_grid.len());
    report.push(
        Check::lower_bound(
            "primary_printed_min_margin",
            "cosh_inequality_primary",
            printed_min,
            0.0,
            COSH_PRINTED_SLACK,
        )
        .with_note(format!("worst at t = {printed_worst_t}")),
    );
    report.push(
        Check::lower_bound(
            "primary_log_min_margin",
            "cosh_inequality_primary",
            log_min,
            0.0,
            5e-13,
        )
        .with_note(format!("worst at t = {log_worst_t}")),
    );
    report.push(Check::equality(
        "primary_equality_at_zero",
        "cosh_inequality_primary",
        eq_zero,
        0.0,
        1e-12,
    ));
    report.push(
        Check::lower_bound(
            "strict_min_margin",
            "cosh_inequality_strict",
            strict_min,
            regions::STRICTNESS_MARGIN,
            0.0,
        )
        .with_note(format!("worst at t = {strict_worst_t}")),
    );
    Ok(report.finish())
}

/// Verifies the closed-form derivative of the Young endpoint curve against
/// difference quotients and the bounds 0 < p′ ≤ 3p/(4q) and
/// 2p/(5q²) < −p″ < 4p/(5q²) on a grid in [1, 4].
pub fn pprime_check(q_grid: &[f64]) -> Result<Report> {
    if q_grid.is_empty() {
        return Err(Error::usage("q grid must be nonempty"));
    }
    for &q in q_grid {
        ensure_finite("q", q)?;
        if !(1.0..=4.0).contains(&q) {
            return Err(Error::usage(format!("grid point {q} outside [1, 4]")));
        }
    }

    let mut max_rel_fd = 0.0_f64;
    let mut min_prime = f64::INFINITY;
    let mut min_upper_slack = f64::INFINITY;
    let mut min_second_low = f64::INFINITY;
    let mut min_second_high = f64::INFINITY;
    let h = 1e-5;
    for &q in q_grid {
        let p = regions::young_endpoint_p(q)?;
        let pp = regions::young_endpoint_p_prime(q)?;
        let ps = regions::young_endpoint_p_second(q)?;
        // difference quotient; one-sided second-order at the left edge
        let fd = if q - h >= 1.0 {
            (regions::young_endpoint_p(q + h)? - regions::young_endpoint_p(q - h)?) / (2.0 * h)
        } else {
            (-3.0 * regions::young_endpoint_p(q)? + 4.0 * regions::young_endpoint_p(q + h)?
                - regions::young_endpoint_p(q + 2.0 * h)?)
                / (2.0 * h)
        };
        max_rel_fd = max_rel_fd.max((pp - fd).abs() / pp.abs());
        min_prime = min_prime.min(pp);
        min_upper_slack = min_upper_slack.min(3.0 * p / (4.0 * q) - pp);
        min_second_low = min_second_low.min(-ps - 2.0 * p / (5.0 * q * q));
        min_second_high = min_second_high.min(4.0 * p / (5.0 * q * q) + ps);
    }

    let mut report = Report::new("fourpoint.pprime_check")
        .input("q_points", q_grid.len())
        .input("h", h);
    report.push(Check::upper_bound(
        "closed_form_matches_difference_quotient",
        "endpoint_derivative",
        max_rel_fd,
        1e-6,
        0.0,
    ));
    report.push(Check::lower_bound(
        "prime_positive",
        "endpoint_derivative_bounds",
        min_prime,
        regions::STRICTNESS_MARGIN,
        0.0,
    ));
    report.push(Check::lower_bound(
        "prime_below_three_quarters",
        "endpoint_derivative_bounds",
        min_upper_slack,
        0.0,
        1e-12,
    ));
    report.push(Check::lower_bound(
        "second_above_lower_bound",
        "endpoint_derivative_bounds",
        min_second_low,
        regions::STRICTNESS_MARGIN,
        0.0,
    ));
    report.push(Check::lower_bound(
        "second_below_upper_bound",
        "endpoint_derivative_bounds",
        min_second_high,
        regions::STRICTNESS_MARGIN,
        0.0,
    ));
    Ok(report.finish())
}

/// The dissecting curve y = θ_a(x) = a x / (1 − x + a x).
pub fn theta_curve(a: CurveParam, x: f64) -> f64 {
    let a = a.get();
    a * x / (1.0 - x + a * x)
}

/// G_q evaluated along the dissecting curve: x ↦ G_q(x, θ_a(x)).
///
/// The curve crosses the anti-diagonal y = 1 − x at x = 1/(1 + √a).
pub fn g_along_curve(q: f64, a: CurveParam, x: f64) -> Result<f64> {
    let p = check_q_young(q)?;
    ensure_finite("x", x)?;
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::domain(format!("x must lie in [0, 1], got {x}")));
    }
    Ok(g_at(q, p, x, theta_curve(a, x)))
}

/// Extrapolated one-sided slope of x ↦ G_q(x, θ_a(x)) at x = 0⁺, which
/// converges to −(q/p)(1 + a).
///
/// The divided differences carry an x^{q/p−1} correction, so three nodes
/// (h, h/2, h/4) are fitted against the exponent basis {1, h^{q/p−1}, h}.
pub fn curve_slope_at_zero(q: f64, a: CurveParam) -> Result<f64> {
    let p = check_q_young(q)?;
    let beta = q / p - 1.0;
    let h0 = 1e-5;
    let g0 = g_at(q, p, 0.0, 0.0);
    let mut nodes = [0.0; 3];
    let mut slopes = [0.0; 3];
    for (k, item) in nodes.iter_mut().enumerate() {
        *item = h0 / 2.0_f64.powi(k as i32);
        slopes[k] = (g_at(q, p, *item, theta_curve(a, *item)) - g0) / *item;
    }
    // solve the 3x3 system [1, h^beta, h] [s0, c1, c2]^T = slope
    let mut m = [[0.0_f64; 4]; 3];
    for i in 0..3 {
        m[i][0] = 1.0;
        m[i][1] = nodes[i].powf(beta);
        m[i][2] = nodes[i];
        m[i][3] = slopes[i];
    }
    for col in 0..3 {
        let pivot = (col..3)
            .max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))
            .unwrap();
        m.swap(col, pivot);
        for row in col + 1..3 {
            let f = m[row][col] / m[col][col];
            let pivot_row = m[col];
            for (entry, pv) in m[row].iter_mut().zip(pivot_row).skip(col) {
                *entry -= f * pv;
            }
        }
    }
    let c2 = m[2][3] / m[2][2];
    let c1 = (m[1][3] - m[1][2] * c2) / m[1][1];
    let s0 = (m[0][3] - m[0][1] * c1 - m[0][2] * c2) / m[0][0];
    Ok(s0)
}

/// Closed-form second derivative of x ↦ G_q(x, θ_a(x)) at the
/// anti-diagonal crossing x = 1/(1 + √a); negative for all admissible
/// (q, a), which makes the crossing a local maximum along the curve.
pub fn curve_crossing_second_derivative(q: f64, a: CurveParam) -> Result<f64> {
    let p = check_q_young(q)?;
    let a = a.get();
    let sqrt_a = a.sqrt();
    Ok(2.0 * q / p
        * a.powf((q - p) / (2.0 * p))
        * (1.0 + sqrt_a).powf(2.0 * (p - q) / p)
        * (-(a.powf(-1.0 / (2.0 * p)) + a.powf(1.0 / (2.0 * p))).powf(q)
            + (q / p) * (1.0 / sqrt_a + sqrt_a)
            + 2.0 * (q - p) / p))
}

/// The polynomial chain obtained by repeatedly differentiating G_q along a
/// dissecting curve under the substitution x = 1/(u + 1): values of φ₀,
/// φ₀′, φ₁, φ₂, and φ₂′ at u.
///
/// The chain links are φ₀″(u) = u^{q/p−3} φ₁(u) and φ₁′(u) = u φ₂(u);
/// φ₂′ reduces to a first-degree polynomial after scaling, which is what
/// caps the number of stationary points of G_q along the curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhiChain {
    pub phi0: f64,
    pub phi0_prime: f64,
    pub phi1: f64,
    pub phi2: f64,
    pub phi2_prime: f64,
}

pub fn phi_chain(q: f64, a: CurveParam, u: f64) -> Result<PhiChain> {
    let p = check_q_young(q)?;
    ensure_finite("u", u)?;
    if u <= 0.0 {
        return Err(Error::domain(format!("u must be positive, got {u}")));
    }
    let a = a.get();
    let e = q / p;
    let amp = (1.0 + a.powf(1.0 / p)).powf(q);
    let phi0 = -(1.0 + a) * u.powf(2.0 * e) - 2.0 * a * u.powf(2.0 * e - 1.0)
        + amp * u.powf(e + 1.0)
        - a * amp * u.powf(e - 1.0)
        + 2.0 * a.powf(e) * u
        + (1.0 + a) * a.powf(e);
    let phi0_prime = (-2.0 * q * (1.0 + a) * u.powf(2.0 * e - 1.0)
        - 2.0 * (2.0 * q - p) * a * u.powf(2.0 * e - 2.0)
        + (q + p) * amp * u.powf(e)
        - (q - p) * a * amp * u.powf(e - 2.0)
        + 2.0 * p * a.powf(e))
        / p;
    let phi1 = (-2.0 * q * (2.0 * q - p) * (1.0 + a) * u.powf(e + 1.0)
        - 4.0 * (2.0 * q - p) * (q - p) * a * u.powf(e)
        + q * (q + p) * amp * u * u
        - (q - p) * (q - 2.0 * p) * a * amp)
        / (p * p);
    let phi2 = (-2.0 * q * (2.0 * q - p) * (q + p) * (1.0 + a) * u.powf(e - 1.0)
        - 4.0 * q * (2.0 * q - p) * (q - p) * a * u.powf(e - 2.0)
        + 2.0 * p * q * (q + p) * amp)
        / (p * p * p);
    let phi2_prime = (-2.0 * q * (2.0 * q - p) * (q + p) * (q - p) * (1.0 + a) * u
        - 4.0 * (2.0 * q - p) * (q - p) * q * (q - 2.0 * p) * a)
        / (p.powi(4) * u.powf(3.0 - e));
    Ok(PhiChain {
        phi0,
        phi0_prime,
        phi1,
        phi2,
        phi2_prime,
    })
}

/// Observed number of sign changes of φ₀ on (0, ∞) for the given (q, a);
/// reported, not asserted, since only an upper bound is known a priori.
pub fn phi0_zero_count(q: f64, a: CurveParam) -> Result<usize> {
    check_q_young(q)?;
    let n = 4000;
    let mut count = 0;
    let mut prev = f64::NAN;
    for k in 0..=n {
        let u = 10.0_f64.powf(-6.0 + 12.0 * k as f64 / n as f64);
        let v = phi_chain(q, a, u)?.phi0;
        if prev.is_finite() && prev * v < 0.0 {
            count += 1;
        }
        prev = v;
    }
    Ok(count)
}

/// Scaled residual of the PDE identity satisfied by G_q:
/// (ã(x,y) − ã(y,x)) v ∇²G vᵀ + (b̃(x,y), −b̃(y,x))·∇G
/// + (c̃(x,y) − c̃(y,x)) G = 0 with v = ((1−x)x, (1−y)y).
pub fn pde_residual(q: f64, x: f64, y: f64) -> Result<f64> {
    let p = check_q_young(q)?;
    ensure_finite("x", x)?;
    ensure_finite("y", y)?;
    if !(0.0 < x && x < 1.0 && 0.0 < y && y < 1.0) {
        return Err(Error::domain(format!(
            "PDE residual needs (x, y) in the open square, got ({x}, {y})"
        )));
    }
    let a_t = |x: f64, y: f64| p * p * x.powf(1.0 / p) * (1.0 - y).powf(1.0 / p);
    let b_t = |x: f64, y: f64| {
        p * (1.0 - x)
            * x
            * (x.powf(1.0 / p)
                * (1.0 - y).powf(1.0 / p)
                * (p * (1.0 - 2.0 * x) + q * (2.0 * x + 2.0 * y - 1.0))
                - (1.0 - x).powf(1.0 / p)
                    * y.powf(1.0 / p)
                    * (p * (1.0 - 2.0 * x) + q * (2.0 * x + 2.0 * y - 3.0)))
    };
    let c_t = |x: f64, y: f64| {
        q * x.powf(1.0 / p)
            * (1.0 - y).powf(1.0 / p)
            * (p * ((1.0 - x) * x + (1.0 - y) * y) + q * ((x + y) * (x + y) - x - 3.0 * y))
    };

    let (g, grad, hess) = g_derivatives(q, p, x, y);
    let v1 = (1.0 - x) * x;
    let v2 = (1.0 - y) * y;
    let directional = v1 * v1 * hess[0] + 2.0 * v1 * v2 * hess[1] + v2 * v2 * hess[2];

    let t1 = (a_t(x, y) - a_t(y, x)) * directional;
    let t2a = b_t(x, y) * grad[0];
    let t2b = b_t(y, x) * grad[1];
    let t3 = (c_t(x, y) - c_t(y, x)) * g;
    let numer = (t1 + t2a - t2b + t3).abs();
    let denom = t1.abs() + t2a.abs() + t2b.abs() + t3.abs() + 1e-30;
    Ok(numer / denom)
}

/// Gradient and diagonal Hessian of the three-exponent center function
/// H_{p,q,2} at (1/2, 1/2), on the constraint 1/p + 1/q = (1/2) log2 6.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HessianCenter {
    pub grad: [f64; 2],
    pub hess_diag: [f64; 2],
    /// True iff both diagonal entries are negative, i.e. the center is a
    /// strict local maximum; fails as soon as p < 4/3 or q < 4/3.
    pub is_local_max: bool,
}

/// The constraint value (1/2) log2 6 tying p and q at r = 2.
pub fn center_constraint() -> f64 {
    0.5 * 6.0_f64.log2()
}

/// The exponent q paired with p by the center constraint at r = 2.
pub fn center_constraint_q(p: f64) -> Result<f64> {
    ensure_finite("p", p)?;
    let inv_q = center_constraint() - 1.0 / p;
    if inv_q <= 0.0 || inv_q > 1.0 {
        return Err(Error::domain(format!(
            "no admissible q pairs with p = {p} on the center constraint"
        )));
    }
    Ok(1.0 / inv_q)
}

/// Center diagnostics of the three-exponent function
/// `H(x, y) = (1−x)^{r/p}(1−y)^{r/q} + ((1−x)^{1/p} y^{1/q} +
/// x^{1/p}(1−y)^{1/q})^r + x^{r/p} y^{r/q}` at r = 2: the gradient
/// vanishes at the center, while the diagonal Hessian entries
/// 2^{4−2/p−2/q}(4−3p)/p² and 2^{4−2/p−2/q}(4−3q)/q² decide whether the
/// center is a local maximum.
pub fn hessian_center(p: f64, q: f64) -> Result<HessianCenter> {
    ensure_finite("p", p)?;
    ensure_finite("q", q)?;
    if p < 1.0 || q < 1.0 {
        return Err(Error::domain("exponents must be at least 1"));
    }
    if (1.0 / p + 1.0 / q - center_constraint()).abs() > 1e-10 {
        return Err(Error::usage(format!(
            "(p, q) = ({p}, {q}) violates the center constraint 1/p + 1/q = (1/2) log2 6"
        )));
    }
    let r = 2.0_f64;
    // analytic gradient of H_{p,q,2} at the center
    let x = 0.5_f64;
    let y = 0.5_f64;
    let m = (1.0 - x).powf(1.0 / p) * y.powf(1.0 / q) + x.powf(1.0 / p) * (1.0 - y).powf(1.0 / q);
    let mx = (1.0 / p)
        * (x.powf(1.0 / p - 1.0) * (1.0 - y).powf(1.0 / q)
            - (1.0 - x).powf(1.0 / p - 1.0) * y.powf(1.0 / q));
    let my = (1.0 / q)
        * ((1.0 - x).powf(1.0 / p) * y.powf(1.0 / q - 1.0)
            - x.powf(1.0 / p) * (1.0 - y).powf(1.0 / q - 1.0));
    let hx = -(r / p) * (1.0 - x).powf(r / p - 1.0) * (1.0 - y).powf(r / q)
        + r * m.powf(r - 1.0) * mx
        + (r / p) * x.powf(r / p - 1.0) * y.powf(r / q);
    let hy = -(r / q) * (1.0 - x).powf(r / p) * (1.0 - y).powf(r / q - 1.0)
        + r * m.powf(r - 1.0) * my
        + (r / q) * x.powf(r / p) * y.powf(r / q - 1.0);

    let scale = 2.0_f64.powf(4.0 - 2.0 / p - 2.0 / q);
    let hxx = scale * (4.0 - 3.0 * p) / (p * p);
    let hyy = scale * (4.0 - 3.0 * q) / (q * q);
    Ok(HessianCenter {
        grad: [hx, hy],
        hess_diag: [hxx, hyy],
        is_local_max: hxx < 0.0 && hyy < 0.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn g_equality_points_are_one() {
        for &q in &[1.5, 2.0, 3.0, 5.0] {
            for &(x, y) in &G_EQUALITY_POINTS {
                let g = g_extremal(q, x, y).unwrap();
                assert_relative_eq!(g, 1.0, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn g_symmetries() {
        // G(x, y) = G(y, x) = G(1-y, 1-x)
        let g1 = g_extremal(2.0, 0.3, 0.8).unwrap();
        let g2 = g_extremal(2.0, 0.2, 0.7).unwrap();
        assert_relative_eq!(g1, g2, epsilon = 1e-12);
        for &q in &[1.5, 2.0, 3.0] {
            for &(x, y) in &[(0.1, 0.7), (0.35, 0.9), (0.51, 0.02)] {
                let a = g_extremal(q, x, y).unwrap();
                let b = g_extremal(q, y, x).unwrap();
                let c = g_extremal(q, 1.0 - y, 1.0 - x).unwrap();
                assert_relative_eq!(a, b, epsilon = 1e-12);
                assert_relative_eq!(a, c, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn g_boundary_profile() {
        // G(0, y) = (1-y)^{q/p} + y^{q/p} <= 1
        for &q in &[1.5, 3.0] {
            let p = regions::young_endpoint_p(q).unwrap();
            for k in 0..=20 {
                let y = k as f64 / 20.0;
                let g = g_extremal(q, 0.0, y).unwrap();
                let direct = (1.0 - y).powf(q / p) + y.powf(q / p);
                assert_relative_eq!(g, direct, epsilon = 1e-13);
                assert!(g <= 1.0 + 1e-13);
            }
        }
    }

    #[test]
    fn g_gradient_hessian_match_finite_differences() {
        let q = 2.0;
        let p = regions::young_endpoint_p(q).unwrap();
        let (x, y) = (0.3, 0.6);
        let h = 1e-5;
        let (_, grad, hess) = g_derivatives(q, p, x, y);
        let fd_x = (g_at(q, p, x + h, y) - g_at(q, p, x - h, y)) / (2.0 * h);
        let fd_y = (g_at(q, p, x, y + h) - g_at(q, p, x, y - h)) / (2.0 * h);
        assert_relative_eq!(grad[0], fd_x, max_relative = 1e-8);
        assert_relative_eq!(grad[1], fd_y, max_relative = 1e-8);
        let fd_xx =
            (g_at(q, p, x + h, y) - 2.0 * g_at(q, p, x, y) + g_at(q, p, x - h, y)) / (h * h);
        let fd_yy =
            (g_at(q, p, x, y + h) - 2.0 * g_at(q, p, x, y) + g_at(q, p, x, y - h)) / (h * h);
        let fd_xy =
            (g_at(q, p, x + h, y + h) - g_at(q, p, x + h, y - h) - g_at(q, p, x - h, y + h)
                + g_at(q, p, x - h, y - h))
                / (4.0 * h * h);
        assert_relative_eq!(hess[0], fd_xx, max_relative = 1e-5);
        assert_relative_eq!(hess[2], fd_yy, max_relative = 1e-5);
        assert_relative_eq!(hess[1], fd_xy, max_relative = 1e-5);
    }

    #[test]
    fn four_point_equality_all_ones() {
        let q = 3.0;
        let p = regions::young_endpoint_p(q).unwrap();
        let input = FourPointInput::new(1.0, 1.0, 1.0, 1.0, p, q).unwrap();
        let report = four_point_check(&input).unwrap();
        assert!(report.passed());
        let expected = (2.0_f64.powf(q) + 2.0).powf(1.0 / q);
        assert_relative_eq!(report.checks[0].observed, expected, epsilon = 1e-12);
        assert_relative_eq!(
            report.checks[0].expected.unwrap(),
            expected,
            epsilon = 1e-12
        );
    }

    #[test]
    fn four_point_single_support() {
        let q = 2.0;
        let p = regions::young_endpoint_p(q).unwrap();
        let input = FourPointInput::new(0.7, 0.0, 1.3, 0.0, p, q).unwrap();
        let report = four_point_check(&input).unwrap();
        assert!(report.passed());
        assert_relative_eq!(report.checks[0].observed, 0.7 * 1.3, epsilon = 1e-13);
    }

    #[test]
    fn four_point_rejects_out_of_range() {
        assert!(
            four_point_check(&FourPointInput::new(1.0, 1.0, 1.0, 1.0, 1.9, 2.0).unwrap()).is_err()
        );
    }

    #[test]
    fn g_max_report_for_q2() {
        let report = check_g_max(2.0, 101).unwrap();
        assert!(report.passed(), "{report:?}");
        assert!(check_g_max(2.0, 50).is_err());
    }

    #[test]
    fn cosh_check_battery() {
        for &q in &[1.2, 2.0, 3.0, 3.9] {
            let p = regions::young_endpoint_p(q).unwrap();
            let grid: Vec<f64> = (0..=1000).map(|k| -50.0 + k as f64 * 0.1).collect();
            let report = cosh_check(p, q, &grid).unwrap();
            assert!(report.passed(), "q={q}: {report:?}");
        }
        // at t = 0 the strict inequality margin equals ln(2^{q-1} p / (2q - p))
        let q = 2.0;
        let p = regions::young_endpoint_p(q).unwrap();
        let report = cosh_check(p, q, &[0.0]).unwrap();
        let strict = report
            .checks
            .iter()
            .find(|c| c.id == "strict_min_margin")
            .unwrap();
        let expected = (2.0_f64.powf(q - 1.0) * p / (2.0 * q - p)).ln();
        assert_relative_eq!(strict.observed, expected, max_relative = 1e-12);
        assert!(cosh_check(1.9, q, &[0.0]).is_err());
    }

    #[test]
    fn pprime_report() {
        let grid: Vec<f64> = (0..=300).map(|k| 1.0 + 3.0 * k as f64 / 300.0).collect();
        let report = pprime_check(&grid).unwrap();
        assert!(report.passed(), "{report:?}");
        assert!(pprime_check(&[0.5]).is_err());
        // p'(1) = 3/4 is the equality case of the upper bound
        assert_relative_eq!(
            regions::young_endpoint_p_prime(1.0).unwrap(),
            0.75,
            epsilon = 1e-13
        );
    }

    #[test]
    fn curve_diagonal_is_identity() {
        let a = CurveParam::new(1.0).unwrap();
        for &x in &[0.1, 0.3, 0.7] {
            assert_relative_eq!(theta_curve(a, x), x, epsilon = 1e-15);
        }
        // G along the diagonal is symmetric about 1/2
        let g1 = g_along_curve(2.0, a, 0.3).unwrap();
        let g2 = g_along_curve(2.0, a, 0.7).unwrap();
        assert_relative_eq!(g1, g2, epsilon = 1e-12);
    }

    #[test]
    fn curve_slope_limit() {
        for &q in &[1.5, 2.0, 3.0] {
            let p = regions::young_endpoint_p(q).unwrap();
            for &a in &[0.1, 0.5, 0.9] {
                let slope = curve_slope_at_zero(q, CurveParam::new(a).unwrap()).unwrap();
                let expected = -(q / p) * (1.0 + a);
                assert!(
                    (slope - expected).abs() <= 1e-4 * expected.abs(),
                    "q={q} a={a}: {slope} vs {expected}"
                );
            }
        }
    }

    #[test]
    fn curve_crossing_is_local_max() {
        for &q in &[1.5, 2.0, 3.0] {
            let p = regions::young_endpoint_p(q).unwrap();
            for &a in &[0.1, 0.5, 0.9] {
                let cp = CurveParam::new(a).unwrap();
                let closed = curve_crossing_second_derivative(q, cp).unwrap();
                assert!(closed < 0.0, "q={q} a={a}: {closed}");
                // finite-difference cross-check
                let xc = 1.0 / (1.0 + a.sqrt());
                let h = 1e-4;
                let fd = (g_at(q, p, xc + h, theta_curve(cp, xc + h))
                    - 2.0 * g_at(q, p, xc, theta_curve(cp, xc))
                    + g_at(q, p, xc - h, theta_curve(cp, xc - h)))
                    / (h * h);
                assert_relative_eq!(closed, fd, max_relative = 1e-4);
            }
        }
    }

    #[test]
    fn phi_chain_consistency() {
        let q = 2.0;
        let a = CurveParam::new(0.5).unwrap();
        let u = 1.7;
        let h = 1e-5;
        let chain = phi_chain(q, a, u).unwrap();
        let p = regions::young_endpoint_p(q).unwrap();

        let phi0 = |u: f64| phi_chain(q, a, u).unwrap().phi0;
        let fd1 = (phi0(u + h) - phi0(u - h)) / (2.0 * h);
        assert_relative_eq!(chain.phi0_prime, fd1, max_relative = 1e-6);

        // wider step for the second difference to stay above cancellation
        let h2 = 1e-4;
        let fd2 = (phi0(u + h2) - 2.0 * phi0(u) + phi0(u - h2)) / (h2 * h2);
        assert_relative_eq!(u.powf(q / p - 3.0) * chain.phi1, fd2, max_relative = 1e-6);

        let phi1 = |u: f64| phi_chain(q, a, u).unwrap().phi1;
        let fd3 = (phi1(u + h) - phi1(u - h)) / (2.0 * h);
        assert_relative_eq!(u * chain.phi2, fd3, max_relative = 1e-6);

        let phi2 = |u: f64| phi_chain(q, a, u).unwrap().phi2;
        let fd4 = (phi2(u + h) - phi2(u - h)) / (2.0 * h);
        assert_relative_eq!(chain.phi2_prime, fd4, max_relative = 1e-6);
    }

    #[test]
    fn phi2_prime_scaled_is_first_degree() {
        let q = 2.0;
        let aval = 0.5;
        let a = CurveParam::new(aval).unwrap();
        let p = regions::young_endpoint_p(q).unwrap();
        for &u in &[0.3, 1.0, 2.5, 10.0] {
            let chain = phi_chain(q, a, u).unwrap();
            let lhs = p.powi(4) * u.powf(3.0 - q / p) * chain.phi2_prime
                / (2.0 * q * (q - p) * (2.0 * q - p));
            let rhs = -(q + p) * (1.0 + aval) * u - 2.0 * (q - 2.0 * p) * aval;
            assert_relative_eq!(lhs, rhs, max_relative = 1e-11);
        }
    }

    #[test]
    fn phi0_vanishes_at_one_on_diagonal() {
        // a = 1 maps the diagonal-anti-diagonal crossing to u = 1
        let a = CurveParam::new(1.0).unwrap();
        for &q in &[1.5, 2.0, 3.0] {
            let chain = phi_chain(q, a, 1.0).unwrap();
            assert!(chain.phi0.abs() < 1e-12, "q={q}: {}", chain.phi0);
        }
    }

    #[test]
    fn phi0_relates_to_curve_derivative() {
        // (1 - x + a x)^{2q/p} dG/dx = (q/p)(u+1)^{1-3q/p}(u+a)^{q/p-1} phi0(u)
        let q = 2.0;
        let aval = 0.5;
        let a = CurveParam::new(aval).unwrap();
        let p = regions::young_endpoint_p(q).unwrap();
        let x = 0.37_f64;
        let u = 1.0 / x - 1.0;
        let h = 1e-6;
        let d_lhs = (1.0 - x + aval * x).powf(2.0 * q / p)
            * (g_along_curve(q, a, x + h).unwrap() - g_along_curve(q, a, x - h).unwrap())
            / (2.0 * h);
        let chain = phi_chain(q, a, u).unwrap();
        let d_rhs =
            (q / p) * (u + 1.0).powf(1.0 - 3.0 * q / p) * (u + aval).powf(q / p - 1.0) * chain.phi0;
        assert_relative_eq!(d_lhs, d_rhs, max_relative = 1e-6);
    }

    #[test]
    fn phi0_zero_count_reported() {
        let count = phi0_zero_count(2.0, CurveParam::new(0.5).unwrap()).unwrap();
        assert_eq!(count, 3);
    }

    #[test]
    fn pde_residual_battery() {
        assert!(pde_residual(2.0, 0.3, 0.6).unwrap() <= 1e-9);
        assert!(pde_residual(1.5, 0.7, 0.2).unwrap() <= 1e-9);
        // on the diagonal all antisymmetrized coefficients vanish; only
        // operation-ordering rounding survives
        assert!(pde_residual(2.0, 0.4, 0.4).unwrap() <= 1e-14);
        assert!(pde_residual(2.0, 0.0, 0.5).is_err());
    }

    #[test]
    fn hessian_center_diagnostics() {
        // diagonal Young endpoint: both entries negative
        let p = 4.0 / 6.0_f64.log2();
        let q = center_constraint_q(p).unwrap();
        assert_relative_eq!(q, p, epsilon = 1e-12);
        let h = hessian_center(p, q).unwrap();
        assert!(h.is_local_max);
        assert!(h.hess_diag[0] < 0.0 && h.hess_diag[1] < 0.0);
        assert!(h.grad[0].abs() <= 1e-11 && h.grad[1].abs() <= 1e-11);

        // p = 1.2 < 4/3: the first entry flips positive
        let p = 1.2;
        let q = center_constraint_q(p).unwrap();
        let h = hessian_center(p, q).unwrap();
        assert!(!h.is_local_max);
        assert!(h.hess_diag[0] > 0.0);
        assert!(h.grad[0].abs() <= 1e-11 && h.grad[1].abs() <= 1e-11);

        // constraint violations are usage errors
        assert!(hessian_center(1.5, 1.5).is_err());
    }

    #[test]
    fn endpoint_identity_rewrite() {
        // 2^{2q/p} - 2^q = 2 reformulates the endpoint curve; for large q
        // the difference of the huge powers sits below one ulp, so the
        // defect is measured relative to their magnitude.
        for &q in &[1.0, 1.7, 2.0, 10.0, 25.0, 40.0, 60.0] {
            let p = regions::young_endpoint_p(q).unwrap();
            let lhs = 2.0_f64.powf(2.0 * q / p) - 2.0_f64.powf(q);
            let scale = 2.0_f64.powf(q).max(2.0);
            assert!(
                (lhs - 2.0).abs() <= 1e-12 * scale,
                "q={q}: {lhs} vs 2 (scale {scale})"
            );
        }
    }
}

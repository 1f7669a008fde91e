//! Rigorous finite verification: a grid-certification engine that combines
//! node checks with explicit Lipschitz bounds, plus the closed-form
//! derivative family needed for the reference certificate of
//! ∂_q Φ̃ > 1/50 on [1, 4] × [0, 3].
//!
//! Node values are computed in double precision with a conservative
//! forward-error pad recorded in the certificate; a stricter arithmetic
//! can be swapped in behind the same record.

use std::f64::consts::LN_2;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, Error, Result};
use crate::fourpoint::ln_2cosh;
use crate::regions::{young_endpoint_p, young_endpoint_p_prime, young_endpoint_p_second};
use crate::report::{Check, Report};
use crate::{fourpoint, twopoint};

/// Functions registered with the certification engine.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FunctionId {
    /// ∂_q Φ̃(q, u); the reference instance. Axes are (q, u).
    DqPhiTilde,
    /// x ↦ 1 − F_q(x) for fixed q; one-dimensional (second axis ignored).
    FMargin { q: f64 },
    /// (x, y) ↦ 1 − G_q(x, y) for fixed q.
    GMargin { q: f64 },
    /// Constant 1; degenerate instance for exercising the engine.
    ConstantOne,
}

impl FunctionId {
    fn eval(&self, a: f64, b: f64) -> Result<f64> {
        match *self {
            FunctionId::DqPhiTilde => dq_phi_tilde(a, b),
            FunctionId::FMargin { q } => Ok(1.0 - twopoint::f_extremal(q, a)?),
            FunctionId::GMargin { q } => Ok(1.0 - fourpoint::g_extremal(q, a, b)?),
            FunctionId::ConstantOne => Ok(1.0),
        }
    }

    fn slug(&self) -> String {
        match *self {
            FunctionId::DqPhiTilde => "dq_phi_tilde".into(),
            FunctionId::FMargin { q } => format!("f_margin_q{q}"),
            FunctionId::GMargin { q } => format!("g_margin_q{q}"),
            FunctionId::ConstantOne => "constant_one".into(),
        }
    }
}

/// A grid-certification request: verify `function > threshold` on the
/// rectangle by checking every node of the grid with the stated steps,
/// padding each node value by `eval_error_bound`, and extending to the
/// interior through the Lipschitz bounds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridCertRequest {
    pub function: FunctionId,
    /// (a_lo, a_hi, b_lo, b_hi); a degenerate axis (lo == hi) has one node.
    pub rectangle: (f64, f64, f64, f64),
    /// Node spacing (da, db); must tile each non-degenerate axis exactly.
    pub steps: (f64, f64),
    /// Lipschitz bounds (L_a, L_b) on the rectangle.
    pub lipschitz: (f64, f64),
    /// The lower bound being certified at the nodes.
    pub threshold: f64,
    /// Forward-error pad subtracted from every computed node value.
    pub eval_error_bound: f64,
    /// True when the Lipschitz bounds were estimated empirically rather
    /// than derived; such certificates are advisory.
    pub heuristic_lipschitz: bool,
}

/// Outcome of a grid certification.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridCertificate {
    pub function_id: String,
    pub rectangle: (f64, f64, f64, f64),
    pub steps: (f64, f64),
    pub lipschitz: (f64, f64),
    pub node_threshold: f64,
    pub eval_error_bound: f64,
    /// The node with the smallest computed value: (a, b, value).
    pub worst_node: (f64, f64, f64),
    /// A-priori interior bound when the certificate passes:
    /// threshold − L_a·da/2 − L_b·db/2 − pad.
    pub guaranteed_floor: f64,
    /// A-posteriori interior bound from the worst node:
    /// worst − pad − L_a·da/2 − L_b·db/2.
    pub interior_lower_bound: f64,
    pub verdict: String,
    pub nodes_checked: u64,
    pub heuristic_lipschitz: bool,
}

impl GridCertificate {
    pub fn passed(&self) -> bool {
        self.verdict == "pass"
    }
}

fn axis_nodes(lo: f64, hi: f64, step: f64) -> Result<u64> {
    if hi < lo {
        return Err(Error::usage(format!("empty axis [{lo}, {hi}]")));
    }
    if hi == lo {
        return Ok(1);
    }
    let count = (hi - lo) / step;
    let n = count.round();
    if (count - n).abs() > 1e-9 * n.max(1.0) {
        return Err(Error::usage(format!(
            "step {step} does not tile [{lo}, {hi}] exactly"
        )));
    }
    Ok(n as u64 + 1)
}

/// Runs a grid certification.
///
/// Every node value is computed, padded by `eval_error_bound`, and
/// compared against the threshold; the worst node is recorded (ties broken
/// by lexicographic node index). Node evaluation parallelizes over rows
/// with a deterministic reduction.
pub fn certify_grid(request: &GridCertRequest) -> Result<GridCertificate> {
    let (a_lo, a_hi, b_lo, b_hi) = request.rectangle;
    for (name, v) in [
        ("a_lo", a_lo),
        ("a_hi", a_hi),
        ("b_lo", b_lo),
        ("b_hi", b_hi),
        ("threshold", request.threshold),
    ] {
        ensure_finite(name, v)?;
    }
    if !(request.steps.0 > 0.0 && request.steps.1 > 0.0) {
        return Err(Error::usage("steps must be positive"));
    }
    if !(request.lipschitz.0 >= 0.0 && request.lipschitz.1 >= 0.0) {
        return Err(Error::usage("lipschitz bounds must be nonnegative"));
    }
    if request.eval_error_bound.is_nan() || request.eval_error_bound < 0.0 {
        return Err(Error::usage("eval_error_bound must be nonnegative"));
    }
    let na = axis_nodes(a_lo, a_hi, request.steps.0)?;
    let nb = axis_nodes(b_lo, b_hi, request.steps.1)?;
    let total = na * nb;
    if total > 200_000_000 {
        return Err(Error::usage(format!(
            "grid of {total} nodes exceeds budget"
        )));
    }

    struct RowMin {
        value: f64,
        j: u64,
    }

    let rows: Vec<Result<RowMin>> = (0..na)
        .into_par_iter()
        .map(|i| {
            let a = if na == 1 {
                a_lo
            } else {
                a_lo + i as f64 * request.steps.0
            };
            let mut min = RowMin {
                value: f64::INFINITY,
                j: 0,
            };
            for j in 0..nb {
                let b = if nb == 1 {
                    b_lo
                } else {
                    b_lo + j as f64 * request.steps.1
                };
                let v = request.function.eval(a, b)?;
                if !v.is_finite() {
                    return Err(Error::numerical(format!(
                        "non-finite node value at ({a}, {b})"
                    )));
                }
                if v < min.value {
                    min = RowMin { value: v, j };
                }
            }
            Ok(min)
        })
        .collect();

    let mut worst = (f64::INFINITY, 0u64, 0u64);
    for (i, row) in rows.into_iter().enumerate() {
        let row = row?;
        if row.value < worst.0 {
            worst = (row.value, i as u64, row.j);
        }
    }

    let worst_a = if na == 1 {
        a_lo
    } else {
        a_lo + worst.1 as f64 * request.steps.0
    };
    let worst_b = if nb == 1 {
        b_lo
    } else {
        b_lo + worst.2 as f64 * request.steps.1
    };

    let slack_a = if na == 1 {
        0.0
    } else {
        request.lipschitz.0 * request.steps.0 / 2.0
    };
    let slack_b = if nb == 1 {
        0.0
    } else {
        request.lipschitz.1 * request.steps.1 / 2.0
    };
    let guaranteed_floor = request.threshold - slack_a - slack_b - request.eval_error_bound;
    let interior_lower_bound = worst.0 - request.eval_error_bound - slack_a - slack_b;

    let nodes_pass = worst.0 - request.eval_error_bound > request.threshold;
    let pass = nodes_pass && guaranteed_floor > 0.0;

    Ok(GridCertificate {
        function_id: request.function.slug(),
        rectangle: request.rectangle,
        steps: request.steps,
        lipschitz: request.lipschitz,
        node_threshold: request.threshold,
        eval_error_bound: request.eval_error_bound,
        worst_node: (worst_a, worst_b, worst.0),
        guaranteed_floor,
        interior_lower_bound,
        verdict: if pass { "pass".into() } else { "fail".into() },
        nodes_checked: total,
        heuristic_lipschitz: request.heuristic_lipschitz,
    })
}

/// Empirical Lipschitz estimate: the largest per-axis difference quotient
/// on a probe grid, doubled as a safety factor. For heuristic certificates
/// only; the result carries no a-priori guarantee.
pub fn estimate_lipschitz(
    function: FunctionId,
    rectangle: (f64, f64, f64, f64),
    probes_per_axis: u32,
) -> Result<(f64, f64)> {
    let (a_lo, a_hi, b_lo, b_hi) = rectangle;
    let n = probes_per_axis.max(3) as usize;
    let mut max_a = 0.0_f64;
    let mut max_b = 0.0_f64;
    let a_step = if a_hi > a_lo {
        (a_hi - a_lo) / (n - 1) as f64
    } else {
        0.0
    };
    let b_step = if b_hi > b_lo {
        (b_hi - b_lo) / (n - 1) as f64
    } else {
        0.0
    };
    let na = if a_hi > a_lo { n } else { 1 };
    let nb = if b_hi > b_lo { n } else { 1 };
    let mut values = vec![vec![0.0_f64; nb]; na];
    for (i, row) in values.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            *v = function.eval(a_lo + i as f64 * a_step, b_lo + j as f64 * b_step)?;
        }
    }
    for i in 0..na {
        for j in 0..nb {
            if i + 1 < na {
                max_a = max_a.max((values[i + 1][j] - values[i][j]).abs() / a_step);
            }
            if j + 1 < nb {
                max_b = max_b.max((values[i][j + 1] - values[i][j]).abs() / b_step);
            }
        }
    }
    Ok((2.0 * max_a, 2.0 * max_b))
}

/// Forward-error pad for the reference instance: generous against the
/// ~1e-14 conditioning of the closed form on [1, 4] × [0, 3].
pub use crate::tolerances::CERTIFICATE_EVAL_PAD as REFERENCE_EVAL_PAD;

/// The reference certification instance: ∂_q Φ̃ > 1/50 on [1, 4] × [0, 3]
/// with steps (1/700, 1/300) and Lipschitz bounds (7, 3), i.e. 2101 × 901
/// nodes.
pub fn reference_request() -> GridCertRequest {
    GridCertRequest {
        function: FunctionId::DqPhiTilde,
        rectangle: (1.0, 4.0, 0.0, 3.0),
        steps: (1.0 / 700.0, 1.0 / 300.0),
        lipschitz: (7.0, 3.0),
        threshold: 1.0 / 50.0,
        eval_error_bound: REFERENCE_EVAL_PAD,
        heuristic_lipschitz: false,
    }
}

fn check_domain(q: f64, u: f64) -> Result<()> {
    ensure_finite("q", q)?;
    ensure_finite("u", u)?;
    if !(1.0..=4.0).contains(&q) {
        return Err(Error::domain(format!("q must lie in [1, 4], got {q}")));
    }
    if u < 0.0 {
        return Err(Error::domain(format!("u must be nonnegative, got {u}")));
    }
    Ok(())
}

/// Φ̃(q, u) = q ln cosh u − ln cosh(pu) + ln(p·2^{q−1}/(2q − p)) at the
/// Young endpoint p = p(q). Positivity of this function for q > 1 is what
/// the strict cosh inequality needs.
pub fn phi_tilde(q: f64, u: f64) -> Result<f64> {
    check_domain(q, u)?;
    let p = young_endpoint_p(q)?;
    let ln_cosh_u = ln_2cosh(u) - LN_2;
    let ln_cosh_pu = ln_2cosh(p * u) - LN_2;
    Ok(q * ln_cosh_u - ln_cosh_pu + (p * 2.0_f64.powf(q - 1.0) / (2.0 * q - p)).ln())
}

/// Closed-form q-derivative of Φ̃:
/// ∂_q Φ̃(q, u) = η̃(q, u) + (2/(2q−p))(p′(q)·q/p − 1) + ln 2 with
/// η̃(q, u) = ln cosh u − p′(q)·u·tanh(pu).
pub fn dq_phi_tilde(q: f64, u: f64) -> Result<f64> {
    check_domain(q, u)?;
    let p = young_endpoint_p(q)?;
    let pp = young_endpoint_p_prime(q)?;
    let eta = (ln_2cosh(u) - LN_2) - pp * u * (p * u).tanh();
    Ok(eta + (2.0 / (2.0 * q - p)) * (pp * q / p - 1.0) + LN_2)
}

/// Closed-form second q-derivative of Φ̃; bounded by 7 in absolute value
/// on [1, 4] × [0, 3].
pub fn d2q_phi_tilde(q: f64, u: f64) -> Result<f64> {
    check_domain(q, u)?;
    let p = young_endpoint_p(q)?;
    let pp = young_endpoint_p_prime(q)?;
    let ps = young_endpoint_p_second(q)?;
    let sech = 1.0 / (p * u).cosh();
    Ok(-ps * u * (p * u).tanh() - pp * pp * u * u * sech * sech
        + ps * 2.0 * q / (p * (2.0 * q - p))
        - pp * pp * 4.0 * q * (q - p) / (p * p * (2.0 * q - p) * (2.0 * q - p))
        + 4.0 * (1.0 - pp) / ((2.0 * q - p) * (2.0 * q - p)))
}

/// Closed-form mixed derivative ∂_u ∂_q Φ̃; bounded by 3 in absolute value
/// on [1, 4] × [0, 3].
pub fn dudq_phi_tilde(q: f64, u: f64) -> Result<f64> {
    check_domain(q, u)?;
    let p = young_endpoint_p(q)?;
    let pp = young_endpoint_p_prime(q)?;
    let sech = 1.0 / (p * u).cosh();
    Ok(-pp * (p * u).tanh() - pp * p * u * sech * sech + u.tanh())
}

/// Sweeps the printed closed forms of ∂²_q Φ̃ and ∂_u ∂_q Φ̃ over a grid
/// and asserts the Lipschitz bounds |∂²_q Φ̃| ≤ 7 and |∂_u ∂_q Φ̃| ≤ 3.
pub fn lipschitz_bounds_check(q_grid: &[f64], u_grid: &[f64]) -> Result<Report> {
    if q_grid.is_empty() || u_grid.is_empty() {
        return Err(Error::usage("grids must be nonempty"));
    }
    for &q in q_grid {
        if !(1.0..=4.0).contains(&q) {
            return Err(Error::usage(format!("q grid point {q} outside [1, 4]")));
        }
    }
    for &u in u_grid {
        if !(0.0..=3.0).contains(&u) {
            return Err(Error::usage(format!("u grid point {u} outside [0, 3]")));
        }
    }
    let mut max_d2q = 0.0_f64;
    let mut worst_d2q = (q_grid[0], u_grid[0]);
    let mut max_dudq = 0.0_f64;
    let mut worst_dudq = (q_grid[0], u_grid[0]);
    for &q in q_grid {
        for &u in u_grid {
            let a = d2q_phi_tilde(q, u)?.abs();
            if a > max_d2q {
                max_d2q = a;
                worst_d2q = (q, u);
            }
            let b = dudq_phi_tilde(q, u)?.abs();
            if b > max_dudq {
                max_dudq = b;
                worst_dudq = (q, u);
            }
        }
    }
    let mut report = Report::new("certify.lipschitz_bounds")
        .input("q_points", q_grid.len())
        .input("u_points", u_grid.len());
    report.push(
        Check::upper_bound(
            "second_q_derivative_bound",
            "mixed_partial_bounds",
            max_d2q,
            7.0,
            0.0,
        )
        .with_note(format!("max at (q, u) = {worst_d2q:?}")),
    );
    report.push(
        Check::upper_bound(
            "mixed_derivative_bound",
            "mixed_partial_bounds",
            max_dudq,
            3.0,
            0.0,
        )
        .with_note(format!("max at (q, u) = {worst_dudq:?}")),
    );
    Ok(report.finish())
}

//! Quadrature engines: adaptive Gauss–Kronrod panels in one dimension,
//! iterated tensor integration over T^d for d ≤ 3, and seeded quasi-Monte
//! Carlo (rank-1 lattice with random shifts) for moderate dimensions.
//!
//! Reduction orders are fixed (pairwise summation in a deterministic tree),
//! so identical specs produce bit-identical estimates regardless of
//! scheduling.

use std::cell::{Cell, RefCell};
use std::collections::BinaryHeap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which integration engine to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    /// Adaptive Gauss–Kronrod panels on [0, 1].
    Adaptive1d,
    /// Iterated adaptive integration, one axis at a time (d ≤ 3).
    Tensor,
    /// Rank-1 lattice rule with random shifts (d ≤ 10), statistical error.
    Qmc,
    /// Closed-form or exact-summation path; no quadrature error.
    Exact,
}

/// Configuration for a quadrature call.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub method: Method,
    /// Target absolute error for the deterministic paths.
    pub abs_tol: f64,
    /// Initial panels per axis for the tensor path (≥ 16).
    pub nodes_per_axis: u32,
    /// Total point budget for the QMC path (≥ 2^10).
    pub samples: u64,
    /// Seed for the QMC random shifts.
    pub seed: u64,
}

pub const DEFAULT_SEED: u64 = 0x5eed_cafe;

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            method: Method::Adaptive1d,
            abs_tol: 1e-10,
            nodes_per_axis: 16,
            samples: 1 << 20,
            seed: DEFAULT_SEED,
        }
    }
}

impl QuadratureSpec {
    pub fn with_method(method: Method) -> Self {
        QuadratureSpec {
            method,
            ..QuadratureSpec::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.abs_tol.is_nan() || self.abs_tol <= 0.0 {
            return Err(Error::usage(format!(
                "abs_tol must be positive, got {}",
                self.abs_tol
            )));
        }
        if self.method == Method::Tensor && self.nodes_per_axis < 16 {
            return Err(Error::usage(format!(
                "tensor path requires nodes_per_axis >= 16, got {}",
                self.nodes_per_axis
            )));
        }
        if self.method == Method::Qmc && self.samples < 1 << 10 {
            return Err(Error::usage(format!(
                "qmc path requires samples >= 1024, got {}",
                self.samples
            )));
        }
        Ok(())
    }
}

/// A quadrature result with its error bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegralEstimate {
    pub value: f64,
    /// For deterministic paths, an absolute error bound; for QMC, a
    /// 3-sigma CLT estimate (see `statistical`).
    pub error_bound: f64,
    pub method_used: Method,
    pub evaluations: u64,
    /// True when `error_bound` is a statistical confidence bound rather
    /// than a deterministic one.
    pub statistical: bool,
}

impl IntegralEstimate {
    pub fn exact(value: f64) -> Self {
        IntegralEstimate {
            value,
            error_bound: 0.0,
            method_used: Method::Exact,
            evaluations: 0,
            statistical: false,
        }
    }
}

// 15-point Kronrod / 7-point Gauss rule (positive abscissae).
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_2,
    0.063_092_092_629_978_6,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Pairwise (cascade) summation with a fixed reduction tree.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    if values.len() <= 32 {
        let mut acc = 0.0;
        for v in values {
            acc += v;
        }
        return acc;
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}

struct PanelEval {
    value: f64,
    err: f64,
}

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> PanelEval {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);

    let mut res_kronrod = fc * WGK[7];
    let mut res_gauss = fc * WG[3];
    let mut res_abs = res_kronrod.abs();

    let mut fv = [0.0_f64; 14];
    for j in 0..7 {
        let x = half * XGK[j];
        let f1 = f(center - x);
        let f2 = f(center + x);
        fv[j] = f1;
        fv[7 + j] = f2;
        let sum = f1 + f2;
        res_kronrod += WGK[j] * sum;
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_gauss += WG[j / 2] * sum;
        }
    }

    let mean = res_kronrod * 0.5;
    let mut res_asc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv[j] - mean).abs() + (fv[7 + j] - mean).abs());
    }

    let value = res_kronrod * half;
    res_abs *= half.abs();
    res_asc *= half.abs();
    let raw = ((res_kronrod - res_gauss) * half).abs();

    let mut err = raw;
    if res_asc != 0.0 && err != 0.0 {
        let scale = (200.0 * err / res_asc).powf(1.5);
        err = if scale < 1.0 {
            res_asc * scale
        } else {
            res_asc
        };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }

    PanelEval { value, err }
}

struct Panel {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
    seq: u64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err && self.seq == other.seq
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.err
            .total_cmp(&other.err)
            .then(other.seq.cmp(&self.seq))
    }
}

/// Adaptive Gauss–Kronrod integration of `f` on [a, b].
///
/// Bisects the worst panel until the summed error estimate drops below
/// `max(abs_tol, rel_tol · |value|)` or the evaluation budget runs out, in
/// which case a numerical-failure error carrying the best estimate is
/// returned.
pub fn integrate_interval<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
    max_evals: u64,
    initial_panels: u32,
) -> Result<IntegralEstimate> {
    if a.is_nan() || b.is_nan() || b <= a {
        return Err(Error::usage(format!("bad interval [{a}, {b}]")));
    }
    let initial_panels = initial_panels.max(1);
    let mut heap = BinaryHeap::new();
    let mut evals = 0u64;
    let mut seq = 0u64;
    for i in 0..initial_panels {
        let pa = a + (b - a) * i as f64 / initial_panels as f64;
        let pb = a + (b - a) * (i + 1) as f64 / initial_panels as f64;
        let e = gk15(&f, pa, pb);
        evals += 15;
        heap.push(Panel {
            a: pa,
            b: pb,
            value: e.value,
            err: e.err,
            seq,
        });
        seq += 1;
    }

    let finish = |heap: &BinaryHeap<Panel>, evals: u64| -> IntegralEstimate {
        let mut panels: Vec<&Panel> = heap.iter().collect();
        panels.sort_by(|x, y| x.a.total_cmp(&y.a));
        let values: Vec<f64> = panels.iter().map(|p| p.value).collect();
        let errors: Vec<f64> = panels.iter().map(|p| p.err).collect();
        IntegralEstimate {
            value: pairwise_sum(&values),
            error_bound: pairwise_sum(&errors),
            method_used: Method::Adaptive1d,
            evaluations: evals,
            statistical: false,
        }
    };

    loop {
        let total_err: f64 = heap.iter().map(|p| p.err).sum();
        let total_val: f64 = heap.iter().map(|p| p.value).sum();
        if !total_val.is_finite() {
            return Err(Error::numerical(format!(
                "integrand produced non-finite values on [{a}, {b}]"
            )));
        }
        if total_err <= abs_tol.max(rel_tol * total_val.abs()) {
            return Ok(finish(&heap, evals));
        }
        if evals + 30 > max_evals {
            let best = finish(&heap, evals);
            return Err(Error::Numerical {
                message: format!(
                    "quadrature budget exhausted on [{a}, {b}]: error {total_err:.3e} > target"
                ),
                best: Some(best),
            });
        }
        let worst = heap.pop().expect("heap is nonempty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // interval no longer splittable in f64; accept it as converged
            let mut stuck = worst;
            stuck.err = 0.0;
            heap.push(stuck);
            continue;
        }
        for (pa, pb) in [(worst.a, mid), (mid, worst.b)] {
            let e = gk15(&f, pa, pb);
            evals += 15;
            heap.push(Panel {
                a: pa,
                b: pb,
                value: e.value,
                err: e.err,
                seq,
            });
            seq += 1;
        }
    }
}

const MAX_EVALS_1D: u64 = 4_000_000;

/// Integrate a real function over the circle [0, 1].
pub fn integrate_circle<F: Fn(f64) -> f64>(
    f: F,
    spec: &QuadratureSpec,
) -> Result<IntegralEstimate> {
    spec.validate()?;
    integrate_interval(f, 0.0, 1.0, spec.abs_tol, 0.0, MAX_EVALS_1D, 8)
}

/// Integrate a real function over the torus T^d.
///
/// `Tensor` (and `Adaptive1d`, for d = 1) iterates adaptive 1-d panels and
/// is limited to d ≤ 3; `Qmc` uses a randomly shifted rank-1 lattice for
/// d ≤ 10 and returns a statistical error bound.
pub fn integrate_torus<F>(f: F, d: usize, spec: &QuadratureSpec) -> Result<IntegralEstimate>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    spec.validate()?;
    if d == 0 {
        return Err(Error::usage("dimension must be at least 1"));
    }
    match spec.method {
        Method::Qmc => {
            if d > 10 {
                return Err(Error::usage(format!(
                    "qmc path supports d <= 10, got d = {d}"
                )));
            }
            qmc_torus(&f, d, spec)
        }
        Method::Exact => Err(Error::usage("exact is not a quadrature method")),
        _ => {
            if d > 3 {
                return Err(Error::usage(format!(
                    "tensor path supports d <= 3, got d = {d}; use qmc"
                )));
            }
            tensor_torus(&f, d, spec)
        }
    }
}

fn tensor_torus<F>(f: &F, d: usize, spec: &QuadratureSpec) -> Result<IntegralEstimate>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    let tol_level = spec.abs_tol / d as f64;
    let panels = spec.nodes_per_axis;
    let evals = Cell::new(0u64);
    let failure: RefCell<Option<Error>> = RefCell::new(None);

    // Iterated integration; inner failures are parked in `failure` and the
    // enclosing levels finish with a placeholder value.
    let inner = |coords: &[f64]| -> f64 {
        evals.set(evals.get() + 1);
        f(coords)
    };

    let run_level = |g: &dyn Fn(f64) -> f64| -> f64 {
        match integrate_interval(g, 0.0, 1.0, tol_level, 0.0, MAX_EVALS_1D, panels) {
            Ok(est) => est.value,
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                0.0
            }
        }
    };

    let outer = match d {
        1 => integrate_interval(
            |x| inner(&[x]),
            0.0,
            1.0,
            tol_level,
            0.0,
            MAX_EVALS_1D,
            panels,
        ),
        2 => integrate_interval(
            |x| run_level(&|y| inner(&[x, y])),
            0.0,
            1.0,
            tol_level,
            0.0,
            MAX_EVALS_1D,
            panels,
        ),
        3 => integrate_interval(
            |x| run_level(&|y| run_level(&|z| inner(&[x, y, z]))),
            0.0,
            1.0,
            tol_level,
            0.0,
            MAX_EVALS_1D,
            panels,
        ),
        _ => unreachable!("tensor dimension checked by caller"),
    };
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    let outer = outer?;
    Ok(IntegralEstimate {
        value: outer.value,
        error_bound: outer.error_bound + tol_level * (d as f64 - 1.0),
        method_used: Method::Tensor,
        evaluations: evals.get(),
        statistical: false,
    })
}

/// Generating vector of an embedded rank-1 lattice sequence, valid for
/// power-of-two point counts up to 2^20 (all components odd).
const LATTICE_Z: [u64; 10] = [
    1, 182_667, 469_891, 498_753, 110_745, 446_247, 250_185, 118_627, 245_333, 283_199,
];

const QMC_SHIFTS: usize = 8;

fn qmc_torus<F>(f: &F, d: usize, spec: &QuadratureSpec) -> Result<IntegralEstimate>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    let per_shift = spec.samples / QMC_SHIFTS as u64;
    let n = (1u64 << (63 - per_shift.leading_zeros())).clamp(128, 1 << 20);

    let mut rng = ChaCha12Rng::seed_from_u64(spec.seed);
    let shifts: Vec<Vec<f64>> = (0..QMC_SHIFTS)
        .map(|_| (0..d).map(|_| rng.gen::<f64>()).collect())
        .collect();

    let shift_means: Vec<f64> = shifts
        .par_iter()
        .map(|shift| {
            let mut chunk_sums = Vec::with_capacity((n as usize).div_ceil(4096));
            let mut buf = vec![0.0f64; 4096.min(n as usize)];
            let mut point = [0.0f64; 10];
            let mut i = 0u64;
            while i < n {
                let len = 4096.min((n - i) as usize);
                for (k, slot) in buf.iter_mut().enumerate().take(len) {
                    let idx = i + k as u64;
                    for (j, coord) in point.iter_mut().enumerate().take(d) {
                        let frac = ((idx * LATTICE_Z[j]) % n) as f64 / n as f64 + shift[j];
                        *coord = frac - frac.floor();
                    }
                    *slot = f(&point[..d]);
                }
                chunk_sums.push(pairwise_sum(&buf[..len]));
                i += len as u64;
            }
            pairwise_sum(&chunk_sums) / n as f64
        })
        .collect();

    let mean = pairwise_sum(&shift_means) / QMC_SHIFTS as f64;
    if !mean.is_finite() {
        return Err(Error::numerical("qmc integrand produced non-finite values"));
    }
    let var: f64 = shift_means
        .iter()
        .map(|m| (m - mean) * (m - mean))
        .sum::<f64>()
        / (QMC_SHIFTS as f64 - 1.0);
    let sigma_mean = (var / QMC_SHIFTS as f64).sqrt();
    Ok(IntegralEstimate {
        value: mean,
        error_bound: 3.0 * sigma_mean,
        method_used: Method::Qmc,
        evaluations: n * QMC_SHIFTS as u64,
        statistical: true,
    })
}

//! Shannon-entropy layer: pmf entropy on the integer lattice, density
//! entropy of |f̂|² on the torus, the binary entropic uncertainty
//! principle, the entropy-of-sums inequality with its sharp 3/4 constant,
//! and the binomial probe that shows 1/2 is sharp without the cube
//! constraint.
//!
//! All entropies are measured in bits.

use serde::{Deserialize, Serialize};

use crate::cube::fourier_eval;
use crate::cube::{convolve, CubeFunction, LatticeFunction};
use crate::error::{Error, Result};
use crate::integrate::{self, pairwise_sum, IntegralEstimate, QuadratureSpec};
use crate::report::{Check, Report};
use crate::specfun::log_gamma;

/// Weight of the lattice entropy in the refined uncertainty bound:
/// 1/ln 2 − 1 = 0.442695… .
pub fn uncertainty_weight() -> f64 {
    1.0 / std::f64::consts::LN_2 - 1.0
}

/// Support of a probability mass function in this crate: the binary cube
/// {0,1}^d or the convolution lattice {0,1,2}^d.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SupportKind {
    Cube,
    Lattice,
}

/// A normalized probability mass function on a cube or lattice support.
#[derive(Debug, Clone, PartialEq)]
pub struct PmfOnLattice {
    d: u32,
    kind: SupportKind,
    masses: Vec<f64>,
}

impl PmfOnLattice {
    /// Validates support size, nonnegativity, and normalization (the total
    /// mass may deviate from 1 by at most 1e-9).
    pub fn new(d: u32, kind: SupportKind, masses: Vec<f64>) -> Result<Self> {
        let expected = match kind {
            SupportKind::Cube => 1usize << d,
            SupportKind::Lattice => 3usize.pow(d),
        };
        if masses.len() != expected {
            return Err(Error::usage(format!(
                "support of dimension {d} needs {expected} masses, got {}",
                masses.len()
            )));
        }
        if masses.iter().any(|m| !m.is_finite() || *m < 0.0) {
            return Err(Error::domain("masses must be finite and nonnegative"));
        }
        let total = pairwise_sum(&masses);
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::usage(format!(
                "masses must sum to 1 within 1e-9, got {total}"
            )));
        }
        Ok(PmfOnLattice { d, kind, masses })
    }

    /// The uniform distribution on {0,1}^d.
    pub fn uniform_cube(d: u32) -> Result<Self> {
        let n = 1usize << d;
        Self::new(d, SupportKind::Cube, vec![1.0 / n as f64; n])
    }

    /// The point mass at the origin of {0,1}^d.
    pub fn point_mass_cube(d: u32) -> Result<Self> {
        let mut masses = vec![0.0; 1usize << d];
        masses[0] = 1.0;
        Self::new(d, SupportKind::Cube, masses)
    }

    /// |f|² of an ℓ²-normalized cube function.
    pub fn from_cube_squared(f: &CubeFunction) -> Result<Self> {
        Self::new(
            f.dim(),
            SupportKind::Cube,
            f.values().iter().map(|v| v.norm_sqr()).collect(),
        )
    }

    /// A nonnegative cube function normalized to total mass 1.
    pub fn from_cube_normalized(f: &CubeFunction) -> Result<Self> {
        if !f.is_nonneg_real() {
            return Err(Error::domain("pmf requires nonnegative real values"));
        }
        let total = f.lp_norm(1.0)?;
        if total <= 0.0 {
            return Err(Error::usage("cannot normalize the zero function"));
        }
        Self::new(
            f.dim(),
            SupportKind::Cube,
            f.values().iter().map(|v| v.re / total).collect(),
        )
    }

    /// A convolution output normalized to total mass 1.
    pub fn from_lattice_normalized(l: &LatticeFunction) -> Result<Self> {
        let total = l.total_mass();
        if total <= 0.0 {
            return Err(Error::usage("cannot normalize the zero function"));
        }
        Self::new(
            l.dim(),
            SupportKind::Lattice,
            l.values().iter().map(|v| v / total).collect(),
        )
    }

    pub fn dim(&self) -> u32 {
        self.d
    }

    pub fn kind(&self) -> SupportKind {
        self.kind
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    /// The cube function whose values are these masses (for convolving).
    fn to_cube_function(&self) -> Result<CubeFunction> {
        match self.kind {
            SupportKind::Cube => CubeFunction::from_real(self.d, self.masses.clone()),
            SupportKind::Lattice => Err(Error::usage("lattice pmfs cannot be convolved here")),
        }
    }
}

/// −x log2 x extended continuously by 0 at x = 0 (values below 1e-300 are
/// treated as 0 to avoid spurious NaN at zeros).
fn neg_x_log2_x(x: f64) -> f64 {
    if x < 1e-300 {
        0.0
    } else {
        -x * x.log2()
    }
}

/// Shannon entropy of a pmf in bits: −∑ m log2 m with 0·log 0 = 0.
/// Nonnegative, since every mass is at most 1.
pub fn entropy_pmf(m: &PmfOnLattice) -> f64 {
    let terms: Vec<f64> = m.masses.iter().map(|&x| neg_x_log2_x(x)).collect();
    pairwise_sum(&terms).max(0.0)
}

/// Entropy of the density |f̂|² on T^d for an ℓ²-normalized cube function:
/// −∫ |f̂|² log2 |f̂|² dξ. May be negative. Quadrature follows
/// `spec.method`: tensor for d ≤ 3, QMC for d ≤ 10.
pub fn entropy_hat(f: &CubeFunction, spec: &QuadratureSpec) -> Result<IntegralEstimate> {
    let norm_sq = f.l2_norm_sq();
    if (norm_sq - 1.0).abs() > 1e-10 {
        return Err(Error::usage(format!(
            "entropy_hat needs an l2-normalized function, got squared norm {norm_sq}"
        )));
    }
    integrate::integrate_torus(
        |xi| {
            fourier_eval(f, xi)
                .map(|v| neg_x_log2_x(v.norm_sqr()))
                .unwrap_or(f64::NAN)
        },
        f.dim() as usize,
        spec,
    )
}

/// Verifies the binary entropic uncertainty principle
/// H_T(|f̂|²) + (1/ln 2 − 1) H_Z(|f|²) ≥ 0 and reports the margin of the
/// weaker classical bound H_T + H_Z ≥ 0.
pub fn uncertainty_check(f: &CubeFunction, spec: &QuadratureSpec) -> Result<Report> {
    let h_hat = entropy_hat(f, spec)?;
    let h_lattice = entropy_pmf(&PmfOnLattice::from_cube_squared(f)?);
    let refined = h_hat.value + uncertainty_weight() * h_lattice;
    let classical = h_hat.value + h_lattice;
    let tol = (3.0 * h_hat.error_bound).max(crate::tolerances::UNCERTAINTY_SLACK);

    let mut report = Report::new("entropy.uncertainty")
        .input("d", f.dim())
        .input("method", format!("{:?}", h_hat.method_used));
    let mut check = Check::lower_bound(
        "refined_uncertainty",
        "uncertainty_lower_bound",
        refined,
        0.0,
        tol,
    );
    if refined.abs() <= tol {
        check = check.with_note("equality case");
    }
    report.push(check);
    report.push(
        Check::lower_bound(
            "classical_uncertainty",
            "uncertainty_classical",
            classical,
            0.0,
            tol,
        )
        .with_note("weaker bound without the cube refinement"),
    );
    report.push(Check::lower_bound(
        "lattice_entropy_nonnegative",
        "uncertainty_lower_bound",
        h_lattice,
        0.0,
        0.0,
    ));
    Ok(report.finish())
}

/// Verifies the sharp entropy-of-sums bound for cube-supported pmfs:
/// H(f∗g) ≥ (3/4)(H(f) + H(g)), all sums exact, no quadrature. The
/// classical 1/2 bound and the Jensen bound H(f∗g) ≥ max(H(f), H(g)) are
/// reported alongside.
pub fn entropy_sum_check(f: &PmfOnLattice, g: &PmfOnLattice) -> Result<Report> {
    if f.kind() != SupportKind::Cube || g.kind() != SupportKind::Cube {
        return Err(Error::usage("entropy_sum_check needs cube-supported pmfs"));
    }
    if f.dim() != g.dim() {
        return Err(Error::usage(format!(
            "dimension mismatch: {} vs {}",
            f.dim(),
            g.dim()
        )));
    }
    let h_f = entropy_pmf(f);
    let h_g = entropy_pmf(g);
    let conv = convolve(&f.to_cube_function()?, &g.to_cube_function()?)?;
    let h_sum = entropy_pmf(&PmfOnLattice::from_lattice_normalized(&conv)?);

    let mut report = Report::new("entropy.entropy_sum")
        .input("d", f.dim())
        .input("h_f", h_f)
        .input("h_g", h_g);
    let slack = crate::tolerances::ENTROPY_SUM_SLACK;
    let mut check = Check::lower_bound(
        "three_quarters_bound",
        "entropy_sum_bound",
        h_sum,
        0.75 * (h_f + h_g),
        slack,
    );
    if (h_sum - 0.75 * (h_f + h_g)).abs() <= slack {
        check = check.with_note("equality case");
    }
    report.push(check);
    report.push(
        Check::lower_bound(
            "half_bound",
            "entropy_sum_classical",
            h_sum,
            0.5 * (h_f + h_g),
            1e-10,
        )
        .with_note("classical averaged bound"),
    );
    report.push(Check::lower_bound(
        "jensen_bound",
        "entropy_sum_jensen",
        h_sum,
        h_f.max(h_g),
        1e-10,
    ));
    Ok(report.finish())
}

/// Exact-summation entropy of the symmetric binomial distribution B(n, 1/2).
pub fn binomial_entropy(n: u64) -> Result<f64> {
    if n == 0 || n > 2_000_000 {
        return Err(Error::usage(format!("n must lie in 1..=2e6, got {n}")));
    }
    let nf = n as f64;
    let lg_n = log_gamma(nf + 1.0)?;
    let ln2 = std::f64::consts::LN_2;
    let mut terms = Vec::with_capacity(n as usize + 1);
    for k in 0..=n {
        let kf = k as f64;
        let log_mass = lg_n - log_gamma(kf + 1.0)? - log_gamma(nf - kf + 1.0)? - nf * ln2;
        let mass = log_mass.exp();
        terms.push(-mass * (log_mass / ln2));
    }
    Ok(pairwise_sum(&terms))
}

/// Rows (n, H(B(n)), H(B(2n)), ratio) for a list of sizes.
pub fn binomial_entropy_rows(ns: &[u64]) -> Result<Vec<(u64, f64, f64, f64)>> {
    ns.iter()
        .map(|&n| {
            let h_n = binomial_entropy(n)?;
            let h_2n = binomial_entropy(2 * n)?;
            Ok((n, h_n, h_2n, h_2n / h_n))
        })
        .collect()
}

/// Probes the sharpness of the classical 1/2 entropy-of-sums constant:
/// B(n, 1/2) ∗ B(n, 1/2) = B(2n, 1/2), and all three entropies grow like
/// (1/2) log2 n, so the ratio H(B(2n))/H(B(n)) tends to 1.
pub fn binomial_entropy_probe(n: u64) -> Result<Report> {
    let h_n = binomial_entropy(n)?;
    let h_2n = binomial_entropy(2 * n)?;
    let ratio = h_2n / h_n;
    let gap = h_n - 0.5 * (n as f64).log2();

    let mut report = Report::new("entropy.binomial_probe")
        .input("n", n)
        .input("h_n", h_n)
        .input("h_2n", h_2n);
    report.push(
        Check::lower_bound(
            "ratio_exceeds_one",
            "binomial_entropy_ratio",
            ratio,
            1.0,
            0.0,
        )
        .with_note(format!("ratio - 1 = {}", ratio - 1.0)),
    );
    report.push(
        Check::upper_bound(
            "gap_to_half_log_bounded",
            "binomial_entropy_growth",
            gap.abs(),
            1.1,
            0.0,
        )
        .with_note("|H(B(n)) - (1/2) log2 n| stays bounded"),
    );
    Ok(report.finish())
}

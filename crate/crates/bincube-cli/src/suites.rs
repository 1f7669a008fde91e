//! Suite runners: each maps a CLI configuration onto the library checks
//! and collects reports, certificates, and figure data.

use bincube::certify::{self, GridCertificate};
use bincube::cube::{self, CubeSet};
use bincube::entropy::{self, PmfOnLattice};
use bincube::fourpoint::{self, FourPointInput};
use bincube::integrate::{Method, QuadratureSpec};
use bincube::regions::{self, log_grid, Regime};
use bincube::report::{Check, Report};
use bincube::twopoint::{self, TwoPointInput};
use bincube::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

/// Everything a suite can produce.
#[derive(Debug, Default)]
pub struct SuiteOutput {
    pub reports: Vec<Report>,
    pub certificates: Vec<GridCertificate>,
    /// (file name, contents) pairs for figure/table data.
    pub data_files: Vec<(String, String)>,
}

impl SuiteOutput {
    pub fn all_passed(&self) -> bool {
        self.reports.iter().all(|r| r.passed()) && self.certificates.iter().all(|c| c.passed())
    }

    fn sort(mut self) -> Self {
        self.reports.sort_by(|a, b| a.suite.cmp(&b.suite));
        self
    }
}

/// Common suite parameters, already defaulted by the CLI layer.
#[derive(Debug, Clone)]
pub struct SuiteParams {
    pub q_list: Vec<f64>,
    pub p_list: Vec<f64>,
    pub kappa_list: Vec<f64>,
    pub dim: Option<u32>,
    pub grid: Option<usize>,
    pub count: Option<usize>,
    pub samples: Option<u64>,
    pub seed: u64,
    pub tol: Option<f64>,
    pub resolution: Option<u32>,
    pub set_text: Option<String>,
}

fn spec_for_dim(d: u32, samples: Option<u64>, seed: u64) -> QuadratureSpec {
    if d <= 2 {
        QuadratureSpec {
            method: Method::Tensor,
            abs_tol: 1e-8,
            seed,
            ..QuadratureSpec::default()
        }
    } else {
        QuadratureSpec {
            method: Method::Qmc,
            samples: samples.unwrap_or(1 << 14),
            seed,
            ..QuadratureSpec::default()
        }
    }
}

pub fn run_regions(params: &SuiteParams) -> Result<SuiteOutput> {
    let mut out = SuiteOutput::default();
    if !params.q_list.is_empty() {
        let mut report = Report::new("regions.endpoints");
        for &q in &params.q_list {
            let p_hy = regions::hy_endpoint_p(q)?;
            report.push(
                Check::lower_bound(
                    format!("hy_endpoint_q{q}"),
                    "hy_endpoint_curve",
                    p_hy,
                    1.0,
                    0.0,
                )
                .with_note(format!("p({q}) = {p_hy}")),
            );
            let p_young = regions::young_endpoint_p(q)?;
            report.push(
                Check::lower_bound(
                    format!("young_endpoint_q{q}"),
                    "young_endpoint_curve",
                    p_young,
                    1.0,
                    0.0,
                )
                .with_note(format!("p({q}) = {p_young}")),
            );
        }
        out.reports.push(report.finish());
    }
    let grid = log_grid(2.0, 512.0, params.grid.unwrap_or(64).max(2));
    out.reports.push(regions::section2_report(&grid)?);
    Ok(out.sort())
}

pub fn run_twopoint(params: &SuiteParams) -> Result<SuiteOutput> {
    let q_list = if params.q_list.is_empty() {
        vec![2.1, 2.5, 3.0, 4.0, 6.0, 10.0]
    } else {
        params.q_list.clone()
    };
    let grid = params.grid.unwrap_or(1001);
    let count = params.count.unwrap_or(1000);
    let mut out = SuiteOutput::default();
    for &q in &q_list {
        out.reports.push(twopoint::check_f_max(q, grid)?);
        out.reports.push(twopoint::perturbative_check(q, 1e-4)?);
        out.reports.push(twopoint::phi_zero_analysis(q)?);

        let mut ode = Report::new(format!("twopoint.ode_residual.q{q}")).input("q", q);
        for k in 1..=9 {
            let x = 0.05 * k as f64;
            let residual = twopoint::ode_residual(q, x)?;
            ode.push(Check::upper_bound(
                format!("residual_x{x:.2}"),
                "ode_identity",
                residual,
                0.0,
                1e-7,
            ));
        }
        out.reports.push(ode.finish());

        let p = regions::hy_endpoint_p(q)?;
        let mut rng = ChaCha12Rng::seed_from_u64(params.seed ^ q.to_bits());
        let mut sweep = Report::new(format!("twopoint.sweep.q{q}"))
            .input("q", q)
            .input("count", count)
            .input("seed", params.seed);
        let mut worst_margin = f64::INFINITY;
        let mut all_pass = true;
        for _ in 0..count {
            let input = TwoPointInput::new(rng.gen::<f64>() * 10.0, rng.gen::<f64>() * 10.0, p, q)?;
            let report = twopoint::two_point_check(&input)?;
            all_pass &= report.passed();
            worst_margin = worst_margin.min(report.checks[0].margin);
        }
        sweep.push(
            Check::equality(
                "random_draws_all_pass",
                "two_point_inequality",
                if all_pass { 1.0 } else { 0.0 },
                1.0,
                0.0,
            )
            .with_note(format!("smallest margin {worst_margin:.3e}")),
        );
        out.reports.push(sweep.finish());
    }
    Ok(out.sort())
}

pub fn run_fourpoint(params: &SuiteParams) -> Result<SuiteOutput> {
    let q_list = if params.q_list.is_empty() {
        vec![1.5, 2.0, 3.0, 5.0]
    } else {
        params.q_list.clone()
    };
    let grid = params.grid.unwrap_or(201);
    let count = params.count.unwrap_or(1000);
    let mut out = SuiteOutput::default();
    let t_grid: Vec<f64> = (0..10_000)
        .map(|k| -50.0 + 100.0 * k as f64 / 9_999.0)
        .collect();
    for &q in &q_list {
        out.reports.push(fourpoint::check_g_max(q, grid)?);
        let p = regions::young_endpoint_p(q)?;
        out.reports.push(fourpoint::cosh_check(p, q, &t_grid)?);
        let mut rng = ChaCha12Rng::seed_from_u64(params.seed ^ q.to_bits());
        let mut sweep = Report::new(format!("fourpoint.sweep.q{q}"))
            .input("q", q)
            .input("count", count)
            .input("seed", params.seed);
        let mut worst_margin = f64::INFINITY;
        let mut all_pass = true;
        for _ in 0..count {
            let input = FourPointInput::new(
                rng.gen::<f64>() * 10.0,
                rng.gen::<f64>() * 10.0,
                rng.gen::<f64>() * 10.0,
                rng.gen::<f64>() * 10.0,
                p,
                q,
            )?;
            let report = fourpoint::four_point_check(&input)?;
            all_pass &= report.passed();
            worst_margin = worst_margin.min(report.checks[0].margin);
        }
        sweep.push(
            Check::equality(
                "random_draws_all_pass",
                "four_point_inequality",
                if all_pass { 1.0 } else { 0.0 },
                1.0,
                0.0,
            )
            .with_note(format!("smallest margin {worst_margin:.3e}")),
        );
        out.reports.push(sweep.finish());
    }
    let q_grid: Vec<f64> = (0..=300).map(|k| 1.0 + 3.0 * k as f64 / 300.0).collect();
    out.reports.push(fourpoint::pprime_check(&q_grid)?);

    let mut pde = Report::new("fourpoint.pde_residual").input("seed", params.seed);
    let mut rng = ChaCha12Rng::seed_from_u64(params.seed);
    let mut worst = 0.0_f64;
    for _ in 0..100 {
        let q = 1.1 + 3.9 * rng.gen::<f64>();
        let x = 0.02 + 0.96 * rng.gen::<f64>();
        let y = 0.02 + 0.96 * rng.gen::<f64>();
        worst = worst.max(fourpoint::pde_residual(q, x, y)?);
    }
    pde.push(Check::upper_bound(
        "max_scaled_residual",
        "pde_identity",
        worst,
        0.0,
        1e-9,
    ));
    out.reports.push(pde.finish());

    let mut hessian = Report::new("fourpoint.center_hessian");
    for &p in &[1.2, 4.0 / 6.0_f64.log2(), 2.0] {
        let q = fourpoint::center_constraint_q(p)?;
        let h = fourpoint::hessian_center(p, q)?;
        hessian.push(
            Check::upper_bound(
                format!("gradient_vanishes_p{p:.4}"),
                "center_hessian",
                h.grad[0].abs().max(h.grad[1].abs()),
                0.0,
                1e-11,
            )
            .with_note(format!(
                "hess diag {:?}, local max: {}",
                h.hess_diag, h.is_local_max
            )),
        );
    }
    out.reports.push(hessian.finish());
    Ok(out.sort())
}

pub fn run_certify(params: &SuiteParams) -> Result<SuiteOutput> {
    let mut out = SuiteOutput::default();
    let mut request = certify::reference_request();
    if let Some(threshold) = params.tol {
        request.threshold = threshold;
    }
    let cert = certify::certify_grid(&request)?;
    let qs: Vec<f64> = (0..500).map(|k| 1.0 + 3.0 * k as f64 / 499.0).collect();
    let us: Vec<f64> = (0..500).map(|k| 3.0 * k as f64 / 499.0).collect();
    out.reports.push(certify::lipschitz_bounds_check(&qs, &us)?);
    let mut summary = Report::new("certify.reference")
        .input("nodes", cert.nodes_checked)
        .input("threshold", cert.node_threshold);
    summary.push(
        Check::lower_bound(
            "worst_node_exceeds_threshold",
            "grid_certificate",
            cert.worst_node.2 - cert.eval_error_bound,
            cert.node_threshold,
            0.0,
        )
        .with_note(format!("worst node at {:?}", cert.worst_node)),
    );
    summary.push(Check::lower_bound(
        "interior_floor_positive",
        "grid_certificate",
        cert.guaranteed_floor,
        0.0,
        0.0,
    ));
    out.reports.push(summary.finish());
    out.certificates.push(cert);

    if params.grid.is_some() {
        // optional heuristic certificate for the two-variable extremal
        // margin on a rectangle away from the equality points, where the
        // margin stays above 9e-3
        let q = params.q_list.first().copied().unwrap_or(2.0);
        let rect = (0.55, 0.85, 0.1, 0.35);
        let function = certify::FunctionId::GMargin { q };
        let lipschitz = certify::estimate_lipschitz(function, rect, 41)?;
        let steps = 0.0025 / params.grid.unwrap_or(1) as f64;
        let request = certify::GridCertRequest {
            function,
            rectangle: rect,
            steps: (steps, steps),
            lipschitz,
            threshold: 5e-3,
            eval_error_bound: 1e-12,
            heuristic_lipschitz: true,
        };
        out.certificates.push(certify::certify_grid(&request)?);
    }
    Ok(out.sort())
}

pub fn run_energy(params: &SuiteParams) -> Result<SuiteOutput> {
    let kappa_list = if params.kappa_list.is_empty() {
        vec![1.5, 2.0, 3.0]
    } else {
        params.kappa_list.clone()
    };
    let dim = params.dim.unwrap_or(6).clamp(1, 8);
    let count = params.count.unwrap_or(200);
    let mut out = SuiteOutput::default();

    if let Some(text) = &params.set_text {
        let set = CubeSet::from_text(text)?;
        for &kappa in &kappa_list {
            let spec = spec_for_dim(set.dim(), params.samples, params.seed);
            out.reports
                .push(cube::energy_bounds_check(&set, kappa, &spec)?);
        }
        return Ok(out.sort());
    }

    // full-cube equality cases
    let mut equality = Report::new("energy.full_cube_equality").input("dim", dim);
    for d in 1..=dim {
        let set = CubeSet::full(d)?;
        for &kappa in &kappa_list {
            let r_tilde = (2.0_f64.powf(kappa) + 2.0).log2();
            let got = cube::energy_tilde(&set, kappa)?;
            let bound = (set.size() as f64).powf(r_tilde);
            equality.push(Check::equality(
                format!("reflected_equality_d{d}_k{kappa}"),
                "reflected_energy_bound",
                got,
                bound,
                1e-9 * bound,
            ));
        }
    }
    out.reports.push(equality.finish());

    let mut rng = ChaCha12Rng::seed_from_u64(params.seed);
    let mut sweep = Report::new("energy.random_sweep")
        .input("count", count)
        .input("dim", dim)
        .input("seed", params.seed);
    let mut all_pass = true;
    let mut failures = 0usize;
    for i in 0..count {
        let d = 1 + (rng.gen::<u32>() % dim);
        let kappa = kappa_list[i % kappa_list.len()];
        let set = cube::random_cube_set(d, &mut rng)?;
        let spec = spec_for_dim(d, params.samples, params.seed);
        let report = cube::energy_bounds_check(&set, kappa, &spec)?;
        if !report.passed() {
            all_pass = false;
            failures += 1;
        }
    }
    sweep.push(
        Check::equality(
            "random_sets_within_bounds",
            "additive_energy_bound",
            if all_pass { 1.0 } else { 0.0 },
            1.0,
            0.0,
        )
        .with_note(format!("{failures} failures of {count}")),
    );
    out.reports.push(sweep.finish());
    Ok(out.sort())
}

pub fn run_hy(params: &SuiteParams) -> Result<SuiteOutput> {
    let q_list = if params.q_list.is_empty() {
        vec![2.5, 3.0, 4.0]
    } else {
        params.q_list.clone()
    };
    let dim = params.dim.unwrap_or(2).clamp(1, 3);
    let count = params.count.unwrap_or(200);
    let mut out = SuiteOutput::default();
    let mut rng = ChaCha12Rng::seed_from_u64(params.seed);

    let mut sweep = Report::new("hy.random_sweep")
        .input("count", count)
        .input("dim", dim)
        .input("seed", params.seed);
    let mut all_pass = true;
    let mut worst_ratio = 0.0_f64;
    for i in 0..count {
        let d = 1 + (rng.gen::<u32>() % dim);
        let q = q_list[i % q_list.len()];
        let p = if params.p_list.is_empty() {
            regions::hy_endpoint_p(q)?
        } else {
            params.p_list[i % params.p_list.len()]
        };
        let f = cube::random_cube_function(d, &mut rng)?;
        let spec = spec_for_dim(d, params.samples, params.seed);
        let report = cube::hy_ratio(&f, p, q, &spec)?;
        all_pass &= report.passed();
        worst_ratio = worst_ratio.max(report.checks[0].observed);
    }
    sweep.push(
        Check::equality(
            "random_functions_all_pass",
            "hy_ratio",
            if all_pass { 1.0 } else { 0.0 },
            1.0,
            0.0,
        )
        .with_note(format!("largest ratio {worst_ratio:.12}")),
    );
    out.reports.push(sweep.finish());

    // full-cube equality through the exact even path
    let mut equality = Report::new("hy.full_cube_equality");
    let p4 = regions::hy_endpoint_p(4.0)?;
    for d in 1..=dim {
        let f = CubeSet::full(d)?.indicator()?;
        let report = cube::hy_ratio(&f, p4, 4.0, &QuadratureSpec::default())?;
        equality.push(Check::equality(
            format!("full_cube_q4_d{d}"),
            "hy_ratio",
            report.checks[0].observed,
            1.0,
            1e-9,
        ));
    }
    out.reports.push(equality.finish());

    // induction chain on a few random functions
    let mut induction_pass = true;
    for _ in 0..5 {
        let d = 2 + if dim >= 3 { rng.gen::<u32>() % 2 } else { 0 };
        let q = q_list[0];
        let p = regions::hy_endpoint_p(q)?;
        let f = cube::random_cube_function(d, &mut rng)?;
        let spec = spec_for_dim(d, params.samples, params.seed);
        induction_pass &= cube::induction_step_check(&f, p, q, &spec)?.passed();
    }
    let mut induction = Report::new("hy.induction_step").input("seed", params.seed);
    induction.push(Check::equality(
        "chain_holds",
        "induction_chain",
        if induction_pass { 1.0 } else { 0.0 },
        1.0,
        0.0,
    ));
    out.reports.push(induction.finish());
    Ok(out.sort())
}

pub fn run_young(params: &SuiteParams) -> Result<SuiteOutput> {
    let q_list = if params.q_list.is_empty() {
        vec![1.5, 2.0, 3.0]
    } else {
        params.q_list.clone()
    };
    let dim = params.dim.unwrap_or(6).clamp(1, 8);
    let count = params.count.unwrap_or(300);
    let mut out = SuiteOutput::default();
    let mut rng = ChaCha12Rng::seed_from_u64(params.seed);

    let mut sweep = Report::new("young.random_sweep")
        .input("count", count)
        .input("dim", dim)
        .input("seed", params.seed);
    let mut all_pass = true;
    let mut worst_ratio = 0.0_f64;
    for i in 0..count {
        let d = 1 + (rng.gen::<u32>() % dim);
        let q = q_list[i % q_list.len()];
        let p = if params.p_list.is_empty() {
            regions::young_endpoint_p(q)?
        } else {
            params.p_list[i % params.p_list.len()]
        };
        let f = cube::random_nonneg_cube_function(d, &mut rng)?;
        let g = cube::random_nonneg_cube_function(d, &mut rng)?;
        let report = cube::young_ratio(&f, &g, p, q)?;
        all_pass &= report.passed();
        worst_ratio = worst_ratio.max(report.checks[0].observed);
    }
    sweep.push(
        Check::equality(
            "random_pairs_all_pass",
            "young_ratio",
            if all_pass { 1.0 } else { 0.0 },
            1.0,
            0.0,
        )
        .with_note(format!("largest ratio {worst_ratio:.12}")),
    );
    out.reports.push(sweep.finish());

    let mut equality = Report::new("young.full_cube_equality");
    for &q in &q_list {
        let p = regions::young_endpoint_p(q)?;
        for d in 1..=dim {
            let f = CubeSet::full(d)?.indicator()?;
            let report = cube::young_ratio(&f, &f, p, q)?;
            equality.push(Check::equality(
                format!("full_cube_q{q}_d{d}"),
                "young_ratio",
                report.checks[0].observed,
                1.0,
                1e-9,
            ));
        }
    }
    out.reports.push(equality.finish());
    Ok(out.sort())
}

pub fn run_entropy(params: &SuiteParams) -> Result<SuiteOutput> {
    let dim = params.dim.unwrap_or(6).clamp(1, 8);
    let count = params.count.unwrap_or(300);
    let mut out = SuiteOutput::default();

    // uncertainty at the uniform equality case and at random functions
    for d in 1..=dim.min(2) {
        let scale = 2.0_f64.powf(d as f64 / 2.0);
        let f = cube::CubeFunction::from_real(d, vec![1.0 / scale; 1 << d])?;
        let spec = QuadratureSpec {
            method: Method::Tensor,
            abs_tol: 1e-9,
            ..QuadratureSpec::default()
        };
        out.reports.push(entropy::uncertainty_check(&f, &spec)?);
    }
    let mut rng = ChaCha12Rng::seed_from_u64(params.seed);
    let mut unc = Report::new("entropy.uncertainty_sweep")
        .input("seed", params.seed)
        .input("count", count.min(100));
    let mut all_pass = true;
    for _ in 0..count.min(100) {
        let d = 1 + (rng.gen::<u32>() % 2);
        let f = cube::random_cube_function(d, &mut rng)?;
        let f = f.scaled(f.l2_norm_sq().sqrt())?;
        let spec = QuadratureSpec {
            method: Method::Tensor,
            abs_tol: 1e-8,
            ..QuadratureSpec::default()
        };
        all_pass &= entropy::uncertainty_check(&f, &spec)?.passed();
    }
    unc.push(Check::equality(
        "random_functions_all_pass",
        "uncertainty_lower_bound",
        if all_pass { 1.0 } else { 0.0 },
        1.0,
        0.0,
    ));
    out.reports.push(unc.finish());

    // entropy of sums, exact
    let mut sums = Report::new("entropy.sum_sweep")
        .input("seed", params.seed)
        .input("count", count);
    let mut all_pass = true;
    for _ in 0..count {
        let d = 1 + (rng.gen::<u32>() % dim);
        let f =
            PmfOnLattice::from_cube_normalized(&cube::random_nonneg_cube_function(d, &mut rng)?)?;
        let g =
            PmfOnLattice::from_cube_normalized(&cube::random_nonneg_cube_function(d, &mut rng)?)?;
        all_pass &= entropy::entropy_sum_check(&f, &g)?.passed();
    }
    sums.push(Check::equality(
        "random_pairs_all_pass",
        "entropy_sum_bound",
        if all_pass { 1.0 } else { 0.0 },
        1.0,
        0.0,
    ));
    for d in 1..=dim {
        let f = PmfOnLattice::uniform_cube(d)?;
        let report = entropy::entropy_sum_check(&f, &f)?;
        sums.push(Check::equality(
            format!("uniform_equality_d{d}"),
            "entropy_sum_bound",
            report
                .checks
                .iter()
                .find(|c| c.id == "three_quarters_bound")
                .map(|c| c.observed)
                .unwrap_or(f64::NAN),
            1.5 * d as f64,
            0.0,
        ));
    }
    out.reports.push(sums.finish());

    // binomial probe with CSV data
    let ns = [100u64, 1000, 10_000];
    for &n in &ns {
        out.reports.push(entropy::binomial_entropy_probe(n)?);
    }
    let rows = entropy::binomial_entropy_rows(&ns)?;
    let mut csv = String::from("n,h_n,h_2n,ratio\n");
    for (n, h_n, h_2n, ratio) in rows {
        csv.push_str(&format!("{n},{h_n},{h_2n},{ratio}\n"));
    }
    out.data_files.push(("binomial_entropy.csv".into(), csv));
    Ok(out.sort())
}

pub fn run_triadic(params: &SuiteParams) -> Result<SuiteOutput> {
    let tol = params.tol.unwrap_or(1e-9);
    let mut out = SuiteOutput::default();
    let mut report = Report::new("triadic.optimal_exponent").input("tol", tol);
    let p = cube::triadic_optimal_p(tol)?;
    report.push(
        Check::equality(
            "triadic_p",
            "triadic_exponent",
            p,
            1.470_203_929_7,
            1e-8_f64.max(tol),
        )
        .with_note(format!("computed p = {p:.12}")),
    );
    let binary = cube::optimal_fourth_moment_exponent(2, tol, params.seed)?;
    report.push(
        Check::equality(
            "binary_analogue_matches_endpoint",
            "triadic_exponent",
            binary,
            4.0 / 6.0_f64.log2(),
            1e-8_f64.max(tol),
        )
        .with_note("the two-point machinery reproduces the known endpoint"),
    );
    out.reports.push(report.finish());
    Ok(out.sort())
}

pub fn run_figures(params: &SuiteParams) -> Result<SuiteOutput> {
    let resolution = params.resolution.unwrap_or(256);
    if resolution < 64 {
        return Err(Error::Usage(format!(
            "figure resolution must be at least 64, got {resolution}"
        )));
    }
    let mut out = SuiteOutput::default();

    // region boundaries in the (1/p, 1/q) square
    let mut fig1 = String::from("region,inv_p,inv_q\n");
    for (label, regime) in [
        ("classical", Regime::HyClassical),
        ("binary", Regime::HyBinary),
    ] {
        for (ip, iq) in regions::boundary_samples(regime, resolution)? {
            fig1.push_str(&format!("{label},{ip},{iq}\n"));
        }
    }
    out.data_files.push(("fig1.csv".into(), fig1));

    let mut fig3 = String::from("region,inv_p,inv_q\n");
    for (label, regime) in [
        ("classical", Regime::YoungClassical),
        ("binary", Regime::YoungBinary),
    ] {
        for (ip, iq) in regions::boundary_samples(regime, resolution)? {
            fig3.push_str(&format!("{label},{ip},{iq}\n"));
        }
    }
    out.data_files.push(("fig3.csv".into(), fig3));

    // the one-variable extremal profile at q = 4
    let profile = twopoint::f_profile(4.0, resolution as usize)?;
    let mut fig2 = String::from("x,f\n");
    for (x, f) in profile {
        fig2.push_str(&format!("{x},{f}\n"));
    }
    out.data_files.push(("fig2.csv".into(), fig2));

    // the two-variable extremal surface at q = 2
    let surface = fourpoint::g_surface(2.0, resolution as usize)?;
    let mut fig5 = String::from("x,y,g\n");
    for (x, y, g) in surface {
        fig5.push_str(&format!("{x},{y},{g}\n"));
    }
    out.data_files.push(("fig5.csv".into(), fig5));
    Ok(out)
}

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::basis::{basis_p, basis_p_derivative, log_rising_factorial_c, OpConfig, ShapeParams};
use crate::error::{parameter, Error, Result};
use crate::grid::Grid;
use crate::kernels::{bspline_n, composition_counts, kernel_k, kernel_k_remark, mu_density, MuDensity};
use crate::numerics::{
    integrate_semi_infinite, log_beta, log_gamma, numeric_derivative, truncated_series_sum, QuadratureConfig,
    SeriesConfig,
};
use crate::operators::{
    baskakov_classic, constant_image, genuine_durrmeyer, kantorovich_limit, kantorovich_rep, kantorovich_rho_one,
    linking_op, lookup, LimitForm, TestFunction,
};

use super::checks::{conjecture_sweep, verify_convexity, verify_lemma_omega, verify_representation};
use super::{params_string, SweepRow, VerifyReport};

/// A group of related checks that can be selected on its own.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Numerics,
    Basis,
    Lemma,
    Remark,
    Kernels,
    Representation,
    Constant,
    Endpoints,
    Moments,
    Convexity,
    Trend,
    Sweep,
}

impl Suite {
    pub const ALL: [Suite; 12] = [
        Suite::Numerics,
        Suite::Basis,
        Suite::Lemma,
        Suite::Remark,
        Suite::Kernels,
        Suite::Representation,
        Suite::Constant,
        Suite::Endpoints,
        Suite::Moments,
        Suite::Convexity,
        Suite::Trend,
        Suite::Sweep,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Numerics => "numerics",
            Suite::Basis => "basis",
            Suite::Lemma => "lemma",
            Suite::Remark => "remark",
            Suite::Kernels => "kernels",
            Suite::Representation => "representation",
            Suite::Constant => "constant",
            Suite::Endpoints => "endpoints",
            Suite::Moments => "moments",
            Suite::Convexity => "convexity",
            Suite::Trend => "trend",
            Suite::Sweep => "sweep",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL.into_iter().find(|suite| suite.name() == s.trim()).ok_or_else(|| {
            let names: Vec<&str> = Suite::ALL.iter().map(|s| s.name()).collect();
            parameter(format!("suite to be one of {} (got {s:?})", names.join(", ")))
        })
    }
}

/// Parameter values the lattice-driven suites range over.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Lattice {
    pub c: Vec<f64>,
    pub n: Vec<f64>,
    pub rho: Vec<u32>,
    pub k: Vec<usize>,
    pub j: Vec<u64>,
}

impl Default for Lattice {
    fn default() -> Self {
        Self {
            c: vec![0.0, 1.0],
            n: vec![5.0, 8.0],
            rho: vec![1, 2, 3, 5],
            k: vec![1, 2],
            j: vec![0, 1, 2, 5],
        }
    }
}

impl Lattice {
    pub fn is_empty(&self) -> bool {
        self.c.is_empty() || self.n.is_empty() || self.rho.is_empty() || self.k.is_empty() || self.j.is_empty()
    }
}

/// What [`verify_all`] runs and with which tolerances.
#[derive(Debug, Clone, PartialEq)]
pub struct VerifyProfile {
    pub lattice: Lattice,
    /// Replaces every check's threshold when set.
    pub tol: Option<f64>,
    /// Suites to run; empty means all.
    pub suites: Vec<Suite>,
    pub series: SeriesConfig,
    pub quad: QuadratureConfig,
}

impl Default for VerifyProfile {
    fn default() -> Self {
        Self {
            lattice: Lattice::default(),
            tol: None,
            suites: Vec::new(),
            series: SeriesConfig::default(),
            quad: QuadratureConfig::default(),
        }
    }
}

impl VerifyProfile {
    fn wants(&self, suite: Suite) -> bool {
        self.suites.is_empty() || self.suites.contains(&suite)
    }

    fn op(&self, rho: f64, k: usize) -> OpConfig {
        OpConfig {
            rho,
            k,
            series: self.series,
            quad: self.quad,
        }
    }
}

/// All reports of a run, in lattice order, plus the informational sweep data.
#[derive(Debug, Clone, Default, Serialize)]
pub struct VerifySummary {
    pub reports: Vec<VerifyReport>,
    /// Figure 1 configuration rows.
    pub sweep: Vec<SweepRow>,
    /// Conjecture exploration that never fails the run.
    pub observations: Vec<String>,
    pub warnings: Vec<String>,
}

impl VerifySummary {
    pub fn passed(&self) -> bool {
        self.reports.iter().all(|r| r.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &VerifyReport> {
        self.reports.iter().filter(|r| !r.passed)
    }
}

impl fmt::Display for VerifySummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for w in &self.warnings {
            writeln!(f, "warning: {w}")?;
        }
        for r in &self.reports {
            writeln!(f, "{r}")?;
        }
        for row in &self.sweep {
            writeln!(
                f,
                "sweep rho={:<4} sup={:.6e} l1={:.6e} points={}",
                row.rho, row.sup_dist, row.l1_dist, row.grid_points
            )?;
        }
        for o in &self.observations {
            writeln!(f, "note: {o}")?;
        }
        let failed = self.failures().count();
        write!(
            f,
            "{} checks, {} failed: {}",
            self.reports.len(),
            failed,
            if failed == 0 { "PASS" } else { "FAIL" }
        )
    }
}

type Job<'a> = Box<dyn Fn() -> Vec<VerifyReport> + Send + Sync + 'a>;

/// Step for the basis identity checks. The default step grows with `x` and is
/// too coarse for `p_{10,j}` at 1e-6.
const BASIS_STEP: f64 = 1e-4;

const MONOMIALS: [&str; 5] = ["e0", "e1", "e2", "e3", "e4"];
const SAMPLE_X: [f64; 3] = [0.25, 1.0, 2.0];

fn unit_grid(a: f64, b: f64, step: f64) -> Grid {
    Grid::new(a, b, step).expect("static grid")
}

fn max_abs<I: IntoIterator<Item = Result<f64>>>(it: I) -> Result<f64> {
    it.into_iter().try_fold(0.0f64, |acc, v| v.map(|v| acc.max(v.abs())))
}

fn report_or_error(
    name: &str,
    params: String,
    grid: String,
    threshold: f64,
    err: Result<f64>,
    sp: Option<&ShapeParams>,
) -> VerifyReport {
    let r = match err {
        Ok(e) => VerifyReport::new(name, params, grid, e, threshold),
        Err(e) => VerifyReport::errored(name, params, grid, threshold, &e),
    };
    match sp {
        Some(sp) => r.with_hypothesis_note(sp),
        None => r,
    }
}

/// Largest increase along a sequence that should be nonincreasing.
fn max_increase(seq: &[f64]) -> f64 {
    seq.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max)
}

fn lattice_shapes(profile: &VerifyProfile, warnings: &mut Vec<String>) -> Vec<ShapeParams> {
    let mut out = Vec::new();
    for &c in &profile.lattice.c {
        for &n in &profile.lattice.n {
            match ShapeParams::new(c, n) {
                Ok(sp) => out.push(sp),
                Err(e) => warnings.push(format!("skipping c={c} n={n}: {e}")),
            }
        }
    }
    out
}

fn numerics_jobs<'a>(p: &'a VerifyProfile) -> Vec<Job<'a>> {
    let quad = p.quad;
    vec![
        Box::new(move || {
            let err = max_abs((1..=5).flat_map(|x| {
                (1..=5).map(move |y| {
                    let (x, y) = (x as f64, y as f64);
                    let exact = log_beta(x, y)?.exp();
                    let center = if y > 1.0 { x / (y - 1.0) } else { 1.0 };
                    let r = integrate_semi_infinite(|t| t.powf(x - 1.0) * (1.0 + t).powf(-x - y), center, 1.0, &quad)?;
                    Ok(r.value - exact)
                })
            }));
            vec![report_or_error("log_beta_integral", "x,y in 1..5".into(), "t=[0,inf)".into(), 1e-8, err, None)]
        }),
        Box::new(move || {
            let err = max_abs((1..=40).flat_map(|a| {
                (1..=50).map(move |rate| {
                    let (a, rate) = (a as f64, rate as f64);
                    let lg = log_gamma(a)?;
                    let density = |t: f64| {
                        if t <= 0.0 {
                            return if a == 1.0 { rate } else { 0.0 };
                        }
                        (a * rate.ln() + (a - 1.0) * t.ln() - rate * t - lg).exp()
                    };
                    let r = integrate_semi_infinite(density, a / rate, a.sqrt() / rate, &quad)?;
                    Ok(r.value - 1.0)
                })
            }));
            vec![report_or_error("gamma_density_mass", "a in 1..40, rate in 1..50".into(), "t=[0,inf)".into(), 1e-8, err, None)]
        }),
        Box::new(|| {
            let polys: [&[f64]; 3] = [
                &[1.0, -2.0, 3.0, -0.5, 0.25, 0.1],
                &[0.0, 0.0, 0.0, 0.0, 0.0, 1.0],
                &[2.0, 0.0, 0.0, -1.0],
            ];
            let eval = |c: &[f64], d: usize, x: f64| -> f64 {
                // d-th derivative of Σ c_i x^i
                c.iter().enumerate().skip(d).fold(0.0, |acc, (i, ci)| {
                    let falling: f64 = ((i - d + 1)..=i).map(|m| m as f64).product();
                    acc + ci * falling * x.powi((i - d) as i32)
                })
            };
            let grid = &unit_grid(0.0, 5.0, 0.25);
            let err = max_abs(polys.iter().flat_map(|c| {
                (1..=3usize).flat_map(move |order| {
                    grid.points().map(move |x| {
                        let num = numeric_derivative(|t| eval(c, 0, t), x, order, None)?;
                        let exact = eval(c, order, x);
                        Ok((num - exact) / exact.abs().max(1.0))
                    })
                })
            }));
            vec![report_or_error("numeric_derivative", "degree<=5 order 1..3".into(), format!("x={grid}"), 1e-4, err, None)
                .with_note("relative error")]
        }),
    ]
}

fn basis_jobs<'a>(p: &'a VerifyProfile) -> Vec<Job<'a>> {
    let series = p.series;
    let mut jobs: Vec<Job<'a>> = Vec::new();
    for &c in &[0.0, 1.0, 2.0] {
        for &n in &[2.0, 5.0, 10.0] {
            let Ok(sp) = ShapeParams::new(c, n) else { continue };
            jobs.push(Box::new(move || {
                let grid = unit_grid(0.0, 4.0, 0.25);
                let gs = format!("x={grid}");
                let params = params_string(&sp, &[]);
                let partition = max_abs(grid.points().map(|x| {
                    let s = truncated_series_sum(
                        |j| Ok(basis_p(&sp, j as i64, x)),
                        |j| Ok(basis_p(&sp, j as i64, x)),
                        &series,
                    )?;
                    Ok(s.value - 1.0)
                }));
                let shifted = sp.with_n(n + c);
                let eq5 = max_abs(grid.points().flat_map(|x| {
                    (0..=30i64).map(move |j| {
                        let num = numeric_derivative(|t| basis_p(&sp, j, t), x, 1, Some(BASIS_STEP))?;
                        Ok(num - basis_p_derivative(&sp, j, x))
                    })
                }));
                let eq6 = shifted.and_then(|m| {
                    max_abs(grid.points().flat_map(|x| {
                        (1..=30i64).map(move |j| {
                            let lhs = x * numeric_derivative(|t| basis_p(&m, j - 1, t), x, 1, Some(BASIS_STEP))?;
                            let rhs = (j - 1) as f64 * basis_p(&m, j - 1, x) - j as f64 * basis_p(&m, j, x);
                            Ok(lhs - rhs)
                        })
                    }))
                });
                let min_p = grid
                    .points()
                    .flat_map(|x| (0..=30i64).map(move |j| basis_p(&sp, j, x)))
                    .fold(f64::INFINITY, f64::min);
                vec![
                    report_or_error("partition_of_unity", params.clone(), gs.clone(), series.mass_eps + 1e-12, partition, None),
                    report_or_error("basis_derivative", params.clone(), format!("{gs} j<=30"), 1e-6, eq5, None),
                    report_or_error("basis_index_identity", params.clone(), format!("{gs} j<=30"), 1e-6, eq6, None),
                    VerifyReport::new("basis_positivity", params, format!("{gs} j<=30"), (-min_p).max(0.0), 0.0),
                ]
            }));
        }
    }
    for &n in &[2.0, 5.0, 10.0] {
        jobs.push(Box::new(move || {
            let grid = unit_grid(0.0, 4.0, 0.25);
            let params = format!("c=1e-8 vs c=0 n={n}");
            let err = (|| {
                let a = ShapeParams::new(1e-8, n)?;
                let b = ShapeParams::new(0.0, n)?;
                Ok(grid
                    .points()
                    .flat_map(|x| (0..=30i64).map(move |j| (x, j)))
                    .map(|(x, j)| {
                        let (va, vb) = (basis_p(&a, j, x), basis_p(&b, j, x));
                        (va - vb).abs() / vb.abs().max(f64::MIN_POSITIVE)
                    })
                    .fold(0.0, f64::max))
            })();
            vec![report_or_error("basis_c_continuity", params, format!("x={grid} j<=30"), 1e-5, err, None)
                .with_note("relative error")]
        }));
    }
    jobs
}

fn lemma_jobs<'a>(p: &'a VerifyProfile, shapes: &'a [ShapeParams]) -> Vec<Job<'a>> {
    shapes
        .iter()
        .map(|sp| -> Job<'a> {
            Box::new(move || {
                let grid = unit_grid(0.0, 3.0, 0.05);
                verify_lemma_omega(sp, &p.lattice.rho, &p.lattice.j, &grid, 1e-8, &p.quad)
            })
        })
        .collect()
}

fn remark_jobs<'a>(p: &'a VerifyProfile, shapes: &'a [ShapeParams]) -> Vec<Job<'a>> {
    let mut jobs: Vec<Job<'a>> = Vec::new();
    for sp in shapes {
        for &rho in &p.lattice.rho {
            jobs.push(Box::new(move || {
                let grid = unit_grid(0.0, 3.0, 0.05);
                let cfg = p.op(rho as f64, 1);
                p.lattice
                    .j
                    .iter()
                    .map(|&j| {
                        let err = max_abs(grid.points().map(|t| {
                            Ok(kernel_k(sp, &cfg, j, t)? - kernel_k_remark(sp, rho, j, t, &p.series)?)
                        }));
                        let params = params_string(sp, &[("rho", rho.to_string()), ("j", j.to_string())]);
                        report_or_error("kernel_remark_form", params, format!("t={grid}"), 1e-10, err, Some(sp))
                    })
                    .collect()
            }));
        }
    }
    jobs
}

fn kernels_jobs<'a>(p: &'a VerifyProfile, shapes: &'a [ShapeParams]) -> Vec<Job<'a>> {
    let mut jobs: Vec<Job<'a>> = Vec::new();
    for sp in shapes {
        for &rho in &p.lattice.rho {
            jobs.push(Box::new(move || {
                let rho = rho as f64;
                let js: Vec<u64> = p.lattice.j.iter().copied().filter(|&j| j >= 1).collect();
                let err = max_abs(js.iter().flat_map(|&j| {
                    let density = MuDensity::new(sp, rho, j);
                    [0usize, 1].into_iter().map(move |moment| {
                        let mu = density.clone()?;
                        let (m, s) = mu.bump();
                        let r = integrate_semi_infinite(|t| mu.eval(t) * t.powi(moment as i32), m, s, &p.quad)?;
                        let expect = if moment == 0 { 1.0 } else { j as f64 / sp.n() };
                        Ok(r.value - expect)
                    })
                }));
                // The public density agrees with the one integrated above.
                let public = js
                    .iter()
                    .map(|&j| mu_density(sp, rho, j, j as f64 / sp.n()).map(|_| ()))
                    .collect::<Result<Vec<()>>>();
                let err = public.and(err);
                let js: Vec<String> = js.iter().map(|j| j.to_string()).collect();
                let params = params_string(sp, &[("rho", rho.to_string()), ("j", format!("{{{}}}", js.join(",")))]);
                vec![report_or_error("density_mass_mean", params, "t=[0,inf)".into(), 1e-8, err, Some(sp))]
            }));
        }
    }
    for &rho in &p.lattice.rho {
        for &k in &p.lattice.k {
            jobs.push(Box::new(move || {
                let params = format!("rho={rho} k={k}");
                let err = composition_counts(rho, k as u32).map(|w| {
                    let counts = &w.counts;
                    let mut bad = 0u32;
                    bad += u32::from(w.total() != (rho as u64).pow(k as u32));
                    bad += u32::from(counts.iter().ne(counts.iter().rev()));
                    bad += u32::from(counts.first() != Some(&1) || counts.last() != Some(&1));
                    bad as f64
                });
                vec![report_or_error("composition_counts", params, "exact".into(), 0.0, err, None)
                    .with_note("error counts violated invariants")]
            }));
        }
    }
    let mut ns: Vec<f64> = shapes.iter().map(|sp| sp.n()).collect();
    ns.sort_by(f64::total_cmp);
    ns.dedup();
    for n in ns {
        for &k in &p.lattice.k {
            jobs.push(Box::new(move || {
                let grid = unit_grid(0.0, 3.0, 0.01);
                let mut worst = 0.0f64;
                for t in grid.points() {
                    let hi = (n * t).floor() as i64;
                    let mut sum = 0.0;
                    for j in (hi - k as i64 - 1).max(0)..=hi + 1 {
                        let v = bspline_n(n, k, j, t);
                        worst = worst.max(-v);
                        let (a, b) = (j as f64 / n, (j + k as i64) as f64 / n);
                        if (t < a || t > b) && v != 0.0 {
                            worst = worst.max(v.abs());
                        }
                        sum += v;
                    }
                    if t >= (k as f64 - 1.0) / n {
                        worst = worst.max((sum - 1.0).abs());
                    }
                }
                vec![VerifyReport::new("bspline_shape", format!("n={n} k={k}"), format!("t={grid}"), worst, 1e-12)
                    .with_note("nonnegativity, support and partition of unity")]
            }));
        }
    }
    jobs
}

fn representation_jobs<'a>(p: &'a VerifyProfile, shapes: &'a [ShapeParams]) -> Vec<Job<'a>> {
    let mut jobs: Vec<Job<'a>> = Vec::new();
    for sp in shapes {
        for &rho in &p.lattice.rho {
            for &k in &p.lattice.k {
                jobs.push(Box::new(move || {
                    verify_representation(sp, &p.op(rho as f64, k), &MONOMIALS, &SAMPLE_X, 1e-5)
                }));
            }
        }
    }
    jobs
}

fn constant_jobs<'a>(p: &'a VerifyProfile, shapes: &'a [ShapeParams]) -> Vec<Job<'a>> {
    let mut jobs: Vec<Job<'a>> = Vec::new();
    for sp in shapes {
        for &k in &p.lattice.k {
            for &rho in &p.lattice.rho {
                jobs.push(Box::new(move || {
                    let grid = unit_grid(0.0, 3.0, 0.25);
                    let params = params_string(sp, &[("rho", rho.to_string()), ("k", k.to_string())]);
                    let cfg = p.op(rho as f64, k);
                    let e0 = TestFunction::monomial(0);
                    let values = grid
                        .points()
                        .map(|x| kantorovich_rep(sp, &cfg, &e0, x))
                        .collect::<Result<Vec<f64>>>();
                    let closed = constant_image(sp, rho as f64, k);
                    let (image, spread) = match (values, closed) {
                        (Ok(v), Ok(c)) => {
                            let hi = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                            let lo = v.iter().copied().fold(f64::INFINITY, f64::min);
                            (max_abs(v.iter().map(|x| Ok(x - c))), Ok(hi - lo))
                        }
                        (Err(e), _) | (_, Err(e)) => (Err(e.clone()), Err(e)),
                    };
                    let gs = format!("x={grid}");
                    vec![
                        report_or_error("constant_image", params.clone(), gs.clone(), 1e-8, image, Some(sp)),
                        report_or_error("constant_image_spread", params, gs, 1e-9, spread, Some(sp)),
                    ]
                }));
            }
            jobs.push(Box::new(move || {
                const RHOS: [f64; 5] = [1.0, 2.0, 5.0, 20.0, 100.0];
                let params = params_string(sp, &[("k", k.to_string()), ("rho", "{1,2,5,20,100}".into())]);
                let run = || -> Result<(f64, f64)> {
                    let e0 = TestFunction::monomial(0);
                    let limit =
                        kantorovich_limit(sp, k, &e0, 1.0, &p.series, &p.quad, LimitForm::Difference)?;
                    let exact = (log_rising_factorial_c(sp.n(), k, sp.c())? - k as f64 * sp.n().ln()).exp();
                    let dist = RHOS
                        .iter()
                        .map(|&rho| constant_image(sp, rho, k).map(|v| (v - exact).abs()))
                        .collect::<Result<Vec<f64>>>()?;
                    Ok(((limit - exact).abs(), max_increase(&dist)))
                };
                let (limit, trend) = match run() {
                    Ok((a, b)) => (Ok(a), Ok(b)),
                    Err(e) => (Err(e.clone()), Err(e)),
                };
                vec![
                    report_or_error("limit_constant_image", params_string(sp, &[("k", k.to_string())]), "x=1".into(), 1e-8, limit, Some(sp)),
                    report_or_error("constant_image_trend", params, "closed form".into(), 1e-12, trend, Some(sp))
                        .with_note("error is the largest increase of the distance to the limit"),
                ]
            }));
        }
    }
    jobs
}

fn endpoint_jobs<'a>(p: &'a VerifyProfile, shapes: &'a [ShapeParams]) -> Vec<Job<'a>> {
    let mut jobs: Vec<Job<'a>> = Vec::new();
    let xs = format!("x={{{}}}", SAMPLE_X.map(|x| x.to_string()).join(","));
    let smooth_fns = || {
        let mut v: Vec<TestFunction> = MONOMIALS.iter().map(|n| lookup(n).expect("catalog")).collect();
        v.push(TestFunction::bounded_smooth());
        v
    };
    for sp in shapes {
        let xs_one = xs.clone();
        jobs.push(Box::new(move || {
            let mut fs = smooth_fns();
            fs.push(TestFunction::abs_shift(1.0));
            fs.push(TestFunction::indicator(0.5, 1.5));
            let cfg = p.op(1.0, 0);
            let err = max_abs(fs.iter().flat_map(|f| {
                SAMPLE_X.iter().map(move |&x| Ok(linking_op(sp, f, x, &cfg)? - genuine_durrmeyer(sp, f, x, &cfg)?))
            }));
            vec![report_or_error("linking_rho1_durrmeyer", params_string(sp, &[]), xs_one.clone(), 1e-8, err, Some(sp))]
        }));
        for &k in &p.lattice.k {
            let xs = xs.clone();
            jobs.push(Box::new(move || {
                let cfg = p.op(1.0, k);
                let mut rejected = false;
                let mut diffs = Vec::new();
                for f in smooth_fns() {
                    for &x in &SAMPLE_X {
                        let a = kantorovich_rep(sp, &cfg, &f, x);
                        let b = kantorovich_rho_one(sp, k, &f, x, &cfg);
                        match (a, b) {
                            (Err(Error::Divergent { .. }), Err(Error::Divergent { .. })) => rejected = true,
                            (a, b) => diffs.push(a.and_then(|a| Ok(a - b?))),
                        }
                    }
                }
                let params = params_string(sp, &[("k", k.to_string()), ("rho", "1".into())]);
                let r = report_or_error("rep_rho1_closed_form", params, xs.clone(), 1e-8, max_abs(diffs), Some(sp));
                let r = if rejected {
                    r.with_note("divergent combinations rejected by both paths")
                } else {
                    r
                };
                let mut fs = smooth_fns();
                fs.push(TestFunction::abs_shift(1.0));
                let err = max_abs(fs.iter().flat_map(|f| {
                    SAMPLE_X.iter().map(move |&x| {
                        let a = kantorovich_limit(sp, k, f, x, &p.series, &p.quad, LimitForm::Difference)?;
                        let b = kantorovich_limit(sp, k, f, x, &p.series, &p.quad, LimitForm::BSpline)?;
                        Ok(a - b)
                    })
                }));
                let params = params_string(sp, &[("k", k.to_string())]);
                vec![r, report_or_error("limit_forms", params, xs.clone(), 1e-7, err, Some(sp))]
            }));
        }
    }
    jobs
}

fn moments_jobs<'a>(p: &'a VerifyProfile, shapes: &'a [ShapeParams]) -> Vec<Job<'a>> {
    let mut jobs: Vec<Job<'a>> = Vec::new();
    for sp in shapes {
        for &rho in &p.lattice.rho {
            jobs.push(Box::new(move || {
                let grid = unit_grid(0.0, 3.0, 0.5);
                let cfg = p.op(rho as f64, 0);
                let (e0, e1) = (TestFunction::monomial(0), TestFunction::monomial(1));
                let err = max_abs(grid.points().flat_map(|x| {
                    [
                        linking_op(sp, &e0, x, &cfg).map(|v| v - 1.0),
                        linking_op(sp, &e1, x, &cfg).map(|v| v - x),
                    ]
                }));
                let params = params_string(sp, &[("rho", rho.to_string())]);
                vec![report_or_error("linking_moments", params, format!("x={grid}"), 1e-8, err, Some(sp))]
            }));
        }
    }
    jobs
}

fn convexity_jobs<'a>(p: &'a VerifyProfile, shapes: &'a [ShapeParams]) -> Vec<Job<'a>> {
    let mut jobs: Vec<Job<'a>> = Vec::new();
    for sp in shapes {
        for &rho in &p.lattice.rho {
            for &k in &p.lattice.k {
                jobs.push(Box::new(move || {
                    let grid = unit_grid(0.0, 3.0, 0.25);
                    let cfg = p.op(rho as f64, k);
                    let mut out = Vec::new();
                    for f in [TestFunction::monomial(2), TestFunction::monomial(3)] {
                        for r in 1..=2 {
                            out.push(verify_convexity(sp, &cfg, r, &f, &grid, 1e-10));
                        }
                    }
                    let fs = [
                        TestFunction::bounded_smooth(),
                        TestFunction::exp_decay(1.0),
                        TestFunction::indicator(0.5, 1.5),
                        TestFunction::abs_shift(1.0),
                    ];
                    let min = fs
                        .iter()
                        .flat_map(|f| grid.points().map(move |x| kantorovich_rep(sp, &cfg, f, x)))
                        .try_fold(f64::INFINITY, |acc, v| v.map(|v| acc.min(v)));
                    let params = params_string(sp, &[("rho", rho.to_string()), ("k", k.to_string())]);
                    out.push(
                        report_or_error("positivity", params, format!("x={grid}"), 1e-10, min.map(|m| (-m).max(0.0)), Some(sp))
                            .with_note("nonnegative catalog functions"),
                    );
                    out
                }));
            }
        }
    }
    jobs
}

fn trend_jobs<'a>(p: &'a VerifyProfile, shapes: &'a [ShapeParams]) -> Vec<Job<'a>> {
    const RHOS: [f64; 4] = [1.0, 5.0, 25.0, 125.0];
    let mut jobs: Vec<Job<'a>> = Vec::new();
    for sp in shapes {
        for &x in &[0.5, 1.0, 2.0] {
            jobs.push(Box::new(move || {
                let f = TestFunction::bounded_smooth();
                let run = || -> Result<Vec<f64>> {
                    let classic = baskakov_classic(sp, &f, x, &p.series)?;
                    RHOS.iter()
                        .map(|&rho| Ok((linking_op(sp, &f, x, &p.op(rho, 0))? - classic).abs()))
                        .collect()
                };
                let params = params_string(sp, &[("x", x.to_string()), ("f", f.name().to_string())]);
                let dist = run();
                let note = match &dist {
                    Ok(d) => format!(
                        "distances {}",
                        d.iter().map(|v| format!("{v:.3e}")).collect::<Vec<_>>().join(" > ")
                    ),
                    Err(_) => String::new(),
                };
                vec![report_or_error("rho_trend", params, "rho={1,5,25,125}".into(), 0.0, dist.map(|d| max_increase(&d)), Some(sp))
                    .with_note(note)]
            }));
        }
    }
    jobs
}

/// The Figure 1 configuration: `c = 1, n = 5, k = 1, j = 1`.
fn figure_one() -> (ShapeParams, [u32; 3], Grid) {
    (
        ShapeParams::new(1.0, 5.0).expect("static parameters"),
        [10, 30, 150],
        unit_grid(0.0, 1.0, 1.0 / 512.0),
    )
}

fn sweep_jobs<'a>() -> Vec<Job<'a>> {
    vec![Box::new(|| {
        let (sp, rhos, grid) = figure_one();
        let params = params_string(&sp, &[("k", "1".into()), ("j", "1".into()), ("rho", "{10,30,150}".into())]);
        let rows = conjecture_sweep(&sp, 1, 1, &rhos, &grid);
        let fine = conjecture_sweep(&sp, 1, 1, &rhos, &grid.refined());
        let monotone = rows.clone().map(|rows| {
            let sup: Vec<f64> = rows.iter().map(|r| r.sup_dist).collect();
            let l1: Vec<f64> = rows.iter().map(|r| r.l1_dist).collect();
            max_increase(&sup).max(max_increase(&l1))
        });
        // Relative changes under halving the step, scaled so that the limits
        // (1% for L1, 5% for sup) both map to 1.
        let stability = rows.and_then(|rows| {
            let fine = fine?;
            Ok(rows.iter().zip(&fine).fold(0.0f64, |acc, (a, b)| {
                let l1 = (b.l1_dist - a.l1_dist).abs() / a.l1_dist / 0.01;
                let sup = (b.sup_dist - a.sup_dist).abs() / a.sup_dist / 0.05;
                acc.max(l1).max(sup)
            }))
        });
        vec![
            report_or_error("figure1_monotone", params.clone(), format!("t={grid}"), 0.0, monotone, None)
                .with_note("error is the largest increase of sup or L1 distance"),
            report_or_error("sweep_refinement", params, format!("t={grid} vs step/2"), 1.0, stability, None)
                .with_note("error is the relative change over 1% (L1) or 5% (sup)"),
        ]
    })]
}

/// Informational sweeps: the Figure 1 rows and an order-2 exploration.
/// Never fails the run.
fn sweep_observations(summary: &mut VerifySummary) {
    let (sp, rhos, grid) = figure_one();
    match conjecture_sweep(&sp, 1, 1, &rhos, &grid) {
        Ok(rows) => summary.sweep = rows,
        Err(e) => summary.warnings.push(format!("figure 1 sweep failed: {e}")),
    }
    let sp0 = ShapeParams::new(0.0, 5.0).expect("static parameters");
    match conjecture_sweep(&sp0, 2, 1, &[5, 20, 80], &grid) {
        Ok(rows) => {
            let sup: Vec<f64> = rows.iter().map(|r| r.sup_dist).collect();
            let decreasing = sup.windows(2).all(|w| w[1] < w[0]);
            let listed: Vec<String> = rows.iter().map(|r| format!("rho={} sup={:.3e}", r.rho, r.sup_dist)).collect();
            summary.observations.push(format!(
                "order 2 exploration (c=0 n=5 j=1): {} ({})",
                listed.join(", "),
                if decreasing { "sup decreasing" } else { "sup not monotone" }
            ));
        }
        Err(e) => summary.warnings.push(format!("order 2 sweep failed: {e}")),
    }
}

/// Runs the selected suites over the profile's lattice.
///
/// Checks run in parallel; reports come back in suite and lattice order.
pub fn verify_all(profile: &VerifyProfile) -> VerifySummary {
    let mut summary = VerifySummary::default();
    if profile.lattice.is_empty() {
        let w = "empty parameter lattice: lattice-driven suites are vacuous".to_string();
        log::warn!("{w}");
        summary.warnings.push(w);
    }
    let shapes = if profile.lattice.is_empty() {
        Vec::new()
    } else {
        lattice_shapes(profile, &mut summary.warnings)
    };
    let mut jobs: Vec<Job<'_>> = Vec::new();
    for suite in Suite::ALL {
        if !profile.wants(suite) {
            continue;
        }
        jobs.extend(match suite {
            Suite::Numerics => numerics_jobs(profile),
            Suite::Basis => basis_jobs(profile),
            Suite::Lemma => lemma_jobs(profile, &shapes),
            Suite::Remark => remark_jobs(profile, &shapes),
            Suite::Kernels => kernels_jobs(profile, &shapes),
            Suite::Representation => representation_jobs(profile, &shapes),
            Suite::Constant => constant_jobs(profile, &shapes),
            Suite::Endpoints => endpoint_jobs(profile, &shapes),
            Suite::Moments => moments_jobs(profile, &shapes),
            Suite::Convexity => convexity_jobs(profile, &shapes),
            Suite::Trend => trend_jobs(profile, &shapes),
            Suite::Sweep => sweep_jobs(),
        });
    }
    let batches: Vec<Vec<VerifyReport>> = jobs.par_iter().map(|job| job()).collect();
    summary.reports = batches
        .into_iter()
        .flatten()
        .map(|r| match profile.tol {
            Some(t) => r.with_threshold(t),
            None => r,
        })
        .collect();
    if profile.wants(Suite::Sweep) {
        sweep_observations(&mut summary);
    }
    summary
}

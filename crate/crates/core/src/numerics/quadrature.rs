//! Globally adaptive Gauss-Kronrod (10/21 point) quadrature on finite
//! intervals and on `[0, ∞)`.
//!
//! The semi-infinite driver lays out panels around the caller's bump
//! (`center`, `spread`), pushes the cutoff `T` outward by doubling until the
//! mass past `T` is below `tail_mass_eps`, and then still integrates
//! `[T, ∞)` under the map `t = T + T (1 - s) / s` so heavy polynomial tails
//! (Beta-prime kernels against growing test functions) are not dropped.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerances for the adaptive integrators.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_panels: usize,
    /// Mass allowed past the cutoff before the cutoff is doubled.
    pub tail_mass_eps: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            rel_tol: 1e-10,
            max_panels: 4096,
            tail_mass_eps: 1e-12,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0) || !(self.rel_tol > 0.0) {
            return Err(crate::error::parameter("abs_tol > 0 and rel_tol > 0"));
        }
        if !(self.tail_mass_eps > 0.0 && self.tail_mass_eps <= 1e-6) {
            return Err(crate::error::parameter("tail_mass_eps in (0, 1e-6]"));
        }
        if self.max_panels < 8 {
            return Err(crate::error::parameter("max_panels >= 8"));
        }
        Ok(())
    }

    /// Same configuration with both tolerances replaced.
    pub fn with_tol(mut self, tol: f64) -> Self {
        self.abs_tol = tol;
        self.rel_tol = tol;
        self
    }
}

/// An integral value together with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub err_est: f64,
}

const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689,
    0.973_906_528_517_171_720_077_964_012_084,
    0.930_157_491_355_708_226_001_207_180_059,
    0.865_063_366_688_984_510_732_096_688_423,
    0.780_817_726_586_416_897_063_717_578_345,
    0.679_409_568_299_024_406_234_327_365_114,
    0.562_757_134_668_604_683_339_000_099_272,
    0.433_395_394_129_247_190_799_265_943_165,
    0.294_392_862_701_460_198_131_126_603_103,
    0.148_874_338_981_631_210_884_826_001_129,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062,
    0.032_558_162_307_964_727_478_818_972_459,
    0.054_755_896_574_351_996_031_381_300_244,
    0.075_039_674_810_919_952_767_043_140_916,
    0.093_125_454_583_697_605_535_065_465_083,
    0.109_387_158_802_297_641_899_210_590_325,
    0.123_491_976_262_065_851_077_600_525_452,
    0.134_709_217_311_473_325_928_054_001_771,
    0.142_775_938_577_060_080_797_094_273_138,
    0.147_739_104_901_338_491_374_841_515_972,
    0.149_445_554_002_916_905_664_936_468_389,
];

/// Gauss weights for the nodes XGK[1], XGK[3], ..., XGK[9].
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893,
    0.149_451_349_150_580_593_145_776_339_657,
    0.219_086_362_515_982_043_995_534_934_228,
    0.269_266_719_309_996_355_091_226_921_569,
    0.295_524_224_714_752_870_173_892_994_651,
];

#[derive(Debug, Clone, Copy)]
enum Segment {
    Finite,
    /// `s in (0, 1]` mapped to `t = origin + scale (1 - s) / s`.
    Tail { origin: f64, scale: f64 },
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    seg: Segment,
    value: f64,
    err: f64,
    abs: f64,
    splittable: bool,
}

fn eval_mapped<F: Fn(f64) -> f64>(f: &F, seg: Segment, s: f64) -> f64 {
    match seg {
        Segment::Finite => f(s),
        Segment::Tail { origin, scale } => {
            let t = origin + scale * (1.0 - s) / s;
            let v = f(t);
            if v == 0.0 {
                0.0
            } else {
                v * scale / (s * s)
            }
        }
    }
}

/// One 21-point Kronrod rule with the QUADPACK error heuristic.
fn kronrod21<F: Fn(f64) -> f64>(f: &F, seg: Segment, a: f64, b: f64) -> (f64, f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut fv = [0.0f64; 21];
    fv[10] = eval_mapped(f, seg, center);
    for i in 0..10 {
        let dx = half * XGK[i];
        fv[i] = eval_mapped(f, seg, center - dx);
        fv[20 - i] = eval_mapped(f, seg, center + dx);
    }
    let mut resk = WGK[10] * fv[10];
    let mut resg = 0.0;
    let mut resabs = WGK[10] * fv[10].abs();
    for i in 0..10 {
        let pair = fv[i] + fv[20 - i];
        resk += WGK[i] * pair;
        resabs += WGK[i] * (fv[i].abs() + fv[20 - i].abs());
        if i % 2 == 1 {
            resg += WG[i / 2] * pair;
        }
    }
    let mean = 0.5 * resk;
    let mut resasc = WGK[10] * (fv[10] - mean).abs();
    for i in 0..10 {
        resasc += WGK[i] * ((fv[i] - mean).abs() + (fv[20 - i] - mean).abs());
    }
    let value = resk * half;
    let resabs = resabs * half.abs();
    let resasc = resasc * half.abs();
    let mut err = ((resk - resg) * half).abs();
    if resasc != 0.0 && err != 0.0 {
        err = resasc * (200.0 * err / resasc).powf(1.5).min(1.0);
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * resabs);
    }
    (value, err, resabs)
}

fn make_panel<F: Fn(f64) -> f64>(f: &F, seg: Segment, a: f64, b: f64) -> Panel {
    let (value, err, abs) = kronrod21(f, seg, a, b);
    Panel {
        a,
        b,
        seg,
        value,
        err,
        abs,
        splittable: true,
    }
}

fn adaptive<F: Fn(f64) -> f64>(f: &F, mut panels: Vec<Panel>, cfg: &QuadratureConfig) -> Result<Integral> {
    loop {
        let value: f64 = panels.iter().map(|p| p.value).sum();
        let err: f64 = panels.iter().map(|p| p.err).sum();
        if !value.is_finite() || !err.is_finite() {
            return Err(Error::Quadrature {
                value,
                err_est: err,
                panels: panels.len(),
            });
        }
        if err <= cfg.abs_tol.max(cfg.rel_tol * value.abs()) {
            return Ok(Integral {
                value,
                err_est: err,
            });
        }
        let worst = panels
            .iter()
            .enumerate()
            .filter(|(_, p)| p.splittable)
            .max_by(|x, y| x.1.err.total_cmp(&y.1.err))
            .map(|(i, _)| i);
        let Some(idx) = worst else {
            return Err(Error::Quadrature {
                value,
                err_est: err,
                panels: panels.len(),
            });
        };
        if panels.len() >= cfg.max_panels {
            return Err(Error::Quadrature {
                value,
                err_est: err,
                panels: panels.len(),
            });
        }
        let p = panels[idx];
        let mid = 0.5 * (p.a + p.b);
        let width = p.b - p.a;
        if width <= 64.0 * f64::EPSILON * p.a.abs().max(p.b.abs()).max(f64::MIN_POSITIVE) {
            panels[idx].splittable = false;
            continue;
        }
        let left = make_panel(f, p.seg, p.a, mid);
        let right = make_panel(f, p.seg, mid, p.b);
        // Roundoff: further splitting cannot sharpen a panel whose halves
        // already agree to machine precision.
        let no_gain = (left.err + right.err) >= p.err && p.err <= 50.0 * f64::EPSILON * p.abs;
        panels[idx] = left;
        panels.push(right);
        if no_gain {
            let n = panels.len();
            panels[idx].splittable = false;
            panels[n - 1].splittable = false;
        }
    }
}

fn sorted_breaks(a: f64, b: f64, interior: impl IntoIterator<Item = f64>) -> Vec<f64> {
    let mut pts: Vec<f64> = interior
        .into_iter()
        .filter(|&x| x.is_finite() && x > a && x < b)
        .collect();
    pts.push(a);
    pts.push(b);
    pts.sort_by(f64::total_cmp);
    pts.dedup_by(|x, y| (*x - *y).abs() <= 1e-14 * x.abs().max(1.0));
    pts
}

/// Integrates `f` over `[a, b]`.
pub fn integrate_interval<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<Integral> {
    integrate_interval_with_breaks(f, a, b, &[], cfg)
}

/// Integrates `f` over `[a, b]` with panels initially split at `breaks`
/// (points outside `(a, b)` are ignored). Use for kinks and jumps.
pub fn integrate_interval_with_breaks<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    breaks: &[f64],
    cfg: &QuadratureConfig,
) -> Result<Integral> {
    if a == b {
        return Ok(Integral {
            value: 0.0,
            err_est: 0.0,
        });
    }
    if b < a {
        let r = integrate_interval_with_breaks(f, b, a, breaks, cfg)?;
        return Ok(Integral {
            value: -r.value,
            err_est: r.err_est,
        });
    }
    let pts = sorted_breaks(a, b, breaks.iter().copied());
    let panels = pts
        .windows(2)
        .map(|w| make_panel(&f, Segment::Finite, w[0], w[1]))
        .collect();
    adaptive(&f, panels, cfg)
}

/// Integrates `f` over `[0, ∞)`. `center` and `spread` locate the bulk of
/// the integrand (a kernel's mean and standard deviation).
pub fn integrate_semi_infinite<F: Fn(f64) -> f64>(
    f: F,
    center: f64,
    spread: f64,
    cfg: &QuadratureConfig,
) -> Result<Integral> {
    integrate_semi_infinite_with_breaks(f, center, spread, &[], cfg)
}

/// As [`integrate_semi_infinite`], with extra initial panel boundaries.
pub fn integrate_semi_infinite_with_breaks<F: Fn(f64) -> f64>(
    f: F,
    center: f64,
    spread: f64,
    breaks: &[f64],
    cfg: &QuadratureConfig,
) -> Result<Integral> {
    let center = if center.is_finite() { center.max(0.0) } else { 0.0 };
    let spread = if spread.is_finite() && spread > 0.0 { spread } else { 1.0 };

    let mut cutoff = center + (10.0 * spread).max(1.0);
    const MAX_DOUBLINGS: usize = 16;
    for _ in 0..MAX_DOUBLINGS {
        let seg = Segment::Tail {
            origin: cutoff,
            scale: cutoff,
        };
        let (_, _, tail_abs) = kronrod21(&f, seg, 0.0, 1.0);
        if tail_abs < cfg.tail_mass_eps {
            break;
        }
        cutoff *= 2.0;
    }

    let mut interior: Vec<f64> = [-8.0, -4.0, -2.0, -1.0, 0.0, 1.0, 2.0, 4.0, 8.0, 16.0]
        .iter()
        .map(|s| center + s * spread)
        .collect();
    let mut p = cutoff / 2.0;
    while p > center + 16.0 * spread {
        interior.push(p);
        p /= 2.0;
    }
    interior.extend_from_slice(breaks);
    let pts = sorted_breaks(0.0, cutoff, interior);

    let mut panels: Vec<Panel> = pts
        .windows(2)
        .map(|w| make_panel(&f, Segment::Finite, w[0], w[1]))
        .collect();
    panels.push(make_panel(
        &f,
        Segment::Tail {
            origin: cutoff,
            scale: cutoff,
        },
        0.0,
        1.0,
    ));
    adaptive(&f, panels, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    #[test]
    fn exponential_and_gamma2() {
        let r = integrate_semi_infinite(|t: f64| (-t).exp(), 1.0, 1.0, &cfg()).unwrap();
        assert!((r.value - 1.0).abs() <= 1e-10);
        let r = integrate_semi_infinite(|t: f64| t * (-t).exp(), 2.0, 1.4, &cfg()).unwrap();
        assert!((r.value - 1.0).abs() <= 1e-10);
    }

    #[test]
    fn zero_integrand() {
        let r = integrate_semi_infinite(|_| 0.0, 1.0, 1.0, &cfg()).unwrap();
        assert_eq!(r.value, 0.0);
        assert_eq!(r.err_est, 0.0);
    }

    #[test]
    fn heavy_polynomial_tail() {
        // ∫₀^∞ (1+t)^{-3} dt = 1/2
        let r = integrate_semi_infinite(|t: f64| (1.0 + t).powi(-3), 0.5, 1.0, &cfg()).unwrap();
        assert!((r.value - 0.5).abs() <= 1e-10, "{}", r.value);
        // ∫₀^∞ (1+t)^{-2} dt = 1
        let r = integrate_semi_infinite(|t: f64| (1.0 + t).powi(-2), 0.5, 1.0, &cfg()).unwrap();
        assert!((r.value - 1.0).abs() <= 1e-10, "{}", r.value);
    }

    #[test]
    fn divergent_tail_reports_failure() {
        let err = integrate_semi_infinite(|t: f64| 1.0 / (1.0 + t), 0.5, 1.0, &cfg()).unwrap_err();
        assert!(matches!(err, Error::Quadrature { .. }));
    }

    #[test]
    fn interval_with_jump() {
        let f = |t: f64| if t < 0.3 { 1.0 } else { 2.0 };
        let r = integrate_interval_with_breaks(f, 0.0, 1.0, &[0.3], &cfg()).unwrap();
        assert!((r.value - 1.7).abs() < 1e-14);
        let r = integrate_interval(f, 0.0, 1.0, &cfg()).unwrap();
        assert!((r.value - 1.7).abs() < 1e-9);
    }

    #[test]
    fn reversed_interval_negates() {
        let r = integrate_interval(|t: f64| t * t, 1.0, 0.0, &cfg()).unwrap();
        assert!((r.value + 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn narrow_bump() {
        // Gamma(750, 750) density, mean 1, sd ~0.0365
        let a = 750.0f64;
        let lg = crate::numerics::log_gamma(a).unwrap();
        let f = move |t: f64| {
            if t <= 0.0 {
                0.0
            } else {
                (a * a.ln() + (a - 1.0) * t.ln() - a * t - lg).exp()
            }
        };
        let r = integrate_semi_infinite(f, 1.0, a.sqrt() / a, &cfg()).unwrap();
        assert!((r.value - 1.0).abs() < 1e-10, "{}", r.value);
    }

    #[test]
    fn config_validation() {
        assert!(cfg().validate().is_ok());
        let mut c = cfg();
        c.max_panels = 4;
        assert!(c.validate().is_err());
        let mut c = cfg();
        c.tail_mass_eps = 1e-3;
        assert!(c.validate().is_err());
    }
}

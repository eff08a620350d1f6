//! Closed forms of the dual integration problem: worst-case functions, the
//! initial error, the interpolating splines `s_y` and the extremal
//! representer that turns Hölder's inequality into an equality.

use serde::Serialize;

use crate::engine::{self, McConfig};
use crate::error::{Error, Result};
use crate::model::{check_pair, local_discrepancy_raw, BoxPair, PointSet, WeightSet};
use crate::quadrature::{rectangle_integrate, GaussLegendre};

/// A Hölder-conjugate pair `1/p + 1/q = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PExponent {
    p: f64,
    q: f64,
}

impl PExponent {
    pub fn from_p(p: f64) -> Result<Self> {
        if p.is_nan() || p < 1.0 {
            return Err(Error::invalid(format!("exponent p = {p} is not in [1, inf]")));
        }
        Ok(Self { p, q: conjugate(p) })
    }

    pub fn from_q(q: f64) -> Result<Self> {
        let pq = Self::from_p(q)?;
        Ok(Self { p: pq.q, q: pq.p })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        self.q
    }
}

fn conjugate(p: f64) -> f64 {
    if p == 1.0 {
        f64::INFINITY
    } else if p.is_infinite() {
        1.0
    } else {
        p / (p - 1.0)
    }
}

fn check_finite_p(p: f64) -> Result<()> {
    if p.is_finite() && p >= 1.0 {
        Ok(())
    } else {
        Err(Error::invalid(format!("p = {p} must lie in [1, inf)")))
    }
}

fn check_open_p(p: f64) -> Result<()> {
    if p.is_finite() && p > 1.0 {
        Ok(())
    } else {
        Err(Error::invalid(format!("p = {p} must lie in (1, inf)")))
    }
}

fn check_unit(x: f64, what: &str) -> Result<()> {
    if (0.0..=1.0).contains(&x) {
        Ok(())
    } else {
        Err(Error::invalid(format!("{what} = {x} is outside [0,1]")))
    }
}

/// `(p+2)/p · ((p+1)(p+2))^{-1/p}`, the normalising factor of `h_1`.
pub fn h1_scale(p: f64) -> f64 {
    (p + 2.0) / p * ((p + 1.0) * (p + 2.0)).powf(-1.0 / p)
}

/// `1 - x^{p+1} - (1-x)^{p+1}`, evaluated without cancellation near the ends.
pub(crate) fn bump(p: f64, x: f64) -> f64 {
    let s = x.min(1.0 - x);
    if s <= 0.0 {
        return 0.0;
    }
    (-((p + 1.0) * (-s).ln_1p()).exp_m1() - s.powf(p + 1.0)).max(0.0)
}

/// Univariate worst-case function.
pub fn h1(p: f64, x: f64) -> Result<f64> {
    check_finite_p(p)?;
    check_unit(x, "x")?;
    Ok(h1_scale(p) * bump(p, x))
}

/// Product worst-case function `h_d(x) = prod_j h_1(x_j)`.
pub fn hd(p: f64, x: &[f64]) -> Result<f64> {
    x.iter().try_fold(1.0, |acc, &t| Ok(acc * h1(p, t)?))
}

/// Initial error `((p+1)(p+2))^{-d/p}`, or 1 for `p = inf`.
pub fn initial_error(p: f64, d: usize) -> f64 {
    if p.is_infinite() {
        1.0
    } else {
        ((p + 1.0) * (p + 2.0)).powf(-(d as f64) / p)
    }
}

/// Spline `s_y(x) = h_1(y) (min(x,y) - xy) / (y(1-y))`, the image of the
/// constant density `h_1(y)/m(E_y)` on `E_y = {a <= y <= b}`.
pub fn spline_eval(p: f64, y: f64, x: f64) -> Result<f64> {
    check_open_p(p)?;
    if !(y > 0.0 && y < 1.0) {
        return Err(Error::invalid(format!("spline anchor y = {y} must lie in (0,1)")));
    }
    check_unit(x, "x")?;
    Ok(h1_scale(p) * bump(p, y) * (x.min(y) - x * y) / (y * (1.0 - y)))
}

/// Box norm `h_1(y) / (y(1-y))^{1/p}` of `s_y`; zero at `y ∈ {0, 1}`.
pub fn spline_norm(p: f64, y: f64) -> Result<f64> {
    check_open_p(p)?;
    check_unit(y, "y")?;
    if y == 0.0 || y == 1.0 {
        return Ok(0.0);
    }
    Ok(h1_scale(p) * bump(p, y) / (y * (1.0 - y)).powf(1.0 / p))
}

/// `int_0^1 s_y = h_1(y) / 2`.
pub fn spline_integral(p: f64, y: f64) -> Result<f64> {
    check_open_p(p)?;
    Ok(h1(p, y)? / 2.0)
}

/// Anchor data of one spline.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SplineProfile {
    pub p: f64,
    pub y: f64,
    pub value_at_anchor: f64,
    pub norm: f64,
    pub integral: f64,
}

impl SplineProfile {
    pub fn new(p: f64, y: f64) -> Result<Self> {
        Ok(Self {
            p,
            y,
            value_at_anchor: h1(p, y)?,
            norm: spline_norm(p, y)?,
            integral: spline_integral(p, y)?,
        })
    }
}

#[inline]
pub(crate) fn cstar_from_delta(delta: f64, p: f64, norm_p: f64) -> f64 {
    if p == 1.0 {
        if delta > 0.0 {
            1.0
        } else if delta < 0.0 {
            -1.0
        } else {
            0.0
        }
    } else if p == 2.0 {
        delta / norm_p
    } else {
        delta.abs().powf(p - 2.0) * delta / norm_p.powf(p - 1.0)
    }
}

/// Extremal representer `c*(a,b) = |Δ|^{p-2} Δ / ‖Δ‖_p^{p-1}` (`sign Δ` for
/// `p = 1`). `norm_p` is the discrepancy from whichever engine the caller used.
pub fn representer_cstar(ps: &PointSet, ws: &WeightSet, p: f64, norm_p: f64, bx: &BoxPair) -> Result<f64> {
    check_finite_p(p)?;
    if norm_p.is_nan() || norm_p <= 0.0 {
        return Err(Error::invalid(
            "representer needs a positive norm; a vanishing discrepancy has trivial duality",
        ));
    }
    let delta = crate::model::local_discrepancy(ps, ws, bx)?;
    Ok(cstar_from_delta(delta, p, norm_p))
}

/// `(T_1 c)(x) = int_{E_x} c`, with `E_x = [0,x] × [x,1]`, by composite Gauss
/// quadrature.
pub fn t1_apply_numeric(c: impl Fn(f64, f64) -> f64, x: f64, panels: usize) -> f64 {
    t1_apply_numeric_with_breaks(c, x, panels, &[])
}

/// As [`t1_apply_numeric`], additionally splitting panels at `breaks`, where
/// `c` may jump.
pub fn t1_apply_numeric_with_breaks(c: impl Fn(f64, f64) -> f64, x: f64, panels: usize, breaks: &[f64]) -> f64 {
    if x <= 0.0 || x >= 1.0 {
        return 0.0;
    }
    let rule = GaussLegendre::new(10);
    rectangle_integrate(&rule, (0.0, x), (x, 1.0), panels.max(1), breaks, c)
}

/// Where the reference norm in a duality check came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum NormSource {
    Exact,
    Mc,
}

/// Numerical check of Hölder equality for the extremal representer.
#[derive(Debug, Clone, Serialize)]
pub struct DualityReport {
    pub p: f64,
    pub q: f64,
    pub norm: f64,
    pub norm_source: NormSource,
    pub norm_stderr: f64,
    /// Estimate of `int c* Δ`, which should equal `norm`.
    pub pairing: f64,
    pub pairing_stderr: f64,
    pub pairing_z: f64,
    /// The error functional `L(f*) = -int c* Δ`.
    pub error_functional: f64,
    /// Estimate of `int |c*|^q`, which should equal 1.
    pub representer_q_integral: f64,
    pub representer_stderr: f64,
    pub representer_z: f64,
    pub samples: u64,
    pub seed: u64,
    pub trivial: bool,
}

impl DualityReport {
    pub fn passes(&self, z_max: f64) -> bool {
        self.trivial || (self.pairing_z.abs() <= z_max && self.representer_z.abs() <= z_max)
    }
}

const NORM_STREAM_OFFSET: u64 = 0x9e37_79b9_7f4a_7c15;

/// Computes `‖Δ‖_p` (exactly for even `p` within budget, else by Monte
/// Carlo on an independent seed), builds `c*`, and estimates the pairing and
/// the `q`-integral of `c*` on shared samples.
pub fn duality_check(ps: &PointSet, ws: &WeightSet, p: f64, cfg: McConfig, cell_budget: f64) -> Result<DualityReport> {
    check_pair(ps, ws)?;
    check_open_p(p)?;
    let q = conjugate(p);
    let even = p.fract() == 0.0 && (p as u64).is_multiple_of(2);
    let exact = if p == 2.0 {
        Some(engine::extreme_l2_exact(ps, ws)?)
    } else if even {
        match engine::extreme_lp_exact_even_p(ps, ws, p as u32, cell_budget) {
            Ok(r) => Some(r),
            Err(Error::BudgetExceeded { .. }) => None,
            Err(e) => return Err(e),
        }
    } else {
        None
    };
    let (norm, norm_stderr, norm_source) = match exact {
        Some(r) => (r.value, 0.0, NormSource::Exact),
        None => {
            let r = engine::extreme_lp_mc(
                ps,
                ws,
                p,
                McConfig::new(cfg.samples, cfg.seed ^ NORM_STREAM_OFFSET),
            )?;
            (r.value, r.stderr.unwrap_or(0.0), NormSource::Mc)
        }
    };

    let d = ps.dim();
    let mut report = DualityReport {
        p,
        q,
        norm,
        norm_source,
        norm_stderr,
        pairing: 0.0,
        pairing_stderr: 0.0,
        pairing_z: 0.0,
        error_functional: 0.0,
        representer_q_integral: 0.0,
        representer_stderr: 0.0,
        representer_z: 0.0,
        samples: cfg.samples,
        seed: cfg.seed,
        trivial: false,
    };
    if norm.is_nan() || norm <= 0.0 {
        report.trivial = true;
        return Ok(report);
    }

    let weights = ws.as_slice();
    let pairing = engine::mc_integral(d, cfg, |a, b| {
        let delta = local_discrepancy_raw(ps, weights, a, b);
        cstar_from_delta(delta, p, norm) * delta
    });
    let qint = engine::mc_integral(d, cfg, |a, b| {
        let delta = local_discrepancy_raw(ps, weights, a, b);
        cstar_from_delta(delta, p, norm).abs().powf(q)
    });
    let (pair, pair_se) = pairing.integral(d);
    let (qi, qi_se) = qint.integral(d);

    // first-order propagation of the reference norm's own error
    let rel = norm_stderr / norm;
    let pair_total = (pair_se.powi(2) + (norm_stderr * p).powi(2)).sqrt();
    let qi_total = (qi_se.powi(2) + (p * rel).powi(2)).sqrt();

    report.pairing = pair;
    report.pairing_stderr = pair_se;
    report.pairing_z = z_score(pair - norm, pair_total);
    report.error_functional = -pair;
    report.representer_q_integral = qi;
    report.representer_stderr = qi_se;
    report.representer_z = z_score(qi - 1.0, qi_total);
    Ok(report)
}

fn z_score(diff: f64, se: f64) -> f64 {
    if se > 0.0 {
        diff / se
    } else if diff == 0.0 {
        0.0
    } else {
        f64::INFINITY.copysign(diff)
    }
}

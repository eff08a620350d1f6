//! Curse-of-dimensionality constants and bounds for the extreme `L_p`
//! discrepancy with non-negative weights.
//!
//! The spline ratios `A_p` (integral) and `B_p` (norm) are both below one, so
//! at least `C_p^d (1 - 2 eps)` points are needed to reduce the initial error
//! by a factor `eps`, with `C_p = min(1/A_p, 1/B_p) > 1`.

use serde::Serialize;

use crate::duality::{bump, h1, h1_scale, initial_error, spline_norm};
use crate::error::{Error, Result};
use crate::model::PointSet;
use crate::optimize::{bisect, golden_section_max};
use crate::sum::pairwise_sum;

/// Largest `p` for which `y = 1/2` is proven to maximise the norm profile.
pub const HALF_MAXIMIZER_LIMIT: f64 = 8.0;

fn check_open_p(p: f64) -> Result<()> {
    if p.is_finite() && p > 1.0 {
        Ok(())
    } else {
        Err(Error::invalid(format!("p = {p} must lie in (1, inf)")))
    }
}

/// `A_p = (p+2)/(2p) · (1 - 2^-p)`.
pub fn a_const(p: f64) -> f64 {
    (p + 2.0) / (2.0 * p) * (1.0 - 0.5f64.powf(p))
}

/// Norm profile `F_p(y) = ‖s_y‖ / ‖h_1‖`; zero at the endpoints.
pub fn f_profile(p: f64, y: f64) -> f64 {
    if y <= 0.0 || y >= 1.0 {
        return 0.0;
    }
    h1_scale(p) * bump(p, y) / (y * (1.0 - y)).powf(1.0 / p)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum BMethod {
    ClosedFormHalf,
    Numeric,
}

impl BMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            BMethod::ClosedFormHalf => "CLOSED_FORM_HALF",
            BMethod::Numeric => "NUMERIC",
        }
    }
}

/// Which term realises `C_p = min(1/A_p, 1/B_p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum CBranch {
    InverseA,
    InverseB,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurseConstants {
    pub p: f64,
    pub a_p: f64,
    pub b_p: f64,
    pub c_p: f64,
    pub y_star: f64,
    pub b_method: BMethod,
    pub c_branch: CBranch,
}

/// Maximum of `F_p` found by a dense scan of `(0, 1/2]` and golden-section
/// refinement. The scan uses 5000 linear and 5000 logarithmic points.
pub fn b_const_numeric(p: f64) -> (f64, f64) {
    const HALF: usize = 5000;
    let linear = (1..=HALF).map(|i| 0.5 * i as f64 / HALF as f64);
    // logarithmic from 1e-12 up to 0.5
    let (lo_exp, hi_exp) = (-12.0f64, 0.5f64.log10());
    let logarithmic = (0..HALF).map(|i| 10f64.powf(lo_exp + (hi_exp - lo_exp) * i as f64 / (HALF - 1) as f64));
    let mut grid: Vec<f64> = linear.chain(logarithmic).collect();
    grid.sort_by(f64::total_cmp);
    grid.dedup();

    let (idx, _) = grid
        .iter()
        .enumerate()
        .map(|(i, &y)| (i, f_profile(p, y)))
        .fold((0, f64::NEG_INFINITY), |best, c| if c.1 > best.1 { c } else { best });
    let lo = if idx == 0 { 0.0 } else { grid[idx - 1] };
    let hi = grid.get(idx + 1).copied().unwrap_or(0.5).min(0.5);
    let (y, v) = golden_section_max(|y| f_profile(p, y), lo, hi, 1e-12);
    let at_half = f_profile(p, 0.5);
    if at_half >= v {
        (0.5, at_half)
    } else {
        (y, v)
    }
}

/// `B_p = max_y F_p(y)` with its maximiser. Closed form at `y = 1/2` for
/// `p <= 8`, numeric search above.
pub fn b_const(p: f64) -> Result<(f64, f64, BMethod)> {
    check_open_p(p)?;
    if p <= HALF_MAXIMIZER_LIMIT {
        return Ok((f_profile(p, 0.5), 0.5, BMethod::ClosedFormHalf));
    }
    let (y, v) = b_const_numeric(p);
    Ok((v, y, BMethod::Numeric))
}

/// `C_p = min(1/A_p, 1/B_p)`.
pub fn c_const(p: f64) -> Result<f64> {
    Ok(curse_constants(p)?.c_p)
}

/// Closed form of `1/B_p` valid for `p <= 8`:
/// `p/(p+2) · 2^p/(2^p - 1) · ((p+1)(p+2)/4)^{1/p}`.
pub fn c_const_closed_form(p: f64) -> f64 {
    let two_p = 2f64.powf(p);
    p / (p + 2.0) * two_p / (two_p - 1.0) * ((p + 1.0) * (p + 2.0) / 4.0).powf(1.0 / p)
}

pub fn curse_constants(p: f64) -> Result<CurseConstants> {
    check_open_p(p)?;
    let a_p = a_const(p);
    let (b_p, y_star, b_method) = b_const(p)?;
    let (c_p, c_branch) = if 1.0 / a_p <= 1.0 / b_p {
        (1.0 / a_p, CBranch::InverseA)
    } else {
        (1.0 / b_p, CBranch::InverseB)
    };
    Ok(CurseConstants {
        p,
        a_p,
        b_p,
        c_p,
        y_star,
        b_method,
        c_branch,
    })
}

fn check_eps(eps: f64, lo_open: bool) -> Result<()> {
    let ok = if lo_open { eps > 0.0 && eps < 1.0 } else { (0.0..1.0).contains(&eps) };
    if ok {
        Ok(())
    } else {
        Err(Error::invalid(format!("eps = {eps} out of range")))
    }
}

/// Lower bound `C_p^d (1 - 2 eps)_+` on the inverse discrepancy with
/// non-negative weights.
pub fn min_points_lower(p: f64, d: usize, eps: f64) -> Result<f64> {
    check_eps(eps, false)?;
    let c = c_const(p)?;
    Ok(c.powi(d as i32) * (1.0 - 2.0 * eps).max(0.0))
}

/// Lower bound on the `n`-th minimal error with non-negative weights:
/// `e_0 (1 - n A_p^d)_+ / (2 max(1, n B_p^d))`.
pub fn aggregate_error_lower(p: f64, d: usize, n: usize) -> Result<f64> {
    let k = curse_constants(p)?;
    let n = n as f64;
    let e0 = initial_error(p, d);
    let di = d as i32;
    Ok(e0 * (1.0 - n * k.a_p.powi(di)).max(0.0) / (2.0 * (n * k.b_p.powi(di)).max(1.0)))
}

/// A lower bound on the discrepancy of a node set under every choice of
/// non-negative weights, with the pieces it is built from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Certificate {
    pub value: f64,
    /// `I(h_d)`, the initial error.
    pub i_hd: f64,
    /// `I(f*)` for the fooling function `f* = sum_k prod_j s_{x_kj}`.
    pub i_fstar: f64,
    /// Triangle-inequality bound `sum_k prod_j ‖s_{x_kj}‖` on `‖f*‖`.
    pub u: f64,
}

/// `(I(h_d) - I(f*))_+ / (2 max(1, U))`.
pub fn certificate_lower_bound(ps: &PointSet, p: f64) -> Result<Certificate> {
    check_open_p(p)?;
    let i_hd = initial_error(p, ps.dim());
    let mut integrals = Vec::with_capacity(ps.len());
    let mut norms = Vec::with_capacity(ps.len());
    for x in ps.points() {
        let mut i_k = 1.0;
        let mut u_k = 1.0;
        for &t in x {
            i_k *= h1(p, t)? / 2.0;
            u_k *= spline_norm(p, t)?;
        }
        integrals.push(i_k);
        norms.push(u_k);
    }
    let i_fstar = pairwise_sum(&integrals);
    let u = pairwise_sum(&norms);
    let value = (i_hd - i_fstar).max(0.0) / (2.0 * u.max(1.0));
    Ok(Certificate { value, i_hd, i_fstar, u })
}

/// Explicit upper bound `⌈2 eps^-2 (2d ln(10e/eps) + ln 2)⌉` on the inverse
/// extreme `L_inf` discrepancy of QMC rules, for `d >= 2`.
pub fn gnewuch_linf_upper(eps: f64, d: usize) -> Result<u64> {
    if d < 2 {
        return Err(Error::invalid("the L_inf upper bound is stated for d >= 2"));
    }
    check_eps(eps, true)?;
    let v = 2.0 / (eps * eps) * (2.0 * d as f64 * (10.0 * std::f64::consts::E / eps).ln() + 2f64.ln());
    Ok(v.ceil() as u64)
}

/// `(1 - eps^2) (9/4)^d`, the classical `L_2` lower bound.
pub fn nw10_l2_lower(eps: f64, d: usize) -> Result<f64> {
    if !(0.0..=1.0).contains(&eps) {
        return Err(Error::invalid(format!("eps = {eps} outside [0,1]")));
    }
    Ok((1.0 - eps * eps) * 2.25f64.powi(d as i32))
}

/// Quantities used to prove `B_p < 1` in the three ranges of `p`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AppendixDiagnostics {
    pub p: f64,
    /// Second derivative of `log S` at `y = 1/2`; negative for `p <= 8`.
    pub l2_at_half: f64,
    /// Stationary point of `G_p`: the positive root of `1 - e^{2a} + 2ap`.
    pub a_star: f64,
    pub a_star_residual: f64,
    pub g_at_astar: f64,
    /// `G̃_p` at its stationary point `(p-1)/(2p)`.
    pub g_tilde_peak: f64,
}

/// `L''(1/2) = -p(p+1) 2^{2-p} / (1 - 2^-p) + 8/p`.
pub fn l2_at_half(p: f64) -> f64 {
    -p * (p + 1.0) * 2f64.powf(2.0 - p) / (1.0 - 0.5f64.powf(p)) + 8.0 / p
}

/// `G_p(a) = (p+2)/p · (1 - e^{-2a}) · (2/((p+2)a))^{1/p}`, a majorant of
/// `F_p((p+1)^{-1} a)` on `(0, (p+1)/2]`.
pub fn g_p(p: f64, a: f64) -> f64 {
    (p + 2.0) / p * (-(-2.0 * a).exp_m1()) * (2.0 / ((p + 2.0) * a)).powf(1.0 / p)
}

/// `G̃_p(a) = (p+2)/p · 2ap/(1+2ap) · (2/((p+2)a))^{1/p}`.
pub fn g_tilde(p: f64, a: f64) -> f64 {
    let t = 2.0 * a * p;
    (p + 2.0) / p * t / (1.0 + t) * (2.0 / ((p + 2.0) * a)).powf(1.0 / p)
}

/// `((p-1)(p+2)/p)^{1-1/p} · 4^{1/p} / p`, the value of `G̃_p` at `(p-1)/(2p)`.
pub fn g_tilde_peak(p: f64) -> f64 {
    ((p - 1.0) * (p + 2.0) / p).powf(1.0 - 1.0 / p) * 4f64.powf(1.0 / p) / p
}

pub fn appendix_b_diagnostics(p: f64) -> Result<AppendixDiagnostics> {
    check_open_p(p)?;
    let phi = |a: f64| 1.0 - (2.0 * a).exp() + 2.0 * a * p;
    // phi vanishes at 0, rises to its maximum at ln(p)/2 and then decreases
    let lo = 0.5 * p.ln();
    let a_star = bisect(phi, lo, p, 1e-13)
        .ok_or_else(|| Error::Internal(format!("no sign change of 1 - e^(2a) + 2ap on [{lo}, {p}]")))?;
    Ok(AppendixDiagnostics {
        p,
        l2_at_half: l2_at_half(p),
        a_star,
        a_star_residual: phi(a_star).abs(),
        g_at_astar: g_p(p, a_star),
        g_tilde_peak: g_tilde_peak(p),
    })
}

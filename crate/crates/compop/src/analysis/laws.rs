//! Decay-rate estimates and checks of the two-sided bounds on `a_n(C_φ)`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::opmatrix::SingularSpectrum;
use crate::symbols::{PolarGrid, SymbolMap};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BetaEstimate {
    pub beta: f64,
    /// `a_n^{1/n}` over the certified range, `n = 1, 2, …`.
    pub roots: Vec<f64>,
}

/// Minimum of `a_n^{1/n}` over the last ten certified entries.
pub fn beta_estimate(spec: &SingularSpectrum) -> Result<BetaEstimate> {
    let count = spec.certified_count();
    if count < 10 {
        return Err(Error::Insufficient(format!(
            "{count} certified entries, need 10"
        )));
    }
    let roots: Vec<f64> = (1..=count)
        .map(|n| spec.a(n).powf(1.0 / n as f64))
        .collect();
    let beta = roots[count - 10..]
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min);
    Ok(BetaEstimate { beta, roots })
}

pub const SANDWICH_TOL: f64 = 0.02;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SandwichReport {
    /// Grid lower estimate of `[φ]²`.
    pub lower: f64,
    pub beta: f64,
    pub sup_norm: f64,
    pub tol: f64,
    pub pass: bool,
}

/// `[φ]² - tol ≤ β ≤ ‖φ‖∞ + tol`.
pub fn sandwich_check(s: &SymbolMap, spec: &SingularSpectrum) -> Result<SandwichReport> {
    let sharp = s.pseudo_hyperbolic_sup(&PolarGrid::default())?;
    let sup = s.sup_norm()?;
    let beta = beta_estimate(spec)?.beta;
    let lower = sharp * sharp;
    let tol = SANDWICH_TOL;
    Ok(SandwichReport {
        lower,
        beta,
        sup_norm: sup,
        tol,
        pass: lower - tol <= beta && beta <= sup + tol,
    })
}

/// `s(r) = e^{-επ/2}`, `ε = 2π / log((1+r)/(1-r))`; `squared` gives `s²`.
pub fn s_of_r(r: f64, squared: bool) -> Result<f64> {
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::Invalid(format!("r = {r} not in (0, 1)")));
    }
    // log((1+r)/(1-r)) = 2 atanh r
    let eps = PI / r.atanh();
    let e = if squared { -eps * PI } else { -0.5 * eps * PI };
    Ok(e.exp())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeReport {
    pub r: f64,
    pub s_squared: f64,
    /// `log q_n` with `q_n = a_n √n / s^{2n}`, `n = 1, 2, …`.
    pub log_q: Vec<f64>,
    pub log_inf_q: f64,
    pub first_decade_min: f64,
    pub last_decade_min: f64,
    pub pass: bool,
}

/// Compares the certified spectrum with `s(r)^{2n}/√n`.
pub fn lower_law_probe(s: &SymbolMap, spec: &SingularSpectrum, r: f64) -> Result<ProbeReport> {
    let sup = s.sup_norm()?;
    if !(sup > r) {
        return Err(Error::Invalid(format!(
            "sup norm {sup} does not exceed r = {r}"
        )));
    }
    let count = spec.certified_count();
    if count < 10 {
        return Err(Error::Insufficient(format!(
            "{count} certified entries, need 10"
        )));
    }
    let s2 = s_of_r(r, true)?;
    let log_q: Vec<f64> = (1..=count)
        .map(|n| spec.a(n).ln() + 0.5 * (n as f64).ln() - n as f64 * s2.ln())
        .collect();
    let min = |v: &[f64]| v.iter().copied().fold(f64::INFINITY, f64::min);
    let first = min(&log_q[..10]);
    let last = min(&log_q[count - 10..]);
    Ok(ProbeReport {
        r,
        s_squared: s2,
        log_inf_q: min(&log_q),
        first_decade_min: first,
        last_decade_min: last,
        pass: last >= first + 0.5f64.ln(),
        log_q,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConstantFit {
    pub c: f64,
    pub c_extended: f64,
    pub range: (usize, usize),
    pub extended: (usize, usize),
    pub stable: bool,
}

/// Constant `C = max_n ratio(n)` over a range and over the range with its endpoint doubled,
/// judged stable when the two agree to within `tol` (relative).
pub fn fit_constant<F: Fn(usize) -> Option<f64>>(
    ratio: F,
    lo: usize,
    hi: usize,
    tol: f64,
) -> Result<ConstantFit> {
    let max_over = |a: usize, b: usize| -> Result<f64> {
        let vals: Vec<f64> = (a..=b).filter_map(&ratio).collect();
        if vals.is_empty() {
            return Err(Error::Insufficient(format!(
                "no usable ratios on [{a}, {b}]"
            )));
        }
        Ok(vals.into_iter().fold(f64::NEG_INFINITY, f64::max))
    };
    let c = max_over(lo, hi)?;
    let c2 = max_over(lo, 2 * hi)?;
    Ok(ConstantFit {
        c,
        c_extended: c2,
        range: (lo, hi),
        extended: (lo, 2 * hi),
        stable: (c2 / c - 1.0).abs() <= tol,
    })
}

/// Least-squares `δ` in `norms[n-1] ≈ C n^{-δ}` over `n ∈ [lo, hi]`.
pub fn power_decay_exponent(norms: &[f64], lo: usize, hi: usize) -> Result<(f64, f64)> {
    if lo < 1 || hi <= lo || hi > norms.len() {
        return Err(Error::Invalid(format!(
            "range [{lo}, {hi}] outside 1..={}",
            norms.len()
        )));
    }
    let pts: Vec<(f64, f64)> = (lo..=hi)
        .map(|n| ((n as f64).ln(), norms[n - 1].ln()))
        .collect();
    if pts.iter().any(|p| !p.1.is_finite()) {
        return Err(Error::Invalid("norms must be positive".into()));
    }
    let m = pts.len() as f64;
    let (mx, my) = (
        pts.iter().map(|p| p.0).sum::<f64>() / m,
        pts.iter().map(|p| p.1).sum::<f64>() / m,
    );
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let slope = sxy / sxx;
    Ok((-slope, (my - slope * mx).exp()))
}

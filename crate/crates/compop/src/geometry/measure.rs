//! Areas of `φ(𝔻)` inside annuli and Carleson windows.
//!
//! Areas are normalized, `dA = dx dy / π`. Exact values for the cusp integrate
//! vertical slices `|y| < H(s)` in `s = 1 - Re w`; Monte Carlo estimates use a
//! uniform stratum on the disk plus dyadic shells around the cusp point 1.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::domain::{CuspDomain, ImageDomain};
use crate::error::{Error, Result};
use crate::quad;
use crate::symbols::SymbolMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    MonteCarlo,
    PolarQuadrature,
    ExactArcs,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegionMeasure {
    pub value: f64,
    pub std_error: f64,
    pub method: Method,
    pub samples: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CarlesonWindow {
    pub xi: Complex64,
    pub h: f64,
}

impl CarlesonWindow {
    pub fn new(theta: f64, h: f64) -> Result<Self> {
        if !(h > 0.0 && h < 1.0) {
            return Err(Error::Invalid(format!("window size {h} not in (0, 1)")));
        }
        Ok(Self {
            xi: Complex64::from_polar(1.0, theta),
            h,
        })
    }

    pub fn contains(&self, z: Complex64) -> bool {
        (z - self.xi).norm() < self.h
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McParams {
    pub samples: u64,
    pub seed: u64,
    /// Number of dyadic half-shells `2^{-j-1} ≤ |w - 1| < 2^{-j}`, `Re w < 1`.
    pub shells: u32,
}

impl McParams {
    pub fn new(samples: u64, seed: u64) -> Self {
        Self {
            samples,
            seed,
            shells: 14,
        }
    }
}

fn stream_seed(seed: u64, stratum: u64) -> u64 {
    seed ^ 0x9E37_79B9_7F4A_7C15u64.wrapping_mul(stratum + 1)
}

/// Stratified estimate of `∫_𝔻 f dA` for `f` supported in the disk.
///
/// Strata: the part of the disk outside `D(1, 1)`, sampled through the square
/// `[-1, 1]²`; half-shells around 1 on the side `Re w < 1`; the innermost half-disk.
/// Samples are split evenly and each stratum has its own ChaCha stream.
pub fn mc_integral<F>(f: F, p: &McParams) -> RegionMeasure
where
    F: Fn(Complex64) -> f64 + Sync,
{
    let radii: Vec<f64> = (0..=p.shells).map(|j| 0.5f64.powi(j as i32)).collect();
    let strata = radii.len() + 1;
    let per = (p.samples / strata as u64).max(2);
    let parts: Vec<(f64, f64)> = (0..strata)
        .into_par_iter()
        .map(|idx| {
            let mut rng = ChaCha8Rng::seed_from_u64(stream_seed(p.seed, idx as u64));
            let (mut sum, mut sum2) = (0.0, 0.0);
            let measure;
            if idx == 0 {
                measure = 4.0 / PI;
                for _ in 0..per {
                    let w = Complex64::new(
                        2.0 * rng.random::<f64>() - 1.0,
                        2.0 * rng.random::<f64>() - 1.0,
                    );
                    let v = if w.norm_sqr() < 1.0 && (w - 1.0).norm() >= 1.0 {
                        f(w)
                    } else {
                        0.0
                    };
                    sum += v;
                    sum2 += v * v;
                }
            } else {
                let outer = radii[idx - 1];
                let inner = if idx < radii.len() { radii[idx] } else { 0.0 };
                measure = 0.5 * (outer * outer - inner * inner);
                for _ in 0..per {
                    let r = (inner * inner + rng.random::<f64>() * (outer * outer - inner * inner))
                        .sqrt();
                    let th = 0.5 * PI + PI * rng.random::<f64>();
                    let w = 1.0 + Complex64::from_polar(r, th);
                    let v = if w.norm_sqr() < 1.0 { f(w) } else { 0.0 };
                    sum += v;
                    sum2 += v * v;
                }
            }
            let n = per as f64;
            let mean = sum / n;
            let var = ((sum2 - n * mean * mean) / (n - 1.0)).max(0.0);
            (measure * mean, measure * measure * var / n)
        })
        .collect();
    let value = parts.iter().map(|p| p.0).sum();
    let var: f64 = parts.iter().map(|p| p.1).sum();
    RegionMeasure {
        value,
        std_error: var.sqrt(),
        method: Method::MonteCarlo,
        samples: per * strata as u64,
    }
}

fn image_of(s: &SymbolMap) -> Result<ImageDomain> {
    if !s.is_univalent {
        return Err(Error::Unsupported(format!("`{s}` is not univalent")));
    }
    ImageDomain::of(s).ok_or_else(|| Error::Unsupported(format!("no membership test for `{s}`")))
}

fn grid_from(lo: f64, hi: f64) -> Vec<f64> {
    let mut g: Vec<f64> = (0..=400)
        .map(|i| lo + (hi - lo) * (i as f64 / 400.0).powi(2))
        .collect();
    for i in 0..=120 {
        g.push(lo + (hi - lo) * 10f64.powf(-12.0 + 0.1 * i as f64));
    }
    quad::sort_breaks(&mut g);
    g
}

/// `∫_{s_lo}^{s_hi} ds ∫_{I(s)} g(1 - s + iy) dy / π`, with `I(s)` an interval in `y`.
fn slice_integral<I, G>(
    interval: I,
    weight: Option<G>,
    s_lo: f64,
    s_hi: f64,
    breaks: &[f64],
) -> (f64, f64)
where
    I: Fn(f64) -> (f64, f64),
    G: Fn(Complex64) -> f64,
{
    let nodes = quad::legendre(24);
    let f = |s: f64| -> f64 {
        let (lo, hi) = interval(s);
        if hi <= lo {
            return 0.0;
        }
        match &weight {
            None => hi - lo,
            Some(g) => {
                let (m, h) = (0.5 * (lo + hi), 0.5 * (hi - lo));
                h * nodes
                    .iter()
                    .map(|&(x, w)| w * g(Complex64::new(1.0 - s, m + h * x)))
                    .sum::<f64>()
            }
        }
    };
    let (v, e) = quad::integrate_split(f, s_lo, s_hi, breaks, 1e-12);
    (v / PI, e / PI)
}

impl CuspDomain {
    /// Exact `A[Ω ∩ {|w| ≥ 1 - t}]`.
    pub fn annulus_area(&self, t: f64) -> (f64, f64) {
        let a = self.a;
        let y0 = |s: f64| {
            if s <= t {
                0.0
            } else {
                ((s - t) * (2.0 - s - t)).max(0.0).sqrt()
            }
        };
        let height = |s: f64| (self.half_height(s) - y0(s)).max(0.0);
        let mut breaks = vec![t, 0.5 * a, 2.0 - t];
        let grid = grid_from(t.min(a), a);
        breaks.extend(quad::roots(|s| self.half_height(s) - y0(s), &grid));
        let (v, e) = quad::integrate_split(|s| 2.0 * height(s), 0.0, a, &breaks, 1e-12);
        (v / PI, e / PI)
    }

    fn window_interval(&self, w: &CarlesonWindow, s: f64) -> (f64, f64) {
        let dx = 1.0 - s - w.xi.re;
        let half = w.h * w.h - dx * dx;
        if half <= 0.0 {
            return (0.0, 0.0);
        }
        let half = half.sqrt();
        let hh = self.half_height(s);
        ((w.xi.im - half).max(-hh), (w.xi.im + half).min(hh))
    }

    fn window_breaks(&self, w: &CarlesonWindow) -> (f64, f64, Vec<f64>) {
        let a = self.a;
        let lo = (1.0 - w.xi.re - w.h).max(0.0);
        let hi = (1.0 - w.xi.re + w.h).min(a);
        let mut breaks = vec![0.5 * a];
        if hi > lo {
            let grid = grid_from(lo, hi);
            let half = |s: f64| {
                let dx = 1.0 - s - w.xi.re;
                (w.h * w.h - dx * dx).max(0.0).sqrt()
            };
            for sign in [-1.0, 1.0] {
                for side in [-1.0, 1.0] {
                    breaks.extend(quad::roots(
                        |s| w.xi.im + sign * half(s) - side * self.half_height(s),
                        &grid,
                    ));
                }
            }
        }
        (lo, hi, breaks)
    }

    /// Exact `∫_{S(ξ,h) ∩ Ω} g dA`; `g = None` gives the area.
    pub fn window_integral<G: Fn(Complex64) -> f64>(
        &self,
        w: &CarlesonWindow,
        g: Option<G>,
    ) -> (f64, f64) {
        let (lo, hi, breaks) = self.window_breaks(w);
        if hi <= lo {
            return (0.0, 0.0);
        }
        slice_integral(|s| self.window_interval(w, s), g, lo, hi, &breaks)
    }

    /// `sup{|Im z| : z ∈ Ω, Re z ≥ 1 - h}`.
    pub fn imaginary_extent(&self, h: f64) -> f64 {
        // H increases on (0, a/2] and decreases afterwards
        self.half_height(h.min(0.5 * self.a))
    }
}

fn lens_area(r1: f64, r2: f64, d: f64) -> f64 {
    if d >= r1 + r2 {
        return 0.0;
    }
    if d <= (r1 - r2).abs() {
        return PI * r1.min(r2).powi(2);
    }
    let a1 = ((d * d + r1 * r1 - r2 * r2) / (2.0 * d * r1))
        .clamp(-1.0, 1.0)
        .acos();
    let a2 = ((d * d + r2 * r2 - r1 * r1) / (2.0 * d * r2))
        .clamp(-1.0, 1.0)
        .acos();
    r1 * r1 * (a1 - a1.sin() * a1.cos()) + r2 * r2 * (a2 - a2.sin() * a2.cos())
}

/// `A[φ(𝔻) ∩ {|w| ≥ 1 - t}]`.
pub fn annulus_area(
    s: &SymbolMap,
    t: f64,
    method: Method,
    mc: Option<&McParams>,
) -> Result<RegionMeasure> {
    if !(t > 0.0 && t <= 1.0) {
        return Err(Error::Invalid(format!("t = {t} not in (0, 1]")));
    }
    let dom = image_of(s)?;
    match method {
        Method::MonteCarlo => {
            let p =
                mc.ok_or_else(|| Error::Invalid("Monte Carlo needs samples and a seed".into()))?;
            let r0 = 1.0 - t;
            Ok(mc_integral(
                |w| {
                    if w.norm() >= r0 && dom.contains(w) {
                        1.0
                    } else {
                        0.0
                    }
                },
                p,
            ))
        }
        _ => {
            let (value, err) = match dom {
                ImageDomain::Disk { radius } => {
                    ((radius * radius - (1.0 - t).powi(2)).max(0.0), 0.0)
                }
                ImageDomain::Cusp(c) => c.annulus_area(t),
            };
            Ok(RegionMeasure {
                value,
                std_error: err,
                method: Method::ExactArcs,
                samples: 0,
            })
        }
    }
}

/// `A[φ(𝔻) ∩ S(ξ, h)]`.
pub fn window_area(
    s: &SymbolMap,
    w: &CarlesonWindow,
    method: Method,
    mc: Option<&McParams>,
) -> Result<RegionMeasure> {
    let dom = image_of(s)?;
    match method {
        Method::MonteCarlo => {
            let p =
                mc.ok_or_else(|| Error::Invalid("Monte Carlo needs samples and a seed".into()))?;
            Ok(mc_integral(
                |z| {
                    if w.contains(z) && dom.contains(z) {
                        1.0
                    } else {
                        0.0
                    }
                },
                p,
            ))
        }
        _ => {
            let (value, err) = match dom {
                ImageDomain::Disk { radius } => (lens_area(radius, w.h, 1.0) / PI, 0.0),
                ImageDomain::Cusp(c) => c.window_integral(w, None::<fn(Complex64) -> f64>),
            };
            Ok(RegionMeasure {
                value,
                std_error: err,
                method: Method::ExactArcs,
                samples: 0,
            })
        }
    }
}

/// `m(t) = A[φ(𝔻) ∩ {|w| ≥ 1 - t}] / t²`, evaluated exactly.
pub fn m_functional(s: &SymbolMap, t: f64) -> Result<f64> {
    Ok(annulus_area(s, t, Method::ExactArcs, None)?.value / (t * t))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MFunctional {
    pub value: f64,
    pub partial: f64,
    pub remainder: f64,
    /// Fitted decay exponent of `m(2^{-k} t) ≈ c 2^{-αk}`.
    pub alpha: Option<f64>,
    pub terms: Vec<f64>,
}

/// `M(t) = Σ_{k ≥ 0} m(2^{-k} t)`, summed to `k_max` with a fitted power-law remainder.
pub fn big_m_functional(s: &SymbolMap, t: f64, k_max: usize) -> Result<MFunctional> {
    let terms = (0..=k_max)
        .map(|k| m_functional(s, t * 0.5f64.powi(k as i32)))
        .collect::<Result<Vec<_>>>()?;
    big_m_from_terms(terms)
}

pub fn big_m_from_terms(terms: Vec<f64>) -> Result<MFunctional> {
    let k_max = terms.len() - 1;
    if k_max < 4 {
        return Err(Error::Invalid("k_max must be at least 4".into()));
    }
    let partial: f64 = terms.iter().sum();
    let last = &terms[k_max - 4..];
    if last.iter().all(|&v| v == 0.0) {
        return Ok(MFunctional {
            value: partial,
            partial,
            remainder: 0.0,
            alpha: None,
            terms,
        });
    }
    if last.iter().any(|&v| v <= 0.0) {
        return Err(Error::DivergentTail(0.0));
    }
    let xs: Vec<f64> = (k_max - 4..=k_max).map(|k| k as f64).collect();
    let ys: Vec<f64> = last.iter().map(|v| v.log2()).collect();
    let n = 5.0;
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let slope = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (x - mx) * (y - my))
        .sum::<f64>()
        / xs.iter().map(|x| (x - mx).powi(2)).sum::<f64>();
    let alpha = -slope;
    if !(alpha > 0.2) {
        return Err(Error::DivergentTail(alpha));
    }
    let c = (my - slope * mx).exp2();
    let q = 0.5f64.powf(alpha);
    let remainder = c * q.powi(k_max as i32 + 1) / (1.0 - q);
    Ok(MFunctional {
        value: partial + remainder,
        partial,
        remainder,
        alpha: Some(alpha),
        terms,
    })
}

/// `n(1-t)^n + √M(t)` minimized over a grid of `t`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZincTable {
    pub t: Vec<f64>,
    pub big_m: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZincBound {
    pub n: usize,
    pub value: f64,
    pub t_star: f64,
}

/// Default grid `t = 2^{-j/4}`, `j = 1..=80`.
pub fn default_t_grid() -> Vec<f64> {
    (1..=80).map(|j| 2f64.powf(-(j as f64) / 4.0)).collect()
}

impl ZincTable {
    pub fn new(s: &SymbolMap, t_grid: &[f64], k_max: usize) -> Result<Self> {
        let mut cache = std::collections::HashMap::<u64, f64>::new();
        let mut m_at = |t: f64| -> Result<f64> {
            if let Some(v) = cache.get(&t.to_bits()) {
                return Ok(*v);
            }
            let v = m_functional(s, t)?;
            cache.insert(t.to_bits(), v);
            Ok(v)
        };
        let mut big_m = Vec::with_capacity(t_grid.len());
        for &t in t_grid {
            if !(t > 0.0 && t < 1.0) {
                return Err(Error::Invalid(format!("grid value {t} not in (0, 1)")));
            }
            let terms = (0..=k_max)
                .map(|k| m_at(t * 0.5f64.powi(k as i32)))
                .collect::<Result<Vec<_>>>()?;
            big_m.push(big_m_from_terms(terms)?.value);
        }
        Ok(Self {
            t: t_grid.to_vec(),
            big_m,
        })
    }

    pub fn bound(&self, n: usize) -> ZincBound {
        let mut best = ZincBound {
            n,
            value: f64::INFINITY,
            t_star: f64::NAN,
        };
        for (&t, &m) in self.t.iter().zip(&self.big_m) {
            let v = n as f64 * (1.0 - t).powi(n as i32) + m.sqrt();
            if v < best.value {
                best = ZincBound {
                    n,
                    value: v,
                    t_star: t,
                };
            }
        }
        best
    }
}

pub fn zinc_upper_bound(s: &SymbolMap, n: usize, t_grid: &[f64]) -> Result<ZincBound> {
    Ok(ZincTable::new(s, t_grid, 40)?.bound(n))
}

pub fn cusp_imaginary_law(h: f64) -> Result<f64> {
    let d = CuspDomain::default();
    if !(h > 0.0 && h <= d.a - 1.0) {
        return Err(Error::Invalid(format!("h = {h} not in (0, a - 1]")));
    }
    Ok(d.imaginary_extent(h))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InclusionReport {
    pub tested: usize,
    pub failures: usize,
}

/// Boundary points of `D(x, h²/(4a))`, `0 ≤ x ≤ 1 - h`, tested for membership in Ω.
pub fn disk_inclusion_check(points: usize) -> InclusionReport {
    let d = CuspDomain::default();
    let hs: Vec<f64> = (0..8).map(|j| (d.a - 1.0) * 0.5f64.powi(j)).collect();
    let xs_per = 10;
    let per_circle = (points / (hs.len() * (xs_per + 1))).max(8);
    let mut rep = InclusionReport {
        tested: 0,
        failures: 0,
    };
    for &h in &hs {
        let rad = h * h / (4.0 * d.a) * (1.0 - 1e-9);
        for i in 0..=xs_per {
            let x = (1.0 - h) * i as f64 / xs_per as f64;
            for j in 0..per_circle {
                let w = Complex64::new(x, 0.0)
                    + Complex64::from_polar(rad, 2.0 * PI * j as f64 / per_circle as f64);
                rep.tested += 1;
                if !d.contains(w) {
                    rep.failures += 1;
                }
            }
        }
    }
    rep
}

/// Largest `δ` with `1 - |z| ≥ δ |1 - z|` on Ω, and the boundary point attaining it.
pub fn sector_constant() -> (f64, Complex64) {
    let d = CuspDomain::default();
    let ratio = |s: f64| {
        let z = Complex64::new(1.0 - s, d.half_height(s));
        ((1.0 - z.norm()) / (1.0 - z).norm(), z)
    };
    let n = 20000;
    let mut best = (f64::INFINITY, 0.0);
    for i in 1..n {
        let s = d.a * i as f64 / n as f64;
        let (v, _) = ratio(s);
        if v < best.0 {
            best = (v, s);
        }
    }
    let (mut lo, mut hi) = (
        (best.1 - d.a / n as f64).max(1e-12),
        (best.1 + d.a / n as f64).min(d.a),
    );
    let g = 0.5 * (5f64.sqrt() - 1.0);
    for _ in 0..100 {
        let m1 = hi - g * (hi - lo);
        let m2 = lo + g * (hi - lo);
        if ratio(m1).0 < ratio(m2).0 {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    let (v, z) = ratio(0.5 * (lo + hi));
    (v.min(best.0), z)
}

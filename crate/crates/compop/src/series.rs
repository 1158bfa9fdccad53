//! Taylor coefficients of `φ^k` and space-tagged norms.
//!
//! Coefficients come from sampling on a circle `|z| = ρ`, a discrete Fourier
//! inversion and division by `ρ^j`. A second radius `ρ' = (1 + ρ)/2` is run
//! alongside; the term-wise disagreement becomes the coefficient error bound.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::ImageDomain;
use crate::symbols::SymbolMap;

/// Relative tolerance of the two-radius check.
pub const TWO_RADIUS_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Space {
    Dirichlet,
    DirichletStar,
    Hardy,
    Bergman,
}

impl FromStr for Space {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dirichlet" => Ok(Self::Dirichlet),
            "dirichlet-star" => Ok(Self::DirichletStar),
            "hardy" => Ok(Self::Hardy),
            "bergman" => Ok(Self::Bergman),
            _ => Err(Error::Invalid(format!("unknown space `{s}`"))),
        }
    }
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Dirichlet => "dirichlet",
            Self::DirichletStar => "dirichlet-star",
            Self::Hardy => "hardy",
            Self::Bergman => "bergman",
        })
    }
}

impl Space {
    /// Squared-norm weight of `z^n`.
    pub fn weight(&self, n: usize) -> f64 {
        match self {
            Self::Dirichlet => n.max(1) as f64,
            Self::DirichletStar if n == 0 => 0.0,
            Self::DirichletStar => n as f64,
            Self::Hardy => 1.0,
            Self::Bergman => 1.0 / (n as f64 + 1.0),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PowerSeries {
    pub coeffs: Vec<Complex64>,
    pub sampling_radius: f64,
    pub error_bound: f64,
    /// Two-radius check failed.
    pub aliasing: bool,
    /// Coefficients flushed to zero at the roundoff or underflow floor.
    pub flushed: usize,
}

impl PowerSeries {
    pub fn exact(coeffs: Vec<Complex64>) -> Self {
        Self {
            coeffs,
            sampling_radius: 0.0,
            error_bound: 0.0,
            aliasing: false,
            flushed: 0,
        }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    /// `S_n f`: keep `c_0 .. c_n`.
    pub fn truncate(&self, n: usize) -> Self {
        let mut out = self.clone();
        out.coeffs.truncate(n + 1);
        out
    }

    pub fn space_norm(&self, space: Space) -> Result<f64> {
        if space == Space::DirichletStar {
            let c0 = self.coeffs.first().map_or(0.0, |c| c.norm());
            let scale = self.coeffs.iter().fold(0.0f64, |m, c| m.max(c.norm()));
            if c0 > self.error_bound.max(1e-13 * scale) {
                return Err(Error::NotOriginFixing(c0));
            }
        }
        let sq: f64 = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(n, c)| space.weight(n) * c.norm_sqr())
            .sum();
        Ok(sq.sqrt())
    }

    pub fn evaluate(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    /// Cauchy product, truncated to the larger degree of the two factors.
    pub fn mul_truncated(&self, other: &Self) -> Self {
        let m = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![Complex64::new(0.0, 0.0); m];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate().take(m - i) {
                out[i + j] += a * b;
            }
        }
        Self::exact(out)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesParams {
    pub degree: usize,
    pub rho: Option<f64>,
    pub samples: Option<usize>,
}

impl SeriesParams {
    pub fn with_degree(degree: usize) -> Self {
        Self {
            degree,
            rho: None,
            samples: None,
        }
    }

    /// `(M, ρ, Q)` with defaults filled in.
    pub fn resolve(&self) -> Result<(usize, f64, usize)> {
        let m = self.degree;
        let rho = self.rho.unwrap_or(1.0 - 1.0 / (4.0 * (m.max(1)) as f64));
        let q = self
            .samples
            .unwrap_or_else(|| (8 * (m + 1)).next_power_of_two());
        if !(rho > 0.0 && rho < 1.0) {
            return Err(Error::Invalid(format!(
                "sampling radius {rho} not in (0, 1)"
            )));
        }
        if q < 4 * (m + 1) {
            return Err(Error::Invalid(format!(
                "need Q >= 4(M+1), got Q = {q}, M = {m}"
            )));
        }
        if rho.powi(m as i32) < 1e-300 {
            return Err(Error::DegreeOverflow { rho, degree: m });
        }
        Ok((m, rho, q))
    }
}

/// Successive powers `φ, φ², …` sampled on two circles.
pub struct PowerSampler {
    m: usize,
    radii: [f64; 2],
    base: [Vec<Complex64>; 2],
    cur: [Vec<Complex64>; 2],
    fft: Arc<dyn Fft<f64>>,
    k: usize,
}

impl PowerSampler {
    pub fn new(s: &SymbolMap, params: &SeriesParams) -> Result<Self> {
        let (m, rho, q) = params.resolve()?;
        let radii = [rho, 0.5 * (1.0 + rho)];
        let sample = |r: f64| -> Result<Vec<Complex64>> {
            (0..q)
                .map(|j| s.evaluate(Complex64::from_polar(r, 2.0 * PI * j as f64 / q as f64)))
                .collect()
        };
        let base = [sample(radii[0])?, sample(radii[1])?];
        let ones = vec![Complex64::new(1.0, 0.0); q];
        let fft = FftPlanner::new().plan_fft_forward(q);
        Ok(Self {
            m,
            radii,
            base,
            cur: [ones.clone(), ones],
            fft,
            k: 0,
        })
    }

    pub fn power(&self) -> usize {
        self.k
    }

    fn extract(&self, which: usize) -> (Vec<Complex64>, usize) {
        let mut buf = self.cur[which].clone();
        self.fft.process(&mut buf);
        let q = buf.len() as f64;
        let rho = self.radii[which];
        let peak = self.cur[which].iter().fold(0.0f64, |m, c| m.max(c.norm()));
        let mut flushed = 0;
        let mut scale = 1.0;
        let under = 1e-300 / rho.powi(self.m as i32);
        let mut out = Vec::with_capacity(self.m + 1);
        for c in buf.iter().take(self.m + 1) {
            let v = c / q / scale;
            let floor = 64.0 * f64::EPSILON * peak / scale;
            if v.norm() <= floor || v.norm() < under {
                out.push(Complex64::new(0.0, 0.0));
                if c.norm() > 0.0 {
                    flushed += 1;
                }
            } else {
                out.push(v);
            }
            scale *= rho;
        }
        (out, flushed)
    }

    /// Coefficients of the current power.
    pub fn series(&self) -> PowerSeries {
        let (c, flushed) = self.extract(0);
        let (c2, _) = self.extract(1);
        let disc = c
            .iter()
            .zip(&c2)
            .fold(0.0f64, |m, (x, y)| m.max((x - y).norm()));
        let peak = c.iter().fold(0.0f64, |m, x| m.max(x.norm()));
        PowerSeries {
            coeffs: c,
            sampling_radius: self.radii[0],
            error_bound: disc,
            aliasing: disc > TWO_RADIUS_TOL * peak,
            flushed,
        }
    }

    /// Same as `series` plus the weighted discrepancy `sqrt(Σ w_j |c_j - c'_j|²)`.
    pub fn series_with_norm_error(&self, space: Space) -> (PowerSeries, f64) {
        let (c, flushed) = self.extract(0);
        let (c2, _) = self.extract(1);
        let mut disc = 0.0f64;
        let mut werr = 0.0;
        for (j, (x, y)) in c.iter().zip(&c2).enumerate() {
            disc = disc.max((x - y).norm());
            werr += space.weight(j) * (x - y).norm_sqr();
        }
        let peak = c.iter().fold(0.0f64, |m, x| m.max(x.norm()));
        let ps = PowerSeries {
            coeffs: c,
            sampling_radius: self.radii[0],
            error_bound: disc,
            aliasing: disc > TWO_RADIUS_TOL * peak,
            flushed,
        };
        (ps, werr.sqrt())
    }

    /// Advance from `φ^k` to `φ^{k+1}`.
    pub fn advance(&mut self) {
        for w in 0..2 {
            for (c, b) in self.cur[w].iter_mut().zip(&self.base[w]) {
                *c *= b;
            }
        }
        self.k += 1;
    }
}

/// First `M + 1` Taylor coefficients of `φ^k`.
pub fn coefficients_of_power(
    s: &SymbolMap,
    k: usize,
    params: &SeriesParams,
) -> Result<PowerSeries> {
    let mut sampler = PowerSampler::new(s, params)?;
    for _ in 0..k {
        sampler.advance();
    }
    Ok(sampler.series())
}

#[derive(Debug, Clone, PartialEq)]
pub struct PowerNorms {
    /// `norms[k-1] = ‖φ^k‖`.
    pub norms: Vec<f64>,
    pub errors: Vec<f64>,
    /// Two-radius check failed for this power.
    pub aliasing: Vec<bool>,
}

impl PowerNorms {
    pub fn any_flagged(&self) -> bool {
        self.aliasing.iter().any(|&f| f)
    }
}

/// `‖φ^k‖_𝒟` for `k = 1..=n_max` from sampled coefficients.
pub fn dirichlet_power_norms(
    s: &SymbolMap,
    n_max: usize,
    params: &SeriesParams,
) -> Result<PowerNorms> {
    power_norms(s, n_max, params, Space::Dirichlet)
}

pub fn power_norms(
    s: &SymbolMap,
    n_max: usize,
    params: &SeriesParams,
    space: Space,
) -> Result<PowerNorms> {
    let mut sampler = PowerSampler::new(s, params)?;
    let mut out = PowerNorms {
        norms: Vec::new(),
        errors: Vec::new(),
        aliasing: Vec::new(),
    };
    for _ in 0..n_max {
        sampler.advance();
        let (ps, err) = sampler.series_with_norm_error(space);
        let sq: f64 = ps
            .coeffs
            .iter()
            .enumerate()
            .map(|(n, c)| space.weight(n) * c.norm_sqr())
            .sum();
        out.norms.push(sq.sqrt());
        out.errors.push(err);
        out.aliasing.push(ps.aliasing);
    }
    Ok(out)
}

/// `‖φ^k‖_𝒟` for `k = 1..=n_max` through the change of variables
/// `∫_𝔻 |(φ^k)'|² dA = k² ∫_{φ(𝔻)} |w|^{2k-2} dA`, valid for univalent `φ`
/// with a known image.
pub fn dirichlet_power_norms_exact(s: &SymbolMap, n_max: usize) -> Result<PowerNorms> {
    let dom = ImageDomain::of(s)
        .filter(|_| s.is_univalent)
        .ok_or_else(|| Error::Unsupported(format!("no closed-form image domain for `{s}`")))?;
    let phi0 = s.evaluate(Complex64::new(0.0, 0.0))?.norm();
    let nodes = dom.radial_nodes(24);
    let mut acc = vec![0.0; n_max];
    for &(r, w) in &nodes {
        let lw = w * dom.angular_measure(r) / PI;
        if lw == 0.0 {
            continue;
        }
        let r2 = r * r;
        let mut p = lw * r; // r^{2k-1} at k = 1
        for a in acc.iter_mut() {
            if p < 1e-300 {
                break;
            }
            *a += p;
            p *= r2;
        }
    }
    let norms = acc
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            let k = (i + 1) as f64;
            (phi0.powi(2 * (i as i32 + 1)) + k * k * v).sqrt()
        })
        .collect::<Vec<_>>();
    Ok(PowerNorms {
        errors: vec![0.0; n_max],
        aliasing: vec![false; n_max],
        norms,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn affine_cube() {
        let s: SymbolMap = "affine:r=0.5".parse().unwrap();
        let ps = coefficients_of_power(&s, 3, &SeriesParams::with_degree(8)).unwrap();
        for (j, v) in ps.coeffs.iter().enumerate() {
            let want = if j == 3 { 0.125 } else { 0.0 };
            assert!((v - c(want)).norm() < 1e-15, "j={j} {v}");
        }
        assert!(!ps.aliasing);
    }

    #[test]
    fn moebius_geometric_series() {
        let u = 0.3;
        let s = SymbolMap::moebius(c(u)).unwrap();
        let ps = coefficients_of_power(&s, 1, &SeriesParams::with_degree(32)).unwrap();
        // (u - z)/(1 - u z) = u - (1 - u²) Σ_{j≥1} u^{j-1} z^j
        assert_relative_eq!(ps.coeffs[0].re, u, epsilon = 1e-14);
        for j in 1..=32 {
            let want = -(1.0 - u * u) * u.powi(j as i32 - 1);
            assert!((ps.coeffs[j] - c(want)).norm() < 1e-14, "j={j}");
        }
    }

    #[test]
    fn cusp_constant_coefficient_vanishes() {
        let ps =
            coefficients_of_power(&SymbolMap::cusp(), 1, &SeriesParams::with_degree(64)).unwrap();
        assert!(ps.coeffs[0].norm() <= ps.error_bound.max(1e-15));
    }

    #[test]
    fn norm_examples() {
        let z = PowerSeries::exact(vec![c(0.0), c(1.0)]);
        assert_relative_eq!(z.space_norm(Space::Dirichlet).unwrap(), 1.0);
        let z3 = PowerSeries::exact(vec![c(0.0), c(0.0), c(0.0), c(0.125)]);
        assert_relative_eq!(
            z3.space_norm(Space::Dirichlet).unwrap(),
            0.21650635094610965,
            epsilon = 1e-15
        );
        let one_z = PowerSeries::exact(vec![c(1.0), c(1.0)]);
        assert_relative_eq!(
            one_z.space_norm(Space::Bergman).unwrap(),
            1.5f64.sqrt(),
            epsilon = 1e-15
        );
        assert!(one_z.space_norm(Space::DirichletStar).is_err());
    }

    #[test]
    fn power_norm_examples() {
        let s: SymbolMap = "affine:r=0.5".parse().unwrap();
        let n = dirichlet_power_norms(&s, 8, &SeriesParams::with_degree(16)).unwrap();
        assert_relative_eq!(n.norms[3], 0.125, epsilon = 1e-14);
        let id = SymbolMap::identity();
        let n = dirichlet_power_norms(&id, 9, &SeriesParams::with_degree(16)).unwrap();
        assert_relative_eq!(n.norms[8], 3.0, epsilon = 1e-13);
        let e = dirichlet_power_norms_exact(&s, 8).unwrap();
        assert_relative_eq!(e.norms[3], 0.125, epsilon = 1e-13);
    }

    #[test]
    fn exact_cusp_norm_is_area() {
        let e = dirichlet_power_norms_exact(&SymbolMap::cusp(), 1).unwrap();
        let a = crate::symbols::cusp_constant();
        assert_relative_eq!(e.norms[0] * e.norms[0], a * a / (2.0 * PI), epsilon = 1e-12);
    }

    #[test]
    fn exact_and_sampled_agree_for_moebius() {
        let s = SymbolMap::moebius(Complex64::new(0.2, -0.3)).unwrap();
        let sampled = dirichlet_power_norms(&s, 4, &SeriesParams::with_degree(256)).unwrap();
        let exact = dirichlet_power_norms_exact(&s, 4).unwrap();
        for k in 0..4 {
            assert_relative_eq!(sampled.norms[k], exact.norms[k], max_relative = 1e-9);
        }
    }

    #[test]
    fn cusp_sampling_flags_aliasing() {
        let ps =
            coefficients_of_power(&SymbolMap::cusp(), 32, &SeriesParams::with_degree(64)).unwrap();
        assert!(ps.aliasing);
    }

    #[test]
    fn rejects_bad_params() {
        assert!(SeriesParams {
            degree: 10,
            rho: Some(1.5),
            samples: None
        }
        .resolve()
        .is_err());
        assert!(SeriesParams {
            degree: 10,
            rho: None,
            samples: Some(8)
        }
        .resolve()
        .is_err());
        assert!(matches!(
            SeriesParams {
                degree: 5000,
                rho: Some(0.5),
                samples: None
            }
            .resolve(),
            Err(Error::DegreeOverflow { .. })
        ));
    }
}

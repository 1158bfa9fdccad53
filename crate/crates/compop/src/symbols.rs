//! Schur functions: analytic self-maps of the unit disk.
//!
//! The catalog is small on purpose: rotations-with-contraction `r e^{iθ} z`,
//! disk automorphisms `(u - z)/(1 - ū z)`, the three-arc cusp map, compositions
//! of these, and polynomials given by their coefficients.

use std::f64::consts::{FRAC_2_PI, PI};
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Radius used for radial limits.
pub const BOUNDARY_RADIUS: f64 = 1.0 - 1e-9;

/// The cusp constant `a = 1 - (2/π) log(√2 - 1)`, chosen so the cusp map fixes 0.
pub fn cusp_constant() -> f64 {
    1.0 - FRAC_2_PI * (2f64.sqrt() - 1.0).ln()
}

#[derive(Debug, Clone, PartialEq)]
pub enum SymbolKind {
    Affine { r: f64, theta: f64 },
    Moebius { u: Complex64 },
    Cusp { a: f64 },
    Composition(Box<SymbolMap>, Box<SymbolMap>),
    CoefficientDefined(Vec<Complex64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SymbolMap {
    pub kind: SymbolKind,
    pub is_univalent: bool,
    /// Exact when known in closed form, otherwise a boundary-sampling estimate.
    pub sup_norm_hint: Option<f64>,
    pub fixes_origin: bool,
}

/// Intermediate values of the cusp chain at one point.
#[derive(Debug, Clone, Copy)]
pub struct CuspChain {
    pub t: Complex64,
    pub chi0: Complex64,
    pub chi1: Complex64,
    pub chi2: Complex64,
    pub chi3: Complex64,
    pub chi: Complex64,
    /// Set when an intermediate sat on a branch cut and was nudged inward.
    pub perturbed: bool,
}

fn check_disk(z: Complex64) -> Result<()> {
    if !(z.norm() < 1.0) {
        return Err(Error::Domain(z));
    }
    Ok(())
}

/// Evaluate χ₀ → χ₁ → χ₂ → χ₃ → χ with principal branches.
pub fn cusp_chain(z: Complex64) -> Result<CuspChain> {
    check_disk(z)?;
    let a = cusp_constant();
    let mut perturbed = false;
    let mut t = (z - I) / (I * z - 1.0);
    if t.im == 0.0 && t.re <= 0.0 {
        t += Complex64::new(0.0, 1e-15);
        perturbed = true;
    }
    let sq = t.sqrt();
    let mut chi0 = (sq - I) / (1.0 - I * sq);
    if chi0.im == 0.0 && chi0.re <= 0.0 {
        chi0 += Complex64::new(1e-15, 0.0);
        perturbed = true;
    }
    let chi1 = chi0.ln();
    let chi2 = -FRAC_2_PI * chi1 + 1.0;
    let chi3 = a / chi2;
    Ok(CuspChain {
        t,
        chi0,
        chi1,
        chi2,
        chi3,
        chi: 1.0 - chi3,
        perturbed,
    })
}

fn cusp_derivative(z: Complex64) -> Result<Complex64> {
    let c = cusp_chain(z)?;
    let a = cusp_constant();
    let dt = -2.0 / ((I * z - 1.0) * (I * z - 1.0));
    let sq = c.t.sqrt();
    let dsq = dt / (2.0 * sq);
    let w = 1.0 - I * sq;
    let dchi0 = 2.0 / (w * w) * dsq;
    let dchi1 = dchi0 / c.chi0;
    let dchi2 = -FRAC_2_PI * dchi1;
    Ok(a * dchi2 / (c.chi2 * c.chi2))
}

fn horner(coeffs: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

impl SymbolMap {
    pub fn affine(r: f64, theta: f64) -> Result<Self> {
        if !(r > 0.0 && r <= 1.0) || !theta.is_finite() {
            return Err(Error::Invalid(format!(
                "affine needs 0 < r <= 1, got r = {r}"
            )));
        }
        Ok(Self {
            kind: SymbolKind::Affine { r, theta },
            is_univalent: true,
            sup_norm_hint: Some(r),
            fixes_origin: true,
        })
    }

    pub fn identity() -> Self {
        Self::affine(1.0, 0.0).expect("identity")
    }

    pub fn moebius(u: Complex64) -> Result<Self> {
        if !(u.norm() < 1.0) {
            return Err(Error::Invalid(format!("moebius needs |u| < 1, got {u}")));
        }
        Ok(Self {
            kind: SymbolKind::Moebius { u },
            is_univalent: true,
            sup_norm_hint: Some(1.0),
            fixes_origin: u.norm() <= 1e-12,
        })
    }

    pub fn cusp() -> Self {
        Self {
            kind: SymbolKind::Cusp { a: cusp_constant() },
            is_univalent: true,
            sup_norm_hint: Some(1.0),
            fixes_origin: true,
        }
    }

    pub fn compose(outer: SymbolMap, inner: SymbolMap) -> Result<Self> {
        let z0 = outer.evaluate(inner.evaluate(Complex64::new(0.0, 0.0))?)?;
        let mut s = Self {
            is_univalent: outer.is_univalent && inner.is_univalent,
            sup_norm_hint: None,
            fixes_origin: z0.norm() <= 1e-12,
            kind: SymbolKind::Composition(Box::new(outer), Box::new(inner)),
        };
        s.sup_norm_hint = match &s.kind {
            SymbolKind::Composition(o, i)
                if o.sup_norm_hint == Some(1.0) && i.sup_norm_hint == Some(1.0) =>
            {
                Some(1.0)
            }
            _ => Some(s.boundary_sup_estimate(4096)?),
        };
        Ok(s)
    }

    /// Polynomial symbol `Σ c_j z^j`; rejected if it leaves the closed disk.
    pub fn coefficients(coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.is_empty()
            || coeffs
                .iter()
                .any(|c| !c.re.is_finite() || !c.im.is_finite())
        {
            return Err(Error::Invalid(
                "coefficient list must be finite and non-empty".into(),
            ));
        }
        let nonconst = coeffs.iter().skip(1).filter(|c| c.norm() > 0.0).count();
        let fixes_origin = coeffs[0].norm() <= 1e-12;
        let is_univalent = nonconst == 1 && coeffs.len() >= 2 && coeffs[1].norm() > 0.0;
        let mut s = Self {
            kind: SymbolKind::CoefficientDefined(coeffs),
            is_univalent,
            sup_norm_hint: None,
            fixes_origin,
        };
        let sup = s.boundary_sup_estimate(4096)?;
        if sup > 1.0 + 1e-12 {
            return Err(Error::NotSelfMap(format!("boundary modulus reaches {sup}")));
        }
        s.sup_norm_hint = Some(sup.min(1.0));
        Ok(s)
    }

    pub fn evaluate(&self, z: Complex64) -> Result<Complex64> {
        check_disk(z)?;
        Ok(match &self.kind {
            SymbolKind::Affine { r, theta } => Complex64::from_polar(*r, *theta) * z,
            SymbolKind::Moebius { u } => (u - z) / (1.0 - u.conj() * z),
            SymbolKind::Cusp { .. } => cusp_chain(z)?.chi,
            SymbolKind::Composition(o, i) => o.evaluate(i.evaluate(z)?)?,
            SymbolKind::CoefficientDefined(c) => horner(c, z).0,
        })
    }

    /// Radial limit `φ(ρ e^{iθ})` with ρ = 1 - 1e-9.
    pub fn evaluate_boundary(&self, theta: f64) -> Result<Complex64> {
        self.evaluate(Complex64::from_polar(BOUNDARY_RADIUS, theta))
    }

    pub fn derivative(&self, z: Complex64) -> Result<Complex64> {
        check_disk(z)?;
        Ok(match &self.kind {
            SymbolKind::Affine { r, theta } => Complex64::from_polar(*r, *theta),
            SymbolKind::Moebius { u } => {
                let d = 1.0 - u.conj() * z;
                -(1.0 - u.norm_sqr()) / (d * d)
            }
            SymbolKind::Cusp { .. } => cusp_derivative(z)?,
            SymbolKind::Composition(o, i) => o.derivative(i.evaluate(z)?)? * i.derivative(z)?,
            SymbolKind::CoefficientDefined(c) => horner(c, z).1,
        })
    }

    /// Sup norm, falling back to boundary sampling when no hint is stored.
    pub fn sup_norm(&self) -> Result<f64> {
        match self.sup_norm_hint {
            Some(s) => Ok(s),
            None => self.boundary_sup_estimate(4096),
        }
    }

    fn boundary_sup_estimate(&self, samples: usize) -> Result<f64> {
        let h = 2.0 * PI / samples as f64;
        let f = |th: f64| self.evaluate_boundary(th).map(|w| w.norm());
        let mut best = (0.0, f(0.0)?);
        for i in 1..samples {
            let th = i as f64 * h;
            let v = f(th)?;
            if v > best.1 {
                best = (th, v);
            }
        }
        // golden-section refinement around the best sample
        let (mut lo, mut hi) = (best.0 - h, best.0 + h);
        let g = 0.5 * (5f64.sqrt() - 1.0);
        for _ in 0..60 {
            let m1 = hi - g * (hi - lo);
            let m2 = lo + g * (hi - lo);
            if f(m1)? > f(m2)? {
                hi = m2;
            } else {
                lo = m1;
            }
        }
        Ok(best.1.max(f(0.5 * (lo + hi))?))
    }

    pub fn pseudo_hyperbolic_derivative(&self, z: Complex64) -> Result<f64> {
        let w = self.evaluate(z)?;
        let d = self.derivative(z)?;
        let den = 1.0 - w.norm_sqr();
        if den <= 0.0 {
            return Ok(1.0);
        }
        Ok(d.norm() * (1.0 - z.norm_sqr()) / den)
    }

    /// Lower estimate of `[φ] = sup |φ^#|` over a nested polar grid.
    pub fn pseudo_hyperbolic_sup(&self, grid: &PolarGrid) -> Result<f64> {
        let mut best = self.pseudo_hyperbolic_derivative(Complex64::new(0.0, 0.0))?;
        for r in grid.radii() {
            for j in 0..grid.angles {
                let th = 2.0 * PI * j as f64 / grid.angles as f64;
                let v = self.pseudo_hyperbolic_derivative(Complex64::from_polar(r, th))?;
                if v > best {
                    best = v;
                }
            }
        }
        Ok(best)
    }
}

/// Polar grid reaching radius `1 - 2^{-depth}`; grids are nested in `depth`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarGrid {
    pub depth: u32,
    pub angles: usize,
    pub per_band: usize,
}

impl Default for PolarGrid {
    fn default() -> Self {
        Self {
            depth: 10,
            angles: 256,
            per_band: 8,
        }
    }
}

impl PolarGrid {
    pub fn radii(&self) -> Vec<f64> {
        let mut out = Vec::new();
        for j in 0..self.depth {
            let lo = 1.0 - 0.5f64.powi(j as i32);
            let w = 0.5f64.powi(j as i32 + 1);
            for i in 1..=self.per_band {
                out.push(lo + w * i as f64 / self.per_band as f64);
            }
        }
        out
    }
}

pub fn parse_complex(s: &str) -> Result<Complex64> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let err = || Error::Parse(s.to_string());
    if t.is_empty() {
        return Err(err());
    }
    let Some(body) = t.strip_suffix('i') else {
        return t
            .parse::<f64>()
            .map(|x| Complex64::new(x, 0.0))
            .map_err(|_| err());
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let imag = |p: &str| -> Result<f64> {
        match p {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            _ => p.parse::<f64>().map_err(|_| err()),
        }
    };
    match split {
        Some(k) => Ok(Complex64::new(
            body[..k].parse().map_err(|_| err())?,
            imag(&body[k..])?,
        )),
        None => Ok(Complex64::new(0.0, imag(body)?)),
    }
}

fn top_level_commas(s: &str) -> Vec<usize> {
    let mut depth = 0i32;
    let mut out = Vec::new();
    for (k, ch) in s.char_indices() {
        match ch {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            ',' if depth == 0 => out.push(k),
            _ => {}
        }
    }
    out
}

fn key_values(s: &str) -> Result<Vec<(String, String)>> {
    s.split(',')
        .map(|kv| {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| Error::Parse(s.to_string()))?;
            Ok((k.trim().to_string(), v.trim().to_string()))
        })
        .collect()
}

impl FromStr for SymbolMap {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(s.to_string());
        if s == "cusp" {
            return Ok(Self::cusp());
        }
        if s == "identity" {
            return Ok(Self::identity());
        }
        if let Some(rest) = s.strip_prefix("affine:") {
            let (mut r, mut theta) = (None, 0.0);
            for (k, v) in key_values(rest)? {
                let x: f64 = v.parse().map_err(|_| bad())?;
                match k.as_str() {
                    "r" => r = Some(x),
                    "theta" => theta = x,
                    _ => return Err(bad()),
                }
            }
            return Self::affine(r.ok_or_else(bad)?, theta);
        }
        if let Some(rest) = s.strip_prefix("moebius:") {
            let kv = key_values(rest)?;
            match kv.as_slice() {
                [(k, v)] if k == "u" => return Self::moebius(parse_complex(v)?),
                _ => return Err(bad()),
            }
        }
        if let Some(rest) = s.strip_prefix("compose(").and_then(|r| r.strip_suffix(')')) {
            // key-value lists also contain commas, so try each split point
            for k in top_level_commas(rest) {
                if let (Ok(o), Ok(i)) = (rest[..k].parse(), rest[k + 1..].parse()) {
                    return Self::compose(o, i);
                }
            }
            return Err(bad());
        }
        if let Some(rest) = s.strip_prefix("coeffs:[").and_then(|r| r.strip_suffix(']')) {
            let c = rest
                .split(',')
                .map(parse_complex)
                .collect::<Result<Vec<_>>>()?;
            return Self::coefficients(c);
        }
        Err(bad())
    }
}

fn fmt_complex(z: &Complex64) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else if z.im < 0.0 {
        format!("{}{}i", z.re, z.im)
    } else {
        format!("{}+{}i", z.re, z.im)
    }
}

impl fmt::Display for SymbolMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            SymbolKind::Affine { r, theta } => write!(f, "affine:r={r},theta={theta}"),
            SymbolKind::Moebius { u } => write!(f, "moebius:u={}", fmt_complex(u)),
            SymbolKind::Cusp { .. } => write!(f, "cusp"),
            SymbolKind::Composition(o, i) => write!(f, "compose({o},{i})"),
            SymbolKind::CoefficientDefined(c) => {
                let parts: Vec<String> = c.iter().map(fmt_complex).collect();
                write!(f, "coeffs:[{}]", parts.join(","))
            }
        }
    }
}

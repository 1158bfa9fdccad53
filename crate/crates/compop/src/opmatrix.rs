//! Truncated matrices of `C_φ` and certified approximation numbers.
//!
//! Two assembly routes are available.
//!
//! * `Coefficients`: the `N×N` block `P_N C_φ P_N` built from sampled Taylor
//!   coefficients of `φ^k`. Rows beyond `N` are dropped, and their mass is
//!   accounted for in `row_tail`.
//! * `Moments`: the Gram matrix `(C_φ P_N)^*(C_φ P_N)`, whose entries are
//!   `√(kl)/π ∫_{φ(𝔻)} w^{k-1} w̄^{l-1} dA` for univalent `φ`. No rows are
//!   dropped. This is the route for the cusp map, whose powers carry their
//!   Dirichlet mass at frequencies far above any practical `N`.
//!
//! The certified radius for every entry is `hs_tail + row_tail + assembly_error`,
//! where `hs_tail ≥ ‖C_φ(I - P_N)‖_HS`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::ImageDomain;
use crate::series::{
    dirichlet_power_norms_exact, PowerSampler, SeriesParams, Space, TWO_RADIUS_TOL,
};
use crate::symbols::{SymbolKind, SymbolMap};

pub const FLOOR_MIN: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Route {
    Coefficients,
    Moments,
}

impl FromStr for Route {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "coefficients" => Ok(Self::Coefficients),
            "moments" => Ok(Self::Moments),
            _ => Err(Error::Invalid(format!("unknown route `{s}`"))),
        }
    }
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Coefficients => "coefficients",
            Self::Moments => "moments",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct AssemblyParams {
    pub route: Option<Route>,
    pub series: Option<SeriesParams>,
    /// Radial Gauss–Legendre order for the moment route.
    pub quad_order: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TailModel {
    Exact,
    Geometric,
    Power,
    Divergent,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailBound {
    pub value: f64,
    pub partial: f64,
    pub remainder: f64,
    pub model: TailModel,
    pub k_max: usize,
}

#[derive(Debug, Clone)]
pub enum Repr {
    Matrix(DMatrix<Complex64>),
    Gram(DMatrix<f64>),
}

#[derive(Debug, Clone)]
pub struct OperatorMatrix {
    pub repr: Repr,
    pub basis: Space,
    pub n: usize,
    pub route: Route,
    pub hs_tail: f64,
    pub tail: TailBound,
    /// Bound on the dropped rows `‖(I - P_N) C_φ P_N‖`; zero on the moment route.
    pub row_tail: f64,
    pub assembly_error: f64,
    pub aliasing: bool,
    pub max_discrepancy: f64,
    /// `C_φ` is diagonal in the basis with non-increasing moduli.
    pub diagonal: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SingularSpectrum {
    pub values: Vec<f64>,
    pub error_radii: Vec<f64>,
    pub certification_floor: f64,
    pub certified: Vec<bool>,
}

impl SingularSpectrum {
    /// Spectrum with a common radius; entries below the floor are uncertified.
    pub fn new(mut values: Vec<f64>, radius: f64) -> Self {
        values.sort_by(|a, b| b.partial_cmp(a).unwrap());
        let floor = FLOOR_MIN.max(2.0 * radius);
        let certified = values.iter().map(|&v| v >= floor).collect();
        Self {
            error_radii: vec![radius; values.len()],
            certification_floor: floor,
            certified,
            values,
        }
    }

    pub fn certified_count(&self) -> usize {
        self.certified.iter().take_while(|&&c| c).count()
    }

    /// `a_n` for 1-based `n`.
    pub fn a(&self, n: usize) -> f64 {
        self.values[n - 1]
    }

    /// Certified enclosure `[lo, hi]` of the true `a_n` (1-based).
    pub fn enclosure(&self, n: usize) -> (f64, f64) {
        let (v, r) = (self.values[n - 1], self.error_radii[n - 1]);
        ((v - r).max(0.0), v + r)
    }
}

fn basis_range(space: Space, n: usize) -> std::ops::Range<usize> {
    match space {
        Space::DirichletStar => 1..n + 1,
        _ => 0..n,
    }
}

/// Squared tail terms `‖φ^k‖²/w_k`, `k ∈ [lo, hi]`, exact when the image is known.
fn tail_terms(
    s: &SymbolMap,
    space: Space,
    lo: usize,
    hi: usize,
    params: &SeriesParams,
) -> Result<(Vec<f64>, bool)> {
    let exact_ok = matches!(space, Space::Dirichlet | Space::DirichletStar)
        && s.is_univalent
        && ImageDomain::of(s).is_some();
    if exact_ok {
        let norms = dirichlet_power_norms_exact(s, hi)?;
        let phi0 = s.evaluate(Complex64::new(0.0, 0.0))?.norm();
        let terms = (lo..=hi)
            .map(|k| {
                let mut sq = norms.norms[k - 1].powi(2);
                if space == Space::DirichletStar {
                    sq -= phi0.powi(2 * k as i32);
                }
                sq.max(0.0) / space.weight(k)
            })
            .collect();
        return Ok((terms, true));
    }
    let p = SeriesParams {
        degree: params.degree.max(hi),
        ..*params
    };
    let mut sampler = PowerSampler::new(s, &p)?;
    let mut terms = Vec::with_capacity(hi + 1 - lo);
    for k in 0..=hi {
        if k >= lo {
            let ps = sampler.series();
            let sq: f64 = ps
                .coeffs
                .iter()
                .enumerate()
                .map(|(j, c)| space.weight(j) * c.norm_sqr())
                .sum();
            terms.push(sq / space.weight(k));
        }
        sampler.advance();
    }
    Ok((terms, false))
}

fn lsq_line(x: &[f64], y: &[f64]) -> Option<(f64, f64, f64)> {
    let n = x.len() as f64;
    let (mx, my) = (x.iter().sum::<f64>() / n, y.iter().sum::<f64>() / n);
    let sxx: f64 = x.iter().map(|v| (v - mx).powi(2)).sum();
    if sxx <= 0.0 {
        return None;
    }
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    let icpt = my - slope * mx;
    let rmse = (x
        .iter()
        .zip(y)
        .map(|(a, b)| (b - icpt - slope * a).powi(2))
        .sum::<f64>()
        / n)
        .sqrt();
    Some((icpt, slope, rmse))
}

/// `sqrt(Σ_{k ≥ lo} t_k)` from terms on `[lo, k_max]` plus a fitted remainder
/// over the last octave.
pub fn tail_from_terms(terms: &[f64], lo: usize) -> Result<TailBound> {
    let k_max = lo + terms.len() - 1;
    let partial: f64 = terms.iter().sum();
    let start = (k_max / 2).max(lo);
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for k in start..=k_max {
        let t = terms[k - lo];
        if t > 0.0 {
            xs.push(k as f64);
            ys.push(t.ln());
        }
    }
    let done = |remainder: f64, model| TailBound {
        value: (partial + remainder).sqrt(),
        partial,
        remainder,
        model,
        k_max,
    };
    if xs.len() < 3 {
        if terms.last() == Some(&0.0) {
            return Ok(done(0.0, TailModel::Geometric));
        }
        return Err(Error::Extrapolation(
            "too few positive terms in the last octave".into(),
        ));
    }
    let kf = k_max as f64;
    let mut best: Option<(f64, f64, TailModel)> = None;
    if let Some((a, b, rmse)) = lsq_line(&xs, &ys) {
        let beta = -b;
        if beta > 1e-12 {
            let q = (-beta).exp();
            let rem = (a + b * kf).exp() * q / (1.0 - q);
            best = Some((rmse, rem, TailModel::Geometric));
        }
    }
    let lx: Vec<f64> = xs.iter().map(|v| v.ln()).collect();
    if let Some((a, b, rmse)) = lsq_line(&lx, &ys) {
        let p = -b;
        if p > 1.0 + 1e-9 {
            let rem = a.exp() * kf.powf(1.0 - p) / (p - 1.0);
            if best.is_none_or(|(r, _, _)| rmse < r) {
                best = Some((rmse, rem, TailModel::Power));
            }
        }
    }
    match best {
        Some((_, rem, model)) => Ok(done(rem, model)),
        None => {
            let (first, last) = (terms[start - lo], terms[k_max - lo]);
            if last >= 0.5 * first {
                Ok(TailBound {
                    value: f64::INFINITY,
                    partial,
                    remainder: f64::INFINITY,
                    model: TailModel::Divergent,
                    k_max,
                })
            } else {
                Err(Error::Extrapolation(
                    "neither geometric nor summable power-law decay".into(),
                ))
            }
        }
    }
}

/// `sqrt(Σ_{k ≥ n} ‖φ^k‖²_𝒟 / k)`, an upper bound for `a_n(C_φ)` on `𝒟_*`.
pub fn hs_tail_bound(s: &SymbolMap, n: usize, params: &SeriesParams) -> Result<TailBound> {
    hs_tail_bound_in(s, n, Space::DirichletStar, params)
}

pub fn hs_tail_bound_in(
    s: &SymbolMap,
    n: usize,
    space: Space,
    params: &SeriesParams,
) -> Result<TailBound> {
    if n == 0 && space == Space::DirichletStar {
        return Err(Error::Invalid("n must be at least 1".into()));
    }
    let k_max = 4 * n.max(16);
    let (terms, exact) = tail_terms(s, space, n, k_max, params)?;
    let mut t = tail_from_terms(&terms, n)?;
    if exact && t.model == TailModel::Geometric && t.remainder == 0.0 {
        t.model = TailModel::Exact;
    }
    Ok(t)
}

/// [`hs_tail_bound_in`] for every `n ∈ [lo, hi]`, sharing one set of terms up to `4 hi`.
pub fn hs_tail_profile(
    s: &SymbolMap,
    lo: usize,
    hi: usize,
    space: Space,
    params: &SeriesParams,
) -> Result<Vec<TailBound>> {
    if lo == 0 || hi < lo {
        return Err(Error::Invalid(format!("bad range [{lo}, {hi}]")));
    }
    let k_max = 4 * hi.max(16);
    let (terms, _) = tail_terms(s, space, lo, k_max, params)?;
    (lo..=hi)
        .map(|n| tail_from_terms(&terms[n - lo..], n))
        .collect()
}

fn default_route(s: &SymbolMap, space: Space) -> Route {
    match s.kind {
        SymbolKind::Cusp { .. } if space == Space::DirichletStar => Route::Moments,
        _ => Route::Coefficients,
    }
}

pub fn assemble(
    s: &SymbolMap,
    n: usize,
    space: Space,
    params: &AssemblyParams,
) -> Result<OperatorMatrix> {
    if n == 0 {
        return Err(Error::Invalid("N must be positive".into()));
    }
    if space == Space::DirichletStar && !s.fixes_origin {
        let v = s.evaluate(Complex64::new(0.0, 0.0))?.norm();
        return Err(Error::NotOriginFixing(v));
    }
    let route = params.route.unwrap_or_else(|| default_route(s, space));
    let series = params.series.unwrap_or(SeriesParams::with_degree(2 * n));
    let k_max = 4 * n;
    let lo = basis_range(space, n).end;
    let (terms, _) = tail_terms(s, space, lo, k_max.max(lo + 8), &series)?;
    let tail = tail_from_terms(&terms, lo)?;
    let diagonal = matches!(s.kind, SymbolKind::Affine { .. });
    match route {
        Route::Coefficients => assemble_coefficients(s, n, space, &series, tail, diagonal),
        Route::Moments => {
            if space != Space::DirichletStar {
                return Err(Error::Unsupported(
                    "moment route needs the dirichlet-star basis".into(),
                ));
            }
            let dom = ImageDomain::of(s)
                .filter(|_| s.is_univalent)
                .ok_or_else(|| {
                    Error::Unsupported(format!("moment route needs a known image for `{s}`"))
                })?;
            let order = params.quad_order.unwrap_or(24);
            let g = gram(&dom, n, order);
            let g2 = gram(&dom, n, (2 * order) / 3);
            let diff = (&g - &g2).norm();
            let roundoff = (n as f64) * f64::EPSILON * g.norm();
            Ok(OperatorMatrix {
                repr: Repr::Gram(g),
                basis: space,
                n,
                route,
                hs_tail: tail.value,
                tail,
                row_tail: 0.0,
                assembly_error: (diff + roundoff).sqrt(),
                aliasing: false,
                max_discrepancy: 0.0,
                diagonal,
            })
        }
    }
}

fn assemble_coefficients(
    s: &SymbolMap,
    n: usize,
    space: Space,
    series: &SeriesParams,
    tail: TailBound,
    diagonal: bool,
) -> Result<OperatorMatrix> {
    let range = basis_range(space, n);
    let params = SeriesParams {
        degree: series.degree.max(range.end),
        ..*series
    };
    let mut sampler = PowerSampler::new(s, &params)?;
    let exact = if matches!(space, Space::Dirichlet | Space::DirichletStar)
        && s.is_univalent
        && ImageDomain::of(s).is_some()
    {
        Some(dirichlet_power_norms_exact(s, range.end)?)
    } else {
        None
    };
    let phi0 = s.evaluate(Complex64::new(0.0, 0.0))?.norm();
    let mut m = DMatrix::<Complex64>::zeros(n, n);
    let (mut row_sq, mut err_sq, mut max_disc) = (0.0, 0.0, 0.0f64);
    let mut aliasing = false;
    for _ in 0..range.start {
        sampler.advance();
    }
    for (col, k) in range.clone().enumerate() {
        let (ps, werr) = sampler.series_with_norm_error(space);
        aliasing |= ps.aliasing;
        max_disc = max_disc.max(ps.error_bound);
        let wk = space.weight(k);
        let mut kept = 0.0;
        let mut dropped = 0.0;
        for (j, c) in ps.coeffs.iter().enumerate() {
            let wj = space.weight(j);
            if range.contains(&j) {
                m[(j - range.start, col)] = c * (wj / wk).sqrt();
                kept += wj * c.norm_sqr();
            } else if j >= range.end {
                dropped += wj * c.norm_sqr();
            }
        }
        if let Some(ex) = &exact {
            let total = if k == 0 {
                1.0
            } else {
                let mut sq = ex.norms[k - 1].powi(2);
                if space == Space::DirichletStar {
                    sq -= phi0.powi(2 * k as i32);
                }
                sq
            };
            dropped = dropped.max(total - kept);
        }
        row_sq += dropped.max(0.0) / wk;
        err_sq += werr * werr / wk;
        sampler.advance();
    }
    Ok(OperatorMatrix {
        repr: Repr::Matrix(m),
        basis: space,
        n,
        route: Route::Coefficients,
        hs_tail: tail.value,
        tail,
        row_tail: row_sq.sqrt(),
        assembly_error: err_sq.sqrt(),
        aliasing,
        max_discrepancy: max_disc,
        diagonal,
    })
}

/// Gram matrix `G_{kl} = √(kl)/π ∫_D w^{k-1} w̄^{l-1} dA`, `1 ≤ k, l ≤ n`, for a
/// domain symmetric about the real axis (so `G` is real).
pub fn gram(dom: &ImageDomain, n: usize, order: usize) -> DMatrix<f64> {
    let nodes = dom.radial_nodes(order);
    let mut g = vec![0.0f64; n * n];
    let mut v = vec![0.0f64; n];
    let mut toe = vec![0.0f64; n];
    for &(r, w) in &nodes {
        let arcs = dom.arcs(r);
        if arcs.is_empty() || r <= 0.0 {
            continue;
        }
        // v_k = √k r^k sqrt(w / (π r)); G_kl += v_k v_l I_{k-l}(r)
        let scale = (w / (PI * r)).sqrt();
        let mut p = scale;
        let mut vmax = 0.0f64;
        for (k, vk) in v.iter_mut().enumerate() {
            p *= r;
            *vk = ((k + 1) as f64).sqrt() * p;
            vmax = vmax.max(*vk);
        }
        let thresh = 1e-22 / (2.0 * PI * vmax.max(1e-300));
        let Some(kh) = v.iter().rposition(|&x| x > thresh) else {
            continue;
        };
        let kh = kh + 1;
        toe[0] = 2.0 * arcs.iter().map(|(a, b)| b - a).sum::<f64>();
        for (m, t) in toe.iter_mut().enumerate().take(kh).skip(1) {
            let mf = m as f64;
            *t = 2.0
                * arcs
                    .iter()
                    .map(|(a, b)| (mf * b).sin() - (mf * a).sin())
                    .sum::<f64>()
                / mf;
        }
        for k in 0..kh {
            let vk = v[k];
            let row = &mut g[k * n..k * n + k + 1];
            for (l, gkl) in row.iter_mut().enumerate() {
                *gkl += vk * v[l] * toe[k - l];
            }
        }
    }
    let mut out = DMatrix::<f64>::zeros(n, n);
    for k in 0..n {
        for l in 0..=k {
            out[(k, l)] = g[k * n + l];
            out[(l, k)] = g[k * n + l];
        }
    }
    out
}

impl OperatorMatrix {
    pub fn radius(&self) -> f64 {
        if self.diagonal {
            // a diagonal operator with non-increasing moduli has a_n = |d_n| exactly
            return self.assembly_error;
        }
        self.hs_tail + self.row_tail + self.assembly_error
    }

    /// Matrix entries; on the moment route a square root `Λ^{1/2} V^T` of the Gram matrix.
    pub fn entries(&self) -> DMatrix<Complex64> {
        match &self.repr {
            Repr::Matrix(m) => m.clone(),
            Repr::Gram(g) => {
                let e = g.clone().symmetric_eigen();
                let mut r = e.eigenvectors.transpose();
                for (i, mut row) in r.row_iter_mut().enumerate() {
                    row *= e.eigenvalues[i].max(0.0).sqrt();
                }
                r.map(|x| Complex64::new(x, 0.0))
            }
        }
    }
}

pub fn singular_spectrum(m: &OperatorMatrix) -> Result<SingularSpectrum> {
    if m.aliasing {
        return Err(Error::Aliasing {
            discrepancy: m.max_discrepancy,
            tolerance: TWO_RADIUS_TOL,
        });
    }
    let values: Vec<f64> = match &m.repr {
        Repr::Matrix(a) => {
            let svd = a
                .clone()
                .try_svd(false, false, f64::EPSILON, 10_000)
                .ok_or(Error::Decomposition)?;
            svd.singular_values.iter().copied().collect()
        }
        Repr::Gram(g) => g
            .symmetric_eigenvalues()
            .iter()
            .map(|&l| l.max(0.0).sqrt())
            .collect(),
    };
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::Decomposition);
    }
    Ok(SingularSpectrum::new(values, m.radius()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn affine(r: f64) -> SymbolMap {
        SymbolMap::affine(r, 0.0).unwrap()
    }

    #[test]
    fn affine_matrix_is_diagonal() {
        let m = assemble(
            &affine(0.5),
            8,
            Space::DirichletStar,
            &AssemblyParams::default(),
        )
        .unwrap();
        let e = m.entries();
        for j in 0..8 {
            for k in 0..8 {
                let want = if j == k {
                    0.5f64.powi(k as i32 + 1)
                } else {
                    0.0
                };
                assert!((e[(j, k)] - Complex64::new(want, 0.0)).norm() < 1e-15);
            }
        }
        assert!((m.hs_tail - 0.25f64.powf(4.5) / 0.75f64.sqrt()).abs() < 0.05 * m.hs_tail);
        let sp = singular_spectrum(&m).unwrap();
        assert_eq!(sp.a(3), 0.125);
    }

    #[test]
    fn identity_matrix_and_tail() {
        let id = SymbolMap::identity();
        let m = assemble(&id, 4, Space::DirichletStar, &AssemblyParams::default()).unwrap();
        let sp = singular_spectrum(&m).unwrap();
        for v in &sp.values {
            assert_relative_eq!(*v, 1.0, epsilon = 1e-13);
        }
        let t = hs_tail_bound(&id, 5, &SeriesParams::with_degree(16)).unwrap();
        assert!(t.value.is_infinite() && t.model == TailModel::Divergent);
    }

    #[test]
    fn affine_tail_closed_form() {
        let t = hs_tail_bound(&affine(0.5), 3, &SeriesParams::with_degree(16)).unwrap();
        assert_relative_eq!(t.value, 0.125 / 0.75f64.sqrt(), max_relative = 1e-10);
    }

    #[test]
    fn moment_route_matches_diagonal() {
        let p = AssemblyParams {
            route: Some(Route::Moments),
            ..Default::default()
        };
        let m = assemble(&affine(0.6), 12, Space::DirichletStar, &p).unwrap();
        let sp = singular_spectrum(&m).unwrap();
        for n in 1..=12 {
            assert_relative_eq!(sp.a(n), 0.6f64.powi(n as i32), max_relative = 1e-7);
        }
    }

    #[test]
    fn cusp_gram_corner_is_area() {
        let dom = ImageDomain::Cusp(Default::default());
        let g = gram(&dom, 4, 24);
        let a = crate::symbols::cusp_constant();
        assert_relative_eq!(g[(0, 0)], a * a / (2.0 * PI), max_relative = 1e-12);
        let norms = dirichlet_power_norms_exact(&SymbolMap::cusp(), 4).unwrap();
        for k in 1..=4 {
            assert_relative_eq!(
                g[(k - 1, k - 1)],
                norms.norms[k - 1].powi(2) / k as f64,
                max_relative = 1e-12
            );
        }
    }

    #[test]
    fn cusp_compression_is_dominated_by_gram() {
        let cusp = SymbolMap::cusp();
        let gm = assemble(&cusp, 24, Space::DirichletStar, &AssemblyParams::default()).unwrap();
        let gs = singular_spectrum(&gm).unwrap();
        let cm = assemble(
            &cusp,
            24,
            Space::DirichletStar,
            &AssemblyParams {
                route: Some(Route::Coefficients),
                ..Default::default()
            },
        )
        .unwrap();
        assert!(cm.aliasing);
        assert!(singular_spectrum(&cm).is_err());
        let svd = cm.entries().svd(false, false);
        let mut cs: Vec<f64> = svd.singular_values.iter().copied().collect();
        cs.sort_by(|a, b| b.partial_cmp(a).unwrap());
        for n in 0..10 {
            assert!(
                cs[n] <= gs.values[n] + 1e-6,
                "n={n} {} {}",
                cs[n],
                gs.values[n]
            );
        }
    }

    #[test]
    fn dirichlet_star_needs_fixed_origin() {
        let m = SymbolMap::moebius(Complex64::new(0.3, 0.0)).unwrap();
        assert!(matches!(
            assemble(&m, 4, Space::DirichletStar, &AssemblyParams::default()),
            Err(Error::NotOriginFixing(_))
        ));
        assert!(assemble(&m, 4, Space::Dirichlet, &AssemblyParams::default()).is_ok());
    }
}

//! Named checks run by `verify` and the pipeline.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::analysis::{self, DecayModel};
use crate::error::{Error, Result};
use crate::geometry::{self, BlaschkeProduct, McParams, Method, WindowGrid, ZincTable};
use crate::opmatrix::{self, AssemblyParams, SingularSpectrum};
use crate::series::{SeriesParams, Space};
use crate::symbols::SymbolMap;

use super::config::RunConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Check {
    /// `a_n ≤ C √n ‖φ‖∞ⁿ` with a stable constant, and the Hilbert–Schmidt bound.
    UpperLaw,
    /// `[φ]² ≤ β ≤ ‖φ‖∞`.
    Sandwich,
    /// `a_n ≳ s(r)^{2n}/√n` when `‖φ‖∞ > r`.
    LowerLaw,
    /// `a_n ≤ C (n(1-t)ⁿ + √M(t))` minimized over `t`, `n ∈ [20, 200]`.
    ZincUpper,
    /// `e^{-c√n}` law beats the geometric and `n/log n` models on the certified range.
    RootLaw,
    /// `A[Ω ∩ {|w| ≥ 1-h}] ≈ h³` by Monte Carlo.
    CuspArea,
    /// Blaschke window certificate decreasing in the power.
    Blaschke,
    /// `n e^{-nΦ(1/n)} ≤ e^{-nε_n}` for `ε_n = 1/log(n+2)`.
    DecayCalculus,
}

impl Check {
    pub const ALL: [Check; 8] = [
        Check::UpperLaw,
        Check::Sandwich,
        Check::LowerLaw,
        Check::ZincUpper,
        Check::RootLaw,
        Check::CuspArea,
        Check::Blaschke,
        Check::DecayCalculus,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Self::UpperLaw => "upper-law",
            Self::Sandwich => "sandwich",
            Self::LowerLaw => "lower-law",
            Self::ZincUpper => "zinc-upper",
            Self::RootLaw => "root-law",
            Self::CuspArea => "cusp-area",
            Self::Blaschke => "blaschke",
            Self::DecayCalculus => "decay-calculus",
        }
    }

    pub fn needs_spectrum(&self) -> bool {
        matches!(
            self,
            Self::UpperLaw | Self::Sandwich | Self::LowerLaw | Self::ZincUpper | Self::RootLaw
        )
    }
}

impl FromStr for Check {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|c| c.name() == s.trim())
            .ok_or_else(|| Error::Invalid(format!("unknown check `{s}`")))
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub check: Check,
    pub pass: bool,
    pub details: Value,
}

fn report(check: Check, pass: bool, details: Value) -> CheckReport {
    CheckReport {
        check,
        pass,
        details,
    }
}

pub fn spectrum_for(s: &SymbolMap, cfg: &RunConfig, n: usize) -> Result<SingularSpectrum> {
    let params = AssemblyParams {
        route: cfg.route,
        series: cfg.series_params(),
        quad_order: None,
    };
    let m = opmatrix::assemble(s, n, cfg.space, &params)?;
    opmatrix::singular_spectrum(&m)
}

/// Constant in `a_n ≤ C √n σⁿ` over certified entries.
pub fn upper_law(s: &SymbolMap, spec: &SingularSpectrum) -> Result<CheckReport> {
    let sigma = s.sup_norm()?;
    if !(sigma < 1.0) {
        return Err(Error::Unsupported(format!(
            "sup norm {sigma} is not below 1"
        )));
    }
    let cert = spec.certified_count();
    let ratio =
        |n: usize| (n <= cert).then(|| spec.a(n) / ((n as f64).sqrt() * sigma.powi(n as i32)));
    let fit = analysis::fit_constant(ratio, 5, 40, 0.5)?;
    let hs = opmatrix::hs_tail_profile(
        s,
        1,
        30.min(spec.values.len()),
        Space::DirichletStar,
        &SeriesParams::with_degree(256),
    )?;
    let hs_ok = hs
        .iter()
        .enumerate()
        .all(|(i, t)| spec.a(i + 1) <= t.value + spec.error_radii[i]);
    Ok(report(
        Check::UpperLaw,
        fit.stable && hs_ok,
        json!({ "sup_norm": sigma, "constant": fit, "hilbert_schmidt_ok": hs_ok }),
    ))
}

pub fn sandwich(s: &SymbolMap, spec: &SingularSpectrum) -> Result<CheckReport> {
    let r = analysis::sandwich_check(s, spec)?;
    Ok(report(
        Check::Sandwich,
        r.pass,
        serde_json::to_value(r).unwrap(),
    ))
}

pub fn lower_law(s: &SymbolMap, spec: &SingularSpectrum, r: f64) -> Result<CheckReport> {
    let p = analysis::lower_law_probe(s, spec, r)?;
    let pass = p.pass;
    Ok(report(
        Check::LowerLaw,
        pass,
        json!({ "r": p.r, "s_squared": p.s_squared, "log_inf_q": p.log_inf_q,
                "first_decade_min": p.first_decade_min, "last_decade_min": p.last_decade_min }),
    ))
}

/// Upper end of the certified enclosure of `a_n`, also for `n` past the matrix size.
pub fn upper_enclosure(
    s: &SymbolMap,
    spec: &SingularSpectrum,
    lo: usize,
    hi: usize,
) -> Result<Vec<f64>> {
    let tails = opmatrix::hs_tail_profile(
        s,
        lo,
        hi,
        Space::DirichletStar,
        &SeriesParams::with_degree(2 * hi),
    )?;
    Ok((lo..=hi)
        .zip(tails)
        .map(|(n, t)| {
            if n <= spec.values.len() {
                (spec.a(n) + spec.error_radii[n - 1]).min(t.value)
            } else {
                t.value
            }
        })
        .collect())
}

pub fn zinc_upper(s: &SymbolMap, spec: &SingularSpectrum) -> Result<CheckReport> {
    let (lo, hi) = (20, 200);
    let upper = upper_enclosure(s, spec, lo, 2 * hi)?;
    let table = ZincTable::new(s, &geometry::default_t_grid(), 40)?;
    let ratio = |n: usize| Some(upper[n - lo] / table.bound(n).value);
    let fit = analysis::fit_constant(ratio, lo, hi, 0.5)?;
    Ok(report(
        Check::ZincUpper,
        fit.stable,
        json!({ "constant": fit, "zinc_200": table.bound(hi) }),
    ))
}

/// RootN fit at `N` against the one at `N/2`.
pub fn root_law(s: &SymbolMap, cfg: &RunConfig, big: &SingularSpectrum) -> Result<CheckReport> {
    let small = spectrum_for(s, cfg, (cfg.n / 2).max(1))?;
    let fits = analysis::fit_decay(big, &DecayModel::ALL)?;
    let fits_small = analysis::fit_decay(&small, &DecayModel::ALL)?;
    let c = |f: &[analysis::DecayFit]| {
        f.iter()
            .find(|f| f.model == DecayModel::RootN)
            .map(|f| f.c)
            .unwrap()
    };
    let (c1, c0) = (c(&fits), c(&fits_small));
    let best = fits[0].model == DecayModel::RootN && fits[1].rmse > fits[0].rmse;
    let stable = (c1 / c0 - 1.0).abs() <= 0.2;
    Ok(report(
        Check::RootLaw,
        best && stable,
        json!({ "fits": fits, "fits_half_n": fits_small, "c_ratio": c1 / c0 }),
    ))
}

pub fn cusp_area(seed: u64, samples: u64, shells: u32) -> Result<CheckReport> {
    let cusp = SymbolMap::cusp();
    let mut rows = Vec::new();
    for j in 3..=8 {
        let h = 0.5f64.powi(j);
        let p = McParams {
            samples,
            seed: seed.wrapping_add(j as u64),
            shells,
        };
        let m = geometry::annulus_area(&cusp, h, Method::MonteCarlo, Some(&p))?;
        rows.push((h, m.value / h.powi(3), m.std_error / m.value));
    }
    let mut q: Vec<f64> = rows.iter().map(|r| r.1).collect();
    q.sort_by(f64::total_cmp);
    let median = 0.5 * (q[2] + q[3]);
    let pass = rows
        .iter()
        .all(|&(_, v, se)| v / median <= 2.0 && median / v <= 2.0 && se < 0.05);
    let rows: Vec<Value> = rows
        .iter()
        .map(|(h, v, se)| json!({ "h": h, "area_over_h3": v, "rel_std_error": se }))
        .collect();
    Ok(report(
        Check::CuspArea,
        pass,
        json!({ "median": median, "rows": rows }),
    ))
}

pub fn blaschke(powers: &[u32]) -> Result<CheckReport> {
    let grid = WindowGrid::default();
    let certs = powers
        .iter()
        .map(|&r| geometry::blaschke_certificate(&BlaschkeProduct::dyadic(10, r), &grid))
        .collect::<Result<Vec<_>>>()?;
    let logs: Vec<f64> = certs.iter().map(|c| c.value.ln()).collect();
    let pass = logs.windows(2).all(|w| w[1] < w[0]);
    Ok(report(
        Check::Blaschke,
        pass,
        json!({ "powers": powers, "log_certificate": logs, "certificates": certs }),
    ))
}

pub fn decay_calculus(n_max: usize) -> Result<CheckReport> {
    let eps: Vec<f64> = (2..=n_max).map(|n| 1.0 / (n as f64 + 2.0).ln()).collect();
    let (_, r) = analysis::improvement_bound(&eps, (2, n_max))?;
    Ok(report(
        Check::DecayCalculus,
        r.pass,
        serde_json::to_value(r).unwrap(),
    ))
}

/// Runs one check; numerical errors become failing reports.
pub fn run_check(
    check: Check,
    s: &SymbolMap,
    cfg: &RunConfig,
    spec: Option<&SingularSpectrum>,
    r: Option<f64>,
) -> Result<CheckReport> {
    let need = || spec.ok_or_else(|| Error::Invalid("spectrum required".into()));
    let out = match check {
        Check::UpperLaw => upper_law(s, need()?),
        Check::Sandwich => sandwich(s, need()?),
        Check::LowerLaw => {
            let r = r.ok_or_else(|| Error::Invalid("lower-law needs --r".into()))?;
            lower_law(s, need()?, r)
        }
        Check::ZincUpper => zinc_upper(s, need()?),
        Check::RootLaw => root_law(s, cfg, need()?),
        Check::CuspArea => cusp_area(cfg.seed()?, cfg.geometry.samples, cfg.geometry.shells),
        Check::Blaschke => blaschke(&[4, 6, 8, 10]),
        Check::DecayCalculus => decay_calculus(10_000),
    };
    match out {
        Err(e) if !super::is_usage_error(&e) => {
            Ok(report(check, false, json!({ "error": e.to_string() })))
        }
        other => other,
    }
}

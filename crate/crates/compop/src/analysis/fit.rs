//! Least-squares decay fits `log a_n ≈ α - c x(n)`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::opmatrix::SingularSpectrum;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DecayModel {
    /// `x(n) = n`
    Geometric,
    /// `x(n) = √n`
    RootN,
    /// `x(n) = n / log n`
    NOverLogN,
}

impl DecayModel {
    pub const ALL: [DecayModel; 3] = [
        DecayModel::Geometric,
        DecayModel::RootN,
        DecayModel::NOverLogN,
    ];

    pub fn predictor(&self, n: usize) -> f64 {
        let n = n as f64;
        match self {
            Self::Geometric => n,
            Self::RootN => n.sqrt(),
            Self::NOverLogN => n / n.ln(),
        }
    }
}

impl FromStr for DecayModel {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "geometric" => Ok(Self::Geometric),
            "rootn" | "root-n" => Ok(Self::RootN),
            "nlogn" | "n-over-log-n" => Ok(Self::NOverLogN),
            other => Err(Error::Invalid(format!("unknown model `{other}`"))),
        }
    }
}

impl fmt::Display for DecayModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Geometric => "geometric",
            Self::RootN => "rootn",
            Self::NOverLogN => "nlogn",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecayFit {
    pub model: DecayModel,
    pub alpha: f64,
    pub c: f64,
    pub rmse: f64,
    pub fit_range: (usize, usize),
    /// `c > 0`.
    pub accepted: bool,
}

impl DecayFit {
    pub fn predict(&self, n: usize) -> f64 {
        self.alpha - self.c * self.model.predictor(n)
    }
}

/// Least-squares fit of `(n, a_n)` pairs; `n ≥ 2`, `a_n > 0`.
pub fn fit_points(points: &[(usize, f64)], model: DecayModel) -> Result<DecayFit> {
    if points.len() < 3 || points.iter().any(|&(n, a)| n < 2 || !(a > 0.0)) {
        return Err(Error::DegenerateFit);
    }
    let xs: Vec<f64> = points.iter().map(|&(n, _)| model.predictor(n)).collect();
    let ys: Vec<f64> = points.iter().map(|&(_, a)| a.ln()).collect();
    let m = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / m, ys.iter().sum::<f64>() / m);
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if !(sxx > 1e-14 * mx.abs().max(1.0).powi(2) * m) {
        return Err(Error::DegenerateFit);
    }
    let slope = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (x - mx) * (y - my))
        .sum::<f64>()
        / sxx;
    let alpha = my - slope * mx;
    let rmse = (xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - alpha - slope * x).powi(2))
        .sum::<f64>()
        / m)
        .sqrt();
    let range = (
        points.iter().map(|p| p.0).min().unwrap(),
        points.iter().map(|p| p.0).max().unwrap(),
    );
    Ok(DecayFit {
        model,
        alpha,
        c: -slope,
        rmse,
        fit_range: range,
        accepted: -slope > 0.0,
    })
}

pub const MIN_CERTIFIED_FOR_FIT: usize = 20;

/// Points used by [`fit_decay`]: certified `a_n`, `n ≥ 2`, at least ten floors above the floor.
pub fn fit_window(spec: &SingularSpectrum) -> Vec<(usize, f64)> {
    let cut = 10.0 * spec.certification_floor;
    (2..=spec.certified_count())
        .map(|n| (n, spec.a(n)))
        .filter(|&(_, a)| a >= cut)
        .collect()
}

/// All requested fits over the certified range, best (lowest rmse) first.
pub fn fit_decay(spec: &SingularSpectrum, models: &[DecayModel]) -> Result<Vec<DecayFit>> {
    let count = spec.certified_count();
    if count < MIN_CERTIFIED_FOR_FIT {
        return Err(Error::Insufficient(format!(
            "{count} certified entries, need {MIN_CERTIFIED_FOR_FIT}"
        )));
    }
    let pts = fit_window(spec);
    if pts.len() < 3 {
        return Err(Error::Insufficient(
            "fewer than 3 entries clear of the floor".into(),
        ));
    }
    let mut fits = models
        .iter()
        .map(|&m| fit_points(&pts, m))
        .collect::<Result<Vec<_>>>()?;
    fits.sort_by(|a, b| a.rmse.total_cmp(&b.rmse));
    Ok(fits)
}

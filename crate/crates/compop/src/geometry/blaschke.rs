//! Carleson-window certificate for `|B|² dA` restricted to the cusp domain.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::domain::CuspDomain;
use super::measure::CarlesonWindow;
use crate::error::{Error, Result};

/// Finite Blaschke product with real zeros, raised to an integer power.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlaschkeProduct {
    pub zeros: Vec<f64>,
    pub power: u32,
}

impl BlaschkeProduct {
    /// Zeros `1 - 2^{-j}`, `1 ≤ j ≤ count`.
    pub fn dyadic(count: usize, power: u32) -> Self {
        Self {
            zeros: (1..=count).map(|j| 1.0 - 0.5f64.powi(j as i32)).collect(),
            power,
        }
    }

    pub fn modulus_sqr(&self, z: Complex64) -> f64 {
        if self.power == 0 {
            return 1.0;
        }
        let b: f64 = self
            .zeros
            .iter()
            .map(|&a| ((z - a) / (1.0 - a * z)).norm_sqr())
            .product();
        b.powi(self.power as i32)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WindowGrid {
    /// Angles `0, ±2^{-j}` for `1 ≤ j ≤ angle_levels`.
    pub angle_levels: u32,
    /// Sizes `2^{-l}` for `1 ≤ l ≤ size_levels`.
    pub size_levels: u32,
}

impl Default for WindowGrid {
    fn default() -> Self {
        Self {
            angle_levels: 8,
            size_levels: 12,
        }
    }
}

impl WindowGrid {
    pub fn windows(&self) -> Vec<CarlesonWindow> {
        let mut angles = vec![0.0];
        for j in 1..=self.angle_levels {
            let t = 0.5f64.powi(j as i32);
            angles.extend([t, -t]);
        }
        let mut out = Vec::new();
        for &th in &angles {
            for l in 1..=self.size_levels {
                out.push(CarlesonWindow::new(th, 0.5f64.powi(l as i32)).unwrap());
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WindowRatio {
    pub theta: f64,
    pub h: f64,
    pub mass: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlaschkeCertificate {
    pub power: u32,
    /// `max_S μ(S) / h²` over the grid.
    pub value: f64,
    pub worst: WindowRatio,
    pub windows: usize,
    pub quadrature_error: f64,
}

/// `max μ(S)/h²` for `dμ = |B|² 1_Ω dA`, over the window grid.
pub fn blaschke_certificate(b: &BlaschkeProduct, grid: &WindowGrid) -> Result<BlaschkeCertificate> {
    let dom = CuspDomain::default();
    let windows = grid.windows();
    if windows.is_empty() {
        return Err(Error::Invalid("empty window grid".into()));
    }
    let mut worst = WindowRatio {
        theta: 0.0,
        h: 0.0,
        mass: 0.0,
        ratio: -1.0,
    };
    let mut qerr: f64 = 0.0;
    for w in &windows {
        let (mass, err) = dom.window_integral(w, Some(|z: Complex64| b.modulus_sqr(z)));
        let ratio = mass / (w.h * w.h);
        qerr = qerr.max(err / (w.h * w.h));
        if ratio > worst.ratio {
            worst = WindowRatio {
                theta: w.xi.arg(),
                h: w.h,
                mass,
                ratio,
            };
        }
    }
    Ok(BlaschkeCertificate {
        power: b.power,
        value: worst.ratio,
        worst,
        windows: windows.len(),
        quadrature_error: qerr,
    })
}

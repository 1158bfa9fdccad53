//! Decay calculus `δ_n = ε_n + log n / n`, its least concave majorant `Φ`,
//! `Ψ = Φ^{-1}` and `ρ(h) = exp(-h/Ψ(h))`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Concave non-decreasing piecewise-linear function through `knots`, constant after the last.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Majorant {
    pub knots: Vec<(f64, f64)>,
}

impl Majorant {
    /// Least concave majorant of `points ∪ {(0, 0)}`, flattened after its maximum.
    pub fn of(points: &[(f64, f64)]) -> Result<Self> {
        let mut pts: Vec<(f64, f64)> = points.to_vec();
        pts.push((0.0, 0.0));
        if pts
            .iter()
            .any(|p| !p.0.is_finite() || !p.1.is_finite() || p.0 < 0.0)
        {
            return Err(Error::Invalid(
                "majorant knots must be finite with x ≥ 0".into(),
            ));
        }
        pts.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
        let mut hull: Vec<(f64, f64)> = Vec::new();
        for p in pts {
            if let Some(last) = hull.last() {
                if last.0 == p.0 {
                    hull.pop();
                }
            }
            while hull.len() >= 2 {
                let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
                // drop b if it lies on or below the chord a-p
                let cross = (b.0 - a.0) * (p.1 - a.1) - (b.1 - a.1) * (p.0 - a.0);
                if cross >= 0.0 {
                    hull.pop();
                } else {
                    break;
                }
            }
            hull.push(p);
        }
        let top = hull
            .iter()
            .enumerate()
            .max_by(|a, b| a.1 .1.total_cmp(&b.1 .1))
            .map(|(i, _)| i)
            .unwrap();
        hull.truncate(top + 1);
        if hull.len() < 2 {
            return Err(Error::Invalid("majorant needs a positive knot".into()));
        }
        Ok(Self { knots: hull })
    }

    pub fn eval(&self, x: f64) -> f64 {
        let k = &self.knots;
        if x <= k[0].0 {
            return k[0].1;
        }
        let i = k.partition_point(|p| p.0 <= x);
        if i >= k.len() {
            return k[k.len() - 1].1;
        }
        let (a, b) = (k[i - 1], k[i]);
        a.1 + (b.1 - a.1) * (x - a.0) / (b.0 - a.0)
    }

    pub fn max_value(&self) -> f64 {
        self.knots[self.knots.len() - 1].1
    }

    /// Smallest `x` with `Φ(x) ≥ h`, by bisection to `1e-12`.
    pub fn inverse(&self, h: f64) -> f64 {
        let (mut lo, mut hi) = (0.0, self.knots[self.knots.len() - 1].0);
        if h >= self.max_value() {
            return hi;
        }
        while hi - lo > 1e-12 * hi.max(1e-300) {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.eval(mid) >= h {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        hi
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundCalculus {
    pub n_range: (usize, usize),
    pub eps_seq: Vec<f64>,
    pub delta_seq: Vec<f64>,
    pub phi: Majorant,
    /// `(h, ρ(h))` at `h = Φ(1/n)`, increasing in `h`.
    pub rho: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CalculusReport {
    pub dominates: bool,
    pub concave: bool,
    pub max_second_difference: f64,
    pub rho_increasing: bool,
    /// `n` violating `n e^{-nΦ(1/n)} ≤ e^{-nε_n}`.
    pub chain_failures: Vec<usize>,
    /// `C = max_n inf_h [n e^{-nh} + ρ(h)] / e^{-nε_n}`.
    pub constant: f64,
    pub pass: bool,
}

pub const CHAIN_TOL: f64 = 1e-12;
pub const CONCAVITY_TOL: f64 = 1e-12;

/// `ε_n` for `n ∈ [lo, hi]`, given `eps_seq[i] = ε_{lo + i}`.
pub fn improvement_bound(
    eps_seq: &[f64],
    n_range: (usize, usize),
) -> Result<(BoundCalculus, CalculusReport)> {
    let (lo, hi) = n_range;
    if lo < 1 || hi <= lo || eps_seq.len() != hi - lo + 1 {
        return Err(Error::Invalid(format!(
            "eps_seq must cover n ∈ [{lo}, {hi}]"
        )));
    }
    if eps_seq.iter().any(|e| !(*e > 0.0)) {
        return Err(Error::Invalid("eps_seq must be positive".into()));
    }
    if eps_seq.windows(2).any(|w| !(w[1] < w[0])) {
        return Err(Error::Invalid("eps_seq must be strictly decreasing".into()));
    }
    let ns: Vec<usize> = (lo..=hi).collect();
    let delta: Vec<f64> = ns
        .iter()
        .zip(eps_seq)
        .map(|(&n, &e)| e + (n as f64).ln() / n as f64)
        .collect();
    let pts: Vec<(f64, f64)> = ns
        .iter()
        .zip(&delta)
        .map(|(&n, &d)| (1.0 / n as f64, d))
        .collect();
    let phi = Majorant::of(&pts)?;

    let h: Vec<f64> = ns.iter().map(|&n| phi.eval(1.0 / n as f64)).collect();
    let dominates = h
        .iter()
        .zip(&delta)
        .all(|(h, d)| *h >= d - CHAIN_TOL * d.abs());

    let x_top = 1.0 / lo as f64;
    let steps = 20_000;
    let dx = x_top / steps as f64;
    let mut max_d2 = f64::NEG_INFINITY;
    for i in 1..steps {
        let x = i as f64 * dx;
        let d2 = phi.eval(x + dx) - 2.0 * phi.eval(x) + phi.eval(x - dx);
        max_d2 = max_d2.max(d2);
    }
    let concave = max_d2 <= CONCAVITY_TOL;

    // h_n decreases in n, so reverse to get ρ on increasing h
    let mut rho: Vec<(f64, f64)> = h
        .iter()
        .map(|&hv| {
            (
                hv,
                if hv > 0.0 {
                    (-hv / phi.inverse(hv)).exp()
                } else {
                    0.0
                },
            )
        })
        .collect();
    rho.reverse();
    let rho_increasing = rho.windows(2).all(|w| w[1].1 >= w[0].1 * (1.0 - 1e-9));

    let mut chain_failures = Vec::new();
    let mut log_c = f64::NEG_INFINITY;
    for (i, &n) in ns.iter().enumerate() {
        let nf = n as f64;
        let target = -nf * eps_seq[i];
        let lhs = nf.ln() - nf * h[i];
        if lhs > target + CHAIN_TOL * target.abs().max(1.0) {
            chain_failures.push(n);
        }
        // inf over h = Φ(1/m) for m on a log grid around n
        let mut best = f64::INFINITY;
        for k in -64i32..=64 {
            let m = (nf * 2f64.powf(k as f64 / 32.0)).round() as usize;
            if m < lo || m > hi {
                continue;
            }
            let (hm, lr) = (h[m - lo], rho[hi - m].1.ln());
            let a = nf.ln() - nf * hm;
            let v = a.max(lr) + (-(a - lr).abs()).exp().ln_1p();
            best = best.min(v);
        }
        log_c = log_c.max(best - target);
    }
    let constant = log_c.exp();
    let pass =
        dominates && concave && rho_increasing && chain_failures.is_empty() && constant.is_finite();
    let calc = BoundCalculus {
        n_range,
        eps_seq: eps_seq.to_vec(),
        delta_seq: delta,
        phi,
        rho,
    };
    Ok((
        calc,
        CalculusReport {
            dominates,
            concave,
            max_second_difference: max_d2,
            rho_increasing,
            chain_failures,
            constant,
            pass,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eps(f: impl Fn(f64) -> f64, lo: usize, hi: usize) -> Vec<f64> {
        (lo..=hi).map(|n| f(n as f64)).collect()
    }

    #[test]
    fn log_eps_chain() {
        let e = eps(|n| 1.0 / (n + 2.0).ln(), 2, 10_000);
        let (calc, rep) = improvement_bound(&e, (2, 10_000)).unwrap();
        assert!(rep.pass, "{rep:?}");
        assert!(rep.constant <= 1.5 + 1e-9);
        for (i, d) in calc.delta_seq.iter().enumerate() {
            let n = (i + 2) as f64;
            assert!((d - e[i] - n.ln() / n).abs() < 1e-12);
        }
    }

    #[test]
    fn root_eps_concave() {
        let e = eps(|n| n.powf(-0.5), 2, 2000);
        let (_, rep) = improvement_bound(&e, (2, 2000)).unwrap();
        assert!(rep.concave && rep.dominates, "{rep:?}");
    }

    #[test]
    fn rejects_non_decreasing() {
        let e = vec![0.5; 99];
        assert!(improvement_bound(&e, (2, 100)).is_err());
    }

    #[test]
    fn inverse_round_trip() {
        let m = Majorant::of(&[(0.5, 1.0), (0.25, 0.8), (1.0, 1.1)]).unwrap();
        for h in [0.1, 0.5, 0.9, 1.05] {
            assert!((m.eval(m.inverse(h)) - h).abs() < 1e-11);
        }
    }
}

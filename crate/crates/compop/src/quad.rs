//! One-dimensional quadrature helpers on top of `gauss-quad` and `quadrature`.

use std::num::NonZeroUsize;

use gauss_quad::legendre::GaussLegendre;

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
pub fn legendre(order: usize) -> Vec<(f64, f64)> {
    let rule = GaussLegendre::new(NonZeroUsize::new(order.max(1)).unwrap());
    rule.as_node_weight_pairs().to_vec()
}

/// Composite Gauss–Legendre nodes over consecutive panels given by `breaks`.
pub fn composite(breaks: &[f64], order: usize) -> Vec<(f64, f64)> {
    let base = legendre(order);
    let mut out = Vec::with_capacity(breaks.len() * order);
    for p in breaks.windows(2) {
        let (a, b) = (p[0], p[1]);
        if b <= a {
            continue;
        }
        let (h, m) = (0.5 * (b - a), 0.5 * (a + b));
        out.extend(base.iter().map(|&(x, w)| (m + h * x, h * w)));
    }
    out
}

/// Breakpoints graded geometrically towards `at` from both sides inside `[lo, hi]`.
pub fn grade_towards(breaks: &mut Vec<f64>, at: f64, lo: f64, hi: f64, levels: usize, ratio: f64) {
    let mut d = 0.5 * (at - lo).min(hi - at);
    for _ in 0..levels {
        if d <= 0.0 {
            break;
        }
        if at - d > lo {
            breaks.push(at - d);
        }
        if at + d < hi {
            breaks.push(at + d);
        }
        d *= ratio;
    }
    breaks.push(at);
}

pub fn sort_breaks(breaks: &mut Vec<f64>) {
    breaks.sort_by(|a, b| a.partial_cmp(b).unwrap());
    breaks.dedup_by(|a, b| (*a - *b).abs() <= 1e-15 * b.abs().max(1e-300));
}

/// Double-exponential integration with a relative target.
///
/// Returns the integral and the absolute error estimate.
pub fn integrate_rel<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, rel: f64) -> (f64, f64) {
    if b <= a {
        return (0.0, 0.0);
    }
    let rough: f64 = composite(&[a, b], 24)
        .iter()
        .map(|&(x, w)| w * f(x).abs())
        .sum();
    if rough == 0.0 {
        return (0.0, 0.0);
    }
    let out = quadrature::double_exponential::integrate(&f, a, b, rel * rough);
    (out.integral, out.error_estimate)
}

/// Integrate over `[a, b]` split at the given interior points.
pub fn integrate_split<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    interior: &[f64],
    rel: f64,
) -> (f64, f64) {
    let mut pts = vec![a, b];
    pts.extend(interior.iter().copied().filter(|&x| x > a && x < b));
    sort_breaks(&mut pts);
    let mut total = (0.0, 0.0);
    for p in pts.windows(2) {
        let (v, e) = integrate_rel(&f, p[0], p[1], rel);
        total.0 += v;
        total.1 += e;
    }
    total
}

/// Sign changes of `g` on a sampling grid, refined by bisection.
pub fn roots(g: impl Fn(f64) -> f64, grid: &[f64]) -> Vec<f64> {
    let mut out = Vec::new();
    for p in grid.windows(2) {
        let (mut lo, mut hi) = (p[0], p[1]);
        let (glo, ghi) = (g(lo), g(hi));
        if glo == 0.0 {
            out.push(lo);
            continue;
        }
        if glo.signum() == ghi.signum() || ghi == 0.0 {
            continue;
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if g(mid).signum() == glo.signum() {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        out.push(0.5 * (lo + hi));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn composite_integrates_polynomials() {
        let nodes = composite(&[0.0, 0.3, 1.0], 8);
        let v: f64 = nodes.iter().map(|&(x, w)| w * x.powi(9)).sum();
        assert!((v - 0.1).abs() < 1e-15);
    }

    #[test]
    fn de_handles_sqrt_endpoint() {
        let (v, _) = integrate_rel(|x: f64| x.sqrt(), 0.0, 1.0, 1e-13);
        assert!((v - 2.0 / 3.0).abs() < 1e-12);
        let (v, _) = integrate_split(|x: f64| (x - 0.3).abs(), 0.0, 1.0, &[0.3], 1e-13);
        assert!((v - (0.045 + 0.245)).abs() < 1e-12);
    }

    #[test]
    fn bisection_roots() {
        let grid: Vec<f64> = (0..=10).map(|i| i as f64 * 0.1).collect();
        let r = roots(|x| x * x - 0.5, &grid);
        assert_eq!(r.len(), 1);
        assert!((r[0] - 0.5f64.sqrt()).abs() < 1e-14);
    }
}

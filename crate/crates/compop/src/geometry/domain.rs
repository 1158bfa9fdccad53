//! Exact descriptions of image domains `φ(𝔻)` for univalent catalog symbols.
//!
//! The cusp domain is `Ω = D(1 - a/2, a/2) \ (D(1 + ia/2, a/2) ∪ D(1 - ia/2, a/2))`.
//! Writing `w = 1 - s + iy`, it is the vertical-slice region `|y| < H(s)`,
//! `0 < s < a`, which is what the area routines integrate.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::quad;
use crate::symbols::{cusp_constant, SymbolKind, SymbolMap};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CuspDomain {
    pub a: f64,
}

impl Default for CuspDomain {
    fn default() -> Self {
        Self { a: cusp_constant() }
    }
}

impl CuspDomain {
    /// Centre of the outer disk.
    pub fn c0(&self) -> f64 {
        1.0 - 0.5 * self.a
    }

    /// Distance from 0 to the centres `1 ± ia/2` of the removed disks.
    pub fn small_centre_dist(&self) -> f64 {
        (1.0 + 0.25 * self.a * self.a).sqrt()
    }

    /// Three-circle membership test with strict inequalities.
    pub fn contains(&self, w: Complex64) -> bool {
        let h = 0.5 * self.a;
        let big = (w - Complex64::new(self.c0(), 0.0)).norm_sqr() < h * h;
        let up = (w - Complex64::new(1.0, h)).norm_sqr() > h * h;
        let down = (w - Complex64::new(1.0, -h)).norm_sqr() > h * h;
        big && up && down
    }

    /// Half-height `H(s)` of the slice `Re w = 1 - s`.
    pub fn half_height(&self, s: f64) -> f64 {
        let a = self.a;
        if !(s > 0.0 && s < a) {
            return 0.0;
        }
        if s < 0.5 * a {
            // a/2 - sqrt(a²/4 - s²), rationalized
            s * s / (0.5 * a + (0.25 * a * a - s * s).sqrt())
        } else {
            (s * (a - s)).sqrt()
        }
    }

    /// Angular pieces of `Ω ∩ {|w| = r}` in the upper half-plane.
    pub fn arcs(&self, r: f64) -> Vec<(f64, f64)> {
        if !(r > 0.0 && r < 1.0) {
            return Vec::new();
        }
        let a = self.a;
        let s = 1.0 - r;
        let one_minus_alpha = s * (a - s) / (2.0 * r * self.c0());
        let theta_max = if one_minus_alpha >= 2.0 {
            PI
        } else {
            2.0 * (0.5 * one_minus_alpha).sqrt().asin()
        };
        let u = s * s / (2.0 * r);
        let big_r = self.small_centre_dist();
        if 1.0 + u >= big_r {
            return vec![(0.0, theta_max)];
        }
        let root = (0.25 * a * a - 2.0 * u - u * u).max(0.0).sqrt();
        let theta1 = ((2.0 * u + u * u) / (0.5 * a * (1.0 + u) + root)).asin();
        let theta0 = (0.5 * a).atan();
        let theta2 = theta0 + ((1.0 + u) / big_r).min(1.0).acos();
        let mut out = vec![(0.0, theta1.min(theta_max))];
        if theta_max > theta2 {
            out.push((theta2, theta_max));
        }
        out
    }

    /// Radii where the arc structure changes.
    pub fn kink_radii(&self) -> Vec<f64> {
        let a = self.a;
        vec![
            self.small_centre_dist() - 0.5 * a,
            a - 1.0,
            self.c0().hypot(0.5 * a),
        ]
    }

    /// Normalized area `|Ω|/π`.
    pub fn area(&self) -> f64 {
        let a = self.a;
        let (v, _) =
            quad::integrate_split(|s| 2.0 * self.half_height(s), 0.0, a, &[0.5 * a], 1e-14);
        v / PI
    }
}

/// Image of a univalent catalog symbol, when known in closed form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ImageDomain {
    Disk { radius: f64 },
    Cusp(CuspDomain),
}

impl ImageDomain {
    pub fn of(s: &SymbolMap) -> Option<Self> {
        match &s.kind {
            SymbolKind::Affine { r, .. } => Some(Self::Disk { radius: *r }),
            SymbolKind::Moebius { .. } => Some(Self::Disk { radius: 1.0 }),
            SymbolKind::Cusp { a } => Some(Self::Cusp(CuspDomain { a: *a })),
            _ => None,
        }
    }

    pub fn contains(&self, w: Complex64) -> bool {
        match self {
            Self::Disk { radius } => w.norm() < *radius,
            Self::Cusp(c) => c.contains(w),
        }
    }

    pub fn arcs(&self, r: f64) -> Vec<(f64, f64)> {
        match self {
            Self::Disk { radius } if r < *radius => vec![(0.0, PI)],
            Self::Disk { .. } => Vec::new(),
            Self::Cusp(c) => c.arcs(r),
        }
    }

    /// Angular measure of the domain on the circle of radius `r`.
    pub fn angular_measure(&self, r: f64) -> f64 {
        2.0 * self.arcs(r).iter().map(|(a, b)| b - a).sum::<f64>()
    }

    /// Polar quadrature nodes `(r, weight)` on (0, 1) adapted to the domain.
    ///
    /// Panels are graded geometrically towards `r = 1`, where all the mass of
    /// high powers `w^k` lives, and towards radii where the arcs change shape.
    pub fn radial_nodes(&self, order: usize) -> Vec<(f64, f64)> {
        let top = match self {
            Self::Disk { radius } => *radius,
            Self::Cusp(_) => 1.0,
        };
        let mut breaks: Vec<f64> = (0..=36)
            .map(|i| (i as f64 * 0.025 * top).min(0.9 * top))
            .collect();
        let mut s = 0.1 * top;
        while s > 1e-13 {
            breaks.push(top - s);
            s *= 0.7;
        }
        breaks.push(top);
        if let Self::Cusp(c) = self {
            for k in c.kink_radii() {
                quad::grade_towards(&mut breaks, k, 0.0, 1.0, 12, 0.3);
            }
        }
        quad::sort_breaks(&mut breaks);
        quad::composite(&breaks, order)
    }
}

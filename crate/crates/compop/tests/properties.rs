use compop::analysis::{fit_points, improvement_bound, s_of_r, DecayModel, Majorant};
use compop::geometry::{CuspDomain, ImageDomain};
use compop::opmatrix::{assemble, singular_spectrum, AssemblyParams};
use compop::series::{coefficients_of_power, PowerSeries, SeriesParams, Space};
use compop::SymbolMap;
use num_complex::Complex64;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn affine_spectrum_is_powers(r in 0.05f64..0.95, theta in -3.0f64..3.0) {
        let s = SymbolMap::affine(r, theta).unwrap();
        let m = assemble(&s, 16, Space::DirichletStar, &AssemblyParams::default()).unwrap();
        let sp = singular_spectrum(&m).unwrap();
        for n in 1..=16 {
            let want = r.powi(n as i32);
            prop_assert!((sp.a(n) - want).abs() <= 1e-12 * want + 1e-300);
        }
    }

    #[test]
    fn spectra_are_sorted_and_nonnegative(c1 in 0.1f64..0.5, c2 in -0.3f64..0.3, c3 in -0.15f64..0.15) {
        let s = SymbolMap::coefficients(vec![Complex64::new(0.0, 0.0), c1.into(), c2.into(), c3.into()]);
        prop_assume!(s.is_ok());
        let s = s.unwrap();
        let m = assemble(&s, 24, Space::DirichletStar, &AssemblyParams::default()).unwrap();
        let sp = singular_spectrum(&m).unwrap();
        prop_assert!(sp.values.windows(2).all(|w| w[0] >= w[1]));
        prop_assert!(sp.values.iter().all(|&v| v >= 0.0));
        prop_assert!(sp.certified.windows(2).all(|w| w[0] || !w[1]));
    }

    #[test]
    fn symbol_strings_round_trip(r in 0.01f64..0.99, theta in -3.0f64..3.0, ur in -0.7f64..0.7, ui in -0.7f64..0.7) {
        for s in [SymbolMap::affine(r, theta).unwrap(), SymbolMap::moebius(Complex64::new(ur, ui)).unwrap()] {
            let back: SymbolMap = s.to_string().parse().unwrap();
            prop_assert_eq!(back.to_string(), s.to_string());
            let z = Complex64::new(0.3, -0.2);
            prop_assert_eq!(back.evaluate(z).unwrap(), s.evaluate(z).unwrap());
        }
    }

    #[test]
    fn power_coefficients_of_monomial(r in 0.1f64..0.95, k in 1usize..12) {
        let s = SymbolMap::affine(r, 0.0).unwrap();
        let ps = coefficients_of_power(&s, k, &SeriesParams::with_degree(32)).unwrap();
        for (j, c) in ps.coeffs.iter().enumerate() {
            let want = if j == k { r.powi(k as i32) } else { 0.0 };
            prop_assert!((c.re - want).abs() < 1e-12 && c.im.abs() < 1e-12);
        }
    }

    #[test]
    fn truncated_product_keeps_low_coefficients(a in prop::collection::vec(-1.0f64..1.0, 1..8), b in prop::collection::vec(-1.0f64..1.0, 1..8)) {
        let pa = PowerSeries::exact(a.iter().map(|&x| x.into()).collect());
        let pb = PowerSeries::exact(b.iter().map(|&x| x.into()).collect());
        let prod = pa.mul_truncated(&pb);
        prop_assert_eq!(prod.coeffs.len(), a.len().max(b.len()));
        for (k, c) in prod.coeffs.iter().enumerate() {
            let want: f64 = (0..=k).filter(|&i| i < a.len() && k - i < b.len()).map(|i| a[i] * b[k - i]).sum();
            prop_assert!((c.re - want).abs() < 1e-12 && c.im == 0.0);
        }
    }

    #[test]
    fn arcs_and_membership_agree(r in 0.01f64..0.999, th in 0.0f64..std::f64::consts::PI) {
        let dom = ImageDomain::Cusp(CuspDomain::default());
        let pieces = dom.arcs(r);
        let near = pieces.iter().any(|&(a, b)| (th - a).abs() < 1e-9 || (th - b).abs() < 1e-9);
        prop_assume!(!near);
        let inside = pieces.iter().any(|&(a, b)| th > a && th < b);
        prop_assert_eq!(inside, dom.contains(Complex64::from_polar(r, th)));
    }

    #[test]
    fn annulus_area_grows_with_t(t1 in 1e-4f64..1.0, t2 in 1e-4f64..1.0) {
        let d = CuspDomain::default();
        let (lo, hi) = if t1 < t2 { (t1, t2) } else { (t2, t1) };
        prop_assert!(d.annulus_area(lo).0 <= d.annulus_area(hi).0 + 1e-15);
        prop_assert!(d.annulus_area(hi).0 <= d.area() + 1e-14);
    }

    #[test]
    fn fits_have_zero_mean_residual(noise in prop::collection::vec(-0.5f64..0.5, 25), c in 0.05f64..2.0) {
        let pts: Vec<(usize, f64)> = noise.iter().enumerate().map(|(i, e)| (i + 2, (-c * (i + 2) as f64 + e).exp())).collect();
        for m in DecayModel::ALL {
            let f = fit_points(&pts, m).unwrap();
            let mean: f64 = pts.iter().map(|&(n, a)| a.ln() - f.predict(n)).sum::<f64>() / pts.len() as f64;
            prop_assert!(mean.abs() < 1e-10);
            prop_assert!(f.rmse >= 0.0);
        }
    }

    #[test]
    fn s_of_r_is_increasing(r1 in 0.01f64..0.99, r2 in 0.01f64..0.99) {
        prop_assume!(r1 != r2);
        let (lo, hi) = if r1 < r2 { (r1, r2) } else { (r2, r1) };
        prop_assert!(s_of_r(lo, false).unwrap() <= s_of_r(hi, false).unwrap());
    }

    #[test]
    fn majorant_is_concave_and_dominates(ys in prop::collection::vec(0.0f64..3.0, 3..40)) {
        let pts: Vec<(f64, f64)> = ys.iter().enumerate().map(|(i, &y)| (1.0 / (i + 2) as f64, y)).collect();
        let m = Majorant::of(&pts).unwrap();
        for &(x, y) in &pts {
            prop_assert!(m.eval(x) >= y - 1e-12);
        }
        let k = &m.knots;
        for w in k.windows(3) {
            let s1 = (w[1].1 - w[0].1) / (w[1].0 - w[0].0);
            let s2 = (w[2].1 - w[1].1) / (w[2].0 - w[1].0);
            prop_assert!(s2 <= s1 + 1e-12);
            prop_assert!(s2 >= 0.0);
        }
    }

    #[test]
    fn improvement_chain_for_power_eps(p in 0.1f64..0.9) {
        let eps: Vec<f64> = (2..=3000).map(|n| (n as f64).powf(-p)).collect();
        let (_, rep) = improvement_bound(&eps, (2, 3000)).unwrap();
        prop_assert!(rep.pass, "{:?}", rep);
    }
}

#[test]
fn s_of_r_monotone_on_grid() {
    let vals: Vec<f64> = (1..1000)
        .map(|i| s_of_r(i as f64 / 1000.0, false).unwrap())
        .collect();
    // s(r) underflows to 0 for small r; strictly increasing once positive
    assert!(vals
        .windows(2)
        .all(|w| w[0] <= w[1] && (w[0] == 0.0 || w[0] < w[1])));
    assert!(vals[998] > 0.0);
}

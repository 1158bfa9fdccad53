use std::time::Instant;

use compop::analysis::{
    fit_constant, fit_decay, improvement_bound, sandwich_check, DecayModel, SANDWICH_TOL,
};
use compop::cli::verify::{self, spectrum_for};
use compop::cli::{run_pipeline, RunConfig};
use compop::geometry::{
    annulus_area, blaschke_certificate, BlaschkeProduct, McParams, Method, WindowGrid,
};
use compop::opmatrix::{
    assemble, hs_tail_profile, singular_spectrum, AssemblyParams, SingularSpectrum,
};
use compop::series::{dirichlet_power_norms_exact, SeriesParams, Space};
use compop::symbols::{cusp_chain, cusp_constant};
use compop::SymbolMap;
use compop_acceptance::{Suite, Verdict};
use num_complex::Complex64;

const DIAGONAL: [f64; 3] = [0.3, 0.5, 0.7];
const SHIFTED_CONTRACTION: &str =
    "compose(moebius:u=0.21+0i,compose(affine:r=0.7,moebius:u=0.3+0i))";
const MC_SAMPLES: u64 = 10_000_000;
const SEED: u64 = 7;

fn spectrum(s: &str, n: usize) -> SingularSpectrum {
    let s: SymbolMap = s.parse().unwrap();
    let m = assemble(&s, n, Space::DirichletStar, &AssemblyParams::default()).unwrap();
    singular_spectrum(&m).unwrap()
}

fn diagonal_exactness() -> Verdict {
    const TOL: f64 = 1e-10;
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for r in DIAGONAL {
        let sp = spectrum(&format!("affine:r={r}"), 64);
        for n in 1..=30 {
            let want = r.powi(n as i32);
            worst = worst.max((sp.a(n) - want).abs() / want);
        }
    }
    let secs = start.elapsed().as_secs_f64();
    Verdict::new(
        worst <= TOL && secs < 1.0,
        format!("max rel err {worst:.2e} (tol {TOL:e}), {secs:.3}s (limit 1s)"),
    )
}

fn hs_upper_bound() -> Verdict {
    const TOL: f64 = 0.05;
    let mut bound_ok = true;
    let mut worst_tail: f64 = 0.0;
    for r in DIAGONAL {
        let s: SymbolMap = format!("affine:r={r}").parse().unwrap();
        let sp = spectrum(&s.to_string(), 64);
        let tails = hs_tail_profile(
            &s,
            1,
            30,
            Space::DirichletStar,
            &SeriesParams::with_degree(256),
        )
        .unwrap();
        for n in 1..=30 {
            if sp.certified[n - 1] {
                bound_ok &=
                    sp.a(n) <= r.powi(n as i32) / (1.0 - r * r).sqrt() + sp.error_radii[n - 1];
            }
            let closed = r.powi(2 * n as i32) / (1.0 - r * r);
            let t = tails[n - 1].value;
            worst_tail = worst_tail.max((t * t / closed - 1.0).abs());
        }
    }
    Verdict::new(
        bound_ok && worst_tail <= TOL,
        format!("a_n <= r^n/sqrt(1-r^2)+radius: {bound_ok}; max tail^2 rel dev {worst_tail:.2e} (tol {TOL})"),
    )
}

fn upper_law_constant() -> Verdict {
    const TOL: f64 = 0.5;
    let syms = ["affine:r=0.9", SHIFTED_CONTRACTION, "coeffs:[0,0.5,0.2]"];
    let mut lines = Vec::new();
    let mut pass = true;
    for st in syms {
        let s: SymbolMap = st.parse().unwrap();
        let sp = spectrum(st, 128);
        let sigma = s.sup_norm().unwrap();
        let cert = sp.certified_count();
        let ratio =
            |n: usize| (n <= cert).then(|| sp.a(n) / ((n as f64).sqrt() * sigma.powi(n as i32)));
        match fit_constant(ratio, 5, 40, TOL) {
            Ok(f) => {
                pass &= f.stable && cert >= 40;
                lines.push(format!(
                    "{st}: C[5,40]={:.4} C[5,80]={:.4} ({cert} certified)",
                    f.c, f.c_extended
                ));
            }
            Err(e) => {
                pass = false;
                lines.push(format!("{st}: {e}"));
            }
        }
    }
    Verdict::new(pass, format!("tol ±{TOL}; {}", lines.join("; ")))
}

fn sandwich() -> Verdict {
    const NEED: usize = 5;
    let syms = [
        "affine:r=0.3",
        "affine:r=0.5,theta=1",
        "affine:r=0.9",
        SHIFTED_CONTRACTION,
        "coeffs:[0,0.5,0.2]",
        "coeffs:[0,0.4,0,0.3]",
    ];
    let mut passed = Vec::new();
    for st in syms {
        let s: SymbolMap = st.parse().unwrap();
        if s.sup_norm().unwrap() >= 1.0 {
            continue;
        }
        if let Ok(r) = sandwich_check(&s, &spectrum(st, 128)) {
            if r.pass {
                passed.push(st);
            }
        }
    }
    Verdict::new(
        passed.len() >= NEED,
        format!(
            "{}/{} symbols pass at tol {SANDWICH_TOL} (need {NEED})",
            passed.len(),
            syms.len()
        ),
    )
}

fn cusp_constants() -> Verdict {
    const TOL: f64 = 1e-12;
    let c = cusp_chain(Complex64::new(0.0, 0.0)).unwrap();
    let chi0_err = (c.chi0 - Complex64::new(2f64.sqrt() - 1.0, 0.0)).norm();
    let chi_err = c.chi.norm();
    let a = cusp_constant();
    let pass =
        chi0_err <= TOL && chi_err <= TOL && a > 1.0 && a < 2.0 && (a - 1.56109985).abs() < 5e-9;
    Verdict::new(
        pass,
        format!("|chi0(0)-(sqrt2-1)|={chi0_err:.1e}, |chi(0)|={chi_err:.1e} (tol {TOL:e}), a={a}"),
    )
}

fn cusp_area_law() -> Verdict {
    const SE_TOL: f64 = 0.05;
    let start = Instant::now();
    let cusp = SymbolMap::cusp();
    let rows: Vec<(f64, f64)> = (3..=8)
        .map(|j| {
            let h = 0.5f64.powi(j);
            let p = McParams::new(MC_SAMPLES, SEED + j as u64);
            let m = annulus_area(&cusp, h, Method::MonteCarlo, Some(&p)).unwrap();
            (m.value / h.powi(3), m.std_error / m.value)
        })
        .collect();
    let secs = start.elapsed().as_secs_f64();
    let mut q: Vec<f64> = rows.iter().map(|r| r.0).collect();
    q.sort_by(f64::total_cmp);
    let median = 0.5 * (q[2] + q[3]);
    let spread = rows
        .iter()
        .map(|r| (r.0 / median).max(median / r.0))
        .fold(0.0, f64::max);
    let se = rows.iter().map(|r| r.1).fold(0.0, f64::max);
    Verdict::new(
        spread <= 2.0 && se < SE_TOL && secs < 60.0,
        format!("median A/h^3 {median:.4}, max factor {spread:.3} (limit 2), max rel se {se:.4} (limit {SE_TOL}), {secs:.1}s (limit 60s)"),
    )
}

fn power_norm_decay() -> Verdict {
    const LIMIT: f64 = 3.0;
    let norms = dirichlet_power_norms_exact(&SymbolMap::cusp(), 1000).unwrap();
    let mut run: f64 = 0.0;
    let rm: Vec<f64> = (10..=1000)
        .map(|n| {
            let nf = n as f64;
            run = run.max(norms.norms[n - 1] * nf.sqrt() * nf.ln().powf(-1.5));
            run
        })
        .collect();
    let ratio = rm[rm.len() - 1] / rm[0];
    Verdict::new(
        ratio.is_finite() && ratio < LIMIT,
        format!("running-max ratio {ratio:.4} (limit {LIMIT})"),
    )
}

fn root_law(big: &SingularSpectrum) -> Verdict {
    const TOL: f64 = 0.2;
    let mut cfg = RunConfig::new("cusp");
    cfg.n = 512;
    let small = spectrum_for(&SymbolMap::cusp(), &cfg, 512).unwrap();
    let fit = |sp: &SingularSpectrum| fit_decay(sp, &DecayModel::ALL);
    match (fit(big), fit(&small)) {
        (Ok(f1), Ok(f0)) => {
            let c = |f: &[compop::analysis::DecayFit]| {
                f.iter().find(|f| f.model == DecayModel::RootN).unwrap().c
            };
            let best = f1[0].model == DecayModel::RootN && f1[1].rmse > f1[0].rmse;
            let ratio = c(&f1) / c(&f0);
            Verdict::new(
                best && (ratio - 1.0).abs() <= TOL,
                format!(
                    "best {} (rmse {:.3e} vs {:.3e}), c ratio {ratio:.4} (tol ±{TOL})",
                    f1[0].model, f1[0].rmse, f1[1].rmse
                ),
            )
        }
        (a, b) => {
            let e = a.err().or(b.err()).unwrap();
            Verdict::fail(format!(
                "{e}; certified entries: {} at N=1024, {} at N=512",
                big.certified_count(),
                small.certified_count()
            ))
        }
    }
}

fn zinc_ordering(big: &SingularSpectrum) -> Verdict {
    match verify::zinc_upper(&SymbolMap::cusp(), big) {
        Ok(r) => {
            let c = &r.details["constant"];
            Verdict::new(
                r.pass,
                format!(
                    "C[20,200]={} C[20,400]={} (tol ±0.5)",
                    c["c"], c["c_extended"]
                ),
            )
        }
        Err(e) => Verdict::fail(e.to_string()),
    }
}

fn blaschke_decreasing() -> Verdict {
    let grid = WindowGrid::default();
    let logs: Vec<f64> = [4, 6, 8, 10]
        .iter()
        .map(|&r| {
            blaschke_certificate(&BlaschkeProduct::dyadic(10, r), &grid)
                .unwrap()
                .value
                .ln()
        })
        .collect();
    let pass = logs.windows(2).all(|w| w[1] < w[0]);
    let shown: Vec<String> = logs.iter().map(|l| format!("{l:.3}")).collect();
    Verdict::new(pass, format!("log cert r=4,6,8,10: [{}]", shown.join(", ")))
}

fn bound_calculus() -> Verdict {
    let start = Instant::now();
    let hi = 10_000;
    let eps: Vec<f64> = (2..=hi).map(|n| 1.0 / (n as f64 + 2.0).ln()).collect();
    let (_, r) = improvement_bound(&eps, (2, hi)).unwrap();
    let secs = start.elapsed().as_secs_f64();
    Verdict::new(
        r.chain_failures.is_empty() && r.concave && secs < 1.0,
        format!(
            "chain failures {}, max second difference {:.2e}, {secs:.3}s (limit 1s)",
            r.chain_failures.len(),
            r.max_second_difference
        ),
    )
}

fn determinism() -> Verdict {
    let dir = tempfile::tempdir().unwrap();
    let runs = [
        (SHIFTED_CONTRACTION, "sandwich", "spectrum.csv"),
        ("cusp", "cusp-area", "report.json"),
    ];
    let mut lines = Vec::new();
    let mut pass = true;
    for (symbol, check, file) in runs {
        let mut bytes = Vec::new();
        for run in ["a", "b"] {
            let out = dir.path().join(format!("{check}-{run}"));
            let mut cfg = RunConfig::new(symbol);
            cfg.n = 128;
            cfg.check = Some(check.into());
            cfg.geometry.samples = 1_000_000;
            cfg.geometry.seed = Some(SEED);
            cfg.output.dir = Some(out.clone());
            if let Err(e) = run_pipeline(&cfg, None) {
                return Verdict::fail(format!("{check}: {e}"));
            }
            bytes.push(std::fs::read(out.join(file)).unwrap());
        }
        let same = bytes[0] == bytes[1];
        pass &= same;
        lines.push(format!("{check} {file} identical: {same}"));
    }
    Verdict::new(pass, lines.join("; "))
}

fn main() {
    let mut suite = Suite::default();
    suite.criterion(1, "diagonal exactness", diagonal_exactness);
    suite.criterion(2, "Hilbert-Schmidt upper bound", hs_upper_bound);
    suite.criterion(3, "upper law constant", upper_law_constant);
    suite.criterion(4, "sandwich", sandwich);
    suite.criterion(5, "cusp constants", cusp_constants);
    suite.criterion(6, "cusp area law", cusp_area_law);
    suite.criterion(7, "power norm decay", power_norm_decay);
    let big = spectrum("cusp", 1024);
    suite.criterion(8, "root-n law", || root_law(&big));
    suite.criterion(9, "zinc ordering", || zinc_ordering(&big));
    suite.criterion(10, "Blaschke certificate", blaschke_decreasing);
    suite.criterion(11, "bound calculus", bound_calculus);
    suite.criterion(12, "determinism", determinism);
    std::process::exit(suite.finish());
}

use compop::analysis::{beta_estimate, fit_decay, lower_law_probe, sandwich_check, DecayModel};
use compop::cli::{run_pipeline, RunConfig};
use compop::opmatrix::{assemble, singular_spectrum, AssemblyParams, SingularSpectrum};
use compop::series::Space;
use compop::SymbolMap;

fn spectrum(s: &str, n: usize) -> SingularSpectrum {
    let s: SymbolMap = s.parse().unwrap();
    let m = assemble(&s, n, Space::DirichletStar, &AssemblyParams::default()).unwrap();
    singular_spectrum(&m).unwrap()
}

const SHIFTED_CONTRACTION: &str =
    "compose(moebius:u=0.21+0i,compose(affine:r=0.7,moebius:u=0.3+0i))";

#[test]
fn beta_of_diagonal_family() {
    for i in 1..=9 {
        let r = i as f64 / 10.0;
        let sp = spectrum(&format!("affine:r={r}"), 64);
        let b = beta_estimate(&sp).unwrap();
        assert!((b.beta - r).abs() < 1e-6, "r={r} beta={}", b.beta);
    }
    let id = spectrum("identity", 16);
    assert!((beta_estimate(&id).unwrap().beta - 1.0).abs() < 1e-12);
}

#[test]
fn cusp_roots_increase_over_certified_range() {
    let sp = spectrum("cusp", 512);
    let b = beta_estimate(&sp).unwrap();
    assert!(b.roots.windows(2).all(|w| w[1] > w[0]), "{:?}", b.roots);
    assert!(b.beta <= 1.0);
}

#[test]
fn sandwich_examples() {
    let r = sandwich_check(
        &"affine:r=0.5".parse().unwrap(),
        &spectrum("affine:r=0.5", 64),
    )
    .unwrap();
    assert!(r.pass && (r.lower - 0.25).abs() < 1e-12 && (r.sup_norm - 0.5).abs() < 1e-12);
    let r = sandwich_check(&SymbolMap::identity(), &spectrum("identity", 16)).unwrap();
    assert!(r.pass && (r.lower - 1.0).abs() < 1e-12 && (r.beta - 1.0).abs() < 1e-12);
    let s: SymbolMap = SHIFTED_CONTRACTION.parse().unwrap();
    assert!(s.fixes_origin);
    let r = sandwich_check(&s, &spectrum(SHIFTED_CONTRACTION, 128)).unwrap();
    assert!(r.pass, "{r:?}");
    assert!(r.lower < r.beta && r.beta < r.sup_norm);
}

#[test]
fn lower_law_probe_examples() {
    let cusp = SymbolMap::cusp();
    assert!(
        lower_law_probe(&cusp, &spectrum("cusp", 512), 0.9)
            .unwrap()
            .pass
    );
    let a = "affine:r=0.95";
    assert!(
        lower_law_probe(&a.parse().unwrap(), &spectrum(a, 128), 0.9)
            .unwrap()
            .pass
    );
    let small = "affine:r=0.5";
    assert!(lower_law_probe(&small.parse().unwrap(), &spectrum(small, 64), 0.6).is_err());
}

#[test]
fn geometric_fit_of_diagonal() {
    let fits = fit_decay(&spectrum("affine:r=0.5", 64), &DecayModel::ALL).unwrap();
    assert_eq!(fits[0].model, DecayModel::Geometric);
    assert!((fits[0].c - 2f64.ln()).abs() < 1e-6);
    assert!(fits.iter().all(|f| f.fit_range.1 <= 43));
}

#[test]
fn pipeline_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let mut outs = Vec::new();
    for run in ["a", "b"] {
        let mut cfg = RunConfig::new(SHIFTED_CONTRACTION);
        cfg.n = 48;
        cfg.check = Some("sandwich".into());
        cfg.geometry.seed = Some(7);
        cfg.output.dir = Some(dir.path().join(run));
        let out = run_pipeline(&cfg, None).unwrap();
        assert!(out.pass);
        outs.push(std::fs::read(dir.path().join(run).join("spectrum.csv")).unwrap());
        outs.push(std::fs::read(dir.path().join(run).join("report.json")).unwrap());
    }
    assert_eq!(outs[0], outs[2]);
    assert_eq!(outs[1], outs[3]);
}

#[test]
fn pipeline_rejects_bad_config_before_writing() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = RunConfig::new("moebius:u=2");
    cfg.output.dir = Some(dir.path().join("x"));
    cfg.check = Some("sandwich".into());
    assert!(run_pipeline(&cfg, None).is_err());
    assert!(!dir.path().join("x").exists());
    let mut cfg = RunConfig::new("cusp");
    cfg.check = Some("cusp-area".into());
    assert!(run_pipeline(&cfg, None).is_err());
}

//! Command-line front end. The `compop` binary is a thin wrapper over [`main_with_args`].

pub mod config;
pub mod report;
pub mod verify;

use std::ffi::OsString;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;
use sha2::{Digest, Sha256};

use crate::analysis::{self, DecayModel};
use crate::error::{Error, Result};
use crate::geometry::{self, BlaschkeProduct, CarlesonWindow, McParams, Method, WindowGrid};
use crate::opmatrix::{Route, SingularSpectrum};
use crate::series::{self, SeriesParams, Space};
use crate::symbols::SymbolMap;

pub use config::RunConfig;
pub use verify::{Check, CheckReport};

/// Thread-count variable read by the binary.
pub const THREADS_ENV: &str = "COMPOP_THREADS";

/// Exit status 2: the request itself is malformed.
pub fn is_usage_error(e: &Error) -> bool {
    matches!(
        e,
        Error::Parse(_)
            | Error::Invalid(_)
            | Error::NotSelfMap(_)
            | Error::NotOriginFixing(_)
            | Error::Unsupported(_)
    )
}

pub fn exit_code(e: &Error) -> i32 {
    if is_usage_error(e) {
        2
    } else {
        1
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "compop",
    version,
    about = "Approximation numbers of composition operators on the Dirichlet space"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Default, Args, Serialize)]
pub struct Common {
    /// TOML run configuration; flags override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub symbol: Option<String>,
    #[arg(long)]
    pub space: Option<Space>,
    /// Matrix size.
    #[arg(long = "N", id = "matrix_size")]
    pub n: Option<usize>,
    #[arg(long)]
    pub route: Option<Route>,
    /// Series degree M (coefficient route).
    #[arg(long)]
    pub deg: Option<usize>,
    /// Sampling radius.
    #[arg(long)]
    pub rho: Option<f64>,
    /// FFT length.
    #[arg(long)]
    pub fft: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Monte Carlo sample count.
    #[arg(long)]
    pub samples: Option<u64>,
}

impl Common {
    pub fn resolve(&self) -> Result<RunConfig> {
        let mut cfg = match &self.config {
            Some(p) => RunConfig::load(p)?,
            None => RunConfig::new(self.symbol.as_deref().unwrap_or("cusp")),
        };
        if let Some(s) = &self.symbol {
            cfg.symbol = s.clone();
        }
        if let Some(v) = self.space {
            cfg.space = v;
        }
        if let Some(v) = self.n {
            cfg.n = v;
        }
        if let Some(v) = self.route {
            cfg.route = Some(v);
        }
        if let Some(v) = self.deg {
            cfg.series.degree = Some(v);
        }
        if let Some(v) = self.rho {
            cfg.series.rho = Some(v);
        }
        if let Some(v) = self.fft {
            cfg.series.samples = Some(v);
        }
        if let Some(v) = self.seed {
            cfg.geometry.seed = Some(v);
        }
        if let Some(v) = self.samples {
            cfg.geometry.samples = v;
        }
        if cfg.series.degree.is_none() && (cfg.series.rho.is_some() || cfg.series.samples.is_some())
        {
            cfg.series.degree = Some(2 * cfg.n);
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
pub enum SeriesAction {
    /// Coefficients of `φ^k`.
    Pow,
    /// Dirichlet norms of `φ^j`, `1 ≤ j ≤ k`.
    Norms,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
pub enum AreaMethod {
    Exact,
    Mc,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Singular values with error radii, as CSV.
    An {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Power-series coefficients of powers of the symbol.
    Series {
        action: SeriesAction,
        #[arg(long, default_value = "cusp")]
        symbol: String,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 512)]
        deg: usize,
        #[arg(long)]
        rho: Option<f64>,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Area of the image inside an annulus `|w| ≥ 1 - t` or a window `S(e^{iθ}, h)`.
    Area {
        #[command(flatten)]
        common: Common,
        #[arg(long, conflicts_with = "h")]
        t: Option<f64>,
        #[arg(long)]
        h: Option<f64>,
        #[arg(long, default_value_t = 0.0)]
        theta: f64,
        #[arg(long, value_enum, default_value = "exact")]
        method: AreaMethod,
    },
    /// Dyadic-area upper bound `min_t n(1-t)ⁿ + √M(t)`.
    Zinc {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 40)]
        k_max: usize,
    },
    /// Window certificate for `|B₀^r|² dA` on the cusp image.
    BlaschkeCert {
        #[arg(long)]
        r: u32,
        #[arg(long, default_value_t = 10)]
        zeros: usize,
        #[arg(long, default_value_t = 8)]
        angle_levels: u32,
        #[arg(long, default_value_t = 12)]
        size_levels: u32,
    },
    /// Decay-model fits of a spectrum CSV.
    Fit {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_delimiter = ',', default_value = "geometric,rootn,nlogn")]
        models: Vec<String>,
    },
    /// Run a named check and write spectrum.csv, report.json and summary.txt.
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        check: Option<String>,
        /// Radius for the lower-law probe.
        #[arg(long)]
        r: Option<f64>,
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Majorant calculus for a sequence `ε_n`.
    BoundCalculus {
        /// `inv-log` (1/log(n+2)), `inv-sqrt`, or `power:p` (n^{-p}).
        #[arg(long, default_value = "inv-log")]
        eps: String,
        #[arg(long, default_value_t = 2)]
        n_min: usize,
        #[arg(long, default_value_t = 10_000)]
        n_max: usize,
    },
}

/// Outcome of a command: what to print and the exit status.
#[derive(Debug)]
pub struct Outcome {
    pub stdout: String,
    pub code: i32,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Self { stdout, code: 0 }
    }
}

fn hash_of<T: Serialize>(v: &T) -> String {
    let json = serde_json::to_string(v).expect("serializes");
    Sha256::digest(json.as_bytes())
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| Error::Invalid(format!("{}: {e}", dir.display())))?;
    }
    let mut f =
        fs::File::create(path).map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))?;
    f.write_all(text.as_bytes())
        .map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))
}

fn emit(out: &Option<PathBuf>, text: String) -> Result<String> {
    match out {
        Some(p) => {
            write_file(p, &text)?;
            Ok(String::new())
        }
        None => Ok(text),
    }
}

fn parse_eps(spec: &str, lo: usize, hi: usize) -> Result<Vec<f64>> {
    let f: Box<dyn Fn(f64) -> f64> = match spec.trim() {
        "inv-log" => Box::new(|n| 1.0 / (n + 2.0).ln()),
        "inv-sqrt" => Box::new(|n: f64| n.powf(-0.5)),
        s if s.starts_with("power:") => {
            let p: f64 = s[6..]
                .parse()
                .map_err(|_| Error::Invalid(format!("bad exponent in `{s}`")))?;
            Box::new(move |n: f64| n.powf(-p))
        }
        s => return Err(Error::Invalid(format!("unknown eps family `{s}`"))),
    };
    Ok((lo..=hi).map(|n| f(n as f64)).collect())
}

/// Result of [`run_pipeline`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PipelineOutcome {
    pub config_hash: String,
    pub spectrum: Option<SingularSpectrum>,
    pub reports: Vec<CheckReport>,
    pub pass: bool,
}

/// Spectrum, then the configured check; artifacts go to `output.dir` only once everything has run.
pub fn run_pipeline(cfg: &RunConfig, r: Option<f64>) -> Result<PipelineOutcome> {
    let s = cfg.validate()?;
    let check: Option<Check> = cfg.check.as_deref().map(str::parse).transpose()?;
    if check == Some(Check::CuspArea) {
        cfg.seed()?;
    }
    if check == Some(Check::LowerLaw) && r.is_none() {
        return Err(Error::Invalid("lower-law needs --r".into()));
    }
    let want_spec = check.is_none_or(|c| c.needs_spectrum());
    let spectrum = if want_spec {
        Some(verify::spectrum_for(&s, cfg, cfg.n)?)
    } else {
        None
    };
    let reports = match check {
        Some(c) => vec![verify::run_check(c, &s, cfg, spectrum.as_ref(), r)?],
        None => Vec::new(),
    };
    let pass = reports.iter().all(|r| r.pass);
    let out = PipelineOutcome {
        config_hash: cfg.hash(),
        spectrum,
        reports,
        pass,
    };
    if let Some(dir) = &cfg.output.dir {
        if let Some(sp) = &out.spectrum {
            write_file(&dir.join("spectrum.csv"), &report::spectrum_csv(sp))?;
        }
        let env = report::envelope("verify", &out.config_hash, Some(pass), &out.reports);
        write_file(&dir.join("report.json"), &report::to_pretty(&env))?;
        write_file(&dir.join("summary.txt"), &summary(cfg, &out))?;
    }
    Ok(out)
}

fn summary(cfg: &RunConfig, out: &PipelineOutcome) -> String {
    let mut s = format!(
        "compop {}\nconfig {}\nsymbol {}  space {}  N {}\n",
        env!("CARGO_PKG_VERSION"),
        out.config_hash,
        cfg.symbol,
        cfg.space,
        cfg.n
    );
    if let Some(sp) = &out.spectrum {
        s.push_str(&format!(
            "certified {} of {} (floor {})\n",
            sp.certified_count(),
            sp.values.len(),
            report::fmt_f64(sp.certification_floor)
        ));
    }
    for r in &out.reports {
        s.push_str(&format!(
            "{}: {}\n",
            r.check,
            if r.pass { "PASS" } else { "FAIL" }
        ));
    }
    s
}

pub fn execute(cli: Cli) -> Result<Outcome> {
    match cli.command {
        Command::An { common, out } => {
            let cfg = common.resolve()?;
            let s = cfg.validate()?;
            let sp = verify::spectrum_for(&s, &cfg, cfg.n)?;
            Ok(Outcome::ok(emit(&out, report::spectrum_csv(&sp))?))
        }
        Command::Series {
            action,
            symbol,
            k,
            deg,
            rho,
            format,
            out,
        } => {
            let s: SymbolMap = symbol.parse()?;
            let params = SeriesParams {
                degree: deg,
                rho,
                samples: None,
            };
            let text = match action {
                SeriesAction::Pow => {
                    let ps = series::coefficients_of_power(&s, k, &params)?;
                    match format {
                        Format::Csv => report::series_csv(&ps),
                        Format::Json => report::to_pretty(&report::series_json(&ps)),
                    }
                }
                SeriesAction::Norms => {
                    let norms = series::dirichlet_power_norms(&s, k, &params)
                        .or_else(|_| series::dirichlet_power_norms_exact(&s, k))?;
                    match format {
                        Format::Csv => {
                            let mut t = String::from("k,norm,error,aliasing\n");
                            for (i, v) in norms.norms.iter().enumerate() {
                                t.push_str(&format!(
                                    "{},{},{},{}\n",
                                    i + 1,
                                    report::fmt_f64(*v),
                                    report::fmt_f64(norms.errors[i]),
                                    norms.aliasing[i]
                                ));
                            }
                            t
                        }
                        Format::Json => {
                            report::to_pretty(&serde_json::to_value(&norms.norms).unwrap())
                        }
                    }
                }
            };
            Ok(Outcome::ok(emit(&out, text)?))
        }
        Command::Area {
            common,
            t,
            h,
            theta,
            method,
        } => {
            let cfg = common.resolve()?;
            let s = cfg.validate()?;
            let (m, mc) = match method {
                AreaMethod::Exact => (Method::ExactArcs, None),
                AreaMethod::Mc => (
                    Method::MonteCarlo,
                    Some(McParams {
                        samples: cfg.geometry.samples,
                        seed: cfg.seed()?,
                        shells: cfg.geometry.shells,
                    }),
                ),
            };
            let value = match (t, h) {
                (Some(t), None) => geometry::annulus_area(&s, t, m, mc.as_ref())?,
                (None, Some(h)) => {
                    geometry::window_area(&s, &CarlesonWindow::new(theta, h)?, m, mc.as_ref())?
                }
                _ => return Err(Error::Invalid("give exactly one of --t and --h".into())),
            };
            let body = json!({ "value": value.value, "std_error": value.std_error, "method": value.method,
                               "samples": value.samples, "t": t, "h": h, "theta": theta });
            Ok(Outcome::ok(report::to_pretty(&report::envelope(
                "area",
                &cfg.hash(),
                None,
                &body,
            ))))
        }
        Command::Zinc { common, n, k_max } => {
            let cfg = common.resolve()?;
            let s = cfg.validate()?;
            if n == 0 {
                return Err(Error::Invalid("n must be positive".into()));
            }
            let b = geometry::ZincTable::new(&s, &geometry::default_t_grid(), k_max)?.bound(n);
            let body = json!({ "n": b.n, "value": b.value, "t_star": b.t_star });
            Ok(Outcome::ok(report::to_pretty(&report::envelope(
                "zinc",
                &cfg.hash(),
                None,
                &body,
            ))))
        }
        Command::BlaschkeCert {
            r,
            zeros,
            angle_levels,
            size_levels,
        } => {
            let grid = WindowGrid {
                angle_levels,
                size_levels,
            };
            let c = geometry::blaschke_certificate(&BlaschkeProduct::dyadic(zeros, r), &grid)?;
            let hash = hash_of(&(r, zeros, angle_levels, size_levels));
            Ok(Outcome::ok(report::to_pretty(&report::envelope(
                "blaschke-cert",
                &hash,
                None,
                &c,
            ))))
        }
        Command::Fit { input, models } => {
            let text = fs::read_to_string(&input)
                .map_err(|e| Error::Invalid(format!("{}: {e}", input.display())))?;
            let sp = report::parse_spectrum_csv(&text)?;
            let models = models
                .iter()
                .map(|m| m.parse())
                .collect::<Result<Vec<DecayModel>>>()?;
            let hash = hash_of(&(&text, &models));
            match analysis::fit_decay(&sp, &models) {
                Ok(fits) => Ok(Outcome::ok(report::to_pretty(&report::envelope(
                    "fit", &hash, None, &fits,
                )))),
                Err(e) => {
                    let body = json!({ "error": e.to_string(), "certified": sp.certified_count() });
                    Ok(Outcome {
                        stdout: report::to_pretty(&report::envelope(
                            "fit",
                            &hash,
                            Some(false),
                            &body,
                        )),
                        code: 1,
                    })
                }
            }
        }
        Command::Verify {
            common,
            check,
            r,
            out_dir,
        } => {
            let mut cfg = common.resolve()?;
            if let Some(c) = check {
                cfg.check = Some(c);
            }
            if cfg.check.is_none() {
                return Err(Error::Invalid("verify needs --check".into()));
            }
            if let Some(d) = out_dir {
                cfg.output.dir = Some(d);
            }
            let out = run_pipeline(&cfg, r)?;
            let env = report::envelope("verify", &out.config_hash, Some(out.pass), &out.reports);
            Ok(Outcome {
                stdout: report::to_pretty(&env),
                code: if out.pass { 0 } else { 1 },
            })
        }
        Command::BoundCalculus { eps, n_min, n_max } => {
            if n_min < 1 || n_max <= n_min {
                return Err(Error::Invalid("need 1 ≤ n-min < n-max".into()));
            }
            let e = parse_eps(&eps, n_min, n_max)?;
            let (calc, rep) = analysis::improvement_bound(&e, (n_min, n_max))?;
            let body = json!({ "eps": eps, "n_range": [n_min, n_max], "report": rep,
                               "phi_knots": calc.phi.knots.len() });
            let hash = hash_of(&(&eps, n_min, n_max));
            Ok(Outcome {
                stdout: report::to_pretty(&report::envelope(
                    "bound-calculus",
                    &hash,
                    Some(rep.pass),
                    &body,
                )),
                code: if rep.pass { 0 } else { 1 },
            })
        }
    }
}

/// Parse arguments and run; returns the exit status after printing.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(cli) {
        Ok(o) => {
            print!("{}", o.stdout);
            o.code
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(args: &[&str]) -> Result<Outcome> {
        execute(Cli::try_parse_from(std::iter::once("compop").chain(args.iter().copied())).unwrap())
    }

    #[test]
    fn clap_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }

    #[test]
    fn an_affine_csv() {
        let o = run(&["an", "--symbol", "affine:r=0.5", "--N", "8"]).unwrap();
        let sp = report::parse_spectrum_csv(&o.stdout).unwrap();
        for n in 1..=8 {
            assert_eq!(sp.a(n), 0.5f64.powi(n as i32));
        }
    }

    #[test]
    fn malformed_symbol_is_usage_error() {
        let e = run(&["an", "--symbol", "cusp(", "--N", "8"]).unwrap_err();
        assert_eq!(exit_code(&e), 2);
    }

    #[test]
    fn mc_needs_seed() {
        let e = run(&["area", "--symbol", "cusp", "--t", "0.5", "--method", "mc"]).unwrap_err();
        assert_eq!(exit_code(&e), 2);
    }

    #[test]
    fn eps_families() {
        assert_eq!(parse_eps("power:1", 2, 3).unwrap(), vec![0.5, 1.0 / 3.0]);
        assert!(parse_eps("nope", 2, 3).is_err());
    }
}

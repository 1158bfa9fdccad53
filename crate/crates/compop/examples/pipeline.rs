//! A configured run: spectrum, one check and the three artifacts in an output directory.
//!
//! Usage: `cargo run --release --example pipeline -- [out_dir]`

use compop::cli::{run_pipeline, RunConfig};

const CONFIG: &str = r#"
symbol = "compose(moebius:u=0.21+0i,compose(affine:r=0.7,moebius:u=0.3+0i))"
n = 128
check = "sandwich"

[geometry]
seed = 7
"#;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "pipeline-out".into());
    let mut cfg = RunConfig::from_toml(CONFIG)?;
    cfg.output.dir = Some(dir.clone().into());
    let out = run_pipeline(&cfg, None)?;
    println!("config {}", out.config_hash);
    for r in &out.reports {
        println!("{}: {}", r.check, if r.pass { "PASS" } else { "FAIL" });
    }
    println!("{}", std::fs::read_to_string(format!("{dir}/summary.txt"))?);
    Ok(())
}

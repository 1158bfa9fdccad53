//! Approximation numbers of the cusp composition operator on 𝒟_*.
//!
//! Usage: `cargo run --release --example cusp_spectrum -- [N]`

use std::time::Instant;

use compop::opmatrix::{assemble, singular_spectrum, AssemblyParams};
use compop::series::Space;
use compop::SymbolMap;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let n: usize = std::env::args()
        .nth(1)
        .map(|s| s.parse())
        .transpose()?
        .unwrap_or(256);
    let t0 = Instant::now();
    let m = assemble(
        &SymbolMap::cusp(),
        n,
        Space::DirichletStar,
        &AssemblyParams::default(),
    )?;
    let t1 = t0.elapsed();
    let sp = singular_spectrum(&m)?;
    println!(
        "N = {n}: assembly {:.2?}, spectrum {:.2?}",
        t1,
        t0.elapsed() - t1
    );
    println!(
        "hs_tail = {:.3e} ({:?}), assembly_error = {:.3e}, floor = {:.3e}, certified = {}",
        m.hs_tail,
        m.tail.model,
        m.assembly_error,
        sp.certification_floor,
        sp.certified_count()
    );
    for k in [1, 2, 3, 5, 10, 15, 20, 30, 40, 60, 80] {
        if k <= n {
            println!(
                "a_{k:<3} = {:.6e}  {}",
                sp.a(k),
                if sp.certified[k - 1] { "certified" } else { "" }
            );
        }
    }
    Ok(())
}

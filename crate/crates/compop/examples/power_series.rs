//! Taylor coefficients of powers of a symbol by FFT sampling, and their 𝒟 norms.
//!
//! Usage: `cargo run --release --example power_series -- [k]`

use compop::analysis::power_decay_exponent;
use compop::series::{coefficients_of_power, dirichlet_power_norms_exact, SeriesParams, Space};
use compop::SymbolMap;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let k: usize = std::env::args()
        .nth(1)
        .map(|s| s.parse())
        .transpose()?
        .unwrap_or(3);
    let cusp = SymbolMap::cusp();
    let ps = coefficients_of_power(&cusp, k, &SeriesParams::with_degree(512))?;
    println!(
        "chi^{k}: degree {}, rho {:.6}, error bound {:.2e}, aliasing {}, flushed {}",
        ps.degree(),
        ps.sampling_radius,
        ps.error_bound,
        ps.aliasing,
        ps.flushed
    );
    for (j, c) in ps.coeffs.iter().enumerate().take(8) {
        println!("  c_{j} = {c:.10}");
    }
    println!(
        "  ||chi^{k}||_D* from coefficients = {:.8}",
        ps.space_norm(Space::DirichletStar)?
    );

    let norms = dirichlet_power_norms_exact(&cusp, 1000)?;
    println!(
        "  ||chi^{k}||_D* from the image area = {:.8}",
        norms.norms[k - 1]
    );
    for n in [10, 100, 1000] {
        let nf = n as f64;
        let q = norms.norms[n - 1] * nf.sqrt() * nf.ln().powf(-1.5);
        println!(
            "n = {n:<5} ||chi^n|| = {:.4e}  sqrt(n) (log n)^-1.5 scaled = {q:.4}",
            norms.norms[n - 1]
        );
    }
    let (delta, c) = power_decay_exponent(&norms.norms, 10, 1000)?;
    println!("fitted ||chi^n|| ~ {c:.4} n^-{delta:.4} on [10, 1000]");
    Ok(())
}

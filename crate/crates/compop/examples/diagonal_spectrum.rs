//! `phi = r z` has `a_n = r^n`; compare with the computed spectrum, the
//! Hilbert-Schmidt tail and the beta / sandwich estimates.

use compop::analysis::{beta_estimate, sandwich_check};
use compop::opmatrix::{assemble, hs_tail_profile, singular_spectrum, AssemblyParams};
use compop::series::{SeriesParams, Space};
use compop::SymbolMap;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for r in [0.3, 0.5, 0.7] {
        let s = SymbolMap::affine(r, 0.0)?;
        let sp = singular_spectrum(&assemble(
            &s,
            64,
            Space::DirichletStar,
            &AssemblyParams::default(),
        )?)?;
        let tails = hs_tail_profile(
            &s,
            1,
            30,
            Space::DirichletStar,
            &SeriesParams::with_degree(256),
        )?;
        let worst = (1..=30)
            .map(|n| (sp.a(n) / r.powi(n as i32) - 1.0).abs())
            .fold(0.0, f64::max);
        println!(
            "r = {r}: max rel err over n <= 30 = {worst:.1e}, certified {}",
            sp.certified_count()
        );
        for n in [1, 10, 30] {
            let closed = (r.powi(2 * n as i32) / (1.0 - r * r)).sqrt();
            println!(
                "  n = {n:<2} a_n = {:.6e}  hs tail = {:.6e}  closed form {closed:.6e}",
                sp.a(n),
                tails[n - 1].value
            );
        }
        let b = beta_estimate(&sp)?;
        let w = sandwich_check(&s, &sp)?;
        println!(
            "  beta = {:.6}, [phi]^2 = {:.4} <= beta <= {:.4}: {}",
            b.beta, w.lower, w.sup_norm, w.pass
        );
    }
    Ok(())
}

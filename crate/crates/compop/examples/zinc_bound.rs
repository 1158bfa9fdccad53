//! Upper bound on `a_n` from the image area near the boundary, against the computed spectrum.

use compop::geometry::{default_t_grid, ZincTable};
use compop::opmatrix::{assemble, singular_spectrum, AssemblyParams};
use compop::series::Space;
use compop::SymbolMap;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for s in [SymbolMap::affine(0.5, 0.0)?, SymbolMap::cusp()] {
        let table = ZincTable::new(&s, &default_t_grid(), 40)?;
        let sp = singular_spectrum(&assemble(
            &s,
            256,
            Space::DirichletStar,
            &AssemblyParams::default(),
        )?)?;
        println!("{s}: {} certified", sp.certified_count());
        for n in [2, 5, 10, 20, 50, 100, 200] {
            let b = table.bound(n);
            let cert = if n <= sp.certified_count() {
                format!("a_n = {:.4e}", sp.a(n))
            } else {
                "-".into()
            };
            println!(
                "  n = {n:<4} bound {:.4e} at t* = {:.4e}  {cert}",
                b.value, b.t_star
            );
        }
    }
    Ok(())
}

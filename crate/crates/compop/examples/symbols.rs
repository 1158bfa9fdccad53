//! Parsing symbols, evaluating them and the cusp map's intermediate steps.

use compop::symbols::{cusp_chain, PolarGrid};
use compop::SymbolMap;
use num_complex::Complex64;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let z = Complex64::new(0.4, 0.3);
    for text in [
        "affine:r=0.5,theta=1",
        "moebius:u=0.3+0.1i",
        "compose(moebius:u=0.21+0i,compose(affine:r=0.7,moebius:u=0.3+0i))",
        "coeffs:[0,0.5,0.2]",
        "cusp",
    ] {
        let s: SymbolMap = text.parse()?;
        println!(
            "{s}\n  phi({z}) = {:.6}  sup|phi| = {:.6}  [phi] = {:.6}  univalent {}",
            s.evaluate(z)?,
            s.sup_norm()?,
            s.pseudo_hyperbolic_sup(&PolarGrid::default())?,
            s.is_univalent
        );
    }

    let c = cusp_chain(Complex64::new(0.0, 0.0))?;
    println!(
        "cusp chain at 0: chi0 = {:.15}, chi = {:.3e}",
        c.chi0,
        c.chi.norm()
    );

    // not a self-map of the disk
    println!("{:?}", "moebius:u=1.5".parse::<SymbolMap>().err());
    Ok(())
}

//! Area of the cusp image near the contact point: exact slices against stratified Monte Carlo.
//!
//! Usage: `cargo run --release --example cusp_area -- [samples] [seed]`

use compop::geometry::{annulus_area, window_area, CarlesonWindow, McParams, Method};
use compop::SymbolMap;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let samples: u64 = args
        .next()
        .map(|s| s.parse())
        .transpose()?
        .unwrap_or(10_000_000);
    let seed: u64 = args.next().map(|s| s.parse()).transpose()?.unwrap_or(7);
    let cusp = SymbolMap::cusp();
    println!(
        "{:>8} {:>12} {:>12} {:>10}",
        "h", "exact/h^3", "mc/h^3", "rel se"
    );
    for j in 3..=8 {
        let h = 0.5f64.powi(j);
        let ex = annulus_area(&cusp, h, Method::ExactArcs, None)?;
        let mc = annulus_area(
            &cusp,
            h,
            Method::MonteCarlo,
            Some(&McParams::new(samples, seed)),
        )?;
        println!(
            "{h:>8} {:>12.6} {:>12.6} {:>10.4}",
            ex.value / h.powi(3),
            mc.value / h.powi(3),
            mc.std_error / mc.value
        );
    }

    let w = CarlesonWindow::new(0.0, 0.1)?;
    let ex = window_area(&cusp, &w, Method::ExactArcs, None)?;
    let mc = window_area(
        &cusp,
        &w,
        Method::MonteCarlo,
        Some(&McParams::new(samples, seed)),
    )?;
    println!(
        "window S(1, 0.1): exact {:.6e}, mc {:.6e} ± {:.1e}",
        ex.value, mc.value, mc.std_error
    );
    Ok(())
}

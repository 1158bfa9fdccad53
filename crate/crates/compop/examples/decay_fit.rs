//! Model selection for the decay of `log a_n` over the certified range of a spectrum CSV,
//! or of a synthetic `a_n = exp(-c sqrt n)` when no file is given.
//!
//! Usage: `cargo run --release --example decay_fit -- [spectrum.csv]`

use compop::analysis::{fit_decay, fit_points, DecayModel};
use compop::cli::report::parse_spectrum_csv;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    if let Some(path) = std::env::args().nth(1) {
        let sp = parse_spectrum_csv(&std::fs::read_to_string(path)?)?;
        println!("{} certified entries", sp.certified_count());
        for f in fit_decay(&sp, &DecayModel::ALL)? {
            println!(
                "{:<9} c = {:.5} rmse = {:.3e} on {:?}",
                f.model.to_string(),
                f.c,
                f.rmse,
                f.fit_range
            );
        }
        return Ok(());
    }
    let pts: Vec<(usize, f64)> = (2..200)
        .map(|n| (n, (-0.8 * (n as f64).sqrt()).exp()))
        .collect();
    for m in DecayModel::ALL {
        let f = fit_points(&pts, m)?;
        println!("{:<9} c = {:.5} rmse = {:.3e}", m.to_string(), f.c, f.rmse);
    }
    Ok(())
}

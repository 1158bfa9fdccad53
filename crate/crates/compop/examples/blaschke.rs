//! Carleson-window certificate for `|B|^2 dA` restricted to the cusp image,
//! with `B` a dyadic Blaschke product raised to increasing powers.

use compop::geometry::{blaschke_certificate, BlaschkeProduct, WindowGrid};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let grid = WindowGrid::default();
    println!("{} windows", grid.windows().len());
    for r in [2, 4, 6, 8, 10] {
        let c = blaschke_certificate(&BlaschkeProduct::dyadic(10, r), &grid)?;
        println!(
            "r = {r:<2} certificate {:.4e} (log {:.3}), worst window theta {:.4} h {:.2e}, quad err {:.1e}",
            c.value,
            c.value.ln(),
            c.worst.theta,
            c.worst.h,
            c.quadrature_error
        );
    }
    Ok(())
}

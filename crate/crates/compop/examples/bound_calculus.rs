//! Concave majorant of `eps_n + log(n)/n` and the resulting chain
//! `n exp(-n Phi(1/n)) <= exp(-n eps_n)`.

use compop::analysis::improvement_bound;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let hi = 10_000;
    let cases: [(&str, fn(f64) -> f64); 3] = [
        ("1/log(n+2)", |n| 1.0 / (n + 2.0).ln()),
        ("n^-1/2", |n| n.powf(-0.5)),
        ("n^-0.9", |n| n.powf(-0.9)),
    ];
    for (name, eps) in cases {
        let seq: Vec<f64> = (2..=hi).map(|n| eps(n as f64)).collect();
        let (calc, r) = improvement_bound(&seq, (2, hi))?;
        println!(
            "eps = {name:<11} knots {:<5} concave {} chain failures {} C = {:.4} pass {}",
            calc.phi.knots.len(),
            r.concave,
            r.chain_failures.len(),
            r.constant,
            r.pass
        );
    }
    Ok(())
}

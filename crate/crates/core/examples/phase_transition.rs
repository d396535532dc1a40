//! The Theta(k^2) phase transition: sample complexity n*(k, eps) against k
//! on log-log axes, plus where the older Davisson-style bound turns positive.

use mrl::bounds::davisson_positivity_threshold;
use mrl::experiments::phase_transition_sweep;

fn main() -> mrl::Result<()> {
    let result = phase_transition_sweep(&[8, 16, 32, 64], 0.25, 1.0, 1, 0, 1.9, 2.1)?;
    print!("{}", result.to_csv());
    println!(
        "fitted slope of log n* vs log k: {:.4} (k^2 scaling -> slope ~ 2)",
        result.aggregate("fitted_slope").unwrap()
    );
    for k in [8usize, 16, 32, 64] {
        println!(
            "Davisson-style bound turns positive only past n = {:.3e} at k = {k}",
            davisson_positivity_threshold(k, 1.0)
        );
    }
    Ok(())
}

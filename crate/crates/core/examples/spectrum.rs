//! Spectral summary of a reversible chain: eigenvalues, spectral gap,
//! absolute gap, relaxation time and the pseudo-spectral gap.

use mrl::markov::{stationary, TransitionMatrix};
use mrl::spectral;

fn main() -> mrl::Result<()> {
    // birth-death chain on 4 states
    let kernel = TransitionMatrix::from_rows(&[
        vec![0.6, 0.4, 0.0, 0.0],
        vec![0.2, 0.5, 0.3, 0.0],
        vec![0.0, 0.3, 0.4, 0.3],
        vec![0.0, 0.0, 0.6, 0.4],
    ])?;
    let pi = stationary(&kernel)?;
    println!("pi = {:?}", pi.as_slice());

    let summary = spectral::eigen_reversible(&kernel, &pi)?;
    println!("eigenvalues = {:?}", summary.eigenvalues);
    println!(
        "gamma = {:.6}, gamma_star = {:.6}, tau_rel = {:.6}",
        summary.gamma, summary.gamma_star, summary.tau_rel
    );

    let (gamma_ps, argmax_r) = spectral::pseudo_spectral_gap(&kernel, &pi, 6)?;
    println!("pseudo-spectral gap = {gamma_ps:.6} attained at r = {argmax_r}");
    println!("as JSON: {}", serde_json::to_string(&summary).unwrap());
    Ok(())
}

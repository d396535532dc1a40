//! Evaluate the redundancy bounds over a grid and locate the sample
//! complexity n*(k, epsilon) under the upper-bound proxy.

use mrl::bounds;

fn main() -> mrl::Result<()> {
    println!("{}", bounds::BoundsRow::csv_header());
    for k in [2usize, 8, 32] {
        for n in [100u64, 10_000, 1_000_000] {
            println!("{}", bounds::BoundsRow::compute(k, n, 1.0, 1.0).to_csv_line());
        }
    }

    println!();
    for epsilon in [1.0, 0.5, 0.25, 0.1] {
        let n = bounds::n_star(8, epsilon)?;
        println!(
            "n*(k=8, eps={epsilon}) = {n}   (upper bound there: {:.4} bits/symbol)",
            bounds::upper_bound_thm2(8, n)
        );
    }
    Ok(())
}

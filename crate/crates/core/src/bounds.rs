//! Closed-form redundancy bounds for reversible Markov sources and the
//! sample-complexity threshold n*.
//!
//! All logarithms are base 2, so every bound is in bits (or bits/symbol where
//! noted). Formulas are evaluated exactly as written; negative values are
//! returned as-is and a clamped accessor is provided for display, since a
//! vacuous bound regime is itself informative.

use crate::error::{Error, Result};
use std::f64::consts::{E, PI};

/// Parameter bundle for bound evaluation.
///
/// `c` is the slack constant in the relaxation-time cap
/// tau0 = 1 + (2+c)/sqrt(k); `big_c` is the caller-supplied constant of the
/// Davisson-style bound (there is no canonical value, so it is never
/// defaulted silently at the CLI surface).
#[derive(Debug, Clone, Copy)]
pub struct BoundParams {
    pub k: usize,
    pub n: u64,
    pub c: f64,
    pub big_c: f64,
    pub tau_rel: f64,
    pub epsilon: f64,
}

impl BoundParams {
    pub fn new(k: usize, n: u64, c: f64, big_c: f64, tau_rel: f64, epsilon: f64) -> Result<Self> {
        if k < 2 {
            return Err(Error::Invalid(format!("k must be >= 2, got {k}")));
        }
        if n < 2 {
            return Err(Error::Invalid(format!("n must be >= 2, got {n}")));
        }
        if !(c > 0.0) {
            return Err(Error::Invalid(format!("c must be > 0, got {c}")));
        }
        if !(big_c > 0.0) {
            return Err(Error::Invalid(format!("C must be > 0, got {big_c}")));
        }
        if !(tau_rel >= 1.0) {
            return Err(Error::Invalid(format!("tau_rel must be >= 1, got {tau_rel}")));
        }
        if !(epsilon > 0.0) {
            return Err(Error::Invalid(format!("epsilon must be > 0, got {epsilon}")));
        }
        Ok(BoundParams { k, n, c, big_c, tau_rel, epsilon })
    }
}

/// The relaxation-time cap tau0(k, c) = 1 + (2+c)/sqrt(k).
pub fn tau0(k: usize, c: f64) -> f64 {
    1.0 + (2.0 + c) / (k as f64).sqrt()
}

/// Upper bound on per-symbol redundancy:
/// 2k²/n · log₂(n/k² + 1) + k²/n + (log₂k + 3)/n.
pub fn upper_bound_thm2(k: usize, n: u64) -> f64 {
    let kf = k as f64;
    let nf = n as f64;
    let k2 = kf * kf;
    2.0 * k2 / nf * (nf / k2 + 1.0).log2() + k2 / nf + ((kf.log2() + 3.0) / nf)
}

/// Lower bound on per-symbol redundancy over chains with
/// tau_rel ≤ tau0(k, c):
/// k(k−1)/(4n)·log₂(2(n−1)/(k(k−1))) + k(k−1)/(4n)·log₂(e/(16π·tau0)) − log₂k/n.
///
/// May be negative (vacuous) for small n; see [`lower_bound_thm1_clamped`].
pub fn lower_bound_thm1(k: usize, n: u64, c: f64) -> f64 {
    let kf = k as f64;
    let nf = n as f64;
    let d2 = kf * (kf - 1.0); // k(k-1)
    let coeff = d2 / (4.0 * nf);
    coeff * (2.0 * (nf - 1.0) / d2).log2() + coeff * (E / (16.0 * PI * tau0(k, c))).log2()
        - kf.log2() / nf
}

/// [`lower_bound_thm1`] clamped at zero for display and plotting.
pub fn lower_bound_thm1_clamped(k: usize, n: u64, c: f64) -> f64 {
    lower_bound_thm1(k, n, c).max(0.0)
}

/// One minus sqrt(1 - 1/(4k⁴)), computed without cancellation.
fn davisson_denom(k: usize) -> f64 {
    let x = 1.0 / (4.0 * (k as f64).powi(4));
    x / (1.0 + (1.0 - x).sqrt())
}

/// Davisson-style lower bound:
/// k(k−1)/(2n)·log₂n + k(k−1)/n·log₂(1/k⁴) − k(k−1)/(2n)·log₂[C/(1−√(1−1/(4k⁴)))].
pub fn davisson_bound(k: usize, n: u64, big_c: f64) -> f64 {
    let kf = k as f64;
    let nf = n as f64;
    let d2 = kf * (kf - 1.0);
    d2 / (2.0 * nf) * nf.log2() + d2 / nf * (1.0 / kf.powi(4)).log2()
        - d2 / (2.0 * nf) * (big_c / davisson_denom(k)).log2()
}

/// Smallest n at which the Davisson-style bound becomes positive.
///
/// All three terms of the bound share the positive factor k(k−1)/n, so the
/// sign condition reduces to n > k⁸ · C/(1−√(1−1/(4k⁴))). Returned as f64
/// because the threshold overflows u64 already at k = 32.
pub fn davisson_positivity_threshold(k: usize, big_c: f64) -> f64 {
    let boundary = (k as f64).powi(8) * big_c / davisson_denom(k);
    boundary.floor() + 1.0
}

/// Lower bound on the differential entropy h(θ) of the prior, in bits:
/// d·log₂(2/(k(k−1))) + d·log₂e − log₂k with d = k(k−1)/2.
pub fn h_theta_lower(k: usize) -> f64 {
    let kf = k as f64;
    let d = kf * (kf - 1.0) / 2.0;
    d * (2.0 / (kf * (kf - 1.0))).log2() + d * E.log2() - kf.log2()
}

/// Upper bound on the conditional entropy h(θ | Xⁿ), in bits:
/// (k(k−1)/4)·log₂(16πe·τ/(n−1)) + (k(k−1)/4)·log₂(2/(k(k−1))).
pub fn h_theta_given_xn_upper(k: usize, n: u64, tau: f64) -> f64 {
    let kf = k as f64;
    let nf = n as f64;
    let q = kf * (kf - 1.0) / 4.0;
    q * (16.0 * PI * E * tau / (nf - 1.0)).log2() + q * (2.0 / (kf * (kf - 1.0))).log2()
}

/// Variance bound for the edge-frequency estimator: 8·θ·τ/(n−1).
pub fn var_bound(theta_ij: f64, n: u64, tau: f64) -> f64 {
    8.0 * theta_ij * tau / (n as f64 - 1.0)
}

/// Largest n considered by [`n_star`] before giving up.
pub const N_STAR_LIMIT: u64 = 1 << 62;

/// Smallest n ≥ 2 with upper_bound_thm2(k, n) ≤ epsilon.
///
/// The upper-bound expression is used as the computable proxy for the unknown
/// exact minimax redundancy. Search: double n until the bound drops below
/// epsilon, bisect the final bracket, then scan ±8 around the bisection
/// answer (the bound is only eventually monotone, so the scan certifies the
/// local boundary).
pub fn n_star(k: usize, epsilon: f64) -> Result<u64> {
    if !(epsilon > 0.0) {
        return Err(Error::Invalid(format!("epsilon must be > 0, got {epsilon}")));
    }
    let ok = |n: u64| upper_bound_thm2(k, n) <= epsilon;
    if ok(2) {
        return Ok(2);
    }
    let mut hi = 2u64;
    while !ok(hi) {
        if hi >= N_STAR_LIMIT {
            return Err(Error::NonConvergence(format!(
                "no n <= 2^62 meets the bound for k={k}, epsilon={epsilon}"
            )));
        }
        hi = (hi * 2).min(N_STAR_LIMIT);
    }
    // bisection: lo fails, hi passes
    let mut lo = hi / 2;
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if ok(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    // certify/adjust against non-monotonicity in a +-8 window
    let mut best = hi;
    let lo_edge = best.saturating_sub(8).max(2);
    for n in lo_edge..best + 8 {
        if ok(n) && n < best {
            best = n;
        }
    }
    while best > 2 && ok(best - 1) {
        best -= 1;
    }
    Ok(best)
}

/// One row of the bounds CSV: k,n,c,C,tau_rel,thm1_lower,thm2_upper,davisson,h_theta,h_theta_given_xn.
#[derive(Debug, Clone)]
pub struct BoundsRow {
    pub k: usize,
    pub n: u64,
    pub c: f64,
    pub big_c: f64,
    pub tau_rel: f64,
    pub thm1_lower: f64,
    pub thm2_upper: f64,
    pub davisson: f64,
    pub h_theta: f64,
    pub h_theta_given_xn: f64,
}

impl BoundsRow {
    pub fn compute(k: usize, n: u64, c: f64, big_c: f64) -> Self {
        let tau_rel = tau0(k, c);
        BoundsRow {
            k,
            n,
            c,
            big_c,
            tau_rel,
            thm1_lower: lower_bound_thm1(k, n, c),
            thm2_upper: upper_bound_thm2(k, n),
            davisson: davisson_bound(k, n, big_c),
            h_theta: h_theta_lower(k),
            h_theta_given_xn: h_theta_given_xn_upper(k, n, tau_rel),
        }
    }

    pub fn csv_header() -> &'static str {
        "k,n,c,C,tau_rel,thm1_lower,thm2_upper,davisson,h_theta,h_theta_given_xn"
    }

    pub fn to_csv_line(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{}",
            self.k,
            self.n,
            self.c,
            self.big_c,
            self.tau_rel,
            self.thm1_lower,
            self.thm2_upper,
            self.davisson,
            self.h_theta,
            self.h_theta_given_xn
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn thm2_small_example() {
        // 0.08*log2(26) + 0.04 + 0.04
        let v = upper_bound_thm2(2, 100);
        let expect = 0.08 * 26f64.log2() + 0.04 + 0.04;
        assert!((v - expect).abs() < 1e-12);
        assert!((v - 0.456).abs() < 1e-3);
    }

    #[test]
    fn thm2_decreasing_tail() {
        let k = 5usize;
        let start = (E * 25.0).ceil() as u64 + 1;
        let mut prev = upper_bound_thm2(k, start);
        for n in start + 1..start + 2000 {
            let v = upper_bound_thm2(k, n);
            assert!(v < prev, "not decreasing at n={n}");
            prev = v;
        }
        assert!(upper_bound_thm2(k, 1 << 40) < 1e-6);
    }

    #[test]
    fn thm2_at_n_equals_k_squared() {
        for k in [4u64, 16, 64, 256] {
            let v = upper_bound_thm2(k as usize, k * k);
            let expect = 2.0 + 1.0 + ((k as f64).log2() + 3.0) / (k * k) as f64;
            assert!((v - expect).abs() < 1e-12);
            assert!((v - 3.0).abs() < 0.5);
        }
    }

    #[test]
    fn thm1_positive_example() {
        // independent recomputation of the three terms
        let k = 10.0f64;
        let n = 1e4;
        let coeff = k * (k - 1.0) / (4.0 * n);
        let t1 = coeff * (2.0 * (n - 1.0) / (k * (k - 1.0))).log2();
        let t2 = coeff * (E / (16.0 * PI * (1.0 + 3.0 / k.sqrt()))).log2();
        let t3 = k.log2() / n;
        let v = lower_bound_thm1(10, 10_000, 1.0);
        assert!((v - (t1 + t2 - t3)).abs() < 1e-15);
        assert!(v > 0.005 && v < 0.006, "{v}");
    }

    #[test]
    fn thm1_vacuous_and_monotone_in_c() {
        assert!(lower_bound_thm1(10, 100, 1.0) < 0.0);
        assert_eq!(lower_bound_thm1_clamped(10, 100, 1.0), 0.0);
        for k in [2usize, 5, 20] {
            for n in [10u64, 1000, 100_000] {
                assert!(lower_bound_thm1(k, n, 1.0) >= lower_bound_thm1(k, n, 2.0));
            }
        }
    }

    #[test]
    fn davisson_direct_and_log_law() {
        let k = 2usize;
        let n = 100u64;
        // independent three-term evaluation
        let d2 = 2.0;
        let denom = 1.0 - (1.0 - 1.0 / 64.0f64).sqrt();
        let expect = d2 / 200.0 * 100f64.log2() + d2 / 100.0 * (1.0 / 16.0f64).log2()
            - d2 / 200.0 * (1.0 / denom).log2();
        assert!((davisson_bound(k, n, 1.0) - expect).abs() < 1e-12);
        // doubling C lowers the bound by exactly k(k-1)/(2n)
        for k in [3usize, 7] {
            let d2 = (k * (k - 1)) as f64;
            let delta = davisson_bound(k, 500, 1.0) - davisson_bound(k, 500, 2.0);
            assert!((delta - d2 / 1000.0).abs() < 1e-12);
        }
    }

    #[test]
    fn davisson_threshold_is_sign_boundary() {
        for k in [2usize, 4, 8] {
            let t = davisson_positivity_threshold(k, 1.0) as u64;
            assert!(davisson_bound(k, t, 1.0) > 0.0);
            assert!(davisson_bound(k, t - 1, 1.0) <= 0.0);
        }
    }

    #[test]
    fn h_theta_lower_small_k() {
        assert!((h_theta_lower(2) - (E.log2() - 1.0)).abs() < 1e-12);
        let k3 = 3.0 * (1.0f64 / 3.0).log2() + 3.0 * E.log2() - 3.0f64.log2();
        assert!((h_theta_lower(3) - k3).abs() < 1e-12);
        assert!(h_theta_lower(10_000).is_finite());
    }

    #[test]
    fn h_theta_given_xn_examples() {
        let v = h_theta_given_xn_upper(2, 101, 1.0);
        let expect = 0.5 * (16.0 * PI * E / 100.0).log2();
        assert!((v - expect).abs() < 1e-12);
        // doubling (n-1) lowers the value by k(k-1)/4 bits
        for k in [2usize, 6] {
            let q = (k * (k - 1)) as f64 / 4.0;
            let delta = h_theta_given_xn_upper(k, 101, 1.5) - h_theta_given_xn_upper(k, 201, 1.5);
            assert!((delta - q).abs() < 1e-12);
        }
    }

    #[test]
    fn assembly_identity() {
        for k in [2usize, 3, 10, 50] {
            for n in [10u64, 1000, 1_000_000] {
                for c in [0.5, 1.0, 3.0] {
                    let lhs = lower_bound_thm1(k, n, c);
                    let rhs =
                        (h_theta_lower(k) - h_theta_given_xn_upper(k, n, tau0(k, c))) / n as f64;
                    assert!((lhs - rhs).abs() < 1e-9, "k={k} n={n} c={c}");
                }
            }
        }
    }

    #[test]
    fn var_bound_examples() {
        assert_eq!(var_bound(0.0, 100, 2.0), 0.0);
        assert!((var_bound(1.0 / 3.0, 1001, 1.5) - 0.004).abs() < 1e-15);
    }

    #[test]
    fn sandwich_ordering() {
        for k in [2usize, 5, 10, 30] {
            for n in [100u64, 10_000, 1_000_000] {
                let lo = lower_bound_thm1(k, n, 1.0);
                let hi = upper_bound_thm2(k, n);
                if lo > 0.0 && hi > 0.0 {
                    assert!(lo <= hi, "k={k} n={n}: {lo} > {hi}");
                }
            }
        }
    }

    #[test]
    fn n_star_matches_brute_force() {
        let got = n_star(2, 0.5).unwrap();
        let brute = (2u64..512).find(|&n| upper_bound_thm2(2, n) <= 0.5).unwrap();
        assert_eq!(got, brute);
    }

    #[test]
    fn n_star_monotone_in_epsilon_and_large_eps() {
        let mut prev = 0u64;
        for eps in [4.0, 2.0, 1.0, 0.5, 0.25, 0.1] {
            let n = n_star(8, eps).unwrap();
            assert!(n >= prev, "eps={eps}");
            prev = n;
        }
        for k in [4usize, 8, 16] {
            assert!(n_star(k, 4.0).unwrap() <= (k * k) as u64);
        }
    }

    #[test]
    fn n_star_ratio_to_k_squared_bounded() {
        let eps = 0.5;
        let mut ratios = vec![];
        for k in [8usize, 16, 32, 64] {
            let n = n_star(k, eps).unwrap();
            ratios.push(n as f64 / (k * k) as f64);
        }
        for r in &ratios {
            assert!(*r > 0.5 && *r < 200.0, "ratio {r} out of range");
        }
    }

    #[test]
    fn bound_params_validation() {
        assert!(BoundParams::new(2, 100, 1.0, 1.0, 1.0, 0.5).is_ok());
        assert!(BoundParams::new(1, 100, 1.0, 1.0, 1.0, 0.5).is_err());
        assert!(BoundParams::new(2, 1, 1.0, 1.0, 1.0, 0.5).is_err());
        assert!(BoundParams::new(2, 100, 0.0, 1.0, 1.0, 0.5).is_err());
        assert!(BoundParams::new(2, 100, 1.0, 1.0, 0.5, 0.5).is_err());
    }

    #[test]
    fn csv_row_shape() {
        let row = BoundsRow::compute(2, 100, 1.0, 1.0);
        assert_eq!(BoundsRow::csv_header().split(',').count(), 10);
        assert_eq!(row.to_csv_line().split(',').count(), 10);
    }
}

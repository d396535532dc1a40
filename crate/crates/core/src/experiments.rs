//! Seeded Monte Carlo studies: prior sampling, spectral concentration,
//! semicircle bulk, estimator variance, end-to-end redundancy and the
//! phase-transition sweep.
//!
//! Every experiment is a pure function of its parameters and a master seed.
//! Trials run in parallel but are keyed by index (per-trial seed =
//! mix(master_seed, index)) and merged in index order, so the emitted CSV is
//! byte-identical across runs and thread counts.

use crate::bounds;
use crate::codec::{self, Mode};
use crate::error::{Error, Result};
use crate::markov::{
    chain_from_graph, process_entropy, sample_path, theta_from_chain, uniform01, PathSample,
    StationaryDistribution, ThetaVector, TransitionMatrix, WeightedGraph,
};
use crate::matrix::Mat;
use crate::spectral;
use rand_chacha::ChaCha12Rng;
use rand_core::SeedableRng;
use rayon::prelude::*;
use serde_json::json;

/// SplitMix64-style mix of (master_seed, trial_index); statistically
/// independent streams for parallel trials, deterministic in both inputs.
pub fn trial_seed(master_seed: u64, index: u64) -> u64 {
    let mut z = master_seed
        .wrapping_add(index.wrapping_mul(0x9E3779B97F4A7C15))
        .wrapping_add(0x9E3779B97F4A7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
    z ^ (z >> 31)
}

/// Per-trial records plus aggregates for one experiment run. `to_csv`
/// serializes deterministically: a `#`-prefixed config echo (JSON), a header
/// row, one row per record, then `#`-prefixed aggregate lines.
#[derive(Debug, Clone)]
pub struct ExperimentResult {
    pub name: String,
    pub config: serde_json::Value,
    pub columns: Vec<String>,
    pub records: Vec<Vec<f64>>,
    pub aggregates: Vec<(String, f64)>,
    pub pass: bool,
}

fn fmt_cell(v: f64) -> String {
    if v.is_finite() && v == v.trunc() && v.abs() < 1e15 {
        format!("{}", v as i64)
    } else {
        format!("{v}")
    }
}

impl ExperimentResult {
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("# {} config={}\n", self.name, self.config));
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for rec in &self.records {
            let row: Vec<String> = rec.iter().map(|&v| fmt_cell(v)).collect();
            out.push_str(&row.join(","));
            out.push('\n');
        }
        for (name, value) in &self.aggregates {
            out.push_str(&format!("# {name}={}\n", fmt_cell(*value)));
        }
        out.push_str(&format!("# pass={}\n", self.pass));
        out
    }

    pub fn aggregate(&self, name: &str) -> Option<f64> {
        self.aggregates.iter().find(|(n, _)| n == name).map(|&(_, v)| v)
    }
}

fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

fn sample_variance(values: &[f64]) -> f64 {
    let m = mean(values);
    values.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / (values.len() as f64 - 1.0)
}

/// Draws one chain from the prior: edge weights w_ij = w_ji ~ Exp(1) i.i.d.
/// (inverse CDF, w = −ln u), zero diagonal, then the random walk on the
/// resulting weighted graph.
pub fn sample_prior(
    k: usize,
    seed: u64,
) -> Result<(TransitionMatrix, StationaryDistribution, ThetaVector, WeightedGraph)> {
    if k < 2 {
        return Err(Error::Invalid(format!("prior needs k >= 2, got {k}")));
    }
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut w = Mat::zeros(k);
    for i in 0..k {
        for j in i + 1..k {
            let weight = -uniform01(&mut rng).ln();
            w[(i, j)] = weight;
            w[(j, i)] = weight;
        }
    }
    let graph = WeightedGraph::new(w)?;
    let (kernel, pi) = chain_from_graph(&graph)?;
    let theta = theta_from_chain(&kernel, &pi)?;
    Ok((kernel, pi, theta, graph))
}

/// Per trial: sample a prior chain at size k and record
/// √k·max_{i≥2}|λ_i|, max_i|ρ_i/k−1|, Σ_i(ρ_i/k−1)² and λ₁.
/// Passes when the fraction of trials with √k·max|λ| ≤ 2+c reaches
/// `pass_fraction`.
pub fn spectrum_concentration(
    k: usize,
    trials: usize,
    c: f64,
    master_seed: u64,
    pass_fraction: f64,
) -> Result<ExperimentResult> {
    let records: Vec<Vec<f64>> = (0..trials as u64)
        .into_par_iter()
        .map(|t| -> Result<Vec<f64>> {
            let (kernel, pi, _, graph) = sample_prior(k, trial_seed(master_seed, t))?;
            let summary = spectral::eigen_reversible(&kernel, &pi)?;
            let sqrt_k = (k as f64).sqrt();
            let bulk_max = summary.eigenvalues[1..]
                .iter()
                .map(|l| l.abs())
                .fold(0.0, f64::max);
            let rho_devs: Vec<f64> =
                graph.rho().iter().map(|&r| r / k as f64 - 1.0).collect();
            Ok(vec![
                t as f64,
                sqrt_k * bulk_max,
                rho_devs.iter().map(|d| d.abs()).fold(0.0, f64::max),
                rho_devs.iter().map(|d| d * d).sum(),
                summary.eigenvalues[0],
            ])
        })
        .collect::<Result<_>>()?;

    let threshold = 2.0 + c;
    let scaled: Vec<f64> = records.iter().map(|r| r[1]).collect();
    let frac = scaled.iter().filter(|&&v| v <= threshold).count() as f64 / trials as f64;
    let lambda1_err = records
        .iter()
        .map(|r| (r[4] - 1.0).abs())
        .fold(0.0, f64::max);
    let pass = frac >= pass_fraction && lambda1_err <= 1e-9;
    Ok(ExperimentResult {
        name: "spectrum_concentration".into(),
        config: json!({"k": k, "trials": trials, "c": c, "master_seed": master_seed,
                        "pass_fraction": pass_fraction}),
        columns: ["trial", "sqrt_k_lambda_max", "rho_dev_max", "rho_dev_sq_sum", "lambda1"]
            .iter()
            .map(|s| s.to_string())
            .collect(),
        records,
        aggregates: vec![
            ("mean_sqrt_k_lambda_max".into(), mean(&scaled)),
            ("pass_fraction_observed".into(), frac),
            ("threshold".into(), threshold),
            ("max_lambda1_error".into(), lambda1_err),
        ],
        pass,
    })
}

/// CDF of the semicircle law on [−2, 2]:
/// F(x) = 1/2 + x√(4−x²)/(4π) + asin(x/2)/π.
pub fn semicircle_cdf(x: f64) -> f64 {
    if x <= -2.0 {
        0.0
    } else if x >= 2.0 {
        1.0
    } else {
        0.5 + x * (4.0 - x * x).sqrt() / (4.0 * std::f64::consts::PI)
            + (x / 2.0).asin() / std::f64::consts::PI
    }
}

/// Kolmogorov distance between the empirical CDF of `values` and `cdf`.
pub fn kolmogorov_distance(values: &mut [f64], cdf: impl Fn(f64) -> f64) -> f64 {
    values.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let m = values.len() as f64;
    let mut d = 0.0f64;
    for (i, &v) in values.iter().enumerate() {
        let f = cdf(v);
        d = d.max((f - i as f64 / m).abs());
        d = d.max((f - (i as f64 + 1.0) / m).abs());
    }
    d
}

/// Per trial: Kolmogorov distance between {√k·λ_i(K)}_{i≥2} and the
/// semicircle CDF. Passes when the mean distance is at most `threshold`.
pub fn esd_semicircle(
    k: usize,
    trials: usize,
    master_seed: u64,
    threshold: f64,
) -> Result<ExperimentResult> {
    let records: Vec<Vec<f64>> = (0..trials as u64)
        .into_par_iter()
        .map(|t| -> Result<Vec<f64>> {
            let (kernel, pi, _, _) = sample_prior(k, trial_seed(master_seed, t))?;
            let summary = spectral::eigen_reversible(&kernel, &pi)?;
            let mut scaled: Vec<f64> = summary.eigenvalues[1..]
                .iter()
                .map(|l| l * (k as f64).sqrt())
                .collect();
            Ok(vec![t as f64, kolmogorov_distance(&mut scaled, semicircle_cdf)])
        })
        .collect::<Result<_>>()?;
    let distances: Vec<f64> = records.iter().map(|r| r[1]).collect();
    let mean_d = mean(&distances);
    Ok(ExperimentResult {
        name: "esd_semicircle".into(),
        config: json!({"k": k, "trials": trials, "master_seed": master_seed,
                        "threshold": threshold}),
        columns: ["trial", "kolmogorov_distance"].iter().map(|s| s.to_string()).collect(),
        records,
        aggregates: vec![("mean_distance".into(), mean_d), ("threshold".into(), threshold)],
        pass: mean_d <= threshold,
    })
}

/// Lower quantile of the chi-square distribution (Wilson–Hilferty
/// approximation); `z` is the standard-normal quantile of the same level.
fn chi_square_quantile(df: f64, z: f64) -> f64 {
    let a = 2.0 / (9.0 * df);
    df * (1.0 - a + z * a.sqrt()).powi(3)
}

/// Fixes one prior chain, estimates θ̂_{1,2} = (N(1,2)+N(2,1))/(n−1) over
/// `trials` stationary paths and compares the Monte Carlo variance against
/// 8θτ_rel/(n−1) with a one-sided upper confidence bound at `confidence`.
pub fn variance_experiment(
    k: usize,
    n: usize,
    trials: usize,
    master_seed: u64,
    confidence: f64,
) -> Result<ExperimentResult> {
    if trials < 2 {
        return Err(Error::Invalid("variance experiment needs trials >= 2".into()));
    }
    let (kernel, pi, theta, _) = sample_prior(k, trial_seed(master_seed, u64::MAX))?;
    let theta_true = theta.as_slice()[ThetaVector::pair_index(k, 0, 1)];
    let tau_rel = spectral::eigen_reversible(&kernel, &pi)?.tau_rel;

    let records: Vec<Vec<f64>> = (0..trials as u64)
        .into_par_iter()
        .map(|t| -> Result<Vec<f64>> {
            let path = sample_path(&kernel, &pi, n, trial_seed(master_seed, t))?;
            let counts = codec::count_transitions(&path.x, k)?;
            let est = (counts.get(0, 1) + counts.get(1, 0)) as f64 / (n as f64 - 1.0);
            Ok(vec![t as f64, est])
        })
        .collect::<Result<_>>()?;

    let estimates: Vec<f64> = records.iter().map(|r| r[1]).collect();
    let var = sample_variance(&estimates);
    let bound = bounds::var_bound(theta_true, n as u64, tau_rel);
    // one-sided UCB: (m-1)s² / chi²_{1-confidence}(m-1)
    let z = -statistical_z(confidence);
    let df = trials as f64 - 1.0;
    let var_ucb = df * var / chi_square_quantile(df, z);
    let se = (var / trials as f64).sqrt();
    let mean_est = mean(&estimates);
    let pass = !bound.is_finite() || var_ucb <= bound;
    Ok(ExperimentResult {
        name: "variance".into(),
        config: json!({"k": k, "n": n, "trials": trials, "master_seed": master_seed,
                        "confidence": confidence}),
        columns: ["trial", "theta_hat"].iter().map(|s| s.to_string()).collect(),
        records,
        aggregates: vec![
            ("theta_true".into(), theta_true),
            ("tau_rel".into(), tau_rel),
            ("mean_theta_hat".into(), mean_est),
            ("se_theta_hat".into(), se),
            ("variance".into(), var),
            ("variance_ucb".into(), var_ucb),
            ("bound".into(), bound),
        ],
        pass,
    })
}

/// Standard-normal quantile for the usual one-sided confidence levels.
fn statistical_z(confidence: f64) -> f64 {
    // Acklam-style rational approximation of the probit function.
    let p = 1.0 - confidence;
    debug_assert!(p > 0.0 && p < 1.0);
    // coefficients for the central region are unnecessary: confidence
    // levels of interest (0.9..0.999) all fall in the lower tail of p
    let q = (-2.0 * p.ln()).sqrt();
    q - (2.515517 + 0.802853 * q + 0.010328 * q * q)
        / (1.0 + 1.432788 * q + 0.189269 * q * q + 0.001308 * q * q * q)
}

/// Per trial: fresh prior chain, stationary path, exact-mode compression;
/// records (L − H_θ(Xⁿ))/n in bits/symbol. Passes when the mean redundancy
/// is at most upper_bound_thm2(k, n) plus three standard errors.
pub fn redundancy_experiment(
    k: usize,
    n: usize,
    trials: usize,
    master_seed: u64,
    mode: Mode,
) -> Result<ExperimentResult> {
    if trials < 2 {
        return Err(Error::Invalid("redundancy experiment needs trials >= 2".into()));
    }
    let records: Vec<Vec<f64>> = (0..trials as u64)
        .into_par_iter()
        .map(|t| -> Result<Vec<f64>> {
            let (kernel, pi, _, _) = sample_prior(k, trial_seed(master_seed, 2 * t))?;
            let path = sample_path(&kernel, &pi, n, trial_seed(master_seed, 2 * t + 1))?;
            let (_, report) = codec::compress(&path.x, k, mode)?;
            let entropy = process_entropy(&kernel, &pi, n)?;
            let redundancy = (report.l_total as f64 - entropy) / n as f64;
            Ok(vec![
                t as f64,
                report.l_total as f64,
                (report.l_param + report.l_seq) as f64,
                entropy,
                redundancy,
            ])
        })
        .collect::<Result<_>>()?;

    let redundancies: Vec<f64> = records.iter().map(|r| r[4]).collect();
    let mean_r = mean(&redundancies);
    let se = (sample_variance(&redundancies) / trials as f64).sqrt();
    let bound = bounds::upper_bound_thm2(k, n as u64);
    Ok(ExperimentResult {
        name: "redundancy".into(),
        config: json!({"k": k, "n": n, "trials": trials, "master_seed": master_seed,
                        "mode": mode.to_string()}),
        columns: ["trial", "l_total", "l_hat", "process_entropy", "redundancy"]
            .iter()
            .map(|s| s.to_string())
            .collect(),
        records,
        aggregates: vec![
            ("mean_redundancy".into(), mean_r),
            ("se_redundancy".into(), se),
            ("thm2_upper".into(), bound),
        ],
        pass: mean_r <= bound + 3.0 * se,
    })
}

/// Sentinel emitted when the lower bound never reaches epsilon.
pub const CROSSING_SENTINEL: f64 = -1.0;

/// Smallest n at which the clamped lower bound reaches epsilon,
/// or the sentinel: the bound's maximum over n is of order 1/τ⁰_rel and for
/// many (k, ε) no crossing exists.
pub fn thm1_crossing(k: usize, epsilon: f64, c: f64) -> f64 {
    let ok = |n: u64| bounds::lower_bound_thm1_clamped(k, n, c) >= epsilon;
    let mut hi = 4u64;
    let mut prev = 2u64;
    while hi <= 1 << 40 {
        if ok(hi) {
            // rising edge is in (prev, hi]; the formula is unimodal in n
            let (mut lo, mut hi) = (prev, hi);
            while hi - lo > 1 {
                let mid = lo + (hi - lo) / 2;
                if ok(mid) {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            return hi as f64;
        }
        prev = hi;
        hi *= 2;
    }
    CROSSING_SENTINEL
}

/// Per k: n* (upper-bound proxy), the lower-bound crossing point (or sentinel)
/// and optionally the measured mean redundancy at n = n*. The aggregate
/// `fitted_slope` is the least-squares slope of log n* against log k; the
/// run passes when it lies in [slope_lo, slope_hi].
pub fn phase_transition_sweep(
    k_list: &[usize],
    epsilon: f64,
    c: f64,
    master_seed: u64,
    redundancy_trials: usize,
    slope_lo: f64,
    slope_hi: f64,
) -> Result<ExperimentResult> {
    if k_list.is_empty() {
        return Err(Error::Invalid("k_list must be nonempty".into()));
    }
    let mut records = Vec::with_capacity(k_list.len());
    for (i, &k) in k_list.iter().enumerate() {
        let n_star = bounds::n_star(k, epsilon)?;
        let crossing = thm1_crossing(k, epsilon, c);
        let measured = if redundancy_trials > 0 {
            let r = redundancy_experiment(
                k,
                n_star as usize,
                redundancy_trials,
                trial_seed(master_seed, i as u64),
                Mode::Exact,
            )?;
            r.aggregate("mean_redundancy").unwrap()
        } else {
            f64::NAN
        };
        records.push(vec![k as f64, n_star as f64, crossing, measured]);
    }
    let slope = if k_list.len() >= 2 {
        let xs: Vec<f64> = records.iter().map(|r| r[0].ln()).collect();
        let ys: Vec<f64> = records.iter().map(|r| r[1].ln()).collect();
        let mx = mean(&xs);
        let my = mean(&ys);
        let num: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
        let den: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
        num / den
    } else {
        f64::NAN
    };
    let pass = !slope.is_nan() && slope >= slope_lo && slope <= slope_hi;
    Ok(ExperimentResult {
        name: "phase_transition".into(),
        config: json!({"k_list": k_list, "epsilon": epsilon, "c": c,
                        "master_seed": master_seed,
                        "redundancy_trials": redundancy_trials,
                        "slope_lo": slope_lo, "slope_hi": slope_hi}),
        columns: ["k", "n_star", "thm1_crossing", "measured_redundancy"]
            .iter()
            .map(|s| s.to_string())
            .collect(),
        records,
        aggregates: vec![("fitted_slope".into(), slope)],
        pass,
    })
}

/// CDF of Beta(1, b): F(x) = 1 − (1−x)^b on [0, 1].
pub fn beta_1_b_cdf(b: f64, x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else if x >= 1.0 {
        1.0
    } else {
        1.0 - (1.0 - x).powf(b)
    }
}

/// Asymptotic Kolmogorov–Smirnov critical value sqrt(ln(2/alpha)/2)/sqrt(m).
pub fn ks_critical_value(alpha: f64, m: usize) -> f64 {
    ((2.0 / alpha).ln() / 2.0).sqrt() / (m as f64).sqrt()
}

/// Samples `trials` chains from the prior and KS-tests the marginal
/// θ_{1,2} against its exact law Beta(1, d−1) with d = k(k−1)/2 (the θ
/// vector is uniform on the d-simplex). Passes when the KS statistic is
/// below the asymptotic critical value at level `alpha`.
pub fn prior_uniformity(
    k: usize,
    trials: usize,
    master_seed: u64,
    alpha: f64,
) -> Result<ExperimentResult> {
    let d = k * (k - 1) / 2;
    if d < 2 {
        return Err(Error::Invalid("prior uniformity needs k >= 3 (d >= 2)".into()));
    }
    let records: Vec<Vec<f64>> = (0..trials as u64)
        .into_par_iter()
        .map(|t| -> Result<Vec<f64>> {
            let (_, _, theta, _) = sample_prior(k, trial_seed(master_seed, t))?;
            Ok(vec![t as f64, theta.as_slice()[ThetaVector::pair_index(k, 0, 1)]])
        })
        .collect::<Result<_>>()?;
    let mut samples: Vec<f64> = records.iter().map(|r| r[1]).collect();
    let b = (d - 1) as f64;
    let ks = kolmogorov_distance(&mut samples, |x| beta_1_b_cdf(b, x));
    let crit = ks_critical_value(alpha, trials);
    Ok(ExperimentResult {
        name: "prior_uniformity".into(),
        config: json!({"k": k, "trials": trials, "master_seed": master_seed, "alpha": alpha}),
        columns: ["trial", "theta_12"].iter().map(|s| s.to_string()).collect(),
        records,
        aggregates: vec![("ks_statistic".into(), ks), ("critical_value".into(), crit)],
        pass: ks < crit,
    })
}

/// Verifies the tuple-chain identities on `trials` prior chains: the swap
/// identity, the lifted-eigenvector correspondence and the gap inequality
/// γ_ps(tuple) ≥ γ*(base)/2, all within `tol`.
pub fn tuple_lemmas_experiment(
    k: usize,
    trials: usize,
    master_seed: u64,
    tol: f64,
) -> Result<ExperimentResult> {
    let records: Vec<Vec<f64>> = (0..trials as u64)
        .into_par_iter()
        .map(|t| -> Result<Vec<f64>> {
            let (kernel, pi, _, _) = sample_prior(k, trial_seed(master_seed, t))?;
            let report = spectral::verify_tuple_identities(&kernel, &pi, 3, tol)?;
            Ok(vec![
                t as f64,
                report.swap_identity_residual,
                report.lifted_eigenvector_residual,
                report.gamma_ps_tuple,
                report.gamma_star_base,
                report.pass as u8 as f64,
            ])
        })
        .collect::<Result<_>>()?;
    let max_swap = records.iter().map(|r| r[1]).fold(0.0, f64::max);
    let max_lift = records.iter().map(|r| r[2]).fold(0.0, f64::max);
    let pass = records.iter().all(|r| r[5] == 1.0);
    Ok(ExperimentResult {
        name: "tuple_lemmas".into(),
        config: json!({"k": k, "trials": trials, "master_seed": master_seed, "tol": tol}),
        columns: [
            "trial",
            "swap_identity_residual",
            "lifted_eigenvector_residual",
            "gamma_ps_tuple",
            "gamma_star_base",
            "pass",
        ]
        .iter()
        .map(|s| s.to_string())
        .collect(),
        records,
        aggregates: vec![
            ("max_swap_residual".into(), max_swap),
            ("max_lifted_residual".into(), max_lift),
        ],
        pass,
    })
}

/// Convenience wrapper shared by tests: a stationary path from a fresh prior
/// chain.
pub fn prior_path(k: usize, n: usize, seed: u64) -> Result<PathSample> {
    let (kernel, pi, _, _) = sample_prior(k, seed)?;
    sample_path(&kernel, &pi, n, trial_seed(seed, 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::markov::detailed_balance_residual;

    #[test]
    fn prior_is_reversible_with_zero_diagonal() {
        let (kernel, pi, theta, _) = sample_prior(5, 7).unwrap();
        for i in 0..5 {
            assert_eq!(kernel.get(i, i), 0.0);
        }
        assert!(detailed_balance_residual(&kernel, &pi) < 1e-12);
        let sum: f64 = theta.as_slice().iter().sum();
        assert!((sum - 1.0).abs() < 1e-12);
        assert!(theta.as_slice().iter().all(|&t| t > 0.0));
    }

    #[test]
    fn prior_deterministic_in_seed() {
        let (a, _, _, _) = sample_prior(4, 99).unwrap();
        let (b, _, _, _) = sample_prior(4, 99).unwrap();
        let (c, _, _, _) = sample_prior(4, 100).unwrap();
        assert_eq!(a.mat(), b.mat());
        assert!(a.mat().max_abs_diff(c.mat()) > 0.0);
    }

    #[test]
    fn trial_seed_mixing() {
        assert_ne!(trial_seed(1, 0), trial_seed(1, 1));
        assert_ne!(trial_seed(1, 0), trial_seed(2, 0));
        assert_eq!(trial_seed(42, 7), trial_seed(42, 7));
    }

    #[test]
    fn semicircle_cdf_values() {
        assert_eq!(semicircle_cdf(-3.0), 0.0);
        assert_eq!(semicircle_cdf(3.0), 1.0);
        assert!((semicircle_cdf(0.0) - 0.5).abs() < 1e-15);
        // symmetry F(x) + F(-x) = 1
        for x in [-1.7, -0.4, 0.9] {
            assert!((semicircle_cdf(x) + semicircle_cdf(-x) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn kolmogorov_of_exact_sample_is_small() {
        // quantiles of the distribution itself have distance <= 1/m
        let m = 1000;
        let mut vals: Vec<f64> = (0..m)
            .map(|i| {
                let target = (i as f64 + 0.5) / m as f64;
                // invert the semicircle CDF by bisection
                let (mut lo, mut hi) = (-2.0, 2.0);
                for _ in 0..60 {
                    let mid = (lo + hi) / 2.0;
                    if semicircle_cdf(mid) < target {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                (lo + hi) / 2.0
            })
            .collect();
        assert!(kolmogorov_distance(&mut vals, semicircle_cdf) <= 1.0 / m as f64 + 1e-9);
    }

    #[test]
    fn spectrum_concentration_small() {
        let r = spectrum_concentration(60, 4, 1.0, 3, 0.75).unwrap();
        assert_eq!(r.records.len(), 4);
        assert!(r.aggregate("max_lambda1_error").unwrap() <= 1e-9);
    }

    #[test]
    fn variance_experiment_iid_like() {
        // k=8 prior chains mix fast; bound has an 8x slack factor
        let r = variance_experiment(8, 512, 200, 11, 0.99).unwrap();
        assert!(r.pass, "{:?}", r.aggregates);
        let mean_est = r.aggregate("mean_theta_hat").unwrap();
        let theta = r.aggregate("theta_true").unwrap();
        let se = r.aggregate("se_theta_hat").unwrap();
        assert!((mean_est - theta).abs() <= 4.0 * se, "biased: {mean_est} vs {theta}");
    }

    #[test]
    fn redundancy_seed_prefix_stability() {
        let a = redundancy_experiment(4, 100, 1, 5, Mode::Exact).err();
        assert!(a.is_some()); // trials >= 2 enforced
        let r1 = redundancy_experiment(4, 100, 2, 5, Mode::Exact).unwrap();
        let r2 = redundancy_experiment(4, 100, 20, 5, Mode::Exact).unwrap();
        assert_eq!(r1.records[0], r2.records[0]);
        assert_eq!(r1.records[1], r2.records[1]);
    }

    #[test]
    fn phase_transition_shape() {
        let r = phase_transition_sweep(&[8, 16], 4.0, 1.0, 1, 0, 0.0, 3.0).unwrap();
        assert_eq!(r.records.len(), 2);
        // epsilon = 4 is met at tiny n for all k
        assert!(r.records.iter().all(|rec| rec[1] <= (rec[0] * rec[0]) as f64));
    }

    #[test]
    fn csv_is_deterministic() {
        let a = esd_semicircle(30, 2, 9, 0.5).unwrap().to_csv();
        let b = esd_semicircle(30, 2, 9, 0.5).unwrap().to_csv();
        assert_eq!(a, b);
        assert!(a.starts_with("# esd_semicircle config={"));
        assert_eq!(a.lines().nth(1).unwrap(), "trial,kolmogorov_distance");
    }

    #[test]
    fn aggregates_recomputable_from_records() {
        let r = esd_semicircle(30, 3, 9, 0.5).unwrap();
        let dists: Vec<f64> = r.records.iter().map(|rec| rec[1]).collect();
        assert_eq!(r.aggregate("mean_distance").unwrap(), mean(&dists));
    }

    #[test]
    fn prior_uniformity_small_run() {
        let r = prior_uniformity(4, 500, 21, 0.01).unwrap();
        assert!(r.pass, "KS {} >= crit {}", r.aggregate("ks_statistic").unwrap(),
            r.aggregate("critical_value").unwrap());
    }

    #[test]
    fn beta_cdf_and_ks_critical() {
        assert!((beta_1_b_cdf(5.0, 0.5) - (1.0 - 0.5f64.powi(5))).abs() < 1e-15);
        // the classical 1% asymptotic constant is 1.6276
        assert!((ks_critical_value(0.01, 1) - 1.6276).abs() < 1e-3);
    }

    #[test]
    fn tuple_lemmas_on_prior_chains() {
        let r = tuple_lemmas_experiment(4, 5, 13, 1e-9).unwrap();
        assert!(r.pass, "{:?}", r.records);
        assert!(r.aggregate("max_swap_residual").unwrap() <= 1e-9);
    }

    #[test]
    fn normal_quantile_sanity() {
        assert!((statistical_z(0.99) - 2.326).abs() < 0.01);
        assert!((statistical_z(0.95) - 1.645).abs() < 0.01);
    }
}

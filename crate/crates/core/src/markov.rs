//! Finite-state Markov chains: transition kernels, the weighted-graph and
//! theta parametrizations of reversible chains, stationary solves, path
//! sampling and exact process entropy.
//!
//! State labels are 1-based in all I/O (`PathSample` symbols live in
//! `{1, ..., k}`); internal indexing is 0-based.

use crate::error::{Error, Result};
use crate::matrix::{self, Mat};
use rand_chacha::ChaCha12Rng;
use rand_core::{RngCore, SeedableRng};

pub const ROW_SUM_TOL: f64 = 1e-12;
pub const STATIONARY_TOL: f64 = 1e-10;
pub const DETAILED_BALANCE_TOL: f64 = 1e-10;
/// Singular values of K - I below this count toward the null space when
/// deciding whether the stationary vector is unique.
pub const NULL_SPACE_TOL: f64 = 1e-9;

/// Row-stochastic transition kernel K over k states.
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionMatrix {
    mat: Mat,
}

impl TransitionMatrix {
    pub fn new(mat: Mat) -> Result<Self> {
        let k = mat.n();
        if k < 2 {
            return Err(Error::Invalid(format!("state count {k} < 2")));
        }
        for i in 0..k {
            let mut sum = 0.0;
            for j in 0..k {
                let v = mat[(i, j)];
                if !(-ROW_SUM_TOL..=1.0 + ROW_SUM_TOL).contains(&v) {
                    return Err(Error::Invalid(format!("K[{i}][{j}] = {v} outside [0,1]")));
                }
                sum += v;
            }
            if (sum - 1.0).abs() > ROW_SUM_TOL * k as f64 {
                return Err(Error::Invalid(format!("row {i} sums to {sum}")));
            }
        }
        Ok(TransitionMatrix { mat })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        Self::new(Mat::from_rows(rows))
    }

    pub fn k(&self) -> usize {
        self.mat.n()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.mat[(i, j)]
    }

    pub fn mat(&self) -> &Mat {
        &self.mat
    }
}

/// Probability vector pi with pi K = pi.
#[derive(Debug, Clone, PartialEq)]
pub struct StationaryDistribution {
    pi: Vec<f64>,
}

impl StationaryDistribution {
    pub fn new(pi: Vec<f64>) -> Result<Self> {
        if pi.iter().any(|&p| p < -ROW_SUM_TOL) {
            return Err(Error::Invalid("negative stationary mass".into()));
        }
        let sum: f64 = pi.iter().sum();
        if (sum - 1.0).abs() > ROW_SUM_TOL * pi.len().max(1) as f64 {
            return Err(Error::Invalid(format!("stationary vector sums to {sum}")));
        }
        Ok(StationaryDistribution { pi })
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.pi
    }

    pub fn get(&self, i: usize) -> f64 {
        self.pi[i]
    }

    pub fn len(&self) -> usize {
        self.pi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pi.is_empty()
    }

    /// Max-norm residual of pi K - pi.
    pub fn residual(&self, kernel: &TransitionMatrix) -> f64 {
        let k = kernel.k();
        (0..k)
            .map(|j| {
                let s: f64 = (0..k).map(|i| self.pi[i] * kernel.get(i, j)).sum();
                (s - self.pi[j]).abs()
            })
            .fold(0.0, f64::max)
    }
}

/// Symmetric nonnegative edge weights of an undirected graph, with row sums.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedGraph {
    w: Mat,
    rho: Vec<f64>,
    rho_total: f64,
}

impl WeightedGraph {
    pub fn new(w: Mat) -> Result<Self> {
        let k = w.n();
        if k < 2 {
            return Err(Error::Invalid(format!("vertex count {k} < 2")));
        }
        for i in 0..k {
            for j in 0..k {
                if w[(i, j)] < 0.0 {
                    return Err(Error::Invalid(format!("w[{i}][{j}] = {} < 0", w[(i, j)])));
                }
                if w[(i, j)] != w[(j, i)] {
                    return Err(Error::Invalid(format!("w[{i}][{j}] != w[{j}][{i}]")));
                }
            }
        }
        let rho: Vec<f64> = (0..k).map(|i| w.row(i).iter().sum()).collect();
        let rho_total = rho.iter().sum();
        Ok(WeightedGraph { w, rho, rho_total })
    }

    pub fn k(&self) -> usize {
        self.w.n()
    }

    pub fn weight(&self, i: usize, j: usize) -> f64 {
        self.w[(i, j)]
    }

    pub fn mat(&self) -> &Mat {
        &self.w
    }

    pub fn rho(&self) -> &[f64] {
        &self.rho
    }

    pub fn rho_total(&self) -> f64 {
        self.rho_total
    }
}

/// The d = k(k-1)/2 simplex parametrization of a zero-diagonal reversible
/// chain; entry order is (1,2), (1,3), ..., (1,k), (2,3), ..., (k-1,k).
#[derive(Debug, Clone, PartialEq)]
pub struct ThetaVector {
    k: usize,
    theta: Vec<f64>,
}

impl ThetaVector {
    pub fn new(k: usize, theta: Vec<f64>) -> Result<Self> {
        let d = k * (k - 1) / 2;
        if theta.len() != d {
            return Err(Error::Invalid(format!("theta length {} != {d}", theta.len())));
        }
        if theta.iter().any(|&t| t < -ROW_SUM_TOL) {
            return Err(Error::Invalid("negative theta entry".into()));
        }
        let sum: f64 = theta.iter().sum();
        if (sum - 1.0).abs() > ROW_SUM_TOL * d.max(1) as f64 {
            return Err(Error::Invalid(format!("theta sums to {sum}")));
        }
        Ok(ThetaVector { k, theta })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn dim(&self) -> usize {
        self.theta.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.theta
    }

    /// Flat index of the unordered pair {i,j}, 0-based, i != j.
    pub fn pair_index(k: usize, i: usize, j: usize) -> usize {
        let (a, b) = if i < j { (i, j) } else { (j, i) };
        a * k - a * (a + 1) / 2 + (b - a - 1)
    }

    /// Symmetrized accessor: theta of the pair {i,j}, zero on the diagonal.
    pub fn theta_tilde(&self, i: usize, j: usize) -> f64 {
        if i == j {
            0.0
        } else {
            self.theta[Self::pair_index(self.k, i, j)]
        }
    }
}

/// A sampled trajectory, symbols 1-based.
#[derive(Debug, Clone, PartialEq)]
pub struct PathSample {
    pub x: Vec<u32>,
    pub seed: u64,
}

impl PathSample {
    pub fn new(x: Vec<u32>, seed: u64) -> Result<Self> {
        if x.is_empty() {
            return Err(Error::Invalid("path length must be >= 1".into()));
        }
        Ok(PathSample { x, seed })
    }

    pub fn n(&self) -> usize {
        self.x.len()
    }
}

fn check_stationary_pair(kernel: &TransitionMatrix, pi: &StationaryDistribution) -> Result<()> {
    if pi.len() != kernel.k() {
        return Err(Error::Invalid("pi length does not match k".into()));
    }
    let res = pi.residual(kernel);
    if res > STATIONARY_TOL {
        return Err(Error::Invalid(format!("pi is not stationary for K (residual {res:.3e})")));
    }
    Ok(())
}

/// Max detailed-balance residual |pi_i K_ij - pi_j K_ji|.
pub fn detailed_balance_residual(kernel: &TransitionMatrix, pi: &StationaryDistribution) -> f64 {
    let k = kernel.k();
    let mut worst = 0.0f64;
    for i in 0..k {
        for j in i + 1..k {
            worst = worst.max((pi.get(i) * kernel.get(i, j) - pi.get(j) * kernel.get(j, i)).abs());
        }
    }
    worst
}

/// Dimension of the eigenvalue-1 eigenspace of K, i.e. the number of
/// recurrent classes, counted through singular values of K - I.
fn unit_eigenspace_dim(kernel: &TransitionMatrix) -> usize {
    let k = kernel.k();
    let mut a = kernel.mat().clone();
    for i in 0..k {
        a[(i, i)] -= 1.0;
    }
    // eigenvalues of (K-I)^T (K-I) are squared singular values of K - I
    let b = a.transpose().matmul(&a);
    let eig = crate::spectral::jacobi::sym_eigen(&b, false);
    let thresh = (NULL_SPACE_TOL * NULL_SPACE_TOL).max(1e-14 * b.frobenius());
    eig.values.iter().filter(|&&v| v < thresh).count()
}

/// Solves pi K = pi for the unique stationary distribution.
///
/// Direct linear solve of (K^T - I) pi = 0 with a normalization row, with a
/// power-iteration fallback when the solve is ill conditioned.
pub fn stationary(kernel: &TransitionMatrix) -> Result<StationaryDistribution> {
    let k = kernel.k();
    let null_dim = unit_eigenspace_dim(kernel);
    if null_dim != 1 {
        return Err(Error::Irreducibility(format!("eigenvalue-1 multiplicity is {null_dim}")));
    }

    // (K^T - I) with the last row replaced by the normalization sum(pi) = 1
    let mut a = kernel.mat().transpose();
    for i in 0..k {
        a[(i, i)] -= 1.0;
    }
    for j in 0..k {
        a[(k - 1, j)] = 1.0;
    }
    let mut b = vec![0.0; k];
    b[k - 1] = 1.0;

    if let Some(mut pi) = matrix::solve(&a, &b, 1e-12) {
        for p in pi.iter_mut() {
            if *p < 0.0 && *p > -1e-12 {
                *p = 0.0;
            }
        }
        let sum: f64 = pi.iter().sum();
        for p in pi.iter_mut() {
            *p /= sum;
        }
        if let Ok(dist) = StationaryDistribution::new(pi) {
            if dist.residual(kernel) <= STATIONARY_TOL {
                return Ok(dist);
            }
        }
    }

    // fallback: power iteration on the left
    let mut pi = vec![1.0 / k as f64; k];
    for _ in 0..100_000 {
        let next: Vec<f64> = (0..k)
            .map(|j| (0..k).map(|i| pi[i] * kernel.get(i, j)).sum())
            .collect();
        let sum: f64 = next.iter().sum();
        let next: Vec<f64> = next.iter().map(|v| v / sum).collect();
        let delta = next
            .iter()
            .zip(&pi)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        pi = next;
        if delta < 1e-12 {
            let dist = StationaryDistribution::new(pi)?;
            check_stationary_pair(kernel, &dist)?;
            return Ok(dist);
        }
    }
    Err(Error::NonConvergence("stationary power iteration".into()))
}

/// Random walk on a weighted undirected graph: K_ij = w_ij / rho_i,
/// pi_i = rho_i / rho.
pub fn chain_from_graph(graph: &WeightedGraph) -> Result<(TransitionMatrix, StationaryDistribution)> {
    let k = graph.k();
    for (i, &r) in graph.rho().iter().enumerate() {
        if r <= 0.0 {
            return Err(Error::IsolatedVertex(i + 1));
        }
    }
    let mut kmat = Mat::zeros(k);
    for i in 0..k {
        for j in 0..k {
            kmat[(i, j)] = graph.weight(i, j) / graph.rho()[i];
        }
    }
    let pi: Vec<f64> = graph.rho().iter().map(|r| r / graph.rho_total()).collect();
    Ok((TransitionMatrix::new(kmat)?, StationaryDistribution::new(pi)?))
}

/// Inverse of [`chain_from_graph`] up to global weight scale: w_ij = pi_i K_ij.
pub fn graph_from_chain(
    kernel: &TransitionMatrix,
    pi: &StationaryDistribution,
) -> Result<WeightedGraph> {
    check_stationary_pair(kernel, pi)?;
    let k = kernel.k();
    for i in 0..k {
        for j in 0..k {
            let lhs = pi.get(i) * kernel.get(i, j);
            let rhs = pi.get(j) * kernel.get(j, i);
            if (lhs - rhs).abs() > DETAILED_BALANCE_TOL * (1.0 + lhs.abs() + rhs.abs()) {
                return Err(Error::NotReversible { i: i + 1, j: j + 1, lhs, rhs });
            }
        }
    }
    let mut w = Mat::zeros(k);
    for i in 0..k {
        for j in 0..k {
            // symmetrize so the graph invariant w_ij == w_ji holds exactly
            let v = 0.5 * (pi.get(i) * kernel.get(i, j) + pi.get(j) * kernel.get(j, i));
            w[(i, j)] = v;
        }
    }
    WeightedGraph::new(w)
}

/// Theta parametrization of a zero-diagonal reversible chain:
/// theta_{i,j} = 2 pi_i K_ij for i < j.
pub fn theta_from_chain(
    kernel: &TransitionMatrix,
    pi: &StationaryDistribution,
) -> Result<ThetaVector> {
    check_stationary_pair(kernel, pi)?;
    let k = kernel.k();
    for i in 0..k {
        let d = kernel.get(i, i);
        if d.abs() > 1e-12 {
            return Err(Error::DiagonalNotZero(i + 1, d));
        }
    }
    for i in 0..k {
        for j in i + 1..k {
            let lhs = pi.get(i) * kernel.get(i, j);
            let rhs = pi.get(j) * kernel.get(j, i);
            if (lhs - rhs).abs() > DETAILED_BALANCE_TOL * (1.0 + lhs.abs() + rhs.abs()) {
                return Err(Error::NotReversible { i: i + 1, j: j + 1, lhs, rhs });
            }
        }
    }
    let mut theta = vec![0.0; k * (k - 1) / 2];
    for i in 0..k {
        for j in i + 1..k {
            // symmetrized estimate keeps the simplex sum exact
            theta[ThetaVector::pair_index(k, i, j)] =
                pi.get(i) * kernel.get(i, j) + pi.get(j) * kernel.get(j, i);
        }
    }
    let sum: f64 = theta.iter().sum();
    for t in theta.iter_mut() {
        *t /= sum;
    }
    ThetaVector::new(k, theta)
}

/// Chain recovery from theta: K_ij = theta~_{i,j} / sum_j' theta~_{i,j'},
/// pi_i = (row sum)/2.
pub fn chain_from_theta(theta: &ThetaVector) -> Result<(TransitionMatrix, StationaryDistribution)> {
    let k = theta.k();
    let mut kmat = Mat::zeros(k);
    let mut pi = vec![0.0; k];
    for i in 0..k {
        let row_sum: f64 = (0..k).map(|j| theta.theta_tilde(i, j)).sum();
        if row_sum <= 0.0 {
            return Err(Error::ZeroRow(i + 1));
        }
        for j in 0..k {
            kmat[(i, j)] = theta.theta_tilde(i, j) / row_sum;
        }
        pi[i] = row_sum / 2.0;
    }
    let total: f64 = pi.iter().sum();
    for p in pi.iter_mut() {
        *p /= total;
    }
    Ok((TransitionMatrix::new(kmat)?, StationaryDistribution::new(pi)?))
}

fn sample_cdf(cdf: &[f64], u: f64) -> usize {
    match cdf.binary_search_by(|v| v.partial_cmp(&u).unwrap()) {
        Ok(idx) | Err(idx) => idx.min(cdf.len() - 1),
    }
}

pub(crate) fn uniform01(rng: &mut ChaCha12Rng) -> f64 {
    // 53-bit mantissa, strictly inside (0, 1) after the +0.5 offset
    ((rng.next_u64() >> 11) as f64 + 0.5) / (1u64 << 53) as f64
}

/// Stationary simulation of X_1 -> ... -> X_n; X_1 ~ pi, deterministic in the seed.
pub fn sample_path(
    kernel: &TransitionMatrix,
    pi: &StationaryDistribution,
    n: usize,
    seed: u64,
) -> Result<PathSample> {
    if n == 0 {
        return Err(Error::Invalid("path length must be >= 1".into()));
    }
    check_stationary_pair(kernel, pi)?;
    let k = kernel.k();
    let mut rng = ChaCha12Rng::seed_from_u64(seed);

    let cdf = |weights: &mut dyn Iterator<Item = f64>| -> Vec<f64> {
        let mut acc = 0.0;
        weights
            .map(|w| {
                acc += w;
                acc
            })
            .collect()
    };
    let pi_cdf = cdf(&mut pi.as_slice().iter().copied());
    let row_cdfs: Vec<Vec<f64>> = (0..k)
        .map(|i| cdf(&mut (0..k).map(|j| kernel.get(i, j))))
        .collect();

    let mut x = Vec::with_capacity(n);
    let mut state = sample_cdf(&pi_cdf, uniform01(&mut rng) * pi_cdf[k - 1]);
    x.push(state as u32 + 1);
    for _ in 1..n {
        let row = &row_cdfs[state];
        state = sample_cdf(row, uniform01(&mut rng) * row[k - 1]);
        x.push(state as u32 + 1);
    }
    PathSample::new(x, seed)
}

fn xlog2_inv(p: f64) -> f64 {
    // p * log2(1/p) with the 0 log(1/0) = 0 convention
    if p <= 0.0 {
        0.0
    } else {
        -p * p.log2()
    }
}

/// Shannon entropy of a probability vector, bits.
pub fn entropy_bits(p: &[f64]) -> f64 {
    p.iter().map(|&v| xlog2_inv(v)).sum()
}

/// Exact entropy of a stationary chain observed for n steps:
/// H(pi) + (n-1) H(X_2 | X_1), in bits.
pub fn process_entropy(
    kernel: &TransitionMatrix,
    pi: &StationaryDistribution,
    n: usize,
) -> Result<f64> {
    if n == 0 {
        return Err(Error::Invalid("n must be >= 1".into()));
    }
    check_stationary_pair(kernel, pi)?;
    let k = kernel.k();
    let h_pi = entropy_bits(pi.as_slice());
    let h_cond: f64 = (0..k)
        .map(|i| pi.get(i) * entropy_bits(kernel.mat().row(i)))
        .sum();
    Ok(h_pi + (n as f64 - 1.0) * h_cond)
}

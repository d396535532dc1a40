//! Eigenstructure of reversible chains via symmetric conjugation, mixing
//! functionals (spectral gap, absolute gap, relaxation time, pseudo-spectral
//! gap) and the tuple-chain identities.

pub mod jacobi;
mod tuple;

pub use tuple::{tuple_chain, verify_tuple_identities, SwapOperator, TupleChain, TupleIdentityReport};

use crate::error::{Error, Result};
use crate::markov::{StationaryDistribution, TransitionMatrix, WeightedGraph};
use crate::matrix::Mat;
use serde::{Deserialize, Serialize};

/// Detection floor below which gamma* is treated as zero and the relaxation
/// time reported as infinite.
pub const GAP_FLOOR: f64 = 1e-12;
const REVERSIBLE_TOL: f64 = 1e-10;

/// Sorted spectrum of a reversible kernel with its gap functionals.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpectralSummary {
    /// Eigenvalues sorted descending; the first is 1 up to solver accuracy.
    pub eigenvalues: Vec<f64>,
    /// Spectral gap 1 - lambda_2.
    pub gamma: f64,
    /// Absolute spectral gap 1 - max_{i>=2} |lambda_i|.
    pub gamma_star: f64,
    /// Relaxation time 1/gamma*; infinite for periodic chains.
    #[serde(with = "crate::schema::inf_as_string")]
    pub tau_rel: f64,
}

impl SpectralSummary {
    fn from_eigenvalues(mut values: Vec<f64>) -> Self {
        values.sort_by(|a, b| b.partial_cmp(a).unwrap());
        let gamma = 1.0 - values[1];
        let abs_sub = values[1..].iter().map(|v| v.abs()).fold(0.0, f64::max);
        let gamma_star = 1.0 - abs_sub;
        let tau_rel = if gamma_star <= GAP_FLOOR { f64::INFINITY } else { 1.0 / gamma_star };
        SpectralSummary { eigenvalues: values, gamma, gamma_star, tau_rel }
    }
}

fn ensure_positive_mass(pi: &StationaryDistribution) -> Result<()> {
    for (i, &p) in pi.as_slice().iter().enumerate() {
        if p <= 0.0 {
            return Err(Error::ZeroMassState(i + 1));
        }
    }
    Ok(())
}

fn ensure_reversible(kernel: &TransitionMatrix, pi: &StationaryDistribution) -> Result<()> {
    let k = kernel.k();
    for i in 0..k {
        for j in i + 1..k {
            let lhs = pi.get(i) * kernel.get(i, j);
            let rhs = pi.get(j) * kernel.get(j, i);
            if (lhs - rhs).abs() > REVERSIBLE_TOL * (1.0 + lhs.abs() + rhs.abs()) {
                return Err(Error::NotReversible { i: i + 1, j: j + 1, lhs, rhs });
            }
        }
    }
    Ok(())
}

/// Symmetric conjugate of a graph walk: S_ij = w_ij / sqrt(rho_i rho_j).
/// Shares its spectrum with the walk's transition matrix.
pub fn sym_conjugate(kernel: &TransitionMatrix, graph: &WeightedGraph) -> Result<Mat> {
    let k = graph.k();
    if kernel.k() != k {
        return Err(Error::Invalid("kernel and graph dimension mismatch".into()));
    }
    for (i, &r) in graph.rho().iter().enumerate() {
        if r <= 0.0 {
            return Err(Error::IsolatedVertex(i + 1));
        }
    }
    for i in 0..k {
        for j in 0..k {
            let expect = graph.weight(i, j) / graph.rho()[i];
            if (kernel.get(i, j) - expect).abs() > 1e-10 {
                return Err(Error::Invalid(format!(
                    "kernel does not arise from graph at ({i},{j})"
                )));
            }
        }
    }
    let mut s = Mat::zeros(k);
    for i in 0..k {
        for j in 0..k {
            s[(i, j)] = graph.weight(i, j) / (graph.rho()[i] * graph.rho()[j]).sqrt();
        }
    }
    Ok(s)
}

/// Eigenvalues of D^{1/2} K D^{-1/2} (D = diag(pi)) by the Jacobi solver,
/// packaged with the gap functionals.
pub fn eigen_reversible(
    kernel: &TransitionMatrix,
    pi: &StationaryDistribution,
) -> Result<SpectralSummary> {
    ensure_positive_mass(pi)?;
    ensure_reversible(kernel, pi)?;
    let a = conjugate_symmetric(kernel.mat(), pi.as_slice());
    let eig = jacobi::sym_eigen(&a, false);
    Ok(SpectralSummary::from_eigenvalues(eig.values))
}

/// D^{1/2} M D^{-1/2}, symmetrized exactly by averaging the two conjugates.
fn conjugate_symmetric(m: &Mat, pi: &[f64]) -> Mat {
    let k = m.n();
    let mut a = Mat::zeros(k);
    for i in 0..k {
        for j in 0..k {
            let u = (pi[i] / pi[j]).sqrt() * m[(i, j)];
            let v = (pi[j] / pi[i]).sqrt() * m[(j, i)];
            a[(i, j)] = 0.5 * (u + v);
        }
    }
    a
}

/// Right eigenpairs of a reversible kernel: eigenvalues descending with
/// eigenvectors v = D^{-1/2} u recovered from the symmetrized problem.
pub fn eigen_reversible_pairs(
    kernel: &TransitionMatrix,
    pi: &StationaryDistribution,
) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
    ensure_positive_mass(pi)?;
    ensure_reversible(kernel, pi)?;
    let k = kernel.k();
    let a = conjugate_symmetric(kernel.mat(), pi.as_slice());
    let eig = jacobi::sym_eigen(&a, true);
    let q = eig.q.unwrap();
    let vectors = (0..k)
        .map(|col| {
            (0..k)
                .map(|row| q[(row, col)] / pi.get(row).sqrt())
                .collect::<Vec<f64>>()
        })
        .collect();
    Ok((eig.values, vectors))
}

/// Multiplicative reversibilization K*_{ji} = pi_i K_ij / pi_j.
pub fn reversibilization(
    kernel: &TransitionMatrix,
    pi: &StationaryDistribution,
) -> Result<TransitionMatrix> {
    ensure_positive_mass(pi)?;
    if pi.residual(kernel) > crate::markov::STATIONARY_TOL {
        return Err(Error::Invalid("pi is not stationary for K".into()));
    }
    let k = kernel.k();
    let mut m = Mat::zeros(k);
    for i in 0..k {
        for j in 0..k {
            m[(j, i)] = pi.get(i) * kernel.get(i, j) / pi.get(j);
        }
    }
    TransitionMatrix::new(m)
}

/// gamma((K*)^r K^r): the product is self-adjoint in the pi inner product,
/// so its gap comes from a symmetric eigenproblem on the support of pi.
pub(crate) fn gamma_of_round_trip(kmat: &Mat, pi: &[f64], r: usize) -> f64 {
    let k = kmat.n();
    let mut star = Mat::zeros(k);
    for i in 0..k {
        for j in 0..k {
            star[(j, i)] = pi[i] * kmat[(i, j)] / pi[j];
        }
    }
    let product = star.pow(r).matmul(&kmat.pow(r));
    let a = conjugate_symmetric(&product, pi);
    let eig = jacobi::sym_eigen(&a, false);
    if eig.values.len() < 2 {
        return 1.0;
    }
    1.0 - eig.values[1]
}

/// Pseudo-spectral gap max_{r <= r_max} gamma((K*)^r K^r)/r, together with
/// the maximizing r so callers can detect a binding truncation.
pub fn pseudo_spectral_gap(
    kernel: &TransitionMatrix,
    pi: &StationaryDistribution,
    r_max: usize,
) -> Result<(f64, usize)> {
    ensure_positive_mass(pi)?;
    if r_max == 0 {
        return Err(Error::Invalid("r_max must be >= 1".into()));
    }
    if pi.residual(kernel) > crate::markov::STATIONARY_TOL {
        return Err(Error::Invalid("pi is not stationary for K".into()));
    }
    pseudo_spectral_gap_on_support(kernel.mat(), pi.as_slice(), r_max)
}

/// Same maximization but tolerant of zero-mass states: the chain is
/// restricted to the support of pi, which is closed under transitions for
/// any stationary pi.
pub(crate) fn pseudo_spectral_gap_on_support(
    kmat: &Mat,
    pi: &[f64],
    r_max: usize,
) -> Result<(f64, usize)> {
    let support: Vec<usize> = (0..pi.len()).filter(|&i| pi[i] > 0.0).collect();
    if support.len() < 2 {
        return Err(Error::Invalid("support of pi has fewer than 2 states".into()));
    }
    let (kmat, pi) = if support.len() == pi.len() {
        (kmat.clone(), pi.to_vec())
    } else {
        let s = support.len();
        let mut sub = Mat::zeros(s);
        for (a, &i) in support.iter().enumerate() {
            for (b, &j) in support.iter().enumerate() {
                sub[(a, b)] = kmat[(i, j)];
            }
        }
        (sub, support.iter().map(|&i| pi[i]).collect())
    };

    let mut best = f64::NEG_INFINITY;
    let mut best_r = 1;
    for r in 1..=r_max {
        let value = gamma_of_round_trip(&kmat, &pi, r) / r as f64;
        if value > best {
            best = value;
            best_r = r;
        }
    }
    Ok((best, best_r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::markov::{chain_from_graph, stationary};

    fn two_state(a: f64, b: f64) -> (TransitionMatrix, StationaryDistribution) {
        let k = TransitionMatrix::from_rows(&[vec![1.0 - a, a], vec![b, 1.0 - b]]).unwrap();
        let pi = stationary(&k).unwrap();
        (k, pi)
    }

    #[test]
    fn eigen_rank_one_kernel() {
        let (k, pi) = two_state(0.5, 0.5);
        let s = eigen_reversible(&k, &pi).unwrap();
        assert!((s.eigenvalues[0] - 1.0).abs() < 1e-12);
        assert!(s.eigenvalues[1].abs() < 1e-12);
        assert!((s.gamma - 1.0).abs() < 1e-12);
        assert!((s.gamma_star - 1.0).abs() < 1e-12);
        assert!((s.tau_rel - 1.0).abs() < 1e-12);
    }

    #[test]
    fn eigen_two_state_closed_form() {
        let (k, pi) = two_state(0.1, 0.2);
        let s = eigen_reversible(&k, &pi).unwrap();
        assert!((s.eigenvalues[1] - 0.7).abs() < 1e-12);
        assert!((s.gamma - 0.3).abs() < 1e-12);
        assert!((s.gamma_star - 0.3).abs() < 1e-12);
        assert!((s.tau_rel - 10.0 / 3.0).abs() < 1e-10);
    }

    #[test]
    fn eigen_periodic_chain() {
        let k = TransitionMatrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let pi = StationaryDistribution::new(vec![0.5, 0.5]).unwrap();
        let s = eigen_reversible(&k, &pi).unwrap();
        assert!((s.eigenvalues[1] + 1.0).abs() < 1e-12);
        assert!((s.gamma - 2.0).abs() < 1e-12);
        assert!(s.gamma_star.abs() < 1e-12);
        assert!(s.tau_rel.is_infinite());
    }

    #[test]
    fn gamma_dominates_gamma_star() {
        let (k, pi) = two_state(0.9, 0.85);
        let s = eigen_reversible(&k, &pi).unwrap();
        assert!(s.gamma >= s.gamma_star - 1e-12);
    }

    #[test]
    fn sym_conjugate_equal_row_sums_is_kernel() {
        let mut w = Mat::zeros(3);
        for i in 0..3 {
            for j in 0..3 {
                if i != j {
                    w[(i, j)] = 1.0;
                }
            }
        }
        let g = WeightedGraph::new(w).unwrap();
        let (k, _) = chain_from_graph(&g).unwrap();
        let s = sym_conjugate(&k, &g).unwrap();
        assert!(s.max_abs_diff(k.mat()) < 1e-14);
    }

    #[test]
    fn sym_conjugate_spectral_equivalence() {
        let mut w = Mat::zeros(3);
        let weights = [(0, 1, 1.0), (0, 2, 2.0), (1, 2, 3.0)];
        for &(i, j, v) in &weights {
            w[(i, j)] = v;
            w[(j, i)] = v;
        }
        let g = WeightedGraph::new(w).unwrap();
        let (k, pi) = chain_from_graph(&g).unwrap();
        let s = sym_conjugate(&k, &g).unwrap();
        assert!((s[(0, 1)] - 1.0 / (3.0f64 * 4.0).sqrt()).abs() < 1e-14);
        let via_s = jacobi::sym_eigen(&s, false).values;
        let via_pi = eigen_reversible(&k, &pi).unwrap().eigenvalues;
        for (a, b) in via_s.iter().zip(&via_pi) {
            assert!((a - b).abs() < 1e-10);
        }
        // eigenvector of eigenvalue 1 is proportional to sqrt(rho)
        let eig = jacobi::sym_eigen(&s, true);
        let q = eig.q.unwrap();
        let v: Vec<f64> = (0..3).map(|r| q[(r, 0)]).collect();
        let sqrt_rho: Vec<f64> = g.rho().iter().map(|r| r.sqrt()).collect();
        let scale = v[0] / sqrt_rho[0];
        for i in 0..3 {
            assert!((v[i] - scale * sqrt_rho[i]).abs() < 1e-9);
        }
    }

    #[test]
    fn reversibilization_fixes_reversible() {
        let (k, pi) = two_state(0.1, 0.2);
        let star = reversibilization(&k, &pi).unwrap();
        assert!(star.mat().max_abs_diff(k.mat()) < 1e-12);
    }

    #[test]
    fn reversibilization_reverses_cycle() {
        let k = TransitionMatrix::from_rows(&[
            vec![0.0, 1.0, 0.0],
            vec![0.0, 0.0, 1.0],
            vec![1.0, 0.0, 0.0],
        ])
        .unwrap();
        let pi = StationaryDistribution::new(vec![1.0 / 3.0; 3]).unwrap();
        let star = reversibilization(&k, &pi).unwrap();
        assert!(star.mat().max_abs_diff(&k.mat().transpose()) < 1e-14);
        let double = reversibilization(&star, &pi).unwrap();
        assert!(double.mat().max_abs_diff(k.mat()) < 1e-14);
    }

    #[test]
    fn pseudo_gap_iid_chain() {
        let k = TransitionMatrix::from_rows(&[vec![0.3, 0.7], vec![0.3, 0.7]]).unwrap();
        let pi = StationaryDistribution::new(vec![0.3, 0.7]).unwrap();
        let (g, r) = pseudo_spectral_gap(&k, &pi, 4).unwrap();
        assert!((g - 1.0).abs() < 1e-10);
        assert_eq!(r, 1);
    }

    #[test]
    fn pseudo_gap_reversible_two_state() {
        let (k, pi) = two_state(0.1, 0.2);
        let (g, r) = pseudo_spectral_gap(&k, &pi, 1).unwrap();
        assert!((g - 0.51).abs() < 1e-10);
        assert_eq!(r, 1);
        // larger r_max cannot help here: gamma <= 1 forces value below 1/r
        let (g8, _) = pseudo_spectral_gap(&k, &pi, 8).unwrap();
        assert!((g8 - 0.51).abs() < 1e-10);
    }

    #[test]
    fn pseudo_gap_nondecreasing_in_r_max() {
        let (k, pi) = two_state(0.05, 0.02);
        let (g1, _) = pseudo_spectral_gap(&k, &pi, 1).unwrap();
        let (g8, _) = pseudo_spectral_gap(&k, &pi, 8).unwrap();
        assert!(g8 >= g1 - 1e-12);
    }
}

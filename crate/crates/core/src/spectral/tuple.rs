//! The chain on consecutive pairs (X_t, X_{t+1}), its multiplicative
//! reversibilization and the swap operator, with a verifier for the
//! identities that relate the tuple chain's pseudo-spectral gap back to the
//! base chain's absolute gap.

use crate::error::{Error, Result};
use crate::markov::{StationaryDistribution, TransitionMatrix};
use crate::matrix::Mat;
use crate::spectral;

/// Dense tuple-chain construction is guarded to keep k^4 entries tractable.
pub const TUPLE_K_MAX: usize = 32;

/// The chain over tuples (a,b) with its reversibilization and stationary
/// vector pi(a,b) = pi_a K_ab.
#[derive(Debug, Clone)]
pub struct TupleChain {
    pub k: usize,
    pub ktilde: Mat,
    pub ktilde_star: Mat,
    pub pi_tuple: Vec<f64>,
}

/// Permutation on tuple indices mapping (a,b) to (b,a).
#[derive(Debug, Clone, Copy)]
pub struct SwapOperator {
    pub k: usize,
}

impl SwapOperator {
    pub fn new(k: usize) -> Self {
        SwapOperator { k }
    }

    pub fn as_matrix(&self) -> Mat {
        let k = self.k;
        let mut t = Mat::zeros(k * k);
        for a in 0..k {
            for b in 0..k {
                t[(a * k + b, b * k + a)] = 1.0;
            }
        }
        t
    }

    /// Left action: row (a,b) of the result is row (b,a) of `m`.
    pub fn apply_left(&self, m: &Mat) -> Mat {
        let k = self.k;
        let kk = k * k;
        let mut out = Mat::zeros(kk);
        for a in 0..k {
            for b in 0..k {
                let dst = a * k + b;
                let src = b * k + a;
                for j in 0..kk {
                    out[(dst, j)] = m[(src, j)];
                }
            }
        }
        out
    }
}

/// Builds the tuple chain from the closed forms
/// Ktilde((a,b),(c,d)) = 1[b=c] K(c,d) and
/// Ktilde*((a,b),(c,d)) = 1[a=d] K(d,c).
pub fn tuple_chain(
    kernel: &TransitionMatrix,
    pi: &StationaryDistribution,
) -> Result<TupleChain> {
    let k = kernel.k();
    if k > TUPLE_K_MAX {
        return Err(Error::DimensionGuard { k, max: TUPLE_K_MAX });
    }
    if pi.len() != k {
        return Err(Error::Invalid("pi length does not match k".into()));
    }
    if pi.residual(kernel) > crate::markov::STATIONARY_TOL {
        return Err(Error::Invalid("pi is not stationary for K".into()));
    }
    let kk = k * k;
    let mut ktilde = Mat::zeros(kk);
    let mut ktilde_star = Mat::zeros(kk);
    let mut pi_tuple = vec![0.0; kk];
    for a in 0..k {
        for b in 0..k {
            let row = a * k + b;
            pi_tuple[row] = pi.get(a) * kernel.get(a, b);
            for c in 0..k {
                for d in 0..k {
                    let col = c * k + d;
                    if b == c {
                        ktilde[(row, col)] = kernel.get(c, d);
                    }
                    if a == d {
                        ktilde_star[(row, col)] = kernel.get(d, c);
                    }
                }
            }
        }
    }
    Ok(TupleChain { k, ktilde, ktilde_star, pi_tuple })
}

/// Residuals and gap comparison for the tuple-chain identities.
#[derive(Debug, Clone)]
pub struct TupleIdentityReport {
    /// max over r <= r_max of the entrywise residual of
    /// (Ktilde*)^r Ktilde^r = (T Ktilde^r)^2.
    pub swap_identity_residual: f64,
    /// max over nonzero eigenpairs (eta, v) of K of
    /// ||T Ktilde^2 V - eta V||_inf with V((a,b)) = v_a, ||v||_inf = 1.
    pub lifted_eigenvector_residual: f64,
    /// Pseudo-spectral gap of the tuple chain (max over r <= r_max).
    pub gamma_ps_tuple: f64,
    /// Absolute spectral gap of the base chain.
    pub gamma_star_base: f64,
    pub tol: f64,
    pub pass: bool,
}

impl TupleIdentityReport {
    pub fn gap_inequality_holds(&self) -> bool {
        self.gamma_ps_tuple >= self.gamma_star_base / 2.0 - self.tol
    }
}

/// Checks, on dense matrices, that the swap identity, the lifted-eigenvector
/// correspondence and the gap inequality all hold within `tol`.
pub fn verify_tuple_identities(
    kernel: &TransitionMatrix,
    pi: &StationaryDistribution,
    r_max: usize,
    tol: f64,
) -> Result<TupleIdentityReport> {
    let chain = tuple_chain(kernel, pi)?;
    let k = chain.k;
    let swap = SwapOperator::new(k);

    let mut swap_identity_residual = 0.0f64;
    for r in 1..=r_max.max(1) {
        let kt_r = chain.ktilde.pow(r);
        let lhs = chain.ktilde_star.pow(r).matmul(&kt_r);
        let t_kt_r = swap.apply_left(&kt_r);
        let rhs = t_kt_r.matmul(&t_kt_r);
        swap_identity_residual = swap_identity_residual.max(lhs.max_abs_diff(&rhs));
    }

    // lifted eigenvectors: V((a,b)) = v_a satisfies T Ktilde^2 V = eta V
    let t_kt2 = swap.apply_left(&chain.ktilde.pow(2));
    let (values, vectors) = spectral::eigen_reversible_pairs(kernel, pi)?;
    let mut lifted_eigenvector_residual = 0.0f64;
    for (eta, v) in values.iter().zip(&vectors) {
        if eta.abs() <= 1e-9 {
            continue;
        }
        let scale = v.iter().map(|x| x.abs()).fold(0.0, f64::max);
        let lifted: Vec<f64> = (0..k * k).map(|idx| v[idx / k] / scale).collect();
        let image = t_kt2.matvec(&lifted);
        let resid = image
            .iter()
            .zip(&lifted)
            .map(|(got, want)| (got - eta * want).abs())
            .fold(0.0, f64::max);
        lifted_eigenvector_residual = lifted_eigenvector_residual.max(resid);
    }

    let (gamma_ps_tuple, _) = spectral::pseudo_spectral_gap_on_support(
        &chain.ktilde,
        &chain.pi_tuple,
        r_max.max(2),
    )?;
    let gamma_star_base = spectral::eigen_reversible(kernel, pi)?.gamma_star;

    let mut report = TupleIdentityReport {
        swap_identity_residual,
        lifted_eigenvector_residual,
        gamma_ps_tuple,
        gamma_star_base,
        tol,
        pass: false,
    };
    report.pass = report.swap_identity_residual <= tol
        && report.lifted_eigenvector_residual <= tol
        && report.gap_inequality_holds();
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::markov::stationary;

    #[test]
    fn tuple_entries_iid_half() {
        let k = TransitionMatrix::from_rows(&[vec![0.5, 0.5], vec![0.5, 0.5]]).unwrap();
        let pi = stationary(&k).unwrap();
        let t = tuple_chain(&k, &pi).unwrap();
        for a in 0..2 {
            for b in 0..2 {
                for c in 0..2 {
                    for d in 0..2 {
                        let expect = if b == c { 0.5 } else { 0.0 };
                        assert_eq!(t.ktilde[(a * 2 + b, c * 2 + d)], expect);
                    }
                }
            }
        }
        let sum: f64 = t.pi_tuple.iter().sum();
        assert!((sum - 1.0).abs() < 1e-12);
    }

    #[test]
    fn tuple_square_closed_form() {
        // Ktilde^2((a,b),(c,d)) = K(b,c) K(c,d)
        let k = TransitionMatrix::from_rows(&[vec![0.2, 0.8], vec![0.6, 0.4]]).unwrap();
        let pi = stationary(&k).unwrap();
        let t = tuple_chain(&k, &pi).unwrap();
        let kt2 = t.ktilde.pow(2);
        for a in 0..2 {
            for b in 0..2 {
                for c in 0..2 {
                    for d in 0..2 {
                        let expect = k.get(b, c) * k.get(c, d);
                        assert!((kt2[(a * 2 + b, c * 2 + d)] - expect).abs() < 1e-14);
                    }
                }
            }
        }
    }

    #[test]
    fn tuple_rows_stochastic_and_pi_stationary() {
        let k = TransitionMatrix::from_rows(&[vec![0.3, 0.7], vec![0.7, 0.3]]).unwrap();
        let pi = stationary(&k).unwrap();
        let t = tuple_chain(&k, &pi).unwrap();
        for row in 0..4 {
            let s: f64 = t.ktilde.row(row).iter().sum();
            assert!((s - 1.0).abs() < 1e-12);
            let star_s: f64 = t.ktilde_star.row(row).iter().sum();
            assert!((star_s - 1.0).abs() < 1e-12);
        }
        // pi_tuple Ktilde = pi_tuple
        for col in 0..4 {
            let s: f64 = (0..4).map(|r| t.pi_tuple[r] * t.ktilde[(r, col)]).sum();
            assert!((s - t.pi_tuple[col]).abs() < 1e-10);
        }
    }

    #[test]
    fn swap_operator_is_involution() {
        let t = SwapOperator::new(3).as_matrix();
        assert!(t.matmul(&t).max_abs_diff(&Mat::identity(9)) < 1e-15);
    }

    #[test]
    fn identities_hold_on_two_state_chain() {
        let k = TransitionMatrix::from_rows(&[vec![0.9, 0.1], vec![0.2, 0.8]]).unwrap();
        let pi = stationary(&k).unwrap();
        let report = verify_tuple_identities(&k, &pi, 3, 1e-9).unwrap();
        assert!(report.pass, "{report:?}");
    }

    #[test]
    fn periodic_chain_gap_inequality_trivial() {
        let k = TransitionMatrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let pi = StationaryDistribution::new(vec![0.5, 0.5]).unwrap();
        let report = verify_tuple_identities(&k, &pi, 3, 1e-9).unwrap();
        assert!(report.gamma_star_base.abs() < 1e-12);
        assert!(report.gap_inequality_holds());
        assert!(report.swap_identity_residual <= 1e-9);
    }

    #[test]
    fn dimension_guard() {
        let n = TUPLE_K_MAX + 1;
        let k = TransitionMatrix::new(crate::matrix::Mat::from_vec(
            n,
            vec![1.0 / n as f64; n * n],
        ))
        .unwrap();
        let pi = StationaryDistribution::new(vec![1.0 / n as f64; n]).unwrap();
        assert!(matches!(tuple_chain(&k, &pi), Err(Error::DimensionGuard { .. })));
    }
}

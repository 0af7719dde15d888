//! Both sides of the interpolation bound
//!
//! ```text
//! log ‖C_1^{1/p} ⋯ C_L^{1/p}‖_p^p  <=  ∫ β_{q/p}(t) log ‖C_1^{(1+it)/q} ⋯ C_L^{(1+it)/q}‖_q^q dt
//! ```
//!
//! and of its `p → ∞` form with `β_0`, whose left side is
//! `log Tr exp(log C_1 + ⋯ + log C_L)`.

use crate::commutant::SwivelAssignment;
use crate::error::{Error, Result};
use crate::matcore::{hermitian_eigen, schatten_pow, ComplexMatrix};
use crate::report::{Diagnostics, Inequality, Status, VerificationReport};
use crate::swivelopt::{chain_norm, ChainInstance};

use super::density::DensityParams;
use super::quadrature::{integrate, QuadResult, QuadratureConfig, TailBound};

/// Integrands below this are reported instead of fed to `log`.
pub const INTEGRAND_FLOOR: f64 = 1e-300;

/// `log ‖C_1^{1/p} ⋯ C_L^{1/p}‖_p^p`; `−∞` when the product vanishes.
pub fn hirschman_lhs(inst: &ChainInstance, p: f64) -> Result<f64> {
    let v = chain_norm(inst, &SwivelAssignment::identity(inst.structures()), p)?;
    Ok(if v > 0.0 { v.ln() } else { f64::NEG_INFINITY })
}

/// `log ‖C_1^{(1+it)/q} ⋯ C_L^{(1+it)/q}‖_q^q`.
pub fn complex_chain_log_norm(inst: &ChainInstance, t: f64, q: f64) -> Result<f64> {
    let n = inst.dim();
    let m = inst
        .operators()
        .iter()
        .fold(ComplexMatrix::identity(n, n), |m, c| m * c.complex_power(1.0, t, q));
    let s = schatten_pow(&m, q)?;
    if !(s >= INTEGRAND_FLOOR) {
        return Err(Error::IntegrandUnderflow { t, value: s });
    }
    Ok(s.ln())
}

/// `|log ‖·‖_q^q| <= B` for the integrand, from extreme eigenvalues:
/// `Π λ_min <= ‖X‖_q^q <= n Π λ_max`. The lower end is only proven for
/// positive definite chains.
fn integrand_bound(inst: &ChainInstance) -> TailBound {
    let n = inst.dim() as f64;
    let mut upper = n.ln();
    let mut lower = 0.0;
    for c in inst.operators() {
        upper += c.max_eigenvalue().ln();
        lower += c.min_support_eigenvalue().unwrap_or(f64::MIN_POSITIVE).ln();
    }
    TailBound {
        bound: upper.abs().max(lower.abs()),
        certified: inst.all_positive_definite(),
    }
}

/// Total log-spread of the complex powers' phases per unit `t`; the integrand
/// varies on scale `2π/ω`.
fn feature_width(inst: &ChainInstance, q: f64) -> f64 {
    let omega: f64 = inst
        .operators()
        .iter()
        .map(|c| match c.min_support_eigenvalue() {
            Some(lo) => (c.max_eigenvalue() / lo).ln(),
            None => 0.0,
        })
        .sum::<f64>()
        / q;
    if omega > 0.0 {
        std::f64::consts::TAU / omega
    } else {
        f64::INFINITY
    }
}

fn check_q(q: f64) -> Result<()> {
    if q >= 1.0 && q.is_finite() {
        Ok(())
    } else {
        Err(Error::DomainError(format!("q must be a finite real >= 1, got {q}")))
    }
}

/// `∫ w(t) log ‖C_1^{(1+it)/q} ⋯‖_q^q dt` for the weight of `density`.
pub fn weighted_log_norm(
    inst: &ChainInstance,
    q: f64,
    density: &DensityParams,
    quad: &QuadratureConfig,
) -> Result<QuadResult> {
    check_q(q)?;
    integrate(
        density.beta(),
        |t| complex_chain_log_norm(inst, t, q),
        integrand_bound(inst),
        feature_width(inst, q),
        quad,
    )
}

/// The `β_{q/p}` side, `1 <= q < p`.
pub fn hirschman_rhs(inst: &ChainInstance, p: f64, q: f64, quad: &QuadratureConfig) -> Result<QuadResult> {
    weighted_log_norm(inst, q, &DensityParams::from_pq(p, q)?, quad)
}

fn clamp_count(inst: &ChainInstance) -> usize {
    inst.operators().iter().map(|c| c.clamped()).sum()
}

fn finish(
    inequality: Inequality,
    lhs: f64,
    rhs: Result<QuadResult>,
    tol: f64,
    mut diagnostics: Diagnostics,
) -> Result<VerificationReport> {
    match rhs {
        Ok(r) => {
            diagnostics.quadrature = Some(r.diagnostics());
            if !r.tail_certified {
                diagnostics
                    .notes
                    .push("rank-deficient operator: integrand bound for the tail is heuristic".into());
            }
            Ok(VerificationReport::new(inequality, lhs, r.value, tol, r.error_estimate, diagnostics))
        }
        Err(e @ Error::IntegrandUnderflow { .. }) => {
            diagnostics.notes.push(e.to_string());
            let mut rep = VerificationReport::new(inequality, lhs, f64::NAN, tol, 0.0, diagnostics);
            rep.status = Status::InconclusiveOptimizerGap;
            Ok(rep)
        }
        Err(e) => Err(e),
    }
}

/// HOLDS iff `rhs − lhs >= −(tol + quadrature error estimate)`.
pub fn verify_hirschman(
    inst: &ChainInstance,
    p: f64,
    q: f64,
    quad: &QuadratureConfig,
    tol: f64,
) -> Result<VerificationReport> {
    let density = DensityParams::from_pq(p, q)?;
    let lhs = hirschman_lhs(inst, p)?;
    let rhs = weighted_log_norm(inst, q, &density, quad);
    let diagnostics = Diagnostics {
        clamp_count: clamp_count(inst),
        ..Default::default()
    };
    finish(Inequality::Hirschman, lhs, rhs, tol, diagnostics)
}

/// `log Tr exp(log C_1 + ⋯ + log C_L)`, computed as a log-sum-exp over the
/// eigenvalues of the log sum. Every operator must be positive definite.
pub fn gt_lhs(inst: &ChainInstance) -> Result<f64> {
    let n = inst.dim();
    let mut h = ComplexMatrix::zeros(n, n);
    for (i, c) in inst.operators().iter().enumerate() {
        let log = c.log_on_support();
        if log.rank_deficient {
            return Err(Error::RankDeficient(i));
        }
        h += log.matrix;
    }
    let (mu, _) = hermitian_eigen(&h)?;
    let top = mu[0];
    Ok(top + mu.iter().map(|m| (m - top).exp()).sum::<f64>().ln())
}

/// The `β_0` side for `q >= 1`.
pub fn gt_rhs(inst: &ChainInstance, q: f64, quad: &QuadratureConfig) -> Result<QuadResult> {
    weighted_log_norm(inst, q, &DensityParams::limit(), quad)
}

pub fn verify_gt(inst: &ChainInstance, q: f64, quad: &QuadratureConfig, tol: f64) -> Result<VerificationReport> {
    check_q(q)?;
    let lhs = gt_lhs(inst)?;
    let rhs = gt_rhs(inst, q, quad);
    let diagnostics = Diagnostics {
        clamp_count: clamp_count(inst),
        ..Default::default()
    };
    finish(Inequality::Gt, lhs, rhs, tol, diagnostics)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instgen::random::{random_psd, random_unitary, rng_from_seed};
    use crate::instgen::{generate, GenKind, GenSpec};
    use crate::matcore::{c64, diag_real, singular_values};

    fn chain(ms: &[ComplexMatrix]) -> ChainInstance {
        ChainInstance::from_matrices(ms, "t", 0).unwrap()
    }

    fn pd(seed: u64, n: usize, l: usize) -> ChainInstance {
        generate(&GenSpec::new(GenKind::Pd, n, l, seed)).unwrap().chain().unwrap()
    }

    #[test]
    fn lhs_examples() {
        let m = random_psd(&mut rng_from_seed(1), 3);
        let single = chain(&[m]);
        let tr = single.operators()[0].trace();
        assert!((hirschman_lhs(&single, 3.0).unwrap() - tr.ln()).abs() < 1e-12);
        let diag = chain(&[diag_real(&[1.0, 2.0]), diag_real(&[3.0, 4.0])]);
        for p in [1.0, 2.0, 7.0] {
            assert!((hirschman_lhs(&diag, p).unwrap() - 11f64.ln()).abs() < 1e-12);
        }
        let zero = chain(&[diag_real(&[1.0, 0.0]), diag_real(&[0.0, 1.0])]);
        assert_eq!(hirschman_lhs(&zero, 2.0).unwrap(), f64::NEG_INFINITY);
    }

    #[test]
    fn lhs_matches_dense_evaluation() {
        let mut rng = rng_from_seed(2);
        let a = random_psd(&mut rng, 3);
        let b = random_psd(&mut rng, 3);
        let inst = chain(&[a.clone(), b.clone()]);
        // fourth root by repeated square roots of the eigenvalues
        let root4 = |m: &ComplexMatrix| {
            let (vals, vecs) = hermitian_eigen(m).unwrap();
            let d = ComplexMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
                vals.len(),
                vals.iter().map(|v| c64(v.max(0.0).sqrt().sqrt(), 0.0)),
            ));
            &vecs * d * vecs.adjoint()
        };
        let prod = root4(&a) * root4(&b);
        let s: f64 = singular_values(&prod).unwrap().iter().map(|s| s.powi(4)).sum();
        assert!((hirschman_lhs(&inst, 4.0).unwrap() - s.ln()).abs() < 1e-10);
    }

    #[test]
    fn commuting_family_has_zero_slack() {
        let inst = generate(&GenSpec::new(GenKind::CommutingFamily, 3, 3, 4)).unwrap().chain().unwrap();
        let quad = QuadratureConfig::default();
        for (p, q) in [(2.0, 1.0), (4.0, 2.0), (8.0, 3.0)] {
            let rep = verify_hirschman(&inst, p, q, &quad, 1e-7).unwrap();
            assert_eq!(rep.status, Status::Holds);
            assert!(rep.slack.abs() < 1e-8, "{}", rep.slack);
        }
        let rep = verify_gt(&inst, 1.0, &quad, 1e-7).unwrap();
        assert!(rep.slack.abs() < 1e-8, "{}", rep.slack);
    }

    #[test]
    fn single_operator_has_zero_slack() {
        let inst = pd(5, 3, 1);
        let rep = verify_hirschman(&inst, 3.0, 2.0, &QuadratureConfig::default(), 1e-7).unwrap();
        assert!(rep.slack.abs() < 1e-8);
        let tr = inst.operators()[0].trace();
        assert!((rep.lhs - tr.ln()).abs() < 1e-12);
        assert!((gt_lhs(&inst).unwrap() - tr.ln()).abs() < 1e-10);
    }

    #[test]
    fn random_pair_resolution_doubling() {
        let inst = pd(6, 2, 2);
        let quad = QuadratureConfig::default();
        let a = hirschman_rhs(&inst, 4.0, 2.0, &quad).unwrap();
        let b = hirschman_rhs(&inst, 4.0, 2.0, &quad.doubled()).unwrap();
        assert!((a.value - b.value).abs() < 1e-7);
        assert!((a.value - b.value).abs() <= a.error_estimate);
        assert!(a.value >= hirschman_lhs(&inst, 4.0).unwrap());
    }

    #[test]
    fn gt_lhs_matches_common_eigenbasis_evaluation() {
        // commuting pair in a random basis: Tr exp(log A + log B) = Σ a_i b_i
        let w = random_unitary(&mut rng_from_seed(7), 2);
        let a = &w * diag_real(&[0.3, 2.0]) * w.adjoint();
        let b = &w * diag_real(&[5.0, 0.7]) * w.adjoint();
        let inst = chain(&[a, b]);
        assert!((gt_lhs(&inst).unwrap() - (0.3f64 * 5.0 + 2.0 * 0.7).ln()).abs() < 1e-10);
        // generic pair: spectral oracle from eigenvalues of the log sum
        let inst = pd(8, 2, 2);
        let h: ComplexMatrix = inst
            .operators()
            .iter()
            .map(|c| c.map_support(|l| c64(l.ln(), 0.0)))
            .fold(ComplexMatrix::zeros(2, 2), |acc, m| acc + m);
        let (mu, _) = hermitian_eigen(&h).unwrap();
        let expect = (mu[0].exp() + mu[1].exp()).ln();
        assert!((gt_lhs(&inst).unwrap() - expect).abs() < 1e-10);
    }

    #[test]
    fn classic_golden_thompson_at_q_one() {
        let inst = pd(9, 3, 2);
        let ops = inst.operators();
        let tr_ab = (ops[0].to_matrix() * ops[1].to_matrix()).trace().re;
        let lhs = gt_lhs(&inst).unwrap();
        assert!(lhs <= tr_ab.ln() + 1e-12);
        let rep = verify_gt(&inst, 1.0, &QuadratureConfig::default(), 1e-7).unwrap();
        assert_eq!(rep.status, Status::Holds);
        assert!(rep.rhs >= lhs - 1e-7);
    }

    #[test]
    fn rank_deficient_rejected_by_gt_accepted_by_hirschman() {
        let inst = generate(&GenSpec::new(GenKind::RankDeficient, 3, 2, 3).with_rank(2))
            .unwrap()
            .chain()
            .unwrap();
        assert!(matches!(gt_lhs(&inst), Err(Error::RankDeficient(0))));
        let rep = verify_hirschman(&inst, 2.0, 1.0, &QuadratureConfig::default(), 1e-7).unwrap();
        assert!(!rep.diagnostics.quadrature.unwrap().tail_certified);
    }

    #[test]
    fn underflow_is_inconclusive() {
        // orthogonal supports: the product vanishes at every t
        let inst = chain(&[diag_real(&[1.0, 0.0]), diag_real(&[0.0, 1.0])]);
        let rep = verify_hirschman(&inst, 2.0, 1.0, &QuadratureConfig::default(), 1e-7).unwrap();
        assert_eq!(rep.status, Status::InconclusiveOptimizerGap);
        assert!(rep.rhs.is_nan());
        assert!(matches!(complex_chain_log_norm(&inst, 0.3, 1.0), Err(Error::IntegrandUnderflow { .. })));
    }

    #[test]
    fn gt_is_limit_of_hirschman() {
        let inst = pd(10, 2, 2);
        let quad = QuadratureConfig::default();
        let gt = gt_rhs(&inst, 1.0, &quad).unwrap().value;
        for p in [1e3, 1e4] {
            let h = hirschman_rhs(&inst, p, 1.0, &quad).unwrap().value;
            assert!((h - gt).abs() < 1e-4, "p={p}: {h} vs {gt}");
        }
    }

    #[test]
    fn domain_errors() {
        let inst = pd(11, 2, 2);
        let quad = QuadratureConfig::default();
        assert!(verify_hirschman(&inst, 2.0, 2.0, &quad, 1e-7).is_err());
        assert!(verify_gt(&inst, 0.5, &quad, 1e-7).is_err());
    }
}

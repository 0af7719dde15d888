//! Unitaries commuting with a PSD operator.
//!
//! A unitary commutes with `C = Σ λ_k P_k` exactly when it is block diagonal
//! over the eigenspaces `P_k`. Eigenvalues are grouped into clusters with a
//! relative tolerance, each cluster contributes an isometry `B_k` of
//! eigenvectors, and a swivel is `V = Σ_k B_k U_k B_k†` with every `U_k`
//! unitary of size `m_k`.

use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instgen::random::{random_unitary, rng_from_seed};
use crate::matcore::{c64, frobenius, identity, unitarity_residual, ComplexMatrix, PsdOperator};
use crate::tolerances;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenvalueClustering {
    /// Index ranges into the descending eigenvalue list.
    pub clusters: Vec<Range<usize>>,
    /// Mean eigenvalue of each cluster.
    pub representatives: Vec<f64>,
    /// Absolute gap threshold used by the sweep.
    pub tolerance: f64,
}

impl EigenvalueClustering {
    pub fn sizes(&self) -> Vec<usize> {
        self.clusters.iter().map(|r| r.len()).collect()
    }
}

/// Groups a descending list: a new cluster starts whenever the gap to the
/// previous value exceeds `tau`.
pub fn cluster_values(values: &[f64], tau: f64) -> EigenvalueClustering {
    let mut clusters = Vec::new();
    let mut start = 0;
    for i in 1..values.len() {
        if (values[i - 1] - values[i]).abs() > tau {
            clusters.push(start..i);
            start = i;
        }
    }
    if !values.is_empty() {
        clusters.push(start..values.len());
    }
    let representatives = clusters
        .iter()
        .map(|r| values[r.clone()].iter().sum::<f64>() / r.len() as f64)
        .collect();
    EigenvalueClustering {
        clusters,
        representatives,
        tolerance: tau,
    }
}

/// Clusters `C`'s spectrum with `tau = rel_tol * max(1, λ_max)`.
pub fn cluster_eigenvalues(op: &PsdOperator, rel_tol: f64) -> EigenvalueClustering {
    let tau = rel_tol * op.max_eigenvalue().max(1.0);
    cluster_values(op.eigenvalues(), tau)
}

/// Block structure of the unitary commutant of one operator.
#[derive(Debug, Clone)]
pub struct CommutantStructure {
    dim: usize,
    clustering: EigenvalueClustering,
    block_bases: Vec<ComplexMatrix>,
}

pub fn commutant_structure(op: &PsdOperator, rel_tol: f64) -> CommutantStructure {
    let clustering = cluster_eigenvalues(op, rel_tol);
    let u = op.eigenvectors();
    let block_bases = clustering
        .clusters
        .iter()
        .map(|r| u.columns(r.start, r.len()).into_owned())
        .collect();
    CommutantStructure {
        dim: op.dim(),
        clustering,
        block_bases,
    }
}

impl CommutantStructure {
    /// Uses the global clustering tolerance.
    pub fn of(op: &PsdOperator) -> Self {
        commutant_structure(op, tolerances::get().cluster_rel)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn clustering(&self) -> &EigenvalueClustering {
        &self.clustering
    }

    /// `n × m_k` isometries, one per cluster.
    pub fn block_bases(&self) -> &[ComplexMatrix] {
        &self.block_bases
    }

    pub fn block_sizes(&self) -> Vec<usize> {
        self.clustering.sizes()
    }

    pub fn num_blocks(&self) -> usize {
        self.block_bases.len()
    }

    /// True when every block is 1×1, i.e. the commutant is a torus of phases.
    pub fn is_scalar(&self) -> bool {
        self.block_bases.iter().all(|b| b.ncols() == 1)
    }

    /// Real dimension of the commutant group, counted from tangent generators.
    pub fn real_dimension(&self) -> usize {
        self.block_sizes()
            .iter()
            .map(|&m| skew_hermitian_basis(m).len())
            .sum()
    }

    pub fn identity_blocks(&self) -> Vec<ComplexMatrix> {
        self.block_sizes().into_iter().map(identity).collect()
    }
}

/// `V = Σ_k B_k U_k B_k†`.
pub fn assemble_swivel(s: &CommutantStructure, blocks: &[ComplexMatrix]) -> Result<ComplexMatrix> {
    if blocks.len() != s.num_blocks() {
        return Err(Error::ShapeMismatch(format!(
            "{} blocks supplied for {} clusters",
            blocks.len(),
            s.num_blocks()
        )));
    }
    let tol = tolerances::get().unitary;
    let mut v = ComplexMatrix::zeros(s.dim, s.dim);
    for (k, (basis, u)) in s.block_bases.iter().zip(blocks).enumerate() {
        let m = basis.ncols();
        if u.nrows() != m || u.ncols() != m {
            return Err(Error::ShapeMismatch(format!(
                "block {k} is {}x{}, cluster size is {m}",
                u.nrows(),
                u.ncols()
            )));
        }
        let residual = unitarity_residual(u);
        if residual > tol {
            return Err(Error::NonUnitaryBlock { index: k, residual });
        }
        v += basis * u * basis.adjoint();
    }
    Ok(v)
}

/// Haar-random block unitaries, reproducible from `seed`.
pub fn random_swivel(s: &CommutantStructure, seed: u64) -> Vec<ComplexMatrix> {
    let mut rng = rng_from_seed(seed);
    s.block_sizes()
        .into_iter()
        .map(|m| random_unitary(&mut rng, m))
        .collect()
}

/// `‖VC − CV‖_F / max(1, ‖C‖_F)`.
pub fn verify_commutation(v: &ComplexMatrix, op: &PsdOperator) -> Result<f64> {
    let n = op.dim();
    if v.nrows() != n || v.ncols() != n {
        return Err(Error::ShapeMismatch(format!(
            "{}x{} swivel for a {n}-dimensional operator",
            v.nrows(),
            v.ncols()
        )));
    }
    let c = op.to_matrix();
    Ok(frobenius(&(v * &c - &c * v)) / frobenius(&c).max(1.0))
}

/// Real basis of the `m²`-dimensional space of skew-Hermitian `m × m` matrices.
pub fn skew_hermitian_basis(m: usize) -> Vec<ComplexMatrix> {
    let mut out = Vec::with_capacity(m * m);
    for k in 0..m {
        let mut e = ComplexMatrix::zeros(m, m);
        e[(k, k)] = c64(0.0, 1.0);
        out.push(e);
    }
    for k in 0..m {
        for l in k + 1..m {
            let mut a = ComplexMatrix::zeros(m, m);
            a[(k, l)] = c64(1.0, 0.0);
            a[(l, k)] = c64(-1.0, 0.0);
            out.push(a);
            let mut b = ComplexMatrix::zeros(m, m);
            b[(k, l)] = c64(0.0, 1.0);
            b[(l, k)] = c64(0.0, 1.0);
            out.push(b);
        }
    }
    out
}

/// One block unitary per cluster per chain position: a concrete
/// `(V_1, …, V_L)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SwivelAssignment {
    pub blocks: Vec<Vec<ComplexMatrix>>,
}

impl SwivelAssignment {
    pub fn identity(structures: &[CommutantStructure]) -> Self {
        Self {
            blocks: structures.iter().map(|s| s.identity_blocks()).collect(),
        }
    }

    /// Haar-random blocks for every position, drawn from one stream seeded by `seed`.
    pub fn random(structures: &[CommutantStructure], seed: u64) -> Self {
        let mut rng = rng_from_seed(seed);
        Self {
            blocks: structures
                .iter()
                .map(|s| {
                    s.block_sizes()
                        .into_iter()
                        .map(|m| random_unitary(&mut rng, m))
                        .collect()
                })
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Full `n × n` swivels, validated block by block.
    pub fn assemble(&self, structures: &[CommutantStructure]) -> Result<Vec<ComplexMatrix>> {
        if self.blocks.len() != structures.len() {
            return Err(Error::StructureMismatch(format!(
                "{} swivel positions for {} operators",
                self.blocks.len(),
                structures.len()
            )));
        }
        self.blocks
            .iter()
            .zip(structures)
            .map(|(b, s)| assemble_swivel(s, b))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instgen::random::{random_psd, random_unitary, rng_from_seed};
    use crate::matcore::{diag_complex, diag_real, max_abs_entry, spectral_apply};

    fn op_with_spectrum(values: &[f64], seed: u64) -> PsdOperator {
        let u = random_unitary(&mut rng_from_seed(seed), values.len());
        PsdOperator::from_spectrum(values.to_vec(), u, 1e-12).unwrap()
    }

    #[test]
    fn clusters_basic() {
        let c = cluster_values(&[5.0, 5.0, 2.0], 1e-8);
        assert_eq!(c.clusters, vec![0..2, 2..3]);
        let c = cluster_values(&[3.0; 4], 1e-8);
        assert_eq!(c.clusters, vec![0..4]);
    }

    #[test]
    fn clusters_at_half_and_double_tolerance() {
        // descending: 1+2τ, 1+τ/2, 1 → gaps 1.5τ (split) and τ/2 (merge)
        let tau = 1e-8;
        let c = cluster_values(&[1.0 + 2.0 * tau, 1.0 + tau / 2.0, 1.0], tau);
        assert_eq!(c.clusters, vec![0..1, 1..3]);
    }

    #[test]
    fn clustering_is_idempotent() {
        let c = cluster_values(&[4.0, 4.0 + 1e-12, 3.0, 1.0, 1.0, 1.0], 1e-8);
        let again = cluster_values(&c.representatives, c.tolerance);
        assert_eq!(again.clusters.len(), c.clusters.len());
        assert!(again.sizes().iter().all(|&s| s == 1));
    }

    #[test]
    fn distinct_spectrum_gives_phases() {
        let op = PsdOperator::new(&random_psd(&mut rng_from_seed(1), 4)).unwrap();
        let s = CommutantStructure::of(&op);
        assert_eq!(s.block_sizes(), vec![1; 4]);
        assert!(s.is_scalar());
        assert_eq!(s.real_dimension(), 4);
    }

    #[test]
    fn scalar_operator_has_full_block() {
        let op = PsdOperator::new(&diag_real(&[2.0, 2.0, 2.0])).unwrap();
        let s = CommutantStructure::of(&op);
        assert_eq!(s.block_sizes(), vec![3]);
        assert_eq!(s.real_dimension(), 9);
        let u = random_unitary(&mut rng_from_seed(2), 3);
        let v = assemble_swivel(&s, std::slice::from_ref(&u)).unwrap();
        // eigenvectors of 2I are a unitary W; V = W U W†
        let w = op.eigenvectors();
        assert!(max_abs_entry(&(v - w * u * w.adjoint())) < 1e-12);
    }

    #[test]
    fn identity_blocks_give_identity() {
        let op = PsdOperator::new(&random_psd(&mut rng_from_seed(3), 3)).unwrap();
        let s = CommutantStructure::of(&op);
        let v = assemble_swivel(&s, &s.identity_blocks()).unwrap();
        assert!(max_abs_entry(&(v - identity(3))) < 1e-12);
    }

    #[test]
    fn rank_one_projector_blocks() {
        let op = op_with_spectrum(&[1.0, 0.0, 0.0], 4);
        let s = CommutantStructure::of(&op);
        assert_eq!(s.block_sizes(), vec![1, 2]);
        for seed in 0..10 {
            let v = assemble_swivel(&s, &random_swivel(&s, seed)).unwrap();
            assert!(verify_commutation(&v, &op).unwrap() <= 1e-8);
            assert!(unitarity_residual(&v) <= 1e-9);
        }
    }

    #[test]
    fn phase_swivel_commutes() {
        let op = op_with_spectrum(&[3.0, 2.0, 1.0], 5);
        let s = CommutantStructure::of(&op);
        let phases = [0.3, -1.1, 2.5];
        let blocks: Vec<ComplexMatrix> = phases
            .iter()
            .map(|&p| ComplexMatrix::from_element(1, 1, num_complex::Complex64::from_polar(1.0, p)))
            .collect();
        let v = assemble_swivel(&s, &blocks).unwrap();
        let f: Vec<_> = phases
            .iter()
            .map(|&p| num_complex::Complex64::from_polar(1.0, p))
            .collect();
        let expected = spectral_apply(op.eigenvectors(), &f);
        assert!(max_abs_entry(&(&v - expected)) < 1e-12);
        assert!(verify_commutation(&v, &op).unwrap() <= 1e-10);
        // diagonal in the eigenbasis
        let u = op.eigenvectors();
        let in_basis = u.adjoint() * &v * u;
        let off = &in_basis - diag_complex(&(0..3).map(|i| in_basis[(i, i)]).collect::<Vec<_>>());
        assert!(max_abs_entry(&off) <= 1e-10);
    }

    #[test]
    fn assemble_errors() {
        let op = op_with_spectrum(&[3.0, 2.0], 6);
        let s = CommutantStructure::of(&op);
        assert!(matches!(assemble_swivel(&s, &[identity(1)]), Err(Error::ShapeMismatch(_))));
        assert!(matches!(
            assemble_swivel(&s, &[identity(2), identity(1)]),
            Err(Error::ShapeMismatch(_))
        ));
        let bad = ComplexMatrix::from_element(1, 1, c64(2.0, 0.0));
        assert!(matches!(
            assemble_swivel(&s, &[identity(1), bad]),
            Err(Error::NonUnitaryBlock { index: 1, .. })
        ));
        assert!(verify_commutation(&identity(3), &op).is_err());
    }

    #[test]
    fn random_swivel_deterministic_and_phase() {
        let op = op_with_spectrum(&[3.0, 2.0, 1.0], 7);
        let s = CommutantStructure::of(&op);
        let a = random_swivel(&s, 99);
        assert_eq!(a, random_swivel(&s, 99));
        for b in &a {
            assert!((b[(0, 0)].norm() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn haar_blocks_average_to_zero() {
        let op = PsdOperator::new(&diag_real(&[1.0, 1.0])).unwrap();
        let s = CommutantStructure::of(&op);
        let n = 10_000;
        let mut mean = ComplexMatrix::zeros(2, 2);
        for seed in 0..n {
            mean += &random_swivel(&s, seed)[0];
        }
        mean /= c64(n as f64, 0.0);
        assert!(max_abs_entry(&mean) < 0.05, "{mean}");
    }

    #[test]
    fn generic_unitary_does_not_commute() {
        let op = op_with_spectrum(&[3.0, 2.0, 1.0], 8);
        let mut rng = rng_from_seed(9);
        let hits = (0..100)
            .filter(|_| verify_commutation(&random_unitary(&mut rng, 3), &op).unwrap() > 1e-3)
            .count();
        assert!(hits >= 95);
        assert_eq!(verify_commutation(&identity(3), &op).unwrap(), 0.0);
    }
}

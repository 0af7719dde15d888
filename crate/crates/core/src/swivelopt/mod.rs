//! Swivel-maximized chain norms.
//!
//! For PSD `C_1, …, C_L` and unitaries `V_i` commuting with `C_i`, the
//! quantity `max_V ‖C_1^{1/p} V_1 ⋯ C_L^{1/p} V_L‖_p^p` is non-increasing in
//! `p >= 1`. This module evaluates the chain, searches the commutant for the
//! maximum (a certified lower bound, since the returned swivels attain it),
//! sweeps `p`, and provides an exhaustive phase-grid oracle for chains whose
//! commutants are tori.
//!
//! The trailing swivel `V_L` never changes the value (Schatten norms are
//! invariant under right multiplication by a unitary), so neither the
//! optimizer nor the oracle moves it.

mod chain;
mod marginal;
mod optimizer;
mod oracle;
mod sweep;

pub use chain::{chain_norm, plain_product, ChainInstance};
pub(crate) use chain::check_p;
pub use marginal::{
    marginal_chain_maximize, marginal_chain_value, marginal_phase_grid, sweep_marginal, verify_marginal_monotone,
    MarginalChain, MarginalSweepPoint,
};
pub use optimizer::{OptResult, OptimizerConfig};
pub use oracle::{
    brute_force_phase_grid, free_phase_count, phase_grid_search, PhaseGridConfig, PhaseGridResult,
    DEFAULT_GRID_BUDGET,
};
pub use sweep::{first_increase, oracle_applicable, sweep_p, verify_monotone, SweepPoint, DEFAULT_P_GRID};

use crate::commutant::{CommutantStructure, SwivelAssignment};
use crate::error::Result;
use crate::matcore::{schatten_pow, ComplexMatrix};
use optimizer::{optimize, BlockContext, SwivelObjective};

/// `Σ σ(C_1^{1/p} V_1 ⋯ C_L^{1/p} V_L)^p` at a fixed `p`.
struct ChainObjective<'a> {
    inst: &'a ChainInstance,
    p: f64,
    powers: Vec<ComplexMatrix>,
}

impl<'a> ChainObjective<'a> {
    fn new(inst: &'a ChainInstance, p: f64) -> Result<Self> {
        chain::check_p(p)?;
        Ok(Self {
            inst,
            p,
            powers: inst.powers(p),
        })
    }
}

impl SwivelObjective for ChainObjective<'_> {
    fn structures(&self) -> &[CommutantStructure] {
        self.inst.structures()
    }

    fn active_positions(&self) -> Vec<usize> {
        (0..self.inst.len().saturating_sub(1)).collect()
    }

    fn exponent(&self) -> f64 {
        self.p
    }

    fn evaluate(&self, swivels: &SwivelAssignment) -> Result<f64> {
        let vs = swivels.assemble(self.structures())?;
        let n = self.inst.dim();
        let mut m = ComplexMatrix::identity(n, n);
        for (c, v) in self.powers.iter().zip(&vs) {
            m = m * c * v;
        }
        schatten_pow(&m, self.p)
    }

    fn block_context(&self, swivels: &SwivelAssignment, pos: usize, block: usize) -> Result<BlockContext> {
        let structures = self.structures();
        let vs = swivels.assemble(structures)?;
        let n = self.inst.dim();
        let mut prefix = ComplexMatrix::identity(n, n);
        for j in 0..pos {
            prefix = prefix * &self.powers[j] * &vs[j];
        }
        prefix *= &self.powers[pos];
        let mut suffix = ComplexMatrix::identity(n, n);
        for j in pos + 1..self.inst.len() {
            suffix = suffix * &self.powers[j] * &vs[j];
        }
        let basis = &structures[pos].block_bases()[block];
        let u = &swivels.blocks[pos][block];
        let rest = &vs[pos] - basis * u * basis.adjoint();
        Ok(BlockContext {
            x: &prefix * rest * &suffix,
            y: &prefix * basis,
            z: basis.adjoint() * suffix,
            lift: 1,
        })
    }
}

/// Maximizes the chain norm over swivels with multi-start blockwise ascent.
///
/// The reported value is re-evaluated with [`chain_norm`] at the returned
/// swivels.
pub fn maximize_over_swivels(inst: &ChainInstance, p: f64, cfg: &OptimizerConfig) -> Result<OptResult> {
    let obj = ChainObjective::new(inst, p)?;
    let mut res = optimize(&obj, cfg)?;
    res.value = chain_norm(inst, &res.best_swivels, p)?;
    Ok(res)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instgen::random::{random_psd, random_unitary, rng_from_seed};
    use crate::instgen::{generate, GenKind, GenSpec};
    use crate::matcore::{c64, diag_real, identity, max_abs_entry, unitarity_residual};

    fn quick() -> OptimizerConfig {
        OptimizerConfig {
            restarts: 4,
            ..Default::default()
        }
    }

    #[test]
    fn single_operator_converges_immediately() {
        let inst = ChainInstance::from_matrices(&[random_psd(&mut rng_from_seed(1), 3)], "x", 0).unwrap();
        let res = maximize_over_swivels(&inst, 2.5, &quick()).unwrap();
        let tr = inst.operators()[0].trace();
        assert!((res.value - tr).abs() < 1e-12 * tr);
        assert!(res.converged);
        assert_eq!(res.iterations, 1);
    }

    #[test]
    fn scalar_operators_pull_out() {
        let ms = vec![
            identity(3) * c64(2.0, 0.0),
            identity(3) * c64(0.5, 0.0),
            identity(3) * c64(3.0, 0.0),
        ];
        let inst = ChainInstance::from_matrices(&ms, "x", 0).unwrap();
        for p in [1.0, 2.0, 4.0] {
            let res = maximize_over_swivels(&inst, p, &quick()).unwrap();
            assert!((res.value - 3.0 * 3.0).abs() < 1e-10, "{}", res.value);
        }
    }

    #[test]
    fn result_is_reproducible_and_monotone() {
        let inst = generate(&GenSpec::new(GenKind::Pd, 3, 3, 5)).unwrap().chain().unwrap();
        let res = maximize_over_swivels(&inst, 3.0, &quick()).unwrap();
        let again = chain_norm(&inst, &res.best_swivels, 3.0).unwrap();
        assert!((res.value - again).abs() <= 1e-10 * res.value);
        let max = res.per_restart_values.iter().copied().fold(f64::MIN, f64::max);
        assert_eq!(max, res.value);
        for w in res.history.windows(2) {
            assert!(w[1] >= w[0] * (1.0 - 1e-12), "{:?}", res.history);
        }
        for blocks in &res.best_swivels.blocks {
            for b in blocks {
                assert!(unitarity_residual(b) < 1e-9);
            }
        }
        let res2 = maximize_over_swivels(&inst, 3.0, &quick()).unwrap();
        assert_eq!(res.value.to_bits(), res2.value.to_bits());
    }

    #[test]
    fn commuting_diagonals_stay_at_identity_value() {
        let inst = ChainInstance::from_matrices(&[diag_real(&[1.0, 2.0]), diag_real(&[3.0, 4.0])], "x", 0).unwrap();
        let res = maximize_over_swivels(&inst, 2.0, &quick()).unwrap();
        assert!((res.value - 11.0).abs() < 1e-10);
    }

    #[test]
    fn block_context_matches_full_evaluation() {
        let inst = generate(&GenSpec::new(GenKind::Psd, 3, 3, 8)).unwrap().chain().unwrap();
        let obj = ChainObjective::new(&inst, 2.5).unwrap();
        let sw = SwivelAssignment::random(inst.structures(), 4);
        let full = obj.evaluate(&sw).unwrap();
        for pos in 0..3 {
            for k in 0..inst.structures()[pos].num_blocks() {
                let ctx = obj.block_context(&sw, pos, k).unwrap();
                let m = &ctx.x + &ctx.y * &sw.blocks[pos][k] * &ctx.z;
                let v = schatten_pow(&m, 2.5).unwrap();
                assert!((v - full).abs() < 1e-12 * full);
            }
        }
    }

    #[test]
    fn conjugation_invariance() {
        let base = generate(&GenSpec::new(GenKind::Pd, 2, 2, 21)).unwrap();
        let w = random_unitary(&mut rng_from_seed(77), 2);
        let conj: Vec<ComplexMatrix> = base.matrices.iter().map(|m| &w * m * w.adjoint()).collect();
        let a = maximize_over_swivels(&base.chain().unwrap(), 2.0, &quick()).unwrap();
        let b = maximize_over_swivels(&ChainInstance::from_matrices(&conj, "c", 0).unwrap(), 2.0, &quick()).unwrap();
        assert!((a.value - b.value).abs() <= 1e-7 * a.value);
        assert!(max_abs_entry(&conj[0]) > 0.0);
    }
}

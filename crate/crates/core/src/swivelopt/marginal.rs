//! The tripartite marginal chain
//! `‖ρ_AC^{1/p} V_C ρ_C^{-1/p} ρ_BC^{1/p}‖_p^p` on `A⊗B⊗C`.
//!
//! Marginals come from partial traces; `ρ_AC^{1/p}` is embedded on factors
//! (A, C), `ρ_BC^{1/p}` on (B, C), and `V_C`, `ρ_C^{-1/p}` on C alone. The
//! inverse power is taken on the support of `ρ_C`.

use crate::commutant::{verify_commutation, CommutantStructure, SwivelAssignment};
use crate::error::{Error, Result};
use crate::matcore::{embed, kron, partial_trace, schatten_pow, Complex64, ComplexMatrix, PsdOperator, TensorShape};
use crate::tolerances;

use super::optimizer::{optimize, BlockContext, SwivelObjective};
use super::oracle::{grid_search, PhaseGridConfig, PhaseGridResult};
use super::sweep::{check_grid, worst_pair};
use crate::report::{Diagnostics, Inequality, OptimizerDiagnostics, Status, VerificationReport};
use super::{OptResult, OptimizerConfig};

#[derive(Debug, Clone)]
pub struct MarginalChain {
    rho: PsdOperator,
    shape: TensorShape,
    rho_ac: PsdOperator,
    rho_bc: PsdOperator,
    rho_c: PsdOperator,
    structure: [CommutantStructure; 1],
}

impl MarginalChain {
    pub fn new(rho: PsdOperator, shape: TensorShape) -> Result<Self> {
        if shape.num_factors() != 3 {
            return Err(Error::ShapeMismatch(format!(
                "marginal chain needs three factors, got {:?}",
                shape.factor_dims()
            )));
        }
        if shape.dim() != rho.dim() {
            return Err(Error::ShapeMismatch(format!(
                "tensor shape {:?} has dim {}, operator has dim {}",
                shape.factor_dims(),
                shape.dim(),
                rho.dim()
            )));
        }
        let m = rho.to_matrix();
        let rho_ac = PsdOperator::new(&partial_trace(&m, &shape, &[1])?)?;
        let rho_bc = PsdOperator::new(&partial_trace(&m, &shape, &[0])?)?;
        let rho_c = PsdOperator::new(&partial_trace(&m, &shape, &[0, 1])?)?;
        let structure = [CommutantStructure::of(&rho_c)];
        Ok(Self {
            rho,
            shape,
            rho_ac,
            rho_bc,
            rho_c,
            structure,
        })
    }

    pub fn rho(&self) -> &PsdOperator {
        &self.rho
    }

    pub fn shape(&self) -> &TensorShape {
        &self.shape
    }

    pub fn rho_ac(&self) -> &PsdOperator {
        &self.rho_ac
    }

    pub fn rho_bc(&self) -> &PsdOperator {
        &self.rho_bc
    }

    pub fn rho_c(&self) -> &PsdOperator {
        &self.rho_c
    }

    /// Commutant of `ρ_C`, where `V_C` lives.
    pub fn structure(&self) -> &CommutantStructure {
        &self.structure[0]
    }

    /// The single-position swivel `V_C` for `sw`.
    pub fn swivel_matrix(&self, sw: &SwivelAssignment) -> Result<ComplexMatrix> {
        Ok(sw.assemble(&self.structure)?.remove(0))
    }

    fn lift(&self) -> usize {
        let d = self.shape.factor_dims();
        d[0] * d[1]
    }

    /// `(embed(ρ_AC^{1/p}), embed(ρ_C^{-1/p}) · embed(ρ_BC^{1/p}))`.
    fn outer_factors(&self, p: f64) -> Result<(ComplexMatrix, ComplexMatrix)> {
        let left = embed(&self.rho_ac.real_power(1.0 / p), &self.shape, &[0, 2])?;
        let right = embed(&self.rho_c.real_power(-1.0 / p), &self.shape, &[2])?
            * embed(&self.rho_bc.real_power(1.0 / p), &self.shape, &[1, 2])?;
        Ok((left, right))
    }

    fn product(&self, v_c: &ComplexMatrix, p: f64) -> Result<ComplexMatrix> {
        let (left, right) = self.outer_factors(p)?;
        Ok(left * embed(v_c, &self.shape, &[2])? * right)
    }
}

/// `‖ρ_AC^{1/p} V_C ρ_C^{-1/p} ρ_BC^{1/p}‖_p^p`.
///
/// Any `p >= 1` is evaluated; monotonicity in `p` is only claimed for `p >= 2`.
pub fn marginal_chain_value(chain: &MarginalChain, v_c: &ComplexMatrix, p: f64) -> Result<f64> {
    super::chain::check_p(p)?;
    let residual = verify_commutation(v_c, chain.rho_c())?;
    if residual > tolerances::get().commutation {
        return Err(Error::CommutationViolation(residual));
    }
    schatten_pow(&chain.product(v_c, p)?, p)
}

struct MarginalObjective<'a> {
    chain: &'a MarginalChain,
    p: f64,
    left: ComplexMatrix,
    right: ComplexMatrix,
}

impl<'a> MarginalObjective<'a> {
    fn new(chain: &'a MarginalChain, p: f64) -> Result<Self> {
        super::chain::check_p(p)?;
        let (left, right) = chain.outer_factors(p)?;
        Ok(Self { chain, p, left, right })
    }
}

impl SwivelObjective for MarginalObjective<'_> {
    fn structures(&self) -> &[CommutantStructure] {
        &self.chain.structure
    }

    fn active_positions(&self) -> Vec<usize> {
        vec![0]
    }

    fn exponent(&self) -> f64 {
        self.p
    }

    fn evaluate(&self, swivels: &SwivelAssignment) -> Result<f64> {
        let v = self.chain.swivel_matrix(swivels)?;
        let m = &self.left * embed(&v, &self.chain.shape, &[2])? * &self.right;
        schatten_pow(&m, self.p)
    }

    fn block_context(&self, swivels: &SwivelAssignment, pos: usize, block: usize) -> Result<BlockContext> {
        let v = self.chain.swivel_matrix(swivels)?;
        let basis = &self.chain.structure.get(pos).expect("single position").block_bases()[block];
        let u = &swivels.blocks[pos][block];
        let rest = v - basis * u * basis.adjoint();
        // C is the fastest factor, so an operator on C alone is I_{ab} ⊗ X
        let id = ComplexMatrix::identity(self.chain.lift(), self.chain.lift());
        Ok(BlockContext {
            x: &self.left * kron(&id, &rest) * &self.right,
            y: &self.left * kron(&id, basis),
            z: kron(&id, &basis.adjoint()) * &self.right,
            lift: self.chain.lift(),
        })
    }
}

/// Maximizes over `V_C` in the commutant of `ρ_C` with the chain optimizer.
pub fn marginal_chain_maximize(chain: &MarginalChain, p: f64, cfg: &OptimizerConfig) -> Result<OptResult> {
    let obj = MarginalObjective::new(chain, p)?;
    let mut res = optimize(&obj, cfg)?;
    res.value = marginal_chain_value(chain, &chain.swivel_matrix(&res.best_swivels)?, p)?;
    Ok(res)
}

/// Phase-grid oracle over `V_C = U diag(e^{iφ}) U†` when `ρ_C` has simple
/// spectrum (`c − 1` free phases).
pub fn marginal_phase_grid(chain: &MarginalChain, p: f64, cfg: &PhaseGridConfig) -> Result<PhaseGridResult> {
    super::chain::check_p(p)?;
    let s = chain.structure();
    if let Some(&size) = s.block_sizes().iter().find(|&&m| m > 1) {
        return Err(Error::NonScalarCommutant { operator: 0, size });
    }
    let (left, right) = chain.outer_factors(p)?;
    let u = chain.rho_c().eigenvectors().clone();
    let c = u.nrows();
    let id = ComplexMatrix::identity(chain.lift(), chain.lift());
    let eval = |angles: &[f64]| -> f64 {
        let mut w = u.clone();
        for j in 1..c {
            let mut col = w.column_mut(j);
            col *= Complex64::from_polar(1.0, angles[j - 1]);
        }
        let v = w * u.adjoint();
        let m = &left * kron(&id, &v) * &right;
        schatten_pow(&m, p).unwrap_or(f64::NAN)
    };
    let (value, best, evaluations) = grid_search(c - 1, cfg, eval)?;
    let mut phases = vec![0.0; c];
    phases[1..].copy_from_slice(&best);
    Ok(PhaseGridResult {
        value,
        phases: vec![phases],
        free_phases: c - 1,
        evaluations,
    })
}

#[derive(Debug, Clone)]
pub struct MarginalSweepPoint {
    pub p: f64,
    /// Best over this p's run and every other p's best swivel.
    pub value: f64,
    pub source_p: f64,
    pub restart_spread: f64,
    /// `p >= 2`, where monotonicity is claimed.
    pub in_claimed_range: bool,
}

/// Maximizes at each `p` with cross-seeding between grid points.
pub fn sweep_marginal(chain: &MarginalChain, p_grid: &[f64], cfg: &OptimizerConfig) -> Result<Vec<MarginalSweepPoint>> {
    check_grid(p_grid)?;
    let runs = p_grid
        .iter()
        .map(|&p| marginal_chain_maximize(chain, p, cfg))
        .collect::<Result<Vec<_>>>()?;
    let swivels = runs
        .iter()
        .map(|r| chain.swivel_matrix(&r.best_swivels))
        .collect::<Result<Vec<_>>>()?;
    let mut out = Vec::with_capacity(p_grid.len());
    for (i, &p) in p_grid.iter().enumerate() {
        let mut value = runs[i].value;
        let mut source = i;
        for (j, v) in swivels.iter().enumerate() {
            if j != i {
                let cand = marginal_chain_value(chain, v, p)?;
                if cand > value {
                    value = cand;
                    source = j;
                }
            }
        }
        out.push(MarginalSweepPoint {
            p,
            value,
            source_p: p_grid[source],
            restart_spread: runs[i].restart_spread(),
            in_claimed_range: p >= 2.0,
        });
    }
    Ok(out)
}

/// Monotonicity over the part of `p_grid` with `p >= 2`; smaller `p` are
/// evaluated but only reported in the notes. A rise beyond tolerance is
/// VIOLATED only when the phase-grid oracle (simple `ρ_C` spectrum) confirms it.
pub fn verify_marginal_monotone(
    chain: &MarginalChain,
    p_grid: &[f64],
    cfg: &OptimizerConfig,
    tol: f64,
) -> Result<VerificationReport> {
    let pts = sweep_marginal(chain, p_grid, cfg)?;
    let values: Vec<f64> = pts.iter().map(|s| s.value).collect();
    let claimed: Vec<usize> = (0..pts.len()).filter(|&i| pts[i].in_claimed_range).collect();
    let mut notes = vec!["swivel acts on C and ranges over the commutant of the C marginal".to_string()];
    if claimed.len() < pts.len() {
        notes.push(format!(
            "{} grid point(s) below p = 2 evaluated but not checked",
            pts.len() - claimed.len()
        ));
    }
    let mut opt = OptimizerDiagnostics {
        p_grid: p_grid.to_vec(),
        values: values.clone(),
        restart_spreads: pts.iter().map(|s| s.restart_spread).collect(),
        converged: vec![true; pts.len()],
        oracle_values: None,
        worst_pair: (p_grid[0], p_grid[0]),
    };
    let (lhs, rhs) = match claimed.len() {
        0 => (f64::NAN, f64::NAN),
        1 => (values[claimed[0]], values[claimed[0]]),
        _ => {
            let sub: Vec<f64> = claimed.iter().map(|&i| values[i]).collect();
            let k = worst_pair(&sub);
            opt.worst_pair = (p_grid[claimed[k]], p_grid[claimed[k + 1]]);
            (sub[k + 1], sub[k])
        }
    };
    if claimed.is_empty() {
        notes.push("no grid point with p >= 2".into());
    }
    let mut report = VerificationReport::new(Inequality::Monotone, lhs, rhs, tol, tol * rhs.abs(), Diagnostics::default());
    if report.status == Status::ViolatedBeyondTol {
        report.status = Status::InconclusiveOptimizerGap;
        if chain.structure().is_scalar() {
            let (pa, pb) = opt.worst_pair;
            let grid = PhaseGridConfig::auto(chain.rho_c().dim() - 1);
            let oracle = [pa, pb]
                .iter()
                .map(|&p| marginal_phase_grid(chain, p, &grid).map(|r| r.value))
                .collect::<Result<Vec<_>>>()?;
            if Status::from_slack(oracle[0] - oracle[1], tol, tol * oracle[0].abs()) == Status::ViolatedBeyondTol {
                report.status = Status::ViolatedBeyondTol;
                notes.push(format!("phase-grid oracle confirms the rise: {} -> {}", oracle[0], oracle[1]));
            } else {
                notes.push(format!(
                    "phase-grid oracle does not rise ({} -> {}): optimizer gap",
                    oracle[0], oracle[1]
                ));
            }
            opt.oracle_values = Some(oracle);
        } else {
            notes.push("C marginal has a repeated eigenvalue: no oracle".into());
        }
    }
    report.diagnostics = Diagnostics {
        optimizer: Some(opt),
        notes,
        ..Default::default()
    };
    Ok(report)
}

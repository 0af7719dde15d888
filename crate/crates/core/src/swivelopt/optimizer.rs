//! Blockwise Riemannian ascent over products of block unitaries.
//!
//! Each restart sweeps the chain positions and, for each commutant block,
//! takes one ascent step `U ← U·exp(η Ω)`. `Ω` is the skew-Hermitian tangent
//! gradient from central differences along a real basis of the Lie algebra;
//! `η` grows from the last accepted step of that block and is halved until the
//! objective improves. A restart stops once a full cycle gains less than
//! `conv_tol_rel` relative.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::commutant::{skew_hermitian_basis, CommutantStructure, SwivelAssignment};
use crate::error::{Error, Result};
use crate::matcore::{c64, schatten_pow, unitary_exp, ComplexMatrix};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct OptimizerConfig {
    pub restarts: usize,
    pub max_iters: usize,
    pub step_init: f64,
    pub conv_tol_rel: f64,
    pub seed: u64,
    /// Central-difference step per tangent coordinate.
    #[serde(default = "default_fd_step")]
    pub fd_step: f64,
}

fn default_fd_step() -> f64 {
    1e-5
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            restarts: 8,
            max_iters: 500,
            step_init: 0.1,
            conv_tol_rel: 1e-9,
            seed: 0,
            fd_step: default_fd_step(),
        }
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.restarts == 0 || self.max_iters == 0 {
            return Err(Error::DomainError("restarts and maxIters must be positive".into()));
        }
        for (name, v) in [
            ("stepInit", self.step_init),
            ("convTolRel", self.conv_tol_rel),
            ("fdStep", self.fd_step),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::DomainError(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct OptResult {
    /// Best objective found; attained by `best_swivels`, hence a lower bound
    /// on the true maximum.
    pub value: f64,
    pub best_swivels: SwivelAssignment,
    pub per_restart_values: Vec<f64>,
    /// Whether the winning restart met the convergence test.
    pub converged: bool,
    /// Cycles used by the winning restart.
    pub iterations: usize,
    pub best_restart: usize,
    /// Objective after every cycle of the winning restart (first entry is the start point).
    pub history: Vec<f64>,
}

impl OptResult {
    /// `max − min` over restarts.
    pub fn restart_spread(&self) -> f64 {
        let max = self.per_restart_values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let min = self.per_restart_values.iter().copied().fold(f64::INFINITY, f64::min);
        max - min
    }
}

/// `M(U) = X + Y (I_lift ⊗ U) Z`: the objective's product matrix as a function
/// of a single block, every other block held fixed.
#[derive(Debug, Clone)]
pub(crate) struct BlockContext {
    pub x: ComplexMatrix,
    pub y: ComplexMatrix,
    pub z: ComplexMatrix,
    pub lift: usize,
}

impl BlockContext {
    fn value(&self, u: &ComplexMatrix, p: f64) -> f64 {
        let middle = if self.lift == 1 {
            u.clone()
        } else {
            ComplexMatrix::identity(self.lift, self.lift).kronecker(u)
        };
        let m = &self.x + &self.y * middle * &self.z;
        schatten_pow(&m, p).unwrap_or(f64::NAN)
    }
}

/// An objective `Σ σ_i(M)^p` where `M` depends on a swivel assignment.
pub(crate) trait SwivelObjective: Sync {
    fn structures(&self) -> &[CommutantStructure];
    /// Positions whose swivels can change the value.
    fn active_positions(&self) -> Vec<usize>;
    fn exponent(&self) -> f64;
    fn evaluate(&self, swivels: &SwivelAssignment) -> Result<f64>;
    fn block_context(&self, swivels: &SwivelAssignment, pos: usize, block: usize) -> Result<BlockContext>;
}

struct RestartRun {
    swivels: SwivelAssignment,
    value: f64,
    converged: bool,
    iterations: usize,
    history: Vec<f64>,
}

/// Generator exponentials `exp(±h E_j)` for one block size.
struct FiniteDiffStencil {
    basis: Vec<ComplexMatrix>,
    plus: Vec<ComplexMatrix>,
    minus: Vec<ComplexMatrix>,
}

impl FiniteDiffStencil {
    fn new(m: usize, h: f64) -> Result<Self> {
        let basis = skew_hermitian_basis(m);
        let plus = basis.iter().map(|e| unitary_exp(&(e * c64(h, 0.0)))).collect::<Result<_>>()?;
        let minus = basis.iter().map(|e| unitary_exp(&(e * c64(-h, 0.0)))).collect::<Result<_>>()?;
        Ok(Self { basis, plus, minus })
    }
}

pub(crate) fn optimize<O: SwivelObjective>(obj: &O, cfg: &OptimizerConfig) -> Result<OptResult> {
    cfg.validate()?;
    let runs: Vec<Result<RestartRun>> = (0..cfg.restarts)
        .into_par_iter()
        .map(|r| run_restart(obj, cfg, r))
        .collect();
    let runs = runs.into_iter().collect::<Result<Vec<_>>>()?;

    let mut best = 0;
    for (i, run) in runs.iter().enumerate() {
        if run.value > runs[best].value {
            best = i;
        }
    }
    let per_restart_values = runs.iter().map(|r| r.value).collect();
    let winner = runs.into_iter().nth(best).expect("at least one restart");
    Ok(OptResult {
        value: winner.value,
        best_swivels: winner.swivels,
        per_restart_values,
        converged: winner.converged,
        iterations: winner.iterations,
        best_restart: best,
        history: winner.history,
    })
}

fn run_restart<O: SwivelObjective>(obj: &O, cfg: &OptimizerConfig, restart: usize) -> Result<RestartRun> {
    let structures = obj.structures();
    let p = obj.exponent();
    let mut swivels = if restart == 0 {
        SwivelAssignment::identity(structures)
    } else {
        SwivelAssignment::random(structures, cfg.seed.wrapping_add(restart as u64))
    };
    let positions = obj.active_positions();

    let max_block = structures
        .iter()
        .flat_map(|s| s.block_sizes())
        .max()
        .unwrap_or(1);
    let stencils = (0..=max_block)
        .map(|m| if m == 0 { Ok(None) } else { FiniteDiffStencil::new(m, cfg.fd_step).map(Some) })
        .collect::<Result<Vec<_>>>()?;
    let mut steps: Vec<Vec<f64>> = structures
        .iter()
        .map(|s| vec![cfg.step_init; s.num_blocks()])
        .collect();

    let mut value = obj.evaluate(&swivels)?;
    let mut history = vec![value];
    let mut converged = false;
    let mut iterations = 0;
    while iterations < cfg.max_iters {
        iterations += 1;
        let start = value;
        for &i in &positions {
            for k in 0..structures[i].num_blocks() {
                let ctx = obj.block_context(&swivels, i, k)?;
                let u = swivels.blocks[i][k].clone();
                let stencil = stencils[u.nrows()].as_ref().expect("non-empty block");
                if let Some((next, eta)) = ascent_step(&ctx, &u, p, stencil, cfg.fd_step, steps[i][k])? {
                    swivels.blocks[i][k] = next;
                    steps[i][k] = eta;
                }
            }
        }
        value = obj.evaluate(&swivels)?;
        history.push(value);
        if value - start <= cfg.conv_tol_rel * value.abs().max(f64::MIN_POSITIVE) {
            converged = true;
            break;
        }
    }
    Ok(RestartRun {
        swivels,
        value,
        converged,
        iterations,
        history,
    })
}

/// One backtracking ascent step on a single block. Returns the new block and
/// the accepted step length, or `None` if no improving step was found.
fn ascent_step(
    ctx: &BlockContext,
    u: &ComplexMatrix,
    p: f64,
    stencil: &FiniteDiffStencil,
    h: f64,
    last_eta: f64,
) -> Result<Option<(ComplexMatrix, f64)>> {
    let base = ctx.value(u, p);
    let m = u.nrows();
    let mut omega = ComplexMatrix::zeros(m, m);
    let mut gnorm2 = 0.0;
    for ((e, plus), minus) in stencil.basis.iter().zip(&stencil.plus).zip(&stencil.minus) {
        let g = (ctx.value(&(u * plus), p) - ctx.value(&(u * minus), p)) / (2.0 * h);
        omega += e * c64(g, 0.0);
        gnorm2 += g * g;
    }
    let gnorm = gnorm2.sqrt();
    // below this the difference quotient is rounding noise
    if !(gnorm > 1e-10 * base.abs().max(f64::MIN_POSITIVE)) {
        return Ok(None);
    }
    let mut eta = (2.0 * last_eta).min(std::f64::consts::PI / gnorm);
    for _ in 0..60 {
        let cand = u * unitary_exp(&(&omega * c64(eta, 0.0)))?;
        if ctx.value(&cand, p) > base {
            return Ok(Some((cand, eta)));
        }
        eta *= 0.5;
    }
    Ok(None)
}

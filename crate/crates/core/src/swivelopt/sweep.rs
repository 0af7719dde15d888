use crate::commutant::SwivelAssignment;
use crate::error::{Error, Result};
use crate::report::{Diagnostics, Inequality, OptimizerDiagnostics, Status, VerificationReport};

use super::oracle::{free_phase_count, phase_grid_search, PhaseGridConfig};
use super::{chain_norm, maximize_over_swivels, ChainInstance, OptResult, OptimizerConfig};

pub const DEFAULT_P_GRID: [f64; 8] = [1.0, 1.5, 2.0, 3.0, 4.0, 6.0, 8.0, 12.0];

#[derive(Debug, Clone)]
pub struct SweepPoint {
    pub p: f64,
    /// Best value over this p's own run and every other p's best swivels.
    pub value: f64,
    pub swivels: SwivelAssignment,
    /// The p whose optimizer run produced `swivels`.
    pub source_p: f64,
    pub result: OptResult,
}

impl SweepPoint {
    pub fn restart_spread(&self) -> f64 {
        self.result.restart_spread()
    }
}

pub(crate) fn check_grid(p_grid: &[f64]) -> Result<()> {
    if p_grid.is_empty() {
        return Err(Error::DomainError("empty p grid".into()));
    }
    for &p in p_grid {
        super::chain::check_p(p)?;
    }
    if p_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::DomainError(format!("p grid must be strictly ascending: {p_grid:?}")));
    }
    Ok(())
}

/// Maximizes at every `p`, then re-evaluates every run's best swivels at every
/// other `p` and keeps the best candidate per `p`.
pub fn sweep_p(inst: &ChainInstance, p_grid: &[f64], cfg: &OptimizerConfig) -> Result<Vec<SweepPoint>> {
    check_grid(p_grid)?;
    let runs = p_grid
        .iter()
        .map(|&p| maximize_over_swivels(inst, p, cfg))
        .collect::<Result<Vec<_>>>()?;
    let mut out = Vec::with_capacity(p_grid.len());
    for (i, &p) in p_grid.iter().enumerate() {
        let mut value = runs[i].value;
        let mut source = i;
        for (j, other) in runs.iter().enumerate() {
            if j == i {
                continue;
            }
            let v = chain_norm(inst, &other.best_swivels, p)?;
            if v > value {
                value = v;
                source = j;
            }
        }
        out.push(SweepPoint {
            p,
            value,
            swivels: runs[source].best_swivels.clone(),
            source_p: p_grid[source],
            result: runs[i].clone(),
        });
    }
    Ok(out)
}

/// First adjacent pair whose value rises by more than `tol_rel` (relative to
/// the earlier value): returns `(k, rise)` for `values[k] → values[k+1]`.
pub fn first_increase(values: &[f64], tol_rel: f64) -> Option<(usize, f64)> {
    values.windows(2).enumerate().find_map(|(k, w)| {
        let rise = w[1] - w[0];
        (rise > tol_rel * w[0].abs().max(f64::MIN_POSITIVE)).then_some((k, rise))
    })
}

/// Index `k` of the adjacent pair `values[k] → values[k+1]` with the largest
/// rise (smallest slack `values[k] − values[k+1]`).
pub(crate) fn worst_pair(values: &[f64]) -> usize {
    let mut k = 0;
    for j in 1..values.len().saturating_sub(1) {
        if values[j + 1] - values[j] > values[k + 1] - values[k] {
            k = j;
        }
    }
    k
}

/// Whether the phase-grid oracle applies: torus commutants, `n <= 3`, `L <= 3`.
pub fn oracle_applicable(inst: &ChainInstance) -> bool {
    inst.has_scalar_commutants() && inst.dim() <= 3 && inst.len() <= 3
}

/// Sweeps `p` and checks that the maximized value never rises.
///
/// lhs/rhs are the later/earlier value of the worst adjacent pair. HOLDS iff
/// `slack >= −tol·(1 + |rhs|)`. A larger rise is VIOLATED only when the
/// phase-grid oracle confirms it; otherwise (no oracle, or the oracle curve is
/// fine) the optimizer is blamed and the result is INCONCLUSIVE.
pub fn verify_monotone(
    inst: &ChainInstance,
    p_grid: &[f64],
    cfg: &OptimizerConfig,
    tol: f64,
) -> Result<VerificationReport> {
    let pts = sweep_p(inst, p_grid, cfg)?;
    let values: Vec<f64> = pts.iter().map(|s| s.value).collect();
    let mut opt = OptimizerDiagnostics {
        p_grid: p_grid.to_vec(),
        values: values.clone(),
        restart_spreads: pts.iter().map(SweepPoint::restart_spread).collect(),
        converged: pts.iter().map(|s| s.result.converged).collect(),
        oracle_values: None,
        worst_pair: (p_grid[0], p_grid[0]),
    };
    let mut notes = vec!["swivels range over the full block-unitary commutant group".to_string()];
    let (lhs, rhs) = if values.len() < 2 {
        (values[0], values[0])
    } else {
        let k = worst_pair(&values);
        opt.worst_pair = (p_grid[k], p_grid[k + 1]);
        (values[k + 1], values[k])
    };
    let mut report = VerificationReport::new(Inequality::Monotone, lhs, rhs, tol, tol * rhs.abs(), Diagnostics::default());
    if report.status != Status::Holds {
        report.status = Status::InconclusiveOptimizerGap;
        if oracle_applicable(inst) {
            let grid = PhaseGridConfig::auto(free_phase_count(inst));
            let (pa, pb) = opt.worst_pair;
            let oracle = [pa, pb]
                .iter()
                .map(|&p| phase_grid_search(inst, p, &grid).map(|r| r.value))
                .collect::<Result<Vec<_>>>()?;
            let oracle_slack = oracle[0] - oracle[1];
            if Status::from_slack(oracle_slack, tol, tol * oracle[0].abs()) == Status::ViolatedBeyondTol {
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
            notes.push("no oracle for this instance class: optimizer gap or violation".into());
        }
    }
    report.diagnostics = Diagnostics {
        optimizer: Some(opt),
        clamp_count: inst.operators().iter().map(|c| c.clamped()).sum(),
        notes,
        ..Default::default()
    };
    Ok(report)
}

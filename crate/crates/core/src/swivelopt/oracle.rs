//! Exhaustive phase-grid oracle for chains whose commutants are tori.
//!
//! When every eigenvalue of `C_i` is simple, `V_i = U_i D_i U_i†` with `D_i` a
//! diagonal of phases, and
//!
//! ```text
//! C_1^{1/p} V_1 ⋯ C_L^{1/p} V_L  ≅  Λ_1 D_1 (U_1†U_2) Λ_2 D_2 ⋯ (U_{L-1}†U_L) Λ_L
//! ```
//!
//! up to unitaries on either side (`Λ_i = diag(λ^{1/p})`). One phase per
//! operator is a global phase and `D_L` drops out, leaving `(L−1)(n−1)` free
//! angles. This path never assembles swivels and never differentiates, so it
//! is independent of the optimizer.

use std::f64::consts::TAU;

use crate::commutant::SwivelAssignment;
use crate::error::{Error, Result};
use crate::matcore::{singular_values, Complex64, ComplexMatrix};

use super::ChainInstance;

pub const DEFAULT_GRID_BUDGET: u128 = 20_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct PhaseGridConfig {
    /// Samples per free phase on the full `[0, 2π)` grid.
    pub points: usize,
    /// Local zoom passes run from the best grid points; 0 disables zooming.
    pub zoom_levels: usize,
    /// How many of the best grid points are zoomed.
    pub candidates: usize,
    /// Upper bound on the number of objective evaluations.
    pub budget: u128,
}

impl PhaseGridConfig {
    pub fn grid(points: usize) -> Self {
        Self {
            points,
            zoom_levels: 0,
            candidates: 1,
            budget: DEFAULT_GRID_BUDGET,
        }
    }

    /// Refined search whose full grid stays near 2·10⁵ points for `free_phases`
    /// dimensions (between 8 and 720 samples per phase).
    pub fn auto(free_phases: usize) -> Self {
        let per = if free_phases == 0 {
            1.0
        } else {
            2e5f64.powf(1.0 / free_phases as f64).floor()
        };
        Self::refined(per.clamp(8.0, 720.0) as usize)
    }

    /// Full grid followed by zooming on the `candidates` best points until the
    /// local step falls below ~1e-10 rad.
    pub fn refined(points: usize) -> Self {
        Self {
            points,
            zoom_levels: 80,
            candidates: 4,
            budget: DEFAULT_GRID_BUDGET,
        }
    }
}

#[derive(Debug, Clone)]
pub struct PhaseGridResult {
    pub value: f64,
    /// Maximizing phases per chain position, one per eigenvector; the first
    /// entry and the whole trailing position are 0.
    pub phases: Vec<Vec<f64>>,
    pub free_phases: usize,
    pub evaluations: u64,
}

impl PhaseGridResult {
    /// The maximizing phases as 1×1 swivel blocks.
    pub fn swivels(&self) -> SwivelAssignment {
        SwivelAssignment {
            blocks: self
                .phases
                .iter()
                .map(|ph| {
                    ph.iter()
                        .map(|&a| ComplexMatrix::from_element(1, 1, Complex64::from_polar(1.0, a)))
                        .collect()
                })
                .collect(),
        }
    }
}

/// Plain exhaustive grid with `grid_points` samples per free phase.
pub fn brute_force_phase_grid(inst: &ChainInstance, p: f64, grid_points: usize) -> Result<PhaseGridResult> {
    phase_grid_search(inst, p, &PhaseGridConfig::grid(grid_points))
}

/// `(L−1)(n−1)`, the number of angles the oracle searches.
pub fn free_phase_count(inst: &ChainInstance) -> usize {
    (inst.len() - 1) * (inst.dim() - 1)
}

pub fn phase_grid_search(inst: &ChainInstance, p: f64, cfg: &PhaseGridConfig) -> Result<PhaseGridResult> {
    super::chain::check_p(p)?;
    for (i, s) in inst.structures().iter().enumerate() {
        if let Some(&size) = s.block_sizes().iter().find(|&&m| m > 1) {
            return Err(Error::NonScalarCommutant { operator: i, size });
        }
    }
    let n = inst.dim();
    let l = inst.len();
    let ops = inst.operators();
    let scaled: Vec<ComplexMatrix> = ops
        .iter()
        .map(|c| {
            let mut w = c.eigenvectors().clone();
            for (j, &lam) in c.eigenvalues().iter().enumerate() {
                let s = if c.in_support(lam) { lam.powf(1.0 / p) } else { 0.0 };
                let mut col = w.column_mut(j);
                col *= Complex64::new(s, 0.0);
            }
            w
        })
        .collect();
    // W_1 = Λ_1 (in the eigenbasis of C_1), W_i = U_{i-1}† U_i Λ_i
    let mut links = Vec::with_capacity(l);
    links.push(ops[0].eigenvectors().adjoint() * &scaled[0]);
    for i in 1..l {
        links.push(ops[i - 1].eigenvectors().adjoint() * &scaled[i]);
    }

    let dims = (l - 1) * (n - 1);
    let eval = |angles: &[f64]| -> f64 {
        let mut m = links[0].clone();
        for i in 1..l {
            for j in 1..n {
                let a = angles[(i - 1) * (n - 1) + (j - 1)];
                let mut col = m.column_mut(j);
                col *= Complex64::from_polar(1.0, a);
            }
            m *= &links[i];
        }
        singular_values(&m)
            .map(|s| s.iter().map(|v| v.powf(p)).sum())
            .unwrap_or(f64::NAN)
    };
    let (value, best, evaluations) = grid_search(dims, cfg, eval)?;

    let mut phases = vec![vec![0.0; n]; l];
    for i in 0..l.saturating_sub(1) {
        for j in 1..n {
            phases[i][j] = best[i * (n - 1) + (j - 1)];
        }
    }
    Ok(PhaseGridResult {
        value,
        phases,
        free_phases: dims,
        evaluations,
    })
}

const ZOOM_RADIUS: i64 = 2;
const MIN_ZOOM_STEP: f64 = 1e-10;

/// Exhaustive grid over `[0, 2π)^dims`, then pattern-search zooming.
pub(crate) fn grid_search(
    dims: usize,
    cfg: &PhaseGridConfig,
    eval: impl Fn(&[f64]) -> f64,
) -> Result<(f64, Vec<f64>, u64)> {
    if cfg.points == 0 {
        return Err(Error::DomainError("phase grid needs at least one point".into()));
    }
    if dims == 0 {
        return Ok((eval(&[]), Vec::new(), 1));
    }
    let full = (cfg.points as u128).checked_pow(dims as u32).unwrap_or(u128::MAX);
    let zoom_side = (2 * ZOOM_RADIUS + 1) as u128;
    let per_level = zoom_side.checked_pow(dims as u32).unwrap_or(u128::MAX);
    let zoom_total = per_level
        .saturating_mul(cfg.zoom_levels as u128)
        .saturating_mul(cfg.candidates.max(1) as u128);
    let total = full.saturating_add(zoom_total);
    if total > cfg.budget {
        return Err(Error::GridTooLarge {
            points: total,
            budget: cfg.budget,
        });
    }

    let step = TAU / cfg.points as f64;
    let keep = cfg.candidates.max(1);
    let mut top: Vec<(f64, Vec<f64>)> = Vec::with_capacity(keep + 1);
    let mut idx = vec![0usize; dims];
    let mut angles = vec![0.0; dims];
    let mut evaluations = 0u64;
    loop {
        for (a, &i) in angles.iter_mut().zip(&idx) {
            *a = i as f64 * step;
        }
        let v = eval(&angles);
        evaluations += 1;
        if top.len() < keep || v > top[top.len() - 1].0 {
            let at = top.iter().position(|(tv, _)| v > *tv).unwrap_or(top.len());
            top.insert(at, (v, angles.clone()));
            top.truncate(keep);
        }
        // odometer increment
        let mut d = 0;
        loop {
            idx[d] += 1;
            if idx[d] < cfg.points {
                break;
            }
            idx[d] = 0;
            d += 1;
            if d == dims {
                break;
            }
        }
        if d == dims {
            break;
        }
    }

    let (mut best_v, mut best_x) = top[0].clone();
    if cfg.zoom_levels > 0 {
        for (v0, x0) in top {
            let (v, x, evals) = zoom(dims, v0, x0, step, cfg.zoom_levels, &eval);
            evaluations += evals;
            if v > best_v {
                best_v = v;
                best_x = x;
            }
        }
    }
    for a in &mut best_x {
        *a = a.rem_euclid(TAU);
    }
    Ok((best_v, best_x, evaluations))
}

/// Evaluates the `(2r+1)^dims` stencil around the incumbent; the step halves
/// whenever the best stencil point is interior, otherwise the window recentres.
fn zoom(
    dims: usize,
    mut best_v: f64,
    mut center: Vec<f64>,
    mut step: f64,
    levels: usize,
    eval: &impl Fn(&[f64]) -> f64,
) -> (f64, Vec<f64>, u64) {
    let side = (2 * ZOOM_RADIUS + 1) as usize;
    let mut evaluations = 0u64;
    let mut offs = vec![0usize; dims];
    let mut x = vec![0.0; dims];
    for _ in 0..levels {
        if step < MIN_ZOOM_STEP {
            break;
        }
        let mut level_best: Option<(f64, Vec<usize>)> = None;
        offs.iter_mut().for_each(|o| *o = 0);
        loop {
            for k in 0..dims {
                x[k] = center[k] + (offs[k] as i64 - ZOOM_RADIUS) as f64 * step;
            }
            let v = eval(&x);
            evaluations += 1;
            if level_best.as_ref().is_none_or(|(bv, _)| v > *bv) {
                level_best = Some((v, offs.clone()));
            }
            let mut d = 0;
            loop {
                offs[d] += 1;
                if offs[d] < side {
                    break;
                }
                offs[d] = 0;
                d += 1;
                if d == dims {
                    break;
                }
            }
            if d == dims {
                break;
            }
        }
        let (v, o) = level_best.expect("stencil is non-empty");
        let on_edge = o.iter().any(|&k| k == 0 || k == side - 1);
        if v > best_v {
            best_v = v;
            for k in 0..dims {
                center[k] += (o[k] as i64 - ZOOM_RADIUS) as f64 * step;
            }
            if !on_edge {
                step *= 0.5;
            }
        } else {
            step *= 0.5;
        }
    }
    (best_v, center, evaluations)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instgen::random::{random_psd, rng_from_seed};
    use crate::matcore::{diag_real, identity};
    use crate::swivelopt::chain_norm;

    fn chain(ms: Vec<ComplexMatrix>) -> ChainInstance {
        ChainInstance::from_matrices(&ms, "t", 0).unwrap()
    }

    #[test]
    fn single_operator_is_trace() {
        let inst = chain(vec![random_psd(&mut rng_from_seed(1), 3)]);
        let r = brute_force_phase_grid(&inst, 2.0, 10).unwrap();
        assert_eq!(r.free_phases, 0);
        assert!((r.value - inst.operators()[0].trace()).abs() < 1e-10);
    }

    #[test]
    fn commuting_diagonals_are_flat() {
        let inst = chain(vec![diag_real(&[1.0, 2.0]), diag_real(&[3.0, 4.0])]);
        let r = brute_force_phase_grid(&inst, 3.0, 36).unwrap();
        assert!((r.value - 11.0).abs() < 1e-10);
    }

    #[test]
    fn grid_value_is_attained_by_its_swivels() {
        let mut rng = rng_from_seed(2);
        let inst = chain(vec![random_psd(&mut rng, 3), random_psd(&mut rng, 3), random_psd(&mut rng, 3)]);
        let r = phase_grid_search(&inst, 2.5, &PhaseGridConfig::refined(12)).unwrap();
        let v = chain_norm(&inst, &r.swivels(), 2.5).unwrap();
        assert!((v - r.value).abs() < 1e-10 * v);
    }

    #[test]
    fn resolutions_agree_after_zoom() {
        let mut rng = rng_from_seed(3);
        let inst = chain(vec![random_psd(&mut rng, 2), random_psd(&mut rng, 2)]);
        for p in [2.0, 4.0] {
            let coarse = brute_force_phase_grid(&inst, p, 720).unwrap();
            let fine = brute_force_phase_grid(&inst, p, 1440).unwrap();
            assert!((coarse.value - fine.value).abs() <= 1e-5 * fine.value);
            let zoomed = phase_grid_search(&inst, p, &PhaseGridConfig::refined(720)).unwrap();
            assert!(zoomed.value >= fine.value * (1.0 - 1e-12));
        }
    }

    #[test]
    fn guards() {
        let inst = chain(vec![identity(2), random_psd(&mut rng_from_seed(4), 2)]);
        assert!(matches!(
            brute_force_phase_grid(&inst, 2.0, 10),
            Err(Error::NonScalarCommutant { operator: 0, size: 2 })
        ));
        let mut rng = rng_from_seed(5);
        let big = chain((0..4).map(|_| random_psd(&mut rng, 4)).collect());
        assert!(matches!(
            brute_force_phase_grid(&big, 2.0, 100),
            Err(Error::GridTooLarge { .. })
        ));
    }
}

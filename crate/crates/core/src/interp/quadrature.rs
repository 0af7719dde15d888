//! Composite Gauss–Legendre quadrature of `w(t) f(t)` over `[−T, T]` with
//! panels graded to the width of the weight's central peak.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::density::Weight;
use crate::error::{Error, Result};
use crate::report::QuadratureDiagnostics;

/// Gauss–Legendre nodes and weights on `[−1, 1]` by Newton iteration on the
/// three-term recurrence.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = nf * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    if n % 2 == 1 {
        x[n / 2] = 0.0;
    }
    (x, w)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct QuadratureConfig {
    /// Truncation `T`; `None` picks the smallest `T` whose certified tail
    /// bound is at most `tail_eps`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub half_width: Option<f64>,
    /// Every graded panel is cut into this many equal panels.
    pub panels: usize,
    pub nodes_per_panel: usize,
    pub tail_eps: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            half_width: None,
            panels: 1,
            nodes_per_panel: 32,
            tail_eps: 1e-10,
        }
    }
}

impl QuadratureConfig {
    /// Same rule with every panel split in two.
    pub fn doubled(&self) -> Self {
        Self {
            panels: self.panels * 2,
            ..self.clone()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.panels == 0 || self.nodes_per_panel < 2 || !self.nodes_per_panel.is_multiple_of(2) {
            return Err(Error::DomainError(format!(
                "quadrature needs panels >= 1 and an even nodesPerPanel >= 2, got {} and {}",
                self.panels, self.nodes_per_panel
            )));
        }
        if !(self.tail_eps > 0.0) {
            return Err(Error::DomainError(format!("tailEps must be positive, got {}", self.tail_eps)));
        }
        if let Some(t) = self.half_width {
            if !(t > 0.0 && t.is_finite()) {
                return Err(Error::DomainError(format!("halfWidth must be positive, got {t}")));
            }
        }
        Ok(())
    }
}

const MAX_PANEL_WIDTH: f64 = 0.5;

/// Breakpoints of `[0, T]`: the first panel is the weight's peak width, each
/// next one 1.5× wider up to `max_width`.
fn graded_breakpoints(first: f64, max_width: f64, half_width: f64) -> Vec<f64> {
    let mut out = vec![0.0];
    let mut h = first.min(max_width);
    let mut x = 0.0;
    while x < half_width {
        x = (x + h).min(half_width);
        if half_width - x < 0.25 * h {
            x = half_width;
        }
        out.push(x);
        h = (h * 1.5).min(max_width);
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    /// `|full − half-order|` summed over panels, plus `tail_bound`.
    pub error_estimate: f64,
    pub tail_bound: f64,
    pub tail_certified: bool,
    pub half_width: f64,
    pub panels: usize,
    pub evaluations: usize,
}

impl QuadResult {
    pub fn diagnostics(&self) -> QuadratureDiagnostics {
        QuadratureDiagnostics {
            error_estimate: self.error_estimate,
            tail_bound: self.tail_bound,
            tail_certified: self.tail_certified,
            half_width: self.half_width,
            panels: self.panels,
            evaluations: self.evaluations,
        }
    }
}

/// Integrand bound `|f| <= bound` used for the tail, and whether it is proven.
#[derive(Debug, Clone, Copy)]
pub struct TailBound {
    pub bound: f64,
    pub certified: bool,
}

/// `∫_{−T}^{T} w(t) f(t) dt` with a per-panel embedded error estimate
/// (full rule against half-order rule) and the tail bound `2·bound·mass(T)`.
///
/// `f` is evaluated at every node concurrently; the sum runs in node order.
/// `feature_width` caps the panel width for integrands that oscillate.
pub fn integrate<F>(w: Weight, f: F, tail: TailBound, feature_width: f64, cfg: &QuadratureConfig) -> Result<QuadResult>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    cfg.validate()?;
    w.validate()?;
    let half_width = cfg
        .half_width
        .unwrap_or_else(|| w.half_width_for(tail.bound, cfg.tail_eps));
    let max_width = MAX_PANEL_WIDTH.min(feature_width.max(1e-3));
    let right = graded_breakpoints(w.scale().max(1e-6), max_width, half_width);
    let mut edges: Vec<f64> = right.iter().rev().map(|x| -x).collect();
    edges.extend_from_slice(&right[1..]);
    let mut panels = Vec::with_capacity((edges.len() - 1) * cfg.panels);
    for e in edges.windows(2) {
        let h = (e[1] - e[0]) / cfg.panels as f64;
        for k in 0..cfg.panels {
            let a = e[0] + k as f64 * h;
            let b = if k + 1 == cfg.panels { e[1] } else { a + h };
            panels.push((a, b));
        }
    }

    let (x_hi, w_hi) = gauss_legendre(cfg.nodes_per_panel);
    let (x_lo, w_lo) = gauss_legendre(cfg.nodes_per_panel / 2);
    let mut nodes = Vec::with_capacity(panels.len() * (x_hi.len() + x_lo.len()));
    for &(a, b) in &panels {
        let (mid, rad) = (0.5 * (a + b), 0.5 * (b - a));
        nodes.extend(x_hi.iter().map(|x| mid + rad * x));
        nodes.extend(x_lo.iter().map(|x| mid + rad * x));
    }
    let values: Vec<Result<f64>> = nodes.par_iter().map(|&t| Ok(w.eval(t) * f(t)?)).collect();
    let values = values.into_iter().collect::<Result<Vec<_>>>()?;

    let per_panel = x_hi.len() + x_lo.len();
    let mut value = 0.0;
    let mut err = 0.0;
    for (j, &(a, b)) in panels.iter().enumerate() {
        let rad = 0.5 * (b - a);
        let vals = &values[j * per_panel..(j + 1) * per_panel];
        let hi: f64 = w_hi.iter().zip(&vals[..x_hi.len()]).map(|(w, v)| w * v).sum::<f64>() * rad;
        let lo: f64 = w_lo.iter().zip(&vals[x_hi.len()..]).map(|(w, v)| w * v).sum::<f64>() * rad;
        value += hi;
        err += (hi - lo).abs();
    }
    let tail_bound = 2.0 * tail.bound * w.tail_mass(half_width);
    Ok(QuadResult {
        value,
        error_estimate: err + tail_bound,
        tail_bound,
        tail_certified: tail.certified,
        half_width,
        panels: panels.len(),
        evaluations: nodes.len(),
    })
}

/// `∫_ℝ w` with the same rule (the integrand is 1).
pub fn total_mass(w: Weight, cfg: &QuadratureConfig) -> Result<QuadResult> {
    integrate(
        w,
        |_| Ok(1.0),
        TailBound {
            bound: 1.0,
            certified: true,
        },
        f64::INFINITY,
        cfg,
    )
}

//! The interpolation weights `α_θ`, `β_θ` on the real line and the `θ → 0`
//! limit `β_0`.
//!
//! `cosh x ∓ cos y` is evaluated as `2 sinh²(x/2) + 2 sin²(y/2)` (resp.
//! `cos²`), which stays accurate when `θ` is near an endpoint and the two
//! terms nearly cancel at `t = 0`.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

fn check_theta(theta: f64) -> Result<()> {
    if theta > 0.0 && theta < 1.0 {
        Ok(())
    } else {
        Err(Error::DomainError(format!("theta must lie in (0, 1), got {theta}")))
    }
}

fn sinh_sq_half(t: f64) -> f64 {
    let s = (FRAC_PI_2 * t).sinh();
    s * s
}

/// `sin(πθ) / (2(1−θ)[cosh(πt) − cos(πθ)])`.
pub fn alpha_density(theta: f64, t: f64) -> Result<f64> {
    check_theta(theta)?;
    let s = (FRAC_PI_2 * theta).sin();
    let denom = 2.0 * (sinh_sq_half(t) + s * s);
    Ok((PI * theta).sin() / (2.0 * (1.0 - theta) * denom))
}

/// `sin(πθ) / (2θ[cosh(πt) + cos(πθ)])`.
pub fn beta_density(theta: f64, t: f64) -> Result<f64> {
    check_theta(theta)?;
    let c = (FRAC_PI_2 * theta).cos();
    let denom = 2.0 * (sinh_sq_half(t) + c * c);
    Ok((PI * theta).sin() / (2.0 * theta * denom))
}

/// `π / (2[cosh(πt) + 1])`, the pointwise limit of `β_θ` as `θ ↓ 0`.
pub fn beta_zero_density(t: f64) -> f64 {
    let c = (FRAC_PI_2 * t).cosh();
    PI / (4.0 * c * c)
}

/// `θ = q/p`, remembering the pair it came from. `θ = 0` is the `β_0` limit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct DensityParams {
    pub theta: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub derived_from: Option<(f64, f64)>,
}

impl DensityParams {
    pub fn new(theta: f64) -> Result<Self> {
        if theta == 0.0 {
            return Ok(Self::limit());
        }
        check_theta(theta)?;
        Ok(Self {
            theta,
            derived_from: None,
        })
    }

    /// Requires `1 <= q < p`.
    pub fn from_pq(p: f64, q: f64) -> Result<Self> {
        if !(q >= 1.0 && q < p && p.is_finite()) {
            return Err(Error::DomainError(format!("need 1 <= q < p, got p = {p}, q = {q}")));
        }
        Ok(Self {
            theta: q / p,
            derived_from: Some((p, q)),
        })
    }

    pub fn limit() -> Self {
        Self {
            theta: 0.0,
            derived_from: None,
        }
    }

    /// The `β` weight at this `θ` (`β_0` at the limit).
    pub fn beta(&self) -> Weight {
        if self.theta == 0.0 {
            Weight::BetaZero
        } else {
            Weight::Beta(self.theta)
        }
    }
}

/// A density on ℝ together with what the quadrature needs to know about it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Weight {
    Alpha(f64),
    Beta(f64),
    BetaZero,
}

impl Weight {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Weight::Alpha(th) | Weight::Beta(th) => check_theta(th),
            Weight::BetaZero => Ok(()),
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        match *self {
            Weight::Alpha(th) => alpha_density(th, t).unwrap_or(f64::NAN),
            Weight::Beta(th) => beta_density(th, t).unwrap_or(f64::NAN),
            Weight::BetaZero => beta_zero_density(t),
        }
    }

    /// `δ` in `cosh(πt) − 1 + δ`, the denominator's offset at `t = 0`.
    fn offset(&self) -> f64 {
        match *self {
            Weight::Alpha(th) => 2.0 * (FRAC_PI_2 * th).sin().powi(2),
            Weight::Beta(th) => 2.0 * (FRAC_PI_2 * th).cos().powi(2),
            Weight::BetaZero => 2.0,
        }
    }

    /// Half-width of the central peak: `cosh(πt) − 1 ≈ (πt)²/2` reaches `δ`
    /// at `t = √(2δ)/π`.
    pub fn scale(&self) -> f64 {
        (2.0 * self.offset()).sqrt() / PI
    }

    /// Upper bound on `∫_T^∞ w(t) dt` (equal to the mass on `(−∞, −T]`).
    ///
    /// With `c = ±cos(πθ)`, `cosh(πt) + c >= min(1, 1 + c)·e^{πt}/2`, which
    /// gives `K/min(1, 1+c) · (2/π) e^{−πT}` for prefactor `K`.
    pub fn tail_mass(&self, half_width: f64) -> f64 {
        let decay = (2.0 / PI) * (-PI * half_width).exp();
        match *self {
            Weight::Alpha(th) => {
                let c = -(PI * th).cos();
                (PI * th).sin() / (2.0 * (1.0 - th) * (1.0 + c).min(1.0)) * decay
            }
            Weight::Beta(th) => {
                let c = (PI * th).cos();
                (PI * th).sin() / (2.0 * th * (1.0 + c).min(1.0)) * decay
            }
            Weight::BetaZero => PI / 2.0 * decay,
        }
    }

    /// Smallest `T >= 1` with `2·bound·tail_mass(T) <= eps`.
    pub fn half_width_for(&self, bound: f64, eps: f64) -> f64 {
        let k = self.tail_mass(0.0);
        let need = 2.0 * bound.max(1.0) * k / eps;
        (need.ln() / PI).max(1.0)
    }
}

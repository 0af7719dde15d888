use std::fmt;

use serde::{Deserialize, Serialize};

use super::ComplexMatrix;
use crate::error::{Error, Result};

const SVD_MAX_ITERS: usize = 10_000;

/// Schatten exponent: a finite `p >= 1` or the operator norm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum SchattenP {
    Finite(f64),
    Infinity,
}

impl SchattenP {
    pub fn finite(p: f64) -> Result<Self> {
        if p.is_nan() || p < 1.0 {
            return Err(Error::InvalidExponent(p));
        }
        if p.is_infinite() {
            return Ok(SchattenP::Infinity);
        }
        Ok(SchattenP::Finite(p))
    }
}

impl fmt::Display for SchattenP {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SchattenP::Finite(p) => write!(f, "{p}"),
            SchattenP::Infinity => write!(f, "inf"),
        }
    }
}

/// Singular values in descending order, `min(rows, cols)` of them.
pub fn singular_values(x: &ComplexMatrix) -> Result<Vec<f64>> {
    if x.nrows() == 0 || x.ncols() == 0 {
        return Ok(Vec::new());
    }
    let svd = nalgebra::linalg::SVD::try_new(x.clone(), false, false, f64::EPSILON, SVD_MAX_ITERS)
        .ok_or(Error::SvdFailure)?;
    let mut s: Vec<f64> = svd.singular_values.iter().copied().collect();
    if s.iter().any(|v| !v.is_finite()) {
        return Err(Error::SvdFailure);
    }
    s.sort_by(|a, b| b.total_cmp(a));
    Ok(s)
}

/// `‖X‖_p`.
pub fn schatten_norm(x: &ComplexMatrix, p: SchattenP) -> Result<f64> {
    let s = singular_values(x)?;
    let smax = s.first().copied().unwrap_or(0.0);
    match p {
        SchattenP::Infinity => Ok(smax),
        SchattenP::Finite(p) => {
            if p.is_nan() || p < 1.0 {
                return Err(Error::InvalidExponent(p));
            }
            if smax == 0.0 {
                return Ok(0.0);
            }
            let sum: f64 = s.iter().map(|&v| (v / smax).powf(p)).sum();
            Ok(smax * sum.powf(1.0 / p))
        }
    }
}

/// `‖X‖_p^p = Σ σ_i^p`, without the final root.
pub fn schatten_pow(x: &ComplexMatrix, p: f64) -> Result<f64> {
    if p.is_nan() || p < 1.0 || p.is_infinite() {
        return Err(Error::InvalidExponent(p));
    }
    Ok(singular_values(x)?.iter().map(|&v| v.powf(p)).sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instgen::random::{random_complex_gaussian, random_unitary, rng_from_seed};
    use crate::matcore::{diag_real, frobenius, hermitian_eigen, identity};

    #[test]
    fn identity_norms() {
        let i4 = identity(4);
        for p in [1.0, 2.0, 3.5] {
            let v = schatten_norm(&i4, SchattenP::Finite(p)).unwrap();
            assert!((v - 4f64.powf(1.0 / p)).abs() < 1e-14);
        }
        assert_eq!(schatten_norm(&i4, SchattenP::Infinity).unwrap(), 1.0);
        assert_eq!(singular_values(&identity(3)).unwrap(), vec![1.0; 3]);
    }

    #[test]
    fn diagonal_norms() {
        let d = diag_real(&[3.0, 4.0]);
        assert!((schatten_norm(&d, SchattenP::Finite(1.0)).unwrap() - 7.0).abs() < 1e-14);
        assert!((schatten_norm(&d, SchattenP::Infinity).unwrap() - 4.0).abs() < 1e-14);
        assert_eq!(singular_values(&diag_real(&[0.0, 5.0])).unwrap(), vec![5.0, 0.0]);
    }

    #[test]
    fn zero_matrix_and_bad_exponent() {
        let z = ComplexMatrix::zeros(3, 3);
        assert_eq!(schatten_norm(&z, SchattenP::Finite(2.0)).unwrap(), 0.0);
        assert!(matches!(
            schatten_norm(&z, SchattenP::Finite(0.5)),
            Err(Error::InvalidExponent(_))
        ));
        assert!(SchattenP::finite(0.9).is_err());
        assert_eq!(SchattenP::finite(f64::INFINITY).unwrap(), SchattenP::Infinity);
    }

    #[test]
    fn frobenius_identity() {
        let mut rng = rng_from_seed(21);
        for _ in 0..10 {
            let x = random_complex_gaussian(&mut rng, 4, 4);
            let n2 = schatten_norm(&x, SchattenP::Finite(2.0)).unwrap();
            assert!((n2 - frobenius(&x)).abs() < 1e-12 * n2);
        }
    }

    #[test]
    fn squared_singular_values_are_gram_eigenvalues() {
        let mut rng = rng_from_seed(22);
        for _ in 0..10 {
            let x = random_complex_gaussian(&mut rng, 4, 4);
            let s = singular_values(&x).unwrap();
            let (ev, _) = hermitian_eigen(&(x.adjoint() * &x)).unwrap();
            for (si, ei) in s.iter().zip(&ev) {
                assert!((si * si - ei).abs() < 1e-9 * ev[0].max(1.0));
            }
        }
    }

    #[test]
    fn rectangular_length() {
        let mut rng = rng_from_seed(23);
        let x = random_complex_gaussian(&mut rng, 2, 5);
        assert_eq!(singular_values(&x).unwrap().len(), 2);
    }

    #[test]
    fn monotone_in_p_and_unitarily_invariant() {
        let mut rng = rng_from_seed(24);
        let x = random_complex_gaussian(&mut rng, 3, 3);
        let u = random_unitary(&mut rng, 3);
        let v = random_unitary(&mut rng, 3);
        let y = &u * &x * &v;
        let mut prev = f64::INFINITY;
        for p in [1.0, 1.5, 2.0, 3.0, 7.0] {
            let a = schatten_norm(&x, SchattenP::Finite(p)).unwrap();
            let b = schatten_norm(&y, SchattenP::Finite(p)).unwrap();
            assert!(a <= prev + 1e-10);
            assert!((a - b).abs() <= 1e-9 * a);
            prev = a;
        }
    }
}

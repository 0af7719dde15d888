//! Dense complex matrices and spectral calculus on positive semi-definite operators.
//!
//! Every matrix is an [`nalgebra::DMatrix`] of [`Complex64`]. Functions of a PSD
//! operator are computed through its eigendecomposition, and fractional,
//! negative or complex powers act on the support only (eigenvalues above the
//! operator's support cutoff); the kernel is mapped to zero.

mod norm;
mod psd;
mod tensor;

pub use norm::{schatten_norm, schatten_pow, singular_values, SchattenP};
pub use psd::{spectral_decompose, LogOnSupport, PsdOperator};
pub use tensor::{embed, partial_trace, TensorShape};

use nalgebra::DMatrix;
pub use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tolerances;

pub type ComplexMatrix = DMatrix<Complex64>;

const EIG_MAX_ITERS: usize = 10_000;

#[inline]
pub fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn identity(n: usize) -> ComplexMatrix {
    ComplexMatrix::identity(n, n)
}

/// Diagonal matrix with real entries.
pub fn diag_real(values: &[f64]) -> ComplexMatrix {
    let n = values.len();
    let mut m = ComplexMatrix::zeros(n, n);
    for (i, &v) in values.iter().enumerate() {
        m[(i, i)] = c64(v, 0.0);
    }
    m
}

pub fn diag_complex(values: &[Complex64]) -> ComplexMatrix {
    let n = values.len();
    let mut m = ComplexMatrix::zeros(n, n);
    for (i, &v) in values.iter().enumerate() {
        m[(i, i)] = v;
    }
    m
}

/// Largest entry modulus.
pub fn max_abs_entry(m: &ComplexMatrix) -> f64 {
    m.iter().fold(0.0_f64, |acc, z| acc.max(z.norm()))
}

pub fn frobenius(m: &ComplexMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn trace(m: &ComplexMatrix) -> Complex64 {
    (0..m.nrows().min(m.ncols())).map(|i| m[(i, i)]).sum()
}

pub fn all_finite(m: &ComplexMatrix) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

/// Checks `M ≈ M†` against the global symmetry tolerance and returns the
/// symmetrized matrix `(M + M†)/2`.
pub fn symmetrize(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    if !m.is_square() {
        return Err(Error::ShapeMismatch(format!(
            "expected square matrix, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    if !all_finite(m) {
        return Err(Error::DomainError("matrix has non-finite entries".into()));
    }
    let adj = m.adjoint();
    let asym = max_abs_entry(&(m - &adj));
    let scale = max_abs_entry(m).max(1.0);
    if asym > tolerances::get().symmetry_rel * scale {
        return Err(Error::NonHermitian(asym));
    }
    Ok((m + adj) * c64(0.5, 0.0))
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues sorted descending.
///
/// The input must already be Hermitian; only the lower triangle is read by the
/// underlying solver.
pub fn hermitian_eigen(h: &ComplexMatrix) -> Result<(Vec<f64>, ComplexMatrix)> {
    let n = h.nrows();
    if n == 0 {
        return Ok((Vec::new(), ComplexMatrix::zeros(0, 0)));
    }
    let eig = nalgebra::SymmetricEigen::try_new(h.clone(), f64::EPSILON, EIG_MAX_ITERS)
        .ok_or(Error::EigensolverFailure)?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let values: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = ComplexMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    if values.iter().any(|v| !v.is_finite()) || !all_finite(&vectors) {
        return Err(Error::EigensolverFailure);
    }
    Ok((values, vectors))
}

/// `U diag(f) U†` for a unitary (or isometric) `U` given column-wise.
pub fn spectral_apply(vectors: &ComplexMatrix, f: &[Complex64]) -> ComplexMatrix {
    let mut scaled = vectors.clone();
    for (j, &fj) in f.iter().enumerate() {
        let mut col = scaled.column_mut(j);
        col *= fj;
    }
    scaled * vectors.adjoint()
}

/// Exponential of a Hermitian matrix through its spectral decomposition.
pub fn matrix_exp(h: &ComplexMatrix) -> Result<ComplexMatrix> {
    let h = symmetrize(h)?;
    let (values, vectors) = hermitian_eigen(&h)?;
    let f: Vec<Complex64> = values.iter().map(|&l| c64(l.exp(), 0.0)).collect();
    Ok(spectral_apply(&vectors, &f))
}

/// `exp(Ω)` for skew-Hermitian `Ω`, computed as `exp(i·H)` with `H = -iΩ`.
pub fn unitary_exp(omega: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = omega.nrows();
    if n == 1 {
        let z = omega[(0, 0)];
        return Ok(ComplexMatrix::from_element(1, 1, Complex64::from_polar(1.0, z.im)));
    }
    let h = omega * c64(0.0, -1.0);
    let h = (&h + h.adjoint()) * c64(0.5, 0.0);
    let (values, vectors) = hermitian_eigen(&h)?;
    let f: Vec<Complex64> = values.iter().map(|&l| Complex64::from_polar(1.0, l)).collect();
    Ok(spectral_apply(&vectors, &f))
}

/// Largest entry of `|U†U − I|`.
pub fn unitarity_residual(u: &ComplexMatrix) -> f64 {
    if !u.is_square() {
        return f64::INFINITY;
    }
    let g = u.adjoint() * u;
    max_abs_entry(&(g - identity(u.nrows())))
}

/// Kronecker product `a ⊗ b`, with `a` on the slow index.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kronecker(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instgen::random::{random_hermitian, rng_from_seed};

    #[test]
    fn exp_of_zero_is_identity() {
        let e = matrix_exp(&ComplexMatrix::zeros(3, 3)).unwrap();
        assert!(max_abs_entry(&(e - identity(3))) < 1e-15);
    }

    #[test]
    fn exp_of_diag() {
        let e = matrix_exp(&diag_real(&[1.0, -1.0])).unwrap();
        assert!((e[(0, 0)].re - std::f64::consts::E).abs() < 1e-14);
        assert!((e[(1, 1)].re - 1.0 / std::f64::consts::E).abs() < 1e-15);
    }

    #[test]
    fn exp_inverse_round_trip() {
        let mut rng = rng_from_seed(11);
        for _ in 0..20 {
            let a = random_hermitian(&mut rng, 4);
            let e = matrix_exp(&a).unwrap();
            let einv = matrix_exp(&(-&a)).unwrap();
            assert!(max_abs_entry(&(e * einv - identity(4))) < 1e-9);
        }
    }

    #[test]
    fn exp_rejects_non_hermitian() {
        let mut m = ComplexMatrix::zeros(2, 2);
        m[(0, 1)] = c64(1.0, 0.0);
        assert!(matches!(matrix_exp(&m), Err(Error::NonHermitian(_))));
    }

    #[test]
    fn unitary_exp_is_unitary() {
        let mut rng = rng_from_seed(3);
        let h = random_hermitian(&mut rng, 3);
        let omega = h * c64(0.0, 1.0);
        let u = unitary_exp(&omega).unwrap();
        assert!(unitarity_residual(&u) < 1e-12);
    }
}

use super::{
    all_finite, c64, frobenius, hermitian_eigen, spectral_apply, symmetrize, Complex64,
    ComplexMatrix,
};
use crate::error::{Error, Result};
use crate::tolerances;

/// A finite-dimensional positive semi-definite operator held in spectral form.
///
/// Eigenvalues are stored descending and are non-negative: values in
/// `[-eps * max(1, λ_max), 0)` are clamped to zero at construction, anything
/// more negative is rejected. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct PsdOperator {
    eigenvalues: Vec<f64>,
    eigenvectors: ComplexMatrix,
    support_cutoff: f64,
    clamped: usize,
}

/// Logarithm restricted to the support, flagged when the kernel was non-trivial.
#[derive(Debug, Clone)]
pub struct LogOnSupport {
    pub matrix: ComplexMatrix,
    pub rank_deficient: bool,
}

/// Decomposes a Hermitian PSD matrix.
///
/// `support_cutoff_rel` is relative to the largest eigenvalue.
pub fn spectral_decompose(m: &ComplexMatrix, support_cutoff_rel: f64) -> Result<PsdOperator> {
    PsdOperator::with_cutoff(m, support_cutoff_rel)
}

impl PsdOperator {
    /// Decomposes `m` with the global default support cutoff.
    pub fn new(m: &ComplexMatrix) -> Result<Self> {
        Self::with_cutoff(m, tolerances::get().support_cutoff_rel)
    }

    pub fn with_cutoff(m: &ComplexMatrix, support_cutoff_rel: f64) -> Result<Self> {
        let h = symmetrize(m)?;
        if h.nrows() == 0 {
            return Err(Error::ShapeMismatch("empty matrix".into()));
        }
        let (values, vectors) = hermitian_eigen(&h)?;
        let op = Self::from_spectrum(values, vectors, support_cutoff_rel)?;
        let residual = frobenius(&(op.to_matrix() - &h));
        if residual > 1e-8 * frobenius(&h).max(1.0) {
            return Err(Error::EigensolverFailure);
        }
        Ok(op)
    }

    /// Builds the operator `U diag(values) U†` directly from a spectrum.
    ///
    /// `vectors` must have orthonormal columns; `values` need not be sorted.
    pub fn from_spectrum(
        values: Vec<f64>,
        vectors: ComplexMatrix,
        support_cutoff_rel: f64,
    ) -> Result<Self> {
        let n = values.len();
        if n == 0 || vectors.nrows() != n || vectors.ncols() != n {
            return Err(Error::ShapeMismatch(format!(
                "{} eigenvalues with a {}x{} eigenvector matrix",
                n,
                vectors.nrows(),
                vectors.ncols()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) || !all_finite(&vectors) {
            return Err(Error::DomainError("non-finite spectrum".into()));
        }
        if support_cutoff_rel.is_nan() || support_cutoff_rel < 0.0 {
            return Err(Error::DomainError(format!(
                "support cutoff {support_cutoff_rel} must be non-negative"
            )));
        }
        let residual = super::unitarity_residual(&vectors);
        if residual > 1e-10 {
            return Err(Error::NonUnitaryBlock { index: 0, residual });
        }

        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| values[b].total_cmp(&values[a]));
        let mut eigenvalues: Vec<f64> = order.iter().map(|&i| values[i]).collect();
        let mut eigenvectors = ComplexMatrix::zeros(n, n);
        for (dst, &src) in order.iter().enumerate() {
            eigenvectors.set_column(dst, &vectors.column(src));
        }

        let lmax = eigenvalues[0].max(0.0);
        let floor = tolerances::get().hermitian_eps * lmax.max(1.0);
        let mut clamped = 0;
        for v in &mut eigenvalues {
            if *v < -floor {
                return Err(Error::NegativeSpectrum {
                    value: *v,
                    tolerance: floor,
                });
            }
            if *v < 0.0 {
                *v = 0.0;
                clamped += 1;
            }
        }
        Ok(Self {
            eigenvalues,
            eigenvectors,
            support_cutoff: support_cutoff_rel * lmax,
            clamped,
        })
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// Descending, non-negative.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Columns are eigenvectors, in the order of [`Self::eigenvalues`].
    pub fn eigenvectors(&self) -> &ComplexMatrix {
        &self.eigenvectors
    }

    /// Absolute threshold; eigenvalues at or below it are outside the support.
    pub fn support_cutoff(&self) -> f64 {
        self.support_cutoff
    }

    /// Number of slightly negative eigenvalues clamped to zero at construction.
    pub fn clamped(&self) -> usize {
        self.clamped
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn in_support(&self, lambda: f64) -> bool {
        lambda > self.support_cutoff
    }

    pub fn rank(&self) -> usize {
        self.eigenvalues
            .iter()
            .filter(|&&l| self.in_support(l))
            .count()
    }

    pub fn is_positive_definite(&self) -> bool {
        self.rank() == self.dim()
    }

    /// Smallest eigenvalue inside the support, if the support is non-empty.
    pub fn min_support_eigenvalue(&self) -> Option<f64> {
        self.eigenvalues
            .iter()
            .rev()
            .copied()
            .find(|&l| self.in_support(l))
    }

    pub fn trace(&self) -> f64 {
        self.eigenvalues.iter().sum()
    }

    /// Reassembles `U Λ U†`.
    pub fn to_matrix(&self) -> ComplexMatrix {
        let f: Vec<Complex64> = self.eigenvalues.iter().map(|&l| c64(l, 0.0)).collect();
        spectral_apply(&self.eigenvectors, &f)
    }

    /// Applies `f` to every support eigenvalue and `0` to the kernel.
    pub fn map_support(&self, f: impl Fn(f64) -> Complex64) -> ComplexMatrix {
        let values: Vec<Complex64> = self
            .eigenvalues
            .iter()
            .map(|&l| if self.in_support(l) { f(l) } else { c64(0.0, 0.0) })
            .collect();
        spectral_apply(&self.eigenvectors, &values)
    }

    /// `C^a` on the support. For `a < 0` this is the pseudo-power.
    pub fn real_power(&self, a: f64) -> ComplexMatrix {
        if a == 0.0 {
            return self.support_projector();
        }
        self.map_support(|l| c64(l.powf(a), 0.0))
    }

    /// `C^{(a + it)/q} = U diag(λ^{a/q} e^{i (t/q) ln λ}) U†` on the support.
    ///
    /// With `a = 0` the result is the partial isometry `C^{it/q}`: unitary on
    /// the support and zero on the kernel.
    pub fn complex_power(&self, a: f64, t: f64, q: f64) -> ComplexMatrix {
        self.map_support(|l| {
            let ln = l.ln();
            Complex64::from_polar((a / q * ln).exp(), t / q * ln)
        })
    }

    /// Projector onto the support.
    pub fn support_projector(&self) -> ComplexMatrix {
        self.map_support(|_| c64(1.0, 0.0))
    }

    /// `log C` on the support; the kernel maps to zero.
    pub fn log_on_support(&self) -> LogOnSupport {
        LogOnSupport {
            matrix: self.map_support(|l| c64(l.ln(), 0.0)),
            rank_deficient: !self.is_positive_definite(),
        }
    }
}

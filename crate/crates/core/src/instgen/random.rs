//! Seeded random matrices. All draws come from a ChaCha8 stream so a seed
//! reproduces the same bits on every platform.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::matcore::{c64, diag_complex, trace, ComplexMatrix};

pub type SwivelRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> SwivelRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Matrix of i.i.d. standard complex Gaussians, `E|z|² = 1`.
pub fn random_complex_gaussian<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> ComplexMatrix {
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    // Column-major fill keeps the draw order tied to nalgebra's storage order.
    let mut m = ComplexMatrix::zeros(rows, cols);
    for j in 0..cols {
        for i in 0..rows {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            m[(i, j)] = c64(re * scale, im * scale);
        }
    }
    m
}

pub fn random_hermitian<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    let g = random_complex_gaussian(rng, n, n);
    (&g + g.adjoint()) * c64(0.5, 0.0)
}

/// `G G†` with `G` an `n × rank` complex Gaussian.
pub fn random_psd_rank<R: Rng + ?Sized>(rng: &mut R, n: usize, rank: usize) -> ComplexMatrix {
    let g = random_complex_gaussian(rng, n, rank);
    hermitian_part(&(&g * g.adjoint()))
}

pub fn random_psd<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    random_psd_rank(rng, n, n)
}

pub fn random_density<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    let m = random_psd(rng, n);
    let t = trace(&m).re;
    hermitian_part(&(m / c64(t, 0.0)))
}

/// Haar-distributed unitary: QR of a complex Gaussian with the phases of
/// `diag(R)` moved into `Q`.
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    let g = random_complex_gaussian(rng, n, n);
    let qr = nalgebra::linalg::QR::new(g);
    let q = qr.q();
    let r = qr.r();
    let phases: Vec<_> = (0..n)
        .map(|i| {
            let d = r[(i, i)];
            if d.norm() > 0.0 {
                d / d.norm()
            } else {
                c64(1.0, 0.0)
            }
        })
        .collect();
    q * diag_complex(&phases)
}

/// `(M + M†)/2`, removing rounding asymmetry from products like `G G†`.
pub fn hermitian_part(m: &ComplexMatrix) -> ComplexMatrix {
    (m + m.adjoint()) * c64(0.5, 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::{max_abs_entry, unitarity_residual};

    #[test]
    fn deterministic_per_seed() {
        let a = random_complex_gaussian(&mut rng_from_seed(1), 3, 3);
        let b = random_complex_gaussian(&mut rng_from_seed(1), 3, 3);
        let c = random_complex_gaussian(&mut rng_from_seed(2), 3, 3);
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn unitary_is_unitary() {
        let mut rng = rng_from_seed(4);
        for n in 1..6 {
            assert!(unitarity_residual(&random_unitary(&mut rng, n)) < 1e-12);
        }
    }

    #[test]
    fn density_has_unit_trace() {
        let rho = random_density(&mut rng_from_seed(5), 4);
        assert!((trace(&rho).re - 1.0).abs() < 1e-12);
        assert!(max_abs_entry(&(&rho - rho.adjoint())) == 0.0);
    }
}

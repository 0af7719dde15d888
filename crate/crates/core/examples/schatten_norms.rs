//! Schatten norms and spectral calculus on a PSD operator.
//!
//! `cargo run --example schatten_norms`

use swivel::instgen::random::{random_psd_rank, rng_from_seed};
use swivel::matcore::{schatten_norm, PsdOperator, SchattenP};

fn main() -> swivel::Result<()> {
    let m = random_psd_rank(&mut rng_from_seed(1), 4, 3);
    let c = PsdOperator::new(&m)?;
    println!("eigenvalues {:?}", c.eigenvalues());
    println!("rank {} of {}", c.rank(), c.dim());

    for p in [1.0, 2.0, 4.0, 8.0] {
        println!("||C||_{p} = {:.10}", schatten_norm(&m, SchattenP::finite(p)?)?);
    }
    println!("||C||_inf = {:.10}", schatten_norm(&m, SchattenP::Infinity)?);

    // C^{it} is a partial isometry: unimodular on the support, zero on the kernel
    let u = c.complex_power(0.0, 0.7, 1.0);
    let sv: Vec<f64> = u.singular_values().iter().copied().collect();
    println!("singular values of C^(0.7i): {sv:.12?}");

    let log = c.log_on_support();
    println!("log on support is rank deficient: {}", log.rank_deficient);
    Ok(())
}

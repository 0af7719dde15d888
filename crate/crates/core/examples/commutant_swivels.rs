//! Commutant block structure of PSD operators and the swivel-maximized chain norm.
//!
//! `cargo run --example commutant_swivels`

use swivel::commutant::{verify_commutation, CommutantStructure, SwivelAssignment};
use swivel::instgen::random::{random_psd, random_unitary, rng_from_seed};
use swivel::matcore::{diag_real, ComplexMatrix, PsdOperator};
use swivel::swivelopt::{chain_norm, maximize_over_swivels, ChainInstance, OptimizerConfig};

fn main() -> swivel::Result<()> {
    let mut rng = rng_from_seed(3);
    let u = random_unitary(&mut rng, 3);
    // eigenvalue 1 twice: the commutant is U(2) x U(1)
    let degenerate: ComplexMatrix = &u * diag_real(&[1.0, 1.0, 3.0]) * u.adjoint();
    let generic = random_psd(&mut rng, 3);
    let third = random_psd(&mut rng, 3);

    let op = PsdOperator::new(&degenerate)?;
    let s = CommutantStructure::of(&op);
    println!("block sizes {:?}, real dimension {}", s.block_sizes(), s.real_dimension());

    // with two operators every swivel commutes out of the norm; three is the first real case
    let inst = ChainInstance::from_matrices(&[degenerate, generic, third], "demo", 3)?;
    let random = SwivelAssignment::random(inst.structures(), 17);
    let v = random.assemble(inst.structures())?;
    println!("commutator residual of a random swivel: {:.2e}", verify_commutation(&v[0], &op)?);

    let p = 3.0;
    let id = SwivelAssignment::identity(inst.structures());
    println!("identity swivels  {:.10}", chain_norm(&inst, &id, p)?);
    println!("random swivels    {:.10}", chain_norm(&inst, &random, p)?);
    let best = maximize_over_swivels(&inst, p, &OptimizerConfig::default())?;
    println!(
        "maximized         {:.10}  (restart spread {:.1e}, converged {})",
        best.value,
        best.restart_spread(),
        best.converged
    );
    Ok(())
}

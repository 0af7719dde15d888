//! The tripartite marginal chain `rho_AC^{1/p} V_C rho_C^{-1/p} rho_BC^{1/p}`
//! maximized over swivels on C.
//!
//! `cargo run --release --example marginal_chain`

use swivel::instgen::{generate, GenSpec};
use swivel::swivelopt::{sweep_marginal, verify_marginal_monotone, MarginalChain, OptimizerConfig};

fn main() -> swivel::Result<()> {
    let inst = generate(&GenSpec::tripartite(vec![2, 2, 2], 5))?;
    let (rho, shape) = inst.tripartite()?;
    let chain = MarginalChain::new(rho, shape)?;
    println!("rho_C spectrum {:?}", chain.rho_c().eigenvalues());

    let grid = [1.0, 1.5, 2.0, 3.0, 4.0, 6.0];
    let cfg = OptimizerConfig::default();
    for pt in sweep_marginal(&chain, &grid, &cfg)? {
        let tag = if pt.in_claimed_range { "" } else { "  (p < 2)" };
        println!("p {:>4}  {:.12}{tag}", pt.p, pt.value);
    }
    let rep = verify_marginal_monotone(&chain, &grid, &cfg, 1e-7)?;
    println!("{} with slack {:.3e}", rep.status, rep.slack);
    for note in &rep.diagnostics.notes {
        println!("  {note}");
    }
    Ok(())
}

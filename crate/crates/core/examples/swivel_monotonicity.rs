//! The swivel-maximized chain norm as a function of p, checked against the
//! phase-grid oracle on a 2x2 instance.
//!
//! `cargo run --release --example swivel_monotonicity`

use swivel::instgen::{generate, GenKind, GenSpec};
use swivel::swivelopt::{
    free_phase_count, phase_grid_search, sweep_p, verify_monotone, OptimizerConfig, PhaseGridConfig, DEFAULT_P_GRID,
};

fn main() -> swivel::Result<()> {
    let inst = generate(&GenSpec::new(GenKind::Pd, 2, 3, 42))?.chain()?;
    let cfg = OptimizerConfig::default();
    let grid = PhaseGridConfig::auto(free_phase_count(&inst));

    println!("{:>6} {:>18} {:>18}", "p", "optimizer", "oracle");
    for pt in sweep_p(&inst, &DEFAULT_P_GRID, &cfg)? {
        let oracle = phase_grid_search(&inst, pt.p, &grid)?.value;
        println!("{:>6} {:>18.12} {:>18.12}", pt.p, pt.value, oracle);
    }

    let rep = verify_monotone(&inst, &DEFAULT_P_GRID, &cfg, 1e-7)?;
    println!("{}: worst pair {:?}, slack {:.3e}", rep.status, rep.diagnostics.optimizer.unwrap().worst_pair, rep.slack);
    Ok(())
}

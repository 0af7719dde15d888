//! The log chain norm against its beta-weighted average over complex powers,
//! with quadrature diagnostics.
//!
//! `cargo run --release --example hirschman_bound`

use swivel::instgen::{generate, GenKind, GenSpec};
use swivel::interp::{hirschman_lhs, total_mass, verify_hirschman, DensityParams, QuadratureConfig};

fn main() -> swivel::Result<()> {
    let quad = QuadratureConfig::default();
    let theta = DensityParams::from_pq(4.0, 2.0)?;
    let mass = total_mass(theta.beta(), &quad)?;
    println!("mass of beta_{} = {:.12} (error estimate {:.1e})", theta.theta, mass.value, mass.error_estimate);

    for (kind, seed) in [(GenKind::Pd, 1), (GenKind::CommutingFamily, 2)] {
        let inst = generate(&GenSpec::new(kind, 3, 3, seed))?.chain()?;
        for (p, q) in [(2.0, 1.0), (4.0, 2.0), (8.0, 3.0)] {
            let rep = verify_hirschman(&inst, p, q, &quad, 1e-7)?;
            let qd = rep.diagnostics.quadrature.as_ref().unwrap();
            println!(
                "{:<28} p={p} q={q}: lhs {:.10} rhs {:.10} slack {:+.3e}  [{} panels, T={:.2}, err {:.1e}]",
                inst.label,
                hirschman_lhs(&inst, p)?,
                rep.rhs,
                rep.slack,
                qd.panels,
                qd.half_width,
                qd.error_estimate
            );
        }
    }
    Ok(())
}

//! Multi-operator Golden-Thompson: `log Tr exp(sum log C_i)` against the
//! beta_0-weighted average, including the classic two-operator case.
//!
//! `cargo run --release --example golden_thompson`

use swivel::instgen::{generate, GenKind, GenSpec};
use swivel::interp::{gt_lhs, verify_gt, QuadratureConfig};
use swivel::matcore::schatten_norm;
use swivel::matcore::SchattenP;

fn main() -> swivel::Result<()> {
    let quad = QuadratureConfig::default();
    let pair = generate(&GenSpec::new(GenKind::Pd, 3, 2, 8))?;
    let inst = pair.chain()?;
    // two operators: Tr exp(log A + log B) <= Tr AB
    let tr_ab = schatten_norm(&(&pair.matrices[0] * &pair.matrices[1]), SchattenP::finite(1.0)?)?;
    println!("Tr exp(log A + log B) = {:.10}", gt_lhs(&inst)?.exp());
    println!("|Tr AB|              <= {:.10}", tr_ab);

    for l in [2, 3, 4] {
        let inst = generate(&GenSpec::new(GenKind::Pd, 3, l, 100 + l as u64))?.chain()?;
        for q in [1.0, 2.0] {
            let rep = verify_gt(&inst, q, &quad, 1e-7)?;
            println!("L={l} q={q}: lhs {:.10} rhs {:.10} {}", rep.lhs, rep.rhs, rep.status);
        }
    }
    Ok(())
}

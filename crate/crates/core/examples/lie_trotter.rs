//! Convergence of `|| prod C_i^{1/p} ||_p^p` towards `Tr exp(sum log C_i)`.
//!
//! `cargo run --example lie_trotter`

use swivel::instgen::{generate, GenKind, GenSpec};
use swivel::interp::lie_trotter_convergence;

fn main() -> swivel::Result<()> {
    let inst = generate(&GenSpec::new(GenKind::Pd, 3, 3, 9))?.chain()?;
    let p_list: Vec<f64> = (0..=10).map(|k| 2f64.powi(k)).collect();
    let table = lie_trotter_convergence(&inst, &p_list)?;
    println!("reference {:.15}", table.reference);
    for r in &table.rows {
        println!("p {:>6}  {:.15}  rel error {:.3e}", r.p, r.value, r.rel_error);
    }
    println!("last row has the smallest error: {}", table.final_is_smallest(1e-12));
    Ok(())
}

//! Instance files and reports: bit-exact round trip, report embedding and rerun.
//!
//! `cargo run --example instances_roundtrip`

use swivel::cli::rerun_report;
use swivel::instgen::{
    generate, load_instance, load_report, save_instance, save_report, GenKind, GenSpec, ReportFile, RunParameters,
};
use swivel::interp::{verify_hirschman, QuadratureConfig};
use swivel::tolerances;

fn main() -> swivel::Result<()> {
    let dir = std::env::temp_dir().join("swivel-roundtrip-example");
    std::fs::create_dir_all(&dir)?;

    let spec = GenSpec::new(GenKind::Pd, 3, 2, 2024);
    let inst = generate(&spec)?;
    let path = dir.join(format!("{}.json", spec.label()));
    save_instance(&path, &inst)?;
    let back = load_instance(&path)?;
    println!("{} round trip bit-exact: {}", path.display(), back.matrices == inst.matrices);

    let quad = QuadratureConfig::default();
    let rep = verify_hirschman(&back.chain()?, 4.0, 2.0, &quad, 1e-7)?;
    let params = RunParameters {
        p: Some(4.0),
        q: Some(2.0),
        p_grid: None,
        tolerance: 1e-7,
        optimizer: None,
        quadrature: Some(quad),
        tolerances: *tolerances::get(),
    };
    let rpath = dir.join("report.json");
    save_report(&rpath, &ReportFile::new(&rep, params, &back, Some(path.display().to_string())))?;

    let saved = load_report(&rpath)?;
    let again = rerun_report(&saved)?;
    println!("saved  lhs {} rhs {} ({})", saved.lhs_hex, saved.rhs_hex, saved.status);
    println!("rerun  lhs {:e} rhs {:e} identical: {}", again.lhs, again.rhs, saved.sides()? == (again.lhs, again.rhs));
    Ok(())
}

use std::collections::HashSet;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use swivel::instgen::{load_instance, load_report, save_instance, Instance, ReportFile};
use swivel::matcore::{diag_real, ComplexMatrix};

fn swivel(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_swivel"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn write_instance(dir: &Path, name: &str, ms: Vec<ComplexMatrix>) -> PathBuf {
    let path = dir.join(name);
    save_instance(&path, &Instance::from_matrices(name, 0, ms)).unwrap();
    path
}

#[test]
fn gen_single_density_has_unit_trace() {
    let dir = tempfile::tempdir().unwrap();
    let o = swivel(dir.path(), &["gen", "--kind", "density", "--dim", "3", "--seed", "7"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let out = stdout(&o);
    let paths: Vec<&str> = out.lines().collect();
    assert_eq!(paths.len(), 1);
    let inst = load_instance(dir.path().join(paths[0])).unwrap();
    assert_eq!(inst.matrices.len(), 1);
    assert!((inst.matrices[0].trace().re - 1.0).abs() < 1e-14);
    assert_eq!(inst.seed, 7);
}

#[test]
fn gen_tripartite_records_tensor_shape() {
    let dir = tempfile::tempdir().unwrap();
    let o = swivel(
        dir.path(),
        &["gen", "--kind", "tripartiteDensity", "--dims", "2,2,2", "--seed", "1", "--out", "t.json"],
    );
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let inst = load_instance(dir.path().join("t.json")).unwrap();
    assert_eq!(inst.tensor_shape.unwrap().factor_dims(), &[2, 2, 2]);
    assert_eq!(inst.matrices[0].nrows(), 8);
}

#[test]
fn gen_batch_derives_distinct_seeds() {
    let dir = tempfile::tempdir().unwrap();
    let o = swivel(
        dir.path(),
        &["gen", "--kind", "pd", "--dim", "2", "-L", "2", "--seed", "500", "--count", "100", "--out", "b"],
    );
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let files: Vec<String> = stdout(&o).lines().map(str::to_owned).collect();
    assert_eq!(files.len(), 100);
    let mut seeds = HashSet::new();
    let mut firsts = HashSet::new();
    for f in &files {
        let inst = load_instance(dir.path().join(f)).unwrap();
        seeds.insert(inst.seed);
        firsts.insert(inst.matrices[0][(0, 0)].re.to_bits());
    }
    assert_eq!(seeds, (500..600).collect::<HashSet<u64>>());
    assert_eq!(firsts.len(), 100);
}

#[test]
fn verify_commuting_hirschman_holds_with_zero_slack() {
    let dir = tempfile::tempdir().unwrap();
    swivel(dir.path(), &["gen", "--kind", "commutingFamily", "--dim", "3", "-L", "3", "--seed", "4", "--out", "c.json"]);
    let o = swivel(dir.path(), &["verify", "hirschman", "c.json", "--p", "3", "--q", "2", "--out", "r.json"]);
    assert_eq!(code(&o), 0, "{}{}", stdout(&o), stderr(&o));
    let rep = load_report(dir.path().join("r.json")).unwrap();
    assert!(rep.slack.unwrap().abs() < 1e-8);
    assert_eq!(rep.parameters.q, Some(2.0));
    assert!(rep.tool_version.starts_with("swivel "));
}

#[test]
fn verify_monotone_single_operator_is_flat() {
    let dir = tempfile::tempdir().unwrap();
    swivel(dir.path(), &["gen", "--kind", "psd", "--dim", "3", "--seed", "2", "--out", "one.json"]);
    let o = swivel(dir.path(), &["verify", "monotone", "one.json", "--out", "r.json"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let rep = load_report(dir.path().join("r.json")).unwrap();
    let values = rep.diagnostics.optimizer.unwrap().values;
    assert_eq!(values.len(), 8);
    assert!(values.iter().all(|v| (v - values[0]).abs() <= 1e-10 * values[0]));
}

#[test]
fn batch_verify_writes_one_report_per_instance_and_a_summary() {
    let dir = tempfile::tempdir().unwrap();
    swivel(dir.path(), &["gen", "--kind", "pd", "--dim", "3", "-L", "2", "--seed", "1", "--count", "6", "--out", "in"]);
    let o = swivel(dir.path(), &["verify", "gt", "in", "--q", "2", "--out", "rep", "--emit", "both"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("6 instance(s): 6 HOLDS"), "{out}");
    assert!(out.contains("min slack") && out.contains("worst in/"), "{out}");
    let reports = std::fs::read_dir(dir.path().join("rep")).unwrap().count();
    assert_eq!(reports, 7);
    let summary = std::fs::read_to_string(dir.path().join("rep/summary.gt.csv")).unwrap();
    assert!(summary.starts_with("instance,status,lhs,rhs,slack,error"));
    assert_eq!(summary.lines().count(), 7);
}

#[test]
fn underflowing_integrand_is_inconclusive() {
    let dir = tempfile::tempdir().unwrap();
    let tiny = diag_real(&[1e-200, 2e-200]);
    write_instance(dir.path(), "tiny.json", vec![tiny.clone(), tiny]);
    let o = swivel(dir.path(), &["verify", "hirschman", "tiny.json", "--p", "2", "--q", "1", "--out", "r.json"]);
    assert_eq!(code(&o), 3, "{}{}", stdout(&o), stderr(&o));
    assert!(stdout(&o).contains("INCONCLUSIVE_OPTIMIZER_GAP"));
}

#[test]
fn usage_and_input_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    swivel(dir.path(), &["gen", "--kind", "pd", "--dim", "2", "-L", "2", "--out", "x.json"]);
    for args in [
        vec!["verify", "hirschman", "x.json"],
        vec!["verify", "hirschman", "x.json", "--p", "2", "--q", "3"],
        vec!["verify", "monotone", "x.json", "--p-grid", "2,1"],
        vec!["verify", "gt", "missing.json", "--q", "1"],
        vec!["gen", "--kind", "nope", "--dim", "2"],
        vec!["gen", "--kind", "pd"],
        vec!["frobnicate"],
    ] {
        let o = swivel(dir.path(), &args);
        assert_eq!(code(&o), 1, "{args:?}: {}", stderr(&o));
        assert!(!stderr(&o).is_empty());
    }
    assert_eq!(code(&swivel(dir.path(), &["--help"])), 0);
}

#[test]
fn sweep_with_oracle_rejects_degenerate_spectrum() {
    let dir = tempfile::tempdir().unwrap();
    write_instance(
        dir.path(),
        "deg.json",
        vec![diag_real(&[1.0, 1.0, 2.0]), diag_real(&[3.0, 1.0, 2.0])],
    );
    let o = swivel(dir.path(), &["sweep", "deg.json", "--with-oracle"]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("commutant block of size 2"), "{}", stderr(&o));
}

#[test]
fn sweep_two_by_two_pair_emits_non_increasing_oracle_column() {
    let dir = tempfile::tempdir().unwrap();
    swivel(dir.path(), &["gen", "--kind", "pd", "--dim", "2", "-L", "2", "--seed", "11", "--out", "pair.json"]);
    let o = swivel(dir.path(), &["sweep", "pair.json", "--with-oracle", "--p-grid", "1,2,3,4,6,8", "--out", "curve"]);
    assert_eq!(code(&o), 0, "{}{}", stdout(&o), stderr(&o));
    let mut rdr = csv::Reader::from_path(dir.path().join("curve.csv")).unwrap();
    let headers = rdr.headers().unwrap().clone();
    assert_eq!(headers.iter().collect::<Vec<_>>(), ["p", "value", "oracleValue", "restartSpread"]);
    let oracle: Vec<f64> = rdr.records().map(|r| r.unwrap()[2].parse().unwrap()).collect();
    assert_eq!(oracle.len(), 6);
    for w in oracle.windows(2) {
        assert!(w[1] <= w[0] * (1.0 + 1e-6), "{oracle:?}");
    }
    let side: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("curve.json")).unwrap()).unwrap();
    assert_eq!(side["optimizer"]["seed"], 0);
    assert!(side["toolVersion"].as_str().unwrap().starts_with("swivel "));
}

#[test]
fn trotter_table_and_rank_deficient_rejection() {
    let dir = tempfile::tempdir().unwrap();
    swivel(dir.path(), &["gen", "--kind", "pd", "--dim", "3", "-L", "3", "--seed", "5", "--out", "pd.json"]);
    let o = swivel(dir.path(), &["trotter", "pd.json", "--p-list", "2,1024", "--emit", "csv"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let table = std::fs::read_to_string(dir.path().join("pd.trotter.csv")).unwrap();
    let rows: Vec<&str> = table.lines().collect();
    assert_eq!(rows[0], "p,value,absError,relError");
    let rel: Vec<f64> = rows[1..].iter().map(|r| r.split(',').nth(3).unwrap().parse().unwrap()).collect();
    assert!(rel[1] < rel[0] && rel[1] < 1e-3);

    swivel(dir.path(), &["gen", "--kind", "rankDeficient", "--dim", "3", "--rank", "2", "-L", "2", "--out", "rd.json"]);
    let o = swivel(dir.path(), &["trotter", "rd.json"]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("rank deficient"));
}

#[test]
fn emitted_reports_rerun_identically_and_tampering_is_detected() {
    let dir = tempfile::tempdir().unwrap();
    swivel(dir.path(), &["gen", "--kind", "density", "--dim", "2", "-L", "2", "--seed", "9", "--out", "d.json"]);
    let o = swivel(dir.path(), &["verify", "monotone", "d.json", "--p-grid", "1,2,4", "--restarts", "3", "--out", "m.json"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let o = swivel(dir.path(), &["verify", "hirschman", "d.json", "--p", "4", "--q", "2", "--panels", "2", "--out", "h.json"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let o = swivel(dir.path(), &["rerun", "m.json", "h.json"]);
    assert_eq!(code(&o), 0, "{}{}", stdout(&o), stderr(&o));
    assert_eq!(stdout(&o).matches("IDENTICAL").count(), 2);

    let mut rep: ReportFile = load_report(dir.path().join("h.json")).unwrap();
    rep.lhs_hex = swivel::instgen::hexfloat::encode(rep.lhs.unwrap() * 2.0);
    swivel::instgen::save_report(dir.path().join("bad.json"), &rep).unwrap();
    let o = swivel(dir.path(), &["rerun", "bad.json"]);
    assert_eq!(code(&o), 4);
    assert!(stdout(&o).contains("DIFFERS"));
}

#[test]
fn thread_count_does_not_change_results() {
    let dir = tempfile::tempdir().unwrap();
    swivel(dir.path(), &["gen", "--kind", "pd", "--dim", "3", "-L", "2", "--seed", "3", "--out", "a.json"]);
    let mut bytes = Vec::new();
    for threads in ["1", "4"] {
        let out = format!("r{threads}.json");
        let o = Command::new(env!("CARGO_BIN_EXE_swivel"))
            .current_dir(dir.path())
            .env("SWIVEL_NUM_THREADS", threads)
            .args(["verify", "monotone", "a.json", "--p-grid", "1,2,3", "--out", &out])
            .output()
            .unwrap();
        assert_eq!(code(&o), 0);
        bytes.push(std::fs::read(dir.path().join(out)).unwrap());
    }
    assert_eq!(bytes[0], bytes[1]);
    let o = Command::new(env!("CARGO_BIN_EXE_swivel"))
        .env("SWIVEL_NUM_THREADS", "many")
        .args(["gen", "--kind", "pd", "--dim", "2"])
        .output()
        .unwrap();
    assert_eq!(code(&o), 1);
}

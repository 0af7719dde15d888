//! The `swivel` command line: `gen`, `verify`, `sweep`, `trotter`, `rerun`.
//!
//! Exit codes: 0 HOLDS, 2 VIOLATED_BEYOND_TOL, 3 INCONCLUSIVE_OPTIMIZER_GAP,
//! 1 usage or input error, 4 when `rerun` does not reproduce a report. In a
//! batch the worst outcome wins, ranked 2 > 1 > 3 > 0.
//!
//! `SWIVEL_NUM_THREADS` caps the worker pool (unset or 0 = one per core).

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::instgen::{
    generate, load_instance, load_report, save_instance, save_report, tool_version, write_atomic, write_csv,
    GenKind, GenSpec, Instance, InstanceDoc, ReportFile, RunParameters, SweepRow,
    SCHEMA_VERSION,
};
use crate::interp::{lie_trotter_convergence, verify_gt, verify_hirschman, QuadratureConfig, TrotterRow};
use crate::report::{Inequality, Status, VerificationReport};
use crate::swivelopt::{
    first_increase, free_phase_count, marginal_phase_grid, phase_grid_search, sweep_marginal, sweep_p,
    verify_marginal_monotone, verify_monotone, MarginalChain, OptimizerConfig, PhaseGridConfig, DEFAULT_P_GRID,
};
use crate::tolerances::{self, Tolerances};

pub const EXIT_USAGE: i32 = 1;
pub const EXIT_RERUN_MISMATCH: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "swivel", version, about = "Swivel-maximized Schatten chains and their interpolation bounds")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate seeded random instances.
    Gen(GenArgs),
    /// Check one inequality on one or more instances.
    Verify(VerifyArgs),
    /// Swivel-maximized value over a p grid, as a plot-ready curve.
    Sweep(SweepArgs),
    /// Lie-Trotter convergence table.
    Trotter(TrotterArgs),
    /// Re-run saved reports from their embedded instance and parameters.
    Rerun(RerunArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Emit {
    Report,
    Csv,
    Both,
}

impl Emit {
    fn report(self) -> bool {
        self != Emit::Csv
    }

    fn csv(self) -> bool {
        self != Emit::Report
    }
}

#[derive(Debug, Args)]
pub struct GenArgs {
    /// psd, pd, density, rankDeficient, commutingFamily or tripartiteDensity.
    #[arg(long)]
    pub kind: GenKind,
    #[arg(long)]
    pub dim: Option<usize>,
    /// Factor dimensions for tripartiteDensity, e.g. 2,2,2.
    #[arg(long, value_delimiter = ',')]
    pub dims: Option<Vec<usize>>,
    #[arg(long, short = 'L', default_value_t = 1)]
    pub operators: usize,
    #[arg(long)]
    pub rank: Option<usize>,
    #[arg(long)]
    pub condition_cap: Option<f64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Number of instances; instance i uses seed + i.
    #[arg(long, default_value_t = 1)]
    pub count: usize,
    /// Output directory, or a `.json` file when `count` is 1.
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct OptimizerArgs {
    #[arg(long)]
    pub restarts: Option<usize>,
    #[arg(long)]
    pub max_iters: Option<usize>,
    #[arg(long)]
    pub step_init: Option<f64>,
    #[arg(long)]
    pub conv_tol_rel: Option<f64>,
    #[arg(long)]
    pub fd_step: Option<f64>,
}

impl OptimizerArgs {
    pub fn resolve(&self, seed: u64) -> OptimizerConfig {
        let d = OptimizerConfig::default();
        OptimizerConfig {
            restarts: self.restarts.unwrap_or(d.restarts),
            max_iters: self.max_iters.unwrap_or(d.max_iters),
            step_init: self.step_init.unwrap_or(d.step_init),
            conv_tol_rel: self.conv_tol_rel.unwrap_or(d.conv_tol_rel),
            seed,
            fd_step: self.fd_step.unwrap_or(d.fd_step),
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct QuadratureArgs {
    /// Truncation T of the t-integral (default: from the tail bound).
    #[arg(long)]
    pub half_width: Option<f64>,
    /// Split factor applied to every graded panel.
    #[arg(long)]
    pub panels: Option<usize>,
    #[arg(long)]
    pub nodes_per_panel: Option<usize>,
    #[arg(long)]
    pub tail_eps: Option<f64>,
}

impl QuadratureArgs {
    pub fn resolve(&self) -> QuadratureConfig {
        let d = QuadratureConfig::default();
        QuadratureConfig {
            half_width: self.half_width.or(d.half_width),
            panels: self.panels.unwrap_or(d.panels),
            nodes_per_panel: self.nodes_per_panel.unwrap_or(d.nodes_per_panel),
            tail_eps: self.tail_eps.unwrap_or(d.tail_eps),
        }
    }
}

/// Overrides of the process-wide numerical thresholds.
#[derive(Debug, Clone, Args)]
pub struct ToleranceArgs {
    #[arg(long)]
    pub hermitian_eps: Option<f64>,
    #[arg(long)]
    pub support_cutoff_rel: Option<f64>,
    #[arg(long)]
    pub cluster_rel: Option<f64>,
    #[arg(long)]
    pub commutation_tol: Option<f64>,
}

impl ToleranceArgs {
    fn resolve(&self) -> Tolerances {
        let d = Tolerances::default();
        Tolerances {
            hermitian_eps: self.hermitian_eps.unwrap_or(d.hermitian_eps),
            support_cutoff_rel: self.support_cutoff_rel.unwrap_or(d.support_cutoff_rel),
            cluster_rel: self.cluster_rel.unwrap_or(d.cluster_rel),
            commutation: self.commutation_tol.unwrap_or(d.commutation),
            ..d
        }
    }
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// monotone, hirschman or gt.
    pub inequality: Inequality,
    /// Instance files or directories of `.json` instances.
    #[arg(required = true)]
    pub instances: Vec<PathBuf>,
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long)]
    pub q: Option<f64>,
    #[arg(long, value_delimiter = ',')]
    pub p_grid: Option<Vec<f64>>,
    /// Absolute slack allowed on top of the numerical error estimate.
    #[arg(long, default_value_t = 1e-7)]
    pub tol: f64,
    /// Optimizer seed.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Report directory, or a `.json` file for a single instance.
    #[arg(long, default_value = "reports")]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value_t = Emit::Report)]
    pub emit: Emit,
    #[command(flatten)]
    pub optimizer: OptimizerArgs,
    #[command(flatten)]
    pub quadrature: QuadratureArgs,
    #[command(flatten)]
    pub tolerances: ToleranceArgs,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    pub instance: PathBuf,
    #[arg(long, value_delimiter = ',')]
    pub p_grid: Option<Vec<f64>>,
    /// Add the phase-grid oracle column (scalar commutants only).
    #[arg(long)]
    pub with_oracle: bool,
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output path; `.csv` and `.json` are appended as emitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Emit::Both)]
    pub emit: Emit,
    #[command(flatten)]
    pub optimizer: OptimizerArgs,
    #[command(flatten)]
    pub tolerances: ToleranceArgs,
}

#[derive(Debug, Args)]
pub struct TrotterArgs {
    pub instance: PathBuf,
    #[arg(long, value_delimiter = ',', default_value = "1,2,4,8,16,32,64,128,256,512,1024")]
    pub p_list: Vec<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Emit::Both)]
    pub emit: Emit,
    #[command(flatten)]
    pub tolerances: ToleranceArgs,
}

#[derive(Debug, Args)]
pub struct RerunArgs {
    #[arg(required = true)]
    pub reports: Vec<PathBuf>,
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cfg = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { 0 };
        }
    };
    let pool = match thread_pool() {
        Ok(p) => p,
        Err(msg) => {
            eprintln!("error: {msg}");
            return EXIT_USAGE;
        }
    };
    let out = pool.install(|| match cfg.command {
        Command::Gen(a) => cmd_gen(&a),
        Command::Verify(a) => cmd_verify(&a),
        Command::Sweep(a) => cmd_sweep(&a),
        Command::Trotter(a) => cmd_trotter(&a),
        Command::Rerun(a) => cmd_rerun(&a),
    });
    match out {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}

fn thread_pool() -> std::result::Result<rayon::ThreadPool, String> {
    let n = match std::env::var("SWIVEL_NUM_THREADS") {
        Ok(s) => s
            .trim()
            .parse::<usize>()
            .map_err(|_| format!("SWIVEL_NUM_THREADS must be a non-negative integer, got {s:?}"))?,
        Err(_) => 0,
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build()
        .map_err(|e| e.to_string())
}

fn install_tolerances(t: Tolerances) -> Result<()> {
    if tolerances::set_global(t) || *tolerances::get() == t {
        Ok(())
    } else {
        Err(Error::DomainError(
            "tolerances were already fixed to different values in this process".into(),
        ))
    }
}

fn usage(msg: impl Into<String>) -> Error {
    Error::DomainError(msg.into())
}

fn is_json_file(p: &Path) -> bool {
    p.extension().is_some_and(|e| e == "json")
}

fn display(p: &Path) -> String {
    p.display().to_string()
}

fn stem(p: &Path) -> String {
    p.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "instance".into())
}

pub fn cmd_gen(a: &GenArgs) -> Result<i32> {
    if a.count == 0 {
        return Err(usage("--count must be at least 1"));
    }
    let single_file = a.count == 1 && is_json_file(&a.out);
    let dir = if single_file {
        a.out.parent().map(Path::to_path_buf).unwrap_or_default()
    } else {
        a.out.clone()
    };
    if !dir.as_os_str().is_empty() {
        std::fs::create_dir_all(&dir)?;
    }
    let specs: Vec<GenSpec> = (0..a.count as u64)
        .map(|i| {
            let seed = a.seed.checked_add(i).ok_or_else(|| usage("seed + count overflows u64"))?;
            let mut spec = match a.kind {
                GenKind::TripartiteDensity => {
                    let dims = a.dims.clone().ok_or_else(|| usage("tripartiteDensity needs --dims a,b,c"))?;
                    GenSpec::tripartite(dims, seed)
                }
                kind => {
                    let dim = a.dim.ok_or_else(|| usage("--dim is required"))?;
                    GenSpec::new(kind, dim, a.operators, seed)
                }
            };
            spec.rank = a.rank;
            if let Some(c) = a.condition_cap {
                spec.condition_cap = c;
            }
            spec.validate()?;
            Ok(spec)
        })
        .collect::<Result<_>>()?;
    let paths = specs
        .par_iter()
        .map(|spec| {
            let inst = generate(spec)?;
            let path = if single_file {
                a.out.clone()
            } else {
                dir.join(format!("{}.json", spec.label()))
            };
            save_instance(&path, &inst)?;
            Ok(path)
        })
        .collect::<Result<Vec<_>>>()?;
    for p in paths {
        println!("{}", p.display());
    }
    Ok(0)
}

/// Expands directories into their `.json` files, sorted by name.
fn expand_inputs(inputs: &[PathBuf]) -> Result<Vec<PathBuf>> {
    let mut out = Vec::new();
    for p in inputs {
        if p.is_dir() {
            let mut files: Vec<PathBuf> = std::fs::read_dir(p)?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|f| f.is_file() && is_json_file(f))
                .collect();
            files.sort();
            out.extend(files);
        } else {
            out.push(p.clone());
        }
    }
    if out.is_empty() {
        return Err(usage("no instance files found"));
    }
    Ok(out)
}

fn check_params(ineq: Inequality, params: &RunParameters) -> Result<()> {
    if !(params.tolerance >= 0.0) {
        return Err(usage(format!("tolerance must be non-negative, got {}", params.tolerance)));
    }
    match ineq {
        Inequality::Hirschman => {
            let (Some(p), Some(q)) = (params.p, params.q) else {
                return Err(usage("hirschman needs --p and --q"));
            };
            if !(q >= 1.0 && q < p) {
                return Err(usage(format!("hirschman needs 1 <= q < p, got p = {p}, q = {q}")));
            }
        }
        Inequality::Gt => {
            if params.q.is_none() {
                return Err(usage("gt needs --q"));
            }
        }
        Inequality::Monotone => {
            let grid = params.p_grid.as_deref().unwrap_or(&[]);
            if grid.windows(2).any(|w| w[1] <= w[0]) {
                return Err(usage(format!("p grid must be strictly ascending: {grid:?}")));
            }
        }
    }
    Ok(())
}

/// Runs one verification exactly as described by `params` (which must
/// already be resolved: every field the inequality needs is present).
pub fn run_verification(ineq: Inequality, inst: &Instance, params: &RunParameters) -> Result<VerificationReport> {
    check_params(ineq, params)?;
    let quad = params.quadrature.clone().unwrap_or_default();
    let tol = params.tolerance;
    match ineq {
        Inequality::Monotone => {
            let grid = params.p_grid.clone().unwrap_or_else(|| DEFAULT_P_GRID.to_vec());
            let cfg = params.optimizer.clone().unwrap_or_default();
            if inst.tensor_shape.is_some() {
                let (rho, shape) = inst.tripartite()?;
                verify_marginal_monotone(&MarginalChain::new(rho, shape)?, &grid, &cfg, tol)
            } else {
                verify_monotone(&inst.chain()?, &grid, &cfg, tol)
            }
        }
        Inequality::Hirschman => {
            let (p, q) = (params.p.unwrap_or_default(), params.q.unwrap_or_default());
            verify_hirschman(&inst.chain()?, p, q, &quad, tol)
        }
        Inequality::Gt => verify_gt(&inst.chain()?, params.q.unwrap_or(1.0), &quad, tol),
    }
}

/// Repeats the verification recorded in `report` from its embedded instance
/// and parameters.
pub fn rerun_report(report: &ReportFile) -> Result<VerificationReport> {
    install_tolerances(report.parameters.tolerances)?;
    let inst = report.instance.to_instance()?;
    run_verification(report.inequality, &inst, &report.parameters)
}

fn resolve_params(a: &VerifyArgs) -> RunParameters {
    let mut params = RunParameters {
        p: None,
        q: None,
        p_grid: None,
        tolerance: a.tol,
        optimizer: None,
        quadrature: None,
        tolerances: *tolerances::get(),
    };
    match a.inequality {
        Inequality::Monotone => {
            params.p_grid = Some(a.p_grid.clone().unwrap_or_else(|| DEFAULT_P_GRID.to_vec()));
            params.optimizer = Some(a.optimizer.resolve(a.seed));
        }
        Inequality::Hirschman => {
            params.p = a.p;
            params.q = a.q;
            params.quadrature = Some(a.quadrature.resolve());
        }
        Inequality::Gt => {
            params.q = Some(a.q.unwrap_or(1.0));
            params.quadrature = Some(a.quadrature.resolve());
        }
    }
    params
}

#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
struct SummaryRow {
    instance: String,
    status: String,
    lhs: f64,
    rhs: f64,
    slack: f64,
    error: String,
}

enum Outcome {
    Done(Box<VerificationReport>),
    Failed(Error),
}

fn outcome_code(o: &Outcome) -> i32 {
    match o {
        Outcome::Done(r) => r.status.exit_code(),
        Outcome::Failed(_) => EXIT_USAGE,
    }
}

/// Batch exit code: VIOLATED beats input errors, which beat INCONCLUSIVE.
fn combine_codes(codes: impl IntoIterator<Item = i32>) -> i32 {
    let rank = |c: i32| match c {
        2 => 3,
        1 => 2,
        3 => 1,
        _ => 0,
    };
    codes.into_iter().max_by_key(|&c| rank(c)).unwrap_or(0)
}

pub fn cmd_verify(a: &VerifyArgs) -> Result<i32> {
    install_tolerances(a.tolerances.resolve())?;
    let params = resolve_params(a);
    check_params(a.inequality, &params)?;
    if let Some(cfg) = &params.optimizer {
        cfg.validate()?;
    }
    if let Some(q) = &params.quadrature {
        q.validate()?;
    }
    let inputs = expand_inputs(&a.instances)?;
    let single_file = inputs.len() == 1 && is_json_file(&a.out);
    let dir = if single_file {
        a.out.parent().map(Path::to_path_buf).unwrap_or_default()
    } else {
        a.out.clone()
    };
    if !dir.as_os_str().is_empty() {
        std::fs::create_dir_all(&dir)?;
    }

    let outcomes: Vec<Outcome> = inputs
        .par_iter()
        .map(|path| {
            let res = load_instance(path).and_then(|inst| {
                let rep = run_verification(a.inequality, &inst, &params)?;
                if a.emit.report() {
                    let target = if single_file {
                        a.out.clone()
                    } else {
                        dir.join(format!("{}.{}.json", stem(path), a.inequality))
                    };
                    let file = ReportFile::new(&rep, params.clone(), &inst, Some(display(path)));
                    save_report(&target, &file)?;
                }
                Ok(rep)
            });
            match res {
                Ok(r) => Outcome::Done(Box::new(r)),
                Err(e) => Outcome::Failed(e),
            }
        })
        .collect();

    let mut rows = Vec::with_capacity(inputs.len());
    for (path, o) in inputs.iter().zip(&outcomes) {
        let row = match o {
            Outcome::Done(r) => SummaryRow {
                instance: display(path),
                status: r.status.to_string(),
                lhs: r.lhs,
                rhs: r.rhs,
                slack: r.slack,
                error: String::new(),
            },
            Outcome::Failed(e) => SummaryRow {
                instance: display(path),
                status: "ERROR".into(),
                lhs: f64::NAN,
                rhs: f64::NAN,
                slack: f64::NAN,
                error: e.to_string(),
            },
        };
        println!(
            "{:<28} {:<8} lhs {:>14.8e}  rhs {:>14.8e}  slack {:>11.3e}  {}",
            row.status, a.inequality, row.lhs, row.rhs, row.slack, row.instance
        );
        if !row.error.is_empty() {
            eprintln!("error: {}: {}", row.instance, row.error);
        }
        rows.push(row);
    }
    if a.emit.csv() || inputs.len() > 1 {
        write_csv(dir.join(format!("summary.{}.csv", a.inequality)), &rows)?;
    }
    print_summary(&rows);
    Ok(combine_codes(outcomes.iter().map(outcome_code)))
}

fn print_summary(rows: &[SummaryRow]) {
    let slacks: Vec<(f64, &str)> = rows
        .iter()
        .filter(|r| r.slack.is_finite())
        .map(|r| (r.slack, r.instance.as_str()))
        .collect();
    let count = |s: &str| rows.iter().filter(|r| r.status == s).count();
    println!(
        "{} instance(s): {} HOLDS, {} VIOLATED_BEYOND_TOL, {} INCONCLUSIVE_OPTIMIZER_GAP, {} ERROR",
        rows.len(),
        count("HOLDS"),
        count("VIOLATED_BEYOND_TOL"),
        count("INCONCLUSIVE_OPTIMIZER_GAP"),
        count("ERROR")
    );
    if let Some(&(min, worst)) = slacks.iter().min_by(|a, b| a.0.total_cmp(&b.0)) {
        let mean = slacks.iter().map(|s| s.0).sum::<f64>() / slacks.len() as f64;
        println!("min slack {min:.6e}  mean slack {mean:.6e}  worst {worst}");
    }
}

/// A sweep or Lie-Trotter table together with everything that produced it.
#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
struct TableFile<R> {
    schema_version: u32,
    tool_version: String,
    table: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    optimizer: Option<OptimizerConfig>,
    tolerances: Tolerances,
    #[serde(skip_serializing_if = "Option::is_none")]
    reference: Option<f64>,
    rows: Vec<R>,
    instance_path: String,
    instance: InstanceDoc,
}

fn emit_table<R: Serialize>(base: &Path, emit: Emit, rows: Vec<R>, file: impl FnOnce(Vec<R>) -> TableFile<R>) -> Result<()> {
    if emit.csv() {
        let path = with_suffix(base, "csv");
        write_csv(&path, &rows)?;
        println!("wrote {}", path.display());
    }
    if emit.report() {
        let path = with_suffix(base, "json");
        let mut s = serde_json::to_string_pretty(&file(rows)).map_err(|e| Error::Io(std::io::Error::other(e)))?;
        s.push('\n');
        write_atomic(&path, s.as_bytes())?;
        println!("wrote {}", path.display());
    }
    Ok(())
}

/// `base.ext`, replacing a trailing `.csv`/`.json` rather than stacking.
fn with_suffix(base: &Path, ext: &str) -> PathBuf {
    match base.extension().and_then(|e| e.to_str()) {
        Some("csv" | "json") => base.with_extension(ext),
        _ => PathBuf::from(format!("{}.{ext}", base.display())),
    }
}

fn output_base(out: &Option<PathBuf>, input: &Path, suffix: &str) -> PathBuf {
    match out {
        Some(p) => {
            if let Some(parent) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                let _ = std::fs::create_dir_all(parent);
            }
            p.clone()
        }
        None => input.with_file_name(format!("{}.{suffix}", stem(input))),
    }
}

pub fn cmd_sweep(a: &SweepArgs) -> Result<i32> {
    install_tolerances(a.tolerances.resolve())?;
    let grid = a.p_grid.clone().unwrap_or_else(|| DEFAULT_P_GRID.to_vec());
    let cfg = a.optimizer.resolve(a.seed);
    cfg.validate()?;
    let inst = load_instance(&a.instance)?;
    let rows: Vec<SweepRow>;
    let mut claimed = vec![true; grid.len()];
    if inst.tensor_shape.is_some() {
        let (rho, shape) = inst.tripartite()?;
        let chain = MarginalChain::new(rho, shape)?;
        let oracle = if a.with_oracle {
            let g = PhaseGridConfig::auto(chain.rho_c().dim().saturating_sub(1));
            Some(
                grid.iter()
                    .map(|&p| marginal_phase_grid(&chain, p, &g).map(|r| r.value))
                    .collect::<Result<Vec<_>>>()?,
            )
        } else {
            None
        };
        let pts = sweep_marginal(&chain, &grid, &cfg)?;
        claimed = pts.iter().map(|s| s.in_claimed_range).collect();
        rows = pts
            .iter()
            .enumerate()
            .map(|(i, s)| SweepRow {
                p: s.p,
                value: s.value,
                oracle_value: oracle.as_ref().map(|o| o[i]),
                restart_spread: s.restart_spread,
            })
            .collect();
    } else {
        let chain = inst.chain()?;
        let oracle = if a.with_oracle {
            let g = PhaseGridConfig::auto(free_phase_count(&chain));
            Some(
                grid.iter()
                    .map(|&p| phase_grid_search(&chain, p, &g).map(|r| r.value))
                    .collect::<Result<Vec<_>>>()?,
            )
        } else {
            None
        };
        rows = sweep_p(&chain, &grid, &cfg)?
            .iter()
            .enumerate()
            .map(|(i, s)| SweepRow {
                p: s.p,
                value: s.value,
                oracle_value: oracle.as_ref().map(|o| o[i]),
                restart_spread: s.restart_spread(),
            })
            .collect();
    }
    for r in &rows {
        match r.oracle_value {
            Some(o) => println!("p {:>8}  value {:.12e}  oracle {:.12e}", r.p, r.value, o),
            None => println!("p {:>8}  value {:.12e}", r.p, r.value),
        }
    }
    let in_range = |f: fn(&SweepRow) -> Option<f64>| -> Option<Vec<f64>> {
        rows.iter().zip(&claimed).filter(|(_, &c)| c).map(|(r, _)| f(r)).collect()
    };
    let values = in_range(|r| Some(r.value)).unwrap_or_default();
    let oracle = in_range(|r| r.oracle_value);
    let code = match first_increase(&values, a.tol) {
        None => 0,
        Some(_) => match oracle.as_deref().map(|o| first_increase(o, a.tol)) {
            Some(Some(_)) => Status::ViolatedBeyondTol.exit_code(),
            _ => Status::InconclusiveOptimizerGap.exit_code(),
        },
    };
    if code != 0 {
        println!("curve rises beyond relative tolerance {}", a.tol);
    }
    let base = output_base(&a.out, &a.instance, "sweep");
    emit_table(&base, a.emit, rows, |rows| TableFile {
        schema_version: SCHEMA_VERSION,
        tool_version: tool_version(),
        table: "sweep",
        optimizer: Some(cfg.clone()),
        tolerances: *tolerances::get(),
        reference: None,
        rows,
        instance_path: display(&a.instance),
        instance: InstanceDoc::from_instance(&inst),
    })?;
    Ok(code)
}

pub fn cmd_trotter(a: &TrotterArgs) -> Result<i32> {
    install_tolerances(a.tolerances.resolve())?;
    if a.p_list.iter().any(|&p| !(p >= 1.0 && p.is_finite())) {
        return Err(usage(format!("p list entries must be finite and >= 1: {:?}", a.p_list)));
    }
    let inst = load_instance(&a.instance)?;
    let table = lie_trotter_convergence(&inst.chain()?, &a.p_list)?;
    println!("reference Tr exp(sum log C_i) = {:.15e}", table.reference);
    for r in &table.rows {
        println!("p {:>8}  value {:.15e}  rel error {:.3e}", r.p, r.value, r.rel_error);
    }
    let base = output_base(&a.out, &a.instance, "trotter");
    let reference = table.reference;
    emit_table::<TrotterRow>(&base, a.emit, table.rows, |rows| TableFile {
        schema_version: SCHEMA_VERSION,
        tool_version: tool_version(),
        table: "trotter",
        optimizer: None,
        tolerances: *tolerances::get(),
        reference: Some(reference),
        rows,
        instance_path: display(&a.instance),
        instance: InstanceDoc::from_instance(&inst),
    })?;
    Ok(0)
}

pub fn cmd_rerun(a: &RerunArgs) -> Result<i32> {
    let mut codes = Vec::new();
    for path in &a.reports {
        let saved = load_report(path)?;
        let (lhs, rhs) = saved.sides()?;
        let rep = rerun_report(&saved)?;
        let same = lhs.to_bits() == rep.lhs.to_bits() && rhs.to_bits() == rep.rhs.to_bits();
        println!(
            "{} {}: lhs {:e} rhs {:e} {}",
            if same { "IDENTICAL" } else { "DIFFERS" },
            path.display(),
            rep.lhs,
            rep.rhs,
            rep.status
        );
        codes.push(if same { 0 } else { EXIT_RERUN_MISMATCH });
    }
    Ok(codes.into_iter().max().unwrap_or(0))
}

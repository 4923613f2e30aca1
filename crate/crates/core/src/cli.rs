//! The `qpc` command line: parameter sweeps, single measurements and the
//! golden-value check.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::capabilities::{self, CapabilityKind, MeasureKind, MeasureResult};
use crate::error::{QpcError, Result};
use crate::processes::{cz_process, demo_process, NoiseModel, ProcessFile, ProcessMatrix};
use crate::qmath::{c, ComplexVector};
use crate::resources;
use crate::tol;
use crate::validation;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_SOLVER: i32 = 2;

pub const CSV_HEADER: &str = "t,capability,alpha,beta,f_expt,f_threshold,eta,status";

/// Overlaps at least this close to one mean the target is itself incapable.
const NOT_APPLICABLE_THRESHOLD: f64 = 1.0 - 1e-6;

#[derive(Debug, Parser)]
#[command(name = "qpc", version, about = "Capability measures of quantum processes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate measures of the Ising demonstration over a time grid.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// CSV destination; overrides `output_path` from the config.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate one measure of one process and print it as JSON.
    Measure {
        /// Process matrix JSON file (`{"dim": d, "entries": [[re, im], ...]}`).
        #[arg(long, conflicts_with = "builtin", required_unless_present = "builtin")]
        process: Option<PathBuf>,
        /// `cz`, `identity` or `ising:t=<t>,gamma=<rate>[,target=<0|1>]`.
        #[arg(long)]
        builtin: Option<String>,
        #[arg(long)]
        kind: String,
        #[arg(long)]
        measure: String,
        /// Include the optimal incapable component.
        #[arg(long)]
        witness: bool,
    },
    /// Check the reference values of the demonstration.
    Validate {
        #[arg(long, hide = true, allow_negative_numbers = true)]
        tolerance_override: Option<f64>,
    },
}

/// Entry point used by the binary; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match cli.command {
        Command::Sweep { config, out } => cmd_sweep(&config, out.as_deref()),
        Command::Measure { process, builtin, kind, measure, witness } => {
            cmd_measure(process.as_deref(), builtin.as_deref(), &kind, &measure, witness)
        }
        Command::Validate { tolerance_override } => cmd_validate(tolerance_override),
    }
}

fn exit_code(e: &QpcError) -> i32 {
    match e {
        QpcError::Solver(_) | QpcError::Infeasible => EXIT_SOLVER,
        _ => EXIT_INPUT,
    }
}

// ---------------------------------------------------------------- sweep

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeGrid {
    pub start: f64,
    pub stop: f64,
    /// Number of grid points, endpoints included.
    pub steps: usize,
}

impl TimeGrid {
    pub fn points(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.start];
        }
        let h = (self.stop - self.start) / (self.steps - 1) as f64;
        (0..self.steps).map(|i| if i + 1 == self.steps { self.stop } else { self.start + h * i as f64 }).collect()
    }
}

/// A complex vector as a list of `[re, im]` pairs.
pub type VectorSpec = Vec<[f64; 2]>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CapabilitySpec {
    Name(String),
    WithBasis { kind: String, basis: Option<Vec<VectorSpec>> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TargetSpec {
    Named(String),
    File { file: PathBuf },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default = "default_gamma")]
    pub gamma: f64,
    #[serde(default = "default_noise_target")]
    pub noise_target_qubit: usize,
    pub t_grid: TimeGrid,
    pub capabilities: Vec<CapabilitySpec>,
    #[serde(default = "default_target")]
    pub target: TargetSpec,
    /// Overrides the default superposition basis of `superposition` entries.
    #[serde(default)]
    pub superposition_basis: Option<Vec<VectorSpec>>,
    #[serde(default = "default_measures")]
    pub measures: Vec<String>,
    #[serde(default)]
    pub output_path: Option<PathBuf>,
    /// Hermiticity/trace tolerance applied to a target read from file.
    #[serde(default = "default_ingest_tolerance")]
    pub process_tolerance: f64,
}

fn default_gamma() -> f64 {
    0.02
}

fn default_noise_target() -> usize {
    1
}

fn default_target() -> TargetSpec {
    TargetSpec::Named("cz".into())
}

fn default_measures() -> Vec<String> {
    vec!["alpha".into(), "beta".into(), "fidelity".into()]
}

fn default_ingest_tolerance() -> f64 {
    tol::INGEST
}

fn parse_vector(spec: &VectorSpec) -> ComplexVector {
    ComplexVector::from_iterator(spec.len(), spec.iter().map(|[re, im]| c(*re, *im)))
}

fn parse_basis(spec: &[VectorSpec]) -> Vec<ComplexVector> {
    spec.iter().map(parse_vector).collect()
}

/// A validated sweep configuration.
#[derive(Debug, Clone)]
pub struct SweepPlan {
    pub noise: NoiseModel,
    pub times: Vec<f64>,
    pub capabilities: Vec<CapabilityKind>,
    pub target: ProcessMatrix,
    pub alpha: bool,
    pub beta: bool,
    pub fidelity: bool,
}

impl RunConfig {
    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Ok(serde_json::from_str(&text)?)
    }

    /// Resolve relative target paths against `base`.
    pub fn plan(&self, base: &Path) -> Result<SweepPlan> {
        let noise = NoiseModel::new(self.gamma, self.noise_target_qubit)?;
        if self.t_grid.steps < 1 {
            return Err(QpcError::InvalidArgument("t_grid.steps must be at least 1".into()));
        }
        if !(self.t_grid.start >= 0.0 && self.t_grid.stop >= self.t_grid.start && self.t_grid.stop.is_finite()) {
            return Err(QpcError::InvalidArgument("t_grid needs 0 <= start <= stop".into()));
        }
        let mut capabilities = Vec::with_capacity(self.capabilities.len());
        for spec in &self.capabilities {
            let (name, basis) = match spec {
                CapabilitySpec::Name(name) => (name, None),
                CapabilitySpec::WithBasis { kind, basis } => (kind, basis.as_ref()),
            };
            let mut kind: CapabilityKind = name.parse()?;
            if let Some(basis) = basis {
                kind = kind.with_basis(parse_basis(basis));
            } else if let (CapabilityKind::Superposition { .. }, Some(basis)) = (&kind, &self.superposition_basis) {
                kind = kind.with_basis(parse_basis(basis));
            }
            kind.validate(4)?;
            capabilities.push(kind);
        }
        if capabilities.is_empty() {
            return Err(QpcError::InvalidArgument("no capabilities requested".into()));
        }
        let target = match &self.target {
            TargetSpec::Named(name) => named_target(name)?,
            TargetSpec::File { file } => read_process(&base.join(file), self.process_tolerance)?,
        };
        if target.dim() != 4 {
            return Err(QpcError::Dimension(format!("target acts on dimension {}, expected 4", target.dim())));
        }
        let mut plan = SweepPlan {
            noise,
            times: self.t_grid.points(),
            capabilities,
            target,
            alpha: false,
            beta: false,
            fidelity: false,
        };
        for m in &self.measures {
            match m.parse::<MeasureKind>()? {
                MeasureKind::Alpha => plan.alpha = true,
                MeasureKind::Beta => plan.beta = true,
                MeasureKind::FidelityThreshold => plan.fidelity = true,
            }
        }
        Ok(plan)
    }
}

fn named_target(name: &str) -> Result<ProcessMatrix> {
    match name {
        "cz" => Ok(cz_process()),
        "identity" => Ok(ProcessMatrix::identity(4)),
        other => Err(QpcError::InvalidArgument(format!("unknown target `{other}`"))),
    }
}

pub fn read_process(path: &Path, tolerance: f64) -> Result<ProcessMatrix> {
    let text = std::fs::read_to_string(path)?;
    let file: ProcessFile = serde_json::from_str(&text)?;
    file.to_process(tolerance)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub t: f64,
    pub capability: String,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub f_expt: Option<f64>,
    pub f_threshold: Option<f64>,
    pub eta: Option<f64>,
    pub status: String,
}

impl SweepRow {
    pub fn failed(&self) -> bool {
        self.status != "optimal" && self.status != "not-applicable"
    }

    fn csv_line(&self) -> String {
        let num = |v: Option<f64>| v.map_or_else(String::new, |x| format!("{x:.8e}"));
        format!(
            "{:.8e},{},{},{},{},{},{},{}",
            self.t,
            self.capability,
            num(self.alpha),
            num(self.beta),
            num(self.f_expt),
            num(self.f_threshold),
            num(self.eta),
            self.status
        )
    }
}

enum Threshold {
    Value(f64),
    NotApplicable,
    Failed(String),
}

fn failure_status(e: &QpcError) -> String {
    match e {
        QpcError::Infeasible => "infeasible".into(),
        QpcError::Solver(status) => format!("solver-{status}"),
        other => format!("error: {}", other.to_string().replace(',', ";")),
    }
}

/// Evaluate every `(t, capability)` row; rows are ordered by `t`, then by
/// the configured capability order.
pub fn run_sweep(plan: &SweepPlan) -> Vec<SweepRow> {
    // The threshold depends only on (capability, target).
    let thresholds: Vec<Threshold> = plan
        .capabilities
        .par_iter()
        .map(|kind| {
            if !plan.fidelity {
                return Threshold::NotApplicable;
            }
            match capabilities::fidelity_threshold(&plan.target, kind) {
                Ok(r) if r.value >= NOT_APPLICABLE_THRESHOLD => Threshold::NotApplicable,
                Ok(r) => Threshold::Value(r.value),
                Err(e) => Threshold::Failed(failure_status(&e)),
            }
        })
        .collect();

    let cells: Vec<(f64, usize)> =
        plan.times.iter().flat_map(|&t| (0..plan.capabilities.len()).map(move |k| (t, k))).collect();
    cells.par_iter().map(|&(t, k)| sweep_row(plan, t, k, &thresholds[k])).collect()
}

fn sweep_row(plan: &SweepPlan, t: f64, k: usize, threshold: &Threshold) -> SweepRow {
    let kind = &plan.capabilities[k];
    let mut row = SweepRow {
        t,
        capability: kind.name().to_string(),
        alpha: None,
        beta: None,
        f_expt: None,
        f_threshold: None,
        eta: None,
        status: "optimal".into(),
    };
    let mut failure: Option<String> = None;
    let mut not_applicable = false;
    let chi = match demo_process(t, &plan.noise) {
        Ok(chi) => chi,
        Err(e) => {
            row.status = failure_status(&e);
            return row;
        }
    };
    let mut record = |r: Result<MeasureResult>| -> Option<f64> {
        match r {
            Ok(r) => Some(r.value),
            Err(e) => {
                failure.get_or_insert_with(|| failure_status(&e));
                None
            }
        }
    };
    if plan.alpha {
        row.alpha = record(capabilities::alpha(&chi, kind));
    }
    if plan.beta {
        row.beta = record(capabilities::beta(&chi, kind));
    }
    if plan.fidelity {
        match threshold {
            Threshold::Value(v) => {
                row.f_threshold = Some(*v);
                row.f_expt = capabilities::process_fidelity(&chi, &plan.target).ok();
            }
            Threshold::NotApplicable => not_applicable = true,
            Threshold::Failed(status) => {
                failure.get_or_insert_with(|| status.clone());
            }
        }
    }
    let eta = match kind {
        CapabilityKind::EntanglementGeneration => Some(resources::entanglement_efficiency(t, &plan.noise)),
        CapabilityKind::Superposition { basis } => {
            Some(resources::superposition_efficiency(t, &plan.noise, basis).map(|(_, normalized)| normalized))
        }
        _ => None,
    };
    match eta {
        Some(Ok(v)) => row.eta = Some(v),
        Some(Err(e)) => {
            failure.get_or_insert_with(|| failure_status(&e));
        }
        None => {}
    }
    if let Some(status) = failure {
        row.status = status;
    } else if not_applicable {
        row.status = "not-applicable".into();
    }
    row
}

pub fn rows_to_csv(rows: &[SweepRow]) -> String {
    let mut out = String::with_capacity(64 * (rows.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for row in rows {
        let _ = writeln!(out, "{}", row.csv_line());
    }
    out
}

fn cmd_sweep(config_path: &Path, out: Option<&Path>) -> i32 {
    let config = match RunConfig::from_path(config_path) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("qpc: cannot read config {}: {e}", config_path.display());
            return EXIT_INPUT;
        }
    };
    let base = config_path.parent().unwrap_or(Path::new("."));
    let plan = match config.plan(base) {
        Ok(p) => p,
        Err(e) => {
            eprintln!("qpc: invalid config: {e}");
            return EXIT_INPUT;
        }
    };
    let rows = run_sweep(&plan);
    let csv = rows_to_csv(&rows);
    let destination = out.map(Path::to_path_buf).or_else(|| config.output_path.map(|p| base.join(p)));
    match destination {
        Some(path) => {
            if let Err(e) = std::fs::write(&path, csv) {
                eprintln!("qpc: cannot write {}: {e}", path.display());
                return EXIT_INPUT;
            }
        }
        None => print!("{csv}"),
    }
    let failures = rows.iter().filter(|r| r.failed()).count();
    if failures > 0 {
        eprintln!("qpc: {failures} of {} rows did not solve", rows.len());
        return EXIT_SOLVER;
    }
    EXIT_OK
}

// -------------------------------------------------------------- measure

/// Parse `cz`, `identity` or `ising:t=..,gamma=..[,target=..]`.
pub fn parse_builtin(spec: &str) -> Result<ProcessMatrix> {
    let bad = || QpcError::InvalidArgument(format!("cannot parse builtin process `{spec}`"));
    if let Some(params) = spec.strip_prefix("ising:") {
        let (mut t, mut gamma, mut target) = (None, 0.0, 1usize);
        for pair in params.split(',').filter(|p| !p.is_empty()) {
            let (key, value) = pair.split_once('=').ok_or_else(bad)?;
            match key.trim() {
                "t" => t = Some(parse_number(value.trim()).ok_or_else(bad)?),
                "gamma" => gamma = parse_number(value.trim()).ok_or_else(bad)?,
                "target" => target = value.trim().parse().map_err(|_| bad())?,
                _ => return Err(bad()),
            }
        }
        return demo_process(t.ok_or_else(bad)?, &NoiseModel::new(gamma, target)?);
    }
    named_target(spec)
}

/// Decimal numbers, optionally written as multiples of `pi` (`pi`, `2pi`,
/// `0.5pi`, `pi/2`).
fn parse_number(s: &str) -> Option<f64> {
    let pi = std::f64::consts::PI;
    if let Ok(v) = s.parse::<f64>() {
        return Some(v);
    }
    let (numerator, denominator) = match s.split_once('/') {
        Some((a, b)) => (a, b.parse::<f64>().ok()?),
        None => (s, 1.0),
    };
    let factor = numerator.strip_suffix("pi")?;
    let factor = if factor.is_empty() { 1.0 } else { factor.trim_end_matches('*').parse::<f64>().ok()? };
    Some(factor * pi / denominator)
}

#[derive(Debug, Serialize)]
struct MeasureOutput<'a> {
    kind: &'a str,
    measure: &'a str,
    value: f64,
    status: &'a str,
    report: &'a capabilities::SolveReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<ProcessFile>,
}

fn cmd_measure(process: Option<&Path>, builtin: Option<&str>, kind: &str, measure: &str, witness: bool) -> i32 {
    let chi = match (process, builtin) {
        (Some(path), _) => read_process(path, tol::INGEST),
        (None, Some(spec)) => parse_builtin(spec),
        (None, None) => Err(QpcError::InvalidArgument("either --process or --builtin is required".into())),
    };
    let parsed = chi.and_then(|chi| Ok((chi, kind.parse::<CapabilityKind>()?, measure.parse::<MeasureKind>()?)));
    let (chi, kind, measure) = match parsed {
        Ok(v) => v,
        Err(e) => {
            eprintln!("qpc: {e}");
            return EXIT_INPUT;
        }
    };
    let kind = match (&kind, chi.dim()) {
        (CapabilityKind::CoherenceCreation { .. }, d) => CapabilityKind::coherence_creation(d),
        (CapabilityKind::CoherencePreservation { .. }, d) => CapabilityKind::coherence_preservation(d),
        (CapabilityKind::Superposition { .. }, d) => CapabilityKind::superposition(d),
        _ => kind,
    };
    match capabilities::evaluate(&chi, &kind, measure) {
        Ok(result) => {
            let output = MeasureOutput {
                kind: kind.name(),
                measure: measure.name(),
                value: result.value,
                status: &result.report.status,
                report: &result.report,
                witness: witness.then(|| result.witness.to_file()),
            };
            println!("{}", serde_json::to_string_pretty(&output).expect("serialisable output"));
            EXIT_OK
        }
        Err(e) => {
            eprintln!("qpc: {e}");
            exit_code(&e)
        }
    }
}

// ------------------------------------------------------------- validate

fn cmd_validate(tolerance_override: Option<f64>) -> i32 {
    let rows = validation::golden_rows();
    let mut failed = 0;
    for row in &rows {
        let result = validation::run_row(row, tolerance_override);
        println!("{result}");
        if !result.passed() {
            failed += 1;
        }
    }
    println!("{} of {} rows passed", rows.len() - failed, rows.len());
    if failed == 0 {
        EXIT_OK
    } else {
        EXIT_INPUT
    }
}

//! Golden reference values for the demonstration, evaluated as a table of
//! pass/fail rows. Shared by `qpc validate` and the acceptance tests.

use std::f64::consts::PI;
use std::fmt;
use std::time::Instant;

use crate::capabilities::{self, CapabilityKind};
use crate::error::Result;
use crate::processes::{self, compose, cz_process, demo_process, depolarizing, mix, NoiseModel};
use crate::qmath::{self, c, ComplexMatrix, DensityMatrix, ZERO};
use crate::resources;
use crate::tol;

/// What a failing row means.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FailureMode {
    Fail,
    /// The row checks a modelling choice rather than an implementation.
    ModelMismatch,
}

pub struct GoldenRow {
    pub criterion: &'static str,
    pub label: String,
    pub expected: f64,
    pub tolerance: f64,
    pub on_failure: FailureMode,
    compute: Box<dyn Fn() -> Result<f64> + Send + Sync>,
}

impl GoldenRow {
    fn new(
        criterion: &'static str,
        label: impl Into<String>,
        expected: f64,
        tolerance: f64,
        compute: impl Fn() -> Result<f64> + Send + Sync + 'static,
    ) -> Self {
        Self {
            criterion,
            label: label.into(),
            expected,
            tolerance,
            on_failure: FailureMode::Fail,
            compute: Box::new(compute),
        }
    }

    fn model_check(mut self) -> Self {
        self.on_failure = FailureMode::ModelMismatch;
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Outcome {
    Pass,
    Fail,
    ModelMismatch,
    Error(String),
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Outcome::Pass => f.write_str("PASS"),
            Outcome::Fail => f.write_str("FAIL"),
            Outcome::ModelMismatch => f.write_str("FAIL model-mismatch"),
            Outcome::Error(e) => write!(f, "ERROR {e}"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct RowResult {
    pub criterion: &'static str,
    pub label: String,
    pub measured: Option<f64>,
    pub expected: f64,
    pub tolerance: f64,
    pub outcome: Outcome,
    pub seconds: f64,
}

impl RowResult {
    pub fn passed(&self) -> bool {
        self.outcome == Outcome::Pass
    }
}

impl fmt::Display for RowResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let measured = self.measured.map_or_else(|| "-".to_string(), |v| format!("{v:.6}"));
        write!(
            f,
            "{:<5} {:<46} measured {:>10}  expected {:>8}  tol {:.1e}  {}  ({:.2} s)",
            self.criterion, self.label, measured, self.expected, self.tolerance, self.outcome, self.seconds
        )
    }
}

/// The single-qubit depolarising matrix written out entrywise, with survival
/// probability `e`.
pub fn reference_depolarizing(e: f64) -> ComplexMatrix {
    let a = c((1.0 + e) / 4.0, 0.0);
    let b = c((1.0 - e) / 4.0, 0.0);
    let o = c(e / 2.0, 0.0);
    #[rustfmt::skip]
    let entries = [
        a,    ZERO, ZERO, o,
        ZERO, b,    ZERO, ZERO,
        ZERO, ZERO, b,    ZERO,
        o,    ZERO, ZERO, a,
    ];
    ComplexMatrix::from_row_slice(4, 4, &entries)
}

fn noisy() -> NoiseModel {
    NoiseModel::with_gamma(0.02).expect("valid rate")
}

fn demo(t: f64, gamma: f64) -> Result<processes::ProcessMatrix> {
    demo_process(t, &NoiseModel::with_gamma(gamma)?)
}

pub fn golden_rows() -> Vec<GoldenRow> {
    let ent = CapabilityKind::EntanglementGeneration;
    let sup = CapabilityKind::superposition(4);
    let loose = tol::REFERENCE;
    let mut rows = Vec::new();

    for e in [1.0, 0.5, 0.0] {
        rows.push(GoldenRow::new(
            "AC-1",
            format!("depolarizing matrix, survival {e}"),
            0.0,
            tol::HERMITIAN,
            move || Ok(qmath::max_abs_diff(depolarizing(e).choi(), &reference_depolarizing(e))),
        ));
    }

    for (kind, expected) in
        [(sup.clone(), 0.750), (ent.clone(), 0.500), (CapabilityKind::coherence_preservation(4), 0.250)]
    {
        let label = format!("F_I {} vs CZ", kind.name());
        rows.push(GoldenRow::new("AC-2", label, expected, loose, move || {
            Ok(capabilities::fidelity_threshold(&cz_process(), &kind)?.value)
        }));
    }

    {
        let k = ent.clone();
        rows.push(GoldenRow::new("AC-3", "alpha_ent(pi), gamma 0.02", 0.909, loose, move || {
            Ok(capabilities::alpha(&demo(PI, 0.02)?, &k)?.value)
        }));
        let k = ent.clone();
        rows.push(GoldenRow::new("AC-3", "alpha_ent(2pi after pi), gamma 0.02", 0.742, loose, move || {
            let p = |t| demo_process(t, &noisy());
            Ok(capabilities::alpha(&compose(&p(2.0 * PI)?, &p(PI)?)?, &k)?.value)
        }));
        let k = ent.clone();
        rows.push(GoldenRow::new("AC-3", "alpha_ent(mixture of 2pi, 4pi after pi)", 0.669, loose, move || {
            let p = |t| demo_process(t, &noisy());
            let first = compose(&p(2.0 * PI)?, &p(PI)?)?;
            let second = compose(&p(4.0 * PI)?, &p(PI)?)?;
            Ok(capabilities::alpha(&mix(&[0.5, 0.5], &[first, second])?, &k)?.value)
        }));
        let k = ent.clone();
        rows.push(GoldenRow::new("AC-3", "alpha_ent(pi), gamma 0", 1.0, loose, move || {
            Ok(capabilities::alpha(&demo(PI, 0.0)?, &k)?.value)
        }));
    }

    for (t, name, expected) in [(PI / 2.0, "pi/2", 0.6698), (PI, "pi", 0.9087)] {
        let k = ent.clone();
        rows.push(GoldenRow::new("AC-4", format!("beta_ent({name}), gamma 0.02"), expected, loose, move || {
            Ok(capabilities::beta(&demo(t, 0.02)?, &k)?.value)
        }));
    }

    for (gamma, t, name, expected) in [
        (0.0, PI / 2.0, "pi/2", 0.8624),
        (0.0, PI, "pi", 1.366),
        (0.02, PI / 2.0, "pi/2", 0.8489),
        (0.02, PI, "pi", 1.361),
    ] {
        let k = sup.clone();
        rows.push(GoldenRow::new("AC-5", format!("beta_sup({name}), gamma {gamma}"), expected, loose, move || {
            Ok(capabilities::beta(&demo(t, gamma)?, &k)?.value)
        }));
    }

    rows.push(
        GoldenRow::new("AC-6", "F_I non-classical vs CZ", 0.467, loose, || {
            Ok(capabilities::fidelity_threshold(&cz_process(), &CapabilityKind::NonClassical)?.value)
        })
        .model_check(),
    );

    for (gamma, t, name, expected) in [
        (0.0, PI / 2.0, "pi/2", 0.7071),
        (0.0, PI, "pi", 1.0),
        (0.02, PI / 2.0, "pi/2", 0.6743),
        (0.02, PI, "pi", 0.9087),
    ] {
        rows.push(GoldenRow::new("AC-7", format!("eta_ent({name}), gamma {gamma}"), expected, loose, move || {
            resources::entanglement_efficiency(t, &NoiseModel::with_gamma(gamma)?)
        }));
    }
    for (gamma, t, name, expected) in [
        (0.0, PI / 2.0, "pi/2", 0.621),
        (0.0, PI, "pi", 1.0),
        (0.02, PI / 2.0, "pi/2", 0.624),
        (0.02, PI, "pi", 0.9848),
    ] {
        rows.push(GoldenRow::new("AC-7", format!("eta_sup({name}), gamma {gamma}"), expected, loose, move || {
            let basis = capabilities::default_superposition_basis(4);
            Ok(resources::superposition_efficiency(t, &NoiseModel::with_gamma(gamma)?, &basis)?.1)
        }));
    }
    rows.push(GoldenRow::new("AC-7", "s_coh of the uniform superposition", 3.0, 1e-6, || {
        let s = DensityMatrix::pure(&resources::uniform_superposition())?;
        resources::coherence_robustness(&s, &capabilities::computational_basis(4))
    }));
    rows
}

/// Evaluate one row; `tolerance_override` replaces the row's tolerance.
pub fn run_row(row: &GoldenRow, tolerance_override: Option<f64>) -> RowResult {
    let tolerance = tolerance_override.unwrap_or(row.tolerance);
    let start = Instant::now();
    let value = (row.compute)();
    let seconds = start.elapsed().as_secs_f64();
    let (measured, outcome) = match value {
        Ok(v) if (v - row.expected).abs() <= tolerance => (Some(v), Outcome::Pass),
        Ok(v) => (
            Some(v),
            match row.on_failure {
                FailureMode::Fail => Outcome::Fail,
                FailureMode::ModelMismatch => Outcome::ModelMismatch,
            },
        ),
        Err(e) => (None, Outcome::Error(e.to_string())),
    };
    RowResult {
        criterion: row.criterion,
        label: row.label.clone(),
        measured,
        expected: row.expected,
        tolerance,
        outcome,
        seconds,
    }
}

pub fn run_all(tolerance_override: Option<f64>) -> Vec<RowResult> {
    golden_rows().iter().map(|row| run_row(row, tolerance_override)).collect()
}

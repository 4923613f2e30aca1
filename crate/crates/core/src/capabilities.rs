//! Incapable-process models and the capability measures built on them.
//!
//! An incapable process is parameterised by its (unnormalised) outputs on a
//! tomography input set. The constraints on those outputs encode what an
//! incapable process cannot do; the reconstructed matrix `chi_I` is linear in
//! the outputs. On top of the output constraints every model requires
//! `chi_I >= 0`, i.e. the incapable process is completely positive.
//!
//! Without that constraint the output-level conditions admit maps that are
//! positive on every tomography input but not completely positive. Those maps
//! reach a CZ overlap of 0.625 for entanglement generation (instead of 0.5) and
//! make the superposition threshold unbounded, so the reference thresholds
//! (0.750 / 0.500 / 0.467 / 0.250) are only reproduced with it.
//!
//! The non-classical model predicts the output of `|k_m> (x) |l_n>` as
//! `sum_xi P(xi | k_m, l_n) rho_xi` over the 64 vertices `v_xi in {+-1}^6`
//! (three Pauli properties per qubit), with `P = [v^1_k = m][v^2_l = n] / 16`:
//! the prepared property is definite and the four complementary ones are
//! uniformly random. This choice reproduces the CZ threshold of 0.467.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{QpcError, Result};
use crate::processes::ProcessMatrix;
use crate::qmath::{self, c, ComplexMatrix, ComplexVector, ONE};
use crate::sdp::{self, AffineMatrix, AffineScalar, HermitianVar, ScalarVar, SdpProblem, Sense, SolveStatus};
use crate::tol;
use crate::tomography::{self, make_scheme, InputScheme, SchemeKind};

#[derive(Debug, Clone, PartialEq)]
pub enum CapabilityKind {
    NonClassical,
    EntanglementGeneration,
    /// Coherence with respect to an orthonormal basis (columns of a unitary).
    CoherenceCreation {
        basis: Vec<ComplexVector>,
    },
    CoherencePreservation {
        basis: Vec<ComplexVector>,
    },
    /// Superposition of normalised, linearly independent states `h_j`.
    Superposition {
        basis: Vec<ComplexVector>,
    },
}

impl CapabilityKind {
    pub fn coherence_creation(d: usize) -> Self {
        CapabilityKind::CoherenceCreation { basis: computational_basis(d) }
    }

    pub fn coherence_preservation(d: usize) -> Self {
        CapabilityKind::CoherencePreservation { basis: computational_basis(d) }
    }

    pub fn superposition(d: usize) -> Self {
        CapabilityKind::Superposition { basis: default_superposition_basis(d) }
    }

    /// The five kinds on two qubits with default bases.
    pub fn all_two_qubit() -> Vec<CapabilityKind> {
        vec![
            CapabilityKind::NonClassical,
            CapabilityKind::EntanglementGeneration,
            CapabilityKind::coherence_creation(4),
            CapabilityKind::coherence_preservation(4),
            CapabilityKind::superposition(4),
        ]
    }

    pub fn name(&self) -> &'static str {
        match self {
            CapabilityKind::NonClassical => "non-classical",
            CapabilityKind::EntanglementGeneration => "entanglement",
            CapabilityKind::CoherenceCreation { .. } => "coherence-creation",
            CapabilityKind::CoherencePreservation { .. } => "coherence-preservation",
            CapabilityKind::Superposition { .. } => "superposition",
        }
    }

    /// Same kind with a different basis (ignored for basis-free kinds).
    pub fn with_basis(&self, basis: Vec<ComplexVector>) -> Self {
        match self {
            CapabilityKind::CoherenceCreation { .. } => CapabilityKind::CoherenceCreation { basis },
            CapabilityKind::CoherencePreservation { .. } => CapabilityKind::CoherencePreservation { basis },
            CapabilityKind::Superposition { .. } => CapabilityKind::Superposition { basis },
            other => other.clone(),
        }
    }

    /// Check the kind's parameters for a process on dimension `d`.
    pub fn validate(&self, d: usize) -> Result<()> {
        match self {
            CapabilityKind::NonClassical | CapabilityKind::EntanglementGeneration => {
                if d != 4 {
                    return Err(QpcError::UnsupportedDimension { what: self.name(), dim: d });
                }
                Ok(())
            }
            CapabilityKind::CoherenceCreation { basis } | CapabilityKind::CoherencePreservation { basis } => {
                if d < 2 {
                    return Err(QpcError::UnsupportedDimension { what: self.name(), dim: d });
                }
                check_orthonormal(basis, d)
            }
            CapabilityKind::Superposition { basis } => {
                if d < 2 {
                    return Err(QpcError::UnsupportedDimension { what: self.name(), dim: d });
                }
                tomography::validate_basis(basis, d)
            }
        }
    }
}

impl fmt::Display for CapabilityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Parses the kind names used by the command line (two-qubit defaults).
impl FromStr for CapabilityKind {
    type Err = QpcError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "non-classical" | "nonclassical" => Ok(CapabilityKind::NonClassical),
            "entanglement" | "entanglement-generation" => Ok(CapabilityKind::EntanglementGeneration),
            "coherence-creation" => Ok(CapabilityKind::coherence_creation(4)),
            "coherence-preservation" => Ok(CapabilityKind::coherence_preservation(4)),
            "superposition" => Ok(CapabilityKind::superposition(4)),
            other => Err(QpcError::InvalidArgument(format!("unknown capability kind `{other}`"))),
        }
    }
}

pub fn computational_basis(d: usize) -> Vec<ComplexVector> {
    (0..d).map(|j| qmath::basis_vector(d, j)).collect()
}

/// `h_0 = |0>`, `h_j = (|0> + |j>)/sqrt2`.
pub fn default_superposition_basis(d: usize) -> Vec<ComplexVector> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    (0..d)
        .map(|j| {
            if j == 0 {
                qmath::basis_vector(d, 0)
            } else {
                (qmath::basis_vector(d, 0) + qmath::basis_vector(d, j)) * c(s, 0.0)
            }
        })
        .collect()
}

fn check_orthonormal(basis: &[ComplexVector], d: usize) -> Result<()> {
    if basis.len() != d || basis.iter().any(|v| v.len() != d) {
        return Err(QpcError::Dimension(format!("basis must hold {d} vectors of length {d}")));
    }
    let w = ComplexMatrix::from_columns(basis);
    let deviation = qmath::max_abs_diff(&(w.adjoint() * &w), &qmath::identity(d));
    if deviation > tol::HERMITIAN {
        return Err(QpcError::InvalidArgument(format!(
            "coherence basis is not orthonormal (deviation {deviation:.3e})"
        )));
    }
    Ok(())
}

fn is_computational(basis: &[ComplexVector]) -> bool {
    let d = basis.len();
    basis.iter().enumerate().all(|(j, v)| (v - qmath::basis_vector(d, j)).norm() < tol::ALGEBRAIC)
}

/// An optimisation problem whose feasible set is the incapable processes of
/// one kind, together with the affine reconstruction of their matrices.
#[derive(Debug, Clone)]
pub struct IncapableModel {
    pub kind: CapabilityKind,
    pub dim: usize,
    pub problem: SdpProblem,
    /// Output blocks (or, for non-classical processes, vertex blocks).
    pub blocks: Vec<HermitianVar>,
    /// Auxiliary non-negative weights (superposition models).
    pub weights: Vec<ScalarVar>,
    /// Unnormalised process matrix `chi_I`.
    pub chi: AffineMatrix,
    /// `tr(chi_I)`.
    pub trace: AffineScalar,
}

pub fn build_incapable_model(kind: &CapabilityKind, dim: usize) -> Result<IncapableModel> {
    build_model(kind, dim, true)
}

fn build_model(kind: &CapabilityKind, dim: usize, complete_positivity: bool) -> Result<IncapableModel> {
    kind.validate(dim)?;
    let mut problem = SdpProblem::new();
    let mut weights = Vec::new();
    let (blocks, chi) = match kind {
        CapabilityKind::EntanglementGeneration => entanglement_model(&mut problem)?,
        CapabilityKind::NonClassical => non_classical_model(&mut problem)?,
        CapabilityKind::CoherenceCreation { basis } => {
            let (blocks, chi) = coherence_model(&mut problem, dim, false)?;
            (blocks, rotate(chi, basis))
        }
        CapabilityKind::CoherencePreservation { basis } => {
            let (blocks, chi) = coherence_model(&mut problem, dim, true)?;
            (blocks, rotate(chi, basis))
        }
        CapabilityKind::Superposition { basis } => {
            let (blocks, w, chi) = superposition_model(&mut problem, dim, basis)?;
            weights = w;
            (blocks, chi)
        }
    };
    // The vertex model couples all 1024 block variables to every entry of
    // chi_I; routing them through an explicit matrix variable keeps the
    // large cones sparse and roughly halves solve time.
    let chi = if matches!(kind, CapabilityKind::NonClassical) {
        let x = problem.add_hermitian_var(dim * dim);
        problem.constrain_hermitian_eq(&x.expr(), &chi);
        x.expr()
    } else {
        chi
    };
    if complete_positivity {
        problem.constrain_psd(chi.clone())?;
    }
    let trace = chi.trace();
    Ok(IncapableModel { kind: kind.clone(), dim, problem, blocks, weights, chi, trace })
}

fn new_psd_block(problem: &mut SdpProblem, d: usize) -> Result<(HermitianVar, AffineMatrix)> {
    let v = problem.add_hermitian_var(d);
    let e = v.expr();
    problem.constrain_psd(e.clone())?;
    Ok((v, e))
}

fn sum_of(terms: &[&AffineMatrix]) -> AffineMatrix {
    let (r, c_) = terms[0].shape();
    let mut acc = AffineMatrix::zeros(r, c_);
    for t in terms {
        acc.add_scaled(t, ONE);
    }
    acc
}

const SIGNS: [i8; 2] = [-1, 1];

fn entanglement_model(problem: &mut SdpProblem) -> Result<(Vec<HermitianVar>, AffineMatrix)> {
    let scheme = make_scheme(SchemeKind::PauliProduct { n_qubits: 2 })?;
    let mut blocks = Vec::with_capacity(scheme.len());
    let mut outs = Vec::with_capacity(scheme.len());
    for _ in 0..scheme.len() {
        let (v, e) = new_psd_block(problem, 4)?;
        problem.constrain_psd(e.partial_transpose(1, (2, 2))?)?;
        blocks.push(v);
        outs.push(e);
    }
    let out = |k, m, l, n| &outs[scheme.pauli_index(k, m, l, n).expect("complete scheme")];

    // Tracing out the preparation of one qubit must not depend on which
    // Pauli basis it was prepared in.
    for l in 1..=3 {
        for n in SIGNS {
            let reference = sum_of(&[out(1, -1, l, n), out(1, 1, l, n)]);
            for k in 2..=3 {
                problem.constrain_hermitian_eq(&sum_of(&[out(k, -1, l, n), out(k, 1, l, n)]), &reference);
            }
        }
    }
    for k in 1..=3 {
        for m in SIGNS {
            let reference = sum_of(&[out(k, m, 1, -1), out(k, m, 1, 1)]);
            for l in 2..=3 {
                problem.constrain_hermitian_eq(&sum_of(&[out(k, m, l, -1), out(k, m, l, 1)]), &reference);
            }
        }
    }
    let chi = scheme.reconstruction_map().apply_symbolic(&outs)?;
    Ok((blocks, chi))
}

fn non_classical_model(problem: &mut SdpProblem) -> Result<(Vec<HermitianVar>, AffineMatrix)> {
    let scheme = make_scheme(SchemeKind::PauliProduct { n_qubits: 2 })?;
    // Vertex bit layout: (x, y, z) of qubit 1, then of qubit 2; bit set = +1.
    let mut blocks = Vec::with_capacity(64);
    let mut vertices = Vec::with_capacity(64);
    for _ in 0..64 {
        let (v, e) = new_psd_block(problem, 4)?;
        blocks.push(v);
        vertices.push(e);
    }
    let value = |xi: usize, bit: usize| if xi >> bit & 1 == 1 { 1i8 } else { -1 };
    let mut outs = Vec::with_capacity(scheme.len());
    for label in scheme.labels() {
        let tomography::StateLabel::Pauli(pairs) = label else { unreachable!() };
        let ((k, m), (l, n)) = (pairs[0], pairs[1]);
        let mut prediction = AffineMatrix::zeros(4, 4);
        for (xi, block) in vertices.iter().enumerate() {
            if value(xi, k - 1) == m && value(xi, 3 + l - 1) == n {
                prediction.add_scaled(block, c(1.0 / 16.0, 0.0));
            }
        }
        outs.push(prediction);
    }
    let chi = scheme.reconstruction_map().apply_symbolic(&outs)?;
    Ok((blocks, chi))
}

/// Coherence models in the computational basis; `all_diagonal` selects
/// preservation (every output incoherent) over creation (outputs of
/// incoherent inputs incoherent).
fn coherence_model(
    problem: &mut SdpProblem,
    d: usize,
    all_diagonal: bool,
) -> Result<(Vec<HermitianVar>, AffineMatrix)> {
    let scheme = make_scheme(SchemeKind::GeneralBasis { dim: d })?;
    let mut blocks = Vec::with_capacity(scheme.len());
    let mut outs = Vec::with_capacity(scheme.len());
    for label in scheme.labels() {
        let (v, e) = new_psd_block(problem, d)?;
        let tomography::StateLabel::General { k, .. } = *label else { unreachable!() };
        if all_diagonal || k == 1 {
            for i in 0..d {
                for j in i + 1..d {
                    problem.constrain_zero(e.entry(i, j).clone());
                }
            }
        }
        blocks.push(v);
        outs.push(e);
    }
    let chi = scheme.reconstruction_map().apply_symbolic(&outs)?;
    Ok((blocks, chi))
}

/// Move a computational-basis model to the basis `{w_j}`: the process
/// `W L(W^dagger . W) W^dagger` has Choi matrix `(conj W (x) W) chi (conj W (x) W)^dagger`.
fn rotate(chi: AffineMatrix, basis: &[ComplexVector]) -> AffineMatrix {
    if is_computational(basis) {
        return chi;
    }
    let w = ComplexMatrix::from_columns(basis);
    let v = qmath::kron(&w.map(|z| z.conj()), &w);
    chi.conjugated(&v)
}

fn superposition_model(
    problem: &mut SdpProblem,
    d: usize,
    basis: &[ComplexVector],
) -> Result<(Vec<HermitianVar>, Vec<ScalarVar>, AffineMatrix)> {
    let scheme = make_scheme(SchemeKind::GeneralBasis { dim: d })?;
    let coefficients = tomography::superposition_coeffs(basis, d)?;
    let mut blocks = Vec::with_capacity(scheme.len());
    let mut outs = Vec::with_capacity(scheme.len());
    for _ in 0..scheme.len() {
        let (v, e) = new_psd_block(problem, d)?;
        blocks.push(v);
        outs.push(e);
    }
    let projectors: Vec<ComplexMatrix> = basis.iter().map(qmath::projector).collect();
    let mut weights = Vec::with_capacity(d * d);
    // The output of each free input h_j h_j^dagger must itself be free.
    for row in &coefficients.coefficients {
        let mut lhs = AffineMatrix::zeros(d, d);
        for (out, &e) in outs.iter().zip(row) {
            if e.abs() > 1e-15 {
                lhs.add_scaled(out, c(e, 0.0));
            }
        }
        let mut rhs = AffineMatrix::zeros(d, d);
        for projector in &projectors {
            let p = problem.add_nonneg_var();
            let mut term = AffineMatrix::zeros(d, d);
            for i in 0..d {
                for j in 0..d {
                    *term.entry_mut(i, j) = p.expr().scaled(projector[(i, j)]);
                }
            }
            rhs.add_scaled(&term, ONE);
            weights.push(p);
        }
        problem.constrain_hermitian_eq(&lhs, &rhs);
    }
    let chi = scheme.reconstruction_map().apply_symbolic(&outs)?;
    Ok((blocks, weights, chi))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MeasureKind {
    Alpha,
    Beta,
    FidelityThreshold,
}

impl MeasureKind {
    pub fn name(&self) -> &'static str {
        match self {
            MeasureKind::Alpha => "alpha",
            MeasureKind::Beta => "beta",
            MeasureKind::FidelityThreshold => "fidelity",
        }
    }
}

impl fmt::Display for MeasureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MeasureKind {
    type Err = QpcError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "alpha" => Ok(MeasureKind::Alpha),
            "beta" => Ok(MeasureKind::Beta),
            "fidelity" | "fidelity-threshold" => Ok(MeasureKind::FidelityThreshold),
            other => Err(QpcError::InvalidArgument(format!("unknown measure `{other}`"))),
        }
    }
}

/// Diagnostics of one solve.
#[derive(Debug, Clone, Serialize)]
pub struct SolveReport {
    pub status: String,
    pub iterations: u32,
    pub solve_time: f64,
    pub duality_gap: f64,
    pub max_eq_residual: f64,
    /// Smallest slack over all cone constraints at the returned point.
    pub min_slack: f64,
}

#[derive(Debug, Clone)]
pub struct MeasureResult {
    pub kind: CapabilityKind,
    pub measure: MeasureKind,
    pub value: f64,
    /// The optimal incapable component `chi_I` (unnormalised).
    pub witness: ProcessMatrix,
    pub report: SolveReport,
}

fn check_input(chi: &ProcessMatrix, kind: &CapabilityKind) -> Result<()> {
    kind.validate(chi.dim())?;
    if (chi.trace() - 1.0).abs() > tol::INGEST {
        return Err(QpcError::NotPhysical(format!("process matrix trace {} != 1", chi.trace())));
    }
    Ok(())
}

fn finish(model: IncapableModel, measure: MeasureKind, value: impl Fn(f64) -> f64) -> Result<MeasureResult> {
    let solution = sdp::solve(&model.problem)?;
    match solution.status {
        SolveStatus::Optimal => {}
        SolveStatus::Infeasible => return Err(QpcError::Infeasible),
        other => return Err(QpcError::Solver(other)),
    }
    let chi = qmath::hermitian_part(&model.chi.evaluate(&solution.x));
    let witness = ProcessMatrix::unnormalized(model.dim, chi)?;
    Ok(MeasureResult {
        kind: model.kind,
        measure,
        value: value(solution.objective_value),
        witness,
        report: SolveReport {
            status: solution.status.to_string(),
            iterations: solution.iterations,
            solve_time: solution.solve_time,
            duality_gap: solution.duality_gap,
            max_eq_residual: solution.max_eq_residual,
            min_slack: solution.min_psd_eigenvalue,
        },
    })
}

/// Capability composition: the smallest capable weight `1 - tr(chi_I)` over
/// decompositions `chi = chi_I + chi_C` with `chi_C >= 0`.
///
/// `0 <= chi_I <= chi` confines `chi_I` to the support of `chi`. When `chi`
/// is rank deficient the problem is therefore posed on that support,
/// `chi_I = V Y V^dagger` with `0 <= Y <= diag(lambda)`, which is the same
/// feasible set with much smaller cones and no degenerate boundary.
pub fn alpha(chi: &ProcessMatrix, kind: &CapabilityKind) -> Result<MeasureResult> {
    check_input(chi, kind)?;
    let (values, vectors) = qmath::hermitian_eigh(chi.choi())?;
    let largest = values.iter().cloned().fold(0.0, f64::max);
    let support: Vec<usize> = (0..values.len()).filter(|&i| values[i] > tol::PSD * largest.max(1.0)).collect();
    let full_rank = support.len() == values.len();

    let mut model = build_model(kind, chi.dim(), full_rank)?;
    if full_rank {
        let slack = &AffineMatrix::from_constant(chi.choi()) - &model.chi;
        model.problem.constrain_psd(slack)?;
    } else {
        let r = support.len();
        let v = ComplexMatrix::from_fn(values.len(), r, |i, j| vectors[(i, support[j])]);
        let y = model.problem.add_hermitian_var(r);
        model.problem.constrain_psd(y.expr())?;
        let lambda = ComplexMatrix::from_fn(r, r, |i, j| if i == j { c(values[support[i]], 0.0) } else { qmath::ZERO });
        model.problem.constrain_psd(&AffineMatrix::from_constant(&lambda) - &y.expr())?;
        let embedded = y.expr().conjugated(&v);
        model.problem.constrain_hermitian_eq(&model.chi, &embedded);
    }
    let objective = AffineScalar::real_constant(1.0) - model.trace.clone();
    model.problem.set_objective(Sense::Minimize, objective);
    finish(model, MeasureKind::Alpha, |v| v)
}

/// Capability robustness: the smallest `tr(chi_I) - 1` such that
/// `chi_I - chi >= 0`, i.e. the least noise turning `chi` incapable.
pub fn beta(chi: &ProcessMatrix, kind: &CapabilityKind) -> Result<MeasureResult> {
    check_input(chi, kind)?;
    // chi_I >= chi already forces chi_I >= 0 when chi is itself positive.
    let implied = chi.min_eigenvalue() >= -tol::PSD;
    let mut model = build_model(kind, chi.dim(), !implied)?;
    let slack = &model.chi - &AffineMatrix::from_constant(chi.choi());
    model.problem.constrain_psd(slack)?;
    model.problem.constrain_nonneg(model.trace.clone() - AffineScalar::real_constant(1.0));
    let objective = model.trace.clone() - AffineScalar::real_constant(1.0);
    model.problem.set_objective(Sense::Minimize, objective);
    finish(model, MeasureKind::Beta, |v| v)
}

/// Best overlap `tr(chi_I chi_target)` of a trace-one incapable process with
/// the target.
pub fn fidelity_threshold(target: &ProcessMatrix, kind: &CapabilityKind) -> Result<MeasureResult> {
    check_input(target, kind)?;
    let mut model = build_incapable_model(kind, target.dim())?;
    model.problem.constrain_zero(model.trace.clone() - AffineScalar::real_constant(1.0));
    let objective = model.chi.trace_with(target.choi());
    model.problem.set_objective(Sense::Maximize, objective);
    finish(model, MeasureKind::FidelityThreshold, |v| v)
}

/// `tr(chi_expt chi_target)`.
pub fn process_fidelity(chi: &ProcessMatrix, target: &ProcessMatrix) -> Result<f64> {
    if chi.dim() != target.dim() {
        return Err(QpcError::Dimension(format!(
            "fidelity between processes on dimensions {} and {}",
            chi.dim(),
            target.dim()
        )));
    }
    let value: Complex64 = qmath::hs_inner(chi.choi(), target.choi())?;
    Ok(value.re)
}

/// Evaluate one measure. For the fidelity threshold `chi` is the target.
pub fn evaluate(chi: &ProcessMatrix, kind: &CapabilityKind, measure: MeasureKind) -> Result<MeasureResult> {
    match measure {
        MeasureKind::Alpha => alpha(chi, kind),
        MeasureKind::Beta => beta(chi, kind),
        MeasureKind::FidelityThreshold => fidelity_threshold(chi, kind),
    }
}

/// The tomography input set a kind's model is expressed on.
pub fn scheme_for(kind: &CapabilityKind, d: usize) -> Result<InputScheme> {
    match kind {
        CapabilityKind::NonClassical | CapabilityKind::EntanglementGeneration => {
            make_scheme(SchemeKind::PauliProduct { n_qubits: 2 })
        }
        _ => make_scheme(SchemeKind::GeneralBasis { dim: d }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::processes::{cz_process, demo_process, NoiseModel};

    #[test]
    fn model_sizes() {
        let ent = build_incapable_model(&CapabilityKind::EntanglementGeneration, 4).unwrap();
        assert_eq!(ent.blocks.len(), 36);
        // 36 PSD + 36 PPT + complete positivity.
        assert_eq!(ent.problem.n_psd_constraints(), 73);
        let ncl = build_incapable_model(&CapabilityKind::NonClassical, 4).unwrap();
        assert_eq!(ncl.blocks.len(), 64);
        assert_eq!(ncl.blocks.iter().map(HermitianVar::degrees_of_freedom).sum::<usize>(), 1024);
        let sup = build_incapable_model(&CapabilityKind::superposition(4), 4).unwrap();
        assert_eq!(sup.weights.len(), 16);
        assert_eq!(sup.blocks.len(), 16);
    }

    #[test]
    fn reconstruction_is_hermitian() {
        for kind in CapabilityKind::all_two_qubit() {
            let model = build_incapable_model(&kind, 4).unwrap();
            assert!(model.chi.hermitian_deviation() < 1e-14, "{kind}");
        }
    }

    #[test]
    fn kind_validation() {
        assert!(CapabilityKind::EntanglementGeneration.validate(2).is_err());
        assert!(CapabilityKind::coherence_creation(2).validate(2).is_ok());
        let bad = CapabilityKind::CoherenceCreation { basis: default_superposition_basis(2) };
        assert!(bad.validate(2).is_err());
        let dependent = CapabilityKind::Superposition { basis: vec![qmath::basis_vector(2, 0); 2] };
        assert!(dependent.validate(2).is_err());
    }

    #[test]
    fn names_round_trip() {
        for kind in CapabilityKind::all_two_qubit() {
            assert_eq!(kind.name().parse::<CapabilityKind>().unwrap(), kind);
        }
        for m in [MeasureKind::Alpha, MeasureKind::Beta, MeasureKind::FidelityThreshold] {
            assert_eq!(m.name().parse::<MeasureKind>().unwrap(), m);
        }
    }

    #[test]
    fn identity_creates_no_coherence_on_a_qubit() {
        let kind = CapabilityKind::coherence_creation(2);
        let id = ProcessMatrix::identity(2);
        assert!(alpha(&id, &kind).unwrap().value.abs() < 1e-6);
        assert!(beta(&id, &kind).unwrap().value.abs() < 1e-6);
    }

    #[test]
    fn process_fidelity_cases() {
        let cz = cz_process();
        assert!((process_fidelity(&cz, &cz).unwrap() - 1.0).abs() < 1e-12);
        assert!((process_fidelity(&ProcessMatrix::identity(4), &cz).unwrap() - 0.25).abs() < 1e-12);
        let demo = demo_process(std::f64::consts::PI, &NoiseModel::noiseless()).unwrap();
        assert!((process_fidelity(&demo, &cz).unwrap() - 1.0).abs() < 1e-12);
        assert!(process_fidelity(&ProcessMatrix::identity(2), &cz).is_err());
    }
}

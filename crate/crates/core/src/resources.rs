//! State resources and the conversion efficiencies of the demonstration.
//!
//! The efficiencies compare the resource found in an output state with the
//! coherence of the input, whose robustness is normalised to one:
//!
//! * `eta_ent(t)`: concurrence of `chi(t)(|s><s|)`, `|s> = (|00>+|01>+|10>+|11>)/2`;
//! * `eta_sup(t)`: superposition robustness of `chi(t)(|h><h|)` for the last
//!   basis state `h`, divided by its value after the noiseless evolution at
//!   `t = pi` (the largest value along the noiseless trajectory,
//!   `2 + 2 sqrt 2` for the default basis).

use std::f64::consts::PI;

use crate::capabilities::{self, CapabilityKind};
use crate::error::{QpcError, Result};
use crate::processes::{demo_process, NoiseModel};
use crate::qmath::{self, c, ComplexMatrix, ComplexVector, DensityMatrix};
use crate::sdp::{self, AffineMatrix, AffineScalar, SdpProblem, Sense, SolveStatus};
use crate::tol;
use crate::tomography;

/// Wootters concurrence of a two-qubit state.
pub fn concurrence(rho: &DensityMatrix) -> Result<f64> {
    if rho.dim() != 4 {
        return Err(QpcError::UnsupportedDimension { what: "concurrence", dim: rho.dim() });
    }
    let m = rho.matrix();
    let yy = qmath::kron(&qmath::pauli(2), &qmath::pauli(2));
    let flipped = &yy * m.map(|z| z.conj()) * &yy;
    let root = qmath::hermitian_function(m, |x| x.max(0.0).sqrt())?;
    let r = qmath::hermitian_part(&(&root * flipped * &root));
    let mut lambdas: Vec<f64> = qmath::hermitian_eigenvalues(&r)?.into_iter().map(|x| x.max(0.0).sqrt()).collect();
    lambdas.sort_by(|a, b| b.total_cmp(a));
    Ok((lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3]).max(0.0))
}

/// `min sum_j p_j - 1` over `p >= 0` with `sum_j p_j b_j b_j^dagger >= rho`.
fn dominating_robustness(rho: &DensityMatrix, basis: &[ComplexVector]) -> Result<f64> {
    let d = rho.dim();
    let mut problem = SdpProblem::new();
    let mut slack = AffineMatrix::from_constant(&(-rho.matrix()));
    let mut total = AffineScalar::real_constant(-1.0);
    for b in basis {
        let p = problem.add_nonneg_var();
        let projector = qmath::projector(b);
        let mut term = AffineMatrix::zeros(d, d);
        for i in 0..d {
            for j in 0..d {
                *term.entry_mut(i, j) = p.expr().scaled(projector[(i, j)]);
            }
        }
        slack.add_scaled(&term, qmath::ONE);
        total = total + p.expr();
    }
    problem.constrain_psd(slack)?;
    problem.set_objective(Sense::Minimize, total);
    let solution = sdp::solve(&problem)?;
    match solution.status {
        SolveStatus::Optimal => Ok(solution.objective_value),
        SolveStatus::Infeasible => Err(QpcError::Infeasible),
        other => Err(QpcError::Solver(other)),
    }
}

/// Robustness of coherence in an orthonormal basis.
pub fn coherence_robustness(rho: &DensityMatrix, basis: &[ComplexVector]) -> Result<f64> {
    CapabilityKind::CoherenceCreation { basis: basis.to_vec() }.validate(rho.dim())?;
    dominating_robustness(rho, basis)
}

/// Robustness of superposition with respect to normalised, linearly
/// independent states `h_j`.
pub fn superposition_robustness(rho: &DensityMatrix, basis: &[ComplexVector]) -> Result<f64> {
    tomography::validate_basis(basis, rho.dim())?;
    dominating_robustness(rho, basis)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConversionReport {
    pub t: f64,
    /// Conversion efficiency (output resource over the unit input coherence).
    pub eta: f64,
    /// Output resource after normalisation.
    pub state_resource: f64,
    /// Output resource before normalisation.
    pub raw_resource: f64,
    /// Capability robustness of the same process.
    pub beta_reference: f64,
}

/// `(|00> + |01> + |10> + |11>)/2`.
pub fn uniform_superposition() -> ComplexVector {
    ComplexVector::from_element(4, c(0.5, 0.0))
}

/// Concurrence of `chi(t)(|s><s|)`.
pub fn entanglement_efficiency(t: f64, noise: &NoiseModel) -> Result<f64> {
    check_time(t)?;
    let out = demo_process(t, noise)?.apply(&DensityMatrix::pure(&uniform_superposition())?)?;
    concurrence(&out)
}

/// `(raw, normalised)` superposition robustness of `chi(t)(|h><h|)` for the
/// last basis state `h`.
pub fn superposition_efficiency(t: f64, noise: &NoiseModel, basis: &[ComplexVector]) -> Result<(f64, f64)> {
    check_time(t)?;
    tomography::validate_basis(basis, 4)?;
    let input = DensityMatrix::pure(&basis[basis.len() - 1])?;
    let output_robustness = |t: f64, noise: &NoiseModel| -> Result<f64> {
        let out = demo_process(t, noise)?.apply(&input)?;
        superposition_robustness(&out, basis)
    };
    let reference = output_robustness(PI, &NoiseModel::noiseless())?;
    if reference <= tol::SOLVER {
        return Err(QpcError::InvalidArgument("input carries no superposition after the ideal evolution".into()));
    }
    let raw = output_robustness(t, noise)?;
    Ok((raw, raw / reference))
}

/// Coherence-to-entanglement efficiency at time `t`.
pub fn eta_ent(t: f64, noise: &NoiseModel) -> Result<ConversionReport> {
    let resource = entanglement_efficiency(t, noise)?;
    let chi = demo_process(t, noise)?;
    let beta = capabilities::beta(&chi, &CapabilityKind::EntanglementGeneration)?.value;
    Ok(ConversionReport { t, eta: resource, state_resource: resource, raw_resource: resource, beta_reference: beta })
}

/// Coherence-to-superposition efficiency at time `t` for the basis `h`.
pub fn eta_sup(t: f64, noise: &NoiseModel, basis: &[ComplexVector]) -> Result<ConversionReport> {
    let (raw, normalized) = superposition_efficiency(t, noise, basis)?;
    let chi = demo_process(t, noise)?;
    let beta = capabilities::beta(&chi, &CapabilityKind::Superposition { basis: basis.to_vec() })?.value;
    Ok(ConversionReport { t, eta: normalized, state_resource: normalized, raw_resource: raw, beta_reference: beta })
}

fn check_time(t: f64) -> Result<()> {
    if !(t.is_finite() && t >= 0.0) {
        return Err(QpcError::InvalidArgument(format!("interaction time must be >= 0, got {t}")));
    }
    Ok(())
}

/// Closed form of the superposition robustness of a pure state, used as an
/// independent check: `(sum_j |c_j|)^2 - 1` with `psi = sum_j c_j h_j`.
pub fn pure_superposition_robustness(psi: &ComplexVector, basis: &[ComplexVector]) -> Result<f64> {
    tomography::validate_basis(basis, psi.len())?;
    let h = ComplexMatrix::from_columns(basis);
    let coefficients = h.lu().solve(psi).ok_or(QpcError::DependentBasis(0.0))?;
    let l1: f64 = coefficients.iter().map(|z| z.norm()).sum();
    Ok(l1 * l1 - 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::capabilities::{computational_basis, default_superposition_basis};

    fn bell() -> DensityMatrix {
        let mut v = ComplexVector::zeros(4);
        v[0] = c(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        v[3] = c(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        DensityMatrix::pure(&v).unwrap()
    }

    #[test]
    fn concurrence_cases() {
        assert!((concurrence(&bell()).unwrap() - 1.0).abs() < 1e-9);
        let product = qmath::pauli_eigenstate(1, 1).kronecker(&qmath::pauli_eigenstate(2, -1));
        assert!(concurrence(&DensityMatrix::pure(&product).unwrap()).unwrap() < 1e-9);
        assert!(concurrence(&DensityMatrix::maximally_mixed(4)).unwrap() < 1e-9);
        assert!(concurrence(&DensityMatrix::maximally_mixed(2)).is_err());
    }

    #[test]
    fn coherence_robustness_cases() {
        let plus = DensityMatrix::pure(&qmath::pauli_eigenstate(1, 1)).unwrap();
        assert!((coherence_robustness(&plus, &computational_basis(2)).unwrap() - 1.0).abs() < 1e-6);
        let s = DensityMatrix::pure(&uniform_superposition()).unwrap();
        assert!((coherence_robustness(&s, &computational_basis(4)).unwrap() - 3.0).abs() < 1e-6);
        let diag = DensityMatrix::maximally_mixed(4);
        assert!(coherence_robustness(&diag, &computational_basis(4)).unwrap().abs() < 1e-6);
    }

    #[test]
    fn superposition_robustness_matches_closed_form() {
        let basis = default_superposition_basis(4);
        for psi in [uniform_superposition(), basis[3].clone(), qmath::basis_vector(4, 2)] {
            let rho = DensityMatrix::pure(&psi).unwrap();
            let sdp = superposition_robustness(&rho, &basis).unwrap();
            let exact = pure_superposition_robustness(&psi, &basis).unwrap();
            assert!((sdp - exact).abs() < 1e-6, "{sdp} vs {exact}");
        }
    }

    #[test]
    fn free_states_have_zero_robustness() {
        let basis = default_superposition_basis(4);
        let mixed = qmath::projector(&basis[1]) * c(0.3, 0.0) + qmath::projector(&basis[2]) * c(0.7, 0.0);
        let rho = DensityMatrix::new(mixed).unwrap();
        assert!(superposition_robustness(&rho, &basis).unwrap().abs() < 1e-6);
    }

    #[test]
    fn negative_time_rejected() {
        assert!(eta_ent(-1.0, &NoiseModel::noiseless()).is_err());
    }
}

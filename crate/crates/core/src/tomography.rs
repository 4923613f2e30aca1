//! Tomography input sets, simulated tomography and linear reconstruction.
//!
//! Reconstruction is expressed as a [`ReconstructionMap`]: a list of complex
//! weights such that `L(|a><b|) = sum_i w_{ab,i} out_i`. The same map is
//! applied to numeric output records here and to symbolic output variables
//! when the capability models are built.

use num_complex::Complex64;

use crate::error::{QpcError, Result};
use crate::processes::ProcessMatrix;
use crate::qmath::{self, c, ComplexMatrix, ComplexVector, DensityMatrix, ONE};
use crate::sdp::AffineMatrix;
use crate::tol;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SchemeKind {
    /// Products of Pauli eigenstates on `n_qubits` qubits (1 or 2).
    PauliProduct { n_qubits: usize },
    /// The `d^2` states `|m>`, `(|m>+|n>)/sqrt2`, `(|m>+i|n>)/sqrt2` (`m < n`).
    GeneralBasis { dim: usize },
}

impl SchemeKind {
    pub fn dim(&self) -> usize {
        match *self {
            SchemeKind::PauliProduct { n_qubits } => 1 << n_qubits,
            SchemeKind::GeneralBasis { dim } => dim,
        }
    }
}

/// Index label of a tomography input state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StateLabel {
    /// `|k_m> (x) |l_n> (x) ...`: one `(pauli, eigenvalue)` pair per qubit.
    Pauli(Vec<(usize, i8)>),
    /// `psi_{kmn}`.
    General { k: usize, m: usize, n: usize },
}

#[derive(Debug, Clone)]
pub struct InputScheme {
    kind: SchemeKind,
    labels: Vec<StateLabel>,
    states: Vec<DensityMatrix>,
}

const EIGENVALUES: [i8; 2] = [-1, 1];

pub fn make_scheme(kind: SchemeKind) -> Result<InputScheme> {
    let mut labels = Vec::new();
    let mut states = Vec::new();
    match kind {
        SchemeKind::PauliProduct { n_qubits } => {
            if !(1..=2).contains(&n_qubits) {
                return Err(QpcError::UnsupportedDimension { what: "Pauli product tomography", dim: n_qubits });
            }
            if n_qubits == 1 {
                for k in 1..=3 {
                    for m in EIGENVALUES {
                        labels.push(StateLabel::Pauli(vec![(k, m)]));
                        states.push(DensityMatrix::pure(&qmath::pauli_eigenstate(k, m))?);
                    }
                }
            } else {
                for k in 1..=3 {
                    for l in 1..=3 {
                        for m in EIGENVALUES {
                            for n in EIGENVALUES {
                                let psi = qmath::pauli_eigenstate(k, m).kronecker(&qmath::pauli_eigenstate(l, n));
                                labels.push(StateLabel::Pauli(vec![(k, m), (l, n)]));
                                states.push(DensityMatrix::pure(&psi)?);
                            }
                        }
                    }
                }
            }
        }
        SchemeKind::GeneralBasis { dim } => {
            if dim < 2 {
                return Err(QpcError::UnsupportedDimension { what: "general-basis tomography", dim });
            }
            let h = std::f64::consts::FRAC_1_SQRT_2;
            for m in 0..dim {
                labels.push(StateLabel::General { k: 1, m, n: m });
                states.push(DensityMatrix::pure(&qmath::basis_vector(dim, m))?);
            }
            for (k, phase) in [(2, ONE), (3, qmath::I)] {
                for m in 0..dim {
                    for n in m + 1..dim {
                        let mut psi = ComplexVector::zeros(dim);
                        psi[m] = c(h, 0.0);
                        psi[n] = phase * h;
                        labels.push(StateLabel::General { k, m, n });
                        states.push(DensityMatrix::pure(&psi)?);
                    }
                }
            }
        }
    }
    Ok(InputScheme { kind, labels, states })
}

impl InputScheme {
    pub fn kind(&self) -> SchemeKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.kind.dim()
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn labels(&self) -> &[StateLabel] {
        &self.labels
    }

    pub fn states(&self) -> &[DensityMatrix] {
        &self.states
    }

    pub fn index_of(&self, label: &StateLabel) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Index of the two-qubit Pauli product input `|k_m> (x) |l_n>`.
    pub fn pauli_index(&self, k: usize, m: i8, l: usize, n: i8) -> Option<usize> {
        self.index_of(&StateLabel::Pauli(vec![(k, m), (l, n)]))
    }

    pub fn general_index(&self, k: usize, m: usize, n: usize) -> Option<usize> {
        self.index_of(&StateLabel::General { k, m, n })
    }

    pub fn reconstruction_map(&self) -> ReconstructionMap {
        match self.kind {
            SchemeKind::PauliProduct { n_qubits } => self.pauli_map(n_qubits),
            SchemeKind::GeneralBasis { dim } => self.general_map(dim),
        }
    }

    fn pauli_map(&self, n_qubits: usize) -> ReconstructionMap {
        let d = 1usize << n_qubits;
        // Output of the Pauli string sigma_{k_1} (x) ... as weights on the
        // measured outputs. Identity factors use the sigma_1 eigenbasis.
        let string_weights = |ks: &[usize]| -> Vec<(usize, f64)> {
            let mut weights = Vec::new();
            for (idx, label) in self.labels.iter().enumerate() {
                let StateLabel::Pauli(pairs) = label else { unreachable!() };
                let mut w = 1.0;
                for (&k, &(lk, lm)) in ks.iter().zip(pairs) {
                    let basis = if k == 0 { 1 } else { k };
                    if lk != basis {
                        w = 0.0;
                        break;
                    }
                    if k != 0 {
                        w *= lm as f64;
                    }
                }
                if w != 0.0 {
                    weights.push((idx, w));
                }
            }
            weights
        };
        let strings: Vec<Vec<usize>> = (0..4usize.pow(n_qubits as u32))
            .map(|code| (0..n_qubits).map(|q| (code >> (2 * (n_qubits - 1 - q))) & 3).collect())
            .collect();
        let operators: Vec<ComplexMatrix> = strings
            .iter()
            .map(|ks| ks.iter().skip(1).fold(qmath::pauli(ks[0]), |acc, &k| qmath::kron(&acc, &qmath::pauli(k))))
            .collect();
        let outputs: Vec<Vec<(usize, f64)>> = strings.iter().map(|ks| string_weights(ks)).collect();

        let mut weights = vec![Vec::new(); d * d];
        for a in 0..d {
            for b in 0..d {
                let mut acc = vec![Complex64::new(0.0, 0.0); self.len()];
                for (op, out) in operators.iter().zip(&outputs) {
                    // xi = tr(|a><b| sigma) / d = sigma[b, a] / d
                    let xi = op[(b, a)] / d as f64;
                    if xi.norm() == 0.0 {
                        continue;
                    }
                    for &(idx, w) in out {
                        acc[idx] += xi * w;
                    }
                }
                weights[a * d + b] = sparse(acc);
            }
        }
        ReconstructionMap { dim: d, n_inputs: self.len(), weights }
    }

    fn general_map(&self, d: usize) -> ReconstructionMap {
        let mut weights = vec![Vec::new(); d * d];
        let idx = |k, m, n| self.general_index(k, m, n).expect("complete scheme");
        for m in 0..d {
            weights[m * d + m] = vec![(idx(1, m, m), ONE)];
        }
        for m in 0..d {
            for n in m + 1..d {
                let (p, q) = (idx(2, m, n), idx(3, m, n));
                let (dm, dn) = (idx(1, m, m), idx(1, n, n));
                let upper = c(-0.5, -0.5);
                let lower = c(-0.5, 0.5);
                weights[m * d + n] = vec![(p, ONE), (q, qmath::I), (dm, upper), (dn, upper)];
                weights[n * d + m] = vec![(p, ONE), (q, -qmath::I), (dm, lower), (dn, lower)];
            }
        }
        ReconstructionMap { dim: d, n_inputs: self.len(), weights }
    }
}

fn sparse(dense: Vec<Complex64>) -> Vec<(usize, Complex64)> {
    dense.into_iter().enumerate().filter(|(_, w)| w.norm() > 1e-15).collect()
}

/// Linear map from tomography outputs to the images of matrix units.
#[derive(Debug, Clone)]
pub struct ReconstructionMap {
    dim: usize,
    n_inputs: usize,
    /// Indexed by `a * dim + b`; weights for `L(|a><b|)`.
    weights: Vec<Vec<(usize, Complex64)>>,
}

impl ReconstructionMap {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n_inputs(&self) -> usize {
        self.n_inputs
    }

    /// Weights `(input index, w)` with `L(|a><b|) = sum w * out`.
    pub fn unit_weights(&self, a: usize, b: usize) -> &[(usize, Complex64)] {
        &self.weights[a * self.dim + b]
    }

    /// Unnormalised Choi matrix from numeric outputs.
    pub fn apply(&self, outputs: &[ComplexMatrix]) -> Result<ComplexMatrix> {
        if outputs.len() != self.n_inputs {
            return Err(QpcError::IncompleteRecord { expected: self.n_inputs, found: outputs.len() });
        }
        let d = self.dim;
        if outputs.iter().any(|o| o.shape() != (d, d)) {
            return Err(QpcError::Dimension(format!("tomography outputs must be {d}x{d}")));
        }
        let mut choi = ComplexMatrix::zeros(d * d, d * d);
        for a in 0..d {
            for b in 0..d {
                let mut image = ComplexMatrix::zeros(d, d);
                for &(i, w) in self.unit_weights(a, b) {
                    image += &outputs[i] * w;
                }
                choi.view_mut((a * d, b * d), (d, d)).copy_from(&image);
            }
        }
        Ok(choi.unscale(d as f64))
    }

    /// The same reconstruction with affine outputs (optimisation variables).
    pub fn apply_symbolic(&self, outputs: &[AffineMatrix]) -> Result<AffineMatrix> {
        if outputs.len() != self.n_inputs {
            return Err(QpcError::IncompleteRecord { expected: self.n_inputs, found: outputs.len() });
        }
        let d = self.dim;
        if outputs.iter().any(|o| o.shape() != (d, d)) {
            return Err(QpcError::Dimension(format!("tomography outputs must be {d}x{d}")));
        }
        let mut choi = AffineMatrix::zeros(d * d, d * d);
        let inv = c(1.0 / d as f64, 0.0);
        for a in 0..d {
            for b in 0..d {
                for &(i, w) in self.unit_weights(a, b) {
                    choi.add_block(a * d, b * d, &outputs[i], w * inv);
                }
            }
        }
        Ok(choi)
    }
}

/// Outputs of a process on every state of a scheme.
#[derive(Debug, Clone)]
pub struct OutputRecord {
    pub scheme: InputScheme,
    pub outputs: Vec<ComplexMatrix>,
}

impl OutputRecord {
    pub fn new(scheme: InputScheme, outputs: Vec<ComplexMatrix>) -> Result<Self> {
        if outputs.len() != scheme.len() {
            return Err(QpcError::IncompleteRecord { expected: scheme.len(), found: outputs.len() });
        }
        for o in &outputs {
            let deviation = qmath::hermitian_deviation(o);
            if deviation > tol::HERMITIAN {
                return Err(QpcError::NotHermitian { deviation });
            }
        }
        Ok(Self { scheme, outputs })
    }

    /// `a * self + b * other` (same scheme).
    pub fn combine(&self, a: f64, other: &OutputRecord, b: f64) -> Result<OutputRecord> {
        if self.scheme.kind() != other.scheme.kind() {
            return Err(QpcError::InvalidArgument("records from different schemes".into()));
        }
        let outputs = self.outputs.iter().zip(&other.outputs).map(|(x, y)| x.scale(a) + y.scale(b)).collect();
        Ok(OutputRecord { scheme: self.scheme.clone(), outputs })
    }
}

pub fn simulate_tomography(chi: &ProcessMatrix, scheme: &InputScheme) -> Result<OutputRecord> {
    if chi.dim() != scheme.dim() {
        return Err(QpcError::Dimension(format!(
            "process on dimension {} with a dimension-{} scheme",
            chi.dim(),
            scheme.dim()
        )));
    }
    let outputs =
        scheme.states().iter().map(|s| chi.apply(s).map(DensityMatrix::into_matrix)).collect::<Result<Vec<_>>>()?;
    OutputRecord::new(scheme.clone(), outputs)
}

/// Linear-inversion reconstruction; the trace of the result is the mean of
/// the output traces of the basis-state inputs.
pub fn reconstruct(record: &OutputRecord) -> Result<ProcessMatrix> {
    let map = record.scheme.reconstruction_map();
    let choi = map.apply(&record.outputs)?;
    ProcessMatrix::unnormalized(map.dim(), qmath::hermitian_part(&choi))
}

/// Coefficients `e_{jkmn}` expressing each `|h_j><h_j|` in the general-basis
/// input states; `coefficients[j][i]` multiplies the `i`-th scheme state.
#[derive(Debug, Clone)]
pub struct SuperpositionCoefficients {
    pub dim: usize,
    pub coefficients: Vec<Vec<f64>>,
}

impl SuperpositionCoefficients {
    /// `e_{jkmn}` by label, zero when the label is absent.
    pub fn get(&self, scheme: &InputScheme, j: usize, k: usize, m: usize, n: usize) -> f64 {
        scheme.general_index(k, m, n).map(|i| self.coefficients[j][i]).unwrap_or(0.0)
    }
}

/// Check that `basis` holds `d` normalised, linearly independent vectors.
pub fn validate_basis(basis: &[ComplexVector], d: usize) -> Result<()> {
    if basis.len() != d || basis.iter().any(|h| h.len() != d) {
        return Err(QpcError::Dimension(format!("basis must hold {d} vectors of length {d}")));
    }
    for h in basis {
        if (h.norm() - 1.0).abs() > tol::HERMITIAN {
            return Err(QpcError::InvalidArgument(format!("basis vector of norm {}", h.norm())));
        }
    }
    let m = ComplexMatrix::from_columns(basis);
    let smallest = m.singular_values().iter().cloned().fold(f64::INFINITY, f64::min);
    if smallest < 1e-8 {
        return Err(QpcError::DependentBasis(smallest));
    }
    Ok(())
}

pub fn superposition_coeffs(basis: &[ComplexVector], d: usize) -> Result<SuperpositionCoefficients> {
    validate_basis(basis, d)?;
    let scheme = make_scheme(SchemeKind::GeneralBasis { dim: d })?;
    let mut coefficients = Vec::with_capacity(d);
    for h in basis {
        let hh = qmath::projector(h);
        let mut e = vec![0.0; scheme.len()];
        let mut pair_sum = vec![0.0; d];
        for m in 0..d {
            for n in m + 1..d {
                // tr(|h><h| |m><n|) = <n|h><h|m>
                let overlap = hh[(n, m)];
                let e2 = 2.0 * overlap.re;
                let e3 = 2.0 * overlap.im;
                e[scheme.general_index(2, m, n).unwrap()] = e2;
                e[scheme.general_index(3, m, n).unwrap()] = e3;
                pair_sum[m] += e2 + e3;
                pair_sum[n] += e2 + e3;
            }
        }
        for m in 0..d {
            e[scheme.general_index(1, m, m).unwrap()] = hh[(m, m)].re - 0.5 * pair_sum[m];
        }
        coefficients.push(e);
    }
    Ok(SuperpositionCoefficients { dim: d, coefficients })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::processes::{demo_process, depolarizing, NoiseModel};
    use crate::qmath::max_abs_diff;

    #[test]
    fn general_basis_for_a_qubit() {
        let s = make_scheme(SchemeKind::GeneralBasis { dim: 2 }).unwrap();
        assert_eq!(s.len(), 4);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let expected =
            [vec![ONE, c(0.0, 0.0)], vec![c(0.0, 0.0), ONE], vec![c(h, 0.0), c(h, 0.0)], vec![c(h, 0.0), c(0.0, h)]];
        for (state, psi) in s.states().iter().zip(expected) {
            let p = qmath::projector(&ComplexVector::from_vec(psi));
            assert!(max_abs_diff(state.matrix(), &p) < 1e-12);
        }
    }

    #[test]
    fn scheme_sizes() {
        assert_eq!(make_scheme(SchemeKind::GeneralBasis { dim: 4 }).unwrap().len(), 16);
        let pauli = make_scheme(SchemeKind::PauliProduct { n_qubits: 2 }).unwrap();
        assert_eq!(pauli.len(), 36);
        for s in pauli.states() {
            assert!((s.purity() - 1.0).abs() < 1e-12);
        }
        assert_eq!(pauli.labels()[0], StateLabel::Pauli(vec![(1, -1), (1, -1)]));
        assert_eq!(pauli.labels()[35], StateLabel::Pauli(vec![(3, 1), (3, 1)]));
        assert!(make_scheme(SchemeKind::PauliProduct { n_qubits: 3 }).is_err());
        assert!(make_scheme(SchemeKind::GeneralBasis { dim: 1 }).is_err());
    }

    #[test]
    fn identity_record_round_trip() {
        for kind in [SchemeKind::PauliProduct { n_qubits: 1 }, SchemeKind::GeneralBasis { dim: 2 }] {
            let scheme = make_scheme(kind).unwrap();
            let id = ProcessMatrix::identity(2);
            let rec = simulate_tomography(&id, &scheme).unwrap();
            for (o, s) in rec.outputs.iter().zip(scheme.states()) {
                assert!(max_abs_diff(o, s.matrix()) < 1e-12);
            }
            assert!(max_abs_diff(reconstruct(&rec).unwrap().choi(), id.choi()) < 1e-12);
        }
    }

    #[test]
    fn depolarizing_record_reconstructs_printed_matrix() {
        let e = 0.37;
        let chi = depolarizing(e);
        let scheme = make_scheme(SchemeKind::PauliProduct { n_qubits: 1 }).unwrap();
        let rec = simulate_tomography(&chi, &scheme).unwrap();
        let zero = scheme.index_of(&StateLabel::Pauli(vec![(3, 1)])).unwrap();
        let expected = ComplexMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            c((1.0 + e) / 2.0, 0.0),
            c((1.0 - e) / 2.0, 0.0),
        ]));
        assert!(max_abs_diff(&rec.outputs[zero], &expected) < 1e-12);
        assert!(max_abs_diff(reconstruct(&rec).unwrap().choi(), chi.choi()) < 1e-12);
    }

    #[test]
    fn two_qubit_round_trip_both_schemes() {
        let chi = demo_process(2.2, &NoiseModel::with_gamma(0.15).unwrap()).unwrap();
        for kind in [SchemeKind::PauliProduct { n_qubits: 2 }, SchemeKind::GeneralBasis { dim: 4 }] {
            let rec = simulate_tomography(&chi, &make_scheme(kind).unwrap()).unwrap();
            assert!(max_abs_diff(reconstruct(&rec).unwrap().choi(), chi.choi()) < 1e-12);
        }
    }

    #[test]
    fn incomplete_record_rejected() {
        let scheme = make_scheme(SchemeKind::GeneralBasis { dim: 2 }).unwrap();
        let outputs = vec![qmath::identity(2); 3];
        assert!(matches!(OutputRecord::new(scheme, outputs), Err(QpcError::IncompleteRecord { .. })));
    }

    fn figure_basis() -> Vec<ComplexVector> {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let mut basis = vec![qmath::basis_vector(4, 0)];
        for j in 1..4 {
            let mut v = ComplexVector::zeros(4);
            v[0] = c(h, 0.0);
            v[j] = c(h, 0.0);
            basis.push(v);
        }
        basis
    }

    #[test]
    fn figure_basis_coefficients() {
        let basis = figure_basis();
        let e = superposition_coeffs(&basis, 4).unwrap();
        let scheme = make_scheme(SchemeKind::GeneralBasis { dim: 4 }).unwrap();
        assert!((e.get(&scheme, 0, 1, 0, 0) - 1.0).abs() < 1e-12);
        assert!((e.get(&scheme, 1, 2, 0, 1) - 1.0).abs() < 1e-12);
        assert!((e.get(&scheme, 2, 2, 0, 2) - 1.0).abs() < 1e-12);
        assert!((e.get(&scheme, 3, 2, 0, 3) - 1.0).abs() < 1e-12);
        for (j, row) in e.coefficients.iter().enumerate() {
            let nonzero = row.iter().filter(|v| v.abs() > 1e-12).count();
            assert_eq!(nonzero, 1, "basis state {j} should be a single input state");
        }
    }

    #[test]
    fn computational_basis_coefficients() {
        let basis: Vec<_> = (0..3).map(|j| qmath::basis_vector(3, j)).collect();
        let e = superposition_coeffs(&basis, 3).unwrap();
        let scheme = make_scheme(SchemeKind::GeneralBasis { dim: 3 }).unwrap();
        for j in 0..3 {
            for (i, v) in e.coefficients[j].iter().enumerate() {
                let expected = if scheme.labels()[i] == (StateLabel::General { k: 1, m: j, n: j }) { 1.0 } else { 0.0 };
                assert!((v - expected).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn dependent_basis_rejected() {
        let mut basis = figure_basis();
        basis[3] = basis[1].clone();
        assert!(matches!(superposition_coeffs(&basis, 4), Err(QpcError::DependentBasis(_))));
    }
}

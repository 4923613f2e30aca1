//! Process matrices and the two-qubit Ising demonstration dynamics.
//!
//! A process is stored as its trace-normalised Choi matrix
//!
//! ```text
//! chi = (1/d) sum_{m,n} |m><n| (x) L(|m><n|)
//! ```
//!
//! with the input factor first. Its action on a state is
//! `L(rho) = d * Tr_in[(rho^T (x) I) chi]`. This convention reproduces the
//! single-qubit depolarising matrix entrywise.
//!
//! The demonstration process applies the Ising unitary `U(t)` first and then
//! depolarises one qubit with survival probability `exp(-gamma t)`. This
//! ordering reproduces the reference entanglement-generation composition and
//! robustness at `t = pi`, `gamma = 0.02` (0.9087 / 0.9087); depolarising
//! before the unitary gives a robustness of 0.939 instead.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{QpcError, Result};
use crate::qmath::{self, c, ComplexMatrix, DensityMatrix, ONE, ZERO};
use crate::tol;

#[derive(Debug, Clone, PartialEq)]
pub struct ProcessMatrix {
    dim: usize,
    choi: ComplexMatrix,
}

impl ProcessMatrix {
    /// A trace-one process matrix, Hermitian within `1e-10`.
    pub fn new(dim: usize, choi: ComplexMatrix) -> Result<Self> {
        Self::with_tolerance(dim, choi, tol::HERMITIAN)
    }

    /// Like [`ProcessMatrix::new`] but with a caller-chosen tolerance for the
    /// Hermiticity and trace checks (used for measured data).
    pub fn with_tolerance(dim: usize, choi: ComplexMatrix, tolerance: f64) -> Result<Self> {
        let p = Self::build(dim, choi, tolerance)?;
        let tr = p.trace();
        if (tr - 1.0).abs() > tolerance {
            return Err(QpcError::NotPhysical(format!("process matrix trace {tr} != 1")));
        }
        Ok(p)
    }

    /// An unnormalised process matrix (trace `t >= 0`), e.g. an incapable
    /// component returned by an optimisation.
    pub fn unnormalized(dim: usize, choi: ComplexMatrix) -> Result<Self> {
        let p = Self::build(dim, choi, tol::HERMITIAN)?;
        if p.trace() < -tol::HERMITIAN {
            return Err(QpcError::NotPhysical(format!("negative trace {}", p.trace())));
        }
        Ok(p)
    }

    fn build(dim: usize, choi: ComplexMatrix, tolerance: f64) -> Result<Self> {
        if dim == 0 || choi.shape() != (dim * dim, dim * dim) {
            return Err(QpcError::Dimension(format!(
                "Choi matrix of shape {:?} for system dimension {dim}",
                choi.shape()
            )));
        }
        let scale = choi.iter().map(|z| z.norm()).fold(1.0, f64::max);
        let deviation = qmath::hermitian_deviation(&choi);
        if deviation > tolerance * scale {
            return Err(QpcError::NotHermitian { deviation });
        }
        Ok(Self { dim, choi: qmath::hermitian_part(&choi) })
    }

    /// Choi matrix of the linear map `f`, with no physicality checks.
    pub fn from_action(dim: usize, f: impl Fn(&ComplexMatrix) -> ComplexMatrix) -> Self {
        let d2 = dim * dim;
        let mut choi = ComplexMatrix::zeros(d2, d2);
        for m in 0..dim {
            for n in 0..dim {
                let image = f(&qmath::matrix_unit(dim, m, n));
                choi.view_mut((m * dim, n * dim), (dim, dim)).copy_from(&image);
            }
        }
        choi.unscale_mut(dim as f64);
        Self { dim, choi: qmath::hermitian_part(&choi) }
    }

    pub fn from_unitary(u: &ComplexMatrix) -> Result<Self> {
        if !u.is_square() {
            return Err(QpcError::Dimension(format!("unitary of shape {:?}", u.shape())));
        }
        let d = u.nrows();
        let deviation = qmath::max_abs_diff(&(u.adjoint() * u), &qmath::identity(d));
        if deviation > tol::HERMITIAN {
            return Err(QpcError::NotUnitary { deviation });
        }
        let ud = u.adjoint();
        Ok(Self::from_action(d, |e| u * e * &ud))
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_action(dim, |e| e.clone())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn choi(&self) -> &ComplexMatrix {
        &self.choi
    }

    pub fn into_choi(self) -> ComplexMatrix {
        self.choi
    }

    pub fn trace(&self) -> f64 {
        self.choi.trace().re
    }

    /// `L(|m><n|)`, i.e. `d` times the `(m, n)` block of the Choi matrix.
    pub fn block_image(&self, m: usize, n: usize) -> ComplexMatrix {
        let d = self.dim;
        self.choi.view((m * d, n * d), (d, d)).scale(d as f64)
    }

    /// The linear action on an arbitrary operator.
    pub fn apply_matrix(&self, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
        let d = self.dim;
        if rho.shape() != (d, d) {
            return Err(QpcError::Dimension(format!(
                "operator of shape {:?} for a process on dimension {d}",
                rho.shape()
            )));
        }
        let mut out = ComplexMatrix::zeros(d, d);
        for m in 0..d {
            for n in 0..d {
                let w = rho[(m, n)];
                if w != ZERO {
                    out += self.choi.view((m * d, n * d), (d, d)) * w;
                }
            }
        }
        out.scale_mut(d as f64);
        Ok(out)
    }

    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        let out = qmath::hermitian_part(&self.apply_matrix(rho.matrix())?);
        Ok(DensityMatrix::from_hermitian_unchecked(out))
    }

    /// Largest deviation of `Tr_out(chi)` from `I/d`.
    pub fn trace_preservation_error(&self) -> f64 {
        let d = self.dim;
        let reduced = qmath::partial_trace(&self.choi, 1, (d, d)).expect("square Choi matrix");
        qmath::max_abs_diff(&reduced, &qmath::identity(d).unscale(d as f64))
    }

    /// Smallest Choi eigenvalue; non-negative iff completely positive.
    pub fn min_eigenvalue(&self) -> f64 {
        qmath::min_eigenvalue(&self.choi).expect("Choi matrix is Hermitian")
    }

    pub fn is_cptp(&self, tolerance: f64) -> bool {
        self.min_eigenvalue() >= -tolerance && self.trace_preservation_error() <= tolerance
    }

    pub fn rank(&self, tolerance: f64) -> usize {
        qmath::hermitian_eigenvalues(&self.choi)
            .expect("Choi matrix is Hermitian")
            .into_iter()
            .filter(|v| v.abs() > tolerance)
            .count()
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self { dim: self.dim, choi: self.choi.scale(factor) }
    }

    pub fn to_file(&self) -> ProcessFile {
        let n = self.choi.nrows();
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let z = self.choi[(i, j)];
                entries.push([z.re, z.im]);
            }
        }
        ProcessFile { dim: self.dim, entries }
    }
}

/// `later(earlier(.))`.
pub fn compose(later: &ProcessMatrix, earlier: &ProcessMatrix) -> Result<ProcessMatrix> {
    if later.dim != earlier.dim {
        return Err(QpcError::Dimension(format!(
            "cannot compose processes on dimensions {} and {}",
            later.dim, earlier.dim
        )));
    }
    Ok(ProcessMatrix::from_action(later.dim, |e| {
        let mid = earlier.apply_matrix(e).expect("dimensions checked");
        later.apply_matrix(&mid).expect("dimensions checked")
    }))
}

/// Convex combination of processes.
pub fn mix(weights: &[f64], processes: &[ProcessMatrix]) -> Result<ProcessMatrix> {
    if weights.len() != processes.len() || processes.is_empty() {
        return Err(QpcError::InvalidArgument(format!("{} weights for {} processes", weights.len(), processes.len())));
    }
    if weights.iter().any(|&w| w < 0.0 || !w.is_finite()) {
        return Err(QpcError::InvalidArgument("mixing weights must be non-negative".into()));
    }
    let total: f64 = weights.iter().sum();
    if (total - 1.0).abs() > tol::ALGEBRAIC {
        return Err(QpcError::InvalidArgument(format!("mixing weights sum to {total}, not 1")));
    }
    let dim = processes[0].dim;
    if processes.iter().any(|p| p.dim != dim) {
        return Err(QpcError::Dimension("mixing processes of different dimensions".into()));
    }
    let mut choi = ComplexMatrix::zeros(dim * dim, dim * dim);
    for (w, p) in weights.iter().zip(processes) {
        choi += p.choi.scale(*w);
    }
    Ok(ProcessMatrix { dim, choi })
}

/// `U(t) = sum_{j,k} exp(i t (-1)^{jk} / 2) |jk><jk|`.
pub fn ising_unitary(t: f64) -> ComplexMatrix {
    let phases: Vec<Complex64> = (0..4)
        .map(|idx| {
            let (j, k) = (idx >> 1, idx & 1);
            let sign = if j * k == 1 { -1.0 } else { 1.0 };
            Complex64::from_polar(1.0, 0.5 * sign * t)
        })
        .collect();
    ComplexMatrix::from_diagonal(&nalgebra::DVector::from_vec(phases))
}

pub fn cz_unitary() -> ComplexMatrix {
    ComplexMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![ONE, ONE, ONE, -ONE]))
}

/// Process matrix of the controlled-Z gate.
pub fn cz_process() -> ProcessMatrix {
    ProcessMatrix::from_unitary(&cz_unitary()).expect("CZ is unitary")
}

/// Single-qubit depolarising channel `rho -> s rho + (1 - s) I/2`.
pub fn depolarizing(survival: f64) -> ProcessMatrix {
    ProcessMatrix::from_action(2, |e| {
        let mixed = qmath::identity(2) * (e.trace() * c(0.5 * (1.0 - survival), 0.0));
        e.scale(survival) + mixed
    })
}

/// Depolarise qubit `target` (0 or 1) of a two-qubit operator.
fn depolarize_two_qubit(rho: &ComplexMatrix, target: usize, survival: f64) -> ComplexMatrix {
    let half_identity = qmath::identity(2).unscale(2.0);
    let replaced = if target == 0 {
        let rest = qmath::partial_trace(rho, 0, (2, 2)).expect("4x4 operator");
        qmath::kron(&half_identity, &rest)
    } else {
        let rest = qmath::partial_trace(rho, 1, (2, 2)).expect("4x4 operator");
        qmath::kron(&rest, &half_identity)
    };
    rho.scale(survival) + replaced.scale(1.0 - survival)
}

/// Single-qubit depolarisation at rate `gamma` acting on `target_qubit`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    pub gamma: f64,
    #[serde(default = "NoiseModel::default_target")]
    pub target_qubit: usize,
}

impl NoiseModel {
    pub fn new(gamma: f64, target_qubit: usize) -> Result<Self> {
        if !(gamma >= 0.0 && gamma.is_finite()) {
            return Err(QpcError::InvalidArgument(format!("depolarisation rate {gamma} must be >= 0")));
        }
        if target_qubit > 1 {
            return Err(QpcError::InvalidArgument(format!("target qubit {target_qubit} (expected 0 or 1)")));
        }
        Ok(Self { gamma, target_qubit })
    }

    pub fn noiseless() -> Self {
        Self { gamma: 0.0, target_qubit: Self::default_target() }
    }

    pub fn with_gamma(gamma: f64) -> Result<Self> {
        Self::new(gamma, Self::default_target())
    }

    fn default_target() -> usize {
        1
    }

    pub fn survival(&self, t: f64) -> f64 {
        (-self.gamma * t).exp()
    }
}

/// The demonstration dynamics: Ising evolution for time `t`, followed by
/// depolarisation of one qubit with survival `exp(-gamma t)`.
pub fn demo_process(t: f64, noise: &NoiseModel) -> Result<ProcessMatrix> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(QpcError::InvalidArgument(format!("interaction time {t} must be >= 0")));
    }
    let noise = NoiseModel::new(noise.gamma, noise.target_qubit)?;
    let u = ising_unitary(t);
    let ud = u.adjoint();
    let survival = noise.survival(t);
    Ok(ProcessMatrix::from_action(4, |e| {
        let evolved = &u * e * &ud;
        depolarize_two_qubit(&evolved, noise.target_qubit, survival)
    }))
}

/// On-disk process matrix: row-major `[re, im]` pairs of the `d^2 x d^2`
/// Choi matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProcessFile {
    pub dim: usize,
    pub entries: Vec<[f64; 2]>,
}

impl ProcessFile {
    pub fn to_process(&self, tolerance: f64) -> Result<ProcessMatrix> {
        let n = self.dim * self.dim;
        if self.dim == 0 || self.entries.len() != n * n {
            return Err(QpcError::Dimension(format!(
                "{} entries for a process on dimension {} (expected {})",
                self.entries.len(),
                self.dim,
                n * n
            )));
        }
        if self.entries.iter().flatten().any(|v| !v.is_finite()) {
            return Err(QpcError::InvalidArgument("non-finite matrix entry".into()));
        }
        let choi = ComplexMatrix::from_row_iterator(n, n, self.entries.iter().map(|[re, im]| c(*re, *im)));
        ProcessMatrix::with_tolerance(self.dim, choi, tolerance)
    }
}

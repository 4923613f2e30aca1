//! Dense complex linear algebra and quantum-state primitives.
//!
//! Every matrix in this crate is small (at most 64x64), so everything is
//! dense and built on `nalgebra`'s dynamically sized matrices.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{QpcError, Result};
use crate::tol;

pub type ComplexMatrix = DMatrix<Complex64>;
pub type ComplexVector = DVector<Complex64>;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

#[inline]
pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn identity(d: usize) -> ComplexMatrix {
    ComplexMatrix::identity(d, d)
}

/// Pauli matrix `sigma_k`: 0 = identity, 1 = X, 2 = Y, 3 = Z.
pub fn pauli(k: usize) -> ComplexMatrix {
    match k {
        0 => identity(2),
        1 => ComplexMatrix::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO]),
        2 => ComplexMatrix::from_row_slice(2, 2, &[ZERO, -I, I, ZERO]),
        3 => ComplexMatrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, -ONE]),
        _ => panic!("Pauli index {k} out of range 0..=3"),
    }
}

/// Eigenvector of Pauli `k` (1..=3) with eigenvalue `m` (+1 or -1).
pub fn pauli_eigenstate(k: usize, m: i8) -> ComplexVector {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let (a, b) = match (k, m) {
        (1, 1) => (c(h, 0.0), c(h, 0.0)),
        (1, -1) => (c(h, 0.0), c(-h, 0.0)),
        (2, 1) => (c(h, 0.0), c(0.0, h)),
        (2, -1) => (c(h, 0.0), c(0.0, -h)),
        (3, 1) => (ONE, ZERO),
        (3, -1) => (ZERO, ONE),
        _ => panic!("no Pauli eigenstate for k={k}, m={m}"),
    };
    ComplexVector::from_vec(vec![a, b])
}

/// Computational basis vector `|j>` in dimension `d`.
pub fn basis_vector(d: usize, j: usize) -> ComplexVector {
    let mut v = ComplexVector::zeros(d);
    v[j] = ONE;
    v
}

/// Matrix unit `|m><n|`.
pub fn matrix_unit(d: usize, m: usize, n: usize) -> ComplexMatrix {
    let mut e = ComplexMatrix::zeros(d, d);
    e[(m, n)] = ONE;
    e
}

/// `|v><v|`.
pub fn projector(v: &ComplexVector) -> ComplexMatrix {
    v * v.adjoint()
}

pub fn dagger(a: &ComplexMatrix) -> ComplexMatrix {
    a.adjoint()
}

pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kronecker(b)
}

pub fn trace(a: &ComplexMatrix) -> Complex64 {
    a.trace()
}

/// Largest entrywise deviation `|a_ij - conj(a_ji)|`.
pub fn hermitian_deviation(a: &ComplexMatrix) -> f64 {
    if !a.is_square() {
        return f64::INFINITY;
    }
    let n = a.nrows();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((a[(i, j)] - a[(j, i)].conj()).norm());
        }
    }
    worst
}

pub fn is_hermitian(a: &ComplexMatrix, tolerance: f64) -> bool {
    hermitian_deviation(a) <= tolerance
}

/// `(a + a^dagger) / 2`.
pub fn hermitian_part(a: &ComplexMatrix) -> ComplexMatrix {
    (a + a.adjoint()).scale(0.5)
}

fn require_hermitian(h: &ComplexMatrix) -> Result<()> {
    let deviation = hermitian_deviation(h);
    // Scale-aware so that large but Hermitian inputs are not rejected.
    let scale = h.iter().map(|z| z.norm()).fold(1.0, f64::max);
    if deviation > tol::HERMITIAN * scale {
        return Err(QpcError::NotHermitian { deviation });
    }
    Ok(())
}

/// Eigenvalues of a Hermitian matrix in ascending order.
pub fn hermitian_eigenvalues(h: &ComplexMatrix) -> Result<Vec<f64>> {
    require_hermitian(h)?;
    let mut values: Vec<f64> = hermitian_part(h).symmetric_eigenvalues().iter().copied().collect();
    values.sort_by(f64::total_cmp);
    Ok(values)
}

/// Smallest eigenvalue of a Hermitian matrix.
pub fn min_eigenvalue(h: &ComplexMatrix) -> Result<f64> {
    Ok(hermitian_eigenvalues(h)?[0])
}

/// Eigen-decomposition `h = V diag(w) V^dagger` with ascending eigenvalues.
pub fn hermitian_eigh(h: &ComplexMatrix) -> Result<(Vec<f64>, ComplexMatrix)> {
    require_hermitian(h)?;
    let eig = hermitian_part(h).symmetric_eigen();
    let n = h.nrows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |r, col| eig.eigenvectors[(r, order[col])]);
    Ok((values, vectors))
}

/// Apply a real function to the spectrum of a Hermitian matrix.
pub fn hermitian_function(h: &ComplexMatrix, f: impl Fn(f64) -> f64) -> Result<ComplexMatrix> {
    let (values, vectors) = hermitian_eigh(h)?;
    let diag =
        ComplexMatrix::from_diagonal(&ComplexVector::from_iterator(values.len(), values.iter().map(|&v| c(f(v), 0.0))));
    Ok(&vectors * diag * vectors.adjoint())
}

/// Hilbert-Schmidt inner product `tr(a^dagger b)`.
pub fn hs_inner(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<Complex64> {
    if a.shape() != b.shape() {
        return Err(QpcError::Dimension(format!("hs_inner of {:?} and {:?}", a.shape(), b.shape())));
    }
    Ok(a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum())
}

fn check_bipartite(m: &ComplexMatrix, subsystem: usize, dims: (usize, usize)) -> Result<()> {
    if !m.is_square() || dims.0 * dims.1 != m.nrows() {
        return Err(QpcError::Dimension(format!(
            "bipartite dims {:?} do not match a {}x{} matrix",
            dims,
            m.nrows(),
            m.ncols()
        )));
    }
    if subsystem > 1 {
        return Err(QpcError::InvalidArgument(format!("subsystem index {subsystem} (expected 0 or 1)")));
    }
    Ok(())
}

/// Partial transpose on `subsystem` (0 = first factor, 1 = second factor) of
/// an operator on a `dims.0 * dims.1` dimensional space.
pub fn partial_transpose(m: &ComplexMatrix, subsystem: usize, dims: (usize, usize)) -> Result<ComplexMatrix> {
    check_bipartite(m, subsystem, dims)?;
    let (d1, d2) = dims;
    let n = d1 * d2;
    let mut out = ComplexMatrix::zeros(n, n);
    for i in 0..d1 {
        for k in 0..d2 {
            for j in 0..d1 {
                for l in 0..d2 {
                    let (src_r, src_c) =
                        if subsystem == 1 { (i * d2 + l, j * d2 + k) } else { (j * d2 + k, i * d2 + l) };
                    out[(i * d2 + k, j * d2 + l)] = m[(src_r, src_c)];
                }
            }
        }
    }
    Ok(out)
}

/// Partial trace over `subsystem` (0 = first factor, 1 = second factor).
pub fn partial_trace(m: &ComplexMatrix, subsystem: usize, dims: (usize, usize)) -> Result<ComplexMatrix> {
    check_bipartite(m, subsystem, dims)?;
    let (d1, d2) = dims;
    Ok(if subsystem == 1 {
        ComplexMatrix::from_fn(d1, d1, |i, j| (0..d2).map(|k| m[(i * d2 + k, j * d2 + k)]).sum())
    } else {
        ComplexMatrix::from_fn(d2, d2, |k, l| (0..d1).map(|i| m[(i * d2 + k, i * d2 + l)]).sum())
    })
}

/// Entrywise maximum absolute difference.
pub fn max_abs_diff(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    if a.shape() != b.shape() {
        return f64::INFINITY;
    }
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// System state: a Hermitian, positive semidefinite `d x d` matrix.
///
/// Normalised states have unit trace; unnormalised ones (outputs of trace
/// decreasing maps, tomography records of unnormalised processes) carry
/// `normalized == false` and only need a non-negative trace.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    mat: ComplexMatrix,
    normalized: bool,
}

impl DensityMatrix {
    pub fn new(mat: ComplexMatrix) -> Result<Self> {
        Self::validate(&mat, true)?;
        Ok(Self { mat, normalized: true })
    }

    pub fn unnormalized(mat: ComplexMatrix) -> Result<Self> {
        Self::validate(&mat, false)?;
        Ok(Self { mat, normalized: false })
    }

    /// Wrap a Hermitian matrix without checking positivity; the flag is set
    /// from the trace.
    pub(crate) fn from_hermitian_unchecked(mat: ComplexMatrix) -> Self {
        let normalized = (mat.trace() - ONE).norm() <= tol::PSD;
        Self { mat, normalized }
    }

    pub fn pure(psi: &ComplexVector) -> Result<Self> {
        let norm = psi.norm();
        if norm < tol::HERMITIAN {
            return Err(QpcError::NotPhysical("zero state vector".into()));
        }
        Self::new(projector(&psi.unscale(norm)))
    }

    pub fn maximally_mixed(d: usize) -> Self {
        Self { mat: identity(d).unscale(d as f64), normalized: true }
    }

    fn validate(mat: &ComplexMatrix, normalized: bool) -> Result<()> {
        if !mat.is_square() {
            return Err(QpcError::Dimension(format!("density matrix shape {:?}", mat.shape())));
        }
        let deviation = hermitian_deviation(mat);
        if deviation > tol::HERMITIAN {
            return Err(QpcError::NotHermitian { deviation });
        }
        let tr = mat.trace().re;
        if normalized && (tr - 1.0).abs() > tol::HERMITIAN {
            return Err(QpcError::NotPhysical(format!("trace {tr} != 1")));
        }
        if tr < -tol::HERMITIAN {
            return Err(QpcError::NotPhysical(format!("negative trace {tr}")));
        }
        let min = min_eigenvalue(mat)?;
        if min < -tol::PSD {
            return Err(QpcError::NotPhysical(format!("minimum eigenvalue {min:.3e} < 0")));
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.mat
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn trace(&self) -> f64 {
        self.mat.trace().re
    }

    pub fn purity(&self) -> f64 {
        hs_inner(&self.mat, &self.mat).map(|z| z.re).unwrap_or(f64::NAN)
    }

    pub fn partial_trace(&self, subsystem: usize, dims: (usize, usize)) -> Result<DensityMatrix> {
        let reduced = partial_trace(&self.mat, subsystem, dims)?;
        Ok(Self { mat: reduced, normalized: self.normalized })
    }

    pub fn partial_transpose(&self, subsystem: usize, dims: (usize, usize)) -> Result<ComplexMatrix> {
        partial_transpose(&self.mat, subsystem, dims)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bell() -> DensityMatrix {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let psi = ComplexVector::from_vec(vec![c(h, 0.0), ZERO, ZERO, c(h, 0.0)]);
        DensityMatrix::pure(&psi).unwrap()
    }

    #[test]
    fn kron_identity_and_diagonal() {
        assert_eq!(kron(&identity(2), &identity(2)), identity(4));
        let zz = kron(&pauli(3), &pauli(3));
        let expected = ComplexMatrix::from_diagonal(&ComplexVector::from_vec(vec![ONE, -ONE, -ONE, ONE]));
        assert!(max_abs_diff(&zz, &expected) < tol::ALGEBRAIC);
    }

    #[test]
    fn kron_xx_flips_both_qubits() {
        let xx = kron(&pauli(1), &pauli(1));
        let out = &xx * basis_vector(4, 0);
        assert!((out - basis_vector(4, 3)).norm() < tol::ALGEBRAIC);
    }

    #[test]
    fn bell_partial_transpose_is_negative() {
        let pt = bell().partial_transpose(1, (2, 2)).unwrap();
        assert!((min_eigenvalue(&pt).unwrap() + 0.5).abs() < 1e-10);
        assert!(is_hermitian(&pt, tol::ALGEBRAIC));
        let pt0 = bell().partial_transpose(0, (2, 2)).unwrap();
        assert!((min_eigenvalue(&pt0).unwrap() + 0.5).abs() < 1e-10);
    }

    #[test]
    fn partial_transpose_of_product_transposes_factor() {
        let a = projector(&pauli_eigenstate(1, 1));
        let b = projector(&pauli_eigenstate(2, 1));
        let pt = partial_transpose(&kron(&a, &b), 1, (2, 2)).unwrap();
        assert!(max_abs_diff(&pt, &kron(&a, &b.transpose())) < tol::ALGEBRAIC);
        assert!(min_eigenvalue(&pt).unwrap() > -tol::PSD);
    }

    #[test]
    fn partial_transpose_is_an_involution() {
        let m = ComplexMatrix::from_fn(6, 6, |i, j| c(i as f64 + 0.5 * j as f64, (i * j) as f64 - 1.0));
        for sub in 0..2 {
            let twice = partial_transpose(&partial_transpose(&m, sub, (2, 3)).unwrap(), sub, (2, 3)).unwrap();
            assert_eq!(twice, m);
        }
    }

    #[test]
    fn partial_trace_cases() {
        let a = projector(&pauli_eigenstate(1, -1));
        let b = projector(&pauli_eigenstate(3, 1));
        let ab = kron(&a, &b);
        assert!(max_abs_diff(&partial_trace(&ab, 1, (2, 2)).unwrap(), &a) < tol::ALGEBRAIC);
        assert!(max_abs_diff(&partial_trace(&ab, 0, (2, 2)).unwrap(), &b) < tol::ALGEBRAIC);
        let marginal = bell().partial_trace(0, (2, 2)).unwrap();
        assert!(max_abs_diff(marginal.matrix(), &identity(2).unscale(2.0)) < tol::ALGEBRAIC);
    }

    #[test]
    fn dims_mismatch_is_an_error() {
        assert!(matches!(partial_trace(&identity(4), 0, (2, 3)), Err(QpcError::Dimension(_))));
        assert!(matches!(partial_transpose(&identity(4), 1, (3, 2)), Err(QpcError::Dimension(_))));
        assert!(hs_inner(&identity(2), &identity(4)).is_err());
    }

    #[test]
    fn min_eigenvalue_cases() {
        assert!((min_eigenvalue(&identity(2)).unwrap() - 1.0).abs() < 1e-12);
        let d = ComplexMatrix::from_diagonal(&ComplexVector::from_vec(vec![c(3.0, 0.0), c(-2.0, 0.0)]));
        assert!((min_eigenvalue(&d).unwrap() + 2.0).abs() < 1e-12);
        let not_h = ComplexMatrix::from_row_slice(2, 2, &[ZERO, ONE, ZERO, ZERO]);
        assert!(matches!(min_eigenvalue(&not_h), Err(QpcError::NotHermitian { .. })));
    }

    #[test]
    fn hs_inner_cases() {
        let rho = bell();
        assert!((hs_inner(rho.matrix(), rho.matrix()).unwrap() - ONE).norm() < 1e-12);
        let mixed = identity(4).unscale(4.0);
        assert!((hs_inner(&mixed, &mixed).unwrap() - c(0.25, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn pauli_eigenstates_resolve_identity() {
        for k in 1..=3 {
            let sum = projector(&pauli_eigenstate(k, 1)) + projector(&pauli_eigenstate(k, -1));
            assert!(max_abs_diff(&sum, &identity(2)) < tol::ALGEBRAIC);
            for m in [1i8, -1] {
                let v = pauli_eigenstate(k, m);
                let av = &pauli(k) * &v;
                assert!((av - v.scale(m as f64)).norm() < tol::ALGEBRAIC);
            }
        }
    }

    #[test]
    fn density_matrix_validation() {
        assert!(DensityMatrix::new(identity(2)).is_err());
        assert!(DensityMatrix::unnormalized(identity(2)).is_ok());
        let negative = ComplexMatrix::from_diagonal(&ComplexVector::from_vec(vec![c(1.5, 0.0), c(-0.5, 0.0)]));
        assert!(matches!(DensityMatrix::new(negative), Err(QpcError::NotPhysical(_))));
        assert!(DensityMatrix::maximally_mixed(4).is_normalized());
    }
}

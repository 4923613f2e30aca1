//! A small semidefinite-programming layer.
//!
//! Problems are stated over real decision variables: Hermitian matrix
//! variables are stored as `dim^2` reals (diagonal, then the real and
//! imaginary parts of the strict upper triangle) and scalars may be free or
//! non-negative. Constraints are affine expressions with complex
//! coefficients. Complex PSD constraints are lowered through
//! [`real_embedding`] and the resulting conic program is handed to Clarabel.
//!
//! Every optimum is re-checked against the original (complex) constraints
//! before it is reported as [`SolveStatus::Optimal`].

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use clarabel::algebra::CscMatrix;
use clarabel::solver::{
    DefaultSettingsBuilder, DefaultSolver, IPSolver, NonnegativeConeT, PSDTriangleConeT, SolverStatus, SupportedConeT,
    ZeroConeT,
};
use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{QpcError, Result};
use crate::qmath::{self, ComplexMatrix};
use crate::tol;

/// Iteration cap of the interior-point method.
pub const MAX_ITERATIONS: u32 = 200;

/// A complex-valued affine function of the real decision variables.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct AffineScalar {
    pub constant: Complex64,
    pub terms: BTreeMap<usize, Complex64>,
}

impl AffineScalar {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(value: Complex64) -> Self {
        Self { constant: value, terms: BTreeMap::new() }
    }

    pub fn real_constant(value: f64) -> Self {
        Self::constant(Complex64::new(value, 0.0))
    }

    pub fn variable(index: usize, coefficient: Complex64) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(index, coefficient);
        Self { constant: Complex64::new(0.0, 0.0), terms }
    }

    pub fn add_scaled(&mut self, other: &AffineScalar, factor: Complex64) {
        self.constant += other.constant * factor;
        for (&k, &v) in &other.terms {
            *self.terms.entry(k).or_default() += v * factor;
        }
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        Self { constant: self.constant * factor, terms: self.terms.iter().map(|(&k, &v)| (k, v * factor)).collect() }
    }

    pub fn conj(&self) -> Self {
        Self { constant: self.constant.conj(), terms: self.terms.iter().map(|(&k, v)| (k, v.conj())).collect() }
    }

    pub fn evaluate(&self, x: &[f64]) -> Complex64 {
        self.terms.iter().fold(self.constant, |acc, (&k, &v)| acc + v * x[k])
    }

    fn max_difference(&self, other: &AffineScalar) -> f64 {
        let mut worst = (self.constant - other.constant).norm();
        let zero = Complex64::new(0.0, 0.0);
        for (k, v) in &self.terms {
            worst = worst.max((v - other.terms.get(k).unwrap_or(&zero)).norm());
        }
        for (k, v) in &other.terms {
            if !self.terms.contains_key(k) {
                worst = worst.max(v.norm());
            }
        }
        worst
    }

    fn max_index(&self) -> Option<usize> {
        self.terms.keys().next_back().copied()
    }
}

impl Add for AffineScalar {
    type Output = AffineScalar;
    fn add(mut self, rhs: AffineScalar) -> AffineScalar {
        self.add_scaled(&rhs, Complex64::new(1.0, 0.0));
        self
    }
}

impl Sub for AffineScalar {
    type Output = AffineScalar;
    fn sub(mut self, rhs: AffineScalar) -> AffineScalar {
        self.add_scaled(&rhs, Complex64::new(-1.0, 0.0));
        self
    }
}

impl Neg for AffineScalar {
    type Output = AffineScalar;
    fn neg(self) -> AffineScalar {
        self.scaled(Complex64::new(-1.0, 0.0))
    }
}

impl Mul<Complex64> for AffineScalar {
    type Output = AffineScalar;
    fn mul(self, rhs: Complex64) -> AffineScalar {
        self.scaled(rhs)
    }
}

/// A matrix of affine scalars, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<AffineScalar>,
}

impl AffineMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, entries: vec![AffineScalar::zero(); rows * cols] }
    }

    pub fn from_constant(m: &ComplexMatrix) -> Self {
        let (rows, cols) = m.shape();
        let entries = (0..rows * cols).map(|i| AffineScalar::constant(m[(i / cols, i % cols)])).collect();
        Self { rows, cols, entries }
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn entry(&self, i: usize, j: usize) -> &AffineScalar {
        &self.entries[i * self.cols + j]
    }

    pub fn entry_mut(&mut self, i: usize, j: usize) -> &mut AffineScalar {
        &mut self.entries[i * self.cols + j]
    }

    /// `self += factor * other`.
    pub fn add_scaled(&mut self, other: &AffineMatrix, factor: Complex64) {
        assert_eq!(self.shape(), other.shape(), "affine matrix shapes differ");
        for (a, b) in self.entries.iter_mut().zip(&other.entries) {
            a.add_scaled(b, factor);
        }
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        Self { rows: self.rows, cols: self.cols, entries: self.entries.iter().map(|e| e.scaled(factor)).collect() }
    }

    pub fn trace(&self) -> AffineScalar {
        let mut acc = AffineScalar::zero();
        for i in 0..self.rows.min(self.cols) {
            acc.add_scaled(self.entry(i, i), Complex64::new(1.0, 0.0));
        }
        acc
    }

    /// `tr(c * self) = sum_ij c_ji self_ij`.
    pub fn trace_with(&self, c: &ComplexMatrix) -> AffineScalar {
        assert_eq!((c.ncols(), c.nrows()), self.shape(), "trace_with shape mismatch");
        let mut acc = AffineScalar::zero();
        for i in 0..self.rows {
            for j in 0..self.cols {
                let w = c[(j, i)];
                if w.norm() > 0.0 {
                    acc.add_scaled(self.entry(i, j), w);
                }
            }
        }
        acc
    }

    /// `u^dagger self v` for column vectors `u`, `v`.
    pub fn sandwich(&self, u: &qmath::ComplexVector, v: &qmath::ComplexVector) -> AffineScalar {
        let mut acc = AffineScalar::zero();
        for i in 0..self.rows {
            for j in 0..self.cols {
                let w = u[i].conj() * v[j];
                if w.norm() > 0.0 {
                    acc.add_scaled(self.entry(i, j), w);
                }
            }
        }
        acc
    }

    /// Copy `block` into position `(row, col)`, scaled by `factor` and added.
    pub fn add_block(&mut self, row: usize, col: usize, block: &AffineMatrix, factor: Complex64) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self.entry_mut(row + i, col + j).add_scaled(block.entry(i, j), factor);
            }
        }
    }

    pub fn partial_transpose(&self, subsystem: usize, dims: (usize, usize)) -> Result<AffineMatrix> {
        // Reuse the numeric index map on a matrix of entry positions.
        let n = self.rows;
        let positions = ComplexMatrix::from_fn(n, n, |i, j| Complex64::new((i * n + j) as f64, 0.0));
        let mapped = qmath::partial_transpose(&positions, subsystem, dims)?;
        let entries = mapped.iter().copied().collect::<Vec<_>>();
        // `mapped` is column-major; rebuild row-major.
        let mut out = AffineMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let src = entries[j * n + i].re as usize;
                *out.entry_mut(i, j) = self.entries[src].clone();
            }
        }
        Ok(out)
    }

    /// `v * self * v^dagger` for a constant square `v`.
    pub fn conjugated(&self, v: &ComplexMatrix) -> AffineMatrix {
        assert_eq!(v.ncols(), self.rows, "conjugation shape mismatch");
        // First t = self * v^dagger, then v * t.
        let n = v.nrows();
        let mut t = AffineMatrix::zeros(self.rows, n);
        for i in 0..self.rows {
            for j in 0..n {
                let acc = t.entry_mut(i, j);
                for k in 0..self.cols {
                    let w = v[(j, k)].conj();
                    if w.norm() > 0.0 {
                        acc.add_scaled(&self.entries[i * self.cols + k], w);
                    }
                }
            }
        }
        let mut out = AffineMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let acc = out.entry_mut(i, j);
                for k in 0..self.rows {
                    let w = v[(i, k)];
                    if w.norm() > 0.0 {
                        acc.add_scaled(t.entry(k, j), w);
                    }
                }
            }
        }
        out
    }

    pub fn evaluate(&self, x: &[f64]) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.rows, self.cols, |i, j| self.entry(i, j).evaluate(x))
    }

    /// Largest coefficient-wise deviation from Hermitian symmetry.
    pub fn hermitian_deviation(&self) -> f64 {
        if self.rows != self.cols {
            return f64::INFINITY;
        }
        let mut worst: f64 = 0.0;
        for i in 0..self.rows {
            for j in i..self.cols {
                worst = worst.max(self.entry(i, j).max_difference(&self.entry(j, i).conj()));
            }
        }
        worst
    }

    fn max_index(&self) -> Option<usize> {
        self.entries.iter().filter_map(AffineScalar::max_index).max()
    }
}

impl Sub<&AffineMatrix> for &AffineMatrix {
    type Output = AffineMatrix;
    fn sub(self, rhs: &AffineMatrix) -> AffineMatrix {
        let mut out = self.clone();
        out.add_scaled(rhs, Complex64::new(-1.0, 0.0));
        out
    }
}

impl Add<&AffineMatrix> for &AffineMatrix {
    type Output = AffineMatrix;
    fn add(self, rhs: &AffineMatrix) -> AffineMatrix {
        let mut out = self.clone();
        out.add_scaled(rhs, Complex64::new(1.0, 0.0));
        out
    }
}

/// Handle to a Hermitian matrix variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HermitianVar {
    pub dim: usize,
    pub offset: usize,
}

impl HermitianVar {
    pub fn degrees_of_freedom(&self) -> usize {
        self.dim * self.dim
    }

    pub fn expr(&self) -> AffineMatrix {
        let d = self.dim;
        let one = Complex64::new(1.0, 0.0);
        let i = Complex64::new(0.0, 1.0);
        let mut m = AffineMatrix::zeros(d, d);
        for a in 0..d {
            *m.entry_mut(a, a) = AffineScalar::variable(self.offset + a, one);
        }
        let mut next = self.offset + d;
        for a in 0..d {
            for b in a + 1..d {
                let (re, im) = (next, next + 1);
                next += 2;
                *m.entry_mut(a, b) = AffineScalar::variable(re, one) + AffineScalar::variable(im, i);
                *m.entry_mut(b, a) = AffineScalar::variable(re, one) + AffineScalar::variable(im, -i);
            }
        }
        m
    }

    pub fn value(&self, x: &[f64]) -> ComplexMatrix {
        self.expr().evaluate(x)
    }
}

/// Handle to a real scalar variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScalarVar {
    pub index: usize,
}

impl ScalarVar {
    pub fn expr(&self) -> AffineScalar {
        AffineScalar::variable(self.index, Complex64::new(1.0, 0.0))
    }

    pub fn value(&self, x: &[f64]) -> f64 {
        x[self.index]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Minimize,
    Maximize,
}

#[derive(Debug, Clone)]
pub struct SdpProblem {
    n_vars: usize,
    nonneg_vars: Vec<usize>,
    objective: AffineScalar,
    sense: Sense,
    equalities: Vec<AffineScalar>,
    inequalities: Vec<AffineScalar>,
    psd: Vec<AffineMatrix>,
}

impl Default for SdpProblem {
    fn default() -> Self {
        Self::new()
    }
}

impl SdpProblem {
    pub fn new() -> Self {
        Self {
            n_vars: 0,
            nonneg_vars: Vec::new(),
            objective: AffineScalar::zero(),
            sense: Sense::Minimize,
            equalities: Vec::new(),
            inequalities: Vec::new(),
            psd: Vec::new(),
        }
    }

    /// Register a Hermitian `dim x dim` variable (`dim^2` real degrees of
    /// freedom).
    pub fn add_hermitian_var(&mut self, dim: usize) -> HermitianVar {
        assert!(dim >= 1, "Hermitian variable needs dim >= 1");
        let var = HermitianVar { dim, offset: self.n_vars };
        self.n_vars += dim * dim;
        var
    }

    pub fn add_scalar_var(&mut self) -> ScalarVar {
        let var = ScalarVar { index: self.n_vars };
        self.n_vars += 1;
        var
    }

    pub fn add_nonneg_var(&mut self) -> ScalarVar {
        let var = self.add_scalar_var();
        self.nonneg_vars.push(var.index);
        var
    }

    pub fn degrees_of_freedom(&self) -> usize {
        self.n_vars
    }

    pub fn n_psd_constraints(&self) -> usize {
        self.psd.len()
    }

    pub fn n_equalities(&self) -> usize {
        self.equalities.len()
    }

    /// Constrain a complex affine expression to vanish (real and imaginary
    /// parts).
    pub fn constrain_zero(&mut self, expr: AffineScalar) {
        self.equalities.push(expr);
    }

    /// Entrywise equality of two Hermitian expressions (upper triangle only).
    pub fn constrain_hermitian_eq(&mut self, lhs: &AffineMatrix, rhs: &AffineMatrix) {
        assert_eq!(lhs.shape(), rhs.shape(), "equality of differently shaped matrices");
        let diff = lhs - rhs;
        for i in 0..diff.rows {
            for j in i..diff.cols {
                self.constrain_zero(diff.entry(i, j).clone());
            }
        }
    }

    /// `Re(expr) >= 0`.
    pub fn constrain_nonneg(&mut self, expr: AffineScalar) {
        self.inequalities.push(expr);
    }

    /// `expr` is positive semidefinite. The expression must be Hermitian
    /// coefficient-by-coefficient.
    pub fn constrain_psd(&mut self, expr: AffineMatrix) -> Result<()> {
        let deviation = expr.hermitian_deviation();
        if deviation > tol::ALGEBRAIC {
            return Err(QpcError::MalformedConstraint(format!(
                "PSD expression deviates from Hermitian by {deviation:.3e}"
            )));
        }
        self.psd.push(expr);
        Ok(())
    }

    /// Real part of `expr` is optimised.
    pub fn set_objective(&mut self, sense: Sense, expr: AffineScalar) {
        self.sense = sense;
        self.objective = expr;
    }

    fn check_indices(&self) -> Result<()> {
        let too_big = |m: Option<usize>| m.is_some_and(|i| i >= self.n_vars);
        if too_big(self.objective.max_index())
            || self.equalities.iter().any(|e| too_big(e.max_index()))
            || self.inequalities.iter().any(|e| too_big(e.max_index()))
            || self.psd.iter().any(|m| too_big(m.max_index()))
        {
            return Err(QpcError::MalformedConstraint("expression references an unknown variable".into()));
        }
        Ok(())
    }

    /// Objective value at `x` (real part, in the problem's own sense).
    pub fn objective_value(&self, x: &[f64]) -> f64 {
        self.objective.evaluate(x).re
    }

    /// Independent feasibility check of a candidate point.
    pub fn verify(&self, x: &[f64]) -> Verification {
        let max_eq_residual = self.equalities.iter().map(|e| e.evaluate(x).norm()).fold(0.0, f64::max);
        let mut min_slack = f64::INFINITY;
        for &k in &self.nonneg_vars {
            min_slack = min_slack.min(x[k]);
        }
        for e in &self.inequalities {
            min_slack = min_slack.min(e.evaluate(x).re);
        }
        for m in &self.psd {
            let value = qmath::hermitian_part(&m.evaluate(x));
            let min = qmath::min_eigenvalue(&value).unwrap_or(f64::NEG_INFINITY);
            min_slack = min_slack.min(min);
        }
        Verification { max_eq_residual, min_psd_eigenvalue: min_slack }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Verification {
    pub max_eq_residual: f64,
    /// Smallest eigenvalue over all PSD constraints, also covering scalar
    /// non-negativity constraints.
    pub min_psd_eigenvalue: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    Optimal,
    Infeasible,
    Unbounded,
    NumericalFailure,
}

impl fmt::Display for SolveStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SolveStatus::Optimal => "optimal",
            SolveStatus::Infeasible => "infeasible",
            SolveStatus::Unbounded => "unbounded",
            SolveStatus::NumericalFailure => "numerical-failure",
        })
    }
}

#[derive(Debug, Clone)]
pub struct SdpSolution {
    pub status: SolveStatus,
    pub objective_value: f64,
    /// Dual objective value (same sense as the primal).
    pub dual_objective_value: f64,
    pub x: Vec<f64>,
    pub max_eq_residual: f64,
    pub min_psd_eigenvalue: f64,
    /// `|primal - dual| / max(1, |primal|)`.
    pub duality_gap: f64,
    pub iterations: u32,
    pub solve_time: f64,
    /// Termination status as reported by the interior-point solver.
    pub solver_status: String,
}

impl SdpSolution {
    pub fn is_optimal(&self) -> bool {
        self.status == SolveStatus::Optimal
    }

    pub fn hermitian(&self, var: &HermitianVar) -> ComplexMatrix {
        var.value(&self.x)
    }

    pub fn scalar(&self, var: &ScalarVar) -> f64 {
        var.value(&self.x)
    }
}

/// `[[Re h, -Im h], [Im h, Re h]]`: PSD iff `h` is, with every eigenvalue of
/// `h` appearing twice.
pub fn real_embedding(h: &ComplexMatrix) -> Result<DMatrix<f64>> {
    let deviation = qmath::hermitian_deviation(h);
    if deviation > tol::HERMITIAN {
        return Err(QpcError::NotHermitian { deviation });
    }
    let n = h.nrows();
    Ok(DMatrix::from_fn(2 * n, 2 * n, |i, j| {
        let z = h[(i % n, j % n)];
        match (i < n, j < n) {
            (true, true) | (false, false) => z.re,
            (true, false) => -z.im,
            (false, true) => z.im,
        }
    }))
}

/// Sparse real row `sum coeffs * x + constant`.
#[derive(Default)]
struct RealRow {
    constant: f64,
    coeffs: Vec<(usize, f64)>,
}

impl RealRow {
    fn real_part(e: &AffineScalar) -> Self {
        Self { constant: e.constant.re, coeffs: e.terms.iter().map(|(&k, v)| (k, v.re)).collect() }
    }

    fn imag_part(e: &AffineScalar) -> Self {
        Self { constant: e.constant.im, coeffs: e.terms.iter().map(|(&k, v)| (k, v.im)).collect() }
    }

    fn negated(mut self) -> Self {
        self.constant = -self.constant;
        for c in &mut self.coeffs {
            c.1 = -c.1;
        }
        self
    }

    fn is_trivial(&self) -> bool {
        self.coeffs.iter().all(|c| c.1.abs() < 1e-14)
    }
}

/// Rows of `svec(embedding(m))` in Clarabel's triangle ordering.
fn psd_rows(m: &AffineMatrix) -> Vec<RealRow> {
    let n = m.rows;
    let element = |i: usize, j: usize| -> RealRow {
        // Real embedding entry (i, j) of the 2n x 2n matrix.
        let z = m.entry(i % n, j % n);
        match (i < n, j < n) {
            (true, true) | (false, false) => RealRow::real_part(z),
            (true, false) => RealRow::imag_part(z).negated(),
            (false, true) => RealRow::imag_part(z),
        }
    };
    let mut rows = Vec::with_capacity(n * (2 * n + 1));
    for j in 0..2 * n {
        for i in 0..=j {
            let mut row = element(i, j);
            if i != j {
                row.constant *= std::f64::consts::SQRT_2;
                for c in &mut row.coeffs {
                    c.1 *= std::f64::consts::SQRT_2;
                }
            }
            rows.push(row);
        }
    }
    rows
}

/// Interior-point settings.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverOptions {
    pub max_iterations: u32,
    pub gap_tolerance: f64,
    pub feasibility_tolerance: f64,
    pub chordal_decomposition: bool,
    /// Rescale the problem data before solving.
    pub equilibrate: bool,
    pub max_step_fraction: f64,
    pub verbose: bool,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            max_iterations: MAX_ITERATIONS,
            gap_tolerance: 1e-9,
            feasibility_tolerance: 1e-9,
            chordal_decomposition: true,
            equilibrate: true,
            max_step_fraction: 0.99,
            verbose: false,
        }
    }
}

impl SolverOptions {
    /// Settings tried in turn by [`solve`] until one run is certified.
    /// Equilibration occasionally stalls the method just short of the target
    /// accuracy on these problems; the unscaled and shorter-step variants
    /// recover.
    pub fn fallback_ladder() -> Vec<SolverOptions> {
        let base = SolverOptions::default();
        vec![
            base.clone(),
            SolverOptions { equilibrate: false, ..base.clone() },
            SolverOptions { max_step_fraction: 0.95, ..base.clone() },
            SolverOptions { equilibrate: false, max_step_fraction: 0.9, ..base },
        ]
    }
}

/// Solve with Clarabel and certify the result independently.
/// Runs through [`SolverOptions::fallback_ladder`] while the result is a
/// numerical failure; infeasibility and unboundedness are final.
pub fn solve(problem: &SdpProblem) -> Result<SdpSolution> {
    let mut last = None;
    for options in SolverOptions::fallback_ladder() {
        let solution = solve_with(problem, &options)?;
        if solution.status != SolveStatus::NumericalFailure {
            return Ok(solution);
        }
        last = Some(solution);
    }
    Ok(last.expect("non-empty ladder"))
}

pub fn solve_with(problem: &SdpProblem, options: &SolverOptions) -> Result<SdpSolution> {
    problem.check_indices()?;
    let n = problem.n_vars;

    let mut rows_i = Vec::new();
    let mut cols_j = Vec::new();
    let mut vals = Vec::new();
    let mut b = Vec::new();
    let mut cones: Vec<SupportedConeT<f64>> = Vec::new();

    // Each row encodes s = const + g.x, i.e. A = -g, b = const.
    let mut push_row = |row: &RealRow, b: &mut Vec<f64>| {
        let r = b.len();
        for &(k, v) in &row.coeffs {
            if v != 0.0 {
                rows_i.push(r);
                cols_j.push(k);
                vals.push(-v);
            }
        }
        b.push(row.constant);
    };

    let mut eq_rows = 0;
    for e in &problem.equalities {
        for row in [RealRow::real_part(e), RealRow::imag_part(e)] {
            if row.is_trivial() && row.constant.abs() < 1e-14 {
                continue;
            }
            push_row(&row, &mut b);
            eq_rows += 1;
        }
    }
    if eq_rows > 0 {
        cones.push(ZeroConeT(eq_rows));
    }

    let mut nonneg_rows = 0;
    for &k in &problem.nonneg_vars {
        push_row(&RealRow { constant: 0.0, coeffs: vec![(k, 1.0)] }, &mut b);
        nonneg_rows += 1;
    }
    for e in &problem.inequalities {
        push_row(&RealRow::real_part(e), &mut b);
        nonneg_rows += 1;
    }
    if nonneg_rows > 0 {
        cones.push(NonnegativeConeT(nonneg_rows));
    }

    for m in &problem.psd {
        for row in psd_rows(m) {
            push_row(&row, &mut b);
        }
        cones.push(PSDTriangleConeT(2 * m.rows));
    }

    let m_rows = b.len();
    let a = CscMatrix::new_from_triplets(m_rows, n, rows_i, cols_j, vals);
    let p = CscMatrix::<f64>::zeros((n, n));
    let sign = match problem.sense {
        Sense::Minimize => 1.0,
        Sense::Maximize => -1.0,
    };
    let mut q = vec![0.0; n];
    for (&k, v) in &problem.objective.terms {
        q[k] = sign * v.re;
    }

    let settings = DefaultSettingsBuilder::default()
        .verbose(options.verbose)
        .max_iter(options.max_iterations)
        .tol_gap_abs(options.gap_tolerance)
        .tol_gap_rel(options.gap_tolerance)
        .tol_feas(options.feasibility_tolerance)
        .tol_ktratio(1e-7)
        .direct_solve_method("faer".to_string())
        .max_threads(1)
        .chordal_decomposition_enable(options.chordal_decomposition)
        .equilibrate_enable(options.equilibrate)
        .max_step_fraction(options.max_step_fraction)
        .build()
        .expect("valid solver settings");
    let mut solver = DefaultSolver::new(&p, &q, &a, &b, &cones, settings)
        .map_err(|e| QpcError::MalformedConstraint(format!("solver rejected the problem: {e:?}")))?;
    solver.solve();
    let sol = &solver.solution;

    let x = sol.x.clone();
    let offset = problem.objective.constant.re;
    let objective_value = problem.objective_value(&x);
    let dual_objective_value = sign * sol.obj_val_dual + offset;
    let duality_gap = (objective_value - dual_objective_value).abs() / objective_value.abs().max(1.0);
    let check = problem.verify(&x);

    let certified =
        check.max_eq_residual <= tol::SOLVER && check.min_psd_eigenvalue >= -tol::SOLVER && duality_gap <= tol::SOLVER;
    let status = match sol.status {
        SolverStatus::Solved | SolverStatus::AlmostSolved if certified => SolveStatus::Optimal,
        SolverStatus::PrimalInfeasible | SolverStatus::AlmostPrimalInfeasible => SolveStatus::Infeasible,
        SolverStatus::DualInfeasible | SolverStatus::AlmostDualInfeasible => SolveStatus::Unbounded,
        _ => SolveStatus::NumericalFailure,
    };

    Ok(SdpSolution {
        status,
        objective_value,
        dual_objective_value,
        x,
        max_eq_residual: check.max_eq_residual,
        min_psd_eigenvalue: check.min_psd_eigenvalue,
        duality_gap,
        iterations: sol.iterations,
        solve_time: sol.solve_time,
        solver_status: format!("{:?}", sol.status),
    })
}

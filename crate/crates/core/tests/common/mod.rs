//! Random channels and explicitly incapable processes for the property
//! checks. Everything here is built from Kraus operators or measure-prepare
//! rules, independently of the SDP models.

#![allow(dead_code)]

use qpc::capabilities::{default_superposition_basis, CapabilityKind};
use qpc::processes::ProcessMatrix;
use qpc::qmath::{self, c, ComplexMatrix, ONE, ZERO};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian(rng: &mut impl Rng, rows: usize, cols: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| {
        c(rng.sample::<f64, _>(StandardNormal), rng.sample::<f64, _>(StandardNormal))
    })
}

/// `G (G^dagger G)^{-1/2}`: an isometry with orthonormal columns.
pub fn isometry(rng: &mut impl Rng, rows: usize, cols: usize) -> ComplexMatrix {
    let g = gaussian(rng, rows, cols);
    let gram = qmath::hermitian_part(&(g.adjoint() * &g));
    g * qmath::hermitian_function(&gram, |x| 1.0 / x.sqrt()).unwrap()
}

pub fn random_unitary(rng: &mut impl Rng, d: usize) -> ComplexMatrix {
    isometry(rng, d, d)
}

pub fn kraus_channel(kraus: &[ComplexMatrix]) -> ProcessMatrix {
    let d = kraus[0].ncols();
    ProcessMatrix::from_action(d, |rho| {
        kraus.iter().fold(ComplexMatrix::zeros(d, d), |acc, k| acc + k * rho * k.adjoint())
    })
}

/// A CPTP map with `rank` random Kraus operators (Stinespring isometry).
pub fn random_channel(rng: &mut impl Rng, d: usize, rank: usize) -> ProcessMatrix {
    let v = isometry(rng, d * rank, d);
    let kraus: Vec<ComplexMatrix> = (0..rank).map(|r| v.rows(r * d, d).into_owned()).collect();
    kraus_channel(&kraus)
}

pub fn random_state(rng: &mut impl Rng, d: usize) -> ComplexMatrix {
    let g = gaussian(rng, d, d);
    let rho = &g * g.adjoint();
    let t = qmath::trace(&rho);
    rho / t
}

pub fn random_probabilities(rng: &mut impl Rng, n: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..n).map(|_| rng.gen_range(0.05..1.0)).collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|x| x / total).collect()
}

/// `rho -> sum_j tr(E_j rho) sigma_j`.
pub fn measure_prepare(povm: &[ComplexMatrix], states: &[ComplexMatrix]) -> ProcessMatrix {
    let d = povm[0].nrows();
    ProcessMatrix::from_action(d, |rho| {
        povm.iter().zip(states).fold(ComplexMatrix::zeros(d, d), |acc, (e, s)| acc + s * qmath::trace(&(e * rho)))
    })
}

fn mixture(weights: &[f64], processes: &[ProcessMatrix]) -> ProcessMatrix {
    qpc::processes::mix(weights, processes).unwrap()
}

pub fn computational_projectors(d: usize) -> Vec<ComplexMatrix> {
    (0..d).map(|j| qmath::matrix_unit(d, j, j)).collect()
}

fn random_diagonal_state(rng: &mut impl Rng, d: usize) -> ComplexMatrix {
    let p = random_probabilities(rng, d);
    ComplexMatrix::from_fn(d, d, |i, j| if i == j { c(p[i], 0.0) } else { ZERO })
}

fn permutation_matrix(perm: &[usize]) -> ComplexMatrix {
    let d = perm.len();
    ComplexMatrix::from_fn(d, d, |i, j| if perm[j] == i { ONE } else { ZERO })
}

/// Local channels `A (x) B`.
fn local_channel(rng: &mut impl Rng) -> ProcessMatrix {
    let a = isometry(rng, 4, 2);
    let b = isometry(rng, 4, 2);
    let mut kraus = Vec::new();
    for i in 0..2 {
        for j in 0..2 {
            kraus.push(qmath::kron(&a.rows(2 * i, 2).into_owned(), &b.rows(2 * j, 2).into_owned()));
        }
    }
    kraus_channel(&kraus)
}

/// Measure a random Pauli observable on each qubit and prepare a random
/// two-qubit state per outcome pair.
fn pauli_measure_prepare(rng: &mut impl Rng) -> ProcessMatrix {
    let (a1, a2) = (rng.gen_range(1..=3), rng.gen_range(1..=3));
    let mut povm = Vec::new();
    let mut states = Vec::new();
    for m in [1i8, -1] {
        for n in [1i8, -1] {
            let e1 = qmath::projector(&qmath::pauli_eigenstate(a1, m));
            let e2 = qmath::projector(&qmath::pauli_eigenstate(a2, n));
            povm.push(qmath::kron(&e1, &e2));
            states.push(random_state(rng, 4));
        }
    }
    measure_prepare(&povm, &states)
}

/// Dephase, then move populations with a random stochastic matrix.
fn classical_channel(rng: &mut impl Rng, d: usize) -> ProcessMatrix {
    let states: Vec<ComplexMatrix> = (0..d).map(|_| random_diagonal_state(rng, d)).collect();
    measure_prepare(&computational_projectors(d), &states)
}

fn phased_permutation(rng: &mut impl Rng, d: usize) -> ProcessMatrix {
    let mut perm: Vec<usize> = (0..d).collect();
    perm.shuffle(rng);
    let phases = ComplexMatrix::from_fn(d, d, |i, j| {
        if i == j {
            c(0.0, rng.gen_range(0.0..std::f64::consts::TAU)).exp()
        } else {
            ZERO
        }
    });
    ProcessMatrix::from_unitary(&(phases * permutation_matrix(&perm))).unwrap()
}

/// Unitary permuting `|1>, |2>, |3>`, which permutes the default
/// superposition basis.
fn basis_permutation(rng: &mut impl Rng) -> ProcessMatrix {
    let mut tail = vec![1, 2, 3];
    tail.shuffle(rng);
    let perm = [0, tail[0], tail[1], tail[2]];
    ProcessMatrix::from_unitary(&permutation_matrix(&perm)).unwrap()
}

/// Measure in the computational basis and prepare mixtures of the default
/// superposition basis states.
fn free_state_preparation(rng: &mut impl Rng) -> ProcessMatrix {
    let basis = default_superposition_basis(4);
    let states: Vec<ComplexMatrix> = (0..4)
        .map(|_| {
            let q = random_probabilities(rng, 4);
            basis.iter().zip(&q).fold(ComplexMatrix::zeros(4, 4), |acc, (h, &p)| acc + qmath::projector(h) * c(p, 0.0))
        })
        .collect();
    measure_prepare(&computational_projectors(4), &states)
}

/// A random process that is incapable of `kind`; the families are closed
/// under composition with each other, so `incapable(k) after chi` keeps any
/// incapable `chi` incapable.
pub fn incapable(kind: &CapabilityKind, rng: &mut impl Rng) -> ProcessMatrix {
    let w = random_probabilities(rng, 2);
    match kind {
        CapabilityKind::EntanglementGeneration => local_channel(rng),
        CapabilityKind::NonClassical => mixture(&w, &[pauli_measure_prepare(rng), pauli_measure_prepare(rng)]),
        CapabilityKind::CoherenceCreation { .. } => {
            mixture(&w, &[phased_permutation(rng, 4), classical_channel(rng, 4)])
        }
        CapabilityKind::CoherencePreservation { .. } => classical_channel(rng, 4),
        CapabilityKind::Superposition { .. } => mixture(&w, &[basis_permutation(rng), free_state_preparation(rng)]),
    }
}

/// Kinds in the default two-qubit setting.
pub fn kinds() -> Vec<CapabilityKind> {
    CapabilityKind::all_two_qubit()
}

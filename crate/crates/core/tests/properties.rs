mod common;

use std::f64::consts::PI;

use proptest::prelude::*;
use qpc::capabilities::{self, computational_basis, default_superposition_basis, CapabilityKind};
use qpc::processes::{compose, demo_process, mix, NoiseModel, ProcessFile};
use qpc::qmath::{self, DensityMatrix};
use qpc::resources;
use qpc::tomography::{make_scheme, reconstruct, simulate_tomography, SchemeKind};

const SCHEMES: [SchemeKind; 5] = [
    SchemeKind::PauliProduct { n_qubits: 1 },
    SchemeKind::PauliProduct { n_qubits: 2 },
    SchemeKind::GeneralBasis { dim: 2 },
    SchemeKind::GeneralBasis { dim: 3 },
    SchemeKind::GeneralBasis { dim: 4 },
];

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(config(40))]

    #[test]
    fn tomography_round_trip(seed in any::<u64>(), s in 0usize..SCHEMES.len(), rank_frac in 0.0f64..1.0) {
        let kind = SCHEMES[s];
        let d = kind.dim();
        let rank = 1 + (rank_frac * (d * d - 1) as f64).round() as usize;
        let chi = common::random_channel(&mut common::rng(seed), d, rank);
        let back = reconstruct(&simulate_tomography(&chi, &make_scheme(kind).unwrap()).unwrap()).unwrap();
        prop_assert!(qmath::max_abs_diff(back.choi(), chi.choi()) <= 1e-9);
    }

    #[test]
    fn compose_and_mix_stay_cptp(seed in any::<u64>(), p in 0.0f64..=1.0) {
        let mut rng = common::rng(seed);
        let a = common::random_channel(&mut rng, 4, 3);
        let b = common::random_channel(&mut rng, 4, 2);
        prop_assert!(compose(&a, &b).unwrap().is_cptp(1e-9));
        prop_assert!(mix(&[p, 1.0 - p], &[a, b]).unwrap().is_cptp(1e-9));
    }

    #[test]
    fn incapable_fixtures_are_cptp(seed in any::<u64>(), k in 0usize..5) {
        let kind = &common::kinds()[k];
        prop_assert!(common::incapable(kind, &mut common::rng(seed)).is_cptp(1e-9));
    }

    #[test]
    fn demo_is_periodic_without_noise(t in 0.0f64..10.0) {
        let ideal = NoiseModel::noiseless();
        let a = demo_process(t, &ideal).unwrap();
        let b = demo_process(t + 2.0 * PI, &ideal).unwrap();
        prop_assert!(qmath::max_abs_diff(a.choi(), b.choi()) <= 1e-10);
    }

    #[test]
    fn demo_is_cptp(t in 0.0f64..15.0, gamma in 0.0f64..1.0) {
        prop_assert!(demo_process(t, &NoiseModel::with_gamma(gamma).unwrap()).unwrap().is_cptp(1e-9));
    }

    #[test]
    fn concurrence_is_local_unitary_invariant(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let rho = DensityMatrix::new(common::random_state(&mut rng, 4)).unwrap();
        let u = qmath::kron(&common::random_unitary(&mut rng, 2), &common::random_unitary(&mut rng, 2));
        let moved = DensityMatrix::new(qmath::hermitian_part(&(&u * rho.matrix() * u.adjoint()))).unwrap();
        let (c0, c1) = (resources::concurrence(&rho).unwrap(), resources::concurrence(&moved).unwrap());
        prop_assert!((c0 - c1).abs() <= 1e-8, "{} vs {}", c0, c1);
        prop_assert!((0.0..=1.0 + 1e-12).contains(&c0));
    }

    #[test]
    fn process_fidelity_is_symmetric_and_bounded(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let a = common::random_channel(&mut rng, 4, 2);
        let b = common::random_channel(&mut rng, 4, 5);
        let ab = capabilities::process_fidelity(&a, &b).unwrap();
        prop_assert!((ab - capabilities::process_fidelity(&b, &a).unwrap()).abs() <= 1e-12);
        prop_assert!((-1e-12..=1.0 + 1e-12).contains(&ab));
    }

    #[test]
    fn process_file_round_trip(seed in any::<u64>()) {
        let chi = common::random_channel(&mut common::rng(seed), 2, 3);
        let json = serde_json::to_string(&chi.to_file()).unwrap();
        let back = serde_json::from_str::<ProcessFile>(&json).unwrap().to_process(1e-9).unwrap();
        prop_assert!(qmath::max_abs_diff(back.choi(), chi.choi()) <= 1e-15);
    }
}

proptest! {
    #![proptest_config(config(12))]

    /// Free operations cannot increase the state robustness.
    #[test]
    fn robustness_is_monotone_under_free_channels(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let rho = DensityMatrix::new(common::random_state(&mut rng, 4)).unwrap();

        let basis = default_superposition_basis(4);
        let free = common::incapable(&CapabilityKind::superposition(4), &mut rng);
        let before = resources::superposition_robustness(&rho, &basis).unwrap();
        let after = resources::superposition_robustness(&free.apply(&rho).unwrap(), &basis).unwrap();
        prop_assert!(after <= before + 1e-6, "{} > {}", after, before);

        let basis = computational_basis(4);
        let free = common::incapable(&CapabilityKind::coherence_creation(4), &mut rng);
        let before = resources::coherence_robustness(&rho, &basis).unwrap();
        let after = resources::coherence_robustness(&free.apply(&rho).unwrap(), &basis).unwrap();
        prop_assert!(after <= before + 1e-6, "{} > {}", after, before);
    }

    /// Pure-state superposition robustness against its closed form.
    #[test]
    fn pure_state_robustness_closed_form(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let g = common::gaussian(&mut rng, 4, 1);
        let psi = g.column(0).normalize();
        let basis = default_superposition_basis(4);
        let sdp = resources::superposition_robustness(&DensityMatrix::pure(&psi).unwrap(), &basis).unwrap();
        let exact = resources::pure_superposition_robustness(&psi, &basis).unwrap();
        prop_assert!((sdp - exact).abs() <= 1e-6, "{} vs {}", sdp, exact);
    }
}

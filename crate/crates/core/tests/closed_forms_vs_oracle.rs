use minlab::bloch::bloch_decompose;
use minlab::measures::{
    discord_pure, discord_qubit, k_matrix, min_bound, min_general_nondegenerate, min_pure, min_qubit, min_qubit_term,
};
use minlab::oracle::{discord_direct, marginal_invariant, min_direct, min_direct_with_visitor, SearchConfig};
use minlab::qcore::{kron_all, DensityOperator, DimensionProfile};
use minlab::states::{haar_pure, random_local_unitaries, random_mixed, rng_stream};
use proptest::prelude::*;

fn cfg(seed: u64) -> SearchConfig {
    SearchConfig { seed, ..SearchConfig::default() }
}

fn dims(v: &[usize]) -> DimensionProfile {
    DimensionProfile::new(v.to_vec()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn pure_closed_form_matches_oracle(
        profile in prop::sample::select(vec![vec![2, 2], vec![2, 3], vec![2, 2, 2]]).prop_map(|d| dims(&d)),
        seed in any::<u64>(),
    ) {
        let psi = haar_pure::<f64>(&profile, seed);
        let rho = psi.density();
        for l in 0..profile.parties() {
            let closed = min_pure(&psi, l).unwrap();
            let n = min_direct(&rho, l, &cfg(seed)).unwrap().value;
            let d = discord_direct(&rho, l, &cfg(seed)).unwrap().value;
            prop_assert!((closed - n).abs() < 1e-6, "l={} closed={} oracle={}", l, closed, n);
            prop_assert!((discord_pure(&psi, l).unwrap() - d).abs() < 1e-6, "l={} discord oracle={}", l, d);
        }
    }

    #[test]
    fn mixed_qubit_forms_match_oracle(
        profile in prop::sample::select(vec![vec![2, 2, 2], vec![2, 3], vec![2, 2, 3]]).prop_map(|d| dims(&d)),
        seed in any::<u64>(),
    ) {
        let rho = random_mixed::<f64>(&profile, 2, seed).unwrap();
        for l in (0..profile.parties()).filter(|&l| profile.dim(l) == 2) {
            let n = min_qubit(&rho, l).unwrap();
            let d = discord_qubit(&rho, l).unwrap();
            let n_oracle = min_direct(&rho, l, &cfg(seed)).unwrap().value;
            let d_oracle = discord_direct(&rho, l, &cfg(seed)).unwrap().value;
            prop_assert!((n - n_oracle).abs() < 1e-6, "N l={} {} vs {}", l, n, n_oracle);
            prop_assert!((d - d_oracle).abs() < 1e-6, "D l={} {} vs {}", l, d, d_oracle);
        }
    }

    #[test]
    fn nondegenerate_qutrit_form_matches_oracle(seed in any::<u64>(), rank in 1usize..=3) {
        let profile = dims(&[2, 3]);
        let rho = random_mixed::<f64>(&profile, rank, seed).unwrap();
        let closed = min_general_nondegenerate(&rho, 1).unwrap();
        let oracle = min_direct(&rho, 1, &cfg(seed)).unwrap();
        prop_assert!((closed - oracle.value).abs() < 1e-9);
        prop_assert_eq!(oracle.evaluations, 1);
    }

    #[test]
    fn dominance_and_bound(seed in any::<u64>(), rank in 1usize..=8) {
        let profile = DimensionProfile::qubits(3).unwrap();
        let rho = random_mixed::<f64>(&profile, rank, seed).unwrap();
        let bloch = bloch_decompose(&rho).unwrap();
        for l in 0..3 {
            let n = min_qubit(&rho, l).unwrap();
            let d = discord_qubit(&rho, l).unwrap();
            prop_assert!(n >= d - 1e-9);
            let k = k_matrix(&bloch, l).unwrap();
            prop_assert!(min_qubit_term(&bloch, l).unwrap() <= min_bound(&k).unwrap() + 1e-12);
        }
    }

    #[test]
    fn local_unitary_invariance(seed in any::<u64>()) {
        let profile = DimensionProfile::qubits(3).unwrap();
        let rho = random_mixed::<f64>(&profile, 2, seed).unwrap();
        let us = random_local_unitaries::<f64, _>(&profile, &mut rng_stream(seed, 9));
        let moved = rho.conjugate(&kron_all(&us)).unwrap();
        for l in 0..3 {
            prop_assert!((min_qubit(&rho, l).unwrap() - min_qubit(&moved, l).unwrap()).abs() < 1e-10);
            prop_assert!((discord_qubit(&rho, l).unwrap() - discord_qubit(&moved, l).unwrap()).abs() < 1e-10);
        }
    }
}

#[test]
fn search_stays_on_marginal_preserving_bases() {
    // Rank 4 mixture with a flat first marginal: the search space is all of U(2).
    let profile = DimensionProfile::qubits(3).unwrap();
    let a = haar_pure::<f64>(&DimensionProfile::qubits(2).unwrap(), 3).density();
    let flat = DensityOperator::maximally_mixed(DimensionProfile::qubits(1).unwrap());
    let rho = DensityOperator::new(kron_all(&[flat.matrix().clone(), a.matrix().clone()]), profile).unwrap();
    let mut visited = 0;
    let mut all_ok = true;
    let r = min_direct_with_visitor(&rho, 0, &cfg(0), |b| {
        visited += 1;
        all_ok &= marginal_invariant(&rho, b, 1e-10).unwrap();
    })
    .unwrap();
    assert!(all_ok);
    assert_eq!(visited, r.evaluations);
    assert!(r.value.abs() < 1e-12);

    let rho = random_mixed::<f64>(&DimensionProfile::qubits(3).unwrap(), 3, 8).unwrap();
    let mut all_ok = true;
    min_direct_with_visitor(&rho, 2, &cfg(0), |b| all_ok &= marginal_invariant(&rho, b, 1e-10).unwrap()).unwrap();
    assert!(all_ok);
}

#[test]
fn degenerate_qutrit_marginal_needs_the_oracle() {
    // Maximally entangled two-qutrit state: flat marginal, value one.
    let profile = dims(&[3, 3]);
    let amps: Vec<_> = (0..9)
        .map(|i| if i % 4 == 0 { num_complex::Complex::new(1.0 / 3f64.sqrt(), 0.0) } else { Default::default() })
        .collect();
    let psi = minlab::qcore::PureState::new(amps, profile).unwrap();
    let rho = psi.density();
    assert!(min_general_nondegenerate(&rho, 0).is_err());
    let r = min_direct(&rho, 0, &cfg(1)).unwrap();
    assert!((r.value - 1.0).abs() < 1e-6, "{}", r.value);
    assert!((min_pure(&psi, 0).unwrap() - 1.0).abs() < 1e-14);
}

#[test]
fn refinement_never_loses_to_coarse_stage() {
    for seed in 0..6 {
        let rho = random_mixed::<f64>(&DimensionProfile::new(vec![3, 2]).unwrap(), 2, seed).unwrap();
        let d = discord_direct(&rho, 0, &cfg(seed)).unwrap();
        assert!(d.value <= d.coarse_value + 1e-15);
        assert!(d.converged);
    }
}

#[test]
fn oracle_is_deterministic() {
    let rho = random_mixed::<f64>(&DimensionProfile::new(vec![3, 2]).unwrap(), 2, 5).unwrap();
    let a = discord_direct(&rho, 0, &cfg(77)).unwrap();
    let b = discord_direct(&rho, 0, &cfg(77)).unwrap();
    assert_eq!(a, b);
}

#[test]
fn single_precision_smoke() {
    let profile = DimensionProfile::qubits(3).unwrap();
    let rho = random_mixed::<f32>(&profile, 2, 4).unwrap();
    let rho64 = random_mixed::<f64>(&profile, 2, 4).unwrap();
    let n32 = min_qubit(&rho, 0).unwrap();
    let n64 = min_qubit(&rho64, 0).unwrap();
    assert!((n32 as f64 - n64).abs() < 1e-4, "{n32} vs {n64}");
    let d32 = discord_qubit(&rho, 0).unwrap();
    assert!(n32 >= d32 - 1e-5);
}

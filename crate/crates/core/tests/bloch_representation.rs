use minlab::bloch::{bloch_decompose, bloch_reconstruct, generators, purity_from_bloch, subsets};
use minlab::qcore::{embed, hs_inner, CMatrix, DimensionProfile};
use minlab::states::{haar_pure, random_mixed};
use proptest::prelude::*;

const PROFILES: [&[usize]; 5] = [&[2, 2], &[2, 2, 2], &[2, 3], &[3, 3], &[2, 2, 2, 2]];

fn profiles() -> impl Strategy<Value = DimensionProfile> {
    prop::sample::select(PROFILES.to_vec()).prop_map(|dims| DimensionProfile::new(dims.to_vec()).unwrap())
}

/// `tr(ρ ⊗_k λ_{α_k})` with every factor embedded into the full space.
fn brute_force_moment(rho: &CMatrix<f64>, profile: &DimensionProfile, subset: &[usize], alphas: &[usize]) -> f64 {
    let mut op = CMatrix::identity(profile.total());
    for (&k, &a) in subset.iter().zip(alphas) {
        let g = generators::<f64>(profile.dim(k)).unwrap();
        op = op.matmul(&embed(g.get(a), k, profile).unwrap());
    }
    rho.matmul(&op).trace().re
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn decomposition_roundtrips(profile in profiles(), seed in any::<u64>(), rank in 1usize..4) {
        let rho = random_mixed::<f64>(&profile, rank, seed).unwrap();
        let data = bloch_decompose(&rho).unwrap();
        let back = bloch_reconstruct(&data).unwrap();
        prop_assert!(back.matrix().max_abs_diff(rho.matrix()) < 1e-12);
    }

    #[test]
    fn purity_matches_bloch_norms(profile in profiles(), seed in any::<u64>(), rank in 1usize..4) {
        let rho = random_mixed::<f64>(&profile, rank, seed).unwrap();
        let data = bloch_decompose(&rho).unwrap();
        prop_assert!((purity_from_bloch(&data).unwrap() - rho.purity()).abs() < 1e-12);
    }

    #[test]
    fn moments_match_full_space_traces(profile in profiles(), seed in any::<u64>()) {
        let rho = haar_pure::<f64>(&profile, seed).density();
        let data = bloch_decompose(&rho).unwrap();
        for subset in subsets(profile.parties()) {
            let tensor = data.tensor(&subset).unwrap();
            let shape = tensor.shape().to_vec();
            let mut index = vec![0; shape.len()];
            loop {
                let expected = brute_force_moment(rho.matrix(), &profile, &subset, &index);
                prop_assert!((tensor.get(&index) - expected).abs() < 1e-12, "subset {:?} index {:?}", subset, index);
                let mut axis = shape.len();
                loop {
                    if axis == 0 {
                        break;
                    }
                    axis -= 1;
                    index[axis] += 1;
                    if index[axis] < shape[axis] {
                        break;
                    }
                    index[axis] = 0;
                }
                if index.iter().all(|&i| i == 0) {
                    break;
                }
            }
        }
    }

    #[test]
    fn full_space_moments_are_real(profile in profiles(), seed in any::<u64>()) {
        let rho = random_mixed::<f64>(&profile, 2, seed).unwrap();
        let g = generators::<f64>(profile.dim(0)).unwrap();
        for a in 0..g.len() {
            let op = embed(g.get(a), 0, &profile).unwrap();
            prop_assert!(rho.matrix().matmul(&op).trace().im.abs() < 1e-13);
        }
    }
}

#[test]
fn generators_are_orthonormal_and_traceless() {
    for d in 2..=6 {
        let g = generators::<f64>(d).unwrap();
        assert_eq!(g.len(), d * d - 1);
        for a in 0..g.len() {
            assert!(g.get(a).trace().norm() < 1e-14);
            for b in 0..g.len() {
                let ip = hs_inner(g.get(a), g.get(b)).unwrap();
                let expected = if a == b { 2.0 } else { 0.0 };
                assert!((ip - expected).abs() < 1e-13, "d={d} a={a} b={b}");
            }
        }
    }
}

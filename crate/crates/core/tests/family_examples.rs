use minlab::bloch::bloch_decompose;
use minlab::measures::{
    concurrence_pure_bipartite, discord_qubit, equality_verdict, k_matrix, meyer_wallach, min_pure, min_qubit,
    EqualityCase,
};
use minlab::qcore::{kron_all, CMatrix, DimensionProfile, RMatrix};
use minlab::states::{self, family, haar_pure, rng_stream, Family, FamilySpec};
use num_complex::Complex;
use rand::Rng;

fn rho(f: Family, p: f64) -> minlab::DensityOperator64 {
    family(&FamilySpec::new(f, p).unwrap())
}

fn k1(f: Family, p: f64) -> RMatrix<f64> {
    k_matrix(&bloch_decompose(&rho(f, p)).unwrap(), 0).unwrap().matrix().clone()
}

fn grid() -> impl Iterator<Item = f64> {
    (0..=100).map(|i| i as f64 / 100.0)
}

#[test]
fn ghz_w_k_matrix_entries() {
    for p in [0.0, 0.25, 0.5, 1.0] {
        let q = 1.0 - p;
        let a = 2.0 * p * p + 16.0 / 9.0 * q * q;
        let c = 2.0 * p * p + 19.0 / 9.0 * q * q - 4.0 / 3.0 * p * q;
        let expected = RMatrix::from_diagonal(&[a, a, c]);
        assert!(k1(Family::GhzW, p).max_abs_diff(&expected) < 1e-12, "p={p}");
    }
}

#[test]
fn wt_w_k_matrix_entries() {
    for p in [0.0, 0.3, 0.5, 0.9] {
        let q = 1.0 - p;
        let a = 16.0 / 9.0 * (p * p + q * q);
        let c = 19.0 / 9.0 * (p * p + q * q) - 10.0 / 3.0 * p * q;
        let expected = RMatrix::from_diagonal(&[a, a, c]);
        assert!(k1(Family::WtW, p).max_abs_diff(&expected) < 1e-12, "p={p}");
    }
}

#[test]
fn ghz_ghzminus_k_matrix_recomputed() {
    for p in grid() {
        let x = 2.0 * (2.0 * p - 1.0f64).powi(2);
        let expected = RMatrix::from_diagonal(&[x, x, 2.0]);
        assert!(k1(Family::GhzGhzMinus, p).max_abs_diff(&expected) < 1e-10, "p={p}");
    }
}

#[test]
fn ghz_ghz1_k_matrix_is_scalar() {
    for p in grid() {
        let x = 1.0 + (2.0 * p - 1.0f64).powi(2);
        assert!(k1(Family::GhzGhz1, p).max_abs_diff(&RMatrix::from_diagonal(&[x, x, x])) < 1e-10, "p={p}");
    }
}

#[test]
fn ghz_w_equality_region() {
    for (i, p) in grid().enumerate() {
        let r = rho(Family::GhzW, p);
        let gap = min_qubit(&r, 0).unwrap() - discord_qubit(&r, 0).unwrap();
        let verdict = equality_verdict(&bloch_decompose(&r).unwrap(), 0).unwrap();
        if i <= 25 || i == 100 {
            assert!(gap.abs() < 1e-6, "p={p} gap={gap}");
            assert!(verdict.predicted_equal, "p={p}");
        } else {
            assert!(gap > 1e-6, "p={p} gap={gap}");
            assert!(!verdict.predicted_equal, "p={p}");
        }
    }
}

#[test]
fn wt_w_equality_region() {
    for p in grid() {
        let r = rho(Family::WtW, p);
        let gap = min_qubit(&r, 0).unwrap() - discord_qubit(&r, 0).unwrap();
        let inside = p <= 0.1127 || p >= 0.8873;
        assert_eq!(gap.abs() < 1e-6, inside, "p={p} gap={gap}");
    }
}

#[test]
fn ghz_ghzminus_equal_only_at_endpoints() {
    for (i, p) in grid().enumerate() {
        let r = rho(Family::GhzGhzMinus, p);
        let gap = min_qubit(&r, 0).unwrap() - discord_qubit(&r, 0).unwrap();
        let verdict = equality_verdict(&bloch_decompose(&r).unwrap(), 0).unwrap();
        assert_eq!(verdict.case, EqualityCase::CaseII);
        if i == 0 || i == 100 {
            assert!(gap.abs() < 1e-6 && verdict.predicted_equal, "p={p}");
        } else {
            assert!(gap > 1e-6 && !verdict.predicted_equal, "p={p} gap={gap}");
        }
    }
}

#[test]
fn ghz_ghz1_equal_everywhere() {
    for p in grid() {
        let r = rho(Family::GhzGhz1, p);
        let gap = min_qubit(&r, 0).unwrap() - discord_qubit(&r, 0).unwrap();
        assert!(gap.abs() < 1e-6, "p={p}");
        assert!(equality_verdict(&bloch_decompose(&r).unwrap(), 0).unwrap().predicted_equal);
    }
}

#[test]
fn predicted_equality_implies_observed_equality() {
    for f in Family::ALL {
        for p in (0..=200).map(|i| i as f64 / 200.0) {
            let r = rho(f, p);
            let v = equality_verdict(&bloch_decompose(&r).unwrap(), 0).unwrap();
            if v.predicted_equal {
                let gap = min_qubit(&r, 0).unwrap() - discord_qubit(&r, 0).unwrap();
                assert!(gap.abs() < 1e-6, "{f} p={p}");
            }
        }
    }
}

#[test]
fn family_endpoints_and_coherent_vectors() {
    let ghz = states::ghz::<f64>(3).unwrap().density();
    assert!(rho(Family::GhzW, 1.0).matrix().max_abs_diff(ghz.matrix()) < 1e-15);
    let s = bloch_decompose(&rho(Family::GhzW, 0.0)).unwrap().coherent(0).unwrap().to_vec();
    assert!(s[0].abs() < 1e-15 && s[1].abs() < 1e-15 && (s[2] - 1.0 / 3.0).abs() < 1e-15);
    let s = bloch_decompose(&rho(Family::GhzGhz1, 0.5)).unwrap().coherent(0).unwrap().to_vec();
    assert!(s.iter().all(|x| x.abs() < 1e-15));
    assert!(states::ghz::<f64>(3).unwrap().inner(&states::ghz_minus()).norm() < 1e-15);
    assert!(FamilySpec::new(Family::WtW, 1.5).is_err());
}

#[test]
fn flipped_w_is_bit_flip_of_w() {
    let x = CMatrix::from_vec(
        2,
        2,
        vec![Complex::default(), Complex::new(1.0, 0.0), Complex::new(1.0, 0.0), Complex::default()],
    )
    .unwrap();
    let flipped = states::w3::<f64>().evolve(&kron_all(&[x.clone(), x.clone(), x])).unwrap();
    let target = states::w3_flipped::<f64>();
    for (a, b) in flipped.amplitudes().iter().zip(target.amplitudes()) {
        assert_eq!(a, b);
    }
}

#[test]
fn meyer_wallach_identity() {
    let profiles = [vec![2, 2, 2], vec![2, 3], vec![3, 2, 2], vec![2, 2, 2, 2], vec![4, 2]];
    for i in 0..100u64 {
        let profile = DimensionProfile::new(profiles[i as usize % profiles.len()].clone()).unwrap();
        let psi = haar_pure::<f64>(&profile, 1000 + i);
        let n = profile.parties() as f64;
        let sum: f64 = (0..profile.parties())
            .map(|l| {
                let d = profile.dim(l) as f64;
                (d - 1.0) / d * min_pure(&psi, l).unwrap()
            })
            .sum();
        assert!((meyer_wallach(&psi).unwrap() - 2.0 / n * sum).abs() < 1e-12);
    }
}

#[test]
fn concurrence_identity() {
    let mut rng = rng_stream(5, 0);
    for i in 0..100u64 {
        let dims = vec![rng.random_range(2..=4), rng.random_range(2..=4)];
        let profile = DimensionProfile::new(dims).unwrap();
        let psi = haar_pure::<f64>(&profile, 2000 + i);
        let c = concurrence_pure_bipartite(&psi).unwrap();
        for l in 0..2 {
            let d = profile.dim(l) as f64;
            let predicted = d / (2.0 * (d - 1.0)) * c * c;
            assert!((min_pure(&psi, l).unwrap() - predicted).abs() < 1e-12);
        }
    }
}

use num_complex::Complex64;
use proptest::prelude::*;
use qlz_core::graphs::{
    amplitude, build_m, classify, contour_identity_check, degree_census, simplex_integral,
    AmplitudeParams, ContourOptions, FreeKind, GraphError, GraphPermutation, IntMatrix,
    MomentumAmplitude,
};

fn permutation() -> impl Strategy<Value = GraphPermutation> {
    (1usize..=7)
        .prop_flat_map(|k| Just((1..=k).collect::<Vec<_>>()).prop_shuffle())
        .prop_map(|images| GraphPermutation::new(&images).unwrap())
}

// Σ_j e^{−iω_j t} / Π_{l≠j} (−i(ω_j − ω_l)) for distinct frequencies.
fn divided_difference(omegas: &[Complex64], t: f64) -> Complex64 {
    let i = Complex64::i();
    omegas
        .iter()
        .enumerate()
        .map(|(j, wj)| {
            let den: Complex64 = omegas
                .iter()
                .enumerate()
                .filter(|&(l, _)| l != j)
                .map(|(_, wl)| -i * (wj - wl))
                .product();
            (-i * wj * t).exp() / den
        })
        .sum()
}

fn energy(p: &[f64]) -> f64 {
    p.iter().map(|x| 1.0 - (std::f64::consts::TAU * x).cos()).sum()
}

fn grid_point(idx: usize, dim: usize, n: usize) -> Vec<f64> {
    let mut idx = idx;
    (0..dim)
        .map(|_| {
            let c = idx % n;
            idx /= n;
            c as f64 / n as f64
        })
        .collect()
}

#[test]
fn second_order_ladder_amplitude_by_direct_sum() {
    let (dim, n, lambda, t) = (2, 4, 0.3, 1.7);
    let mut params = AmplitudeParams::new(dim, lambda, t, n);
    params.free = FreeKind::Bare;
    let psi = MomentumAmplitude::from_packet(dim, n, 0.8, &[0.1, -0.2]).unwrap();
    let got = amplitude(1, &GraphPermutation::identity(1), &params, &psi).unwrap();

    let sites = n.pow(dim as u32);
    let mut expected = 0.0;
    for a in 0..sites {
        let e1 = energy(&grid_point(a, dim, n));
        for b in 0..sites {
            let e2 = energy(&grid_point(b, dim, n));
            let s = if (e1 - e2).abs() < 1e-12 {
                t
            } else {
                divided_difference(&[Complex64::new(e1, 0.0), Complex64::new(e2, 0.0)], t).norm()
            };
            expected += s * s * psi.values()[a].norm_sqr();
        }
    }
    expected *= lambda * lambda / (sites * sites) as f64;
    assert!((got.value().re - expected).abs() < 1e-8 * expected, "{} vs {expected}", got.value());
    assert!(got.value().im.abs() < 1e-8 * expected);
}

#[test]
fn zeroth_order_amplitude_is_the_norm() {
    let mut params = AmplitudeParams::new(3, 0.2, 2.0, 8);
    params.free = FreeKind::Bare;
    let psi = MomentumAmplitude::from_packet(3, 8, 1.0, &[0.2, 0.0, 0.1]).unwrap();
    let v = amplitude(0, &GraphPermutation::identity(0), &params, &psi).unwrap();
    assert!((v.value().re - psi.norm_sqr()).abs() < 1e-9);
}

#[test]
fn simplex_integral_matches_divided_differences() {
    let omegas: Vec<Complex64> = [0.3, 1.9, 4.2, 2.6].iter().map(|&w| Complex64::new(w, -0.05)).collect();
    for k in 0..4 {
        let got = simplex_integral(&omegas[..=k], 3.3);
        let expected = divided_difference(&omegas[..=k], 3.3);
        assert!((got - expected).norm() < 1e-10 * expected.norm().max(1e-3), "k = {k}");
    }
}

#[test]
fn invalid_permutations_are_rejected() {
    assert!(matches!(GraphPermutation::new(&[1, 1, 2]), Err(GraphError::NotAPermutation(_))));
    assert!(GraphPermutation::new(&[0, 1]).is_err());
    assert!(GraphPermutation::new(&[1, 4, 2]).is_err());
}

#[test]
fn momentum_matrices_are_totally_unimodular_for_small_k() {
    for k in 1..=5 {
        for sigma in GraphPermutation::all(k) {
            let m = build_m(&sigma);
            assert!(m.is_totally_unimodular().unwrap(), "{:?}", sigma.images());
        }
    }
}

#[test]
fn census_counts_are_exhaustive_and_stable() {
    let factorial = [1u64, 1, 2, 6, 24, 120, 720, 5040];
    for k in 1..=7 {
        let census = degree_census(k).unwrap();
        assert_eq!(census.values().sum::<u64>(), factorial[k]);
        assert_eq!(census.get(&0), Some(&1));
        assert_eq!(census, degree_census(k).unwrap());
    }
    assert!(matches!(degree_census(9), Err(GraphError::KTooLarge { .. })));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn momentum_matrix_is_unimodular_and_conserves_transfers(
        sigma in permutation(),
        seed in prop::collection::vec(-20i64..20, 8),
    ) {
        let k = sigma.k();
        let m = build_m(&sigma);
        prop_assert_eq!(m.determinant().abs(), 1);
        let p: Vec<i64> = seed[..=k].to_vec();
        let q = m.mul_vec(&p);
        prop_assert_eq!(q[0], p[0]);
        prop_assert_eq!(q[k], p[k]);
        // the transfer at upper vertex j reappears at lower vertex σ(j)
        for j in 1..=k {
            let s = sigma.sigma(j);
            prop_assert_eq!(q[s] - q[s - 1], p[j] - p[j - 1]);
        }
    }

    #[test]
    fn classification_partitions_the_vertices(sigma in permutation()) {
        let k = sigma.k();
        let c = classify(&sigma);
        let mut all: Vec<usize> = c.peaks.iter().chain(&c.valleys).chain(&c.slopes).copied().collect();
        all.sort_unstable();
        prop_assert_eq!(all, (1..=k + 1).collect::<Vec<_>>());
        prop_assert!(c.ladder.is_disjoint(&c.peaks));
        prop_assert_eq!(c.degree == 0, sigma.is_identity());
        prop_assert_eq!(c.degree, k + 1 - c.ladder.len());
    }

    #[test]
    fn matrix_text_round_trip(sigma in permutation()) {
        let m = build_m(&sigma);
        prop_assert_eq!(IntMatrix::from_text(&m.to_text()).unwrap(), m);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn contour_identity_for_random_frequencies(
        re in prop::collection::vec(0.0f64..6.0, 4),
        im in prop::collection::vec(-0.1f64..0.0, 4),
        k in 0usize..=3,
        t in 0.5f64..6.0,
    ) {
        let omegas: Vec<Complex64> = re.iter().zip(&im).take(k + 1).map(|(&a, &b)| Complex64::new(a, b)).collect();
        let (lhs, rhs) = contour_identity_check(&omegas, t, 1.0 / t, &ContourOptions::default()).unwrap();
        let scale = lhs.norm().max(1e-3);
        prop_assert!((lhs - rhs).norm() <= 1e-4 * scale, "{lhs} vs {rhs}");
    }
}

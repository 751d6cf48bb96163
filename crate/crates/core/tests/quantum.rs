use num_complex::Complex64;
use proptest::prelude::*;
use qlz_core::quantum::io::{read_wave, write_wave};
use qlz_core::quantum::{
    duhamel_terms, evolve, sample_disorder, wigner, DisorderKind, DuhamelOptions, Evolver, FftPlan,
    TorusLattice, WaveFunction,
};

fn packet(lat: TorusLattice) -> WaveFunction {
    let d = lat.dim();
    let center = vec![0.0; d];
    let mut p0 = vec![0.0; d];
    p0[0] = 0.2;
    WaveFunction::gaussian_packet(lat, &center, 1.5, &p0).unwrap()
}

// H = Σ_axes (1 − shift average) + λV applied directly in position space.
fn apply_h(lat: TorusLattice, v: &[f64], lambda: f64, psi: &[Complex64]) -> Vec<Complex64> {
    let d = lat.dim();
    let l = lat.side();
    let mut coords = vec![0usize; d];
    let mut out = vec![Complex64::default(); psi.len()];
    for (i, o) in out.iter_mut().enumerate() {
        lat.coords(i, &mut coords);
        let mut acc = psi[i] * (d as f64 + lambda * v[i]);
        for a in 0..d {
            let mut c = coords.clone();
            c[a] = (coords[a] + 1) % l;
            acc -= 0.5 * psi[lat.index(&c)];
            c[a] = (coords[a] + l - 1) % l;
            acc -= 0.5 * psi[lat.index(&c)];
        }
        *o = acc;
    }
    out
}

// e^{−itH}ψ by a Taylor series in many short steps.
fn taylor_evolve(lat: TorusLattice, v: &[f64], lambda: f64, psi: &[Complex64], t: f64) -> Vec<Complex64> {
    let steps = 50;
    let h = t / steps as f64;
    let mut cur = psi.to_vec();
    for _ in 0..steps {
        let mut term = cur.clone();
        let mut sum = cur.clone();
        for n in 1..30 {
            let hp = apply_h(lat, v, lambda, &term);
            let c = Complex64::new(0.0, -h / n as f64);
            term = hp.into_iter().map(|z| z * c).collect();
            sum.iter_mut().zip(&term).for_each(|(s, t)| *s += t);
        }
        cur = sum;
    }
    cur
}

#[test]
fn split_step_matches_dense_propagator() {
    let lat = TorusLattice::new(8, 2).unwrap();
    let dis = sample_disorder(&lat, DisorderKind::Gaussian, 4);
    let lambda = 0.3;
    let psi0 = packet(lat);
    let exact = taylor_evolve(lat, &dis.values, lambda, psi0.amplitudes(), 1.0);
    let got = evolve(&psi0, Some(&dis), lambda, 1.0, 1e-3).unwrap();
    let err: f64 = got.amplitudes().iter().zip(&exact).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt();
    assert!(err < 1e-5, "err = {err:e}");
}

#[test]
fn duhamel_remainder_is_third_order() {
    let lat = TorusLattice::new(8, 3).unwrap();
    let dis = sample_disorder(&lat, DisorderKind::Rademacher, 9);
    let psi0 = packet(lat);
    let remainder = |lambda: f64| {
        let exact = evolve(&psi0, Some(&dis), lambda, 1.0, 1e-3).unwrap();
        let terms = duhamel_terms(2, 1.0, &dis, lambda, &psi0, &DuhamelOptions::default()).unwrap();
        let mut sum = WaveFunction::zeros(lat);
        for t in &terms {
            sum.add_scaled(Complex64::new(1.0, 0.0), t);
        }
        exact.distance(&sum)
    };
    let ratio = remainder(0.1) / remainder(0.05);
    assert!((6.0..10.0).contains(&ratio), "ratio = {ratio}");
}

#[test]
fn wigner_marginals() {
    let lat = TorusLattice::new(8, 2).unwrap();
    let dis = sample_disorder(&lat, DisorderKind::Gaussian, 1);
    let psi = evolve(&packet(lat), Some(&dis), 0.5, 2.0, 0.01).unwrap();
    let w = wigner(&psi).unwrap();
    assert!((w.mass() - psi.norm_sqr()).abs() < 1e-10);
    let plan = FftPlan::new(lat);
    let hat = psi.momentum(&plan);
    for (m, z) in w.momentum_marginal().iter().zip(&hat) {
        assert!((m - z.norm_sqr()).abs() < 1e-9);
    }
}

#[test]
fn wave_file_round_trip() {
    let psi = packet(TorusLattice::new(8, 3).unwrap());
    let mut buf = Vec::new();
    write_wave(&mut buf, &psi).unwrap();
    let back = read_wave(&mut buf.as_slice()).unwrap();
    assert_eq!(back, psi);
}

#[test]
fn odd_side_is_rejected() {
    assert!(TorusLattice::new(9, 3).is_err());
    assert!(TorusLattice::new(6, 3).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn evolution_is_unitary(seed in 0u64..1000, lambda in 0.0f64..1.0, t in 0.0f64..3.0) {
        let lat = TorusLattice::new(8, 3).unwrap();
        let dis = sample_disorder(&lat, DisorderKind::Gaussian, seed);
        let psi = evolve(&packet(lat), Some(&dis), lambda, t, 0.01).unwrap();
        prop_assert!((psi.norm_sqr() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn free_evolution_conserves_momentum_density(t in 0.0f64..20.0) {
        let lat = TorusLattice::new(8, 3).unwrap();
        let plan = FftPlan::new(lat);
        let psi0 = packet(lat);
        let psi = evolve(&psi0, None, 0.0, t, 0.05).unwrap();
        let before = psi0.momentum_density(&plan);
        let after = psi.momentum_density(&plan);
        let residual = before.iter().zip(&after).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        prop_assert!(residual < 1e-12);
    }

    #[test]
    fn propagation_composes(seed in 0u64..1000, a in 1usize..40, b in 1usize..40) {
        let lat = TorusLattice::new(8, 2).unwrap();
        let dis = sample_disorder(&lat, DisorderKind::Rademacher, seed);
        let ev = Evolver::new(lat, Some(&dis), 0.4, 0.05).unwrap();
        let psi0 = packet(lat);
        let (ta, tb) = (a as f64 * 0.05, b as f64 * 0.05);
        let two = ev.propagate(&ev.propagate(&psi0, ta).unwrap(), tb).unwrap();
        let one = ev.propagate(&psi0, ta + tb).unwrap();
        prop_assert!(two.distance(&one) < 1e-10);
    }
}

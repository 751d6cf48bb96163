use approx::assert_relative_eq;
use proptest::prelude::*;
use qlz_core::kinetic::{
    diffusion_autocorrelation, diffusion_closed_form, energy_histogram, DiffusionMatrix,
    HeatSolution, JumpProcess, KineticError,
};
use qlz_core::rng::stream_rng;
use qlz_core::spectral::ShellSpec;
use qlz_core::stats::{ks_test, Estimate};
use qlz_core::{Dispersion64, JumpProcess64};

// In one dimension the shell is two points with sin²(2πv) = e(2 − e) and
// Φ(e) = 1/(π√(e(2 − e))), so D = (e(2 − e))^{3/2} / 2.
fn d1_diffusion(e: f64) -> f64 {
    (e * (2.0 - e)).powf(1.5) / 2.0
}

#[test]
fn closed_form_diffusion_in_one_dimension() {
    let disp = Dispersion64::new(1);
    let e = 0.6;
    let d = diffusion_closed_form(&disp, &ShellSpec::new(e, 0.002, 20_000_000), 17).unwrap();
    let est = d.get(0, 0);
    assert!(est.consistent_with(d1_diffusion(e), 4.0), "{est:?} vs {}", d1_diffusion(e));
}

#[test]
fn autocorrelation_diffusion_in_one_dimension() {
    let disp = Dispersion64::new(1);
    let e = 1.4;
    let shell = ShellSpec::new(e, 0.002, 20_000_000);
    let process: JumpProcess64 = JumpProcess::new(disp, shell, 5).unwrap();
    let t_cut = 12.0 * process.mean_wait();
    let d = diffusion_autocorrelation(&process, t_cut, 40_000, 6).unwrap();
    // rate error from the process enters linearly
    let exact = d1_diffusion(e);
    assert!((d.get(0, 0).value - exact).abs() < 4.0 * d.get(0, 0).stderr + 0.03 * exact);
}

#[test]
fn short_cutoff_is_rejected() {
    let disp = Dispersion64::new(3);
    let process = JumpProcess::new(disp, ShellSpec::new(3.0, 0.06, 200_000), 1).unwrap();
    let err = diffusion_autocorrelation(&process, process.mean_wait(), 10, 1).unwrap_err();
    assert!(matches!(err, KineticError::CutoffTooShort { .. }));
}

#[test]
fn waiting_times_are_exponential() {
    let disp = Dispersion64::new(3);
    let process = JumpProcess::with_rate(disp, ShellSpec::new(2.0, 0.06, 1_000_000), 1.7).unwrap();
    let path = process.path(3000.0, &mut stream_rng(8, 0), None).unwrap();
    let waits = path.waiting_times();
    let ks = ks_test(&waits, |x| 1.0 - (-1.7 * x).exp());
    assert!(ks.passes(0.01), "{ks:?}");
}

#[test]
fn collisionless_motion_is_ballistic() {
    let disp = Dispersion64::new(3);
    let process = JumpProcess::with_rate(disp, ShellSpec::new(2.0, 0.06, 1_000_000), 0.0).unwrap();
    let v0 = vec![0.1, 0.2, -0.05];
    let path = process.path(5.0, &mut stream_rng(1, 0), Some(v0.clone())).unwrap();
    assert_eq!(path.jumps(), 0);
    let x = path.position(&disp, 4.0);
    for (xi, vi) in x.iter().zip(&v0) {
        assert_relative_eq!(*xi, 4.0 * (std::f64::consts::TAU * vi).sin(), max_relative = 1e-12);
    }
}

#[test]
fn heat_density_in_one_dimension() {
    let d = 0.35;
    let t = 2.0;
    let heat = HeatSolution::<f64>::from_values(1, &[d], t).unwrap();
    for x in [-2.0, 0.0, 0.7, 3.1] {
        let exact = (-(x * x) / (4.0 * d * t)).exp() / (4.0 * std::f64::consts::PI * d * t).sqrt();
        assert_relative_eq!(heat.density(&[x]).unwrap(), exact, max_relative = 1e-12);
    }
}

#[test]
fn heat_fourier_transform_of_density() {
    let m = DiffusionMatrix {
        energy: 3.0,
        dim: 2,
        entries: [0.4, 0.1, 0.1, 0.3].into_iter().map(Estimate::exact).collect(),
    };
    let heat = HeatSolution::new(&m, 1.5).unwrap();
    let xi = [0.11, -0.07];
    let h = 0.05;
    let mut re = 0.0;
    let mut mass = 0.0;
    for i in -200..=200 {
        for j in -200..=200 {
            let x = [i as f64 * h, j as f64 * h];
            let rho = heat.density(&x).unwrap();
            mass += rho * h * h;
            re += rho * (std::f64::consts::TAU * (xi[0] * x[0] + xi[1] * x[1])).cos() * h * h;
        }
    }
    assert_relative_eq!(mass, 1.0, max_relative = 1e-8);
    assert_relative_eq!(re, heat.fourier(&xi), max_relative = 1e-8);
}

#[test]
fn indefinite_matrix_is_rejected() {
    let err = HeatSolution::<f64>::from_values(2, &[1.0, 2.0, 2.0, 1.0], 1.0).unwrap_err();
    assert!(matches!(err, KineticError::NotPsd));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn paths_stay_on_the_shell(seed in 0u64..10_000, e in 0.3f64..5.7) {
        let disp = Dispersion64::new(3);
        let shell = ShellSpec::new(e, 0.06, 1_000_000);
        let process = JumpProcess::with_rate(disp, shell, 2.0).unwrap();
        let path = process.path(10.0, &mut stream_rng(seed, 0), None).unwrap();
        prop_assert_eq!(path.momenta.len(), path.jumps() + 1);
        for v in &path.momenta {
            prop_assert!(shell.contains(disp.energy(v)));
        }
        prop_assert!(path.times.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn energy_histogram_keeps_total_weight(ws in prop::collection::vec((0.0f64..6.0, 0.0f64..1.0), 1..200), bins in 1usize..40) {
        let (es, w): (Vec<f64>, Vec<f64>) = ws.into_iter().unzip();
        let h = energy_histogram(&es, &w, 6.0, bins);
        prop_assert_eq!(h.len(), bins);
        prop_assert!((h.iter().sum::<f64>() - w.iter().sum::<f64>()).abs() < 1e-9);
    }
}

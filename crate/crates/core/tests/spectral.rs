use approx::assert_relative_eq;
use num_complex::Complex;
use proptest::prelude::*;
use qlz_core::spectral::{
    phi, shell_average, theta, two_denominator_integral, wrap, RenormalizedDispersion,
    ShellSpec, ThetaGrid,
};
use qlz_core::{Dispersion32, Dispersion64};

// Θ_ε on the 2-torus by a plain midpoint double sum.
fn theta_2d_brute(alpha: f64, eps: f64, n: usize) -> Complex<f64> {
    let h = 1.0 / n as f64;
    let axis: Vec<f64> = (0..n).map(|i| 1.0 - (std::f64::consts::TAU * (i as f64 + 0.5) * h).cos()).collect();
    let mut acc = Complex::new(0.0, 0.0);
    for &a in &axis {
        for &b in &axis {
            acc += Complex::new(1.0, 0.0) / Complex::new(alpha - a - b, eps);
        }
    }
    acc * h * h
}

#[test]
fn theta_matches_brute_force_in_two_dimensions() {
    let eps = 0.1;
    let grid = ThetaGrid::new(2, eps, None).unwrap();
    for alpha in [-0.5, 0.8, 2.0, 3.3, 4.6] {
        let expected = theta_2d_brute(alpha, eps, 3000);
        let got = grid.eval(alpha);
        assert_relative_eq!(got.re, expected.re, epsilon = 1e-6, max_relative = 1e-6);
        assert_relative_eq!(got.im, expected.im, epsilon = 1e-6, max_relative = 1e-6);
    }
}

#[test]
fn theta_outside_band_is_real_in_one_dimension() {
    // ∫ dq / (a + cos 2πq) = sign(a)/√(a² − 1) for |a| > 1
    let v = theta(-1.0, 1e-9, 1, None).unwrap().value;
    assert_relative_eq!(v.re, -1.0 / 3f64.sqrt(), max_relative = 1e-6);
    assert!(v.im.abs() < 1e-6);
}

#[test]
fn theta_rejects_oversized_grids() {
    assert!(ThetaGrid::new(3, 1e-6, None).is_err());
}

#[test]
fn one_dimensional_density_of_states() {
    let disp = Dispersion64::new(1);
    let e: f64 = 0.7;
    let exact = 1.0 / (std::f64::consts::PI * (e * (2.0 - e)).sqrt());
    let est = phi(&disp, &ShellSpec::new(e, 0.01, 4_000_000), 11);
    assert!(est.consistent_with(exact, 4.0), "{est:?} vs {exact}");

    let im = ThetaGrid::new(1, 1e-3, None).unwrap().eval(e).im;
    assert_relative_eq!(im, -std::f64::consts::PI * exact, max_relative = 1e-3);
}

#[test]
fn shell_average_of_energy_is_the_shell_energy() {
    let disp = Dispersion64::new(3);
    let shell = ShellSpec::new(2.4, 0.02, 2_000_000);
    let est = shell_average(&disp, |p| disp.energy(p), &shell, 3).unwrap();
    assert!((est.value - 2.4).abs() < 0.01);
}

#[test]
fn empty_shell_is_an_error() {
    let disp = Dispersion64::new(3);
    let shell = ShellSpec::new(7.0, 0.02, 1000);
    assert!(shell_average(&disp, |_| 1.0, &shell, 3).is_err());
}

#[test]
fn single_precision_dispersion_tracks_double() {
    let d32 = Dispersion32::new(3);
    let d64 = Dispersion64::new(3);
    let p = [0.13f64, -0.41, 0.27];
    let p32 = p.map(|x| x as f32);
    assert_relative_eq!(d32.energy(&p32) as f64, d64.energy(&p), max_relative = 1e-5);
}

#[test]
fn two_denominator_integral_decreases_with_eta() {
    let omega = RenormalizedDispersion::bare(Dispersion64::new(3));
    let w = [0.1, 0.0, 0.0];
    let mut last = f64::INFINITY;
    for eta in [0.05, 0.1, 0.2, 0.4] {
        let v = two_denominator_integral(&omega, 3.0, 3.0, &w, eta, 128).unwrap();
        assert!(v < last);
        last = v;
    }
}

proptest! {
    #[test]
    fn energy_lies_in_band_and_is_even(p in prop::array::uniform3(-2.0f64..2.0)) {
        let disp = Dispersion64::new(3);
        let e = disp.energy(&p);
        prop_assert!((0.0..=6.0).contains(&e));
        prop_assert!((disp.energy(&p.map(|x| -x)) - e).abs() < 1e-12);
        prop_assert!((disp.energy(&p.map(|x| x + 1.0)) - e).abs() < 1e-10);
        prop_assert!((disp.energy(&p.map(|x| x + 0.5)) - (6.0 - e)).abs() < 1e-10);
    }

    #[test]
    fn gradient_matches_finite_differences(p in prop::array::uniform3(-0.5f64..0.5)) {
        let disp = Dispersion64::new(3);
        let mut g = [0.0; 3];
        disp.gradient(&p, &mut g);
        let h = 1e-6;
        for i in 0..3 {
            let mut a = p;
            let mut b = p;
            a[i] += h;
            b[i] -= h;
            let fd = (disp.energy(&a) - disp.energy(&b)) / (2.0 * h);
            prop_assert!((fd - g[i]).abs() < 1e-6);
        }
    }

    #[test]
    fn wrap_lands_in_fundamental_cell(x in -50.0f64..50.0) {
        let y = wrap(x);
        prop_assert!((-0.5..0.5).contains(&y));
        prop_assert!(((x - y) - (x - y).round()).abs() < 1e-9);
    }

    #[test]
    fn self_energy_has_nonpositive_imaginary_part(alpha in -1.0f64..7.0, eps in 0.05f64..0.5) {
        let grid = ThetaGrid::new(3, eps, None).unwrap();
        prop_assert!(grid.eval(alpha).im <= 0.0);
    }
}

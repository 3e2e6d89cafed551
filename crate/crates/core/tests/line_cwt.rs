//! Affine transform on the line and the dilation action on the half-line.

use circlet_core::circle_cwt::ScaleGrid;
use circlet_core::line_cwt::{
    affine_action, line_admissibility, line_analyze, line_synthesize, mexican_hat, mexican_hat_fn, rplus_action,
    LineWavelet,
};
use circlet_core::{Error, LineGrid, LineSignal, LogGrid, RPlusFunction};
use num_complex::Complex64;
use proptest::prelude::*;

fn chirp(grid: LineGrid) -> LineSignal {
    LineSignal::from_real_fn(grid, |x| (-x * x / 8.0).exp() * (6.0 * x + 0.2 * x * x).cos())
}

#[test]
fn mexican_hat_constant_matches_closed_form() {
    // ∫ k⁴ e^{-k²} / |k| dk = 1.
    let from_samples = line_admissibility(&LineSignal::from_real_fn(LineGrid::symmetric(40.0, 2048).unwrap(), mexican_hat_fn))
        .unwrap();
    assert!((from_samples - 1.0).abs() < 1e-2, "{from_samples}");
}

#[test]
fn gaussian_is_divergent() {
    let g = LineSignal::from_real_fn(LineGrid::symmetric(30.0, 1024).unwrap(), |x| (-x * x / 2.0).exp());
    assert!(matches!(line_admissibility(&g), Err(Error::Divergent { .. })));
}

#[test]
fn fourier_analysis_matches_direct_quadrature() {
    let grid = LineGrid::symmetric(20.0, 256).unwrap();
    let f = LineSignal::from_real_fn(grid, |x| (-(x - 0.5) * (x - 0.5)).exp() * (1.0 + 0.3 * x));
    let wavelet = mexican_hat(grid);
    let scales = ScaleGrid::new(0.5, 2.0, 3).unwrap();
    let s = line_analyze(&f, &wavelet, &scales).unwrap();
    let h = grid.spacing();
    for j in 0..3 {
        for &l in &[100usize, 128, 141] {
            let moved = affine_action(wavelet.signal(), scales.node(j), grid.node(l)).unwrap();
            let direct: Complex64 = moved.values().iter().zip(f.values()).map(|(g, v)| g.conj() * v).sum::<Complex64>() * h;
            assert!((s.get(j, l) - direct).norm() < 1e-8, "({j}, {l})");
        }
    }
}

#[test]
fn sampled_and_closed_spectra_agree() {
    let grid = LineGrid::symmetric(30.0, 1024).unwrap();
    let f = chirp(grid);
    let scales = ScaleGrid::new(0.5, 5.0, 20).unwrap();
    let closed = line_analyze(&f, &mexican_hat(grid), &scales).unwrap();
    let sampled = line_analyze(&f, &LineWavelet::new(LineSignal::from_real_fn(grid, mexican_hat_fn).sampled()), &scales).unwrap();
    let worst = closed.data().iter().zip(sampled.data()).fold(0.0_f64, |m, (x, y)| m.max((x - y).norm()));
    // Off-grid values of the samples come from cubic interpolation, O(h⁴).
    assert!(worst < 1e-5, "{worst}");
}

#[test]
fn chirp_round_trip() {
    let grid = LineGrid::symmetric(40.0, 2048).unwrap();
    let f = chirp(grid);
    let wavelet = mexican_hat(grid);
    let scales = ScaleGrid::new(1e-3, 1e2, 300).unwrap();
    let s = line_analyze(&f, &wavelet, &scales).unwrap();
    let back = line_synthesize(&s, &wavelet, 1.0).unwrap();
    let err = back.relative_error(&f).unwrap();
    assert!(err < 1e-2, "{err}");
}

#[test]
fn zero_signal_round_trips_to_zero() {
    let grid = LineGrid::symmetric(20.0, 256).unwrap();
    let zero = LineSignal::from_real_fn(grid, |_| 0.0);
    let wavelet = mexican_hat(grid);
    let scales = ScaleGrid::new(0.1, 10.0, 30).unwrap();
    let s = line_analyze(&zero, &wavelet, &scales).unwrap();
    assert!(s.data().iter().all(|v| v.norm() == 0.0));
    let back = line_synthesize(&s, &wavelet, 1.0).unwrap();
    assert!(back.values().iter().all(|v| v.norm() == 0.0));
}

#[test]
fn translation_shifts_scalogram() {
    let grid = LineGrid::symmetric(20.0, 512).unwrap();
    let shift = 24;
    let d = shift as f64 * grid.spacing();
    let f = LineSignal::from_real_fn(grid, |x| (-x * x).exp() * x.sin());
    let g = LineSignal::from_real_fn(grid, move |x| (-(x - d) * (x - d)).exp() * (x - d).sin());
    let wavelet = mexican_hat(grid);
    let scales = ScaleGrid::new(0.3, 3.0, 8).unwrap();
    let sf = line_analyze(&f, &wavelet, &scales).unwrap();
    let sg = line_analyze(&g, &wavelet, &scales).unwrap();
    for j in 0..8 {
        for l in 0..grid.len() - shift {
            assert!((sg.get(j, l + shift) - sf.get(j, l)).norm() < 1e-10);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn affine_action_is_isometric(la in -0.5..0.5f64, b in -5.0..5.0f64) {
        let grid = LineGrid::symmetric(40.0, 4096).unwrap();
        let g = LineSignal::from_real_fn(grid, |x| (-x * x).exp() * (1.0 + x));
        let moved = affine_action(&g, 10f64.powf(la), b).unwrap();
        prop_assert!((moved.norm() / g.norm() - 1.0).abs() < 1e-8);
    }

    #[test]
    fn rplus_action_is_unitary(la in -0.5..0.5f64, b in -3.0..3.0f64) {
        let grid = LogGrid::new(1e-6, 1e4, 4000).unwrap();
        let phi = RPlusFunction::from_real_fn(grid, |r| r * (-r).exp());
        let moved = rplus_action(&phi, 10f64.powf(la), b).unwrap();
        prop_assert!((moved.norm() / phi.norm() - 1.0).abs() < 1e-8);
    }

    #[test]
    fn translation_part_is_a_phase(b in -3.0..3.0f64) {
        let grid = LogGrid::new(1e-3, 1e2, 300).unwrap();
        let phi = RPlusFunction::from_real_fn(grid, |r| r * (-r).exp());
        let moved = rplus_action(&phi, 1.0, b).unwrap();
        for (x, y) in moved.values().iter().zip(phi.values()) {
            prop_assert!((x.norm() - y.norm()).abs() < 1e-15);
        }
    }
}

#[test]
fn identity_elements() {
    let grid = LineGrid::symmetric(10.0, 128).unwrap();
    let g = LineSignal::from_real_fn(grid, mexican_hat_fn);
    assert_eq!(affine_action(&g, 1.0, 0.0).unwrap().values(), g.values());
    let moved = affine_action(&g, 4.0, 0.0).unwrap();
    let at_zero = moved.value_fn()(0.0);
    assert!((at_zero.re - 0.5 * mexican_hat_fn(0.0)).abs() < 1e-15);

    let rg = LogGrid::new(1e-2, 10.0, 50).unwrap();
    let phi = RPlusFunction::from_real_fn(rg, |r| r.sqrt());
    assert_eq!(rplus_action(&phi, 1.0, 0.0).unwrap().values(), phi.values());
}

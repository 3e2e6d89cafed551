//! Circle wavelet transform against direct quadrature oracles.

use std::f64::consts::PI;

use circlet_core::circle_cwt::{
    analyze, fourier_coeffs, frame_bounds, lambda_sequence, lifted_gaussian, make_dog, synthesize, weak_admissibility,
    ScaleGrid,
};
use circlet_core::circle_rep::rep_action;
use circlet_core::{CircleGrid, CircleSignal};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn grid(n: usize) -> CircleGrid {
    CircleGrid::new(n).unwrap()
}

fn band_limited(n: usize, seed: u64, band: i32) -> CircleSignal {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let coeffs: Vec<(f64, Complex64)> = (-band..=band)
        .map(|m| (m as f64, Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))))
        .collect();
    CircleSignal::from_fn(grid(n), move |t| {
        coeffs.iter().map(|(m, c)| c * Complex64::from_polar(1.0, 2.0 * m * t)).sum()
    })
}

/// `∫ e^{-x²}/√(1+x²) dx` by composite Simpson on `[-12, 12]`.
fn gaussian_line_integral() -> f64 {
    let n = 20_000;
    let (lo, hi) = (-12.0, 12.0);
    let h = (hi - lo) / n as f64;
    let f = |x: f64| (-x * x).exp() / (1.0 + x * x).sqrt();
    let mut s = f(lo) + f(hi);
    for j in 1..n {
        let w = if j % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(lo + j as f64 * h);
    }
    s * h / 3.0
}

#[test]
fn cosine_coefficients() {
    let psi = CircleSignal::from_real_fn(grid(128), |t| (2.0 * t).cos());
    let c = fourier_coeffs(&psi, 16).unwrap();
    for (n, v) in c.iter() {
        let expected = if n.abs() == 1 { PI.sqrt() / 2.0 } else { 0.0 };
        assert!((v - expected).norm() < 1e-13, "n = {n}: {v}");
    }
}

#[test]
fn parseval_on_random_signals() {
    for seed in 0..5 {
        let psi = band_limited(256, seed, 12);
        let c = fourier_coeffs(&psi, 64).unwrap();
        assert!((c.energy() / psi.norm_sqr() - 1.0).abs() < 1e-10);
    }
}

#[test]
fn weak_integral_of_gaussian_and_dog() {
    let g = grid(2048);
    let reference = gaussian_line_integral();
    let gauss = weak_admissibility(&lifted_gaussian(g)).unwrap();
    assert!((gauss.re - reference).abs() < 1e-8, "{gauss} vs {reference}");
    let loose = weak_admissibility(&make_dog(g, 2.0, false).unwrap()).unwrap();
    assert!((loose.re - (1.0 - 2f64.sqrt()) * reference).abs() < 1e-8);
    let balanced = weak_admissibility(&make_dog(g, 2.0, true).unwrap()).unwrap();
    assert!(balanced.norm() < 1e-10);
}

#[test]
fn analyze_matches_direct_inner_products() {
    let g = grid(512);
    let gamma = make_dog(g, 2.0, true).unwrap();
    let psi = band_limited(512, 3, 8);
    let scales = ScaleGrid::new(0.5, 2.0, 3).unwrap();
    let n_angles = 33;
    let s = analyze(&psi, &gamma, &scales, n_angles).unwrap();
    let angles = grid(n_angles);
    for j in 0..3 {
        for &i in &[0usize, 16, 29] {
            let moved = rep_action(&gamma, scales.node(j), angles.node(i));
            let direct = moved.inner(&psi).unwrap();
            let got = s.get(j, i);
            assert!((got - direct).norm() < 1e-8 * psi.norm(), "({j}, {i}): {got} vs {direct}");
        }
    }
}

#[test]
fn lambda_is_even_for_even_real_wavelets() {
    let gamma = make_dog(grid(256), 3.0, true).unwrap();
    let report = lambda_sequence(&gamma, &ScaleGrid::new(1e-1, 1e1, 60).unwrap(), 32).unwrap();
    for n in 1..=32 {
        let (p, m) = (report.lambda_at(n).unwrap(), report.lambda_at(-n).unwrap());
        assert!((p - m).abs() <= 1e-12 * p.max(1e-300));
    }
    assert!(report.lambda.iter().all(|&v| v >= 0.0));
}

#[test]
fn constant_is_rejected() {
    let report = lambda_sequence(&CircleSignal::from_real_fn(grid(256), |_| 1.0), &ScaleGrid::default_range(), 16)
        .unwrap();
    assert!(!report.admissible);
    assert!(!report.weak_decay_ok);
}

/// `∫∫|⟨γ_{ϑ,a}|ψ⟩|² dϑ da/a²` with explicit inner products.
///
/// Each scale is sampled on a fine grid with a power-of-two size, and the
/// rotations are index shifts by `M/K` nodes, so the inner products need no
/// interpolation. `K` angles integrate the band-limited `ϑ`-dependence exactly.
fn brute_force_energy(psi: &dyn Fn(f64) -> Complex64, scales: &ScaleGrid) -> f64 {
    const K: usize = 64;
    let mut total = 0.0;
    for j in 0..scales.len() {
        let a = scales.node(j);
        let m = (256.0 * a.max(1.0 / a)).ceil().max(1024.0) as usize;
        let m = m.next_power_of_two();
        let g = grid(m);
        let wavelet = rep_action(&make_dog(g, 2.0, true).unwrap(), a, 0.0);
        let w = wavelet.values();
        let p: Vec<Complex64> = g.nodes().map(psi).collect();
        let h = g.spacing();
        let mut ring = 0.0;
        for k in 0..K {
            let shift = k * m / K;
            let mut acc = Complex64::new(0.0, 0.0);
            for (i, pv) in p.iter().enumerate() {
                acc += w[(i + m - shift) % m].conj() * pv;
            }
            ring += (acc * h).norm_sqr();
        }
        total += scales.haar_weight(j) * ring * PI / K as f64;
    }
    total
}

#[test]
fn frame_operator_is_diagonal() {
    let scales = ScaleGrid::new(1e-2, 1e2, 121).unwrap();
    let gamma = make_dog(grid(1024), 2.0, true).unwrap();
    let report = lambda_sequence(&gamma, &scales, 8).unwrap();
    let psi = band_limited(1024, 5, 6);
    let coeffs = fourier_coeffs(&psi, 8).unwrap();
    let mode_sum: f64 = coeffs
        .iter()
        .map(|(n, c)| report.lambda_at(n).unwrap() * c.norm_sqr())
        .sum();
    let eval = psi.value_fn();
    let brute = brute_force_energy(&*eval, &scales);
    let rel = (brute - PI * mode_sum).abs() / brute;
    assert!(rel < 1e-2, "brute {brute} vs π·ΣΛ|ψ̂|² {}", PI * mode_sum);
}

#[test]
fn frame_bounds_are_ordered() {
    let gamma = make_dog(grid(512), 2.0, true).unwrap();
    let report = lambda_sequence(&gamma, &ScaleGrid::new(1e-2, 1e2, 100).unwrap(), 16).unwrap();
    let b = frame_bounds(&report);
    assert!(b.c1 > 0.0 && b.c1 <= b.c2);
}

#[test]
fn round_trip_with_matching_report() {
    let gamma = make_dog(grid(256), 2.0, true).unwrap();
    let scales = ScaleGrid::new(1e-1, 1e1, 60).unwrap();
    let report = lambda_sequence(&gamma, &scales, 16).unwrap();
    let psi = CircleSignal::from_real_fn(grid(64), |t| (2.0 * t).cos() + 0.3 * (4.0 * t).sin());
    let s = analyze(&psi, &gamma, &scales, 64).unwrap();
    let back = synthesize(&s, &gamma, &report).unwrap();
    assert!(back.skipped_modes.is_empty());
    assert!(back.signal.relative_error(&psi).unwrap() < 1e-10);
}

#[test]
fn not_covariant_under_dilation() {
    let g = grid(512);
    let gamma = make_dog(g, 2.0, true).unwrap();
    let psi = rep_action(&lifted_gaussian(g), 1.0, 0.4);
    let dilated = rep_action(&psi, 2.0, 0.0);
    // Nodes 2^{-3}, 2^{-2.5}, ..., 2^3: a factor of two is two nodes.
    let scales = ScaleGrid::new(0.125, 8.0, 13).unwrap();
    let s0 = analyze(&psi, &gamma, &scales, 65).unwrap();
    let s1 = analyze(&dilated, &gamma, &scales, 65).unwrap();
    let mut num = 0.0;
    let mut den = 0.0;
    for j in 0..11 {
        for (x, y) in s1.row(j + 2).iter().zip(s0.row(j)) {
            num += (x.norm() - y.norm()).powi(2);
            den += y.norm_sqr();
        }
    }
    assert!((num / den).sqrt() > 1e-2, "dilation acted as a shift in log a");
}

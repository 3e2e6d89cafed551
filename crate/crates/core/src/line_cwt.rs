//! Affine wavelet transform on the real line and the dilation
//! representation on `ℝ⁺`.
//!
//! Fourier transforms are unitary, `f̂(k) = (2π)^{-1/2}∫ e^{-ikx} f(x) dx`.
//! With this convention `∫db∫da/a² |⟨Γ_{b,a}|f⟩|² = π·C_Γ·‖f‖²` for wavelets
//! with `|Γ̂(k)| = |Γ̂(-k)|`.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;

use crate::circle_cwt::ScaleGrid;
use crate::error::{invalid, Error, Result};
use crate::signal::{Evaluator, LineGrid, LineSignal, RPlusFunction};

/// Edge samples must sit below this fraction of the peak.
pub const LINE_DECAY_TOLERANCE: f64 = 1e-6;
/// `|Γ̂(0)|²` above this fraction of `max|Γ̂|²` makes `C_Γ` diverge.
pub const DIVERGENCE_TOLERANCE: f64 = 1e-8;

/// Angular frequency of DFT bin `m` on `grid`.
pub fn bin_frequency(grid: LineGrid, m: usize) -> f64 {
    let n = grid.len();
    let signed = if m <= n / 2 { m as f64 } else { m as f64 - n as f64 };
    2.0 * PI * signed / (n as f64 * grid.spacing())
}

fn fft(values: &[Complex64]) -> Vec<Complex64> {
    let mut buf = values.to_vec();
    FftPlanner::new().plan_fft_forward(buf.len()).process(&mut buf);
    buf
}

fn ifft(values: &[Complex64]) -> Vec<Complex64> {
    let mut buf = values.to_vec();
    FftPlanner::new().plan_fft_inverse(buf.len()).process(&mut buf);
    buf
}

/// An analyzing wavelet on the line, optionally with a closed-form spectrum.
#[derive(Clone)]
pub struct LineWavelet {
    signal: LineSignal,
    spectrum: Option<Evaluator>,
}

impl std::fmt::Debug for LineWavelet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("LineWavelet")
            .field("signal", &self.signal)
            .field("closed_spectrum", &self.spectrum.is_some())
            .finish()
    }
}

impl LineWavelet {
    /// Spectrum taken from the samples (or the closed form) by FFT.
    pub fn new(signal: LineSignal) -> Self {
        Self {
            signal,
            spectrum: None,
        }
    }

    /// `spectrum(k)` must be the unitary Fourier transform of the signal.
    pub fn with_spectrum(signal: LineSignal, spectrum: Evaluator) -> Self {
        Self {
            signal,
            spectrum: Some(spectrum),
        }
    }

    pub fn signal(&self) -> &LineSignal {
        &self.signal
    }

    pub fn has_closed_spectrum(&self) -> bool {
        self.spectrum.is_some()
    }

    /// `a^{1/2} Γ̂(a k_m)` for every bin of `grid`.
    pub fn dilated_spectrum(&self, grid: LineGrid, a: f64) -> Vec<Complex64> {
        let n = grid.len();
        match &self.spectrum {
            Some(spec) => (0..n).map(|m| a.sqrt() * spec(a * bin_frequency(grid, m))).collect(),
            None => {
                // Γ_a sampled at periodic offsets around x = 0.
                let h = grid.spacing();
                let eval = self.signal.value_fn();
                let scale = a.powf(-0.5);
                let wrapped: Vec<Complex64> = (0..n)
                    .map(|j| {
                        let y = if j < n.div_ceil(2) { j as f64 } else { j as f64 - n as f64 } * h;
                        scale * eval(y / a)
                    })
                    .collect();
                let norm = h / (2.0 * PI).sqrt();
                fft(&wrapped).into_iter().map(|c| c * norm).collect()
            }
        }
    }
}

/// `(1 - x²) e^{-x²/2}`.
pub fn mexican_hat_fn(x: f64) -> f64 {
    (1.0 - x * x) * (-0.5 * x * x).exp()
}

/// Mexican hat with its spectrum `k² e^{-k²/2}`; `C_Γ = 1`.
pub fn mexican_hat(grid: LineGrid) -> LineWavelet {
    let spectrum: Evaluator = Arc::new(|k: f64| Complex64::new(k * k * (-0.5 * k * k).exp(), 0.0));
    LineWavelet::with_spectrum(LineSignal::from_real_fn(grid, mexican_hat_fn), spectrum)
}

/// `Γ_{b,a}(x) = a^{-1/2} Γ((x - b)/a)` on the grid of `gamma`.
pub fn affine_action(gamma: &LineSignal, a: f64, b: f64) -> Result<LineSignal> {
    if !(a > 0.0 && a.is_finite()) {
        return Err(invalid("a", format!("scale must be positive, got {a}")));
    }
    if !b.is_finite() {
        return Err(invalid("b", "translation must be finite"));
    }
    let base = gamma.value_fn();
    let scale = a.powf(-0.5);
    let eval: Evaluator = Arc::new(move |x: f64| scale * base((x - b) / a));
    let out = LineSignal::from_evaluator(gamma.grid(), eval);
    Ok(if gamma.has_closed_form() { out } else { out.sampled() })
}

/// `C_Γ = ∫ |Γ̂(k)|²/|k| dk` as a Riemann sum over the DFT bins, `k = 0` excluded.
pub fn line_admissibility(gamma: &LineSignal) -> Result<f64> {
    let ratio = gamma.edge_ratio();
    if ratio >= LINE_DECAY_TOLERANCE {
        return Err(Error::NoDecay { ratio });
    }
    let grid = gamma.grid();
    let h = grid.spacing();
    let norm = h / (2.0 * PI).sqrt();
    let power: Vec<f64> = fft(gamma.values()).iter().map(|c| (c * norm).norm_sqr()).collect();
    let peak = power.iter().cloned().fold(0.0, f64::max);
    if peak == 0.0 {
        return Err(invalid("gamma", "zero wavelet"));
    }
    let ratio = power[0] / peak;
    if ratio > DIVERGENCE_TOLERANCE {
        return Err(Error::Divergent { ratio });
    }
    let dk = 2.0 * PI / (grid.len() as f64 * h);
    Ok(power
        .iter()
        .enumerate()
        .skip(1)
        .map(|(m, p)| p / bin_frequency(grid, m).abs())
        .sum::<f64>()
        * dk)
}

/// `W(b_l, a_j) = ⟨Γ_{b_l,a_j}|f⟩`, translations on the signal grid.
#[derive(Debug, Clone)]
pub struct LineScalogram {
    translations: LineGrid,
    scales: ScaleGrid,
    /// Row-major, one row per scale.
    data: Vec<Complex64>,
}

impl LineScalogram {
    pub fn from_parts(translations: LineGrid, scales: ScaleGrid, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != translations.len() * scales.len() {
            return Err(Error::GridMismatch(format!(
                "{} coefficients for a {}×{} scalogram",
                data.len(),
                scales.len(),
                translations.len()
            )));
        }
        Ok(Self {
            translations,
            scales,
            data,
        })
    }

    pub fn translations(&self) -> LineGrid {
        self.translations
    }

    pub fn scales(&self) -> &ScaleGrid {
        &self.scales
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn row(&self, j: usize) -> &[Complex64] {
        let w = self.translations.len();
        &self.data[j * w..(j + 1) * w]
    }

    pub fn get(&self, scale: usize, translation: usize) -> Complex64 {
        self.data[scale * self.translations.len() + translation]
    }
}

/// Fourier-domain analysis, one inverse FFT per scale.
pub fn line_analyze(f: &LineSignal, gamma: &LineWavelet, scales: &ScaleGrid) -> Result<LineScalogram> {
    let grid = f.grid();
    let n = grid.len();
    let spec = fft(f.values());
    let factor = (2.0 * PI).sqrt() / n as f64;
    let rows: Vec<Vec<Complex64>> = (0..scales.len())
        .into_par_iter()
        .map(|j| {
            let g = gamma.dilated_spectrum(grid, scales.node(j));
            let prod: Vec<Complex64> = g.iter().zip(&spec).map(|(g, s)| g.conj() * s).collect();
            ifft(&prod).into_iter().map(|c| c * factor).collect()
        })
        .collect();
    LineScalogram::from_parts(grid, *scales, rows.concat())
}

/// `f = (π C_Γ)^{-1} ∫da/a² ∫db W(b, a) Γ_{b,a}`.
pub fn line_synthesize(scalogram: &LineScalogram, gamma: &LineWavelet, c_gamma: f64) -> Result<LineSignal> {
    if !(c_gamma > 0.0 && c_gamma.is_finite()) {
        return Err(invalid("c_gamma", format!("need a positive finite constant, got {c_gamma}")));
    }
    let grid = scalogram.translations();
    let n = grid.len();
    let scales = scalogram.scales();
    let factor = (2.0 * PI).sqrt() / n as f64;
    let per_scale: Vec<Vec<Complex64>> = (0..scales.len())
        .into_par_iter()
        .map(|j| {
            let a = scales.node(j);
            let g = gamma.dilated_spectrum(grid, a);
            let w = scales.haar_weight(j);
            fft(scalogram.row(j)).iter().zip(&g).map(|(s, g)| s * g * w).collect()
        })
        .collect();
    let mut acc = vec![Complex64::new(0.0, 0.0); n];
    for row in &per_scale {
        for (a, v) in acc.iter_mut().zip(row) {
            *a += v;
        }
    }
    let norm = factor / (PI * c_gamma);
    let values = ifft(&acc).into_iter().map(|c| c * norm).collect();
    LineSignal::from_samples(grid, values)
}

/// `[U(a', b')φ](a) = e^{-iab'} φ(a'a)` on `L²(ℝ⁺, da/a)`.
pub fn rplus_action(phi: &RPlusFunction, a_prime: f64, b_prime: f64) -> Result<RPlusFunction> {
    if !(a_prime > 0.0 && a_prime.is_finite()) {
        return Err(invalid("a_prime", format!("scale must be positive, got {a_prime}")));
    }
    let base = phi.value_fn();
    let act = move |a: f64| Complex64::from_polar(1.0, -a * b_prime) * base(a_prime * a);
    if phi.evaluator().is_some() {
        Ok(RPlusFunction::from_fn(phi.grid(), act))
    } else {
        let values = phi.grid().nodes().map(act).collect();
        RPlusFunction::from_samples(phi.grid(), values)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signal::LogGrid;

    fn gauss(grid: LineGrid) -> LineSignal {
        LineSignal::from_real_fn(grid, |x| (-0.5 * x * x).exp())
    }

    #[test]
    fn affine_identity_and_peak() {
        let g = LineGrid::symmetric(20.0, 512).unwrap();
        let f = gauss(g);
        let same = affine_action(&f, 1.0, 0.0).unwrap();
        assert_eq!(same.values(), f.values());
        let d = affine_action(&f, 4.0, 0.0).unwrap();
        assert!((d.value_fn()(0.0).re - 0.5).abs() < 1e-15);
    }

    #[test]
    fn gaussian_is_divergent() {
        let g = LineGrid::symmetric(20.0, 512).unwrap();
        assert!(matches!(line_admissibility(&gauss(g)), Err(Error::Divergent { .. })));
    }

    #[test]
    fn mexican_hat_constant_is_one() {
        let g = LineGrid::symmetric(40.0, 2048).unwrap();
        let c = line_admissibility(mexican_hat(g).signal()).unwrap();
        assert!((c - 1.0).abs() < 1e-3, "{c}");
    }

    #[test]
    fn odd_wavelet_is_admissible() {
        // |k| e^{-k²} has a kink at 0, so the bin sum converges like Δk².
        let g = LineGrid::symmetric(100.0, 4096).unwrap();
        let odd = LineSignal::from_real_fn(g, |x| x * (-0.5 * x * x).exp());
        // ∫ k² e^{-k²}/|k| dk = 1
        let c = line_admissibility(&odd).unwrap();
        assert!((c - 1.0).abs() < 1e-3, "{c}");
    }

    #[test]
    fn sampled_spectrum_matches_closed_form() {
        let g = LineGrid::symmetric(40.0, 1024).unwrap();
        let hat = mexican_hat(g);
        let sampled = LineWavelet::new(hat.signal().clone());
        for &a in &[0.5, 1.0, 3.0] {
            let x = hat.dilated_spectrum(g, a);
            let y = sampled.dilated_spectrum(g, a);
            for (u, v) in x.iter().zip(&y) {
                assert!((u - v).norm() < 1e-10, "a = {a}");
            }
        }
    }

    #[test]
    fn zero_round_trips_to_zero() {
        let g = LineGrid::symmetric(20.0, 256).unwrap();
        let zero = LineSignal::from_real_fn(g, |_| 0.0);
        let hat = mexican_hat(g);
        let scales = ScaleGrid::new(0.1, 10.0, 30).unwrap();
        let w = line_analyze(&zero, &hat, &scales).unwrap();
        let back = line_synthesize(&w, &hat, 1.0).unwrap();
        assert_eq!(back.max_abs(), 0.0);
    }

    #[test]
    fn rplus_identity_and_phase() {
        let grid = LogGrid::new(1e-3, 1e3, 200).unwrap();
        let phi = RPlusFunction::from_real_fn(grid, |r| (-(r.ln()).powi(2)).exp());
        let same = rplus_action(&phi, 1.0, 0.0).unwrap();
        assert_eq!(same.values(), phi.values());
        let phased = rplus_action(&phi, 1.0, 2.5).unwrap();
        for (x, y) in phased.values().iter().zip(phi.values()) {
            assert!((x.norm() - y.norm()).abs() < 1e-15);
        }
    }
}

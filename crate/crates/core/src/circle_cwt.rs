//! Wavelet analysis on the half-circle: admissibility, scalograms, frame
//! bounds and reconstruction.
//!
//! Coefficients are orthonormal, `ψ̂^n = ⟨e^{2inθ}/√π | ψ⟩`. With that
//! normalization the ϑ-integral of `|⟨γ_{ϑ,a}|ψ⟩|²` carries a factor π, so the
//! frame operator acts on mode `n` as `π·Λ_n`.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::circle_rep::{dilate_angle, multiplier, rep_evaluator};
use crate::error::{invalid, Error, Result};
use crate::signal::{CircleGrid, CircleSignal, Evaluator, LogGrid};
use crate::spectral::{self, mode_bin};

/// Samples per unit of the narrowest feature of a dilated wavelet.
const SAMPLES_PER_WIDTH: f64 = 256.0;
/// Upper bound on the per-scale quadrature grid.
const MAX_SCALE_GRID: usize = 1 << 18;

/// Weak condition accepted when `|∫γ/cosθ| < WEAK_TOLERANCE·‖γ‖`.
pub const WEAK_TOLERANCE: f64 = 1e-8;
/// Edge samples must sit below this fraction of the peak for the weak integral.
pub const DECAY_TOLERANCE: f64 = 1e-6;
/// Integrand at either end of the scale grid, relative to its peak, above
/// which the scale integral is declared non-convergent.
pub const TAIL_TOLERANCE: f64 = 1e-3;
/// Relative spread of `Λ_n` over the top quarter of modes accepted as a plateau.
pub const PLATEAU_TOLERANCE: f64 = 0.1;
/// Modes with `Λ_m < MODE_FLOOR·max Λ` are skipped on reconstruction.
pub const MODE_FLOOR: f64 = 1e-12;

/// Fourier coefficients `ψ̂^n`, `|n| ≤ n_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierCoeffs {
    n_max: usize,
    coeffs: Vec<Complex64>,
}

impl FourierCoeffs {
    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn get(&self, n: i64) -> Complex64 {
        let idx = n + self.n_max as i64;
        if idx < 0 || idx as usize >= self.coeffs.len() {
            return Complex64::new(0.0, 0.0);
        }
        self.coeffs[idx as usize]
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        let n_max = self.n_max as i64;
        self.coeffs.iter().enumerate().map(move |(i, c)| (i as i64 - n_max, *c))
    }

    pub fn energy(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }
}

/// `ψ̂^n = (1/√π)∫ψ e^{-2inθ}dθ` by midpoint quadrature.
pub fn fourier_coeffs(psi: &CircleSignal, n_max: usize) -> Result<FourierCoeffs> {
    let n = psi.grid().len();
    if n_max > n / 4 {
        return Err(invalid("n_max", format!("{n_max} exceeds a quarter of the {n}-node grid")));
    }
    let spec = spectral::spectrum(psi.values());
    spectral::check_aliasing(&spec)?;
    Ok(truncate(&spec, n_max))
}

fn truncate(spec: &[Complex64], n_max: usize) -> FourierCoeffs {
    let n = spec.len();
    let m = n_max as i64;
    let coeffs = (-m..=m).map(|k| spec[mode_bin(k, n)]).collect();
    FourierCoeffs { n_max, coeffs }
}

/// Log-uniform grid of dilations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaleGrid {
    inner: LogGrid,
}

impl ScaleGrid {
    pub fn new(a_min: f64, a_max: f64, count: usize) -> Result<Self> {
        Ok(Self {
            inner: LogGrid::new(a_min, a_max, count)?,
        })
    }

    /// `[1e-3, 1e3]` with 400 nodes.
    pub fn default_range() -> Self {
        Self::new(1e-3, 1e3, 400).expect("valid default range")
    }

    pub fn a_min(&self) -> f64 {
        self.inner.r_min()
    }

    pub fn a_max(&self) -> f64 {
        self.inner.r_max()
    }

    pub fn len(&self) -> usize {
        self.inner.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inner.is_empty()
    }

    pub fn node(&self, j: usize) -> f64 {
        self.inner.node(j)
    }

    pub fn nodes(&self) -> impl ExactSizeIterator<Item = f64> + '_ {
        self.inner.nodes()
    }

    /// Trapezoid weight for `∫ g(a) d(ln a)`.
    pub fn log_weight(&self, j: usize) -> f64 {
        self.inner.trapezoid_weight(j)
    }

    /// Weight for `∫ g(a) da/a²` at node `j`.
    pub fn haar_weight(&self, j: usize) -> f64 {
        self.log_weight(j) / self.node(j)
    }
}

/// Quadrature grid size that resolves a wavelet dilated by `a`.
pub fn resolution_for_scale(base: usize, a: f64) -> usize {
    let stretch = a.max(1.0 / a);
    let wanted = (SAMPLES_PER_WIDTH * stretch).ceil() as usize;
    base.max(wanted.next_power_of_two()).min(MAX_SCALE_GRID.max(base))
}

/// `γ̂_a^n` for `|n| ≤ n_max`.
///
/// With a closed form the dilated wavelet is sampled on a grid fine enough
/// for its narrowest feature. Sampled wavelets fall back to the base grid,
/// using the change of variables `θ → θ_{1/a}` for `a < 1`.
pub fn dilated_coeffs(gamma: &CircleSignal, a: f64, n_max: usize) -> Result<FourierCoeffs> {
    if !(a > 0.0 && a.is_finite()) {
        return Err(invalid("a", format!("scale must be positive, got {a}")));
    }
    match gamma.evaluator() {
        Some(eval) => {
            let m = resolution_for_scale(gamma.grid().len(), a);
            let grid = CircleGrid::new(m)?;
            let dilated = rep_evaluator(eval.clone(), a, 0.0);
            let values: Vec<Complex64> = grid.nodes().map(|t| dilated(t)).collect();
            let spec = spectral::spectrum(&values);
            spectral::check_aliasing(&spec)?;
            Ok(truncate(&spec, n_max))
        }
        None if a < 1.0 => Ok(dilated_coeffs_small_scale(gamma, a, n_max)),
        None => {
            let dilated = rep_evaluator(gamma.value_fn(), a, 0.0);
            let values: Vec<Complex64> = gamma.grid().nodes().map(|t| dilated(t)).collect();
            Ok(truncate(&spectral::spectrum(&values), n_max))
        }
    }
}

/// `γ̂_a^n = (1/√π)∫ λ(a,θ)^{1/2} γ(θ) e^{-2inθ_a} dθ`.
fn dilated_coeffs_small_scale(gamma: &CircleSignal, a: f64, n_max: usize) -> FourierCoeffs {
    let grid = gamma.grid();
    let h = grid.spacing() / PI.sqrt();
    let weighted: Vec<(f64, Complex64)> = grid
        .nodes()
        .zip(gamma.values())
        .map(|(t, v)| (dilate_angle(t, a), v * multiplier(a, t).sqrt() * h))
        .collect();
    let m = n_max as i64;
    let coeffs = (-m..=m)
        .map(|k| {
            weighted
                .iter()
                .map(|(ta, w)| w * Complex64::from_polar(1.0, -2.0 * k as f64 * ta))
                .sum()
        })
        .collect();
    FourierCoeffs { n_max, coeffs }
}

/// Scale-integral truncation diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct Truncation {
    pub a_min: f64,
    pub a_max: f64,
    pub count: usize,
    /// Largest `|γ̂_a^n|²/a` over `n` at `a_min`.
    pub tail_lo: f64,
    /// Largest `|γ̂_a^n|²/a` over `n` at `a_max`.
    pub tail_hi: f64,
    /// Peak of the integrand over the whole grid.
    pub peak: f64,
}

/// Outcome of the admissibility analysis of a circle wavelet.
#[derive(Debug, Clone, PartialEq)]
pub struct AdmissibilityReport {
    pub n_max: usize,
    /// `Λ_n` for `n = -n_max..=n_max`.
    pub lambda: Vec<f64>,
    pub sup: f64,
    pub inf: f64,
    pub weak_integral: Complex64,
    /// Edge samples small enough for the weak integral to be meaningful.
    pub weak_decay_ok: bool,
    /// Integrand below [`TAIL_TOLERANCE`] at both ends of the scale grid.
    pub converged: bool,
    /// `Λ_n` flat over the top quarter of the tested modes.
    pub plateau: bool,
    pub admissible: bool,
    pub truncation: Truncation,
    pub wavelet_norm: f64,
}

impl AdmissibilityReport {
    pub fn lambda_at(&self, n: i64) -> Option<f64> {
        let idx = n + self.n_max as i64;
        if idx < 0 {
            return None;
        }
        self.lambda.get(idx as usize).copied()
    }

    pub fn modes(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        let n_max = self.n_max as i64;
        self.lambda.iter().enumerate().map(move |(i, l)| (i as i64 - n_max, *l))
    }
}

/// `∫ γ(θ)/cos θ dθ` by the midpoint rule, without the decay check.
pub fn weak_integral_unchecked(gamma: &CircleSignal) -> Complex64 {
    let h = gamma.grid().spacing();
    gamma
        .grid()
        .nodes()
        .zip(gamma.values())
        .map(|(t, v)| v / t.cos())
        .sum::<Complex64>()
        * h
}

fn edge_ratio(gamma: &CircleSignal) -> f64 {
    let peak = gamma.max_abs();
    if peak == 0.0 {
        return 0.0;
    }
    let v = gamma.values();
    v[0].norm().max(v[v.len() - 1].norm()) / peak
}

/// `∫_{-π/2}^{π/2} γ(θ)/cos θ dθ`; rejects wavelets that do not decay toward `±π/2`.
pub fn weak_admissibility(gamma: &CircleSignal) -> Result<Complex64> {
    let ratio = edge_ratio(gamma);
    if ratio >= DECAY_TOLERANCE {
        return Err(Error::NoDecay { ratio });
    }
    Ok(weak_integral_unchecked(gamma))
}

/// Per-scale dilated coefficients, computed in parallel and returned in grid order.
fn scale_coeffs(gamma: &CircleSignal, grid: &ScaleGrid, n_max: usize) -> Result<Vec<FourierCoeffs>> {
    (0..grid.len())
        .into_par_iter()
        .map(|j| dilated_coeffs(gamma, grid.node(j), n_max))
        .collect()
}

/// `Λ_n = ∫ |γ̂_a^n|² da/a²`, log-trapezoid over the scale grid, plus the verdict.
pub fn lambda_sequence(gamma: &CircleSignal, grid: &ScaleGrid, n_max: usize) -> Result<AdmissibilityReport> {
    let base = gamma.grid().len();
    if n_max > base / 4 {
        return Err(invalid("n_max", format!("{n_max} exceeds a quarter of the {base}-node grid")));
    }
    spectral::check_aliasing(&spectral::spectrum(gamma.values()))?;
    let per_scale = scale_coeffs(gamma, grid, n_max)?;

    let modes = 2 * n_max + 1;
    let mut lambda = vec![0.0; modes];
    let mut peak = 0.0_f64;
    let mut tail_lo = 0.0_f64;
    let mut tail_hi = 0.0_f64;
    let last = grid.len() - 1;
    for (j, coeffs) in per_scale.iter().enumerate() {
        let a = grid.node(j);
        let w = grid.log_weight(j);
        for (slot, (_, c)) in lambda.iter_mut().zip(coeffs.iter()) {
            let integrand = c.norm_sqr() / a;
            *slot += w * integrand;
            peak = peak.max(integrand);
            if j == 0 {
                tail_lo = tail_lo.max(integrand);
            }
            if j == last {
                tail_hi = tail_hi.max(integrand);
            }
        }
    }

    let sup = lambda.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let inf = lambda.iter().cloned().fold(f64::INFINITY, f64::min);
    let norm = gamma.norm();
    let ratio = edge_ratio(gamma);
    let weak_decay_ok = ratio < DECAY_TOLERANCE;
    let weak_integral = weak_integral_unchecked(gamma);
    let converged = peak > 0.0 && tail_lo.max(tail_hi) <= TAIL_TOLERANCE * peak;
    let plateau = plateau_check(&lambda, n_max);
    let weak_ok = weak_decay_ok && weak_integral.norm() < WEAK_TOLERANCE * norm;
    let admissible = weak_ok && converged && plateau && sup.is_finite() && inf > 0.0;

    Ok(AdmissibilityReport {
        n_max,
        lambda,
        sup,
        inf,
        weak_integral,
        weak_decay_ok,
        converged,
        plateau,
        admissible,
        truncation: Truncation {
            a_min: grid.a_min(),
            a_max: grid.a_max(),
            count: grid.len(),
            tail_lo,
            tail_hi,
            peak,
        },
        wavelet_norm: norm,
    })
}

/// Top-quarter spread of `Λ_n` relative to its mean.
fn plateau_check(lambda: &[f64], n_max: usize) -> bool {
    let n = n_max as i64;
    let lo = n - (n / 4).max(1);
    let top: Vec<f64> = (-n..=n)
        .filter(|k| k.abs() >= lo)
        .map(|k| lambda[(k + n) as usize])
        .collect();
    let mean = top.iter().sum::<f64>() / top.len() as f64;
    if !(mean > 0.0 && mean.is_finite()) {
        return false;
    }
    let spread = top.iter().fold(0.0_f64, |m, v| m.max((v - mean).abs()));
    spread <= PLATEAU_TOLERANCE * mean
}

/// `e^{-tan²θ}`, the stereographic lift of a Gaussian.
pub fn lifted_gaussian(grid: CircleGrid) -> CircleSignal {
    CircleSignal::from_real_fn(grid, gaussian_profile)
}

fn gaussian_profile(theta: f64) -> f64 {
    (-theta.tan().powi(2)).exp()
}

/// Difference of Gaussians `γ - c·D̃_α γ` with `γ = e^{-tan²θ}`.
///
/// `c = 1` is the literal difference; `c = α^{-1/2}` cancels the weak
/// integral exactly, since `∫ S D̃_α γ = √α ∫ S γ`.
pub fn make_dog(grid: CircleGrid, alpha_scale: f64, balanced: bool) -> Result<CircleSignal> {
    if !(alpha_scale > 0.0 && alpha_scale.is_finite()) || alpha_scale == 1.0 {
        return Err(invalid("alpha_scale", format!("need a positive scale other than 1, got {alpha_scale}")));
    }
    let c = if balanced { alpha_scale.powf(-0.5) } else { 1.0 };
    let base: Evaluator = Arc::new(|t: f64| Complex64::new(gaussian_profile(t), 0.0));
    let dilated = rep_evaluator(base.clone(), alpha_scale, 0.0);
    Ok(CircleSignal::from_fn(grid, move |t| base(t) - c * dilated(t)))
}

/// Wavelet coefficients `Ψ(ϑ_i, a_j)` on an angle grid × scale grid.
#[derive(Debug, Clone)]
pub struct Scalogram {
    scales: ScaleGrid,
    angles: CircleGrid,
    n_max: usize,
    /// Row-major, one row per scale.
    data: Vec<Complex64>,
}

impl Scalogram {
    pub fn from_parts(scales: ScaleGrid, angles: CircleGrid, n_max: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != scales.len() * angles.len() {
            return Err(Error::GridMismatch(format!(
                "{} coefficients for a {}×{} scalogram",
                data.len(),
                scales.len(),
                angles.len()
            )));
        }
        if 2 * n_max + 1 > angles.len() {
            return Err(invalid("n_max", "more modes than angles"));
        }
        Ok(Self {
            scales,
            angles,
            n_max,
            data,
        })
    }

    pub fn scales(&self) -> &ScaleGrid {
        &self.scales
    }

    pub fn angles(&self) -> CircleGrid {
        self.angles
    }

    /// Highest mode carried by the scalogram.
    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn row(&self, j: usize) -> &[Complex64] {
        let w = self.angles.len();
        &self.data[j * w..(j + 1) * w]
    }

    pub fn get(&self, scale: usize, angle: usize) -> Complex64 {
        self.data[scale * self.angles.len() + angle]
    }
}

/// Highest mode retained by [`analyze`] for a signal grid and angle count.
pub fn analysis_modes(signal_len: usize, n_angles: usize) -> usize {
    (signal_len / 4).min((n_angles.saturating_sub(1)) / 2)
}

/// `Ψ(ϑ, a) = Σ_n e^{2inϑ} conj(γ̂_a^n) ψ̂^n`, one inverse DFT per scale.
pub fn analyze(psi: &CircleSignal, gamma: &CircleSignal, scales: &ScaleGrid, n_angles: usize) -> Result<Scalogram> {
    let angles = CircleGrid::new(n_angles)?;
    let n_max = analysis_modes(psi.grid().len(), n_angles);
    if n_max > gamma.grid().len() / 4 {
        return Err(Error::GridMismatch(format!(
            "wavelet grid of {} nodes cannot supply {} modes",
            gamma.grid().len(),
            n_max
        )));
    }
    spectral::check_aliasing(&spectral::spectrum(gamma.values()))?;
    let psi_hat = fourier_coeffs(psi, n_max)?;
    let per_scale = scale_coeffs(gamma, scales, n_max)?;
    let rows: Vec<Vec<Complex64>> = per_scale
        .par_iter()
        .map(|g| {
            let products = g.iter().map(|(n, c)| (n, c.conj() * psi_hat.get(n) * PI.sqrt()));
            spectral::synthesize(products, n_angles)
        })
        .collect();
    Scalogram::from_parts(*scales, angles, n_max, rows.concat())
}

/// Continuous frame constants `c₁ ≤ c₂` and the truncation verdict.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameBounds {
    pub c1: f64,
    pub c2: f64,
    /// `Λ_{±n_max}` reached a plateau, so the truncated range is representative.
    pub plateau: bool,
}

impl FrameBounds {
    pub fn tightness(&self) -> f64 {
        self.c2 / self.c1
    }
}

/// `c₁ = π·min Λ_n`, `c₂ = π·max Λ_n` over the tested modes.
pub fn frame_bounds(report: &AdmissibilityReport) -> FrameBounds {
    FrameBounds {
        c1: PI * report.inf,
        c2: PI * report.sup,
        plateau: report.plateau,
    }
}

/// Reconstructed signal plus the modes that were dropped for lack of frame energy.
#[derive(Debug, Clone)]
pub struct Synthesis {
    pub signal: CircleSignal,
    pub skipped_modes: Vec<i64>,
    pub n_max: usize,
}

/// Invert the scalogram mode by mode with `A_σ⁻¹ = 1/(π Λ_m)`.
pub fn synthesize(scalogram: &Scalogram, gamma: &CircleSignal, report: &AdmissibilityReport) -> Result<Synthesis> {
    let angles = scalogram.angles();
    let n_angles = angles.len();
    let n_max = scalogram.n_max().min(report.n_max);
    let scales = scalogram.scales();
    let per_scale = scale_coeffs(gamma, scales, n_max)?;

    // ∫dϑ e^{-2imϑ} Ψ(ϑ, a) = √π · (orthonormal coefficient m of the row).
    let projections: Vec<Vec<Complex64>> = (0..scales.len())
        .into_par_iter()
        .map(|j| {
            let spec = spectral::spectrum(scalogram.row(j));
            let m = n_max as i64;
            (-m..=m).map(|k| spec[mode_bin(k, n_angles)] * PI.sqrt()).collect()
        })
        .collect();

    let max_lambda = report.sup;
    let mut skipped = Vec::new();
    let mut coeffs = Vec::with_capacity(2 * n_max + 1);
    for (idx, k) in (-(n_max as i64)..=n_max as i64).enumerate() {
        let lambda = report.lambda_at(k).unwrap_or(0.0);
        if !(lambda > MODE_FLOOR * max_lambda) {
            skipped.push(k);
            continue;
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, (g, proj)) in per_scale.iter().zip(&projections).enumerate() {
            acc += scales.haar_weight(j) * g.get(k) * proj[idx];
        }
        coeffs.push((k, acc / (PI * lambda)));
    }
    if coeffs.is_empty() && n_max > 0 {
        return Err(Error::NoLiveModes);
    }
    let values = spectral::synthesize(coeffs, n_angles);
    Ok(Synthesis {
        signal: CircleSignal::from_samples(angles, values)?,
        skipped_modes: skipped,
        n_max,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circle_rep::rep_action;

    fn grid(n: usize) -> CircleGrid {
        CircleGrid::new(n).unwrap()
    }

    #[test]
    fn coefficients_of_basis_and_cosine() {
        let g = grid(256);
        let e1 = CircleSignal::from_fn(g, |t| Complex64::from_polar(1.0 / PI.sqrt(), 2.0 * t));
        let c = fourier_coeffs(&e1, 8).unwrap();
        for (n, v) in c.iter() {
            let expected = if n == 1 { 1.0 } else { 0.0 };
            assert!((v - expected).norm() < 1e-13);
        }

        let cos2 = CircleSignal::from_real_fn(g, |t| (2.0 * t).cos());
        let c = fourier_coeffs(&cos2, 8).unwrap();
        for (n, v) in c.iter() {
            let expected = if n.abs() == 1 { PI.sqrt() / 2.0 } else { 0.0 };
            assert!((v - expected).norm() < 1e-13);
        }
    }

    #[test]
    fn n_max_limited_to_quarter_grid() {
        let g = grid(64);
        let s = lifted_gaussian(g);
        assert!(fourier_coeffs(&s, 17).is_err());
    }

    #[test]
    fn weak_integral_of_odd_signal_vanishes() {
        let g = grid(512);
        let odd = CircleSignal::from_real_fn(g, |t| t.sin() * (-t.tan().powi(2)).exp());
        assert!(weak_admissibility(&odd).unwrap().norm() < 1e-14);
    }

    #[test]
    fn weak_integral_rejects_non_decaying_signal() {
        let g = grid(512);
        let one = CircleSignal::from_real_fn(g, |_| 1.0);
        assert!(matches!(weak_admissibility(&one), Err(Error::NoDecay { .. })));
    }

    #[test]
    fn dog_scale_one_rejected() {
        assert!(make_dog(grid(64), 1.0, true).is_err());
        assert!(make_dog(grid(64), -2.0, true).is_err());
    }

    #[test]
    fn dog_tends_to_zero_as_scale_tends_to_one() {
        let near = make_dog(grid(512), 1.0 + 1e-7, true).unwrap();
        assert!(near.max_abs() < 1e-6);
    }

    #[test]
    fn oversampled_and_small_scale_routes_agree() {
        let g = grid(1024);
        let dog = make_dog(g, 2.0, true).unwrap();
        let sampled = dog.clone().sampled();
        for &a in &[0.05, 0.3, 0.9] {
            let exact = dilated_coeffs(&dog, a, 16).unwrap();
            let approx = dilated_coeffs(&sampled, a, 16).unwrap();
            for ((_, x), (_, y)) in exact.iter().zip(approx.iter()) {
                assert!((x - y).norm() < 1e-10, "a = {a}");
            }
        }
    }

    #[test]
    fn analyze_at_identity_gives_norm() {
        let g = grid(256);
        let dog = make_dog(g, 2.0, true).unwrap();
        let scales = ScaleGrid::new(0.5, 2.0, 3).unwrap();
        let s = analyze(&dog, &dog, &scales, 255).unwrap();
        // middle scale is a = 1; the ϑ = 0 node sits at index 127
        let v = s.get(1, 127);
        assert!((v - dog.norm_sqr()).norm() < 1e-10 * dog.norm_sqr());
    }

    #[test]
    fn synthesize_zero_is_zero() {
        let g = grid(256);
        let dog = make_dog(g, 2.0, true).unwrap();
        let scales = ScaleGrid::new(0.1, 10.0, 20).unwrap();
        let report = lambda_sequence(&dog, &scales, 16).unwrap();
        let zero = Scalogram::from_parts(scales, g, 16, vec![Complex64::new(0.0, 0.0); 20 * 256]).unwrap();
        let out = synthesize(&zero, &dog, &report).unwrap();
        assert_eq!(out.signal.max_abs(), 0.0);
    }

    #[test]
    fn lambda_symmetric_for_even_real_wavelet() {
        let g = grid(512);
        let dog = make_dog(g, 2.0, true).unwrap();
        let scales = ScaleGrid::new(1e-2, 1e2, 60).unwrap();
        let r = lambda_sequence(&dog, &scales, 16).unwrap();
        for n in 1..=16 {
            let (p, m) = (r.lambda_at(n).unwrap(), r.lambda_at(-n).unwrap());
            assert!((p - m).abs() <= 1e-12 * p.max(1e-300));
        }
        assert!(r.lambda.iter().all(|&l| l >= 0.0));
    }

    #[test]
    fn rotation_is_a_phase_on_coefficients() {
        let g = grid(256);
        let psi = CircleSignal::from_fn(g, |t| Complex64::new((2.0 * t).cos(), (6.0 * t).sin()));
        let delta = 0.37;
        let rotated = rep_action(&psi, 1.0, delta);
        let c0 = fourier_coeffs(&psi, 8).unwrap();
        let c1 = fourier_coeffs(&rotated, 8).unwrap();
        for ((n, x), (_, y)) in c0.iter().zip(c1.iter()) {
            let phase = Complex64::from_polar(1.0, -2.0 * n as f64 * delta);
            assert!((y - phase * x).norm() < 1e-12);
        }
    }
}

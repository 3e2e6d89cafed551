//! FFT plumbing for the half-circle midpoint grid.
//!
//! Coefficients are taken in the orthonormal basis `e^{2inθ}/√π` of
//! `L²((-π/2, π/2), dθ)`. With `θ_j = -π/2 + π(j + ½)/N` the midpoint sum
//! reduces to a plain DFT times the phase `e^{inπ(N-1)/N}`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};

/// Energy fraction tolerated in the top quarter of the spectrum.
pub const ALIAS_TOLERANCE: f64 = 1e-8;

/// Signed mode carried by DFT bin `m` of an `n`-point transform.
pub fn bin_mode(m: usize, n: usize) -> i64 {
    if m <= n / 2 {
        m as i64
    } else {
        m as i64 - n as i64
    }
}

/// DFT bin holding mode `mode`.
pub fn mode_bin(mode: i64, n: usize) -> usize {
    mode.rem_euclid(n as i64) as usize
}

/// `e^{inπ(N-1)/N}`, with the exponent reduced exactly modulo `2N`.
fn grid_phase(mode: i64, n: usize) -> Complex64 {
    let two_n = 2 * n as i64;
    let k = (mode.rem_euclid(two_n) * (n as i64 - 1)).rem_euclid(two_n);
    Complex64::from_polar(1.0, PI * k as f64 / n as f64)
}

/// Orthonormal coefficients for every DFT bin of the samples.
pub fn spectrum(values: &[Complex64]) -> Vec<Complex64> {
    let n = values.len();
    let mut buf = values.to_vec();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let scale = PI.sqrt() / n as f64;
    buf.iter_mut().enumerate().for_each(|(m, c)| {
        *c *= grid_phase(bin_mode(m, n), n) * scale;
    });
    buf
}

/// Samples on an `n`-node midpoint grid of `Σ c_mode e^{2i·mode·θ}/√π`.
pub fn synthesize<I>(coeffs: I, n: usize) -> Vec<Complex64>
where
    I: IntoIterator<Item = (i64, Complex64)>,
{
    let mut buf = vec![Complex64::new(0.0, 0.0); n];
    for (mode, c) in coeffs {
        buf[mode_bin(mode, n)] += c * grid_phase(mode, n).conj();
    }
    FftPlanner::new().plan_fft_inverse(n).process(&mut buf);
    let scale = 1.0 / PI.sqrt();
    buf.iter_mut().for_each(|v| *v *= scale);
    buf
}

/// Share of spectral energy at `|n| ≥ 3N/8`.
pub fn alias_fraction(spec: &[Complex64]) -> f64 {
    let n = spec.len();
    let cutoff = alias_cutoff(n);
    let mut total = 0.0;
    let mut top = 0.0;
    for (m, c) in spec.iter().enumerate() {
        let e = c.norm_sqr();
        total += e;
        if bin_mode(m, n).unsigned_abs() as usize >= cutoff {
            top += e;
        }
    }
    if total == 0.0 {
        0.0
    } else {
        top / total
    }
}

pub fn alias_cutoff(n: usize) -> usize {
    (3 * n).div_ceil(8)
}

pub fn check_aliasing(spec: &[Complex64]) -> Result<()> {
    let fraction = alias_fraction(spec);
    if fraction > ALIAS_TOLERANCE {
        return Err(Error::Aliased {
            fraction,
            cutoff: alias_cutoff(spec.len()),
        });
    }
    Ok(())
}

/// Spectral `d/dθ` on the midpoint grid, after the aliasing guard.
pub fn derivative(values: &[Complex64]) -> Result<Vec<Complex64>> {
    let n = values.len();
    let spec = spectrum(values);
    check_aliasing(&spec)?;
    let coeffs = spec.iter().enumerate().filter_map(|(m, c)| {
        let mode = bin_mode(m, n);
        if n % 2 == 0 && m == n / 2 {
            None
        } else {
            Some((mode, *c * Complex64::new(0.0, 2.0 * mode as f64)))
        }
    });
    Ok(synthesize(coeffs, n))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nodes(n: usize) -> impl Iterator<Item = f64> {
        (0..n).map(move |j| -PI / 2.0 + PI * (j as f64 + 0.5) / n as f64)
    }

    #[test]
    fn single_mode_has_unit_coefficient() {
        let n = 64;
        let vals: Vec<Complex64> = nodes(n)
            .map(|t| Complex64::from_polar(1.0 / PI.sqrt(), 2.0 * 3.0 * t))
            .collect();
        let spec = spectrum(&vals);
        for (m, c) in spec.iter().enumerate() {
            let expected = if bin_mode(m, n) == 3 { 1.0 } else { 0.0 };
            assert!((c - expected).norm() < 1e-13, "bin {m}: {c}");
        }
    }

    #[test]
    fn synthesis_inverts_spectrum() {
        let n = 48;
        let vals: Vec<Complex64> = nodes(n)
            .map(|t| Complex64::new((-t.tan().powi(2)).exp(), (4.0 * t).sin()))
            .collect();
        let spec = spectrum(&vals);
        let back = synthesize(spec.iter().enumerate().map(|(m, c)| (bin_mode(m, n), *c)), n);
        for (x, y) in vals.iter().zip(&back) {
            assert!((x - y).norm() < 1e-13);
        }
    }

    #[test]
    fn derivative_of_mode() {
        let n = 32;
        let vals: Vec<Complex64> = nodes(n).map(|t| Complex64::from_polar(1.0, -4.0 * t)).collect();
        let d = derivative(&vals).unwrap();
        for (t, v) in nodes(n).zip(&d) {
            let exact = Complex64::new(0.0, -4.0) * Complex64::from_polar(1.0, -4.0 * t);
            assert!((v - exact).norm() < 1e-12);
        }
    }

    #[test]
    fn guard_rejects_top_quarter_energy() {
        let n = 32;
        let vals: Vec<Complex64> = nodes(n).map(|t| Complex64::from_polar(1.0, 2.0 * 14.0 * t)).collect();
        assert!(matches!(derivative(&vals), Err(Error::Aliased { .. })));
    }
}

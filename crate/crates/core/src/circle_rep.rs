//! Continuous-series representation of SL(2,R) on the half-circle.
//!
//! Functions live on `(-π/2, π/2)` with `dθ`. Dilations act through
//! `θ ↦ θ_a = arctan(a·tan θ)` and the multiplier `λ(a, θ) = dθ_a/dθ`;
//! rotations act by translation modulo π.

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::Result;
use crate::signal::{reduce_half_circle, CircleSignal, Evaluator};
use crate::spectral;

/// `θ_a = arctan(a·tan θ)`.
pub fn dilate_angle(theta: f64, a: f64) -> f64 {
    (a * theta.tan()).atan()
}

/// `λ(a, θ) = a / (a² + (1 - a²)cos²θ)`, written as `a / (a² sin²θ + cos²θ)`.
pub fn multiplier(a: f64, theta: f64) -> f64 {
    let (s, c) = theta.sin_cos();
    a / (a * a * s * s + c * c)
}

/// Representation parameters `α = ½ + i s`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RepParams {
    s: f64,
}

impl RepParams {
    /// The `s = 0` member used throughout.
    pub const PRINCIPAL: RepParams = RepParams { s: 0.0 };

    pub fn new(s: f64) -> Self {
        Self { s }
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn alpha(&self) -> Complex64 {
        Complex64::new(0.5, self.s)
    }
}

impl Default for RepParams {
    fn default() -> Self {
        Self::PRINCIPAL
    }
}

/// Pointwise form of `[U(a, ϑ)γ](θ) = λ(1/a, θ-ϑ)^{1/2} γ((θ-ϑ)_{1/a})`.
pub fn rep_evaluator(gamma: Evaluator, a: f64, vartheta: f64) -> Evaluator {
    if a == 1.0 {
        return Arc::new(move |theta: f64| gamma(reduce_half_circle(theta - vartheta)));
    }
    let inv = 1.0 / a;
    Arc::new(move |theta: f64| {
        let d = reduce_half_circle(theta - vartheta);
        multiplier(inv, d).sqrt() * gamma(dilate_angle(d, inv))
    })
}

/// `γ_{ϑ,a} = U(a, ϑ)γ` on the grid of `gamma`.
pub fn rep_action(gamma: &CircleSignal, a: f64, vartheta: f64) -> CircleSignal {
    let eval = rep_evaluator(gamma.value_fn(), a, vartheta);
    if gamma.has_closed_form() {
        CircleSignal::from_evaluator(gamma.grid(), eval)
    } else {
        let values = gamma.grid().nodes().map(|t| eval(t)).collect();
        CircleSignal::from_samples(gamma.grid(), values).expect("grid sizes agree")
    }
}

/// Lie-algebra direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Generator {
    A,
    B,
    Theta,
}

/// Apply `𝒳_a`, `𝒳_b` or `𝒳_θ` at `α = ½`.
pub fn generator(which: Generator, f: &CircleSignal) -> Result<CircleSignal> {
    generator_with(RepParams::PRINCIPAL, which, f)
}

/// ```text
/// 𝒳_a = (i/2) sin 2θ d/dθ + iα cos 2θ
/// 𝒳_b = (i/2)(cos 2θ - 1) d/dθ - iα sin 2θ
/// 𝒳_θ = i d/dθ
/// ```
pub fn generator_with(params: RepParams, which: Generator, f: &CircleSignal) -> Result<CircleSignal> {
    let df = spectral::derivative(f.values())?;
    let alpha = params.alpha();
    let i = Complex64::i();
    let grid = f.grid();
    let values = grid
        .nodes()
        .zip(f.values().iter().zip(&df))
        .map(|(t, (&v, &dv))| {
            let (s2, c2) = (2.0 * t).sin_cos();
            match which {
                Generator::A => i * 0.5 * s2 * dv + i * alpha * c2 * v,
                Generator::B => i * 0.5 * (c2 - 1.0) * dv - i * alpha * s2 * v,
                Generator::Theta => i * dv,
            }
        })
        .collect();
    CircleSignal::from_samples(grid, values)
}

/// `𝒳_a² + 𝒳_b² + ½(𝒳_b𝒳_θ + 𝒳_θ𝒳_b)` by operator composition.
pub fn casimir_apply(f: &CircleSignal) -> Result<CircleSignal> {
    casimir_apply_with(RepParams::PRINCIPAL, f)
}

pub fn casimir_apply_with(params: RepParams, f: &CircleSignal) -> Result<CircleSignal> {
    let x = |w, s: &CircleSignal| generator_with(params, w, s);
    let aa = x(Generator::A, &x(Generator::A, f)?)?;
    let bb = x(Generator::B, &x(Generator::B, f)?)?;
    let bt = x(Generator::B, &x(Generator::Theta, f)?)?;
    let tb = x(Generator::Theta, &x(Generator::B, f)?)?;
    let half = Complex64::new(0.5, 0.0);
    let one = Complex64::new(1.0, 0.0);
    aa.axpy(one, &bb)?.axpy(half, &bt)?.axpy(half, &tb)
}

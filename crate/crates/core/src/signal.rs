//! Sampled signals on the half-circle, the line and the half-line.
//!
//! Every signal keeps its samples and, when it was built from a formula, the
//! formula itself. Operations that need off-grid values (dilations, rotations,
//! stereographic maps) use the formula when it exists.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{invalid, Error, Result};

/// Closed-form evaluator `coordinate ↦ value`.
pub type Evaluator = Arc<dyn Fn(f64) -> Complex64 + Send + Sync>;

/// Midpoint grid `θ_j = -π/2 + π(j + ½)/n` on the half-circle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CircleGrid {
    n: usize,
}

impl CircleGrid {
    pub fn new(n_samples: usize) -> Result<Self> {
        if n_samples < 8 {
            return Err(invalid("n_samples", format!("need at least 8 nodes, got {n_samples}")));
        }
        Ok(Self { n: n_samples })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn spacing(&self) -> f64 {
        PI / self.n as f64
    }

    pub fn node(&self, j: usize) -> f64 {
        -PI / 2.0 + PI * (j as f64 + 0.5) / self.n as f64
    }

    pub fn nodes(&self) -> impl ExactSizeIterator<Item = f64> + '_ {
        (0..self.n).map(move |j| self.node(j))
    }
}

/// Reduce an angle modulo π into `(-π/2, π/2]`.
pub fn reduce_half_circle(theta: f64) -> f64 {
    if theta > -PI / 2.0 && theta <= PI / 2.0 {
        return theta;
    }
    let r = theta - PI * (theta / PI).round();
    if r <= -PI / 2.0 {
        r + PI
    } else if r > PI / 2.0 {
        r - PI
    } else {
        r
    }
}

/// A function on `(-π/2, π/2)` sampled on a [`CircleGrid`].
#[derive(Clone)]
pub struct CircleSignal {
    grid: CircleGrid,
    values: Vec<Complex64>,
    eval: Option<Evaluator>,
}

impl fmt::Debug for CircleSignal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CircleSignal")
            .field("n_samples", &self.grid.n)
            .field("closed_form", &self.eval.is_some())
            .finish()
    }
}

impl CircleSignal {
    /// Sample `f` on `grid` and keep `f` as the evaluator.
    pub fn from_fn<F>(grid: CircleGrid, f: F) -> Self
    where
        F: Fn(f64) -> Complex64 + Send + Sync + 'static,
    {
        Self::from_evaluator(grid, Arc::new(f))
    }

    pub fn from_evaluator(grid: CircleGrid, eval: Evaluator) -> Self {
        let values = grid.nodes().map(|t| eval(t)).collect();
        Self {
            grid,
            values,
            eval: Some(eval),
        }
    }

    pub fn from_real_fn<F>(grid: CircleGrid, f: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self::from_fn(grid, move |t| Complex64::new(f(t), 0.0))
    }

    pub fn from_samples(grid: CircleGrid, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::GridMismatch(format!(
                "{} samples for a {}-node grid",
                values.len(),
                grid.len()
            )));
        }
        if values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(invalid("values", "samples must be finite"));
        }
        Ok(Self {
            grid,
            values,
            eval: None,
        })
    }

    pub fn zeros(grid: CircleGrid) -> Self {
        Self {
            grid,
            values: vec![Complex64::new(0.0, 0.0); grid.len()],
            eval: None,
        }
    }

    pub fn grid(&self) -> CircleGrid {
        self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn evaluator(&self) -> Option<&Evaluator> {
        self.eval.as_ref()
    }

    pub fn has_closed_form(&self) -> bool {
        self.eval.is_some()
    }

    /// Drop the evaluator, keeping only the samples.
    pub fn sampled(mut self) -> Self {
        self.eval = None;
        self
    }

    /// Re-sample on another grid. Needs a closed form, otherwise the
    /// trigonometric interpolant of the samples is used.
    pub fn resample(&self, grid: CircleGrid) -> Self {
        let eval = self.value_fn();
        let values = grid.nodes().map(|t| eval(t)).collect();
        Self {
            grid,
            values,
            eval: self.eval.clone(),
        }
    }

    /// Off-grid evaluator: the closed form when present, otherwise the
    /// trigonometric interpolant of the samples in the `e^{2inθ}` basis.
    pub fn value_fn(&self) -> Evaluator {
        match &self.eval {
            Some(e) => e.clone(),
            None => {
                let coeffs = crate::spectral::spectrum(&self.values);
                let n = self.values.len();
                let modes: Vec<(f64, Complex64)> = coeffs
                    .iter()
                    .enumerate()
                    .filter_map(|(m, c)| {
                        let mode = crate::spectral::bin_mode(m, n);
                        // The Nyquist bin has no symmetric partner.
                        if n % 2 == 0 && m == n / 2 {
                            None
                        } else {
                            Some((mode as f64, *c / PI.sqrt()))
                        }
                    })
                    .collect();
                Arc::new(move |t: f64| {
                    modes
                        .iter()
                        .map(|(mode, c)| *c * Complex64::from_polar(1.0, 2.0 * mode * t))
                        .sum()
                })
            }
        }
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * self.grid.spacing()
    }

    /// `⟨self|other⟩ = ∫ conj(self)·other dθ`, midpoint rule.
    pub fn inner(&self, other: &CircleSignal) -> Result<Complex64> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch(format!(
                "inner product of {}- and {}-node signals",
                self.grid.len(),
                other.grid.len()
            )));
        }
        let s: Complex64 = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(x, y)| x.conj() * y)
            .sum();
        Ok(s * self.grid.spacing())
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.norm()))
    }

    /// Pointwise linear combination `self + c·other` on a common grid.
    pub fn axpy(&self, c: Complex64, other: &CircleSignal) -> Result<CircleSignal> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch("axpy on different grids".into()));
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(x, y)| x + c * y)
            .collect();
        let eval = match (&self.eval, &other.eval) {
            (Some(f), Some(g)) => {
                let (f, g) = (f.clone(), g.clone());
                Some(Arc::new(move |t: f64| f(t) + c * g(t)) as Evaluator)
            }
            _ => None,
        };
        Ok(CircleSignal {
            grid: self.grid,
            values,
            eval,
        })
    }

    /// Relative L² distance `‖self - other‖/‖other‖`.
    pub fn relative_error(&self, reference: &CircleSignal) -> Result<f64> {
        let diff = self.axpy(Complex64::new(-1.0, 0.0), reference)?;
        let denom = reference.norm();
        Ok(if denom == 0.0 { diff.norm() } else { diff.norm() / denom })
    }
}

/// Uniform periodic grid `x_j = x_lo + j·h`, `h = (x_hi - x_lo)/n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineGrid {
    x_lo: f64,
    x_hi: f64,
    n: usize,
}

impl LineGrid {
    pub fn new(x_lo: f64, x_hi: f64, n: usize) -> Result<Self> {
        if !(x_lo.is_finite() && x_hi.is_finite() && x_lo < x_hi) {
            return Err(invalid("window", format!("need x_lo < x_hi, got [{x_lo}, {x_hi}]")));
        }
        if n < 8 {
            return Err(invalid("n_samples", format!("need at least 8 nodes, got {n}")));
        }
        Ok(Self { x_lo, x_hi, n })
    }

    /// Symmetric window `[-half_width, half_width)`.
    pub fn symmetric(half_width: f64, n: usize) -> Result<Self> {
        Self::new(-half_width, half_width, n)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn x_lo(&self) -> f64 {
        self.x_lo
    }

    pub fn x_hi(&self) -> f64 {
        self.x_hi
    }

    pub fn spacing(&self) -> f64 {
        (self.x_hi - self.x_lo) / self.n as f64
    }

    pub fn node(&self, j: usize) -> f64 {
        self.x_lo + j as f64 * self.spacing()
    }

    pub fn nodes(&self) -> impl ExactSizeIterator<Item = f64> + '_ {
        (0..self.n).map(move |j| self.node(j))
    }
}

/// A function on the real line restricted to a finite window.
#[derive(Clone)]
pub struct LineSignal {
    grid: LineGrid,
    values: Vec<Complex64>,
    eval: Option<Evaluator>,
}

impl fmt::Debug for LineSignal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LineSignal")
            .field("grid", &self.grid)
            .field("closed_form", &self.eval.is_some())
            .finish()
    }
}

impl LineSignal {
    pub fn from_fn<F>(grid: LineGrid, f: F) -> Self
    where
        F: Fn(f64) -> Complex64 + Send + Sync + 'static,
    {
        Self::from_evaluator(grid, Arc::new(f))
    }

    pub fn from_real_fn<F>(grid: LineGrid, f: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self::from_fn(grid, move |x| Complex64::new(f(x), 0.0))
    }

    pub fn from_evaluator(grid: LineGrid, eval: Evaluator) -> Self {
        let values = grid.nodes().map(|x| eval(x)).collect();
        Self {
            grid,
            values,
            eval: Some(eval),
        }
    }

    pub fn from_samples(grid: LineGrid, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::GridMismatch(format!(
                "{} samples for a {}-node grid",
                values.len(),
                grid.len()
            )));
        }
        if values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(invalid("values", "samples must be finite"));
        }
        Ok(Self {
            grid,
            values,
            eval: None,
        })
    }

    pub fn grid(&self) -> LineGrid {
        self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn evaluator(&self) -> Option<&Evaluator> {
        self.eval.as_ref()
    }

    pub fn has_closed_form(&self) -> bool {
        self.eval.is_some()
    }

    pub fn sampled(mut self) -> Self {
        self.eval = None;
        self
    }

    /// Off-grid evaluator: the closed form, or four-point cubic Lagrange
    /// interpolation of the samples with zero outside the window.
    pub fn value_fn(&self) -> Evaluator {
        match &self.eval {
            Some(e) => e.clone(),
            None => {
                let grid = self.grid;
                let values = self.values.clone();
                Arc::new(move |x: f64| {
                    let u = (x - grid.x_lo) / grid.spacing();
                    let last = (grid.n - 1) as f64;
                    if !(u >= 0.0 && u <= last) {
                        return Complex64::new(0.0, 0.0);
                    }
                    if grid.n < 4 {
                        let j = (u.floor() as usize).min(grid.n - 2);
                        let t = u - j as f64;
                        return values[j] * (1.0 - t) + values[j + 1] * t;
                    }
                    // Stencil j-1..j+2, shifted inward at the ends.
                    let j = (u.floor() as usize).clamp(1, grid.n - 3);
                    let t = u - j as f64;
                    let w = [
                        -t * (t - 1.0) * (t - 2.0) / 6.0,
                        (t + 1.0) * (t - 1.0) * (t - 2.0) / 2.0,
                        -(t + 1.0) * t * (t - 2.0) / 2.0,
                        (t + 1.0) * t * (t - 1.0) / 6.0,
                    ];
                    (0..4).map(|i| values[j - 1 + i] * w[i]).sum()
                })
            }
        }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * self.grid.spacing()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.norm()))
    }

    /// Ratio of the larger edge sample to the peak magnitude.
    pub fn edge_ratio(&self) -> f64 {
        let peak = self.max_abs();
        if peak == 0.0 {
            return 0.0;
        }
        let first = self.values[0].norm();
        let last = self.values[self.values.len() - 1].norm();
        first.max(last) / peak
    }

    pub fn relative_error(&self, reference: &LineSignal) -> Result<f64> {
        if self.grid != reference.grid {
            return Err(Error::GridMismatch("line signals on different grids".into()));
        }
        let num: f64 = self
            .values
            .iter()
            .zip(&reference.values)
            .map(|(x, y)| (x - y).norm_sqr())
            .sum();
        let den: f64 = reference.values.iter().map(|y| y.norm_sqr()).sum();
        Ok(if den == 0.0 { num.sqrt() } else { (num / den).sqrt() })
    }
}

/// Log-uniform grid on `[r_min, r_max] ⊂ ℝ⁺`, carrying the measure `dr/r`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogGrid {
    r_min: f64,
    r_max: f64,
    n: usize,
}

impl LogGrid {
    pub fn new(r_min: f64, r_max: f64, n: usize) -> Result<Self> {
        if !(r_min > 0.0 && r_min.is_finite() && r_max.is_finite() && r_min < r_max) {
            return Err(invalid("range", format!("need 0 < r_min < r_max, got [{r_min}, {r_max}]")));
        }
        if n < 2 {
            return Err(invalid("count", "need at least two nodes"));
        }
        Ok(Self { r_min, r_max, n })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn r_min(&self) -> f64 {
        self.r_min
    }

    pub fn r_max(&self) -> f64 {
        self.r_max
    }

    /// Spacing in `ln r`.
    pub fn log_step(&self) -> f64 {
        (self.r_max / self.r_min).ln() / (self.n - 1) as f64
    }

    pub fn node(&self, j: usize) -> f64 {
        if j + 1 == self.n {
            return self.r_max;
        }
        self.r_min * (j as f64 * self.log_step()).exp()
    }

    pub fn nodes(&self) -> impl ExactSizeIterator<Item = f64> + '_ {
        (0..self.n).map(move |j| self.node(j))
    }

    /// Trapezoid weights for `∫ g(r) dr/r = ∫ g d(ln r)`.
    pub fn trapezoid_weight(&self, j: usize) -> f64 {
        let h = self.log_step();
        if j == 0 || j + 1 == self.n {
            0.5 * h
        } else {
            h
        }
    }
}

/// A function on `ℝ⁺` with the measure `dr/r`.
#[derive(Clone)]
pub struct RPlusFunction {
    grid: LogGrid,
    values: Vec<Complex64>,
    eval: Option<Evaluator>,
}

impl fmt::Debug for RPlusFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RPlusFunction")
            .field("grid", &self.grid)
            .field("closed_form", &self.eval.is_some())
            .finish()
    }
}

impl RPlusFunction {
    pub fn from_fn<F>(grid: LogGrid, f: F) -> Self
    where
        F: Fn(f64) -> Complex64 + Send + Sync + 'static,
    {
        let eval: Evaluator = Arc::new(f);
        let values = grid.nodes().map(|r| eval(r)).collect();
        Self {
            grid,
            values,
            eval: Some(eval),
        }
    }

    pub fn from_real_fn<F>(grid: LogGrid, f: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self::from_fn(grid, move |r| Complex64::new(f(r), 0.0))
    }

    pub fn from_samples(grid: LogGrid, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::GridMismatch(format!(
                "{} samples for a {}-node grid",
                values.len(),
                grid.len()
            )));
        }
        Ok(Self {
            grid,
            values,
            eval: None,
        })
    }

    pub fn grid(&self) -> LogGrid {
        self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn evaluator(&self) -> Option<&Evaluator> {
        self.eval.as_ref()
    }

    /// Off-grid evaluator: the closed form, or linear interpolation in `ln r`
    /// with zero outside the grid.
    pub fn value_fn(&self) -> Evaluator {
        match &self.eval {
            Some(e) => e.clone(),
            None => {
                let grid = self.grid;
                let values = self.values.clone();
                Arc::new(move |r: f64| {
                    if !(r > 0.0) {
                        return Complex64::new(0.0, 0.0);
                    }
                    let u = (r / grid.r_min).ln() / grid.log_step();
                    if !(u >= 0.0 && u <= (grid.n - 1) as f64) {
                        return Complex64::new(0.0, 0.0);
                    }
                    let j = (u.floor() as usize).min(grid.n - 2);
                    let t = u - j as f64;
                    values[j] * (1.0 - t) + values[j + 1] * t
                })
            }
        }
    }

    /// `‖φ‖²` in `L²(ℝ⁺, dr/r)` by the log-trapezoid rule.
    pub fn norm_sqr(&self) -> f64 {
        self.values
            .iter()
            .enumerate()
            .map(|(j, v)| self.grid.trapezoid_weight(j) * v.norm_sqr())
            .sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }
}

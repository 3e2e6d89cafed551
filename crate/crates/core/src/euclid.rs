//! Stereographic maps between the half-circle and the line, the
//! radius-`R` isometries `I_R`, and the Euclidean-limit experiment.

use std::f64::consts::FRAC_PI_2;
use std::sync::Arc;

use gauss_quad::GaussLegendre;
use num_complex::Complex64;

use crate::circle_rep::rep_evaluator;
use crate::error::{invalid, Error, Result};
use crate::signal::{CircleGrid, CircleSignal, Evaluator, LineGrid, LineSignal};

/// Lifted line signals must fall below this fraction of their peak at the window edges.
pub const LIFT_DECAY_TOLERANCE: f64 = 1e-6;

const PANELS: usize = 256;
const PANEL_ORDER: usize = 16;

/// Circle of radius `R ≥ 1` used by the contraction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContractionParams {
    radius: f64,
}

impl ContractionParams {
    pub fn new(radius: f64) -> Result<Self> {
        if !(radius >= 1.0 && radius.is_finite()) {
            return Err(invalid("R", format!("radius must be at least 1, got {radius}")));
        }
        Ok(Self { radius })
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }
}

fn keep_form(grid_values: LineSignal, closed: bool) -> LineSignal {
    if closed {
        grid_values
    } else {
        grid_values.sampled()
    }
}

fn i_r_evaluator(gamma: Evaluator, radius: f64) -> Evaluator {
    Arc::new(move |x: f64| {
        let u = x / radius;
        gamma(u.atan()) / (1.0 + u * u).sqrt()
    })
}

fn i_r_inverse_evaluator(f: Evaluator, radius: f64) -> Evaluator {
    Arc::new(move |theta: f64| f(radius * theta.tan()) / theta.cos())
}

/// `[Sγ](x) = γ(arctan x)/√(1+x²)`, sampled on `grid`.
pub fn stereo_project(gamma: &CircleSignal, grid: LineGrid) -> LineSignal {
    i_r_map(gamma, ContractionParams { radius: 1.0 }, grid)
}

/// `[S⁻¹f](θ) = f(tan θ)/cos θ`, sampled on `grid`.
pub fn stereo_lift(f: &LineSignal, grid: CircleGrid) -> Result<CircleSignal> {
    i_r_inverse(f, ContractionParams { radius: 1.0 }, grid)
}

/// `[I_Rγ](x) = γ(arctan(x/R))/√(1+(x/R)²)`; maps `L²(R dθ)` onto `L²(dx)`.
pub fn i_r_map(gamma: &CircleSignal, params: ContractionParams, grid: LineGrid) -> LineSignal {
    let eval = i_r_evaluator(gamma.value_fn(), params.radius);
    keep_form(LineSignal::from_evaluator(grid, eval), gamma.has_closed_form())
}

/// `[I_R⁻¹f](θ) = f(R tan θ)/cos θ`.
pub fn i_r_inverse(f: &LineSignal, params: ContractionParams, grid: CircleGrid) -> Result<CircleSignal> {
    let ratio = f.edge_ratio();
    if ratio >= LIFT_DECAY_TOLERANCE {
        return Err(Error::NoDecay { ratio });
    }
    let eval = i_r_inverse_evaluator(f.value_fn(), params.radius);
    let out = CircleSignal::from_evaluator(grid, eval);
    Ok(if f.has_closed_form() { out } else { out.sampled() })
}

/// Largest `|S D̃_a γ - D_a S γ|` over the nodes of `grid`.
pub fn check_intertwining(gamma: &CircleSignal, a: f64, grid: LineGrid) -> Result<f64> {
    if !(a > 0.0 && a.is_finite()) {
        return Err(invalid("a", format!("scale must be positive, got {a}")));
    }
    let eval = gamma
        .evaluator()
        .ok_or_else(|| invalid("gamma", "intertwining check needs a closed-form wavelet"))?
        .clone();
    let dilated = rep_evaluator(eval.clone(), a, 0.0);
    let inv_sqrt = a.powf(-0.5);
    Ok(grid
        .nodes()
        .map(|x| {
            let lhs = dilated(x.atan()) / (1.0 + x * x).sqrt();
            let u = x / a;
            let rhs = inv_sqrt * eval(u.atan()) / (1.0 + u * u).sqrt();
            (lhs - rhs).norm()
        })
        .fold(0.0, f64::max))
}

/// `Π_R(b, a) = (arctan(b/R), a)`.
pub fn contract_point(b: f64, a: f64, params: ContractionParams) -> Result<(f64, f64)> {
    if !(a > 0.0 && a.is_finite()) {
        return Err(invalid("a", format!("scale must be positive, got {a}")));
    }
    Ok(((b / params.radius).atan(), a))
}

/// Closed interval outside of which the samples of `f` vanish.
fn support(f: &LineSignal) -> Result<(f64, f64)> {
    let grid = f.grid();
    let live: Vec<usize> = f
        .values()
        .iter()
        .enumerate()
        .filter(|(_, v)| v.norm() > 0.0)
        .map(|(j, _)| j)
        .collect();
    let (first, last) = match (live.first(), live.last()) {
        (Some(&p), Some(&q)) => (p, q),
        _ => return Ok((0.0, 0.0)),
    };
    if first == 0 || last + 1 == grid.len() {
        return Err(invalid("f", "signal must vanish at the window edges"));
    }
    Ok((grid.node(first - 1), grid.node(last + 1)))
}

/// `I_R U_R(Π_R(b,a)) I_R⁻¹ f` evaluated pointwise.
///
/// With `t = tan(arctan(x/R) - arctan(b/R))` the composition collapses to
/// `a^{-1/2} f(Rt/a) √(1+t²)/√(1+x²/R²)`, where `Rt = (x - b)/(1 + xb/R²)`.
/// This avoids the cancellation in the angle difference at large `R`.
fn contracted_action(f: Evaluator, b: f64, a: f64, radius: f64) -> impl Fn(f64) -> Complex64 {
    let scale = a.powf(-0.5);
    move |x: f64| {
        let denom = 1.0 + x * b / (radius * radius);
        if denom == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        let rt = (x - b) / denom;
        let t = rt / radius;
        let u = x / radius;
        scale * f(rt / a) * ((1.0 + t * t) / (1.0 + u * u)).sqrt()
    }
}

/// Same operator assembled from `I_R⁻¹`, the circle action and `I_R`.
pub fn contracted_action_by_composition(f: &LineSignal, b: f64, a: f64, params: ContractionParams) -> Evaluator {
    let radius = params.radius;
    let lifted = i_r_inverse_evaluator(f.value_fn(), radius);
    let moved = rep_evaluator(lifted, a, (b / radius).atan());
    i_r_evaluator(moved, radius)
}

/// `‖I_R U_R(Π_R(b,a)) I_R⁻¹ f - U'(b,a) f‖_{L²(ℝ)}` for compactly supported `f`.
pub fn euclidean_limit_error(f: &LineSignal, b: f64, a: f64, params: ContractionParams) -> Result<f64> {
    if !(a > 0.0 && a.is_finite()) {
        return Err(invalid("a", format!("scale must be positive, got {a}")));
    }
    let radius = params.radius;
    let (s_lo, s_hi) = support(f)?;
    if s_lo == s_hi {
        return Ok(0.0);
    }
    let vartheta = (b / radius).atan();
    let ends = [s_lo, s_hi].map(|s| vartheta + (a * s / radius).atan());
    if ends.iter().any(|t| t.abs() >= FRAC_PI_2) {
        return Err(Error::SupportEscape);
    }
    let eval = f.value_fn();
    let lhs = contracted_action(eval.clone(), b, a, radius);
    let scale = a.powf(-0.5);
    let rhs = move |x: f64| scale * eval((x - b) / a);

    let lo = (radius * ends[0].tan()).min(b + a * s_lo);
    let hi = (radius * ends[1].tan()).max(b + a * s_hi);
    let rule = GaussLegendre::new(PANEL_ORDER).expect("fixed order");
    let width = (hi - lo) / PANELS as f64;
    let total: f64 = (0..PANELS)
        .map(|p| {
            let x0 = lo + p as f64 * width;
            rule.integrate(x0, x0 + width, |x| (lhs(x) - rhs(x)).norm_sqr())
        })
        .sum();
    Ok(total.sqrt())
}

/// `C^∞` bump `exp(1 - 1/(1 - x²))` on `(-1, 1)`, rescaled to `center ± half_width`.
pub fn smooth_bump(center: f64, half_width: f64) -> impl Fn(f64) -> f64 + Send + Sync + Clone + 'static {
    move |x: f64| {
        let u = (x - center) / half_width;
        if u.abs() >= 1.0 {
            0.0
        } else {
            (1.0 - 1.0 / (1.0 - u * u)).exp()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gaussian_circle(n: usize) -> CircleSignal {
        CircleSignal::from_real_fn(CircleGrid::new(n).unwrap(), |t| (-t.tan().powi(2)).exp())
    }

    #[test]
    fn cosine_projects_to_cauchy() {
        let g = LineGrid::symmetric(10.0, 64).unwrap();
        let c = CircleSignal::from_real_fn(CircleGrid::new(64).unwrap(), f64::cos);
        let s = stereo_project(&c, g);
        for (x, v) in g.nodes().zip(s.values()) {
            assert!((v.re - 1.0 / (1.0 + x * x)).abs() < 1e-15);
        }
    }

    #[test]
    fn project_then_lift_is_identity() {
        let gamma = gaussian_circle(128);
        let line = stereo_project(&gamma, LineGrid::symmetric(12.0, 256).unwrap());
        let back = stereo_lift(&line, gamma.grid()).unwrap();
        for (x, y) in back.values().iter().zip(gamma.values()) {
            assert!((x - y).norm() < 1e-12);
        }
    }

    #[test]
    fn lift_rejects_wide_signal() {
        let g = LineGrid::symmetric(3.0, 64).unwrap();
        let f = LineSignal::from_real_fn(g, |x| (-0.1 * x * x).exp());
        assert!(matches!(stereo_lift(&f, CircleGrid::new(64).unwrap()), Err(Error::NoDecay { .. })));
    }

    #[test]
    fn contraction_examples() {
        let p = ContractionParams::new(7.0).unwrap();
        assert_eq!(contract_point(0.0, 2.0, p).unwrap(), (0.0, 2.0));
        let (t, a) = contract_point(7.0, 0.5, p).unwrap();
        assert!((t - std::f64::consts::FRAC_PI_4).abs() < 1e-15 && a == 0.5);
        assert!(ContractionParams::new(0.5).is_err());
    }

    #[test]
    fn intertwining_at_unit_scale() {
        let g = LineGrid::symmetric(10.0, 128).unwrap();
        assert_eq!(check_intertwining(&gaussian_circle(64), 1.0, g).unwrap(), 0.0);
    }

    #[test]
    fn identity_transformation_has_no_error() {
        let g = LineGrid::symmetric(4.0, 256).unwrap();
        let f = LineSignal::from_real_fn(g, smooth_bump(0.0, 1.0));
        let p = ContractionParams::new(10.0).unwrap();
        assert_eq!(euclidean_limit_error(&f, 0.0, 1.0, p).unwrap(), 0.0);
    }

    #[test]
    fn closed_form_matches_composition() {
        let g = LineGrid::symmetric(4.0, 256).unwrap();
        let f = LineSignal::from_real_fn(g, smooth_bump(0.2, 1.0));
        let p = ContractionParams::new(10.0).unwrap();
        let direct = contracted_action(f.value_fn(), 0.7, 2.0, 10.0);
        let composed = contracted_action_by_composition(&f, 0.7, 2.0, p);
        for j in 0..400 {
            let x = -4.0 + 0.02 * j as f64;
            assert!((direct(x) - composed(x)).norm() < 1e-12, "x = {x}");
        }
    }

    #[test]
    fn support_escape_detected() {
        let g = LineGrid::symmetric(4.0, 256).unwrap();
        let f = LineSignal::from_real_fn(g, smooth_bump(0.0, 1.0));
        let p = ContractionParams::new(1.0).unwrap();
        assert!(matches!(
            euclidean_limit_error(&f, 1e6, 1.0, p),
            Err(Error::SupportEscape)
        ));
    }
}

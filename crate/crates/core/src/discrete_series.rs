//! Discrete-series realizations on `ℝ⁺` and on the right half-plane, and
//! the Laplace transform that carries one basis onto the other.
//!
//! On `L²(ℝ⁺, dr/r)` the Lie algebra acts by
//!
//! ```text
//! 𝒳_a = i r d/dr,   𝒳_b = r/2,   𝒳_θ = 2r d²/dr² - (r²/2 + 2q)/r,   q = k(k-1)
//! ```
//!
//! and the Laguerre functions `φ_n^k` diagonalize `-½𝒳_θ` with eigenvalue `k + n`.

use std::f64::consts::PI;
use std::ops::Range;

use gauss_quad::{GaussLaguerre, GaussLegendre};
use num_complex::Complex64;
use statrs::function::gamma::ln_gamma;

use crate::circle_rep::Generator;
use crate::error::{invalid, Error, Result};
use crate::signal::{LogGrid, RPlusFunction};

/// Agreement required between the 64- and 128-node Laplace quadratures.
pub const LAPLACE_TOLERANCE: f64 = 1e-10;
/// Nodes of the Gauss–Laguerre rule behind Gram matrices and the Laplace transform.
pub const LAGUERRE_NODES: usize = 128;
/// Seed weights above this are trusted as computed.
const TAIL_WEIGHT: f64 = 1e-18;

/// Bargmann index `k` (a half-integer `≥ 1`) and the top mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LaguerreBasisSpec {
    k: f64,
    n_max: usize,
}

impl LaguerreBasisSpec {
    pub fn new(k: f64, n_max: usize) -> Result<Self> {
        let twice = 2.0 * k;
        if !(twice.is_finite() && twice.fract() == 0.0 && twice >= 2.0) {
            return Err(invalid("k", format!("need a half-integer k ≥ 1, got {k}")));
        }
        Ok(Self { k, n_max })
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    /// Casimir label `q = k(k-1)`.
    pub fn q(&self) -> f64 {
        self.k * (self.k - 1.0)
    }

    /// Laguerre parameter `2k - 1`.
    pub fn laguerre_alpha(&self) -> f64 {
        2.0 * self.k - 1.0
    }

    fn check_mode(&self, n: usize) -> Result<()> {
        if n > self.n_max {
            return Err(invalid("n", format!("mode {n} exceeds n_max = {}", self.n_max)));
        }
        Ok(())
    }
}

/// `L_n^α(x)` by the upward three-term recurrence.
pub fn laguerre_poly(n: usize, alpha: f64, x: f64) -> f64 {
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = 1.0 + alpha - x;
    for j in 1..n {
        let jf = j as f64;
        let next = ((2.0 * jf + 1.0 + alpha - x) * cur - (jf + alpha) * prev) / (jf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// `ln N_n^k = ln((n+2k-1)!/n!)`.
pub fn ln_laguerre_norm(spec: &LaguerreBasisSpec, n: usize) -> f64 {
    ln_gamma(n as f64 + 2.0 * spec.k) - ln_gamma(n as f64 + 1.0)
}

/// `φ_n^k(r) = e^{-r/2} r^k L_n^{2k-1}(r) / √N_n^k`.
pub fn laguerre_basis(spec: &LaguerreBasisSpec, n: usize, r: f64) -> Result<f64> {
    spec.check_mode(n)?;
    if !(r > 0.0 && r.is_finite()) {
        return Err(invalid("r", format!("need r > 0, got {r}")));
    }
    Ok(laguerre_value(spec, n, r))
}

fn laguerre_value(spec: &LaguerreBasisSpec, n: usize, r: f64) -> f64 {
    let envelope = (-0.5 * r + spec.k * r.ln() - 0.5 * ln_laguerre_norm(spec, n)).exp();
    envelope * laguerre_poly(n, spec.laguerre_alpha(), r)
}

/// `φ_n^k` as a closed-form function on `grid`.
pub fn laguerre_function(spec: &LaguerreBasisSpec, n: usize, grid: LogGrid) -> Result<RPlusFunction> {
    spec.check_mode(n)?;
    let spec = *spec;
    Ok(RPlusFunction::from_real_fn(grid, move |r| {
        if r > 0.0 {
            laguerre_value(&spec, n, r)
        } else {
            0.0
        }
    }))
}

/// `L_n^α(x)` and `L_{n-1}^α(x)` together, for Newton steps and weights.
fn laguerre_pair(n: usize, alpha: f64, x: f64) -> (f64, f64) {
    let mut prev = 0.0;
    let mut cur = 1.0;
    for j in 0..n {
        let jf = j as f64;
        let next = ((2.0 * jf + 1.0 + alpha - x) * cur - (jf + alpha) * prev) / (jf + 1.0);
        prev = cur;
        cur = next;
    }
    (cur, prev)
}

/// Gauss–Laguerre nodes and weights for `x^α e^{-x}`.
///
/// Nodes come from the Golub–Welsch solver in `gauss_quad` and are polished
/// by Newton steps on `L_n^α`. The eigenvector-based weights carry an absolute
/// error near 1e-33, far above the true tail weights of a 128-node rule, so
/// below [`TAIL_WEIGHT`] they are recomputed as `Γ(n+α+1) / (n! x L_n^α'(x)²)`
/// in log scale. Above it the seed weights are kept: the recurrence loses a
/// few digits to cancellation near the origin.
pub fn laguerre_rule(nodes: usize, alpha: f64) -> Result<Vec<(f64, f64)>> {
    let seed = GaussLaguerre::new(nodes, alpha).map_err(|e| invalid("nodes", e.to_string()))?;
    let nf = nodes as f64;
    let ln_scale = ln_gamma(nf + alpha + 1.0) - ln_gamma(nf + 1.0);
    Ok(seed
        .nodes()
        .zip(seed.weights())
        .map(|(&x0, &w0)| {
            let mut x = x0;
            for _ in 0..3 {
                let (l, lm) = laguerre_pair(nodes, alpha, x);
                // x L_n' = n L_n - (n+α) L_{n-1}
                let dl = (nf * l - (nf + alpha) * lm) / x;
                if dl == 0.0 || !dl.is_finite() {
                    break;
                }
                x -= l / dl;
            }
            if w0 > TAIL_WEIGHT {
                return (x, w0);
            }
            let (_, lm) = laguerre_pair(nodes, alpha, x);
            // at a root, x L_n' = -(n+α) L_{n-1}
            let ln_dl = ((nf + alpha) * lm.abs()).ln() - x.ln();
            let ln_w = ln_scale - x.ln() - 2.0 * ln_dl;
            (x, ln_w.exp())
        })
        .collect())
}

/// `⟨φ_n^k|φ_m^k⟩` for `n, m ≤ n_max` by Gauss–Laguerre quadrature with weight `r^{2k-1}e^{-r}`.
pub fn laguerre_gram(spec: &LaguerreBasisSpec) -> Vec<Vec<f64>> {
    let alpha = spec.laguerre_alpha();
    let rule = laguerre_rule(LAGUERRE_NODES, alpha).expect("valid rule");
    let modes = spec.n_max + 1;
    // φ_n(r)/(e^{-r/2} r^k) at every node.
    let table: Vec<Vec<f64>> = (0..modes)
        .map(|n| {
            let scale = (-0.5 * ln_laguerre_norm(spec, n)).exp();
            rule.iter().map(|&(r, _)| scale * laguerre_poly(n, alpha, r)).collect()
        })
        .collect();
    (0..modes)
        .map(|n| {
            (0..modes)
                .map(|m| {
                    table[n]
                        .iter()
                        .zip(&table[m])
                        .zip(&rule)
                        .map(|((x, y), (_, w))| x * y * w)
                        .sum()
                })
                .collect()
        })
        .collect()
}

/// Generator output with the index range where the interior stencil applies.
#[derive(Debug, Clone)]
pub struct StencilOutput {
    pub function: RPlusFunction,
    /// Nodes computed with the fourth-order centered stencil; the rest use
    /// lower-order one-sided differences and should not be trusted.
    pub trusted: Range<usize>,
}

/// First and second `u`-derivatives on the log grid `u = ln r`.
fn log_derivatives(values: &[Complex64], h: f64) -> (Vec<Complex64>, Vec<Complex64>) {
    let n = values.len();
    let mut d1 = vec![Complex64::new(0.0, 0.0); n];
    let mut d2 = vec![Complex64::new(0.0, 0.0); n];
    let v = values;
    for j in 0..n {
        if j >= 2 && j + 2 < n {
            d1[j] = (v[j - 2] - 8.0 * v[j - 1] + 8.0 * v[j + 1] - v[j + 2]) / (12.0 * h);
            d2[j] = (-v[j - 2] + 16.0 * v[j - 1] - 30.0 * v[j] + 16.0 * v[j + 1] - v[j + 2]) / (12.0 * h * h);
        } else if j >= 1 && j + 1 < n {
            d1[j] = (v[j + 1] - v[j - 1]) / (2.0 * h);
            d2[j] = (v[j + 1] - 2.0 * v[j] + v[j - 1]) / (h * h);
        } else if j == 0 {
            d1[j] = (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * h);
            d2[j] = (2.0 * v[0] - 5.0 * v[1] + 4.0 * v[2] - v[3]) / (h * h);
        } else {
            d1[j] = (3.0 * v[j] - 4.0 * v[j - 1] + v[j - 2]) / (2.0 * h);
            d2[j] = (2.0 * v[j] - 5.0 * v[j - 1] + 4.0 * v[j - 2] - v[j - 3]) / (h * h);
        }
    }
    (d1, d2)
}

/// Apply `𝒳_a`, `𝒳_b` or `𝒳_θ` by finite differences in `ln r`.
pub fn rplus_generators(which: Generator, f: &RPlusFunction, spec: &LaguerreBasisSpec) -> Result<StencilOutput> {
    let grid = f.grid();
    let n = grid.len();
    if n < 5 {
        return Err(invalid("f", "need at least five nodes for the stencil"));
    }
    let (d1, d2) = log_derivatives(f.values(), grid.log_step());
    let q = spec.q();
    let i = Complex64::i();
    let values = grid
        .nodes()
        .enumerate()
        .map(|(j, r)| {
            let v = f.values()[j];
            match which {
                Generator::A => i * d1[j],
                Generator::B => v * (0.5 * r),
                // 2r d²/dr² = (2/r)(d²/du² - d/du)
                Generator::Theta => (d2[j] - d1[j]) * (2.0 / r) - v * (0.5 * r + 2.0 * q / r),
            }
        })
        .collect();
    Ok(StencilOutput {
        function: RPlusFunction::from_samples(grid, values)?,
        trusted: 2..n - 2,
    })
}

/// Point of the right half-plane `Re(w) > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalfPlanePoint {
    w: Complex64,
}

impl HalfPlanePoint {
    pub fn new(w: Complex64) -> Result<Self> {
        if !(w.re > 0.0 && w.re.is_finite() && w.im.is_finite()) {
            return Err(invalid("w", format!("need Re(w) > 0, got {w}")));
        }
        Ok(Self { w })
    }

    pub fn w(&self) -> Complex64 {
        self.w
    }
}

/// `ln M_n^k = ln(π n!(2k-2)! / (2^{4k-2}(2k+n-1)!))`.
pub fn ln_halfplane_norm(spec: &LaguerreBasisSpec, n: usize) -> f64 {
    let k = spec.k;
    PI.ln() + ln_gamma(n as f64 + 1.0) + ln_gamma(2.0 * k - 1.0)
        - (4.0 * k - 2.0) * 2f64.ln()
        - ln_gamma(2.0 * k + n as f64)
}

/// `φ_n^k(w) = Re(w)^k (1+w)^{-2k} ((w-1)/(w+1))^n / √M_n^k`.
pub fn halfplane_basis(spec: &LaguerreBasisSpec, n: usize, w: HalfPlanePoint) -> Result<Complex64> {
    spec.check_mode(n)?;
    Ok(halfplane_value(spec, n, w.w))
}

fn halfplane_value(spec: &LaguerreBasisSpec, n: usize, w: Complex64) -> Complex64 {
    let one = Complex64::new(1.0, 0.0);
    let z = (w - one) / (w + one);
    let scale = (spec.k * w.re.ln() - 0.5 * ln_halfplane_norm(spec, n)).exp();
    scale * (one + w).powf(-2.0 * spec.k) * z.powu(n as u32)
}

/// `⟨φ_n^k|φ_m^k⟩` on the half-plane with the measure `Re(w)^{-2} da db`.
///
/// The half-plane is compactified by `a = s/(1-s)`, `b = (1+a) tan ϕ`; the
/// Jacobian then cancels the algebraic decay and a tensor Gauss–Legendre
/// rule of `order × order` nodes converges fast.
pub fn halfplane_gram(spec: &LaguerreBasisSpec, order: usize) -> Result<Vec<Vec<Complex64>>> {
    let rule = GaussLegendre::new(order).map_err(|_| invalid("order", "need at least two nodes"))?;
    let modes = spec.n_max + 1;
    let mut gram = vec![vec![Complex64::new(0.0, 0.0); modes]; modes];
    let pairs = rule.as_node_weight_pairs();
    for &(xs, ws) in pairs {
        let s = 0.5 * (xs + 1.0);
        let a = s / (1.0 - s);
        let da = 0.5 * ws / ((1.0 - s) * (1.0 - s));
        for &(xp, wp) in pairs {
            let phi = 0.5 * PI * xp;
            let b = (1.0 + a) * phi.tan();
            let db = 0.5 * PI * wp * (1.0 + a) / (phi.cos() * phi.cos());
            let weight = da * db / (a * a);
            let w = Complex64::new(a, b);
            let values: Vec<Complex64> = (0..modes).map(|n| halfplane_value(spec, n, w)).collect();
            for n in 0..modes {
                for m in 0..modes {
                    gram[n][m] += values[n].conj() * values[m] * weight;
                }
            }
        }
    }
    Ok(gram)
}

/// `⟨w|r⟩ = Re(w)^k r^k e^{-rw/2} / (2√(π(2k-2)!))`.
pub fn laplace_kernel(spec: &LaguerreBasisSpec, w: HalfPlanePoint, r: f64) -> Result<Complex64> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(invalid("r", format!("need r > 0, got {r}")));
    }
    let w = w.w;
    let ln_mag = spec.k * (w.re * r).ln() - 0.5 * r * w.re - 0.5 * (PI.ln() + ln_gamma(2.0 * spec.k - 1.0)) - 2f64.ln();
    Ok(Complex64::from_polar(ln_mag.exp(), -0.5 * r * w.im))
}

/// `Σ_{n ≤ n_max} φ_n^k(w) φ_n^k(r)`, which converges to the kernel.
pub fn laplace_kernel_partial_sum(spec: &LaguerreBasisSpec, w: HalfPlanePoint, r: f64) -> Result<Complex64> {
    (0..=spec.n_max)
        .map(|n| Ok(halfplane_basis(spec, n, w)? * laguerre_basis(spec, n, r)?))
        .sum()
}

fn laplace_quadrature(f: &crate::signal::Evaluator, spec: &LaguerreBasisSpec, w: Complex64, nodes: usize) -> Result<Complex64> {
    let k = spec.k;
    let rule = laguerre_rule(nodes, 2.0 * k - 1.0)?;
    // t = r Re(w)/2 turns r^{2k-1} e^{-r Re(w)/2} dr into (2/Re w)^{2k} t^{2k-1} e^{-t} dt;
    // the remaining factor is f(r)/r^k, smooth at the origin for the discrete series.
    let ln_pre = k * w.re.ln() + 2.0 * k * (2.0 / w.re).ln() - 0.5 * (PI.ln() + ln_gamma(2.0 * k - 1.0)) - 2f64.ln();
    let ratio = w.im / w.re;
    let sum: Complex64 = rule
        .iter()
        .map(|&(t, wt)| {
            let r = 2.0 * t / w.re;
            Complex64::from_polar(wt, -t * ratio) * f(r) * r.powf(-k)
        })
        .sum();
    Ok(sum * ln_pre.exp())
}

/// `∫₀^∞ (dr/r) ⟨w|r⟩ f(r)` by Gauss–Laguerre quadrature in `t = r Re(w)/2`.
///
/// Fails when the 64- and 128-node rules disagree by more than
/// [`LAPLACE_TOLERANCE`] (relative to `max(1, |result|)`).
pub fn laplace_transform(f: &RPlusFunction, spec: &LaguerreBasisSpec, w: HalfPlanePoint) -> Result<Complex64> {
    let eval = f.value_fn();
    let fine = laplace_quadrature(&eval, spec, w.w, LAGUERRE_NODES)?;
    let coarse = laplace_quadrature(&eval, spec, w.w, LAGUERRE_NODES / 2)?;
    let difference = (fine - coarse).norm();
    if difference > LAPLACE_TOLERANCE * fine.norm().max(1.0) {
        return Err(Error::NonConvergent { difference });
    }
    Ok(fine)
}

//! SL(2,R) arithmetic in Iwasawa coordinates.
//!
//! An element is written `g = K(θ)·A(a)·N(b)` with
//!
//! ```text
//! K(θ) = [[cos θ, -sin θ], [sin θ, cos θ]],  A(a) = diag(1/√a, √a),  N(b) = [[1, b], [0, 1]]
//! ```
//!
//! Composition is done directly on the parameters; the 2×2 matrix picture is
//! kept alongside as the reference the parameter formulas are checked against.

use std::f64::consts::PI;
use std::ops::Mul;

use crate::error::{invalid, Error, Result};

/// Tolerance on `|det - 1|` accepted by [`iwasawa_decompose`].
pub const DET_TOLERANCE: f64 = 1e-8;

/// Reduce an angle to `(-π, π]`.
pub fn reduce_angle(theta: f64) -> f64 {
    if theta > -PI && theta <= PI {
        return theta;
    }
    let r = theta - 2.0 * PI * (theta / (2.0 * PI)).round();
    if r <= -PI {
        r + 2.0 * PI
    } else if r > PI {
        r - 2.0 * PI
    } else {
        r
    }
}

/// Iwasawa parameters `(a, b, θ)` of an SL(2,R) element.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroupElement {
    a: f64,
    b: f64,
    theta: f64,
}

impl GroupElement {
    pub fn new(a: f64, b: f64, theta: f64) -> Result<Self> {
        if !(a.is_finite() && a > 0.0) {
            return Err(invalid("a", format!("dilation must be positive and finite, got {a}")));
        }
        if !b.is_finite() || !theta.is_finite() {
            return Err(invalid("b/theta", "translation and angle must be finite"));
        }
        Ok(Self {
            a,
            b,
            theta: reduce_angle(theta),
        })
    }

    pub const fn identity() -> Self {
        Self {
            a: 1.0,
            b: 0.0,
            theta: 0.0,
        }
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn matrix(&self) -> Sl2Matrix {
        matrix(self)
    }

    pub fn inverse(&self) -> Self {
        inverse(self)
    }

    /// Largest parameter difference, with the angle compared on the circle.
    pub fn distance(&self, other: &Self) -> f64 {
        let da = (self.a - other.a).abs();
        let db = (self.b - other.b).abs();
        let dt = reduce_angle(self.theta - other.theta).abs();
        da.max(db).max(dt)
    }
}

impl Mul for GroupElement {
    type Output = GroupElement;

    fn mul(self, rhs: GroupElement) -> GroupElement {
        compose(&self, &rhs)
    }
}

/// A real 2×2 matrix, expected to have unit determinant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sl2Matrix {
    pub m11: f64,
    pub m12: f64,
    pub m21: f64,
    pub m22: f64,
}

impl Sl2Matrix {
    pub const IDENTITY: Sl2Matrix = Sl2Matrix {
        m11: 1.0,
        m12: 0.0,
        m21: 0.0,
        m22: 1.0,
    };

    pub fn new(m11: f64, m12: f64, m21: f64, m22: f64) -> Self {
        Self { m11, m12, m21, m22 }
    }

    pub fn det(&self) -> f64 {
        self.m11 * self.m22 - self.m12 * self.m21
    }

    /// Inverse assuming unit determinant.
    pub fn adjugate(&self) -> Self {
        Self::new(self.m22, -self.m12, -self.m21, self.m11)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        [
            self.m11 - other.m11,
            self.m12 - other.m12,
            self.m21 - other.m21,
            self.m22 - other.m22,
        ]
        .iter()
        .fold(0.0_f64, |acc, d| acc.max(d.abs()))
    }
}

impl Mul for Sl2Matrix {
    type Output = Sl2Matrix;

    fn mul(self, r: Sl2Matrix) -> Sl2Matrix {
        Sl2Matrix::new(
            self.m11 * r.m11 + self.m12 * r.m21,
            self.m11 * r.m12 + self.m12 * r.m22,
            self.m21 * r.m11 + self.m22 * r.m21,
            self.m21 * r.m12 + self.m22 * r.m22,
        )
    }
}

/// Element of the affine group `b ↦ b + a·b'`, `a ↦ a'·a`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffineElement {
    a: f64,
    b: f64,
}

impl AffineElement {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a.is_finite() && a > 0.0) {
            return Err(invalid("a", format!("dilation must be positive and finite, got {a}")));
        }
        if !b.is_finite() {
            return Err(invalid("b", "translation must be finite"));
        }
        Ok(Self { a, b })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    /// `self · rhs` under the affine law `a'' = a'a`, `b'' = b + a b'`.
    pub fn compose(&self, rhs: &AffineElement) -> AffineElement {
        AffineElement {
            a: self.a * rhs.a,
            b: rhs.b + rhs.a * self.b,
        }
    }
}

/// `g'' = g'·g` from the closed-form parameter law.
///
/// The arctangent in the angle law only fixes `θ''` modulo π. The pair
/// `(den, num)` is a positive multiple of the first column of the product
/// matrix, so `atan2(num, den)` selects the branch that matches it.
pub fn compose(gp: &GroupElement, g: &GroupElement) -> GroupElement {
    let (a1, b1, t1) = (gp.a, gp.b, gp.theta);
    let (a, b, t) = (g.a, g.b, g.theta);
    let (s, c) = t.sin_cos();
    let (s1, c1) = t1.sin_cos();
    let (s2, c2) = (s * s, c * c);

    let denom = c2 + (a1 * a1 + b1 * b1) * s2 + b1 * (2.0 * s * c);
    let a_new = a * a1 / denom;
    let b_new = ((b + a * b1) * c2
        + (2.0 * b * b1 + a * (-1.0 + a1 * a1 + b1 * b1)) * c * s
        + (a1 * a1 * b + b1 * (-a + b * b1)) * s2)
        / denom;
    let num = a1 * c1 * s + (c + b1 * s) * s1;
    let den = c * c1 + s * (b1 * c1 - a1 * s1);

    GroupElement {
        a: a_new,
        b: b_new,
        theta: reduce_angle(num.atan2(den)),
    }
}

pub fn inverse(g: &GroupElement) -> GroupElement {
    // θ-rotation, dilation and translation inverted in reverse order:
    // g⁻¹ = N(-b) A(1/a) K(-θ), re-expressed in K·A·N form.
    let n_inv = GroupElement {
        a: 1.0,
        b: -g.b,
        theta: 0.0,
    };
    let a_inv = GroupElement {
        a: 1.0 / g.a,
        b: 0.0,
        theta: 0.0,
    };
    let k_inv = GroupElement {
        a: 1.0,
        b: 0.0,
        theta: reduce_angle(-g.theta),
    };
    compose(&compose(&n_inv, &a_inv), &k_inv)
}

pub fn matrix(g: &GroupElement) -> Sl2Matrix {
    let (s, c) = g.theta.sin_cos();
    let sa = g.a.sqrt();
    Sl2Matrix::new(
        c / sa,
        g.b * c / sa - sa * s,
        s / sa,
        sa * c + g.b * s / sa,
    )
}

/// Recover `(a, b, θ)` from a unimodular matrix.
///
/// The first column is `(cos θ, sin θ)/√a`, which fixes `a` and `θ`; `b`
/// follows from projecting the second column on the same direction.
pub fn iwasawa_decompose(m: &Sl2Matrix) -> Result<GroupElement> {
    let det = m.det();
    if !det.is_finite() || (det - 1.0).abs() > DET_TOLERANCE {
        return Err(Error::NotUnimodular { det });
    }
    let r2 = m.m11 * m.m11 + m.m21 * m.m21;
    let a = 1.0 / r2;
    let theta = m.m21.atan2(m.m11);
    let (s, c) = theta.sin_cos();
    let b = a.sqrt() * (m.m12 * c + m.m22 * s);
    GroupElement::new(a, b, theta)
}

/// Density of the Haar measure `da db dθ / a²` relative to `da db dθ`.
pub fn haar_weight(g: &GroupElement) -> f64 {
    1.0 / (g.a * g.a)
}

/// The section `σ(a, b) = (a, b, θ = 0)`.
pub fn affine_embed(h: &AffineElement) -> GroupElement {
    GroupElement {
        a: h.a,
        b: h.b,
        theta: 0.0,
    }
}

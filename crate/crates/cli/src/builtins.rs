//! Named wavelets and test signals.

use std::f64::consts::PI;
use std::str::FromStr;

use anyhow::{anyhow, bail, Result};
use circlet_core::circle_cwt::{lifted_gaussian, make_dog};
use circlet_core::euclid::{smooth_bump, stereo_lift};
use circlet_core::line_cwt::mexican_hat_fn;
use circlet_core::{CircleGrid, CircleSignal, LineGrid, LineSignal};
use num_complex::Complex64;

/// Circle wavelets and signals available by name.
#[derive(Debug, Clone, PartialEq)]
pub enum CircleBuiltin {
    /// `dog:α[:balanced]`
    Dog { alpha: f64, balanced: bool },
    /// `e^{-tan²θ}`
    Gaussian,
    Constant,
    /// Mexican hat lifted from the line.
    MexicanHat,
    /// `cos 2θ + 0.3 sin 4θ`
    BandLimited,
    /// `e^{2inθ}/√π`
    Mode(i64),
}

impl FromStr for CircleBuiltin {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        match parts.as_slice() {
            ["gaussian"] => Ok(Self::Gaussian),
            ["constant"] => Ok(Self::Constant),
            ["mexican-hat"] => Ok(Self::MexicanHat),
            ["band-limited"] => Ok(Self::BandLimited),
            ["mode", n] => Ok(Self::Mode(n.parse().map_err(|_| anyhow!("bad mode index {n:?}"))?)),
            ["dog", alpha, rest @ ..] => {
                let alpha: f64 = alpha.parse().map_err(|_| anyhow!("bad DoG scale {alpha:?}"))?;
                let balanced = match rest {
                    [] => false,
                    ["balanced"] => true,
                    _ => bail!("expected `dog:α` or `dog:α:balanced`, got {s:?}"),
                };
                Ok(Self::Dog { alpha, balanced })
            }
            _ => bail!("unknown builtin {s:?}"),
        }
    }
}

impl CircleBuiltin {
    pub fn build(&self, n_samples: usize) -> Result<CircleSignal> {
        let grid = CircleGrid::new(n_samples)?;
        Ok(match *self {
            Self::Dog { alpha, balanced } => make_dog(grid, alpha, balanced)?,
            Self::Gaussian => lifted_gaussian(grid),
            Self::Constant => CircleSignal::from_real_fn(grid, |_| 1.0),
            Self::MexicanHat => {
                let line = LineSignal::from_real_fn(LineGrid::symmetric(40.0, 1024)?, mexican_hat_fn);
                stereo_lift(&line, grid)?
            }
            Self::BandLimited => CircleSignal::from_real_fn(grid, |t| (2.0 * t).cos() + 0.3 * (4.0 * t).sin()),
            Self::Mode(n) => CircleSignal::from_fn(grid, move |t| Complex64::from_polar(1.0 / PI.sqrt(), 2.0 * n as f64 * t)),
        })
    }
}

/// Line signals available by name.
#[derive(Debug, Clone, PartialEq)]
pub enum LineBuiltin {
    /// `e^{-x²/8} cos(6x + 0.2x²)`
    Chirp,
    /// Smooth bump on `(-1, 1)`.
    Bump,
    MexicanHat,
}

impl FromStr for LineBuiltin {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "chirp" => Ok(Self::Chirp),
            "bump" => Ok(Self::Bump),
            "mexican-hat" => Ok(Self::MexicanHat),
            _ => bail!("unknown line builtin {s:?}"),
        }
    }
}

impl LineBuiltin {
    pub fn build(&self, grid: LineGrid) -> LineSignal {
        match self {
            Self::Chirp => LineSignal::from_real_fn(grid, |x| (-x * x / 8.0).exp() * (6.0 * x + 0.2 * x * x).cos()),
            Self::Bump => LineSignal::from_real_fn(grid, smooth_bump(0.0, 1.0)),
            Self::MexicanHat => LineSignal::from_real_fn(grid, mexican_hat_fn),
        }
    }
}

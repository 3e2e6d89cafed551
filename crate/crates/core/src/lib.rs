//! Wavelet transforms built on the unitary representations of SL(2,R).
//!
//! The continuous series acts on functions of the half-circle, the discrete
//! series on functions of the half-line and the right half-plane. Scaling the
//! circle radius recovers the affine wavelet transform on the line.

pub mod circle_cwt;
pub mod circle_rep;
pub mod discrete_series;
pub mod error;
pub mod euclid;
pub mod line_cwt;
pub mod signal;
pub mod sl2r;
pub mod spectral;

pub use error::{Error, Result};
pub use signal::{CircleGrid, CircleSignal, Evaluator, LineGrid, LineSignal, LogGrid, RPlusFunction};
pub use sl2r::{AffineElement, GroupElement, Sl2Matrix};

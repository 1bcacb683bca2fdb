//! Dense complex linear algebra for the small matrices this crate works with.
//!
//! Everything here is sized for a qubit register tensored with a qudit of
//! dimension at most a few dozen, so matrices are plain row-major `Vec`s and
//! all operations allocate their result.

mod eigen;
mod matrix;
mod ops;
mod state;

pub use eigen::{eig_hermitian, EigenDecomposition};
pub use matrix::CMatrix;
pub use ops::{fourier_matrix, partial_trace, schmidt_coefficients, trace_norm_hermitian, Keep};
pub use state::PureState;

/// Complex scalar used throughout the crate.
pub type Complex = num_complex::Complex64;

/// Absolute tolerance used for Hermiticity checks.
pub const HERMITIAN_TOL: f64 = 1e-12;

#[cfg(test)]
pub(crate) fn c(re: f64, im: f64) -> Complex {
    Complex::new(re, im)
}

/// `exp(i * theta)`.
#[inline]
pub fn cis(theta: f64) -> Complex {
    Complex::from_polar(1.0, theta)
}

pub(crate) fn check_finite(z: Complex, what: &'static str) -> crate::Result<()> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(())
    } else {
        Err(crate::Error::NonFinite(what))
    }
}

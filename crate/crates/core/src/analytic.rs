//! Closed-form guessing probabilities and optimal inputs.

use std::f64::consts::FRAC_1_SQRT_2;

use crate::game::{check_unit_interval, phi_jl, validate_density_matrix, STATE_TOL};
use crate::linalg::{CMatrix, Complex, PureState};
use crate::{Error, Result};

/// Optimal guessing probability for `d = 2`: `½(1 + √(2 + 2γ²)/2)`.
pub fn pguess_max_d2(gamma: f64) -> Result<f64> {
    check_unit_interval(gamma)?;
    Ok(0.5 * (1.0 + (2.0 + 2.0 * gamma * gamma).sqrt() / 2.0))
}

/// Optimal guessing probability without coherence: `½(1 + 1/√d)`.
pub fn pguess_max_gamma0(d: usize) -> Result<f64> {
    if d < 2 {
        return Err(Error::InvalidParameter(format!("d must be >= 2, got {d}")));
    }
    let df = d as f64;
    // written as √d/d so d = 2 agrees bit for bit with pguess_max_d2(0)
    Ok(0.5 * (1.0 + df.sqrt() / df))
}

/// All `d²` inputs `φ_jl`, ordered by `j` then `l`.
pub fn optimal_states_gamma0(d: usize) -> Result<Vec<PureState>> {
    let mut out = Vec::with_capacity(d * d);
    for j in 0..d {
        for l in 0..d {
            out.push(phi_jl(d, j, l)?);
        }
    }
    Ok(out)
}

/// Qubit state `½(I + c·σ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochVector {
    pub cx: f64,
    pub cy: f64,
    pub cz: f64,
}

impl BlochVector {
    pub fn new(cx: f64, cy: f64, cz: f64) -> Result<Self> {
        let v = BlochVector { cx, cy, cz };
        if !(cx.is_finite() && cy.is_finite() && cz.is_finite()) {
            return Err(Error::NonFinite("Bloch vector"));
        }
        if v.norm() > 1.0 + 1e-12 {
            return Err(Error::InvalidState(format!("Bloch vector has length {}", v.norm())));
        }
        Ok(v)
    }

    pub fn norm(&self) -> f64 {
        (self.cx * self.cx + self.cy * self.cy + self.cz * self.cz).sqrt()
    }

    pub fn density_matrix(&self) -> CMatrix {
        let mut m = CMatrix::zeros(2, 2);
        m[(0, 0)] = Complex::new(0.5 * (1.0 + self.cz), 0.0);
        m[(1, 1)] = Complex::new(0.5 * (1.0 - self.cz), 0.0);
        m[(0, 1)] = Complex::new(0.5 * self.cx, -0.5 * self.cy);
        m[(1, 0)] = Complex::new(0.5 * self.cx, 0.5 * self.cy);
        m
    }

    /// State vector for a vector on the sphere.
    pub fn pure_state(&self) -> Result<PureState> {
        if (self.norm() - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidState(format!(
                "Bloch vector of length {} is not pure",
                self.norm()
            )));
        }
        if self.cz < -1.0 + 1e-12 {
            return PureState::basis(2, 1);
        }
        PureState::normalized(vec![
            Complex::new(1.0 + self.cz, 0.0),
            Complex::new(self.cx, self.cy),
        ])
    }
}

/// The continuous optimal set at `γ = 1`: `(sin θ, ±√cos 2θ, -sin θ)` for
/// `θ ∈ [-π/4, π/4]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FullCoherenceFamily;

impl FullCoherenceFamily {
    pub const THETA_MAX: f64 = std::f64::consts::FRAC_PI_4;

    /// Member at angle `theta`; `upper` picks the sign of the `y` component.
    pub fn member(&self, theta: f64, upper: bool) -> Result<BlochVector> {
        if theta.is_nan() || theta.abs() > Self::THETA_MAX + 1e-15 {
            return Err(Error::InvalidParameter(format!("theta must lie in [-π/4, π/4], got {theta}")));
        }
        let s = theta.sin();
        let y = (2.0 * theta).cos().max(0.0).sqrt();
        BlochVector::new(s, if upper { y } else { -y }, -s)
    }

    /// `n` evenly spaced angles on each branch.
    pub fn sample(&self, n: usize) -> Vec<BlochVector> {
        let mut out = Vec::with_capacity(2 * n);
        for k in 0..n {
            let t = if n == 1 {
                0.0
            } else {
                -Self::THETA_MAX + 2.0 * Self::THETA_MAX * k as f64 / (n - 1) as f64
            };
            for upper in [true, false] {
                out.push(self.member(t, upper).expect("angle inside range"));
            }
        }
        out
    }
}

/// Optimal pure inputs for the `d = 2` game.
#[derive(Debug, Clone, PartialEq)]
pub enum OptimalSetD2 {
    Discrete(Vec<BlochVector>),
    Family(FullCoherenceFamily),
}

pub fn optimal_states_d2(gamma: f64) -> Result<OptimalSetD2> {
    check_unit_interval(gamma)?;
    let h = FRAC_1_SQRT_2;
    if gamma == 1.0 {
        return Ok(OptimalSetD2::Family(FullCoherenceFamily));
    }
    let mut set = vec![BlochVector { cx: h, cy: 0.0, cz: -h }, BlochVector { cx: -h, cy: 0.0, cz: h }];
    if gamma == 0.0 {
        set.push(BlochVector { cx: h, cy: 0.0, cz: h });
        set.push(BlochVector { cx: -h, cy: 0.0, cz: -h });
    }
    Ok(OptimalSetD2::Discrete(set))
}

/// `½(1 + √Tr ρ_R²)` for a register state with equal diagonal.
pub fn pguess_from_purity(rho_r: &CMatrix) -> Result<f64> {
    validate_density_matrix(rho_r, 2)?;
    if (rho_r[(0, 0)].re - rho_r[(1, 1)].re).abs() > STATE_TOL {
        return Err(Error::InvalidDensityMatrix(
            "register state must have equal diagonal entries".into(),
        ));
    }
    let purity = rho_r.inner(rho_r).re;
    Ok(0.5 * (1.0 + purity.sqrt()))
}

/// `-log₂ p`.
pub fn min_entropy_of(p: f64) -> Result<f64> {
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::InvalidParameter(format!("probability must lie in (0, 1], got {p}")));
    }
    Ok(-p.log2())
}

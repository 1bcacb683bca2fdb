//! States produced by the game circuit.
//!
//! Register `R` starts in `ρ_R(γ) = ½(|0⟩⟨0| + |1⟩⟨1| + γ*|0⟩⟨1| + γ|1⟩⟨0|)`,
//! Alice applies `U = |0⟩⟨0| ⊗ I + |1⟩⟨1| ⊗ F` to `R ⊗ B` and measures `B` in
//! the standard basis. Outcome `x` leaves `R` in the subnormalised state
//!
//! ```text
//! ρ̃ˣ = ½ [ ⟨x|ρ_B|x⟩        γ*⟨x|ρ_B F†|x⟩ ]
//!        [ γ⟨x|F ρ_B|x⟩     ⟨x|F ρ_B F†|x⟩ ]
//! ```
//!
//! which is what Bob has to discriminate.

use crate::linalg::{
    eig_hermitian, fourier_matrix, schmidt_coefficients, CMatrix, Complex, PureState,
};
use crate::{Error, Result};

/// Validation tolerance for density matrices and ensembles.
pub const STATE_TOL: f64 = 1e-10;

/// One game instance: outcome count `d` and register coherence `γ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GameConfig {
    d: usize,
    gamma: Complex,
}

impl GameConfig {
    /// Real coherence `γ ∈ [0, 1]`, the only case the main API needs.
    pub fn new(d: usize, gamma: f64) -> Result<Self> {
        check_dim(d)?;
        check_unit_interval(gamma)?;
        Ok(GameConfig {
            d,
            gamma: Complex::new(gamma, 0.0),
        })
    }

    /// Complex coherence with `|γ| ≤ 1`; only the phase-invariance checks use this.
    pub fn with_complex_gamma(d: usize, gamma: Complex) -> Result<Self> {
        check_dim(d)?;
        check_gamma_modulus(gamma)?;
        Ok(GameConfig { d, gamma })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn gamma(&self) -> Complex {
        self.gamma
    }
}

fn check_dim(d: usize) -> Result<()> {
    if d < 2 {
        return Err(Error::InvalidParameter(format!("game dimension must be >= 2, got {d}")));
    }
    Ok(())
}

pub(crate) fn check_unit_interval(gamma: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&gamma) {
        return Err(Error::InvalidParameter(format!("gamma must lie in [0, 1], got {gamma}")));
    }
    Ok(())
}

fn check_gamma_modulus(gamma: Complex) -> Result<()> {
    crate::linalg::check_finite(gamma, "gamma")?;
    if gamma.norm() > 1.0 + 1e-12 {
        return Err(Error::InvalidParameter(format!("|gamma| must be <= 1, got {}", gamma.norm())));
    }
    Ok(())
}

/// The `d` subnormalised post-measurement states of `R`, indexed by outcome.
#[derive(Debug, Clone)]
pub struct Ensemble {
    states: Vec<CMatrix>,
}

impl Ensemble {
    /// Checks each member is a 2x2 Hermitian PSD matrix and that the traces sum to one.
    pub fn new(states: Vec<CMatrix>) -> Result<Self> {
        if states.is_empty() {
            return Err(Error::InvalidEnsemble("no states".into()));
        }
        let mut total = 0.0;
        for (x, s) in states.iter().enumerate() {
            if s.rows() != 2 || s.cols() != 2 {
                return Err(Error::InvalidEnsemble(format!(
                    "state {x} is {}x{}, expected 2x2",
                    s.rows(),
                    s.cols()
                )));
            }
            let dev = s.hermitian_deviation();
            if dev > STATE_TOL {
                return Err(Error::InvalidEnsemble(format!(
                    "state {x} is not Hermitian (deviation {dev:e})"
                )));
            }
            let min = eig_hermitian(&s.hermitian_part())?.min_eigenvalue();
            if min < -STATE_TOL {
                return Err(Error::InvalidEnsemble(format!(
                    "state {x} has negative eigenvalue {min:e}"
                )));
            }
            total += s.trace().re;
        }
        if (total - 1.0).abs() > STATE_TOL {
            return Err(Error::InvalidEnsemble(format!("traces sum to {total}, expected 1")));
        }
        Ok(Ensemble { states })
    }

    /// Number of outcomes.
    pub fn d(&self) -> usize {
        self.states.len()
    }

    pub fn states(&self) -> &[CMatrix] {
        &self.states
    }

    /// Outcome probabilities `p_x = Tr ρ̃ˣ`.
    pub fn probabilities(&self) -> Vec<f64> {
        self.states.iter().map(|s| s.trace().re).collect()
    }

    /// `Σ_x ρ̃ˣ`, the reduced state of `R` after the measurement.
    pub fn average(&self) -> CMatrix {
        self.states
            .iter()
            .skip(1)
            .fold(self.states[0].clone(), |acc, s| &acc + s)
    }

    /// The classical-quantum state `Σ_x ρ̃ˣ ⊗ |x⟩⟨x|` on `R ⊗ X`.
    pub fn cq_state(&self) -> CMatrix {
        let d = self.d();
        let mut out = CMatrix::zeros(2 * d, 2 * d);
        for (x, s) in self.states.iter().enumerate() {
            for a in 0..2 {
                for b in 0..2 {
                    out[(a * d + x, b * d + x)] = s[(a, b)];
                }
            }
        }
        out
    }
}

/// `ρ_R(γ) = ½[[1, γ*], [γ, 1]]`.
pub fn register_state(gamma: Complex) -> Result<CMatrix> {
    check_gamma_modulus(gamma)?;
    let half = Complex::new(0.5, 0.0);
    CMatrix::from_rows(&[[half, gamma.conj() * 0.5], [gamma * 0.5, half]])
}

/// Controlled Fourier transform `|0⟩⟨0| ⊗ I + |1⟩⟨1| ⊗ F` on `R ⊗ B`.
pub fn controlled_fourier(d: usize) -> Result<CMatrix> {
    let f = fourier_matrix(d)?;
    let mut u = CMatrix::zeros(2 * d, 2 * d);
    for i in 0..d {
        u[(i, i)] = Complex::new(1.0, 0.0);
        for j in 0..d {
            u[(d + i, d + j)] = f[(i, j)];
        }
    }
    Ok(u)
}

/// Checks Hermiticity, unit trace and positivity within [`STATE_TOL`].
pub fn validate_density_matrix(rho: &CMatrix, dim: usize) -> Result<()> {
    if rho.rows() != dim || rho.cols() != dim {
        return Err(Error::DimensionMismatch(format!(
            "expected a {dim}x{dim} density matrix, got {}x{}",
            rho.rows(),
            rho.cols()
        )));
    }
    let dev = rho.hermitian_deviation();
    if dev > STATE_TOL {
        return Err(Error::InvalidDensityMatrix(format!("not Hermitian (deviation {dev:e})")));
    }
    let tr = rho.trace();
    if (tr.re - 1.0).abs() > STATE_TOL || tr.im.abs() > STATE_TOL {
        return Err(Error::InvalidDensityMatrix(format!("trace is {tr}, expected 1")));
    }
    let min = eig_hermitian(&rho.hermitian_part())?.min_eigenvalue();
    if min < -STATE_TOL {
        return Err(Error::InvalidDensityMatrix(format!("negative eigenvalue {min:e}")));
    }
    Ok(())
}

/// Joint state of `R ⊗ B` just before Alice's measurement.
pub fn joint_state_t2(config: &GameConfig, rho_b: &CMatrix) -> Result<CMatrix> {
    validate_density_matrix(rho_b, config.d)?;
    let rho = register_state(config.gamma)?.kron(rho_b);
    Ok(rho.conjugate_by(&controlled_fourier(config.d)?)?.hermitian_part())
}

/// Post-measurement ensemble for a pure input `|φ⟩`.
pub fn ensemble(config: &GameConfig, phi: &PureState) -> Result<Ensemble> {
    let d = config.d;
    if phi.dim() != d {
        return Err(Error::DimensionMismatch(format!(
            "input state has dimension {}, game has d = {d}",
            phi.dim()
        )));
    }
    let f_phi = fourier_matrix(d)?.apply(phi.amplitudes())?;
    let g = config.gamma;
    let states = phi
        .amplitudes()
        .iter()
        .zip(&f_phi)
        .map(|(&a, &b)| {
            let off = g.conj() * a * b.conj() * 0.5;
            let mut m = CMatrix::zeros(2, 2);
            m[(0, 0)] = Complex::new(a.norm_sqr() * 0.5, 0.0);
            m[(0, 1)] = off;
            m[(1, 0)] = off.conj();
            m[(1, 1)] = Complex::new(b.norm_sqr() * 0.5, 0.0);
            m
        })
        .collect();
    Ok(Ensemble { states })
}

/// Post-measurement ensemble for a mixed input `ρ_B`.
pub fn ensemble_mixed(config: &GameConfig, rho_b: &CMatrix) -> Result<Ensemble> {
    let d = config.d;
    validate_density_matrix(rho_b, d)?;
    let f = fourier_matrix(d)?;
    let f_rho = &f * rho_b;
    let rho_fd = rho_b * &f.adjoint();
    let f_rho_fd = &f_rho * &f.adjoint();
    let g = config.gamma;
    let states = (0..d)
        .map(|x| {
            let off = g.conj() * rho_fd[(x, x)] * 0.5;
            let mut m = CMatrix::zeros(2, 2);
            m[(0, 0)] = Complex::new(rho_b[(x, x)].re * 0.5, 0.0);
            m[(0, 1)] = off;
            m[(1, 0)] = off.conj();
            m[(1, 1)] = Complex::new(f_rho_fd[(x, x)].re * 0.5, 0.0);
            m
        })
        .collect();
    Ok(Ensemble { states })
}

/// `γ = ⟨α|β⟩^{n-j}` when `j` of `n` environment qubits sit in `R`.
pub fn gamma_from_environment(overlap: Complex, n: u32, j: u32) -> Result<Complex> {
    check_gamma_modulus(overlap)?;
    if j > n {
        return Err(Error::InvalidParameter(format!("j = {j} exceeds n = {n}")));
    }
    Ok(overlap.powu(n - j))
}

/// `(|0⟩|φ⟩ + |1⟩F|φ⟩)/√2`, the pure joint state at `γ = 1`.
pub fn joint_pure_state_t2(phi: &PureState) -> Result<PureState> {
    let f_phi = fourier_matrix(phi.dim())?.apply(phi.amplitudes())?;
    let amps = phi.amplitudes().iter().chain(&f_phi).copied().collect();
    PureState::normalized(amps)
}

/// Schmidt coefficients of the `R | B` cut at `γ = 1`.
pub fn joint_schmidt_t2(config: &GameConfig, phi: &PureState) -> Result<Vec<f64>> {
    if (config.gamma - Complex::new(1.0, 0.0)).norm() > 1e-12 {
        return Err(Error::InvalidParameter(format!(
            "the joint state is pure only at gamma = 1, got {}",
            config.gamma
        )));
    }
    if phi.dim() != config.d {
        return Err(Error::DimensionMismatch(format!(
            "input state has dimension {}, game has d = {}",
            phi.dim(),
            config.d
        )));
    }
    schmidt_coefficients(&joint_pure_state_t2(phi)?, (2, config.d))
}

/// `c(|j⟩ + ω^{jl} F†|l⟩)`, the inputs that are optimal without coherence.
pub fn phi_jl(d: usize, j: usize, l: usize) -> Result<PureState> {
    check_dim(d)?;
    if j >= d || l >= d {
        return Err(Error::InvalidParameter(format!("indices ({j}, {l}) out of range for d = {d}")));
    }
    let f = fourier_matrix(d)?;
    let phase = crate::linalg::cis(2.0 * std::f64::consts::PI * ((j * l) % d) as f64 / d as f64);
    let amps = (0..d)
        .map(|k| {
            let basis = if k == j { Complex::new(1.0, 0.0) } else { Complex::new(0.0, 0.0) };
            basis + phase * f[(l, k)].conj()
        })
        .collect();
    PureState::normalized(amps)
}

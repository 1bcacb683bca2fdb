//! Minimum-error discrimination of the register ensemble.
//!
//! The guessing probability is `max Σ_x Tr(M_x ρ̃ˣ)` over POVMs on the qubit
//! register. Its dual is `min Tr Q` subject to `Q ⪰ ρ̃ˣ` for all `x`, which is
//! what [`pguess_sdp`] reports; the pretty good measurement supplies a
//! feasible primal value for gap diagnostics.

use std::f64::consts::PI;

use crate::game::{check_unit_interval, ensemble, phi_jl, Ensemble, GameConfig};
use crate::linalg::{eig_hermitian, CMatrix};
use crate::sdp::{solve_trace_min, TraceMinProblem};
use crate::{Error, Result};

/// Eigenvalues of `Σ_x ρ̃ˣ` at or below this are outside its support.
pub const PGM_THRESHOLD: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct DiscriminationResult {
    pub p_guess: f64,
    pub dual_value: f64,
    pub primal_value: f64,
    pub gap: f64,
    pub povm: Option<Vec<CMatrix>>,
}

fn povm_value(ens: &Ensemble, povm: &[CMatrix]) -> f64 {
    ens.states()
        .iter()
        .zip(povm)
        .map(|(rho, m)| m.inner(rho).re)
        .sum()
}

/// Optimal two-state discrimination, `½(1 + ‖ρ0 - ρ1‖₁)`.
///
/// The measurement projects onto the non-negative eigenspace of `ρ0 - ρ1`
/// for outcome 0. When the two states coincide it is `(I/2, I/2)`.
pub fn helstrom(rho0: &CMatrix, rho1: &CMatrix) -> Result<DiscriminationResult> {
    let ens = Ensemble::new(vec![rho0.clone(), rho1.clone()])?;
    let g = (rho0 - rho1).hermitian_part();
    let povm = if g.max_abs() <= 1e-15 {
        let half = CMatrix::identity(2).scale_real(0.5);
        vec![half.clone(), half]
    } else {
        let eig = eig_hermitian(&g)?;
        let m0 = eig.map_spectrum(|l| if l >= 0.0 { 1.0 } else { 0.0 });
        let m1 = &CMatrix::identity(2) - &m0;
        vec![m0, m1]
    };
    let norm: f64 = eig_hermitian(&g)?.eigenvalues.iter().map(|l| l.abs()).sum();
    let p = 0.5 * (1.0 + norm);
    let primal = povm_value(&ens, &povm);
    Ok(DiscriminationResult {
        p_guess: p,
        dual_value: p,
        primal_value: primal,
        gap: p - primal,
        povm: Some(povm),
    })
}

/// Square-root measurement `M_x = S^{-1/2} ρ̃ˣ S^{-1/2}` with `S = Σ_x ρ̃ˣ`,
/// completed on the kernel of `S` by an equal split.
pub fn pgm_povm(ens: &Ensemble) -> Result<Vec<CMatrix>> {
    let eig = eig_hermitian(&ens.average().hermitian_part())?;
    let inv_sqrt = eig.map_spectrum(|l| if l > PGM_THRESHOLD { 1.0 / l.sqrt() } else { 0.0 });
    let kernel = eig.map_spectrum(|l| if l > PGM_THRESHOLD { 0.0 } else { 1.0 });
    let share = kernel.scale_real(1.0 / ens.d() as f64);
    ens.states()
        .iter()
        .map(|rho| Ok((&rho.conjugate_by(&inv_sqrt)? + &share).hermitian_part()))
        .collect()
}

/// Success probability of the pretty good measurement.
pub fn pgm_value(ens: &Ensemble) -> Result<f64> {
    Ok(povm_value(ens, &pgm_povm(ens)?))
}

/// Dual optimum alone; the optimiser's objective.
pub(crate) fn dual_value(ens: &Ensemble, tol: f64) -> Result<f64> {
    let problem = TraceMinProblem::dominating(ens.states())?;
    Ok(solve_trace_min(&problem, tol)?.value)
}

/// Guessing probability from the dual program, with the PGM as primal witness.
pub fn pguess_sdp(ens: &Ensemble, tol: f64) -> Result<DiscriminationResult> {
    let dual = dual_value(ens, tol)?;
    let povm = pgm_povm(ens)?;
    let primal = povm_value(ens, &povm);
    Ok(DiscriminationResult {
        p_guess: dual.clamp(0.0, 1.0),
        dual_value: dual,
        primal_value: primal,
        gap: dual - primal,
        povm: Some(povm),
    })
}

fn check_pair(d: usize, j: usize, l: usize) -> Result<()> {
    if d < 2 {
        return Err(Error::InvalidParameter(format!("d must be >= 2, got {d}")));
    }
    if j >= d || l >= d {
        return Err(Error::InvalidParameter(format!("indices ({j}, {l}) out of range for d = {d}")));
    }
    if j == l {
        return Err(Error::InvalidParameter("j and l must differ".into()));
    }
    Ok(())
}

/// Dual-feasible `Q′ = ½(ρ̃ʲ + ρ̃ˡ + |ρ̃ʲ - ρ̃ˡ|)` for the input `φ_jl`.
pub fn certificate_phi_jl(d: usize, gamma: f64, j: usize, l: usize) -> Result<CMatrix> {
    check_pair(d, j, l)?;
    let ens = ensemble(&GameConfig::new(d, gamma)?, &phi_jl(d, j, l)?)?;
    let (rj, rl) = (&ens.states()[j], &ens.states()[l]);
    let g = (rj - rl).hermitian_part();
    let abs_g = eig_hermitian(&g)?.map_spectrum(f64::abs);
    Ok((&(rj + rl) + &abs_g).scale_real(0.5).hermitian_part())
}

/// Closed-form guessing probability of the ensemble generated by `φ_jl`.
pub fn pguess_phi_jl_closed_form(d: usize, gamma: f64, j: usize, l: usize) -> Result<f64> {
    check_pair(d, j, l)?;
    check_unit_interval(gamma)?;
    let df = d as f64;
    let sd = df.sqrt();
    // reduce j² - l² mod d before the cosine
    let k = ((j * j) % d + d - (l * l) % d) % d;
    let cos = (2.0 * PI * k as f64 / df).cos();
    let root = (df * (2.0 + sd).powi(2)
        + 2.0 * gamma * gamma * (1.0 + sd).powi(2) * (1.0 - cos))
        .sqrt();
    Ok((2.0 + 2.0 * sd + df + root) / (4.0 * (df + sd)))
}

//! Conditional min-entropies of the register for the two-outcome game.
//!
//! `H_min(B|A) = -log₂ min { Tr σ_A : σ_A ⊗ I_B ⪰ ρ_AB }`, evaluated with the
//! tensor-lift trace minimisation. The conditioning system is always the
//! qubit register and comes first in the tensor product.

use crate::analytic::pguess_max_d2;
use crate::game::{
    check_unit_interval, ensemble, joint_state_t2, phi_jl, validate_density_matrix, GameConfig,
};
use crate::linalg::{fourier_matrix, CMatrix, Complex, PureState};
use crate::sdp::{solve_trace_min, TraceMinProblem};
use crate::{Error, Result};

/// Tolerance of the trace minimisations behind [`hmin_sdp`].
pub const HMIN_SDP_TOL: f64 = 1e-10;
/// Largest disagreement accepted by the optional cross-check.
pub const CROSS_CHECK_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyCurvePoint {
    pub gamma: f64,
    pub h_b_given_r: f64,
    pub h_x_given_r: f64,
    pub h_p_given_r_t1: f64,
    pub h_p_given_r_t2: f64,
}

/// `H_min(B|R)` of a state on `C^2 ⊗ C^{d_b}`.
pub fn hmin_sdp(rho_rb: &CMatrix, d_b: usize) -> Result<f64> {
    if d_b == 0 {
        return Err(Error::InvalidParameter("d_b must be >= 1".into()));
    }
    validate_density_matrix(rho_rb, 2 * d_b)?;
    let problem = TraceMinProblem::tensor_dominating(rho_rb, d_b)?;
    Ok(-solve_trace_min(&problem, HMIN_SDP_TOL)?.value.log2())
}

/// `-log₂(1 + γ)`: the register against Bob's system before the measurement.
pub fn hmin_b_given_r_d2(gamma: f64) -> Result<f64> {
    check_unit_interval(gamma)?;
    Ok(-(1.0 + gamma).log2())
}

/// `1 - log₂(√(2 + 2γ²)/2 + 1)`: the register against the outcome.
pub fn hmin_x_given_r_d2(gamma: f64) -> Result<f64> {
    check_unit_interval(gamma)?;
    Ok(1.0 - ((2.0 + 2.0 * gamma * gamma).sqrt() / 2.0 + 1.0).log2())
}

/// `-log₂(1 + √(1 - γ²))`: the register against its purification.
pub fn hmin_p_given_r_initial(gamma: f64) -> Result<f64> {
    check_unit_interval(gamma)?;
    Ok(-(1.0 + (1.0 - gamma * gamma).sqrt()).log2())
}

/// After the controlled Fourier step the purification is classical given
/// `R` for the inputs `φ01`, `φ10`, so the entropy vanishes.
pub fn hmin_p_given_r_t2_d2(gamma: f64) -> Result<f64> {
    check_unit_interval(gamma)?;
    Ok(0.0)
}

/// Purification states `|α⟩ = |0⟩`, `|β⟩ = γ|0⟩ + √(1-γ²)|1⟩`.
fn purification_basis(gamma: f64) -> ([Complex; 2], [Complex; 2]) {
    let alpha = [Complex::new(1.0, 0.0), Complex::new(0.0, 0.0)];
    let beta = [
        Complex::new(gamma, 0.0),
        Complex::new((1.0 - gamma * gamma).max(0.0).sqrt(), 0.0),
    ];
    (alpha, beta)
}

/// `(|0⟩|α⟩ + |1⟩|β⟩)/√2` on `R ⊗ P`, whose `R` marginal is `ρ_R(γ)`.
pub fn rho_rp_initial(gamma: f64) -> Result<CMatrix> {
    check_unit_interval(gamma)?;
    let (a, b) = purification_basis(gamma);
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let psi = PureState::new(vec![a[0] * s, a[1] * s, b[0] * s, b[1] * s])?;
    Ok(psi.density_matrix())
}

/// `R ⊗ P` once Bob's system has been traced out after the controlled Fourier
/// step:
///
/// ```text
/// ½( |0⟩⟨0| ⊗ |α⟩⟨α| + ⟨φ|F†|φ⟩ |0⟩⟨1| ⊗ |α⟩⟨β|
///  + ⟨φ|F|φ⟩ |1⟩⟨0| ⊗ |β⟩⟨α| + |1⟩⟨1| ⊗ |β⟩⟨β| )
/// ```
pub fn rho_rp_t2(gamma: f64, phi: &PureState) -> Result<CMatrix> {
    check_unit_interval(gamma)?;
    let f_phi = fourier_matrix(phi.dim())?.apply(phi.amplitudes())?;
    // ⟨φ|F|φ⟩
    let overlap: Complex = phi
        .amplitudes()
        .iter()
        .zip(&f_phi)
        .map(|(a, b)| a.conj() * b)
        .sum();
    let (a, b) = purification_basis(gamma);
    let blocks = [
        [CMatrix::outer(&a, &a), CMatrix::outer(&a, &b).scale(overlap.conj())],
        [CMatrix::outer(&b, &a).scale(overlap), CMatrix::outer(&b, &b)],
    ];
    let mut m = CMatrix::zeros(4, 4);
    for (r, row) in blocks.iter().enumerate() {
        for (c, block) in row.iter().enumerate() {
            for i in 0..2 {
                for j in 0..2 {
                    m[(2 * r + i, 2 * c + j)] = block[(i, j)] * 0.5;
                }
            }
        }
    }
    Ok(m.hermitian_part())
}

fn closed_form_point(gamma: f64) -> Result<EntropyCurvePoint> {
    Ok(EntropyCurvePoint {
        gamma,
        h_b_given_r: hmin_b_given_r_d2(gamma)?,
        h_x_given_r: hmin_x_given_r_d2(gamma)?,
        h_p_given_r_t1: hmin_p_given_r_initial(gamma)?,
        h_p_given_r_t2: hmin_p_given_r_t2_d2(gamma)?,
    })
}

/// The same four entropies evaluated by SDP for the optimal input `φ01`.
pub fn sdp_point(gamma: f64) -> Result<EntropyCurvePoint> {
    let config = GameConfig::new(2, gamma)?;
    let phi = phi_jl(2, 0, 1)?;
    let rho_rb = joint_state_t2(&config, &phi.density_matrix())?;
    let cq = ensemble(&config, &phi)?.cq_state();
    Ok(EntropyCurvePoint {
        gamma,
        h_b_given_r: hmin_sdp(&rho_rb, 2)?,
        h_x_given_r: hmin_sdp(&cq, 2)?,
        h_p_given_r_t1: hmin_sdp(&rho_rp_initial(gamma)?, 2)?,
        h_p_given_r_t2: hmin_sdp(&rho_rp_t2(gamma, &phi)?, 2)?,
    })
}

/// Closed-form entropies along `grid`; with `cross_check` each point is also
/// evaluated by SDP and a disagreement above [`CROSS_CHECK_TOL`] is an error.
pub fn entropy_curve_d2(grid: &[f64], cross_check: bool) -> Result<Vec<EntropyCurvePoint>> {
    grid.iter()
        .map(|&gamma| {
            let p = closed_form_point(gamma)?;
            if cross_check {
                let q = sdp_point(gamma)?;
                let pairs = [
                    ("H(B|R)", p.h_b_given_r, q.h_b_given_r),
                    ("H(X|R)", p.h_x_given_r, q.h_x_given_r),
                    ("H(P|R) initial", p.h_p_given_r_t1, q.h_p_given_r_t1),
                    ("H(P|R) after", p.h_p_given_r_t2, q.h_p_given_r_t2),
                ];
                for (name, want, got) in pairs {
                    if (want - got).abs() > CROSS_CHECK_TOL {
                        return Err(Error::CrossCheck(format!(
                            "{name} at gamma = {gamma}: closed form {want}, SDP {got}"
                        )));
                    }
                }
            }
            Ok(p)
        })
        .collect()
}

/// `H_min(X|R) - H_min(B|R)`, at most one bit.
pub fn measurement_gap_d2(gamma: f64) -> Result<f64> {
    Ok(hmin_x_given_r_d2(gamma)? - hmin_b_given_r_d2(gamma)?)
}

/// `-log₂` of the optimal two-outcome guessing probability.
pub fn hmin_x_given_r_from_pguess(gamma: f64) -> Result<f64> {
    crate::analytic::min_entropy_of(pguess_max_d2(gamma)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::schmidt_coefficients;

    fn grid() -> Vec<f64> {
        (0..=10).map(|i| i as f64 / 10.0).collect()
    }

    #[test]
    fn hmin_sdp_examples() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let bell = PureState::from_real(&[h, 0.0, 0.0, h]).unwrap();
        assert!((hmin_sdp(&bell.density_matrix(), 2).unwrap() + 1.0).abs() < 1e-8);
        // product with a maximally mixed qubit: σ = I/4 is optimal, one bit
        let mixed = CMatrix::identity(4).scale_real(0.25);
        assert!((hmin_sdp(&mixed, 2).unwrap() - 1.0).abs() < 1e-8);
        let rho = joint_state_t2(&GameConfig::new(2, 0.5).unwrap(), &phi_jl(2, 0, 1).unwrap().density_matrix())
            .unwrap();
        assert!((hmin_sdp(&rho, 2).unwrap() + 1.5f64.log2()).abs() < 1e-6);
        assert!(hmin_sdp(&CMatrix::identity(4), 2).is_err());
    }

    #[test]
    fn closed_form_values() {
        assert_eq!(hmin_b_given_r_d2(0.0).unwrap(), 0.0);
        assert_eq!(hmin_b_given_r_d2(1.0).unwrap(), -1.0);
        assert!((hmin_b_given_r_d2(0.5).unwrap() + 0.584963).abs() < 1e-6);
        assert!(hmin_x_given_r_d2(1.0).unwrap().abs() < 1e-15);
        assert!((hmin_x_given_r_d2(0.0).unwrap() - 0.228447).abs() < 1e-6);
        assert_eq!(hmin_p_given_r_initial(0.0).unwrap(), -1.0);
        assert_eq!(hmin_p_given_r_initial(1.0).unwrap(), 0.0);
        assert!((hmin_p_given_r_initial(0.6).unwrap() + 1.8f64.log2()).abs() < 1e-15);
        assert!((hmin_p_given_r_initial(0.6).unwrap() + 0.847997).abs() < 1e-6);
        for g in [0.0, 0.5, 1.0] {
            assert_eq!(hmin_p_given_r_t2_d2(g).unwrap(), 0.0);
        }
        assert!(hmin_b_given_r_d2(1.01).is_err());
    }

    #[test]
    fn outcome_entropy_is_minus_log_of_pguess() {
        for g in grid() {
            assert!((hmin_x_given_r_d2(g).unwrap() - hmin_x_given_r_from_pguess(g).unwrap()).abs() < 1e-12);
        }
    }

    #[test]
    fn initial_purification_entropy_from_schmidt_sum() {
        // pure state: H_min = -2 log₂ Σ Schmidt coefficients
        let g = 0.6;
        let rho = rho_rp_initial(g).unwrap();
        let (a, b) = purification_basis(g);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let psi = PureState::new(vec![a[0] * s, a[1] * s, b[0] * s, b[1] * s]).unwrap();
        assert!(psi.density_matrix().max_abs_diff(&rho) < 1e-15);
        let sum: f64 = schmidt_coefficients(&psi, (2, 2)).unwrap().iter().sum();
        assert!((-2.0 * sum.log2() - hmin_p_given_r_initial(g).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn register_marginal_of_purification() {
        use crate::game::register_state;
        use crate::linalg::{partial_trace, Keep};
        for g in grid() {
            let r = partial_trace(&rho_rp_initial(g).unwrap(), (2, 2), Keep::A).unwrap();
            assert!(r.max_abs_diff(&register_state(Complex::new(g, 0.0)).unwrap()) < 1e-15);
        }
    }

    #[test]
    fn t2_state_is_block_diagonal_for_optimal_inputs() {
        for (j, l) in [(0, 1), (1, 0)] {
            let phi = phi_jl(2, j, l).unwrap();
            for g in grid() {
                let m = rho_rp_t2(g, &phi).unwrap();
                for i in 0..2 {
                    for k in 2..4 {
                        assert!(m[(i, k)].norm() < 1e-12 && m[(k, i)].norm() < 1e-12);
                    }
                }
                assert!((m.trace().re - 1.0).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn curve_with_cross_check() {
        let pts = entropy_curve_d2(&grid(), true).unwrap();
        let last = pts.last().unwrap();
        assert!((last.h_b_given_r + 1.0).abs() < 1e-12 && last.h_x_given_r.abs() < 1e-12);
        assert!((measurement_gap_d2(1.0).unwrap() - 1.0).abs() < 1e-9);
        let first = pts[0];
        assert_eq!(first.h_b_given_r, 0.0);
        assert!((first.h_x_given_r - 0.228447).abs() < 1e-6);
        for w in pts.windows(2) {
            let a = w[0].h_x_given_r - w[0].h_b_given_r;
            let b = w[1].h_x_given_r - w[1].h_b_given_r;
            assert!(b > a);
        }
        for p in &pts {
            assert!(p.h_x_given_r <= p.h_b_given_r + 1.0 + 1e-9);
            if p.gamma < 1.0 {
                assert!(p.h_x_given_r < p.h_b_given_r + 1.0 - 1e-9);
            }
        }
    }
}

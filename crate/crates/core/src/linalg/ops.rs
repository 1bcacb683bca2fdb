use std::f64::consts::PI;

use super::{cis, eig_hermitian, CMatrix, Complex, PureState};
use crate::{Error, Result};

/// Which factor of a bipartite system survives a partial trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Keep {
    A,
    B,
}

/// Discrete Fourier matrix `F[k][j] = ω^{jk} / √d`, `ω = exp(2πi/d)`.
pub fn fourier_matrix(d: usize) -> Result<CMatrix> {
    if d == 0 {
        return Err(Error::InvalidParameter("Fourier dimension must be >= 1".into()));
    }
    let norm = 1.0 / (d as f64).sqrt();
    Ok(CMatrix::from_fn(d, d, |k, j| {
        // reduce the exponent first so large products keep full precision
        let e = (j * k) % d;
        cis(2.0 * PI * e as f64 / d as f64) * norm
    }))
}

/// Sum of absolute eigenvalues.
pub fn trace_norm_hermitian(m: &CMatrix) -> Result<f64> {
    Ok(eig_hermitian(m)?.eigenvalues.iter().map(|l| l.abs()).sum())
}

/// Partial trace of an operator on `C^{dA} ⊗ C^{dB}`.
pub fn partial_trace(m: &CMatrix, dims: (usize, usize), keep: Keep) -> Result<CMatrix> {
    let (da, db) = dims;
    if da == 0 || db == 0 || !m.is_square() || m.rows() != da * db {
        return Err(Error::DimensionMismatch(format!(
            "partial trace over ({da}, {db}) needs a square {}x{0} matrix, got {}x{}",
            da * db,
            m.rows(),
            m.cols()
        )));
    }
    Ok(match keep {
        Keep::A => CMatrix::from_fn(da, da, |i, j| {
            (0..db).map(|k| m[(i * db + k, j * db + k)]).sum::<Complex>()
        }),
        Keep::B => CMatrix::from_fn(db, db, |i, j| {
            (0..da).map(|k| m[(k * db + i, k * db + j)]).sum::<Complex>()
        }),
    })
}

/// Schmidt coefficients of a bipartite pure state, descending, `min(dA, dB)` of them.
pub fn schmidt_coefficients(psi: &PureState, dims: (usize, usize)) -> Result<Vec<f64>> {
    let (da, db) = dims;
    if da * db != psi.dim() {
        return Err(Error::DimensionMismatch(format!(
            "state of dimension {} cannot be split as {da} x {db}",
            psi.dim()
        )));
    }
    let amp = psi.amplitudes();
    let m = CMatrix::from_fn(da, db, |i, j| amp[i * db + j]);
    // the smaller Gram matrix carries the same non-zero spectrum
    let gram = if da <= db { &m * &m.adjoint() } else { &m.adjoint() * &m };
    let eig = eig_hermitian(&gram.hermitian_part())?;
    Ok(eig
        .eigenvalues
        .iter()
        .map(|&l| l.max(0.0).sqrt())
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c;
    use proptest::prelude::*;

    #[test]
    fn fourier_d2_is_hadamard() {
        let f = fourier_matrix(2).unwrap();
        let s = 1.0 / 2f64.sqrt();
        let h = CMatrix::from_real_rows(&[[s, s], [s, -s]]).unwrap();
        assert!(f.max_abs_diff(&h) < 1e-15);
    }

    #[test]
    fn fourier_d1_is_one() {
        assert_eq!(fourier_matrix(1).unwrap(), CMatrix::identity(1));
        assert!(fourier_matrix(0).is_err());
    }

    #[test]
    fn fourier_d4_unitary_by_direct_product() {
        // independent construction: F_{kj} = i^{jk} / 2
        let powers = [c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0), c(0.0, -1.0)];
        let f = CMatrix::from_fn(4, 4, |k, j| powers[(j * k) % 4] * 0.5);
        assert!(fourier_matrix(4).unwrap().max_abs_diff(&f) < 1e-15);
        assert!((&f * &f.adjoint()).max_abs_diff(&CMatrix::identity(4)) < 1e-12);
    }

    #[test]
    fn fourier_unitary_up_to_16() {
        for d in 2..=16 {
            let f = fourier_matrix(d).unwrap();
            assert!((&f.adjoint() * &f).max_abs_diff(&CMatrix::identity(d)) < 1e-12, "d={d}");
        }
    }

    #[test]
    fn trace_norm_basics() {
        assert!((trace_norm_hermitian(&CMatrix::diag_real(&[1.0, -1.0])).unwrap() - 2.0).abs() < 1e-14);
        assert_eq!(trace_norm_hermitian(&CMatrix::zeros(3, 3)).unwrap(), 0.0);
    }

    #[test]
    fn partial_trace_of_product() {
        let ra = CMatrix::from_rows(&[[c(0.7, 0.0), c(0.1, 0.2)], [c(0.1, -0.2), c(0.3, 0.0)]])
            .unwrap();
        let rb = CMatrix::diag_real(&[0.5, 0.25, 0.25]);
        let prod = ra.kron(&rb);
        assert!(partial_trace(&prod, (2, 3), Keep::A).unwrap().max_abs_diff(&ra) < 1e-15);
        assert!(partial_trace(&prod, (2, 3), Keep::B).unwrap().max_abs_diff(&rb) < 1e-15);
    }

    #[test]
    fn partial_trace_of_bell_state() {
        let bell = PureState::from_real(&[1.0, 0.0, 0.0, 1.0]).unwrap();
        let r = partial_trace(&bell.density_matrix(), (2, 2), Keep::A).unwrap();
        assert!(r.max_abs_diff(&CMatrix::identity(2).scale_real(0.5)) < 1e-15);
    }

    #[test]
    fn partial_trace_dimension_mismatch() {
        assert!(partial_trace(&CMatrix::identity(5), (2, 3), Keep::A).is_err());
    }

    #[test]
    fn schmidt_bell_and_product() {
        let bell = PureState::from_real(&[1.0, 0.0, 0.0, 1.0]).unwrap();
        let s = schmidt_coefficients(&bell, (2, 2)).unwrap();
        let h = 1.0 / 2f64.sqrt();
        assert!((s[0] - h).abs() < 1e-12 && (s[1] - h).abs() < 1e-12);

        let prod = PureState::basis(4, 0).unwrap();
        let s = schmidt_coefficients(&prod, (2, 2)).unwrap();
        assert!((s[0] - 1.0).abs() < 1e-12 && s[1].abs() < 1e-12);

        assert!(schmidt_coefficients(&prod, (3, 2)).is_err());
    }

    fn random_unitary(n: usize, xs: &[f64]) -> CMatrix {
        let mut it = xs.iter().cycle();
        let mut h = CMatrix::zeros(n, n);
        for i in 0..n {
            h[(i, i)] = c(*it.next().unwrap(), 0.0);
            for j in (i + 1)..n {
                let z = c(*it.next().unwrap(), *it.next().unwrap());
                h[(i, j)] = z;
                h[(j, i)] = z.conj();
            }
        }
        let e = eig_hermitian(&h).unwrap();
        // exp(iH) = V exp(iΛ) V^dag
        let v = &e.eigenvectors;
        CMatrix::from_fn(n, n, |i, j| {
            (0..n)
                .map(|k| v[(i, k)] * cis(3.0 * e.eigenvalues[k]) * v[(j, k)].conj())
                .sum()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]
        #[test]
        fn schmidt_invariant_under_local_unitaries(
            amps in proptest::collection::vec(-1.0f64..1.0, 12),
            ua in proptest::collection::vec(-1.0f64..1.0, 4),
            ub in proptest::collection::vec(-1.0f64..1.0, 9),
        ) {
            let psi = PureState::normalized(
                amps.chunks(2).map(|p| c(p[0], p[1])).collect()
            ).unwrap();
            let u = random_unitary(2, &ua).kron(&random_unitary(3, &ub));
            let before = schmidt_coefficients(&psi, (2, 3)).unwrap();
            let after = schmidt_coefficients(&psi.evolve(&u).unwrap(), (2, 3)).unwrap();
            let sq: f64 = before.iter().map(|x| x * x).sum();
            prop_assert!((sq - 1.0).abs() < 1e-10);
            for (x, y) in before.iter().zip(&after) {
                prop_assert!((x - y).abs() < 1e-10);
            }
        }

        #[test]
        fn trace_norm_matches_singular_values(
            xs in proptest::collection::vec(-1.0f64..1.0, 30),
        ) {
            let mut it = xs.iter().cycle();
            let n = 4;
            let mut m = CMatrix::zeros(n, n);
            for i in 0..n {
                m[(i, i)] = c(*it.next().unwrap(), 0.0);
                for j in (i + 1)..n {
                    let z = c(*it.next().unwrap(), *it.next().unwrap());
                    m[(i, j)] = z;
                    m[(j, i)] = z.conj();
                }
            }
            let svals: f64 = eig_hermitian(&(&m.adjoint() * &m).hermitian_part())
                .unwrap()
                .eigenvalues
                .iter()
                .map(|l| l.max(0.0).sqrt())
                .sum();
            prop_assert!((trace_norm_hermitian(&m).unwrap() - svals).abs() < 1e-10);
        }
    }
}

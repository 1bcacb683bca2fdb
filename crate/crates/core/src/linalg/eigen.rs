//! Hermitian eigendecomposition by cyclic Jacobi rotations.
//!
//! A Hermitian `M = A + iB` (A symmetric, B antisymmetric) is embedded as the
//! real symmetric matrix
//!
//! ```text
//! [ A  -B ]
//! [ B   A ]
//! ```
//!
//! whose spectrum is that of `M` with every eigenvalue doubled. A real
//! eigenvector `(u, v)` maps to the complex eigenvector `u + iv`; each doubled
//! eigenspace maps onto a complex eigenspace of half its real dimension, so
//! complex eigenvectors are extracted cluster by cluster with a greedy
//! Gram-Schmidt pass.

use std::cmp::Ordering;

use super::{CMatrix, Complex};
use crate::{Error, Result};

const MAX_DIM: usize = 64;
const MAX_SWEEPS: usize = 100;

/// Eigenvalues in descending order with matching unit eigenvectors as columns.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: CMatrix,
}

impl EigenDecomposition {
    pub fn eigenvector(&self, k: usize) -> Vec<Complex> {
        self.eigenvectors.column(k)
    }

    /// `V f(Λ) V^dag`.
    pub fn map_spectrum(&self, f: impl Fn(f64) -> f64) -> CMatrix {
        let n = self.eigenvalues.len();
        let v = &self.eigenvectors;
        let fl: Vec<f64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        CMatrix::from_fn(n, n, |i, j| {
            (0..n)
                .map(|k| v[(i, k)] * v[(j, k)].conj() * fl[k])
                .sum()
        })
    }

    pub fn reconstruct(&self) -> CMatrix {
        self.map_spectrum(|l| l)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        *self.eigenvalues.last().expect("non-empty spectrum")
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.eigenvalues[0]
    }
}

/// Eigendecomposition of a Hermitian matrix of side at most 64.
///
/// Ties in the eigenvalues are ordered by the lexicographic (re, im) order of
/// the phase-normalised eigenvectors so results are reproducible.
pub fn eig_hermitian(m: &CMatrix) -> Result<EigenDecomposition> {
    m.ensure_hermitian()?;
    let n = m.rows();
    if n > MAX_DIM {
        return Err(Error::DimensionMismatch(format!(
            "eig_hermitian supports side <= {MAX_DIM}, got {n}"
        )));
    }
    if n == 1 {
        return Ok(EigenDecomposition {
            eigenvalues: vec![m[(0, 0)].re],
            eigenvectors: CMatrix::identity(1),
        });
    }

    let nn = 2 * n;
    let mut a = vec![0.0; nn * nn];
    for i in 0..n {
        for j in 0..n {
            // symmetrised on the fly; the Hermiticity check above bounds the error
            let z = (m[(i, j)] + m[(j, i)].conj()) * 0.5;
            a[i * nn + j] = z.re;
            a[(i + n) * nn + (j + n)] = z.re;
            a[(i + n) * nn + j] = z.im;
            a[i * nn + (j + n)] = -z.im;
        }
    }
    let (vals, vecs) = jacobi_symmetric(&mut a, nn);

    let mut order: Vec<usize> = (0..nn).collect();
    order.sort_by(|&x, &y| vals[y].total_cmp(&vals[x]));

    let scale = vals.iter().fold(0.0_f64, |s, v| s.max(v.abs())).max(1.0);
    let cluster_tol = 1e-9 * scale;

    let mut accepted: Vec<Vec<Complex>> = Vec::with_capacity(n);
    let mut start = 0;
    while start < nn {
        let mut end = start + 1;
        while end < nn && vals[order[end - 1]] - vals[order[end]] <= cluster_tol {
            end += 1;
        }
        let want = (end - start).div_ceil(2);
        let mut candidates: Vec<Vec<Complex>> = order[start..end]
            .iter()
            .map(|&k| {
                (0..n)
                    .map(|i| Complex::new(vecs[i * nn + k], vecs[(i + n) * nn + k]))
                    .collect()
            })
            .collect();
        for _ in 0..want {
            if accepted.len() == n {
                break;
            }
            // project out everything accepted so far and keep the largest residual
            let mut best: Option<(usize, f64)> = None;
            for (ci, cand) in candidates.iter_mut().enumerate() {
                for q in &accepted {
                    let ov: Complex = q.iter().zip(cand.iter()).map(|(a, b)| a.conj() * b).sum();
                    for (x, qi) in cand.iter_mut().zip(q) {
                        *x -= ov * qi;
                    }
                }
                let nrm = norm(cand);
                if best.is_none_or(|(_, b)| nrm > b) {
                    best = Some((ci, nrm));
                }
            }
            let (ci, nrm) = best.expect("non-empty cluster");
            let mut v = candidates.swap_remove(ci);
            for x in &mut v {
                *x /= nrm;
            }
            accepted.push(v);
        }
        start = end;
    }
    debug_assert_eq!(accepted.len(), n);

    let mut pairs: Vec<(f64, Vec<Complex>)> = accepted
        .into_iter()
        .map(|mut v| {
            canonical_phase(&mut v);
            let mv = m.apply(&v).expect("square");
            let rq: Complex = v.iter().zip(&mv).map(|(a, b)| a.conj() * b).sum();
            (rq.re, v)
        })
        .collect();

    pairs.sort_by(|a, b| b.0.total_cmp(&a.0));
    // deterministic order inside near-degenerate runs
    let mut s = 0;
    while s < n {
        let mut e = s + 1;
        while e < n && pairs[e - 1].0 - pairs[e].0 <= cluster_tol {
            e += 1;
        }
        if e - s > 1 {
            pairs[s..e].sort_by(|a, b| lex_cmp(&a.1, &b.1));
        }
        s = e;
    }

    let eigenvalues: Vec<f64> = pairs.iter().map(|p| p.0).collect();
    let eigenvectors = CMatrix::from_fn(n, n, |i, k| pairs[k].1[i]);
    Ok(EigenDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

fn norm(v: &[Complex]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub(crate) fn canonical_phase(v: &mut [Complex]) {
    if let Some(z) = v.iter().find(|z| z.norm() > 1e-10).copied() {
        let phase = z.conj() / z.norm();
        for x in v.iter_mut() {
            *x *= phase;
        }
        // remove the rounding residue on the pivot
        if let Some(p) = v.iter_mut().find(|z| z.norm() > 1e-10) {
            *p = Complex::new(p.norm(), 0.0);
        }
    }
}

fn lex_cmp(a: &[Complex], b: &[Complex]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im)) {
            Ordering::Equal => continue,
            o => return o,
        }
    }
    Ordering::Equal
}

/// Cyclic Jacobi on a dense real symmetric `n x n` matrix stored row-major.
/// Returns the (unsorted) eigenvalues and the row-major eigenvector matrix
/// whose columns are the eigenvectors. `a` is destroyed.
fn jacobi_symmetric(a: &mut [f64], n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let frob: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    if frob == 0.0 {
        return (vec![0.0; n], v);
    }
    let target = (f64::EPSILON * frob).powi(2);

    for _ in 0..MAX_SWEEPS {
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += a[p * n + q] * a[p * n + q];
            }
        }
        if off <= target {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq.abs() < f64::MIN_POSITIVE {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let cs = 1.0 / (t * t + 1.0).sqrt();
                let sn = t * cs;

                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = cs * akp - sn * akq;
                    a[k * n + q] = sn * akp + cs * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = cs * apk - sn * aqk;
                    a[q * n + k] = sn * apk + cs * aqk;
                }
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;

                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = cs * vkp - sn * vkq;
                    v[k * n + q] = sn * vkp + cs * vkq;
                }
            }
        }
    }
    let vals = (0..n).map(|i| a[i * n + i]).collect();
    (vals, v)
}

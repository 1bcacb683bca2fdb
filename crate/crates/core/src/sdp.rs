//! Trace minimisation over a single 2x2 Hermitian variable.
//!
//! Both dual programs this crate needs have the shape
//!
//! ```text
//! minimise Tr H   over 2x2 Hermitian H
//! subject to Lift_i(H) ⪰ A_i   for every constraint i
//! ```
//!
//! with `Lift` either the identity (state discrimination, bounds are the
//! ensemble members) or `H ↦ H ⊗ I_d` (conditional min-entropy, one bound
//! which is the bipartite state). The solver is a log-det barrier method on
//! the four real coordinates of `H`:
//!
//! ```text
//! H = x0 |0⟩⟨0| + x1 |1⟩⟨1| + x2 σ_x + x3 σ_y
//! ```
//!
//! Each outer step centres `Tr H / μ - Σ_i log det(Lift_i(H) - A_i)` by
//! damped Newton and then divides `μ` by ten. On the central path the
//! suboptimality is exactly `ν μ` with `ν = Σ_i dim(slack_i)`, which is the
//! stopping quantity.

use crate::linalg::{eig_hermitian, CMatrix, Complex, HERMITIAN_TOL};
use crate::{Error, NonConvergence, Result};

/// Total Newton steps allowed per solve.
pub const NEWTON_BUDGET: usize = 200;
const MU_START: f64 = 1.0;
const MU_FACTOR: f64 = 10.0;
const CENTERING_TOL: f64 = 1e-10;

/// How the 2x2 variable enters a constraint.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Lift {
    /// `H ⪰ A` with `A` 2x2.
    Identity,
    /// `H ⊗ I_d ⪰ A` with `A` of side `2d`.
    TensorIdentity(usize),
}

impl Lift {
    pub fn slack_dim(&self) -> usize {
        match *self {
            Lift::Identity => 2,
            Lift::TensorIdentity(d) => 2 * d,
        }
    }

    pub fn apply(&self, h: &CMatrix) -> CMatrix {
        match *self {
            Lift::Identity => h.clone(),
            Lift::TensorIdentity(d) => h.kron(&CMatrix::identity(d)),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Constraint {
    pub lift: Lift,
    pub bound: CMatrix,
}

#[derive(Debug, Clone)]
pub struct TraceMinProblem {
    constraints: Vec<Constraint>,
}

impl TraceMinProblem {
    pub fn new(constraints: Vec<Constraint>) -> Result<Self> {
        if constraints.is_empty() {
            return Err(Error::InvalidParameter("trace minimisation needs a constraint".into()));
        }
        for (i, c) in constraints.iter().enumerate() {
            if let Lift::TensorIdentity(0) = c.lift {
                return Err(Error::InvalidParameter("tensor lift needs d >= 1".into()));
            }
            let n = c.lift.slack_dim();
            if c.bound.rows() != n || c.bound.cols() != n {
                return Err(Error::DimensionMismatch(format!(
                    "constraint {i}: {:?} needs a {n}x{n} bound, got {}x{}",
                    c.lift,
                    c.bound.rows(),
                    c.bound.cols()
                )));
            }
            let deviation = c.bound.hermitian_deviation();
            if deviation >= HERMITIAN_TOL {
                return Err(Error::NotHermitian { deviation });
            }
        }
        Ok(TraceMinProblem { constraints })
    }

    /// `H ⪰ A_i` for every bound.
    pub fn dominating<'a>(bounds: impl IntoIterator<Item = &'a CMatrix>) -> Result<Self> {
        TraceMinProblem::new(
            bounds
                .into_iter()
                .map(|b| Constraint {
                    lift: Lift::Identity,
                    bound: b.clone(),
                })
                .collect(),
        )
    }

    /// `H ⊗ I_d ⪰ ρ` for a single state on `C^2 ⊗ C^d`.
    pub fn tensor_dominating(rho: &CMatrix, d: usize) -> Result<Self> {
        TraceMinProblem::new(vec![Constraint {
            lift: Lift::TensorIdentity(d),
            bound: rho.clone(),
        }])
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    /// Total barrier parameter `ν`.
    pub fn barrier_degree(&self) -> usize {
        self.constraints.iter().map(|c| c.lift.slack_dim()).sum()
    }
}

#[derive(Debug, Clone)]
pub struct TraceMinSolution {
    pub optimum: CMatrix,
    pub value: f64,
    /// Smallest eigenvalue over all slack matrices at `optimum`.
    pub min_slack: f64,
    pub iterations: usize,
    pub barrier_mu_final: f64,
}

#[derive(Debug, Clone)]
pub struct FeasibilityReport {
    pub feasible: bool,
    pub min_slack: f64,
    /// Minimum eigenvalue of each slack, in constraint order.
    pub slacks: Vec<f64>,
}

/// Checks `Lift_i(H) - A_i ⪰ -slack_tol` for every constraint.
pub fn is_feasible(h: &CMatrix, problem: &TraceMinProblem, slack_tol: f64) -> Result<FeasibilityReport> {
    if h.rows() != 2 || h.cols() != 2 {
        return Err(Error::DimensionMismatch(format!(
            "candidate must be 2x2, got {}x{}",
            h.rows(),
            h.cols()
        )));
    }
    h.ensure_hermitian()?;
    let slacks = problem
        .constraints
        .iter()
        .map(|c| {
            let s = &c.lift.apply(h) - &c.bound;
            Ok(eig_hermitian(&s.hermitian_part())?.min_eigenvalue())
        })
        .collect::<Result<Vec<f64>>>()?;
    let min_slack = slacks.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(FeasibilityReport {
        feasible: min_slack >= -slack_tol,
        min_slack,
        slacks,
    })
}

type Vec4 = [f64; 4];
type Mat4 = [[f64; 4]; 4];

/// Constraint data in solver-friendly form.
enum Prepared {
    /// Bound `[[a, b], [b*, c]]`.
    Qubit { a: f64, c: f64, b: Complex },
    Tensor { d: usize, bound: CMatrix },
}

fn to_matrix(x: &Vec4) -> CMatrix {
    let mut h = CMatrix::zeros(2, 2);
    h[(0, 0)] = Complex::new(x[0], 0.0);
    h[(1, 1)] = Complex::new(x[1], 0.0);
    h[(0, 1)] = Complex::new(x[2], -x[3]);
    h[(1, 0)] = Complex::new(x[2], x[3]);
    h
}

/// The four coordinate directions as 2x2 matrices.
fn basis() -> [CMatrix; 4] {
    let z = Complex::new(0.0, 0.0);
    let one = Complex::new(1.0, 0.0);
    let i = Complex::new(0.0, 1.0);
    [
        CMatrix::from_rows(&[[one, z], [z, z]]).unwrap(),
        CMatrix::from_rows(&[[z, z], [z, one]]).unwrap(),
        CMatrix::from_rows(&[[z, one], [one, z]]).unwrap(),
        CMatrix::from_rows(&[[z, -i], [i, z]]).unwrap(),
    ]
}

struct BarrierTerms {
    log_det: f64,
    grad: Vec4,
    hess: Mat4,
}

impl Prepared {
    fn new(c: &Constraint) -> Self {
        match c.lift {
            Lift::Identity => Prepared::Qubit {
                a: c.bound[(0, 0)].re,
                c: c.bound[(1, 1)].re,
                b: (c.bound[(0, 1)] + c.bound[(1, 0)].conj()) * 0.5,
            },
            Lift::TensorIdentity(d) => Prepared::Tensor {
                d,
                bound: c.bound.hermitian_part(),
            },
        }
    }

    /// Smallest slack eigenvalue at `x`.
    fn min_slack(&self, x: &Vec4) -> Result<f64> {
        match self {
            Prepared::Qubit { a, c, b } => {
                let s00 = x[0] - a;
                let s11 = x[1] - c;
                let s01 = Complex::new(x[2], -x[3]) - b;
                let half_gap = (0.25 * (s00 - s11).powi(2) + s01.norm_sqr()).sqrt();
                Ok(0.5 * (s00 + s11) - half_gap)
            }
            Prepared::Tensor { d, bound } => {
                let s = &to_matrix(x).kron(&CMatrix::identity(*d)) - bound;
                Ok(eig_hermitian(&s.hermitian_part())?.min_eigenvalue())
            }
        }
    }

    /// `-log det S` contributions; `None` when `S` is not positive definite.
    fn terms(&self, x: &Vec4, dirs: &[CMatrix; 4]) -> Result<Option<BarrierTerms>> {
        match self {
            Prepared::Qubit { a, c, b } => {
                let s00 = x[0] - a;
                let s11 = x[1] - c;
                let s01 = Complex::new(x[2], -x[3]) - b;
                let det = s00 * s11 - s01.norm_sqr();
                if !(s00 > 0.0 && s11 > 0.0 && det > 0.0) {
                    return Ok(None);
                }
                // W = S^{-1}
                let w00 = s11 / det;
                let w11 = s00 / det;
                let w01 = -s01 / det;
                let grad = [-w00, -w11, -2.0 * w01.re, 2.0 * w01.im];
                // Tr(W E_k W E_l) for the four directions, written out
                let m = w01.norm_sqr();
                let re2 = w01.re * w01.re - w01.im * w01.im;
                let xy = -4.0 * w01.re * w01.im;
                let hess = [
                    [w00 * w00, m, 2.0 * w00 * w01.re, -2.0 * w00 * w01.im],
                    [m, w11 * w11, 2.0 * w11 * w01.re, -2.0 * w11 * w01.im],
                    [
                        2.0 * w00 * w01.re,
                        2.0 * w11 * w01.re,
                        2.0 * (w00 * w11 + re2),
                        xy,
                    ],
                    [
                        -2.0 * w00 * w01.im,
                        -2.0 * w11 * w01.im,
                        xy,
                        2.0 * (w00 * w11 - re2),
                    ],
                ];
                Ok(Some(BarrierTerms {
                    log_det: det.ln(),
                    grad,
                    hess,
                }))
            }
            Prepared::Tensor { d, bound } => {
                let id = CMatrix::identity(*d);
                let s = &to_matrix(x).kron(&id) - bound;
                let eig = eig_hermitian(&s.hermitian_part())?;
                if eig.min_eigenvalue() <= 0.0 {
                    return Ok(None);
                }
                let log_det = eig.eigenvalues.iter().map(|l| l.ln()).sum();
                let w = eig.map_spectrum(|l| 1.0 / l);
                let m: Vec<CMatrix> = dirs.iter().map(|e| &w * &e.kron(&id)).collect();
                let mut grad = [0.0; 4];
                let mut hess = [[0.0; 4]; 4];
                for k in 0..4 {
                    grad[k] = -m[k].trace().re;
                    for l in k..4 {
                        let n = m[k].rows();
                        let mut t = Complex::new(0.0, 0.0);
                        for i in 0..n {
                            for j in 0..n {
                                t += m[k][(i, j)] * m[l][(j, i)];
                            }
                        }
                        hess[k][l] = t.re;
                        hess[l][k] = t.re;
                    }
                }
                Ok(Some(BarrierTerms { log_det, grad, hess }))
            }
        }
    }
}

/// Solves `Hz = r` for symmetric positive definite 4x4 `h`.
fn cholesky_solve(h: &Mat4, r: &Vec4) -> Option<Vec4> {
    let mut l = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..=i {
            let mut s = h[i][j];
            for k in 0..j {
                s -= l[i][k] * l[j][k];
            }
            if i == j {
                if s <= 0.0 || !s.is_finite() {
                    return None;
                }
                l[i][i] = s.sqrt();
            } else {
                l[i][j] = s / l[j][j];
            }
        }
    }
    let mut y = [0.0; 4];
    for i in 0..4 {
        let mut s = r[i];
        for k in 0..i {
            s -= l[i][k] * y[k];
        }
        y[i] = s / l[i][i];
    }
    let mut z = [0.0; 4];
    for i in (0..4).rev() {
        let mut s = y[i];
        for k in (i + 1)..4 {
            s -= l[k][i] * z[k];
        }
        z[i] = s / l[i][i];
    }
    Some(z)
}

struct Solver<'a> {
    prepared: Vec<Prepared>,
    dirs: [CMatrix; 4],
    problem: &'a TraceMinProblem,
}

impl Solver<'_> {
    /// Gradient and Hessian of `t Tr H + barrier`; `None` outside the domain.
    fn derivatives(&self, x: &Vec4, t: f64) -> Result<Option<(Vec4, Mat4)>> {
        let mut g = [t, t, 0.0, 0.0];
        let mut h = [[0.0; 4]; 4];
        for p in &self.prepared {
            let Some(terms) = p.terms(x, &self.dirs)? else {
                return Ok(None);
            };
            debug_assert!(terms.log_det.is_finite());
            for k in 0..4 {
                g[k] += terms.grad[k];
                for l in 0..4 {
                    h[k][l] += terms.hess[k][l];
                }
            }
        }
        Ok(Some((g, h)))
    }

    fn inside(&self, x: &Vec4) -> Result<bool> {
        for p in &self.prepared {
            if p.terms(x, &self.dirs)?.is_none() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn min_slack(&self, x: &Vec4) -> Result<f64> {
        self.prepared
            .iter()
            .try_fold(f64::INFINITY, |m, p| Ok(m.min(p.min_slack(x)?)))
    }

    fn fail(&self, x: &Vec4, mu: f64, decrement: f64, iterations: usize) -> Error {
        let min_slack = self.min_slack(x).unwrap_or(f64::NAN);
        Error::NonConvergence(Box::new(NonConvergence {
            last_iterate: to_matrix(x),
            value: x[0] + x[1],
            min_slack,
            mu,
            newton_decrement: decrement,
            iterations,
        }))
    }
}

/// Minimises `Tr H` subject to the problem's constraints.
///
/// The returned `optimum` is strictly feasible and its trace lies within
/// `tol` of the infimum. Running out of Newton steps is an error carrying the
/// last iterate.
pub fn solve_trace_min(problem: &TraceMinProblem, tol: f64) -> Result<TraceMinSolution> {
    if !(1e-12..=1e-3).contains(&tol) {
        return Err(Error::InvalidParameter(format!("tol must lie in [1e-12, 1e-3], got {tol}")));
    }
    let solver = Solver {
        prepared: problem.constraints.iter().map(Prepared::new).collect(),
        dirs: basis(),
        problem,
    };

    // (max_i λ_max(A_i) + 1) I strictly dominates every bound under both lifts
    let mut top = f64::NEG_INFINITY;
    for c in &solver.problem.constraints {
        top = top.max(eig_hermitian(&c.bound.hermitian_part())?.max_eigenvalue());
    }
    let mut x: Vec4 = [top + 1.0, top + 1.0, 0.0, 0.0];

    let nu = problem.barrier_degree() as f64;
    let mut mu = MU_START;
    let mut steps = 0usize;
    loop {
        let t = 1.0 / mu;
        let mut decrement = f64::INFINITY;
        loop {
            let Some((g, h)) = solver.derivatives(&x, t)? else {
                return Err(solver.fail(&x, mu, decrement, steps));
            };
            let neg_g = [-g[0], -g[1], -g[2], -g[3]];
            let Some(dx) = cholesky_solve(&h, &neg_g) else {
                return Err(solver.fail(&x, mu, decrement, steps));
            };
            let lambda_sq: f64 = -(0..4).map(|k| g[k] * dx[k]).sum::<f64>();
            decrement = lambda_sq.max(0.0).sqrt();
            if lambda_sq / 2.0 <= CENTERING_TOL {
                break;
            }
            if steps == NEWTON_BUDGET {
                return Err(solver.fail(&x, mu, decrement, steps));
            }
            steps += 1;

            // damped step stays inside the domain of a self-concordant barrier
            let mut alpha = if decrement > 0.25 { 1.0 / (1.0 + decrement) } else { 1.0 };
            let mut moved = false;
            for _ in 0..60 {
                let cand = [
                    x[0] + alpha * dx[0],
                    x[1] + alpha * dx[1],
                    x[2] + alpha * dx[2],
                    x[3] + alpha * dx[3],
                ];
                if solver.inside(&cand)? {
                    x = cand;
                    moved = true;
                    break;
                }
                alpha *= 0.5;
            }
            if !moved {
                return Err(solver.fail(&x, mu, decrement, steps));
            }
        }
        if nu * mu < tol {
            break;
        }
        mu /= MU_FACTOR;
    }

    let optimum = to_matrix(&x);
    Ok(TraceMinSolution {
        value: x[0] + x[1],
        min_slack: solver.min_slack(&x)?,
        optimum,
        iterations: steps,
        barrier_mu_final: mu,
    })
}

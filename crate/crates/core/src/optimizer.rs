//! Multi-start Nelder-Mead search for inputs with a high guessing probability.
//!
//! An input `|φ⟩ ∈ C^d` is parametrised by `2d` unconstrained reals, read as
//! interleaved real and imaginary parts and normalised. Each restart draws a
//! Haar-random starting state from its own RNG stream, so results do not
//! depend on how restarts are scheduled across threads.

use std::cell::Cell;
use std::cmp::Ordering;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::discrimination::dual_value;
use crate::game::{check_unit_interval, ensemble, GameConfig};
use crate::linalg::{Complex, PureState};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizerConfig {
    pub restarts: usize,
    pub max_evals_per_restart: usize,
    /// Stop once the objective values on the simplex differ by less than this.
    pub simplex_tol: f64,
    pub seed: u64,
    pub sdp_tol: f64,
    /// Edge length of the initial simplex.
    pub initial_step: f64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        OptimizerConfig {
            restarts: 64,
            max_evals_per_restart: 2000,
            simplex_tol: 1e-10,
            seed: 0,
            sdp_tol: 1e-9,
            initial_step: 0.2,
        }
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.restarts == 0 || self.max_evals_per_restart == 0 {
            return Err(Error::InvalidParameter(
                "restarts and max_evals_per_restart must be positive".into(),
            ));
        }
        for (name, v) in [
            ("simplex_tol", self.simplex_tol),
            ("sdp_tol", self.sdp_tol),
            ("initial_step", self.initial_step),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidParameter(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct OptResult {
    pub best_state: PureState,
    pub best_value: f64,
    /// Best value of each restart, in restart order.
    pub per_restart_values: Vec<f64>,
    pub evals_used: usize,
}

/// RNG for restart `index`: one ChaCha stream per restart under a common seed.
pub fn restart_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Haar-random unit vector in `C^d`.
pub fn random_pure_state<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Result<PureState> {
    if d == 0 {
        return Err(Error::InvalidParameter("dimension must be >= 1".into()));
    }
    loop {
        let amps: Vec<Complex> = (0..d)
            .map(|_| Complex::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        // a zero draw has probability zero but would not normalise
        if amps.iter().any(|a| a.norm_sqr() > 0.0) {
            return PureState::normalized(amps);
        }
    }
}

/// Interleaved real and imaginary parts.
pub fn params_from_state(phi: &PureState) -> Vec<f64> {
    phi.amplitudes().iter().flat_map(|a| [a.re, a.im]).collect()
}

pub fn state_from_params(x: &[f64]) -> Result<PureState> {
    if x.is_empty() || !x.len().is_multiple_of(2) {
        return Err(Error::DimensionMismatch(format!(
            "need an even, non-zero number of parameters, got {}",
            x.len()
        )));
    }
    PureState::normalized(x.chunks(2).map(|p| Complex::new(p[0], p[1])).collect())
}

/// Guessing probability of the input encoded by `x`; failures score 0.
pub fn pguess_objective(d: usize, gamma: f64, sdp_tol: f64) -> Result<impl Fn(&[f64]) -> f64> {
    let config = GameConfig::new(d, gamma)?;
    Ok(move |x: &[f64]| {
        let value = state_from_params(x)
            .and_then(|phi| ensemble(&config, &phi))
            .and_then(|ens| dual_value(&ens, sdp_tol));
        match value {
            Ok(v) => v,
            Err(e) => {
                log::warn!("objective failed at d = {d}, gamma = {gamma}: {e}");
                0.0
            }
        }
    })
}

#[derive(Debug, Clone)]
pub struct NelderMeadOutcome {
    pub x: Vec<f64>,
    pub value: f64,
    pub evals: usize,
    pub converged: bool,
}

/// Maximises `objective` by the downhill simplex method on its negative.
///
/// Coefficients are the standard ones: reflection 1, expansion 2,
/// contraction ½, shrink ½. The initial simplex is `x0` plus `step` along
/// each axis. Stops when the objective spread over the simplex drops below
/// `simplex_tol` or after `max_evals` evaluations, returning the best point
/// seen either way.
pub fn nelder_mead(
    objective: impl Fn(&[f64]) -> f64,
    x0: &[f64],
    max_evals: usize,
    simplex_tol: f64,
    step: f64,
) -> NelderMeadOutcome {
    let n = x0.len();
    let count = Cell::new(0usize);
    let evals = || count.get();
    // minimise f = -objective
    let f = |x: &[f64]| {
        count.set(count.get() + 1);
        let v = -objective(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };

    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    let f0 = f(x0);
    simplex.push((x0.to_vec(), f0));
    for i in 0..n {
        if evals() >= max_evals {
            break;
        }
        let mut x = x0.to_vec();
        x[i] += step;
        let v = f(&x);
        simplex.push((x, v));
    }
    let by_value = |a: &(Vec<f64>, f64), b: &(Vec<f64>, f64)| a.1.partial_cmp(&b.1).unwrap_or(Ordering::Equal);
    if simplex.len() < n + 1 || n == 0 {
        simplex.sort_by(by_value);
        let (x, v) = simplex.swap_remove(0);
        return NelderMeadOutcome { x, value: -v, evals: evals(), converged: n == 0 };
    }

    let mut converged = false;
    loop {
        simplex.sort_by(by_value);
        let spread = simplex[n].1 - simplex[0].1;
        if spread < simplex_tol {
            converged = true;
            break;
        }
        if evals() >= max_evals {
            break;
        }

        let mut centroid = vec![0.0; n];
        for (x, _) in &simplex[..n] {
            for (c, xi) in centroid.iter_mut().zip(x) {
                *c += xi / n as f64;
            }
        }
        let towards = |t: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(&simplex[n].0)
                .map(|(c, w)| c + t * (w - c))
                .collect()
        };

        let xr = towards(-1.0);
        let fr = f(&xr);
        if fr < simplex[0].1 {
            if evals() >= max_evals {
                simplex[n] = (xr, fr);
                continue;
            }
            let xe = towards(-2.0);
            let fe = f(&xe);
            simplex[n] = if fe < fr { (xe, fe) } else { (xr, fr) };
        } else if fr < simplex[n - 1].1 {
            simplex[n] = (xr, fr);
        } else {
            if evals() >= max_evals {
                if fr < simplex[n].1 {
                    simplex[n] = (xr, fr);
                }
                continue;
            }
            let (xc, fc) = if fr < simplex[n].1 {
                let xc = towards(-0.5);
                let fc = f(&xc);
                (xc, fc)
            } else {
                let xc = towards(0.5);
                let fc = f(&xc);
                (xc, fc)
            };
            if fc < simplex[n].1.min(fr) {
                simplex[n] = (xc, fc);
            } else {
                let best = simplex[0].0.clone();
                for vertex in simplex.iter_mut().skip(1) {
                    if evals() >= max_evals {
                        break;
                    }
                    let x: Vec<f64> = best
                        .iter()
                        .zip(&vertex.0)
                        .map(|(b, v)| b + 0.5 * (v - b))
                        .collect();
                    let v = f(&x);
                    *vertex = (x, v);
                }
            }
        }
    }
    simplex.sort_by(by_value);
    let (x, v) = simplex.swap_remove(0);
    NelderMeadOutcome { x, value: -v, evals: evals(), converged }
}

struct RestartOutcome {
    state: PureState,
    value: f64,
    evals: usize,
}

/// Nelder-Mead from `start`, then re-seeded with smaller simplices from the
/// best point while that still improves and budget remains.
fn search_from(
    objective: &impl Fn(&[f64]) -> f64,
    start: &PureState,
    config: &OptimizerConfig,
) -> Result<RestartOutcome> {
    let mut x = params_from_state(start);
    let mut value = f64::NEG_INFINITY;
    let mut evals = 0;
    let mut step = config.initial_step;
    while evals < config.max_evals_per_restart {
        let out = nelder_mead(
            objective,
            &x,
            config.max_evals_per_restart - evals,
            config.simplex_tol,
            step,
        );
        evals += out.evals;
        let improved = out.value - value;
        if out.value > value {
            // renormalise so later simplices are scaled to the state
            x = params_from_state(&state_from_params(&out.x)?);
            value = out.value;
        }
        if !out.converged || improved < config.simplex_tol {
            break;
        }
        step *= 0.1;
    }
    Ok(RestartOutcome {
        state: state_from_params(&x)?,
        value,
        evals,
    })
}

fn lexicographic(a: &PureState, b: &PureState) -> Ordering {
    for (x, y) in a.amplitudes().iter().zip(b.amplitudes()) {
        let o = x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im));
        if o != Ordering::Equal {
            return o;
        }
    }
    Ordering::Equal
}

fn merge(outcomes: Vec<RestartOutcome>) -> OptResult {
    let per_restart_values = outcomes.iter().map(|o| o.value).collect();
    let evals_used = outcomes.iter().map(|o| o.evals).sum();
    let best = outcomes
        .into_iter()
        .reduce(|a, b| match b.value.total_cmp(&a.value) {
            Ordering::Greater => b,
            Ordering::Less => a,
            Ordering::Equal => {
                if lexicographic(&b.state, &a.state) == Ordering::Less {
                    b
                } else {
                    a
                }
            }
        })
        .expect("at least one restart");
    OptResult {
        best_state: best.state,
        best_value: best.value,
        per_restart_values,
        evals_used,
    }
}

fn run(d: usize, gamma: f64, config: &OptimizerConfig, warm: Option<&PureState>) -> Result<OptResult> {
    config.validate()?;
    check_unit_interval(gamma)?;
    let objective = pguess_objective(d, gamma, config.sdp_tol)?;
    let mut outcomes = (0..config.restarts as u64)
        .into_par_iter()
        .map(|i| {
            let start = random_pure_state(d, &mut restart_rng(config.seed, i))?;
            search_from(&objective, &start, config)
        })
        .collect::<Result<Vec<_>>>()?;
    if let Some(w) = warm {
        outcomes.push(search_from(&objective, w, config)?);
    }
    Ok(merge(outcomes))
}

/// Best guessing probability found over `config.restarts` random starts.
///
/// The value is that of a concrete state, so it is a lower bound on the true
/// optimum up to the SDP tolerance.
pub fn maximize_pguess(d: usize, gamma: f64, config: &OptimizerConfig) -> Result<OptResult> {
    run(d, gamma, config, None)
}

/// Runs [`maximize_pguess`] along an ascending grid, adding the previous
/// point's best state as one extra restart (its value is appended last to
/// `per_restart_values`).
pub fn sweep_gamma(d: usize, gamma_grid: &[f64], config: &OptimizerConfig) -> Result<Vec<OptResult>> {
    for &g in gamma_grid {
        check_unit_interval(g)?;
    }
    if gamma_grid.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::InvalidParameter("gamma grid must be ascending".into()));
    }
    let mut out: Vec<OptResult> = Vec::with_capacity(gamma_grid.len());
    for &g in gamma_grid {
        let warm = out.last().map(|r| r.best_state.clone());
        out.push(run(d, g, config, warm.as_ref())?);
    }
    Ok(out)
}

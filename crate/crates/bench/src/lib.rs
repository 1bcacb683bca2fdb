//! Fixed inputs shared by the benchmarks.

use ugame_core::game::{ensemble, joint_state_t2, phi_jl, Ensemble, GameConfig};
use ugame_core::optimizer::{random_pure_state, restart_rng};
use ugame_core::{CMatrix, PureState};

pub const SEED: u64 = 17;

pub fn random_state(d: usize) -> PureState {
    random_pure_state(d, &mut restart_rng(SEED, d as u64)).expect("d >= 1")
}

/// Dense Hermitian `n x n` matrix built from a few random projectors.
pub fn hermitian(n: usize) -> CMatrix {
    let mut m = CMatrix::zeros(n, n);
    for k in 0..3u64 {
        let v = random_pure_state(n, &mut restart_rng(SEED, 100 + k)).expect("n >= 1");
        m = &m + &v.density_matrix().scale_real(k as f64 + 1.0);
    }
    m.hermitian_part()
}

pub fn game_ensemble(d: usize, gamma: f64) -> Ensemble {
    ensemble(&GameConfig::new(d, gamma).expect("valid game"), &random_state(d)).expect("pure input")
}

pub fn joint_d2(gamma: f64) -> CMatrix {
    let cfg = GameConfig::new(2, gamma).expect("valid game");
    joint_state_t2(&cfg, &phi_jl(2, 0, 1).expect("valid indices").density_matrix()).expect("valid state")
}

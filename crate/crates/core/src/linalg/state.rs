use super::eigen::canonical_phase;
use super::{check_finite, CMatrix, Complex};
use crate::{Error, Result};

/// Unit vector in `C^d` with a canonical global phase: the first amplitude of
/// modulus above `1e-10` is real and non-negative.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amplitudes: Vec<Complex>,
}

impl PureState {
    /// Accepts amplitudes already normalised to within `1e-10`.
    pub fn new(amplitudes: Vec<Complex>) -> Result<Self> {
        let norm = validated_norm(&amplitudes)?;
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidState(format!(
                "amplitudes have norm {norm}, expected 1"
            )));
        }
        Ok(PureState::from_raw(amplitudes, norm))
    }

    /// Normalises arbitrary non-zero amplitudes.
    pub fn normalized(amplitudes: Vec<Complex>) -> Result<Self> {
        let norm = validated_norm(&amplitudes)?;
        if norm < 1e-300 {
            return Err(Error::InvalidState("zero vector has no direction".into()));
        }
        Ok(PureState::from_raw(amplitudes, norm))
    }

    fn from_raw(mut amplitudes: Vec<Complex>, norm: f64) -> Self {
        for a in &mut amplitudes {
            *a /= norm;
        }
        canonical_phase(&mut amplitudes);
        PureState { amplitudes }
    }

    /// Computational basis state `|k>` in dimension `dim`.
    pub fn basis(dim: usize, k: usize) -> Result<Self> {
        if k >= dim {
            return Err(Error::InvalidState(format!("|{k}> does not exist in dimension {dim}")));
        }
        let mut a = vec![Complex::new(0.0, 0.0); dim];
        a[k] = Complex::new(1.0, 0.0);
        Ok(PureState { amplitudes: a })
    }

    /// Real amplitudes, normalised.
    pub fn from_real(amplitudes: &[f64]) -> Result<Self> {
        PureState::normalized(amplitudes.iter().map(|&x| Complex::new(x, 0.0)).collect())
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex] {
        &self.amplitudes
    }

    /// `|psi><psi|`.
    pub fn density_matrix(&self) -> CMatrix {
        CMatrix::outer(&self.amplitudes, &self.amplitudes)
    }

    /// `<self|other>`.
    pub fn overlap(&self, other: &PureState) -> Complex {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// `U|psi>`, renormalised and phase-fixed.
    pub fn evolve(&self, u: &CMatrix) -> Result<PureState> {
        PureState::normalized(u.apply(&self.amplitudes)?)
    }

    /// `|self> ⊗ |other>`.
    pub fn tensor(&self, other: &PureState) -> PureState {
        let amps = self
            .amplitudes
            .iter()
            .flat_map(|a| other.amplitudes.iter().map(move |b| a * b))
            .collect();
        PureState { amplitudes: amps }
    }
}

fn validated_norm(amplitudes: &[Complex]) -> Result<f64> {
    if amplitudes.is_empty() {
        return Err(Error::InvalidState("state needs at least one amplitude".into()));
    }
    for a in amplitudes {
        check_finite(*a, "state amplitude")?;
    }
    Ok(amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
}

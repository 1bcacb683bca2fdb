use std::path::Path;

use serde::Deserialize;
use ugame_core::{Complex, PureState};

use crate::error::{CliError, CliResult};

const NORM_WARN_TOL: f64 = 1e-6;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct StateFile {
    d: usize,
    amplitudes: Vec<[f64; 2]>,
}

pub fn load(path: &Path) -> CliResult<PureState> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse(&text).map_err(|msg| CliError::Usage(format!("{}: {msg}", path.display())))
}

/// Parses `{"d": n, "amplitudes": [[re, im], ...]}`, renormalising with a warning.
pub fn parse(text: &str) -> Result<PureState, String> {
    let file: StateFile = serde_json::from_str(text)
        .map_err(|e| {
            let msg = e.to_string();
            let suffix = format!(" at line {} column {}", e.line(), e.column());
            let msg = msg.strip_suffix(&suffix).unwrap_or(&msg);
            format!("line {}, column {}: {msg}", e.line(), e.column())
        })?;
    if file.d < 2 {
        return Err(format!("field `d`: must be at least 2, got {}", file.d));
    }
    if file.amplitudes.len() != file.d {
        return Err(format!(
            "field `amplitudes`: expected {} entries for d = {}, got {}",
            file.d,
            file.d,
            file.amplitudes.len()
        ));
    }
    if let Some(i) = file.amplitudes.iter().position(|a| !a.iter().all(|v| v.is_finite())) {
        return Err(format!("field `amplitudes[{i}]`: non-finite component"));
    }
    let amps: Vec<Complex> = file.amplitudes.iter().map(|&[re, im]| Complex::new(re, im)).collect();
    let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    if norm == 0.0 {
        return Err("field `amplitudes`: zero vector".into());
    }
    if (norm - 1.0).abs() > NORM_WARN_TOL {
        log::warn!("state has norm {norm}; normalising");
    }
    PureState::normalized(amps).map_err(|e| format!("field `amplitudes`: {e}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_a_valid_state() {
        let s = parse(r#"{"d": 2, "amplitudes": [[0.6, 0], [0, 0.8]]}"#).unwrap();
        assert_eq!(s.dim(), 2);
        assert!((s.amplitudes()[0].norm() - 0.6).abs() < 1e-15);
    }

    #[test]
    fn renormalises() {
        let s = parse(r#"{"d": 2, "amplitudes": [[1, 0], [1, 0]]}"#).unwrap();
        let n: f64 = s.amplitudes().iter().map(|a| a.norm_sqr()).sum();
        assert!((n - 1.0).abs() < 1e-14);
    }

    #[test]
    fn syntax_errors_carry_position() {
        let err = parse("{\"d\": 2,\n \"amplitudes\": [[1, 0], [0 0]]}").unwrap_err();
        assert!(err.starts_with("line 2, column"), "{err}");
    }

    #[test]
    fn field_errors_name_the_field() {
        assert!(parse(r#"{"d": 3, "amplitudes": [[1, 0]]}"#).unwrap_err().contains("`amplitudes`"));
        assert!(parse(r#"{"d": 1, "amplitudes": [[1, 0]]}"#).unwrap_err().contains("`d`"));
        assert!(parse(r#"{"d": 2, "amplitudes": [[0, 0], [0, 0]]}"#).unwrap_err().contains("zero"));
        assert!(parse(r#"{"d": 2, "amps": []}"#).unwrap_err().contains("amps"));
        assert!(parse(r#"{"d": 2, "amplitudes": [[1, 0, 3], [0, 0]]}"#).is_err());
    }
}

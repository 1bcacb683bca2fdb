use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;
use ugame_core::analytic::{pguess_max_d2, pguess_max_gamma0};
use ugame_core::discrimination::{certificate_phi_jl, pguess_phi_jl_closed_form, pguess_sdp};
use ugame_core::entropy::entropy_curve_d2;
use ugame_core::game::{ensemble, joint_schmidt_t2, phi_jl, GameConfig};
use ugame_core::optimizer::{maximize_pguess, sweep_gamma, OptimizerConfig};
use ugame_core::sdp::{is_feasible, TraceMinProblem};

use crate::error::{CliError, CliResult};
use crate::output::{emit, fmt_num, write_with_manifest, RunManifest, Table};
use crate::svg::{Chart, Series};
use crate::{state_file, CurveMode, OutputFormat};

pub const SDP_TOL: f64 = 1e-9;
pub const CERTIFY_TOL: f64 = 1e-7;
pub const SLACK_TOL: f64 = 1e-9;

/// `steps` evenly spaced points from `start` to `end` inclusive.
pub fn gamma_grid(start: f64, end: f64, steps: usize) -> CliResult<Vec<f64>> {
    if !(0.0..=1.0).contains(&start) || !(0.0..=1.0).contains(&end) || start > end {
        return Err(CliError::Usage(format!(
            "need 0 <= gamma-start <= gamma-end <= 1, got {start} and {end}"
        )));
    }
    if steps == 0 {
        return Err(CliError::Usage("--steps must be at least 1".into()));
    }
    if steps == 1 {
        return Ok(vec![start]);
    }
    let n = (steps - 1) as f64;
    Ok((0..steps)
        .map(|i| if i == steps - 1 { end } else { start + (end - start) * i as f64 / n })
        .collect())
}

fn optimizer_config(seed: u64, restarts: usize) -> OptimizerConfig {
    OptimizerConfig { restarts, seed, ..OptimizerConfig::default() }
}

fn curve_table(d: usize, grid: &[f64], values: &[f64], mode: &str) -> Table {
    let mut t = Table::new(["gamma", "p_guess", "mode", "d"]);
    for (g, p) in grid.iter().zip(values) {
        t.push(vec![fmt_num(*g), fmt_num(*p), mode.into(), d.to_string()]);
    }
    t
}

pub struct CurveArgs {
    pub d: usize,
    pub gamma_start: f64,
    pub gamma_end: f64,
    pub steps: usize,
    pub mode: CurveMode,
    pub out: Option<PathBuf>,
    pub seed: u64,
    pub restarts: usize,
}

pub fn curve(a: &CurveArgs) -> CliResult<()> {
    if a.d < 2 {
        return Err(CliError::Usage(format!("--d must be at least 2, got {}", a.d)));
    }
    let grid = gamma_grid(a.gamma_start, a.gamma_end, a.steps)?;
    let values: Vec<f64> = match a.mode {
        CurveMode::Analytic if a.d == 2 => grid.iter().map(|&g| pguess_max_d2(g)).collect::<Result<_, _>>()?,
        CurveMode::Analytic if grid.iter().all(|&g| g == 0.0) => vec![pguess_max_gamma0(a.d)?; grid.len()],
        CurveMode::Analytic => {
            return Err(CliError::Usage(format!(
                "no closed form for d = {} at gamma > 0; use --mode numeric",
                a.d
            )))
        }
        CurveMode::Numeric => sweep_gamma(a.d, &grid, &optimizer_config(a.seed, a.restarts))?
            .iter()
            .map(|r| r.best_value)
            .collect(),
    };
    let mode = a.mode.as_str();
    let manifest = RunManifest::new("curve", a.seed)
        .param("d", a.d)
        .param("gamma_start", a.gamma_start)
        .param("gamma_end", a.gamma_end)
        .param("steps", a.steps)
        .param("mode", mode)
        .param("restarts", a.restarts);
    emit(a.out.as_deref(), &curve_table(a.d, &grid, &values, mode).to_csv(), &manifest)
}

pub struct Fig3Args {
    pub dims: Vec<usize>,
    pub steps: usize,
    pub out_dir: PathBuf,
    pub seed: u64,
    pub restarts: usize,
}

pub fn fig3(a: &Fig3Args) -> CliResult<()> {
    if a.dims.is_empty() || a.dims.iter().any(|&d| d < 2) {
        return Err(CliError::Usage(format!("--dims needs entries >= 2, got {:?}", a.dims)));
    }
    let grid = gamma_grid(0.0, 1.0, a.steps)?;
    let config = optimizer_config(a.seed, a.restarts);
    std::fs::create_dir_all(&a.out_dir).map_err(|e| CliError::io(&a.out_dir, e))?;
    let curves: Vec<(usize, Vec<f64>)> = a
        .dims
        .par_iter()
        .map(|&d| {
            let values = sweep_gamma(d, &grid, &config)?.iter().map(|r| r.best_value).collect();
            Ok((d, values))
        })
        .collect::<CliResult<_>>()?;
    let manifest = |d: Option<usize>| {
        RunManifest::new("fig3", a.seed)
            .param("dims", &a.dims)
            .param("d", d)
            .param("steps", a.steps)
            .param("restarts", a.restarts)
    };
    for (d, values) in &curves {
        let path = a.out_dir.join(format!("fig3_d{d}.csv"));
        write_with_manifest(&path, &curve_table(*d, &grid, values, "numeric").to_csv(), &manifest(Some(*d)))?;
    }
    let series: Vec<Series> = curves
        .iter()
        .map(|(d, values)| Series {
            label: format!("d = {d}"),
            points: grid.iter().copied().zip(values.iter().copied()).collect(),
        })
        .collect();
    let svg = Chart {
        title: "Best guessing probability against register coherence",
        x_label: "gamma",
        y_label: "p_guess",
        series: &series,
    }
    .render();
    write_with_manifest(&a.out_dir.join("fig3.svg"), &svg, &manifest(None))
}

pub fn schmidt(d: usize, seed: u64, restarts: usize, out: Option<&Path>) -> CliResult<()> {
    if d < 2 {
        return Err(CliError::Usage(format!("--d must be at least 2, got {d}")));
    }
    let r = maximize_pguess(d, 1.0, &optimizer_config(seed, restarts))?;
    let coeffs = joint_schmidt_t2(&GameConfig::new(d, 1.0)?, &r.best_state)?;
    let mut header = vec!["d".to_string(), "p_guess".into()];
    header.extend((1..=coeffs.len()).map(|k| format!("schmidt_{k}")));
    let mut t = Table::new(header);
    let mut row = vec![d.to_string(), fmt_num(r.best_value)];
    row.extend(coeffs.iter().map(|&c| fmt_num(c)));
    t.push(row);
    let manifest = RunManifest::new("schmidt", seed).param("d", d).param("restarts", restarts);
    emit(out, &t.to_csv(), &manifest)
}

pub fn entropy(steps: usize, cross_check: bool, out: Option<&Path>) -> CliResult<()> {
    if steps < 2 {
        return Err(CliError::Usage(format!("--steps must be at least 2, got {steps}")));
    }
    let grid = gamma_grid(0.0, 1.0, steps)?;
    let points = entropy_curve_d2(&grid, cross_check)?;
    let columns = ["h_B_given_R", "h_X_given_R", "h_P_given_R_t1", "h_P_given_R_t2"];
    let mut t = Table::new(std::iter::once("gamma").chain(columns));
    for p in &points {
        t.push(
            [p.gamma, p.h_b_given_r, p.h_x_given_r, p.h_p_given_r_t1, p.h_p_given_r_t2]
                .iter()
                .map(|&v| fmt_num(v))
                .collect(),
        );
    }
    let manifest = || RunManifest::new("entropy", 0).param("steps", steps).param("cross_check", cross_check);
    emit(out, &t.to_csv(), &manifest())?;
    if let Some(path) = out {
        let pick: [fn(&ugame_core::entropy::EntropyCurvePoint) -> f64; 4] =
            [|p| p.h_b_given_r, |p| p.h_x_given_r, |p| p.h_p_given_r_t1, |p| p.h_p_given_r_t2];
        let series: Vec<Series> = columns
            .iter()
            .zip(pick)
            .map(|(label, f)| Series {
                label: label.to_string(),
                points: points.iter().map(|p| (p.gamma, f(p))).collect(),
            })
            .collect();
        let svg = Chart {
            title: "Conditional min-entropies for d = 2",
            x_label: "gamma",
            y_label: "bits",
            series: &series,
        }
        .render();
        write_with_manifest(&path.with_extension("svg"), &svg, &manifest())?;
    }
    Ok(())
}

#[derive(Serialize)]
struct DiscriminationReport {
    d: usize,
    gamma: f64,
    p_guess: f64,
    dual_value: f64,
    primal_value: f64,
    gap: f64,
    probabilities: Vec<f64>,
}

pub fn discriminate(state_path: &Path, gamma: f64, format: OutputFormat) -> CliResult<()> {
    let phi = state_file::load(state_path)?;
    let d = phi.dim();
    let ens = ensemble(&GameConfig::new(d, gamma)?, &phi)?;
    let r = pguess_sdp(&ens, SDP_TOL)?;
    let report = DiscriminationReport {
        d,
        gamma,
        p_guess: r.p_guess,
        dual_value: r.dual_value,
        primal_value: r.primal_value,
        gap: r.gap,
        probabilities: ens.probabilities(),
    };
    match format {
        OutputFormat::Json => {
            println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
        }
        OutputFormat::Csv => {
            let mut header: Vec<String> =
                ["d", "gamma", "p_guess", "dual_value", "primal_value", "gap"].map(String::from).into();
            header.extend((0..d).map(|x| format!("p_{x}")));
            let mut t = Table::new(header);
            let mut row = vec![d.to_string()];
            row.extend([gamma, r.p_guess, r.dual_value, r.primal_value, r.gap].map(fmt_num));
            row.extend(report.probabilities.iter().map(|&p| fmt_num(p)));
            t.push(row);
            print!("{}", t.to_csv());
        }
    }
    Ok(())
}

pub fn certify(d: usize, gamma: f64, j: usize, l: usize) -> CliResult<()> {
    if j == l {
        return Err(CliError::Usage(format!("--j and --l must differ, both are {j}")));
    }
    let q = certificate_phi_jl(d, gamma, j, l)?;
    let closed = pguess_phi_jl_closed_form(d, gamma, j, l)?;
    let ens = ensemble(&GameConfig::new(d, gamma)?, &phi_jl(d, j, l)?)?;
    let sdp = pguess_sdp(&ens, SDP_TOL)?.dual_value;
    let slack = is_feasible(&q, &TraceMinProblem::dominating(ens.states())?, SLACK_TOL)?.min_slack;
    let trace = q.trace().re;
    let spread = (trace - closed).abs().max((trace - sdp).abs()).max((closed - sdp).abs());
    let ok = spread <= CERTIFY_TOL && slack >= -SLACK_TOL;

    let mut t = Table::new(["d", "gamma", "j", "l", "trace_certificate", "closed_form", "sdp_value", "min_slack", "status"]);
    t.push(vec![
        d.to_string(),
        fmt_num(gamma),
        j.to_string(),
        l.to_string(),
        fmt_num(trace),
        fmt_num(closed),
        fmt_num(sdp),
        fmt_num(slack),
        if ok { "ok" } else { "violated" }.into(),
    ]);
    print!("{}", t.to_csv());
    if ok {
        Ok(())
    } else {
        Err(CliError::Verification(format!(
            "values disagree by {spread:e} or certificate slack {slack:e} is negative"
        )))
    }
}

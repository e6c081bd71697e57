//! Sweep execution and CSV output.

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::time::{SystemTime, UNIX_EPOCH};

use rayon::prelude::*;

use super::config::{OutputKind, SweepSpec};
use crate::error::Error;
use crate::jc::{jc_ground_index, jc_spectrum};
use crate::observables::{ground_state_report, model_spectrum, GroundStateReport};
use crate::pair_theory::{check_unitary_equivalence, EquivalenceReport};

#[derive(Debug)]
pub enum SweepError {
    Config(Vec<String>),
    Io(String),
}

impl SweepError {
    pub fn exit_code(&self) -> i32 {
        match self {
            SweepError::Config(_) => 2,
            SweepError::Io(_) => 4,
        }
    }
}

impl std::fmt::Display for SweepError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SweepError::Config(errs) => {
                writeln!(f, "invalid configuration:")?;
                for e in errs {
                    writeln!(f, "  {e}")?;
                }
                Ok(())
            }
            SweepError::Io(msg) => write!(f, "i/o error: {msg}"),
        }
    }
}

impl std::error::Error for SweepError {}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepOutcome {
    pub files: Vec<PathBuf>,
    /// Grid points where some computation failed (written with `converged=false`).
    pub failures: Vec<(f64, String)>,
}

impl SweepOutcome {
    pub fn exit_code(&self) -> i32 {
        if self.failures.is_empty() {
            0
        } else {
            3
        }
    }
}

/// Float with 12 significant digits; `-0` prints as `0`.
pub fn fmt_float(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x == 0.0 {
        return "0.00000000000e0".into();
    }
    format!("{x:.11e}")
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map_or_else(|| "nan".into(), fmt_float)
}

type JcRow = (Option<i64>, Vec<f64>);

struct PointResult {
    g_over_omega: f64,
    energies: Option<Result<(Vec<f64>, usize), Error>>,
    report: Option<Result<GroundStateReport, Error>>,
    jc: Option<Result<JcRow, Error>>,
    equivalence: Option<Result<EquivalenceReport, Error>>,
}

fn evaluate(spec: &SweepSpec, x: f64) -> PointResult {
    let p = spec.params_at(x);
    let policy = spec.policy.levels(spec.levels);
    let wants = |k| spec.outputs.contains(&k);
    let energies = wants(OutputKind::Energies).then(|| {
        model_spectrum(&p.renormalized_model(), &policy, false)
            .map(|ms| (ms.spectrum.eigenvalues, ms.spectrum.truncation_used))
    });
    let report = (wants(OutputKind::Observables) || wants(OutputKind::Bounds)).then(|| ground_state_report(&p, &policy));
    let jc = wants(OutputKind::Jc).then(|| {
        let omega = p.omega_c;
        let levels = jc_spectrum(omega, p.g, spec.levels)?;
        let index = match jc_ground_index(omega, p.g) {
            Ok(i) => Some(i),
            Err(Error::Degenerate { .. }) => None,
            Err(e) => return Err(e),
        };
        Ok((index, levels.iter().take(spec.levels).map(|l| l.energy).collect()))
    });
    let equivalence = wants(OutputKind::Equivalence).then(|| check_unitary_equivalence(&p, spec.levels, &spec.policy));
    PointResult {
        g_over_omega: x,
        energies,
        report,
        jc,
        equivalence,
    }
}

/// Evaluates every grid point; results in grid order.
fn evaluate_all(spec: &SweepSpec, workers: Option<usize>) -> Result<Vec<PointResult>, SweepError> {
    let points = spec.g_grid.points();
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(w) = workers {
        builder = builder.num_threads(w.max(1));
    }
    let pool = builder.build().map_err(|e| SweepError::Io(e.to_string()))?;
    Ok(pool.install(|| points.par_iter().map(|&x| evaluate(spec, x)).collect()))
}

fn header(spec: &SweepSpec) -> String {
    if spec.no_timestamp {
        String::new()
    } else {
        let secs = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs());
        format!("# generated_unix={secs}\n")
    }
}

fn level_columns(prefix: &str, n: usize) -> String {
    (0..n).map(|i| format!(",{prefix}{i}")).collect()
}

fn nan_cells(n: usize) -> String {
    ",nan".repeat(n)
}

const OBS_HEADER: &str = "g_over_omega,E0,E1,N0_ren,N0_bare,upper_ren,lower_ren,bare_lower,gse_lower,gse_upper,delta_phi_sq,parity,coherent_overlap,vacuum_weight,sandwich_ok,truncation_N,converged";

fn note_failure(failures: &mut Vec<(f64, String)>, x: f64, e: &Error) {
    if !failures.iter().any(|(y, _)| *y == x) {
        failures.push((x, e.to_string()));
    }
}

fn energies_csv(spec: &SweepSpec, results: &[PointResult], shifted: bool, failures: &mut Vec<(f64, String)>) -> String {
    let mut out = header(spec);
    let _ = writeln!(out, "g_over_omega{},truncation_N,converged", level_columns("level_", spec.levels));
    for r in results {
        let x = fmt_float(r.g_over_omega);
        match r.energies.as_ref().expect("requested") {
            Ok((levels, n)) => {
                let g = r.g_over_omega * spec.params.omega_c;
                let shift = if shifted { g * g / spec.params.omega_c } else { 0.0 };
                let cells: String = (0..spec.levels)
                    .map(|k| format!(",{}", fmt_opt(levels.get(k).map(|e| e + shift))))
                    .collect();
                let _ = writeln!(out, "{x}{cells},{n},true");
            }
            Err(e) => {
                note_failure(failures, r.g_over_omega, e);
                let n = match e {
                    Error::NotConverged { cutoff, .. } => cutoff.to_string(),
                    _ => "nan".into(),
                };
                let _ = writeln!(out, "{x}{},{n},false", nan_cells(spec.levels));
            }
        }
    }
    out
}

fn observables_csv(spec: &SweepSpec, results: &[PointResult], failures: &mut Vec<(f64, String)>) -> String {
    let mut out = header(spec);
    let _ = writeln!(out, "{OBS_HEADER}");
    for r in results {
        let x = fmt_float(r.g_over_omega);
        match r.report.as_ref().expect("requested") {
            Ok(rep) => {
                let parity = rep.parity.map_or_else(|| "none".into(), |p| p.to_string());
                let cells = [
                    fmt_float(rep.e0),
                    fmt_float(rep.e1),
                    fmt_float(rep.n0_ren),
                    fmt_float(rep.n0_bare),
                    fmt_float(rep.upper_bound_ren),
                    fmt_float(rep.lower_bound_ren),
                    fmt_opt(rep.bare_lower_bound),
                    fmt_float(rep.gse_lower),
                    fmt_float(rep.gse_upper),
                    fmt_float(rep.delta_phi_sq),
                    parity,
                    fmt_opt(rep.coherent_overlap),
                    fmt_float(rep.witness.vacuum_weight),
                    rep.sandwich_ok().to_string(),
                    rep.truncation_used.to_string(),
                    "true".into(),
                ];
                let _ = writeln!(out, "{x},{}", cells.join(","));
            }
            Err(e) => {
                note_failure(failures, r.g_over_omega, e);
                let _ = writeln!(out, "{x}{},none,nan,nan,false,nan,false", nan_cells(10));
            }
        }
    }
    out
}

fn jc_csv(spec: &SweepSpec, results: &[PointResult], failures: &mut Vec<(f64, String)>) -> String {
    let mut out = header(spec);
    let _ = writeln!(out, "g_over_omega,ground_index,ground_energy{}", level_columns("level_", spec.levels));
    for r in results {
        let x = fmt_float(r.g_over_omega);
        match r.jc.as_ref().expect("requested") {
            Ok((index, levels)) => {
                let idx = index.map_or_else(|| "degenerate".into(), |i| i.to_string());
                let cells: String = levels.iter().map(|e| format!(",{}", fmt_float(*e))).collect();
                let _ = writeln!(out, "{x},{idx},{}{cells}", fmt_float(levels[0]));
            }
            Err(e) => {
                note_failure(failures, r.g_over_omega, e);
                let _ = writeln!(out, "{x},nan,nan{}", nan_cells(spec.levels));
            }
        }
    }
    out
}

fn equivalence_csv(spec: &SweepSpec, results: &[PointResult], failures: &mut Vec<(f64, String)>) -> String {
    let mut out = header(spec);
    let _ = writeln!(out, "g_over_omega,levels_compared,max_abs_deviation,n_direct,n_renormalized,within_tol,converged");
    for r in results {
        let x = fmt_float(r.g_over_omega);
        match r.equivalence.as_ref().expect("requested") {
            Ok(rep) => {
                let ok = rep.max_abs_deviation <= 10.0 * spec.policy.tol;
                let _ = writeln!(
                    out,
                    "{x},{},{},{},{},{ok},true",
                    rep.levels_compared,
                    fmt_float(rep.max_abs_deviation),
                    rep.n_direct,
                    rep.n_renormalized
                );
            }
            Err(e) => {
                note_failure(failures, r.g_over_omega, e);
                let _ = writeln!(out, "{x},{},nan,nan,nan,false,false", spec.levels);
            }
        }
    }
    out
}

/// Equivalence table for every grid point, as written to `equivalence.csv`.
pub fn equivalence_table(spec: &SweepSpec, workers: Option<usize>) -> Result<(String, Vec<(f64, String)>), SweepError> {
    let mut spec = spec.clone();
    spec.outputs = [OutputKind::Equivalence].into_iter().collect();
    let results = evaluate_all(&spec, workers)?;
    let mut failures = Vec::new();
    let table = equivalence_csv(&spec, &results, &mut failures);
    for r in &results {
        if let Some(Ok(rep)) = &r.equivalence {
            if rep.max_abs_deviation > 10.0 * spec.policy.tol {
                failures.push((r.g_over_omega, format!("deviation {:e}", rep.max_abs_deviation)));
            }
        }
    }
    Ok((table, failures))
}

/// Runs the sweep and writes one CSV per requested output under `spec.out_path`.
pub fn run_sweep(spec: &SweepSpec, workers: Option<usize>) -> Result<SweepOutcome, SweepError> {
    let results = evaluate_all(spec, workers)?;
    let dir = &spec.out_path;
    fs::create_dir_all(dir).map_err(|e| SweepError::Io(format!("{}: {e}", dir.display())))?;
    let mut failures = Vec::new();
    let mut files = Vec::new();
    let mut tables: Vec<(&str, String)> = Vec::new();
    for kind in &spec.outputs {
        match kind {
            OutputKind::Energies => {
                tables.push(("energies.csv", energies_csv(spec, &results, false, &mut failures)));
                tables.push(("energies_shifted.csv", energies_csv(spec, &results, true, &mut failures)));
            }
            OutputKind::Observables => tables.push(("observables.csv", observables_csv(spec, &results, &mut failures))),
            OutputKind::Bounds => tables.push(("bounds.csv", observables_csv(spec, &results, &mut failures))),
            OutputKind::Jc => tables.push(("jc.csv", jc_csv(spec, &results, &mut failures))),
            OutputKind::Equivalence => tables.push(("equivalence.csv", equivalence_csv(spec, &results, &mut failures))),
        }
    }
    for (name, body) in tables {
        let path = dir.join(name);
        fs::write(&path, body).map_err(|e| SweepError::Io(format!("{}: {e}", path.display())))?;
        files.push(path);
    }
    failures.sort_by(|a, b| a.0.total_cmp(&b.0));
    Ok(SweepOutcome { files, failures })
}

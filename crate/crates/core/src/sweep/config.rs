//! JSON run configuration.

use std::collections::BTreeSet;
use std::path::PathBuf;

use serde_json::{Map, Value};

use crate::hamiltonian::TruncationPolicy;
use crate::model::{CouplingLaw, ModelParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum OutputKind {
    Energies,
    Observables,
    Bounds,
    Jc,
    Equivalence,
}

impl OutputKind {
    pub fn name(self) -> &'static str {
        match self {
            OutputKind::Energies => "energies",
            OutputKind::Observables => "observables",
            OutputKind::Bounds => "bounds",
            OutputKind::Jc => "jc",
            OutputKind::Equivalence => "equivalence",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        [
            OutputKind::Energies,
            OutputKind::Observables,
            OutputKind::Bounds,
            OutputKind::Jc,
            OutputKind::Equivalence,
        ]
        .into_iter()
        .find(|k| k.name() == s)
    }
}

/// Grid of `g/ω_c` values: `steps + 1` evenly spaced points from `start`
/// to `stop` (one point when they coincide).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GGrid {
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
}

impl GGrid {
    pub fn points(&self) -> Vec<f64> {
        if self.start == self.stop {
            return vec![self.start];
        }
        let h = (self.stop - self.start) / self.steps as f64;
        (0..=self.steps)
            .map(|i| if i == self.steps { self.stop } else { self.start + h * i as f64 })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    /// Template; `g` is overwritten per grid point.
    pub params: ModelParams,
    pub g_grid: GGrid,
    pub levels: usize,
    pub policy: TruncationPolicy,
    pub outputs: BTreeSet<OutputKind>,
    pub out_path: PathBuf,
    pub no_timestamp: bool,
}

impl SweepSpec {
    pub fn params_at(&self, g_over_omega: f64) -> ModelParams {
        self.params.with_g(g_over_omega * self.params.omega_c)
    }
}

struct Fields<'a> {
    obj: &'a Map<String, Value>,
    prefix: &'static str,
    errors: &'a mut Vec<String>,
}

impl Fields<'_> {
    fn key(&self, k: &str) -> String {
        if self.prefix.is_empty() {
            k.to_string()
        } else {
            format!("{}.{k}", self.prefix)
        }
    }

    fn reject_unknown(&mut self, allowed: &[&str]) {
        for k in self.obj.keys() {
            if !allowed.contains(&k.as_str()) {
                let msg = format!("{}: unknown key", self.key(k));
                self.errors.push(msg);
            }
        }
    }

    fn number(&mut self, k: &str, default: Option<f64>) -> Option<f64> {
        match self.obj.get(k) {
            None => {
                if default.is_none() {
                    let msg = format!("{}: required", self.key(k));
                    self.errors.push(msg);
                }
                default
            }
            Some(v) => match v.as_f64() {
                Some(x) if x.is_finite() => Some(x),
                _ => {
                    let msg = format!("{}: expected a number", self.key(k));
                    self.errors.push(msg);
                    None
                }
            },
        }
    }

    fn count(&mut self, k: &str, default: Option<u64>) -> Option<u64> {
        match self.obj.get(k) {
            None => {
                if default.is_none() {
                    let msg = format!("{}: required", self.key(k));
                    self.errors.push(msg);
                }
                default
            }
            Some(v) => match v.as_u64() {
                Some(x) => Some(x),
                None => {
                    let msg = format!("{}: expected a nonnegative integer", self.key(k));
                    self.errors.push(msg);
                    None
                }
            },
        }
    }

    fn object(&mut self, k: &str) -> Option<&Map<String, Value>> {
        match self.obj.get(k) {
            None => None,
            Some(Value::Object(m)) => Some(m),
            Some(_) => {
                let msg = format!("{}: expected an object", self.key(k));
                self.errors.push(msg);
                None
            }
        }
    }
}

fn sub<'a>(obj: &'a Map<String, Value>, prefix: &'static str, errors: &'a mut Vec<String>) -> Fields<'a> {
    Fields { obj, prefix, errors }
}

const TOP_KEYS: &[&str] = &[
    "omega_a",
    "epsilon",
    "omega_c",
    "coupling",
    "g_grid",
    "levels",
    "truncation",
    "outputs",
    "out_path",
    "no_timestamp",
];

/// Parses and validates a configuration, collecting every violation.
pub fn validate_config(raw: &[u8]) -> Result<SweepSpec, Vec<String>> {
    let value: Value = serde_json::from_slice(raw).map_err(|e| vec![format!("config: invalid JSON: {e}")])?;
    let Value::Object(top) = value else {
        return Err(vec!["config: expected a JSON object".to_string()]);
    };
    let mut errors = Vec::new();

    let mut f = sub(&top, "", &mut errors);
    f.reject_unknown(TOP_KEYS);
    let omega_a = f.number("omega_a", None);
    let epsilon = f.number("epsilon", Some(0.0));
    let omega_c = f.number("omega_c", None);
    let levels = f.count("levels", None);
    let coupling = f.object("coupling").cloned();
    let grid = f.object("g_grid").cloned();
    let truncation = f.object("truncation").cloned();
    if !top.contains_key("g_grid") {
        errors.push("g_grid: required".into());
    }

    let (mut c, mut ell) = (Some(0.0), Some(0u64));
    if let Some(obj) = &coupling {
        let mut f = sub(obj, "coupling", &mut errors);
        f.reject_unknown(&["C", "ell"]);
        c = f.number("C", Some(0.0));
        ell = f.count("ell", Some(0));
    }
    let law = match (c, ell) {
        (Some(c), Some(ell)) => match CouplingLaw::new(c, ell.min(255) as u8) {
            Ok(l) => Some(l),
            Err(e) => {
                errors.push(e.to_string());
                None
            }
        },
        _ => None,
    };

    let mut g_grid = None;
    if let Some(obj) = &grid {
        let mut f = sub(obj, "g_grid", &mut errors);
        f.reject_unknown(&["start", "stop", "steps"]);
        let start = f.number("start", None);
        let stop = f.number("stop", None);
        let steps = f.count("steps", None);
        if let (Some(start), Some(stop), Some(steps)) = (start, stop, steps) {
            let before = errors.len();
            if steps < 1 {
                errors.push("g_grid.steps: must be >= 1".into());
            }
            if start < 0.0 {
                errors.push("g_grid.start: must be >= 0".into());
            }
            if start > stop {
                errors.push("g_grid.stop: must be >= start".into());
            }
            if errors.len() == before {
                g_grid = Some(GGrid {
                    start,
                    stop,
                    steps: steps as usize,
                });
            }
        }
    }

    let (mut n_start, mut n_max, mut tol) = (
        Some(TruncationPolicy::DEFAULT_N_START as u64),
        Some(TruncationPolicy::DEFAULT_N_MAX as u64),
        Some(TruncationPolicy::DEFAULT_TOL),
    );
    if let Some(obj) = &truncation {
        let mut f = sub(obj, "truncation", &mut errors);
        f.reject_unknown(&["n_start", "n_max", "tol"]);
        n_start = f.count("n_start", n_start);
        n_max = f.count("n_max", n_max);
        tol = f.number("tol", tol);
    }

    let mut outputs = BTreeSet::new();
    match top.get("outputs") {
        None => {
            outputs.insert(OutputKind::Energies);
        }
        Some(Value::Array(items)) => {
            for item in items {
                match item.as_str().and_then(OutputKind::parse) {
                    Some(k) => {
                        outputs.insert(k);
                    }
                    None => errors.push(format!("outputs: unknown output {item}")),
                }
            }
            if items.is_empty() {
                errors.push("outputs: must not be empty".into());
            }
        }
        Some(_) => errors.push("outputs: expected an array of names".into()),
    }

    let out_path = match top.get("out_path") {
        Some(Value::String(s)) if !s.is_empty() => Some(PathBuf::from(s)),
        Some(_) => {
            errors.push("out_path: expected a nonempty string".into());
            None
        }
        None => {
            errors.push("out_path: required".into());
            None
        }
    };
    let no_timestamp = match top.get("no_timestamp") {
        None => false,
        Some(Value::Bool(b)) => *b,
        Some(_) => {
            errors.push("no_timestamp: expected a boolean".into());
            false
        }
    };

    let params = match (omega_a, epsilon, omega_c, law) {
        (Some(a), Some(e), Some(c), Some(law)) => match ModelParams::new(a, e, c, 0.0, law) {
            Ok(p) => Some(p),
            Err(err) => {
                errors.push(err.to_string());
                None
            }
        },
        _ => None,
    };
    let policy = match (n_start, n_max, levels, tol) {
        (Some(s), Some(m), Some(l), Some(t)) => match TruncationPolicy::new(s as usize, m as usize, l as usize, t) {
            Ok(p) => Some(p),
            Err(err) => {
                errors.push(err.to_string());
                None
            }
        },
        _ => None,
    };

    if !errors.is_empty() {
        return Err(errors);
    }
    Ok(SweepSpec {
        params: params.expect("checked"),
        g_grid: g_grid.expect("checked"),
        levels: levels.expect("checked") as usize,
        policy: policy.expect("checked"),
        outputs,
        out_path: out_path.expect("checked"),
        no_timestamp,
    })
}

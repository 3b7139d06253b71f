//! Command dispatch and report assembly.

use serde::Serialize;
use serde_json::{json, Map, Value};

use xidep::keys::paired_keys;
use xidep::null_test::{xi_permutation_test, xi_test};
use xidep::sim::{histogram, run_sim, SimExample, SimReport, SimSpec};
use xidep::{cond_xi, foci_select, rng_from_seed, t_n, xi_n, KeyPrecision, PointSet, TripleSample};

use crate::dataset::Dataset;
use crate::error::{CliError, Result};
use crate::select::resolve;

/// Seed used when none is given.
pub const DEFAULT_SEED: u64 = 20_240_601;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Xi,
    XiTest,
    Condep,
    Foci,
    CondXi,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Xi => "xi",
            Command::XiTest => "xitest",
            Command::Condep => "condep",
            Command::Foci => "foci",
            Command::CondXi => "condxi",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub x: Option<String>,
    pub y: Option<String>,
    pub z: Option<String>,
    pub seed: u64,
    /// Whether the seed came from the default, the command line or entropy.
    pub seed_source: &'static str,
    pub assume_continuous: bool,
    pub permutations: Option<usize>,
    pub precision: KeyPrecision,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        Self {
            command,
            x: None,
            y: None,
            z: None,
            seed: DEFAULT_SEED,
            seed_source: "default",
            assume_continuous: false,
            permutations: None,
            precision: KeyPrecision::default(),
        }
    }
}

/// Deterministic JSON report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub command: String,
    pub inputs: Value,
    pub parameters: Value,
    pub results: Value,
    pub warnings: Vec<String>,
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// `field,value` rows of the results; arrays are joined with `;`.
    pub fn results_csv(&self) -> String {
        let mut out = String::from("field,value\n");
        if let Value::Object(map) = &self.results {
            for (k, v) in map {
                let cell = match v {
                    Value::Array(items) => items.iter().map(plain).collect::<Vec<_>>().join(";"),
                    other => plain(other),
                };
                out.push_str(&format!("{k},{cell}\n"));
            }
        }
        out
    }
}

fn plain(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

/// JSON body printed when a command fails.
pub fn error_report(command: &str, err: &CliError) -> String {
    let mut error = Map::new();
    error.insert("kind".into(), json!(err.kind()));
    error.insert("message".into(), json!(err.to_string()));
    if let CliError::Parse { lines, .. } = err {
        error.insert("lines".into(), json!(lines));
    }
    let mut s = serde_json::to_string_pretty(&json!({ "command": command, "error": error }))
        .expect("report serializes");
    s.push('\n');
    s
}

struct Roles {
    x: Vec<usize>,
    y: Vec<usize>,
    z: Vec<usize>,
}

fn select(sel: &Option<String>, role: &str, data: &Dataset, required: bool) -> Result<Vec<usize>> {
    match sel {
        Some(s) => resolve(s, data),
        None if required => Err(CliError::Selection(format!("--{role} is required"))),
        None => Ok(Vec::new()),
    }
}

fn points(data: &Dataset, cols: &[usize]) -> Result<PointSet<f64>> {
    let columns: Vec<&[f64]> = cols.iter().map(|&j| data.column(j)).collect();
    Ok(PointSet::from_columns_with_len(data.n, &columns)?)
}

fn names(data: &Dataset, cols: &[usize]) -> Vec<String> {
    cols.iter().map(|&j| data.names[j].clone()).collect()
}

fn overlap(a: &[usize], b: &[usize]) -> Option<usize> {
    a.iter().copied().find(|j| b.contains(j))
}

fn single_response(cols: &[usize], command: Command) -> Result<()> {
    if cols.len() != 1 {
        return Err(CliError::Selection(format!(
            "{} needs exactly one y column, got {}",
            command.name(),
            cols.len()
        )));
    }
    Ok(())
}

/// Runs a dataset command.
pub fn run(config: &RunConfig, data: &Dataset) -> Result<Report> {
    let cmd = config.command;
    let roles = Roles {
        x: select(
            &config.x,
            "x",
            data,
            !matches!(cmd, Command::Condep | Command::Foci),
        )?,
        y: select(&config.y, "y", data, true)?,
        z: select(
            &config.z,
            "z",
            data,
            matches!(cmd, Command::Condep | Command::CondXi),
        )?,
    };
    let mut warnings = Vec::new();

    let pairs = [
        ("x", &roles.x, "y", &roles.y),
        ("x", &roles.x, "z", &roles.z),
        ("y", &roles.y, "z", &roles.z),
    ];
    for (ra, a, rb, b) in pairs {
        if let Some(j) = overlap(a, b) {
            let msg = format!("column '{}' is used for both {ra} and {rb}", data.names[j]);
            if matches!(cmd, Command::Xi | Command::XiTest) {
                warnings.push(msg);
            } else {
                return Err(CliError::Selection(msg));
            }
        }
    }

    let precision = config.precision;
    let mut parameters = json!({
        "seed": config.seed,
        "seed_source": config.seed_source,
        "x": names(data, &roles.x),
        "y": names(data, &roles.y),
        "z": names(data, &roles.z),
    });
    let mut rng = rng_from_seed(config.seed);
    let encoding = |encoded: Value| json!({ "int_bits": precision.int_bits, "frac_bits": precision.frac_bits, "encoded": encoded });

    let results = match cmd {
        Command::Xi | Command::XiTest => {
            let (x, y) = (points(data, &roles.x)?, points(data, &roles.y)?);
            parameters["encoding"] = encoding(json!({ "x": x.dim() > 1, "y": y.dim() > 1 }));
            let sample = paired_keys(&x, &y, precision)?;
            if cmd == Command::Xi {
                let xi = xi_n(&sample, &mut rng)?;
                json!({
                    "xi": xi.value,
                    "n": xi.n,
                    "numerator": xi.numerator,
                    "denominator": xi.denominator,
                    "denominator_kind": xi.denominator_kind,
                })
            } else {
                parameters["assume_continuous"] = json!(config.assume_continuous);
                parameters["permutations"] = json!(config.permutations);
                let test = match config.permutations {
                    Some(b) => {
                        if config.assume_continuous {
                            warnings.push(
                                "--assume-continuous has no effect on a permutation test".into(),
                            );
                        }
                        xi_permutation_test(&sample, b, &mut rng)?
                    }
                    None => xi_test(&sample, config.assume_continuous, &mut rng)?,
                };
                json!({
                    "xi": test.xi.value,
                    "n": test.xi.n,
                    "statistic": test.statistic,
                    "p_value": test.p_value,
                    "method": test.method,
                    "tau_sq": test.tau_sq_used,
                })
            }
        }
        Command::Condep => {
            single_response(&roles.y, cmd)?;
            let y = data.column(roles.y[0]);
            let sample = TripleSample::new(y, points(data, &roles.x)?, points(data, &roles.z)?)?;
            let t = t_n(&sample, &mut rng)?;
            json!({
                "t": t.value,
                "n": t.n,
                "numerator": t.numerator,
                "denominator": t.denominator,
                "p": t.p,
                "q": t.q,
            })
        }
        Command::Foci => {
            single_response(&roles.y, cmd)?;
            let candidates: Vec<usize> = if roles.x.is_empty() {
                (0..data.width()).filter(|j| !roles.y.contains(j)).collect()
            } else {
                roles.x.clone()
            };
            if !roles.z.is_empty() {
                return Err(CliError::Selection("foci takes no --z".into()));
            }
            parameters["x"] = json!(names(data, &candidates));
            let report = foci_select(
                data.column(roles.y[0]),
                &points(data, &candidates)?,
                &mut rng,
            )?;
            let selected: Vec<usize> = report.selected.iter().map(|&k| candidates[k]).collect();
            json!({
                "selected": names(data, &selected),
                "step_values": report.step_values,
                "stop_reason": report.stop_reason,
                "stop_value": report.stop_value,
            })
        }
        Command::CondXi => {
            let (x, y, z) = (
                points(data, &roles.x)?,
                points(data, &roles.y)?,
                points(data, &roles.z)?,
            );
            parameters["encoding"] = encoding(json!({ "x": true, "w": true, "y": y.dim() > 1 }));
            let r = cond_xi(&x, &y, &z, precision, &mut rng)?;
            json!({
                "value": r.value,
                "n": r.n,
                "xi_wy": r.xi_wy,
                "xi_xy": r.xi_xy,
            })
        }
    };

    Ok(Report {
        command: cmd.name().into(),
        inputs: json!({ "sha256": data.sha256, "rows": data.n, "columns": data.names }),
        parameters,
        results,
        warnings,
    })
}

/// Simulation run plus the histogram of each reported statistic.
pub struct Simulation {
    pub report: SimReport,
    pub bins: usize,
}

impl Simulation {
    pub fn run(spec: &SimSpec, bins: usize, seed_source: &'static str) -> Result<(Self, Report)> {
        if bins == 0 {
            return Err(CliError::Usage("--bins must be at least 1".into()));
        }
        let report = run_sim(spec)?;
        let summary = Report {
            command: "simulate".into(),
            inputs: json!({ "generator": spec.example }),
            parameters: json!({
                "n": spec.n,
                "replications": spec.replications,
                "sigma": spec.sigma,
                "seed": spec.seed,
                "seed_source": seed_source,
                "encoding": { "int_bits": spec.precision.int_bits, "frac_bits": spec.precision.frac_bits },
            }),
            results: json!({ "summaries": report.summaries }),
            warnings: if spec.example != SimExample::NoisySphere && spec.sigma != 0.0 {
                vec!["sigma is only used by noisy_sphere".into()]
            } else {
                Vec::new()
            },
        };
        Ok((Self { report, bins }, summary))
    }

    /// `statistic,bin_lower,bin_upper,count` rows for every statistic.
    pub fn histogram_csv(&self) -> Result<String> {
        let mut out = String::from("statistic,bin_lower,bin_upper,count\n");
        for s in &self.report.summaries {
            for b in histogram(&s.values, self.bins)? {
                out.push_str(&format!(
                    "{},{},{},{}\n",
                    s.label, b.lower, b.upper, b.count
                ));
            }
        }
        Ok(out)
    }
}

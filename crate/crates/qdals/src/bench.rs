//! Experiment runners and machine-readable result tables.
//!
//! Each [`ExperimentSpec`] kind reproduces one of the comparison protocols:
//! gate counts and encoding error across sparse matrices, fidelity at fixed
//! step counts, steps needed to reach a target fidelity, eigenvalue
//! separation traces, and seeded random ensembles with fidelity histograms.
//!
//! Tables are byte-reproducible: all randomness derives from the spec's
//! seed, cells are pre-formatted strings, and the metadata carries the spec
//! itself (as JSON) plus a short hash — no timestamps.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::blockenc::{build_improved, build_original, encode_mse};
use crate::circuit::gate_metrics;
use crate::error::{Error, Result};
use crate::fixtures;
use crate::io;
use crate::linalg::ComplexMatrix;
use crate::qlsp::{random_instance, random_sparse_matrix, QlspInstance};
use crate::rng::SeededRng;
use crate::separator::{separate_with_guard, PRINTED_DATA_GUARD_TOL};
use crate::solver::{solve, steps_to_fidelity, Backend, Method, SolverConfig};

/// Fidelity histogram bucket edges shared by the ensemble experiments.
pub const BUCKET_EDGES: [f64; 4] = [0.9, 0.99, 0.999, 0.9999];
/// Fidelity below this counts as a solution failure.
pub const FAILURE_THRESHOLD: f64 = 0.9;
/// Fidelity at or above this counts as a complete success.
pub const COMPLETE_SUCCESS_THRESHOLD: f64 = 0.9999;

/// Where a problem instance comes from.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InstanceSource {
    Fixture(String),
    Path(PathBuf),
    Random { dim: usize, seed: u64 },
}

impl InstanceSource {
    pub fn resolve(&self) -> Result<QlspInstance> {
        match self {
            InstanceSource::Fixture(name) => match fixtures::by_name(name) {
                Some(fixtures::Fixture::Instance(p)) => Ok(p),
                Some(fixtures::Fixture::Matrix { .. }) => Err(Error::InvalidConfig(format!(
                    "fixture '{name}' is a bare matrix, not a problem instance"
                ))),
                None => Err(Error::InvalidConfig(format!("unknown fixture '{name}'"))),
            },
            InstanceSource::Path(path) => io::load_instance(path),
            InstanceSource::Random { dim, seed } => random_instance(*dim, *seed),
        }
    }

    pub fn label(&self) -> String {
        match self {
            InstanceSource::Fixture(name) => name.clone(),
            InstanceSource::Path(path) => path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| path.display().to_string()),
            InstanceSource::Random { dim, seed } => format!("rand{dim}-{seed}"),
        }
    }
}

/// Where a bare matrix comes from.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MatrixSource {
    Fixture(String),
    Path(PathBuf),
}

impl MatrixSource {
    pub fn resolve(&self) -> Result<(String, ComplexMatrix)> {
        match self {
            MatrixSource::Fixture(name) => match fixtures::by_name(name) {
                Some(fixtures::Fixture::Matrix { label, matrix, .. }) => {
                    Ok((label.to_string(), matrix))
                }
                Some(fixtures::Fixture::Instance(p)) => {
                    Ok((p.label().to_string(), p.matrix().clone()))
                }
                None => Err(Error::InvalidConfig(format!("unknown fixture '{name}'"))),
            },
            MatrixSource::Path(path) => io::load_matrix(path),
        }
    }
}

/// One experiment protocol with all of its parameters.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ExperimentSpec {
    /// Gate counts and encoding MSE of both block-encoding schemes over the
    /// bundled sparse fixture plus seeded random sparse matrices.
    GateCount {
        dims: Vec<usize>,
        per_dim: usize,
        zero_fraction: f64,
        seed: u64,
    },
    /// Fidelity of the listed methods at each fixed step count. New-scheme
    /// methods get one row per separation order.
    FixedStepFidelity {
        source: InstanceSource,
        methods: Vec<Method>,
        steps: Vec<usize>,
        orders: Vec<usize>,
        backend: Backend,
    },
    /// Steps to reach the target fidelity for each (method, instance) pair.
    StepsToTarget {
        sources: Vec<InstanceSource>,
        methods: Vec<Method>,
        order: usize,
        target: f64,
        cap: usize,
    },
    /// Eigenvalue trajectory of the repeated-squaring separator.
    SeparatorTrace { source: MatrixSource, order: usize },
    /// Fidelity histograms over seeded random instances, one row per
    /// (step count, method); the same instances are reused across rows.
    RandomEnsemble {
        dim: usize,
        methods: Vec<Method>,
        steps: Vec<usize>,
        order: usize,
        trials: usize,
        seed: u64,
    },
    /// Steps to target as a function of separation order.
    StepsVsOrder {
        source: InstanceSource,
        method: Method,
        orders: Vec<usize>,
        target: f64,
        cap: usize,
    },
}

impl ExperimentSpec {
    /// The seed the table metadata should record, when the kind has one.
    fn seed(&self) -> Option<u64> {
        match self {
            ExperimentSpec::GateCount { seed, .. } | ExperimentSpec::RandomEnsemble { seed, .. } => {
                Some(*seed)
            }
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TableMeta {
    pub seed: Option<u64>,
    /// The generating spec as compact JSON; enough to re-run the table.
    pub config: String,
    pub config_hash: String,
}

/// A labeled table of pre-formatted cells plus reproducibility metadata.
#[derive(Debug, Clone, Serialize)]
pub struct ResultTable {
    pub title: String,
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
    pub meta: TableMeta,
}

impl ResultTable {
    fn new(title: impl Into<String>, headers: Vec<String>, spec: &ExperimentSpec) -> Result<Self> {
        let config = serde_json::to_string(spec)?;
        let config_hash = fnv1a_hex(config.as_bytes());
        Ok(Self {
            title: title.into(),
            headers,
            rows: Vec::new(),
            meta: TableMeta {
                seed: spec.seed(),
                config,
                config_hash,
            },
        })
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("# {}\n", self.title));
        match self.meta.seed {
            Some(s) => out.push_str(&format!("# seed={s} config_hash={}\n", self.meta.config_hash)),
            None => out.push_str(&format!("# config_hash={}\n", self.meta.config_hash)),
        }
        out.push_str(&format!("# config={}\n", self.meta.config));
        out.push_str(&self.headers.join(","));
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> Result<String> {
        io::to_canonical_json(self)
    }

    /// Render in the requested format.
    pub fn render(&self, format: OutputFormat) -> Result<String> {
        match format {
            OutputFormat::Csv => Ok(self.to_csv()),
            OutputFormat::Json => self.to_json(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl std::str::FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(Error::Parse(format!("unknown format '{other}'"))),
        }
    }
}

fn fnv1a_hex(bytes: &[u8]) -> String {
    let mut hash: u64 = 0xcbf29ce484222325;
    for &b in bytes {
        hash ^= b as u64;
        hash = hash.wrapping_mul(0x100000001b3);
    }
    format!("{hash:016x}")
}

fn fmt_fidelity(f: f64) -> String {
    format!("{f:.4}")
}

fn fmt_mse(e: f64) -> String {
    format!("{e:.3e}")
}

fn fmt_pct(x: f64) -> String {
    format!("{:.2}%", 100.0 * x)
}

/// Run a spec to completion. Per-cell solver failures become `Failed`/`Error`
/// cells; they never abort the table.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<ResultTable> {
    match spec {
        ExperimentSpec::GateCount {
            dims,
            per_dim,
            zero_fraction,
            seed,
        } => gate_count(spec, dims, *per_dim, *zero_fraction, *seed),
        ExperimentSpec::FixedStepFidelity {
            source,
            methods,
            steps,
            orders,
            backend,
        } => fixed_step_fidelity(spec, source, methods, steps, orders, *backend),
        ExperimentSpec::StepsToTarget {
            sources,
            methods,
            order,
            target,
            cap,
        } => steps_to_target(spec, sources, methods, *order, *target, *cap),
        ExperimentSpec::SeparatorTrace { source, order } => separator_trace(spec, source, *order),
        ExperimentSpec::RandomEnsemble {
            dim,
            methods,
            steps,
            order,
            trials,
            seed,
        } => random_ensemble(spec, *dim, methods, steps, *order, *trials, *seed),
        ExperimentSpec::StepsVsOrder {
            source,
            method,
            orders,
            target,
            cap,
        } => steps_vs_order(spec, source, *method, orders, *target, *cap),
    }
}

fn gate_count(
    spec: &ExperimentSpec,
    dims: &[usize],
    per_dim: usize,
    zero_fraction: f64,
    seed: u64,
) -> Result<ResultTable> {
    let headers = vec![
        "label".into(),
        "dim".into(),
        "zeros".into(),
        "orig_rotations".into(),
        "orig_frame".into(),
        "orig_total".into(),
        "impr_rotations".into(),
        "impr_frame".into(),
        "impr_total".into(),
        "rotations_saved".into(),
        "total_saved".into(),
        "orig_mse".into(),
        "impr_mse".into(),
    ];
    let mut table = ResultTable::new("block encoding gate counts", headers, spec)?;

    let mut row = |label: String, m: &ComplexMatrix| -> Result<()> {
        let zeros = m
            .data()
            .iter()
            .filter(|v| **v == num_complex::Complex64::ZERO)
            .count();
        let orig = build_original(m)?;
        let impr = build_improved(m)?;
        let mo = gate_metrics(&orig);
        let mi = gate_metrics(&impr);
        let rot_saved = (mo.rotations - mi.rotations) as f64 / mo.rotations as f64;
        let tot_saved = (mo.total as f64 - mi.total as f64) / mo.total as f64;
        table.rows.push(vec![
            label,
            m.rows().to_string(),
            zeros.to_string(),
            mo.rotations.to_string(),
            mo.frame.to_string(),
            mo.total.to_string(),
            mi.rotations.to_string(),
            mi.frame.to_string(),
            mi.total.to_string(),
            fmt_pct(rot_saved),
            fmt_pct(tot_saved),
            fmt_mse(encode_mse(&orig, m)?),
            fmt_mse(encode_mse(&impr, m)?),
        ]);
        Ok(())
    };

    row("s2_1".into(), &fixtures::s2_1())?;
    for &dim in dims {
        for k in 0..per_dim {
            let s = SeededRng::derive(seed, (dim * 1000 + k) as u64);
            let m = random_sparse_matrix(dim, zero_fraction, s)?;
            row(format!("rs{}_{}", dim, k + 1), &m)?;
        }
    }
    Ok(table)
}

fn fixed_step_fidelity(
    spec: &ExperimentSpec,
    source: &InstanceSource,
    methods: &[Method],
    steps: &[usize],
    orders: &[usize],
    backend: Backend,
) -> Result<ResultTable> {
    let p = source.resolve()?;
    let mut headers = vec!["method".into(), "order".into()];
    headers.extend(steps.iter().map(|m| format!("M={m}")));
    let mut table = ResultTable::new(
        format!("fidelity at fixed steps on {}", source.label()),
        headers,
        spec,
    )?;

    for &method in methods {
        let row_orders: Vec<Option<usize>> = if method.scheme() == crate::hamiltonian::Scheme::New {
            orders.iter().map(|&d| Some(d)).collect()
        } else {
            vec![None]
        };
        for order in row_orders {
            let mut row = vec![
                method.name().to_string(),
                order.map_or("-".into(), |d| d.to_string()),
            ];
            for &m in steps {
                let mut cfg = SolverConfig::new(method, m).with_backend(backend);
                if let Some(d) = order {
                    cfg = cfg.with_order(d);
                }
                let cell = match solve(&p, &cfg) {
                    Ok(rep) => fmt_fidelity(rep.fidelity),
                    Err(_) => "Error".into(),
                };
                row.push(cell);
            }
            table.rows.push(row);
        }
    }
    Ok(table)
}

fn steps_to_target(
    spec: &ExperimentSpec,
    sources: &[InstanceSource],
    methods: &[Method],
    order: usize,
    target: f64,
    cap: usize,
) -> Result<ResultTable> {
    let mut headers = vec!["method".into()];
    headers.extend(sources.iter().map(|s| s.label()));
    let mut table = ResultTable::new(
        format!("steps to reach fidelity {target}"),
        headers,
        spec,
    )?;
    let instances: Vec<QlspInstance> = sources
        .iter()
        .map(|s| s.resolve())
        .collect::<Result<_>>()?;

    for &method in methods {
        let mut row = vec![method.name().to_string()];
        for p in &instances {
            let cfg = SolverConfig::new(method, 1).with_order(order);
            let cell = match steps_to_fidelity(p, &cfg, target, cap) {
                Ok(outcome) => outcome.to_string(),
                Err(_) => "Error".into(),
            };
            row.push(cell);
        }
        table.rows.push(row);
    }
    Ok(table)
}

fn separator_trace(
    spec: &ExperimentSpec,
    source: &MatrixSource,
    order: usize,
) -> Result<ResultTable> {
    let (label, matrix) = source.resolve()?;
    // fixture/file matrices carry rounded printed entries
    let (_, trace) = separate_with_guard(&matrix, order, PRINTED_DATA_GUARD_TOL)?;
    let mut headers = vec!["eigenvalue".into()];
    headers.extend((0..=order).map(|d| format!("order {d}")));
    let mut table = ResultTable::new(format!("eigenvalue separation of {label}"), headers, spec)?;

    let n = trace.spectra[0].len();
    for k in 0..n {
        let mut row = vec![format!("lambda_{}", k + 1)];
        for sp in &trace.spectra {
            row.push(fmt_fidelity(sp[k]));
        }
        table.rows.push(row);
    }
    Ok(table)
}

/// Histogram of one method over the shared instance set at one step count.
struct EnsembleRow {
    buckets: [usize; 5],
    trials: usize,
}

impl EnsembleRow {
    fn record(&mut self, fidelity: f64) {
        let mut b = BUCKET_EDGES.len();
        for (k, &edge) in BUCKET_EDGES.iter().enumerate() {
            if fidelity < edge {
                b = k;
                break;
            }
        }
        self.buckets[b] += 1;
    }

    fn failure_rate(&self) -> f64 {
        self.buckets[0] as f64 / self.trials as f64
    }

    fn complete_success_rate(&self) -> f64 {
        self.buckets[4] as f64 / self.trials as f64
    }
}

fn random_ensemble(
    spec: &ExperimentSpec,
    dim: usize,
    methods: &[Method],
    steps: &[usize],
    order: usize,
    trials: usize,
    seed: u64,
) -> Result<ResultTable> {
    let headers = vec![
        "steps".into(),
        "method".into(),
        "f<0.9".into(),
        "0.9-0.99".into(),
        "0.99-0.999".into(),
        "0.999-0.9999".into(),
        "0.9999-1".into(),
        "failure_rate".into(),
        "complete_success_rate".into(),
    ];
    let mut table = ResultTable::new(
        format!("{trials}-trial random ensemble, dim {dim}"),
        headers,
        spec,
    )?;

    // one shared instance set, reused across every (steps, method) row
    let instances: Vec<QlspInstance> = (0..trials)
        .map(|t| random_instance(dim, SeededRng::derive(seed, t as u64)))
        .collect::<Result<_>>()?;

    for &m_steps in steps {
        for &method in methods {
            let mut row = EnsembleRow {
                buckets: [0; 5],
                trials,
            };
            let cfg = SolverConfig::new(method, m_steps).with_order(order);
            for p in &instances {
                let fidelity = solve(p, &cfg).map(|r| r.fidelity).unwrap_or(0.0);
                row.record(fidelity);
            }
            let mut cells = vec![m_steps.to_string(), method.name().to_string()];
            cells.extend(row.buckets.iter().map(|b| b.to_string()));
            cells.push(fmt_pct(row.failure_rate()));
            cells.push(fmt_pct(row.complete_success_rate()));
            table.rows.push(cells);
        }
    }
    Ok(table)
}

fn steps_vs_order(
    spec: &ExperimentSpec,
    source: &InstanceSource,
    method: Method,
    orders: &[usize],
    target: f64,
    cap: usize,
) -> Result<ResultTable> {
    let p = source.resolve()?;
    let headers = vec!["order".into(), "steps_to_target".into()];
    let mut table = ResultTable::new(
        format!(
            "steps to fidelity {target} vs separation order on {} ({})",
            source.label(),
            method.name()
        ),
        headers,
        spec,
    )?;
    for &order in orders {
        let cfg = SolverConfig::new(method, 1).with_order(order);
        let cell = match steps_to_fidelity(&p, &cfg, target, cap) {
            Ok(outcome) => outcome.to_string(),
            Err(_) => "Error".into(),
        };
        table.rows.push(vec![order.to_string(), cell]);
    }
    Ok(table)
}

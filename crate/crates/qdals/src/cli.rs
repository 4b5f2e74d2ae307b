//! Command-line harness.
//!
//! Subcommands: `gen` (write random instances or sparse matrices), `solve`
//! (run one method on one instance), `encode` (block-encode a matrix and
//! report gate metrics and error), `separate` (print an eigenvalue
//! separation trace), `bench` (run a full experiment to CSV/JSON), and
//! `fixtures` (write the bundled reference problems to disk).
//!
//! Exit codes: 0 success, 1 usage error, 2 numerical failure.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::bench::{
    run_experiment, ExperimentSpec, InstanceSource, MatrixSource, OutputFormat, ResultTable,
};
use crate::blockenc::{build_improved, build_original, encode_mse};
use crate::circuit::gate_metrics;
use crate::error::{Error, Result};
use crate::fixtures;
use crate::io::{self, InstanceFile, MatrixFile};
use crate::qlsp::{random_instance, random_sparse_matrix};
use crate::solver::{solve, Backend, Method, SolverConfig};

#[derive(Parser)]
#[command(
    name = "qdals",
    about = "Quantum discrete adiabatic linear solvers: solve, encode, separate, benchmark",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

fn parse_method(s: &str) -> std::result::Result<Method, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_backend(s: &str) -> std::result::Result<Backend, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_format(s: &str) -> std::result::Result<OutputFormat, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Subcommand)]
enum Command {
    /// Write seeded random instances (or sparse matrices) as JSON files.
    Gen {
        /// Dimension (power of two).
        #[arg(long)]
        dim: usize,
        /// Base seed; file k uses seed + k.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of files to write.
        #[arg(long, default_value_t = 1)]
        count: usize,
        /// Output directory.
        #[arg(long, default_value = ".")]
        out: PathBuf,
        /// Generate bare sparse matrices instead of problem instances.
        #[arg(long)]
        sparse: bool,
        /// Zero-element fraction for --sparse.
        #[arg(long, default_value_t = 0.5)]
        zero_fraction: f64,
    },
    /// Solve one instance with one method and print the report.
    Solve {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long, value_parser = parse_method)]
        method: Method,
        #[arg(long)]
        steps: usize,
        /// Separation order (new-scheme methods; defaults to 8).
        #[arg(long)]
        order: Option<usize>,
        #[arg(long, value_parser = parse_backend, default_value = "matrix")]
        backend: Backend,
        /// Evolution time for the Hamiltonian-simulation methods (default M).
        #[arg(long)]
        time: Option<f64>,
        /// Record and print the per-step fidelity trace.
        #[arg(long)]
        trace: bool,
        /// Write the full report as JSON here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Block-encode a matrix; print gate metrics and the encoding error.
    Encode {
        #[command(flatten)]
        source: SourceArgs,
        /// Scheme to report: original, improved, or both.
        #[arg(long, default_value = "both")]
        scheme: String,
        /// Print the circuit gate listing (improved scheme unless --scheme
        /// selects original).
        #[arg(long)]
        dump_circuit: bool,
        /// Write the dumped circuit here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the repeated-squaring eigenvalue separator and print the trace.
    Separate {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long, default_value_t = 4)]
        order: usize,
        #[arg(long, value_parser = parse_format, default_value = "csv")]
        format: OutputFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a benchmark experiment and emit a result table.
    Bench {
        #[command(subcommand)]
        kind: BenchCommand,
    },
    /// Write the bundled fixtures as JSON files.
    Fixtures {
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
}

/// Instance/matrix source selection shared by several subcommands.
#[derive(Args)]
struct SourceArgs {
    /// Bundled fixture name(s), comma separated (see `fixtures`).
    #[arg(long, value_delimiter = ',')]
    fixture: Vec<String>,
    /// JSON file path (repeatable).
    #[arg(long = "in")]
    input: Vec<PathBuf>,
    /// Use seeded random instances of this dimension.
    #[arg(long)]
    random_dim: Option<usize>,
    /// How many random instances.
    #[arg(long, default_value_t = 1)]
    random_count: usize,
    /// Seed for random sources.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl SourceArgs {
    fn instance_sources(&self) -> Vec<InstanceSource> {
        let mut out = Vec::new();
        for name in &self.fixture {
            out.push(InstanceSource::Fixture(name.clone()));
        }
        for path in &self.input {
            out.push(InstanceSource::Path(path.clone()));
        }
        if let Some(dim) = self.random_dim {
            for k in 0..self.random_count {
                out.push(InstanceSource::Random {
                    dim,
                    seed: self.seed + k as u64,
                });
            }
        }
        out
    }

    fn single_instance_source(&self) -> Result<InstanceSource> {
        let sources = self.instance_sources();
        match sources.len() {
            1 => Ok(sources.into_iter().next().unwrap()),
            0 => Err(Error::InvalidConfig(
                "select an input with --fixture, --in, or --random-dim".into(),
            )),
            n => Err(Error::InvalidConfig(format!(
                "this command takes exactly one input, got {n}"
            ))),
        }
    }

    fn single_matrix_source(&self) -> Result<MatrixSource> {
        match (self.fixture.len(), self.input.len()) {
            (1, 0) => Ok(MatrixSource::Fixture(self.fixture[0].clone())),
            (0, 1) => Ok(MatrixSource::Path(self.input[0].clone())),
            (0, 0) => Err(Error::InvalidConfig(
                "select an input with --fixture or --in".into(),
            )),
            _ => Err(Error::InvalidConfig(
                "this command takes exactly one input".into(),
            )),
        }
    }
}

#[derive(Subcommand)]
enum BenchCommand {
    /// Gate counts and encoding MSE over sparse matrices (bundled + random).
    GateCount {
        #[arg(long, value_delimiter = ',', default_values_t = vec![2usize, 4, 8, 16])]
        dims: Vec<usize>,
        #[arg(long, default_value_t = 2)]
        per_dim: usize,
        #[arg(long, default_value_t = 0.5)]
        zero_fraction: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Fidelity of each method at fixed step counts.
    FixedStep {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long, value_delimiter = ',', value_parser = parse_method,
              default_values_t = vec![Method::Ohs, Method::Nhs, Method::Obe, Method::Nbe])]
        methods: Vec<Method>,
        #[arg(long, value_delimiter = ',', default_values_t = vec![200usize, 1000, 2000])]
        steps: Vec<usize>,
        /// Separation orders for the new-scheme rows.
        #[arg(long, value_delimiter = ',', default_values_t = vec![0usize])]
        orders: Vec<usize>,
        #[arg(long, value_parser = parse_backend, default_value = "matrix")]
        backend: Backend,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Steps needed to reach a target fidelity.
    StepsToTarget {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long, value_delimiter = ',', value_parser = parse_method,
              default_values_t = vec![Method::Ohs, Method::Nhs, Method::Obe, Method::Nbe])]
        methods: Vec<Method>,
        #[arg(long, default_value_t = 8)]
        order: usize,
        #[arg(long, default_value_t = 0.9999)]
        target: f64,
        #[arg(long, default_value_t = 1 << 19)]
        cap: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Eigenvalue separation trace of a Hamiltonian fixture/file.
    SeparatorTrace {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long, default_value_t = 4)]
        order: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Seeded random ensemble with fidelity histograms.
    Ensemble {
        #[arg(long, default_value_t = 16)]
        dim: usize,
        #[arg(long, value_delimiter = ',', value_parser = parse_method,
              default_values_t = vec![Method::Ohs, Method::Nbe])]
        methods: Vec<Method>,
        #[arg(long, value_delimiter = ',', default_values_t = vec![50usize, 100, 150, 200])]
        steps: Vec<usize>,
        #[arg(long, default_value_t = 8)]
        order: usize,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Steps to a target fidelity as a function of separation order.
    StepsVsOrder {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long, value_parser = parse_method, default_value = "nbe")]
        method: Method,
        #[arg(long, value_delimiter = ',', default_values_t = vec![0usize, 2, 4, 6, 8])]
        orders: Vec<usize>,
        #[arg(long, default_value_t = 0.9999)]
        target: f64,
        #[arg(long, default_value_t = 1 << 19)]
        cap: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run an experiment spec from a JSON config file.
    Config {
        /// Path to an ExperimentSpec JSON document.
        #[arg(long)]
        file: PathBuf,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Args)]
struct OutputArgs {
    #[arg(long, value_parser = parse_format, default_value = "csv")]
    format: OutputFormat,
    /// Write the table here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Entry point used by the binary and by tests. Returns the process exit
/// code: 0 success, 1 usage error, 2 numerical failure.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // help/version are not usage errors
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(()) => 0,
        Err(Error::InvalidConfig(msg)) | Err(Error::Parse(msg)) => {
            eprintln!("error: {msg}");
            1
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn emit(table: &ResultTable, output: &OutputArgs) -> Result<()> {
    let text = table.render(output.format)?;
    match &output.out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn dispatch(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Gen {
            dim,
            seed,
            count,
            out,
            sparse,
            zero_fraction,
        } => {
            std::fs::create_dir_all(&out)?;
            for k in 0..count {
                let s = seed + k as u64;
                if sparse {
                    let m = random_sparse_matrix(dim, zero_fraction, s)?;
                    let label = format!("sparse{dim}-{s}");
                    let path = out.join(format!("{label}.json"));
                    io::save_matrix(&MatrixFile::new(&label, &m, false), &path)?;
                    println!("{}", path.display());
                } else {
                    let p = random_instance(dim, s)?;
                    let path = out.join(format!("{}.json", p.label()));
                    io::save_instance(&p, &path)?;
                    println!("{}", path.display());
                }
            }
            Ok(())
        }

        Command::Solve {
            source,
            method,
            steps,
            order,
            backend,
            time,
            trace,
            out,
        } => {
            let p = source.single_instance_source()?.resolve()?;
            let mut cfg = SolverConfig::new(method, steps)
                .with_backend(backend)
                .with_trace(trace);
            if let Some(d) = order {
                cfg = cfg.with_order(d);
            }
            if let Some(t) = time {
                cfg = cfg.with_evolution_time(t);
            }
            let report = solve(&p, &cfg)?;
            println!("instance: {} (dim {})", p.label(), p.dim());
            println!(
                "method: {}  steps: {}  order: {}  backend: {:?}",
                method.name(),
                steps,
                cfg.separation_order,
                cfg.backend
            );
            println!("fidelity: {:.4}", report.fidelity);
            if let Some(log2) = report.success_prob_log2 {
                println!("cumulative success probability: 2^{log2:.2}");
            }
            if report.failed {
                println!("status: failed (state annihilated during evolution)");
            }
            for note in &report.annotations {
                println!("note: {note}");
            }
            if let Some(tr) = &report.fidelity_trace {
                for (k, f) in tr.iter().enumerate() {
                    println!("step {:>5}  fidelity {:.6}", k + 1, f);
                }
            }
            if let Some(path) = out {
                std::fs::write(&path, io::to_canonical_json(&report)?)?;
            }
            Ok(())
        }

        Command::Encode {
            source,
            scheme,
            dump_circuit,
            out,
        } => {
            let (label, matrix) = source.single_matrix_source()?.resolve()?;
            let zeros = matrix
                .data()
                .iter()
                .filter(|v| **v == num_complex::Complex64::ZERO)
                .count();
            println!("matrix: {label} (dim {}, {zeros} zero elements)", matrix.rows());
            let schemes: Vec<&str> = match scheme.as_str() {
                "both" => vec!["original", "improved"],
                "original" => vec!["original"],
                "improved" => vec!["improved"],
                other => {
                    return Err(Error::InvalidConfig(format!(
                        "unknown scheme '{other}' (use original, improved, or both)"
                    )))
                }
            };
            println!("{:<10} {:>9} {:>6} {:>6} {:>12}", "scheme", "rotations", "frame", "total", "mse");
            let mut dumped = None;
            for name in &schemes {
                let circuit = match *name {
                    "original" => build_original(&matrix)?,
                    _ => build_improved(&matrix)?,
                };
                let m = gate_metrics(&circuit);
                let mse = encode_mse(&circuit, &matrix)?;
                println!(
                    "{:<10} {:>9} {:>6} {:>6} {:>12.3e}",
                    name, m.rotations, m.frame, m.total, mse
                );
                dumped = Some(circuit);
            }
            if dump_circuit {
                // with --scheme both the improved circuit (built last) is dumped
                let circuit = dumped.expect("at least one scheme");
                let text = circuit.to_text();
                match out {
                    Some(path) => std::fs::write(&path, text)?,
                    None => print!("{text}"),
                }
            }
            Ok(())
        }

        Command::Separate {
            source,
            order,
            format,
            out,
        } => {
            let spec = ExperimentSpec::SeparatorTrace {
                source: source.single_matrix_source()?,
                order,
            };
            let table = run_experiment(&spec)?;
            emit(&table, &OutputArgs { format, out })
        }

        Command::Bench { kind } => {
            let (spec, output) = match kind {
                BenchCommand::GateCount {
                    dims,
                    per_dim,
                    zero_fraction,
                    seed,
                    output,
                } => (
                    ExperimentSpec::GateCount {
                        dims,
                        per_dim,
                        zero_fraction,
                        seed,
                    },
                    output,
                ),
                BenchCommand::FixedStep {
                    source,
                    methods,
                    steps,
                    orders,
                    backend,
                    output,
                } => (
                    ExperimentSpec::FixedStepFidelity {
                        source: source.single_instance_source()?,
                        methods,
                        steps,
                        orders,
                        backend,
                    },
                    output,
                ),
                BenchCommand::StepsToTarget {
                    source,
                    methods,
                    order,
                    target,
                    cap,
                    output,
                } => (
                    ExperimentSpec::StepsToTarget {
                        sources: source.instance_sources(),
                        methods,
                        order,
                        target,
                        cap,
                    },
                    output,
                ),
                BenchCommand::SeparatorTrace { source, order, output } => (
                    ExperimentSpec::SeparatorTrace {
                        source: source.single_matrix_source()?,
                        order,
                    },
                    output,
                ),
                BenchCommand::Ensemble {
                    dim,
                    methods,
                    steps,
                    order,
                    trials,
                    seed,
                    output,
                } => (
                    ExperimentSpec::RandomEnsemble {
                        dim,
                        methods,
                        steps,
                        order,
                        trials,
                        seed,
                    },
                    output,
                ),
                BenchCommand::StepsVsOrder {
                    source,
                    method,
                    orders,
                    target,
                    cap,
                    output,
                } => (
                    ExperimentSpec::StepsVsOrder {
                        source: source.single_instance_source()?,
                        method,
                        orders,
                        target,
                        cap,
                    },
                    output,
                ),
                BenchCommand::Config { file, output } => {
                    let text = std::fs::read_to_string(&file)?;
                    let spec: ExperimentSpec = serde_json::from_str(&text)
                        .map_err(|e| Error::Parse(format!("{}: {e}", file.display())))?;
                    (spec, output)
                }
            };
            let table = run_experiment(&spec)?;
            emit(&table, &output)
        }

        Command::Fixtures { out } => {
            std::fs::create_dir_all(&out)?;
            // the linear-system fixture keeps its right-hand side as printed
            let c2 = fixtures::c2_1();
            let file = InstanceFile {
                label: "c2_1".into(),
                dim: 2,
                hermitian: true,
                seed: None,
                matrix: io::matrix_to_pairs(c2.matrix()),
                rhs: io::vector_to_pairs(&fixtures::c2_1_raw_rhs()),
            };
            let path = out.join("c2_1.json");
            std::fs::write(&path, io::to_canonical_json(&file)?)?;
            println!("{}", path.display());

            let path = out.join("s2_1.json");
            io::save_matrix(&MatrixFile::new("s2_1", &fixtures::s2_1(), false), &path)?;
            println!("{}", path.display());

            let path = out.join("h1_c4_1.json");
            io::save_matrix(&MatrixFile::new("h1_c4_1", &fixtures::h1_c4_1(), true), &path)?;
            println!("{}", path.display());

            let path = out.join("identity4.json");
            io::save_instance(&fixtures::identity4(), &path)?;
            println!("{}", path.display());
            Ok(())
        }
    }
}

//! `codesign`: command-line driver for the co-design workbench.
//!
//! Exit codes: 0 success, 1 usage error, 2 contract or capacity error,
//! 3 I/O error.

mod config;
mod repro;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use codesign::analysis::{
    fit_groups, parse_densities, read_records, sweep_backend_size, sweep_density, write_fits,
    write_records, GroupColumn, SweepSpec,
};
use codesign::circuit::Circuit;
use codesign::engine::{optimize_qaoa_with, Method, RunConfig};
use codesign::perfmodel::{circuit_time, scenario_table, write_scenario_csv, GateTimes, RuntimeParams, Scenario};
use codesign::problem::{generate_graph, ProblemGraph};
use codesign::qaoa::{build_qaoa, LayerOrder, QaoaParams};
use codesign::topology::{backend_series, densify, heavy_hex, BackendSize, CouplingMap};
use codesign::transpiler::{transpile_with, NativeCircuit};
use codesign::{par, Exec};

use config::ExperimentConfig;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Config(String),
    Core(codesign::Error),
    Io(std::io::Error),
}

impl From<codesign::Error> for CliError {
    fn from(e: codesign::Error) -> Self {
        match e {
            codesign::Error::Io(io) => CliError::Io(io),
            e => CliError::Core(e),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Io(e.into())
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Config(m) => write!(f, "config error: {m}"),
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Config(_) => 1,
            CliError::Core(codesign::Error::Csv(e)) if e.is_io_error() => 3,
            CliError::Core(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

#[derive(Parser)]
#[command(name = "codesign", version, about = "QPU-system co-design workbench")]
struct Cli {
    /// Worker threads for sweeps and trials (0 = all cores, 1 = sequential).
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Problem graphs.
    #[command(subcommand)]
    Graph(GraphCmd),
    /// Coupling maps.
    #[command(subcommand)]
    Topo(TopoCmd),
    /// QAOA circuits.
    #[command(subcommand)]
    Qaoa(QaoaCmd),
    /// Compile a circuit for a coupling map.
    Transpile(TranspileArgs),
    /// Run the hybrid QAOA loop on the simulator.
    Run(RunArgs),
    /// Evaluate the hybrid runtime model per deployment scenario.
    Runtime(RuntimeArgs),
    /// Depth sweeps over coupling density or backend size.
    #[command(subcommand)]
    Sweep(SweepCmd),
    /// Quantile-regression fits of depth against problem size.
    Fit(FitArgs),
    /// Run the full replication pipeline from one config.
    Repro(ReproArgs),
}

#[derive(Subcommand)]
enum GraphCmd {
    /// Random G(n, m) graph with m = round(density * n(n-1)/2).
    Gen {
        #[arg(long)]
        nodes: usize,
        #[arg(long)]
        density: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Subcommand)]
enum TopoCmd {
    /// Heavy-hex lattice of rows x cols unit cells.
    Gen {
        #[arg(long)]
        rows: usize,
        #[arg(long)]
        cols: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Add couplings until the map reaches a target density.
    Densify {
        #[arg(long)]
        map: PathBuf,
        #[arg(long)]
        target: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Subcommand)]
enum QaoaCmd {
    /// Build the QAOA circuit of a graph.
    Build {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, default_value_t = 1)]
        layers: usize,
        /// Comma-separated betas, one per layer (default 0.4 each).
        #[arg(long)]
        betas: Option<String>,
        /// Comma-separated gammas, one per layer (default 0.7 each).
        #[arg(long)]
        gammas: Option<String>,
        #[arg(long, default_value = "beta-first")]
        order: String,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct TranspileArgs {
    #[arg(long)]
    circuit: PathBuf,
    #[arg(long)]
    map: PathBuf,
    #[arg(long, default_value_t = 20)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    report: Option<PathBuf>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long, default_value_t = 1)]
    layers: usize,
    #[arg(long, default_value_t = 1024)]
    shots: u64,
    #[arg(long, default_value_t = 25)]
    max_iter: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "nelder-mead")]
    method: String,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct RuntimeArgs {
    /// Native circuit whose makespan sets t_circ.
    #[arg(long)]
    native: Option<PathBuf>,
    /// Gate durations, lines of `kind duration_ns`.
    #[arg(long)]
    gate_times: Option<PathBuf>,
    /// Circuit time in seconds when no native circuit is given.
    #[arg(long, default_value_t = 120e-6)]
    t_circ: f64,
    #[arg(long, default_value_t = 25)]
    n_iter: u64,
    #[arg(long, default_value_t = 1024)]
    n_samp: u64,
    #[arg(long, default_value_t = 159e-6)]
    t_opt: f64,
    #[arg(long, default_value_t = 28.6e-6)]
    t_meas: f64,
    /// cloud, local-bus, soc or all.
    #[arg(long, default_value = "all")]
    scenario: String,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct SweepCommon {
    #[arg(long, default_value_t = 0.5)]
    graph_density: f64,
    #[arg(long, default_value_t = 1)]
    layers: usize,
    /// Comma-separated targets; `base` is the undensified lattice.
    #[arg(long, default_value = "base,0.05,0.1,0.2,0.4,0.8,1.0")]
    densities: String,
    #[arg(long, default_value_t = 20)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Subcommand)]
enum SweepCmd {
    /// Depth against coupling density on one lattice.
    Density {
        /// Comma-separated problem sizes.
        #[arg(long, default_value = "20")]
        nodes: String,
        #[arg(long, default_value_t = 6)]
        rows: usize,
        #[arg(long, default_value_t = 3)]
        cols: usize,
        #[command(flatten)]
        common: SweepCommon,
    },
    /// Depth against lattice size over the backend series.
    Size {
        #[arg(long, default_value_t = 60)]
        nodes: usize,
        #[command(flatten)]
        common: SweepCommon,
    },
}

#[derive(Args)]
struct FitArgs {
    #[arg(long)]
    csv: PathBuf,
    #[arg(long, default_value_t = 0.5)]
    tau: f64,
    #[arg(long, default_value_t = 2)]
    degree: usize,
    /// Comma-separated grouping columns.
    #[arg(long, default_value = "coupling_density")]
    group_by: String,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ReproArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    out: PathBuf,
    /// Overrides the config seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Overrides the config trial count.
    #[arg(long)]
    trials: Option<usize>,
}

fn read(path: &Path) -> Result<String> {
    Ok(fs::read_to_string(path)?)
}

fn write(path: &Path, bytes: impl AsRef<[u8]>) -> Result<()> {
    Ok(fs::write(path, bytes)?)
}

fn create(path: &Path) -> Result<std::io::BufWriter<fs::File>> {
    Ok(std::io::BufWriter::new(fs::File::create(path)?))
}

fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>> {
    s.split(',')
        .map(|x| x.trim().parse().map_err(|_| CliError::Usage(format!("bad {what} '{x}'"))))
        .collect()
}

/// Native circuit text with the layouts recorded as comment lines, which
/// the circuit parser skips.
fn native_text(n: &NativeCircuit) -> String {
    let fmt = |l: &[usize]| l.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(" ");
    format!(
        "# initial_layout {}\n# final_layout {}\n{}",
        fmt(n.initial_layout.as_slice()),
        fmt(n.final_layout.as_slice()),
        n.circuit.to_text()
    )
}

fn exec_for(jobs: usize) -> Exec {
    par::set_threads(jobs);
    if jobs == 1 {
        Exec::Sequential
    } else {
        Exec::Parallel
    }
}

fn dispatch(cli: Cli) -> Result<()> {
    let exec = exec_for(cli.jobs);
    match cli.command {
        Command::Graph(GraphCmd::Gen { nodes, density, seed, out }) => {
            write(&out, generate_graph(nodes, density, seed)?.to_text())
        }
        Command::Topo(TopoCmd::Gen { rows, cols, out }) => write(&out, heavy_hex(rows, cols)?.to_text()),
        Command::Topo(TopoCmd::Densify { map, target, seed, out }) => {
            let m = CouplingMap::from_text(&read(&map)?)?;
            write(&out, densify(&m, target, seed)?.to_text())
        }
        Command::Qaoa(QaoaCmd::Build { graph, layers, betas, gammas, order, out }) => {
            let g = ProblemGraph::from_text(&read(&graph)?)?;
            let angles = |s: Option<String>, default: f64, what| match s {
                Some(s) => parse_list::<f64>(&s, what),
                None => Ok(vec![default; layers]),
            };
            let params = QaoaParams::new(
                angles(betas, codesign::analysis::SWEEP_BETA, "beta")?,
                angles(gammas, codesign::analysis::SWEEP_GAMMA, "gamma")?,
            )?;
            if params.layers() != layers {
                return Err(CliError::Usage(format!("expected {layers} angles per list")));
            }
            let order: LayerOrder = order.parse()?;
            write(&out, build_qaoa(&g, &params, order)?.to_text())
        }
        Command::Transpile(a) => {
            let c = Circuit::from_text(&read(&a.circuit)?)?;
            let m = CouplingMap::from_text(&read(&a.map)?)?;
            let (native, report) = transpile_with(&c, &m, a.trials, a.seed, exec)?;
            write(&a.out, native_text(&native))?;
            if let Some(path) = a.report {
                let mut w = create(&path)?;
                report.write_csv(&mut w)?;
                w.flush()?;
            }
            eprintln!(
                "mean depth {:.2} (std {:.2}) over {} trials; best trial {} with depth {}",
                report.mean_depth,
                report.std_depth,
                report.trials,
                report.best_trial_index,
                native.depth()
            );
            Ok(())
        }
        Command::Run(a) => {
            let g = ProblemGraph::from_text(&read(&a.graph)?)?;
            let cfg = RunConfig {
                layers: a.layers,
                shots: a.shots,
                max_iter: a.max_iter,
                seed: a.seed,
                method: a.method.parse::<Method>()?,
                ..RunConfig::default()
            };
            let result = optimize_qaoa_with(&g, &cfg)?;
            write(&a.out, serde_json::to_string_pretty(&result)? + "\n")
        }
        Command::Runtime(a) => {
            let times = match &a.gate_times {
                Some(p) => GateTimes::from_text(&read(p)?)?,
                None => GateTimes::default(),
            };
            let t_circ = match &a.native {
                Some(p) => circuit_time(&Circuit::from_text(&read(p)?)?, &times)? * 1e-9,
                None => a.t_circ,
            };
            let scenarios = match a.scenario.as_str() {
                "all" => Scenario::ALL.to_vec(),
                s => vec![s.parse::<Scenario>()?],
            };
            let base = RuntimeParams {
                n_iter: a.n_iter,
                n_samp: a.n_samp,
                t_circ,
                t_meas: a.t_meas,
                t_opt: a.t_opt,
                t_comm: 0.0,
            };
            base.validate()?;
            let mut w = create(&a.out)?;
            write_scenario_csv(&scenario_table(&base, &scenarios), &base, &mut w)?;
            w.flush()?;
            Ok(())
        }
        Command::Sweep(cmd) => {
            let (records, out) = match cmd {
                SweepCmd::Density { nodes, rows, cols, common } => {
                    let spec = SweepSpec::new(common.graph_density, common.layers, common.trials, common.seed);
                    let base = heavy_hex(rows, cols)?;
                    let recs = sweep_density(
                        &parse_list(&nodes, "node count")?,
                        &spec,
                        &parse_densities(&common.densities)?,
                        &base,
                        BackendSize::new(rows, cols),
                        exec,
                    )?;
                    (recs, common.out)
                }
                SweepCmd::Size { nodes, common } => {
                    let spec = SweepSpec::new(common.graph_density, common.layers, common.trials, common.seed);
                    let recs = sweep_backend_size(
                        nodes,
                        &spec,
                        &backend_series(),
                        &parse_densities(&common.densities)?,
                        exec,
                    )?;
                    (recs, common.out)
                }
            };
            write_records(&records, create(&out)?)?;
            Ok(())
        }
        Command::Fit(a) => {
            let records = read_records(fs::File::open(&a.csv)?)?;
            let group_by: Vec<GroupColumn> = parse_list(&a.group_by, "grouping column")?;
            let fits = fit_groups(&records, &group_by, a.tau, a.degree)?;
            let mut w = create(&a.out)?;
            write_fits(&fits, &group_by, a.degree, &mut w)?;
            w.flush()?;
            Ok(())
        }
        Command::Repro(a) => {
            let mut cfg = match &a.config {
                Some(p) => ExperimentConfig::load(p)?,
                None => ExperimentConfig::default(),
            };
            if let Some(s) = a.seed {
                cfg.seed = s;
            }
            if let Some(t) = a.trials {
                cfg.trials = t;
            }
            if cli.jobs != 0 {
                cfg.jobs = cli.jobs;
            }
            repro::run(&cfg, &a.out)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("codesign: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

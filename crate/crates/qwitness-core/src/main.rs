//! Command-line front end: builds witness specs, evaluates them on
//! simulated states, reports bounds and separability optima, estimates
//! detection potency, simulates measurement shots, and reconstructs
//! single-qubit states and noise levels.

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use qwitness_core::analytic;
use qwitness_core::certify;
use qwitness_core::opt::maximize_periodic_2d;
use qwitness_core::pauli::{build_graph, build_witness, GeneralizedGraph, Pauli, WitnessSpec};
use qwitness_core::potency;
use qwitness_core::state::{
    depolarized_expectation, expectation, ghz_state, haar_random, qaoa_state, ProblemHamiltonian,
    QaoaParams, StateVector,
};
use qwitness_core::tomography;

#[derive(Parser)]
#[command(
    name = "qwitness",
    version,
    about = "Graph-based entanglement witnesses: construction, bounds, simulation, reconstruction"
)]
struct Cli {
    /// Write the output document to this path instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Output layout.
    #[arg(long, global = true, value_enum, default_value_t = Format::Pretty)]
    format: Format,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(ValueEnum, Clone, Copy)]
enum Format {
    Pretty,
    Compact,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build, evaluate, and bound witness observables.
    Witness {
        #[command(subcommand)]
        cmd: WitnessCmd,
    },
    /// Closed-form and simulated depth-1 angle scans.
    Qaoa {
        #[command(subcommand)]
        cmd: QaoaCmd,
    },
    /// k-separable maxima and partition-structure bounds.
    Separability(SeparabilityArgs),
    /// Detection-fraction estimates over random ensembles.
    Potency {
        #[command(subcommand)]
        cmd: PotencyCmd,
    },
    /// Single-qubit reduced-state reconstruction from counts.
    Sqrdm {
        #[command(subcommand)]
        cmd: SqrdmCmd,
    },
    /// Three-basis measurement simulation.
    Shots {
        #[command(subcommand)]
        cmd: ShotsCmd,
    },
    /// Depolarizing-noise fit from observed versus ideal expectations.
    FitNoise(FitNoiseArgs),
}

#[derive(ValueEnum, Clone, Copy)]
enum Family {
    Ring,
    Line,
    Complete,
    Tuple,
    Custom,
}

#[derive(Subcommand)]
enum WitnessCmd {
    /// Construct a witness spec document.
    Build(BuildArgs),
    /// Evaluate a witness on a simulated state and report the verdict.
    Eval(EvalArgs),
    /// Separable, spectral, and moment bounds of a witness.
    Bounds {
        /// Witness spec document.
        #[arg(long)]
        spec: PathBuf,
        /// Also compute the largest eigenvalue.
        #[arg(long)]
        eigenvalue: bool,
    },
}

#[derive(Args)]
struct BuildArgs {
    /// Graph family.
    #[arg(long, value_enum)]
    family: Family,
    /// Number of qubits.
    #[arg(long)]
    n: usize,
    /// Tuple arity for custom edge files (inferred when omitted).
    #[arg(long)]
    k: Option<usize>,
    /// Witness letters: two distinct letters such as XZ, or XYZ.
    #[arg(long, default_value = "XZ")]
    letters: String,
    /// JSON file with an array of index tuples (family = custom).
    #[arg(long)]
    edges: Option<PathBuf>,
}

#[derive(Args, Clone)]
struct StateArgs {
    /// State family to simulate.
    #[arg(long, value_enum)]
    state: StateKind,
    /// Qubit count (ghz, plus, haar).
    #[arg(long)]
    n: Option<usize>,
    /// Ising instance document (qaoa).
    #[arg(long)]
    hamiltonian: Option<PathBuf>,
    /// Phase angles, one per layer (qaoa).
    #[arg(long = "gamma", value_delimiter = ',')]
    gammas: Vec<f64>,
    /// Mixer angles, one per layer (qaoa).
    #[arg(long = "beta", value_delimiter = ',')]
    betas: Vec<f64>,
    /// Flipped qubits in the second branch (ghz).
    #[arg(long, value_delimiter = ',')]
    flips: Vec<usize>,
    /// Relative sign of the second branch, +1 or -1 (ghz).
    #[arg(long, default_value_t = 1)]
    sign: i8,
    /// RNG seed for the sampled state (haar).
    #[arg(long, default_value_t = 0)]
    state_seed: u64,
}

#[derive(ValueEnum, Clone, Copy)]
enum StateKind {
    Ghz,
    Plus,
    Qaoa,
    Haar,
}

#[derive(Args)]
struct EvalArgs {
    /// Witness spec document.
    #[arg(long)]
    spec: PathBuf,
    #[command(flatten)]
    state: StateArgs,
    /// Global depolarizing strength applied to the expectation.
    #[arg(long, default_value_t = 0.0)]
    noise: f64,
    /// Violation tolerance: ties at the bound are inconclusive.
    #[arg(long, default_value_t = certify::DEFAULT_VERDICT_TOL)]
    tolerance: f64,
}

#[derive(Subcommand)]
enum QaoaCmd {
    /// Witness expectation over an inclusive angle grid.
    Sweep(SweepArgs),
    /// Maximize the depth-1 witness expectation over (gamma, beta).
    Optimize {
        /// Witness spec document.
        #[arg(long)]
        spec: PathBuf,
        /// Ising instance document.
        #[arg(long)]
        hamiltonian: PathBuf,
        /// Coarse grid resolution per axis before local refinement.
        #[arg(long, default_value_t = 41)]
        grid: usize,
        /// Violation tolerance for the verdict.
        #[arg(long, default_value_t = certify::DEFAULT_VERDICT_TOL)]
        tolerance: f64,
    },
}

#[derive(Args)]
struct SweepArgs {
    /// Witness spec document.
    #[arg(long)]
    spec: PathBuf,
    /// Ising instance document.
    #[arg(long)]
    hamiltonian: PathBuf,
    #[arg(long, default_value_t = 0.0)]
    gamma_start: f64,
    #[arg(long)]
    gamma_stop: f64,
    #[arg(long)]
    gamma_steps: usize,
    #[arg(long, default_value_t = 0.0)]
    beta_start: f64,
    #[arg(long)]
    beta_stop: f64,
    #[arg(long)]
    beta_steps: usize,
    /// Global depolarizing strength applied to every point.
    #[arg(long, default_value_t = 0.0)]
    noise: f64,
    /// Violation tolerance.
    #[arg(long, default_value_t = certify::DEFAULT_VERDICT_TOL)]
    tolerance: f64,
}

#[derive(Args)]
struct SeparabilityArgs {
    /// Witness spec document.
    #[arg(long)]
    spec: PathBuf,
    /// Number of blocks in the product ansatz.
    #[arg(long, required_unless_present = "partition", conflicts_with = "partition")]
    k: Option<usize>,
    /// Optimizer restarts per candidate partition.
    #[arg(long, default_value_t = 8)]
    restarts: usize,
    /// RNG seed for starts and candidate partitions.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Fixed partition like "0,1|2,3": report its structural bound instead.
    #[arg(long)]
    partition: Option<String>,
}

#[derive(Subcommand)]
enum PotencyCmd {
    /// Fraction of uniformly drawn circuit angles that violate the bound.
    Qaoa {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        hamiltonian: PathBuf,
        /// Circuit depth.
        #[arg(long, default_value_t = 1)]
        layers: usize,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Detection tolerance above the bound.
        #[arg(long, default_value_t = potency::DEFAULT_DETECTION_TOL)]
        tolerance: f64,
        /// Also count lower-bound violations (<W> < -|E| - tol).
        #[arg(long)]
        two_sided: bool,
    },
    /// Fraction of Haar-random pure states that violate the bound.
    Haar {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = potency::DEFAULT_DETECTION_TOL)]
        tolerance: f64,
        /// Also count lower-bound violations (<W> < -|E| - tol).
        #[arg(long)]
        two_sided: bool,
    },
    /// Detection fractions over random +-1 complete-graph instances.
    Table1 {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 40)]
        hams: usize,
        #[arg(long, default_value_t = 500)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Closed-form angle-space detection fraction of the ring family.
    RingIntegral {
        /// Midpoint-grid resolution per axis.
        #[arg(long, default_value_t = 2000)]
        resolution: usize,
    },
}

#[derive(Subcommand)]
enum SqrdmCmd {
    /// Reconstruct every qubit from a shots document.
    Report {
        /// Three-basis counts document.
        #[arg(long)]
        shots: PathBuf,
        /// Graph degree of each qubit, comma-separated.
        #[arg(long, value_delimiter = ',', required = true)]
        degrees: Vec<usize>,
        /// Phase angle of the ideal depth-1 state.
        #[arg(long)]
        gamma: f64,
    },
    /// Ideal depth-1 reduced state of one qubit.
    Ideal {
        /// Graph degree of the qubit.
        #[arg(long)]
        degree: usize,
        /// Phase angle.
        #[arg(long)]
        gamma: f64,
    },
}

#[derive(Subcommand)]
enum ShotsCmd {
    /// Sample three-basis counts from a simulated state.
    Simulate {
        #[command(flatten)]
        state: StateArgs,
        /// Shots per basis.
        #[arg(long, default_value_t = 1024)]
        shots: u64,
        /// Global depolarizing strength.
        #[arg(long, default_value_t = 0.0)]
        noise: f64,
        /// Sampling seed.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Args)]
struct FitNoiseArgs {
    /// Observed expectations, comma-separated.
    #[arg(long, value_delimiter = ',', required = true)]
    observed: Vec<f64>,
    /// Ideal (noise-free) expectations, comma-separated.
    #[arg(long, value_delimiter = ',', required = true)]
    ideal: Vec<f64>,
    /// Qubit count, for the critical-threshold report.
    #[arg(long)]
    n: usize,
}

fn main() -> ExitCode {
    configure_workers();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

/// QWITNESS_WORKERS caps the rayon pool; unset means all cores.
fn configure_workers() {
    if let Ok(val) = std::env::var("QWITNESS_WORKERS") {
        if let Ok(n) = val.parse::<usize>() {
            if n >= 1 {
                let _ = rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build_global();
            }
        }
    }
}

struct Output {
    out: Option<PathBuf>,
    format: Format,
}

impl Output {
    fn render(&self, value: &serde_json::Value) -> anyhow::Result<String> {
        Ok(match self.format {
            Format::Pretty => serde_json::to_string_pretty(value)?,
            Format::Compact => serde_json::to_string(value)?,
        })
    }

    /// Standard envelope to stdout or --out.
    fn emit(
        &self,
        command: &str,
        seed: Option<u64>,
        config: serde_json::Value,
        result: serde_json::Value,
    ) -> anyhow::Result<()> {
        let envelope = serde_json::json!({
            "command": command,
            "version": env!("CARGO_PKG_VERSION"),
            "seed": seed,
            "config": config,
            "result": result,
        });
        let text = self.render(&envelope)?;
        match &self.out {
            Some(path) => std::fs::write(path, text + "\n")
                .with_context(|| format!("writing {}", path.display()))?,
            None => print_line(&text)?,
        }
        Ok(())
    }

    /// Bare re-ingestible document to --out (falls back to the envelope on
    /// stdout when --out is absent).
    fn emit_document(
        &self,
        command: &str,
        seed: Option<u64>,
        config: serde_json::Value,
        document: serde_json::Value,
    ) -> anyhow::Result<()> {
        if let Some(path) = &self.out {
            let text = self.render(&document)?;
            std::fs::write(path, text + "\n")
                .with_context(|| format!("writing {}", path.display()))?;
            Ok(())
        } else {
            self.emit(command, seed, config, document)
        }
    }
}

fn to_value<T: Serialize>(v: &T) -> anyhow::Result<serde_json::Value> {
    Ok(serde_json::to_value(v)?)
}

/// Treats a closed stdout (e.g. a downstream `head`) as a clean exit.
fn print_line(text: &str) -> anyhow::Result<()> {
    use std::io::Write;
    let mut stdout = std::io::stdout().lock();
    if let Err(e) = writeln!(stdout, "{text}").and_then(|()| stdout.flush()) {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            std::process::exit(0);
        }
        return Err(e.into());
    }
    Ok(())
}

fn run(cli: Cli) -> anyhow::Result<()> {
    let output = Output {
        out: cli.out.clone(),
        format: cli.format,
    };
    match cli.cmd {
        Cmd::Witness { cmd } => match cmd {
            WitnessCmd::Build(args) => witness_build(&output, args),
            WitnessCmd::Eval(args) => witness_eval(&output, args),
            WitnessCmd::Bounds { spec, eigenvalue } => witness_bounds(&output, spec, eigenvalue),
        },
        Cmd::Qaoa { cmd } => match cmd {
            QaoaCmd::Sweep(args) => qaoa_sweep(&output, args),
            QaoaCmd::Optimize {
                spec,
                hamiltonian,
                grid,
                tolerance,
            } => qaoa_optimize(&output, spec, hamiltonian, grid, tolerance),
        },
        Cmd::Separability(args) => separability(&output, args),
        Cmd::Potency { cmd } => potency_cmd(&output, cmd),
        Cmd::Sqrdm { cmd } => sqrdm_cmd(&output, cmd),
        Cmd::Shots { cmd } => shots_cmd(&output, cmd),
        Cmd::FitNoise(args) => fit_noise(&output, args),
    }
}

fn parse_letters(text: &str) -> anyhow::Result<Vec<Pauli>> {
    text.chars()
        .map(|c| {
            Pauli::from_char(c)
                .filter(|&p| p != Pauli::I)
                .ok_or_else(|| anyhow::anyhow!("invalid witness letter {c:?}"))
        })
        .collect()
}

fn witness_build(output: &Output, args: BuildArgs) -> anyhow::Result<()> {
    let graph = match args.family {
        Family::Ring => GeneralizedGraph::ring(args.n)?,
        Family::Line => GeneralizedGraph::line(args.n)?,
        Family::Complete => GeneralizedGraph::complete(args.n)?,
        Family::Tuple => GeneralizedGraph::full_tuple(args.n)?,
        Family::Custom => {
            let path = args
                .edges
                .as_ref()
                .context("--edges is required for --family custom")?;
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading {}", path.display()))?;
            let tuples: Vec<Vec<usize>> = serde_json::from_str(&text)?;
            let k = args
                .k
                .or_else(|| tuples.first().map(Vec::len))
                .context("empty edge list")?;
            build_graph(args.n, k, &tuples)?
        }
    };
    let letters = parse_letters(&args.letters)?;
    let spec = match letters.len() {
        2 => WitnessSpec::w_pq(graph, letters[0], letters[1])?,
        3 => {
            let mut sorted = letters.clone();
            sorted.sort_by_key(|p| p.as_char());
            if sorted != [Pauli::X, Pauli::Y, Pauli::Z] {
                bail!("three-letter witnesses must use X, Y, and Z");
            }
            WitnessSpec::w_xyz(graph)?
        }
        m => bail!("expected 2 or 3 letters, got {m}"),
    };
    let config = serde_json::json!({
        "n": args.n,
        "letters": args.letters,
    });
    let doc: serde_json::Value = serde_json::from_str(&spec.to_json_string())?;
    output.emit_document("witness build", None, config, doc)
}

fn build_state(args: &StateArgs) -> anyhow::Result<(StateVector, serde_json::Value)> {
    match args.state {
        StateKind::Plus => {
            let n = args.n.context("--n is required for --state plus")?;
            Ok((
                StateVector::uniform_plus(n)?,
                serde_json::json!({"state": "plus", "n": n}),
            ))
        }
        StateKind::Ghz => {
            let n = args.n.context("--n is required for --state ghz")?;
            Ok((
                ghz_state(n, &args.flips, args.sign)?,
                serde_json::json!({
                    "state": "ghz", "n": n, "flips": args.flips, "sign": args.sign,
                }),
            ))
        }
        StateKind::Haar => {
            let n = args.n.context("--n is required for --state haar")?;
            Ok((
                haar_random(n, args.state_seed)?,
                serde_json::json!({"state": "haar", "n": n, "state_seed": args.state_seed}),
            ))
        }
        StateKind::Qaoa => {
            let path = args
                .hamiltonian
                .as_ref()
                .context("--hamiltonian is required for --state qaoa")?;
            let ham = ProblemHamiltonian::load(path)?;
            let params = QaoaParams::new(args.gammas.clone(), args.betas.clone())?;
            Ok((
                qaoa_state(&ham, &params)?,
                serde_json::json!({
                    "state": "qaoa",
                    "hamiltonian": path,
                    "gammas": args.gammas,
                    "betas": args.betas,
                }),
            ))
        }
    }
}

fn witness_eval(output: &Output, args: EvalArgs) -> anyhow::Result<()> {
    let spec = WitnessSpec::load(&args.spec)?;
    let obs = build_witness(&spec)?;
    let (state, state_config) = build_state(&args.state)?;
    let value = if args.noise > 0.0 {
        depolarized_expectation(&obs, &state, args.noise)?
    } else {
        expectation(&obs, &state)?
    };
    let verdict = certify::verdict(&spec, value, args.tolerance);
    let config = serde_json::json!({
        "spec": args.spec,
        "state": state_config,
        "noise": args.noise,
        "tolerance": args.tolerance,
    });
    output.emit("witness eval", None, config, to_value(&verdict)?)
}

fn witness_bounds(output: &Output, spec_path: PathBuf, eigenvalue: bool) -> anyhow::Result<()> {
    let spec = WitnessSpec::load(&spec_path)?;
    let report = certify::bound_report(&spec, eigenvalue)?;
    let config = serde_json::json!({"spec": spec_path, "eigenvalue": eigenvalue});
    output.emit("witness bounds", None, config, to_value(&report)?)
}

fn grid_values(start: f64, stop: f64, steps: usize) -> anyhow::Result<Vec<f64>> {
    if steps == 0 {
        bail!("grid needs at least one step");
    }
    if steps == 1 {
        return Ok(vec![start]);
    }
    let h = (stop - start) / (steps as f64 - 1.0);
    Ok((0..steps).map(|i| start + i as f64 * h).collect())
}

#[derive(Serialize)]
struct SweepPoint {
    gamma: f64,
    beta: f64,
    expectation: f64,
    violated: bool,
}

fn qaoa_sweep(output: &Output, args: SweepArgs) -> anyhow::Result<()> {
    let spec = WitnessSpec::load(&args.spec)?;
    let obs = build_witness(&spec)?;
    let ham = ProblemHamiltonian::load(&args.hamiltonian)?;
    let bound = certify::separable_bound(&spec);
    let gammas = grid_values(args.gamma_start, args.gamma_stop, args.gamma_steps)?;
    let betas = grid_values(args.beta_start, args.beta_stop, args.beta_steps)?;
    let mut points = Vec::with_capacity(gammas.len() * betas.len());
    let mut best: Option<usize> = None;
    for &gamma in &gammas {
        for &beta in &betas {
            let state = qaoa_state(&ham, &QaoaParams::single(gamma, beta))?;
            let expectation = depolarized_expectation(&obs, &state, args.noise)?;
            points.push(SweepPoint {
                gamma,
                beta,
                expectation,
                violated: expectation > bound + args.tolerance
                    || expectation < -bound - args.tolerance,
            });
            if best.map_or(true, |b| expectation > points[b].expectation) {
                best = Some(points.len() - 1);
            }
        }
    }
    let best = &points[best.expect("nonempty grid")];
    let config = serde_json::json!({
        "spec": args.spec,
        "hamiltonian": args.hamiltonian,
        "gamma": {"start": args.gamma_start, "stop": args.gamma_stop, "steps": args.gamma_steps},
        "beta": {"start": args.beta_start, "stop": args.beta_stop, "steps": args.beta_steps},
        "noise": args.noise,
        "tolerance": args.tolerance,
    });
    let result = serde_json::json!({
        "separable_bound": bound,
        "best": to_value(best)?,
        "points": to_value(&points)?,
    });
    output.emit("qaoa sweep", None, config, result)
}

fn qaoa_optimize(
    output: &Output,
    spec_path: PathBuf,
    ham_path: PathBuf,
    grid: usize,
    tolerance: f64,
) -> anyhow::Result<()> {
    if grid < 2 {
        bail!("grid must be at least 2");
    }
    let spec = WitnessSpec::load(&spec_path)?;
    let obs = build_witness(&spec)?;
    let ham = ProblemHamiltonian::load(&ham_path)?;
    let f = |gamma: f64, beta: f64| -> f64 {
        let state = qaoa_state(&ham, &QaoaParams::single(gamma, beta)).expect("validated");
        expectation(&obs, &state).expect("dimension match")
    };
    let outcome = maximize_periodic_2d(&f, grid, 1e-10);
    let verdict = certify::verdict(&spec, outcome.value, tolerance);
    let config = serde_json::json!({
        "spec": spec_path,
        "hamiltonian": ham_path,
        "grid": grid,
        "tolerance": tolerance,
    });
    let result = serde_json::json!({
        "gamma": outcome.x[0],
        "beta": outcome.x[1],
        "value": outcome.value,
        "converged": outcome.converged,
        "iterations": outcome.iterations,
        "verdict": to_value(&verdict)?,
    });
    output.emit("qaoa optimize", None, config, result)
}

fn parse_partition(text: &str) -> anyhow::Result<Vec<Vec<usize>>> {
    text.split('|')
        .map(|block| {
            block
                .split(',')
                .filter(|s| !s.trim().is_empty())
                .map(|s| s.trim().parse::<usize>().context("invalid qubit index"))
                .collect()
        })
        .collect()
}

fn separability(output: &Output, args: SeparabilityArgs) -> anyhow::Result<()> {
    let spec = WitnessSpec::load(&args.spec)?;
    if let Some(text) = &args.partition {
        let partition = parse_partition(text)?;
        let bound = certify::bisep_structural_bound(&spec, &partition)?;
        let config = serde_json::json!({"spec": args.spec, "partition": text});
        let result = serde_json::json!({
            "partition": partition,
            "structural_bound": bound,
            "separable_bound": certify::separable_bound(&spec),
        });
        return output.emit("separability", None, config, result);
    }
    let k = args.k.expect("clap requires --k without --partition");
    let obs = build_witness(&spec)?;
    let report = certify::ksep_max(&obs, k, args.restarts, args.seed)?;
    let config = serde_json::json!({
        "spec": args.spec,
        "k": k,
        "restarts": args.restarts,
    });
    output.emit("separability", Some(args.seed), config, to_value(&report)?)
}

fn potency_cmd(output: &Output, cmd: PotencyCmd) -> anyhow::Result<()> {
    match cmd {
        PotencyCmd::Qaoa {
            spec,
            hamiltonian,
            layers,
            samples,
            seed,
            tolerance,
            two_sided,
        } => {
            let w = WitnessSpec::load(&spec)?;
            let ham = ProblemHamiltonian::load(&hamiltonian)?;
            let opts = potency::PotencyOptions {
                detection_tolerance: tolerance,
                two_sided,
            };
            let est = potency::potency_qaoa_with(&w, &ham, layers, samples, seed, &opts)?;
            let config = serde_json::json!({
                "spec": spec,
                "hamiltonian": hamiltonian,
                "layers": layers,
                "samples": samples,
                "tolerance": tolerance,
                "two_sided": two_sided,
            });
            output.emit("potency qaoa", Some(seed), config, to_value(&est)?)
        }
        PotencyCmd::Haar {
            spec,
            samples,
            seed,
            tolerance,
            two_sided,
        } => {
            let w = WitnessSpec::load(&spec)?;
            let opts = potency::PotencyOptions {
                detection_tolerance: tolerance,
                two_sided,
            };
            let est = potency::potency_haar_with(&w, samples, seed, &opts)?;
            let config = serde_json::json!({
                "spec": spec,
                "samples": samples,
                "tolerance": tolerance,
                "two_sided": two_sided,
            });
            output.emit("potency haar", Some(seed), config, to_value(&est)?)
        }
        PotencyCmd::Table1 {
            n,
            hams,
            samples,
            seed,
        } => {
            let summary = potency::random_coupling_protocol(n, hams, samples, seed)?;
            let config = serde_json::json!({
                "n": n,
                "hams": hams,
                "samples": samples,
            });
            output.emit("potency table1", Some(seed), config, to_value(&summary)?)
        }
        PotencyCmd::RingIntegral { resolution } => {
            let fraction = potency::heaviside_ring_integral(resolution)?;
            let config = serde_json::json!({"resolution": resolution});
            let result = serde_json::json!({"fraction": fraction});
            output.emit("potency ring-integral", None, config, result)
        }
    }
}

fn sqrdm_cmd(output: &Output, cmd: SqrdmCmd) -> anyhow::Result<()> {
    match cmd {
        SqrdmCmd::Report {
            shots,
            degrees,
            gamma,
        } => {
            let ds = tomography::load_shots(&shots)?;
            let report = tomography::coherence_report(&ds, &degrees, gamma)?;
            let config = serde_json::json!({
                "shots": shots,
                "degrees": degrees,
                "gamma": gamma,
            });
            output.emit("sqrdm report", None, config, to_value(&report)?)
        }
        SqrdmCmd::Ideal { degree, gamma } => {
            let rho = analytic::sqrdm_qaoa(degree, gamma);
            let config = serde_json::json!({"degree": degree, "gamma": gamma});
            let result = serde_json::json!({
                "rho": to_value(&rho)?,
                "coherence": analytic::coherence(&rho),
                "max_classical_fidelity": analytic::max_classical_fidelity(degree, gamma),
            });
            output.emit("sqrdm ideal", None, config, result)
        }
    }
}

fn shots_cmd(output: &Output, cmd: ShotsCmd) -> anyhow::Result<()> {
    match cmd {
        ShotsCmd::Simulate {
            state,
            shots,
            noise,
            seed,
        } => {
            let (sv, state_config) = build_state(&state)?;
            let ds = tomography::simulate_shots(&sv, shots, noise, seed)?;
            let config = serde_json::json!({
                "state": state_config,
                "shots": shots,
                "noise": noise,
            });
            let doc: serde_json::Value = serde_json::from_str(&ds.to_json_string()?)?;
            output.emit_document("shots simulate", Some(seed), config, doc)
        }
    }
}

fn fit_noise(output: &Output, args: FitNoiseArgs) -> anyhow::Result<()> {
    let fit = tomography::fit_depolarizing(&args.observed, &args.ideal, args.n)?;
    let config = serde_json::json!({
        "observed": args.observed,
        "ideal": args.ideal,
        "n": args.n,
    });
    output.emit("fit-noise", None, config, to_value(&fit)?)
}

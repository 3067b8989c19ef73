//! Command-line front end. [`run`] parses arguments, executes one
//! subcommand and returns what `varq` prints on stdout; side outputs such
//! as history CSVs go to the paths given by flags.

pub mod classifier;

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use varq::chemistry::{excited_states, make_hamiltonian, make_upccgsd_ansatz, Molecule, UpccgsdOptions};
use varq::circuit::{parse_circuit, QCircuit};
use varq::compiler::{compile, CompilerConfig};
use varq::expr::{Assignment, Variable};
use varq::objective::{compile_objective, make_expectation, ExecutionConfig};
use varq::optimize::{minimize, GradientMode, Method, OptimizerConfig, OptimizerResult};
use varq::pauli::{all_zero_projector, parse_hamiltonian, projector, QubitHamiltonian, QubitWaveFunction};
use varq::simulator::{sample, simulate, NoiseModel};

use classifier::ClassifierConfig;

#[derive(Debug, Parser)]
#[command(name = "varq", version, about = "Variational quantum objectives: simulate, differentiate, optimize")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print amplitudes, or counts when --samples is given.
    Simulate(SimulateArgs),
    /// Expectation value of a Hamiltonian over a circuit.
    Expect(ExpectArgs),
    /// UpCCGSD ground-state search on a molecule.
    Vqe(VqeArgs),
    /// Sequential projected search for low-lying states.
    Excited(ExcitedArgs),
    /// Train and score the data re-uploading classifier.
    Classify(ClassifyArgs),
    /// Fidelity of a circuit state with a target state or circuit.
    Fidelity(FidelityArgs),
}

#[derive(Debug, Clone, Args)]
pub struct ExecutionArgs {
    /// Shots per measurement group; exact expectation values when absent.
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Noise model JSON file.
    #[arg(long)]
    pub noise: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct OptimizerArgs {
    #[arg(long, default_value = "adam")]
    pub method: Method,
    #[arg(long, default_value_t = 0.05)]
    pub lr: f64,
    #[arg(long, default_value_t = 200)]
    pub maxiter: usize,
    /// `analytic`, `numerical` or `numerical:<step>`.
    #[arg(long, default_value = "analytic")]
    pub gradient: GradientMode,
    /// Write the optimization history as CSV.
    #[arg(long)]
    pub history: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long)]
    pub circuit: PathBuf,
    /// Variable value as `name=value`; repeatable.
    #[arg(long = "var", value_name = "NAME=VALUE")]
    pub vars: Vec<String>,
    /// Comma-separated compiler passes applied first.
    #[arg(long)]
    pub compile: Option<String>,
    #[command(flatten)]
    pub execution: ExecutionArgs,
}

#[derive(Debug, Args)]
pub struct ExpectArgs {
    #[arg(long)]
    pub circuit: PathBuf,
    /// Hamiltonian text, e.g. `0.5*X(0)X(1) - Z(0)`.
    #[arg(long, conflicts_with = "hamiltonian_file", allow_hyphen_values = true)]
    pub hamiltonian: Option<String>,
    #[arg(long)]
    pub hamiltonian_file: Option<PathBuf>,
    #[arg(long = "var", value_name = "NAME=VALUE")]
    pub vars: Vec<String>,
    #[arg(long)]
    pub compile: Option<String>,
    /// Measure qubit-wise commuting groups together.
    #[arg(long)]
    pub optimize_measurements: bool,
    #[command(flatten)]
    pub execution: ExecutionArgs,
}

#[derive(Debug, Args)]
pub struct VqeArgs {
    #[arg(long)]
    pub molecule: PathBuf,
    #[arg(long, default_value = "upccgsd")]
    pub ansatz: String,
    #[arg(long, default_value_t = 1)]
    pub layers: usize,
    #[command(flatten)]
    pub optimizer: OptimizerArgs,
    #[command(flatten)]
    pub execution: ExecutionArgs,
}

#[derive(Debug, Args)]
pub struct ExcitedArgs {
    /// Molecule JSON; the ansatz is UpCCGSD.
    #[arg(long, conflicts_with_all = ["hamiltonian", "circuit"])]
    pub molecule: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    pub layers: usize,
    /// Hamiltonian text, used with --circuit as the ansatz.
    #[arg(long, requires = "circuit", allow_hyphen_values = true)]
    pub hamiltonian: Option<String>,
    #[arg(long, requires = "hamiltonian")]
    pub circuit: Option<PathBuf>,
    #[arg(long, default_value_t = 2)]
    pub states: usize,
    /// Initial value as `name=value`; repeatable, shared by every round.
    #[arg(long = "var", value_name = "NAME=VALUE")]
    pub vars: Vec<String>,
    /// Add uniform noise in `[-A, A]`, drawn from --seed, to every initial
    /// angle. Symmetric starts can leave some gradients exactly zero.
    #[arg(long, default_value_t = 0.0, value_name = "A")]
    pub jitter: f64,
    #[command(flatten)]
    pub optimizer: OptimizerArgs,
    #[command(flatten)]
    pub execution: ExecutionArgs,
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    #[arg(long, default_value_t = 3)]
    pub layers: usize,
    #[arg(long, default_value_t = 400)]
    pub train: usize,
    #[arg(long, default_value_t = 1000)]
    pub test: usize,
    #[arg(long, default_value = "rmsprop")]
    pub method: Method,
    #[arg(long, default_value_t = 0.05)]
    pub lr: f64,
    #[arg(long, default_value_t = 150)]
    pub maxiter: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Write test-set decision data as CSV.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FidelityArgs {
    /// Circuit whose output state is compared.
    #[arg(long)]
    pub circuit: PathBuf,
    /// Analytically known target, e.g. `|00> + |11>`; normalized.
    #[arg(long, required_unless_present = "target", allow_hyphen_values = true)]
    pub state: Option<String>,
    /// Circuit preparing the target.
    #[arg(long)]
    pub target: Option<PathBuf>,
    #[arg(long = "var", value_name = "NAME=VALUE")]
    pub vars: Vec<String>,
}

/// Parse `name=value` or `name@label=value`.
pub fn parse_var(text: &str) -> Result<(Variable, f64)> {
    let (name, value) = text.split_once('=').ok_or_else(|| anyhow!("expected NAME=VALUE, got '{text}'"))?;
    let value: f64 = value.trim().parse().with_context(|| format!("bad value in '{text}'"))?;
    let name = name.trim();
    let v = match name.split_once('@') {
        Some((n, l)) => Variable::with_label(n, l),
        None => Variable::new(name),
    };
    Ok((v, value))
}

pub fn parse_vars(items: &[String]) -> Result<Assignment> {
    items.iter().map(|s| parse_var(s)).collect()
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn load_circuit(path: &Path, passes: Option<&str>) -> Result<QCircuit> {
    let u = parse_circuit(&read(path)?).with_context(|| format!("in circuit {}", path.display()))?;
    match passes {
        Some(list) => Ok(compile(&u, &CompilerConfig::from_list(list)?)?),
        None => Ok(u),
    }
}

fn require_assigned(u: &QCircuit, vars: &Assignment) -> Result<()> {
    let missing: Vec<String> =
        u.extract_variables().into_iter().filter(|v| !vars.contains(v)).map(|v| v.to_string()).collect();
    if !missing.is_empty() {
        bail!("unassigned variable(s): {}", missing.join(", "));
    }
    Ok(())
}

impl ExecutionArgs {
    pub fn to_config(&self) -> Result<ExecutionConfig> {
        let noise = match &self.noise {
            Some(path) => Some(NoiseModel::from_json(&read(path)?)?),
            None => None,
        };
        Ok(ExecutionConfig { samples: self.samples, noise, seed: self.seed })
    }
}

impl OptimizerArgs {
    pub fn to_config(&self) -> OptimizerConfig {
        let mut config = OptimizerConfig::new(self.method, self.lr, self.maxiter);
        config.gradient = self.gradient.clone();
        config
    }

    fn write_history(&self, result: &OptimizerResult) -> Result<()> {
        if let Some(path) = &self.history {
            fs::write(path, result.history.to_csv()).with_context(|| format!("cannot write {}", path.display()))?;
        }
        Ok(())
    }
}

fn assignment_csv(out: &mut String, assignment: &Assignment) {
    for (v, x) in assignment.iter() {
        let _ = writeln!(out, "{v},{x}");
    }
}

pub fn cmd_simulate(args: &SimulateArgs) -> Result<String> {
    let u = load_circuit(&args.circuit, args.compile.as_deref())?;
    let vars = parse_vars(&args.vars)?;
    require_assigned(&u, &vars)?;
    let execution = args.execution.to_config()?;
    let mut out = String::new();
    match execution.samples {
        Some(shots) => {
            let counts = sample(&u, &vars, shots, execution.seed.unwrap_or(0), execution.noise.as_ref())?;
            out.push_str("basis,count\n");
            for (bits, n) in counts.bitstring_counts() {
                let _ = writeln!(out, "{bits},{n}");
            }
        }
        None => {
            if execution.noise.is_some() {
                bail!("--noise requires --samples");
            }
            let wfn = simulate(&u, &vars)?.to_wavefunction();
            out.push_str("basis,real,imag,probability\n");
            for (k, a) in wfn.iter() {
                let _ = writeln!(out, "{},{},{},{}", wfn.bitstring(k), a.re, a.im, a.norm_sqr());
            }
        }
    }
    Ok(out)
}

pub fn cmd_expect(args: &ExpectArgs) -> Result<String> {
    let u = load_circuit(&args.circuit, args.compile.as_deref())?;
    let h = match (&args.hamiltonian, &args.hamiltonian_file) {
        (Some(text), _) => parse_hamiltonian(text)?,
        (None, Some(path)) => parse_hamiltonian(&read(path)?)?,
        (None, None) => bail!("one of --hamiltonian or --hamiltonian-file is required"),
    };
    let vars = parse_vars(&args.vars)?;
    require_assigned(&u, &vars)?;
    let objective = make_expectation(&u, &h, args.optimize_measurements)?;
    let value = compile_objective(&objective, args.execution.to_config()?)?.call(&vars)?;
    Ok(format!("{value}\n"))
}

fn upccgsd(molecule: &Path, layers: usize) -> Result<(Molecule, QubitHamiltonian, QCircuit)> {
    let mol = Molecule::load(molecule)?;
    let h = make_hamiltonian(&mol)?;
    let u = make_upccgsd_ansatz(&mol, UpccgsdOptions { layers, ..Default::default() })?;
    Ok((mol, h, u))
}

/// Prints `quantity,value` rows: the final energy, the iteration count and
/// the optimal angles.
pub fn cmd_vqe(args: &VqeArgs) -> Result<String> {
    if args.ansatz != "upccgsd" {
        bail!("unknown ansatz '{}'; only upccgsd is available", args.ansatz);
    }
    let (_, h, u) = upccgsd(&args.molecule, args.layers)?;
    let objective = make_expectation(&u, &h, false)?;
    let result = minimize(&objective, args.optimizer.to_config(), None, args.execution.to_config()?)?;
    args.optimizer.write_history(&result)?;
    let mut out = String::from("quantity,value\n");
    let _ = writeln!(out, "energy,{}", result.energy);
    let _ = writeln!(out, "iterations,{}", result.history.len().saturating_sub(1));
    assignment_csv(&mut out, &result.assignment);
    Ok(out)
}

/// Prints `state,energy` rows followed by each round's labelled angles.
pub fn cmd_excited(args: &ExcitedArgs) -> Result<String> {
    let (h, u) = match (&args.molecule, &args.hamiltonian, &args.circuit) {
        (Some(path), _, _) => {
            let (_, h, u) = upccgsd(path, args.layers)?;
            (h, u)
        }
        (None, Some(text), Some(path)) => (parse_hamiltonian(text)?, load_circuit(path, None)?),
        _ => bail!("give --molecule, or --hamiltonian with --circuit"),
    };
    let mut initial = parse_vars(&args.vars)?;
    if args.jitter != 0.0 {
        let mut rng = ChaCha8Rng::seed_from_u64(args.execution.seed.unwrap_or(0));
        for v in u.extract_variables() {
            let x = initial.get(&v).unwrap_or(0.0) + rng.gen_range(-args.jitter.abs()..=args.jitter.abs());
            initial.insert(v, x);
        }
    }
    let states =
        excited_states(&h, &u, args.states, &args.optimizer.to_config(), &initial, &args.execution.to_config()?)?;
    let mut out = String::from("state,energy\n");
    for (k, s) in states.iter().enumerate() {
        let _ = writeln!(out, "{k},{}", s.energy);
    }
    out.push_str("variable,value\n");
    for s in &states {
        assignment_csv(&mut out, &s.assignment);
    }
    Ok(out)
}

pub fn cmd_classify(args: &ClassifyArgs) -> Result<String> {
    let config = ClassifierConfig {
        layers: args.layers,
        train: args.train,
        test: args.test,
        method: args.method,
        lr: args.lr,
        maxiter: args.maxiter,
        seed: args.seed,
    };
    let report = classifier::classify(&config)?;
    if let Some(path) = &args.output {
        fs::write(path, report.to_csv()).with_context(|| format!("cannot write {}", path.display()))?;
    }
    let mut out = String::from("quantity,value\n");
    let _ = writeln!(out, "train_accuracy,{}", report.train_accuracy);
    let _ = writeln!(out, "test_accuracy,{}", report.test_accuracy);
    let _ = writeln!(out, "initial_loss,{}", report.initial_loss);
    let _ = writeln!(out, "final_loss,{}", report.final_loss);
    assignment_csv(&mut out, &report.result.assignment);
    Ok(out)
}

/// `⟨ψ|ρ_U|ψ⟩` as the expectation of the projector onto the target.
pub fn fidelity_projector(u: &QCircuit, target: &QubitWaveFunction, vars: &Assignment) -> Result<f64> {
    let h = projector(target)?;
    Ok(make_expectation(u, &h, false)?.evaluate(vars)?)
}

/// `|⟨0|V† U|0⟩|²` as the all-zero projector over `U` followed by `V†`.
pub fn fidelity_circuit(u: &QCircuit, target: &QCircuit, vars: &Assignment) -> Result<f64> {
    let n = u.n_qubits().max(target.n_qubits());
    let h = all_zero_projector(0..n);
    Ok(make_expectation(&(u.clone() + target.dagger()), &h, false)?.evaluate(vars)?)
}

/// Prints one `strategy,fidelity` row per supplied target.
pub fn cmd_fidelity(args: &FidelityArgs) -> Result<String> {
    let u = load_circuit(&args.circuit, None)?;
    let vars = parse_vars(&args.vars)?;
    let mut out = String::from("strategy,fidelity\n");
    if let Some(state) = &args.state {
        let target = QubitWaveFunction::from_string(state)?;
        if target.n_qubits() < u.n_qubits() {
            bail!("target state has {} qubits but the circuit uses {}", target.n_qubits(), u.n_qubits());
        }
        require_assigned(&u, &vars)?;
        let _ = writeln!(out, "projector,{}", fidelity_projector(&u, &target, &vars)?);
    }
    if let Some(path) = &args.target {
        let v = load_circuit(path, None)?;
        let needed: BTreeSet<Variable> = u.extract_variables().into_iter().chain(v.extract_variables()).collect();
        if let Some(missing) = needed.iter().find(|x| !vars.contains(x)) {
            bail!("unassigned variable(s): {missing}");
        }
        let _ = writeln!(out, "circuit,{}", fidelity_circuit(&u, &v, &vars)?);
    }
    Ok(out)
}

pub fn execute(cli: &Cli) -> Result<String> {
    match &cli.command {
        Command::Simulate(a) => cmd_simulate(a),
        Command::Expect(a) => cmd_expect(a),
        Command::Vqe(a) => cmd_vqe(a),
        Command::Excited(a) => cmd_excited(a),
        Command::Classify(a) => cmd_classify(a),
        Command::Fidelity(a) => cmd_fidelity(a),
    }
}

/// Parse `args` (program name first) and run the subcommand.
pub fn run<I, T>(args: I) -> Result<String>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(args)?;
    execute(&cli)
}

//! Command-line front end for POVM work: construct measurement sets, verify
//! artifacts, recompute dual operators, simulate tomography runs, and Monte
//! Carlo check the coherent-state resolution of identity.  Every artifact is
//! deterministic JSON: the same command with the same seed produces the same
//! bytes.
//!
//! Exit codes: 0 success, 1 verification failed, 2 usage or construction
//! error (reported on stderr as `Name: message`).

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use micpovm::tol::ToleranceProfile;
use micpovm::{
    build_frame, cfs_construct, coherent_projector, evr_dual_construct, evr_primal_construct,
    general_construct, preset_discrimination, preset_generic_qubit, preset_tetrahedral,
    random_density, random_hermitian, resolution_of_identity_mc, run_tomography,
    sample_directions, to_json_pretty, verify, ConstructionSide, DensityMatrix, Direction,
    HermitianOperator, NormalizationMode, OperatorSetFile, Povm,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

#[derive(Parser)]
#[command(
    name = "micpovm",
    version,
    about = "Minimal informationally complete POVMs: construction, verification, simulated tomography"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Construct a POVM and emit it as a JSON artifact.
    Generate(GenerateArgs),
    /// Check a POVM artifact and print its verification report.
    Verify(VerifyArgs),
    /// Recompute the dual operators of a POVM artifact.
    Dual(DualArgs),
    /// Simulate tomography of a state measured with a POVM.
    Tomo(TomoArgs),
    /// Monte Carlo residual of the coherent-state resolution of identity.
    CheckIdentity(CheckIdentityArgs),
}

#[derive(Args)]
struct GenerateArgs {
    /// Construction method.
    #[arg(long, value_enum)]
    method: Method,
    /// Hilbert space dimension (default 2; derived from --input when given).
    #[arg(long)]
    dim: Option<usize>,
    /// Seed for randomized methods (random-coherent, seeded general).
    #[arg(long)]
    seed: Option<u64>,
    /// Operator-set JSON file for input-driven methods (cfs, evr-*, general).
    #[arg(long)]
    input: Option<PathBuf>,
    /// Normalization mode of the general construction.
    #[arg(long, value_enum, default_value_t = ModeArg::ClosedForm)]
    mode: ModeArg,
    /// Basis of the normalized frame the general construction rescales.
    #[arg(long, value_enum, default_value_t = SideArg::Primal)]
    side: SideArg,
    /// Write the artifact here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    RandomCoherent,
    Tetrahedral,
    GenericQubit,
    Cfs,
    EvrPrimal,
    EvrDual,
    General,
    Discrimination,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Extremal,
    #[value(name = "closed_form")]
    ClosedForm,
}

impl From<ModeArg> for NormalizationMode {
    fn from(mode: ModeArg) -> Self {
        match mode {
            ModeArg::Extremal => NormalizationMode::Extremal,
            ModeArg::ClosedForm => NormalizationMode::ClosedForm,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SideArg {
    Primal,
    Dual,
}

impl From<SideArg> for ConstructionSide {
    fn from(side: SideArg) -> Self {
        match side {
            SideArg::Primal => ConstructionSide::Primal,
            SideArg::Dual => ConstructionSide::Dual,
        }
    }
}

#[derive(Args)]
struct VerifyArgs {
    /// POVM artifact to check.
    path: PathBuf,
    /// Pass/fail tolerance (default from MICPOVM_TOL_PROFILE).
    #[arg(long)]
    tolerance: Option<f64>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct DualArgs {
    /// POVM artifact whose duals are recomputed from its elements.
    path: PathBuf,
    /// Write the updated artifact here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
#[command(group = clap::ArgGroup::new("source").required(true).args(["state", "random_state"]))]
struct TomoArgs {
    /// POVM artifact used as the measurement.
    #[arg(long)]
    povm: PathBuf,
    /// Density-matrix JSON file to measure and reconstruct.
    #[arg(long)]
    state: Option<PathBuf>,
    /// Draw a random density matrix instead of reading one (requires --seed).
    #[arg(long, requires = "seed")]
    random_state: bool,
    /// Rank of the random state (defaults to full rank).
    #[arg(long, requires = "random_state")]
    rank: Option<usize>,
    /// Seed for the random state and for shot sampling.
    #[arg(long)]
    seed: Option<u64>,
    /// Sample this many measurement shots (requires --seed).
    #[arg(long, conflicts_with = "exact", requires = "seed")]
    shots: Option<u64>,
    /// Use exact outcome probabilities (the default when --shots is absent).
    #[arg(long)]
    exact: bool,
    /// Write the result here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct CheckIdentityArgs {
    /// Hilbert space dimension.
    #[arg(long, default_value_t = 2)]
    dim: usize,
    /// Number of Monte Carlo samples.
    #[arg(long, default_value_t = 100_000)]
    samples: usize,
    /// Sampling seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the result here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

/// A named failure destined for stderr as `Name: message`, exit code 2.
struct Failure {
    name: &'static str,
    message: String,
}

impl Failure {
    fn new(name: &'static str, message: impl Into<String>) -> Self {
        Failure {
            name,
            message: message.into(),
        }
    }
}

impl From<micpovm::PovmError> for Failure {
    fn from(e: micpovm::PovmError) -> Self {
        Failure::new(e.name(), e.to_string())
    }
}

impl From<micpovm::FrameError> for Failure {
    fn from(e: micpovm::FrameError) -> Self {
        Failure::new(e.name(), e.to_string())
    }
}

impl From<micpovm::TomoError> for Failure {
    fn from(e: micpovm::TomoError) -> Self {
        Failure::new(e.name(), e.to_string())
    }
}

impl From<micpovm::CoherentError> for Failure {
    fn from(e: micpovm::CoherentError) -> Self {
        Failure::new(e.name(), e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Generate(args) => cmd_generate(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Dual(args) => cmd_dual(args),
        Command::Tomo(args) => cmd_tomo(args),
        Command::CheckIdentity(args) => cmd_check_identity(args),
    };
    match result {
        Ok(code) => code,
        Err(failure) => {
            eprintln!("{}: {}", failure.name, failure.message);
            ExitCode::from(2)
        }
    }
}

fn read_text(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path)
        .map_err(|e| Failure::new("Io", format!("cannot read {}: {e}", path.display())))
}

fn parse_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = read_text(path)?;
    serde_json::from_str(&text)
        .map_err(|e| Failure::new("InvalidJson", format!("{}: {e}", path.display())))
}

fn write_artifact(output: Option<&Path>, text: &str) -> Result<(), Failure> {
    match output {
        Some(path) => fs::write(path, text)
            .map_err(|e| Failure::new("Io", format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Qubit-only preset guard; --dim beyond 2 is a usage error for these.
fn require_qubit(method: &str, dim: Option<usize>) -> Result<(), Failure> {
    let dim = dim.unwrap_or(2);
    if dim != 2 {
        return Err(Failure::new(
            "DimensionUnsupported",
            format!("method {method} requires dimension 2, got {dim}"),
        ));
    }
    Ok(())
}

fn require_dim(dim: Option<usize>) -> Result<usize, Failure> {
    let dim = dim.unwrap_or(2);
    if dim < 2 {
        return Err(Failure::new(
            "InvalidArguments",
            format!("--dim must be at least 2, got {dim}"),
        ));
    }
    Ok(dim)
}

/// Reads and validates an operator-set file; when --dim was given explicitly
/// it must match the operators in the file.
fn load_operator_set(
    input: Option<&Path>,
    method: &str,
    dim: Option<usize>,
) -> Result<OperatorSetFile, Failure> {
    let path = input.ok_or_else(|| {
        Failure::new(
            "InvalidArguments",
            format!("method {method} needs --input pointing at an operator-set JSON file"),
        )
    })?;
    let set: OperatorSetFile = parse_json(path)?;
    set.validate()
        .map_err(|reason| Failure::new("InvalidOperatorSet", format!("{}: {reason}", path.display())))?;
    if let Some(expected) = dim {
        if expected != set.dim {
            return Err(Failure::new(
                "InvalidArguments",
                format!("--dim {expected} does not match dimension {} of {}", set.dim, path.display()),
            ));
        }
    }
    Ok(set)
}

fn reject_weights(set: &OperatorSetFile, method: &str) -> Result<(), Failure> {
    if set.weights.is_some() {
        return Err(Failure::new(
            "InvalidArguments",
            format!("weights in the operator set are only used by cfs, not {method}"),
        ));
    }
    Ok(())
}

fn cmd_generate(args: GenerateArgs) -> Result<ExitCode, Failure> {
    let povm = match args.method {
        Method::Tetrahedral => {
            require_qubit("tetrahedral", args.dim)?;
            preset_tetrahedral()
        }
        Method::GenericQubit => {
            require_qubit("generic-qubit", args.dim)?;
            preset_generic_qubit(
                Direction::new(1.0, 0.0, 0.0).unwrap(),
                Direction::new(0.0, 1.0, 0.0).unwrap(),
                Direction::new(0.0, 0.0, 1.0).unwrap(),
            )?
        }
        Method::Discrimination => {
            require_qubit("discrimination", args.dim)?;
            preset_discrimination()
        }
        Method::RandomCoherent => {
            let dim = require_dim(args.dim)?;
            let seed = args.seed.ok_or_else(|| {
                Failure::new("InvalidArguments", "method random-coherent needs --seed")
            })?;
            let directions = sample_directions(dim * dim, seed)?;
            let projectors: Vec<HermitianOperator> = directions
                .iter()
                .map(|n| coherent_projector(n, dim))
                .collect();
            let frame = build_frame(projectors)?;
            let mut povm = evr_primal_construct(&frame)?;
            let meta = povm.meta_mut();
            meta.method = "random-coherent".into();
            meta.seed = Some(seed);
            meta.directions = Some(directions);
            povm
        }
        Method::Cfs => {
            let set = load_operator_set(args.input.as_deref(), "cfs", args.dim)?;
            cfs_construct(set.operators, set.weights)?
        }
        Method::EvrPrimal | Method::EvrDual => {
            let name = if args.method == Method::EvrPrimal {
                "evr-primal"
            } else {
                "evr-dual"
            };
            let set = load_operator_set(args.input.as_deref(), name, args.dim)?;
            reject_weights(&set, name)?;
            let frame = build_frame(set.operators)?;
            if args.method == Method::EvrPrimal {
                evr_primal_construct(&frame)?
            } else {
                evr_dual_construct(&frame)?
            }
        }
        Method::General => {
            let (operators, seed) = match (&args.input, args.seed) {
                (Some(_), Some(_)) => {
                    return Err(Failure::new(
                        "InvalidArguments",
                        "--input and --seed are mutually exclusive for general",
                    ))
                }
                (Some(path), None) => {
                    let set = load_operator_set(Some(path), "general", args.dim)?;
                    reject_weights(&set, "general")?;
                    (set.operators, None)
                }
                (None, Some(seed)) => {
                    let dim = require_dim(args.dim)?;
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    let operators: Vec<HermitianOperator> = (0..dim * dim)
                        .map(|_| random_hermitian(dim, &mut rng))
                        .collect();
                    (operators, Some(seed))
                }
                (None, None) => {
                    return Err(Failure::new(
                        "InvalidArguments",
                        "method general needs --input or --seed",
                    ))
                }
            };
            let mut povm = general_construct(operators, args.mode.into(), args.side.into())?;
            povm.meta_mut().seed = seed;
            povm
        }
    };
    write_artifact(args.output.as_deref(), &to_json_pretty(&povm))?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(args: VerifyArgs) -> Result<ExitCode, Failure> {
    let povm: Povm = parse_json(&args.path)?;
    let tolerance = args
        .tolerance
        .unwrap_or_else(|| ToleranceProfile::from_env().verify_tol());
    if !tolerance.is_finite() || tolerance <= 0.0 {
        return Err(Failure::new(
            "InvalidArguments",
            format!("--tolerance must be positive and finite, got {tolerance}"),
        ));
    }
    let report = verify(&povm, tolerance);
    write_artifact(args.output.as_deref(), &to_json_pretty(&report))?;
    if report.passes(tolerance) {
        Ok(ExitCode::SUCCESS)
    } else {
        Ok(ExitCode::from(1))
    }
}

fn cmd_dual(args: DualArgs) -> Result<ExitCode, Failure> {
    let mut povm: Povm = parse_json(&args.path)?;
    povm.attach_duals()?;
    write_artifact(args.output.as_deref(), &to_json_pretty(&povm))?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_tomo(args: TomoArgs) -> Result<ExitCode, Failure> {
    let povm: Povm = parse_json(&args.povm)?;
    let rho = match (&args.state, args.random_state) {
        (Some(path), false) => parse_json::<DensityMatrix>(path)?,
        (None, true) => {
            let seed = args.seed.expect("clap enforces --seed with --random-state");
            random_density(povm.dim(), args.rank, seed)?
        }
        _ => unreachable!("clap enforces exactly one of --state/--random-state"),
    };
    let mut result = run_tomography(&rho, &povm, args.shots, args.seed.unwrap_or(0))?;
    // An exact run on a randomly drawn state is still a randomized run, so
    // the artifact records the seed that drew the state.
    if args.random_state {
        result.seed = args.seed;
    }
    write_artifact(args.output.as_deref(), &to_json_pretty(&result))?;
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct IdentityCheck {
    dim: usize,
    samples: usize,
    seed: u64,
    residual: f64,
}

fn cmd_check_identity(args: CheckIdentityArgs) -> Result<ExitCode, Failure> {
    if args.dim < 2 {
        return Err(Failure::new(
            "InvalidArguments",
            format!("--dim must be at least 2, got {}", args.dim),
        ));
    }
    let residual = resolution_of_identity_mc(args.dim, args.samples, args.seed)?;
    let artifact = IdentityCheck {
        dim: args.dim,
        samples: args.samples,
        seed: args.seed,
        residual,
    };
    write_artifact(args.output.as_deref(), &to_json_pretty(&artifact))?;
    Ok(ExitCode::SUCCESS)
}

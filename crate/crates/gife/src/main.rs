use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gife::config::FamilySpec;
use gife::{cmd_check, cmd_evolve, cmd_generate, cmd_search, CliError, CliResult, Overrides, Report, ScenarioConfig};
use gife_core::families::pure_dephasing;
use gife_core::random::{random_hermitian, rng};

#[derive(Parser)]
#[command(name = "gife", version, about = "Detect interaction-free and generalized interaction-free evolutions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run IFE, GIFE and DFS checks on the configured states.
    Check(ScenarioArgs),
    /// Search eigenvector supports that give GIFE states.
    Search(ScenarioArgs),
    /// Check states and write trace-power and Schmidt trajectories as CSV.
    Evolve(ScenarioArgs),
    /// Emit a family Hamiltonian and its metadata as JSON.
    Generate(GenerateArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Args)]
struct ScenarioArgs {
    /// Scenario config (JSON, schema 1).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Hamiltonian JSON file, used instead of a config.
    #[arg(long, conflicts_with = "config")]
    hamiltonian: Option<PathBuf>,
    #[arg(long)]
    tmax: Option<f64>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    kmax: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Random coefficient draws per support.
    #[arg(long)]
    trials: Option<usize>,
    /// Output directory; receives report.json and, for evolve, the CSV files.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Args)]
struct GenerateArgs {
    #[command(subcommand)]
    family: GenerateFamily,
    /// Directory for hamiltonian.json and metadata.json; stdout otherwise.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum GenerateFamily {
    /// Two qubits with flip-flop coupling.
    TwoQubitXy {
        #[arg(long, default_value_t = 1.0)]
        omega_a: f64,
        #[arg(long, default_value_t = 0.7)]
        omega_b: f64,
        #[arg(long, default_value_t = 0.3)]
        gamma: f64,
    },
    /// Spins collectively coupled to truncated bosonic modes.
    SpinBoson {
        #[arg(long, default_value_t = 2)]
        spins: usize,
        #[arg(long, value_delimiter = ',', default_value = "1,1")]
        spin_frequencies: Vec<f64>,
        #[arg(long, value_delimiter = ',', default_value = "0.9")]
        mode_frequencies: Vec<f64>,
        #[arg(long, value_delimiter = ',', default_value = "0.2")]
        couplings: Vec<f64>,
        #[arg(long, default_value_t = 4)]
        fock_cutoff: usize,
    },
    /// Pure dephasing with seeded random environment operators.
    PureDephasing {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_value = "0.5,-0.5")]
        epsilon: Vec<f64>,
        #[arg(long, default_value_t = 3)]
        env_dim: usize,
        #[arg(long, default_value_t = 0.2)]
        coupling_scale: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Random projector family.
    Projector {
        #[arg(long, default_value_t = 4)]
        dim_a: usize,
        #[arg(long, default_value_t = 4)]
        dim_b: usize,
        #[arg(long, default_value_t = 2)]
        rank_a: usize,
        #[arg(long, default_value_t = 2)]
        rank_b: usize,
        #[arg(long)]
        commuting: bool,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
}

fn load_config(args: &ScenarioArgs) -> CliResult<(ScenarioConfig, Option<PathBuf>)> {
    let mut config = match (&args.config, &args.hamiltonian) {
        (Some(p), _) => (ScenarioConfig::load(p)?, p.parent().map(Path::to_path_buf)),
        (None, Some(h)) => (ScenarioConfig::from_hamiltonian_file(h.clone()), None),
        (None, None) => return Err(CliError::Input("either --config or --hamiltonian is required".into())),
    };
    config.0.apply(&Overrides {
        t_max: args.tmax,
        samples: args.samples,
        tol: args.tol,
        k_max: args.kmax,
        seed: args.seed,
        trials: args.trials,
    });
    Ok(config)
}

fn emit(report: &Report, args: &ScenarioArgs) -> CliResult<()> {
    if let Some(dir) = &args.out {
        std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
        let path = dir.join("report.json");
        std::fs::write(&path, report.to_json()).map_err(|e| CliError::io(&path, e))?;
    }
    match args.format {
        Format::Json => print!("{}", report.to_json()),
        Format::Text => print!("{}", report.to_text()),
    }
    Ok(())
}

fn scenario(args: &ScenarioArgs, run: impl FnOnce(&ScenarioConfig, Option<&Path>) -> CliResult<Report>) -> CliResult<bool> {
    let (config, base) = load_config(args)?;
    let report = run(&config, base.as_deref())?;
    emit(&report, args)?;
    Ok(report.passed)
}

fn generate(args: &GenerateArgs) -> CliResult<bool> {
    let instance = match &args.family {
        GenerateFamily::TwoQubitXy { omega_a, omega_b, gamma } => {
            FamilySpec::TwoQubitXy { omega_a: *omega_a, omega_b: *omega_b, gamma: *gamma }.build()?
        }
        GenerateFamily::SpinBoson { spins, spin_frequencies, mode_frequencies, couplings, fock_cutoff } => {
            FamilySpec::SpinBoson {
                spins: *spins,
                spin_frequencies: spin_frequencies.clone(),
                mode_frequencies: mode_frequencies.clone(),
                couplings: couplings.clone(),
                fock_cutoff: *fock_cutoff,
            }
            .build()?
        }
        GenerateFamily::PureDephasing { epsilon, env_dim, coupling_scale, seed } => {
            if *env_dim < 2 {
                return Err(CliError::Input(format!("environment dimension must be at least 2, got {env_dim}")));
            }
            let mut r = rng(*seed);
            let h_b = random_hermitian(&mut r, *env_dim);
            let b = epsilon.iter().map(|_| random_hermitian(&mut r, *env_dim).scale_real(*coupling_scale)).collect();
            pure_dephasing(epsilon, h_b, b)?
        }
        GenerateFamily::Projector { dim_a, dim_b, rank_a, rank_b, commuting, seed } => FamilySpec::Projector {
            dim_a: *dim_a,
            dim_b: *dim_b,
            rank_a: *rank_a,
            rank_b: *rank_b,
            commuting: *commuting,
            seed: *seed,
        }
        .build()?,
    };
    if let Some(text) = cmd_generate(&instance, args.out.as_deref())? {
        print!("{text}");
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Check(a) => scenario(a, cmd_check),
        Command::Search(a) => scenario(a, cmd_search),
        Command::Evolve(a) => match &a.out {
            Some(out) => {
                let out = out.clone();
                scenario(a, |c, b| cmd_evolve(c, b, &out))
            }
            None => Err(CliError::Input("evolve needs --out".into())),
        },
        Command::Generate(a) => generate(a),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(gife::EXIT_VERDICT_FAILURE as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(gife::EXIT_INPUT_ERROR as u8)
        }
    }
}

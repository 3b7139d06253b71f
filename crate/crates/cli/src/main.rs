use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use xidep::sim::{SimExample, SimSpec};
use xidep::KeyPrecision;
use xidep_cli::{
    error_report, read_dataset, run, CliError, Command, RunConfig, Simulation, DEFAULT_SEED,
};

/// Rank-based dependence measures on tabular data.
#[derive(Parser)]
#[command(name = "xidep", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// The xi coefficient of y on x.
    Xi(DataArgs),
    /// Test of independence between x and y.
    Xitest {
        #[command(flatten)]
        data: DataArgs,
        /// Use the continuous null variance 2/5; ties in y are then an error.
        #[arg(long)]
        assume_continuous: bool,
        /// Run a permutation test with this many shuffles instead.
        #[arg(long, value_name = "N")]
        permutations: Option<usize>,
    },
    /// Conditional dependence T_n of y on z given x (x optional).
    Condep(DataArgs),
    /// Forward feature selection for y over the x columns.
    Foci(DataArgs),
    /// Conditional xi of y on z given x.
    Condxi(DataArgs),
    /// Built-in Monte Carlo studies.
    Simulate(SimArgs),
}

#[derive(Args)]
struct SeedArgs {
    /// Root seed for all tie-breaking and simulation randomness.
    #[arg(long, default_value_t = DEFAULT_SEED, conflicts_with = "random_seed")]
    seed: u64,
    /// Draw the seed from OS entropy; the report records it.
    #[arg(long)]
    random_seed: bool,
    /// Binary digits kept for the integer part of encoded coordinates.
    #[arg(long = "enc-int-bits", value_name = "K", default_value_t = xidep::encode::DEFAULT_INT_BITS)]
    int_bits: u32,
    /// Binary digits kept for the fractional part of encoded coordinates.
    #[arg(long = "enc-frac-bits", value_name = "L", default_value_t = xidep::encode::DEFAULT_FRAC_BITS)]
    frac_bits: u32,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

impl SeedArgs {
    fn seed(&self) -> (u64, &'static str) {
        if self.random_seed {
            (rand::random(), "entropy")
        } else if self.seed == DEFAULT_SEED {
            (self.seed, "default")
        } else {
            (self.seed, "argument")
        }
    }

    fn precision(&self) -> KeyPrecision {
        KeyPrecision {
            int_bits: self.int_bits,
            frac_bits: self.frac_bits,
        }
    }
}

#[derive(Args)]
struct DataArgs {
    /// Delimited text file with a header row; `-` reads standard input.
    input: PathBuf,
    #[arg(long, default_value_t = ',')]
    delimiter: char,
    /// Columns: names, `#i` positions, `a..b` ranges, comma separated.
    #[arg(long)]
    x: Option<String>,
    #[arg(long)]
    y: Option<String>,
    #[arg(long)]
    z: Option<String>,
    #[command(flatten)]
    common: SeedArgs,
}

#[derive(Args)]
struct SimArgs {
    #[arg(long, value_enum)]
    example: Example,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 1000)]
    replications: usize,
    /// Noise level for noisy-sphere.
    #[arg(long, default_value_t = 0.0)]
    sigma: f64,
    /// Also write histogram bins of every statistic to this CSV file.
    #[arg(long, value_name = "PATH")]
    histogram: Option<PathBuf>,
    #[arg(long, default_value_t = 30)]
    bins: usize,
    #[command(flatten)]
    common: SeedArgs,
}

#[derive(Clone, Copy, ValueEnum)]
enum Example {
    Sphere,
    NoisySphere,
    Joint,
    Null,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

fn dataset_command(
    command: Command,
    args: DataArgs,
    assume_continuous: bool,
    permutations: Option<usize>,
) -> Result<String, CliError> {
    let delimiter = u8::try_from(args.delimiter)
        .map_err(|_| CliError::Usage("the delimiter must be a single ASCII character".into()))?;
    let data = read_dataset(&args.input, delimiter)?;
    let (seed, seed_source) = args.common.seed();
    let config = RunConfig {
        command,
        x: args.x,
        y: args.y,
        z: args.z,
        seed,
        seed_source,
        assume_continuous,
        permutations,
        precision: args.common.precision(),
    };
    let report = run(&config, &data)?;
    Ok(match args.common.format {
        Format::Json => report.to_json(),
        Format::Csv => report.results_csv(),
    })
}

fn simulate(args: SimArgs) -> Result<String, CliError> {
    let example = match args.example {
        Example::Sphere => SimExample::Sphere,
        Example::NoisySphere => SimExample::NoisySphere,
        Example::Joint => SimExample::JointDependence,
        Example::Null => SimExample::NullContinuous,
    };
    let (seed, seed_source) = args.common.seed();
    let mut spec = SimSpec::new(example, args.n, args.replications, seed).with_sigma(args.sigma);
    spec.precision = args.common.precision();
    let (sim, summary) = Simulation::run(&spec, args.bins, seed_source)?;
    if let Some(path) = &args.histogram {
        std::fs::write(path, sim.histogram_csv()?).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        })?;
    }
    Ok(match args.common.format {
        Format::Json => summary.to_json(),
        Format::Csv => sim.report.to_csv(),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (name, outcome) = match cli.command {
        Cmd::Xi(a) => ("xi", dataset_command(Command::Xi, a, false, None)),
        Cmd::Xitest {
            data,
            assume_continuous,
            permutations,
        } => (
            "xitest",
            dataset_command(Command::XiTest, data, assume_continuous, permutations),
        ),
        Cmd::Condep(a) => ("condep", dataset_command(Command::Condep, a, false, None)),
        Cmd::Foci(a) => ("foci", dataset_command(Command::Foci, a, false, None)),
        Cmd::Condxi(a) => ("condxi", dataset_command(Command::CondXi, a, false, None)),
        Cmd::Simulate(a) => ("simulate", simulate(a)),
    };
    match outcome {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            print!("{}", error_report(name, &e));
            ExitCode::FAILURE
        }
    }
}

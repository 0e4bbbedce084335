use clap::{Parser, Subcommand, ValueEnum};
use qsr_cli::commands::{self, GenOutcome};
use qsr_cli::format::{load_instance, Diagnostic, DEFAULT_MAX_UNIVERSE};
use qsr_cli::report::{OutputFormat, Report};
use qsr_core::gen::InstanceStyle;
use qsr_core::Instance;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

/// Exit codes: 0 for PASS or FOUND, 1 for FAIL or an exhausted search,
/// 2 for usage or input errors, 3 for SKIPPED or INCONCLUSIVE.
#[derive(Parser)]
#[command(
    name = "qsr",
    version,
    about = "Exact verification workbench for set classes, premeasures, and their outer-measure extensions"
)]
struct Cli {
    /// Report format.
    #[arg(long, global = true, value_enum, default_value = "text")]
    format: OutputFormat,
    /// Largest universe an input file may declare.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_UNIVERSE)]
    max_universe: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum StyleArg {
    /// Laminar partition forests (always semi-rings).
    Semiring,
    /// Partition blocks plus random unions (quasi-semi-rings).
    Venn,
    /// Uniformly random classes filtered by the quasi-semi-ring test.
    Rejection,
}

impl From<StyleArg> for InstanceStyle {
    fn from(s: StyleArg) -> InstanceStyle {
        match s {
            StyleArg::Semiring => InstanceStyle::SemiRing,
            StyleArg::Venn => InstanceStyle::Venn,
            StyleArg::Rejection => InstanceStyle::Rejection,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Classify the class: quasi-semi-ring, semi-ring, ring, algebra.
    #[command(name = "check-structure")]
    CheckStructure {
        #[arg(short, long)]
        input: PathBuf,
    },
    /// Check that the measure is zero on the empty set and additive over
    /// every member partition.
    #[command(name = "validate-premeasure")]
    ValidatePremeasure {
        #[arg(short, long)]
        input: PathBuf,
    },
    /// Induced outer measure of one subset.
    #[command(name = "outer-measure")]
    OuterMeasure {
        #[arg(short, long)]
        input: PathBuf,
        /// Subset to evaluate, as a canonical key like "a,c"; "" is the
        /// empty set.
        #[arg(long, default_value = "")]
        set: String,
    },
    /// Splitting-condition measurability of the class members, or of
    /// every subset with --all.
    #[command(name = "measurable")]
    Measurable {
        #[arg(short, long)]
        input: PathBuf,
        /// Sweep the whole power set instead of just the class.
        #[arg(long)]
        all: bool,
    },
    /// Check that the outer measure extends the premeasure: every member
    /// measurable, every value preserved.
    #[command(name = "verify-extension")]
    VerifyExtension {
        #[arg(short, long)]
        input: PathBuf,
    },
    /// Check that restricting covers to disjoint families changes no
    /// outer measure value.
    #[command(name = "verify-prop1")]
    VerifyProp1 {
        #[arg(short, long)]
        input: PathBuf,
    },
    /// List the ring generated by the class.
    #[command(name = "generate-ring")]
    GenerateRing {
        #[arg(short, long)]
        input: PathBuf,
    },
    /// Check that two premeasures agreeing on the class agree on its
    /// generated ring.
    #[command(name = "verify-uniqueness")]
    VerifyUniqueness {
        #[arg(short, long)]
        input: PathBuf,
        /// Second instance file: same universe and class, its own
        /// measure.
        #[arg(long)]
        second: PathBuf,
    },
    /// The sigma-finite uniqueness check on the generated sigma-algebra.
    #[command(name = "verify-sigma-uniqueness")]
    VerifySigmaUniqueness {
        #[arg(short, long)]
        input: PathBuf,
        /// Second instance file: same universe and class, its own
        /// measure.
        #[arg(long)]
        second: PathBuf,
    },
    /// Search for two measures that extend the instance yet differ
    /// outside its generated ring.
    #[command(name = "search-counterexample")]
    SearchCounterexample {
        #[arg(short, long)]
        input: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Trials before giving up.
        #[arg(long, default_value_t = 10_000)]
        budget: u64,
    },
    /// Arc decompositions on the circle: the wraparound example plus a
    /// randomized sweep.
    #[command(name = "arcs-demo")]
    ArcsDemo {
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
    /// Rectangle decompositions in the plane: the square-overlap example
    /// plus a randomized sweep.
    #[command(name = "rects-demo")]
    RectsDemo {
        #[arg(long, default_value_t = 9)]
        seed: u64,
    },
    /// Generate a random instance file on stdout, deterministically from
    /// the seed.
    #[command(name = "gen")]
    Gen {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Universe size.
        #[arg(long, default_value_t = 5)]
        n: usize,
        #[arg(long, value_enum, default_value = "semiring")]
        style: StyleArg,
    },
}

enum Output {
    Report(Report),
    Raw(String),
}

fn load(path: &Path, max_universe: usize) -> Result<Instance, Vec<Diagnostic>> {
    load_instance(path, max_universe)
}

fn one(result: Result<Report, Diagnostic>) -> Result<Output, Vec<Diagnostic>> {
    result.map(Output::Report).map_err(|d| vec![d])
}

fn run(cli: Cli) -> Result<Output, Vec<Diagnostic>> {
    let max = cli.max_universe;
    match cli.command {
        Command::CheckStructure { input } => Ok(Output::Report(commands::check_structure(&load(
            &input, max,
        )?))),
        Command::ValidatePremeasure { input } => Ok(Output::Report(commands::validate_premeasure(
            &load(&input, max)?,
        ))),
        Command::OuterMeasure { input, set } => {
            one(commands::outer_measure(&load(&input, max)?, &set))
        }
        Command::Measurable { input, all } => one(commands::measurable(&load(&input, max)?, all)),
        Command::VerifyExtension { input } => one(commands::verify_extension(&load(&input, max)?)),
        Command::VerifyProp1 { input } => one(commands::verify_prop1(&load(&input, max)?)),
        Command::GenerateRing { input } => Ok(Output::Report(commands::generate_ring_cmd(&load(
            &input, max,
        )?))),
        Command::VerifyUniqueness { input, second } => {
            let first = load(&input, max)?;
            let second = load(&second, max)?;
            one(commands::verify_uniqueness(&first, &second))
        }
        Command::VerifySigmaUniqueness { input, second } => {
            let first = load(&input, max)?;
            let second = load(&second, max)?;
            one(commands::verify_sigma(&first, &second))
        }
        Command::SearchCounterexample {
            input,
            seed,
            budget,
        } => Ok(Output::Report(commands::search_counterexample(
            &load(&input, max)?,
            seed,
            budget,
        ))),
        Command::ArcsDemo { seed } => Ok(Output::Report(commands::arcs_demo(seed))),
        Command::RectsDemo { seed } => Ok(Output::Report(commands::rects_demo(seed))),
        Command::Gen { seed, n, style } => match commands::gen(seed, n, style.into()) {
            Ok(GenOutcome::Instance(text)) => Ok(Output::Raw(text)),
            Ok(GenOutcome::Report(report)) => Ok(Output::Report(report)),
            Err(d) => Err(vec![d]),
        },
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = cli.format;
    let started = Instant::now();
    match run(cli) {
        Ok(Output::Raw(text)) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Ok(Output::Report(mut report)) => {
            report.elapsed_ms = started.elapsed().as_millis() as u64;
            print!("{}", report.render(format));
            ExitCode::from(report.exit_code())
        }
        Err(diagnostics) => {
            for d in &diagnostics {
                match format {
                    OutputFormat::Text => eprintln!("{d}"),
                    OutputFormat::Records => eprintln!(
                        "{}",
                        serde_json::to_string(d).expect("diagnostics always serialise")
                    ),
                }
            }
            ExitCode::from(2)
        }
    }
}

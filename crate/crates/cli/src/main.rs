use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod report;
mod summary;
mod table;

use report::Failure;

#[derive(Parser)]
#[command(name = "beauville", version, about = "Decide and verify Beauville structures on finite p-groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Default)]
pub struct Overrides {
    /// RNG seed for sampling and randomized search.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Largest group order swept exhaustively.
    #[arg(long)]
    pub threshold: Option<u64>,
    /// Random pairs of pairs tried by the randomized search.
    #[arg(long)]
    pub budget: Option<u64>,
}

#[derive(Args, Clone, Default)]
pub struct Tagging {
    /// Acceptance criterion the checks of this run belong to.
    #[arg(long)]
    pub criterion: Option<u32>,
    /// Expected verdict; recorded as a check.
    #[arg(long, value_enum)]
    pub expect: Option<Expect>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Expect {
    Yes,
    No,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BeauvilleMode {
    Search,
    Verify,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    All,
    Product,
    Powers,
    Commutators,
    ClosedForm,
    AllElements,
    OrderP,
}

#[derive(Subcommand)]
enum Command {
    /// Realize a group and report its power structure, criteria and verdict.
    Analyze {
        #[arg(long)]
        spec: PathBuf,
        #[command(flatten)]
        overrides: Overrides,
        #[command(flatten)]
        tagging: Tagging,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Search for a Beauville structure, or verify a given one.
    Beauville {
        #[arg(value_enum)]
        mode: BeauvilleMode,
        #[arg(long)]
        spec: PathBuf,
        /// JSON file `{"pair1": [x, y], "pair2": [x, y]}` of element expressions.
        #[arg(long)]
        witness: Option<PathBuf>,
        #[command(flatten)]
        overrides: Overrides,
        #[command(flatten)]
        tagging: Tagging,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Computed against predicted verdicts for the quotients `N/N_k`.
    NottinghamTable {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        k_max: u32,
        #[arg(long, default_value_t = 3)]
        k_min: u32,
        /// Skip the diamond rows.
        #[arg(long)]
        no_diamonds: bool,
        #[command(flatten)]
        overrides: Overrides,
        #[arg(long)]
        criterion: Option<u32>,
        /// Write the JSON report here; the aligned table goes to standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Property suites for the power and commutator formulas in the Nottingham group.
    FormulasCheck {
        #[arg(long, value_delimiter = ',', default_value = "3,5")]
        primes: Vec<u32>,
        /// Largest truncation used by the filtration suites.
        #[arg(long, default_value_t = 15)]
        depth: usize,
        /// Largest filtration index `k`, `l` in the power and commutator suites.
        #[arg(long, default_value_t = 8)]
        max_k: usize,
        /// Largest `m` for the closed-form and congruence suites.
        #[arg(long, default_value_t = 2)]
        m_max: u32,
        #[arg(long, value_enum, default_value = "all")]
        suite: Suite,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Compose in the opposite order; the suites must fail.
        #[arg(long)]
        mirrored: bool,
        #[arg(long)]
        criterion: Option<u32>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Merge the reports of a run directory into one acceptance document.
    Report {
        #[arg(long)]
        dir: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Analyze { spec, overrides, tagging, out } => {
            report::analyze(&spec, &overrides, &tagging, out.as_deref())
        }
        Command::Beauville { mode, spec, witness, overrides, tagging, out } => match mode {
            BeauvilleMode::Search => report::search(&spec, &overrides, &tagging, out.as_deref()),
            BeauvilleMode::Verify => match witness {
                Some(w) => report::verify(&spec, &w, &overrides, &tagging, out.as_deref()),
                None => Err(Failure::Input("verify needs --witness".into())),
            },
        },
        Command::NottinghamTable { p, k_min, k_max, no_diamonds, overrides, criterion, out } => {
            table::run(p, k_min, k_max, !no_diamonds, &overrides, criterion, out.as_deref())
        }
        Command::FormulasCheck { primes, depth, max_k, m_max, suite, samples, seed, mirrored, criterion, out } => {
            report::formulas(&primes, depth, max_k, m_max, suite, samples, seed, mirrored, criterion, out.as_deref())
        }
        Command::Report { dir, out } => summary::run(&dir, out.as_deref()),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(f) => {
            eprintln!("beauville: {f}");
            ExitCode::from(f.code())
        }
    }
}

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Json,
}

/// Decides cochain-map obstructions for Lie group actions given by
/// infinitesimal generators.
#[derive(Debug, Parser)]
#[command(name = "liecochain", version, about)]
pub struct Cli {
    /// Workspace file; `-` reads standard input.
    #[arg(long, short, global = true, default_value = "-")]
    pub input: String,
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    pub format: Format,
    /// Repeat for more detail in the text report.
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,
    /// Report `timing_ms` as null so output is byte-stable.
    #[arg(long, global = true)]
    pub no_timing: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Jacobi identity, generator homomorphism, orbit rank and effectiveness.
    Validate {
        #[arg(long)]
        action: Option<String>,
    },
    /// Relative Lie algebra cohomology H^r(g, K).
    Cohomology {
        #[arg(long)]
        algebra: String,
        #[arg(long)]
        subgroup: Option<String>,
        #[arg(long)]
        degree: usize,
    },
    /// Isotropy algebra and fixed tangent and vertical spaces at a point.
    Isotropy {
        #[arg(long)]
        action: String,
        #[arg(long)]
        point: String,
    },
    /// Chart-level identities for a chain and its companions.
    #[command(subcommand)]
    Check(CheckCommand),
    /// Evaluation of a form on a vertical chain.
    Rho {
        #[arg(long)]
        action: String,
        #[arg(long)]
        chain: String,
        #[arg(long)]
        form: String,
    },
    /// Certificates of surjectivity.
    #[command(subcommand)]
    Certify(CertifyCommand),
    /// Cohomological obstruction at sample points.
    Report {
        #[arg(long)]
        action: String,
        /// Sample points; defaults to every point on the action's chart.
        #[arg(long, num_args = 1..)]
        points: Vec<String>,
        /// Disconnected isotropy, as POINT=SUBGROUP pairs.
        #[arg(long, num_args = 1..)]
        components: Vec<String>,
    },
    /// Every check directive in the workspace, in order.
    Run,
}

#[derive(Debug, Clone, Args)]
pub struct ObjectArgs {
    #[arg(long)]
    pub action: String,
    #[arg(long)]
    pub object: String,
}

#[derive(Debug, Clone, Subcommand)]
pub enum CheckCommand {
    /// Whether a form, field or chain is killed by every generator's Lie derivative
    Invariant(ObjectArgs),
    /// Whether a chain is a nonvanishing multiple of a wedge of generators
    Vertical(ObjectArgs),
    /// Whether a form vanishes on the generators of the action
    Semibasic(ObjectArgs),
    /// Invariance, verticality, coupling identity, Lie derivative factors
    /// and integrability for a chain.
    Cochain {
        #[arg(long)]
        action: String,
        #[arg(long)]
        chain: String,
        #[arg(long, num_args = 1..)]
        forms: Vec<String>,
        #[arg(long, num_args = 1..)]
        fields: Vec<String>,
    },
    /// The factor λ with L_R χ = λ χ, and whether λ is invariant
    Lambda {
        #[arg(long)]
        action: String,
        #[arg(long)]
        chain: String,
        #[arg(long)]
        field: String,
    },
    /// Pairwise integrability residuals for fields acting on a chain
    Integrability {
        #[arg(long)]
        action: String,
        #[arg(long)]
        chain: String,
        #[arg(long, num_args = 1..)]
        fields: Vec<String>,
    },
    /// Verifies that a scalar factor turns a chain into one whose Lie
    /// derivatives vanish.
    Rescale {
        #[arg(long)]
        action: String,
        #[arg(long)]
        chain: String,
        #[arg(long)]
        factor: String,
        #[arg(long, num_args = 1..)]
        fields: Vec<String>,
    },
}

#[derive(Debug, Clone, Subcommand)]
pub enum CertifyCommand {
    Surjective {
        #[arg(long)]
        action: String,
        #[arg(long)]
        chain: String,
        #[arg(long)]
        form: String,
    },
}

/// A fully parsed invocation.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub input: Option<PathBuf>,
    pub command: Command,
    pub format: Format,
    pub verbosity: u8,
    pub timing: bool,
    /// ANSI styling of the text report; decided by the caller.
    pub color: bool,
}

impl From<Cli> for RunConfig {
    fn from(cli: Cli) -> Self {
        RunConfig {
            input: (cli.input != "-").then(|| PathBuf::from(cli.input)),
            command: cli.command,
            format: cli.format,
            verbosity: cli.verbose,
            timing: !cli.no_timing,
            color: false,
        }
    }
}

impl Command {
    /// Name recorded in the JSON report.
    pub fn label(&self) -> String {
        match self {
            Command::Validate { .. } => "validate".into(),
            Command::Cohomology { .. } => "cohomology".into(),
            Command::Isotropy { .. } => "isotropy".into(),
            Command::Check(c) => format!(
                "check {}",
                match c {
                    CheckCommand::Invariant(_) => "invariant",
                    CheckCommand::Vertical(_) => "vertical",
                    CheckCommand::Semibasic(_) => "semibasic",
                    CheckCommand::Cochain { .. } => "cochain",
                    CheckCommand::Lambda { .. } => "lambda",
                    CheckCommand::Integrability { .. } => "integrability",
                    CheckCommand::Rescale { .. } => "rescale",
                }
            ),
            Command::Rho { .. } => "rho".into(),
            Command::Certify(CertifyCommand::Surjective { .. }) => "certify surjective".into(),
            Command::Report { .. } => "report".into(),
            Command::Run => "run".into(),
        }
    }
}

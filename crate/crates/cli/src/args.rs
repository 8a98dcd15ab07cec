use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "geomodal", version, about = "Geometric modal logic over finite topological coalgebras")]
pub struct Cli {
    /// Report format on standard output.
    #[arg(long, value_enum, global = true, default_value_t = Output::Json)]
    pub output: Output,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Output {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Truth set of a formula in a model.
    Check(CheckArgs),
    /// Modal and behavioural equivalence of two states.
    Equiv(EquivArgs),
    /// Bisimulations between two models.
    Bisim(BisimArgs),
    /// Lift a set functor with predicate liftings to finite spaces.
    Lift(LiftArgs),
    /// Emit the presentation of the monotone frame over a frame.
    Present(PresentArgs),
    /// The space of points of a presentation.
    Points(PointsArgs),
    /// Frame of opens of a space, or space of points of a frame.
    Dualize(DualizeArgs),
    /// Check a derivation step by step.
    Proofcheck(ProofcheckArgs),
    /// Exhaustive soundness sweep of an axiom system.
    Soundness(SoundnessArgs),
    /// Quotient of models by modal equivalence.
    Quotient(QuotientArgs),
    /// Run the acceptance suite.
    Accept(AcceptArgs),
}

#[derive(Args, Debug)]
pub struct SigArgs {
    /// Comma-separated lifting ids; all builtin liftings of the functor by default.
    #[arg(long, value_delimiter = ',')]
    pub liftings: Option<Vec<String>>,
}

#[derive(Args, Debug)]
pub struct FormulaArgs {
    #[arg(long, conflicts_with = "formula_file", required_unless_present = "formula_file")]
    pub formula: Option<String>,
    #[arg(long)]
    pub formula_file: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct CheckArgs {
    #[arg(long)]
    pub model: PathBuf,
    #[command(flatten)]
    pub formula: FormulaArgs,
    /// Report whether this point satisfies the formula.
    #[arg(long)]
    pub point: Option<String>,
    #[command(flatten)]
    pub sig: SigArgs,
}

#[derive(Args, Debug)]
pub struct EquivArgs {
    #[arg(long)]
    pub left: PathBuf,
    /// Defaults to the left model.
    #[arg(long)]
    pub right: Option<PathBuf>,
    #[arg(long)]
    pub x: String,
    #[arg(long)]
    pub y: String,
    #[command(flatten)]
    pub sig: SigArgs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BisimKind {
    Lambda,
    Am,
    Compare,
}

#[derive(Args, Debug)]
pub struct BisimArgs {
    #[arg(long)]
    pub left: PathBuf,
    /// Defaults to the left model.
    #[arg(long)]
    pub right: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = BisimKind::Lambda)]
    pub kind: BisimKind,
    /// A relation `{"pairs": [["x", "y"], ...]}` to check instead of the greatest one.
    #[arg(long)]
    pub relation: Option<PathBuf>,
    /// Required by `--kind compare`, which samples sub-relations.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, default_value_t = 3)]
    pub samples: usize,
    #[command(flatten)]
    pub sig: SigArgs,
}

#[derive(Args, Debug)]
pub struct LiftArgs {
    /// `powerset` or `monotone`.
    #[arg(long)]
    pub base: String,
    #[arg(long, value_delimiter = ',', default_value = "box,dia")]
    pub liftings: Vec<String>,
    #[arg(long)]
    pub space: PathBuf,
    /// Builtin functor to compare the lifted carrier with, such as `vietoris`.
    #[arg(long)]
    pub compare: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum System {
    #[value(name = "M")]
    M,
    #[value(name = "Mprime")]
    Mprime,
}

#[derive(Args, Debug)]
pub struct PresentArgs {
    #[arg(long)]
    pub frame: PathBuf,
    #[arg(long, value_enum, default_value_t = System::M)]
    pub system: System,
    /// Include the directed-join relations.
    #[arg(long)]
    pub directed: bool,
}

#[derive(Args, Debug)]
pub struct PointsArgs {
    /// Read from standard input when absent.
    #[arg(long)]
    pub presentation: Option<PathBuf>,
    #[arg(long)]
    pub max_generators: Option<usize>,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
pub struct DualizeArgs {
    #[arg(long)]
    pub space: Option<PathBuf>,
    #[arg(long)]
    pub frame: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ProofcheckArgs {
    #[arg(long)]
    pub derivation: PathBuf,
}

#[derive(Args, Debug)]
pub struct SoundnessArgs {
    /// `monotone` or `positive-vietoris`.
    #[arg(long)]
    pub system: String,
    #[arg(long)]
    pub functor: String,
    #[arg(long)]
    pub max_points: Option<usize>,
    #[arg(long)]
    pub max_family: Option<usize>,
}

#[derive(Args, Debug)]
pub struct QuotientArgs {
    /// One or more models over the same functor.
    #[arg(long, required = true)]
    pub model: Vec<PathBuf>,
    #[command(flatten)]
    pub sig: SigArgs,
}

#[derive(Args, Debug)]
pub struct AcceptArgs {
    /// `all` or a comma-separated list of criterion numbers.
    #[arg(long, default_value = "all")]
    pub suite: String,
    #[arg(long)]
    pub max_points: Option<usize>,
    #[arg(long)]
    pub seed: u64,
}

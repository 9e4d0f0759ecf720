use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::failure::EXIT_CODES_HELP;
use crate::output::Format;

#[derive(Parser, Debug)]
#[command(
    name = "minionlab",
    version,
    about = "Experiments and oracles for p-biased analysis, threshold representations and Boolean PCSPs",
    after_help = EXIT_CODES_HELP,
)]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

/// Flags shared by every verb. Verbs ignore flags they do not use.
#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Bias `p ∈ (0,1)` [default: 0.5]
    #[arg(long, global = true)]
    pub p: Option<f64>,
    /// Arity for built-in functions, enumeration and slices
    #[arg(long, global = true)]
    pub arity: Option<usize>,
    /// Polynomial degree `k`, or edges per left vertex for `labelcover gen`
    #[arg(long, global = true)]
    pub degree: Option<usize>,
    /// Monte-Carlo trials or samples
    #[arg(long, global = true)]
    pub trials: Option<usize>,
    /// Seed for every random choice
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads [default: all cores]
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Output file [default: stdout]
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// LP separation margin [default: 1e-6]
    #[arg(long, global = true)]
    pub margin: Option<f64>,
    /// Heavy-set level `ε`
    #[arg(long, global = true)]
    pub epsilon: Option<f64>,
    /// Thresholds, comma separated
    #[arg(long, global = true, value_delimiter = ',')]
    pub tau: Vec<f64>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// p-biased Fourier expansion, influences and noise
    #[command(subcommand)]
    Fourier(FourierCmd),
    /// Exact, sampled and integral Shapley values of a monotone function
    Shapley(ShapleyArgs),
    /// The pull-back measure of random 2-to-1 minors
    #[command(subcommand)]
    Pullback(PullbackCmd),
    /// Polynomial threshold representations
    #[command(subcommand)]
    Ptf(PtfCmd),
    /// Polymorphisms, choice conditions and PCSP instances
    #[command(subcommand)]
    Pcsp(PcspCmd),
    /// Label Cover generation and evaluation
    #[command(subcommand)]
    Labelcover(LabelCoverCmd),
}

#[derive(Args, Debug, Clone)]
pub struct FnArg {
    /// Function: record file or built-in (maj:N, parity:N, and:N, or:N, dict:N:I, thr:N:T,
    /// const:N:B, tribes:W:C, hex:N:HEX, majxor:K)
    #[arg(long = "fn", value_name = "FN")]
    pub function: String,
}

#[derive(Subcommand, Debug)]
pub enum FourierCmd {
    /// Every coefficient: mask,size,coefficient
    Expand(FnArg),
    /// Influence of each coordinate by definition, spectrum and flip probability
    Influence(FnArg),
    /// Noise sensitivity, spectral and sampled
    Noise {
        #[command(flatten)]
        f: FnArg,
        /// Resampling probability
        #[arg(long, default_value_t = 0.1)]
        delta: f64,
    },
}

#[derive(Args, Debug)]
pub struct ShapleyArgs {
    #[command(flatten)]
    pub f: FnArg,
    /// Gauss-Legendre nodes for the influence integral
    #[arg(long, default_value_t = 64)]
    pub points: usize,
}

#[derive(Subcommand, Debug)]
pub enum PullbackCmd {
    /// Mass of every point of `{0,1}^{2m}` against the product measure
    Mass {
        #[arg(long)]
        m: usize,
    },
    /// Density ratio audit for 1..=m, or the gluing inequality for --fn
    Audit {
        #[arg(long)]
        m: Option<usize>,
        #[arg(long = "fn", value_name = "FN")]
        function: Option<String>,
    },
    /// Influence preservation under random 2-to-1 minors
    Preserve {
        #[command(flatten)]
        f: FnArg,
        /// Source coordinate
        #[arg(long, default_value_t = 0)]
        coordinate: usize,
        /// Average over every 2-to-1 map instead of sampling
        #[arg(long)]
        exhaustive: bool,
        /// Also write the `tau,probability` table here
        #[arg(long)]
        exceedance_out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    General,
    Positive,
}

#[derive(Subcommand, Debug)]
pub enum PtfCmd {
    /// Find a degree-k representation
    Represent {
        #[command(flatten)]
        f: FnArg,
        #[arg(long, value_enum, default_value_t = ModeArg::Positive)]
        mode: ModeArg,
        /// Use exact rational arithmetic
        #[arg(long)]
        exact: bool,
        /// Also write the representation in its native format
        #[arg(long)]
        rep_out: Option<PathBuf>,
    },
    /// Smallest achievable max weight over positive degree-k representations
    Minmaxweight(FnArg),
    /// Run the iterative heavy-set procedure at level --epsilon
    Heavyset(FnArg),
    /// Concentration of induced coefficients under random minors
    Mcdiarmid {
        /// Representation file [default: the uniform linear form on --arity coordinates]
        #[arg(long)]
        rep: Option<PathBuf>,
        /// Target arity
        #[arg(long)]
        m: usize,
        /// Enumerate all maps instead of sampling
        #[arg(long)]
        exhaustive: bool,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum VariantArg {
    Single,
    Multiple,
    Layered,
    Random,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum PolicyArg {
    Strict,
    Within,
}

#[derive(Subcommand, Debug)]
pub enum PcspCmd {
    /// Enumerate Pol(A, B) at --arity (memoised under $MINIONLAB_CACHE)
    Enum {
        /// Template file or built-in name
        #[arg(long)]
        template: String,
    },
    /// Verify a choice table on a slice of the Boolean minion
    CheckChoice {
        /// projections:N, ptf:K:N or a file of function records
        #[arg(long)]
        slice: String,
        /// Choice table file, `projection`, `heavy` (uses --degree, --epsilon) or `search`
        #[arg(long, default_value = "projection")]
        choice: String,
        #[arg(long, value_enum, default_value_t = VariantArg::Single)]
        variant: VariantArg,
        /// Bound M [default: the table's]
        #[arg(long)]
        bound: Option<usize>,
        #[arg(long, value_enum, default_value_t = PolicyArg::Strict)]
        policy: PolicyArg,
        /// Also write the choice table here
        #[arg(long)]
        table_out: Option<PathBuf>,
    },
    /// Decide an instance against a template: YES if it maps to A, NO if it does not map to B
    Solve {
        #[arg(long)]
        template: String,
        /// Instance structure file
        #[arg(long, conflicts_with = "cnf", required_unless_present = "cnf")]
        instance: Option<PathBuf>,
        /// DIMACS 3-CNF file, encoded over the 3-SAT signature
        #[arg(long)]
        cnf: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum LcVariantArg {
    Plain,
    Unique,
    TwoToOne,
    Rich,
}

#[derive(Subcommand, Debug)]
pub enum LabelCoverCmd {
    /// Generate an instance in the native format
    Gen {
        #[arg(long, value_enum, default_value_t = LcVariantArg::Plain)]
        variant: LcVariantArg,
        #[arg(long)]
        left: usize,
        #[arg(long)]
        right: usize,
        /// Left alphabet size (derived for unique and 2-to-1 variants)
        #[arg(long, default_value_t = 0)]
        sigma_l: usize,
        #[arg(long)]
        sigma_r: usize,
        /// Plant a satisfying labeling
        #[arg(long)]
        planted: bool,
    },
    /// Brute-force optimum, gap verdict and unique propagation
    Eval {
        #[arg(long)]
        instance: PathBuf,
        /// Completeness threshold
        #[arg(long, default_value_t = 1.0)]
        completeness: f64,
        /// Soundness threshold
        #[arg(long, default_value_t = 0.5)]
        soundness: f64,
    },
    /// Chi-square test of the constraint distribution around a left vertex
    Rich {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, default_value_t = 0)]
        vertex: usize,
        /// Significance level at which uniformity is rejected
        #[arg(long, default_value_t = 1e-3)]
        significance: f64,
    },
}

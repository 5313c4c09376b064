//! Command-line surface.

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "hdnet",
    about = "Higher-order digital nets: generation, quality verification, \
             worst-case error sweeps and explicit error bounds",
    version
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build generating matrices and write them (and optionally the points)
    Gen(GenArgs),
    /// Verify net quality: exact t-value, minimum Dick metric, t bound
    Verify(VerifyArgs),
    /// Sweep m, estimate the RMS worst-case error and fit the decay rate
    Converge(ConvergeArgs),
    /// Integrate catalog functions over shifted nets and track the error
    Integrate(IntegrateArgs),
    /// Evaluate the RMS worst-case error bound without touching points
    Bound(BoundArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Args, Debug)]
pub struct GenArgs {
    /// Generator: faure, sobol, or file:PATH
    #[arg(long, default_value = "sobol")]
    pub generator: String,
    /// Prime base (sobol is base 2 only)
    #[arg(long, default_value_t = 2)]
    pub b: u8,
    /// Number of matrices the generator builds (before interlacing)
    #[arg(long, default_value_t = 1)]
    pub s: usize,
    /// Matrix size m (the net has b^m points); not needed with file:
    #[arg(long)]
    pub m: Option<usize>,
    /// Digit-interlacing factor: folds s source matrices into s/factor
    /// matrices with factor*m rows each
    #[arg(long, default_value_t = 1)]
    pub interlace: usize,
    /// Where to write the matrix file (stdout when omitted)
    #[arg(long)]
    pub out: Option<std::path::PathBuf>,
    /// Also write the generated points, one per line, decimal coordinates
    #[arg(long)]
    pub points_out: Option<std::path::PathBuf>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Generator: faure, sobol, or file:PATH
    #[arg(long)]
    pub generator: String,
    #[arg(long, default_value_t = 2)]
    pub b: u8,
    /// Number of matrices the generator builds (before interlacing)
    #[arg(long, default_value_t = 1)]
    pub s: usize,
    /// Matrix size m; not needed with file:
    #[arg(long)]
    pub m: Option<usize>,
    /// Digit-interlacing factor applied after generation
    #[arg(long, default_value_t = 1)]
    pub interlace: usize,
    /// Order to verify (defaults to the interlacing factor)
    #[arg(long)]
    pub alpha: Option<u32>,
    /// mu_1 budget for the dual-net search (defaults to the digit depth)
    #[arg(long)]
    pub dual_budget: Option<u64>,
}

#[derive(Args, Debug)]
pub struct ConvergeArgs {
    /// Generator for the order-1 source: faure or sobol
    #[arg(long, default_value = "sobol")]
    pub generator: String,
    #[arg(long, default_value_t = 2)]
    pub b: u8,
    /// Smoothness of the integrand space
    #[arg(long, default_value_t = 2)]
    pub alpha: u32,
    /// Net order for the error bound; enables the bound column and
    /// defaults the interlacing factor
    #[arg(long)]
    pub beta: Option<u32>,
    /// Dimension of the integration domain
    #[arg(long, default_value_t = 1)]
    pub s: usize,
    #[arg(long)]
    pub m_min: usize,
    #[arg(long)]
    pub m_max: usize,
    /// Number of random digital shifts per m
    #[arg(long = "R", default_value_t = 16)]
    pub r: u32,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Digit-interlacing factor (defaults to beta, or 1 without beta)
    #[arg(long)]
    pub interlace: Option<usize>,
    /// Weights: "product:g1,g2,..." or "explicit:@file.json"; default
    /// product weights 1
    #[arg(long)]
    pub gamma: Option<String>,
    #[arg(long)]
    pub out: Option<std::path::PathBuf>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    pub format: OutputFormat,
    /// Use the literal sin(tau/b) reading of the C_tau constants
    #[arg(long, default_value_t = false)]
    pub ctau_literal: bool,
    /// First m included in the rate fit (default: m_min + 1, the smallest
    /// m is preasymptotic)
    #[arg(long)]
    pub fit_from: Option<usize>,
}

#[derive(Args, Debug)]
pub struct IntegrateArgs {
    /// Integrand id; see `--integrand help` for the catalog
    #[arg(long)]
    pub integrand: String,
    #[arg(long, default_value = "sobol")]
    pub generator: String,
    #[arg(long, default_value_t = 2)]
    pub b: u8,
    /// Dimension of the integration domain
    #[arg(long, default_value_t = 1)]
    pub s: usize,
    #[arg(long)]
    pub m_min: usize,
    #[arg(long)]
    pub m_max: usize,
    #[arg(long = "R", default_value_t = 16)]
    pub r: u32,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Digit-interlacing factor
    #[arg(long, default_value_t = 1)]
    pub interlace: usize,
    #[arg(long)]
    pub out: Option<std::path::PathBuf>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    pub format: OutputFormat,
    #[arg(long)]
    pub fit_from: Option<usize>,
}

#[derive(Args, Debug)]
pub struct BoundArgs {
    /// Generator for the order-1 source (fixes t through the interlaced
    /// t bound): faure or sobol
    #[arg(long, default_value = "sobol")]
    pub generator: String,
    #[arg(long, default_value_t = 2)]
    pub b: u8,
    #[arg(long, default_value_t = 2)]
    pub alpha: u32,
    #[arg(long)]
    pub beta: u32,
    #[arg(long, default_value_t = 1)]
    pub s: usize,
    #[arg(long)]
    pub m_min: usize,
    #[arg(long)]
    pub m_max: usize,
    /// Digit-interlacing factor (defaults to beta)
    #[arg(long)]
    pub interlace: Option<usize>,
    #[arg(long)]
    pub gamma: Option<String>,
    #[arg(long)]
    pub out: Option<std::path::PathBuf>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    pub format: OutputFormat,
    #[arg(long, default_value_t = false)]
    pub ctau_literal: bool,
}

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "plap",
    version,
    about = "Bounds, eigensolver and certificates for the first p-Laplacian eigenvalue"
)]
#[command(args_override_self = true)]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = OutputFormat::Json, global = true)]
    pub output: OutputFormat,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// JSON file whose keys mirror the command's flags; flags given on the
    /// command line take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate a closed-form bound.
    Bound(BoundArgs),
    /// Solve for the first eigenvalue on one domain.
    Solve(SolveArgs),
    /// Solve over a list of radii.
    Sweep(SweepArgs),
    /// Compare solver eigenvalues with the hyperbolic-ball lower and upper bounds.
    Sandwich(SandwichArgs),
    /// Check a test function or sub-solution certificate.
    #[command(subcommand)]
    Verify(VerifyCommand),
    /// Fit λ(R) ≈ A + B/R² (+ C/R³) and compare with the predicted coefficients.
    Asymptotics(AsymptoticsArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BoundTag {
    T11,
    T22,
    T12,
    C13,
    C31,
    C23,
    C23Root,
    L42,
    T14,
    Ex52,
    Ex53,
    P15,
    Cheeger,
}

#[derive(Debug, Args)]
pub struct BoundArgs {
    #[arg(value_enum)]
    pub tag: BoundTag,
    #[arg(long)]
    pub n: Option<u32>,
    #[arg(long)]
    pub k: Option<f64>,
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long = "R")]
    pub radius: Option<f64>,
    #[arg(long)]
    pub kappa: Option<f64>,
    #[arg(long)]
    pub p1: Option<f64>,
    #[arg(long)]
    pub p2: Option<f64>,
    #[arg(long = "C")]
    pub c: Option<f64>,
    #[arg(long = "D")]
    pub d: Option<f64>,
    #[arg(long)]
    pub a: Option<f64>,
    #[arg(long)]
    pub b: Option<f64>,
    #[arg(long)]
    pub q: Option<f64>,
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long, default_value_t = plap_core::testfn::DEFAULT_QUAD_POINTS)]
    pub quad_points: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GeometryName {
    Hyperbolic,
    Euclidean,
    Interval,
    ExpCylinder,
    CoshCylinder,
}

#[derive(Debug, Clone, Args)]
pub struct GeometryArgs {
    #[arg(long, value_enum, default_value_t = GeometryName::Hyperbolic)]
    pub geometry: GeometryName,
    /// Dimension of the ball or of the cylinder cross-section.
    #[arg(long, default_value_t = 2)]
    pub n: u32,
    /// Curvature scale of the hyperbolic ball.
    #[arg(long, default_value_t = 1.0)]
    pub kappa: f64,
}

#[derive(Debug, Clone, Args)]
pub struct SolverArgs {
    #[arg(long)]
    pub p: f64,
    /// Number of grid cells.
    #[arg(long, default_value_t = plap_core::solver::DEFAULT_GRID)]
    pub grid: usize,
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    #[arg(long, default_value_t = plap_core::solver::MAX_ITERATIONS)]
    pub max_iterations: usize,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub geometry: GeometryArgs,
    #[command(flatten)]
    pub solver: SolverArgs,
    /// Radius, length or half-length of the domain.
    #[arg(long = "R")]
    pub radius: f64,
    /// Write the eigenfunction as CSV with columns `r,u`.
    #[arg(long)]
    pub dump_profile: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub geometry: GeometryArgs,
    #[command(flatten)]
    pub solver: SolverArgs,
    /// Comma-separated, strictly increasing radii.
    #[arg(long = "R", value_delimiter = ',', required = true)]
    pub radii: Vec<f64>,
}

#[derive(Debug, Args)]
pub struct SandwichArgs {
    #[arg(long, default_value_t = 2)]
    pub n: u32,
    #[arg(long)]
    pub p: f64,
    /// Comma-separated, strictly increasing radii; may be empty.
    #[arg(long = "R", value_delimiter = ',', num_args = 0..)]
    pub radii: Vec<f64>,
    #[arg(long, default_value_t = plap_core::solver::DEFAULT_GRID)]
    pub grid: usize,
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    #[arg(long, default_value_t = plap_core::testfn::DEFAULT_QUAD_POINTS)]
    pub quad_points: usize,
    /// Allowed shortfall below the lower bound.
    #[arg(long, default_value_t = 1e-6)]
    pub lower_tol: f64,
    /// Allowed excess over the upper bound, in multiples of the grid spacing.
    #[arg(long, default_value_t = 10.0)]
    pub upper_tol_cells: f64,
}

#[derive(Debug, Subcommand)]
pub enum VerifyCommand {
    /// Pointwise certificate of the logarithmic sub-solution.
    Eq31(Eq31Args),
    /// Barta's criterion for a profile written by `solve --dump-profile`.
    Barta(BartaArgs),
    /// Quadrature bounds for the hyperbolic-ball test function.
    HyperbolicQuotient(QuotientArgs),
    /// Rayleigh quotient of a cylinder test function.
    Cylinder(CylinderArgs),
}

#[derive(Debug, Args)]
pub struct Eq31Args {
    #[arg(long)]
    pub p: f64,
    #[arg(long)]
    pub k: f64,
    #[arg(long = "R")]
    pub radius: f64,
    #[arg(long, default_value_t = plap_core::testfn::DEFAULT_EPS)]
    pub eps: f64,
    #[arg(long, default_value_t = plap_core::testfn::DEFAULT_GRID)]
    pub grid: usize,
}

#[derive(Debug, Args)]
pub struct BartaArgs {
    #[arg(long)]
    pub profile: PathBuf,
    #[arg(long)]
    pub mu: f64,
    #[arg(long, default_value_t = 2.0)]
    pub p: f64,
    #[arg(long, value_enum, default_value_t = GeometryName::Interval)]
    pub geometry: GeometryName,
    #[arg(long, default_value_t = 2)]
    pub n: u32,
    #[arg(long, default_value_t = 1.0)]
    pub kappa: f64,
}

#[derive(Debug, Args)]
pub struct QuotientArgs {
    #[arg(long, default_value_t = 2)]
    pub n: u32,
    #[arg(long)]
    pub p: f64,
    #[arg(long = "R")]
    pub radius: f64,
    #[arg(long, default_value_t = plap_core::testfn::DEFAULT_QUAD_POINTS)]
    pub quad_points: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CylinderName {
    Exp,
    Cosh,
}

#[derive(Debug, Args)]
pub struct CylinderArgs {
    #[arg(long, value_enum)]
    pub kind: CylinderName,
    #[command(flatten)]
    pub quotient: QuotientArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelName {
    Ab,
    Abc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SourceName {
    T14Lower,
    T14Upper,
    Ex52,
    Ex53,
    C31Lower,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Quantity {
    /// Solver eigenvalues.
    Solver,
    /// Rayleigh quotient of the explicit upper-bound test function.
    Upper,
}

#[derive(Debug, Args)]
pub struct AsymptoticsArgs {
    #[command(flatten)]
    pub geometry: GeometryArgs,
    #[arg(long, default_value_t = 2.0)]
    pub p: f64,
    #[arg(long, value_enum, default_value_t = Quantity::Solver)]
    pub quantity: Quantity,
    #[arg(long, default_value_t = plap_core::asymptotics::DEFAULT_WINDOW.0)]
    pub r_min: f64,
    #[arg(long, default_value_t = plap_core::asymptotics::DEFAULT_WINDOW.1)]
    pub r_max: f64,
    /// Number of equally spaced radii in `[r-min, r-max]`.
    #[arg(long, default_value_t = 6)]
    pub count: usize,
    /// Explicit comma-separated radii; overrides the window.
    #[arg(long = "R", value_delimiter = ',')]
    pub radii: Vec<f64>,
    /// Read `(R, λ)` samples from a two-column CSV instead of computing them.
    #[arg(long)]
    pub from_csv: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = ModelName::Abc)]
    pub model: ModelName,
    /// Expansions to compare against; defaults depend on the geometry (none
    /// for `--from-csv`).
    #[arg(long, value_enum, value_delimiter = ',')]
    pub source: Vec<SourceName>,
    #[arg(long, default_value_t = plap_core::solver::DEFAULT_GRID)]
    pub grid: usize,
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    #[arg(long, default_value_t = plap_core::testfn::DEFAULT_QUAD_POINTS)]
    pub quad_points: usize,
}

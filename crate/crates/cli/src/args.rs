use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "coneminq", version, about = "Dual curvature measures and L_p dual Minkowski problems in pointed cones")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve for a C-polytope with a prescribed (p,q)-th dual curvature measure.
    Solve(SolveArgs),
    /// Print the (p,q)-th dual curvature measure of a polytope as CSV.
    Measure(MeasureArgs),
    /// Dual volume (q ≠ 0) or dual entropy (q = 0) of a polytope.
    Volume(VolumeArgs),
    /// Compare the measure of a polytope with a measure file.
    Verify(VerifyArgs),
    /// Planar Monge–Ampère residual of a sampled support function.
    Residual(ResidualArgs),
    /// Write the truncated boundary: OBJ mesh in 3D, CSV polyline in 2D.
    Export(ExportArgs),
    /// Re-run the command recorded in a manifest.
    Replay(ReplayArgs),
}

#[derive(Debug, Clone, Args)]
pub struct GridArgs {
    /// Quadrature resolution.
    #[arg(long = "grid", default_value_t = 1024)]
    pub grid: usize,
    /// Seed for randomized quadrature.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Args)]
pub struct Exponents {
    #[arg(short = 'p', allow_negative_numbers = true)]
    pub p: f64,
    #[arg(short = 'q', allow_negative_numbers = true)]
    pub q: f64,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[arg(long)]
    pub measure: PathBuf,
    #[arg(long)]
    pub cone: PathBuf,
    #[command(flatten)]
    pub exponents: Exponents,
    #[command(flatten)]
    pub grid: GridArgs,
    /// Relative tolerance on the achieved measure.
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    /// Minimum angle between target atoms and the boundary of the domain.
    #[arg(long, default_value_t = 1e-6)]
    pub tau: f64,
    #[arg(long = "max-iter", default_value_t = 1000)]
    pub max_iter: usize,
    #[arg(short = 'o', long = "out")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct MeasureArgs {
    #[arg(long)]
    pub polytope: PathBuf,
    #[command(flatten)]
    pub exponents: Exponents,
    #[command(flatten)]
    pub grid: GridArgs,
    /// Integrate over the facets instead of the sphere.
    #[arg(long)]
    pub boundary: bool,
    /// Also write the measure as JSON.
    #[arg(short = 'o', long = "out")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VolumeArgs {
    #[arg(long)]
    pub polytope: PathBuf,
    #[arg(short = 'q', allow_negative_numbers = true)]
    pub q: f64,
    #[command(flatten)]
    pub grid: GridArgs,
    #[arg(short = 'o', long = "out")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub polytope: PathBuf,
    #[arg(long)]
    pub measure: PathBuf,
    #[command(flatten)]
    pub exponents: Exponents,
    #[command(flatten)]
    pub grid: GridArgs,
    /// Largest accepted relative atom error.
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    #[arg(short = 'o', long = "out")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ResidualArgs {
    /// CSV with columns phi,h.
    #[arg(long)]
    pub support: PathBuf,
    /// CSV with columns phi,f on the same angles.
    #[arg(long)]
    pub density: PathBuf,
    #[command(flatten)]
    pub exponents: Exponents,
    /// Planar cone; when given, the samples must lie inside its polar arc.
    #[arg(long)]
    pub cone: Option<PathBuf>,
    /// Fail with exit code 4 when the max residual exceeds this.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Per-sample residuals as CSV.
    #[arg(short = 'o', long = "out")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ExportArgs {
    #[arg(long)]
    pub polytope: PathBuf,
    /// Truncation height along the reference direction of the cone.
    #[arg(short = 't', allow_negative_numbers = true)]
    pub t: f64,
    #[arg(short = 'o', long = "out")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct ReplayArgs {
    pub manifest: PathBuf,
    /// Write the output here instead of the recorded path.
    #[arg(short = 'o', long = "out")]
    pub out: Option<PathBuf>,
}

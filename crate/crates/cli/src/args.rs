use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;

#[derive(Parser)]
#[command(name = "w2eit", version, about = "Quadratic Wasserstein distance on the circle and W2-based EIT")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// W2 distance between two periodic densities stored as CSV columns.
    W2(W2Args),
    /// Finite-difference checks of the transport potential or EIT gradient.
    Gradcheck(GradcheckArgs),
    /// Writes the polar disk mesh as CSV files.
    Mesh(MeshArgs),
    /// Synthesizes boundary data for a phantom on a refined mesh.
    Synth(SynthArgs),
    /// Runs the Barzilai-Borwein reconstruction.
    Invert(InvertArgs),
    /// Scans the misfit over candidate inclusion centres.
    Landscape(LandscapeArgs),
    /// Times the W2 solver over grid sizes.
    Bench(BenchArgs),
}

#[derive(Args)]
pub struct W2Args {
    #[arg(long)]
    pub f: PathBuf,
    #[arg(long)]
    pub g: PathBuf,
    #[arg(long, default_value_t = 1e-12)]
    pub eps: f64,
    #[arg(long)]
    pub json_out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum GradTarget {
    Potential,
    Eit,
}

#[derive(Args)]
pub struct GradcheckArgs {
    #[arg(long, value_enum, default_value = "potential")]
    pub target: GradTarget,
    /// Grid size for the potential check.
    #[arg(long, default_value_t = 4096)]
    pub n: usize,
    #[arg(long, default_value_t = 20)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Misfit for the EIT check.
    #[arg(long, default_value = "w2")]
    pub misfit: String,
    #[arg(long)]
    pub csv_out: Option<PathBuf>,
}

#[derive(Args)]
pub struct MeshArgs {
    #[arg(long, default_value_t = w2eit::fem_disk::DEFAULT_REFINEMENT)]
    pub refinement: u32,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args)]
pub struct SynthArgs {
    /// Phantom preset: constant, disk, ellipse, chest, offcentre.
    #[arg(long, default_value = "disk")]
    pub phantom: String,
    #[arg(long, default_value_t = w2eit::fem_disk::DEFAULT_REFINEMENT)]
    pub refinement: u32,
    #[arg(long, default_value_t = 5)]
    pub n_cur: usize,
    #[arg(long, default_value_t = 0.0)]
    pub eps: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args)]
pub struct InvertArgs {
    /// Flat key = value file; defaults are used for missing keys.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Truth as `preset:NAME` or a nodal CSV on the data mesh.
    #[arg(long, conflicts_with = "data", required_unless_present = "data")]
    pub truth: Option<String>,
    /// Directory written by `synth`.
    #[arg(long)]
    pub data: Option<PathBuf>,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub misfit: Option<String>,
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Args)]
pub struct LandscapeArgs {
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, default_value_t = 0.0)]
    pub eps: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Radius of the slice written separately.
    #[arg(long, default_value_t = 0.5)]
    pub slice_radius: f64,
    /// Angles of the slice.
    #[arg(long, default_value_t = 64)]
    pub slice_angles: usize,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args)]
pub struct BenchArgs {
    /// Comma-separated grid sizes in ascending order.
    #[arg(long, value_delimiter = ',', num_args = 0..)]
    pub sizes: Vec<usize>,
    #[arg(long, default_value_t = 5)]
    pub repeats: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub csv_out: Option<PathBuf>,
}

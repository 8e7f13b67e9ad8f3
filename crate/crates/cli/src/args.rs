use std::path::PathBuf;

use active_sites::retrieval::{Combine, StrategyKind};
use active_sites::training::GeometryKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(
    name = "active-sites",
    version,
    about = "B-matrix associative memory with active-site retrieval"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Train on a pattern file and write weights, site map, positions and manifest.
    Train(TrainArgs),
    /// Recall a pattern from trained artifacts by clamping sites.
    Retrieve(RetrieveArgs),
    /// Run a seeded Monte-Carlo sweep over network sizes and strategies.
    Experiment(ExperimentArgs),
    /// Report classical vs active-site retrieval sweep costs.
    Complexity(ComplexityArgs),
    /// Render neuron positions and active sites as an SVG scatter plot.
    Sitemap(SitemapArgs),
    /// Re-run the command recorded in a manifest.
    Replay(ReplayArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Train(_) => "train",
            Command::Retrieve(_) => "retrieve",
            Command::Experiment(_) => "experiment",
            Command::Complexity(_) => "complexity",
            Command::Sitemap(_) => "sitemap",
            Command::Replay(_) => "replay",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GeometryArg {
    Line,
    Grid2d,
    Uniform2d,
    Uniform3d,
}

impl From<GeometryArg> for GeometryKind {
    fn from(g: GeometryArg) -> Self {
        match g {
            GeometryArg::Line => GeometryKind::Line,
            GeometryArg::Grid2d => GeometryKind::Grid2d,
            GeometryArg::Uniform2d => GeometryKind::Uniform2d,
            GeometryArg::Uniform3d => GeometryKind::Uniform3d,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum StrategyArg {
    Classical,
    Arbitrary,
    Averaged,
    Independent,
}

impl From<StrategyArg> for StrategyKind {
    fn from(s: StrategyArg) -> Self {
        match s {
            StrategyArg::Classical => StrategyKind::Classical,
            StrategyArg::Arbitrary => StrategyKind::Arbitrary,
            StrategyArg::Averaged => StrategyKind::Averaged,
            StrategyArg::Independent => StrategyKind::Independent,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CombineArg {
    Potentials,
    Votes,
}

impl From<CombineArg> for Combine {
    fn from(c: CombineArg) -> Self {
        match c {
            CombineArg::Potentials => Combine::Potentials,
            CombineArg::Votes => Combine::Votes,
        }
    }
}

#[derive(Debug, Args, Serialize)]
pub struct TrainArgs {
    /// Pattern file: one memory per line, '1' for +1 and '0' for -1.
    #[arg(long)]
    pub memories: PathBuf,
    #[arg(long, value_enum, default_value = "uniform2d")]
    pub geometry: GeometryArg,
    /// Seed for the uniform geometries.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Active sites kept per memory.
    #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u64).range(1..))]
    pub r: u64,
    /// Output directory for the artifacts.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args, Serialize)]
pub struct RetrieveArgs {
    /// Directory written by `train`.
    #[arg(long)]
    pub trained: PathBuf,
    /// Clamped neuron indices, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    pub sites: Vec<usize>,
    /// Clamp values (1 or 0), comma separated, one per site.
    #[arg(long, value_delimiter = ',', required = true)]
    pub values: Vec<String>,
    #[arg(long, value_enum, default_value = "classical")]
    pub strategy: StrategyArg,
    /// Seed for the arbitrary strategy.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// How the independent strategy merges per-site runs.
    #[arg(long, value_enum, default_value = "potentials")]
    pub combine: CombineArg,
    /// Optional CSV output file.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct ExperimentArgs {
    /// Network sizes, comma separated.
    #[arg(long = "n-list", value_delimiter = ',', required = true)]
    pub n_list: Vec<usize>,
    /// Trained memory counts, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "8")]
    pub m: Vec<usize>,
    #[arg(long, default_value_t = 4)]
    pub r: usize,
    #[arg(long, default_value_t = 250)]
    pub trials: usize,
    #[arg(
        long,
        value_enum,
        value_delimiter = ',',
        default_value = "arbitrary,averaged,independent"
    )]
    pub strategies: Vec<StrategyArg>,
    #[arg(long, value_enum, default_value = "uniform2d")]
    pub geometry: GeometryArg,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value = "potentials")]
    pub combine: CombineArg,
    /// Experiment CSV output; per-trial data and the manifest are written next to it.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct ComplexityArgs {
    /// Network size.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub n: u64,
    /// Fragment size.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub r: u64,
    /// Optional CSV output file.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct SitemapArgs {
    /// Directory written by `train`.
    #[arg(long)]
    pub trained: PathBuf,
    /// SVG output file.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args, Serialize)]
pub struct ReplayArgs {
    /// Manifest written by an earlier run.
    #[arg(long)]
    pub manifest: PathBuf,
}

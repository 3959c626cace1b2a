//! `echotopo`: simulate or ingest CSAS collections, build signature and
//! phase spaces, and quantify their structure with PCA, Vietoris-Rips
//! persistence, and flare/loop feature reports.
//!
//! Logs go to stderr, data to files. Exit codes: 0 success, 2 validation,
//! 3 data-format error, 4 resource cap.

mod commands;
mod manifest;

use clap::{Args, Parser, Subcommand};
use echotopo_core::Error as CoreError;
use std::path::PathBuf;

#[derive(Parser)]
#[command(
    name = "echotopo",
    version,
    about = "Topology of CSAS echo spaces: simulation, embedding, PCA, persistence",
    after_help = "Set RAYON_NUM_THREADS to bound internal parallelism."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate a point-scatterer collection and write it as .csas
    Simulate(SimulateArgs),
    /// Build the angle-lagged phase-space point cloud of a collection
    Embed(EmbedArgs),
    /// Fit and apply a PCA projection to a point cloud
    Pca(PcaArgs),
    /// Compute the H0/H1 Vietoris-Rips persistence diagram of a point cloud
    Persist(PersistArgs),
    /// Report noise floor, excursions, critical angles, and flare/loop classes
    Analyze(AnalyzeArgs),
    /// Run embed, PCA, persistence, and analysis for both the signature and
    /// phase spaces of a collection
    Pipeline(PipelineArgs),
}

#[derive(Args)]
struct SimulateArgs {
    /// Target description file: one "radius,angle_deg,reflectivity" per line
    #[arg(long, conflicts_with = "seven_scatterer")]
    target: Option<PathBuf>,
    /// Use the built-in seven-scatterer target (two groups on one circle)
    #[arg(long)]
    seven_scatterer: bool,
    /// Rotation of the five-scatterer group, degrees
    #[arg(long, default_value_t = 20.0)]
    group_offset: f64,
    /// Number of look angles; must divide 360° into whole millidegrees
    #[arg(long, default_value_t = 360)]
    angles: usize,
    /// Number of range samples per profile
    #[arg(long, default_value_t = 1000)]
    range: usize,
    /// Sensor standoff from the turntable centre, metres
    #[arg(long, default_value_t = 10.0)]
    standoff: f64,
    /// Range window "min,max" in metres mapped onto the range samples
    #[arg(long, value_parser = parse_window, default_value = "9,11")]
    window: (f64, f64),
    /// Carrier frequency, cycles per metre of range
    #[arg(long, default_value_t = 2.0)]
    freq: f64,
    /// Gaussian pulse envelope standard deviation, metres
    #[arg(long, default_value_t = 0.05)]
    pulse_width: f64,
    /// Complex noise standard deviation per sample component
    #[arg(long, default_value_t = 0.0)]
    noise_sigma: f64,
    /// Noise seed
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output collection (.csas binary, anything else as text)
    #[arg(short, long)]
    output: PathBuf,
}

#[derive(Args)]
struct EmbedArgs {
    /// Angle lags in degrees, comma separated
    #[arg(long, value_delimiter = ',', default_value = "0,4,25")]
    lags: Vec<f64>,
    /// Input collection
    #[arg(short, long)]
    input: PathBuf,
    /// Treat text input columns as real samples instead of re,im pairs
    #[arg(long)]
    text_real: bool,
    /// Output point cloud (angle_deg,c1,...)
    #[arg(short, long)]
    output: PathBuf,
}

#[derive(Args)]
struct PcaArgs {
    /// Number of principal components
    #[arg(short = 'k', long = "components", default_value_t = 3)]
    k: usize,
    /// Input point cloud
    #[arg(short, long)]
    input: PathBuf,
    /// Output projected cloud (angle_deg,c1,...,ck)
    #[arg(short, long)]
    output: PathBuf,
    /// Optional scatter plot of the first two components
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Args)]
struct PersistArgs {
    /// Input point cloud
    #[arg(short, long)]
    input: PathBuf,
    /// Truncation radius: a number, "auto" (2x the largest consecutive point
    /// gap), or "inf"
    #[arg(long, default_value = "inf")]
    max_radius: String,
    /// Refuse clouds with more points than this
    #[arg(long, default_value_t = echotopo_core::persistence::DEFAULT_MAX_POINTS)]
    max_points: usize,
    /// Output diagram (dim,birth,death,censored)
    #[arg(short, long)]
    output: PathBuf,
    /// Optional birth/death scatter plot
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Args, Clone, Copy)]
struct FeatureFlags {
    /// Quantile of per-angle norms used as the noise level
    #[arg(long, default_value_t = 0.5)]
    quantile: f64,
    /// Excursion threshold as a multiple of the noise level
    #[arg(long, default_value_t = 3.0)]
    factor: f64,
    /// Samples per side of the peak for the symmetry score
    #[arg(long, default_value_t = 5)]
    half_window: usize,
    /// Symmetry score at or above which an excursion is a flare
    #[arg(long, default_value_t = 0.9)]
    symmetry_threshold: f64,
    /// Speed cutoff for critical angles, fraction of the maximum speed
    #[arg(long, default_value_t = 0.25)]
    critical_tol: f64,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Input collection
    #[arg(short, long)]
    input: PathBuf,
    /// Treat text input columns as real samples instead of re,im pairs
    #[arg(long)]
    text_real: bool,
    #[command(flatten)]
    features: FeatureFlags,
    /// Output report; a sibling .csv with one row per excursion is written too
    #[arg(short, long)]
    output: PathBuf,
}

#[derive(Args)]
struct PipelineArgs {
    /// Input collection
    #[arg(short, long)]
    input: PathBuf,
    /// Treat text input columns as real samples instead of re,im pairs
    #[arg(long)]
    text_real: bool,
    /// Angle lags in degrees for the phase space, comma separated
    #[arg(long, value_delimiter = ',', default_value = "0,4,25")]
    lags: Vec<f64>,
    /// Number of principal components
    #[arg(short = 'k', long = "components", default_value_t = 3)]
    k: usize,
    /// Truncation radius: a number, "auto", or "inf"
    #[arg(long, default_value = "auto")]
    max_radius: String,
    /// Refuse clouds with more points than this
    #[arg(long, default_value_t = echotopo_core::persistence::DEFAULT_MAX_POINTS)]
    max_points: usize,
    #[command(flatten)]
    features: FeatureFlags,
    /// Output directory
    #[arg(short, long)]
    output: PathBuf,
}

fn parse_window(s: &str) -> Result<(f64, f64), String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 2 {
        return Err("expected min,max".to_string());
    }
    let min: f64 = parts[0].trim().parse().map_err(|_| "bad minimum".to_string())?;
    let max: f64 = parts[1].trim().parse().map_err(|_| "bad maximum".to_string())?;
    Ok((min, max))
}

fn exit_code_for(error: &anyhow::Error) -> i32 {
    match error.downcast_ref::<CoreError>() {
        Some(CoreError::MatrixTooLarge { .. }) => 4,
        Some(
            CoreError::BadMagic { .. }
            | CoreError::VersionUnsupported { .. }
            | CoreError::TruncatedPayload { .. }
            | CoreError::InconsistentHeader { .. }
            | CoreError::BadTextRow { .. }
            | CoreError::Io { .. },
        ) => 3,
        Some(_) => 2,
        None => 2,
    }
}

fn main() {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Simulate(args) => commands::simulate(args),
        Command::Embed(args) => commands::embed(args),
        Command::Pca(args) => commands::pca(args),
        Command::Persist(args) => commands::persist(args),
        Command::Analyze(args) => commands::analyze(args),
        Command::Pipeline(args) => commands::pipeline(args),
    };
    if let Err(error) = result {
        eprintln!("error: {error:#}");
        std::process::exit(exit_code_for(&error));
    }
}

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde_json::json;

use echotopo_core::embed::LagSet;
use echotopo_core::features::FeatureParams;
use echotopo_core::io::{self, svg, TextLayout};
use echotopo_core::persistence::{rips_persistence, DistanceMatrix, RipsParams};
use echotopo_core::simulate::{self, SimConfig};
use echotopo_core::{euclidean, Collection, LookAngle, PcaModel, PointCloud};

use crate::manifest::RunManifest;
use crate::{AnalyzeArgs, EmbedArgs, FeatureFlags, PcaArgs, PersistArgs, PipelineArgs, SimulateArgs};

fn read_collection(path: &Path, text_real: bool) -> Result<Collection> {
    let collection = if text_real {
        io::read_collection_text(path, TextLayout::Real)?
    } else {
        io::read_collection(path)?
    };
    eprintln!(
        "read {}: {} angles x {} range samples",
        path.display(),
        collection.n_angles(),
        collection.n_range()
    );
    Ok(collection)
}

impl FeatureFlags {
    fn to_params(self) -> FeatureParams {
        FeatureParams {
            noise_quantile: self.quantile,
            factor: self.factor,
            half_window: self.half_window,
            symmetry_threshold: self.symmetry_threshold,
            critical_tol: self.critical_tol,
        }
    }

    fn to_json(self) -> serde_json::Value {
        json!({
            "quantile": self.quantile,
            "factor": self.factor,
            "half_window": self.half_window,
            "symmetry_threshold": self.symmetry_threshold,
            "critical_tol": self.critical_tol,
        })
    }
}

pub fn simulate(args: SimulateArgs) -> Result<()> {
    let (target, target_desc) = if args.seven_scatterer {
        let target = simulate::seven_scatterer_target(LookAngle::new(args.group_offset))?;
        (target, json!({"seven_scatterer": true, "group_offset": args.group_offset}))
    } else {
        let path = args
            .target
            .as_ref()
            .context("either --target FILE or --seven-scatterer is required")?;
        let target = simulate::ScattererTarget::read(path)?;
        (target, json!({"target_file": path.display().to_string()}))
    };
    let config = SimConfig {
        n_angles: args.angles,
        n_range: args.range,
        standoff: args.standoff,
        range_window: args.window,
        pulse_center_freq: args.freq,
        pulse_width: args.pulse_width,
        noise_sigma: args.noise_sigma,
        rng_seed: args.seed,
    };
    let collection = simulate::synthesize(&target, &config)?;
    io::write_collection(&collection, &args.output)?;
    eprintln!(
        "wrote {}: {} angles x {} range samples",
        args.output.display(),
        collection.n_angles(),
        collection.n_range()
    );
    RunManifest::new(
        "simulate",
        json!({
            "target": target_desc,
            "angles": args.angles,
            "range": args.range,
            "standoff": args.standoff,
            "window": [args.window.0, args.window.1],
            "freq": args.freq,
            "pulse_width": args.pulse_width,
            "noise_sigma": args.noise_sigma,
        }),
    )
    .seed(args.seed)
    .output(&args.output)
    .write(&args.output)?;
    Ok(())
}

pub fn embed(args: EmbedArgs) -> Result<()> {
    let collection = read_collection(&args.input, args.text_real)?;
    let lags = LagSet::from_degrees(&args.lags)?;
    let cloud = echotopo_core::embed::embed(&collection, &lags)?;
    io::write_cloud(&cloud, &args.output)?;
    eprintln!(
        "wrote {}: {} points in dimension {}",
        args.output.display(),
        cloud.len(),
        cloud.dim()
    );
    RunManifest::new("embed", json!({"lags": args.lags, "text_real": args.text_real}))
        .input(&args.input)
        .output(&args.output)
        .write(&args.output)?;
    Ok(())
}

fn run_pca(cloud: &PointCloud, k: usize, output: &Path, svg_out: Option<&Path>) -> Result<()> {
    let model = PcaModel::fit(cloud, k)?;
    let projected = model.project(cloud)?;
    io::write_cloud(&projected, output)?;
    let variances: Vec<String> =
        model.explained_variance().iter().map(|v| format!("{v:.6e}")).collect();
    eprintln!("explained variance: [{}]", variances.join(", "));
    if let Some(svg_path) = svg_out {
        if k < 2 {
            bail!("an SVG scatter needs at least 2 components");
        }
        io::write_text(svg_path, &svg::cloud_svg(&projected, 0, 1))?;
    }
    Ok(())
}

pub fn pca(args: PcaArgs) -> Result<()> {
    let cloud = io::read_cloud(&args.input)?;
    run_pca(&cloud, args.k, &args.output, args.svg.as_deref())?;
    let mut manifest = RunManifest::new("pca", json!({"k": args.k}))
        .input(&args.input)
        .output(&args.output);
    if let Some(svg_path) = &args.svg {
        manifest = manifest.output(svg_path);
    }
    manifest.write(&args.output)?;
    Ok(())
}

/// "auto" picks twice the largest gap between consecutive points, treating
/// the point order as a closed curve; collections and embeddings are ordered
/// by look angle, so this tracks the sampling scale.
fn resolve_max_radius(spec: &str, cloud: &PointCloud) -> Result<f64> {
    match spec {
        "inf" | "" => Ok(f64::INFINITY),
        "auto" => {
            let n = cloud.len();
            let gap = (0..n)
                .map(|i| euclidean(cloud.point(i), cloud.point((i + 1) % n)))
                .fold(0.0, f64::max);
            if gap > 0.0 {
                Ok(2.0 * gap)
            } else {
                Ok(f64::INFINITY)
            }
        }
        number => number
            .parse::<f64>()
            .ok()
            .filter(|r| *r > 0.0)
            .context("--max-radius must be a positive number, \"auto\", or \"inf\""),
    }
}

fn run_persist(
    cloud: &PointCloud,
    radius_spec: &str,
    max_points: usize,
    output: &Path,
    svg_out: Option<&Path>,
) -> Result<f64> {
    let max_radius = resolve_max_radius(radius_spec, cloud)?;
    let dm = DistanceMatrix::from_cloud(cloud);
    let diagram = rips_persistence(&dm, &RipsParams { max_radius, max_points })?;
    io::write_diagram(&diagram, output)?;
    let h0 = diagram.lifetimes(0);
    let h1 = diagram.lifetimes(1);
    eprintln!(
        "diagram: H0 {} finite + {} infinite, H1 {} finite + {} infinite (radius {max_radius})",
        h0.finite.len(),
        h0.infinite,
        h1.finite.len(),
        h1.infinite
    );
    if let Some(svg_path) = svg_out {
        io::write_text(svg_path, &svg::diagram_svg(&diagram))?;
    }
    Ok(max_radius)
}

pub fn persist(args: PersistArgs) -> Result<()> {
    let cloud = io::read_cloud(&args.input)?;
    let resolved = run_persist(
        &cloud,
        &args.max_radius,
        args.max_points,
        &args.output,
        args.svg.as_deref(),
    )?;
    let mut manifest = RunManifest::new(
        "persist",
        json!({
            "max_radius": args.max_radius,
            "resolved_max_radius": if resolved.is_finite() { json!(resolved) } else { json!("inf") },
            "max_points": args.max_points,
        }),
    )
    .input(&args.input)
    .output(&args.output);
    if let Some(svg_path) = &args.svg {
        manifest = manifest.output(svg_path);
    }
    manifest.write(&args.output)?;
    Ok(())
}

pub fn analyze(args: AnalyzeArgs) -> Result<()> {
    let collection = read_collection(&args.input, args.text_real)?;
    let report = echotopo_core::features::feature_report(&collection, &args.features.to_params())?;
    io::write_text(&args.output, &io::feature_report_text(&report))?;
    let rows_path = args.output.with_extension("csv");
    io::write_text(&rows_path, &io::feature_report_rows(&report))?;
    eprintln!(
        "noise floor {:.6e}, {} excursions",
        report.noise_floor.level,
        report.excursions.len()
    );
    RunManifest::new("analyze", args.features.to_json())
        .input(&args.input)
        .output(&args.output)
        .output(&rows_path)
        .write(&args.output)?;
    Ok(())
}

pub fn pipeline(args: PipelineArgs) -> Result<()> {
    std::fs::create_dir_all(&args.output)
        .map_err(|e| echotopo_core::Error::io(&args.output, e))?;
    let dir = &args.output;
    let collection = read_collection(&args.input, args.text_real)?;
    let lags = LagSet::from_degrees(&args.lags)?;

    let spaces: [(&str, PointCloud); 2] = [
        ("signature", collection.as_point_cloud()),
        ("phase", echotopo_core::embed::embed(&collection, &lags)?),
    ];
    let mut outputs: Vec<PathBuf> = Vec::new();
    for (name, cloud) in &spaces {
        eprintln!("{name} space: {} points in dimension {}", cloud.len(), cloud.dim());
        let cloud_path = dir.join(format!("{name}_cloud.csv"));
        io::write_cloud(cloud, &cloud_path)?;
        let pca_path = dir.join(format!("{name}_pca.csv"));
        let pca_svg = dir.join(format!("{name}_pca.svg"));
        run_pca(cloud, args.k, &pca_path, Some(&pca_svg))?;
        let dgm_path = dir.join(format!("{name}_diagram.csv"));
        let dgm_svg = dir.join(format!("{name}_diagram.svg"));
        run_persist(cloud, &args.max_radius, args.max_points, &dgm_path, Some(&dgm_svg))?;
        outputs.extend([cloud_path, pca_path, pca_svg, dgm_path, dgm_svg]);
    }

    let report = echotopo_core::features::feature_report(&collection, &args.features.to_params())?;
    let report_path = dir.join("report.txt");
    io::write_text(&report_path, &io::feature_report_text(&report))?;
    let rows_path = dir.join("report.csv");
    io::write_text(&rows_path, &io::feature_report_rows(&report))?;
    outputs.extend([report_path, rows_path]);

    let mut manifest = RunManifest::new(
        "pipeline",
        json!({
            "lags": args.lags,
            "k": args.k,
            "max_radius": args.max_radius,
            "max_points": args.max_points,
            "features": args.features.to_json(),
            "text_real": args.text_real,
        }),
    )
    .input(&args.input);
    for path in &outputs {
        manifest = manifest.output(path);
    }
    manifest.write(dir)?;
    Ok(())
}

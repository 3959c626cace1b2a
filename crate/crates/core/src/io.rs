//! File formats: the `.csas` binary collection format, delimited-text
//! variants, point-cloud and diagram tables, and SVG scatter plots.
//!
//! Binary layout (all little-endian):
//!
//! ```text
//! offset  size  field
//! 0       4     magic "CSAS"
//! 4       2     version (u16) = 1
//! 6       4     n_angles (u32)
//! 10      4     n_range (u32)
//! 14      4     step in millidegrees (u32); n_angles * step = 360000
//! 18      ...   n_angles * n_range complex samples as (f32 re, f32 im),
//!               row-major by angle
//! ```
//!
//! Files store 32-bit floats (matching typical recorders) and are widened to
//! f64 in memory. Text values are printed with 9 significant digits.

use std::fs;
use std::io::{Read, Write};
use std::path::Path;

use num_complex::Complex64;

use crate::angle::LookAngle;
use crate::collection::{Collection, EchoVector, PointCloud, FULL_CIRCLE_MILLIDEG};
use crate::error::{Error, Result};
use crate::persistence::{DiagramPair, PersistenceDiagram};

pub mod svg;

pub const MAGIC: &[u8; 4] = b"CSAS";
pub const VERSION: u16 = 1;
pub const HEADER_LEN: usize = 18;

/// Scientific notation with 9 significant digits.
fn fmt_g9(x: f64) -> String {
    format!("{:.8e}", x)
}

/// Writes `bytes` to `path` atomically (write to a temp file, then rename).
fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| Error::io(path, e))?;
    tmp.write_all(bytes).map_err(|e| Error::io(path, e))?;
    tmp.persist(path).map_err(|e| Error::io(path, e.error))?;
    Ok(())
}

/// Serialises a collection in the `.csas` binary layout.
pub fn collection_to_bytes(collection: &Collection) -> Vec<u8> {
    let n_angles = collection.n_angles();
    let n_range = collection.n_range();
    let mut out = Vec::with_capacity(HEADER_LEN + n_angles * n_range * 8);
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&VERSION.to_le_bytes());
    out.extend_from_slice(&(n_angles as u32).to_le_bytes());
    out.extend_from_slice(&(n_range as u32).to_le_bytes());
    out.extend_from_slice(&collection.step_millideg().to_le_bytes());
    for p in collection.profiles() {
        for z in p.samples() {
            out.extend_from_slice(&(z.re as f32).to_le_bytes());
            out.extend_from_slice(&(z.im as f32).to_le_bytes());
        }
    }
    out
}

pub fn collection_from_bytes(bytes: &[u8], path: &Path) -> Result<Collection> {
    if bytes.len() < HEADER_LEN {
        return Err(Error::TruncatedPayload {
            path: path.to_path_buf(),
            expected: HEADER_LEN as u64,
            got: bytes.len() as u64,
        });
    }
    if &bytes[0..4] != MAGIC {
        return Err(Error::BadMagic { path: path.to_path_buf() });
    }
    let version = u16::from_le_bytes([bytes[4], bytes[5]]);
    if version != VERSION {
        return Err(Error::VersionUnsupported { path: path.to_path_buf(), version });
    }
    let read_u32 =
        |at: usize| u32::from_le_bytes([bytes[at], bytes[at + 1], bytes[at + 2], bytes[at + 3]]);
    let n_angles = read_u32(6) as usize;
    let n_range = read_u32(10) as usize;
    let step_millideg = read_u32(14);
    if n_angles == 0 || n_range == 0 {
        return Err(Error::InconsistentHeader {
            path: path.to_path_buf(),
            reason: "zero-sized collection".to_string(),
        });
    }
    if n_angles as u64 * step_millideg as u64 != FULL_CIRCLE_MILLIDEG {
        return Err(Error::InconsistentHeader {
            path: path.to_path_buf(),
            reason: format!(
                "{n_angles} angles x {step_millideg} millidegrees does not cover 360°"
            ),
        });
    }
    let expected = HEADER_LEN as u64 + (n_angles * n_range * 8) as u64;
    if (bytes.len() as u64) != expected {
        return Err(Error::TruncatedPayload {
            path: path.to_path_buf(),
            expected,
            got: bytes.len() as u64,
        });
    }
    let mut profiles = Vec::with_capacity(n_angles);
    let mut at = HEADER_LEN;
    for _ in 0..n_angles {
        let mut samples = Vec::with_capacity(n_range);
        for _ in 0..n_range {
            let re = f32::from_le_bytes([bytes[at], bytes[at + 1], bytes[at + 2], bytes[at + 3]]);
            let im = f32::from_le_bytes([
                bytes[at + 4],
                bytes[at + 5],
                bytes[at + 6],
                bytes[at + 7],
            ]);
            samples.push(Complex64::new(re as f64, im as f64));
            at += 8;
        }
        profiles.push(EchoVector::new(samples));
    }
    Collection::with_step(profiles, step_millideg)
}

/// How delimited-text collection rows are interpreted.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TextLayout {
    /// Columns alternate `re,im` pairs.
    Complex,
    /// Every column is a real sample; imaginary parts are zero.
    Real,
    /// `Real` when the column count is odd, `Complex` when even.
    Auto,
}

/// Reads a collection, `.csas` files as binary and anything else as
/// delimited text with one row per angle.
pub fn read_collection(path: &Path) -> Result<Collection> {
    if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csas")) {
        let mut bytes = Vec::new();
        fs::File::open(path)
            .and_then(|mut f| f.read_to_end(&mut bytes))
            .map_err(|e| Error::io(path, e))?;
        collection_from_bytes(&bytes, path)
    } else {
        read_collection_text(path, TextLayout::Auto)
    }
}

pub fn read_collection_text(path: &Path, layout: TextLayout) -> Result<Collection> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut width = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let row: Vec<f64> = line
            .split(',')
            .map(|f| {
                f.trim().parse::<f64>().map_err(|_| Error::BadTextRow {
                    path: path.to_path_buf(),
                    line: idx + 1,
                    reason: format!("bad number {:?}", f.trim()),
                })
            })
            .collect::<Result<_>>()?;
        if let Some(w) = width {
            if row.len() != w {
                return Err(Error::BadTextRow {
                    path: path.to_path_buf(),
                    line: idx + 1,
                    reason: format!("expected {w} columns, found {}", row.len()),
                });
            }
        } else {
            width = Some(row.len());
        }
        rows.push(row);
    }
    let width = width.ok_or_else(|| Error::BadTextRow {
        path: path.to_path_buf(),
        line: 0,
        reason: "no data rows".to_string(),
    })?;
    let layout = match layout {
        TextLayout::Auto if width % 2 == 1 => TextLayout::Real,
        TextLayout::Auto => TextLayout::Complex,
        fixed => fixed,
    };
    if layout == TextLayout::Complex && width % 2 != 0 {
        return Err(Error::BadTextRow {
            path: path.to_path_buf(),
            line: 1,
            reason: format!("complex rows need an even column count, found {width}"),
        });
    }
    let profiles = rows
        .into_iter()
        .map(|row| {
            let samples = match layout {
                TextLayout::Real => row.iter().map(|&re| Complex64::new(re, 0.0)).collect(),
                _ => row.chunks(2).map(|c| Complex64::new(c[0], c[1])).collect(),
            };
            EchoVector::new(samples)
        })
        .collect();
    Collection::new(profiles)
}

/// Writes a collection, `.csas` as binary and anything else as delimited
/// text with alternating `re,im` columns. Overwrites atomically.
pub fn write_collection(collection: &Collection, path: &Path) -> Result<()> {
    if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csas")) {
        write_atomic(path, &collection_to_bytes(collection))
    } else {
        let mut out = String::new();
        for p in collection.profiles() {
            let row: Vec<String> =
                p.samples().iter().flat_map(|z| [fmt_g9(z.re), fmt_g9(z.im)]).collect();
            out.push_str(&row.join(","));
            out.push('\n');
        }
        write_atomic(path, out.as_bytes())
    }
}

/// Writes a point cloud as `angle_deg,c1,...,ck` rows; unlabeled points get
/// `nan` in the angle column.
pub fn write_cloud(cloud: &PointCloud, path: &Path) -> Result<()> {
    let mut out = String::new();
    for (i, p) in cloud.points().iter().enumerate() {
        let angle = match cloud.labels() {
            Some(labels) => fmt_g9(labels[i].degrees()),
            None => "nan".to_string(),
        };
        out.push_str(&angle);
        for x in p {
            out.push(',');
            out.push_str(&fmt_g9(*x));
        }
        out.push('\n');
    }
    write_atomic(path, out.as_bytes())
}

pub fn read_cloud(path: &Path) -> Result<PointCloud> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut points = Vec::new();
    let mut labels = Vec::new();
    let mut any_label = false;
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut fields = line.split(',').map(str::trim);
        let bad = |reason: String| Error::BadTextRow {
            path: path.to_path_buf(),
            line: idx + 1,
            reason,
        };
        let angle: f64 = fields
            .next()
            .ok_or_else(|| bad("empty row".to_string()))?
            .parse()
            .map_err(|_| bad("bad angle".to_string()))?;
        let coords: Vec<f64> = fields
            .map(|f| f.parse::<f64>().map_err(|_| bad(format!("bad number {f:?}"))))
            .collect::<Result<_>>()?;
        if coords.is_empty() {
            return Err(bad("row has no coordinates".to_string()));
        }
        if !angle.is_nan() {
            any_label = true;
        }
        labels.push(LookAngle::new(if angle.is_nan() { 0.0 } else { angle }));
        points.push(coords);
    }
    if points.is_empty() {
        return Err(Error::BadTextRow {
            path: path.to_path_buf(),
            line: 0,
            reason: "no data rows".to_string(),
        });
    }
    if any_label {
        Ok(PointCloud::with_labels(points, labels)?)
    } else {
        Ok(PointCloud::new(points)?)
    }
}

fn fmt_death(p: &DiagramPair) -> String {
    if p.death.is_infinite() {
        "inf".to_string()
    } else {
        fmt_g9(p.death)
    }
}

/// Writes a diagram as `dim,birth,death,censored` rows with `inf` for
/// infinite deaths.
pub fn write_diagram(diagram: &PersistenceDiagram, path: &Path) -> Result<()> {
    let mut out = String::from("# dim,birth,death,censored\n");
    for p in diagram.pairs() {
        out.push_str(&format!(
            "{},{},{},{}\n",
            p.dim,
            fmt_g9(p.birth),
            fmt_death(p),
            u8::from(p.censored)
        ));
    }
    write_atomic(path, out.as_bytes())
}

pub fn read_diagram(path: &Path) -> Result<PersistenceDiagram> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut pairs = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let bad = |reason: &str| Error::BadTextRow {
            path: path.to_path_buf(),
            line: idx + 1,
            reason: reason.to_string(),
        };
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != 4 {
            return Err(bad("expected dim,birth,death,censored"));
        }
        let dim: u8 = fields[0].parse().map_err(|_| bad("bad dim"))?;
        let birth: f64 = fields[1].parse().map_err(|_| bad("bad birth"))?;
        let death: f64 = if fields[2] == "inf" {
            f64::INFINITY
        } else {
            fields[2].parse().map_err(|_| bad("bad death"))?
        };
        let censored = match fields[3] {
            "0" => false,
            "1" => true,
            _ => return Err(bad("bad censored flag")),
        };
        pairs.push(DiagramPair { dim, birth, death, censored });
    }
    Ok(PersistenceDiagram::new(pairs))
}

/// Writes a FeatureReport both as key/value sections (`.txt`) and, with
/// [`feature_report_rows`], as delimited rows.
pub fn feature_report_text(report: &crate::features::FeatureReport) -> String {
    use std::fmt::Write as _;
    let mut out = String::new();
    let _ = writeln!(out, "[noise_floor]");
    let _ = writeln!(out, "level = {}", fmt_g9(report.noise_floor.level));
    let _ = writeln!(out, "quantile = {}", report.noise_floor.quantile);
    let _ = writeln!(out, "factor = {}", report.params.factor);
    let _ = writeln!(out, "excursions = {}", report.excursions.len());
    let _ = writeln!(out, "non_isolated_critical = {}", report.critical.non_isolated);
    let crit: Vec<String> =
        report.critical.angles.iter().map(|a| a.degrees().to_string()).collect();
    let _ = writeln!(out, "critical_angles_deg = {}", crit.join(";"));
    for (i, f) in report.features.iter().enumerate() {
        let e = &f.excursion;
        let _ = writeln!(out, "\n[excursion.{i}]");
        let _ = writeln!(out, "start_deg = {}", e.start.degrees());
        let _ = writeln!(out, "end_deg = {}", e.end.degrees());
        let _ = writeln!(out, "peak_deg = {}", e.peak_angle.degrees());
        let _ = writeln!(out, "peak_norm = {}", fmt_g9(e.peak_norm));
        let _ = writeln!(out, "full_circle = {}", e.full_circle);
        let _ = writeln!(out, "symmetry_score = {}", fmt_g9(f.symmetry_score));
        let _ = writeln!(out, "class = {:?}", f.class);
    }
    out
}

/// One `start,end,peak,peak_norm,symmetry,class` row per excursion.
pub fn feature_report_rows(report: &crate::features::FeatureReport) -> String {
    let mut out =
        String::from("# start_deg,end_deg,peak_deg,peak_norm,symmetry_score,class\n");
    for f in &report.features {
        let e = &f.excursion;
        out.push_str(&format!(
            "{},{},{},{},{},{:?}\n",
            e.start.degrees(),
            e.end.degrees(),
            e.peak_angle.degrees(),
            fmt_g9(e.peak_norm),
            fmt_g9(f.symmetry_score),
            f.class
        ));
    }
    out
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    write_atomic(path, text.as_bytes())
}

//! Point-scatterer CSAS simulation.
//!
//! A target sits on a turntable and is illuminated from a fixed standoff
//! distance. Under the far-field approximation each scatterer's echo range
//! tracks a pure sinusoid of the look angle, which is what gives grouped
//! scatterer targets their torus-knot phase spaces.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use std::f64::consts::TAU;
use std::fmt::Write as _;
use std::path::Path;

use crate::angle::LookAngle;
use crate::collection::{Collection, EchoVector, FULL_CIRCLE_MILLIDEG};
use crate::error::{Error, Result};

/// An ideal point reflector on the turntable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scatterer {
    /// Distance from the turntable centre, metres.
    pub radius: f64,
    /// Bearing from the centre.
    pub angle: LookAngle,
    /// Dimensionless echo amplitude.
    pub reflectivity: f64,
}

/// A nonempty list of point scatterers.
#[derive(Debug, Clone, PartialEq)]
pub struct ScattererTarget {
    scatterers: Vec<Scatterer>,
}

impl ScattererTarget {
    pub fn new(scatterers: Vec<Scatterer>) -> Result<Self> {
        if scatterers.is_empty() {
            return Err(Error::EmptyTarget);
        }
        Ok(ScattererTarget { scatterers })
    }

    pub fn scatterers(&self) -> &[Scatterer] {
        &self.scatterers
    }

    /// Parses a target description: one `radius,angle_deg,reflectivity` row
    /// per scatterer, `#` starts a comment.
    pub fn parse(text: &str, path: &Path) -> Result<Self> {
        let mut scatterers = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let bad = |reason: &str| Error::BadTargetLine {
                path: path.to_path_buf(),
                line: idx + 1,
                reason: reason.to_string(),
            };
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            if fields.len() != 3 {
                return Err(bad("expected radius,angle_deg,reflectivity"));
            }
            let parse = |s: &str| s.parse::<f64>().map_err(|_| bad(&format!("bad number {s:?}")));
            let radius = parse(fields[0])?;
            let angle = parse(fields[1])?;
            let reflectivity = parse(fields[2])?;
            if !radius.is_finite() || radius < 0.0 {
                return Err(bad("radius must be finite and >= 0"));
            }
            if !reflectivity.is_finite() || reflectivity <= 0.0 {
                return Err(bad("reflectivity must be finite and > 0"));
            }
            scatterers.push(Scatterer { radius, angle: LookAngle::new(angle), reflectivity });
        }
        if scatterers.is_empty() {
            return Err(Error::BadTargetLine {
                path: path.to_path_buf(),
                line: 0,
                reason: "target file contains no scatterers".to_string(),
            });
        }
        ScattererTarget::new(scatterers)
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text, path)
    }

    /// Serialises in the same row format `parse` accepts.
    pub fn to_text(&self) -> String {
        let mut out = String::from("# radius_m,angle_deg,reflectivity\n");
        for s in &self.scatterers {
            let _ = writeln!(out, "{},{},{}", s.radius, s.angle.degrees(), s.reflectivity);
        }
        out
    }
}

/// Default circle radius for [`seven_scatterer_target`], metres.
pub const SEVEN_SCATTERER_RADIUS: f64 = 0.5;
/// Default reflectivity for [`seven_scatterer_target`].
pub const SEVEN_SCATTERER_REFLECTIVITY: f64 = 1.0;

/// Seven equal scatterers on one circle: a group of 2 spaced 180° apart and a
/// group of 5 spaced 72° apart, the second group rotated by `group_offset`.
///
/// Offsets that are multiples of 36° make a scatterer from each group coincide
/// and are rejected as [`Error::AlignedGroups`].
pub fn seven_scatterer_target(group_offset: LookAngle) -> Result<ScattererTarget> {
    let mut bearings: Vec<LookAngle> = vec![LookAngle::new(0.0), LookAngle::new(180.0)];
    for k in 0..5 {
        bearings.push(group_offset + LookAngle::new(72.0 * k as f64));
    }
    for i in 0..bearings.len() {
        for j in i + 1..bearings.len() {
            if bearings[i].circular_distance(bearings[j]) < 1e-9 {
                return Err(Error::AlignedGroups { offset_deg: group_offset.degrees() });
            }
        }
    }
    let scatterers = bearings
        .into_iter()
        .map(|angle| Scatterer {
            radius: SEVEN_SCATTERER_RADIUS,
            angle,
            reflectivity: SEVEN_SCATTERER_REFLECTIVITY,
        })
        .collect();
    ScattererTarget::new(scatterers)
}

/// Simulation geometry, pulse shape, noise level, and seed.
#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub n_angles: usize,
    pub n_range: usize,
    /// Sensor distance from the turntable centre, metres.
    pub standoff: f64,
    /// Range extent `(min, max)` mapped linearly onto the range bins, metres.
    pub range_window: (f64, f64),
    /// Carrier frequency in cycles per metre of range.
    pub pulse_center_freq: f64,
    /// Gaussian envelope standard deviation, metres.
    pub pulse_width: f64,
    /// Per-sample complex noise standard deviation (per real component).
    pub noise_sigma: f64,
    pub rng_seed: u64,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            n_angles: 360,
            n_range: 1000,
            standoff: 10.0,
            range_window: (9.0, 11.0),
            pulse_center_freq: 2.0,
            pulse_width: 0.05,
            noise_sigma: 0.0,
            rng_seed: 0,
        }
    }
}

impl SimConfig {
    fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::BadSimConfig(m.to_string()));
        if self.n_angles == 0 || !FULL_CIRCLE_MILLIDEG.is_multiple_of(self.n_angles as u64) {
            return bad("n_angles must divide 360° into whole millidegrees");
        }
        if self.n_range == 0 {
            return bad("n_range must be positive");
        }
        if !matches!(
            self.range_window.0.partial_cmp(&self.range_window.1),
            Some(std::cmp::Ordering::Less)
        ) {
            return bad("range window must satisfy min < max");
        }
        if !matches!(self.pulse_width.partial_cmp(&0.0), Some(std::cmp::Ordering::Greater)) {
            return bad("pulse width must be positive");
        }
        if self.noise_sigma.is_nan() || self.noise_sigma < 0.0 {
            return bad("noise sigma must be >= 0");
        }
        Ok(())
    }

    /// Centre of range bin `j` under the linear window map.
    fn bin_range(&self, j: usize) -> f64 {
        let (lo, hi) = self.range_window;
        lo + (j as f64 + 0.5) * (hi - lo) / self.n_range as f64
    }
}

/// Far-field range of a scatterer seen from look angle `theta`.
fn scatterer_range(standoff: f64, s: &Scatterer, theta: LookAngle) -> f64 {
    standoff - s.radius * (theta - s.angle).radians().cos()
}

fn synthesize_rows(scatterers: &[Scatterer], config: &SimConfig) -> Result<Collection> {
    config.validate()?;
    let (lo, hi) = config.range_window;
    for s in scatterers {
        let (low, high) = (config.standoff - s.radius, config.standoff + s.radius);
        if low < lo || high > hi {
            return Err(Error::WindowTooNarrow { low, high, min: lo, max: hi });
        }
    }

    let step_millideg = (FULL_CIRCLE_MILLIDEG / config.n_angles as u64) as u32;
    let two_sigma_sq = 2.0 * config.pulse_width * config.pulse_width;
    let profiles: Vec<EchoVector> = (0..config.n_angles)
        .into_par_iter()
        .map(|i| {
            let theta =
                LookAngle::new((i as u64 * step_millideg as u64) as f64 / 1000.0);
            let mut row = vec![Complex64::new(0.0, 0.0); config.n_range];
            for s in scatterers {
                let r = scatterer_range(config.standoff, s, theta);
                let carrier = Complex64::from_polar(s.reflectivity, TAU * config.pulse_center_freq * r);
                for (j, cell) in row.iter_mut().enumerate() {
                    let dx = config.bin_range(j) - r;
                    *cell += carrier * (-dx * dx / two_sigma_sq).exp();
                }
            }
            if config.noise_sigma > 0.0 {
                // split the noise stream deterministically per row so parallel
                // evaluation cannot change the output
                let mut rng = ChaCha8Rng::seed_from_u64(config.rng_seed ^ i as u64);
                for cell in &mut row {
                    let re: f64 = StandardNormal.sample(&mut rng);
                    let im: f64 = StandardNormal.sample(&mut rng);
                    *cell += Complex64::new(re * config.noise_sigma, im * config.noise_sigma);
                }
            }
            EchoVector::new(row)
        })
        .collect();

    Ok(Collection::with_step(profiles, step_millideg)?.mean_center())
}

/// Simulates a CSAS collection of `target`: each scatterer contributes a
/// Gaussian-envelope pulse on its sinusoidal range track, rows get seeded
/// complex noise, and the result is mean centered.
pub fn synthesize(target: &ScattererTarget, config: &SimConfig) -> Result<Collection> {
    synthesize_rows(target.scatterers(), config)
}

/// A collection of receiver noise alone, for noise-floor calibration runs.
pub fn synthesize_noise(config: &SimConfig) -> Result<Collection> {
    synthesize_rows(&[], config)
}

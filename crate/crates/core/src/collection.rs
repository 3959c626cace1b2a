use num_complex::Complex64;

use crate::angle::LookAngle;
use crate::error::{Error, Result};

pub const FULL_CIRCLE_MILLIDEG: u64 = 360_000;

/// Tolerance, in degrees, when snapping a requested angle onto the sampling grid.
pub const GRID_SNAP_TOLERANCE_DEG: f64 = 1e-9;

/// One complex range profile: the echo received at a single look angle.
#[derive(Debug, Clone, PartialEq)]
pub struct EchoVector {
    samples: Vec<Complex64>,
}

impl EchoVector {
    pub fn new(samples: Vec<Complex64>) -> Self {
        EchoVector { samples }
    }

    pub fn zeros(n: usize) -> Self {
        EchoVector { samples: vec![Complex64::new(0.0, 0.0); n] }
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    /// Euclidean norm over real and imaginary parts.
    pub fn norm(&self) -> f64 {
        self.samples.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Realification with block layout `[re_0..re_n | im_0..im_n]`, which keeps
    /// the Euclidean norm of the real vector equal to the complex norm.
    pub fn realified(&self) -> Vec<f64> {
        let n = self.samples.len();
        let mut out = Vec::with_capacity(2 * n);
        out.extend(self.samples.iter().map(|z| z.re));
        out.extend(self.samples.iter().map(|z| z.im));
        out
    }
}

/// A uniformly angle-sampled CSAS collection: one complex range profile per
/// look angle, row `i` taken at angle `i * step`.
///
/// The angular step is stored in integer millidegrees so that
/// `n_angles * step == 360°` holds exactly rather than to floating tolerance.
#[derive(Debug, Clone, PartialEq)]
pub struct Collection {
    step_millideg: u32,
    n_range: usize,
    profiles: Vec<EchoVector>,
}

impl Collection {
    /// Builds a collection from per-angle profiles. The step is derived from
    /// the row count and must divide 360° into whole millidegrees.
    pub fn new(profiles: Vec<EchoVector>) -> Result<Self> {
        if profiles.is_empty() {
            return Err(Error::EmptyCollection);
        }
        let n_angles = profiles.len() as u64;
        if !FULL_CIRCLE_MILLIDEG.is_multiple_of(n_angles) {
            return Err(Error::InconsistentGrid {
                n_angles: profiles.len() as u32,
                step_millideg: 0,
            });
        }
        let step_millideg = (FULL_CIRCLE_MILLIDEG / n_angles) as u32;
        Self::with_step(profiles, step_millideg)
    }

    /// Builds a collection with an explicit step; `n_angles * step_millideg`
    /// must equal 360 000.
    pub fn with_step(profiles: Vec<EchoVector>, step_millideg: u32) -> Result<Self> {
        if profiles.is_empty() {
            return Err(Error::EmptyCollection);
        }
        let n_angles = profiles.len();
        if (n_angles as u64) * (step_millideg as u64) != FULL_CIRCLE_MILLIDEG {
            return Err(Error::InconsistentGrid { n_angles: n_angles as u32, step_millideg });
        }
        let n_range = profiles[0].len();
        for (row, p) in profiles.iter().enumerate() {
            if p.len() != n_range {
                return Err(Error::RaggedProfile { row, expected: n_range, got: p.len() });
            }
        }
        Ok(Collection { step_millideg, n_range, profiles })
    }

    pub fn n_angles(&self) -> usize {
        self.profiles.len()
    }

    pub fn n_range(&self) -> usize {
        self.n_range
    }

    pub fn step_millideg(&self) -> u32 {
        self.step_millideg
    }

    /// Angular step in degrees.
    pub fn step(&self) -> f64 {
        self.step_millideg as f64 / 1000.0
    }

    /// Look angle of row `i`.
    pub fn angle_of_row(&self, i: usize) -> LookAngle {
        let md = (i as u64 * self.step_millideg as u64) % FULL_CIRCLE_MILLIDEG;
        LookAngle::new(md as f64 / 1000.0)
    }

    pub fn profiles(&self) -> &[EchoVector] {
        &self.profiles
    }

    pub fn row(&self, i: usize) -> &EchoVector {
        &self.profiles[i]
    }

    /// Row index for an angle that lies on the sampling grid, within
    /// [`GRID_SNAP_TOLERANCE_DEG`]. Indexing is circular, so 360° maps to row 0.
    pub fn row_of_angle(&self, angle: LookAngle) -> Result<usize> {
        let step = self.step();
        let ratio = angle.degrees() / step;
        let i = ratio.round();
        if (angle.degrees() - i * step).abs() > GRID_SNAP_TOLERANCE_DEG {
            return Err(Error::NonSampledAngle { angle_deg: angle.degrees(), step_deg: step });
        }
        Ok((i as usize) % self.n_angles())
    }

    /// The stored profile at a sampled angle, with circular indexing.
    pub fn profile_at(&self, angle: LookAngle) -> Result<&EchoVector> {
        Ok(&self.profiles[self.row_of_angle(angle)?])
    }

    /// Per-angle profile norms, in row order.
    pub fn profile_norms(&self) -> Vec<f64> {
        self.profiles.iter().map(er_norm).collect()
    }

    /// Subtracts the per-range-bin complex mean taken across all angles.
    pub fn mean_center(&self) -> Collection {
        let n = self.n_angles();
        let mut mean = vec![Complex64::new(0.0, 0.0); self.n_range];
        for p in &self.profiles {
            for (m, z) in mean.iter_mut().zip(p.samples()) {
                *m += z;
            }
        }
        for m in &mut mean {
            *m /= n as f64;
        }
        let profiles = self
            .profiles
            .iter()
            .map(|p| {
                EchoVector::new(
                    p.samples().iter().zip(&mean).map(|(z, m)| z - m).collect(),
                )
            })
            .collect();
        Collection { step_millideg: self.step_millideg, n_range: self.n_range, profiles }
    }

    /// Samples the signature space: one realified point per look angle,
    /// labelled with its source angle.
    pub fn as_point_cloud(&self) -> PointCloud {
        let points = self.profiles.iter().map(|p| p.realified()).collect();
        let labels = (0..self.n_angles()).map(|i| self.angle_of_row(i)).collect();
        PointCloud::with_labels(points, labels).expect("realified rows share one dimension")
    }
}

fn er_norm(v: &EchoVector) -> f64 {
    v.norm()
}

/// A finite set of points in `R^d`, optionally labelled with the look angle
/// each point was sampled from.
#[derive(Debug, Clone, PartialEq)]
pub struct PointCloud {
    dim: usize,
    points: Vec<Vec<f64>>,
    labels: Option<Vec<LookAngle>>,
}

impl PointCloud {
    pub fn new(points: Vec<Vec<f64>>) -> Result<Self> {
        Self::build(points, None)
    }

    pub fn with_labels(points: Vec<Vec<f64>>, labels: Vec<LookAngle>) -> Result<Self> {
        Self::build(points, Some(labels))
    }

    fn build(points: Vec<Vec<f64>>, labels: Option<Vec<LookAngle>>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::DegenerateCloud("no points".into()));
        }
        let dim = points[0].len();
        if dim == 0 {
            return Err(Error::DegenerateCloud("zero-dimensional points".into()));
        }
        if points.iter().any(|p| p.len() != dim) {
            return Err(Error::DegenerateCloud("points of mixed dimension".into()));
        }
        if let Some(ref l) = labels {
            if l.len() != points.len() {
                return Err(Error::DegenerateCloud(format!(
                    "{} labels for {} points",
                    l.len(),
                    points.len()
                )));
            }
        }
        Ok(PointCloud { dim, points, labels })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.points[i]
    }

    pub fn labels(&self) -> Option<&[LookAngle]> {
        self.labels.as_deref()
    }
}

pub fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            let d = x - y;
            d * d
        })
        .sum::<f64>()
        .sqrt()
}

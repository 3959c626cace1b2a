//! Angle-lagged phase-space embedding.
//!
//! The sampled phase space bundles lagged copies of the collection: the point
//! for look angle `θ` concatenates the realified profiles at `θ + τ_1`, …,
//! `θ + τ_N`. The matching metric is the Euclidean norm of the concatenation.

use crate::angle::LookAngle;
use crate::collection::{Collection, PointCloud, GRID_SNAP_TOLERANCE_DEG};
use crate::error::{Error, Result};

/// An ordered set of pairwise-distinct angle lags.
#[derive(Debug, Clone, PartialEq)]
pub struct LagSet {
    lags: Vec<LookAngle>,
}

impl LagSet {
    pub fn new(lags: Vec<LookAngle>) -> Result<Self> {
        if lags.is_empty() {
            return Err(Error::InvalidLagSet);
        }
        for i in 0..lags.len() {
            for j in i + 1..lags.len() {
                if lags[i].circular_distance(lags[j]) < GRID_SNAP_TOLERANCE_DEG {
                    return Err(Error::InvalidLagSet);
                }
            }
        }
        Ok(LagSet { lags })
    }

    pub fn from_degrees(degrees: &[f64]) -> Result<Self> {
        Self::new(degrees.iter().map(|&d| LookAngle::new(d)).collect())
    }

    pub fn lags(&self) -> &[LookAngle] {
        &self.lags
    }

    pub fn len(&self) -> usize {
        self.lags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lags.is_empty()
    }

    /// Row shifts for a collection with the given step, or `OffGridLag` if a
    /// lag is not a multiple of that step.
    fn row_shifts(&self, collection: &Collection) -> Result<Vec<usize>> {
        let step = collection.step();
        let n = collection.n_angles();
        self.lags
            .iter()
            .map(|lag| {
                let ratio = lag.degrees() / step;
                let shift = ratio.round();
                if (lag.degrees() - shift * step).abs() > GRID_SNAP_TOLERANCE_DEG {
                    return Err(Error::OffGridLag { lag_deg: lag.degrees(), step_deg: step });
                }
                Ok(shift as usize % n)
            })
            .collect()
    }
}

/// Samples the phase space of a collection: point `i` concatenates the
/// realified profiles at angles `θ_i + τ_k`, circularly indexed, giving
/// `n_angles` points of dimension `2 * n_range * N` labelled by `θ_i`.
pub fn embed(collection: &Collection, lags: &LagSet) -> Result<PointCloud> {
    let shifts = lags.row_shifts(collection)?;
    let n = collection.n_angles();
    let dim = 2 * collection.n_range() * lags.len();
    let mut points = Vec::with_capacity(n);
    let mut labels = Vec::with_capacity(n);
    for i in 0..n {
        let mut point = Vec::with_capacity(dim);
        for &s in &shifts {
            point.extend(collection.row((i + s) % n).realified());
        }
        points.push(point);
        labels.push(collection.angle_of_row(i));
    }
    Ok(PointCloud::with_labels(points, labels).expect("embedded rows share one dimension"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::collection::{euclidean, EchoVector};
    use num_complex::Complex64;

    fn wavy_collection(n_angles: usize, n_range: usize) -> Collection {
        let profiles = (0..n_angles)
            .map(|i| {
                let t = i as f64 / n_angles as f64 * std::f64::consts::TAU;
                EchoVector::new(
                    (0..n_range)
                        .map(|j| Complex64::new((t * (j + 1) as f64).sin(), (t - j as f64).cos()))
                        .collect(),
                )
            })
            .collect();
        Collection::new(profiles).unwrap()
    }

    #[test]
    fn zero_lag_equals_signature_cloud() {
        let coll = wavy_collection(24, 3);
        let lags = LagSet::from_degrees(&[0.0]).unwrap();
        assert_eq!(embed(&coll, &lags).unwrap(), coll.as_point_cloud());
    }

    #[test]
    fn shape_matches_lag_count() {
        let coll = wavy_collection(360, 5);
        let lags = LagSet::from_degrees(&[0.0, 4.0, 25.0]).unwrap();
        let cloud = embed(&coll, &lags).unwrap();
        assert_eq!(cloud.len(), 360);
        assert_eq!(cloud.dim(), 2 * 5 * 3);
    }

    #[test]
    fn off_grid_lag_is_rejected() {
        let coll = wavy_collection(360, 2);
        let lags = LagSet::from_degrees(&[0.0, 0.5]).unwrap();
        assert!(matches!(embed(&coll, &lags), Err(Error::OffGridLag { .. })));
    }

    #[test]
    fn duplicate_or_empty_lags_are_rejected() {
        assert!(matches!(LagSet::from_degrees(&[]), Err(Error::InvalidLagSet)));
        assert!(matches!(LagSet::from_degrees(&[4.0, 364.0]), Err(Error::InvalidLagSet)));
    }

    #[test]
    fn embedded_norm_composes_from_lagged_profiles() {
        let coll = wavy_collection(40, 4);
        let lags = LagSet::from_degrees(&[0.0, 9.0, 27.0]).unwrap();
        let cloud = embed(&coll, &lags).unwrap();
        let zero = vec![0.0; cloud.dim()];
        for i in 0..coll.n_angles() {
            let expect: f64 = lags
                .lags()
                .iter()
                .map(|&tau| {
                    let p = coll.profile_at(coll.angle_of_row(i) + tau).unwrap();
                    p.norm().powi(2)
                })
                .sum::<f64>()
                .sqrt();
            let got = euclidean(cloud.point(i), &zero);
            assert!((got - expect).abs() <= 1e-12 * expect.max(1.0));
        }
    }

    #[test]
    fn common_lag_shift_permutes_points() {
        let coll = wavy_collection(36, 2);
        let base = LagSet::from_degrees(&[0.0, 20.0]).unwrap();
        let shifted = LagSet::from_degrees(&[30.0, 50.0]).unwrap();
        let a = embed(&coll, &base).unwrap();
        let b = embed(&coll, &shifted).unwrap();
        // shifting every lag by 30° = 3 rows rotates the point list
        for i in 0..a.len() {
            assert_eq!(a.point((i + 3) % a.len()), b.point(i));
        }
        // so the multiset of pairwise distances is unchanged
        let dists = |c: &PointCloud| {
            let mut d: Vec<f64> = (0..c.len())
                .flat_map(|i| (i + 1..c.len()).map(move |j| (i, j)))
                .map(|(i, j)| euclidean(c.point(i), c.point(j)))
                .collect();
            d.sort_by(f64::total_cmp);
            d
        };
        assert_eq!(dists(&a), dists(&b));
    }

    #[test]
    fn constant_collection_collapses_to_one_point() {
        let profile = EchoVector::new(vec![Complex64::new(2.0, -1.0)]);
        let coll = Collection::new(vec![profile; 12]).unwrap();
        let lags = LagSet::from_degrees(&[0.0, 60.0, 150.0]).unwrap();
        let cloud = embed(&coll, &lags).unwrap();
        for i in 1..cloud.len() {
            assert_eq!(cloud.point(i), cloud.point(0));
        }
    }
}

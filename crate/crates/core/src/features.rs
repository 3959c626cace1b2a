//! Geometric feature extraction from a collection: the noise haze level,
//! angular excursions away from the origin, critical angles of the sampled
//! curve, and the flare/loop character of each excursion.
//!
//! A mirror-symmetric specular reflection traces the same locus on the way in
//! and out of its peak, so its excursion is a flare; an asymmetric one traces
//! a loop. Flares are invisible to H1 of the signature space but become loops
//! after phase-space embedding.

use num_complex::Complex64;

use crate::angle::LookAngle;
use crate::collection::Collection;
use crate::error::{Error, Result};

/// Estimated norm level of the no-echo haze.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseFloor {
    pub level: f64,
    /// Quantile of the per-angle norms used for the estimate.
    pub quantile: f64,
}

/// A maximal circular arc of angles whose profile norm clears the detection
/// threshold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Excursion {
    pub start: LookAngle,
    pub end: LookAngle,
    pub peak_angle: LookAngle,
    pub peak_norm: f64,
    /// True when the arc covers the whole circle.
    pub full_circle: bool,
}

impl Excursion {
    /// Arc length in degrees.
    pub fn width_deg(&self, step_deg: f64) -> f64 {
        if self.full_circle {
            360.0
        } else {
            self.start.ccw_to(self.end) + step_deg
        }
    }

    /// Shorter of the two arcs from the peak to an endpoint, in degrees.
    pub fn half_width_deg(&self) -> f64 {
        if self.full_circle {
            180.0
        } else {
            self.start.ccw_to(self.peak_angle).min(self.peak_angle.ccw_to(self.end))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReflectionClass {
    Flare,
    Loop,
}

/// An excursion together with its left/right symmetry score and class.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReflectionFeature {
    pub excursion: Excursion,
    pub class: ReflectionClass,
    /// Normalized correlation magnitude between the two sides of the peak,
    /// in `[0, 1]`.
    pub symmetry_score: f64,
}

/// Sampled angles where the curve speed has an isolated minimum.
#[derive(Debug, Clone, PartialEq)]
pub struct CriticalAngles {
    pub angles: Vec<LookAngle>,
    /// Set when the speed field is identically zero, which violates the
    /// isolated-critical-point assumption.
    pub non_isolated: bool,
}

/// Everything the analysis extracts from one collection.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureReport {
    pub noise_floor: NoiseFloor,
    pub excursions: Vec<Excursion>,
    pub features: Vec<ReflectionFeature>,
    pub critical: CriticalAngles,
    pub params: FeatureParams,
}

/// Detection and classification knobs with reproducible defaults.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeatureParams {
    /// Quantile of per-angle norms taken as the noise level.
    pub noise_quantile: f64,
    /// Excursion threshold as a multiple of the noise level.
    pub factor: f64,
    /// Samples on each side of the peak used for the symmetry score.
    pub half_window: usize,
    /// Symmetry score at or above which an excursion is a flare.
    pub symmetry_threshold: f64,
    /// Critical angles must have speed below this fraction of the maximum.
    pub critical_tol: f64,
}

impl Default for FeatureParams {
    fn default() -> Self {
        FeatureParams {
            noise_quantile: 0.5,
            factor: 3.0,
            half_window: 5,
            symmetry_threshold: 0.9,
            critical_tol: 0.25,
        }
    }
}

/// The given quantile of the per-angle profile norms (linear interpolation
/// between order statistics).
pub fn estimate_noise_floor(collection: &Collection, quantile: f64) -> NoiseFloor {
    assert!(quantile > 0.0 && quantile < 1.0, "quantile must lie in (0, 1)");
    let mut norms = collection.profile_norms();
    norms.sort_by(f64::total_cmp);
    let pos = quantile * (norms.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    let level = if lo == hi {
        norms[lo]
    } else {
        norms[lo] + (pos - lo as f64) * (norms[hi] - norms[lo])
    };
    NoiseFloor { level, quantile }
}

/// Maximal circular arcs where the profile norm strictly exceeds
/// `factor * floor.level`, merged across the 0°/360° seam.
pub fn detect_excursions(
    collection: &Collection,
    floor: &NoiseFloor,
    factor: f64,
) -> Vec<Excursion> {
    assert!(factor > 1.0, "factor must exceed 1");
    let norms = collection.profile_norms();
    let n = norms.len();
    let threshold = factor * floor.level;
    let above: Vec<bool> = norms.iter().map(|&v| v > threshold).collect();

    if above.iter().all(|&b| b) {
        let (peak_row, peak_norm) = argmax(&norms);
        return vec![Excursion {
            start: collection.angle_of_row(0),
            end: collection.angle_of_row(n - 1),
            peak_angle: collection.angle_of_row(peak_row),
            peak_norm,
            full_circle: true,
        }];
    }

    let mut excursions = Vec::new();
    let mut row = 0;
    while row < n {
        if !above[row] {
            row += 1;
            continue;
        }
        // grow the arc forward; wraparound is impossible to re-enter because
        // scanning starts at the first above-threshold row of a run
        let start = row;
        let mut end = row;
        while end + 1 < n && above[end + 1] {
            end += 1;
        }
        excursions.push((start, end));
        row = end + 1;
    }
    // merge a run touching row n-1 with one starting at row 0
    if excursions.len() > 1 {
        let first = excursions[0];
        let last = *excursions.last().unwrap();
        if first.0 == 0 && last.1 == n - 1 {
            excursions.pop();
            excursions[0] = (last.0, first.1);
        }
    }

    excursions
        .into_iter()
        .map(|(start, end)| {
            let len = (end + n - start) % n + 1;
            let (mut peak_row, mut peak_norm) = (start, norms[start]);
            for k in 0..len {
                let r = (start + k) % n;
                if norms[r] > peak_norm {
                    peak_row = r;
                    peak_norm = norms[r];
                }
            }
            Excursion {
                start: collection.angle_of_row(start),
                end: collection.angle_of_row(end),
                peak_angle: collection.angle_of_row(peak_row),
                peak_norm,
                full_circle: false,
            }
        })
        .collect()
}

fn argmax(values: &[f64]) -> (usize, f64) {
    let mut best = (0, values[0]);
    for (i, &v) in values.iter().enumerate() {
        if v > best.1 {
            best = (i, v);
        }
    }
    best
}

/// Sampled angles where the centered-difference speed of the curve is a
/// strict local minimum below `tol` times the maximum speed.
pub fn detect_critical_angles(collection: &Collection, tol: f64) -> CriticalAngles {
    assert!(tol > 0.0, "tol must be positive");
    let n = collection.n_angles();
    let two_step = 2.0 * collection.step();
    let speeds: Vec<f64> = (0..n)
        .map(|i| {
            let next = collection.row((i + 1) % n).samples();
            let prev = collection.row((i + n - 1) % n).samples();
            next.iter()
                .zip(prev)
                .map(|(a, b)| (a - b).norm_sqr())
                .sum::<f64>()
                .sqrt()
                / two_step
        })
        .collect();
    let max_speed = speeds.iter().cloned().fold(0.0, f64::max);
    if max_speed == 0.0 {
        return CriticalAngles { angles: Vec::new(), non_isolated: true };
    }
    let cutoff = tol * max_speed;
    let angles = (0..n)
        .filter(|&i| {
            let s = speeds[i];
            s < cutoff && s < speeds[(i + 1) % n] && s < speeds[(i + n - 1) % n]
        })
        .map(|i| collection.angle_of_row(i))
        .collect();
    CriticalAngles { angles, non_isolated: false }
}

/// Scores the left/right symmetry of an excursion around its peak and labels
/// it a flare or a loop.
///
/// The score is the normalized correlation magnitude between the profile
/// sequences at `peak + k·step` and `peak - k·step` for `k = 1..=half_window`.
pub fn classify(
    collection: &Collection,
    excursion: &Excursion,
    params: &FeatureParams,
) -> Result<ReflectionFeature> {
    let half_window = params.half_window;
    assert!(half_window >= 2, "half_window must be at least 2");
    let step = collection.step();
    let reach = half_window as f64 * step;
    if reach > excursion.half_width_deg() + 1e-9 {
        return Err(Error::WindowExceedsExcursion {
            half_window,
            half_width_deg: excursion.half_width_deg(),
        });
    }

    let n = collection.n_angles();
    let peak_row = collection.row_of_angle(excursion.peak_angle)?;
    let fwd: Vec<&[Complex64]> = (1..=half_window)
        .map(|k| collection.row((peak_row + k) % n).samples())
        .collect();
    let bwd: Vec<&[Complex64]> = (1..=half_window)
        .map(|k| collection.row((peak_row + n - k % n) % n).samples())
        .collect();

    let symmetry_score = if fwd == bwd {
        // the two sides are identical samples; skip the arithmetic so the
        // score is exactly 1
        1.0
    } else {
        let mut corr = Complex64::new(0.0, 0.0);
        let (mut energy_f, mut energy_b) = (0.0, 0.0);
        for (f, b) in fwd.iter().zip(&bwd) {
            for (x, y) in f.iter().zip(*b) {
                corr += x * y.conj();
                energy_f += x.norm_sqr();
                energy_b += y.norm_sqr();
            }
        }
        let denom = (energy_f * energy_b).sqrt();
        if denom == 0.0 {
            0.0
        } else {
            (corr.norm() / denom).clamp(0.0, 1.0)
        }
    };

    let class = if symmetry_score >= params.symmetry_threshold {
        ReflectionClass::Flare
    } else {
        ReflectionClass::Loop
    };
    Ok(ReflectionFeature { excursion: *excursion, class, symmetry_score })
}

/// Runs the full feature analysis: noise floor, excursions, classification,
/// and critical angles.
pub fn feature_report(collection: &Collection, params: &FeatureParams) -> Result<FeatureReport> {
    let noise_floor = estimate_noise_floor(collection, params.noise_quantile);
    let excursions = detect_excursions(collection, &noise_floor, params.factor);
    let features = excursions
        .iter()
        .map(|e| classify(collection, e, params))
        .collect::<Result<Vec<_>>>()?;
    let critical = detect_critical_angles(collection, params.critical_tol);
    Ok(FeatureReport { noise_floor, excursions, features, critical, params: *params })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::collection::EchoVector;

    fn collection_from_norm_profile(norms: &[f64]) -> Collection {
        let profiles = norms
            .iter()
            .map(|&v| EchoVector::new(vec![Complex64::new(v, 0.0)]))
            .collect();
        Collection::new(profiles).unwrap()
    }

    #[test]
    fn noise_floor_of_zero_collection_is_zero() {
        let coll = collection_from_norm_profile(&[0.0; 8]);
        assert_eq!(estimate_noise_floor(&coll, 0.5).level, 0.0);
    }

    #[test]
    fn median_ignores_a_single_spike() {
        let coll = collection_from_norm_profile(&[1.0, 1.0, 1.0, 100.0]);
        assert_eq!(estimate_noise_floor(&coll, 0.5).level, 1.0);
    }

    #[test]
    fn zero_collection_has_no_excursions() {
        let coll = collection_from_norm_profile(&[0.0; 8]);
        let floor = estimate_noise_floor(&coll, 0.5);
        assert!(detect_excursions(&coll, &floor, 3.0).is_empty());
    }

    #[test]
    fn excursion_merges_across_the_seam() {
        let mut norms = vec![0.1; 8];
        norms[7] = 2.0;
        norms[0] = 3.0;
        let coll = collection_from_norm_profile(&norms);
        let floor = estimate_noise_floor(&coll, 0.5);
        let exc = detect_excursions(&coll, &floor, 3.0);
        assert_eq!(exc.len(), 1);
        let e = exc[0];
        assert_eq!(e.start.degrees(), 315.0);
        assert_eq!(e.end.degrees(), 0.0);
        assert_eq!(e.peak_angle.degrees(), 0.0);
        assert_eq!(e.peak_norm, 3.0);
        assert_eq!(e.width_deg(coll.step()), 90.0);
    }

    #[test]
    fn disjoint_bumps_stay_disjoint() {
        let mut norms = vec![0.1; 12];
        for i in [2, 3] {
            norms[i] = 5.0;
        }
        norms[8] = 4.0;
        let coll = collection_from_norm_profile(&norms);
        let floor = estimate_noise_floor(&coll, 0.5);
        let exc = detect_excursions(&coll, &floor, 3.0);
        assert_eq!(exc.len(), 2);
        assert_eq!(exc[0].peak_angle.degrees(), 60.0);
        assert_eq!(exc[1].peak_angle.degrees(), 240.0);
    }

    #[test]
    fn saturated_collection_is_one_full_circle_excursion() {
        let floor = NoiseFloor { level: 0.0, quantile: 0.5 };
        let all = collection_from_norm_profile(&[2.0; 8]);
        let exc = detect_excursions(&all, &floor, 3.0);
        assert_eq!(exc.len(), 1);
        assert!(exc[0].full_circle);
        assert_eq!(exc[0].width_deg(all.step()), 360.0);
    }

    #[test]
    fn constant_collection_flags_non_isolated() {
        let coll = collection_from_norm_profile(&[2.0; 16]);
        let crit = detect_critical_angles(&coll, 0.25);
        assert!(crit.non_isolated);
        assert!(crit.angles.is_empty());
    }

    #[test]
    fn uniform_circle_has_no_critical_angles() {
        let n = 36;
        let profiles = (0..n)
            .map(|i| {
                let t = (i as f64 / n as f64) * std::f64::consts::TAU;
                EchoVector::new(vec![Complex64::new(t.cos(), t.sin())])
            })
            .collect();
        let coll = Collection::new(profiles).unwrap();
        let crit = detect_critical_angles(&coll, 0.25);
        assert!(!crit.non_isolated);
        assert!(crit.angles.is_empty());
    }

    #[test]
    fn cosine_squared_minima_sit_on_the_axes() {
        let n = 360;
        let profiles = (0..n)
            .map(|i| {
                let t = (i as f64).to_radians();
                EchoVector::new(vec![Complex64::new(t.cos() * t.cos(), 0.0)])
            })
            .collect();
        let coll = Collection::new(profiles).unwrap();
        let crit = detect_critical_angles(&coll, 0.25);
        assert!(!crit.non_isolated);
        let mut got: Vec<f64> = crit.angles.iter().map(|a| a.degrees()).collect();
        got.sort_by(f64::total_cmp);
        assert_eq!(got, vec![0.0, 90.0, 180.0, 270.0]);

        // oracle: dense finite differences of the generating function find
        // the same minima
        let dense = 36000;
        let f = |k: usize| {
            let t = (k as f64 / dense as f64) * std::f64::consts::TAU;
            t.cos() * t.cos()
        };
        let mut oracle = Vec::new();
        for k in 0..dense {
            let s_prev = (f((k + 1) % dense) - f((k + dense - 1) % dense)).abs();
            let s_here = (f((k + 2) % dense) - f(k % dense)).abs();
            let s_next = (f((k + 3) % dense) - f((k + 1) % dense)).abs();
            if s_here < s_prev && s_here < s_next {
                oracle.push(((k + 1) as f64 / dense as f64) * 360.0);
            }
        }
        for target in got {
            assert!(
                oracle.iter().any(|&o| (o - target).abs() < 0.5 || (o - target).abs() > 359.5),
                "sampled minimum {target}° not confirmed by dense oracle {oracle:?}"
            );
        }
    }

    fn gaussian_bump(center_deg: f64, width_deg: f64, support_deg: f64, theta: LookAngle) -> f64 {
        let d = theta.circular_distance(LookAngle::new(center_deg));
        if d > support_deg {
            0.0
        } else {
            (-(d / width_deg).powi(2)).exp()
        }
    }

    fn flare_plus_loop_collection() -> Collection {
        // bin 0 holds a mirror-symmetric bump at 90° (a flare); bins 1 and 2
        // hold two offset lobes at 270°, so the echo leaves the origin along
        // one axis and returns along another (a loop)
        let n = 360;
        let profiles = (0..n)
            .map(|i| {
                let theta = LookAngle::new(i as f64);
                let flare = gaussian_bump(90.0, 6.0, 24.0, theta);
                let out_lobe = gaussian_bump(265.0, 6.0, 24.0, theta);
                let back_lobe = gaussian_bump(275.0, 6.0, 24.0, theta);
                EchoVector::new(vec![
                    Complex64::new(flare, 0.0),
                    Complex64::new(out_lobe, 0.0),
                    Complex64::new(back_lobe, 0.0),
                ])
            })
            .collect();
        Collection::new(profiles).unwrap()
    }

    #[test]
    fn classify_separates_flare_from_loop() {
        let coll = flare_plus_loop_collection();
        let params = FeatureParams { half_window: 10, ..FeatureParams::default() };
        let report = feature_report(&coll, &params).unwrap();
        assert_eq!(report.excursions.len(), 2);
        let classes: Vec<ReflectionClass> = report.features.iter().map(|f| f.class).collect();
        assert_eq!(classes, vec![ReflectionClass::Flare, ReflectionClass::Loop]);
        assert_eq!(report.features[0].symmetry_score, 1.0);
        assert!(report.features[1].symmetry_score < 0.9);
        let peaks: Vec<f64> =
            report.excursions.iter().map(|e| e.peak_angle.degrees()).collect();
        assert_eq!(peaks[0], 90.0);
        assert!((peaks[1] - 270.0).abs() <= 5.0);
    }

    #[test]
    fn orthogonal_sides_score_zero() {
        // sides of the peak live in orthogonal bins
        let n = 24;
        let profiles = (0..n)
            .map(|i| {
                let fwd = if (1..=5).contains(&i) { 1.0 } else { 0.0 };
                let bwd = if (19..=23).contains(&i) { 1.0 } else { 0.0 };
                EchoVector::new(vec![
                    Complex64::new(fwd, 0.0),
                    Complex64::new(bwd, 0.0),
                    Complex64::new(if i == 0 { 3.0 } else { 0.0 }, 0.0),
                ])
            })
            .collect();
        let coll = Collection::new(profiles).unwrap();
        let excursion = Excursion {
            start: LookAngle::new(285.0),
            end: LookAngle::new(75.0),
            peak_angle: LookAngle::new(0.0),
            peak_norm: 3.0,
            full_circle: false,
        };
        let feature = classify(&coll, &excursion, &FeatureParams::default()).unwrap();
        assert_eq!(feature.symmetry_score, 0.0);
        assert_eq!(feature.class, ReflectionClass::Loop);
    }

    #[test]
    fn window_must_fit_in_the_excursion() {
        let coll = flare_plus_loop_collection();
        let excursion = Excursion {
            start: LookAngle::new(88.0),
            end: LookAngle::new(92.0),
            peak_angle: LookAngle::new(90.0),
            peak_norm: 1.0,
            full_circle: false,
        };
        let params = FeatureParams { half_window: 5, ..FeatureParams::default() };
        assert!(matches!(
            classify(&coll, &excursion, &params),
            Err(Error::WindowExceedsExcursion { .. })
        ));
    }

    #[test]
    fn empty_report_for_zero_collection() {
        let coll = collection_from_norm_profile(&[0.0; 8]);
        let report = feature_report(&coll, &FeatureParams::default()).unwrap();
        assert_eq!(report.noise_floor.level, 0.0);
        assert!(report.excursions.is_empty());
        assert!(report.features.is_empty());
    }

    #[test]
    fn excursions_rotate_with_the_rows() {
        let coll = flare_plus_loop_collection();
        let shift = 40usize;
        let rotated = {
            let mut profiles: Vec<EchoVector> = coll.profiles().to_vec();
            profiles.rotate_left(shift);
            Collection::new(profiles).unwrap()
        };
        let floor = estimate_noise_floor(&coll, 0.5);
        let a = detect_excursions(&coll, &floor, 3.0);
        let b = detect_excursions(&rotated, &estimate_noise_floor(&rotated, 0.5), 3.0);
        assert_eq!(a.len(), b.len());
        for (ea, eb) in a.iter().zip(&b) {
            let expected = ea.peak_angle - LookAngle::new(shift as f64);
            assert!(eb.peak_angle.circular_distance(expected) < 1e-9);
            assert_eq!(ea.peak_norm, eb.peak_norm);
        }
    }
}

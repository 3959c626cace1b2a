//! Shared test fixtures: a brute-force persistence oracle, random cloud
//! generators, and constructed collections with known topology.

#![allow(dead_code)]

use echotopo_core::persistence::{DistanceMatrix, PersistenceDiagram};
use echotopo_core::{Collection, EchoVector, LookAngle, PointCloud};
use num_complex::Complex64;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

/// Brute-force Vietoris-Rips persistence oracle.
///
/// Enumerates every simplex of dimension 0..=2, orders the whole complex by
/// `(diameter, dimension, lexicographic vertices)`, and reduces the full
/// boundary matrix column by column with no optimizations at all. Returns
/// `(dim, birth, death)` triples with zero-persistence pairs dropped, deaths
/// of essential classes as `f64::INFINITY`, only for dimensions 0 and 1.
pub fn oracle_rips(dm: &DistanceMatrix) -> Vec<(u8, f64, f64)> {
    let n = dm.size();
    let mut simplices: Vec<(f64, Vec<usize>)> = Vec::new();
    for v in 0..n {
        simplices.push((0.0, vec![v]));
    }
    for a in 0..n {
        for b in a + 1..n {
            simplices.push((dm.get(a, b), vec![a, b]));
        }
    }
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                let diam = dm.get(a, b).max(dm.get(a, c)).max(dm.get(b, c));
                simplices.push((diam, vec![a, b, c]));
            }
        }
    }
    simplices.sort_by(|(da, va), (db, vb)| {
        da.total_cmp(db).then(va.len().cmp(&vb.len())).then(va.cmp(vb))
    });

    let index: std::collections::HashMap<Vec<usize>, usize> = simplices
        .iter()
        .enumerate()
        .map(|(i, (_, v))| (v.clone(), i))
        .collect();

    // columns of the full boundary matrix, as sorted row-index lists over Z/2
    let columns: Vec<Vec<usize>> = simplices
        .iter()
        .map(|(_, verts)| {
            if verts.len() == 1 {
                return Vec::new();
            }
            let mut col: Vec<usize> = (0..verts.len())
                .map(|skip| {
                    let facet: Vec<usize> = verts
                        .iter()
                        .enumerate()
                        .filter(|(k, _)| *k != skip)
                        .map(|(_, &v)| v)
                        .collect();
                    index[&facet]
                })
                .collect();
            col.sort_unstable();
            col
        })
        .collect();

    let mut reduced: Vec<Vec<usize>> = Vec::with_capacity(columns.len());
    let mut pivot_owner: Vec<Option<usize>> = vec![None; columns.len()];
    let mut paired_with: Vec<Option<usize>> = vec![None; columns.len()];
    for (j, col) in columns.into_iter().enumerate() {
        let mut col = col;
        while let Some(&pivot) = col.last() {
            match pivot_owner[pivot] {
                Some(owner) => col = xor(&col, &reduced[owner]),
                None => break,
            }
        }
        if let Some(&pivot) = col.last() {
            pivot_owner[pivot] = Some(j);
            paired_with[pivot] = Some(j);
        }
        reduced.push(col);
    }

    let mut out = Vec::new();
    for (i, (diam, verts)) in simplices.iter().enumerate() {
        if !reduced[i].is_empty() {
            continue; // destroyer, not a creator
        }
        let dim = (verts.len() - 1) as u8;
        if dim > 1 {
            continue;
        }
        match paired_with[i] {
            Some(j) => {
                let death = simplices[j].0;
                if death > *diam {
                    out.push((dim, *diam, death));
                }
            }
            None => out.push((dim, *diam, f64::INFINITY)),
        }
    }
    sort_triples(&mut out);
    out
}

fn xor(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

pub fn sort_triples(triples: &mut [(u8, f64, f64)]) {
    triples.sort_by(|a, b| {
        a.0.cmp(&b.0).then(a.1.total_cmp(&b.1)).then(a.2.total_cmp(&b.2))
    });
}

pub fn diagram_triples(diagram: &PersistenceDiagram) -> Vec<(u8, f64, f64)> {
    let mut out: Vec<(u8, f64, f64)> =
        diagram.pairs().iter().map(|p| (p.dim, p.birth, p.death)).collect();
    sort_triples(&mut out);
    out
}

/// Kruskal MST edge weights, ascending.
pub fn mst_weights(dm: &DistanceMatrix) -> Vec<f64> {
    let n = dm.size();
    let mut edges: Vec<(f64, usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .map(|(i, j)| (dm.get(i, j), i, j))
        .collect();
    edges.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut weights = Vec::new();
    for (w, i, j) in edges {
        let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
        if ri != rj {
            parent[ri] = rj;
            weights.push(w);
        }
    }
    weights.sort_by(f64::total_cmp);
    weights
}

pub fn random_cloud(rng: &mut ChaCha8Rng, max_points: usize, min_points: usize) -> PointCloud {
    let n = rng.random_range(min_points..=max_points);
    let d = rng.random_range(2..=5);
    let points = (0..n)
        .map(|_| (0..d).map(|_| rng.random_range(-1.0..1.0)).collect())
        .collect();
    PointCloud::new(points).unwrap()
}

/// A truncated Gaussian bump of look angle, exactly zero outside `support`.
pub fn bump(center_deg: f64, width_deg: f64, support_deg: f64, theta: LookAngle) -> f64 {
    let d = theta.circular_distance(LookAngle::new(center_deg));
    if d > support_deg {
        0.0
    } else {
        (-(d / width_deg).powi(2)).exp()
    }
}

/// Where to place one synthetic reflection and how it behaves.
#[derive(Clone, Copy)]
pub enum SyntheticFeature {
    /// Mirror-symmetric bump occupying one complex bin: a flare.
    Flare { center_deg: f64 },
    /// Two lobes offset around the centre in two bins: leaves the origin on
    /// one axis and returns on the other, so the image is a loop.
    Loop { center_deg: f64 },
}

pub const SYNTH_WIDTH_DEG: f64 = 6.0;
pub const SYNTH_SUPPORT_DEG: f64 = 24.0;
pub const SYNTH_LOBE_OFFSET_DEG: f64 = 5.0;

/// Builds a noiseless collection containing the given features, each in its
/// own range bins so their echo-space shapes attach to the origin wedge-style.
pub fn synthetic_collection(n_angles: usize, features: &[SyntheticFeature]) -> Collection {
    let n_bins: usize = features
        .iter()
        .map(|f| match f {
            SyntheticFeature::Flare { .. } => 1,
            SyntheticFeature::Loop { .. } => 2,
        })
        .sum();
    let profiles = (0..n_angles)
        .map(|i| {
            let theta = LookAngle::new(i as f64 * 360.0 / n_angles as f64);
            let mut samples = Vec::with_capacity(n_bins);
            for f in features {
                match *f {
                    SyntheticFeature::Flare { center_deg } => {
                        let g = bump(center_deg, SYNTH_WIDTH_DEG, SYNTH_SUPPORT_DEG, theta);
                        samples.push(Complex64::new(g, 0.0));
                    }
                    SyntheticFeature::Loop { center_deg } => {
                        let out_lobe = bump(
                            center_deg - SYNTH_LOBE_OFFSET_DEG,
                            SYNTH_WIDTH_DEG,
                            SYNTH_SUPPORT_DEG,
                            theta,
                        );
                        let back_lobe = bump(
                            center_deg + SYNTH_LOBE_OFFSET_DEG,
                            SYNTH_WIDTH_DEG,
                            SYNTH_SUPPORT_DEG,
                            theta,
                        );
                        samples.push(Complex64::new(out_lobe, 0.0));
                        samples.push(Complex64::new(back_lobe, 0.0));
                    }
                }
            }
            EchoVector::new(samples)
        })
        .collect();
    Collection::new(profiles).unwrap()
}

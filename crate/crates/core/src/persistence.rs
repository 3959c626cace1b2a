//! Vietoris-Rips persistence in homology dimensions 0 and 1.
//!
//! A simplex enters the filtration at its diameter; simplices are ordered by
//! `(diameter, dimension, lexicographic vertex tuple)`. H0 pairs come from
//! union-find over edges sorted by length (the finite deaths are exactly the
//! minimum-spanning-tree edge weights). H1 pairs come from the standard
//! column reduction of the triangle boundary matrix over Z/2; the clearing
//! step is implicit in never reducing edge columns at all, since union-find
//! already decides which edges create cycles.
//!
//! The filtration is always truncated at the enclosing radius
//! `min_i max_j d(i, j)`: past it the complex is a cone, so no H1 class
//! survives it and all components have merged. Truncating there is exact.
//! Truncating below it (a finite `max_radius`) right-censors whatever is
//! still alive; censored classes are reported with death `+inf` and a flag.

use rayon::prelude::*;

use crate::collection::PointCloud;
use crate::error::{Error, Result};

mod union_find;
use union_find::UnionFind;

/// Symmetric nonnegative pairwise distances with a zero diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    size: usize,
    entries: Vec<f64>,
}

impl DistanceMatrix {
    /// Euclidean pairwise distances of a point cloud.
    pub fn from_cloud(cloud: &PointCloud) -> DistanceMatrix {
        let m = cloud.len();
        let mut entries = vec![0.0; m * m];
        entries
            .par_chunks_mut(m)
            .enumerate()
            .for_each(|(i, row)| {
                let pi = cloud.point(i);
                for (j, cell) in row.iter_mut().enumerate() {
                    *cell = crate::collection::euclidean(pi, cloud.point(j));
                }
            });
        DistanceMatrix { size: m, entries }
    }

    /// Wraps raw entries, checking symmetry to 1e-12 and a zero diagonal.
    pub fn from_entries(size: usize, entries: Vec<f64>) -> Result<DistanceMatrix> {
        if entries.len() != size * size {
            return Err(Error::BadDistanceMatrix);
        }
        for i in 0..size {
            if entries[i * size + i] != 0.0 {
                return Err(Error::BadDistanceMatrix);
            }
            for j in 0..i {
                let a = entries[i * size + j];
                let b = entries[j * size + i];
                if !a.is_finite() || a < 0.0 || (a - b).abs() > 1e-12 * a.abs().max(1.0) {
                    return Err(Error::BadDistanceMatrix);
                }
            }
        }
        Ok(DistanceMatrix { size, entries })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.size + j]
    }

    /// `min_i max_j d(i, j)`: the radius at which the complex becomes a cone.
    pub fn enclosing_radius(&self) -> f64 {
        (0..self.size)
            .map(|i| {
                (0..self.size)
                    .map(|j| self.get(i, j))
                    .fold(0.0, f64::max)
            })
            .fold(f64::INFINITY, f64::min)
    }
}

/// One point of a persistence diagram.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiagramPair {
    /// Homology dimension, 0 or 1.
    pub dim: u8,
    pub birth: f64,
    /// `f64::INFINITY` for essential or right-censored classes.
    pub death: f64,
    /// True when the class was still alive at a finite `max_radius`, so its
    /// true death is unknown rather than infinite.
    pub censored: bool,
}

impl DiagramPair {
    pub fn lifetime(&self) -> f64 {
        self.death - self.birth
    }

    pub fn is_infinite(&self) -> bool {
        self.death.is_infinite()
    }
}

/// Multiset of (dim, birth, death) persistence pairs; zero-persistence pairs
/// are dropped at construction.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PersistenceDiagram {
    pairs: Vec<DiagramPair>,
}

/// Finite lifetimes in descending order plus the count of infinite classes.
#[derive(Debug, Clone, PartialEq)]
pub struct Lifetimes {
    pub finite: Vec<f64>,
    pub infinite: usize,
}

impl PersistenceDiagram {
    pub fn new(mut pairs: Vec<DiagramPair>) -> PersistenceDiagram {
        pairs.sort_by(|a, b| {
            (a.dim, a.birth, a.death)
                .partial_cmp(&(b.dim, b.birth, b.death))
                .expect("diagram entries are never NaN")
        });
        PersistenceDiagram { pairs }
    }

    pub fn pairs(&self) -> &[DiagramPair] {
        &self.pairs
    }

    pub fn pairs_in_dim(&self, dim: u8) -> impl Iterator<Item = &DiagramPair> {
        self.pairs.iter().filter(move |p| p.dim == dim)
    }

    /// Descending finite lifetimes for `dim`; infinite pairs counted apart.
    pub fn lifetimes(&self, dim: u8) -> Lifetimes {
        let mut finite = Vec::new();
        let mut infinite = 0;
        for p in self.pairs_in_dim(dim) {
            if p.is_infinite() {
                infinite += 1;
            } else {
                finite.push(p.lifetime());
            }
        }
        finite.sort_by(|a, b| b.total_cmp(a));
        Lifetimes { finite, infinite }
    }

    /// Counts the classes separated from the rest by a multiplicative
    /// lifetime gap of at least `ratio`.
    ///
    /// Finite lifetimes are scanned in descending order; the count is the
    /// largest `k` such that `lifetime_k >= ratio * lifetime_{k+1}` with all
    /// of the first `k` lifetimes at or above the `noise_quantile` of the
    /// lifetime distribution (the last lifetime trivially satisfies the gap).
    /// Infinite classes always count as dominant. Both `ratio` and
    /// `noise_quantile` are tool knobs, not measured quantities.
    pub fn dominant_count(&self, dim: u8, ratio: f64, noise_quantile: f64) -> usize {
        assert!(ratio > 1.0, "ratio must exceed 1");
        let lt = self.lifetimes(dim);
        if lt.finite.is_empty() {
            return lt.infinite;
        }
        let m = lt.finite.len();
        // interpolated quantile of the ascending lifetimes
        let pos = noise_quantile.clamp(0.0, 1.0) * (m - 1) as f64;
        let (lo, hi) = (pos.floor() as usize, pos.ceil() as usize);
        let asc = |i: usize| lt.finite[m - 1 - i];
        let floor = asc(lo) + (pos - lo as f64) * (asc(hi) - asc(lo));
        let mut best = 0;
        for k in 1..=m {
            if lt.finite[k - 1] < floor {
                break;
            }
            let gap_ok = if k < m { lt.finite[k - 1] >= ratio * lt.finite[k] } else { true };
            if gap_ok {
                best = k;
            }
        }
        lt.infinite + best
    }
}

/// Knobs for [`rips_persistence`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RipsParams {
    /// Truncation radius; classes alive here are right-censored.
    pub max_radius: f64,
    /// Point-count cap guarding the O(m^2) matrix and simplex enumeration.
    pub max_points: usize,
}

pub const DEFAULT_MAX_POINTS: usize = 2000;
/// Default gap ratio for dominant-class counting.
pub const DEFAULT_DOMINANT_RATIO: f64 = 5.0;
/// Default noise quantile for dominant-class counting.
pub const DEFAULT_NOISE_QUANTILE: f64 = 0.5;

impl Default for RipsParams {
    fn default() -> Self {
        RipsParams { max_radius: f64::INFINITY, max_points: DEFAULT_MAX_POINTS }
    }
}

struct Edge {
    diameter: f64,
    u: u32,
    v: u32,
}

/// Vietoris-Rips persistence diagram of a distance matrix, homology
/// dimensions 0 and 1.
pub fn rips_persistence(dm: &DistanceMatrix, params: &RipsParams) -> Result<PersistenceDiagram> {
    if dm.size() > params.max_points {
        return Err(Error::MatrixTooLarge { size: dm.size(), cap: params.max_points });
    }
    if dm.size() == 0 {
        return Ok(PersistenceDiagram::default());
    }
    if params.max_radius.is_nan() || params.max_radius <= 0.0 {
        return Err(Error::BadDistanceMatrix);
    }

    // coincident points only contribute zero-persistence pairs, which are
    // dropped anyway; collapse them before enumerating simplices
    let reps = dedup_reps(dm);
    let m = reps.len();

    let enclosing = (0..m)
        .map(|i| (0..m).map(|j| dm.get(reps[i], reps[j])).fold(0.0, f64::max))
        .fold(f64::INFINITY, f64::min);
    let work_radius = params.max_radius.min(enclosing);
    let truncated = params.max_radius < enclosing;

    let mut edges: Vec<Edge> = Vec::new();
    for i in 0..m {
        for j in i + 1..m {
            let d = dm.get(reps[i], reps[j]);
            if d <= work_radius {
                edges.push(Edge { diameter: d, u: i as u32, v: j as u32 });
            }
        }
    }
    edges.sort_by(|a, b| {
        a.diameter
            .total_cmp(&b.diameter)
            .then(a.u.cmp(&b.u))
            .then(a.v.cmp(&b.v))
    });

    let mut pairs = Vec::new();

    // H0: Kruskal; merges are finite deaths, leftovers are essential classes
    let mut uf = UnionFind::new(m);
    let mut edge_creates_cycle = vec![false; edges.len()];
    for (idx, e) in edges.iter().enumerate() {
        if uf.union(e.u as usize, e.v as usize) {
            if e.diameter > 0.0 {
                pairs.push(DiagramPair { dim: 0, birth: 0.0, death: e.diameter, censored: false });
            }
        } else {
            edge_creates_cycle[idx] = true;
        }
    }
    let root0 = uf.find(0);
    for i in 0..m {
        // the class of the component holding vertex 0 survives to infinity;
        // other leftovers only exist because of truncation
        if uf.find(i) == i {
            pairs.push(DiagramPair {
                dim: 0,
                birth: 0.0,
                death: f64::INFINITY,
                censored: i != root0,
            });
        }
    }

    // H1: reduce triangle boundary columns over Z/2
    let paired_edges = reduce_triangles(dm, &reps, &edges, work_radius, &mut pairs);
    for (idx, e) in edges.iter().enumerate() {
        if edge_creates_cycle[idx] && !paired_edges[idx] {
            debug_assert!(truncated, "unpaired cycle edge in an untruncated filtration");
            pairs.push(DiagramPair {
                dim: 1,
                birth: e.diameter,
                death: f64::INFINITY,
                censored: truncated,
            });
        }
    }

    Ok(PersistenceDiagram::new(pairs))
}

fn dedup_reps(dm: &DistanceMatrix) -> Vec<usize> {
    let n = dm.size();
    let mut uf = UnionFind::new(n);
    for i in 0..n {
        for j in i + 1..n {
            if dm.get(i, j) == 0.0 {
                uf.union(i, j);
            }
        }
    }
    (0..n).filter(|&i| uf.find(i) == i).collect()
}

/// Enumerates triangles up to `work_radius`, reduces their boundary columns in
/// filtration order, and appends the resulting finite H1 pairs. Returns which
/// edges (by index into `edges`) were claimed as pivots.
fn reduce_triangles(
    dm: &DistanceMatrix,
    reps: &[usize],
    edges: &[Edge],
    work_radius: f64,
    pairs: &mut Vec<DiagramPair>,
) -> Vec<bool> {
    let m = reps.len();

    // sorted adjacency lists and edge-rank lookup under the work radius
    let mut neighbors: Vec<Vec<u32>> = vec![Vec::new(); m];
    let mut edge_rank = std::collections::HashMap::with_capacity(edges.len());
    for (rank, e) in edges.iter().enumerate() {
        neighbors[e.u as usize].push(e.v);
        neighbors[e.v as usize].push(e.u);
        edge_rank.insert((e.u, e.v), rank as u32);
    }
    for list in &mut neighbors {
        list.sort_unstable();
    }

    struct Triangle {
        diameter: f64,
        a: u32,
        b: u32,
        c: u32,
    }
    let mut triangles: Vec<Triangle> = Vec::new();
    for e in edges {
        let (a, b) = (e.u, e.v);
        // common neighbors above b keep each triangle enumerated once
        let (la, lb) = (&neighbors[a as usize], &neighbors[b as usize]);
        let (mut ia, mut ib) = (0, 0);
        while ia < la.len() && ib < lb.len() {
            match la[ia].cmp(&lb[ib]) {
                std::cmp::Ordering::Less => ia += 1,
                std::cmp::Ordering::Greater => ib += 1,
                std::cmp::Ordering::Equal => {
                    let c = la[ia];
                    if c > b {
                        let diam = e
                            .diameter
                            .max(dm.get(reps[a as usize], reps[c as usize]))
                            .max(dm.get(reps[b as usize], reps[c as usize]));
                        if diam <= work_radius {
                            triangles.push(Triangle { diameter: diam, a, b, c });
                        }
                    }
                    ia += 1;
                    ib += 1;
                }
            }
        }
    }
    triangles.sort_by(|x, y| {
        x.diameter
            .total_cmp(&y.diameter)
            .then(x.a.cmp(&y.a))
            .then(x.b.cmp(&y.b))
            .then(x.c.cmp(&y.c))
    });

    let mut paired = vec![false; edges.len()];
    // pivot edge rank -> index into `reduced`
    let mut pivot_owner: Vec<u32> = vec![u32::MAX; edges.len()];
    let mut reduced: Vec<Vec<u32>> = Vec::new();

    for t in &triangles {
        let mut col: Vec<u32> = [
            edge_rank[&(t.a, t.b)],
            edge_rank[&(t.a, t.c)],
            edge_rank[&(t.b, t.c)],
        ]
        .into();
        col.sort_unstable();

        while let Some(&pivot) = col.last() {
            let owner = pivot_owner[pivot as usize];
            if owner == u32::MAX {
                break;
            }
            col = xor_sorted(&col, &reduced[owner as usize]);
        }
        if let Some(&pivot) = col.last() {
            pivot_owner[pivot as usize] = reduced.len() as u32;
            reduced.push(col);
            paired[pivot as usize] = true;
            let birth = edges[pivot as usize].diameter;
            if t.diameter > birth {
                pairs.push(DiagramPair { dim: 1, birth, death: t.diameter, censored: false });
            }
        }
    }
    paired
}

/// Symmetric difference of two ascending index lists (Z/2 column addition).
fn xor_sorted(a: &[u32], b: &[u32]) -> Vec<u32> {
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

#[cfg(test)]
mod tests {
    use super::*;

    fn cloud(points: Vec<Vec<f64>>) -> PointCloud {
        PointCloud::new(points).unwrap()
    }

    fn diagram(points: Vec<Vec<f64>>) -> PersistenceDiagram {
        rips_persistence(&DistanceMatrix::from_cloud(&cloud(points)), &RipsParams::default())
            .unwrap()
    }

    fn sorted_tuples(d: &PersistenceDiagram) -> Vec<(u8, f64, f64)> {
        d.pairs().iter().map(|p| (p.dim, p.birth, p.death)).collect()
    }

    #[test]
    fn single_point() {
        let d = diagram(vec![vec![0.0, 0.0]]);
        assert_eq!(sorted_tuples(&d), vec![(0, 0.0, f64::INFINITY)]);
    }

    #[test]
    fn two_points_merge_at_their_distance() {
        let d = diagram(vec![vec![0.0, 0.0], vec![3.0, 4.0]]);
        assert_eq!(sorted_tuples(&d), vec![(0, 0.0, 5.0), (0, 0.0, f64::INFINITY)]);
    }

    #[test]
    fn distance_matrix_basics() {
        let dm = DistanceMatrix::from_cloud(&cloud(vec![
            vec![0.0, 0.0],
            vec![1.0, 0.0],
            vec![1.0, 1.0],
            vec![0.0, 1.0],
        ]));
        let mut off: Vec<f64> = (0..4)
            .flat_map(|i| (i + 1..4).map(move |j| (i, j)))
            .map(|(i, j)| dm.get(i, j))
            .collect();
        off.sort_by(f64::total_cmp);
        let rt2 = 2.0_f64.sqrt();
        assert_eq!(off, vec![1.0, 1.0, 1.0, 1.0, rt2, rt2]);
        assert!(DistanceMatrix::from_entries(2, vec![0.0, 1.0, 2.0, 0.0]).is_err());
        assert!(DistanceMatrix::from_entries(2, vec![0.5, 1.0, 1.0, 0.0]).is_err());
        assert!(DistanceMatrix::from_entries(2, vec![0.0, 1.0, 1.0, 0.0]).is_ok());
    }

    #[test]
    fn unit_square_diagram() {
        let d = diagram(vec![
            vec![0.0, 0.0],
            vec![1.0, 0.0],
            vec![1.0, 1.0],
            vec![0.0, 1.0],
        ]);
        let rt2 = 2.0_f64.sqrt();
        let h0: Vec<_> = d.pairs_in_dim(0).collect();
        let h1: Vec<_> = d.pairs_in_dim(1).collect();
        assert_eq!(h0.len(), 4);
        assert_eq!(h0.iter().filter(|p| p.is_infinite()).count(), 1);
        for p in h0.iter().filter(|p| !p.is_infinite()) {
            assert_eq!((p.birth, p.death), (0.0, 1.0));
        }
        assert_eq!(h1.len(), 1);
        assert_eq!((h1[0].birth, h1[0].death), (1.0, rt2));
    }

    #[test]
    fn equilateral_triangle_has_no_surviving_h1() {
        let s = 3.0_f64.sqrt();
        let d = rips_persistence(
            &DistanceMatrix::from_entries(3, vec![0.0, s, s, s, 0.0, s, s, s, 0.0]).unwrap(),
            &RipsParams::default(),
        )
        .unwrap();
        assert_eq!(d.pairs_in_dim(1).count(), 0);
        let finite: Vec<f64> =
            d.pairs_in_dim(0).filter(|p| !p.is_infinite()).map(|p| p.death).collect();
        assert_eq!(finite, vec![s, s]);
    }

    #[test]
    fn duplicate_points_change_nothing() {
        let base = diagram(vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![1.0, 1.0], vec![0.0, 1.0]]);
        let dup = diagram(vec![
            vec![0.0, 0.0],
            vec![0.0, 0.0],
            vec![1.0, 0.0],
            vec![1.0, 1.0],
            vec![0.0, 1.0],
            vec![1.0, 1.0],
        ]);
        assert_eq!(sorted_tuples(&base), sorted_tuples(&dup));
    }

    #[test]
    fn truncation_censors_live_classes() {
        let d = rips_persistence(
            &DistanceMatrix::from_cloud(&cloud(vec![vec![0.0], vec![5.0]])),
            &RipsParams { max_radius: 2.0, ..Default::default() },
        )
        .unwrap();
        let pairs = d.pairs();
        assert_eq!(pairs.len(), 2);
        assert!(pairs.iter().all(|p| p.dim == 0 && p.is_infinite()));
        assert_eq!(pairs.iter().filter(|p| p.censored).count(), 1);

        // a hexagon whose loop is still alive at the truncation radius
        let hex: Vec<Vec<f64>> = (0..6)
            .map(|i| {
                let t = i as f64 / 6.0 * std::f64::consts::TAU;
                vec![t.cos(), t.sin()]
            })
            .collect();
        let censored = rips_persistence(
            &DistanceMatrix::from_cloud(&cloud(hex.clone())),
            &RipsParams { max_radius: 1.2, ..Default::default() },
        )
        .unwrap();
        let h1: Vec<_> = censored.pairs_in_dim(1).collect();
        assert_eq!(h1.len(), 1);
        assert!(h1[0].censored && h1[0].is_infinite());

        let full = rips_persistence(
            &DistanceMatrix::from_cloud(&cloud(hex)),
            &RipsParams::default(),
        )
        .unwrap();
        let h1: Vec<_> = full.pairs_in_dim(1).collect();
        assert_eq!(h1.len(), 1);
        assert!(!h1[0].censored && h1[0].death.is_finite());
    }

    #[test]
    fn point_cap_is_enforced() {
        let dm = DistanceMatrix::from_cloud(&cloud(vec![vec![0.0], vec![1.0], vec![2.0]]));
        let err = rips_persistence(&dm, &RipsParams { max_points: 2, ..Default::default() })
            .unwrap_err();
        assert!(matches!(err, Error::MatrixTooLarge { size: 3, cap: 2 }));
    }

    #[test]
    fn permuting_points_leaves_the_diagram() {
        let pts = vec![
            vec![0.0, 0.0],
            vec![2.0, 0.1],
            vec![1.0, 1.7],
            vec![-0.4, 1.1],
            vec![0.9, -0.8],
        ];
        let mut permuted = pts.clone();
        permuted.rotate_left(2);
        permuted.swap(0, 3);
        assert_eq!(sorted_tuples(&diagram(pts)), sorted_tuples(&diagram(permuted)));
    }

    #[test]
    fn scaling_distances_scales_the_diagram() {
        let pts = vec![vec![0.0, 0.0], vec![1.0, 0.2], vec![0.3, 0.9], vec![-0.5, 0.4]];
        let c = 3.5;
        let dm = DistanceMatrix::from_cloud(&cloud(pts));
        let scaled = DistanceMatrix::from_entries(
            dm.size(),
            dm.entries.iter().map(|d| c * d).collect(),
        )
        .unwrap();
        let base = rips_persistence(&dm, &RipsParams::default()).unwrap();
        let big = rips_persistence(&scaled, &RipsParams::default()).unwrap();
        for (a, b) in base.pairs().iter().zip(big.pairs()) {
            assert_eq!(a.dim, b.dim);
            assert_eq!(c * a.birth, b.birth);
            if a.is_infinite() {
                assert!(b.is_infinite());
            } else {
                assert_eq!(c * a.death, b.death);
            }
        }
    }

    #[test]
    fn lifetimes_are_sorted_and_split() {
        let d = diagram(vec![
            vec![0.0, 0.0],
            vec![1.0, 0.0],
            vec![1.0, 1.0],
            vec![0.0, 1.0],
        ]);
        let h1 = d.lifetimes(1);
        assert_eq!(h1.infinite, 0);
        assert_eq!(h1.finite, vec![2.0_f64.sqrt() - 1.0]);
        let h0 = d.lifetimes(0);
        assert_eq!(h0.infinite, 1);
        assert_eq!(h0.finite, vec![1.0, 1.0, 1.0]);
        let empty = PersistenceDiagram::default();
        assert_eq!(empty.lifetimes(1), Lifetimes { finite: vec![], infinite: 0 });
    }

    #[test]
    fn dominant_count_cases() {
        let dgm = |lifetimes: &[f64]| {
            PersistenceDiagram::new(
                lifetimes
                    .iter()
                    .map(|&l| DiagramPair { dim: 1, birth: 1.0, death: 1.0 + l, censored: false })
                    .collect(),
            )
        };
        assert_eq!(dgm(&[10.0, 9.0, 0.1]).dominant_count(1, 5.0, 0.5), 2);
        assert_eq!(dgm(&[10.0]).dominant_count(1, 5.0, 0.5), 1);
        assert_eq!(dgm(&[]).dominant_count(1, 5.0, 0.5), 0);
        // an infinite class is dominant regardless of the finite tail
        let mut pairs = vec![DiagramPair { dim: 1, birth: 0.5, death: f64::INFINITY, censored: true }];
        pairs.extend((0..4).map(|i| DiagramPair {
            dim: 1,
            birth: 1.0,
            death: 1.01 + 0.001 * i as f64,
            censored: false,
        }));
        assert_eq!(PersistenceDiagram::new(pairs).dominant_count(1, 5.0, 0.5), 1);
    }
}

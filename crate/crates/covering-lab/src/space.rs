//! Finite metric measure spaces: builders, balls, blossoms, critical radii.
//!
//! A [`Space`] is a validated finite point set with a metric and nonnegative
//! rational point weights. Builder spaces (grids, nets, polygons) carry exact
//! distances; explicit float matrices and `l2` point clouds use the
//! tolerance-based comparison mode of [`CmpMode::approx_default`].
//!
//! Every set-valued function of a radius `r` built from open balls is
//! piecewise constant between consecutive pairwise distances, so suprema over
//! continuous radii reduce to finitely many evaluations at interval
//! representatives; [`CriticalRadii`] and [`interval_representatives`] supply
//! those.

use crate::rational::{q, q_from_f64, CmpMode, Q};
use crate::set::PointSet;
use crate::{Error, Result};
use num::traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use std::collections::BTreeSet;

/// Whether a ball includes its boundary sphere.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Closure {
    Open,
    Closed,
}

/// A ball given by center index, positive radius and closure.
#[derive(Debug, Clone, PartialEq)]
pub struct Ball {
    pub center: usize,
    pub radius: Q,
    pub closure: Closure,
}

impl Ball {
    pub fn open(center: usize, radius: Q) -> Ball {
        assert!(radius.is_positive(), "ball radius must be positive");
        Ball {
            center,
            radius,
            closure: Closure::Open,
        }
    }

    pub fn closed(center: usize, radius: Q) -> Ball {
        assert!(radius.is_positive(), "ball radius must be positive");
        Ball {
            center,
            radius,
            closure: Closure::Closed,
        }
    }
}

/// Norms available for coordinate-based spaces.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Norm {
    Linf,
    L1,
    L2,
}

impl Norm {
    pub fn name(&self) -> &'static str {
        match self {
            Norm::Linf => "linf",
            Norm::L1 => "l1",
            Norm::L2 => "l2",
        }
    }

    pub fn parse(s: &str) -> Result<Norm> {
        match s {
            "linf" => Ok(Norm::Linf),
            "l1" => Ok(Norm::L1),
            "l2" => Ok(Norm::L2),
            other => Err(Error::Parse {
                context: "norm".into(),
                message: format!("unknown norm {other:?}, expected linf, l1 or l2"),
            }),
        }
    }
}

/// Declarative description of a buildable space.
#[derive(Debug, Clone)]
pub enum SpaceSpec {
    /// Integer grid `[-half_width, half_width]^dim` with the sup metric and
    /// counting measure, except for the weight placed at the origin.
    GridZd {
        dim: u32,
        half_width: u32,
        origin_weight: Q,
    },
    /// Explicit symmetric row-major matrix plus weights. `approx` selects the
    /// tolerance comparison mode for matrices of floating-point provenance.
    DistanceMatrix {
        dist: Vec<Q>,
        weights: Vec<Q>,
        approx: bool,
    },
    /// The union of the two unit segments `{0} x [0,1]` and `[0,1] x {0}`
    /// sampled at multiples of `pitch`, with the sup metric and counting
    /// measure. `pitch` must divide 1.
    LshapeNet { pitch: Q },
    /// Vertices of a regular polygon inscribed in the unit circle with the
    /// chordal (Euclidean) metric and counting measure. Chord lengths are
    /// floating point, so the space uses tolerance comparisons.
    NgonChordal { sides: usize },
    /// Points {0, 1, 3} on the line with the point mass at 3.
    ThreePointDelta,
    /// Arbitrary rational points under the given norm, with the given
    /// weights.
    Points {
        points: Vec<Vec<Q>>,
        norm: Norm,
        weights: Vec<Q>,
    },
}

#[derive(Debug, Clone)]
enum MetricData {
    Matrix(Vec<Q>),
    Coords {
        points: Vec<Vec<Q>>,
        int_points: Option<Vec<Vec<i64>>>,
        norm: Norm,
    },
}

/// One group of equidistant neighbors in a center's sorted distance list.
#[derive(Debug, Clone)]
struct Run {
    dist: Q,
    /// Number of points at distance `<= dist` from the center.
    end: usize,
    /// Measure of those points.
    cum_weight: Q,
}

#[derive(Debug, Clone)]
struct Neighbors {
    /// All point indices sorted by distance from the center (ties by index).
    order: Vec<u32>,
    runs: Vec<Run>,
}

#[derive(Debug, Clone)]
enum WeightProfile {
    /// Every point has the same weight.
    Uniform(Q),
    /// Uniform except for a few points.
    Except {
        base: Q,
        exceptions: Vec<(usize, Q)>,
    },
    General,
}

/// An immutable finite metric measure space.
///
/// All operations are pure; a `Space` can be shared freely across threads.
#[derive(Debug, Clone)]
pub struct Space {
    n: usize,
    weights: Vec<Q>,
    labels: Option<Vec<Vec<Q>>>,
    cmp: CmpMode,
    metric: MetricData,
    neighbors: Vec<Neighbors>,
    critical: Vec<Q>,
    total: Q,
    profile: WeightProfile,
    support: PointSet,
}

/// Builds and validates a space from its specification.
pub fn build_space(spec: &SpaceSpec) -> Result<Space> {
    match spec {
        SpaceSpec::GridZd {
            dim,
            half_width,
            origin_weight,
        } => build_grid(*dim, *half_width, origin_weight),
        SpaceSpec::DistanceMatrix {
            dist,
            weights,
            approx,
        } => Space::from_matrix(dist.clone(), weights.clone(), *approx, None),
        SpaceSpec::LshapeNet { pitch } => build_lshape(pitch),
        SpaceSpec::NgonChordal { sides } => build_ngon(*sides),
        SpaceSpec::ThreePointDelta => {
            let points = vec![vec![q(0)], vec![q(1)], vec![q(3)]];
            Space::from_points(points, Norm::Linf, vec![q(0), q(0), q(1)])
        }
        SpaceSpec::Points {
            points,
            norm,
            weights,
        } => Space::from_points(points.clone(), *norm, weights.clone()),
    }
}

fn build_grid(dim: u32, half_width: u32, origin_weight: &Q) -> Result<Space> {
    if dim < 1 {
        return Err(Error::InvalidSpec(
            "grid dimension must be at least 1".into(),
        ));
    }
    if origin_weight.is_negative() {
        return Err(Error::InvalidSpec(
            "origin weight must be nonnegative".into(),
        ));
    }
    let side = 2 * half_width as u64 + 1;
    let count = side
        .checked_pow(dim)
        .filter(|&c| c <= (1 << 31))
        .ok_or_else(|| Error::InvalidSpec(format!("grid with {side}^{dim} points is too large")))?;
    let hw = half_width as i64;
    let mut points = Vec::with_capacity(count as usize);
    let mut coords = vec![-hw; dim as usize];
    loop {
        points.push(coords.clone());
        // Advance odometer, last coordinate fastest.
        let mut k = dim as usize;
        loop {
            if k == 0 {
                break;
            }
            k -= 1;
            coords[k] += 1;
            if coords[k] <= hw {
                break;
            }
            coords[k] = -hw;
            if k == 0 {
                return finish_grid(points, origin_weight);
            }
        }
        if points.len() as u64 == count {
            return finish_grid(points, origin_weight);
        }
    }
}

fn finish_grid(points: Vec<Vec<i64>>, origin_weight: &Q) -> Result<Space> {
    let n = points.len();
    let origin = points
        .iter()
        .position(|p| p.iter().all(|&c| c == 0))
        .unwrap();
    let mut weights = vec![q(1); n];
    weights[origin] = origin_weight.clone();
    let labels: Vec<Vec<Q>> = points
        .iter()
        .map(|p| p.iter().map(|&c| q(c)).collect())
        .collect();
    Space::assemble(
        MetricData::Coords {
            points: labels.clone(),
            int_points: Some(points),
            norm: Norm::Linf,
        },
        weights,
        Some(labels),
        CmpMode::Exact,
    )
}

fn build_lshape(pitch: &Q) -> Result<Space> {
    if !pitch.is_positive() || *pitch > q(1) {
        return Err(Error::InvalidSpec("lshape pitch must lie in (0, 1]".into()));
    }
    let inv = q(1) / pitch;
    if !inv.is_integer() {
        return Err(Error::InvalidSpec(format!(
            "lshape pitch must divide 1, got {pitch}"
        )));
    }
    let m = inv.to_integer().to_i64().unwrap();
    let mut points = Vec::new();
    for k in 0..=m {
        points.push(vec![q(k) * pitch, q(0)]);
    }
    for k in 1..=m {
        points.push(vec![q(0), q(k) * pitch]);
    }
    let n = points.len();
    Space::from_points(points, Norm::Linf, vec![q(1); n])
}

fn build_ngon(sides: usize) -> Result<Space> {
    if sides < 3 {
        return Err(Error::InvalidSpec(
            "polygon needs at least 3 vertices".into(),
        ));
    }
    let mut points = Vec::with_capacity(sides);
    for k in 0..sides {
        let theta = 2.0 * std::f64::consts::PI * k as f64 / sides as f64;
        let x = q_from_f64(theta.cos()).unwrap();
        let y = q_from_f64(theta.sin()).unwrap();
        points.push(vec![x, y]);
    }
    let weights = vec![q(1); sides];
    let metric = MetricData::Coords {
        points: points.clone(),
        int_points: None,
        norm: Norm::L2,
    };
    Space::assemble(metric, weights, Some(points), CmpMode::approx_default())
}

impl Space {
    /// Space from rational coordinates. `l2` distances go through floating
    /// point square roots, so such spaces use tolerance comparisons.
    pub fn from_points(points: Vec<Vec<Q>>, norm: Norm, weights: Vec<Q>) -> Result<Space> {
        let n = points.len();
        if n == 0 {
            return Err(Error::InvalidSpec(
                "a space needs at least one point".into(),
            ));
        }
        let dim = points[0].len();
        if dim == 0 || points.iter().any(|p| p.len() != dim) {
            return Err(Error::InvalidSpec(
                "all points must share one positive dimension".into(),
            ));
        }
        if weights.len() != n {
            return Err(Error::InvalidSpec(format!(
                "{} weights for {} points",
                weights.len(),
                n
            )));
        }
        let int_points = if norm == Norm::L2 {
            None
        } else {
            points
                .iter()
                .map(|p| {
                    p.iter()
                        .map(|c| {
                            if c.is_integer() {
                                c.to_integer().to_i64()
                            } else {
                                None
                            }
                        })
                        .collect::<Option<Vec<i64>>>()
                })
                .collect::<Option<Vec<Vec<i64>>>>()
        };
        let cmp = if norm == Norm::L2 {
            CmpMode::approx_default()
        } else {
            CmpMode::Exact
        };
        let metric = MetricData::Coords {
            points: points.clone(),
            int_points,
            norm,
        };
        Space::assemble(metric, weights, Some(points), cmp)
    }

    /// Space from an explicit row-major symmetric matrix. Metric axioms are
    /// validated here; the error names the offending entry or triple.
    pub fn from_matrix(
        dist: Vec<Q>,
        weights: Vec<Q>,
        approx: bool,
        labels: Option<Vec<Vec<Q>>>,
    ) -> Result<Space> {
        let n = weights.len();
        if n == 0 {
            return Err(Error::InvalidSpec(
                "a space needs at least one point".into(),
            ));
        }
        if dist.len() != n * n {
            return Err(Error::InvalidSpec(format!(
                "distance matrix has {} entries, expected {}",
                dist.len(),
                n * n
            )));
        }
        let cmp = if approx {
            CmpMode::approx_default()
        } else {
            CmpMode::Exact
        };
        for i in 0..n {
            if !dist[i * n + i].is_zero() {
                return Err(Error::NonzeroDiagonal {
                    i,
                    value: crate::rational::format_q(&dist[i * n + i]),
                });
            }
            for j in 0..n {
                if dist[i * n + j].is_negative() {
                    return Err(Error::NegativeDistance {
                        i,
                        j,
                        value: crate::rational::format_q(&dist[i * n + j]),
                    });
                }
                if i < j && dist[i * n + j] != dist[j * n + i] {
                    return Err(Error::NotSymmetric {
                        i,
                        j,
                        a: crate::rational::format_q(&dist[i * n + j]),
                        b: crate::rational::format_q(&dist[j * n + i]),
                    });
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let sum = &dist[i * n + k] + &dist[k * n + j];
                    if !cmp.le(&dist[i * n + j], &sum) {
                        return Err(Error::TriangleViolation {
                            i,
                            j,
                            k,
                            dij: crate::rational::format_q(&dist[i * n + j]),
                            dik: crate::rational::format_q(&dist[i * n + k]),
                            dkj: crate::rational::format_q(&dist[k * n + j]),
                        });
                    }
                }
            }
        }
        Space::assemble(MetricData::Matrix(dist), weights, labels, cmp)
    }

    fn assemble(
        metric: MetricData,
        weights: Vec<Q>,
        labels: Option<Vec<Vec<Q>>>,
        cmp: CmpMode,
    ) -> Result<Space> {
        let n = weights.len();
        for (i, w) in weights.iter().enumerate() {
            if w.is_negative() {
                return Err(Error::NegativeWeight {
                    i,
                    value: crate::rational::format_q(w),
                });
            }
        }
        let mut space = Space {
            n,
            weights,
            labels,
            cmp,
            metric,
            neighbors: Vec::new(),
            critical: Vec::new(),
            total: Q::zero(),
            profile: WeightProfile::General,
            support: PointSet::empty(n),
        };
        space.total = space.weights.iter().sum();
        for (i, w) in space.weights.iter().enumerate() {
            if w.is_positive() {
                space.support.insert(i);
            }
        }
        space.profile = derive_profile(&space.weights);
        let neighbors: Vec<Neighbors> = (0..n)
            .into_par_iter()
            .map(|i| space.build_neighbors(i))
            .collect();
        space.neighbors = neighbors;
        // Identity of indiscernibles: coincident distinct points would break
        // the reduction of radius suprema to singleton-based prefixes.
        for (i, nb) in space.neighbors.iter().enumerate() {
            let first = &nb.runs[0];
            if first.dist.is_zero() && first.end > 1 {
                let j = nb.order[..first.end]
                    .iter()
                    .map(|&v| v as usize)
                    .find(|&v| v != i)
                    .expect("a second point shares the zero-distance run");
                return Err(Error::ZeroDistance {
                    i: i.min(j),
                    j: i.max(j),
                });
            }
        }
        let mut all = BTreeSet::new();
        for nb in &space.neighbors {
            for run in &nb.runs {
                if run.dist.is_positive() {
                    all.insert(run.dist.clone());
                }
            }
        }
        let mut critical: Vec<Q> = Vec::new();
        for d in all {
            match critical.last() {
                Some(last) if space.cmp.eq(last, &d) => {}
                _ => critical.push(d),
            }
        }
        space.critical = critical;
        Ok(space)
    }

    fn build_neighbors(&self, center: usize) -> Neighbors {
        let mut pairs: Vec<(Q, u32)> = (0..self.n)
            .map(|j| (self.dist(center, j), j as u32))
            .collect();
        pairs.sort();
        let mut order = Vec::with_capacity(self.n);
        let mut runs: Vec<Run> = Vec::new();
        let mut cum = Q::zero();
        for (d, j) in pairs {
            cum += &self.weights[j as usize];
            order.push(j);
            let merge = matches!(runs.last(), Some(last) if self.cmp.eq(&last.dist, &d));
            if merge {
                let last = runs.last_mut().unwrap();
                last.end = order.len();
                last.cum_weight = cum.clone();
            } else {
                runs.push(Run {
                    dist: d,
                    end: order.len(),
                    cum_weight: cum.clone(),
                });
            }
        }
        Neighbors { order, runs }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn cmp_mode(&self) -> &CmpMode {
        &self.cmp
    }

    pub fn weights(&self) -> &[Q] {
        &self.weights
    }

    pub fn total_measure(&self) -> &Q {
        &self.total
    }

    /// Points of positive weight.
    pub fn support(&self) -> &PointSet {
        &self.support
    }

    pub fn labels(&self) -> Option<&[Vec<Q>]> {
        self.labels.as_deref()
    }

    pub fn label(&self, i: usize) -> Option<&[Q]> {
        self.labels.as_ref().map(|l| l[i].as_slice())
    }

    /// Index of the point with the given coordinate label, if any.
    pub fn point_with_label(&self, coords: &[Q]) -> Option<usize> {
        let labels = self.labels.as_ref()?;
        labels.iter().position(|l| l.as_slice() == coords)
    }

    /// The norm of a coordinate-backed space, `None` for matrix spaces.
    pub fn coord_norm(&self) -> Option<Norm> {
        match &self.metric {
            MetricData::Coords { norm, .. } => Some(*norm),
            MetricData::Matrix(_) => None,
        }
    }

    /// Coordinates of a coordinate-backed space.
    pub fn points(&self) -> Option<&[Vec<Q>]> {
        match &self.metric {
            MetricData::Coords { points, .. } => Some(points),
            MetricData::Matrix(_) => None,
        }
    }

    /// Distance between two points.
    pub fn dist(&self, i: usize, j: usize) -> Q {
        match &self.metric {
            MetricData::Matrix(m) => m[i * self.n + j].clone(),
            MetricData::Coords {
                points,
                int_points,
                norm,
            } => {
                if let Some(ints) = int_points {
                    let (a, b) = (&ints[i], &ints[j]);
                    let v = match norm {
                        Norm::Linf => a.iter().zip(b).map(|(x, y)| (x - y).abs()).max().unwrap(),
                        Norm::L1 => a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum(),
                        Norm::L2 => unreachable!(),
                    };
                    return q(v);
                }
                let (a, b) = (&points[i], &points[j]);
                match norm {
                    Norm::Linf => a
                        .iter()
                        .zip(b)
                        .map(|(x, y)| (x - y).abs())
                        .max()
                        .unwrap_or_else(Q::zero),
                    Norm::L1 => a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum(),
                    Norm::L2 => {
                        let sq: Q = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum();
                        q_from_f64(sq.to_f64().unwrap_or(f64::NAN).sqrt()).expect("finite distance")
                    }
                }
            }
        }
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if i < self.n {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange {
                index: i,
                n: self.n,
            })
        }
    }

    /// Number of points within the radius (mode-aware comparison).
    fn prefix_len(&self, center: usize, radius: &Q, closed: bool) -> usize {
        let runs = &self.neighbors[center].runs;
        // Last run whose distance is admitted by the radius.
        let mut lo = 0usize;
        let mut hi = runs.len();
        while lo < hi {
            let mid = (lo + hi) / 2;
            let admit = if closed {
                self.cmp.le(&runs[mid].dist, radius)
            } else {
                self.cmp.lt(&runs[mid].dist, radius)
            };
            if admit {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        if lo == 0 {
            0
        } else {
            runs[lo - 1].end
        }
    }

    fn prefix_measure(&self, center: usize, len: usize) -> Q {
        if len == 0 {
            return Q::zero();
        }
        let runs = &self.neighbors[center].runs;
        let idx = runs.partition_point(|r| r.end < len);
        debug_assert_eq!(runs[idx].end, len);
        runs[idx].cum_weight.clone()
    }

    pub(crate) fn ball_measure_oc(&self, center: usize, radius: &Q, closed: bool) -> Q {
        let len = self.prefix_len(center, radius, closed);
        self.prefix_measure(center, len)
    }

    pub(crate) fn ball_set_oc(&self, center: usize, radius: &Q, closed: bool) -> PointSet {
        let len = self.prefix_len(center, radius, closed);
        let mut s = PointSet::empty(self.n);
        for &j in &self.neighbors[center].order[..len] {
            s.insert(j as usize);
        }
        s
    }

    /// Distances of the runs in `x`'s sorted neighbor list, ascending,
    /// starting with 0.
    pub(crate) fn neighbor_distances(&self, x: usize) -> Vec<Q> {
        self.neighbors[x]
            .runs
            .iter()
            .map(|r| r.dist.clone())
            .collect()
    }

    /// All point indices sorted by distance from `x`.
    pub(crate) fn neighbor_order(&self, x: usize) -> &[u32] {
        &self.neighbors[x].order
    }

    /// `(prefix length, prefix measure)` pairs, one per distinct distance
    /// from `x`, in increasing distance order.
    pub(crate) fn neighbor_runs(&self, x: usize) -> impl Iterator<Item = (usize, &Q)> + '_ {
        self.neighbors[x]
            .runs
            .iter()
            .map(|r| (r.end, &r.cum_weight))
    }

    /// Point set of a ball. Open balls use strict comparison, closed balls
    /// non-strict; on approximate spaces both honor the space tolerance.
    pub fn ball(&self, ball: &Ball) -> Result<PointSet> {
        self.check_index(ball.center)?;
        Ok(self.ball_set_oc(ball.center, &ball.radius, ball.closure == Closure::Closed))
    }

    /// Measure of a ball without materializing the point set.
    pub fn ball_measure(&self, ball: &Ball) -> Result<Q> {
        self.check_index(ball.center)?;
        Ok(self.ball_measure_oc(ball.center, &ball.radius, ball.closure == Closure::Closed))
    }

    /// Measure of an arbitrary point set.
    pub fn measure(&self, s: &PointSet) -> Q {
        assert_eq!(s.universe(), self.n, "point set over a different space");
        match &self.profile {
            WeightProfile::Uniform(w) => w * q(s.len() as i64),
            WeightProfile::Except { base, exceptions } => {
                let mut m = base * q(s.len() as i64);
                for (i, w) in exceptions {
                    if s.contains(*i) {
                        m += w - base;
                    }
                }
                m
            }
            WeightProfile::General => s.iter().map(|i| self.weights[i].clone()).sum(),
        }
    }

    /// Union of open `radius`-balls centered at the points of `s`.
    pub fn blossom(&self, s: &PointSet, radius: &Q) -> PointSet {
        assert!(radius.is_positive(), "blossom radius must be positive");
        let mut out = PointSet::empty(self.n);
        for x in s.iter() {
            let len = self.prefix_len(x, radius, false);
            for &j in &self.neighbors[x].order[..len] {
                out.insert(j as usize);
            }
        }
        out
    }

    /// Union of the open `radius`-balls (centers anywhere in the space) that
    /// contain a point of `s`. Always contains [`Space::blossom`] of `s`.
    pub fn uncentered_blossom(&self, s: &PointSet, radius: &Q) -> PointSet {
        assert!(radius.is_positive(), "blossom radius must be positive");
        let mut out = PointSet::empty(self.n);
        for y in 0..self.n {
            let len = self.prefix_len(y, radius, false);
            let order = &self.neighbors[y].order[..len];
            if order.iter().any(|&j| s.contains(j as usize)) {
                for &j in order {
                    out.insert(j as usize);
                }
            }
        }
        out
    }

    /// Membership of a single point in `blossom(s, radius)` without building
    /// the blossom.
    pub fn blossom_contains(&self, s: &PointSet, radius: &Q, point: usize) -> bool {
        s.iter().any(|x| self.cmp.lt(&self.dist(x, point), radius))
    }

    /// Sorted distinct positive pairwise distances plus the radius sampler.
    pub fn critical_radii(&self) -> CriticalRadii {
        CriticalRadii {
            distances: self.critical.clone(),
            cmp: self.cmp.clone(),
        }
    }

    /// `min_z max(d(x,z), d(z,y)) - d(x,y)/2`, the defect of the best
    /// approximate midpoint available in the space. Zero exactly when an
    /// exact midpoint exists.
    pub fn midpoint_defect(&self, x: usize, y: usize) -> Result<Q> {
        self.check_index(x)?;
        self.check_index(y)?;
        if x == y {
            return Err(Error::Domain(
                "midpoint defect needs two distinct points".into(),
            ));
        }
        let dxy = self.dist(x, y);
        let best = (0..self.n)
            .map(|z| {
                let a = self.dist(x, z);
                let b = self.dist(z, y);
                if a > b {
                    a
                } else {
                    b
                }
            })
            .min()
            .expect("nonempty space");
        Ok(best - dxy / q(2))
    }
}

fn derive_profile(weights: &[Q]) -> WeightProfile {
    let mut counts: Vec<(Q, usize)> = Vec::new();
    for w in weights {
        match counts.iter_mut().find(|(v, _)| v == w) {
            Some((_, c)) => *c += 1,
            None => counts.push((w.clone(), 1)),
        }
        if counts.len() > 8 {
            return WeightProfile::General;
        }
    }
    counts.sort_by_key(|(_, c)| std::cmp::Reverse(*c));
    let (base, majority) = (counts[0].0.clone(), counts[0].1);
    if majority == weights.len() {
        return WeightProfile::Uniform(base);
    }
    if weights.len() - majority <= 8 {
        let exceptions = weights
            .iter()
            .enumerate()
            .filter(|(_, w)| **w != base)
            .map(|(i, w)| (i, w.clone()))
            .collect();
        return WeightProfile::Except { base, exceptions };
    }
    WeightProfile::General
}

/// Half-open radius interval `(lo, hi]`, or `(lo, inf)` when `hi` is `None`.
/// Open-ball set functions are constant on each such interval between
/// consecutive breakpoints.
#[derive(Debug, Clone, PartialEq)]
pub struct RadiusInterval {
    pub lo: Q,
    pub hi: Option<Q>,
}

impl std::fmt::Display for RadiusInterval {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match &self.hi {
            Some(hi) => write!(
                f,
                "({}, {}]",
                crate::rational::format_q(&self.lo),
                crate::rational::format_q(hi)
            ),
            None => write!(f, "({}, inf)", crate::rational::format_q(&self.lo)),
        }
    }
}

/// Sorted distinct positive pairwise distances of a space, with a sampler
/// that produces one representative radius per constancy interval.
#[derive(Debug, Clone)]
pub struct CriticalRadii {
    distances: Vec<Q>,
    cmp: CmpMode,
}

impl CriticalRadii {
    pub fn distances(&self) -> &[Q] {
        &self.distances
    }

    /// Merges the critical distances with the extra breakpoints and returns
    /// one radius strictly inside each open interval between consecutive
    /// merged breakpoints (the leading interval `(0, b_1)` included), plus
    /// one radius above the largest breakpoint. An empty merged set yields
    /// the single radius 1.
    pub fn sample(&self, extra: &[Q]) -> Vec<Q> {
        let merged = merge_breakpoints(
            &self.cmp,
            self.distances.iter().chain(extra.iter()).cloned(),
        );
        interval_representatives(&merged)
    }
}

/// Sorts, deduplicates (mode-aware) and drops nonpositive values.
pub fn merge_breakpoints(cmp: &CmpMode, values: impl IntoIterator<Item = Q>) -> Vec<Q> {
    let mut v: Vec<Q> = values.into_iter().filter(|x| x.is_positive()).collect();
    v.sort();
    let mut out: Vec<Q> = Vec::with_capacity(v.len());
    for x in v {
        match out.last() {
            Some(last) if cmp.eq(last, &x) => {}
            _ => out.push(x),
        }
    }
    out
}

/// Interior representatives for the intervals determined by sorted
/// breakpoints `b_1 < .. < b_m`: midpoints of `(0, b_1), (b_1, b_2), ..`
/// plus `b_m + 1`. Returns `[1]` for an empty breakpoint list.
pub fn interval_representatives(breakpoints: &[Q]) -> Vec<Q> {
    if breakpoints.is_empty() {
        return vec![q(1)];
    }
    let mut reps = Vec::with_capacity(breakpoints.len() + 1);
    let mut prev = Q::zero();
    for b in breakpoints {
        reps.push((&prev + b) / q(2));
        prev = b.clone();
    }
    reps.push(prev + q(1));
    reps
}

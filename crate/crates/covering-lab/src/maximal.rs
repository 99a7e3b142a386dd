//! Centered maximal functions, weak-type profiles, and bound formulas.
//!
//! On a finite space the supremum over radii in the maximal function reduces
//! to the prefixes of each point's distance-sorted neighbor list, so values
//! are exact rationals. Level-set ratios `a mu{Mf > a}` are right-continuous
//! step functions of `a`; their supremum is approached from below at the
//! distinct values of `Mf`, which is why profiles report the left limit
//! `v mu{Mf >= v}` alongside each level.

use crate::constants::ConstantsReport;
use crate::covering::RadiiSet;
use crate::rational::{format_q, q, Q};
use crate::set::PointSet;
use crate::space::Space;
use crate::{Error, Result};
use num::traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// Per-point sample values; the measure weighs its L1 norm.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleFunction {
    pub values: Vec<Q>,
}

impl SampleFunction {
    pub fn new(values: Vec<Q>) -> SampleFunction {
        SampleFunction { values }
    }

    /// Indicator of a single point.
    pub fn delta(n: usize, at: usize) -> SampleFunction {
        let mut values = vec![Q::zero(); n];
        values[at] = Q::one();
        SampleFunction { values }
    }

    pub fn constant(n: usize, c: Q) -> SampleFunction {
        SampleFunction { values: vec![c; n] }
    }

    pub fn l1_norm(&self, space: &Space) -> Q {
        self.values
            .iter()
            .zip(space.weights())
            .map(|(v, w)| v.abs() * w)
            .sum()
    }
}

/// Values of the maximal function, with the points that admit no
/// positive-measure ball flagged (their value is 0 by convention).
#[derive(Debug, Clone)]
pub struct MaximalFunction {
    pub values: Vec<Q>,
    pub undefined: PointSet,
}

/// Centered maximal function of `|f|`; when `radii` is given the supremum is
/// restricted to those radii.
pub fn maximal_function(
    space: &Space,
    f: &SampleFunction,
    radii: Option<&RadiiSet>,
) -> Result<MaximalFunction> {
    if f.values.len() != space.len() {
        return Err(Error::InvalidParameter(format!(
            "sample function has {} values for a space with {} points",
            f.values.len(),
            space.len()
        )));
    }
    let n = space.len();
    let abs_mass: Vec<Q> = f
        .values
        .iter()
        .zip(space.weights())
        .map(|(v, w)| v.abs() * w)
        .collect();
    let carriers: Vec<usize> = (0..n).filter(|&i| abs_mass[i].is_positive()).collect();
    let cmp = space.cmp_mode();
    let per_point: Vec<Option<Q>> = (0..n)
        .into_par_iter()
        .map(|x| {
            let order = space.neighbor_order(x);
            let mut best: Option<Q> = None;
            match radii {
                None => {
                    let mut mass = Q::zero();
                    let mut pos = 0usize;
                    for (end, cum_w) in space.neighbor_runs(x) {
                        while pos < end {
                            let m = &abs_mass[order[pos] as usize];
                            if m.is_positive() {
                                mass += m;
                            }
                            pos += 1;
                        }
                        if cum_w.is_positive() {
                            let avg = &mass / cum_w;
                            if best.as_ref().is_none_or(|b| avg > *b) {
                                best = Some(avg);
                            }
                        }
                    }
                }
                Some(set) => {
                    for r in set.radii() {
                        let w = space.ball_measure_oc(x, r, false);
                        if !w.is_positive() {
                            continue;
                        }
                        let mut mass = Q::zero();
                        for &p in &carriers {
                            if cmp.lt(&space.dist(x, p), r) {
                                mass += &abs_mass[p];
                            }
                        }
                        let avg = mass / w;
                        if best.as_ref().is_none_or(|b| avg > *b) {
                            best = Some(avg);
                        }
                    }
                }
            }
            best
        })
        .collect();
    let mut values = Vec::with_capacity(n);
    let mut undefined = PointSet::empty(n);
    for (x, v) in per_point.into_iter().enumerate() {
        match v {
            Some(v) => values.push(v),
            None => {
                values.push(Q::zero());
                undefined.insert(x);
            }
        }
    }
    Ok(MaximalFunction { values, undefined })
}

/// One level of a weak-type profile.
#[derive(Debug, Clone)]
pub struct LevelRow {
    pub level: Q,
    /// `mu { Mf > level }`.
    pub mu_above: Q,
    /// `level * mu{Mf > level} / |f|_1`.
    pub ratio_above: Q,
    /// `mu { Mf >= level }`.
    pub mu_at_least: Q,
    /// Left limit `level * mu{Mf >= level} / |f|_1`.
    pub ratio_left: Q,
}

/// Level-set table of a maximal function with the supremum ratio. The
/// supremum is a certified lower bound for the weak-type norm.
#[derive(Debug, Clone)]
pub struct WeakTypeProfile {
    pub rows: Vec<LevelRow>,
    pub l1_norm: Q,
    pub supremum: Q,
    /// Smallest level whose left limit attains the supremum.
    pub level: Q,
}

pub fn weak_type_profile(
    space: &Space,
    f: &SampleFunction,
    radii: Option<&RadiiSet>,
) -> Result<WeakTypeProfile> {
    let l1 = f.l1_norm(space);
    if !l1.is_positive() {
        return Err(Error::ZeroNorm);
    }
    let mf = maximal_function(space, f, radii)?;
    let mut by_value: Vec<(Q, Q)> = mf
        .values
        .iter()
        .zip(space.weights())
        .map(|(v, w)| (v.clone(), w.clone()))
        .collect();
    by_value.sort_by(|a, b| b.0.cmp(&a.0));
    let mut rows = Vec::new();
    let mut cum = Q::zero();
    let mut i = 0;
    while i < by_value.len() {
        let level = by_value[i].0.clone();
        let mu_above = cum.clone();
        let mut j = i;
        while j < by_value.len() && by_value[j].0 == level {
            cum += &by_value[j].1;
            j += 1;
        }
        if level.is_positive() {
            rows.push(LevelRow {
                ratio_above: &level * &mu_above / &l1,
                ratio_left: &level * &cum / &l1,
                mu_at_least: cum.clone(),
                mu_above,
                level,
            });
        }
        i = j;
    }
    rows.reverse();
    let mut supremum = Q::zero();
    let mut level = Q::zero();
    for row in &rows {
        if row.ratio_left > supremum {
            supremum = row.ratio_left.clone();
            level = row.level.clone();
        }
    }
    Ok(WeakTypeProfile {
        rows,
        l1_norm: l1,
        supremum,
        level,
    })
}

/// Search strategy for [`empirical_weak_norm`].
#[derive(Debug, Clone)]
pub enum Probe {
    /// One point mass per support point.
    DeltaScan,
    /// Seeded nonnegative rational samples.
    Random { count: u32, seed: u64 },
}

/// A certified lower bound for the weak-type norm, with the sample that
/// achieved it.
#[derive(Debug, Clone)]
pub struct WeakNormEstimate {
    pub supremum: Q,
    pub best: SampleFunction,
    pub description: String,
}

pub fn empirical_weak_norm(
    space: &Space,
    probe: &Probe,
    radii: Option<&RadiiSet>,
) -> Result<WeakNormEstimate> {
    if !space.total_measure().is_positive() {
        return Err(Error::Domain(
            "weak-norm search needs positive total measure".into(),
        ));
    }
    let n = space.len();
    let mut best: Option<WeakNormEstimate> = None;
    let mut consider = |f: SampleFunction, description: String| -> Result<()> {
        let profile = weak_type_profile(space, &f, radii)?;
        if best.as_ref().is_none_or(|b| profile.supremum > b.supremum) {
            best = Some(WeakNormEstimate {
                supremum: profile.supremum,
                best: f,
                description,
            });
        }
        Ok(())
    };
    match probe {
        Probe::DeltaScan => {
            for x in space.support().iter() {
                consider(SampleFunction::delta(n, x), format!("delta at point {x}"))?;
            }
        }
        Probe::Random { count, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let anchor = space
                .support()
                .iter()
                .next()
                .expect("positive total measure");
            for trial in 0..*count {
                let mut values: Vec<Q> = (0..n).map(|_| q(rng.gen_range(0..=12)) / q(4)).collect();
                let has_mass = values
                    .iter()
                    .zip(space.weights())
                    .any(|(v, w)| v.is_positive() && w.is_positive());
                if !has_mass {
                    values[anchor] = Q::one();
                }
                consider(
                    SampleFunction::new(values),
                    format!("random sample {trial}"),
                )?;
            }
        }
    }
    Ok(best.expect("probe produced at least one sample"))
}

/// `(K+1)(C K + 1)`, the weak-type bound for lacunary radii.
pub fn sparse_bound_exact(k_blossom: &Q, c_mu: &Q) -> Q {
    (k_blossom + Q::one()) * (c_mu * k_blossom + Q::one())
}

pub fn sparse_bound(k_blossom: f64, c_mu: f64) -> f64 {
    (k_blossom + 1.0) * (c_mu * k_blossom + 1.0)
}

/// Least `N` with `(1+t)^N >= 1/t`, the number of lacunary operators needed
/// to dominate the unrestricted operator.
pub fn domination_layers(t: &Q) -> u32 {
    let target = Q::one() / t;
    let grow = Q::one() + t;
    let mut pow = Q::one();
    let mut n = 0u32;
    while pow < target {
        pow *= &grow;
        n += 1;
    }
    n
}

/// `N K^(1/2) (K+1) (C K^(1/2) + 1)` where `K^(1/2)` is the microdoubling
/// constant: the weak-type bound obtained by dominating the unrestricted
/// operator with `N` lacunary ones.
pub fn sparse_domination_bound_exact(k_micro: &Q, c_mu: &Q, t: &Q) -> Q {
    let layers = q(domination_layers(t) as i64);
    let k = k_micro * k_micro;
    layers * k_micro * (k + Q::one()) * (c_mu * k_micro + Q::one())
}

/// `(K1+1)(1 + C K1 K (2 + log K2 / log K))` with `K = max(K1, e)`: the
/// weak-type bound for unrestricted radii.
pub fn full_bound(k_blossom: f64, c_mu: f64, k2: f64) -> f64 {
    let k = k_blossom.max(std::f64::consts::E);
    (k_blossom + 1.0) * (1.0 + c_mu * k_blossom * k * (2.0 + k2.ln() / k.ln()))
}

/// `(e^(1/d) + 1)(1 + 2 e^(1/d))`: the weak-type bound of the d-lacunary
/// maximal operator for volume in dimension `d`.
pub fn lebesgue_sparse_bound(dim: u32) -> f64 {
    assert!(dim >= 1);
    let x = (1.0 / dim as f64).exp();
    (x + 1.0) * (1.0 + 2.0 * x)
}

/// Large-dimension limit of [`lebesgue_sparse_bound`], valid for cubes in
/// every dimension.
pub fn cube_sparse_bound() -> f64 {
    6.0
}

/// A bound formula evaluation: exact when its inputs are rational, floating
/// when logarithms are involved, vacuous when an input constant is infinite.
#[derive(Debug, Clone, PartialEq)]
pub enum BoundValue {
    Exact(Q),
    Approx(f64),
    Vacuous,
}

impl BoundValue {
    pub fn to_f64(&self) -> Option<f64> {
        match self {
            BoundValue::Exact(v) => Some(crate::rational::q_to_f64(v)),
            BoundValue::Approx(v) => Some(*v),
            BoundValue::Vacuous => None,
        }
    }
}

impl std::fmt::Display for BoundValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BoundValue::Exact(v) => write!(f, "{}", format_q(v)),
            BoundValue::Approx(v) => write!(f, "{v}"),
            BoundValue::Vacuous => write!(f, "vacuous"),
        }
    }
}

/// The theoretical weak-type bounds derivable from a constants report.
#[derive(Debug, Clone)]
pub struct BoundsReport {
    /// `(K+1)(C K+1)` with `K` the microblossoming constant.
    pub sparse: BoundValue,
    /// Domination of the unrestricted operator by `layers` lacunary ones.
    pub sparse_domination: BoundValue,
    pub layers: u32,
    /// `(K1+1)(1 + C K1 K (2 + log K2/log K))`.
    pub full: BoundValue,
    /// `(e^(1/d)+1)(1+2e^(1/d))` when a dimension is given.
    pub lebesgue_sparse: Option<f64>,
    /// Limit value 6, valid for cubes.
    pub cube_sparse: f64,
    pub dim: Option<u32>,
}

pub fn theoretical_bounds(report: &ConstantsReport, dim: Option<u32>) -> BoundsReport {
    let sparse = match (report.k_blossom.value.as_q(), report.c_mu.value.as_q()) {
        (Some(k), Some(c)) => BoundValue::Exact(sparse_bound_exact(k, c)),
        _ => BoundValue::Vacuous,
    };
    let sparse_domination = match (report.k_micro.value.as_q(), report.c_mu.value.as_q()) {
        (Some(k), Some(c)) => BoundValue::Exact(sparse_domination_bound_exact(k, c, &report.t)),
        _ => BoundValue::Vacuous,
    };
    let full = match (
        report.k_blossom.value.to_f64(),
        report.c_mu.value.to_f64(),
        report.k2.value.to_f64(),
    ) {
        (Some(k1), Some(c), Some(k2)) => BoundValue::Approx(full_bound(k1, c, k2)),
        _ => BoundValue::Vacuous,
    };
    BoundsReport {
        sparse,
        sparse_domination,
        layers: domination_layers(&report.t),
        full,
        lebesgue_sparse: dim.map(lebesgue_sparse_bound),
        cube_sparse: cube_sparse_bound(),
        dim,
    }
}

/// Checks one weak-type inequality `sup_a a mu{Mf > a} <= bound * |f|_1`
/// through the profile's supremum, with the floating-point guard slack.
pub fn profile_within_bound(profile: &WeakTypeProfile, bound: &BoundValue) -> Option<bool> {
    let b = bound.to_f64()?;
    Some(crate::rational::q_to_f64(&profile.supremum) <= b + crate::covering::FLOAT_GUARD)
}

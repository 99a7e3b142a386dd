//! Regularity constants of a finite metric measure space, with witnesses.
//!
//! Each constant is a supremum of measure ratios over centers (sometimes
//! pairs) and a continuous radius. The radius supremum is reduced to finitely
//! many evaluations: the defining ratio is piecewise constant between the
//! merged breakpoints derived from the pairwise distances (scaled by the
//! factors appearing in the ratio), so one interior representative per
//! interval suffices. Every supremum is returned together with a witness,
//! and ties are broken toward the lexicographically smallest
//! `(x, y, interval)` so results do not depend on evaluation order.
//!
//! Ratios of the form `0/0` never constrain the defining inequality and are
//! skipped; `positive/0` means no finite constant works and is reported as
//! `+inf` with the witness that proves it. A scan with no admissible ratio at
//! all reports the trivial constant 1 with no witness.

use crate::rational::{format_q, parse_q, q, q_to_f64, Q};
use crate::set::PointSet;
use crate::space::{merge_breakpoints, RadiusInterval, Space};
use crate::{Error, Result};
use num::traits::{One, Signed, Zero};
use rayon::prelude::*;
use std::collections::BTreeMap;

/// A nonnegative rational or `+inf`.
#[derive(Debug, Clone, PartialEq)]
pub enum Extended {
    Finite(Q),
    Infinite,
}

impl Extended {
    pub fn is_finite(&self) -> bool {
        matches!(self, Extended::Finite(_))
    }

    pub fn as_q(&self) -> Option<&Q> {
        match self {
            Extended::Finite(v) => Some(v),
            Extended::Infinite => None,
        }
    }

    pub fn to_f64(&self) -> Option<f64> {
        self.as_q().map(q_to_f64)
    }

    fn gt(&self, other: &Extended) -> bool {
        match (self, other) {
            (Extended::Infinite, Extended::Infinite) => false,
            (Extended::Infinite, Extended::Finite(_)) => true,
            (Extended::Finite(_), Extended::Infinite) => false,
            (Extended::Finite(a), Extended::Finite(b)) => a > b,
        }
    }
}

impl std::fmt::Display for Extended {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Extended::Finite(v) => write!(f, "{}", format_q(v)),
            Extended::Infinite => write!(f, "inf"),
        }
    }
}

/// Location realizing a supremum: center, optional second point, and the
/// radius interval on which the ratio attains the value.
#[derive(Debug, Clone, PartialEq)]
pub struct Witness {
    pub x: usize,
    pub y: Option<usize>,
    pub interval: RadiusInterval,
}

impl std::fmt::Display for Witness {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "x={}", self.x)?;
        if let Some(y) = self.y {
            write!(f, " y={y}")?;
        }
        write!(f, " r in {}", self.interval)
    }
}

/// A computed constant together with the witness realizing it (absent for
/// vacuous suprema).
#[derive(Debug, Clone, PartialEq)]
pub struct ExtendedConstant {
    pub value: Extended,
    pub witness: Option<Witness>,
}

impl ExtendedConstant {
    fn trivial() -> Self {
        ExtendedConstant {
            value: Extended::Finite(Q::one()),
            witness: None,
        }
    }
}

/// Half-open radius window `(lo, hi]` restricting a constant to a range of
/// scales.
#[derive(Debug, Clone, PartialEq)]
pub struct Window {
    pub lo: Q,
    pub hi: Q,
}

impl Window {
    pub fn new(lo: Q, hi: Q) -> Result<Window> {
        if lo.is_negative() || lo >= hi {
            return Err(Error::InvalidParameter(format!(
                "window ({}, {}] must satisfy 0 <= lo < hi",
                format_q(&lo),
                format_q(&hi)
            )));
        }
        Ok(Window { lo, hi })
    }
}

impl std::fmt::Display for Window {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {}]", format_q(&self.lo), format_q(&self.hi))
    }
}

/// Radius intervals with interior representatives covering the scan range.
///
/// Breakpoints are the critical distances divided by each factor in
/// `divisors`, merged, plus the window endpoints when a window is given.
fn scan_intervals(
    space: &Space,
    divisors: &[Q],
    window: Option<&Window>,
) -> Vec<(RadiusInterval, Q)> {
    let cmp = space.cmp_mode();
    let raw = space.critical_radii();
    let mut points: Vec<Q> = Vec::new();
    for d in raw.distances() {
        for f in divisors {
            points.push(d / f);
        }
    }
    let merged = merge_breakpoints(cmp, points);
    let two = q(2);
    match window {
        None => {
            if merged.is_empty() {
                return vec![(
                    RadiusInterval {
                        lo: Q::zero(),
                        hi: None,
                    },
                    Q::one(),
                )];
            }
            let mut out = Vec::with_capacity(merged.len() + 1);
            let mut prev = Q::zero();
            for b in &merged {
                out.push((
                    RadiusInterval {
                        lo: prev.clone(),
                        hi: Some(b.clone()),
                    },
                    (&prev + b) / &two,
                ));
                prev = b.clone();
            }
            out.push((
                RadiusInterval {
                    lo: prev.clone(),
                    hi: None,
                },
                prev + Q::one(),
            ));
            out
        }
        Some(w) => {
            let mut cuts: Vec<Q> = vec![w.lo.clone()];
            for b in merged {
                if cmp.lt(&w.lo, &b) && cmp.lt(&b, &w.hi) {
                    cuts.push(b);
                }
            }
            cuts.push(w.hi.clone());
            let mut out = Vec::with_capacity(cuts.len());
            for pair in cuts.windows(2) {
                out.push((
                    RadiusInterval {
                        lo: pair[0].clone(),
                        hi: Some(pair[1].clone()),
                    },
                    (&pair[0] + &pair[1]) / &two,
                ));
            }
            out
        }
    }
}

/// `num/den` with the skip and infinity conventions of the module docs.
fn ratio(num: &Q, den: &Q) -> Option<Extended> {
    if den.is_positive() {
        Some(Extended::Finite(num / den))
    } else if num.is_positive() {
        Some(Extended::Infinite)
    } else {
        None
    }
}

#[derive(Debug, Clone)]
struct Candidate {
    value: Extended,
    x: usize,
    y: Option<usize>,
    interval_idx: usize,
}

impl Candidate {
    fn key(&self) -> (usize, usize, usize) {
        (self.x, self.y.unwrap_or(0), self.interval_idx)
    }

    fn better_than(&self, other: &Candidate) -> bool {
        self.value.gt(&other.value) || (self.value == other.value && self.key() < other.key())
    }
}

fn merge_best(a: Option<Candidate>, b: Option<Candidate>) -> Option<Candidate> {
    match (a, b) {
        (Some(a), Some(b)) => Some(if b.better_than(&a) { b } else { a }),
        (a, None) => a,
        (None, b) => b,
    }
}

fn finish(best: Option<Candidate>, intervals: &[(RadiusInterval, Q)]) -> ExtendedConstant {
    match best {
        None => ExtendedConstant::trivial(),
        Some(c) => ExtendedConstant {
            value: c.value,
            witness: Some(Witness {
                x: c.x,
                y: c.y,
                interval: intervals[c.interval_idx].0.clone(),
            }),
        },
    }
}

/// Least `C` with `mu B(x,r) <= C mu B(y,r)` whenever `d(x,y) < r`, over the
/// window when one is given.
pub fn local_comparability(space: &Space, window: Option<&Window>) -> ExtendedConstant {
    let intervals = scan_intervals(space, &[Q::one()], window);
    let n = space.len();
    let cmp = space.cmp_mode();
    let mut best: Option<Candidate> = None;
    for (idx, (_, rep)) in intervals.iter().enumerate() {
        let meas: Vec<Q> = (0..n)
            .map(|i| space.ball_measure_oc(i, rep, false))
            .collect();
        let interval_best = (0..n)
            .into_par_iter()
            .map(|x| {
                let mut local: Option<Candidate> = None;
                for y in 0..n {
                    if !cmp.lt(&space.dist(x, y), rep) {
                        continue;
                    }
                    if let Some(value) = ratio(&meas[x], &meas[y]) {
                        let cand = Candidate {
                            value,
                            x,
                            y: Some(y),
                            interval_idx: idx,
                        };
                        if local.as_ref().is_none_or(|b| cand.better_than(b)) {
                            local = Some(cand);
                        }
                    }
                }
                local
            })
            .reduce(|| None, merge_best);
        best = merge_best(best, interval_best);
    }
    finish(best, &intervals)
}

/// Least `K` with `mu B(x,(1+t)r) <= K mu B(x,r)`; the strong variant lets
/// the numerator center range over `y` in `B(x,r)`.
pub fn microdoubling(
    space: &Space,
    t: &Q,
    strong: bool,
    window: Option<&Window>,
) -> Result<ExtendedConstant> {
    if !t.is_positive() {
        return Err(Error::InvalidParameter("microdoubling needs t > 0".into()));
    }
    let grow = Q::one() + t;
    let intervals = scan_intervals(space, &[Q::one(), grow.clone()], window);
    let n = space.len();
    let cmp = space.cmp_mode();
    let mut best: Option<Candidate> = None;
    for (idx, (_, rep)) in intervals.iter().enumerate() {
        let grown = rep * &grow;
        let small: Vec<Q> = (0..n)
            .map(|i| space.ball_measure_oc(i, rep, false))
            .collect();
        let big: Vec<Q> = (0..n)
            .map(|i| space.ball_measure_oc(i, &grown, false))
            .collect();
        let interval_best = (0..n)
            .into_par_iter()
            .map(|x| {
                let mut local: Option<Candidate> = None;
                if strong {
                    #[allow(clippy::needless_range_loop)]
                    for y in 0..n {
                        if !cmp.lt(&space.dist(x, y), rep) {
                            continue;
                        }
                        if let Some(value) = ratio(&big[y], &small[x]) {
                            let cand = Candidate {
                                value,
                                x,
                                y: Some(y),
                                interval_idx: idx,
                            };
                            if local.as_ref().is_none_or(|b| cand.better_than(b)) {
                                local = Some(cand);
                            }
                        }
                    }
                } else if let Some(value) = ratio(&big[x], &small[x]) {
                    local = Some(Candidate {
                        value,
                        x,
                        y: None,
                        interval_idx: idx,
                    });
                }
                local
            })
            .reduce(|| None, merge_best);
        best = merge_best(best, interval_best);
    }
    Ok(finish(best, &intervals))
}

/// Least `K` with `mu Blu(B(x,r), t r) <= K mu B(x,r)`. `t = 1` is bounded
/// blossoming.
pub fn microblossom(space: &Space, t: &Q, window: Option<&Window>) -> Result<ExtendedConstant> {
    if !t.is_positive() || t > &Q::one() {
        return Err(Error::InvalidParameter(
            "microblossom needs 0 < t <= 1".into(),
        ));
    }
    let grow = Q::one() + t;
    let intervals = scan_intervals(space, &[Q::one(), t.clone(), grow], window);
    let n = space.len();
    let mut best: Option<Candidate> = None;
    for (idx, (_, rep)) in intervals.iter().enumerate() {
        let reduced = rep * t;
        let base_sets: Vec<PointSet> = (0..n).map(|i| space.ball_set_oc(i, rep, false)).collect();
        let small_sets: Vec<PointSet> = (0..n)
            .map(|i| space.ball_set_oc(i, &reduced, false))
            .collect();
        let interval_best = (0..n)
            .into_par_iter()
            .map(|x| {
                let base = &base_sets[x];
                let mut blu = PointSet::empty(n);
                for small in &small_sets {
                    if small.intersects(base) {
                        blu.union_with(small);
                    }
                }
                ratio(&space.measure(&blu), &space.measure(base)).map(|value| Candidate {
                    value,
                    x,
                    y: None,
                    interval_idx: idx,
                })
            })
            .reduce(|| None, merge_best);
        best = merge_best(best, interval_best);
    }
    Ok(finish(best, &intervals))
}

/// `mu B(x, t r) / mu B(x, r)` for a support point `x`.
pub fn relative_increment(space: &Space, x: usize, r: &Q, t: &Q) -> Result<Extended> {
    if x >= space.len() {
        return Err(Error::IndexOutOfRange {
            index: x,
            n: space.len(),
        });
    }
    if !space.support().contains(x) {
        return Err(Error::Domain(format!(
            "relative increment is defined on the support of the measure; point {x} has weight 0"
        )));
    }
    if !r.is_positive() || !t.is_positive() {
        return Err(Error::InvalidParameter(
            "relative increment needs r, t > 0".into(),
        ));
    }
    let num = space.ball_measure_oc(x, &(t * r), false);
    let den = space.ball_measure_oc(x, r, false);
    Ok(ratio(&num, &den).expect("support point has a positive-measure ball"))
}

/// `sup_x ri(x, r, t)` over support points, at one fixed radius.
pub fn mri(space: &Space, r: &Q, t: &Q) -> Result<Extended> {
    if !r.is_positive() || !t.is_positive() {
        return Err(Error::InvalidParameter("mri needs r, t > 0".into()));
    }
    let mut best: Option<Extended> = None;
    for x in space.support().iter() {
        let v = relative_increment(space, x, r, t)?;
        if best.as_ref().is_none_or(|b| v.gt(b)) {
            best = Some(v);
        }
    }
    Ok(best.unwrap_or(Extended::Finite(Q::one())))
}

/// `sup_r mri(r, t)`, over the window when one is given.
pub fn mri_sup(space: &Space, t: &Q, window: Option<&Window>) -> Result<ExtendedConstant> {
    if !t.is_positive() {
        return Err(Error::InvalidParameter("mri needs t > 0".into()));
    }
    let intervals = scan_intervals(space, &[Q::one(), t.clone()], window);
    let support: Vec<usize> = space.support().iter().collect();
    let mut best: Option<Candidate> = None;
    for (idx, (_, rep)) in intervals.iter().enumerate() {
        let scaled = rep * t;
        let interval_best = support
            .par_iter()
            .map(|&x| {
                let num = space.ball_measure_oc(x, &scaled, false);
                let den = space.ball_measure_oc(x, rep, false);
                ratio(&num, &den).map(|value| Candidate {
                    value,
                    x,
                    y: None,
                    interval_idx: idx,
                })
            })
            .reduce(|| None, merge_best);
        best = merge_best(best, interval_best);
    }
    Ok(finish(best, &intervals))
}

/// Which ratio parameter the aggregate report uses for `k2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum K2Mode {
    /// `k2 = sup_r mri(r, 1/t)`, as used by the unrestricted-radius bound.
    Combined,
    /// `k2 = sup_r mri(r, T)`, as used by the bounded-radius bound.
    BoundedRadii,
}

impl K2Mode {
    pub fn name(&self) -> &'static str {
        match self {
            K2Mode::Combined => "combined",
            K2Mode::BoundedRadii => "bounded",
        }
    }
}

/// All regularity constants of a space for given parameters `t`, `T` and an
/// optional radius window.
#[derive(Debug, Clone)]
pub struct ConstantsReport {
    pub t: Q,
    pub big_t: Q,
    pub window: Option<Window>,
    pub k2_mode: K2Mode,
    pub c_mu: ExtendedConstant,
    pub k_micro: ExtendedConstant,
    pub k_strong: ExtendedConstant,
    pub k_blossom: ExtendedConstant,
    pub k_blossom_bounded: ExtendedConstant,
    pub k2: ExtendedConstant,
}

/// Computes every constant of [`ConstantsReport`]. Requires `t` in `(0, 1]`
/// and `T > 1`.
pub fn constants_report(
    space: &Space,
    t: &Q,
    big_t: &Q,
    window: Option<&Window>,
    k2_mode: K2Mode,
) -> Result<ConstantsReport> {
    if !t.is_positive() || t > &Q::one() {
        return Err(Error::InvalidParameter(
            "constants report needs t in (0, 1]".into(),
        ));
    }
    if big_t <= &Q::one() {
        return Err(Error::InvalidParameter(
            "constants report needs T > 1".into(),
        ));
    }
    let k2_ratio = match k2_mode {
        K2Mode::Combined => Q::one() / t,
        K2Mode::BoundedRadii => big_t.clone(),
    };
    Ok(ConstantsReport {
        t: t.clone(),
        big_t: big_t.clone(),
        window: window.cloned(),
        k2_mode,
        c_mu: local_comparability(space, window),
        k_micro: microdoubling(space, t, false, window)?,
        k_strong: microdoubling(space, t, true, window)?,
        k_blossom: microblossom(space, t, window)?,
        k_blossom_bounded: microblossom(space, &Q::one(), window)?,
        k2: mri_sup(space, &k2_ratio, window)?,
    })
}

impl ConstantsReport {
    /// Flat key-value rendering (decimal strings, `inf` for infinity).
    pub fn to_kv(&self) -> Vec<(String, String)> {
        let mut kv = vec![
            ("t".to_string(), format_q(&self.t)),
            ("T".to_string(), format_q(&self.big_t)),
            ("k2_mode".to_string(), self.k2_mode.name().to_string()),
        ];
        match &self.window {
            Some(w) => {
                kv.push(("window_lo".into(), format_q(&w.lo)));
                kv.push(("window_hi".into(), format_q(&w.hi)));
            }
            None => kv.push(("window".into(), "full".into())),
        }
        for (name, c) in [
            ("c_mu", &self.c_mu),
            ("k_micro", &self.k_micro),
            ("k_strong", &self.k_strong),
            ("k_blossom", &self.k_blossom),
            ("k_blossom_bounded", &self.k_blossom_bounded),
            ("k2", &self.k2),
        ] {
            kv.push((name.to_string(), c.value.to_string()));
            if let Some(w) = &c.witness {
                kv.push((format!("{name}_witness"), w.to_string()));
            }
        }
        kv
    }

    /// Rebuilds the numeric content of a report from key-value pairs, e.g.
    /// a previously written report file. Witnesses are not restored.
    pub fn from_kv(pairs: &BTreeMap<String, String>) -> Result<ConstantsReport> {
        let get = |key: &str| {
            pairs.get(key).ok_or_else(|| Error::Parse {
                context: "constants report".into(),
                message: format!("missing key {key}"),
            })
        };
        let parse_ext = |key: &str| -> Result<ExtendedConstant> {
            let raw = get(key)?;
            let value = if raw.trim() == "inf" {
                Extended::Infinite
            } else {
                Extended::Finite(parse_q(raw).map_err(|e| Error::Parse {
                    context: format!("constants report key {key}"),
                    message: e.to_string(),
                })?)
            };
            Ok(ExtendedConstant {
                value,
                witness: None,
            })
        };
        let parse_field = |key: &str| -> Result<Q> {
            parse_q(get(key)?).map_err(|e| Error::Parse {
                context: format!("constants report key {key}"),
                message: e.to_string(),
            })
        };
        let window = if pairs.contains_key("window_lo") {
            Some(Window::new(
                parse_field("window_lo")?,
                parse_field("window_hi")?,
            )?)
        } else {
            None
        };
        let k2_mode = match pairs.get("k2_mode").map(String::as_str) {
            Some("bounded") => K2Mode::BoundedRadii,
            _ => K2Mode::Combined,
        };
        Ok(ConstantsReport {
            t: parse_field("t")?,
            big_t: parse_field("T")?,
            window,
            k2_mode,
            c_mu: parse_ext("c_mu")?,
            k_micro: parse_ext("k_micro")?,
            k_strong: parse_ext("k_strong")?,
            k_blossom: parse_ext("k_blossom")?,
            k_blossom_bounded: parse_ext("k_blossom_bounded")?,
            k2: parse_ext("k2")?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::qr;
    use crate::space::{build_space, SpaceSpec};

    fn grid1d(hw: u32) -> Space {
        build_space(&SpaceSpec::GridZd {
            dim: 1,
            half_width: hw,
            origin_weight: q(1),
        })
        .unwrap()
    }

    fn three_point() -> Space {
        build_space(&SpaceSpec::ThreePointDelta).unwrap()
    }

    fn single_point() -> Space {
        build_space(&SpaceSpec::GridZd {
            dim: 1,
            half_width: 0,
            origin_weight: q(1),
        })
        .unwrap()
    }

    fn interval(lo: i64, hi: i64) -> RadiusInterval {
        RadiusInterval {
            lo: q(lo),
            hi: Some(q(hi)),
        }
    }

    #[test]
    fn local_comparability_three_point_is_infinite() {
        let c = local_comparability(&three_point(), None);
        assert_eq!(c.value, Extended::Infinite);
        let w = c.witness.unwrap();
        assert_eq!((w.x, w.y), (1, Some(0)));
        assert_eq!(w.interval, interval(2, 3));
    }

    #[test]
    fn local_comparability_single_point() {
        let c = local_comparability(&single_point(), None);
        assert_eq!(c.value, Extended::Finite(q(1)));
    }

    #[test]
    fn local_comparability_grid() {
        // Exhaustive oracle over pairs and sampled radii fixes 5/3 attained
        // at mu B(0, r) / mu B(+-2, r) for r in (2, 3].
        let s = grid1d(2);
        let c = local_comparability(&s, None);
        assert_eq!(c.value, Extended::Finite(qr(5, 3)));
        let w = c.witness.unwrap();
        assert_eq!(w.interval, interval(2, 3));
        // Center coordinate 0, comparison point coordinate -2 (the smaller
        // index among the two symmetric maximizers).
        assert_eq!(s.label(w.x).unwrap(), &[q(0)]);
        assert_eq!(s.label(w.y.unwrap()).unwrap(), &[q(-2)]);
    }

    #[test]
    fn local_comparability_brute_force_cross_check() {
        let s = grid1d(2);
        let computed = local_comparability(&s, None);
        // Independent route: sample many radii directly, no interval logic.
        let mut best: Option<Q> = None;
        for num in 1..=90u32 {
            let r = qr(num as i64, 10);
            for x in 0..s.len() {
                for y in 0..s.len() {
                    if s.dist(x, y) >= r {
                        continue;
                    }
                    let mx = s.ball_measure_oc(x, &r, false);
                    let my = s.ball_measure_oc(y, &r, false);
                    if my.is_positive() {
                        let v = mx / my;
                        if best.as_ref().is_none_or(|b| v > *b) {
                            best = Some(v);
                        }
                    }
                }
            }
        }
        assert_eq!(computed.value, Extended::Finite(best.unwrap()));
    }

    #[test]
    fn microdoubling_grid2_jump_at_unit_radius() {
        let s = build_space(&SpaceSpec::GridZd {
            dim: 2,
            half_width: 3,
            origin_weight: q(1),
        })
        .unwrap();
        let c = microdoubling(&s, &qr(1, 2), false, None).unwrap();
        match &c.value {
            Extended::Finite(v) => assert!(*v >= q(9)),
            Extended::Infinite => panic!("counting measure never gives inf"),
        }
        let w = c.witness.unwrap();
        assert_eq!(
            w.interval,
            RadiusInterval {
                lo: qr(2, 3),
                hi: Some(q(1))
            }
        );
    }

    #[test]
    fn microdoubling_single_point() {
        let c = microdoubling(&single_point(), &qr(1, 2), false, None).unwrap();
        assert_eq!(c.value, Extended::Finite(q(1)));
    }

    #[test]
    fn microdoubling_grid1_tenth() {
        let s = grid1d(2);
        let c = microdoubling(&s, &qr(1, 10), false, None).unwrap();
        assert_eq!(c.value, Extended::Finite(q(3)));
        let w = c.witness.unwrap();
        assert_eq!(
            w.interval,
            RadiusInterval {
                lo: qr(10, 11),
                hi: Some(q(1))
            }
        );
        assert_eq!(s.label(w.x).unwrap(), &[q(-1)]);
    }

    #[test]
    fn microblossom_three_point_is_one() {
        let c = microblossom(&three_point(), &qr(1, 2), None).unwrap();
        assert_eq!(c.value, Extended::Finite(q(1)));
    }

    #[test]
    fn microblossom_grid3_small_radii() {
        let s = build_space(&SpaceSpec::GridZd {
            dim: 3,
            half_width: 4,
            origin_weight: q(1),
        })
        .unwrap();
        let window = Window::new(q(0), q(3)).unwrap();
        let c = microblossom(&s, &qr(1, 3), Some(&window)).unwrap();
        assert_eq!(c.value, Extended::Finite(q(1)));
    }

    #[test]
    fn microblossom_single_point() {
        let c = microblossom(&single_point(), &q(1), None).unwrap();
        assert_eq!(c.value, Extended::Finite(q(1)));
    }

    #[test]
    fn relative_increment_examples() {
        let s = grid1d(2);
        let o = s.point_with_label(&[q(0)]).unwrap();
        assert_eq!(
            relative_increment(&s, o, &qr(7, 5), &q(1)).unwrap(),
            Extended::Finite(q(1))
        );
        assert_eq!(mri(&s, &qr(3, 4), &q(2)).unwrap(), Extended::Finite(q(3)));
        // Outside the support the increment is undefined.
        let t = three_point();
        assert!(matches!(
            relative_increment(&t, 0, &q(1), &q(2)),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn perturbed_origin_weight_increment() {
        let s = build_space(&SpaceSpec::GridZd {
            dim: 2,
            half_width: 3,
            origin_weight: qr(1, 4),
        })
        .unwrap();
        let o = s.point_with_label(&[q(0), q(0)]).unwrap();
        // B(0, r) = origin alone for r in (2/3, 1]; B(0, 3r) has 24 unit
        // points plus the origin.
        let v = relative_increment(&s, o, &qr(5, 6), &q(3)).unwrap();
        assert_eq!(v, Extended::Finite(q(97)));
        let m = mri(&s, &qr(5, 6), &q(3)).unwrap();
        assert_eq!(m, Extended::Finite(q(97)));
    }

    #[test]
    fn report_three_point() {
        let r = constants_report(&three_point(), &qr(1, 2), &q(2), None, K2Mode::Combined).unwrap();
        assert_eq!(r.c_mu.value, Extended::Infinite);
        assert_eq!(r.k_blossom.value, Extended::Finite(q(1)));
    }

    #[test]
    fn report_single_point_all_ones() {
        let r =
            constants_report(&single_point(), &qr(1, 2), &q(2), None, K2Mode::Combined).unwrap();
        for c in [
            &r.c_mu,
            &r.k_micro,
            &r.k_strong,
            &r.k_blossom,
            &r.k_blossom_bounded,
            &r.k2,
        ] {
            assert_eq!(c.value, Extended::Finite(q(1)));
        }
    }

    #[test]
    fn report_grid1_frozen_values() {
        // Values fixed ahead of time by exhaustive interval enumeration.
        let r = constants_report(&grid1d(2), &qr(1, 2), &q(2), None, K2Mode::Combined).unwrap();
        assert_eq!(r.c_mu.value, Extended::Finite(qr(5, 3)));
        assert_eq!(r.k_micro.value, Extended::Finite(q(3)));
        assert_eq!(r.k_strong.value, Extended::Finite(q(3)));
        assert_eq!(r.k_blossom.value, Extended::Finite(qr(5, 3)));
        assert_eq!(r.k_blossom_bounded.value, Extended::Finite(q(2)));
        assert_eq!(r.k2.value, Extended::Finite(q(3)));
    }

    #[test]
    fn report_kv_round_trip() {
        let r = constants_report(&grid1d(2), &qr(1, 2), &q(2), None, K2Mode::Combined).unwrap();
        let kv: BTreeMap<String, String> = r.to_kv().into_iter().collect();
        let back = ConstantsReport::from_kv(&kv).unwrap();
        assert_eq!(back.c_mu.value, r.c_mu.value);
        assert_eq!(back.k2.value, r.k2.value);
        assert_eq!(back.t, r.t);
        let t = constants_report(&three_point(), &qr(1, 2), &q(2), None, K2Mode::Combined).unwrap();
        let kv: BTreeMap<String, String> = t.to_kv().into_iter().collect();
        assert_eq!(kv["c_mu"], "inf");
        let back = ConstantsReport::from_kv(&kv).unwrap();
        assert_eq!(back.c_mu.value, Extended::Infinite);
    }

    #[test]
    fn windowed_scan_respects_bounds() {
        let s = grid1d(2);
        let w = Window::new(q(1), q(2)).unwrap();
        let c = local_comparability(&s, Some(&w));
        let witness = c.witness.unwrap();
        assert!(witness.interval.lo >= q(1));
        assert!(witness.interval.hi.unwrap() <= q(2));
    }
}

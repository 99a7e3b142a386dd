//! Greedy ball selection, disjointification, scale sequences, and exact
//! verification of the covering inequalities each selection satisfies.
//!
//! The selection algorithm is shared by the sparse and unrestricted variants:
//! balls are visited in the caller's order (never reordered), the first ball
//! is always accepted, and a later ball is accepted exactly when the density
//! sum of the previously accepted balls, evaluated on their reduced-ball
//! blossoms at the candidate's center, does not exceed the acceptance
//! threshold (1 by default). Acceptance uses the centered blossom; the
//! uncentered blossom enters only through the constants used in bound
//! verification.
//!
//! All set arithmetic is exact. Verification compares exact rationals except
//! for the logarithmic right-hand sides, which are evaluated in floating
//! point with a 1e-12 guard slack.

use crate::constants::{constants_report, ConstantsReport, Extended, K2Mode, Window};
use crate::rational::{format_q, q, q_from_f64, q_to_f64, Q};
use crate::set::PointSet;
use crate::space::{Ball, Space};
use crate::{Error, Result};
use num::traits::{One, Signed, Zero};

/// Slack added to floating-point right-hand sides before comparison.
pub const FLOAT_GUARD: f64 = 1e-12;

/// A finite sorted set of radii whose consecutive ratios are at least the
/// declared lacunarity `T > 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct RadiiSet {
    radii: Vec<Q>,
    lacunarity: Q,
}

impl RadiiSet {
    pub fn new(mut radii: Vec<Q>, lacunarity: Q) -> Result<RadiiSet> {
        if lacunarity <= Q::one() {
            return Err(Error::InvalidParameter("lacunarity must exceed 1".into()));
        }
        if radii.is_empty() {
            return Err(Error::EmptyRadiiSet);
        }
        radii.sort();
        if !radii[0].is_positive() {
            return Err(Error::InvalidParameter("radii must be positive".into()));
        }
        for pair in radii.windows(2) {
            if pair[1] < &pair[0] * &lacunarity {
                return Err(Error::InvalidParameter(format!(
                    "radii {} and {} violate {}-lacunarity",
                    format_q(&pair[0]),
                    format_q(&pair[1]),
                    format_q(&lacunarity)
                )));
            }
        }
        Ok(RadiiSet { radii, lacunarity })
    }

    pub fn radii(&self) -> &[Q] {
        &self.radii
    }

    pub fn lacunarity(&self) -> &Q {
        &self.lacunarity
    }

    pub fn contains(&self, r: &Q) -> bool {
        self.radii.iter().any(|x| x == r)
    }

    pub fn min(&self) -> &Q {
        &self.radii[0]
    }

    pub fn max(&self) -> &Q {
        self.radii.last().unwrap()
    }
}

/// `{r0 T^k : k >= 0}` intersected with `[r_min, r_max]`.
pub fn make_lacunary(r0: &Q, lacunarity: &Q, r_min: &Q, r_max: &Q) -> Result<RadiiSet> {
    if !r0.is_positive() {
        return Err(Error::InvalidParameter(
            "base radius must be positive".into(),
        ));
    }
    if lacunarity <= &Q::one() {
        return Err(Error::InvalidParameter("lacunarity must exceed 1".into()));
    }
    let mut radii = Vec::new();
    let mut r = r0.clone();
    while &r <= r_max {
        if &r >= r_min {
            radii.push(r.clone());
        }
        r *= lacunarity;
    }
    if radii.is_empty() {
        return Err(Error::EmptyRadiiSet);
    }
    RadiiSet::new(radii, lacunarity.clone())
}

/// Radius discipline of a ball family.
#[derive(Debug, Clone, PartialEq)]
pub enum FamilyMode {
    /// Radii drawn from a lacunary set with `T t >= 1`, non-increasing order.
    Sparse(RadiiSet),
    /// Radii anywhere in `[base, ratio * base)`, any order.
    Bounded { base: Q, ratio: Q },
    /// Arbitrary positive radii in non-increasing order.
    Combined,
}

/// An ordered collection of open balls `(center, radius)` with the reduction
/// parameter `t` and a radius discipline.
#[derive(Debug, Clone, PartialEq)]
pub struct BallFamily {
    pub balls: Vec<(usize, Q)>,
    pub t: Q,
    pub mode: FamilyMode,
}

impl BallFamily {
    pub fn sparse(balls: Vec<(usize, Q)>, t: Q, radii: RadiiSet) -> BallFamily {
        BallFamily {
            balls,
            t,
            mode: FamilyMode::Sparse(radii),
        }
    }

    pub fn bounded(balls: Vec<(usize, Q)>, t: Q, base: Q, ratio: Q) -> BallFamily {
        BallFamily {
            balls,
            t,
            mode: FamilyMode::Bounded { base, ratio },
        }
    }

    pub fn combined(balls: Vec<(usize, Q)>, t: Q) -> BallFamily {
        BallFamily {
            balls,
            t,
            mode: FamilyMode::Combined,
        }
    }

    /// Checks every family invariant against the space.
    pub fn validate(&self, space: &Space) -> Result<()> {
        if !self.t.is_positive() || self.t > Q::one() {
            return Err(Error::InvalidFamily(
                "reduction parameter t must lie in (0, 1]".into(),
            ));
        }
        let cmp = space.cmp_mode();
        for (i, (center, radius)) in self.balls.iter().enumerate() {
            if *center >= space.len() {
                return Err(Error::IndexOutOfRange {
                    index: *center,
                    n: space.len(),
                });
            }
            if !radius.is_positive() {
                return Err(Error::InvalidFamily(format!(
                    "ball {i} has nonpositive radius"
                )));
            }
            if !space.ball_measure_oc(*center, radius, false).is_positive() {
                return Err(Error::ZeroMeasureBall { index: i });
            }
        }
        match &self.mode {
            FamilyMode::Sparse(radii) => {
                let tt = radii.lacunarity() * &self.t;
                if tt < Q::one() {
                    return Err(Error::InvalidFamily(format!(
                        "sparse selection needs T t >= 1, got {}",
                        format_q(&tt)
                    )));
                }
                for (i, (_, r)) in self.balls.iter().enumerate() {
                    if !radii.radii().iter().any(|x| cmp.eq(x, r)) {
                        return Err(Error::InvalidFamily(format!(
                            "ball {i} radius {} is not in the lacunary set",
                            format_q(r)
                        )));
                    }
                }
                self.check_non_increasing(cmp)?;
            }
            FamilyMode::Combined => self.check_non_increasing(cmp)?,
            FamilyMode::Bounded { base, ratio } => {
                if !base.is_positive() || ratio <= &Q::one() {
                    return Err(Error::InvalidFamily(
                        "bounded mode needs base > 0 and ratio > 1".into(),
                    ));
                }
                let upper = base * ratio;
                for (i, (_, r)) in self.balls.iter().enumerate() {
                    if !(cmp.le(base, r) && cmp.lt(r, &upper)) {
                        return Err(Error::InvalidFamily(format!(
                            "ball {i} radius {} outside [{}, {})",
                            format_q(r),
                            format_q(base),
                            format_q(&upper)
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    fn check_non_increasing(&self, cmp: &crate::rational::CmpMode) -> Result<()> {
        for (i, pair) in self.balls.windows(2).enumerate() {
            if cmp.lt(&pair[0].1, &pair[1].1) {
                return Err(Error::InvalidFamily(format!(
                    "radii must be non-increasing, but ball {} has radius {} < {}",
                    i,
                    format_q(&pair[0].1),
                    format_q(&pair[1].1)
                )));
            }
        }
        Ok(())
    }

    /// The radius window over which constants must be computed so that every
    /// scale touched by the covering argument is covered: all family radii,
    /// their `t`-reductions, and for the bounded and unrestricted variants
    /// the intermediate scales up to `ratio * base` resp. `s_max / t`.
    pub fn radius_window(&self) -> Option<Window> {
        match &self.mode {
            FamilyMode::Bounded { base, ratio } => {
                let lo = base * &self.t / q(2);
                Window::new(lo, base * ratio).ok()
            }
            _ => {
                let min = self.balls.iter().map(|(_, r)| r).min()?;
                let max = self.balls.iter().map(|(_, r)| r).max()?;
                let lo = min * &self.t / q(2);
                let hi = match self.mode {
                    FamilyMode::Combined => max / &self.t,
                    _ => max.clone(),
                };
                Window::new(lo, hi).ok()
            }
        }
    }
}

/// Constants report matching a family: its window, its `t`, and the `k2`
/// ratio required by the family's verification path.
pub fn family_report(space: &Space, family: &BallFamily) -> Result<ConstantsReport> {
    let window = family.radius_window();
    let (big_t, mode) = match &family.mode {
        FamilyMode::Sparse(radii) => (radii.lacunarity().clone(), K2Mode::Combined),
        FamilyMode::Bounded { ratio, .. } => (ratio.clone(), K2Mode::BoundedRadii),
        FamilyMode::Combined => {
            let inv = Q::one() / &family.t;
            (if inv > Q::one() { inv } else { q(2) }, K2Mode::Combined)
        }
    };
    constants_report(space, &family.t, &big_t, window.as_ref(), mode)
}

/// Result of running the selection (or of disjointifying a whole family).
#[derive(Debug, Clone)]
pub struct SelectionOutcome {
    pub family: BallFamily,
    /// Indices into the family, in acceptance order.
    pub accepted: Vec<usize>,
    /// Disjointifications of the accepted reduced balls, parallel to
    /// `accepted`.
    pub disjoint: Vec<PointSet>,
    /// Union of the reduced balls of the whole family.
    pub u_set: PointSet,
    /// Union of the accepted reduced balls.
    pub v_set: PointSet,
    /// Per-point density sum of the accepted balls.
    pub density: Vec<Q>,
}

impl SelectionOutcome {
    pub fn max_density(&self) -> Q {
        self.density.iter().cloned().max().unwrap_or_else(Q::zero)
    }

    /// Largest density over points of positive weight; the density
    /// inequalities are measure statements, so this is the quantity they
    /// bound.
    pub fn max_density_on_support(&self, space: &Space) -> Q {
        space
            .support()
            .iter()
            .map(|i| self.density[i].clone())
            .max()
            .unwrap_or_else(Q::zero)
    }
}

/// `D_1 = A_1`, `D_{n+1} = A_{n+1} \ (A_1 u .. u A_n)`.
pub fn disjointify(sets: &[PointSet]) -> Vec<PointSet> {
    let mut seen: Option<PointSet> = None;
    let mut out = Vec::with_capacity(sets.len());
    for s in sets {
        match &mut seen {
            None => {
                seen = Some(s.clone());
                out.push(s.clone());
            }
            Some(acc) => {
                out.push(s.difference(acc));
                acc.union_with(s);
            }
        }
    }
    out
}

fn run_selection(space: &Space, family: &BallFamily, threshold: &Q) -> Result<SelectionOutcome> {
    family.validate(space)?;
    let n = space.len();
    let mut accepted = Vec::new();
    let mut disjoint: Vec<PointSet> = Vec::new();
    let mut v_set = PointSet::empty(n);
    let mut u_set = PointSet::empty(n);
    // Per accepted ball: density coefficient, acceptance blossom, full ball.
    let mut terms: Vec<(Q, PointSet, PointSet)> = Vec::new();
    for (idx, (center, radius)) in family.balls.iter().enumerate() {
        let reduced_radius = radius * &family.t;
        u_set.union_with(&space.ball_set_oc(*center, &reduced_radius, false));
        let admit = if terms.is_empty() {
            true
        } else {
            let mut sum = Q::zero();
            for (coef, blossom, _) in &terms {
                if blossom.contains(*center) {
                    sum += coef;
                }
            }
            sum <= *threshold
        };
        if !admit {
            continue;
        }
        let reduced = space.ball_set_oc(*center, &reduced_radius, false);
        let d = reduced.difference(&v_set);
        v_set.union_with(&reduced);
        let ball_set = space.ball_set_oc(*center, radius, false);
        let blossom = space.blossom(&ball_set, &reduced_radius);
        let coef = space.measure(&d) / space.ball_measure_oc(*center, radius, false);
        terms.push((coef, blossom, ball_set));
        accepted.push(idx);
        disjoint.push(d);
    }
    let mut density = vec![Q::zero(); n];
    for (coef, _, ball_set) in &terms {
        for p in ball_set.iter() {
            density[p] += coef;
        }
    }
    Ok(SelectionOutcome {
        family: family.clone(),
        accepted,
        disjoint,
        u_set,
        v_set,
        density,
    })
}

/// Greedy selection for a sparse-mode family.
pub fn sparse_select(space: &Space, family: &BallFamily) -> Result<SelectionOutcome> {
    if !matches!(family.mode, FamilyMode::Sparse(_)) {
        return Err(Error::InvalidFamily(
            "sparse_select needs a sparse-mode family".into(),
        ));
    }
    run_selection(space, family, &Q::one())
}

/// Greedy selection for an unrestricted (combined-mode) family. The
/// algorithm is identical to [`sparse_select`]; only the validated
/// invariants and the verified bounds differ.
pub fn full_select(space: &Space, family: &BallFamily) -> Result<SelectionOutcome> {
    if !matches!(family.mode, FamilyMode::Combined) {
        return Err(Error::InvalidFamily(
            "full_select needs a combined-mode family".into(),
        ));
    }
    run_selection(space, family, &Q::one())
}

/// Selection with a nonstandard acceptance threshold, exposed as a
/// diagnostic knob. The verified bounds are only guaranteed at threshold 1.
pub fn select_with_threshold(
    space: &Space,
    family: &BallFamily,
    threshold: &Q,
) -> Result<SelectionOutcome> {
    run_selection(space, family, threshold)
}

/// No selection at all: disjointifies the reduced balls of the whole family
/// in the given order. This is the object bounded by the bounded-radii
/// density inequality.
pub fn full_family_outcome(space: &Space, family: &BallFamily) -> Result<SelectionOutcome> {
    family.validate(space)?;
    let n = space.len();
    let reduced: Vec<PointSet> = family
        .balls
        .iter()
        .map(|(c, r)| space.ball_set_oc(*c, &(r * &family.t), false))
        .collect();
    let disjoint = disjointify(&reduced);
    let mut u_set = PointSet::empty(n);
    for s in &reduced {
        u_set.union_with(s);
    }
    let mut density = vec![Q::zero(); n];
    for ((center, radius), d) in family.balls.iter().zip(&disjoint) {
        let coef = space.measure(d) / space.ball_measure_oc(*center, radius, false);
        for p in space.ball_set_oc(*center, radius, false).iter() {
            density[p] += &coef;
        }
    }
    Ok(SelectionOutcome {
        family: family.clone(),
        accepted: (0..family.balls.len()).collect(),
        disjoint,
        u_set: u_set.clone(),
        v_set: u_set,
        density,
    })
}

/// `sum_i (mu D_i / mu B_i) 1_{B_i}` evaluated at every point.
pub fn density_sum(space: &Space, entries: &[(Ball, PointSet)]) -> Result<Vec<Q>> {
    let mut density = vec![Q::zero(); space.len()];
    for (i, (ball, d)) in entries.iter().enumerate() {
        let m = space.ball_measure(ball)?;
        if !m.is_positive() {
            return Err(Error::ZeroMeasureBall { index: i });
        }
        let coef = space.measure(d) / m;
        for p in space.ball(ball)?.iter() {
            density[p] += &coef;
        }
    }
    Ok(density)
}

/// Greedy scale sequence from `s` to `r_max` around the point `y`.
///
/// Each increment takes the largest radius `rho` in `(rho_m, r_max]` with
/// `mu B(y, rho) <= K mu B^cl(y, rho_m)`; on a finite space that supremum is
/// attained at a pairwise distance or at `r_max`, so the produced sequence
/// satisfies the reported inequalities exactly.
#[derive(Debug, Clone)]
pub struct ScaleDiagnostic {
    pub y: usize,
    pub k: f64,
    pub start: Q,
    pub end: Q,
    /// Multiplicative increments `h_m`, one per step.
    pub increments: Vec<Q>,
    /// `start, rho_1, .., r_max`.
    pub radii: Vec<Q>,
    /// Number of steps before the final one (`N`).
    pub step_count: usize,
}

pub fn scale_sequence(
    space: &Space,
    y: usize,
    s: &Q,
    r_max: &Q,
    k: f64,
) -> Result<ScaleDiagnostic> {
    if y >= space.len() {
        return Err(Error::IndexOutOfRange {
            index: y,
            n: space.len(),
        });
    }
    if !s.is_positive() || s >= r_max {
        return Err(Error::InvalidParameter(
            "scale sequence needs 0 < s < r_max".into(),
        ));
    }
    if k < std::f64::consts::E {
        return Err(Error::InvalidParameter(format!(
            "scale sequence needs K >= e, got {k}"
        )));
    }
    if !space.ball_measure_oc(y, r_max, false).is_positive() {
        return Err(Error::Domain(format!(
            "ball of radius {} around point {y} has zero measure",
            format_q(r_max)
        )));
    }
    let kq = q_from_f64(k).unwrap();
    // Candidate radii: pairwise distances from y inside (s, r_max), plus
    // r_max itself.
    let base_candidates: Vec<Q> = space
        .neighbor_distances(y)
        .iter()
        .filter(|d| *d > s && *d < r_max)
        .cloned()
        .collect();
    let mut radii = vec![s.clone()];
    let mut increments = Vec::new();
    let mut current = s.clone();
    loop {
        let cap = &kq * space.ball_measure_oc(y, &current, true);
        let mut next: Option<Q> = None;
        if space.ball_measure_oc(y, r_max, false) <= cap {
            next = Some(r_max.clone());
        } else {
            for cand in base_candidates.iter().rev() {
                if cand <= &current {
                    break;
                }
                if space.ball_measure_oc(y, cand, false) <= cap {
                    next = Some(cand.clone());
                    break;
                }
            }
        }
        // The smallest candidate above `current` is always feasible, so the
        // supremum exists.
        let next = next.expect("at least one feasible scale step");
        increments.push(&next / &current - Q::one());
        radii.push(next.clone());
        current = next;
        if &current == r_max {
            break;
        }
    }
    let step_count = increments.len() - 1;
    Ok(ScaleDiagnostic {
        y,
        k,
        start: s.clone(),
        end: r_max.clone(),
        increments,
        radii,
        step_count,
    })
}

impl ScaleDiagnostic {
    /// Exact check of `K^N <= mu B(y, r_max) / mu B(y, s)`. Returns `None`
    /// when the starting ball has zero measure (the premise is vacuous).
    pub fn step_bound_holds(&self, space: &Space) -> Option<bool> {
        let start = space.ball_measure_oc(self.y, &self.start, false);
        if !start.is_positive() {
            return None;
        }
        let end = space.ball_measure_oc(self.y, &self.end, false);
        let kq = q_from_f64(self.k).unwrap();
        let mut pow = Q::one();
        for _ in 0..self.step_count {
            pow *= &kq;
        }
        Some(pow * start <= end)
    }

    /// Checks the per-step growth condition the construction guarantees.
    pub fn steps_certified(&self, space: &Space) -> bool {
        let kq = q_from_f64(self.k).unwrap();
        self.radii.windows(2).all(|w| {
            space.ball_measure_oc(self.y, &w[1], false)
                <= &kq * space.ball_measure_oc(self.y, &w[0], true)
        })
    }
}

/// Which covering statement to verify.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TheoremKind {
    Sparse,
    Bounded,
    Combined,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    /// An infinite constant makes the inequality vacuous.
    Vacuous,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Vacuous => "vacuous",
        };
        write!(f, "{s}")
    }
}

#[derive(Debug, Clone)]
pub struct VerificationEntry {
    pub inequality: String,
    pub lhs: String,
    pub rhs: String,
    pub verdict: Verdict,
}

#[derive(Debug, Clone)]
pub struct VerificationReport {
    pub entries: Vec<VerificationEntry>,
}

impl VerificationReport {
    pub fn all_passed(&self) -> bool {
        self.entries.iter().all(|e| e.verdict != Verdict::Fail)
    }

    pub fn failed(&self) -> Vec<&VerificationEntry> {
        self.entries
            .iter()
            .filter(|e| e.verdict == Verdict::Fail)
            .collect()
    }
}

fn exact_entry(name: &str, lhs: Q, rhs: Option<Q>) -> VerificationEntry {
    match rhs {
        None => VerificationEntry {
            inequality: name.into(),
            lhs: format_q(&lhs),
            rhs: "inf".into(),
            verdict: Verdict::Vacuous,
        },
        Some(rhs) => VerificationEntry {
            inequality: name.into(),
            verdict: if lhs <= rhs {
                Verdict::Pass
            } else {
                Verdict::Fail
            },
            lhs: format_q(&lhs),
            rhs: format_q(&rhs),
        },
    }
}

fn float_entry(name: &str, lhs: &Q, rhs: Option<f64>) -> VerificationEntry {
    match rhs {
        None => VerificationEntry {
            inequality: name.into(),
            lhs: format_q(lhs),
            rhs: "inf".into(),
            verdict: Verdict::Vacuous,
        },
        Some(rhs) => VerificationEntry {
            inequality: name.into(),
            verdict: if q_to_f64(lhs) <= rhs + FLOAT_GUARD {
                Verdict::Pass
            } else {
                Verdict::Fail
            },
            lhs: format_q(lhs),
            rhs: format!("{rhs}"),
        },
    }
}

/// Log-shaped right-hand side `C K1 K (2 + log K2 / log K)` with
/// `K = max(K1, e)`.
fn log_bound(c: &Extended, k1: &Extended, k2: &Extended) -> Option<f64> {
    let c = c.to_f64()?;
    let k1 = k1.to_f64()?;
    let k2 = k2.to_f64()?;
    let k = k1.max(std::f64::consts::E);
    Some(c * k1 * k * (2.0 + k2.ln() / k.ln()))
}

/// Evaluates both sides of every inequality the requested covering statement
/// guarantees for this outcome, using the constants in `report`.
///
/// The density inequalities are measure statements; they are checked at
/// every point of positive weight. The report must have been computed with
/// the family's `t` (and matching `T` and `k2` mode for the bounded and
/// combined statements) over a window containing the family's scales, as
/// produced by [`family_report`].
pub fn verify_covering_bounds(
    space: &Space,
    outcome: &SelectionOutcome,
    report: &ConstantsReport,
    theorem: TheoremKind,
) -> Result<VerificationReport> {
    if report.t != outcome.family.t {
        return Err(Error::InvalidParameter(format!(
            "report computed for t = {}, family uses t = {}",
            format_q(&report.t),
            format_q(&outcome.family.t)
        )));
    }
    let mu_u = space.measure(&outcome.u_set);
    let mu_v = space.measure(&outcome.v_set);
    let max_density = outcome.max_density_on_support(space);
    let mut entries = Vec::new();
    match theorem {
        TheoremKind::Sparse => {
            if !matches!(outcome.family.mode, FamilyMode::Sparse(_)) {
                return Err(Error::InvalidFamily(
                    "sparse verification needs a sparse-mode outcome".into(),
                ));
            }
            let k = report.k_blossom.value.as_q();
            entries.push(exact_entry("set", mu_u, k.map(|k| (k + Q::one()) * &mu_v)));
            let rhs = match (report.c_mu.value.as_q(), k) {
                (Some(c), Some(k)) => Some(c * k + Q::one()),
                _ => None,
            };
            entries.push(exact_entry("bound", max_density, rhs));
        }
        TheoremKind::Combined => {
            if !matches!(outcome.family.mode, FamilyMode::Combined) {
                return Err(Error::InvalidFamily(
                    "combined verification needs a combined-mode outcome".into(),
                ));
            }
            if report.k2_mode != K2Mode::Combined {
                return Err(Error::InvalidParameter(
                    "combined verification needs a report with k2 computed at ratio 1/t".into(),
                ));
            }
            let k1 = report.k_blossom.value.as_q();
            entries.push(exact_entry(
                "set2",
                mu_u,
                k1.map(|k1| (k1 + Q::one()) * &mu_v),
            ));
            let rhs = log_bound(
                &report.c_mu.value,
                &report.k_blossom.value,
                &report.k2.value,
            )
            .map(|v| 1.0 + v);
            entries.push(float_entry("bound2", &max_density, rhs));
        }
        TheoremKind::Bounded => {
            let FamilyMode::Bounded { ratio, .. } = &outcome.family.mode else {
                return Err(Error::InvalidFamily(
                    "bounded verification needs a bounded-mode outcome".into(),
                ));
            };
            if report.k2_mode != K2Mode::BoundedRadii || &report.big_t != ratio {
                return Err(Error::InvalidParameter(
                    "bounded verification needs a report with k2 computed at ratio T".into(),
                ));
            }
            let rhs = log_bound(
                &report.c_mu.value,
                &report.k_blossom.value,
                &report.k2.value,
            );
            entries.push(float_entry("sum", &max_density, rhs));
        }
    }
    Ok(VerificationReport { entries })
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

    fn gidx(space: &Space, c: i64) -> usize {
        space.point_with_label(&[q(c)]).unwrap()
    }

    #[test]
    fn disjointify_examples() {
        let a = PointSet::from_indices(4, &[1, 2]);
        let b = PointSet::from_indices(4, &[2, 3]);
        let d = disjointify(&[a.clone(), b]);
        assert_eq!(d[0].indices(), vec![1, 2]);
        assert_eq!(d[1].indices(), vec![3]);
        let dup = disjointify(&[a.clone(), a.clone()]);
        assert_eq!(dup[1].indices(), Vec::<usize>::new());
        let e = disjointify(&[PointSet::empty(4), PointSet::from_indices(4, &[1])]);
        assert!(e[0].is_empty());
        assert_eq!(e[1].indices(), vec![1]);
    }

    #[test]
    fn make_lacunary_examples() {
        let r = make_lacunary(&q(1), &q(2), &q(1), &q(8)).unwrap();
        assert_eq!(r.radii(), &[q(1), q(2), q(4), q(8)]);
        let r = make_lacunary(&q(1), &q(3), &q(1), &q(10)).unwrap();
        assert_eq!(r.radii(), &[q(1), q(3), q(9)]);
        assert!(matches!(
            make_lacunary(&q(5), &q(2), &q(1), &q(4)),
            Err(Error::EmptyRadiiSet)
        ));
    }

    fn sparse_trace_family(s: &Space) -> BallFamily {
        let radii = make_lacunary(&q(1), &q(2), &q(1), &q(4)).unwrap();
        BallFamily::sparse(
            vec![(gidx(s, 0), q(4)), (gidx(s, 2), q(2)), (gidx(s, -2), q(2))],
            qr(1, 2),
            radii,
        )
    }

    #[test]
    fn sparse_selection_hand_trace() {
        // Oracle: re-execution of the acceptance rule by hand. All three
        // balls are accepted; the disjointifications of the reduced balls
        // are {-1,0,1}, {2}, {-2} in coordinates.
        let s = grid1d(2);
        let fam = sparse_trace_family(&s);
        let out = sparse_select(&s, &fam).unwrap();
        assert_eq!(out.accepted, vec![0, 1, 2]);
        assert_eq!(
            out.disjoint[0].indices(),
            vec![gidx(&s, -1), gidx(&s, 0), gidx(&s, 1)]
        );
        assert_eq!(out.disjoint[1].indices(), vec![gidx(&s, 2)]);
        assert_eq!(out.disjoint[2].indices(), vec![gidx(&s, -2)]);
        assert_eq!(out.u_set.len(), 5);
        assert_eq!(out.v_set.len(), 5);
        // Density at coordinate 2: 3/5 from B(0,4) plus 1/2 from B(2,2),
        // whose open ball {1,2} has measure 2.
        assert_eq!(out.density[gidx(&s, 2)], qr(11, 10));
        assert_eq!(out.density[gidx(&s, 0)], qr(3, 5));
        assert_eq!(out.max_density(), qr(11, 10));
    }

    #[test]
    fn single_ball_family_is_accepted() {
        let s = grid1d(2);
        let radii = make_lacunary(&q(2), &q(2), &q(2), &q(2)).unwrap();
        let fam = BallFamily::sparse(vec![(gidx(&s, 1), q(2))], qr(1, 2), radii);
        let out = sparse_select(&s, &fam).unwrap();
        assert_eq!(out.accepted, vec![0]);
        let reduced = s.ball_set_oc(gidx(&s, 1), &q(1), false);
        assert_eq!(out.disjoint[0], reduced);
    }

    #[test]
    fn full_select_three_ball_trace() {
        let s = grid1d(2);
        let fam = BallFamily::combined(
            vec![
                (gidx(&s, -1), qr(3, 2)),
                (gidx(&s, 0), qr(3, 2)),
                (gidx(&s, 1), qr(3, 2)),
            ],
            qr(1, 2),
        );
        let out = full_select(&s, &fam).unwrap();
        assert_eq!(out.accepted, vec![0, 1, 2]);
        assert_eq!(out.density[gidx(&s, 0)], q(1));
        let expected = [qr(1, 3), qr(2, 3), q(1), qr(2, 3), qr(1, 3)];
        for (c, want) in (-2..=2).zip(expected) {
            assert_eq!(out.density[gidx(&s, c)], want);
        }
    }

    #[test]
    fn full_select_matches_sparse_on_sparse_valid_family() {
        let s = grid1d(2);
        let fam = sparse_trace_family(&s);
        let sparse = sparse_select(&s, &fam).unwrap();
        let combined = BallFamily::combined(fam.balls.clone(), fam.t.clone());
        let full = full_select(&s, &combined).unwrap();
        assert_eq!(sparse.accepted, full.accepted);
        assert_eq!(sparse.disjoint, full.disjoint);
        assert_eq!(sparse.density, full.density);
    }

    #[test]
    fn empty_family_outcome() {
        let s = grid1d(2);
        let fam = BallFamily::combined(vec![], qr(1, 2));
        let out = full_select(&s, &fam).unwrap();
        assert!(out.accepted.is_empty());
        assert!(out.u_set.is_empty());
        assert!(out.density.iter().all(|d| d.is_zero()));
    }

    #[test]
    fn family_validation_errors() {
        let s = grid1d(2);
        let radii = make_lacunary(&q(1), &q(2), &q(1), &q(4)).unwrap();
        // T t < 1.
        let fam = BallFamily::sparse(vec![(0, q(2))], qr(1, 4), radii.clone());
        assert!(matches!(
            sparse_select(&s, &fam),
            Err(Error::InvalidFamily(_))
        ));
        // Radius outside the lacunary set.
        let fam = BallFamily::sparse(vec![(0, q(3))], qr(1, 2), radii.clone());
        assert!(matches!(
            sparse_select(&s, &fam),
            Err(Error::InvalidFamily(_))
        ));
        // Increasing radii.
        let fam = BallFamily::sparse(vec![(0, q(1)), (1, q(2))], qr(1, 2), radii.clone());
        assert!(matches!(
            sparse_select(&s, &fam),
            Err(Error::InvalidFamily(_))
        ));
        // Zero-measure ball on the three-point space.
        let t = build_space(&SpaceSpec::ThreePointDelta).unwrap();
        let fam = BallFamily::sparse(vec![(0, q(1))], qr(1, 2), radii);
        assert!(matches!(
            sparse_select(&t, &fam),
            Err(Error::ZeroMeasureBall { index: 0 })
        ));
    }

    #[test]
    fn density_sum_examples() {
        let s = grid1d(2);
        let o = gidx(&s, 0);
        let ball = Ball::open(o, q(2));
        let reduced = s.ball_set_oc(o, &q(1), false);
        let d = density_sum(&s, &[(ball.clone(), reduced.clone())]).unwrap();
        let coef = qr(1, 3); // mu D = 1, mu B = 3
        #[allow(clippy::needless_range_loop)]
        for p in 0..s.len() {
            let inside = s.ball(&ball).unwrap().contains(p);
            assert_eq!(d[p], if inside { coef.clone() } else { q(0) });
        }
        let zeros = density_sum(&s, &[(ball, PointSet::empty(5))]).unwrap();
        assert!(zeros.iter().all(|v| v.is_zero()));
        // The three equal balls of the selection trace: density 1 at 0.
        let entries: Vec<(Ball, PointSet)> = [-1i64, 0, 1]
            .iter()
            .map(|&c| {
                let x = gidx(&s, c);
                (
                    Ball::open(x, qr(3, 2)),
                    PointSet::from_indices(5, &[gidx(&s, c)]),
                )
            })
            .collect();
        let d = density_sum(&s, &entries).unwrap();
        assert_eq!(d[gidx(&s, 0)], q(1));
        // Zero-measure ball errors.
        let t = build_space(&SpaceSpec::ThreePointDelta).unwrap();
        assert!(matches!(
            density_sum(&t, &[(Ball::open(0, q(1)), PointSet::empty(3))]),
            Err(Error::ZeroMeasureBall { index: 0 })
        ));
    }

    #[test]
    fn scale_sequence_single_point() {
        let s = build_space(&SpaceSpec::GridZd {
            dim: 1,
            half_width: 0,
            origin_weight: q(1),
        })
        .unwrap();
        let d = scale_sequence(&s, 0, &q(1), &q(2), std::f64::consts::E).unwrap();
        assert_eq!(d.step_count, 0);
        assert_eq!(d.increments, vec![q(1)]);
        assert_eq!(d.radii, vec![q(1), q(2)]);
        assert_eq!(d.step_bound_holds(&s), Some(true));
    }

    #[test]
    fn scale_sequence_grid_step_bound() {
        let s = grid1d(8);
        let y = gidx(&s, 0);
        let d = scale_sequence(&s, y, &q(1), &q(8), std::f64::consts::E).unwrap();
        // mu B(0,8) / mu B(0,1) = 15, so N <= ln 15 < 3.
        assert!(d.step_count <= 2);
        assert_eq!(d.radii.last().unwrap(), &q(8));
        assert!(d.steps_certified(&s));
        assert_eq!(d.step_bound_holds(&s), Some(true));
    }

    #[test]
    fn scale_sequence_one_step_reaches_end() {
        let s = grid1d(8);
        let y = gidx(&s, 0);
        // mu B(0,4) = 7 <= e * mu B^cl(0,1) = 3e, so one step suffices.
        let d = scale_sequence(&s, y, &q(1), &q(4), std::f64::consts::E).unwrap();
        assert_eq!(d.step_count, 0);
        assert_eq!(d.radii, vec![q(1), q(4)]);
    }

    #[test]
    fn scale_sequence_zero_measure_errors() {
        let t = build_space(&SpaceSpec::ThreePointDelta).unwrap();
        assert!(scale_sequence(&t, 0, &q(1), &q(2), std::f64::consts::E).is_err());
    }

    #[test]
    fn verify_sparse_trace() {
        let s = grid1d(2);
        let fam = sparse_trace_family(&s);
        let out = sparse_select(&s, &fam).unwrap();
        let report = family_report(&s, &fam).unwrap();
        let v = verify_covering_bounds(&s, &out, &report, TheoremKind::Sparse).unwrap();
        assert!(v.all_passed());
        assert_eq!(v.entries[0].inequality, "set");
        assert_eq!(v.entries[0].lhs, "5");
        assert_eq!(v.entries[1].verdict, Verdict::Pass);
    }

    #[test]
    fn verify_three_point_is_vacuous() {
        let t = build_space(&SpaceSpec::ThreePointDelta).unwrap();
        let radii = make_lacunary(&q(1), &q(2), &q(1), &q(1)).unwrap();
        let fam = BallFamily::sparse(vec![(2, q(1))], qr(1, 2), radii);
        let out = sparse_select(&t, &fam).unwrap();
        // Full-range constants: local comparability is infinite, so the
        // density bound is vacuous (the restricted-window constants would be
        // finite instead).
        let report = constants_report(&t, &qr(1, 2), &q(2), None, K2Mode::Combined).unwrap();
        let v = verify_covering_bounds(&t, &out, &report, TheoremKind::Sparse).unwrap();
        assert!(v.all_passed());
        let bound = v.entries.iter().find(|e| e.inequality == "bound").unwrap();
        assert_eq!(bound.verdict, Verdict::Vacuous);
    }

    #[test]
    fn verify_bounded_three_ball() {
        let s = grid1d(2);
        let fam = BallFamily::bounded(
            vec![
                (gidx(&s, -1), qr(3, 2)),
                (gidx(&s, 0), qr(3, 2)),
                (gidx(&s, 1), qr(3, 2)),
            ],
            qr(1, 2),
            qr(3, 2),
            q(2),
        );
        let out = full_family_outcome(&s, &fam).unwrap();
        assert_eq!(out.max_density(), q(1));
        let report = family_report(&s, &fam).unwrap();
        let v = verify_covering_bounds(&s, &out, &report, TheoremKind::Bounded).unwrap();
        assert!(v.all_passed());
        assert_eq!(v.entries[0].inequality, "sum");
        assert_eq!(v.entries[0].verdict, Verdict::Pass);
    }

    #[test]
    fn verify_rejects_mismatched_report() {
        let s = grid1d(2);
        let fam = sparse_trace_family(&s);
        let out = sparse_select(&s, &fam).unwrap();
        let mut report = family_report(&s, &fam).unwrap();
        report.t = qr(1, 3);
        assert!(verify_covering_bounds(&s, &out, &report, TheoremKind::Sparse).is_err());
    }

    #[test]
    fn selection_is_deterministic() {
        let s = grid1d(2);
        let fam = sparse_trace_family(&s);
        let a = sparse_select(&s, &fam).unwrap();
        let b = sparse_select(&s, &fam).unwrap();
        assert_eq!(a.accepted, b.accepted);
        assert_eq!(a.density, b.density);
    }
}

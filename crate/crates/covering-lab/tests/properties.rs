//! Property tests for the structural invariants: ball and blossom
//! containments, piecewise constancy in the radius, constant orderings, the
//! covering inequalities on randomized families, and maximal-operator laws.

use covering_lab::constants::{
    constants_report, local_comparability, microblossom, microdoubling, mri_sup, K2Mode,
};
use covering_lab::covering::{
    disjointify, family_report, full_family_outcome, full_select, make_lacunary, scale_sequence,
    sparse_select, verify_covering_bounds, BallFamily, TheoremKind,
};
use covering_lab::maximal::{maximal_function, weak_type_profile, SampleFunction};
use covering_lab::rational::{q, qr, Q};
use covering_lab::set::PointSet;
use covering_lab::space::{build_space, Ball, Space, SpaceSpec};
use num::traits::{One, Signed, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone)]
enum SpacePick {
    Grid {
        dim: u32,
        hw: u32,
        w0: Q,
    },
    Lshape {
        denom: u8,
    },
    ThreePoint,
    Ngon {
        sides: u8,
    },
    RandomPoints {
        seed: u64,
        n: u8,
        zero_weights: bool,
    },
}

fn build_pick(pick: &SpacePick) -> Space {
    match pick {
        SpacePick::Grid { dim, hw, w0 } => build_space(&SpaceSpec::GridZd {
            dim: *dim,
            half_width: *hw,
            origin_weight: w0.clone(),
        })
        .unwrap(),
        SpacePick::Lshape { denom } => build_space(&SpaceSpec::LshapeNet {
            pitch: qr(1, *denom as i64),
        })
        .unwrap(),
        SpacePick::ThreePoint => build_space(&SpaceSpec::ThreePointDelta).unwrap(),
        SpacePick::Ngon { sides } => build_space(&SpaceSpec::NgonChordal {
            sides: *sides as usize,
        })
        .unwrap(),
        SpacePick::RandomPoints {
            seed,
            n,
            zero_weights,
        } => {
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let n = *n as usize;
            let mut points: Vec<Vec<Q>> = Vec::with_capacity(n);
            while points.len() < n {
                let p: Vec<Q> = (0..2).map(|_| qr(rng.gen_range(0..=8), 2)).collect();
                if !points.contains(&p) {
                    points.push(p);
                }
            }
            let mut weights: Vec<Q> = (0..n)
                .map(|_| {
                    if *zero_weights {
                        qr(rng.gen_range(0..=3), 2)
                    } else {
                        qr(rng.gen_range(1..=4), 2)
                    }
                })
                .collect();
            if weights.iter().all(|w| w.is_zero()) {
                weights[0] = Q::one();
            }
            Space::from_points(points, covering_lab::space::Norm::Linf, weights).unwrap()
        }
    }
}

fn space_pick() -> impl Strategy<Value = SpacePick> {
    prop_oneof![
        (1u32..=2, 1u32..=2, 0i64..=2).prop_map(|(dim, hw, w)| SpacePick::Grid {
            dim,
            hw,
            w0: qr(w, 2),
        }),
        (2u8..=6).prop_map(|denom| SpacePick::Lshape { denom }),
        Just(SpacePick::ThreePoint),
        (3u8..=8).prop_map(|sides| SpacePick::Ngon { sides }),
        (any::<u64>(), 4u8..=12, any::<bool>()).prop_map(|(seed, n, zero_weights)| {
            SpacePick::RandomPoints {
                seed,
                n,
                zero_weights,
            }
        }),
    ]
}

fn radius() -> impl Strategy<Value = Q> {
    (1i64..=12, 1i64..=4).prop_map(|(n, d)| qr(n, d))
}

fn subset_of(space: &Space, seed: u64) -> PointSet {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut s = PointSet::empty(space.len());
    for i in 0..space.len() {
        if rng.gen_bool(0.4) {
            s.insert(i);
        }
    }
    s
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn ball_monotone_in_radius(pick in space_pick(), r1 in radius(), r2 in radius(), x in 0usize..8) {
        let space = build_pick(&pick);
        let x = x % space.len();
        let (small, large) = if r1 <= r2 { (r1, r2) } else { (r2, r1) };
        let a = space.ball(&Ball::open(x, small.clone())).unwrap();
        let b = space.ball(&Ball::open(x, large.clone())).unwrap();
        prop_assert!(a.is_subset(&b));
        let closed = space.ball(&Ball::closed(x, small)).unwrap();
        prop_assert!(a.is_subset(&closed));
    }

    #[test]
    fn blossom_containment_chain(pick in space_pick(), s in radius(), seed in any::<u64>()) {
        let space = build_pick(&pick);
        let set = subset_of(&space, seed);
        let bl = space.blossom(&set, &s);
        let blu = space.uncentered_blossom(&set, &s);
        let bl2 = space.blossom(&set, &(&s * q(2)));
        prop_assert!(set.is_subset(&bl));
        prop_assert!(bl.is_subset(&blu));
        prop_assert!(blu.is_subset(&bl2));
    }

    #[test]
    fn blossom_of_ball_inside_enlarged_ball(
        pick in space_pick(), r in radius(), s in radius(), x in 0usize..8
    ) {
        let space = build_pick(&pick);
        let x = x % space.len();
        let ball = space.ball(&Ball::open(x, r.clone())).unwrap();
        let bl = space.blossom(&ball, &s);
        let big = space.ball(&Ball::open(x, &r + &s)).unwrap();
        prop_assert!(bl.is_subset(&big));
    }

    #[test]
    fn ball_sets_constant_between_breakpoints(pick in space_pick(), k in 0usize..6) {
        let space = build_pick(&pick);
        let dists = space.critical_radii();
        let breakpoints = dists.distances();
        // Two interior radii of the same interval give identical balls.
        let (lo, hi) = if breakpoints.is_empty() {
            (q(0), q(1))
        } else {
            let k = k % (breakpoints.len() + 1);
            if k == 0 {
                (q(0), breakpoints[0].clone())
            } else if k == breakpoints.len() {
                (breakpoints[k - 1].clone(), &breakpoints[k - 1] + q(2))
            } else {
                (breakpoints[k - 1].clone(), breakpoints[k].clone())
            }
        };
        let step = (&hi - &lo) / q(3);
        let r1 = &lo + &step;
        let r2 = &lo + &step + &step;
        for x in 0..space.len() {
            prop_assert_eq!(
                space.ball(&Ball::open(x, r1.clone())).unwrap(),
                space.ball(&Ball::open(x, r2.clone())).unwrap()
            );
        }
    }

    #[test]
    fn measure_additivity(pick in space_pick(), s1 in any::<u64>(), s2 in any::<u64>()) {
        let space = build_pick(&pick);
        let a = subset_of(&space, s1);
        let b = subset_of(&space, s2);
        let lhs = space.measure(&a.union(&b)) + space.measure(&a.intersection(&b));
        prop_assert_eq!(lhs, space.measure(&a) + space.measure(&b));
    }

    #[test]
    fn disjointify_laws(pick in space_pick(), seeds in prop::collection::vec(any::<u64>(), 0..5)) {
        let space = build_pick(&pick);
        let sets: Vec<PointSet> = seeds.iter().map(|s| subset_of(&space, *s)).collect();
        let d = disjointify(&sets);
        let mut union_a = PointSet::empty(space.len());
        let mut union_d = PointSet::empty(space.len());
        for (a, di) in sets.iter().zip(&d) {
            prop_assert!(di.is_subset(a));
            for earlier in &d[..] {
                if std::ptr::eq(earlier, di) {
                    break;
                }
                prop_assert!(!di.intersects(earlier));
            }
            union_a.union_with(a);
            union_d.union_with(di);
        }
        prop_assert_eq!(union_a, union_d);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn constant_orderings(pick in space_pick(), tn in 1i64..=4) {
        let space = build_pick(&pick);
        let t = qr(tn, 4);
        let report = constants_report(&space, &t, &q(2), None, K2Mode::Combined).unwrap();
        // Strong microdoubling dominates both plain microdoubling and local
        // comparability.
        prop_assert!(!report.k_micro.value.gt_prop(&report.k_strong.value));
        prop_assert!(!report.c_mu.value.gt_prop(&report.k_strong.value));
        // Blossoming constants grow with t.
        let larger = microblossom(&space, &Q::one(), None).unwrap();
        prop_assert!(!report.k_blossom.value.gt_prop(&larger.value));
        prop_assert_eq!(&report.k_blossom_bounded.value, &larger.value);
    }

    #[test]
    fn microdoubling_matches_mri_on_full_support(seed in any::<u64>(), tn in 1i64..=4) {
        // Cross-check of two code paths on spaces where the support is
        // everything.
        let pick = SpacePick::RandomPoints { seed, n: 9, zero_weights: false };
        let space = build_pick(&pick);
        let t = qr(tn, 4);
        let micro = microdoubling(&space, &t, false, None).unwrap();
        let via_mri = mri_sup(&space, &(Q::one() + &t), None).unwrap();
        prop_assert_eq!(&micro.value, &via_mri.value);
    }

    #[test]
    fn microdoubling_vs_doubling_powers(seed in any::<u64>(), tn in 1i64..=3) {
        let pick = SpacePick::RandomPoints { seed, n: 8, zero_weights: false };
        let space = build_pick(&pick);
        let t = qr(tn, 3);
        let micro = microdoubling(&space, &t, false, None).unwrap();
        let doubling = mri_sup(&space, &q(2), None).unwrap();
        let (Some(micro_v), Some(doubling_v)) = (micro.value.as_q(), doubling.value.as_q()) else {
            // Full-support spaces have finite constants.
            prop_assert!(false);
            return Ok(());
        };
        // t <= 1 lets a single microdoubling step absorb a doubling step.
        prop_assert!(micro_v <= doubling_v);
        // Conversely, M microdoubling steps with (1+t)^M >= 2 cover doubling.
        let grow = Q::one() + &t;
        let mut pow = Q::one();
        let mut m = 0u32;
        while pow < q(2) {
            pow *= &grow;
            m += 1;
        }
        let mut micro_pow = Q::one();
        for _ in 0..m {
            micro_pow *= micro_v;
        }
        prop_assert!(*doubling_v <= micro_pow);
    }
}

trait GtProp {
    fn gt_prop(&self, other: &Self) -> bool;
}

impl GtProp for covering_lab::constants::Extended {
    fn gt_prop(&self, other: &Self) -> bool {
        use covering_lab::constants::Extended::*;
        match (self, other) {
            (Infinite, Infinite) => false,
            (Infinite, Finite(_)) => true,
            (Finite(_), Infinite) => false,
            (Finite(a), Finite(b)) => a > b,
        }
    }
}

fn random_sparse_family(space: &Space, seed: u64) -> Option<BallFamily> {
    let radii = make_lacunary(&qr(1, 2), &q(2), &qr(1, 2), &q(8)).ok()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let size = rng.gen_range(1..=6usize);
    let mut balls = Vec::new();
    for _ in 0..size {
        let center = rng.gen_range(0..space.len());
        let r = radii.radii()[rng.gen_range(0..radii.radii().len())].clone();
        if space
            .ball_measure(&Ball::open(center, r.clone()))
            .unwrap()
            .is_positive()
        {
            balls.push((center, r));
        }
    }
    if balls.is_empty() {
        return None;
    }
    balls.sort_by(|a, b| b.1.cmp(&a.1));
    Some(BallFamily::sparse(balls, qr(1, 2), radii))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn sparse_covering_inequalities_hold(pick in space_pick(), seed in any::<u64>()) {
        let space = build_pick(&pick);
        let Some(family) = random_sparse_family(&space, seed) else { return Ok(()) };
        let outcome = sparse_select(&space, &family).unwrap();
        prop_assert_eq!(outcome.accepted[0], 0);
        // Disjointness and coverage of the accepted reduced balls.
        let mut union = PointSet::empty(space.len());
        for (j, d) in outcome.disjoint.iter().enumerate() {
            let (c, r) = &family.balls[outcome.accepted[j]];
            let reduced = space.ball(&Ball::open(*c, r * &family.t)).unwrap();
            prop_assert!(d.is_subset(&reduced));
            for later in &outcome.disjoint[j + 1..] {
                prop_assert!(!d.intersects(later));
            }
            union.union_with(d);
        }
        prop_assert_eq!(&union, &outcome.v_set);
        let report = family_report(&space, &family).unwrap();
        let v = verify_covering_bounds(&space, &outcome, &report, TheoremKind::Sparse).unwrap();
        prop_assert!(v.all_passed(), "failed entries: {:?}", v.failed());
    }

    #[test]
    fn combined_covering_inequalities_hold(pick in space_pick(), seed in any::<u64>()) {
        let space = build_pick(&pick);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let size = rng.gen_range(0..=6usize);
        let mut balls = Vec::new();
        for _ in 0..size {
            let center = rng.gen_range(0..space.len());
            let r = qr(rng.gen_range(1..=16), 4);
            if space.ball_measure(&Ball::open(center, r.clone())).unwrap().is_positive() {
                balls.push((center, r));
            }
        }
        balls.sort_by(|a, b| b.1.cmp(&a.1));
        let family = BallFamily::combined(balls, qr(1, 2));
        let outcome = full_select(&space, &family).unwrap();
        let report = family_report(&space, &family).unwrap();
        let v = verify_covering_bounds(&space, &outcome, &report, TheoremKind::Combined).unwrap();
        prop_assert!(v.all_passed(), "failed entries: {:?}", v.failed());
    }

    #[test]
    fn bounded_density_and_scales(pick in space_pick(), seed in any::<u64>()) {
        let space = build_pick(&pick);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let base = q(1);
        let ratio = q(3);
        let size = rng.gen_range(1..=6usize);
        let mut balls = Vec::new();
        for _ in 0..size {
            let center = rng.gen_range(0..space.len());
            let r = qr(rng.gen_range(4..12), 4); // [1, 3)
            if space.ball_measure(&Ball::open(center, r.clone())).unwrap().is_positive() {
                balls.push((center, r));
            }
        }
        prop_assume!(!balls.is_empty());
        let family = BallFamily::bounded(balls, qr(1, 2), base.clone(), ratio.clone());
        let outcome = full_family_outcome(&space, &family).unwrap();
        let report = family_report(&space, &family).unwrap();
        let v = verify_covering_bounds(&space, &outcome, &report, TheoremKind::Bounded).unwrap();
        prop_assert!(v.all_passed(), "failed entries: {:?}", v.failed());
        // Scale sequences certify their inequalities and the step bound.
        let y = rng.gen_range(0..space.len());
        let r_max = &base * &ratio;
        if space.ball_measure(&Ball::open(y, r_max.clone())).unwrap().is_positive() {
            let diag = scale_sequence(&space, y, &base, &r_max, std::f64::consts::E).unwrap();
            prop_assert!(diag.steps_certified(&space));
            prop_assert!(diag.step_bound_holds(&space) != Some(false));
        }
    }
}

fn sample_values(space: &Space, seed: u64) -> SampleFunction {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    SampleFunction::new(
        (0..space.len())
            .map(|_| qr(rng.gen_range(-6..=6), 2))
            .collect(),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn maximal_operator_laws(pick in space_pick(), s1 in any::<u64>(), s2 in any::<u64>(), c in -4i64..=4) {
        let space = build_pick(&pick);
        let f = sample_values(&space, s1);
        let g = sample_values(&space, s2);
        let mf = maximal_function(&space, &f, None).unwrap();
        // Restriction shrinks the operator.
        if let Ok(radii) = make_lacunary(&q(1), &q(2), &q(1), &q(4)) {
            let mr = maximal_function(&space, &f, Some(&radii)).unwrap();
            for x in 0..space.len() {
                prop_assert!(mr.values[x] <= mf.values[x]);
            }
        }
        // Homogeneity.
        let scaled = SampleFunction::new(f.values.iter().map(|v| v * q(c)).collect());
        let ms = maximal_function(&space, &scaled, None).unwrap();
        for x in 0..space.len() {
            prop_assert_eq!(&ms.values[x], &(q(c).abs() * &mf.values[x]));
        }
        // Subadditivity.
        let sum = SampleFunction::new(
            f.values.iter().zip(&g.values).map(|(a, b)| a + b).collect(),
        );
        let msum = maximal_function(&space, &sum, None).unwrap();
        let mg = maximal_function(&space, &g, None).unwrap();
        for x in 0..space.len() {
            prop_assert!(msum.values[x] <= &mf.values[x] + &mg.values[x]);
        }
        // Domination on the support.
        for x in space.support().iter() {
            prop_assert!(mf.values[x] >= f.values[x].abs());
        }
    }

    #[test]
    fn maximal_equals_fine_radius_scan(pick in space_pick(), seed in any::<u64>()) {
        let space = build_pick(&pick);
        let f = sample_values(&space, seed);
        let mf = maximal_function(&space, &f, None).unwrap();
        //10 radii inside every critical interval, and one beyond.
        let dists = space.critical_radii();
        let bps = dists.distances();
        let mut fine: Vec<Q> = Vec::new();
        let mut prev = q(0);
        for b in bps {
            for i in 1..=10 {
                fine.push(&prev + (b - &prev) * qr(i, 11));
            }
            fine.push(b.clone());
            prev = b.clone();
        }
        fine.push(prev + q(1));
        let abs_mass: Vec<Q> = f
            .values
            .iter()
            .zip(space.weights())
            .map(|(v, w)| v.abs() * w)
            .collect();
        for x in 0..space.len() {
            let mut best: Option<Q> = None;
            for r in &fine {
                let set = space.ball(&Ball::open(x, r.clone())).unwrap();
                let w = space.measure(&set);
                if w.is_positive() {
                    let mass: Q = set.iter().map(|i| abs_mass[i].clone()).sum();
                    let avg = mass / w;
                    if best.as_ref().is_none_or(|b| avg > *b) {
                        best = Some(avg);
                    }
                }
            }
            prop_assert_eq!(best.unwrap_or_else(Q::zero), mf.values[x].clone());
        }
    }

    #[test]
    fn weak_profile_scaling_invariance(pick in space_pick(), seed in any::<u64>(), c in 1i64..=5) {
        let space = build_pick(&pick);
        let f = sample_values(&space, seed);
        prop_assume!(f.l1_norm(&space).is_positive());
        let scaled = SampleFunction::new(f.values.iter().map(|v| v * q(c)).collect());
        let a = weak_type_profile(&space, &f, None).unwrap();
        let b = weak_type_profile(&space, &scaled, None).unwrap();
        prop_assert_eq!(a.supremum, b.supremum);
    }
}

#[test]
fn microblossoming_without_comparability() {
    // The point-mass space: blossoming constant 1 while comparability fails.
    let space = build_space(&SpaceSpec::ThreePointDelta).unwrap();
    let bl = microblossom(&space, &qr(1, 2), None).unwrap();
    assert_eq!(bl.value.as_q(), Some(&q(1)));
    let c = local_comparability(&space, None);
    assert!(c.value.as_q().is_none());
}

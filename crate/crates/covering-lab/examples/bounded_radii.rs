//! Families with radii pinned to one scale band [r, T r): no selection is
//! needed, the disjointified density sum is bounded as it stands, and the
//! greedy scale sequence certifies the step count that drives the bound.
//!
//! Run with: cargo run --example bounded_radii

use covering_lab::covering::{
    family_report, full_family_outcome, scale_sequence, verify_covering_bounds, BallFamily,
    TheoremKind,
};
use covering_lab::rational::{format_q, q, qr};
use covering_lab::space::{build_space, SpaceSpec};

fn main() -> anyhow::Result<()> {
    let space = build_space(&SpaceSpec::GridZd {
        dim: 1,
        half_width: 16,
        origin_weight: q(1),
    })?;
    let center = |c: i64| space.point_with_label(&[q(c)]).unwrap();

    // Mixed radii in [2, 6), deliberately unordered.
    let family = BallFamily::bounded(
        vec![
            (center(3), qr(5, 2)),
            (center(-8), q(5)),
            (center(0), q(2)),
            (center(1), q(4)),
            (center(12), q(3)),
        ],
        qr(1, 2),
        q(2),
        q(3),
    );
    let outcome = full_family_outcome(&space, &family)?;
    println!("density max = {}", format_q(&outcome.max_density()));
    let report = family_report(&space, &family)?;
    let verification = verify_covering_bounds(&space, &outcome, &report, TheoremKind::Bounded)?;
    for entry in &verification.entries {
        println!(
            "{}: {} (lhs = {}, rhs = {})",
            entry.inequality, entry.verdict, entry.lhs, entry.rhs
        );
    }
    assert!(verification.all_passed());

    // Scale sequence from radius 2 to 6 around the origin.
    let diag = scale_sequence(&space, center(0), &q(2), &q(6), std::f64::consts::E)?;
    println!(
        "\nscale sequence radii: {:?}",
        diag.radii.iter().map(format_q).collect::<Vec<_>>()
    );
    println!(
        "increments: {:?}",
        diag.increments.iter().map(format_q).collect::<Vec<_>>()
    );
    println!("steps before the final one: N = {}", diag.step_count);
    println!(
        "K^N <= mu B(y, r_max)/mu B(y, s): {:?}",
        diag.step_bound_holds(&space)
    );
    Ok(())
}

//! Greedy selection on a lacunary family, traced ball by ball, then verified
//! against the covering inequalities.
//!
//! Run with: cargo run --example sparse_selection

use covering_lab::covering::{
    family_report, make_lacunary, sparse_select, verify_covering_bounds, BallFamily, TheoremKind,
};
use covering_lab::rational::{format_q, q, qr};
use covering_lab::space::{build_space, SpaceSpec};

fn main() -> anyhow::Result<()> {
    let space = build_space(&SpaceSpec::GridZd {
        dim: 1,
        half_width: 2,
        origin_weight: q(1),
    })?;
    let radii = make_lacunary(&q(1), &q(2), &q(1), &q(4))?;
    println!(
        "lacunary radii: {:?}",
        radii.radii().iter().map(format_q).collect::<Vec<_>>()
    );

    let center = |c: i64| space.point_with_label(&[q(c)]).unwrap();
    let family = BallFamily::sparse(
        vec![(center(0), q(4)), (center(2), q(2)), (center(-2), q(2))],
        qr(1, 2),
        radii,
    );
    let outcome = sparse_select(&space, &family)?;
    println!("accepted family indices: {:?}", outcome.accepted);
    for (j, d) in outcome.disjoint.iter().enumerate() {
        let coords: Vec<String> = d
            .iter()
            .map(|p| format_q(&space.label(p).unwrap()[0]))
            .collect();
        println!("  D_{j} = {{{}}}", coords.join(", "));
    }
    println!(
        "density by coordinate: {:?}",
        outcome.density.iter().map(format_q).collect::<Vec<_>>()
    );

    let report = family_report(&space, &family)?;
    println!(
        "\nconstants over the family window {}:",
        report.window.as_ref().unwrap()
    );
    println!(
        "  c_mu = {}, k_blossom = {}",
        report.c_mu.value, report.k_blossom.value
    );
    let verification = verify_covering_bounds(&space, &outcome, &report, TheoremKind::Sparse)?;
    for entry in &verification.entries {
        println!(
            "  {}: {} (lhs = {}, rhs = {})",
            entry.inequality, entry.verdict, entry.lhs, entry.rhs
        );
    }
    assert!(verification.all_passed());
    Ok(())
}

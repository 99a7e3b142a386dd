//! Maximal functions and empirical weak-type (1,1) profiles.
//!
//! Run with: cargo run --example maximal_weak_type

use covering_lab::constants::{constants_report, K2Mode};
use covering_lab::covering::make_lacunary;
use covering_lab::maximal::{
    empirical_weak_norm, maximal_function, theoretical_bounds, weak_type_profile, Probe,
    SampleFunction,
};
use covering_lab::rational::{format_q, q, qr};
use covering_lab::space::{build_space, SpaceSpec};

fn main() -> anyhow::Result<()> {
    let space = build_space(&SpaceSpec::GridZd {
        dim: 1,
        half_width: 2,
        origin_weight: q(1),
    })?;
    let f = SampleFunction::delta(space.len(), space.point_with_label(&[q(0)]).unwrap());

    let mf = maximal_function(&space, &f, None)?;
    println!(
        "M(point mass at 0) by coordinate: {:?}",
        mf.values.iter().map(format_q).collect::<Vec<_>>()
    );

    let profile = weak_type_profile(&space, &f, None)?;
    println!("level table (level, mu above, left-limit ratio):");
    for row in &profile.rows {
        println!(
            "  {}\t{}\t{}",
            format_q(&row.level),
            format_q(&row.mu_above),
            format_q(&row.ratio_left)
        );
    }
    println!(
        "supremum {} approached below level {}",
        format_q(&profile.supremum),
        format_q(&profile.level)
    );

    // Restricting the radii can only shrink the operator.
    let radii = make_lacunary(&q(4), &q(2), &q(4), &q(4))?;
    let restricted = maximal_function(&space, &f, Some(&radii))?;
    println!(
        "M_R with R = {{4}} at the origin: {}",
        format_q(&restricted.values[space.point_with_label(&[q(0)]).unwrap()])
    );

    // Search for the worst sample and compare with the proved bound.
    let est = empirical_weak_norm(&space, &Probe::DeltaScan, None)?;
    println!(
        "\ndelta scan lower bound: {} ({})",
        format_q(&est.supremum),
        est.description
    );
    let report = constants_report(&space, &qr(1, 2), &q(2), None, K2Mode::Combined)?;
    let bounds = theoretical_bounds(&report, None);
    println!("theoretical full bound: {}", bounds.full);
    let est_rand = empirical_weak_norm(&space, &Probe::Random { count: 32, seed: 9 }, None)?;
    println!("random probe lower bound: {}", format_q(&est_rand.supremum));
    Ok(())
}

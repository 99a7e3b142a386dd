//! The three-point space {0, 1, 3} with a single point mass at 3: a measure
//! that microblossoms with constant 1 while local comparability fails
//! outright.
//!
//! Run with: cargo run --example three_point_delta

use covering_lab::constants::{constants_report, K2Mode};
use covering_lab::rational::{q, qr};
use covering_lab::space::{build_space, Ball, SpaceSpec};

fn main() -> anyhow::Result<()> {
    let space = build_space(&SpaceSpec::ThreePointDelta)?;
    println!("points: {}", space.len());
    for i in 0..space.len() {
        println!(
            "  point {i} at {} with weight {}",
            covering_lab::rational::format_q(&space.label(i).unwrap()[0]),
            covering_lab::rational::format_q(&space.weights()[i])
        );
    }

    // The open ball B(3, 3) stops just short of the point at 0.
    let b = space.ball(&Ball::open(2, q(3)))?;
    println!("B(3, 3) contains indices {:?}", b.indices());
    println!(
        "mu B(3, 3) = {}",
        covering_lab::rational::format_q(&space.measure(&b))
    );

    let report = constants_report(&space, &qr(1, 2), &q(2), None, K2Mode::Combined)?;
    println!("\nconstants at t = 1/2:");
    for (k, v) in report.to_kv() {
        println!("  {k} = {v}");
    }
    println!("\nmicroblossoming holds with constant 1, yet local comparability fails:");
    println!("  k_blossom = {}", report.k_blossom.value);
    println!("  c_mu      = {}", report.c_mu.value);
    if let Some(w) = &report.c_mu.witness {
        println!("  comparability fails at {w}");
    }
    Ok(())
}

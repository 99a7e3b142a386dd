//! Blossoms versus balls on spaces without midpoints.
//!
//! On an L-shaped net the uncentered blossom of a ball is not a ball of any
//! center or radius, and enlarged balls are not contained in blossoms. On a
//! chordal polygon blossoms stay ball-shaped but the radius arithmetic
//! Bl(x, r, s) = B(x, r+s) breaks. The midpoint defect quantifies both.
//!
//! Run with: cargo run --example blossoms_and_balls

use covering_lab::rational::{format_q, q, q_from_f64, qr};
use covering_lab::set::PointSet;
use covering_lab::space::{build_space, Ball, SpaceSpec};

fn main() -> anyhow::Result<()> {
    let net = build_space(&SpaceSpec::LshapeNet { pitch: qr(1, 12) })?;
    println!("L-shape net, pitch 1/12: {} points", net.len());
    let corner_arm = net.point_with_label(&[q(1), q(0)]).unwrap();
    let other_arm = net.point_with_label(&[q(0), q(1)]).unwrap();
    println!(
        "midpoint defect between (1,0) and (0,1): {}",
        format_q(&net.midpoint_defect(corner_arm, other_arm)?)
    );

    let base = net.ball(&Ball::open(corner_arm, q(1)))?;
    let blu = net.uncentered_blossom(&base, &qr(1, 6));
    println!(
        "B((1,0), 1) has {} points; Blu of it at radius 1/6 has {}",
        base.len(),
        blu.len()
    );

    // Compare the blossom against every ball the net can form.
    let mut is_ball = false;
    let radii = net.critical_radii();
    for center in 0..net.len() {
        for rep in radii.sample(&[]) {
            if net.ball(&Ball::open(center, rep.clone()))? == blu {
                is_ball = true;
            }
        }
    }
    println!("Blu((1,0), 1, 1/6) equals some ball of the net: {is_ball}");

    let enlarged = net.ball(&Ball::open(corner_arm, qr(3, 2)))?;
    println!(
        "B((1,0), 3/2) has {} points and is contained in the blossom: {}",
        enlarged.len(),
        enlarged.is_subset(&blu)
    );

    // Chordal 16-gon: blossoms are balls, but radii stop adding.
    let gon = build_space(&SpaceSpec::NgonChordal { sides: 16 })?;
    println!("\nchordal 16-gon");
    let v0 = 0usize;
    let sqrt2 = q_from_f64(2f64.sqrt()).unwrap();
    let single = PointSet::from_indices(gon.len(), &[v0]);
    let bl_one = gon.blossom(&gon.ball(&Ball::open(v0, q(1)))?, &q(1));
    let bl_sqrt2 = gon.blossom(&gon.ball(&Ball::open(v0, sqrt2.clone()))?, &sqrt2);
    let b2 = gon.ball(&Ball::open(v0, q(2)))?;
    let _ = single;
    println!("Bl(v0, 1, 1) has {} points", bl_one.len());
    println!("Bl(v0, sqrt2, sqrt2) has {} points", bl_sqrt2.len());
    println!(
        "B(v0, 2) has {} points (everything but the antipode)",
        b2.len()
    );
    println!("Bl(v0, sqrt2, sqrt2) = B(v0, 2): {}", bl_sqrt2 == b2);
    println!("Bl(v0, 1, 1) = B(v0, 2): {}", bl_one == b2);
    Ok(())
}

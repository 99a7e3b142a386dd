//! Regularity constants of integer grids under the sup metric.
//!
//! Counting measure on Z^d is doubling but not microdoubling: the unit ball
//! is a single point while any slightly larger ball holds 3^d points. It
//! does microblossom with constant 1 at small scales, and radius windows
//! expose that split. A tiny weight at the origin then shows how badly a
//! one-point perturbation can inflate the increment constants.
//!
//! Run with: cargo run --example grid_constants

use covering_lab::constants::{microblossom, microdoubling, mri, Window};
use covering_lab::rational::{format_q, q, qr};
use covering_lab::space::{build_space, SpaceSpec};

fn main() -> anyhow::Result<()> {
    let grid = build_space(&SpaceSpec::GridZd {
        dim: 2,
        half_width: 3,
        origin_weight: q(1),
    })?;
    println!("grid Z^2, half-width 3: {} points", grid.len());

    for t in [qr(1, 100), qr(1, 10), qr(1, 2)] {
        let c = microdoubling(&grid, &t, false, None)?;
        println!(
            "  microdoubling(t = {}) = {}  (witness {})",
            format_q(&t),
            c.value,
            c.witness.as_ref().unwrap()
        );
    }
    println!("  every value is at least 3^2 = 9: the jump at radius 1 never goes away");

    // Restricted to small radii the uncentered blossoms collapse to balls.
    let window = Window::new(q(0), q(2))?;
    let bl = microblossom(&grid, &qr(1, 2), Some(&window))?;
    println!("  microblossom(t = 1/2) on (0, 2] = {}", bl.value);

    // A d^-d weight at the origin barely moves comparability but wrecks the
    // relative increments around radius 1.
    let perturbed = build_space(&SpaceSpec::GridZd {
        dim: 2,
        half_width: 3,
        origin_weight: qr(1, 4),
    })?;
    let plain = mri(&grid, &qr(5, 6), &q(3))?;
    let bumped = mri(&perturbed, &qr(5, 6), &q(3))?;
    println!("\nmri(r = 5/6, t = 3): counting measure {plain}, origin weight 1/4 gives {bumped}");
    Ok(())
}

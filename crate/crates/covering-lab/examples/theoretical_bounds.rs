//! The closed-form weak-type bound formulas on their own.
//!
//! Run with: cargo run --example theoretical_bounds

use covering_lab::maximal::{
    cube_sparse_bound, domination_layers, full_bound, lebesgue_sparse_bound, sparse_bound,
    sparse_bound_exact, sparse_domination_bound_exact,
};
use covering_lab::rational::{format_q, q, qr};

fn main() {
    let e = std::f64::consts::E;

    println!("sparse bound (K+1)(CK+1):");
    println!(
        "  K = 1,   C = 1: {}",
        format_q(&sparse_bound_exact(&q(1), &q(1)))
    );
    println!("  K = e^2, C = 1: {:.6}", sparse_bound(e * e, 1.0));

    println!("\ndomination of the unrestricted operator by lacunary ones:");
    for t in [qr(1, 2), qr(1, 4), qr(1, 10)] {
        println!(
            "  t = {}: N = {} layers, bound at kappa = C = 1: {}",
            format_q(&t),
            domination_layers(&t),
            format_q(&sparse_domination_bound_exact(&q(1), &q(1), &t))
        );
    }

    println!("\nfull bound (K1+1)(1 + C K1 K (2 + log K2/log K)), K = max(K1, e):");
    println!("  K1 = C = K2 = 1: {:.6}", full_bound(1.0, 1.0, 1.0));
    println!(
        "  K1 = e^(1/3), C = 1, K2 = 27: {:.6}",
        full_bound((1.0f64 / 3.0).exp(), 1.0, 27.0)
    );

    println!("\nlacunary bound for volume, (e^(1/d)+1)(1+2e^(1/d)):");
    for d in 1..=10u32 {
        println!("  d = {d:>2}: {:.12}", lebesgue_sparse_bound(d));
    }
    println!(
        "  limit (valid for cubes in every dimension): {}",
        cube_sparse_bound()
    );
}

//! Desk-scale grid experiments across dimensions: seeded random families
//! with t = 1/d^2 over a lacunary large-radius set, observed density maxima
//! and weak-norm lower bounds against the theoretical columns.
//!
//! Run with: cargo run --release --example dimension_sweep

use covering_lab::cli::sweep;

fn main() -> anyhow::Result<()> {
    let result = sweep(&[1, 2, 3], 4, 12, 42, 2_000_000)?;
    print!("{}", result.to_tsv());
    println!();
    for row in &result.rows {
        println!(
            "d = {}: observed density {} <= bound {} ({}), weak norm {} <= sparse bound {} ({})",
            row.dim,
            covering_lab::rational::format_q(&row.max_density),
            covering_lab::rational::format_q(&row.density_bound),
            row.density_ok,
            covering_lab::rational::format_q(&row.weak_norm),
            covering_lab::rational::format_q(&row.sparse_bound),
            row.weak_ok,
        );
    }
    assert!(result.all_ok());
    Ok(())
}

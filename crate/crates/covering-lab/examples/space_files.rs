//! Space files: write a built space, read it back bit-exactly, and see the
//! metric validation reject a broken matrix.
//!
//! Run with: cargo run --example space_files

use covering_lab::cli::{read_space_file, write_space_file};
use covering_lab::rational::q;
use covering_lab::space::{build_space, Space, SpaceSpec};

fn main() -> anyhow::Result<()> {
    let dir = std::env::temp_dir().join("covering-lab-example");
    std::fs::create_dir_all(&dir)?;
    let path = dir.join("grid.json");

    let space = build_space(&SpaceSpec::GridZd {
        dim: 2,
        half_width: 2,
        origin_weight: q(1),
    })?;
    write_space_file(&space, &path)?;
    println!("wrote {}", path.display());

    let back = read_space_file(&path)?;
    assert_eq!(back.len(), space.len());
    for i in 0..space.len() {
        assert_eq!(back.weights()[i], space.weights()[i]);
        for j in 0..space.len() {
            assert_eq!(back.dist(i, j), space.dist(i, j));
        }
    }
    println!("re-read space is bit-exact ({} points)", back.len());

    // A matrix that fails the triangle inequality is rejected with the
    // offending triple.
    let bad = Space::from_matrix(
        vec![q(0), q(1), q(5), q(1), q(0), q(1), q(5), q(1), q(0)],
        vec![q(1); 3],
        false,
        None,
    );
    match bad {
        Err(e) => println!("validation: {e}"),
        Ok(_) => unreachable!("matrix violates the triangle inequality"),
    }
    Ok(())
}

//! Integer lattice tools: Smith normal form, Hermite form and determinants.
//!
//! Run with `cargo run --example lattice`.

use toric_residue::intmat::{det, hermite_rows, matmul, smith_normal_form};

fn main() {
    // Rays of the weighted projective plane P(1,1,2) as rows.
    let rays = vec![vec![-1, -2], vec![1, 0], vec![0, 1]];
    let d = smith_normal_form(&rays);
    println!("rays           = {rays:?}");
    println!("U * A * V = S  : S = {:?}", d.s);
    println!("invariant factors {:?}, rank {}", d.diagonal(), d.rank());
    assert_eq!(matmul(&matmul(&d.u, &rays), &d.v), d.s);
    println!("det U = {}, det V = {}", det(&d.u), det(&d.v));
    println!("Hermite rows of [[2,4],[6,8]]: {:?}", hermite_rows(&[vec![2, 4], vec![6, 8]]));
}

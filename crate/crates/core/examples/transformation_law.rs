//! The transformation law res_F(H) = res_G(H det A) for G = A F.
//!
//! Run with `cargo run --example transformation_law`.

use std::error::Error;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use toric_residue::io::{fixtures_dir, load_problem};
use toric_residue::poly::MultiPoly;
use toric_residue::residue::{random_gtl_trials, verify_gtl, PolySystem, ResidueProblem};

fn main() -> Result<(), Box<dyn Error>> {
    // diag(x, y) on P^1: F = (x, y) becomes G = (x^2, y^2).
    let lp = load_problem(&fixtures_dir().join("p1_linear.problem.json"))?;
    let sys = PolySystem::new(lp.fan, lp.grading, lp.f, lp.order)?;
    let pr = ResidueProblem::new(sys, 0)?;
    let a = vec![vec![MultiPoly::var(2, 0), MultiPoly::zero(2)], vec![MultiPoly::zero(2), MultiPoly::var(2, 1)]];
    let o = verify_gtl(&pr, &a, &MultiPoly::one(2))?;
    println!("diag(x,y): res_F(1) = {}, res_G(xy) = {}, holds {}", o.lhs, o.rhs, o.holds);

    let seed = 7;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let lp = load_problem(&fixtures_dir().join("p2_generic.problem.json"))?;
    let sys = PolySystem::new(lp.fan, lp.grading, lp.f, lp.order)?;
    let pr = ResidueProblem::new(sys.clone(), 0)?;
    let h = MultiPoly::parse("x0*x1*x2", sys.names())?;
    for (i, (_, o)) in random_gtl_trials(&pr, &h, 5, true, &mut rng)?.iter().enumerate() {
        println!("random A #{i} (seed {seed}): {} = {} -> {}", o.lhs, o.rhs, o.holds);
    }
    Ok(())
}

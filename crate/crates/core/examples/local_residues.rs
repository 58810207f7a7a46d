//! Numeric cross-check: the symbolic residue equals a sum of Grothendieck
//! local residues over the torus zeros of n of the n+1 polynomials.
//!
//! Run with `cargo run --example local_residues`.

use std::error::Error;

use toric_residue::io::{fixtures_dir, load_problem};
use toric_residue::local::{sum_local_residues, LocalError};
use toric_residue::poly::MultiPoly;
use toric_residue::residue::{PolySystem, ResidueProblem};

fn main() -> Result<(), Box<dyn Error>> {
    let seed = 1;
    for (name, h) in [("p1_local_sum", "y"), ("p2_generic", "x0^3"), ("wp112_generic", "x0*x1")] {
        let lp = load_problem(&fixtures_dir().join(format!("{name}.problem.json")))?;
        let sys = PolySystem::new(lp.fan, lp.grading, lp.f, lp.order)?;
        let pr = ResidueProblem::new(sys.clone(), 0)?;
        let h = MultiPoly::parse(h, sys.names())?;
        println!("{name}: symbolic res({}) = {}", sys.fmt_poly(&h), pr.residue(&h)?);
        for k in 0..sys.polys().len() {
            match sum_local_residues(&sys, pr.basis(), &h, k, 0, seed) {
                Ok(s) => println!("  k = {k}: {} zeros, sum = {:.12}", s.zeros.zeros.len(), s.value),
                Err(e @ LocalError::NotInTorus { .. }) => println!("  k = {k}: skipped ({e})"),
                Err(e) => return Err(e.into()),
            }
        }
    }
    // A configuration whose zeros are not isolated is refused.
    let lp = load_problem(&fixtures_dir().join("p1xp1_infinite.problem.json"))?;
    let sys = PolySystem::new(lp.fan, lp.grading, lp.f, lp.order)?;
    let basis = sys.fan().oriented_basis(0)?;
    let err = sum_local_residues(&sys, &basis, &MultiPoly::one(sys.fan().num_rays()), 0, 0, seed).unwrap_err();
    println!("p1xp1_infinite: {err}");
    Ok(())
}

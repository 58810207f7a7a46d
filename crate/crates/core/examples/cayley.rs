//! The Cayley trick: the projective bundle Y, its fan, polytope and the
//! single polynomial F = sum y_j F_j.
//!
//! Run with `cargo run --example cayley`.

use std::error::Error;

use toric_residue::cayley::build_cayley_from_degrees;
use toric_residue::io::{fixtures_dir, load_problem};
use toric_residue::residue::PolySystem;

fn main() -> Result<(), Box<dyn Error>> {
    for name in ["p1_linear", "p1xp1_ample"] {
        let lp = load_problem(&fixtures_dir().join(format!("{name}.problem.json")))?;
        let sys = PolySystem::new(lp.fan.clone(), lp.grading.clone(), lp.f, lp.order)?;
        let cd = build_cayley_from_degrees(&lp.fan, &lp.grading, sys.degrees())?;
        println!("{name}: Y has {} rays, {} facets", cd.num_vars(), cd.facet_count());
        for (v, ray) in cd.names().iter().zip(cd.rays()) {
            println!("  {v}: {ray:?}");
        }
        let f = cd.cayley_polynomial(sys.polys());
        println!("  F = {}", f.display(cd.names()));
        println!("  gamma = {}", cd.gamma());
        println!("  polytope equality: {}", cd.cayley_polytope_check()?);
        let rep = cd.equal_degree_check(sys.polys(), &lp.grading)?;
        println!(
            "  rho identity {}, |R_rho| = {}, |S_rho| = {}, R_rho = S_rho {}",
            rep.rho_identity, rep.r_rho_count, rep.s_rho_count, rep.r_rho_equals_s_rho
        );
    }
    Ok(())
}

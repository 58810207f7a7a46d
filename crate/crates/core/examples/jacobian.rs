//! The toric Jacobian has residue equal to the intersection number (D^n).
//!
//! Run with `cargo run --example jacobian`.

use std::error::Error;

use toric_residue::io::{fixtures_dir, load_problem};
use toric_residue::residue::{jacobian_residue_check, PolySystem, ResidueProblem};

fn main() -> Result<(), Box<dyn Error>> {
    for name in ["p2_linear", "p2_generic", "p1xp1_ample", "p1_cubic"] {
        let lp = load_problem(&fixtures_dir().join(format!("{name}.problem.json")))?;
        let sys = PolySystem::new(lp.fan, lp.grading, lp.f, lp.order)?;
        let pr = ResidueProblem::new(sys.clone(), 0)?;
        let o = jacobian_residue_check(&pr)?;
        println!(
            "{name:12} J = {}\n{:12} res(J) = {}, (D^n) = {}, holds {}",
            sys.fmt_poly(&o.jacobian),
            "",
            o.residue,
            o.intersection,
            o.holds
        );
    }
    Ok(())
}

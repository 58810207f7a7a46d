//! Toric residues as normalised coefficients of Groebner normal forms.
//!
//! Run with `cargo run --example residue`.

use std::error::Error;

use toric_residue::io::{fixtures_dir, load_problem};
use toric_residue::poly::MultiPoly;
use toric_residue::residue::{residues_over_all_cones, PolySystem, ResidueProblem};

fn main() -> Result<(), Box<dyn Error>> {
    let lp = load_problem(&fixtures_dir().join("pentagon_qample.problem.json"))?;
    let sys = PolySystem::new(lp.fan, lp.grading, lp.f, lp.order)?;
    println!("rho = {}", sys.rho());
    let pr = ResidueProblem::new(sys.clone(), 0)?;
    println!("x^alpha     = {}", sys.fmt_mono(pr.x_alpha()));
    println!("Delta_sigma = {}", sys.fmt_poly(pr.delta_sigma()));
    println!("c_sigma     = {}", pr.c_sigma());
    for h in ["x^3*t^3*u^7", "y^3*z^6*t^3*u"] {
        let h = MultiPoly::parse(h, sys.names())?;
        println!("res({}) = {}", sys.fmt_poly(&h), pr.residue(&h)?);
    }
    // The value does not depend on the cone used to compute it.
    let values = residues_over_all_cones(&sys, pr.delta_sigma())?;
    let shown: Vec<String> = values.iter().map(|v| v.to_string()).collect();
    println!("res(Delta_sigma) through every cone: [{}]", shown.join(", "));
    // A full report, as printed by the command-line tool with --json.
    let report = pr.report(pr.delta_sigma())?;
    println!("{}", serde_json::to_string_pretty(&report)?);
    Ok(())
}

//! Hypothesis diagnostics: irrelevant ideal membership, the codimension-one
//! test and the variable-annihilation test.
//!
//! Run with `cargo run --example codim_one`.

use std::error::Error;

use toric_residue::io::{fixtures_dir, load_problem};
use toric_residue::residue::{in_irrelevant_ideal, PolySystem};

fn main() -> Result<(), Box<dyn Error>> {
    for name in ["pentagon_qample", "pentagon_boundary", "p1xp1_codim_fail", "pentagon_no_annihilation"] {
        let lp = load_problem(&fixtures_dir().join(format!("{name}.problem.json")))?;
        let sys = PolySystem::new(lp.fan, lp.grading, lp.f, lp.order)?;
        let in_b: Vec<bool> = sys.polys().iter().map(|f| in_irrelevant_ideal(f, sys.fan())).collect();
        let c = sys.codim_one_check()?;
        let standard: Vec<String> = c.standard.iter().map(|e| sys.fmt_mono(e)).collect();
        println!("{name}: rho = {}, |S_rho| = {}, F_i in B: {in_b:?}", sys.rho(), c.rho_basis.len());
        println!("  codim one: {} (standard monomials {standard:?})", c.codim_one);
        let failures = sys.variable_annihilation_check()?;
        for (i, m) in failures.iter().take(3) {
            println!("  {} * {} has nonzero normal form", sys.names()[*i], sys.fmt_mono(m));
        }
        if failures.is_empty() {
            println!("  every x_i annihilates the residue class");
        }
    }
    Ok(())
}

//! Graded pieces S_alpha as lattice points of divisor polytopes, plus
//! Cartier/ampleness tests and intersection numbers.
//!
//! Run with `cargo run --example monomials`.

use std::error::Error;

use toric_residue::divisor::{is_ample_class, is_cartier_class, is_q_ample_class};
use toric_residue::grading::DegreeClass;
use toric_residue::io::{fixtures_dir, load_fan};
use toric_residue::poly::format_monomial;
use toric_residue::polytope::{intersection_number, monomial_basis};

fn main() -> Result<(), Box<dyn Error>> {
    let lf = load_fan(&fixtures_dir().join("pentagon.fan.json"))?;
    let (fan, g) = (&lf.fan, &lf.grading);
    for class in ["(2,3,1)", "(1,3,2)", "(3,6,4)"] {
        let alpha = g.adopt(&DegreeClass::parse(class)?)?;
        let monos = monomial_basis(fan, g, &alpha)?;
        println!(
            "{class}: {} monomials, Cartier {}, ample {}, Q-ample {}",
            monos.len(),
            is_cartier_class(fan, g, &alpha)?.cartier,
            is_ample_class(fan, g, &alpha)?,
            is_q_ample_class(fan, g, &alpha)?
        );
    }
    let alpha = g.adopt(&DegreeClass::parse("(2,3,1)")?)?;
    let shown: Vec<String> =
        monomial_basis(fan, g, &alpha)?.iter().map(|e| format_monomial(e, fan.variables())).collect();
    println!("S_(2,3,1) = {{{}}}", shown.join(", "));

    let p2 = load_fan(&fixtures_dir().join("p2.fan.json"))?;
    for d in 1..=3 {
        let alpha = p2.grading.adopt(&DegreeClass::free(vec![d]))?;
        println!("P^2: (D^2) for D = O({d}) is {}", intersection_number(&p2.fan, &p2.grading, &alpha)?);
    }
    Ok(())
}

//! Class-group gradings of Cox rings computed from the rays of a fan.
//!
//! Run with `cargo run --example grading`.

use std::error::Error;

use toric_residue::io::{fixtures_dir, load_fan};

fn main() -> Result<(), Box<dyn Error>> {
    for name in ["p2", "p1xp1", "wp112", "pentagon"] {
        let lf = load_fan(&fixtures_dir().join(format!("{name}.fan.json")))?;
        let (fan, g) = (&lf.fan, &lf.grading);
        let degrees: Vec<String> =
            (0..fan.num_rays()).map(|i| format!("{}:{}", fan.variables()[i], g.var_degree(i))).collect();
        println!(
            "{name:6} free rank {}, torsion {:?}, degrees [{}], beta = {}",
            g.free_rank(),
            g.torsion(),
            degrees.join(", "),
            g.beta()
        );
        // Characters m in M have degree zero: deg(sum <m, eta_i> D_i) = 0.
        let m: Vec<i64> = (1..=fan.dim() as i64).collect();
        let a: Vec<i64> = fan.rays().iter().map(|eta| eta.iter().zip(&m).map(|(x, y)| x * y).sum()).collect();
        assert!(g.degree_of_divisor(&a).is_zero());
    }
    Ok(())
}

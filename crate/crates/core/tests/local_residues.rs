//! Symbolic residues against sums of local residues over torus zeros.

mod common;

use common::{loaded, poly, problem, system};
use num_complex::Complex64;
use toric_residue::local::{agrees, euler_jacobi_check, sum_local_residues, LocalError};
use toric_residue::poly::MultiPoly;

const TOL: f64 = 1e-8;

#[test]
fn numeric_sum_matches_symbolic_residue() {
    let cases = [
        ("p1_local_sum", vec!["y"]),
        ("p2_generic", vec!["x0*x1*x2", "x0^3", "x1^2*x2"]),
        ("p1xp1_ample", vec!["x*z", "y*t", "x*t"]),
        ("wp112_generic", vec!["x2", "x0^2", "x0*x1"]),
    ];
    for (name, hs) in cases {
        let sys = system(name);
        let n_cones = sys.fan().max_cones().len();
        for sigma in 0..n_cones {
            let pr = problem(name, sigma);
            for h in &hs {
                let h = poly(&sys, h);
                let exact = pr.residue(&h).unwrap();
                let mut seen = 0;
                for k in 0..sys.polys().len() {
                    match sum_local_residues(&sys, pr.basis(), &h, k, sigma, 7) {
                        Ok(s) => {
                            seen += 1;
                            assert!(agrees(s.value, &exact, TOL), "{name} sigma {sigma} k {k}: {} vs {exact}", s.value);
                            assert_eq!(s.seed, 7);
                        }
                        Err(LocalError::NotInTorus { .. }) => {}
                        Err(e) => panic!("{name} sigma {sigma} k {k}: {e}"),
                    }
                }
                assert!(seen > 0, "{name}: no admissible k");
            }
        }
    }
}

#[test]
fn local_sum_on_p1() {
    let pr = problem("p1_local_sum", 0);
    let sys = pr.system();
    let h = poly(sys, "y");
    assert_eq!(pr.residue(&h).unwrap(), toric_residue::linalg::q(-1));
    let s = sum_local_residues(sys, pr.basis(), &h, 0, 0, 1).unwrap();
    assert!((s.value - Complex64::new(-1.0, 0.0)).norm() < TOL);
    assert_eq!(s.zeros.zeros.len(), 2);
}

#[test]
fn positive_dimensional_chart_is_refused() {
    let lp = loaded("p1xp1_infinite");
    let sys = toric_residue::residue::PolySystem::new(lp.fan, lp.grading, lp.f, lp.order).unwrap();
    let basis = sys.fan().oriented_basis(0).unwrap();
    let h = MultiPoly::one(sys.fan().num_rays());
    let err = sum_local_residues(&sys, &basis, &h, 0, 0, 0).unwrap_err();
    assert!(matches!(err, LocalError::InfiniteIntersection { .. }), "{err}");
}

#[test]
fn seed_makes_runs_reproducible() {
    let pr = problem("p2_generic", 1);
    let sys = pr.system();
    let h = poly(sys, "x0^3");
    let a = sum_local_residues(sys, pr.basis(), &h, 2, 1, 99).unwrap();
    let b = sum_local_residues(sys, pr.basis(), &h, 2, 1, 99).unwrap();
    assert_eq!(a, b);
}

#[test]
fn euler_jacobi_vanishing() {
    let sys = system("p2_generic");
    // Two generic conics; the sum of their Newton polygons is 4 * simplex.
    // `a*b` lies in its interior, `a^3*b` on its boundary.
    let names: Vec<String> = ["a", "b"].iter().map(|s| s.to_string()).collect();
    let f = [
        MultiPoly::parse("a^2 + 3*a*b - b^2 + 2*a - b + 5", &names).unwrap(),
        MultiPoly::parse("2*a^2 - a*b + b^2 - a + 3*b - 1", &names).unwrap(),
    ];
    let inside = MultiPoly::parse("a*b", &names).unwrap();
    let (_, ok) = euler_jacobi_check(sys.fan(), &f, &inside, 3).unwrap();
    assert!(ok);
    let outside = MultiPoly::parse("a^3*b", &names).unwrap();
    let (_, ok) = euler_jacobi_check(sys.fan(), &f, &outside, 3).unwrap();
    assert!(!ok);
}

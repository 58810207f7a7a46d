//! The worked examples: gradings, irrelevant ideals, codimension one,
//! variable annihilation, canonical elements, Jacobians and Cayley data.

mod common;

use common::{loaded, poly, problem, system};
use num_traits::{One, Signed};
use toric_residue::cayley::build_cayley_from_degrees;
use toric_residue::grading::DegreeClass;
use toric_residue::groebner::irrelevant_generators;
use toric_residue::linalg::{q, q_frac, Q};
use toric_residue::poly::format_monomial;
use toric_residue::residue::{
    in_irrelevant_ideal, jacobian_residue_check, residues_over_all_cones, ResidueError, ResidueProblem, TieBreak,
};

fn classes(v: &[DegreeClass]) -> Vec<String> {
    v.iter().map(|d| d.to_string()).collect()
}

#[test]
fn five_ray_surface_end_to_end() {
    let lp = loaded("pentagon_qample");
    let gens: Vec<String> =
        irrelevant_generators(&lp.fan).iter().map(|e| format_monomial(e, lp.fan.variables())).collect();
    assert_eq!(gens, ["z*t*u", "x*t*u", "x*y*u", "x*y*z", "y*z*t"]);
    let sys = system("pentagon_qample");
    assert_eq!(classes(sys.degrees()), ["(2,3,1)", "(1,3,2)", "(1,3,2)"]);
    assert_eq!(sys.grading().beta().to_string(), "(1,3,1)");
    for a in sys.ampleness().unwrap() {
        assert!(a.q_ample && !a.cartier && !a.ample);
    }
    assert!(sys.polys().iter().all(|f| in_irrelevant_ideal(f, sys.fan())));
    assert!(sys.no_common_zeros().ok);
    assert_eq!(sys.rho().to_string(), "(3,6,4)");
    let c = sys.codim_one_check().unwrap();
    assert_eq!(c.rho_basis.len(), 22);
    assert!(c.codim_one);
    assert_eq!(sys.fmt_mono(c.x_alpha().unwrap()), "x^3*t^3*u^7");
    // Every degree-rho normal form is a multiple of x^3 t^3 u^7.
    for e in &c.rho_basis {
        let nf = sys.normal_form(&toric_residue::poly::MultiPoly::monomial(e.clone(), Q::one()));
        assert!(nf.exponents().all(|m| m == c.x_alpha().unwrap()), "{}", sys.fmt_poly(&nf));
    }
    let pr = problem("pentagon_qample", 0);
    assert_eq!(sys.fmt_poly(pr.delta_sigma()), "y^3*z^6*t^3*u + y^2*z^5*t^4*u^2");
    assert_eq!(pr.c_sigma(), &q_frac(-1, 2));
    assert_eq!(pr.residue(&poly(&sys, "x^3*t^3*u^7")).unwrap(), q(-2));
    assert!(sys.variable_annihilation_check().unwrap().is_empty());
}

#[test]
fn non_ample_degrees_still_codim_one() {
    let sys = system("pentagon_boundary");
    assert_eq!(sys.rho().to_string(), "(1,2,1)");
    let c = sys.codim_one_check().unwrap();
    assert_eq!(c.rho_basis.len(), 4);
    assert!(c.codim_one);
    assert!(sys.polys().iter().all(|f| in_irrelevant_ideal(f, sys.fan())));
    assert!(sys.ampleness().unwrap().iter().all(|a| !a.q_ample));
    assert!(sys.variable_annihilation_check().unwrap().is_empty());
}

#[test]
fn codim_one_fails_outside_irrelevant_ideal() {
    let sys = system("p1xp1_codim_fail");
    assert!(!in_irrelevant_ideal(&sys.polys()[0], sys.fan()));
    assert_eq!(sys.rho().to_string(), "(2,0)");
    let c = sys.codim_one_check().unwrap();
    assert!(!c.codim_one);
    let allowed = ["x^2", "x*y", "y^2"];
    assert!(c.standard.len() > 1);
    for e in &c.standard {
        assert!(allowed.contains(&sys.fmt_mono(e).as_str()));
    }
    // x * S_rho is not inside the ideal: no degree-(3,0) monomial is.
    for m in ["x^3", "x^2*y", "x*y^2", "y^3"] {
        assert!(!sys.ideal_member(&poly(&sys, m)), "{m}");
    }
    assert!(matches!(ResidueProblem::new(sys, 0), Err(ResidueError::HypothesesFailed(_))));
}

#[test]
fn codim_one_without_annihilation() {
    let sys = system("pentagon_no_annihilation");
    assert!(sys.codim_one_check().unwrap().codim_one);
    assert!(!in_irrelevant_ideal(&sys.polys()[2], sys.fan()));
    let witness = poly(&sys, "x*x*y*z*u");
    assert!(!sys.normal_form(&witness).is_zero());
    let failures = sys.variable_annihilation_check().unwrap();
    assert!(failures.iter().any(|(i, m)| *i == 0 && sys.fmt_mono(m) == "x*y*z*u"));
}

#[test]
fn canonical_element_has_residue_one_everywhere() {
    for name in ["p2_fermat", "p2_generic", "p1xp1_ample", "wp112", "wp112_generic", "pentagon_qample", "p1_cubic"] {
        let sys = system(name);
        let n_cones = sys.fan().max_cones().len();
        for sigma in 0..n_cones {
            let pr = ResidueProblem::new(sys.clone(), sigma).unwrap();
            assert_eq!(pr.residue(pr.delta_sigma()).unwrap(), Q::one(), "{name} sigma {sigma}");
        }
        // Sigma-independence of res_F(H) relative to one fixed basis.
        let pr = problem(name, 0);
        let vals = residues_over_all_cones(&sys, pr.delta_sigma()).unwrap();
        assert!(vals.windows(2).all(|w| w[0] == w[1]), "{name}: {vals:?}");
    }
}

#[test]
fn canonical_element_does_not_depend_on_tie_break() {
    for name in ["p2_generic", "p1xp1_ample", "wp112_generic", "pentagon_qample"] {
        let sys = system(name);
        for sigma in 0..sys.fan().max_cones().len() {
            let pr = ResidueProblem::new(sys.clone(), sigma).unwrap();
            let other = pr.delta_with(TieBreak::HighestIndex).unwrap();
            assert!(sys.ideal_member(&(pr.delta_sigma() - &other)), "{name} sigma {sigma}");
        }
    }
}

#[test]
fn weighted_projective_plane() {
    let sys = system("wp112");
    assert_eq!(classes(sys.degrees()), ["2", "2", "4"]);
    let pr = problem("wp112", 0);
    assert_eq!(pr.residue(&poly(&sys, "x2^2")).unwrap(), q(-1));
    assert_eq!(sys.fan().group_order(0).unwrap(), 2);
}

#[test]
fn jacobian_residue_is_the_intersection_number() {
    for (name, expected) in [("p2_linear", 1), ("p2_generic", 4), ("p1xp1_ample", 2), ("p1_cubic", 3)] {
        let o = jacobian_residue_check(&problem(name, 0)).unwrap();
        assert_eq!(o.intersection, expected, "{name}");
        assert_eq!(o.residue.abs(), q(expected), "{name}");
        assert!(o.holds);
    }
}

#[test]
fn cayley_checks_on_p1_and_p1xp1() {
    for name in ["p1_linear", "p1_local_sum", "p1xp1_ample"] {
        let lp = loaded(name);
        let sys = system(name);
        let cd = build_cayley_from_degrees(&lp.fan, &lp.grading, sys.degrees()).unwrap();
        assert!(cd.cayley_polytope_check().unwrap(), "{name}");
        let rep = cd.equal_degree_check(sys.polys(), &lp.grading).unwrap();
        assert!(rep.rho_identity && rep.r_rho_equals_s_rho, "{name}: {rep:?}");
        assert_eq!(rep.r_rho_count, sys.codim_one_check().unwrap().rho_basis.len());
        assert!(cd.jacobian_ideal_degree_check(sys.polys(), &lp.grading).unwrap());
        // Forgetting the e-coordinates recovers the base rays.
        let n = lp.fan.dim();
        for (lift, eta) in cd.lifted_rays().iter().zip(lp.fan.rays()) {
            assert_eq!(&lift[n..], &eta[..]);
        }
        // Facets: one per base ray plus the n+1 fibre facets.
        assert_eq!(cd.facet_count(), lp.fan.num_rays() + n + 1, "{name}");
    }
}

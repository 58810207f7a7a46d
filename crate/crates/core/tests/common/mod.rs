//! Shared helpers for the integration tests.
#![allow(dead_code)]

use toric_residue::io::{fixtures_dir, load_problem, LoadedProblem};
use toric_residue::poly::MultiPoly;
use toric_residue::residue::{PolySystem, ResidueProblem};

pub fn fixture_path(name: &str) -> String {
    fixtures_dir().join(name).to_string_lossy().into_owned()
}

pub fn loaded(name: &str) -> LoadedProblem {
    load_problem(&fixtures_dir().join(format!("{name}.problem.json"))).unwrap()
}

pub fn system(name: &str) -> PolySystem {
    let lp = loaded(name);
    PolySystem::new(lp.fan, lp.grading, lp.f, lp.order).unwrap()
}

pub fn problem(name: &str, sigma: usize) -> ResidueProblem {
    ResidueProblem::new(system(name), sigma).unwrap()
}

pub fn poly(sys: &PolySystem, s: &str) -> MultiPoly {
    MultiPoly::parse(s, sys.names()).unwrap()
}

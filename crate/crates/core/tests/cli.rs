//! The command-line surface: reports, exit codes and JSON round-trips.

mod common;

use common::fixture_path;
use toric_residue::cli::{run_from_args, Outcome};
use toric_residue::residue::ResidueReport;

fn run(args: &[&str]) -> Outcome {
    let mut all = vec!["toric-residue".to_string()];
    all.extend(args.iter().map(|a| {
        if a.ends_with(".json") && !a.starts_with('/') {
            fixture_path(a)
        } else {
            a.to_string()
        }
    }));
    run_from_args(all)
}

#[test]
fn grading_reports_beta() {
    let o = run(&["grading", "pentagon.fan.json"]);
    assert_eq!(o.code, 0);
    assert!(o.output.contains("beta = (1,3,1)"), "{}", o.output);
    let o = run(&["grading", "p1xp1.fan.json"]);
    assert!(o.output.contains("beta = (2,2)"));
}

#[test]
fn malformed_and_invalid_files() {
    let dir = std::env::temp_dir().join(format!("toric-residue-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.json");
    std::fs::write(&bad, "{ \"dim\": 1, ").unwrap();
    assert_eq!(run(&["grading", bad.to_str().unwrap()]).code, 2);
    let incomplete = dir.join("incomplete.json");
    std::fs::write(&incomplete, r#"{"dim":2,"rays":[[1,0],[0,1]],"max_cones":[[1,2]]}"#).unwrap();
    assert_eq!(run(&["grading", incomplete.to_str().unwrap()]).code, 3);
    let wrong_table = dir.join("table.json");
    std::fs::write(&wrong_table, r#"{"dim":1,"rays":[[1],[-1]],"max_cones":[[1],[2]],"degree_basis":[[1,2]]}"#)
        .unwrap();
    assert_eq!(run(&["grading", wrong_table.to_str().unwrap()]).code, 3);
    assert_eq!(run(&["no-such-command"]).code, 2);
    assert_eq!(run(&["residue", "p1_local_sum.problem.json", "--H", "x^^2"]).code, 2);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn residue_exit_codes() {
    let o = run(&["residue", "pentagon_qample.problem.json", "--H", "x^3*t^3*u^7"]);
    assert_eq!(o.code, 0);
    assert!(o.output.contains("res(x^3*t^3*u^7) = -2"), "{}", o.output);
    assert!(o.output.contains("|S_rho|: 22"));
    assert_eq!(run(&["residue", "p1xp1_codim_fail.problem.json"]).code, 5);
    assert_eq!(run(&["residue", "p1_local_sum.problem.json", "--H", "x^2"]).code, 4);
    assert_eq!(run(&["residue", "pentagon_no_annihilation.problem.json"]).code, 4);
    assert_eq!(run(&["residue", "p1_local_sum.problem.json", "--sigma", "3"]).code, 2);
}

#[test]
fn residue_json_round_trips() {
    let o = run(&["--json", "residue", "p2_generic.problem.json"]);
    assert_eq!(o.code, 0);
    let v: serde_json::Value = serde_json::from_str(&o.output).unwrap();
    let reports: Vec<ResidueReport> = serde_json::from_value(v["reports"].clone()).unwrap();
    assert_eq!(reports[0].residue.0, toric_residue::linalg::q_frac(12, 53));
    let again = serde_json::to_value(&reports).unwrap();
    assert_eq!(again, v["reports"]);
    let back: Vec<ResidueReport> = serde_json::from_value(again).unwrap();
    assert_eq!(back, reports);
}

#[test]
fn checks_pass_and_fail() {
    let o = run(&["check", "codim1", "pentagon_boundary.problem.json"]);
    assert_eq!(o.code, 0, "{}", o.output);
    let o = run(&["check", "annihilation", "pentagon_no_annihilation.problem.json"]);
    assert_eq!(o.code, 1);
    assert!(o.output.contains("x * x*y*z*u"), "{}", o.output);
    let o = run(&["check", "theorem04", "p1_local_sum.problem.json"]);
    assert_eq!(o.code, 0, "{}", o.output);
    assert!(o.output.contains("seed: "));
    let o = run(&["check", "theorem04", "p1xp1_infinite.problem.json"]);
    assert_eq!(o.code, 4);
    assert!(o.output.contains("infinite"), "{}", o.output);
    let o = run(&["--json", "check", "theorem04", "p1xp1_infinite.problem.json"]);
    assert!(o.output.contains("\"InfiniteIntersection\""));
    let o = run(&["check", "jacobian", "p1_cubic.problem.json"]);
    assert_eq!(o.code, 0);
    let o = run(&["check", "cayley", "p1xp1_ample.problem.json"]);
    assert_eq!(o.code, 0, "{}", o.output);
    let o = run(&["check", "codim1", "p1xp1_codim_fail.problem.json"]);
    assert_eq!(o.code, 1);
}

#[test]
fn gtl_check_reports_its_seed() {
    let o = run(&["--json", "--seed", "11", "check", "gtl", "p2_generic.problem.json", "--trials", "5"]);
    assert_eq!(o.code, 0, "{}", o.output);
    let v: serde_json::Value = serde_json::from_str(&o.output).unwrap();
    assert_eq!(v["seed"], 11);
    assert_eq!(v["cases"].as_array().unwrap().len(), 6);
    // Same seed, same report.
    let again = run(&["--json", "--seed", "11", "check", "gtl", "p2_generic.problem.json", "--trials", "5"]);
    assert_eq!(again.output, o.output);
}

#[test]
fn informational_commands() {
    let o = run(&["ample", "pentagon.fan.json", "--class", "(1,3,1)", "--class", "(2,3,1)"]);
    assert_eq!(o.code, 0);
    assert!(o.output.contains("(1,3,1): divisor"));
    assert!(o.output.contains("ample=true"));
    let o = run(&["bsigma", "pentagon.fan.json"]);
    assert!(o.output.contains("B(Sigma) = <z*t*u, x*t*u, x*y*u, x*y*z, y*z*t>"), "{}", o.output);
    let o = run(&["monomials", "pentagon_qample.problem.json"]);
    assert!(o.output.starts_with("degree (3,6,4): 22 monomials"), "{}", o.output);
    let o = run(&["delta", "p2_fermat.problem.json"]);
    assert!(o.output.contains("Delta_sigma = x0*x1*x2"), "{}", o.output);
    let o = run(&["delta", "p2_generic.problem.json", "--tie-break", "highest"]);
    assert_eq!(o.code, 0);
    let o = run(&["cayley", "p1_linear.problem.json"]);
    assert!(o.output.contains("y0: [-1, 0]"), "{}", o.output);
    let o = run(&["cone-xalpha", "p2.fan.json", "--class", "2"]);
    assert!(o.output.contains("x0: [2, 1, 0]"), "{}", o.output);
}

//! Drive the command-line interface in-process.
//!
//! Run with `cargo run --example cli`.

use toric_residue::cli::run_from_args;
use toric_residue::io::fixtures_dir;

fn main() {
    let fixture = |n: &str| fixtures_dir().join(n).to_string_lossy().into_owned();
    let runs: Vec<Vec<String>> = vec![
        vec!["grading".into(), fixture("pentagon.fan.json")],
        vec!["residue".into(), fixture("wp112_generic.problem.json")],
        vec!["--json".into(), "residue".into(), fixture("p2_linear.problem.json")],
        vec!["check".into(), "theorem04".into(), fixture("p1_local_sum.problem.json")],
        vec!["residue".into(), fixture("p1xp1_codim_fail.problem.json")],
    ];
    for args in runs {
        let out = run_from_args(std::iter::once("toric-residue".to_string()).chain(args.iter().cloned()));
        println!("$ toric-residue {}\n{}\n(exit {})\n", args.join(" "), out.output.trim_end(), out.code);
    }
}

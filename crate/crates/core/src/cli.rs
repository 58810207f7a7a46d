//! Command-line front end. Every command returns an [`Outcome`] (exit code
//! plus report text) so the whole surface is testable without a process.
//!
//! Exit codes: 0 ok, 1 check failed, 2 parse error, 3 invalid fan,
//! 4 hypotheses failed (or `H` of the wrong degree), 5 codimension not one.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::cayley::{build_cayley_from_degrees, CayleyError};
use crate::divisor;
use crate::fan::FanData;
use crate::grading::{DegreeClass, Grading};
use crate::groebner::{irrelevant_generators, MonomialOrder};
use crate::io::{load_fan, load_problem, parse_polys, IoError, LoadedProblem};
use crate::local::{agrees, sum_local_residues, LocalError};
use crate::poly::{format_monomial, poly_det, MultiPoly, PolyError};
use crate::polytope::{self, monomial_basis};
use crate::residue::{
    decomposition_matrix, irrelevant_ideal_witness, jacobian_residue_check, random_gtl_trials, verify_gtl, PolySystem,
    ResidueError, ResidueProblem, TieBreak,
};

/// Seed used when `--seed` is not given.
pub const DEFAULT_SEED: u64 = 20_240_601;
/// Absolute tolerance for numeric comparisons.
pub const NUMERIC_TOL: f64 = 1e-8;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_INVALID_FAN: i32 = 3;
pub const EXIT_HYPOTHESES: i32 = 4;
pub const EXIT_CODIM: i32 = 5;

#[derive(Debug, Parser)]
#[command(name = "toric-residue", version, about = "Toric residues via Groebner normal forms")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Emit a machine-readable JSON report (exact rationals as strings).
    #[arg(long, global = true)]
    pub json: bool,
    /// Seed for randomized steps (coordinate changes, random transformations).
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Variable degrees, anticanonical class and torsion of a fan.
    Grading { fan: PathBuf },
    /// Cartier / ample / Q-ample verdicts for degree classes (default: deg F_i of a problem).
    Ample {
        file: PathBuf,
        #[arg(long = "class")]
        classes: Vec<String>,
    },
    /// Generators of the irrelevant ideal; membership of each F_i for a problem.
    Bsigma { file: PathBuf },
    /// Monomials of a degree class (default: the critical degree of a problem).
    Monomials {
        file: PathBuf,
        #[arg(long)]
        class: Option<String>,
    },
    /// The toric residue of each H (default: the problem's H list, else Delta_sigma).
    Residue {
        problem: PathBuf,
        #[arg(long = "H")]
        h: Vec<String>,
        #[command(flatten)]
        opts: ProblemOpts,
    },
    /// The decomposition matrix and Delta_sigma.
    Delta {
        problem: PathBuf,
        #[command(flatten)]
        opts: ProblemOpts,
        #[arg(long, value_enum, default_value_t = TieBreakArg::Lowest)]
        tie_break: TieBreakArg,
    },
    /// Run one verification.
    Check {
        which: CheckKind,
        problem: PathBuf,
        #[command(flatten)]
        opts: ProblemOpts,
        /// Number of random transformations for `gtl`.
        #[arg(long, default_value_t = 20)]
        trials: usize,
    },
    /// Rays, grading and polytope of the Cayley bundle for a problem's degrees.
    Cayley { problem: PathBuf },
    /// Cone generators a_i e_0 + eta_i for a divisor class (first coordinate e_0).
    ConeXalpha {
        fan: PathBuf,
        #[arg(long)]
        class: String,
    },
}

#[derive(Debug, Clone, clap::Args)]
pub struct ProblemOpts {
    /// 1-based maximal cone (overrides the problem file).
    #[arg(long)]
    pub sigma: Option<usize>,
    /// Monomial order, e.g. `grevlex:x>y>z` (overrides the problem file).
    #[arg(long)]
    pub order: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TieBreakArg {
    Lowest,
    Highest,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CheckKind {
    Gtl,
    Theorem04,
    Jacobian,
    Codim1,
    Annihilation,
    Cayley,
}

/// Exit code plus report.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub output: String,
}

/// An error with its exit code.
struct Failure {
    code: i32,
    message: String,
}

impl From<IoError> for Failure {
    fn from(e: IoError) -> Self {
        Failure { code: e.exit_code(), message: e.to_string() }
    }
}

impl From<ResidueError> for Failure {
    fn from(e: ResidueError) -> Self {
        Failure { code: residue_exit_code(&e), message: e.to_string() }
    }
}

impl From<CayleyError> for Failure {
    fn from(e: CayleyError) -> Self {
        Failure { code: EXIT_HYPOTHESES, message: e.to_string() }
    }
}

/// Exit code for a residue-pipeline error.
pub fn residue_exit_code(e: &ResidueError) -> i32 {
    match e {
        ResidueError::CodimNotOne { .. } => EXIT_CODIM,
        ResidueError::Fan(_) => EXIT_INVALID_FAN,
        ResidueError::Poly(PolyError::Parse { .. } | PolyError::UnknownVariable { .. }) => EXIT_PARSE,
        _ => EXIT_HYPOTHESES,
    }
}

fn fail<T>(code: i32, message: impl Into<String>) -> Result<T, Failure> {
    Err(Failure { code, message: message.into() })
}

/// Parse arguments and run. Argument errors exit with code 2.
pub fn run_from_args<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARSE } else { EXIT_OK };
            Outcome { code, output: e.to_string() }
        }
    }
}

/// Run a parsed command.
pub fn run(cli: &Cli) -> Outcome {
    let result = match &cli.command {
        Command::Grading { fan } => cmd_grading(fan),
        Command::Ample { file, classes } => cmd_ample(file, classes),
        Command::Bsigma { file } => cmd_bsigma(file),
        Command::Monomials { file, class } => cmd_monomials(file, class.as_deref()),
        Command::Residue { problem, h, opts } => cmd_residue(problem, h, opts),
        Command::Delta { problem, opts, tie_break } => cmd_delta(problem, opts, *tie_break),
        Command::Check { which, problem, opts, trials } => cmd_check(*which, problem, opts, *trials, cli.seed),
        Command::Cayley { problem } => cmd_cayley(problem),
        Command::ConeXalpha { fan, class } => cmd_cone_xalpha(fan, class),
    };
    match result {
        Ok(r) => Outcome { code: r.code, output: if cli.json { pretty(&r.json) } else { r.text } },
        Err(f) => {
            let output = if cli.json {
                pretty(&json!({ "error": f.message, "exit_code": f.code }))
            } else {
                format!("error: {}\n", f.message)
            };
            Outcome { code: f.code, output }
        }
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

struct Report {
    code: i32,
    text: String,
    json: Value,
}

impl Report {
    fn ok(text: String, json: Value) -> Self {
        Report { code: EXIT_OK, text, json }
    }

    fn verdict(pass: bool, text: String, json: Value) -> Self {
        Report { code: if pass { EXIT_OK } else { EXIT_CHECK_FAILED }, text, json }
    }
}

/// Fan or problem file, decided by the presence of an `F` key.
enum Loaded {
    Fan(FanData, Grading),
    Problem(Box<LoadedProblem>),
}

fn load_any(path: &Path) -> Result<Loaded, Failure> {
    let text =
        std::fs::read_to_string(path).map_err(|e| IoError::Read { path: path.to_path_buf(), msg: e.to_string() })?;
    let v: Value =
        serde_json::from_str(&text).map_err(|e| IoError::Parse { path: path.to_path_buf(), msg: e.to_string() })?;
    if v.get("F").is_some() {
        Ok(Loaded::Problem(Box::new(load_problem(path)?)))
    } else {
        let lf = load_fan(path)?;
        Ok(Loaded::Fan(lf.fan, lf.grading))
    }
}

fn parse_class(s: &str, grading: &Grading) -> Result<DegreeClass, Failure> {
    let c = DegreeClass::parse(s).map_err(|e| Failure { code: EXIT_PARSE, message: e.to_string() })?;
    grading.adopt(&c).map_err(|e| Failure { code: EXIT_PARSE, message: e.to_string() })
}

fn system_of(lp: &LoadedProblem, opts: Option<&ProblemOpts>) -> Result<(PolySystem, usize), Failure> {
    let names = lp.fan.variables().to_vec();
    let order = match opts.and_then(|o| o.order.as_deref()) {
        Some(spec) => MonomialOrder::parse(spec, &names).map_err(IoError::from)?,
        None => lp.order.clone(),
    };
    let count = lp.fan.max_cones().len();
    let sigma = match opts.and_then(|o| o.sigma) {
        None => lp.sigma,
        Some(s) if (1..=count).contains(&s) => s - 1,
        Some(s) => return Err(IoError::BadSigma { sigma: s, count }.into()),
    };
    let sys = PolySystem::new(lp.fan.clone(), lp.grading.clone(), lp.f.clone(), order)?;
    Ok((sys, sigma))
}

fn problem_of(path: &Path, opts: &ProblemOpts) -> Result<(LoadedProblem, ResidueProblem), Failure> {
    let lp = load_problem(path)?;
    let (sys, sigma) = system_of(&lp, Some(opts))?;
    match ResidueProblem::new(sys.clone(), sigma) {
        Ok(pr) => Ok((lp, pr)),
        // A failed codimension-one test makes the algorithm inapplicable
        // whatever else fails, so it takes precedence (exit 5 over 4).
        Err(e @ ResidueError::HypothesesFailed(_)) => match sys.codim_one_check() {
            Ok(c) if !c.codim_one => fail(
                EXIT_CODIM,
                format!(
                    "S_rho / <F>_rho does not have dimension one (standard monomials {:?}); also {e}",
                    c.standard.iter().map(|m| sys.fmt_mono(m)).collect::<Vec<_>>()
                ),
            ),
            _ => Err(e.into()),
        },
        Err(e) => Err(e.into()),
    }
}

fn cmd_grading(path: &Path) -> Result<Report, Failure> {
    let lf = load_fan(path)?;
    let (fan, g) = (&lf.fan, &lf.grading);
    let mut text = String::new();
    let mut vars = Vec::new();
    writeln!(text, "provenance: {:?}", g.provenance()).unwrap();
    writeln!(text, "free rank: {}", g.free_rank()).unwrap();
    writeln!(text, "torsion: {:?}", g.torsion()).unwrap();
    for (i, name) in fan.variables().iter().enumerate() {
        let d = g.var_degree(i);
        writeln!(text, "deg {name} = {d}").unwrap();
        vars.push(json!({ "name": name, "degree": d.to_string() }));
    }
    writeln!(text, "beta = {}", g.beta()).unwrap();
    let json = json!({
        "provenance": format!("{:?}", g.provenance()),
        "free_rank": g.free_rank(),
        "torsion": g.torsion(),
        "variables": vars,
        "beta": g.beta().to_string(),
    });
    Ok(Report::ok(text, json))
}

fn cmd_ample(path: &Path, classes: &[String]) -> Result<Report, Failure> {
    let (fan, grading, list): (FanData, Grading, Vec<DegreeClass>) = match load_any(path)? {
        Loaded::Fan(fan, g) => {
            if classes.is_empty() {
                return fail(EXIT_PARSE, "give at least one --class for a fan file");
            }
            let list = classes.iter().map(|c| parse_class(c, &g)).collect::<Result<_, _>>()?;
            (fan, g, list)
        }
        Loaded::Problem(lp) => {
            let list = if classes.is_empty() {
                let (sys, _) = system_of(&lp, None)?;
                sys.degrees().to_vec()
            } else {
                classes.iter().map(|c| parse_class(c, &lp.grading)).collect::<Result<_, _>>()?
            };
            (lp.fan, lp.grading, list)
        }
    };
    let mut text = String::new();
    let mut rows = Vec::new();
    for class in &list {
        let a =
            grading.representative_divisor(class).map_err(|e| Failure { code: EXIT_PARSE, message: e.to_string() })?;
        let cartier = divisor::is_cartier(&fan, &a).cartier;
        let ample = divisor::is_ample(&fan, &a);
        let q_ample = divisor::is_q_ample(&fan, &a);
        writeln!(text, "{class}: divisor {a:?} cartier={cartier} ample={ample} q_ample={q_ample}").unwrap();
        rows.push(
            json!({ "class": class.to_string(), "divisor": a, "cartier": cartier, "ample": ample, "q_ample": q_ample }),
        );
    }
    Ok(Report::ok(text, json!({ "classes": rows })))
}

fn cmd_bsigma(path: &Path) -> Result<Report, Failure> {
    let loaded = load_any(path)?;
    let fan = match &loaded {
        Loaded::Fan(f, _) => f.clone(),
        Loaded::Problem(lp) => lp.fan.clone(),
    };
    let gens: Vec<String> = irrelevant_generators(&fan).iter().map(|e| format_monomial(e, fan.variables())).collect();
    let mut text = format!("B(Sigma) = <{}>\n", gens.join(", "));
    let mut members = Vec::new();
    if let Loaded::Problem(lp) = &loaded {
        for (j, f) in lp.f.iter().enumerate() {
            let w = irrelevant_ideal_witness(f, &fan).map(|e| format_monomial(&e, fan.variables()));
            match &w {
                None => writeln!(text, "F_{j} in B(Sigma)").unwrap(),
                Some(t) => writeln!(text, "F_{j} not in B(Sigma): term {t}").unwrap(),
            }
            members.push(json!({ "index": j, "member": w.is_none(), "witness": w }));
        }
    }
    Ok(Report::ok(text, json!({ "generators": gens, "members": members })))
}

fn cmd_monomials(path: &Path, class: Option<&str>) -> Result<Report, Failure> {
    let (fan, grading, alpha) = match (load_any(path)?, class) {
        (Loaded::Fan(fan, g), Some(c)) => {
            let a = parse_class(c, &g)?;
            (fan, g, a)
        }
        (Loaded::Fan(..), None) => return fail(EXIT_PARSE, "give --class for a fan file"),
        (Loaded::Problem(lp), c) => {
            let a = match c {
                Some(c) => parse_class(c, &lp.grading)?,
                None => system_of(&lp, None)?.0.rho().clone(),
            };
            (lp.fan, lp.grading, a)
        }
    };
    let monos = monomial_basis(&fan, &grading, &alpha)
        .map_err(|e| Failure { code: EXIT_HYPOTHESES, message: e.to_string() })?;
    let names: Vec<String> = monos.iter().map(|e| format_monomial(e, fan.variables())).collect();
    let text = format!("degree {alpha}: {} monomials\n{}\n", names.len(), names.join("\n"));
    Ok(Report::ok(text, json!({ "degree": alpha.to_string(), "count": names.len(), "monomials": names })))
}

fn cmd_residue(path: &Path, hs: &[String], opts: &ProblemOpts) -> Result<Report, Failure> {
    let (lp, pr) = problem_of(path, opts)?;
    let sys = pr.system();
    let h_list: Vec<MultiPoly> = if !hs.is_empty() {
        parse_polys(hs, sys.names())?
    } else if !lp.h.is_empty() {
        lp.h.clone()
    } else {
        vec![pr.delta_sigma().clone()]
    };
    let mut text = String::new();
    writeln!(text, "sigma: {} (cone {:?})", pr.sigma() + 1, cone_names(sys, pr.sigma())).unwrap();
    writeln!(text, "basis of M: {:?}", pr.basis()).unwrap();
    writeln!(text, "order: {}", sys.order().to_spec(sys.names())).unwrap();
    writeln!(text, "degrees: {}", sys.degrees().iter().map(|d| d.to_string()).collect::<Vec<_>>().join(", ")).unwrap();
    writeln!(text, "hypotheses: F_i in B(Sigma), no common zeros on X: ok").unwrap();
    let amp = sys.ampleness()?;
    writeln!(
        text,
        "ampleness (advisory): q_ample {:?}, cartier {:?}",
        amp.iter().map(|a| a.q_ample).collect::<Vec<_>>(),
        amp.iter().map(|a| a.cartier).collect::<Vec<_>>()
    )
    .unwrap();
    writeln!(text, "rho: {}", sys.rho()).unwrap();
    writeln!(text, "|S_rho|: {}", pr.codim().rho_basis.len()).unwrap();
    writeln!(text, "x^alpha: {}", sys.fmt_mono(pr.x_alpha())).unwrap();
    writeln!(text, "Delta_sigma: {}", sys.fmt_poly(pr.delta_sigma())).unwrap();
    writeln!(text, "c_sigma: {}", pr.c_sigma()).unwrap();
    let mut reports = Vec::new();
    for h in &h_list {
        let r = pr.report(h)?;
        writeln!(text, "res({}) = {}   [c = {}]", r.h, r.residue.0, r.c.0).unwrap();
        reports.push(r);
    }
    let json = serde_json::to_value(&reports).expect("reports serialize");
    Ok(Report::ok(text, json!({ "reports": json })))
}

fn cone_names(sys: &PolySystem, sigma: usize) -> Vec<String> {
    sys.fan().max_cones()[sigma].iter().map(|&i| sys.names()[i].clone()).collect()
}

fn cmd_delta(path: &Path, opts: &ProblemOpts, tie: TieBreakArg) -> Result<Report, Failure> {
    let lp = load_problem(path)?;
    let (sys, sigma) = system_of(&lp, Some(opts))?;
    let rule = match tie {
        TieBreakArg::Lowest => TieBreak::LowestIndex,
        TieBreakArg::Highest => TieBreak::HighestIndex,
    };
    let a = decomposition_matrix(sys.polys(), sys.fan(), sigma, rule)?;
    let delta = poly_det(&a).map_err(ResidueError::from)?;
    let mut rows_label = vec!["z_hat".to_string()];
    rows_label.extend(cone_names(&sys, sigma));
    let mut text = format!("sigma: {} (cone {:?})\n", sigma + 1, cone_names(&sys, sigma));
    let mut matrix = Vec::new();
    for (label, row) in rows_label.iter().zip(&a) {
        let cells: Vec<String> = row.iter().map(|p| sys.fmt_poly(p)).collect();
        writeln!(text, "{label}: [{}]", cells.join(", ")).unwrap();
        matrix.push(json!({ "row": label, "entries": cells }));
    }
    writeln!(text, "Delta_sigma = {}", sys.fmt_poly(&delta)).unwrap();
    let json = json!({ "sigma": sigma + 1, "matrix": matrix, "delta_sigma": sys.fmt_poly(&delta) });
    Ok(Report::ok(text, json))
}

fn cmd_check(which: CheckKind, path: &Path, opts: &ProblemOpts, trials: usize, seed: u64) -> Result<Report, Failure> {
    match which {
        CheckKind::Codim1 => check_codim1(path, opts),
        CheckKind::Annihilation => check_annihilation(path, opts),
        CheckKind::Gtl => check_gtl(path, opts, trials, seed),
        CheckKind::Theorem04 => check_theorem04(path, opts, seed),
        CheckKind::Jacobian => check_jacobian(path, opts),
        CheckKind::Cayley => check_cayley(path),
    }
}

fn pass_word(b: bool) -> &'static str {
    if b {
        "PASS"
    } else {
        "FAIL"
    }
}

fn check_codim1(path: &Path, opts: &ProblemOpts) -> Result<Report, Failure> {
    let lp = load_problem(path)?;
    let (sys, _) = system_of(&lp, Some(opts))?;
    let c = sys.codim_one_check()?;
    let standard: Vec<String> = c.standard.iter().map(|e| sys.fmt_mono(e)).collect();
    let text = format!(
        "{} codim1: rho = {}, |S_rho| = {}, standard monomials {:?}\n",
        pass_word(c.codim_one),
        sys.rho(),
        c.rho_basis.len(),
        standard
    );
    let json = json!({
        "check": "codim1", "pass": c.codim_one, "rho": sys.rho().to_string(),
        "rho_basis_size": c.rho_basis.len(), "standard": standard,
    });
    Ok(Report::verdict(c.codim_one, text, json))
}

fn check_annihilation(path: &Path, opts: &ProblemOpts) -> Result<Report, Failure> {
    let lp = load_problem(path)?;
    let (sys, _) = system_of(&lp, Some(opts))?;
    let failures = sys.variable_annihilation_check()?;
    let pass = failures.is_empty();
    let mut text = format!("{} annihilation: x_i * S_rho in <F> for every variable\n", pass_word(pass));
    let mut wit = Vec::new();
    for (i, m) in &failures {
        let var = &sys.names()[*i];
        let mono = sys.fmt_mono(m);
        writeln!(text, "  witness: {var} * {mono} not in <F>").unwrap();
        wit.push(json!({ "variable": var, "monomial": mono }));
    }
    Ok(Report::verdict(pass, text, json!({ "check": "annihilation", "pass": pass, "witnesses": wit })))
}

fn check_gtl(path: &Path, opts: &ProblemOpts, trials: usize, seed: u64) -> Result<Report, Failure> {
    let (lp, pr) = problem_of(path, opts)?;
    let sys = pr.system();
    let n = sys.polys().len();
    let nv = sys.fan().num_rays();
    let h = lp.h.first().cloned().unwrap_or_else(|| pr.delta_sigma().clone());
    let identity: Vec<Vec<MultiPoly>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { MultiPoly::one(nv) } else { MultiPoly::zero(nv) }).collect())
        .collect();
    let id = verify_gtl(&pr, &identity, &h)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let random = random_gtl_trials(&pr, &h, trials, true, &mut rng)?;
    let mut text = format!("seed: {seed}\nH = {}\n", sys.fmt_poly(&h));
    writeln!(text, "identity: lhs {} rhs {} {}", id.lhs, id.rhs, pass_word(id.holds)).unwrap();
    let mut rows =
        vec![json!({ "case": "identity", "lhs": id.lhs.to_string(), "rhs": id.rhs.to_string(), "holds": id.holds })];
    let mut pass = id.holds;
    for (t, (a, o)) in random.iter().enumerate() {
        let det = poly_det(a).map_err(ResidueError::from)?;
        writeln!(
            text,
            "random #{}: det A = {}, lhs {} rhs {} {}",
            t + 1,
            sys.fmt_poly(&det),
            o.lhs,
            o.rhs,
            pass_word(o.holds)
        )
        .unwrap();
        rows.push(json!({ "case": format!("random {}", t + 1), "det": sys.fmt_poly(&det), "lhs": o.lhs.to_string(), "rhs": o.rhs.to_string(), "holds": o.holds }));
        pass &= o.holds;
    }
    writeln!(text, "{} gtl", pass_word(pass)).unwrap();
    Ok(Report::verdict(pass, text, json!({ "check": "gtl", "seed": seed, "pass": pass, "cases": rows })))
}

fn local_exit_code(e: &LocalError) -> i32 {
    match e {
        LocalError::NotConverged(_) | LocalError::Clustered(_) | LocalError::NotShapePosition(_) => EXIT_CHECK_FAILED,
        LocalError::Residue(r) => residue_exit_code(r),
        _ => EXIT_HYPOTHESES,
    }
}

fn check_theorem04(path: &Path, opts: &ProblemOpts, seed: u64) -> Result<Report, Failure> {
    let lp = load_problem(path)?;
    let (sys, sigma) = system_of(&lp, Some(opts))?;
    // The numeric side needs only no common zeros; the symbolic side also
    // needs the residue hypotheses. Run the numeric side regardless, so that
    // configurations outside the local-sum setting are refused with the right reason.
    let symbolic = ResidueProblem::new(sys.clone(), sigma);
    let basis = sys.fan().oriented_basis(sigma).map_err(ResidueError::from)?;
    let h_list = match (&symbolic, lp.h.is_empty()) {
        (_, false) => lp.h.clone(),
        (Ok(pr), true) => vec![pr.delta_sigma().clone()],
        (Err(_), true) => sys
            .rho_basis()?
            .first()
            .map(|e| vec![MultiPoly::monomial(e.clone(), num_traits::One::one())])
            .unwrap_or_default(),
    };
    let mut text = format!("seed: {seed}\n");
    let mut rows = Vec::new();
    let mut pass = true;
    let mut refusals = Vec::new();
    let mut compared = 0;
    if let Err(e) = &symbolic {
        writeln!(text, "symbolic residue unavailable: {e}").unwrap();
    }
    for h in &h_list {
        let exact = match &symbolic {
            Ok(pr) => Some(pr.residue(h)?),
            Err(_) => None,
        };
        for k in 0..sys.polys().len() {
            match sum_local_residues(&sys, &basis, h, k, sigma, seed) {
                Ok(s) => {
                    let value = format!("{:.12} {:+.1e}i", s.value.re, s.value.im);
                    let ok = exact.as_ref().map(|x| agrees(s.value, x, NUMERIC_TOL));
                    if let Some(ok) = ok {
                        pass &= ok;
                        compared += 1;
                    }
                    let verdict = ok.map_or("(no symbolic value)", pass_word);
                    let sym = exact.as_ref().map_or("-".to_string(), |x| x.to_string());
                    writeln!(
                        text,
                        "H = {}, k = {k}: symbolic {sym}, numeric {value} over {} zeros {verdict}",
                        sys.fmt_poly(h),
                        s.zeros.zeros.len(),
                    )
                    .unwrap();
                    rows.push(json!({
                        "h": sys.fmt_poly(h), "k": k, "symbolic": exact.as_ref().map(|x| x.to_string()),
                        "numeric_re": s.value.re, "numeric_im": s.value.im,
                        "zeros": s.zeros.zeros.len(), "coordinate_changes": s.zeros.coordinate_changes, "pass": ok,
                    }));
                }
                Err(e) => {
                    writeln!(text, "H = {}, k = {k}: refused: {e}", sys.fmt_poly(h)).unwrap();
                    rows.push(
                        json!({ "h": sys.fmt_poly(h), "k": k, "refused": e.to_string(), "reason": refusal_kind(&e) }),
                    );
                    refusals.push(e);
                }
            }
        }
    }
    let json_of =
        |pass: bool, rows: Vec<Value>| json!({ "check": "theorem04", "seed": seed, "pass": pass, "cases": rows });
    if let Some(e) = refusals.iter().find(|e| local_exit_code(e) == EXIT_CHECK_FAILED) {
        writeln!(text, "numeric failure: {e}").unwrap();
        writeln!(text, "FAIL theorem04").unwrap();
        return Ok(Report { code: EXIT_CHECK_FAILED, text, json: json_of(false, rows) });
    }
    if let Err(e) = &symbolic {
        let code = refusals.first().map_or_else(|| residue_exit_code(e), local_exit_code);
        return Ok(Report { code, text, json: json_of(false, rows) });
    }
    if compared == 0 {
        let code = refusals.iter().map(local_exit_code).min().unwrap_or(EXIT_HYPOTHESES);
        writeln!(text, "no index k admits the numeric comparison").unwrap();
        return Ok(Report { code, text, json: json_of(false, rows) });
    }
    writeln!(text, "{} theorem04 (tolerance {NUMERIC_TOL:e})", pass_word(pass)).unwrap();
    Ok(Report::verdict(pass, text, json_of(pass, rows)))
}

/// Short machine-readable name of a refusal.
fn refusal_kind(e: &LocalError) -> &'static str {
    match e {
        LocalError::InfiniteIntersection { .. } => "InfiniteIntersection",
        LocalError::NotInTorus { .. } => "NotInTorus",
        LocalError::NonSimpleZero(_) => "NonSimpleZero",
        LocalError::ZeroOnPolarLocus(_) => "ZeroOnPolarLocus",
        LocalError::NotZeroDimensional => "NotZeroDimensional",
        LocalError::NotShapePosition(_) => "NotShapePosition",
        LocalError::NotConverged(_) => "NotConverged",
        LocalError::Clustered(_) => "Clustered",
        LocalError::BadIndex { .. } | LocalError::Shape { .. } => "Shape",
        LocalError::Residue(_) => "Residue",
    }
}

fn check_jacobian(path: &Path, opts: &ProblemOpts) -> Result<Report, Failure> {
    let (_, pr) = problem_of(path, opts)?;
    let o = jacobian_residue_check(&pr)?;
    let sys = pr.system();
    let text = format!(
        "J = {}\nres_F(J) = {}, (D^n) = {}\n{} jacobian\n",
        sys.fmt_poly(&o.jacobian),
        o.residue,
        o.intersection,
        pass_word(o.holds)
    );
    let json = json!({
        "check": "jacobian", "pass": o.holds, "jacobian": sys.fmt_poly(&o.jacobian),
        "residue": o.residue.to_string(), "intersection": o.intersection,
    });
    Ok(Report::verdict(o.holds, text, json))
}

fn check_cayley(path: &Path) -> Result<Report, Failure> {
    let lp = load_problem(path)?;
    let (sys, _) = system_of(&lp, None)?;
    let cd = build_cayley_from_degrees(&lp.fan, &lp.grading, sys.degrees())?;
    let polytope_ok = cd.cayley_polytope_check()?;
    let eq = cd.equal_degree_check(sys.polys(), &lp.grading)?;
    let jac = cd.jacobian_ideal_degree_check(sys.polys(), &lp.grading)?;
    let pass = polytope_ok && eq.passed() && jac;
    let text = format!(
        "{} cayley_polytope_check (lattice points of (inequalities) = union of fibres)\n\
         PASS equal_degree_check: gamma = {}\n\
         {} rho identity: (n+1) gamma - beta~ = {} equals the pullback of rho = {}\n\
         {} R_rho = S_rho ({} = {} monomials)\n\
         {} jacobian_ideal_degree_check\n{} cayley\n",
        pass_word(polytope_ok),
        eq.gamma,
        pass_word(eq.rho_identity),
        eq.rho_r,
        sys.rho(),
        pass_word(eq.r_rho_equals_s_rho),
        eq.r_rho_count,
        eq.s_rho_count,
        pass_word(jac),
        pass_word(pass)
    );
    let json = json!({
        "check": "cayley", "pass": pass, "polytope": polytope_ok, "gamma": eq.gamma.to_string(),
        "rho_identity": eq.rho_identity, "r_rho_equals_s_rho": eq.r_rho_equals_s_rho,
        "r_rho_count": eq.r_rho_count, "s_rho_count": eq.s_rho_count, "jacobian_ideal": jac,
    });
    Ok(Report::verdict(pass, text, json))
}

fn cmd_cayley(path: &Path) -> Result<Report, Failure> {
    let lp = load_problem(path)?;
    let (sys, _) = system_of(&lp, None)?;
    let cd = build_cayley_from_degrees(&lp.fan, &lp.grading, sys.degrees())?;
    let mut text = String::new();
    let mut rays = Vec::new();
    for (name, r) in cd.names().iter().zip(cd.rays()) {
        writeln!(text, "{name}: {r:?}").unwrap();
        rays.push(json!({ "variable": name, "ray": r }));
    }
    let mut degs = Vec::new();
    for (i, name) in cd.names().iter().enumerate() {
        degs.push(json!({ "variable": name, "degree": cd.grading().var_degree(i).to_string() }));
    }
    let facets = cd.facet_count();
    writeln!(text, "divisors L_j: {:?}", cd.divisors()).unwrap();
    writeln!(text, "gamma = {}", cd.gamma()).unwrap();
    writeln!(text, "Cayley polytope: dimension {}, {} facets", 2 * lp.fan.dim(), facets).unwrap();
    let json = json!({
        "rays": rays, "degrees": degs, "divisors": cd.divisors(),
        "gamma": cd.gamma().to_string(), "facets": facets,
    });
    Ok(Report::ok(text, json))
}

fn cmd_cone_xalpha(path: &Path, class: &str) -> Result<Report, Failure> {
    let lf = load_fan(path)?;
    let alpha = parse_class(class, &lf.grading)?;
    let a =
        lf.grading.representative_divisor(&alpha).map_err(|e| Failure { code: EXIT_PARSE, message: e.to_string() })?;
    let mut text = format!("divisor {a:?}\n");
    let mut gens = Vec::new();
    for ((name, eta), ai) in lf.fan.variables().iter().zip(lf.fan.rays()).zip(&a) {
        let mut v = vec![*ai];
        v.extend_from_slice(eta);
        writeln!(text, "{name}: {v:?}").unwrap();
        gens.push(json!({ "variable": name, "generator": v }));
    }
    let volume = if divisor::is_ample(&lf.fan, &a) {
        polytope::divisor_polytope(&lf.fan, &a).volume().ok().map(|v| v.to_string())
    } else {
        None
    };
    if let Some(v) = &volume {
        writeln!(text, "vol(P_alpha) = {v}").unwrap();
    }
    Ok(Report::ok(text, json!({ "divisor": a, "generators": gens, "volume": volume })))
}

//! The toric residue pipeline: irrelevant ideal, the decomposition
//! `F_j = A_0j z_hat + sum A_ij x_i`, `Delta_sigma`, the codimension-one
//! test, `res_F(H) = c / c_sigma`, and the derived checks (transformation
//! law, variable annihilation, toric Jacobian).

use num_traits::{One, Signed, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::divisor;
use crate::fan::{FanData, FanError};
use crate::grading::{DegreeClass, Grading, GradingError};
use crate::groebner::{self, buchberger, CommonZeroReport, GroebnerBasis, MonomialOrder};
use crate::intmat::{self, IntMatrix};
use crate::linalg::Q;
use crate::poly::{
    self, degree_of, dehomogenize, exp_divides, exp_sub, format_monomial, homogenize_to_degree, poly_det, Exponent,
    MultiPoly, PolyError, PolyMatrix,
};
use crate::polytope::{self, PolytopeError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HypothesisFailure {
    #[error("the fan is not simplicial")]
    NotSimplicial,
    #[error("the fan is not complete")]
    NotComplete,
    #[error("F_{index} is not in the irrelevant ideal (term {term})")]
    NotInIrrelevantIdeal { index: usize, term: String },
    #[error("the F_i have a common zero on X (irrelevant generator {generator} is not in the radical)")]
    CommonZeros { generator: String },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ResidueError {
    #[error("expected {expected} polynomials, got {got}")]
    WrongCount { expected: usize, got: usize },
    #[error("hypotheses failed: {0}")]
    HypothesesFailed(HypothesisFailure),
    #[error("decomposition failed for F_{j}: term {term} is divisible neither by a cone variable nor by z_hat")]
    DecompositionFailed { j: usize, term: String },
    #[error("H has degree {got}, expected the critical degree {expected}")]
    WrongDegree { expected: String, got: String },
    #[error("S_rho / <F>_rho does not have dimension one (standard monomials {witness:?})")]
    CodimNotOne { witness: Vec<String> },
    #[error("every monomial of degree rho reduces to zero")]
    AllReduceToZero,
    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),
    #[error("the F_i must all have the same degree")]
    NotEqualDegrees,
    #[error("the coefficient c_sigma vanished")]
    ZeroCSigma,
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Fan(#[from] FanError),
    #[error(transparent)]
    Grading(#[from] GradingError),
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
}

pub type Result<T> = std::result::Result<T, ResidueError>;

/// The generators `x_hat_sigma` of the irrelevant ideal as polynomials.
pub fn irrelevant_ideal(fan: &FanData) -> Vec<MultiPoly> {
    groebner::irrelevant_generators(fan).into_iter().map(|e| MultiPoly::monomial(e, Q::one())).collect()
}

/// First term of `p` divisible by no generator of `B(Sigma)`, if any.
pub fn irrelevant_ideal_witness(p: &MultiPoly, fan: &FanData) -> Option<Exponent> {
    let gens = groebner::irrelevant_generators(fan);
    p.exponents().find(|e| !gens.iter().any(|g| exp_divides(g, e))).cloned()
}

pub fn in_irrelevant_ideal(p: &MultiPoly, fan: &FanData) -> bool {
    irrelevant_ideal_witness(p, fan).is_none()
}

/// Tie-break for terms divisible by several cone variables.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TieBreak {
    LowestIndex,
    HighestIndex,
}

/// Write `f = A_0 z_hat + sum_i A_i x_i` where `x_1..x_n` are the cone
/// variables of `sigma` (increasing index) and `z_hat` the product of the rest.
pub fn decompose(f: &MultiPoly, fan: &FanData, sigma: usize, rule: TieBreak, j: usize) -> Result<Vec<MultiPoly>> {
    let cone = fan.cone(sigma)?.to_vec();
    let nv = fan.num_rays();
    let zhat: Exponent = (0..nv).map(|i| u32::from(!cone.contains(&i))).collect();
    let mut parts = vec![MultiPoly::zero(nv); cone.len() + 1];
    for (e, c) in f.terms() {
        let mut candidates = cone.iter().enumerate().filter(|(_, &v)| e[v] > 0);
        let pick = match rule {
            TieBreak::LowestIndex => candidates.next(),
            TieBreak::HighestIndex => candidates.next_back(),
        };
        match pick {
            Some((slot, &v)) => {
                let mut q = e.clone();
                q[v] -= 1;
                parts[slot + 1].add_term(q, c.clone());
            }
            None if exp_divides(&zhat, e) => parts[0].add_term(exp_sub(e, &zhat), c.clone()),
            None => {
                return Err(ResidueError::DecompositionFailed { j, term: format_monomial(e, fan.variables()) });
            }
        }
    }
    Ok(parts)
}

/// The matrix `(A_ij)`: row 0 is `z_hat`, rows `1..n` the cone variables,
/// column `j` the decomposition of `F_j`.
pub fn decomposition_matrix(f: &[MultiPoly], fan: &FanData, sigma: usize, rule: TieBreak) -> Result<PolyMatrix> {
    let cols: Vec<Vec<MultiPoly>> =
        f.iter().enumerate().map(|(j, fj)| decompose(fj, fan, sigma, rule, j)).collect::<Result<_>>()?;
    let n = cols.len();
    Ok((0..n).map(|i| cols.iter().map(|c| c[i].clone()).collect()).collect())
}

/// Outcome of the codimension-one test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CodimOne {
    pub codim_one: bool,
    /// Degree-`rho` monomials outside the leading-term ideal, in decreasing order.
    pub standard: Vec<Exponent>,
    pub rho_basis: Vec<Exponent>,
}

impl CodimOne {
    pub fn x_alpha(&self) -> Option<&Exponent> {
        if self.codim_one {
            self.standard.first()
        } else {
            None
        }
    }

    /// Two independent normal forms when the test fails.
    pub fn witness(&self) -> Option<(&Exponent, &Exponent)> {
        if self.standard.len() >= 2 {
            Some((&self.standard[0], &self.standard[1]))
        } else {
            None
        }
    }
}

/// Fan, grading, the `F_i`, their Groebner basis and critical degree.
#[derive(Clone, Debug)]
pub struct PolySystem {
    fan: FanData,
    grading: Grading,
    f: Vec<MultiPoly>,
    order: MonomialOrder,
    degrees: Vec<DegreeClass>,
    rho: DegreeClass,
    gb: GroebnerBasis,
}

impl PolySystem {
    pub fn new(fan: FanData, grading: Grading, f: Vec<MultiPoly>, order: MonomialOrder) -> Result<Self> {
        if f.len() != fan.dim() + 1 {
            return Err(ResidueError::WrongCount { expected: fan.dim() + 1, got: f.len() });
        }
        let degrees = f
            .iter()
            .map(|p| degree_of(p, &grading).map_err(|e| name_witness(e, fan.variables())))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        let rho = grading.critical_degree(&degrees);
        let gb = buchberger(&f, &order);
        Ok(PolySystem { fan, grading, f, order, degrees, rho, gb })
    }

    pub fn fan(&self) -> &FanData {
        &self.fan
    }
    pub fn grading(&self) -> &Grading {
        &self.grading
    }
    pub fn polys(&self) -> &[MultiPoly] {
        &self.f
    }
    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }
    pub fn degrees(&self) -> &[DegreeClass] {
        &self.degrees
    }
    pub fn rho(&self) -> &DegreeClass {
        &self.rho
    }
    pub fn groebner(&self) -> &GroebnerBasis {
        &self.gb
    }
    pub fn names(&self) -> &[String] {
        self.fan.variables()
    }

    pub fn fmt_poly(&self, p: &MultiPoly) -> String {
        p.display(self.fan.variables()).to_string()
    }

    pub fn fmt_mono(&self, e: &[u32]) -> String {
        format_monomial(e, self.fan.variables())
    }

    pub fn rho_basis(&self) -> Result<Vec<Exponent>> {
        Ok(polytope::monomial_basis(&self.fan, &self.grading, &self.rho)?)
    }

    pub fn normal_form(&self, p: &MultiPoly) -> MultiPoly {
        self.gb.normal_form(p)
    }

    pub fn ideal_member(&self, p: &MultiPoly) -> bool {
        self.gb.ideal_member(p)
    }

    pub fn no_common_zeros(&self) -> CommonZeroReport {
        groebner::no_common_zeros_on_x(&self.fan, &self.f, &self.order)
    }

    /// `S_rho / <F>_rho` has dimension one, read off the standard monomials.
    pub fn codim_one_check(&self) -> Result<CodimOne> {
        let rho_basis = self.rho_basis()?;
        let mut standard: Vec<Exponent> = rho_basis.iter().filter(|e| self.gb.is_standard(e)).cloned().collect();
        if standard.is_empty() {
            return Err(ResidueError::AllReduceToZero);
        }
        standard.sort_by(|a, b| self.order.cmp(b, a));
        Ok(CodimOne { codim_one: standard.len() == 1, standard, rho_basis })
    }

    /// Annihilation `x_i * S_rho` inside `<F>` for all `i`. Returns every
    /// failing product `(i, m)`, variables in index order.
    pub fn variable_annihilation_check(&self) -> Result<Vec<(usize, Exponent)>> {
        let basis = self.rho_basis()?;
        let mut failures = Vec::new();
        for i in 0..self.fan.num_rays() {
            for m in &basis {
                let mut e = m.clone();
                e[i] += 1;
                if !self.gb.ideal_member(&MultiPoly::monomial(e, Q::one())) {
                    failures.push((i, m.clone()));
                }
            }
        }
        Ok(failures)
    }

    /// Advisory ampleness data for each `deg F_i`.
    pub fn ampleness(&self) -> Result<Vec<Ampleness>> {
        self.degrees
            .iter()
            .map(|d| {
                let a = self.grading.representative_divisor(d)?;
                Ok(Ampleness {
                    cartier: divisor::is_cartier(&self.fan, &a).cartier,
                    ample: divisor::is_ample(&self.fan, &a),
                    q_ample: divisor::is_q_ample(&self.fan, &a),
                })
            })
            .collect()
    }

    fn check_fan(&self) -> Result<()> {
        if !self.fan.is_simplicial() {
            return Err(ResidueError::HypothesesFailed(HypothesisFailure::NotSimplicial));
        }
        if !self.fan.is_complete() {
            return Err(ResidueError::HypothesesFailed(HypothesisFailure::NotComplete));
        }
        Ok(())
    }

    /// `F_i` in `B(Sigma)` for all `i` and no common zeros on `X`.
    pub fn check_hypotheses(&self) -> Result<()> {
        self.check_fan()?;
        for (index, p) in self.f.iter().enumerate() {
            if let Some(e) = irrelevant_ideal_witness(p, &self.fan) {
                return Err(ResidueError::HypothesesFailed(HypothesisFailure::NotInIrrelevantIdeal {
                    index,
                    term: self.fmt_mono(&e),
                }));
            }
        }
        let rep = self.no_common_zeros();
        if let Some(g) = rep.failing {
            return Err(ResidueError::HypothesesFailed(HypothesisFailure::CommonZeros {
                generator: self.fmt_mono(&g),
            }));
        }
        Ok(())
    }
}

fn name_witness(e: PolyError, names: &[String]) -> PolyError {
    // degree_of reports generic names; translate x<k> back to fan names.
    match e {
        PolyError::NotHomogeneous { first, second } => {
            let rename = |s: String| {
                s.split('*')
                    .map(|f| {
                        let (v, rest) = f.split_once('^').map_or((f, None), |(a, b)| (a, Some(b)));
                        let name = v
                            .strip_prefix('x')
                            .and_then(|k| k.parse::<usize>().ok())
                            .and_then(|k| names.get(k - 1))
                            .cloned()
                            .unwrap_or_else(|| v.to_string());
                        rest.map_or(name.clone(), |r| format!("{name}^{r}"))
                    })
                    .collect::<Vec<_>>()
                    .join("*")
            };
            PolyError::NotHomogeneous { first: rename(first), second: rename(second) }
        }
        other => other,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ampleness {
    pub cartier: bool,
    pub ample: bool,
    pub q_ample: bool,
}

/// A system satisfying the hypotheses, with a chosen cone and the
/// oriented basis of `M` for that cone.
#[derive(Clone, Debug)]
pub struct ResidueProblem {
    system: PolySystem,
    sigma: usize,
    basis: IntMatrix,
    delta: MultiPoly,
    codim: CodimOne,
    x_alpha: Exponent,
    c_sigma: Q,
}

impl ResidueProblem {
    /// Check the hypotheses, build `Delta_sigma` and `c_sigma`.
    pub fn new(system: PolySystem, sigma: usize) -> Result<Self> {
        system.check_hypotheses()?;
        Self::build(system, sigma, TieBreak::LowestIndex)
    }

    fn build(system: PolySystem, sigma: usize, rule: TieBreak) -> Result<Self> {
        let basis = system.fan.oriented_basis(sigma)?;
        let a = decomposition_matrix(&system.f, &system.fan, sigma, rule)?;
        let delta = poly_det(&a)?;
        if !delta.is_zero() {
            let d = degree_of(&delta, &system.grading)?;
            if d != system.rho {
                return Err(ResidueError::DegreeMismatch(format!("deg Delta_sigma = {d}, rho = {}", system.rho)));
            }
        }
        let codim = system.codim_one_check()?;
        if !codim.codim_one {
            return Err(ResidueError::CodimNotOne {
                witness: codim.standard.iter().map(|e| system.fmt_mono(e)).collect(),
            });
        }
        let x_alpha = codim.standard[0].clone();
        let c_sigma = system.gb.normal_form(&delta).coeff(&x_alpha);
        if c_sigma.is_zero() {
            return Err(ResidueError::ZeroCSigma);
        }
        Ok(ResidueProblem { system, sigma, basis, delta, codim, x_alpha, c_sigma })
    }

    /// `Delta_sigma` under an alternative tie-break rule.
    pub fn delta_with(&self, rule: TieBreak) -> Result<MultiPoly> {
        let a = decomposition_matrix(&self.system.f, &self.system.fan, self.sigma, rule)?;
        Ok(poly_det(&a)?)
    }

    pub fn system(&self) -> &PolySystem {
        &self.system
    }
    pub fn sigma(&self) -> usize {
        self.sigma
    }
    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }
    pub fn delta_sigma(&self) -> &MultiPoly {
        &self.delta
    }
    pub fn x_alpha(&self) -> &Exponent {
        &self.x_alpha
    }
    pub fn c_sigma(&self) -> &Q {
        &self.c_sigma
    }
    pub fn codim(&self) -> &CodimOne {
        &self.codim
    }

    /// `c` = coefficient of `x^alpha` in the normal form of `H`.
    pub fn coefficient(&self, h: &MultiPoly) -> Result<Q> {
        if !h.is_zero() {
            let d = degree_of(h, &self.system.grading).map_err(|e| match e {
                PolyError::NotHomogeneous { first, second } => ResidueError::WrongDegree {
                    expected: self.system.rho.to_string(),
                    got: format!("inhomogeneous ({first} vs {second})"),
                },
                other => other.into(),
            })?;
            if d != self.system.rho {
                return Err(ResidueError::WrongDegree { expected: self.system.rho.to_string(), got: d.to_string() });
            }
        }
        Ok(self.system.gb.normal_form(h).coeff(&self.x_alpha))
    }

    /// `res_F(H) = c / c_sigma`, relative to the oriented basis of `sigma`.
    pub fn residue(&self, h: &MultiPoly) -> Result<Q> {
        Ok(self.coefficient(h)? / &self.c_sigma)
    }

    /// The residue relative to the Euler form of another basis of `M`:
    /// `Omega` scales by the determinant of the basis.
    pub fn residue_in_basis(&self, h: &MultiPoly, basis: &[Vec<i64>]) -> Result<Q> {
        let ratio = intmat::det(basis) * intmat::det(&self.basis);
        Ok(self.residue(h)? * Q::from_integer(ratio.into()))
    }

    /// Full trace of one residue evaluation.
    pub fn report(&self, h: &MultiPoly) -> Result<ResidueReport> {
        let c = self.coefficient(h)?;
        let residue = &c / &self.c_sigma;
        let sys = &self.system;
        let ample = sys.ampleness()?;
        Ok(ResidueReport {
            sigma: self.sigma + 1,
            cone: self.system.fan.cone(self.sigma)?.iter().map(|&i| sys.names()[i].clone()).collect(),
            basis: self.basis.clone(),
            order: sys.order.to_spec(sys.names()),
            degrees: sys.degrees.iter().map(DegreeClass::to_string).collect(),
            rho: sys.rho.to_string(),
            rho_basis_size: self.codim.rho_basis.len(),
            rho_basis: self.codim.rho_basis.iter().map(|e| sys.fmt_mono(e)).collect(),
            in_irrelevant_ideal: true,
            no_common_zeros: true,
            q_ample: ample.iter().map(|a| a.q_ample).collect(),
            cartier: ample.iter().map(|a| a.cartier).collect(),
            codim_one: true,
            x_alpha: sys.fmt_mono(&self.x_alpha),
            delta_sigma: sys.fmt_poly(&self.delta),
            c_sigma: ExactQ(self.c_sigma.clone()),
            h: sys.fmt_poly(h),
            c: ExactQ(c),
            residue: ExactQ(residue),
        })
    }
}

/// Exact rational serialized as the string `p/q` (or `p`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactQ(pub Q);

impl Serialize for ExactQ {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

impl<'de> Deserialize<'de> for ExactQ {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse::<Q>().map(ExactQ).map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidueReport {
    /// 1-based index of the chosen maximal cone.
    pub sigma: usize,
    pub cone: Vec<String>,
    pub basis: IntMatrix,
    pub order: String,
    pub degrees: Vec<String>,
    pub rho: String,
    pub rho_basis_size: usize,
    pub rho_basis: Vec<String>,
    pub in_irrelevant_ideal: bool,
    pub no_common_zeros: bool,
    pub q_ample: Vec<bool>,
    pub cartier: Vec<bool>,
    pub codim_one: bool,
    pub x_alpha: String,
    pub delta_sigma: String,
    pub c_sigma: ExactQ,
    pub h: String,
    pub c: ExactQ,
    pub residue: ExactQ,
}

/// Outcome of the transformation-law check `res_F(H) = res_G(H det A)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GtlOutcome {
    pub lhs: Q,
    pub rhs: Q,
    pub holds: bool,
}

/// `G_j = sum_i A_ij F_i`.
pub fn transform(f: &[MultiPoly], a: &[Vec<MultiPoly>]) -> Vec<MultiPoly> {
    let n = f.len();
    let nv = f[0].nvars();
    (0..n).map(|j| (0..n).fold(MultiPoly::zero(nv), |acc, i| &acc + &(&a[i][j] * &f[i]))).collect()
}

/// Compute both sides of the transformation law for the matrix `A`.
pub fn verify_gtl(problem: &ResidueProblem, a: &[Vec<MultiPoly>], h: &MultiPoly) -> Result<GtlOutcome> {
    let sys = &problem.system;
    let n = sys.f.len();
    if a.len() != n || a.iter().any(|r| r.len() != n) {
        return Err(PolyError::NonSquare.into());
    }
    let g = transform(&sys.f, a);
    // deg A_ij = deg G_j - deg F_i for every nonzero entry.
    let mut g_degrees = Vec::with_capacity(n);
    for (j, gj) in g.iter().enumerate() {
        let dj = degree_of(gj, &sys.grading).map_err(|e| ResidueError::DegreeMismatch(format!("G_{j}: {e}")))?;
        for i in 0..n {
            if !a[i][j].is_zero() {
                let dij = degree_of(&a[i][j], &sys.grading)
                    .map_err(|e| ResidueError::DegreeMismatch(format!("A_{i}{j}: {e}")))?;
                if dij != &dj - &sys.degrees[i] {
                    return Err(ResidueError::DegreeMismatch(format!(
                        "deg A_{i}{j} = {dij}, need {}",
                        &dj - &sys.degrees[i]
                    )));
                }
            }
        }
        g_degrees.push(dj);
    }
    let det = poly_det(a)?;
    let gsys = PolySystem::new(sys.fan.clone(), sys.grading.clone(), g, sys.order.clone())?;
    let det_deg = if det.is_zero() { None } else { Some(degree_of(&det, &sys.grading)?) };
    if let Some(dd) = &det_deg {
        if gsys.rho != &sys.rho + dd {
            return Err(ResidueError::DegreeMismatch(format!(
                "rho(G) = {}, rho(F) + deg det A = {}",
                gsys.rho,
                &sys.rho + dd
            )));
        }
    }
    let gproblem = ResidueProblem::new(gsys, problem.sigma)?;
    let lhs = problem.residue(h)?;
    let rhs = gproblem.residue(&(h * &det))?;
    Ok(GtlOutcome { holds: lhs == rhs, lhs, rhs })
}

/// A random transformation matrix with `deg A_ij = deg F_j + delta_j - deg F_i`
/// (so that `G_j = sum_i A_ij F_i` is homogeneous). When `raise` is set,
/// each column may raise the degree by that of a random variable. Entries are
/// sparse integer combinations of monomials; diagonal entries are nonzero
/// whenever their degree has monomials.
pub fn random_admissible_transformation<R: Rng>(system: &PolySystem, rng: &mut R, raise: bool) -> Result<PolyMatrix> {
    let n = system.f.len();
    let nv = system.fan.num_rays();
    let mut a: PolyMatrix = vec![vec![MultiPoly::zero(nv); n]; n];
    for j in 0..n {
        let mut target = system.degrees[j].clone();
        if raise && rng.gen_bool(0.5) {
            target = &target + &system.grading.var_degree(rng.gen_range(0..nv));
        }
        for i in 0..n {
            let class = &target - &system.degrees[i];
            let monos = polytope::monomial_basis(&system.fan, &system.grading, &class)?;
            if monos.is_empty() {
                continue;
            }
            let mut entry = MultiPoly::zero(nv);
            for _ in 0..monos.len().min(3) {
                let e = &monos[rng.gen_range(0..monos.len())];
                let c: i64 = rng.gen_range(-3..=3);
                entry = &entry + &MultiPoly::monomial(e.clone(), Q::from_integer(c.into()));
            }
            if i == j && entry.is_zero() {
                entry = MultiPoly::monomial(monos[0].clone(), Q::one());
            }
            a[i][j] = entry;
        }
    }
    Ok(a)
}

/// Run the transformation law for `count` random admissible matrices,
/// redrawing (up to 50 times each) matrices whose `G` violates the
/// hypotheses (singular `A`, common zeros, failed codimension one).
pub fn random_gtl_trials<R: Rng>(
    problem: &ResidueProblem,
    h: &MultiPoly,
    count: usize,
    raise: bool,
    rng: &mut R,
) -> Result<Vec<(PolyMatrix, GtlOutcome)>> {
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let mut last_err = Some(ResidueError::DegreeMismatch("no admissible transformation in 50 draws".into()));
        for _ in 0..50 {
            let a = random_admissible_transformation(&problem.system, rng, raise)?;
            if poly_det(&a)?.is_zero() || transform(&problem.system.f, &a).iter().any(MultiPoly::is_zero) {
                continue;
            }
            match verify_gtl(problem, &a, h) {
                Ok(o) => {
                    out.push((a, o));
                    last_err = None;
                    break;
                }
                Err(
                    e @ (ResidueError::HypothesesFailed(_)
                    | ResidueError::CodimNotOne { .. }
                    | ResidueError::ZeroCSigma
                    | ResidueError::DecompositionFailed { .. }),
                ) => last_err = Some(e),
                Err(e) => return Err(e),
            }
        }
        if let Some(e) = last_err {
            return Err(e);
        }
    }
    Ok(out)
}

/// Chart determinant `k = det [f_i ; d f_i / d x_j]` on the chart of `sigma`.
pub fn chart_jacobian(f: &[MultiPoly], fan: &FanData, sigma: usize) -> Result<MultiPoly> {
    let charts: Vec<MultiPoly> =
        f.iter().map(|p| dehomogenize(p, fan, sigma)).collect::<std::result::Result<_, _>>()?;
    let n = fan.dim();
    let mut m: PolyMatrix = vec![charts.clone()];
    for j in 0..n {
        m.push(charts.iter().map(|p| p.derivative(j)).collect());
    }
    Ok(poly_det(&m)?)
}

/// The toric Jacobian `J` in `S_rho`: the chart determinant lifted to degree `rho`.
pub fn toric_jacobian(problem: &ResidueProblem) -> Result<MultiPoly> {
    let sys = &problem.system;
    if sys.degrees.windows(2).any(|w| w[0] != w[1]) {
        return Err(ResidueError::NotEqualDegrees);
    }
    let k = chart_jacobian(&sys.f, &sys.fan, problem.sigma)?;
    Ok(homogenize_to_degree(&k, &sys.fan, problem.sigma, &sys.rho, &sys.grading)?)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JacobianOutcome {
    pub jacobian: MultiPoly,
    pub residue: Q,
    pub intersection: i64,
    pub holds: bool,
}

/// `|res_F(J)| = (D^n) = n! vol(P_D)` for equal ample degrees.
pub fn jacobian_residue_check(problem: &ResidueProblem) -> Result<JacobianOutcome> {
    let j = toric_jacobian(problem)?;
    let sys = &problem.system;
    let residue = problem.residue(&j)?;
    let intersection = polytope::intersection_number(&sys.fan, &sys.grading, &sys.degrees[0])?;
    let holds = residue.abs() == Q::from_integer(intersection.into());
    Ok(JacobianOutcome { jacobian: j, residue, intersection, holds })
}

/// Residue of `H` computed through every maximal cone, expressed relative to
/// the standard basis of `M`.
pub fn residues_over_all_cones(system: &PolySystem, h: &MultiPoly) -> Result<Vec<Q>> {
    let id = intmat::identity(system.fan.dim());
    (0..system.fan.max_cones().len())
        .map(|s| ResidueProblem::build(system.clone(), s, TieBreak::LowestIndex)?.residue_in_basis(h, &id))
        .collect()
}

/// Reorder the `F_i` and rebuild the system (same fan, grading and order).
pub fn permuted(system: &PolySystem, perm: &[usize]) -> Result<PolySystem> {
    let f = perm.iter().map(|&i| system.f[i].clone()).collect();
    PolySystem::new(system.fan.clone(), system.grading.clone(), f, system.order.clone())
}

/// Chart polynomials of the system.
pub fn chart_polys(system: &PolySystem, sigma: usize) -> Result<Vec<MultiPoly>> {
    Ok(system.f.iter().map(|p| poly::dehomogenize(p, &system.fan, sigma)).collect::<std::result::Result<_, _>>()?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::q;

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    fn p1() -> (FanData, Grading) {
        let fan = FanData::new(1, vec![vec![1], vec![-1]], vec![vec![1], vec![0]], Some(names(&["x", "y"]))).unwrap();
        let g = Grading::compute(&fan).unwrap();
        (fan, g)
    }

    fn p1_problem(f: &[&str]) -> ResidueProblem {
        let (fan, g) = p1();
        let polys = f.iter().map(|s| MultiPoly::parse(s, fan.variables()).unwrap()).collect();
        let sys = PolySystem::new(fan, g, polys, MonomialOrder::grevlex(2)).unwrap();
        ResidueProblem::new(sys, 0).unwrap()
    }

    fn poly(s: &str) -> MultiPoly {
        MultiPoly::parse(s, &names(&["x", "y"])).unwrap()
    }

    #[test]
    fn p1_residues() {
        let pr = p1_problem(&["x", "y"]);
        assert_eq!(pr.delta_sigma(), &poly("1"));
        assert_eq!(pr.residue(&poly("1")).unwrap(), q(1));
        let pr = p1_problem(&["x^2", "y^2"]);
        assert_eq!(pr.delta_sigma(), &poly("x*y"));
        assert_eq!(pr.residue(&poly("x*y")).unwrap(), q(1));
        assert_eq!(pr.residue(&poly("x^2")).unwrap(), q(0));
        let pr = p1_problem(&["x", "x^2 - y^2"]);
        assert_eq!(pr.residue(&poly("y")).unwrap(), q(-1));
        assert!(matches!(pr.residue(&poly("y^2")), Err(ResidueError::WrongDegree { .. })));
    }

    #[test]
    fn decomposition_rules() {
        let fan = FanData::new(
            2,
            vec![vec![1, 0], vec![0, 1], vec![-1, -1]],
            vec![vec![0, 1], vec![1, 2], vec![0, 2]],
            Some(names(&["a", "b", "c"])),
        )
        .unwrap();
        let f = MultiPoly::parse("a^2 + a*b", fan.variables()).unwrap();
        let parts = decompose(&f, &fan, 0, TieBreak::LowestIndex, 0).unwrap();
        assert_eq!(parts[1], MultiPoly::parse("a + b", fan.variables()).unwrap());
        assert!(parts[0].is_zero() && parts[2].is_zero());
        let pure_z = MultiPoly::parse("c^2", fan.variables()).unwrap();
        let parts = decompose(&pure_z, &fan, 0, TieBreak::LowestIndex, 0).unwrap();
        assert_eq!(parts[0], MultiPoly::parse("c", fan.variables()).unwrap());
        let high = decompose(&f, &fan, 0, TieBreak::HighestIndex, 0).unwrap();
        assert_eq!(high[1], MultiPoly::parse("a", fan.variables()).unwrap());
        assert_eq!(high[2], MultiPoly::parse("a", fan.variables()).unwrap());
        let fan = FanData::new(
            2,
            vec![vec![1, 0], vec![-1, 0], vec![0, 1], vec![0, -1]],
            vec![vec![0, 2], vec![2, 1], vec![1, 3], vec![3, 0]],
            Some(names(&["x", "y", "z", "t"])),
        )
        .unwrap();
        let f0 = MultiPoly::parse("(x+y)^2", fan.variables()).unwrap();
        assert!(matches!(
            decompose(&f0, &fan, 0, TieBreak::LowestIndex, 0),
            Err(ResidueError::DecompositionFailed { .. })
        ));
    }

    #[test]
    fn gtl_on_p1() {
        let pr = p1_problem(&["x", "y"]);
        let one = poly("1");
        let zero = MultiPoly::zero(2);
        let id = vec![vec![one.clone(), zero.clone()], vec![zero.clone(), one.clone()]];
        assert!(verify_gtl(&pr, &id, &one).unwrap().holds);
        let upper = vec![vec![one.clone(), one.clone()], vec![zero.clone(), one.clone()]];
        assert!(verify_gtl(&pr, &upper, &one).unwrap().holds);
        let diag = vec![vec![poly("x"), zero.clone()], vec![zero, poly("y")]];
        let out = verify_gtl(&pr, &diag, &one).unwrap();
        assert!(out.holds);
        assert_eq!(out.lhs, q(1));
    }
}

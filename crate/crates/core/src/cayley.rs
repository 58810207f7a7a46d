//! The toric Cayley trick: the projective bundle `Y = P(L_0 + ... + L_n)`
//! over `X`, its rays, grading and polytope, and the degree bookkeeping
//! that makes `F = sum y_j F_j` a single homogeneous polynomial.
//!
//! Lattice coordinates on `Z^n + N` put the `e_1..e_n` coordinates first.
//! Variables of `R` are the base variables followed by `y_0..y_n`.

use thiserror::Error;

use crate::divisor;
use crate::fan::FanData;
use crate::grading::{DegreeClass, Grading, GradingError};
use crate::intmat::IntMatrix;
use crate::linalg::q;
use crate::poly::{Exponent, MultiPoly};
use crate::polytope::{divisor_polytope, monomials_from_divisor, HPolytope, PolytopeError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CayleyError {
    #[error("expected {expected} line bundles, got {got}")]
    WrongCount { expected: usize, got: usize },
    #[error("L_{j} (divisor {divisor:?}) is not ample")]
    NotAmple { j: usize, divisor: Vec<i64> },
    #[error("deg_R(y_{j} F_{j}) = {got}, expected gamma = {expected}")]
    DegreeMismatch { j: usize, got: String, expected: String },
    #[error("y_{j} F_{j} is not homogeneous in R")]
    NotHomogeneous { j: usize },
    #[error("y-weights must have one entry per variable of R ({expected})")]
    BadWeights { expected: usize },
    #[error(transparent)]
    Grading(#[from] GradingError),
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
}

/// Rays, ring and grading of `Y`.
#[derive(Clone, Debug)]
pub struct CayleyData {
    base: FanData,
    /// `a[j]` is the divisor vector of `L_j` (one entry per base ray).
    a: Vec<Vec<i64>>,
    /// `eta~_1 .. eta~_{n+r}` followed by `nu~_0 .. nu~_n`.
    rays: IntMatrix,
    names: Vec<String>,
    grading: Grading,
    /// The map `A_{2n-1}(Y) -> Z` of the fibration, as weights on the
    /// variables of `R` (0 on base variables, 1 on the `y_j`).
    y_weights: Vec<i64>,
}

/// Build `Y` from `n+1` ample divisor vectors on the base.
pub fn build_cayley(fan: &FanData, a: &[Vec<i64>]) -> Result<CayleyData, CayleyError> {
    let n = fan.dim();
    if a.len() != n + 1 {
        return Err(CayleyError::WrongCount { expected: n + 1, got: a.len() });
    }
    for (j, aj) in a.iter().enumerate() {
        if aj.len() != fan.num_rays() || !divisor::is_ample(fan, aj) {
            return Err(CayleyError::NotAmple { j, divisor: aj.clone() });
        }
    }
    let mut rays: IntMatrix = Vec::new();
    for (i, eta) in fan.rays().iter().enumerate() {
        let mut v: Vec<i64> = (1..=n).map(|j| a[j][i] - a[0][i]).collect();
        v.extend_from_slice(eta);
        rays.push(v);
    }
    rays.push((0..2 * n).map(|c| if c < n { -1 } else { 0 }).collect());
    for j in 1..=n {
        rays.push((0..2 * n).map(|c| i64::from(c + 1 == j)).collect());
    }
    let grading = Grading::from_rays(2 * n, &rays)?;
    let mut names = fan.variables().to_vec();
    names.extend((0..=n).map(|j| format!("y{j}")));
    let y_weights = (0..rays.len()).map(|v| i64::from(v >= fan.num_rays())).collect();
    Ok(CayleyData { base: fan.clone(), a: a.to_vec(), rays, names, grading, y_weights })
}

/// Build `Y` from ample degree classes, using canonical representatives.
pub fn build_cayley_from_degrees(
    fan: &FanData,
    grading: &Grading,
    alphas: &[DegreeClass],
) -> Result<CayleyData, CayleyError> {
    let a: Vec<Vec<i64>> = alphas.iter().map(|c| grading.representative_divisor(c)).collect::<Result<_, _>>()?;
    build_cayley(fan, &a)
}

/// Outcome of [`CayleyData::equal_degree_check`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EqualDegreeReport {
    /// `gamma = [O_Y(1)]`, the common degree of the `y_j F_j`.
    pub gamma: DegreeClass,
    /// `(n+1) gamma - beta~` in `A_{2n-1}(Y)`.
    pub rho_r: DegreeClass,
    /// `rho_r` equals the pullback of `rho` from the base.
    pub rho_identity: bool,
    /// Number of monomials of degree `rho` in `R` and in `S`.
    pub r_rho_count: usize,
    pub s_rho_count: usize,
    /// `R_rho = S_rho`: every degree-`rho` monomial of `R` is free of `y`.
    pub r_rho_equals_s_rho: bool,
}

impl EqualDegreeReport {
    pub fn passed(&self) -> bool {
        self.rho_identity && self.r_rho_equals_s_rho
    }
}

impl CayleyData {
    pub fn base(&self) -> &FanData {
        &self.base
    }

    pub fn divisors(&self) -> &[Vec<i64>] {
        &self.a
    }

    /// All rays of `Y`: lifted base rays, then `nu~_0..nu~_n`.
    pub fn rays(&self) -> &IntMatrix {
        &self.rays
    }

    pub fn lifted_rays(&self) -> &[Vec<i64>] {
        &self.rays[..self.base.num_rays()]
    }

    pub fn fiber_rays(&self) -> &[Vec<i64>] {
        &self.rays[self.base.num_rays()..]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn grading(&self) -> &Grading {
        &self.grading
    }

    pub fn num_vars(&self) -> usize {
        self.rays.len()
    }

    /// Index of `y_j` among the variables of `R`.
    pub fn y_index(&self, j: usize) -> usize {
        self.base.num_rays() + j
    }

    pub fn y_weights(&self) -> &[i64] {
        &self.y_weights
    }

    /// Replace the fibration weights (used to exercise the guard in
    /// [`CayleyData::jacobian_ideal_degree_check`]).
    pub fn with_y_weights(mut self, w: Vec<i64>) -> Result<Self, CayleyError> {
        if w.len() != self.num_vars() {
            return Err(CayleyError::BadWeights { expected: self.num_vars() });
        }
        self.y_weights = w;
        Ok(self)
    }

    /// The H-description of the Cayley polytope: `<m, eta~_i> >= -a_{i0}`,
    /// `<m, nu~_0> >= -1`, `<m, nu~_j> >= 0`.
    pub fn polytope(&self) -> HPolytope {
        let mut offsets: Vec<_> = self.a[0].iter().map(|&x| q(x)).collect();
        offsets.push(q(1));
        offsets.extend((1..=self.base.dim()).map(|_| q(0)));
        HPolytope::new(2 * self.base.dim(), self.rays.clone(), offsets)
    }

    /// `Delta_j`, the polytope of `L_j` on the base.
    pub fn fiber_polytope(&self, j: usize) -> HPolytope {
        divisor_polytope(&self.base, &self.a[j])
    }

    /// Lattice points of the convex-hull description: the union of
    /// `{e_j} x (Delta_j cap M)` (with `e_0 = 0`), sorted.
    pub fn hull_lattice_points(&self) -> Result<Vec<Vec<i64>>, CayleyError> {
        let n = self.base.dim();
        let mut out = Vec::new();
        for j in 0..=n {
            for m in self.fiber_polytope(j).lattice_points()? {
                let mut p: Vec<i64> = (1..=n).map(|c| i64::from(c == j)).collect();
                p.extend(m);
                out.push(p);
            }
        }
        out.sort();
        Ok(out)
    }

    /// The inequality description and the convex-hull description have the
    /// same lattice points.
    pub fn cayley_polytope_check(&self) -> Result<bool, CayleyError> {
        let mut h = self.polytope().lattice_points()?;
        h.sort();
        Ok(h == self.hull_lattice_points()?)
    }

    /// Number of facets of the Cayley polytope.
    pub fn facet_count(&self) -> usize {
        self.polytope().facet_count()
    }

    /// A base exponent vector as an exponent vector of `R`.
    pub fn lift_exponents(&self, e: &[u32]) -> Exponent {
        let mut v = e.to_vec();
        v.resize(self.num_vars(), 0);
        v
    }

    /// A base divisor vector as a divisor on `Y` (pullback).
    pub fn lift_divisor(&self, a: &[i64]) -> Vec<i64> {
        let mut v = a.to_vec();
        v.resize(self.num_vars(), 0);
        v
    }

    /// A base polynomial as an element of `R`.
    pub fn lift_poly(&self, p: &MultiPoly) -> MultiPoly {
        p.extend_vars(self.num_vars() - p.nvars())
    }

    /// `gamma = [D~'_0 + sum a_{i0} D~_i]`.
    pub fn gamma(&self) -> DegreeClass {
        let mut d = self.lift_divisor(&self.a[0]);
        d[self.y_index(0)] = 1;
        self.grading.degree_of_divisor(&d)
    }

    /// `F = sum y_j F_j` in `R`.
    pub fn cayley_polynomial(&self, f: &[MultiPoly]) -> MultiPoly {
        let nv = self.num_vars();
        f.iter().enumerate().fold(MultiPoly::zero(nv), |acc, (j, fj)| {
            &acc + &(&MultiPoly::var(nv, self.y_index(j)) * &self.lift_poly(fj))
        })
    }

    /// Degree bookkeeping: every `y_j F_j` has degree `gamma`; the
    /// identity `(n+1) gamma - beta~ = rho`; and `R_rho = S_rho`.
    pub fn equal_degree_check(
        &self,
        f: &[MultiPoly],
        base_grading: &Grading,
    ) -> Result<EqualDegreeReport, CayleyError> {
        let n = self.base.dim();
        if f.len() != n + 1 {
            return Err(CayleyError::WrongCount { expected: n + 1, got: f.len() });
        }
        let gamma = self.gamma();
        let mut base_degrees = Vec::with_capacity(n + 1);
        for (j, fj) in f.iter().enumerate() {
            let mut degs = fj.exponents().map(|e| {
                let mut le = self.lift_exponents(e);
                le[self.y_index(j)] += 1;
                self.grading.degree_of_exponents(&le)
            });
            let first = degs.next().ok_or(CayleyError::NotHomogeneous { j })?;
            if degs.any(|d| d != first) {
                return Err(CayleyError::NotHomogeneous { j });
            }
            if first != gamma {
                return Err(CayleyError::DegreeMismatch { j, got: first.to_string(), expected: gamma.to_string() });
            }
            base_degrees.push(base_grading.degree_of_exponents(fj.exponents().next().unwrap()));
        }
        let rho_r = &((n as i64 + 1) * &gamma) - &self.grading.beta();
        let rho = base_grading.critical_degree(&base_degrees);
        let rho_div = base_grading.representative_divisor(&rho)?;
        let lifted = self.lift_divisor(&rho_div);
        let rho_identity = self.grading.degree_of_divisor(&lifted) == rho_r;
        let r_monos = self.divisor_monomials(&lifted)?;
        let s_monos = monomials_from_divisor(&self.base, &rho_div)?;
        let s_lifted: Vec<Exponent> = s_monos.iter().map(|e| self.lift_exponents(e)).collect();
        Ok(EqualDegreeReport {
            gamma,
            rho_r,
            rho_identity,
            r_rho_count: r_monos.len(),
            s_rho_count: s_monos.len(),
            r_rho_equals_s_rho: r_monos == s_lifted,
        })
    }

    /// Monomials of `R` in the class of the divisor `d` on `Y`, sorted.
    pub fn divisor_monomials(&self, d: &[i64]) -> Result<Vec<Exponent>, CayleyError> {
        let poly = HPolytope::new(2 * self.base.dim(), self.rays.clone(), d.iter().map(|&x| q(x)).collect());
        let mut out: Vec<Exponent> = poly
            .lattice_points()?
            .iter()
            .map(|m| {
                self.rays
                    .iter()
                    .zip(d)
                    .map(|(r, di)| (r.iter().zip(m).map(|(x, y)| x * y).sum::<i64>() + di) as u32)
                    .collect()
            })
            .collect();
        out.sort();
        Ok(out)
    }

    /// Degree bookkeeping behind `J(F)_rho = <F_0..F_n>_rho`: with the
    /// fibration weight `w` (a class function, nonnegative on variables,
    /// positive on every `y_j`), `rho` has weight 0, every `dF/dy_j = F_j`
    /// has weight 0, and every term of every `dF/dx_i` has weight >= 1, so
    /// multiples of `dF/dx_i` never reach degree `rho`.
    pub fn jacobian_ideal_degree_check(&self, f: &[MultiPoly], base_grading: &Grading) -> Result<bool, CayleyError> {
        let w = &self.y_weights;
        let dim = 2 * self.base.dim();
        // Class function: sum_v w_v * ray_v = 0 kills every principal divisor.
        let class_fn = (0..dim).all(|c| self.rays.iter().zip(w).map(|(r, wv)| r[c] * wv).sum::<i64>() == 0);
        let ny = self.base.dim() + 1;
        let y_positive = (0..ny).all(|j| w[self.y_index(j)] > 0);
        let x_nonneg = w[..self.base.num_rays()].iter().all(|&x| x >= 0);
        if !(class_fn && y_positive && x_nonneg) {
            return Ok(false);
        }
        let weight = |e: &[u32]| -> i64 { e.iter().zip(w).map(|(&k, wv)| k as i64 * wv).sum() };
        let report = self.equal_degree_check(f, base_grading)?;
        let rho_div = self.grading.representative_divisor(&report.rho_r)?;
        if rho_div.iter().zip(w).map(|(a, b)| a * b).sum::<i64>() != 0 {
            return Ok(false);
        }
        let big_f = self.cayley_polynomial(f);
        for j in 0..ny {
            if big_f.derivative(self.y_index(j)) != self.lift_poly(&f[j]) {
                return Ok(false);
            }
            if self.lift_poly(&f[j]).exponents().any(|e| weight(e) != 0) {
                return Ok(false);
            }
        }
        for i in 0..self.base.num_rays() {
            if big_f.derivative(i).exponents().any(|e| weight(e) < 1) {
                return Ok(false);
            }
        }
        Ok(report.r_rho_equals_s_rho)
    }
}

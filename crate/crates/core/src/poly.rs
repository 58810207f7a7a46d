//! Sparse multivariate polynomials with exact rational coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::fan::{FanData, FanError};
use crate::grading::{DegreeClass, Grading};
use crate::linalg::{self, q, Q};

/// Exponent vector of a monomial.
pub type Exponent = Vec<u32>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("the zero polynomial has no degree")]
    ZeroPolynomial,
    #[error("not homogeneous: {first} and {second} have different degrees")]
    NotHomogeneous { first: String, second: String },
    #[error("matrix is not square")]
    NonSquare,
    #[error("no integral lift of chart monomial {monomial} to the requested degree")]
    NoIntegralLift { monomial: String },
    #[error("lift is not unique: the complement variable degrees are dependent")]
    NonUniqueLift,
    #[error("polynomial division is not exact")]
    NotExactDivision,
    #[error(transparent)]
    Fan(#[from] FanError),
}

pub fn exp_divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

pub fn exp_add(a: &[u32], b: &[u32]) -> Exponent {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// `b - a`, assuming `a | b`.
pub fn exp_sub(b: &[u32], a: &[u32]) -> Exponent {
    b.iter().zip(a).map(|(x, y)| x - y).collect()
}

pub fn exp_lcm(a: &[u32], b: &[u32]) -> Exponent {
    a.iter().zip(b).map(|(x, y)| *x.max(y)).collect()
}

pub fn exp_degree(a: &[u32]) -> u32 {
    a.iter().sum()
}

/// Render a monomial `coef * x^e` with the given variable names (coef = 1 omitted).
pub fn format_monomial(e: &[u32], names: &[String]) -> String {
    let parts: Vec<String> = e
        .iter()
        .zip(names)
        .filter(|(k, _)| **k > 0)
        .map(|(&k, n)| if k == 1 { n.clone() } else { format!("{n}^{k}") })
        .collect();
    if parts.is_empty() {
        "1".to_string()
    } else {
        parts.join("*")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    nvars: usize,
    terms: BTreeMap<Exponent, Q>,
}

impl MultiPoly {
    pub fn zero(nvars: usize) -> Self {
        MultiPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Q) -> Self {
        Self::monomial(vec![0; nvars], c)
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Q::one())
    }

    pub fn monomial(e: Exponent, c: Q) -> Self {
        let nvars = e.len();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(e, c);
        }
        MultiPoly { nvars, terms }
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(e, Q::one())
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Exponent, Q)>) -> Self {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars, "exponent length mismatch");
            p.add_term(e, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Exponent, &Q)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: &[u32]) -> Q {
        self.terms.get(e).cloned().unwrap_or_else(Q::zero)
    }

    pub fn exponents(&self) -> impl Iterator<Item = &Exponent> {
        self.terms.keys()
    }

    pub fn add_term(&mut self, e: Exponent, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get() + &c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        MultiPoly { nvars: self.nvars, terms: self.terms.iter().map(|(e, a)| (e.clone(), a * c)).collect() }
    }

    /// Multiply by the monomial `c * x^e`.
    pub fn mul_term(&self, e: &[u32], c: &Q) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        MultiPoly { nvars: self.nvars, terms: self.terms.iter().map(|(f, a)| (exp_add(f, e), a * c)).collect() }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut result = Self::one(self.nvars);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = &result * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        result
    }

    pub fn derivative(&self, i: usize) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[i] > 0 {
                let mut f = e.clone();
                f[i] -= 1;
                out.add_term(f, c * q(e[i] as i64));
            }
        }
        out
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| exp_degree(e)).max()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&k| k == 0))
    }

    pub fn constant_term(&self) -> Q {
        self.coeff(&vec![0; self.nvars])
    }

    pub fn eval(&self, x: &[Q]) -> Q {
        let mut s = Q::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (xi, &k) in x.iter().zip(e) {
                if k > 0 {
                    t *= num_traits::pow(xi.clone(), k as usize);
                }
            }
            s += t;
        }
        s
    }

    pub fn eval_complex(&self, x: &[Complex64]) -> Complex64 {
        let mut s = Complex64::new(0.0, 0.0);
        for (e, c) in &self.terms {
            let mut t = Complex64::new(c.to_f64().unwrap_or(f64::NAN), 0.0);
            for (xi, &k) in x.iter().zip(e) {
                if k > 0 {
                    t *= xi.powu(k);
                }
            }
            s += t;
        }
        s
    }

    /// Substitute `x_i -> images[i]` (all images live in a common ring).
    pub fn compose(&self, images: &[MultiPoly]) -> MultiPoly {
        assert_eq!(images.len(), self.nvars);
        let target = images.first().map_or(0, |p| p.nvars);
        let mut out = MultiPoly::zero(target);
        for (e, c) in &self.terms {
            let mut t = MultiPoly::constant(target, c.clone());
            for (img, &k) in images.iter().zip(e) {
                if k > 0 {
                    t = &t * &img.pow(k);
                }
            }
            out = &out + &t;
        }
        out
    }

    /// Embed in a ring with `extra` more variables appended.
    pub fn extend_vars(&self, extra: usize) -> MultiPoly {
        MultiPoly {
            nvars: self.nvars + extra,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let mut f = e.clone();
                    f.extend(std::iter::repeat_n(0, extra));
                    (f, c.clone())
                })
                .collect(),
        }
    }

    /// Evaluate the variables not in `keep` at 1; the result lives in the
    /// ring whose variables are `keep` (in the given order).
    pub fn restrict_to(&self, keep: &[usize]) -> MultiPoly {
        let mut out = MultiPoly::zero(keep.len());
        for (e, c) in &self.terms {
            out.add_term(keep.iter().map(|&i| e[i]).collect(), c.clone());
        }
        out
    }

    /// Exact division by a nonzero polynomial.
    pub fn div_exact(&self, d: &MultiPoly) -> Result<MultiPoly, PolyError> {
        let (ld, lc) = d.terms.iter().next_back().ok_or(PolyError::NotExactDivision)?;
        let mut rem = self.clone();
        let mut quot = MultiPoly::zero(self.nvars);
        while let Some((le, c)) = rem.terms.iter().next_back() {
            if !exp_divides(ld, le) {
                return Err(PolyError::NotExactDivision);
            }
            let e = exp_sub(le, ld);
            let c = c / lc;
            rem = &rem - &d.mul_term(&e, &c);
            quot.add_term(e, c);
        }
        Ok(quot)
    }

    /// Parse using the given variable names.
    pub fn parse(s: &str, names: &[String]) -> Result<MultiPoly, PolyError> {
        Parser { src: s.as_bytes(), pos: 0, names }.parse_all()
    }

    pub fn display<'a>(&'a self, names: &'a [String]) -> PolyDisplay<'a> {
        PolyDisplay { p: self, names }
    }

    /// Homogeneous degree, or a witness pair of terms of different degree.
    pub fn degree_in(&self, grading: &Grading) -> Result<DegreeClass, PolyError> {
        degree_of(self, grading)
    }
}

pub struct PolyDisplay<'a> {
    p: &'a MultiPoly,
    names: &'a [String],
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.p.is_zero() {
            return write!(f, "0");
        }
        // Largest exponent (lexicographically) first.
        for (i, (e, c)) in self.p.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            let mono = format_monomial(e, self.names);
            if mono == "1" {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{a}*{mono}")?;
            }
        }
        Ok(())
    }
}

impl Add for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), -c.clone());
        }
        out
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly { nvars: self.nvars, terms: self.terms.iter().map(|(e, c)| (e.clone(), -c.clone())).collect() }
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = MultiPoly::zero(self.nvars.max(rhs.nvars));
        for (e, c) in &self.terms {
            for (f, d) in &rhs.terms {
                out.add_term(exp_add(e, f), c * d);
            }
        }
        out
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    names: &'a [String],
}

impl Parser<'_> {
    fn err<T>(&self, msg: &str) -> Result<T, PolyError> {
        Err(PolyError::Parse { pos: self.pos, msg: msg.to_string() })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn parse_all(mut self) -> Result<MultiPoly, PolyError> {
        let p = self.expr()?;
        if self.peek().is_some() {
            return self.err("unexpected trailing input");
        }
        Ok(p)
    }

    fn expr(&mut self) -> Result<MultiPoly, PolyError> {
        let mut acc = self.term()?;
        while let Some(c @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let t = self.term()?;
            acc = if c == b'+' { &acc + &t } else { &acc - &t };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<MultiPoly, PolyError> {
        let mut acc = self.unary()?;
        while let Some(c @ (b'*' | b'/')) = self.peek() {
            self.pos += 1;
            let f = self.unary()?;
            if c == b'*' {
                acc = &acc * &f;
            } else {
                if !f.is_constant() || f.is_zero() {
                    return self.err("division only by nonzero constants");
                }
                acc = acc.scale(&f.constant_term().recip());
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<MultiPoly, PolyError> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(-&self.unary()?)
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<MultiPoly, PolyError> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            if start == self.pos {
                return self.err("expected a nonnegative integer exponent");
            }
            let k: u32 = std::str::from_utf8(&self.src[start..self.pos])
                .unwrap()
                .parse()
                .or_else(|_| self.err("exponent too large"))?;
            return Ok(base.pow(k));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<MultiPoly, PolyError> {
        let n = self.names.len();
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let p = self.expr()?;
                if self.peek() != Some(b')') {
                    return self.err("expected `)`");
                }
                self.pos += 1;
                Ok(p)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let digits = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                let v: num_bigint::BigInt = digits.parse().unwrap();
                Ok(MultiPoly::constant(n, Q::from_integer(v)))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                match self.names.iter().position(|v| v == name) {
                    Some(i) => Ok(MultiPoly::var(n, i)),
                    None => Err(PolyError::UnknownVariable(name.to_string())),
                }
            }
            Some(_) => self.err("unexpected character"),
            None => self.err("unexpected end of input"),
        }
    }
}

/// The common degree of all terms.
pub fn degree_of(p: &MultiPoly, grading: &Grading) -> Result<DegreeClass, PolyError> {
    let mut iter = p.terms.keys();
    let first = iter.next().ok_or(PolyError::ZeroPolynomial)?;
    let d = grading.degree_of_exponents(first);
    for e in iter {
        if grading.degree_of_exponents(e) != d {
            let names: Vec<String> = (1..=p.nvars).map(|i| format!("x{i}")).collect();
            return Err(PolyError::NotHomogeneous {
                first: format_monomial(first, &names),
                second: format_monomial(e, &names),
            });
        }
    }
    Ok(d)
}

pub type PolyMatrix = Vec<Vec<MultiPoly>>;

/// Determinant: cofactor expansion up to 3x3, fraction-free Bareiss beyond.
pub fn poly_det(m: &[Vec<MultiPoly>]) -> Result<MultiPoly, PolyError> {
    let n = m.len();
    if m.iter().any(|r| r.len() != n) {
        return Err(PolyError::NonSquare);
    }
    if n == 0 {
        return Ok(MultiPoly::one(0));
    }
    if n <= 3 {
        return Ok(cofactor_det(m));
    }
    bareiss_det(m)
}

fn cofactor_det(m: &[Vec<MultiPoly>]) -> MultiPoly {
    let n = m.len();
    if n == 1 {
        return m[0][0].clone();
    }
    let nv = m[0][0].nvars();
    let mut out = MultiPoly::zero(nv);
    for j in 0..n {
        if m[0][j].is_zero() {
            continue;
        }
        let minor: Vec<Vec<MultiPoly>> = m[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, p)| p.clone()).collect())
            .collect();
        let t = &m[0][j] * &cofactor_det(&minor);
        out = if j % 2 == 0 { &out + &t } else { &out - &t };
    }
    out
}

fn bareiss_det(m: &[Vec<MultiPoly>]) -> Result<MultiPoly, PolyError> {
    let n = m.len();
    let nv = m[0][0].nvars();
    let mut a = m.to_vec();
    let mut sign = false;
    let mut prev = MultiPoly::one(nv);
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(p) => {
                    a.swap(k, p);
                    sign = !sign;
                }
                None => return Ok(MultiPoly::zero(nv)),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&a[i][j] * &a[k][k]) - &(&a[i][k] * &a[k][j]);
                a[i][j] = num.div_exact(&prev)?;
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    Ok(if sign { -&d } else { d })
}

/// Set the variables off the cone `sigma` to 1; the chart variables are
/// the rays of `sigma` in increasing index order.
pub fn dehomogenize(p: &MultiPoly, fan: &FanData, sigma: usize) -> Result<MultiPoly, PolyError> {
    Ok(p.restrict_to(fan.cone(sigma)?))
}

/// Lift a chart polynomial to a homogeneous polynomial of degree `rho`
/// by solving for the exponents of the complement variables.
pub fn homogenize_to_degree(
    qpoly: &MultiPoly,
    fan: &FanData,
    sigma: usize,
    rho: &DegreeClass,
    grading: &Grading,
) -> Result<MultiPoly, PolyError> {
    let cone = fan.cone(sigma)?;
    let comp = fan.complement(sigma)?;
    let nvars = fan.num_rays();
    let rho = grading.adopt(rho).map_err(|_| PolyError::NonUniqueLift)?;
    let r = grading.free_rank();
    // Column k = free degree of the k-th complement variable.
    let zdeg: Vec<DegreeClass> = comp.iter().map(|&i| grading.var_degree(i)).collect();
    if comp.len() != r {
        return Err(PolyError::NonUniqueLift);
    }
    let mat: Vec<Vec<Q>> = (0..r).map(|row| zdeg.iter().map(|d| q(d.free[row])).collect()).collect();
    if linalg::rank(&mat) < r {
        return Err(PolyError::NonUniqueLift);
    }
    let mut out = MultiPoly::zero(nvars);
    for (b, c) in qpoly.terms() {
        let mut e = vec![0u32; nvars];
        for (&i, &k) in cone.iter().zip(b) {
            e[i] = k;
        }
        let base = grading.degree_of_exponents(&e);
        let diff = &rho - &base;
        let rhs: Vec<Q> = diff.free.iter().map(|&x| q(x)).collect();
        let sol = linalg::solve_square(&mat, &rhs).ok_or(PolyError::NonUniqueLift)?;
        let fail = || PolyError::NoIntegralLift { monomial: format_monomial(b, &chart_names(fan, sigma)) };
        for (&i, s) in comp.iter().zip(&sol) {
            let v = linalg::to_i64(s).ok_or_else(fail)?;
            if v < 0 {
                return Err(fail());
            }
            e[i] = v as u32;
        }
        if grading.degree_of_exponents(&e) != rho {
            return Err(fail());
        }
        out.add_term(e, c.clone());
    }
    Ok(out)
}

/// Variable names of the chart of `sigma`.
pub fn chart_names(fan: &FanData, sigma: usize) -> Vec<String> {
    fan.cone(sigma).map(|c| c.iter().map(|&i| fan.variables()[i].clone()).collect()).unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::q_frac;

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn parse_and_print() {
        let n = names(&["x", "y", "z", "t", "u"]);
        let p = MultiPoly::parse("x^2*y - 3/2*z*t*u", &n).unwrap();
        assert_eq!(p.num_terms(), 2);
        assert_eq!(p.coeff(&[0, 0, 1, 1, 1]), q_frac(-3, 2));
        assert_eq!(p.display(&n).to_string(), "x^2*y - 3/2*z*t*u");
        let r = MultiPoly::parse("(x+y)^2 - x^2 - 2*x*y", &n).unwrap();
        assert_eq!(r.display(&n).to_string(), "y^2");
        assert!(matches!(MultiPoly::parse("x + w", &n), Err(PolyError::UnknownVariable(_))));
        assert!(matches!(MultiPoly::parse("x +", &n), Err(PolyError::Parse { .. })));
        assert!(matches!(MultiPoly::parse("x / y", &n), Err(PolyError::Parse { .. })));
        let back = MultiPoly::parse(&p.display(&n).to_string(), &n).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn determinants() {
        let n = names(&["x", "y"]);
        let x = MultiPoly::parse("x", &n).unwrap();
        let y = MultiPoly::parse("y", &n).unwrap();
        let d = poly_det(&[vec![x.clone(), y.clone()], vec![y.clone(), x.clone()]]).unwrap();
        assert_eq!(d, MultiPoly::parse("x^2 - y^2", &n).unwrap());
        assert_eq!(poly_det(&[vec![x.clone()]]).unwrap(), x);
        assert_eq!(poly_det(&[vec![x.clone(), y.clone()]]), Err(PolyError::NonSquare));
        // 4x4 through Bareiss vs a block-diagonal product.
        let z = MultiPoly::zero(2);
        let m = vec![
            vec![x.clone(), y.clone(), z.clone(), z.clone()],
            vec![y.clone(), x.clone(), z.clone(), z.clone()],
            vec![z.clone(), z.clone(), x.clone(), MultiPoly::one(2)],
            vec![z.clone(), z.clone(), y.clone(), x.clone()],
        ];
        let expect = &MultiPoly::parse("x^2 - y^2", &n).unwrap() * &MultiPoly::parse("x^2 - y", &n).unwrap();
        assert_eq!(poly_det(&m).unwrap(), expect);
    }

    #[test]
    fn exact_division() {
        let n = names(&["x", "y"]);
        let a = MultiPoly::parse("x^2 - y^2", &n).unwrap();
        let b = MultiPoly::parse("x + y", &n).unwrap();
        assert_eq!(a.div_exact(&b).unwrap(), MultiPoly::parse("x - y", &n).unwrap());
        assert_eq!(b.div_exact(&a), Err(PolyError::NotExactDivision));
    }

    #[test]
    fn derivative_and_eval() {
        let n = names(&["x", "y"]);
        let p = MultiPoly::parse("x^3*y + 2*y", &n).unwrap();
        assert_eq!(p.derivative(0), MultiPoly::parse("3*x^2*y", &n).unwrap());
        assert_eq!(p.eval(&[q(2), q(1)]), q(10));
        let z = p.eval_complex(&[Complex64::new(2.0, 0.0), Complex64::new(1.0, 0.0)]);
        assert!((z.re - 10.0).abs() < 1e-12);
    }
}

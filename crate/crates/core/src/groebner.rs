//! Monomial orders, Buchberger's algorithm over the rationals, normal forms
//! and radical membership.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fan::FanData;
use crate::linalg::Q;
use crate::poly::{exp_add, exp_divides, exp_lcm, exp_sub, Exponent, MultiPoly};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OrderError {
    #[error("unknown order kind `{0}` (expected grevlex or lex)")]
    UnknownKind(String),
    #[error("unknown variable `{0}` in order")]
    UnknownVariable(String),
    #[error("order must list every variable exactly once")]
    NotAPermutation,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OrderKind {
    Grevlex,
    Lex,
}

/// A global monomial order; `precedence[0]` is the largest variable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialOrder {
    pub kind: OrderKind,
    pub precedence: Vec<usize>,
}

impl MonomialOrder {
    pub fn new(kind: OrderKind, precedence: Vec<usize>) -> Result<Self, OrderError> {
        let mut seen = vec![false; precedence.len()];
        for &p in &precedence {
            if p >= seen.len() || seen[p] {
                return Err(OrderError::NotAPermutation);
            }
            seen[p] = true;
        }
        Ok(MonomialOrder { kind, precedence })
    }

    pub fn grevlex(nvars: usize) -> Self {
        MonomialOrder { kind: OrderKind::Grevlex, precedence: (0..nvars).collect() }
    }

    pub fn lex(nvars: usize) -> Self {
        MonomialOrder { kind: OrderKind::Lex, precedence: (0..nvars).collect() }
    }

    pub fn nvars(&self) -> usize {
        self.precedence.len()
    }

    /// Parse `grevlex:x>y>z` or `lex:...`; a bare kind uses the given variable order.
    pub fn parse(s: &str, names: &[String]) -> Result<Self, OrderError> {
        let (kind, vars) = match s.split_once(':') {
            Some((k, v)) => (k.trim(), Some(v)),
            None => (s.trim(), None),
        };
        let kind = match kind {
            "grevlex" => OrderKind::Grevlex,
            "lex" => OrderKind::Lex,
            other => return Err(OrderError::UnknownKind(other.to_string())),
        };
        let precedence = match vars {
            None => (0..names.len()).collect(),
            Some(v) => v
                .split('>')
                .map(|name| {
                    let name = name.trim();
                    names.iter().position(|n| n == name).ok_or_else(|| OrderError::UnknownVariable(name.to_string()))
                })
                .collect::<Result<Vec<_>, _>>()?,
        };
        if precedence.len() != names.len() {
            return Err(OrderError::NotAPermutation);
        }
        Self::new(kind, precedence)
    }

    pub fn to_spec(&self, names: &[String]) -> String {
        let kind = match self.kind {
            OrderKind::Grevlex => "grevlex",
            OrderKind::Lex => "lex",
        };
        let vars: Vec<&str> = self.precedence.iter().map(|&i| names[i].as_str()).collect();
        format!("{kind}:{}", vars.join(">"))
    }

    /// The same order with a new smallest variable appended.
    pub fn with_extra_last(&self) -> Self {
        let mut precedence = self.precedence.clone();
        precedence.push(precedence.len());
        MonomialOrder { kind: self.kind, precedence }
    }

    /// A vector whose lexicographic order matches this monomial order.
    pub fn key(&self, e: &[u32]) -> Vec<i64> {
        match self.kind {
            OrderKind::Lex => self.precedence.iter().map(|&i| e[i] as i64).collect(),
            OrderKind::Grevlex => {
                let mut k = Vec::with_capacity(e.len() + 1);
                k.push(e.iter().map(|&x| x as i64).sum());
                k.extend(self.precedence.iter().rev().map(|&i| -(e[i] as i64)));
                k
            }
        }
    }

    pub fn cmp(&self, a: &[u32], b: &[u32]) -> Ordering {
        self.key(a).cmp(&self.key(b))
    }

    /// Leading exponent and coefficient of a nonzero polynomial.
    pub fn leading_term<'a>(&self, p: &'a MultiPoly) -> Option<(&'a Exponent, &'a Q)> {
        p.terms().max_by(|a, b| self.cmp(a.0, b.0))
    }
}

/// A polynomial with terms sorted by decreasing order key.
#[derive(Clone, Debug)]
struct Sorted {
    terms: Vec<(Vec<i64>, Exponent, Q)>,
}

impl Sorted {
    fn from_poly(p: &MultiPoly, order: &MonomialOrder) -> Self {
        let mut terms: Vec<_> = p.terms().map(|(e, c)| (order.key(e), e.clone(), c.clone())).collect();
        terms.sort_by(|a, b| b.0.cmp(&a.0));
        Sorted { terms }
    }

    fn to_poly(&self, nvars: usize) -> MultiPoly {
        MultiPoly::from_terms(nvars, self.terms.iter().map(|(_, e, c)| (e.clone(), c.clone())))
    }

    fn lead(&self) -> &Exponent {
        &self.terms[0].1
    }

    fn make_monic(&mut self) {
        let lc = self.terms[0].2.clone();
        if !lc.is_one() {
            for t in &mut self.terms {
                t.2 = &t.2 / &lc;
            }
        }
    }
}

/// Reduce `p` completely against the monic polynomials `basis`.
fn reduce(p: BTreeMap<Vec<i64>, (Exponent, Q)>, basis: &[&Sorted], order: &MonomialOrder) -> Sorted {
    let mut rem = p;
    let mut out = Vec::new();
    while let Some((key, (e, c))) = rem.pop_last() {
        match basis.iter().find(|g| exp_divides(g.lead(), &e)) {
            Some(g) => {
                let shift = exp_sub(&e, g.lead());
                for (_, ge, gc) in &g.terms[1..] {
                    let te = exp_add(ge, &shift);
                    let tk = order.key(&te);
                    let delta = -(gc * &c);
                    match rem.entry(tk) {
                        std::collections::btree_map::Entry::Vacant(v) => {
                            v.insert((te, delta));
                        }
                        std::collections::btree_map::Entry::Occupied(mut o) => {
                            let s = &o.get().1 + &delta;
                            if s.is_zero() {
                                o.remove();
                            } else {
                                o.get_mut().1 = s;
                            }
                        }
                    }
                }
            }
            None => out.push((key, e, c)),
        }
    }
    Sorted { terms: out }
}

fn to_map(s: &Sorted) -> BTreeMap<Vec<i64>, (Exponent, Q)> {
    s.terms.iter().map(|(k, e, c)| (k.clone(), (e.clone(), c.clone()))).collect()
}

fn s_poly(f: &Sorted, g: &Sorted, order: &MonomialOrder) -> BTreeMap<Vec<i64>, (Exponent, Q)> {
    let l = exp_lcm(f.lead(), g.lead());
    let sf = exp_sub(&l, f.lead());
    let sg = exp_sub(&l, g.lead());
    let mut out: BTreeMap<Vec<i64>, (Exponent, Q)> = BTreeMap::new();
    // Both are monic, so the leading terms cancel.
    for (_, e, c) in &f.terms[1..] {
        let te = exp_add(e, &sf);
        out.insert(order.key(&te), (te, c.clone()));
    }
    for (_, e, c) in &g.terms[1..] {
        let te = exp_add(e, &sg);
        let k = order.key(&te);
        let s = out.get(&k).map_or_else(|| -c.clone(), |v| &v.1 - c);
        if s.is_zero() {
            out.remove(&k);
        } else {
            out.insert(k, (te, s));
        }
    }
    out
}

fn coprime(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| *x == 0 || *y == 0)
}

#[derive(Clone, Debug)]
pub struct GroebnerBasis {
    order: MonomialOrder,
    nvars: usize,
    basis: Vec<Sorted>,
    generators: Vec<MultiPoly>,
    source: Vec<MultiPoly>,
}

struct Pair {
    i: usize,
    j: usize,
    lcm: Exponent,
    key: Vec<i64>,
}

/// Buchberger's algorithm with Gebauer-Moeller pair elimination and the
/// normal selection strategy; returns the reduced, monic basis.
pub fn buchberger(gens: &[MultiPoly], order: &MonomialOrder) -> GroebnerBasis {
    let nvars = order.nvars();
    let mut polys: Vec<Sorted> = Vec::new();
    let mut active: Vec<bool> = Vec::new();
    let mut pairs: Vec<Pair> = Vec::new();

    let update = |h: Sorted, polys: &mut Vec<Sorted>, active: &mut Vec<bool>, pairs: &mut Vec<Pair>| {
        let hi = polys.len();
        let hl = h.lead().clone();
        // Candidate new pairs (h, g).
        let cands: Vec<(usize, Exponent)> =
            (0..hi).filter(|&g| active[g]).map(|g| (g, exp_lcm(&hl, polys[g].lead()))).collect();
        let mut kept: Vec<(usize, Exponent)> = Vec::new();
        for (idx, (g, l)) in cands.iter().enumerate() {
            let coprime_pair = coprime(&hl, polys[*g].lead());
            let dominated = cands[idx + 1..].iter().any(|(_, l2)| exp_divides(l2, l))
                || kept.iter().any(|(_, l2)| exp_divides(l2, l));
            if coprime_pair || !dominated {
                kept.push((*g, l.clone()));
            }
        }
        let new_pairs: Vec<(usize, Exponent)> =
            kept.into_iter().filter(|(g, _)| !coprime(&hl, polys[*g].lead())).collect();
        pairs.retain(|p| {
            !(exp_divides(&hl, &p.lcm)
                && exp_lcm(polys[p.i].lead(), &hl) != p.lcm
                && exp_lcm(&hl, polys[p.j].lead()) != p.lcm)
        });
        for (g, l) in new_pairs {
            let key = order.key(&l);
            pairs.push(Pair { i: g, j: hi, lcm: l, key });
        }
        for g in 0..hi {
            if active[g] && exp_divides(&hl, polys[g].lead()) {
                active[g] = false;
            }
        }
        polys.push(h);
        active.push(true);
    };

    for f in gens {
        let s = Sorted::from_poly(f, order);
        let basis: Vec<&Sorted> = (0..polys.len()).filter(|&i| active[i]).map(|i| &polys[i]).collect();
        let mut h = reduce(to_map(&s), &basis, order);
        if h.terms.is_empty() {
            continue;
        }
        h.make_monic();
        update(h, &mut polys, &mut active, &mut pairs);
    }

    while !pairs.is_empty() {
        let best = (0..pairs.len())
            .min_by(|&a, &b| {
                pairs[a].key.cmp(&pairs[b].key).then((pairs[a].j, pairs[a].i).cmp(&(pairs[b].j, pairs[b].i)))
            })
            .unwrap();
        let p = pairs.swap_remove(best);
        let sp = s_poly(&polys[p.i], &polys[p.j], order);
        let basis: Vec<&Sorted> = (0..polys.len()).filter(|&i| active[i]).map(|i| &polys[i]).collect();
        let mut h = reduce(sp, &basis, order);
        if h.terms.is_empty() {
            continue;
        }
        h.make_monic();
        update(h, &mut polys, &mut active, &mut pairs);
    }

    // Interreduce the minimal basis.
    let mut minimal: Vec<Sorted> = (0..polys.len()).filter(|&i| active[i]).map(|i| polys[i].clone()).collect();
    minimal.sort_by(|a, b| b.terms[0].0.cmp(&a.terms[0].0));
    minimal.dedup_by(|a, b| a.lead() == b.lead());
    let mut reduced = Vec::with_capacity(minimal.len());
    for i in 0..minimal.len() {
        let others: Vec<&Sorted> = (0..minimal.len()).filter(|&j| j != i).map(|j| &minimal[j]).collect();
        let head = minimal[i].terms[0].clone();
        let tail = Sorted { terms: minimal[i].terms[1..].to_vec() };
        let mut r = reduce(to_map(&tail), &others, order);
        r.terms.insert(0, head);
        reduced.push(r);
    }
    let generators = reduced.iter().map(|s| s.to_poly(nvars)).collect();
    GroebnerBasis { order: order.clone(), nvars, basis: reduced, generators, source: gens.to_vec() }
}

impl GroebnerBasis {
    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    /// Reduced monic generators, sorted by decreasing leading monomial.
    pub fn generators(&self) -> &[MultiPoly] {
        &self.generators
    }

    pub fn source(&self) -> &[MultiPoly] {
        &self.source
    }

    pub fn leading_monomials(&self) -> Vec<Exponent> {
        self.basis.iter().map(|s| s.lead().clone()).collect()
    }

    pub fn is_unit_ideal(&self) -> bool {
        self.basis.iter().any(|s| s.lead().iter().all(|&k| k == 0))
    }

    /// True iff `e` is not in the leading-term ideal.
    pub fn is_standard(&self, e: &[u32]) -> bool {
        !self.basis.iter().any(|g| exp_divides(g.lead(), e))
    }

    pub fn normal_form(&self, p: &MultiPoly) -> MultiPoly {
        let s = Sorted::from_poly(p, &self.order);
        let basis: Vec<&Sorted> = self.basis.iter().collect();
        reduce(to_map(&s), &basis, &self.order).to_poly(self.nvars)
    }

    pub fn ideal_member(&self, p: &MultiPoly) -> bool {
        self.normal_form(p).is_zero()
    }
}

/// Rabinowitsch: `p` vanishes on `V(gens)` iff `1 in <gens, 1 - w p>`.
pub fn radical_member(p: &MultiPoly, gens: &[MultiPoly], order: &MonomialOrder) -> bool {
    let n = order.nvars();
    let ext = order.with_extra_last();
    let mut g: Vec<MultiPoly> = gens.iter().map(|f| f.extend_vars(1)).collect();
    let w = MultiPoly::var(n + 1, n);
    g.push(&MultiPoly::one(n + 1) - &(&w * &p.extend_vars(1)));
    buchberger(&g, &ext).is_unit_ideal()
}

/// Verdict of [`no_common_zeros_on_x`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommonZeroReport {
    pub ok: bool,
    /// A generator of the irrelevant ideal outside the radical of `<F>`.
    pub failing: Option<Exponent>,
}

/// The `F_i` have no common zero on `X` iff `V(F) lies in Z(Sigma)`, i.e.
/// every generator of the irrelevant ideal lies in the radical of `<F>`.
pub fn no_common_zeros_on_x(fan: &FanData, f: &[MultiPoly], order: &MonomialOrder) -> CommonZeroReport {
    for gen in irrelevant_generators(fan) {
        let p = MultiPoly::monomial(gen.clone(), Q::one());
        if !radical_member(&p, f, order) {
            return CommonZeroReport { ok: false, failing: Some(gen) };
        }
    }
    CommonZeroReport { ok: true, failing: None }
}

/// Exponents of `x_hat_sigma = prod_{i not in sigma} x_i`, one per maximal
/// cone, deduplicated, in cone order.
pub fn irrelevant_generators(fan: &FanData) -> Vec<Exponent> {
    let mut out: Vec<Exponent> = Vec::new();
    for cone in fan.max_cones() {
        let e: Exponent = (0..fan.num_rays()).map(|i| u32::from(!cone.contains(&i))).collect();
        if !out.contains(&e) {
            out.push(e);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    fn p(s: &str, n: &[String]) -> MultiPoly {
        MultiPoly::parse(s, n).unwrap()
    }

    #[test]
    fn order_keys() {
        let n = names(&["x", "y", "z"]);
        let g = MonomialOrder::parse("grevlex:x>y>z", &n).unwrap();
        // x*z < y^2 in grevlex.
        assert_eq!(g.cmp(&[1, 0, 1], &[0, 2, 0]), Ordering::Less);
        assert_eq!(g.cmp(&[2, 0, 0], &[0, 0, 1]), Ordering::Greater);
        let l = MonomialOrder::parse("lex:z>y>x", &n).unwrap();
        assert_eq!(l.cmp(&[5, 0, 0], &[0, 0, 1]), Ordering::Less);
        assert!(MonomialOrder::parse("foo:x>y>z", &n).is_err());
        assert!(MonomialOrder::parse("lex:x>y", &n).is_err());
        assert!(MonomialOrder::parse("lex:x>y>w", &n).is_err());
        assert_eq!(g.to_spec(&n), "grevlex:x>y>z");
    }

    #[test]
    fn small_bases() {
        let n = names(&["x", "y"]);
        let gl = MonomialOrder::parse("grevlex:x>y", &n).unwrap();
        let lx = MonomialOrder::parse("lex:x>y", &n).unwrap();
        let gb = buchberger(&[p("x^2", &n), p("y^2", &n)], &gl);
        assert_eq!(gb.generators(), &[p("x^2", &n), p("y^2", &n)]);
        let gb = buchberger(&[p("x - y", &n), p("y^2", &n)], &lx);
        assert_eq!(gb.generators(), &[p("x - y", &n), p("y^2", &n)]);
        let gb = buchberger(&[p("x + y", &n), p("x - y", &n)], &gl);
        assert_eq!(gb.generators(), &[p("x", &n), p("y", &n)]);
        let gb = buchberger(&[p("x^2", &n), p("y^2", &n)], &gl);
        assert_eq!(gb.normal_form(&p("x^2*y + x*y", &n)), p("x*y", &n));
    }

    #[test]
    fn cyclic_three() {
        let n = names(&["a", "b", "c"]);
        let o = MonomialOrder::grevlex(3);
        let gens = [p("a + b + c", &n), p("a*b + b*c + c*a", &n), p("a*b*c - 1", &n)];
        let gb = buchberger(&gens, &o);
        for g in &gens {
            assert!(gb.ideal_member(g));
        }
        // The quotient has dimension 6 (= 3!).
        let mut count = 0;
        for i in 0..6u32 {
            for j in 0..6u32 {
                for k in 0..6u32 {
                    if gb.is_standard(&[i, j, k]) {
                        count += 1;
                    }
                }
            }
        }
        assert_eq!(count, 6);
        let lex = buchberger(&gens, &MonomialOrder::lex(3));
        assert!(lex.generators().iter().any(|g| g == &p("c^3 - 1", &n)));
    }

    #[test]
    fn radicals() {
        let n = names(&["x", "y"]);
        let o = MonomialOrder::grevlex(2);
        assert!(radical_member(&p("x", &n), &[p("x^2", &n)], &o));
        assert!(!radical_member(&p("y", &n), &[p("x", &n)], &o));
        assert!(radical_member(&p("x + y", &n), &[p("x^2", &n), p("x*y", &n), p("y^2", &n)], &o));
    }

    #[test]
    fn p1_common_zeros() {
        let fan = FanData::new(1, vec![vec![1], vec![-1]], vec![vec![1], vec![0]], Some(names(&["x", "y"]))).unwrap();
        let n = names(&["x", "y"]);
        let o = MonomialOrder::grevlex(2);
        let rep = no_common_zeros_on_x(&fan, &[p("x", &n), p("x", &n)], &o);
        assert!(!rep.ok);
        assert!(no_common_zeros_on_x(&fan, &[p("x", &n), p("y", &n)], &o).ok);
    }
}

//! Divisor polytopes, lattice points (= monomial bases), volumes and
//! intersection numbers.

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::divisor;
use crate::fan::{subsets, FanData};
use crate::grading::{DegreeClass, Grading, GradingError};
use crate::linalg::{self, q, Q};
use crate::poly::Exponent;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolytopeError {
    #[error("polytope is unbounded in coordinate {0}")]
    Unbounded(usize),
    #[error("polytope has dimension {got} < {dim}; volume is degenerate")]
    DegenerateVolume { got: usize, dim: usize },
    #[error("class {0} is not ample")]
    NotAmple(String),
    #[error("bounding box holds {0} points, refusing to enumerate")]
    TooLarge(u128),
    #[error(transparent)]
    Grading(#[from] GradingError),
}

/// `{ m : <m, normals[i]> >= -offsets[i] }`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HPolytope {
    pub dim: usize,
    pub normals: Vec<Vec<i64>>,
    pub offsets: Vec<Q>,
}

const MAX_BOX: u128 = 50_000_000;

impl HPolytope {
    pub fn new(dim: usize, normals: Vec<Vec<i64>>, offsets: Vec<Q>) -> Self {
        assert_eq!(normals.len(), offsets.len());
        assert!(normals.iter().all(|v| v.len() == dim));
        HPolytope { dim, normals, offsets }
    }

    pub fn contains(&self, m: &[Q]) -> bool {
        self.normals.iter().zip(&self.offsets).all(|(nrm, a)| pairing(m, nrm) >= -a.clone())
    }

    pub fn contains_int(&self, m: &[i64]) -> bool {
        let mq: Vec<Q> = m.iter().map(|&x| q(x)).collect();
        self.contains(&mq)
    }

    /// Integer bounds on each coordinate via Fourier-Motzkin elimination.
    /// `Ok(None)` means the polytope is empty.
    pub fn bounding_box(&self) -> Result<Option<Vec<(i64, i64)>>, PolytopeError> {
        let rows: Vec<(Vec<Q>, Q)> = self
            .normals
            .iter()
            .zip(&self.offsets)
            .map(|(nrm, a)| (nrm.iter().map(|&x| q(x)).collect(), -a.clone()))
            .collect();
        let mut bounds = Vec::with_capacity(self.dim);
        for j in 0..self.dim {
            let mut sys = rows.clone();
            for k in 0..self.dim {
                if k != j {
                    sys = eliminate(&sys, k);
                }
            }
            let (mut lo, mut hi): (Option<Q>, Option<Q>) = (None, None);
            for (c, b) in &sys {
                let cj = &c[j];
                if cj.is_zero() {
                    if b.is_positive() {
                        return Ok(None);
                    }
                } else if cj.is_positive() {
                    let v = b / cj;
                    lo = Some(lo.map_or(v.clone(), |l| if v > l { v.clone() } else { l }));
                } else {
                    let v = b / cj;
                    hi = Some(hi.map_or(v.clone(), |h| if v < h { v.clone() } else { h }));
                }
            }
            let (Some(lo), Some(hi)) = (lo, hi) else {
                return Err(PolytopeError::Unbounded(j));
            };
            let lo = lo.ceil().to_integer();
            let hi = hi.floor().to_integer();
            if lo > hi {
                return Ok(None);
            }
            bounds.push((i64::try_from(lo).unwrap(), i64::try_from(hi).unwrap()));
        }
        Ok(Some(bounds))
    }

    /// All lattice points, sorted lexicographically.
    pub fn lattice_points(&self) -> Result<Vec<Vec<i64>>, PolytopeError> {
        let Some(bounds) = self.bounding_box()? else {
            return Ok(Vec::new());
        };
        let size: u128 = bounds.iter().map(|(l, h)| (h - l + 1) as u128).product();
        if size > MAX_BOX {
            return Err(PolytopeError::TooLarge(size));
        }
        let mut out = Vec::new();
        let mut cur: Vec<i64> = bounds.iter().map(|b| b.0).collect();
        if self.dim == 0 {
            return Ok(if self.contains_int(&[]) { vec![vec![]] } else { vec![] });
        }
        loop {
            if self.contains_int(&cur) {
                out.push(cur.clone());
            }
            let mut k = self.dim;
            loop {
                if k == 0 {
                    return Ok(out);
                }
                k -= 1;
                if cur[k] < bounds[k].1 {
                    cur[k] += 1;
                    break;
                }
                cur[k] = bounds[k].0;
            }
        }
    }

    /// Vertices: feasible unique solutions of `dim` tight inequalities.
    pub fn vertices(&self) -> Vec<Vec<Q>> {
        let mut verts: Vec<Vec<Q>> = Vec::new();
        for sub in subsets(self.normals.len(), self.dim) {
            let a: Vec<Vec<Q>> = sub.iter().map(|&i| self.normals[i].iter().map(|&x| q(x)).collect()).collect();
            let b: Vec<Q> = sub.iter().map(|&i| -self.offsets[i].clone()).collect();
            if let Some(v) = linalg::solve_square(&a, &b) {
                if self.contains(&v) && !verts.contains(&v) {
                    verts.push(v);
                }
            }
        }
        verts.sort();
        verts
    }

    /// Exact Euclidean volume through a pulling triangulation.
    pub fn volume(&self) -> Result<Q, PolytopeError> {
        self.bounding_box()?;
        let verts = self.vertices();
        let got = if verts.is_empty() { 0 } else { linalg::affine_dimension(&verts) };
        if got < self.dim || verts.is_empty() {
            return Err(PolytopeError::DegenerateVolume { got, dim: self.dim });
        }
        if self.dim == 0 {
            return Ok(q(1));
        }
        let tight: Vec<Vec<bool>> = verts
            .iter()
            .map(|v| self.normals.iter().zip(&self.offsets).map(|(nrm, a)| pairing(v, nrm) == -a.clone()).collect())
            .collect();
        let all: Vec<usize> = (0..verts.len()).collect();
        let simplices = triangulate(&all, self.dim, &verts, &tight);
        let mut total = Q::zero();
        for s in simplices {
            let v0 = &verts[s[0]];
            let m: Vec<Vec<Q>> =
                s[1..].iter().map(|&i| verts[i].iter().zip(v0).map(|(a, b)| a - b).collect()).collect();
            total += linalg::det(&m).abs();
        }
        let fact: i64 = (1..=self.dim as i64).product();
        Ok(total / q(fact))
    }

    /// Number of facets (inequalities whose tight set has dimension `dim-1`).
    pub fn facet_count(&self) -> usize {
        let verts = self.vertices();
        let mut seen: Vec<Vec<usize>> = Vec::new();
        for (nrm, a) in self.normals.iter().zip(&self.offsets) {
            let face: Vec<usize> = (0..verts.len()).filter(|&i| pairing(&verts[i], nrm) == -a.clone()).collect();
            let pts: Vec<Vec<Q>> = face.iter().map(|&i| verts[i].clone()).collect();
            if !face.is_empty() && linalg::affine_dimension(&pts) + 1 == self.dim && !seen.contains(&face) {
                seen.push(face);
            }
        }
        seen.len()
    }
}

fn pairing(m: &[Q], nrm: &[i64]) -> Q {
    m.iter().zip(nrm).fold(Q::zero(), |acc, (x, &c)| acc + x * q(c))
}

/// One Fourier-Motzkin step on `c . x >= b`, removing variable `k`.
fn eliminate(sys: &[(Vec<Q>, Q)], k: usize) -> Vec<(Vec<Q>, Q)> {
    let (mut pos, mut neg, mut rest) = (Vec::new(), Vec::new(), Vec::new());
    for row in sys {
        if row.0[k].is_positive() {
            pos.push(row);
        } else if row.0[k].is_negative() {
            neg.push(row);
        } else {
            rest.push(row.clone());
        }
    }
    for p in &pos {
        for nr in &neg {
            let (a, b) = (p.0[k].clone(), -nr.0[k].clone());
            let c: Vec<Q> = p.0.iter().zip(&nr.0).map(|(x, y)| x * &b + y * &a).collect();
            let rhs = &p.1 * &b + &nr.1 * &a;
            rest.push(normalize(c, rhs));
        }
    }
    rest.sort();
    rest.dedup();
    rest
}

fn normalize(c: Vec<Q>, rhs: Q) -> (Vec<Q>, Q) {
    match c.iter().find(|x| !x.is_zero()).map(|x| x.abs()) {
        Some(s) => (c.iter().map(|x| x / &s).collect(), rhs / s),
        None => (c, rhs),
    }
}

/// Triangulate the face spanned by `face` (vertex indices, dimension `d`).
fn triangulate(face: &[usize], d: usize, verts: &[Vec<Q>], tight: &[Vec<bool>]) -> Vec<Vec<usize>> {
    if d == 0 {
        return vec![vec![face[0]]];
    }
    let apex = face[0];
    let ineqs = tight[0].len();
    let mut facets: Vec<Vec<usize>> = Vec::new();
    for i in 0..ineqs {
        let sub: Vec<usize> = face.iter().copied().filter(|&v| tight[v][i]).collect();
        if sub.is_empty() || sub.len() == face.len() || sub.contains(&apex) || facets.contains(&sub) {
            continue;
        }
        let pts: Vec<Vec<Q>> = sub.iter().map(|&v| verts[v].clone()).collect();
        if linalg::affine_dimension(&pts) + 1 == d {
            facets.push(sub);
        }
    }
    let mut out = Vec::new();
    for f in facets {
        for mut s in triangulate(&f, d - 1, verts, tight) {
            s.insert(0, apex);
            out.push(s);
        }
    }
    out
}

/// The polytope `{ <m, eta_i> >= -a_i }` of the divisor `sum a_i D_i`.
pub fn divisor_polytope(fan: &FanData, a: &[i64]) -> HPolytope {
    HPolytope::new(fan.dim(), fan.rays().clone(), a.iter().map(|&x| q(x)).collect())
}

/// Exponent vectors of all monomials of degree `alpha`, sorted.
pub fn monomial_basis(fan: &FanData, grading: &Grading, alpha: &DegreeClass) -> Result<Vec<Exponent>, PolytopeError> {
    let a = grading.representative_divisor(alpha)?;
    monomials_from_divisor(fan, &a)
}

/// Monomials `prod x_i^{<m, eta_i> + a_i}` for the lattice points `m` of `P_a`.
pub fn monomials_from_divisor(fan: &FanData, a: &[i64]) -> Result<Vec<Exponent>, PolytopeError> {
    let pts = divisor_polytope(fan, a).lattice_points()?;
    let mut out: Vec<Exponent> = pts
        .iter()
        .map(|m| {
            fan.rays()
                .iter()
                .zip(a)
                .map(|(eta, ai)| {
                    let v: i64 = eta.iter().zip(m).map(|(x, y)| x * y).sum::<i64>() + ai;
                    v as u32
                })
                .collect()
        })
        .collect();
    out.sort();
    Ok(out)
}

/// `(D^n) = n! vol(P_D)` for an ample class.
pub fn intersection_number(fan: &FanData, grading: &Grading, alpha: &DegreeClass) -> Result<i64, PolytopeError> {
    let a = grading.representative_divisor(alpha)?;
    if !divisor::is_ample(fan, &a) {
        return Err(PolytopeError::NotAmple(alpha.to_string()));
    }
    let vol = divisor_polytope(fan, &a).volume()?;
    let fact: i64 = (1..=fan.dim() as i64).product();
    let n = vol * q(fact);
    Ok(linalg::to_i64(&n).expect("lattice polytope volume times n! is an integer"))
}

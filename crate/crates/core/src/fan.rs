//! Lattice fans: rays, maximal cones and the combinatorial checks the residue
//! pipeline depends on.
//!
//! Ray order is whatever the caller supplied. Variable `i` of the Cox ring is
//! attached to ray `i`, so reordering rays reorders the ring.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::intmat::{self, IntMatrix};
use crate::linalg::{self, Q};
use num_traits::{Signed, Zero};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FanError {
    #[error("dimension must be positive")]
    ZeroDimension,
    #[error("ray {ray} has {got} coordinates, expected {dim}")]
    RayDimension { ray: usize, got: usize, dim: usize },
    #[error("ray {ray} is not primitive")]
    NonPrimitiveRay { ray: usize },
    #[error("rays {0} and {1} coincide")]
    DuplicateRay(usize, usize),
    #[error("maximal cone {cone} refers to ray {ray}, but there are only {count} rays")]
    RayIndexOutOfRange { cone: usize, ray: usize, count: usize },
    #[error("maximal cone {0} is empty")]
    EmptyCone(usize),
    #[error("expected {expected} variable names, got {got}")]
    VariableCount { expected: usize, got: usize },
    #[error("duplicate variable name `{0}`")]
    DuplicateVariable(String),
    #[error("cone {0} is not simplicial of full dimension")]
    NotFullSimplicial(usize),
    #[error("no maximal cone with index {0}")]
    NoSuchCone(usize),
    #[error("fan is not simplicial")]
    NotSimplicial,
    #[error("fan is not complete: {0}")]
    NotComplete(Completeness),
}

/// Verdict of the completeness test, with a witness when it fails.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Completeness {
    Complete,
    NotSimplicial,
    /// A facet of a maximal cone that is not shared with any other maximal cone.
    UnpairedFacet {
        cone: usize,
        facet: Vec<usize>,
    },
    /// A facet shared by more than two maximal cones.
    OverlappingFacet {
        facet: Vec<usize>,
        cones: Vec<usize>,
    },
    /// Two cones sharing a facet lie on the same side of it.
    Folded {
        facet: Vec<usize>,
        cones: (usize, usize),
    },
    /// A generic point of the first cone lies in the interior of this many cones.
    Multiplicity {
        count: usize,
    },
}

impl std::fmt::Display for Completeness {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let one_based = |v: &[usize]| v.iter().map(|i| i + 1).collect::<Vec<_>>();
        match self {
            Completeness::Complete => write!(f, "complete"),
            Completeness::NotSimplicial => write!(f, "not simplicial"),
            Completeness::UnpairedFacet { cone, facet } => {
                write!(f, "facet {:?} of cone {} borders an uncovered region", one_based(facet), cone + 1)
            }
            Completeness::OverlappingFacet { facet, cones } => {
                write!(f, "facet {:?} is shared by cones {:?}", one_based(facet), one_based(cones))
            }
            Completeness::Folded { facet, cones } => {
                write!(f, "cones {} and {} overlap across facet {:?}", cones.0 + 1, cones.1 + 1, one_based(facet))
            }
            Completeness::Multiplicity { count } => {
                write!(f, "a generic point is covered by {count} cones")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FanData {
    dim: usize,
    rays: IntMatrix,
    max_cones: Vec<Vec<usize>>,
    variables: Vec<String>,
}

impl FanData {
    /// Build a fan from rays and 0-based maximal cone index sets.
    pub fn new(
        dim: usize,
        rays: IntMatrix,
        max_cones: Vec<Vec<usize>>,
        variables: Option<Vec<String>>,
    ) -> Result<Self, FanError> {
        if dim == 0 {
            return Err(FanError::ZeroDimension);
        }
        for (i, ray) in rays.iter().enumerate() {
            if ray.len() != dim {
                return Err(FanError::RayDimension { ray: i, got: ray.len(), dim });
            }
            if intmat::gcd_slice(ray) != 1 {
                return Err(FanError::NonPrimitiveRay { ray: i });
            }
            if let Some(j) = rays[..i].iter().position(|r| r == ray) {
                return Err(FanError::DuplicateRay(j, i));
            }
        }
        let mut cones = Vec::with_capacity(max_cones.len());
        for (c, cone) in max_cones.into_iter().enumerate() {
            if cone.is_empty() {
                return Err(FanError::EmptyCone(c));
            }
            if let Some(&bad) = cone.iter().find(|&&r| r >= rays.len()) {
                return Err(FanError::RayIndexOutOfRange { cone: c, ray: bad, count: rays.len() });
            }
            let mut cone = cone;
            cone.sort_unstable();
            cone.dedup();
            cones.push(cone);
        }
        let variables = match variables {
            Some(v) => {
                if v.len() != rays.len() {
                    return Err(FanError::VariableCount { expected: rays.len(), got: v.len() });
                }
                for (i, name) in v.iter().enumerate() {
                    if v[..i].contains(name) {
                        return Err(FanError::DuplicateVariable(name.clone()));
                    }
                }
                v
            }
            None => (1..=rays.len()).map(|i| format!("x{i}")).collect(),
        };
        Ok(FanData { dim, rays, max_cones: cones, variables })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn num_rays(&self) -> usize {
        self.rays.len()
    }

    /// `r = #rays - n`, the rank of the class group when the rays span.
    pub fn r(&self) -> usize {
        self.rays.len().saturating_sub(self.dim)
    }

    pub fn rays(&self) -> &IntMatrix {
        &self.rays
    }

    pub fn ray(&self, i: usize) -> &[i64] {
        &self.rays[i]
    }

    pub fn max_cones(&self) -> &[Vec<usize>] {
        &self.max_cones
    }

    pub fn cone(&self, sigma: usize) -> Result<&[usize], FanError> {
        self.max_cones.get(sigma).map(Vec::as_slice).ok_or(FanError::NoSuchCone(sigma))
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.variables.iter().position(|v| v == name)
    }

    /// Ray indices not in the cone, in increasing order.
    pub fn complement(&self, sigma: usize) -> Result<Vec<usize>, FanError> {
        let cone = self.cone(sigma)?;
        Ok((0..self.num_rays()).filter(|i| !cone.contains(i)).collect())
    }

    /// Rows are the rays of the cone in increasing index order.
    pub fn cone_matrix(&self, sigma: usize) -> Result<IntMatrix, FanError> {
        Ok(self.cone(sigma)?.iter().map(|&i| self.rays[i].clone()).collect())
    }

    fn cone_is_full_simplicial(&self, cone: &[usize]) -> bool {
        cone.len() == self.dim && {
            let m: IntMatrix = cone.iter().map(|&i| self.rays[i].clone()).collect();
            intmat::det(&m) != 0
        }
    }

    pub fn is_simplicial(&self) -> bool {
        self.max_cones.iter().all(|c| self.cone_is_full_simplicial(c))
    }

    /// `|N / N'|` where `N'` is spanned by the rays of the cone.
    pub fn group_order(&self, sigma: usize) -> Result<u64, FanError> {
        let cone = self.cone(sigma)?;
        if cone.len() != self.dim {
            return Err(FanError::NotFullSimplicial(sigma));
        }
        let d = intmat::det(&self.cone_matrix(sigma)?);
        if d == 0 {
            return Err(FanError::NotFullSimplicial(sigma));
        }
        Ok(d.unsigned_abs())
    }

    /// `det(<m_i, eta_l>)` for the rays `l` of `subset` in increasing order.
    pub fn det_eta(&self, basis: &[Vec<i64>], subset: &[usize]) -> i64 {
        assert_eq!(basis.len(), self.dim, "basis must have n vectors");
        assert_eq!(subset.len(), self.dim, "subset must have n elements");
        let mut idx = subset.to_vec();
        idx.sort_unstable();
        let m: IntMatrix =
            basis.iter().map(|mi| idx.iter().map(|&l| intmat::dot(mi, &self.rays[l])).collect()).collect();
        intmat::det(&m)
    }

    /// Standard basis of `M`, with the first vector negated if needed so that
    /// `det(<m_i, eta_j>) > 0` on the given cone.
    pub fn oriented_basis(&self, sigma: usize) -> Result<IntMatrix, FanError> {
        let cone = self.cone(sigma)?.to_vec();
        if cone.len() != self.dim {
            return Err(FanError::NotFullSimplicial(sigma));
        }
        let mut basis = intmat::identity(self.dim);
        match self.det_eta(&basis, &cone) {
            0 => Err(FanError::NotFullSimplicial(sigma)),
            d if d < 0 => {
                basis[0][0] = -1;
                Ok(basis)
            }
            _ => Ok(basis),
        }
    }

    /// Euler form terms `det(eta_I)` for every `n`-subset `I` with nonzero
    /// coefficient, subsets listed in increasing lexicographic order.
    pub fn euler_form(&self, basis: &[Vec<i64>]) -> Vec<(Vec<usize>, i64)> {
        let mut out = Vec::new();
        for subset in subsets(self.num_rays(), self.dim) {
            let d = self.det_eta(basis, &subset);
            if d != 0 {
                out.push((subset, d));
            }
        }
        out
    }

    pub fn is_complete(&self) -> bool {
        self.completeness() == Completeness::Complete
    }

    /// Facet-pairing completeness test for simplicial fans.
    pub fn completeness(&self) -> Completeness {
        if !self.is_simplicial() {
            return Completeness::NotSimplicial;
        }
        let mut facets: BTreeMap<Vec<usize>, Vec<(usize, usize)>> = BTreeMap::new();
        for (c, cone) in self.max_cones.iter().enumerate() {
            for k in 0..cone.len() {
                let mut facet = cone.clone();
                let opposite = facet.remove(k);
                facets.entry(facet).or_default().push((c, opposite));
            }
        }
        for (facet, owners) in &facets {
            match owners.len() {
                1 => return Completeness::UnpairedFacet { cone: owners[0].0, facet: facet.clone() },
                2 => {
                    let normal = self.facet_normal(facet);
                    let s1 = intmat::dot(&normal, &self.rays[owners[0].1]).signum();
                    let s2 = intmat::dot(&normal, &self.rays[owners[1].1]).signum();
                    if s1 * s2 >= 0 {
                        return Completeness::Folded { facet: facet.clone(), cones: (owners[0].0, owners[1].0) };
                    }
                }
                _ => {
                    return Completeness::OverlappingFacet {
                        facet: facet.clone(),
                        cones: owners.iter().map(|o| o.0).collect(),
                    }
                }
            }
        }
        match self.covering_multiplicity() {
            1 => Completeness::Complete,
            count => Completeness::Multiplicity { count },
        }
    }

    /// Integer normal to the hyperplane spanned by `n - 1` rays (cofactor vector).
    fn facet_normal(&self, facet: &[usize]) -> Vec<i64> {
        let rows: IntMatrix = facet.iter().map(|&i| self.rays[i].clone()).collect();
        (0..self.dim)
            .map(|k| {
                let minor: IntMatrix = rows
                    .iter()
                    .map(|r| r.iter().enumerate().filter(|&(j, _)| j != k).map(|(_, &x)| x).collect())
                    .collect();
                let d = intmat::det(&minor);
                if k % 2 == 0 {
                    d
                } else {
                    -d
                }
            })
            .collect()
    }

    /// Number of maximal cones whose interior contains a generic point of the
    /// first cone.
    fn covering_multiplicity(&self) -> usize {
        let Some(first) = self.max_cones.first() else { return 0 };
        'weights: for attempt in 0..8i64 {
            let point: Vec<Q> = (0..self.dim)
                .map(|j| {
                    first
                        .iter()
                        .enumerate()
                        .map(|(k, &i)| {
                            let w = linalg::q_frac(7 + 3 * k as i64 + attempt * (k as i64 + 2), 5 + attempt);
                            w * linalg::q(self.rays[i][j])
                        })
                        .fold(Q::zero(), |a, b| a + b)
                })
                .collect();
            let mut count = 0;
            for cone in &self.max_cones {
                // point = sum_k c_k eta_{cone[k]}; solve for c.
                let a: Vec<Vec<Q>> =
                    (0..self.dim).map(|j| cone.iter().map(|&i| linalg::q(self.rays[i][j])).collect()).collect();
                let Some(c) = linalg::solve_square(&a, &point) else { continue };
                if c.iter().all(|x| x.is_positive()) {
                    count += 1;
                } else if c.iter().all(|x| !x.is_negative()) {
                    continue 'weights;
                }
            }
            return count;
        }
        0
    }
}

/// All `k`-element subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

//! The class group grading of the Cox ring.
//!
//! `A_{n-1}(X)` is the cokernel of `m -> (<m, eta_1>, ..., <m, eta_{n+r}>)`.
//! It is computed from the Smith form of the ray matrix, or taken from a
//! user-supplied table after validation.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fan::FanData;
use crate::intmat::{self, IntMatrix};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GradingError {
    #[error("the rays do not span N_R (rank {rank} < {dim})")]
    RaysDoNotSpan { rank: usize, dim: usize },
    #[error("row {row} is not a grading row: {reason}")]
    NotAGrading { row: usize, reason: String },
    #[error("the degree map is not surjective")]
    NotSurjective,
    #[error("degree table needs {expected} columns, row {row} has {got}")]
    WrongColumns { row: usize, expected: usize, got: usize },
    #[error("degree class has shape ({got_free}, {got_torsion}), grading expects ({free}, {torsion})")]
    ShapeMismatch { free: usize, torsion: usize, got_free: usize, got_torsion: usize },
    #[error("cannot parse degree class `{0}`")]
    Parse(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Provenance {
    ComputedFromSnf,
    UserSupplied,
}

/// An element of `Z^r + (+) Z/d_k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DegreeClass {
    pub free: Vec<i64>,
    pub torsion: Vec<i64>,
    moduli: Vec<i64>,
}

impl DegreeClass {
    /// A class in a torsion-free group.
    pub fn free(free: Vec<i64>) -> Self {
        DegreeClass { free, torsion: Vec::new(), moduli: Vec::new() }
    }

    fn with_torsion(free: Vec<i64>, torsion: Vec<i64>, moduli: Vec<i64>) -> Self {
        let torsion = torsion.iter().zip(&moduli).map(|(t, d)| t.rem_euclid(*d)).collect();
        DegreeClass { free, torsion, moduli }
    }

    pub fn moduli(&self) -> &[i64] {
        &self.moduli
    }

    pub fn is_zero(&self) -> bool {
        self.free.iter().all(|&x| x == 0) && self.torsion.iter().all(|&x| x == 0)
    }

    fn zip_with(&self, other: &Self, f: impl Fn(i64, i64) -> i64) -> Self {
        assert_eq!(self.free.len(), other.free.len(), "degree classes from different gradings");
        assert_eq!(self.moduli, other.moduli, "degree classes from different gradings");
        DegreeClass::with_torsion(
            self.free.iter().zip(&other.free).map(|(&a, &b)| f(a, b)).collect(),
            self.torsion.iter().zip(&other.torsion).map(|(&a, &b)| f(a, b)).collect(),
            self.moduli.clone(),
        )
    }

    /// Parse `3`, `(1,3,1)` or `(1,3,1; 1)` (torsion after the semicolon).
    pub fn parse(s: &str) -> Result<Self, GradingError> {
        let err = || GradingError::Parse(s.to_string());
        let inner = s.trim().trim_start_matches('(').trim_end_matches(')');
        let (free, tors) = match inner.split_once(';') {
            Some((f, t)) => (f, Some(t)),
            None => (inner, None),
        };
        let nums = |part: &str| -> Result<Vec<i64>, GradingError> {
            part.split(',')
                .map(str::trim)
                .filter(|p| !p.is_empty())
                .map(|p| p.parse::<i64>().map_err(|_| err()))
                .collect()
        };
        let free = nums(free)?;
        let torsion = tors.map(nums).transpose()?.unwrap_or_default();
        Ok(DegreeClass { free, torsion, moduli: Vec::new() })
    }
}

impl fmt::Display for DegreeClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[i64]| v.iter().map(i64::to_string).collect::<Vec<_>>().join(",");
        if self.torsion.is_empty() {
            if self.free.len() == 1 {
                write!(f, "{}", self.free[0])
            } else {
                write!(f, "({})", join(&self.free))
            }
        } else {
            let tors: Vec<String> =
                self.torsion.iter().zip(&self.moduli).map(|(t, d)| format!("{t} mod {d}")).collect();
            write!(f, "({}; {})", join(&self.free), tors.join(", "))
        }
    }
}

impl Add for &DegreeClass {
    type Output = DegreeClass;
    fn add(self, rhs: &DegreeClass) -> DegreeClass {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &DegreeClass {
    type Output = DegreeClass;
    fn sub(self, rhs: &DegreeClass) -> DegreeClass {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Neg for &DegreeClass {
    type Output = DegreeClass;
    fn neg(self) -> DegreeClass {
        DegreeClass::with_torsion(
            self.free.iter().map(|x| -x).collect(),
            self.torsion.iter().map(|x| -x).collect(),
            self.moduli.clone(),
        )
    }
}

impl Mul<&DegreeClass> for i64 {
    type Output = DegreeClass;
    fn mul(self, rhs: &DegreeClass) -> DegreeClass {
        DegreeClass::with_torsion(
            rhs.free.iter().map(|x| self * x).collect(),
            rhs.torsion.iter().map(|x| self * x).collect(),
            rhs.moduli.clone(),
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Grading {
    free_rows: IntMatrix,
    torsion_rows: IntMatrix,
    moduli: Vec<i64>,
    provenance: Provenance,
    /// Hermite basis of the principal divisors, coordinates reversed.
    principal_hnf: IntMatrix,
}

impl Grading {
    /// Grading read off the Smith form of the ray matrix.
    pub fn compute(fan: &FanData) -> Result<Self, GradingError> {
        Self::from_rays(fan.dim(), fan.rays())
    }

    /// Same as [`Grading::compute`] but needs only the rays.
    pub fn from_rays(dim: usize, rays: &[Vec<i64>]) -> Result<Self, GradingError> {
        let snf = intmat::smith_normal_form(rays);
        let rank = snf.rank();
        if rank < dim {
            return Err(GradingError::RaysDoNotSpan { rank, dim });
        }
        let mut free_rows = Vec::new();
        let mut torsion_rows = Vec::new();
        let mut moduli = Vec::new();
        for (i, row) in snf.u.iter().enumerate() {
            if i < dim {
                let d = snf.s[i][i];
                if d > 1 {
                    torsion_rows.push(row.iter().map(|x| x.rem_euclid(d)).collect());
                    moduli.push(d);
                }
            } else {
                free_rows.push(row.clone());
            }
        }
        Ok(Grading {
            free_rows,
            torsion_rows,
            moduli,
            provenance: Provenance::ComputedFromSnf,
            principal_hnf: principal_hnf(dim, rays),
        })
    }

    /// Accept a user degree table (one row per free coordinate) if it is a
    /// valid presentation of the free part of the class group. Torsion, if
    /// any, is carried over from the Smith form.
    pub fn validate_user(fan: &FanData, rows: &[Vec<i64>]) -> Result<Self, GradingError> {
        let computed = Self::compute(fan)?;
        let nvars = fan.num_rays();
        for (i, row) in rows.iter().enumerate() {
            if row.len() != nvars {
                return Err(GradingError::WrongColumns { row: i, expected: nvars, got: row.len() });
            }
            for j in 0..fan.dim() {
                let pairing: i64 = (0..nvars).map(|v| row[v] * fan.ray(v)[j]).sum();
                if pairing != 0 {
                    return Err(GradingError::NotAGrading {
                        row: i,
                        reason: format!("does not annihilate the image of e_{}", j + 1),
                    });
                }
            }
        }
        if rows.len() != computed.free_rank() {
            return Err(GradingError::NotAGrading {
                row: rows.len().min(computed.free_rank()),
                reason: format!("{} rows given, the free part has rank {}", rows.len(), computed.free_rank()),
            });
        }
        // Joint surjectivity onto Z^k (+) Z/d: the block matrix
        // [[D_free, 0], [D_tors, diag(d)]] must have all invariant factors 1.
        let block = block_matrix(rows, &computed.torsion_rows, &computed.moduli);
        let snf = intmat::smith_normal_form(&block);
        let k = block.len();
        if snf.rank() != k || snf.diagonal().iter().take(k).any(|&d| d != 1) {
            return Err(GradingError::NotSurjective);
        }
        Ok(Grading {
            free_rows: rows.to_vec(),
            torsion_rows: computed.torsion_rows,
            moduli: computed.moduli,
            provenance: Provenance::UserSupplied,
            principal_hnf: computed.principal_hnf,
        })
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn free_rank(&self) -> usize {
        self.free_rows.len()
    }

    pub fn torsion(&self) -> &[i64] {
        &self.moduli
    }

    pub fn num_vars(&self) -> usize {
        self.free_rows
            .first()
            .or(self.torsion_rows.first())
            .map_or(self.principal_hnf.first().map_or(0, Vec::len), Vec::len)
    }

    /// Free rows followed by torsion rows (the latter reduced mod `d_k`).
    pub fn deg_matrix(&self) -> IntMatrix {
        self.free_rows.iter().chain(&self.torsion_rows).cloned().collect()
    }

    pub fn zero(&self) -> DegreeClass {
        DegreeClass::with_torsion(vec![0; self.free_rank()], vec![0; self.moduli.len()], self.moduli.clone())
    }

    /// Build a class of this grading from coordinates.
    pub fn class(&self, free: Vec<i64>, torsion: Vec<i64>) -> Result<DegreeClass, GradingError> {
        if free.len() != self.free_rank() || torsion.len() != self.moduli.len() {
            return Err(GradingError::ShapeMismatch {
                free: self.free_rank(),
                torsion: self.moduli.len(),
                got_free: free.len(),
                got_torsion: torsion.len(),
            });
        }
        Ok(DegreeClass::with_torsion(free, torsion, self.moduli.clone()))
    }

    /// Re-attach this grading's torsion moduli to a parsed class.
    pub fn adopt(&self, c: &DegreeClass) -> Result<DegreeClass, GradingError> {
        let torsion = if c.torsion.is_empty() { vec![0; self.moduli.len()] } else { c.torsion.clone() };
        self.class(c.free.clone(), torsion)
    }

    /// Degree of the divisor `sum a_i D_i` (entries may be negative).
    pub fn degree_of_divisor(&self, a: &[i64]) -> DegreeClass {
        DegreeClass::with_torsion(
            intmat::mat_vec(&self.free_rows, a),
            intmat::mat_vec(&self.torsion_rows, a),
            self.moduli.clone(),
        )
    }

    /// Degree of the monomial with the given exponent vector.
    pub fn degree_of_exponents(&self, e: &[u32]) -> DegreeClass {
        let a: Vec<i64> = e.iter().map(|&x| x as i64).collect();
        self.degree_of_divisor(&a)
    }

    pub fn var_degree(&self, i: usize) -> DegreeClass {
        let mut e = vec![0i64; self.num_vars()];
        e[i] = 1;
        self.degree_of_divisor(&e)
    }

    /// The anticanonical class: sum of all variable degrees.
    pub fn beta(&self) -> DegreeClass {
        self.degree_of_divisor(&vec![1; self.num_vars()])
    }

    /// `rho = sum alpha_i - beta`.
    pub fn critical_degree(&self, degrees: &[DegreeClass]) -> DegreeClass {
        let total = degrees.iter().fold(self.zero(), |acc, d| &acc + d);
        &total - &self.beta()
    }

    /// A divisor vector `a` with `deg(sum a_i D_i) = alpha`, canonical modulo
    /// principal divisors: reduced against the Hermite basis of the principal
    /// lattice with pivots taken from the last coordinates.
    pub fn representative_divisor(&self, alpha: &DegreeClass) -> Result<Vec<i64>, GradingError> {
        let alpha = self.adopt(alpha)?;
        let block = block_matrix(&self.free_rows, &self.torsion_rows, &self.moduli);
        let rhs: Vec<i64> = alpha.free.iter().chain(&alpha.torsion).copied().collect();
        let nvars = self.num_vars();
        let sol = intmat::solve_integer(&block, &rhs).ok_or(GradingError::NotSurjective)?;
        let mut a: Vec<i64> = sol[..nvars].to_vec();
        a.reverse();
        let mut a = intmat::reduce_mod_hermite(&a, &self.principal_hnf);
        a.reverse();
        debug_assert_eq!(self.degree_of_divisor(&a), alpha);
        Ok(a)
    }
}

fn principal_hnf(dim: usize, rays: &[Vec<i64>]) -> IntMatrix {
    let gens: IntMatrix = (0..dim).map(|j| rays.iter().rev().map(|ray| ray[j]).collect()).collect();
    intmat::hermite_rows(&gens)
}

fn block_matrix(free: &[Vec<i64>], torsion: &[Vec<i64>], moduli: &[i64]) -> IntMatrix {
    let t = moduli.len();
    let mut out = Vec::with_capacity(free.len() + t);
    for row in free {
        let mut r = row.clone();
        r.extend(std::iter::repeat_n(0, t));
        out.push(r);
    }
    for (k, row) in torsion.iter().enumerate() {
        let mut r = row.clone();
        r.extend((0..t).map(|j| if j == k { moduli[k] } else { 0 }));
        out.push(r);
    }
    out
}

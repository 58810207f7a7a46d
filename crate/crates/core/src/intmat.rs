//! Integer matrix utilities: Smith and Hermite normal forms, exact determinants.
//!
//! Matrices are plain row-major `Vec<Vec<i64>>`. Intermediate arithmetic runs in
//! `i128`; results that do not fit back into `i64` are treated as a bug in the
//! caller (desk-scale inputs never come close).

use std::cmp::min;

pub type IntMatrix = Vec<Vec<i64>>;

/// `U * A * V = S` with `U`, `V` unimodular and `S` diagonal, every diagonal
/// entry dividing the next one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithDecomposition {
    pub u: IntMatrix,
    pub s: IntMatrix,
    pub v: IntMatrix,
}

impl SmithDecomposition {
    /// Diagonal entries of `S`, including trailing zeros.
    pub fn diagonal(&self) -> Vec<i64> {
        let k = min(self.s.len(), self.s.first().map_or(0, Vec::len));
        (0..k).map(|i| self.s[i][i]).collect()
    }

    /// Number of nonzero invariant factors.
    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|&&d| d != 0).count()
    }
}

pub fn identity(n: usize) -> IntMatrix {
    (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect()
}

pub fn transpose(a: &[Vec<i64>]) -> IntMatrix {
    let cols = a.first().map_or(0, Vec::len);
    (0..cols).map(|j| a.iter().map(|row| row[j]).collect()).collect()
}

pub fn matmul(a: &[Vec<i64>], b: &[Vec<i64>]) -> IntMatrix {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            assert_eq!(row.len(), inner, "dimension mismatch in matmul");
            (0..cols)
                .map(|j| {
                    let acc: i128 = (0..inner).map(|k| row[k] as i128 * b[k][j] as i128).sum();
                    narrow(acc)
                })
                .collect()
        })
        .collect()
}

pub fn mat_vec(a: &[Vec<i64>], x: &[i64]) -> Vec<i64> {
    a.iter().map(|row| dot(row, x)).collect()
}

pub fn dot(a: &[i64], b: &[i64]) -> i64 {
    assert_eq!(a.len(), b.len(), "dimension mismatch in dot");
    narrow(a.iter().zip(b).map(|(&x, &y)| x as i128 * y as i128).sum())
}

fn narrow(x: i128) -> i64 {
    i64::try_from(x).expect("integer overflow in lattice arithmetic")
}

fn widen(a: &[Vec<i64>]) -> Vec<Vec<i128>> {
    a.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect()
}

fn shrink(a: Vec<Vec<i128>>) -> IntMatrix {
    a.into_iter().map(|r| r.into_iter().map(narrow).collect()).collect()
}

pub fn smith_normal_form(a: &[Vec<i64>]) -> SmithDecomposition {
    let m = a.len();
    let n = a.first().map_or(0, Vec::len);
    let mut s = widen(a);
    let mut u = widen(&identity(m));
    let mut v = widen(&identity(n));

    for t in 0..min(m, n) {
        loop {
            let Some((pi, pj)) = smallest_nonzero(&s, t) else {
                return finish(u, s, v);
            };
            s.swap(t, pi);
            u.swap(t, pi);
            swap_cols(&mut s, t, pj);
            swap_cols(&mut v, t, pj);

            let p = s[t][t];
            let mut clean = true;
            for i in t + 1..m {
                let q = s[i][t] / p;
                if q != 0 {
                    add_row_multiple(&mut s, i, t, -q);
                    add_row_multiple(&mut u, i, t, -q);
                }
                clean &= s[i][t] == 0;
            }
            for j in t + 1..n {
                let q = s[t][j] / p;
                if q != 0 {
                    add_col_multiple(&mut s, j, t, -q);
                    add_col_multiple(&mut v, j, t, -q);
                }
                clean &= s[t][j] == 0;
            }
            if !clean {
                continue;
            }
            let offender = (t + 1..m).find(|&i| (t + 1..n).any(|j| s[i][j] % p != 0));
            match offender {
                Some(i) => {
                    add_row_multiple(&mut s, t, i, 1);
                    add_row_multiple(&mut u, t, i, 1);
                }
                None => break,
            }
        }
        if s[t][t] < 0 {
            for x in s[t].iter_mut() {
                *x = -*x;
            }
            for x in u[t].iter_mut() {
                *x = -*x;
            }
        }
    }
    finish(u, s, v)
}

fn finish(u: Vec<Vec<i128>>, s: Vec<Vec<i128>>, v: Vec<Vec<i128>>) -> SmithDecomposition {
    SmithDecomposition { u: shrink(u), s: shrink(s), v: shrink(v) }
}

fn smallest_nonzero(s: &[Vec<i128>], t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(i128, usize, usize)> = None;
    for (i, row) in s.iter().enumerate().skip(t) {
        for (j, &x) in row.iter().enumerate().skip(t) {
            if x != 0 && best.is_none_or(|(b, _, _)| x.abs() < b) {
                best = Some((x.abs(), i, j));
            }
        }
    }
    best.map(|(_, i, j)| (i, j))
}

fn swap_cols(a: &mut [Vec<i128>], i: usize, j: usize) {
    if i != j {
        for row in a.iter_mut() {
            row.swap(i, j);
        }
    }
}

/// row[dst] += k * row[src]
fn add_row_multiple(a: &mut [Vec<i128>], dst: usize, src: usize, k: i128) {
    let src_row = a[src].clone();
    for (x, y) in a[dst].iter_mut().zip(src_row) {
        *x += k * y;
    }
}

/// col[dst] += k * col[src]
fn add_col_multiple(a: &mut [Vec<i128>], dst: usize, src: usize, k: i128) {
    for row in a.iter_mut() {
        row[dst] += k * row[src];
    }
}

/// Exact determinant by fraction-free (Bareiss) elimination.
pub fn det(a: &[Vec<i64>]) -> i64 {
    let n = a.len();
    assert!(a.iter().all(|r| r.len() == n), "determinant of a non-square matrix");
    if n == 0 {
        return 1;
    }
    let mut m = widen(a);
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if m[k][k] == 0 {
            match (k + 1..n).find(|&i| m[i][k] != 0) {
                Some(i) => {
                    m.swap(k, i);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            }
        }
        prev = m[k][k];
    }
    narrow(sign * m[n - 1][n - 1])
}

/// Row-style Hermite normal form of the lattice spanned by `rows`.
///
/// The returned rows are a basis in echelon form: each pivot is positive and
/// the entries above a pivot lie in `[0, pivot)`. Zero rows are dropped.
pub fn hermite_rows(rows: &[Vec<i64>]) -> IntMatrix {
    let cols = rows.first().map_or(0, Vec::len);
    let mut a = widen(rows);
    let mut r = 0;
    for c in 0..cols {
        if r == a.len() {
            break;
        }
        loop {
            let pivot = (r..a.len()).filter(|&i| a[i][c] != 0).min_by_key(|&i| a[i][c].abs());
            let Some(p) = pivot else { break };
            a.swap(r, p);
            let mut done = true;
            for i in r + 1..a.len() {
                let q = a[i][c] / a[r][c];
                if q != 0 {
                    add_row_multiple(&mut a, i, r, -q);
                }
                done &= a[i][c] == 0;
            }
            if done {
                break;
            }
        }
        if a[r][c] == 0 {
            continue;
        }
        if a[r][c] < 0 {
            for x in a[r].iter_mut() {
                *x = -*x;
            }
        }
        for i in 0..r {
            let q = a[i][c].div_euclid(a[r][c]);
            if q != 0 {
                add_row_multiple(&mut a, i, r, -q);
            }
        }
        r += 1;
    }
    a.truncate(r);
    shrink(a)
}

/// Reduce `x` modulo the lattice with Hermite basis `hnf` (as returned by
/// [`hermite_rows`]), giving the canonical coset representative.
pub fn reduce_mod_hermite(x: &[i64], hnf: &[Vec<i64>]) -> Vec<i64> {
    let mut out: Vec<i128> = x.iter().map(|&v| v as i128).collect();
    for row in hnf {
        let Some(c) = row.iter().position(|&v| v != 0) else { continue };
        let q = out[c].div_euclid(row[c] as i128);
        for (o, &rv) in out.iter_mut().zip(row) {
            *o -= q * rv as i128;
        }
    }
    out.into_iter().map(narrow).collect()
}

/// Integer solution of `A x = b`, if one exists, via the Smith form of `A`.
pub fn solve_integer(a: &[Vec<i64>], b: &[i64]) -> Option<Vec<i64>> {
    let m = a.len();
    let n = a.first().map_or(0, Vec::len);
    assert_eq!(b.len(), m);
    let snf = smith_normal_form(a);
    // U A V = S  =>  A x = b  <=>  S y = U b  with x = V y.
    let ub = mat_vec(&snf.u, b);
    let mut y = vec![0i64; n];
    for i in 0..m {
        let d = if i < n { snf.s[i][i] } else { 0 };
        if d == 0 {
            if ub[i] != 0 {
                return None;
            }
        } else {
            if ub[i] % d != 0 {
                return None;
            }
            y[i] = ub[i] / d;
        }
    }
    Some(mat_vec(&snf.v, &y))
}

pub fn gcd_slice(v: &[i64]) -> i64 {
    v.iter().fold(0i64, |g, &x| num_integer::gcd(g, x))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(a: &[Vec<i64>]) -> SmithDecomposition {
        let d = smith_normal_form(a);
        assert_eq!(matmul(&matmul(&d.u, a), &d.v), d.s);
        assert_eq!(det(&d.u).abs(), 1);
        assert_eq!(det(&d.v).abs(), 1);
        d
    }

    #[test]
    fn snf_examples() {
        assert_eq!(check(&[vec![2, 0], vec![0, 3]]).s, vec![vec![1, 0], vec![0, 6]]);
        assert_eq!(check(&identity(3)).s, identity(3));
        assert_eq!(check(&[vec![2, 4], vec![6, 8]]).s, vec![vec![2, 0], vec![0, 4]]);
    }

    #[test]
    fn snf_rectangular() {
        let d = check(&[vec![1, 0], vec![0, 1], vec![-1, -1]]);
        assert_eq!(d.diagonal(), vec![1, 1]);
        let d = check(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
        assert_eq!(d.diagonal(), vec![2, 6, 12]);
    }

    #[test]
    fn bareiss_det() {
        assert_eq!(det(&[vec![2, 4], vec![6, 8]]), -8);
        assert_eq!(det(&[vec![0, 1, 2], vec![3, 4, 5], vec![6, 7, 9]]), -3);
        assert_eq!(det(&[vec![1, 2], vec![2, 4]]), 0);
    }

    #[test]
    fn hermite_and_reduction() {
        let h = hermite_rows(&[vec![1, 0, -1], vec![0, 1, -1]]);
        assert_eq!(h, vec![vec![1, 0, -1], vec![0, 1, -1]]);
        assert_eq!(reduce_mod_hermite(&[0, 0, 3], &h), vec![0, 0, 3]);
        let h = hermite_rows(&[vec![2, 4], vec![6, 8]]);
        assert_eq!(h, vec![vec![2, 0], vec![0, 4]]);
    }

    #[test]
    fn integer_solve() {
        let a = vec![vec![1, -1], vec![1, 1]];
        assert_eq!(solve_integer(&a, &[0, 2]), Some(vec![1, 1]));
        assert_eq!(solve_integer(&a, &[0, 1]), None);
    }
}

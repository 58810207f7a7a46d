//! Numeric cross-check: the toric residue as a sum of local Grothendieck
//! residues over the zeros of `{F_i = 0, i != k}`, plus the Euler-Jacobi
//! vanishing test on the torus.

use num_complex::Complex64;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::fan::FanData;
use crate::groebner::{buchberger, no_common_zeros_on_x, MonomialOrder};
use crate::intmat::IntMatrix;
use crate::linalg::{q, Q};
use crate::poly::{dehomogenize, Exponent, MultiPoly};
use crate::residue::{PolySystem, ResidueError};

/// Residual bound after Newton refinement.
pub const RESIDUAL_TOL: f64 = 1e-9;
/// Minimal distance between distinct zeros.
pub const SEPARATION_TOL: f64 = 1e-6;
/// Jacobians and polar values below this are treated as zero.
pub const SINGULAR_TOL: f64 = 1e-9;
/// Number of random coordinate changes tried before giving up.
pub const SHAPE_RETRIES: usize = 3;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LocalError {
    #[error("the chart system is not zero-dimensional")]
    NotZeroDimensional,
    #[error("no shape position after {0} random coordinate changes")]
    NotShapePosition(usize),
    #[error("non-simple zero (|det J| = {0:e})")]
    NonSimpleZero(f64),
    #[error("F_k vanishes at a zero of the other F_i (|f_k| = {0:e})")]
    ZeroOnPolarLocus(f64),
    #[error("zero did not refine below the residual bound (residual {0:e})")]
    NotConverged(f64),
    #[error("two zeros closer than the separation bound ({0:e})")]
    Clustered(f64),
    #[error("D_k-hat is infinite: the chart system of cone {cone} is positive-dimensional")]
    InfiniteIntersection { cone: usize },
    #[error("D_k-hat meets the boundary divisor of variable {var}")]
    NotInTorus { var: String },
    #[error("index k = {k} out of range")]
    BadIndex { k: usize },
    #[error("expected {expected} polynomials in {expected} variables")]
    Shape { expected: usize },
    #[error(transparent)]
    Residue(#[from] ResidueError),
}

/// Zeros of a chart system with their Jacobian determinants.
#[derive(Clone, Debug, PartialEq)]
pub struct NumericZeroSet {
    /// 0-based maximal cone whose chart was used.
    pub sigma: usize,
    pub zeros: Vec<Vec<Complex64>>,
    pub jacobians: Vec<Complex64>,
    /// Number of random coordinate changes that were needed.
    pub coordinate_changes: usize,
}

/// All complex roots of `sum c_i z^i` (simultaneous Aberth-Ehrlich iteration).
pub fn univariate_roots(coeffs: &[Complex64]) -> Vec<Complex64> {
    let mut c: Vec<Complex64> = coeffs.to_vec();
    while c.last().is_some_and(|x| x.norm() == 0.0) {
        c.pop();
    }
    let d = c.len().saturating_sub(1);
    if d == 0 {
        return Vec::new();
    }
    let lead = c[d];
    for x in &mut c {
        *x /= lead;
    }
    let eval = |z: Complex64| -> (Complex64, Complex64) {
        let mut p = Complex64::zero();
        let mut dp = Complex64::zero();
        for a in c.iter().rev() {
            dp = dp * z + p;
            p = p * z + a;
        }
        (p, dp)
    };
    // Fujiwara-type bound for the initial circle.
    let radius = (0..d).map(|i| c[i].norm().powf(1.0 / (d - i) as f64)).fold(0.0, f64::max) * 2.0 + 1e-3;
    let mut z: Vec<Complex64> =
        (0..d).map(|k| Complex64::from_polar(radius, std::f64::consts::TAU * k as f64 / d as f64 + 0.4)).collect();
    for _ in 0..1000 {
        let mut worst: f64 = 0.0;
        for k in 0..d {
            let (p, dp) = eval(z[k]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let sum: Complex64 = (0..d).filter(|&j| j != k).map(|j| Complex64::one() / (z[k] - z[j])).sum();
            let w = ratio / (Complex64::one() - ratio * sum);
            if w.is_finite() {
                z[k] -= w;
                worst = worst.max(w.norm() / (1.0 + z[k].norm()));
            }
        }
        if worst < 1e-15 {
            break;
        }
    }
    for r in &mut z {
        for _ in 0..3 {
            let (p, dp) = eval(*r);
            if dp.norm() > 0.0 {
                let step = p / dp;
                if step.is_finite() {
                    *r -= step;
                }
            }
        }
    }
    z
}

/// Determinant of a small complex matrix (partial pivoting).
pub fn complex_det(m: &[Vec<Complex64>]) -> Complex64 {
    let n = m.len();
    let mut a = m.to_vec();
    let mut det = Complex64::one();
    for c in 0..n {
        let p = (c..n).max_by(|&i, &j| a[i][c].norm().total_cmp(&a[j][c].norm())).unwrap();
        if a[p][c].norm() == 0.0 {
            return Complex64::zero();
        }
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det *= a[c][c];
        for i in c + 1..n {
            let f = a[i][c] / a[c][c];
            for j in c..n {
                let v = a[c][j];
                a[i][j] -= f * v;
            }
        }
    }
    det
}

fn complex_solve(m: &[Vec<Complex64>], b: &[Complex64]) -> Option<Vec<Complex64>> {
    let n = m.len();
    let mut a: Vec<Vec<Complex64>> = m.iter().zip(b).map(|(r, &x)| r.iter().copied().chain([x]).collect()).collect();
    for c in 0..n {
        let p = (c..n).max_by(|&i, &j| a[i][c].norm().total_cmp(&a[j][c].norm()))?;
        if a[p][c].norm() == 0.0 {
            return None;
        }
        a.swap(p, c);
        for i in 0..n {
            if i != c {
                let f = a[i][c] / a[c][c];
                for j in c..=n {
                    let v = a[c][j];
                    a[i][j] -= f * v;
                }
            }
        }
    }
    Some((0..n).map(|i| a[i][n] / a[i][i]).collect())
}

fn jacobian_matrix(polys: &[MultiPoly], derivs: &[Vec<MultiPoly>], x: &[Complex64]) -> Vec<Vec<Complex64>> {
    (0..polys.len()).map(|i| derivs[i].iter().map(|d| d.eval_complex(x)).collect()).collect()
}

fn derivatives(polys: &[MultiPoly]) -> Vec<Vec<MultiPoly>> {
    polys.iter().map(|p| (0..p.nvars()).map(|j| p.derivative(j)).collect()).collect()
}

fn residual(polys: &[MultiPoly], x: &[Complex64]) -> f64 {
    polys.iter().map(|p| p.eval_complex(x).norm()).fold(0.0, f64::max)
}

/// Newton's method on a square system; returns the point and the residual
/// after each step (the first entry is the starting residual).
pub fn newton_refine(polys: &[MultiPoly], x0: &[Complex64], max_iter: usize) -> (Vec<Complex64>, Vec<f64>) {
    let derivs = derivatives(polys);
    let mut x = x0.to_vec();
    let mut history = vec![residual(polys, &x)];
    for _ in 0..max_iter {
        let f: Vec<Complex64> = polys.iter().map(|p| -p.eval_complex(&x)).collect();
        let Some(dx) = complex_solve(&jacobian_matrix(polys, &derivs, &x), &f) else {
            break;
        };
        let cand: Vec<Complex64> = x.iter().zip(&dx).map(|(a, b)| a + b).collect();
        let r = residual(polys, &cand);
        if r.is_nan() || r >= *history.last().unwrap() {
            break;
        }
        x = cand;
        history.push(r);
        if r == 0.0 {
            break;
        }
    }
    (x, history)
}

/// Univariate rational polynomial helpers (coefficients low to high).
fn upoly_trim(mut p: Vec<Q>) -> Vec<Q> {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

fn upoly_rem(a: &[Q], b: &[Q]) -> Vec<Q> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    while r.len() > db && !r.is_empty() {
        let f = r.last().unwrap() / b.last().unwrap();
        let shift = r.len() - 1 - db;
        for (i, bc) in b.iter().enumerate() {
            r[shift + i] -= &f * bc;
        }
        r = upoly_trim(r);
    }
    r
}

fn upoly_gcd_degree(a: &[Q], b: &[Q]) -> usize {
    let (mut a, mut b) = (upoly_trim(a.to_vec()), upoly_trim(b.to_vec()));
    while !b.is_empty() {
        let r = upoly_rem(&a, &b);
        a = b;
        b = r;
    }
    a.len().saturating_sub(1)
}

enum Shape {
    Empty,
    /// `x_i = g_i(x_n)` for `i < n`, and `p(x_n) = 0` (coefficients low to high).
    Position {
        g: Vec<MultiPoly>,
        p: Vec<Q>,
    },
    Other,
    NotZeroDim,
}

fn shape_of(polys: &[MultiPoly]) -> Shape {
    let n = polys[0].nvars();
    let gb = buchberger(polys, &MonomialOrder::lex(n));
    if gb.is_unit_ideal() {
        return Shape::Empty;
    }
    let leads = gb.leading_monomials();
    for v in 0..n {
        if !leads.iter().any(|e| e[v] > 0 && e.iter().enumerate().all(|(j, &k)| j == v || k == 0)) {
            return Shape::NotZeroDim;
        }
    }
    if leads.len() != n {
        return Shape::Other;
    }
    let last = n - 1;
    let univariate_in_last = |p: &MultiPoly| p.exponents().all(|e| e[..last].iter().all(|&k| k == 0));
    let mut g = Vec::with_capacity(last);
    for v in 0..last {
        let unit: Exponent = (0..n).map(|j| u32::from(j == v)).collect();
        let Some(pos) = leads.iter().position(|e| *e == unit) else {
            return Shape::Other;
        };
        let gen = &gb.generators()[pos];
        let tail = gen - &MultiPoly::monomial(unit, Q::one());
        if !univariate_in_last(&tail) {
            return Shape::Other;
        }
        g.push(-&tail);
    }
    let Some(pgen) = gb.generators().iter().find(|p| univariate_in_last(p)) else {
        return Shape::Other;
    };
    let deg = pgen.exponents().map(|e| e[last]).max().unwrap_or(0) as usize;
    let mut p = vec![Q::zero(); deg + 1];
    for (e, c) in pgen.terms() {
        p[e[last] as usize] = c.clone();
    }
    Shape::Position { g, p }
}

/// Solve a square polynomial system in `n` variables with finitely many
/// simple zeros.
pub fn solve_system(polys: &[MultiPoly], rng: &mut ChaCha8Rng) -> Result<(Vec<Vec<Complex64>>, usize), LocalError> {
    let n = polys.first().map_or(0, MultiPoly::nvars);
    if polys.len() != n || n == 0 {
        return Err(LocalError::Shape { expected: n });
    }
    let mut changes = 0;
    let mut coeffs: Vec<i64> = vec![0; n - 1];
    loop {
        // x_n = y_n - sum c_i y_i; other coordinates unchanged.
        let images: Vec<MultiPoly> = (0..n)
            .map(|i| {
                if i + 1 < n {
                    MultiPoly::var(n, i)
                } else {
                    coeffs
                        .iter()
                        .enumerate()
                        .fold(MultiPoly::var(n, n - 1), |acc, (j, &c)| &acc - &MultiPoly::var(n, j).scale(&q(c)))
                }
            })
            .collect();
        let changed: Vec<MultiPoly> = polys.iter().map(|p| p.compose(&images)).collect();
        match shape_of(&changed) {
            Shape::Empty => return Ok((Vec::new(), changes)),
            Shape::NotZeroDim => return Err(LocalError::NotZeroDimensional),
            Shape::Position { g, p } => {
                let dp: Vec<Q> = p.iter().enumerate().skip(1).map(|(i, c)| c * q(i as i64)).collect();
                if upoly_gcd_degree(&p, &dp) > 0 {
                    return Err(LocalError::NonSimpleZero(0.0));
                }
                let cf: Vec<Complex64> =
                    p.iter().map(|c| Complex64::new(c.to_f64().unwrap_or(f64::NAN), 0.0)).collect();
                let mut zeros = Vec::new();
                for root in univariate_roots(&cf) {
                    let mut y = vec![Complex64::zero(); n];
                    y[n - 1] = root;
                    for (v, gv) in g.iter().enumerate() {
                        y[v] = gv.eval_complex(&y);
                    }
                    let xn = coeffs.iter().enumerate().fold(y[n - 1], |acc, (j, &c)| acc - y[j] * c as f64);
                    let mut x = y.clone();
                    x[n - 1] = xn;
                    let (x, hist) = newton_refine(polys, &x, 20);
                    let r = *hist.last().unwrap();
                    if r >= RESIDUAL_TOL {
                        return Err(LocalError::NotConverged(r));
                    }
                    zeros.push(x);
                }
                for i in 0..zeros.len() {
                    for j in 0..i {
                        let d = zeros[i].iter().zip(&zeros[j]).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
                        if d <= SEPARATION_TOL {
                            return Err(LocalError::Clustered(d));
                        }
                    }
                }
                return Ok((zeros, changes));
            }
            Shape::Other => {
                if changes == SHAPE_RETRIES {
                    return Err(LocalError::NotShapePosition(SHAPE_RETRIES));
                }
                changes += 1;
                coeffs = (0..n - 1).map(|_| rng.gen_range(1..=9)).collect();
            }
        }
    }
}

/// Zeros of `{F_i = 0 : i != k}` in the chart of `sigma`.
pub fn solve_chart_system(
    system: &PolySystem,
    k: usize,
    sigma: usize,
    rng: &mut ChaCha8Rng,
) -> Result<NumericZeroSet, LocalError> {
    let fan = system.fan();
    let chart = chart_system(system.polys(), fan, k, sigma)?;
    let (zeros, coordinate_changes) = solve_system(&chart, rng)?;
    let derivs = derivatives(&chart);
    let jacobians = zeros.iter().map(|z| complex_det(&jacobian_matrix(&chart, &derivs, z))).collect();
    Ok(NumericZeroSet { sigma, zeros, jacobians, coordinate_changes })
}

fn chart_system(f: &[MultiPoly], fan: &FanData, k: usize, sigma: usize) -> Result<Vec<MultiPoly>, LocalError> {
    if k >= f.len() {
        return Err(LocalError::BadIndex { k });
    }
    f.iter()
        .enumerate()
        .filter(|(i, _)| *i != k)
        .map(|(_, p)| dehomogenize(p, fan, sigma).map_err(|e| LocalError::Residue(e.into())))
        .collect()
}

/// Local residue of `h / (f_k * prod_{i != k} f_i)` at a simple zero:
/// `h(x) / (f_k(x) * det(d f_i / d x_j)(x))`.
pub fn local_residue_simple(
    h: &MultiPoly,
    fk: &MultiPoly,
    others: &[MultiPoly],
    x: &[Complex64],
) -> Result<Complex64, LocalError> {
    let derivs = derivatives(others);
    let det = complex_det(&jacobian_matrix(others, &derivs, x));
    if det.norm() < SINGULAR_TOL {
        return Err(LocalError::NonSimpleZero(det.norm()));
    }
    let polar = fk.eval_complex(x);
    if polar.norm() < SINGULAR_TOL {
        return Err(LocalError::ZeroOnPolarLocus(polar.norm()));
    }
    Ok(h.eval_complex(x) / (polar * det))
}

/// Result of [`sum_local_residues`].
#[derive(Clone, Debug, PartialEq)]
pub struct LocalSum {
    pub value: Complex64,
    pub zeros: NumericZeroSet,
    pub seed: u64,
}

/// `res_F(H) = (-1)^k sum_{x in D_k-hat} res_x`, relative to the Euler form
/// of `basis`, evaluated in the chart of `sigma`.
///
/// Refuses unless every chart system is zero-dimensional, the zeros avoid all
/// boundary divisors (so they lie in the dense torus) and are simple.
pub fn sum_local_residues(
    system: &PolySystem,
    basis: &IntMatrix,
    h: &MultiPoly,
    k: usize,
    sigma: usize,
    seed: u64,
) -> Result<LocalSum, LocalError> {
    let fan = system.fan();
    let f = system.polys();
    if k >= f.len() {
        return Err(LocalError::BadIndex { k });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // Finiteness: every chart of D_k-hat must be zero-dimensional.
    for cone in 0..fan.max_cones().len() {
        let chart = chart_system(f, fan, k, cone)?;
        let gb = buchberger(&chart, &MonomialOrder::grevlex(fan.dim()));
        let leads = gb.leading_monomials();
        let zero_dim = gb.is_unit_ideal()
            || (0..fan.dim())
                .all(|v| leads.iter().any(|e| e[v] > 0 && e.iter().enumerate().all(|(j, &m)| j == v || m == 0)));
        if !zero_dim {
            return Err(LocalError::InfiniteIntersection { cone: cone + 1 });
        }
    }
    // Torus: D_k-hat avoids every D_i.
    let others: Vec<MultiPoly> = f.iter().enumerate().filter(|(i, _)| *i != k).map(|(_, p)| p.clone()).collect();
    for v in 0..fan.num_rays() {
        let mut sys = others.clone();
        sys.push(MultiPoly::var(fan.num_rays(), v));
        if !no_common_zeros_on_x(fan, &sys, system.order()).ok {
            return Err(LocalError::NotInTorus { var: fan.variables()[v].clone() });
        }
    }
    let zeros = solve_chart_system(system, k, sigma, &mut rng)?;
    let chart_f: Vec<MultiPoly> = f
        .iter()
        .map(|p| dehomogenize(p, fan, sigma))
        .collect::<Result<_, _>>()
        .map_err(|e| LocalError::Residue(e.into()))?;
    let chart_h = dehomogenize(h, fan, sigma).map_err(|e| LocalError::Residue(e.into()))?;
    let chart_others: Vec<MultiPoly> =
        chart_f.iter().enumerate().filter(|(i, _)| *i != k).map(|(_, p)| p.clone()).collect();
    let mut total = Complex64::zero();
    for z in &zeros.zeros {
        total += local_residue_simple(&chart_h, &chart_f[k], &chart_others, z)?;
    }
    let cone = fan.cone(sigma).map_err(|e| LocalError::Residue(e.into()))?;
    // No 1/|G_sigma| factor: the chart C^n -> U_sigma is |G|-to-1 over the
    // torus, and each lift contributes 1/|G| of the local residue on X.
    let det = fan.det_eta(basis, cone);
    let sign = if k.is_multiple_of(2) { 1.0 } else { -1.0 } * det.signum() as f64;
    let value = total * sign;
    Ok(LocalSum { value, zeros, seed })
}

/// Euler-Jacobi: `sum_{f = 0} g / (t_1 ... t_n det(df/dt))` over torus zeros
/// vanishes when `g`'s Newton polytope lies inside that of the system.
/// Returns the sum and the verdict `|sum| < 1e-8`.
pub fn euler_jacobi_check(
    fan: &FanData,
    f: &[MultiPoly],
    g: &MultiPoly,
    seed: u64,
) -> Result<(Complex64, bool), LocalError> {
    let n = fan.dim();
    if f.len() != n || f.iter().any(|p| p.nvars() != n) || g.nvars() != n {
        return Err(LocalError::Shape { expected: n });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (zeros, _) = solve_system(f, &mut rng)?;
    let derivs = derivatives(f);
    let mut total = Complex64::zero();
    for z in zeros.iter().filter(|z| z.iter().all(|c| c.norm() > SINGULAR_TOL)) {
        let det = complex_det(&jacobian_matrix(f, &derivs, z));
        if det.norm() < SINGULAR_TOL {
            return Err(LocalError::NonSimpleZero(det.norm()));
        }
        let t: Complex64 = z.iter().product();
        total += g.eval_complex(z) / (t * det);
    }
    Ok((total, total.norm() < 1e-8))
}

/// Exact rational to `f64` (for reporting).
pub fn q_to_f64(x: &Q) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// `|numeric - exact| < tol`.
pub fn agrees(numeric: Complex64, exact: &Q, tol: f64) -> bool {
    (numeric - Complex64::new(q_to_f64(exact), 0.0)).norm() < tol
}

//! Cartier, ample and Q-ample tests via per-cone support functions.

use crate::fan::FanData;
use crate::grading::{DegreeClass, Grading, GradingError};
use crate::intmat;
use crate::linalg::{self, q, Q};

/// Outcome of the Cartier test: `m_sigma` for each maximal cone (if integral).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CartierReport {
    pub cartier: bool,
    pub witnesses: Vec<Option<Vec<i64>>>,
}

/// `D = sum a_i D_i` is Cartier iff on every maximal cone some `m_sigma in M`
/// satisfies `<m_sigma, eta_i> = -a_i` for the rays of `sigma`.
pub fn is_cartier(fan: &FanData, a: &[i64]) -> CartierReport {
    let witnesses: Vec<Option<Vec<i64>>> = fan
        .max_cones()
        .iter()
        .map(|cone| {
            let mat: Vec<Vec<i64>> = cone.iter().map(|&i| fan.ray(i).to_vec()).collect();
            let rhs: Vec<i64> = cone.iter().map(|&i| -a[i]).collect();
            intmat::solve_integer(&mat, &rhs)
        })
        .collect();
    CartierReport { cartier: witnesses.iter().all(Option::is_some), witnesses }
}

/// Rational `m_sigma` with `<m_sigma, eta_i> = -a_i` on the rays of each cone.
pub fn support_function(fan: &FanData, a: &[i64]) -> Vec<Vec<Q>> {
    fan.max_cones()
        .iter()
        .map(|cone| {
            let mat: Vec<Vec<Q>> = cone.iter().map(|&i| fan.ray(i).iter().map(|&x| q(x)).collect()).collect();
            let rhs: Vec<Q> = cone.iter().map(|&i| q(-a[i])).collect();
            linalg::solve_square(&mat, &rhs).expect("simplicial cone")
        })
        .collect()
}

/// Strict convexity: `<m_sigma, eta_j> > -a_j` for every ray `j` off `sigma`.
pub fn is_strictly_convex(fan: &FanData, a: &[i64]) -> bool {
    let ms = support_function(fan, a);
    fan.max_cones().iter().zip(&ms).all(|(cone, m)| {
        (0..fan.num_rays()).filter(|j| !cone.contains(j)).all(|j| {
            let v: Q = fan.ray(j).iter().zip(m).map(|(&e, x)| x * q(e)).sum();
            v > q(-a[j])
        })
    })
}

pub fn is_ample(fan: &FanData, a: &[i64]) -> bool {
    is_cartier(fan, a).cartier && is_strictly_convex(fan, a)
}

pub fn is_q_ample(fan: &FanData, a: &[i64]) -> bool {
    is_strictly_convex(fan, a)
}

pub fn is_cartier_class(fan: &FanData, grading: &Grading, alpha: &DegreeClass) -> Result<CartierReport, GradingError> {
    Ok(is_cartier(fan, &grading.representative_divisor(alpha)?))
}

pub fn is_ample_class(fan: &FanData, grading: &Grading, alpha: &DegreeClass) -> Result<bool, GradingError> {
    Ok(is_ample(fan, &grading.representative_divisor(alpha)?))
}

pub fn is_q_ample_class(fan: &FanData, grading: &Grading, alpha: &DegreeClass) -> Result<bool, GradingError> {
    Ok(is_q_ample(fan, &grading.representative_divisor(alpha)?))
}

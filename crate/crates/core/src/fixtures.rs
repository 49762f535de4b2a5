//! Built-in matrices and curves used by `check`, the tests and the examples.

use crate::cartan::Gcm;
use crate::zeta::CurveZeta;

pub fn rank1_rows() -> Vec<Vec<i64>> {
    vec![vec![2]]
}

/// Symmetric hyperbolic rank-2 matrix with `a_12 a_21 = 9`.
pub fn hyperbolic_rows() -> Vec<Vec<i64>> {
    vec![vec![2, -3], vec![-3, 2]]
}

/// Non-symmetric indefinite chain of rank 3, determinant -2.
pub fn rank3_rows() -> Vec<Vec<i64>> {
    vec![vec![2, -1, 0], vec![-2, 2, -1], vec![0, -3, 2]]
}

pub fn rank1() -> Gcm {
    Gcm::new(rank1_rows()).expect("fixture")
}

pub fn hyperbolic() -> Gcm {
    Gcm::new(hyperbolic_rows()).expect("fixture")
}

pub fn rank3() -> Gcm {
    Gcm::new(rank3_rows()).expect("fixture")
}

/// Projective line over `F_2`.
pub fn projective_line() -> CurveZeta {
    CurveZeta::from_genus0(2).expect("fixture")
}

/// `y^2 + y = x^3` over `F_2`: three rational points.
pub fn elliptic() -> CurveZeta {
    CurveZeta::from_point_counts(2, &[3], true).expect("fixture")
}

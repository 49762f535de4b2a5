//! Generalized Cartan matrices, symmetrizers, weights and coroots.
//!
//! Weights are stored in fundamental-weight coordinates, i.e. as the vector
//! of pairings `<lambda, alpha_i^vee>`. With that convention the pairing of a
//! weight with a coroot `sum_i c_i alpha_i^vee` is the dot product `sum_i c_i lambda_i`,
//! and the simple root `alpha_j` has coordinates given by column `j` of `A`.

use std::collections::VecDeque;
use std::ops::{Add, Mul};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;

/// A validated nonsingular symmetrizable generalized Cartan matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gcm {
    n: usize,
    a: Vec<i64>,
    d: Vec<BigRational>,
    det: BigInt,
}

/// JSON form `{"cartan": [[...], ...]}`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct GcmSpec {
    pub cartan: Vec<Vec<i64>>,
}

impl Gcm {
    /// Validates shape, sign pattern, nonsingularity and symmetrizability.
    pub fn new(rows: Vec<Vec<i64>>) -> Result<Self> {
        check_shape(&rows)?;
        let det = linalg::det_bareiss(&rows);
        if det.is_zero() {
            return Err(Error::Singular);
        }
        let d = symmetrizer(&rows)?;
        let n = rows.len();
        Ok(Gcm {
            n,
            a: rows.into_iter().flatten().collect(),
            d,
            det,
        })
    }

    pub fn from_spec(spec: &GcmSpec) -> Result<Self> {
        Gcm::new(spec.cartan.clone())
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    /// `a_ij = <alpha_j, alpha_i^vee>`.
    #[inline]
    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.a[i * self.n + j]
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        self.a.chunks(self.n).map(<[i64]>::to_vec).collect()
    }

    pub fn spec(&self) -> GcmSpec {
        GcmSpec {
            cartan: self.rows(),
        }
    }

    pub fn symmetrizer(&self) -> &[BigRational] {
        &self.d
    }

    pub fn determinant(&self) -> &BigInt {
        &self.det
    }

    /// `diag(d) * A`, symmetric by construction.
    pub fn symmetrized(&self) -> Vec<Vec<BigRational>> {
        (0..self.n)
            .map(|i| {
                (0..self.n)
                    .map(|j| &self.d[i] * linalg::rat(self.entry(i, j)))
                    .collect()
            })
            .collect()
    }

    /// W-invariant form on the coroot space in the basis of simple coroots:
    /// `G_ik = a_ki / d_i`.
    pub fn coroot_form(&self) -> Vec<Vec<BigRational>> {
        (0..self.n)
            .map(|i| {
                (0..self.n)
                    .map(|k| linalg::rat(self.entry(k, i)) / &self.d[i])
                    .collect()
            })
            .collect()
    }

    pub fn principal_submatrix(&self, indices: &[usize]) -> Vec<Vec<i64>> {
        indices
            .iter()
            .map(|&i| indices.iter().map(|&j| self.entry(i, j)).collect())
            .collect()
    }

    pub fn check_index(&self, i: usize) -> Result<()> {
        if i < self.n {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange {
                index: i,
                rank: self.n,
            })
        }
    }

    pub fn check_rank(&self, got: usize) -> Result<()> {
        if got == self.n {
            Ok(())
        } else {
            Err(Error::RankMismatch {
                expected: self.n,
                got,
            })
        }
    }

    /// The Weyl vector: all fundamental-weight coordinates equal to 1.
    pub fn rho(&self) -> Weight<Complex64> {
        Weight::new(vec![Complex64::new(1.0, 0.0); self.n])
    }

    /// The simple root `alpha_j` in fundamental-weight coordinates (column `j`).
    pub fn simple_root_weight(&self, j: usize) -> Result<Weight<BigRational>> {
        self.check_index(j)?;
        Ok(Weight::new(
            (0..self.n).map(|i| linalg::rat(self.entry(i, j))).collect(),
        ))
    }

    /// True when `A` itself is of finite type.
    pub fn is_finite_type(&self) -> bool {
        is_finite_type(&self.rows())
    }
}

/// Diagonal 2, nonpositive off-diagonal, symmetric zero pattern.
pub fn check_shape(rows: &[Vec<i64>]) -> Result<()> {
    let n = rows.len();
    if n == 0 {
        return Err(Error::NotGcm("empty matrix".into()));
    }
    for (i, row) in rows.iter().enumerate() {
        if row.len() != n {
            return Err(Error::NotGcm(format!("row {i} has length {}", row.len())));
        }
    }
    for i in 0..n {
        if rows[i][i] != 2 {
            return Err(Error::NotGcm(format!("a[{i}][{i}] = {} != 2", rows[i][i])));
        }
        for j in 0..n {
            if i == j {
                continue;
            }
            if rows[i][j] > 0 {
                return Err(Error::NotGcm(format!(
                    "positive off-diagonal entry a[{i}][{j}] = {}",
                    rows[i][j]
                )));
            }
            if (rows[i][j] == 0) != (rows[j][i] == 0) {
                return Err(Error::NotGcm(format!(
                    "asymmetric zero pattern at ({i}, {j})"
                )));
            }
        }
    }
    Ok(())
}

/// Symmetrizer `d` with `d_i a_ij = d_j a_ji`, normalized so that the
/// smallest entry on each connected component of the Coxeter graph is 1.
///
/// Values are propagated along a BFS spanning tree; every non-tree edge is
/// then checked for consistency.
pub fn symmetrizer(rows: &[Vec<i64>]) -> Result<Vec<BigRational>> {
    check_shape(rows)?;
    let n = rows.len();
    let mut d: Vec<Option<BigRational>> = vec![None; n];
    for root in 0..n {
        if d[root].is_some() {
            continue;
        }
        let mut component = vec![root];
        d[root] = Some(BigRational::one());
        let mut queue = VecDeque::from([root]);
        while let Some(i) = queue.pop_front() {
            for j in 0..n {
                if j == i || rows[i][j] == 0 || d[j].is_some() {
                    continue;
                }
                // d_j = d_i a_ij / a_ji
                let dj = d[i].as_ref().unwrap() * linalg::rat(rows[i][j]) / linalg::rat(rows[j][i]);
                d[j] = Some(dj);
                component.push(j);
                queue.push_back(j);
            }
        }
        let min = component
            .iter()
            .map(|&i| d[i].clone().unwrap())
            .min()
            .unwrap();
        for &i in &component {
            d[i] = Some(d[i].take().unwrap() / &min);
        }
    }
    let d: Vec<BigRational> = d.into_iter().map(Option::unwrap).collect();
    for i in 0..n {
        for j in i + 1..n {
            let lhs = &d[i] * linalg::rat(rows[i][j]);
            let rhs = &d[j] * linalg::rat(rows[j][i]);
            if lhs != rhs {
                return Err(Error::NotSymmetrizable(format!(
                    "cycle through edge ({i}, {j}) forces contradictory ratios"
                )));
            }
        }
    }
    Ok(d)
}

/// Finite type test for a (possibly empty) principal submatrix: the
/// symmetrized matrix is positive definite.
pub fn is_finite_type(a_sub: &[Vec<i64>]) -> bool {
    if a_sub.is_empty() {
        return true;
    }
    let Ok(d) = symmetrizer(a_sub) else {
        return false;
    };
    let sym: Vec<Vec<BigRational>> = a_sub
        .iter()
        .enumerate()
        .map(|(i, row)| row.iter().map(|&v| &d[i] * linalg::rat(v)).collect())
        .collect();
    linalg::leading_minors_positive(&sym)
}

/// Scalars that can appear as weight coordinates.
pub trait Coefficient: Clone + Zero + Add<Output = Self> + Mul<Output = Self> {
    fn from_bigint(v: &BigInt) -> Self;
}

impl Coefficient for Complex64 {
    fn from_bigint(v: &BigInt) -> Self {
        Complex64::new(v.to_f64().unwrap_or(f64::NAN), 0.0)
    }
}

impl Coefficient for f64 {
    fn from_bigint(v: &BigInt) -> Self {
        v.to_f64().unwrap_or(f64::NAN)
    }
}

impl Coefficient for BigRational {
    fn from_bigint(v: &BigInt) -> Self {
        BigRational::from_integer(v.clone())
    }
}

impl Coefficient for BigInt {
    fn from_bigint(v: &BigInt) -> Self {
        v.clone()
    }
}

/// A weight in fundamental-weight coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct Weight<T> {
    pub coords: Vec<T>,
}

impl<T> Weight<T> {
    pub fn new(coords: Vec<T>) -> Self {
        Weight { coords }
    }

    pub fn rank(&self) -> usize {
        self.coords.len()
    }
}

impl Weight<Complex64> {
    pub fn real(coords: &[f64]) -> Self {
        Weight::new(coords.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn is_finite(&self) -> bool {
        self.coords
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn re(&self) -> Weight<f64> {
        Weight::new(self.coords.iter().map(|z| z.re).collect())
    }

    pub fn scale(&self, k: f64) -> Self {
        Weight::new(self.coords.iter().map(|z| z * k).collect())
    }
}

impl Weight<BigRational> {
    pub fn to_complex(&self) -> Weight<Complex64> {
        Weight::new(
            self.coords
                .iter()
                .map(|r| Complex64::new(r.to_f64().unwrap_or(f64::NAN), 0.0))
                .collect(),
        )
    }
}

macro_rules! int_vector {
    ($name:ident, $doc:literal) => {
        #[doc = $doc]
        #[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub struct $name(pub Vec<BigInt>);

        impl $name {
            pub fn simple(n: usize, i: usize) -> Self {
                let mut v = vec![BigInt::zero(); n];
                v[i] = BigInt::one();
                $name(v)
            }

            pub fn from_i64(v: &[i64]) -> Self {
                $name(v.iter().map(|&x| BigInt::from(x)).collect())
            }

            pub fn rank(&self) -> usize {
                self.0.len()
            }

            pub fn is_zero(&self) -> bool {
                self.0.iter().all(Zero::is_zero)
            }

            /// Nonzero with all coordinates nonnegative.
            pub fn is_positive(&self) -> bool {
                !self.is_zero() && self.0.iter().all(|c| !c.is_negative())
            }

            /// Nonzero with all coordinates nonpositive.
            pub fn is_negative(&self) -> bool {
                !self.is_zero() && self.0.iter().all(|c| !c.is_positive())
            }

            /// Sum of coordinates.
            pub fn height(&self) -> BigInt {
                self.0.iter().sum()
            }
        }
    };
}

int_vector!(
    RootVec,
    "An element of the root lattice in the basis of simple roots."
);
int_vector!(
    CorootVec,
    "An element of the coroot lattice in the basis of simple coroots."
);

/// `<lambda, beta^vee> = sum_i c_i lambda_i` for `beta^vee = sum_i c_i alpha_i^vee`.
pub fn pairing<T: Coefficient>(weight: &Weight<T>, coroot: &CorootVec) -> Result<T> {
    if weight.rank() != coroot.rank() {
        return Err(Error::RankMismatch {
            expected: weight.rank(),
            got: coroot.rank(),
        });
    }
    Ok(weight
        .coords
        .iter()
        .zip(&coroot.0)
        .fold(T::zero(), |acc, (l, c)| acc + T::from_bigint(c) * l.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn rank_one() {
        let g = Gcm::new(vec![vec![2]]).unwrap();
        assert_eq!(g.rank(), 1);
        assert_eq!(g.symmetrizer(), &[r(1, 1)]);
    }

    #[test]
    fn hyperbolic_rank_two() {
        let g = Gcm::new(vec![vec![2, -3], vec![-3, 2]]).unwrap();
        assert_eq!(g.symmetrizer(), &[r(1, 1), r(1, 1)]);
        assert_eq!(g.determinant(), &BigInt::from(-5));
    }

    #[test]
    fn affine_is_singular() {
        assert_eq!(
            Gcm::new(vec![vec![2, -2], vec![-2, 2]]),
            Err(Error::Singular)
        );
        // A_2^(2) is affine as well, even though it symmetrizes fine
        assert_eq!(
            Gcm::new(vec![vec![2, -1], vec![-4, 2]]),
            Err(Error::Singular)
        );
    }

    #[test]
    fn symmetrizer_examples() {
        let d = symmetrizer(&[vec![2, -1], vec![-4, 2]]).unwrap();
        // proportional to [1, 1/4]
        assert_eq!(d, vec![r(4, 1), r(1, 1)]);
        let d = symmetrizer(&[vec![2, -1], vec![-2, 2]]).unwrap();
        assert_eq!(d, vec![r(2, 1), r(1, 1)]);
        let d = symmetrizer(&[vec![2, -1, 0], vec![-1, 2, -1], vec![0, -1, 2]]).unwrap();
        assert!(d.iter().all(One::is_one));
    }

    #[test]
    fn symmetrizer_components_normalized_separately() {
        let d = symmetrizer(&[
            vec![2, -1, 0, 0],
            vec![-3, 2, 0, 0],
            vec![0, 0, 2, -2],
            vec![0, 0, -1, 2],
        ])
        .unwrap();
        assert_eq!(d, vec![r(3, 1), r(1, 1), r(1, 1), r(2, 1)]);
    }

    #[test]
    fn rejects_bad_matrices() {
        assert_eq!(Gcm::new(vec![vec![3]]).unwrap_err().code(), "NOT_GCM");
        assert_eq!(
            Gcm::new(vec![vec![2, 1], vec![-1, 2]]).unwrap_err().code(),
            "NOT_GCM"
        );
        assert_eq!(
            Gcm::new(vec![vec![2, 0], vec![-1, 2]]).unwrap_err().code(),
            "NOT_GCM"
        );
        assert_eq!(Gcm::new(vec![vec![2, -1]]).unwrap_err().code(), "NOT_GCM");
        // triangle whose cycle product is inconsistent
        let cyc = vec![vec![2, -1, -1], vec![-2, 2, -1], vec![-1, -1, 2]];
        assert_eq!(Gcm::new(cyc).unwrap_err().code(), "NOT_SYMMETRIZABLE");
    }

    #[test]
    fn finite_type() {
        assert!(is_finite_type(&[vec![2]]));
        assert!(is_finite_type(&[]));
        assert!(!is_finite_type(&[vec![2, -3], vec![-3, 2]]));
        assert!(is_finite_type(&[vec![2, -1], vec![-1, 2]]));
        assert!(is_finite_type(&[vec![2, -1], vec![-3, 2]])); // G2
        assert!(!is_finite_type(&[vec![2, -2], vec![-2, 2]]));
    }

    #[test]
    fn pairing_examples() {
        let g = Gcm::new(vec![vec![2, -3], vec![-3, 2]]).unwrap();
        for i in 0..2 {
            let p = pairing(&g.rho(), &CorootVec::simple(2, i)).unwrap();
            assert_eq!(p, Complex64::new(1.0, 0.0));
        }
        let zero = CorootVec::from_i64(&[0, 0]);
        assert_eq!(pairing(&g.rho(), &zero).unwrap(), Complex64::new(0.0, 0.0));
        let g = Gcm::new(vec![vec![2, -1], vec![-2, 2]]).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let aj = g.simple_root_weight(j).unwrap();
                let p = pairing(&aj, &CorootVec::simple(2, i)).unwrap();
                assert_eq!(p, r(g.entry(i, j), 1));
            }
        }
        assert!(pairing(&g.rho(), &CorootVec::simple(3, 0)).is_err());
    }

    #[test]
    fn symmetrized_is_symmetric() {
        let g = Gcm::new(vec![vec![2, -1, 0], vec![-5, 2, -2], vec![0, -1, 2]]).unwrap();
        let s = g.symmetrized();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(s[i][j], s[j][i]);
            }
        }
        assert!(g.symmetrizer().iter().all(|x| x.is_positive()));
    }
}

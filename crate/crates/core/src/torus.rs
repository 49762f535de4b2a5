//! Torus points reduced to their exponent vectors `exps_i = log_q |t_i|`.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::cartan::{self, Gcm, Weight};
use crate::cone::{self, ConeVerdict, CorootSpacePoint};
use crate::error::{Error, Result};
use crate::linalg;
use crate::scalar::Scalar;
use crate::weyl::WeylElt;
use crate::zeta;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorusPoint {
    q: u64,
    exps: Vec<i64>,
}

/// JSON form `{"exps": [-1, -1]}`; the field size comes from the curve.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorusSpec {
    pub exps: Vec<i64>,
}

impl TorusPoint {
    pub fn new(q: u64, exps: Vec<i64>) -> Result<Self> {
        if !zeta::is_prime_power(q) {
            return Err(Error::BadFieldSize(q));
        }
        Ok(TorusPoint { q, exps })
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn exps(&self) -> &[i64] {
        &self.exps
    }

    pub fn rank(&self) -> usize {
        self.exps.len()
    }

    /// All components are units.
    pub fn is_compact(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    /// `sum_i exps_i mu_i`, so that `h^mu = q^exponent`.
    pub fn exponent<S: Scalar>(&self, mu: &[S]) -> Result<S> {
        if mu.len() != self.rank() {
            return Err(Error::RankMismatch {
                expected: self.rank(),
                got: mu.len(),
            });
        }
        let zero = mu.first().map(|m| m.zero_like());
        let Some(zero) = zero else {
            return Err(Error::InvalidArgument("empty weight".into()));
        };
        let terms = self
            .exps
            .iter()
            .zip(mu)
            .map(|(&e, m)| m.like_int(&BigInt::from(e)) * m.clone());
        Ok(S::sum_all(zero, terms))
    }

    /// `h^mu = exp(ln q * sum_i exps_i mu_i)`, principal branch.
    pub fn h_pow(&self, mu: &Weight<Complex64>) -> Result<Complex64> {
        let e = self.exponent(&mu.coords)?;
        Ok((e * (self.q as f64).ln()).exp())
    }

    /// `h^{alpha_j} > 1` for every `j`.
    pub fn in_hc(&self, g: &Gcm) -> Result<bool> {
        g.check_rank(self.rank())?;
        let n = g.rank();
        Ok((0..n).all(|j| {
            (0..n)
                .map(|i| BigInt::from(self.exps[i]) * g.entry(i, j))
                .sum::<BigInt>()
                .is_positive()
        }))
    }

    /// `sum_i exps_i alpha_i^vee`; the factor `ln q > 0` is dropped.
    pub fn coroot_point(&self) -> CorootSpacePoint {
        CorootSpacePoint::from_integers(&self.exps)
    }

    pub fn in_h_titscone(&self, g: &Gcm, cap: usize) -> Result<ConeVerdict> {
        cone::descend(g, &self.coroot_point(), cap)
    }

    /// The point `h'` with `h'^mu = h^{w mu}`: exponents moved by the coroot
    /// action of `w^{-1}`.
    pub fn transport(&self, g: &Gcm, w: &WeylElt) -> Result<TorusPoint> {
        g.check_rank(self.rank())?;
        let winv = w.inverse(g);
        let x: Vec<BigInt> = self.exps.iter().map(|&e| BigInt::from(e)).collect();
        let moved = winv.m_coroot().apply(&x);
        let exps = moved
            .iter()
            .map(|v| {
                i64::try_from(v).map_err(|_| {
                    Error::InvalidArgument("transported exponent overflows i64".into())
                })
            })
            .collect::<Result<Vec<i64>>>()?;
        Ok(TorusPoint { q: self.q, exps })
    }
}

/// Dimension of the rational solutions `d` of `sum_i m_i d_i = 0` together
/// with `sum_i (m_i - a_ij) d_i = 0` for every `j`.
///
/// Takes raw rows so that singular matrices can be examined too.
pub fn units_nullity(rows: &[Vec<i64>], m: &[i64]) -> Result<usize> {
    cartan::check_shape(rows)?;
    let n = rows.len();
    if m.len() != n {
        return Err(Error::RankMismatch {
            expected: n,
            got: m.len(),
        });
    }
    if m.iter().any(|&x| x <= 0) {
        return Err(Error::NonPositiveM(m.to_vec()));
    }
    let mut system = vec![m.iter().map(|&x| linalg::rat(x)).collect::<Vec<_>>()];
    for j in 0..n {
        system.push((0..n).map(|i| linalg::rat(m[i] - rows[i][j])).collect());
    }
    Ok(n - linalg::rank(&system))
}

/// Dimension of `{d : sum_i a_ij d_i = 0 for all j}`, the difference of the
/// two families above. Zero exactly when the matrix is nonsingular.
pub fn subtracted_system_nullity(rows: &[Vec<i64>]) -> Result<usize> {
    cartan::check_shape(rows)?;
    let n = rows.len();
    let at: Vec<Vec<_>> = (0..n)
        .map(|j| (0..n).map(|i| linalg::rat(rows[i][j])).collect())
        .collect();
    Ok(n - linalg::rank(&at))
}

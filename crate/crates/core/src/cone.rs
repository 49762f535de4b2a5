//! Dominant chambers, Tits cone membership and the Godement range.
//!
//! Membership in `W * closure(C)` is decided by descent: reflect in the wall
//! of the smallest simple root pairing negatively until every pairing is
//! nonnegative. A point that lands in the closed chamber is interior to the
//! Tits cone exactly when the simple roots vanishing on it span a finite
//! type subdiagram. Exclusion from the cone is only certified in rank 2,
//! where the invariant form gives an exact test.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::cartan::{self, Gcm, Weight};
use crate::error::{Error, Result};
use crate::linalg;
use crate::weyl::WeylElt;

pub const DEFAULT_DESCENT_CAP: usize = 10_000;

/// A point `x = sum_i c_i alpha_i^vee` of the real coroot space, exact.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CorootSpacePoint {
    pub coords: Vec<BigRational>,
}

impl CorootSpacePoint {
    pub fn new(coords: Vec<BigRational>) -> Self {
        CorootSpacePoint { coords }
    }

    pub fn from_integers(v: &[i64]) -> Self {
        CorootSpacePoint::new(v.iter().map(|&x| linalg::rat(x)).collect())
    }

    pub fn rank(&self) -> usize {
        self.coords.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    /// `<alpha_j, x> = sum_i c_i a_ij`.
    pub fn pairings(&self, g: &Gcm) -> Vec<BigRational> {
        let n = g.rank();
        (0..n)
            .map(|j| {
                self.coords
                    .iter()
                    .enumerate()
                    .map(|(i, c)| c * linalg::rat(g.entry(i, j)))
                    .sum()
            })
            .collect()
    }

    /// `w x`.
    pub fn transport(&self, w: &WeylElt) -> CorootSpacePoint {
        let n = self.rank();
        let m = w.m_coroot();
        CorootSpacePoint::new(
            (0..n)
                .map(|r| {
                    (0..n)
                        .map(|c| BigRational::from_integer(m.get(r, c)) * &self.coords[c])
                        .sum()
                })
                .collect(),
        )
    }

    pub fn neg(&self) -> CorootSpacePoint {
        CorootSpacePoint::new(self.coords.iter().map(|c| -c).collect())
    }

    /// Positive integer multiple with coprime-free denominators cleared.
    fn integer_multiple(&self) -> Vec<BigInt> {
        let lcm = self
            .coords
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        self.coords
            .iter()
            .map(|c| c.numer() * (&lcm / c.denom()))
            .collect()
    }
}

impl fmt::Display for CorootSpacePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .coords
            .iter()
            .map(|c| format!("{}/{}", c.numer(), c.denom()))
            .collect();
        write!(f, "{}", parts.join(","))
    }
}

impl FromStr for CorootSpacePoint {
    type Err = Error;

    /// Comma separated rationals, e.g. `"-1/1,-1/1"` or `"3,-1/2"`.
    fn from_str(s: &str) -> Result<Self> {
        let coords = s
            .split(',')
            .map(|part| {
                let part = part.trim();
                let (num, den) = part.split_once('/').unwrap_or((part, "1"));
                let num: BigInt = num
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad rational {part:?}")))?;
                let den: BigInt = den
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad rational {part:?}")))?;
                if den.is_zero() {
                    return Err(Error::Parse(format!("zero denominator in {part:?}")));
                }
                Ok(BigRational::new(num, den))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(CorootSpacePoint::new(coords))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ConeStatus {
    Dominant,
    InteriorTitsCone,
    BoundaryOrbit,
    Outside,
    Undetermined,
}

#[derive(Clone, Debug)]
pub struct ConeVerdict {
    pub status: ConeStatus,
    /// `w` with `w x` in the closed dominant chamber.
    pub witness: Option<WeylElt>,
    pub steps: usize,
    /// `x = 0`: reported as a boundary point by convention.
    pub is_origin: bool,
    /// `w x` when descent terminated.
    pub final_point: Option<CorootSpacePoint>,
}

impl ConeVerdict {
    pub fn report(&self) -> ConeReport {
        ConeReport {
            status: self.status,
            witness: self.witness.as_ref().map(|w| w.word().to_vec()),
            steps: self.steps,
            is_origin: self.is_origin,
            final_point: self.final_point.as_ref().map(ToString::to_string),
        }
    }
}

/// Serializable form of a [`ConeVerdict`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConeReport {
    pub status: ConeStatus,
    pub witness: Option<Vec<usize>>,
    pub steps: usize,
    pub is_origin: bool,
    pub final_point: Option<String>,
}

fn witness_from_steps(g: &Gcm, applied: &[usize]) -> WeylElt {
    let word: Vec<usize> = applied.iter().rev().copied().collect();
    WeylElt::from_word(g, &word).unwrap_or_else(|_| {
        word.iter().fold(WeylElt::identity(g), |acc, &i| {
            acc.compose(g, &WeylElt::from_word(g, &[i]).expect("generator"))
        })
    })
}

/// Descent towards the closed dominant chamber, at most `cap` reflections.
pub fn descend(g: &Gcm, x: &CorootSpacePoint, cap: usize) -> Result<ConeVerdict> {
    g.check_rank(x.rank())?;
    if cap == 0 {
        return Err(Error::InvalidArgument("descent cap must be >= 1".into()));
    }
    let n = g.rank();
    // cone membership is invariant under positive scaling, so work with an
    // integer multiple and avoid rational normalization in the loop
    let mut c = x.integer_multiple();
    let mut p: Vec<BigInt> = (0..n)
        .map(|j| (0..n).map(|i| &c[i] * g.entry(i, j)).sum())
        .collect();
    let mut applied = Vec::new();
    loop {
        let Some(j) = (0..n).find(|&j| p[j].is_negative()) else {
            break;
        };
        if applied.len() == cap {
            return Ok(ConeVerdict {
                status: ConeStatus::Undetermined,
                witness: None,
                steps: applied.len(),
                is_origin: false,
                final_point: None,
            });
        }
        // s_j x = x - <alpha_j, x> alpha_j^vee
        let delta = -p[j].clone();
        c[j] += &delta;
        for (k, pk) in p.iter_mut().enumerate() {
            *pk += &delta * g.entry(j, k);
        }
        applied.push(j);
    }
    let zero_set: Vec<usize> = (0..n).filter(|&j| p[j].is_zero()).collect();
    let status = if zero_set.is_empty() {
        ConeStatus::Dominant
    } else if cartan::is_finite_type(&g.principal_submatrix(&zero_set)) {
        ConeStatus::InteriorTitsCone
    } else {
        ConeStatus::BoundaryOrbit
    };
    let witness = witness_from_steps(g, &applied);
    let final_point = x.transport(&witness);
    Ok(ConeVerdict {
        status,
        witness: Some(witness),
        steps: applied.len(),
        is_origin: x.is_zero(),
        final_point: Some(final_point),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Rank2Region {
    Inside,
    Boundary,
    Outside,
}

/// Exact Tits cone test for rank-2 GCMs with indefinite symmetrization.
///
/// With `G` the W-invariant form on the coroot space, the interior of the
/// Tits cone is the open component of `{G(x, x) < 0}` containing the
/// dominant chamber. The origin and light-like vectors on the dominant side
/// are reported as `Boundary`.
pub fn rank2_certificate(g: &Gcm, x: &CorootSpacePoint) -> Result<Rank2Region> {
    if g.rank() != 2 {
        return Err(Error::RankNot2(g.rank()));
    }
    g.check_rank(x.rank())?;
    if !g.determinant().is_negative() {
        return Err(Error::NotIndefinite);
    }
    if x.is_zero() {
        return Ok(Rank2Region::Boundary);
    }
    let form = g.coroot_form();
    let bil = |u: &[BigRational], v: &[BigRational]| -> BigRational {
        let mut acc = BigRational::zero();
        for i in 0..2 {
            for k in 0..2 {
                acc += &u[i] * &form[i][k] * &v[k];
            }
        }
        acc
    };
    // a point of the open dominant chamber: all pairings equal to 1
    let at: Vec<Vec<BigRational>> = (0..2)
        .map(|j| (0..2).map(|i| linalg::rat(g.entry(i, j))).collect())
        .collect();
    let one = vec![BigRational::one(), BigRational::one()];
    let dominant = linalg::solve(&at, &one).expect("nonsingular Cartan matrix");
    let norm = bil(&x.coords, &x.coords);
    let side = bil(&x.coords, &dominant);
    Ok(if norm.is_negative() && side.is_negative() {
        Rank2Region::Inside
    } else if norm.is_zero() && side.is_negative() {
        Rank2Region::Boundary
    } else {
        Rank2Region::Outside
    })
}

/// `Re(lambda - rho)` strictly dominant: `Re <lambda, alpha_i^vee> > 1` for all `i`.
pub fn godement_check(lambda: &Weight<Complex64>) -> bool {
    lambda.coords.iter().all(|z| z.re > 1.0)
}

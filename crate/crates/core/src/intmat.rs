//! Square integer matrices that stay in `i64` until an entry overflows.
//!
//! The representation is normalized: a matrix is stored as `Big` only if
//! some entry does not fit in `i64`, so derived equality and hashing are
//! exact on values.

use std::hash::Hash;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::cartan::Coefficient;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum IntMatrix {
    Small { n: usize, data: Vec<i64> },
    Big { n: usize, data: Vec<BigInt> },
}

/// Sign pattern of an integer vector.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VecSign {
    Zero,
    Positive,
    Negative,
    Mixed,
}

impl VecSign {
    fn of<I: Iterator<Item = i32>>(signs: I) -> Self {
        let (mut pos, mut neg) = (false, false);
        for s in signs {
            pos |= s > 0;
            neg |= s < 0;
        }
        match (pos, neg) {
            (false, false) => VecSign::Zero,
            (true, false) => VecSign::Positive,
            (false, true) => VecSign::Negative,
            (true, true) => VecSign::Mixed,
        }
    }
}

fn sign_of_big(v: &BigInt) -> i32 {
    if v.is_positive() {
        1
    } else if v.is_negative() {
        -1
    } else {
        0
    }
}

impl IntMatrix {
    pub fn identity(n: usize) -> Self {
        let mut data = vec![0; n * n];
        for i in 0..n {
            data[i * n + i] = 1;
        }
        IntMatrix::Small { n, data }
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let n = rows.len();
        IntMatrix::Small {
            n,
            data: rows.iter().flatten().copied().collect(),
        }
    }

    fn from_big(n: usize, data: Vec<BigInt>) -> Self {
        match data
            .iter()
            .map(ToPrimitive::to_i64)
            .collect::<Option<Vec<i64>>>()
        {
            Some(small) => IntMatrix::Small { n, data: small },
            None => IntMatrix::Big { n, data },
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            IntMatrix::Small { n, .. } | IntMatrix::Big { n, .. } => *n,
        }
    }

    fn big_data(&self) -> Vec<BigInt> {
        match self {
            IntMatrix::Small { data, .. } => data.iter().map(|&v| BigInt::from(v)).collect(),
            IntMatrix::Big { data, .. } => data.clone(),
        }
    }

    pub fn get(&self, r: usize, c: usize) -> BigInt {
        match self {
            IntMatrix::Small { n, data } => BigInt::from(data[r * n + c]),
            IntMatrix::Big { n, data } => data[r * n + c].clone(),
        }
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        let n = self.dim();
        let data = self.big_data();
        data.chunks(n.max(1))
            .take(n)
            .map(<[BigInt]>::to_vec)
            .collect()
    }

    pub fn column(&self, c: usize) -> Vec<BigInt> {
        (0..self.dim()).map(|r| self.get(r, c)).collect()
    }

    pub fn column_sign(&self, c: usize) -> VecSign {
        match self {
            IntMatrix::Small { n, data } => {
                VecSign::of((0..*n).map(|r| data[r * n + c].signum() as i32))
            }
            IntMatrix::Big { n, data } => {
                VecSign::of((0..*n).map(|r| sign_of_big(&data[r * n + c])))
            }
        }
    }

    pub fn transpose(&self) -> Self {
        let n = self.dim();
        match self {
            IntMatrix::Small { data, .. } => IntMatrix::Small {
                n,
                data: (0..n * n).map(|k| data[(k % n) * n + k / n]).collect(),
            },
            IntMatrix::Big { data, .. } => IntMatrix::Big {
                n,
                data: (0..n * n)
                    .map(|k| data[(k % n) * n + k / n].clone())
                    .collect(),
            },
        }
    }

    /// `self * (I + e_i u^T)`: adds `u_c` times column `i` to every column `c`.
    pub fn mul_row_update(&self, i: usize, u: &[i64]) -> Self {
        let n = self.dim();
        if let IntMatrix::Small { data, .. } = self {
            let mut out = data.clone();
            let mut ok = true;
            'outer: for r in 0..n {
                let mi = data[r * n + i];
                for c in 0..n {
                    match mi
                        .checked_mul(u[c])
                        .and_then(|p| p.checked_add(data[r * n + c]))
                    {
                        Some(v) => out[r * n + c] = v,
                        None => {
                            ok = false;
                            break 'outer;
                        }
                    }
                }
            }
            if ok {
                return IntMatrix::Small { n, data: out };
            }
        }
        let data = self.big_data();
        let mut out = data.clone();
        for r in 0..n {
            let mi = &data[r * n + i];
            for c in 0..n {
                if u[c] != 0 {
                    out[r * n + c] += mi * u[c];
                }
            }
        }
        IntMatrix::from_big(n, out)
    }

    /// `self * (I + v e_i^T)`: column `i` becomes `M e_i + M v`.
    pub fn mul_col_update(&self, i: usize, v: &[i64]) -> Self {
        let n = self.dim();
        let data = self.big_data();
        let mut out = data.clone();
        for r in 0..n {
            let mut acc = data[r * n + i].clone();
            for k in 0..n {
                if v[k] != 0 {
                    acc += &data[r * n + k] * v[k];
                }
            }
            out[r * n + i] = acc;
        }
        IntMatrix::from_big(n, out)
    }

    pub fn mul(&self, other: &IntMatrix) -> Self {
        let n = self.dim();
        let a = self.big_data();
        let b = other.big_data();
        let mut out = vec![BigInt::zero(); n * n];
        for r in 0..n {
            for k in 0..n {
                let ark = &a[r * n + k];
                if ark.is_zero() {
                    continue;
                }
                for c in 0..n {
                    out[r * n + c] += ark * &b[k * n + c];
                }
            }
        }
        IntMatrix::from_big(n, out)
    }

    pub fn apply(&self, v: &[BigInt]) -> Vec<BigInt> {
        let n = self.dim();
        (0..n)
            .map(|r| (0..n).map(|c| self.get(r, c) * &v[c]).sum())
            .collect()
    }

    /// Matrix-vector product with entries converted into `T`.
    pub fn apply_coeff<T: Coefficient>(&self, v: &[T]) -> Vec<T> {
        let n = self.dim();
        (0..n)
            .map(|r| {
                (0..n).fold(T::zero(), |acc, c| {
                    acc + T::from_bigint(&self.get(r, c)) * v[c].clone()
                })
            })
            .collect()
    }

    pub fn is_identity(&self) -> bool {
        *self == IntMatrix::identity(self.dim())
    }

    /// Largest absolute entry, in bits.
    pub fn max_bits(&self) -> u64 {
        match self {
            IntMatrix::Small { data, .. } => data
                .iter()
                .map(|v| 64 - v.unsigned_abs().leading_zeros() as u64)
                .max()
                .unwrap_or(0),
            IntMatrix::Big { data, .. } => data.iter().map(BigInt::bits).max().unwrap_or(0),
        }
    }
}

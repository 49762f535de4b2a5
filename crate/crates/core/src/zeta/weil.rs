//! Exact test that every inverse root of the numerator has modulus `sqrt(q)`.
//!
//! Write the reversed numerator `R(T) = T^{2g} P(1/T)` as `T^g Q(T + q/T)`.
//! The roots of `R` lie on `|T| = sqrt(q)` iff every root `u` of `Q` is real
//! with `u^2 <= 4q`, iff every root of `F(v) = Q(sqrt v) Q(-sqrt v)` lies in
//! `[0, 4q]`. The last condition is decided by a Sturm sequence.

use num_bigint::BigInt;
use num_integer::binomial;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

type Poly = Vec<BigRational>; // ascending coefficients, no trailing zeros

fn trim(mut p: Poly) -> Poly {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

fn degree(p: &Poly) -> Option<usize> {
    p.len().checked_sub(1)
}

fn derivative(p: &Poly) -> Poly {
    trim(
        p.iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c * BigRational::from_integer(BigInt::from(k)))
            .collect(),
    )
}

/// Quotient and remainder of polynomial division; `b` must be nonzero.
fn divrem(a: &Poly, b: &Poly) -> (Poly, Poly) {
    let db = degree(b).expect("division by zero polynomial");
    let lead = b[db].clone();
    let mut r = a.clone();
    let mut q = vec![BigRational::zero(); a.len().saturating_sub(db).max(1)];
    while let Some(dr) = degree(&r) {
        if dr < db {
            break;
        }
        let f = &r[dr] / &lead;
        let shift = dr - db;
        for (k, bk) in b.iter().enumerate() {
            let v = &f * bk;
            r[k + shift] -= v;
        }
        q[shift] = f;
        r = trim(r);
    }
    (trim(q), r)
}

fn gcd(a: &Poly, b: &Poly) -> Poly {
    let (mut x, mut y) = (a.clone(), b.clone());
    while !y.is_empty() {
        let (_, r) = divrem(&x, &y);
        x = y;
        y = r;
    }
    x
}

fn eval(p: &Poly, x: &BigRational) -> BigRational {
    p.iter()
        .rev()
        .fold(BigRational::zero(), |acc, c| acc * x + c)
}

fn sign_changes(values: impl Iterator<Item = BigRational>) -> usize {
    let mut last = 0i8;
    let mut changes = 0;
    for v in values {
        let s = if v.is_positive() {
            1
        } else if v.is_negative() {
            -1
        } else {
            continue;
        };
        if last != 0 && s != last {
            changes += 1;
        }
        last = s;
    }
    changes
}

struct Sturm(Vec<Poly>);

impl Sturm {
    fn new(p: &Poly) -> Self {
        let mut chain = vec![p.clone(), derivative(p)];
        while !chain.last().unwrap().is_empty() {
            let k = chain.len();
            let (_, r) = divrem(&chain[k - 2], &chain[k - 1]);
            chain.push(r.into_iter().map(|c| -c).collect());
        }
        chain.pop();
        Sturm(chain)
    }

    fn changes_at(&self, x: &BigRational) -> usize {
        sign_changes(self.0.iter().map(|p| eval(p, x)))
    }

    /// Distinct roots in `(a, b]`.
    fn count(&self, a: &BigRational, b: &BigRational) -> usize {
        self.changes_at(a) - self.changes_at(b)
    }
}

/// `Q` with `R(T) = T^g Q(T + q/T)`, ascending integer coefficients.
/// `coeffs` are those of `P`, length `2g + 1`, satisfying the functional
/// equation.
pub(crate) fn trace_polynomial(q: u64, coeffs: &[BigInt]) -> Vec<BigInt> {
    let g = (coeffs.len() - 1) / 2;
    let q = BigInt::from(q);
    // Laurent coefficients of R(T) / T^g, exponent e stored at e + g
    let mut lau: Vec<BigInt> = (0..=2 * g).map(|e| coeffs[2 * g - e].clone()).collect();
    let mut out = vec![BigInt::zero(); g + 1];
    for j in (0..=g).rev() {
        let qj = lau[j + g].clone();
        if !qj.is_zero() {
            // subtract qj (T + q/T)^j = qj sum_m C(j, m) q^m T^{j - 2m}
            for m in 0..=j {
                let e = j as i64 - 2 * m as i64;
                let term = &qj * binomial(BigInt::from(j), BigInt::from(m)) * q.pow(m as u32);
                lau[(e + g as i64) as usize] -= term;
            }
        }
        out[j] = qj;
    }
    debug_assert!(lau.iter().all(Zero::is_zero));
    out
}

/// All inverse roots of `P` have absolute value `sqrt(q)`.
pub(crate) fn satisfies_riemann_hypothesis(q: u64, coeffs: &[BigInt]) -> bool {
    let trace = trace_polynomial(q, coeffs);
    let g = trace.len() - 1;
    if g == 0 {
        return true;
    }
    // F(u^2) = Q(u) Q(-u)
    let mut prod = vec![BigInt::zero(); 2 * g + 1];
    for (i, a) in trace.iter().enumerate() {
        for (j, b) in trace.iter().enumerate() {
            let sign = if j % 2 == 0 {
                BigInt::one()
            } else {
                -BigInt::one()
            };
            prod[i + j] += a * b * sign;
        }
    }
    let f: Poly = trim(
        prod.iter()
            .step_by(2)
            .map(|c| BigRational::from_integer(c.clone()))
            .collect(),
    );
    let g_f = gcd(&f, &derivative(&f));
    let (squarefree, _) = divrem(&f, &g_f);
    let Some(deg) = degree(&squarefree) else {
        return false;
    };
    let sturm = Sturm::new(&squarefree);
    let zero = BigRational::zero();
    let upper = BigRational::from_integer(BigInt::from(4u64) * BigInt::from(q));
    let at_zero = usize::from(eval(&squarefree, &zero).is_zero());
    sturm.count(&zero, &upper) + at_zero == deg
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn trace_polynomial_genus_one() {
        // P = 1 + a T + q T^2 -> R = T^2 + a T + q = T (T + q/T + a)
        assert_eq!(trace_polynomial(2, &ints(&[1, 2, 2])), ints(&[2, 1]));
        assert_eq!(trace_polynomial(5, &ints(&[1])), ints(&[1]));
    }

    #[test]
    fn genus_one_hasse_bound() {
        // |a| <= 2 sqrt(q) exactly
        assert!(satisfies_riemann_hypothesis(2, &ints(&[1, 0, 2])));
        assert!(satisfies_riemann_hypothesis(2, &ints(&[1, 2, 2])));
        assert!(!satisfies_riemann_hypothesis(2, &ints(&[1, 3, 2])));
        assert!(!satisfies_riemann_hypothesis(4, &ints(&[1, 5, 4])));
        // double root on the circle: (1 + 2T)^2 over F_4
        assert!(satisfies_riemann_hypothesis(4, &ints(&[1, 4, 4])));
        assert!(satisfies_riemann_hypothesis(4, &ints(&[1, -4, 4])));
    }

    #[test]
    fn genus_two() {
        // (1 + 2T^2)^2: P of a product of two supersingular curves over F_2
        assert!(satisfies_riemann_hypothesis(2, &ints(&[1, 0, 4, 0, 4])));
        // (1 + T + 2T^2)(1 - T + 2T^2) = 1 + 3T^2 + 4T^4
        assert!(satisfies_riemann_hypothesis(2, &ints(&[1, 0, 3, 0, 4])));
        // Q(u) = u^2 + 9 has imaginary roots
        assert!(!satisfies_riemann_hypothesis(2, &ints(&[1, 0, 13, 0, 4])));
    }
}

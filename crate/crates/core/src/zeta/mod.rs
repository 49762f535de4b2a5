//! Zeta functions of smooth projective curves over a finite field, in the
//! rational form `P(q^-s) / ((1 - q^-s)(1 - q^(1-s)))`.

mod weil;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Guard radius around the zeros of `1 - q^-s` and `1 - q^(1-s)`.
pub const POLE_GUARD: f64 = 1e-9;

pub fn is_prime_power(q: u64) -> bool {
    if q < 2 {
        return false;
    }
    let mut p = 2;
    while p * p <= q {
        if q % p == 0 {
            let mut r = q;
            while r % p == 0 {
                r /= p;
            }
            return r == 1;
        }
        p += 1;
    }
    true
}

fn mobius(n: u64) -> i64 {
    let (mut n, mut mu, mut p) = (n, 1i64, 2u64);
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            mu = -mu;
        }
        p += 1;
    }
    if n > 1 {
        mu = -mu;
    }
    mu
}

/// Numerator coefficients `p_0..p_2g` with `P(T) = prod (1 - beta_i T)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveZeta {
    q: u64,
    genus: usize,
    coeffs: Vec<BigInt>,
}

/// JSON form: `{"q": 2, "genus": 1, "counts": [3]}`, or with
/// `"coefficients"` instead of `"counts"`, or neither for genus 0.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveSpec {
    pub q: u64,
    pub genus: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counts: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coefficients: Option<Vec<i64>>,
}

impl CurveZeta {
    pub fn from_genus0(q: u64) -> Result<Self> {
        if !is_prime_power(q) {
            return Err(Error::BadFieldSize(q));
        }
        Ok(CurveZeta {
            q,
            genus: 0,
            coeffs: vec![BigInt::one()],
        })
    }

    /// Reconstructs `P` from `N_1..N_g` by Newton's identities and the
    /// functional equation.
    pub fn from_point_counts(q: u64, counts: &[i64], weil_check: bool) -> Result<Self> {
        if !is_prime_power(q) {
            return Err(Error::BadFieldSize(q));
        }
        let g = counts.len();
        if g == 0 {
            return Err(Error::InvalidArgument(
                "point counts require genus >= 1".into(),
            ));
        }
        if let Some(m) = counts.iter().position(|&n| n <= 0) {
            return Err(Error::InconsistentCounts(format!(
                "N_{} = {} is not positive",
                m + 1,
                counts[m]
            )));
        }
        let qb = BigInt::from(q);
        let s: Vec<BigInt> = counts
            .iter()
            .enumerate()
            .map(|(m, &n)| qb.pow(m as u32 + 1) + 1 - n)
            .collect();
        let mut p = vec![BigInt::zero(); 2 * g + 1];
        p[0] = BigInt::one();
        for k in 1..=g {
            let acc: BigInt = (1..=k).map(|j| &s[j - 1] * &p[k - j]).sum();
            let (quo, rem) = (-acc).div_rem(&BigInt::from(k));
            if !rem.is_zero() {
                return Err(Error::InconsistentCounts(format!(
                    "Newton identity for p_{k} has no integer solution"
                )));
            }
            p[k] = quo;
        }
        for k in g + 1..=2 * g {
            p[k] = qb.pow((k - g) as u32) * &p[2 * g - k];
        }
        Self::from_coefficients(q, g, p, weil_check)
    }

    pub fn from_coefficients(
        q: u64,
        genus: usize,
        coeffs: Vec<BigInt>,
        weil_check: bool,
    ) -> Result<Self> {
        if !is_prime_power(q) {
            return Err(Error::BadFieldSize(q));
        }
        if coeffs.len() != 2 * genus + 1 {
            return Err(Error::InconsistentCounts(format!(
                "expected {} coefficients for genus {genus}, got {}",
                2 * genus + 1,
                coeffs.len()
            )));
        }
        if !coeffs[0].is_one() {
            return Err(Error::InconsistentCounts("p_0 must be 1".into()));
        }
        let qb = BigInt::from(q);
        for k in 0..genus {
            if coeffs[2 * genus - k] != qb.pow((genus - k) as u32) * &coeffs[k] {
                return Err(Error::InconsistentCounts(format!(
                    "functional equation fails for p_{}",
                    2 * genus - k
                )));
            }
        }
        if weil_check && !weil::satisfies_riemann_hypothesis(q, &coeffs) {
            return Err(Error::InconsistentCounts(
                "inverse roots do not all have modulus sqrt(q)".into(),
            ));
        }
        Ok(CurveZeta { q, genus, coeffs })
    }

    pub fn from_spec(spec: &CurveSpec) -> Result<Self> {
        match (&spec.counts, &spec.coefficients) {
            (Some(_), Some(_)) => Err(Error::InvalidArgument(
                "curve spec has both counts and coefficients".into(),
            )),
            (Some(counts), None) => {
                if counts.len() != spec.genus {
                    return Err(Error::InconsistentCounts(format!(
                        "genus {} needs {} counts, got {}",
                        spec.genus,
                        spec.genus,
                        counts.len()
                    )));
                }
                Self::from_point_counts(spec.q, counts, true)
            }
            (None, Some(c)) => Self::from_coefficients(
                spec.q,
                spec.genus,
                c.iter().map(|&x| BigInt::from(x)).collect(),
                true,
            ),
            (None, None) if spec.genus == 0 => Self::from_genus0(spec.q),
            (None, None) => Err(Error::InvalidArgument(format!(
                "genus {} curve needs counts or coefficients",
                spec.genus
            ))),
        }
    }

    pub fn spec(&self) -> CurveSpec {
        CurveSpec {
            q: self.q,
            genus: self.genus,
            counts: None,
            coefficients: Some(
                self.coeffs
                    .iter()
                    .map(|c| c.to_i64().unwrap_or(0))
                    .collect(),
            ),
        }
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn coefficients(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Exact check that every inverse root has modulus `sqrt(q)`.
    pub fn satisfies_weil_bound(&self) -> bool {
        weil::satisfies_riemann_hypothesis(self.q, &self.coeffs)
    }

    /// Power sums `s_1..s_m` of the inverse roots.
    pub fn power_sums(&self, m: usize) -> Vec<BigInt> {
        let p = |k: usize| self.coeffs.get(k).cloned().unwrap_or_default();
        let mut s: Vec<BigInt> = Vec::with_capacity(m);
        for k in 1..=m {
            let mut v = -BigInt::from(k) * p(k);
            for j in 1..k {
                v -= p(j) * &s[k - j - 1];
            }
            s.push(v);
        }
        s
    }

    /// `N_1..N_m`, the numbers of rational points over the degree-`m`
    /// extensions.
    pub fn point_counts(&self, m: usize) -> Vec<BigInt> {
        let qb = BigInt::from(self.q);
        self.power_sums(m)
            .into_iter()
            .enumerate()
            .map(|(k, s)| qb.pow(k as u32 + 1) + 1 - s)
            .collect()
    }

    /// `a_1..a_n`, the numbers of closed points of each degree.
    pub fn closed_points(&self, n_max: usize) -> Result<Vec<BigInt>> {
        let counts = self.point_counts(n_max);
        let mut out = Vec::with_capacity(n_max);
        for n in 1..=n_max {
            let mut acc = BigInt::zero();
            for d in (1..=n).filter(|d| n % d == 0) {
                acc += mobius((n / d) as u64) * &counts[d - 1];
            }
            let (a, rem) = acc.div_rem(&BigInt::from(n));
            if !rem.is_zero() || a.is_negative() {
                return Err(Error::CountsNegative(n));
            }
            out.push(a);
        }
        Ok(out)
    }

    fn numerator<S: Scalar>(&self, x: &S) -> S {
        self.coeffs
            .iter()
            .rev()
            .fold(x.zero_like(), |acc, c| acc * x.clone() + x.like_int(c))
    }

    /// `q^-s` together with the two denominator factors, after the pole guard.
    fn denominators<S: Scalar>(&self, s: &S) -> Result<(S, S, S)> {
        let x = (-(s.clone() * s.ln_of(self.q))).exp();
        let one = s.one_like();
        let f1 = one.clone() - x.clone();
        let f2 = one - x.clone() * s.like_int(&BigInt::from(self.q));
        for (f, name) in [(&f1, "1 - q^-s"), (&f2, "1 - q^(1-s)")] {
            if f.modulus() < POLE_GUARD {
                return Err(Error::NearPole {
                    s: fmt_c(s.to_c64()),
                    factor: name,
                });
            }
        }
        Ok((x, f1, f2))
    }

    pub fn eval<S: Scalar>(&self, s: &S) -> Result<S> {
        let (x, f1, f2) = self.denominators(s)?;
        Ok(self.numerator(&x) / (f1 * f2))
    }

    /// `zeta(s) / zeta(s + 1)`.
    pub fn gk_ratio<S: Scalar>(&self, s: &S) -> Result<S> {
        let num = self.eval(s)?;
        let s1 = s.clone() + s.one_like();
        let (x, f1, f2) = self.denominators(&s1)?;
        let p = self.numerator(&x);
        // a numerator value lost entirely to cancellation counts as a zero
        let scale: f64 = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| c.to_f64().unwrap_or(f64::INFINITY).abs() * x.modulus().powi(k as i32))
            .sum();
        if p.is_zero() || p.modulus() <= 1e-14 * scale {
            return Err(Error::ZeroDenominator(fmt_c(s1.to_c64())));
        }
        Ok(num * f1 * f2 / p)
    }

    /// `Z(T) = P(T) / ((1 - T)(1 - qT))`.
    pub fn z_of_t(&self, t: Complex64) -> Complex64 {
        let p = self.numerator(&t);
        p / ((1.0 - t) * (1.0 - self.q as f64 * t))
    }

    /// `|Z(1/(qT)) - q^(1-g) T^(2-2g) Z(T)|`.
    pub fn functional_equation_residual(&self, t: Complex64) -> f64 {
        let q = self.q as f64;
        let g = self.genus as i32;
        let lhs = self.z_of_t(1.0 / (q * t));
        let rhs = q.powi(1 - g) * t.powi(2 - 2 * g) * self.z_of_t(t);
        (lhs - rhs).norm()
    }

    /// Euler product over closed points of degree at most `n_max`.
    pub fn euler_truncated(&self, s: Complex64, n_max: usize) -> Result<Complex64> {
        if s.re <= 1.0 {
            return Err(Error::DivergentRegion(s.re));
        }
        let a = self.closed_points(n_max)?;
        let lnq = (self.q as f64).ln();
        let mut log = crate::summation::ComplexSum::new();
        for (k, an) in a.iter().enumerate() {
            if an.is_zero() {
                continue;
            }
            let z = (-(k as f64 + 1.0) * s * lnq).exp();
            log.add(-an.to_f64().unwrap_or(f64::INFINITY) * ln_one_minus(z));
        }
        Ok(log.value().exp())
    }

    /// Threshold beyond which `|gk_ratio(s)| <= m` for all real `s`.
    pub fn ratio_bound_s(&self, m: f64) -> Result<RatioBound> {
        if !(m > 1.0) {
            return Err(Error::InvalidArgument(format!("M must exceed 1, got {m}")));
        }
        let q = self.q as f64;
        let sigma0 = 2.0;
        let norm: f64 = self
            .coeffs
            .iter()
            .map(|c| c.to_f64().unwrap_or(f64::INFINITY).abs())
            .sum();
        let k = (norm + q + 2.0) * (1.0 - q.powf(-sigma0)).powi(-2) * 2.0;
        let s = f64::max(sigma0, (k / (m - 1.0)).ln() / q.ln());
        let grid: Vec<f64> = (0..=200).map(|i| s + 0.05 * i as f64 + 1e-9).collect();
        let mut grid_max = 0f64;
        for &sigma in &grid {
            let r = self.gk_ratio(&Complex64::new(sigma, 0.0))?;
            grid_max = grid_max.max(r.norm());
        }
        Ok(RatioBound {
            s,
            k,
            grid_max,
            grid_ok: grid_max <= m,
        })
    }
}

/// Output of [`CurveZeta::ratio_bound_s`]: the analytic threshold `s`, the
/// constant `k` in `|r(σ) - 1| <= k q^-σ`, and the grid verification.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RatioBound {
    pub s: f64,
    pub k: f64,
    pub grid_max: f64,
    pub grid_ok: bool,
}

/// `ln(1 - z)`, by the series when `z` is small.
fn ln_one_minus(z: Complex64) -> Complex64 {
    if z.norm() > 1e-3 {
        return (1.0 - z).ln();
    }
    let mut acc = Complex64::zero();
    let mut pow = z;
    for k in 1..=12 {
        acc -= pow / k as f64;
        pow *= z;
    }
    acc
}

fn fmt_c(z: Complex64) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else {
        format!("{}{:+}i", z.re, z.im)
    }
}

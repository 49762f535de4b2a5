//! Gindikin-Karpelevich factors and shell-by-shell partial sums of the
//! Eisenstein constant term `sum_w h^{w lambda + rho} c(lambda, w)`.
//!
//! Shells are enumerated over `v = w^{-1}`, which has the same length. With
//! `x = sum_i exps_i alpha_i^vee` this gives `h^{w lambda} = q^{<lambda, v x>}`
//! and, for a child `v s_i` of `v`, `c(lambda, (v s_i)^{-1}) = c(lambda, v^{-1})
//! * r(<lambda, v alpha_i^vee>)` with `r` the zeta ratio. Both only need the
//! coroot matrix of `v`.

use num_bigint::BigInt;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cartan::{Gcm, Weight};
use crate::cone::{self, ConeStatus, DEFAULT_DESCENT_CAP};
use crate::error::{Error, Result};
use crate::scalar::{MpComplex, Precision, Scalar};
use crate::summation;
use crate::torus::TorusPoint;
use crate::weyl::{self, EnumOptions, Shell, WeylElt};
use crate::zeta::CurveZeta;

pub const DEFAULT_TOL: f64 = 1e-10;
pub const DEFAULT_K_CONSEC: usize = 3;
/// Number of trailing shell ratios used for the tail estimate.
pub const RATIO_WINDOW: usize = 5;

/// A spectral parameter `lambda` in fundamental-weight coordinates
/// `lambda_i = <lambda, alpha_i^vee>`.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralParam {
    pub lambda: Weight<Complex64>,
    pub godement: bool,
}

impl SpectralParam {
    pub fn new(lambda: Weight<Complex64>) -> Self {
        let godement = cone::godement_check(&lambda);
        SpectralParam { lambda, godement }
    }

    pub fn real(coords: &[f64]) -> Self {
        SpectralParam::new(Weight::real(coords))
    }

    pub fn rank(&self) -> usize {
        self.lambda.rank()
    }

    fn coords_as<S: Scalar>(&self, proto: &S) -> Vec<S> {
        self.lambda
            .coords
            .iter()
            .map(|&z| proto.like_c64(z))
            .collect()
    }
}

fn pair<S: Scalar>(lambda: &[S], coroot: &[BigInt]) -> S {
    let zero = lambda[0].zero_like();
    S::sum_all(
        zero,
        lambda
            .iter()
            .zip(coroot)
            .map(|(l, c)| l.clone() * l.like_int(c)),
    )
}

/// `c(lambda, w)`: product of `zeta(<lambda, a>) / zeta(1 + <lambda, a>)` over
/// the coroots `a` of the inversion set of `w`.
pub fn c_factor<S: Scalar>(
    lambda: &SpectralParam,
    w: &WeylElt,
    z: &CurveZeta,
    g: &Gcm,
    proto: &S,
) -> Result<S> {
    g.check_rank(lambda.rank())?;
    let coords = lambda.coords_as(proto);
    let mut acc = proto.one_like();
    for coroot in weyl::inversion_set(w, g).coroots() {
        acc = acc * z.gk_ratio(&pair(&coords, &coroot.0))?;
    }
    Ok(acc)
}

/// Number of zeta ratios multiplied into `c_factor(.., w, ..)`.
pub fn c_factor_len(w: &WeylElt, g: &Gcm) -> usize {
    weyl::inversion_set(w, g).len()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SumOptions {
    pub depth: usize,
    pub tol: f64,
    pub k_consec: usize,
    pub shell_cap: usize,
    pub precision: Precision,
}

impl SumOptions {
    pub fn new(depth: usize) -> Self {
        SumOptions {
            depth,
            tol: DEFAULT_TOL,
            k_consec: DEFAULT_K_CONSEC,
            shell_cap: weyl::DEFAULT_SHELL_CAP,
            precision: Precision::Double,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum Verdict {
    Converged { tol: f64, k_consec: usize },
    Diverging,
    Undetermined,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PartialSumReport {
    pub depth: usize,
    pub shell_counts: Vec<usize>,
    pub shell_sums: Vec<Complex64>,
    /// Sum of term moduli per shell; may underflow to 0, see `shell_abs_ln`.
    pub shell_abs: Vec<f64>,
    /// Natural log of `shell_abs`, exact even where `shell_abs` underflows.
    pub shell_abs_ln: Vec<f64>,
    /// Running totals after each shell.
    pub cumulative: Vec<Complex64>,
    pub verdict: Verdict,
    /// Geometric extrapolation of the omitted tail; infinite when the last
    /// ratios do not decay.
    pub tail_estimate: f64,
    pub godement: bool,
    pub h_status: ConeStatus,
    pub outside_stated_range: bool,
}

impl PartialSumReport {
    pub fn total(&self) -> Complex64 {
        self.cumulative.last().copied().unwrap_or_default()
    }

    /// `shell_abs[k] / shell_abs[k - 1]` for `k >= 1`, from the logs.
    pub fn shell_ratios(&self) -> Vec<f64> {
        self.shell_abs_ln
            .windows(2)
            .map(|w| log_ratio(w[0], w[1]))
            .collect()
    }
}

fn log_ratio(prev: f64, next: f64) -> f64 {
    if next == f64::NEG_INFINITY {
        0.0
    } else if prev == f64::NEG_INFINITY {
        f64::INFINITY
    } else {
        (next - prev).exp()
    }
}

/// One summand of the constant term, with everything needed to check it
/// against the dominating series.
#[derive(Clone, Debug, PartialEq)]
pub struct Term {
    pub length: usize,
    /// Canonical word of `w` (not of `v = w^{-1}`).
    pub word: Vec<usize>,
    pub value: Complex64,
    /// `ln |h^{w lambda + rho} c(lambda, w)|`.
    pub ln_abs: f64,
    /// `ln |c(lambda, w)|`.
    pub ln_abs_c: f64,
    /// `ln h^{w Re lambda}`.
    pub ln_h_w_re_lambda: f64,
    /// `ln h^rho`.
    pub ln_h_rho: f64,
}

struct Walk<S> {
    shells: Vec<Shell>,
    /// `c(lambda, v^{-1})` per enumerated `v`, shell by shell.
    c: Vec<Vec<S>>,
}

fn walk<S: Scalar>(
    lambda: &SpectralParam,
    z: &CurveZeta,
    g: &Gcm,
    depth: usize,
    shell_cap: usize,
    proto: &S,
) -> Result<Walk<S>> {
    g.check_rank(lambda.rank())?;
    let shells = weyl::enumerate_shells(
        g,
        EnumOptions {
            max_length: depth,
            shell_cap,
        },
    )?;
    let coords = lambda.coords_as(proto);
    let mut c: Vec<Vec<S>> = vec![vec![proto.one_like()]];
    for k in 1..shells.len() {
        let prev = &shells[k - 1];
        let prev_c = &c[k - 1];
        let next: Vec<S> = shells[k]
            .parents
            .par_iter()
            .map(|p| {
                let v = &prev.elements[p.index];
                let arg = pair(&coords, &v.m_coroot().column(p.generator));
                Ok(prev_c[p.index].clone() * z.gk_ratio(&arg)?)
            })
            .collect::<Result<Vec<S>>>()?;
        c.push(next);
    }
    Ok(Walk { shells, c })
}

struct RawTerm<S> {
    value: S,
    ln_abs: f64,
    ln_abs_c: f64,
    ln_h_w_re_lambda: f64,
}

fn terms_of_shell<S: Scalar>(
    lambda: &[S],
    lambda_re: &[f64],
    h: &TorusPoint,
    shell: &Shell,
    c: &[S],
) -> Vec<RawTerm<S>> {
    let proto = &lambda[0];
    let lnq = proto.ln_of(h.q());
    let lnq_f = (h.q() as f64).ln();
    let x: Vec<BigInt> = h.exps().iter().map(|&e| BigInt::from(e)).collect();
    let rho_exp: i64 = h.exps().iter().sum();
    shell
        .elements
        .par_iter()
        .zip(c.par_iter())
        .map(|(v, cv)| {
            let vx = v.m_coroot().apply(&x);
            let e = pair(lambda, &vx) + proto.like_int(&BigInt::from(rho_exp));
            let e_re_lambda: f64 = summation::sum_real(
                lambda_re
                    .iter()
                    .zip(&vx)
                    .map(|(l, c)| l * num_traits::ToPrimitive::to_f64(c).unwrap_or(f64::NAN)),
            );
            let ln_abs_c = cv.ln_modulus();
            let ln_h = lnq_f * e.to_c64().re;
            let value = if ln_h + ln_abs_c > proto.ln_max() {
                // beyond the exponent range: keep the direction, saturate
                let theta = lnq_f * e.to_c64().im + cv.to_c64().arg();
                proto.like_c64(Complex64::new(saturate(theta.cos()), saturate(theta.sin())))
            } else {
                (e * lnq.clone()).exp() * cv.clone()
            };
            RawTerm {
                value,
                ln_abs: ln_h + ln_abs_c,
                ln_abs_c,
                ln_h_w_re_lambda: lnq_f * e_re_lambda,
            }
        })
        .collect()
}

fn saturate(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        f64::INFINITY.copysign(x)
    }
}

/// Partial sums of the constant term by length shell.
pub fn constant_term(
    lambda: &SpectralParam,
    h: &TorusPoint,
    z: &CurveZeta,
    g: &Gcm,
    opts: &SumOptions,
) -> Result<PartialSumReport> {
    match opts.precision {
        Precision::Double => constant_term_with(lambda, h, z, g, opts, &Complex64::new(0.0, 0.0)),
        Precision::Bits(b) => constant_term_with(
            lambda,
            h,
            z,
            g,
            opts,
            &MpComplex::new(Complex64::new(0.0, 0.0), b),
        ),
    }
}

fn check_inputs(lambda: &SpectralParam, h: &TorusPoint, z: &CurveZeta, g: &Gcm) -> Result<()> {
    g.check_rank(lambda.rank())?;
    g.check_rank(h.rank())?;
    if h.q() != z.q() {
        return Err(Error::InvalidArgument(format!(
            "torus point over F_{} but curve over F_{}",
            h.q(),
            z.q()
        )));
    }
    if !lambda.lambda.is_finite() {
        return Err(Error::InvalidArgument(
            "lambda has non-finite entries".into(),
        ));
    }
    Ok(())
}

pub fn constant_term_with<S: Scalar>(
    lambda: &SpectralParam,
    h: &TorusPoint,
    z: &CurveZeta,
    g: &Gcm,
    opts: &SumOptions,
    proto: &S,
) -> Result<PartialSumReport> {
    check_inputs(lambda, h, z, g)?;
    if opts.k_consec == 0 || !(opts.tol > 0.0) {
        return Err(Error::InvalidArgument(
            "need k_consec >= 1 and tol > 0".into(),
        ));
    }
    let h_status = h.in_h_titscone(g, DEFAULT_DESCENT_CAP)?.status;
    let walk = walk(lambda, z, g, opts.depth, opts.shell_cap, proto)?;
    let coords = lambda.coords_as(proto);
    let re: Vec<f64> = lambda.lambda.coords.iter().map(|z| z.re).collect();

    let mut shell_counts = Vec::new();
    let mut shell_sums = Vec::new();
    let mut shell_abs = Vec::new();
    let mut shell_abs_ln = Vec::new();
    let mut cumulative = Vec::new();
    let mut running = proto.zero_like();
    for (shell, c) in walk.shells.iter().zip(&walk.c) {
        let terms = terms_of_shell(&coords, &re, h, shell, c);
        let sum = S::sum_all(proto.zero_like(), terms.iter().map(|t| t.value.clone()));
        let ln_abs = summation::log_sum_exp(terms.iter().map(|t| t.ln_abs));
        // direct moduli where doubles can hold them, the logs elsewhere
        let abs = summation::sum_real(terms.iter().map(|t| {
            if t.ln_abs > -700.0 {
                t.value.to_c64().norm()
            } else {
                t.ln_abs.exp()
            }
        }));
        running = running + sum.clone();
        shell_counts.push(shell.len());
        shell_sums.push(sum.to_c64());
        shell_abs.push(abs);
        shell_abs_ln.push(ln_abs);
        cumulative.push(running.to_c64());
    }
    let (verdict, tail_estimate) = judge(&shell_counts, &shell_abs_ln, opts);
    let godement = lambda.godement;
    let h_ok = matches!(
        h_status,
        ConeStatus::Dominant | ConeStatus::InteriorTitsCone
    );
    Ok(PartialSumReport {
        depth: opts.depth,
        shell_counts,
        shell_sums,
        shell_abs,
        shell_abs_ln,
        cumulative,
        verdict,
        tail_estimate,
        godement,
        h_status,
        outside_stated_range: !(godement && h_ok),
    })
}

fn judge(counts: &[usize], ln_abs: &[f64], opts: &SumOptions) -> (Verdict, f64) {
    let converged = Verdict::Converged {
        tol: opts.tol,
        k_consec: opts.k_consec,
    };
    // the group is finite and was exhausted: the sum is exact
    if counts.last() == Some(&0) {
        return (converged, 0.0);
    }
    let ln_tol = opts.tol.ln();
    let last = ln_abs.len() - 1;
    let ratios: Vec<f64> = ln_abs.windows(2).map(|w| log_ratio(w[0], w[1])).collect();
    let window = &ratios[ratios.len().saturating_sub(RATIO_WINDOW)..];
    let r = window.iter().copied().fold(f64::NAN, f64::max);
    let tail = if window.is_empty() || !(r < 1.0) {
        f64::INFINITY
    } else {
        (ln_abs[last] + r.ln() - (1.0 - r).ln()).exp()
    };
    let small = ln_abs.len() >= opts.k_consec
        && ln_abs[ln_abs.len() - opts.k_consec..]
            .iter()
            .all(|&l| l < ln_tol);
    if small && tail < opts.tol {
        return (converged, tail);
    }
    let growing = window.len() == RATIO_WINDOW && window.iter().all(|&x| x >= 1.0);
    if growing && ln_abs[last] >= ln_tol {
        return (Verdict::Diverging, tail);
    }
    (Verdict::Undetermined, tail)
}

/// Every term up to length `depth` in enumeration order, double precision.
pub fn constant_term_terms(
    lambda: &SpectralParam,
    h: &TorusPoint,
    z: &CurveZeta,
    g: &Gcm,
    depth: usize,
) -> Result<Vec<Term>> {
    check_inputs(lambda, h, z, g)?;
    let proto = Complex64::new(0.0, 0.0);
    let walk = walk(lambda, z, g, depth, weyl::DEFAULT_SHELL_CAP, &proto)?;
    let coords = lambda.coords_as(&proto);
    let re: Vec<f64> = lambda.lambda.coords.iter().map(|z| z.re).collect();
    let ln_h_rho = (h.q() as f64).ln() * h.exps().iter().sum::<i64>() as f64;
    let mut out = Vec::new();
    for (shell, c) in walk.shells.iter().zip(&walk.c) {
        let terms = terms_of_shell(&coords, &re, h, shell, c);
        for (v, t) in shell.elements.iter().zip(terms) {
            out.push(Term {
                length: shell.length,
                word: v.inverse(g).word().to_vec(),
                value: t.value,
                ln_abs: t.ln_abs,
                ln_abs_c: t.ln_abs_c,
                ln_h_w_re_lambda: t.ln_h_w_re_lambda,
                ln_h_rho,
            });
        }
    }
    Ok(out)
}

/// Shell sums of `M^{l(w)} h^{w Re lambda}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DominatingSeries {
    pub m: f64,
    pub shell_sums: Vec<f64>,
    pub shell_sums_ln: Vec<f64>,
}

pub fn dominating_series(
    lambda: &SpectralParam,
    h: &TorusPoint,
    m: f64,
    g: &Gcm,
    depth: usize,
) -> Result<DominatingSeries> {
    if !(m > 1.0) {
        return Err(Error::InvalidArgument(format!("M must exceed 1, got {m}")));
    }
    g.check_rank(lambda.rank())?;
    g.check_rank(h.rank())?;
    let shells = weyl::enumerate_shells(g, EnumOptions::new(depth))?;
    let lnq = (h.q() as f64).ln();
    let re: Vec<f64> = lambda.lambda.coords.iter().map(|z| z.re).collect();
    let x: Vec<BigInt> = h.exps().iter().map(|&e| BigInt::from(e)).collect();
    let mut shell_sums_ln = Vec::new();
    for shell in &shells {
        let logs: Vec<f64> = shell
            .elements
            .par_iter()
            .map(|v| {
                let vx = v.m_coroot().apply(&x);
                let e = summation::sum_real(
                    re.iter()
                        .zip(&vx)
                        .map(|(l, c)| l * num_traits::ToPrimitive::to_f64(c).unwrap_or(f64::NAN)),
                );
                shell.length as f64 * m.ln() + lnq * e
            })
            .collect();
        shell_sums_ln.push(summation::log_sum_exp(logs));
    }
    Ok(DominatingSeries {
        m,
        shell_sums: shell_sums_ln.iter().map(|l| l.exp()).collect(),
        shell_sums_ln,
    })
}

/// `max |c(lambda, w)| / M^{l(w)}` over the enumerated elements, with the
/// running maximum after each shell so a plateau can be read off.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundConstant {
    pub m: f64,
    pub value: f64,
    pub per_shell: Vec<f64>,
}

pub fn bound_constant(
    lambda: &SpectralParam,
    z: &CurveZeta,
    g: &Gcm,
    depth: usize,
    m: f64,
) -> Result<BoundConstant> {
    if !(m > 1.0) {
        return Err(Error::InvalidArgument(format!("M must exceed 1, got {m}")));
    }
    if !lambda.godement {
        return Err(Error::InvalidArgument(
            "bound constant needs Re lambda_i > 1 for all i".into(),
        ));
    }
    let proto = Complex64::new(0.0, 0.0);
    let walk = walk(lambda, z, g, depth, weyl::DEFAULT_SHELL_CAP, &proto)?;
    let mut best = f64::NEG_INFINITY;
    let mut per_shell = Vec::new();
    for (k, c) in walk.c.iter().enumerate() {
        for cv in c {
            best = best.max(cv.ln_modulus() - k as f64 * m.ln());
        }
        per_shell.push(best.exp());
    }
    Ok(BoundConstant {
        m,
        value: best.exp(),
        per_shell,
    })
}

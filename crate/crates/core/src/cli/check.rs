//! The deterministic invariant suite behind `kmeis check`.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::Job;
use crate::cartan::{self, Gcm, Weight};
use crate::cone::{self, ConeStatus, CorootSpacePoint, Rank2Region};
use crate::eisenstein::{self, SpectralParam, SumOptions, Verdict};
use crate::error::{Error, Result};
use crate::fixtures;
use crate::torus::{self, TorusPoint};
use crate::weyl::{self, EnumOptions, WeylElt};
use crate::zeta::CurveZeta;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub command: String,
    pub config: serde_json::Value,
    pub checks: Vec<CheckResult>,
    pub passed: bool,
}

const SEED: u64 = 0x006b_6d65_6973;

type CheckFn = fn() -> Result<std::result::Result<String, String>>;

pub fn run_check(job: &Job) -> CheckReport {
    let suite: [(&str, CheckFn); 10] = [
        ("cartan_fixtures", cartan_fixtures),
        ("weyl_shells_bruteforce", weyl_shells_bruteforce),
        ("inversion_set_law", inversion_set_law),
        ("cone_consistency", cone_consistency),
        ("zeta_fixtures", zeta_fixtures),
        ("torus_characters", torus_characters),
        ("constant_term_rank1", constant_term_rank1),
        ("constant_term_hyperbolic", constant_term_hyperbolic),
        ("domination", domination),
        ("pole_at_rho", pole_at_rho),
    ];
    let checks: Vec<CheckResult> = suite
        .iter()
        .map(|(name, f)| {
            let (passed, detail) = match f() {
                Ok(Ok(d)) => (true, d),
                Ok(Err(d)) => (false, d),
                Err(e) => (false, format!("error {}: {e}", e.code())),
            };
            CheckResult {
                name: name.to_string(),
                passed,
                detail,
            }
        })
        .collect();
    CheckReport {
        command: "check".into(),
        config: job.config_json(),
        passed: checks.iter().all(|c| c.passed),
        checks,
    }
}

fn verdict(ok: bool, detail: String) -> Result<std::result::Result<String, String>> {
    Ok(if ok { Ok(detail) } else { Err(detail) })
}

fn cartan_fixtures() -> Result<std::result::Result<String, String>> {
    let ok = [
        fixtures::rank1_rows(),
        fixtures::hyperbolic_rows(),
        fixtures::rank3_rows(),
    ]
    .into_iter()
    .all(|r| Gcm::new(r).is_ok())
        && Gcm::new(vec![vec![2, -2], vec![-2, 2]]) == Err(Error::Singular)
        && cartan::symmetrizer(&[vec![2, -1], vec![-2, 2]])?
            == [BigInt::from(2), BigInt::from(1)].map(num_rational::BigRational::from_integer);
    verdict(
        ok,
        "fixtures valid, affine singular, symmetrizer [2,1]".into(),
    )
}

/// Element of `W` as an explicit root-action matrix, row-major.
fn word_matrix(rows: &[Vec<i64>], word: &[usize]) -> Vec<i64> {
    let n = rows.len();
    let mut m: Vec<i64> = (0..n * n).map(|k| i64::from(k / n == k % n)).collect();
    for &i in word {
        // right-multiply by s_i: column j of s_i is e_j - a_ij e_i
        let mut next = m.clone();
        for r in 0..n {
            for j in 0..n {
                let s_col_j = |k: usize| i64::from(k == j) - if k == i { rows[i][j] } else { 0 };
                next[r * n + j] = (0..n).map(|k| m[r * n + k] * s_col_j(k)).sum();
            }
        }
        m = next;
    }
    m
}

/// Shell sizes by exhaustive word enumeration: an element has length `k`
/// when it first appears among words of length `k`.
fn bruteforce_shells(rows: &[Vec<i64>], max_len: usize) -> Vec<usize> {
    let n = rows.len();
    let mut seen: HashSet<Vec<i64>> = HashSet::new();
    let mut sizes = Vec::new();
    let mut words: Vec<Vec<usize>> = vec![vec![]];
    for _ in 0..=max_len {
        let mut fresh = 0;
        for w in &words {
            if seen.insert(word_matrix(rows, w)) {
                fresh += 1;
            }
        }
        sizes.push(fresh);
        words = words
            .iter()
            .flat_map(|w| {
                (0..n).map(move |i| {
                    let mut v = w.clone();
                    v.push(i);
                    v
                })
            })
            .collect();
    }
    sizes
}

fn weyl_shells_bruteforce() -> Result<std::result::Result<String, String>> {
    let mut detail = Vec::new();
    let mut ok = true;
    for (rows, len) in [
        (fixtures::rank1_rows(), 4),
        (fixtures::hyperbolic_rows(), 9),
        (fixtures::rank3_rows(), 6),
    ] {
        let g = Gcm::new(rows.clone())?;
        let bfs: Vec<usize> = weyl::enumerate_shells(&g, EnumOptions::new(len))?
            .iter()
            .map(|s| s.len())
            .collect();
        let oracle = bruteforce_shells(&rows, len);
        ok &= bfs == oracle;
        detail.push(format!("{bfs:?}"));
    }
    verdict(ok, detail.join(" "))
}

fn inversion_set_law() -> Result<std::result::Result<String, String>> {
    let mut checked = 0usize;
    for (g, len) in [
        (fixtures::rank1(), 10),
        (fixtures::hyperbolic(), 10),
        (fixtures::rank3(), 8),
    ] {
        for shell in weyl::enumerate_shells(&g, EnumOptions::new(len))? {
            for w in &shell.elements {
                let inv = weyl::inversion_set(w, &g);
                if inv.len() != w.length() || inv.roots().any(|r| !r.is_positive()) {
                    return verdict(false, format!("cardinality fails at {:?}", w.word()));
                }
                let winv = w.inverse(&g);
                for i in 0..g.rank() {
                    let image = winv.apply_root(&cartan::RootVec::simple(g.rank(), i));
                    if !image.is_positive() {
                        continue;
                    }
                    let mut word = vec![i];
                    word.extend_from_slice(w.word());
                    let siw = WeylElt::from_word(&g, &word)?;
                    let mut want: Vec<Vec<BigInt>> = inv.roots().map(|r| r.0.clone()).collect();
                    want.push(image.0.clone());
                    want.sort();
                    let mut got: Vec<Vec<BigInt>> = weyl::inversion_set(&siw, &g)
                        .roots()
                        .map(|r| r.0.clone())
                        .collect();
                    got.sort();
                    if got != want || siw.length() != w.length() + 1 {
                        return verdict(false, format!("extension fails at s_{i} {:?}", w.word()));
                    }
                    checked += 1;
                }
            }
        }
    }
    verdict(true, format!("{checked} extensions"))
}

fn random_point(rng: &mut ChaCha8Rng) -> CorootSpacePoint {
    let coords = (0..2)
        .map(|_| {
            num_rational::BigRational::new(
                BigInt::from(rng.gen_range(-20i64..=20)),
                BigInt::from(rng.gen_range(1i64..=6)),
            )
        })
        .collect();
    CorootSpacePoint::new(coords)
}

fn cone_consistency() -> Result<std::result::Result<String, String>> {
    let g = fixtures::hyperbolic();
    let x = CorootSpacePoint::from_integers(&[-1, -1]);
    if cone::descend(&g, &x, 100)?.status != ConeStatus::Dominant {
        return verdict(false, "(-1,-1) not dominant".into());
    }
    let origin = cone::descend(&g, &CorootSpacePoint::from_integers(&[0, 0]), 100)?;
    if origin.status != ConeStatus::BoundaryOrbit || !origin.is_origin {
        return verdict(false, "origin not flagged as boundary".into());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let (mut agree, mut undetermined) = (0, 0);
    for _ in 0..50 {
        let x = random_point(&mut rng);
        let cert = cone::rank2_certificate(&g, &x)?;
        let status = cone::descend(&g, &x, 200)?.status;
        let matches = match status {
            ConeStatus::Undetermined => {
                undetermined += 1;
                continue;
            }
            ConeStatus::Dominant => cert == Rank2Region::Inside,
            ConeStatus::InteriorTitsCone => cert == Rank2Region::Inside,
            ConeStatus::BoundaryOrbit => cert == Rank2Region::Boundary,
            ConeStatus::Outside => cert == Rank2Region::Outside,
        };
        if !matches {
            return verdict(false, format!("disagreement at {x}"));
        }
        agree += 1;
    }
    verdict(true, format!("{agree} agree, {undetermined} undetermined"))
}

fn zeta_fixtures() -> Result<std::result::Result<String, String>> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 1);
    let mut worst_fe = 0f64;
    let mut worst_euler = 0f64;
    let mut worst_limit = 0f64;
    for z in [fixtures::projective_line(), fixtures::elliptic()] {
        for _ in 0..20 {
            let t = Complex64::from_polar(
                rng.gen_range(0.1..0.5),
                rng.gen_range(0.0..std::f64::consts::TAU),
            );
            worst_fe = worst_fe.max(z.functional_equation_residual(t));
        }
        let s = Complex64::new(3.0, 0.0);
        worst_euler = worst_euler.max((z.euler_truncated(s, 40)? - z.eval(&s)?).norm());
        worst_limit = worst_limit.max((z.gk_ratio(&Complex64::new(20.0, 0.0))? - 1.0).norm());
    }
    let counts_ok = CurveZeta::from_point_counts(2, &[5], true)?.coefficients()
        == [1, 2, 2].map(BigInt::from)
        && CurveZeta::from_point_counts(4, &[10], true).is_err();
    let ok = worst_fe < 1e-10 && worst_euler < 1e-8 && worst_limit < 1e-4 && counts_ok;
    verdict(
        ok,
        format!("fe {worst_fe:e}, euler {worst_euler:e}, |r(20)-1| {worst_limit:e}"),
    )
}

fn torus_characters() -> Result<std::result::Result<String, String>> {
    let g = fixtures::hyperbolic();
    let h = TorusPoint::new(2, vec![-1, -1])?;
    let rho = Weight::real(&[1.0, 1.0]);
    let ok = (h.h_pow(&rho)? - 0.25).norm() < 1e-15
        && h.in_hc(&g)?
        && !TorusPoint::new(2, vec![1, 1])?.in_hc(&g)?
        && !TorusPoint::new(2, vec![0, 0])?.in_hc(&g)?
        && torus::units_nullity(&fixtures::rank3_rows(), &[1, 1, 1])? == 0
        && torus::units_nullity(&fixtures::hyperbolic_rows(), &[1, 1])? == 0;
    verdict(ok, "h_pow, in_hc and units lemma".into())
}

fn constant_term_rank1() -> Result<std::result::Result<String, String>> {
    let r = eisenstein::constant_term(
        &SpectralParam::real(&[2.0]),
        &TorusPoint::new(2, vec![1])?,
        &fixtures::projective_line(),
        &fixtures::rank1(),
        &SumOptions::new(2),
    )?;
    let err = (r.total() - 8.875).norm();
    verdict(err < 1e-12, format!("error {err:e}"))
}

fn hyperbolic_job() -> Result<(SpectralParam, TorusPoint, CurveZeta, Gcm)> {
    Ok((
        SpectralParam::real(&[3.0, 3.0]),
        TorusPoint::new(2, vec![-1, -1])?,
        fixtures::projective_line(),
        fixtures::hyperbolic(),
    ))
}

fn constant_term_hyperbolic() -> Result<std::result::Result<String, String>> {
    let (lam, h, z, g) = hyperbolic_job()?;
    let r = eisenstein::constant_term(&lam, &h, &z, &g, &SumOptions::new(20))?;
    let converged = matches!(r.verdict, Verdict::Converged { .. });
    let leading = (r.shell_sums[0] - 2f64.powi(-8)).norm() < 1e-18;
    let decaying = r.shell_ratios()[9..].iter().all(|&x| x < 1.0);
    verdict(
        converged && leading && decaying && !r.outside_stated_range,
        format!("total {:e}, verdict {:?}", r.total().re, r.verdict),
    )
}

fn domination() -> Result<std::result::Result<String, String>> {
    let (lam, h, z, g) = hyperbolic_job()?;
    let m = 1.5;
    let c = eisenstein::bound_constant(&lam, &z, &g, 15, m)?;
    let terms = eisenstein::constant_term_terms(&lam, &h, &z, &g, 15)?;
    for t in &terms {
        let bound = c.value.ln() + t.length as f64 * m.ln() + t.ln_h_w_re_lambda + t.ln_h_rho;
        if t.ln_abs > bound + 1e-12 * bound.abs().max(1.0) {
            return verdict(false, format!("term {:?} exceeds bound", t.word));
        }
    }
    verdict(
        true,
        format!("C = {:e} over {} terms", c.value, terms.len()),
    )
}

fn pole_at_rho() -> Result<std::result::Result<String, String>> {
    let g = fixtures::hyperbolic();
    let z = fixtures::projective_line();
    let rho = SpectralParam::real(&[1.0, 1.0]);
    let zero = Complex64::new(0.0, 0.0);
    let mut count = 0;
    for shell in weyl::enumerate_shells(&g, EnumOptions::new(6))?
        .iter()
        .skip(1)
    {
        for w in &shell.elements {
            match eisenstein::c_factor(&rho, w, &z, &g, &zero) {
                Err(Error::NearPole { .. }) => count += 1,
                _ => return verdict(false, format!("no pole at {:?}", w.word())),
            }
        }
    }
    let ok = !cone::godement_check(&Weight::real(&[1.0, 1.0]))
        && cone::godement_check(&Weight::real(&[2.0, 2.0]));
    verdict(ok, format!("{count} elements hit the pole"))
}

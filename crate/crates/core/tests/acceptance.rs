//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails.

use std::collections::BTreeSet;
use std::process::Command;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use kmeis::cartan::{Gcm, RootVec};
use kmeis::cone::{self, ConeStatus, CorootSpacePoint, Rank2Region, DEFAULT_DESCENT_CAP};
use kmeis::eisenstein::{self, SpectralParam, SumOptions, Verdict};
use kmeis::fixtures;
use kmeis::scalar::Precision;
use kmeis::torus::{self, TorusPoint};
use kmeis::weyl::{self, EnumOptions, WeylElt};
use kmeis::Error;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn lib<T>(r: kmeis::Result<T>) -> Result<T, String> {
    r.map_err(|e| format!("unexpected error {}: {e}", e.code()))
}

fn sorted_roots<'a>(it: impl Iterator<Item = &'a RootVec>) -> BTreeSet<Vec<BigInt>> {
    it.map(|r| r.0.clone()).collect()
}

fn inversion_set_law() -> Outcome {
    let start = Instant::now();
    let mut extensions = 0usize;
    let mut elements = 0usize;
    for (g, len) in [
        (fixtures::rank1(), 10),
        (fixtures::hyperbolic(), 10),
        (fixtures::rank3(), 8),
    ] {
        for shell in lib(weyl::enumerate_shells(&g, EnumOptions::new(len)))? {
            for w in &shell.elements {
                elements += 1;
                let phi = weyl::inversion_set(w, &g);
                ensure(
                    phi.len() == w.length() && w.length() == shell.length,
                    format!("|Phi_w| != l(w) at {:?}", w.word()),
                )?;
                let winv = w.inverse(&g);
                for i in 0..g.rank() {
                    let new_root = winv.apply_root(&RootVec::simple(g.rank(), i));
                    let mut word = vec![i];
                    word.extend_from_slice(w.word());
                    match WeylElt::from_word(&g, &word) {
                        Ok(siw) => {
                            ensure(new_root.is_positive(), "length grew with negative root")?;
                            let mut want = sorted_roots(phi.roots());
                            ensure(want.insert(new_root.0.clone()), "root already present")?;
                            let got = sorted_roots(weyl::inversion_set(&siw, &g).roots());
                            ensure(got == want, format!("law fails for s_{i} {:?}", w.word()))?;
                            extensions += 1;
                        }
                        Err(Error::NotReduced(_)) => {
                            ensure(new_root.is_negative(), "length dropped with positive root")?;
                        }
                        Err(e) => return Err(e.to_string()),
                    }
                }
            }
        }
    }
    let t = start.elapsed();
    ensure(t < Duration::from_secs(10), format!("took {t:?}"))?;
    Ok(format!(
        "{elements} elements, {extensions} extensions, {t:.2?}"
    ))
}

fn zeta_correctness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut fe = 0f64;
    let mut euler = 0f64;
    let mut limit = 0f64;
    for z in [fixtures::projective_line(), fixtures::elliptic()] {
        for _ in 0..100 {
            let t = Complex64::from_polar(
                rng.gen_range(0.1..0.5),
                rng.gen_range(0.0..std::f64::consts::TAU),
            );
            fe = fe.max(z.functional_equation_residual(t));
        }
        let s = Complex64::new(3.0, 0.0);
        euler = euler.max((lib(z.euler_truncated(s, 40))? - lib(z.eval(&s))?).norm());
        limit = limit.max((lib(z.gk_ratio(&Complex64::new(20.0, 0.0)))? - 1.0).norm());
    }
    ensure(fe < 1e-10, format!("functional equation residual {fe:e}"))?;
    ensure(euler < 1e-8, format!("Euler product residual {euler:e}"))?;
    ensure(limit < 1e-4, format!("|r(20) - 1| = {limit:e}"))?;
    Ok(format!(
        "fe {fe:.1e}, euler {euler:.1e}, |r(20)-1| {limit:.1e}"
    ))
}

fn closed_form_rank1() -> Outcome {
    let r = lib(eisenstein::constant_term(
        &SpectralParam::real(&[2.0]),
        &lib(TorusPoint::new(2, vec![1]))?,
        &fixtures::projective_line(),
        &fixtures::rank1(),
        &SumOptions::new(5),
    ))?;
    let err = (r.total() - 8.875).norm();
    ensure(err < 1e-12, format!("value {} (error {err:e})", r.total()))?;
    Ok(format!("value {}, error {err:.1e}", r.total().re))
}

fn convergence_inside() -> Outcome {
    let start = Instant::now();
    let g = fixtures::hyperbolic();
    let z = fixtures::projective_line();
    let lam = SpectralParam::real(&[3.0, 3.0]);
    let h = lib(TorusPoint::new(2, vec![-1, -1]))?;
    ensure(
        lam.godement && lib(h.in_hc(&g))?,
        "fixture outside the stated range",
    )?;
    let r = lib(eisenstein::constant_term(
        &lam,
        &h,
        &z,
        &g,
        &SumOptions::new(20),
    ))?;
    ensure(
        r.verdict
            == Verdict::Converged {
                tol: 1e-10,
                k_consec: 3,
            },
        format!("verdict {:?}", r.verdict),
    )?;
    let ratios = r.shell_ratios();
    // ratio k is shell k over shell k - 1
    ensure(
        ratios[9..20].iter().all(|&x| x < 1.0),
        "shell_abs ratio >= 1 on shells 10-20",
    )?;
    let mut opts = SumOptions::new(20);
    opts.precision = Precision::Bits(256);
    let a = lib(eisenstein::constant_term(&lam, &h, &z, &g, &opts))?.total();
    opts.depth = 30;
    let b = lib(eisenstein::constant_term(&lam, &h, &z, &g, &opts))?.total();
    let diff = (a - b).norm();
    ensure(diff < 1e-10, format!("depth 20 vs 30 differ by {diff:e}"))?;
    let t = start.elapsed();
    ensure(t < Duration::from_secs(30), format!("took {t:?}"))?;
    Ok(format!(
        "total {:.15e}, |E20 - E30| = {diff:e}, {t:.2?}",
        a.re
    ))
}

fn domination() -> Outcome {
    let g = fixtures::hyperbolic();
    let z = fixtures::projective_line();
    let lam = SpectralParam::real(&[3.0, 3.0]);
    let h = lib(TorusPoint::new(2, vec![-1, -1]))?;
    let m = 1.5;
    let c = lib(eisenstein::bound_constant(&lam, &z, &g, 15, m))?;
    let terms = lib(eisenstein::constant_term_terms(&lam, &h, &z, &g, 15))?;
    // compared in logs; the maximizing term meets the bound with equality,
    // so allow one rounding unit relative to the magnitude of the logs
    for t in &terms {
        let bound = c.value.ln() + t.length as f64 * m.ln() + t.ln_h_w_re_lambda + t.ln_h_rho;
        ensure(
            t.ln_abs <= bound + 1e-12 * bound.abs().max(1.0),
            format!("term {:?}: ln|term| {} > {}", t.word, t.ln_abs, bound),
        )?;
    }
    Ok(format!("C = {}, {} terms", c.value, terms.len()))
}

fn boundary_behavior() -> Outcome {
    let g = fixtures::hyperbolic();
    let z = fixtures::projective_line();
    let rho = SpectralParam::real(&[1.0, 1.0]);
    let zero = Complex64::new(0.0, 0.0);
    let mut hits = 0;
    for shell in lib(weyl::enumerate_shells(&g, EnumOptions::new(10)))? {
        for w in &shell.elements {
            let r = eisenstein::c_factor(&rho, w, &z, &g, &zero);
            if w.is_identity() {
                ensure(r == Ok(Complex64::new(1.0, 0.0)), "c(rho, e) != 1")?;
            } else {
                ensure(
                    matches!(r, Err(Error::NearPole { .. })),
                    format!("no pole for {:?}", w.word()),
                )?;
                hits += 1;
            }
        }
    }
    let h = lib(TorusPoint::new(2, vec![-1, -1]))?;
    ensure(
        matches!(
            eisenstein::constant_term(&rho, &h, &z, &g, &SumOptions::new(5)),
            Err(Error::NearPole { .. })
        ),
        "constant term at rho did not raise NearPole",
    )?;
    ensure(!cone::godement_check(&g.rho()), "godement(rho) true")?;
    ensure(
        cone::godement_check(&g.rho().scale(2.0)),
        "godement(2 rho) false",
    )?;
    Ok(format!(
        "NearPole for all {hits} elements w != e up to length 10"
    ))
}

fn random_gcm(rng: &mut ChaCha8Rng) -> Vec<Vec<i64>> {
    loop {
        let n = rng.gen_range(1..=4);
        let mut a = vec![vec![0i64; n]; n];
        for i in 0..n {
            a[i][i] = 2;
            for j in i + 1..n {
                if rng.gen_bool(0.6) {
                    a[i][j] = -rng.gen_range(1..=3);
                    a[j][i] = -rng.gen_range(1..=3);
                }
            }
        }
        if Gcm::new(a.clone()).is_ok() {
            return a;
        }
    }
}

fn units_lemma() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..50 {
        let a = random_gcm(&mut rng);
        let m: Vec<i64> = (0..a.len()).map(|_| rng.gen_range(1..=9)).collect();
        let k = lib(torus::units_nullity(&a, &m))?;
        ensure(k == 0, format!("nullity {k} for {a:?}, m = {m:?}"))?;
    }
    let affine = [vec![2, -2], vec![-2, 2]];
    let k = lib(torus::units_nullity(&affine, &[1, 1]))?;
    ensure(
        k == 1,
        format!(
            "affine [[2,-2],[-2,2]], m = (1,1): expected 1, got {k}; (1,1) spans the \
             kernel of the subtracted system but violates sum m_i d_i = 0"
        ),
    )?;
    Ok("50 random GCMs give 0, affine gives 1".into())
}

fn random_element(g: &Gcm, rng: &mut ChaCha8Rng) -> WeylElt {
    let len = rng.gen_range(0..=8);
    (0..len).fold(WeylElt::identity(g), |acc, _| {
        let i = rng.gen_range(0..g.rank());
        acc.compose(g, &WeylElt::from_word(g, &[i]).expect("generator"))
    })
}

fn cone_consistency() -> Outcome {
    let g = fixtures::hyperbolic();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let (mut determined, mut transports) = (0, 0);
    for _ in 0..200 {
        let x = CorootSpacePoint::new(
            (0..2)
                .map(|_| {
                    BigRational::new(
                        BigInt::from(rng.gen_range(-30i64..=30)),
                        BigInt::from(rng.gen_range(1i64..=7)),
                    )
                })
                .collect(),
        );
        let cert = lib(cone::rank2_certificate(&g, &x))?;
        let status = lib(cone::descend(&g, &x, DEFAULT_DESCENT_CAP))?.status;
        let expected = match status {
            ConeStatus::Dominant | ConeStatus::InteriorTitsCone => Some(Rank2Region::Inside),
            ConeStatus::BoundaryOrbit => Some(Rank2Region::Boundary),
            ConeStatus::Outside => Some(Rank2Region::Outside),
            ConeStatus::Undetermined => None,
        };
        if let Some(e) = expected {
            ensure(
                cert == e,
                format!("{x}: descend {status:?}, certificate {cert:?}"),
            )?;
            determined += 1;
        }
        for _ in 0..10 {
            let w = random_element(&g, &mut rng);
            let y = x.transport(&w);
            ensure(
                lib(cone::rank2_certificate(&g, &y))? == cert,
                format!("certificate not W-stable at {x}"),
            )?;
            if expected.is_some() {
                let s = lib(cone::descend(&g, &y, DEFAULT_DESCENT_CAP))?.status;
                ensure(s == status, format!("descend not W-stable at {x}: {s:?}"))?;
            }
            transports += 1;
        }
    }
    Ok(format!(
        "{determined}/200 determined by descent, {transports} transports"
    ))
}

fn run_bin(args: &[&str]) -> Result<(Vec<u8>, i32), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_kmeis"))
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    Ok((out.stdout, out.status.code().unwrap_or(-1)))
}

fn determinism() -> Outcome {
    let (a, ca) = run_bin(&["check"])?;
    let (b, cb) = run_bin(&["check"])?;
    ensure(ca == 0 && cb == 0, format!("check exit codes {ca}, {cb}"))?;
    ensure(a == b, "check reports differ")?;
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut files = Vec::new();
    for threads in ["1", "8"] {
        let path = dir.path().join(format!("shells_{threads}.json"));
        let p = path.to_str().unwrap().to_string();
        for (cmd, extra) in [("weyl", vec!["--words"]), ("cterm", vec![])] {
            let mut args = vec![cmd, "--depth", "14", "--threads", threads, "--out", &p];
            args.extend(extra);
            let (_, code) = run_bin(&args)?;
            ensure(code == 0, format!("{cmd} exited {code}"))?;
            files.push((cmd, std::fs::read(&path).map_err(|e| e.to_string())?));
        }
    }
    ensure(
        files[0].1 == files[2].1,
        "weyl output differs between 1 and 8 threads",
    )?;
    ensure(
        files[1].1 == files[3].1,
        "cterm output differs between 1 and 8 threads",
    )?;
    Ok(format!(
        "check report {} bytes, shell files identical",
        a.len()
    ))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("inversion-set law", inversion_set_law),
        ("zeta correctness", zeta_correctness),
        ("rank-1 closed form", closed_form_rank1),
        ("convergence inside the range", convergence_inside),
        ("domination", domination),
        ("boundary behavior", boundary_behavior),
        ("units-lemma nullity", units_lemma),
        ("cone consistency", cone_consistency),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("criterion {}: PASS  {name}: {detail}", k + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {detail}", k + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}

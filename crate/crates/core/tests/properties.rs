use num_bigint::BigInt;
use num_complex::Complex64;
use proptest::prelude::*;

use kmeis::cartan::{self, CorootVec, Gcm, RootVec, Weight};
use kmeis::cone::{self, ConeStatus, CorootSpacePoint};
use kmeis::eisenstein::{self, SpectralParam, SumOptions};
use kmeis::fixtures;
use kmeis::torus::{self, TorusPoint};
use kmeis::weyl::{self, WeylElt};
use kmeis::zeta::CurveZeta;

fn fixture(k: usize) -> Gcm {
    match k % 3 {
        0 => fixtures::rank1(),
        1 => fixtures::hyperbolic(),
        _ => fixtures::rank3(),
    }
}

/// Random element of `W` as a product of generators.
fn element(g: &Gcm, gens: &[usize]) -> WeylElt {
    gens.iter().fold(WeylElt::identity(g), |acc, &i| {
        acc.compose(g, &WeylElt::from_word(g, &[i % g.rank()]).unwrap())
    })
}

fn weight(v: &[f64], n: usize) -> Weight<Complex64> {
    Weight::new((0..n).map(|i| Complex64::new(v[i], v[i + 3])).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pairing_is_invariant(k in 0usize..3, gens in prop::collection::vec(0usize..3, 0..9),
                            v in prop::collection::vec(-5.0f64..5.0, 6), j in 0usize..3) {
        let g = fixture(k);
        let n = g.rank();
        let w = element(&g, &gens);
        let lam = weight(&v, n);
        let a = CorootVec::simple(n, j % n);
        let lhs = cartan::pairing(&w.apply(&g, &lam).unwrap(), &w.apply_coroot(&a)).unwrap();
        let rhs = cartan::pairing(&lam, &a).unwrap();
        prop_assert!((lhs - rhs).norm() <= 1e-9 * (1.0 + rhs.norm()) * (1.0 + w.length() as f64).powi(3));
    }

    #[test]
    fn inverse_and_length(k in 0usize..3, gens in prop::collection::vec(0usize..3, 0..10)) {
        let g = fixture(k);
        let w = element(&g, &gens);
        let winv = w.inverse(&g);
        prop_assert!(w.compose(&g, &winv).is_identity());
        prop_assert_eq!(winv.length(), w.length());
        prop_assert_eq!(weyl::inversion_set(&w, &g).len(), w.length());
        prop_assert!(w.length() <= gens.len());
        prop_assert_eq!(w.length() % 2, gens.len() % 2);
    }

    #[test]
    fn roots_stay_roots(k in 0usize..3, gens in prop::collection::vec(0usize..3, 0..10), j in 0usize..3) {
        // real roots are positive or negative, never mixed
        let g = fixture(k);
        let w = element(&g, &gens);
        let r = w.apply_root(&RootVec::simple(g.rank(), j % g.rank()));
        prop_assert!(r.is_positive() || r.is_negative());
    }

    #[test]
    fn descent_verdict_is_w_invariant(a in -12i64..12, b in -12i64..12,
                                      gens in prop::collection::vec(0usize..2, 0..8)) {
        let g = fixtures::hyperbolic();
        let x = CorootSpacePoint::from_integers(&[a, b]);
        let v = cone::descend(&g, &x, 400).unwrap();
        prop_assume!(v.status != ConeStatus::Undetermined);
        let w = element(&g, &gens);
        let y = x.transport(&w);
        let u = cone::descend(&g, &y, 400).unwrap();
        prop_assert_eq!(u.status, v.status);
        prop_assert_eq!(u.final_point, v.final_point.clone());
        // the witness really moves x into the closed chamber
        let fin = x.transport(v.witness.as_ref().unwrap());
        prop_assert!(fin.pairings(&g).iter().all(|p| *p >= num_rational::BigRational::from_integer(0.into())));
    }

    #[test]
    fn genus_one_curves(q in prop::sample::select(vec![2u64, 3, 4, 5, 7, 8, 9]), a in -6i64..=6,
                        re in 1.5f64..6.0, im in -3.0f64..3.0) {
        prop_assume!((a * a) as u64 <= 4 * q);
        let z = CurveZeta::from_point_counts(q, &[q as i64 + 1 - a], true).unwrap();
        prop_assert_eq!(z.coefficients(), &[BigInt::from(1), BigInt::from(-a), BigInt::from(q)][..]);
        let s = Complex64::new(re, im);
        let e = z.euler_truncated(s, 60).unwrap();
        prop_assert!((e - z.eval(&s).unwrap()).norm() < 1e-8);
        let t = Complex64::new(0.2, 0.1);
        prop_assert!(z.functional_equation_residual(t) < 1e-10);
    }

    #[test]
    fn character_multiplicative(e in prop::collection::vec(-4i64..4, 2),
                                u in prop::collection::vec(-3.0f64..3.0, 6),
                                v in prop::collection::vec(-3.0f64..3.0, 6)) {
        let h = TorusPoint::new(3, e).unwrap();
        let (mu, nu) = (weight(&u, 2), weight(&v, 2));
        let sum = Weight::new(mu.coords.iter().zip(&nu.coords).map(|(a, b)| a + b).collect());
        let lhs = h.h_pow(&sum).unwrap();
        let rhs = h.h_pow(&mu).unwrap() * h.h_pow(&nu).unwrap();
        prop_assert!((lhs - rhs).norm() <= 1e-9 * lhs.norm().max(1.0));
    }

    #[test]
    fn in_hc_means_dominant(e in prop::collection::vec(-6i64..6, 3)) {
        let g = fixtures::rank3();
        let h = TorusPoint::new(2, e).unwrap();
        if h.in_hc(&g).unwrap() {
            prop_assert_eq!(h.in_h_titscone(&g, 100).unwrap().status, ConeStatus::Dominant);
        }
    }

    #[test]
    fn units_lemma_on_fixtures(m in prop::collection::vec(1i64..20, 3)) {
        prop_assert_eq!(torus::units_nullity(&fixtures::rank3_rows(), &m).unwrap(), 0);
        prop_assert_eq!(torus::units_nullity(&fixtures::hyperbolic_rows(), &m[..2]).unwrap(), 0);
    }

    #[test]
    fn shell_abs_dominates_shell_sum(l1 in 1.5f64..4.0, l2 in 1.5f64..4.0, t1 in -2.0f64..2.0,
                                     e in prop::collection::vec(-2i64..=0, 2)) {
        let g = fixtures::hyperbolic();
        let lam = SpectralParam::new(Weight::new(vec![Complex64::new(l1, t1), Complex64::new(l2, 0.0)]));
        let h = TorusPoint::new(2, e).unwrap();
        let r = eisenstein::constant_term(&lam, &h, &fixtures::elliptic(), &g, &SumOptions::new(6)).unwrap();
        let mut running = Complex64::new(0.0, 0.0);
        for k in 0..r.shell_sums.len() {
            if !r.shell_abs[k].is_finite() {
                break;
            }
            prop_assert!(r.shell_sums[k].norm() <= r.shell_abs[k] * (1.0 + 1e-12));
            running += r.shell_sums[k];
            prop_assert!((running - r.cumulative[k]).norm() <= 1e-12 * running.norm().max(1e-300));
        }
    }
}

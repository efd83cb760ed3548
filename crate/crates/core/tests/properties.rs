use num_complex::Complex64 as CNum;
use num_traits::One;
use proptest::prelude::*;

use optb_core::chebyshev::{cheb, cheb_eval_closed};
use optb_core::exactalg::field::{rat, ratio};
use optb_core::exactalg::roots::DEFAULT_TOL;
use optb_core::exactalg::{find_roots, find_roots_c, GaussRat, Rat, RatFunc, TriPoly, UniPoly};
use optb_core::monodromy::{apply_word, Letter, MonodromyWord, TraceTriple};
use optb_core::verifier::residue_sum;

fn small_poly(max_deg: usize) -> impl Strategy<Value = UniPoly> {
    prop::collection::vec(-6i64..=6, 1..=max_deg + 1).prop_map(|c| UniPoly::from_ints(&c))
}

fn small_tripoly() -> impl Strategy<Value = TriPoly> {
    prop::collection::vec((-4i64..=4, 0u32..3, 0u32..3, 0u32..3), 0..5).prop_map(|terms| {
        terms.into_iter().fold(TriPoly::zero(), |acc, (c, a, b, d)| {
            let mono = (0..a).fold(TriPoly::from_int(c), |m, _| &m * &TriPoly::var(0));
            let mono = (0..b).fold(mono, |m, _| &m * &TriPoly::var(1));
            let mono = (0..d).fold(mono, |m, _| &m * &TriPoly::var(2));
            &acc + &mono
        })
    })
}

fn word() -> impl Strategy<Value = MonodromyWord> {
    (any::<bool>(), prop::collection::vec((any::<bool>(), -3i64..=3), 0..5)).prop_map(|(neg, runs)| {
        MonodromyWord::from_runs(
            neg,
            runs.into_iter().map(|(l, e)| (if l { Letter::L } else { Letter::R }, e)),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn unipoly_distributes(a in small_poly(5), b in small_poly(5), c in small_poly(5)) {
        prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
    }

    #[test]
    fn tripoly_distributes(a in small_tripoly(), b in small_tripoly(), c in small_tripoly()) {
        prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
    }

    #[test]
    fn reduce_is_idempotent(a in small_poly(6), b in small_poly(6)) {
        prop_assume!(!b.is_zero());
        let once = RatFunc::reduce(a, b).unwrap();
        let twice = RatFunc::reduce(once.num().clone(), once.den().clone()).unwrap();
        prop_assert_eq!(&once, &twice);
        prop_assert!(once.den().leading().is_some_and(|l| *l == rat(1)));
    }

    #[test]
    fn residue_sum_vanishes_for_small_numerators(
        roots in prop::collection::btree_set(-12i64..=12, 2..10),
        g in small_poly(8),
    ) {
        // distinct nonzero rational roots make f squarefree with f(0) ≠ 0
        let roots: Vec<Rat> = roots.into_iter().filter(|&r| r != 0).map(|r| ratio(r, 3)).collect();
        prop_assume!(roots.len() >= 2);
        let f = UniPoly::from_roots(&roots);
        let d = roots.len();
        prop_assume!(g.degree().is_none_or(|dg| dg + 2 <= d));
        let (sum, scale) = residue_sum(&f, &g, DEFAULT_TOL).unwrap();
        prop_assert!(sum.norm() < 1e-9 * scale.max(1.0), "sum {} scale {}", sum, scale);
    }

    #[test]
    fn roots_recovered_from_expansion(
        pts in prop::collection::btree_set((-12i64..=12, -12i64..=12), 1..=40),
    ) {
        // exact expansion over ℚ(i), then the binary64 finder on its coefficients
        let want: Vec<CNum> = pts.iter().map(|&(a, b)| CNum::new(a as f64 / 8.0, b as f64 / 8.0)).collect();
        let f = pts.iter().fold(UniPoly::<GaussRat>::one(), |acc, &(a, b)| {
            &acc * &UniPoly::new(vec![-GaussRat::new(ratio(a, 8), ratio(b, 8)), GaussRat::one()])
        });
        let got = find_roots_c(&f.to_cnum_coeffs(), DEFAULT_TOL).unwrap();
        prop_assert_eq!(got.len(), want.len());
        let mut unused = got.clone();
        for w in &want {
            let (i, d) = unused
                .iter()
                .enumerate()
                .map(|(i, g)| (i, (g - w).norm()))
                .min_by(|a, b| a.1.total_cmp(&b.1))
                .unwrap();
            prop_assert!(d < 1e-8, "root {} missed by {:e}", w, d);
            unused.swap_remove(i);
        }
    }

    #[test]
    fn real_roots_recovered(roots in prop::collection::btree_set(-40i64..=40, 1..=12)) {
        let f = UniPoly::from_roots(&roots.iter().map(|&r| ratio(r, 10)).collect::<Vec<_>>());
        let mut got = find_roots(&f, DEFAULT_TOL).unwrap();
        got.sort_by(|a, b| a.re.total_cmp(&b.re));
        for (g, &r) in got.iter().zip(&roots) {
            prop_assert!((g - CNum::new(r as f64 / 10.0, 0.0)).norm() < 1e-8, "{} vs {}", g, r);
        }
    }

    #[test]
    fn word_times_inverse_acts_trivially(w in word()) {
        let id = TraceTriple::identity();
        prop_assert_eq!(apply_word(&w.concat(&w.inverse()), &id), id.clone());
        prop_assert_eq!(apply_word(&w.inverse().concat(&w), &id), id);
    }

    #[test]
    fn cheb_closed_form_on_annulus(r in 0.5f64..2.0, theta in 0.0f64..std::f64::consts::TAU, k in -15i64..=15) {
        let b = CNum::from_polar(r, theta);
        prop_assume!((b * b - 1.0).norm() > 1e-3);
        let closed = cheb_eval_closed(b, k).unwrap();
        let direct = cheb(k).eval_c(b + b.inv());
        prop_assert!((closed - direct).norm() < 1e-10 * (1.0 + direct.norm()), "{} vs {}", closed, direct);
    }
}

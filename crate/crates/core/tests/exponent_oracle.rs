//! Exponent engine against independent oracles: banded float re-evaluation
//! of every condition system on random tuples, soundness of the derived
//! scalar tuples and interval splits, and structural properties of the
//! enumerated grids.

mod common;

use common::{float_check, random_tuples, ratf, taggart_split_exists, taggart_split_ok};
use proptest::prelude::*;

use stricheck_core::exponents::{
    check, enumerate_exponents, format_rational, parse_rational, select_alpha_inhomo,
    select_alpha_schrod, select_alpha_wave, taggart_reduction, EnumerationSpec, Exponent,
    ExponentTuple, Rational, TheoremTag,
};
use stricheck_core::Error;

fn spec(theorem: TheoremTag, n: u32, max_denominator: i64) -> EnumerationSpec {
    EnumerationSpec { theorem, n, max_denominator }
}

#[test]
fn float_reevaluation_agrees_on_random_tuples() {
    for (i, &tag) in TheoremTag::ALL.iter().enumerate() {
        let n = match tag {
            TheoremTag::InhomoWave3d | TheoremTag::Taggart => 3,
            _ => 2,
        };
        let tuples = random_tuples(tag, n, 2000, 90 + i as u64);
        let mut passes = 0usize;
        for t in &tuples {
            let exact = check(&t).unwrap().pass();
            let float = float_check(&t);
            assert_eq!(exact, float, "verdicts split on {t}");
            passes += exact as usize;
        }
        // The draw must exercise both verdicts or the comparison is vacuous.
        assert!(passes > 0, "{tag:?}: no passing tuples drawn");
        assert!(passes < tuples.len(), "{tag:?}: no failing tuples drawn");
    }
}

#[test]
fn float_reevaluation_agrees_in_higher_dimension() {
    for &tag in &[TheoremTag::WaveSystem, TheoremTag::Schrodinger, TheoremTag::WaveScalar] {
        for t in random_tuples(tag, 4, 800, 17) {
            assert_eq!(check(&t).unwrap().pass(), float_check(&t), "verdicts split on {t}");
        }
    }
}

#[test]
fn wave_selection_yields_passing_scalar_tuples() {
    for n in [2u32, 3] {
        let tuples = enumerate_exponents(&spec(TheoremTag::WaveSystem, n, 6)).unwrap();
        assert!(!tuples.is_empty());
        for t in &tuples {
            let sel = select_alpha_wave(t).unwrap();
            let res = check(&sel.scalar).unwrap();
            assert!(
                res.pass(),
                "derived scalar tuple fails for {t}: {:?}",
                res.violations
            );
            assert!(sel.alpha > Rational::from_integer(0));
            assert_eq!(sel.gamma, t.k.unwrap() - sel.alpha);
        }
    }
}

#[test]
fn inhomo_selection_yields_passing_scalar_tuples() {
    let tuples = enumerate_exponents(&spec(TheoremTag::InhomoWave3d, 3, 6)).unwrap();
    assert!(!tuples.is_empty());
    for t in &tuples {
        let sel = select_alpha_inhomo(t).unwrap();
        let res = check(&sel.scalar).unwrap();
        assert!(
            res.pass(),
            "derived scalar tuple fails for {t}: {:?}",
            res.violations
        );
        assert!(sel.alpha > Rational::from_integer(0));
        assert!(sel.alpha < Rational::new(3, 2));
    }
}

#[test]
fn schrodinger_selection_yields_passing_scalar_tuples() {
    for n in [2u32, 3] {
        let tuples = enumerate_exponents(&spec(TheoremTag::Schrodinger, n, 6)).unwrap();
        assert!(!tuples.is_empty());
        for t in &tuples {
            let sel = select_alpha_schrod(t).unwrap();
            let res = check(&sel.scalar).unwrap();
            assert!(
                res.pass(),
                "derived scalar tuple fails for {t}: {:?}",
                res.violations
            );
            // γ > s is the fragile condition the half-slack choice protects.
            assert!(sel.gamma > t.s.unwrap());
        }
    }
}

#[test]
fn taggart_reduction_is_sound_on_the_enumerated_grid() {
    let tuples = enumerate_exponents(&spec(TheoremTag::Taggart, 3, 6)).unwrap();
    assert!(!tuples.is_empty());
    let mut splits = 0usize;
    for t in &tuples {
        match taggart_reduction(t) {
            Ok((r1, rt1)) => {
                let x = r1.recip();
                let sigma = Rational::from_integer(1)
                    - t.q.unwrap().recip()
                    - t.qt.unwrap().recip();
                assert_eq!(x + rt1.recip(), sigma);
                assert!(taggart_split_ok(t, x), "unsound split for {t}");
                splits += 1;
            }
            Err(Error::Infeasible(_)) => {
                assert!(
                    !taggart_split_exists(t),
                    "reduction claimed infeasible but a split exists for {t}"
                );
            }
            Err(e) => panic!("unexpected reduction error for {t}: {e}"),
        }
    }
    assert!(splits > 0, "no feasible splits in the whole grid");
}

#[test]
fn enumerated_wave_tuples_satisfy_the_regularity_remarks() {
    for n in [2u32, 3] {
        let tuples = enumerate_exponents(&spec(TheoremTag::WaveSystem, n, 6)).unwrap();
        for t in &tuples {
            let s = t.s.unwrap();
            let k = t.k.unwrap();
            assert!(ratf(s) >= 0.0, "negative regularity for {t}");
            if n == 3 {
                assert!(k > Rational::from_integer(0), "k must be positive at n = 3: {t}");
            }
            assert!(
                k >= Rational::new(n as i64 - 3, 2),
                "forcing order below the floor for {t}"
            );
        }
    }
}

proptest! {
    #[test]
    fn rational_format_parse_roundtrip(num in -9999i64..9999, den in 1i64..9999) {
        let x = Rational::new(num, den);
        let back = parse_rational(&format_rational(x)).unwrap();
        prop_assert_eq!(back, x);
    }

    #[test]
    fn exponent_parse_display_roundtrip(num in 1i64..400, den in 1i64..100) {
        prop_assume!(num >= den);
        let e = Exponent::from_rational(Rational::new(num, den)).unwrap();
        let back: Exponent = e.to_string().parse().unwrap();
        prop_assert_eq!(back, e);
    }

    #[test]
    fn dual_recip_is_an_involution(num in 0i64..=64, den in 64i64..=64) {
        let x = Rational::new(num, den);
        let e = Exponent::from_recip(x).unwrap();
        let dual = Exponent::from_recip(e.dual_recip()).unwrap();
        prop_assert_eq!(dual.dual_recip(), x);
    }
}

#[test]
fn checkers_reject_malformed_dimensions() {
    let t = ExponentTuple::inhomo_wave3d(
        Exponent::from_int(4).unwrap(),
        Exponent::from_int(4).unwrap(),
        Exponent::Infinity,
        Rational::new(1, 2),
    );
    let mut wrong = t.clone();
    wrong.n = 2;
    assert!(matches!(
        check(&wrong),
        Err(Error::DimensionMismatch { expected: 3, .. })
    ));
}

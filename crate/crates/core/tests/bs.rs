mod common;

use bsgroupoid::bs::{classify_isomorphism, is_identity, modular_hom, normalize, words_equal, BSParams, GroupWord};
use common::words::{oracle_is_identity, random_trivial_word, random_word, relator};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};

const PARAMS: [(i64, i64); 6] = [(2, 3), (2, 5), (4, 6), (6, 9), (2, -3), (3, -4)];

fn bs(p: i64, q: i64) -> BSParams {
    BSParams::new(p, q).unwrap()
}

#[test]
fn identity_and_round_trip_agree_with_rewriting() {
    let mut r = rand_chacha::ChaCha8Rng::seed_from_u64(31);
    let mut checks = 0;
    for (p, q) in PARAMS {
        let params = bs(p, q);
        for i in 0..1500 {
            let w = if i % 2 == 0 { random_word(&mut r, 10) } else { random_trivial_word(&mut r, &params) };
            assert_eq!(is_identity(&w, &params), oracle_is_identity(&w, &params), "BS({p},{q}): {w}");
            let nf = normalize(&w, &params);
            assert!(nf.is_pinch_free(&params));
            let back = nf.to_word();
            assert!(oracle_is_identity(&w.mul(&back.inverse()), &params), "BS({p},{q}): {w} vs {nf}");
            assert_eq!(normalize(&back, &params), nf);
            checks += 3;
        }
    }
    assert_eq!(checks, 27_000);
}

#[test]
fn normal_forms_are_unique_per_element() {
    let mut r = rand_chacha::ChaCha8Rng::seed_from_u64(32);
    for (p, q) in PARAMS {
        let params = bs(p, q);
        for _ in 0..500 {
            let w = random_word(&mut r, 8);
            let z = random_trivial_word(&mut r, &params);
            let k = r.gen_range(0..=w.runs().len());
            let (head, tail) = w.runs().split_at(k);
            let spliced = GroupWord::from_runs(head.iter().cloned())
                .mul(&z)
                .mul(&GroupWord::from_runs(tail.iter().cloned()));
            assert_eq!(normalize(&spliced, &params), normalize(&w, &params));
            assert!(words_equal(&spliced, &w, &params));
        }
    }
}

#[test]
fn relator_is_trivial_and_generators_are_not() {
    for (p, q) in PARAMS {
        let params = bs(p, q);
        assert!(is_identity(&relator(&params), &params));
        for w in ["a", "t", "t a T", "a t A T"] {
            let w: GroupWord = w.parse().unwrap();
            assert_eq!(is_identity(&w, &params), oracle_is_identity(&w, &params));
        }
    }
    let w: GroupWord = "t a T a t A T A".parse().unwrap();
    assert!(!is_identity(&w, &bs(2, 3)));
    let w: GroupWord = "t a^2 T a t A^2 T A".parse().unwrap();
    assert!(is_identity(&w, &bs(2, 3)));
}

#[test]
fn modular_examples() {
    let w: GroupWord = "t^2 a^5".parse().unwrap();
    assert_eq!(modular_hom(&w, &bs(2, 3)).to_string(), "9/4");
    assert_eq!(modular_hom(&"a".parse().unwrap(), &bs(2, 3)).to_string(), "1");
    assert_eq!(modular_hom(&"T".parse().unwrap(), &bs(2, -3)).to_string(), "2/3");
}

/// t ↦ t for (−p, −q) and t ↦ t⁻¹ for (q, p), with a ↦ a.
/// Vacuous when BS(r,s) is outside the normalized parameter range.
fn explicit_isomorphism_kills_relator(p: i64, q: i64, r: i64, s: i64) -> bool {
    let Ok(target) = BSParams::new(r, s) else { return true };
    let image = |t_exp: i64| {
        GroupWord::t_pow(t_exp)
            .mul(&GroupWord::a_pow(p))
            .mul(&GroupWord::t_pow(-t_exp))
            .mul(&GroupWord::a_pow(-q))
    };
    let same = (r, s) == (p, q) || (r, s) == (-p, -q);
    let swapped = (r, s) == (q, p) || (r, s) == (-q, -p);
    (same && is_identity(&image(1), &target)) || (swapped && is_identity(&image(-1), &target))
}

#[test]
fn isomorphism_classifier_exhaustive() {
    let range: Vec<i64> = (-6..=6).filter(|&x| x != 0).collect();
    let mut positives = 0;
    for &p in &range {
        for &q in &range {
            for &r in &range {
                for &s in &range {
                    let mut a = [p.abs(), q.abs()];
                    let mut b = [r.abs(), s.abs()];
                    a.sort_unstable();
                    b.sort_unstable();
                    let invariants = a == b && (p - q).abs() == (r - s).abs();
                    let got = classify_isomorphism(p, q, r, s);
                    assert_eq!(got, invariants, "({p},{q}) vs ({r},{s})");
                    if got {
                        positives += 1;
                        assert!(explicit_isomorphism_kills_relator(p, q, r, s), "({p},{q}) vs ({r},{s})");
                    }
                }
            }
        }
    }
    assert!(positives > 144);
}

proptest! {
    #[test]
    fn normal_form_respects_products(seed in any::<u64>(), pi in 0usize..6) {
        let (p, q) = PARAMS[pi];
        let params = bs(p, q);
        let mut r = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let (u, v) = (random_word(&mut r, 8), random_word(&mut r, 8));
        let lhs = normalize(&u.mul(&v), &params).to_word();
        let rhs = normalize(&u, &params).to_word().mul(&normalize(&v, &params).to_word());
        prop_assert!(words_equal(&lhs, &rhs, &params));
        prop_assert!(is_identity(&u.mul(&u.inverse()), &params));
    }

    #[test]
    fn modular_hom_is_multiplicative(seed in any::<u64>()) {
        let params = bs(2, 3);
        let mut r = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let (u, v) = (random_word(&mut r, 8), random_word(&mut r, 8));
        prop_assert_eq!(
            modular_hom(&u.mul(&v), &params).value,
            modular_hom(&u, &params).value * modular_hom(&v, &params).value
        );
    }
}

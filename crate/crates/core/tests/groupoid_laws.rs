use std::collections::BTreeSet;

use bsgroupoid::groupoid::{
    ergodic_decomposition, index, local_index, quotient, FiniteMeasuredGroupoid, Subgroupoid,
};
use bsgroupoid::suite::random::{
    random_instance, random_normal_subgroupoid, random_subgroupoid, random_unit_set, transitive_cyclic_pair,
};
use bsgroupoid::suite::{groupoid_laws, rng, run_lemmas, LemmaCounts, Tally};
use proptest::prelude::*;

/// Classes of s⁻¹(x) under f ~ f' iff f'·f⁻¹ ∈ H, by pairwise comparison.
fn brute_index(g: &FiniteMeasuredGroupoid, big: &Subgroupoid, small: &Subgroupoid, x: usize) -> usize {
    let fibre: Vec<usize> = g.out_of(x).iter().copied().filter(|&f| big.contains(f)).collect();
    let mut reps: Vec<usize> = Vec::new();
    for &f in &fibre {
        let known = reps
            .iter()
            .any(|&e| g.product(f, g.inverse(e)).is_some_and(|h| small.contains(h)));
        if !known {
            reps.push(f);
        }
    }
    reps.len()
}

/// Units reachable from x inside H, by breadth-first search.
fn component(g: &FiniteMeasuredGroupoid, h: &Subgroupoid, x: usize) -> Vec<bool> {
    let mut seen = vec![false; g.n_units()];
    let mut stack = vec![x];
    seen[x] = true;
    while let Some(y) = stack.pop() {
        for &e in g.out_of(y) {
            let z = g.range(e);
            if h.contains(e) && !seen[z] {
                seen[z] = true;
                stack.push(z);
            }
        }
    }
    seen
}

#[test]
fn index_matches_pairwise_coset_count() {
    let mut r = rng(11);
    for _ in 0..200 {
        let g = random_instance(&mut r, None).groupoid;
        let s = random_subgroupoid(&mut r, &g);
        let t = Subgroupoid::full(&g);
        for x in 0..g.n_units() {
            assert_eq!(index(&g, &t, &s, x), brute_index(&g, &t, &s, x));
        }
    }
}

#[test]
fn local_index_matches_index_on_the_component() {
    let mut r = rng(12);
    for _ in 0..150 {
        let g = random_instance(&mut r, None).groupoid;
        let s = random_subgroupoid(&mut r, &g);
        let t = Subgroupoid::full(&g);
        for x in 0..g.n_units() {
            let c = component(&g, &s, x);
            let res = g.restrict(&c).unwrap();
            let local = |sub: &Subgroupoid| groupoid_laws::transport(&res, sub);
            let i = res.units.iter().position(|&u| u == x).unwrap();
            assert_eq!(
                local_index(&g, &t, &s, x),
                brute_index(&res.groupoid, &local(&t), &local(&s), i),
                "x = {x}"
            );
        }
    }
}

#[test]
fn ergodic_components_match_search() {
    let mut r = rng(13);
    for _ in 0..100 {
        let g = random_instance(&mut r, None).groupoid;
        let s = random_subgroupoid(&mut r, &g);
        let dec = ergodic_decomposition(&g, &s);
        let ours: BTreeSet<Vec<usize>> = dec.components.iter().cloned().collect();
        let searched: BTreeSet<Vec<usize>> = (0..g.n_units())
            .map(|x| {
                let c = component(&g, &s, x);
                (0..g.n_units()).filter(|&y| c[y]).collect()
            })
            .collect();
        assert_eq!(ours, searched);
    }
}

#[test]
fn restriction_counts_arrows_between_kept_units() {
    let mut r = rng(14);
    for _ in 0..100 {
        let g = random_instance(&mut r, None).groupoid;
        let a = random_unit_set(&mut r, g.n_units());
        let res = g.restrict(&a).unwrap();
        let expected = (0..g.n_arrows()).filter(|&e| a[g.source(e)] && a[g.range(e)]).count();
        assert_eq!(res.groupoid.n_arrows(), expected);
        res.groupoid.validate().unwrap();
    }
}

#[test]
fn quotient_by_normal_pairs_has_kernel_s() {
    let mut r = rng(15);
    for _ in 0..60 {
        let g = random_instance(&mut r, None).groupoid;
        let s = random_normal_subgroupoid(&mut r, &g);
        let q = quotient(&g, &s).unwrap();
        let kernel: Vec<usize> = (0..g.n_arrows()).filter(|&e| q.groupoid.is_unit(q.theta[e])).collect();
        assert_eq!(kernel, s.iter().collect::<Vec<_>>());
    }
}

#[test]
fn quotient_of_transitive_action_has_group_size() {
    let mut r = rng(16);
    for _ in 0..30 {
        let (g, group, lam) = transitive_cyclic_pair(&mut r);
        let s = Subgroupoid::label_preimage(&g, &lam).unwrap();
        let q = quotient(&g, &s).unwrap();
        let lam_size = lam.iter().filter(|b| **b).count();
        assert_eq!(q.groupoid.n_units(), 1);
        assert_eq!(q.groupoid.n_arrows(), group.order() / lam_size);
    }
}

#[test]
fn default_lemma_suite_passes() {
    let t = run_lemmas(2024, &LemmaCounts::default());
    assert!(t.all_passed(), "{}", t.to_text());
}

#[test]
fn suite_is_deterministic() {
    let counts = LemmaCounts {
        index: 20,
        towers: 10,
        group_actions: 5,
        quotients: 5,
        cohomology: 5,
        mackey: 5,
    };
    assert_eq!(run_lemmas(7, &counts), run_lemmas(7, &counts));
}

#[test]
fn tally_keeps_first_failure() {
    let mut t = Tally::new();
    t.check("law", true, || unreachable!());
    t.check("law", false, || "one".into());
    t.check("law", false, || "two".into());
    let r = t.get("law").unwrap();
    assert_eq!((r.checks, r.failures, r.first_failure.as_deref()), (3, 2, Some("one")));
    assert!(!t.all_passed());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn index_is_constant_along_arrows(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = random_instance(&mut r, None).groupoid;
        let s = random_subgroupoid(&mut r, &g);
        let t = Subgroupoid::full(&g);
        for e in 0..g.n_arrows() {
            prop_assert_eq!(index(&g, &t, &s, g.source(e)), index(&g, &t, &s, g.range(e)));
        }
    }

    #[test]
    fn intersection_index_is_submultiplicative(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = random_instance(&mut r, None).groupoid;
        let h = random_subgroupoid(&mut r, &g);
        let k = random_subgroupoid(&mut r, &g);
        let t = Subgroupoid::full(&g);
        let hk = h.intersect(&k);
        for x in 0..g.n_units() {
            prop_assert!(index(&g, &t, &hk, x) <= index(&g, &t, &h, x) * index(&g, &t, &k, x));
        }
    }

    #[test]
    fn local_index_is_multiplicative_in_towers(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = random_instance(&mut r, None).groupoid;
        let k = random_subgroupoid(&mut r, &g);
        let h = k.intersect(&random_subgroupoid(&mut r, &g));
        let t = Subgroupoid::full(&g);
        for x in 0..g.n_units() {
            prop_assert_eq!(
                local_index(&g, &t, &h, x),
                local_index(&g, &t, &k, x) * local_index(&g, &k, &h, x)
            );
        }
    }
}

//! Index, local index and quotient laws on random instances.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::random::{
    label_subgroupoid, normal_closure, random_instance, random_normal_subgroupoid, random_subgroupoid,
    random_unit_set, spanning_subgroupoid, transitive_cyclic_pair,
};
use super::Tally;
use crate::groupoid::{
    coset_representatives, ergodic_decomposition, index, local_index, quotient, verify_quotient, FiniteGroup,
    FiniteMeasuredGroupoid, Restriction, Subgroupoid,
};

pub const INDEX_CONSTANT: &str = "index is constant along arrows";
pub const RESTRICTION_BOUND: &str = "restriction does not raise the index";
pub const RESTRICTION_ERGODIC: &str = "restriction keeps the index of an ergodic subgroupoid";
pub const ACTION_INDEX: &str = "index of a subgroup action equals the group index";
pub const LABEL_BOUND: &str = "index of a label preimage is at most the group index";
pub const INTERSECTION_BOUND: &str = "index of an intersection is at most the product of indices";
pub const THIRD_INTERSECTION: &str = "intersecting with a third subgroupoid does not raise the index";
pub const COSET_SUM: &str = "index is a sum over coset representatives";
pub const COSET_PRODUCT: &str = "index is multiplicative when components agree";
pub const COMPONENT_BOUND: &str = "components per orbit are bounded by a constant index";
pub const LOCAL_PRODUCT: &str = "local index is multiplicative along towers";
pub const LOCAL_RESTRICTION: &str = "local index is invariant under restriction";
pub const LOCAL_BOUND: &str = "local index is at most the index";
pub const LOCAL_GROUP: &str = "local index of a normal subgroup action";
pub const QUOTIENT_KERNEL: &str = "quotient kernel is the subgroupoid";
pub const QUOTIENT_LIFT: &str = "quotient arrows lift from every fibre point";
pub const QUOTIENT_HOM: &str = "quotient map is a homomorphism";
pub const QUOTIENT_FACTOR: &str = "maps killing the subgroupoid factor through the quotient";
pub const QUOTIENT_VERIFY: &str = "quotient passes its structural verification";
pub const QUOTIENT_GROUP: &str = "quotient by an ergodic normal subgroup is the quotient group";

/// A subgroupoid of 𝒢 transported to the restriction (𝒢)_A.
pub fn transport(r: &Restriction, s: &Subgroupoid) -> Subgroupoid {
    Subgroupoid {
        arrows: r.arrows.iter().map(|&a| s.arrows[a]).collect(),
        units: r.units.iter().map(|&x| s.units[x]).collect(),
    }
}

fn indices(g: &FiniteMeasuredGroupoid, big: &Subgroupoid, small: &Subgroupoid) -> Vec<usize> {
    (0..g.n_units()).map(|x| index(g, big, small, x)).collect()
}

pub fn index_laws(t: &mut Tally, rng: &mut ChaCha8Rng) {
    let inst = random_instance(rng, None);
    let g = &inst.groupoid;
    let n = g.n_units();
    let full = Subgroupoid::full(g);
    let h = random_subgroupoid(rng, g);
    let k = random_subgroupoid(rng, g);
    let l = random_subgroupoid(rng, g);
    let span = spanning_subgroupoid(rng, g);
    let a = random_unit_set(rng, n);
    let ih = indices(g, &full, &h);

    for arrow in 0..g.n_arrows() {
        let (x, y) = (g.source(arrow), g.range(arrow));
        t.check(INDEX_CONSTANT, ih[x] == ih[y], || format!("I({x}) = {} but I({y}) = {}", ih[x], ih[y]));
    }

    let full_a = full.restrict_to(g, &a);
    for sub in [&h, &span] {
        let sub_a = sub.restrict_to(g, &a);
        let ergodic = ergodic_decomposition(g, sub).len() == 1;
        for x in (0..n).filter(|&x| a[x]) {
            let restricted = index(g, &full_a, &sub_a, x);
            let whole = index(g, &full, sub, x);
            t.check(RESTRICTION_BOUND, restricted <= whole, || {
                format!("at {x}: restricted {restricted} > {whole}")
            });
            if ergodic {
                t.check(RESTRICTION_ERGODIC, restricted == whole, || {
                    format!("at {x}: restricted {restricted} != {whole}")
                });
            }
        }
    }

    if let Some((lam, order, size)) = label_subgroupoid(rng, g) {
        let group_index = order / size;
        for x in 0..n {
            let i = index(g, &full, &lam, x);
            t.check(LABEL_BOUND, i <= group_index, || format!("at {x}: {i} > [Γ:Λ] = {group_index}"));
            if inst.is_action() {
                t.check(ACTION_INDEX, i == group_index, || format!("at {x}: {i} != [Γ:Λ] = {group_index}"));
            }
        }
    }

    let hk = h.intersect(&k);
    let ik = indices(g, &full, &k);
    let ihk = indices(g, &full, &hk);
    for x in 0..n {
        t.check(INTERSECTION_BOUND, ihk[x] <= ih[x] * ik[x], || {
            format!("at {x}: {} > {}·{}", ihk[x], ih[x], ik[x])
        });
        let lhs = index(g, &k.intersect(&l), &hk.intersect(&l), x);
        let rhs = index(g, &k, &hk, x);
        t.check(THIRD_INTERSECTION, lhs <= rhs, || format!("at {x}: {lhs} > {rhs}"));
        let sum: usize = coset_representatives(g, &full, &k, x)
            .into_iter()
            .map(|e| index(g, &k, &hk, g.range(e)))
            .sum();
        t.check(COSET_SUM, sum == ihk[x], || format!("at {x}: sum {sum} != {}", ihk[x]));
    }

    // the spanning subgroupoid has the components of 𝒢
    let hs = span.intersect(&h);
    for x in 0..n {
        let whole = index(g, &full, &hs, x);
        let prod = index(g, &full, &span, x) * index(g, &span, &hs, x);
        t.check(COSET_PRODUCT, whole == prod, || format!("at {x}: {whole} != {prod}"));
    }

    if g.is_measure_preserving() && ih.iter().all(|&i| i == ih[0]) {
        let gd = ergodic_decomposition(g, &full);
        let hd = ergodic_decomposition(g, &h);
        for comp in &gd.components {
            let mut seen: Vec<usize> = comp.iter().map(|&x| hd.component_of[x].expect("all units")).collect();
            seen.sort_unstable();
            seen.dedup();
            t.check(COMPONENT_BOUND, seen.len() <= ih[0], || {
                format!("{} components of ℋ in one orbit, index {}", seen.len(), ih[0])
            });
        }
    }
}

pub fn local_index_laws(t: &mut Tally, rng: &mut ChaCha8Rng) {
    let inst = random_instance(rng, None);
    let g = &inst.groupoid;
    let n = g.n_units();
    let big = if rng.gen_bool(0.5) {
        Subgroupoid::full(g)
    } else {
        random_subgroupoid(rng, g)
    };
    let k = big.intersect(&random_subgroupoid(rng, g));
    let h = k.intersect(&random_subgroupoid(rng, g));
    let a = random_unit_set(rng, n);
    let r = g.restrict(&a).expect("nonempty");
    let (big_a, h_a) = (transport(&r, &big), transport(&r, &h));

    for x in 0..n {
        let gh = local_index(g, &big, &h, x);
        let gk = local_index(g, &big, &k, x);
        let kh = local_index(g, &k, &h, x);
        t.check(LOCAL_PRODUCT, gh == gk * kh, || format!("at {x}: {gh} != {gk}·{kh}"));
        let i = index(g, &big, &h, x);
        t.check(LOCAL_BOUND, gh <= i, || format!("at {x}: local {gh} > index {i}"));
    }
    for (i, &x) in r.units.iter().enumerate() {
        let restricted = local_index(&r.groupoid, &big_a, &h_a, i);
        let whole = local_index(g, &big, &h, x);
        t.check(LOCAL_RESTRICTION, restricted == whole, || {
            format!("at {x}: restricted {restricted} != {whole}")
        });
    }
}

/// Number of orbits of the subgroup `lam` inside the Γ-orbit of each point,
/// read from the permutations of the action.
fn orbits_over_orbit(group: &FiniteGroup, action: &[Vec<u32>], lam: &[bool], n: usize) -> Vec<usize> {
    let orbit = |mask: &dyn Fn(usize) -> bool, x: usize| -> Vec<usize> {
        let mut o: Vec<usize> = (0..group.order())
            .filter(|&e| mask(e))
            .map(|e| action[e][x] as usize)
            .collect();
        o.sort_unstable();
        o.dedup();
        o
    };
    (0..n)
        .map(|x| {
            let big = orbit(&|_| true, x);
            let mut small: Vec<Vec<usize>> = big.iter().map(|&y| orbit(&|e| lam[e], y)).collect();
            small.sort();
            small.dedup();
            small.len()
        })
        .collect()
}

/// Permutation of the units by which each group element acts, read off the
/// arrows of an action groupoid.
fn action_table(g: &FiniteMeasuredGroupoid) -> Option<Vec<Vec<u32>>> {
    let (group, labels) = g.label_homomorphism()?;
    let mut act = vec![vec![u32::MAX; g.n_units()]; group.order()];
    for a in 0..g.n_arrows() {
        act[labels[a] as usize][g.source(a)] = g.range(a) as u32;
    }
    act.iter().all(|p| p.iter().all(|&y| y != u32::MAX)).then_some(act)
}

pub fn local_index_group_law(t: &mut Tally, rng: &mut ChaCha8Rng) {
    let inst = loop {
        let inst = random_instance(rng, None);
        if inst.is_action() {
            break inst;
        }
    };
    let g = &inst.groupoid;
    let (group, _) = g.label_homomorphism().expect("action groupoid");
    let elems: Vec<u32> = (0..rng.gen_range(0..=2))
        .map(|_| rng.gen_range(0..group.order()) as u32)
        .collect();
    let lam = normal_closure(group, &elems);
    let h = Subgroupoid::label_preimage(g, &lam).expect("labelled");
    let act = action_table(g).expect("every element acts everywhere");
    let over = orbits_over_orbit(group, &act, &lam, g.n_units());
    let group_index = group.order() / lam.iter().filter(|b| **b).count();
    let full = Subgroupoid::full(g);
    for x in 0..g.n_units() {
        let li = local_index(g, &full, &h, x);
        t.check(LOCAL_GROUP, li * over[x] == group_index, || {
            format!("at {x}: local index {li}, [Γ:Λ] = {group_index}, {} Λ-orbits", over[x])
        });
    }
}

pub fn quotient_laws(t: &mut Tally, rng: &mut ChaCha8Rng) {
    let inst = random_instance(rng, None);
    let g = &inst.groupoid;
    let s = random_normal_subgroupoid(rng, g);
    check_quotient(t, g, &s);
    if rng.gen_bool(0.5) {
        let (g, group, lam) = transitive_cyclic_pair(rng);
        check_group_quotient(t, &g, &group, &lam);
    }
}

pub fn check_quotient(t: &mut Tally, g: &FiniteMeasuredGroupoid, s: &Subgroupoid) {
    let q = match quotient(g, s) {
        Ok(q) => q,
        Err(e) => {
            t.check(QUOTIENT_VERIFY, false, || format!("quotient failed: {e}"));
            return;
        }
    };
    let qg = &q.groupoid;
    t.check(QUOTIENT_VERIFY, verify_quotient(g, s, &q).is_ok(), || {
        verify_quotient(g, s, &q).unwrap_err()
    });
    for a in 0..g.n_arrows() {
        let c = q.theta[a];
        t.check(QUOTIENT_KERNEL, qg.is_unit(c) == s.arrows[a], || {
            format!("arrow {a}: in S = {}, θ unit = {}", s.arrows[a], qg.is_unit(c))
        });
        for &b in g.out_of(g.range(a)) {
            let ba = g.product(b, a).expect("composable");
            let ok = qg.product(q.theta[b], c) == Some(q.theta[ba]);
            t.check(QUOTIENT_HOM, ok, || format!("θ({b}·{a}) != θ({b})·θ({a})"));
        }
    }
    for c in 0..qg.n_arrows() {
        for &x in &q.decomposition.components[qg.source(c)] {
            let ok = g.out_of(x).iter().any(|&a| q.theta[a] == c);
            t.check(QUOTIENT_LIFT, ok, || format!("quotient arrow {c} has no lift out of {x}"));
        }
    }
    // (π(r), π(s), ρ·Λ) with Λ the normal closure of the labels on S kills S
    let coset: Vec<usize> = match g.label_homomorphism() {
        Some((group, labels)) => {
            let in_s: Vec<u32> = s.iter().map(|a| labels[a]).collect();
            let lam = normal_closure(group, &in_s);
            let cls = group.left_cosets(&lam);
            labels.iter().map(|&l| cls[l as usize]).collect()
        }
        None => vec![0; g.n_arrows()],
    };
    let values: Vec<(usize, usize, usize)> = (0..g.n_arrows())
        .map(|a| (q.pi[g.range(a)], q.pi[g.source(a)], coset[a]))
        .collect();
    t.check(QUOTIENT_FACTOR, q.factor(&values).is_some(), || {
        "a homomorphism trivial on S is not constant on θ-fibres".into()
    });
}

/// Γ ⋉ X with Λ normal and transitive: the quotient has one unit and its
/// arrows form a group isomorphic to Γ/Λ via the label map.
pub fn check_group_quotient(t: &mut Tally, g: &FiniteMeasuredGroupoid, group: &FiniteGroup, lam: &[bool]) {
    let s = Subgroupoid::label_preimage(g, lam).expect("labelled");
    check_quotient(t, g, &s);
    let Ok(q) = quotient(g, &s) else { return };
    let qg = &q.groupoid;
    let (_, labels) = g.label_homomorphism().expect("labelled");
    let cosets = group.left_cosets(lam);
    let n_cosets = cosets.iter().max().map_or(0, |m| m + 1);
    let mut image: Vec<Option<usize>> = vec![None; group.order()];
    let mut consistent = true;
    for a in 0..g.n_arrows() {
        let l = labels[a] as usize;
        match image[l] {
            Some(c) if c != q.theta[a] => consistent = false,
            _ => image[l] = Some(q.theta[a]),
        }
    }
    let image: Vec<usize> = image.into_iter().map(|c| c.expect("every element acts")).collect();
    let mut ok = consistent && qg.n_units() == 1 && qg.n_arrows() == n_cosets;
    for x in 0..group.order() {
        for y in 0..group.order() {
            ok &= (image[x] == image[y]) == (cosets[x] == cosets[y]);
            let xy = group.mul(x as u32, y as u32) as usize;
            ok &= qg.product(image[x], image[y]) == Some(image[xy]);
        }
    }
    t.check(QUOTIENT_GROUP, ok, || {
        format!(
            "|Γ| = {}, [Γ:Λ] = {n_cosets}, quotient has {} units and {} arrows",
            group.order(),
            qg.n_units(),
            qg.n_arrows()
        )
    });
}

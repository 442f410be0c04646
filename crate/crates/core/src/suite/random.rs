//! Seeded random finite groupoids, subgroupoids and unit sets.

use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::groupoid::{
    ergodic_decomposition, uniform_masses, FiniteGroup, FiniteMeasuredGroupoid, GroupoidError, Seed, Subgroupoid,
};

pub const MAX_UNITS: usize = 24;
pub const MAX_ARROWS: usize = 400;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    /// Γ ⋉ X for a permutation group Γ.
    Transformation,
    /// ℤ/m ⋉ X through a possibly non-faithful action.
    CyclicAction,
    /// Words in labelled partial bijections, labels in ℤ/m.
    PartialIsos,
}

#[derive(Clone, Debug)]
pub struct Instance {
    pub groupoid: FiniteMeasuredGroupoid,
    pub kind: Kind,
}

impl Instance {
    /// Whether the label homomorphism presents the groupoid as Γ ⋉ X.
    pub fn is_action(&self) -> bool {
        self.kind != Kind::PartialIsos
    }
}

/// A permutation of `0..n` whose cycle lengths all divide one of `lengths`.
pub fn random_permutation(rng: &mut ChaCha8Rng, n: usize, lengths: &[usize]) -> Vec<u32> {
    let mut pts: Vec<u32> = (0..n as u32).collect();
    pts.shuffle(rng);
    let mut perm: Vec<u32> = (0..n as u32).collect();
    let mut i = 0;
    while i < n {
        let len = (*lengths.choose(rng).expect("nonempty")).min(n - i).max(1);
        let cycle = &pts[i..i + len];
        for j in 0..len {
            perm[cycle[j] as usize] = cycle[(j + 1) % len];
        }
        i += len;
    }
    perm
}

fn divisors(m: usize) -> Vec<usize> {
    (1..=m).filter(|d| m.is_multiple_of(*d)).collect()
}

fn transformation(rng: &mut ChaCha8Rng) -> Result<FiniteMeasuredGroupoid, GroupoidError> {
    let n = rng.gen_range(2..=12);
    let k = rng.gen_range(1..=2);
    let gens: Vec<(String, Vec<u32>)> = (0..k)
        .map(|i| (format!("g{i}"), random_permutation(rng, n, &[1, 2, 3, 4])))
        .collect();
    FiniteMeasuredGroupoid::from_group_action(uniform_masses(n), &gens, MAX_ARROWS / n)
}

fn cyclic_action(rng: &mut ChaCha8Rng) -> Result<FiniteMeasuredGroupoid, GroupoidError> {
    let m = rng.gen_range(2..=12);
    let n = rng.gen_range(2..=(MAX_ARROWS / m).min(MAX_UNITS).min(16));
    let perm = random_permutation(rng, n, &divisors(m));
    FiniteMeasuredGroupoid::from_abstract_action(uniform_masses(n), FiniteGroup::cyclic(m), &[(1, perm)])
}

fn partial_isos(rng: &mut ChaCha8Rng) -> Result<FiniteMeasuredGroupoid, GroupoidError> {
    let n = rng.gen_range(3..=10);
    let m = rng.gen_range(1..=4);
    let k = rng.gen_range(1..=3);
    let seeds: Vec<Seed> = (0..k)
        .map(|i| {
            let mut dom: Vec<usize> = (0..n).collect();
            let mut ran: Vec<usize> = (0..n).collect();
            dom.shuffle(rng);
            ran.shuffle(rng);
            let size = rng.gen_range(1..=n);
            Seed {
                name: format!("s{i}"),
                pairs: dom.into_iter().zip(ran).take(size).collect(),
                label: rng.gen_range(0..m) as u32,
            }
        })
        .collect();
    FiniteMeasuredGroupoid::from_partial_isos(uniform_masses(n), &seeds, FiniteGroup::cyclic(m), MAX_ARROWS)
}

/// Masses in 1..=5 (normalised); constant on components when
/// `preserving`, so that every arrow preserves mass.
pub fn random_masses(rng: &mut ChaCha8Rng, g: &FiniteMeasuredGroupoid, preserving: bool) -> Vec<BigRational> {
    let n = g.n_units();
    let raw: Vec<i64> = if preserving {
        let dec = ergodic_decomposition(g, &Subgroupoid::full(g));
        let per: Vec<i64> = (0..dec.len()).map(|_| rng.gen_range(1..=5)).collect();
        (0..n).map(|x| per[dec.component_of[x].expect("full")]).collect()
    } else {
        (0..n).map(|_| rng.gen_range(1..=5)).collect()
    };
    let total: i64 = raw.iter().sum();
    raw.into_iter()
        .map(|w| BigRational::new(w.into(), total.into()))
        .collect()
}

/// A random groupoid with at most [`MAX_UNITS`] units and [`MAX_ARROWS`]
/// arrows. Measure-preserving half of the time unless `preserving` forces it.
pub fn random_instance(rng: &mut ChaCha8Rng, preserving: Option<bool>) -> Instance {
    loop {
        let kind = *[Kind::Transformation, Kind::CyclicAction, Kind::PartialIsos]
            .choose(rng)
            .expect("nonempty");
        let built = match kind {
            Kind::Transformation => transformation(rng),
            Kind::CyclicAction => cyclic_action(rng),
            Kind::PartialIsos => partial_isos(rng),
        };
        let Ok(g) = built else { continue };
        if g.n_arrows() > MAX_ARROWS || g.n_units() > MAX_UNITS {
            continue;
        }
        let mp = preserving.unwrap_or_else(|| rng.gen_bool(0.5));
        let masses = random_masses(rng, &g, mp);
        let groupoid = g.with_masses(masses).expect("positive masses");
        return Instance { groupoid, kind };
    }
}

/// A transitive action of ℤ/m on ℤ/n (n | m) by +1, with Λ = dℤ/m for a
/// divisor d of m prime to n, so that Λ is normal and still transitive.
pub fn transitive_cyclic_pair(rng: &mut ChaCha8Rng) -> (FiniteMeasuredGroupoid, FiniteGroup, Vec<bool>) {
    loop {
        let m = rng.gen_range(2..=24);
        let n_choices: Vec<usize> = divisors(m).into_iter().filter(|&n| n >= 2 && n * m <= MAX_ARROWS).collect();
        let Some(&n) = n_choices.choose(rng) else { continue };
        let d_choices: Vec<usize> = divisors(m).into_iter().filter(|&d| gcd(d, n) == 1).collect();
        let d = *d_choices.choose(rng).expect("1 always qualifies");
        let group = FiniteGroup::cyclic(m);
        let shift: Vec<u32> = (0..n as u32).map(|x| (x + 1) % n as u32).collect();
        let g = FiniteMeasuredGroupoid::from_abstract_action(uniform_masses(n), group.clone(), &[(1, shift)])
            .expect("valid action");
        let lam = group.subgroup(&[(d % m) as u32]);
        return (g, group, lam);
    }
}

pub fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// A nonempty random subset of the units.
pub fn random_unit_set(rng: &mut ChaCha8Rng, n: usize) -> Vec<bool> {
    loop {
        let p = rng.gen_range(0.2..0.9);
        let a: Vec<bool> = (0..n).map(|_| rng.gen_bool(p)).collect();
        if a.iter().any(|b| *b) {
            return a;
        }
    }
}

/// A random unit set meeting every component of 𝒢, so that 𝒢A = X.
pub fn random_saturating_set(rng: &mut ChaCha8Rng, g: &FiniteMeasuredGroupoid) -> Vec<bool> {
    let mut a = random_unit_set(rng, g.n_units());
    let dec = ergodic_decomposition(g, &Subgroupoid::full(g));
    for comp in &dec.components {
        if !comp.iter().any(|&x| a[x]) {
            a[*comp.choose(rng).expect("nonempty component")] = true;
        }
    }
    a
}

/// Arrows whose endpoints lie in one block of a random partition into
/// `blocks` parts. Its isotropy is that of 𝒢, so it is always normal.
pub fn block_subgroupoid(rng: &mut ChaCha8Rng, g: &FiniteMeasuredGroupoid, blocks: usize) -> Subgroupoid {
    let block: Vec<usize> = (0..g.n_units()).map(|_| rng.gen_range(0..blocks)).collect();
    Subgroupoid {
        arrows: (0..g.n_arrows()).map(|a| block[g.source(a)] == block[g.range(a)]).collect(),
        units: vec![true; g.n_units()],
    }
}

/// The subgroupoid generated by a spanning forest of 𝒢 plus a few random
/// arrows; it has the same components as 𝒢.
pub fn spanning_subgroupoid(rng: &mut ChaCha8Rng, g: &FiniteMeasuredGroupoid) -> Subgroupoid {
    let n = g.n_units();
    let mut seen = vec![false; n];
    let mut seeds = Vec::new();
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    for &b in &order {
        if seen[b] {
            continue;
        }
        seen[b] = true;
        let mut stack = vec![b];
        while let Some(y) = stack.pop() {
            let mut outs = g.out_of(y).to_vec();
            outs.shuffle(rng);
            for k in outs {
                let z = g.range(k);
                if !seen[z] {
                    seen[z] = true;
                    seeds.push(k);
                    stack.push(z);
                }
            }
        }
    }
    for _ in 0..rng.gen_range(0..=2) {
        seeds.push(rng.gen_range(0..g.n_arrows()));
    }
    Subgroupoid::generated(g, &seeds)
}

/// ρ⁻¹(Λ) for a random subgroup Λ of the label group, if there is one.
pub fn label_subgroupoid(rng: &mut ChaCha8Rng, g: &FiniteMeasuredGroupoid) -> Option<(Subgroupoid, usize, usize)> {
    let (group, _) = g.label_homomorphism()?;
    let gens: Vec<u32> = (0..rng.gen_range(0..=2))
        .map(|_| rng.gen_range(0..group.order()) as u32)
        .collect();
    let lam = group.subgroup(&gens);
    let size = lam.iter().filter(|b| **b).count();
    let order = group.order();
    Some((Subgroupoid::label_preimage(g, &lam)?, order, size))
}

/// Normal closure of the given elements.
pub fn normal_closure(group: &FiniteGroup, elems: &[u32]) -> Vec<bool> {
    let n = group.order() as u32;
    let conj: Vec<u32> = elems
        .iter()
        .flat_map(|&x| (0..n).map(move |h| (h, x)))
        .map(|(h, x)| group.mul(group.mul(h, x), group.inverse(h)))
        .collect();
    group.subgroup(&conj)
}

/// A random subgroupoid on all units, drawn from several families.
pub fn random_subgroupoid(rng: &mut ChaCha8Rng, g: &FiniteMeasuredGroupoid) -> Subgroupoid {
    match rng.gen_range(0..5) {
        0 => {
            let seeds: Vec<usize> = (0..rng.gen_range(0..=3))
                .map(|_| rng.gen_range(0..g.n_arrows()))
                .collect();
            Subgroupoid::generated(g, &seeds)
        }
        1 => {
            let blocks = rng.gen_range(1..=3);
            block_subgroupoid(rng, g, blocks)
        }
        2 => match label_subgroupoid(rng, g) {
            Some((s, _, _)) => s,
            None => spanning_subgroupoid(rng, g),
        },
        3 => spanning_subgroupoid(rng, g),
        _ => {
            let a = random_subgroupoid(rng, g);
            let b = random_subgroupoid(rng, g);
            a.intersect(&b)
        }
    }
}

/// A random normal subgroupoid: a block subgroupoid, intersected with the
/// preimage of a random normal subgroup when the groupoid is labelled.
pub fn random_normal_subgroupoid(rng: &mut ChaCha8Rng, g: &FiniteMeasuredGroupoid) -> Subgroupoid {
    let blocks = rng.gen_range(1..=3);
    let s = block_subgroupoid(rng, g, blocks);
    match g.label_homomorphism() {
        Some((group, _)) if rng.gen_bool(0.7) => {
            let elems: Vec<u32> = (0..rng.gen_range(0..=2))
                .map(|_| rng.gen_range(0..group.order()) as u32)
                .collect();
            let lam = normal_closure(group, &elems);
            s.intersect(&Subgroupoid::label_preimage(g, &lam).expect("labelled"))
        }
        _ => s,
    }
}

//! Cohomology, Mackey range, flow and type laws.

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::groupoid_laws::transport;
use super::random::{random_instance, random_saturating_set, random_subgroupoid, random_unit_set, Kind};
use super::Tally;
use crate::bs::{ratio_pow, BSParams};
use crate::cocycle::{
    arrow_partition, classify_graph, classify_type, cohomologous, flow_type, is_transfer, mackey_range,
    modular_cocycles, witness_values_at, BSLevelModel, CocycleGraph, CocycleTarget, CocycleValue, FlowType,
    GroupoidCocycle, MackeyRange, NonsingularGraph, TypeLabel,
};
use crate::groupoid::{ergodic_decomposition, local_index, FiniteMeasuredGroupoid, Subgroupoid};

pub const MULTIPLICATIVE: &str = "modular and local-index cocycles are multiplicative";
pub const D_SHRINK: &str = "modular scalar is unchanged on a smaller witness domain";
pub const D_RESTRICT: &str = "modular cocycle of a restriction is cohomologous via the mass share";
pub const D_ENLARGE: &str = "modular cocycle changes by the mass-share coboundary under enlargement";
pub const I_RESTRICT: &str = "local-index cocycle is unchanged by restriction";
pub const I_ENLARGE: &str = "local-index cocycle changes by the local-index coboundary under enlargement";
pub const TRANSFER_FOUND: &str = "transfer search finds a transfer map";
pub const MACKEY_RESTRICT: &str = "Mackey range is unchanged by a saturating restriction";
pub const MACKEY_COHOM: &str = "Mackey range is unchanged by a cohomologous cocycle";
pub const MACKEY_AUTO: &str = "Mackey range is unchanged by an inner automorphism";
pub const MACKEY_TRIVIAL: &str = "trivial cocycle has one translation orbit per component";
pub const FLOW_PRODUCT: &str = "product construction has the prescribed flow type";
pub const TYPE_ONE_LOOP: &str = "one-loop quotient of the level model has type III with ratio 2/3";
pub const TYPE_TWO_LOOPS: &str = "independent loop values give type III_1";
pub const TYPE_UNIFORM: &str = "uniform masses give type II";

fn ratio(v: BigRational) -> CocycleValue {
    CocycleValue::Ratio(v)
}

/// ψ(x) = μ(A ∩ C(x)) / μ(C(x)) for the component C(x) of `s` through x;
/// `a = None` takes the whole component over the component of `t`.
fn mass_share(g: &FiniteMeasuredGroupoid, s: &Subgroupoid, t: &Subgroupoid) -> Vec<BigRational> {
    let ds = ergodic_decomposition(g, s);
    let dt = ergodic_decomposition(g, t);
    (0..g.n_units())
        .map(|x| &ds.masses[ds.component_of[x].expect("all units")] / &dt.masses[dt.component_of[x].expect("all units")])
        .collect()
}

pub fn cohomology_laws(t: &mut Tally, rng: &mut ChaCha8Rng) {
    let inst = random_instance(rng, Some(true));
    let g = &inst.groupoid;
    let n = g.n_units();
    let s = random_subgroupoid(rng, g);
    let mut seeds: Vec<usize> = s.iter().collect();
    for _ in 0..rng.gen_range(1..=3) {
        seeds.push(rng.gen_range(0..g.n_arrows()));
    }
    let big = Subgroupoid::generated(g, &seeds);

    let c = match modular_cocycles(g, &s, None) {
        Ok(c) => c,
        Err(e) => return t.check(MULTIPLICATIVE, false, || format!("modular cocycles failed: {e}")),
    };
    let ok = c.d.check(g).is_ok() && c.i.check(g).is_ok();
    t.check(MULTIPLICATIVE, ok, || "a cocycle is not multiplicative".into());

    // a witness shrunk to a random part of its domain
    let family = arrow_partition(g);
    let phi = family.choose(rng).expect("at least the units");
    let dom = phi.domain_mask(g);
    let sub: Vec<bool> = dom.iter().map(|&d| d && rng.gen_bool(0.6)).collect();
    if sub.iter().any(|b| *b) {
        let whole = witness_values_at(g, &s, phi);
        let part = witness_values_at(g, &s, &phi.restrict(&sub));
        let ok = match (&whole, &part) {
            (Ok(w), Ok(p)) => p.d.iter().all(|(x, v)| w.d.get(x) == Some(v)),
            _ => false,
        };
        t.check(D_SHRINK, ok, || format!("whole {whole:?}, part {part:?}"));
    }

    // restriction to a random unit set A
    let a = random_unit_set(rng, n);
    let r = g.restrict(&a).expect("nonempty");
    let s_a = transport(&r, &s);
    match modular_cocycles(&r.groupoid, &s_a, None) {
        Ok(ca) => {
            let d_res = c.d.restrict(&r.arrows);
            let full_a = ergodic_decomposition(&r.groupoid, &s_a);
            let whole = ergodic_decomposition(g, &s);
            let psi: Vec<CocycleValue> = r
                .units
                .iter()
                .enumerate()
                .map(|(i, &x)| {
                    let part = &full_a.masses[full_a.component_of[i].expect("all units")];
                    ratio(part / &whole.masses[whole.component_of[x].expect("all units")])
                })
                .collect();
            t.check(D_RESTRICT, is_transfer(&r.groupoid, &d_res, &ca.d, &psi), || {
                "μ(A ∩ C)/μ(C) is not a transfer map".into()
            });
            let found = cohomologous(&r.groupoid, &d_res, &ca.d);
            t.check(TRANSFER_FOUND, matches!(found, Ok(Some(_))), || "restriction: none found".into());
            let i_res = c.i.restrict(&r.arrows);
            t.check(I_RESTRICT, i_res == ca.i, || "𝔌 of the restriction differs".into());
        }
        Err(e) => t.check(D_RESTRICT, false, || format!("cocycles of the restriction failed: {e}")),
    }

    // enlargement to the finite-index over-groupoid `big`
    match modular_cocycles(g, &big, None) {
        Ok(cb) => {
            let psi: Vec<CocycleValue> = mass_share(g, &s, &big).into_iter().map(ratio).collect();
            t.check(D_ENLARGE, is_transfer(g, &cb.d, &c.d, &psi), || {
                "μ(C_S)/μ(C_T) is not a transfer map".into()
            });
            let psi: Vec<CocycleValue> = (0..n)
                .map(|x| ratio(BigRational::from_integer(local_index(g, &big, &s, x).into())))
                .collect();
            t.check(I_ENLARGE, is_transfer(g, &c.i, &cb.i, &psi), || {
                "[[T:S]] is not a transfer map".into()
            });
            for (c1, c2) in [(&cb.d, &c.d), (&c.i, &cb.i)] {
                let found = cohomologous(g, c1, c2);
                t.check(TRANSFER_FOUND, matches!(found, Ok(Some(_))), || "enlargement: none found".into());
            }
        }
        Err(e) => t.check(D_ENLARGE, false, || format!("cocycles of the over-groupoid failed: {e}")),
    }
}

fn range_of(g: &FiniteMeasuredGroupoid, c: &GroupoidCocycle) -> MackeyRange {
    mackey_range(&CocycleGraph::from_cocycle(g, c)).expect("cyclic targets always have a range")
}

/// A random groupoid labelled by a cyclic group, with its label cocycle.
fn cyclic_instance(rng: &mut ChaCha8Rng) -> (FiniteMeasuredGroupoid, GroupoidCocycle, u64) {
    loop {
        let inst = random_instance(rng, None);
        if inst.kind == Kind::Transformation {
            continue;
        }
        let Some(tau) = GroupoidCocycle::from_cyclic_labels(&inst.groupoid) else { continue };
        let CocycleTarget::Cyclic(m) = tau.target else { continue };
        return (inst.groupoid, tau, m);
    }
}

pub fn mackey_laws(t: &mut Tally, rng: &mut ChaCha8Rng) {
    let (g, tau, m) = cyclic_instance(rng);
    let n = g.n_units();
    let mt = range_of(&g, &tau);

    let a = random_saturating_set(rng, &g);
    let r = g.restrict(&a).expect("nonempty");
    let ma = range_of(&r.groupoid, &tau.restrict(&r.arrows));
    let local: Vec<usize> = (0..r.units.len()).collect();
    t.check(
        MACKEY_RESTRICT,
        ma.is_isomorphic_via(&mt, &local, |i, h| (r.units[i], h)),
        || format!("{} components on A, {} on X", ma.n_components(), mt.n_components()),
    );

    // τ_φ(g) = φ(r(g)) + τ(g) − φ(s(g))
    let phi: Vec<u64> = (0..n).map(|_| rng.gen_range(0..m)).collect();
    let cohom = GroupoidCocycle {
        target: tau.target,
        values: (0..g.n_arrows())
            .map(|e| {
                let CocycleValue::Mod(v) = tau.values[e] else { unreachable!("cyclic target") };
                CocycleValue::Mod((phi[g.range(e)] + v + m - phi[g.source(e)]) % m)
            })
            .collect(),
    };
    let mc = range_of(&g, &cohom);
    let all: Vec<usize> = (0..n).collect();
    t.check(
        MACKEY_COHOM,
        mt.is_isomorphic_via(&mc, &all, |x, h| (x, h + phi[x] as i64)),
        || "(x, h) ↦ (x, φ(x)h) is not an isomorphism".into(),
    );

    // inner automorphism by a global bisection x ↦ φ(x): x → σ(x)
    let dec = ergodic_decomposition(&g, &Subgroupoid::full(&g));
    let mut sigma: Vec<usize> = (0..n).collect();
    for comp in &dec.components {
        let mut image = comp.clone();
        image.shuffle(rng);
        for (&x, &y) in comp.iter().zip(&image) {
            sigma[x] = y;
        }
    }
    let bisection: Vec<usize> = (0..n)
        .map(|x| {
            let choices: Vec<usize> = g.out_of(x).iter().copied().filter(|&e| g.range(e) == sigma[x]).collect();
            *choices.choose(rng).expect("σ stays in the component")
        })
        .collect();
    let auto: Vec<usize> = (0..g.n_arrows())
        .map(|e| {
            g.product_all(&[bisection[g.range(e)], e, g.inverse(bisection[g.source(e)])])
                .expect("composable")
        })
        .collect();
    let tau_f = GroupoidCocycle {
        target: tau.target,
        values: auto.iter().map(|&e| tau.values[e].clone()).collect(),
    };
    let mf = range_of(&g, &tau_f);
    let mut sigma_inv = vec![0; n];
    for x in 0..n {
        sigma_inv[sigma[x]] = x;
    }
    t.check(
        MACKEY_AUTO,
        mt.is_isomorphic_via(&mf, &all, |x, h| (sigma_inv[x], h)),
        || "(x, h) ↦ (f⁻¹(x), h) is not an isomorphism".into(),
    );

    let trivial = GroupoidCocycle {
        target: tau.target,
        values: vec![CocycleValue::Mod(0); g.n_arrows()],
    };
    let m0 = range_of(&g, &trivial);
    let sizes = m0.orbit_sizes();
    t.check(
        MACKEY_TRIVIAL,
        sizes.len() == dec.len() && sizes.iter().all(|&s| s as u64 == m),
        || format!("orbit sizes {sizes:?} over {} components, |H| = {m}", dec.len()),
    );
}

/// The product of the action of BS(p,q) on ℤ/N (a ↦ +1, t ↦ ·u with
/// u·p ≡ q) with the rotation of ℤ/n through 𝔪: edges carry 𝔪 of the
/// generator.
pub fn product_model(params: &BSParams, modulus: usize, n: usize) -> Option<CocycleGraph> {
    let (p, q) = (params.p.rem_euclid(modulus as i64), params.q.rem_euclid(modulus as i64));
    let u = (1..modulus as i64).find(|&u| (u * p) % modulus as i64 == q)?;
    if (1..modulus as i64).all(|v| (u * v) % modulus as i64 != 1) {
        return None;
    }
    let id = |y: usize, z: usize| y * n + z;
    let up = ratio(params.modulus_ratio());
    let one = ratio(BigRational::from_integer(1.into()));
    let mut edges = Vec::new();
    for y in 0..modulus {
        for z in 0..n {
            edges.push((id(y, z), id((y + 1) % modulus, z), one.clone()));
            edges.push((id(y, z), id((y * u as usize) % modulus, (z + 1) % n), up.clone()));
        }
    }
    Some(CocycleGraph {
        n_units: modulus * n,
        target: CocycleTarget::PositiveRationals,
        edges,
    })
}

pub fn flow_product_laws(t: &mut Tally) {
    for (p, q, modulus) in [(2, 3, 5), (2, 5, 7), (2, -3, 7), (3, 4, 5)] {
        let params = BSParams::new(p, q).expect("valid parameters");
        for n in [1usize, 2, 3, 5] {
            let Some(graph) = product_model(&params, modulus, n) else {
                t.check(FLOW_PRODUCT, false, || format!("no action of BS({p},{q}) on ℤ/{modulus}"));
                continue;
            };
            let want = ratio_pow(&params.modulus_ratio().recip(), &BigInt::from(n));
            let got = flow_type(&graph, &params);
            let ok = matches!(&got, Ok(FlowType::Cycle { n: m, label }) if *m == n as u64 && *label == want);
            t.check(FLOW_PRODUCT, ok, || format!("BS({p},{q}), n = {n}: {got:?}, want |p/q|^{n} = {want}"));
        }
    }
}

pub fn type_laws(t: &mut Tally) {
    let model = BSLevelModel::new(BSParams::new(2, 3).expect("valid"), 1, 1).expect("valid level");
    let graph = model.one_loop_graph();
    let want = TypeLabel::TypeIIIlambda(BigRational::new(2.into(), 3.into()));
    let got = graph.map(|g| classify_graph(&g));
    t.check(TYPE_ONE_LOOP, got.as_ref() == Ok(&want), || format!("{got:?}"));

    let two = NonsingularGraph {
        n_units: 1,
        edges: vec![
            (0, 0, BigRational::from_integer(2.into())),
            (0, 0, BigRational::from_integer(3.into())),
        ],
    };
    let got = classify_graph(&two);
    t.check(TYPE_TWO_LOOPS, got == TypeLabel::TypeIII1, || format!("{got:?}"));

    let got = classify_type(&model.groupoid);
    t.check(TYPE_UNIFORM, got == TypeLabel::MeasurePreservingII, || format!("{got:?}"));
}

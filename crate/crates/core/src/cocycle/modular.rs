use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::Zero;

use super::{CocycleError, GroupoidCocycle};
use crate::groupoid::{
    ergodic_decomposition, ErgodicDecomposition, FiniteMeasuredGroupoid, PartialIsomorphism, Subgroupoid, UnionFind,
};

/// 𝔇(φ, x) and 𝔌(φ, x) for every x in the domain of one witness φ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessValues {
    pub d: BTreeMap<usize, BigRational>,
    pub i: BTreeMap<usize, BigRational>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModularCocycles {
    pub d: GroupoidCocycle,
    pub i: GroupoidCocycle,
}

/// Greedy packing of all arrows into partial isomorphisms, each arrow used
/// exactly once (lowest ids first).
pub fn arrow_partition(g: &FiniteMeasuredGroupoid) -> Vec<PartialIsomorphism> {
    let n = g.n_units();
    let mut dom: Vec<Vec<bool>> = Vec::new();
    let mut rng: Vec<Vec<bool>> = Vec::new();
    let mut members: Vec<Vec<usize>> = Vec::new();
    for a in 0..g.n_arrows() {
        let (x, y) = (g.source(a), g.range(a));
        let k = match (0..members.len()).find(|&k| !dom[k][x] && !rng[k][y]) {
            Some(k) => k,
            None => {
                dom.push(vec![false; n]);
                rng.push(vec![false; n]);
                members.push(Vec::new());
                members.len() - 1
            }
        };
        dom[k][x] = true;
        rng[k][y] = true;
        members[k].push(a);
    }
    members
        .iter()
        .map(|m| PartialIsomorphism::from_arrows(g, m).expect("packing is injective"))
        .collect()
}

struct Context<'a> {
    g: &'a FiniteMeasuredGroupoid,
    s: &'a Subgroupoid,
    dec: ErgodicDecomposition,
}

impl<'a> Context<'a> {
    fn new(g: &'a FiniteMeasuredGroupoid, s: &'a Subgroupoid) -> Result<Self, CocycleError> {
        if !g.is_measure_preserving() {
            return Err(CocycleError::NotMeasurePreserving);
        }
        if s.units.iter().any(|u| !u) {
            return Err(CocycleError::NotQuasiNormal("subgroupoid must contain every unit".into()));
        }
        Ok(Context {
            g,
            s,
            dec: ergodic_decomposition(g, s),
        })
    }

    fn component_mass(&self, x: usize) -> &BigRational {
        &self.dec.masses[self.dec.component_of[x].expect("all units are in S")]
    }
}

/// One side of a witness: a unit set, a subgroupoid of (S)_set given by a
/// per-arrow predicate, its components and source degrees.
struct Side {
    classes: UnionFind,
    degree: Vec<usize>,
}

impl Side {
    fn build(
        g: &FiniteMeasuredGroupoid,
        s: &Subgroupoid,
        set: &[bool],
        points: &[usize],
        mut keep: impl FnMut(usize) -> bool,
    ) -> Side {
        let mut classes = UnionFind::new(g.n_units());
        let mut degree = vec![0; g.n_units()];
        for &x in points {
            for &h in g.out_of(x) {
                if s.arrows[h] && set[g.range(h)] && keep(h) {
                    classes.union(x, g.range(h));
                    degree[x] += 1;
                }
            }
        }
        Side { classes, degree }
    }

    /// [[(S)_set : small]]ₓ: each small-class in the fiber at x has as many
    /// elements as the small-fiber at its range, so the class count is a sum
    /// of reciprocals of those degrees.
    fn local_index(&mut self, g: &FiniteMeasuredGroupoid, s: &Subgroupoid, set: &[bool], x: usize) -> BigRational {
        let root = self.classes.find(x);
        let mut by_degree: Vec<(usize, i64)> = Vec::new();
        for &h in g.out_of(x) {
            let y = g.range(h);
            if s.arrows[h] && set[y] && self.classes.find(y) == root {
                let d = self.degree[y];
                match by_degree.iter_mut().find(|(e, _)| *e == d) {
                    Some((_, c)) => *c += 1,
                    None => by_degree.push((d, 1)),
                }
            }
        }
        let total = by_degree
            .into_iter()
            .fold(BigRational::zero(), |acc, (d, c)| acc + BigRational::new(c.into(), (d as i64).into()));
        assert!(total.is_integer(), "local index {total} is not an integer");
        total
    }
}

fn witness_values(ctx: &Context, phi: &PartialIsomorphism) -> Result<WitnessValues, CocycleError> {
    let (g, s) = (ctx.g, ctx.s);
    let n = g.n_units();
    let dom: Vec<usize> = phi.pairs().map(|(x, _)| x).collect();
    let mut u = vec![usize::MAX; n];
    let mut u_inv = vec![usize::MAX; n];
    let mut dmask = vec![false; n];
    let mut rmask = vec![false; n];
    for (x, a) in phi.pairs() {
        let y = g.range(a);
        u[x] = y;
        u_inv[y] = x;
        dmask[x] = true;
        rmask[y] = true;
    }
    let ran: Vec<usize> = dom.iter().map(|&x| u[x]).collect();
    let arrow_at = |x: usize| phi.get(x).expect("in domain");

    // 𝒮₋ = (S)_D ∩ U⁻¹((S)_R): arrows h with φ(r h)·h·φ(s h)⁻¹ ∈ S.
    let mut minus = Side::build(g, s, &dmask, &dom, |h| {
        let c = g
            .product_all(&[arrow_at(g.range(h)), h, g.inverse(arrow_at(g.source(h)))])
            .expect("composable");
        s.arrows[c]
    });
    // 𝒮₊ = (S)_R ∩ U((S)_D): arrows k with φ(x′)⁻¹·k·φ(x) ∈ S.
    let mut plus = Side::build(g, s, &rmask, &ran, |k| {
        let c = g
            .product_all(&[g.inverse(arrow_at(u_inv[g.range(k)])), k, arrow_at(u_inv[g.source(k)])])
            .expect("composable");
        s.arrows[c]
    });

    // 𝔇: μ_{π(x)}|_{D_{π₋(x)}} pushed by U equals 𝔇·μ_{π(Ux)}|_{R_{π₊(Ux)}},
    // read off pointwise and required constant on each 𝒮₋-component.
    let mut d = BTreeMap::new();
    let mut per_component: BTreeMap<usize, (usize, BigRational)> = BTreeMap::new();
    for &x in &dom {
        let y = u[x];
        let left = g.mass(x) / ctx.component_mass(x);
        let right = g.mass(y) / ctx.component_mass(y);
        let value = left / right;
        let root = minus.classes.find(x);
        match per_component.get(&root) {
            Some((x0, v0)) if *v0 != value => {
                return Err(CocycleError::InconsistentScalar(format!(
                    "𝔇 is {v0} at {x0} but {value} at {x} on one 𝒮₋-component"
                )))
            }
            Some(_) => {}
            None => {
                per_component.insert(root, (x, value.clone()));
            }
        }
        d.insert(x, value);
    }

    let mut i = BTreeMap::new();
    for &x in &dom {
        let lower = minus.local_index(g, s, &dmask, x);
        let upper = plus.local_index(g, s, &rmask, u[x]);
        i.insert(x, upper / lower);
    }
    Ok(WitnessValues { d, i })
}

/// 𝔇(φ, ·) and 𝔌(φ, ·) on the domain of a single partial isomorphism,
/// cross-checked against the singleton restrictions of φ.
pub fn witness_values_at(
    g: &FiniteMeasuredGroupoid,
    s: &Subgroupoid,
    phi: &PartialIsomorphism,
) -> Result<WitnessValues, CocycleError> {
    phi.validate(g)?;
    let ctx = Context::new(g, s)?;
    let w = witness_values(&ctx, phi)?;
    let iso = isotropy(g, s);
    for (x, a) in phi.pairs() {
        check_singleton(&ctx, &iso, a, &w.d[&x], &w.i[&x])?;
    }
    Ok(w)
}

fn isotropy(g: &FiniteMeasuredGroupoid, s: &Subgroupoid) -> Vec<Vec<usize>> {
    (0..g.n_units())
        .map(|x| {
            g.out_of(x)
                .iter()
                .copied()
                .filter(|&h| s.arrows[h] && g.range(h) == x)
                .collect()
        })
        .collect()
}

/// 𝔌 through the singleton {s(g) ↦ g}: [S_y : S_y ∩ gS_xg⁻¹]·[S_x : S_x ∩ g⁻¹S_yg]⁻¹.
fn singleton_index(g: &FiniteMeasuredGroupoid, s: &Subgroupoid, iso: &[Vec<usize>], a: usize) -> BigRational {
    let (x, y) = (g.source(a), g.range(a));
    let ai = g.inverse(a);
    let conj_in = |k: usize, left: usize, right: usize| s.arrows[g.product_all(&[left, k, right]).expect("composable")];
    let into_y = iso[x].iter().filter(|&&k| conj_in(k, a, ai)).count();
    let into_x = iso[y].iter().filter(|&&k| conj_in(k, ai, a)).count();
    BigRational::new(
        ((iso[y].len() / into_y) as i64).into(),
        ((iso[x].len() / into_x) as i64).into(),
    )
}

/// Values through the singleton {s(a) ↦ a} must agree with the family's.
fn check_singleton(
    ctx: &Context,
    iso: &[Vec<usize>],
    a: usize,
    d: &BigRational,
    i: &BigRational,
) -> Result<(), CocycleError> {
    let g = ctx.g;
    let (x, y) = (g.source(a), g.range(a));
    let d_single = (g.mass(x) / ctx.component_mass(x)) / (g.mass(y) / ctx.component_mass(y));
    let i_single = singleton_index(g, ctx.s, iso, a);
    if *d != d_single || *i != i_single {
        return Err(CocycleError::InconsistentScalar(format!(
            "arrow {a}: family gives ({d}, {i}), singleton gives ({d_single}, {i_single})"
        )));
    }
    Ok(())
}

/// 𝔇 and 𝔌 from a witness family that covers every arrow exactly once
/// (`None` uses [`arrow_partition`]). Every arrow is cross-checked against the
/// value through its singleton restriction.
pub fn modular_cocycles(
    g: &FiniteMeasuredGroupoid,
    s: &Subgroupoid,
    family: Option<&[PartialIsomorphism]>,
) -> Result<ModularCocycles, CocycleError> {
    let ctx = Context::new(g, s)?;
    let owned;
    let family = match family {
        Some(f) => f,
        None => {
            owned = arrow_partition(g);
            &owned
        }
    };
    let mut d: Vec<Option<BigRational>> = vec![None; g.n_arrows()];
    let mut i: Vec<Option<BigRational>> = vec![None; g.n_arrows()];
    for phi in family {
        phi.validate(g)?;
        let w = witness_values(&ctx, phi)?;
        for (x, a) in phi.pairs() {
            if d[a].is_some() {
                return Err(CocycleError::NotQuasiNormal(format!("arrow {a} is covered twice")));
            }
            d[a] = Some(w.d[&x].clone());
            i[a] = Some(w.i[&x].clone());
        }
    }
    let iso = isotropy(g, s);
    let mut dv = Vec::with_capacity(g.n_arrows());
    let mut iv = Vec::with_capacity(g.n_arrows());
    for a in 0..g.n_arrows() {
        let (Some(da), Some(ia)) = (d[a].take(), i[a].take()) else {
            return Err(CocycleError::NotQuasiNormal(format!("arrow {a} is not covered")));
        };
        check_singleton(&ctx, &iso, a, &da, &ia)?;
        dv.push(da);
        iv.push(ia);
    }
    Ok(ModularCocycles {
        d: GroupoidCocycle::from_ratios(dv),
        i: GroupoidCocycle::from_ratios(iv),
    })
}

#[allow(non_snake_case)]
pub fn modular_D(g: &FiniteMeasuredGroupoid, s: &Subgroupoid) -> Result<GroupoidCocycle, CocycleError> {
    Ok(modular_cocycles(g, s, None)?.d)
}

#[allow(non_snake_case)]
pub fn local_index_I(g: &FiniteMeasuredGroupoid, s: &Subgroupoid) -> Result<GroupoidCocycle, CocycleError> {
    Ok(modular_cocycles(g, s, None)?.i)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupoid::{local_index, uniform_masses, FiniteGroup};
    use num_traits::One;

    #[test]
    fn full_subgroupoid_gives_trivial_cocycles() {
        let g = FiniteMeasuredGroupoid::from_group_action(uniform_masses(4), &[("r".into(), vec![1, 2, 3, 0])], 64)
            .unwrap();
        let m = modular_cocycles(&g, &Subgroupoid::full(&g), None).unwrap();
        assert!(m.d.values.iter().chain(&m.i.values).all(|v| *v == super::super::CocycleTarget::PositiveRationals.neutral()));
    }

    #[test]
    fn subgroup_of_action_groupoid() {
        // ℤ/6 acting on ℤ/3, S = preimage of ⟨2⟩ (normal): 𝔌 ≡ 1, 𝔇 ≡ 1
        let z6 = FiniteGroup::cyclic(6);
        let g = FiniteMeasuredGroupoid::from_abstract_action(uniform_masses(3), z6.clone(), &[(1, vec![1, 2, 0])])
            .unwrap();
        let s = Subgroupoid::label_preimage(&g, &z6.subgroup(&[2])).unwrap();
        let m = modular_cocycles(&g, &s, None).unwrap();
        m.d.check(&g).unwrap();
        m.i.check(&g).unwrap();
        for a in 0..g.n_arrows() {
            assert!(m.d.ratio(a).is_one());
            assert!(m.i.ratio(a).is_one());
        }
    }

    #[test]
    fn local_index_counting_matches_union_find() {
        let z4 = FiniteGroup::cyclic(4);
        let g = FiniteMeasuredGroupoid::from_abstract_action(uniform_masses(4), z4.clone(), &[(1, vec![1, 0, 3, 2])])
            .unwrap();
        let s = Subgroupoid::label_preimage(&g, &z4.subgroup(&[2])).unwrap();
        let full = vec![true; 4];
        let pts: Vec<usize> = (0..4).collect();
        let mut side = Side::build(&g, &s, &full, &pts, |_| true);
        let big = Subgroupoid::full(&g);
        let mut side_big = Side::build(&g, &big, &full, &pts, |h| s.arrows[h]);
        for x in 0..4 {
            assert!(side.local_index(&g, &s, &full, x).is_one());
            assert_eq!(
                side_big.local_index(&g, &big, &full, x),
                BigRational::from_integer((local_index(&g, &big, &s, x) as i64).into())
            );
        }
    }
}

use std::collections::{HashMap, VecDeque};

use super::pseudo::check_isotropy_normal;
use super::{
    ergodic_decomposition, Arrow, ErgodicDecomposition, FiniteMeasuredGroupoid, GroupoidError, Subgroupoid,
    UnionFind,
};

/// 𝒢/𝒮 together with the quotient map θ.
#[derive(Clone, Debug)]
pub struct QuotientGroupoid {
    pub groupoid: FiniteMeasuredGroupoid,
    /// θ: arrow of 𝒢 ↦ arrow of the quotient.
    pub theta: Vec<usize>,
    /// π: unit of 𝒢 ↦ unit of the quotient (its 𝒮-component).
    pub pi: Vec<usize>,
    pub decomposition: ErgodicDecomposition,
}

impl QuotientGroupoid {
    /// Arrows of 𝒢 in each quotient arrow, lowest id first.
    pub fn fibers(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.groupoid.n_arrows()];
        for (g, &c) in self.theta.iter().enumerate() {
            out[c].push(g);
        }
        out
    }

    /// Factor a map on arrows through θ; `None` if it is not constant on fibers.
    pub fn factor<T: Clone + PartialEq>(&self, values: &[T]) -> Option<Vec<T>> {
        self.fibers()
            .into_iter()
            .map(|f| {
                let v = values[f[0]].clone();
                f.iter().all(|&g| values[g] == v).then_some(v)
            })
            .collect()
    }
}

/// Quotient of 𝒢 by a normal subgroupoid 𝒮 defined on all units.
///
/// Units are the 𝒮-components; arrows are the double classes 𝒮g𝒮. The
/// product of [g] and [h] is [g·k·h] for any k ∈ 𝒮 from r(h) to s(g).
pub fn quotient(g: &FiniteMeasuredGroupoid, s: &Subgroupoid) -> Result<QuotientGroupoid, GroupoidError> {
    if s.units.iter().any(|u| !u) {
        return Err(GroupoidError::InvalidInput("quotient needs a subgroupoid on all units".into()));
    }
    check_isotropy_normal(g, s)?;
    let dec = ergodic_decomposition(g, s);
    let pi: Vec<usize> = dec.component_of.iter().map(|z| z.expect("all units")).collect();

    // connecting arrows c_y ∈ 𝒮 from the component base to y
    let mut conn = vec![usize::MAX; g.n_units()];
    for comp in &dec.components {
        let b = comp[0];
        conn[b] = g.unit(b);
        let mut queue = VecDeque::from([b]);
        while let Some(y) = queue.pop_front() {
            for &k in g.out_of(y) {
                let z = g.range(k);
                if s.arrows[k] && conn[z] == usize::MAX {
                    conn[z] = g.product(k, conn[y]).expect("composable");
                    queue.push_back(z);
                }
            }
        }
    }

    let mut uf = UnionFind::new(g.n_arrows());
    for a in 0..g.n_arrows() {
        for &k in g.out_of(g.range(a)) {
            if s.arrows[k] {
                uf.union(a, g.product(k, a).expect("composable"));
            }
        }
        for &k in g.into(g.source(a)) {
            if s.arrows[k] {
                uf.union(a, g.product(a, k).expect("composable"));
            }
        }
    }
    let (class, count) = uf.classes();
    let mut rep = vec![usize::MAX; count];
    for a in (0..g.n_arrows()).rev() {
        rep[class[a]] = a;
    }
    let arrows: Vec<Arrow> = rep
        .iter()
        .map(|&a| Arrow {
            source: pi[g.source(a)],
            range: pi[g.range(a)],
            inverse: class[g.inverse(a)],
            label: format!("[{}]", g.arrow(a).label),
        })
        .collect();
    let units: Vec<usize> = dec.components.iter().map(|c| class[g.unit(c[0])]).collect();
    let mut by_source: HashMap<usize, Vec<usize>> = HashMap::new();
    for (c, a) in arrows.iter().enumerate() {
        by_source.entry(a.source).or_default().push(c);
    }
    let mut table = HashMap::new();
    for (ch, ah) in arrows.iter().enumerate() {
        for &cg in by_source.get(&ah.range).into_iter().flatten() {
            let (gr, hr) = (rep[cg], rep[ch]);
            let k = g
                .product(conn[g.source(gr)], g.inverse(conn[g.range(hr)]))
                .expect("same component");
            let prod = g.product_all(&[gr, k, hr]).expect("composable");
            table.insert((cg, ch), class[prod]);
        }
    }
    let groupoid = FiniteMeasuredGroupoid::from_table(dec.masses.clone(), arrows, units, table)?;
    Ok(QuotientGroupoid {
        groupoid,
        theta: class,
        pi,
        decomposition: dec,
    })
}

/// Checks θ is a homomorphism, ker θ = 𝒮 and the lifting property: every
/// quotient arrow lifts to an arrow out of every point over its source.
pub fn verify_quotient(g: &FiniteMeasuredGroupoid, s: &Subgroupoid, q: &QuotientGroupoid) -> Result<(), String> {
    let qg = &q.groupoid;
    for a in 0..g.n_arrows() {
        let t = q.theta[a];
        if qg.source(t) != q.pi[g.source(a)] || qg.range(t) != q.pi[g.range(a)] {
            return Err(format!("θ does not cover π at arrow {a}"));
        }
        if qg.is_unit(t) != s.arrows[a] {
            return Err(format!("ker θ differs from S at arrow {a}"));
        }
        for &b in g.out_of(g.range(a)) {
            let ba = g.product(b, a).expect("composable");
            if qg.product(q.theta[b], t) != Some(q.theta[ba]) {
                return Err(format!("θ is not multiplicative at ({b}, {a})"));
            }
        }
    }
    let mut lifts = vec![vec![false; g.n_units()]; qg.n_arrows()];
    for a in 0..g.n_arrows() {
        lifts[q.theta[a]][g.source(a)] = true;
    }
    for (c, seen) in lifts.iter().enumerate() {
        let z = qg.source(c);
        if let Some(&x) = q.decomposition.components[z].iter().find(|&&x| !seen[x]) {
            return Err(format!("quotient arrow {c} does not lift from point {x}"));
        }
    }
    qg.validate().map_err(|e| e.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupoid::{uniform_masses, FiniteGroup};

    #[test]
    fn quotient_by_everything_is_unit_groupoid() {
        let g = FiniteMeasuredGroupoid::from_group_action(uniform_masses(6), &[("r".into(), vec![2, 3, 4, 5, 0, 1])], 64)
            .unwrap();
        let s = Subgroupoid::full(&g);
        let q = quotient(&g, &s).unwrap();
        assert_eq!(q.groupoid.n_units(), 2);
        assert_eq!(q.groupoid.n_arrows(), 2);
        verify_quotient(&g, &s, &q).unwrap();
    }

    #[test]
    fn quotient_recovers_group() {
        // ℤ/6 on ℤ/3 through reduction; Λ = ⟨2⟩ is still transitive
        let z6 = FiniteGroup::cyclic(6);
        let g = FiniteMeasuredGroupoid::from_abstract_action(uniform_masses(3), z6.clone(), &[(1, vec![1, 2, 0])])
            .unwrap();
        let lam = z6.subgroup(&[2]);
        let s = Subgroupoid::label_preimage(&g, &lam).unwrap();
        let q = quotient(&g, &s).unwrap();
        verify_quotient(&g, &s, &q).unwrap();
        assert_eq!(q.groupoid.n_units(), 1);
        assert_eq!(q.groupoid.n_arrows(), 2);
    }
}

//! Finite discrete measured groupoids.
//!
//! Arrows are numbered `0..n_arrows`; every unit point `x` has a unit arrow.
//! The partial product `g·h` is defined exactly when `s(g) = r(h)`.

pub mod group;
mod invariant;
mod json;
mod pseudo;
mod quotient;
mod sub;

use std::collections::{HashMap, VecDeque};

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use thiserror::Error;

pub use group::FiniteGroup;
pub use invariant::{
    extend_invariant_map, find_invariant_vertex_map, find_invariant_vertex_map_on_graph,
    induce_finite_invariant_set, is_invariant_vertex_map, BsLabeling, LabeledGraph,
};
pub use json::{GroupoidDoc, ArrowDoc, UnitDoc};
pub use pseudo::{
    is_quasinormal, normal_witnesses, qn_membership, PartialIsomorphism, QnClass, QnReport,
};
pub use quotient::{quotient, verify_quotient, QuotientGroupoid};
pub use sub::{
    coset_representatives, ergodic_decomposition, index, local_index, saturation,
    ErgodicDecomposition, Subgroupoid,
};

pub const DEFAULT_GROUP_BOUND: usize = 512;
pub const DEFAULT_ARROW_BOUND: usize = 200_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupoidError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("generated group exceeds {bound} elements")]
    GroupTooLarge { bound: usize },
    #[error("closure exceeds {bound} arrows")]
    ClosureTooLarge { bound: usize },
    #[error("empty unit set")]
    EmptySet,
    #[error("unit {unit} has non-positive mass")]
    ZeroMass { unit: usize },
    #[error("axiom violated: {0}")]
    AxiomViolation(String),
    #[error("not in the full pseudogroup: {0}")]
    NotInFullGroup(String),
    #[error("subgroupoid is not normal (arrow {arrow} does not normalize isotropy)")]
    NotNormal { arrow: usize },
    #[error("labeling is not multiplicative at ({g}, {h})")]
    NotACocycle { g: usize, h: usize },
    #[error("index is not constant ({a} at unit {x}, {b} at unit {y})")]
    IndexNotConstant { x: usize, a: usize, y: usize, b: usize },
    #[error("not a subgroupoid: {0}")]
    NotSubgroupoid(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrow {
    pub source: usize,
    pub range: usize,
    pub inverse: usize,
    pub label: String,
}

#[derive(Clone, Debug)]
enum Product {
    Table(HashMap<(usize, usize), usize>),
    /// Arrows are determined by (range, source, group label); labels multiply.
    Labeled {
        group: FiniteGroup,
        labels: Vec<u32>,
        lookup: HashMap<(usize, usize, u32), usize>,
    },
}

#[derive(Clone, Debug)]
pub struct FiniteMeasuredGroupoid {
    masses: Vec<BigRational>,
    arrows: Vec<Arrow>,
    units: Vec<usize>,
    by_source: Vec<Vec<usize>>,
    by_range: Vec<Vec<usize>>,
    product: Product,
    /// Dense copy of a labelled lookup, indexed by (r·n + s)·|group| + label,
    /// storing arrow id + 1; built when small enough.
    dense: Option<Vec<u32>>,
    measure_preserving: bool,
}

const DENSE_LOOKUP_LIMIT: usize = 1 << 22;

/// A finite group acting on the units, possibly non-faithfully.
/// `action[γ]` is the permutation of units by which γ acts.
pub struct GroupAction {
    pub group: FiniteGroup,
    pub action: Vec<Vec<u32>>,
}

/// A partial bijection used to seed [`FiniteMeasuredGroupoid::from_partial_isos`],
/// carrying a label in the chosen label group.
#[derive(Clone, Debug)]
pub struct Seed {
    pub name: String,
    pub pairs: Vec<(usize, usize)>,
    pub label: u32,
}

/// Result of restricting to a unit subset, with index maps back to the parent.
#[derive(Clone, Debug)]
pub struct Restriction {
    pub groupoid: FiniteMeasuredGroupoid,
    pub units: Vec<usize>,
    pub arrows: Vec<usize>,
}

fn check_masses(masses: &[BigRational]) -> Result<(), GroupoidError> {
    if masses.is_empty() {
        return Err(GroupoidError::EmptySet);
    }
    match masses.iter().position(|m| !m.is_positive()) {
        Some(unit) => Err(GroupoidError::ZeroMass { unit }),
        None => Ok(()),
    }
}

pub fn uniform_masses(n: usize) -> Vec<BigRational> {
    vec![BigRational::new(1.into(), (n as i64).into()); n]
}

impl FiniteMeasuredGroupoid {
    fn assemble(
        masses: Vec<BigRational>,
        arrows: Vec<Arrow>,
        units: Vec<usize>,
        product: Product,
    ) -> Self {
        let n = masses.len();
        let mut by_source = vec![Vec::new(); n];
        let mut by_range = vec![Vec::new(); n];
        for (id, a) in arrows.iter().enumerate() {
            by_source[a.source].push(id);
            by_range[a.range].push(id);
        }
        let measure_preserving = arrows.iter().all(|a| masses[a.source] == masses[a.range]);
        let dense = match &product {
            Product::Labeled { group, lookup, .. }
                if n * n * group.order() <= DENSE_LOOKUP_LIMIT && arrows.len() < u32::MAX as usize =>
            {
                let mut t = vec![0u32; n * n * group.order()];
                for (&(r, s, l), &g) in lookup {
                    t[(r * n + s) * group.order() + l as usize] = g as u32 + 1;
                }
                Some(t)
            }
            _ => None,
        };
        FiniteMeasuredGroupoid {
            masses,
            arrows,
            units,
            by_source,
            by_range,
            product,
            dense,
            measure_preserving,
        }
    }

    /// Explicit arrows and product table. Composability and the unit
    /// arrows are taken as given; call [`validate`](Self::validate) to check.
    pub fn from_table(
        masses: Vec<BigRational>,
        arrows: Vec<Arrow>,
        units: Vec<usize>,
        table: HashMap<(usize, usize), usize>,
    ) -> Result<Self, GroupoidError> {
        check_masses(&masses)?;
        if units.len() != masses.len() {
            return Err(GroupoidError::InvalidInput("one unit arrow per point required".into()));
        }
        let n = masses.len();
        for (id, a) in arrows.iter().enumerate() {
            if a.source >= n || a.range >= n || a.inverse >= arrows.len() {
                return Err(GroupoidError::InvalidInput(format!("arrow {id} out of range")));
            }
        }
        if units.iter().any(|&u| u >= arrows.len()) {
            return Err(GroupoidError::InvalidInput("unit arrow out of range".into()));
        }
        for (&(g, h), &c) in &table {
            if g >= arrows.len() || h >= arrows.len() || c >= arrows.len() {
                return Err(GroupoidError::InvalidInput("product table entry out of range".into()));
            }
        }
        Ok(Self::assemble(masses, arrows, units, Product::Table(table)))
    }

    /// Γ ⋉ X for the transformation group generated by `gens`.
    pub fn from_group_action(
        masses: Vec<BigRational>,
        gens: &[(String, Vec<u32>)],
        bound: usize,
    ) -> Result<Self, GroupoidError> {
        let group = FiniteGroup::generated_by(masses.len(), gens, bound)?;
        let action = (0..group.order() as u32).map(|g| group.perm(g).to_vec()).collect();
        Self::from_action(masses, GroupAction { group, action })
    }

    /// Γ ⋉ X for an abstract finite group whose generators act by the given
    /// unit permutations. The action need not be faithful.
    pub fn from_abstract_action(
        masses: Vec<BigRational>,
        group: FiniteGroup,
        gens: &[(u32, Vec<u32>)],
    ) -> Result<Self, GroupoidError> {
        let n = masses.len();
        for (_, p) in gens {
            if !group::is_permutation(p, n) {
                return Err(GroupoidError::InvalidInput("generator action is not a permutation".into()));
            }
        }
        let mut action: Vec<Option<Vec<u32>>> = vec![None; group.order()];
        action[0] = Some((0..n as u32).collect());
        let mut queue = VecDeque::from([0u32]);
        while let Some(g) = queue.pop_front() {
            let ag = action[g as usize].clone().expect("visited");
            for (h, p) in gens {
                let hg = group.mul(*h, g);
                let a = group::compose(p, &ag);
                match &action[hg as usize] {
                    Some(prev) if *prev != a => {
                        return Err(GroupoidError::InvalidInput(format!(
                            "group element {} acts inconsistently",
                            group.name(hg)
                        )))
                    }
                    Some(_) => {}
                    None => {
                        action[hg as usize] = Some(a);
                        queue.push_back(hg);
                    }
                }
            }
        }
        let action: Option<Vec<Vec<u32>>> = action.into_iter().collect();
        let action = action
            .ok_or_else(|| GroupoidError::InvalidInput("generators do not generate the group".into()))?;
        Self::from_action(masses, GroupAction { group, action })
    }

    pub fn from_action(masses: Vec<BigRational>, act: GroupAction) -> Result<Self, GroupoidError> {
        check_masses(&masses)?;
        let n = masses.len();
        let GroupAction { group, action } = act;
        let order = group.order();
        let id = |g: u32, x: usize| g as usize * n + x;
        let mut arrows = Vec::with_capacity(order * n);
        let mut labels = Vec::with_capacity(order * n);
        let mut lookup = HashMap::with_capacity(order * n);
        for g in 0..order as u32 {
            let gi = group.inverse(g);
            for x in 0..n {
                let y = action[g as usize][x] as usize;
                lookup.insert((y, x, g), arrows.len());
                arrows.push(Arrow {
                    source: x,
                    range: y,
                    inverse: id(gi, y),
                    label: group.name(g).to_string(),
                });
                labels.push(g);
            }
        }
        let units = (0..n).collect();
        Ok(Self::assemble(
            masses,
            arrows,
            units,
            Product::Labeled {
                group,
                labels,
                lookup,
            },
        ))
    }

    /// The groupoid of words in the seeds and their inverses, evaluated
    /// pointwise. Two words give the same arrow iff they agree on source,
    /// range and image in `label_group`; with the trivial label group the
    /// result is the principal groupoid of the generated relation.
    pub fn from_partial_isos(
        masses: Vec<BigRational>,
        seeds: &[Seed],
        label_group: FiniteGroup,
        bound: usize,
    ) -> Result<Self, GroupoidError> {
        check_masses(&masses)?;
        let n = masses.len();
        let mut fwd: Vec<HashMap<usize, usize>> = Vec::new();
        let mut bwd: Vec<HashMap<usize, usize>> = Vec::new();
        for s in seeds {
            if s.label as usize >= label_group.order() {
                return Err(GroupoidError::InvalidInput(format!("seed {} has an unknown label", s.name)));
            }
            let mut f = HashMap::new();
            let mut b = HashMap::new();
            for &(x, y) in &s.pairs {
                if x >= n || y >= n || f.insert(x, y).is_some() || b.insert(y, x).is_some() {
                    return Err(GroupoidError::InvalidInput(format!(
                        "seed {} is not a partial bijection",
                        s.name
                    )));
                }
            }
            fwd.push(f);
            bwd.push(b);
        }
        let mut arrows = Vec::new();
        let mut labels = Vec::new();
        let mut lookup: HashMap<(usize, usize, u32), usize> = HashMap::new();
        let mut units = Vec::with_capacity(n);
        for x in 0..n {
            units.push(arrows.len());
            lookup.insert((x, x, 0), arrows.len());
            arrows.push((x, x, String::from("e")));
            labels.push(0u32);
            let mut head = arrows.len() - 1;
            while head < arrows.len() {
                let (y, _, word) = arrows[head].clone();
                let l = labels[head];
                for (i, s) in seeds.iter().enumerate() {
                    for (dir, map) in [(1, &fwd[i]), (-1, &bwd[i])] {
                        let Some(&z) = map.get(&y) else { continue };
                        let sl = if dir == 1 { s.label } else { label_group.inverse(s.label) };
                        let nl = label_group.mul(sl, l);
                        if lookup.contains_key(&(z, x, nl)) {
                            continue;
                        }
                        if arrows.len() >= bound {
                            return Err(GroupoidError::ClosureTooLarge { bound });
                        }
                        let letter = if dir == 1 { s.name.clone() } else { format!("{}^-1", s.name) };
                        let w = if word == "e" { letter } else { format!("{letter}*{word}") };
                        lookup.insert((z, x, nl), arrows.len());
                        arrows.push((z, x, w));
                        labels.push(nl);
                    }
                }
                head += 1;
            }
        }
        let mut out = Vec::with_capacity(arrows.len());
        for (id, (r, s, word)) in arrows.into_iter().enumerate() {
            let inv = lookup[&(s, r, label_group.inverse(labels[id]))];
            out.push(Arrow {
                source: s,
                range: r,
                inverse: inv,
                label: word,
            });
        }
        Ok(Self::assemble(
            masses,
            out,
            units,
            Product::Labeled {
                group: label_group,
                labels,
                lookup,
            },
        ))
    }

    pub fn n_units(&self) -> usize {
        self.masses.len()
    }

    pub fn n_arrows(&self) -> usize {
        self.arrows.len()
    }

    pub fn mass(&self, x: usize) -> &BigRational {
        &self.masses[x]
    }

    pub fn masses(&self) -> &[BigRational] {
        &self.masses
    }

    pub fn total_mass(&self) -> BigRational {
        self.masses.iter().fold(BigRational::zero(), |a, m| a + m)
    }

    pub fn mass_of(&self, set: &[bool]) -> BigRational {
        set.iter()
            .zip(&self.masses)
            .filter(|(b, _)| **b)
            .fold(BigRational::zero(), |a, (_, m)| a + m)
    }

    pub fn arrow(&self, g: usize) -> &Arrow {
        &self.arrows[g]
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn source(&self, g: usize) -> usize {
        self.arrows[g].source
    }

    pub fn range(&self, g: usize) -> usize {
        self.arrows[g].range
    }

    pub fn inverse(&self, g: usize) -> usize {
        self.arrows[g].inverse
    }

    pub fn unit(&self, x: usize) -> usize {
        self.units[x]
    }

    pub fn is_unit(&self, g: usize) -> bool {
        let a = &self.arrows[g];
        a.source == a.range && self.units[a.source] == g
    }

    /// Arrows with source `x`.
    pub fn out_of(&self, x: usize) -> &[usize] {
        &self.by_source[x]
    }

    /// Arrows with range `x`.
    pub fn into(&self, x: usize) -> &[usize] {
        &self.by_range[x]
    }

    pub fn is_measure_preserving(&self) -> bool {
        self.measure_preserving
    }

    /// `g·h`, defined iff `s(g) = r(h)`.
    pub fn product(&self, g: usize, h: usize) -> Option<usize> {
        if self.arrows[g].source != self.arrows[h].range {
            return None;
        }
        match &self.product {
            Product::Table(t) => t.get(&(g, h)).copied(),
            Product::Labeled {
                group,
                labels,
                lookup,
            } => {
                let l = group.mul(labels[g], labels[h]);
                let (r, s) = (self.arrows[g].range, self.arrows[h].source);
                match &self.dense {
                    Some(t) => {
                        let id = t[(r * self.n_units() + s) * group.order() + l as usize];
                        id.checked_sub(1).map(|i| i as usize)
                    }
                    None => lookup.get(&(r, s, l)).copied(),
                }
            }
        }
    }

    /// Product of a composable sequence, left to right as written.
    pub fn product_all(&self, gs: &[usize]) -> Option<usize> {
        let (&last, rest) = gs.split_last()?;
        rest.iter().rev().try_fold(last, |acc, &g| self.product(g, acc))
    }

    /// Labels in a finite group when the groupoid was built from an action or
    /// from labelled seeds; `g ↦ label` is then a homomorphism.
    pub fn label_homomorphism(&self) -> Option<(&FiniteGroup, &[u32])> {
        match &self.product {
            Product::Labeled { group, labels, .. } => Some((group, labels)),
            Product::Table(_) => None,
        }
    }

    /// Every composable pair with its product, for serialization.
    pub fn product_table(&self) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        for h in 0..self.n_arrows() {
            for &g in self.out_of(self.range(h)) {
                if let Some(c) = self.product(g, h) {
                    out.push((g, h, c));
                }
            }
        }
        out
    }

    /// Exhaustive check of the groupoid axioms.
    pub fn validate(&self) -> Result<(), GroupoidError> {
        let bad = |m: String| Err(GroupoidError::AxiomViolation(m));
        let n = self.n_units();
        for x in 0..n {
            let u = self.units[x];
            if self.source(u) != x || self.range(u) != x {
                return bad(format!("unit arrow {u} at point {x} is not a loop at {x}"));
            }
            if self.inverse(u) != u {
                return bad(format!("unit arrow {u} is not self-inverse"));
            }
        }
        for g in 0..self.n_arrows() {
            let a = &self.arrows[g];
            let gi = a.inverse;
            if self.source(gi) != a.range || self.range(gi) != a.source {
                return bad(format!("inverse of arrow {g} has the wrong endpoints"));
            }
            if self.inverse(gi) != g {
                return bad(format!("inverse is not an involution at arrow {g}"));
            }
            if self.product(self.units[a.range], g) != Some(g) || self.product(g, self.units[a.source]) != Some(g) {
                return bad(format!("unit law fails at arrow {g}"));
            }
            if self.product(g, gi) != Some(self.units[a.range]) {
                return bad(format!("g·g⁻¹ is not the unit at r(g) for arrow {g}"));
            }
            if self.product(gi, g) != Some(self.units[a.source]) {
                return bad(format!("g⁻¹·g is not the unit at s(g) for arrow {g}"));
            }
        }
        if let Product::Table(t) = &self.product {
            for &(g, h) in t.keys() {
                if self.source(g) != self.range(h) {
                    return bad(format!("product table defines non-composable pair ({g}, {h})"));
                }
            }
        }
        for h in 0..self.n_arrows() {
            for &g in self.out_of(self.range(h)) {
                let Some(gh) = self.product(g, h) else {
                    return bad(format!("product of composable pair ({g}, {h}) is undefined"));
                };
                if self.source(gh) != self.source(h) || self.range(gh) != self.range(g) {
                    return bad(format!("product ({g}, {h}) has the wrong endpoints"));
                }
                for &f in self.out_of(self.range(g)) {
                    let left = self.product(f, g).and_then(|fg| self.product(fg, h));
                    let right = self.product(f, gh);
                    if left != right {
                        return bad(format!("associativity fails at ({f}, {g}, {h})"));
                    }
                }
            }
        }
        Ok(())
    }

    /// (𝒢)_A: arrows with both endpoints in `a`.
    pub fn restrict(&self, a: &[bool]) -> Result<Restriction, GroupoidError> {
        let units: Vec<usize> = (0..self.n_units()).filter(|&x| a[x]).collect();
        if units.is_empty() {
            return Err(GroupoidError::EmptySet);
        }
        let mut unit_new = vec![usize::MAX; self.n_units()];
        for (i, &x) in units.iter().enumerate() {
            unit_new[x] = i;
        }
        let arrows: Vec<usize> = (0..self.n_arrows())
            .filter(|&g| a[self.source(g)] && a[self.range(g)])
            .collect();
        let mut arrow_new = vec![usize::MAX; self.n_arrows()];
        for (i, &g) in arrows.iter().enumerate() {
            arrow_new[g] = i;
        }
        let new_arrows = arrows
            .iter()
            .map(|&g| {
                let a = &self.arrows[g];
                Arrow {
                    source: unit_new[a.source],
                    range: unit_new[a.range],
                    inverse: arrow_new[a.inverse],
                    label: a.label.clone(),
                }
            })
            .collect();
        let product = match &self.product {
            Product::Table(t) => Product::Table(
                t.iter()
                    .filter(|(&(g, h), _)| arrow_new[g] != usize::MAX && arrow_new[h] != usize::MAX)
                    .map(|(&(g, h), &c)| ((arrow_new[g], arrow_new[h]), arrow_new[c]))
                    .collect(),
            ),
            Product::Labeled {
                group,
                labels,
                lookup,
            } => Product::Labeled {
                group: group.clone(),
                labels: arrows.iter().map(|&g| labels[g]).collect(),
                lookup: lookup
                    .iter()
                    .filter(|(_, &g)| arrow_new[g] != usize::MAX)
                    .map(|(&(r, s, l), &g)| ((unit_new[r], unit_new[s], l), arrow_new[g]))
                    .collect(),
            },
        };
        let masses = units.iter().map(|&x| self.masses[x].clone()).collect();
        let unit_arrows = units.iter().map(|&x| arrow_new[self.units[x]]).collect();
        Ok(Restriction {
            groupoid: Self::assemble(masses, new_arrows, unit_arrows, product),
            units,
            arrows,
        })
    }

    /// Masses rescaled to total 1.
    pub fn normalized(&self) -> Self {
        let total = self.total_mass();
        let mut g = self.clone();
        for m in &mut g.masses {
            *m = &*m / &total;
        }
        g
    }

    /// Same groupoid with new point masses.
    pub fn with_masses(&self, masses: Vec<BigRational>) -> Result<Self, GroupoidError> {
        check_masses(&masses)?;
        if masses.len() != self.n_units() {
            return Err(GroupoidError::InvalidInput("mass vector has the wrong length".into()));
        }
        Ok(Self::assemble(masses, self.arrows.clone(), self.units.clone(), self.product.clone()))
    }

    /// Whether μ(r∘φ(A)) = μ(A) for every partial isomorphism, i.e. whether
    /// every arrow joins points of equal mass.
    pub fn check_measure_preserving(&self) -> bool {
        self.arrows
            .iter()
            .all(|a| self.masses[a.source] == self.masses[a.range])
    }
}

/// Union-find over `0..n` with path halving.
#[derive(Clone, Debug)]
pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }

    /// Dense class ids in order of first appearance.
    pub fn classes(&mut self) -> (Vec<usize>, usize) {
        let n = self.parent.len();
        let mut id = vec![usize::MAX; n];
        let mut out = vec![0; n];
        let mut next = 0;
        for x in 0..n {
            let r = self.find(x);
            if id[r] == usize::MAX {
                id[r] = next;
                next += 1;
            }
            out[x] = id[r];
        }
        (out, next)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyc(n: u32, step: u32) -> Vec<u32> {
        (0..n).map(|i| (i + step) % n).collect()
    }

    #[test]
    fn regular_action_is_transitive() {
        let g = FiniteMeasuredGroupoid::from_group_action(uniform_masses(4), &[("g".into(), cyc(4, 1))], 64).unwrap();
        assert_eq!(g.n_arrows(), 16);
        g.validate().unwrap();
        assert!(g.is_measure_preserving());
    }

    #[test]
    fn trivial_group_gives_units() {
        let g = FiniteMeasuredGroupoid::from_group_action(uniform_masses(3), &[], 64).unwrap();
        assert_eq!(g.n_arrows(), 3);
        assert!((0..3).all(|x| g.is_unit(x)));
    }

    #[test]
    fn non_faithful_action() {
        let z4 = FiniteGroup::cyclic(4);
        let g = FiniteMeasuredGroupoid::from_abstract_action(uniform_masses(2), z4, &[(1, vec![1, 0])]).unwrap();
        assert_eq!(g.n_arrows(), 8);
        g.validate().unwrap();
        let r = g.restrict(&[true, false]).unwrap();
        assert_eq!(r.groupoid.n_arrows(), 2);
        r.groupoid.validate().unwrap();
    }

    #[test]
    fn inconsistent_action_rejected() {
        let z4 = FiniteGroup::cyclic(4);
        // the generator of ℤ/4 cannot act by a 3-cycle
        assert!(FiniteMeasuredGroupoid::from_abstract_action(uniform_masses(3), z4, &[(1, vec![1, 2, 0])]).is_err());
    }

    #[test]
    fn partial_iso_closure() {
        let seed = Seed {
            name: "s".into(),
            pairs: (0..5).map(|i| (i, (i + 1) % 5)).collect(),
            label: 0,
        };
        let g = FiniteMeasuredGroupoid::from_partial_isos(uniform_masses(5), &[seed], FiniteGroup::trivial(), 1000).unwrap();
        assert_eq!(g.n_arrows(), 25);
        g.validate().unwrap();
        let e = FiniteMeasuredGroupoid::from_partial_isos(uniform_masses(5), &[], FiniteGroup::trivial(), 1000).unwrap();
        assert_eq!(e.n_arrows(), 5);
    }

    #[test]
    fn labelled_closure_keeps_parallel_arrows() {
        // a loop at 0 labelled by the generator of ℤ/3
        let seed = Seed {
            name: "c".into(),
            pairs: vec![(0, 0)],
            label: 1,
        };
        let g = FiniteMeasuredGroupoid::from_partial_isos(uniform_masses(2), &[seed], FiniteGroup::cyclic(3), 100).unwrap();
        assert_eq!(g.n_arrows(), 4);
        g.validate().unwrap();
    }

    #[test]
    fn zero_mass_rejected() {
        let m = vec![BigRational::zero(), BigRational::from_integer(1.into())];
        assert!(matches!(
            FiniteMeasuredGroupoid::from_group_action(m, &[], 8),
            Err(GroupoidError::ZeroMass { unit: 0 })
        ));
    }
}

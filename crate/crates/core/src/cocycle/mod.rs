//! Cocycles on finite groupoids: Radon-Nikodym, the modular cocycle 𝔇, the
//! local-index cocycle 𝔌, cohomology, Mackey ranges and type classification.

mod level_model;
mod mackey;
mod modular;
mod types;

use std::collections::VecDeque;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::bs::BSParams;
use crate::groupoid::{FiniteMeasuredGroupoid, GroupoidError};
use crate::tree::{conjugation_indices, TreeError, DEFAULT_RADIUS};

pub use level_model::BSLevelModel;
pub use mackey::{
    flow_type, mackey_range, power_exponents, CocycleGraph, FlowType, MackeyRange,
};
pub use modular::{
    arrow_partition, local_index_I, modular_D, modular_cocycles, witness_values_at, ModularCocycles, WitnessValues,
};
pub use types::{classify_graph, classify_type, NonsingularGraph, TypeLabel};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CocycleError {
    #[error(transparent)]
    Groupoid(#[from] GroupoidError),
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error("groupoid is not measure-preserving")]
    NotMeasurePreserving,
    #[error("witness family is not usable: {0}")]
    NotQuasiNormal(String),
    #[error("scalar is not constant on a component: {0}")]
    InconsistentScalar(String),
    #[error("cocycle targets differ")]
    TargetMismatch,
    #[error("not multiplicative at ({g}, {h})")]
    NotMultiplicative { g: usize, h: usize },
    #[error("value {0} is not a power of |q/p|")]
    NotPowerValued(String),
    #[error("skew product has infinitely many components (window {window})")]
    InfiniteComponents { window: i64 },
    #[error("invalid level: {0}")]
    InvalidLevel(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CocycleTarget {
    /// Multiplicative positive rationals.
    PositiveRationals,
    Integers,
    Cyclic(u64),
}

impl fmt::Display for CocycleTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CocycleTarget::PositiveRationals => write!(f, "Q+"),
            CocycleTarget::Integers => write!(f, "Z"),
            CocycleTarget::Cyclic(n) => write!(f, "Z/{n}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum CocycleValue {
    Ratio(BigRational),
    Int(i64),
    Mod(u64),
}

impl fmt::Display for CocycleValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CocycleValue::Ratio(r) => write!(f, "{r}"),
            CocycleValue::Int(n) => write!(f, "{n}"),
            CocycleValue::Mod(n) => write!(f, "{n}"),
        }
    }
}

impl CocycleTarget {
    pub fn neutral(&self) -> CocycleValue {
        match self {
            CocycleTarget::PositiveRationals => CocycleValue::Ratio(BigRational::one()),
            CocycleTarget::Integers => CocycleValue::Int(0),
            CocycleTarget::Cyclic(_) => CocycleValue::Mod(0),
        }
    }

    pub fn mul(&self, a: &CocycleValue, b: &CocycleValue) -> CocycleValue {
        match (self, a, b) {
            (CocycleTarget::PositiveRationals, CocycleValue::Ratio(x), CocycleValue::Ratio(y)) => {
                CocycleValue::Ratio(x * y)
            }
            (CocycleTarget::Integers, CocycleValue::Int(x), CocycleValue::Int(y)) => {
                CocycleValue::Int(x.checked_add(*y).expect("integer cocycle overflow"))
            }
            (CocycleTarget::Cyclic(n), CocycleValue::Mod(x), CocycleValue::Mod(y)) => CocycleValue::Mod((x + y) % n),
            _ => panic!("value does not belong to the target {self}"),
        }
    }

    pub fn inv(&self, a: &CocycleValue) -> CocycleValue {
        match (self, a) {
            (CocycleTarget::PositiveRationals, CocycleValue::Ratio(x)) => CocycleValue::Ratio(x.recip()),
            (CocycleTarget::Integers, CocycleValue::Int(x)) => CocycleValue::Int(-x),
            (CocycleTarget::Cyclic(n), CocycleValue::Mod(x)) => CocycleValue::Mod((n - x % n) % n),
            _ => panic!("value does not belong to the target {self}"),
        }
    }

    pub fn contains(&self, a: &CocycleValue) -> bool {
        match (self, a) {
            (CocycleTarget::PositiveRationals, CocycleValue::Ratio(x)) => *x > BigRational::zero(),
            (CocycleTarget::Integers, CocycleValue::Int(_)) => true,
            (CocycleTarget::Cyclic(n), CocycleValue::Mod(x)) => x < n,
            _ => false,
        }
    }
}

/// A map from arrows to a value group, indexed by arrow id.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupoidCocycle {
    pub target: CocycleTarget,
    pub values: Vec<CocycleValue>,
}

impl GroupoidCocycle {
    pub fn from_ratios(values: Vec<BigRational>) -> Self {
        GroupoidCocycle {
            target: CocycleTarget::PositiveRationals,
            values: values.into_iter().map(CocycleValue::Ratio).collect(),
        }
    }

    pub fn ratio(&self, g: usize) -> &BigRational {
        match &self.values[g] {
            CocycleValue::Ratio(r) => r,
            v => panic!("{v} is not a rational value"),
        }
    }

    /// Labels of a groupoid built over ℤ/n (element k is the k-th power of
    /// the generator), read as a cocycle into ℤ/n.
    pub fn from_cyclic_labels(g: &FiniteMeasuredGroupoid) -> Option<Self> {
        let (group, labels) = g.label_homomorphism()?;
        let n = group.order();
        let is_standard = (0..n as u32).all(|k| group.perm(k).first().map_or(n == 1, |&x| x == k));
        if !is_standard {
            return None;
        }
        Some(GroupoidCocycle {
            target: CocycleTarget::Cyclic(n as u64),
            values: labels.iter().map(|&l| CocycleValue::Mod(l as u64)).collect(),
        })
    }

    /// Pointwise product of two cocycles with the same target.
    pub fn pointwise(&self, other: &GroupoidCocycle) -> Result<GroupoidCocycle, CocycleError> {
        if self.target != other.target {
            return Err(CocycleError::TargetMismatch);
        }
        Ok(GroupoidCocycle {
            target: self.target,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| self.target.mul(a, b))
                .collect(),
        })
    }

    /// Exhaustive check over composable pairs, plus units and inverses.
    pub fn check(&self, g: &FiniteMeasuredGroupoid) -> Result<(), CocycleError> {
        let t = &self.target;
        for h in 0..g.n_arrows() {
            if !t.contains(&self.values[h]) {
                return Err(CocycleError::NotMultiplicative { g: h, h });
            }
            for &k in g.out_of(g.range(h)) {
                let kh = g.product(k, h).expect("composable");
                if self.values[kh] != t.mul(&self.values[k], &self.values[h]) {
                    return Err(CocycleError::NotMultiplicative { g: k, h });
                }
            }
        }
        Ok(())
    }

    /// Restriction to (𝒢)_A, given the parent arrow ids of the restriction.
    pub fn restrict(&self, arrows: &[usize]) -> GroupoidCocycle {
        GroupoidCocycle {
            target: self.target,
            values: arrows.iter().map(|&a| self.values[a].clone()).collect(),
        }
    }

    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        for (i, v) in self.values.iter().enumerate() {
            m.insert(i.to_string(), Value::String(v.to_string()));
        }
        json!({ "target": self.target.to_string(), "values": Value::Object(m) })
    }
}

/// δ(g) = μ(r(g))/μ(s(g)).
pub fn radon_nikodym(g: &FiniteMeasuredGroupoid) -> GroupoidCocycle {
    GroupoidCocycle::from_ratios(
        g.arrows()
            .iter()
            .map(|a| g.mass(a.range) / g.mass(a.source))
            .collect(),
    )
}

/// Whether c2(g) = ψ(r(g))·c1(g)·ψ(s(g))⁻¹ for every arrow.
pub fn is_transfer(
    g: &FiniteMeasuredGroupoid,
    c1: &GroupoidCocycle,
    c2: &GroupoidCocycle,
    psi: &[CocycleValue],
) -> bool {
    let t = &c1.target;
    c1.target == c2.target
        && (0..g.n_arrows()).all(|h| {
            let a = g.arrow(h);
            let rhs = t.mul(&t.mul(&psi[a.range], &c1.values[h]), &t.inv(&psi[a.source]));
            c2.values[h] == rhs
        })
}

/// A transfer map ψ with c2 = ψ(r)·c1·ψ(s)⁻¹, found by propagating along a
/// breadth-first spanning tree of each component (ψ = neutral at the first
/// point) and then checking every arrow. `None` if the check fails.
pub fn cohomologous(
    g: &FiniteMeasuredGroupoid,
    c1: &GroupoidCocycle,
    c2: &GroupoidCocycle,
) -> Result<Option<Vec<CocycleValue>>, CocycleError> {
    if c1.target != c2.target {
        return Err(CocycleError::TargetMismatch);
    }
    let t = c1.target;
    let mut psi: Vec<Option<CocycleValue>> = vec![None; g.n_units()];
    for b in 0..g.n_units() {
        if psi[b].is_some() {
            continue;
        }
        psi[b] = Some(t.neutral());
        let mut queue = VecDeque::from([b]);
        while let Some(y) = queue.pop_front() {
            for &k in g.out_of(y) {
                let z = g.range(k);
                if psi[z].is_none() {
                    // ψ(r) = c2(k)·ψ(s)·c1(k)⁻¹
                    let py = psi[y].as_ref().expect("visited");
                    psi[z] = Some(t.mul(&t.mul(&c2.values[k], py), &t.inv(&c1.values[k])));
                    queue.push_back(z);
                }
            }
        }
    }
    let psi: Vec<CocycleValue> = psi.into_iter().map(|v| v.expect("all visited")).collect();
    Ok(is_transfer(g, c1, c2, &psi).then_some(psi))
}

/// [N : N₊]·[N : N₋]⁻¹.
pub fn group_index_ratio(n_plus: &BigInt, n_minus: &BigInt) -> BigRational {
    BigRational::new(n_plus.clone(), n_minus.clone())
}

/// [E : E ∩ γEγ⁻¹]·[E : E ∩ γ⁻¹Eγ]⁻¹ for E = ⟨a⟩, from stabilizer indices.
pub fn bs_conjugation_ratio(gamma: &crate::bs::GroupWord, params: &BSParams) -> Result<BigRational, CocycleError> {
    let (plus, minus) = conjugation_indices(gamma, params, DEFAULT_RADIUS)?;
    Ok(group_index_ratio(&plus, &minus))
}

/// Exponents of the primes in a positive rational, as (prime, exponent).
pub(crate) fn prime_exponents(r: &BigRational) -> Vec<(BigInt, i64)> {
    let mut out: Vec<(BigInt, i64)> = Vec::new();
    for (part, sign) in [(r.numer().clone(), 1i64), (r.denom().clone(), -1i64)] {
        let mut n = part;
        let mut d = BigInt::from(2);
        while &d * &d <= n {
            let mut e = 0;
            while n.is_multiple_of(&d) {
                n /= &d;
                e += 1;
            }
            if e > 0 {
                out.push((d.clone(), sign * e));
            }
            d += 1;
        }
        if n > BigInt::one() {
            out.push((n, sign));
        }
    }
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupoid::uniform_masses;

    #[test]
    fn radon_nikodym_swap() {
        let m = vec![BigRational::new(1.into(), 3.into()), BigRational::new(2.into(), 3.into())];
        let g = FiniteMeasuredGroupoid::from_group_action(m, &[("s".into(), vec![1, 0])], 8).unwrap();
        let rn = radon_nikodym(&g);
        rn.check(&g).unwrap();
        let swap01 = (0..g.n_arrows()).find(|&a| g.source(a) == 0 && g.range(a) == 1).unwrap();
        assert_eq!(rn.ratio(swap01).to_string(), "2");
        assert_eq!(rn.ratio(g.inverse(swap01)).to_string(), "1/2");
        let u = FiniteMeasuredGroupoid::from_group_action(uniform_masses(3), &[("r".into(), vec![1, 2, 0])], 8).unwrap();
        assert!(radon_nikodym(&u).values.iter().all(|v| *v == CocycleTarget::PositiveRationals.neutral()));
    }

    #[test]
    fn cohomologous_to_itself() {
        let m = vec![BigRational::new(1.into(), 3.into()), BigRational::new(2.into(), 3.into())];
        let g = FiniteMeasuredGroupoid::from_group_action(m, &[("s".into(), vec![1, 0])], 8).unwrap();
        let rn = radon_nikodym(&g);
        let psi = cohomologous(&g, &rn, &rn).unwrap().unwrap();
        assert!(psi.iter().all(|v| *v == CocycleTarget::PositiveRationals.neutral()));
        // δ is a coboundary: cohomologous to the trivial cocycle
        let triv = GroupoidCocycle::from_ratios(vec![BigRational::one(); g.n_arrows()]);
        assert!(cohomologous(&g, &triv, &rn).unwrap().is_some());
    }

    #[test]
    fn conjugation_ratio_of_t() {
        let p = BSParams::new(2, 3).unwrap();
        let r = bs_conjugation_ratio(&"t".parse().unwrap(), &p).unwrap();
        assert_eq!(r, BigRational::new(3.into(), 2.into()));
        assert_eq!(bs_conjugation_ratio(&"a^4".parse().unwrap(), &p).unwrap(), BigRational::one());
    }

    #[test]
    fn prime_factorization() {
        let r = BigRational::new(12.into(), 5.into());
        assert_eq!(
            prime_exponents(&r),
            vec![(BigInt::from(2), 2), (BigInt::from(3), 1), (BigInt::from(5), -1)]
        );
    }
}

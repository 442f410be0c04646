use std::collections::{BTreeMap, HashSet};

use serde::Serialize;

use super::sub::coset_representatives;
use super::{index, FiniteMeasuredGroupoid, GroupoidError, Subgroupoid};

/// An element of [[𝒢]]: one arrow out of each domain point, with the range
/// map injective.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct PartialIsomorphism {
    map: BTreeMap<usize, usize>,
}

impl PartialIsomorphism {
    /// From arrows; the domain point of each arrow is its source.
    pub fn from_arrows(g: &FiniteMeasuredGroupoid, arrows: &[usize]) -> Result<Self, GroupoidError> {
        let mut map = BTreeMap::new();
        for &a in arrows {
            if a >= g.n_arrows() {
                return Err(GroupoidError::NotInFullGroup(format!("no arrow {a}")));
            }
            if map.insert(g.source(a), a).is_some() {
                return Err(GroupoidError::NotInFullGroup(format!(
                    "two arrows out of point {}",
                    g.source(a)
                )));
            }
        }
        let phi = PartialIsomorphism { map };
        phi.validate(g)?;
        Ok(phi)
    }

    /// The identity of [[𝒢]] restricted to `set`.
    pub fn identity_on(g: &FiniteMeasuredGroupoid, set: &[bool]) -> Self {
        PartialIsomorphism {
            map: (0..g.n_units()).filter(|&x| set[x]).map(|x| (x, g.unit(x))).collect(),
        }
    }

    pub fn validate(&self, g: &FiniteMeasuredGroupoid) -> Result<(), GroupoidError> {
        let mut seen = HashSet::new();
        for (&x, &a) in &self.map {
            if a >= g.n_arrows() || g.source(a) != x {
                return Err(GroupoidError::NotInFullGroup(format!("arrow at {x} does not start at {x}")));
            }
            if !seen.insert(g.range(a)) {
                return Err(GroupoidError::NotInFullGroup(format!(
                    "range point {} is hit twice",
                    g.range(a)
                )));
            }
        }
        Ok(())
    }

    pub fn get(&self, x: usize) -> Option<usize> {
        self.map.get(&x).copied()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.map.iter().map(|(&x, &a)| (x, a))
    }

    pub fn domain_mask(&self, g: &FiniteMeasuredGroupoid) -> Vec<bool> {
        let mut m = vec![false; g.n_units()];
        for &x in self.map.keys() {
            m[x] = true;
        }
        m
    }

    pub fn range_mask(&self, g: &FiniteMeasuredGroupoid) -> Vec<bool> {
        let mut m = vec![false; g.n_units()];
        for &a in self.map.values() {
            m[g.range(a)] = true;
        }
        m
    }

    /// r∘φ(x).
    pub fn target(&self, g: &FiniteMeasuredGroupoid, x: usize) -> Option<usize> {
        self.get(x).map(|a| g.range(a))
    }

    /// U_φ(h) = φ(r(h))·h·φ(s(h))⁻¹ for h inside (𝒢)_{D_φ}.
    pub fn conjugate(&self, g: &FiniteMeasuredGroupoid, h: usize) -> Option<usize> {
        let fr = self.get(g.range(h))?;
        let fs = self.get(g.source(h))?;
        g.product_all(&[fr, h, g.inverse(fs)])
    }

    /// ψ•φ: x ↦ ψ(r∘φ(x))·φ(x), where defined.
    pub fn compose(&self, g: &FiniteMeasuredGroupoid, phi: &PartialIsomorphism) -> PartialIsomorphism {
        let map = phi
            .map
            .iter()
            .filter_map(|(&x, &a)| {
                let b = self.get(g.range(a))?;
                Some((x, g.product(b, a).expect("composable")))
            })
            .collect();
        PartialIsomorphism { map }
    }

    /// φ⁻¹: r∘φ(x) ↦ φ(x)⁻¹.
    pub fn inverse(&self, g: &FiniteMeasuredGroupoid) -> PartialIsomorphism {
        PartialIsomorphism {
            map: self.map.values().map(|&a| (g.range(a), g.inverse(a))).collect(),
        }
    }

    /// φ|_A.
    pub fn restrict(&self, a: &[bool]) -> PartialIsomorphism {
        PartialIsomorphism {
            map: self.map.iter().filter(|(x, _)| a[**x]).map(|(&x, &v)| (x, v)).collect(),
        }
    }

    /// Whether every chosen arrow lies in `s`.
    pub fn is_inside(&self, s: &Subgroupoid) -> bool {
        self.map.values().all(|&a| s.arrows[a])
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum QnClass {
    Normalizing,
    QuasiNormalizing,
    Neither,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QnReport {
    pub class: QnClass,
    /// (x, [(S)_R : (S)_R ∩ S^φ]ₓ, [S^φ : (S)_R ∩ S^φ]ₓ) for x in R_φ.
    pub indices: Vec<(usize, usize, usize)>,
}

/// S^φ = U_φ((S)_{D_φ}) as a subgroupoid on R_φ.
pub(crate) fn conjugated(g: &FiniteMeasuredGroupoid, s: &Subgroupoid, phi: &PartialIsomorphism) -> Subgroupoid {
    let d = phi.domain_mask(g);
    let mut arrows = vec![false; g.n_arrows()];
    for h in s.restrict_to(g, &d).iter() {
        arrows[phi.conjugate(g, h).expect("inside the domain")] = true;
    }
    Subgroupoid {
        arrows,
        units: phi.range_mask(g),
    }
}

pub fn qn_membership(
    g: &FiniteMeasuredGroupoid,
    s: &Subgroupoid,
    phi: &PartialIsomorphism,
) -> Result<QnReport, GroupoidError> {
    phi.validate(g)?;
    let r = phi.range_mask(g);
    let s_r = s.restrict_to(g, &r);
    let s_phi = conjugated(g, s, phi);
    let meet = s_r.intersect(&s_phi);
    let indices = (0..g.n_units())
        .filter(|&x| r[x])
        .map(|x| (x, index(g, &s_r, &meet, x), index(g, &s_phi, &meet, x)))
        .collect();
    let class = if s_phi == s_r {
        QnClass::Normalizing
    } else {
        // every index is a finite count in this model
        QnClass::QuasiNormalizing
    };
    Ok(QnReport { class, indices })
}

/// (x, class representative) pairs covering 𝒢 modulo 𝒮, packed greedily into
/// partial isomorphisms with injective range maps.
fn cover_pairs(g: &FiniteMeasuredGroupoid, s: &Subgroupoid) -> Vec<usize> {
    let full = Subgroupoid::full(g);
    (0..g.n_units())
        .flat_map(|x| coset_representatives(g, &full, s, x))
        .collect()
}

fn pack(g: &FiniteMeasuredGroupoid, arrows: &[usize]) -> Vec<PartialIsomorphism> {
    let mut maps: Vec<(PartialIsomorphism, HashSet<usize>)> = Vec::new();
    for &a in arrows {
        let (x, y) = (g.source(a), g.range(a));
        match maps
            .iter_mut()
            .find(|(m, used)| !m.map.contains_key(&x) && !used.contains(&y))
        {
            Some((m, used)) => {
                m.map.insert(x, a);
                used.insert(y);
            }
            None => {
                let mut m = PartialIsomorphism::default();
                m.map.insert(x, a);
                maps.push((m, HashSet::from([y])));
            }
        }
    }
    maps.into_iter().map(|(m, _)| m).collect()
}

/// Witness family for quasi-normality: maps in QN_𝒢(𝒮) such that every arrow
/// g has a witness with φ(s(g))·g⁻¹ ∈ 𝒮. Always succeeds in the finite model.
pub fn is_quasinormal(g: &FiniteMeasuredGroupoid, s: &Subgroupoid) -> (bool, Vec<PartialIsomorphism>) {
    let family = pack(g, &cover_pairs(g, s));
    let ok = family.iter().all(|phi| {
        qn_membership(g, s, phi).map(|r| r.class != QnClass::Neither).unwrap_or(false)
    });
    (ok, family)
}

/// Whether g·S_{s(g)}·g⁻¹ ⊆ S for every arrow g; `Err` names a failing arrow.
pub(crate) fn check_isotropy_normal(g: &FiniteMeasuredGroupoid, s: &Subgroupoid) -> Result<(), GroupoidError> {
    for a in 0..g.n_arrows() {
        let (x, y) = (g.source(a), g.range(a));
        if !s.units[x] || !s.units[y] {
            continue;
        }
        let ai = g.inverse(a);
        for &k in g.out_of(x) {
            if s.arrows[k] && g.range(k) == x {
                let c = g.product_all(&[a, k, ai]).expect("composable");
                if !s.arrows[c] {
                    return Err(GroupoidError::NotNormal { arrow: a });
                }
            }
        }
    }
    Ok(())
}

/// A covering family of normalizing maps, or `NotNormal`.
///
/// A singleton {x ↦ g} normalizes 𝒮 exactly when g conjugates the isotropy of
/// 𝒮 at x onto the isotropy at r(g), so 𝒮 is normal iff that holds for every
/// arrow. Packed maps that fail to normalize are split back into singletons.
pub fn normal_witnesses(
    g: &FiniteMeasuredGroupoid,
    s: &Subgroupoid,
) -> Result<Vec<PartialIsomorphism>, GroupoidError> {
    check_isotropy_normal(g, s)?;
    let mut out = Vec::new();
    for phi in pack(g, &cover_pairs(g, s)) {
        if qn_membership(g, s, &phi)?.class == QnClass::Normalizing {
            out.push(phi);
        } else {
            for (_, a) in phi.pairs() {
                let single = PartialIsomorphism::from_arrows(g, &[a])?;
                debug_assert_eq!(qn_membership(g, s, &single)?.class, QnClass::Normalizing);
                out.push(single);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupoid::uniform_masses;

    fn s3_on_3() -> FiniteMeasuredGroupoid {
        let gens = [("a".to_string(), vec![1, 0, 2]), ("b".to_string(), vec![1, 2, 0])];
        FiniteMeasuredGroupoid::from_group_action(uniform_masses(3), &gens, 64).unwrap()
    }

    #[test]
    fn maps_inside_s_normalize() {
        let g = s3_on_3();
        let s = Subgroupoid::full(&g);
        let phi = PartialIsomorphism::from_arrows(&g, &[g.out_of(0)[3]]).unwrap();
        assert_eq!(qn_membership(&g, &s, &phi).unwrap().class, QnClass::Normalizing);
    }

    #[test]
    fn global_map_of_normal_subgroup() {
        let g = s3_on_3();
        let (grp, labels) = g.label_homomorphism().unwrap();
        let a3 = grp.subgroup(&[grp.find(&[1, 2, 0]).unwrap()]);
        assert!(grp.is_normal_subgroup(&a3));
        let s = Subgroupoid::label_preimage(&g, &a3).unwrap();
        for gamma in 0..grp.order() as u32 {
            let arrows: Vec<usize> = (0..g.n_arrows()).filter(|&a| labels[a] == gamma).collect();
            let phi = PartialIsomorphism::from_arrows(&g, &arrows).unwrap();
            assert_eq!(qn_membership(&g, &s, &phi).unwrap().class, QnClass::Normalizing);
        }
        let w = normal_witnesses(&g, &s).unwrap();
        assert!(!w.is_empty());
    }

    #[test]
    fn non_normal_subgroup_is_rejected() {
        let g = s3_on_3();
        let (grp, _) = g.label_homomorphism().unwrap();
        let swap = grp.subgroup(&[grp.find(&[1, 0, 2]).unwrap()]);
        let s = Subgroupoid::label_preimage(&g, &swap).unwrap();
        assert!(matches!(normal_witnesses(&g, &s), Err(GroupoidError::NotNormal { .. })));
        let (ok, family) = is_quasinormal(&g, &s);
        assert!(ok);
        assert!(!family.is_empty());
    }

    #[test]
    fn invalid_map_rejected() {
        let g = FiniteMeasuredGroupoid::from_group_action(uniform_masses(2), &[("s".into(), vec![1, 0])], 8).unwrap();
        // both points sent to point 1
        let a01 = (0..g.n_arrows()).find(|&a| g.source(a) == 0 && g.range(a) == 1).unwrap();
        let a11 = g.unit(1);
        assert!(PartialIsomorphism::from_arrows(&g, &[a01, a11]).is_err());
    }
}

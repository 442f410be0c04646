use std::collections::HashMap;

use num_rational::BigRational;
use num_traits::Zero;

use super::{FiniteMeasuredGroupoid, GroupoidError, UnionFind};

/// A subgroupoid given by membership masks over the parent's arrows and units.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subgroupoid {
    pub arrows: Vec<bool>,
    pub units: Vec<bool>,
}

impl Subgroupoid {
    pub fn full(g: &FiniteMeasuredGroupoid) -> Self {
        Subgroupoid {
            arrows: vec![true; g.n_arrows()],
            units: vec![true; g.n_units()],
        }
    }

    /// Only the unit arrows.
    pub fn trivial(g: &FiniteMeasuredGroupoid) -> Self {
        let mut arrows = vec![false; g.n_arrows()];
        for x in 0..g.n_units() {
            arrows[g.unit(x)] = true;
        }
        Subgroupoid {
            arrows,
            units: vec![true; g.n_units()],
        }
    }

    /// The subgroupoid (over all units) generated by `seeds`.
    pub fn generated(g: &FiniteMeasuredGroupoid, seeds: &[usize]) -> Self {
        let mut gens_at: Vec<Vec<usize>> = vec![Vec::new(); g.n_units()];
        for &s in seeds {
            gens_at[g.source(s)].push(s);
            let si = g.inverse(s);
            gens_at[g.source(si)].push(si);
        }
        let mut sub = Self::trivial(g);
        let mut stack: Vec<usize> = (0..g.n_units()).map(|x| g.unit(x)).collect();
        while let Some(h) = stack.pop() {
            for &s in &gens_at[g.range(h)] {
                let sh = g.product(s, h).expect("composable");
                if !sub.arrows[sh] {
                    sub.arrows[sh] = true;
                    stack.push(sh);
                }
            }
        }
        sub
    }

    /// Arrow mask over all units, checked for closure.
    pub fn from_mask(g: &FiniteMeasuredGroupoid, arrows: Vec<bool>) -> Result<Self, GroupoidError> {
        let sub = Subgroupoid {
            arrows,
            units: vec![true; g.n_units()],
        };
        sub.validate(g)?;
        Ok(sub)
    }

    /// ρ⁻¹(Λ) for the label homomorphism ρ of `g` and a subgroup mask Λ.
    pub fn label_preimage(g: &FiniteMeasuredGroupoid, subgroup: &[bool]) -> Option<Self> {
        let (_, labels) = g.label_homomorphism()?;
        Some(Subgroupoid {
            arrows: labels.iter().map(|&l| subgroup[l as usize]).collect(),
            units: vec![true; g.n_units()],
        })
    }

    pub fn validate(&self, g: &FiniteMeasuredGroupoid) -> Result<(), GroupoidError> {
        let bad = |m: String| Err(GroupoidError::NotSubgroupoid(m));
        for x in 0..g.n_units() {
            if self.units[x] && !self.arrows[g.unit(x)] {
                return bad(format!("missing unit at {x}"));
            }
        }
        for h in self.iter() {
            if !self.units[g.source(h)] || !self.units[g.range(h)] {
                return bad(format!("arrow {h} leaves the unit set"));
            }
            if !self.arrows[g.inverse(h)] {
                return bad(format!("not closed under inverse at {h}"));
            }
            for &k in g.out_of(g.range(h)) {
                if self.arrows[k] && !self.arrows[g.product(k, h).expect("composable")] {
                    return bad(format!("not closed under product at ({k}, {h})"));
                }
            }
        }
        Ok(())
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.arrows.iter().enumerate().filter(|(_, b)| **b).map(|(i, _)| i)
    }

    pub fn arrow_count(&self) -> usize {
        self.arrows.iter().filter(|b| **b).count()
    }

    pub fn contains(&self, a: usize) -> bool {
        self.arrows[a]
    }

    pub fn is_subset_of(&self, other: &Subgroupoid) -> bool {
        self.arrows.iter().zip(&other.arrows).all(|(a, b)| !a || *b)
            && self.units.iter().zip(&other.units).all(|(a, b)| !a || *b)
    }

    /// (H)_A.
    pub fn restrict_to(&self, g: &FiniteMeasuredGroupoid, a: &[bool]) -> Subgroupoid {
        Subgroupoid {
            arrows: (0..g.n_arrows())
                .map(|h| self.arrows[h] && a[g.source(h)] && a[g.range(h)])
                .collect(),
            units: self.units.iter().zip(a).map(|(u, b)| *u && *b).collect(),
        }
    }

    pub fn intersect(&self, other: &Subgroupoid) -> Subgroupoid {
        Subgroupoid {
            arrows: self.arrows.iter().zip(&other.arrows).map(|(a, b)| *a && *b).collect(),
            units: self.units.iter().zip(&other.units).map(|(a, b)| *a && *b).collect(),
        }
    }
}

/// Components of a subgroupoid's unit set, with conditional measures.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ErgodicDecomposition {
    /// `None` for points outside the subgroupoid's unit set.
    pub component_of: Vec<Option<usize>>,
    pub components: Vec<Vec<usize>>,
    pub masses: Vec<BigRational>,
}

impl ErgodicDecomposition {
    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    /// μ_{π(x)}({x}) = μ(x)/μ(X_{π(x)}).
    pub fn conditional(&self, g: &FiniteMeasuredGroupoid, x: usize) -> BigRational {
        let z = self.component_of[x].expect("point outside the unit set");
        g.mass(x) / &self.masses[z]
    }

    /// Membership mask of one component.
    pub fn mask(&self, z: usize) -> Vec<bool> {
        let mut m = vec![false; self.component_of.len()];
        for &x in &self.components[z] {
            m[x] = true;
        }
        m
    }
}

pub fn ergodic_decomposition(g: &FiniteMeasuredGroupoid, h: &Subgroupoid) -> ErgodicDecomposition {
    let n = g.n_units();
    let mut uf = UnionFind::new(n);
    for a in h.iter() {
        uf.union(g.source(a), g.range(a));
    }
    let mut root_id: HashMap<usize, usize> = HashMap::new();
    let mut component_of = vec![None; n];
    let mut components: Vec<Vec<usize>> = Vec::new();
    for x in 0..n {
        if !h.units[x] {
            continue;
        }
        let r = uf.find(x);
        let z = *root_id.entry(r).or_insert_with(|| {
            components.push(Vec::new());
            components.len() - 1
        });
        component_of[x] = Some(z);
        components[z].push(x);
    }
    let masses = components
        .iter()
        .map(|c| c.iter().fold(BigRational::zero(), |a, &x| a + g.mass(x)))
        .collect();
    ErgodicDecomposition {
        component_of,
        components,
        masses,
    }
}

/// 𝒢A: ranges of the arrows of `h` whose source lies in `a`.
pub fn saturation(g: &FiniteMeasuredGroupoid, h: &Subgroupoid, a: &[bool]) -> Vec<bool> {
    let mut out = vec![false; g.n_units()];
    for k in h.iter() {
        if a[g.source(k)] {
            out[g.range(k)] = true;
        }
    }
    out
}

/// Classes of s⁻¹(x) ∩ big under f ~ k·f with k ∈ small, each given as the
/// list of its arrows; classes are ordered by their lowest arrow id.
fn source_fiber_classes(
    g: &FiniteMeasuredGroupoid,
    big: &Subgroupoid,
    small: &Subgroupoid,
    x: usize,
) -> Vec<Vec<usize>> {
    assert!(small.units[x] && big.units[x], "point {x} is outside the subgroupoid");
    let fiber: Vec<usize> = g.out_of(x).iter().copied().filter(|&f| big.arrows[f]).collect();
    let pos: HashMap<usize, usize> = fiber.iter().enumerate().map(|(i, &f)| (f, i)).collect();
    let mut uf = UnionFind::new(fiber.len());
    for (i, &f) in fiber.iter().enumerate() {
        for &k in g.out_of(g.range(f)) {
            if small.arrows[k] {
                let kf = g.product(k, f).expect("composable");
                uf.union(i, pos[&kf]);
            }
        }
    }
    let (class, count) = uf.classes();
    let mut out = vec![Vec::new(); count];
    for (i, &f) in fiber.iter().enumerate() {
        out[class[i]].push(f);
    }
    for c in &mut out {
        c.sort_unstable();
    }
    out.sort();
    out
}

/// [𝒢:ℋ]ₓ, the number of ℋ-classes in the source fiber of x.
pub fn index(g: &FiniteMeasuredGroupoid, big: &Subgroupoid, small: &Subgroupoid, x: usize) -> usize {
    source_fiber_classes(g, big, small, x).len()
}

/// Lowest-id representative of each class in s⁻¹(x)/ℋ.
pub fn coset_representatives(
    g: &FiniteMeasuredGroupoid,
    big: &Subgroupoid,
    small: &Subgroupoid,
    x: usize,
) -> Vec<usize> {
    source_fiber_classes(g, big, small, x)
        .into_iter()
        .map(|c| c[0])
        .collect()
}

/// [[𝒢:ℋ]]ₓ: the index after restricting both to the ℋ-component of x.
pub fn local_index(g: &FiniteMeasuredGroupoid, big: &Subgroupoid, small: &Subgroupoid, x: usize) -> usize {
    let dec = ergodic_decomposition(g, small);
    let z = dec.component_of[x].expect("point outside the subgroupoid");
    let y = dec.mask(z);
    index(g, &big.restrict_to(g, &y), &small.restrict_to(g, &y), x)
}

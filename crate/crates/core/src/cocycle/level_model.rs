use std::collections::HashMap;

use num_integer::Integer;
use num_rational::BigRational;

use super::{radon_nikodym, CocycleError, GroupoidCocycle, NonsingularGraph};
use crate::bs::BSParams;
use crate::groupoid::{
    quotient, uniform_masses, FiniteGroup, FiniteMeasuredGroupoid, PartialIsomorphism, QuotientGroupoid, Seed,
    Subgroupoid,
};

/// Two rotation levels ℤ/N ⊔ ℤ/N′ joined by the t-map φ_t(p·j) = q·j.
#[derive(Clone, Debug)]
pub struct BSLevelModel {
    pub params: BSParams,
    pub k: u32,
    pub l: u32,
    /// N = d₀p₀ᵏq₀ˡ; level 0 occupies units 0..N.
    pub n: usize,
    /// N′ = d₀p₀^{k−1}q₀^{l+1}; level 1 occupies units N..N+N′.
    pub n_prime: usize,
    pub groupoid: FiniteMeasuredGroupoid,
    /// Generated by the +1 rotation on each level.
    pub s: Subgroupoid,
    pub t_map: PartialIsomorphism,
    /// arrow[(x, y)] for x → y; the groupoid is principal.
    arrow_at: HashMap<(usize, usize), usize>,
}

const MAX_LEVEL_SIZE: i64 = 1 << 10;

fn level_size(d0: i64, p0: i64, a: u32, q0: i64, b: u32, what: &str) -> Result<usize, CocycleError> {
    p0.abs()
        .checked_pow(a)
        .and_then(|x| q0.abs().checked_pow(b).and_then(|y| x.checked_mul(y)))
        .and_then(|x| x.checked_mul(d0))
        .filter(|&v| v <= MAX_LEVEL_SIZE)
        .map(|v| v as usize)
        .ok_or_else(|| CocycleError::InvalidLevel(format!("{what} exceeds {MAX_LEVEL_SIZE}")))
}

impl BSLevelModel {
    pub fn new(params: BSParams, k: u32, l: u32) -> Result<Self, CocycleError> {
        if k == 0 {
            return Err(CocycleError::InvalidLevel("k must be at least 1".into()));
        }
        let (d0, p0, q0) = (params.d0, params.p0, params.q0);
        let n = level_size(d0, p0, k, q0, l, "N")?;
        let n_prime = level_size(d0, p0, k - 1, q0, l + 1, "N′")?;
        let (p, q) = (params.p, params.q);
        let (ni, npi) = (n as i64, n_prime as i64);

        let mut t_pairs: HashMap<usize, usize> = HashMap::new();
        for j in 0..ni.lcm(&npi) {
            let x = (p * j).rem_euclid(ni) as usize;
            let y = (q * j).rem_euclid(npi) as usize;
            if let Some(&old) = t_pairs.get(&x) {
                if old != y {
                    return Err(CocycleError::InvalidLevel(format!("φ_t is not well defined at {x}")));
                }
            }
            t_pairs.insert(x, y);
        }
        let mut image: Vec<usize> = t_pairs.values().copied().collect();
        image.sort_unstable();
        image.dedup();
        if image.len() != t_pairs.len()
            || t_pairs.len() * p.unsigned_abs() as usize != n
            || image.len() * q.unsigned_abs() as usize != n_prime
        {
            return Err(CocycleError::InvalidLevel("|D| and |R| disagree".into()));
        }

        let mut t_sorted: Vec<(usize, usize)> = t_pairs.into_iter().map(|(x, y)| (x, n + y)).collect();
        t_sorted.sort_unstable();
        let seeds = vec![
            Seed {
                name: "r0".into(),
                pairs: (0..n).map(|x| (x, (x + 1) % n)).collect(),
                label: 0,
            },
            Seed {
                name: "r1".into(),
                pairs: (0..n_prime).map(|x| (n + x, n + (x + 1) % n_prime)).collect(),
                label: 0,
            },
            Seed {
                name: "t".into(),
                pairs: t_sorted.clone(),
                label: 0,
            },
        ];
        let total = n + n_prime;
        let groupoid =
            FiniteMeasuredGroupoid::from_partial_isos(uniform_masses(total), &seeds, FiniteGroup::trivial(), total * total)?;
        let arrow_at: HashMap<(usize, usize), usize> = (0..groupoid.n_arrows())
            .map(|a| ((groupoid.source(a), groupoid.range(a)), a))
            .collect();
        let rotations: Vec<usize> = (0..n)
            .map(|x| arrow_at[&(x, (x + 1) % n)])
            .chain((0..n_prime).map(|x| arrow_at[&(n + x, n + (x + 1) % n_prime)]))
            .collect();
        let s = Subgroupoid::generated(&groupoid, &rotations);
        let t_arrows: Vec<usize> = t_sorted.iter().map(|&(x, y)| arrow_at[&(x, y)]).collect();
        let t_map = PartialIsomorphism::from_arrows(&groupoid, &t_arrows)?;
        Ok(BSLevelModel {
            params,
            k,
            l,
            n,
            n_prime,
            groupoid,
            s,
            t_map,
            arrow_at,
        })
    }

    /// The arrow x → y.
    pub fn arrow(&self, x: usize, y: usize) -> usize {
        self.arrow_at[&(x, y)]
    }

    /// φ_t(x) for x ∈ D, in order of x.
    pub fn t_arrows(&self) -> Vec<usize> {
        self.t_map.pairs().map(|(_, a)| a).collect()
    }

    /// φ_t•ρ₀ʲ (j < |p|), φ_t⁻¹•ρ₁ⁱ (i < |q|) and the identity: partial
    /// isomorphisms that respect the levels.
    pub fn level_family(&self) -> Vec<PartialIsomorphism> {
        let g = &self.groupoid;
        let (n, np) = (self.n, self.n_prime);
        let p = self.params.p.unsigned_abs() as usize;
        let q = self.params.q.unsigned_abs() as usize;
        let t_inv = self.t_map.inverse(g);
        let mut out = Vec::new();
        for j in 0..p {
            let rot = PartialIsomorphism::from_arrows(g, &(0..n).map(|x| self.arrow(x, (x + j) % n)).collect::<Vec<_>>())
                .expect("rotation");
            out.push(self.t_map.compose(g, &rot));
        }
        for i in 0..q {
            let rot = PartialIsomorphism::from_arrows(
                g,
                &(0..np).map(|x| self.arrow(n + x, n + (x + i) % np)).collect::<Vec<_>>(),
            )
            .expect("rotation");
            out.push(t_inv.compose(g, &rot));
        }
        out.push(PartialIsomorphism::identity_on(g, &vec![true; g.n_units()]));
        out
    }

    pub fn quotient(&self) -> Result<QuotientGroupoid, CocycleError> {
        Ok(quotient(&self.groupoid, &self.s)?)
    }

    /// The quotient with its two levels identified along the level shift: one
    /// unit and one loop carrying the Radon-Nikodym value of the t-class.
    pub fn one_loop_graph(&self) -> Result<NonsingularGraph, CocycleError> {
        let q = self.quotient()?;
        let t = self.t_arrows()[0];
        let delta: GroupoidCocycle = radon_nikodym(&q.groupoid);
        let value: BigRational = delta.ratio(q.theta[t]).clone();
        Ok(NonsingularGraph {
            n_units: 1,
            edges: vec![(0, 0, value)],
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bs23_level_one_one() {
        let m = BSLevelModel::new(BSParams::new(2, 3).unwrap(), 1, 1).unwrap();
        assert_eq!((m.n, m.n_prime), (6, 9));
        let pairs: Vec<(usize, usize)> = m
            .t_map
            .pairs()
            .map(|(x, a)| (x, m.groupoid.range(a) - m.n))
            .collect();
        assert_eq!(pairs, vec![(0, 0), (2, 3), (4, 6)]);
        assert_eq!(m.groupoid.n_arrows(), 15 * 15);
    }

    #[test]
    fn bs46_sizes_and_bad_level() {
        let m = BSLevelModel::new(BSParams::new(4, 6).unwrap(), 1, 1).unwrap();
        assert_eq!((m.n, m.n_prime, m.t_map.len()), (12, 18, 3));
        assert!(matches!(
            BSLevelModel::new(BSParams::new(2, 3).unwrap(), 0, 1),
            Err(CocycleError::InvalidLevel(_))
        ));
    }
}

use num_integer::Integer;
use serde_json::{json, Value};

use super::DynamicsError;

/// |W_{k,l}| for k ≤ kmax, l ≤ lmax, indexed [k][l].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentTable {
    pub counts: Vec<Vec<u64>>,
    pub r: u64,
    pub s: u64,
}

impl ComponentTable {
    /// Consecutive ratios along k are integers dividing r, along l dividing s.
    pub fn divisibility_holds(&self) -> bool {
        let ok = |a: u64, b: u64, f: u64| b.is_multiple_of(a) && f.is_multiple_of(b / a);
        let c = &self.counts;
        (0..c.len()).all(|k| {
            (0..c[k].len()).all(|l| {
                (k + 1 >= c.len() || ok(c[k][l], c[k + 1][l], self.r))
                    && (l + 1 >= c[k].len() || ok(c[k][l], c[k][l + 1], self.s))
            })
        })
    }

    pub fn to_json(&self) -> Value {
        json!({ "counts": self.counts, "divisibility": self.divisibility_holds() })
    }
}

fn orbit_count(step: u64, n: u64) -> u64 {
    let mut seen = vec![false; n as usize];
    let mut orbits = 0;
    for start in 0..n {
        if seen[start as usize] {
            continue;
        }
        orbits += 1;
        let mut x = start;
        while !seen[x as usize] {
            seen[x as usize] = true;
            x = (x + step) % n;
        }
    }
    orbits
}

/// Orbits of the subgroup rᵏsˡℤ for the +c action on ℤ/n, by enumeration.
pub fn component_counts(c: u64, n: u64, r: u64, s: u64, kmax: u32, lmax: u32) -> Result<ComponentTable, DynamicsError> {
    if n == 0 || c.gcd(&n) != 1 {
        return Err(DynamicsError::NotErgodic { c, n });
    }
    let pow = |b: u64, e: u32| (0..e).fold(1 % n, |acc, _| ((acc as u128 * b as u128) % n as u128) as u64);
    let counts = (0..=kmax)
        .map(|k| {
            (0..=lmax)
                .map(|l| {
                    let step = ((pow(r, k) as u128 * pow(s, l) as u128 % n as u128) * c as u128 % n as u128) as u64;
                    orbit_count(step, n)
                })
                .collect()
        })
        .collect();
    Ok(ComponentTable { counts, r, s })
}

/// label(σx) = label(x) + 1 mod `modulus`, built cycle by cycle; None if some
/// cycle length is not a multiple of the modulus.
pub fn equivariant_labeling(perm: &[usize], modulus: u64) -> Option<Vec<u64>> {
    let mut label: Vec<Option<u64>> = vec![None; perm.len()];
    for start in 0..perm.len() {
        if label[start].is_some() {
            continue;
        }
        let (mut x, mut i) = (start, 0u64);
        while label[x].is_none() {
            label[x] = Some(i % modulus);
            x = perm[x];
            i += 1;
        }
    }
    let label: Vec<u64> = label.into_iter().map(|l| l.expect("labelled")).collect();
    (0..perm.len())
        .all(|x| label[perm[x]] == (label[x] + 1) % modulus)
        .then_some(label)
}

/// Whether equivariant maps onto ℤ/(d·mᵏ·nˡ) exist for all k ≤ kmax, l ≤ lmax.
/// `perm` is a bijection of a finite set.
pub fn periodicity_check(perm: &[usize], d: u64, m: u64, n: u64, kmax: u32, lmax: u32) -> bool {
    let bound = perm.len() as u128;
    for k in 0..=kmax {
        for l in 0..=lmax {
            let modulus = (d as u128)
                .checked_mul((m as u128).saturating_pow(k))
                .and_then(|x| x.checked_mul((n as u128).saturating_pow(l)));
            match modulus {
                Some(q) if q >= 1 && q <= bound.max(1) => {
                    if equivariant_labeling(perm, q as u64).is_none() {
                        return false;
                    }
                }
                // no cycle is that long
                _ => return false,
            }
        }
    }
    true
}

/// x ↦ x + 1 on ℤ/size.
pub fn odometer(size: usize) -> Vec<usize> {
    (0..size).map(|x| (x + 1) % size).collect()
}

use std::collections::HashMap;

use super::GroupoidError;

/// A finite group given by a faithful permutation representation, with its
/// multiplication table precomputed. Element 0 is the identity.
///
/// Products compose as maps: `(g·h)(x) = g(h(x))`.
#[derive(Clone, Debug)]
pub struct FiniteGroup {
    perms: Vec<Vec<u32>>,
    names: Vec<String>,
    table: Vec<u32>,
    inverses: Vec<u32>,
}

impl FiniteGroup {
    pub fn trivial() -> Self {
        FiniteGroup {
            perms: vec![vec![]],
            names: vec!["e".into()],
            table: vec![0],
            inverses: vec![0],
        }
    }

    /// Regular representation of ℤ/n, generator named `g`.
    pub fn cyclic(n: usize) -> Self {
        assert!(n >= 1);
        let gen: Vec<u32> = (0..n as u32).map(|i| (i + 1) % n as u32).collect();
        Self::generated_by(n, &[("g".to_string(), gen)], n.max(1)).expect("cyclic group")
    }

    /// Closure of the given permutations of `0..degree`.
    pub fn generated_by(
        degree: usize,
        gens: &[(String, Vec<u32>)],
        bound: usize,
    ) -> Result<Self, GroupoidError> {
        for (name, g) in gens {
            if !is_permutation(g, degree) {
                return Err(GroupoidError::InvalidInput(format!(
                    "generator {name} is not a permutation of {degree} points"
                )));
            }
        }
        let id: Vec<u32> = (0..degree as u32).collect();
        let mut index: HashMap<Vec<u32>, u32> = HashMap::new();
        let mut perms = vec![id.clone()];
        let mut names = vec!["e".to_string()];
        index.insert(id, 0);
        let mut head = 0;
        while head < perms.len() {
            for (name, g) in gens {
                let next = compose(g, &perms[head]);
                if !index.contains_key(&next) {
                    if perms.len() >= bound {
                        return Err(GroupoidError::GroupTooLarge { bound });
                    }
                    let label = if head == 0 {
                        name.clone()
                    } else {
                        format!("{name}*{}", names[head])
                    };
                    index.insert(next.clone(), perms.len() as u32);
                    perms.push(next);
                    names.push(label);
                }
            }
            head += 1;
        }
        let n = perms.len();
        let mut table = vec![0u32; n * n];
        let mut inverses = vec![0u32; n];
        for a in 0..n {
            for b in 0..n {
                let c = index[&compose(&perms[a], &perms[b])];
                table[a * n + b] = c;
                if c == 0 {
                    inverses[a] = b as u32;
                }
            }
        }
        Ok(FiniteGroup {
            perms,
            names,
            table,
            inverses,
        })
    }

    pub fn order(&self) -> usize {
        self.perms.len()
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.table[a as usize * self.order() + b as usize]
    }

    pub fn inverse(&self, a: u32) -> u32 {
        self.inverses[a as usize]
    }

    pub fn name(&self, a: u32) -> &str {
        &self.names[a as usize]
    }

    pub fn perm(&self, a: u32) -> &[u32] {
        &self.perms[a as usize]
    }

    pub fn find(&self, perm: &[u32]) -> Option<u32> {
        self.perms.iter().position(|p| p == perm).map(|i| i as u32)
    }

    /// Membership mask of the subgroup generated by `gens`.
    pub fn subgroup(&self, gens: &[u32]) -> Vec<bool> {
        let mut mask = vec![false; self.order()];
        mask[0] = true;
        let mut stack = vec![0u32];
        while let Some(x) = stack.pop() {
            for &g in gens {
                let y = self.mul(g, x);
                if !mask[y as usize] {
                    mask[y as usize] = true;
                    stack.push(y);
                }
            }
        }
        mask
    }

    /// Left cosets xΛ of the subgroup given by `mask`, as a class id per element.
    pub fn left_cosets(&self, mask: &[bool]) -> Vec<usize> {
        let n = self.order();
        let mut class = vec![usize::MAX; n];
        let mut next = 0;
        for x in 0..n as u32 {
            if class[x as usize] != usize::MAX {
                continue;
            }
            for h in 0..n as u32 {
                if mask[h as usize] {
                    class[self.mul(x, h) as usize] = next;
                }
            }
            next += 1;
        }
        class
    }

    pub fn is_normal_subgroup(&self, mask: &[bool]) -> bool {
        let n = self.order() as u32;
        (0..n).all(|g| {
            (0..n)
                .filter(|&h| mask[h as usize])
                .all(|h| mask[self.mul(self.mul(g, h), self.inverse(g)) as usize])
        })
    }
}

pub fn compose(a: &[u32], b: &[u32]) -> Vec<u32> {
    b.iter().map(|&x| a[x as usize]).collect()
}

pub fn is_permutation(p: &[u32], degree: usize) -> bool {
    if p.len() != degree {
        return false;
    }
    let mut seen = vec![false; degree];
    for &x in p {
        if x as usize >= degree || seen[x as usize] {
            return false;
        }
        seen[x as usize] = true;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_group_structure() {
        let g = FiniteGroup::cyclic(4);
        assert_eq!(g.order(), 4);
        let x = 1;
        assert_eq!(g.mul(x, g.inverse(x)), 0);
        let sub = g.subgroup(&[g.mul(1, 1)]);
        assert_eq!(sub.iter().filter(|&&b| b).count(), 2);
        assert!(g.is_normal_subgroup(&sub));
    }

    #[test]
    fn size_bound() {
        let s3 = vec![("a".to_string(), vec![1, 0, 2]), ("b".to_string(), vec![1, 2, 0])];
        assert!(FiniteGroup::generated_by(3, &s3, 6).is_ok());
        assert!(matches!(
            FiniteGroup::generated_by(3, &s3, 5),
            Err(GroupoidError::GroupTooLarge { .. })
        ));
    }
}

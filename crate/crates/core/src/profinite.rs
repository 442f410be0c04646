//! Truncations of E_∞ = lim← ℤ/(d₀p₀ᵏq₀ˡ): residues modulo d₀·|p₀|^K·|q₀|^L
//! with their level (K, L).

use std::fmt;

use num_integer::Integer;
use thiserror::Error;

use crate::bs::BSParams;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProfiniteError {
    #[error("operands belong to different groups")]
    ParamMismatch,
    #[error("level ({k},{l}) is outside the budget ({budget_k},{budget_l})")]
    LevelBudgetExceeded { k: u32, l: u32, budget_k: u32, budget_l: u32 },
    #[error("modulus at level ({0},{1}) does not fit in 63 bits")]
    LevelTooLarge(u32, u32),
    #[error("{0} is not a unit")]
    NotAUnit(String),
    #[error("{0} is not in the required closed subgroup")]
    NotInSubgroup(String),
    #[error("cannot parse {0:?}; expected residue@(K,L)")]
    Parse(String),
}

/// d₀·|p₀|^K·|q₀|^L.
pub fn modulus(params: &BSParams, k: u32, l: u32) -> Result<u64, ProfiniteError> {
    scaled(params.d0 as u64, params, k, l)
}

/// |p₀|^k·|q₀|^l.
fn power(params: &BSParams, k: u32, l: u32) -> Result<u64, ProfiniteError> {
    scaled(1, params, k, l)
}

fn scaled(base: u64, params: &BSParams, k: u32, l: u32) -> Result<u64, ProfiniteError> {
    params
        .p0
        .unsigned_abs()
        .checked_pow(k)
        .and_then(|a| params.q0.unsigned_abs().checked_pow(l).and_then(|b| a.checked_mul(b)))
        .and_then(|a| a.checked_mul(base))
        .filter(|&m| m < 1 << 63)
        .ok_or(ProfiniteError::LevelTooLarge(k, l))
}

/// The smallest e with the p₀-primary part of m dividing |p₀|^e. For prime
/// p₀ this is the largest e with p₀ᵉ | m.
pub fn generalized_valuation(p0: i64, m: i64) -> u32 {
    let p0 = p0.unsigned_abs();
    let m = m.unsigned_abs();
    if p0 <= 1 || m == 0 {
        return 0;
    }
    let primary = m_primary_part(p0, m) as u128;
    let mut e = 0;
    let mut acc: u128 = 1;
    while !acc.is_multiple_of(primary) {
        acc *= p0 as u128;
        e += 1;
    }
    e
}

fn m_primary_part(p0: u64, m: u64) -> u64 {
    let mut part = 1;
    let mut rest = m;
    loop {
        let g = rest.gcd(&p0);
        if g == 1 {
            return part;
        }
        rest /= g;
        part *= g;
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TruncatedProfiniteInt {
    residue: u64,
    k: u32,
    l: u32,
    params: BSParams,
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

impl TruncatedProfiniteInt {
    /// Any integer, reduced modulo the level's modulus.
    pub fn new(params: BSParams, value: i128, k: u32, l: u32) -> Result<Self, ProfiniteError> {
        let m = modulus(&params, k, l)?;
        Ok(TruncatedProfiniteInt {
            residue: value.rem_euclid(m as i128) as u64,
            k,
            l,
            params,
        })
    }

    pub fn residue(&self) -> u64 {
        self.residue
    }

    pub fn level(&self) -> (u32, u32) {
        (self.k, self.l)
    }

    pub fn params(&self) -> &BSParams {
        &self.params
    }

    pub fn modulus(&self) -> u64 {
        modulus(&self.params, self.k, self.l).expect("checked at construction")
    }

    /// The image at a lower level.
    pub fn reduce_to(&self, k: u32, l: u32) -> Result<Self, ProfiniteError> {
        if k > self.k || l > self.l {
            return Err(ProfiniteError::LevelBudgetExceeded {
                k,
                l,
                budget_k: self.k,
                budget_l: self.l,
            });
        }
        Self::new(self.params, self.residue as i128, k, l)
    }

    fn common(&self, other: &Self) -> Result<(Self, Self), ProfiniteError> {
        if self.params != other.params {
            return Err(ProfiniteError::ParamMismatch);
        }
        let (k, l) = (self.k.min(other.k), self.l.min(other.l));
        Ok((self.reduce_to(k, l)?, other.reduce_to(k, l)?))
    }

    /// Sum at the componentwise minimum level.
    pub fn add(&self, other: &Self) -> Result<Self, ProfiniteError> {
        let (a, b) = self.common(other)?;
        let m = a.modulus();
        Ok(TruncatedProfiniteInt {
            residue: ((a.residue as u128 + b.residue as u128) % m as u128) as u64,
            ..a
        })
    }

    pub fn neg(&self) -> Self {
        let m = self.modulus();
        TruncatedProfiniteInt {
            residue: (m - self.residue) % m,
            ..*self
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self, ProfiniteError> {
        self.add(&other.neg())
    }

    /// Product at the componentwise minimum level.
    pub fn mul(&self, other: &Self) -> Result<Self, ProfiniteError> {
        let (a, b) = self.common(other)?;
        Ok(TruncatedProfiniteInt {
            residue: mul_mod(a.residue, b.residue, a.modulus()),
            ..a
        })
    }

    pub fn add_int(&self, n: i128) -> Self {
        Self::new(self.params, self.residue as i128 + n, self.k, self.l).expect("same level")
    }

    pub fn mul_int(&self, n: i128) -> Self {
        let m = self.modulus();
        let n = n.rem_euclid(m as i128) as u64;
        TruncatedProfiniteInt {
            residue: mul_mod(self.residue, n, m),
            ..*self
        }
    }

    /// A unit of ℤ/M. Once K, L ≥ 1 this is gcd(residue, d₀p₀q₀) = 1; at
    /// lower levels a prime missing from M cannot be read off the residue.
    pub fn is_unit(&self) -> bool {
        self.residue.gcd(&self.modulus()) == 1
    }

    /// Whether the residue lies in Ē_{k,l} = d₀p₀ᵏq₀ˡ·ℤ at this level.
    pub fn in_level(&self, k: u32, l: u32) -> Result<bool, ProfiniteError> {
        let g = modulus(&self.params, k, l)?;
        Ok(g >= self.modulus() && self.residue == 0 || g < self.modulus() && self.residue.is_multiple_of(g))
    }

    fn budget(&self, k: u32, l: u32) -> Result<(), ProfiniteError> {
        if k > self.k || l > self.l {
            Err(ProfiniteError::LevelBudgetExceeded {
                k,
                l,
                budget_k: self.k,
                budget_l: self.l,
            })
        } else {
            Ok(())
        }
    }

    /// σ_{k,l}(x) = p₀ᵏq₀ˡ·x for x ∈ Ē_{0,0}, at the same level.
    pub fn sigma_map(&self, k: u32, l: u32) -> Result<Self, ProfiniteError> {
        self.budget(k, l)?;
        if !self.in_level(0, 0)? {
            return Err(ProfiniteError::NotInSubgroup(format!("{self} in Ē_{{0,0}}")));
        }
        let factor = self.params.p0.pow(k) as i128 * self.params.q0.pow(l) as i128;
        Ok(self.mul_int(factor))
    }

    /// The inverse of σ_{k,l} by exact division; the result is known at
    /// level (K−k, L−l) only.
    pub fn sigma_inverse(&self, k: u32, l: u32) -> Result<Self, ProfiniteError> {
        self.budget(k, l)?;
        if !self.in_level(k, l)? {
            return Err(ProfiniteError::NotInSubgroup(format!("{self} in Ē_{{{k},{l}}}")));
        }
        let pk = power(&self.params, k, l)?;
        let sign = self.params.p0.signum().pow(k) * self.params.q0.signum().pow(l);
        let q = (self.residue / pk) as i128 * sign as i128;
        Self::new(self.params, q, self.k - k, self.l - l)
    }

    /// Writes x = p·x′ + r with 0 ≤ r < |p| and returns (q·x′, r), known at
    /// level (K−1, L+1). With `inverse` the roles of p and q swap and the
    /// level moves to (K+1, L−1).
    pub fn shift_step(&self, inverse: bool) -> Result<(Self, i64), ProfiniteError> {
        let (from, to) = if inverse {
            (self.params.q, self.params.p)
        } else {
            (self.params.p, self.params.q)
        };
        let (k, l) = match (inverse, self.k, self.l) {
            (false, k, l) if k > 0 => (k - 1, l + 1),
            (true, k, l) if l > 0 => (k + 1, l - 1),
            _ => {
                return Err(ProfiniteError::LevelBudgetExceeded {
                    k: self.k,
                    l: self.l,
                    budget_k: 0,
                    budget_l: 0,
                })
            }
        };
        let r = self.residue % from.unsigned_abs();
        let quotient = ((self.residue - r) / from.unsigned_abs()) as i128 * from.signum() as i128;
        Ok((Self::new(self.params, quotient * to as i128, k, l)?, r as i64))
    }

    pub fn parse(params: BSParams, s: &str) -> Result<Self, ProfiniteError> {
        let bad = || ProfiniteError::Parse(s.to_string());
        let (res, lvl) = s.trim().split_once('@').ok_or_else(bad)?;
        let lvl = lvl.trim().strip_prefix('(').and_then(|t| t.strip_suffix(')')).ok_or_else(bad)?;
        let (k, l) = lvl.split_once(',').ok_or_else(bad)?;
        let res: i128 = res.trim().parse().map_err(|_| bad())?;
        let k: u32 = k.trim().parse().map_err(|_| bad())?;
        let l: u32 = l.trim().parse().map_err(|_| bad())?;
        let x = Self::new(params, res, k, l)?;
        if res < 0 || x.residue as i128 != res {
            return Err(bad());
        }
        Ok(x)
    }
}

impl fmt::Display for TruncatedProfiniteInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@({},{})", self.residue, self.k, self.l)
    }
}

fn require_unit(r: &TruncatedProfiniteInt) -> Result<(), ProfiniteError> {
    if r.is_unit() {
        Ok(())
    } else {
        Err(ProfiniteError::NotAUnit(r.to_string()))
    }
}

/// Whether r·x = x for every x ∈ Ē_{k,l} at r's level. Ē_{k,l} is cyclic,
/// so it suffices to test its generator d₀p₀ᵏq₀ˡ.
pub fn check_unit_fixes_level(r: &TruncatedProfiniteInt, k: u32, l: u32) -> Result<bool, ProfiniteError> {
    require_unit(r)?;
    r.budget(k, l)?;
    let g = modulus(&r.params, k, l)? as i128;
    let m = r.modulus() as i128;
    Ok((r.residue as i128 * g - g).rem_euclid(m) == 0)
}

/// d₀(r − 1) ≡ 0 at r's level.
pub fn u0_membership(r: &TruncatedProfiniteInt) -> Result<bool, ProfiniteError> {
    require_unit(r)?;
    let m = r.modulus() as i128;
    Ok((r.params.d0 as i128 * (r.residue as i128 - 1)).rem_euclid(m) == 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bs(p: i64, q: i64) -> BSParams {
        BSParams::new(p, q).unwrap()
    }

    #[test]
    fn arithmetic_examples() {
        let p = bs(2, 3);
        let seven = TruncatedProfiniteInt::new(p, 7, 2, 1).unwrap();
        assert_eq!(seven.modulus(), 12);
        assert_eq!(seven.mul(&seven).unwrap().residue(), 1);
        assert!(TruncatedProfiniteInt::new(p, 5, 2, 1).unwrap().is_unit());
        assert!(!TruncatedProfiniteInt::new(p, 4, 2, 1).unwrap().is_unit());
        let x = TruncatedProfiniteInt::new(p, 5, 3, 2).unwrap();
        assert_eq!(x.add(&seven).unwrap(), TruncatedProfiniteInt::new(p, 0, 2, 1).unwrap());
    }

    #[test]
    fn sigma_round_trip() {
        let p = bs(4, 6);
        let two = TruncatedProfiniteInt::new(p, 2, 2, 1).unwrap();
        let s = two.sigma_map(1, 0).unwrap();
        assert_eq!(s.residue(), 4);
        assert_eq!(s.sigma_inverse(1, 0).unwrap(), TruncatedProfiniteInt::new(p, 2, 1, 1).unwrap());
        assert!(matches!(two.sigma_map(3, 0), Err(ProfiniteError::LevelBudgetExceeded { .. })));
    }

    #[test]
    fn unit_examples() {
        let r = TruncatedProfiniteInt::new(bs(4, 6), 7, 1, 1).unwrap();
        assert!(r.is_unit());
        assert!(u0_membership(&r).unwrap());
        assert!(check_unit_fixes_level(&r, 0, 0).unwrap());
        let one = TruncatedProfiniteInt::new(bs(2, 3), 1, 2, 2).unwrap();
        assert!(u0_membership(&one).unwrap() && check_unit_fixes_level(&one, 1, 1).unwrap());
    }

    #[test]
    fn valuations() {
        assert_eq!(generalized_valuation(2, 12), 2);
        assert_eq!(generalized_valuation(3, 12), 1);
        assert_eq!(generalized_valuation(4, 2), 1);
        assert_eq!(generalized_valuation(4, 8), 2);
        assert_eq!(generalized_valuation(6, 4), 2);
        assert_eq!(generalized_valuation(5, 7), 0);
    }

    #[test]
    fn text_round_trip() {
        let p = bs(2, 3);
        let x = TruncatedProfiniteInt::parse(p, "7@(2,1)").unwrap();
        assert_eq!(x.to_string(), "7@(2,1)");
        assert!(TruncatedProfiniteInt::parse(p, "13@(2,1)").is_err());
        assert!(TruncatedProfiniteInt::parse(p, "7(2,1)").is_err());
    }
}

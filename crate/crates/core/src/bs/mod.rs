//! Exact algebra in BS(p,q) = ⟨a, t | t aᵖ t⁻¹ = a^q⟩.

mod normal_form;
mod word;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use normal_form::{normalize, BrittonNormalForm};
pub use word::{Gen, GroupWord, MAX_T_EXPONENT};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BsError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("BS({p},{q}) is amenable (|p| = 1 or |q| = 1) and is not modeled")]
    Amenable { p: i64, q: i64 },
    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("element is not elliptic")]
    NotElliptic,
    #[error("element is trivial")]
    TrivialElement,
    #[error("no exponent n with |n| <= {bound} works")]
    BoundExceeded { bound: u64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BSParams {
    pub p: i64,
    pub q: i64,
    pub d0: i64,
    pub p0: i64,
    pub q0: i64,
}

impl BSParams {
    pub fn new(p: i64, q: i64) -> Result<Self, BsError> {
        if p == 0 || q == 0 {
            return Err(BsError::InvalidParams("p and q must be nonzero".into()));
        }
        if is_amenable(p, q) {
            return Err(BsError::Amenable { p, q });
        }
        if p.abs() > q.abs() {
            return Err(BsError::InvalidParams(format!(
                "expected |p| <= |q|, got p = {p}, q = {q}"
            )));
        }
        let d0 = p.abs().gcd(&q.abs());
        Ok(BSParams {
            p,
            q,
            d0,
            p0: p / d0,
            q0: q / d0,
        })
    }

    /// |q/p| as a reduced fraction.
    pub fn modulus_ratio(&self) -> BigRational {
        BigRational::new(BigInt::from(self.q0.abs()), BigInt::from(self.p0.abs()))
    }

    /// q/p with sign, the scaling by which t acts on the line.
    pub fn signed_ratio(&self) -> BigRational {
        BigRational::new(BigInt::from(self.q), BigInt::from(self.p))
    }
}

impl fmt::Display for BSParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BS({},{})", self.p, self.q)
    }
}

/// A value |q/p|ⁿ of the modular homomorphism, kept as a reduced fraction.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ModularValue {
    pub exponent: BigInt,
    pub value: BigRational,
}

impl ModularValue {
    pub fn numerator(&self) -> &BigInt {
        self.value.numer()
    }

    pub fn denominator(&self) -> &BigInt {
        self.value.denom()
    }
}

impl fmt::Display for ModularValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

pub fn is_identity(w: &GroupWord, params: &BSParams) -> bool {
    normalize(w, params).is_identity()
}

pub fn words_equal(u: &GroupWord, v: &GroupWord, params: &BSParams) -> bool {
    is_identity(&u.mul(&v.inverse()), params)
}

pub fn ratio_pow(base: &BigRational, n: &BigInt) -> BigRational {
    let e = n
        .abs()
        .to_u32()
        .expect("exponent of the modular homomorphism out of range");
    let v = num_traits::pow(base.clone(), e as usize);
    if n.is_negative() {
        v.recip()
    } else {
        v
    }
}

/// 𝔪(w) = |q/p|^(t-exponent sum).
pub fn modular_hom(w: &GroupWord, params: &BSParams) -> ModularValue {
    let n = w.t_exponent_sum();
    ModularValue {
        value: ratio_pow(&params.modulus_ratio(), &n),
        exponent: n,
    }
}

/// Elliptic iff the element fixes the midpoint of [v₀, w·v₀].
///
/// The vertices of that geodesic are the prefixes of the normal form, so the
/// distance is the number of t-syllables. Odd distance means no fixed
/// midpoint vertex; the action has no inversions, so that already rules out
/// ellipticity.
pub fn is_elliptic(w: &GroupWord, params: &BSParams) -> bool {
    elliptic_center(w, params).is_some()
}

/// For elliptic `w`, a word `h` with `h⁻¹ w h = a^c`, together with `c`.
pub fn elliptic_center(w: &GroupWord, params: &BSParams) -> Option<(GroupWord, BigInt)> {
    let nf = normalize(w, params);
    let n = nf.t_length();
    if n % 2 == 1 {
        return None;
    }
    let h = nf.prefix(n / 2);
    let inner = normalize(&w.conj(&h.inverse()), params);
    inner.as_a_power().map(|c| (h, c.clone()))
}

/// Smallest n in 1..=bound with g xⁿ g⁻¹ = x^m, returned as (n, m).
pub fn conjugation_exponents(
    g: &GroupWord,
    x: &GroupWord,
    params: &BSParams,
    bound: u64,
) -> Result<(BigInt, BigInt), BsError> {
    let (h, c) = elliptic_center(x, params).ok_or(BsError::NotElliptic)?;
    if c.is_zero() {
        return Err(BsError::TrivialElement);
    }
    let h_inv = h.inverse();
    let gxg = |n: i64| x.pow(n).conj(g);
    for n in 1..=bound as i64 {
        // h⁻¹ (g xⁿ g⁻¹) h = a^e with c | e  ⇔  g xⁿ g⁻¹ = x^{e/c}
        let z = normalize(&h_inv.mul(&gxg(n)).mul(&h), params);
        if let Some(e) = z.as_a_power() {
            if e.is_multiple_of(&c) {
                let m = e / &c;
                let n_big = BigInt::from(n);
                let m_i64 = m.to_i64().expect("conjugation exponent out of range");
                assert!(
                    is_identity(&gxg(n).mul(&x.pow(-m_i64)), params),
                    "conjugation exponent check failed"
                );
                let ratio = BigRational::new(m.abs(), n_big.clone());
                assert_eq!(
                    ratio,
                    modular_hom(g, params).value,
                    "|m/n| disagrees with the modular homomorphism"
                );
                return Ok((n_big, m));
            }
        }
    }
    Err(BsError::BoundExceeded { bound })
}

/// BS(p,q) ≅ BS(r,s) iff (p,q) = (εr,εs) or (εs,εr) for some ε = ±1.
pub fn classify_isomorphism(p: i64, q: i64, r: i64, s: i64) -> bool {
    [1i64, -1].iter().any(|&e| (p, q) == (e * r, e * s) || (p, q) == (e * s, e * r))
}

pub fn is_amenable(p: i64, q: i64) -> bool {
    p.abs() == 1 || q.abs() == 1
}

/// `|q/p|` raised to an integer power, as a rational; 1 for exponent 0.
pub fn modular_power(params: &BSParams, n: i64) -> BigRational {
    ratio_pow(&params.modulus_ratio(), &BigInt::from(n))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> GroupWord {
        s.parse().unwrap()
    }

    fn bs23() -> BSParams {
        BSParams::new(2, 3).unwrap()
    }

    #[test]
    fn relator_collapses() {
        let nf = normalize(&w("t a^2 T"), &bs23());
        assert_eq!(nf.as_a_power(), Some(&BigInt::from(3)));
        assert!(is_identity(&w("t a^2 T A^3"), &bs23()));
        assert!(normalize(&GroupWord::identity(), &bs23()).is_identity());
    }

    #[test]
    fn nontrivial_elements() {
        let p = bs23();
        assert!(!is_identity(&w("a"), &p));
        let c = GroupWord::commutator(&w("a"), &w("t a T"));
        assert!(!is_identity(&c, &p));
    }

    #[test]
    fn modular_values() {
        let p = bs23();
        assert_eq!(modular_hom(&w("a"), &p).to_string(), "1");
        assert_eq!(modular_hom(&w("T a t"), &p).to_string(), "1");
        assert_eq!(modular_hom(&w("t^2 a^5"), &p).to_string(), "9/4");
    }

    #[test]
    fn ellipticity() {
        let p = bs23();
        assert!(is_elliptic(&w("a^5"), &p));
        assert!(!is_elliptic(&w("t"), &p));
        assert!(is_elliptic(&w("t a T"), &p));
    }

    #[test]
    fn conjugation_examples() {
        let p = bs23();
        let b = |n: i64| BigInt::from(n);
        assert_eq!(conjugation_exponents(&w("t"), &w("a"), &p, 10).unwrap(), (b(2), b(3)));
        assert_eq!(conjugation_exponents(&w("a^2"), &w("a"), &p, 10).unwrap(), (b(1), b(1)));
        assert_eq!(conjugation_exponents(&w("T"), &w("a"), &p, 10).unwrap(), (b(3), b(2)));
        assert_eq!(
            conjugation_exponents(&w("t^3"), &w("a"), &p, 3),
            Err(BsError::BoundExceeded { bound: 3 })
        );
    }

    #[test]
    fn isomorphism_and_amenability() {
        assert!(classify_isomorphism(2, 3, 2, 3));
        assert!(classify_isomorphism(2, 3, -3, -2));
        assert!(!classify_isomorphism(2, 3, 2, -3));
        assert!(is_amenable(1, 5));
        assert!(!is_amenable(2, 2));
        assert!(is_amenable(-1, -7));
    }

    #[test]
    fn params_validation() {
        assert!(BSParams::new(3, 2).is_err());
        assert!(matches!(BSParams::new(1, 4), Err(BsError::Amenable { .. })));
        let p = BSParams::new(4, 6).unwrap();
        assert_eq!((p.d0, p.p0, p.q0), (2, 2, 3));
        let p = BSParams::new(2, -3).unwrap();
        assert_eq!((p.d0, p.p0, p.q0), (1, 2, -3));
    }
}

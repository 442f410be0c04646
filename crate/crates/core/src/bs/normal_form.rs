use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use super::word::{Gen, GroupWord};
use super::BSParams;

/// `a^{k0} t^{e1} a^{k1} … t^{en} a^{kn}` with no pinch.
///
/// The representative is made unique by pushing a-powers rightwards: every
/// exponent sitting in front of a `t` is reduced into `[0, |q|)` and every
/// exponent in front of a `t⁻¹` into `[0, |p|)`. Only the final exponent is
/// unrestricted.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BrittonNormalForm {
    pub k0: BigInt,
    pub syllables: Vec<(i8, BigInt)>,
}

impl BrittonNormalForm {
    pub fn identity() -> Self {
        BrittonNormalForm {
            k0: BigInt::zero(),
            syllables: Vec::new(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.k0.is_zero() && self.syllables.is_empty()
    }

    /// Number of t-letters; equals the tree distance d(v₀, g·v₀).
    pub fn t_length(&self) -> usize {
        self.syllables.len()
    }

    pub fn last_exponent(&self) -> &BigInt {
        self.syllables.last().map(|s| &s.1).unwrap_or(&self.k0)
    }

    pub fn last_exponent_mut(&mut self) -> &mut BigInt {
        match self.syllables.last_mut() {
            Some(s) => &mut s.1,
            None => &mut self.k0,
        }
    }

    /// `Some(k)` when the element is `a^k`.
    pub fn as_a_power(&self) -> Option<&BigInt> {
        if self.syllables.is_empty() {
            Some(&self.k0)
        } else {
            None
        }
    }

    pub fn to_word(&self) -> GroupWord {
        let mut w = GroupWord::a_pow(self.k0.clone());
        for (e, k) in &self.syllables {
            w.push(Gen::T, BigInt::from(*e));
            w.push(Gen::A, k.clone());
        }
        w
    }

    /// Prefix `a^{k0} t^{e1} … a^{k_{i-1}} t^{e_i}`, i.e. the element whose
    /// vertex is the i-th vertex on the geodesic from v₀.
    pub fn prefix(&self, i: usize) -> GroupWord {
        let mut w = GroupWord::a_pow(self.k0.clone());
        for (j, (e, k)) in self.syllables.iter().take(i).enumerate() {
            w.push(Gen::T, BigInt::from(*e));
            if j + 1 < i {
                w.push(Gen::A, k.clone());
            }
        }
        w
    }

    /// Pinch check on the stored form.
    pub fn is_pinch_free(&self, params: &BSParams) -> bool {
        let p = BigInt::from(params.p);
        let q = BigInt::from(params.q);
        self.syllables.windows(2).all(|w| {
            let (e1, k) = (&w[0].0, &w[0].1);
            let e2 = w[1].0;
            if *e1 == -e2 {
                let d = if *e1 == 1 { &p } else { &q };
                !k.is_multiple_of(d)
            } else {
                true
            }
        })
    }
}

impl fmt::Display for BrittonNormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_word())
    }
}

struct Reducer {
    p: BigInt,
    q: BigInt,
    k0: BigInt,
    syl: Vec<(i8, BigInt)>,
}

impl Reducer {
    fn new(params: &BSParams) -> Self {
        Reducer {
            p: BigInt::from(params.p),
            q: BigInt::from(params.q),
            k0: BigInt::zero(),
            syl: Vec::new(),
        }
    }

    fn last_k(&mut self) -> &mut BigInt {
        match self.syl.last_mut() {
            Some(s) => &mut s.1,
            None => &mut self.k0,
        }
    }

    fn push_a(&mut self, k: &BigInt) {
        *self.last_k() += k;
    }

    /// Push a single `t^e`. A pinch `t a^{pm} t⁻¹` collapses to `a^{qm}` and
    /// `t⁻¹ a^{qm} t` to `a^{pm}`; the stack keeps everything left of the
    /// cursor pinch-free, so one check per letter suffices.
    fn push_t(&mut self, e: i8) {
        if let Some((le, lk)) = self.syl.last() {
            if *le == -e {
                let (div, mul) = if *le == 1 {
                    (&self.p, &self.q)
                } else {
                    (&self.q, &self.p)
                };
                if lk.is_multiple_of(div) {
                    let inner = lk / div * mul;
                    self.syl.pop();
                    self.push_a(&inner);
                    return;
                }
            }
        }
        self.syl.push((e, BigInt::zero()));
    }

    fn finish(mut self) -> BrittonNormalForm {
        // push a-powers to the right: a^{qj} t = t a^{pj}, a^{pj} t⁻¹ = t⁻¹ a^{qj}
        let n = self.syl.len();
        let mut carry = BigInt::zero();
        for i in 0..n {
            let e = self.syl[i].0;
            let slot = if i == 0 {
                &mut self.k0
            } else {
                &mut self.syl[i - 1].1
            };
            *slot += &carry;
            let (m, other) = if e == 1 {
                (&self.q, &self.p)
            } else {
                (&self.p, &self.q)
            };
            let r = slot.mod_floor(&m.abs());
            let j = (&*slot - &r) / m;
            *slot = r;
            carry = j * other;
        }
        *self.last_k() += &carry;
        BrittonNormalForm {
            k0: self.k0,
            syllables: self.syl,
        }
    }
}

/// Reduce a word to its unique pinch-free normal form.
pub fn normalize(w: &GroupWord, params: &BSParams) -> BrittonNormalForm {
    let mut r = Reducer::new(params);
    for (g, e) in w.runs() {
        match g {
            Gen::A => r.push_a(e),
            Gen::T => {
                let s: i8 = if e.is_positive() { 1 } else { -1 };
                let n = e
                    .abs()
                    .to_u64()
                    .unwrap_or_else(|| panic!("t-exponent {e} out of range"));
                for _ in 0..n {
                    r.push_t(s);
                }
            }
        }
    }
    r.finish()
}

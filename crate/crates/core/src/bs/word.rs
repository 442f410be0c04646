use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::BsError;

/// Largest |t|-exponent accepted by the parser. Every t-letter becomes its own
/// syllable during normalization, so huge t-powers are not representable anyway.
pub const MAX_T_EXPONENT: i64 = 1 << 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Gen {
    A,
    T,
}

/// A word over {a, t} stored run-length. Exponents are never zero and
/// neighbouring runs never share a generator.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct GroupWord {
    runs: Vec<(Gen, BigInt)>,
}

impl GroupWord {
    pub fn identity() -> Self {
        GroupWord { runs: Vec::new() }
    }

    pub fn a() -> Self {
        Self::gen_pow(Gen::A, 1)
    }

    pub fn t() -> Self {
        Self::gen_pow(Gen::T, 1)
    }

    pub fn gen_pow(g: Gen, e: impl Into<BigInt>) -> Self {
        let mut w = GroupWord::identity();
        w.push(g, e.into());
        w
    }

    pub fn a_pow(e: impl Into<BigInt>) -> Self {
        Self::gen_pow(Gen::A, e)
    }

    pub fn t_pow(e: impl Into<BigInt>) -> Self {
        Self::gen_pow(Gen::T, e)
    }

    pub fn from_runs<I: IntoIterator<Item = (Gen, BigInt)>>(runs: I) -> Self {
        let mut w = GroupWord::identity();
        for (g, e) in runs {
            w.push(g, e);
        }
        w
    }

    pub fn runs(&self) -> &[(Gen, BigInt)] {
        &self.runs
    }

    pub fn is_empty(&self) -> bool {
        self.runs.is_empty()
    }

    /// Number of letters counted with multiplicity.
    pub fn letter_len(&self) -> BigInt {
        self.runs.iter().map(|(_, e)| e.abs()).sum()
    }

    /// Append `g^e`, merging with the last run and dropping zero exponents.
    pub fn push(&mut self, g: Gen, e: BigInt) {
        if e.is_zero() {
            return;
        }
        if let Some(last) = self.runs.last_mut() {
            if last.0 == g {
                last.1 += e;
                if last.1.is_zero() {
                    self.runs.pop();
                }
                return;
            }
        }
        self.runs.push((g, e));
    }

    pub fn mul(&self, other: &GroupWord) -> GroupWord {
        let mut w = self.clone();
        for (g, e) in &other.runs {
            w.push(*g, e.clone());
        }
        w
    }

    pub fn inverse(&self) -> GroupWord {
        GroupWord::from_runs(self.runs.iter().rev().map(|(g, e)| (*g, -e)))
    }

    pub fn pow(&self, n: i64) -> GroupWord {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut w = GroupWord::identity();
        for _ in 0..n.unsigned_abs() {
            w = w.mul(&base);
        }
        w
    }

    pub fn conj(&self, by: &GroupWord) -> GroupWord {
        by.mul(self).mul(&by.inverse())
    }

    /// `[x, y] = x y x⁻¹ y⁻¹`.
    pub fn commutator(x: &GroupWord, y: &GroupWord) -> GroupWord {
        x.mul(y).mul(&x.inverse()).mul(&y.inverse())
    }

    /// Exponent sum of `t`.
    pub fn t_exponent_sum(&self) -> BigInt {
        self.runs
            .iter()
            .filter(|(g, _)| *g == Gen::T)
            .map(|(_, e)| e.clone())
            .sum()
    }

    /// Flattened letter sequence as (generator, ±1); intended for short words.
    pub fn letters(&self) -> Vec<(Gen, i8)> {
        let mut out = Vec::new();
        for (g, e) in &self.runs {
            let s: i8 = if e.is_positive() { 1 } else { -1 };
            let n = e.abs().to_usize().expect("exponent too large to expand");
            out.extend(std::iter::repeat_n((*g, s), n));
        }
        out
    }
}

impl fmt::Display for GroupWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.runs.is_empty() {
            return write!(f, "1");
        }
        for (i, (g, e)) in self.runs.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            let letter = match (g, e.is_positive()) {
                (Gen::A, true) => 'a',
                (Gen::A, false) => 'A',
                (Gen::T, true) => 't',
                (Gen::T, false) => 'T',
            };
            let m = e.abs();
            if m.is_one() {
                write!(f, "{letter}")?;
            } else {
                write!(f, "{letter}^{m}")?;
            }
        }
        Ok(())
    }
}

impl FromStr for GroupWord {
    type Err = BsError;

    /// Accepts `a A t T` with optional `^n` (n may be negative), whitespace
    /// optional, and `1` or the empty string for the identity.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let chars: Vec<char> = s.chars().collect();
        let mut i = 0;
        let mut w = GroupWord::identity();
        let trimmed = s.trim();
        if trimmed.is_empty() || trimmed == "1" {
            return Ok(w);
        }
        let err = |pos: usize, msg: &str| BsError::Parse {
            pos,
            msg: msg.to_string(),
        };
        while i < chars.len() {
            let c = chars[i];
            if c.is_whitespace() || c == '*' || c == '.' {
                i += 1;
                continue;
            }
            let (g, sign) = match c {
                'a' => (Gen::A, 1),
                'A' => (Gen::A, -1),
                't' => (Gen::T, 1),
                'T' => (Gen::T, -1),
                _ => return Err(err(i, "expected one of a, A, t, T")),
            };
            i += 1;
            let mut e = BigInt::one();
            if i < chars.len() && chars[i] == '^' {
                i += 1;
                let start = i;
                if i < chars.len() && (chars[i] == '-' || chars[i] == '+') {
                    i += 1;
                }
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let text: String = chars[start..i].iter().collect();
                e = text
                    .parse::<BigInt>()
                    .map_err(|_| err(start, "malformed exponent"))?;
            }
            let e: BigInt = e * BigInt::from(sign);
            if g == Gen::T && e.abs() > BigInt::from(MAX_T_EXPONENT) {
                return Err(err(i, "t-exponent too large"));
            }
            w.push(g, e);
        }
        Ok(w)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print() {
        let w: GroupWord = "t a^2 T".parse().unwrap();
        assert_eq!(w.to_string(), "t a^2 T");
        let w: GroupWord = "a a A t^-2".parse().unwrap();
        assert_eq!(w.to_string(), "a T^2");
        assert_eq!("".parse::<GroupWord>().unwrap(), GroupWord::identity());
        assert_eq!(GroupWord::identity().to_string(), "1");
        assert!("x".parse::<GroupWord>().is_err());
        assert!("a^".parse::<GroupWord>().is_err());
    }

    #[test]
    fn inverse_cancels() {
        let w: GroupWord = "t a^3 T^2 A".parse().unwrap();
        assert!(w.mul(&w.inverse()).is_empty());
    }
}

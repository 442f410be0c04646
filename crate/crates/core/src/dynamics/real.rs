//! Exact numbers a + b√d with rational a, b, and rational enclosures of them.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Roots;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::DynamicsError;

/// Enclosures are refined up to this many bits before giving up.
pub const MAX_PRECISION_BITS: u64 = 1 << 12;

/// a + b√d. Values with b = 0 are plain rationals whatever d is.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Surd {
    pub a: BigRational,
    pub b: BigRational,
    pub d: u64,
}

impl Surd {
    pub fn rational(a: BigRational) -> Self {
        Surd {
            a,
            b: BigRational::zero(),
            d: 0,
        }
    }

    pub fn int(n: i64) -> Self {
        Self::rational(BigRational::from_integer(n.into()))
    }

    /// d must not be a perfect square unless b = 0.
    pub fn new(a: BigRational, b: BigRational, d: u64) -> Self {
        if b.is_zero() {
            return Self::rational(a);
        }
        assert!(d.sqrt() * d.sqrt() != d, "radicand {d} is a perfect square");
        Surd { a, b, d }
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    fn radicand(&self, other: &Surd) -> u64 {
        match (self.is_rational(), other.is_rational()) {
            (true, _) => other.d,
            (_, true) => self.d,
            _ => {
                assert_eq!(self.d, other.d, "mixed radicands");
                self.d
            }
        }
    }

    fn build(a: BigRational, b: BigRational, d: u64) -> Self {
        if b.is_zero() {
            Self::rational(a)
        } else {
            Surd { a, b, d }
        }
    }

    pub fn recip(&self) -> Self {
        let norm = &self.a * &self.a - &self.b * &self.b * BigRational::from_integer(self.d.into());
        Self::build(&self.a / &norm, -&self.b / &norm, self.d)
    }

    pub fn div(&self, other: &Surd) -> Self {
        self * &other.recip()
    }

    /// [lo, hi] containing the value, of width about 2^-bits·|b|.
    pub fn enclosure(&self, bits: u64) -> (BigRational, BigRational) {
        if self.is_rational() {
            return (self.a.clone(), self.a.clone());
        }
        let scale = BigInt::one() << bits;
        let root_lo = (BigInt::from(self.d) * &scale * &scale).sqrt();
        let lo = BigRational::new(root_lo.clone(), scale.clone());
        let hi = BigRational::new(root_lo + 1, scale);
        let (x, y) = (&self.a + &self.b * &lo, &self.a + &self.b * &hi);
        if x <= y {
            (x, y)
        } else {
            (y, x)
        }
    }

    /// Exact comparison with a rational.
    pub fn cmp_rational(&self, r: &BigRational) -> Ordering {
        if self.is_rational() {
            return self.a.cmp(r);
        }
        // sign of (a − r) + b√d, irrational so never zero
        let c = &self.a - r;
        let bd = &self.b * &self.b * BigRational::from_integer(self.d.into());
        match (c.is_negative(), self.b.is_negative()) {
            (false, false) => Ordering::Greater,
            (true, true) => Ordering::Less,
            (false, true) => (&c * &c).cmp(&bd),
            (true, false) => bd.cmp(&(&c * &c)),
        }
    }

    pub fn abs_value(&self) -> Surd {
        if self.signum().is_lt() {
            -self
        } else {
            self.clone()
        }
    }

    pub fn signum(&self) -> Ordering {
        self.cmp_rational(&BigRational::zero())
    }

    /// ⌊x⌋ by refining enclosures until they fit between two integers.
    pub fn floor(&self) -> Result<BigInt, DynamicsError> {
        if self.is_rational() {
            return Ok(self.a.floor().to_integer());
        }
        let mut bits = 64;
        while bits <= MAX_PRECISION_BITS {
            let (lo, hi) = self.enclosure(bits);
            let f = lo.floor().to_integer();
            if hi < BigRational::from_integer(&f + 1) {
                return Ok(f);
            }
            bits *= 2;
        }
        Err(DynamicsError::Precision(format!("floor of {self}")))
    }

    pub fn ceil(&self) -> Result<BigInt, DynamicsError> {
        Ok(-(-self).floor()?)
    }

    pub fn to_f64(&self) -> f64 {
        let (lo, hi) = self.enclosure(64);
        ((lo + hi) / BigRational::from_integer(2.into())).to_f64().unwrap_or(f64::NAN)
    }
}

impl Ord for Surd {
    fn cmp(&self, other: &Self) -> Ordering {
        (self - other).signum()
    }
}

impl PartialOrd for Surd {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for &Surd {
    type Output = Surd;
    fn add(self, o: &Surd) -> Surd {
        Surd::build(&self.a + &o.a, &self.b + &o.b, self.radicand(o))
    }
}

impl Sub for &Surd {
    type Output = Surd;
    fn sub(self, o: &Surd) -> Surd {
        Surd::build(&self.a - &o.a, &self.b - &o.b, self.radicand(o))
    }
}

impl Mul for &Surd {
    type Output = Surd;
    fn mul(self, o: &Surd) -> Surd {
        let d = self.radicand(o);
        let dd = BigRational::from_integer(d.into());
        Surd::build(
            &self.a * &o.a + &self.b * &o.b * dd,
            &self.a * &o.b + &self.b * &o.a,
            d,
        )
    }
}

impl Neg for &Surd {
    type Output = Surd;
    fn neg(self) -> Surd {
        Surd::build(-&self.a, -&self.b, self.d)
    }
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_rational() {
            write!(f, "{}", self.a)
        } else {
            write!(f, "{}+({})*sqrt({})", self.a, self.b, self.d)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn golden_arithmetic() {
        let phi = Surd::new(q(1, 2), q(1, 2), 5);
        let sq = &phi * &phi;
        assert_eq!(sq, &phi + &Surd::int(1));
        assert_eq!(phi.floor().unwrap(), BigInt::from(1));
        assert_eq!((&phi.recip() + &Surd::int(1)), phi);
        assert_eq!(phi.cmp_rational(&q(1618, 1000)), Ordering::Greater);
        assert_eq!(phi.cmp_rational(&q(1619, 1000)), Ordering::Less);
        assert!((phi.to_f64() - 1.618_033_988_749_895).abs() < 1e-12);
        assert_eq!((-&phi).floor().unwrap(), BigInt::from(-2));
    }
}

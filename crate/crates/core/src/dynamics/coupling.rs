use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use super::real::Surd;
use super::DynamicsError;
use crate::bs::{is_identity, BSParams, Gen, GroupWord};
use crate::profinite::TruncatedProfiniteInt;

/// θ: exact rational, an exact quadratic irrational with a name, or a fixed
/// rational enclosure of some other irrational.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ThetaValue {
    Rational(BigRational),
    Surd { value: Surd, tag: String },
    Interval { lo: BigRational, hi: BigRational, tag: String },
}

impl ThetaValue {
    pub fn rational(n: i64, d: i64) -> Self {
        ThetaValue::Rational(BigRational::new(n.into(), d.into()))
    }

    pub fn golden() -> Self {
        let half = BigRational::new(1.into(), 2.into());
        ThetaValue::Surd {
            value: Surd::new(half.clone(), half, 5),
            tag: "golden".into(),
        }
    }

    pub fn sqrt(d: u64) -> Self {
        ThetaValue::Surd {
            value: Surd::new(BigRational::zero(), BigRational::one(), d),
            tag: format!("sqrt{d}"),
        }
    }

    /// The exact value, when there is one.
    pub fn exact(&self) -> Result<Surd, DynamicsError> {
        match self {
            ThetaValue::Rational(r) => Ok(Surd::rational(r.clone())),
            ThetaValue::Surd { value, .. } => Ok(value.clone()),
            ThetaValue::Interval { tag, .. } => Err(DynamicsError::Precision(format!(
                "θ = {tag} is only known to finite precision"
            ))),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            ThetaValue::Rational(r) => r.to_f64().unwrap_or(f64::NAN),
            ThetaValue::Surd { value, .. } => value.to_f64(),
            ThetaValue::Interval { lo, hi, .. } => {
                ((lo + hi) / BigRational::from_integer(2.into())).to_f64().unwrap_or(f64::NAN)
            }
        }
    }

    pub fn is_positive(&self) -> bool {
        match self {
            ThetaValue::Rational(r) => r.is_positive(),
            ThetaValue::Surd { value, .. } => value.signum().is_gt(),
            ThetaValue::Interval { lo, .. } => lo.is_positive(),
        }
    }
}

impl fmt::Display for ThetaValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ThetaValue::Rational(r) => write!(f, "{r}"),
            ThetaValue::Surd { tag, .. } => write!(f, "{tag}"),
            ThetaValue::Interval { lo, hi, tag } => write!(f, "{tag}[{lo},{hi}]"),
        }
    }
}

impl FromStr for ThetaValue {
    type Err = DynamicsError;

    /// `u/v`, `golden`, `sqrtD`, or `tag[lo,hi]` with rational endpoints.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let bad = || DynamicsError::InvalidTheta(s.to_string());
        let theta = if s == "golden" {
            ThetaValue::golden()
        } else if let Some(d) = s.strip_prefix("sqrt") {
            let d: u64 = d.trim_matches(|c| c == '(' || c == ')').parse().map_err(|_| bad())?;
            let r = num_integer::Roots::sqrt(&d);
            if r * r == d {
                ThetaValue::Rational(BigRational::from_integer(r.into()))
            } else {
                ThetaValue::sqrt(d)
            }
        } else if let Some((tag, rest)) = s.split_once('[') {
            let (lo, hi) = rest.strip_suffix(']').and_then(|r| r.split_once(',')).ok_or_else(bad)?;
            let lo: BigRational = lo.trim().parse().map_err(|_| bad())?;
            let hi: BigRational = hi.trim().parse().map_err(|_| bad())?;
            if lo > hi || (lo.is_negative() != hi.is_negative()) || lo.is_zero() || hi.is_zero() {
                return Err(bad());
            }
            ThetaValue::Interval {
                lo,
                hi,
                tag: tag.trim().to_string(),
            }
        } else {
            ThetaValue::Rational(s.parse().map_err(|_| bad())?)
        };
        if let ThetaValue::Rational(r) = &theta {
            if r.is_zero() {
                return Err(bad());
            }
        }
        Ok(theta)
    }
}

fn exact_beta(n: i64, x: &Surd, theta: &Surd) -> Result<BigInt, DynamicsError> {
    let quotient = (&Surd::int(n) - x).div(theta);
    if theta.signum().is_gt() {
        quotient.ceil()
    } else {
        quotient.floor()
    }
}

fn in_domain(x: &Surd, width: &Surd) -> bool {
    x.signum().is_ge() && x < width
}

/// The m with x − n + θm ∈ [0, |θ|).
pub fn beta_cocycle(n: i64, x: &Surd, theta: &ThetaValue) -> Result<BigInt, DynamicsError> {
    match theta {
        ThetaValue::Interval { lo, hi, tag } => {
            // m is monotone in θ on a sign-definite interval, so equal values
            // at both ends decide it
            let at = |t: &BigRational| {
                let t = Surd::rational(t.clone());
                if !in_domain(x, &t.abs_value()) {
                    return Err(DynamicsError::OutOfDomain(format!("x = {x} for θ = {tag}")));
                }
                exact_beta(n, x, &t)
            };
            let (a, b) = (at(lo)?, at(hi)?);
            if a == b {
                Ok(a)
            } else {
                Err(DynamicsError::Precision(format!("β({n}, {x}) for θ = {tag}")))
            }
        }
        _ => {
            let t = theta.exact()?;
            let width = t.abs_value();
            if !in_domain(x, &width) {
                return Err(DynamicsError::OutOfDomain(format!("x = {x} not in [0, |θ|)")));
            }
            let m = exact_beta(n, x, &t)?;
            let y = beta_image(n, x, &t, &m);
            assert!(in_domain(&y, &width), "β post-condition failed at n = {n}, x = {x}");
            Ok(m)
        }
    }
}

fn beta_image(n: i64, x: &Surd, theta: &Surd, m: &BigInt) -> Surd {
    &(x - &Surd::int(n)) + &(theta * &Surd::rational(BigRational::from_integer(m.clone())))
}

/// (m, x − n + θm): the cocycle value and the moved point.
pub fn beta_step(n: i64, x: &Surd, theta: &ThetaValue) -> Result<(BigInt, Surd), DynamicsError> {
    let m = beta_cocycle(n, x, theta)?;
    Ok((m.clone(), beta_image(n, x, &theta.exact()?, &m)))
}

/// The L-coordinate of π_θ(w) divided by θ, kept both as integer
/// multiplicities of the powers (q/p)^τ and collapsed to one rational.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LTheta {
    pub terms: BTreeMap<i64, BigInt>,
    pub coefficient: BigRational,
    pub t_sum: i64,
}

impl LTheta {
    pub fn to_json(&self) -> Value {
        json!({
            "coefficient": self.coefficient.to_string(),
            "t_exponent": self.t_sum,
            "terms": self.terms.iter().map(|(k, v)| (k.to_string(), Value::String(v.to_string()))).collect::<serde_json::Map<_, _>>(),
        })
    }
}

pub fn l_theta(w: &GroupWord, params: &BSParams) -> LTheta {
    let mut terms: BTreeMap<i64, BigInt> = BTreeMap::new();
    let mut tau = 0i64;
    for (g, e) in w.runs() {
        match g {
            Gen::A => {
                *terms.entry(tau).or_insert_with(BigInt::zero) += e;
            }
            Gen::T => tau += e.to_i64().expect("t-exponent fits in i64"),
        }
    }
    terms.retain(|_, v| !v.is_zero());
    let ratio = params.signed_ratio();
    let coefficient = terms.iter().fold(BigRational::zero(), |acc, (k, v)| {
        acc + crate::bs::ratio_pow(&ratio, &BigInt::from(*k)) * BigRational::from_integer(v.clone())
    });
    LTheta {
        terms,
        coefficient,
        t_sum: tau,
    }
}

/// 𝔪(w) = 1 and l_θ(w) = 0.
pub fn in_n(w: &GroupWord, params: &BSParams) -> bool {
    let l = l_theta(w, params);
    l.t_sum == 0 && l.coefficient.is_zero()
}

/// Nontrivial commutators of elements of ker 𝔪; l_θ kills them since L is
/// abelian.
pub fn n_elements(params: &BSParams, count: usize) -> Vec<GroupWord> {
    let conj = |e: i64, j: i64| GroupWord::a_pow(j).conj(&GroupWord::t_pow(e));
    let kernel: Vec<GroupWord> = vec![
        GroupWord::a(),
        conj(1, 1),
        conj(-1, 1),
        GroupWord::a_pow(2),
        conj(1, 2),
        conj(2, 1),
        conj(-1, 3),
        conj(1, 1).mul(&GroupWord::a()),
        conj(-2, 1),
    ];
    let mut out = Vec::new();
    for (i, x) in kernel.iter().enumerate() {
        for y in &kernel[i + 1..] {
            let c = GroupWord::commutator(x, y);
            if !is_identity(&c, params) && !out.contains(&c) {
                out.push(c);
                if out.len() == count {
                    return out;
                }
            }
        }
    }
    out
}

/// A point (x, κ) of the fundamental domain [0,1)×K. x lies in ℚ(θ).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CouplingPoint {
    pub x: Surd,
    pub kappa: TruncatedProfiniteInt,
}

impl fmt::Display for CouplingPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.kappa)
    }
}

impl CouplingPoint {
    pub fn new(x: Surd, kappa: TruncatedProfiniteInt) -> Result<Self, DynamicsError> {
        if x.signum().is_lt() || x >= Surd::int(1) {
            return Err(DynamicsError::OutOfDomain(format!("x = {x} not in [0, 1)")));
        }
        Ok(CouplingPoint { x, kappa })
    }

    /// Right multiplication by a^{−⌊y⌋} after the L-coordinate became y.
    fn reduce(y: Surd, kappa: TruncatedProfiniteInt) -> Result<Self, DynamicsError> {
        let j = y.floor()?;
        let jr = Surd::rational(BigRational::from_integer(j.clone()));
        let j = j.to_i128().expect("shift fits in i128");
        Ok(CouplingPoint {
            x: &y - &jr,
            kappa: kappa.add_int(-j),
        })
    }
}

fn apply_letter(
    g: Gen,
    e: &BigInt,
    pt: CouplingPoint,
    theta: &Surd,
    params: &BSParams,
) -> Result<CouplingPoint, DynamicsError> {
    match g {
        Gen::A => {
            let n = e.to_i128().expect("a-exponent fits in i128");
            let y = &pt.x + &(theta * &Surd::rational(BigRational::from_integer(e.clone())));
            CouplingPoint::reduce(y, pt.kappa.add_int(n))
        }
        Gen::T => {
            let inverse = e.is_negative();
            let ratio = if inverse {
                params.signed_ratio().recip()
            } else {
                params.signed_ratio()
            };
            let ratio = Surd::rational(ratio);
            let mut pt = pt;
            for _ in 0..e.abs().to_u64().expect("t-exponent fits in u64") {
                let (kappa, r) = pt.kappa.shift_step(inverse)?;
                let y = &ratio * &(&pt.x - &Surd::int(r));
                pt = CouplingPoint::reduce(y, kappa)?;
            }
            Ok(pt)
        }
    }
}

/// π_θ(w)·pt reduced into [0,1)×K. Letters act right to left. Each t uses
/// one p₀-level of κ and each t⁻¹ one q₀-level.
pub fn coupling_action(
    w: &GroupWord,
    pt: &CouplingPoint,
    theta: &ThetaValue,
    params: &BSParams,
) -> Result<CouplingPoint, DynamicsError> {
    let theta = theta.exact()?;
    if *pt.kappa.params() != *params {
        return Err(DynamicsError::Profinite(crate::profinite::ProfiniteError::ParamMismatch));
    }
    let mut out = pt.clone();
    for (g, e) in w.runs().iter().rev() {
        out = apply_letter(*g, e, out, &theta, params)?;
    }
    Ok(out)
}

/// x − κ mod N: the factor map onto the level-N circle ℝ/Nℤ, where a acts
/// by rotation by θ − 1. N must divide the modulus of κ.
pub fn circle_coordinate(pt: &CouplingPoint, n: u64) -> Surd {
    assert_eq!(pt.kappa.modulus() % n, 0, "N must divide the modulus of κ");
    let k = (pt.kappa.residue() % n) as i64;
    let y = &pt.x - &Surd::int(k);
    let wrap = y.floor().expect("exact").to_i64().expect("small") .div_euclid(n as i64);
    &y - &Surd::int(wrap * n as i64)
}

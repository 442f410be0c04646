//! Coupling-dynamics diagnostics with fixed thresholds.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use rand::Rng;

use super::{rng, Tally};
use crate::bs::{is_identity, BSParams};
use crate::dynamics::{
    beta_cocycle, beta_step, cesaro_mixing_test, component_counts, coupling_action, in_n, n_elements, odometer,
    periodicity_check, rotation_model_orbit, BernoulliShift, CesaroSets, CouplingPoint, Surd, ThetaValue,
};
use crate::profinite::{modulus, TruncatedProfiniteInt};

pub const BETA_MONOTONE: &str = "β(·, x) is nondecreasing and unbounded on |n| ≤ 1000";
pub const BETA_COCYCLE: &str = "β(n₁ + n₂, x) = β(n₁, n₂·x) + β(n₂, x)";
pub const N_TRIVIAL: &str = "elements of N act trivially on the coupling";
pub const GOLDEN_DISCREPANCY: &str = "golden rotation has discrepancy below 1e-3 after 1e5 steps";
pub const CESARO_GAP: &str = "Cesàro gap below 0.05 at horizon 1e4";
pub const DIVISIBILITY: &str = "component counts divide along r and s";
pub const ODOMETER: &str = "odometer is periodic exactly up to its modulus";

pub const N_WORDS: usize = 10;
pub const DISCREPANCY_STEPS: u64 = 100_000;
pub const DISCREPANCY_TOL: f64 = 1e-3;
pub const CESARO_HORIZON: u64 = 10_000;
pub const CESARO_TOL: f64 = 0.05;

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

pub fn beta_laws(t: &mut Tally, r: &mut impl Rng) {
    for theta in [ThetaValue::rational(3, 2), ThetaValue::rational(-5, 3), ThetaValue::rational(7, 4)] {
        let w = theta.exact().expect("rational").abs_value();
        for _ in 0..3 {
            let den = r.gen_range(1..50i64);
            let x = Surd::rational(q(r.gen_range(0..den), den));
            if x >= w {
                continue;
            }
            let ms: Result<Vec<BigInt>, _> = (-1000..=1000).map(|n| beta_cocycle(n, &x, &theta)).collect();
            let ok = match &ms {
                Ok(ms) => {
                    let sign = if theta.is_positive() { 1 } else { -1 };
                    let m: Vec<BigInt> = ms.iter().map(|m| m * sign).collect();
                    m.windows(2).all(|w| w[0] <= w[1]) && m[0] < BigInt::from(-100) && m[2000] > BigInt::from(100)
                }
                Err(_) => false,
            };
            t.check(BETA_MONOTONE, ok, || format!("θ = {theta:?}, x = {x}"));
        }
    }
    for theta in [ThetaValue::rational(3, 2), ThetaValue::golden(), ThetaValue::sqrt(2)] {
        let x = Surd::rational(q(r.gen_range(0..10), 10));
        let (n1, n2) = (r.gen_range(-20..=20), r.gen_range(-20..=20));
        let ok = (|| {
            let (m2, y) = beta_step(n2, &x, &theta).ok()?;
            let m1 = beta_cocycle(n1, &y, &theta).ok()?;
            Some(beta_cocycle(n1 + n2, &x, &theta).ok()? == m1 + m2)
        })();
        t.check(BETA_COCYCLE, ok == Some(true), || format!("θ = {theta:?}, x = {x}, n = ({n1}, {n2})"));
    }
}

pub fn n_action_laws(t: &mut Tally, r: &mut impl Rng) {
    for (p, qq) in [(2, 3), (2, -3), (4, 6)] {
        let params = BSParams::new(p, qq).expect("valid");
        let theta = ThetaValue::rational(3, 2);
        let words = n_elements(&params, N_WORDS);
        t.check(N_TRIVIAL, words.len() == N_WORDS, || format!("only {} words for BS({p},{qq})", words.len()));
        for w in words {
            let good = in_n(&w, &params) && !is_identity(&w, &params);
            let pt = CouplingPoint::new(
                Surd::rational(q(r.gen_range(0..8), 8)),
                TruncatedProfiniteInt::new(params, r.gen_range(0..1000), 3, 3).expect("valid level"),
            )
            .expect("in the domain");
            let moved = coupling_action(&w, &pt, &theta, &params);
            t.check(N_TRIVIAL, good && moved.as_ref() == Ok(&pt), || format!("BS({p},{qq}), w = {w}: {moved:?}"));
        }
    }
}

pub fn mixing_laws(t: &mut Tally, seed: u64) {
    let golden = ThetaValue::golden();
    let d = rotation_model_orbit(&golden, 1, DISCREPANCY_STEPS).map(|s| s.discrepancy);
    t.check(
        GOLDEN_DISCREPANCY,
        matches!(d, Ok(Some(d)) if d < DISCREPANCY_TOL),
        || format!("{d:?}"),
    );
    let base = BernoulliShift { width: 1 << 16 };
    let theta = golden.to_f64();
    for k in 0..3 {
        let sets = CesaroSets::random(seed.wrapping_add(k), theta);
        let rep = cesaro_mixing_test(&base, &sets, theta, CESARO_HORIZON, false);
        let ok = matches!(&rep, Ok(r) if r.gap < CESARO_TOL);
        t.check(CESARO_GAP, ok, || format!("{:?}", rep.map(|r| r.gap)));
    }
}

pub fn periodic_laws(t: &mut Tally, r: &mut impl Rng) {
    let mut done = 0;
    while done < 50 {
        let n: u64 = r.gen_range(1..3000);
        let c: u64 = r.gen_range(1..=n);
        if c.gcd(&n) != 1 {
            continue;
        }
        let (rr, s) = (r.gen_range(1..13u64), r.gen_range(1..13u64));
        let ok = component_counts(c, n, rr, s, 4, 4).is_ok_and(|tab| tab.divisibility_holds());
        t.check(DIVISIBILITY, ok, || format!("c = {c}, n = {n}, r = {rr}, s = {s}"));
        done += 1;
    }
    for (p, qq) in [(2, 3), (4, 6), (6, 9)] {
        let params = BSParams::new(p, qq).expect("valid");
        let size = modulus(&params, 2, 1).expect("small") as usize;
        let (d, m, n) = (params.d0 as u64, params.p0.unsigned_abs(), params.q0.unsigned_abs());
        let ok = periodicity_check(&odometer(size), d, m, n, 2, 1) && !periodicity_check(&odometer(size), d, m, n, 3, 1);
        t.check(ODOMETER, ok, || format!("BS({p},{qq}), size {size}"));
    }
}

pub fn run(seed: u64) -> Tally {
    let mut t = Tally::new();
    let mut r = rng(seed);
    beta_laws(&mut t, &mut r);
    n_action_laws(&mut t, &mut r);
    mixing_laws(&mut t, seed);
    periodic_laws(&mut t, &mut r);
    t
}

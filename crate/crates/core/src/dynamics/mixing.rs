use std::collections::BTreeMap;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use super::DynamicsError;

/// Bernoulli(1/2) shift on {0,1}^(ℤ/width); a moves coordinate i to i + 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BernoulliShift {
    pub width: usize,
}

/// {z : z_i = bit for every (i, bit)}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cylinder(pub Vec<(usize, bool)>);

impl Cylinder {
    pub fn full() -> Self {
        Cylinder(Vec::new())
    }
}

impl BernoulliShift {
    fn constraints(&self, a: &Cylinder, shift: i64, into: &mut BTreeMap<usize, bool>) -> bool {
        for &(i, bit) in &a.0 {
            let j = (i as i64 + shift).rem_euclid(self.width as i64) as usize;
            if *into.entry(j).or_insert(bit) != bit {
                return false;
            }
        }
        true
    }

    pub fn measure(&self, a: &Cylinder) -> f64 {
        self.overlap(a, 0, &Cylinder::full())
    }

    /// ξ(aᵐA₁ ∩ A₂).
    pub fn overlap(&self, a1: &Cylinder, m: i64, a2: &Cylinder) -> f64 {
        let mut fixed = BTreeMap::new();
        if !self.constraints(a1, m, &mut fixed) || !self.constraints(a2, 0, &mut fixed) {
            return 0.0;
        }
        0.5f64.powi(fixed.len() as i32)
    }
}

/// [lo, hi) inside the fundamental interval [0, |θ|).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Window {
    pub lo: f64,
    pub hi: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CesaroSets {
    pub a1: Cylinder,
    pub a2: Cylinder,
    pub b1: Window,
    pub b2: Window,
}

impl CesaroSets {
    /// Cylinders on 2 to 4 of the first 16 coordinates and windows of at least
    /// a fifth of [0, width).
    pub fn random(seed: u64, width: f64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let cyl = |rng: &mut ChaCha8Rng| {
            let n = rng.gen_range(2..=4);
            let mut coords: Vec<(usize, bool)> = Vec::new();
            while coords.len() < n {
                let i = rng.gen_range(0..16);
                if coords.iter().all(|c| c.0 != i) {
                    coords.push((i, rng.gen()));
                }
            }
            coords.sort_unstable();
            Cylinder(coords)
        };
        let win = |rng: &mut ChaCha8Rng| {
            let len = width * rng.gen_range(0.2..0.8);
            let lo = rng.gen_range(0.0..width - len);
            Window { lo, hi: lo + len }
        };
        let a1 = cyl(&mut rng);
        let a2 = cyl(&mut rng);
        let b1 = win(&mut rng);
        let b2 = win(&mut rng);
        CesaroSets { a1, a2, b1, b2 }
    }

    pub fn full(width: f64) -> Self {
        let all = Window { lo: 0.0, hi: width };
        CesaroSets {
            a1: Cylinder::full(),
            a2: Cylinder::full(),
            b1: all,
            b2: all,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CesaroReport {
    pub horizon: u64,
    /// (n, (1/n)Σ_{k≤n} ν(bᵏ(A₁×B₁) ∩ (A₂×B₂)), gap).
    pub checkpoints: Vec<(u64, f64, f64)>,
    pub target: f64,
    pub gap: f64,
    /// The same average with the A-factors dropped.
    pub rotation_gap: f64,
    /// |m| beyond which the cylinders are independent.
    pub mixing_lag: i64,
    /// Largest mixing defect seen at |m| ≥ lag.
    pub eps_mixing: f64,
    /// Average mass of B₁ where |m| < lag.
    pub eps_lag: f64,
    /// 6·max(rotation gap, ε's); bounds the gap.
    pub bound: f64,
}

impl CesaroReport {
    pub fn to_json(&self) -> Value {
        json!({
            "horizon": self.horizon,
            "target": self.target,
            "gap": self.gap,
            "rotation_gap": self.rotation_gap,
            "mixing_lag": self.mixing_lag,
            "eps_mixing": self.eps_mixing,
            "eps_lag": self.eps_lag,
            "bound": self.bound,
            "checkpoints": self.checkpoints.iter().map(|(n, a, g)| json!({"n": n, "average": a, "gap": g})).collect::<Vec<_>>(),
        })
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,average,gap\n");
        for (n, a, g) in &self.checkpoints {
            out.push_str(&format!("{n},{a},{g}\n"));
        }
        out
    }
}

fn overlap_len(a: (f64, f64), b: (f64, f64), c: (f64, f64)) -> f64 {
    (a.1.min(b.1).min(c.1) - a.0.max(b.0).max(c.0)).max(0.0)
}

/// Cesàro averages for b = a acting on Z × [0,|θ|) by
/// (z, x) ↦ (a^{β(1,x)}z, x − 1 + θβ(1,x)). The B-sets depend on the
/// L-coordinate only, so the K-factor integrates out. With `trivial_beta`
/// the Z-factor is not moved.
pub fn cesaro_mixing_test(
    base: &BernoulliShift,
    sets: &CesaroSets,
    theta: f64,
    horizon: u64,
    trivial_beta: bool,
) -> Result<CesaroReport, DynamicsError> {
    if theta == 0.0 || !theta.is_finite() || horizon == 0 {
        return Err(DynamicsError::OutOfDomain("θ must be nonzero and horizon positive".into()));
    }
    let w = theta.abs();
    for b in [sets.b1, sets.b2] {
        if !(0.0 <= b.lo && b.lo <= b.hi && b.hi <= w) {
            return Err(DynamicsError::OutOfDomain(format!("window [{}, {}) not in [0, {w})", b.lo, b.hi)));
        }
    }
    let (xa1, xa2) = (base.measure(&sets.a1), base.measure(&sets.a2));
    let (nb1, nb2) = ((sets.b1.hi - sets.b1.lo) / w, (sets.b2.hi - sets.b2.lo) / w);
    let target = xa1 * nb1 * xa2 * nb2;
    let independent = xa1 * xa2;
    let mixing_lag = sets
        .a1
        .0
        .iter()
        .flat_map(|a| sets.a2.0.iter().map(move |b| (a.0 as i64 - b.0 as i64).abs()))
        .max()
        .map_or(0, |d| d + 1);

    let (mut sum, mut rot_sum, mut lag_sum, mut eps_mixing) = (0.0, 0.0, 0.0, 0.0f64);
    let mut checkpoints = Vec::new();
    let mut next_mark = 1u64;
    let b1 = (sets.b1.lo, sets.b1.hi);
    let b2 = (sets.b2.lo, sets.b2.hi);
    for k in 1..=horizon {
        // y = (x − k) mod w, split where it wraps
        let s = (-(k as f64)).rem_euclid(w);
        for (piece, delta) in [((0.0, w - s), s), ((w - s, w), s - w)] {
            let m = ((k as f64 + delta) / theta).round() as i64;
            let len = overlap_len(b1, piece, (b2.0 - delta, b2.1 - delta)) / w;
            let xi = base.overlap(&sets.a1, if trivial_beta { 0 } else { m }, &sets.a2);
            sum += len * xi;
            rot_sum += len;
            if m.abs() < mixing_lag {
                lag_sum += overlap_len(b1, piece, (f64::NEG_INFINITY, f64::INFINITY)) / w;
            } else if len > 0.0 {
                eps_mixing = eps_mixing.max((xi - independent).abs());
            }
        }
        if k == next_mark || k == horizon {
            let avg = sum / k as f64;
            checkpoints.push((k, avg, (avg - target).abs()));
            next_mark = next_mark.saturating_mul(10);
        }
    }
    let n = horizon as f64;
    let gap = (sum / n - target).abs();
    let rotation_gap = (rot_sum / n - nb1 * nb2).abs();
    let eps_lag = lag_sum / n;
    Ok(CesaroReport {
        horizon,
        checkpoints,
        target,
        gap,
        rotation_gap,
        mixing_lag,
        eps_mixing,
        eps_lag,
        bound: 6.0 * rotation_gap.max(eps_mixing).max(eps_lag),
    })
}

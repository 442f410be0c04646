use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use super::coupling::ThetaValue;
use super::real::Surd;
use super::DynamicsError;

#[derive(Clone, Debug, PartialEq)]
pub struct OrbitStats {
    pub steps: u64,
    /// Exact minimal period, rational θ only.
    pub period: Option<u64>,
    /// Rotation by a multiple of the grid period: every point is fixed.
    pub degenerate: bool,
    /// Star discrepancy of the first `steps` points, irrational θ only.
    pub discrepancy: Option<f64>,
}

impl OrbitStats {
    pub fn to_json(&self) -> Value {
        json!({
            "steps": self.steps,
            "period": self.period,
            "degenerate": self.degenerate,
            "discrepancy": self.discrepancy,
        })
    }
}

/// D*_n of points in [0,1).
pub fn star_discrepancy(points: &mut [f64]) -> f64 {
    points.sort_by(f64::total_cmp);
    let n = points.len() as f64;
    points
        .iter()
        .enumerate()
        .map(|(i, &u)| ((i + 1) as f64 / n - u).max(u - i as f64 / n))
        .fold(0.0, f64::max)
}

/// Rotation by θ − 1 on the level-N circle ℝ/Nℤ, started at 0.
pub fn rotation_model_orbit(theta: &ThetaValue, n: u64, steps: u64) -> Result<OrbitStats, DynamicsError> {
    if steps == 0 || n == 0 {
        return Err(DynamicsError::OutOfDomain("steps and N must be positive".into()));
    }
    match theta {
        ThetaValue::Rational(r) => {
            // grid (1/v)ℤ/Nℤ with N·v points, step u − v
            let (u, v) = (r.numer(), r.denom());
            let size = v * n;
            let g = (u - v).abs().gcd(&size);
            let period = (size / g).to_u64().ok_or_else(|| DynamicsError::OutOfDomain("period too large".into()))?;
            Ok(OrbitStats {
                steps,
                period: Some(period),
                degenerate: period == 1,
                discrepancy: None,
            })
        }
        ThetaValue::Surd { value, .. } => {
            let step = value - &Surd::int(1);
            let modulus = Surd::int(n as i64);
            let scale = BigRational::from_integer(n.into());
            let mut y = Surd::int(0);
            let mut pts = Vec::with_capacity(steps as usize);
            for _ in 0..steps {
                pts.push(y.to_f64() / n as f64);
                y = &y + &step;
                let wraps = y.div(&modulus).floor()?;
                if !wraps.is_zero() {
                    y = &y - &Surd::rational(&scale * BigRational::from_integer(wraps));
                }
            }
            Ok(OrbitStats {
                steps,
                period: None,
                degenerate: false,
                discrepancy: Some(star_discrepancy(&mut pts)),
            })
        }
        ThetaValue::Interval { .. } => {
            // statistics only; the midpoint stands in for θ
            let step = theta.to_f64() - 1.0;
            let mut pts: Vec<f64> = (0..steps)
                .map(|k| (k as f64 * step).rem_euclid(n as f64) / n as f64)
                .collect();
            Ok(OrbitStats {
                steps,
                period: None,
                degenerate: false,
                discrepancy: Some(star_discrepancy(&mut pts)),
            })
        }
    }
}

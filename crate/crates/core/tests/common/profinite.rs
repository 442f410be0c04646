use std::collections::HashSet;

use bsgroupoid::bs::BSParams;
use bsgroupoid::profinite::{check_unit_fixes_level, modulus, u0_membership, TruncatedProfiniteInt};
use num_integer::Integer;

pub const PARAMS: [(i64, i64); 6] = [(2, 3), (2, 5), (4, 6), (6, 9), (2, -3), (4, 9)];

/// Every level (K, L) whose modulus is at most `max`.
pub fn levels(params: &BSParams, max: u64) -> Vec<(u32, u32)> {
    let mut out = Vec::new();
    for k in 0.. {
        if modulus(params, k, 0).map_or(true, |m| m > max) {
            break;
        }
        for l in 0.. {
            match modulus(params, k, l) {
                Ok(m) if m <= max => out.push((k, l)),
                _ => break,
            }
        }
    }
    out
}

#[derive(Default, Debug)]
pub struct LimitCounts {
    pub levels: usize,
    pub sigma_checks: usize,
    pub unit_checks: usize,
    pub failures: Vec<String>,
}

fn g(params: &BSParams, k: u32, l: u32) -> u64 {
    modulus(params, k, l).unwrap()
}

/// The level maps, the fixing criterion and the d₀(r − 1) criterion at every
/// level of modulus ≤ max. Pointwise fixing is checked by enumeration when
/// M ≤ brute_max.
pub fn check_limit_lemmas(p: i64, q: i64, max: u64, brute_max: u64) -> LimitCounts {
    let params = BSParams::new(p, q).unwrap();
    let d0 = params.d0 as u64;
    let sign = |k: u32, l: u32| params.p0.signum().pow(k) * params.q0.signum().pow(l);
    let mut c = LimitCounts::default();
    for (kk, ll) in levels(&params, max) {
        c.levels += 1;
        let m = g(&params, kk, ll);
        let el = |v: i128| TruncatedProfiniteInt::new(params, v, kk, ll).unwrap();
        for k in 0..=kk {
            for l in 0..=ll {
                let gen = g(&params, k, l);
                let factor = (params.p0.abs().pow(k) * params.q0.abs().pow(l)) as i128 * sign(k, l) as i128;
                let mut image = HashSet::new();
                for y in 0..m / d0 {
                    let x = el((y * d0) as i128);
                    let s = x.sigma_map(k, l).unwrap();
                    if s.residue() as i128 != (x.residue() as i128 * factor).rem_euclid(m as i128) || s.residue() % gen != 0
                    {
                        c.failures.push(format!("σ_{k},{l}({x})"));
                    }
                    image.insert(s.residue());
                    let back = s.sigma_inverse(k, l).unwrap();
                    if back != x.reduce_to(kk - k, ll - l).unwrap() {
                        c.failures.push(format!("σ⁻¹σ({x}) at ({k},{l})"));
                    }
                    c.sigma_checks += 1;
                }
                if image.len() as u64 != m / gen {
                    c.failures.push(format!("σ_{k},{l} not onto at ({kk},{ll})"));
                }
            }
        }
        for r in (0..m).filter(|r| r.gcd(&m) == 1) {
            let re = el(r as i128);
            let u0 = u0_membership(&re).unwrap();
            if u0 != (d0 as u128 * (r as u128 + m as u128 - 1)).is_multiple_of(m as u128) {
                c.failures.push(format!("u0 membership of {re}"));
            }
            for k in 0..=kk {
                for l in 0..=ll {
                    let fixes = check_unit_fixes_level(&re, k, l).unwrap();
                    if m <= brute_max {
                        let gen = g(&params, k, l);
                        let brute = (0..m / gen).all(|i| (r as u128 * (i * gen) as u128) % m as u128 == (i * gen) as u128);
                        if brute != fixes {
                            c.failures.push(format!("fixing oracle for {re} on Ē_{k},{l}"));
                        }
                    }
                    // (iv) with the level loss K−k, L−l
                    let target = d0 * g(&params, kk - k, ll - l) / d0;
                    if fixes && !(d0 as u128 * (r as u128 + m as u128 - 1)).is_multiple_of(target as u128) {
                        c.failures.push(format!("(iv) for {re} on Ē_{k},{l}"));
                    }
                    c.unit_checks += 1;
                }
            }
            // (v)
            if u0 && !(0..m / d0).all(|y| (r as u128 * (y * d0) as u128) % m as u128 == (y * d0) as u128) {
                c.failures.push(format!("(v) for {re}"));
            }
        }
    }
    c
}

//! Brute-force stabilizer indices and balls in the Bass-Serre tree.

use std::collections::{BTreeSet, VecDeque};

use bsgroupoid::bs::{BSParams, GroupWord};
use bsgroupoid::tree::{neighbors, TreeVertex};

use super::words::{reduce, Tok};

pub const MAX_POWER: i64 = 100_000;

/// Whether w lies in ⟨a⟩, via the rewriting oracle.
fn is_a_power(w: &GroupWord, params: &BSParams) -> bool {
    matches!(reduce(w, params).as_slice(), [] | [Tok::A(_)])
}

/// Smallest n > 0 with g aⁿ g⁻¹ ∈ Stab(h·v₀), i.e. h⁻¹ g aⁿ g⁻¹ h ∈ ⟨a⟩.
pub fn smallest_power(g: &GroupWord, h: &GroupWord, params: &BSParams) -> Option<i64> {
    let left = h.inverse().mul(g);
    let right = g.inverse().mul(h);
    (1..=MAX_POWER).find(|&n| is_a_power(&left.mul(&GroupWord::a_pow(n)).mul(&right), params))
}

/// All vertices within `radius` of v₀, in breadth-first order.
pub fn ball(params: &BSParams, radius: usize) -> Vec<(TreeVertex, usize)> {
    let mut seen = BTreeSet::from([TreeVertex::base()]);
    let mut out = vec![(TreeVertex::base(), 0)];
    let mut queue = VecDeque::from([(TreeVertex::base(), 0)]);
    while let Some((v, d)) = queue.pop_front() {
        if d == radius {
            continue;
        }
        for (_, w) in neighbors(&v, params) {
            if seen.insert(w.clone()) {
                out.push((w.clone(), d + 1));
                queue.push_back((w, d + 1));
            }
        }
    }
    out
}

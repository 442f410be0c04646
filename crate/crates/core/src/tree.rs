//! The oriented Bass-Serre tree of BS(p,q), materialized lazily.
//!
//! Vertices are cosets γ⟨a⟩ and edges cosets γ⟨a^q⟩; the positively oriented
//! edge γ⟨a^q⟩ runs from γ⟨a⟩ to γt⟨a⟩.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::bs::{normalize, BSParams, BrittonNormalForm, Gen, GroupWord};

pub const DEFAULT_RADIUS: usize = 32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("distance {distance} exceeds search radius {radius}")]
    RadiusExceeded { distance: usize, radius: usize },
}

/// A vertex γ⟨a⟩, stored as the normal form of γ with its trailing a-power
/// removed. Two words give equal vertices iff they lie in the same coset.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TreeVertex {
    pub rep: BrittonNormalForm,
}

impl TreeVertex {
    pub fn base() -> Self {
        TreeVertex {
            rep: BrittonNormalForm::identity(),
        }
    }

    pub fn word(&self) -> GroupWord {
        self.rep.to_word()
    }

    /// g·v.
    pub fn translate(&self, g: &GroupWord, params: &BSParams) -> TreeVertex {
        canonical_vertex(&g.mul(&self.word()), params)
    }

    /// Whether `g` fixes this vertex, i.e. rep⁻¹ g rep ∈ ⟨a⟩.
    pub fn is_fixed_by(&self, g: &GroupWord, params: &BSParams) -> bool {
        let r = self.word();
        normalize(&r.inverse().mul(g).mul(&r), params)
            .as_a_power()
            .is_some()
    }
}

impl fmt::Display for TreeVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.rep)
    }
}

impl Serialize for TreeVertex {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// An edge γ⟨a^q⟩ together with the direction in which it is traversed.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TreeEdge {
    /// Normal form of γ with the trailing exponent reduced into [0, |q|).
    pub rep: BrittonNormalForm,
    pub origin: TreeVertex,
    pub terminal: TreeVertex,
    /// +1 when traversed from origin to terminal.
    pub sign: i8,
}

impl TreeEdge {
    pub fn reversed(&self) -> TreeEdge {
        TreeEdge {
            rep: self.rep.clone(),
            origin: self.origin.clone(),
            terminal: self.terminal.clone(),
            sign: -self.sign,
        }
    }

    /// Start of the traversal.
    pub fn from_vertex(&self) -> &TreeVertex {
        if self.sign > 0 {
            &self.origin
        } else {
            &self.terminal
        }
    }

    /// End of the traversal.
    pub fn to_vertex(&self) -> &TreeVertex {
        if self.sign > 0 {
            &self.terminal
        } else {
            &self.origin
        }
    }
}

impl Serialize for TreeEdge {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("TreeEdge", 2)?;
        st.serialize_field("edge", &self.rep.to_string())?;
        st.serialize_field("sign", &self.sign)?;
        st.end()
    }
}

pub fn canonical_vertex(w: &GroupWord, params: &BSParams) -> TreeVertex {
    let mut rep = normalize(w, params);
    *rep.last_exponent_mut() = BigInt::zero();
    TreeVertex { rep }
}

fn canonical_edge(gamma: &GroupWord, params: &BSParams) -> BrittonNormalForm {
    let mut rep = normalize(gamma, params);
    let q = BigInt::from(params.q.abs());
    let k = rep.last_exponent().mod_floor(&q);
    *rep.last_exponent_mut() = k;
    rep
}

/// Edge γ⟨a^q⟩ traversed with the given sign.
pub fn edge_of(gamma: &GroupWord, sign: i8, params: &BSParams) -> TreeEdge {
    TreeEdge {
        rep: canonical_edge(gamma, params),
        origin: canonical_vertex(gamma, params),
        terminal: canonical_vertex(&gamma.mul(&GroupWord::t()), params),
        sign,
    }
}

/// The |q| outgoing edges (sign +1) followed by the |p| incoming edges
/// (sign −1), each paired with the vertex at its far end.
pub fn neighbors(v: &TreeVertex, params: &BSParams) -> Vec<(TreeEdge, TreeVertex)> {
    let base = v.word();
    let mut out = Vec::with_capacity((params.p.abs() + params.q.abs()) as usize);
    for i in 0..params.q.abs() {
        let gamma = base.mul(&GroupWord::a_pow(i));
        let e = edge_of(&gamma, 1, params);
        let w = e.terminal.clone();
        out.push((e, w));
    }
    for i in 0..params.p.abs() {
        let gamma = base
            .mul(&GroupWord::a_pow(i))
            .mul(&GroupWord::t_pow(-1));
        let e = edge_of(&gamma, -1, params);
        let w = e.origin.clone();
        out.push((e, w));
    }
    out
}

/// Tree distance d(u, v).
pub fn distance(u: &TreeVertex, v: &TreeVertex, params: &BSParams) -> usize {
    normalize(&u.word().inverse().mul(&v.word()), params).t_length()
}

/// The reduced edge path from u to v.
///
/// Computed from the normal form of u⁻¹v: its prefixes are exactly the
/// vertices of the geodesic, because a pinch-free form never backtracks.
pub fn geodesic(
    u: &TreeVertex,
    v: &TreeVertex,
    params: &BSParams,
    radius: usize,
) -> Result<Vec<TreeEdge>, TreeError> {
    let uw = u.word();
    let g = normalize(&uw.inverse().mul(&v.word()), params);
    let n = g.t_length();
    if n > radius {
        return Err(TreeError::RadiusExceeded {
            distance: n,
            radius,
        });
    }
    let mut path = Vec::with_capacity(n);
    let mut prefix = uw.mul(&GroupWord::a_pow(g.k0.clone()));
    for (i, (e, _)) in g.syllables.iter().enumerate() {
        if i > 0 {
            prefix.push(Gen::A, g.syllables[i - 1].1.clone());
        }
        let edge = if *e == 1 {
            edge_of(&prefix, 1, params)
        } else {
            edge_of(&prefix.mul(&GroupWord::t_pow(-1)), -1, params)
        };
        path.push(edge);
        prefix.push(Gen::T, BigInt::from(*e));
    }
    Ok(path)
}

/// [Γ_u : Γ_u ∩ Γ_v] = d₀·|p₀|^(−m)·|q₀|^M along the geodesic, where M and m
/// are the max and min of 0 and the partial sums of the edge signs; 1 if u = v.
pub fn stabilizer_index(
    u: &TreeVertex,
    v: &TreeVertex,
    params: &BSParams,
    radius: usize,
) -> Result<BigInt, TreeError> {
    if u == v {
        return Ok(BigInt::from(1));
    }
    let path = geodesic(u, v, params, radius)?;
    let (mut sum, mut hi, mut lo) = (0i64, 0i64, 0i64);
    for e in &path {
        sum += e.sign as i64;
        hi = hi.max(sum);
        lo = lo.min(sum);
    }
    let p0 = BigInt::from(params.p0.abs());
    let q0 = BigInt::from(params.q0.abs());
    Ok(BigInt::from(params.d0)
        * num_traits::pow(p0, (-lo) as usize)
        * num_traits::pow(q0, hi as usize))
}

/// τ(w): the t-exponent sum, equivalently the signed edge count from v₀ to w·v₀.
pub fn tau(w: &GroupWord) -> BigInt {
    w.t_exponent_sum()
}

/// Signed edge count along the geodesic from v₀ to w·v₀; this is how τ is
/// defined on Aut(T), so it must agree with the exponent sum.
pub fn signed_path_length(w: &GroupWord, params: &BSParams) -> i64 {
    let v = canonical_vertex(w, params);
    geodesic(&TreeVertex::base(), &v, params, usize::MAX)
        .expect("unbounded radius")
        .iter()
        .map(|e| e.sign as i64)
        .sum()
}

/// Stabilizer-index ratio [E : E ∩ γEγ⁻¹] / [E : E ∩ γ⁻¹Eγ] for E = ⟨a⟩.
pub fn conjugation_indices(
    gamma: &GroupWord,
    params: &BSParams,
    radius: usize,
) -> Result<(BigInt, BigInt), TreeError> {
    let v0 = TreeVertex::base();
    let plus = stabilizer_index(&v0, &canonical_vertex(gamma, params), params, radius)?;
    let minus = stabilizer_index(
        &v0,
        &canonical_vertex(&gamma.inverse(), params),
        params,
        radius,
    )?;
    Ok((plus, minus))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> GroupWord {
        s.parse().unwrap()
    }

    #[test]
    fn vertex_canonicalization() {
        let p = BSParams::new(2, 3).unwrap();
        assert_eq!(canonical_vertex(&w("a^7"), &p), TreeVertex::base());
        // a^q t = t a^p, so both land on t·v₀; a^p t is a different out-neighbour
        assert_eq!(canonical_vertex(&w("t a^3"), &p), canonical_vertex(&w("a^3 t"), &p));
        assert_ne!(canonical_vertex(&w("t a^3"), &p), canonical_vertex(&w("a^2 t"), &p));
        assert_ne!(canonical_vertex(&w("t"), &p), TreeVertex::base());
    }

    #[test]
    fn degree_and_neighbors() {
        let p = BSParams::new(2, 3).unwrap();
        let nb = neighbors(&TreeVertex::base(), &p);
        assert_eq!(nb.len(), 5);
        let outs: Vec<_> = nb.iter().filter(|(e, _)| e.sign == 1).map(|(_, v)| v.clone()).collect();
        let want: Vec<_> = ["t", "a t", "a^2 t"].iter().map(|s| canonical_vertex(&w(s), &p)).collect();
        assert_eq!(outs, want);
    }

    #[test]
    fn stabilizer_examples() {
        let p = BSParams::new(2, 3).unwrap();
        let v0 = TreeVertex::base();
        let r = DEFAULT_RADIUS;
        assert_eq!(stabilizer_index(&v0, &v0, &p, r).unwrap(), BigInt::from(1));
        let tv = canonical_vertex(&w("t"), &p);
        assert_eq!(stabilizer_index(&v0, &tv, &p, r).unwrap(), BigInt::from(3));
        let tiv = canonical_vertex(&w("T"), &p);
        assert_eq!(stabilizer_index(&v0, &tiv, &p, r).unwrap(), BigInt::from(2));
    }

    #[test]
    fn geodesic_two_positive_edges() {
        let p = BSParams::new(2, 3).unwrap();
        let path = geodesic(&TreeVertex::base(), &canonical_vertex(&w("t^2"), &p), &p, 4).unwrap();
        assert_eq!(path.len(), 2);
        assert!(path.iter().all(|e| e.sign == 1));
        assert!(geodesic(&TreeVertex::base(), &canonical_vertex(&w("t^5"), &p), &p, 4).is_err());
    }

    #[test]
    fn tau_values() {
        assert_eq!(tau(&w("a")), BigInt::from(0));
        assert_eq!(tau(&w("t a T a")), BigInt::from(0));
        assert_eq!(tau(&w("t^3 A^2 T")), BigInt::from(2));
    }
}

use std::collections::{BTreeMap, VecDeque};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use super::prime_exponents;
use crate::bs::ratio_pow;
use crate::groupoid::FiniteMeasuredGroupoid;

/// Units joined by edges carrying Radon-Nikodym values; loops are allowed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NonsingularGraph {
    pub n_units: usize,
    /// (source, range, value).
    pub edges: Vec<(usize, usize, BigRational)>,
}

impl NonsingularGraph {
    /// μ(r)/μ(s) on every non-unit arrow.
    pub fn from_groupoid(g: &FiniteMeasuredGroupoid) -> Self {
        NonsingularGraph {
            n_units: g.n_units(),
            edges: (0..g.n_arrows())
                .filter(|&a| !g.is_unit(a))
                .map(|a| (g.source(a), g.range(a), g.mass(g.range(a)) / g.mass(g.source(a))))
                .collect(),
        }
    }

    /// Values around the cycles closed by each edge against a spanning tree.
    pub fn cycle_values(&self) -> Vec<BigRational> {
        let mut adj: Vec<Vec<(usize, BigRational)>> = vec![Vec::new(); self.n_units];
        for (s, r, v) in &self.edges {
            adj[*s].push((*r, v.clone()));
            adj[*r].push((*s, v.recip()));
        }
        let mut psi: Vec<Option<BigRational>> = vec![None; self.n_units];
        for b in 0..self.n_units {
            if psi[b].is_some() {
                continue;
            }
            psi[b] = Some(BigRational::one());
            let mut queue = VecDeque::from([b]);
            while let Some(x) = queue.pop_front() {
                for (y, v) in &adj[x] {
                    if psi[*y].is_none() {
                        psi[*y] = Some(v * psi[x].as_ref().expect("visited"));
                        queue.push_back(*y);
                    }
                }
            }
        }
        self.edges
            .iter()
            .map(|(s, r, v)| {
                let (ps, pr) = (psi[*s].as_ref().expect("visited"), psi[*r].as_ref().expect("visited"));
                v * ps / pr
            })
            .filter(|c| !c.is_one())
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TypeLabel {
    MeasurePreservingII,
    /// 0 < λ < 1.
    TypeIIIlambda(BigRational),
    TypeIII1,
    /// Never produced by a finite model.
    TypeIII0Flag,
}

impl TypeLabel {
    pub fn to_json(&self) -> Value {
        match self {
            TypeLabel::MeasurePreservingII => json!({ "type": "II" }),
            TypeLabel::TypeIIIlambda(l) => json!({ "type": "III_lambda", "lambda": l.to_string() }),
            TypeLabel::TypeIII1 => json!({ "type": "III_1" }),
            TypeLabel::TypeIII0Flag => json!({ "type": "III_0", "note": "not representable at finite scale" }),
        }
    }
}

/// Rank of integer vectors over ℚ.
fn rank(rows: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|r| r.iter().map(|&v| BigRational::from_integer(v.into())).collect())
        .collect();
    let cols = m.first().map_or(0, Vec::len);
    let mut rk = 0;
    for c in 0..cols {
        let Some(p) = (rk..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(rk, p);
        for i in 0..m.len() {
            if i != rk && !m[i][c].is_zero() {
                let f = &m[i][c] / &m[rk][c];
                for j in c..cols {
                    let delta = &f * &m[rk][j];
                    m[i][j] -= delta;
                }
            }
        }
        rk += 1;
    }
    rk
}

/// Type from the subgroup of ℚ₊ generated by cycle values.
pub fn classify_graph(graph: &NonsingularGraph) -> TypeLabel {
    let cycles = graph.cycle_values();
    if cycles.is_empty() {
        return TypeLabel::MeasurePreservingII;
    }
    let factored: Vec<Vec<(BigInt, i64)>> = cycles.iter().map(prime_exponents).collect();
    let primes: Vec<BigInt> = factored
        .iter()
        .flatten()
        .map(|(p, _)| p.clone())
        .collect::<std::collections::BTreeSet<_>>()
        .into_iter()
        .collect();
    let col: BTreeMap<&BigInt, usize> = primes.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let rows: Vec<Vec<i64>> = factored
        .iter()
        .map(|f| {
            let mut row = vec![0; primes.len()];
            for (p, e) in f {
                row[col[p]] = *e;
            }
            row
        })
        .collect();
    match rank(&rows) {
        0 => TypeLabel::MeasurePreservingII,
        1 => {
            let first = &rows[0];
            let g0 = first.iter().fold(0i64, |a, &b| a.gcd(&b));
            let w: Vec<i64> = first.iter().map(|v| v / g0).collect();
            let pivot = w.iter().position(|&v| v != 0).expect("nonzero row");
            let g = rows.iter().fold(0i64, |a, r| a.gcd(&(r[pivot] / w[pivot])));
            let beta = primes.iter().zip(&w).fold(BigRational::one(), |acc, (p, &e)| {
                acc * ratio_pow(&BigRational::from_integer(p.clone()), &BigInt::from(e))
            });
            let lambda = ratio_pow(&beta, &BigInt::from(g));
            TypeLabel::TypeIIIlambda(if lambda > BigRational::one() { lambda.recip() } else { lambda })
        }
        _ => TypeLabel::TypeIII1,
    }
}

pub fn classify_type(g: &FiniteMeasuredGroupoid) -> TypeLabel {
    classify_graph(&NonsingularGraph::from_groupoid(g))
}

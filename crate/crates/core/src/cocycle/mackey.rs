use std::collections::VecDeque;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::One;

use super::{CocycleError, CocycleTarget, CocycleValue, GroupoidCocycle};
use crate::bs::{ratio_pow, BSParams};
use crate::groupoid::{FiniteMeasuredGroupoid, UnionFind};

/// Cocycle values on the edges of a graph; the groupoid generated by the
/// edges carries the cocycle multiplicatively along paths.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CocycleGraph {
    pub n_units: usize,
    pub target: CocycleTarget,
    /// (source, range, value).
    pub edges: Vec<(usize, usize, CocycleValue)>,
}

impl CocycleGraph {
    /// Every non-unit arrow as an edge.
    pub fn from_cocycle(g: &FiniteMeasuredGroupoid, c: &GroupoidCocycle) -> Self {
        CocycleGraph {
            n_units: g.n_units(),
            target: c.target,
            edges: (0..g.n_arrows())
                .filter(|&a| !g.is_unit(a))
                .map(|a| (g.source(a), g.range(a), c.values[a].clone()))
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Layout {
    /// Component of (x, h) at index x·n + h.
    Table { n: u64, comp: Vec<usize> },
    /// (x, h) lies in component start[x] + (h + offset[x]) mod period[x].
    Periodic {
        start: Vec<usize>,
        period: Vec<u64>,
        offset: Vec<i64>,
    },
}

/// Ergodic components of the skew product on units × H, with the action of
/// the generator 1 ∈ H given by (x, h′) ↦ (x, h′ − 1).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MackeyRange {
    layout: Layout,
    reps: Vec<(usize, i64)>,
}

impl MackeyRange {
    pub fn n_components(&self) -> usize {
        self.reps.len()
    }

    pub fn component(&self, x: usize, h: i64) -> usize {
        match &self.layout {
            Layout::Table { n, comp } => comp[x * *n as usize + h.rem_euclid(*n as i64) as usize],
            Layout::Periodic { start, period, offset } => {
                start[x] + (h + offset[x]).rem_euclid(period[x] as i64) as usize
            }
        }
    }

    /// A point (x, h) in component z.
    pub fn representative(&self, z: usize) -> (usize, i64) {
        self.reps[z]
    }

    /// The generator of H applied to component z.
    pub fn act(&self, z: usize) -> usize {
        let (x, h) = self.reps[z];
        self.component(x, h - 1)
    }

    /// Orbit lengths of the generator, sorted.
    pub fn orbit_sizes(&self) -> Vec<usize> {
        let mut seen = vec![false; self.n_components()];
        let mut out = Vec::new();
        for z in 0..self.n_components() {
            if seen[z] {
                continue;
            }
            let mut len = 0;
            let mut w = z;
            while !seen[w] {
                seen[w] = true;
                len += 1;
                w = self.act(w);
            }
            out.push(len);
        }
        out.sort_unstable();
        out
    }

    /// Whether `map` (sending (x, h) of `self` to a point of `other`)
    /// induces an equivariant bijection of components. Checked at every
    /// point of a period window of each unit.
    pub fn is_isomorphic_via(
        &self,
        other: &MackeyRange,
        units: &[usize],
        map: impl Fn(usize, i64) -> (usize, i64),
    ) -> bool {
        if self.n_components() != other.n_components() {
            return false;
        }
        let window = match &self.layout {
            Layout::Table { n, .. } => *n as i64,
            Layout::Periodic { period, .. } => 2 * period.iter().copied().max().unwrap_or(1) as i64,
        };
        let mut image: Vec<Option<usize>> = vec![None; self.n_components()];
        for &x in units {
            for h in -window..=window {
                let (y, k) = map(x, h);
                let (z, w) = (self.component(x, h), other.component(y, k));
                match image[z] {
                    Some(v) if v != w => return false,
                    _ => image[z] = Some(w),
                }
            }
        }
        let Some(image) = image.into_iter().collect::<Option<Vec<usize>>>() else {
            return false;
        };
        let mut hit = vec![false; other.n_components()];
        for &w in &image {
            if std::mem::replace(&mut hit[w], true) {
                return false;
            }
        }
        (0..self.n_components()).all(|z| image[self.act(z)] == other.act(image[z]))
    }
}

fn cyclic_range(graph: &CocycleGraph, n: u64) -> MackeyRange {
    let m = n as usize;
    let mut uf = UnionFind::new(graph.n_units * m);
    for (s, r, v) in &graph.edges {
        let CocycleValue::Mod(v) = v else {
            panic!("value {v} is not in ℤ/{n}")
        };
        for h in 0..m {
            // ((r, τh), (s, h)) is in the relation
            uf.union(s * m + h, r * m + (h + *v as usize) % m);
        }
    }
    let (comp, count) = uf.classes();
    let mut reps = vec![None; count];
    for (i, &c) in comp.iter().enumerate() {
        reps[c].get_or_insert((i / m, (i % m) as i64));
    }
    MackeyRange {
        layout: Layout::Table { n, comp },
        reps: reps.into_iter().map(|r| r.expect("nonempty class")).collect(),
    }
}

/// Periods and unions of the window units × [−b, b].
fn window_classes(n_units: usize, edges: &[(usize, usize, i64)], b: i64) -> UnionFind {
    let width = (2 * b + 1) as usize;
    let node = |x: usize, h: i64| x * width + (h + b) as usize;
    let mut uf = UnionFind::new(n_units * width);
    for &(s, r, v) in edges {
        for h in -b..=b {
            if (h + v).abs() <= b {
                uf.union(node(s, h), node(r, h + v));
            }
        }
    }
    uf
}

fn integer_range(graph: &CocycleGraph) -> Result<MackeyRange, CocycleError> {
    let n = graph.n_units;
    let edges: Vec<(usize, usize, i64)> = graph
        .edges
        .iter()
        .map(|(s, r, v)| match v {
            CocycleValue::Int(v) => (*s, *r, *v),
            v => panic!("value {v} is not an integer"),
        })
        .collect();
    let mut units_uf = UnionFind::new(n);
    for &(s, r, _) in &edges {
        units_uf.union(s, r);
    }
    let (piece, n_pieces) = units_uf.classes();
    let mut base = vec![usize::MAX; n_pieces];
    for x in (0..n).rev() {
        base[piece[x]] = x;
    }
    let total: i64 = edges.iter().map(|e| e.2.abs()).sum();
    let b_max = 4 * total + 8;

    let mut b = 8i64;
    let mut prev: Option<Vec<Option<u64>>> = None;
    loop {
        let width = (2 * b + 1) as usize;
        let node = |x: usize, h: i64| x * width + (h + b) as usize;
        let mut uf = window_classes(n, &edges, b);
        let periods: Vec<Option<u64>> = base
            .iter()
            .map(|&x| {
                let home = uf.find(node(x, 0));
                (1..=b).find(|&d| uf.find(node(x, d)) == home).map(|d| d as u64)
            })
            .collect();
        let complete = periods.iter().all(Option::is_some);
        let stable = prev.as_ref() == Some(&periods) && b / 2 >= total;
        if complete && (stable || b >= b_max) {
            let mut start = vec![0; n_pieces];
            let mut acc = 0;
            for c in 0..n_pieces {
                start[c] = acc;
                acc += periods[c].expect("complete") as usize;
            }
            let mut offset = vec![0i64; n];
            for x in 0..n {
                let c = piece[x];
                let target = uf.find(node(x, 0));
                let o = (-b..=b)
                    .find(|&h| uf.find(node(base[c], h)) == target)
                    .ok_or(CocycleError::InfiniteComponents { window: b })?;
                offset[x] = o.rem_euclid(periods[c].expect("complete") as i64);
            }
            let mut reps = Vec::with_capacity(acc);
            for c in 0..n_pieces {
                for j in 0..periods[c].expect("complete") as i64 {
                    reps.push((base[c], j));
                }
            }
            return Ok(MackeyRange {
                layout: Layout::Periodic {
                    start: (0..n).map(|x| start[piece[x]]).collect(),
                    period: (0..n).map(|x| periods[piece[x]].expect("complete")).collect(),
                    offset,
                },
                reps,
            });
        }
        if b >= b_max {
            return Err(CocycleError::InfiniteComponents { window: b });
        }
        prev = Some(periods);
        b *= 2;
    }
}

/// The Mackey range of a cocycle into ℤ/n or ℤ.
pub fn mackey_range(graph: &CocycleGraph) -> Result<MackeyRange, CocycleError> {
    match graph.target {
        CocycleTarget::Cyclic(n) => Ok(cyclic_range(graph, n)),
        CocycleTarget::Integers => integer_range(graph),
        CocycleTarget::PositiveRationals => Err(CocycleError::TargetMismatch),
    }
}

/// e with v = |q/p|^e for each value.
pub fn power_exponents(values: &[BigRational], params: &BSParams) -> Result<Vec<i64>, CocycleError> {
    let base = params.modulus_ratio();
    values
        .iter()
        .map(|v| {
            if v.is_one() {
                return Ok(0);
            }
            let bits = v.numer().bits().max(v.denom().bits()) as i64;
            (1..=bits)
                .flat_map(|e| [e, -e])
                .find(|&e| ratio_pow(&base, &BigInt::from(e)) == *v)
                .ok_or_else(|| CocycleError::NotPowerValued(v.to_string()))
        })
        .collect()
}

/// The discrete shadow of the associated flow of a power-valued cocycle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FlowType {
    /// The kernel components form one cycle of length n: type |p/q|ⁿ.
    Cycle { n: u64, label: BigRational },
    /// Per connected piece: number of kernel components and the gcd of the
    /// exponents around cycles.
    Orbits { pieces: Vec<(usize, u64)> },
}

/// Kernel components (edges with value 1) and the ℤ-action on them induced
/// by the exponents of the remaining edges.
pub fn flow_type(graph: &CocycleGraph, params: &BSParams) -> Result<FlowType, CocycleError> {
    if graph.target != CocycleTarget::PositiveRationals {
        return Err(CocycleError::TargetMismatch);
    }
    let values: Vec<BigRational> = graph
        .edges
        .iter()
        .map(|(_, _, v)| match v {
            CocycleValue::Ratio(r) => r.clone(),
            v => panic!("value {v} is not rational"),
        })
        .collect();
    let exps = power_exponents(&values, params)?;
    let n = graph.n_units;
    let mut kernel = UnionFind::new(n);
    for ((s, r, _), &e) in graph.edges.iter().zip(&exps) {
        if e == 0 {
            kernel.union(*s, *r);
        }
    }
    let (kc, nk) = kernel.classes();
    let mut adj: Vec<Vec<(usize, i64)>> = vec![Vec::new(); nk];
    let mut quotient_edges = Vec::new();
    for ((s, r, _), &e) in graph.edges.iter().zip(&exps) {
        if e != 0 {
            adj[kc[*s]].push((kc[*r], e));
            adj[kc[*r]].push((kc[*s], -e));
            quotient_edges.push((kc[*s], kc[*r], e));
        }
    }
    let mut psi: Vec<Option<i64>> = vec![None; nk];
    let mut piece = vec![usize::MAX; nk];
    let mut members: Vec<Vec<usize>> = Vec::new();
    for b in 0..nk {
        if psi[b].is_some() {
            continue;
        }
        psi[b] = Some(0);
        piece[b] = members.len();
        let mut list = vec![b];
        let mut queue = VecDeque::from([b]);
        while let Some(c) = queue.pop_front() {
            for &(d, e) in &adj[c] {
                if psi[d].is_none() {
                    psi[d] = Some(psi[c].expect("visited") + e);
                    piece[d] = members.len();
                    list.push(d);
                    queue.push_back(d);
                }
            }
        }
        members.push(list);
    }
    let psi: Vec<i64> = psi.into_iter().map(|v| v.expect("visited")).collect();
    let mut gcds = vec![0u64; members.len()];
    for &(a, b, e) in &quotient_edges {
        let c = (psi[a] + e - psi[b]).unsigned_abs();
        gcds[piece[a]] = gcds[piece[a]].gcd(&c);
    }
    let is_cycle = |i: usize| {
        let nc = members[i].len() as u64;
        if nc == 1 {
            return true;
        }
        if !gcds[i].is_multiple_of(nc) {
            return false;
        }
        let mut hit = vec![false; nc as usize];
        members[i]
            .iter()
            .all(|&c| !std::mem::replace(&mut hit[psi[c].rem_euclid(nc as i64) as usize], true))
    };
    if members.len() == 1 && is_cycle(0) {
        let len = members[0].len() as u64;
        let label = ratio_pow(&params.modulus_ratio().recip(), &BigInt::from(len));
        return Ok(FlowType::Cycle { n: len, label });
    }
    Ok(FlowType::Orbits {
        pieces: members.iter().zip(&gcds).map(|(m, &g)| (m.len(), g)).collect(),
    })
}

use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};

use crate::bs::{is_elliptic, normalize, words_equal, BSParams, GroupWord};
use crate::tree::{neighbors, TreeVertex};

use super::sub::coset_representatives;
use super::{index, FiniteMeasuredGroupoid, GroupoidError, Subgroupoid};

/// ρ: arrows → BS(p,q), one word per arrow of the parent groupoid.
#[derive(Clone, Debug)]
pub struct BsLabeling {
    pub params: BSParams,
    pub words: Vec<GroupWord>,
}

impl BsLabeling {
    /// ρ(g) = f(r(g))·f(s(g))⁻¹; always multiplicative.
    pub fn coboundary(g: &FiniteMeasuredGroupoid, params: BSParams, f: &[GroupWord]) -> Self {
        let words = g
            .arrows()
            .iter()
            .map(|a| f[a.range].mul(&f[a.source].inverse()))
            .collect();
        BsLabeling { params, words }
    }

    /// First composable pair in `sub` where ρ fails to be multiplicative.
    pub fn check_multiplicative(&self, g: &FiniteMeasuredGroupoid, sub: &Subgroupoid) -> Result<(), GroupoidError> {
        for h in sub.iter() {
            for &k in g.out_of(g.range(h)) {
                if !sub.arrows[k] {
                    continue;
                }
                let kh = g.product(k, h).expect("composable");
                if !words_equal(&self.words[kh], &self.words[k].mul(&self.words[h]), &self.params) {
                    return Err(GroupoidError::NotACocycle { g: k, h });
                }
            }
        }
        Ok(())
    }
}

/// A graph whose edges carry BS words; the free groupoid it generates is
/// labelled by products along paths.
#[derive(Clone, Debug)]
pub struct LabeledGraph {
    pub n_units: usize,
    /// (source, range, ρ(edge)).
    pub edges: Vec<(usize, usize, GroupWord)>,
}

pub type InvariantMap = BTreeMap<usize, TreeVertex>;

/// Search the ball of the given radius around v₀ (breadth first, so the
/// answer is a nearest common fixed vertex) for a vertex fixed by every loop.
fn common_fixed_vertex(loops: &[GroupWord], params: &BSParams, radius: usize) -> Option<TreeVertex> {
    if loops.iter().any(|c| !is_elliptic(c, params)) {
        return None;
    }
    let v0 = TreeVertex::base();
    let mut seen = HashSet::from([v0.clone()]);
    let mut queue = VecDeque::from([(v0, 0usize)]);
    while let Some((v, d)) = queue.pop_front() {
        if loops.iter().all(|c| v.is_fixed_by(c, params)) {
            return Some(v);
        }
        if d == radius {
            continue;
        }
        for (_, w) in neighbors(&v, params) {
            if seen.insert(w.clone()) {
                queue.push_back((w, d + 1));
            }
        }
    }
    None
}

/// An invariant map for the groupoid generated by the graph: φ with
/// ρ(e)·φ(s(e)) = φ(r(e)) on every edge, or `None` if some component has a
/// hyperbolic loop or no common fixed vertex within `radius` of v₀.
pub fn find_invariant_vertex_map_on_graph(
    graph: &LabeledGraph,
    params: &BSParams,
    radius: usize,
) -> Option<InvariantMap> {
    let n = graph.n_units;
    let mut adj: Vec<Vec<(usize, usize, bool)>> = vec![Vec::new(); n];
    for (i, (s, r, _)) in graph.edges.iter().enumerate() {
        adj[*s].push((i, *r, true));
        adj[*r].push((i, *s, false));
    }
    let mut h: Vec<Option<GroupWord>> = vec![None; n];
    let mut out = InvariantMap::new();
    for b in 0..n {
        if h[b].is_some() {
            continue;
        }
        // spanning tree: ρ(path from b to y) = h_y
        h[b] = Some(GroupWord::identity());
        let mut comp = vec![b];
        let mut tree_edges = HashSet::new();
        let mut queue = VecDeque::from([b]);
        while let Some(y) = queue.pop_front() {
            for &(e, z, forward) in &adj[y] {
                if h[z].is_some() {
                    continue;
                }
                let w = &graph.edges[e].2;
                let step = if forward { w.clone() } else { w.inverse() };
                h[z] = Some(normalize(&step.mul(h[y].as_ref().expect("visited")), params).to_word());
                tree_edges.insert(e);
                comp.push(z);
                queue.push_back(z);
            }
        }
        let mut loops = Vec::new();
        let mut seen = HashSet::new();
        for &y in &comp {
            for &(e, _, forward) in &adj[y] {
                if !forward || tree_edges.contains(&e) {
                    continue;
                }
                let (s, r, w) = &graph.edges[e];
                let hs = h[*s].as_ref().expect("visited");
                let hr = h[*r].as_ref().expect("visited");
                let c = normalize(&hr.inverse().mul(w).mul(hs), params);
                if !c.is_identity() && seen.insert(c.clone()) {
                    loops.push(c.to_word());
                }
            }
        }
        let v = common_fixed_vertex(&loops, params, radius)?;
        for &y in &comp {
            out.insert(y, v.translate(h[y].as_ref().expect("visited"), params));
        }
    }
    Some(out)
}

/// (𝒮,ρ)-invariant vertex map on the units of `sub`, after checking that ρ is
/// multiplicative on `sub`.
pub fn find_invariant_vertex_map(
    g: &FiniteMeasuredGroupoid,
    sub: &Subgroupoid,
    rho: &BsLabeling,
    radius: usize,
) -> Result<Option<InvariantMap>, GroupoidError> {
    rho.check_multiplicative(g, sub)?;
    let graph = LabeledGraph {
        n_units: g.n_units(),
        edges: sub
            .iter()
            .filter(|&a| !g.is_unit(a))
            .map(|a| (g.source(a), g.range(a), rho.words[a].clone()))
            .collect(),
    };
    Ok(find_invariant_vertex_map_on_graph(&graph, &rho.params, radius).map(|m| {
        m.into_iter().filter(|(x, _)| sub.units[*x]).collect()
    }))
}

/// ρ(h)·φ(s(h)) = φ(r(h)) for every arrow of `sub` with both ends in the map.
pub fn is_invariant_vertex_map(
    g: &FiniteMeasuredGroupoid,
    sub: &Subgroupoid,
    rho: &BsLabeling,
    map: &InvariantMap,
) -> bool {
    sub.iter().all(|h| match (map.get(&g.source(h)), map.get(&g.range(h))) {
        (Some(vs), Some(vr)) => vs.translate(&rho.words[h], &rho.params) == *vr,
        _ => true,
    })
}

/// Extend a map on A to the saturation 𝒢A along lowest-id arrows out of A.
pub fn extend_invariant_map(
    g: &FiniteMeasuredGroupoid,
    big: &Subgroupoid,
    rho: &BsLabeling,
    map: &InvariantMap,
) -> InvariantMap {
    let mut out = map.clone();
    for h in big.iter() {
        let (s, r) = (g.source(h), g.range(h));
        if out.contains_key(&r) {
            continue;
        }
        if let Some(v) = map.get(&s) {
            out.insert(r, v.translate(&rho.words[h], &rho.params));
        }
    }
    out
}

/// Ψ(x) = { ρ(φᵢ(x))⁻¹·ψ(r∘φᵢ(x)) } over the lowest-id coset representatives
/// φ₁(x),…,φ_N(x) of s⁻¹(x)/ℋ.
pub fn induce_finite_invariant_set(
    g: &FiniteMeasuredGroupoid,
    big: &Subgroupoid,
    small: &Subgroupoid,
    rho: &BsLabeling,
    psi: &InvariantMap,
) -> Result<BTreeMap<usize, BTreeSet<TreeVertex>>, GroupoidError> {
    let pts: Vec<usize> = (0..g.n_units()).filter(|&x| big.units[x]).collect();
    let n0 = index(g, big, small, pts[0]);
    for &x in &pts {
        let nx = index(g, big, small, x);
        if nx != n0 {
            return Err(GroupoidError::IndexNotConstant {
                x: pts[0],
                a: n0,
                y: x,
                b: nx,
            });
        }
    }
    let mut out = BTreeMap::new();
    for &x in &pts {
        let set = coset_representatives(g, big, small, x)
            .into_iter()
            .map(|f| {
                let v = psi.get(&g.range(f)).expect("ψ defined on all units");
                v.translate(&rho.words[f].inverse(), &rho.params)
            })
            .collect();
        out.insert(x, set);
    }
    Ok(out)
}

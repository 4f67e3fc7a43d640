//! Graph data model: signed graphs with a vertex measure, mixed graphs,
//! vertex sets and partitions, switching functions, and the elementary set
//! functionals (boundary measure, volume, maximal μ-degree).

use alloc::collections::VecDeque;
use alloc::format;
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use crate::group::{GroupElement, SignatureGroup};
use crate::{Error, Result};

/// An undirected edge stored with one orientation `(u, v)`; the reverse
/// orientation carries `signature.inverse()`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub weight: f64,
    /// `s_uv`.
    pub signature: GroupElement,
}

impl Edge {
    pub fn new(u: usize, v: usize, weight: f64, signature: GroupElement) -> Self {
        Edge { u, v, weight, signature }
    }

    /// The same edge stored as `(min, max)`.
    pub fn canonical(self) -> Self {
        if self.u <= self.v {
            self
        } else {
            Edge { u: self.v, v: self.u, weight: self.weight, signature: self.signature.inverse() }
        }
    }
}

/// Adjacency entry seen from a vertex `u`.
#[derive(Debug, Clone, Copy)]
pub struct Neighbor {
    pub vertex: usize,
    pub weight: f64,
    /// `s_{u,vertex}` in the orientation leaving `u`.
    pub signature: GroupElement,
    pub edge: usize,
}

/// How to build the vertex measure `μ`.
#[derive(Debug, Clone, PartialEq)]
pub enum Measure {
    /// `μ(u) = d_u`; isolated vertices get `μ(u) = 1`.
    Degree,
    /// `μ ≡ 1`.
    Unit,
    Explicit(Vec<f64>),
}

/// A simple weighted graph with a signature and a positive vertex measure.
#[derive(Debug, Clone)]
pub struct SignedGraph {
    n: usize,
    group: SignatureGroup,
    edges: Vec<Edge>,
    adjacency: Vec<Vec<Neighbor>>,
    degree: Vec<f64>,
    measure: Vec<f64>,
}

impl SignedGraph {
    pub fn new(n: usize, group: SignatureGroup, edges: Vec<Edge>, measure: Measure) -> Result<Self> {
        let mut adjacency: Vec<Vec<Neighbor>> = vec![Vec::new(); n];
        let mut degree = vec![0.0; n];
        for (idx, e) in edges.iter().enumerate() {
            if e.u >= n {
                return Err(Error::VertexOutOfRange(e.u));
            }
            if e.v >= n {
                return Err(Error::VertexOutOfRange(e.v));
            }
            if e.u == e.v {
                return Err(Error::InvalidGraph(format!("loop at vertex {}", e.u)));
            }
            if !(e.weight > 0.0 && e.weight.is_finite()) {
                return Err(Error::InvalidGraph(format!("nonpositive weight {} on edge {{{}, {}}}", e.weight, e.u, e.v)));
            }
            group.check(e.signature)?;
            if adjacency[e.u].iter().any(|nb| nb.vertex == e.v) {
                return Err(Error::InvalidGraph(format!("duplicate edge {{{}, {}}}", e.u, e.v)));
            }
            adjacency[e.u].push(Neighbor { vertex: e.v, weight: e.weight, signature: e.signature, edge: idx });
            adjacency[e.v].push(Neighbor { vertex: e.u, weight: e.weight, signature: e.signature.inverse(), edge: idx });
            degree[e.u] += e.weight;
            degree[e.v] += e.weight;
        }
        let mut g = SignedGraph { n, group, edges, adjacency, degree, measure: Vec::new() };
        g.measure = g.build_measure(measure)?;
        Ok(g)
    }

    fn build_measure(&self, measure: Measure) -> Result<Vec<f64>> {
        let m = match measure {
            Measure::Degree => self.degree.iter().map(|&d| if d > 0.0 { d } else { 1.0 }).collect(),
            Measure::Unit => vec![1.0; self.n],
            Measure::Explicit(m) => m,
        };
        if m.len() != self.n {
            return Err(Error::InvalidGraph(format!("measure has {} entries for {} vertices", m.len(), self.n)));
        }
        if let Some(u) = m.iter().position(|&x| !(x > 0.0 && x.is_finite())) {
            return Err(Error::InvalidGraph(format!("nonpositive measure at vertex {u}")));
        }
        Ok(m)
    }

    /// Same graph and signature with a different measure.
    pub fn with_measure(&self, measure: Measure) -> Result<Self> {
        let mut g = self.clone();
        g.measure = g.build_measure(measure)?;
        Ok(g)
    }

    pub fn num_vertices(&self) -> usize {
        self.n
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn group(&self) -> SignatureGroup {
        self.group
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn neighbors(&self, u: usize) -> &[Neighbor] {
        &self.adjacency[u]
    }

    /// Weighted degree `d_u`.
    pub fn degree(&self, u: usize) -> f64 {
        self.degree[u]
    }

    pub fn degrees(&self) -> &[f64] {
        &self.degree
    }

    pub fn measure(&self, u: usize) -> f64 {
        self.measure[u]
    }

    pub fn measures(&self) -> &[f64] {
        &self.measure
    }

    /// `s_uv` if `{u, v}` is an edge.
    pub fn signature(&self, u: usize, v: usize) -> Option<GroupElement> {
        self.adjacency[u].iter().find(|nb| nb.vertex == v).map(|nb| nb.signature)
    }

    /// Whether every edge weight is 1.
    pub fn is_unweighted(&self) -> bool {
        self.edges.iter().all(|e| e.weight == 1.0)
    }

    /// Maximal μ-degree `d_μ = max_u d_u / μ(u)`.
    pub fn max_mu_degree(&self) -> f64 {
        (0..self.n).map(|u| self.degree[u] / self.measure[u]).fold(0.0, f64::max)
    }

    /// Edges sorted by `(min, max)` endpoint, each stored in canonical
    /// orientation. Two graphs are identical iff these lists (and measures)
    /// agree.
    pub fn canonical_edges(&self) -> Vec<Edge> {
        let mut es: Vec<Edge> = self.edges.iter().map(|e| e.canonical()).collect();
        es.sort_by_key(|a| (a.u, a.v));
        es
    }

    /// Equality up to edge listing order and orientation.
    pub fn same_as(&self, other: &SignedGraph) -> bool {
        self.n == other.n && self.group == other.group && self.measure == other.measure && self.canonical_edges() == other.canonical_edges()
    }

    /// Boundary measure `|E(V₁, V₁ᶜ)|`.
    pub fn boundary(&self, set: &VertexSet) -> Result<f64> {
        let mask = self.mask_of(set)?;
        Ok(self.boundary_mask(&mask))
    }

    pub(crate) fn boundary_mask(&self, mask: &[bool]) -> f64 {
        self.edges.iter().filter(|e| mask[e.u] != mask[e.v]).map(|e| e.weight).sum()
    }

    /// μ-volume of a set.
    pub fn volume(&self, set: &VertexSet) -> Result<f64> {
        self.mask_of(set)?;
        Ok(set.iter().map(|u| self.measure[u]).sum())
    }

    /// Boundary measure and μ-volume of a nonempty set.
    pub fn set_functionals(&self, set: &VertexSet) -> Result<SetFunctionals> {
        Ok(SetFunctionals { boundary: self.boundary(set)?, volume: self.volume(set)? })
    }

    pub(crate) fn mask_of(&self, set: &VertexSet) -> Result<Vec<bool>> {
        if set.is_empty() {
            return Err(Error::EmptySet);
        }
        set.mask(self.n)
    }

    /// The switched graph with signature `s^τ(u,v) = τ(u) s_uv τ(v)^{-1}`.
    pub fn switch(&self, tau: &SwitchingFunction) -> Result<Self> {
        if tau.domain().len() != self.n {
            return Err(Error::InvalidArgument("switching function must be defined on every vertex".to_string()));
        }
        let mut values = Vec::with_capacity(self.n);
        for u in 0..self.n {
            let t = tau.get(u).ok_or(Error::InvalidArgument(format!("switching function undefined at {u}")))?;
            self.group.check(t)?;
            values.push(t);
        }
        let edges = self
            .edges
            .iter()
            .map(|e| Edge { signature: values[e.u].mul(e.signature).mul(values[e.v].inverse()), ..*e })
            .collect();
        SignedGraph::new(self.n, self.group, edges, Measure::Explicit(self.measure.clone()))
    }

    /// Subgraph induced by `set`, with vertices renumbered in ascending order
    /// of their original ids (returned alongside). Measures are inherited.
    pub fn induced(&self, set: &VertexSet) -> Result<(SignedGraph, Vec<usize>)> {
        let mask = set.mask(self.n)?;
        let ids: Vec<usize> = set.iter().collect();
        let mut local = vec![usize::MAX; self.n];
        for (i, &u) in ids.iter().enumerate() {
            local[u] = i;
        }
        let edges = self
            .edges
            .iter()
            .filter(|e| mask[e.u] && mask[e.v])
            .map(|e| Edge { u: local[e.u], v: local[e.v], ..*e })
            .collect();
        let measure = ids.iter().map(|&u| self.measure[u]).collect();
        Ok((SignedGraph::new(ids.len(), self.group, edges, Measure::Explicit(measure))?, ids))
    }

    /// The graph with signature `−s` (complex negation of every value).
    pub fn negated(&self) -> Result<Self> {
        if !self.group.contains_minus_one() {
            return Err(Error::Unsupported(format!("-1 in the signature group (got {})", self.group)));
        }
        let edges = self
            .edges
            .iter()
            .map(|e| Edge { signature: e.signature.negated().expect("group contains -1"), ..*e })
            .collect();
        SignedGraph::new(self.n, self.group, edges, Measure::Explicit(self.measure.clone()))
    }

    /// Connected components, each sorted ascending, ordered by smallest
    /// vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let all = vec![true; self.n];
        let mut comps = self.components_within(&all);
        for c in comps.iter_mut() {
            c.sort_unstable();
        }
        comps
    }

    /// Components of the subgraph induced by `mask`, each in BFS order from
    /// its smallest vertex.
    pub(crate) fn components_within(&self, mask: &[bool]) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let mut comps = Vec::new();
        for root in 0..self.n {
            if !mask[root] || seen[root] {
                continue;
            }
            seen[root] = true;
            let mut order = vec![root];
            let mut queue = VecDeque::from([root]);
            while let Some(u) = queue.pop_front() {
                for nb in &self.adjacency[u] {
                    if mask[nb.vertex] && !seen[nb.vertex] {
                        seen[nb.vertex] = true;
                        order.push(nb.vertex);
                        queue.push_back(nb.vertex);
                    }
                }
            }
            comps.push(order);
        }
        comps
    }
}

/// Boundary measure and volume of a vertex set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SetFunctionals {
    pub boundary: f64,
    pub volume: f64,
}

/// A sorted, duplicate-free set of vertex ids.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct VertexSet(Vec<usize>);

impl VertexSet {
    pub fn new<I: IntoIterator<Item = usize>>(it: I) -> Self {
        let mut v: Vec<usize> = it.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        VertexSet(v)
    }

    pub fn all(n: usize) -> Self {
        VertexSet((0..n).collect())
    }

    pub fn from_mask(mask: &[bool]) -> Self {
        VertexSet(mask.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, u: usize) -> bool {
        self.0.binary_search(&u).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn is_disjoint(&self, other: &VertexSet) -> bool {
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].cmp(&other.0[j]) {
                core::cmp::Ordering::Less => i += 1,
                core::cmp::Ordering::Greater => j += 1,
                core::cmp::Ordering::Equal => return false,
            }
        }
        true
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        VertexSet::new(self.iter().chain(other.iter()))
    }

    pub fn mask(&self, n: usize) -> Result<Vec<bool>> {
        let mut m = vec![false; n];
        for u in self.iter() {
            if u >= n {
                return Err(Error::VertexOutOfRange(u));
            }
            m[u] = true;
        }
        Ok(m)
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        VertexSet::new(iter)
    }
}

/// Pairwise-disjoint nonempty vertex sets.
#[derive(Debug, Clone, PartialEq)]
pub struct Subpartition(Vec<VertexSet>);

impl Subpartition {
    pub fn new(parts: Vec<VertexSet>) -> Result<Self> {
        for (i, p) in parts.iter().enumerate() {
            if p.is_empty() {
                return Err(Error::EmptySet);
            }
            if parts[..i].iter().any(|q| !q.is_disjoint(p)) {
                return Err(Error::InvalidArgument("subpartition parts overlap".to_string()));
            }
        }
        Ok(Subpartition(parts))
    }

    pub fn parts(&self) -> &[VertexSet] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// `k` ordered, pairwise-disjoint, possibly empty parts; their union is the
/// base set `Ṽ`.
#[derive(Debug, Clone, PartialEq)]
pub struct OrderedKPartition {
    parts: Vec<VertexSet>,
    base: VertexSet,
}

impl OrderedKPartition {
    pub fn new(parts: Vec<VertexSet>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::InvalidArgument("ordered partition needs k >= 1 parts".to_string()));
        }
        for (i, p) in parts.iter().enumerate() {
            if parts[..i].iter().any(|q| !q.is_disjoint(p)) {
                return Err(Error::InvalidArgument("ordered partition parts overlap".to_string()));
            }
        }
        let base = VertexSet::new(parts.iter().flat_map(|p| p.iter()));
        Ok(OrderedKPartition { parts, base })
    }

    /// Builds the partition from per-vertex part labels (`None` = outside
    /// `Ṽ`).
    pub fn from_labels(labels: &[Option<u32>], k: u32) -> Result<Self> {
        let mut parts = vec![Vec::new(); k as usize];
        for (u, l) in labels.iter().enumerate() {
            if let Some(l) = *l {
                if l >= k {
                    return Err(Error::InvalidArgument(format!("part label {l} >= k = {k}")));
                }
                parts[l as usize].push(u);
            }
        }
        OrderedKPartition::new(parts.into_iter().map(VertexSet).collect())
    }

    pub fn k(&self) -> u32 {
        self.parts.len() as u32
    }

    pub fn parts(&self) -> &[VertexSet] {
        &self.parts
    }

    pub fn base(&self) -> &VertexSet {
        &self.base
    }

    /// Part index of every vertex, `None` outside the base set.
    pub fn labels(&self, n: usize) -> Vec<Option<u32>> {
        let mut l = vec![None; n];
        for (i, p) in self.parts.iter().enumerate() {
            for u in p.iter() {
                if u < n {
                    l[u] = Some(i as u32);
                }
            }
        }
        l
    }
}

/// A map from a vertex subset into the signature group.
#[derive(Debug, Clone, PartialEq)]
pub struct SwitchingFunction {
    domain: VertexSet,
    values: Vec<GroupElement>,
}

impl SwitchingFunction {
    /// `values[i]` is the value at the `i`-th smallest vertex of `domain`.
    pub fn new(domain: VertexSet, values: Vec<GroupElement>) -> Result<Self> {
        if domain.len() != values.len() {
            return Err(Error::InvalidArgument("switching function domain/value length mismatch".to_string()));
        }
        if let Some(first) = values.first() {
            let g = first.group();
            for &v in &values {
                g.check(v)?;
            }
        }
        Ok(SwitchingFunction { domain, values })
    }

    /// A switching function on all of `0..values.len()`.
    pub fn on_all(values: Vec<GroupElement>) -> Result<Self> {
        SwitchingFunction::new(VertexSet::all(values.len()), values)
    }

    pub fn identity(n: usize, group: SignatureGroup) -> Self {
        SwitchingFunction { domain: VertexSet::all(n), values: vec![group.identity(); n] }
    }

    pub fn domain(&self) -> &VertexSet {
        &self.domain
    }

    pub fn get(&self, u: usize) -> Option<GroupElement> {
        self.domain.0.binary_search(&u).ok().map(|i| self.values[i])
    }

    pub fn values(&self) -> &[GroupElement] {
        &self.values
    }

    /// Pointwise inverse.
    pub fn inverse(&self) -> Self {
        SwitchingFunction { domain: self.domain.clone(), values: self.values.iter().map(|g| g.inverse()).collect() }
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, GroupElement)> + '_ {
        self.domain.iter().zip(self.values.iter().copied())
    }
}

/// A graph with unoriented edges `E_U` and oriented arcs `E_O`.
#[derive(Debug, Clone, PartialEq)]
pub struct MixedGraph {
    n: usize,
    undirected: Vec<(usize, usize, f64)>,
    arcs: Vec<(usize, usize, f64)>,
}

impl MixedGraph {
    pub fn new(n: usize, undirected: Vec<(usize, usize, f64)>, arcs: Vec<(usize, usize, f64)>) -> Result<Self> {
        let mut seen: Vec<(usize, usize)> = Vec::with_capacity(undirected.len() + arcs.len());
        for &(u, v, w) in undirected.iter().chain(arcs.iter()) {
            if u >= n {
                return Err(Error::VertexOutOfRange(u));
            }
            if v >= n {
                return Err(Error::VertexOutOfRange(v));
            }
            if u == v {
                return Err(Error::InvalidGraph(format!("loop at vertex {u}")));
            }
            if !(w > 0.0 && w.is_finite()) {
                return Err(Error::InvalidGraph(format!("nonpositive weight {w} on {{{u}, {v}}}")));
            }
            seen.push((u.min(v), u.max(v)));
        }
        seen.sort_unstable();
        if let Some(w) = seen.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidGraph(format!("vertices {} and {} joined more than once", w[0].0, w[0].1)));
        }
        Ok(MixedGraph { n, undirected, arcs })
    }

    pub fn num_vertices(&self) -> usize {
        self.n
    }

    pub fn undirected(&self) -> &[(usize, usize, f64)] {
        &self.undirected
    }

    pub fn arcs(&self) -> &[(usize, usize, f64)] {
        &self.arcs
    }

    /// Signed graph with `s = 1` on unoriented edges, `s_uv = ξ` on each arc
    /// `(u, v)` and `s_vu = ξ^{-1}`. Edges are listed in canonical order so
    /// the result does not depend on input ordering.
    pub fn to_signed(&self, k: u32, measure: Measure) -> Result<SignedGraph> {
        if k < 2 {
            return Err(Error::InvalidArgument(format!("k must be at least 2, got {k}")));
        }
        let mut edges: Vec<Edge> = self
            .undirected
            .iter()
            .map(|&(u, v, w)| Edge::new(u, v, w, GroupElement::cyclic(k, 0)))
            .chain(self.arcs.iter().map(|&(u, v, w)| Edge::new(u, v, w, GroupElement::cyclic(k, 1))))
            .map(Edge::canonical)
            .collect();
        edges.sort_by_key(|a| (a.u, a.v));
        SignedGraph::new(self.n, SignatureGroup::Cyclic(k), edges, measure)
    }
}

/// Free-function form of [`MixedGraph::to_signed`].
pub fn mixed_to_signed(m: &MixedGraph, k: u32, measure: Measure) -> Result<SignedGraph> {
    m.to_signed(k, measure)
}

//! Balance and frustration.
//!
//! A signature is balanced when every cycle has trivial signature; on a
//! connected graph this is the same as being switching equivalent to the
//! trivial signature. The frustration index of a vertex set `V₁` is
//!
//! ```text
//! ι^s(V₁) = min_{τ: V₁ → Γ} Σ_{{u,v} ∈ E₁} w_uv |τ(u) − s_uv τ(v)|
//! ```
//!
//! and vanishes exactly when the induced subgraph is balanced.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::graph::{SignedGraph, SwitchingFunction, VertexSet};
use crate::group::{chord_table, GroupElement, SignatureGroup};
use crate::math::{self, TAU};
use crate::{spectral, Error, Result, ENUMERATION_CAP};

/// Default number of random restarts for [`frustration_heuristic_u1`].
pub const DEFAULT_RESTARTS: usize = 8;

const DESCENT_REL_TOL: f64 = 1e-10;
const DESCENT_MAX_SWEEPS: usize = 10_000;
/// Largest root-of-unity order tried by the lattice start of the heuristic.
const LATTICE_MAX_ORDER: u32 = 12;
/// Enumeration budget for the lattice start.
const LATTICE_CAP: u64 = 1 << 20;

/// Whether a frustration value is a certified minimum or only an upper bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exactness {
    Exact,
    UpperBound,
}

impl Exactness {
    pub fn is_exact(self) -> bool {
        self == Exactness::Exact
    }

    /// `Exact` only if both are exact.
    pub fn and(self, other: Exactness) -> Exactness {
        if self.is_exact() && other.is_exact() {
            Exactness::Exact
        } else {
            Exactness::UpperBound
        }
    }
}

/// Balance status of one connected component.
#[derive(Debug, Clone)]
pub struct ComponentBalance {
    /// Vertices of the component, ascending.
    pub vertices: Vec<usize>,
    pub balanced: bool,
    /// Switching function on the component that trivializes every edge
    /// signature (present iff balanced).
    pub witness: Option<SwitchingFunction>,
    /// Oriented edges `(u, v)` of a cycle with nontrivial signature.
    pub violating_cycle: Option<Vec<(usize, usize)>>,
    /// Product of the signatures around `violating_cycle`.
    pub cycle_signature: Option<GroupElement>,
}

#[derive(Debug, Clone)]
pub struct BalanceReport {
    pub components: Vec<ComponentBalance>,
}

impl BalanceReport {
    pub fn all_balanced(&self) -> bool {
        self.components.iter().all(|c| c.balanced)
    }

    pub fn any_balanced(&self) -> bool {
        self.components.iter().any(|c| c.balanced)
    }
}

/// Frustration value with the switching function that attains it.
#[derive(Debug, Clone)]
pub struct FrustrationResult {
    pub value: f64,
    /// Defined on `V₁`.
    pub tau: SwitchingFunction,
    pub exactness: Exactness,
}

/// Balance check of every connected component via a BFS spanning tree.
pub fn balance_check(g: &SignedGraph) -> BalanceReport {
    let mask = vec![true; g.num_vertices()];
    balance_within(g, &mask)
}

/// Balance check of the subgraph induced by `set`.
pub fn balance_check_induced(g: &SignedGraph, set: &VertexSet) -> Result<BalanceReport> {
    let mask = set.mask(g.num_vertices())?;
    Ok(balance_within(g, &mask))
}

fn balance_within(g: &SignedGraph, mask: &[bool]) -> BalanceReport {
    let n = g.num_vertices();
    let group = g.group();
    let mut tau: Vec<Option<GroupElement>> = vec![None; n];
    let mut parent: Vec<Option<(usize, usize)>> = vec![None; n];
    let mut depth = vec![0usize; n];
    let mut components = Vec::new();
    for root in 0..n {
        if !mask[root] || tau[root].is_some() {
            continue;
        }
        tau[root] = Some(group.identity());
        let mut order = vec![root];
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            for nb in g.neighbors(u) {
                let v = nb.vertex;
                if mask[v] && tau[v].is_none() {
                    // τ(v) = τ(u) s_uv makes the tree edge trivial.
                    tau[v] = Some(tau[u].unwrap().mul(nb.signature));
                    parent[v] = Some((u, nb.edge));
                    depth[v] = depth[u] + 1;
                    order.push(v);
                    queue.push_back(v);
                }
            }
        }

        let mut violation = None;
        'scan: for &u in &order {
            for nb in g.neighbors(u) {
                let v = nb.vertex;
                if !mask[v] || parent[v].map(|p| p.1) == Some(nb.edge) || parent[u].map(|p| p.1) == Some(nb.edge) {
                    continue;
                }
                let switched = tau[u].unwrap().mul(nb.signature).mul(tau[v].unwrap().inverse());
                if !switched.is_identity() {
                    violation = Some((u, v));
                    break 'scan;
                }
            }
        }

        let mut vertices = order.clone();
        vertices.sort_unstable();
        let comp = match violation {
            None => {
                let values = vertices.iter().map(|&u| tau[u].unwrap()).collect();
                ComponentBalance {
                    witness: Some(SwitchingFunction::new(VertexSet::new(vertices.iter().copied()), values).expect("consistent witness")),
                    vertices,
                    balanced: true,
                    violating_cycle: None,
                    cycle_signature: None,
                }
            }
            Some((u, v)) => {
                let cycle = fundamental_cycle(u, v, &parent, &depth);
                let sig = cycle
                    .iter()
                    .fold(group.identity(), |acc, &(a, b)| acc.mul(g.signature(a, b).expect("cycle edge exists")));
                ComponentBalance { vertices, balanced: false, witness: None, violating_cycle: Some(cycle), cycle_signature: Some(sig) }
            }
        };
        components.push(comp);
    }
    BalanceReport { components }
}

/// Cycle `u → v → … → lca → … → u` closing the non-tree edge `(u, v)`.
fn fundamental_cycle(u: usize, v: usize, parent: &[Option<(usize, usize)>], depth: &[usize]) -> Vec<(usize, usize)> {
    let mut up_from_v = vec![v];
    let mut up_from_u = vec![u];
    let (mut a, mut b) = (v, u);
    while depth[a] > depth[b] {
        a = parent[a].unwrap().0;
        up_from_v.push(a);
    }
    while depth[b] > depth[a] {
        b = parent[b].unwrap().0;
        up_from_u.push(b);
    }
    while a != b {
        a = parent[a].unwrap().0;
        b = parent[b].unwrap().0;
        up_from_v.push(a);
        up_from_u.push(b);
    }
    // up_from_v: v … lca; up_from_u: u … lca.
    let mut cycle = vec![(u, v)];
    for w in up_from_v.windows(2) {
        cycle.push((w[0], w[1]));
    }
    for w in up_from_u.windows(2).rev() {
        cycle.push((w[1], w[0]));
    }
    cycle
}

/// `Σ_{{u,v} ∈ E₁} w_uv |τ(u) − s_uv τ(v)|` over edges inside the domain of
/// `tau`. Cyclic signatures with a cyclic `tau` use exact exponent
/// arithmetic; anything else is evaluated through complex values.
pub fn frustration_of(g: &SignedGraph, tau: &SwitchingFunction) -> Result<f64> {
    let n = g.num_vertices();
    let mask = tau.domain().mask(n)?;
    let mut val: Vec<Option<GroupElement>> = vec![None; n];
    for (u, t) in tau.iter() {
        val[u] = Some(t);
    }
    let chords = match g.group() {
        SignatureGroup::Cyclic(k) if tau.values().iter().all(|t| t.group() == SignatureGroup::Cyclic(k)) => Some(chord_table(k)),
        _ => None,
    };
    let mut total = 0.0;
    for e in g.edges() {
        if !(mask[e.u] && mask[e.v]) {
            continue;
        }
        let (tu, tv) = (val[e.u].unwrap(), val[e.v].unwrap());
        let term = match (&chords, tu, e.signature, tv) {
            (Some(ch), GroupElement::Cyclic { k, j: ju }, GroupElement::Cyclic { j: js, .. }, GroupElement::Cyclic { j: jv, .. }) => {
                ch[((js + jv + k - ju) % k) as usize]
            }
            _ => (tu.to_complex() - e.signature.to_complex() * tv.to_complex()).norm(),
        };
        total += e.weight * term;
    }
    Ok(total)
}

/// Number of assignments [`frustration_exact_cyclic`] would enumerate:
/// `k^{|V₁| − #components}`.
pub fn exact_assignment_count(g: &SignedGraph, set: &VertexSet) -> Result<f64> {
    let k = match g.group() {
        SignatureGroup::Cyclic(k) => k,
        SignatureGroup::Circle => return Err(Error::Unsupported("a cyclic signature group".into())),
    };
    let mask = set.mask(g.num_vertices())?;
    let comps = g.components_within(&mask).len();
    Ok(math::powf(k as f64, (set.len() - comps) as f64))
}

/// Exact frustration index for a cyclic signature by exhaustive search.
///
/// One vertex per induced component is pinned at `ξ⁰` (the objective is
/// invariant under global multiplication); the remaining vertices are
/// enumerated depth-first in BFS order with branch-and-bound pruning.
pub fn frustration_exact_cyclic(g: &SignedGraph, set: &VertexSet) -> Result<FrustrationResult> {
    frustration_exact_cyclic_capped(g, set, ENUMERATION_CAP)
}

pub fn frustration_exact_cyclic_capped(g: &SignedGraph, set: &VertexSet, cap: u64) -> Result<FrustrationResult> {
    if set.is_empty() {
        return Err(Error::EmptySet);
    }
    let required = exact_assignment_count(g, set)?;
    if required > cap as f64 {
        return Err(Error::CapExceeded { required, cap });
    }
    let k = g.group().order().expect("checked cyclic");
    let n = g.num_vertices();
    let mask = set.mask(n)?;
    let chords = chord_table(k);
    let mut exps = vec![0u32; n];
    for comp in g.components_within(&mask) {
        solve_component(g, &comp, &mask, k, &chords, &mut exps);
    }
    let values = set.iter().map(|u| GroupElement::Cyclic { k, j: exps[u] }).collect();
    let tau = SwitchingFunction::new(set.clone(), values)?;
    let value = frustration_of(g, &tau)?;
    Ok(FrustrationResult { value, tau, exactness: Exactness::Exact })
}

/// For each position `i > 0` in `order`: edges `(earlier position, weight,
/// exponent of s_{x,y})` where `x = order[i]` and `y` is earlier.
fn back_edges(g: &SignedGraph, order: &[usize], mask: &[bool]) -> Vec<Vec<(usize, f64, u32)>> {
    let mut pos = vec![usize::MAX; g.num_vertices()];
    for (i, &u) in order.iter().enumerate() {
        pos[u] = i;
    }
    order
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            g.neighbors(x)
                .iter()
                .filter(|nb| mask[nb.vertex] && pos[nb.vertex] < i)
                .map(|nb| {
                    let j = match nb.signature {
                        GroupElement::Cyclic { j, .. } => j,
                        GroupElement::Circle(_) => unreachable!("cyclic graph"),
                    };
                    (pos[nb.vertex], nb.weight, j)
                })
                .collect()
        })
        .collect()
}

fn solve_component(g: &SignedGraph, order: &[usize], mask: &[bool], k: u32, chords: &[f64], out: &mut [u32]) {
    let back = back_edges(g, order, mask);
    let m = order.len();
    // Cost of giving position i exponent ji, given exponents of earlier
    // positions: Σ w |ξ^{ji} − ξ^{e} ξ^{jy}| = Σ w |1 − ξ^{e + jy − ji}|.
    let cost = |i: usize, ji: u32, cur: &[u32]| -> f64 {
        back[i].iter().map(|&(y, w, e)| w * chords[((e + cur[y] + k - ji) % k) as usize]).sum()
    };

    // Greedy completion seeds the incumbent.
    let mut best_assign = vec![0u32; m];
    let mut best = 0.0;
    for i in 1..m {
        let (jb, cb) = (0..k).map(|j| (j, cost(i, j, &best_assign))).fold((0, f64::INFINITY), |a, b| if b.1 < a.1 { b } else { a });
        best_assign[i] = jb;
        best += cb;
    }

    let mut cur = vec![0u32; m];
    let mut partial = vec![0.0f64; m + 1];
    let mut next = vec![0u32; m];
    let mut i = 1;
    if m > 1 {
        next[1] = 0;
        loop {
            if next[i] == k {
                next[i] = 0;
                i -= 1;
                if i == 0 {
                    break;
                }
                continue;
            }
            let j = next[i];
            next[i] += 1;
            cur[i] = j;
            let p = partial[i] + cost(i, j, &cur);
            if p >= best {
                continue;
            }
            if i + 1 == m {
                best = p;
                best_assign.copy_from_slice(&cur);
                continue;
            }
            partial[i + 1] = p;
            i += 1;
            next[i] = 0;
        }
    }
    for (idx, &u) in order.iter().enumerate() {
        out[u] = best_assign[idx];
    }
}

/// Upper bound on the `U(1)` frustration index by coordinate descent on the
/// vertex angles.
///
/// Starting points: the phases of the lowest eigenvector of the induced
/// magnetic Laplacian, the spanning-tree switching of each induced
/// component, and `restarts` uniformly random angle vectors drawn from
/// substreams of `seed`. When every edge angle is a multiple of `2π/k` for
/// some `k ≤ 12` and `S¹ₖ` enumeration is cheap, the exact `S¹ₖ` optimum is
/// a further start, so the result never exceeds the cyclic index. Each
/// coordinate step minimizes exactly: the 1-D
/// objective `Σ w |e^{iθ} − a_v|` is a sum of chord lengths, concave between
/// consecutive neighbour phases, so its minimum sits at one of them.
///
/// Cyclic signatures are read as elements of `U(1)`.
pub fn frustration_heuristic_u1(g: &SignedGraph, set: &VertexSet, restarts: usize, seed: u64) -> Result<FrustrationResult> {
    if set.is_empty() {
        return Err(Error::EmptySet);
    }
    if restarts == 0 {
        return Err(Error::InvalidArgument("restarts must be at least 1".into()));
    }
    let (sub, ids) = g.induced(set)?;
    let m = sub.num_vertices();
    // adjacency with edge angles σ_{u→v}
    let adj: Vec<Vec<(usize, f64, f64)>> =
        (0..m).map(|u| sub.neighbors(u).iter().map(|nb| (nb.vertex, nb.weight, nb.signature.angle())).collect()).collect();

    let objective = |theta: &[f64]| -> f64 {
        sub.edges().iter().map(|e| e.weight * math::chord(theta[e.u] - e.signature.angle() - theta[e.v])).sum()
    };

    let mut starts: Vec<Vec<f64>> = Vec::new();
    if let Some((_, f)) = spectral::lowest_eigenvector(&sub.with_measure(crate::graph::Measure::Unit)?)? {
        starts.push(f.iter().map(|z| if z.norm() > 0.0 { math::atan2(z.im, z.re) } else { 0.0 }).collect());
    }
    let tree = balance_within(&sub, &vec![true; m]);
    {
        // Inverse of the spanning-tree switching: zero cost on tree edges.
        let mut theta = vec![0.0; m];
        for comp in &tree.components {
            if let Some(w) = &comp.witness {
                for (u, t) in w.iter() {
                    theta[u] = t.inverse().angle();
                }
            } else {
                for (u, t) in tree_assignment(&sub, &comp.vertices) {
                    theta[u] = t;
                }
            }
        }
        starts.push(theta);
    }
    if let Some(theta) = lattice_start(&sub)? {
        starts.push(theta);
    }
    for r in 0..restarts {
        use rand::Rng;
        let mut rng = crate::rng::substream(seed, r as u64);
        starts.push((0..m).map(|_| rng.gen_range(0.0..TAU)).collect());
    }

    let mut best_theta = starts[0].clone();
    let mut best_val = f64::INFINITY;
    for mut theta in starts {
        let mut val = objective(&theta);
        for _ in 0..DESCENT_MAX_SWEEPS {
            for u in 0..m {
                if adj[u].is_empty() {
                    continue;
                }
                let local = |t: f64, th: &[f64]| -> f64 { adj[u].iter().map(|&(v, w, s)| w * math::chord(t - s - th[v])).sum() };
                let mut cur = local(theta[u], &theta);
                let mut arg_best = theta[u];
                for &(v, _, s) in &adj[u] {
                    let cand = math::wrap_angle(s + theta[v]);
                    let c = local(cand, &theta);
                    if c < cur {
                        cur = c;
                        arg_best = cand;
                    }
                }
                theta[u] = arg_best;
            }
            let new_val = objective(&theta);
            let improvement = val - new_val;
            val = new_val;
            if improvement <= DESCENT_REL_TOL * val.max(f64::MIN_POSITIVE) {
                break;
            }
        }
        if val < best_val {
            best_val = val;
            best_theta = theta;
        }
    }

    let values = best_theta.iter().map(|&t| GroupElement::circle(t)).collect();
    let tau_local = SwitchingFunction::new(VertexSet::all(m), values)?;
    let value = frustration_of(&as_circle(&sub)?, &tau_local)?;
    let tau = SwitchingFunction::new(VertexSet::new(ids.iter().copied()), tau_local.values().to_vec())?;
    Ok(FrustrationResult { value, tau, exactness: Exactness::UpperBound })
}

/// Exact optimum over the smallest root-of-unity lattice containing every
/// edge angle, if there is one within budget.
fn lattice_start(sub: &SignedGraph) -> Result<Option<Vec<f64>>> {
    let m = sub.num_vertices();
    let order = match sub.group() {
        SignatureGroup::Cyclic(k) => Some(k),
        SignatureGroup::Circle => (1..=LATTICE_MAX_ORDER).find(|&k| {
            sub.edges().iter().all(|e| {
                let x = e.signature.angle() * k as f64 / TAU;
                math::abs(x - math::round(x)) * TAU / k as f64 <= crate::group::ANGLE_TOL
            })
        }),
    };
    let Some(k) = order else { return Ok(None) };
    let edges = sub
        .edges()
        .iter()
        .map(|e| {
            let j = math::round(e.signature.angle() * k as f64 / TAU) as i64;
            crate::graph::Edge::new(e.u, e.v, e.weight, GroupElement::cyclic(k, j))
        })
        .collect();
    let lattice = SignedGraph::new(m, SignatureGroup::Cyclic(k), edges, crate::graph::Measure::Unit)?;
    match frustration_exact_cyclic_capped(&lattice, &VertexSet::all(m), LATTICE_CAP) {
        Ok(r) => Ok(Some(r.tau.values().iter().map(|t| t.angle()).collect())),
        Err(Error::CapExceeded { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Angles `θ` with `e^{iθ(u)} = s_uv e^{iθ(v)}` along a BFS tree.
fn tree_assignment(g: &SignedGraph, vertices: &[usize]) -> Vec<(usize, f64)> {
    let mut theta = vec![None; g.num_vertices()];
    let root = vertices[0];
    theta[root] = Some(0.0);
    let mut queue = VecDeque::from([root]);
    let mut out = vec![(root, 0.0)];
    while let Some(u) = queue.pop_front() {
        for nb in g.neighbors(u) {
            if theta[nb.vertex].is_none() {
                let t = math::wrap_angle(theta[u].unwrap() - nb.signature.angle());
                theta[nb.vertex] = Some(t);
                out.push((nb.vertex, t));
                queue.push_back(nb.vertex);
            }
        }
    }
    out
}

/// The same graph with every signature read as an element of `U(1)`.
pub fn as_circle(g: &SignedGraph) -> Result<SignedGraph> {
    if g.group() == SignatureGroup::Circle {
        return Ok(g.clone());
    }
    let edges = g
        .edges()
        .iter()
        .map(|e| crate::graph::Edge { signature: GroupElement::circle(e.signature.angle()), ..*e })
        .collect();
    SignedGraph::new(g.num_vertices(), SignatureGroup::Circle, edges, crate::graph::Measure::Explicit(g.measures().to_vec()))
}

/// Harary's line index of balance `e_min = ι/2` for an unweighted `±1`
/// signature on the subgraph induced by `set`.
pub fn line_index_of_balance(g: &SignedGraph, set: &VertexSet) -> Result<u64> {
    if g.group() != SignatureGroup::Cyclic(2) {
        return Err(Error::Unsupported("k = 2 signatures".into()));
    }
    let mask = set.mask(g.num_vertices())?;
    if g.edges().iter().any(|e| mask[e.u] && mask[e.v] && e.weight != 1.0) {
        return Err(Error::Unsupported("unit edge weights".into()));
    }
    let iota = frustration_exact_cyclic(g, set)?.value;
    let half = iota / 2.0;
    let rounded = libm::round(half);
    debug_assert!((half - rounded).abs() < 1e-9);
    Ok(rounded as u64)
}

/// Complex values `τ(u)` of a switching function as a vertex function, zero
/// outside its domain.
pub fn tau_as_function(n: usize, tau: &SwitchingFunction) -> Vec<Complex64> {
    let mut f = spectral::zero_vec(n);
    for (u, t) in tau.iter() {
        f[u] = t.to_complex();
    }
    f
}

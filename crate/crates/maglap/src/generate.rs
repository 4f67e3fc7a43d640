//! Seeded instance generators.

use maglap_core::graph::{Edge, Measure};
use maglap_core::rng::substream;
use maglap_core::{GroupElement, MixedGraph, SignatureGroup, SignedGraph};
use rand::seq::SliceRandom;
use rand::Rng;
use serde_json::{json, Value};

/// Erdős–Rényi graph with uniformly random signatures: `k ≥ 1` for `S¹ₖ`,
/// `None` for `U(1)`. Weights are 1 unless `weighted`, then uniform in
/// `[0.5, 2)`.
pub fn er_signed(n: usize, p: f64, k: Option<u32>, weighted: bool, seed: u64) -> maglap_core::Result<SignedGraph> {
    if !(0.0..=1.0).contains(&p) {
        return Err(maglap_core::Error::InvalidArgument(format!("edge probability {p} outside [0, 1]")));
    }
    let mut rng = substream(seed, 0);
    let group = k.map_or(SignatureGroup::Circle, SignatureGroup::Cyclic);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                let s = match k {
                    Some(k) => GroupElement::cyclic(k, rng.gen_range(0..k) as i64),
                    None => GroupElement::circle(rng.gen_range(0.0..std::f64::consts::TAU)),
                };
                let w = if weighted { rng.gen_range(0.5..2.0) } else { 1.0 };
                edges.push(Edge::new(u, v, w, s));
            }
        }
    }
    SignedGraph::new(n, group, edges, Measure::Degree)
}

/// Cycle `0 – 1 – … – (n−1) – 0` whose first `flips` edges carry `ξ_k`.
pub fn cycle(n: usize, flips: usize, k: u32) -> maglap_core::Result<SignedGraph> {
    if n < 3 || flips > n || k == 0 {
        return Err(maglap_core::Error::InvalidArgument(format!("cycle needs n >= 3, flips <= n, k >= 1 (got {n}, {flips}, {k})")));
    }
    let edges = (0..n).map(|i| Edge::new(i, (i + 1) % n, 1.0, GroupElement::cyclic(k, (i < flips) as i64))).collect();
    SignedGraph::new(n, SignatureGroup::Cyclic(k), edges, Measure::Degree)
}

/// Parameters of [`mixed_planted`].
#[derive(Debug, Clone, Copy)]
pub struct PlantedParams {
    pub k: u32,
    /// Vertices per part.
    pub size: usize,
    /// Probability of an unoriented edge inside a part.
    pub p_in: f64,
    /// Probability of an arc between cyclically adjacent parts.
    pub p_out: f64,
    /// Probability that an edge is reoriented.
    pub noise: f64,
}

impl Default for PlantedParams {
    fn default() -> Self {
        PlantedParams { k: 3, size: 5, p_in: 0.5, p_out: 0.5, noise: 0.0 }
    }
}

/// A mixed graph with `k` parts `V_0 … V_{k−1}` where every arc runs from
/// `V_i` to `V_{i−1}` (indices mod `k`) and unoriented edges stay inside
/// parts, so the converted signature is balanced by `τ = ξ^{part}`. A path
/// inside each part and one arc between consecutive parts keep the graph
/// connected. Then each edge, independently with probability `noise`, is
/// replaced by one of the other two orientations of its pair.
///
/// Returns the graph and the planted part of every vertex.
pub fn mixed_planted(params: PlantedParams, seed: u64) -> maglap_core::Result<(MixedGraph, Vec<u32>)> {
    let PlantedParams { k, size, p_in, p_out, noise } = params;
    if k < 2 || size == 0 {
        return Err(maglap_core::Error::InvalidArgument("mixed-planted needs k >= 2 and size >= 1".into()));
    }
    for (name, p) in [("p_in", p_in), ("p_out", p_out), ("noise", noise)] {
        if !(0.0..=1.0).contains(&p) {
            return Err(maglap_core::Error::InvalidArgument(format!("{name} = {p} outside [0, 1]")));
        }
    }
    let mut rng = substream(seed, 0);
    let ku = k as usize;
    let n = ku * size;
    let mut labels: Vec<u32> = (0..n).map(|u| (u / size) as u32).collect();
    // Shuffle so parts are not contiguous id ranges.
    labels.shuffle(&mut rng);
    let members: Vec<Vec<usize>> = (0..k).map(|i| (0..n).filter(|&u| labels[u] == i).collect()).collect();

    // 0 = unoriented, 1 = arc u→v, 2 = arc v→u, keyed by u < v.
    let mut pairs: std::collections::BTreeMap<(usize, usize), u8> = std::collections::BTreeMap::new();
    // `oriented` means an arc a → b.
    let mut put = |a: usize, b: usize, oriented: bool| {
        let (u, v) = (a.min(b), a.max(b));
        let code = if !oriented { 0 } else if a == u { 1 } else { 2 };
        pairs.entry((u, v)).or_insert(code);
    };
    for part in &members {
        for w in part.windows(2) {
            put(w[0], w[1], false);
        }
    }
    // For k = 2 the adjacent pairs (V_0, V_1) and (V_1, V_0) coincide.
    let linked = if k == 2 { 1 } else { ku };
    for i in 0..linked {
        put(members[i][0], members[(i + ku - 1) % ku][0], true);
    }
    for i in 0..ku {
        for a in 0..members[i].len() {
            for b in a + 1..members[i].len() {
                if rng.gen_bool(p_in) {
                    put(members[i][a], members[i][b], false);
                }
            }
        }
        if i >= linked {
            continue;
        }
        let prev = (i + ku - 1) % ku;
        for &x in &members[i] {
            for &y in &members[prev] {
                if rng.gen_bool(p_out) {
                    put(x, y, true);
                }
            }
        }
    }
    let mut undirected = Vec::new();
    let mut arcs = Vec::new();
    for (&(u, v), &code) in &pairs {
        let code = if noise > 0.0 && rng.gen_bool(noise) { (code + rng.gen_range(1..3)) % 3 } else { code };
        match code {
            0 => undirected.push((u, v, 1.0)),
            1 => arcs.push((u, v, 1.0)),
            _ => arcs.push((v, u, 1.0)),
        }
    }
    Ok((MixedGraph::new(n, undirected, arcs)?, labels))
}

/// Sidecar JSON for a planted instance.
pub fn truth_json(k: u32, labels: &[u32]) -> Value {
    let parts: Vec<Vec<usize>> = (0..k).map(|i| (0..labels.len()).filter(|&u| labels[u] == i).collect()).collect();
    json!({ "k": k, "labels": labels, "parts": parts })
}

#![allow(dead_code)]

use maglap_core::graph::{Edge, Measure};
use maglap_core::rng::substream;
use maglap_core::{Complex64, GroupElement, SignatureGroup, SignedGraph, SwitchingFunction};
use rand::Rng;

pub type TestRng = maglap_core::rng::Rng;

pub fn rng(seed: u64) -> TestRng {
    substream(seed, 99)
}

/// Random graph on `n` vertices; `k = None` gives `U(1)` signatures.
pub fn random_graph(rng: &mut TestRng, n: usize, p: f64, k: Option<u32>, weighted: bool, unit: bool) -> SignedGraph {
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
    let group = k.map_or(SignatureGroup::Circle, SignatureGroup::Cyclic);
    SignedGraph::new(n, group, edges, if unit { Measure::Unit } else { Measure::Degree }).unwrap()
}

pub fn random_switch(rng: &mut TestRng, n: usize, group: SignatureGroup) -> SwitchingFunction {
    let vals = (0..n)
        .map(|_| match group {
            SignatureGroup::Cyclic(k) => GroupElement::cyclic(k, rng.gen_range(0..k) as i64),
            SignatureGroup::Circle => GroupElement::circle(rng.gen_range(0.0..std::f64::consts::TAU)),
        })
        .collect();
    SwitchingFunction::on_all(vals).unwrap()
}

/// Same weighted graph with every signature trivial.
pub fn trivialized(g: &SignedGraph) -> SignedGraph {
    let id = g.group().identity();
    let edges = g.edges().iter().map(|e| Edge::new(e.u, e.v, e.weight, id)).collect();
    SignedGraph::new(g.num_vertices(), g.group(), edges, Measure::Explicit(g.measures().to_vec())).unwrap()
}

pub fn random_function(rng: &mut TestRng, n: usize) -> Vec<Complex64> {
    (0..n).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect()
}

fn xi(k: u32, j: u32) -> Complex64 {
    Complex64::from_polar(1.0, std::f64::consts::TAU * j as f64 / k as f64)
}

/// `ι` on the vertex mask by enumerating all `k^{|V₁|}` assignments with no
/// pinning.
pub fn brute_iota(g: &SignedGraph, mask: &[bool]) -> f64 {
    let k = g.group().order().expect("cyclic");
    let verts: Vec<usize> = (0..g.num_vertices()).filter(|&u| mask[u]).collect();
    let inner: Vec<&Edge> = g.edges().iter().filter(|e| mask[e.u] && mask[e.v]).collect();
    let mut tau = vec![0u32; g.num_vertices()];
    let mut best = f64::INFINITY;
    let total = (k as u64).pow(verts.len() as u32);
    for code in 0..total {
        let mut c = code;
        for &u in &verts {
            tau[u] = (c % k as u64) as u32;
            c /= k as u64;
        }
        let val: f64 =
            inner.iter().map(|e| e.weight * (xi(k, tau[e.u]) - e.signature.to_complex() * xi(k, tau[e.v])).norm()).sum();
        best = best.min(val);
    }
    if inner.is_empty() {
        0.0
    } else {
        best
    }
}

pub fn brute_boundary(g: &SignedGraph, mask: &[bool]) -> f64 {
    g.edges().iter().filter(|e| mask[e.u] != mask[e.v]).map(|e| e.weight).sum()
}

pub fn brute_volume(g: &SignedGraph, mask: &[bool]) -> f64 {
    (0..g.num_vertices()).filter(|&u| mask[u]).map(|u| g.measure(u)).sum()
}

pub fn brute_phi(g: &SignedGraph, mask: &[bool]) -> f64 {
    (brute_iota(g, mask) + brute_boundary(g, mask)) / brute_volume(g, mask)
}

/// `h_n` by enumerating all `(n+1)^N` labelings vertex → {unassigned, 1..n}.
pub fn brute_h(g: &SignedGraph, n: usize) -> f64 {
    let nv = g.num_vertices();
    let phis: Vec<f64> = (0..1u32 << nv)
        .map(|m| {
            if m == 0 {
                f64::NAN
            } else {
                brute_phi(g, &(0..nv).map(|u| m >> u & 1 == 1).collect::<Vec<_>>())
            }
        })
        .collect();
    let mut best = f64::INFINITY;
    let total = ((n + 1) as u64).pow(nv as u32);
    for code in 0..total {
        let mut masks = vec![0u32; n];
        let mut c = code;
        for u in 0..nv {
            let l = (c % (n as u64 + 1)) as usize;
            c /= n as u64 + 1;
            if l > 0 {
                masks[l - 1] |= 1 << u;
            }
        }
        if masks.contains(&0) {
            continue;
        }
        best = best.min(masks.iter().map(|&m| phis[m as usize]).fold(f64::NEG_INFINITY, f64::max));
    }
    best
}

/// Whether the unweighted `k = 2` graph restricted to `mask` minus the
/// edges in `deleted` admits a consistent `±1` labelling.
fn two_colorable(n: usize, edges: &[(usize, usize, bool)], deleted: u32) -> bool {
    let mut color: Vec<Option<bool>> = vec![None; n];
    let mut adj = vec![Vec::new(); n];
    for (i, &(u, v, neg)) in edges.iter().enumerate() {
        if deleted >> i & 1 == 0 {
            adj[u].push((v, neg));
            adj[v].push((u, neg));
        }
    }
    for s in 0..n {
        if color[s].is_some() {
            continue;
        }
        color[s] = Some(false);
        let mut stack = vec![s];
        while let Some(u) = stack.pop() {
            for &(v, neg) in &adj[u] {
                let want = color[u].unwrap() ^ neg;
                match color[v] {
                    None => {
                        color[v] = Some(want);
                        stack.push(v);
                    }
                    Some(c) if c != want => return false,
                    _ => {}
                }
            }
        }
    }
    true
}

/// Fewest edge deletions that balance the induced `k = 2` graph.
pub fn brute_line_index(g: &SignedGraph, mask: &[bool]) -> u32 {
    let edges: Vec<(usize, usize, bool)> =
        g.edges().iter().filter(|e| mask[e.u] && mask[e.v]).map(|e| (e.u, e.v, !e.signature.is_identity())).collect();
    let m = edges.len();
    (0..1u32 << m)
        .filter(|&d| two_colorable(g.num_vertices(), &edges, d))
        .map(u32::count_ones)
        .min()
        .unwrap()
}

//! Ratio functionals, exact multi-way Cheeger constants and sweep cuts.
//!
//! For a nonempty `V₁ ⊆ V`
//!
//! ```text
//! φ(V₁) = (ι(V₁) + |E(V₁, V₁ᶜ)|) / vol_μ(V₁)
//! ```
//!
//! and `h_n` is the minimum over nontrivial `n`-subpartitions of the largest
//! `φ` of a part. Sweep cuts threshold a vertex function by modulus (and, for
//! cyclic signatures, by sector angle) and return the best candidate together
//! with the spectral bound it is guaranteed to meet.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::frustration::{self, Exactness};
use crate::graph::{OrderedKPartition, SignedGraph, Subpartition, SwitchingFunction, VertexSet};
use crate::group::{chord_table, GroupElement, SignatureGroup};
use crate::math::{self, TAU};
use crate::{par, spectral, Error, Result, ENUMERATION_CAP};

/// How `ι` is obtained inside `φ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrustrationMode {
    /// Exhaustive search; cyclic signatures only.
    Exact,
    /// Coordinate-descent upper bound over `U(1)`.
    Heuristic { restarts: usize, seed: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhiValue {
    pub ratio: f64,
    pub frustration: f64,
    pub exactness: Exactness,
    pub boundary: f64,
    pub volume: f64,
}

/// `φ^s_μ(V₁)`.
pub fn phi(g: &SignedGraph, set: &VertexSet, mode: FrustrationMode) -> Result<PhiValue> {
    let sf = g.set_functionals(set)?;
    let fr = match mode {
        FrustrationMode::Exact => frustration::frustration_exact_cyclic(g, set)?,
        FrustrationMode::Heuristic { restarts, seed } => frustration::frustration_heuristic_u1(g, set, restarts, seed)?,
    };
    Ok(PhiValue {
        ratio: (fr.value + sf.boundary) / sf.volume,
        frustration: fr.value,
        exactness: fr.exactness,
        boundary: sf.boundary,
        volume: sf.volume,
    })
}

fn cyclic_order(g: &SignedGraph) -> Result<u32> {
    match g.group() {
        SignatureGroup::Cyclic(k) => Ok(k),
        SignatureGroup::Circle => Err(Error::Unsupported("a cyclic signature group".into())),
    }
}

/// The k-partiteness ratio `β^s_μ(P)` of an ordered k-partition, evaluated
/// from the edge classes `E^l(Ṽ_i, Ṽ_j)` of oriented edges from `Ṽ_i` to
/// `Ṽ_j` with signature `ξ^l`.
pub fn k_partiteness_ratio(g: &SignedGraph, p: &OrderedKPartition) -> Result<f64> {
    let k = cyclic_order(g)?;
    if p.k() != k {
        return Err(Error::GroupMismatch { expected: alloc::format!("{}", g.group()), found: alloc::format!("S1_{}", p.k()) });
    }
    let n = g.num_vertices();
    let labels = p.labels(n);
    if p.base().iter().any(|u| u >= n) {
        return Err(Error::VertexOutOfRange(p.base().iter().max().unwrap()));
    }
    let ku = k as usize;
    // counts[i][j][l] = weighted |E^l(Ṽ_i, Ṽ_j)|
    let mut counts = vec![vec![vec![0.0f64; ku]; ku]; ku];
    for u in 0..n {
        let Some(i) = labels[u] else { continue };
        for nb in g.neighbors(u) {
            if let Some(j) = labels[nb.vertex] {
                let GroupElement::Cyclic { j: l, .. } = nb.signature else { unreachable!() };
                counts[i as usize][j as usize][l as usize] += nb.weight;
            }
        }
    }
    let chords = chord_table(k);
    let mut inner = 0.0;
    for i in 0..ku {
        for j in 0..ku {
            for l in 1..ku {
                inner += chords[l] * counts[i][j][(i + ku - j + l) % ku];
            }
        }
    }
    let sf = g.set_functionals(p.base())?;
    Ok((inner / 2.0 + sf.boundary) / sf.volume)
}

/// Result of [`h_exact`].
#[derive(Debug, Clone)]
pub struct ExactCheeger {
    pub value: f64,
    pub partition: Subpartition,
}

/// `h_n^s(μ)` by exhaustive enumeration, with exact cyclic frustration.
///
/// Every nonempty subset's `φ` is tabulated first; subpartitions are then
/// enumerated with parts ordered by their smallest vertex, so each is seen
/// once.
pub fn h_exact(g: &SignedGraph, n: usize) -> Result<ExactCheeger> {
    h_exact_capped(g, n, ENUMERATION_CAP)
}

pub fn h_exact_capped(g: &SignedGraph, n: usize, cap: u64) -> Result<ExactCheeger> {
    cyclic_order(g)?;
    let nv = g.num_vertices();
    if n == 0 || n > nv {
        return Err(Error::InvalidArgument(alloc::format!("need 1 <= n <= {nv}, got {n}")));
    }
    let required = math::powf((n + 1) as f64, nv as f64);
    if required > cap as f64 || nv >= 32 {
        return Err(Error::CapExceeded { required, cap });
    }
    let full: u32 = if nv == 32 { u32::MAX } else { (1u32 << nv) - 1 };
    let table: Vec<f64> = par::map_range(1usize << nv, |m| {
        if m == 0 {
            return f64::INFINITY;
        }
        let set = VertexSet::new((0..nv).filter(|&u| m >> u & 1 == 1));
        phi(g, &set, FrustrationMode::Exact).map(|p| p.ratio).unwrap_or(f64::NAN)
    });
    if table.iter().any(|x| x.is_nan()) {
        return Err(Error::InvalidArgument("frustration enumeration failed".into()));
    }

    let firsts = submasks(full);
    let branch: Vec<(f64, Vec<u32>)> = par::map_range(firsts.len(), |b| {
        let s = firsts[b];
        let mut best = (f64::INFINITY, Vec::new());
        let mut chosen = vec![s];
        let avail = full & !s & !low_through(s);
        search(&table, avail, n - 1, table[s as usize], &mut chosen, &mut best);
        best
    });
    let mut best = (f64::INFINITY, Vec::new());
    for b in branch {
        if b.0 < best.0 {
            best = b;
        }
    }
    let parts = best.1.iter().map(|&m| VertexSet::new((0..nv).filter(|&u| m >> u & 1 == 1))).collect();
    Ok(ExactCheeger { value: best.0, partition: Subpartition::new(parts)? })
}

/// Mask of all bits up to and including the lowest set bit of `s`.
fn low_through(s: u32) -> u32 {
    let low = s & s.wrapping_neg();
    low | (low - 1)
}

fn submasks(m: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut s = m;
    while s != 0 {
        out.push(s);
        s = (s - 1) & m;
    }
    out.reverse();
    out
}

fn search(table: &[f64], avail: u32, remaining: usize, cur: f64, chosen: &mut Vec<u32>, best: &mut (f64, Vec<u32>)) {
    if cur >= best.0 {
        return;
    }
    if remaining == 0 {
        *best = (cur, chosen.clone());
        return;
    }
    for s in submasks(avail) {
        let v = cur.max(table[s as usize]);
        if v >= best.0 {
            continue;
        }
        chosen.push(s);
        search(table, avail & !s & !low_through(s), remaining - 1, v, chosen, best);
        chosen.pop();
    }
}

/// The candidate a certificate speaks about.
#[derive(Debug, Clone, PartialEq)]
pub enum Candidate {
    Set(VertexSet),
    Partition(OrderedKPartition),
}

impl Candidate {
    /// The underlying vertex set (the base `Ṽ` of a partition).
    pub fn vertices(&self) -> &VertexSet {
        match self {
            Candidate::Set(s) => s,
            Candidate::Partition(p) => p.base(),
        }
    }
}

/// A candidate cluster together with the numbers that certify it.
#[derive(Debug, Clone)]
pub struct ClusterCertificate {
    pub candidate: Candidate,
    /// Switching function on the candidate realizing `frustration`.
    pub tau: SwitchingFunction,
    /// `Σ w |τ(u) − s τ(v)|` over inner edges: an upper bound on `ι`.
    pub frustration: f64,
    /// Whether `frustration` is known to equal `ι`.
    pub frustration_exact: bool,
    pub boundary: f64,
    pub volume: f64,
    /// `β` for partitions, an upper bound on `φ` for sets.
    pub ratio: f64,
    /// Spectral bound the ratio is certified against.
    pub bound: f64,
    /// Rayleigh quotient of the sweep function.
    pub rayleigh: f64,
    /// Threshold `t′` on `|f|²` (after scaling to `max |f| = 1`).
    pub t: f64,
    /// Sector offset `θ′` (cyclic sweeps only).
    pub theta: Option<f64>,
    /// Constant `c` of the lower estimate `λ₁ · c / 4 ≤ h₁`, reported for
    /// information; `2` unless `k` is odd.
    pub lower_constant: f64,
}

impl ClusterCertificate {
    pub fn is_certified(&self, tol: f64) -> bool {
        self.ratio <= self.bound + tol
    }

    /// Recompute the ratio from the graph and the stored `τ`.
    pub fn recompute(&self, g: &SignedGraph) -> Result<f64> {
        let set = self.candidate.vertices();
        let sf = g.set_functionals(set)?;
        let fr = frustration::frustration_of(g, &self.tau)?;
        Ok((fr + sf.boundary) / sf.volume)
    }
}

/// `|1 − ξ^{(k−1)/2}|` for odd `k`, else `2`.
pub fn lower_bound_constant(group: SignatureGroup) -> f64 {
    match group {
        SignatureGroup::Cyclic(k) if k % 2 == 1 => chord_table(k)[((k - 1) / 2) as usize],
        _ => 2.0,
    }
}

struct Levels {
    scaled: Vec<Complex64>,
    /// Vertices of the support grouped by equal `|f|²`, largest first.
    groups: Vec<(f64, Vec<usize>)>,
}

fn levels(g: &SignedGraph, f: &[Complex64]) -> Result<Levels> {
    if f.len() != g.num_vertices() {
        return Err(Error::InvalidArgument("function length differs from vertex count".into()));
    }
    let m = f.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if m == 0.0 {
        return Err(Error::ZeroFunction);
    }
    let scaled: Vec<Complex64> = f.iter().map(|z| z / m).collect();
    let mut order: Vec<usize> = (0..f.len()).filter(|&u| scaled[u].norm_sqr() > 0.0).collect();
    order.sort_by(|&a, &b| scaled[b].norm_sqr().total_cmp(&scaled[a].norm_sqr()).then(a.cmp(&b)));
    let mut groups: Vec<(f64, Vec<usize>)> = Vec::new();
    for u in order {
        let t = scaled[u].norm_sqr();
        match groups.last_mut() {
            Some((lt, vs)) if *lt == t => vs.push(u),
            _ => groups.push((t, vec![u])),
        }
    }
    Ok(Levels { scaled, groups })
}

fn arg(z: Complex64) -> f64 {
    math::wrap_angle(math::atan2(z.im, z.re))
}

fn sector(z: Complex64, theta: f64, k: u32) -> u32 {
    let width = TAU / k as f64;
    let j = math::floor(math::wrap_angle(arg(z) - theta) / width) as u32;
    j.min(k - 1)
}

/// Sector offsets in `[0, 2π/k)` at which sector membership can change, and
/// the midpoints between them (including across the wrap).
pub fn theta_grid(f: &[Complex64], k: u32) -> Vec<f64> {
    let width = TAU / k as f64;
    let mut bp: Vec<f64> = f
        .iter()
        .filter(|z| z.norm_sqr() > 0.0)
        .map(|&z| {
            let r = arg(z) % width;
            if r >= width { 0.0 } else { r }
        })
        .collect();
    bp.sort_by(f64::total_cmp);
    bp.dedup();
    if bp.is_empty() {
        return vec![0.0];
    }
    let mut grid = bp.clone();
    for w in bp.windows(2) {
        grid.push((w[0] + w[1]) / 2.0);
    }
    let wrap = (bp[bp.len() - 1] + bp[0] + width) / 2.0;
    grid.push(if wrap >= width { wrap - width } else { wrap });
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    grid
}

#[derive(Clone, Copy)]
struct Best {
    ratio: f64,
    t: f64,
    theta_idx: usize,
}

fn better(a: &Best, b: &Best) -> bool {
    a.ratio < b.ratio || (a.ratio == b.ratio && (a.t < b.t || (a.t == b.t && a.theta_idx < b.theta_idx)))
}

/// Threshold-and-sector sweep for a cyclic signature.
///
/// Scans every threshold `t` among the distinct values of `|f|²` and every
/// sector offset of [`theta_grid`], builds the ordered k-partition of the
/// superlevel set by sector, and returns the one with least `β`. The bound is
/// `2√(2 d_μ R(f))`.
pub fn sweep_cut_cyclic(g: &SignedGraph, f: &[Complex64]) -> Result<ClusterCertificate> {
    let k = cyclic_order(g)?;
    let lv = levels(g, f)?;
    let r = spectral::rayleigh(g, f)?;
    let bound = 2.0 * math::sqrt(2.0 * g.max_mu_degree() * r);
    let chords = chord_table(k);
    let grid = theta_grid(&lv.scaled, k);
    let n = g.num_vertices();

    let per_theta: Vec<Best> = par::map_range(grid.len(), |ti| {
        let theta = grid[ti];
        let lab: Vec<u32> = lv.scaled.iter().map(|&z| sector(z, theta, k)).collect();
        let mut inside = vec![false; n];
        let (mut fr, mut bd, mut vol) = (0.0, 0.0, 0.0);
        let mut best = Best { ratio: f64::INFINITY, t: f64::INFINITY, theta_idx: ti };
        for (t, group) in &lv.groups {
            for &u in group {
                inside[u] = true;
                vol += g.measure(u);
                for nb in g.neighbors(u) {
                    if inside[nb.vertex] && nb.vertex != u {
                        bd -= nb.weight;
                        let GroupElement::Cyclic { j: e, .. } = nb.signature else { unreachable!() };
                        fr += nb.weight * chords[((e + lab[nb.vertex] + k - lab[u]) % k) as usize];
                    } else {
                        bd += nb.weight;
                    }
                }
            }
            let cand = Best { ratio: (fr + bd) / vol, t: *t, theta_idx: ti };
            if cand.ratio <= best.ratio {
                best = cand;
            }
        }
        best
    });
    let mut best = per_theta[0];
    for b in &per_theta[1..] {
        if better(b, &best) {
            best = *b;
        }
    }

    let theta = grid[best.theta_idx];
    let labels: Vec<Option<u32>> =
        lv.scaled.iter().map(|&z| if z.norm_sqr() >= best.t && z.norm_sqr() > 0.0 { Some(sector(z, theta, k)) } else { None }).collect();
    let part = OrderedKPartition::from_labels(&labels, k)?;
    let ratio = k_partiteness_ratio(g, &part)?;
    let base = part.base().clone();
    let values = base.iter().map(|u| GroupElement::Cyclic { k, j: labels[u].unwrap() }).collect();
    let tau = SwitchingFunction::new(base.clone(), values)?;
    let sf = g.set_functionals(&base)?;
    let fr = frustration::frustration_of(g, &tau)?;
    Ok(ClusterCertificate {
        candidate: Candidate::Partition(part),
        tau,
        frustration: fr,
        frustration_exact: fr == 0.0,
        boundary: sf.boundary,
        volume: sf.volume,
        ratio,
        bound,
        rayleigh: r,
        t: best.t,
        theta: Some(theta),
        lower_constant: lower_bound_constant(g.group()),
    })
}

/// Threshold sweep for a `U(1)` signature (cyclic signatures are read as
/// elements of `U(1)`).
///
/// Each superlevel set `{|f|² ≥ t}` is scored with `τ = f/|f|`, which gives an
/// upper bound on its `φ`. The bound is `(3/2)√(2 d_μ R(f))`.
pub fn sweep_cut_u1(g: &SignedGraph, f: &[Complex64]) -> Result<ClusterCertificate> {
    let g = &frustration::as_circle(g)?;
    let lv = levels(g, f)?;
    let r = spectral::rayleigh(g, f)?;
    let bound = 1.5 * math::sqrt(2.0 * g.max_mu_degree() * r);
    let n = g.num_vertices();
    let phase: Vec<Complex64> = lv.scaled.iter().map(|z| if z.norm() > 0.0 { z / z.norm() } else { *z }).collect();

    let mut inside = vec![false; n];
    let (mut fr, mut bd, mut vol) = (0.0, 0.0, 0.0);
    let (mut best_ratio, mut best_t) = (f64::INFINITY, f64::INFINITY);
    for (t, group) in &lv.groups {
        for &u in group {
            inside[u] = true;
            vol += g.measure(u);
            for nb in g.neighbors(u) {
                if inside[nb.vertex] {
                    bd -= nb.weight;
                    fr += nb.weight * (phase[u] - nb.signature.to_complex() * phase[nb.vertex]).norm();
                } else {
                    bd += nb.weight;
                }
            }
        }
        let ratio = (fr + bd) / vol;
        if ratio <= best_ratio {
            best_ratio = ratio;
            best_t = *t;
        }
    }

    let set = VertexSet::new((0..n).filter(|&u| lv.scaled[u].norm_sqr() >= best_t && lv.scaled[u].norm_sqr() > 0.0));
    let values = set.iter().map(|u| GroupElement::circle(arg(phase[u]))).collect();
    let tau = SwitchingFunction::new(set.clone(), values)?;
    let sf = g.set_functionals(&set)?;
    let fr = frustration::frustration_of(g, &tau)?;
    Ok(ClusterCertificate {
        candidate: Candidate::Set(set),
        tau,
        frustration: fr,
        frustration_exact: fr < 1e-12,
        boundary: sf.boundary,
        volume: sf.volume,
        ratio: (fr + sf.boundary) / sf.volume,
        bound,
        rayleigh: r,
        t: best_t,
        theta: None,
        lower_constant: 2.0,
    })
}

/// [`sweep_cut_cyclic`] or [`sweep_cut_u1`] according to the signature group.
pub fn sweep_cut(g: &SignedGraph, f: &[Complex64]) -> Result<ClusterCertificate> {
    match g.group() {
        SignatureGroup::Cyclic(_) => sweep_cut_cyclic(g, f),
        SignatureGroup::Circle => sweep_cut_u1(g, f),
    }
}

/// Both sides of the coarea inequality for `f` scaled to `max |f| = 1`:
/// `∫₀¹ ι(V^f(√t)) + |E(V^f(√t), V^f(√t)ᶜ)| dt` with exact `ι`, and
/// `2 Σ w |f(u) − s f(v)| (|f(u)| + |f(v)|)`.
pub fn coarea_sides(g: &SignedGraph, f: &[Complex64]) -> Result<(f64, f64)> {
    cyclic_order(g)?;
    let lv = levels(g, f)?;
    let z = &lv.scaled;
    let rhs: f64 =
        2.0 * g.edges().iter().map(|e| e.weight * (z[e.u] - e.signature.to_complex() * z[e.v]).norm() * (z[e.u].norm() + z[e.v].norm())).sum::<f64>();
    let mut members = Vec::new();
    let mut lhs = 0.0;
    for (i, (t, group)) in lv.groups.iter().enumerate() {
        members.extend_from_slice(group);
        let next = lv.groups.get(i + 1).map_or(0.0, |g| g.0);
        let set = VertexSet::new(members.iter().copied());
        let iota = frustration::frustration_exact_cyclic(g, &set)?.value;
        lhs += (t - next) * (iota + g.boundary(&set)?);
    }
    Ok((lhs, rhs))
}

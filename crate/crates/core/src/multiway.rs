//! Higher-order clustering through the spectral embedding.
//!
//! The first `n` eigenfunctions give `F: V → ℂⁿ`. Points are compared modulo
//! the phase action of the signature group, i.e. in the lens space
//! `S^{2n−1}/S¹ₖ` or in `ℂP^{n−1}`:
//!
//! ```text
//! d_F(u, v) = min_{γ ∈ Γ} ‖F(u)/‖F(u)‖ − γ F(v)/‖F(v)‖‖
//! ```
//!
//! A padded random partition of the support produces `n` well separated sets
//! of large `μ_F`-mass; cutting `F` off around each set and sweeping the best
//! coordinate yields `n` disjoint clusters with certificates.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::Rng as _;

use crate::cheeger::{self, ClusterCertificate};
use crate::graph::{SignedGraph, VertexSet};
use crate::group::{GroupElement, SignatureGroup};
use crate::math;
use crate::{par, rng, spectral, Error, Result};

/// Rows with `‖F(u)‖` below this fraction of the largest row are treated as
/// zero (outside the support).
pub const SUPPORT_TOL: f64 = 1e-12;
/// Number of equispaced radii in `[r/4, r/2]`.
pub const RADIUS_STEPS: usize = 32;
pub const DECOMPOSE_RETRY_CAP: usize = 64;

/// `F(u) = (f_1(u), …, f_n(u))` with `μ_F(u) = ‖F(u)‖² μ(u)`.
#[derive(Debug, Clone)]
pub struct SpectralEmbedding {
    pub n: usize,
    pub group: SignatureGroup,
    /// `map[u] = F(u)`.
    pub map: Vec<Vec<Complex64>>,
    pub mass: Vec<f64>,
    /// `V_F`, ascending.
    pub support: Vec<usize>,
    /// Eigenvalues `λ₁ … λ_n`.
    pub eigenvalues: Vec<f64>,
}

impl SpectralEmbedding {
    /// Embedding by the `n` lowest eigenfunctions of `g`.
    pub fn new(g: &SignedGraph, n: usize) -> Result<Self> {
        let sp = spectral::spectrum(g)?;
        Self::from_spectrum(g, &sp, n)
    }

    pub fn from_spectrum(g: &SignedGraph, sp: &spectral::Spectrum, n: usize) -> Result<Self> {
        let nv = g.num_vertices();
        if n == 0 || n > nv {
            return Err(Error::InvalidArgument(alloc::format!("need 1 <= n <= {nv}, got {n}")));
        }
        let mut map: Vec<Vec<Complex64>> = (0..nv).map(|u| (0..n).map(|i| sp.vectors[i][u]).collect()).collect();
        let norms: Vec<f64> = map.iter().map(|z| norm(z)).collect();
        let top = norms.iter().copied().fold(0.0, f64::max);
        let mut support = Vec::new();
        for u in 0..nv {
            if norms[u] > SUPPORT_TOL * top {
                support.push(u);
            } else {
                map[u].iter_mut().for_each(|z| *z = Complex64::new(0.0, 0.0));
            }
        }
        let mass = (0..nv).map(|u| norm_sqr(&map[u]) * g.measure(u)).collect();
        Ok(SpectralEmbedding { n, group: g.group(), map, mass, support, eigenvalues: sp.values[..n].to_vec() })
    }

    pub fn lambda_n(&self) -> f64 {
        self.eigenvalues[self.n - 1]
    }

    /// `μ_F(V_F)`; equals `n` up to rounding.
    pub fn total_mass(&self) -> f64 {
        self.mass.iter().sum()
    }

    pub fn mass_of(&self, set: &VertexSet) -> f64 {
        set.iter().map(|u| self.mass[u]).sum()
    }

    /// `d_F(u, v)` for `u, v ∈ V_F`.
    pub fn distance(&self, u: usize, v: usize) -> Result<f64> {
        df_distance(&self.map[u], &self.map[v], self.group)
    }

    /// `R_μ^s(F)`.
    pub fn rayleigh(&self, g: &SignedGraph) -> Result<f64> {
        spectral::rayleigh_map(g, &self.map)
    }
}

fn norm_sqr(z: &[Complex64]) -> f64 {
    z.iter().map(|c| c.norm_sqr()).sum()
}

fn norm(z: &[Complex64]) -> f64 {
    math::sqrt(norm_sqr(z))
}

/// `⟨a, b⟩ = Σ a_i conj(b_i)`.
fn herm(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x * y.conj()).sum()
}

/// Quotient distance between the directions of two nonzero vectors.
///
/// The minimizing phase is found from `⟨ẑ₁, ẑ₂⟩` and the distance is then
/// evaluated directly as a norm, which avoids cancellation near zero. The
/// arguments are put in a canonical order first, so the result is exactly
/// symmetric.
pub fn df_distance(z1: &[Complex64], z2: &[Complex64], group: SignatureGroup) -> Result<f64> {
    let key = |z: &[Complex64]| z.iter().flat_map(|c| [c.re, c.im]).collect::<Vec<f64>>();
    let (ka, kb) = (key(z1), key(z2));
    let swap = ka.iter().zip(&kb).find(|(x, y)| x != y).is_some_and(|(x, y)| x.total_cmp(y).is_gt());
    let (z1, z2) = if swap { (z2, z1) } else { (z1, z2) };
    if z1.len() != z2.len() {
        return Err(Error::InvalidArgument("vectors of different length".into()));
    }
    let (n1, n2) = (norm(z1), norm(z2));
    if n1 == 0.0 || n2 == 0.0 {
        return Err(Error::ZeroFunction);
    }
    let a: Vec<Complex64> = z1.iter().map(|z| z / n1).collect();
    let b: Vec<Complex64> = z2.iter().map(|z| z / n2).collect();
    let c = herm(&a, &b);
    // ‖a − γb‖² = 2 − 2 Re(conj(γ) c)
    let gamma = match group {
        SignatureGroup::Circle => {
            if c.norm() > 0.0 {
                c / c.norm()
            } else {
                Complex64::new(1.0, 0.0)
            }
        }
        SignatureGroup::Cyclic(k) => {
            let mut best = (f64::NEG_INFINITY, Complex64::new(1.0, 0.0));
            for j in 0..k {
                let g = GroupElement::Cyclic { k, j }.to_complex();
                let score = (g.conj() * c).re;
                if score > best.0 {
                    best = (score, g);
                }
            }
            best.1
        }
    };
    Ok(math::sqrt(a.iter().zip(&b).map(|(x, y)| (x - gamma * y).norm_sqr()).sum()))
}

/// One cell of a padded partition.
#[derive(Debug, Clone)]
pub struct PaddedCell {
    pub vertices: VertexSet,
    /// Net point whose ball produced the cell.
    pub center: usize,
    pub diameter: f64,
}

#[derive(Debug, Clone)]
pub struct PaddedPartition {
    pub cells: Vec<PaddedCell>,
    /// The `r/4`-net, in construction order.
    pub net: Vec<usize>,
    pub radius: f64,
}

/// Greedy farthest-point `r/4`-net over the support.
fn farthest_point_net(emb: &SpectralEmbedding, dist: &[Vec<f64>], r: f64) -> Vec<usize> {
    let pts = &emb.support;
    if pts.is_empty() {
        return Vec::new();
    }
    let mut net = vec![0usize];
    let mut nearest: Vec<f64> = dist[0].clone();
    loop {
        let (far, d) = nearest.iter().enumerate().fold((0, f64::NEG_INFINITY), |a, (i, &d)| if d > a.1 { (i, d) } else { a });
        if d < r / 4.0 {
            break;
        }
        net.push(far);
        for (i, x) in nearest.iter_mut().enumerate() {
            *x = x.min(dist[far][i]);
        }
    }
    net
}

/// Pairwise `d_F` over the support (indexed by support position).
fn distance_table(emb: &SpectralEmbedding) -> Result<Vec<Vec<f64>>> {
    let pts = &emb.support;
    let rows = par::map_range(pts.len(), |i| -> Result<Vec<f64>> {
        pts.iter().map(|&v| emb.distance(pts[i], v)).collect()
    });
    rows.into_iter().collect()
}

/// Random partition of `V_F` into cells of `d_F`-diameter at most `r`.
///
/// Net points are visited in a random order `σ`; each point joins the first
/// net ball of radius `R` that contains it, with `R` drawn from
/// [`RADIUS_STEPS`] equispaced values in `[r/4, r/2]`.
pub fn padded_random_partition(emb: &SpectralEmbedding, r: f64, seed: u64) -> Result<PaddedPartition> {
    let dist = distance_table(emb)?;
    padded_partition_with(emb, &dist, r, &mut rng::substream(seed, 0))
}

fn padded_partition_with(emb: &SpectralEmbedding, dist: &[Vec<f64>], r: f64, rng: &mut rng::Rng) -> Result<PaddedPartition> {
    if r.is_nan() || r <= 0.0 {
        return Err(Error::InvalidArgument("r must be positive".into()));
    }
    let pts = &emb.support;
    let net = farthest_point_net(emb, dist, r);
    let mut order = net.clone();
    order.shuffle(rng);
    let step = rng.gen_range(0..RADIUS_STEPS);
    let radius = r / 4.0 + (r / 4.0) * step as f64 / (RADIUS_STEPS - 1) as f64;

    let mut members: Vec<Vec<usize>> = vec![Vec::new(); order.len()];
    for (i, _) in pts.iter().enumerate() {
        let c = order.iter().position(|&x| dist[x][i] < radius).expect("net covers every point");
        members[c].push(i);
    }
    let cells = order
        .iter()
        .zip(members)
        .filter(|(_, m)| !m.is_empty())
        .map(|(&center, m)| {
            let diameter = m.iter().flat_map(|&a| m.iter().map(move |&b| (a, b))).map(|(a, b)| dist[a][b]).fold(0.0, f64::max);
            PaddedCell { vertices: VertexSet::new(m.iter().map(|&i| pts[i])), center: pts[center], diameter }
        })
        .collect();
    Ok(PaddedPartition { cells, net: net.iter().map(|&i| pts[i]).collect(), radius })
}

/// Output of [`decompose`].
#[derive(Debug, Clone)]
pub struct Decomposition {
    /// `T₁ … T_n`, pairwise disjoint and nonempty.
    pub parts: Vec<VertexSet>,
    /// `μ_F(T_p) / μ_F(V_F)`.
    pub mass_fractions: Vec<f64>,
    /// Minimum `d_F` between distinct parts (`None` when `n = 1`).
    pub separation: Option<f64>,
    /// Attempts before success (0 = first attempt).
    pub retries: usize,
    pub r: f64,
    pub delta: f64,
    /// Padding radius `r/α` used for the cores.
    pub padding: f64,
    /// `Σ μ_F(Ŝ_i) / μ_F(V_F)` of the accepted attempt.
    pub core_fraction: f64,
    /// Largest `μ_F` of a padded cell, to compare with `μ_F(V_F)/(n(1−r²))`.
    pub max_cell_mass: f64,
}

/// `n` disjoint subsets of `V_F`, each carrying at least `1/(2n)` of the
/// total `μ_F`-mass, built from padded cores with `r = 1/(3√n)` and
/// `δ = 1/(4n)`. Cores lighter than `μ_F/(2n)` are merged pairwise, the
/// heaviest `n − 1` are kept and the rest are united into `T_n`.
///
/// The padding is `r/α` with `α = 32 log₂ρ / δ`, using `2n` in place of the
/// unknown `log₂ρ`. Attempts are repeated with fresh substreams of `seed`
/// until the core mass reaches `(1 − δ) μ_F`.
pub fn decompose(emb: &SpectralEmbedding, seed: u64) -> Result<Decomposition> {
    let n = emb.n;
    let total = emb.total_mass();
    if emb.support.is_empty() {
        return Err(Error::EmptySet);
    }
    let r = 1.0 / (3.0 * math::sqrt(n as f64));
    let delta = 1.0 / (4.0 * n as f64);
    let alpha = 32.0 * (2.0 * n as f64) / delta;
    let padding = r / alpha;
    let pts = &emb.support;

    if n == 1 {
        return Ok(Decomposition {
            parts: vec![VertexSet::new(pts.iter().copied())],
            mass_fractions: vec![1.0],
            separation: None,
            retries: 0,
            r,
            delta,
            padding,
            core_fraction: 1.0,
            max_cell_mass: total,
        });
    }

    let dist = distance_table(emb)?;
    let target = 1.0 / (2.0 * n as f64);
    let mut best_fraction: f64 = 0.0;
    for attempt in 0..DECOMPOSE_RETRY_CAP {
        let mut rng = rng::substream(seed, attempt as u64);
        let pp = padded_partition_with(emb, &dist, r, &mut rng)?;
        let mut cell_of = vec![usize::MAX; emb.map.len()];
        for (c, cell) in pp.cells.iter().enumerate() {
            for u in cell.vertices.iter() {
                cell_of[u] = c;
            }
        }
        let max_cell_mass = pp.cells.iter().map(|c| emb.mass_of(&c.vertices)).fold(0.0, f64::max);

        // Cores: points whose padding ball stays in their own cell.
        let mut cores: Vec<Vec<usize>> = vec![Vec::new(); pp.cells.len()];
        for i in 0..pts.len() {
            let c = cell_of[pts[i]];
            if (0..pts.len()).all(|j| cell_of[pts[j]] == c || dist[i][j] >= padding) {
                cores[c].push(pts[i]);
            }
        }
        let mut sets: Vec<(f64, Vec<usize>)> =
            cores.into_iter().filter(|c| !c.is_empty()).map(|c| (c.iter().map(|&u| emb.mass[u]).sum(), c)).collect();
        let core_fraction = sets.iter().map(|s| s.0).sum::<f64>() / total;
        if core_fraction < 1.0 - delta {
            continue;
        }

        let light = total * target;
        loop {
            let mut small: Vec<usize> = (0..sets.len()).filter(|&i| sets[i].0 <= light).collect();
            if small.len() < 2 {
                break;
            }
            small.sort_by(|&a, &b| sets[a].0.total_cmp(&sets[b].0).then(a.cmp(&b)));
            let (a, b) = (small[0].min(small[1]), small[0].max(small[1]));
            let (mb, vb) = sets.remove(b);
            sets[a].0 += mb;
            sets[a].1.extend(vb);
        }
        if sets.len() < n {
            continue;
        }
        sets.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.iter().min().cmp(&b.1.iter().min())));
        let tail: Vec<(f64, Vec<usize>)> = sets.split_off(n - 1);
        let merged = tail.into_iter().fold((0.0, Vec::new()), |mut acc, s| {
            acc.0 += s.0;
            acc.1.extend(s.1);
            acc
        });
        sets.push(merged);

        let fractions: Vec<f64> = sets.iter().map(|s| s.0 / total).collect();
        let min_fraction = fractions.iter().copied().fold(f64::INFINITY, f64::min);
        best_fraction = best_fraction.max(min_fraction);
        if min_fraction < target {
            continue;
        }
        let parts: Vec<VertexSet> = sets.into_iter().map(|s| VertexSet::new(s.1)).collect();
        let separation = min_separation(emb, &parts)?;
        return Ok(Decomposition {
            parts,
            mass_fractions: fractions,
            separation: Some(separation),
            retries: attempt,
            r,
            delta,
            padding,
            core_fraction,
            max_cell_mass,
        });
    }
    Err(Error::DecomposeFailed { retries: DECOMPOSE_RETRY_CAP, best_min_fraction: best_fraction, target })
}

fn min_separation(emb: &SpectralEmbedding, parts: &[VertexSet]) -> Result<f64> {
    let mut best = f64::INFINITY;
    for (p, a) in parts.iter().enumerate() {
        for b in &parts[p + 1..] {
            for u in a.iter() {
                for v in b.iter() {
                    best = best.min(emb.distance(u, v)?);
                }
            }
        }
    }
    Ok(best)
}

/// `d_F(u, S)` for `u ∈ V_F`.
fn distance_to_set(emb: &SpectralEmbedding, u: usize, set: &VertexSet) -> Result<f64> {
    let mut best = f64::INFINITY;
    for v in set.iter() {
        if norm_sqr(&emb.map[v]) > 0.0 {
            best = best.min(emb.distance(u, v)?);
        }
    }
    Ok(best)
}

/// Cut-off `Ψ = ηF` with `η(u) = max(0, 1 − d_F(u, T)/ε)` on `V_F` and `0`
/// elsewhere.
pub fn localize(emb: &SpectralEmbedding, set: &VertexSet, eps: f64) -> Result<Vec<Vec<Complex64>>> {
    if eps.is_nan() || eps <= 0.0 {
        return Err(Error::InvalidArgument("epsilon must be positive".into()));
    }
    let zero = vec![Complex64::new(0.0, 0.0); emb.n];
    let mut psi = vec![zero; emb.map.len()];
    for &u in &emb.support {
        let eta = (1.0 - distance_to_set(emb, u, set)? / eps).max(0.0);
        if eta > 0.0 {
            psi[u] = emb.map[u].iter().map(|z| z * eta).collect();
        }
    }
    Ok(psi)
}

/// Largest `d_F(u,v) · min(‖F(u)‖, ‖F(v)‖) − ‖F(u) − s_uv F(v)‖` over edges
/// inside `V_F`; nonpositive when the edgewise key estimate holds.
pub fn key_estimate_slack(g: &SignedGraph, emb: &SpectralEmbedding) -> Result<f64> {
    let mut worst = f64::NEG_INFINITY;
    for e in g.edges() {
        let (a, b) = (&emb.map[e.u], &emb.map[e.v]);
        if norm_sqr(a) == 0.0 || norm_sqr(b) == 0.0 {
            continue;
        }
        let s = e.signature.to_complex();
        let diff = math::sqrt(a.iter().zip(b).map(|(x, y)| (x - s * y).norm_sqr()).sum());
        worst = worst.max(emb.distance(e.u, e.v)? * norm(a).min(norm(b)) - diff);
    }
    Ok(worst)
}

/// Largest `‖Ψ(u) − s Ψ(v)‖ − (1 + 1/ε) ‖F(u) − s F(v)‖` over all edges.
pub fn localization_slack(g: &SignedGraph, emb: &SpectralEmbedding, psi: &[Vec<Complex64>], eps: f64) -> f64 {
    let gap = |m: &[Vec<Complex64>], u: usize, v: usize, s: Complex64| -> f64 {
        math::sqrt(m[u].iter().zip(&m[v]).map(|(x, y)| (x - s * y).norm_sqr()).sum())
    };
    g.edges()
        .iter()
        .map(|e| {
            let s = e.signature.to_complex();
            gap(psi, e.u, e.v, s) - (1.0 + 1.0 / eps) * gap(&emb.map, e.u, e.v, s)
        })
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Result of [`multiway_cluster`].
#[derive(Debug, Clone)]
pub struct MultiwayReport {
    pub certificates: Vec<ClusterCertificate>,
    pub decomposition: Decomposition,
    /// Coordinate of `Ψ_p` swept for each part.
    pub coordinates: Vec<usize>,
    pub epsilon: f64,
    pub embedding_rayleigh: f64,
    pub lambda_n: f64,
    /// Largest violation of the edgewise key estimate (≤ 0 expected).
    pub key_slack: f64,
    /// Largest violation of the localization estimate over all parts.
    pub localization_slack: f64,
}

impl MultiwayReport {
    pub fn max_ratio(&self) -> f64 {
        self.certificates.iter().map(|c| c.ratio).fold(f64::NEG_INFINITY, f64::max)
    }
}

/// `n` disjoint clusters from the `n` lowest eigenfunctions.
///
/// After [`decompose`], `ε` is half the measured separation between parts
/// (or `1/(8 n^{5/2})` when it is not finite and positive), so the cut-offs
/// `Ψ_p` have disjoint supports. For each `p` the coordinate of `Ψ_p` with
/// least Rayleigh quotient is swept.
pub fn multiway_cluster(g: &SignedGraph, n: usize, seed: u64) -> Result<MultiwayReport> {
    let emb = SpectralEmbedding::new(g, n)?;
    let dec = decompose(&emb, seed)?;
    let eps = match dec.separation {
        Some(s) if s.is_finite() && s > 0.0 => s / 2.0,
        _ => 1.0 / (8.0 * math::powf(n as f64, 2.5)),
    };
    let key_slack = key_estimate_slack(g, &emb)?;
    let mut loc_slack = f64::NEG_INFINITY;
    let mut certificates = Vec::with_capacity(n);
    let mut coordinates = Vec::with_capacity(n);
    for part in &dec.parts {
        let psi = localize(&emb, part, eps)?;
        loc_slack = loc_slack.max(localization_slack(g, &emb, &psi, eps));
        let mut best: Option<(f64, usize, Vec<Complex64>)> = None;
        for i in 0..n {
            let f: Vec<Complex64> = psi.iter().map(|z| z[i]).collect();
            let Ok(r) = spectral::rayleigh(g, &f) else { continue };
            if best.as_ref().is_none_or(|b| r < b.0) {
                best = Some((r, i, f));
            }
        }
        let (_, i, f) = best.ok_or(Error::ZeroFunction)?;
        certificates.push(cheeger::sweep_cut(g, &f)?);
        coordinates.push(i);
    }
    Ok(MultiwayReport {
        certificates,
        epsilon: eps,
        embedding_rayleigh: emb.rayleigh(g)?,
        lambda_n: emb.lambda_n(),
        key_slack,
        localization_slack: loc_slack,
        decomposition: dec,
        coordinates,
    })
}

//! The operator `Δ_μ^s f(u) = (1/μ(u)) Σ_{v∼u} w_uv (f(u) − s_uv f(v))`, its
//! Hermitian symmetrization, eigendecomposition and Rayleigh quotients.
//!
//! `Δ_μ^s = D_μ^{-1}(D − A^s)` is self-adjoint for `⟨f, g⟩_μ` but not a
//! Hermitian matrix; the solver works on the similar matrix
//! `H = D_μ^{-1/2}(D − A^s)D_μ^{-1/2}` and maps eigenvectors back through
//! `D_μ^{-1/2}`.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::graph::SignedGraph;
use crate::linalg::{self, CMatrix, EigenDecomposition};
use crate::math::sqrt;
use crate::{Error, Result};

/// `H = D_μ^{-1/2}(D − A^s)D_μ^{-1/2}`.
#[derive(Debug, Clone)]
pub struct HermitianOperator {
    matrix: CMatrix,
    sqrt_measure: Vec<f64>,
}

impl HermitianOperator {
    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }
}

/// Sorted eigenvalues with `⟨·,·⟩_μ`-orthonormal eigenfunctions.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub values: Vec<f64>,
    /// `vectors[i][u]` is `f_i(u)`.
    pub vectors: Vec<Vec<Complex64>>,
}

impl Spectrum {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

pub fn assemble(g: &SignedGraph) -> HermitianOperator {
    let n = g.num_vertices();
    let sqrt_measure: Vec<f64> = g.measures().iter().map(|&m| sqrt(m)).collect();
    let mut h = CMatrix::zeros(n, n);
    for u in 0..n {
        h[(u, u)] = Complex64::new(g.degree(u) / g.measure(u), 0.0);
    }
    for e in g.edges() {
        let z = e.signature.to_complex() * (-e.weight / (sqrt_measure[e.u] * sqrt_measure[e.v]));
        h[(e.u, e.v)] = z;
        h[(e.v, e.u)] = z.conj();
    }
    HermitianOperator { matrix: h, sqrt_measure }
}

/// Full decomposition via Householder tridiagonalization and implicit QL.
pub fn eigen(op: &HermitianOperator) -> Result<Spectrum> {
    let ed = linalg::hermitian_eigen(&op.matrix)?;
    Ok(to_spectrum(op, ed))
}

/// Same as [`eigen`] but with the cyclic Jacobi solver.
pub fn eigen_jacobi(op: &HermitianOperator) -> Result<Spectrum> {
    let ed = linalg::jacobi_eigen(&op.matrix)?;
    Ok(to_spectrum(op, ed))
}

/// Assemble and decompose in one step.
pub fn spectrum(g: &SignedGraph) -> Result<Spectrum> {
    eigen(&assemble(g))
}

fn to_spectrum(op: &HermitianOperator, ed: EigenDecomposition) -> Spectrum {
    let n = op.dim();
    let measure: Vec<f64> = op.sqrt_measure.iter().map(|s| s * s).collect();
    let mut vectors: Vec<Vec<Complex64>> = (0..n)
        .map(|k| (0..n).map(|u| ed.vectors[(u, k)] / op.sqrt_measure[u]).collect())
        .collect();
    // One modified Gram–Schmidt pass under ⟨·,·⟩_μ.
    for i in 0..n {
        for j in 0..i {
            let (head, tail) = vectors.split_at_mut(i);
            let c = inner(&tail[0], &head[j], &measure);
            for u in 0..n {
                let d = head[j][u] * c;
                tail[0][u] -= d;
            }
        }
        let nrm = sqrt(inner(&vectors[i], &vectors[i], &measure).re);
        if nrm > 0.0 {
            for z in vectors[i].iter_mut() {
                *z /= nrm;
            }
        }
    }
    Spectrum { values: ed.values, vectors }
}

/// `⟨f, g⟩_μ = Σ f(u) conj(g(u)) μ(u)`.
pub fn inner(f: &[Complex64], g: &[Complex64], measure: &[f64]) -> Complex64 {
    f.iter().zip(g).zip(measure).map(|((a, b), m)| a * b.conj() * *m).sum()
}

/// `Δ_μ^s f`.
pub fn apply_laplacian(g: &SignedGraph, f: &[Complex64]) -> Vec<Complex64> {
    (0..g.num_vertices())
        .map(|u| {
            let acc: Complex64 = g.neighbors(u).iter().map(|nb| (f[u] - nb.signature.to_complex() * f[nb.vertex]) * nb.weight).sum();
            acc / g.measure(u)
        })
        .collect()
}

/// `Σ_{{u,v}∈E} w_uv |f(u) − s_uv f(v)|²`.
pub fn dirichlet_energy(g: &SignedGraph, f: &[Complex64]) -> f64 {
    g.edges().iter().map(|e| e.weight * (f[e.u] - e.signature.to_complex() * f[e.v]).norm_sqr()).sum()
}

/// Rayleigh quotient `R_μ^s(f)`.
pub fn rayleigh(g: &SignedGraph, f: &[Complex64]) -> Result<f64> {
    if f.len() != g.num_vertices() {
        return Err(Error::InvalidArgument("function length differs from vertex count".into()));
    }
    let den: f64 = f.iter().zip(g.measures()).map(|(z, m)| z.norm_sqr() * m).sum();
    if den == 0.0 {
        return Err(Error::ZeroFunction);
    }
    Ok(dirichlet_energy(g, f) / den)
}

/// Rayleigh quotient of a vector-valued map `F: V → ℂⁿ`, given as
/// `map[u] = F(u)`.
pub fn rayleigh_map(g: &SignedGraph, map: &[Vec<Complex64>]) -> Result<f64> {
    let num: f64 = g
        .edges()
        .iter()
        .map(|e| {
            let s = e.signature.to_complex();
            e.weight * map[e.u].iter().zip(&map[e.v]).map(|(a, b)| (a - s * b).norm_sqr()).sum::<f64>()
        })
        .sum();
    let den: f64 = map.iter().zip(g.measures()).map(|(z, m)| m * z.iter().map(|c| c.norm_sqr()).sum::<f64>()).sum();
    if den == 0.0 {
        return Err(Error::ZeroFunction);
    }
    Ok(num / den)
}

/// Real symmetric `2N × 2N` form of `H` obtained by writing each
/// `s_uv = a + ib` as the rotation block `[[a, −b], [b, a]]` and each complex
/// function as an `ℝ²`-valued one. Its spectrum is that of `H` with every
/// multiplicity doubled.
pub fn so2_realification(g: &SignedGraph) -> CMatrix {
    let n = g.num_vertices();
    let sm: Vec<f64> = g.measures().iter().map(|&m| sqrt(m)).collect();
    let mut r = CMatrix::zeros(2 * n, 2 * n);
    let re = |x: f64| Complex64::new(x, 0.0);
    for u in 0..n {
        let d = g.degree(u) / g.measure(u);
        r[(2 * u, 2 * u)] = re(d);
        r[(2 * u + 1, 2 * u + 1)] = re(d);
    }
    for e in g.edges() {
        let s = e.signature.to_complex();
        let c = -e.weight / (sm[e.u] * sm[e.v]);
        let (a, b) = (s.re * c, s.im * c);
        let block = [[a, -b], [b, a]];
        for i in 0..2 {
            for j in 0..2 {
                r[(2 * e.u + i, 2 * e.v + j)] = re(block[i][j]);
                r[(2 * e.v + j, 2 * e.u + i)] = re(block[i][j]);
            }
        }
    }
    r
}

/// Sorted eigenvalues of [`so2_realification`].
pub fn realified_spectrum(g: &SignedGraph) -> Result<Vec<f64>> {
    Ok(linalg::hermitian_eigen(&so2_realification(g))?.values)
}

/// Largest residual `‖Δf_i − λ_i f_i‖_μ` over all eigenpairs.
pub fn max_residual(g: &SignedGraph, sp: &Spectrum) -> f64 {
    let mut worst: f64 = 0.0;
    for (lambda, f) in sp.values.iter().zip(&sp.vectors) {
        let lf = apply_laplacian(g, f);
        let diff: Vec<Complex64> = lf.iter().zip(f).map(|(a, b)| a - b * *lambda).collect();
        worst = worst.max(sqrt(inner(&diff, &diff, g.measures()).re));
    }
    worst
}

/// Largest deviation of the `⟨·,·⟩_μ` Gram matrix from the identity.
pub fn gram_defect(g: &SignedGraph, sp: &Spectrum) -> f64 {
    let mut worst: f64 = 0.0;
    for (i, fi) in sp.vectors.iter().enumerate() {
        for (j, fj) in sp.vectors.iter().enumerate() {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((inner(fi, fj, g.measures()) - Complex64::new(target, 0.0)).norm());
        }
    }
    worst
}

/// Eigenvector of the smallest eigenvalue, or `None` for an empty graph.
pub fn lowest_eigenvector(g: &SignedGraph) -> Result<Option<(f64, Vec<Complex64>)>> {
    let sp = spectrum(g)?;
    Ok(sp.values.first().copied().map(|l| (l, sp.vectors[0].clone())))
}

pub(crate) fn zero_vec(n: usize) -> Vec<Complex64> {
    vec![Complex64::new(0.0, 0.0); n]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{Edge, Measure};
    use crate::group::{GroupElement, SignatureGroup};

    fn single_edge(s: GroupElement) -> SignedGraph {
        SignedGraph::new(2, s.group(), vec![Edge::new(0, 1, 1.0, s)], Measure::Unit).unwrap()
    }

    fn c4_one_flip() -> SignedGraph {
        let k = 2;
        let edges = vec![
            Edge::new(0, 1, 1.0, GroupElement::cyclic(k, 1)),
            Edge::new(1, 2, 1.0, GroupElement::cyclic(k, 0)),
            Edge::new(2, 3, 1.0, GroupElement::cyclic(k, 0)),
            Edge::new(3, 0, 1.0, GroupElement::cyclic(k, 0)),
        ];
        SignedGraph::new(4, SignatureGroup::Cyclic(k), edges, Measure::Degree).unwrap()
    }

    #[test]
    fn assemble_single_edge() {
        let h = assemble(&single_edge(GroupElement::cyclic(1, 0)));
        let m = h.matrix();
        assert_eq!(m[(0, 0)], Complex64::new(1.0, 0.0));
        assert_eq!(m[(0, 1)], Complex64::new(-1.0, 0.0));
        assert_eq!(m[(1, 0)], Complex64::new(-1.0, 0.0));
        let h = assemble(&single_edge(GroupElement::circle(core::f64::consts::FRAC_PI_2)));
        assert!((h.matrix()[(0, 1)] - Complex64::new(0.0, -1.0)).norm() < 1e-15);
        assert!((h.matrix()[(1, 0)] - Complex64::new(0.0, 1.0)).norm() < 1e-15);
        assert!(h.matrix().hermitian_defect() < 1e-12);
    }

    #[test]
    fn single_edge_spectrum() {
        let g = single_edge(GroupElement::cyclic(1, 0));
        let sp = spectrum(&g).unwrap();
        assert!(sp.values[0].abs() < 1e-15);
        assert!((sp.values[1] - 2.0).abs() < 1e-15);
        let r = realified_spectrum(&g).unwrap();
        for (x, y) in r.iter().zip([0.0, 0.0, 2.0, 2.0]) {
            assert!((x - y).abs() < 1e-12);
        }
        assert_eq!(so2_realification(&g).rows(), 4);
    }

    #[test]
    fn c4_one_negative_edge() {
        // Signed circulant oracle: eigenvalues 1 − cos((2j+1)π/4).
        let g = c4_one_flip();
        let sp = spectrum(&g).unwrap();
        let mut expect: Vec<f64> = (0..4).map(|j| 1.0 - libm::cos((2 * j + 1) as f64 * core::f64::consts::PI / 4.0)).collect();
        expect.sort_by(f64::total_cmp);
        for (x, y) in sp.values.iter().zip(&expect) {
            assert!((x - y).abs() < 1e-12, "{x} vs {y}");
        }
        assert!((sp.values[0] - (1.0 - 1.0 / libm::sqrt(2.0))).abs() < 1e-12);
        assert!(max_residual(&g, &sp) < 1e-10);
        assert!(gram_defect(&g, &sp) < 1e-10);
        let re = realified_spectrum(&g).unwrap();
        assert!((re[0] - sp.values[0]).abs() < 1e-9 && (re[1] - sp.values[0]).abs() < 1e-9);
    }

    #[test]
    fn rayleigh_examples() {
        let g = single_edge(GroupElement::cyclic(1, 0));
        let one = Complex64::new(1.0, 0.0);
        assert_eq!(rayleigh(&g, &[one, one]).unwrap(), 0.0);
        assert_eq!(rayleigh(&g, &[one, -one]).unwrap(), 2.0);
        assert_eq!(rayleigh(&g, &zero_vec(2)), Err(Error::ZeroFunction));
        let g = c4_one_flip();
        let sp = spectrum(&g).unwrap();
        for (l, f) in sp.values.iter().zip(&sp.vectors) {
            assert!((rayleigh(&g, f).unwrap() - l).abs() < 1e-9);
        }
    }

    #[test]
    fn eigen_is_deterministic() {
        let g = c4_one_flip();
        let a = spectrum(&g).unwrap();
        let b = spectrum(&g).unwrap();
        assert_eq!(a.values, b.values);
        assert_eq!(a.vectors, b.vectors);
    }
}

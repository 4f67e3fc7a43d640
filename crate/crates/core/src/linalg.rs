//! Dense Hermitian eigensolvers.
//!
//! [`hermitian_eigen`] reduces the matrix to real symmetric tridiagonal form
//! with complex Householder reflections and a diagonal phase change, then runs
//! implicit-shift QL with accumulated rotations. [`jacobi_eigen`] is a cyclic
//! complex Jacobi method used as an independent cross-check on small inputs.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::math::{hypot, sqrt};
use crate::{Error, Result};

/// QL iterations allowed per eigenvalue.
pub const QL_ITERATION_CAP: usize = 64;

/// Sweeps allowed in [`jacobi_eigen`].
pub const JACOBI_SWEEP_CAP: usize = 100;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

/// Row-major dense complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMatrix { rows, cols, data: vec![ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = CMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        CMatrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        CMatrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn mul_vec(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(x.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let row = &self.data[i * self.cols..(i + 1) * self.cols];
                row.iter().zip(x).map(|(a, b)| a * b).sum()
            })
            .collect()
    }

    /// Largest `|A_ij − conj(A_ji)|`.
    pub fn hermitian_defect(&self) -> f64 {
        let mut m: f64 = 0.0;
        for i in 0..self.rows {
            for j in 0..self.cols {
                m = m.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        m
    }

    fn frobenius(&self) -> f64 {
        sqrt(self.data.iter().map(|z| z.norm_sqr()).sum())
    }
}

impl core::ops::Index<(usize, usize)> for CMatrix {
    type Output = Complex64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl core::ops::IndexMut<(usize, usize)> for CMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Eigenvalues in ascending order and the matching orthonormal eigenvectors
/// stored as matrix columns.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

/// Full eigendecomposition of a Hermitian matrix.
///
/// Each eigenvector is scaled so that its first entry of (near-)maximal
/// modulus is real and positive, which makes the output deterministic for
/// simple eigenvalues.
pub fn hermitian_eigen(a: &CMatrix) -> Result<EigenDecomposition> {
    let n = a.rows();
    assert_eq!(n, a.cols(), "matrix must be square");
    if n == 0 {
        return Ok(EigenDecomposition { values: Vec::new(), vectors: CMatrix::zeros(0, 0) });
    }
    let (diag, sub, q) = tridiagonalize(a);

    // Phase change D with D* T D real: d_0 = 1, d_{j+1} = d_j e_j / |e_j|.
    let mut phase = vec![ONE; n];
    let mut offdiag = vec![0.0; n];
    for j in 0..n - 1 {
        let r = sub[j].norm();
        offdiag[j] = r;
        phase[j + 1] = if r > 0.0 { phase[j] * (sub[j] / r) } else { phase[j] };
    }

    let mut d = diag;
    let mut z = vec![0.0; n * n];
    for i in 0..n {
        z[i * n + i] = 1.0;
    }
    tql2(&mut d, &mut offdiag, &mut z, n)?;

    // Eigenvectors X = Q D Z.
    let mut vectors = CMatrix::zeros(n, n);
    for r in 0..n {
        for c in 0..n {
            let mut acc = ZERO;
            for j in 0..n {
                let zjc = z[j * n + c];
                if zjc != 0.0 {
                    acc += q[(r, j)] * phase[j] * zjc;
                }
            }
            vectors[(r, c)] = acc;
        }
    }
    normalize_phases(&mut vectors);
    Ok(EigenDecomposition { values: d, vectors })
}

/// Householder reduction `A = Q T Q*` with `T` Hermitian tridiagonal.
/// Returns the diagonal of `T`, its subdiagonal `T[j+1, j]`, and `Q`.
fn tridiagonalize(a: &CMatrix) -> (Vec<f64>, Vec<Complex64>, CMatrix) {
    let n = a.rows();
    let mut m = a.clone();
    let mut q = CMatrix::identity(n);
    let mut v = vec![ZERO; n];
    let mut p = vec![ZERO; n];
    for j in 0..n.saturating_sub(2) {
        let lo = j + 1;
        let norm_x = sqrt((lo..n).map(|i| m[(i, j)].norm_sqr()).sum());
        if norm_x == 0.0 {
            continue;
        }
        let x0 = m[(lo, j)];
        let unit = if x0.norm() > 0.0 { x0 / x0.norm() } else { ONE };
        let alpha = -unit * norm_x;
        v.fill(ZERO);
        v[lo] = x0 - alpha;
        for i in lo + 1..n {
            v[i] = m[(i, j)];
        }
        let vnorm2: f64 = (lo..n).map(|i| v[i].norm_sqr()).sum();
        if vnorm2 == 0.0 {
            continue;
        }
        let beta = 2.0 / vnorm2;

        // Column j and row j are fixed by the reflection directly.
        m[(lo, j)] = alpha;
        m[(j, lo)] = alpha.conj();
        for i in lo + 1..n {
            m[(i, j)] = ZERO;
            m[(j, i)] = ZERO;
        }

        // Trailing block: M ← M − v q* − q v*, p = βMv, q = p − (β v*p / 2) v.
        for i in lo..n {
            let mut acc = ZERO;
            for k in lo..n {
                acc += m[(i, k)] * v[k];
            }
            p[i] = acc * beta;
        }
        let vp: Complex64 = (lo..n).map(|i| v[i].conj() * p[i]).sum();
        let kappa = beta * vp.re / 2.0;
        for i in lo..n {
            p[i] -= v[i] * kappa;
        }
        for i in lo..n {
            for k in lo..n {
                let upd = v[i] * p[k].conj() + p[i] * v[k].conj();
                m[(i, k)] -= upd;
            }
        }

        // Q ← Q H, H = I − β v v*.
        for r in 0..n {
            let mut acc = ZERO;
            for k in lo..n {
                acc += q[(r, k)] * v[k];
            }
            let s = acc * beta;
            for k in lo..n {
                let upd = s * v[k].conj();
                q[(r, k)] -= upd;
            }
        }
    }
    let diag = (0..n).map(|i| m[(i, i)].re).collect();
    let sub = (0..n.saturating_sub(1)).map(|i| m[(i + 1, i)]).collect();
    (diag, sub, q)
}

/// Implicit-shift QL on a real symmetric tridiagonal matrix.
///
/// `d` holds the diagonal, `e[0..n-1]` the subdiagonal (`e[n-1]` is
/// scratch). On return `d` is sorted ascending and the columns of the
/// row-major `z` are the accumulated eigenvectors.
fn tql2(d: &mut [f64], e: &mut [f64], z: &mut [f64], n: usize) -> Result<()> {
    if n == 0 {
        return Ok(());
    }
    e[n - 1] = 0.0;
    let eps = f64::EPSILON;
    let mut f = 0.0;
    let mut tst1: f64 = 0.0;
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n {
            if e[m].abs() <= eps * tst1 {
                break;
            }
            m += 1;
        }
        if m == n {
            m = n - 1;
        }
        if m > l {
            let mut iter = 0;
            loop {
                iter += 1;
                if iter > QL_ITERATION_CAP {
                    return Err(Error::NoConvergence(QL_ITERATION_CAP));
                }
                let g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = hypot(p, 1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for di in d.iter_mut().take(n).skip(l + 2) {
                    *di -= h;
                }
                f += h;

                p = d[m];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    let g = c * e[i];
                    h = c * p;
                    r = hypot(p, e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    for k in 0..n {
                        let zk1 = z[k * n + i + 1];
                        let zk = z[k * n + i];
                        z[k * n + i + 1] = s * zk + c * zk1;
                        z[k * n + i] = c * zk - s * zk1;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }

    // Selection sort keeps the column swaps explicit.
    for i in 0..n.saturating_sub(1) {
        let mut k = i;
        let mut p = d[i];
        for (j, &dj) in d.iter().enumerate().skip(i + 1) {
            if dj < p {
                k = j;
                p = dj;
            }
        }
        if k != i {
            d[k] = d[i];
            d[i] = p;
            for r in 0..n {
                z.swap(r * n + i, r * n + k);
            }
        }
    }
    Ok(())
}

/// Cyclic complex Jacobi eigensolver. Intended for `n ≤ 64`.
pub fn jacobi_eigen(a: &CMatrix) -> Result<EigenDecomposition> {
    let n = a.rows();
    assert_eq!(n, a.cols(), "matrix must be square");
    let mut m = a.clone();
    for i in 0..n {
        m[(i, i)] = Complex64::new(m[(i, i)].re, 0.0);
    }
    let mut v = CMatrix::identity(n);
    let scale = m.frobenius().max(f64::MIN_POSITIVE);
    let mut converged = n < 2;
    for _ in 0..JACOBI_SWEEP_CAP {
        let off: f64 = (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j))).map(|(i, j)| m[(i, j)].norm_sqr()).sum();
        if sqrt(off) <= 1e-15 * scale {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[(p, q)];
                let b = apq.norm();
                if b <= 1e-300 {
                    continue;
                }
                // U = diag(1, e^{-iφ}) R with R the real rotation that
                // diagonalizes [[a_pp, |a_pq|], [|a_pq|, a_qq]].
                let ph = apq.conj() / b;
                let app = m[(p, p)].re;
                let aqq = m[(q, q)].re;
                let theta = (aqq - app) / (2.0 * b);
                let t = if theta >= 0.0 { 1.0 / (theta + hypot(theta, 1.0)) } else { -1.0 / (-theta + hypot(theta, 1.0)) };
                let c = 1.0 / hypot(t, 1.0);
                let s = t * c;
                let upp = Complex64::new(c, 0.0);
                let upq = Complex64::new(s, 0.0);
                let uqp = ph * (-s);
                let uqq = ph * c;
                for r in 0..n {
                    let xp = m[(r, p)];
                    let xq = m[(r, q)];
                    m[(r, p)] = xp * upp + xq * uqp;
                    m[(r, q)] = xp * upq + xq * uqq;
                }
                for col in 0..n {
                    let xp = m[(p, col)];
                    let xq = m[(q, col)];
                    m[(p, col)] = upp.conj() * xp + uqp.conj() * xq;
                    m[(q, col)] = upq.conj() * xp + uqq.conj() * xq;
                }
                m[(p, q)] = ZERO;
                m[(q, p)] = ZERO;
                m[(p, p)] = Complex64::new(m[(p, p)].re, 0.0);
                m[(q, q)] = Complex64::new(m[(q, q)].re, 0.0);
                for r in 0..n {
                    let xp = v[(r, p)];
                    let xq = v[(r, q)];
                    v[(r, p)] = xp * upp + xq * uqp;
                    v[(r, q)] = xp * upq + xq * uqq;
                }
            }
        }
    }
    if !converged {
        return Err(Error::NoConvergence(JACOBI_SWEEP_CAP));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(i, i)].re.total_cmp(&m[(j, j)].re).then(i.cmp(&j)));
    let values = order.iter().map(|&i| m[(i, i)].re).collect();
    let mut vectors = CMatrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    normalize_phases(&mut vectors);
    Ok(EigenDecomposition { values, vectors })
}

/// Rotates each column so its first entry of near-maximal modulus is real and
/// positive.
pub(crate) fn normalize_phases(x: &mut CMatrix) {
    let n = x.rows();
    for c in 0..x.cols() {
        let max = (0..n).map(|r| x[(r, c)].norm()).fold(0.0, f64::max);
        if max == 0.0 {
            continue;
        }
        let pivot = (0..n).find(|&r| x[(r, c)].norm() >= max * (1.0 - 1e-8)).unwrap_or(0);
        let z = x[(pivot, c)];
        let rot = z.conj() / z.norm();
        for r in 0..n {
            x[(r, c)] *= rot;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn check(a: &CMatrix, ed: &EigenDecomposition, tol: f64) {
        let n = a.rows();
        for k in 0..n {
            let x = ed.vectors.column(k);
            let ax = a.mul_vec(&x);
            let res: f64 = ax.iter().zip(&x).map(|(y, xi)| (y - xi * ed.values[k]).norm_sqr()).sum();
            assert!(sqrt(res) < tol, "residual {} for eigenpair {k}", sqrt(res));
            for l in 0..n {
                let y = ed.vectors.column(l);
                let ip: Complex64 = x.iter().zip(&y).map(|(a, b)| a * b.conj()).sum();
                let expect = if k == l { 1.0 } else { 0.0 };
                assert!((ip - c(expect, 0.0)).norm() < tol);
            }
        }
        for w in ed.values.windows(2) {
            assert!(w[0] <= w[1]);
        }
    }

    fn random_hermitian(n: usize, entries: &[(f64, f64)]) -> CMatrix {
        let mut a = CMatrix::zeros(n, n);
        let mut it = entries.iter().cycle();
        for i in 0..n {
            let &(d, _) = it.next().unwrap();
            a[(i, i)] = c(d, 0.0);
            for j in i + 1..n {
                let &(re, im) = it.next().unwrap();
                a[(i, j)] = c(re, im);
                a[(j, i)] = c(re, -im);
            }
        }
        a
    }

    #[test]
    fn two_by_two_closed_form() {
        let a = CMatrix::from_fn(2, 2, |i, j| if i == j { c(1.0, 0.0) } else { c(-1.0, 0.0) });
        let ed = hermitian_eigen(&a).unwrap();
        assert!(ed.values[0].abs() < 1e-15);
        assert!((ed.values[1] - 2.0).abs() < 1e-15);
        check(&a, &ed, 1e-13);
    }

    #[test]
    fn diagonal_and_empty() {
        let a = CMatrix::from_fn(3, 3, |i, j| if i == j { c([3.0, -1.0, 2.0][i], 0.0) } else { c(0.0, 0.0) });
        let ed = hermitian_eigen(&a).unwrap();
        assert_eq!(ed.values, vec![-1.0, 2.0, 3.0]);
        check(&a, &ed, 1e-14);
        assert!(hermitian_eigen(&CMatrix::zeros(0, 0)).unwrap().values.is_empty());
        let one = CMatrix::from_fn(1, 1, |_, _| c(4.0, 0.0));
        assert_eq!(hermitian_eigen(&one).unwrap().values, vec![4.0]);
    }

    #[test]
    fn degenerate_spectrum() {
        // Zero matrix plus a rank-one block: eigenvalue 0 with multiplicity 4.
        let u = [c(0.5, 0.5), c(0.0, 0.5), c(0.5, 0.0), c(0.0, 0.0), c(0.0, 0.0)];
        let a = CMatrix::from_fn(5, 5, |i, j| u[i] * u[j].conj());
        let ed = hermitian_eigen(&a).unwrap();
        check(&a, &ed, 1e-13);
        // ‖u‖² = 1
        assert!((ed.values[4] - 1.0).abs() < 1e-14);
        let jd = jacobi_eigen(&a).unwrap();
        check(&a, &jd, 1e-13);
    }

    proptest! {
        #[test]
        fn householder_ql_matches_jacobi(n in 1usize..12, entries in proptest::collection::vec((-2.0f64..2.0, -2.0f64..2.0), 80)) {
            let a = random_hermitian(n, &entries);
            let ed = hermitian_eigen(&a).unwrap();
            let jd = jacobi_eigen(&a).unwrap();
            check(&a, &ed, 1e-11);
            check(&a, &jd, 1e-11);
            for (x, y) in ed.values.iter().zip(&jd.values) {
                prop_assert!((x - y).abs() < 1e-11);
            }
        }
    }
}

//! Dense matrices, the grounded conjugate-gradient solver and Dirichlet problems.
//!
//! "Grounded" means a set of vertices is clamped to 0 and the Laplacian is
//! solved on the remaining (active) vertices. Grounding at `{o}` fixes the
//! additive constant of the energy space; grounding at the frontier gives the
//! absorbing walk.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

use crate::graph::ConductanceGraph;
use crate::math::{dot, norm2, sqrt};
use crate::{Error, Result};

/// Largest active set handled by the dense routes.
pub const DENSE_CAP: usize = 2000;

/// Row-major dense matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        DenseMatrix { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_row_major(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch { expected: rows * cols, found: data.len() });
        }
        Ok(DenseMatrix { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::DimensionMismatch { expected: cols, found: r.len() });
            }
            data.extend_from_slice(r);
        }
        Ok(DenseMatrix { rows: rows.len(), cols, data })
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn scale(&mut self, s: f64) {
        self.data.iter_mut().for_each(|v| *v *= s);
    }

    pub fn max_abs(&self) -> f64 {
        crate::math::max_abs(&self.data)
    }

    pub fn transpose(&self) -> DenseMatrix {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn matmul(&self, other: &DenseMatrix) -> Result<DenseMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch { expected: self.cols, found: other.rows });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            let orow = &mut out.data[i * other.cols..(i + 1) * other.cols];
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == 0.0 {
                    continue;
                }
                let brow = &other.data[k * other.cols..(k + 1) * other.cols];
                for (o, b) in orow.iter_mut().zip(brow) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[f64]) -> Result<Vec<f64>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch { expected: self.cols, found: v.len() });
        }
        Ok((0..self.rows).map(|i| dot(self.row(i), v)).collect())
    }

    /// Largest entrywise deviation from the identity.
    pub fn identity_residual(&self) -> f64 {
        let mut r = 0.0_f64;
        for i in 0..self.rows {
            for j in 0..self.cols {
                let want = if i == j { 1.0 } else { 0.0 };
                r = r.max((self[(i, j)] - want).abs());
            }
        }
        r
    }

    /// Largest `|A_ij − A_ji|`.
    pub fn symmetry_residual(&self) -> f64 {
        let mut r = 0.0_f64;
        for i in 0..self.rows.min(self.cols) {
            for j in 0..i {
                r = r.max((self[(i, j)] - self[(j, i)]).abs());
            }
        }
        r
    }

    /// LU factorization with partial pivoting.
    pub fn lu(&self) -> Result<Lu> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch { expected: self.rows, found: self.cols });
        }
        let n = self.rows;
        let mut a = self.data.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let scale = self.max_abs().max(f64::MIN_POSITIVE);
        for k in 0..n {
            let p = (k..n)
                .max_by(|&i, &j| a[i * n + k].abs().total_cmp(&a[j * n + k].abs()))
                .unwrap_or(k);
            if a[p * n + k].abs() <= 1e-14 * scale {
                return Err(Error::Degenerate("singular matrix in LU factorization".into()));
            }
            if p != k {
                for j in 0..n {
                    a.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
            }
            let pivot = a[k * n + k];
            for i in k + 1..n {
                let f = a[i * n + k] / pivot;
                a[i * n + k] = f;
                if f != 0.0 {
                    for j in k + 1..n {
                        a[i * n + j] -= f * a[k * n + j];
                    }
                }
            }
        }
        Ok(Lu { n, a, perm })
    }

    /// Eigenvalues of a symmetric matrix (cyclic Jacobi), ascending.
    pub fn symmetric_eigenvalues(&self) -> Result<Vec<f64>> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch { expected: self.rows, found: self.cols });
        }
        let n = self.rows;
        let mut a = self.clone();
        for _sweep in 0..100 {
            let off: f64 = (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
                .map(|(i, j)| a[(i, j)] * a[(i, j)])
                .sum();
            let diag: f64 = (0..n).map(|i| a[(i, i)] * a[(i, i)]).sum();
            if off <= 1e-30 * diag.max(f64::MIN_POSITIVE) {
                break;
            }
            for p in 0..n {
                for q in p + 1..n {
                    let apq = a[(p, q)];
                    if apq == 0.0 {
                        continue;
                    }
                    let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                    let t = theta.signum() / (theta.abs() + sqrt(theta * theta + 1.0));
                    let t = if theta == 0.0 { 1.0 } else { t };
                    let c = 1.0 / sqrt(t * t + 1.0);
                    let s = t * c;
                    for k in 0..n {
                        let akp = a[(k, p)];
                        let akq = a[(k, q)];
                        a[(k, p)] = c * akp - s * akq;
                        a[(k, q)] = s * akp + c * akq;
                    }
                    for k in 0..n {
                        let apk = a[(p, k)];
                        let aqk = a[(q, k)];
                        a[(p, k)] = c * apk - s * aqk;
                        a[(q, k)] = s * apk + c * aqk;
                    }
                }
            }
        }
        let mut ev: Vec<f64> = (0..n).map(|i| a[(i, i)]).collect();
        ev.sort_by(f64::total_cmp);
        Ok(ev)
    }
}

impl Index<(usize, usize)> for DenseMatrix {
    type Output = f64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for DenseMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Packed LU factors, `P A = L U`.
#[derive(Clone, Debug)]
pub struct Lu {
    n: usize,
    a: Vec<f64>,
    perm: Vec<usize>,
}

impl Lu {
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut x: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let s: f64 = (0..i).map(|j| self.a[i * n + j] * x[j]).sum();
            x[i] -= s;
        }
        for i in (0..n).rev() {
            let s: f64 = (i + 1..n).map(|j| self.a[i * n + j] * x[j]).sum();
            x[i] = (x[i] - s) / self.a[i * n + i];
        }
        x
    }

    pub fn inverse(&self) -> DenseMatrix {
        let n = self.n;
        let mut inv = DenseMatrix::zeros(n, n);
        let mut e = vec![0.0; n];
        for j in 0..n {
            e[j] = 1.0;
            let col = self.solve(&e);
            e[j] = 0.0;
            for i in 0..n {
                inv[(i, j)] = col[i];
            }
        }
        inv
    }
}

/// Outcome of a conjugate-gradient solve.
#[derive(Clone, Debug, PartialEq)]
pub struct Solution {
    /// Solution on all vertices, zero on the ground set.
    pub x: Vec<f64>,
    pub iterations: usize,
    /// Final relative residual `‖b − Δx‖ / ‖b‖` on the active vertices.
    pub residual: f64,
}

/// `(Δu)(x)` at a single vertex.
#[inline]
pub(crate) fn laplacian_at(graph: &ConductanceGraph, u: &[f64], x: usize) -> f64 {
    graph.neighbors(x).map(|(y, c)| c * (u[x] - u[y])).sum()
}

/// Rounding error bound of evaluating `Δx` on the active vertices:
/// `(d_max + 2)·ε·‖ |Δ||x| ‖₂`.
fn rounding_floor(graph: &ConductanceGraph, ground: &[bool], x: &[f64]) -> f64 {
    let mut d_max = 0usize;
    let abs_lx: Vec<f64> = (0..x.len())
        .map(|i| {
            if ground[i] {
                return 0.0;
            }
            d_max = d_max.max(graph.neighbors(i).count());
            graph.neighbors(i).map(|(j, c)| c * (x[i].abs() + x[j].abs())).sum()
        })
        .collect();
    (d_max as f64 + 2.0) * f64::EPSILON * norm2(&abs_lx)
}

/// Solves `Δx = b` on the vertices outside `ground`, with `x = 0` on `ground`,
/// by Jacobi-preconditioned conjugate gradients. Entries of `b` on the ground
/// set are ignored. Iteration cap `20·N`. A tolerance below the rounding
/// floor of the residual itself is met once the true residual reaches that floor.
pub fn solve_grounded(graph: &ConductanceGraph, ground: &[bool], b: &[f64], tol: f64) -> Result<Solution> {
    let n = graph.num_vertices();
    if ground.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: ground.len() });
    }
    if b.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: b.len() });
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter("solver tolerance must be positive".into()));
    }
    if !ground.iter().any(|&g| g) {
        return Err(Error::InvalidParameter("grounded solve needs a nonempty ground set".into()));
    }
    let mask = |v: &mut [f64]| {
        for (vi, &g) in v.iter_mut().zip(ground) {
            if g {
                *vi = 0.0;
            }
        }
    };
    let mut rhs = b.to_vec();
    mask(&mut rhs);
    let bnorm = norm2(&rhs);
    let mut x = vec![0.0; n];
    if bnorm == 0.0 {
        return Ok(Solution { x, iterations: 0, residual: 0.0 });
    }
    let inv_diag: Vec<f64> = (0..n).map(|i| if ground[i] { 0.0 } else { 1.0 / graph.degree(i) }).collect();
    let apply = |p: &[f64], out: &mut [f64]| {
        for i in 0..n {
            out[i] = if ground[i] { 0.0 } else { laplacian_at(graph, p, i) };
        }
    };
    let mut r = rhs;
    let mut z: Vec<f64> = r.iter().zip(&inv_diag).map(|(a, b)| a * b).collect();
    let mut p = z.clone();
    let mut ap = vec![0.0; n];
    let mut rz = dot(&r, &z);
    let cap = (20 * n).max(50);
    let mut residual = 1.0;
    for it in 1..=cap {
        apply(&p, &mut ap);
        let pap = dot(&p, &ap);
        if !(pap > 0.0) {
            break;
        }
        let alpha = rz / pap;
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        residual = norm2(&r) / bnorm;
        if residual <= tol || residual < 1e-10 {
            // Confirm against the true residual to rule out recurrence drift.
            let mut ax = vec![0.0; n];
            apply(&x, &mut ax);
            let true_res: Vec<f64> = (0..n).map(|i| if ground[i] { 0.0 } else { b[i] - ax[i] }).collect();
            let tr = norm2(&true_res) / bnorm;
            if tr <= tol.max(rounding_floor(graph, ground, &x) / bnorm) {
                return Ok(Solution { x, iterations: it, residual: tr });
            }
            if residual <= tol {
                r = true_res;
            }
        }
        for i in 0..n {
            z[i] = r[i] * inv_diag[i];
        }
        let rz_new = dot(&r, &z);
        let beta = rz_new / rz;
        rz = rz_new;
        for i in 0..n {
            p[i] = z[i] + beta * p[i];
        }
    }
    Err(Error::NotConverged { iterations: cap, residual })
}

/// Harmonic extension: `h = f` on the `fixed` set, `Δh = 0` elsewhere.
pub fn harmonic_extension(graph: &ConductanceGraph, fixed: &[bool], values: &[f64], tol: f64) -> Result<Vec<f64>> {
    let n = graph.num_vertices();
    if values.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: values.len() });
    }
    let base: Vec<f64> = (0..n).map(|i| if fixed[i] { values[i] } else { 0.0 }).collect();
    let rhs: Vec<f64> = (0..n).map(|i| -laplacian_at(graph, &base, i)).collect();
    let sol = solve_grounded(graph, fixed, &rhs, tol)?;
    Ok(base.iter().zip(&sol.x).map(|(a, b)| a + b).collect())
}

/// Dense factorization of the Laplacian restricted to the active vertices.
#[derive(Clone, Debug)]
pub struct GroundedFactor {
    active: Vec<usize>,
    position: Vec<usize>,
    lu: Lu,
}

impl GroundedFactor {
    pub fn new(graph: &ConductanceGraph, ground: &[bool]) -> Result<Self> {
        let n = graph.num_vertices();
        if ground.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: ground.len() });
        }
        let active: Vec<usize> = (0..n).filter(|&i| !ground[i]).collect();
        if active.len() > DENSE_CAP {
            return Err(Error::SizeCapExceeded { vertices: active.len(), cap: DENSE_CAP });
        }
        if active.len() == n {
            return Err(Error::InvalidParameter("grounded factor needs a nonempty ground set".into()));
        }
        let mut position = vec![usize::MAX; n];
        for (k, &v) in active.iter().enumerate() {
            position[v] = k;
        }
        let m = active.len();
        let mut a = DenseMatrix::zeros(m, m);
        for (k, &v) in active.iter().enumerate() {
            a[(k, k)] = graph.degree(v);
            for (w, c) in graph.neighbors(v) {
                let j = position[w];
                if j != usize::MAX {
                    a[(k, j)] -= c;
                }
            }
        }
        let lu = if m == 0 { DenseMatrix::zeros(0, 0).lu()? } else { a.lu()? };
        Ok(GroundedFactor { active, position, lu })
    }

    pub fn active(&self) -> &[usize] {
        &self.active
    }

    /// Position of vertex `v` among the active vertices.
    pub fn position(&self, v: usize) -> Option<usize> {
        self.position.get(v).copied().filter(|&p| p != usize::MAX)
    }

    /// Solves with `b` given on all vertices; returns a full vector, zero on ground.
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let rhs: Vec<f64> = self.active.iter().map(|&v| b[v]).collect();
        let y = self.lu.solve(&rhs);
        let mut x = vec![0.0; self.position.len()];
        for (k, &v) in self.active.iter().enumerate() {
            x[v] = y[k];
        }
        x
    }

    /// Inverse of the reduced Laplacian, indexed by active position.
    pub fn inverse(&self) -> DenseMatrix {
        self.lu.inverse()
    }
}

//! Green's functions: the dipole Gram matrix `K(x,y) = ⟨v_x, v_y⟩_E`, the
//! random-walk series `G_P = Σ Pⁿ`, and closed forms for the binomial chain,
//! the `N`-ary tree and Bratteli level products.

use alloc::vec;
use alloc::vec::Vec;

use crate::energy::{base_dipoles, energy_form, EnergyVector};
use crate::graph::{BratteliDiagram, TruncatedGraph};
use crate::linalg::{DenseMatrix, GroundedFactor, DENSE_CAP};
use crate::math::{powi, sqrt};
use crate::{Error, Result};

/// Vertices clamped to zero (absorbing for the walk).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Ground {
    /// `{o}`: the energy-space gauge.
    BasePoint,
    /// The truncation frontier: the absorbing walk.
    Frontier,
    BasePointAndFrontier,
}

impl Ground {
    pub fn mask(self, trunc: &TruncatedGraph) -> Result<Vec<bool>> {
        let mut m = vec![false; trunc.num_vertices()];
        if matches!(self, Ground::Frontier | Ground::BasePointAndFrontier) {
            if trunc.frontier().is_empty() {
                return Err(Error::NoFrontier);
            }
            for &b in trunc.frontier() {
                m[b] = true;
            }
        }
        if matches!(self, Ground::BasePoint | Ground::BasePointAndFrontier) {
            m[trunc.base_point().0] = true;
        }
        Ok(m)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GreensMethod {
    Gram,
    Neumann,
    DenseInverse,
}

/// Green's matrix over the active (non-grounded) vertices.
#[derive(Clone, Debug, PartialEq)]
pub struct GreensMatrix {
    /// Active vertices in row order.
    pub vertices: Vec<usize>,
    pub matrix: DenseMatrix,
    pub ground: Ground,
    pub method: GreensMethod,
}

impl GreensMatrix {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    fn position(&self, v: usize) -> Option<usize> {
        self.vertices.binary_search(&v).ok()
    }

    /// `K(x, y)`; zero when either vertex is grounded.
    pub fn get(&self, x: usize, y: usize) -> f64 {
        match (self.position(x), self.position(y)) {
            (Some(i), Some(j)) => self.matrix[(i, j)],
            _ => 0.0,
        }
    }

    pub fn symmetry_residual(&self) -> f64 {
        self.matrix.symmetry_residual()
    }

    /// Smallest eigenvalue of the symmetrized matrix.
    pub fn min_eigenvalue(&self) -> Result<f64> {
        let mut s = self.matrix.clone();
        for i in 0..s.rows() {
            for j in 0..i {
                let a = 0.5 * (s[(i, j)] + s[(j, i)]);
                s[(i, j)] = a;
                s[(j, i)] = a;
            }
        }
        Ok(s.symmetric_eigenvalues()?.first().copied().unwrap_or(0.0))
    }
}

/// `K(x, y) = v_x(y)` over `V∖{o}`, with the dipoles it was read from.
pub fn greens_gram_with_dipoles(trunc: &TruncatedGraph, tol: f64) -> Result<(GreensMatrix, Vec<EnergyVector>)> {
    let graph = trunc.graph();
    let n = graph.num_vertices();
    if n > DENSE_CAP {
        return Err(Error::SizeCapExceeded { vertices: n, cap: DENSE_CAP });
    }
    let o = graph.base_point().0;
    let dipoles = base_dipoles(graph, tol)?;
    let vertices: Vec<usize> = (0..n).filter(|&v| v != o).collect();
    let m = vertices.len();
    let mut matrix = DenseMatrix::zeros(m, m);
    for (i, &x) in vertices.iter().enumerate() {
        for (j, &y) in vertices.iter().enumerate() {
            matrix[(i, j)] = dipoles[x].get(y);
        }
    }
    Ok((GreensMatrix { vertices, matrix, ground: Ground::BasePoint, method: GreensMethod::Gram }, dipoles))
}

pub fn greens_gram(trunc: &TruncatedGraph, tol: f64) -> Result<GreensMatrix> {
    greens_gram_with_dipoles(trunc, tol).map(|(k, _)| k)
}

/// Max `|v_x(y) − ⟨v_x, v_y⟩_E|` over all pairs.
pub fn gram_energy_residual(trunc: &TruncatedGraph, k: &GreensMatrix, dipoles: &[EnergyVector]) -> f64 {
    let graph = trunc.graph();
    let rows = crate::par::map_indices(k.len(), |i| {
        let x = k.vertices[i];
        k.vertices
            .iter()
            .map(|&y| (k.get(x, y) - energy_form(graph, dipoles[x].values(), dipoles[y].values())).abs())
            .fold(0.0, f64::max)
    });
    rows.into_iter().fold(0.0, f64::max)
}

/// Inverse of the Laplacian grounded at `ground`, by dense LU.
pub fn greens_grounded(trunc: &TruncatedGraph, ground: Ground) -> Result<GreensMatrix> {
    let mask = ground.mask(trunc)?;
    let f = GroundedFactor::new(trunc.graph(), &mask)?;
    Ok(GreensMatrix { vertices: f.active().to_vec(), matrix: f.inverse(), ground, method: GreensMethod::DenseInverse })
}

fn reduced_laplacian(trunc: &TruncatedGraph, vertices: &[usize]) -> DenseMatrix {
    let g = trunc.graph();
    let mut pos = vec![usize::MAX; g.num_vertices()];
    for (i, &v) in vertices.iter().enumerate() {
        pos[v] = i;
    }
    let m = vertices.len();
    let mut a = DenseMatrix::zeros(m, m);
    for (i, &v) in vertices.iter().enumerate() {
        a[(i, i)] = g.degree(v);
        for (w, c) in g.neighbors(v) {
            if pos[w] != usize::MAX {
                a[(i, pos[w])] -= c;
            }
        }
    }
    a
}

/// Max deviation of `ΔK` and `KΔ` from the identity on the active vertices.
pub fn greens_inversion_check(trunc: &TruncatedGraph, k: &GreensMatrix) -> Result<f64> {
    if k.vertices.iter().any(|&v| v >= trunc.num_vertices()) {
        return Err(Error::DimensionMismatch { expected: trunc.num_vertices(), found: k.len() });
    }
    let lap = reduced_laplacian(trunc, &k.vertices);
    let left = lap.matmul(&k.matrix)?.identity_residual();
    let right = k.matrix.matmul(&lap)?.identity_residual();
    Ok(left.max(right))
}

/// Partial sum of `G_P = Σ_{n<order} Pⁿ` for the walk killed on the ground set.
#[derive(Clone, Debug, PartialEq)]
pub struct WalkGreens {
    pub vertices: Vec<usize>,
    pub matrix: DenseMatrix,
    pub ground: Ground,
    /// Number of powers summed.
    pub order: usize,
    /// `min_k ‖P^{2^k}‖_∞^{1/2^k}`, an upper bound on the spectral radius.
    pub spectral_radius: f64,
    /// `‖Σ_{n≥order} Pⁿ‖_∞ ≤ q/(1 − q)` with `q = ‖P^order‖_∞`.
    pub tail_bound: f64,
}

impl WalkGreens {
    pub fn get(&self, x: usize, y: usize) -> f64 {
        match (self.vertices.binary_search(&x), self.vertices.binary_search(&y)) {
            (Ok(i), Ok(j)) => self.matrix[(i, j)],
            _ => 0.0,
        }
    }

    /// `K = G_P C⁻¹`.
    pub fn to_greens(&self, trunc: &TruncatedGraph) -> GreensMatrix {
        let g = trunc.graph();
        let mut m = self.matrix.clone();
        for j in 0..m.cols() {
            let c = g.degree(self.vertices[j]);
            for i in 0..m.rows() {
                m[(i, j)] /= c;
            }
        }
        GreensMatrix { vertices: self.vertices.clone(), matrix: m, ground: self.ground, method: GreensMethod::Neumann }
    }

    /// Max `|G − I − P G|` over active rows.
    pub fn fixed_point_residual(&self, trunc: &TruncatedGraph) -> f64 {
        let p = killed_transition(trunc, &self.vertices);
        let pg = p.matmul(&self.matrix).expect("square");
        let mut r = 0.0_f64;
        for i in 0..self.matrix.rows() {
            for j in 0..self.matrix.cols() {
                let id = if i == j { 1.0 } else { 0.0 };
                r = r.max((self.matrix[(i, j)] - id - pg[(i, j)]).abs());
            }
        }
        r
    }
}

fn killed_transition(trunc: &TruncatedGraph, vertices: &[usize]) -> DenseMatrix {
    let g = trunc.graph();
    let m = vertices.len();
    let mut p = DenseMatrix::zeros(m, m);
    for (i, &v) in vertices.iter().enumerate() {
        let c = g.degree(v);
        for (w, cw) in g.neighbors(v) {
            if let Ok(j) = vertices.binary_search(&w) {
                p[(i, j)] = cw / c;
            }
        }
    }
    p
}

fn inf_norm(m: &DenseMatrix) -> f64 {
    (0..m.rows()).map(|i| m.row(i).iter().map(|v| v.abs()).sum::<f64>()).fold(0.0, f64::max)
}

/// Sums the Neumann series by repeated squaring until the tail bound drops
/// below `tail_tol`. `order_cap` bounds the number of powers summed.
pub fn walk_greens(trunc: &TruncatedGraph, ground: Ground, order_cap: usize, tail_tol: f64) -> Result<WalkGreens> {
    let mask = ground.mask(trunc)?;
    let vertices: Vec<usize> = (0..trunc.num_vertices()).filter(|&v| !mask[v]).collect();
    if vertices.len() > DENSE_CAP {
        return Err(Error::SizeCapExceeded { vertices: vertices.len(), cap: DENSE_CAP });
    }
    let m = vertices.len();
    let mut power = killed_transition(trunc, &vertices);
    let mut sum = DenseMatrix::identity(m);
    let mut order = 1usize;
    let mut radius = f64::INFINITY;
    loop {
        // power = P^order, sum = Σ_{n<order} Pⁿ
        let q = inf_norm(&power);
        radius = radius.min(crate::math::powf(q, 1.0 / order as f64));
        let tail = if q < 1.0 { q / (1.0 - q) } else { f64::INFINITY };
        if tail < tail_tol {
            return Ok(WalkGreens { vertices, matrix: sum, ground, order, spectral_radius: radius, tail_bound: tail });
        }
        if order.saturating_mul(2) > order_cap.max(1) {
            return Err(Error::SeriesNotConverged { order, spectral_radius: radius, tail_bound: tail });
        }
        let next = power.matmul(&sum)?;
        for (s, n) in sum.as_mut_slice().iter_mut().zip(next.as_slice()) {
            *s += n;
        }
        power = power.matmul(&power)?;
        order *= 2;
    }
}

/// Value of a series with its truncation error bound.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SeriesValue {
    pub value: f64,
    pub terms: usize,
    /// Bound on the omitted tail.
    pub tail_bound: f64,
    /// Bound on accumulated floating-point error in the partial sum.
    pub rounding_bound: f64,
}

/// Closed forms of the bi-infinite chain with constant `p_+`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BinomialClosedForm {
    pub p_plus: f64,
    pub p_minus: f64,
    /// `λ = p_+ p_-`.
    pub lambda: f64,
    /// `(G_P)_{ii} = 1/√(1 − 4p_+p_-)`.
    pub g_diag: f64,
}

pub fn binomial_closed_form(p_plus: f64) -> Result<BinomialClosedForm> {
    if !(p_plus > 0.0 && p_plus < 1.0) {
        return Err(Error::InvalidParameter("p_plus must lie in (0, 1)".into()));
    }
    if p_plus == 0.5 {
        return Err(Error::Degenerate("p_plus = 1/2 gives a divergent Green's function".into()));
    }
    let p_minus = 1.0 - p_plus;
    let lambda = p_plus * p_minus;
    Ok(BinomialClosedForm { p_plus, p_minus, lambda, g_diag: 1.0 / sqrt(1.0 - 4.0 * lambda) })
}

impl BinomialClosedForm {
    /// `K_ii = 1/(c(i)√(1 − 4p_+(1 − p_+)))`.
    pub fn k_diag(&self, c_i: f64) -> f64 {
        self.g_diag / c_i
    }

    /// `(G_P)_{i, i+offset}` by partial summation of the even/odd power formulas.
    pub fn entry(&self, offset: i64, terms: usize) -> SeriesValue {
        let (fwd, bwd) = if offset >= 0 { (self.p_plus, self.p_minus) } else { (self.p_minus, self.p_plus) };
        let d = offset.unsigned_abs() as usize;
        let k = d / 2;
        let odd = d % 2 == 1;
        // First nonzero term at m = k: fwd^{2k} (even) or fwd^{2k+1} (odd).
        let mut t = powi(fwd, d as i32);
        let lambda = fwd * bwd;
        let mut sum = 0.0;
        let mut last = t;
        let mut m = k;
        let terms = terms.max(1);
        for _ in 0..terms {
            sum += t;
            last = t;
            let (mf, kf) = (m as f64, k as f64);
            let ratio = if odd {
                (2.0 * mf + 3.0) * (2.0 * mf + 2.0) / ((mf + 1.0 - kf) * (mf + 2.0 + kf))
            } else {
                (2.0 * mf + 2.0) * (2.0 * mf + 1.0) / ((mf + 1.0 - kf) * (mf + 1.0 + kf))
            };
            t *= ratio * lambda;
            m += 1;
        }
        let kk = if odd { k as f64 + 1.0 } else { k as f64 };
        let mlast = (m - 1) as f64;
        let r_star = 4.0 * lambda / (1.0 - (kk * kk) / ((mlast + 1.0) * (mlast + 1.0)));
        let tail_bound = if r_star > 0.0 && r_star < 1.0 { last * r_star / (1.0 - r_star) } else { f64::INFINITY };
        let rounding_bound = (terms as f64 + 1.0) * f64::EPSILON * sum;
        SeriesValue { value: sum, terms, tail_bound, rounding_bound }
    }
}

/// Partial sum of `Σ_{m≤200} C(2m, m) λ^m` against `1/√(1 − 4λ)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GeneratingFunctionCheck {
    pub lambda: f64,
    pub partial_sum: SeriesValue,
    pub closed_form: f64,
    pub residual: f64,
}

impl GeneratingFunctionCheck {
    /// `residual ≤ tail bound + rounding bound`.
    pub fn within_bound(&self) -> bool {
        self.residual <= self.partial_sum.tail_bound + self.partial_sum.rounding_bound
    }
}

pub fn generating_function_check(lambda: f64) -> Result<GeneratingFunctionCheck> {
    if !(lambda >= 0.0) {
        return Err(Error::InvalidParameter("lambda must be nonnegative".into()));
    }
    if lambda >= 0.25 {
        return Err(Error::InvalidParameter("series diverges for lambda >= 1/4".into()));
    }
    let mut t = 1.0;
    let mut sum = 0.0;
    let mut last = 1.0;
    for m in 0..=200u32 {
        sum += t;
        last = t;
        let mf = m as f64;
        t *= (2.0 * mf + 2.0) * (2.0 * mf + 1.0) / ((mf + 1.0) * (mf + 1.0)) * lambda;
    }
    let r = 4.0 * lambda;
    let tail_bound = if r > 0.0 { last * r / (1.0 - r) } else { 0.0 };
    let closed_form = 1.0 / sqrt(1.0 - 4.0 * lambda);
    let partial_sum = SeriesValue { value: sum, terms: 201, tail_bound, rounding_bound: 202.0 * f64::EPSILON * closed_form };
    Ok(GeneratingFunctionCheck { lambda, partial_sum, closed_form, residual: (closed_form - sum).abs() })
}

/// Closed forms of the `N`-ary tree with `c = b^n` between levels `n` and `n+1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NaryClosedForms {
    /// `(G_P)_{x,x'} = (Nb + 1)/(Nb − 1)` for `x, x'` on one level.
    pub g_same_level: f64,
    /// `1/((1 + Nb) b^{n−1})`.
    pub d_root: f64,
}

pub fn nary_tree_closed_forms(arity: usize, base: f64, level: usize) -> Result<NaryClosedForms> {
    let nb = arity as f64 * base;
    if arity < 2 || !(base > 1.0) || !(nb > 1.0) {
        return Err(Error::InvalidParameter("need N >= 2 and b > 1".into()));
    }
    if level == 0 {
        return Err(Error::InvalidParameter("level must be at least 1".into()));
    }
    Ok(NaryClosedForms {
        g_same_level: (nb + 1.0) / (nb - 1.0),
        d_root: 1.0 / ((1.0 + nb) * powi(base, level as i32 - 1)),
    })
}

/// One letter of a level word.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Step {
    Up,
    Down,
}

/// `P_{w1} P_{w2} ⋯` starting at `start_level`; rows index `V_start`, columns
/// the final level. Entry `(x, y)` is the probability of following the word from `x` to `y`.
pub fn bratteli_transition_product(diagram: &BratteliDiagram, start_level: usize, word: &[Step]) -> Result<DenseMatrix> {
    let size = diagram
        .level_size(start_level)
        .ok_or_else(|| Error::InvalidParameter("start level beyond the diagram".into()))?;
    let mut acc = DenseMatrix::identity(size);
    let mut level = start_level;
    for (pos, step) in word.iter().enumerate() {
        let degree = |slot: usize| {
            diagram.degree(level, slot).ok_or_else(|| Error::Unsupported("word leaves the finite diagram".into()))
        };
        let block = match step {
            Step::Up => {
                let b = diagram.block(level).ok_or_else(|| Error::Unsupported("word leaves the finite diagram".into()))?;
                let mut p = b.clone();
                for i in 0..p.rows() {
                    let c = degree(i)?;
                    for j in 0..p.cols() {
                        p[(i, j)] /= c;
                    }
                }
                level += 1;
                p
            }
            Step::Down => {
                if level == 0 {
                    return Err(Error::LevelUnderflow { position: pos });
                }
                let b = diagram.block(level - 1).expect("lower blocks exist").transpose();
                let mut p = b;
                for i in 0..p.rows() {
                    let c = degree(i)?;
                    for j in 0..p.cols() {
                        p[(i, j)] /= c;
                    }
                }
                level -= 1;
                p
            }
        };
        acc = acc.matmul(&block)?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::ConductanceGraph;

    fn whole(n: usize, edges: &[(usize, usize, f64)]) -> TruncatedGraph {
        TruncatedGraph::whole(ConductanceGraph::from_edges(n, 0, edges).unwrap())
    }

    #[test]
    fn path_gram() {
        let t = whole(3, &[(0, 1, 1.0), (1, 2, 1.0)]);
        let k = greens_gram(&t, 1e-12).unwrap();
        let want = [[1.0, 1.0], [1.0, 2.0]];
        for i in 0..2 {
            for j in 0..2 {
                assert!((k.matrix[(i, j)] - want[i][j]).abs() < 1e-10);
            }
        }
        assert!(greens_inversion_check(&t, &k).unwrap() < 1e-9);
    }

    #[test]
    fn single_edge_walk() {
        let t = whole(2, &[(0, 1, 2.0)]);
        let w = walk_greens(&t, Ground::BasePoint, 1 << 20, 1e-12).unwrap();
        assert_eq!(w.matrix[(0, 0)], 1.0);
        assert_eq!(w.to_greens(&t).get(1, 1), 0.5);
    }

    #[test]
    fn k3_routes_agree() {
        let t = whole(3, &[(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)]);
        let gram = greens_gram(&t, 1e-13).unwrap();
        let walk = walk_greens(&t, Ground::BasePoint, 1 << 30, 1e-13).unwrap();
        let k = walk.to_greens(&t);
        assert!((gram.get(1, 1) - 2.0 / 3.0).abs() < 1e-10);
        for x in 1..3 {
            for y in 1..3 {
                assert!((gram.get(x, y) - k.get(x, y)).abs() < 1e-8);
            }
        }
        assert!(walk.fixed_point_residual(&t) < 1e-9);
    }

    #[test]
    fn binomial_values() {
        let b = binomial_closed_form(2.0 / 3.0).unwrap();
        assert!((b.g_diag - 3.0).abs() < 1e-12);
        assert!((b.k_diag(3.0 * 4.0) - 0.25).abs() < 1e-12);
        assert!(matches!(binomial_closed_form(0.5), Err(Error::Degenerate(_))));
        assert!((binomial_closed_form(1e-9).unwrap().g_diag - 1.0).abs() < 1e-8);
        let e = b.entry(0, 400);
        assert!((e.value - 3.0).abs() <= e.tail_bound + e.rounding_bound);
    }

    #[test]
    fn generating_function_values() {
        assert_eq!(generating_function_check(0.0).unwrap().partial_sum.value, 1.0);
        for l in [0.05, 0.1, 0.2, 2.0 / 9.0] {
            assert!(generating_function_check(l).unwrap().within_bound(), "{l}");
        }
        assert!(generating_function_check(0.25).is_err());
    }

    #[test]
    fn nary_values() {
        let f = nary_tree_closed_forms(2, 2.0, 1).unwrap();
        assert!((f.g_same_level - 5.0 / 3.0).abs() < 1e-15);
        assert!((f.d_root - 0.2).abs() < 1e-15);
        assert!(nary_tree_closed_forms(2, 1e9, 3).unwrap().d_root < 1e-18);
    }

    #[test]
    fn empty_word_is_identity_and_underflow_errors() {
        let d = BratteliDiagram::NaryTree { arity: 2, base: 2.0 };
        assert_eq!(bratteli_transition_product(&d, 2, &[]).unwrap(), DenseMatrix::identity(4));
        assert_eq!(bratteli_transition_product(&d, 0, &[Step::Down]), Err(Error::LevelUnderflow { position: 0 }));
    }
}

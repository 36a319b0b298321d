//! Graph Laplacian `Δ = C − E`, transition operator `P = C⁻¹E`, and the comb
//! defect recursion.

use alloc::vec;
use alloc::vec::Vec;

use crate::graph::ConductanceGraph;
use crate::linalg::{laplacian_at, DenseMatrix};
use crate::math::{dot, powi};
use crate::rng::Substream;
use crate::{Error, Result};

/// Linear operator on functions on the vertex set.
pub trait Operator {
    fn dim(&self) -> usize;
    /// Writes `Au` into `out`; both have length [`Operator::dim`].
    fn apply_into(&self, u: &[f64], out: &mut [f64]);
    /// Coordinate-format entries `(row, col, value)`.
    fn triplets(&self) -> Vec<(usize, usize, f64)>;
}

/// Sparse matrix-vector product with a length check.
pub fn apply<O: Operator + ?Sized>(op: &O, u: &[f64]) -> Result<Vec<f64>> {
    if u.len() != op.dim() {
        return Err(Error::DimensionMismatch { expected: op.dim(), found: u.len() });
    }
    let mut out = vec![0.0; u.len()];
    op.apply_into(u, &mut out);
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct LaplacianOperator<'g> {
    graph: &'g ConductanceGraph,
    diagonal: Vec<f64>,
}

pub fn assemble_laplacian(graph: &ConductanceGraph) -> LaplacianOperator<'_> {
    let diagonal = (0..graph.num_vertices()).map(|x| graph.degree(x)).collect();
    LaplacianOperator { graph, diagonal }
}

impl<'g> LaplacianOperator<'g> {
    pub fn graph(&self) -> &'g ConductanceGraph {
        self.graph
    }

    /// The diagonal `C = diag(c(x))`.
    pub fn diagonal(&self) -> &[f64] {
        &self.diagonal
    }

    /// Entries of `C` in coordinate form.
    pub fn c_triplets(&self) -> Vec<(usize, usize, f64)> {
        self.diagonal.iter().enumerate().map(|(i, &c)| (i, i, c)).collect()
    }

    /// Entries of `E = (c_xy)` in coordinate form.
    pub fn e_triplets(&self) -> Vec<(usize, usize, f64)> {
        (0..self.dim()).flat_map(|x| self.graph.neighbors(x).map(move |(y, c)| (x, y, c))).collect()
    }

    /// `⟨u, Δu⟩_{l²}`.
    pub fn quadratic_form(&self, u: &[f64]) -> Result<f64> {
        Ok(dot(u, &apply(self, u)?))
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let n = self.dim();
        let mut m = DenseMatrix::zeros(n, n);
        for (i, j, v) in self.triplets() {
            m[(i, j)] += v;
        }
        m
    }
}

impl Operator for LaplacianOperator<'_> {
    fn dim(&self) -> usize {
        self.diagonal.len()
    }

    fn apply_into(&self, u: &[f64], out: &mut [f64]) {
        for (x, o) in out.iter_mut().enumerate() {
            *o = laplacian_at(self.graph, u, x);
        }
    }

    fn triplets(&self) -> Vec<(usize, usize, f64)> {
        let mut t = Vec::with_capacity(self.dim() + 2 * self.graph.num_edges());
        for x in 0..self.dim() {
            t.push((x, x, self.diagonal[x]));
            t.extend(self.graph.neighbors(x).map(|(y, c)| (x, y, -c)));
        }
        t
    }
}

/// Row-stochastic `p_xy = c_xy / c(x)`, stored row-wise.
#[derive(Clone, Debug)]
pub struct TransitionOperator<'g> {
    graph: &'g ConductanceGraph,
    offsets: Vec<usize>,
    targets: Vec<usize>,
    probabilities: Vec<f64>,
}

impl<'g> TransitionOperator<'g> {
    pub fn new(graph: &'g ConductanceGraph) -> Self {
        let n = graph.num_vertices();
        let mut offsets = Vec::with_capacity(n + 1);
        let mut targets = Vec::new();
        let mut probabilities = Vec::new();
        offsets.push(0);
        for x in 0..n {
            let cx = graph.degree(x);
            for (y, c) in graph.neighbors(x) {
                targets.push(y);
                probabilities.push(c / cx);
            }
            offsets.push(targets.len());
        }
        TransitionOperator { graph, offsets, targets, probabilities }
    }

    pub fn graph(&self) -> &'g ConductanceGraph {
        self.graph
    }

    /// `(y, p_xy)` for the neighbors of `x`.
    pub fn row(&self, x: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let (a, b) = (self.offsets[x], self.offsets[x + 1]);
        self.targets[a..b].iter().copied().zip(self.probabilities[a..b].iter().copied())
    }

    /// `p_xy`, zero when `x` and `y` are not adjacent.
    pub fn probability(&self, x: usize, y: usize) -> f64 {
        self.row(x).find(|&(t, _)| t == y).map_or(0.0, |(_, p)| p)
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let n = self.dim();
        let mut m = DenseMatrix::zeros(n, n);
        for (i, j, v) in self.triplets() {
            m[(i, j)] = v;
        }
        m
    }
}

impl Operator for TransitionOperator<'_> {
    fn dim(&self) -> usize {
        self.offsets.len() - 1
    }

    fn apply_into(&self, u: &[f64], out: &mut [f64]) {
        for (x, o) in out.iter_mut().enumerate() {
            *o = self.row(x).map(|(y, p)| p * u[y]).sum();
        }
    }

    fn triplets(&self) -> Vec<(usize, usize, f64)> {
        (0..self.dim()).flat_map(|x| self.row(x).map(move |(y, p)| (x, y, p))).collect()
    }
}

/// Max of `|⟨Δu,v⟩ − ⟨u,Δv⟩|` over random finitely supported pairs, relative to
/// `‖Δ‖·‖u‖·‖v‖`-scale.
pub fn l2_symmetry_check(op: &LaplacianOperator<'_>, trials: usize, seed: u64) -> f64 {
    let n = op.dim();
    let mut worst = 0.0_f64;
    for t in 0..trials {
        let mut rng = Substream::new(seed, t as u64);
        let support = 1 + rng.below(n);
        let random_fn = |rng: &mut Substream| {
            let mut u = vec![0.0; n];
            for _ in 0..support {
                u[rng.below(n)] = rng.uniform_in(-1.0, 1.0);
            }
            u
        };
        let u = random_fn(&mut rng);
        let v = random_fn(&mut rng);
        let (du, dv) = (apply(op, &u).unwrap(), apply(op, &v).unwrap());
        let lhs = dot(&du, &v);
        let rhs = dot(&u, &dv);
        let scale: f64 = 1.0 + du.iter().zip(&v).map(|(a, b)| (a * b).abs()).sum::<f64>();
        worst = worst.max((lhs - rhs).abs() / scale);
    }
    worst
}

/// Decaying solution of the comb defect recursion.
#[derive(Clone, Debug, PartialEq)]
pub struct CombDefect {
    /// `l_0 = 1, l_1, …, l_levels`.
    pub l: Vec<f64>,
    /// `l_k · 2^k`.
    pub scaled: Vec<f64>,
    /// Estimated `lim l_k · 2^k` (last scaled value).
    pub limit: f64,
    /// Variance of the last few scaled values.
    pub limit_variance: f64,
    /// True when `limit_variance > 1e-6`.
    pub unstable: bool,
    /// Partial sums of `Σ 2^k (l_k − l_{k+1})²`, index `k` holds the sum up to `k`.
    pub energy_partial_sums: Vec<f64>,
    /// Largest `|(1/3)l_{k−1} + (2/3)l_{k+1} − (1 + 1/(3·2^k)) l_k|` for `1 ≤ k < levels`.
    pub recursion_residual: f64,
}

/// Residual of the comb recursion at level `k ≥ 1`.
pub fn comb_recursion_residual(l: &[f64], k: usize) -> f64 {
    let lhs = l[k - 1] / 3.0 + 2.0 * l[k + 1] / 3.0;
    let rhs = (1.0 + 1.0 / (3.0 * powi(2.0, k as i32))) * l[k];
    (lhs - rhs).abs()
}

/// Solves `(1/3)l_{k−1} + (2/3)l_{k+1} = (1 + 1/(3·2^k)) l_k` for the decaying
/// solution by backward recursion from deep levels, normalized to `l_0 = 1`.
pub fn defect_recursion_comb(levels: usize) -> Result<CombDefect> {
    if levels < 10 {
        return Err(Error::InvalidParameter("comb defect recursion needs at least 10 levels".into()));
    }
    if levels > 900 {
        return Err(Error::InvalidParameter("comb defect recursion supports at most 900 levels".into()));
    }
    let deep = levels + 60;
    let mut l = vec![0.0; deep + 2];
    // Start at scale 1 and renormalize at the end; 2^-deep would underflow.
    l[deep] = 1.0;
    l[deep + 1] = 0.5;
    for k in (1..=deep).rev() {
        l[k - 1] = (3.0 + powi(2.0, -(k as i32))) * l[k] - 2.0 * l[k + 1];
        if l[k - 1].abs() > 1e250 {
            let s = l[k - 1].abs();
            l[k - 1..].iter_mut().for_each(|v| *v /= s);
        }
    }
    let l0 = l[0];
    l.iter_mut().for_each(|v| *v /= l0);
    let recursion_residual = (1..=levels).map(|k| comb_recursion_residual(&l, k)).fold(0.0, f64::max);
    let mut energy_partial_sums = Vec::with_capacity(levels + 1);
    let mut acc = 0.0;
    for k in 0..=levels {
        let d = l[k] - l[k + 1];
        acc += powi(2.0, k as i32) * d * d;
        energy_partial_sums.push(acc);
    }
    l.truncate(levels + 1);
    let scaled: Vec<f64> = l.iter().enumerate().map(|(k, v)| v * powi(2.0, k as i32)).collect();
    let tail = &scaled[levels - 4..];
    let mean = tail.iter().sum::<f64>() / tail.len() as f64;
    let limit_variance = tail.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / tail.len() as f64;
    Ok(CombDefect {
        limit: scaled[levels],
        unstable: limit_variance > 1e-6,
        limit_variance,
        l,
        scaled,
        energy_partial_sums,
        recursion_residual,
    })
}

/// Forward iterates of the comb recursion from `l_0, l_1`; dominated by the
/// non-decaying mode.
pub fn comb_forward_recursion(l0: f64, l1: f64, levels: usize) -> Vec<f64> {
    let mut l = vec![l0, l1];
    for k in 1..levels {
        let next = ((3.0 + powi(2.0, -(k as i32))) * l[k] - l[k - 1]) / 2.0;
        l.push(next);
    }
    l.truncate(levels + 1);
    l
}

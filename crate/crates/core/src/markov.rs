//! Random walks driven by `p_xy = c_xy / c(x)`: cylinder probabilities, path
//! sampling, harmonic measure on the frontier and Monte Carlo representations
//! of harmonic functions.
//!
//! The frontier of a truncation stands in for the boundary of the infinite
//! graph; every result here is exact for the finite absorbing walk and only
//! approximates the boundary theory as the radius grows.

use alloc::vec;
use alloc::vec::Vec;

use crate::graph::{ConductanceGraph, TruncatedGraph, VertexId};
use crate::greens::WalkGreens;
use crate::laplacian::{Operator, TransitionOperator};
use crate::linalg::{laplacian_at, solve_grounded, GroundedFactor, DENSE_CAP};
use crate::math::{ln, max_abs, sqrt};
use crate::resistance::Resistor;
use crate::rng::Substream;
use crate::{Error, Result};

/// Finite path prefix `ω_0 ω_1 ⋯ ω_n`.
#[derive(Clone, Debug, PartialEq)]
pub struct PathSample {
    pub start: VertexId,
    /// Visited vertices, starting with `start`.
    pub steps: Vec<usize>,
    /// `Σ ln p_{ω_i ω_{i+1}}`.
    pub log_probability: f64,
    pub absorbed_at: Option<VertexId>,
    /// Number of transitions.
    pub length: usize,
}

/// `p_{x x₁} p_{x₁ x₂} ⋯` for the word `x x₁ ⋯ x_n`.
pub fn cylinder_probability(graph: &ConductanceGraph, word: &[usize]) -> Result<f64> {
    if word.is_empty() {
        return Err(Error::InvalidParameter("cylinder word must be nonempty".into()));
    }
    for &v in word {
        graph.check_vertex(VertexId(v))?;
    }
    let mut p = 1.0;
    for w in word.windows(2) {
        let c = graph.weight(w[0], w[1]).ok_or(Error::NotAdjacent { from: w[0], to: w[1] })?;
        p *= c / graph.degree(w[0]);
    }
    Ok(p)
}

/// Sum of cylinder probabilities over every word of `depth` steps from `start`.
pub fn cylinder_sum(graph: &ConductanceGraph, start: usize, depth: usize) -> f64 {
    fn walk(g: &ConductanceGraph, x: usize, depth: usize, p: f64) -> f64 {
        if depth == 0 {
            return p;
        }
        let c = g.degree(x);
        g.neighbors(x).map(|(y, cxy)| walk(g, y, depth - 1, p * (cxy / c))).sum()
    }
    walk(graph, start, depth, 1.0)
}

fn step(op: &TransitionOperator<'_>, x: usize, u: f64) -> (usize, f64) {
    let mut acc = 0.0;
    let mut last = (x, 0.0);
    for (y, p) in op.row(x) {
        acc += p;
        last = (y, p);
        if u < acc {
            return (y, p);
        }
    }
    last
}

fn walk_once(trunc: &TruncatedGraph, op: &TransitionOperator<'_>, x: usize, max_steps: usize, rng: &mut Substream) -> PathSample {
    let mut steps = vec![x];
    let mut logp = 0.0;
    let mut cur = x;
    let mut absorbed = trunc.is_frontier(x).then_some(VertexId(x));
    while absorbed.is_none() && steps.len() <= max_steps {
        let (y, p) = step(op, cur, rng.uniform());
        logp += ln(p);
        steps.push(y);
        cur = y;
        if trunc.is_frontier(y) {
            absorbed = Some(VertexId(y));
        }
    }
    let length = steps.len() - 1;
    PathSample { start: VertexId(x), steps, log_probability: logp, absorbed_at: absorbed, length }
}

/// Walks from `x` until absorbed at the frontier or `max_steps` transitions.
/// Sample `i` uses substream `(seed, i)`, so results do not depend on threading.
pub fn sample_paths(trunc: &TruncatedGraph, x: VertexId, n_samples: usize, max_steps: usize, seed: u64) -> Result<Vec<PathSample>> {
    trunc.graph().check_vertex(x)?;
    if n_samples == 0 {
        return Err(Error::InvalidParameter("need at least one sample".into()));
    }
    let op = TransitionOperator::new(trunc.graph());
    Ok(crate::par::map_indices(n_samples, |i| {
        let mut rng = Substream::new(seed, i as u64);
        walk_once(trunc, &op, x.0, max_steps, &mut rng)
    }))
}

/// Empirical hitting distribution on the frontier.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundaryEstimate {
    pub frontier: Vec<usize>,
    pub counts: Vec<u64>,
    /// All samples, absorbed or not.
    pub total: u64,
    pub unabsorbed: u64,
}

impl BoundaryEstimate {
    pub fn empty(frontier: &[usize]) -> Self {
        BoundaryEstimate { frontier: frontier.to_vec(), counts: vec![0; frontier.len()], total: 0, unabsorbed: 0 }
    }

    pub fn from_samples(frontier: &[usize], samples: &[PathSample]) -> Self {
        let mut e = Self::empty(frontier);
        for s in samples {
            e.total += 1;
            match s.absorbed_at {
                Some(b) => {
                    let i = frontier.binary_search(&b.0).expect("absorbed at a frontier vertex");
                    e.counts[i] += 1;
                }
                None => e.unabsorbed += 1,
            }
        }
        e
    }

    pub fn absorbed(&self) -> u64 {
        self.total - self.unabsorbed
    }

    /// `μ̂_x(b)`, normalized over absorbed samples.
    pub fn weights(&self) -> Vec<f64> {
        let n = self.absorbed().max(1) as f64;
        self.counts.iter().map(|&c| c as f64 / n).collect()
    }

    /// Binomial standard error `√(μ̂(1 − μ̂)/n)` per frontier vertex.
    pub fn std_errors(&self) -> Vec<f64> {
        let n = self.absorbed().max(1) as f64;
        self.weights().iter().map(|&p| sqrt(p * (1.0 - p) / n)).collect()
    }

    /// Adds counts; associative and commutative.
    pub fn merge(&mut self, other: &BoundaryEstimate) -> Result<()> {
        if self.frontier != other.frontier {
            return Err(Error::InvalidParameter("estimates over different frontiers".into()));
        }
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
        self.total += other.total;
        self.unabsorbed += other.unabsorbed;
        Ok(())
    }
}

/// Largest modulus of an eigenvalue of `P` restricted to the non-frontier
/// vertices, by power iteration.
pub fn substochastic_spectral_radius(op: &TransitionOperator<'_>, frontier: &[bool], iterations: usize) -> f64 {
    let n = op.dim();
    let mut v: Vec<f64> = (0..n).map(|i| if frontier[i] { 0.0 } else { 1.0 + (i % 7) as f64 * 1e-3 }).collect();
    let mut out = vec![0.0; n];
    let mut estimate = 0.0;
    // Two steps at a time so a ±ρ pair does not oscillate.
    for _ in 0..iterations.max(1) {
        let before = max_abs(&v);
        if before == 0.0 {
            return 0.0;
        }
        for _ in 0..2 {
            op.apply_into(&v, &mut out);
            for i in 0..n {
                v[i] = if frontier[i] { 0.0 } else { out[i] };
            }
        }
        let after = max_abs(&v);
        estimate = sqrt(after / before);
        v.iter_mut().for_each(|x| *x /= after.max(f64::MIN_POSITIVE));
    }
    estimate
}

/// Iterates of `h ← Ph` with `h = f` clamped on the frontier.
#[derive(Clone, Debug, PartialEq)]
pub struct PowerIteration {
    pub h: Vec<f64>,
    /// `‖h_{k+1} − h_k‖_∞` for each iteration.
    pub increments: Vec<f64>,
}

/// Runs `n` iterations; interior values start at the mean of the boundary data.
pub fn power_iterate(op: &TransitionOperator<'_>, frontier: &[bool], f: &[f64], n: usize) -> Result<PowerIteration> {
    let dim = op.dim();
    for len in [frontier.len(), f.len()] {
        if len != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: len });
        }
    }
    let fixed: Vec<usize> = (0..dim).filter(|&i| frontier[i]).collect();
    let mean = if fixed.is_empty() { 0.0 } else { fixed.iter().map(|&i| f[i]).sum::<f64>() / fixed.len() as f64 };
    let mut h: Vec<f64> = (0..dim).map(|i| if frontier[i] { f[i] } else { mean }).collect();
    let mut next = vec![0.0; dim];
    let mut increments = Vec::with_capacity(n);
    for _ in 0..n {
        op.apply_into(&h, &mut next);
        let mut inc = 0.0_f64;
        for i in 0..dim {
            if frontier[i] {
                next[i] = f[i];
            }
            inc = inc.max((next[i] - h[i]).abs());
        }
        core::mem::swap(&mut h, &mut next);
        increments.push(inc);
    }
    Ok(PowerIteration { h, increments })
}

/// Exact hitting distribution of the frontier for the walk started at `start`.
#[derive(Clone, Debug, PartialEq)]
pub struct HarmonicMeasure {
    pub start: VertexId,
    pub frontier: Vec<usize>,
    pub weights: Vec<f64>,
}

impl HarmonicMeasure {
    pub fn total(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// `Σ_b μ_x(b) h(b)`.
    pub fn integrate(&self, h: &[f64]) -> f64 {
        self.frontier.iter().zip(&self.weights).map(|(&b, &w)| w * h[b]).sum()
    }

    pub fn weight(&self, b: usize) -> f64 {
        self.frontier.binary_search(&b).map_or(0.0, |i| self.weights[i])
    }
}

fn measure_from_green_row(trunc: &TruncatedGraph, start: usize, g: &[f64]) -> HarmonicMeasure {
    let graph = trunc.graph();
    let frontier = trunc.frontier().to_vec();
    let weights = frontier
        .iter()
        .map(|&b| {
            if b == start {
                return 1.0;
            }
            graph.neighbors(b).filter(|&(y, _)| !trunc.is_frontier(y)).map(|(y, c)| g[y] * c).sum()
        })
        .collect();
    HarmonicMeasure { start: VertexId(start), frontier, weights }
}

/// `μ_x(b) = Σ_{y interior} G(x, y) c_yb` with `G` the Laplacian inverse grounded at the frontier.
pub fn harmonic_measure_exact(trunc: &TruncatedGraph, x: VertexId) -> Result<HarmonicMeasure> {
    let graph = trunc.graph();
    graph.check_vertex(x)?;
    if trunc.frontier().is_empty() {
        return Err(Error::NoFrontier);
    }
    if trunc.is_frontier(x.0) {
        return Ok(measure_from_green_row(trunc, x.0, &vec![0.0; graph.num_vertices()]));
    }
    let mut e = vec![0.0; graph.num_vertices()];
    e[x.0] = 1.0;
    let g = if trunc.interior().len() <= DENSE_CAP {
        GroundedFactor::new(graph, trunc.frontier_mask())?.solve(&e)
    } else {
        solve_grounded(graph, trunc.frontier_mask(), &e, 1e-13)?.x
    };
    Ok(measure_from_green_row(trunc, x.0, &g))
}

/// Harmonic measures of every vertex, sharing one factorization.
pub fn harmonic_measures(trunc: &TruncatedGraph) -> Result<Vec<HarmonicMeasure>> {
    let graph = trunc.graph();
    if trunc.frontier().is_empty() {
        return Err(Error::NoFrontier);
    }
    let n = graph.num_vertices();
    let f = GroundedFactor::new(graph, trunc.frontier_mask())?;
    let out = crate::par::map_indices(n, |x| {
        if trunc.is_frontier(x) {
            measure_from_green_row(trunc, x, &vec![0.0; n])
        } else {
            let mut e = vec![0.0; n];
            e[x] = 1.0;
            measure_from_green_row(trunc, x, &f.solve(&e))
        }
    });
    Ok(out)
}

/// Largest `|h(x) − (Ph)(x)|` over interior vertices.
pub fn interior_harmonic_residual(trunc: &TruncatedGraph, h: &[f64]) -> f64 {
    let g = trunc.graph();
    trunc.interior().iter().map(|&x| (laplacian_at(g, h, x) / g.degree(x)).abs()).fold(0.0, f64::max)
}

#[derive(Clone, Debug, PartialEq)]
pub struct PoissonReport {
    pub start: VertexId,
    /// `h(x)`.
    pub exact: f64,
    /// `Σ_b μ_x(b) h(b)` with the exact harmonic measure.
    pub exact_measure_value: f64,
    /// Mean of `h(absorption vertex)` over absorbed samples.
    pub mc_estimate: f64,
    pub std_error: f64,
    pub samples: usize,
    pub unabsorbed: u64,
}

/// Reproduces a harmonic `h` at `x` from its frontier values, exactly and by sampling.
pub fn poisson_reproduce(
    trunc: &TruncatedGraph,
    h: &[f64],
    x: VertexId,
    n_samples: usize,
    max_steps: usize,
    seed: u64,
) -> Result<PoissonReport> {
    let n = trunc.num_vertices();
    if h.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: h.len() });
    }
    let residual = interior_harmonic_residual(trunc, h);
    if residual > 1e-8 * max_abs(h).max(1.0) {
        return Err(Error::NotHarmonic { residual });
    }
    let mu = harmonic_measure_exact(trunc, x)?;
    let samples = sample_paths(trunc, x, n_samples, max_steps, seed)?;
    let hits: Vec<f64> = samples.iter().filter_map(|s| s.absorbed_at.map(|b| h[b.0])).collect();
    let m = hits.len().max(1) as f64;
    let mean = hits.iter().sum::<f64>() / m;
    let var = if hits.len() > 1 { hits.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (m - 1.0) } else { 0.0 };
    Ok(PoissonReport {
        start: x,
        exact: h[x.0],
        exact_measure_value: mu.integrate(h),
        mc_estimate: mean,
        std_error: sqrt(var / m),
        samples: n_samples,
        unabsorbed: (samples.len() - hits.len()) as u64,
    })
}

/// `G_P(x, y) / G_P(o, y)`; the base point must not be grounded.
pub fn martin_kernel(walk: &WalkGreens, o: VertexId, x: VertexId, y: VertexId) -> Result<f64> {
    if walk.vertices.binary_search(&o.0).is_err() {
        return Err(Error::Unsupported("Martin kernel needs the base point outside the ground set".into()));
    }
    let den = walk.get(o.0, y.0);
    if den == 0.0 {
        return Err(Error::ZeroDenominator);
    }
    Ok(walk.get(x.0, y.0) / den)
}

/// Monte Carlo `x ↦ E[F(absorption vertex) | start x]`.
#[derive(Clone, Debug, PartialEq)]
pub struct ConditionalExpectation {
    pub values: Vec<f64>,
    pub std_errors: Vec<f64>,
}

/// Estimates `h(x) = E(F | π₀ = x)` for `F` depending on the absorption vertex only.
/// Vertex `x` uses substreams `(seed, x·n_samples + i)`.
pub fn shift_invariant_correspondence_demo<F>(
    trunc: &TruncatedGraph,
    f: F,
    n_samples: usize,
    max_steps: usize,
    seed: u64,
) -> Result<ConditionalExpectation>
where
    F: Fn(usize) -> f64 + Sync + Send,
{
    if trunc.frontier().is_empty() {
        return Err(Error::NoFrontier);
    }
    if n_samples == 0 {
        return Err(Error::InvalidParameter("need at least one sample".into()));
    }
    let op = TransitionOperator::new(trunc.graph());
    let rows = crate::par::map_indices(trunc.num_vertices(), |x| {
        if trunc.is_frontier(x) {
            return (f(x), 0.0);
        }
        let mut vals = Vec::with_capacity(n_samples);
        for i in 0..n_samples {
            let mut rng = Substream::new(seed, (x * n_samples + i) as u64);
            if let Some(b) = walk_once(trunc, &op, x, max_steps, &mut rng).absorbed_at {
                vals.push(f(b.0));
            }
        }
        let m = vals.len().max(1) as f64;
        let mean = vals.iter().sum::<f64>() / m;
        let var = if vals.len() > 1 { vals.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (m - 1.0) } else { 0.0 };
        (mean, sqrt(var / m))
    });
    Ok(ConditionalExpectation {
        values: rows.iter().map(|r| r.0).collect(),
        std_errors: rows.iter().map(|r| r.1).collect(),
    })
}

/// `d(π_k, π_l)` along one sampled path.
#[derive(Clone, Debug, PartialEq)]
pub struct PathDistances {
    /// `(k, l, d_res(π_k, π_l))` with `l` the last index and `k` doubling from 1.
    pub pairs: Vec<(usize, usize, f64)>,
}

/// Per-path statistic for `lim d(π_k, π_l) = 0`; reported, not certified.
pub fn class_a_statistic(
    trunc: &TruncatedGraph,
    x: VertexId,
    n_samples: usize,
    max_steps: usize,
    seed: u64,
    tol: f64,
) -> Result<Vec<PathDistances>> {
    let res = Resistor::new(trunc.graph(), tol)?;
    let paths = sample_paths(trunc, x, n_samples, max_steps, seed)?;
    paths
        .iter()
        .map(|p| {
            let l = p.steps.len() - 1;
            let mut pairs = Vec::new();
            let mut k = 1;
            while k < l {
                pairs.push((k, l, res.distance(p.steps[k], p.steps[l])?));
                k *= 2;
            }
            Ok(PathDistances { pairs })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path3_trunc() -> TruncatedGraph {
        let g = ConductanceGraph::from_edges(3, 1, &[(0, 1, 1.0), (1, 2, 1.0)]).unwrap();
        TruncatedGraph::with_frontier(g, &[VertexId(0), VertexId(2)]).unwrap()
    }

    #[test]
    fn cylinder_values() {
        let t = path3_trunc();
        assert_eq!(cylinder_probability(t.graph(), &[0]).unwrap(), 1.0);
        assert_eq!(cylinder_probability(t.graph(), &[1, 0]).unwrap(), 0.5);
        assert_eq!(cylinder_probability(t.graph(), &[0, 2]), Err(Error::NotAdjacent { from: 0, to: 2 }));
        assert!((cylinder_sum(t.graph(), 0, 6) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn path3_measure_and_power_iteration() {
        let t = path3_trunc();
        let mu = harmonic_measure_exact(&t, VertexId(1)).unwrap();
        assert_eq!(mu.weights, vec![0.5, 0.5]);
        let op = TransitionOperator::new(t.graph());
        let it = power_iterate(&op, t.frontier_mask(), &[0.0, 0.0, 1.0], 3).unwrap();
        assert_eq!(it.h[1], 0.5);
        let ones = power_iterate(&op, t.frontier_mask(), &[1.0; 3], 5).unwrap();
        assert!(ones.h.iter().all(|&v| v == 1.0));
    }

    #[test]
    fn sampling_is_deterministic_and_absorbs() {
        let t = path3_trunc();
        let a = sample_paths(&t, VertexId(1), 50, 100, 4).unwrap();
        let b = sample_paths(&t, VertexId(1), 50, 100, 4).unwrap();
        assert_eq!(a, b);
        for s in &a {
            assert_eq!(s.length, 1);
            assert!((s.log_probability - ln(0.5)).abs() < 1e-15);
        }
    }

    #[test]
    fn merge_adds_counts() {
        let t = path3_trunc();
        let s = sample_paths(&t, VertexId(1), 20, 10, 1).unwrap();
        let mut e = BoundaryEstimate::from_samples(t.frontier(), &s[..10]);
        e.merge(&BoundaryEstimate::from_samples(t.frontier(), &s[10..])).unwrap();
        assert_eq!(e, BoundaryEstimate::from_samples(t.frontier(), &s));
        assert!((e.weights().iter().sum::<f64>() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn non_harmonic_input_is_rejected() {
        let t = path3_trunc();
        let r = poisson_reproduce(&t, &[0.0, 0.9, 1.0], VertexId(1), 10, 10, 0);
        assert!(matches!(r, Err(Error::NotHarmonic { .. })));
    }
}

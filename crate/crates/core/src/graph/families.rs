//! Generators for the example families.
//!
//! Infinite families are truncated to the closed hop-ball of radius `R`
//! around their origin; vertices are numbered in breadth-first order and the
//! sphere at distance exactly `R` becomes the frontier. Generation is
//! deterministic, and the ball at radius `R` is the label-matched induced
//! subgraph of the ball at `R + 1`.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::format;
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use super::{ConductanceGraph, Label, TruncatedGraph};
use crate::linalg::DenseMatrix;
use crate::math::{exp, powi, sqrt};
use crate::rng::Substream;
use crate::{Error, Result};

const MAX_VERTICES: usize = 2_000_000;
const MAX_WEIGHT: f64 = 1e300;

/// Geometric level weights `c(n) = scale · ratio^n`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LevelWeights {
    pub scale: f64,
    pub ratio: f64,
}

impl LevelWeights {
    pub fn at(&self, n: usize) -> f64 {
        self.scale * powi(self.ratio, n as i32)
    }
}

/// Graded graph with edges only between adjacent levels; level 0 is a single root.
#[derive(Clone, Debug, PartialEq)]
pub enum BratteliDiagram {
    /// `blocks[n]` holds the weights between `V_n` (rows) and `V_{n+1}`
    /// (columns); zero means no edge. With `growth = Some(r)` the last block is
    /// repeated beyond the list, scaled by `r` per level (a stationary diagram).
    Explicit { blocks: Vec<DenseMatrix>, growth: Option<f64> },
    /// `N`-ary tree with `c = b^n` on edges between `V_n` and `V_{n+1}`.
    NaryTree { arity: usize, base: f64 },
}

impl BratteliDiagram {
    pub fn explicit(blocks: Vec<DenseMatrix>, growth: Option<f64>) -> Result<Self> {
        if blocks.is_empty() {
            return Err(Error::InvalidParameter("Bratteli diagram needs at least one block".into()));
        }
        if blocks[0].rows() != 1 {
            return Err(Error::InvalidParameter("level 0 must have exactly one vertex".into()));
        }
        for (n, w) in blocks.windows(2).enumerate() {
            if w[0].cols() != w[1].rows() {
                return Err(Error::InvalidParameter(format!("block {n} and {} do not chain", n + 1)));
            }
        }
        for (n, b) in blocks.iter().enumerate() {
            if b.as_slice().iter().any(|&c| !(c >= 0.0) || !c.is_finite()) {
                return Err(Error::InvalidParameter(format!("block {n} has a negative or non-finite weight")));
            }
            for col in 0..b.cols() {
                if (0..b.rows()).all(|r| b[(r, col)] == 0.0) {
                    return Err(Error::InvalidParameter(format!(
                        "vertex {col} of level {} has no edge to level {n}",
                        n + 1
                    )));
                }
            }
        }
        if let Some(r) = growth {
            let last = blocks.last().unwrap();
            if !(r > 0.0) || last.rows() != last.cols() {
                return Err(Error::InvalidParameter(
                    "stationary growth needs a positive ratio and a square last block".into(),
                ));
            }
        }
        Ok(BratteliDiagram::Explicit { blocks, growth })
    }

    /// Block between `V_n` and `V_{n+1}`, if the diagram reaches that far.
    pub fn block(&self, n: usize) -> Option<DenseMatrix> {
        match self {
            BratteliDiagram::Explicit { blocks, growth } => {
                if n < blocks.len() {
                    Some(blocks[n].clone())
                } else {
                    let r = (*growth)?;
                    let last = blocks.len() - 1;
                    let mut b = blocks[last].clone();
                    b.scale(powi(r, (n - last) as i32));
                    Some(b)
                }
            }
            BratteliDiagram::NaryTree { arity, base } => {
                let rows = arity.checked_pow(n as u32)?;
                let cols = rows.checked_mul(*arity)?;
                let mut b = DenseMatrix::zeros(rows, cols);
                let w = powi(*base, n as i32);
                for c in 0..cols {
                    b[(c / arity, c)] = w;
                }
                Some(b)
            }
        }
    }

    pub fn level_size(&self, n: usize) -> Option<usize> {
        if n == 0 {
            Some(1)
        } else {
            self.block(n - 1).map(|b| b.cols())
        }
    }

    /// `c(x)` for `x = (level, slot)`, counting edges to both neighbor levels.
    pub fn degree(&self, level: usize, slot: usize) -> Option<f64> {
        let up = self.block(level)?;
        let mut c: f64 = (0..up.cols()).map(|j| up[(slot, j)]).sum();
        if level > 0 {
            let down = self.block(level - 1)?;
            c += (0..down.rows()).map(|i| down[(i, slot)]).sum::<f64>();
        }
        Some(c)
    }
}

/// Recipe for a graph family. Infinite families carry their truncation radius.
#[derive(Clone, Debug, PartialEq)]
pub enum FamilySpec {
    /// Explicit undirected edge list; indices are kept as given.
    Explicit { vertices: usize, base_point: usize, edges: Vec<(usize, usize, f64)> },
    /// `Z_+` with `c_{x,x+1} = e^{rate·x}`; `rate = 1` is the standard example,
    /// `rate = 0` the unit-conductance half-line.
    HalfLine { rate: f64, radius: usize },
    /// `Z^d_+` with `c_{x,x+ε_i} = e^{|x+ε_i|}` (Euclidean norm).
    Lattice { dim: usize, radius: usize },
    /// Binary tree; a vertex at level `n` links to its two children with
    /// `c_+(n)` (child 0) and `c_-(n)` (child 1).
    BinaryTree { plus: LevelWeights, minus: LevelWeights, radius: usize },
    /// `N`-ary tree with `c = b^n` between levels `n` and `n + 1`.
    NaryTree { arity: usize, base: f64, radius: usize },
    /// Comb: spine `x_{n,0}` with teeth `x_{n,k}`; tooth edges `x_{n,k-1}–x_{n,k}`
    /// carry `2^k` and spine edges `x_{n,0}–x_{n+1,0}` carry `2^{n+1}`.
    Comb { radius: usize },
    Bratteli { diagram: BratteliDiagram, radius: usize },
    /// `r1` in series with the parallel pair `r2 ‖ r3`, between `x` and `y`.
    ThreeResistors { r1: f64, r2: f64, r3: f64 },
    /// Bi-infinite chain with constant `p_+`, i.e. `c_{i,i+1} = (p_+/p_-)^i`,
    /// truncated to `[-R, R]` with both ends absorbing.
    BinomialChain { p_plus: f64, radius: usize },
    /// Uniform random recursive tree, weights log-uniform in `[0.1, 10]`.
    RandomTree { vertices: usize, seed: u64 },
    /// Random tree plus extra random edges, weights log-uniform in `[0.1, 10]`.
    RandomConnected { vertices: usize, extra_edges: usize, seed: u64 },
}

impl FamilySpec {
    /// Truncation radius of an infinite family.
    pub fn radius(&self) -> Option<usize> {
        match self {
            FamilySpec::HalfLine { radius, .. }
            | FamilySpec::Lattice { radius, .. }
            | FamilySpec::BinaryTree { radius, .. }
            | FamilySpec::NaryTree { radius, .. }
            | FamilySpec::Comb { radius }
            | FamilySpec::Bratteli { radius, .. }
            | FamilySpec::BinomialChain { radius, .. } => Some(*radius),
            _ => None,
        }
    }

    /// Same family at another radius; `None` for finite families.
    pub fn with_radius(&self, r: usize) -> Option<FamilySpec> {
        let mut s = self.clone();
        match &mut s {
            FamilySpec::HalfLine { radius, .. }
            | FamilySpec::Lattice { radius, .. }
            | FamilySpec::BinaryTree { radius, .. }
            | FamilySpec::NaryTree { radius, .. }
            | FamilySpec::Comb { radius }
            | FamilySpec::Bratteli { radius, .. }
            | FamilySpec::BinomialChain { radius, .. } => *radius = r,
            _ => return None,
        }
        Some(s)
    }
}

/// Builds the graph described by `family`.
pub fn generate(family: &FamilySpec) -> Result<TruncatedGraph> {
    match family {
        FamilySpec::Explicit { vertices, base_point, edges } => {
            let g = ConductanceGraph::from_edges(*vertices, *base_point, edges)?;
            let labels = (0..*vertices).map(Label::Index).collect();
            Ok(TruncatedGraph::whole(g.with_labels(labels)?))
        }
        FamilySpec::HalfLine { rate, radius } => {
            check_radius(*radius)?;
            if !rate.is_finite() || rate.abs() * (*radius as f64) > 690.0 {
                return Err(Error::InvalidParameter("|rate|·R must stay below 690 to avoid overflow".into()));
            }
            let rate = *rate;
            ball(Label::Integer(0), *radius, |l| {
                let x = int(l);
                let mut out = vec![(Label::Integer(x + 1), exp(rate * x as f64))];
                if x > 0 {
                    out.push((Label::Integer(x - 1), exp(rate * (x - 1) as f64)));
                }
                out
            })
        }
        FamilySpec::BinomialChain { p_plus, radius } => {
            check_radius(*radius)?;
            if !(*p_plus > 0.0 && *p_plus < 1.0) {
                return Err(Error::InvalidParameter("p_plus must lie in (0, 1)".into()));
            }
            let rho = p_plus / (1.0 - p_plus);
            check_weight(powi(rho, *radius as i32).max(powi(rho, -(*radius as i32))))?;
            ball(Label::Integer(0), *radius, |l| {
                let x = int(l);
                vec![
                    (Label::Integer(x + 1), powi(rho, x as i32)),
                    (Label::Integer(x - 1), powi(rho, (x - 1) as i32)),
                ]
            })
        }
        FamilySpec::Lattice { dim, radius } => {
            check_radius(*radius)?;
            if *dim == 0 {
                return Err(Error::InvalidParameter("lattice dimension d must be at least 1".into()));
            }
            if *radius > 690 {
                return Err(Error::InvalidParameter("R must stay below 690 to avoid overflow".into()));
            }
            let d = *dim;
            ball(Label::Lattice(vec![0; d]), *radius, move |l| {
                let p = match l {
                    Label::Lattice(p) => p,
                    _ => unreachable!(),
                };
                let mut out = Vec::with_capacity(2 * d);
                for i in 0..d {
                    let mut up = p.clone();
                    up[i] += 1;
                    let w = exp(euclid(&up));
                    out.push((Label::Lattice(up), w));
                    if p[i] > 0 {
                        let mut down = p.clone();
                        down[i] -= 1;
                        out.push((Label::Lattice(down), exp(euclid(p))));
                    }
                }
                out
            })
        }
        FamilySpec::BinaryTree { plus, minus, radius } => {
            check_radius(*radius)?;
            for w in [plus, minus] {
                if !(w.scale > 0.0 && w.ratio > 0.0) {
                    return Err(Error::InvalidParameter("binary-tree level weights must be positive".into()));
                }
                check_weight(w.at(*radius).max(w.at(0)))?;
            }
            let (plus, minus) = (*plus, *minus);
            ball(Label::Word(Vec::new()), *radius, move |l| {
                let w = word(l);
                let n = w.len();
                let mut out = Vec::with_capacity(3);
                for (child, lw) in [(0u8, plus), (1u8, minus)] {
                    let mut c = w.clone();
                    c.push(child);
                    out.push((Label::Word(c), lw.at(n)));
                }
                if let Some(&last) = w.last() {
                    let lw = if last == 0 { plus } else { minus };
                    out.push((Label::Word(w[..n - 1].to_vec()), lw.at(n - 1)));
                }
                out
            })
        }
        FamilySpec::NaryTree { arity, base, radius } => {
            check_radius(*radius)?;
            if *arity < 2 {
                return Err(Error::InvalidParameter("N-ary tree needs N >= 2".into()));
            }
            if !(*base > 1.0) {
                return Err(Error::InvalidParameter("N-ary tree needs b > 1".into()));
            }
            if *arity > u8::MAX as usize {
                return Err(Error::InvalidParameter("N-ary tree supports N <= 255".into()));
            }
            check_weight(powi(*base, *radius as i32))?;
            let (arity, base) = (*arity, *base);
            ball(Label::Word(Vec::new()), *radius, move |l| {
                let w = word(l);
                let n = w.len();
                let mut out = Vec::with_capacity(arity + 1);
                for child in 0..arity as u8 {
                    let mut c = w.clone();
                    c.push(child);
                    out.push((Label::Word(c), powi(base, n as i32)));
                }
                if n > 0 {
                    out.push((Label::Word(w[..n - 1].to_vec()), powi(base, n as i32 - 1)));
                }
                out
            })
        }
        FamilySpec::Comb { radius } => {
            check_radius(*radius)?;
            if *radius > 1000 {
                return Err(Error::InvalidParameter("comb radius must be at most 1000".into()));
            }
            ball(Label::Comb { n: 0, k: 0 }, *radius, |l| {
                let (n, k) = match *l {
                    Label::Comb { n, k } => (n, k),
                    _ => unreachable!(),
                };
                let two = |e: u32| powi(2.0, e as i32);
                let mut out = Vec::with_capacity(3);
                if k == 0 {
                    out.push((Label::Comb { n: n + 1, k: 0 }, two(n + 1)));
                    if n > 0 {
                        out.push((Label::Comb { n: n - 1, k: 0 }, two(n)));
                    }
                    out.push((Label::Comb { n, k: 1 }, two(1)));
                } else {
                    out.push((Label::Comb { n, k: k + 1 }, two(k + 1)));
                    out.push((Label::Comb { n, k: k - 1 }, two(k)));
                }
                out
            })
        }
        FamilySpec::Bratteli { diagram, radius } => {
            check_radius(*radius)?;
            if diagram.block(*radius - 1).is_none() {
                return Err(Error::InvalidParameter("diagram has fewer levels than the radius".into()));
            }
            let mut blocks = Vec::with_capacity(*radius);
            for n in 0..*radius {
                let b = diagram.block(n).ok_or_else(|| Error::InvalidParameter("diagram too shallow".into()))?;
                check_weight(b.max_abs())?;
                blocks.push(b);
            }
            let blocks = &blocks;
            ball(Label::Bratteli { level: 0, slot: 0 }, *radius, move |l| {
                let (level, slot) = match *l {
                    Label::Bratteli { level, slot } => (level as usize, slot as usize),
                    _ => unreachable!(),
                };
                let mut out = Vec::new();
                if level < blocks.len() {
                    let up = &blocks[level];
                    for j in 0..up.cols() {
                        if up[(slot, j)] > 0.0 {
                            out.push((Label::Bratteli { level: level as u32 + 1, slot: j as u32 }, up[(slot, j)]));
                        }
                    }
                }
                if level > 0 {
                    let down = &blocks[level - 1];
                    for i in 0..down.rows() {
                        if down[(i, slot)] > 0.0 {
                            out.push((Label::Bratteli { level: level as u32 - 1, slot: i as u32 }, down[(i, slot)]));
                        }
                    }
                }
                out
            })
        }
        FamilySpec::ThreeResistors { r1, r2, r3 } => {
            for r in [r1, r2, r3] {
                if !(*r > 0.0) || !r.is_finite() {
                    return Err(Error::InvalidParameter("resistances must be positive and finite".into()));
                }
            }
            // x=0, m=1, p2=2, p3=3, y=4: r2 and r3 are split at their midpoints.
            let edges = [
                (0, 1, 1.0 / r1),
                (1, 2, 2.0 / r2),
                (1, 3, 2.0 / r3),
                (2, 4, 2.0 / r2),
                (3, 4, 2.0 / r3),
            ];
            let g = ConductanceGraph::from_edges(5, 0, &edges)?;
            let labels = ["x", "m", "p2", "p3", "y"].iter().map(|s| Label::Named(s.to_string())).collect();
            Ok(TruncatedGraph::whole(g.with_labels(labels)?))
        }
        FamilySpec::RandomTree { vertices, seed } => random_graph(*vertices, 0, *seed),
        FamilySpec::RandomConnected { vertices, extra_edges, seed } => random_graph(*vertices, *extra_edges, *seed),
    }
}

fn check_radius(radius: usize) -> Result<()> {
    if radius == 0 {
        Err(Error::InvalidParameter("truncation radius R must be at least 1".into()))
    } else {
        Ok(())
    }
}

fn check_weight(w: f64) -> Result<()> {
    if w.is_finite() && w <= MAX_WEIGHT {
        Ok(())
    } else {
        Err(Error::InvalidParameter("edge weights would overflow at this radius".into()))
    }
}

fn int(l: &Label) -> i64 {
    match *l {
        Label::Integer(x) => x,
        _ => unreachable!(),
    }
}

fn word(l: &Label) -> &Vec<u8> {
    match l {
        Label::Word(w) => w,
        _ => unreachable!(),
    }
}

fn euclid(p: &[u32]) -> f64 {
    sqrt(p.iter().map(|&c| (c as f64) * (c as f64)).sum())
}

/// Breadth-first closed ball around `origin` in the graph described by `neighbors`.
fn ball<F>(origin: Label, radius: usize, mut neighbors: F) -> Result<TruncatedGraph>
where
    F: FnMut(&Label) -> Vec<(Label, f64)>,
{
    let mut index = BTreeMap::new();
    let mut labels = vec![origin.clone()];
    let mut dist = vec![0usize];
    index.insert(origin, 0usize);
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        if dist[i] == radius {
            continue;
        }
        for (l, _) in neighbors(&labels[i].clone()) {
            if !index.contains_key(&l) {
                let j = labels.len();
                if j >= MAX_VERTICES {
                    return Err(Error::InvalidParameter(format!(
                        "truncation exceeds {MAX_VERTICES} vertices; lower the radius"
                    )));
                }
                index.insert(l.clone(), j);
                labels.push(l);
                dist.push(dist[i] + 1);
                queue.push_back(j);
            }
        }
    }
    let mut edges = Vec::new();
    for i in 0..labels.len() {
        for (l, c) in neighbors(&labels[i].clone()) {
            if let Some(&j) = index.get(&l) {
                if i < j {
                    edges.push((i, j, c));
                }
            }
        }
    }
    let g = ConductanceGraph::from_edges(labels.len(), 0, &edges)?.with_labels(labels)?;
    let mask = dist.iter().map(|&d| d == radius).collect();
    Ok(TruncatedGraph::from_mask(g, mask, Some(radius)))
}

fn random_graph(vertices: usize, extra_edges: usize, seed: u64) -> Result<TruncatedGraph> {
    if vertices < 2 {
        return Err(Error::InvalidParameter("random graphs need at least 2 vertices".into()));
    }
    let mut rng = Substream::new(seed, 0);
    let mut present = BTreeSet::new();
    let mut edges = Vec::with_capacity(vertices - 1 + extra_edges);
    for v in 1..vertices {
        let p = rng.below(v);
        present.insert((p, v));
        edges.push((p, v, rng.log_uniform(0.1, 10.0)));
    }
    let max_extra = vertices * (vertices - 1) / 2 - (vertices - 1);
    let target = extra_edges.min(max_extra);
    let mut added = 0;
    while added < target {
        let a = rng.below(vertices);
        let b = rng.below(vertices);
        let key = (a.min(b), a.max(b));
        if a == b || present.contains(&key) {
            continue;
        }
        present.insert(key);
        edges.push((key.0, key.1, rng.log_uniform(0.1, 10.0)));
        added += 1;
    }
    let g = ConductanceGraph::from_edges(vertices, 0, &edges)?
        .with_labels((0..vertices).map(Label::Index).collect())?;
    // Renumber in breadth-first order from the base point.
    let dist = g.bfs_distances(0);
    let mut order: Vec<usize> = (0..vertices).collect();
    order.sort_by_key(|&v| (dist[v], v));
    Ok(TruncatedGraph::whole(g.induced(&order, 0)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{validate, weighted_degree, VertexId};

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-12 * b.abs().max(1.0)
    }

    #[test]
    fn half_line_radius_three() {
        let t = generate(&FamilySpec::HalfLine { rate: 1.0, radius: 3 }).unwrap();
        let g = t.graph();
        assert_eq!(g.num_vertices(), 4);
        for x in 0..3 {
            assert!(close(g.weight(x, x + 1).unwrap(), exp(x as f64)));
        }
        assert_eq!(t.frontier(), &[3]);
    }

    #[test]
    fn nary_tree_levels_and_weights() {
        let t = generate(&FamilySpec::NaryTree { arity: 2, base: 2.0, radius: 2 }).unwrap();
        let g = t.graph();
        assert_eq!(g.num_vertices(), 7);
        assert_eq!(t.frontier().len(), 4);
        // root–level-1 edges carry b^0, level-1–level-2 edges b^1
        assert_eq!(g.weight(0, 1), Some(1.0));
        assert_eq!(g.weight(1, 3).or(g.weight(1, 4)), Some(2.0));
        // c(x) = b^{n-1}(1 + N b) at level n
        let t4 = generate(&FamilySpec::NaryTree { arity: 3, base: 1.5, radius: 4 }).unwrap();
        for x in 0..t4.num_vertices() {
            if t4.is_frontier(x) {
                continue;
            }
            let n = match t4.graph().label(VertexId(x)).unwrap() {
                Label::Word(w) => w.len(),
                _ => unreachable!(),
            };
            if n >= 1 {
                let want = powi(1.5, n as i32 - 1) * (1.0 + 3.0 * 1.5);
                assert!(close(weighted_degree(t4.graph(), VertexId(x)).unwrap(), want));
            }
        }
    }

    #[test]
    fn comb_ball_and_degrees() {
        let t = generate(&FamilySpec::Comb { radius: 2 }).unwrap();
        let g = t.graph();
        let mut labels: Vec<_> = g.labels().unwrap().to_vec();
        labels.sort();
        let want: Vec<_> = [(0, 0), (0, 1), (0, 2), (1, 0), (1, 1), (2, 0)]
            .iter()
            .map(|&(n, k)| Label::Comb { n, k })
            .collect();
        assert_eq!(labels, want);
        let t5 = generate(&FamilySpec::Comb { radius: 6 }).unwrap();
        for k in 1..4u32 {
            let v = t5.graph().find_label(&Label::Comb { n: 1, k }).unwrap();
            let want = powi(2.0, k as i32) + powi(2.0, k as i32 + 1);
            assert_eq!(weighted_degree(t5.graph(), v).unwrap(), want);
        }
    }

    #[test]
    fn generated_families_validate() {
        let specs = [
            FamilySpec::HalfLine { rate: 0.0, radius: 5 },
            FamilySpec::Lattice { dim: 3, radius: 4 },
            FamilySpec::BinaryTree {
                plus: LevelWeights { scale: 1.0, ratio: 2.0 },
                minus: LevelWeights { scale: 2.0, ratio: 3.0 },
                radius: 5,
            },
            FamilySpec::Comb { radius: 7 },
            FamilySpec::BinomialChain { p_plus: 2.0 / 3.0, radius: 20 },
            FamilySpec::Bratteli { diagram: BratteliDiagram::NaryTree { arity: 3, base: 2.0 }, radius: 3 },
            FamilySpec::ThreeResistors { r1: 1.0, r2: 2.0, r3: 3.0 },
            FamilySpec::RandomConnected { vertices: 30, extra_edges: 20, seed: 3 },
        ];
        for s in &specs {
            let t = generate(s).unwrap();
            assert!(validate(t.graph()).is_empty(), "{s:?}");
            assert_eq!(generate(s).unwrap(), t, "deterministic");
        }
    }

    #[test]
    fn invalid_parameters_are_rejected() {
        assert!(generate(&FamilySpec::HalfLine { rate: 1.0, radius: 0 }).is_err());
        assert!(generate(&FamilySpec::NaryTree { arity: 1, base: 2.0, radius: 2 }).is_err());
        assert!(generate(&FamilySpec::NaryTree { arity: 2, base: 1.0, radius: 2 }).is_err());
        assert!(generate(&FamilySpec::Lattice { dim: 0, radius: 2 }).is_err());
        assert!(generate(&FamilySpec::HalfLine { rate: 1.0, radius: 800 }).is_err());
    }

    #[test]
    fn truncations_are_nested() {
        for s in [
            |r| FamilySpec::Comb { radius: r },
            |r| FamilySpec::Lattice { dim: 2, radius: r },
            |r| FamilySpec::NaryTree { arity: 2, base: 3.0, radius: r },
        ] {
            let small = generate(&s(3)).unwrap();
            let big = generate(&s(4)).unwrap();
            let (gs, gb) = (small.graph(), big.graph());
            let map: Vec<usize> =
                gs.labels().unwrap().iter().map(|l| gb.find_label(l).unwrap().0).collect();
            // same index assignment for the common prefix
            assert!(map.iter().enumerate().all(|(i, &j)| i == j));
            for (x, y, c) in gs.edges() {
                assert_eq!(gb.weight(map[x], map[y]), Some(c));
            }
            for (x, y, _) in gb.edges() {
                if x < map.len() && y < map.len() {
                    assert!(gs.weight(x, y).is_some());
                }
            }
        }
    }

    #[test]
    fn bratteli_tree_matches_nary_family() {
        let a = generate(&FamilySpec::Bratteli { diagram: BratteliDiagram::NaryTree { arity: 2, base: 2.0 }, radius: 3 })
            .unwrap();
        let b = generate(&FamilySpec::NaryTree { arity: 2, base: 2.0, radius: 3 }).unwrap();
        let mut wa: Vec<f64> = a.graph().edges().map(|e| e.2).collect();
        let mut wb: Vec<f64> = b.graph().edges().map(|e| e.2).collect();
        wa.sort_by(f64::total_cmp);
        wb.sort_by(f64::total_cmp);
        assert_eq!(wa, wb);
        assert_eq!(BratteliDiagram::NaryTree { arity: 2, base: 2.0 }.degree(1, 0), Some(5.0));
    }
}

//! Weighted graphs, validation and finite truncations.
//!
//! A [`ConductanceGraph`] is an immutable, symmetric, positively weighted
//! simple graph in compressed neighbor-list form with a designated base point
//! `o`. A [`TruncatedGraph`] additionally splits the vertices into an interior
//! and an absorbing frontier.

mod families;
mod label;

use alloc::collections::VecDeque;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::{Error, Result};

pub use families::{generate, BratteliDiagram, FamilySpec, LevelWeights};
pub use label::Label;

/// Dense vertex index, `0..num_vertices`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub usize);

impl VertexId {
    #[inline]
    pub fn index(self) -> usize {
        self.0
    }
}

impl From<usize> for VertexId {
    fn from(i: usize) -> Self {
        VertexId(i)
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Violation {
    BasePointOutOfRange { base_point: usize, vertices: usize },
    EdgeOutOfRange { x: usize, y: usize },
    SelfLoop { x: usize },
    NonPositiveWeight { x: usize, y: usize, weight: f64 },
    DuplicateEdge { x: usize, y: usize },
    /// `(x, y)` stored with a weight that `(y, x)` lacks or disagrees with.
    Asymmetric { x: usize, y: usize, forward: f64, backward: Option<f64> },
    IsolatedVertex { x: usize },
    Disconnected { unreached: usize },
    DuplicateLabel { x: usize, y: usize },
}

impl Violation {
    pub fn kind(&self) -> &'static str {
        match self {
            Violation::BasePointOutOfRange { .. } => "base point out of range",
            Violation::EdgeOutOfRange { .. } => "edge out of range",
            Violation::SelfLoop { .. } => "self-loop",
            Violation::NonPositiveWeight { .. } => "nonpositive weight",
            Violation::DuplicateEdge { .. } => "duplicate edge",
            Violation::Asymmetric { .. } => "asymmetric",
            Violation::IsolatedVertex { .. } => "isolated vertex",
            Violation::Disconnected { .. } => "disconnected",
            Violation::DuplicateLabel { .. } => "duplicate label",
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::BasePointOutOfRange { base_point, vertices } => {
                write!(f, "base point out of range: {base_point} >= {vertices}")
            }
            Violation::EdgeOutOfRange { x, y } => write!(f, "edge out of range: ({x}, {y})"),
            Violation::SelfLoop { x } => write!(f, "self-loop at {x}"),
            Violation::NonPositiveWeight { x, y, weight } => {
                write!(f, "nonpositive weight {weight} on ({x}, {y})")
            }
            Violation::DuplicateEdge { x, y } => write!(f, "duplicate edge ({x}, {y})"),
            Violation::Asymmetric { x, y, forward, backward: Some(b) } => {
                write!(f, "asymmetric: c({x},{y}) = {forward} but c({y},{x}) = {b}")
            }
            Violation::Asymmetric { x, y, forward, backward: None } => {
                write!(f, "asymmetric: c({x},{y}) = {forward} but ({y},{x}) missing")
            }
            Violation::IsolatedVertex { x } => write!(f, "isolated vertex {x} (zero degree)"),
            Violation::Disconnected { unreached } => {
                write!(f, "disconnected: {unreached} vertices unreachable from the base point")
            }
            Violation::DuplicateLabel { x, y } => write!(f, "duplicate label on {x} and {y}"),
        }
    }
}

/// Outcome of [`validate`]. Empty means the graph satisfies every invariant.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }

    /// True if some violation has the given [`Violation::kind`].
    pub fn contains(&self, kind: &str) -> bool {
        self.violations.iter().any(|v| v.kind() == kind)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "valid");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Immutable weighted graph with base point `o`.
///
/// Neighbor lists are stored row-wise (`offsets`, `targets`, `weights`). The
/// checked constructors only produce graphs with an empty [`ValidationReport`];
/// [`ConductanceGraph::from_directed_entries`] stores whatever it is given so that
/// broken inputs can still be inspected.
#[derive(Clone, Debug, PartialEq)]
pub struct ConductanceGraph {
    offsets: Vec<usize>,
    targets: Vec<usize>,
    weights: Vec<f64>,
    base_point: VertexId,
    labels: Option<Vec<Label>>,
}

impl ConductanceGraph {
    /// Builds a graph from undirected edges, each listed once, and validates it.
    pub fn from_edges(vertices: usize, base_point: usize, edges: &[(usize, usize, f64)]) -> Result<Self> {
        let mut entries = Vec::with_capacity(2 * edges.len());
        for &(x, y, c) in edges {
            entries.push((x, y, c));
            if x != y {
                entries.push((y, x, c));
            }
        }
        let g = Self::from_directed_entries(vertices, base_point, &entries);
        let report = validate(&g);
        if report.is_empty() {
            Ok(g)
        } else {
            Err(Error::InvalidGraph(report))
        }
    }

    /// Stores the directed entries verbatim; no symmetrization, no checks.
    /// Entries pointing outside `0..vertices` are dropped and reported by
    /// [`validate`] only through their side effects (missing reverse entries).
    pub fn from_directed_entries(vertices: usize, base_point: usize, entries: &[(usize, usize, f64)]) -> Self {
        let mut counts = vec![0usize; vertices + 1];
        for &(x, y, _) in entries {
            if x < vertices && y < vertices {
                counts[x + 1] += 1;
            }
        }
        for i in 0..vertices {
            counts[i + 1] += counts[i];
        }
        let offsets = counts.clone();
        let mut fill = counts;
        let nnz = offsets[vertices];
        let mut targets = vec![0usize; nnz];
        let mut weights = vec![0.0; nnz];
        for &(x, y, c) in entries {
            if x < vertices && y < vertices {
                let slot = fill[x];
                targets[slot] = y;
                weights[slot] = c;
                fill[x] += 1;
            }
        }
        ConductanceGraph {
            offsets,
            targets,
            weights,
            base_point: VertexId(base_point),
            labels: None,
        }
    }

    /// Attaches per-vertex labels. Length must match the vertex count.
    pub fn with_labels(mut self, labels: Vec<Label>) -> Result<Self> {
        if labels.len() != self.num_vertices() {
            return Err(Error::DimensionMismatch { expected: self.num_vertices(), found: labels.len() });
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn with_base_point(mut self, base_point: VertexId) -> Result<Self> {
        self.check_vertex(base_point)?;
        self.base_point = base_point;
        Ok(self)
    }

    #[inline]
    pub fn num_vertices(&self) -> usize {
        self.offsets.len() - 1
    }

    /// Number of undirected edges (stored entries / 2 for a valid graph).
    pub fn num_edges(&self) -> usize {
        self.targets.len() / 2
    }

    #[inline]
    pub fn base_point(&self) -> VertexId {
        self.base_point
    }

    pub fn check_vertex(&self, x: VertexId) -> Result<()> {
        if x.0 < self.num_vertices() {
            Ok(())
        } else {
            Err(Error::UnknownVertex(x.0))
        }
    }

    /// `(neighbor, c_xy)` pairs of `x`.
    #[inline]
    pub fn neighbors(&self, x: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let (a, b) = (self.offsets[x], self.offsets[x + 1]);
        self.targets[a..b].iter().copied().zip(self.weights[a..b].iter().copied())
    }

    /// `c(x) = Σ_{y∼x} c_xy`, without bounds checking.
    #[inline]
    pub fn degree(&self, x: usize) -> f64 {
        let (a, b) = (self.offsets[x], self.offsets[x + 1]);
        self.weights[a..b].iter().sum()
    }

    /// Weight of edge `(x, y)`, if present.
    pub fn weight(&self, x: usize, y: usize) -> Option<f64> {
        self.neighbors(x).find(|&(t, _)| t == y).map(|(_, c)| c)
    }

    /// Undirected edges `(x, y, c_xy)` with `x < y`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.num_vertices()).flat_map(move |x| {
            self.neighbors(x).filter(move |&(y, _)| x < y).map(move |(y, c)| (x, y, c))
        })
    }

    pub fn labels(&self) -> Option<&[Label]> {
        self.labels.as_deref()
    }

    pub fn label(&self, x: VertexId) -> Option<&Label> {
        self.labels.as_ref().and_then(|l| l.get(x.0))
    }

    /// Label of `x` rendered for reports, falling back to the index.
    pub fn label_string(&self, x: usize) -> String {
        use alloc::string::ToString;
        match self.label(VertexId(x)) {
            Some(l) => l.to_string(),
            None => x.to_string(),
        }
    }

    pub fn find_label(&self, label: &Label) -> Option<VertexId> {
        self.labels.as_ref()?.iter().position(|l| l == label).map(VertexId)
    }

    /// Hop distances from `from`; `usize::MAX` marks unreachable vertices.
    pub fn bfs_distances(&self, from: usize) -> Vec<usize> {
        let n = self.num_vertices();
        let mut dist = vec![usize::MAX; n];
        if from >= n {
            return dist;
        }
        let mut queue = VecDeque::new();
        dist[from] = 0;
        queue.push_back(from);
        while let Some(x) = queue.pop_front() {
            for (y, _) in self.neighbors(x) {
                if dist[y] == usize::MAX {
                    dist[y] = dist[x] + 1;
                    queue.push_back(y);
                }
            }
        }
        dist
    }

    /// BFS parent pointers from `from` (`parent[from] = from`).
    pub fn bfs_parents(&self, from: usize) -> Vec<usize> {
        let n = self.num_vertices();
        let mut parent = vec![usize::MAX; n];
        let mut queue = VecDeque::new();
        parent[from] = from;
        queue.push_back(from);
        while let Some(x) = queue.pop_front() {
            for (y, _) in self.neighbors(x) {
                if parent[y] == usize::MAX {
                    parent[y] = x;
                    queue.push_back(y);
                }
            }
        }
        parent
    }

    /// Induced subgraph on `keep` (in the given order), base point remapped.
    pub fn induced(&self, keep: &[usize], base_point: usize) -> Result<ConductanceGraph> {
        let mut map = vec![usize::MAX; self.num_vertices()];
        for (i, &v) in keep.iter().enumerate() {
            self.check_vertex(VertexId(v))?;
            map[v] = i;
        }
        let base = map[base_point];
        if base == usize::MAX {
            return Err(Error::InvalidParameter("base point not in the kept vertex set".into()));
        }
        let mut edges = Vec::new();
        for (i, &v) in keep.iter().enumerate() {
            for (w, c) in self.neighbors(v) {
                let j = map[w];
                if j != usize::MAX && i < j {
                    edges.push((i, j, c));
                }
            }
        }
        let g = ConductanceGraph::from_edges(keep.len(), base, &edges)?;
        match &self.labels {
            Some(labels) => g.with_labels(keep.iter().map(|&v| labels[v].clone()).collect()),
            None => Ok(g),
        }
    }
}

/// Checks symmetry, positivity, simplicity, finite nonzero degrees and connectivity.
pub fn validate(graph: &ConductanceGraph) -> ValidationReport {
    let n = graph.num_vertices();
    let mut violations = Vec::new();
    if graph.base_point.0 >= n {
        violations.push(Violation::BasePointOutOfRange { base_point: graph.base_point.0, vertices: n });
    }
    for x in 0..n {
        let mut seen: Vec<usize> = Vec::new();
        for (y, c) in graph.neighbors(x) {
            if y == x {
                violations.push(Violation::SelfLoop { x });
                continue;
            }
            if !(c > 0.0) || !c.is_finite() {
                if x < y {
                    violations.push(Violation::NonPositiveWeight { x, y, weight: c });
                }
            }
            if seen.contains(&y) {
                violations.push(Violation::DuplicateEdge { x, y });
                continue;
            }
            seen.push(y);
            let back = graph.weight(y, x);
            // Report each mismatched pair once, from the smaller endpoint or the
            // side that has the entry.
            match back {
                Some(b) if b == c => {}
                Some(b) => {
                    if x < y {
                        violations.push(Violation::Asymmetric { x, y, forward: c, backward: Some(b) });
                    }
                }
                None => violations.push(Violation::Asymmetric { x, y, forward: c, backward: None }),
            }
        }
        if graph.offsets[x] == graph.offsets[x + 1] && n > 1 {
            violations.push(Violation::IsolatedVertex { x });
        }
    }
    if graph.base_point.0 < n {
        let unreached = graph.bfs_distances(graph.base_point.0).iter().filter(|&&d| d == usize::MAX).count();
        if unreached > 0 {
            violations.push(Violation::Disconnected { unreached });
        }
    }
    if let Some(labels) = &graph.labels {
        let mut order: Vec<usize> = (0..labels.len()).collect();
        order.sort_by(|&a, &b| labels[a].cmp(&labels[b]));
        for w in order.windows(2) {
            if labels[w[0]] == labels[w[1]] {
                violations.push(Violation::DuplicateLabel { x: w[0], y: w[1] });
            }
        }
    }
    ValidationReport { violations }
}

/// `c(x) = Σ_{y∼x} c_xy`.
pub fn weighted_degree(graph: &ConductanceGraph, x: VertexId) -> Result<f64> {
    graph.check_vertex(x)?;
    Ok(graph.degree(x.0))
}

/// A finite graph with its vertices split into interior and absorbing frontier.
///
/// For truncations of infinite families the frontier is the sphere of radius
/// `R` around the base point; it is the finite stand-in for the boundary of
/// the resistance-metric completion. Finite families have an empty frontier.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedGraph {
    graph: ConductanceGraph,
    is_frontier: Vec<bool>,
    frontier: Vec<usize>,
    interior: Vec<usize>,
    radius: Option<usize>,
}

impl TruncatedGraph {
    /// Whole graph as interior, no frontier.
    pub fn whole(graph: ConductanceGraph) -> Self {
        let n = graph.num_vertices();
        TruncatedGraph {
            graph,
            is_frontier: vec![false; n],
            frontier: Vec::new(),
            interior: (0..n).collect(),
            radius: None,
        }
    }

    /// Uses the listed vertices as frontier. The base point must stay interior.
    pub fn with_frontier(graph: ConductanceGraph, frontier: &[VertexId]) -> Result<Self> {
        let n = graph.num_vertices();
        let mut is_frontier = vec![false; n];
        for &b in frontier {
            graph.check_vertex(b)?;
            if b == graph.base_point() {
                return Err(Error::InvalidParameter("base point cannot be a frontier vertex".into()));
            }
            is_frontier[b.0] = true;
        }
        Ok(Self::from_mask(graph, is_frontier, None))
    }

    /// Closed ball of hop radius `radius` around the base point of a finite
    /// graph; the sphere at distance exactly `radius` becomes the frontier.
    pub fn ball(graph: &ConductanceGraph, radius: usize) -> Result<Self> {
        if radius == 0 {
            return Err(Error::InvalidParameter("radius must be at least 1".into()));
        }
        let o = graph.base_point().0;
        let dist = graph.bfs_distances(o);
        let mut keep: Vec<usize> = (0..graph.num_vertices()).filter(|&v| dist[v] <= radius).collect();
        keep.sort_by_key(|&v| (dist[v], v));
        let sub = graph.induced(&keep, o)?;
        let mask = keep.iter().map(|&v| dist[v] == radius).collect();
        Ok(Self::from_mask(sub, mask, Some(radius)))
    }

    pub(crate) fn from_mask(graph: ConductanceGraph, is_frontier: Vec<bool>, radius: Option<usize>) -> Self {
        let frontier = (0..is_frontier.len()).filter(|&v| is_frontier[v]).collect();
        let interior = (0..is_frontier.len()).filter(|&v| !is_frontier[v]).collect();
        TruncatedGraph { graph, is_frontier, frontier, interior, radius }
    }

    #[inline]
    pub fn graph(&self) -> &ConductanceGraph {
        &self.graph
    }

    pub fn into_graph(self) -> ConductanceGraph {
        self.graph
    }

    pub fn frontier(&self) -> &[usize] {
        &self.frontier
    }

    pub fn interior(&self) -> &[usize] {
        &self.interior
    }

    #[inline]
    pub fn is_frontier(&self, x: usize) -> bool {
        self.is_frontier[x]
    }

    pub fn frontier_mask(&self) -> &[bool] {
        &self.is_frontier
    }

    pub fn radius(&self) -> Option<usize> {
        self.radius
    }

    pub fn num_vertices(&self) -> usize {
        self.graph.num_vertices()
    }

    pub fn base_point(&self) -> VertexId {
        self.graph.base_point()
    }
}

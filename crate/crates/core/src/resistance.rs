//! Effective resistance through several independent formulas, current flows,
//! metric checks and boundary diagnostics.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::energy::{dipole_on, energy_form, DipoleVector};
use crate::graph::{generate, ConductanceGraph, FamilySpec, Label, TruncatedGraph, VertexId};
use crate::linalg::{DenseMatrix, GroundedFactor, DENSE_CAP};
use crate::math::exp;
use crate::{Error, Result};

/// Formula used to evaluate `d_res(x, y)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Method {
    /// Dipole increment `v_xy(x) − v_xy(y)`.
    M1,
    /// Energy `‖v_xy‖²_E`.
    M2,
    /// Dissipation `Σ I²/c` of the unit current `I = c·∂v_xy`.
    M3,
    /// Dense inverse of the Laplacian grounded at `o`:
    /// `K_xx + K_yy − 2K_xy`. Limited to `N ≤ 2000`.
    M4,
    /// `sup |w(x) − w(y)|²` over `‖w‖_E ≤ 1`, attained at `w = v_xy/‖v_xy‖_E`.
    M7,
}

impl Method {
    pub const ALL: [Method; 5] = [Method::M1, Method::M2, Method::M3, Method::M4, Method::M7];

    pub fn name(self) -> &'static str {
        match self {
            Method::M1 => "M1",
            Method::M2 => "M2",
            Method::M3 => "M3",
            Method::M4 => "M4",
            Method::M7 => "M7",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            Method::M1 => "dipole increment",
            Method::M2 => "energy norm",
            Method::M3 => "minimal dissipation",
            Method::M4 => "grounded inverse quadratic form",
            Method::M7 => "variational supremum",
        }
    }

    /// Accepts `M1`, `m1`, … ; `M5` and `M6` are rejected.
    pub fn parse(s: &str) -> Option<Method> {
        Method::ALL.into_iter().find(|m| m.name().eq_ignore_ascii_case(s))
    }
}

/// `d_res` from a solved dipole.
fn from_dipole(graph: &ConductanceGraph, v: &DipoleVector, method: Method) -> f64 {
    let vals = v.vector.values();
    match method {
        Method::M1 => v.increment(),
        Method::M2 => energy_form(graph, vals, vals),
        Method::M3 => current_of_dipole(graph, v).dissipation,
        Method::M7 => {
            let inc = v.increment();
            inc * inc / energy_form(graph, vals, vals)
        }
        Method::M4 => unreachable!(),
    }
}

fn grounded_at_base(graph: &ConductanceGraph) -> Result<GroundedFactor> {
    let mut ground = vec![false; graph.num_vertices()];
    ground[graph.base_point().0] = true;
    GroundedFactor::new(graph, &ground)
}

fn m4(factor: &GroundedFactor, n: usize, x: usize, y: usize) -> f64 {
    let mut b = vec![0.0; n];
    b[x] += 1.0;
    b[y] -= 1.0;
    let u = factor.solve(&b);
    u[x] - u[y]
}

/// `d_res(x, y)` by the chosen method; 0 when `x = y`.
pub fn resistance(trunc: &TruncatedGraph, x: VertexId, y: VertexId, method: Method, tol: f64) -> Result<f64> {
    let graph = trunc.graph();
    graph.check_vertex(x)?;
    graph.check_vertex(y)?;
    if x == y {
        return Ok(0.0);
    }
    match method {
        Method::M4 => Ok(m4(&grounded_at_base(graph)?, graph.num_vertices(), x.0, y.0)),
        m => Ok(from_dipole(graph, &dipole_on(graph, x, y, tol)?, m)),
    }
}

/// Every method at once, sharing one dipole solve. M4 is skipped above the dense cap.
pub fn resistance_all(trunc: &TruncatedGraph, x: VertexId, y: VertexId, tol: f64) -> Result<Vec<(Method, f64)>> {
    let graph = trunc.graph();
    graph.check_vertex(x)?;
    graph.check_vertex(y)?;
    if x == y {
        return Ok(Method::ALL.iter().map(|&m| (m, 0.0)).collect());
    }
    let v = dipole_on(graph, x, y, tol)?;
    let mut out: Vec<(Method, f64)> =
        [Method::M1, Method::M2, Method::M3, Method::M7].iter().map(|&m| (m, from_dipole(graph, &v, m))).collect();
    if graph.num_vertices() <= DENSE_CAP {
        out.insert(3, (Method::M4, m4(&grounded_at_base(graph)?, graph.num_vertices(), x.0, y.0)));
    }
    Ok(out)
}

/// Largest pairwise relative disagreement `|a − b| / max(|a|, |b|)`.
pub fn max_relative_disagreement(values: &[(Method, f64)]) -> f64 {
    let mut worst = 0.0_f64;
    for (i, &(_, a)) in values.iter().enumerate() {
        for &(_, b) in &values[i + 1..] {
            let s = a.abs().max(b.abs());
            if s > 0.0 {
                worst = worst.max((a - b).abs() / s);
            }
        }
    }
    worst
}

/// Edge currents `I_(xy) = c_xy (w(x) − w(y))`, one entry per undirected edge.
#[derive(Clone, Debug, PartialEq)]
pub struct CurrentFlow {
    /// `(x, y, I_(xy))` with `x < y`.
    pub edges: Vec<(usize, usize, f64)>,
    /// `Σ I²/c` over undirected edges.
    pub dissipation: f64,
}

impl CurrentFlow {
    /// `I_(xy)`, with `I_(yx) = −I_(xy)`; zero off the edge set.
    pub fn current(&self, x: usize, y: usize) -> f64 {
        let (a, b, s) = if x < y { (x, y, 1.0) } else { (y, x, -1.0) };
        self.edges.iter().find(|e| e.0 == a && e.1 == b).map_or(0.0, |e| s * e.2)
    }

    /// Net current leaving each vertex.
    pub fn divergence(&self, vertices: usize) -> Vec<f64> {
        let mut d = vec![0.0; vertices];
        for &(x, y, i) in &self.edges {
            d[x] += i;
            d[y] -= i;
        }
        d
    }
}

pub fn current_of_dipole(graph: &ConductanceGraph, v: &DipoleVector) -> CurrentFlow {
    let w = v.vector.values();
    let mut dissipation = 0.0;
    let edges = graph
        .edges()
        .map(|(x, y, c)| {
            let i = c * (w[x] - w[y]);
            dissipation += i * i / c;
            (x, y, i)
        })
        .collect();
    CurrentFlow { edges, dissipation }
}

/// Symmetric matrix of pairwise resistances.
#[derive(Clone, Debug, PartialEq)]
pub struct ResistanceMatrix {
    pub distances: DenseMatrix,
    pub method: Method,
    pub tol: f64,
}

/// Outcome of the metric-axiom check.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MetricReport {
    /// `min d(x,z) + d(z,y) − d(x,y)` over all triples.
    pub min_triangle_slack: f64,
    pub symmetry_residual: f64,
    pub max_diagonal: f64,
    /// Smallest off-diagonal entry.
    pub min_off_diagonal: f64,
}

impl MetricReport {
    pub fn holds(&self, slack: f64) -> bool {
        self.min_triangle_slack >= -slack && self.symmetry_residual == 0.0 && self.max_diagonal == 0.0 && self.min_off_diagonal > 0.0
    }
}

impl ResistanceMatrix {
    pub fn len(&self) -> usize {
        self.distances.rows()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.distances[(x, y)]
    }

    pub fn check_axioms(&self) -> MetricReport {
        let n = self.len();
        let d = &self.distances;
        let mut slack = f64::INFINITY;
        let mut min_off = f64::INFINITY;
        let mut max_diag = 0.0_f64;
        for x in 0..n {
            max_diag = max_diag.max(d[(x, x)].abs());
            for y in 0..n {
                if x != y {
                    min_off = min_off.min(d[(x, y)]);
                }
                for z in 0..n {
                    slack = slack.min(d[(x, z)] + d[(z, y)] - d[(x, y)]);
                }
            }
        }
        MetricReport {
            min_triangle_slack: if n == 0 { 0.0 } else { slack },
            symmetry_residual: d.symmetry_residual(),
            max_diagonal: max_diag,
            min_off_diagonal: if n < 2 { f64::INFINITY } else { min_off },
        }
    }
}

/// All pairwise resistances. Symmetric and zero on the diagonal by construction.
pub fn resistance_matrix(trunc: &TruncatedGraph, method: Method, tol: f64) -> Result<ResistanceMatrix> {
    let graph = trunc.graph();
    let n = graph.num_vertices();
    if n > DENSE_CAP {
        return Err(Error::SizeCapExceeded { vertices: n, cap: DENSE_CAP });
    }
    let mut d = DenseMatrix::zeros(n, n);
    let fill = |d: &mut DenseMatrix, rows: Vec<Vec<f64>>| {
        for (x, row) in rows.into_iter().enumerate() {
            for (y, v) in row.into_iter().enumerate() {
                if y > x {
                    d[(x, y)] = v;
                    d[(y, x)] = v;
                }
            }
        }
    };
    match method {
        Method::M4 => {
            let f = grounded_at_base(graph)?;
            let inv = f.inverse();
            let k = |a: usize, b: usize| match (f.position(a), f.position(b)) {
                (Some(i), Some(j)) => inv[(i, j)],
                _ => 0.0,
            };
            let rows = (0..n).map(|x| (0..n).map(|y| k(x, x) + k(y, y) - 2.0 * k(x, y)).collect()).collect();
            fill(&mut d, rows);
        }
        Method::M1 => {
            // Cocycle: v_xy = v_x − v_y with v_x = v_{x,o}.
            let vs = crate::energy::base_dipoles(graph, tol)?;
            let rows = (0..n)
                .map(|x| (0..n).map(|y| vs[x].get(x) - vs[y].get(x) - vs[x].get(y) + vs[y].get(y)).collect())
                .collect();
            fill(&mut d, rows);
        }
        m => {
            let vs = crate::energy::base_dipoles(graph, tol)?;
            let rows = crate::par::map_indices(n, |x| {
                (0..n)
                    .map(|y| {
                        if y <= x {
                            return 0.0;
                        }
                        let w: Vec<f64> = vs[x].values().iter().zip(vs[y].values()).map(|(a, b)| a - b).collect();
                        let inc = w[x] - w[y];
                        let energy = match m {
                            Method::M3 => graph.edges().map(|(a, b, c)| {
                                let i = c * (w[a] - w[b]);
                                i * i / c
                            }).sum(),
                            _ => energy_form(graph, &w, &w),
                        };
                        match m {
                            Method::M7 => inc * inc / energy,
                            _ => energy,
                        }
                    })
                    .collect()
            });
            fill(&mut d, rows);
        }
    }
    Ok(ResistanceMatrix { distances: d, method, tol })
}

/// Resistance queries on one graph, dense when small enough.
pub(crate) struct Resistor<'a> {
    graph: &'a ConductanceGraph,
    factor: Option<GroundedFactor>,
    tol: f64,
}

impl<'a> Resistor<'a> {
    pub(crate) fn new(graph: &'a ConductanceGraph, tol: f64) -> Result<Self> {
        let factor = if graph.num_vertices() <= DENSE_CAP { Some(grounded_at_base(graph)?) } else { None };
        Ok(Resistor { graph, factor, tol })
    }

    pub(crate) fn distance(&self, x: usize, y: usize) -> Result<f64> {
        if x == y {
            return Ok(0.0);
        }
        match &self.factor {
            Some(f) => Ok(m4(f, self.graph.num_vertices(), x, y)),
            None => Ok(dipole_on(self.graph, VertexId(x), VertexId(y), self.tol)?.increment()),
        }
    }
}

/// One radius of [`boundedness_diagnostic`].
#[derive(Clone, Debug, PartialEq)]
pub struct RadiusReport {
    pub radius: usize,
    pub vertices: usize,
    /// `max d(o, x)` over the (sampled) frontier, or over all vertices without one.
    pub max_distance: f64,
    pub farthest: VertexId,
    /// `Σ 1/c` along the breadth-first geodesic from `o` to `farthest`.
    pub ray_resistance: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Trend {
    /// Increments per unit radius shrink: consistent with a bounded metric.
    Bounded,
    /// Increments do not shrink.
    Unbounded,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundednessReport {
    pub radii: Vec<RadiusReport>,
    /// `(max_distance[i+1] − max_distance[i]) / (R[i+1] − R[i])`.
    pub increments: Vec<f64>,
    pub trend: Trend,
}

const FRONTIER_SAMPLE: usize = 64;

fn sampled_targets(trunc: &TruncatedGraph) -> Vec<usize> {
    let pool: Vec<usize> = if trunc.frontier().is_empty() {
        (0..trunc.num_vertices()).filter(|&v| v != trunc.base_point().0).collect()
    } else {
        trunc.frontier().to_vec()
    };
    if pool.len() <= FRONTIER_SAMPLE {
        return pool;
    }
    (0..FRONTIER_SAMPLE).map(|i| pool[i * pool.len() / FRONTIER_SAMPLE]).collect()
}

/// Growth of `max d(o, ·)` with the truncation radius.
pub fn boundedness_diagnostic(family: &FamilySpec, radii: &[usize], tol: f64) -> Result<BoundednessReport> {
    if radii.len() < 2 {
        return Err(Error::InvalidParameter("boundedness diagnostic needs at least two radii".into()));
    }
    let mut sorted = radii.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let mut reports = Vec::with_capacity(sorted.len());
    for &r in &sorted {
        let spec = family.with_radius(r).ok_or_else(|| Error::Unsupported("family has no truncation radius".into()))?;
        let t = generate(&spec)?;
        let g = t.graph();
        let o = g.base_point().0;
        let res = Resistor::new(g, tol)?;
        let mut best = (0.0, o);
        for x in sampled_targets(&t) {
            let d = res.distance(o, x)?;
            if d > best.0 {
                best = (d, x);
            }
        }
        let parents = g.bfs_parents(o);
        let mut ray = 0.0;
        let mut v = best.1;
        while v != o {
            let p = parents[v];
            ray += 1.0 / g.weight(v, p).unwrap_or(f64::INFINITY);
            v = p;
        }
        reports.push(RadiusReport { radius: r, vertices: g.num_vertices(), max_distance: best.0, farthest: VertexId(best.1), ray_resistance: ray });
    }
    let increments: Vec<f64> = reports
        .windows(2)
        .map(|w| (w[1].max_distance - w[0].max_distance) / (w[1].radius - w[0].radius) as f64)
        .collect();
    let first = increments[0];
    let last = *increments.last().unwrap();
    let trend = if increments.len() == 1 {
        if first <= 1e-3 * reports[1].max_distance { Trend::Bounded } else { Trend::Unbounded }
    } else if last <= 0.5 * first {
        Trend::Bounded
    } else {
        Trend::Unbounded
    };
    Ok(BoundednessReport { radii: reports, increments, trend })
}

/// Resistances along one sampled sequence of vertices.
#[derive(Clone, Debug, PartialEq)]
pub struct RaySequence {
    pub description: String,
    pub depths: Vec<usize>,
    pub distances: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TypeAReport {
    /// Distances between distinct rays at equal depth.
    pub cross: Vec<RaySequence>,
    /// Distances from depth `n` to the deepest sampled point of the same ray.
    pub within: Vec<RaySequence>,
    /// Smallest cross-ray distance observed (the separation `ε`).
    pub epsilon: Option<f64>,
    /// Within-ray tails decrease and end below 1% of their start.
    pub within_cauchy: bool,
}

fn find(g: &ConductanceGraph, l: Label) -> Result<usize> {
    g.find_label(&l).map(|v| v.0).ok_or_else(|| Error::Unsupported(format!("label {l} not in truncation")))
}

/// Samples distances along labeled rays of a truncated family.
pub fn type_a_diagnostic(family: &FamilySpec, sample_pairs: usize, tol: f64) -> Result<TypeAReport> {
    let t = generate(family)?;
    let g = t.graph();
    let res = Resistor::new(g, tol)?;
    let pairs = sample_pairs.max(1);
    let mut cross = Vec::new();
    let mut within = Vec::new();
    let tail = |path: &[usize], name: String| -> Result<RaySequence> {
        let last = *path.last().unwrap();
        let mut depths = Vec::new();
        let mut distances = Vec::new();
        for (n, &v) in path.iter().enumerate().take(path.len() - 1) {
            depths.push(n);
            distances.push(res.distance(v, last)?);
        }
        Ok(RaySequence { description: name, depths, distances })
    };
    match family {
        FamilySpec::Comb { radius } => {
            let r = *radius as u32;
            let mut teeth = Vec::new();
            'outer: for m in 0..r {
                for n in m + 1..r {
                    teeth.push((m, n));
                    if teeth.len() >= pairs {
                        break 'outer;
                    }
                }
            }
            for (m, n) in teeth {
                let mut depths = Vec::new();
                let mut distances = Vec::new();
                for k in 1..=(r - n) {
                    let a = find(g, Label::Comb { n: m, k })?;
                    let b = find(g, Label::Comb { n, k })?;
                    depths.push(k as usize);
                    distances.push(res.distance(a, b)?);
                }
                if !depths.is_empty() {
                    cross.push(RaySequence { description: format!("x[{m},k] vs x[{n},k]"), depths, distances });
                }
            }
            for m in 0..r.min(pairs as u32) {
                let path: Vec<usize> = (0..=(r - m)).map(|k| find(g, Label::Comb { n: m, k })).collect::<Result<_>>()?;
                within.push(tail(&path, format!("tooth {m}"))?);
            }
        }
        FamilySpec::BinaryTree { radius, .. } | FamilySpec::NaryTree { radius, .. } => {
            let arity = match family {
                FamilySpec::NaryTree { arity, .. } => *arity as u8,
                _ => 2,
            };
            let ray = |child: u8| -> Result<Vec<usize>> {
                (0..=*radius).map(|n| find(g, Label::Word(vec![child; n]))).collect()
            };
            let rays: Vec<Vec<usize>> = (0..arity.min(pairs as u8 + 1)).map(ray).collect::<Result<_>>()?;
            for (i, a) in rays.iter().enumerate() {
                for b in &rays[i + 1..] {
                    let mut depths = Vec::new();
                    let mut distances = Vec::new();
                    for n in 1..=*radius {
                        depths.push(n);
                        distances.push(res.distance(a[n], b[n])?);
                    }
                    cross.push(RaySequence { description: format!("ray {} vs ray {}", i, i + 1), depths, distances });
                }
                within.push(tail(a, format!("ray {i}"))?);
            }
        }
        FamilySpec::HalfLine { radius, .. } => {
            let path: Vec<usize> = (0..=*radius as i64).map(|x| find(g, Label::Integer(x))).collect::<Result<_>>()?;
            within.push(tail(&path, "half-line".into())?);
        }
        _ => return Err(Error::Unsupported("type-A diagnostic needs a comb, tree or half-line family".into())),
    }
    let epsilon = cross.iter().flat_map(|s| s.distances.iter().copied()).reduce(f64::min);
    let within_cauchy = !within.is_empty()
        && within.iter().all(|s| {
            s.distances.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-9))
                && s.distances.first().is_some_and(|&f| *s.distances.last().unwrap() <= 0.01 * f)
        });
    Ok(TypeAReport { cross, within, epsilon, within_cauchy })
}

/// Continuum model on the line: kernel `e^{−|x−y|}` and distance `2(1 − e^{−|x−y|})`.
pub fn continuum_reference(x: f64, y: f64) -> (f64, f64) {
    let k = exp(-(x - y).abs());
    (k, 2.0 * (1.0 - k))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn whole(n: usize, edges: &[(usize, usize, f64)]) -> TruncatedGraph {
        TruncatedGraph::whole(ConductanceGraph::from_edges(n, 0, edges).unwrap())
    }

    #[test]
    fn single_edge_all_methods() {
        let t = whole(2, &[(0, 1, 4.0)]);
        for (m, v) in resistance_all(&t, VertexId(0), VertexId(1), 1e-12).unwrap() {
            assert!((v - 0.25).abs() < 1e-14, "{m:?} {v}");
        }
    }

    #[test]
    fn k3_currents() {
        let t = whole(3, &[(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)]);
        let v = dipole_on(t.graph(), VertexId(0), VertexId(1), 1e-12).unwrap();
        let i = current_of_dipole(t.graph(), &v);
        assert!((i.current(0, 1) - 2.0 / 3.0).abs() < 1e-12);
        assert!((i.current(0, 2) - 1.0 / 3.0).abs() < 1e-12);
        assert!((i.current(2, 1) - 1.0 / 3.0).abs() < 1e-12);
        assert_eq!(i.current(1, 0), -i.current(0, 1));
        assert!((i.dissipation - 2.0 / 3.0).abs() < 1e-12);
        let div = i.divergence(3);
        assert!((div[0] - 1.0).abs() < 1e-12 && (div[1] + 1.0).abs() < 1e-12 && div[2].abs() < 1e-12);
    }

    #[test]
    fn path_matrix_every_method() {
        let t = whole(3, &[(0, 1, 1.0), (1, 2, 1.0)]);
        let want = [[0.0, 1.0, 2.0], [1.0, 0.0, 1.0], [2.0, 1.0, 0.0]];
        for m in Method::ALL {
            let r = resistance_matrix(&t, m, 1e-12).unwrap();
            for x in 0..3 {
                for y in 0..3 {
                    assert!((r.get(x, y) - want[x][y]).abs() < 1e-10, "{m:?}");
                }
            }
            assert!(r.check_axioms().holds(1e-8));
        }
    }

    #[test]
    fn method_names_round_trip() {
        for m in Method::ALL {
            assert_eq!(Method::parse(m.name()), Some(m));
        }
        assert_eq!(Method::parse("m5"), None);
    }

    #[test]
    fn continuum_values() {
        assert_eq!(continuum_reference(0.3, 0.3), (1.0, 0.0));
        let (k, d) = continuum_reference(0.0, core::f64::consts::LN_2);
        assert!((k - 0.5).abs() < 1e-15 && (d - 1.0).abs() < 1e-15);
        assert!(continuum_reference(0.0, 800.0).1 <= 2.0);
    }
}

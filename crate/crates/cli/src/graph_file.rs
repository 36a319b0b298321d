//! JSON graph format.
//!
//! ```json
//! {"vertices": 3, "base_point": 0, "edges": [[0, 1, 1.0], [1, 2, 2.5]]}
//! ```
//!
//! Each undirected edge is listed once and mirrored on load. A pair listed in
//! both orientations is taken as given, so mismatched weights are reported as
//! asymmetric. Optional fields: `frontier` (absorbing vertices), `labels`
//! (one string per vertex), `radius`, and `generator` (free-form metadata).

use std::collections::HashMap;
use std::path::Path;

use resnet_core::graph::Label;
use resnet_core::{validate, ConductanceGraph, TruncatedGraph, VertexId};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraphFile {
    pub vertices: usize,
    pub base_point: usize,
    pub edges: Vec<(usize, usize, f64)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frontier: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radius: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator: Option<serde_json::Value>,
}

impl GraphFile {
    pub fn from_truncated(trunc: &TruncatedGraph) -> Self {
        let g = trunc.graph();
        GraphFile {
            vertices: g.num_vertices(),
            base_point: g.base_point().0,
            edges: g.edges().collect(),
            frontier: (!trunc.frontier().is_empty()).then(|| trunc.frontier().to_vec()),
            labels: g.labels().map(|_| (0..g.num_vertices()).map(|x| g.label_string(x)).collect()),
            radius: trunc.radius(),
            generator: None,
        }
    }

    /// Builds and validates the graph; every problem found is reported at once.
    pub fn into_truncated(self) -> CliResult<TruncatedGraph> {
        let n = self.vertices;
        let mut problems = Vec::new();
        if self.base_point >= n {
            problems.push(format!("base point {} out of range for {n} vertices", self.base_point));
        }
        for &(x, y, _) in &self.edges {
            if x >= n || y >= n {
                problems.push(format!("edge ({x}, {y}) references a vertex outside 0..{n}"));
            }
        }
        if !problems.is_empty() {
            return Err(CliError::Validation(problems.join("; ")));
        }
        let mut listed: HashMap<(usize, usize), usize> = HashMap::new();
        for &(x, y, _) in &self.edges {
            *listed.entry((x, y)).or_default() += 1;
        }
        let mut entries = Vec::with_capacity(2 * self.edges.len());
        for &(x, y, c) in &self.edges {
            entries.push((x, y, c));
            if !listed.contains_key(&(y, x)) {
                entries.push((y, x, c));
            }
        }
        let graph = ConductanceGraph::from_directed_entries(n, self.base_point, &entries);
        let report = validate(&graph);
        if !report.is_empty() {
            return Err(CliError::Validation(report.to_string()));
        }
        let graph = match self.labels {
            Some(labels) => {
                if labels.len() != n {
                    return Err(CliError::Validation(format!("{} labels for {n} vertices", labels.len())));
                }
                graph.with_labels(labels.into_iter().map(Label::Named).collect())?
            }
            None => graph,
        };
        match self.frontier {
            Some(f) => Ok(TruncatedGraph::with_frontier(graph, &f.into_iter().map(VertexId).collect::<Vec<_>>())?),
            None => Ok(TruncatedGraph::whole(graph)),
        }
    }
}

pub fn read_graph(path: &Path) -> CliResult<TruncatedGraph> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    let file: GraphFile =
        serde_json::from_str(&text).map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?;
    file.into_truncated()
}

/// Resolves a vertex given as an index or as a label.
pub fn resolve_vertex(trunc: &TruncatedGraph, spec: &str) -> CliResult<VertexId> {
    let g = trunc.graph();
    if let Ok(i) = spec.parse::<usize>() {
        if i < g.num_vertices() {
            return Ok(VertexId(i));
        }
    }
    if g.labels().is_some() {
        if let Some(x) = (0..g.num_vertices()).find(|&x| g.label_string(x) == spec) {
            return Ok(VertexId(x));
        }
    }
    Err(CliError::Usage(format!("no vertex '{spec}' in a graph of {} vertices", g.num_vertices())))
}

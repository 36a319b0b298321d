use resnet_core::markov::{harmonic_measure_exact, sample_paths, BoundaryEstimate};
use resnet_core::TruncatedGraph;
use serde_json::json;

use crate::graph_file::{read_graph, resolve_vertex};
use crate::report::{csv_text, emit, fmt12, json_text, wrap, Format, RunConfig};
use crate::{CliError, CliResult, WalkArgs};

/// `(μ̂ − μ)/√(μ(1 − μ)/n)`, using the exact measure in the standard error.
pub fn z_score(estimate: f64, exact: f64, absorbed: u64) -> f64 {
    let se = (exact * (1.0 - exact) / absorbed.max(1) as f64).sqrt();
    if se > 0.0 {
        (estimate - exact) / se
    } else if (estimate - exact).abs() < 1e-12 {
        0.0
    } else {
        f64::INFINITY
    }
}

pub fn run(a: &WalkArgs, mut config: RunConfig) -> CliResult<()> {
    config.subcommand = "walk".into();
    config.input = Some(a.graph.clone());
    config.samples = Some(a.samples);
    config.seed = Some(a.seed);
    config.output = a.output.clone();
    config.format = Some(a.format);
    config.radius = a.radius;
    config.extra.insert("max_steps".into(), json!(a.max_steps));
    let mut trunc = read_graph(&a.graph)?;
    if let Some(list) = &a.frontier {
        let ids = list.iter().map(|s| resolve_vertex(&trunc, s)).collect::<CliResult<Vec<_>>>()?;
        config.extra.insert("frontier".into(), json!(ids.iter().map(|v| v.0).collect::<Vec<_>>()));
        trunc = TruncatedGraph::with_frontier(trunc.into_graph(), &ids)?;
    } else if let Some(r) = a.radius {
        trunc = TruncatedGraph::ball(trunc.graph(), r)?;
    }
    if trunc.frontier().is_empty() {
        return Err(CliError::Validation(
            "graph has no frontier; pass --frontier or --radius, or use a generated truncation".into(),
        ));
    }
    let start = match &a.start {
        Some(s) => resolve_vertex(&trunc, s)?,
        None => trunc.base_point(),
    };
    config.extra.insert("start".into(), json!(start.0));

    let exact = harmonic_measure_exact(&trunc, start)?;
    let samples = sample_paths(&trunc, start, a.samples, a.max_steps, a.seed)?;
    let est = BoundaryEstimate::from_samples(trunc.frontier(), &samples);
    let weights = est.weights();
    let errors = est.std_errors();
    let absorbed = est.absorbed();
    let g = trunc.graph();
    let rows: Vec<_> = trunc
        .frontier()
        .iter()
        .enumerate()
        .map(|(i, &b)| {
            let mu = exact.weights[i];
            (b, g.label_string(b), est.counts[i], weights[i], mu, errors[i], z_score(weights[i], mu, absorbed))
        })
        .collect();
    let max_abs_z = rows.iter().map(|r| r.6.abs()).fold(0.0, f64::max);

    let text = match a.format {
        Format::Json => {
            let frontier: Vec<_> = rows
                .iter()
                .map(|(b, label, hits, w, mu, se, z)| {
                    json!({ "vertex": b, "label": label, "hits": hits, "estimate": w, "exact": mu, "std_error": se, "z": z })
                })
                .collect();
            let report = wrap(
                &config,
                json!({
                    "start": { "index": start.0, "label": g.label_string(start.0) },
                    "samples": est.total,
                    "absorbed": absorbed,
                    "unabsorbed": est.unabsorbed,
                    "exact_total": exact.total(),
                    "max_abs_z": max_abs_z,
                    "frontier": frontier,
                }),
            );
            json_text(&report)
        }
        Format::Csv => {
            let body: Vec<Vec<String>> = rows
                .iter()
                .map(|(b, label, hits, w, mu, se, z)| {
                    vec![b.to_string(), label.clone(), hits.to_string(), fmt12(*w), fmt12(*mu), fmt12(*se), fmt12(*z)]
                })
                .collect();
            csv_text(&config, &["vertex", "label", "hits", "estimate", "exact", "std_error", "z"], &body)?
        }
    };
    emit(a.output.as_deref(), &text)
}

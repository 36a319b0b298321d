use resnet_core::linalg::DENSE_CAP;
use resnet_core::resistance::{max_relative_disagreement, resistance, resistance_all, resistance_matrix, Method};
use serde_json::json;

use crate::graph_file::{read_graph, resolve_vertex};
use crate::report::{csv_text, emit, fmt12, json_text, matrix_csv, wrap, Format, RunConfig};
use crate::{CliError, CliResult, ResistArgs};

pub fn run(a: &ResistArgs, mut config: RunConfig) -> CliResult<()> {
    let method = match a.method.to_ascii_lowercase().as_str() {
        "all" => None,
        m => Some(Method::parse(m).ok_or_else(|| {
            CliError::Usage(format!("unknown method '{}'; expected all, M1, M2, M3, M4 or M7", a.method))
        })?),
    };
    if a.to.is_none() && a.matrix.is_none() {
        return Err(CliError::Usage("give --to, --matrix, or both".into()));
    }
    config.subcommand = "resist".into();
    config.input = Some(a.graph.clone());
    config.tol = Some(a.tol);
    config.output = a.output.clone();
    config.format = Some(a.format);
    config.extra.insert("method".into(), json!(a.method));
    let trunc = read_graph(&a.graph)?;
    let g = trunc.graph();

    if let Some(path) = &a.matrix {
        let m = method.unwrap_or(if g.num_vertices() <= DENSE_CAP { Method::M4 } else { Method::M2 });
        let rm = resistance_matrix(&trunc, m, a.tol)?;
        let n = rm.len();
        let rows: Vec<Vec<f64>> = (0..n).map(|x| (0..n).map(|y| rm.get(x, y)).collect()).collect();
        emit(Some(path), &matrix_csv(&rows)?)?;
        if a.to.is_none() {
            let report = wrap(&config, json!({ "matrix": path, "matrix_method": m.name(), "vertices": n }));
            return emit(a.output.as_deref(), &json_text(&report));
        }
    }

    let to_spec = a.to.as_deref().expect("checked above");
    let x = match &a.from {
        Some(s) => resolve_vertex(&trunc, s)?,
        None => g.base_point(),
    };
    let y = resolve_vertex(&trunc, to_spec)?;
    let values = match method {
        None => resistance_all(&trunc, x, y, a.tol)?,
        Some(m) => vec![(m, resistance(&trunc, x, y, m, a.tol)?)],
    };
    let disagreement = max_relative_disagreement(&values);
    config.extra.insert("from".into(), json!(x.0));
    config.extra.insert("to".into(), json!(y.0));
    let text = match a.format {
        Format::Json => {
            let rows: Vec<_> = values
                .iter()
                .map(|(m, v)| json!({ "method": m.name(), "formula": m.description(), "value": v }))
                .collect();
            let report = wrap(
                &config,
                json!({
                    "from": { "index": x.0, "label": g.label_string(x.0) },
                    "to": { "index": y.0, "label": g.label_string(y.0) },
                    "values": rows,
                    "max_relative_disagreement": disagreement,
                }),
            );
            json_text(&report)
        }
        Format::Csv => {
            let rows: Vec<Vec<String>> = values
                .iter()
                .map(|(m, v)| vec![m.name().to_string(), m.description().to_string(), fmt12(*v)])
                .chain(std::iter::once(vec!["max".into(), "max relative disagreement".into(), fmt12(disagreement)]))
                .collect();
            csv_text(&config, &["method", "formula", "value"], &rows)?
        }
    };
    emit(a.output.as_deref(), &text)
}

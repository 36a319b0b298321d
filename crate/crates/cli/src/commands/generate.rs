use resnet_core::graph::LevelWeights;
use resnet_core::{generate, FamilySpec};
use serde_json::json;

use crate::graph_file::GraphFile;
use crate::report::{emit, json_text, wrap, RunConfig};
use crate::{CliResult, Family, GenerateArgs};

pub fn family_spec(a: &GenerateArgs) -> FamilySpec {
    let radius = a.radius;
    match a.family {
        Family::Halfline => FamilySpec::HalfLine { rate: a.rate, radius },
        Family::Lattice => FamilySpec::Lattice { dim: a.dim, radius },
        Family::BinaryTree => FamilySpec::BinaryTree {
            plus: LevelWeights { scale: a.plus_scale, ratio: a.plus_ratio },
            minus: LevelWeights { scale: a.minus_scale, ratio: a.minus_ratio },
            radius,
        },
        Family::NaryTree => FamilySpec::NaryTree { arity: a.n, base: a.b, radius },
        Family::Comb => FamilySpec::Comb { radius },
        Family::ThreeResistors => FamilySpec::ThreeResistors { r1: a.r1, r2: a.r2, r3: a.r3 },
        Family::BinomialChain => FamilySpec::BinomialChain { p_plus: a.p_plus, radius },
        Family::RandomTree => FamilySpec::RandomTree { vertices: a.vertices, seed: a.seed },
        Family::RandomConnected => {
            FamilySpec::RandomConnected { vertices: a.vertices, extra_edges: a.extra_edges, seed: a.seed }
        }
    }
}

fn family_params(a: &GenerateArgs) -> serde_json::Value {
    match a.family {
        Family::Halfline => json!({ "rate": a.rate }),
        Family::Lattice => json!({ "dim": a.dim }),
        Family::BinaryTree => json!({
            "plus_scale": a.plus_scale, "plus_ratio": a.plus_ratio,
            "minus_scale": a.minus_scale, "minus_ratio": a.minus_ratio,
        }),
        Family::NaryTree => json!({ "n": a.n, "b": a.b }),
        Family::Comb => json!({}),
        Family::ThreeResistors => json!({ "r1": a.r1, "r2": a.r2, "r3": a.r3 }),
        Family::BinomialChain => json!({ "p_plus": a.p_plus }),
        Family::RandomTree => json!({ "vertices": a.vertices }),
        Family::RandomConnected => json!({ "vertices": a.vertices, "extra_edges": a.extra_edges }),
    }
}

pub fn run(a: &GenerateArgs, mut config: RunConfig) -> CliResult<()> {
    let spec = family_spec(a);
    let trunc = generate(&spec)?;
    config.subcommand = "generate".into();
    config.family = Some(format!("{:?}", a.family).to_lowercase());
    config.radius = spec.radius();
    config.seed = Some(a.seed);
    config.output = a.output.clone();
    if let serde_json::Value::Object(m) = family_params(a) {
        config.extra = m;
    }
    let mut file = GraphFile::from_truncated(&trunc);
    let meta = wrap(&config, json!({}));
    file.generator = Some(meta);
    let text = json_text(&serde_json::to_value(&file).expect("graph serializes"));
    emit(a.output.as_deref(), &text)?;
    let summary = format!(
        "vertices: {}, edges: {}, frontier: {}",
        trunc.num_vertices(),
        trunc.graph().num_edges(),
        trunc.frontier().len()
    );
    if a.output.is_some() {
        println!("{summary}");
    } else {
        eprintln!("{summary}");
    }
    Ok(())
}

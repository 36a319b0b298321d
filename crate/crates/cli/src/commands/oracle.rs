use resnet_core::greens::{binomial_closed_form, generating_function_check, nary_tree_closed_forms, walk_greens, Ground};
use resnet_core::resistance::{continuum_reference, resistance, Method};
use resnet_core::{generate, ConductanceGraph, FamilySpec, Label, TruncatedGraph, VertexId};
use serde_json::{json, Value};

use crate::report::{emit, json_text, wrap, RunConfig};
use crate::{CliError, CliResult, Model, OracleArgs};

/// Relative tolerance of the numerical cross-checks.
const VERIFY_REL: f64 = 0.01;

fn binomial(a: &OracleArgs) -> CliResult<(Value, bool)> {
    let p = a.p_plus.ok_or_else(|| CliError::Usage("--p-plus is required for the binomial model".into()))?;
    let cf = binomial_closed_form(p)?;
    let mut body = json!({
        "p_plus": cf.p_plus,
        "p_minus": cf.p_minus,
        "lambda": cf.lambda,
        "g_diag": cf.g_diag,
    });
    let mut ok = true;
    if a.verify {
        if a.width < 2 {
            return Err(CliError::Usage("--width must be at least 2".into()));
        }
        let trunc = generate(&FamilySpec::BinomialChain { p_plus: p, radius: a.width / 2 })?;
        let wg = walk_greens(&trunc, Ground::Frontier, 1 << 30, 1e-12)?;
        let center = trunc
            .graph()
            .find_label(&Label::Integer(0))
            .ok_or_else(|| CliError::Numerical("chain has no vertex 0".into()))?;
        let numeric = wg.get(center.0, center.0);
        let rel = (numeric - cf.g_diag).abs() / cf.g_diag;
        let gf = generating_function_check(cf.lambda)?;
        ok = rel <= VERIFY_REL && gf.within_bound();
        body["verification"] = json!({
            "width": 2 * (a.width / 2),
            "center_diagonal": numeric,
            "relative_error": rel,
            "tolerance": VERIFY_REL,
            "series_order": wg.order,
            "series_tail_bound": wg.tail_bound,
            "generating_function": {
                "partial_sum": gf.partial_sum.value,
                "closed_form": gf.closed_form,
                "residual": gf.residual,
                "tail_bound": gf.partial_sum.tail_bound,
                "within_bound": gf.within_bound(),
            },
            "passed": ok,
        });
    }
    Ok((body, ok))
}

fn nary(a: &OracleArgs) -> CliResult<(Value, bool)> {
    let cf = nary_tree_closed_forms(a.n, a.b, a.level)?;
    let mut body = json!({
        "n": a.n,
        "b": a.b,
        "level": a.level,
        "g_same_level": cf.g_same_level,
        "d_root": cf.d_root,
    });
    let mut ok = true;
    if a.verify {
        if a.depth < a.level {
            return Err(CliError::Usage("--depth must be at least --level".into()));
        }
        let trunc = generate(&FamilySpec::NaryTree { arity: a.n, base: a.b, radius: a.depth })?;
        let target = trunc
            .graph()
            .find_label(&Label::Word(vec![0; a.level]))
            .ok_or_else(|| CliError::Numerical("tree has no vertex at the requested level".into()))?;
        let numeric = resistance(&trunc, trunc.base_point(), target, Method::M4, 1e-12)?;
        let rel = (numeric - cf.d_root).abs() / cf.d_root;
        ok = rel <= VERIFY_REL;
        body["verification"] = json!({
            "depth": a.depth,
            "d_root_numeric": numeric,
            "relative_error": rel,
            "tolerance": VERIFY_REL,
            "passed": ok,
        });
    }
    Ok((body, ok))
}

/// Ladder through `x` and `y` with step close to `h` and `margin` on both
/// sides: neighbour conductance `1/(2h)` and conductance `h/2` from every
/// node to a ground vertex (the base point). Its resistance metric tends to
/// `2(1 − e^{−|x−y|})` as `h → 0`. Returns the graph and the nodes of `x`, `y`.
pub fn continuum_ladder(x: f64, y: f64, h: f64, margin: f64) -> CliResult<(TruncatedGraph, VertexId, VertexId)> {
    if !(h > 0.0 && margin >= 0.0 && x.is_finite() && y.is_finite()) {
        return Err(CliError::Usage("ladder needs finite points, positive step and nonnegative margin".into()));
    }
    let (lo, hi) = (x.min(y), x.max(y));
    let inner = ((hi - lo) / h).ceil() as usize;
    let h = if inner > 0 { (hi - lo) / inner as f64 } else { h };
    let pad = (margin / h).ceil() as usize;
    let m = inner + 2 * pad + 1;
    let ground = m;
    let mut edges = Vec::with_capacity(2 * m);
    for i in 0..m {
        if i + 1 < m {
            edges.push((i, i + 1, 1.0 / (2.0 * h)));
        }
        edges.push((i, ground, h / 2.0));
    }
    let g = ConductanceGraph::from_edges(m + 1, ground, &edges)?;
    let (a, b) = if x <= y { (pad, pad + inner) } else { (pad + inner, pad) };
    Ok((TruncatedGraph::whole(g), VertexId(a), VertexId(b)))
}

fn continuum(a: &OracleArgs) -> CliResult<(Value, bool)> {
    let (kernel, distance) = continuum_reference(a.x, a.y);
    let mut body = json!({ "x": a.x, "y": a.y, "kernel": kernel, "distance": distance });
    let mut ok = true;
    if a.verify {
        let (h, margin) = (0.02, 12.0);
        let (trunc, nx, ny) = continuum_ladder(a.x, a.y, h, margin)?;
        let numeric = resistance(&trunc, nx, ny, Method::M2, 1e-12)?;
        let err = (numeric - distance).abs();
        ok = err <= 1e-3 + VERIFY_REL * distance;
        body["verification"] = json!({
            "step": h,
            "margin": margin,
            "ladder_distance": numeric,
            "absolute_error": err,
            "passed": ok,
        });
    }
    Ok((body, ok))
}

pub fn run(a: &OracleArgs, mut config: RunConfig) -> CliResult<()> {
    config.subcommand = "oracle".into();
    config.output = a.output.clone();
    config.extra.insert("model".into(), json!(format!("{:?}", a.model).to_lowercase()));
    config.extra.insert("verify".into(), json!(a.verify));
    let (body, ok) = match a.model {
        Model::Binomial => binomial(a)?,
        Model::Nary => nary(a)?,
        Model::Continuum => continuum(a)?,
    };
    emit(a.output.as_deref(), &json_text(&wrap(&config, body)))?;
    if ok {
        Ok(())
    } else {
        Err(CliError::Numerical("closed form and numerical cross-check disagree".into()))
    }
}

#![allow(dead_code)]

use resnet_core::graph::LevelWeights;
use resnet_core::rng::Substream;
use resnet_core::{generate, ConductanceGraph, FamilySpec, TruncatedGraph, VertexId};

/// Random connected graph number `i`: `2..=max_n` vertices, a spanning tree
/// plus extra edges, weights log-uniform in `[0.1, 10]`.
pub fn random_connected(i: u64, max_n: usize) -> TruncatedGraph {
    let mut rng = Substream::new(0xC0FFEE, i);
    let vertices = 2 + rng.below(max_n - 1);
    let extra_edges = rng.below(2 * vertices);
    generate(&FamilySpec::RandomConnected { vertices, extra_edges, seed: i }).unwrap()
}

/// Random tree with its leaves (other than the base point) as frontier.
pub fn random_tree_with_leaves(vertices: usize, seed: u64) -> TruncatedGraph {
    let t = generate(&FamilySpec::RandomTree { vertices, seed }).unwrap();
    with_leaf_frontier(t.into_graph())
}

pub fn with_leaf_frontier(g: ConductanceGraph) -> TruncatedGraph {
    let o = g.base_point().0;
    let leaves: Vec<VertexId> =
        (0..g.num_vertices()).filter(|&x| x != o && g.neighbors(x).count() == 1).map(VertexId).collect();
    TruncatedGraph::with_frontier(g, &leaves).unwrap()
}

pub fn family(spec: FamilySpec) -> (String, TruncatedGraph) {
    let name = format!("{spec:?}");
    (name, generate(&spec).unwrap())
}

/// Generated truncations with a nonempty frontier.
pub fn frontier_zoo() -> Vec<(String, TruncatedGraph)> {
    vec![
        family(FamilySpec::HalfLine { rate: 1.0, radius: 6 }),
        family(FamilySpec::HalfLine { rate: 0.0, radius: 8 }),
        family(FamilySpec::Lattice { dim: 2, radius: 4 }),
        family(FamilySpec::Lattice { dim: 3, radius: 3 }),
        family(FamilySpec::BinaryTree {
            plus: LevelWeights { scale: 1.0, ratio: 2.0 },
            minus: LevelWeights { scale: 0.5, ratio: 1.5 },
            radius: 4,
        }),
        family(FamilySpec::NaryTree { arity: 2, base: 2.0, radius: 4 }),
        family(FamilySpec::NaryTree { arity: 3, base: 1.5, radius: 3 }),
        family(FamilySpec::Comb { radius: 4 }),
        family(FamilySpec::Comb { radius: 6 }),
        family(FamilySpec::BinomialChain { p_plus: 2.0 / 3.0, radius: 6 }),
        ("leafy random tree 30".into(), random_tree_with_leaves(30, 1)),
        ("leafy random tree 55".into(), random_tree_with_leaves(55, 2)),
    ]
}

/// Finite graphs without a frontier.
pub fn finite_zoo() -> Vec<(String, TruncatedGraph)> {
    let mut v = vec![
        family(FamilySpec::ThreeResistors { r1: 1.0, r2: 1.0, r3: 1.0 }),
        family(FamilySpec::ThreeResistors { r1: 0.3, r2: 7.0, r3: 2.0 }),
        family(FamilySpec::RandomTree { vertices: 25, seed: 3 }),
        (
            "K3".into(),
            TruncatedGraph::whole(ConductanceGraph::from_edges(3, 0, &[(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)]).unwrap()),
        ),
    ];
    for i in 0..8 {
        v.push((format!("random connected #{i}"), random_connected(i, 40)));
    }
    v
}

pub fn all_zoo() -> Vec<(String, TruncatedGraph)> {
    let mut v = frontier_zoo();
    v.extend(finite_zoo());
    v
}

pub fn random_values(n: usize, rng: &mut Substream) -> Vec<f64> {
    (0..n).map(|_| rng.uniform_in(-1.0, 1.0)).collect()
}

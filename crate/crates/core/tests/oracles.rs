//! Cross-checks against dense linear algebra done independently with nalgebra.

mod common;

use nalgebra::DMatrix;

use resnet_core::greens::{binomial_closed_form, greens_grounded, walk_greens, Ground};
use resnet_core::laplacian::TransitionOperator;
use resnet_core::markov::{harmonic_measure_exact, substochastic_spectral_radius};
use resnet_core::resistance::{resistance, Method};
use resnet_core::{generate, ConductanceGraph, FamilySpec, TruncatedGraph, VertexId};

use common::*;

fn laplacian(g: &ConductanceGraph) -> DMatrix<f64> {
    let n = g.num_vertices();
    let mut l = DMatrix::zeros(n, n);
    for x in 0..n {
        for (y, c) in g.neighbors(x) {
            l[(x, y)] -= c;
            l[(x, x)] += c;
        }
    }
    l
}

fn restrict(m: &DMatrix<f64>, keep: &[usize]) -> DMatrix<f64> {
    DMatrix::from_fn(keep.len(), keep.len(), |i, j| m[(keep[i], keep[j])])
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1e-300)
}

#[test]
fn resistance_matches_the_pseudo_inverse() {
    for (name, t) in all_zoo() {
        let g = t.graph();
        let n = g.num_vertices();
        if n > 400 {
            continue;
        }
        let pinv = laplacian(g).pseudo_inverse(1e-12).unwrap();
        let pairs: Vec<(usize, usize)> = (0..n.min(12)).flat_map(|x| [(x, (x * 7 + 3) % n), (x, n - 1)]).filter(|(a, b)| a != b).collect();
        for (x, y) in pairs {
            let oracle = pinv[(x, x)] + pinv[(y, y)] - 2.0 * pinv[(x, y)];
            for m in [Method::M1, Method::M2, Method::M4] {
                let d = resistance(&t, VertexId(x), VertexId(y), m, 1e-13).unwrap();
                assert!(rel(d, oracle) <= 1e-7, "{name} {m:?} ({x},{y}): {d} vs {oracle}");
            }
        }
    }
}

#[test]
fn grounded_greens_matches_the_reduced_inverse() {
    for (name, t) in frontier_zoo() {
        let n = t.num_vertices();
        if n > 400 {
            continue;
        }
        let l = laplacian(t.graph());
        for ground in [Ground::BasePoint, Ground::Frontier] {
            let mask = ground.mask(&t).unwrap();
            let keep: Vec<usize> = (0..n).filter(|&x| !mask[x]).collect();
            let inv = restrict(&l, &keep).try_inverse().unwrap();
            let k = greens_grounded(&t, ground).unwrap();
            let scale = inv.amax();
            for (i, &x) in keep.iter().enumerate() {
                for (j, &y) in keep.iter().enumerate() {
                    assert!((k.get(x, y) - inv[(i, j)]).abs() <= 1e-9 * scale, "{name} {ground:?} ({x},{y})");
                }
            }
        }
    }
}

/// Transient block `Q` of `P` killed at the frontier, and the absorbing block `R`.
fn absorbing_blocks(t: &TruncatedGraph) -> (Vec<usize>, DMatrix<f64>, DMatrix<f64>) {
    let g = t.graph();
    let interior = t.interior().to_vec();
    let frontier = t.frontier().to_vec();
    let p = |x: usize, y: usize| g.weight(x, y).map_or(0.0, |c| c / g.degree(x));
    let q = DMatrix::from_fn(interior.len(), interior.len(), |i, j| p(interior[i], interior[j]));
    let r = DMatrix::from_fn(interior.len(), frontier.len(), |i, j| p(interior[i], frontier[j]));
    (interior, q, r)
}

#[test]
fn harmonic_measure_is_the_absorption_probability() {
    for (name, t) in frontier_zoo() {
        if t.num_vertices() > 400 {
            continue;
        }
        let (interior, q, r) = absorbing_blocks(&t);
        let m = interior.len();
        let fundamental = (DMatrix::identity(m, m) - &q).try_inverse().unwrap();
        let b = fundamental * r;
        for (i, &x) in interior.iter().enumerate() {
            let mu = harmonic_measure_exact(&t, VertexId(x)).unwrap();
            for (j, &f) in t.frontier().iter().enumerate() {
                assert!((mu.weight(f) - b[(i, j)]).abs() <= 1e-9, "{name} x={x} b={f}");
            }
        }
        // Frontier starts are absorbed at once.
        let f0 = t.frontier()[0];
        assert_eq!(harmonic_measure_exact(&t, VertexId(f0)).unwrap().weight(f0), 1.0);
    }
}

#[test]
fn walk_greens_matches_the_fundamental_matrix() {
    for (name, t) in frontier_zoo() {
        if t.num_vertices() > 200 {
            continue;
        }
        let (interior, q, _) = absorbing_blocks(&t);
        let m = interior.len();
        let fundamental = (DMatrix::identity(m, m) - &q).try_inverse().unwrap();
        let w = walk_greens(&t, Ground::Frontier, 1 << 30, 1e-13).unwrap();
        let scale = fundamental.amax();
        for (i, &x) in interior.iter().enumerate() {
            for (j, &y) in interior.iter().enumerate() {
                assert!((w.get(x, y) - fundamental[(i, j)]).abs() <= 1e-8 * scale, "{name} ({x},{y})");
            }
        }
        // The reported radius bounds the true one from above.
        let rho = q.clone().complex_eigenvalues().iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert!(w.spectral_radius >= rho * (1.0 - 1e-9), "{name}: {} < {rho}", w.spectral_radius);
    }
}

#[test]
fn substochastic_radius_matches_the_eigenvalues() {
    for (name, t) in frontier_zoo() {
        if t.num_vertices() > 200 {
            continue;
        }
        let (_, q, _) = absorbing_blocks(&t);
        // Q is similar to a symmetric matrix, so its spectrum is real.
        let rho = q.complex_eigenvalues().iter().map(|z| z.norm()).fold(0.0, f64::max);
        let op = TransitionOperator::new(t.graph());
        let est = substochastic_spectral_radius(&op, t.frontier_mask(), 5000);
        assert!(rel(est, rho) <= 1e-3, "{name}: {est} vs {rho}");
    }
}

#[test]
fn dense_eigenvalues_match_nalgebra() {
    for (name, t) in finite_zoo() {
        let g = t.graph();
        let n = g.num_vertices();
        let keep: Vec<usize> = (1..n).collect();
        let l = restrict(&laplacian(g), &keep);
        let mut ours = resnet_core::linalg::DenseMatrix::zeros(n - 1, n - 1);
        for i in 0..n - 1 {
            for j in 0..n - 1 {
                ours[(i, j)] = l[(i, j)];
            }
        }
        let mut a = ours.symmetric_eigenvalues().unwrap();
        let mut b: Vec<f64> = l.symmetric_eigen().eigenvalues.iter().copied().collect();
        a.sort_by(f64::total_cmp);
        b.sort_by(f64::total_cmp);
        let scale = b.last().copied().unwrap_or(1.0);
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() <= 1e-10 * scale, "{name}: {x} vs {y}");
        }
    }
}

#[test]
fn binomial_series_matches_a_wide_chain() {
    let p_plus = 0.6;
    let cf = binomial_closed_form(p_plus).unwrap();
    let radius = 40;
    let t = generate(&FamilySpec::BinomialChain { p_plus, radius }).unwrap();
    let (interior, q, _) = absorbing_blocks(&t);
    let m = interior.len();
    let fundamental = (DMatrix::identity(m, m) - &q).try_inverse().unwrap();
    let g = t.graph();
    let centre = interior.iter().position(|&x| x == g.base_point().0).unwrap();
    for offset in -3i64..=3 {
        let target = g.find_label(&resnet_core::Label::Integer(offset)).unwrap().0;
        let j = interior.iter().position(|&x| x == target).unwrap();
        let series = cf.entry(offset, 20_000);
        let wide = fundamental[(centre, j)];
        assert!(rel(series.value, wide) <= 1e-5, "offset {offset}: {} vs {wide}", series.value);
    }
    assert!(rel(cf.g_diag, fundamental[(centre, centre)]) <= 1e-5);
}

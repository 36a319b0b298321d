//! Finite Royden decomposition `f = Q⊥f + Qf`.
//!
//! On a truncation, `Q⊥f` is the part supported in the interior,
//! `(Q⊥f)(x) = Σ_y K(x,y)(Δf)(y)` with `K` the Laplacian inverse grounded at
//! the frontier, and `Qf` is the harmonic extension of `f` from the frontier.
//! Without a frontier the ground is `{o}` and every function is its own finite
//! part.

use alloc::vec;
use alloc::vec::Vec;

use crate::energy::{energy_form, EnergyVector};
use crate::graph::TruncatedGraph;
use crate::greens::{greens_grounded, Ground, GreensMatrix};
use crate::linalg::{laplacian_at, GroundedFactor};
use crate::markov::HarmonicMeasure;
use crate::math::max_abs;
use crate::{Error, Result};

/// Ground used by the decomposition of `trunc`.
pub fn royden_ground(trunc: &TruncatedGraph) -> Ground {
    if trunc.frontier().is_empty() {
        Ground::BasePoint
    } else {
        Ground::Frontier
    }
}

/// The Green's matrix [`project_finite`] and [`interpolate`] expect.
pub fn royden_greens(trunc: &TruncatedGraph) -> Result<GreensMatrix> {
    greens_grounded(trunc, royden_ground(trunc))
}

fn check_len(trunc: &TruncatedGraph, f: &EnergyVector) -> Result<()> {
    if f.len() != trunc.num_vertices() {
        return Err(Error::DimensionMismatch { expected: trunc.num_vertices(), found: f.len() });
    }
    Ok(())
}

/// `Σ_y K(x,y)(Δf)(y)` before gauging: zero on the ground set.
fn finite_part_raw(trunc: &TruncatedGraph, k: &GreensMatrix, f: &[f64]) -> Result<Vec<f64>> {
    if k.ground != royden_ground(trunc) {
        return Err(Error::InvalidParameter("Green's matrix must be grounded at the frontier (or o without one)".into()));
    }
    let g = trunc.graph();
    let lap: Vec<f64> = k.vertices.iter().map(|&y| laplacian_at(g, f, y)).collect();
    let mut out = vec![0.0; trunc.num_vertices()];
    for (i, &x) in k.vertices.iter().enumerate() {
        out[x] = k.matrix.row(i).iter().zip(&lap).map(|(a, b)| a * b).sum();
    }
    Ok(out)
}

/// `Q⊥f`, gauged at `o`.
pub fn project_finite(trunc: &TruncatedGraph, k: &GreensMatrix, f: &EnergyVector) -> Result<EnergyVector> {
    check_len(trunc, f)?;
    EnergyVector::gauged(trunc.graph(), finite_part_raw(trunc, k, f.values())?)
}

#[derive(Clone, Debug, PartialEq)]
pub struct RoydenSplit {
    pub input: EnergyVector,
    /// `Q⊥f`.
    pub finite_part: EnergyVector,
    /// `Qf`.
    pub harmonic_part: EnergyVector,
    /// `|⟨Q⊥f, Qf⟩_E|`.
    pub orthogonality_residual: f64,
    /// `‖Q⊥f + Qf − f‖_∞`.
    pub sum_residual: f64,
    /// `max |Δ(Qf)(x)| / c(x)` over interior `x`.
    pub harmonic_residual: f64,
}

/// Splits `f` by solving the two Dirichlet problems directly.
pub fn royden_split(trunc: &TruncatedGraph, f: &EnergyVector) -> Result<RoydenSplit> {
    check_len(trunc, f)?;
    let g = trunc.graph();
    let n = g.num_vertices();
    let mask = royden_ground(trunc).mask(trunc)?;
    let factor = GroundedFactor::new(g, &mask)?;
    let lap: Vec<f64> = (0..n).map(|x| if mask[x] { 0.0 } else { laplacian_at(g, f.values(), x) }).collect();
    let finite = factor.solve(&lap);
    let harmonic: Vec<f64> = if trunc.frontier().is_empty() {
        vec![0.0; n]
    } else {
        let boundary: Vec<f64> = (0..n).map(|x| if mask[x] { f.get(x) } else { 0.0 }).collect();
        let rhs: Vec<f64> = (0..n).map(|x| -laplacian_at(g, &boundary, x)).collect();
        let inner = factor.solve(&rhs);
        boundary.iter().zip(&inner).map(|(a, b)| a + b).collect()
    };
    finish_split(trunc, f, finite, harmonic)
}

fn finish_split(trunc: &TruncatedGraph, f: &EnergyVector, finite: Vec<f64>, harmonic: Vec<f64>) -> Result<RoydenSplit> {
    let g = trunc.graph();
    let finite_part = EnergyVector::gauged(g, finite)?;
    let harmonic_part = EnergyVector::gauged(g, harmonic)?;
    let sum_residual = (0..f.len())
        .map(|x| (finite_part.get(x) + harmonic_part.get(x) - f.get(x)).abs())
        .fold(0.0, f64::max);
    let orthogonality_residual = energy_form(g, finite_part.values(), harmonic_part.values()).abs();
    let harmonic_residual = trunc
        .interior()
        .iter()
        .map(|&x| (laplacian_at(g, harmonic_part.values(), x) / g.degree(x)).abs())
        .fold(0.0, f64::max);
    Ok(RoydenSplit { input: f.clone(), finite_part, harmonic_part, orthogonality_residual, sum_residual, harmonic_residual })
}

/// Split through an explicit Green's matrix and harmonic extension.
pub fn royden_split_with(trunc: &TruncatedGraph, k: &GreensMatrix, f: &EnergyVector) -> Result<RoydenSplit> {
    check_len(trunc, f)?;
    let finite = finite_part_raw(trunc, k, f.values())?;
    let harmonic: Vec<f64> = f.values().iter().zip(&finite).map(|(a, b)| a - b).collect();
    finish_split(trunc, f, finite, harmonic)
}

/// `Σ_y K(x,y)(Δf)(y) + Σ_b μ_x(b) f(b)`; reproduces `f(x)`.
///
/// `mu` is the harmonic measure of `x`; it may be `None` only when the
/// truncation has no frontier.
pub fn interpolate(
    trunc: &TruncatedGraph,
    k: &GreensMatrix,
    mu: Option<&HarmonicMeasure>,
    f: &EnergyVector,
    x: usize,
) -> Result<f64> {
    check_len(trunc, f)?;
    trunc.graph().check_vertex(crate::graph::VertexId(x))?;
    let finite = finite_part_raw(trunc, k, f.values())?;
    let boundary = match mu {
        Some(m) => {
            if m.start.0 != x {
                return Err(Error::InvalidParameter("harmonic measure belongs to another start vertex".into()));
            }
            // Qf = f on the frontier.
            m.integrate(f.values())
        }
        None if trunc.frontier().is_empty() => 0.0,
        None => return Err(Error::InvalidParameter("harmonic measure required when a frontier exists".into())),
    };
    // Q⊥f and Qf are gauged jointly: their values at o cancel because f(o) = 0.
    Ok(finite[x] + boundary)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EnergySplit {
    /// `Σ_{x interior} (Q⊥f)(x)(Δf)(x)`, with `Q⊥f` vanishing on the frontier.
    pub dirichlet_term: f64,
    /// `‖Qf‖²_E`.
    pub boundary_term: f64,
    /// `‖f‖²_E`.
    pub total: f64,
    /// `‖Q⊥f‖²_E` computed from the finite part directly.
    pub finite_energy: f64,
    /// `|total − dirichlet_term − boundary_term| / total`.
    pub identity_residual: f64,
    /// `|total − ‖Q⊥f‖² − ‖Qf‖²| / total`.
    pub pythagoras_residual: f64,
}

pub fn energy_split(trunc: &TruncatedGraph, f: &EnergyVector) -> Result<EnergySplit> {
    let split = royden_split(trunc, f)?;
    let g = trunc.graph();
    let mask = royden_ground(trunc).mask(trunc)?;
    // Representative of Q⊥f that vanishes on the ground set.
    let shift = if trunc.frontier().is_empty() {
        split.finite_part.get(g.base_point().0)
    } else {
        split.finite_part.get(trunc.frontier()[0])
    };
    let dirichlet_term: f64 = (0..g.num_vertices())
        .filter(|&x| !mask[x])
        .map(|x| (split.finite_part.get(x) - shift) * laplacian_at(g, f.values(), x))
        .sum();
    let total = energy_form(g, f.values(), f.values());
    let boundary_term = energy_form(g, split.harmonic_part.values(), split.harmonic_part.values());
    let finite_energy = energy_form(g, split.finite_part.values(), split.finite_part.values());
    let scale = if total > 0.0 { total } else { 1.0 };
    Ok(EnergySplit {
        dirichlet_term,
        boundary_term,
        total,
        finite_energy,
        identity_residual: (total - dirichlet_term - boundary_term).abs() / scale,
        pythagoras_residual: (total - finite_energy - boundary_term).abs() / scale,
    })
}

/// Harmonic extensions of the frontier indicators, gauged at `o`.
pub fn harmonic_basis(trunc: &TruncatedGraph) -> Result<Vec<EnergyVector>> {
    if trunc.frontier().is_empty() {
        return Err(Error::NoFrontier);
    }
    let g = trunc.graph();
    let n = g.num_vertices();
    let factor = GroundedFactor::new(g, trunc.frontier_mask())?;
    let frontier = trunc.frontier();
    crate::par::map_indices(frontier.len(), |i| {
        let b = frontier[i];
        let mut boundary = vec![0.0; n];
        boundary[b] = 1.0;
        let rhs: Vec<f64> = (0..n).map(|x| -laplacian_at(g, &boundary, x)).collect();
        let inner = factor.solve(&rhs);
        let h: Vec<f64> = boundary.iter().zip(&inner).map(|(a, c)| a + c).collect();
        EnergyVector::gauged(g, h)
    })
    .into_iter()
    .collect()
}

/// `max_x |Δh(x)| / (c(x)·max(1, ‖h‖_∞))` over interior vertices.
pub fn harmonic_residual(trunc: &TruncatedGraph, h: &EnergyVector) -> f64 {
    let g = trunc.graph();
    let scale = max_abs(h.values()).max(1.0);
    trunc.interior().iter().map(|&x| (laplacian_at(g, h.values(), x) / g.degree(x)).abs() / scale).fold(0.0, f64::max)
}

//! The energy space: inner product, dipoles and the pointwise-product bound.
//!
//! Functions are compared modulo constants; an [`EnergyVector`] is always
//! pinned to 0 at the base point.

use alloc::vec;
use alloc::vec::Vec;

use crate::graph::{ConductanceGraph, TruncatedGraph, VertexId};
use crate::linalg::{laplacian_at, solve_grounded};
use crate::math::{max_abs, norm2};
use crate::{Error, Result};

/// Default relative residual for dipole solves.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Function on the vertex set, gauged to vanish at the base point.
#[derive(Clone, Debug, PartialEq)]
pub struct EnergyVector {
    values: Vec<f64>,
    base_point: usize,
    cached_energy: Option<f64>,
}

impl EnergyVector {
    /// Subtracts `values[o]` so the result vanishes at `o`.
    pub fn gauged(graph: &ConductanceGraph, mut values: Vec<f64>) -> Result<Self> {
        let n = graph.num_vertices();
        if values.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: values.len() });
        }
        let o = graph.base_point().0;
        let shift = values[o];
        if shift != 0.0 {
            values.iter_mut().for_each(|v| *v -= shift);
        }
        Ok(EnergyVector { values, base_point: o, cached_energy: None })
    }

    pub fn zero(graph: &ConductanceGraph) -> Self {
        EnergyVector { values: vec![0.0; graph.num_vertices()], base_point: graph.base_point().0, cached_energy: Some(0.0) }
    }

    /// Gauged indicator `δ_x`.
    pub fn delta(graph: &ConductanceGraph, x: VertexId) -> Result<Self> {
        graph.check_vertex(x)?;
        let mut v = vec![0.0; graph.num_vertices()];
        v[x.0] = 1.0;
        Self::gauged(graph, v)
    }

    /// Fills the energy cache.
    pub fn with_energy(mut self, graph: &ConductanceGraph) -> Result<Self> {
        self.cached_energy = Some(energy_norm_sq(graph, &self)?);
        Ok(self)
    }

    #[inline]
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    #[inline]
    pub fn get(&self, x: usize) -> f64 {
        self.values[x]
    }

    pub fn base_point(&self) -> VertexId {
        VertexId(self.base_point)
    }

    pub fn cached_energy(&self) -> Option<f64> {
        self.cached_energy
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `‖u‖_∞` of the gauged representative.
    pub fn sup_norm(&self) -> f64 {
        max_abs(&self.values)
    }

    /// `a·self + b·other`, gauge preserved.
    pub fn combine(&self, a: f64, other: &EnergyVector, b: f64) -> Result<EnergyVector> {
        if self.values.len() != other.values.len() || self.base_point != other.base_point {
            return Err(Error::DimensionMismatch { expected: self.values.len(), found: other.values.len() });
        }
        let values = self.values.iter().zip(&other.values).map(|(x, y)| a * x + b * y).collect();
        Ok(EnergyVector { values, base_point: self.base_point, cached_energy: None })
    }
}

fn check_pair(graph: &ConductanceGraph, u: &EnergyVector, v: &EnergyVector) -> Result<()> {
    let n = graph.num_vertices();
    for w in [u, v] {
        if w.values.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: w.values.len() });
        }
        if w.base_point != graph.base_point().0 {
            return Err(Error::InvalidParameter("energy vector gauged at a different base point".into()));
        }
    }
    Ok(())
}

/// `½ ΣΣ c_xy (u(x) − u(y))(v(x) − v(y))` on raw value slices.
pub fn energy_form(graph: &ConductanceGraph, u: &[f64], v: &[f64]) -> f64 {
    graph.edges().map(|(x, y, c)| c * (u[x] - u[y]) * (v[x] - v[y])).sum()
}

/// `⟨u, v⟩_{H_E}`.
pub fn energy_inner(graph: &ConductanceGraph, u: &EnergyVector, v: &EnergyVector) -> Result<f64> {
    check_pair(graph, u, v)?;
    Ok(energy_form(graph, &u.values, &v.values))
}

/// `‖u‖²_{H_E}`.
pub fn energy_norm_sq(graph: &ConductanceGraph, u: &EnergyVector) -> Result<f64> {
    energy_inner(graph, u, u)
}

/// Solution of `Δv = δ_source − δ_sink` with `v(o) = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct DipoleVector {
    pub vector: EnergyVector,
    pub source: VertexId,
    pub sink: VertexId,
    /// Relative residual `‖Δv − (δ_source − δ_sink)‖ / √2` over all vertices.
    pub solve_residual: f64,
    pub iterations: usize,
}

impl DipoleVector {
    /// `v(source) − v(sink)`.
    pub fn increment(&self) -> f64 {
        self.vector.get(self.source.0) - self.vector.get(self.sink.0)
    }
}

/// Dipole `v_xy` on the whole truncation, by grounded conjugate gradients.
pub fn solve_dipole(trunc: &TruncatedGraph, x: VertexId, y: VertexId, tol: f64) -> Result<DipoleVector> {
    dipole_on(trunc.graph(), x, y, tol)
}

pub(crate) fn dipole_on(graph: &ConductanceGraph, x: VertexId, y: VertexId, tol: f64) -> Result<DipoleVector> {
    graph.check_vertex(x)?;
    graph.check_vertex(y)?;
    if x == y {
        return Err(Error::InvalidParameter("dipole needs distinct source and sink".into()));
    }
    let n = graph.num_vertices();
    let o = graph.base_point().0;
    let mut b = vec![0.0; n];
    b[x.0] += 1.0;
    b[y.0] -= 1.0;
    let mut ground = vec![false; n];
    ground[o] = true;
    let sol = solve_grounded(graph, &ground, &b, tol)?;
    let residual: Vec<f64> = (0..n).map(|i| laplacian_at(graph, &sol.x, i) - b[i]).collect();
    let solve_residual = norm2(&residual) / core::f64::consts::SQRT_2;
    Ok(DipoleVector {
        vector: EnergyVector { values: sol.x, base_point: o, cached_energy: None },
        source: x,
        sink: y,
        solve_residual,
        iterations: sol.iterations,
    })
}

/// `v_x = v_{x,o}` for every vertex (`v_o = 0`), in vertex order.
pub fn base_dipoles(graph: &ConductanceGraph, tol: f64) -> Result<Vec<EnergyVector>> {
    let o = graph.base_point();
    crate::par::map_indices(graph.num_vertices(), |x| {
        if x == o.0 {
            Ok(EnergyVector::zero(graph))
        } else {
            dipole_on(graph, VertexId(x), o, tol).map(|d| d.vector)
        }
    })
    .into_iter()
    .collect()
}

/// `|⟨v, f⟩_{H_E} − (f(source) − f(sink))|`.
pub fn reproducing_check(graph: &ConductanceGraph, v: &DipoleVector, f: &EnergyVector) -> Result<f64> {
    let lhs = energy_inner(graph, &v.vector, f)?;
    Ok((lhs - (f.get(v.source.0) - f.get(v.sink.0))).abs())
}

/// `uw` with its energy and the bound `(‖u‖²_∞ + ‖w‖²_∞)(‖u‖²_E + ‖w‖²_E)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ProductCertificate {
    pub product: EnergyVector,
    pub product_energy: f64,
    pub bound: f64,
    /// `bound − product_energy`.
    pub slack: f64,
}

pub fn pointwise_product(graph: &ConductanceGraph, u: &EnergyVector, w: &EnergyVector) -> Result<ProductCertificate> {
    check_pair(graph, u, w)?;
    let raw: Vec<f64> = u.values.iter().zip(&w.values).map(|(a, b)| a * b).collect();
    let product = EnergyVector::gauged(graph, raw)?;
    let product_energy = energy_norm_sq(graph, &product)?;
    let (su, sw) = (u.sup_norm(), w.sup_norm());
    let bound = (su * su + sw * sw) * (energy_norm_sq(graph, u)? + energy_norm_sq(graph, w)?);
    Ok(ProductCertificate { product: product.with_energy(graph)?, product_energy, bound, slack: bound - product_energy })
}

/// Max-norm distance between `δ_x` and `c(x)v_x − Σ_{y∼x} c_xy v_y`, both gauged at `o`.
pub fn delta_expansion_check(trunc: &TruncatedGraph, x: VertexId, tol: f64) -> Result<f64> {
    let graph = trunc.graph();
    graph.check_vertex(x)?;
    let o = graph.base_point();
    let dip = |z: usize| -> Result<Vec<f64>> {
        if z == o.0 {
            Ok(vec![0.0; graph.num_vertices()])
        } else {
            Ok(dipole_on(graph, VertexId(z), o, tol)?.vector.values)
        }
    };
    let cx = graph.degree(x.0);
    let mut rhs: Vec<f64> = dip(x.0)?.iter().map(|v| cx * v).collect();
    for (y, c) in graph.neighbors(x.0) {
        for (r, v) in rhs.iter_mut().zip(dip(y)?) {
            *r -= c * v;
        }
    }
    let delta = EnergyVector::delta(graph, x)?;
    Ok(rhs.iter().zip(delta.values()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
}

//! Discrete potential theory on weighted graphs.
//!
//! Infinite networks are studied through finite truncations: a closed ball
//! around the base point `o` whose outer sphere (the *frontier*) stands in for
//! the metric boundary. On those truncations the crate provides
//!
//! * graph construction, validation and generators for the standard example
//!   families ([`graph`]),
//! * the Laplacian `Δ = C − E` and the transition operator `P = C⁻¹E`
//!   ([`laplacian`]),
//! * the energy Hilbert space and dipole solves ([`energy`]),
//! * effective resistance through several independent routes ([`resistance`]),
//! * Green's functions, Neumann series and closed-form oracles ([`greens`]),
//! * path-space sampling, harmonic measure and Poisson reproduction ([`markov`]),
//! * the finite Royden split and the interpolation identity ([`decomposition`]).
//!
//! The crate is `no_std` (with `alloc`) when built without the default `std`
//! feature. The `parallel` feature fans independent solves and samples out over
//! rayon; results are identical with or without it.

#![cfg_attr(not(feature = "std"), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod decomposition;
pub mod energy;
mod error;
pub mod graph;
pub mod greens;
pub mod laplacian;
pub mod linalg;
pub mod markov;
mod math;
mod par;
pub mod resistance;
pub mod rng;

pub use error::{Error, Result};
pub use graph::{
    generate, validate, weighted_degree, ConductanceGraph, FamilySpec, Label, TruncatedGraph,
    ValidationReport, VertexId,
};

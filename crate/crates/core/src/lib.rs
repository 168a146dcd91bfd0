//! Wigner functions of the one-dimensional harmonic oscillator.
//!
//! The crate evaluates the Wigner quasiprobability of oscillator states
//! exactly (closed forms checked against direct quadrature of the defining
//! integral), semiclassically from WKB wavefunctions, and classically from
//! the microcanonical ensemble, and provides a harness that measures how
//! phase-space averages of eigenstates approach their classical values as
//! `n -> infinity`, `hbar -> 0` at fixed `n hbar omega`.

pub mod classical;
pub mod cli;
pub mod error;
pub mod io;
pub mod params;
pub mod quad;
pub mod special;
pub mod state;
pub mod wigner;
pub mod wkb;

pub use error::{Error, Result};
pub use params::{OscillatorParams, PhaseSpacePoint};
pub use state::{coherent_center, coherent_evolve, psi_coherent, psi_eigen, QuantumState, Superposition};

//! Verification toolkit for the two-photon quantum Rabi model in Bargmann
//! representation.
//!
//! The model is the coupled system
//!
//! ```text
//! 2g φ₁''(z) + ωz φ₁'(z) + (2gz² − E) φ₁(z) + (ω₀/2) φ₂(z) = 0
//! 2g φ₂''(z) − ωz φ₂'(z) + (2gz² + E) φ₂(z) − (ω₀/2) φ₁(z) = 0
//! ```
//!
//! obtained from the two-photon Rabi Hamiltonian by the Bargmann
//! correspondence a† → z, a → d/dz. Two independent computations run side by
//! side:
//!
//! * exact power-series arithmetic ([`exact`], [`series`], [`gfunction`])
//!   certifies that the spectral-determinant candidates
//!   G_c(z,E) = φ₂(iz) − c·φ₁(z) vanish identically, with E either a bound
//!   rational or a symbolic indeterminate — so their roots carry no spectral
//!   information;
//! * floating-point Fock-space truncation ([`spectrum`]) computes the actual
//!   discrete spectrum with convergence certification and Bargmann-norm
//!   diagnostics.
//!
//! [`report`] assembles both into deterministic JSON/CSV runs for the `rabi2`
//! binary, and [`selftest`] runs the full acceptance checklist.

pub mod exact;
pub mod gfunction;
pub mod report;
pub mod selftest;
pub mod series;
pub mod spectrum;

pub use exact::{Coeff, EPoly, Energy, GaussianRational, Rational};
pub use series::{InitialConditions, ModelParams, PowerSeries, SystemSolution};

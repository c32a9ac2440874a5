//! Quantized torus maps as model environments for a dephasing probe qubit.
//!
//! The library evolves quantum maps on the `N`-dimensional Hilbert space of
//! the unit torus with split-operator kicks, computes the average fidelity
//! amplitude ⟨f(t)⟩ = (1/N) Tr[U₁(t)†U₀(t)] between an unperturbed and a
//! perturbed map, and derives from it the reduced qubit channel and a
//! non-Markovianity measure built from the positive variation of |⟨f(t)⟩|.
//! Classical counterparts of the maps provide phase portraits and
//! tangent-map Lyapunov exponents for regime classification.

pub mod analysis;
pub mod classical;
pub mod echo;
mod error;
pub mod io;
pub mod maps;
pub mod nonmarkov;
pub mod torus;

pub use error::{Error, Result};

/// Double-precision complex amplitude used throughout.
pub type C64 = num_complex::Complex64;

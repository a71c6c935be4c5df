//! Finite-time quantum Otto cycle of a driven two-level system.
//!
//! The working substance is a qubit whose Hamiltonian is rotated from
//! `H_c = hν_c|+x⟩⟨+x|` to `H_h = hν_h|+y⟩⟨+y|` in a stroke of duration τ,
//! and back again. Between strokes it thermalizes with a cold reservoir at
//! positive temperature and a hot reservoir whose temperature may be
//! negative (population inversion).
//!
//! * [`complex2`]: closed-form 2×2 complex algebra.
//! * [`tls`]: Hamiltonians, ramps, Gibbs states, populations.
//! * [`propagator`]: time-ordered stroke evolution and the transition probability ξ.
//! * [`thermo`]: work, heat, friction, efficiency and entropy production.
//! * [`sweep`]: τ-sweeps and (p_h, p_c) friction maps.
//! * [`cli`]: the `otto` command-line driver and CSV writer.
//! * [`verify`]: built-in self-consistency checks.
//!
//! Energies are in h·kHz, frequencies in kHz and times in ms (μs at the CLI).

pub mod cli;
pub mod complex2;
pub mod error;
mod pool;
pub mod propagator;
pub mod sweep;
pub mod thermo;
pub mod tls;
pub mod verify;

pub use error::{Error, Result};

//! Continuous dynamical decoupling of open spin chains.
//!
//! Strong periodic control fields average away both the coupling of a spin
//! chain to a classical bath and, when neighbouring sites are driven
//! differently, the spin-spin interactions themselves. Driving two
//! neighbours identically leaves a single induced two-qubit interaction.
//! Switching which bond is active, one bond at a time, entangles any two
//! spins of the chain.
//!
//! Modules, bottom-up:
//!
//! - [`quantum`]: dense states and operators, partial traces, Hermitian spectra.
//! - [`chain`]: chain, bath and control Hamiltonians; field assignments.
//! - [`effective`]: period-averaged Hamiltonians by quadrature and in closed form.
//! - [`scheme`]: sparse tree-state evolution, duration search, schedules.
//! - [`dynamics`]: noise paths and time-domain simulation in three pictures.
//! - [`metrics`]: concurrence, Bell fidelity, purity.
//! - [`app`]: JSON experiment configs and the `schedule`/`simulate`/`verify` commands.

pub mod app;
pub mod chain;
pub mod dynamics;
pub mod effective;
pub mod error;
pub mod metrics;
pub mod quantum;
pub mod scheme;

pub use error::{Error, Result};

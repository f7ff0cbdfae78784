//! Simulation of one-step linear cluster-state preparation in a chain of
//! double-quantum-dot molecules encoded on singlet (`|0⟩ = |S⟩`) and
//! triplet (`|1⟩ = |T₀⟩`) states.
//!
//! The pipeline runs from device geometry and a trapezoidal detuning pulse
//! to the entangled chain state:
//!
//! * [`physics`]: adiabatic angle, Coulomb energies, the Ising coupling `E_cc`.
//! * [`pulse`]: detuning pulse shape, phase quadrature, hold-time calibration.
//! * [`state`]: dense chain state, Ising evolution, ideal cluster, stabilizers.
//! * [`noise`]: Gaussian bond-phase noise, Monte Carlo and exact fidelity.
//! * [`measurement`]: projective readout and nearest-neighbour-free scheduling.
//! * [`harness`]: configuration, CSV output, run manifests and CLI commands.
//!
//! Units are fixed throughout: lengths in nm, energies in meV, times in ns,
//! phases in radians.

pub mod constants;
pub mod error;
pub mod harness;
pub mod measurement;
pub mod noise;
pub mod physics;
pub mod pulse;
pub mod quad;
pub mod roots;
pub mod state;

pub use error::{Error, Result};
pub use measurement::{MeasurementRecord, MeasurementSpec, RoundSchedule};
pub use noise::{FidelityEstimate, FidelityKernel, PhaseNoiseModel};
pub use physics::{AdiabaticAngle, DeviceParams, EnergyMeV};
pub use pulse::{DetuningPulse, PhaseRadians};
pub use state::{BondPhaseVector, ChainState};

//! Toolkit for single-spin optically detected magnetic resonance (ODMR) at
//! high magnetic field: NV-center spin level structure up to a few tesla,
//! closed-form E-band microwave resonator design, pulse-response observables,
//! and hidden-Markov inference on single-shot readout photon traces.
//!
//! The crate is organized as four physics modules plus shared plumbing:
//!
//! * [`spin_model`]: the 9x9 electron-nuclear spin Hamiltonian of the NV
//!   ground state, its eigensystem and transition tables.
//! * [`dynamics`]: rotating-frame pulse response: Rabi oscillations, pulsed
//!   ODMR spectra, nuclear-spin-selective single-shot readout, NMR scans.
//! * [`resonator`]: cylindrical cavity modes, skin depth, loss budgets,
//!   power-to-field efficiency conversions, CPW half-wave estimates, and
//!   Lorentzian resonance fitting.
//! * [`readout`]: two-state Poisson hidden Markov model for quantum-jump
//!   fluorescence traces: forward-backward, Viterbi, EM parameter
//!   estimation, two-Poissonian histogram fits, dwell-time T1 extraction.
//!
//! All functions are pure given their inputs; stochastic operations take an
//! explicit seed and are bit-reproducible.

pub mod constants;
pub mod dynamics;
mod error;
pub mod fitting;
pub mod io;
pub mod readout;
pub mod resonator;
pub mod spin_model;

pub use error::{Error, Result};

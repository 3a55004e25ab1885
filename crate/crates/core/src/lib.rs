//! Simulation kernel for "electron juggling" remote entanglement generation
//! with trapped ions: alternating-handedness excitation pulses, Lindblad
//! repumping between pulses, and the resulting Bell-pair rate and fidelity.
//!
//! The crate is `no_std` and only needs an allocator. File formats, sweeps and
//! the command-line front end live in the `juggler` crate.
#![no_std]

extern crate alloc;

pub mod angular;
pub mod dynamics;
pub mod error;
pub mod excitation;
pub mod integrator;
pub mod juggle;
pub mod linalg;
pub mod quadrature;
pub mod species;
pub mod sweep;

pub use angular::{clebsch_gordan, wigner3j, HalfInt};
pub use dynamics::{
    evolve, lindblad_rhs, steady_state_distance, CollapseOperator, DensityOperator,
    EvolutionResult, FluxAccumulator, Lindbladian, PhasedHamiltonian, Tolerances,
};
pub use error::{Error, Result};
pub use excitation::{
    apply_birefringent_pulse, apply_ideal_pulse, jones_coefficients, pulse_propagator,
    wrong_excitation_probability, Handedness, PulseChannel, SpBlock,
};
pub use species::{SpeciesDescription, SpeciesModel};
pub use juggle::{
    fidelity, herald_probability, reg_rate, steady_state_stats, RegEstimate, Schedule, ShotClock,
    ShotConfig, ShotRecord, ShotRun,
};
pub use sweep::{max_rate_at_fidelity, Optimum, Scenario, SweepResult, SweepRow, WindowGrid};

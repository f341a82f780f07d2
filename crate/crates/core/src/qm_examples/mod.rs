//! Quantum-mechanical applications: a free particle on a curved measure and
//! the isotropic oscillator on the fuzzy sphere.

mod angular;
mod free_particle;
mod oscillator;

pub use angular::{angular_momentum, l_squared, l_squared_eigencheck, laplacian, solid_harmonics, LSquaredCheck};
pub use free_particle::{conjugate_by_measure_power, free_particle_check, FreeParticleReport};
pub use oscillator::{
    build_fuzzy_oscillator, energy_correction, proportionality, rotation_covariance_check, CovarianceEntry,
    EnergyLevel, FuzzySphereModel, OscillatorReport, RotationReport,
};

//! Dispersion interactions of an excited atom in an absorbing dilute gas.
//!
//! The crate computes the interaction potential between an excited two-level
//! atom and ground-state partner atoms embedded in a dilute gas that absorbs
//! at the probe frequency, then integrates the resulting pair force over
//! extended bodies (planar half-space, hemisphere). Everything closed-form
//! ships with a brute-force quadrature oracle.
//!
//! Module layout, bottom up:
//! - [`quadrature`]: adaptive Gauss-Kronrod integration on intervals,
//!   semi-infinite rays, and axisymmetric volumes, plus Richardson
//!   differentiation. Deterministic: identical inputs give identical
//!   bit patterns.
//! - [`response`]: atomic polarizabilities for ground and excited states,
//!   gas permittivity, the principal-branch refractive index, and the
//!   photon mean free path.
//! - [`green_kernel`]: the retarded dyadic propagation kernel and the two
//!   scalar contractions (coherent and absolute-square) the potentials use.
//! - [`pair_potential`]: the two-channel atom-atom potential, its
//!   asymptotic limits, and the resonant radial force with its absorption
//!   envelopes.
//! - [`geometry_forces`]: body forces for the planar half-space and
//!   hemisphere with closed forms, volume oracles, and the
//!   divergence-vs-absorption demonstration.

pub mod error;
pub mod geometry_forces;
pub mod green_kernel;
pub mod pair_potential;
pub mod quadrature;
pub mod response;
pub mod types;

pub use error::{KernelError, Result};
pub use geometry_forces::{
    divergence_demo, hemisphere_force_closed, hemisphere_force_oracle,
    hemisphere_regime_warning, planar_force_closed, planar_force_oracle, planar_force_physical,
    DivergenceSample, HalfSpaceGeometry, HemisphereGeometry, HemisphereRegime, VolumeOracleSpec,
};
pub use green_kernel::{dyadic_green, retarded_kernel_polynomials, KernelValue};
pub use pair_potential::{
    asymptotic_limit, enveloped_radial_force, nonresonant_channel, potential_excited,
    potential_excited_with_convention, potential_ground, potential_perturbative_vacuum,
    resonant_force, AsymptoticRegime, AtomState, ForceEnvelope, IndexConvention, PairConfig,
};
pub use quadrature::{
    central_difference, integrate_interval, integrate_interval_complex, integrate_semi_infinite,
    integrate_semi_infinite_complex, integrate_volume_axisymmetric, ComplexIntegralResult,
    DerivativeResult, IntegralResult, VolumeDomain,
};
pub use response::{
    alpha_excited, alpha_ground, mean_free_path, permittivity, refractive_index, MeanFreePath,
    OpticalResponse,
};
pub use types::{
    validate_pair, ComplexFrequency, DiluteGasMedium, FrequencyAxis, PotentialBreakdown,
    QuadratureSpec, TwoLevelAtom,
};

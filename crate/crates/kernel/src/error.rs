//! Error type shared by every module in the crate.

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, KernelError>;

/// Everything that can go wrong while building inputs or evaluating the
/// physics.
///
/// Construction errors (`InvalidAtom`, `InvalidMedium`, `InvalidSpec`,
/// `DegenerateAtoms`) are raised by the validated constructors in
/// [`crate::types`]; the remaining variants are raised at evaluation time.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum KernelError {
    /// Atom parameters violate a constructor invariant.
    #[error("invalid atom: {0}")]
    InvalidAtom(String),

    /// Medium parameters violate a constructor invariant.
    #[error("invalid medium: {0}")]
    InvalidMedium(String),

    /// A numerical control parameter is out of range.
    #[error("invalid spec: {0}")]
    InvalidSpec(String),

    /// The two transition frequencies are too close for the pole
    /// approximation behind the resonant channel to separate them.
    #[error(
        "degenerate atoms: |omega_a - omega_b| = {splitting:e} does not exceed \
         {required:e} (largest linewidth times the dissimilarity factor)"
    )]
    DegenerateAtoms { splitting: f64, required: f64 },

    /// A lossless polarizability was evaluated exactly on its real-axis pole.
    #[error("polarizability pole on the real axis at omega = {omega}")]
    PoleOnAxis { omega: f64 },

    /// The medium cannot absorb, so the photon mean free path is infinite.
    #[error("lossless medium: photon mean free path is infinite (n0 = {n0:e}, gamma = {gamma:e})")]
    LosslessMedium { n0: f64, gamma: f64 },

    /// The propagation kernel was evaluated at zero separation.
    #[error("zero separation: the propagation kernel diverges at x = 0")]
    ZeroSeparation,

    /// The adaptive quadrature hit its subdivision budget or a non-finite
    /// sample before reaching the requested tolerance.
    #[error("quadrature failure in {context}: {reason}")]
    QuadratureFailure { context: String, reason: String },

    /// The finite-difference step is below the resolution of f64 at the
    /// expansion point.
    #[error("differentiation step {step:e} underflows f64 resolution at x = {x:e}")]
    StepUnderflow { step: f64, x: f64 },
}

impl KernelError {
    /// Convenience constructor for quadrature failures.
    pub(crate) fn quadrature(context: &str, reason: impl Into<String>) -> Self {
        KernelError::QuadratureFailure {
            context: context.to_string(),
            reason: reason.into(),
        }
    }
}

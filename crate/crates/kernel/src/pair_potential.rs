//! Interaction potential between a pair of atoms embedded in the gas, split
//! into its nonresonant and resonant channels, plus the radial force of the
//! resonant channel and the closed-form asymptotes of every regime.
//!
//! The nonresonant channel is an integral along the imaginary frequency
//! axis, where every response function is real and the propagation kernel
//! decays as `e^{-2 n u R}`. The resonant channel comes from the real-axis
//! pole of the excited atom's response: the gas dresses it with the
//! absolute-square kernel, so it carries the absorption envelope
//! `e^{-2 Im n(omega_a) omega_a R}` and no spatial oscillation. A positive
//! force value means attraction toward larger field gradients (the force is
//! the derivative of the potential with respect to separation).

use num_complex::Complex64;

use crate::error::{KernelError, Result};
use crate::quadrature::{integrate_semi_infinite, IntegralResult};
use crate::response::{alpha_excited, alpha_ground, mean_free_path, refractive_index};
use crate::types::{
    ComplexFrequency, DiluteGasMedium, PotentialBreakdown, QuadratureSpec, TwoLevelAtom,
    validate_pair, DEFAULT_DISSIMILARITY_FACTOR,
};

/// A validated atom pair in a host medium.
///
/// Atom A is the one prepared in its excited state when the excited-pair
/// potential is evaluated; its linewidth is set to zero on construction (the
/// resonant channel treats A's pole as sharp, and the pair validation
/// guarantees B's line cannot overlap it).
#[derive(Debug, Clone, PartialEq)]
pub struct PairConfig {
    /// The (possibly excited) probe atom, linewidth zeroed.
    pub atom_a: TwoLevelAtom,
    /// The partner atom.
    pub atom_b: TwoLevelAtom,
    /// The host gas both atoms sit in.
    pub medium: DiluteGasMedium,
    /// Quadrature controls for the integrated channel.
    pub quad: QuadratureSpec,
}

impl PairConfig {
    /// Validates the pair with the default dissimilarity factor.
    ///
    /// # Errors
    /// [`KernelError::DegenerateAtoms`] when the transition splitting does
    /// not exceed ten times the largest linewidth.
    pub fn new(
        atom_a: TwoLevelAtom,
        atom_b: TwoLevelAtom,
        medium: DiluteGasMedium,
        quad: QuadratureSpec,
    ) -> Result<Self> {
        Self::with_dissimilarity_factor(atom_a, atom_b, medium, quad, DEFAULT_DISSIMILARITY_FACTOR)
    }

    /// Validates the pair with an explicit dissimilarity factor.
    ///
    /// # Errors
    /// As [`PairConfig::new`].
    pub fn with_dissimilarity_factor(
        atom_a: TwoLevelAtom,
        atom_b: TwoLevelAtom,
        medium: DiluteGasMedium,
        quad: QuadratureSpec,
        dissimilarity_factor: f64,
    ) -> Result<Self> {
        validate_pair(&atom_a, &atom_b, dissimilarity_factor)?;
        let atom_a = TwoLevelAtom {
            gamma: 0.0,
            ..atom_a
        };
        Ok(PairConfig {
            atom_a,
            atom_b,
            medium,
            quad,
        })
    }

    /// The complex resonance denominator
    /// `omega_b^2 - omega_a^2 - i gamma_b omega_a` shared by the resonant
    /// channel and every closed-form force.
    fn resonance_denominator(&self) -> Complex64 {
        Complex64::new(
            self.atom_b.omega * self.atom_b.omega - self.atom_a.omega * self.atom_a.omega,
            -self.atom_b.gamma * self.atom_a.omega,
        )
    }

    /// `K_c = d2_a d2_b omega_b omega_a^4 / (omega_b^2 - omega_a^2 - i gamma_b omega_a)`.
    fn resonant_coefficient(&self) -> Complex64 {
        let num = self.atom_a.d2 * self.atom_b.d2 * self.atom_b.omega * self.atom_a.omega.powi(4);
        num * self.resonance_denominator().finv()
    }
}

/// Which state of atom A drives the imaginary-axis channel.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AtomState {
    /// Excited-state response for atom A.
    Excited,
    /// Ground-state response for atom A.
    Ground,
}

/// How the resonant channel feeds the refractive index into its kernel
/// polynomial.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IndexConvention {
    /// Full complex index in the polynomial argument, real part taken of
    /// the whole product (default).
    ComplexIndex,
    /// Only the real part of the index enters the polynomial; the imaginary
    /// part still drives the envelope.
    RealPartIndex,
}

fn check_separation(r: f64) -> Result<()> {
    if !r.is_finite() || r <= 0.0 {
        return Err(KernelError::InvalidSpec(format!(
            "separation must be finite and positive, got {r}"
        )));
    }
    Ok(())
}

/// The imaginary-axis channel
/// `-(1/pi) int_0^inf du alpha_a(iu) alpha_b(iu) e^{-2 n u R}
///  [u^4 + 2u^3/(nR) + 5u^2/(nR)^2 + 6u/(nR)^3 + 3/(nR)^4] / R^2`
/// with `n = n(iu)`, where the bracket is the kernel polynomial multiplied
/// through by `u^4` so the integrand stays finite at `u = 0`.
///
/// Atom A enters with its excited- or ground-state response; atom B always
/// with its ground-state response. The atoms are passed explicitly (rather
/// than through [`PairConfig`]) so callers can probe linewidth conventions.
///
/// # Errors
/// [`KernelError::QuadratureFailure`] when the integral cannot reach
/// tolerance; invalid separations are [`KernelError::InvalidSpec`].
pub fn nonresonant_channel(
    atom_a: &TwoLevelAtom,
    atom_b: &TwoLevelAtom,
    medium: &DiluteGasMedium,
    quad: &QuadratureSpec,
    state_a: AtomState,
    r: f64,
) -> Result<IntegralResult> {
    check_separation(r)?;
    let mut sample_error: Option<KernelError> = None;
    let result = integrate_semi_infinite(
        |u| {
            let freq = match ComplexFrequency::imaginary(u) {
                Ok(f) => f,
                Err(e) => {
                    sample_error.get_or_insert(e);
                    return f64::NAN;
                }
            };
            let evaluated = (|| -> Result<f64> {
                let aa = match state_a {
                    AtomState::Excited => alpha_excited(atom_a, freq)?.re,
                    AtomState::Ground => alpha_ground(atom_a, freq)?.re,
                };
                let ab = alpha_ground(atom_b, freq)?.re;
                let n = refractive_index(medium, freq)?.n.re;
                let nr = n * r;
                let u2 = u * u;
                let bracket = u2 * u2
                    + 2.0 * u2 * u / nr
                    + 5.0 * u2 / (nr * nr)
                    + 6.0 * u / (nr * nr * nr)
                    + 3.0 / (nr * nr * nr * nr);
                Ok(-std::f64::consts::FRAC_1_PI * aa * ab * bracket * (-2.0 * n * u * r).exp()
                    / (r * r))
            })();
            match evaluated {
                Ok(v) => v,
                Err(e) => {
                    sample_error.get_or_insert(e);
                    f64::NAN
                }
            }
        },
        2.0 * r,
        quad,
    );
    match (result, sample_error) {
        (_, Some(e)) => Err(e),
        (Ok(res), None) => res.require_converged("nonresonant channel"),
        (Err(e), None) => Err(e),
    }
}

/// Closed resonant channel at separation `r`.
fn resonant_closed(cfg: &PairConfig, r: f64, convention: IndexConvention) -> Result<f64> {
    check_separation(r)?;
    let omega_a = cfg.atom_a.omega;
    let n = refractive_index(&cfg.medium, ComplexFrequency::real(omega_a)?)?.n;
    let x = match convention {
        IndexConvention::ComplexIndex => n * omega_a * r,
        IndexConvention::RealPartIndex => Complex64::new(n.re * omega_a * r, 0.0),
    };
    let inv2 = (x * x).finv();
    let poly = Complex64::new(1.0, 0.0) + inv2 + 3.0 * inv2 * inv2;
    let envelope = (-2.0 * n.im * omega_a * r).exp();
    let amplitude = -(4.0 / 9.0) * (cfg.resonant_coefficient() * poly) / (r * r);
    Ok(amplitude.re * envelope)
}

/// Full excited-pair potential: integrated nonresonant channel plus closed
/// resonant channel, with the default index convention.
///
/// # Errors
/// Quadrature and response errors propagate.
pub fn potential_excited(cfg: &PairConfig, r: f64) -> Result<PotentialBreakdown> {
    potential_excited_with_convention(cfg, r, IndexConvention::ComplexIndex)
}

/// Excited-pair potential with an explicit resonant index convention.
///
/// # Errors
/// As [`potential_excited`].
pub fn potential_excited_with_convention(
    cfg: &PairConfig,
    r: f64,
    convention: IndexConvention,
) -> Result<PotentialBreakdown> {
    let nonres = nonresonant_channel(
        &cfg.atom_a,
        &cfg.atom_b,
        &cfg.medium,
        &cfg.quad,
        AtomState::Excited,
        r,
    )?;
    let res = resonant_closed(cfg, r, convention)?;
    Ok(PotentialBreakdown::new(
        nonres.value,
        res,
        nonres.error_estimate,
    ))
}

/// Ground-pair potential: purely nonresonant.
///
/// # Errors
/// As [`potential_excited`].
pub fn potential_ground(cfg: &PairConfig, r: f64) -> Result<PotentialBreakdown> {
    let nonres = nonresonant_channel(
        &cfg.atom_a,
        &cfg.atom_b,
        &cfg.medium,
        &cfg.quad,
        AtomState::Ground,
        r,
    )?;
    Ok(PotentialBreakdown::new(
        nonres.value,
        0.0,
        nonres.error_estimate,
    ))
}

/// The two-atom potential with no medium and sharp lines: both linewidths
/// zero, unit refractive index. This is the textbook perturbative result the
/// in-medium potential must reduce to as the density and the partner
/// linewidth vanish.
///
/// # Errors
/// As [`potential_excited`].
pub fn potential_perturbative_vacuum(cfg: &PairConfig, r: f64) -> Result<PotentialBreakdown> {
    let atom_a = TwoLevelAtom {
        gamma: 0.0,
        ..cfg.atom_a
    };
    let atom_b = TwoLevelAtom {
        gamma: 0.0,
        ..cfg.atom_b
    };
    let vacuum_cfg = PairConfig {
        atom_a,
        atom_b,
        medium: DiluteGasMedium::vacuum(atom_b),
        quad: cfg.quad,
    };
    potential_excited(&vacuum_cfg, r)
}

/// Asymptotic regimes with closed-form potentials.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AsymptoticRegime {
    /// Excited pair, separations far below the transition wavelength:
    /// `-(4/3) d2_a d2_b omega_b / ((omega_b^2 - omega_a^2) R^6)`.
    VdwExcited,
    /// Excited pair, separations far beyond the wavelength (resonant
    /// channel): `-(4/9) d2_a d2_b omega_a^4 omega_b / ((omega_b^2 - omega_a^2) R^2)`.
    RetardedExcited,
    /// Ground pair, short range:
    /// `-(3/pi) R^-6 int_0^inf alpha_a(iu) alpha_b(iu) / n(iu)^4 du`.
    VdwGround,
    /// Ground pair, long range:
    /// `-23 alpha_a(0) alpha_b(0) / (4 pi n(0)^5 R^7)`.
    RetardedGround,
}

/// Closed-form asymptote of the selected regime at separation `r`.
///
/// The excited-pair forms describe the resonant channel (which dominates at
/// long range and sets the short-range frequency denominator); the ground
/// forms describe the full (purely nonresonant) potential.
///
/// # Errors
/// Quadrature errors propagate from the short-range ground coefficient.
pub fn asymptotic_limit(cfg: &PairConfig, regime: AsymptoticRegime, r: f64) -> Result<f64> {
    check_separation(r)?;
    let d2d2 = cfg.atom_a.d2 * cfg.atom_b.d2;
    let omega_a = cfg.atom_a.omega;
    let omega_b = cfg.atom_b.omega;
    let split = omega_b * omega_b - omega_a * omega_a;
    match regime {
        AsymptoticRegime::VdwExcited => Ok(-(4.0 / 3.0) * d2d2 * omega_b / (split * r.powi(6))),
        AsymptoticRegime::RetardedExcited => {
            Ok(-(4.0 / 9.0) * d2d2 * omega_a.powi(4) * omega_b / (split * r * r))
        }
        AsymptoticRegime::VdwGround => {
            let coefficient = ground_short_range_coefficient(cfg)?;
            Ok(-(3.0 / std::f64::consts::PI) * coefficient / r.powi(6))
        }
        AsymptoticRegime::RetardedGround => {
            let zero = ComplexFrequency::imaginary(0.0)?;
            let aa = alpha_ground(&cfg.atom_a, zero)?.re;
            let ab = alpha_ground(&cfg.atom_b, zero)?.re;
            let n0 = refractive_index(&cfg.medium, zero)?.n.re;
            Ok(-23.0 * aa * ab / (4.0 * std::f64::consts::PI * n0.powi(5) * r.powi(7)))
        }
    }
}

/// `int_0^inf alpha_a(iu) alpha_b(iu) / n(iu)^4 du`, mapped onto [0, 1)
/// through `u = s t/(1-t)` to tame the algebraic `u^-4` tail.
fn ground_short_range_coefficient(cfg: &PairConfig) -> Result<f64> {
    let scale = cfg.atom_a.omega.max(cfg.atom_b.omega);
    let mut sample_error: Option<KernelError> = None;
    let result = crate::quadrature::integrate_interval(
        |t| {
            let omt = 1.0 - t;
            let u = scale * t / omt;
            let evaluated = (|| -> Result<f64> {
                let freq = ComplexFrequency::imaginary(u)?;
                let aa = alpha_ground(&cfg.atom_a, freq)?.re;
                let ab = alpha_ground(&cfg.atom_b, freq)?.re;
                let n = refractive_index(&cfg.medium, freq)?.n.re;
                Ok(aa * ab / n.powi(4) * scale / (omt * omt))
            })();
            match evaluated {
                Ok(v) => v,
                Err(e) => {
                    sample_error.get_or_insert(e);
                    f64::NAN
                }
            }
        },
        0.0,
        1.0,
        &cfg.quad,
    );
    match (result, sample_error) {
        (_, Some(e)) => Err(e),
        (Ok(res), None) => Ok(res.require_converged("ground short-range coefficient")?.value),
        (Err(e), None) => Err(e),
    }
}

/// Spatial weighting applied to the resonant radial force.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ForceEnvelope {
    /// Absorption handled by truncating volume integrals at one mean free
    /// path; the force itself carries no exponential.
    SlabModel,
    /// Exponential absorption envelope referenced to the surface radius
    /// `r0`, with the decay length taken from the medium.
    Exponential {
        /// Radius where the envelope is unity.
        r0: f64,
    },
}

/// The two numbers every closed-form force is built from: the real part of
/// the resonant coefficient and the squared reduced wavelength
/// `b = 1/omega_a^2`. Shared with the geometry integrators so each formula
/// lives in exactly one place.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct ResonantForceCoeffs {
    pub(crate) re_k: f64,
    pub(crate) b: f64,
}

impl ResonantForceCoeffs {
    pub(crate) fn of(cfg: &PairConfig) -> Self {
        ResonantForceCoeffs {
            re_k: cfg.resonant_coefficient().re,
            b: 1.0 / (cfg.atom_a.omega * cfg.atom_a.omega),
        }
    }

    /// `F(R) = (8/9) Re[K_c] (1 + 2b/R^2 + 9b^2/R^4) / R^3`: derivative of
    /// the unenveloped resonant potential. Positive values pull the atoms
    /// together.
    pub(crate) fn slab_force(&self, r: f64) -> f64 {
        let r2 = r * r;
        (8.0 / 9.0) * self.re_k * (1.0 + 2.0 * self.b / r2 + 9.0 * self.b * self.b / (r2 * r2))
            / (r2 * r)
    }

    /// Derivative of the enveloped resonant potential
    /// `U(R) e^{-(R - r0)/L}`; see [`enveloped_radial_force`].
    pub(crate) fn enveloped_force(&self, r: f64, r0: f64, l_ph: f64) -> f64 {
        let b = self.b;
        let r2 = r * r;
        let gradient_term = (2.0 / (r2 * r)) * (1.0 + 2.0 * b / r2 + 9.0 * b * b / (r2 * r2));
        let envelope_term = (1.0 / (l_ph * r2)) * (1.0 + b / r2 + 3.0 * b * b / (r2 * r2));
        (4.0 / 9.0) * self.re_k * (gradient_term + envelope_term) * (-(r - r0) / l_ph).exp()
    }
}

/// Radial force of the resonant channel under an exponential absorption
/// envelope anchored at `r0` with decay length `l_ph`:
/// `F(R) = (4/9) Re[K_c] [(2/R^3)(1 + 2b/R^2 + 9b^2/R^4)
///         + (1/(L R^2))(1 + b/R^2 + 3b^2/R^4)] e^{-(R-r0)/L}`.
/// This is the derivative of the enveloped resonant potential.
///
/// # Errors
/// [`KernelError::InvalidSpec`] for nonpositive `r`, `r0`, or `l_ph`.
pub fn enveloped_radial_force(cfg: &PairConfig, r: f64, r0: f64, l_ph: f64) -> Result<f64> {
    check_separation(r)?;
    if !(r0 > 0.0) || !(l_ph > 0.0) || !r0.is_finite() || !l_ph.is_finite() {
        return Err(KernelError::InvalidSpec(format!(
            "envelope needs positive reference radius and decay length, got r0 = {r0}, l_ph = {l_ph}"
        )));
    }
    Ok(ResonantForceCoeffs::of(cfg).enveloped_force(r, r0, l_ph))
}

/// Resonant radial force between the pair at separation `r`.
///
/// # Errors
/// The exponential envelope needs an absorbing medium to fix its decay
/// length, so [`KernelError::LosslessMedium`] propagates for vacuum.
pub fn resonant_force(cfg: &PairConfig, envelope: ForceEnvelope, r: f64) -> Result<f64> {
    check_separation(r)?;
    match envelope {
        ForceEnvelope::SlabModel => Ok(ResonantForceCoeffs::of(cfg).slab_force(r)),
        ForceEnvelope::Exponential { r0 } => {
            let l_ph = mean_free_path(&cfg.medium, cfg.atom_a.omega)?.exact;
            enveloped_radial_force(cfg, r, r0, l_ph)
        }
    }
}

//! Input types: atoms, the host medium, frequency arguments, and the
//! numerical control knobs.
//!
//! Everything is in natural units (hbar = c = 1): frequencies set the energy
//! scale and lengths are inverse frequencies. Constructors validate; the
//! fields stay public for read access, and keeping an instance valid after a
//! direct field write is the caller's responsibility.

use num_complex::Complex64;

use crate::error::{KernelError, Result};

/// Default factor by which the transition splitting must exceed the largest
/// linewidth before two atoms count as spectrally distinct.
pub const DEFAULT_DISSIMILARITY_FACTOR: f64 = 10.0;

/// Default upper bound on the diluteness parameter of a gas medium.
pub const DEFAULT_DILUTENESS_LIMIT: f64 = 1e-2;

/// A two-level atom: transition frequency `omega`, squared transition dipole
/// moment `d2`, and spontaneous linewidth `gamma`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoLevelAtom {
    /// Transition frequency, > 0.
    pub omega: f64,
    /// Squared dipole matrix element of the transition, > 0.
    pub d2: f64,
    /// Linewidth, in [0, omega).
    pub gamma: f64,
}

impl TwoLevelAtom {
    /// Builds an atom, checking `omega > 0`, `d2 > 0`, `0 <= gamma < omega`.
    ///
    /// # Errors
    /// [`KernelError::InvalidAtom`] when any bound fails or a value is not
    /// finite.
    pub fn new(omega: f64, d2: f64, gamma: f64) -> Result<Self> {
        if !omega.is_finite() || omega <= 0.0 {
            return Err(KernelError::InvalidAtom(format!(
                "transition frequency must be finite and positive, got {omega}"
            )));
        }
        if !d2.is_finite() || d2 <= 0.0 {
            return Err(KernelError::InvalidAtom(format!(
                "squared dipole moment must be finite and positive, got {d2}"
            )));
        }
        if !gamma.is_finite() || gamma < 0.0 || gamma >= omega {
            return Err(KernelError::InvalidAtom(format!(
                "linewidth must satisfy 0 <= gamma < omega, got gamma = {gamma}, omega = {omega}"
            )));
        }
        Ok(TwoLevelAtom { omega, d2, gamma })
    }

    /// Builds an atom with zero linewidth.
    ///
    /// # Errors
    /// Same as [`TwoLevelAtom::new`].
    pub fn lossless(omega: f64, d2: f64) -> Result<Self> {
        TwoLevelAtom::new(omega, d2, 0.0)
    }

    /// Transition wavelength 2 pi / omega.
    pub fn wavelength(&self) -> f64 {
        2.0 * std::f64::consts::PI / self.omega
    }
}

/// A dilute gas of identical two-level atoms acting as the host medium.
#[derive(Debug, Clone, PartialEq)]
pub struct DiluteGasMedium {
    /// The gas species.
    pub species: TwoLevelAtom,
    /// Number density, >= 0 (0 means vacuum).
    pub n0: f64,
    /// Upper bound enforced on [`DiluteGasMedium::diluteness`].
    pub diluteness_limit: f64,
}

impl DiluteGasMedium {
    /// Builds a medium with the default diluteness bound.
    ///
    /// # Errors
    /// [`KernelError::InvalidMedium`] when `n0` is negative or not finite,
    /// when a nonzero density is paired with a lossless species (an absorbing
    /// medium needs a linewidth), or when the diluteness bound is exceeded.
    pub fn new(species: TwoLevelAtom, n0: f64) -> Result<Self> {
        DiluteGasMedium::with_diluteness_limit(species, n0, DEFAULT_DILUTENESS_LIMIT)
    }

    /// Builds a medium with an explicit diluteness bound.
    ///
    /// # Errors
    /// Same as [`DiluteGasMedium::new`], plus an invalid bound.
    pub fn with_diluteness_limit(
        species: TwoLevelAtom,
        n0: f64,
        diluteness_limit: f64,
    ) -> Result<Self> {
        if !diluteness_limit.is_finite() || diluteness_limit <= 0.0 {
            return Err(KernelError::InvalidMedium(format!(
                "diluteness limit must be finite and positive, got {diluteness_limit}"
            )));
        }
        if !n0.is_finite() || n0 < 0.0 {
            return Err(KernelError::InvalidMedium(format!(
                "number density must be finite and nonnegative, got {n0}"
            )));
        }
        if n0 > 0.0 && species.gamma == 0.0 {
            return Err(KernelError::InvalidMedium(
                "a gas at finite density must absorb: species linewidth is zero".to_string(),
            ));
        }
        let medium = DiluteGasMedium {
            species,
            n0,
            diluteness_limit,
        };
        let diluteness = medium.diluteness();
        if diluteness >= diluteness_limit {
            return Err(KernelError::InvalidMedium(format!(
                "diluteness {diluteness:e} exceeds the limit {diluteness_limit:e}"
            )));
        }
        Ok(medium)
    }

    /// Builds the zero-density (vacuum) medium for a given species.
    pub fn vacuum(species: TwoLevelAtom) -> Self {
        DiluteGasMedium {
            species,
            n0: 0.0,
            diluteness_limit: DEFAULT_DILUTENESS_LIMIT,
        }
    }

    /// Diluteness parameter 4 pi n0 d2 / (3 omega^2): the scale of the
    /// medium-induced correction to the permittivity.
    pub fn diluteness(&self) -> f64 {
        4.0 * std::f64::consts::PI * self.n0 * self.species.d2
            / (3.0 * self.species.omega * self.species.omega)
    }
}

/// Which axis of the complex frequency plane a value lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrequencyAxis {
    /// Physical frequencies omega >= 0.
    RealAxis,
    /// Euclidean frequencies i u, u >= 0.
    ImaginaryAxis,
}

/// A frequency on one of the two axes used by the theory: `value` is omega on
/// the real axis and u (the magnitude of i u) on the imaginary axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexFrequency {
    /// Axis selector.
    pub axis: FrequencyAxis,
    /// Nonnegative coordinate along the axis.
    pub value: f64,
}

impl ComplexFrequency {
    /// A real-axis frequency omega >= 0.
    ///
    /// # Errors
    /// [`KernelError::InvalidSpec`] for negative or non-finite input.
    pub fn real(omega: f64) -> Result<Self> {
        Self::build(FrequencyAxis::RealAxis, omega)
    }

    /// An imaginary-axis frequency i u with u >= 0.
    ///
    /// # Errors
    /// [`KernelError::InvalidSpec`] for negative or non-finite input.
    pub fn imaginary(u: f64) -> Result<Self> {
        Self::build(FrequencyAxis::ImaginaryAxis, u)
    }

    fn build(axis: FrequencyAxis, value: f64) -> Result<Self> {
        if !value.is_finite() || value < 0.0 {
            return Err(KernelError::InvalidSpec(format!(
                "frequency coordinate must be finite and nonnegative, got {value}"
            )));
        }
        Ok(ComplexFrequency { axis, value })
    }

    /// The point in the complex frequency plane.
    pub fn as_complex(&self) -> Complex64 {
        match self.axis {
            FrequencyAxis::RealAxis => Complex64::new(self.value, 0.0),
            FrequencyAxis::ImaginaryAxis => Complex64::new(0.0, self.value),
        }
    }
}

/// Additive split of an interaction potential into its two channels.
///
/// `total` is always the exact floating-point sum of the parts, so consumers
/// can rely on `total == nonresonant + resonant` bit for bit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PotentialBreakdown {
    /// Channel built from the imaginary-frequency integral.
    pub nonresonant: f64,
    /// Channel carried by the pole of the excited-state response (zero for a
    /// ground-state pair).
    pub resonant: f64,
    /// `nonresonant + resonant`.
    pub total: f64,
    /// Error estimate of the numerically integrated channel; closed-form
    /// channels contribute nothing.
    pub quadrature_error: f64,
}

impl PotentialBreakdown {
    /// Assembles a breakdown, fixing `total` as the sum of the parts.
    pub fn new(nonresonant: f64, resonant: f64, quadrature_error: f64) -> Self {
        PotentialBreakdown {
            nonresonant,
            resonant,
            total: nonresonant + resonant,
            quadrature_error,
        }
    }
}

/// Control knobs for the adaptive quadrature engines.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    /// Relative tolerance target.
    pub rel_tol: f64,
    /// Absolute tolerance floor, protecting integrals whose value is zero.
    pub abs_tol: f64,
    /// Budget of panel bisections before the engine gives up.
    pub max_subdivisions: usize,
    /// Number of e-foldings of a known exponential tail kept inside the
    /// truncated integration window.
    pub tail_decades: f64,
}

impl QuadratureSpec {
    /// Validates the knobs.
    ///
    /// # Errors
    /// [`KernelError::InvalidSpec`] for nonpositive tolerances or windows.
    pub fn new(
        rel_tol: f64,
        abs_tol: f64,
        max_subdivisions: usize,
        tail_decades: f64,
    ) -> Result<Self> {
        if !rel_tol.is_finite() || rel_tol <= 0.0 || rel_tol >= 1.0 {
            return Err(KernelError::InvalidSpec(format!(
                "relative tolerance must be in (0, 1), got {rel_tol}"
            )));
        }
        if !abs_tol.is_finite() || abs_tol <= 0.0 {
            return Err(KernelError::InvalidSpec(format!(
                "absolute tolerance must be finite and positive, got {abs_tol}"
            )));
        }
        if max_subdivisions == 0 {
            return Err(KernelError::InvalidSpec(
                "subdivision budget must be positive".to_string(),
            ));
        }
        if !tail_decades.is_finite() || tail_decades <= 0.0 {
            return Err(KernelError::InvalidSpec(format!(
                "tail window must be finite and positive, got {tail_decades}"
            )));
        }
        Ok(QuadratureSpec {
            rel_tol,
            abs_tol,
            max_subdivisions,
            tail_decades,
        })
    }
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            rel_tol: 1e-9,
            abs_tol: 1e-30,
            max_subdivisions: 1_000_000,
            tail_decades: 40.0,
        }
    }
}

/// Checks that two atoms are spectrally distinct enough for the resonant
/// channel's pole treatment: the splitting `|omega_a - omega_b|` must exceed
/// the largest linewidth times `dissimilarity_factor`.
///
/// # Errors
/// [`KernelError::DegenerateAtoms`] when the bound fails (equal frequencies
/// always fail).
pub fn validate_pair(
    atom_a: &TwoLevelAtom,
    atom_b: &TwoLevelAtom,
    dissimilarity_factor: f64,
) -> Result<()> {
    let splitting = (atom_a.omega - atom_b.omega).abs();
    let required = atom_a.gamma.max(atom_b.gamma) * dissimilarity_factor;
    if splitting <= required {
        return Err(KernelError::DegenerateAtoms {
            splitting,
            required,
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn atom_constructor_enforces_bounds() {
        assert!(TwoLevelAtom::new(1.0, 1.0, 0.0).is_ok());
        assert!(TwoLevelAtom::new(1.0, 1.0, 0.999).is_ok());
        assert!(matches!(
            TwoLevelAtom::new(0.0, 1.0, 0.0),
            Err(KernelError::InvalidAtom(_))
        ));
        assert!(matches!(
            TwoLevelAtom::new(1.0, -1.0, 0.0),
            Err(KernelError::InvalidAtom(_))
        ));
        assert!(matches!(
            TwoLevelAtom::new(1.0, 1.0, 1.0),
            Err(KernelError::InvalidAtom(_))
        ));
        assert!(matches!(
            TwoLevelAtom::new(1.0, 1.0, -0.1),
            Err(KernelError::InvalidAtom(_))
        ));
    }

    #[test]
    fn medium_requires_absorption_at_finite_density() {
        let lossless = TwoLevelAtom::lossless(1.5, 1.0).unwrap();
        let lossy = TwoLevelAtom::new(1.5, 1.0, 0.01).unwrap();
        assert!(DiluteGasMedium::new(lossless, 0.0).is_ok());
        assert!(matches!(
            DiluteGasMedium::new(lossless, 1e-4),
            Err(KernelError::InvalidMedium(_))
        ));
        assert!(DiluteGasMedium::new(lossy, 1e-4).is_ok());
    }

    #[test]
    fn medium_rejects_dense_gas() {
        let species = TwoLevelAtom::new(1.5, 1.0, 0.01).unwrap();
        // diluteness = 4 pi n0 / (3 * 2.25) hits 1e-2 near n0 = 5.4e-3
        let err = DiluteGasMedium::new(species, 1e-2).unwrap_err();
        assert!(matches!(err, KernelError::InvalidMedium(_)));
        let loose = DiluteGasMedium::with_diluteness_limit(species, 1e-2, 0.1);
        assert!(loose.is_ok());
    }

    #[test]
    fn diluteness_formula() {
        let species = TwoLevelAtom::new(1.5, 1.0, 0.01).unwrap();
        let medium = DiluteGasMedium::new(species, 1e-4).unwrap();
        let expected = 4.0 * std::f64::consts::PI * 1e-4 / (3.0 * 2.25);
        assert!((medium.diluteness() - expected).abs() < 1e-18);
    }

    #[test]
    fn frequency_axes_map_to_complex_plane() {
        let re = ComplexFrequency::real(2.0).unwrap().as_complex();
        assert_eq!((re.re, re.im), (2.0, 0.0));
        let im = ComplexFrequency::imaginary(3.0).unwrap().as_complex();
        assert_eq!((im.re, im.im), (0.0, 3.0));
        assert!(ComplexFrequency::real(-1.0).is_err());
        assert!(ComplexFrequency::imaginary(f64::NAN).is_err());
    }

    #[test]
    fn breakdown_total_is_exact_sum() {
        let b = PotentialBreakdown::new(0.1, -0.3, 1e-12);
        assert_eq!(b.total, 0.1 + (-0.3));
    }

    #[test]
    fn pair_validation_rejects_near_degenerate_atoms() {
        let a = TwoLevelAtom::lossless(1.0, 1.0).unwrap();
        let b = TwoLevelAtom::new(1.05, 1.0, 0.01).unwrap();
        // splitting 0.05 does not exceed 10 * 0.01
        assert!(matches!(
            validate_pair(&a, &b, DEFAULT_DISSIMILARITY_FACTOR),
            Err(KernelError::DegenerateAtoms { .. })
        ));
        let b_far = TwoLevelAtom::new(1.5, 1.0, 0.01).unwrap();
        assert!(validate_pair(&a, &b_far, DEFAULT_DISSIMILARITY_FACTOR).is_ok());
        // identical frequencies fail even with zero linewidths
        let twin = TwoLevelAtom::lossless(1.0, 2.0).unwrap();
        assert!(validate_pair(&a, &twin, DEFAULT_DISSIMILARITY_FACTOR).is_err());
    }

    #[test]
    fn quadrature_spec_defaults_and_validation() {
        let spec = QuadratureSpec::default();
        assert_eq!(spec.rel_tol, 1e-9);
        assert_eq!(spec.abs_tol, 1e-30);
        assert_eq!(spec.max_subdivisions, 1_000_000);
        assert_eq!(spec.tail_decades, 40.0);
        assert!(QuadratureSpec::new(0.0, 1e-30, 10, 40.0).is_err());
        assert!(QuadratureSpec::new(1e-9, 0.0, 10, 40.0).is_err());
        assert!(QuadratureSpec::new(1e-9, 1e-30, 0, 40.0).is_err());
        assert!(QuadratureSpec::new(1e-9, 1e-30, 10, -1.0).is_err());
    }
}

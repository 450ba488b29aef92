//! Linear response: atomic polarizabilities, gas permittivity, refractive
//! index, and the photon mean free path.
//!
//! The two-level polarizabilities carry two poles each, shifted off the real
//! axis by half the linewidth. A ground-state atom responds with poles at
//! +/- the transition frequency; an excited atom has them mirrored, which
//! flips the sign of the static response and moves one pole to where a real
//! photon can be emitted — that pole is what feeds the resonant channel of
//! the interaction. The gas permittivity is the dilute-limit closure
//! eps = 1 + 4 pi n0 alpha_g, its principal square root is the refractive
//! index (absorptive branch: Im n >= 0 for physical frequencies), and the
//! imaginary part of n at the probe frequency sets the photon mean free
//! path.

use num_complex::Complex64;

use crate::error::{KernelError, Result};
use crate::types::{ComplexFrequency, DiluteGasMedium, FrequencyAxis, TwoLevelAtom};

/// Ground-state polarizability
/// `alpha_g(w) = (d2/3) [1/(omega - w - i gamma/2) + 1/(omega + w + i gamma/2)]`
/// at the complex frequency `w` selected by `f`.
///
/// On the imaginary axis the two denominators are conjugate, so the value is
/// real for every linewidth.
///
/// # Errors
/// [`KernelError::PoleOnAxis`] when a lossless atom is probed exactly at its
/// transition frequency on the real axis.
pub fn alpha_ground(atom: &TwoLevelAtom, f: ComplexFrequency) -> Result<Complex64> {
    check_pole(atom, f)?;
    let w = f.as_complex();
    let shift = Complex64::new(0.0, atom.gamma / 2.0);
    let a = (Complex64::new(atom.omega, 0.0) - w - shift).finv();
    let b = (Complex64::new(atom.omega, 0.0) + w + shift).finv();
    Ok((atom.d2 / 3.0) * (a + b))
}

/// Excited-state polarizability: the ground-state form with the transition
/// frequency negated,
/// `alpha_e(w) = (d2/3) [1/(-omega - w - i gamma/2) + 1/(-omega + w + i gamma/2)]`.
///
/// Static limit `alpha_e(0) = -(2/3) d2/omega`; on the imaginary axis
/// `alpha_e(iu) = -alpha_g(iu)` exactly.
///
/// # Errors
/// [`KernelError::PoleOnAxis`] as for [`alpha_ground`].
pub fn alpha_excited(atom: &TwoLevelAtom, f: ComplexFrequency) -> Result<Complex64> {
    check_pole(atom, f)?;
    let w = f.as_complex();
    let shift = Complex64::new(0.0, atom.gamma / 2.0);
    let a = (Complex64::new(-atom.omega, 0.0) - w - shift).finv();
    let b = (Complex64::new(-atom.omega, 0.0) + w + shift).finv();
    Ok((atom.d2 / 3.0) * (a + b))
}

fn check_pole(atom: &TwoLevelAtom, f: ComplexFrequency) -> Result<()> {
    if atom.gamma == 0.0 && f.axis == FrequencyAxis::RealAxis && f.value == atom.omega {
        return Err(KernelError::PoleOnAxis { omega: f.value });
    }
    Ok(())
}

/// Permittivity of the dilute gas, `eps = 1 + 4 pi n0 alpha_g(species)`.
/// Zero density short-circuits to exactly 1 without evaluating the species
/// response, so a vacuum medium is usable at any frequency, poles included.
///
/// # Errors
/// As [`alpha_ground`] for the species response.
pub fn permittivity(medium: &DiluteGasMedium, f: ComplexFrequency) -> Result<Complex64> {
    if medium.n0 == 0.0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let alpha = alpha_ground(&medium.species, f)?;
    Ok(Complex64::new(1.0, 0.0) + 4.0 * std::f64::consts::PI * medium.n0 * alpha)
}

/// Permittivity and refractive index at one frequency, with `n * n == eps`
/// by construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OpticalResponse {
    /// Permittivity.
    pub epsilon: Complex64,
    /// Refractive index on the absorptive branch.
    pub n: Complex64,
}

/// Refractive index as the principal square root of the permittivity.
///
/// The principal branch keeps `Re n >= 0` everywhere; for physical (real
/// axis) frequencies a passive gas has `Im eps >= 0`, which the principal
/// root maps to the absorptive sign `Im n >= 0`. The sign is re-checked and
/// flipped defensively in case a future response model leaves the passive
/// half-plane.
///
/// # Errors
/// As [`permittivity`].
pub fn refractive_index(medium: &DiluteGasMedium, f: ComplexFrequency) -> Result<OpticalResponse> {
    let epsilon = permittivity(medium, f)?;
    let mut n = epsilon.sqrt();
    if f.axis == FrequencyAxis::RealAxis && n.im < 0.0 {
        n = -n;
    }
    Ok(OpticalResponse { epsilon, n })
}

/// Photon mean free path at a probe frequency, both as evaluated from the
/// exact refractive index and in the dilute closed form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanFreePath {
    /// `1 / (2 Im n(omega) omega)` with the exact index.
    pub exact: f64,
    /// Dilute closed form
    /// `3 [(omega_s^2 - omega^2)^2 + (gamma omega)^2] / (8 pi n0 d2 omega_s gamma omega^2)`.
    pub dilute: f64,
}

/// Photon mean free path of the gas at the probe frequency `omega`.
///
/// # Errors
/// [`KernelError::LosslessMedium`] when the gas cannot absorb (zero density
/// or zero species linewidth) or the probe frequency is not positive, since
/// the path is infinite in all those cases.
pub fn mean_free_path(medium: &DiluteGasMedium, omega: f64) -> Result<MeanFreePath> {
    let gamma = medium.species.gamma;
    if medium.n0 == 0.0 || gamma == 0.0 || !(omega > 0.0) {
        return Err(KernelError::LosslessMedium {
            n0: medium.n0,
            gamma,
        });
    }
    let response = refractive_index(medium, ComplexFrequency::real(omega)?)?;
    let exact = 1.0 / (2.0 * response.n.im * omega);
    let omega_s = medium.species.omega;
    let d2 = medium.species.d2;
    let d_sq = {
        let a = omega_s * omega_s - omega * omega;
        let b = gamma * omega;
        a * a + b * b
    };
    let dilute =
        3.0 * d_sq / (8.0 * std::f64::consts::PI * medium.n0 * d2 * omega_s * gamma * omega * omega);
    Ok(MeanFreePath { exact, dilute })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::DiluteGasMedium;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn gas_atom() -> TwoLevelAtom {
        TwoLevelAtom::new(1.5, 1.0, 0.01).unwrap()
    }

    fn medium() -> DiluteGasMedium {
        DiluteGasMedium::new(gas_atom(), 1e-4).unwrap()
    }

    #[test]
    fn static_polarizabilities_of_a_lossless_atom() {
        let atom = TwoLevelAtom::lossless(1.0, 1.0).unwrap();
        let zero = ComplexFrequency::real(0.0).unwrap();
        let g = alpha_ground(&atom, zero).unwrap();
        assert_relative_eq!(g.re, 2.0 / 3.0, max_relative = 1e-15);
        assert_abs_diff_eq!(g.im, 0.0);
        let e = alpha_excited(&atom, zero).unwrap();
        assert_relative_eq!(e.re, -2.0 / 3.0, max_relative = 1e-15);
    }

    #[test]
    fn excited_equals_minus_ground_on_the_imaginary_axis() {
        let atom = TwoLevelAtom::lossless(1.0, 1.0).unwrap();
        let f = ComplexFrequency::imaginary(2.0).unwrap();
        let e = alpha_excited(&atom, f).unwrap();
        assert_relative_eq!(e.re, -2.0 / 15.0, max_relative = 1e-15);
        assert_abs_diff_eq!(e.im, 0.0, epsilon = 1e-18);
        let g = alpha_ground(&atom, f).unwrap();
        assert_relative_eq!(e.re, -g.re, max_relative = 1e-15);
    }

    #[test]
    fn lossless_pole_is_detected_only_on_the_real_axis() {
        let atom = TwoLevelAtom::lossless(1.0, 1.0).unwrap();
        let on_pole = ComplexFrequency::real(1.0).unwrap();
        assert!(matches!(
            alpha_ground(&atom, on_pole),
            Err(KernelError::PoleOnAxis { .. })
        ));
        assert!(matches!(
            alpha_excited(&atom, on_pole),
            Err(KernelError::PoleOnAxis { .. })
        ));
        let imag = ComplexFrequency::imaginary(1.0).unwrap();
        assert!(alpha_ground(&atom, imag).is_ok());
        let damped = gas_atom();
        assert!(alpha_ground(&damped, ComplexFrequency::real(1.5).unwrap()).is_ok());
    }

    #[test]
    fn resonance_peak_of_the_damped_response() {
        // 50-digit reference at the transition frequency
        let g = alpha_ground(&gas_atom(), ComplexFrequency::real(1.5).unwrap()).unwrap();
        assert_relative_eq!(g.re, 0.11111080246999314, max_relative = 1e-14);
        assert_relative_eq!(g.im, 66.66648148199588, max_relative = 1e-14);
    }

    #[test]
    fn static_permittivity_matches_reference() {
        let eps = permittivity(&medium(), ComplexFrequency::real(0.0).unwrap()).unwrap();
        assert_relative_eq!(eps.re, 1.000558499155092, max_relative = 1e-14);
        assert_abs_diff_eq!(eps.im, 0.0, epsilon = 1e-18);
    }

    #[test]
    fn index_squares_back_to_permittivity() {
        for value in [0.0, 0.7, 1.5, 2.9] {
            for f in [
                ComplexFrequency::real(value).unwrap(),
                ComplexFrequency::imaginary(value).unwrap(),
            ] {
                let r = refractive_index(&medium(), f).unwrap();
                let back = r.n * r.n;
                assert_relative_eq!(back.re, r.epsilon.re, max_relative = 1e-14);
                assert_abs_diff_eq!(back.im, r.epsilon.im, epsilon = 1e-16);
            }
        }
    }

    #[test]
    fn absorptive_branch_at_the_probe_frequency() {
        let r = refractive_index(&medium(), ComplexFrequency::real(1.0).unwrap()).unwrap();
        assert_relative_eq!(r.n.re, 1.0005024863675594, max_relative = 1e-13);
        assert_relative_eq!(r.n.im, 4.018801036926933e-6, max_relative = 1e-12);
    }

    #[test]
    fn mean_free_path_exact_and_dilute_forms() {
        let l = mean_free_path(&medium(), 1.0).unwrap();
        assert_relative_eq!(l.exact, 124415.21623134055, max_relative = 1e-12);
        assert_relative_eq!(l.dilute, 124347.75703769783, max_relative = 1e-12);
        let rel = (l.exact / l.dilute - 1.0).abs();
        assert!(rel < 10.0 * medium().diluteness());
    }

    #[test]
    fn lossless_configurations_have_no_mean_free_path() {
        let vacuum = DiluteGasMedium::vacuum(gas_atom());
        assert!(matches!(
            mean_free_path(&vacuum, 1.0),
            Err(KernelError::LosslessMedium { .. })
        ));
        let lossless_species = TwoLevelAtom::lossless(1.5, 1.0).unwrap();
        let empty = DiluteGasMedium::vacuum(lossless_species);
        assert!(mean_free_path(&empty, 1.0).is_err());
        assert!(mean_free_path(&medium(), 0.0).is_err());
    }
}

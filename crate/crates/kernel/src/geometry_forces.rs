//! Forces on the excited atom from extended bodies of gas: a planar
//! half-space and a hemisphere centered on the atom, each with a closed form
//! and a brute-force volume-quadrature oracle, plus the demonstration that
//! the long-range shell energy diverges in vacuum and converges once the
//! medium absorbs.
//!
//! Every body force here is the number density times the pairwise resonant
//! radial force integrated over the body, projected on the symmetry axis.
//! Transverse components vanish by symmetry (tests assert this; the API
//! reports only the axial component). Positive values mean the atom is
//! pulled toward the body.

use crate::error::{KernelError, Result};
use crate::pair_potential::{PairConfig, ResonantForceCoeffs};
use crate::quadrature::{
    integrate_interval, integrate_volume_axisymmetric, IntegralResult, VolumeDomain,
};
use crate::response::mean_free_path;
use crate::types::QuadratureSpec;

fn check_positive(name: &str, v: f64) -> Result<()> {
    if !v.is_finite() || v <= 0.0 {
        return Err(KernelError::InvalidSpec(format!(
            "{name} must be finite and positive, got {v}"
        )));
    }
    Ok(())
}

/// A planar half-space of gas at distance `z0` from the atom, filling
/// `z >= z0` in coordinates where the atom sits at the origin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalfSpaceGeometry {
    /// Distance from the atom to the interface, > 0.
    pub z0: f64,
    /// When set, replaces the medium's photon mean free path in every
    /// formula and envelope. Lets dilute media (whose physical mean free
    /// path dwarfs any practical integration volume) be probed at compressed
    /// scales without touching the pair physics.
    pub l_ph_override: Option<f64>,
}

impl HalfSpaceGeometry {
    /// Half-space at distance `z0`, physical mean free path.
    ///
    /// # Errors
    /// [`KernelError::InvalidSpec`] for a nonpositive distance.
    pub fn new(z0: f64) -> Result<Self> {
        check_positive("interface distance", z0)?;
        Ok(HalfSpaceGeometry {
            z0,
            l_ph_override: None,
        })
    }

    /// Half-space with an explicit mean-free-path override.
    ///
    /// # Errors
    /// [`KernelError::InvalidSpec`] for nonpositive inputs.
    pub fn with_mean_free_path_override(z0: f64, l_ph: f64) -> Result<Self> {
        check_positive("interface distance", z0)?;
        check_positive("mean free path override", l_ph)?;
        Ok(HalfSpaceGeometry {
            z0,
            l_ph_override: Some(l_ph),
        })
    }
}

/// A hemispherical shell of gas: inner radius `r0`, flat face toward the
/// atom at the center of curvature, extending radially outward.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HemisphereGeometry {
    /// Inner radius of the gas body, > 0; the atom sits at the center.
    pub r0: f64,
    /// Same role as [`HalfSpaceGeometry::l_ph_override`].
    pub l_ph_override: Option<f64>,
}

impl HemisphereGeometry {
    /// Hemisphere of inner radius `r0`, physical mean free path.
    ///
    /// # Errors
    /// [`KernelError::InvalidSpec`] for a nonpositive radius.
    pub fn new(r0: f64) -> Result<Self> {
        check_positive("hemisphere inner radius", r0)?;
        Ok(HemisphereGeometry {
            r0,
            l_ph_override: None,
        })
    }

    /// Hemisphere with an explicit mean-free-path override.
    ///
    /// # Errors
    /// [`KernelError::InvalidSpec`] for nonpositive inputs.
    pub fn with_mean_free_path_override(r0: f64, l_ph: f64) -> Result<Self> {
        check_positive("hemisphere inner radius", r0)?;
        check_positive("mean free path override", l_ph)?;
        Ok(HemisphereGeometry {
            r0,
            l_ph_override: Some(l_ph),
        })
    }
}

/// Controls for the brute-force volume oracles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VolumeOracleSpec {
    /// Radial extent of the numerical window in units of the mean free
    /// path, at least [`VolumeOracleSpec::MIN_RADIAL_CUTOFF`]. The envelope
    /// leaves a relative remainder of order `e^{-cutoff}`, which is folded
    /// into the reported error estimate.
    pub radial_cutoff: f64,
    /// Quadrature controls for the volume integral.
    pub quad: QuadratureSpec,
}

impl VolumeOracleSpec {
    /// Smallest sensible window: `e^{-5}` leaves sub-percent remainders.
    pub const MIN_RADIAL_CUTOFF: f64 = 5.0;

    /// Builds a spec, checking the window size.
    ///
    /// # Errors
    /// [`KernelError::InvalidSpec`] for a cutoff below the minimum.
    pub fn new(radial_cutoff: f64, quad: QuadratureSpec) -> Result<Self> {
        if !radial_cutoff.is_finite() || radial_cutoff < Self::MIN_RADIAL_CUTOFF {
            return Err(KernelError::InvalidSpec(format!(
                "radial cutoff must be at least {}, got {radial_cutoff}",
                Self::MIN_RADIAL_CUTOFF
            )));
        }
        Ok(VolumeOracleSpec { radial_cutoff, quad })
    }
}

impl Default for VolumeOracleSpec {
    fn default() -> Self {
        VolumeOracleSpec {
            radial_cutoff: 20.0,
            quad: QuadratureSpec::default(),
        }
    }
}

/// The mean free path every geometry formula uses: the override when set,
/// otherwise the medium's photon mean free path at the probe frequency.
fn resolve_l_ph(cfg: &PairConfig, l_ph_override: Option<f64>) -> Result<f64> {
    match l_ph_override {
        Some(l) => Ok(l),
        None => Ok(mean_free_path(&cfg.medium, cfg.atom_a.omega)?.exact),
    }
}

/// Closed-form axial force of the half-space on the slab model: the pair
/// force integrated over a gas layer of one mean-free-path thickness,
/// `F = (8 pi / 9) n0 Re[K_c] [ln(1 + L/z0)
///      + (b/2)(1/z0^2 - 1/W^2) + (3 b^2/4)(1/z0^4 - 1/W^4)]`,
/// with `W = z0 + L` the far face of the layer.
///
/// # Errors
/// [`KernelError::LosslessMedium`] when no override is set and the medium
/// does not absorb.
pub fn planar_force_closed(cfg: &PairConfig, geometry: &HalfSpaceGeometry) -> Result<f64> {
    let l = resolve_l_ph(cfg, geometry.l_ph_override)?;
    let z0 = geometry.z0;
    let w = z0 + l;
    let c = ResonantForceCoeffs::of(cfg);
    let bracket = (1.0 + l / z0).ln()
        + (c.b / 2.0) * (1.0 / (z0 * z0) - 1.0 / (w * w))
        + (3.0 * c.b * c.b / 4.0) * (1.0 / z0.powi(4) - 1.0 / w.powi(4));
    Ok((8.0 * std::f64::consts::PI / 9.0) * cfg.medium.n0 * c.re_k * bracket)
}

/// Brute-force counterpart of [`planar_force_closed`]: the same slab-model
/// pair force integrated numerically over the layer
/// `z in [z0, z0 + L]`, unbounded transverse extent, axial projection.
///
/// # Errors
/// Mean-free-path and quadrature errors propagate.
pub fn planar_force_oracle(
    cfg: &PairConfig,
    geometry: &HalfSpaceGeometry,
    spec: &VolumeOracleSpec,
) -> Result<IntegralResult> {
    let l = resolve_l_ph(cfg, geometry.l_ph_override)?;
    let z0 = geometry.z0;
    let c = ResonantForceCoeffs::of(cfg);
    let n0 = cfg.medium.n0;
    let domain = VolumeDomain::Slab {
        z_min: z0,
        z_max: z0 + l,
        rho_max: None,
    };
    let result = integrate_volume_axisymmetric(
        |rho, z| {
            let r = rho.hypot(z);
            n0 * c.slab_force(r) * z / r
        },
        &domain,
        &spec.quad,
    )?;
    result.require_converged("planar volume oracle")
}

/// Axial half-space force with the exponential absorption envelope kept in
/// the integrand instead of the hard one-mean-free-path truncation. There is
/// no closed-form target for this variant; it exists for side-by-side
/// comparison with the slab model. The numerical window ends
/// `radial_cutoff` decay lengths past the interface and the windowing
/// remainder is folded into the error estimate.
///
/// # Errors
/// As [`planar_force_oracle`].
pub fn planar_force_physical(
    cfg: &PairConfig,
    geometry: &HalfSpaceGeometry,
    spec: &VolumeOracleSpec,
) -> Result<IntegralResult> {
    let l = resolve_l_ph(cfg, geometry.l_ph_override)?;
    let z0 = geometry.z0;
    let c = ResonantForceCoeffs::of(cfg);
    let n0 = cfg.medium.n0;
    let z_max = z0 + spec.radial_cutoff * l;
    let domain = VolumeDomain::Slab {
        z_min: z0,
        z_max,
        rho_max: None,
    };
    let mut result = integrate_volume_axisymmetric(
        |rho, z| {
            let r = rho.hypot(z);
            n0 * c.enveloped_force(r, z0, l) * z / r
        },
        &domain,
        &spec.quad,
    )?;
    // the slice integral at depth z decays like e^{-(z - z0)/L}; estimate
    // the truncated remainder as one further decay length of the last slice
    let tail = 2.0
        * std::f64::consts::PI
        * n0
        * z_max
        * l.min(z_max)
        * c.enveloped_force(z_max, z0, l).abs()
        * l;
    result.error_estimate += tail;
    result.require_converged("enveloped planar oracle")
}

/// One cutoff of the divergence demonstration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DivergenceSample {
    /// Outer radius of the truncated half-space ball.
    pub cutoff: f64,
    /// Shell energy of the long-range pair tail with no absorption: grows
    /// linearly with the cutoff.
    pub vacuum: f64,
    /// The same integral with the absorption envelope: saturates once the
    /// cutoff passes a few mean free paths.
    pub absorbing: f64,
    /// Combined quadrature error estimate of the two integrals.
    pub error_estimate: f64,
}

/// Integrates the long-range pair energy density `n0 K / R^2` over the
/// half-space truncated to a ball of each given radius, once bare and once
/// with the absorption envelope `e^{-R/L}`. The bare sequence grows without
/// bound (each doubling of the cutoff roughly doubles it); the enveloped
/// sequence converges. Cutoffs must be finite, strictly increasing, and
/// larger than the interface distance.
///
/// # Errors
/// [`KernelError::InvalidSpec`] for a bad cutoff list; mean-free-path and
/// quadrature errors propagate.
pub fn divergence_demo(
    cfg: &PairConfig,
    geometry: &HalfSpaceGeometry,
    cutoffs: &[f64],
) -> Result<Vec<DivergenceSample>> {
    if cutoffs.is_empty() {
        return Err(KernelError::InvalidSpec(
            "divergence demonstration needs at least one cutoff".to_string(),
        ));
    }
    let z0 = geometry.z0;
    for pair in cutoffs.windows(2) {
        if !(pair[0] < pair[1]) {
            return Err(KernelError::InvalidSpec(format!(
                "cutoffs must increase strictly, got {} then {}",
                pair[0], pair[1]
            )));
        }
    }
    for &c in cutoffs {
        if !c.is_finite() || c <= z0 {
            return Err(KernelError::InvalidSpec(format!(
                "every cutoff must be finite and beyond the interface distance {z0}, got {c}"
            )));
        }
    }
    let l = resolve_l_ph(cfg, geometry.l_ph_override)?;
    let a = &cfg.atom_a;
    let b = &cfg.atom_b;
    // long-range tail coefficient of the pair potential, sharp lines
    let k3 = -(4.0 / 9.0) * a.d2 * b.d2 * a.omega.powi(4) * b.omega
        / (b.omega * b.omega - a.omega * a.omega);
    let n0 = cfg.medium.n0;
    let mut samples = Vec::with_capacity(cutoffs.len());
    for &cutoff in cutoffs {
        let domain = VolumeDomain::HalfSpaceBall {
            plane_offset: z0,
            radius: cutoff,
        };
        let vacuum = integrate_volume_axisymmetric(
            |rho, z| n0 * k3 / (rho * rho + z * z),
            &domain,
            &cfg.quad,
        )?
        .require_converged("divergence demonstration, bare integral")?;
        let absorbing = integrate_volume_axisymmetric(
            |rho, z| {
                let r = rho.hypot(z);
                n0 * k3 / (r * r) * (-r / l).exp()
            },
            &domain,
            &cfg.quad,
        )?
        .require_converged("divergence demonstration, enveloped integral")?;
        samples.push(DivergenceSample {
            cutoff,
            vacuum: vacuum.value,
            absorbing: absorbing.value,
            error_estimate: vacuum.error_estimate + absorbing.error_estimate,
        });
    }
    Ok(samples)
}

/// Validity windows of the two hemisphere closed forms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HemisphereRegime {
    /// Inner radius far beyond both the mean free path and the transition
    /// wavelength.
    FarZone,
    /// Inner radius far below both scales.
    NearZone,
}

/// Closed-form axial force of the gas hemisphere on the atom at its center.
///
/// Far zone: `F = (4 pi / 9) n0 Re[K_c] (1 + 2 L / r0)`.
/// Near zone: `F = 2 pi n0 Re[K_c] b^2 / r0^4`.
///
/// # Errors
/// The far zone needs a finite mean free path, so
/// [`KernelError::LosslessMedium`] propagates for a vacuum medium with no
/// override. The near-zone form does not involve the mean free path.
pub fn hemisphere_force_closed(
    cfg: &PairConfig,
    geometry: &HemisphereGeometry,
    regime: HemisphereRegime,
) -> Result<f64> {
    let c = ResonantForceCoeffs::of(cfg);
    let n0 = cfg.medium.n0;
    let r0 = geometry.r0;
    match regime {
        HemisphereRegime::FarZone => {
            let l = resolve_l_ph(cfg, geometry.l_ph_override)?;
            Ok((4.0 * std::f64::consts::PI / 9.0) * n0 * c.re_k * (1.0 + 2.0 * l / r0))
        }
        HemisphereRegime::NearZone => {
            Ok(2.0 * std::f64::consts::PI * n0 * c.re_k * c.b * c.b / r0.powi(4))
        }
    }
}

/// Brute-force hemisphere force: the enveloped pair force integrated over
/// the hemispherical shell. Symmetry reduces the angular integral to the
/// projection factor pi, leaving
/// `F = pi n0 int_{r0}^{r0 + cutoff L} r^2 F_env(r) dr`,
/// evaluated piecewise from the inner edge outward with the windowing
/// remainder folded into the error estimate.
///
/// # Errors
/// Mean-free-path and quadrature errors propagate.
pub fn hemisphere_force_oracle(
    cfg: &PairConfig,
    geometry: &HemisphereGeometry,
    spec: &VolumeOracleSpec,
) -> Result<IntegralResult> {
    let l = resolve_l_ph(cfg, geometry.l_ph_override)?;
    let r0 = geometry.r0;
    let c = ResonantForceCoeffs::of(cfg);
    let n0 = cfg.medium.n0;
    let upper = r0 + spec.radial_cutoff * l;
    let weight = std::f64::consts::PI * n0;

    // breakpoints clustered at the inner edge, where the integrand peaks
    let mut breaks = vec![r0];
    for candidate in [
        2.0 * r0,
        r0 + l / 4.0,
        r0 + l,
        r0 + 4.0 * l,
        r0 + 12.0 * l,
    ] {
        if candidate > *breaks.last().expect("nonempty") && candidate < upper {
            breaks.push(candidate);
        }
    }
    breaks.push(upper);

    let mut value = 0.0;
    let mut error = 0.0;
    let mut evaluations = 0;
    let mut converged = true;
    for pair in breaks.windows(2) {
        let piece = integrate_interval(
            |r| weight * r * r * c.enveloped_force(r, r0, l),
            pair[0],
            pair[1],
            &spec.quad,
        )?;
        value += piece.value;
        error += piece.error_estimate;
        evaluations += piece.evaluations;
        converged &= piece.converged;
    }
    let tail = 2.0 * weight * upper * upper * c.enveloped_force(upper, r0, l).abs() * l;
    let result = IntegralResult {
        value,
        error_estimate: error + tail,
        evaluations,
        converged,
    };
    result.require_converged("hemisphere volume oracle")
}

/// Checks whether the requested closed-form regime is trustworthy at this
/// geometry, returning a human-readable caveat when it is not. The far zone
/// wants the inner radius at least ten times both the mean free path and
/// the transition wavelength; the near zone wants it at most a tenth of
/// both. A vacuum medium with no override leaves the mean free path
/// unconstrained for the near zone and is an error for the far zone.
///
/// # Errors
/// [`KernelError::LosslessMedium`] when the far zone is queried without a
/// resolvable mean free path.
pub fn hemisphere_regime_warning(
    cfg: &PairConfig,
    geometry: &HemisphereGeometry,
    regime: HemisphereRegime,
) -> Result<Option<String>> {
    let lambda = cfg.atom_a.wavelength();
    let r0 = geometry.r0;
    match regime {
        HemisphereRegime::FarZone => {
            let l = resolve_l_ph(cfg, geometry.l_ph_override)?;
            let mut violated = Vec::new();
            if r0 < 10.0 * l {
                violated.push(format!("mean free path {l:e}"));
            }
            if r0 < 10.0 * lambda {
                violated.push(format!("transition wavelength {lambda:e}"));
            }
            if violated.is_empty() {
                Ok(None)
            } else {
                Ok(Some(format!(
                    "far-zone closed form assumes the inner radius {r0:e} exceeds ten times the {}",
                    violated.join(" and the ")
                )))
            }
        }
        HemisphereRegime::NearZone => {
            let l = match resolve_l_ph(cfg, geometry.l_ph_override) {
                Ok(l) => Some(l),
                Err(KernelError::LosslessMedium { .. }) => None,
                Err(e) => return Err(e),
            };
            let mut violated = Vec::new();
            if let Some(l) = l {
                if r0 > l / 10.0 {
                    violated.push(format!("mean free path {l:e}"));
                }
            }
            if r0 > lambda / 10.0 {
                violated.push(format!("transition wavelength {lambda:e}"));
            }
            if violated.is_empty() {
                Ok(None)
            } else {
                Ok(Some(format!(
                    "near-zone closed form assumes the inner radius {r0:e} stays below a tenth of the {}",
                    violated.join(" and the ")
                )))
            }
        }
    }
}

//! Adaptive quadrature and differentiation engines.
//!
//! One embedded Gauss-Kronrod 7/15 core drives everything: plain intervals,
//! truncated semi-infinite integrals with an analytic tail bound, and nested
//! axisymmetric volume integrals reduced to two dimensions by symmetry. The
//! engines are strictly sequential, so results are bit-identical regardless
//! of how many threads the caller spreads independent integrals over.
//!
//! Integrands are evaluated as two-component vectors (real/imaginary, or
//! value/inner-error for volume nesting); panel subdivision decisions are
//! shared across components using the worst component error.

use std::cell::Cell;
use std::collections::BinaryHeap;

use num_complex::Complex64;

use crate::error::{KernelError, Result};
use crate::types::QuadratureSpec;

/// Positive abscissae of the 15-point Kronrod rule on [-1, 1] (the center
/// node 0 is listed first; the rule is symmetric).
const KRONROD_NODES: [f64; 8] = [
    0.000000000000000000000000000000000,
    0.207784955007898467600689403773245,
    0.405845151377397166906606412076961,
    0.586087235467691130294144838258730,
    0.741531185599394439863864773280788,
    0.864864423359769072789712788640926,
    0.949107912342758524526189684047851,
    0.991455371120812639206854697526329,
];

/// Kronrod weights matching [`KRONROD_NODES`].
const KRONROD_WEIGHTS: [f64; 8] = [
    0.209482141084727828012999174891714,
    0.204432940075298892414161999234649,
    0.190350578064785409913256402421014,
    0.169004726639267902826583426598550,
    0.140653259715525918745189590510238,
    0.104790010322250183839876322541518,
    0.063092092629978553290700663189204,
    0.022935322010529224963732008058970,
];

/// Weights of the embedded 7-point Gauss rule; entry k pairs with Kronrod
/// node index 2k.
const GAUSS_WEIGHTS: [f64; 4] = [
    0.417959183673469387755102040816327,
    0.381830050505118944950369775488975,
    0.279705391489276667901467771423780,
    0.129484966168869693270611432679082,
];

/// Outcome of a real-valued integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegralResult {
    /// Best estimate of the integral.
    pub value: f64,
    /// Error estimate, >= 0. When the engine converged this is bounded by
    /// `max(rel_tol * |value|, abs_tol)`.
    pub error_estimate: f64,
    /// Number of integrand evaluations performed.
    pub evaluations: u64,
    /// Whether the tolerance was met inside the subdivision budget.
    pub converged: bool,
}

impl IntegralResult {
    /// Promotes an unconverged result into an error, for callers that must
    /// not silently use a value outside tolerance.
    ///
    /// # Errors
    /// [`KernelError::QuadratureFailure`] when `converged` is false.
    pub fn require_converged(self, context: &str) -> Result<IntegralResult> {
        if self.converged {
            Ok(self)
        } else {
            Err(KernelError::quadrature(
                context,
                format!(
                    "subdivision budget exhausted at error estimate {:e} (value {:e})",
                    self.error_estimate, self.value
                ),
            ))
        }
    }
}

/// Outcome of a complex-valued integration. Real and imaginary parts share
/// panel decisions; the error estimate is the worse of the two components.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexIntegralResult {
    /// Best estimate of the integral.
    pub value: Complex64,
    /// Worst-component error estimate, >= 0.
    pub error_estimate: f64,
    /// Number of integrand evaluations performed.
    pub evaluations: u64,
    /// Whether the tolerance was met inside the subdivision budget.
    pub converged: bool,
}

/// One evaluated panel of the adaptive scheme.
struct Panel {
    lo: f64,
    hi: f64,
    value: [f64; 2],
    err: [f64; 2],
    /// Priority key: the error the subdivision loop reacts to.
    priority: f64,
    /// Insertion sequence number, used as a deterministic tiebreak.
    seq: u64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.priority == other.priority && self.seq == other.seq
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        // max-heap on priority; ties broken toward the older panel so the
        // pop order is a total order independent of float quirks
        self.priority
            .total_cmp(&other.priority)
            .then_with(|| other.seq.cmp(&self.seq))
    }
}

/// How the adaptive loop weighs a panel's two component errors.
#[derive(Clone, Copy)]
enum PanelPriority {
    /// Worst component drives subdivision (real/imaginary pairs).
    MaxComponent,
    /// Only component 0 drives subdivision; component 1 is a transported
    /// nonnegative quantity (accumulated inner error), not an estimate.
    FirstComponent,
}

/// Applies the 7/15 rule to one panel of a two-component integrand.
fn eval_panel(
    f: &mut dyn FnMut(f64) -> Result<[f64; 2]>,
    lo: f64,
    hi: f64,
    priority: PanelPriority,
    seq: u64,
    evaluations: &mut u64,
    context: &str,
) -> Result<Panel> {
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let mut kronrod = [0.0_f64; 2];
    let mut gauss = [0.0_f64; 2];

    let mut sample = |x: f64| -> Result<[f64; 2]> {
        *evaluations += 1;
        let v = f(x)?;
        if !v[0].is_finite() || !v[1].is_finite() {
            return Err(KernelError::quadrature(
                context,
                format!("non-finite integrand sample at x = {x:e}"),
            ));
        }
        Ok(v)
    };

    let fc = sample(center)?;
    for c in 0..2 {
        kronrod[c] += KRONROD_WEIGHTS[0] * fc[c];
    }
    for c in 0..2 {
        gauss[c] += GAUSS_WEIGHTS[0] * fc[c];
    }
    for k in 1..8 {
        let dx = half * KRONROD_NODES[k];
        let fp = sample(center + dx)?;
        let fm = sample(center - dx)?;
        for c in 0..2 {
            kronrod[c] += KRONROD_WEIGHTS[k] * (fp[c] + fm[c]);
        }
        if k % 2 == 0 {
            for c in 0..2 {
                gauss[c] += GAUSS_WEIGHTS[k / 2] * (fp[c] + fm[c]);
            }
        }
    }

    let value = [kronrod[0] * half, kronrod[1] * half];
    let err = [
        ((kronrod[0] - gauss[0]) * half).abs(),
        ((kronrod[1] - gauss[1]) * half).abs(),
    ];
    let priority = match priority {
        PanelPriority::MaxComponent => err[0].max(err[1]),
        PanelPriority::FirstComponent => err[0],
    };
    Ok(Panel {
        lo,
        hi,
        value,
        err,
        priority,
        seq,
    })
}

/// Shared adaptive driver: bisects the worst panel until the tolerance or
/// the subdivision budget is reached, then re-sums panels in interval order
/// so the result does not depend on the pop history.
struct AdaptiveOutcome {
    value: [f64; 2],
    err: [f64; 2],
    evaluations: u64,
    converged: bool,
}

fn adaptive_core(
    f: &mut dyn FnMut(f64) -> Result<[f64; 2]>,
    splits: &[f64],
    spec: &QuadratureSpec,
    priority: PanelPriority,
    context: &str,
) -> Result<AdaptiveOutcome> {
    debug_assert!(splits.len() >= 2);
    let mut evaluations = 0_u64;
    let mut seq = 0_u64;
    let mut heap = BinaryHeap::new();
    let mut sum_value = [0.0_f64; 2];
    let mut sum_priority_err = 0.0_f64;

    for pair in splits.windows(2) {
        let panel = eval_panel(f, pair[0], pair[1], priority, seq, &mut evaluations, context)?;
        seq += 1;
        sum_value[0] += panel.value[0];
        sum_value[1] += panel.value[1];
        sum_priority_err += panel.priority;
        heap.push(panel);
    }

    // For MaxComponent the convergence test compares the summed worst-
    // component panel errors against the tolerance; for FirstComponent the
    // transported component 1 value (an inner-error integral, nonnegative)
    // is part of the error budget, not of the value.
    let mut subdivisions = 0_usize;
    let mut converged = true;
    loop {
        let scale = match priority {
            PanelPriority::MaxComponent => sum_value[0].abs().max(sum_value[1].abs()),
            PanelPriority::FirstComponent => sum_value[0].abs(),
        };
        let tolerance = (spec.rel_tol * scale).max(spec.abs_tol);
        let budget = match priority {
            PanelPriority::MaxComponent => sum_priority_err,
            PanelPriority::FirstComponent => sum_priority_err + sum_value[1],
        };
        if budget <= tolerance {
            break;
        }
        if subdivisions >= spec.max_subdivisions {
            converged = false;
            break;
        }
        let worst = heap.pop().expect("heap holds at least one panel");
        sum_value[0] -= worst.value[0];
        sum_value[1] -= worst.value[1];
        sum_priority_err -= worst.priority;
        let mid = 0.5 * (worst.lo + worst.hi);
        if mid <= worst.lo || mid >= worst.hi {
            // the panel cannot be split further in f64; treat its error as
            // irreducible and stop refining (the final tally below re-sums
            // every panel, so the running sums need no restoration)
            converged = false;
            heap.push(worst);
            break;
        }
        for (lo, hi) in [(worst.lo, mid), (mid, worst.hi)] {
            let panel = eval_panel(f, lo, hi, priority, seq, &mut evaluations, context)?;
            seq += 1;
            sum_value[0] += panel.value[0];
            sum_value[1] += panel.value[1];
            sum_priority_err += panel.priority;
            heap.push(panel);
        }
        subdivisions += 1;
    }

    let mut panels = heap.into_vec();
    panels.sort_by(|p, q| p.lo.total_cmp(&q.lo));
    let mut value = [0.0_f64; 2];
    let mut err = [0.0_f64; 2];
    for p in &panels {
        value[0] += p.value[0];
        value[1] += p.value[1];
        err[0] += p.err[0];
        err[1] += p.err[1];
    }
    Ok(AdaptiveOutcome {
        value,
        err,
        evaluations,
        converged,
    })
}

fn check_interval(lo: f64, hi: f64) -> Result<()> {
    if !lo.is_finite() || !hi.is_finite() || lo >= hi {
        return Err(KernelError::InvalidSpec(format!(
            "integration interval must be finite with lo < hi, got [{lo}, {hi}]"
        )));
    }
    Ok(())
}

/// Integrates a real integrand over a finite interval.
///
/// # Errors
/// [`KernelError::InvalidSpec`] for a bad interval,
/// [`KernelError::QuadratureFailure`] for non-finite samples. An exhausted
/// subdivision budget is reported through the `converged` flag instead.
pub fn integrate_interval(
    mut f: impl FnMut(f64) -> f64,
    lo: f64,
    hi: f64,
    spec: &QuadratureSpec,
) -> Result<IntegralResult> {
    check_interval(lo, hi)?;
    let mut g = |x: f64| -> Result<[f64; 2]> { Ok([f(x), 0.0]) };
    let out = adaptive_core(
        &mut g,
        &[lo, hi],
        spec,
        PanelPriority::MaxComponent,
        "interval integral",
    )?;
    finish_real(out, 0.0, spec)
}

/// Integrates a complex integrand over a finite interval. Both components
/// share every panel decision, keyed on the worse component error.
///
/// # Errors
/// As [`integrate_interval`].
pub fn integrate_interval_complex(
    mut f: impl FnMut(f64) -> Complex64,
    lo: f64,
    hi: f64,
    spec: &QuadratureSpec,
) -> Result<ComplexIntegralResult> {
    check_interval(lo, hi)?;
    let mut g = |x: f64| -> Result<[f64; 2]> {
        let v = f(x);
        Ok([v.re, v.im])
    };
    let out = adaptive_core(
        &mut g,
        &[lo, hi],
        spec,
        PanelPriority::MaxComponent,
        "complex interval integral",
    )?;
    let error_estimate = out.err[0].max(out.err[1]);
    let value = Complex64::new(out.value[0], out.value[1]);
    let tolerance = (spec.rel_tol * value.re.abs().max(value.im.abs())).max(spec.abs_tol);
    Ok(ComplexIntegralResult {
        value,
        error_estimate,
        evaluations: out.evaluations,
        converged: out.converged && error_estimate <= tolerance,
    })
}

/// Truncation point and seed splits for a semi-infinite integral whose tail
/// decays at least as fast as exp(-decay_scale * x): the window keeps
/// `tail_decades` e-foldings, and the seed ladder resolves scale separation
/// between the decay length and any structure near the origin.
fn semi_infinite_window(decay_scale: f64, spec: &QuadratureSpec) -> Result<Vec<f64>> {
    if !decay_scale.is_finite() || decay_scale <= 0.0 {
        return Err(KernelError::InvalidSpec(format!(
            "decay scale must be finite and positive, got {decay_scale}"
        )));
    }
    let upper = spec.tail_decades / decay_scale;
    let mut splits = vec![0.0];
    for k in [64.0, 16.0, 4.0, 2.0] {
        splits.push(upper / k);
    }
    splits.push(upper);
    Ok(splits)
}

fn finish_real(out: AdaptiveOutcome, tail: f64, spec: &QuadratureSpec) -> Result<IntegralResult> {
    let error_estimate = out.err[0] + out.value[1].max(0.0) + tail;
    let tolerance = (spec.rel_tol * out.value[0].abs()).max(spec.abs_tol);
    Ok(IntegralResult {
        value: out.value[0],
        error_estimate,
        evaluations: out.evaluations,
        converged: out.converged && error_estimate <= tolerance,
    })
}

/// Integrates a real integrand over [0, infinity) given the decay rate of
/// its exponential tail. The integral is truncated after
/// `spec.tail_decades` e-foldings and the neglected tail is bounded
/// analytically by `|f(upper)| / decay_scale` (times a safety factor of two)
/// and added to the error estimate.
///
/// # Errors
/// As [`integrate_interval`], plus [`KernelError::InvalidSpec`] for a
/// nonpositive decay scale.
pub fn integrate_semi_infinite(
    mut f: impl FnMut(f64) -> f64,
    decay_scale: f64,
    spec: &QuadratureSpec,
) -> Result<IntegralResult> {
    let splits = semi_infinite_window(decay_scale, spec)?;
    let upper = *splits.last().expect("window has endpoints");
    let mut evals_extra = 1_u64;
    let boundary = f(upper);
    if !boundary.is_finite() {
        return Err(KernelError::quadrature(
            "semi-infinite integral",
            format!("non-finite integrand sample at x = {upper:e}"),
        ));
    }
    let tail = 2.0 * boundary.abs() / decay_scale;
    let mut g = |x: f64| -> Result<[f64; 2]> { Ok([f(x), 0.0]) };
    let out = adaptive_core(
        &mut g,
        &splits,
        spec,
        PanelPriority::MaxComponent,
        "semi-infinite integral",
    )?;
    evals_extra += out.evaluations;
    let mut result = finish_real(out, tail, spec)?;
    result.evaluations = evals_extra;
    Ok(result)
}

/// Complex counterpart of [`integrate_semi_infinite`].
///
/// # Errors
/// As [`integrate_semi_infinite`].
pub fn integrate_semi_infinite_complex(
    mut f: impl FnMut(f64) -> Complex64,
    decay_scale: f64,
    spec: &QuadratureSpec,
) -> Result<ComplexIntegralResult> {
    let splits = semi_infinite_window(decay_scale, spec)?;
    let upper = *splits.last().expect("window has endpoints");
    let boundary = f(upper);
    let tail = 2.0 * boundary.norm() / decay_scale;
    let mut g = |x: f64| -> Result<[f64; 2]> {
        let v = f(x);
        Ok([v.re, v.im])
    };
    let out = adaptive_core(
        &mut g,
        &splits,
        spec,
        PanelPriority::MaxComponent,
        "complex semi-infinite integral",
    )?;
    let error_estimate = out.err[0].max(out.err[1]) + tail;
    let value = Complex64::new(out.value[0], out.value[1]);
    let tolerance = (spec.rel_tol * value.re.abs().max(value.im.abs())).max(spec.abs_tol);
    Ok(ComplexIntegralResult {
        value,
        error_estimate,
        evaluations: out.evaluations + 1,
        converged: out.converged && error_estimate <= tolerance,
    })
}

/// Axisymmetric integration region, reduced to two coordinates.
///
/// The integrand is always sampled in cylindrical coordinates `(rho, z)`
/// (distance from the symmetry axis, height along it); the domain variant
/// fixes the parameterization and the volume measure.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum VolumeDomain {
    /// `z` between the two planes, transverse radius up to `rho_max`
    /// (`None` extends to infinity through an algebraic map, which requires
    /// `z_min > 0` and an integrand decaying faster than `rho^-3`).
    Slab {
        z_min: f64,
        z_max: f64,
        rho_max: Option<f64>,
    },
    /// Intersection of the half-space `z > plane_offset` with a ball of the
    /// given radius centered on the origin.
    HalfSpaceBall { plane_offset: f64, radius: f64 },
    /// Spherical shell `r_min <= r <= r_max` with polar angle up to
    /// `polar_max` (pi/2 for a hemisphere above the equatorial plane).
    SphericalShell {
        r_min: f64,
        r_max: f64,
        polar_max: f64,
    },
}

impl VolumeDomain {
    fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(KernelError::InvalidSpec(msg));
        match *self {
            VolumeDomain::Slab {
                z_min,
                z_max,
                rho_max,
            } => {
                if !z_min.is_finite() || !z_max.is_finite() || z_min >= z_max {
                    return bad(format!("slab needs z_min < z_max, got [{z_min}, {z_max}]"));
                }
                match rho_max {
                    Some(p) if !p.is_finite() || p <= 0.0 => {
                        bad(format!("slab transverse radius must be positive, got {p}"))
                    }
                    None if z_min <= 0.0 => bad(format!(
                        "slab with unbounded transverse extent needs z_min > 0, got {z_min}"
                    )),
                    _ => Ok(()),
                }
            }
            VolumeDomain::HalfSpaceBall {
                plane_offset,
                radius,
            } => {
                if !plane_offset.is_finite() || plane_offset <= 0.0 {
                    return bad(format!("plane offset must be positive, got {plane_offset}"));
                }
                if !radius.is_finite() || radius <= plane_offset {
                    return bad(format!(
                        "ball radius must exceed the plane offset, got radius {radius} vs offset {plane_offset}"
                    ));
                }
                Ok(())
            }
            VolumeDomain::SphericalShell {
                r_min,
                r_max,
                polar_max,
            } => {
                if !r_min.is_finite() || r_min < 0.0 || !r_max.is_finite() || r_max <= r_min {
                    return bad(format!(
                        "shell needs 0 <= r_min < r_max, got [{r_min}, {r_max}]"
                    ));
                }
                if !polar_max.is_finite() || polar_max <= 0.0 || polar_max > std::f64::consts::PI {
                    return bad(format!(
                        "polar opening must be in (0, pi], got {polar_max}"
                    ));
                }
                Ok(())
            }
        }
    }
}

/// Geometric seed ladder for an outer coordinate range: clusters initial
/// panels toward the lower end, where the integrands of interest peak.
fn outer_splits(lo: f64, hi: f64) -> Vec<f64> {
    let span = hi - lo;
    [0.0, 1.0 / 64.0, 1.0 / 16.0, 1.0 / 4.0, 1.0]
        .iter()
        .map(|frac| lo + span * frac)
        .collect()
}

/// Integrates `f(rho, z)` over an axisymmetric volume with the measure
/// `2 pi rho drho dz`, by nested adaptive quadrature: an outer pass over the
/// long coordinate and an inner pass (at one-eighth of the outer tolerance)
/// over the short one. Inner error estimates are integrated alongside the
/// value and included in the final error estimate.
///
/// # Errors
/// [`KernelError::InvalidSpec`] for a bad domain,
/// [`KernelError::QuadratureFailure`] for non-finite samples.
pub fn integrate_volume_axisymmetric(
    f: impl Fn(f64, f64) -> f64,
    domain: &VolumeDomain,
    spec: &QuadratureSpec,
) -> Result<IntegralResult> {
    domain.validate()?;
    let inner_spec = QuadratureSpec {
        rel_tol: spec.rel_tol / 8.0,
        abs_tol: spec.abs_tol / 8.0,
        ..*spec
    };
    let inner_evals = Cell::new(0_u64);
    let two_pi = 2.0 * std::f64::consts::PI;

    let mut outer = |long: f64| -> Result<[f64; 2]> {
        let inner = match *domain {
            VolumeDomain::Slab {
                z_min: _,
                z_max: _,
                rho_max,
            } => {
                let z = long;
                match rho_max {
                    Some(limit) => integrate_interval(
                        |rho| two_pi * rho * f(rho, z),
                        0.0,
                        limit,
                        &inner_spec,
                    )?,
                    None => {
                        // rho = z t / (1 - t) maps [0, 1) onto [0, inf);
                        // the Jacobian is z / (1 - t)^2
                        integrate_interval(
                            |t| {
                                let omt = 1.0 - t;
                                let rho = z * t / omt;
                                two_pi * rho * f(rho, z) * z / (omt * omt)
                            },
                            0.0,
                            1.0,
                            &inner_spec,
                        )?
                    }
                }
            }
            VolumeDomain::HalfSpaceBall { plane_offset, .. } => {
                let r = long;
                let mu_min = (plane_offset / r).min(1.0);
                integrate_interval(
                    |mu| {
                        let rho = r * (1.0 - mu * mu).max(0.0).sqrt();
                        two_pi * r * r * f(rho, r * mu)
                    },
                    mu_min,
                    1.0,
                    &inner_spec,
                )?
            }
            VolumeDomain::SphericalShell { polar_max, .. } => {
                let r = long;
                integrate_interval(
                    |theta| {
                        let (sin_t, cos_t) = theta.sin_cos();
                        two_pi * r * r * sin_t * f(r * sin_t, r * cos_t)
                    },
                    0.0,
                    polar_max,
                    &inner_spec,
                )?
            }
        };
        inner_evals.set(inner_evals.get() + inner.evaluations);
        if !inner.converged {
            return Err(KernelError::quadrature(
                "axisymmetric volume integral",
                format!("inner pass failed to converge at coordinate {long:e}"),
            ));
        }
        Ok([inner.value, inner.error_estimate])
    };

    let (lo, hi) = match *domain {
        VolumeDomain::Slab { z_min, z_max, .. } => (z_min, z_max),
        VolumeDomain::HalfSpaceBall {
            plane_offset,
            radius,
        } => (plane_offset, radius),
        VolumeDomain::SphericalShell { r_min, r_max, .. } => (r_min, r_max),
    };
    let splits = outer_splits(lo, hi);
    let out = adaptive_core(
        &mut outer,
        &splits,
        spec,
        PanelPriority::FirstComponent,
        "axisymmetric volume integral",
    )?;
    let mut result = finish_real(out, 0.0, spec)?;
    result.evaluations += inner_evals.get();
    Ok(result)
}

/// Result of a Richardson-extrapolated central difference.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivativeResult {
    /// Best estimate of f'(x).
    pub value: f64,
    /// Error estimate from the last extrapolation gap plus a roundoff floor.
    pub error_estimate: f64,
    /// Number of function evaluations (always 6).
    pub evaluations: u64,
}

/// First derivative by central differences at steps h, h/2, h/4 with two
/// Richardson extrapolation levels, giving an O(h^6) truncation error.
///
/// # Errors
/// [`KernelError::StepUnderflow`] when the step is below 1e3 machine epsilons
/// of |x| (the difference would be pure roundoff);
/// [`KernelError::InvalidSpec`] for a nonpositive step.
pub fn central_difference(
    mut f: impl FnMut(f64) -> f64,
    x: f64,
    step: f64,
) -> Result<DerivativeResult> {
    if !step.is_finite() || step <= 0.0 {
        return Err(KernelError::InvalidSpec(format!(
            "differentiation step must be finite and positive, got {step}"
        )));
    }
    if step < 1e3 * f64::EPSILON * x.abs() {
        return Err(KernelError::StepUnderflow { step, x });
    }
    let mut slope = |h: f64| -> (f64, f64) {
        let fp = f(x + h);
        let fm = f(x - h);
        ((fp - fm) / (2.0 * h), fp.abs().max(fm.abs()))
    };
    let (d1, _) = slope(step);
    let (d2, _) = slope(step / 2.0);
    let (d3, scale) = slope(step / 4.0);
    let r1 = (4.0 * d2 - d1) / 3.0;
    let r2 = (4.0 * d3 - d2) / 3.0;
    let value = (16.0 * r2 - r1) / 15.0;
    let roundoff = 4.0 * f64::EPSILON * scale / (step / 4.0);
    Ok(DerivativeResult {
        value,
        error_estimate: (r2 - r1).abs() + roundoff,
        evaluations: 6,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn spec() -> QuadratureSpec {
        QuadratureSpec::default()
    }

    #[test]
    fn unit_exponential_integrates_to_one() {
        let r = integrate_semi_infinite(|u| (-u).exp(), 1.0, &spec()).unwrap();
        assert!(r.converged);
        assert_relative_eq!(r.value, 1.0, max_relative = 1e-12);
        assert!((r.value - 1.0).abs() <= 10.0 * r.error_estimate.max(1e-16));
    }

    #[test]
    fn damped_oscillation_matches_closed_form() {
        let r = integrate_semi_infinite(|u| (-u).exp() * (10.0 * u).cos(), 1.0, &spec()).unwrap();
        assert!(r.converged);
        assert_relative_eq!(r.value, 1.0 / 101.0, max_relative = 1e-11);
    }

    #[test]
    fn kernel_shaped_integrand_matches_reference() {
        // 50-digit reference for a tail-heavy rational-exponential product
        let r = integrate_semi_infinite(|u| u.powi(4) * (-2.0 * u).exp() / (1.0 + u * u), 2.0, &spec())
            .unwrap();
        assert!(r.converged);
        assert_relative_eq!(r.value, 0.14902098859418384689, max_relative = 1e-12);
    }

    #[test]
    fn interval_rule_is_linear_in_the_integrand() {
        let base = integrate_interval(|x| x.exp(), 0.0, 2.0, &spec()).unwrap();
        let scaled = integrate_interval(|x| 3.5 * x.exp(), 0.0, 2.0, &spec()).unwrap();
        assert!((scaled.value - 3.5 * base.value).abs() <= 1e-15 * scaled.value.abs());
    }

    #[test]
    fn complex_components_share_panels() {
        let r = integrate_interval_complex(
            |x| Complex64::new(x.cos(), x.sin()),
            0.0,
            std::f64::consts::PI,
            &spec(),
        )
        .unwrap();
        assert!(r.converged);
        assert!((r.value.re - 0.0).abs() < 1e-12);
        assert_relative_eq!(r.value.im, 2.0, max_relative = 1e-12);
    }

    #[test]
    fn non_finite_sample_is_an_error() {
        let err = integrate_interval(|x| 1.0 / x, -1.0, 1.0, &spec()).unwrap_err();
        assert!(matches!(err, KernelError::QuadratureFailure { .. }));
    }

    #[test]
    fn exhausted_budget_reports_unconverged() {
        let tight = QuadratureSpec {
            max_subdivisions: 2,
            rel_tol: 1e-14,
            ..spec()
        };
        // kinked integrand needs many panels
        let r = integrate_interval(|x| (x - 0.3377).abs().sqrt(), 0.0, 1.0, &tight).unwrap();
        assert!(!r.converged);
        assert!(r.require_converged("test").is_err());
    }

    #[test]
    fn slab_volume_is_area_times_height() {
        let domain = VolumeDomain::Slab {
            z_min: 0.0,
            z_max: 3.0,
            rho_max: Some(2.0),
        };
        let r = integrate_volume_axisymmetric(|_, _| 1.0, &domain, &spec()).unwrap();
        assert!(r.converged);
        assert_relative_eq!(
            r.value,
            std::f64::consts::PI * 4.0 * 3.0,
            max_relative = 1e-10
        );
    }

    #[test]
    fn unbounded_slab_handles_algebraic_transverse_decay() {
        // int dz int 2 pi rho e^{-R}/R drho over z in [1, 2] equals
        // 2 pi (e^{-1} - e^{-2}) because rho drho = R dR at fixed z
        let domain = VolumeDomain::Slab {
            z_min: 1.0,
            z_max: 2.0,
            rho_max: None,
        };
        let r = integrate_volume_axisymmetric(
            |rho, z| {
                let big_r = (rho * rho + z * z).sqrt();
                (-big_r).exp() / big_r
            },
            &domain,
            &spec(),
        )
        .unwrap();
        assert!(r.converged);
        let exact = 2.0 * std::f64::consts::PI * ((-1.0_f64).exp() - (-2.0_f64).exp());
        assert_relative_eq!(r.value, exact, max_relative = 1e-9);
    }

    #[test]
    fn spherical_shell_inverse_square_grows_linearly() {
        let domain = VolumeDomain::SphericalShell {
            r_min: 1.0,
            r_max: 7.0,
            polar_max: std::f64::consts::FRAC_PI_2,
        };
        let r = integrate_volume_axisymmetric(
            |rho, z| 1.0 / (rho * rho + z * z),
            &domain,
            &spec(),
        )
        .unwrap();
        assert!(r.converged);
        // hemisphere: 2 pi (r_max - r_min)
        assert_relative_eq!(
            r.value,
            2.0 * std::f64::consts::PI * 6.0,
            max_relative = 1e-10
        );
    }

    #[test]
    fn half_space_ball_reproduces_its_closed_form() {
        // f = 1/R^2 over {z > z0} intersected with a ball of radius C:
        // 2 pi [(C - z0) - z0 ln(C/z0)]
        let z0 = 0.5;
        let c = 8.0;
        let domain = VolumeDomain::HalfSpaceBall {
            plane_offset: z0,
            radius: c,
        };
        let r = integrate_volume_axisymmetric(
            |rho, z| 1.0 / (rho * rho + z * z),
            &domain,
            &spec(),
        )
        .unwrap();
        assert!(r.converged);
        let exact = 2.0 * std::f64::consts::PI * ((c - z0) - z0 * (c / z0).ln());
        assert_relative_eq!(r.value, exact, max_relative = 1e-10);
    }

    #[test]
    fn derivative_of_square_is_twice_x() {
        let r = central_difference(|x| x * x, 3.0, 1e-2).unwrap();
        assert!((r.value - 6.0).abs() < 1e-10);
        assert_eq!(r.evaluations, 6);
    }

    #[test]
    fn derivative_of_sine_is_cosine() {
        let r = central_difference(|x| x.sin(), 1.0, 1e-2).unwrap();
        assert_relative_eq!(r.value, 1.0_f64.cos(), max_relative = 1e-12);
        assert!((r.value - 1.0_f64.cos()).abs() <= 10.0 * r.error_estimate);
    }

    #[test]
    fn underflowing_step_is_rejected() {
        let err = central_difference(|x| x * x, 1.0, 1e-14).unwrap_err();
        assert!(matches!(err, KernelError::StepUnderflow { .. }));
    }

    #[test]
    fn repeated_runs_are_bit_identical() {
        let f = |u: f64| u.powi(4) * (-2.0 * u).exp() / (1.0 + u * u);
        let a = integrate_semi_infinite(f, 2.0, &spec()).unwrap();
        let b = integrate_semi_infinite(f, 2.0, &spec()).unwrap();
        assert_eq!(a.value.to_bits(), b.value.to_bits());
        assert_eq!(a.error_estimate.to_bits(), b.error_estimate.to_bits());
        assert_eq!(a.evaluations, b.evaluations);
    }
}

//! Retarded dyadic propagation kernel of the electromagnetic field in the
//! gas, and the two scalar contractions the pair interaction needs.
//!
//! The dyad between two points separated by `r` in a medium of index `n` is
//! `D = (omega^2 e^{i n omega r} / r) [A delta + B rhat rhat]` with
//! `A = 1 + i/x - 1/x^2`, `B = -1 - 3i/x + 3/x^2`, `x = n omega r`. Two
//! contractions appear downstream: the squared trace
//! `sum D_{vv'} D_{v'v} = 2 (omega^4 e^{2 i x} / r^2) P_sq(x)` and the
//! absolute square
//! `sum |D_{vv'}|^2 = 2 (omega^4 |e^{i x}|^2 / r^2) P_abs(x)`, with the
//! polynomial pair reported by [`retarded_kernel_polynomials`]. The identity
//! behind both is `sum (A delta + B rhat rhat)^2 = 2A^2 + (A+B)^2` and its
//! modulus analogue, since `rhat` is a unit vector.

use num_complex::Complex64;

use crate::error::{KernelError, Result};
use crate::response::refractive_index;
use crate::types::{ComplexFrequency, DiluteGasMedium};

/// The two scalar contractions of the dyadic kernel at dimensionless
/// separation `x = n omega r`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelValue {
    /// `P_sq(x) = 1 + 2i/x - 5/x^2 - 6i/x^3 + 3/x^4`: the polynomial of the
    /// squared-trace contraction (oscillatory channel).
    pub squared_trace: Complex64,
    /// `P_abs(x) = (2|A|^2 + |A+B|^2)/2`: the polynomial of the
    /// absolute-square contraction (envelope channel). For real `x` it
    /// reduces to `1 + 1/x^2 + 3/x^4`. Always real and nonnegative.
    pub abs_squared_trace: f64,
}

/// Evaluates both kernel polynomials at a (generally complex) dimensionless
/// separation.
///
/// # Errors
/// [`KernelError::ZeroSeparation`] at `x = 0`, where the kernel diverges.
pub fn retarded_kernel_polynomials(x: Complex64) -> Result<KernelValue> {
    if x.re == 0.0 && x.im == 0.0 {
        return Err(KernelError::ZeroSeparation);
    }
    let inv = x.finv();
    let inv2 = inv * inv;
    let inv3 = inv2 * inv;
    let inv4 = inv2 * inv2;
    let i = Complex64::new(0.0, 1.0);
    let squared_trace = Complex64::new(1.0, 0.0) + 2.0 * i * inv - 5.0 * inv2 - 6.0 * i * inv3
        + 3.0 * inv4;
    let a = Complex64::new(1.0, 0.0) + i * inv - inv2;
    let a_plus_b = -2.0 * i * inv + 2.0 * inv2;
    let abs_squared_trace = (2.0 * a.norm_sqr() + a_plus_b.norm_sqr()) / 2.0;
    Ok(KernelValue {
        squared_trace,
        abs_squared_trace,
    })
}

/// Full 3x3 retarded dyadic kernel between points separated by `r_vec`, for
/// a field of frequency `f` propagating through the gas.
///
/// # Errors
/// [`KernelError::ZeroSeparation`] for a zero separation vector; response
/// errors propagate from the index evaluation.
pub fn dyadic_green(
    medium: &DiluteGasMedium,
    f: ComplexFrequency,
    r_vec: [f64; 3],
) -> Result<[[Complex64; 3]; 3]> {
    let r2 = r_vec[0] * r_vec[0] + r_vec[1] * r_vec[1] + r_vec[2] * r_vec[2];
    if r2 == 0.0 {
        return Err(KernelError::ZeroSeparation);
    }
    let r = r2.sqrt();
    let rhat = [r_vec[0] / r, r_vec[1] / r, r_vec[2] / r];
    let n = refractive_index(medium, f)?.n;
    let omega = f.as_complex();
    let x = n * omega * r;
    if x.re == 0.0 && x.im == 0.0 {
        return Err(KernelError::ZeroSeparation);
    }
    let inv = x.finv();
    let inv2 = inv * inv;
    let i = Complex64::new(0.0, 1.0);
    let a = Complex64::new(1.0, 0.0) + i * inv - inv2;
    let b = -Complex64::new(1.0, 0.0) - 3.0 * i * inv + 3.0 * inv2;
    let prefactor = omega * omega * (i * x).exp() / r;
    let mut dyad = [[Complex64::new(0.0, 0.0); 3]; 3];
    for (nu, row) in dyad.iter_mut().enumerate() {
        for (nu_p, entry) in row.iter_mut().enumerate() {
            let delta = if nu == nu_p { 1.0 } else { 0.0 };
            *entry = prefactor * (a * delta + b * rhat[nu] * rhat[nu_p]);
        }
    }
    Ok(dyad)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::{DiluteGasMedium, TwoLevelAtom};
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn medium() -> DiluteGasMedium {
        let species = TwoLevelAtom::new(1.5, 1.0, 0.01).unwrap();
        DiluteGasMedium::new(species, 1e-4).unwrap()
    }

    #[test]
    fn polynomials_at_unit_argument() {
        let k = retarded_kernel_polynomials(Complex64::new(1.0, 0.0)).unwrap();
        assert_relative_eq!(k.squared_trace.re, -1.0, max_relative = 1e-15);
        assert_relative_eq!(k.squared_trace.im, -4.0, max_relative = 1e-15);
        assert_relative_eq!(k.abs_squared_trace, 5.0, max_relative = 1e-15);
    }

    #[test]
    fn envelope_polynomial_reduces_on_the_real_axis() {
        for x in [0.3, 1.0, 2.5, 40.0] {
            let k = retarded_kernel_polynomials(Complex64::new(x, 0.0)).unwrap();
            let expected = 1.0 + x.powi(-2) + 3.0 * x.powi(-4);
            assert_relative_eq!(k.abs_squared_trace, expected, max_relative = 1e-14);
        }
    }

    #[test]
    fn far_field_polynomials_approach_unity() {
        let k = retarded_kernel_polynomials(Complex64::new(1e8, 0.0)).unwrap();
        assert_abs_diff_eq!(k.squared_trace.re, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(k.abs_squared_trace, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn zero_separation_is_rejected() {
        assert!(matches!(
            retarded_kernel_polynomials(Complex64::new(0.0, 0.0)),
            Err(KernelError::ZeroSeparation)
        ));
        let f = ComplexFrequency::real(1.0).unwrap();
        assert!(matches!(
            dyadic_green(&medium(), f, [0.0, 0.0, 0.0]),
            Err(KernelError::ZeroSeparation)
        ));
    }

    #[test]
    fn dyad_is_reciprocal() {
        let f = ComplexFrequency::real(1.2).unwrap();
        let r = [0.3, -0.7, 1.1];
        let d_fwd = dyadic_green(&medium(), f, r).unwrap();
        let d_rev = dyadic_green(&medium(), f, [-r[0], -r[1], -r[2]]).unwrap();
        for nu in 0..3 {
            for nu_p in 0..3 {
                let a = d_fwd[nu][nu_p];
                let b = d_rev[nu_p][nu];
                assert_relative_eq!(a.re, b.re, max_relative = 1e-14);
                assert_relative_eq!(a.im, b.im, max_relative = 1e-14);
            }
        }
    }

    #[test]
    fn contractions_match_the_polynomials() {
        let f = ComplexFrequency::real(1.2).unwrap();
        let r_vec = [0.3, -0.7, 1.1];
        let r = (r_vec.iter().map(|c| c * c).sum::<f64>()).sqrt();
        let n = refractive_index(&medium(), f).unwrap().n;
        let omega = Complex64::new(1.2, 0.0);
        let x = n * omega * r;
        let d = dyadic_green(&medium(), f, r_vec).unwrap();
        let k = retarded_kernel_polynomials(x).unwrap();

        let mut squared = Complex64::new(0.0, 0.0);
        let mut abs_squared = 0.0;
        for nu in 0..3 {
            for nu_p in 0..3 {
                squared += d[nu][nu_p] * d[nu_p][nu];
                abs_squared += d[nu][nu_p].norm_sqr();
            }
        }
        let osc_pref = 2.0 * omega.powu(4) * (2.0 * Complex64::new(0.0, 1.0) * x).exp() / (r * r);
        let env_pref = 2.0 * 1.2_f64.powi(4) * (-2.0 * (x.im)).exp() / (r * r);
        let squared_poly = squared / osc_pref;
        assert_relative_eq!(squared_poly.re, k.squared_trace.re, max_relative = 1e-12);
        assert_relative_eq!(squared_poly.im, k.squared_trace.im, max_relative = 1e-12);
        assert_relative_eq!(abs_squared / env_pref, k.abs_squared_trace, max_relative = 1e-12);
    }
}

//! Spatial smearing over Gaussian-ball profiles.
//!
//! The double spatial integral of any function of the separation distance
//! collapses against the distance density of two Gaussian balls. For
//! profiles `exp(-|x|^2/sigma^2) / (pi^(3/2) sigma^3)` with centers a
//! distance `sep` apart, the displacement is Gaussian with combined width
//! `sigma_c^2 = sigma_a^2 + sigma_b^2` and the distance density is
//!
//! `p(s) = (2 s / (sqrt(pi) sigma_c sep)) exp(-(s^2 + sep^2)/sigma_c^2) sinh(2 s sep / sigma_c^2)`
//!
//! extended smoothly to `sep -> 0` through `sinh(x)/x -> 1`. Smearing a
//! reduced kernel then replaces the lightcone deltas by the regular radial
//! weight `p(|v|)/(4 pi |v|)` and the principal-value part by an inner
//! one-dimensional PV integral in the separation variable.

use num_complex::Complex64;

use crate::kernels::KernelShape;
use crate::quad;

/// Distance distribution of two Gaussian-ball profiles.
#[derive(Debug, Clone, Copy)]
pub struct RadialDensity {
    pub sep: f64,
    pub sigma_c: f64,
}

impl RadialDensity {
    pub fn new(sep: f64, sigma_a: f64, sigma_b: f64) -> Self {
        RadialDensity {
            sep,
            sigma_c: (sigma_a * sigma_a + sigma_b * sigma_b).sqrt(),
        }
    }

    /// Density of the separation distance `s >= 0`, unit integral.
    pub fn eval(&self, s: f64) -> f64 {
        if s <= 0.0 {
            return 0.0;
        }
        let sc = self.sigma_c;
        let x = 2.0 * s * self.sep / (sc * sc);
        if x < 30.0 {
            // sinh form, smooth through sep -> 0.
            let gauss = (-(s * s + self.sep * self.sep) / (sc * sc)).exp();
            4.0 * s * s / (std::f64::consts::PI.sqrt() * sc * sc * sc) * gauss * sinhc(x)
        } else {
            // Difference form: each exponent is separately bounded, where
            // the sinh form would overflow.
            let d1 = (s - self.sep) / sc;
            let d2 = (s + self.sep) / sc;
            s / (std::f64::consts::PI.sqrt() * sc * self.sep)
                * ((-d1 * d1).exp() - (-d2 * d2).exp())
        }
    }

    /// Radial window containing essentially all of the density mass.
    pub fn support(&self, n_sigmas: f64) -> (f64, f64) {
        let lo = (self.sep - n_sigmas * self.sigma_c).max(0.0);
        let hi = self.sep + n_sigmas * self.sigma_c;
        (lo, hi)
    }
}

/// `sinh(x)/x`, stable at small argument.
fn sinhc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        1.0 + x * x / 6.0 * (1.0 + x * x / 20.0)
    } else {
        x.sinh() / x
    }
}

/// Value at relative time `v` of a reduced kernel smeared over the two
/// spatial profiles. The result is an ordinary (regular) function of `v`.
///
/// `abs_tol`/`rel_tol` control the inner PV quadrature.
pub fn smeared_kernel_value(
    shape: &KernelShape,
    density: &RadialDensity,
    v: f64,
    window_sigmas: f64,
    abs_tol: f64,
    rel_tol: f64,
    max_subdivisions: usize,
) -> (Complex64, f64, u64) {
    let pi = std::f64::consts::PI;
    let mut value = Complex64::new(0.0, 0.0);
    let mut err = 0.0;
    let mut evals = 0u64;

    // Lightcone deltas sift the radial integral at s = |v|.
    let av = v.abs();
    if av > 0.0 {
        let w = density.eval(av) / (4.0 * pi * av);
        if v < 0.0 {
            value += shape.ret * w;
        } else {
            value += shape.adv * w;
        }
    }

    // PV part: PV int p(s) / (4 pi^2 (s^2 - v^2)) ds.
    if shape.pv != 0.0 {
        let (mut lo, mut hi) = density.support(window_sigmas);
        if av > 0.0 && density.eval(av) > 1e-300 {
            lo = lo.min((av - 4.0 * density.sigma_c).max(0.0));
            hi = hi.max(av + 4.0 * density.sigma_c);
        }
        let c = shape.pv / (4.0 * pi * pi);
        let inner = if av > lo && av < hi {
            // 1/(s^2 - v^2) = (1/2|v|) [ 1/(s - |v|) - 1/(s + |v|) ]
            let p1 = quad::pv_single(
                |s| Complex64::new(density.eval(s), 0.0),
                av,
                lo,
                hi,
                abs_tol,
                rel_tol,
                max_subdivisions,
            );
            let p2 = quad::adaptive(
                |s| Complex64::new(density.eval(s) / (s + av), 0.0),
                lo,
                hi,
                abs_tol,
                rel_tol,
                max_subdivisions,
            );
            let mut out = p1;
            out.value = (p1.value - p2.value) / (2.0 * av);
            out.est_error = (p1.est_error + p2.est_error) / (2.0 * av);
            out.evaluations += p2.evaluations;
            out.converged = p1.converged && p2.converged;
            out
        } else {
            quad::adaptive(
                |s| Complex64::new(density.eval(s) / (s * s - v * v), 0.0),
                lo,
                hi,
                abs_tol,
                rel_tol,
                max_subdivisions,
            )
        };
        value += c * inner.value;
        err += c.abs() * inner.est_error;
        evals += inner.evaluations;
    }

    (value, err, evals)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::{kernel_shape, KernelKind};

    #[test]
    fn density_normalizes_to_one() {
        for &(sep, sa, sb) in &[(3.0, 0.3, 0.3), (1.0, 0.5, 0.2), (0.0, 0.4, 0.4)] {
            let d = RadialDensity::new(sep, sa, sb);
            let (lo, hi) = d.support(12.0);
            let total = quad::adaptive(
                |s| Complex64::new(d.eval(s), 0.0),
                lo,
                hi,
                1e-12,
                1e-11,
                400,
            );
            approx::assert_relative_eq!(total.value.re, 1.0, epsilon = 1e-9);
        }
    }

    #[test]
    fn zero_separation_density_is_maxwellian() {
        // p0(s) = 4 s^2 exp(-s^2/sigma_c^2) / (sqrt(pi) sigma_c^3)
        let d = RadialDensity::new(0.0, 0.3, 0.3);
        let sc = d.sigma_c;
        for &s in &[0.1, 0.3, 0.7] {
            let expect =
                4.0 * s * s * (-(s * s) / (sc * sc)).exp() / (std::f64::consts::PI.sqrt() * sc * sc * sc);
            approx::assert_relative_eq!(d.eval(s), expect, max_relative = 1e-10);
        }
    }

    #[test]
    fn equal_time_wightman_self_term_closed_form() {
        // int p0(s) / (4 pi^2 s^2) ds = 1 / (4 pi^2 sigma^2) for two balls of
        // width sigma at zero separation.
        let sigma = 0.25;
        let d = RadialDensity::new(0.0, sigma, sigma);
        let shape = kernel_shape(KernelKind::Wightman);
        let (value, _, _) = smeared_kernel_value(&shape, &d, 0.0, 12.0, 1e-14, 1e-12, 400);
        let expect = 1.0 / (4.0 * std::f64::consts::PI.powi(2) * sigma * sigma);
        approx::assert_relative_eq!(value.re, expect, max_relative = 1e-9);
        assert!(value.im.abs() < 1e-12 * expect);
    }

    #[test]
    fn retarded_ball_weight_matches_density() {
        let d = RadialDensity::new(2.0, 0.2, 0.2);
        let shape = kernel_shape(KernelKind::Retarded);
        let v = -1.9;
        let (value, _, _) = smeared_kernel_value(&shape, &d, v, 12.0, 1e-14, 1e-12, 400);
        let expect = d.eval(1.9) / (4.0 * std::f64::consts::PI * 1.9);
        approx::assert_relative_eq!(value.re, expect, max_relative = 1e-12);
        // No support on the advanced side.
        let (value, _, _) = smeared_kernel_value(&shape, &d, 1.9, 12.0, 1e-14, 1e-12, 400);
        assert_eq!(value, Complex64::new(0.0, 0.0));
    }
}

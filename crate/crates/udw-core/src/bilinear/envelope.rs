//! Reduction of the double time integral to a single relative-time profile.
//!
//! Every bilinear has the form
//! `int dt dt' e^(i(s1 W_a t + s2 W_b t')) chi_A(t) chi_B(t') K(t - t')`.
//! Rotating to `u = t + t'`, `v = t - t'` (Jacobian 1/2) the `u` integral of
//! a Gaussian pair times a plane wave is a closed-form complex Gaussian, so
//! the whole switching/phase content collapses to one function of `v`:
//!
//! `psi(v) = pref * exp(quad v^2 + lin v)`
//!
//! with `Re(quad) < 0`. Dirac switchings skip the `u` integral and give the
//! same exponential shape (or a pure point when both are Dirac). The kernel
//! is then integrated against `psi` in one dimension.
//!
//! Factoring the `u` integral analytically pulls the oscillatory
//! suppression `exp(-kappa_u^2 / (4(a+b)))` out as an exact prefactor, so
//! the remaining quadrature sees an O(1)-conditioned integrand even deep in
//! the adiabatic regime.

use num_complex::Complex64;

use crate::geometry::SwitchingFunction;

/// Gaussian-exponential profile in the relative time `v`.
#[derive(Debug, Clone, Copy)]
pub struct VEnvelope {
    pub pref: Complex64,
    pub lin: Complex64,
    pub quad: Complex64,
}

impl VEnvelope {
    pub fn eval(&self, v: f64) -> Complex64 {
        self.pref * ((self.quad * v + self.lin) * v).exp()
    }

    /// Location of the magnitude peak.
    pub fn peak_v(&self) -> f64 {
        -self.lin.re / (2.0 * self.quad.re)
    }

    /// Magnitude at the peak.
    pub fn peak_abs(&self) -> f64 {
        let vh = self.peak_v();
        self.pref.norm() * ((self.quad.re * vh + self.lin.re) * vh).exp()
    }

    /// Gaussian width of the magnitude envelope.
    pub fn sigma(&self) -> f64 {
        (-0.5 / self.quad.re).sqrt()
    }

    /// `psi(v) - psi(at)` computed without cancellation, divided by `(v - at)`.
    /// Used by the finite-part reduction at zero separation.
    pub fn symmetric_second_difference(&self, v: f64) -> Complex64 {
        // psi(v) + psi(-v) - 2 psi(0)
        //   = 2 pref [ expm1(quad v^2) cosh(lin v) + 2 sinh^2(lin v / 2) ]
        let q = self.quad * (v * v);
        let l = self.lin * v;
        let sh = (l * 0.5).sinh();
        2.0 * self.pref * (cexpm1(q) * l.cosh() + 2.0 * sh * sh)
    }

    /// d psi / dv at v = 0.
    pub fn derivative_at_zero(&self) -> Complex64 {
        self.pref * self.lin
    }
}

/// `exp(z) - 1` without cancellation for small `z`.
pub fn cexpm1(z: Complex64) -> Complex64 {
    if z.norm() < 1e-3 {
        // z (1 + z/2 (1 + z/3 (1 + z/4 (1 + z/5))))
        let mut acc = Complex64::new(1.0, 0.0);
        for k in (2..=6).rev() {
            acc = Complex64::new(1.0, 0.0) + z * acc / (k as f64);
        }
        z * acc
    } else {
        z.exp() - Complex64::new(1.0, 0.0)
    }
}

/// Relative-time content of one bilinear.
#[derive(Debug, Clone, Copy)]
pub enum TimeProfile {
    Envelope(VEnvelope),
    /// Both switchings are instantaneous: the profile is a weighted point
    /// at `v = t_a - t_b`.
    Point { at: f64, strength: Complex64 },
}

/// Build the relative-time profile for a switching pair.
///
/// `ca`, `cb` are the placement-shifted switchings of detectors A and B;
/// `sa`, `sb` the phase signs (+-1); `wa`, `wb` the energy gaps. The overall
/// coupling product multiplies `amplitude`.
pub fn time_profile(
    ca: &SwitchingFunction,
    cb: &SwitchingFunction,
    sa: f64,
    sb: f64,
    wa: f64,
    wb: f64,
    amplitude: f64,
) -> TimeProfile {
    let i = Complex64::new(0.0, 1.0);
    match (*ca, *cb) {
        (
            SwitchingFunction::Gaussian {
                center: c1,
                width: t1,
            },
            SwitchingFunction::Gaussian {
                center: c2,
                width: t2,
            },
        ) => {
            let a = 1.0 / (4.0 * t1 * t1);
            let b = 1.0 / (4.0 * t2 * t2);
            let ab = a + b;
            let ku = 0.5 * (sa * wa + sb * wb);
            let kv = 0.5 * (sa * wa - sb * wb);
            let dc = c1 - c2;

            let quad = Complex64::new(-4.0 * a * b / ab, 0.0);
            let lin = Complex64::new(8.0 * a * b * dc / ab, ku * (b - a) / ab + kv);
            let pref = 0.5
                * (std::f64::consts::PI / ab).sqrt()
                * amplitude
                * (Complex64::new(
                    -4.0 * a * b * dc * dc / ab - ku * ku / (4.0 * ab),
                    2.0 * ku * (a * c1 + b * c2) / ab,
                ))
                .exp();
            TimeProfile::Envelope(VEnvelope { pref, lin, quad })
        }
        (
            SwitchingFunction::DiracDelta {
                instant: ta,
                strength: ea,
            },
            SwitchingFunction::Gaussian { center, width },
        ) => {
            // psi(v) = eta_a e^(i(sa wa + sb wb) t_a) e^(-i sb wb v) chi_B(t_a - v)
            let m = ta - center;
            let t2 = width * width;
            let quad = Complex64::new(-1.0 / t2, 0.0);
            let lin = Complex64::new(2.0 * m / t2, -sb * wb);
            let pref = amplitude
                * ea
                * (Complex64::new(-m * m / t2, (sa * wa + sb * wb) * ta)).exp();
            TimeProfile::Envelope(VEnvelope { pref, lin, quad })
        }
        (
            SwitchingFunction::Gaussian { center, width },
            SwitchingFunction::DiracDelta {
                instant: tb,
                strength: eb,
            },
        ) => {
            // psi(v) = eta_b e^(i(sa wa + sb wb) t_b) e^(+i sa wa v) chi_A(t_b + v)
            let m = tb - center;
            let t2 = width * width;
            let quad = Complex64::new(-1.0 / t2, 0.0);
            let lin = Complex64::new(-2.0 * m / t2, sa * wa);
            let pref = amplitude
                * eb
                * (Complex64::new(-m * m / t2, (sa * wa + sb * wb) * tb)).exp();
            TimeProfile::Envelope(VEnvelope { pref, lin, quad })
        }
        (
            SwitchingFunction::DiracDelta {
                instant: ta,
                strength: ea,
            },
            SwitchingFunction::DiracDelta {
                instant: tb,
                strength: eb,
            },
        ) => TimeProfile::Point {
            at: ta - tb,
            strength: amplitude
                * ea
                * eb
                * (i * (sa * wa * ta + sb * wb * tb)).exp(),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use crate::quad;

    fn envelope(
        ca: &SwitchingFunction,
        cb: &SwitchingFunction,
        sa: f64,
        sb: f64,
        wa: f64,
        wb: f64,
    ) -> VEnvelope {
        match time_profile(ca, cb, sa, sb, wa, wb, 1.0) {
            TimeProfile::Envelope(e) => e,
            _ => panic!("expected envelope"),
        }
    }

    /// Direct 2D integral of the switching pair along lines of constant v,
    /// for comparison with the closed form.
    fn psi_by_quadrature(
        ca: &SwitchingFunction,
        cb: &SwitchingFunction,
        sa: f64,
        sb: f64,
        w: f64,
        v: f64,
    ) -> Complex64 {
        // psi(v) = 1/2 int du F((u+v)/2, (u-v)/2)
        let f = |u: f64| -> Complex64 {
            let t = 0.5 * (u + v);
            let tp = 0.5 * (u - v);
            let xa = ca.value(t).unwrap();
            let xb = cb.value(tp).unwrap();
            Complex64::new(0.0, w * (sa * t + sb * tp)).exp() * xa * xb
        };
        0.5 * quad::adaptive(f, -80.0, 80.0, 1e-14, 1e-12, 600).value
    }

    #[test]
    fn gaussian_pair_envelope_matches_quadrature() {
        let ca = SwitchingFunction::gaussian(0.3, 1.0).unwrap();
        let cb = SwitchingFunction::gaussian(2.0, 1.7).unwrap();
        for (sa, sb) in [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)] {
            let e = envelope(&ca, &cb, sa, sb, 2.4, 2.4);
            for &v in &[-3.0, -0.7, 0.0, 1.1, 2.9] {
                let direct = psi_by_quadrature(&ca, &cb, sa, sb, 2.4, v);
                let closed = e.eval(v);
                assert!(
                    (direct - closed).norm() <= 1e-10 * closed.norm().max(1e-6),
                    "v={v} phase=({sa},{sb}): {direct} vs {closed}"
                );
            }
        }
    }

    #[test]
    fn dirac_gaussian_profile_matches_direct_integral() {
        let ca = SwitchingFunction::dirac(0.4, 1.3).unwrap();
        let cb = SwitchingFunction::gaussian(1.0, 0.8).unwrap();
        let e = envelope(&ca, &cb, 1.0, -1.0, 3.0, 3.0);
        // psi(v) integrated against a test Gaussian equals the direct double
        // integral with the same test function of v = t - t'.
        for &v in &[-1.0, 0.2, 1.5] {
            // direct: eta * e^{i w t_a} e^{-i w t'} chi_B(t') at t' = t_a - v
            let tp = 0.4 - v;
            let direct = Complex64::new(0.0, 3.0 * (0.4 - tp)).exp()
                * 1.3
                * cb.value(tp).unwrap();
            assert!((e.eval(v) - direct).norm() < 1e-12);
        }
    }

    #[test]
    fn symmetric_difference_is_stable_near_zero() {
        let ca = SwitchingFunction::gaussian(0.0, 1.0).unwrap();
        let e = envelope(&ca, &ca, -1.0, 1.0, 5.0, 5.0);
        // Against naive evaluation at a moderate v.
        let v = 0.1;
        let naive = e.eval(v) + e.eval(-v) - 2.0 * e.eval(0.0);
        let stable = e.symmetric_second_difference(v);
        assert!((naive - stable).norm() < 1e-14 * e.peak_abs());
        // At tiny v the stable form approaches v^2 psi''(0) smoothly.
        let tiny = e.symmetric_second_difference(1e-8);
        let curvature = 2.0 * e.quad + e.lin * e.lin;
        let expect = e.pref * curvature * 1e-16;
        assert!((tiny - expect).norm() <= 1e-3 * expect.norm());
    }

    #[test]
    fn expm1_series_matches_exp() {
        // Moderate arguments: direct exp is the reference.
        for &(re, im) in &[(5e-2, 5e-2), (0.3, -0.2), (-1.0, 2.0)] {
            let z = Complex64::new(re, im);
            let got = cexpm1(z);
            let want = z.exp() - Complex64::new(1.0, 0.0);
            assert_relative_eq!(got.re, want.re, max_relative = 1e-12, epsilon = 1e-18);
            assert_relative_eq!(got.im, want.im, max_relative = 1e-12, epsilon = 1e-18);
        }
        // Tiny argument: direct exp cancels catastrophically, compare against
        // the Taylor form instead.
        let z = Complex64::new(1e-8, -3e-9);
        let want = z * (Complex64::new(1.0, 0.0) + z * 0.5 * (Complex64::new(1.0, 0.0) + z / 3.0));
        let got = cexpm1(z);
        assert!((got - want).norm() <= 1e-16 * want.norm());
    }
}

//! Closed-form reduction of the massless-scalar vacuum two-point
//! distributions on static comoving worldlines.
//!
//! For spatial separation `r > 0` and relative time `v = t - t'` every
//! distribution in the family is a combination of
//!
//! * a principal-value part proportional to `PV[ 1 / (4 pi^2 (r^2 - v^2)) ]`,
//! * a lightcone delta on the "retarded side" `v = -r` (second event later),
//! * a lightcone delta on the "advanced side" `v = +r` (first event later),
//!
//! with delta weights expressed as `coeff / (4 pi r)`. The split follows
//! from the Sokhotski-Plemelj decomposition of the epsilon-regulated vacuum
//! Wightman function
//!
//! `W(v, r) = lim (1/4pi^2) 1/(r^2 - (v - i eps)^2)
//!          = PV[1/(4pi^2 (r^2 - v^2))] + (i/(8 pi r)) (delta(v+r) - delta(v-r))`
//!
//! and the time-ordered propagator `G_F(v, r) = W(|v|, r)`. All other kinds
//! are assembled by exact algebra:
//!
//! `W = H/2 + iE/2`, `G_F = H/2 + iDelta/2`, `Delta = G_R + G_A`,
//! `E = G_R - G_A`, `i G_R = W - G_F*`, `i G_A = G_F - W`.
//!
//! Sign and normalization convention: the requirement that these identities
//! hold simultaneously with the vacuum forms above fixes everything, and
//! places the retarded kernel at `v = -r` with weight `+1/(4 pi r)`. In a
//! signalling integral `int dt dt' chi_A(t) chi_B(t') G_R(t - t', r)` this
//! is the configuration where B acts after A, which is what makes A -> B
//! signalling possible. Strong Huygens holds exactly: the retarded kernel
//! is supported on the lightcone only, with no interior tail.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Result, UdwError};
use crate::geometry::SwitchingFunction;
use crate::quad;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// The seven two-point distributions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum KernelKind {
    /// Vacuum Wightman function `<phi(x) phi(x')>`.
    Wightman,
    /// Time-ordered (Feynman) propagator.
    Feynman,
    /// Retarded Green's function: support on `v = -r`.
    Retarded,
    /// Advanced Green's function: support on `v = +r`.
    Advanced,
    /// Symmetric propagator `Delta = G_R + G_A`, the classical exchange.
    SymmetricDelta,
    /// Causal propagator `E = G_R - G_A`, the commutator part.
    CausalE,
    /// Hadamard function `H = 2 Re W`, the state-dependent part.
    HadamardH,
}

impl KernelKind {
    pub const ALL: [KernelKind; 7] = [
        KernelKind::Wightman,
        KernelKind::Feynman,
        KernelKind::Retarded,
        KernelKind::Advanced,
        KernelKind::SymmetricDelta,
        KernelKind::CausalE,
        KernelKind::HadamardH,
    ];
}

impl std::fmt::Display for KernelKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            KernelKind::Wightman => "wightman",
            KernelKind::Feynman => "feynman",
            KernelKind::Retarded => "retarded",
            KernelKind::Advanced => "advanced",
            KernelKind::SymmetricDelta => "symmetric-delta",
            KernelKind::CausalE => "causal-e",
            KernelKind::HadamardH => "hadamard-h",
        };
        f.write_str(s)
    }
}

/// Separation-independent coefficients of a reduced kernel:
/// `pv * PV[1/(4 pi^2 (r^2 - v^2))] + ret/(4 pi r) delta(v + r) + adv/(4 pi r) delta(v - r)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelShape {
    pub pv: f64,
    pub ret: Complex64,
    pub adv: Complex64,
}

impl KernelShape {
    pub fn scale(&self, c: Complex64) -> KernelShape {
        // The PV coefficient is real for every kind in the family; scaling by
        // a complex number moves any imaginary part into the delta terms only
        // when pv == 0, so guard against silent loss.
        debug_assert!(
            self.pv == 0.0 || c.im == 0.0,
            "complex scaling of a PV part leaves the closed family"
        );
        KernelShape {
            pv: self.pv * c.re,
            ret: self.ret * c,
            adv: self.adv * c,
        }
    }

    pub fn add(&self, other: &KernelShape) -> KernelShape {
        KernelShape {
            pv: self.pv + other.pv,
            ret: self.ret + other.ret,
            adv: self.adv + other.adv,
        }
    }

    /// Complex conjugate of the distribution.
    pub fn conj(&self) -> KernelShape {
        KernelShape {
            pv: self.pv,
            ret: self.ret.conj(),
            adv: self.adv.conj(),
        }
    }
}

/// Coefficient table fixed by the convention above.
pub fn kernel_shape(kind: KernelKind) -> KernelShape {
    let half_i = Complex64::new(0.0, 0.5);
    match kind {
        KernelKind::Retarded => KernelShape {
            pv: 0.0,
            ret: Complex64::new(1.0, 0.0),
            adv: ZERO,
        },
        KernelKind::Advanced => KernelShape {
            pv: 0.0,
            ret: ZERO,
            adv: Complex64::new(1.0, 0.0),
        },
        KernelKind::SymmetricDelta => KernelShape {
            pv: 0.0,
            ret: Complex64::new(1.0, 0.0),
            adv: Complex64::new(1.0, 0.0),
        },
        KernelKind::CausalE => KernelShape {
            pv: 0.0,
            ret: Complex64::new(1.0, 0.0),
            adv: Complex64::new(-1.0, 0.0),
        },
        KernelKind::HadamardH => KernelShape {
            pv: 2.0,
            ret: ZERO,
            adv: ZERO,
        },
        KernelKind::Wightman => KernelShape {
            pv: 1.0,
            ret: half_i,
            adv: -half_i,
        },
        KernelKind::Feynman => KernelShape {
            pv: 1.0,
            ret: half_i,
            adv: half_i,
        },
    }
}

/// A two-point distribution reduced to lightcone deltas plus a principal
/// value, at fixed spatial separation `r`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedKernel {
    pub r: f64,
    pub shape: KernelShape,
}

impl ReducedKernel {
    fn new(r: f64, shape: KernelShape) -> Result<Self> {
        if r <= 0.0 || !r.is_finite() {
            return Err(UdwError::SingularGeometry);
        }
        Ok(ReducedKernel { r, shape })
    }

    /// Coefficient of `PV[1/(4 pi^2 (r^2 - v^2))]`.
    pub fn pv_coeff(&self) -> f64 {
        self.shape.pv
    }

    /// Delta terms as `(location v*, complex weight)` pairs, weight already
    /// including the `1/(4 pi r)` factor. Zero-weight terms are omitted.
    pub fn delta_terms(&self) -> Vec<(f64, Complex64)> {
        let w = 1.0 / (4.0 * std::f64::consts::PI * self.r);
        let mut out = Vec::with_capacity(2);
        if self.shape.ret != ZERO {
            out.push((-self.r, self.shape.ret * w));
        }
        if self.shape.adv != ZERO {
            out.push((self.r, self.shape.adv * w));
        }
        out
    }

    /// Positions of the principal-value poles (empty when there is no PV part).
    pub fn pv_poles(&self) -> Vec<f64> {
        if self.shape.pv != 0.0 {
            vec![-self.r, self.r]
        } else {
            vec![]
        }
    }

    pub fn scale(&self, c: Complex64) -> ReducedKernel {
        ReducedKernel {
            r: self.r,
            shape: self.shape.scale(c),
        }
    }

    pub fn add(&self, other: &ReducedKernel) -> ReducedKernel {
        assert_eq!(self.r, other.r, "kernels at different separations");
        ReducedKernel {
            r: self.r,
            shape: self.shape.add(&other.shape),
        }
    }

    pub fn conj(&self) -> ReducedKernel {
        ReducedKernel {
            r: self.r,
            shape: self.shape.conj(),
        }
    }

    /// Plain smear against two switching functions (no oscillatory phase,
    /// unit couplings): `int dt dt' f(t) g(t') K(t - t', r)`.
    ///
    /// This is the reconstruction contract of the reduction; the oscillatory
    /// bilinears build on the same pieces.
    pub fn smear(
        &self,
        f: &SwitchingFunction,
        g: &SwitchingFunction,
        abs_tol: f64,
        rel_tol: f64,
    ) -> Result<Complex64> {
        // Cross-correlation C(v) = int f(t) g(t - v) dt, available in closed
        // form for every switching combination.
        let corr: Box<dyn Fn(f64) -> f64> = match (*f, *g) {
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
                let s2 = t1 * t1 + t2 * t2;
                let norm = (std::f64::consts::PI / (1.0 / (t1 * t1) + 1.0 / (t2 * t2))).sqrt();
                Box::new(move |v: f64| {
                    let d = v - (c1 - c2);
                    norm * (-d * d / s2).exp()
                })
            }
            (
                SwitchingFunction::DiracDelta { instant, strength },
                SwitchingFunction::Gaussian { center, width },
            ) => Box::new(move |v: f64| {
                let u = (instant - v - center) / width;
                strength * (-u * u).exp()
            }),
            (
                SwitchingFunction::Gaussian { center, width },
                SwitchingFunction::DiracDelta { instant, strength },
            ) => Box::new(move |v: f64| {
                let u = (instant + v - center) / width;
                strength * (-u * u).exp()
            }),
            (
                SwitchingFunction::DiracDelta {
                    instant: ta,
                    strength: ea,
                },
                SwitchingFunction::DiracDelta {
                    instant: tb,
                    strength: eb,
                },
            ) => {
                // Point correlation: only delta terms can fire, and only when
                // the instants sit exactly on the lightcone.
                let v_ab = ta - tb;
                let mut total = ZERO;
                for (loc, w) in self.delta_terms() {
                    if v_ab == loc {
                        total += w * ea * eb;
                    }
                }
                if self.shape.pv != 0.0 {
                    if v_ab.abs() == self.r {
                        return Err(UdwError::QuadratureFailure {
                            partial: total,
                            est_error: f64::INFINITY,
                        });
                    }
                    total += ea
                        * eb
                        * self.shape.pv
                        * pv_kernel_value(self.r, v_ab);
                }
                return Ok(total);
            }
        };

        let mut total = ZERO;
        for (loc, w) in self.delta_terms() {
            total += w * corr(loc);
        }
        if self.shape.pv != 0.0 {
            let span = 10.0 * support_scale(f, g);
            let lo = (-self.r - span).min(-span);
            let hi = (self.r + span).max(span);
            // 1/(r^2 - v^2) = (1/2r) [ 1/(v + r) - 1/(v - r) ]
            let c = self.shape.pv / (8.0 * std::f64::consts::PI * std::f64::consts::PI * self.r);
            let fplus = quad::pv_single(
                |v| Complex64::new(corr(v), 0.0),
                -self.r,
                lo,
                hi,
                abs_tol,
                rel_tol,
                400,
            );
            let fminus = quad::pv_single(
                |v| Complex64::new(corr(v), 0.0),
                self.r,
                lo,
                hi,
                abs_tol,
                rel_tol,
                400,
            );
            if !fplus.converged || !fminus.converged {
                return Err(UdwError::QuadratureFailure {
                    partial: total + (fplus.value - fminus.value) * c,
                    est_error: fplus.est_error + fminus.est_error,
                });
            }
            total += (fplus.value - fminus.value) * c;
        }
        Ok(total)
    }
}

/// Pointwise value of `PV[1/(4 pi^2 (r^2 - v^2))]` away from the poles.
pub(crate) fn pv_kernel_value(r: f64, v: f64) -> f64 {
    1.0 / (4.0 * std::f64::consts::PI * std::f64::consts::PI * (r * r - v * v))
}

fn support_scale(f: &SwitchingFunction, g: &SwitchingFunction) -> f64 {
    let w = |s: &SwitchingFunction| match *s {
        SwitchingFunction::Gaussian { width, .. } => width,
        SwitchingFunction::DiracDelta { .. } => 0.0,
    };
    (w(f) + w(g)).max(1e-3)
}

/// Retarded kernel: pure lightcone delta at `v = -r`, weight `1/(4 pi r)`.
pub fn retarded_reduced(r: f64) -> Result<ReducedKernel> {
    ReducedKernel::new(r, kernel_shape(KernelKind::Retarded))
}

/// Vacuum Wightman function: PV part plus Sokhotski-Plemelj deltas with
/// weights `+i/(8 pi r)` at `v = -r` and `-i/(8 pi r)` at `v = +r`.
pub fn wightman_reduced(r: f64) -> Result<ReducedKernel> {
    ReducedKernel::new(r, kernel_shape(KernelKind::Wightman))
}

/// Feynman propagator: same PV part as the Wightman function, deltas placed
/// symmetrically so that `G_F = H/2 + i Delta / 2`.
pub fn feynman_reduced(r: f64) -> Result<ReducedKernel> {
    ReducedKernel::new(r, kernel_shape(KernelKind::Feynman))
}

/// Any of the seven kinds, assembled exactly (no quadrature) from the
/// primitive reductions through the identity table.
pub fn kernel_reduced(kind: KernelKind, r: f64) -> Result<ReducedKernel> {
    match kind {
        KernelKind::Retarded => retarded_reduced(r),
        KernelKind::Wightman => wightman_reduced(r),
        KernelKind::Feynman => feynman_reduced(r),
        // i G_A = G_F - W  =>  G_A = -i (G_F - W)
        KernelKind::Advanced => Ok(feynman_reduced(r)?
            .add(&wightman_reduced(r)?.scale(-Complex64::new(1.0, 0.0)))
            .scale(-I)),
        // Delta = G_R + G_A
        KernelKind::SymmetricDelta => {
            let ga = kernel_reduced(KernelKind::Advanced, r)?;
            Ok(retarded_reduced(r)?.add(&ga))
        }
        // E = G_R - G_A
        KernelKind::CausalE => {
            let ga = kernel_reduced(KernelKind::Advanced, r)?;
            Ok(retarded_reduced(r)?.add(&ga.scale(Complex64::new(-1.0, 0.0))))
        }
        // H = W + W* (the deltas cancel pairwise, doubling the PV part)
        KernelKind::HadamardH => {
            let w = wightman_reduced(r)?;
            Ok(w.add(&w.conj()))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_separation_is_singular() {
        assert!(matches!(
            retarded_reduced(0.0),
            Err(UdwError::SingularGeometry)
        ));
        assert!(wightman_reduced(-1.0).is_err());
    }

    #[test]
    fn assembled_shapes_match_table() {
        let r = 3.0;
        for kind in KernelKind::ALL {
            let direct = kernel_shape(kind);
            let assembled = kernel_reduced(kind, r).unwrap().shape;
            assert!(
                (assembled.pv - direct.pv).abs() < 1e-15
                    && (assembled.ret - direct.ret).norm() < 1e-15
                    && (assembled.adv - direct.adv).norm() < 1e-15,
                "{kind}: {assembled:?} vs {direct:?}"
            );
        }
    }

    #[test]
    fn identity_table_holds_on_shapes() {
        let w = kernel_shape(KernelKind::Wightman);
        let gf = kernel_shape(KernelKind::Feynman);
        let gr = kernel_shape(KernelKind::Retarded);
        let ga = kernel_shape(KernelKind::Advanced);
        let dd = kernel_shape(KernelKind::SymmetricDelta);
        let e = kernel_shape(KernelKind::CausalE);
        let h = kernel_shape(KernelKind::HadamardH);

        let close = |x: &KernelShape, y: &KernelShape| {
            (x.pv - y.pv).abs() < 1e-15
                && (x.ret - y.ret).norm() < 1e-15
                && (x.adv - y.adv).norm() < 1e-15
        };

        // W = H/2 + i E / 2
        assert!(close(
            &w,
            &h.scale(Complex64::new(0.5, 0.0))
                .add(&e.scale(Complex64::new(0.0, 0.5)))
        ));
        // G_F = H/2 + i Delta / 2
        assert!(close(
            &gf,
            &h.scale(Complex64::new(0.5, 0.0))
                .add(&dd.scale(Complex64::new(0.0, 0.5)))
        ));
        // Delta = G_R + G_A, E = G_R - G_A
        assert!(close(&dd, &gr.add(&ga)));
        assert!(close(&e, &gr.add(&ga.scale(Complex64::new(-1.0, 0.0)))));
        // i G_R = W - G_F*, i G_A = G_F - W
        assert!(close(
            &gr.scale(I),
            &w.add(&gf.conj().scale(Complex64::new(-1.0, 0.0)))
        ));
        assert!(close(
            &ga.scale(I),
            &gf.add(&w.scale(Complex64::new(-1.0, 0.0)))
        ));
    }

    #[test]
    fn retarded_smear_off_lightcone_is_zero() {
        let k = retarded_reduced(5.0).unwrap();
        let f = SwitchingFunction::dirac(0.0, 1.0).unwrap();
        let g = SwitchingFunction::dirac(3.0, 1.0).unwrap(); // t_b - t_a = 3 != 5
        assert_eq!(k.smear(&f, &g, 1e-12, 1e-10).unwrap(), ZERO);
    }

    #[test]
    fn retarded_smear_on_lightcone_sifts() {
        let r = 5.0;
        let k = retarded_reduced(r).unwrap();
        let f = SwitchingFunction::dirac(0.0, 2.0).unwrap();
        let g = SwitchingFunction::dirac(r, 3.0).unwrap(); // t_b - t_a = r fires v = -r
        let got = k.smear(&f, &g, 1e-12, 1e-10).unwrap();
        let expect = 2.0 * 3.0 / (4.0 * std::f64::consts::PI * r);
        assert!((got.re - expect).abs() < 1e-15 && got.im == 0.0);
    }

    #[test]
    fn retarded_gaussian_smear_closed_form() {
        // Unit-width Gaussians centered at t_a = 0 and t_b = r pair up
        // perfectly on the retarded cone: value sqrt(pi/2) / (4 pi r).
        let r = 3.0;
        let k = retarded_reduced(r).unwrap();
        let f = SwitchingFunction::gaussian(0.0, 1.0).unwrap();
        let g = SwitchingFunction::gaussian(r, 1.0).unwrap();
        let got = k.smear(&f, &g, 1e-14, 1e-12).unwrap();
        let expect = (std::f64::consts::PI / 2.0).sqrt() / (4.0 * std::f64::consts::PI * r);
        approx::assert_relative_eq!(got.re, expect, epsilon = 1e-13);
        assert_eq!(got.im, 0.0);
    }

    #[test]
    fn advanced_is_retarded_with_arguments_swapped() {
        // G_A(f, g) = G_R(g, f) for any switching pair.
        let r = 4.0;
        let ga = kernel_reduced(KernelKind::Advanced, r).unwrap();
        let gr = kernel_reduced(KernelKind::Retarded, r).unwrap();
        let f = SwitchingFunction::gaussian(0.5, 1.0).unwrap();
        let g = SwitchingFunction::gaussian(3.0, 1.7).unwrap();
        let lhs = ga.smear(&f, &g, 1e-13, 1e-11).unwrap();
        let rhs = gr.smear(&g, &f, 1e-13, 1e-11).unwrap();
        assert!((lhs - rhs).norm() < 1e-13);
    }

    #[test]
    fn wightman_imaginary_part_vanishes_for_symmetric_real_pair() {
        // With identical real switchings at zero time offset the odd causal
        // part integrates to zero; only the (real) Hadamard half survives.
        let r = 6.0;
        let w = wightman_reduced(r).unwrap();
        let f = SwitchingFunction::gaussian(0.0, 1.0).unwrap();
        let got = w.smear(&f, &f, 1e-13, 1e-11).unwrap();
        assert!(got.im.abs() < 1e-14, "im = {}", got.im);
    }

    #[test]
    fn feynman_real_and_imaginary_split() {
        // Re(G_F smear) = Re(W smear) and Im(G_F smear) = (Delta smear)/2
        // for real switching pairs.
        let r = 2.5;
        let f = SwitchingFunction::gaussian(0.0, 1.0).unwrap();
        let g = SwitchingFunction::gaussian(1.8, 1.3).unwrap();
        let gf = feynman_reduced(r).unwrap().smear(&f, &g, 1e-13, 1e-11).unwrap();
        let w = wightman_reduced(r).unwrap().smear(&f, &g, 1e-13, 1e-11).unwrap();
        let dd = kernel_reduced(KernelKind::SymmetricDelta, r)
            .unwrap()
            .smear(&f, &g, 1e-13, 1e-11)
            .unwrap();
        approx::assert_relative_eq!(gf.re, w.re, max_relative = 1e-11);
        approx::assert_relative_eq!(gf.im, 0.5 * dd.re, max_relative = 1e-11);
    }

    #[test]
    fn hadamard_is_pure_pv() {
        let h = kernel_reduced(KernelKind::HadamardH, 2.0).unwrap();
        assert_eq!(h.delta_terms().len(), 0);
        assert_eq!(h.pv_coeff(), 2.0);
        assert_eq!(h.pv_poles(), vec![-2.0, 2.0]);
    }

    #[test]
    fn symmetric_delta_weights() {
        let d = kernel_reduced(KernelKind::SymmetricDelta, 2.0).unwrap();
        let terms = d.delta_terms();
        assert_eq!(terms.len(), 2);
        let w = 1.0 / (8.0 * std::f64::consts::PI);
        for (_, weight) in terms {
            assert!((weight - Complex64::new(w, 0.0)).norm() < 1e-15);
        }
    }
}

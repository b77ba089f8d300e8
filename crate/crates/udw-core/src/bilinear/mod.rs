//! The quadrature engine: smeared double integrals
//! `lambda_a lambda_b int dt dt' e^(i Omega (s1 t + s2 t')) chi_A(t) chi_B(t') K(t, x_A; t', x_B)`
//! for pointlike or Gaussian-ball profiles.
//!
//! The kernel's lightcone deltas are resolved analytically against the
//! relative-time profile; the principal-value part is integrated by a
//! pole-subtraction adaptive scheme after the `(u, v) = (t + t', t - t')`
//! rotation. Tolerances act on the envelope-normalized integrand so that
//! relative accuracy survives the deep oscillatory suppression.

mod ball;
mod brute;
mod envelope;

pub use ball::RadialDensity;
pub use brute::{brute_force_bilinear, brute_force_extrapolated, brute_force_with_mass};
pub use envelope::{TimeProfile, VEnvelope};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Result, UdwError};
use crate::geometry::{geometry_to_centers, Detector, PairGeometry, SwitchingFunction};
use crate::kernels::{kernel_shape, pv_kernel_value, KernelKind, KernelShape};
use crate::quad;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Relative tolerance used to decide whether two Dirac instants sit exactly
/// on a lightcone delta.
const LIGHTCONE_MATCH_TOL: f64 = 1e-9;

/// Tolerances and budget of the adaptive quadrature.
///
/// `abs_tol` applies to the envelope-normalized integrand (the closed-form
/// oscillatory suppression is factored out first), so it stays meaningful
/// when the physical value is extremely small. `integration_window_sigmas`
/// is the Gaussian truncation half-width in units of the envelope width.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
    pub integration_window_sigmas: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            abs_tol: 1e-10,
            rel_tol: 1e-8,
            max_subdivisions: 400,
            integration_window_sigmas: 10.0,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0 || self.rel_tol > 0.0) {
            return Err(UdwError::Domain(
                "at least one of abs_tol, rel_tol must be strictly positive".into(),
            ));
        }
        if self.integration_window_sigmas < 7.0 {
            return Err(UdwError::Domain(format!(
                "integration window must be at least 7 envelope widths, got {}",
                self.integration_window_sigmas
            )));
        }
        Ok(())
    }
}

/// Value, error estimate and cost of one smeared bilinear.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BilinearResult {
    pub value: Complex64,
    pub est_error: f64,
    pub evaluations: u64,
}

/// Phase signs `(s1, s2)` of `e^(i Omega (s1 t + s2 t'))`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhasePair {
    pub first: i8,
    pub second: i8,
}

impl PhasePair {
    pub const PP: PhasePair = PhasePair { first: 1, second: 1 };
    pub const PM: PhasePair = PhasePair {
        first: 1,
        second: -1,
    };
    pub const MP: PhasePair = PhasePair {
        first: -1,
        second: 1,
    };
    pub const MM: PhasePair = PhasePair {
        first: -1,
        second: -1,
    };

    pub fn signs(&self) -> (f64, f64) {
        (self.first as f64, self.second as f64)
    }

    pub fn swapped(&self) -> PhasePair {
        PhasePair {
            first: self.second,
            second: self.first,
        }
    }
}

/// Placement-resolved configuration of a detector pair.
#[derive(Debug, Clone, Copy)]
pub(crate) struct EffectivePair {
    pub sw_a: SwitchingFunction,
    pub sw_b: SwitchingFunction,
    pub r: f64,
    pub sigma_a: f64,
    pub sigma_b: f64,
}

/// Shift the switchings to the placement centers and compute the spatial
/// separation of the profile centers.
pub(crate) fn effective_pair(
    a: &Detector,
    b: &Detector,
    g: &PairGeometry,
) -> Result<EffectivePair> {
    let (ca, cb) = geometry_to_centers(g)?;
    let (pa, pb) = (a.profile.offset(), b.profile.offset());
    let dx = [
        cb.x + pb[0] - ca.x - pa[0],
        cb.y + pb[1] - ca.y - pa[1],
        cb.z + pb[2] - ca.z - pa[2],
    ];
    let r = (dx[0] * dx[0] + dx[1] * dx[1] + dx[2] * dx[2]).sqrt();
    Ok(EffectivePair {
        sw_a: a.switching.shifted(ca.t),
        sw_b: b.switching.shifted(cb.t),
        r,
        sigma_a: a.profile.width(),
        sigma_b: b.profile.width(),
    })
}

/// The smeared bilinear of one kernel kind over a detector pair.
pub fn smeared_bilinear(
    kind: KernelKind,
    a: &Detector,
    b: &Detector,
    g: &PairGeometry,
    phase: PhasePair,
    spec: &QuadratureSpec,
) -> Result<BilinearResult> {
    spec.validate()?;
    let pair = effective_pair(a, b, g)?;
    let shape = kernel_shape(kind);
    let (sa, sb) = phase.signs();
    let profile = envelope::time_profile(
        &pair.sw_a,
        &pair.sw_b,
        sa,
        sb,
        a.gap,
        b.gap,
        a.coupling * b.coupling,
    );
    evaluate(&shape, &profile, &pair, spec)
}

/// Bilinear of a detector paired with itself at one spacetime location
/// (the local noise terms `L_aa`, `L_bb`). For a Gaussian-ball profile this
/// is the zero-separation radial smearing; for a pointlike profile the
/// coincident Wightman-family distribution (finite-part plus derivative
/// delta) is used. Pointlike kinds with a net lightcone delta have no
/// finite coincidence limit and error out.
pub fn self_bilinear(
    kind: KernelKind,
    d: &Detector,
    phase: PhasePair,
    spec: &QuadratureSpec,
) -> Result<BilinearResult> {
    spec.validate()?;
    let shape = kernel_shape(kind);
    let sigma = d.profile.width();
    if sigma > 0.0 {
        let (sa, sb) = phase.signs();
        let profile = envelope::time_profile(
            &d.switching,
            &d.switching,
            sa,
            sb,
            d.gap,
            d.gap,
            d.coupling * d.coupling,
        );
        let pair = EffectivePair {
            sw_a: d.switching,
            sw_b: d.switching,
            r: 0.0,
            sigma_a: sigma,
            sigma_b: sigma,
        };
        evaluate(&shape, &profile, &pair, spec)
    } else {
        coincident_pointlike(
            kind,
            &shape,
            &d.switching,
            phase,
            d.gap,
            d.coupling * d.coupling,
            spec,
        )
    }
}

fn evaluate(
    shape: &KernelShape,
    profile: &TimeProfile,
    pair: &EffectivePair,
    spec: &QuadratureSpec,
) -> Result<BilinearResult> {
    let ball = pair.sigma_a > 0.0 || pair.sigma_b > 0.0;
    if !ball {
        // Separations at floating-point noise level (for instance the
        // theta = pi/2 placement, where cos gives ~1e-16) are in the
        // singular coincident regime for pointlike kernels: the two
        // lightcone deltas cancel catastrophically through the 1/r weight.
        if pair.r <= 1e-9 {
            return Err(UdwError::SingularGeometry);
        }
        pointlike(shape, profile, pair.r, spec)
    } else {
        smeared(shape, profile, pair, spec)
    }
}

/// Pointlike profiles: lightcone deltas in closed form, PV part by pole
/// subtraction in the relative time.
fn pointlike(
    shape: &KernelShape,
    profile: &TimeProfile,
    r: f64,
    spec: &QuadratureSpec,
) -> Result<BilinearResult> {
    let pi = std::f64::consts::PI;
    let delta_w = 1.0 / (4.0 * pi * r);

    match profile {
        TimeProfile::Point { at, strength } => {
            let mut value = ZERO;
            let on_ret = (at + r).abs() <= LIGHTCONE_MATCH_TOL * (1.0 + r);
            let on_adv = (at - r).abs() <= LIGHTCONE_MATCH_TOL * (1.0 + r);
            if on_ret {
                value += shape.ret * delta_w * strength;
            }
            if on_adv {
                value += shape.adv * delta_w * strength;
            }
            if shape.pv != 0.0 {
                if on_ret || on_adv {
                    // The PV density is singular on the cone; there is no
                    // finite value for instantaneous switchings there.
                    return Err(UdwError::QuadratureFailure {
                        partial: value,
                        est_error: f64::INFINITY,
                    });
                }
                value += strength * shape.pv * pv_kernel_value(r, *at);
            }
            Ok(BilinearResult {
                value,
                est_error: 1e-15 * value.norm(),
                evaluations: 1,
            })
        }
        TimeProfile::Envelope(env) => {
            let mut value = ZERO;
            let mut evals = 0u64;
            if shape.ret != ZERO {
                value += shape.ret * delta_w * env.eval(-r);
            }
            if shape.adv != ZERO {
                value += shape.adv * delta_w * env.eval(r);
            }
            let mut err = 1e-15 * value.norm();

            if shape.pv != 0.0 {
                // Window: envelope mass plus both poles with room for the
                // symmetric subtraction.
                let w = spec.integration_window_sigmas;
                let (s, vh) = (env.sigma(), env.peak_v());
                let lo = (vh - w * s).min(-r - 4.0 * s);
                let hi = (vh + w * s).max(r + 4.0 * s);
                // Tolerance floor scaled by the envelope's natural integral.
                let scale = env.peak_abs() * s;
                let abs = spec.abs_tol * scale;
                let c = shape.pv / (8.0 * pi * pi * r);
                // 1/(r^2 - v^2) = (1/2r)[1/(v + r) - 1/(v - r)]
                let p_ret = quad::pv_single(
                    |v| env.eval(v),
                    -r,
                    lo,
                    hi,
                    abs,
                    spec.rel_tol,
                    spec.max_subdivisions,
                );
                let p_adv = quad::pv_single(
                    |v| env.eval(v),
                    r,
                    lo,
                    hi,
                    abs,
                    spec.rel_tol,
                    spec.max_subdivisions,
                );
                evals += p_ret.evaluations + p_adv.evaluations;
                let pv_value = (p_ret.value - p_adv.value) * c;
                value += pv_value;
                err += (p_ret.est_error + p_adv.est_error) * c.abs();
                if !p_ret.converged || !p_adv.converged {
                    return Err(UdwError::QuadratureFailure {
                        partial: value,
                        est_error: err,
                    });
                }
            }
            Ok(BilinearResult {
                value,
                est_error: err,
                evaluations: evals,
            })
        }
    }
}

/// At least one Gaussian-ball profile: the radially smeared kernel is a
/// regular function of the relative time, integrated by ordinary adaptive
/// quadrature with breakpoints at the lightcone kinks.
fn smeared(
    shape: &KernelShape,
    profile: &TimeProfile,
    pair: &EffectivePair,
    spec: &QuadratureSpec,
) -> Result<BilinearResult> {
    let density = RadialDensity::new(pair.r, pair.sigma_a, pair.sigma_b);
    let w = spec.integration_window_sigmas;

    match profile {
        TimeProfile::Point { at, strength } => {
            let (value, err, evals) = ball::smeared_kernel_value(
                shape,
                &density,
                *at,
                w,
                spec.abs_tol,
                spec.rel_tol,
                spec.max_subdivisions,
            );
            Ok(BilinearResult {
                value: strength * value,
                est_error: strength.norm() * err,
                evaluations: evals.max(1),
            })
        }
        TimeProfile::Envelope(env) => {
            let s = env.sigma();
            let vh = env.peak_v();
            let reach = pair.r + w * density.sigma_c;
            let lo = (vh - w * s).min(-reach - s);
            let hi = (vh + w * s).max(reach + s);
            let scale = env.peak_abs() * s;
            // Inner radial quadrature gets a tighter budget than the outer.
            let inner_abs = 0.1 * spec.abs_tol;
            let inner_rel = 0.1 * spec.rel_tol;
            let max_sub = spec.max_subdivisions;

            let integrand = |v: f64| -> Complex64 {
                let (k, _, _) =
                    ball::smeared_kernel_value(shape, &density, v, w, inner_abs, inner_rel, max_sub);
                env.eval(v) * k
            };

            // Split at the lightcone kinks of the smeared deltas.
            let mut cuts = vec![lo, hi];
            for p in [-pair.r, 0.0, pair.r] {
                if p > lo && p < hi {
                    cuts.push(p);
                }
            }
            cuts.sort_by(f64::total_cmp);
            cuts.dedup();

            let mut value = ZERO;
            let mut err = 0.0;
            let mut evals = 0u64;
            let mut converged = true;
            let kernel_scale = 1.0
                / (4.0 * std::f64::consts::PI * std::f64::consts::PI)
                / (density.sigma_c * density.sigma_c + pair.r * pair.r);
            for seg in cuts.windows(2) {
                let rr = quad::adaptive(
                    integrand,
                    seg[0],
                    seg[1],
                    spec.abs_tol * scale * kernel_scale,
                    spec.rel_tol,
                    spec.max_subdivisions,
                );
                value += rr.value;
                err += rr.est_error;
                evals += rr.evaluations;
                converged &= rr.converged;
            }
            if !converged {
                return Err(UdwError::QuadratureFailure {
                    partial: value,
                    est_error: err,
                });
            }
            Ok(BilinearResult {
                value,
                est_error: err,
                evaluations: evals,
            })
        }
    }
}

/// Coincident pointlike pair in the momentum representation.
///
/// Finite only for kinds whose lightcone deltas cancel pairwise in the
/// zero-separation limit (`ret + adv = 0`): the Wightman function, the
/// causal propagator and the Hadamard function. The coincident Wightman
/// distribution is `W0(v) = (1/4 pi^2) int_0^inf dk k e^(-i k v)`, so a
/// Gaussian switching pair smears to
///
/// `(lambda^2 pi T^2 / 4 pi^2) e^(i (s1+s2) Omega c) int_0^inf dk k
///      exp(-(T^2/2)(k^2 + b Omega k + Omega^2))`,     `b = s2 - s1`,
///
/// and `W0*` to the same with `b -> -b`. The integrand is sign-definite,
/// so the evaluation keeps full relative accuracy deep in the adiabatic
/// regime where the time-domain finite-part route would cancel
/// catastrophically; the exponent minimum is factored out analytically.
fn coincident_pointlike(
    kind: KernelKind,
    shape: &KernelShape,
    sw: &SwitchingFunction,
    phase: PhasePair,
    gap: f64,
    amplitude: f64,
    spec: &QuadratureSpec,
) -> Result<BilinearResult> {
    let pi = std::f64::consts::PI;
    if (shape.ret + shape.adv).norm() > 0.0 {
        return Err(UdwError::DivergentSelfEnergy);
    }
    let (center, width) = match *sw {
        SwitchingFunction::Gaussian { center, width } => (center, width),
        // Two Dirac switchings at one point: the equal-time self-term has no
        // finite pointlike value.
        SwitchingFunction::DiracDelta { .. } => return Err(UdwError::DivergentSelfEnergy),
    };
    let (s1, s2) = phase.signs();
    let t2 = width * width;

    // One half-line moment integral per conjugation side.
    let moment = |b: f64| -> (Complex64, f64, u64) {
        // q(k) = (T^2/2)(k^2 + b Omega k + Omega^2), minimized over k >= 0.
        let kstar = (-0.5 * b * gap).max(0.0);
        let q_min = 0.5 * t2 * (kstar * kstar + b * gap * kstar + gap * gap);
        let q = move |k: f64| 0.5 * t2 * (k * k + b * gap * k + gap * gap) - q_min;
        // Integration window: the normalized integrand dies within a few
        // widths of the minimum on both sides.
        let sigma_k = 1.0 / width;
        let hi = kstar + spec.integration_window_sigmas * sigma_k + gap.abs();
        let peak = (kstar + sigma_k).max(1.0 / (1.0 + gap * width) / width);
        let r = quad::adaptive(
            |k| Complex64::new(k * (-q(k)).exp(), 0.0),
            0.0,
            hi,
            spec.abs_tol * peak,
            spec.rel_tol,
            spec.max_subdivisions,
        );
        let scale = (-q_min).exp();
        (r.value * scale, r.est_error * scale, r.evaluations)
    };

    let b = s2 - s1;
    let (w_plus, e_plus, n_plus) = moment(b);
    let common = amplitude * pi * t2 / (4.0 * pi * pi)
        * Complex64::new(0.0, (s1 + s2) * gap * center).exp();

    let (combo, err, evals) = match kind {
        KernelKind::Wightman => (w_plus, e_plus, n_plus),
        KernelKind::HadamardH => {
            let (w_minus, e_minus, n_minus) = moment(-b);
            (w_plus + w_minus, e_plus + e_minus, n_plus + n_minus)
        }
        KernelKind::CausalE => {
            let (w_minus, e_minus, n_minus) = moment(-b);
            (
                -Complex64::new(0.0, 1.0) * (w_plus - w_minus),
                e_plus + e_minus,
                n_plus + n_minus,
            )
        }
        _ => return Err(UdwError::DivergentSelfEnergy),
    };

    Ok(BilinearResult {
        value: common * combo,
        est_error: common.norm() * err,
        evaluations: evals,
    })
}

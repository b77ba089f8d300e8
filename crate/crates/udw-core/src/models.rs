//! Leading-order joint detector states for the two mediation models, and
//! the instantaneous-coupling single-receiver states.
//!
//! Basis convention for two-qubit matrices: `{g_A g_B, g_A e_B, e_A g_B, e_A e_B}`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bilinear::{self_bilinear, smeared_bilinear, BilinearResult, PhasePair, QuadratureSpec};
use crate::error::{Result, UdwError};
use crate::geometry::{geometry_to_centers, Detector, PairGeometry, SwitchingFunction};
use crate::kernels::KernelKind;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Which mediation model produced a state or report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Model {
    /// Fully quantum field.
    Quantum,
    /// Quantum-controlled classical field (no field degrees of freedom).
    Qc,
}

impl std::fmt::Display for Model {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Model::Quantum => "quantum",
            Model::Qc => "qc",
        })
    }
}

/// Perturbative order retained in an assembled state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum OrderTag {
    /// Second order in the coupling (quantum model).
    Second,
    /// Fourth order; available in closed form only for the qc model.
    FourthQc,
}

/// 4x4 density matrix of the detector pair with its perturbative order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoQubitState {
    pub rho: [[Complex64; 4]; 4],
    pub order: OrderTag,
}

impl TwoQubitState {
    pub fn trace(&self) -> Complex64 {
        (0..4).map(|i| self.rho[i][i]).sum()
    }

    /// Largest deviation from Hermiticity.
    pub fn hermiticity_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..4 {
            for j in 0..4 {
                worst = worst.max((self.rho[i][j] - self.rho[j][i].conj()).norm());
            }
        }
        worst
    }

    /// `Tr(rho^2)`.
    pub fn purity(&self) -> f64 {
        let mut p = ZERO;
        for i in 0..4 {
            for j in 0..4 {
                p += self.rho[i][j] * self.rho[j][i];
            }
        }
        p.re
    }

    /// Eigenvalues (ascending) of the partial transpose on the second qubit.
    pub fn partial_transpose_eigenvalues(&self) -> [f64; 4] {
        crate::linalg::hermitian_eigenvalues_4(&self.partial_transpose_b())
    }

    /// Partial transpose on the second qubit.
    pub fn partial_transpose_b(&self) -> [[Complex64; 4]; 4] {
        let idx = |ia: usize, ib: usize| 2 * ia + ib;
        let mut out = [[ZERO; 4]; 4];
        for ia in 0..2 {
            for ib in 0..2 {
                for ja in 0..2 {
                    for jb in 0..2 {
                        out[idx(ia, ib)][idx(ja, jb)] = self.rho[idx(ia, jb)][idx(ja, ib)];
                    }
                }
            }
        }
        out
    }
}

/// The six leading-order amplitudes of the pair.
///
/// `m_c`, `n_c` drive the qc model (symmetric-propagator bilinears);
/// `m` and the `l_*` Wightman terms build the quantum state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AmplitudeSet {
    pub m_c: Complex64,
    pub n_c: Complex64,
    pub m: Complex64,
    pub l_aa: Complex64,
    pub l_bb: Complex64,
    pub l_ab: Complex64,
    /// Summed quadrature error estimate of the six integrals.
    pub est_error: f64,
}

/// Compute all six amplitudes for a detector pair.
///
/// `m_c = -(i/2) <SymmetricDelta>_(+,+)`, `n_c = -(i/2) <SymmetricDelta>_(+,-)`,
/// `m = -<Feynman>_(+,+)`, `l_ij = <Wightman>_(-,+)` with the self terms
/// evaluated on the coincident worldline.
pub fn compute_amplitudes(
    a: &Detector,
    b: &Detector,
    g: &PairGeometry,
    spec: &QuadratureSpec,
) -> Result<AmplitudeSet> {
    let half_i = Complex64::new(0.0, 0.5);
    let dd_pp = smeared_bilinear(KernelKind::SymmetricDelta, a, b, g, PhasePair::PP, spec)?;
    let dd_pm = smeared_bilinear(KernelKind::SymmetricDelta, a, b, g, PhasePair::PM, spec)?;
    let gf_pp = smeared_bilinear(KernelKind::Feynman, a, b, g, PhasePair::PP, spec)?;
    let w_ab = smeared_bilinear(KernelKind::Wightman, a, b, g, PhasePair::MP, spec)?;
    let w_aa = self_bilinear(KernelKind::Wightman, a, PhasePair::MP, spec)?;
    let w_bb = self_bilinear(KernelKind::Wightman, b, PhasePair::MP, spec)?;

    let est = |r: &BilinearResult| r.est_error;
    Ok(AmplitudeSet {
        m_c: -half_i * dd_pp.value,
        n_c: -half_i * dd_pm.value,
        m: -gf_pp.value,
        l_aa: w_aa.value,
        l_bb: w_bb.value,
        l_ab: w_ab.value,
        est_error: est(&dd_pp) + est(&dd_pm) + est(&gf_pp) + est(&w_ab) + est(&w_aa) + est(&w_bb),
    })
}

/// Final state of the pair mediated by the quantum-controlled field:
/// an X-form pure state with double-excitation coherence `m_c`, kept to
/// fourth order (the `|m_c|^2` populations are exact at that order).
pub fn assemble_qc_state(amps: &AmplitudeSet) -> TwoQubitState {
    let m2 = amps.m_c.norm_sqr();
    let mut rho = [[ZERO; 4]; 4];
    rho[0][0] = Complex64::new(1.0 - m2, 0.0);
    rho[0][3] = amps.m_c.conj();
    rho[3][0] = amps.m_c;
    rho[3][3] = Complex64::new(m2, 0.0);
    TwoQubitState {
        rho,
        order: OrderTag::FourthQc,
    }
}

/// Second-order state of the pair coupled to the quantum field: local
/// Wightman populations, cross coherence `l_ab` and double-excitation
/// coherence `m`; the doubly excited population is fourth order and absent.
pub fn assemble_qft_state(amps: &AmplitudeSet) -> TwoQubitState {
    let laa = Complex64::new(amps.l_aa.re, 0.0);
    let lbb = Complex64::new(amps.l_bb.re, 0.0);
    let mut rho = [[ZERO; 4]; 4];
    rho[0][0] = Complex64::new(1.0, 0.0) - laa - lbb;
    rho[0][3] = amps.m.conj();
    rho[3][0] = amps.m;
    rho[1][1] = lbb;
    rho[2][2] = laa;
    rho[1][2] = amps.l_ab.conj();
    rho[2][1] = amps.l_ab;
    TwoQubitState {
        rho,
        order: OrderTag::Second,
    }
}

/// Receiver state after an instantaneous-coupling exchange, together with
/// the channel phase and coherence-survival factor that feed the capacity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReceiverState {
    /// 2x2 density matrix of the receiver in the `{g, e}` basis.
    pub rho: [[Complex64; 2]; 2],
    /// Channel phase `theta_E = 2 lambda_a lambda_b E(Lambda_a, Lambda_b)`.
    pub phase: f64,
    /// `nu_b = exp(-2 L_bb)`; exactly 1 in the qc model.
    pub nu_b: f64,
    /// Receiver vacuum excitation amplitude `L_bb` (zero in the qc model).
    pub l_bb: f64,
    /// Sender monopole expectation at its interaction instant.
    pub theta_a: f64,
}

/// Receiver state for the instantaneous strong coupling.
///
/// Both detectors must carry Dirac switchings (`t_a < t_b`) and
/// Gaussian-ball profiles; the pointlike equal-time self-term diverges.
/// The quantum model dephases by `nu_b = exp(-2 L_bb)`; the qc model is the
/// `nu_b = 1` limit of the same map.
pub fn delta_receiver_state(
    a: &Detector,
    b: &Detector,
    g: &PairGeometry,
    model: Model,
    spec: &QuadratureSpec,
) -> Result<ReceiverState> {
    let (ca, cb) = geometry_to_centers(g)?;
    let (t_a, t_b) = match (a.switching, b.switching) {
        (
            SwitchingFunction::DiracDelta { instant: ia, .. },
            SwitchingFunction::DiracDelta { instant: ib, .. },
        ) => (ia + ca.t, ib + cb.t),
        _ => {
            return Err(UdwError::Domain(
                "delta-coupling protocol needs Dirac switchings on both detectors".into(),
            ))
        }
    };
    if t_a >= t_b {
        return Err(UdwError::Ordering { t_a, t_b });
    }
    if a.profile.width() == 0.0 || b.profile.width() == 0.0 {
        return Err(UdwError::DivergentSelfEnergy);
    }

    // Plain (unphased) smear of the causal propagator: evaluate the causal
    // kernel bilinear with the gaps zeroed out.
    let mut a0 = *a;
    a0.gap = 0.0;
    let mut b0 = *b;
    b0.gap = 0.0;
    let e_smear = smeared_bilinear(KernelKind::CausalE, &a0, &b0, g, PhasePair::PP, spec)?;
    let phase = 2.0 * e_smear.value.re;

    let (nu_b, l_bb) = match model {
        Model::Qc => (1.0, 0.0),
        Model::Quantum => {
            let l = self_bilinear(KernelKind::Wightman, b, PhasePair::MP, spec)?
                .value
                .re;
            ((-2.0 * l).exp(), l)
        }
    };

    let theta_a = a.initial_state.monopole_expectation(a.gap, t_a);

    // rho_B = (1/2 + nu c / 2) rho0 + (1/2 - nu c / 2) mu rho0 mu
    //         - (i nu / 2) s theta_a [mu, rho0]
    let rho0 = b.initial_state.density();
    let om_t = b.gap * t_b;
    let mu = [
        [ZERO, Complex64::new(0.0, -om_t).exp()],
        [Complex64::new(0.0, om_t).exp(), ZERO],
    ];
    let mul = |x: &[[Complex64; 2]; 2], y: &[[Complex64; 2]; 2]| {
        let mut out = [[ZERO; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                out[i][j] = x[i][0] * y[0][j] + x[i][1] * y[1][j];
            }
        }
        out
    };
    let murho = mul(&mu, &rho0);
    let mrm = mul(&murho, &mu);
    let rhomu = mul(&rho0, &mu);

    let (c, s) = (phase.cos(), phase.sin());
    let w_keep = 0.5 * (1.0 + nu_b * c);
    let w_flip = 0.5 * (1.0 - nu_b * c);
    let w_comm = -I * (0.5 * nu_b * s * theta_a);

    let mut rho = [[ZERO; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            rho[i][j] =
                w_keep * rho0[i][j] + w_flip * mrm[i][j] + w_comm * (murho[i][j] - rhomu[i][j]);
        }
    }
    Ok(ReceiverState {
        rho,
        phase,
        nu_b,
        l_bb,
        theta_a,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::QubitState;
    use approx::assert_relative_eq;

    fn qspec() -> QuadratureSpec {
        QuadratureSpec::default()
    }

    fn delta_pair(sigma: f64, t0: f64, l: f64) -> (Detector, Detector, PairGeometry) {
        let a = Detector::delta_ball(3.0, 0.1, 1.0, sigma)
            .unwrap()
            .with_state(QubitState::plus());
        let b = Detector::delta_ball(3.0, 0.1, 1.0, sigma)
            .unwrap()
            .with_state(QubitState::plus());
        let g = PairGeometry::with_delay(l, t0).unwrap();
        (a, b, g)
    }

    #[test]
    fn qc_state_is_ground_projector_without_interaction() {
        let amps = AmplitudeSet {
            m_c: ZERO,
            n_c: ZERO,
            m: ZERO,
            l_aa: ZERO,
            l_bb: ZERO,
            l_ab: ZERO,
            est_error: 0.0,
        };
        let rho = assemble_qc_state(&amps);
        assert_eq!(rho.rho[0][0], Complex64::new(1.0, 0.0));
        assert_relative_eq!(rho.purity(), 1.0);
    }

    #[test]
    fn qc_state_direct_substitution() {
        let amps = AmplitudeSet {
            m_c: Complex64::new(0.1, 0.0),
            n_c: ZERO,
            m: ZERO,
            l_aa: ZERO,
            l_bb: ZERO,
            l_ab: ZERO,
            est_error: 0.0,
        };
        let rho = assemble_qc_state(&amps);
        assert_relative_eq!(rho.rho[3][3].re, 0.01);
        assert_relative_eq!(rho.rho[0][0].re, 0.99);
        assert_relative_eq!(rho.trace().re, 1.0);
        // Pure to fourth order: purity = 1 + 2 |m_c|^4.
        assert!((rho.purity() - 1.0).abs() <= 3.0 * 0.1f64.powi(4));
    }

    #[test]
    fn qft_state_shape_and_purity() {
        let amps = AmplitudeSet {
            m_c: ZERO,
            n_c: ZERO,
            m: Complex64::new(2e-3, 1e-3),
            l_aa: Complex64::new(1.5e-3, 0.0),
            l_bb: Complex64::new(1.5e-3, 0.0),
            l_ab: Complex64::new(4e-4, -2e-4),
            est_error: 0.0,
        };
        let rho = assemble_qft_state(&amps);
        assert_eq!(rho.hermiticity_defect(), 0.0);
        assert_relative_eq!(rho.trace().re, 1.0, epsilon = 1e-15);
        // X-structure zeros.
        for (i, j) in [(0, 1), (0, 2), (1, 3), (2, 3)] {
            assert_eq!(rho.rho[i][j], ZERO);
            assert_eq!(rho.rho[j][i], ZERO);
        }
        // Exact fourth-order correction to the leading purity.
        let sum_l = amps.l_aa.re + amps.l_bb.re;
        let expect = 1.0 - 2.0 * sum_l
            + sum_l * sum_l
            + amps.l_aa.re.powi(2)
            + amps.l_bb.re.powi(2)
            + 2.0 * amps.m.norm_sqr()
            + 2.0 * amps.l_ab.norm_sqr();
        assert_relative_eq!(rho.purity(), expect, epsilon = 1e-15);
    }

    #[test]
    fn classical_limit_substitution_reduces_to_qc_form() {
        // Dropping the local noise terms and replacing the coherence by the
        // symmetric-propagator one turns the quantum state into the qc state
        // up to the fourth-order populations.
        let m_c = Complex64::new(0.002, -0.001);
        let reduced = AmplitudeSet {
            m_c,
            n_c: ZERO,
            m: m_c,
            l_aa: ZERO,
            l_bb: ZERO,
            l_ab: ZERO,
            est_error: 0.0,
        };
        let qft = assemble_qft_state(&reduced);
        let qc = assemble_qc_state(&reduced);
        for i in 0..4 {
            for j in 0..4 {
                let diff = (qft.rho[i][j] - qc.rho[i][j]).norm();
                assert!(diff <= m_c.norm_sqr() + 1e-15, "({i},{j}): {diff}");
            }
        }
    }

    #[test]
    fn coincident_pair_geometry_is_singular() {
        // theta = pi/2 collapses the spatial separation of pointlike
        // profiles to floating-point noise.
        let a = Detector::gaussian(2.0, 0.01).unwrap();
        let b = Detector::gaussian(2.0, 0.01).unwrap();
        let g = PairGeometry::with_angle(5.0, std::f64::consts::FRAC_PI_2).unwrap();
        assert!(matches!(
            compute_amplitudes(&a, &b, &g, &qspec()),
            Err(UdwError::SingularGeometry)
        ));
    }

    #[test]
    fn receiver_requires_ordering_and_balls() {
        let (a, b, g) = delta_pair(0.1, -1.0, 2.0);
        assert!(matches!(
            delta_receiver_state(&a, &b, &g, Model::Quantum, &qspec()),
            Err(UdwError::Ordering { .. })
        ));
        let (a, b, g) = delta_pair(0.1, 2.0, 2.0);
        let a_pt = a.with_profile(crate::geometry::SpatialProfile::point());
        assert!(matches!(
            delta_receiver_state(&a_pt, &b, &g, Model::Quantum, &qspec()),
            Err(UdwError::DivergentSelfEnergy)
        ));
    }

    #[test]
    fn spacelike_receiver_is_dephased_input() {
        // Far off the lightcone the channel phase is negligible: the qc
        // receiver keeps its state, the quantum receiver only dephases.
        let (a, b, g) = delta_pair(0.05, 0.2, 2.0);
        let qc = delta_receiver_state(&a, &b, &g, Model::Qc, &qspec()).unwrap();
        assert!(qc.phase.abs() < 1e-12);
        let rho0 = b.initial_state.density();
        for (qrow, row0) in qc.rho.iter().zip(rho0.iter()) {
            for (x, y) in qrow.iter().zip(row0.iter()) {
                assert!((x - y).norm() < 1e-10);
            }
        }
        let q = delta_receiver_state(&a, &b, &g, Model::Quantum, &qspec()).unwrap();
        assert!(q.nu_b < 1.0);
        // With no signalling the map is the local mixing
        // (1+nu)/2 rho0 + (1-nu)/2 mu rho0 mu, independent of the sender.
        assert_relative_eq!(q.rho[0][0].re, 0.5, epsilon = 1e-9);
        assert_relative_eq!(q.rho[1][1].re, 0.5, epsilon = 1e-9);
        let mut a_other = a;
        a_other.initial_state = QubitState::ground();
        a_other.coupling = 0.37;
        let q2 = delta_receiver_state(&a_other, &b, &g, Model::Quantum, &qspec()).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert!((q.rho[i][j] - q2.rho[i][j]).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn quantum_receiver_approaches_qc_as_noise_vanishes() {
        let (a, b, g) = delta_pair(0.1, 2.0, 2.0);
        let mut prev = f64::INFINITY;
        // Shrinking the coupling sends L_bb (hence the dephasing) to zero.
        for &lam in &[0.4, 0.2, 0.1] {
            let mut a2 = a;
            a2.coupling = lam;
            let mut b2 = b;
            b2.coupling = lam;
            let qc2 = delta_receiver_state(&a2, &b2, &g, Model::Qc, &qspec()).unwrap();
            let q2 = delta_receiver_state(&a2, &b2, &g, Model::Quantum, &qspec()).unwrap();
            let gap: f64 = (0..2)
                .flat_map(|i| (0..2).map(move |j| (i, j)))
                .map(|(i, j)| (qc2.rho[i][j] - q2.rho[i][j]).norm())
                .fold(0.0, f64::max);
            assert!(gap < prev);
            prev = gap;
        }
    }

    #[test]
    fn receiver_state_is_physical() {
        let (a, b, g) = delta_pair(0.08, 1.5, 1.5);
        for model in [Model::Qc, Model::Quantum] {
            let r = delta_receiver_state(&a, &b, &g, model, &qspec()).unwrap();
            let tr = r.rho[0][0] + r.rho[1][1];
            assert_relative_eq!(tr.re, 1.0, epsilon = 1e-12);
            assert!(tr.im.abs() < 1e-14);
            assert!((r.rho[0][1] - r.rho[1][0].conj()).norm() < 1e-14);
            // 2x2 positivity: trace and determinant nonnegative.
            let det = (r.rho[0][0] * r.rho[1][1] - r.rho[0][1] * r.rho[1][0]).re;
            assert!(det >= -1e-12, "det = {det}");
        }
    }
}

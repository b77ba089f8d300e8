//! The built-in invariant suite behind `udw verify`: quick structural
//! checks of the kernel algebra, state assembly and capacity orderings.

use num_complex::Complex64;
use udw_core::{
    assemble_qc_state, assemble_qft_state, capacity_delta_from, compute_amplitudes,
    negativity_exact, negativity_leading, smeared_bilinear, Detector, KernelKind, Model,
    PairGeometry, PhasePair, QuadratureSpec,
};

pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn xorshift(state: &mut u64) -> f64 {
    // Deterministic parameter generator for the random configurations.
    let mut x = *state;
    x ^= x << 13;
    x ^= x >> 7;
    x ^= x << 17;
    *state = x;
    (x >> 11) as f64 / (1u64 << 53) as f64
}

/// Run every check; each returns its worst observed deviation.
pub fn run_all() -> Vec<Check> {
    let spec = QuadratureSpec::default();
    let mut checks = Vec::new();

    // Kernel identity table on smeared bilinears at random configurations.
    {
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut worst = 0.0f64;
        for _ in 0..5 {
            let gap = 1.0 + 19.0 * xorshift(&mut state);
            let l = 2.0 + 18.0 * xorshift(&mut state);
            let t0 = 20.0 * xorshift(&mut state);
            let a = Detector::gaussian(gap, 0.01).unwrap();
            let b = Detector::gaussian(gap, 0.01).unwrap();
            let g = PairGeometry::with_delay(l, t0).unwrap();
            for phase in [PhasePair::PP, PhasePair::MP] {
                let v = |kind| {
                    smeared_bilinear(kind, &a, &b, &g, phase, &spec)
                        .unwrap()
                        .value
                };
                let i = Complex64::new(0.0, 1.0);
                let (w, gf) = (v(KernelKind::Wightman), v(KernelKind::Feynman));
                let (gr, ga) = (v(KernelKind::Retarded), v(KernelKind::Advanced));
                let (dd, e, h) = (
                    v(KernelKind::SymmetricDelta),
                    v(KernelKind::CausalE),
                    v(KernelKind::HadamardH),
                );
                let scale = [w, gf, dd, h]
                    .iter()
                    .map(|z| z.norm())
                    .fold(1e-300, f64::max);
                for (lhs, rhs) in [
                    (w, 0.5 * h + 0.5 * i * e),
                    (gf, 0.5 * h + 0.5 * i * dd),
                    (dd, gr + ga),
                    (e, gr - ga),
                ] {
                    worst = worst.max((lhs - rhs).norm() / scale);
                }
            }
        }
        checks.push(Check {
            name: "kernel identity table on smeared bilinears",
            passed: worst <= 1e-8,
            detail: format!("worst relative deviation {worst:.2e}"),
        });
    }

    // Causal antisymmetry: identical smearings annihilate the commutator
    // kernel.
    {
        let a = Detector::gaussian(7.0, 0.01).unwrap();
        let g = PairGeometry::with_delay(4.0, 0.0).unwrap();
        let e = smeared_bilinear(KernelKind::CausalE, &a, &a, &g, PhasePair::PP, &spec)
            .unwrap()
            .value
            .norm();
        checks.push(Check {
            name: "causal propagator annihilates identical smearings",
            passed: e < 1e-15,
            detail: format!("|E(F,F)| = {e:.2e}"),
        });
    }

    // Assembled states: Hermitian, unit trace, X-structure, |m| >= |m_c|,
    // and the negativity pair ordering along a theta grid.
    {
        let a = Detector::gaussian(3.0, 0.01).unwrap();
        let b = Detector::gaussian(3.0, 0.01).unwrap();
        let mut worst_tr = 0.0f64;
        let mut worst_m = 0.0f64;
        let mut ok = true;
        for k in 0..12 {
            let theta = std::f64::consts::FRAC_PI_2 * 0.99 * k as f64 / 11.0;
            let g = PairGeometry::with_angle(5.0, theta).unwrap();
            let amps = compute_amplitudes(&a, &b, &g, &spec).unwrap();
            worst_m = worst_m.max((amps.m_c.norm() - amps.m.norm()) / amps.m.norm());
            for s in [assemble_qc_state(&amps), assemble_qft_state(&amps)] {
                worst_tr = worst_tr
                    .max(s.hermiticity_defect())
                    .max((s.trace().re - 1.0).abs());
                ok &= negativity_exact(&s).is_ok();
            }
            ok &= negativity_leading(&amps, Model::Quantum).is_ok();
        }
        checks.push(Check {
            name: "state assembly (Hermitian, unit trace, |m| >= |m_c|)",
            passed: ok && worst_tr < 1e-12 && worst_m <= 1e-10,
            detail: format!("trace/hermiticity defect {worst_tr:.2e}, max(|m_c|-|m|)/|m| {worst_m:.2e}"),
        });
    }

    // Instantaneous-coupling capacities: qc dominates quantum, quantum
    // decreases with the receiver noise.
    {
        let mut ok = true;
        for k in 1..=4 {
            let theta_e = std::f64::consts::FRAC_PI_2 * k as f64 / 5.0;
            let mut prev = f64::INFINITY;
            for j in 1..=4 {
                let nu = (-2.0 * 0.12 * j as f64).exp();
                let cq = capacity_delta_from(theta_e, nu).unwrap();
                ok &= cq <= capacity_delta_from(theta_e, 1.0).unwrap();
                ok &= cq < prev;
                prev = cq;
            }
        }
        checks.push(Check {
            name: "instantaneous-coupling capacity ordering",
            passed: ok,
            detail: String::new(),
        });
    }

    // Sweep determinism: parallel equals serial bit for bit.
    {
        let plan = crate::plan::preset("fig5").unwrap();
        let mut small = plan.clone();
        small.range.steps = 8;
        let par = crate::plan::run_sweep(&small, &spec).unwrap();
        let ser = crate::plan::run_sweep_serial(&small, &spec).unwrap();
        let same = par == ser;
        checks.push(Check {
            name: "sweep determinism (parallel == serial)",
            passed: same,
            detail: format!("{} rows", par.len()),
        });
    }

    checks
}

//! The reduced kernels must reproduce the defining distributions when
//! smeared against test functions: checked against the epsilon-regulated
//! oracle and a literal mollified-lightcone-delta oracle.

use num_complex::Complex64;
use udw_core::quad;
use udw_core::{
    brute_force_extrapolated, kernel_reduced, retarded_reduced, Detector, KernelKind,
    PairGeometry, PhasePair, SwitchingFunction,
};

/// Plain smears (no oscillatory phase) of every kind against Gaussian test
/// functions agree with the regulated brute-force oracle.
#[test]
fn reduced_smears_match_regulated_oracle() {
    let r = 3.0;
    let f = SwitchingFunction::gaussian(0.2, 1.0).unwrap();
    let g = SwitchingFunction::gaussian(2.2, 1.4).unwrap();

    // Gap-free unit-coupling detectors give the plain smear through the
    // brute-force path.
    let da = Detector::new(
        0.0,
        1.0,
        f,
        udw_core::SpatialProfile::point(),
        udw_core::QubitState::ground(),
    )
    .unwrap();
    let db = Detector::new(
        0.0,
        1.0,
        g,
        udw_core::SpatialProfile::point(),
        udw_core::QubitState::ground(),
    )
    .unwrap();
    let geom = PairGeometry::with_delay(r, 0.0).unwrap();

    for kind in KernelKind::ALL {
        let reduced = kernel_reduced(kind, r).unwrap();
        let smear = reduced.smear(&f, &g, 1e-13, 1e-11).unwrap();
        let oracle =
            brute_force_extrapolated(kind, &da, &db, &geom, PhasePair::PP, 0.1, 5).unwrap();
        let tol = 1e-7 * oracle.norm().max(1e-10);
        assert!(
            (smear - oracle).norm() <= tol,
            "{kind}: smear={smear} oracle={oracle}"
        );
    }
}

/// Independent check of the retarded reduction: replace the lightcone delta
/// by a Gaussian mollifier of width w, integrate on a dense grid, and
/// extrapolate w -> 0 (even error series).
#[test]
fn retarded_smear_matches_mollified_delta_oracle() {
    let r = 3.0;
    let f = SwitchingFunction::gaussian(0.0, 1.0).unwrap();
    let g = SwitchingFunction::gaussian(1.0, 1.3).unwrap();
    let reduced = retarded_reduced(r).unwrap();
    let direct = reduced.smear(&f, &g, 1e-13, 1e-11).unwrap();

    // smear = (1/4 pi r) int dv C(v) delta_w(v + r), with
    // C(v) = int f(t) g(t - v) dt the cross-correlation.
    let corr = |v: f64| -> f64 {
        quad::adaptive(
            |t| Complex64::new(f.value(t).unwrap() * g.value(t - v).unwrap(), 0.0),
            -20.0,
            20.0,
            1e-14,
            1e-12,
            300,
        )
        .value
        .re
    };
    let mollified = |w: f64| -> f64 {
        let norm = 1.0 / (w * std::f64::consts::PI.sqrt());
        quad::adaptive(
            |v| {
                let d = (v + r) / w;
                Complex64::new(corr(v) * norm * (-d * d).exp(), 0.0)
            },
            -r - 8.0 * w,
            -r + 8.0 * w,
            1e-13,
            1e-11,
            300,
        )
        .value
        .re
            / (4.0 * std::f64::consts::PI * r)
    };
    // Gaussian mollifier: error series in w^2, three eliminations.
    let e: Vec<f64> = [0.4, 0.2, 0.1, 0.05].iter().map(|&w| mollified(w)).collect();
    let f: Vec<f64> = e.windows(2).map(|p| (4.0 * p[1] - p[0]) / 3.0).collect();
    let s: Vec<f64> = f.windows(2).map(|p| (16.0 * p[1] - p[0]) / 15.0).collect();
    let oracle = (64.0 * s[1] - s[0]) / 63.0;
    assert!(
        (direct.re - oracle).abs() <= 1e-8 * oracle.abs(),
        "direct={} oracle={oracle}",
        direct.re
    );
}

/// Identity table on independently smeared values for several separations
/// and asymmetric test functions.
#[test]
fn identity_table_on_smears() {
    let f = SwitchingFunction::gaussian(-0.3, 0.8).unwrap();
    let g = SwitchingFunction::gaussian(1.9, 1.1).unwrap();
    let i = Complex64::new(0.0, 1.0);
    for &r in &[0.8, 2.0, 5.5] {
        let v = |kind: KernelKind| -> Complex64 {
            kernel_reduced(kind, r)
                .unwrap()
                .smear(&f, &g, 1e-13, 1e-11)
                .unwrap()
        };
        let w = v(KernelKind::Wightman);
        let gf = v(KernelKind::Feynman);
        let gr = v(KernelKind::Retarded);
        let ga = v(KernelKind::Advanced);
        let dd = v(KernelKind::SymmetricDelta);
        let e = v(KernelKind::CausalE);
        let h = v(KernelKind::HadamardH);
        let gf_conj = kernel_reduced(KernelKind::Feynman, r)
            .unwrap()
            .conj()
            .smear(&f, &g, 1e-13, 1e-11)
            .unwrap();

        let scale = h.norm().max(dd.norm()).max(1e-300);
        let close = |x: Complex64, y: Complex64, label: &str| {
            assert!(
                (x - y).norm() <= 1e-10 * scale,
                "r={r} {label}: {x} vs {y}"
            );
        };
        close(w, 0.5 * h + 0.5 * i * e, "W = H/2 + iE/2");
        close(gf, 0.5 * h + 0.5 * i * dd, "G_F = H/2 + iDelta/2");
        close(dd, gr + ga, "Delta = G_R + G_A");
        close(e, gr - ga, "E = G_R - G_A");
        close(i * gr, w - gf_conj, "iG_R = W - G_F*");
        close(i * ga, gf - w, "iG_A = G_F - W");
    }
}

/// Dirac pair landing exactly on the PV poles has no finite value for the
/// PV-carrying kinds.
#[test]
fn dirac_pair_on_pv_pole_fails() {
    let r = 2.0;
    let k = kernel_reduced(KernelKind::Wightman, r).unwrap();
    let f = SwitchingFunction::dirac(0.0, 1.0).unwrap();
    let g = SwitchingFunction::dirac(r, 1.0).unwrap();
    assert!(matches!(
        k.smear(&f, &g, 1e-12, 1e-10),
        Err(udw_core::UdwError::QuadratureFailure { .. })
    ));
}

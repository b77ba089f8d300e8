//! Sweep engine: one observable evaluated over a parameter grid for one or
//! both mediation models, with rows in deterministic axis order.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use udw_core::{
    assemble_qc_state, assemble_qft_state, capacity_delta, capacity_delta_from,
    capacity_perturbative, causal_class, compute_amplitudes, delta_receiver_state,
    negativity_exact, negativity_leading, AmplitudeSet, Model, QuadratureSpec,
};

use crate::config::Config;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Axis {
    Theta,
    OmegaT,
    LOverT,
    T0OverT,
    NuB,
}

impl Axis {
    pub fn name(&self) -> &'static str {
        match self {
            Axis::Theta => "theta",
            Axis::OmegaT => "omega_t",
            Axis::LOverT => "l_over_t",
            Axis::T0OverT => "t0_over_t",
            Axis::NuB => "nu_b",
        }
    }
}

impl std::str::FromStr for Axis {
    type Err = anyhow::Error;
    fn from_str(s: &str) -> anyhow::Result<Axis> {
        Ok(match s {
            "theta" => Axis::Theta,
            "omega_t" => Axis::OmegaT,
            "l_over_t" => Axis::LOverT,
            "t0_over_t" => Axis::T0OverT,
            "nu_b" => Axis::NuB,
            other => anyhow::bail!("unknown sweep axis '{other}'"),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Observable {
    NegativityLeading,
    NegativityExact,
    CapacityPerturbative,
    CapacityDelta,
    Amplitudes,
    Purity,
}

impl Observable {
    pub fn name(&self) -> &'static str {
        match self {
            Observable::NegativityLeading => "negativity_leading",
            Observable::NegativityExact => "negativity_exact",
            Observable::CapacityPerturbative => "capacity_perturbative",
            Observable::CapacityDelta => "capacity_delta",
            Observable::Amplitudes => "amplitudes",
            Observable::Purity => "purity",
        }
    }
}

impl std::str::FromStr for Observable {
    type Err = anyhow::Error;
    fn from_str(s: &str) -> anyhow::Result<Observable> {
        Ok(match s {
            "negativity_leading" => Observable::NegativityLeading,
            "negativity_exact" => Observable::NegativityExact,
            "capacity_perturbative" => Observable::CapacityPerturbative,
            "capacity_delta" => Observable::CapacityDelta,
            "amplitudes" => Observable::Amplitudes,
            "purity" => Observable::Purity,
            other => anyhow::bail!("unknown observable '{other}'"),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRange {
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl SweepRange {
    pub fn validate(&self) -> anyhow::Result<()> {
        if self.steps < 2 {
            anyhow::bail!("sweep needs at least 2 steps");
        }
        if self.min >= self.max || self.min.is_nan() || self.max.is_nan() {
            anyhow::bail!("sweep needs min < max");
        }
        Ok(())
    }

    pub fn values(&self) -> Vec<f64> {
        let n = self.steps;
        (0..n)
            .map(|k| self.min + (self.max - self.min) * (k as f64) / ((n - 1) as f64))
            .collect()
    }
}

/// One sweep: axis, grid, fixed parameters, models and observable.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepPlan {
    pub axis: Axis,
    pub range: SweepRange,
    pub models: Vec<Model>,
    pub observable: Observable,
    pub fixed: Config,
}

/// One output row (one grid point, one model, one observable component).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub axis_name: String,
    pub axis_value: f64,
    pub model: String,
    pub observable: String,
    pub value: f64,
    pub est_error: f64,
    pub causal_class: String,
}

/// Built-in figure-family presets.
///
/// All theta grids stop just short of `pi/2`: at the endpoint the pointlike
/// worldlines coincide and the pair amplitudes are singular.
pub fn preset(name: &str) -> anyhow::Result<SweepPlan> {
    let theta_max = std::f64::consts::FRAC_PI_2 * 0.99;
    let mut fixed = Config::default();
    fixed.detector.a.omega_t = 10.0;
    fixed.detector.b.omega_t = 10.0;
    fixed.geometry.l_over_t = 10.0;
    let theta_range = SweepRange {
        min: 0.0,
        max: theta_max,
        steps: 100,
    };
    Ok(match name {
        // Negativity against the placement angle, qc model.
        "fig2" => SweepPlan {
            axis: Axis::Theta,
            range: theta_range,
            models: vec![Model::Qc],
            observable: Observable::NegativityLeading,
            fixed,
        },
        // Same sweep for the quantum model. The companion delay-mode
        // reading (L = t0 = 10T) is reachable with `--axis t0_over_t`.
        "fig3" => SweepPlan {
            axis: Axis::Theta,
            range: theta_range,
            models: vec![Model::Quantum],
            observable: Observable::NegativityLeading,
            fixed,
        },
        // Negativity against the gap at fixed simultaneous switchings.
        "fig4" => SweepPlan {
            axis: Axis::OmegaT,
            range: SweepRange {
                min: 0.2,
                max: 20.0,
                steps: 100,
            },
            models: vec![Model::Quantum],
            observable: Observable::NegativityLeading,
            fixed,
        },
        // Both models against the angle; vary --omega-t for the family.
        "fig5" => SweepPlan {
            axis: Axis::Theta,
            range: theta_range,
            models: vec![Model::Qc, Model::Quantum],
            observable: Observable::NegativityLeading,
            fixed,
        },
        other => anyhow::bail!("unknown preset '{other}' (expected fig2..fig5)"),
    })
}

/// Run the sweep. Grid points are computed by a worker pool; the returned
/// rows are in deterministic axis-major order identical to a serial run.
pub fn run_sweep(plan: &SweepPlan, spec: &QuadratureSpec) -> anyhow::Result<Vec<SweepRow>> {
    plan.range.validate()?;
    if plan.models.is_empty() {
        anyhow::bail!("sweep needs at least one model");
    }
    let values = plan.range.values();
    let rows: Vec<Vec<SweepRow>> = values
        .par_iter()
        .map(|&x| grid_point(plan, spec, x))
        .collect();
    Ok(rows.into_iter().flatten().collect())
}

/// Same map executed serially (used by the determinism checks).
pub fn run_sweep_serial(plan: &SweepPlan, spec: &QuadratureSpec) -> anyhow::Result<Vec<SweepRow>> {
    plan.range.validate()?;
    Ok(plan
        .range
        .values()
        .into_iter()
        .flat_map(|x| grid_point(plan, spec, x))
        .collect())
}

fn apply_axis(fixed: &Config, axis: Axis, x: f64) -> Config {
    let mut c = fixed.clone();
    match axis {
        Axis::Theta => {
            c.geometry.theta = Some(x);
        }
        Axis::OmegaT => {
            c.detector.a.omega_t = x;
            c.detector.b.omega_t = x;
        }
        Axis::LOverT => {
            c.geometry.l_over_t = x;
        }
        Axis::T0OverT => {
            c.geometry.theta = None;
            c.geometry.t0_over_t = x;
        }
        Axis::NuB => {}
    }
    c
}

fn grid_point(plan: &SweepPlan, spec: &QuadratureSpec, x: f64) -> Vec<SweepRow> {
    let cfg = apply_axis(&plan.fixed, plan.axis, x);
    let mut out = Vec::new();
    for &model in &plan.models {
        match evaluate_point(&cfg, plan, spec, model, x) {
            Ok(rows) => out.extend(rows),
            Err(_) => out.push(SweepRow {
                axis_name: plan.axis.name().into(),
                axis_value: x,
                model: model.to_string(),
                observable: plan.observable.name().into(),
                value: f64::NAN,
                est_error: f64::NAN,
                causal_class: "error".into(),
            }),
        }
    }
    out
}

fn evaluate_point(
    cfg: &Config,
    plan: &SweepPlan,
    spec: &QuadratureSpec,
    model: Model,
    x: f64,
) -> anyhow::Result<Vec<SweepRow>> {
    let (a, b, g, _) = cfg.build()?;
    let class = causal_class(&a, &b, &g)?.to_string();
    let row = |observable: String, value: f64, est: f64| SweepRow {
        axis_name: plan.axis.name().into(),
        axis_value: x,
        model: model.to_string(),
        observable,
        value,
        est_error: est,
        causal_class: class.clone(),
    };
    let base = plan.observable.name().to_string();

    let need_amps = matches!(
        plan.observable,
        Observable::NegativityLeading
            | Observable::NegativityExact
            | Observable::Amplitudes
            | Observable::Purity
    );
    let amps: Option<AmplitudeSet> = if need_amps {
        Some(compute_amplitudes(&a, &b, &g, spec)?)
    } else {
        None
    };

    Ok(match plan.observable {
        Observable::NegativityLeading => {
            let amps = amps.unwrap();
            vec![row(
                base,
                negativity_leading(&amps, model)?,
                amps.est_error,
            )]
        }
        Observable::NegativityExact => {
            let amps = amps.unwrap();
            let state = match model {
                Model::Qc => assemble_qc_state(&amps),
                Model::Quantum => assemble_qft_state(&amps),
            };
            vec![row(base, negativity_exact(&state)?, amps.est_error)]
        }
        Observable::Purity => {
            let amps = amps.unwrap();
            let state = match model {
                Model::Qc => assemble_qc_state(&amps),
                Model::Quantum => assemble_qft_state(&amps),
            };
            vec![row(base, state.purity(), amps.est_error)]
        }
        Observable::CapacityPerturbative => {
            let rep = capacity_perturbative(&a, &b, &g, model, spec)?;
            vec![row(base, rep.capacity, 0.0)]
        }
        Observable::CapacityDelta => {
            if plan.axis == Axis::NuB {
                // The axis drives the coherence-survival factor directly;
                // the channel phase comes from the fixed geometry. The qc
                // model pins nu_b = 1 regardless of the axis value.
                let recv = delta_receiver_state(&a, &b, &g, Model::Qc, spec)?;
                let nu = match model {
                    Model::Qc => 1.0,
                    Model::Quantum => x,
                };
                vec![row(base, capacity_delta_from(recv.phase, nu)?, 0.0)]
            } else {
                let rep = capacity_delta(&a, &b, &g, model, spec)?;
                vec![row(base, rep.capacity, 0.0)]
            }
        }
        Observable::Amplitudes => {
            let amps = amps.unwrap();
            let parts = [
                ("m_c", amps.m_c),
                ("n_c", amps.n_c),
                ("m", amps.m),
                ("l_aa", amps.l_aa),
                ("l_bb", amps.l_bb),
                ("l_ab", amps.l_ab),
            ];
            parts
                .iter()
                .flat_map(|(name, z)| {
                    [
                        row(format!("{base}.{name}_re"), z.re, amps.est_error),
                        row(format!("{base}.{name}_im"), z.im, amps.est_error),
                    ]
                })
                .collect()
        }
    })
}

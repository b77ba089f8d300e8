//! `udw`: joint states, entanglement and channel capacities of two
//! localized two-level probes coupled through a quantum scalar field or a
//! quantum-controlled classical field.

use std::path::PathBuf;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use udw_cli::config::{Config, SwitchingKind};
use udw_cli::plan::{Axis, Observable, SweepPlan, SweepRange};
use udw_cli::{emit, preset, run_sweep, Format};
use udw_core::{
    assemble_qc_state, assemble_qft_state, capacity_delta, capacity_perturbative, causal_class,
    compute_amplitudes, negativity_exact, negativity_leading, ChannelReport, Model,
};

#[derive(Parser)]
#[command(
    name = "udw",
    version,
    about = "Two-level probes coupled through a quantum or quantum-controlled scalar field",
    long_about = "Computes joint detector states, entanglement negativity and classical \
channel capacities for a pair of localized two-level probes in flat spacetime, \
mediated either by a quantum massless scalar field or by a quantum-controlled \
classical field. All times and lengths are in units of detector A's Gaussian \
switching width."
)]
struct Cli {
    /// TOML configuration file; flags override file values.
    #[arg(long, global = true, env = "UDW_CONFIG")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct ParamArgs {
    /// Energy gap Omega*T of both detectors.
    #[arg(long)]
    omega_t: Option<f64>,
    /// Spatial separation L/T.
    #[arg(long)]
    l_over_t: Option<f64>,
    /// Switching delay t0/T (delay-mode placement).
    #[arg(long)]
    t0_over_t: Option<f64>,
    /// Placement angle in radians (angle-mode placement, overrides t0).
    #[arg(long)]
    theta: Option<f64>,
    /// Coupling strength of both detectors.
    #[arg(long)]
    lambda: Option<f64>,
    /// Switching shape of both detectors (gaussian|delta).
    #[arg(long, value_parser = parse_switching)]
    switching: Option<SwitchingKind>,
    /// Spatial profile: "point" or "ball:<sigma>".
    #[arg(long, value_parser = parse_profile)]
    profile: Option<Option<f64>>,
    /// Dirac switching strength (delta switching only).
    #[arg(long)]
    eta: Option<f64>,
    /// Gaussian width of detector B's switching, in units of A's.
    #[arg(long)]
    width_b_over_t: Option<f64>,
    /// Ground amplitude of detector A (real; normalized with beta).
    #[arg(long)]
    alpha_a: Option<f64>,
    /// Excited amplitude of detector A.
    #[arg(long)]
    beta_a: Option<f64>,
    /// Phase of detector A's excited amplitude (radians).
    #[arg(long)]
    beta_phase_a: Option<f64>,
    /// Ground amplitude of detector B.
    #[arg(long)]
    alpha_b: Option<f64>,
    /// Excited amplitude of detector B.
    #[arg(long)]
    beta_b: Option<f64>,
    /// Phase of detector B's excited amplitude (radians).
    #[arg(long)]
    beta_phase_b: Option<f64>,
    /// Absolute tolerance of the quadrature (envelope-normalized).
    #[arg(long)]
    abs_tol: Option<f64>,
    /// Relative tolerance of the quadrature.
    #[arg(long)]
    rel_tol: Option<f64>,
}

fn parse_switching(s: &str) -> Result<SwitchingKind, String> {
    match s {
        "gaussian" => Ok(SwitchingKind::Gaussian),
        "delta" => Ok(SwitchingKind::Delta),
        other => Err(format!("unknown switching '{other}' (gaussian|delta)")),
    }
}

/// "point" -> None, "ball:<sigma>" -> Some(sigma).
fn parse_profile(s: &str) -> Result<Option<f64>, String> {
    if s == "point" {
        return Ok(None);
    }
    if let Some(rest) = s.strip_prefix("ball:") {
        let sigma: f64 = rest
            .parse()
            .map_err(|_| format!("bad ball width '{rest}'"))?;
        if sigma <= 0.0 || sigma.is_nan() {
            return Err("ball width must be > 0".into());
        }
        return Ok(Some(sigma));
    }
    Err(format!("unknown profile '{s}' (point|ball:<sigma>)"))
}

/// Model selection: qc, quantum or both.
#[derive(Debug, Clone)]
struct ModelArg(Vec<Model>);

fn parse_model(s: &str) -> Result<ModelArg, String> {
    match s {
        "qc" => Ok(ModelArg(vec![Model::Qc])),
        "quantum" => Ok(ModelArg(vec![Model::Quantum])),
        "both" => Ok(ModelArg(vec![Model::Qc, Model::Quantum])),
        other => Err(format!("unknown model '{other}' (qc|quantum|both)")),
    }
}

#[derive(Subcommand)]
enum Command {
    /// Entanglement negativity of the final detector-pair state.
    Negativity {
        #[command(flatten)]
        params: ParamArgs,
        /// qc, quantum or both.
        #[arg(long, default_value = "both", value_parser = parse_model)]
        model: ModelArg,
        /// text or json.
        #[arg(long, default_value = "text")]
        format: String,
    },
    /// Leading-order classical capacity of the perturbative protocol.
    CapacityPerturbative {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, default_value = "both", value_parser = parse_model)]
        model: ModelArg,
        #[arg(long, default_value = "text")]
        format: String,
    },
    /// Exact classical capacity of the instantaneous-coupling channel
    /// (delta switchings and ball profiles; defaults fill both in).
    CapacityDelta {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, default_value = "both", value_parser = parse_model)]
        model: ModelArg,
        #[arg(long, default_value = "text")]
        format: String,
    },
    /// Final 4x4 detector-pair state with purity and negativity.
    State {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, default_value = "both", value_parser = parse_model)]
        model: ModelArg,
    },
    /// Observable swept over a parameter axis, emitted as CSV or JSON.
    Sweep {
        #[command(flatten)]
        params: ParamArgs,
        /// Built-in figure-family plan (fig2|fig3|fig4|fig5).
        #[arg(long)]
        preset: Option<String>,
        /// theta | omega_t | l_over_t | t0_over_t | nu_b.
        #[arg(long)]
        axis: Option<Axis>,
        #[arg(long)]
        min: Option<f64>,
        #[arg(long)]
        max: Option<f64>,
        #[arg(long)]
        steps: Option<usize>,
        /// negativity_leading | negativity_exact | capacity_perturbative |
        /// capacity_delta | amplitudes | purity.
        #[arg(long)]
        observable: Option<Observable>,
        #[arg(long, value_parser = parse_model)]
        model: Option<ModelArg>,
        /// csv or json.
        #[arg(long, default_value = "csv")]
        format: Format,
        /// Output path; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the built-in invariant suite; nonzero exit on any failure.
    Verify,
}

/// Apply the command-line overrides onto a configuration.
fn apply_params(cfg: &mut Config, p: &ParamArgs) {
    for d in [&mut cfg.detector.a, &mut cfg.detector.b] {
        if let Some(x) = p.omega_t {
            d.omega_t = x;
        }
        if let Some(x) = p.lambda {
            d.lambda = x;
        }
        if let Some(x) = p.switching {
            d.switching = x;
        }
        if let Some(x) = p.profile {
            d.ball_sigma = x;
        }
        if let Some(x) = p.eta {
            d.eta = x;
        }
    }
    if let Some(x) = p.width_b_over_t {
        cfg.detector.b.width_t = x;
    }
    if let Some(x) = p.alpha_a {
        cfg.detector.a.alpha = x;
    }
    if let Some(x) = p.beta_a {
        cfg.detector.a.beta = x;
    }
    if let Some(x) = p.beta_phase_a {
        cfg.detector.a.beta_phase = x;
    }
    if let Some(x) = p.alpha_b {
        cfg.detector.b.alpha = x;
    }
    if let Some(x) = p.beta_b {
        cfg.detector.b.beta = x;
    }
    if let Some(x) = p.beta_phase_b {
        cfg.detector.b.beta_phase = x;
    }
    if let Some(x) = p.l_over_t {
        cfg.geometry.l_over_t = x;
    }
    if let Some(x) = p.t0_over_t {
        cfg.geometry.t0_over_t = x;
        cfg.geometry.theta = None;
    }
    if let Some(x) = p.theta {
        cfg.geometry.theta = Some(x);
    }
    if let Some(x) = p.abs_tol {
        cfg.quadrature.abs_tol = x;
    }
    if let Some(x) = p.rel_tol {
        cfg.quadrature.rel_tol = x;
    }
}

/// Communication protocols default to coherent probes: sender in the equal
/// superposition, receiver in phase quadrature with it (the configuration
/// in which the long-switching limits of the two models coincide).
fn default_communication_states(cfg: &mut Config, p: &ParamArgs) {
    if p.alpha_a.is_none() && p.beta_a.is_none() && cfg.detector.a.beta == 0.0 {
        cfg.detector.a.alpha = 1.0;
        cfg.detector.a.beta = 1.0;
    }
    if p.alpha_b.is_none() && p.beta_b.is_none() && cfg.detector.b.beta == 0.0 {
        cfg.detector.b.alpha = 1.0;
        cfg.detector.b.beta = 1.0;
        if p.beta_phase_b.is_none() {
            cfg.detector.b.beta_phase = std::f64::consts::FRAC_PI_2;
        }
    }
}

fn load_config(path: Option<&PathBuf>) -> anyhow::Result<Config> {
    match path {
        Some(p) => Config::load(p),
        None => Ok(Config::default()),
    }
}

fn print_reports(reports: &[ChannelReport], format: &str) -> anyhow::Result<()> {
    if format == "json" {
        println!("{}", serde_json::to_string_pretty(reports)?);
        return Ok(());
    }
    for r in reports {
        println!(
            "model={} capacity={} bits, signalling={}, nu_b={}",
            r.model, r.capacity, r.signalling_term, r.nu_b
        );
    }
    Ok(())
}

fn main() -> anyhow::Result<()> {
    let cli = Cli::parse();
    let mut cfg = load_config(cli.config.as_ref())?;

    match cli.command {
        Command::Negativity {
            params,
            model,
            format,
        } => {
            apply_params(&mut cfg, &params);
            let (a, b, g, spec) = cfg.build()?;
            let amps = compute_amplitudes(&a, &b, &g, &spec)?;
            let class = causal_class(&a, &b, &g)?;
            let mut lines = Vec::new();
            for m in model.0 {
                let leading = negativity_leading(&amps, m)?;
                let state = match m {
                    Model::Qc => assemble_qc_state(&amps),
                    Model::Quantum => assemble_qft_state(&amps),
                };
                let exact = negativity_exact(&state)?;
                lines.push((m, leading, exact));
            }
            if format == "json" {
                let doc: Vec<_> = lines
                    .iter()
                    .map(|(m, l, e)| {
                        serde_json::json!({
                            "model": m.to_string(),
                            "negativity_leading": l,
                            "negativity_exact": e,
                            "causal_class": class.to_string(),
                        })
                    })
                    .collect();
                println!("{}", serde_json::to_string_pretty(&doc)?);
            } else {
                println!("causal class: {class}");
                for (m, l, e) in lines {
                    println!("model={m} negativity_leading={l} negativity_exact={e}");
                }
            }
        }
        Command::CapacityPerturbative {
            params,
            model,
            format,
        } => {
            apply_params(&mut cfg, &params);
            default_communication_states(&mut cfg, &params);
            let (a, b, g, spec) = cfg.build()?;
            let reports: Vec<ChannelReport> = model
                .0
                .into_iter()
                .map(|m| capacity_perturbative(&a, &b, &g, m, &spec))
                .collect::<Result<_, _>>()?;
            print_reports(&reports, &format)?;
        }
        Command::CapacityDelta {
            params,
            model,
            format,
        } => {
            apply_params(&mut cfg, &params);
            default_communication_states(&mut cfg, &params);
            // The instantaneous protocol needs delta switchings and ball
            // profiles; fill in defaults when the user has not chosen.
            for d in [&mut cfg.detector.a, &mut cfg.detector.b] {
                if params.switching.is_none() {
                    d.switching = SwitchingKind::Delta;
                }
                if params.profile.is_none() && d.ball_sigma.is_none() {
                    d.ball_sigma = Some(0.1 * cfg.geometry.l_over_t);
                }
            }
            if params.t0_over_t.is_none()
                && cfg.geometry.theta.is_none()
                && cfg.geometry.t0_over_t == 0.0
            {
                // Sender must act strictly before the receiver.
                cfg.geometry.t0_over_t = cfg.geometry.l_over_t;
            }
            let (a, b, g, spec) = cfg.build()?;
            let reports: Vec<ChannelReport> = model
                .0
                .into_iter()
                .map(|m| capacity_delta(&a, &b, &g, m, &spec))
                .collect::<Result<_, _>>()?;
            print_reports(&reports, &format)?;
        }
        Command::State { params, model } => {
            apply_params(&mut cfg, &params);
            let (a, b, g, spec) = cfg.build()?;
            let amps = compute_amplitudes(&a, &b, &g, &spec)?;
            println!("causal class: {}", causal_class(&a, &b, &g)?);
            println!(
                "amplitudes: m_c={} n_c={} m={} l_aa={} l_bb={} l_ab={}",
                amps.m_c, amps.n_c, amps.m, amps.l_aa, amps.l_bb, amps.l_ab
            );
            for m in model.0 {
                let state = match m {
                    Model::Qc => assemble_qc_state(&amps),
                    Model::Quantum => assemble_qft_state(&amps),
                };
                println!(
                    "model={m} (basis g_A g_B, g_A e_B, e_A g_B, e_A e_B), purity={}, negativity={}",
                    state.purity(),
                    negativity_exact(&state)?
                );
                for row in &state.rho {
                    println!(
                        "  [{}]",
                        row.iter()
                            .map(|z| format!("{z:+.6e}"))
                            .collect::<Vec<_>>()
                            .join(", ")
                    );
                }
            }
        }
        Command::Sweep {
            params,
            preset: preset_name,
            axis,
            min,
            max,
            steps,
            observable,
            model,
            format,
            out,
        } => {
            apply_params(&mut cfg, &params);
            let mut plan = match &preset_name {
                Some(name) => {
                    let mut p = preset(name)?;
                    apply_params(&mut p.fixed, &params);
                    p
                }
                None => SweepPlan {
                    axis: axis.context("--axis is required without --preset")?,
                    range: SweepRange {
                        min: min.context("--min is required without --preset")?,
                        max: max.context("--max is required without --preset")?,
                        steps: steps.unwrap_or(100),
                    },
                    models: model
                        .clone()
                        .map(|m| m.0)
                        .unwrap_or_else(|| vec![Model::Qc, Model::Quantum]),
                    observable: observable
                        .context("--observable is required without --preset")?,
                    fixed: cfg.clone(),
                },
            };
            if preset_name.is_some() {
                if let Some(ax) = axis {
                    plan.axis = ax;
                }
                if let (Some(lo), Some(hi)) = (min, max) {
                    plan.range.min = lo;
                    plan.range.max = hi;
                }
                if let Some(n) = steps {
                    plan.range.steps = n;
                }
                if let Some(obs) = observable {
                    plan.observable = obs;
                }
                if let Some(m) = model {
                    plan.models = m.0;
                }
            }
            let spec = plan.fixed.quadrature.build();
            let rows = run_sweep(&plan, &spec)?;
            emit(&plan, &spec, &rows, format, out.as_deref())?;
        }
        Command::Verify => {
            let checks = udw_cli::verify::run_all();
            let mut failed = 0;
            for c in &checks {
                println!(
                    "[{}] {}{}",
                    if c.passed { "PASS" } else { "FAIL" },
                    c.name,
                    if c.detail.is_empty() {
                        String::new()
                    } else {
                        format!(" ({})", c.detail)
                    }
                );
                if !c.passed {
                    failed += 1;
                }
            }
            if failed > 0 {
                anyhow::bail!("{failed} verification check(s) failed");
            }
        }
    }
    Ok(())
}

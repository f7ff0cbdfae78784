//! Figure-reproduction and protocol drivers.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::path::Path;

use crate::error::{Error, Result};
use crate::measurement::{run_schedule_with_rng, schedule_rounds, AXIS_Z};
use crate::noise::{exact_mean_fidelity, monte_carlo_fidelity, trial_rng, PhaseNoiseModel};
use crate::physics::{
    adiabatic_angle, coulomb_background, coulomb_singlet_pair, ecc, nnn_crosstalk_ratio,
    singlet_admixture, AdiabaticAngle, EnergyMeV,
};
use crate::pulse::{
    bond_phase_vector, phase_integral, solve_hold_for, DetuningPulse, PhaseRadians,
};
use crate::state::{
    apply_ising_phases, ideal_cluster, init_plus_chain, stabilizer_expectations, state_fidelity,
    ChainState,
};

use super::config::ExperimentConfig;
use super::csv::{num, CsvWriter};
use super::manifest::RunManifest;

/// Number of samples along each `figure2` curve.
pub const CURVE_POINTS: usize = 2001;

/// `prepare` fails when any stabilizer falls below `1 − STABILIZER_TOL`.
pub const STABILIZER_TOL: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Figure2,
    Figure3,
    Prepare,
    MeasureDemo,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Figure2 => "figure2",
            Command::Figure3 => "figure3",
            Command::Prepare => "prepare",
            Command::MeasureDemo => "measure-demo",
        }
    }

    pub fn from_name(name: &str) -> Result<Self> {
        Ok(match name {
            "figure2" => Command::Figure2,
            "figure3" => Command::Figure3,
            "prepare" => Command::Prepare,
            "measure-demo" => Command::MeasureDemo,
            other => return Err(Error::Config(format!("unknown command {other:?}"))),
        })
    }
}

#[derive(Clone, Debug)]
pub struct CommandOutcome {
    /// `(file name, contents)` pairs, in emission order.
    pub files: Vec<(String, String)>,
    /// Human-readable summary for stdout.
    pub report: String,
    /// Set when an acceptance threshold of the command failed.
    pub threshold_failed: bool,
}

/// Validates the config and runs `command` without touching the filesystem.
pub fn run_command(command: Command, cfg: &ExperimentConfig) -> Result<CommandOutcome> {
    cfg.validate()?;
    match command {
        Command::Figure2 => figure2(cfg),
        Command::Figure3 => figure3(cfg),
        Command::Prepare => prepare(cfg),
        Command::MeasureDemo => measure_demo(cfg),
    }
}

/// Writes the outcome's files plus the run manifest into `cfg.out_dir`.
pub fn write_outputs(
    command: Command,
    cfg: &ExperimentConfig,
    outcome: &CommandOutcome,
) -> Result<RunManifest> {
    let dir = &cfg.out_dir;
    std::fs::create_dir_all(dir)?;
    for (name, body) in &outcome.files {
        std::fs::write(dir.join(name), body)?;
    }
    let manifest = RunManifest::new(
        command.name(),
        cfg,
        outcome.files.iter().map(|(n, _)| n.clone()).collect(),
    );
    std::fs::write(
        dir.join(RunManifest::file_name(command.name())),
        manifest.to_json()?,
    )?;
    Ok(manifest)
}

/// Re-runs the command recorded in a manifest, optionally into another
/// output directory.
pub fn replay(
    manifest_path: &Path,
    out_dir: Option<&Path>,
) -> Result<(Command, ExperimentConfig, CommandOutcome)> {
    let manifest = RunManifest::load(manifest_path)?;
    let command = Command::from_name(&manifest.command)?;
    let mut cfg = manifest.config()?;
    if let Some(dir) = out_dir {
        cfg.out_dir = dir.to_path_buf();
    }
    let outcome = run_command(command, &cfg)?;
    Ok((command, cfg, outcome))
}

/// Calibrated pulse: the configured shape with the hold solved for the
/// target phase unless `hold_ns` is fixed.
pub fn calibrated_pulse(cfg: &ExperimentConfig) -> Result<DetuningPulse> {
    let base = cfg.base_pulse();
    match cfg.hold_ns {
        Some(_) => Ok(base),
        None => {
            let target = PhaseRadians(cfg.target_phase_over_pi * PI);
            let hold = solve_hold_for(&base, &cfg.device, target)?;
            Ok(base.with_hold(hold))
        }
    }
}

fn lerp(lo: f64, hi: f64, i: usize, last: usize) -> f64 {
    let f = i as f64 / last as f64;
    lo * (1.0 - f) + hi * f
}

fn figure2(cfg: &ExperimentConfig) -> Result<CommandOutcome> {
    let dev = &cfg.device;
    let (lo, hi) = (dev.eps_low().0, dev.eps_high().0);
    let last = CURVE_POINTS - 1;

    let mut curve = CsvWriter::new(&["epsilon_mev", "theta_rad", "singlet_admixture", "ecc_mev"]);
    for i in 0..CURVE_POINTS {
        let eps = lerp(lo, hi, i, last);
        let theta = adiabatic_angle(EnergyMeV(eps), dev.tunnel_coupling_mev)?;
        curve.row(&[
            &num(eps),
            &num(theta.radians()),
            &num(singlet_admixture(theta)),
            &num(ecc(dev, theta).0),
        ]);
    }

    let pulse = calibrated_pulse(cfg)?;
    let total = pulse.duration_ns();
    let mut trace = CsvWriter::new(&["t_ns", "epsilon_mev", "ecc_mev"]);
    for i in 0..CURVE_POINTS {
        let t = lerp(0.0, total, i, last);
        let eps = pulse.detuning_at(t)?;
        let theta = adiabatic_angle(eps, dev.tunnel_coupling_mev)?;
        trace.row(&[&num(t), &num(eps.0), &num(ecc(dev, theta).0)]);
    }

    let phi = phase_integral(&pulse, dev)?.0;
    let ramps = phase_integral(&pulse.with_hold(0.0), dev)?.0;
    let mut report = String::new();
    for w in pulse.adiabaticity_warnings(dev, cfg.coherence_budget_ns) {
        report.push_str(&format!("warning: {w}\n"));
    }
    report.push_str(&format!(
        "H_int0          = {:.6e} meV\n\
         H_S'S'          = {:.6e} meV\n\
         E_cc(pi/2)      = {:.6e} meV\n\
         nnn crosstalk   = {:.4} E_cc\n\
         ramp up/down    = {} / {} ns\n\
         hold            = {:.6} ns\n\
         total duration  = {:.6} ns\n\
         ramp-only phase = {:.6} pi\n\
         bond phase      = {:.9} pi\n",
        coulomb_background(dev).0,
        coulomb_singlet_pair(dev).0,
        ecc(dev, AdiabaticAngle::RIGHT).0,
        nnn_crosstalk_ratio(dev),
        pulse.ramp_up_ns,
        pulse.ramp_down_ns,
        pulse.hold_ns,
        total,
        ramps / PI,
        phi / PI,
    ));
    Ok(CommandOutcome {
        files: vec![
            ("figure2a_ecc_vs_detuning.csv".into(), curve.finish()),
            ("figure2bc_pulse.csv".into(), trace.finish()),
        ],
        report,
        threshold_failed: false,
    })
}

/// σ grid of panel (b): `points` values evenly spaced over `[0, max]`.
pub fn sigma_grid(max_over_pi: f64, points: usize) -> Vec<f64> {
    (0..points)
        .map(|i| lerp(0.0, max_over_pi, i, points - 1))
        .collect()
}

fn figure3(cfg: &ExperimentConfig) -> Result<CommandOutcome> {
    let mut csv = CsvWriter::new(&[
        "n",
        "sigma_over_pi",
        "mc_mean",
        "mc_stderr",
        "exact_mean",
        "trials",
        "seed",
    ]);
    let mut report = String::new();
    let mut emit = |n: usize, sigma_over_pi: f64| -> Result<()> {
        let model = PhaseNoiseModel::from_sigma_over_pi(sigma_over_pi)?;
        let mc = monte_carlo_fidelity(n, &model, cfg.trials, cfg.seed)?;
        let exact = exact_mean_fidelity(n, &model)?;
        csv.row(&[
            &n,
            &num(sigma_over_pi),
            &num(mc.mean),
            &num(mc.standard_error),
            &num(exact),
            &cfg.trials,
            &cfg.seed,
        ]);
        if n == cfg.fig3_n_max {
            report.push_str(&format!(
                "n={n:2} sigma={sigma_over_pi:.4}pi  mc={:.6} ± {:.6}  exact={exact:.6}\n",
                mc.mean, mc.standard_error
            ));
        }
        Ok(())
    };
    // Panel (a): fidelity against chain length for each configured σ.
    for &s in &cfg.sigma_over_pi {
        for n in 2..=cfg.fig3_n_max {
            emit(n, s)?;
        }
    }
    // Panel (b): fidelity against σ at the longest chain.
    for s in sigma_grid(cfg.fig3_sigma_max_over_pi, cfg.fig3_sigma_points) {
        emit(cfg.fig3_n_max, s)?;
    }
    Ok(CommandOutcome {
        files: vec![("figure3.csv".into(), csv.finish())],
        report,
        threshold_failed: false,
    })
}

/// Runs the preparation protocol: `|+⟩ⁿ`, calibrated collective pulse,
/// diagonal Ising evolution.
pub fn prepare_chain(cfg: &ExperimentConfig) -> Result<(DetuningPulse, ChainState)> {
    let pulse = calibrated_pulse(cfg)?;
    let mut state = init_plus_chain(cfg.n_qubits)?;
    if cfg.n_qubits >= 2 {
        let bonds = bond_phase_vector(&pulse, &cfg.device, cfg.n_qubits)?;
        apply_ising_phases(&mut state, &bonds)?;
    }
    Ok((pulse, state))
}

fn prepare(cfg: &ExperimentConfig) -> Result<CommandOutcome> {
    let (pulse, state) = prepare_chain(cfg)?;
    let fidelity = state_fidelity(&ideal_cluster(cfg.n_qubits)?, &state)?;
    let stabilizers = stabilizer_expectations(&state);
    let worst = stabilizers.iter().copied().fold(1.0, f64::min);

    let mut csv = CsvWriter::new(&["site", "stabilizer"]);
    for (site, v) in stabilizers.iter().enumerate() {
        csv.row(&[&site, &num(*v)]);
    }
    let mut files = vec![
        ("prepare_stabilizers.csv".to_string(), csv.finish()),
        ("prepare_summary.csv".to_string(), {
            let mut s = CsvWriter::new(&[
                "n",
                "hold_ns",
                "bond_phase_over_pi",
                "fidelity",
                "min_stabilizer",
            ]);
            let phi = phase_integral(&pulse, &cfg.device)?.0;
            s.row(&[
                &cfg.n_qubits,
                &num(pulse.hold_ns),
                &num(phi / PI),
                &num(fidelity),
                &num(worst),
            ]);
            s.finish()
        }),
    ];
    if cfg.dump_state {
        files.push(("prepare_state.csv".to_string(), state.to_csv()));
    }
    let threshold_failed = worst < 1.0 - STABILIZER_TOL;
    let mut report = String::new();
    for w in pulse.adiabaticity_warnings(&cfg.device, cfg.coherence_budget_ns) {
        report.push_str(&format!("warning: {w}\n"));
    }
    report.push_str(&format!(
        "n = {}, hold = {:.6} ns\nfidelity to ideal cluster = {:.12}\nmin stabilizer = {:.12}\n{}\n",
        cfg.n_qubits,
        pulse.hold_ns,
        fidelity,
        worst,
        if threshold_failed { "FAIL: stabilizer below 1 - 1e-6" } else { "OK" }
    ));
    Ok(CommandOutcome {
        files,
        report,
        threshold_failed,
    })
}

/// Born probabilities of the joint z outcomes of `pattern`, keyed by the
/// outcome string (`+`/`-` per pattern entry in ascending qubit order).
pub fn z_outcome_distribution(state: &ChainState, pattern: &[usize]) -> BTreeMap<String, f64> {
    let mut sorted = pattern.to_vec();
    sorted.sort_unstable();
    let mut dist = BTreeMap::new();
    for (idx, a) in state.amplitudes().iter().enumerate() {
        let key: String = sorted
            .iter()
            .map(|&q| {
                if idx & state.qubit_mask(q) != 0 {
                    '+'
                } else {
                    '-'
                }
            })
            .collect();
        *dist.entry(key).or_insert(0.0) += a.norm_sqr();
    }
    dist
}

fn measure_demo(cfg: &ExperimentConfig) -> Result<CommandOutcome> {
    let (_, prepared) = prepare_chain(cfg)?;
    let pattern = cfg.pattern();
    let axes = cfg.axes_by_qubit();
    let schedule = schedule_rounds(pattern.iter().copied());

    let mut sched_csv = CsvWriter::new(&["round", "qubit"]);
    for (round, q) in schedule.iter() {
        sched_csv.row(&[&round, &q]);
    }

    let mut rec_csv = CsvWriter::new(&[
        "round",
        "qubit",
        "axis_x",
        "axis_y",
        "axis_z",
        "outcome",
        "probability",
    ]);
    let mut counts: BTreeMap<String, usize> = BTreeMap::new();
    for shot in 0..cfg.measure_shots {
        let mut state = prepared.clone();
        let records = run_schedule_with_rng(
            &mut state,
            &schedule,
            &axes,
            &mut trial_rng(cfg.seed, shot as u64),
        )?;
        if shot == 0 {
            for ((round, _), r) in schedule.iter().zip(&records) {
                rec_csv.row(&[
                    &round,
                    &r.qubit,
                    &num(r.axis[0]),
                    &num(r.axis[1]),
                    &num(r.axis[2]),
                    &r.outcome,
                    &num(r.probability),
                ]);
            }
        }
        let mut by_qubit: Vec<_> = records.iter().map(|r| (r.qubit, r.outcome)).collect();
        by_qubit.sort_unstable();
        let key: String = by_qubit
            .iter()
            .map(|&(_, o)| if o > 0 { '+' } else { '-' })
            .collect();
        *counts.entry(key).or_insert(0) += 1;
    }

    let mut files = vec![
        ("measure_schedule.csv".to_string(), sched_csv.finish()),
        ("measure_records.csv".to_string(), rec_csv.finish()),
    ];
    let mut report = format!(
        "n = {}, pattern = {:?}, rounds = {}\n",
        cfg.n_qubits,
        pattern,
        schedule.rounds().len()
    );
    if cfg.measure_shots > 1 {
        let all_z = pattern.iter().all(|&q| axes[q] == AXIS_Z);
        let born = all_z.then(|| z_outcome_distribution(&prepared, &pattern));
        let mut freq = CsvWriter::new(&["outcomes", "count", "frequency", "born_probability"]);
        let shots = cfg.measure_shots as f64;
        let mut tv = 0.0;
        let keys: std::collections::BTreeSet<&String> = counts
            .keys()
            .chain(born.iter().flat_map(|b| b.keys()))
            .collect();
        for key in keys {
            let count = counts.get(key).copied().unwrap_or(0);
            let f = count as f64 / shots;
            let p = born.as_ref().map(|b| b.get(key).copied().unwrap_or(0.0));
            if let Some(p) = p {
                tv += 0.5 * (f - p).abs();
            }
            freq.row(&[
                key,
                &count,
                &num(f),
                &p.map_or_else(|| "nan".to_string(), num),
            ]);
        }
        files.push(("measure_frequencies.csv".to_string(), freq.finish()));
        report.push_str(&format!("shots = {}\n", cfg.measure_shots));
        if all_z {
            report.push_str(&format!(
                "total-variation distance to Born rule = {tv:.6}\n"
            ));
        }
    }
    Ok(CommandOutcome {
        files,
        report,
        threshold_failed: false,
    })
}

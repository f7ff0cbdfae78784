//! Flat `key=value` experiment configuration.
//!
//! Every physical key carries its unit in the name. Lines starting with `#`
//! are comments. Unknown or repeated keys are rejected; command-line
//! overrides are applied on top with [`ExperimentConfig::set`].

use std::collections::BTreeMap;
use std::path::PathBuf;

use crate::error::{Error, Result};
use crate::measurement::{MeasurementSpec, AXIS_X, AXIS_Y, AXIS_Z};
use crate::noise::{PhaseNoiseModel, MIN_TRIALS};
use crate::physics::DeviceParams;
use crate::pulse::DetuningPulse;
use crate::state::MAX_QUBITS;

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub device: DeviceParams,
    pub tau1_ns: f64,
    /// Down-ramp duration; `None` mirrors `tau1_ns`.
    pub tau1_down_ns: Option<f64>,
    /// Plateau duration; `None` calibrates it to `target_phase_over_pi`.
    pub hold_ns: Option<f64>,
    pub target_phase_over_pi: f64,
    pub coherence_budget_ns: f64,
    pub n_qubits: usize,
    pub sigma_over_pi: Vec<f64>,
    pub trials: usize,
    pub seed: u64,
    pub out_dir: PathBuf,
    pub fig3_n_max: usize,
    pub fig3_sigma_max_over_pi: f64,
    pub fig3_sigma_points: usize,
    /// Qubits to measure; `None` means all.
    pub measure_pattern: Option<Vec<usize>>,
    /// One axis for every pattern entry, or a single axis for all.
    pub measure_axes: Vec<[f64; 3]>,
    pub measure_shots: usize,
    pub dump_state: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            device: DeviceParams::default(),
            tau1_ns: 1.0,
            tau1_down_ns: None,
            hold_ns: None,
            target_phase_over_pi: 1.0,
            coherence_budget_ns: 10.0,
            n_qubits: 10,
            sigma_over_pi: vec![0.0, 0.03],
            trials: 100_000,
            seed: 20_070_101,
            out_dir: PathBuf::from("out"),
            fig3_n_max: 20,
            fig3_sigma_max_over_pi: 0.1,
            fig3_sigma_points: 11,
            measure_pattern: None,
            measure_axes: vec![AXIS_Z],
            measure_shots: 1,
            dump_state: false,
        }
    }
}

/// Recognized keys, in canonical order.
pub const KEYS: &[&str] = &[
    "dot_radius_nm",
    "intradot_spacing_nm",
    "intermolecule_spacing_nm",
    "relative_permittivity",
    "tc_mev",
    "ec_mev",
    "tau1_ns",
    "tau1_down_ns",
    "hold_ns",
    "target_phase_over_pi",
    "coherence_budget_ns",
    "n_qubits",
    "sigma_over_pi",
    "trials",
    "seed",
    "out_dir",
    "fig3_n_max",
    "fig3_sigma_max_over_pi",
    "fig3_sigma_points",
    "measure_pattern",
    "measure_axes",
    "measure_shots",
    "dump_state",
];

fn parse<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::Config(format!("cannot parse {key} = {value:?}")))
}

fn parse_list<T: std::str::FromStr>(key: &str, value: &str) -> Result<Vec<T>> {
    if value.trim().is_empty() {
        return Ok(Vec::new());
    }
    value.split(',').map(|v| parse(key, v.trim())).collect()
}

fn parse_auto(key: &str, value: &str) -> Result<Option<f64>> {
    if value == "auto" {
        Ok(None)
    } else {
        parse(key, value).map(Some)
    }
}

fn parse_axis(token: &str) -> Result<[f64; 3]> {
    let (sign, name) = match token.strip_prefix('-') {
        Some(rest) => (-1.0, rest),
        None => (1.0, token),
    };
    let axis = match name {
        "x" => AXIS_X,
        "y" => AXIS_Y,
        "z" => AXIS_Z,
        _ => {
            let parts: Vec<f64> = token
                .split('/')
                .map(|p| parse("measure_axes", p.trim()))
                .collect::<Result<_>>()?;
            let [x, y, z] = parts[..] else {
                return Err(Error::Config(format!(
                    "axis {token:?} must be x, y, z or ax/ay/az"
                )));
            };
            let spec = MeasurementSpec::new(0, [x, y, z])
                .or_else(|_| MeasurementSpec::normalized(0, [x, y, z]))?;
            return Ok(spec.axis);
        }
    };
    Ok(axis.map(|c| sign * c))
}

fn render_auto(v: Option<f64>) -> String {
    v.map_or_else(|| "auto".to_string(), |x| x.to_string())
}

fn render_list<T: ToString>(v: &[T]) -> String {
    v.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

impl ExperimentConfig {
    /// Parses a config file body on top of the defaults.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        let mut seen = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key=value", lineno + 1)))?;
            let key = key.trim();
            if seen.insert(key.to_string(), lineno).is_some() {
                return Err(Error::Config(format!(
                    "line {}: duplicate key {key}",
                    lineno + 1
                )));
            }
            cfg.set(key, value.trim())?;
        }
        Ok(cfg)
    }

    pub fn from_pairs(pairs: &BTreeMap<String, String>) -> Result<Self> {
        let mut cfg = Self::default();
        for (k, v) in pairs {
            cfg.set(k, v)?;
        }
        Ok(cfg)
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let d = &mut self.device;
        match key {
            "dot_radius_nm" => d.dot_radius_nm = parse(key, value)?,
            "intradot_spacing_nm" => d.intradot_spacing_nm = parse(key, value)?,
            "intermolecule_spacing_nm" => d.intermolecule_spacing_nm = parse(key, value)?,
            "relative_permittivity" => d.relative_permittivity = parse(key, value)?,
            "tc_mev" => d.tunnel_coupling_mev = parse(key, value)?,
            "ec_mev" => d.charging_energy_mev = parse(key, value)?,
            "tau1_ns" => self.tau1_ns = parse(key, value)?,
            "tau1_down_ns" => self.tau1_down_ns = parse_auto(key, value)?,
            "hold_ns" => self.hold_ns = parse_auto(key, value)?,
            "target_phase_over_pi" => self.target_phase_over_pi = parse(key, value)?,
            "coherence_budget_ns" => self.coherence_budget_ns = parse(key, value)?,
            "n_qubits" => self.n_qubits = parse(key, value)?,
            "sigma_over_pi" => self.sigma_over_pi = parse_list(key, value)?,
            "trials" => self.trials = parse(key, value)?,
            "seed" => self.seed = parse(key, value)?,
            "out_dir" => self.out_dir = PathBuf::from(value),
            "fig3_n_max" => self.fig3_n_max = parse(key, value)?,
            "fig3_sigma_max_over_pi" => self.fig3_sigma_max_over_pi = parse(key, value)?,
            "fig3_sigma_points" => self.fig3_sigma_points = parse(key, value)?,
            "measure_pattern" => {
                self.measure_pattern = if value == "all" {
                    None
                } else {
                    Some(parse_list(key, value)?)
                }
            }
            "measure_axes" => {
                self.measure_axes = value
                    .split(',')
                    .map(|t| parse_axis(t.trim()))
                    .collect::<Result<_>>()?
            }
            "measure_shots" => self.measure_shots = parse(key, value)?,
            "dump_state" => self.dump_state = parse(key, value)?,
            _ => return Err(Error::Config(format!("unknown key {key:?}"))),
        }
        Ok(())
    }

    /// Canonical `key → value` snapshot; parsing it back yields an equal
    /// config.
    pub fn to_pairs(&self) -> BTreeMap<String, String> {
        let d = &self.device;
        let axes: Vec<String> = self
            .measure_axes
            .iter()
            .map(|a| format!("{}/{}/{}", a[0], a[1], a[2]))
            .collect();
        let values = [
            d.dot_radius_nm.to_string(),
            d.intradot_spacing_nm.to_string(),
            d.intermolecule_spacing_nm.to_string(),
            d.relative_permittivity.to_string(),
            d.tunnel_coupling_mev.to_string(),
            d.charging_energy_mev.to_string(),
            self.tau1_ns.to_string(),
            render_auto(self.tau1_down_ns),
            render_auto(self.hold_ns),
            self.target_phase_over_pi.to_string(),
            self.coherence_budget_ns.to_string(),
            self.n_qubits.to_string(),
            render_list(&self.sigma_over_pi),
            self.trials.to_string(),
            self.seed.to_string(),
            self.out_dir.display().to_string(),
            self.fig3_n_max.to_string(),
            self.fig3_sigma_max_over_pi.to_string(),
            self.fig3_sigma_points.to_string(),
            self.measure_pattern
                .as_deref()
                .map_or_else(|| "all".to_string(), render_list),
            axes.join(","),
            self.measure_shots.to_string(),
            self.dump_state.to_string(),
        ];
        KEYS.iter().map(|k| k.to_string()).zip(values).collect()
    }

    /// The pulse before hold-time calibration (`hold_ns` = 0 when auto).
    pub fn base_pulse(&self) -> DetuningPulse {
        let mut p =
            DetuningPulse::symmetric(self.tau1_ns, self.hold_ns.unwrap_or(0.0), &self.device);
        p.ramp_down_ns = self.tau1_down_ns.unwrap_or(self.tau1_ns);
        p
    }

    pub fn noise_models(&self) -> Result<Vec<PhaseNoiseModel>> {
        self.sigma_over_pi
            .iter()
            .map(|&s| PhaseNoiseModel::from_sigma_over_pi(s))
            .collect()
    }

    /// Qubits selected by `measure_pattern`.
    pub fn pattern(&self) -> Vec<usize> {
        self.measure_pattern
            .clone()
            .unwrap_or_else(|| (0..self.n_qubits).collect())
    }

    /// Measurement axis per qubit index of the chain.
    pub fn axes_by_qubit(&self) -> Vec<[f64; 3]> {
        let pattern = self.pattern();
        let mut axes = vec![AXIS_Z; self.n_qubits];
        for (i, &q) in pattern.iter().enumerate() {
            if q < axes.len() {
                axes[q] = if self.measure_axes.len() == 1 {
                    self.measure_axes[0]
                } else {
                    self.measure_axes[i]
                };
            }
        }
        axes
    }

    /// Checks every module precondition any command could hit.
    pub fn validate(&self) -> Result<()> {
        self.device.validate()?;
        let pulse = self.base_pulse();
        pulse.validate()?;
        let positive = |name: &str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::Config(format!(
                    "{name} must be finite and > 0, got {v}"
                )))
            }
        };
        positive("target_phase_over_pi", self.target_phase_over_pi)?;
        positive("coherence_budget_ns", self.coherence_budget_ns)?;
        if !(1..=MAX_QUBITS).contains(&self.n_qubits) {
            return Err(Error::Config(format!(
                "n_qubits must be in [1, {MAX_QUBITS}], got {}",
                self.n_qubits
            )));
        }
        if self.sigma_over_pi.is_empty() {
            return Err(Error::Config(
                "sigma_over_pi needs at least one value".into(),
            ));
        }
        self.noise_models()?;
        if self.trials < MIN_TRIALS {
            return Err(Error::Config(format!(
                "trials must be >= {MIN_TRIALS}, got {}",
                self.trials
            )));
        }
        if !(2..=MAX_QUBITS).contains(&self.fig3_n_max) {
            return Err(Error::Config(format!(
                "fig3_n_max must be in [2, {MAX_QUBITS}]"
            )));
        }
        if !(self.fig3_sigma_max_over_pi.is_finite() && self.fig3_sigma_max_over_pi >= 0.0) {
            return Err(Error::Config(
                "fig3_sigma_max_over_pi must be finite and >= 0".into(),
            ));
        }
        if self.fig3_sigma_points < 2 {
            return Err(Error::Config("fig3_sigma_points must be >= 2".into()));
        }
        let pattern = self.pattern();
        if let Some(&q) = pattern.iter().find(|&&q| q >= self.n_qubits) {
            return Err(Error::Config(format!(
                "measure_pattern index {q} out of range for {} qubits",
                self.n_qubits
            )));
        }
        let mut sorted = pattern.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != pattern.len() {
            return Err(Error::Config(
                "measure_pattern indices must be distinct".into(),
            ));
        }
        if self.measure_axes.is_empty()
            || (self.measure_axes.len() != 1 && self.measure_axes.len() != pattern.len())
        {
            return Err(Error::Config(format!(
                "measure_axes needs 1 or {} entries, got {}",
                pattern.len(),
                self.measure_axes.len()
            )));
        }
        if self.measure_shots == 0 {
            return Err(Error::Config("measure_shots must be >= 1".into()));
        }
        Ok(())
    }
}

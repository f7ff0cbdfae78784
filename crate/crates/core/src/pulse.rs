//! Trapezoidal detuning pulses and the two-qubit phase they accumulate.
//!
//! The pulse ramps linearly from `eps_low` to `eps_high` in `ramp_up_ns`,
//! holds for `hold_ns`, and ramps back in `ramp_down_ns`. While the detuning
//! is high each nearest-neighbour bond accumulates the conditional phase
//! `φ = ∫ E_cc(t) dt / ħ`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::constants::HBAR_MEV_NS;
use crate::error::{Error, Result};
use crate::physics::{adiabatic_angle, ecc, DeviceParams, EnergyMeV};
use crate::quad;
use crate::roots;
use crate::state::BondPhaseVector;

/// Relative tolerance of the phase quadrature.
pub const PHASE_REL_TOL: f64 = 1e-9;

/// A phase `φ/ħ` in radians.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct PhaseRadians(pub f64);

impl PhaseRadians {
    pub const PI: Self = Self(PI);

    pub fn radians(self) -> f64 {
        self.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DetuningPulse {
    pub ramp_up_ns: f64,
    pub hold_ns: f64,
    pub ramp_down_ns: f64,
    pub eps_low_mev: f64,
    pub eps_high_mev: f64,
}

impl DetuningPulse {
    /// Symmetric trapezoid between `−E_c/2` and `+E_c/2`.
    pub fn symmetric(ramp_ns: f64, hold_ns: f64, dev: &DeviceParams) -> Self {
        Self {
            ramp_up_ns: ramp_ns,
            hold_ns,
            ramp_down_ns: ramp_ns,
            eps_low_mev: dev.eps_low().0,
            eps_high_mev: dev.eps_high().0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let durations = [self.ramp_up_ns, self.hold_ns, self.ramp_down_ns];
        if durations.iter().any(|d| !d.is_finite() || *d < 0.0) {
            return Err(Error::Domain(format!(
                "pulse durations must be finite and >= 0: {durations:?}"
            )));
        }
        if !(self.eps_low_mev.is_finite() && self.eps_high_mev.is_finite()) {
            return Err(Error::Domain("pulse detunings must be finite".into()));
        }
        if self.eps_low_mev >= self.eps_high_mev {
            return Err(Error::Domain(format!(
                "eps_low ({}) must be below eps_high ({})",
                self.eps_low_mev, self.eps_high_mev
            )));
        }
        Ok(())
    }

    /// Total duration `τ₁ + τ₂ + τ₁′`.
    pub fn duration_ns(&self) -> f64 {
        self.ramp_up_ns + self.hold_ns + self.ramp_down_ns
    }

    /// The same pulse played backwards in time.
    pub fn reversed(&self) -> Self {
        Self {
            ramp_up_ns: self.ramp_down_ns,
            ramp_down_ns: self.ramp_up_ns,
            ..*self
        }
    }

    pub fn with_hold(&self, hold_ns: f64) -> Self {
        Self { hold_ns, ..*self }
    }

    /// Piecewise-linear detuning `ε(t)`.
    pub fn detuning_at(&self, t_ns: f64) -> Result<EnergyMeV> {
        let total = self.duration_ns();
        if !(0.0..=total).contains(&t_ns) {
            return Err(Error::Range(format!(
                "t = {t_ns} ns outside pulse [0, {total}] ns"
            )));
        }
        Ok(EnergyMeV(self.detuning_unchecked(t_ns)))
    }

    fn detuning_unchecked(&self, t: f64) -> f64 {
        let (lo, hi) = (self.eps_low_mev, self.eps_high_mev);
        let plateau_end = self.ramp_up_ns + self.hold_ns;
        if t <= 0.0 || t >= self.duration_ns() {
            lo
        } else if t < self.ramp_up_ns {
            lo + (hi - lo) * (t / self.ramp_up_ns)
        } else if t <= plateau_end {
            hi
        } else {
            hi - (hi - lo) * ((t - plateau_end) / self.ramp_down_ns)
        }
    }

    /// Times at which the integrand changes character: the four corners and
    /// the two zero crossings of the detuning, where `sin²θ` switches.
    fn breakpoints(&self) -> Vec<f64> {
        let (lo, hi) = (self.eps_low_mev, self.eps_high_mev);
        let plateau_end = self.ramp_up_ns + self.hold_ns;
        let mut pts = vec![0.0];
        if lo < 0.0 && hi > 0.0 {
            let frac = -lo / (hi - lo);
            pts.push(frac * self.ramp_up_ns);
            pts.push(self.ramp_up_ns);
            pts.push(plateau_end);
            pts.push(plateau_end + (1.0 - frac) * self.ramp_down_ns);
        } else {
            pts.push(self.ramp_up_ns);
            pts.push(plateau_end);
        }
        pts.push(self.duration_ns());
        pts
    }

    /// Warnings for sweeps that are unlikely to be adiabatic: a ramp shorter
    /// than `10ħ/T_c`, or longer than the coherence budget.
    pub fn adiabaticity_warnings(
        &self,
        dev: &DeviceParams,
        coherence_budget_ns: f64,
    ) -> Vec<String> {
        let min_ramp = 10.0 * HBAR_MEV_NS / dev.tunnel_coupling_mev;
        let mut out = Vec::new();
        for (name, ramp) in [
            ("ramp_up", self.ramp_up_ns),
            ("ramp_down", self.ramp_down_ns),
        ] {
            if ramp < min_ramp {
                out.push(format!(
                    "{name} = {ramp} ns is shorter than 10ħ/T_c = {min_ramp:.4} ns; the sweep may not be adiabatic"
                ));
            }
            if ramp > coherence_budget_ns {
                out.push(format!(
                    "{name} = {ramp} ns exceeds the coherence budget of {coherence_budget_ns} ns"
                ));
            }
        }
        out
    }
}

/// Instantaneous phase rate `E_cc(ε)/ħ` in rad/ns.
fn phase_rate(dev: &DeviceParams, eps: f64) -> f64 {
    let theta = adiabatic_angle(EnergyMeV(eps), dev.tunnel_coupling_mev)
        .expect("finite detuning and validated tunnel coupling");
    ecc(dev, theta).0 / HBAR_MEV_NS
}

/// Accumulated bond phase `(1/ħ)∫ E_cc(θ(ε(t))) dt` over the whole pulse.
pub fn phase_integral(pulse: &DetuningPulse, dev: &DeviceParams) -> Result<PhaseRadians> {
    pulse.validate()?;
    dev.validate()?;
    let q = quad::integrate(
        |t| phase_rate(dev, pulse.detuning_unchecked(t)),
        &pulse.breakpoints(),
        PHASE_REL_TOL,
        1e-300,
    );
    Ok(PhaseRadians(q.value))
}

/// Phase rate on the plateau, `E_cc(θ(eps_high))/ħ`.
pub fn plateau_rate(pulse: &DetuningPulse, dev: &DeviceParams) -> f64 {
    phase_rate(dev, pulse.eps_high_mev)
}

/// Hold time `τ₂ ≥ 0` for which a symmetric pulse with ramps `tau1_ns`
/// accumulates `target`.
pub fn solve_hold_time(tau1_ns: f64, dev: &DeviceParams, target: PhaseRadians) -> Result<f64> {
    let base = DetuningPulse::symmetric(tau1_ns, 0.0, dev);
    solve_hold_for(&base, dev, target)
}

/// As [`solve_hold_time`] for an arbitrary pulse shape; `base.hold_ns` is
/// ignored.
pub fn solve_hold_for(
    base: &DetuningPulse,
    dev: &DeviceParams,
    target: PhaseRadians,
) -> Result<f64> {
    let base = base.with_hold(0.0);
    let ramp_only = phase_integral(&base, dev)?.0;
    let target = target.0;
    if !target.is_finite() || target < ramp_only {
        return Err(Error::Unreachable { target, ramp_only });
    }
    if target == ramp_only {
        return Ok(0.0);
    }
    let rate = plateau_rate(&base, dev);
    if rate <= 0.0 {
        return Err(Error::Unreachable { target, ramp_only });
    }

    let residual = |hold: f64| phase_integral(&base.with_hold(hold), dev).map(|p| p.0 - target);
    let mut upper = 2.0 * (target - ramp_only) / rate;
    while residual(upper)? < 0.0 {
        upper *= 2.0;
    }
    let mut failure = None;
    let hold = roots::brent(
        |h| match residual(h) {
            Ok(r) => r,
            Err(e) => {
                failure.get_or_insert(e);
                f64::NAN
            }
        },
        0.0,
        upper,
        1e-15 * upper,
        1e-12 * target,
    )?;
    match failure {
        Some(e) => Err(e),
        None => Ok(hold),
    }
}

/// Per-bond phases of a chain driven by a collective pulse: every bond sees
/// the same `φ`.
pub fn bond_phase_vector(
    pulse: &DetuningPulse,
    dev: &DeviceParams,
    n_qubits: usize,
) -> Result<BondPhaseVector> {
    if n_qubits < 2 {
        return Err(Error::Domain(format!(
            "a chain needs at least 2 qubits for bonds, got {n_qubits}"
        )));
    }
    let phi = phase_integral(pulse, dev)?.0;
    BondPhaseVector::new(vec![phi; n_qubits - 1])
}

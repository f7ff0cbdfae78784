//! WebAssembly bindings for the static demo page in `www/`.
//!
//! Every export returns a flat `Float64Array`; the layout is given on each
//! function. Errors surface as thrown JS strings.

use dqd_cluster::noise::{exact_mean_fidelity, monte_carlo_fidelity};
use dqd_cluster::physics::ecc_at_detuning;
use dqd_cluster::pulse::solve_hold_time;
use dqd_cluster::{DetuningPulse, DeviceParams, EnergyMeV, PhaseNoiseModel, PhaseRadians};
use wasm_bindgen::prelude::*;

fn device(tc_mev: f64, eps_r: f64, a_nm: f64, b_nm: f64) -> Result<DeviceParams, String> {
    let dev = DeviceParams {
        tunnel_coupling_mev: tc_mev,
        relative_permittivity: eps_r,
        intradot_spacing_nm: a_nm,
        intermolecule_spacing_nm: b_nm,
        ..DeviceParams::default()
    };
    dev.validate().map_err(|e| e.to_string())?;
    Ok(dev)
}

pub fn ecc_curve_impl(
    tc_mev: f64,
    eps_r: f64,
    a_nm: f64,
    b_nm: f64,
    points: usize,
) -> Result<Vec<f64>, String> {
    let dev = device(tc_mev, eps_r, a_nm, b_nm)?;
    let (lo, hi) = (dev.eps_low().mev(), dev.eps_high().mev());
    let points = points.max(2);
    let mut out = Vec::with_capacity(2 * points);
    for i in 0..points {
        let eps = lo + (hi - lo) * i as f64 / (points - 1) as f64;
        out.push(eps);
        out.push(
            ecc_at_detuning(&dev, EnergyMeV(eps))
                .map_err(|e| e.to_string())?
                .mev(),
        );
    }
    Ok(out)
}

pub fn pulse_curve_impl(tau1_ns: f64, tc_mev: f64, points: usize) -> Result<Vec<f64>, String> {
    let dev = device(tc_mev, 12.9, 200.0, 2000.0)?;
    let hold = solve_hold_time(tau1_ns, &dev, PhaseRadians::PI).map_err(|e| e.to_string())?;
    let pulse = DetuningPulse::symmetric(tau1_ns, hold, &dev);
    let total = pulse.duration_ns();
    let points = points.max(2);
    let mut out = Vec::with_capacity(1 + 3 * points);
    out.push(hold);
    for i in 0..points {
        let t = total * i as f64 / (points - 1) as f64;
        let eps = pulse.detuning_at(t).map_err(|e| e.to_string())?;
        out.push(t);
        out.push(eps.mev());
        out.push(ecc_at_detuning(&dev, eps).map_err(|e| e.to_string())?.mev());
    }
    Ok(out)
}

fn fidelity_row(
    n: usize,
    sigma_over_pi: f64,
    trials: usize,
    seed: u64,
) -> Result<[f64; 3], String> {
    let model = PhaseNoiseModel::from_sigma_over_pi(sigma_over_pi).map_err(|e| e.to_string())?;
    let mc = monte_carlo_fidelity(n, &model, trials, seed).map_err(|e| e.to_string())?;
    let exact = exact_mean_fidelity(n, &model).map_err(|e| e.to_string())?;
    Ok([mc.mean, mc.standard_error, exact])
}

pub fn fidelity_vs_n_impl(
    sigma_over_pi: f64,
    n_max: usize,
    trials: usize,
    seed: u64,
) -> Result<Vec<f64>, String> {
    let mut out = Vec::new();
    for n in 2..=n_max {
        out.push(n as f64);
        out.extend(fidelity_row(n, sigma_over_pi, trials, seed)?);
    }
    Ok(out)
}

pub fn fidelity_vs_sigma_impl(
    n: usize,
    sigma_max_over_pi: f64,
    points: usize,
    trials: usize,
    seed: u64,
) -> Result<Vec<f64>, String> {
    let points = points.max(2);
    let mut out = Vec::new();
    for i in 0..points {
        let s = sigma_max_over_pi * i as f64 / (points - 1) as f64;
        out.push(s);
        out.extend(fidelity_row(n, s, trials, seed)?);
    }
    Ok(out)
}

/// `[ε₀, E_cc₀, ε₁, E_cc₁, …]` across the pulse detuning range, meV.
#[wasm_bindgen]
pub fn ecc_curve(
    tc_mev: f64,
    eps_r: f64,
    a_nm: f64,
    b_nm: f64,
    points: usize,
) -> Result<Vec<f64>, JsValue> {
    ecc_curve_impl(tc_mev, eps_r, a_nm, b_nm, points).map_err(|e| JsValue::from_str(&e))
}

/// `[hold, t₀, ε₀, E_cc₀, t₁, …]` for the π-calibrated symmetric pulse.
#[wasm_bindgen]
pub fn pulse_curve(tau1_ns: f64, tc_mev: f64, points: usize) -> Result<Vec<f64>, JsValue> {
    pulse_curve_impl(tau1_ns, tc_mev, points).map_err(|e| JsValue::from_str(&e))
}

/// `[n, mc_mean, mc_stderr, exact, …]` for n = 2..=n_max.
#[wasm_bindgen]
pub fn fidelity_vs_n(
    sigma_over_pi: f64,
    n_max: usize,
    trials: usize,
    seed: u64,
) -> Result<Vec<f64>, JsValue> {
    fidelity_vs_n_impl(sigma_over_pi, n_max, trials, seed).map_err(|e| JsValue::from_str(&e))
}

/// `[σ/π, mc_mean, mc_stderr, exact, …]` on an even grid from 0.
#[wasm_bindgen]
pub fn fidelity_vs_sigma(
    n: usize,
    sigma_max_over_pi: f64,
    points: usize,
    trials: usize,
    seed: u64,
) -> Result<Vec<f64>, JsValue> {
    fidelity_vs_sigma_impl(n, sigma_max_over_pi, points, trials, seed)
        .map_err(|e| JsValue::from_str(&e))
}

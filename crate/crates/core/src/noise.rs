//! Gaussian bond-phase noise and cluster-state fidelity estimation.
//!
//! Each bond receives `π + δφ_b` with `δφ_b ~ N(0, σ²)` i.i.d. Fidelity is
//! `|⟨ideal|noisy⟩|²` against [`ideal_cluster`]. Two estimators are provided:
//! a seeded Monte Carlo average and the exact Gaussian average computed by a
//! transfer-matrix contraction.
//!
//! Random numbers come from ChaCha20: trial `t` of a run with base seed `s`
//! draws from `ChaCha20Rng::seed_from_u64(s)` switched to stream `t`, so
//! every trial is independent of evaluation order.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::state::{
    apply_ising_phases, ideal_cluster, init_plus_chain, state_fidelity, BondPhaseVector,
    ChainState, MAX_QUBITS,
};

/// Identifier of the random stream recorded in run manifests.
pub const RNG_ALGORITHM: &str =
    "chacha20(seed_from_u64(base_seed), stream=trial); normal=rand_distr-0.5 StandardNormal*sigma";

/// Minimum Monte Carlo trial count.
pub const MIN_TRIALS: usize = 100;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseNoiseModel {
    /// Standard deviation of `δφ` in radians.
    pub sigma_rad: f64,
}

impl PhaseNoiseModel {
    pub fn new(sigma_rad: f64) -> Result<Self> {
        if !sigma_rad.is_finite() || sigma_rad < 0.0 {
            return Err(Error::Domain(format!(
                "noise sigma must be finite and >= 0, got {sigma_rad}"
            )));
        }
        Ok(Self { sigma_rad })
    }

    pub fn from_sigma_over_pi(sigma_over_pi: f64) -> Result<Self> {
        Self::new(sigma_over_pi * PI)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FidelityEstimate {
    pub mean: f64,
    pub standard_error: f64,
    pub n_trials: usize,
    pub base_seed: u64,
}

/// How a Monte Carlo trial evaluates `|⟨ideal|noisy⟩|²`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FidelityKernel {
    /// Two-component contraction along the chain, `O(n)` per trial.
    #[default]
    Chain,
    /// Full state vectors through the state engine, `O(n·2ⁿ)` per trial.
    Dense,
}

/// Random stream of trial `trial` under `base_seed`.
pub fn trial_rng(base_seed: u64, trial: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(base_seed);
    rng.set_stream(trial);
    rng
}

fn draw_bonds(model: &PhaseNoiseModel, n_bonds: usize, rng: &mut ChaCha20Rng) -> Vec<f64> {
    (0..n_bonds)
        .map(|_| {
            let z: f64 = StandardNormal.sample(rng);
            PI + model.sigma_rad * z
        })
        .collect()
}

/// Bond phases `π + δφ_b` for trial `trial` of a run seeded with `base_seed`.
pub fn sample_trial_bond_errors(
    model: &PhaseNoiseModel,
    n_bonds: usize,
    base_seed: u64,
    trial: u64,
) -> Result<BondPhaseVector> {
    if n_bonds == 0 {
        return Err(Error::Domain("need at least one bond".into()));
    }
    BondPhaseVector::new(draw_bonds(model, n_bonds, &mut trial_rng(base_seed, trial)))
}

/// Bond phases `π + δφ_b` drawn from stream 0 of `seed`.
pub fn sample_bond_errors(
    model: &PhaseNoiseModel,
    n_bonds: usize,
    seed: u64,
) -> Result<BondPhaseVector> {
    sample_trial_bond_errors(model, n_bonds, seed, 0)
}

/// `init_plus_chain(n)` evolved under `bonds`.
pub fn noisy_cluster(n: usize, bonds: &BondPhaseVector) -> Result<ChainState> {
    let mut s = init_plus_chain(n)?;
    apply_ising_phases(&mut s, bonds)?;
    Ok(s)
}

/// `|⟨ideal|noisy⟩|²` where the noisy chain carries bond phases `π + δ_b`.
///
/// The overlap is `2⁻ⁿ Σ_z exp(i Σ_b δ_b z_b z_{b+1})`, contracted left to
/// right with a two-entry vector indexed by the last qubit's bit.
pub fn chain_overlap_fidelity(bond_phases: &[f64]) -> f64 {
    let mut v = [Complex64::new(1.0, 0.0); 2];
    for &phi in bond_phases {
        let w = Complex64::from_polar(1.0, phi - PI);
        let sum = v[0] + v[1];
        v = [sum * 0.5, (v[0] + v[1] * w) * 0.5];
    }
    ((v[0] + v[1]) * 0.5).norm_sqr().min(1.0)
}

fn check_chain(n_qubits: usize) -> Result<()> {
    if !(2..=MAX_QUBITS).contains(&n_qubits) {
        return Err(Error::Capacity(n_qubits));
    }
    Ok(())
}

/// Compensated summation.
fn neumaier_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0;
    let mut comp = 0.0;
    for x in values {
        let t = sum + x;
        if sum.abs() >= x.abs() {
            comp += (sum - t) + x;
        } else {
            comp += (x - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// Monte Carlo fidelity with the default [`FidelityKernel::Chain`].
pub fn monte_carlo_fidelity(
    n_qubits: usize,
    model: &PhaseNoiseModel,
    trials: usize,
    seed: u64,
) -> Result<FidelityEstimate> {
    monte_carlo_fidelity_with(n_qubits, model, trials, seed, FidelityKernel::Chain)
}

/// Mean of per-trial fidelities. Trials run in parallel but are reduced in
/// trial order, so the estimate is bit-identical for fixed inputs.
pub fn monte_carlo_fidelity_with(
    n_qubits: usize,
    model: &PhaseNoiseModel,
    trials: usize,
    seed: u64,
    kernel: FidelityKernel,
) -> Result<FidelityEstimate> {
    check_chain(n_qubits)?;
    if trials < MIN_TRIALS {
        return Err(Error::Domain(format!(
            "need at least {MIN_TRIALS} trials, got {trials}"
        )));
    }
    let ideal = match kernel {
        FidelityKernel::Dense => Some(ideal_cluster(n_qubits)?),
        FidelityKernel::Chain => None,
    };
    let fidelities: Vec<f64> = (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let bonds = draw_bonds(model, n_qubits - 1, &mut trial_rng(seed, t));
            match &ideal {
                None => chain_overlap_fidelity(&bonds),
                Some(ideal) => {
                    let bonds = BondPhaseVector::new(bonds).expect("finite phases");
                    let noisy = noisy_cluster(n_qubits, &bonds).expect("validated size");
                    state_fidelity(ideal, &noisy).expect("equal sizes")
                }
            }
        })
        .collect();

    let count = trials as f64;
    let mean = neumaier_sum(fidelities.iter().copied()) / count;
    let var = neumaier_sum(fidelities.iter().map(|f| (f - mean) * (f - mean))) / (count - 1.0);
    Ok(FidelityEstimate {
        mean: mean.clamp(0.0, 1.0),
        standard_error: (var / count).sqrt(),
        n_trials: trials,
        base_seed: seed,
    })
}

/// Exact Gaussian average of the fidelity,
/// `4⁻ⁿ Σ_{z,z′} exp(−σ² d(z,z′)/2)` with `d` the number of bonds where
/// `z_b z_{b+1} ≠ z′_b z′_{b+1}`.
///
/// The double sum is contracted along the chain over the four joint states
/// `(z_i, z′_i)`, costing `O(n)`.
pub fn exact_mean_fidelity(n_qubits: usize, model: &PhaseNoiseModel) -> Result<f64> {
    check_chain(n_qubits)?;
    let w = (-0.5 * model.sigma_rad * model.sigma_rad).exp();
    // Joint state index: 2·z + z′.
    let weight = |from: usize, to: usize| {
        let (a, a2) = (from >> 1, from & 1);
        let (b, b2) = (to >> 1, to & 1);
        if a * b == a2 * b2 {
            1.0
        } else {
            w
        }
    };
    let mut v = [0.25; 4];
    for _ in 1..n_qubits {
        let mut next = [0.0; 4];
        for (to, slot) in next.iter_mut().enumerate() {
            *slot = 0.25 * (0..4).map(|from| weight(from, to) * v[from]).sum::<f64>();
        }
        v = next;
    }
    Ok(v.iter().sum::<f64>().min(1.0))
}

//! Projective single-molecule readout and measurement scheduling.
//!
//! A measurement along unit axis `n` is an exact single-qubit rotation
//! followed by charge readout. The Bloch sphere is oriented with `|T⟩` at
//! the north pole: outcome `+1` means the molecule stayed in `(1,1)`
//! (triplet, Pauli blockade), `−1` means it moved to `(0,2)` (singlet). In
//! the computational Pauli basis the observable is `n_x X − n_y Y − n_z Z`.
//!
//! Simultaneously pulsing two neighbouring molecules switches on their
//! Ising coupling, so a [`RoundSchedule`] never places adjacent qubits in the
//! same round.

use std::collections::BTreeSet;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::state::{ChainState, NORM_TOL};

pub const AXIS_X: [f64; 3] = [1.0, 0.0, 0.0];
pub const AXIS_Y: [f64; 3] = [0.0, 1.0, 0.0];
pub const AXIS_Z: [f64; 3] = [0.0, 0.0, 1.0];

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeasurementSpec {
    pub qubit: usize,
    pub axis: [f64; 3],
}

impl MeasurementSpec {
    /// The axis must already be a unit vector (to 1e-10).
    pub fn new(qubit: usize, axis: [f64; 3]) -> Result<Self> {
        let norm = axis.iter().map(|c| c * c).sum::<f64>().sqrt();
        if !norm.is_finite() || (norm - 1.0).abs() > 1e-10 {
            return Err(Error::Domain(format!(
                "measurement axis {axis:?} is not a unit vector"
            )));
        }
        Ok(Self { qubit, axis })
    }

    /// Rescales a non-zero axis to unit length.
    pub fn normalized(qubit: usize, axis: [f64; 3]) -> Result<Self> {
        let norm = axis.iter().map(|c| c * c).sum::<f64>().sqrt();
        if !norm.is_finite() || norm == 0.0 {
            return Err(Error::Domain(format!(
                "measurement axis {axis:?} cannot be normalized"
            )));
        }
        Self::new(qubit, axis.map(|c| c / norm))
    }

    pub fn z(qubit: usize) -> Self {
        Self {
            qubit,
            axis: AXIS_Z,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeasurementRecord {
    pub qubit: usize,
    pub axis: [f64; 3],
    /// `+1` triplet / `(1,1)`, `−1` singlet / `(0,2)`.
    pub outcome: i8,
    /// Born probability of the recorded outcome.
    pub probability: f64,
}

/// Projector `(I + s·O)/2` on one qubit as a 2×2 matrix, `s = ±1`.
fn projector(axis: [f64; 3], outcome: i8) -> [[Complex64; 2]; 2] {
    let s = f64::from(outcome.signum());
    let [nx, ny, nz] = axis;
    [
        [
            Complex64::new(0.5 * (1.0 - s * nz), 0.0),
            Complex64::new(0.5 * s * nx, 0.5 * s * ny),
        ],
        [
            Complex64::new(0.5 * s * nx, -0.5 * s * ny),
            Complex64::new(0.5 * (1.0 + s * nz), 0.0),
        ],
    ]
}

fn check(state: &ChainState, spec: &MeasurementSpec) -> Result<()> {
    if spec.qubit >= state.n_qubits() {
        return Err(Error::Range(format!(
            "qubit {} out of range for {} qubits",
            spec.qubit,
            state.n_qubits()
        )));
    }
    let norm = state.norm_sqr();
    if (norm - 1.0).abs() > NORM_TOL {
        return Err(Error::NotNormalized(norm));
    }
    Ok(())
}

fn check_outcome(outcome: i8) -> Result<()> {
    if outcome != 1 && outcome != -1 {
        return Err(Error::Domain(format!(
            "outcome must be +1 or -1, got {outcome}"
        )));
    }
    Ok(())
}

/// Born probability of `outcome` (±1).
pub fn outcome_probability(state: &ChainState, spec: &MeasurementSpec, outcome: i8) -> Result<f64> {
    check(state, spec)?;
    check_outcome(outcome)?;
    Ok(probability_unchecked(state, spec, outcome))
}

fn probability_unchecked(state: &ChainState, spec: &MeasurementSpec, outcome: i8) -> f64 {
    let p = projector(spec.axis, outcome);
    let mask = state.qubit_mask(spec.qubit);
    let amps = state.amplitudes();
    let total: f64 = (0..amps.len())
        .filter(|i| i & mask == 0)
        .map(|i0| {
            let (a0, a1) = (amps[i0], amps[i0 | mask]);
            // ⟨a|P|a⟩ restricted to this pair.
            let b0 = p[0][0] * a0 + p[0][1] * a1;
            let b1 = p[1][0] * a0 + p[1][1] * a1;
            (a0.conj() * b0 + a1.conj() * b1).re
        })
        .sum();
    total.clamp(0.0, 1.0)
}

fn project_in_place(state: &mut ChainState, spec: &MeasurementSpec, outcome: i8, probability: f64) {
    let p = projector(spec.axis, outcome);
    let mask = state.qubit_mask(spec.qubit);
    let scale = 1.0 / probability.sqrt();
    let amps = state.amplitudes_mut();
    for i0 in 0..amps.len() {
        if i0 & mask != 0 {
            continue;
        }
        let (a0, a1) = (amps[i0], amps[i0 | mask]);
        amps[i0] = (p[0][0] * a0 + p[0][1] * a1) * scale;
        amps[i0 | mask] = (p[1][0] * a0 + p[1][1] * a1) * scale;
    }
}

/// Post-measurement state for a forced outcome, with its probability.
/// Fails if the outcome has zero probability.
pub fn project(
    state: &ChainState,
    spec: &MeasurementSpec,
    outcome: i8,
) -> Result<(f64, ChainState)> {
    let probability = outcome_probability(state, spec, outcome)?;
    if probability == 0.0 {
        return Err(Error::Domain(format!(
            "outcome {outcome} has zero probability"
        )));
    }
    let mut post = state.clone();
    project_in_place(&mut post, spec, outcome, probability);
    Ok((probability, post))
}

/// Samples one outcome from `rng` and collapses `state`.
pub fn measure_in_place<R: Rng + ?Sized>(
    state: &mut ChainState,
    spec: &MeasurementSpec,
    rng: &mut R,
) -> Result<MeasurementRecord> {
    check(state, spec)?;
    let p_plus = probability_unchecked(state, spec, 1);
    let u: f64 = rng.random();
    let (outcome, probability) = if u < p_plus {
        (1, p_plus)
    } else {
        (-1, 1.0 - p_plus)
    };
    project_in_place(state, spec, outcome, probability);
    Ok(MeasurementRecord {
        qubit: spec.qubit,
        axis: spec.axis,
        outcome,
        probability,
    })
}

/// Seeded single measurement returning the record and the collapsed state.
pub fn measure(
    state: &ChainState,
    spec: &MeasurementSpec,
    seed: u64,
) -> Result<(MeasurementRecord, ChainState)> {
    let mut post = state.clone();
    let record = measure_in_place(&mut post, spec, &mut ChaCha20Rng::seed_from_u64(seed))?;
    Ok((record, post))
}

/// Ordered measurement rounds; no round holds two adjacent qubits.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundSchedule {
    rounds: Vec<Vec<usize>>,
}

impl RoundSchedule {
    pub fn rounds(&self) -> &[Vec<usize>] {
        &self.rounds
    }

    pub fn is_empty(&self) -> bool {
        self.rounds.is_empty()
    }

    /// `(round, qubit)` pairs in execution order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.rounds
            .iter()
            .enumerate()
            .flat_map(|(r, qs)| qs.iter().map(move |&q| (r, q)))
    }

    /// Checks exclusion, uniqueness and range against an `n_qubits` chain.
    pub fn validate(&self, n_qubits: usize) -> Result<()> {
        let mut seen = BTreeSet::new();
        for round in &self.rounds {
            for (i, &q) in round.iter().enumerate() {
                if q >= n_qubits {
                    return Err(Error::Range(format!(
                        "scheduled qubit {q} out of range for {n_qubits} qubits"
                    )));
                }
                if !seen.insert(q) {
                    return Err(Error::Domain(format!("qubit {q} scheduled twice")));
                }
                if round[..i].iter().any(|&p| p.abs_diff(q) == 1) {
                    return Err(Error::Domain(format!(
                        "adjacent qubit {q} shares a round with a neighbour"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Two-colours the requested qubits of the path: one round when no two are
/// adjacent, otherwise evens (plus isolated odds) then the remaining odds.
pub fn schedule_rounds(requested: impl IntoIterator<Item = usize>) -> RoundSchedule {
    let set: BTreeSet<usize> = requested.into_iter().collect();
    if set.is_empty() {
        return RoundSchedule::default();
    }
    let has_neighbour = |q: usize| (q > 0 && set.contains(&(q - 1))) || set.contains(&(q + 1));
    let (first, second): (Vec<usize>, Vec<usize>) =
        set.iter().partition(|&&q| q % 2 == 0 || !has_neighbour(q));
    let mut rounds = vec![first];
    if !second.is_empty() {
        rounds.push(second);
    }
    RoundSchedule { rounds }
}

/// Executes `schedule` round by round, ascending qubit order within a round.
/// `axes[q]` is the measurement axis of qubit `q`.
pub fn run_schedule(
    state: &mut ChainState,
    schedule: &RoundSchedule,
    axes: &[[f64; 3]],
    seed: u64,
) -> Result<Vec<MeasurementRecord>> {
    run_schedule_with_rng(state, schedule, axes, &mut ChaCha20Rng::seed_from_u64(seed))
}

/// As [`run_schedule`], drawing outcomes from `rng`.
pub fn run_schedule_with_rng<R: Rng + ?Sized>(
    state: &mut ChainState,
    schedule: &RoundSchedule,
    axes: &[[f64; 3]],
    rng: &mut R,
) -> Result<Vec<MeasurementRecord>> {
    schedule.validate(state.n_qubits())?;
    let mut records = Vec::new();
    for (_, q) in schedule.iter() {
        let axis = *axes
            .get(q)
            .ok_or_else(|| Error::Range(format!("no measurement axis given for qubit {q}")))?;
        let spec = MeasurementSpec::new(q, axis)?;
        records.push(measure_in_place(state, &spec, rng)?);
    }
    Ok(records)
}

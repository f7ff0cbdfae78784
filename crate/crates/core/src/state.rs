//! Dense state vector of an `n`-molecule chain.
//!
//! Basis convention: `|0⟩ = |S⟩`, `|1⟩ = |T⟩`. Qubit 0 is the leftmost
//! molecule and the most significant bit of the amplitude index, so basis
//! index `z` has qubit `q` in state `(z >> (n − 1 − q)) & 1`.

use std::fmt::Write as _;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest chain held densely (2²⁴ amplitudes, 256 MiB).
pub const MAX_QUBITS: usize = 24;

/// Tolerance on `Σ|amplitude|² = 1`.
pub const NORM_TOL: f64 = 1e-10;

/// Conditional phase accumulated on each nearest-neighbour bond; entry `b`
/// couples qubits `b` and `b + 1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BondPhaseVector(Vec<f64>);

impl BondPhaseVector {
    pub fn new(phases: Vec<f64>) -> Result<Self> {
        if phases.iter().any(|p| !p.is_finite()) {
            return Err(Error::Domain("bond phases must be finite".into()));
        }
        Ok(Self(phases))
    }

    /// `n_bonds` copies of `phase`.
    pub fn uniform(n_bonds: usize, phase: f64) -> Result<Self> {
        Self::new(vec![phase; n_bonds])
    }

    pub fn phases(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ChainState {
    n_qubits: usize,
    amplitudes: Vec<Complex64>,
}

fn check_capacity(n: usize) -> Result<()> {
    if n == 0 || n > MAX_QUBITS {
        return Err(Error::Capacity(n));
    }
    Ok(())
}

impl ChainState {
    /// Wraps raw amplitudes; the length must be a power of two within the
    /// capacity limit and the vector must be normalized.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        let len = amplitudes.len();
        if !len.is_power_of_two() {
            return Err(Error::Domain(format!(
                "amplitude count {len} is not a power of two"
            )));
        }
        let n = len.trailing_zeros() as usize;
        check_capacity(n)?;
        let state = Self {
            n_qubits: n,
            amplitudes,
        };
        let norm = state.norm_sqr();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(norm));
        }
        Ok(state)
    }

    /// Computational basis state `|index⟩`.
    pub fn basis(n: usize, index: usize) -> Result<Self> {
        check_capacity(n)?;
        if index >= 1 << n {
            return Err(Error::Range(format!(
                "basis index {index} out of range for {n} qubits"
            )));
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); 1 << n];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Ok(Self {
            n_qubits: n,
            amplitudes,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub(crate) fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Bit mask of qubit `q` in the amplitude index.
    pub fn qubit_mask(&self, q: usize) -> usize {
        1 << (self.n_qubits - 1 - q)
    }

    /// Multiplies every amplitude by the unit scalar `e^{iα}`.
    pub fn with_global_phase(mut self, alpha: f64) -> Self {
        let w = Complex64::from_polar(1.0, alpha);
        self.amplitudes.iter_mut().for_each(|a| *a *= w);
        self
    }

    /// CSV dump with columns `index,real,imag`; the header names the bit
    /// order.
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(self.amplitudes.len() * 56 + 64);
        out.push_str("index(qubit0=msb),real,imag\n");
        for (i, a) in self.amplitudes.iter().enumerate() {
            let _ = writeln!(out, "{i},{:.16e},{:.16e}", a.re, a.im);
        }
        out
    }
}

/// Product state with every molecule in `(|0⟩ + |1⟩)/√2`, the idealized
/// `|↑↓⟩` initialization.
pub fn init_plus_chain(n: usize) -> Result<ChainState> {
    check_capacity(n)?;
    let amp = Complex64::new((-(n as f64) / 2.0).exp2(), 0.0);
    Ok(ChainState {
        n_qubits: n,
        amplitudes: vec![amp; 1 << n],
    })
}

/// Diagonal Ising evolution: basis state `z` acquires
/// `exp(i Σ_b φ_b z_b z_{b+1})`.
pub fn apply_ising_phases(state: &mut ChainState, bonds: &BondPhaseVector) -> Result<()> {
    let n = state.n_qubits;
    let expected = n.saturating_sub(1);
    if bonds.len() != expected {
        return Err(Error::SizeMismatch {
            expected,
            actual: bonds.len(),
        });
    }
    if n < 2 {
        return Ok(());
    }
    let phases = bonds.phases();
    for (idx, amp) in state.amplitudes.iter_mut().enumerate() {
        // Bit k of `pairs` is set when bits k and k+1 of idx are both 1,
        // i.e. bond b = n − 2 − k is doubly excited.
        let mut pairs = idx & (idx >> 1);
        if pairs == 0 {
            continue;
        }
        let mut total = 0.0;
        while pairs != 0 {
            let k = pairs.trailing_zeros() as usize;
            total += phases[n - 2 - k];
            pairs &= pairs - 1;
        }
        *amp *= Complex64::from_polar(1.0, total);
    }
    Ok(())
}

/// Linear cluster state `(1/2^{n/2}) Σ_z (−1)^{Σ_b z_b z_{b+1}} |z⟩`.
pub fn ideal_cluster(n: usize) -> Result<ChainState> {
    check_capacity(n)?;
    let amp = (-(n as f64) / 2.0).exp2();
    let amplitudes = (0..1usize << n)
        .map(|idx| {
            let pairs = (idx & (idx >> 1)).count_ones();
            Complex64::new(if pairs % 2 == 0 { amp } else { -amp }, 0.0)
        })
        .collect();
    Ok(ChainState {
        n_qubits: n,
        amplitudes,
    })
}

/// `⟨X_site Z_{site−1} Z_{site+1}⟩`, neighbours outside the chain omitted.
pub fn stabilizer_expectation(state: &ChainState, site: usize) -> Result<f64> {
    let n = state.n_qubits;
    if site >= n {
        return Err(Error::Range(format!(
            "site {site} out of range for {n} qubits"
        )));
    }
    let flip = state.qubit_mask(site);
    let mut z_mask = 0;
    if site > 0 {
        z_mask |= state.qubit_mask(site - 1);
    }
    if site + 1 < n {
        z_mask |= state.qubit_mask(site + 1);
    }
    let amps = &state.amplitudes;
    let value: f64 = amps
        .iter()
        .enumerate()
        .map(|(idx, a)| {
            let term = amps[idx ^ flip].conj() * a;
            if (idx & z_mask).count_ones() % 2 == 0 {
                term.re
            } else {
                -term.re
            }
        })
        .sum();
    Ok(value)
}

/// All `n` stabilizer expectations in site order.
pub fn stabilizer_expectations(state: &ChainState) -> Vec<f64> {
    (0..state.n_qubits)
        .map(|s| stabilizer_expectation(state, s).expect("site in range"))
        .collect()
}

/// `|⟨a|b⟩|²`.
pub fn state_fidelity(a: &ChainState, b: &ChainState) -> Result<f64> {
    if a.n_qubits != b.n_qubits {
        return Err(Error::SizeMismatch {
            expected: a.n_qubits,
            actual: b.n_qubits,
        });
    }
    let overlap: Complex64 = a
        .amplitudes
        .iter()
        .zip(&b.amplitudes)
        .map(|(x, y)| x.conj() * y)
        .sum();
    Ok(overlap.norm_sqr().min(1.0))
}

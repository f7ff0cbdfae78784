//! Independent oracles shared by the integration tests. Nothing here calls
//! into the implementation paths being checked.
#![allow(dead_code)]

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;

pub const COULOMB_MEV_NM: f64 = 1439.96;
pub const HBAR_MEV_NS: f64 = 6.582119e-4;

pub fn golden() -> BTreeMap<String, f64> {
    let text = include_str!("../golden/hand_values.txt");
    text.lines()
        .filter(|l| !l.starts_with('#') && !l.trim().is_empty())
        .map(|l| {
            let (k, v) = l.split_once('=').unwrap();
            (k.trim().to_string(), v.trim().parse().unwrap())
        })
        .collect()
}

pub fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

/// Closed-form singlet admixture `½(1 + ε/√(ε² + 4T²))`.
pub fn admixture_closed(eps: f64, tc: f64) -> f64 {
    0.5 * (1.0 + eps / (eps * eps + 4.0 * tc * tc).sqrt())
}

/// `E_cc` straight from the Coulomb formula.
pub fn ecc_direct(eps: f64, tc: f64, a: f64, b: f64, eps_r: f64) -> f64 {
    admixture_closed(eps, tc) * COULOMB_MEV_NM / eps_r * (2.0 / b - 2.0 / (a * a + b * b).sqrt())
}

/// Trapezoidal pulse detuning evaluated independently.
pub fn detuning(t: f64, up: f64, hold: f64, down: f64, lo: f64, hi: f64) -> f64 {
    if t < up {
        lo + (hi - lo) * t / up
    } else if t <= up + hold {
        hi
    } else {
        let s = (t - up - hold) / down;
        hi + (lo - hi) * s.min(1.0)
    }
}

/// Fixed-step trapezoid rule.
pub fn trapezoid(f: impl Fn(f64) -> f64, lo: f64, hi: f64, steps: usize) -> f64 {
    if hi <= lo {
        return 0.0;
    }
    let h = (hi - lo) / steps as f64;
    let mut sum = 0.5 * (f(lo) + f(hi));
    for i in 1..steps {
        sum += f(lo + h * i as f64);
    }
    sum * h
}

/// Bond phase of a symmetric-default-device pulse by brute-force trapezoid.
#[allow(clippy::too_many_arguments)]
pub fn phase_oracle(
    up: f64,
    hold: f64,
    down: f64,
    tc: f64,
    a: f64,
    b: f64,
    eps_r: f64,
    ec: f64,
    steps: usize,
) -> f64 {
    let (lo, hi) = (-ec / 2.0, ec / 2.0);
    let total = up + hold + down;
    trapezoid(
        |t| ecc_direct(detuning(t, up, hold, down, lo, hi), tc, a, b, eps_r) / HBAR_MEV_NS,
        0.0,
        total,
        steps,
    )
}

pub type CMat = DMatrix<Complex64>;

pub fn kron(a: &CMat, b: &CMat) -> CMat {
    a.kronecker(b)
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// `Σ_b φ_b (1−Z_b)/2 (1−Z_{b+1})/2` built from Kronecker products, qubit 0
/// leftmost.
pub fn ising_hamiltonian(n: usize, phases: &[f64]) -> CMat {
    let id = CMat::identity(2, 2);
    let proj1 = CMat::from_row_slice(2, 2, &[c(0.0), c(0.0), c(0.0), c(1.0)]);
    let dim = 1 << n;
    let mut h = CMat::zeros(dim, dim);
    for (b, &phi) in phases.iter().enumerate() {
        let mut term = CMat::identity(1, 1);
        for q in 0..n {
            let factor = if q == b || q == b + 1 { &proj1 } else { &id };
            term = kron(&term, factor);
        }
        h += term * c(phi);
    }
    h
}

/// Dense matrix exponential by scaling and squaring of a Taylor series.
pub fn expm(m: &CMat) -> CMat {
    let norm: f64 = m.iter().map(|z| z.norm()).sum::<f64>().max(1e-300);
    let squarings = (norm / 0.25).log2().ceil().max(0.0) as u32;
    let scaled = m * c(0.5f64.powi(squarings as i32));
    let dim = m.nrows();
    let mut result = CMat::identity(dim, dim);
    let mut term = CMat::identity(dim, dim);
    for k in 1..=30 {
        term = &term * &scaled * c(1.0 / k as f64);
        result += &term;
    }
    for _ in 0..squarings {
        result = &result * &result;
    }
    result
}

/// `exp(iH)` applied to a vector.
pub fn evolve_dense(n: usize, phases: &[f64], input: &[Complex64]) -> Vec<Complex64> {
    let h = ising_hamiltonian(n, phases) * Complex64::new(0.0, 1.0);
    let u = expm(&h);
    let v = nalgebra::DVector::from_column_slice(input);
    (u * v).iter().copied().collect()
}

pub fn pauli(name: char) -> CMat {
    let i = Complex64::new(0.0, 1.0);
    match name {
        'I' => CMat::identity(2, 2),
        'X' => CMat::from_row_slice(2, 2, &[c(0.0), c(1.0), c(1.0), c(0.0)]),
        'Y' => CMat::from_row_slice(2, 2, &[c(0.0), -i, i, c(0.0)]),
        'Z' => CMat::from_row_slice(2, 2, &[c(1.0), c(0.0), c(0.0), c(-1.0)]),
        _ => unreachable!(),
    }
}

/// Dense Pauli string, one letter per qubit (qubit 0 first).
pub fn pauli_string(letters: &str) -> CMat {
    letters
        .chars()
        .fold(CMat::identity(1, 1), |acc, p| kron(&acc, &pauli(p)))
}

pub fn expectation(op: &CMat, psi: &[Complex64]) -> f64 {
    let v = nalgebra::DVector::from_column_slice(psi);
    (v.adjoint() * op * &v)[(0, 0)].re
}

/// `4⁻ⁿ Σ_{z,z′} exp(−σ² d(z,z′)/2)` by direct enumeration.
pub fn mean_fidelity_enumeration(n: usize, sigma: f64) -> f64 {
    let w = (-0.5 * sigma * sigma).exp();
    let dim = 1usize << n;
    let bonds = |z: usize| -> Vec<bool> {
        (0..n - 1)
            .map(|b| {
                let bit = |q: usize| (z >> (n - 1 - q)) & 1 == 1;
                bit(b) && bit(b + 1)
            })
            .collect()
    };
    let table: Vec<Vec<bool>> = (0..dim).map(bonds).collect();
    let mut total = 0.0;
    for z in 0..dim {
        for z2 in 0..dim {
            let d = table[z]
                .iter()
                .zip(&table[z2])
                .filter(|(x, y)| x != y)
                .count();
            total += w.powi(d as i32);
        }
    }
    total / (dim * dim) as f64
}

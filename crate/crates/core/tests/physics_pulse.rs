mod common;

use std::f64::consts::PI;

use common::{golden, phase_oracle, rel};
use dqd_cluster::physics::{
    adiabatic_angle, coulomb_background, coulomb_singlet_pair, ecc, nnn_crosstalk_ratio,
    singlet_admixture, AdiabaticAngle, DeviceParams, EnergyMeV,
};
use dqd_cluster::pulse::{
    bond_phase_vector, phase_integral, plateau_rate, solve_hold_time, DetuningPulse, PhaseRadians,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn energies_match_hand_evaluation() {
    let g = golden();
    let d = DeviceParams::default();
    assert!(rel(coulomb_background(&d).0, g["coulomb_background_mev"]) < 1e-12);
    assert!(rel(coulomb_singlet_pair(&d).0, g["coulomb_singlet_pair_mev"]) < 1e-12);
    assert!(rel(ecc(&d, AdiabaticAngle::RIGHT).0, g["ecc_max_mev"]) < 1e-12);
    assert!(rel(nnn_crosstalk_ratio(&d), g["nnn_crosstalk_ratio"]) < 1e-12);
    assert!((coulomb_background(&d).0 - 0.2228).abs() < 2e-4);
    assert!(rel(ecc(&d, AdiabaticAngle::RIGHT).0, 5.54e-4) < 0.005);
}

#[test]
fn admixture_is_pinned_at_sweep_endpoints() {
    let d = DeviceParams::default();
    let low = singlet_admixture(adiabatic_angle(d.eps_low(), d.tunnel_coupling_mev).unwrap());
    let high = singlet_admixture(adiabatic_angle(d.eps_high(), d.tunnel_coupling_mev).unwrap());
    assert!(low <= 1e-4, "{low}");
    assert!(high >= 0.999, "{high}");
}

fn scaled(d: &DeviceParams, s: f64) -> DeviceParams {
    DeviceParams {
        intradot_spacing_nm: d.intradot_spacing_nm * s,
        intermolecule_spacing_nm: d.intermolecule_spacing_nm * s,
        ..*d
    }
}

proptest! {
    #[test]
    fn energies_scale_as_inverse_distance(s in 0.05f64..50.0, a in 10.0f64..500.0, ratio in 2.0f64..40.0) {
        let d = DeviceParams { intradot_spacing_nm: a, intermolecule_spacing_nm: a * ratio, ..DeviceParams::default() };
        let big = scaled(&d, s);
        prop_assert!(rel(coulomb_background(&big).0 * s, coulomb_background(&d).0) < 1e-12);
        prop_assert!(rel(coulomb_singlet_pair(&big).0 * s, coulomb_singlet_pair(&d).0) < 1e-12);
        prop_assert!(rel(ecc(&big, AdiabaticAngle::RIGHT).0 * s, ecc(&d, AdiabaticAngle::RIGHT).0) < 1e-12);
    }

    #[test]
    // The subtraction route loses ~log10(b²/a²) digits, so keep b/a moderate.
    fn ecc_is_the_singlet_pair_excess(a in 10.0f64..500.0, ratio in 2.0f64..12.0, eps_r in 1.0f64..20.0) {
        let d = DeviceParams {
            intradot_spacing_nm: a,
            intermolecule_spacing_nm: a * ratio,
            relative_permittivity: eps_r,
            ..DeviceParams::default()
        };
        let diff = coulomb_singlet_pair(&d).0 - coulomb_background(&d).0;
        prop_assert!(rel(ecc(&d, AdiabaticAngle::RIGHT).0, diff) < 1e-12);
    }

    #[test]
    fn angle_is_monotone(e1 in -10.0f64..10.0, e2 in -10.0f64..10.0, tc in 1e-4f64..1.0) {
        let (lo, hi) = if e1 <= e2 { (e1, e2) } else { (e2, e1) };
        let t_lo = adiabatic_angle(EnergyMeV(lo), tc).unwrap().radians();
        let t_hi = adiabatic_angle(EnergyMeV(hi), tc).unwrap().radians();
        prop_assert!(t_lo <= t_hi);
    }
}

#[test]
fn sharp_passage_window() {
    let d = DeviceParams::default();
    let tau1 = 1.0;
    let pulse = DetuningPulse::symmetric(tau1, 0.0, &d);
    let ecc_max = ecc(&d, AdiabaticAngle::RIGHT).0;
    let level = |t: f64| {
        ecc(
            &d,
            adiabatic_angle(pulse.detuning_at(t).unwrap(), d.tunnel_coupling_mev).unwrap(),
        )
        .0 / ecc_max
    };
    // First crossing times of a level on the up-ramp, found on a fine grid.
    let crossing = |target: f64| {
        let steps = 1_000_000;
        (0..=steps)
            .map(|i| tau1 * i as f64 / steps as f64)
            .find(|&t| level(t) >= target)
            .unwrap()
    };
    let w_outer = crossing(0.999) - crossing(1e-4);
    // Analytic: |ε| from 100·T_c/√(1 − 1e-4)·… to 31.6·T_c, over a 5 meV ramp.
    let tc = d.tunnel_coupling_mev;
    let eps_of = |p: f64| {
        let x: f64 = 2.0 * p - 1.0;
        2.0 * tc * x / (1.0 - x * x).sqrt()
    };
    let analytic = (eps_of(0.999) - eps_of(1e-4)) / d.charging_energy_mev * tau1;
    assert!((w_outer - analytic).abs() < 2e-6, "{w_outer} vs {analytic}");
    assert!((analytic - 0.263).abs() < 0.001);
    // The bulk of the switch is sharp on the ramp scale.
    let w_core = crossing(0.8) - crossing(0.2);
    assert!(w_core <= 1e-2 * tau1, "{w_core}");
}

#[test]
fn ramp_only_phase_matches_trapezoid_oracle() {
    let g = golden();
    let d = DeviceParams::default();
    let phi = phase_integral(&DetuningPulse::symmetric(1.0, 0.0, &d), &d)
        .unwrap()
        .0;
    let oracle = phase_oracle(1.0, 0.0, 1.0, 0.01, 200.0, 2000.0, 12.9, 5.0, 1_000_000);
    assert!(rel(phi, oracle) < 1e-6, "{phi} vs {oracle}");
    // Golden value is one ramp; the pulse has two.
    assert!(rel(phi, 2.0 * g["ramp_phase_tau1_1"]) < 1e-9);
}

#[test]
fn adaptive_quadrature_matches_fine_trapezoid_on_random_pulses() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..5 {
        let d = DeviceParams {
            tunnel_coupling_mev: rng.random_range(0.005..0.05),
            intermolecule_spacing_nm: rng.random_range(800.0..3000.0),
            ..DeviceParams::default()
        };
        let up = rng.random_range(0.1..3.0);
        let hold = rng.random_range(0.0..5.0);
        let down = rng.random_range(0.1..3.0);
        let pulse = DetuningPulse {
            ramp_up_ns: up,
            hold_ns: hold,
            ramp_down_ns: down,
            ..DetuningPulse::symmetric(0.0, 0.0, &d)
        };
        let phi = phase_integral(&pulse, &d).unwrap().0;
        let oracle = phase_oracle(
            up,
            hold,
            down,
            d.tunnel_coupling_mev,
            d.intradot_spacing_nm,
            d.intermolecule_spacing_nm,
            d.relative_permittivity,
            d.charging_energy_mev,
            10_000_000,
        );
        assert!(rel(phi, oracle) < 1e-6, "{pulse:?}: {phi} vs {oracle}");
    }
}

#[test]
fn phase_is_additive_in_the_plateau() {
    let d = DeviceParams::default();
    let p = DetuningPulse::symmetric(1.0, 1.3, &d);
    let phi1 = phase_integral(&p, &d).unwrap().0;
    let phi2 = phase_integral(&p.with_hold(2.6), &d).unwrap().0;
    assert!(rel(phi2 - phi1, 1.3 * plateau_rate(&p, &d)) < 1e-9);
    let literal = 1.3 * ecc(&d, AdiabaticAngle::RIGHT).0 / common::HBAR_MEV_NS;
    assert!(rel(phi2 - phi1, literal) < 1e-4);
}

#[test]
fn phase_strictly_increases_with_hold() {
    let d = DeviceParams::default();
    let base = DetuningPulse::symmetric(0.7, 0.0, &d);
    let mut prev = -1.0;
    for i in 0..40 {
        let phi = phase_integral(&base.with_hold(0.1 * i as f64), &d)
            .unwrap()
            .0;
        assert!(phi > prev);
        prev = phi;
    }
}

#[test]
fn time_reversed_pulse_accumulates_same_phase() {
    let d = DeviceParams::default();
    let p = DetuningPulse {
        ramp_up_ns: 0.4,
        hold_ns: 1.7,
        ramp_down_ns: 2.3,
        ..DetuningPulse::symmetric(0.0, 0.0, &d)
    };
    let fwd = phase_integral(&p, &d).unwrap().0;
    let rev = phase_integral(&p.reversed(), &d).unwrap().0;
    assert!(rel(fwd, rev) < 1e-12);
}

#[test]
fn hold_time_against_golden_values() {
    let g = golden();
    let d = DeviceParams::default();
    let h0 = solve_hold_time(0.0, &d, PhaseRadians::PI).unwrap();
    // The golden value uses the saturated E_cc(π/2); the plateau runs at sin²θ(E_c/2) of it.
    assert!(rel(h0, g["hold_ns_tau1_0"]) < 2e-5, "{h0}");
    let h1 = solve_hold_time(1.0, &d, PhaseRadians::PI).unwrap();
    assert!(rel(h1, g["hold_ns_tau1_1"]) < 2e-5, "{h1}");
}

#[test]
fn calibrated_bonds_are_all_pi() {
    let d = DeviceParams::default();
    let hold = solve_hold_time(1.0, &d, PhaseRadians::PI).unwrap();
    let bonds = bond_phase_vector(&DetuningPulse::symmetric(1.0, hold, &d), &d, 5).unwrap();
    assert_eq!(bonds.len(), 4);
    for &phi in bonds.phases() {
        assert!((phi - PI).abs() < 1e-6 * PI);
    }
}

//! Closed-form device physics of a double-dot molecule chain.
//!
//! All Coulomb energies share the prefactor `e²/(4πϵ₀ϵ_r)`; the 4×4 diagonal
//! interaction Hamiltonians of a molecule pair are represented only by their
//! two distinct entries, the background `H_int0` (any pair containing `|T⟩`)
//! and `H_S′S′` (both molecules in the `(0,2)` singlet).

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use crate::constants::{COULOMB_MEV_NM, GAAS_RELATIVE_PERMITTIVITY};
use crate::error::{Error, Result};

/// An energy in meV.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct EnergyMeV(pub f64);

impl EnergyMeV {
    pub fn mev(self) -> f64 {
        self.0
    }
}

/// Geometry and electrostatics of the molecule chain.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DeviceParams {
    /// Dot radius `r`.
    pub dot_radius_nm: f64,
    /// Distance `a` between the two dots of one molecule.
    pub intradot_spacing_nm: f64,
    /// Distance `b` between nearest-neighbour molecules.
    pub intermolecule_spacing_nm: f64,
    /// Relative permittivity of the host material.
    pub relative_permittivity: f64,
    /// Interdot tunnel coupling `T_c`.
    pub tunnel_coupling_mev: f64,
    /// Charging energy `E_c`; the detuning is swept between `±E_c/2`.
    pub charging_energy_mev: f64,
}

impl Default for DeviceParams {
    fn default() -> Self {
        let r = 100.0;
        let a = 2.0 * r;
        Self {
            dot_radius_nm: r,
            intradot_spacing_nm: a,
            intermolecule_spacing_nm: 10.0 * a,
            relative_permittivity: GAAS_RELATIVE_PERMITTIVITY,
            tunnel_coupling_mev: 0.01,
            charging_energy_mev: 5.0,
        }
    }
}

impl DeviceParams {
    /// Checks the structural invariants. `a = 0` is accepted as the
    /// degenerate single-site limit.
    pub fn validate(&self) -> Result<()> {
        let finite = [
            self.dot_radius_nm,
            self.intradot_spacing_nm,
            self.intermolecule_spacing_nm,
            self.relative_permittivity,
            self.tunnel_coupling_mev,
            self.charging_energy_mev,
        ]
        .iter()
        .all(|v| v.is_finite());
        if !finite {
            return Err(Error::Domain("device parameters must be finite".into()));
        }
        if self.dot_radius_nm <= 0.0 || self.intermolecule_spacing_nm <= 0.0 {
            return Err(Error::Domain(
                "dot radius and molecule spacing must be > 0".into(),
            ));
        }
        if self.intradot_spacing_nm < 0.0 {
            return Err(Error::Domain("intradot spacing must be >= 0".into()));
        }
        if self.intermolecule_spacing_nm <= self.intradot_spacing_nm {
            return Err(Error::Domain(format!(
                "molecules overlap: b = {} nm must exceed a = {} nm",
                self.intermolecule_spacing_nm, self.intradot_spacing_nm
            )));
        }
        if self.relative_permittivity <= 0.0 {
            return Err(Error::Domain("relative permittivity must be > 0".into()));
        }
        if self.tunnel_coupling_mev <= 0.0 {
            return Err(Error::Domain("tunnel coupling T_c must be > 0".into()));
        }
        if self.charging_energy_mev <= 0.0 {
            return Err(Error::Domain("charging energy E_c must be > 0".into()));
        }
        Ok(())
    }

    /// `e²/(4πϵ)` in meV·nm.
    pub fn coulomb_prefactor(&self) -> f64 {
        COULOMB_MEV_NM / self.relative_permittivity
    }

    /// Lower sweep endpoint `−E_c/2`.
    pub fn eps_low(&self) -> EnergyMeV {
        EnergyMeV(-0.5 * self.charging_energy_mev)
    }

    /// Upper sweep endpoint `+E_c/2`.
    pub fn eps_high(&self) -> EnergyMeV {
        EnergyMeV(0.5 * self.charging_energy_mev)
    }
}

/// Magnitude of the adiabatic mixing angle, kept in `[0, π/2]`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct AdiabaticAngle(f64);

impl AdiabaticAngle {
    pub const ZERO: Self = Self(0.0);
    pub const RIGHT: Self = Self(FRAC_PI_2);

    pub fn new(theta_rad: f64) -> Result<Self> {
        if !(0.0..=FRAC_PI_2).contains(&theta_rad) {
            return Err(Error::Domain(format!(
                "adiabatic angle {theta_rad} outside [0, π/2]"
            )));
        }
        Ok(Self(theta_rad))
    }

    pub fn radians(self) -> f64 {
        self.0
    }
}

/// Adiabatic angle `θ = arctan(2T_c / (ε − √(4T_c² + ε²)))`, folded to its
/// magnitude.
///
/// The raw arctangent is negative for every `ε` (the denominator is always
/// negative), so folding maps `ε → −∞` to `0` and `ε → +∞` to `π/2`.
pub fn adiabatic_angle(epsilon: EnergyMeV, tc_mev: f64) -> Result<AdiabaticAngle> {
    let eps = epsilon.0;
    if !eps.is_finite() || !tc_mev.is_finite() {
        return Err(Error::Domain(
            "detuning and tunnel coupling must be finite".into(),
        ));
    }
    if tc_mev <= 0.0 {
        return Err(Error::Domain(format!(
            "tunnel coupling must be > 0, got {tc_mev}"
        )));
    }
    let root = (2.0 * tc_mev).hypot(eps);
    // For ε > 0 the difference ε − root cancels; use the conjugate form.
    let denom = if eps <= 0.0 {
        eps - root
    } else {
        -4.0 * tc_mev * tc_mev / (eps + root)
    };
    let theta = (2.0 * tc_mev / denom).atan().abs();
    Ok(AdiabaticAngle(theta.min(FRAC_PI_2)))
}

/// Weight `sin²θ` of the `(0,2)` singlet in the adiabatic state.
pub fn singlet_admixture(theta: AdiabaticAngle) -> f64 {
    let s = theta.0.sin();
    s * s
}

/// `2/d − 2/√(a² + d²)` in nm⁻¹, evaluated without cancellation.
fn dipole_bracket(a: f64, d: f64) -> f64 {
    let c = a.hypot(d);
    2.0 * a * a / (d * c * (c + d))
}

/// Background interaction `H_int0 = (e²/4πϵ)(2/b + 2/√(a² + b²))` shared by
/// `|TT⟩`, `|TS′⟩` and `|S′T⟩`.
pub fn coulomb_background(dev: &DeviceParams) -> EnergyMeV {
    let a = dev.intradot_spacing_nm;
    let b = dev.intermolecule_spacing_nm;
    EnergyMeV(dev.coulomb_prefactor() * (2.0 / b + 2.0 / a.hypot(b)))
}

/// Interaction `H_S′S′ = (e²/4πϵ)(4/b)` when both molecules sit in `(0,2)`.
pub fn coulomb_singlet_pair(dev: &DeviceParams) -> EnergyMeV {
    EnergyMeV(dev.coulomb_prefactor() * 4.0 / dev.intermolecule_spacing_nm)
}

/// Differential cross-capacitance energy
/// `E_cc = sin²θ (e²/4πϵ)(2/b − 2/√(a² + b²))`.
pub fn ecc(dev: &DeviceParams, theta: AdiabaticAngle) -> EnergyMeV {
    let bracket = dipole_bracket(dev.intradot_spacing_nm, dev.intermolecule_spacing_nm);
    EnergyMeV(singlet_admixture(theta) * dev.coulomb_prefactor() * bracket)
}

/// `E_cc` at the given detuning.
pub fn ecc_at_detuning(dev: &DeviceParams, epsilon: EnergyMeV) -> Result<EnergyMeV> {
    Ok(ecc(dev, adiabatic_angle(epsilon, dev.tunnel_coupling_mev)?))
}

/// Change of the next-nearest-neighbour interaction (separation `2b`) relative
/// to the nearest-neighbour `E_cc` when the detuning is swept.
///
/// Returns 0 for `a = 0`, where neither interaction changes. Note the limit
/// `a → 0⁺` is 1/8, not 0.
pub fn nnn_crosstalk_ratio(dev: &DeviceParams) -> f64 {
    let a = dev.intradot_spacing_nm;
    let b = dev.intermolecule_spacing_nm;
    if a == 0.0 {
        return 0.0;
    }
    dipole_bracket(a, 2.0 * b) / dipole_bracket(a, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_4, PI};

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn defaults_match_device_description() {
        let d = DeviceParams::default();
        assert_eq!(d.dot_radius_nm, 100.0);
        assert_eq!(d.intradot_spacing_nm, 200.0);
        assert_eq!(d.intermolecule_spacing_nm, 2000.0);
        assert_eq!(d.tunnel_coupling_mev, 0.01);
        assert_eq!(d.charging_energy_mev, 5.0);
        assert!(d.charging_energy_mev >= 100.0 * d.tunnel_coupling_mev);
        d.validate().unwrap();
    }

    #[test]
    fn validation_rejects_bad_geometry() {
        let d = DeviceParams {
            intermolecule_spacing_nm: 150.0,
            ..DeviceParams::default()
        };
        assert!(d.validate().is_err());
        let d = DeviceParams {
            tunnel_coupling_mev: 0.0,
            ..DeviceParams::default()
        };
        assert!(d.validate().is_err());
        let d = DeviceParams {
            relative_permittivity: f64::NAN,
            ..DeviceParams::default()
        };
        assert!(d.validate().is_err());
    }

    #[test]
    fn angle_limits() {
        let t = adiabatic_angle(EnergyMeV(-2.5), 0.01).unwrap().radians();
        assert!(t < 0.005, "{t}");
        let t = adiabatic_angle(EnergyMeV(2.5), 0.01).unwrap().radians();
        assert!(t > FRAC_PI_2 - 0.005, "{t}");
        for tc in [1e-4, 0.01, 0.3, 7.0] {
            assert_eq!(
                adiabatic_angle(EnergyMeV(0.0), tc).unwrap().radians(),
                FRAC_PI_4
            );
        }
    }

    #[test]
    fn angle_rejects_non_finite() {
        assert!(adiabatic_angle(EnergyMeV(f64::NAN), 0.01).is_err());
        assert!(adiabatic_angle(EnergyMeV(f64::INFINITY), 0.01).is_err());
        assert!(adiabatic_angle(EnergyMeV(0.0), f64::NAN).is_err());
        assert!(adiabatic_angle(EnergyMeV(0.0), -1.0).is_err());
    }

    #[test]
    fn admixture_values() {
        assert_eq!(singlet_admixture(AdiabaticAngle::ZERO), 0.0);
        assert_eq!(singlet_admixture(AdiabaticAngle::RIGHT), 1.0);
        let half = singlet_admixture(AdiabaticAngle::new(FRAC_PI_4).unwrap());
        assert!((half - 0.5).abs() < 1e-15);
        assert!(AdiabaticAngle::new(-0.1).is_err());
        assert!(AdiabaticAngle::new(2.0).is_err());
    }

    #[test]
    fn admixture_matches_closed_form() {
        // sin²θ = (1 + ε/√(ε² + 4T²))/2
        for &eps in &[-2.5, -0.3, -0.01, 0.0, 0.004, 0.02, 1.0, 2.5] {
            let tc = 0.01;
            let s2 = singlet_admixture(adiabatic_angle(EnergyMeV(eps), tc).unwrap());
            let closed = 0.5 * (1.0 + eps / (eps * eps + 4.0 * tc * tc).sqrt());
            assert!((s2 - closed).abs() < 1e-13, "eps={eps}: {s2} vs {closed}");
        }
    }

    #[test]
    fn background_with_zero_spacing_equals_singlet_pair() {
        let d = DeviceParams {
            intradot_spacing_nm: 0.0,
            ..DeviceParams::default()
        };
        assert!(rel(coulomb_background(&d).0, coulomb_singlet_pair(&d).0) < 1e-15);
    }

    #[test]
    fn background_scales_as_inverse_distance() {
        let d = DeviceParams::default();
        let mut far = d;
        far.intermolecule_spacing_nm *= 10.0;
        let ratio = coulomb_background(&far).0 / coulomb_background(&d).0;
        assert!((ratio - 0.1).abs() < 0.001, "{ratio}");
    }

    #[test]
    fn ecc_zero_cases() {
        let d = DeviceParams::default();
        assert_eq!(ecc(&d, AdiabaticAngle::ZERO).0, 0.0);
        let mut far = d;
        far.intermolecule_spacing_nm = 1e15;
        assert!(ecc(&far, AdiabaticAngle::RIGHT).0 < 1e-30);
    }

    #[test]
    fn ecc_equals_energy_difference() {
        let d = DeviceParams::default();
        let direct = ecc(&d, AdiabaticAngle::RIGHT).0;
        let diff = coulomb_singlet_pair(&d).0 - coulomb_background(&d).0;
        assert!(rel(direct, diff) < 1e-12);
    }

    #[test]
    fn crosstalk_limits() {
        let d = DeviceParams::default();
        let r = nnn_crosstalk_ratio(&d);
        assert!((0.12..0.13).contains(&r), "{r}");

        let mut zero = d;
        zero.intradot_spacing_nm = 0.0;
        assert_eq!(nnn_crosstalk_ratio(&zero), 0.0);

        let mut tiny = d;
        tiny.intradot_spacing_nm = 1e-3;
        assert!((nnn_crosstalk_ratio(&tiny) - 0.125).abs() < 1e-9);

        let mut wide = d;
        wide.intermolecule_spacing_nm *= 2.0;
        assert!(rel(nnn_crosstalk_ratio(&wide), r) < 0.05);
    }

    #[test]
    fn angle_is_monotone_on_a_fine_grid() {
        let d = DeviceParams::default();
        let lo = d.eps_low().0;
        let hi = d.eps_high().0;
        let mut prev = 0.0;
        for i in 0..=10_000 {
            let eps = lo + (hi - lo) * i as f64 / 10_000.0;
            let t = adiabatic_angle(EnergyMeV(eps), d.tunnel_coupling_mev)
                .unwrap()
                .radians();
            assert!(t >= prev && t <= PI / 2.0);
            prev = t;
        }
    }
}

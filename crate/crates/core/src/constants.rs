//! Physical constants shared by every unit conversion in the crate.

/// Coulomb constant `e²/(4πϵ₀)` in meV·nm (1.43996 eV·nm).
pub const COULOMB_MEV_NM: f64 = 1439.96;

/// Reduced Planck constant in meV·ns (6.582119×10⁻¹⁶ eV·s).
pub const HBAR_MEV_NS: f64 = 6.582119e-4;

/// Static relative permittivity of GaAs.
pub const GAAS_RELATIVE_PERMITTIVITY: f64 = 12.9;

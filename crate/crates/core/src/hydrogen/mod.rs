//! Legendre and Laguerre families, spherical harmonics, and the hydrogen atom:
//! energies, spectral lines and wavefunctions.

mod atom;
mod harmonics;
mod polys;

pub use atom::{
    air_wavelength, bohr_energy, bohr_radius, line_wavelength, radial_wavefunction, ritz_combination_gap,
    rydberg_constant, series_limit, spectral_series, wavefunction, wavenumber, Energy, Medium, PhysicalConstants,
    RadialWavefunction, SpectralLine, SpectralSeries, Wavefunction, RADIAL_CUTOFF,
};
pub use harmonics::{assoc_legendre, spherical_harmonic, LegendreFunction, QuantumNumbers, SphericalHarmonic};
pub use polys::{assoc_laguerre, laguerre, legendre, radial_series_coefficients, ExactPolynomial};

//! Bohr levels, spectral series and normalized wavefunctions of hydrogen.

use std::error::Error;

use calclab::hydrogen::{
    bohr_energy, bohr_radius, rydberg_constant, spectral_series, wavefunction, Medium, PhysicalConstants, QuantumNumbers,
    SpectralSeries,
};

fn main() -> Result<(), Box<dyn Error>> {
    let textbook = PhysicalConstants::textbook();
    println!("E1 = {:.4} eV, R = {:.5e} /m, a = {:.4e} m", bohr_energy(1, &textbook)?.ev, rydberg_constant(&textbook), bohr_radius(&textbook));

    let codata = PhysicalConstants::codata_hydrogen();
    for series in [SpectralSeries::Lyman, SpectralSeries::Balmer] {
        let medium = if series == SpectralSeries::Lyman { Medium::Vacuum } else { Medium::Air };
        for line in spectral_series(series, 6, &codata, medium)? {
            let upper = line.n2.map_or("inf".to_string(), |n| n.to_string());
            println!("{:<7} {upper:>3} -> {}: {:.3} nm", series.name(), line.n1, line.wavelength_nm);
        }
    }

    for qn in QuantumNumbers::upto(3) {
        let psi = wavefunction(qn, &PhysicalConstants::dimensionless())?;
        println!("(n, l, m) = ({}, {}, {:+}): total probability {:.8}", qn.n(), qn.l(), qn.m(), psi.total_probability());
    }
    Ok(())
}

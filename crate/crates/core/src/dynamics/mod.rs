//! Vectors in space, orbits, lattice PDE solvers and the integral theorems.

mod fields;
mod orbit;
mod pde;
mod vector;

pub use fields::{
    curl, divergence, divergence_check, flux_through_sphere, green_check, line_integral, stokes_check, ChargeConfig,
    IdentityCheck, StarDomain, DEFAULT_SPHERE_ORDER,
};
pub use orbit::{
    classify_conic, ellipse_area, ellipse_length, fit_conic, gravity1d_stop_time, gravity1d_time, kepler_integrate,
    kepler_step, orbit_params, stereographic_to_plane, stereographic_to_sphere, ConicFit, ConicKind, OrbitParams,
    OrbitState,
};
pub use pde::{
    dalembert, heat_kernel, heat_lattice_step, heat_solve, ode2_companion, ode2_solve, wave_first_step,
    wave_lattice_step, wave_simulate, Grid1D, Ode2Solution,
};
pub use vector::{cross, einstein_add_1d, einstein_add_3d, rotating_acceleration, Vec3, Velocity3};

//! Explicit lattices for the wave and heat equations against their closed-form solutions.

use std::error::Error;

use calclab::dynamics::{dalembert, heat_lattice_step, heat_solve, wave_simulate, Grid1D};

fn main() -> Result<(), Box<dyn Error>> {
    let g = |x: f64| (-(x - 10.0) * (x - 10.0)).exp();
    let frames = wave_simulate(g, |_| 0.0, (0.0, 20.0, 2001), 1.0, 0.005, 4.0)?;
    for frame in frames.iter().step_by(200) {
        let gap = frame
            .points()
            .map(|(x, u)| (u - dalembert(g, |_| 0.0, 1.0, x, frame.time).unwrap_or(f64::NAN)).abs())
            .fold(0.0, f64::max);
        println!("wave t = {:.2}: sup gap to d'Alembert {gap:.2e}", frame.time);
    }

    let (alpha, dx) = (1.0, 0.05);
    let dt = 0.4 * dx * dx / alpha;
    let mut u = Grid1D::from_fn(0.0, 20.0, 401, g)?;
    for step in 1..=500 {
        u = heat_lattice_step(&u, alpha, dt)?;
        if step % 100 == 0 {
            let mid = u.values()[200];
            println!("heat t = {:.2}: u(10) = {mid:.6}, kernel {:.6}", u.time, heat_solve(g, alpha, u.time, 10.0)?);
        }
    }
    Ok(())
}

//! An RK4 Kepler orbit checked against its predicted conic and period.

use std::error::Error;

use calclab::dynamics::{fit_conic, kepler_integrate, orbit_params, OrbitState, Vec3};

fn main() -> Result<(), Box<dyn Error>> {
    let start = OrbitState::new(Vec3::new(1.0, 0.0, 0.0), Vec3::new(0.0, 1.2, 0.0), 1.0)?;
    let params = orbit_params(&start)?;
    let period = params.period(start.k).ok_or("orbit is not bound")?;
    println!("predicted: c = {:.6}, eccentricity {:.6}, period {:.6}", params.c, params.epsilon.hypot(params.delta), period);

    let path = kepler_integrate(&start, period, period / 20_000.0)?;
    let end = path.last().expect("path includes the start");
    println!("after one period the body is {:.2e} from its start", (end.position - start.position).norm());

    let points: Vec<(f64, f64)> = path.iter().step_by(500).map(|s| params.to_frame(s.position)).collect();
    let fit = fit_conic(&points)?;
    println!("fitted:    c = {:.6}, eccentricity {:.6}, residual {:.1e}", fit.c, fit.epsilon.hypot(fit.delta), fit.residual);
    let drift = path.iter().map(|s| (s.angular_momentum() - start.angular_momentum()).abs()).fold(0.0, f64::max);
    println!("angular momentum drift {drift:.1e}");
    Ok(())
}

//! Gauss's law, Green, Stokes and the divergence theorem checked by quadrature.

use std::error::Error;

use calclab::dynamics::{divergence_check, flux_through_sphere, green_check, stokes_check, ChargeConfig, StarDomain, Vec3};

fn main() -> Result<(), Box<dyn Error>> {
    let cfg = ChargeConfig::unit(vec![(1.0, Vec3::new(0.2, 0.1, -0.3)), (-0.5, Vec3::new(2.0, 0.0, 0.0))])?;
    for r in [0.5, 1.0, 3.0] {
        let flux = flux_through_sphere(&cfg, Vec3::new(0.0, 0.0, 0.0), r, 64)?;
        println!("r = {r}: flux {flux:.10}, enclosed/eps0 {:.10}", cfg.enclosed(Vec3::new(0.0, 0.0, 0.0), r) / cfg.epsilon0());
    }

    let petal = StarDomain::new((0.0, 0.0), |t| 1.0 + 0.3 * (3.0 * t).cos());
    let green = green_check(|x, y| -y * y * x, |x, y| x * x * x + y, &petal, 200)?;
    println!("green:      boundary {:.10}, area {:.10}", green.lhs, green.rhs);

    let hemisphere = |u: f64, v: f64| {
        let (s, t) = (u * std::f64::consts::FRAC_PI_2, v * 2.0 * std::f64::consts::PI);
        Vec3::new(s.sin() * t.cos(), s.sin() * t.sin(), s.cos())
    };
    let stokes = stokes_check(|p| Vec3::new(-p.y, p.x * p.z, p.x * p.y), hemisphere, 120)?;
    println!("stokes:     boundary {:.10}, surface {:.10}", stokes.lhs, stokes.rhs);

    let div = divergence_check(|p| Vec3::new(p.x * p.x * p.x, p.y * p.z, p.z), Vec3::new(0.0, 0.0, 0.0), 1.0, 48)?;
    println!("divergence: surface {:.10}, volume {:.10}", div.lhs, div.rhs);
    Ok(())
}

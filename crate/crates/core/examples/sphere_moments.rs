//! Volumes of balls and monomial averages over real and complex spheres.

use std::error::Error;

use calclab::quad::{sphere_area, sphere_moment, sphere_moment_exact, sphere_moment_mc, sphere_volume, RandomSource, SphereMomentKey};

fn main() -> Result<(), Box<dyn Error>> {
    for n in 1..=8 {
        println!("N={n}: volume {:.6}  area {:.6}", sphere_volume(n)?, sphere_area(n)?);
    }
    let keys = [
        SphereMomentKey::Real(vec![2, 2, 0]),
        SphereMomentKey::RealAbs(vec![1, 1]),
        SphereMomentKey::Complex { plain: vec![2, 1], conj: vec![2, 1] },
    ];
    let mut rng = RandomSource::new(99);
    for key in &keys {
        let exact = sphere_moment_exact(key)?.map_or("-".to_string(), |q| q.to_string());
        let mc = sphere_moment_mc(key, 200_000, &mut rng)?;
        println!(
            "{key:?}: closed form {:.8} (exact {exact}), sampled {:.5} +- {:.1e}",
            sphere_moment(key)?,
            mc.value.re,
            mc.stderr_re
        );
    }
    Ok(())
}

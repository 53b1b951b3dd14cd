//! Classical laws, their moments, and density recovery from the Cauchy transform.

use std::error::Error;

use calclab::prob::{clt_moment_gap, coin_law, plt_distance, poisson_moment, sn_fixed_point_law, stieltjes_density, ClassicalLaw};

fn main() -> Result<(), Box<dyn Error>> {
    for law in ClassicalLaw::ALL {
        let moments: Vec<String> = (0..=6).map(|k| law.moment(k).to_string()).collect();
        println!("{:<10} moments {}", law.name(), moments.join(" "));
    }
    for t in [0.1, 0.01, 0.001] {
        let d = stieltjes_density(&ClassicalLaw::Semicircle, 0.5, t)?;
        println!("semicircle at 0.5 from t={t}: {d:.8} (true {:.8})", ClassicalLaw::Semicircle.density(0.5));
    }

    let m = poisson_moment(2.0, 5)?;
    println!("E X^5 for Poisson(2): partitions {:?}, atoms {}", m.partitions, m.atoms);
    let clt = clt_moment_gap(&coin_law(), 100, 4)?;
    println!("coin sums vs Gaussian, n = 100: max moment gap {:.4}", clt.max_abs());
    let plt = plt_distance(1.0, 500, 4)?;
    println!("binomial vs Poisson, n = 500: max relative gap {:.4}", plt.max_rel());

    let fixed = sn_fixed_point_law(7, 1.0, None)?;
    for (k, p) in fixed.exact.unwrap_or_default().iter().enumerate().take(4) {
        println!("P(S_7 has {k} fixed points) = {p}");
    }
    Ok(())
}

//! e, π and ζ(2) from series, with the truncation bound reported next to each value.

use std::error::Error;

use calclab::series::{babylonian_iterates, basel_corrected, e_series, eval_series, pi_leibnitz, PowerSeries};

fn main() -> Result<(), Box<dyn Error>> {
    for terms in [10, 100, 1000] {
        let pi = pi_leibnitz(terms)?;
        let basel = basel_corrected(terms)?;
        println!(
            "{terms:>5} terms: pi ~ {:.12} (+-{:.1e})   zeta(2) ~ {:.12} (+-{:.1e})",
            pi.value, pi.error, basel.value, basel.error
        );
    }
    let e = e_series(18)?;
    println!("e ~ {:.15} (+-{:.1e})", e.value, e.error);

    let sin1 = eval_series(&PowerSeries::sin(), 1.0, 12)?;
    println!("sin(1) ~ {:.15} (+-{:.1e}), libm says {:.15}", sin1.value, sin1.error, 1f64.sin());

    println!("Babylonian iterates for sqrt(2):");
    for x in babylonian_iterates(2.0).take(6) {
        println!("  {x:.17}");
    }
    Ok(())
}

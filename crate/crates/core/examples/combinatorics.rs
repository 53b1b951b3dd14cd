//! Exact counting: binomials, Catalan and Bell numbers, Bernoulli numbers and power sums.

use std::error::Error;

use calclab::combinat::{bell, bernoulli, binomial, catalan, count_matching_pairings, power_sum, ColoredWord};

fn main() -> Result<(), Box<dyn Error>> {
    for n in 0..=6u32 {
        let row: Vec<String> = (0..=n).map(|k| binomial(n, k).to_string()).collect();
        println!("{:>2}: {}", n, row.join(" "));
    }

    let catalans: Vec<String> = (0..12).map(|k| catalan(k).to_string()).collect();
    println!("catalan: {}", catalans.join(", "));
    let bells: Vec<String> = (0..10).map(|k| bell(k).to_string()).collect();
    println!("bell:    {}", bells.join(", "));

    for n in [0, 1, 2, 4, 6, 8, 10, 12] {
        println!("B_{n} = {}", bernoulli(n));
    }
    println!("1^5 + ... + 100^5 = {}", power_sum(5, 100));

    let word: ColoredWord = "oxxoxo".parse()?;
    println!("pairings of {word} joining opposite colors: {}", count_matching_pairings(&word));
    Ok(())
}

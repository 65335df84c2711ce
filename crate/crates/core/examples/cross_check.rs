//! Compares the point engine, the interval expansion and the truncated
//! product on a common prefix.
//!
//! cargo run --release --example cross_check -- 1000000

use std::time::Instant;

use fibseries::coefficient_u64;
use fibseries::expand::expand;
use fibseries::oracle::product_expand_oracle;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let last: usize = std::env::args().nth(1).map_or(Ok(200_000), |s| s.parse())?;

    let t = Instant::now();
    let arr = expand(last)?;
    println!("expansion   {:>10.2?}", t.elapsed());

    let t = Instant::now();
    let product = product_expand_oracle(last)?;
    println!("product     {:>10.2?}", t.elapsed());

    let t = Instant::now();
    let engine_mismatch = (0..=last)
        .filter(|&m| coefficient_u64(m as u64) != arr[m])
        .count();
    println!("point calls {:>10.2?}", t.elapsed());

    let product_mismatch = arr
        .iter()
        .zip(product.iter())
        .filter(|(a, b)| a != b)
        .count();
    println!("mismatches: engine {engine_mismatch}, product {product_mismatch}");
    if engine_mismatch + product_mismatch > 0 {
        std::process::exit(1);
    }
    Ok(())
}

//! Non-zero counts over Fibonacci prefixes, the zero density, and how the
//! count growth compares with the golden ratio.
//!
//! cargo run --example density_growth -- 40

use fibseries::density::{alpha_recurrence, char_roots, density, growth_report, ratio_to_f64};

fn main() {
    let n_max: usize = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(40)
        .max(5);
    let series = alpha_recurrence(n_max);
    let growth = growth_report(n_max);

    println!(
        "{:>4} {:>14} {:>10} {:>10} {:>10}",
        "n", "alpha", "p", "a ratio", "F ratio"
    );
    for (row, (n, alpha)) in growth.iter().zip(series.iter()) {
        println!(
            "{n:>4} {alpha:>14} {:>10} {:>10.6} {:>10.6}",
            density(n).decimal(),
            ratio_to_f64(&row.alpha_ratio),
            ratio_to_f64(&row.fib_ratio),
        );
    }

    let roots = char_roots(1e-12).expect("positive tolerance");
    println!(
        "dominant root of x^4 - x^3 - 2: {:.9} (residual {:.1e})",
        roots.r1, roots.residual
    );
    println!("golden ratio:                   {:.9}", roots.lambda);
}

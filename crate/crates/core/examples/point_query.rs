//! Evaluates single coefficients, including at positions with hundreds of
//! digits, and prints the reduction path.
//!
//! cargo run --example point_query -- 123456789012345678901234567890

use fibseries::{coefficient, locate, trace, NaturalIndex};

fn main() {
    let arg = std::env::args().nth(1).unwrap_or_else(|| "1".repeat(300));
    let m: NaturalIndex = match arg.parse() {
        Ok(m) => m,
        Err(e) => {
            eprintln!("bad position {arg:?}: {e}");
            std::process::exit(2);
        }
    };

    println!("m has {} digits", m.decimal_digits());
    if let Ok(n) = locate(&m) {
        println!("F_{n} <= m < F_{}", n + 1);
    }
    let steps = trace(&m);
    for step in &steps {
        let next = step.next_position().map_or("-".to_string(), |p| {
            let s = p.to_string();
            if s.len() > 24 {
                format!("{}... ({} digits)", &s[..12], s.len())
            } else {
                s
            }
        });
        println!(
            "  {:<4} n={:<6} next={next}",
            step.case(),
            step.n().map_or("-".into(), |n| n.to_string())
        );
    }
    println!("a(m) = {} after {} steps", coefficient(&m), steps.len());
}

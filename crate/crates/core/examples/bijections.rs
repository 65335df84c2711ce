//! Walks one Fibonacci interval and runs the partition bijection that
//! explains each coefficient.
//!
//! cargo run --example bijections -- 9

use fibseries::engine::Subintervals;
use fibseries::oracle::PartitionOracle;
use fibseries::{fib, StepCase};

fn main() {
    let n: usize = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(8);
    let Some(bands) = Subintervals::new(n) else {
        eprintln!("interval index must be at least 5");
        std::process::exit(2);
    };
    let oracle = PartitionOracle::default();
    let start = fib(n).to_u64().unwrap();
    let end = fib(n + 1).to_u64().unwrap();
    println!("[F_{n}, F_{}) = [{start}, {end})", n + 1);
    for m in start..end {
        let partitions = match oracle.enumerate(m) {
            Ok(p) => p,
            Err(e) => {
                eprintln!("{e}");
                return;
            }
        };
        let shown: Vec<String> = partitions.iter().map(|p| p.to_string()).collect();
        let verdict = match bands.case_of(&m.into()).unwrap() {
            StepCase::Low => oracle
                .verify_complement_bijection(m)
                .map(|r| format!("complement -> {} with sign {}", r.complement, r.sign)),
            StepCase::Mid => oracle
                .verify_mid_pairing(m)
                .map(|r| format!("{} opposite-parity pairs", r.pairs)),
            StepCase::High => oracle.verify_shift_bijection(m).map(|r| {
                format!(
                    "{} pairs, {} shifted onto {}",
                    r.pairs, r.residual, r.shifted
                )
            }),
            StepCase::Base => unreachable!(),
        };
        let tally = oracle.tally(m).unwrap();
        match verdict {
            Ok(v) => println!(
                "{m:>6}  a={:>2}  {v}  {}",
                tally.difference(),
                shown.join(" ")
            ),
            Err(e) => println!("{m:>6}  FAILED: {e}"),
        }
    }
}

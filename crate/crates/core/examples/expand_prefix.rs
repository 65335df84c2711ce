//! Expands a prefix of the series and writes it as a b-file, CSV or JSON.
//!
//! cargo run --example expand_prefix -- 40 csv

use std::io;

use fibseries::expand::{expand, nonzero_positions, CoeffSeq};
use fibseries::format::{self, Format};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let last: usize = args.next().map_or(Ok(30), |s| s.parse())?;
    let fmt: Format = args.next().map_or(Ok(Format::BFile), |s| s.parse())?;

    let arr = expand(last)?;
    format::write(&arr, fmt, io::stdout().lock())?;

    let packed = arr.packed();
    eprintln!(
        "{} coefficients, {} non-zero, {} bytes packed",
        packed.len(),
        nonzero_positions(&arr).len(),
        packed.byte_len()
    );
    Ok(())
}

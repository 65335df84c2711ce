//! Text serializations of a coefficient prefix.
//!
//! * b-file: `"{position} {coeff}\n"` per line, positions ascending from 0,
//!   no header, no trailing blank line.
//! * CSV: header `position,coefficient`, then `"{position},{coeff}\n"`.
//! * JSON: `[["0",1],["1",-1],...]` followed by a newline. Positions are
//!   strings so they survive any magnitude.

use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;

use thiserror::Error;

use crate::coeff::Coeff;
use crate::expand::CoeffArray;
use crate::fib::NaturalIndex;

pub const CSV_HEADER: &str = "position,coefficient";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Format {
    BFile,
    Csv,
    Json,
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::BFile => "bfile",
            Format::Csv => "csv",
            Format::Json => "json",
        })
    }
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "bfile" => Ok(Format::BFile),
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(format!(
                "unknown format {other:?} (expected bfile, csv or json)"
            )),
        }
    }
}

/// One serialized `(position, coefficient)` pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OutputRecord {
    pub position: NaturalIndex,
    pub coeff: Coeff,
}

pub fn records(arr: &CoeffArray) -> impl Iterator<Item = OutputRecord> + '_ {
    arr.iter().enumerate().map(|(i, &coeff)| OutputRecord {
        position: NaturalIndex::from(i),
        coeff,
    })
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}: {detail}")]
    Line { line: usize, detail: String },
    #[error("malformed JSON: {0}")]
    Json(String),
    #[error("missing CSV header")]
    MissingHeader,
    #[error("record {index} has position {found}, expected {index}")]
    OutOfOrder { index: usize, found: String },
}

pub fn write_bfile<W: Write>(arr: &CoeffArray, mut w: W) -> io::Result<()> {
    for (i, c) in arr.iter().enumerate() {
        writeln!(w, "{i} {c}")?;
    }
    Ok(())
}

pub fn write_csv<W: Write>(arr: &CoeffArray, mut w: W) -> io::Result<()> {
    writeln!(w, "{CSV_HEADER}")?;
    for (i, c) in arr.iter().enumerate() {
        writeln!(w, "{i},{c}")?;
    }
    Ok(())
}

pub fn write_json<W: Write>(arr: &CoeffArray, mut w: W) -> io::Result<()> {
    let rows: Vec<(String, i8)> = arr
        .iter()
        .enumerate()
        .map(|(i, c)| (i.to_string(), c.value()))
        .collect();
    serde_json::to_writer(&mut w, &rows)?;
    writeln!(w)
}

pub fn write<W: Write>(arr: &CoeffArray, format: Format, w: W) -> io::Result<()> {
    match format {
        Format::BFile => write_bfile(arr, w),
        Format::Csv => write_csv(arr, w),
        Format::Json => write_json(arr, w),
    }
}

pub fn to_string(arr: &CoeffArray, format: Format) -> String {
    let mut buf = Vec::new();
    write(arr, format, &mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("ASCII output")
}

fn parse_record(line_no: usize, position: &str, value: &str) -> Result<OutputRecord, ParseError> {
    let fail = |detail: String| ParseError::Line {
        line: line_no,
        detail,
    };
    let position = position
        .parse::<NaturalIndex>()
        .map_err(|e| fail(e.to_string()))?;
    let value: i64 = value
        .parse()
        .map_err(|_| fail(format!("bad coefficient {value:?}")))?;
    let coeff = Coeff::try_from(value).map_err(|e| fail(e.to_string()))?;
    Ok(OutputRecord { position, coeff })
}

fn collect_dense(
    records: impl IntoIterator<Item = OutputRecord>,
) -> Result<CoeffArray, ParseError> {
    let mut values = Vec::new();
    for (index, r) in records.into_iter().enumerate() {
        if r.position != NaturalIndex::from(index) {
            return Err(ParseError::OutOfOrder {
                index,
                found: r.position.to_string(),
            });
        }
        values.push(r.coeff);
    }
    Ok(CoeffArray::from_values(values))
}

/// Parses a b-file back into a dense prefix. Positions must run 0, 1, 2, ...
pub fn parse_bfile(text: &str) -> Result<CoeffArray, ParseError> {
    let mut records = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        let (pos, val) = line.split_once(' ').ok_or_else(|| ParseError::Line {
            line: line_no,
            detail: "expected \"position coefficient\"".into(),
        })?;
        records.push(parse_record(line_no, pos, val)?);
    }
    collect_dense(records)
}

pub fn parse_csv(text: &str) -> Result<CoeffArray, ParseError> {
    let mut lines = text.lines();
    if lines.next() != Some(CSV_HEADER) {
        return Err(ParseError::MissingHeader);
    }
    let mut records = Vec::new();
    for (i, line) in lines.enumerate() {
        let line_no = i + 2;
        let (pos, val) = line.split_once(',').ok_or_else(|| ParseError::Line {
            line: line_no,
            detail: "expected \"position,coefficient\"".into(),
        })?;
        records.push(parse_record(line_no, pos, val)?);
    }
    collect_dense(records)
}

pub fn parse_json(text: &str) -> Result<CoeffArray, ParseError> {
    let rows: Vec<(String, i64)> =
        serde_json::from_str(text).map_err(|e| ParseError::Json(e.to_string()))?;
    let records = rows
        .iter()
        .enumerate()
        .map(|(i, (pos, val))| parse_record(i + 1, pos, &val.to_string()))
        .collect::<Result<Vec<_>, _>>()?;
    collect_dense(records)
}

pub fn parse(text: &str, format: Format) -> Result<CoeffArray, ParseError> {
    match format {
        Format::BFile => parse_bfile(text),
        Format::Csv => parse_csv(text),
        Format::Json => parse_json(text),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expand::{expand_with, Budget};
    use proptest::prelude::*;

    fn prefix(n: usize) -> CoeffArray {
        expand_with(n, Budget::unlimited()).unwrap()
    }

    #[test]
    fn golden_outputs() {
        assert_eq!(
            to_string(&prefix(4), Format::BFile),
            "0 1\n1 -1\n2 -1\n3 0\n4 1\n"
        );
        assert_eq!(
            to_string(&prefix(0), Format::Csv),
            "position,coefficient\n0,1\n"
        );
        assert_eq!(
            to_string(&prefix(2), Format::Json),
            "[[\"0\",1],[\"1\",-1],[\"2\",-1]]\n"
        );
        assert!(to_string(&prefix(18), Format::BFile)
            .lines()
            .any(|l| l == "18 1"));
    }

    #[test]
    fn bfile_round_trip_ten_thousand() {
        let a = prefix(10_000);
        assert_eq!(parse_bfile(&to_string(&a, Format::BFile)).unwrap(), a);
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(
            parse_bfile("0 1\n1 2\n"),
            Err(ParseError::Line { line: 2, .. })
        ));
        assert!(matches!(
            parse_bfile("0 1\n2 1\n"),
            Err(ParseError::OutOfOrder { index: 1, .. })
        ));
        assert!(matches!(
            parse_bfile("0,1\n"),
            Err(ParseError::Line { line: 1, .. })
        ));
        assert_eq!(parse_csv("0,1\n"), Err(ParseError::MissingHeader));
        assert!(matches!(parse_json("[[0,1]]"), Err(ParseError::Json(_))));
    }

    #[test]
    fn records_carry_positions() {
        let r: Vec<_> = records(&prefix(2)).collect();
        assert_eq!(r[2].position, NaturalIndex::from(2u64));
        assert_eq!(r[2].coeff, Coeff::Minus);
    }

    proptest! {
        #[test]
        fn every_format_round_trips(n in 0usize..3000, which in 0usize..3) {
            let format = [Format::BFile, Format::Csv, Format::Json][which];
            let a = prefix(n);
            prop_assert_eq!(parse(&to_string(&a, format), format).unwrap(), a);
        }

        #[test]
        fn arbitrary_sign_sequences_round_trip(v in proptest::collection::vec(-1i64..=1, 0..200)) {
            let a = CoeffArray::from_values(v.iter().map(|&x| Coeff::try_from(x).unwrap()).collect());
            for format in [Format::BFile, Format::Csv, Format::Json] {
                prop_assert_eq!(&parse(&to_string(&a, format), format).unwrap(), &a);
            }
        }
    }
}

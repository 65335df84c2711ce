//! Ground truth for the coefficients, independent of the interval reduction.
//!
//! Two oracles live here: a truncated multiplication of the factors
//! `(1 - x^{F_k})`, and explicit enumeration of partitions into distinct
//! Fibonacci parts with the signed count `r_E(m) - r_O(m)`. On top of the
//! enumeration sit executable versions of the three bijections that prove
//! the interval recursion (pairing in the zero band, shift in the high
//! subinterval, complement in the low subinterval). Each verifier re-derives
//! the interval from scratch and checks every claim on every partition.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use thiserror::Error;

use crate::coeff::{Coeff, CoeffRangeError, Sign};
use crate::expand::CoeffArray;
use crate::fib::{fib_u64, locate, NaturalIndex};

/// Default enumeration ceiling.
pub const DEFAULT_ENUMERATION_LIMIT: u64 = 5000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("position {m} exceeds the enumeration ceiling {limit}")]
    AboveCeiling { m: u64, limit: u64 },
    #[error("position {m} is not in the {expected} subinterval (interval index {n:?})")]
    NotApplicable {
        m: u64,
        n: Option<usize>,
        expected: &'static str,
    },
    #[error("coefficient out of range at position {position}: {source}")]
    OutOfRange {
        position: usize,
        source: CoeffRangeError,
    },
    #[error("largest-part law fails for {partition} of {m}: {detail}")]
    LargestPart {
        m: u64,
        partition: FibPartition,
        detail: &'static str,
    },
    #[error("partition {partition} of {m} has no partner")]
    Unmatched { m: u64, partition: FibPartition },
    #[error("bijection fails at {m}: {detail}")]
    Bijection { m: u64, detail: String },
}

impl OracleError {
    /// True when the error contradicts a mathematical claim, as opposed to
    /// a rejected input.
    pub fn is_falsification(&self) -> bool {
        !matches!(
            self,
            OracleError::AboveCeiling { .. } | OracleError::NotApplicable { .. }
        )
    }
}

/// Raw truncated product `prod (1 - x^{F_k})` modulo `x^{last+1}`.
///
/// The accumulator is a plain signed integer; intermediate partial products
/// are not bounded by 1.
pub fn product_expand_raw(last: usize) -> Vec<i64> {
    let mut acc = vec![0i64; last + 1];
    acc[0] = 1;
    let mut k = 2;
    while let Some(part) = fib_u64(k).and_then(|f| usize::try_from(f).ok()) {
        if part > last {
            break;
        }
        for i in (part..=last).rev() {
            acc[i] -= acc[i - part];
        }
        k += 1;
    }
    acc
}

/// The truncated product as a [`CoeffArray`], range-checked at the end.
pub fn product_expand_oracle(last: usize) -> Result<CoeffArray, OracleError> {
    product_expand_raw(last)
        .into_iter()
        .enumerate()
        .map(|(position, v)| {
            Coeff::try_from(v).map_err(|source| OracleError::OutOfRange { position, source })
        })
        .collect::<Result<Vec<_>, _>>()
        .map(CoeffArray::from_values)
}

/// A set of distinct Fibonacci parts, stored as strictly decreasing
/// indices `k >= 2` (part `F_k`).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct FibPartition {
    indices: Vec<usize>,
}

impl FibPartition {
    /// Returns `None` unless the indices are strictly decreasing and `>= 2`.
    pub fn new(indices: Vec<usize>) -> Option<Self> {
        let ordered = indices.windows(2).all(|w| w[0] > w[1]);
        let in_range = indices.iter().all(|&k| k >= 2);
        (ordered && in_range).then_some(Self { indices })
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn part_count(&self) -> usize {
        self.indices.len()
    }

    pub fn is_even(&self) -> bool {
        self.indices.len().is_multiple_of(2)
    }

    pub fn largest(&self) -> Option<usize> {
        self.indices.first().copied()
    }

    pub fn second(&self) -> Option<usize> {
        self.indices.get(1).copied()
    }

    pub fn contains(&self, k: usize) -> bool {
        self.indices.contains(&k)
    }

    pub fn weight(&self) -> u64 {
        self.indices
            .iter()
            .map(|&k| fib_u64(k).expect("part fits u64"))
            .sum()
    }

    fn without(&self, drop: &[usize]) -> Self {
        Self {
            indices: self
                .indices
                .iter()
                .copied()
                .filter(|k| !drop.contains(k))
                .collect(),
        }
    }

    fn with(&self, add: &[usize]) -> Self {
        let mut indices = self.indices.clone();
        indices.extend_from_slice(add);
        indices.sort_unstable_by(|a, b| b.cmp(a));
        Self { indices }
    }
}

impl fmt::Display for FibPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, k) in self.indices.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "F_{k}")?;
        }
        f.write_str("}")
    }
}

/// Counts of even and odd partitions of one position.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct PartitionTally {
    pub even: u64,
    pub odd: u64,
}

impl PartitionTally {
    pub fn of(partitions: &[FibPartition]) -> Self {
        let even = partitions.iter().filter(|p| p.is_even()).count() as u64;
        Self {
            even,
            odd: partitions.len() as u64 - even,
        }
    }

    pub fn difference(&self) -> i64 {
        self.even as i64 - self.odd as i64
    }

    pub fn coeff(&self) -> Result<Coeff, CoeffRangeError> {
        Coeff::try_from(self.difference())
    }
}

/// Outcome of [`PartitionOracle::verify_mid_pairing`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairingReport {
    pub m: u64,
    pub n: usize,
    pub partitions: usize,
    pub pairs: usize,
    pub tally: PartitionTally,
}

/// Outcome of [`PartitionOracle::verify_shift_bijection`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShiftReport {
    pub m: u64,
    pub n: usize,
    /// `m - F_n - F_{n-2}`.
    pub shifted: u64,
    pub pairs: usize,
    pub residual: usize,
    pub tally: PartitionTally,
    pub shifted_tally: PartitionTally,
}

/// Outcome of [`PartitionOracle::verify_complement_bijection`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplementReport {
    pub m: u64,
    pub n: usize,
    /// `F_{n+2} - 2 - m`.
    pub complement: u64,
    pub partitions: usize,
    /// `(-1)^(n-1)`, the relation `a(m) = sign * a(complement)`.
    pub sign: Sign,
    pub tally: PartitionTally,
    pub complement_tally: PartitionTally,
}

/// Exhaustive partition enumeration below a configurable ceiling.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PartitionOracle {
    limit: u64,
}

impl Default for PartitionOracle {
    fn default() -> Self {
        Self {
            limit: DEFAULT_ENUMERATION_LIMIT,
        }
    }
}

fn fib(k: usize) -> u64 {
    fib_u64(k).expect("index within enumeration range")
}

struct Interval {
    n: usize,
    f_n: u64,
    f_n2: u64,
    f_n3: u64,
}

impl PartitionOracle {
    pub fn with_limit(limit: u64) -> Self {
        Self { limit }
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// Every partition of `m` into distinct Fibonacci parts, in descending
    /// lexicographic order of the index lists.
    pub fn enumerate(&self, m: u64) -> Result<Vec<FibPartition>, OracleError> {
        if m > self.limit {
            return Err(OracleError::AboveCeiling {
                m,
                limit: self.limit,
            });
        }
        // candidate parts F_2..=F_top, and their running sums for pruning
        let mut top = 1;
        while fib(top + 1) <= m {
            top += 1;
        }
        let mut reach = vec![0u64; top + 1];
        for k in 2..=top {
            reach[k] = reach[k - 1] + fib(k);
        }
        let mut out = Vec::new();
        let mut current = Vec::new();
        search(top, m, &reach, &mut current, &mut out);
        Ok(out)
    }

    pub fn tally(&self, m: u64) -> Result<PartitionTally, OracleError> {
        self.enumerate(m).map(|p| PartitionTally::of(&p))
    }

    fn interval(&self, m: u64, expected: &'static str) -> Result<Interval, OracleError> {
        let not_applicable = |n| OracleError::NotApplicable { m, n, expected };
        if m > self.limit {
            return Err(OracleError::AboveCeiling {
                m,
                limit: self.limit,
            });
        }
        let n = locate(&NaturalIndex::from(m)).map_err(|_| not_applicable(None))?;
        if n < 5 {
            return Err(not_applicable(Some(n)));
        }
        Ok(Interval {
            n,
            f_n: fib(n),
            f_n2: fib(n - 2),
            f_n3: fib(n - 3),
        })
    }

    /// Largest part is `F_n` or `F_{n-1}`, and `F_{n-1}` is always followed
    /// by `F_{n-2}`.
    fn check_largest_part(m: u64, n: usize, p: &FibPartition) -> Result<(), OracleError> {
        let fail = |detail| OracleError::LargestPart {
            m,
            partition: p.clone(),
            detail,
        };
        match p.largest() {
            Some(k) if k == n => {
                if p.second() == Some(n - 1) {
                    return Err(fail("F_n followed by F_{n-1}"));
                }
                Ok(())
            }
            Some(k) if k == n - 1 => {
                if p.second() != Some(n - 2) {
                    return Err(fail("F_{n-1} not followed by F_{n-2}"));
                }
                Ok(())
            }
            _ => Err(fail("largest part is neither F_n nor F_{n-1}")),
        }
    }

    /// Swaps `F_n` with `F_{n-1} + F_{n-2}` (or back), for partitions in
    /// the paired class.
    fn swap_partner(n: usize, p: &FibPartition) -> FibPartition {
        if p.largest() == Some(n) {
            p.without(&[n]).with(&[n - 1, n - 2])
        } else {
            p.without(&[n - 1, n - 2]).with(&[n])
        }
    }

    /// Checks that `swap_partner` is a parity-flipping perfect matching on
    /// `class`. Returns the number of pairs.
    fn check_pairing(m: u64, n: usize, class: &[&FibPartition]) -> Result<usize, OracleError> {
        let members: HashSet<&FibPartition> = class.iter().copied().collect();
        for &p in class {
            let partner = Self::swap_partner(n, p);
            if !members.contains(&partner) {
                return Err(OracleError::Unmatched {
                    m,
                    partition: p.clone(),
                });
            }
            if Self::swap_partner(n, &partner) != *p {
                return Err(OracleError::Bijection {
                    m,
                    detail: format!("pairing is not an involution at {p}"),
                });
            }
            if partner.part_count().abs_diff(p.part_count()) != 1 || partner.weight() != m {
                return Err(OracleError::Bijection {
                    m,
                    detail: format!("{p} and {partner} are not a parity-flipped pair"),
                });
            }
        }
        Ok(class.len() / 2)
    }

    /// Checks that every partition of a zero-band position pairs off with a
    /// partition of opposite parity.
    pub fn verify_mid_pairing(&self, m: u64) -> Result<PairingReport, OracleError> {
        let iv = self.interval(m, "middle")?;
        let (mid_start, high_start) = (iv.f_n + iv.f_n3 - 1, iv.f_n + iv.f_n2);
        if !(mid_start..high_start).contains(&m) {
            return Err(OracleError::NotApplicable {
                m,
                n: Some(iv.n),
                expected: "middle",
            });
        }
        let n = iv.n;
        let partitions = self.enumerate(m)?;
        for p in &partitions {
            Self::check_largest_part(m, n, p)?;
            if p.largest() == Some(n) && p.second() == Some(n - 2) {
                return Err(OracleError::LargestPart {
                    m,
                    partition: p.clone(),
                    detail: "F_n followed by F_{n-2} in the zero band",
                });
            }
        }
        let all: Vec<&FibPartition> = partitions.iter().collect();
        let pairs = Self::check_pairing(m, n, &all)?;
        let tally = PartitionTally::of(&partitions);
        if tally.difference() != 0 {
            return Err(OracleError::Bijection {
                m,
                detail: format!("perfect matching but r_E - r_O = {}", tally.difference()),
            });
        }
        Ok(PairingReport {
            m,
            n,
            partitions: partitions.len(),
            pairs,
            tally,
        })
    }

    /// Checks the high-subinterval argument: partitions split into swap
    /// pairs plus a residual class `{F_n, F_{n-2}, ...}` that maps
    /// bijectively and parity-preservingly onto partitions of
    /// `m - F_n - F_{n-2}`.
    pub fn verify_shift_bijection(&self, m: u64) -> Result<ShiftReport, OracleError> {
        let iv = self.interval(m, "high")?;
        let high_start = iv.f_n + iv.f_n2;
        if !(high_start..fib(iv.n + 1)).contains(&m) {
            return Err(OracleError::NotApplicable {
                m,
                n: Some(iv.n),
                expected: "high",
            });
        }
        let n = iv.n;
        let shifted = m - high_start;
        let partitions = self.enumerate(m)?;
        let mut paired = Vec::new();
        let mut residual = Vec::new();
        for p in &partitions {
            Self::check_largest_part(m, n, p)?;
            if p.largest() == Some(n) && p.second() == Some(n - 2) {
                residual.push(p);
            } else {
                paired.push(p);
            }
        }
        let pairs = Self::check_pairing(m, n, &paired)?;

        let images: BTreeSet<FibPartition> =
            residual.iter().map(|p| p.without(&[n, n - 2])).collect();
        if images.len() != residual.len() {
            return Err(OracleError::Bijection {
                m,
                detail: "removing F_n and F_{n-2} is not injective".into(),
            });
        }
        if let Some(p) = images
            .iter()
            .find(|p| p.largest().is_some_and(|k| k > n - 3))
        {
            return Err(OracleError::Bijection {
                m,
                detail: format!("image {p} has a part above F_{{n-3}}"),
            });
        }
        let targets = self.enumerate(shifted)?;
        let target_set: BTreeSet<FibPartition> = targets.iter().cloned().collect();
        if images != target_set {
            return Err(OracleError::Bijection {
                m,
                detail: format!("images do not cover the partitions of {shifted}"),
            });
        }
        let tally = PartitionTally::of(&partitions);
        let shifted_tally = PartitionTally::of(&targets);
        if tally.difference() != shifted_tally.difference() {
            return Err(OracleError::Bijection {
                m,
                detail: format!(
                    "r_E - r_O is {} at {m} but {} at {shifted}",
                    tally.difference(),
                    shifted_tally.difference()
                ),
            });
        }
        Ok(ShiftReport {
            m,
            n,
            shifted,
            pairs,
            residual: residual.len(),
            tally,
            shifted_tally,
        })
    }

    /// Checks the low-subinterval argument: complementing inside
    /// `{F_2, ..., F_n}` maps partitions of `m` bijectively onto partitions
    /// of `F_{n+2} - 2 - m`, sending `k` parts to `n - 1 - k`.
    pub fn verify_complement_bijection(&self, m: u64) -> Result<ComplementReport, OracleError> {
        let iv = self.interval(m, "low")?;
        let mid_start = iv.f_n + iv.f_n3 - 1;
        if !(iv.f_n..mid_start).contains(&m) {
            return Err(OracleError::NotApplicable {
                m,
                n: Some(iv.n),
                expected: "low",
            });
        }
        let n = iv.n;
        let complement = fib(n + 2) - 2 - m;
        let partitions = self.enumerate(m)?;
        let universe: Vec<usize> = (2..=n).rev().collect();
        let mut images = BTreeSet::new();
        for p in &partitions {
            if p.largest().is_some_and(|k| k > n) {
                return Err(OracleError::Bijection {
                    m,
                    detail: format!("{p} has a part above F_n"),
                });
            }
            let image = FibPartition {
                indices: universe
                    .iter()
                    .copied()
                    .filter(|k| !p.contains(*k))
                    .collect(),
            };
            if image.part_count() != n - 1 - p.part_count() || image.weight() != complement {
                return Err(OracleError::Bijection {
                    m,
                    detail: format!("complement {image} of {p} has wrong size or weight"),
                });
            }
            images.insert(image);
        }
        let targets = self.enumerate(complement)?;
        if let Some(p) = targets.iter().find(|p| p.largest().is_some_and(|k| k > n)) {
            return Err(OracleError::Bijection {
                m,
                detail: format!("partition {p} of {complement} has a part above F_n"),
            });
        }
        let target_set: BTreeSet<FibPartition> = targets.iter().cloned().collect();
        if images.len() != partitions.len() || images != target_set {
            return Err(OracleError::Bijection {
                m,
                detail: format!("complements do not cover the partitions of {complement}"),
            });
        }
        let sign = Sign::power_of_minus_one(n - 1);
        let tally = PartitionTally::of(&partitions);
        let complement_tally = PartitionTally::of(&targets);
        if tally.difference() != sign.value() as i64 * complement_tally.difference() {
            return Err(OracleError::Bijection {
                m,
                detail: format!(
                    "r_E - r_O is {} at {m}, {} at {complement}, sign {sign}",
                    tally.difference(),
                    complement_tally.difference()
                ),
            });
        }
        Ok(ComplementReport {
            m,
            n,
            complement,
            partitions: partitions.len(),
            sign,
            tally,
            complement_tally,
        })
    }
}

fn search(
    top: usize,
    remaining: u64,
    reach: &[u64],
    current: &mut Vec<usize>,
    out: &mut Vec<FibPartition>,
) {
    if remaining == 0 {
        out.push(FibPartition {
            indices: current.clone(),
        });
        return;
    }
    if top < 2 || reach[top] < remaining {
        return;
    }
    for k in (2..=top).rev() {
        let part = fib(k);
        if part > remaining {
            continue;
        }
        if reach[k] < remaining {
            break;
        }
        current.push(k);
        search(k - 1, remaining - part, reach, current, out);
        current.pop();
    }
}

/// [`PartitionOracle::enumerate`] with an explicit ceiling.
pub fn enumerate_partitions(m: u64, limit: u64) -> Result<Vec<FibPartition>, OracleError> {
    PartitionOracle::with_limit(limit).enumerate(m)
}

/// [`PartitionOracle::tally`] with the default ceiling.
pub fn tally(m: u64) -> Result<PartitionTally, OracleError> {
    PartitionOracle::default().tally(m)
}

//! Arbitrary-precision Fibonacci numbers and interval location.
//!
//! Indices follow `F_0 = 0, F_1 = 1`. Every public interface that maps a
//! position to an interval works from `k = 2` upward, so `F_1 = F_2 = 1`
//! never creates an ambiguity: [`locate`] never returns 1.

use std::fmt;
use std::ops::Add;
use std::str::FromStr;
use std::sync::OnceLock;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use parking_lot::RwLock;
use thiserror::Error;

/// A non-negative position (exponent) of arbitrary size.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NaturalIndex(BigUint);

impl NaturalIndex {
    pub fn zero() -> Self {
        Self(BigUint::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn as_biguint(&self) -> &BigUint {
        &self.0
    }

    pub fn into_biguint(self) -> BigUint {
        self.0
    }

    pub fn to_u64(&self) -> Option<u64> {
        self.0.to_u64()
    }

    pub fn to_usize(&self) -> Option<usize> {
        self.0.to_usize()
    }

    /// `self - other`, or `None` when the result would be negative.
    pub fn checked_sub(&self, other: &Self) -> Option<Self> {
        if self.0 >= other.0 {
            Some(Self(&self.0 - &other.0))
        } else {
            None
        }
    }

    /// Number of decimal digits (1 for zero).
    pub fn decimal_digits(&self) -> usize {
        self.0.to_str_radix(10).len()
    }
}

impl From<u64> for NaturalIndex {
    fn from(v: u64) -> Self {
        Self(BigUint::from(v))
    }
}

impl From<u32> for NaturalIndex {
    fn from(v: u32) -> Self {
        Self(BigUint::from(v))
    }
}

impl From<usize> for NaturalIndex {
    fn from(v: usize) -> Self {
        Self(BigUint::from(v))
    }
}

impl From<BigUint> for NaturalIndex {
    fn from(v: BigUint) -> Self {
        Self(v)
    }
}

impl From<NaturalIndex> for BigUint {
    fn from(v: NaturalIndex) -> Self {
        v.0
    }
}

impl Add for NaturalIndex {
    type Output = NaturalIndex;

    fn add(self, rhs: Self) -> Self::Output {
        Self(self.0 + rhs.0)
    }
}

impl<'a> Add<&'a NaturalIndex> for &'a NaturalIndex {
    type Output = NaturalIndex;

    fn add(self, rhs: &'a NaturalIndex) -> Self::Output {
        NaturalIndex(&self.0 + &rhs.0)
    }
}

impl fmt::Display for NaturalIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseIndexError {
    #[error("empty position")]
    Empty,
    #[error("invalid character {0:?} in position (expected decimal digits)")]
    InvalidDigit(char),
}

impl FromStr for NaturalIndex {
    type Err = ParseIndexError;

    /// Accepts plain decimal digits of any length. Signs, whitespace and
    /// separators are rejected.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.is_empty() {
            return Err(ParseIndexError::Empty);
        }
        if let Some(c) = s.chars().find(|c| !c.is_ascii_digit()) {
            return Err(ParseIndexError::InvalidDigit(c));
        }
        // all ASCII digits, so parsing cannot fail
        Ok(Self(
            BigUint::parse_bytes(s.as_bytes(), 10).expect("decimal digits"),
        ))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FibError {
    #[error("position 0 lies in no interval [F_n, F_n+1) with n >= 2")]
    ZeroPosition,
}

/// Append-only cache of Fibonacci numbers, `entries[k] = F_k`.
///
/// Readers share the lock; extension takes the write lock and only ever
/// pushes, so every reader observes a consistent prefix.
pub struct FibTable {
    entries: RwLock<Vec<BigUint>>,
}

impl Default for FibTable {
    fn default() -> Self {
        Self::new()
    }
}

impl FibTable {
    pub fn new() -> Self {
        let seed = [0u32, 1, 1, 2, 3, 5, 8, 13];
        Self {
            entries: RwLock::new(seed.iter().map(|&v| BigUint::from(v)).collect()),
        }
    }

    /// Process-wide table shared by the free functions of this module.
    pub fn global() -> &'static FibTable {
        static TABLE: OnceLock<FibTable> = OnceLock::new();
        TABLE.get_or_init(FibTable::new)
    }

    /// Number of cached entries (`F_0` through `F_{len-1}`).
    pub fn len(&self) -> usize {
        self.entries.read().len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    fn push_next(entries: &mut Vec<BigUint>) {
        let n = entries.len();
        let next = &entries[n - 1] + &entries[n - 2];
        entries.push(next);
    }

    fn ensure_index(&self, k: usize) {
        if self.entries.read().len() > k {
            return;
        }
        let mut entries = self.entries.write();
        while entries.len() <= k {
            Self::push_next(&mut entries);
        }
    }

    fn ensure_exceeds(&self, m: &BigUint) {
        if self.entries.read().last().is_some_and(|last| last > m) {
            return;
        }
        let mut entries = self.entries.write();
        while entries.last().is_some_and(|last| last <= m) {
            Self::push_next(&mut entries);
        }
    }

    /// `F_k`, extending the table on demand.
    pub fn fib(&self, k: usize) -> NaturalIndex {
        self.ensure_index(k);
        NaturalIndex(self.entries.read()[k].clone())
    }

    /// Runs `f` against a table prefix whose last entry exceeds `m`.
    pub fn with_cover<R>(&self, m: &BigUint, f: impl FnOnce(&[BigUint]) -> R) -> R {
        self.ensure_exceeds(m);
        let entries = self.entries.read();
        f(&entries)
    }

    /// Runs `f` against a table prefix holding at least `F_0..=F_k`.
    pub fn with_index<R>(&self, k: usize, f: impl FnOnce(&[BigUint]) -> R) -> R {
        self.ensure_index(k);
        let entries = self.entries.read();
        f(&entries)
    }

    /// The unique `n >= 2` with `F_n <= m < F_{n+1}`.
    pub fn locate(&self, m: &NaturalIndex) -> Result<usize, FibError> {
        if m.is_zero() {
            return Err(FibError::ZeroPosition);
        }
        Ok(self.with_cover(&m.0, |fibs| locate_in(fibs, &m.0)))
    }

    /// `F_2 + F_3 + ... + F_n`, summed term by term.
    pub fn prefix_sum(&self, n: usize) -> NaturalIndex {
        if n < 2 {
            return NaturalIndex::zero();
        }
        self.with_index(n, |fibs| NaturalIndex(fibs[2..=n].iter().sum()))
    }
}

/// Binary search for `n >= 2` with `F_n <= m < F_{n+1}` in a table whose
/// last entry exceeds `m`. Requires `m >= 1`.
pub(crate) fn locate_in(fibs: &[BigUint], m: &BigUint) -> usize {
    debug_assert!(!m.is_zero());
    debug_assert!(fibs.last().is_some_and(|last| last > m));
    // fibs[2..] is strictly increasing
    let at_most = fibs[2..].partition_point(|f| f <= m);
    at_most + 1
}

/// `F_k` from the shared table.
pub fn fib(k: usize) -> NaturalIndex {
    FibTable::global().fib(k)
}

/// Interval index of `m` from the shared table; see [`FibTable::locate`].
pub fn locate(m: &NaturalIndex) -> Result<usize, FibError> {
    FibTable::global().locate(m)
}

/// `F_2 + ... + F_n`; equals `F_{n+2} - 2`.
pub fn prefix_sum(n: usize) -> NaturalIndex {
    FibTable::global().prefix_sum(n)
}

/// `F_k` as a machine word, or `None` on overflow.
pub fn fib_u64(k: usize) -> Option<u64> {
    fib(k).to_u64()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn nat(v: u64) -> NaturalIndex {
        NaturalIndex::from(v)
    }

    #[test]
    fn fib_small_values() {
        assert_eq!(fib(0), nat(0));
        assert_eq!(fib(1), nat(1));
        assert_eq!(fib(2), nat(1));
        assert_eq!(fib(10), nat(55));
    }

    #[test]
    fn recurrence_holds() {
        for k in 2..300 {
            assert_eq!(fib(k + 2), &fib(k + 1) + &fib(k));
        }
        for k in 3..300 {
            assert!(fib(k) > fib(k - 1));
        }
    }

    #[test]
    fn locate_examples() {
        assert_eq!(locate(&nat(1)), Ok(2));
        assert_eq!(locate(&nat(2)), Ok(3));
        assert_eq!(locate(&nat(13)), Ok(7));
        assert_eq!(locate(&nat(20)), Ok(7));
        assert_eq!(locate(&nat(21)), Ok(8));
        assert_eq!(locate(&nat(0)), Err(FibError::ZeroPosition));
    }

    #[test]
    fn locate_brackets_every_small_position() {
        for m in 1..=100_000u64 {
            let m = nat(m);
            let n = locate(&m).unwrap();
            assert!(fib(n) <= m && m < fib(n + 1), "m = {m}, n = {n}");
        }
    }

    #[test]
    fn locate_at_interval_edges() {
        for n in 3..200 {
            assert_eq!(locate(&fib(n)), Ok(n));
        }
        for n in 2..200 {
            let last = fib(n + 1).checked_sub(&nat(1)).unwrap();
            assert_eq!(locate(&last), Ok(n));
        }
    }

    #[test]
    fn locate_thousand_digit_position() {
        let digits: String = "7".repeat(1000);
        let m: NaturalIndex = digits.parse().unwrap();
        let n = locate(&m).unwrap();
        assert!(fib(n) <= m && m < fib(n + 1));
        // roughly 4.78 indices per decimal digit
        assert!((4700..4800).contains(&n), "n = {n}");
    }

    #[test]
    fn prefix_sum_examples() {
        assert_eq!(prefix_sum(2), nat(1));
        assert_eq!(prefix_sum(5), nat(11));
        assert_eq!(prefix_sum(7), nat(32));
    }

    #[test]
    fn prefix_sum_identity() {
        for n in 2..=40 {
            let expected = fib(n + 2).checked_sub(&nat(2)).unwrap();
            assert_eq!(prefix_sum(n), expected, "n = {n}");
        }
    }

    #[test]
    fn parse_rejects_non_digits() {
        assert_eq!("".parse::<NaturalIndex>(), Err(ParseIndexError::Empty));
        assert_eq!(
            "-3".parse::<NaturalIndex>(),
            Err(ParseIndexError::InvalidDigit('-'))
        );
        assert_eq!(
            "1 2".parse::<NaturalIndex>(),
            Err(ParseIndexError::InvalidDigit(' '))
        );
        assert_eq!("007".parse::<NaturalIndex>(), Ok(nat(7)));
    }

    #[test]
    fn checked_sub_guards_negative() {
        assert_eq!(nat(5).checked_sub(&nat(7)), None);
        assert_eq!(nat(7).checked_sub(&nat(5)), Some(nat(2)));
    }

    #[test]
    fn concurrent_extension_is_consistent() {
        let table = FibTable::new();
        std::thread::scope(|s| {
            for t in 0..8 {
                let table = &table;
                s.spawn(move || {
                    for k in (0..400).map(|k| (k * 7 + t * 13) % 400) {
                        let _ = table.fib(k);
                    }
                });
            }
        });
        for k in 2..398 {
            assert_eq!(table.fib(k + 2), &table.fib(k + 1) + &table.fib(k));
        }
    }

    proptest! {
        #[test]
        fn display_parse_round_trip(v in any::<u128>()) {
            let m = NaturalIndex::from(BigUint::from(v));
            prop_assert_eq!(m.to_string().parse::<NaturalIndex>().unwrap(), m);
        }

        #[test]
        fn locate_brackets_large(v in any::<u128>().prop_filter("nonzero", |v| *v > 0)) {
            let m = NaturalIndex::from(BigUint::from(v));
            let n = locate(&m).unwrap();
            prop_assert!(fib(n) <= m && m < fib(n + 1));
        }
    }
}

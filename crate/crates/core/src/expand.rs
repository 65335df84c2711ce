//! Dense expansion of the coefficient prefix `a(0..=N)`.
//!
//! The prefix is grown one Fibonacci interval at a time: once `a(0..F_n)`
//! is known, `[F_n, F_{n+1})` is filled from three spans (reflected low
//! span, zero band, shifted high span) that only read positions below
//! `F_{n-3}`. This path never calls the point engine, so the two can be
//! checked against each other.

use std::ops::Index;

use thiserror::Error;

use crate::coeff::{Coeff, Sign};
use crate::engine::BASE_COEFFS;
use crate::fib::NaturalIndex;

/// Environment variable holding the dense-expansion ceiling, in coefficients.
pub const BUDGET_ENV: &str = "FIBSERIES_MAX_COEFFS";

/// Default ceiling: 2^27 coefficients.
pub const DEFAULT_MAX_COEFFS: usize = 1 << 27;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExpandError {
    #[error(
        "expansion to position {requested} needs more than the budget of {budget} coefficients"
    )]
    BudgetExceeded { requested: usize, budget: usize },
}

/// Upper bound on the number of coefficients a dense expansion may hold.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    pub max_coeffs: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Self {
            max_coeffs: DEFAULT_MAX_COEFFS,
        }
    }
}

impl Budget {
    pub fn new(max_coeffs: usize) -> Self {
        Self { max_coeffs }
    }

    pub fn unlimited() -> Self {
        Self {
            max_coeffs: usize::MAX,
        }
    }

    /// Reads [`BUDGET_ENV`], falling back to the default when unset or
    /// unparseable.
    pub fn from_env() -> Self {
        std::env::var(BUDGET_ENV)
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .map(Self::new)
            .unwrap_or_default()
    }

    pub fn check(&self, last_position: usize) -> Result<(), ExpandError> {
        match last_position.checked_add(1) {
            Some(count) if count <= self.max_coeffs => Ok(()),
            _ => Err(ExpandError::BudgetExceeded {
                requested: last_position,
                budget: self.max_coeffs,
            }),
        }
    }
}

/// Read access shared by the byte-per-coefficient and packed layouts.
pub trait CoeffSeq {
    fn len(&self) -> usize;

    fn get(&self, index: usize) -> Option<Coeff>;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn to_vec(&self) -> Vec<Coeff> {
        (0..self.len()).map(|i| self.get(i).unwrap()).collect()
    }
}

/// `a(0..=N)`, one byte per coefficient.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct CoeffArray {
    values: Vec<Coeff>,
}

impl CoeffArray {
    pub fn from_values(values: Vec<Coeff>) -> Self {
        Self { values }
    }

    pub fn as_slice(&self) -> &[Coeff] {
        &self.values
    }

    pub fn into_vec(self) -> Vec<Coeff> {
        self.values
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Coeff> {
        self.values.iter()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, index: usize) -> Option<Coeff> {
        self.values.get(index).copied()
    }

    pub fn nonzero_count(&self) -> usize {
        self.values.iter().filter(|c| !c.is_zero()).count()
    }

    pub fn zero_count(&self) -> usize {
        self.len() - self.nonzero_count()
    }

    pub fn packed(&self) -> PackedCoeffs {
        PackedCoeffs::from(self)
    }
}

impl Index<usize> for CoeffArray {
    type Output = Coeff;

    fn index(&self, index: usize) -> &Coeff {
        &self.values[index]
    }
}

impl CoeffSeq for CoeffArray {
    fn len(&self) -> usize {
        self.values.len()
    }

    fn get(&self, index: usize) -> Option<Coeff> {
        self.values.get(index).copied()
    }
}

impl<'a> IntoIterator for &'a CoeffArray {
    type Item = &'a Coeff;
    type IntoIter = std::slice::Iter<'a, Coeff>;

    fn into_iter(self) -> Self::IntoIter {
        self.values.iter()
    }
}

/// Two bits per coefficient: `00` zero, `01` plus, `11` minus.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct PackedCoeffs {
    bytes: Vec<u8>,
    len: usize,
}

impl PackedCoeffs {
    fn encode(c: Coeff) -> u8 {
        match c {
            Coeff::Zero => 0b00,
            Coeff::Plus => 0b01,
            Coeff::Minus => 0b11,
        }
    }

    fn decode(bits: u8) -> Coeff {
        match bits {
            0b00 => Coeff::Zero,
            0b01 => Coeff::Plus,
            0b11 => Coeff::Minus,
            _ => unreachable!("invalid packed coefficient"),
        }
    }

    pub fn push(&mut self, c: Coeff) {
        let slot = self.len % 4;
        if slot == 0 {
            self.bytes.push(0);
        }
        *self.bytes.last_mut().unwrap() |= Self::encode(c) << (2 * slot);
        self.len += 1;
    }

    /// Heap bytes used by the packed data.
    pub fn byte_len(&self) -> usize {
        self.bytes.len()
    }
}

impl CoeffSeq for PackedCoeffs {
    fn len(&self) -> usize {
        self.len
    }

    fn get(&self, index: usize) -> Option<Coeff> {
        (index < self.len)
            .then(|| Self::decode((self.bytes[index / 4] >> (2 * (index % 4))) & 0b11))
    }
}

impl From<&CoeffArray> for PackedCoeffs {
    fn from(arr: &CoeffArray) -> Self {
        let mut packed = PackedCoeffs {
            bytes: Vec::with_capacity(arr.len().div_ceil(4)),
            len: 0,
        };
        for &c in arr {
            packed.push(c);
        }
        packed
    }
}

impl From<&PackedCoeffs> for CoeffArray {
    fn from(packed: &PackedCoeffs) -> Self {
        CoeffArray::from_values(packed.to_vec())
    }
}

/// Non-zero counts written into each span of one interval `[F_n, F_{n+1})`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IntervalFill {
    pub n: usize,
    pub low_nonzero: usize,
    pub mid_nonzero: usize,
    pub high_nonzero: usize,
    /// The interval was cut short at the requested end position.
    pub truncated: bool,
}

impl IntervalFill {
    pub fn nonzero(&self) -> usize {
        self.low_nonzero + self.mid_nonzero + self.high_nonzero
    }
}

/// `a(0..=last)` using the budget from [`BUDGET_ENV`].
pub fn expand(last: usize) -> Result<CoeffArray, ExpandError> {
    expand_with(last, Budget::from_env())
}

pub fn expand_with(last: usize, budget: Budget) -> Result<CoeffArray, ExpandError> {
    expand_traced(last, budget).map(|(arr, _)| arr)
}

/// Expansion plus a per-interval record of what each span contributed.
pub fn expand_traced(
    last: usize,
    budget: Budget,
) -> Result<(CoeffArray, Vec<IntervalFill>), ExpandError> {
    budget.check(last)?;
    let total = last + 1;
    let mut values: Vec<Coeff> = Vec::with_capacity(total);
    values.extend(BASE_COEFFS.iter().take(total));

    let mut fills = Vec::new();
    // fibs[k] = F_k while it fits a usize
    let mut fibs: Vec<usize> = vec![0, 1, 1, 2, 3, 5];
    let mut n = 5;
    while values.len() < total {
        while fibs.len() <= n + 1 {
            let k = fibs.len();
            fibs.push(fibs[k - 1].saturating_add(fibs[k - 2]));
        }
        debug_assert_eq!(values.len(), fibs[n]);
        let back = fibs[n - 3];
        let sign = Sign::power_of_minus_one(n - 1);
        let mut fill = IntervalFill {
            n,
            low_nonzero: 0,
            mid_nonzero: 0,
            high_nonzero: 0,
            truncated: false,
        };

        // low: a(F_n + j) = sign * a(F_{n-3} - 2 - j), reading a(F_{n-3} - 2) down to a(0)
        for src in (0..back - 1).rev() {
            if values.len() == total {
                break;
            }
            let c = sign * values[src];
            fill.low_nonzero += usize::from(!c.is_zero());
            values.push(c);
        }
        // mid: F_{n-4} + 1 zeros
        let mid_len = (fibs[n - 4] + 1).min(total - values.len());
        values.resize(values.len() + mid_len, Coeff::Zero);
        // high: a(F_n + F_{n-2} + j) = a(j)
        let high_len = back.min(total - values.len());
        fill.high_nonzero = values[..high_len].iter().filter(|c| !c.is_zero()).count();
        values.extend_from_within(..high_len);

        fill.truncated = values.len() < fibs[n + 1];
        fills.push(fill);
        n += 1;
    }
    Ok((CoeffArray::from_values(values), fills))
}

/// Ascending `(position, coefficient)` pairs for every non-zero entry.
pub fn nonzero_positions(arr: &CoeffArray) -> Vec<(NaturalIndex, Coeff)> {
    arr.iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, &c)| (NaturalIndex::from(i), c))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::coefficient_u64;
    use proptest::prelude::*;

    fn ints(arr: &CoeffArray) -> Vec<i8> {
        arr.iter().map(|c| c.value()).collect()
    }

    fn unlimited(n: usize) -> CoeffArray {
        expand_with(n, Budget::unlimited()).unwrap()
    }

    #[test]
    fn small_prefixes() {
        assert_eq!(ints(&unlimited(0)), vec![1]);
        assert_eq!(ints(&unlimited(8)), vec![1, -1, -1, 0, 1, 0, 0, 1, -1]);
        let a = unlimited(18);
        assert_eq!(ints(&a)[14..], [1, 0, 0, 0, 1]);
    }

    #[test]
    fn nonzero_position_examples() {
        let nz = nonzero_positions(&unlimited(4));
        let got: Vec<(u64, i8)> = nz
            .iter()
            .map(|(p, c)| (p.to_u64().unwrap(), c.value()))
            .collect();
        assert_eq!(got, vec![(0, 1), (1, -1), (2, -1), (4, 1)]);
        assert_eq!(nonzero_positions(&unlimited(0)).len(), 1);
        // positions 0, 1, 2, 4, 7, 8, 11, 12
        assert_eq!(nonzero_positions(&unlimited(12)).len(), 8);
    }

    #[test]
    fn agrees_with_point_engine() {
        let a = unlimited(100_000);
        for (m, &c) in a.iter().enumerate() {
            assert_eq!(c, coefficient_u64(m as u64), "m = {m}");
        }
    }

    #[test]
    fn agrees_with_point_engine_at_million_samples() {
        let a = unlimited(1_000_000);
        for m in (0..=1_000_000).step_by(997).chain(999_000..=1_000_000) {
            assert_eq!(a[m], coefficient_u64(m as u64), "m = {m}");
        }
    }

    #[test]
    fn budget_is_enforced() {
        assert_eq!(
            expand_with(10, Budget::new(10)),
            Err(ExpandError::BudgetExceeded {
                requested: 10,
                budget: 10
            })
        );
        assert!(expand_with(9, Budget::new(10)).is_ok());
        assert!(expand_with(usize::MAX, Budget::unlimited()).is_err());
    }

    #[test]
    fn fill_accounting_matches_nonzero_counts() {
        let (arr, fills) = expand_traced(832_039, Budget::unlimited()).unwrap();
        let (mut a, mut b) = (0usize, 1usize);
        let mut fib = vec![];
        for _ in 0..40 {
            fib.push(a);
            (a, b) = (b, a + b);
        }
        for fill in &fills {
            let n = fill.n;
            assert_eq!(fill.mid_nonzero, 0);
            let counted = arr.as_slice()[fib[n]..fib[n + 1].min(arr.len())]
                .iter()
                .filter(|c| !c.is_zero())
                .count();
            assert_eq!(fill.nonzero(), counted, "n = {n}");
        }
        assert_eq!(fills.last().unwrap().n, 29);
        assert!(!fills.last().unwrap().truncated);
    }

    #[test]
    fn truncation_can_cut_any_span() {
        // [F_8, F_9) = [21, 34): low [21, 24], mid [25, 28], high [29, 33]
        for last in 20..40 {
            let a = unlimited(last);
            assert_eq!(a.len(), last + 1);
            for (m, &c) in a.iter().enumerate() {
                assert_eq!(c, coefficient_u64(m as u64));
            }
        }
    }

    #[test]
    fn packed_matches_bytes() {
        let a = unlimited(10_000);
        let p = a.packed();
        assert_eq!(p.len(), a.len());
        assert_eq!(p.byte_len(), a.len().div_ceil(4));
        assert_eq!(CoeffArray::from(&p), a);
    }

    proptest! {
        #[test]
        fn prefix_stability(n1 in 0usize..5000, extra in 0usize..5000) {
            let short = unlimited(n1);
            let long = unlimited(n1 + extra);
            prop_assert_eq!(short.as_slice(), &long.as_slice()[..=n1]);
        }
    }
}

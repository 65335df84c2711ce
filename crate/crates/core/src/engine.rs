//! Point evaluation of `a(m)` by interval reduction.
//!
//! For `m` in `[F_n, F_{n+1})` with `n >= 5` the interval splits into three
//! subintervals:
//!
//! * low  `[F_n, F_n + F_{n-3} - 2]`: `a(m) = (-1)^(n-1) a(F_n + F_{n-3} - 2 - m)`
//! * mid  `[F_n + F_{n-3} - 1, F_n + F_{n-2} - 1]`: `a(m) = 0`
//! * high `[F_n + F_{n-2}, F_{n+1} - 1]`: `a(m) = a(m - F_n - F_{n-2})`
//!
//! Every reduction lands strictly below `F_{n-3}`, so a query on `m` takes at
//! most `locate(m)` steps. Positions below `F_5 = 5` are read from the base
//! table `a(0..4) = 1, -1, -1, 0, 1`.

use std::fmt;
use std::ops::Range;

use num_bigint::BigUint;

use crate::coeff::{Coeff, Sign};
use crate::fib::{locate_in, FibTable, NaturalIndex};

/// `a(0), ..., a(4)`.
pub const BASE_COEFFS: [Coeff; 5] = [
    Coeff::Plus,
    Coeff::Minus,
    Coeff::Minus,
    Coeff::Zero,
    Coeff::Plus,
];

/// Smallest interval index the reduction applies to.
pub const MIN_REDUCIBLE_N: usize = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StepCase {
    Base,
    Low,
    Mid,
    High,
}

impl fmt::Display for StepCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StepCase::Base => "base",
            StepCase::Low => "low",
            StepCase::Mid => "mid",
            StepCase::High => "high",
        })
    }
}

/// One step of the reduction of a position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ReductionStep {
    /// `m < 5`; the value is read from [`BASE_COEFFS`].
    Base { position: u8, value: Coeff },
    /// Reflection into `next` with sign `(-1)^(n-1)`.
    Low {
        n: usize,
        next: NaturalIndex,
        sign: Sign,
    },
    /// The zero band; evaluation stops with 0.
    Mid { n: usize },
    /// Shift into `next` with sign +1.
    High { n: usize, next: NaturalIndex },
}

impl ReductionStep {
    pub fn case(&self) -> StepCase {
        match self {
            ReductionStep::Base { .. } => StepCase::Base,
            ReductionStep::Low { .. } => StepCase::Low,
            ReductionStep::Mid { .. } => StepCase::Mid,
            ReductionStep::High { .. } => StepCase::High,
        }
    }

    pub fn n(&self) -> Option<usize> {
        match self {
            ReductionStep::Base { .. } => None,
            ReductionStep::Low { n, .. }
            | ReductionStep::Mid { n }
            | ReductionStep::High { n, .. } => Some(*n),
        }
    }

    pub fn next_position(&self) -> Option<&NaturalIndex> {
        match self {
            ReductionStep::Low { next, .. } | ReductionStep::High { next, .. } => Some(next),
            _ => None,
        }
    }

    pub fn sign_factor(&self) -> Option<Sign> {
        match self {
            ReductionStep::Low { sign, .. } => Some(*sign),
            ReductionStep::High { .. } => Some(Sign::Positive),
            _ => None,
        }
    }

    pub fn is_terminal(&self) -> bool {
        matches!(self, ReductionStep::Base { .. } | ReductionStep::Mid { .. })
    }
}

impl fmt::Display for ReductionStep {
    /// `case n next sign`, with `-` for absent fields.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReductionStep::Base { position, value } => {
                write!(f, "base - {position} {value}")
            }
            ReductionStep::Low { n, next, sign } => write!(f, "low {n} {next} {sign}"),
            ReductionStep::Mid { n } => write!(f, "mid {n} - -"),
            ReductionStep::High { n, next } => write!(f, "high {n} {next} +1"),
        }
    }
}

fn classify_in(fibs: &[BigUint], m: &BigUint) -> ReductionStep {
    if *m < BigUint::from(BASE_COEFFS.len()) {
        let position = u8::try_from(m).expect("below 5");
        return ReductionStep::Base {
            position,
            value: BASE_COEFFS[position as usize],
        };
    }
    let n = locate_in(fibs, m);
    debug_assert!(n >= MIN_REDUCIBLE_N);
    let f_n = &fibs[n];
    // F_n + F_{n-3} - 2 >= 0 since F_{n-3} >= 1
    let low_end = f_n + &fibs[n - 3] - 2u32;
    if *m <= low_end {
        return ReductionStep::Low {
            n,
            next: NaturalIndex::from(low_end - m),
            sign: Sign::power_of_minus_one(n - 1),
        };
    }
    let high_start = f_n + &fibs[n - 2];
    if *m < high_start {
        return ReductionStep::Mid { n };
    }
    ReductionStep::High {
        n,
        next: NaturalIndex::from(m - high_start),
    }
}

/// The first reduction step for `m`.
pub fn classify(m: &NaturalIndex) -> ReductionStep {
    FibTable::global().with_cover(m.as_biguint(), |fibs| classify_in(fibs, m.as_biguint()))
}

/// The full reduction path of `m`, ending in `Base` or `Mid`.
pub fn trace(m: &NaturalIndex) -> Vec<ReductionStep> {
    FibTable::global().with_cover(m.as_biguint(), |fibs| {
        let mut steps = Vec::new();
        let mut current = m.as_biguint().clone();
        loop {
            let step = classify_in(fibs, &current);
            let next = step.next_position().map(|p| p.as_biguint().clone());
            steps.push(step);
            match next {
                Some(p) => current = p,
                None => return steps,
            }
        }
    })
}

/// `a(m)`, the coefficient of `x^m` in the product series.
pub fn coefficient(m: &NaturalIndex) -> Coeff {
    FibTable::global().with_cover(m.as_biguint(), |fibs| {
        let mut sign = Sign::Positive;
        let mut current = m.as_biguint().clone();
        loop {
            match classify_in(fibs, &current) {
                ReductionStep::Base { value, .. } => return sign * value,
                ReductionStep::Mid { .. } => return Coeff::Zero,
                ReductionStep::Low { next, sign: s, .. } => {
                    sign = sign * s;
                    current = next.into_biguint();
                }
                ReductionStep::High { next, .. } => current = next.into_biguint(),
            }
        }
    })
}

/// Shorthand for [`coefficient`] on a machine-word position.
pub fn coefficient_u64(m: u64) -> Coeff {
    coefficient(&NaturalIndex::from(m))
}

/// The three half-open subintervals of `[F_n, F_{n+1})`, `n >= 5`.
///
/// `low` is empty for `n = 5`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subintervals {
    pub n: usize,
    pub low: Range<NaturalIndex>,
    pub mid: Range<NaturalIndex>,
    pub high: Range<NaturalIndex>,
}

impl Subintervals {
    pub fn new(n: usize) -> Option<Self> {
        if n < MIN_REDUCIBLE_N {
            return None;
        }
        FibTable::global().with_index(n + 1, |fibs| {
            let f_n = &fibs[n];
            let mid_start = f_n + &fibs[n - 3] - 1u32;
            let high_start = f_n + &fibs[n - 2];
            Some(Self {
                n,
                low: NaturalIndex::from(f_n.clone())..NaturalIndex::from(mid_start.clone()),
                mid: NaturalIndex::from(mid_start)..NaturalIndex::from(high_start.clone()),
                high: NaturalIndex::from(high_start)..NaturalIndex::from(fibs[n + 1].clone()),
            })
        })
    }

    pub fn case_of(&self, m: &NaturalIndex) -> Option<StepCase> {
        if self.low.contains(m) {
            Some(StepCase::Low)
        } else if self.mid.contains(m) {
            Some(StepCase::Mid)
        } else if self.high.contains(m) {
            Some(StepCase::High)
        } else {
            None
        }
    }
}

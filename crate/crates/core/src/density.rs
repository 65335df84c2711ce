//! Counts of non-zero coefficients, zero densities, and the growth analysis
//! of the count recurrence.
//!
//! `alpha(n)` is the number of non-zero coefficients among `a(0..F_n)`.
//! Counting what the expansion writes into each interval gives
//! `alpha(n+1) - alpha(n) = 2 alpha(n-3) - 1` for `n >= 5`, whose
//! characteristic polynomial `x^4 - x^3 - 2` has dominant real root
//! `r1 ~ 1.5437`, below the golden ratio. The complex pair of roots is not
//! computed.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::expand::{expand, ExpandError};
use crate::fib::{fib, NaturalIndex};

/// `alpha(2..=5)`, fixed by the base coefficients `1, -1, -1, 0, 1`.
pub const ALPHA_BASE: [u64; 4] = [1, 2, 3, 4];

/// Places used by [`render_decimal`] for reported densities.
pub const DECIMAL_PLACES: u32 = 6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DensityError {
    #[error(transparent)]
    Expand(#[from] ExpandError),
    #[error("F_{n} does not fit in memory")]
    IndexTooLarge { n: usize },
    #[error("tolerance must be positive and finite, got {0}")]
    InvalidTolerance(f64),
}

/// Non-zero counts of the first `F_n` coefficients by direct count.
pub fn alpha_direct(n: usize) -> Result<u64, DensityError> {
    Ok(alpha_direct_upto(n)?.last().copied().unwrap_or(0))
}

/// `alpha(2), ..., alpha(n_max)` from a single expansion of `a(0..F_{n_max})`.
pub fn alpha_direct_upto(n_max: usize) -> Result<Vec<u64>, DensityError> {
    if n_max < 2 {
        return Ok(Vec::new());
    }
    let f_max = fib(n_max)
        .to_usize()
        .ok_or(DensityError::IndexTooLarge { n: n_max })?;
    let arr = expand(f_max - 1)?;
    let mut counts = Vec::with_capacity(n_max - 1);
    let mut running = 0u64;
    let mut start = 0usize;
    for n in 2..=n_max {
        let end = fib(n).to_usize().expect("below F_n_max");
        running += arr.as_slice()[start..end]
            .iter()
            .filter(|c| !c.is_zero())
            .count() as u64;
        counts.push(running);
        start = end;
    }
    Ok(counts)
}

/// `alpha(n)` for `n = 2..=n_max` built from the recurrence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlphaSeries {
    values: Vec<BigUint>,
}

impl AlphaSeries {
    /// First index held by the series.
    pub const FIRST: usize = 2;

    pub fn get(&self, n: usize) -> Option<&BigUint> {
        n.checked_sub(Self::FIRST).and_then(|i| self.values.get(i))
    }

    pub fn n_max(&self) -> Option<usize> {
        (!self.values.is_empty()).then(|| self.values.len() + Self::FIRST - 1)
    }

    /// `(n, alpha(n))` in increasing `n`.
    pub fn iter(&self) -> impl Iterator<Item = (usize, &BigUint)> {
        self.values
            .iter()
            .enumerate()
            .map(|(i, v)| (i + Self::FIRST, v))
    }
}

/// Seeds `alpha(2..=5) = 1, 2, 3, 4` and extends by
/// `alpha(n+1) = alpha(n) + 2 alpha(n-3) - 1`.
pub fn alpha_recurrence(n_max: usize) -> AlphaSeries {
    let mut values: Vec<BigUint> = ALPHA_BASE.iter().map(|&v| BigUint::from(v)).collect();
    values.truncate((n_max + 1).saturating_sub(AlphaSeries::FIRST));
    for n in 5..n_max {
        // values[i] = alpha(i + 2)
        let next = &values[n - 2] + &values[n - 5] * 2u32 - 1u32;
        values.push(next);
    }
    AlphaSeries { values }
}

/// Zero density over the Fibonacci cutoff `F_n - 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DensityReport {
    pub n: usize,
    pub alpha: BigUint,
    pub fib: NaturalIndex,
    /// `1 - alpha / F_n`.
    pub p: BigRational,
}

impl DensityReport {
    pub fn decimal(&self) -> String {
        render_decimal(&self.p, DECIMAL_PLACES)
    }
}

/// Exact density `1 - alpha(n)/F_n` from the recurrence. Requires `n >= 2`.
pub fn density(n: usize) -> DensityReport {
    assert!(n >= AlphaSeries::FIRST, "density needs n >= 2");
    let alpha = alpha_recurrence(n)
        .get(n)
        .cloned()
        .expect("series reaches n");
    let f_n = fib(n);
    let p = BigRational::one()
        - BigRational::new(
            BigInt::from(alpha.clone()),
            BigInt::from(f_n.as_biguint().clone()),
        );
    DensityReport {
        n,
        alpha,
        fib: f_n,
        p,
    }
}

/// Zero density over an arbitrary cutoff `0..=last`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CutoffDensity {
    pub last: usize,
    pub zeros: u64,
    pub total: u64,
    pub p: BigRational,
}

impl CutoffDensity {
    pub fn decimal(&self) -> String {
        render_decimal(&self.p, DECIMAL_PLACES)
    }
}

/// Fraction of zero coefficients among `a(0..=last)`, by expansion.
pub fn density_at(last: usize) -> Result<CutoffDensity, DensityError> {
    let arr = expand(last)?;
    let zeros = arr.zero_count() as u64;
    let total = arr.len() as u64;
    Ok(CutoffDensity {
        last,
        zeros,
        total,
        p: BigRational::new(BigInt::from(zeros), BigInt::from(total)),
    })
}

/// `x^4 - x^3 - 2`.
pub fn char_poly(x: f64) -> f64 {
    x.powi(4) - x.powi(3) - 2.0
}

/// `x^4 - x^3 - 2` in exact integer arithmetic.
pub fn char_poly_exact(x: i64) -> i64 {
    x.pow(4) - x.pow(3) - 2
}

/// The golden ratio `(sqrt 5 + 1) / 2`.
pub fn golden_ratio() -> f64 {
    (5f64.sqrt() + 1.0) / 2.0
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CharRoots {
    /// Real root in `(1, 2)`.
    pub r1: f64,
    /// `|char_poly(r1)|`.
    pub residual: f64,
    /// Final bracket width, at most the requested tolerance.
    pub bracket: f64,
    pub lambda: f64,
    /// `char_poly_exact(-1) == 0`.
    pub minus_one_is_root: bool,
}

/// Bisects `x^4 - x^3 - 2` on `[1, 2]` until the bracket is narrower than
/// `tolerance`.
pub fn char_roots(tolerance: f64) -> Result<CharRoots, DensityError> {
    if !(tolerance > 0.0 && tolerance.is_finite()) {
        return Err(DensityError::InvalidTolerance(tolerance));
    }
    let (mut lo, mut hi) = (1.0f64, 2.0f64);
    // f(1) = -2 < 0 < 6 = f(2)
    while hi - lo > tolerance {
        let mid = lo + (hi - lo) / 2.0;
        if mid <= lo || mid >= hi {
            break;
        }
        if char_poly(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let r1 = lo + (hi - lo) / 2.0;
    Ok(CharRoots {
        r1,
        residual: char_poly(r1).abs(),
        bracket: hi - lo,
        lambda: golden_ratio(),
        minus_one_is_root: char_poly_exact(-1) == 0,
    })
}

/// One row of [`growth_report`]: ratios at index `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrowthRow {
    pub n: usize,
    /// `alpha(n+1) / alpha(n)`.
    pub alpha_ratio: BigRational,
    /// `F_{n+1} / F_n`.
    pub fib_ratio: BigRational,
    /// `alpha(n) / F_n`.
    pub alpha_over_fib: BigRational,
}

/// Growth ratios for `n = 2..=n_max`.
pub fn growth_report(n_max: usize) -> Vec<GrowthRow> {
    let alpha = alpha_recurrence(n_max + 1);
    let big = |v: &BigUint| BigInt::from(v.clone());
    (AlphaSeries::FIRST..=n_max)
        .map(|n| {
            let a_n = big(alpha.get(n).unwrap());
            let a_next = big(alpha.get(n + 1).unwrap());
            let f_n = big(fib(n).as_biguint());
            let f_next = big(fib(n + 1).as_biguint());
            GrowthRow {
                n,
                alpha_ratio: BigRational::new(a_next, a_n.clone()),
                fib_ratio: BigRational::new(f_next, f_n.clone()),
                alpha_over_fib: BigRational::new(a_n, f_n),
            }
        })
        .collect()
}

/// Lossy float view of an exact ratio.
pub fn ratio_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Fixed-point rendering with round-half-even at `places` digits.
pub fn render_decimal(r: &BigRational, places: u32) -> String {
    let scale = BigInt::from(10u32).pow(places);
    let negative = r.is_negative();
    let scaled = r.abs() * BigRational::from_integer(scale.clone());
    let (q, rem) = scaled.numer().div_rem(scaled.denom());
    let twice = rem * 2u32;
    let mut digits = q;
    match twice.cmp(scaled.denom()) {
        std::cmp::Ordering::Greater => digits += 1u32,
        std::cmp::Ordering::Equal if digits.is_odd() => digits += 1u32,
        _ => {}
    }
    let (int_part, frac_part) = digits.div_rem(&scale);
    let sign = if negative && !(int_part.is_zero() && frac_part.is_zero()) {
        "-"
    } else {
        ""
    };
    if places == 0 {
        return format!("{sign}{int_part}");
    }
    format!(
        "{sign}{int_part}.{frac_part:0>width$}",
        width = places as usize
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ratio(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn alpha(n: usize) -> u64 {
        alpha_recurrence(n).get(n).unwrap().to_u64().unwrap()
    }

    #[test]
    fn alpha_direct_examples() {
        assert_eq!(alpha_direct(2).unwrap(), 1);
        assert_eq!(alpha_direct(5).unwrap(), 4);
        assert_eq!(alpha_direct(7).unwrap(), 8);
    }

    #[test]
    fn alpha_recurrence_examples() {
        assert_eq!(alpha(6), 5);
        assert_eq!(alpha(8), 13);
        assert_eq!(alpha(10), 29);
        assert_eq!(alpha_recurrence(40).n_max(), Some(40));
        assert_eq!(alpha_recurrence(3).n_max(), Some(3));
    }

    #[test]
    fn recurrence_matches_direct_count() {
        let direct = alpha_direct_upto(30).unwrap();
        let series = alpha_recurrence(30);
        for (n, v) in series.iter() {
            assert_eq!(v.to_u64().unwrap(), direct[n - 2], "n = {n}");
        }
    }

    #[test]
    fn series_is_non_decreasing() {
        let s: Vec<_> = alpha_recurrence(200)
            .iter()
            .map(|(_, v)| v.clone())
            .collect();
        assert!(s.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn density_examples() {
        assert_eq!(density(5).p, ratio(1, 5));
        assert_eq!(density(2).p, ratio(0, 1));
        assert_eq!(density(10).p, ratio(26, 55));
        assert_eq!(density(5).decimal(), "0.200000");
    }

    #[test]
    fn density_at_examples() {
        assert_eq!(density_at(4).unwrap().p, ratio(1, 5));
        assert_eq!(density_at(0).unwrap().p, ratio(0, 1));
        // zeros at 3, 5, 6, 9, 10, 15, 16, 17
        let d = density_at(18).unwrap();
        assert_eq!((d.zeros, d.total), (8, 19));
        assert_eq!(d.p, ratio(8, 19));
    }

    #[test]
    fn density_paths_agree_on_fibonacci_cutoffs() {
        for n in 2..=25 {
            let cutoff = fib(n).to_usize().unwrap() - 1;
            assert_eq!(density_at(cutoff).unwrap().p, density(n).p, "n = {n}");
        }
    }

    #[test]
    fn char_roots_examples() {
        let roots = char_roots(1e-12).unwrap();
        assert!((roots.r1 - 1.54).abs() < 0.01);
        assert!(roots.residual < 1e-9);
        assert!(roots.minus_one_is_root);
        assert_eq!(char_poly_exact(-1), 0);
        assert!((roots.lambda - 1.62).abs() < 0.005);
        assert!(roots.r1 < roots.lambda);
        assert!(char_roots(0.0).is_err());
        assert!(char_roots(f64::NAN).is_err());
    }

    #[test]
    fn bisection_respects_tolerance() {
        for tol in [1e-2, 1e-6, 1e-9] {
            let r = char_roots(tol).unwrap();
            assert!(r.bracket <= tol);
        }
    }

    #[test]
    fn growth_examples() {
        let rows = growth_report(60);
        let lambda = golden_ratio();
        assert!((ratio_to_f64(&rows.last().unwrap().fib_ratio) - lambda).abs() < 1e-4);
        let r1 = char_roots(1e-12).unwrap().r1;
        let at40 = rows.iter().find(|r| r.n == 40).unwrap();
        assert!((ratio_to_f64(&at40.alpha_ratio) - r1).abs() < 0.02);
    }

    #[test]
    fn alpha_share_decreases_after_eight() {
        // alpha(7)/F_7 = 8/13 < 13/21 = alpha(8)/F_8 is the one rise
        let rows = growth_report(41);
        let share = |n: usize| rows[n - 2].alpha_over_fib.clone();
        assert!(share(8) > share(7));
        for n in 8..40 {
            assert!(share(n + 1) < share(n), "n = {n}");
        }
        assert!(share(6) < share(5));
        assert!(ratio_to_f64(&share(30)) < 0.25);
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(render_decimal(&ratio(26, 55), 6), "0.472727");
        assert_eq!(render_decimal(&ratio(1, 8), 2), "0.12");
        assert_eq!(render_decimal(&ratio(3, 8), 2), "0.38");
        assert_eq!(render_decimal(&ratio(-1, 3), 3), "-0.333");
        assert_eq!(render_decimal(&ratio(5, 2), 0), "2");
        assert_eq!(render_decimal(&ratio(7, 2), 0), "4");
        assert_eq!(render_decimal(&ratio(1, 1), 6), "1.000000");
    }
}

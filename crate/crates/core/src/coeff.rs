//! Tri-state coefficient values and signs.

use std::fmt;
use std::ops::{Mul, Neg};

use thiserror::Error;

/// A coefficient of the product series, always one of -1, 0, 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
#[repr(i8)]
pub enum Coeff {
    Minus = -1,
    #[default]
    Zero = 0,
    Plus = 1,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("coefficient value {0} is outside {{-1, 0, 1}}")]
pub struct CoeffRangeError(pub i64);

impl Coeff {
    pub fn value(self) -> i8 {
        self as i8
    }

    pub fn is_zero(self) -> bool {
        self == Coeff::Zero
    }
}

impl TryFrom<i64> for Coeff {
    type Error = CoeffRangeError;

    fn try_from(v: i64) -> Result<Self, Self::Error> {
        match v {
            -1 => Ok(Coeff::Minus),
            0 => Ok(Coeff::Zero),
            1 => Ok(Coeff::Plus),
            other => Err(CoeffRangeError(other)),
        }
    }
}

impl From<Coeff> for i64 {
    fn from(c: Coeff) -> i64 {
        c.value() as i64
    }
}

impl Neg for Coeff {
    type Output = Coeff;

    fn neg(self) -> Coeff {
        match self {
            Coeff::Minus => Coeff::Plus,
            Coeff::Zero => Coeff::Zero,
            Coeff::Plus => Coeff::Minus,
        }
    }
}

impl Mul for Coeff {
    type Output = Coeff;

    fn mul(self, rhs: Coeff) -> Coeff {
        match (self, rhs) {
            (Coeff::Zero, _) | (_, Coeff::Zero) => Coeff::Zero,
            (a, b) if a == b => Coeff::Plus,
            _ => Coeff::Minus,
        }
    }
}

impl fmt::Display for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value())
    }
}

/// A sign factor, +1 or -1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum Sign {
    #[default]
    Positive,
    Negative,
}

impl Sign {
    /// `(-1)^exponent`.
    pub fn power_of_minus_one(exponent: usize) -> Sign {
        if exponent.is_multiple_of(2) {
            Sign::Positive
        } else {
            Sign::Negative
        }
    }

    pub fn value(self) -> i8 {
        match self {
            Sign::Positive => 1,
            Sign::Negative => -1,
        }
    }
}

impl Mul for Sign {
    type Output = Sign;

    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Positive
        } else {
            Sign::Negative
        }
    }
}

impl Mul<Coeff> for Sign {
    type Output = Coeff;

    fn mul(self, rhs: Coeff) -> Coeff {
        match self {
            Sign::Positive => rhs,
            Sign::Negative => -rhs,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Positive => "+1",
            Sign::Negative => "-1",
        })
    }
}

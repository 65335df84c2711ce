//! Coefficients of the Fibonacci product
//!
//! ```text
//! A(x) = (1 - x)(1 - x^2)(1 - x^3)(1 - x^5)(1 - x^8)... = prod_{k>=2} (1 - x^{F_k})
//!      = 1 - x - x^2 + x^4 + x^7 - x^8 + x^11 - x^12 - x^13 + x^14 + x^18 + ...
//! ```
//!
//! Every coefficient `a(m)` is -1, 0 or 1. The crate offers two independent
//! ways to compute them and the tooling to check one against the other:
//!
//! - [`engine`]: `a(m)` for a single position of any size in `O(log m)` steps
//! - [`expand`]: the dense prefix `a(0..=N)` in linear time
//! - [`oracle`]: truncated product multiplication, partition enumeration with
//!   signed counts `r_E(m) - r_O(m)`, and checkers for the three bijections
//!   behind the interval recursion
//! - [`density`]: non-zero counts `alpha(n)` over `a(0..F_n)`, zero densities,
//!   and the root analysis of `x^4 - x^3 - 2`
//! - [`format`]: b-file, CSV and JSON serialization
//! - [`cli`]: the `fibseries` command

pub mod cli;
pub mod coeff;
pub mod density;
pub mod engine;
pub mod expand;
pub mod fib;
pub mod format;
pub mod oracle;

pub use coeff::{Coeff, Sign};
pub use engine::{
    classify, coefficient, coefficient_u64, trace, ReductionStep, StepCase, Subintervals,
};
pub use expand::{
    expand, expand_with, nonzero_positions, Budget, CoeffArray, CoeffSeq, ExpandError,
};
pub use fib::{fib, locate, prefix_sum, FibTable, NaturalIndex};
pub use oracle::{product_expand_oracle, FibPartition, PartitionOracle, PartitionTally};

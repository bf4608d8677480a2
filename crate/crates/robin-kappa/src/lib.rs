//! LCM-power divisor functions sigma^[kappa], the critical-value machinery of
//! kappa-colossally abundant numbers, and desk-scale verification of
//! Robin/Lagarias-type inequalities and mean-value asymptotics.

pub mod arith;
pub mod constants;
pub mod critical;
pub mod error;
pub mod hp;
pub mod sieve;

pub use error::{Error, Result};
pub use hp::{compare, ComparisonVerdict, HPReal, Kappa, Relation, DEFAULT_PRECISION};
pub mod poly;
pub mod props;
pub mod serial;

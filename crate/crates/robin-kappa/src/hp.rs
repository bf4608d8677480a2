//! High-precision reals, the kappa parameter, and certified comparisons.
//!
//! Every analytic quantity in this crate lives in [`HPReal`], a wrapper around
//! an MPFR float that carries its working precision. Comparisons between two
//! values are only trusted when the gap clears a threshold tied to the working
//! precision; otherwise the verdict is [`Relation::Undecided`] and callers are
//! expected to re-evaluate at higher precision (see [`certify`]).

use crate::error::{Error, Result};
use rug::float::ParseFloatError;
use rug::ops::Pow;
use rug::{Float, Integer, Rational};
use std::cmp::Ordering;
use std::fmt;

/// True when `v` is a real number strictly above `bound` (NaN fails).
pub(crate) fn exceeds(v: f64, bound: f64) -> bool {
    matches!(v.partial_cmp(&bound), Some(Ordering::Greater))
}

/// Minimum admissible working precision in bits.
pub const MIN_PRECISION: u32 = 64;
/// Default working precision for scans and tables.
pub const DEFAULT_PRECISION: u32 = 128;
/// Precision ladder used when a comparison comes back undecided.
pub const ESCALATION_LADDER: [u32; 3] = [128, 256, 512];

/// Arbitrary-precision real number; precision in bits is part of the value.
#[derive(Clone, PartialEq)]
pub struct HPReal(Float);

impl HPReal {
    pub fn from_float(f: Float) -> Self {
        debug_assert!(f.prec() >= MIN_PRECISION);
        HPReal(f)
    }

    pub fn from_f64(v: f64, prec: u32) -> Self {
        HPReal(Float::with_val(prec.max(MIN_PRECISION), v))
    }

    pub fn from_u64(v: u64, prec: u32) -> Self {
        HPReal(Float::with_val(prec.max(MIN_PRECISION), v))
    }

    pub fn from_integer(v: &Integer, prec: u32) -> Self {
        HPReal(Float::with_val(prec.max(MIN_PRECISION), v))
    }

    pub fn from_rational(v: &Rational, prec: u32) -> Self {
        HPReal(Float::with_val(prec.max(MIN_PRECISION), v))
    }

    pub fn zero(prec: u32) -> Self {
        HPReal(Float::with_val(prec.max(MIN_PRECISION), 0))
    }

    pub fn one(prec: u32) -> Self {
        HPReal(Float::with_val(prec.max(MIN_PRECISION), 1))
    }

    /// Parses a decimal string, rounding once to `prec` bits.
    pub fn parse_decimal(s: &str, prec: u32) -> Result<Self> {
        let parsed = Float::parse(s)
            .map_err(|e: ParseFloatError| Error::InvalidConfig(format!("bad number {s:?}: {e}")))?;
        Ok(HPReal(Float::with_val(prec.max(MIN_PRECISION), parsed)))
    }

    pub fn precision_bits(&self) -> u32 {
        self.0.prec()
    }

    pub fn as_float(&self) -> &Float {
        &self.0
    }

    pub fn into_float(self) -> Float {
        self.0
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64()
    }

    pub fn is_finite(&self) -> bool {
        self.0.is_finite()
    }

    pub fn is_sign_positive(&self) -> bool {
        self.0.is_sign_positive()
    }

    /// Re-rounds to a new precision (widening is exact).
    pub fn with_precision(&self, prec: u32) -> Self {
        HPReal(Float::with_val(prec.max(MIN_PRECISION), &self.0))
    }

    pub fn ln(&self) -> Self {
        HPReal(self.0.clone().ln())
    }

    pub fn ln_1p(&self) -> Self {
        HPReal(self.0.clone().ln_1p())
    }

    pub fn exp(&self) -> Self {
        HPReal(self.0.clone().exp())
    }

    pub fn exp_m1(&self) -> Self {
        HPReal(self.0.clone().exp_m1())
    }

    pub fn sqrt(&self) -> Self {
        HPReal(self.0.clone().sqrt())
    }

    pub fn abs(&self) -> Self {
        HPReal(self.0.clone().abs())
    }

    pub fn neg(&self) -> Self {
        HPReal(-self.0.clone())
    }

    pub fn recip(&self) -> Self {
        HPReal(self.0.clone().recip())
    }

    pub fn floor(&self) -> Self {
        HPReal(self.0.clone().floor())
    }

    /// `self^exponent` for a real exponent, at the max of both precisions.
    pub fn pow(&self, exponent: &HPReal) -> Self {
        let prec = self.0.prec().max(exponent.0.prec());
        HPReal(Float::with_val(prec, (&self.0).pow(&exponent.0)))
    }

    pub fn powi(&self, exponent: i32) -> Self {
        HPReal(Float::with_val(self.0.prec(), (&self.0).pow(exponent)))
    }

    /// Decimal rendering with enough digits to reproduce every stored bit.
    pub fn to_decimal_string(&self) -> String {
        let digits = (self.0.prec() as f64 * std::f64::consts::LN_2 / std::f64::consts::LN_10)
            .ceil() as usize
            + 2;
        self.0.to_string_radix(10, Some(digits))
    }
}

impl fmt::Debug for HPReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HPReal({} @ {} bits)", self.0, self.0.prec())
    }
}

impl fmt::Display for HPReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_decimal_string())
    }
}

impl PartialOrd for HPReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.0.partial_cmp(&other.0)
    }
}

macro_rules! hp_binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl std::ops::$trait for &HPReal {
            type Output = HPReal;
            fn $method(self, rhs: &HPReal) -> HPReal {
                let prec = self.0.prec().max(rhs.0.prec());
                HPReal(Float::with_val(prec, &self.0 $op &rhs.0))
            }
        }
        impl std::ops::$trait for HPReal {
            type Output = HPReal;
            fn $method(self, rhs: HPReal) -> HPReal {
                (&self) $op (&rhs)
            }
        }
    };
}

hp_binop!(Add, add, +);
hp_binop!(Sub, sub, -);
hp_binop!(Mul, mul, *);
hp_binop!(Div, div, /);

/// The exponent parameter: an exact integer >= 2 or a high-precision real > 1.
///
/// Integer kappa selects exact big-integer evaluation paths; real kappa routes
/// through `exp(kappa ln x)`.
#[derive(Clone, Debug)]
pub enum Kappa {
    Int(u32),
    Real(HPReal),
}

impl Kappa {
    pub fn integer(k: u32) -> Result<Self> {
        if k < 2 {
            return Err(Error::KappaOutOfRange(k.to_string()));
        }
        Ok(Kappa::Int(k))
    }

    pub fn real(v: HPReal) -> Result<Self> {
        if !exceeds(v.to_f64(), 1.0) {
            return Err(Error::KappaOutOfRange(v.to_decimal_string()));
        }
        Ok(Kappa::Real(v))
    }

    /// Parses "3" as the exact integer 3 and "3.89" as a real.
    pub fn parse(s: &str, prec: u32) -> Result<Self> {
        let t = s.trim();
        if let Ok(k) = t.parse::<u32>() {
            return Kappa::integer(k);
        }
        let v = HPReal::parse_decimal(t, prec)?;
        Kappa::real(v)
    }

    pub fn as_int(&self) -> Option<u32> {
        match self {
            Kappa::Int(k) => Some(*k),
            Kappa::Real(_) => None,
        }
    }

    pub fn as_hp(&self, prec: u32) -> HPReal {
        match self {
            Kappa::Int(k) => HPReal::from_u64(u64::from(*k), prec),
            Kappa::Real(v) => v.with_precision(prec),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Kappa::Int(k) => f64::from(*k),
            Kappa::Real(v) => v.to_f64(),
        }
    }

    /// Stable key for per-kappa caches; exact for both variants.
    pub fn cache_key(&self) -> String {
        match self {
            Kappa::Int(k) => format!("i{k}"),
            Kappa::Real(v) => format!("r{}", v.as_float().to_string_radix(16, None)),
        }
    }
}

impl fmt::Display for Kappa {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Kappa::Int(k) => write!(f, "{k}"),
            Kappa::Real(v) => write!(f, "{v}"),
        }
    }
}

/// Outcome of a precision-aware comparison.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Less,
    Greater,
    Undecided,
}

/// A comparison verdict together with the observed gap.
#[derive(Clone, Debug)]
pub struct ComparisonVerdict {
    pub relation: Relation,
    pub margin: HPReal,
}

impl ComparisonVerdict {
    pub fn is_decided(&self) -> bool {
        self.relation != Relation::Undecided
    }
}

/// Compares two values, trusting the sign of the difference only when the gap
/// exceeds `2^(-min_prec/2) * max(|lhs|, |rhs|)`.
pub fn compare(lhs: &HPReal, rhs: &HPReal) -> ComparisonVerdict {
    let min_prec = lhs.precision_bits().min(rhs.precision_bits());
    let diff = lhs - rhs;
    let mag = if lhs.abs() >= rhs.abs() { lhs.abs() } else { rhs.abs() };
    let threshold = &mag * &HPReal::from_float(Float::with_val(min_prec, 1) >> (min_prec / 2));
    let margin = diff.abs();
    let relation = if margin > threshold {
        if diff.is_sign_positive() {
            Relation::Greater
        } else {
            Relation::Less
        }
    } else {
        Relation::Undecided
    };
    ComparisonVerdict { relation, margin }
}

/// Evaluates `(lhs, rhs)` along the precision ladder until the comparison is
/// decided. `label` names the failing input in the error.
pub fn certify<F>(mut eval: F, ladder: &[u32], label: u64) -> Result<ComparisonVerdict>
where
    F: FnMut(u32) -> (HPReal, HPReal),
{
    let mut last = None;
    for &prec in ladder {
        let (l, r) = eval(prec);
        let v = compare(&l, &r);
        if v.is_decided() {
            return Ok(v);
        }
        last = Some(v);
    }
    let _ = last;
    Err(Error::Undecided {
        n: label,
        max_bits: ladder.last().copied().unwrap_or(0),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_uses_max_precision() {
        let a = HPReal::from_f64(1.5, 64);
        let b = HPReal::from_f64(2.25, 192);
        assert_eq!((&a + &b).precision_bits(), 192);
        assert_eq!((&a * &b).precision_bits(), 192);
    }

    #[test]
    fn compare_trivial_cases() {
        let one = HPReal::from_f64(1.0, 128);
        let two = HPReal::from_f64(2.0, 128);
        assert_eq!(compare(&one, &two).relation, Relation::Less);
        assert_eq!(compare(&two, &one).relation, Relation::Greater);
        // zero margin is never decided
        assert_eq!(compare(&one, &one).relation, Relation::Undecided);
    }

    #[test]
    fn compare_near_threshold() {
        // gap of 2^-70 at 128 bits clears the 2^-64 threshold scaled by magnitude? No:
        // threshold is 2^-64 * max(|l|,|r|) = 2^-64, gap 2^-70 is below it.
        let one = HPReal::from_f64(1.0, 128);
        let close = &one + &HPReal::from_float(Float::with_val(128, 1) >> 70);
        assert_eq!(compare(&one, &close).relation, Relation::Undecided);
        let far = &one + &HPReal::from_float(Float::with_val(128, 1) >> 50);
        assert_eq!(compare(&far, &one).relation, Relation::Greater);
    }

    #[test]
    fn kappa_domain_guards() {
        assert!(Kappa::integer(2).is_ok());
        assert!(Kappa::integer(1).is_err());
        assert!(Kappa::real(HPReal::from_f64(1.0, 64)).is_err());
        assert!(Kappa::real(HPReal::from_f64(1.0000001, 64)).is_ok());
        assert!(matches!(Kappa::parse("7", 64), Ok(Kappa::Int(7))));
        assert!(matches!(Kappa::parse("3.89", 64), Ok(Kappa::Real(_))));
        assert!(Kappa::parse("1.0", 64).is_err());
    }

    #[test]
    fn certify_escalates() {
        // two values equal at 128 bits but separated at 256
        let f = |prec: u32| {
            let tiny = HPReal::from_float(Float::with_val(prec, 1) >> 100);
            let one = HPReal::one(prec);
            if prec >= 256 {
                (&one + &tiny, one)
            } else {
                (one.clone(), one)
            }
        };
        let v = certify(f, &ESCALATION_LADDER, 0).unwrap();
        assert_eq!(v.relation, Relation::Greater);
    }

    #[test]
    fn decimal_round_trip() {
        let x = HPReal::from_f64(0.1, 128).ln().exp();
        let s = x.to_decimal_string();
        let y = HPReal::parse_decimal(&s, 128).unwrap();
        let gap = (&x - &y).abs();
        assert!(gap < HPReal::from_float(Float::with_val(128, 1) >> 120));
    }
}

//! The exact ordered field every construction in this crate is generic over.
//!
//! Set algebra, Sturm counting and canonical comparisons all rely on exact
//! equality and a total order, so floating point types are deliberately not
//! admitted. Any `num_rational::Ratio<I>` over a signed integer type works;
//! `BigRational` is the default used by the crate-root aliases, while the
//! fixed-width ratios are handy for small inputs and overflow on large ones.

use std::fmt::{Debug, Display};
use std::hash::Hash;
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{FromPrimitive, Num, Signed, ToPrimitive};

pub trait Scalar:
    Clone
    + Ord
    + Hash
    + Debug
    + Display
    + FromStr
    + Num
    + Signed
    + FromPrimitive
    + ToPrimitive
    + Send
    + Sync
    + 'static
{
    /// Largest integer not above `self`.
    fn floor_int(&self) -> Self;
    /// Smallest integer not below `self`.
    fn ceil_int(&self) -> Self;
    /// Numerator in lowest terms, as a scalar.
    fn numer_scalar(&self) -> Self;
    /// Denominator in lowest terms (always positive), as a scalar.
    fn denom_scalar(&self) -> Self;
    /// Least common multiple of two integral scalars.
    fn lcm_int(&self, other: &Self) -> Self;

    fn from_int(n: i64) -> Self {
        Self::from_i64(n).expect("i64 is representable")
    }

    fn ratio(n: i64, d: i64) -> Self {
        Self::from_int(n) / Self::from_int(d)
    }

    fn two() -> Self {
        Self::one() + Self::one()
    }

    fn midpoint(a: &Self, b: &Self) -> Self {
        (a.clone() + b.clone()) / Self::two()
    }

    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl<I> Scalar for Ratio<I>
where
    I: Integer + Signed + Clone + Hash + Debug + Display + Send + Sync + 'static,
    Ratio<I>: FromStr + FromPrimitive + ToPrimitive,
{
    fn floor_int(&self) -> Self {
        self.floor()
    }

    fn ceil_int(&self) -> Self {
        self.ceil()
    }

    fn numer_scalar(&self) -> Self {
        Ratio::from_integer(self.numer().clone())
    }

    fn denom_scalar(&self) -> Self {
        Ratio::from_integer(self.denom().clone())
    }

    fn lcm_int(&self, other: &Self) -> Self {
        debug_assert!(self.is_integer() && other.is_integer());
        Ratio::from_integer(self.numer().lcm(other.numer()))
    }
}

/// The simplest rational (smallest denominator, then smallest magnitude
/// numerator) in the closed interval `[lo, hi]`.
pub fn simplest_between<T: Scalar>(lo: &T, hi: &T) -> T {
    debug_assert!(lo <= hi);
    if lo.is_negative() && hi.is_positive() || lo.is_zero() || hi.is_zero() {
        return T::zero();
    }
    if hi.is_negative() {
        return -simplest_between(&-hi.clone(), &-lo.clone());
    }
    // 0 < lo <= hi: continued-fraction descent
    let fl = lo.floor_int();
    if fl == *lo {
        return lo.clone();
    }
    if fl.clone() + T::one() <= *hi {
        return fl + T::one();
    }
    // lo and hi share the integer part fl and lo is not an integer
    let inner_lo = T::one() / (hi.clone() - fl.clone());
    let inner_hi = T::one() / (lo.clone() - fl.clone());
    fl + T::one() / simplest_between(&inner_lo, &inner_hi)
}

/// Serializes a scalar through its `Display` form, e.g. `"3/4"`.
pub(crate) mod as_text {
    use serde::Serializer;

    pub fn serialize<T: std::fmt::Display, S: Serializer>(x: &T, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(x)
    }
}

pub(crate) mod as_text_seq {
    use serde::ser::{SerializeSeq, Serializer};

    pub fn serialize<T: std::fmt::Display, S: Serializer>(xs: &[T], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(xs.len()))?;
        for x in xs {
            seq.serialize_element(&x.to_string())?;
        }
        seq.end()
    }
}

//! Exact construction and verification of linear extension operators for
//! real functions on sets that are simultaneously F_sigma and G_delta.
//!
//! The representable universe is deliberately small and fully decidable:
//! sets are finite unions of intervals and points with rational endpoints
//! ([`realset`]), functions are piecewise polynomials with rational
//! coefficients over such sets ([`pwfunc`]). On top of that the crate builds
//! the algebraic retraction onto a set ([`retraction`]), the extension
//! operators `f -> f o phi` and the constant-anchor extension ([`extend`]),
//! and witness-producing classifiers for the first Borel classes
//! ([`classify`]). Every claimed operator property is checked as an exact
//! identity of canonical forms.
//!
//! All types are generic over an exact ordered field ([`Scalar`]); the
//! aliases below fix it to arbitrary-precision rationals.

pub mod classify;
pub mod extend;
pub mod parse;
pub mod poly;
pub mod pwfunc;
pub mod realset;
pub mod retraction;
pub mod roots;
pub mod scalar;

pub use parse::{parse_rational, ParseError};
pub use poly::Poly;
pub use pwfunc::{PiecewiseFunc, Precision};
pub use realset::{Endpoint, Interval, RealSet};
pub use retraction::Retraction;
pub use scalar::Scalar;

pub use num_rational::{BigRational, Rational64};

/// Arbitrary-precision rational, the default scalar.
pub type Rational = BigRational;
pub type RationalInterval = Interval<Rational>;
pub type RationalSet = RealSet<Rational>;
pub type RationalPoly = Poly<Rational>;
pub type RationalFunc = PiecewiseFunc<Rational>;
pub type RationalRetraction = Retraction<Rational>;

/// Default tolerance for approximate split points and norm enclosures, `10^-9`.
pub fn default_tolerance<T: Scalar>() -> T {
    T::one() / T::from_int(1_000_000_000)
}

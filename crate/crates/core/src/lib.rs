//! Steinitz numbers, absolutely algebraic fields `GF(q^N)` and their maximal
//! subrings, with an exhaustive finite-ring oracle, classification checks and
//! places of rational function fields.

pub mod absfield;
pub mod arith;
pub mod classify;
pub mod finring;
pub mod funcfield;
pub mod poly;
pub mod rationals;
pub mod steinitz;

pub use absfield::{AbsField, AbsFieldError, Cardinal, Degree, MaximalSubringDescriptor};
pub use steinitz::{Exponent, SteinitzError, SteinitzNumber};

use num_bigint::BigInt;
use num_rational::Ratio;

/// `Z_(p)` over machine integers.
pub type Localization64 = rationals::Localization<i64>;
/// `Z_(p)` over arbitrary-precision integers.
pub type BigLocalization = rationals::Localization<BigInt>;
pub type Rational64 = Ratio<i64>;
pub type BigRational = Ratio<BigInt>;

/// Whether `x ∈ Z_(p)`.
pub fn rationals_localization_membership(x: &Rational64, p: i64) -> bool {
    rationals::localization_membership(x, &p)
}

/// The residue characteristic of `Z_(p)`.
pub fn rationals_residue_char(p: i64) -> i64 {
    rationals::residue_char(&p)
}

//! Steinitz (supernatural) numbers.
//!
//! A Steinitz number is a formal product `∏ p^e` over all primes with exponents
//! in `{0, 1, 2, …, ∞}`. We store the finitely many primes whose exponent differs
//! from a common default exponent, so both ordinary naturals (default `0`) and
//! closure-like numbers such as `all^inf` (default `∞`) are finite values.
//!
//! Text syntax (whitespace around `*` is ignored):
//!
//! ```text
//! stexpr := "1" | term ( "*" term )* ( "*" "rest^" dexp )? | "all^inf"
//! term   := prime "^" exp | prime
//! exp    := natural | "inf"
//! dexp   := "0" | "inf" | natural
//! ```
//!
//! A lone `rest^k` is also accepted; it is how a number with no exceptional
//! primes and a finite non-zero default renders.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::Add;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::arith;

/// Largest natural (in bits) that [`SteinitzNumber::as_natural`] will materialize.
pub const MAX_NATURAL_BITS: u64 = 1 << 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SteinitzError {
    #[error("syntax error in Steinitz expression {input:?}: {reason}")]
    Syntax { input: String, reason: String },
    #[error("{0} is not prime")]
    CompositeBase(u64),
    #[error("prime {0} appears more than once")]
    DuplicatePrime(u64),
    #[error("{divisor} does not divide {dividend}")]
    NotDivisible { dividend: String, divisor: String },
    #[error("quotient takes ∞/∞ at {0}; use finite_part or stable_part instead")]
    AmbiguousInfiniteQuotient(String),
    #[error("natural value exceeds {MAX_NATURAL_BITS} bits")]
    NaturalTooLarge,
}

/// An exponent in `{0, 1, 2, …, ∞}`, totally ordered with `∞` on top.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Exponent {
    Finite(u64),
    Infinite,
}

impl Exponent {
    pub const ZERO: Exponent = Exponent::Finite(0);
    pub const ONE: Exponent = Exponent::Finite(1);

    pub fn is_finite(self) -> bool {
        matches!(self, Exponent::Finite(_))
    }

    pub fn is_zero(self) -> bool {
        self == Exponent::ZERO
    }

    pub fn finite(self) -> Option<u64> {
        match self {
            Exponent::Finite(e) => Some(e),
            Exponent::Infinite => None,
        }
    }

    /// `self − other`, or `None` when `other > self` or both are infinite.
    pub fn checked_sub(self, other: Exponent) -> Option<Exponent> {
        match (self, other) {
            (Exponent::Infinite, Exponent::Infinite) => None,
            (Exponent::Infinite, Exponent::Finite(_)) => Some(Exponent::Infinite),
            (Exponent::Finite(_), Exponent::Infinite) => None,
            (Exponent::Finite(a), Exponent::Finite(b)) => a.checked_sub(b).map(Exponent::Finite),
        }
    }
}

impl Add for Exponent {
    type Output = Exponent;

    fn add(self, rhs: Exponent) -> Exponent {
        match (self, rhs) {
            (Exponent::Finite(a), Exponent::Finite(b)) => {
                Exponent::Finite(a.checked_add(b).expect("Steinitz exponent overflow"))
            }
            _ => Exponent::Infinite,
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(e) => write!(f, "{e}"),
            Exponent::Infinite => f.write_str("inf"),
        }
    }
}

impl FromStr for Exponent {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s == "inf" {
            return Ok(Exponent::Infinite);
        }
        if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
            return Err(format!("expected a natural or `inf`, found {s:?}"));
        }
        s.parse::<u64>()
            .map(Exponent::Finite)
            .map_err(|e| format!("exponent {s:?}: {e}"))
    }
}

/// A supernatural number in canonical form: no entry of `exceptional` equals
/// `default`, so derived equality is equality of Steinitz numbers.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SteinitzNumber {
    exceptional: BTreeMap<u64, Exponent>,
    default: Exponent,
}

impl SteinitzNumber {
    /// The Steinitz number `1`.
    pub fn one() -> Self {
        Self {
            exceptional: BTreeMap::new(),
            default: Exponent::ZERO,
        }
    }

    /// `all^inf`, the Steinitz number of an algebraic closure.
    pub fn all_infinite() -> Self {
        Self {
            exceptional: BTreeMap::new(),
            default: Exponent::Infinite,
        }
    }

    /// Builds a number from `(prime, exponent)` pairs and the exponent of every
    /// unlisted prime.
    pub fn from_parts<I>(entries: I, default: Exponent) -> Result<Self, SteinitzError>
    where
        I: IntoIterator<Item = (u64, Exponent)>,
    {
        let mut exceptional = BTreeMap::new();
        for (p, e) in entries {
            if !arith::is_prime(p) {
                return Err(SteinitzError::CompositeBase(p));
            }
            if exceptional.insert(p, e).is_some() {
                return Err(SteinitzError::DuplicatePrime(p));
            }
        }
        Ok(Self::canonical(exceptional, default))
    }

    /// `p^e` for a single prime.
    pub fn prime_power(p: u64, e: Exponent) -> Result<Self, SteinitzError> {
        Self::from_parts([(p, e)], Exponent::ZERO)
    }

    /// The Steinitz number of a positive natural.
    pub fn from_natural(n: u64) -> Self {
        let entries = arith::factorize(n)
            .into_iter()
            .map(|(p, e)| (p, Exponent::Finite(e as u64)))
            .collect();
        Self::canonical(entries, Exponent::ZERO)
    }

    fn canonical(mut exceptional: BTreeMap<u64, Exponent>, default: Exponent) -> Self {
        exceptional.retain(|_, e| *e != default);
        Self {
            exceptional,
            default,
        }
    }

    /// Exponent of the prime `p`. `p` is assumed prime.
    pub fn exponent(&self, p: u64) -> Exponent {
        debug_assert!(arith::is_prime(p));
        self.exceptional.get(&p).copied().unwrap_or(self.default)
    }

    /// Exponent shared by every prime not listed in [`Self::exceptional`].
    pub fn default_exponent(&self) -> Exponent {
        self.default
    }

    /// Primes whose exponent differs from the default, in increasing order.
    pub fn exceptional(&self) -> impl Iterator<Item = (u64, Exponent)> + '_ {
        self.exceptional.iter().map(|(&p, &e)| (p, e))
    }

    pub fn is_one(&self) -> bool {
        self.default.is_zero() && self.exceptional.is_empty()
    }

    /// Prime-by-prime combination; `f` is applied to the defaults as well.
    fn zip_with(&self, other: &Self, f: impl Fn(Exponent, Exponent) -> Exponent) -> Self {
        let mut out = BTreeMap::new();
        for &p in self.exceptional.keys().chain(other.exceptional.keys()) {
            out.entry(p)
                .or_insert_with(|| f(self.exponent(p), other.exponent(p)));
        }
        Self::canonical(out, f(self.default, other.default))
    }

    /// True iff `pred` holds at every prime (the listed ones and the default).
    fn all_primes(&self, other: &Self, pred: impl Fn(Exponent, Exponent) -> bool) -> bool {
        pred(self.default, other.default)
            && self
                .exceptional
                .keys()
                .chain(other.exceptional.keys())
                .all(|&p| pred(self.exponent(p), other.exponent(p)))
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a + b)
    }

    /// `self | other`.
    pub fn divides(&self, other: &Self) -> bool {
        self.all_primes(other, |a, b| a <= b)
    }

    /// `self / divisor`. Fails if `divisor ∤ self` or if some prime has
    /// exponent `∞` in both.
    pub fn quotient(&self, divisor: &Self) -> Result<Self, SteinitzError> {
        if !divisor.divides(self) {
            return Err(SteinitzError::NotDivisible {
                dividend: self.to_string(),
                divisor: divisor.to_string(),
            });
        }
        if self.default == Exponent::Infinite && divisor.default == Exponent::Infinite {
            return Err(SteinitzError::AmbiguousInfiniteQuotient(
                "every unlisted prime".into(),
            ));
        }
        let mut out = BTreeMap::new();
        for &p in self.exceptional.keys().chain(divisor.exceptional.keys()) {
            let diff = self
                .exponent(p)
                .checked_sub(divisor.exponent(p))
                .ok_or_else(|| SteinitzError::AmbiguousInfiniteQuotient(format!("prime {p}")))?;
            out.insert(p, diff);
        }
        let default = self
            .default
            .checked_sub(divisor.default)
            .expect("divisibility checked above");
        Ok(Self::canonical(out, default))
    }

    /// Exponent `∞` exactly where `self` has exponent `∞`, `0` elsewhere.
    pub fn stable_part(&self) -> Self {
        let keep = |e: Exponent| if e.is_finite() { Exponent::ZERO } else { e };
        Self::canonical(
            self.exceptional
                .iter()
                .map(|(&p, &e)| (p, keep(e)))
                .collect(),
            keep(self.default),
        )
    }

    /// The finite exponents of `self`, with `0` where `self` has `∞`.
    pub fn finite_part(&self) -> Self {
        let keep = |e: Exponent| if e.is_finite() { e } else { Exponent::ZERO };
        Self::canonical(
            self.exceptional
                .iter()
                .map(|(&p, &e)| (p, keep(e)))
                .collect(),
            keep(self.default),
        )
    }

    /// Greatest common divisor (exponentwise min).
    pub fn meet(&self, other: &Self) -> Self {
        self.zip_with(other, Exponent::min)
    }

    /// Least common multiple (exponentwise max).
    pub fn join(&self, other: &Self) -> Self {
        self.zip_with(other, Exponent::max)
    }

    /// True when the number is an ordinary positive natural.
    pub fn is_natural(&self) -> bool {
        self.default.is_zero() && self.exceptional.values().all(|e| e.is_finite())
    }

    /// The natural `∏ p^e`, or `None` if any exponent is infinite or infinitely
    /// many primes occur.
    pub fn as_natural(&self) -> Result<Option<BigUint>, SteinitzError> {
        if !self.is_natural() {
            return Ok(None);
        }
        let mut bits = 0u64;
        for (&p, e) in &self.exceptional {
            let e = e.finite().expect("natural");
            let pbits = 64 - p.leading_zeros() as u64;
            bits = bits.saturating_add(e.saturating_mul(pbits));
        }
        if bits > MAX_NATURAL_BITS {
            return Err(SteinitzError::NaturalTooLarge);
        }
        let mut n = BigUint::one();
        for (&p, e) in &self.exceptional {
            n *= BigUint::from(p).pow(e.finite().expect("natural") as u32);
        }
        Ok(Some(n))
    }

    /// `as_natural` narrowed to `u64`.
    pub fn to_u64(&self) -> Option<u64> {
        if !self.is_natural() {
            return None;
        }
        self.exceptional.iter().try_fold(1u64, |acc, (&p, e)| {
            let e = u32::try_from(e.finite()?).ok()?;
            acc.checked_mul(p.checked_pow(e)?)
        })
    }

    /// Sum of all exponents, when finite.
    pub fn exponent_sum(&self) -> Option<u64> {
        if !self.default.is_zero() {
            return None;
        }
        self.exceptional
            .values()
            .try_fold(0u64, |acc, e| Some(acc + e.finite()?))
    }

    /// The least prime whose exponent is finite, if any.
    pub fn least_finite_prime(&self) -> Option<u64> {
        if self.default == Exponent::Infinite {
            return self
                .exceptional
                .iter()
                .find(|(_, e)| e.is_finite())
                .map(|(&p, _)| p);
        }
        arith::primes().find(|&p| self.exponent(p).is_finite())
    }

    /// Render in the canonical text syntax, primes increasing.
    pub fn render(&self) -> String {
        self.to_string()
    }
}

impl PartialOrd for SteinitzNumber {
    /// The divisibility order.
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self.divides(other), other.divides(self)) {
            (true, true) => Some(Ordering::Equal),
            (true, false) => Some(Ordering::Less),
            (false, true) => Some(Ordering::Greater),
            (false, false) => None,
        }
    }
}

impl fmt::Display for SteinitzNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exceptional.is_empty() {
            return match self.default {
                Exponent::Finite(0) => f.write_str("1"),
                Exponent::Infinite => f.write_str("all^inf"),
                d => write!(f, "rest^{d}"),
            };
        }
        let mut first = true;
        for (p, e) in &self.exceptional {
            if !first {
                f.write_str(" * ")?;
            }
            first = false;
            match e {
                Exponent::Finite(1) => write!(f, "{p}")?,
                e => write!(f, "{p}^{e}")?,
            }
        }
        if !self.default.is_zero() {
            write!(f, " * rest^{}", self.default)?;
        }
        Ok(())
    }
}

impl FromStr for SteinitzNumber {
    type Err = SteinitzError;

    fn from_str(text: &str) -> Result<Self, SteinitzError> {
        parse(text)
    }
}

/// Parses the text syntax described in the module docs.
pub fn parse(text: &str) -> Result<SteinitzNumber, SteinitzError> {
    let syntax = |reason: String| SteinitzError::Syntax {
        input: text.to_string(),
        reason,
    };
    let trimmed = text.trim();
    match trimmed {
        "1" => return Ok(SteinitzNumber::one()),
        "all^inf" => return Ok(SteinitzNumber::all_infinite()),
        "" => return Err(syntax("empty expression".into())),
        _ => {}
    }
    let pieces: Vec<&str> = trimmed.split('*').map(str::trim).collect();
    let mut default = Exponent::ZERO;
    let mut entries = Vec::new();
    for (i, piece) in pieces.iter().enumerate() {
        if let Some(d) = piece.strip_prefix("rest^") {
            if i + 1 != pieces.len() {
                return Err(syntax("`rest^` must be the last factor".into()));
            }
            default = d.parse().map_err(syntax)?;
            continue;
        }
        if piece.is_empty() {
            return Err(syntax("empty factor".into()));
        }
        let (base, exp) = match piece.split_once('^') {
            Some((b, e)) => (b, e.parse::<Exponent>().map_err(syntax)?),
            None => (*piece, Exponent::ONE),
        };
        if base.is_empty() || !base.bytes().all(|b| b.is_ascii_digit()) {
            return Err(syntax(format!("expected a prime, found {base:?}")));
        }
        let p: u64 = base
            .parse()
            .map_err(|e| syntax(format!("prime {base:?}: {e}")))?;
        entries.push((p, exp));
    }
    SteinitzNumber::from_parts(entries, default)
}

impl Serialize for SteinitzNumber {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for SteinitzNumber {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

//! Absolutely algebraic fields `GF(q^N)` and their maximal subrings.
//!
//! A subfield of the algebraic closure of `F_q` is determined by its Steinitz
//! number, and two such subfields are isomorphic only when they are equal, so an
//! [`AbsField`] is just the pair `(q, N)` and equality is isomorphism.
//!
//! The maximal subrings of `GF(q^N)` are the subfields `GF(q^{N/p})` for the
//! primes `p` with finite non-zero exponent in `N`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::arith;
use crate::steinitz::{SteinitzError, SteinitzNumber};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AbsFieldError {
    #[error(transparent)]
    Steinitz(#[from] SteinitzError),
    #[error("characteristic {0} is not prime")]
    CompositeCharacteristic(u64),
    #[error("bad field literal {input:?}: {reason}")]
    Syntax { input: String, reason: String },
    #[error("{sub} is not a subfield of {sup}")]
    NotASubfield { sub: String, sup: String },
    #[error("{0} has infinitely many maximal subrings")]
    InfinitelyManyMaximalSubrings(String),
    #[error("{count} chains exceed the limit of {limit}")]
    LimitExceeded { count: BigUint, limit: usize },
    #[error("degree must be at least 1")]
    ZeroDegree,
    #[error("{field} has no irreducible polynomial of degree {degree}")]
    NoIrreducibleOfThatDegree { field: String, degree: u64 },
}

/// The field `GF(q^N)`: characteristic `q` and Steinitz number `N`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AbsField {
    characteristic: u64,
    st: SteinitzNumber,
}

/// An extension degree `[sup : sub]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Degree {
    Finite(BigUint),
    Infinite,
}

impl Serialize for Degree {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Degree::Finite(n) => match n.to_u64() {
                Some(small) => s.serialize_u64(small),
                None => s.collect_str(n),
            },
            Degree::Infinite => s.serialize_str("infinite"),
        }
    }
}

/// A count that is either finite or countably infinite.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum Cardinal {
    Finite(usize),
    #[serde(serialize_with = "serialize_aleph0")]
    AlephZero,
}

fn serialize_aleph0<S: Serializer>(s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str("aleph0")
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::Finite(n) => write!(f, "{n}"),
            Degree::Infinite => f.write_str("infinite"),
        }
    }
}

impl fmt::Display for Cardinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cardinal::Finite(n) => write!(f, "{n}"),
            Cardinal::AlephZero => f.write_str("aleph0"),
        }
    }
}

/// The maximal subring `E_p` of `parent`: the subfield with Steinitz number
/// `st(parent) / p`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MaximalSubringDescriptor {
    pub parent: AbsField,
    pub prime: u64,
    pub subfield: AbsField,
}

impl Serialize for MaximalSubringDescriptor {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut s = serializer.serialize_struct("MaximalSubringDescriptor", 2)?;
        s.serialize_field("prime", &self.prime)?;
        s.serialize_field("subfield_st", &self.subfield.st)?;
        s.end()
    }
}

impl AbsField {
    pub fn new(characteristic: u64, st: SteinitzNumber) -> Result<Self, AbsFieldError> {
        if !arith::is_prime(characteristic) {
            return Err(AbsFieldError::CompositeCharacteristic(characteristic));
        }
        Ok(Self { characteristic, st })
    }

    /// The finite field `F_{q^n}`.
    pub fn finite(characteristic: u64, degree: u64) -> Result<Self, AbsFieldError> {
        if degree == 0 {
            return Err(AbsFieldError::ZeroDegree);
        }
        Self::new(characteristic, SteinitzNumber::from_natural(degree))
    }

    /// The algebraic closure of `F_q`.
    pub fn closure(characteristic: u64) -> Result<Self, AbsFieldError> {
        Self::new(characteristic, SteinitzNumber::all_infinite())
    }

    pub fn characteristic(&self) -> u64 {
        self.characteristic
    }

    pub fn st(&self) -> &SteinitzNumber {
        &self.st
    }

    fn with_st(&self, st: SteinitzNumber) -> Self {
        Self {
            characteristic: self.characteristic,
            st,
        }
    }

    /// `[F : F_q]` when the field is finite and the degree fits in a `u64`.
    pub fn finite_degree(&self) -> Option<u64> {
        self.st.to_u64()
    }

    /// Number of elements when the field is finite and that fits in a `u64`.
    pub fn order(&self) -> Option<u64> {
        let n = u32::try_from(self.finite_degree()?).ok()?;
        self.characteristic.checked_pow(n)
    }

    pub fn is_subfield_of(&self, sup: &AbsField) -> bool {
        is_subfield(self, sup)
    }
}

impl fmt::Display for AbsField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{})", self.characteristic, self.st)
    }
}

impl FromStr for AbsField {
    type Err = AbsFieldError;

    fn from_str(text: &str) -> Result<Self, AbsFieldError> {
        parse_field(text)
    }
}

impl Serialize for AbsField {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Parses `GF(q^stexpr)` (the Steinitz expression may be wrapped in braces),
/// or the shorthands `F_{q^n}`, `F_{q}` and `F_q`. A prime power `q = p^k`
/// is read as `GF(p^{k·N})`.
pub fn parse_field(text: &str) -> Result<AbsField, AbsFieldError> {
    let t = text.trim();
    let syntax = |reason: &str| AbsFieldError::Syntax {
        input: text.to_string(),
        reason: reason.to_string(),
    };
    let number = |s: &str| -> Result<u64, AbsFieldError> {
        let s = s.trim();
        if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
            return Err(syntax("expected a natural number"));
        }
        s.parse().map_err(|_| syntax("number out of range"))
    };
    if let Some(inner) = t.strip_prefix("GF(").and_then(|r| r.strip_suffix(')')) {
        let (q, rest) = inner
            .split_once('^')
            .ok_or_else(|| syntax("expected GF(q^N)"))?;
        let rest = rest.trim();
        let stexpr = rest
            .strip_prefix('{')
            .and_then(|r| r.strip_suffix('}'))
            .unwrap_or(rest);
        let (p, k) = base_prime(number(q)?)?;
        let st: SteinitzNumber = stexpr.parse()?;
        return AbsField::new(p, st.mul(&SteinitzNumber::from_natural(k)));
    }
    if let Some(rest) = t.strip_prefix("F_") {
        let body = rest
            .strip_prefix('{')
            .and_then(|r| r.strip_suffix('}'))
            .unwrap_or(rest);
        let (q, n) = match body.split_once('^') {
            Some((q, n)) => (number(q)?, number(n)?),
            None => (number(body)?, 1),
        };
        let (p, k) = base_prime(q)?;
        return AbsField::finite(p, k * n);
    }
    Err(syntax("expected GF(q^N) or F_{q^n}"))
}

fn base_prime(q: u64) -> Result<(u64, u64), AbsFieldError> {
    arith::prime_power(q)
        .map(|(p, k)| (p, k as u64))
        .ok_or(AbsFieldError::CompositeCharacteristic(q))
}

/// `a ⊆ b` inside the algebraic closure of `F_q`.
pub fn is_subfield(a: &AbsField, b: &AbsField) -> bool {
    a.characteristic == b.characteristic && a.st.divides(&b.st)
}

/// `[sup : sub]`.
///
/// The degree is finite exactly when `sub` and `sup` agree at every prime of
/// infinite exponent in `sup`; primes with exponent `∞` in both contribute `1`.
pub fn extension_degree(sub: &AbsField, sup: &AbsField) -> Result<Degree, AbsFieldError> {
    if !is_subfield(sub, sup) {
        return Err(AbsFieldError::NotASubfield {
            sub: sub.to_string(),
            sup: sup.to_string(),
        });
    }
    if sub.st.stable_part() != sup.st.stable_part() {
        return Ok(Degree::Infinite);
    }
    let q = sup.st.finite_part().quotient(&sub.st.finite_part())?;
    Ok(match q.as_natural()? {
        Some(n) => Degree::Finite(n),
        None => Degree::Infinite,
    })
}

/// Primes indexing the maximal subrings of `e`, increasing. Infinite when the
/// finite part of `st(e)` has a non-zero default exponent.
pub fn maximal_subring_primes(e: &AbsField) -> impl Iterator<Item = u64> + '_ {
    let finite = e.st.finite_part();
    let listed: Vec<u64> = finite
        .exceptional()
        .filter(|(_, x)| !x.is_zero())
        .map(|(p, _)| p)
        .collect();
    let unbounded = !finite.default_exponent().is_zero();
    let mut listed_iter = listed.into_iter();
    let mut all = arith::primes();
    std::iter::from_fn(move || {
        if unbounded {
            all.find(|&p| {
                let x = e.st.exponent(p);
                x.is_finite() && !x.is_zero()
            })
        } else {
            listed_iter.next()
        }
    })
}

fn descriptor(e: &AbsField, p: u64) -> MaximalSubringDescriptor {
    let sub =
        e.st.quotient(&SteinitzNumber::from_natural(p))
            .expect("p has finite non-zero exponent");
    MaximalSubringDescriptor {
        parent: e.clone(),
        prime: p,
        subfield: e.with_st(sub),
    }
}

/// Every maximal subring of `e`, one per prime of finite non-zero exponent.
pub fn maximal_subrings(e: &AbsField) -> Result<Vec<MaximalSubringDescriptor>, AbsFieldError> {
    if !has_finitely_many_maximal_subrings(e) {
        return Err(AbsFieldError::InfinitelyManyMaximalSubrings(e.to_string()));
    }
    Ok(maximal_subring_primes(e)
        .map(|p| descriptor(e, p))
        .collect())
}

/// Lazily yields maximal subrings, including when there are infinitely many.
pub fn maximal_subrings_iter(e: &AbsField) -> impl Iterator<Item = MaximalSubringDescriptor> + '_ {
    maximal_subring_primes(e).map(move |p| descriptor(e, p))
}

/// Isomorphic subfields coincide, so this equals the number of maximal subrings.
pub fn count_maximal_subrings_up_to_iso(e: &AbsField) -> Cardinal {
    if has_finitely_many_maximal_subrings(e) {
        Cardinal::Finite(maximal_subring_primes(e).count())
    } else {
        Cardinal::AlephZero
    }
}

pub fn has_finitely_many_maximal_subrings(e: &AbsField) -> bool {
    e.st.finite_part().is_natural()
}

/// The unique subfield `GF(q^S)` of finite index with no maximal subrings.
pub fn no_maximal_subring_core(e: &AbsField) -> Result<AbsField, AbsFieldError> {
    if !has_finitely_many_maximal_subrings(e) {
        return Err(AbsFieldError::InfinitelyManyMaximalSubrings(e.to_string()));
    }
    Ok(e.with_st(e.st.stable_part()))
}

/// Length of every maximal descending chain of maximal subrings: the sum of the
/// prime exponents of `[e : core]`.
pub fn chain_length(e: &AbsField) -> Result<u64, AbsFieldError> {
    if !has_finitely_many_maximal_subrings(e) {
        return Err(AbsFieldError::InfinitelyManyMaximalSubrings(e.to_string()));
    }
    Ok(e.st
        .finite_part()
        .exponent_sum()
        .expect("finite part is natural"))
}

/// Number of maximal chains: the multinomial coefficient of the exponents of
/// the finite part.
pub fn chain_count(e: &AbsField) -> Result<BigUint, AbsFieldError> {
    if !has_finitely_many_maximal_subrings(e) {
        return Err(AbsFieldError::InfinitelyManyMaximalSubrings(e.to_string()));
    }
    let exps: Vec<u64> =
        e.st.finite_part()
            .exceptional()
            .map(|(_, x)| x.finite().expect("finite part"))
            .collect();
    let total: u64 = exps.iter().sum();
    let fact = |n: u64| (1..=n).fold(BigUint::one(), |acc, k| acc * k);
    let denom = exps.iter().fold(BigUint::one(), |acc, &k| acc * fact(k));
    Ok(fact(total) / denom)
}

/// All maximal descending chains `e = R_0 ⊃ R_1 ⊃ … ⊃ R_m = core`, each listed as
/// `[R_1, …, R_m]`. Fails without materializing anything if there are more than
/// `limit` chains.
pub fn enumerate_chains(e: &AbsField, limit: usize) -> Result<Vec<Vec<AbsField>>, AbsFieldError> {
    let count = chain_count(e)?;
    if count > BigUint::from(limit) {
        return Err(AbsFieldError::LimitExceeded { count, limit });
    }
    let mut out = Vec::with_capacity(count.to_usize().unwrap_or(0));
    let mut path = Vec::new();
    descend(e, &mut path, &mut out);
    Ok(out)
}

fn descend(e: &AbsField, path: &mut Vec<AbsField>, out: &mut Vec<Vec<AbsField>>) {
    let subs: Vec<_> = maximal_subrings_iter(e).collect();
    if subs.is_empty() {
        out.push(path.clone());
        return;
    }
    for d in subs {
        path.push(d.subfield.clone());
        descend(&d.subfield, path, out);
        path.pop();
    }
}

/// Whether an irreducible polynomial of degree `m` exists over `e`: true iff
/// `m ∧ S = 1` for the stable part `S` of `st(e)`.
pub fn irreducible_degree_exists(e: &AbsField, m: u64) -> Result<bool, AbsFieldError> {
    if m == 0 {
        return Err(AbsFieldError::ZeroDegree);
    }
    Ok(SteinitzNumber::from_natural(m)
        .meet(&e.st.stable_part())
        .is_one())
}

/// The residue field of an irreducible of degree `m`: `GF(q^{N·m})`.
pub fn adjoin_degree(e: &AbsField, m: u64) -> Result<AbsField, AbsFieldError> {
    if !irreducible_degree_exists(e, m)? {
        return Err(AbsFieldError::NoIrreducibleOfThatDegree {
            field: e.to_string(),
            degree: m,
        });
    }
    Ok(e.with_st(e.st.mul(&SteinitzNumber::from_natural(m))))
}

pub fn is_algebraically_closed(e: &AbsField) -> bool {
    e.st == SteinitzNumber::all_infinite()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(s: &str) -> AbsField {
        s.parse().unwrap()
    }

    fn st(s: &str) -> SteinitzNumber {
        s.parse().unwrap()
    }

    #[test]
    fn parse_literals() {
        assert_eq!(f("GF(2^2^2*3)"), AbsField::finite(2, 12).unwrap());
        assert_eq!(f("GF(2^{2^2 * 3})"), AbsField::finite(2, 12).unwrap());
        assert_eq!(f("F_{2^4}"), f("GF(2^2^2)"));
        assert_eq!(f("F_3"), AbsField::finite(3, 1).unwrap());
        assert_eq!(f("F_{7}"), f("GF(7^1)"));
        assert_eq!(f("GF(5^all^inf)"), AbsField::closure(5).unwrap());
        assert_eq!(f("GF(4^3)"), AbsField::finite(2, 6).unwrap());
        assert_eq!(f("F_4"), AbsField::finite(2, 2).unwrap());
        assert_eq!(f("F_{9^2}"), AbsField::finite(3, 4).unwrap());
        assert_eq!(f("GF(4^2^inf)"), f("GF(2^2^inf)"));
        assert!(matches!(
            "GF(6^2)".parse::<AbsField>(),
            Err(AbsFieldError::CompositeCharacteristic(6))
        ));
        assert!(matches!(
            "GF(2^4)".parse::<AbsField>(),
            Err(AbsFieldError::Steinitz(SteinitzError::CompositeBase(4)))
        ));
        assert!("F_{2^0}".parse::<AbsField>().is_err());
        assert!("GF(2,4)".parse::<AbsField>().is_err());
        let e = f("GF(2^2^2*3*5^inf)");
        assert_eq!(e.to_string().parse::<AbsField>().unwrap(), e);
    }

    #[test]
    fn subfield_examples() {
        assert!(is_subfield(&f("F_{2^2}"), &f("F_{2^12}")));
        assert!(!is_subfield(&f("F_{2^3}"), &f("F_{3^3}")));
        assert!(is_subfield(&f("GF(2^2^inf)"), &f("GF(2^all^inf)")));
    }

    #[test]
    fn degree_examples() {
        let d = |a: &str, b: &str| extension_degree(&f(a), &f(b)).unwrap();
        assert_eq!(d("F_{2^2}", "F_{2^12}"), Degree::Finite(6u32.into()));
        let e = f("GF(2^2^inf*3)");
        assert_eq!(
            extension_degree(&e, &e).unwrap(),
            Degree::Finite(1u32.into())
        );
        assert_eq!(d("F_{2^2}", "GF(2^2^inf)"), Degree::Infinite);
        assert_eq!(
            d("GF(2^all^inf)", "GF(2^all^inf)"),
            Degree::Finite(1u32.into())
        );
        assert_eq!(
            d("GF(2^3*rest^inf)", "GF(2^3^4*rest^inf)"),
            Degree::Finite(27u32.into())
        );
        assert_eq!(d("GF(2^1)", "GF(2^rest^1)"), Degree::Infinite);
        assert!(matches!(
            extension_degree(&f("F_{2^3}"), &f("F_{2^4}")),
            Err(AbsFieldError::NotASubfield { .. })
        ));
    }

    #[test]
    fn maximal_subring_examples() {
        let e = f("GF(2^2^2*3*5^inf)");
        let ds = maximal_subrings(&e).unwrap();
        let got: Vec<_> = ds
            .iter()
            .map(|d| (d.prime, d.subfield.st().clone()))
            .collect();
        assert_eq!(got, vec![(2, st("2*3*5^inf")), (3, st("2^2*5^inf"))]);
        assert!(maximal_subrings(&f("GF(2^all^inf)")).unwrap().is_empty());
        let ds = maximal_subrings(&f("F_{2^4}")).unwrap();
        assert_eq!(ds.len(), 1);
        assert_eq!(ds[0].subfield, f("F_{2^2}"));
        assert!(maximal_subrings(&f("GF(2^rest^1)")).is_err());
        let lazy: Vec<u64> = maximal_subrings_iter(&f("GF(2^2^inf*rest^1)"))
            .take(3)
            .map(|d| d.prime)
            .collect();
        assert_eq!(lazy, vec![3, 5, 7]);
    }

    #[test]
    fn descriptors_are_prime_index_subfields() {
        for e in ["GF(2^2^2*3*5^inf)", "F_{3^12}", "GF(7^2^3*11*rest^inf)"] {
            let e = f(e);
            for d in maximal_subrings(&e).unwrap() {
                assert!(d.subfield.is_subfield_of(&e));
                assert_eq!(
                    extension_degree(&d.subfield, &e).unwrap(),
                    Degree::Finite(d.prime.into())
                );
                assert_eq!(
                    d.subfield.st().mul(&SteinitzNumber::from_natural(d.prime)),
                    *e.st()
                );
            }
        }
    }

    #[test]
    fn counting_examples() {
        assert_eq!(
            count_maximal_subrings_up_to_iso(&f("GF(2^2^2*3*5^inf)")),
            Cardinal::Finite(2)
        );
        assert_eq!(
            count_maximal_subrings_up_to_iso(&f("F_5")),
            Cardinal::Finite(0)
        );
        // infinitely many primes with exponent 1
        assert_eq!(
            count_maximal_subrings_up_to_iso(&f("GF(2^2^inf*rest^1)")),
            Cardinal::AlephZero
        );
        assert!(has_finitely_many_maximal_subrings(&f("GF(2^2^2*3*5^inf)")));
        assert!(!has_finitely_many_maximal_subrings(&f("GF(3^rest^1)")));
        assert!(has_finitely_many_maximal_subrings(&f("F_{3^5}")));
    }

    #[test]
    fn core_examples() {
        assert_eq!(
            no_maximal_subring_core(&f("GF(2^2^2*3*5^inf)")).unwrap(),
            f("GF(2^5^inf)")
        );
        assert_eq!(no_maximal_subring_core(&f("F_{3^4}")).unwrap(), f("F_3"));
        let c = f("GF(2^all^inf)");
        assert_eq!(no_maximal_subring_core(&c).unwrap(), c);
        assert!(no_maximal_subring_core(&f("GF(2^rest^2)")).is_err());
    }

    #[test]
    fn chain_examples() {
        assert_eq!(chain_length(&f("GF(2^2^2*3*5^inf)")).unwrap(), 3);
        assert_eq!(chain_length(&f("F_2")).unwrap(), 0);
        assert_eq!(chain_length(&f("F_{2^8}")).unwrap(), 3);

        let chains = enumerate_chains(&f("F_{2^4}"), 10).unwrap();
        assert_eq!(chains, vec![vec![f("F_{2^2}"), f("F_2")]]);

        let mut chains = enumerate_chains(&f("F_{2^6}"), 10).unwrap();
        chains.sort_by_key(|c| c[0].to_string());
        assert_eq!(
            chains,
            vec![vec![f("F_{2^2}"), f("F_2")], vec![f("F_{2^3}"), f("F_2")]]
        );

        assert_eq!(
            enumerate_chains(&f("F_7"), 1).unwrap(),
            vec![Vec::<AbsField>::new()]
        );
        assert_eq!(chain_count(&f("F_{2^12}")).unwrap(), 3u32.into());
        assert!(matches!(
            enumerate_chains(&f("F_{2^12}"), 2),
            Err(AbsFieldError::LimitExceeded { .. })
        ));
    }

    #[test]
    fn chains_end_at_core_with_common_length() {
        let e = f("GF(3^2^2*3^2*7^inf)");
        let core = no_maximal_subring_core(&e).unwrap();
        let len = chain_length(&e).unwrap() as usize;
        let chains = enumerate_chains(&e, 1000).unwrap();
        assert_eq!(BigUint::from(chains.len()), chain_count(&e).unwrap());
        for c in chains {
            assert_eq!(c.len(), len);
            assert_eq!(c.last().unwrap(), &core);
        }
    }

    #[test]
    fn irreducible_criterion() {
        let e = f("GF(2^2^inf)");
        assert!(irreducible_degree_exists(&e, 3).unwrap());
        assert!(!irreducible_degree_exists(&e, 2).unwrap());
        assert!(!irreducible_degree_exists(&e, 6).unwrap());
        assert!(irreducible_degree_exists(&f("GF(2^all^inf)"), 1).unwrap());
        assert!(!irreducible_degree_exists(&f("GF(2^all^inf)"), 5).unwrap());
        assert_eq!(
            irreducible_degree_exists(&e, 0),
            Err(AbsFieldError::ZeroDegree)
        );
    }

    #[test]
    fn adjoin_examples() {
        assert_eq!(adjoin_degree(&f("F_2"), 4).unwrap(), f("F_{2^4}"));
        assert_eq!(
            adjoin_degree(&f("GF(2^3^inf)"), 2).unwrap(),
            f("GF(2^2*3^inf)")
        );
        assert!(matches!(
            adjoin_degree(&f("GF(2^2^inf)"), 2),
            Err(AbsFieldError::NoIrreducibleOfThatDegree { .. })
        ));
    }

    #[test]
    fn closedness() {
        assert!(is_algebraically_closed(&f("GF(2^all^inf)")));
        assert!(!is_algebraically_closed(&f("F_{2^4}")));
        assert!(!is_algebraically_closed(&f("GF(2^2^inf)")));
    }
}

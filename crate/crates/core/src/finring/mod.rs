//! Concrete finite commutative rings, exhaustive subring enumeration and
//! isomorphism testing.
//!
//! Elements of a ring of order `n` are the indices `0..n`, with `0` the zero and
//! `1` the identity. Rings are described by a [`RingSpec`]:
//!
//! ```text
//! spec := "GF(" p "," n ")" | "Z/" n "Z" | "product(" spec ("," spec)* ")" | "dual(" spec ")"
//! ```
//!
//! `dual(K)` is `K[x]/(x^2) = K + Kα` with `α^2 = 0`; the element `a + bα` has
//! index `a + |K|·b`.

mod galois;
mod iso;
mod set;
mod subrings;

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::arith;
use crate::poly::FieldOps;

pub use galois::GaloisField;
pub use iso::{
    are_isomorphic, classify_subrings, classify_up_to_iso, find_isomorphism, is_isomorphism,
    ElementProfile, IsoClass, IsoFingerprint,
};
pub use set::ElementSet;
pub use subrings::{
    enumerate_subrings, enumerate_subrings_with_cap, maximal_subrings, maximal_subrings_with_cap,
    Subring, SubringLattice,
};

/// Largest ring [`build`] will construct.
pub const CONSTRUCTION_CAP: usize = 4096;
/// Largest ring whose subrings are enumerated exhaustively.
pub const ENUMERATION_CAP: usize = 256;
/// Rings up to this order get materialized operation tables.
pub const TABLE_CAP: usize = 1024;
/// Hard limit from the `u16` element indices.
pub const INDEX_LIMIT: usize = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RingError {
    #[error("ring of order {order} exceeds the cap of {cap}")]
    OrderCapExceeded { order: u128, cap: usize },
    #[error("bad ring spec {input:?}: {reason}")]
    BadSpec { input: String, reason: String },
    #[error("{0}")]
    Cap(String),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
}

/// A construction recipe for a finite commutative ring.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum RingSpec {
    Galois { p: u64, n: u32 },
    Integers(u64),
    Product(Vec<RingSpec>),
    Dual(Box<RingSpec>),
}

impl RingSpec {
    /// The order, saturating well above any cap.
    pub fn order(&self) -> u128 {
        match self {
            RingSpec::Galois { p, n } => (*p as u128).saturating_pow(*n),
            RingSpec::Integers(n) => *n as u128,
            RingSpec::Product(parts) => parts
                .iter()
                .fold(1u128, |acc, s| acc.saturating_mul(s.order())),
            RingSpec::Dual(base) => base.order().saturating_mul(base.order()),
        }
    }

    /// `n` copies of `F_p`.
    pub fn power_of_prime_field(p: u64, n: usize) -> Self {
        RingSpec::Product(vec![RingSpec::Galois { p, n: 1 }; n])
    }
}

impl fmt::Display for RingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingSpec::Galois { p, n } => write!(f, "GF({p},{n})"),
            RingSpec::Integers(n) => write!(f, "Z/{n}Z"),
            RingSpec::Product(parts) => {
                f.write_str("product(")?;
                for (i, s) in parts.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{s}")?;
                }
                f.write_str(")")
            }
            RingSpec::Dual(base) => write!(f, "dual({base})"),
        }
    }
}

impl FromStr for RingSpec {
    type Err = RingError;

    fn from_str(text: &str) -> Result<Self, RingError> {
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let mut parser = SpecParser {
            input: text,
            rest: &compact,
        };
        let spec = parser.spec()?;
        if !parser.rest.is_empty() {
            return Err(parser.error(&format!("trailing input {:?}", parser.rest)));
        }
        Ok(spec)
    }
}

struct SpecParser<'a> {
    input: &'a str,
    rest: &'a str,
}

impl SpecParser<'_> {
    fn error(&self, reason: &str) -> RingError {
        RingError::BadSpec {
            input: self.input.to_string(),
            reason: reason.to_string(),
        }
    }

    fn eat(&mut self, token: &str) -> bool {
        match self.rest.strip_prefix(token) {
            Some(r) => {
                self.rest = r;
                true
            }
            None => false,
        }
    }

    fn expect(&mut self, token: &str) -> Result<(), RingError> {
        if self.eat(token) {
            Ok(())
        } else {
            Err(self.error(&format!("expected {token:?} at {:?}", self.rest)))
        }
    }

    fn number(&mut self) -> Result<u64, RingError> {
        let len = self.rest.bytes().take_while(u8::is_ascii_digit).count();
        if len == 0 {
            return Err(self.error(&format!("expected a number at {:?}", self.rest)));
        }
        let (digits, rest) = self.rest.split_at(len);
        self.rest = rest;
        digits
            .parse()
            .map_err(|_| self.error(&format!("number {digits} out of range")))
    }

    fn spec(&mut self) -> Result<RingSpec, RingError> {
        if self.eat("GF(") {
            let p = self.number()?;
            self.expect(",")?;
            let n = self.number()?;
            self.expect(")")?;
            if !arith::is_prime(p) {
                return Err(self.error(&format!("{p} is not prime")));
            }
            let n = u32::try_from(n)
                .ok()
                .filter(|&n| n >= 1)
                .ok_or_else(|| self.error("extension degree must be a positive u32"))?;
            return Ok(RingSpec::Galois { p, n });
        }
        if self.eat("Z/") {
            let n = self.number()?;
            self.expect("Z")?;
            if n < 2 {
                return Err(self.error("modulus must be at least 2"));
            }
            return Ok(RingSpec::Integers(n));
        }
        if self.eat("product(") {
            let mut parts = vec![self.spec()?];
            while self.eat(",") {
                parts.push(self.spec()?);
            }
            self.expect(")")?;
            return Ok(RingSpec::Product(parts));
        }
        if self.eat("dual(") {
            let base = self.spec()?;
            self.expect(")")?;
            return Ok(RingSpec::Dual(Box::new(base)));
        }
        Err(self.error(&format!("unrecognized ring at {:?}", self.rest)))
    }
}

#[derive(Debug, Clone)]
struct Tables {
    add: Vec<u16>,
    mul: Vec<u16>,
}

#[derive(Debug, Clone)]
enum Kind {
    Galois(GaloisField),
    Integers(u16),
    /// Mixed-radix over the factors, then the natural index of the identity is
    /// swapped with `1`.
    Product {
        factors: Vec<FiniteRing>,
        one_natural: usize,
    },
    Dual(Box<FiniteRing>),
    /// Only the operation tables are known.
    Table,
}

/// A finite commutative unital ring with elements `0..order`.
#[derive(Debug, Clone)]
pub struct FiniteRing {
    label: String,
    spec: Option<RingSpec>,
    order: usize,
    characteristic: usize,
    kind: Kind,
    tables: Option<Tables>,
}

/// Builds a ring, refusing orders above [`CONSTRUCTION_CAP`].
pub fn build(spec: &RingSpec) -> Result<FiniteRing, RingError> {
    build_with_cap(spec, CONSTRUCTION_CAP)
}

pub fn build_with_cap(spec: &RingSpec, cap: usize) -> Result<FiniteRing, RingError> {
    let order = spec.order();
    if order > cap as u128 || order >= INDEX_LIMIT as u128 {
        return Err(RingError::OrderCapExceeded {
            order,
            cap: cap.min(INDEX_LIMIT - 1),
        });
    }
    Ok(build_unchecked(spec))
}

fn build_unchecked(spec: &RingSpec) -> FiniteRing {
    let order = spec.order() as usize;
    let kind = match spec {
        RingSpec::Galois { p, n } => Kind::Galois(GaloisField::new(*p as u16, *n)),
        RingSpec::Integers(n) => Kind::Integers(*n as u16),
        RingSpec::Product(parts) => {
            let factors: Vec<FiniteRing> = parts.iter().map(build_unchecked).collect();
            let mut stride = 1usize;
            let mut one_natural = 0usize;
            for f in &factors {
                one_natural += stride;
                stride *= f.order;
            }
            Kind::Product {
                factors,
                one_natural,
            }
        }
        RingSpec::Dual(base) => Kind::Dual(Box::new(build_unchecked(base))),
    };
    let mut ring = FiniteRing {
        label: spec.to_string(),
        spec: Some(spec.clone()),
        order,
        characteristic: 0,
        kind,
        tables: None,
    };
    if order <= TABLE_CAP {
        ring.materialize();
    }
    ring.characteristic = ring.additive_order(1);
    ring
}

impl FiniteRing {
    /// A ring given by full operation tables (row-major, `order × order`).
    /// The tables are trusted; use [`FiniteRing::check_axioms`] to validate.
    pub fn from_tables(
        label: impl Into<String>,
        order: usize,
        add: Vec<u16>,
        mul: Vec<u16>,
    ) -> Self {
        assert_eq!(add.len(), order * order);
        assert_eq!(mul.len(), order * order);
        let mut ring = FiniteRing {
            label: label.into(),
            spec: None,
            order,
            characteristic: 0,
            kind: Kind::Table,
            tables: Some(Tables { add, mul }),
        };
        ring.characteristic = ring.additive_order(1);
        ring
    }

    fn materialize(&mut self) {
        let n = self.order;
        let mut add = vec![0u16; n * n];
        let mut mul = vec![0u16; n * n];
        for a in 0..n {
            for b in a..n {
                let (s, m) = (
                    self.structured_add(a as u16, b as u16),
                    self.structured_mul(a as u16, b as u16),
                );
                add[a * n + b] = s;
                add[b * n + a] = s;
                mul[a * n + b] = m;
                mul[b * n + a] = m;
            }
        }
        self.tables = Some(Tables { add, mul });
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn spec(&self) -> Option<&RingSpec> {
        self.spec.as_ref()
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn characteristic(&self) -> usize {
        self.characteristic
    }

    pub fn elements(&self) -> impl Iterator<Item = u16> {
        0..self.order as u16
    }

    /// The field structure when this ring was built as `GF(p,n)`.
    pub fn galois(&self) -> Option<&GaloisField> {
        match &self.kind {
            Kind::Galois(f) => Some(f),
            _ => None,
        }
    }

    #[inline]
    pub fn add(&self, a: u16, b: u16) -> u16 {
        match &self.tables {
            Some(t) => t.add[a as usize * self.order + b as usize],
            None => self.structured_add(a, b),
        }
    }

    #[inline]
    pub fn mul(&self, a: u16, b: u16) -> u16 {
        match &self.tables {
            Some(t) => t.mul[a as usize * self.order + b as usize],
            None => self.structured_mul(a, b),
        }
    }

    pub fn neg(&self, a: u16) -> u16 {
        match &self.kind {
            Kind::Galois(f) => f.neg(a),
            Kind::Integers(n) => (*n - a) % *n,
            _ => {
                // a + (order−1)·a = 0
                let mut acc = a;
                let mut k = 1;
                while acc != 0 {
                    acc = self.add(acc, a);
                    k += 1;
                }
                self.scalar(a, k - 1)
            }
        }
    }

    /// `k·a`.
    pub fn scalar(&self, a: u16, k: usize) -> u16 {
        (0..k).fold(0, |acc, _| self.add(acc, a))
    }

    pub fn pow(&self, mut base: u16, mut exp: u64) -> u16 {
        let mut acc = 1;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Least `k ≥ 1` with `k·a = 0`.
    pub fn additive_order(&self, a: u16) -> usize {
        let mut acc = a;
        let mut k = 1;
        while acc != 0 {
            acc = self.add(acc, a);
            k += 1;
        }
        k
    }

    pub fn is_unit(&self, a: u16) -> bool {
        self.inverse(a).is_some()
    }

    pub fn inverse(&self, a: u16) -> Option<u16> {
        match &self.kind {
            Kind::Galois(f) => (a != 0).then(|| f.inv(a)),
            _ => self.elements().find(|&b| self.mul(a, b) == 1),
        }
    }

    pub fn is_field(&self) -> bool {
        match &self.kind {
            Kind::Galois(_) => true,
            _ => self.order > 1 && (1..self.order as u16).all(|a| self.is_unit(a)),
        }
    }

    fn decode_product(&self, factors: &[FiniteRing], one_natural: usize, idx: u16) -> Vec<u16> {
        let mut n = match idx as usize {
            1 => one_natural,
            i if i == one_natural => 1,
            i => i,
        };
        factors
            .iter()
            .map(|f| {
                let c = n % f.order;
                n /= f.order;
                c as u16
            })
            .collect()
    }

    fn encode_product(factors: &[FiniteRing], one_natural: usize, comps: &[u16]) -> u16 {
        let mut n = 0usize;
        let mut stride = 1usize;
        for (f, &c) in factors.iter().zip(comps) {
            n += c as usize * stride;
            stride *= f.order;
        }
        let n = match n {
            1 => one_natural,
            i if i == one_natural => 1,
            i => i,
        };
        n as u16
    }

    /// Components of an element of a product ring, if this is one.
    pub fn components(&self, idx: u16) -> Option<Vec<u16>> {
        match &self.kind {
            Kind::Product {
                factors,
                one_natural,
            } => Some(self.decode_product(factors, *one_natural, idx)),
            _ => None,
        }
    }

    /// Element of a product ring with the given components.
    pub fn from_components(&self, comps: &[u16]) -> Option<u16> {
        match &self.kind {
            Kind::Product {
                factors,
                one_natural,
            } if comps.len() == factors.len() => {
                Some(Self::encode_product(factors, *one_natural, comps))
            }
            _ => None,
        }
    }

    /// The factor rings of a product.
    pub fn factors(&self) -> Option<&[FiniteRing]> {
        match &self.kind {
            Kind::Product { factors, .. } => Some(factors),
            _ => None,
        }
    }

    /// Base ring of `dual(K)`.
    pub fn dual_base(&self) -> Option<&FiniteRing> {
        match &self.kind {
            Kind::Dual(base) => Some(base),
            _ => None,
        }
    }

    /// `a + bα` in `dual(K)`.
    pub fn dual_element(&self, a: u16, b: u16) -> Option<u16> {
        self.dual_base()
            .map(|k| (a as usize + k.order * b as usize) as u16)
    }

    /// `(a, b)` with `x = a + bα`.
    pub fn dual_parts(&self, x: u16) -> Option<(u16, u16)> {
        self.dual_base()
            .map(|k| ((x as usize % k.order) as u16, (x as usize / k.order) as u16))
    }

    fn structured_add(&self, a: u16, b: u16) -> u16 {
        match &self.kind {
            Kind::Galois(f) => f.add(a, b),
            Kind::Integers(n) => ((a as u32 + b as u32) % *n as u32) as u16,
            Kind::Product {
                factors,
                one_natural,
            } => {
                let x = self.decode_product(factors, *one_natural, a);
                let y = self.decode_product(factors, *one_natural, b);
                let z: Vec<u16> = factors
                    .iter()
                    .zip(x.iter().zip(&y))
                    .map(|(f, (&u, &v))| f.add(u, v))
                    .collect();
                Self::encode_product(factors, *one_natural, &z)
            }
            Kind::Dual(k) => {
                let (a0, a1) = (a as usize % k.order, a as usize / k.order);
                let (b0, b1) = (b as usize % k.order, b as usize / k.order);
                let c0 = k.add(a0 as u16, b0 as u16) as usize;
                let c1 = k.add(a1 as u16, b1 as u16) as usize;
                (c0 + k.order * c1) as u16
            }
            Kind::Table => unreachable!("table rings always carry tables"),
        }
    }

    fn structured_mul(&self, a: u16, b: u16) -> u16 {
        match &self.kind {
            Kind::Galois(f) => f.mul(a, b),
            Kind::Integers(n) => ((a as u32 * b as u32) % *n as u32) as u16,
            Kind::Product {
                factors,
                one_natural,
            } => {
                let x = self.decode_product(factors, *one_natural, a);
                let y = self.decode_product(factors, *one_natural, b);
                let z: Vec<u16> = factors
                    .iter()
                    .zip(x.iter().zip(&y))
                    .map(|(f, (&u, &v))| f.mul(u, v))
                    .collect();
                Self::encode_product(factors, *one_natural, &z)
            }
            Kind::Dual(k) => {
                // (a0 + a1 α)(b0 + b1 α) = a0 b0 + (a0 b1 + a1 b0) α
                let (a0, a1) = ((a as usize % k.order) as u16, (a as usize / k.order) as u16);
                let (b0, b1) = ((b as usize % k.order) as u16, (b as usize / k.order) as u16);
                let c0 = k.mul(a0, b0) as usize;
                let c1 = k.add(k.mul(a0, b1), k.mul(a1, b0)) as usize;
                (c0 + k.order * c1) as u16
            }
            Kind::Table => unreachable!("table rings always carry tables"),
        }
    }

    /// Exhaustively checks the commutative unital ring axioms. `O(n^3)`.
    pub fn check_axioms(&self) -> Result<(), String> {
        let els: Vec<u16> = self.elements().collect();
        for &a in &els {
            if self.add(a, 0) != a {
                return Err(format!("0 is not additive identity at {a}"));
            }
            if self.mul(a, 1) != a {
                return Err(format!("1 is not multiplicative identity at {a}"));
            }
            if self.add(a, self.neg(a)) != 0 {
                return Err(format!("{a} has no additive inverse"));
            }
            for &b in &els {
                if self.add(a, b) != self.add(b, a) || self.mul(a, b) != self.mul(b, a) {
                    return Err(format!("not commutative at ({a},{b})"));
                }
                for &c in &els {
                    if self.add(self.add(a, b), c) != self.add(a, self.add(b, c)) {
                        return Err(format!("+ not associative at ({a},{b},{c})"));
                    }
                    if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)) {
                        return Err(format!("* not associative at ({a},{b},{c})"));
                    }
                    if self.mul(a, self.add(b, c)) != self.add(self.mul(a, b), self.mul(a, c)) {
                        return Err(format!("not distributive at ({a},{b},{c})"));
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for FiniteRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label)
    }
}

/// Number of monic irreducible polynomials of degree `m` over `F_q`:
/// `(1/m) Σ_{d|m} μ(d) q^{m/d}`. Requires `q^m ≤ 2^16`.
pub fn count_monic_irreducibles(q: u64, m: u32) -> Result<u64, RingError> {
    if arith::prime_power(q).is_none() {
        return Err(RingError::NotPrimePower(q));
    }
    if m == 0 {
        return Err(RingError::Cap("degree must be at least 1".into()));
    }
    match q.checked_pow(m) {
        Some(v) if v <= 1 << 16 => {}
        _ => return Err(RingError::Cap(format!("{q}^{m} exceeds 2^16"))),
    }
    let m64 = m as u64;
    let sum: i64 = arith::divisors(m64)
        .into_iter()
        .map(|d| arith::mobius(d) * q.pow((m64 / d) as u32) as i64)
        .sum();
    Ok((sum / m as i64) as u64)
}

//! Dense univariate polynomials over small finite fields.
//!
//! Field elements are `u16` indices; a [`FieldOps`] implementation supplies the
//! arithmetic. Coefficients are stored lowest degree first with no trailing
//! zeros, so the zero polynomial is empty.

use std::fmt;

use crate::arith;

/// Arithmetic of a finite field whose elements are indexed `0..size`, with `0`
/// the zero and `1` the identity.
pub trait FieldOps {
    fn size(&self) -> u32;
    fn characteristic(&self) -> u32;
    fn add(&self, a: u16, b: u16) -> u16;
    fn neg(&self, a: u16) -> u16;
    fn mul(&self, a: u16, b: u16) -> u16;
    /// Multiplicative inverse; `a` must be non-zero.
    fn inv(&self, a: u16) -> u16;

    fn sub(&self, a: u16, b: u16) -> u16 {
        self.add(a, self.neg(b))
    }

    fn pow(&self, mut base: u16, mut exp: u64) -> u16 {
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
}

/// `Z/pZ` for a prime `p < 2^16`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeField {
    p: u16,
}

impl PrimeField {
    pub fn new(p: u16) -> Option<Self> {
        arith::is_prime(p as u64).then_some(Self { p })
    }
}

impl FieldOps for PrimeField {
    fn size(&self) -> u32 {
        self.p as u32
    }

    fn characteristic(&self) -> u32 {
        self.p as u32
    }

    fn add(&self, a: u16, b: u16) -> u16 {
        ((a as u32 + b as u32) % self.p as u32) as u16
    }

    fn neg(&self, a: u16) -> u16 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    fn mul(&self, a: u16, b: u16) -> u16 {
        ((a as u32 * b as u32) % self.p as u32) as u16
    }

    fn inv(&self, a: u16) -> u16 {
        assert!(a != 0, "inverse of zero");
        self.pow(a, self.p as u64 - 2)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Poly {
    coeffs: Vec<u16>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<u16>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: u16) -> Self {
        Self::new(vec![c])
    }

    /// The polynomial `x`.
    pub fn x() -> Self {
        Self { coeffs: vec![0, 1] }
    }

    /// `x^n + Σ low[i] x^i` with `low.len() == n`.
    pub fn monic_from_low(low: &[u16]) -> Self {
        let mut coeffs = low.to_vec();
        coeffs.push(1);
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[u16] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> u16 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == 1
    }

    pub fn add<F: FieldOps>(&self, other: &Poly, f: &F) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let c = (0..n)
            .map(|i| {
                let a = self.coeffs.get(i).copied().unwrap_or(0);
                let b = other.coeffs.get(i).copied().unwrap_or(0);
                f.add(a, b)
            })
            .collect();
        Poly::new(c)
    }

    pub fn neg<F: FieldOps>(&self, f: &F) -> Poly {
        Poly::new(self.coeffs.iter().map(|&a| f.neg(a)).collect())
    }

    pub fn sub<F: FieldOps>(&self, other: &Poly, f: &F) -> Poly {
        self.add(&other.neg(f), f)
    }

    pub fn scale<F: FieldOps>(&self, c: u16, f: &F) -> Poly {
        Poly::new(self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }

    pub fn mul<F: FieldOps>(&self, other: &Poly, f: &F) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut c = vec![0u16; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                c[i + j] = f.add(c[i + j], f.mul(a, b));
            }
        }
        Poly::new(c)
    }

    pub fn pow<F: FieldOps>(&self, mut exp: u64, f: &F) -> Poly {
        let mut acc = Poly::constant(1);
        let mut base = self.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&base, f);
            }
            base = base.mul(&base, f);
            exp >>= 1;
        }
        acc
    }

    /// Quotient and remainder; `divisor` must be non-zero.
    pub fn div_rem<F: FieldOps>(&self, divisor: &Poly, f: &F) -> (Poly, Poly) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lead_inv = f.inv(divisor.leading());
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Poly::zero(), self.clone());
        }
        let mut quot = vec![0u16; rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            let c = f.mul(rem[i], lead_inv);
            if c == 0 {
                continue;
            }
            quot[i - dd] = c;
            for (j, &d) in divisor.coeffs.iter().enumerate() {
                let k = i - dd + j;
                rem[k] = f.sub(rem[k], f.mul(c, d));
            }
        }
        rem.truncate(dd);
        (Poly::new(quot), Poly::new(rem))
    }

    pub fn rem<F: FieldOps>(&self, divisor: &Poly, f: &F) -> Poly {
        self.div_rem(divisor, f).1
    }

    /// Scales to leading coefficient `1`; the zero polynomial is returned as is.
    pub fn monic<F: FieldOps>(&self, f: &F) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        self.scale(f.inv(self.leading()), f)
    }

    /// Monic greatest common divisor.
    pub fn gcd<F: FieldOps>(&self, other: &Poly, f: &F) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b, f);
            a = b;
            b = r;
        }
        a.monic(f)
    }

    /// `self^exp mod modulus`.
    pub fn pow_mod<F: FieldOps>(&self, mut exp: u64, modulus: &Poly, f: &F) -> Poly {
        let mut acc = Poly::constant(1).rem(modulus, f);
        let mut base = self.rem(modulus, f);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&base, f).rem(modulus, f);
            }
            base = base.mul(&base, f).rem(modulus, f);
            exp >>= 1;
        }
        acc
    }

    pub fn eval<F: FieldOps>(&self, x: u16, f: &F) -> u16 {
        self.coeffs
            .iter()
            .rev()
            .fold(0, |acc, &c| f.add(f.mul(acc, x), c))
    }

    /// Rabin's test: `f` of degree `d ≥ 1` over `F_Q` is irreducible iff
    /// `x^{Q^d} ≡ x (mod f)` and `gcd(x^{Q^{d/r}} − x, f) = 1` for every prime
    /// `r | d`.
    pub fn is_irreducible<F: FieldOps>(&self, f: &F) -> bool {
        let d = match self.degree() {
            Some(0) | None => return false,
            Some(d) => d as u64,
        };
        if d == 1 {
            return true;
        }
        let q = f.size() as u64;
        let x = Poly::x();
        // frob[k] = x^{Q^k} mod self
        let mut frob = Vec::with_capacity(d as usize + 1);
        frob.push(x.rem(self, f));
        for k in 1..=d as usize {
            let next = frob[k - 1].pow_mod(q, self, f);
            frob.push(next);
        }
        if frob[d as usize] != frob[0] {
            return false;
        }
        arith::factorize(d).into_iter().all(|(r, _)| {
            let k = (d / r) as usize;
            frob[k].sub(&x, f).gcd(self, f).degree() == Some(0)
        })
    }

    /// Formats with coefficients written as element indices, e.g. `x^2+x+1`.
    pub fn display_with(&self, var: char) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut terms = Vec::new();
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            terms.push(match (c, i) {
                (_, 0) => c.to_string(),
                (1, _) => mono,
                _ => format!("{c}{mono}"),
            });
        }
        terms.join("+")
    }

    /// Parses `x^2+3x+1`-style input; coefficients are element indices below
    /// `size`. Terms may repeat and are summed with `f`.
    pub fn parse<F: FieldOps>(text: &str, var: char, f: &F) -> Result<Poly, String> {
        let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if t.is_empty() {
            return Err("empty polynomial".into());
        }
        let mut acc = Poly::zero();
        for term in t.split('+') {
            if term.is_empty() {
                return Err(format!("empty term in {text:?}"));
            }
            let (coef, exp) = match term.find(var) {
                None => (term, 0usize),
                Some(pos) => {
                    let (c, rest) = term.split_at(pos);
                    let rest = &rest[var.len_utf8()..];
                    let e = if rest.is_empty() {
                        1
                    } else {
                        rest.strip_prefix('^')
                            .and_then(|e| e.parse::<usize>().ok())
                            .ok_or_else(|| format!("bad exponent in term {term:?}"))?
                    };
                    (if c.is_empty() { "1" } else { c }, e)
                }
            };
            let c: u32 = coef
                .parse()
                .map_err(|_| format!("bad coefficient {coef:?}"))?;
            if c >= f.size() {
                return Err(format!(
                    "coefficient {c} is not an element of a field of size {}",
                    f.size()
                ));
            }
            let mut mono = vec![0u16; exp + 1];
            mono[exp] = c as u16;
            acc = acc.add(&Poly::new(mono), f);
        }
        Ok(acc)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with('x'))
    }
}

/// Iterates over all monic polynomials of degree `d` over a field of size `q`,
/// ordered by the base-`q` value `Σ c_i q^i` of the lower coefficients.
pub fn monic_polys(q: u32, d: usize) -> impl Iterator<Item = Poly> {
    let total = (q as u64).pow(d as u32);
    (0..total).map(move |mut k| {
        let low: Vec<u16> = (0..d)
            .map(|_| {
                let c = (k % q as u64) as u16;
                k /= q as u64;
                c
            })
            .collect();
        Poly::monic_from_low(&low)
    })
}

/// All monic irreducibles of degree `d` over `f`, in [`monic_polys`] order.
pub fn monic_irreducibles<F: FieldOps>(f: &F, d: usize) -> Vec<Poly> {
    monic_polys(f.size(), d)
        .filter(|p| p.is_irreducible(f))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(p: u16) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    #[test]
    fn division_identity() {
        let f = gf(5);
        let a = Poly::new(vec![1, 4, 0, 3, 2]);
        let b = Poly::new(vec![2, 0, 1]);
        let (q, r) = a.div_rem(&b, &f);
        assert_eq!(q.mul(&b, &f).add(&r, &f), a);
        assert!(r.degree().unwrap_or(0) < 2);
    }

    #[test]
    fn irreducibles_over_f2() {
        let f = gf(2);
        let deg2: Vec<String> = monic_irreducibles(&f, 2)
            .iter()
            .map(|p| p.to_string())
            .collect();
        assert_eq!(deg2, vec!["x^2+x+1"]);
        let deg4: Vec<String> = monic_irreducibles(&f, 4)
            .iter()
            .map(|p| p.to_string())
            .collect();
        assert_eq!(deg4, vec!["x^4+x+1", "x^4+x^3+1", "x^4+x^3+x^2+x+1"]);
    }

    #[test]
    fn rabin_agrees_with_root_and_factor_search() {
        // a cubic over F_p is irreducible iff it has no root
        for p in [2u16, 3, 5, 7] {
            let f = gf(p);
            for poly in monic_polys(p as u32, 3) {
                let has_root = (0..p).any(|x| poly.eval(x, &f) == 0);
                assert_eq!(poly.is_irreducible(&f), !has_root, "{poly} over F_{p}");
            }
        }
        // quartics over F_2: reducible iff divisible by a monic of degree 1 or 2
        let f = gf(2);
        let small: Vec<Poly> = monic_polys(2, 1).chain(monic_polys(2, 2)).collect();
        for poly in monic_polys(2, 4) {
            let reducible = small.iter().any(|d| poly.rem(d, &f).is_zero());
            assert_eq!(poly.is_irreducible(&f), !reducible, "{poly}");
        }
    }

    #[test]
    fn parse_and_display() {
        let f = gf(3);
        let p = Poly::parse("x^2 + 2x + 1", 'x', &f).unwrap();
        assert_eq!(p.coeffs(), &[1, 2, 1]);
        assert_eq!(p.to_string(), "x^2+2x+1");
        assert_eq!(Poly::parse("x+x", 'x', &f).unwrap().to_string(), "2x");
        assert!(Poly::parse("3x", 'x', &f).is_err());
        assert!(Poly::parse("x^", 'x', &f).is_err());
        assert!(Poly::parse("", 'x', &f).is_err());
        assert_eq!(Poly::parse("x", 'x', &f).unwrap(), Poly::x());
    }

    #[test]
    fn gcd_is_monic_common_factor() {
        let f = gf(7);
        let a = Poly::new(vec![1, 1]); // x+1
        let b = Poly::new(vec![3, 0, 1]); // x^2+3
        let c = Poly::new(vec![2, 5]);
        let g = a.mul(&b, &f).gcd(&a.mul(&c, &f), &f);
        assert_eq!(g, a.gcd(&Poly::zero(), &f).mul(&c.gcd(&b, &f), &f));
        assert!(g.is_monic());
    }
}

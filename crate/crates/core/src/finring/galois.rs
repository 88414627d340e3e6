//! `GF(p, n)` as `F_p[x]/(m(x))`.
//!
//! The modulus `m` is the first monic irreducible of degree `n` when monics
//! are ordered by `Σ c_i p^i` over their lower coefficients, which yields the
//! familiar `x^2+x+1`, `x^3+x+1`, `x^4+x+1`, … over `F_2`. An element
//! `Σ c_i x^i` has index `Σ c_i p^i`.

use crate::arith;
use crate::poly::{monic_polys, FieldOps, Poly, PrimeField};

#[derive(Debug, Clone)]
pub struct GaloisField {
    p: u16,
    n: u32,
    size: u32,
    modulus: Poly,
    exp: Vec<u16>,
    log: Vec<u32>,
}

impl GaloisField {
    /// Panics unless `p` is prime, `n ≥ 1` and `p^n < 2^16`; callers validate.
    pub fn new(p: u16, n: u32) -> Self {
        let base = PrimeField::new(p).expect("prime characteristic");
        assert!(n >= 1);
        let size = (p as u32).checked_pow(n).expect("field size overflow");
        assert!(size <= u16::MAX as u32, "field too large for u16 indices");
        let modulus = monic_polys(p as u32, n as usize)
            .find(|m| m.is_irreducible(&base))
            .expect("irreducibles exist in every degree");
        let mut field = Self {
            p,
            n,
            size,
            modulus,
            exp: Vec::new(),
            log: Vec::new(),
        };
        field.build_log_tables(&base);
        field
    }

    fn to_poly(&self, a: u16) -> Poly {
        let mut a = a as u32;
        let mut c = Vec::with_capacity(self.n as usize);
        for _ in 0..self.n {
            c.push((a % self.p as u32) as u16);
            a /= self.p as u32;
        }
        Poly::new(c)
    }

    fn index_of(&self, poly: &Poly) -> u16 {
        poly.coeffs()
            .iter()
            .rev()
            .fold(0u32, |acc, &c| acc * self.p as u32 + c as u32) as u16
    }

    fn slow_mul(&self, a: u16, b: u16, base: &PrimeField) -> u16 {
        let prod = self
            .to_poly(a)
            .mul(&self.to_poly(b), base)
            .rem(&self.modulus, base);
        self.index_of(&prod)
    }

    fn build_log_tables(&mut self, base: &PrimeField) {
        let group = (self.size - 1) as u64;
        let factors: Vec<u64> = if group > 1 {
            arith::factorize(group)
                .into_iter()
                .map(|(r, _)| r)
                .collect()
        } else {
            Vec::new()
        };
        let pow = |g: u16, mut e: u64| {
            let (mut acc, mut b) = (1u16, g);
            while e > 0 {
                if e & 1 == 1 {
                    acc = self.slow_mul(acc, b, base);
                }
                b = self.slow_mul(b, b, base);
                e >>= 1;
            }
            acc
        };
        let generator = (1..self.size as u16)
            .find(|&g| factors.iter().all(|r| pow(g, group / r) != 1))
            .expect("multiplicative group is cyclic");
        let mut exp = Vec::with_capacity(group as usize);
        let mut log = vec![0u32; self.size as usize];
        let mut cur = 1u16;
        for k in 0..group as u32 {
            exp.push(cur);
            log[cur as usize] = k;
            cur = self.slow_mul(cur, generator, base);
        }
        self.exp = exp;
        self.log = log;
    }

    pub fn degree(&self) -> u32 {
        self.n
    }

    pub fn modulus(&self) -> &Poly {
        &self.modulus
    }

    /// The chosen primitive element `exp[1]`.
    pub fn primitive_element(&self) -> u16 {
        if self.size == 2 {
            1
        } else {
            self.exp[1]
        }
    }

    /// `x ↦ x^{p^k}`.
    pub fn frobenius(&self, x: u16, k: u32) -> u16 {
        self.pow(x, (self.p as u64).pow(k % self.n))
    }
}

impl FieldOps for GaloisField {
    fn size(&self) -> u32 {
        self.size
    }

    fn characteristic(&self) -> u32 {
        self.p as u32
    }

    fn add(&self, a: u16, b: u16) -> u16 {
        if self.p == 2 {
            return a ^ b;
        }
        let p = self.p as u32;
        let (mut a, mut b) = (a as u32, b as u32);
        let (mut out, mut place) = (0u32, 1u32);
        while a > 0 || b > 0 {
            out += ((a % p + b % p) % p) * place;
            a /= p;
            b /= p;
            place *= p;
        }
        out as u16
    }

    fn neg(&self, a: u16) -> u16 {
        if self.p == 2 {
            return a;
        }
        let p = self.p as u32;
        let mut a = a as u32;
        let (mut out, mut place) = (0u32, 1u32);
        while a > 0 {
            out += ((p - a % p) % p) * place;
            a /= p;
            place *= p;
        }
        out as u16
    }

    fn mul(&self, a: u16, b: u16) -> u16 {
        if a == 0 || b == 0 {
            return 0;
        }
        let group = self.size - 1;
        let k = (self.log[a as usize] + self.log[b as usize]) % group;
        self.exp[k as usize]
    }

    fn inv(&self, a: u16) -> u16 {
        assert!(a != 0, "inverse of zero");
        let group = self.size - 1;
        self.exp[((group - self.log[a as usize]) % group) as usize]
    }
}

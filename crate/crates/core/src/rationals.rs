//! The localizations `Z_(p) = {a/b ∈ Q : p ∤ b}`, the maximal subrings of `Q`
//! that omit `1/p`.
//!
//! Generic over the integer type; see the aliases at the crate root.

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::arith;

/// `Z_(p)` for a prime `p` (primality is the caller's responsibility).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Localization<T> {
    p: T,
}

impl<T: Integer + Clone + Signed> Localization<T> {
    pub fn new(p: T) -> Self {
        assert!(p > T::one(), "localization needs p > 1");
        Self { p }
    }

    pub fn prime(&self) -> &T {
        &self.p
    }

    /// `p ∤ denominator(x)`; `Ratio` keeps `x` in lowest terms.
    pub fn contains(&self, x: &Ratio<T>) -> bool {
        !x.denom().is_multiple_of(&self.p)
    }

    /// Membership in the maximal ideal `pZ_(p)`.
    pub fn in_maximal_ideal(&self, x: &Ratio<T>) -> bool {
        self.contains(x) && x.numer().is_multiple_of(&self.p)
    }

    /// The image of `x` in `Z_(p)/pZ_(p) ≅ F_p`, as a residue in `0..p`.
    pub fn residue(&self, x: &Ratio<T>) -> Option<T> {
        if !self.contains(x) {
            return None;
        }
        let d = x.denom().mod_floor(&self.p);
        let inv = d.extended_gcd(&self.p).x.mod_floor(&self.p);
        Some((x.numer().mod_floor(&self.p) * inv).mod_floor(&self.p))
    }

    /// Characteristic of the residue field.
    pub fn residue_characteristic(&self) -> T {
        self.p.clone()
    }
}

/// Whether `x ∈ Z_(p)`.
pub fn localization_membership<T: Integer + Clone + Signed>(x: &Ratio<T>, p: &T) -> bool {
    !p.is_zero() && Localization::new(p.clone()).contains(x)
}

/// The residue characteristic of `Z_(p)`, namely `p`.
pub fn residue_char<T: Integer + Clone + Signed>(p: &T) -> T {
    Localization::new(p.clone()).residue_characteristic()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LocalizationReport {
    pub primes: Vec<i64>,
    pub pairs: usize,
    pub seed: u64,
    /// `x, y ∈ Z_(p)` implies `x + y, x − y, xy ∈ Z_(p)` on every sample.
    pub closed_under_ring_operations: bool,
    /// The residue map is additive and multiplicative on every sample.
    pub residue_map_is_homomorphism: bool,
    pub excludes_inverse_of_p: bool,
    pub residue_characteristics_distinct: bool,
    pub matched: bool,
}

/// Random rationals with numerator and denominator bounded by `bound`,
/// biased towards denominators divisible by small primes.
fn sample(rng: &mut ChaCha8Rng, bound: i64, primes: &[i64]) -> Ratio<i64> {
    let num = rng.gen_range(-bound..=bound);
    let mut den = rng.gen_range(1..=bound);
    if rng.gen_bool(0.5) {
        den *= primes[rng.gen_range(0..primes.len())];
    }
    Ratio::new(num, den)
}

/// Checks `Z_(p)` for the first `num_primes` primes on `pairs` seeded random
/// pairs of rationals.
pub fn verify_localizations(num_primes: usize, pairs: usize, seed: u64) -> LocalizationReport {
    let primes: Vec<i64> = arith::primes().take(num_primes).map(|p| p as i64).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut closed = true;
    let mut hom = true;
    for _ in 0..pairs {
        let x = sample(&mut rng, 1000, &primes);
        let y = sample(&mut rng, 1000, &primes);
        for &p in &primes {
            let z = Localization::new(p);
            if z.contains(&x) && z.contains(&y) {
                closed &= z.contains(&(x + y)) && z.contains(&(x - y)) && z.contains(&(x * y));
                let (rx, ry) = (z.residue(&x).unwrap(), z.residue(&y).unwrap());
                hom &= z.residue(&(x + y)) == Some((rx + ry) % p)
                    && z.residue(&(x * y)) == Some(rx * ry % p);
            }
        }
    }
    let excludes = primes
        .iter()
        .all(|&p| !localization_membership(&Ratio::new(1, p), &p));
    let chars: std::collections::BTreeSet<i64> = primes.iter().map(residue_char).collect();
    let distinct = chars.len() == primes.len();
    LocalizationReport {
        matched: closed && hom && excludes && distinct,
        primes,
        pairs,
        seed,
        closed_under_ring_operations: closed,
        residue_map_is_homomorphism: hom,
        excludes_inverse_of_p: excludes,
        residue_characteristics_distinct: distinct,
    }
}

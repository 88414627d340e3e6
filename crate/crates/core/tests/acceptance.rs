//! One check per acceptance criterion, each printing a single PASS/FAIL line.

use std::collections::BTreeSet;
use std::io::Write;
use std::time::{Duration, Instant};

use maxsub::absfield::{self, parse_field, AbsField, Cardinal};
use maxsub::classify::{self, PredictedKind, WitnessTarget};
use maxsub::finring::{self, ElementSet, FiniteRing, RingSpec, Subring};
use maxsub::funcfield::{self, Discrimination, FiniteBase};
use maxsub::rationals;
use maxsub::{Exponent, SteinitzNumber};
use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<(), String>;
/// Name, check and time budget in seconds.
type Criterion = (&'static str, fn() -> Check, u64);

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

const SEED: u64 = 0x5EED_2024;
const PRIMES: [u64; 10] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29];

fn random_steinitz(rng: &mut ChaCha8Rng) -> SteinitzNumber {
    let exponent = |rng: &mut ChaCha8Rng| {
        if rng.gen_ratio(1, 5) {
            Exponent::Infinite
        } else {
            Exponent::Finite(rng.gen_range(0..6))
        }
    };
    let k = rng.gen_range(0..6);
    let mut primes: Vec<u64> = PRIMES.to_vec();
    let entries: Vec<(u64, Exponent)> = (0..k)
        .map(|_| {
            let p = primes.swap_remove(rng.gen_range(0..primes.len()));
            (p, exponent(rng))
        })
        .collect();
    let default = match rng.gen_range(0..5) {
        0 => Exponent::Infinite,
        1 => Exponent::ONE,
        _ => Exponent::ZERO,
    };
    SteinitzNumber::from_parts(entries, default).unwrap()
}

fn criterion_1() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for i in 0..10_000 {
        let (a, b, c) = (
            random_steinitz(&mut rng),
            random_steinitz(&mut rng),
            random_steinitz(&mut rng),
        );
        ensure!(a.mul(&b) == b.mul(&a), "triple {i}: mul not commutative");
        ensure!(
            a.mul(&b).mul(&c) == a.mul(&b.mul(&c)),
            "triple {i}: mul not associative"
        );
        ensure!(
            a.meet(&b) == b.meet(&a) && a.join(&b) == b.join(&a),
            "triple {i}: lattice commutativity"
        );
        ensure!(
            a.meet(&b).meet(&c) == a.meet(&b.meet(&c)),
            "triple {i}: meet associativity"
        );
        ensure!(
            a.join(&b).join(&c) == a.join(&b.join(&c)),
            "triple {i}: join associativity"
        );
        ensure!(
            a.meet(&a.join(&b)) == a && a.join(&a.meet(&b)) == a,
            "triple {i}: absorption"
        );
        ensure!(
            a.stable_part().mul(&a.finite_part()) == a,
            "triple {i}: stable·finite ≠ identity"
        );

        let (x, y) = (
            rng.gen_range(1..1_000_000u64),
            rng.gen_range(1..1_000_000u64),
        );
        let (sx, sy) = (
            SteinitzNumber::from_natural(x),
            SteinitzNumber::from_natural(y),
        );
        ensure!(
            sx.meet(&sy).to_u64() == Some(num_integer::gcd(x, y)),
            "gcd({x},{y})"
        );
        ensure!(
            sx.join(&sy).to_u64() == Some(num_integer::lcm(x, y)),
            "lcm({x},{y})"
        );
        ensure!(
            sx.mul(&sy).as_natural().unwrap() == Some(BigUint::from(x) * y),
            "{x}·{y}"
        );
    }
    Ok(())
}

/// `{x : x^{p^d} = x}`, the subfield of order `p^d`.
fn frobenius_fixed(r: &FiniteRing, p: u64, d: u32) -> Vec<u16> {
    r.elements().filter(|&x| r.pow(x, p.pow(d)) == x).collect()
}

/// Lengths of all maximal chains `r = R_0 ⊋ R_1 ⊋ … ⊋ R_m` with `R_m` having
/// no maximal subrings.
fn chain_lengths(r: &FiniteRing, out: &mut BTreeSet<u64>, depth: u64) {
    let max = finring::maximal_subrings(r).unwrap();
    if max.is_empty() {
        out.insert(depth);
    }
    for s in max {
        chain_lengths(&s.to_ring(), out, depth + 1);
    }
}

fn criterion_2() -> Check {
    let mut fields = 0;
    for p in (2u64..=256).filter(|&p| maxsub::arith::is_prime(p)) {
        let mut n = 1u32;
        while p.pow(n) <= 256 {
            let r = finring::build(&RingSpec::Galois { p, n }).map_err(|e| e.to_string())?;
            let brute = finring::maximal_subrings(&r).map_err(|e| e.to_string())?;
            let e = AbsField::finite(p, n as u64).unwrap();
            let predicted = absfield::maximal_subrings(&e).unwrap();
            ensure!(
                brute.len() == predicted.len(),
                "F_{p}^{n}: count {} vs {}",
                brute.len(),
                predicted.len()
            );

            let brute_sets: BTreeSet<Vec<u16>> = brute.iter().map(Subring::elements).collect();
            let predicted_sets: BTreeSet<Vec<u16>> = predicted
                .iter()
                .map(|d| frobenius_fixed(&r, p, d.subfield.finite_degree().unwrap() as u32))
                .collect();
            ensure!(
                brute_sets == predicted_sets,
                "F_{p}^{n}: maximal subring sets differ"
            );

            let classes = finring::classify_subrings(&brute).map_err(|e| e.to_string())?;
            ensure!(
                absfield::count_maximal_subrings_up_to_iso(&e) == Cardinal::Finite(classes.len()),
                "F_{p}^{n}: iso classes"
            );

            let mut lengths = BTreeSet::new();
            chain_lengths(&r, &mut lengths, 0);
            let expected = absfield::chain_length(&e).unwrap();
            ensure!(
                lengths == BTreeSet::from([expected]),
                "F_{p}^{n}: chain lengths {lengths:?}, expected {expected}"
            );
            fields += 1;
            n += 1;
        }
    }
    // 54 primes below 256 and 16 higher prime powers
    ensure!(fields == 70, "checked {fields} fields");
    Ok(())
}

/// The span over `F_2` of the powers of `x`, which is the subfield `F_2[x]`.
/// Once `x^k` lies in the span of lower powers, so do all higher powers.
fn f2_span_of_powers(r: &FiniteRing, x: u16) -> ElementSet {
    let mut span = ElementSet::from_iter_in(r.order(), [0]);
    let mut power = 1u16;
    while !span.contains(power) {
        let shifted: Vec<u16> = span.iter().map(|s| r.add(s, power)).collect();
        for s in shifted {
            span.insert(s);
        }
        power = r.mul(power, x);
    }
    span
}

fn criterion_3() -> Check {
    let e = parse_field("GF(2^2^2*3*5^inf)").unwrap();
    ensure!(absfield::chain_length(&e).unwrap() == 3, "chain_length");

    let f = AbsField::finite(2, 12).unwrap();
    let chains = absfield::enumerate_chains(&f, 100).unwrap();
    // orderings of the multiset {2, 2, 3}
    let mut orderings = BTreeSet::new();
    for perm in [
        [0, 1, 2],
        [0, 2, 1],
        [1, 0, 2],
        [1, 2, 0],
        [2, 0, 1],
        [2, 1, 0],
    ] {
        orderings.insert(perm.map(|i| [2u64, 2, 3][i]));
    }
    ensure!(
        chains.len() == orderings.len(),
        "{} chains, expected {}",
        chains.len(),
        orderings.len()
    );
    ensure!(
        absfield::chain_count(&f).unwrap() == BigUint::from(orderings.len()),
        "chain_count"
    );

    let r = finring::build(&RingSpec::Galois { p: 2, n: 12 }).map_err(|e| e.to_string())?;
    ensure!(r.order() == 4096, "F_4096 order");
    let mut lattice: BTreeSet<ElementSet> = BTreeSet::new();
    for x in r.elements() {
        lattice.insert(f2_span_of_powers(&r, x));
    }
    let orders: BTreeSet<usize> = lattice.iter().map(ElementSet::len).collect();
    ensure!(
        orders == BTreeSet::from([2, 4, 8, 16, 64, 4096]),
        "subfield orders {orders:?}"
    );
    let by_degree = |d: u64| {
        lattice
            .iter()
            .find(|s| s.len() == 1 << d)
            .expect("subfield present")
    };
    for chain in &chains {
        let mut prev = by_degree(12);
        let mut seen_steps = Vec::new();
        for sub in chain {
            let d = sub.finite_degree().unwrap();
            let cur = by_degree(d);
            ensure!(
                cur.is_proper_subset(prev),
                "chain step not a proper subfield"
            );
            let between = lattice
                .iter()
                .any(|s| cur.is_proper_subset(s) && s.is_proper_subset(prev));
            ensure!(!between, "chain step to degree {d} is not maximal");
            seen_steps.push((prev.len().trailing_zeros() as u64) / d);
            prev = cur;
        }
        ensure!(prev.len() == 2, "chain does not end at F_2");
        let mut sorted = seen_steps.clone();
        sorted.sort_unstable();
        ensure!(sorted == [2, 2, 3], "chain step degrees {seen_steps:?}");
    }
    Ok(())
}

fn criterion_4() -> Check {
    // known counts of monic irreducibles of degree 1..8
    let known: [(u64, [u64; 8]); 2] = [
        (2, [2, 1, 2, 3, 6, 9, 18, 30]),
        (3, [3, 3, 8, 18, 48, 116, 312, 810]),
    ];
    for (q, counts) in known {
        let base = AbsField::finite(q, 1).unwrap();
        for m in 1..=8u32 {
            if q.pow(m) > 1 << 16 {
                continue;
            }
            let count = finring::count_monic_irreducibles(q, m).map_err(|e| e.to_string())?;
            ensure!(count == counts[m as usize - 1], "count({q},{m}) = {count}");
            let exists = absfield::irreducible_degree_exists(&base, m as u64).unwrap();
            ensure!(exists == (count > 0), "criterion disagrees at q={q} m={m}");
        }
    }
    let e = parse_field("GF(2^2^inf)").unwrap();
    ensure!(
        !absfield::irreducible_degree_exists(&e, 2).unwrap(),
        "m=2 over GF(2^2^inf)"
    );
    ensure!(
        absfield::irreducible_degree_exists(&e, 3).unwrap(),
        "m=3 over GF(2^2^inf)"
    );
    Ok(())
}

fn criterion_5() -> Check {
    // (p, n, maximal subfields of GF(p,n), maximal subrings of K×K)
    for (p, n, subfields, total) in [(2, 1, 0, 1), (3, 1, 0, 1), (2, 2, 1, 4), (3, 2, 1, 4)] {
        let r = classify::verify_kxk(p, n).map_err(|e| e.to_string())?;
        ensure!(r.matched, "GF({p},{n}) mismatch");
        ensure!(
            r.found.len() == total,
            "GF({p},{n}): {} maximal subrings",
            r.found.len()
        );
        ensure!(
            r.iso_classes == subfields + 1,
            "GF({p},{n}): {} classes",
            r.iso_classes
        );
    }
    Ok(())
}

fn verify_base_witness(
    ring: &FiniteRing,
    k: &FiniteRing,
    members: &[u16],
    map: &[(u16, u16)],
) -> Check {
    let f = |x: u16| map.iter().find(|&&(a, _)| a == x).map(|&(_, b)| b);
    ensure!(
        map.len() == members.len() && members.len() == k.order(),
        "witness size"
    );
    let images: BTreeSet<u16> = map.iter().map(|&(_, b)| b).collect();
    ensure!(images.len() == k.order(), "witness not bijective");
    ensure!(f(1) == Some(1), "witness does not fix 1");
    for &x in members {
        for &y in members {
            let (fx, fy) = (f(x).unwrap(), f(y).unwrap());
            ensure!(
                f(ring.add(x, y)) == Some(k.add(fx, fy)),
                "witness not additive"
            );
            ensure!(
                f(ring.mul(x, y)) == Some(k.mul(fx, fy)),
                "witness not multiplicative"
            );
        }
    }
    Ok(())
}

fn criterion_6() -> Check {
    for (p, n) in [(2, 1), (3, 1), (2, 2)] {
        let spec = RingSpec::Galois { p, n };
        let ring = finring::build(&RingSpec::Dual(Box::new(spec.clone()))).unwrap();
        let k = finring::build(&spec).unwrap();
        let r = classify::verify_dual_numbers(p, n).map_err(|e| e.to_string())?;
        ensure!(r.matched, "dual GF({p},{n}) mismatch");
        for (i, kind) in r.found_kinds.iter().enumerate() {
            match kind {
                Some(PredictedKind::Coefficient { subfield_order }) => {
                    let q = *subfield_order as usize;
                    ensure!(r.found[i].len() == q * k.order(), "S + Kα has wrong size");
                }
                Some(PredictedKind::EmbeddedCopyOfK) => {
                    let w = r
                        .witnesses
                        .iter()
                        .find(|w| w.from == i && w.to == WitnessTarget::BaseField)
                        .ok_or("missing witness")?;
                    verify_base_witness(&ring, &k, &r.found[i], &w.map)?;
                }
                other => return Err(format!("dual GF({p},{n}): unexpected {other:?}")),
            }
        }
    }
    Ok(())
}

fn criterion_7() -> Check {
    for (p, n, count) in [(2, 2, 1), (2, 3, 3), (3, 2, 1)] {
        let r = classify::verify_product_field(p, n).map_err(|e| e.to_string())?;
        ensure!(r.iso_classes == 1, "F_{p}^{n}: {} classes", r.iso_classes);
        ensure!(
            r.found.len() == count,
            "F_{p}^{n}: {} maximal subrings",
            r.found.len()
        );
    }
    Ok(())
}

fn criterion_8() -> Check {
    for k in ["F_2", "GF(2^2^inf)"] {
        let base = parse_field(k).unwrap();
        let places: Vec<_> = funcfield::infinitely_many_classes_witness(&base)
            .map_err(|e| e.to_string())?
            .take(10)
            .collect();
        ensure!(places.len() == 10, "{k}: stream too short");
        for (i, a) in places.iter().enumerate() {
            for b in &places[i + 1..] {
                let verdict = funcfield::discriminate_places(a, b).map_err(|e| e.to_string())?;
                ensure!(
                    matches!(verdict, Discrimination::NotIsomorphic { .. }),
                    "{k}: {a} and {b} not separated"
                );
            }
        }
    }
    let closed = parse_field("GF(2^all^inf)").unwrap();
    ensure!(
        funcfield::infinitely_many_classes_witness(&closed).is_err(),
        "algebraically closed base must error"
    );
    Ok(())
}

fn criterion_9() -> Check {
    for p in [2, 3] {
        let base = FiniteBase::new(p, 1).map_err(|e| e.to_string())?;
        let r = funcfield::verify_group_action(&base, 2).map_err(|e| e.to_string())?;
        ensure!(r.passed(), "F_{p}: {r:?}");
        let orbit = funcfield::check_orbit_vs_iso(&base, 1).map_err(|e| e.to_string())?;
        ensure!(
            orbit.orbits.len() == 1 && orbit.orbits[0].len() as u64 == p + 1,
            "F_{p}: degree-one orbit"
        );
    }
    Ok(())
}

/// `p`-adic valuation.
fn valuation(mut n: i64, p: i64) -> u32 {
    let mut v = 0;
    while n != 0 && n % p == 0 {
        n /= p;
        v += 1;
    }
    v
}

fn criterion_10() -> Check {
    let report = rationals::verify_localizations(20, 1000, SEED);
    ensure!(report.matched, "{report:?}");
    // independent membership oracle on unreduced fractions: v_p(b) ≤ v_p(a)
    let primes: Vec<i64> = report.primes.clone();
    let member = |a: i64, b: i64, p: i64| a == 0 || valuation(b, p) <= valuation(a, p);
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 1);
    for _ in 0..1000 {
        let (a, b) = (
            rng.gen_range(-500..=500i64),
            rng.gen_range(1..=500i64) * primes[rng.gen_range(0..5)],
        );
        let (c, d) = (rng.gen_range(-500..=500i64), rng.gen_range(1..=500i64));
        for &p in &primes {
            let x = num_rational::Ratio::new(a, b);
            ensure!(
                maxsub::rationals_localization_membership(&x, p) == member(a, b, p),
                "membership of {a}/{b} at {p}"
            );
            if member(a, b, p) && member(c, d, p) {
                ensure!(member(a * d + b * c, b * d, p), "sum leaves Z_({p})");
                ensure!(member(a * d - b * c, b * d, p), "difference leaves Z_({p})");
                ensure!(member(a * c, b * d, p), "product leaves Z_({p})");
            }
        }
    }
    let chars: BTreeSet<i64> = primes
        .iter()
        .map(|&p| maxsub::rationals_residue_char(p))
        .collect();
    ensure!(chars.len() == 20, "residue characteristics collide");
    ensure!(
        primes
            .iter()
            .all(|&p| !maxsub::rationals_localization_membership(
                &num_rational::Ratio::new(1, p),
                p
            )),
        "1/p is a member"
    );
    Ok(())
}

/// Written to stderr directly so the lines appear without `--nocapture`.
fn report(line: &str) {
    let _ = writeln!(std::io::stderr(), "{line}");
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 10] = [
        ("1 Steinitz laws and natural oracle", criterion_1, 5),
        (
            "2 finite fields: brute force vs Steinitz correspondence",
            criterion_2,
            60,
        ),
        ("3 chain length and chains of F_4096", criterion_3, 30),
        ("4 irreducible-degree criterion", criterion_4, 5),
        ("5 maximal subrings of K x K", criterion_5, 120),
        ("6 maximal subrings of dual numbers", criterion_6, 60),
        (
            "7 maximal subrings of F_p^n form one class",
            criterion_7,
            30,
        ),
        ("8 place discrimination", criterion_8, 1),
        ("9 Mobius orbits on places", criterion_9, 10),
        ("10 localizations of Q", criterion_10, 5),
    ];
    let mut failures = Vec::new();
    for (name, check, budget) in criteria {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        let outcome = outcome.and_then(|()| {
            if elapsed <= Duration::from_secs(budget) {
                Ok(())
            } else {
                Err(format!("took {elapsed:.2?}, budget {budget}s"))
            }
        });
        match outcome {
            Ok(()) => report(&format!("PASS criterion {name} ({elapsed:.2?})")),
            Err(why) => {
                report(&format!("FAIL criterion {name}: {why}"));
                failures.push(name);
            }
        }
    }
    assert!(failures.is_empty(), "failed: {failures:?}");
}

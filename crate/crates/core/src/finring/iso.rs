//! Ring isomorphism by invariant filtering and backtracking over generator
//! images.

use std::collections::BTreeMap;

use serde::Serialize;

use super::subrings::{adjoin, prime_subring};
use super::{FiniteRing, RingError, Subring, ENUMERATION_CAP};
use crate::arith;

/// Per-element isomorphism invariants.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ElementProfile {
    pub additive_order: usize,
    /// 0 for non-units.
    pub multiplicative_order: usize,
    /// Least `k` with `x^k = 0`, or 0 if `x` is not nilpotent.
    pub nilpotency_index: usize,
    pub idempotent: bool,
    /// Order of the subring generated by `x`.
    pub generated_order: usize,
    pub annihilator_order: usize,
}

/// Whole-ring invariants; equal fingerprints are necessary for isomorphism.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct IsoFingerprint {
    pub order: usize,
    pub characteristic: usize,
    pub units: usize,
    pub idempotents: usize,
    pub nilpotents: usize,
    /// `d_1 | d_2 | …` with the additive group `≅ ⊕ Z/d_i`.
    pub additive_invariant_factors: Vec<usize>,
    /// Sorted multiplicative orders of the units.
    pub unit_orders: Vec<usize>,
}

fn profile(r: &FiniteRing, x: u16) -> ElementProfile {
    let n = r.order();
    let multiplicative_order = if r.is_unit(x) {
        let mut k = 1;
        let mut acc = x;
        while acc != 1 {
            acc = r.mul(acc, x);
            k += 1;
        }
        k
    } else {
        0
    };
    let mut nilpotency_index = 0;
    let mut acc = x;
    for k in 1..=n {
        if acc == 0 {
            nilpotency_index = k;
            break;
        }
        acc = r.mul(acc, x);
    }
    ElementProfile {
        additive_order: r.additive_order(x),
        multiplicative_order,
        nilpotency_index,
        idempotent: r.mul(x, x) == x,
        generated_order: adjoin(r, &prime_subring(r), x).len(),
        annihilator_order: r.elements().filter(|&y| r.mul(x, y) == 0).count(),
    }
}

fn profiles(r: &FiniteRing) -> Vec<ElementProfile> {
    r.elements().map(|x| profile(r, x)).collect()
}

/// Invariant factors of a finite abelian group from its element-order
/// counts.
fn invariant_factors(order: usize, element_orders: &[usize]) -> Vec<usize> {
    let mut per_prime: Vec<Vec<usize>> = Vec::new();
    for (p, _) in arith::factorize(order as u64) {
        let p = p as usize;
        // c[k] = log_p |{x : p^k x = 0}|
        let mut c = vec![0usize];
        let mut pk = 1usize;
        loop {
            pk *= p;
            let count = element_orders
                .iter()
                .filter(|&&o| pk.is_multiple_of(o))
                .count();
            let mut log = 0;
            let mut v = count;
            while v > 1 {
                v /= p;
                log += 1;
            }
            if log == *c.last().unwrap() {
                break;
            }
            c.push(log);
        }
        // factors of order ≥ p^k: c[k] − c[k−1]
        let mut exps = Vec::new();
        for k in 1..c.len() {
            let at_least = c[k] - c[k - 1];
            let at_least_next = if k + 1 < c.len() { c[k + 1] - c[k] } else { 0 };
            for _ in 0..at_least - at_least_next {
                exps.push(p.pow(k as u32));
            }
        }
        exps.sort_unstable_by(|a, b| b.cmp(a));
        per_prime.push(exps);
    }
    let len = per_prime.iter().map(Vec::len).max().unwrap_or(0);
    let mut factors: Vec<usize> = (0..len)
        .map(|i| per_prime.iter().filter_map(|e| e.get(i)).product())
        .collect();
    factors.sort_unstable();
    factors
}

impl IsoFingerprint {
    pub fn of(r: &FiniteRing) -> Self {
        Self::from_profiles(r, &profiles(r))
    }

    fn from_profiles(r: &FiniteRing, ps: &[ElementProfile]) -> Self {
        let additive: Vec<usize> = ps.iter().map(|p| p.additive_order).collect();
        let mut unit_orders: Vec<usize> = ps
            .iter()
            .map(|p| p.multiplicative_order)
            .filter(|&o| o > 0)
            .collect();
        unit_orders.sort_unstable();
        Self {
            order: r.order(),
            characteristic: r.characteristic(),
            units: unit_orders.len(),
            idempotents: ps.iter().filter(|p| p.idempotent).count(),
            nilpotents: ps.iter().filter(|p| p.nilpotency_index > 0).count(),
            additive_invariant_factors: invariant_factors(r.order(), &additive),
            unit_orders,
        }
    }
}

/// Whether `map` (indexed by elements of `a`) is a ring isomorphism `a → b`.
pub fn is_isomorphism(a: &FiniteRing, b: &FiniteRing, map: &[u16]) -> bool {
    if a.order() != b.order() || map.len() != a.order() || map.get(1) != Some(&1) {
        return false;
    }
    let mut hit = vec![false; b.order()];
    for &y in map {
        if y as usize >= b.order() || std::mem::replace(&mut hit[y as usize], true) {
            return false;
        }
    }
    a.elements().all(|x| {
        a.elements().all(|y| {
            map[a.add(x, y) as usize] == b.add(map[x as usize], map[y as usize])
                && map[a.mul(x, y) as usize] == b.mul(map[x as usize], map[y as usize])
        })
    })
}

struct Search<'r> {
    a: &'r FiniteRing,
    b: &'r FiniteRing,
    pa: Vec<ElementProfile>,
    pb: Vec<ElementProfile>,
    gens: Vec<u16>,
}

const UNMAPPED: u16 = u16::MAX;

impl Search<'_> {
    /// Adds `x ↦ y` and closes the partial map under `+` and `·`. Returns the
    /// newly mapped domain elements, or `None` on a conflict.
    fn extend(
        &self,
        fwd: &mut [u16],
        back: &mut [u16],
        domain: &mut Vec<u16>,
        x: u16,
        y: u16,
    ) -> Option<usize> {
        let start = domain.len();
        let mut queue = vec![(x, y)];
        let ok = (|| {
            if fwd[x as usize] != UNMAPPED {
                return (fwd[x as usize] == y).then_some(());
            }
            if back[y as usize] != UNMAPPED || self.pa[x as usize] != self.pb[y as usize] {
                return None;
            }
            fwd[x as usize] = y;
            back[y as usize] = x;
            domain.push(x);
            while let Some((u, v)) = queue.pop() {
                let mut i = 0;
                while i < domain.len() {
                    let s = domain[i];
                    let t = fwd[s as usize];
                    for (c, d) in [
                        (self.a.add(u, s), self.b.add(v, t)),
                        (self.a.mul(u, s), self.b.mul(v, t)),
                    ] {
                        let cur = fwd[c as usize];
                        if cur == UNMAPPED {
                            if back[d as usize] != UNMAPPED
                                || self.pa[c as usize] != self.pb[d as usize]
                            {
                                return None;
                            }
                            fwd[c as usize] = d;
                            back[d as usize] = c;
                            domain.push(c);
                            queue.push((c, d));
                        } else if cur != d {
                            return None;
                        }
                    }
                    i += 1;
                }
            }
            Some(())
        })();
        match ok {
            Some(()) => Some(start),
            None => {
                self.undo(fwd, back, domain, start);
                None
            }
        }
    }

    fn undo(&self, fwd: &mut [u16], back: &mut [u16], domain: &mut Vec<u16>, start: usize) {
        for x in domain.drain(start..) {
            back[fwd[x as usize] as usize] = UNMAPPED;
            fwd[x as usize] = UNMAPPED;
        }
    }

    fn run(&self, depth: usize, fwd: &mut [u16], back: &mut [u16], domain: &mut Vec<u16>) -> bool {
        if depth == self.gens.len() {
            return domain.len() == self.a.order();
        }
        let g = self.gens[depth];
        if fwd[g as usize] != UNMAPPED {
            return self.run(depth + 1, fwd, back, domain);
        }
        for y in self.b.elements() {
            if back[y as usize] != UNMAPPED || self.pa[g as usize] != self.pb[y as usize] {
                continue;
            }
            if let Some(start) = self.extend(fwd, back, domain, g, y) {
                if self.run(depth + 1, fwd, back, domain) {
                    return true;
                }
                self.undo(fwd, back, domain, start);
            }
        }
        false
    }
}

/// Greedy generating set: each step adjoins the element that enlarges the
/// generated subring most, preferring rarer profiles on ties.
fn generators(r: &FiniteRing, ps: &[ElementProfile]) -> Vec<u16> {
    let mut freq: BTreeMap<ElementProfile, usize> = BTreeMap::new();
    for p in ps {
        *freq.entry(*p).or_default() += 1;
    }
    let mut span = prime_subring(r);
    let mut gens = Vec::new();
    while span.len() < r.order() {
        let (_, _, x, next) = r
            .elements()
            .filter(|&x| !span.contains(x))
            .map(|x| {
                let t = adjoin(r, &span, x);
                (std::cmp::Reverse(t.len()), freq[&ps[x as usize]], x, t)
            })
            .min_by(|a, b| (a.0, a.1, a.2).cmp(&(b.0, b.1, b.2)))
            .expect("span is proper");
        gens.push(x);
        span = next;
    }
    gens
}

fn check_cap(r: &FiniteRing) -> Result<(), RingError> {
    if r.order() > ENUMERATION_CAP {
        return Err(RingError::OrderCapExceeded {
            order: r.order() as u128,
            cap: ENUMERATION_CAP,
        });
    }
    Ok(())
}

/// An isomorphism `a → b` as the image of each element of `a`, verified
/// exhaustively, or `None` if the rings are not isomorphic.
pub fn find_isomorphism(a: &FiniteRing, b: &FiniteRing) -> Result<Option<Vec<u16>>, RingError> {
    check_cap(a)?;
    check_cap(b)?;
    if a.order() != b.order() || a.characteristic() != b.characteristic() {
        return Ok(None);
    }
    let (pa, pb) = (profiles(a), profiles(b));
    if IsoFingerprint::from_profiles(a, &pa) != IsoFingerprint::from_profiles(b, &pb) {
        return Ok(None);
    }
    let mut sa = pa.clone();
    let mut sb = pb.clone();
    sa.sort_unstable();
    sb.sort_unstable();
    if sa != sb {
        return Ok(None);
    }
    let gens = generators(a, &pa);
    let search = Search { a, b, pa, pb, gens };
    let n = a.order();
    let mut fwd = vec![UNMAPPED; n];
    let mut back = vec![UNMAPPED; n];
    let mut domain = Vec::new();
    // The prime subring maps canonically.
    if search
        .extend(&mut fwd, &mut back, &mut domain, 0, 0)
        .is_none()
        || search
            .extend(&mut fwd, &mut back, &mut domain, 1, 1)
            .is_none()
    {
        return Ok(None);
    }
    if !search.run(0, &mut fwd, &mut back, &mut domain) {
        return Ok(None);
    }
    assert!(
        is_isomorphism(a, b, &fwd),
        "isomorphism search produced an invalid witness"
    );
    Ok(Some(fwd))
}

pub fn are_isomorphic(a: &FiniteRing, b: &FiniteRing) -> Result<bool, RingError> {
    Ok(find_isomorphism(a, b)?.is_some())
}

/// One isomorphism class of a population, by population index.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IsoClass {
    /// Lowest index in the class.
    pub representative: usize,
    pub members: Vec<usize>,
    /// For each non-representative member, `(member, map)` where `map` sends
    /// the member's elements to the representative's, as `(from, to)` pairs.
    pub witnesses: Vec<(usize, Vec<(u16, u16)>)>,
}

/// Partitions `rings` into isomorphism classes, ordered by representative.
/// Witness pairs use each ring's own element indices.
pub fn classify_up_to_iso(rings: &[FiniteRing]) -> Result<Vec<IsoClass>, RingError> {
    let fps: Vec<IsoFingerprint> = rings.iter().map(IsoFingerprint::of).collect();
    let mut classes: Vec<IsoClass> = Vec::new();
    for (i, r) in rings.iter().enumerate() {
        let mut placed = false;
        for class in classes.iter_mut() {
            let rep = class.representative;
            if fps[rep] != fps[i] {
                continue;
            }
            if let Some(map) = find_isomorphism(r, &rings[rep])? {
                let pairs = map
                    .iter()
                    .enumerate()
                    .map(|(x, &y)| (x as u16, y))
                    .collect();
                class.members.push(i);
                class.witnesses.push((i, pairs));
                placed = true;
                break;
            }
        }
        if !placed {
            classes.push(IsoClass {
                representative: i,
                members: vec![i],
                witnesses: Vec::new(),
            });
        }
    }
    Ok(classes)
}

/// As [`classify_up_to_iso`], with witness pairs in parent element indices.
pub fn classify_subrings(subs: &[Subring<'_>]) -> Result<Vec<IsoClass>, RingError> {
    let rings: Vec<FiniteRing> = subs.iter().map(Subring::to_ring).collect();
    let mut classes = classify_up_to_iso(&rings)?;
    for class in classes.iter_mut() {
        let rep = subs[class.representative].elements();
        for (member, pairs) in class.witnesses.iter_mut() {
            let els = subs[*member].elements();
            for (from, to) in pairs.iter_mut() {
                *from = els[*from as usize];
                *to = rep[*to as usize];
            }
        }
    }
    Ok(classes)
}

use std::collections::HashSet;

use super::{ElementSet, FiniteRing, RingError, ENUMERATION_CAP};

/// A unital subring, stored as a member bitset over the parent's elements.
#[derive(Debug, Clone)]
pub struct Subring<'a> {
    parent: &'a FiniteRing,
    members: ElementSet,
}

impl PartialEq for Subring<'_> {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self.parent, other.parent) && self.members == other.members
    }
}

impl Eq for Subring<'_> {}

impl<'a> Subring<'a> {
    /// Wraps a member set; panics if it is not a unital subring.
    pub fn new(parent: &'a FiniteRing, members: ElementSet) -> Self {
        let s = Self { parent, members };
        if let Err(e) = s.check_closed() {
            panic!("not a subring of {}: {e}", parent.label());
        }
        s
    }

    /// The subring generated by `gens`.
    pub fn generated_by(parent: &'a FiniteRing, gens: impl IntoIterator<Item = u16>) -> Self {
        let base = prime_subring(parent);
        let members = gens
            .into_iter()
            .fold(base, |acc, g| adjoin(parent, &acc, g));
        Self { parent, members }
    }

    pub fn parent(&self) -> &'a FiniteRing {
        self.parent
    }

    pub fn members(&self) -> &ElementSet {
        &self.members
    }

    pub fn elements(&self) -> Vec<u16> {
        self.members.to_vec()
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, x: u16) -> bool {
        self.members.contains(x)
    }

    pub fn is_proper(&self) -> bool {
        self.order() < self.parent.order()
    }

    pub fn is_subset(&self, other: &Subring<'_>) -> bool {
        self.members.is_subset(&other.members)
    }

    /// Verifies 0, 1 and closure under `+`, `·` and negation.
    pub fn check_closed(&self) -> Result<(), String> {
        let r = self.parent;
        if !self.contains(0) || !self.contains(1) {
            return Err("missing 0 or 1".into());
        }
        let els = self.elements();
        for &a in &els {
            if !self.contains(r.neg(a)) {
                return Err(format!("-{a} missing"));
            }
            for &b in &els {
                if !self.contains(r.add(a, b)) || !self.contains(r.mul(a, b)) {
                    return Err(format!("not closed at ({a},{b})"));
                }
            }
        }
        Ok(())
    }

    /// A standalone ring whose element `i` is the `i`-th smallest member.
    pub fn to_ring(&self) -> FiniteRing {
        let els = self.elements();
        let n = els.len();
        let mut local = vec![u16::MAX; self.parent.order()];
        for (i, &x) in els.iter().enumerate() {
            local[x as usize] = i as u16;
        }
        let mut add = vec![0u16; n * n];
        let mut mul = vec![0u16; n * n];
        for (i, &a) in els.iter().enumerate() {
            for (j, &b) in els.iter().enumerate() {
                add[i * n + j] = local[self.parent.add(a, b) as usize];
                mul[i * n + j] = local[self.parent.mul(a, b) as usize];
            }
        }
        let label = format!("subring of {} of order {n}", self.parent.label());
        FiniteRing::from_tables(label, n, add, mul)
    }
}

/// The subring generated by `1`.
pub(crate) fn prime_subring(r: &FiniteRing) -> ElementSet {
    let mut s = ElementSet::empty(r.order());
    s.insert(0);
    let mut x = 1;
    while s.insert(x) {
        x = r.add(x, 1);
    }
    s
}

/// Closure of a subring `base` together with `x`.
pub(crate) fn adjoin(r: &FiniteRing, base: &ElementSet, x: u16) -> ElementSet {
    if base.contains(x) {
        return base.clone();
    }
    let mut set = base.clone();
    let mut members = base.to_vec();
    let mut queue = vec![x];
    set.insert(x);
    members.push(x);
    while let Some(a) = queue.pop() {
        let mut i = 0;
        while i < members.len() {
            let b = members[i];
            for c in [r.add(a, b), r.mul(a, b)] {
                if set.insert(c) {
                    members.push(c);
                    queue.push(c);
                }
            }
            i += 1;
        }
    }
    set
}

/// Subrings found by enumeration, sorted by `(order, members)`.
#[derive(Debug, Clone)]
pub struct SubringLattice<'a> {
    ring: &'a FiniteRing,
    sets: Vec<ElementSet>,
}

impl<'a> SubringLattice<'a> {
    pub fn compute(ring: &'a FiniteRing, cap: usize) -> Result<Self, RingError> {
        if ring.order() > cap {
            return Err(RingError::OrderCapExceeded {
                order: ring.order() as u128,
                cap,
            });
        }
        let n = ring.order();
        let start = prime_subring(ring);
        let mut seen: HashSet<ElementSet> = HashSet::new();
        seen.insert(start.clone());
        let mut frontier = vec![start];
        while let Some(s) = frontier.pop() {
            let mut done = s.clone();
            for x in 0..n as u16 {
                if done.contains(x) {
                    continue;
                }
                // S[x] = S[x + s] for every s in S
                for y in s.iter() {
                    done.insert(ring.add(x, y));
                }
                let t = adjoin(ring, &s, x);
                if !seen.contains(&t) {
                    seen.insert(t.clone());
                    frontier.push(t);
                }
            }
        }
        let mut sets: Vec<ElementSet> = seen.into_iter().collect();
        sets.sort_by(|a, b| {
            a.len()
                .cmp(&b.len())
                .then_with(|| a.to_vec().cmp(&b.to_vec()))
        });
        Ok(Self { ring, sets })
    }

    pub fn ring(&self) -> &'a FiniteRing {
        self.ring
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn subrings(&self) -> Vec<Subring<'a>> {
        self.sets
            .iter()
            .map(|s| Subring {
                parent: self.ring,
                members: s.clone(),
            })
            .collect()
    }

    /// Proper subrings not strictly inside another proper subring.
    pub fn maximal(&self) -> Vec<Subring<'a>> {
        let n = self.ring.order();
        let proper: Vec<&ElementSet> = self.sets.iter().filter(|s| s.len() < n).collect();
        proper
            .iter()
            .filter(|s| !proper.iter().any(|t| s.is_proper_subset(t)))
            .map(|s| Subring {
                parent: self.ring,
                members: (*s).clone(),
            })
            .collect()
    }
}

pub fn enumerate_subrings(ring: &FiniteRing) -> Result<Vec<Subring<'_>>, RingError> {
    enumerate_subrings_with_cap(ring, ENUMERATION_CAP)
}

pub fn enumerate_subrings_with_cap(
    ring: &FiniteRing,
    cap: usize,
) -> Result<Vec<Subring<'_>>, RingError> {
    Ok(SubringLattice::compute(ring, cap)?.subrings())
}

pub fn maximal_subrings(ring: &FiniteRing) -> Result<Vec<Subring<'_>>, RingError> {
    maximal_subrings_with_cap(ring, ENUMERATION_CAP)
}

pub fn maximal_subrings_with_cap(
    ring: &FiniteRing,
    cap: usize,
) -> Result<Vec<Subring<'_>>, RingError> {
    Ok(SubringLattice::compute(ring, cap)?.maximal())
}

#[cfg(test)]
mod tests {
    use super::super::build;
    use super::*;

    fn ring(s: &str) -> FiniteRing {
        build(&s.parse().unwrap()).unwrap()
    }

    fn orders(subs: &[Subring<'_>]) -> Vec<usize> {
        subs.iter().map(Subring::order).collect()
    }

    #[test]
    fn field_of_sixteen() {
        let r = ring("GF(2,4)");
        let subs = enumerate_subrings(&r).unwrap();
        assert_eq!(orders(&subs), vec![2, 4, 16]);
        assert_eq!(orders(&maximal_subrings(&r).unwrap()), vec![4]);
    }

    #[test]
    fn f2_times_f2() {
        let r = ring("product(GF(2,1), GF(2,1))");
        let subs = enumerate_subrings(&r).unwrap();
        assert_eq!(orders(&subs), vec![2, 4]);
        let diag = &subs[0];
        for x in diag.elements() {
            let c = r.components(x).unwrap();
            assert_eq!(c[0], c[1]);
        }
        assert_eq!(maximal_subrings(&r).unwrap().len(), 1);
    }

    #[test]
    fn integers_mod_four_has_only_itself() {
        let r = ring("Z/4Z");
        assert_eq!(orders(&enumerate_subrings(&r).unwrap()), vec![4]);
        assert!(maximal_subrings(&r).unwrap().is_empty());
    }

    #[test]
    fn cube_of_f2() {
        let r = ring("product(GF(2,1), GF(2,1), GF(2,1))");
        let subs = enumerate_subrings(&r).unwrap();
        // set partitions of three coordinates
        assert_eq!(subs.len(), 5);
        let max = maximal_subrings(&r).unwrap();
        assert_eq!(orders(&max), vec![4, 4, 4]);
    }

    #[test]
    fn subrings_are_closed_and_meet_closed() {
        for s in [
            "product(GF(2,2), GF(2,1))",
            "dual(GF(3,1))",
            "Z/12Z",
            "dual(GF(2,2))",
        ] {
            let r = ring(s);
            let subs = enumerate_subrings(&r).unwrap();
            let sets: HashSet<&ElementSet> = subs.iter().map(Subring::members).collect();
            for a in &subs {
                a.check_closed().unwrap();
                for b in &subs {
                    let meet = ElementSet::from_iter_in(
                        r.order(),
                        a.members().iter().filter(|&x| b.contains(x)),
                    );
                    assert!(sets.contains(&meet), "{s}: meet missing");
                }
            }
        }
    }

    #[test]
    fn cap_is_enforced() {
        let r = ring("GF(2,9)");
        assert!(enumerate_subrings(&r).is_err());
        assert_eq!(enumerate_subrings_with_cap(&r, 512).unwrap().len(), 3);
    }

    #[test]
    fn to_ring_preserves_structure() {
        let r = ring("GF(2,4)");
        let g = r.galois().unwrap().primitive_element();
        let sub = Subring::generated_by(&r, [r.pow(g, 5)]);
        assert_eq!(sub.order(), 4);
        let t = sub.to_ring();
        t.check_axioms().unwrap();
        assert!(t.is_field());
        assert_eq!(t.characteristic(), 2);
    }
}

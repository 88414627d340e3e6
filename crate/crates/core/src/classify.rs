//! Classifications of maximal subrings, checked against exhaustive
//! enumeration.
//!
//! * `K × K` for a finite field `K`: the maximal subrings are `S × K`,
//!   `K × S` for `S` a maximal subfield of `K`, and the twisted diagonals
//!   `{(x, τ(x))}` for `τ ∈ Aut(K)`.
//! * `K[α]/(α²)`: every maximal subring is `S + Kα` or isomorphic to `K`.
//! * `F_p^n`: all maximal subrings are isomorphic.

use std::collections::BTreeSet;

use serde::Serialize;
use thiserror::Error;

use crate::absfield::{self, AbsField, AbsFieldError};
use crate::finring::{
    self, classify_subrings, find_isomorphism, maximal_subrings_with_cap, FiniteRing, RingError,
    RingSpec, Subring, ENUMERATION_CAP,
};

/// Largest base field accepted by the `K × K` and dual-number checks.
pub const BASE_FIELD_CAP: u64 = 16;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ClassifyError {
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Field(#[from] AbsFieldError),
    #[error("{0}")]
    Cap(String),
    #[error("{0}")]
    BadInput(String),
    #[error("classification mismatch for {}", .0.ring)]
    Mismatch(Box<VerificationReport>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PredictedKind {
    /// `S × K`.
    LeftFactor { subfield_order: u64 },
    /// `K × S`.
    RightFactor { subfield_order: u64 },
    /// `{(x, x^{p^frobenius_power})}`.
    Diagonal { frobenius_power: u32 },
    /// `S + Kα`.
    Coefficient { subfield_order: u64 },
    /// A subring isomorphic to `K`.
    EmbeddedCopyOfK,
    /// `{x ∈ F_p^n : x_i = x_j}`.
    CoordinateDiagonal { i: usize, j: usize },
    /// `Z_(p)` inside `Q`.
    LocalizedIntegers { p: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PredictedMaximalSubring {
    #[serde(flatten)]
    pub kind: PredictedKind,
    /// Sorted element indices in the ambient ring; absent for `Q`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub members: Option<Vec<u16>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessTarget {
    /// Another entry of `found`.
    Found(usize),
    /// The base field `K`, in its own element indices.
    BaseField,
}

/// A verified isomorphism from `found[from]` as `(element, image)` pairs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub from: usize,
    pub to: WitnessTarget,
    pub map: Vec<(u16, u16)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub ring: String,
    pub predicted: Vec<PredictedMaximalSubring>,
    /// Maximal subrings from exhaustive enumeration, as sorted index arrays.
    pub found: Vec<Vec<u16>>,
    /// Classification of each entry of `found`, where it could be assigned.
    pub found_kinds: Vec<Option<PredictedKind>>,
    pub matched: bool,
    pub iso_classes: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected_iso_classes: Option<usize>,
    pub witnesses: Vec<Witness>,
}

impl VerificationReport {
    fn into_result(self) -> Result<Self, ClassifyError> {
        if self.matched {
            Ok(self)
        } else {
            Err(ClassifyError::Mismatch(Box::new(self)))
        }
    }
}

fn base_field(p: u64, n: u32) -> Result<RingSpec, ClassifyError> {
    if !crate::arith::is_prime(p) || n == 0 {
        return Err(ClassifyError::BadInput(format!(
            "GF({p},{n}) is not a field"
        )));
    }
    match p.checked_pow(n) {
        Some(q) if q <= BASE_FIELD_CAP => Ok(RingSpec::Galois { p, n }),
        _ => Err(ClassifyError::Cap(format!(
            "|K| = {p}^{n} exceeds {BASE_FIELD_CAP}"
        ))),
    }
}

/// Degrees of the maximal subfields of `GF(p,n)`, via the Steinitz
/// correspondence.
fn maximal_subfield_degrees(p: u64, n: u32) -> Result<Vec<u32>, ClassifyError> {
    let field = AbsField::finite(p, n as u64)?;
    Ok(absfield::maximal_subrings(&field)?
        .into_iter()
        .map(|d| d.subfield.finite_degree().expect("finite subfield") as u32)
        .collect())
}

/// `{x ∈ K : x^{p^d} = x}`.
fn subfield_elements(k: &FiniteRing, p: u64, d: u32) -> Vec<u16> {
    let q = p.pow(d);
    k.elements().filter(|&x| k.pow(x, q) == x).collect()
}

fn sorted(mut v: Vec<u16>) -> Vec<u16> {
    v.sort_unstable();
    v.dedup();
    v
}

fn subring_sets(subs: &[Subring<'_>]) -> Vec<Vec<u16>> {
    subs.iter().map(Subring::elements).collect()
}

fn witnesses_from_classes(subs: &[Subring<'_>]) -> Result<(usize, Vec<Witness>), ClassifyError> {
    let classes = classify_subrings(subs)?;
    let mut out = Vec::new();
    for class in &classes {
        for (member, pairs) in &class.witnesses {
            out.push(Witness {
                from: *member,
                to: WitnessTarget::Found(class.representative),
                map: pairs.clone(),
            });
        }
    }
    Ok((classes.len(), out))
}

/// Witness `sub → K`, with `sub`'s elements in parent indices.
fn witness_to_base(
    sub: &Subring<'_>,
    k: &FiniteRing,
    index: usize,
) -> Result<Option<Witness>, ClassifyError> {
    let els = sub.elements();
    Ok(find_isomorphism(&sub.to_ring(), k)?.map(|map| Witness {
        from: index,
        to: WitnessTarget::BaseField,
        map: map.iter().enumerate().map(|(i, &y)| (els[i], y)).collect(),
    }))
}

/// The predicted maximal subrings of `K × K` for `K = GF(p,n)`, with members in
/// the indices of `product(GF(p,n), GF(p,n))`.
pub fn predict_kxk(p: u64, n: u32) -> Result<Vec<PredictedMaximalSubring>, ClassifyError> {
    let spec = base_field(p, n)?;
    let kk = finring::build(&RingSpec::Product(vec![spec.clone(), spec]))?;
    let k = &kk.factors().expect("product")[0];
    let all: Vec<u16> = k.elements().collect();
    let pair = |a: u16, b: u16| kk.from_components(&[a, b]).expect("two components");
    let mut out = Vec::new();
    for d in maximal_subfield_degrees(p, n)? {
        let s = subfield_elements(k, p, d);
        let order = p.pow(d);
        let left = s.iter().flat_map(|&a| all.iter().map(move |&b| (a, b)));
        out.push(PredictedMaximalSubring {
            kind: PredictedKind::LeftFactor {
                subfield_order: order,
            },
            members: Some(sorted(left.map(|(a, b)| pair(a, b)).collect())),
        });
        let right = all.iter().flat_map(|&a| s.iter().map(move |&b| (a, b)));
        out.push(PredictedMaximalSubring {
            kind: PredictedKind::RightFactor {
                subfield_order: order,
            },
            members: Some(sorted(right.map(|(a, b)| pair(a, b)).collect())),
        });
    }
    let galois = k.galois().expect("base is a Galois field");
    for t in 0..n {
        let diag = all.iter().map(|&x| pair(x, galois.frobenius(x, t)));
        out.push(PredictedMaximalSubring {
            kind: PredictedKind::Diagonal { frobenius_power: t },
            members: Some(sorted(diag.collect())),
        });
    }
    Ok(out)
}

/// Checks [`predict_kxk`] against enumeration: set-exact equality, each
/// diagonal isomorphic to `K`, and `#classes = #maximal subfields + 1`.
pub fn verify_kxk(p: u64, n: u32) -> Result<VerificationReport, ClassifyError> {
    verify_kxk_with_cap(p, n, ENUMERATION_CAP)
}

pub fn verify_kxk_with_cap(
    p: u64,
    n: u32,
    cap: usize,
) -> Result<VerificationReport, ClassifyError> {
    let spec = base_field(p, n)?;
    let predicted = predict_kxk(p, n)?;
    let kk = finring::build(&RingSpec::Product(vec![spec.clone(), spec.clone()]))?;
    let k = finring::build(&spec)?;
    let max = maximal_subrings_with_cap(&kk, cap)?;
    let found = subring_sets(&max);

    let found_kinds: Vec<Option<PredictedKind>> = found
        .iter()
        .map(|f| {
            predicted
                .iter()
                .find(|pr| pr.members.as_ref() == Some(f))
                .map(|pr| pr.kind.clone())
        })
        .collect();
    let predicted_sets: BTreeSet<&Vec<u16>> = predicted
        .iter()
        .filter_map(|pr| pr.members.as_ref())
        .collect();
    let found_sets: BTreeSet<&Vec<u16>> = found.iter().collect();
    let mut matched = predicted_sets == found_sets && predicted_sets.len() == predicted.len();

    let (iso_classes, mut witnesses) = witnesses_from_classes(&max)?;
    for (i, sub) in max.iter().enumerate() {
        if matches!(found_kinds[i], Some(PredictedKind::Diagonal { .. })) {
            match witness_to_base(sub, &k, i)? {
                Some(w) => witnesses.push(w),
                None => matched = false,
            }
        }
    }
    let expected = maximal_subfield_degrees(p, n)?.len() + 1;
    matched &= iso_classes == expected;
    VerificationReport {
        ring: kk.label().to_string(),
        predicted,
        found,
        found_kinds,
        matched,
        iso_classes,
        expected_iso_classes: Some(expected),
        witnesses,
    }
    .into_result()
}

/// Checks that every maximal subring of `K[α]/(α²)` is `S + Kα` for a maximal
/// subfield `S`, or isomorphic to `K`, and that every `S + Kα` occurs.
pub fn verify_dual_numbers(p: u64, n: u32) -> Result<VerificationReport, ClassifyError> {
    let spec = base_field(p, n)?;
    let ring = finring::build(&RingSpec::Dual(Box::new(spec.clone())))?;
    let k = finring::build(&spec)?;
    let base = ring.dual_base().expect("dual ring");
    let mut predicted = Vec::new();
    for d in maximal_subfield_degrees(p, n)? {
        let s = subfield_elements(base, p, d);
        let members = s
            .iter()
            .flat_map(|&a| base.elements().map(move |b| (a, b)))
            .map(|(a, b)| ring.dual_element(a, b).expect("dual ring"));
        predicted.push(PredictedMaximalSubring {
            kind: PredictedKind::Coefficient {
                subfield_order: p.pow(d),
            },
            members: Some(sorted(members.collect())),
        });
    }
    let max = maximal_subrings_with_cap(&ring, ENUMERATION_CAP)?;
    let found = subring_sets(&max);
    let (iso_classes, mut witnesses) = witnesses_from_classes(&max)?;
    let mut matched = predicted
        .iter()
        .all(|pr| found.iter().any(|f| Some(f) == pr.members.as_ref()));
    let mut found_kinds = Vec::new();
    for (i, (sub, set)) in max.iter().zip(&found).enumerate() {
        if let Some(pr) = predicted.iter().find(|pr| pr.members.as_ref() == Some(set)) {
            found_kinds.push(Some(pr.kind.clone()));
        } else if let Some(w) = witness_to_base(sub, &k, i)? {
            witnesses.push(w);
            found_kinds.push(Some(PredictedKind::EmbeddedCopyOfK));
        } else {
            found_kinds.push(None);
            matched = false;
        }
    }
    VerificationReport {
        ring: ring.label().to_string(),
        predicted,
        found,
        found_kinds,
        matched,
        iso_classes,
        expected_iso_classes: None,
        witnesses,
    }
    .into_result()
}

/// Checks that the maximal subrings of `F_p^n` are exactly the coordinate
/// diagonals `x_i = x_j` and form one isomorphism class.
pub fn verify_product_field(p: u64, n: usize) -> Result<VerificationReport, ClassifyError> {
    if !crate::arith::is_prime(p) {
        return Err(ClassifyError::BadInput(format!("{p} is not prime")));
    }
    if n < 2 {
        return Err(ClassifyError::BadInput("need at least two factors".into()));
    }
    let spec = RingSpec::power_of_prime_field(p, n);
    if spec.order() > ENUMERATION_CAP as u128 {
        return Err(ClassifyError::Cap(format!(
            "{p}^{n} exceeds {ENUMERATION_CAP}"
        )));
    }
    let ring = finring::build(&spec)?;
    let mut predicted = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let members = ring.elements().filter(|&x| {
                let c = ring.components(x).expect("product");
                c[i] == c[j]
            });
            predicted.push(PredictedMaximalSubring {
                kind: PredictedKind::CoordinateDiagonal { i, j },
                members: Some(members.collect()),
            });
        }
    }
    let max = maximal_subrings_with_cap(&ring, ENUMERATION_CAP)?;
    let found = subring_sets(&max);
    let found_kinds: Vec<Option<PredictedKind>> = found
        .iter()
        .map(|f| {
            predicted
                .iter()
                .find(|pr| pr.members.as_ref() == Some(f))
                .map(|pr| pr.kind.clone())
        })
        .collect();
    let (iso_classes, witnesses) = witnesses_from_classes(&max)?;
    let matched = iso_classes == 1
        && found.len() == predicted.len()
        && found_kinds.iter().all(Option::is_some);
    VerificationReport {
        ring: ring.label().to_string(),
        predicted,
        found,
        found_kinds,
        matched,
        iso_classes,
        expected_iso_classes: Some(1),
        witnesses,
    }
    .into_result()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kinds(preds: &[PredictedMaximalSubring]) -> Vec<PredictedKind> {
        preds.iter().map(|p| p.kind.clone()).collect()
    }

    #[test]
    fn kxk_predictions() {
        assert_eq!(
            kinds(&predict_kxk(2, 1).unwrap()),
            vec![PredictedKind::Diagonal { frobenius_power: 0 }]
        );
        assert_eq!(predict_kxk(3, 1).unwrap().len(), 1);
        let f4 = predict_kxk(2, 2).unwrap();
        assert_eq!(
            kinds(&f4),
            vec![
                PredictedKind::LeftFactor { subfield_order: 2 },
                PredictedKind::RightFactor { subfield_order: 2 },
                PredictedKind::Diagonal { frobenius_power: 0 },
                PredictedKind::Diagonal { frobenius_power: 1 },
            ]
        );
        for p in &f4 {
            let m = p.members.as_ref().unwrap();
            assert_eq!(
                m.len(),
                if matches!(p.kind, PredictedKind::Diagonal { .. }) {
                    4
                } else {
                    8
                }
            );
        }
        assert!(predict_kxk(2, 5).is_err());
        assert!(predict_kxk(4, 1).is_err());
    }

    #[test]
    fn kxk_verifies() {
        let r = verify_kxk(2, 2).unwrap();
        assert!(r.matched);
        assert_eq!(r.iso_classes, 2);
        assert_eq!(r.found.len(), 4);
        let diag_witnesses = r
            .witnesses
            .iter()
            .filter(|w| w.to == WitnessTarget::BaseField)
            .count();
        assert_eq!(diag_witnesses, 2);

        let r = verify_kxk(2, 1).unwrap();
        assert_eq!((r.found.len(), r.iso_classes), (1, 1));
        let r = verify_kxk(3, 1).unwrap();
        assert_eq!((r.found.len(), r.iso_classes), (1, 1));
    }

    #[test]
    fn dual_numbers_verify() {
        // F_2[α]: only F_2 ⊂ F_2[α] itself, which is the embedded copy of K
        let r = verify_dual_numbers(2, 1).unwrap();
        assert_eq!(r.found, vec![vec![0, 1]]);
        assert_eq!(r.found_kinds, vec![Some(PredictedKind::EmbeddedCopyOfK)]);

        let r = verify_dual_numbers(2, 2).unwrap();
        assert!(r.matched);
        assert_eq!(r.predicted.len(), 1);
        assert!(r
            .found_kinds
            .contains(&Some(PredictedKind::Coefficient { subfield_order: 2 })));
        assert!(r
            .found_kinds
            .contains(&Some(PredictedKind::EmbeddedCopyOfK)));

        assert!(verify_dual_numbers(3, 1).unwrap().matched);
    }

    #[test]
    fn product_fields_verify() {
        let r = verify_product_field(2, 3).unwrap();
        assert_eq!((r.found.len(), r.iso_classes), (3, 1));
        let r = verify_product_field(2, 2).unwrap();
        assert_eq!((r.found.len(), r.iso_classes), (1, 1));
        let r = verify_product_field(3, 2).unwrap();
        assert_eq!(r.iso_classes, 1);
        assert!(verify_product_field(2, 1).is_err());
        assert!(verify_product_field(2, 9).is_err());
    }

    #[test]
    fn report_json_shape() {
        let r = verify_kxk(2, 1).unwrap();
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v["matched"], true);
        assert_eq!(v["iso_classes"], 1);
        assert_eq!(v["predicted"][0]["kind"], "diagonal");
        assert_eq!(v["predicted"][0]["frobenius_power"], 0);
    }
}

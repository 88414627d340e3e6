//! Places of the rational function field `K(x)`.
//!
//! A finite place is a monic irreducible `f ∈ K[x]` (valuation ring
//! `K[x]_(f)`, residue field `K[x]/(f)`); the infinite place has valuation ring
//! `K[1/x]_(1/x)` and residue field `K`. Over an infinite absolutely algebraic
//! `K` places are symbolic and carry only their residue degree.
//!
//! Place literals: `place(x^2+x+1)`, `place(inf)`, `place(deg=3)`.
//! Polynomial coefficients are element indices of `GF(p,n)`.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::absfield::{self, AbsField, AbsFieldError};
use crate::finring::GaloisField;
use crate::poly::{monic_irreducibles, FieldOps, Poly};
use crate::steinitz::SteinitzNumber;

/// Largest `|K|^d` for explicit place enumeration.
pub const PLACE_CAP: u64 = 1 << 16;
/// Largest `|K|` for Möbius orbit computations.
pub const ORBIT_FIELD_CAP: u64 = 9;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FuncFieldError {
    #[error(transparent)]
    Field(#[from] AbsFieldError),
    #[error("{0}")]
    Cap(String),
    #[error("{0} is infinite; explicit places need a finite base")]
    InfiniteBase(String),
    #[error("{0} is algebraically closed")]
    AlgebraicallyClosedBase(String),
    #[error("places over different bases {0} and {1}")]
    DifferentBases(String, String),
    #[error("bad place {input:?}: {reason}")]
    BadPlace { input: String, reason: String },
}

/// A finite field `GF(p,n)` together with its arithmetic.
#[derive(Debug, Clone)]
pub struct FiniteBase {
    abs: AbsField,
    field: GaloisField,
}

impl FiniteBase {
    pub fn new(p: u64, n: u32) -> Result<Self, FuncFieldError> {
        Self::from_abs(&AbsField::finite(p, n as u64)?)
    }

    pub fn from_abs(abs: &AbsField) -> Result<Self, FuncFieldError> {
        let q = abs
            .order()
            .ok_or_else(|| FuncFieldError::InfiniteBase(abs.to_string()))?;
        if q >= PLACE_CAP {
            return Err(FuncFieldError::Cap(format!(
                "|K| = {q} exceeds {PLACE_CAP}"
            )));
        }
        let n = abs.finite_degree().expect("finite field") as u32;
        Ok(Self {
            abs: abs.clone(),
            field: GaloisField::new(abs.characteristic() as u16, n),
        })
    }

    pub fn abs(&self) -> &AbsField {
        &self.abs
    }

    pub fn field(&self) -> &GaloisField {
        &self.field
    }

    pub fn size(&self) -> u64 {
        self.field.size() as u64
    }

    /// Parses a place literal over this base.
    pub fn parse_place(&self, text: &str) -> Result<Place, FuncFieldError> {
        let bad = |reason: &str| FuncFieldError::BadPlace {
            input: text.to_string(),
            reason: reason.to_string(),
        };
        let inner = text
            .trim()
            .strip_prefix("place(")
            .and_then(|s| s.strip_suffix(')'))
            .ok_or_else(|| bad("expected place(...)"))?
            .trim();
        if inner == "inf" {
            return Ok(Place::infinite(&self.abs));
        }
        if let Some(d) = inner.strip_prefix("deg=") {
            let d = d.trim().parse().map_err(|_| bad("bad degree"))?;
            return Place::symbolic(&self.abs, d);
        }
        let f = Poly::parse(inner, 'x', &self.field).map_err(|e| bad(&e))?;
        Place::finite(self, f)
    }
}

/// Parses a place literal over any base; polynomial places need a finite one.
pub fn parse_place(base: &AbsField, text: &str) -> Result<Place, FuncFieldError> {
    if base.order().is_some() {
        return FiniteBase::from_abs(base)?.parse_place(text);
    }
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    match compact.as_str() {
        "place(inf)" => Ok(Place::infinite(base)),
        _ => match compact
            .strip_prefix("place(deg=")
            .and_then(|s| s.strip_suffix(')'))
        {
            Some(d) => Place::symbolic(
                base,
                d.parse().map_err(|_| FuncFieldError::BadPlace {
                    input: text.to_string(),
                    reason: "bad degree".into(),
                })?,
            ),
            None => Err(FuncFieldError::InfiniteBase(base.to_string())),
        },
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PlaceKind {
    /// A monic irreducible polynomial.
    Finite(Poly),
    Infinite,
    /// A place of the given residue degree, known only symbolically.
    Symbolic {
        degree: u64,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Place {
    base: AbsField,
    kind: PlaceKind,
}

impl Place {
    /// Checks that `f` is monic and irreducible over the base.
    pub fn finite(base: &FiniteBase, f: Poly) -> Result<Self, FuncFieldError> {
        let bad = |reason: &str| FuncFieldError::BadPlace {
            input: f.to_string(),
            reason: reason.to_string(),
        };
        if !f.is_monic() || f.degree().unwrap_or(0) == 0 {
            return Err(bad("not a monic polynomial of positive degree"));
        }
        if !f.is_irreducible(&base.field) {
            return Err(bad(&format!("reducible over {}", base.abs)));
        }
        Ok(Self {
            base: base.abs.clone(),
            kind: PlaceKind::Finite(f),
        })
    }

    pub fn infinite(base: &AbsField) -> Self {
        Self {
            base: base.clone(),
            kind: PlaceKind::Infinite,
        }
    }

    pub fn symbolic(base: &AbsField, degree: u64) -> Result<Self, FuncFieldError> {
        if degree == 0 {
            return Err(FuncFieldError::Field(AbsFieldError::ZeroDegree));
        }
        Ok(Self {
            base: base.clone(),
            kind: PlaceKind::Symbolic { degree },
        })
    }

    pub fn base(&self) -> &AbsField {
        &self.base
    }

    pub fn kind(&self) -> &PlaceKind {
        &self.kind
    }

    pub fn residue_degree(&self) -> u64 {
        match &self.kind {
            PlaceKind::Finite(f) => f.degree().expect("nonzero") as u64,
            PlaceKind::Infinite => 1,
            PlaceKind::Symbolic { degree } => *degree,
        }
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            PlaceKind::Finite(p) => write!(f, "place({p})"),
            PlaceKind::Infinite => f.write_str("place(inf)"),
            PlaceKind::Symbolic { degree } => write!(f, "place(deg={degree})"),
        }
    }
}

impl Serialize for Place {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// All places of residue degree `d`: the monic irreducibles of degree `d`, and
/// the infinite place when `d = 1`.
pub fn places_of_degree(base: &FiniteBase, d: u32) -> Result<Vec<Place>, FuncFieldError> {
    match base.size().checked_pow(d) {
        Some(v) if v <= PLACE_CAP && d >= 1 => {}
        _ if d == 0 => return Err(FuncFieldError::Field(AbsFieldError::ZeroDegree)),
        _ => {
            return Err(FuncFieldError::Cap(format!(
                "{}^{d} exceeds {PLACE_CAP}",
                base.size()
            )))
        }
    }
    let mut out: Vec<Place> = monic_irreducibles(&base.field, d as usize)
        .into_iter()
        .map(|f| Place {
            base: base.abs.clone(),
            kind: PlaceKind::Finite(f),
        })
        .collect();
    if d == 1 {
        out.push(Place::infinite(&base.abs));
    }
    Ok(out)
}

/// The residue field of `pl`, with Steinitz number `st(K) · deg`.
pub fn residue_steinitz(pl: &Place) -> AbsField {
    let st = pl
        .base
        .st()
        .mul(&SteinitzNumber::from_natural(pl.residue_degree()));
    AbsField::new(pl.base.characteristic(), st).expect("characteristic already validated")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Discrimination {
    NotIsomorphic { reason: String },
    Inconclusive,
}

/// Distinguishes the valuation rings of two places by their residue fields.
/// Isomorphic valuation rings have isomorphic residue fields, and subfields
/// of `F̄_p` are isomorphic only when equal.
pub fn discriminate_places(a: &Place, b: &Place) -> Result<Discrimination, FuncFieldError> {
    if a.base != b.base {
        return Err(FuncFieldError::DifferentBases(
            a.base.to_string(),
            b.base.to_string(),
        ));
    }
    let (ra, rb) = (residue_steinitz(a), residue_steinitz(b));
    Ok(if ra == rb {
        Discrimination::Inconclusive
    } else {
        Discrimination::NotIsomorphic {
            reason: format!("residue fields {ra} and {rb} differ"),
        }
    })
}

/// Symbolic places of degrees `ℓ, ℓ², ℓ³, …` where `ℓ` is the least prime with
/// finite exponent in `st(K)`; their residue fields are pairwise distinct.
/// The stream ends once `ℓ^k` leaves `u64`.
pub fn infinitely_many_classes_witness(
    k: &AbsField,
) -> Result<impl Iterator<Item = Place>, FuncFieldError> {
    if absfield::is_algebraically_closed(k) {
        return Err(FuncFieldError::AlgebraicallyClosedBase(k.to_string()));
    }
    let ell = k
        .st()
        .least_finite_prime()
        .expect("not algebraically closed");
    let base = k.clone();
    Ok(
        std::iter::successors(Some(ell), move |&d| d.checked_mul(ell))
            .map(move |d| Place::symbolic(&base, d).expect("positive degree")),
    )
}

/// The automorphism `x ↦ (ax + b)/(cx + d)` of `K(x)`, up to scalars.
/// Normalized so the first nonzero entry of `(a, b, c, d)` is 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct MobiusMap {
    pub a: u16,
    pub b: u16,
    pub c: u16,
    pub d: u16,
}

impl MobiusMap {
    pub fn new(k: &GaloisField, a: u16, b: u16, c: u16, d: u16) -> Option<Self> {
        if k.sub(k.mul(a, d), k.mul(b, c)) == 0 {
            return None;
        }
        let lead = [a, b, c, d]
            .into_iter()
            .find(|&e| e != 0)
            .expect("invertible");
        let s = k.inv(lead);
        Some(Self {
            a: k.mul(a, s),
            b: k.mul(b, s),
            c: k.mul(c, s),
            d: k.mul(d, s),
        })
    }

    pub fn identity() -> Self {
        Self {
            a: 1,
            b: 0,
            c: 0,
            d: 1,
        }
    }

    /// `self ∘ other`, the matrix product.
    pub fn compose(&self, other: &Self, k: &GaloisField) -> Self {
        let m = |x: u16, y: u16, z: u16, w: u16| k.add(k.mul(x, y), k.mul(z, w));
        Self::new(
            k,
            m(self.a, other.a, self.b, other.c),
            m(self.a, other.b, self.b, other.d),
            m(self.c, other.a, self.d, other.c),
            m(self.c, other.b, self.d, other.d),
        )
        .expect("product of invertible matrices")
    }

    /// All of `PGL_2(K)`, of order `q(q² − 1)`.
    pub fn all(k: &GaloisField) -> Vec<Self> {
        let q = k.size() as u16;
        let mut set = BTreeSet::new();
        for a in 0..q {
            for b in 0..q {
                for c in 0..q {
                    for d in 0..q {
                        if let Some(m) = Self::new(k, a, b, c, d) {
                            set.insert(m);
                        }
                    }
                }
            }
        }
        set.into_iter().collect()
    }

    /// The image of a place: roots `θ` go to `(aθ + b)/(cθ + d)`.
    pub fn act(&self, base: &FiniteBase, pl: &Place) -> Place {
        let k = &base.field;
        let (a, b, c, d) = (self.a, self.b, self.c, self.d);
        match &pl.kind {
            PlaceKind::Symbolic { .. } => pl.clone(),
            PlaceKind::Infinite => {
                if c == 0 {
                    pl.clone()
                } else {
                    // ∞ ↦ a/c, the place x − a/c
                    let t = k.mul(a, k.inv(c));
                    Place {
                        base: pl.base.clone(),
                        kind: PlaceKind::Finite(Poly::new(vec![k.neg(t), 1])),
                    }
                }
            }
            PlaceKind::Finite(f) => {
                // g(y) = Σ f_i (dy − b)^i (−cy + a)^{deg − i}
                let deg = f.degree().expect("nonzero");
                let num = Poly::new(vec![k.neg(b), d]);
                let den = Poly::new(vec![a, k.neg(c)]);
                let mut g = Poly::zero();
                for (i, &fi) in f.coeffs().iter().enumerate() {
                    if fi == 0 {
                        continue;
                    }
                    let term = num
                        .pow(i as u64, k)
                        .mul(&den.pow((deg - i) as u64, k), k)
                        .scale(fi, k);
                    g = g.add(&term, k);
                }
                if g.degree() == Some(deg) {
                    Place {
                        base: pl.base.clone(),
                        kind: PlaceKind::Finite(g.monic(k)),
                    }
                } else {
                    Place::infinite(&pl.base)
                }
            }
        }
    }
}

fn orbit_base_check(base: &FiniteBase) -> Result<(), FuncFieldError> {
    if base.size() > ORBIT_FIELD_CAP {
        return Err(FuncFieldError::Cap(format!(
            "|K| = {} exceeds {ORBIT_FIELD_CAP}",
            base.size()
        )));
    }
    Ok(())
}

fn sort_places(places: &mut [Place]) {
    places.sort_by(|x, y| x.kind.cmp(&y.kind));
}

/// The orbit of `pl` under `PGL_2(K)`, sorted.
pub fn mobius_orbit(base: &FiniteBase, pl: &Place) -> Result<Vec<Place>, FuncFieldError> {
    orbit_base_check(base)?;
    let maps = MobiusMap::all(&base.field);
    let set: BTreeSet<PlaceKind> = maps.iter().map(|m| m.act(base, pl).kind).collect();
    let mut out: Vec<Place> = set
        .into_iter()
        .map(|kind| Place {
            base: pl.base.clone(),
            kind,
        })
        .collect();
    sort_places(&mut out);
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrbitReport {
    pub base: String,
    pub degree: u32,
    pub class_size: usize,
    pub orbits: Vec<Vec<Place>>,
    /// Every orbit lies inside one residue-degree class.
    pub orbits_refine_degree_classes: bool,
    /// The degree class is a single orbit.
    pub single_orbit: bool,
}

/// Orbits of the degree-`d` places under `PGL_2(K)`, compared with the
/// residue-degree class.
pub fn check_orbit_vs_iso(base: &FiniteBase, d: u32) -> Result<OrbitReport, FuncFieldError> {
    orbit_base_check(base)?;
    let class = places_of_degree(base, d)?;
    let mut remaining: BTreeSet<PlaceKind> = class.iter().map(|p| p.kind.clone()).collect();
    let mut orbits = Vec::new();
    let mut refine = true;
    for pl in &class {
        if !remaining.contains(&pl.kind) {
            continue;
        }
        let orbit = mobius_orbit(base, pl)?;
        for o in &orbit {
            refine &= o.residue_degree() == d as u64;
            remaining.remove(&o.kind);
        }
        orbits.push(orbit);
    }
    Ok(OrbitReport {
        base: base.abs.to_string(),
        degree: d,
        class_size: class.len(),
        single_orbit: orbits.len() == 1,
        orbits,
        orbits_refine_degree_classes: refine,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GroupActionReport {
    pub base: String,
    pub group_order: usize,
    /// `group_order = q(q² − 1)`.
    pub group_order_is_pgl2: bool,
    pub max_degree: u32,
    pub places_checked: usize,
    pub identity_fixes_all: bool,
    pub compatible_with_composition: bool,
    pub preserves_residue_degree: bool,
    pub degree_one_single_orbit: bool,
}

impl GroupActionReport {
    pub fn passed(&self) -> bool {
        self.group_order_is_pgl2
            && self.identity_fixes_all
            && self.compatible_with_composition
            && self.preserves_residue_degree
            && self.degree_one_single_orbit
    }
}

/// Exhaustively checks the action axioms of `PGL_2(K)` on places of degree at
/// most `max_degree`, over all pairs of maps.
pub fn verify_group_action(
    base: &FiniteBase,
    max_degree: u32,
) -> Result<GroupActionReport, FuncFieldError> {
    orbit_base_check(base)?;
    let k = &base.field;
    let maps = MobiusMap::all(k);
    let mut places = Vec::new();
    for d in 1..=max_degree {
        places.extend(places_of_degree(base, d)?);
    }
    let id = MobiusMap::identity();
    let identity_fixes_all = places.iter().all(|p| &id.act(base, p) == p);
    let mut compatible = true;
    let mut preserves = true;
    for p in &places {
        let images: Vec<Place> = maps.iter().map(|m| m.act(base, p)).collect();
        preserves &= images
            .iter()
            .all(|i| i.residue_degree() == p.residue_degree());
        for s in &maps {
            for (t, tp) in maps.iter().zip(&images) {
                compatible &= s.compose(t, k).act(base, p) == s.act(base, tp);
            }
        }
    }
    let q = base.size() as usize;
    let degree_one = check_orbit_vs_iso(base, 1)?;
    let degree_one_single_orbit = degree_one.single_orbit && degree_one.orbits[0].len() == q + 1;
    Ok(GroupActionReport {
        base: base.abs.to_string(),
        group_order: maps.len(),
        group_order_is_pgl2: maps.len() == q * (q * q - 1),
        max_degree,
        places_checked: places.len(),
        identity_fixes_all,
        compatible_with_composition: compatible,
        preserves_residue_degree: preserves,
        degree_one_single_orbit,
    })
}

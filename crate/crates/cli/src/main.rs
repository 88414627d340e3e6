mod output;

use std::io;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use maxsub::absfield::{self, parse_field, AbsField};
use maxsub::classify::{self, ClassifyError};
use maxsub::finring::{self, FiniteRing, IsoFingerprint, RingSpec, Subring};
use maxsub::funcfield::{self, FiniteBase};
use maxsub::rationals;
use maxsub::SteinitzNumber;
use serde_json::{json, Value};

use output::{Format, Output};

#[derive(Parser)]
#[command(
    name = "maxsub",
    version,
    about = "Maximal subrings of absolutely algebraic fields and finite rings"
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,
    /// Largest ring order for exhaustive subring enumeration.
    #[arg(long, global = true, default_value_t = finring::ENUMERATION_CAP)]
    max_order: usize,
    /// Largest number of items to materialize or stream.
    #[arg(long, global = true, default_value_t = 1000)]
    limit: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Steinitz number arithmetic.
    St {
        #[command(subcommand)]
        op: StOp,
    },
    /// Absolutely algebraic fields GF(q^N).
    Field {
        #[command(subcommand)]
        op: FieldOp,
    },
    /// Finite rings given by a spec such as "product(GF(2,2), Z/4Z)".
    Ring {
        #[command(subcommand)]
        op: RingOp,
    },
    /// Places of K(x).
    Place {
        #[command(subcommand)]
        op: PlaceOp,
    },
    /// Classification checks against exhaustive enumeration.
    Verify {
        #[command(subcommand)]
        op: VerifyOp,
    },
}

#[derive(Subcommand)]
enum StOp {
    Mul {
        a: String,
        b: String,
    },
    /// Quotient a / b.
    Div {
        a: String,
        b: String,
    },
    Meet {
        a: String,
        b: String,
    },
    Join {
        a: String,
        b: String,
    },
    /// Whether a divides b.
    Divides {
        a: String,
        b: String,
    },
    Stable {
        a: String,
    },
    Finite {
        a: String,
    },
    /// The value as a natural number, if it is one.
    Nat {
        a: String,
    },
}

#[derive(Subcommand)]
enum FieldOp {
    /// Whether SUB is a subfield of SUP.
    Subfield {
        sub: String,
        sup: String,
    },
    /// The degree [SUP : SUB].
    Degree {
        sub: String,
        sup: String,
    },
    Maximal {
        field: String,
    },
    /// Number of maximal subrings up to isomorphism.
    Count {
        field: String,
    },
    /// The largest subfield without maximal subrings.
    Core {
        field: String,
    },
    Chainlen {
        field: String,
    },
    /// Maximal chains of subfields, one per line.
    Chains {
        field: String,
    },
    /// Whether an irreducible polynomial of degree M exists.
    Irr {
        field: String,
        m: u64,
    },
    /// The extension of degree M.
    Adjoin {
        field: String,
        m: u64,
    },
    Closed {
        field: String,
    },
}

#[derive(Subcommand)]
enum RingOp {
    Build {
        spec: String,
    },
    Subrings {
        spec: String,
    },
    Maximal {
        spec: String,
    },
    /// Isomorphism classes of the maximal subrings.
    Classify {
        spec: String,
    },
    Iso {
        spec: String,
        spec2: String,
    },
}

#[derive(Subcommand)]
enum PlaceOp {
    /// Places of residue degree D.
    List {
        field: String,
        d: u32,
    },
    Residue {
        field: String,
        place: String,
    },
    Discriminate {
        field: String,
        a: String,
        b: String,
    },
    /// Orbit under x -> (ax+b)/(cx+d).
    Orbit {
        field: String,
        place: String,
    },
    /// Pairwise non-isomorphic places of growing degree.
    Witness {
        field: String,
        #[arg(long, default_value_t = 10)]
        count: usize,
    },
}

#[derive(Subcommand)]
enum VerifyOp {
    /// Maximal subrings of K x K.
    Kxk { field: String },
    /// Maximal subrings of K[x]/(x^2).
    Dual { field: String },
    /// Maximal subrings of the N-fold product of F_P.
    Product { p: u64, n: usize },
    /// Mobius action on places of degree at most DEGREE.
    Places {
        field: String,
        #[arg(long, default_value_t = 2)]
        degree: u32,
    },
    /// Localizations Z_(p) of Q.
    Rationals {
        #[arg(long, default_value_t = 20)]
        primes: usize,
        #[arg(long, default_value_t = 1000)]
        pairs: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

enum Failure {
    Domain(String),
    Mismatch(Value),
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Domain(e.to_string())
    }
}

type Run = Result<Output, Failure>;

fn st(text: &str) -> Result<SteinitzNumber, Failure> {
    Ok(text.parse::<SteinitzNumber>()?)
}

fn result(v: impl serde::Serialize) -> Output {
    Output::Single(json!({ "result": v }))
}

fn run_st(op: StOp) -> Run {
    Ok(match op {
        StOp::Mul { a, b } => result(st(&a)?.mul(&st(&b)?)),
        StOp::Div { a, b } => result(st(&a)?.quotient(&st(&b)?)?),
        StOp::Meet { a, b } => result(st(&a)?.meet(&st(&b)?)),
        StOp::Join { a, b } => result(st(&a)?.join(&st(&b)?)),
        StOp::Divides { a, b } => result(st(&a)?.divides(&st(&b)?)),
        StOp::Stable { a } => result(st(&a)?.stable_part()),
        StOp::Finite { a } => result(st(&a)?.finite_part()),
        StOp::Nat { a } => {
            let n = st(&a)?.as_natural()?;
            Output::Single(json!({
                "natural": n.is_some(),
                "result": n.map(|v| v.to_string()),
            }))
        }
    })
}

fn field(text: &str) -> Result<AbsField, Failure> {
    Ok(parse_field(text)?)
}

fn run_field(op: FieldOp, limit: usize) -> Run {
    Ok(match op {
        FieldOp::Subfield { sub, sup } => {
            result(absfield::is_subfield(&field(&sub)?, &field(&sup)?))
        }
        FieldOp::Degree { sub, sup } => {
            result(absfield::extension_degree(&field(&sub)?, &field(&sup)?)?)
        }
        FieldOp::Maximal { field: f } => {
            let e = field(&f)?;
            let finite = absfield::has_finitely_many_maximal_subrings(&e);
            let subs: Vec<_> = absfield::maximal_subrings_iter(&e).take(limit).collect();
            let primes: Vec<u64> = subs.iter().map(|d| d.prime).collect();
            Output::Single(json!({
                "field": e,
                "finitely_many": finite,
                "truncated": !finite,
                "primes": primes,
                "maximal_subrings": subs,
            }))
        }
        FieldOp::Count { field: f } => {
            result(absfield::count_maximal_subrings_up_to_iso(&field(&f)?))
        }
        FieldOp::Core { field: f } => result(absfield::no_maximal_subring_core(&field(&f)?)?),
        FieldOp::Chainlen { field: f } => result(absfield::chain_length(&field(&f)?)?),
        FieldOp::Chains { field: f } => {
            let chains = absfield::enumerate_chains(&field(&f)?, limit)?;
            Output::Stream(chains.into_iter().map(|c| json!({ "chain": c })).collect())
        }
        FieldOp::Irr { field: f, m } => {
            result(absfield::irreducible_degree_exists(&field(&f)?, m)?)
        }
        FieldOp::Adjoin { field: f, m } => result(absfield::adjoin_degree(&field(&f)?, m)?),
        FieldOp::Closed { field: f } => result(absfield::is_algebraically_closed(&field(&f)?)),
    })
}

fn build(spec: &str, max_order: usize) -> Result<FiniteRing, Failure> {
    let spec: RingSpec = spec.parse()?;
    Ok(finring::build_with_cap(
        &spec,
        max_order.max(finring::CONSTRUCTION_CAP),
    )?)
}

fn subring_rows(subs: &[Subring<'_>]) -> Vec<Value> {
    subs.iter()
        .enumerate()
        .map(|(id, s)| json!({ "id": id, "order": s.order(), "elements": s.elements() }))
        .collect()
}

fn run_ring(op: RingOp, max_order: usize) -> Run {
    Ok(match op {
        RingOp::Build { spec } => {
            let r = build(&spec, max_order)?;
            let fingerprint = (r.order() <= max_order).then(|| IsoFingerprint::of(&r));
            Output::Single(json!({
                "spec": r.label(),
                "order": r.order(),
                "characteristic": r.characteristic(),
                "is_field": r.is_field(),
                "fingerprint": fingerprint,
            }))
        }
        RingOp::Subrings { spec } => {
            let r = build(&spec, max_order)?;
            Output::Stream(subring_rows(&finring::enumerate_subrings_with_cap(
                &r, max_order,
            )?))
        }
        RingOp::Maximal { spec } => {
            let r = build(&spec, max_order)?;
            Output::Stream(subring_rows(&finring::maximal_subrings_with_cap(
                &r, max_order,
            )?))
        }
        RingOp::Classify { spec } => {
            let r = build(&spec, max_order)?;
            let max = finring::maximal_subrings_with_cap(&r, max_order)?;
            let classes = finring::classify_subrings(&max)?;
            Output::Stream(classes.iter().map(|c| json!(c)).collect())
        }
        RingOp::Iso { spec, spec2 } => {
            let a = build(&spec, max_order)?;
            let b = build(&spec2, max_order)?;
            let witness = finring::find_isomorphism(&a, &b)?;
            Output::Single(json!({ "isomorphic": witness.is_some(), "witness": witness }))
        }
    })
}

fn run_place(op: PlaceOp) -> Run {
    Ok(match op {
        PlaceOp::List { field: f, d } => {
            let base = FiniteBase::from_abs(&field(&f)?)?;
            let places = funcfield::places_of_degree(&base, d)?;
            Output::Stream(places.iter().map(|p| json!({ "place": p })).collect())
        }
        PlaceOp::Residue { field: f, place } => {
            let pl = funcfield::parse_place(&field(&f)?, &place)?;
            Output::Single(json!({
                "place": pl,
                "residue_degree": pl.residue_degree(),
                "residue": funcfield::residue_steinitz(&pl),
            }))
        }
        PlaceOp::Discriminate { field: f, a, b } => {
            let k = field(&f)?;
            let (pa, pb) = (
                funcfield::parse_place(&k, &a)?,
                funcfield::parse_place(&k, &b)?,
            );
            Output::Single(json!(funcfield::discriminate_places(&pa, &pb)?))
        }
        PlaceOp::Orbit { field: f, place } => {
            let base = FiniteBase::from_abs(&field(&f)?)?;
            let pl = base.parse_place(&place)?;
            Output::Single(json!({ "place": pl, "orbit": funcfield::mobius_orbit(&base, &pl)? }))
        }
        PlaceOp::Witness { field: f, count } => {
            let places = funcfield::infinitely_many_classes_witness(&field(&f)?)?;
            Output::Stream(
                places
                    .take(count)
                    .enumerate()
                    .map(|(i, p)| {
                        json!({
                            "index": i,
                            "place": p,
                            "residue_degree": p.residue_degree(),
                            "residue": funcfield::residue_steinitz(&p),
                        })
                    })
                    .collect(),
            )
        }
    })
}

/// `GF(p,n)`, or a finite field literal such as `F_{4}`.
fn finite_field(text: &str) -> Result<(u64, u32), Failure> {
    if let Ok(RingSpec::Galois { p, n }) = text.parse::<RingSpec>() {
        return Ok((p, n));
    }
    let f = field(text)?;
    let n = f
        .finite_degree()
        .ok_or_else(|| Failure::Domain(format!("{f} is not a finite field")))?;
    Ok((f.characteristic(), n as u32))
}

fn report(r: Result<classify::VerificationReport, ClassifyError>) -> Run {
    match r {
        Ok(rep) => Ok(Output::Single(json!(rep))),
        Err(ClassifyError::Mismatch(rep)) => Err(Failure::Mismatch(json!(rep))),
        Err(e) => Err(e.into()),
    }
}

fn run_verify(op: VerifyOp, max_order: usize) -> Run {
    match op {
        VerifyOp::Kxk { field: f } => {
            let (p, n) = finite_field(&f)?;
            report(classify::verify_kxk_with_cap(p, n, max_order))
        }
        VerifyOp::Dual { field: f } => {
            let (p, n) = finite_field(&f)?;
            report(classify::verify_dual_numbers(p, n))
        }
        VerifyOp::Product { p, n } => report(classify::verify_product_field(p, n)),
        VerifyOp::Places { field: f, degree } => {
            let (p, n) = finite_field(&f)?;
            let base = FiniteBase::new(p, n)?;
            let rep = funcfield::verify_group_action(&base, degree)?;
            let mut v = json!(rep);
            v["matched"] = json!(rep.passed());
            if rep.passed() {
                Ok(Output::Single(v))
            } else {
                Err(Failure::Mismatch(v))
            }
        }
        VerifyOp::Rationals {
            primes,
            pairs,
            seed,
        } => {
            let rep = rationals::verify_localizations(primes, pairs, seed);
            if rep.matched {
                Ok(Output::Single(json!(rep)))
            } else {
                Err(Failure::Mismatch(json!(rep)))
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::St { op } => run_st(op),
        Command::Field { op } => run_field(op, cli.limit),
        Command::Ring { op } => run_ring(op, cli.max_order),
        Command::Place { op } => run_place(op),
        Command::Verify { op } => run_verify(op, cli.max_order),
    };
    let mut stdout = io::stdout().lock();
    let (out, code) = match outcome {
        Ok(out) => (out, ExitCode::SUCCESS),
        Err(Failure::Domain(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(1);
        }
        Err(Failure::Mismatch(v)) => {
            eprintln!("error: classification mismatch");
            (Output::Single(v), ExitCode::from(3))
        }
    };
    if let Err(e) = output::write(&out, cli.format, &mut stdout) {
        if e.kind() != io::ErrorKind::BrokenPipe {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    code
}

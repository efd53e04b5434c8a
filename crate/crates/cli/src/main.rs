//! Command-line front end for the latcert toolkit.
//!
//! Exit codes: 0 = pass/success, 1 = verification failure, 2 = invalid
//! input.  Output is JSON on standard out unless `--plain` is given.

use clap::{Args, Parser, Subcommand};
use latcert::brauer::find_pair_prop36;
use latcert::families::{
    build_generic_family, build_sl_family_by_dimension, build_sl_noncocompact, build_so8c_family,
    build_so_family, build_su_family, decide_rigidity_exceptional, verify_family, BaseKind,
    CartanType, Conclusion, FamilyCertificate, FamilyError, RigidityDecision, SlTarget,
};
use latcert::fieldforge::{
    arith_equiv_upto, certify_sn_with_bound, find_type_i_poly_with_bound,
    find_type_ii_poly_with_bound, sturm_count, ArchTag, ArithEquiv, FieldError, IntPoly,
    PlaceProfile, SnConclusion,
};
use latcert::hermform::{
    herm_construct, landherr_admissible, su_local_rank, HermConstraints, HermProfile,
};
use latcert::localsym::square_class;
use latcert::quadform::{admissible, invariants, realize, witt_index, ProfileJson};
use latcert::{hilbert, Place, QuadForm, Rational};
use serde_json::json;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

const EXIT_OK: u8 = 0;
const EXIT_VERIFY: u8 = 1;
const EXIT_INPUT: u8 = 2;

/// A finished run: exit code plus the text already printed.
struct Failure {
    code: u8,
    message: String,
}

type CliResult = Result<(), Failure>;

fn invalid(msg: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_INPUT,
        message: msg.into(),
    }
}

fn unverified(msg: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_VERIFY,
        message: msg.into(),
    }
}

#[derive(Parser)]
#[command(
    name = "latcert",
    about = "Exact local-global invariant calculator and certificate tool",
    version
)]
struct Cli {
    /// Human-readable output instead of JSON.
    #[arg(long, global = true)]
    plain: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Hilbert symbols and local square classes.
    Symbol {
        #[command(subcommand)]
        cmd: SymbolCmd,
    },
    /// Quadratic form invariants, Witt indices, and realization.
    Form {
        #[command(subcommand)]
        cmd: FormCmd,
    },
    /// Hermitian form profiles: Landherr check, construction, local rank.
    Herm {
        #[command(subcommand)]
        cmd: HermCmd,
    },
    /// Brauer classes and the locally-isomorphic algebra pair engine.
    Brauer {
        #[command(subcommand)]
        cmd: BrauerCmd,
    },
    /// Number field search and certification engines.
    Field {
        #[command(subcommand)]
        cmd: FieldCmd,
    },
    /// Family builders, the independent verifier, and rigidity decisions.
    Family {
        #[command(subcommand)]
        cmd: FamilyCmd,
    },
}

#[derive(Subcommand)]
enum SymbolCmd {
    /// Hilbert symbol (A, B) at a place; prints +1 or -1.
    Hilbert {
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        b: String,
        /// "real" or a prime.
        #[arg(long)]
        place: String,
    },
    /// Canonical square-class representative of A at a place.
    Class {
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(long)]
        place: String,
    },
}

#[derive(Subcommand)]
enum FormCmd {
    /// Full invariant profile of a diagonal form, e.g. `1,-1,3`.
    Invariants {
        #[arg(allow_hyphen_values = true)]
        entries: String,
    },
    /// Witt index of a diagonal form at a place.
    Witt {
        #[arg(allow_hyphen_values = true)]
        entries: String,
        #[arg(long)]
        place: String,
    },
    /// Realize a diagonal form from a JSON profile file.
    Realize {
        #[arg(long)]
        profile: PathBuf,
    },
}

#[derive(Subcommand)]
enum HermCmd {
    /// Check the Landherr conditions for a profile JSON file.
    Check { profile: PathBuf },
    /// Construct a profile from a constraints JSON file.
    Construct {
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        profile: PathBuf,
    },
    /// Local rank of the special unitary group at a place id.
    Rank {
        profile: PathBuf,
        #[arg(long)]
        place: String,
    },
}

#[derive(Subcommand)]
enum BrauerCmd {
    /// Emit a verified pair of degree d*k algebras, locally but not
    /// globally isomorphic.
    Pair {
        #[arg(long)]
        d: u64,
        #[arg(long)]
        k: u64,
        /// Ramify the division parts at the real place (requires even d).
        #[arg(long)]
        real_ramified: bool,
    },
}

#[derive(Subcommand)]
enum FieldCmd {
    /// Search for a certified polynomial of the given type and degree.
    Forge {
        /// "I" (totally real) or "II" (exactly one complex place).
        #[arg(long = "type")]
        field_type: String,
        #[arg(long)]
        degree: usize,
        /// Search height bound.
        #[arg(long, default_value_t = 40)]
        bound: u64,
    },
    /// Certify the Galois group of a polynomial file as symmetric.
    CertifySn {
        poly: PathBuf,
        /// Witness prime bound.
        #[arg(long, default_value_t = 200)]
        bound: u64,
    },
    /// Compare factor-degree data of two polynomials up to a prime bound.
    ArithEquiv {
        f: PathBuf,
        g: PathBuf,
        #[arg(long, default_value_t = 500)]
        bound: u64,
    },
}

#[derive(Args)]
struct OutArg {
    /// Write the certificate JSON to this path instead of standard out.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum FamilyCmd {
    /// Build a family certificate.
    Build {
        #[command(subcommand)]
        kind: BuildCmd,
    },
    /// Independently re-verify a certificate file from its raw descriptors.
    Verify { cert: PathBuf },
    /// Decide commensurability for the rigid complex exceptional types.
    Rigidity {
        /// Complex group type: E8C, F4C, G2C, or E7C.
        #[arg(long = "type")]
        group_type: String,
        #[arg(long)]
        f1: PathBuf,
        #[arg(long)]
        f2: PathBuf,
        /// Prime bound for the equivalence test.
        #[arg(long, default_value_t = 500)]
        bound: u64,
    },
}

#[derive(Subcommand)]
enum BuildCmd {
    /// Special unitary family SU(r, s).
    Su {
        #[arg(long)]
        r: u32,
        #[arg(long)]
        s: u32,
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        out: OutArg,
    },
    /// Spin family of signature (r, s).
    So {
        #[arg(long)]
        r: u32,
        #[arg(long)]
        s: u32,
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        out: OutArg,
    },
    /// Complex spin family in dimension 8 (type D4, inner data only).
    So8c {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        out: OutArg,
    },
    /// Special linear family of even dimension.
    Sl {
        #[arg(long)]
        dim: u32,
        /// "real" or "complex".
        #[arg(long, default_value = "real")]
        base: String,
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        out: OutArg,
    },
    /// Inner-twist family for a remaining Cartan type, e.g. B3 or E7.
    Generic {
        #[arg(long)]
        cartan: String,
        /// "real" or "complex".
        #[arg(long, default_value = "real")]
        base: String,
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        out: OutArg,
    },
    /// Non-cocompact pair from reduced-norm-one groups of algebras.
    SlNoncocompact {
        #[arg(long)]
        m: u64,
        /// "real", "complex", or "quaternionic".
        #[arg(long, default_value = "real")]
        target: String,
        #[command(flatten)]
        out: OutArg,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(()) => ExitCode::from(EXIT_OK),
        Err(f) => {
            eprintln!("{}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn dispatch(cli: &Cli) -> CliResult {
    match &cli.command {
        Command::Symbol { cmd } => run_symbol(cmd),
        Command::Form { cmd } => run_form(cmd, cli.plain),
        Command::Herm { cmd } => run_herm(cmd, cli.plain),
        Command::Brauer { cmd } => run_brauer(cmd, cli.plain),
        Command::Field { cmd } => run_field(cmd, cli.plain),
        Command::Family { cmd } => run_family(cmd, cli.plain),
    }
}

// ---- shared parsing helpers ----

fn parse_rational(s: &str) -> Result<Rational, Failure> {
    Rational::from_str(s).map_err(|_| invalid(format!("not a rational number: {s}")))
}

fn parse_place(s: &str) -> Result<Place, Failure> {
    s.parse().map_err(|_| invalid(format!("bad place: {s}")))
}

fn parse_entries(s: &str) -> Result<QuadForm, Failure> {
    let entries: Result<Vec<Rational>, Failure> = s.split(',').map(|t| parse_rational(t.trim())).collect();
    QuadForm::new(entries?).map_err(|e| invalid(e.to_string()))
}

fn read_to_string(path: &PathBuf) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| invalid(format!("{}: {e}", path.display())))
}

fn read_poly(path: &PathBuf) -> Result<IntPoly, Failure> {
    let text = read_to_string(path)?;
    text.trim()
        .parse()
        .map_err(|e: FieldError| invalid(format!("{}: {e}", path.display())))
}

fn read_json<T: serde::de::DeserializeOwned>(path: &PathBuf) -> Result<T, Failure> {
    let text = read_to_string(path)?;
    serde_json::from_str(&text).map_err(|e| invalid(format!("{}: {e}", path.display())))
}

fn emit(plain: bool, value: &serde_json::Value, plain_text: &str) {
    if plain {
        println!("{plain_text}");
    } else {
        println!("{}", serde_json::to_string_pretty(value).expect("serializable"));
    }
}

fn signed_unit(v: i32) -> &'static str {
    if v >= 0 {
        "+1"
    } else {
        "-1"
    }
}

// ---- symbol ----

fn run_symbol(cmd: &SymbolCmd) -> CliResult {
    match cmd {
        SymbolCmd::Hilbert { a, b, place } => {
            let a = parse_rational(a)?;
            let b = parse_rational(b)?;
            let v = parse_place(place)?;
            let s = hilbert(&a, &b, v).map_err(|e| invalid(e.to_string()))?;
            println!("{}", signed_unit(s));
            Ok(())
        }
        SymbolCmd::Class { a, place } => {
            let a = parse_rational(a)?;
            let v = parse_place(place)?;
            let c = square_class(&a, v).map_err(|e| invalid(e.to_string()))?;
            println!("{}", c.representative);
            Ok(())
        }
    }
}

// ---- form ----

fn run_form(cmd: &FormCmd, plain: bool) -> CliResult {
    match cmd {
        FormCmd::Invariants { entries } => {
            let f = parse_entries(entries)?;
            let p = invariants(&f);
            let pj = ProfileJson::from_profile(&p);
            let value = serde_json::to_value(&pj).expect("serializable");
            emit(
                plain,
                &value,
                &format!(
                    "dim {}  det {}  signature ({}, {})  hasse -1 at {:?}",
                    pj.dim,
                    pj.det,
                    pj.signature.0,
                    pj.signature.1,
                    pj.hasse.keys().collect::<Vec<_>>()
                ),
            );
            Ok(())
        }
        FormCmd::Witt { entries, place } => {
            let f = parse_entries(entries)?;
            let v = parse_place(place)?;
            let w = witt_index(&f, v);
            emit(plain, &json!({ "witt_index": w }), &w.to_string());
            Ok(())
        }
        FormCmd::Realize { profile } => {
            let pj: ProfileJson = read_json(profile)?;
            let p = pj.to_profile().map_err(|e| invalid(e.to_string()))?;
            if !admissible(&p).map_err(|e| invalid(e.to_string()))? {
                return Err(unverified("profile is not admissible".to_string()));
            }
            let f = realize(&p).map_err(|e| unverified(e.to_string()))?;
            let entries: Vec<String> = f.entries().iter().map(|e| e.to_string()).collect();
            emit(
                plain,
                &json!({ "entries": entries, "profile": ProfileJson::from_profile(&p) }),
                &entries.join(","),
            );
            Ok(())
        }
    }
}

// ---- herm ----

fn run_herm(cmd: &HermCmd, plain: bool) -> CliResult {
    match cmd {
        HermCmd::Check { profile } => {
            let h: HermProfile = read_json(profile)?;
            let ok = landherr_admissible(&h).map_err(|e| invalid(e.to_string()))?;
            emit(plain, &json!({ "admissible": ok }), if ok { "admissible" } else { "not admissible" });
            if ok {
                Ok(())
            } else {
                Err(unverified("the Landherr conditions fail".to_string()))
            }
        }
        HermCmd::Construct { dim, profile } => {
            let c: HermConstraints = read_json(profile)?;
            let h = herm_construct(*dim, &c).map_err(|e| unverified(e.to_string()))?;
            let value = serde_json::to_value(&h).expect("serializable");
            emit(plain, &value, &format!("{h:?}"));
            Ok(())
        }
        HermCmd::Rank { profile, place } => {
            let h: HermProfile = read_json(profile)?;
            let r = su_local_rank(&h, place).map_err(|e| invalid(e.to_string()))?;
            emit(plain, &json!({ "rank": r }), &r.to_string());
            Ok(())
        }
    }
}

// ---- brauer ----

fn run_brauer(cmd: &BrauerCmd, plain: bool) -> CliResult {
    match cmd {
        BrauerCmd::Pair { d, k, real_ramified } => {
            let pair = find_pair_prop36(*d, *k, *real_ramified)
                .map_err(|e| invalid(e.to_string()))?;
            let value = serde_json::to_value(&pair).expect("serializable");
            let ok = pair.report.all_pass;
            emit(
                plain,
                &value,
                &format!(
                    "index(E1) = {}, index(E2) = {}, all checks pass: {}",
                    pair.report.index_e1, pair.report.index_e2, ok
                ),
            );
            if ok {
                Ok(())
            } else {
                Err(unverified("pair verification failed".to_string()))
            }
        }
    }
}

// ---- field ----

fn run_field(cmd: &FieldCmd, plain: bool) -> CliResult {
    match cmd {
        FieldCmd::Forge {
            field_type,
            degree,
            bound,
        } => {
            let (f, cert, profile) = match field_type.as_str() {
                "I" | "i" => find_type_i_poly_with_bound(*degree, *bound),
                "II" | "ii" => find_type_ii_poly_with_bound(*degree as u64, *bound),
                other => return Err(invalid(format!("unknown field type: {other} (use I or II)"))),
            }
            .map_err(|e| unverified(e.to_string()))?;
            let value = json!({
                "poly": f.to_string(),
                "certificate": cert,
                "profile": profile,
            });
            emit(plain, &value, &f.to_string());
            Ok(())
        }
        FieldCmd::CertifySn { poly, bound } => {
            let f = read_poly(poly)?;
            let cert = certify_sn_with_bound(&f, *bound).map_err(|e| invalid(e.to_string()))?;
            let value = serde_json::to_value(&cert).expect("serializable");
            let sn = cert.conclusion == SnConclusion::Sn;
            emit(
                plain,
                &value,
                if sn { "symmetric group certified" } else { "inconclusive" },
            );
            if sn {
                Ok(())
            } else {
                Err(unverified("certification inconclusive".to_string()))
            }
        }
        FieldCmd::ArithEquiv { f, g, bound } => {
            let f = read_poly(f)?;
            let g = read_poly(g)?;
            let verdict = arith_equiv_upto(&f, &g, *bound);
            let value = serde_json::to_value(&verdict).expect("serializable");
            match verdict {
                ArithEquiv::Consistent => {
                    emit(plain, &value, "consistent");
                    Ok(())
                }
                ArithEquiv::Refuted { witness } => {
                    emit(
                        plain,
                        &value,
                        &match witness {
                            Some(p) => format!("refuted at prime {p}"),
                            None => "refuted: degrees differ".to_string(),
                        },
                    );
                    Err(unverified("not arithmetically equivalent".to_string()))
                }
            }
        }
    }
}

// ---- family ----

fn parse_base(s: &str) -> Result<BaseKind, Failure> {
    match s.to_ascii_lowercase().as_str() {
        "real" | "i" => Ok(BaseKind::Real),
        "complex" | "ii" => Ok(BaseKind::Complex),
        other => Err(invalid(format!("unknown base kind: {other}"))),
    }
}

fn parse_cartan(s: &str) -> Result<CartanType, Failure> {
    let s = s.trim();
    let fail = || invalid(format!("unknown Cartan type: {s}"));
    match s {
        "E6" => return Ok(CartanType::E6),
        "E7" => return Ok(CartanType::E7),
        "E8" => return Ok(CartanType::E8),
        "F4" => return Ok(CartanType::F4),
        "G2" => return Ok(CartanType::G2),
        _ => {}
    }
    let (letter, rank) = s.split_at(1);
    let l: u32 = rank.parse().map_err(|_| fail())?;
    match letter {
        "A" | "a" => Ok(CartanType::A(l)),
        "B" | "b" => Ok(CartanType::B(l)),
        "C" | "c" => Ok(CartanType::C(l)),
        "D" | "d" => Ok(CartanType::D(l)),
        _ => Err(fail()),
    }
}

/// "E8C" etc.: a rigid-candidate complex type for the rigidity decision.
fn parse_complex_type(s: &str) -> Result<CartanType, Failure> {
    let trimmed = s
        .strip_suffix('C')
        .or_else(|| s.strip_suffix('c'))
        .ok_or_else(|| invalid(format!("expected a complex type like E8C, got {s}")))?;
    parse_cartan(trimmed)
}

fn family_error(e: FamilyError) -> Failure {
    match e {
        FamilyError::InnerOfCompactFails => unverified(e.to_string()),
        other => invalid(other.to_string()),
    }
}

fn finish_family(cert: FamilyCertificate, out: &OutArg, plain: bool) -> CliResult {
    let value = serde_json::to_value(&cert).expect("serializable");
    let verdict = match &cert.conclusion {
        Conclusion::Pass => "pass".to_string(),
        Conclusion::Fail(reason) => format!("fail: {reason}"),
    };
    if let Some(path) = &out.out {
        let text = serde_json::to_string_pretty(&value).expect("serializable");
        std::fs::write(path, text + "\n")
            .map_err(|e| invalid(format!("{}: {e}", path.display())))?;
        println!("{verdict}");
    } else {
        emit(plain, &value, &format!("conclusion: {verdict}"));
    }
    match cert.conclusion {
        Conclusion::Pass => Ok(()),
        Conclusion::Fail(reason) => Err(unverified(reason)),
    }
}

fn run_family(cmd: &FamilyCmd, plain: bool) -> CliResult {
    match cmd {
        FamilyCmd::Build { kind } => {
            let (result, out) = match kind {
                BuildCmd::Su { r, s, n, out } => (build_su_family(*r, *s, *n), out),
                BuildCmd::So { r, s, n, out } => (build_so_family(*r, *s, *n), out),
                BuildCmd::So8c { n, out } => (build_so8c_family(*n), out),
                BuildCmd::Sl { dim, base, n, out } => {
                    (build_sl_family_by_dimension(*dim, parse_base(base)?, *n), out)
                }
                BuildCmd::Generic { cartan, base, n, out } => (
                    build_generic_family(parse_cartan(cartan)?, parse_base(base)?, *n),
                    out,
                ),
                BuildCmd::SlNoncocompact { m, target, out } => {
                    let t = match target.to_ascii_lowercase().as_str() {
                        "real" => SlTarget::Real,
                        "complex" => SlTarget::Complex,
                        "quaternionic" => SlTarget::Quaternionic,
                        other => return Err(invalid(format!("unknown target: {other}"))),
                    };
                    (build_sl_noncocompact(*m, t), out)
                }
            };
            let cert = result.map_err(family_error)?;
            finish_family(cert, out, plain)
        }
        FamilyCmd::Verify { cert } => {
            let stored: FamilyCertificate = read_json(cert)?;
            let recheck = verify_family(&stored.descriptors).map_err(family_error)?;
            let agrees = recheck.conclusion == stored.conclusion;
            let value = json!({
                "stored_conclusion": stored.conclusion,
                "recheck": recheck,
                "agrees": agrees,
            });
            let pass = agrees && recheck.conclusion == Conclusion::Pass;
            emit(
                plain,
                &value,
                &format!(
                    "recheck: {}  (agrees with stored verdict: {agrees})",
                    match &recheck.conclusion {
                        Conclusion::Pass => "pass".to_string(),
                        Conclusion::Fail(r) => format!("fail: {r}"),
                    }
                ),
            );
            if pass {
                Ok(())
            } else if !agrees {
                Err(unverified("stored conclusion does not re-verify".to_string()))
            } else {
                Err(unverified("certificate records a failing family".to_string()))
            }
        }
        FamilyCmd::Rigidity {
            group_type,
            f1,
            f2,
            bound,
        } => {
            let cartan = parse_complex_type(group_type)?;
            let p1 = profile_from_poly(f1)?;
            let p2 = profile_from_poly(f2)?;
            let f = read_poly(f1)?;
            let g = read_poly(f2)?;
            let evidence = arith_equiv_upto(&f, &g, *bound);
            let decision = decide_rigidity_exceptional(cartan, &p1, &p2, &evidence);
            let value = json!({ "decision": decision, "evidence": evidence });
            emit(
                plain,
                &value,
                &match &decision {
                    RigidityDecision::Commensurable => "commensurable".to_string(),
                    RigidityDecision::NotApplicable { reason } => {
                        format!("not applicable: {reason}")
                    }
                },
            );
            Ok(())
        }
    }
}

/// Place profile read off a polynomial file: archimedean tags from the
/// exact real-root count, standard named finite places.
fn profile_from_poly(path: &PathBuf) -> Result<PlaceProfile, Failure> {
    let f = read_poly(path)?;
    let n = f.degree();
    let real = sturm_count(&f).map_err(|e| invalid(format!("{}: {e}", path.display())))?;
    let complex_pairs = (n - real) / 2;
    let mut archimedean = vec![ArchTag::Complex; complex_pairs];
    archimedean.extend(vec![ArchTag::Real; real]);
    let mut profile = if complex_pairs == 1 {
        PlaceProfile::type_ii_fixture(n, 5, 7)
    } else {
        PlaceProfile::type_i_fixture(n, 5, 7)
    };
    profile.archimedean = archimedean;
    profile.source_poly = Some(f);
    Ok(profile)
}

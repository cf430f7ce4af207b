//! `padic-ortho`: parameter checks, basis construction, orthogonality
//! analysis, and the lattice signature scheme from the command line.
//!
//! Exit codes: 0 success, 1 invalid signature, 2 parameter violation,
//! 3 construction failure, 4 malformed or unreadable input.

mod transcript;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use padic_ortho::builder::{build, validate_params, ConstructionParams};
use padic_ortho::field::FieldDescriptor;
use padic_ortho::ortho::{
    check_orthogonal_equal_norm, power_basis, power_basis_orthogonality, residue_factorization,
    VectorFamily,
};
use padic_ortho::padic::{parse_rational, Prime, Valuation};
use padic_ortho::poly::RationalPoly;
use padic_ortho::serial;
use padic_ortho::signature::{
    keygen_from_construction, sample_params, seeded_rng, sign, verify_detailed, VerifyOutcome,
};
use padic_ortho::Error;
use rand::RngCore;
use serde_json::{json, Value};

#[derive(Debug, Parser)]
#[command(
    name = "padic-ortho",
    version,
    about = "Orthogonal bases of p-adic fields and a lattice signature scheme"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check (p, q, e) against the construction's requirements
    Params { p: u64, q: u64, e: usize },
    /// Build and certify an orthogonal basis; writes a JSON transcript
    Build {
        #[command(flatten)]
        construction: ConstructionArgs,
        /// Transcript path (stdout when omitted)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generate a key pair (pk.json and sk.json)
    Keygen {
        #[command(flatten)]
        construction: ConstructionArgs,
        /// Base-p digits per hash coefficient
        #[arg(long, default_value_t = padic_ortho::hash::DEFAULT_DIGITS)]
        digits: usize,
        /// Output directory
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Sign a message with a private key
    Sign {
        /// Private key file
        #[arg(long)]
        key: PathBuf,
        #[command(flatten)]
        message: MessageArgs,
        /// Seed for r, as hex (random when omitted)
        #[arg(long)]
        seed: Option<String>,
        /// Signature path (stdout when omitted)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Verify a signature; exit 0 when valid, 1 when not
    Verify {
        /// Public (or private) key file
        #[arg(long)]
        key: PathBuf,
        #[command(flatten)]
        message: MessageArgs,
        /// Signature file
        #[arg(long)]
        sig: PathBuf,
    },
    /// Orthogonality report for a power basis or a build transcript
    Analyze {
        /// Prime for --poly / --poly-file
        #[arg(long)]
        p: Option<u64>,
        /// Monic polynomial as a comma list, constant term first
        #[arg(long, allow_hyphen_values = true, conflicts_with_all = ["poly_file", "basis"])]
        poly: Option<String>,
        /// File holding such a comma list
        #[arg(long, conflicts_with = "basis")]
        poly_file: Option<PathBuf>,
        /// Build transcript to re-certify
        #[arg(long)]
        basis: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
struct ConstructionArgs {
    /// "p,q,e" or "p,q,e,m"
    #[arg(long)]
    params: String,
    /// Seed as hex (random when omitted)
    #[arg(long)]
    seed: Option<String>,
    /// Accept an `a` outside the default shape, such as ζ = θ + π
    #[arg(long)]
    allow_custom_a: bool,
    /// a_0..a_(f-1) as a comma list of rationals
    #[arg(long, allow_hyphen_values = true, requires = "g")]
    a: Option<String>,
    /// Eisenstein polynomial G as a comma list, constant term first
    #[arg(long, allow_hyphen_values = true, requires = "a")]
    g: Option<String>,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
struct MessageArgs {
    /// File holding the message bytes
    #[arg(long)]
    message: Option<PathBuf>,
    /// Message given inline
    #[arg(long)]
    text: Option<String>,
}

struct Failure {
    code: u8,
    message: String,
}

type CmdResult = std::result::Result<u8, Failure>;

fn fail(code: u8, message: impl Into<String>) -> Failure {
    Failure {
        code,
        message: message.into(),
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::InvalidParams(_) | Error::NotPrime(_) | Error::NotCoprime(..) => 2,
        Error::Parse(_)
        | Error::InvalidKey(_)
        | Error::WrongLength { .. }
        | Error::DescriptorMismatch => 4,
        _ => 3,
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        fail(exit_code(&e), e.to_string())
    }
}

fn read(path: &Path) -> std::result::Result<Vec<u8>, Failure> {
    fs::read(path).map_err(|e| fail(4, format!("{}: {e}", path.display())))
}

fn read_text(path: &Path) -> std::result::Result<String, Failure> {
    String::from_utf8(read(path)?).map_err(|_| fail(4, format!("{}: not UTF-8", path.display())))
}

fn write(path: &Path, text: &str) -> std::result::Result<(), Failure> {
    fs::write(path, text).map_err(|e| fail(4, format!("{}: {e}", path.display())))
}

fn emit(out: Option<&Path>, v: &Value) -> std::result::Result<(), Failure> {
    let text = serial::to_pretty(v);
    match out {
        Some(path) => write(path, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Parses `--seed`, or draws 32 bytes from the OS and reports them on stderr.
fn seed_bytes(seed: Option<&str>) -> std::result::Result<Vec<u8>, Failure> {
    match seed {
        Some(s) => hex::decode(s).map_err(|e| fail(4, format!("--seed: {e}"))),
        None => {
            let mut bytes = vec![0u8; 32];
            rand::rngs::OsRng.fill_bytes(&mut bytes);
            eprintln!("seed: {}", hex::encode(&bytes));
            Ok(bytes)
        }
    }
}

fn parse_list(flag: &str, s: &str) -> std::result::Result<Vec<num_rational::BigRational>, Failure> {
    s.split(',')
        .map(|x| parse_rational(x).map_err(|e| fail(4, format!("--{flag}: {e}"))))
        .collect()
}

/// `(p, q, e, m)` from `--params`.
fn parse_params(s: &str) -> std::result::Result<(u64, u64, usize, Option<usize>), Failure> {
    let parts: Vec<u64> = s
        .split(',')
        .map(|x| {
            x.trim()
                .parse::<u64>()
                .map_err(|_| fail(4, format!("--params: bad integer {x:?}")))
        })
        .collect::<std::result::Result<_, _>>()?;
    match parts[..] {
        [p, q, e] => Ok((p, q, e as usize, None)),
        [p, q, e, m] => Ok((p, q, e as usize, Some(m as usize))),
        _ => Err(fail(4, "--params expects p,q,e or p,q,e,m")),
    }
}

fn construction_params(
    args: &ConstructionArgs,
    seed: &[u8],
) -> std::result::Result<(ConstructionParams, Option<usize>), Failure> {
    let (p, q, e, m) = parse_params(&args.params)?;
    validate_params(p, q, e)?;
    let params = match (&args.a, &args.g) {
        (Some(a), Some(g)) => ConstructionParams {
            p: Prime::new(p)?,
            q,
            e,
            a: parse_list("a", a)?,
            g: RationalPoly::new(parse_list("g", g)?),
            allow_custom_a: args.allow_custom_a,
        },
        _ if args.allow_custom_a => return Err(fail(4, "--allow-custom-a needs --a and --g")),
        _ => sample_params(p, q, e, seed)?,
    };
    Ok((params, m))
}

fn cmd_params(p: u64, q: u64, e: usize) -> CmdResult {
    let (ok, violations) = match validate_params(p, q, e) {
        Ok(()) => (true, vec![]),
        Err(Error::InvalidParams(v)) => (false, v),
        Err(other) => (false, vec![other.to_string()]),
    };
    let mut report = json!({ "p": p, "q": q, "e": e, "ok": ok, "violations": violations });
    if ok {
        report["f"] = json!(q - 1);
        report["n"] = json!((q as usize - 1) * e);
    }
    emit(None, &report)?;
    Ok(if ok { 0 } else { 2 })
}

fn cmd_build(args: &ConstructionArgs, out: Option<&Path>) -> CmdResult {
    let needs_seed = args.a.is_none();
    let seed = if needs_seed {
        seed_bytes(args.seed.as_deref())?
    } else {
        Vec::new()
    };
    let (params, _) = construction_params(args, &seed)?;
    let result = build(&params)?;
    let t = transcript::transcript(&result);
    if let Some(path) = out {
        write(path, &serial::to_pretty(&t))?;
        println!("F = {}", result.field.modulus());
        println!("{}", transcript::valuation_grid_text(&result.basis));
    } else {
        emit(None, &t)?;
    }
    Ok(0)
}

fn cmd_keygen(args: &ConstructionArgs, digits: usize, out: &Path) -> CmdResult {
    let seed = seed_bytes(args.seed.as_deref())?;
    let (params, m) = construction_params(args, &seed)?;
    let m = m.unwrap_or(2 * params.f());
    let construction = build(&params)?;
    let (pk, sk) = keygen_from_construction(&construction, m, &seed, digits)?;
    fs::create_dir_all(out).map_err(|e| fail(4, format!("{}: {e}", out.display())))?;
    write(
        &out.join("pk.json"),
        &serial::to_pretty(&serial::public_key_to_json(&pk)),
    )?;
    write(
        &out.join("sk.json"),
        &serial::to_pretty(&serial::private_key_to_json(&pk, &sk)),
    )?;
    println!(
        "wrote {} and {}",
        out.join("pk.json").display(),
        out.join("sk.json").display()
    );
    Ok(0)
}

fn message_bytes(m: &MessageArgs) -> std::result::Result<Vec<u8>, Failure> {
    match (&m.message, &m.text) {
        (Some(path), _) => read(path),
        (None, Some(text)) => Ok(text.as_bytes().to_vec()),
        (None, None) => Err(fail(4, "no message given")),
    }
}

fn cmd_sign(
    key: &Path,
    message: &MessageArgs,
    seed: Option<&str>,
    out: Option<&Path>,
) -> CmdResult {
    let (pk, sk) = serial::private_key_from_str(&read_text(key)?)?;
    let msg = message_bytes(message)?;
    let seed = seed_bytes(seed)?;
    let sig = sign(&sk, &pk, &msg, &mut seeded_rng(&seed, b"sign"))?;
    emit(out, &serial::signature_to_json(&sig))?;
    Ok(0)
}

fn cmd_verify(key: &Path, message: &MessageArgs, sig: &Path) -> CmdResult {
    let pk = serial::public_key_from_str(&read_text(key)?)?;
    let msg = message_bytes(message)?;
    let sig = serial::signature_from_str(&read_text(sig)?, &pk)?;
    let outcome = verify_detailed(&pk, &msg, &sig);
    let (status, detail) = match &outcome {
        VerifyOutcome::Valid { distance } => ("valid", json!({ "distance": distance.to_string() })),
        VerifyOutcome::TooFar { distance } => {
            ("too_far", json!({ "distance": distance.to_string() }))
        }
        VerifyOutcome::NotInLattice => ("not_in_lattice", Value::Null),
        VerifyOutcome::HashFailure(e) => ("hash_failure", json!(e.to_string())),
        VerifyOutcome::Malformed(e) => ("malformed", json!(e)),
    };
    emit(
        None,
        &json!({ "valid": outcome.is_valid(), "status": status, "detail": detail }),
    )?;
    Ok(if outcome.is_valid() { 0 } else { 1 })
}

/// Exhaustive digit certification of the power basis is run up to this many
/// digit vectors.
const DIGIT_CHECK_LIMIT: u64 = 1 << 16;

fn format_factorization(factors: &[(padic_ortho::fp_poly::FpPoly, usize)]) -> String {
    factors
        .iter()
        .map(|(g, k)| {
            match (
                k,
                factors.len(),
                g.coeffs().iter().filter(|&&c| c != 0).count(),
            ) {
                (1, 1, _) => g.to_string(),
                (1, _, 1) => g.to_string(),
                (1, _, _) => format!("({g})"),
                (k, _, 1) => format!("{g}^{k}"),
                (k, _, _) => format!("({g})^{k}"),
            }
        })
        .collect::<Vec<_>>()
        .join(" * ")
}

fn analyze_poly(text: &str, p: u64) -> CmdResult {
    let f = RationalPoly::parse(text.trim()).map_err(|e| fail(4, e.to_string()))?;
    let p = Prime::new(p)?;
    let orthogonal = power_basis_orthogonality(&f, p)?;
    let (reduced, factors) = residue_factorization(&f, p)?;
    let mut report = json!({
        "F": serial::rationals_to_json(f.coeffs()),
        "p": p.get(),
        "F_mod_p": reduced.to_string(),
        "power_basis_orthogonal": orthogonal,
    });
    if let Some(factors) = factors {
        report["factorization"] = json!(format_factorization(&factors));
    }
    let field = FieldDescriptor::new(p, f, None)?.into_arc();
    let basis = power_basis(&field);
    let n = basis.len() as u32;
    let unit_generator = basis.len() < 2 || basis[1].valuation() == Valuation::int(0);
    if unit_generator
        && p.get()
            .checked_pow(n)
            .is_some_and(|c| c <= DIGIT_CHECK_LIMIT)
    {
        let verdict = check_orthogonal_equal_norm(&VectorFamily::new(basis)?)?;
        report["digit_certificate"] = transcript::verdict_json(&verdict);
    }
    emit(None, &report)?;
    Ok(0)
}

fn analyze_basis(path: &Path) -> CmdResult {
    let (basis, report) = transcript::recertify(&read_text(path)?)?;
    emit(
        None,
        &json!({
            "f": basis.f(),
            "e": basis.e(),
            "certified": report.is_orthogonal(),
            "grades": transcript::report_json(&report),
        }),
    )?;
    Ok(0)
}

fn run(cli: Cli) -> CmdResult {
    match cli.command {
        Command::Params { p, q, e } => cmd_params(p, q, e),
        Command::Build { construction, out } => cmd_build(&construction, out.as_deref()),
        Command::Keygen {
            construction,
            digits,
            out,
        } => cmd_keygen(&construction, digits, &out),
        Command::Sign {
            key,
            message,
            seed,
            out,
        } => cmd_sign(&key, &message, seed.as_deref(), out.as_deref()),
        Command::Verify { key, message, sig } => cmd_verify(&key, &message, &sig),
        Command::Analyze {
            p,
            poly,
            poly_file,
            basis,
        } => match (poly, poly_file, basis) {
            (_, _, Some(path)) => analyze_basis(&path),
            (Some(text), None, None) => {
                analyze_poly(&text, p.ok_or_else(|| fail(4, "--poly needs --p"))?)
            }
            (None, Some(path), None) => analyze_poly(
                &read_text(&path)?,
                p.ok_or_else(|| fail(4, "--poly-file needs --p"))?,
            ),
            _ => Err(fail(4, "analyze needs --poly, --poly-file or --basis")),
        },
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

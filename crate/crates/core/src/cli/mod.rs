//! Command-line front end. [`run`] is the whole program minus process
//! plumbing, so it can be driven from tests.

pub mod document;
pub mod parser;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::arith::Prime;
use crate::brackets::{bracket_of_polynomial, calq, f_correction, Method, ENUMERATION_LIMIT};
use crate::error::Error;
use crate::jacobi::{verify_diffexp, verify_eq65, verify_prop21, verify_taylor_chain};
use crate::modforms::{dim_quasimodular, eisenstein, filtration, leading_g2_coefficient, quasi_decompose, EisensteinVariant};
use crate::report::{Claim, VerificationReport, Verdict};
use crate::series::QExpansion;
use crate::theorems::{self, decomposition_terms};

pub use document::{DecompositionDocument, Document, FiltrationDocument, SeriesDocument};
pub use parser::parse_q_polynomial;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NOT_APPLICABLE: i32 = 3;
pub const EXIT_TRUNCATION: i32 = 4;

/// Largest truncation at which the fast bracket is re-checked against
/// enumeration before being emitted.
pub const ORACLE_GATE_TERMS: u32 = 30;

#[derive(Parser, Debug)]
#[command(name = "qbrackets", version, about = "Exact q-brackets, regularizations and their congruences")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write output here (atomically) instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Record elapsed milliseconds in reports. Makes output non-reproducible.
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compute a q-expansion.
    #[command(subcommand)]
    Compute(Compute),
    /// Decompose a bracket in the E2, E4, E6 basis.
    Decompose {
        #[arg(long = "k")]
        k: Option<u32>,
        /// Decompose the bracket of this polynomial instead of calQ_k.
        #[arg(long)]
        expr: Option<String>,
        #[arg(long)]
        terms: Option<u32>,
        #[arg(long)]
        trust_fast: bool,
    },
    /// Mod-p filtration of calQ_k.
    Filtration {
        #[arg(long = "k")]
        k: u32,
        #[arg(long = "p")]
        p: u64,
        #[arg(long)]
        trust_fast: bool,
    },
    /// Verify a claim (or `suite` for the whole default grid).
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Fast,
    #[value(alias = "enumerate")]
    Enum,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum VariantArg {
    #[value(name = "G")]
    G,
    #[value(name = "E")]
    E,
    #[value(name = "Greg")]
    Greg,
}

#[derive(Subcommand, Debug)]
enum Compute {
    /// calQ_k or calQ_k^(p).
    Bracket {
        #[arg(long = "k")]
        k: u32,
        #[arg(long)]
        terms: u32,
        #[arg(long = "p")]
        p: Option<u64>,
        #[arg(long, value_enum, default_value_t = MethodArg::Fast)]
        method: MethodArg,
        /// Emit fast results beyond the enumeration cross-check range.
        #[arg(long)]
        trust_fast: bool,
    },
    /// Eisenstein series G_k, E_k or the regularized G_k^(p).
    Eisenstein {
        #[arg(long = "k")]
        k: u32,
        #[arg(long)]
        terms: u32,
        #[arg(long, value_enum, default_value_t = VariantArg::G)]
        variant: VariantArg,
        #[arg(long = "p")]
        p: Option<u64>,
    },
    /// The correction series f_k^(p).
    Correction {
        #[arg(long = "k")]
        k: u32,
        #[arg(long = "p")]
        p: u64,
        #[arg(long)]
        terms: u32,
    },
    /// Bracket of a polynomial in Q1, Q2, ...
    BracketPoly {
        #[arg(long)]
        expr: String,
        #[arg(long)]
        terms: u32,
    },
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// thm-a, thm-b, thm-c, thm-e, support-e, eq-remark, eq65, prop21,
    /// diffexp, oracle, taylor-chain, or suite.
    claim: String,
    #[arg(long = "p")]
    p: Option<u64>,
    #[arg(long = "r")]
    r: Option<u32>,
    #[arg(long = "k")]
    k: Option<u32>,
    #[arg(long)]
    k1: Option<u32>,
    #[arg(long)]
    k2: Option<u32>,
    #[arg(long)]
    i_max: Option<u32>,
    #[arg(long)]
    terms: Option<u32>,
    /// eq65 bound in q^(1/24) units.
    #[arg(long)]
    units: Option<i64>,
}

/// Result of one invocation.
#[derive(Debug, Default)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

enum Failure {
    Usage(String),
    Lib(Error),
    /// A result that disagrees with its cross-check.
    Mismatch(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type CmdResult = std::result::Result<(Document, i32), Failure>;

fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::InsufficientTruncation(_) | Error::NotIntegral { .. } | Error::NotIntegralTerm { .. } => EXIT_TRUNCATION,
        Error::NotQuasimodular { .. } => EXIT_FAIL,
        _ => EXIT_USAGE,
    }
}

pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            return if code == EXIT_OK {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    let (doc, code) = match execute(&cli) {
        Ok(done) => done,
        Err(Failure::Usage(message)) => return error_outcome(EXIT_USAGE, &message),
        Err(Failure::Mismatch(message)) => return error_outcome(EXIT_FAIL, &message),
        Err(Failure::Lib(e)) => return error_outcome(exit_code_for(&e), &e.to_string()),
    };
    let text = match cli.format {
        Format::Json => doc.to_json(),
        Format::Csv => doc.to_csv(),
    };
    match &cli.out {
        Some(path) => match write_atomically(path, &text) {
            Ok(()) => Outcome { code, ..Outcome::default() },
            Err(e) => error_outcome(EXIT_USAGE, &format!("cannot write {}: {e}", path.display())),
        },
        None => Outcome { code, stdout: text, stderr: String::new() },
    }
}

fn error_outcome(code: i32, message: &str) -> Outcome {
    Outcome { code, stdout: String::new(), stderr: format!("error: {message}\n") }
}

fn write_atomically(path: &Path, text: &str) -> std::io::Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(text.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

fn prime(p: u64) -> std::result::Result<Prime, Failure> {
    Prime::new(p).map_err(Failure::Lib)
}

fn require<T>(value: Option<T>, flag: &str, claim: &str) -> std::result::Result<T, Failure> {
    value.ok_or_else(|| Failure::Usage(format!("{claim} needs --{flag}")))
}

fn meta<const N: usize>(pairs: [(&str, String); N]) -> BTreeMap<String, String> {
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

/// calQ by the fast formula, cross-checked against enumeration inside the
/// gate and refused beyond it unless explicitly trusted.
fn gated_fast(k: u32, n: u32, p: Option<Prime>, trust: bool) -> std::result::Result<(QExpansion, &'static str), Failure> {
    let series = calq(k, n, p, Method::Fast)?;
    if n <= ORACLE_GATE_TERMS {
        let oracle = calq(k, n, p, Method::Enumerate)?;
        if oracle != series {
            return Err(Failure::Mismatch(format!("fast and enumerated calQ_{k} disagree at N = {n}")));
        }
        Ok((series, "enumeration-checked"))
    } else if trust {
        Ok((series, "trusted"))
    } else {
        Err(Failure::Usage(format!(
            "the fast method is cross-checked only up to {ORACLE_GATE_TERMS} terms; pass --trust-fast to go beyond"
        )))
    }
}

fn execute(cli: &Cli) -> CmdResult {
    match &cli.command {
        Command::Compute(c) => compute(c),
        Command::Decompose { k, expr, terms, trust_fast } => decompose(*k, expr.as_deref(), *terms, *trust_fast),
        Command::Filtration { k, p, trust_fast } => {
            let prime = prime(*p)?;
            let n = decomposition_terms(*k);
            let (series, gate) = gated_fast(*k, n, None, *trust_fast)?;
            let d = quasi_decompose(&series, *k, dim_quasimodular(*k))?;
            let f = filtration(&d, prime)?;
            let metadata = meta([
                ("decomposition", d.to_string()),
                ("oracle", gate.to_string()),
                ("terms", n.to_string()),
            ]);
            let doc = FiltrationDocument { weight: *k, p: *p, filtration: f.weight, zero: f.zero, metadata };
            Ok((Document::Filtration(doc), EXIT_OK))
        }
        Command::Verify(args) => verify(args, cli.timing),
    }
}

fn compute(c: &Compute) -> CmdResult {
    let (series, weight, metadata) = match c {
        Compute::Bracket { k, terms, p, method, trust_fast } => {
            let prime = p.map(prime).transpose()?;
            let (series, how) = match method {
                MethodArg::Enum => (calq(*k, *terms, prime, Method::Enumerate)?, "enumerate"),
                MethodArg::Fast => {
                    let (s, gate) = gated_fast(*k, *terms, prime, *trust_fast)?;
                    (s, gate)
                }
            };
            let mut m = meta([("k", k.to_string()), ("method", format!("{method:?}").to_lowercase()), ("oracle", how.into())]);
            if let Some(p) = p {
                m.insert("p".into(), p.to_string());
                if *p < 5 {
                    m.insert("note".into(), "p < 5 lies outside the theorem hypotheses".into());
                }
            }
            if k % 2 == 1 {
                m.insert("note".into(), "odd weight: the bracket vanishes identically".into());
            }
            (series, Some(*k), m)
        }
        Compute::Eisenstein { k, terms, variant, p } => {
            let v = match variant {
                VariantArg::G => EisensteinVariant::G,
                VariantArg::E => EisensteinVariant::E,
                VariantArg::Greg => EisensteinVariant::RegularizedG(prime(require(*p, "p", "variant Greg")?)?),
            };
            let mut m = meta([("k", k.to_string()), ("variant", format!("{variant:?}"))]);
            if let Some(p) = p {
                m.insert("p".into(), p.to_string());
            }
            (eisenstein(*k, *terms, v)?, Some(*k), m)
        }
        Compute::Correction { k, p, terms } => {
            let s = f_correction(*k, prime(*p)?, *terms)?;
            (s, None, meta([("k", k.to_string()), ("p", p.to_string())]))
        }
        Compute::BracketPoly { expr, terms } => {
            let poly = parse_q_polynomial(expr)?;
            if *terms > ENUMERATION_LIMIT {
                return Err(Failure::Usage(format!("polynomial brackets are enumerated; --terms must be <= {ENUMERATION_LIMIT}")));
            }
            let s = bracket_of_polynomial(&poly, *terms);
            let weight = poly.is_homogeneous().then(|| poly.grading());
            let m = meta([
                ("expr", poly.to_string()),
                ("grading", poly.grading().to_string()),
                ("homogeneous", poly.is_homogeneous().to_string()),
            ]);
            (s, weight, m)
        }
    };
    Ok((Document::QExpansion(SeriesDocument::from_series(&series, weight, metadata)?), EXIT_OK))
}

fn decompose(k: Option<u32>, expr: Option<&str>, terms: Option<u32>, trust: bool) -> CmdResult {
    let (series, weight, mut metadata) = match (k, expr) {
        (Some(k), None) => {
            let n = terms.unwrap_or_else(|| decomposition_terms(k));
            let (s, gate) = gated_fast(k, n, None, trust)?;
            (s, k, meta([("source", format!("calQ_{k}")), ("oracle", gate.to_string()), ("terms", n.to_string())]))
        }
        (None, Some(text)) => {
            let poly = parse_q_polynomial(text)?;
            if !poly.is_homogeneous() {
                return Err(Failure::Usage("only homogeneous polynomials have a weight".into()));
            }
            let w = poly.grading();
            let n = terms.unwrap_or_else(|| decomposition_terms(w)).min(ENUMERATION_LIMIT);
            let s = bracket_of_polynomial(&poly, n);
            (s, w, meta([("source", poly.to_string()), ("terms", n.to_string())]))
        }
        _ => return Err(Failure::Usage("decompose needs exactly one of --k and --expr".into())),
    };
    let margin = dim_quasimodular(weight);
    let d = quasi_decompose(&series, weight, margin)?;
    metadata.insert("margin".into(), margin.to_string());
    metadata.insert("residual".into(), "0".into());
    if k.is_some() {
        let (extracted, expected) = leading_g2_coefficient(&d);
        metadata.insert("leading_e2".into(), extracted.to_string());
        metadata.insert("leading_e2_expected".into(), expected.to_string());
    }
    Ok((Document::Decomposition(DecompositionDocument::from_poly(&d, metadata)), EXIT_OK))
}

fn verdict_code(r: &VerificationReport) -> i32 {
    match r.verdict {
        Verdict::Pass => EXIT_OK,
        Verdict::Fail => EXIT_FAIL,
        Verdict::NotApplicable => EXIT_NOT_APPLICABLE,
    }
}

fn verify(a: &VerifyArgs, timing: bool) -> CmdResult {
    let start = Instant::now();
    if a.claim == "suite" {
        let mut reports = theorems::run_suite()?;
        let code = if reports.iter().any(|r| r.verdict == Verdict::Fail) { EXIT_FAIL } else { EXIT_OK };
        if timing {
            let ms = start.elapsed().as_millis() as u64;
            for r in &mut reports {
                r.elapsed_ms = Some(ms);
            }
        }
        return Ok((Document::Suite { reports }, code));
    }
    let claim: Claim = a.claim.parse().map_err(|e: Error| Failure::Usage(e.to_string()))?;
    let name = claim.as_str();
    let p = || require(a.p, "p", name);
    let k = || require(a.k, "k", name);
    let mut report = match claim {
        Claim::ThmA => theorems::check_thm_a(
            p()?,
            require(a.r, "r", name)?,
            require(a.k1, "k1", name)?,
            require(a.k2, "k2", name)?,
            a.terms.unwrap_or(60),
        )?,
        Claim::ThmB => theorems::check_thm_b(p()?, k()?, require(a.i_max, "i-max", name)?, a.terms.unwrap_or(50))?,
        Claim::ThmC => theorems::check_thm_c(p()?, k()?)?,
        Claim::ThmE => theorems::check_thm_e(p()?, k()?, a.terms.unwrap_or(150))?,
        Claim::SupportE => theorems::check_support_e(p()?, k()?, a.terms.unwrap_or(2000))?,
        Claim::EqRemark => theorems::check_eq_remark(p()?, k()?, a.terms.unwrap_or(100))?,
        Claim::Oracle => theorems::check_oracle(k()?, a.terms.unwrap_or(30), a.p)?,
        Claim::Eq65 => verify_eq65(a.units.unwrap_or(720))?,
        Claim::Prop21 => verify_prop21(prime(p()?)?, a.terms.unwrap_or(30))?,
        Claim::Diffexp => verify_diffexp(prime(p()?)?, a.terms.unwrap_or(60))?,
        Claim::TaylorChain => verify_taylor_chain(k()?, a.terms.unwrap_or(40))?,
    };
    if timing {
        report.elapsed_ms = Some(start.elapsed().as_millis() as u64);
    }
    let code = verdict_code(&report);
    Ok((Document::Report(report), code))
}

//! Command-line front end.
//!
//! Results go to the data stream (stdout), diagnostics to stderr. Exit
//! codes: 0 success, 1 usage error, 2 invalid input, 3 overflow,
//! 4 verification failure.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::apery::{self, AperyTable, MembershipCertificate, ScanOptions};
use crate::error::Error;
use crate::euclid3;
use crate::grobner::{self, Binomial};
use crate::monomial::{ExponentVector, Monomial};
use crate::oracle;
use crate::semigroup::GeneratorSet;

/// Generators of the n = 17 regression instance.
pub const PAPER17: [i64; 17] = [
    1030, 1031, 1034, 1039, 1046, 1055, 1066, 1079, 1094, 1111, 1130, 1151, 1373, 1393, 1423, 1433,
    1493,
];

/// Above this parameter `verify` skips S-pair closure unless asked.
const SPAIR_AUTO_LIMIT: u64 = 200;
/// Above this bound `verify` skips the reachability sweep.
const DP_LIMIT: u64 = 50_000_000;

#[derive(Debug, Parser)]
#[command(
    name = "apery",
    version,
    about = "Apéry sets, Frobenius numbers and Gröbner bases of numerical semigroups"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Index (into the sorted generators) of the parameter variable x1.
    #[arg(long, global = true)]
    param_index: Option<usize>,
    /// Worker threads for the level scan.
    #[arg(long, default_value_t = 1, global = true)]
    threads: usize,
    /// Stop the level scan at this total degree (results are then uncertified).
    #[arg(long, global = true)]
    level_cap: Option<u32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Debug, Args)]
struct Input {
    /// Generators, e.g. `6 9 20`.
    #[arg(allow_negative_numbers = true)]
    generators: Vec<String>,
    /// Read generators from a file, one per line; `#` starts a comment.
    #[arg(long, short)]
    file: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Frobenius number.
    Frobenius(Input),
    /// Apéry set with witnesses.
    Apery(Input),
    /// Membership of a value, with certificate.
    Member {
        #[arg(allow_negative_numbers = true)]
        value: i64,
        #[command(flatten)]
        input: Input,
    },
    /// Standard monomials in x2..xn.
    Standard(Input),
    /// Minimal generators of the initial ideal.
    Initial(Input),
    /// Reduced Gröbner basis of the toric ideal.
    Groebner(Input),
    /// Hilbert–Poincaré series.
    Hilbert(Input),
    /// Free-module decomposition over K[t^a1].
    Decompose(Input),
    /// Closed form for three generators; the first listed is the parameter.
    N3(Input),
    /// Check the engine against the independent oracles.
    Verify {
        #[command(flatten)]
        input: Input,
        /// Force S-pair closure even for large parameters.
        #[arg(long)]
        spairs: bool,
    },
    /// Time the Apéry scan and Gröbner extraction.
    Bench {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum)]
        preset: Option<Preset>,
        #[arg(long, default_value_t = 1)]
        repeat: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Preset {
    Paper17,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot parse generator token {0:?}")]
    Parse(String),
    #[error("{0}")]
    Input(Error),
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("verification failed")]
    Verification,
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Input(e)
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Parse(_) | CliError::Io { .. } => 1,
            CliError::Input(Error::Overflow(_)) => 3,
            CliError::Input(_) => 2,
            CliError::Verification => 4,
        }
    }
}

fn parse_token(tok: &str) -> Result<i64, CliError> {
    tok.parse::<i64>().map_err(|e| match e.kind() {
        std::num::IntErrorKind::PosOverflow | std::num::IntErrorKind::NegOverflow => {
            CliError::Input(Error::Overflow("generator"))
        }
        _ => CliError::Parse(tok.to_string()),
    })
}

/// Integers from a generators file: one per line, blank lines and
/// `#` comments ignored.
pub fn parse_generator_text(text: &str) -> Result<Vec<i64>, CliError> {
    text.lines()
        .map(|line| line.split('#').next().unwrap_or("").trim())
        .filter(|line| !line.is_empty())
        .map(parse_token)
        .collect()
}

pub fn parse_generator_tokens<S: AsRef<str>>(tokens: &[S]) -> Result<Vec<i64>, CliError> {
    tokens.iter().map(|t| parse_token(t.as_ref())).collect()
}

fn read_input(input: &Input) -> Result<Vec<i64>, CliError> {
    match (&input.file, input.generators.is_empty()) {
        (Some(_), false) => Err(CliError::Usage(
            "give generators either inline or with --file, not both".into(),
        )),
        (None, true) => Err(CliError::Usage("no generators given".into())),
        (None, false) => parse_generator_tokens(&input.generators),
        (Some(path), true) => {
            let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
                path: path.clone(),
                source,
            })?;
            parse_generator_text(&text)
        }
    }
}

pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

/// [`run`] with explicit data and diagnostic streams.
pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                let _ = write!(err, "{e}");
                1
            } else {
                let _ = write!(out, "{e}");
                0
            };
            return code;
        }
    };
    match execute(&cli, out, err) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

struct Session {
    g: GeneratorSet,
    opts: ScanOptions,
}

impl Session {
    fn new(cli: &Cli, raw: &[i64]) -> Result<Self, CliError> {
        let mut g = GeneratorSet::normalize(raw)?;
        if let Some(i) = cli.param_index {
            g = g.with_param_index(i)?;
        }
        Ok(Session {
            g,
            opts: ScanOptions {
                threads: cli.threads.max(1),
                level_cap: cli.level_cap,
            },
        })
    }

    fn table(&self, err: &mut dyn Write) -> Result<AperyTable, CliError> {
        let t = apery::compute_apery_with(&self.g, &self.opts)?;
        if t.stop_reason() == apery::StopReason::LevelCap {
            let _ = writeln!(
                err,
                "warning: scan stopped at --level-cap {}; results are not certified",
                t.levels_scanned()
            );
        }
        Ok(t)
    }

    fn header(&self) -> serde_json::Map<String, Value> {
        let g = &self.g;
        let mut m = serde_json::Map::new();
        m.insert(
            "generators".into(),
            json!({ "raw": g.raw(), "sorted": g.sorted(), "reduced": g.reduced() }),
        );
        m.insert("lambda".into(), json!(g.lambda()));
        m.insert("param_index".into(), json!(g.param_index()));
        m.insert("parameter".into(), json!(g.sorted()[g.param_index()]));
        m
    }
}

fn monomial_json(k: &ExponentVector) -> Value {
    json!({ "exponents": k, "monomial": k.to_monomial_string() })
}

fn binomial_json(b: &Binomial) -> Value {
    json!({
        "lead": monomial_json(&b.lead),
        "e": b.tail_param_exp,
        "tail": monomial_json(&b.tail_witness),
        "tail_monomial": b.tail_monomial().to_string(),
        "binomial": b.to_string(),
    })
}

fn emit(
    out: &mut dyn Write,
    mut header: serde_json::Map<String, Value>,
    key: &str,
    payload: Value,
) -> Result<(), CliError> {
    header.insert(key.into(), payload);
    let _ = writeln!(out, "{}", Value::Object(header));
    Ok(())
}

fn apery_json(g: &GeneratorSet, t: &AperyTable) -> Value {
    let slots: Vec<Value> = t
        .slots()
        .map(|s| {
            json!({
                "residue": s.residue,
                "value": s.value as u128 * g.lambda() as u128,
                "witness": monomial_json(&ExponentVector::new(s.witness.to_vec())),
            })
        })
        .collect();
    Value::Array(slots)
}

fn execute(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    let json = cli.format == Format::Json;
    match &cli.command {
        Command::Frobenius(input) => {
            let s = Session::new(cli, &read_input(input)?)?;
            let g_num = apery::frobenius(&s.table(err)?)?;
            if json {
                emit(out, s.header(), "frobenius", json!(g_num))?;
            } else {
                let _ = writeln!(out, "{g_num}");
            }
        }
        Command::Apery(input) => {
            let s = Session::new(cli, &read_input(input)?)?;
            let t = s.table(err)?;
            let frob = apery::frobenius(&t)?;
            if json {
                let mut h = s.header();
                h.insert("levels_scanned".into(), json!(t.levels_scanned()));
                h.insert("stop_reason".into(), json!(t.stop_reason()));
                h.insert(
                    "max_element".into(),
                    json!(t.max_value() as u128 * t.lambda() as u128),
                );
                h.insert("frobenius".into(), json!(frob));
                emit(out, h, "apery", apery_json(&s.g, &t))?;
            } else {
                for slot in t.slots() {
                    let w = ExponentVector::new(slot.witness.to_vec());
                    let _ = writeln!(
                        out,
                        "{}\t{}\t{}",
                        slot.residue,
                        slot.value as u128 * t.lambda() as u128,
                        w
                    );
                }
                let _ = writeln!(
                    err,
                    "frobenius {frob}, levels scanned {}",
                    t.levels_scanned()
                );
            }
        }
        Command::Member { value, input } => {
            let s = Session::new(cli, &read_input(input)?)?;
            let t = s.table(err)?;
            let cert = apery::is_member(&t, &s.g, *value)?;
            if json {
                let mut h = s.header();
                h.insert("query".into(), json!(value));
                emit(out, h, "membership", json!(cert))?;
            } else {
                match &cert {
                    MembershipCertificate::Member { representation } => {
                        let terms: Vec<String> = representation
                            .iter()
                            .zip(s.g.sorted())
                            .map(|(k, a)| format!("{k}*{a}"))
                            .collect();
                        let _ = writeln!(out, "yes {value} = {}", terms.join(" + "));
                    }
                    MembershipCertificate::NotMember { blocking: Some(h) } => {
                        let _ = writeln!(out, "no (smallest element of its class is {h})");
                    }
                    MembershipCertificate::NotMember { blocking: None } => {
                        let _ = writeln!(out, "no (not a multiple of {})", s.g.lambda());
                    }
                }
            }
        }
        Command::Standard(input) => {
            let s = Session::new(cli, &read_input(input)?)?;
            let std = grobner::standard_monomials(&s.table(err)?);
            monomial_list(out, json, s.header(), "standard", &std)?;
        }
        Command::Initial(input) => {
            let s = Session::new(cli, &read_input(input)?)?;
            let t = s.table(err)?;
            let gens = grobner::initial_ideal(&s.g, &t)?;
            monomial_list(out, json, s.header(), "initial", &gens)?;
        }
        Command::Groebner(input) => {
            let s = Session::new(cli, &read_input(input)?)?;
            let t = s.table(err)?;
            let gb = grobner::groebner_basis(&s.g, &t)?;
            if json {
                emit(
                    out,
                    s.header(),
                    "groebner",
                    gb.iter().map(binomial_json).collect(),
                )?;
            } else {
                for b in &gb {
                    let _ = writeln!(out, "{b}");
                }
                let _ = writeln!(err, "{} binomials", gb.len());
            }
        }
        Command::Hilbert(input) => {
            let s = Session::new(cli, &read_input(input)?)?;
            let h = apery::hilbert_series(&s.table(err)?)?;
            if json {
                emit(out, s.header(), "hilbert", json!(h))?;
            } else {
                let num: Vec<String> = h
                    .numerator_exponents
                    .iter()
                    .map(|e| format!("u^{e}"))
                    .collect();
                let _ = writeln!(
                    out,
                    "({}) / (1 - u^{})",
                    num.join(" + "),
                    h.denominator_exponent
                );
                let _ = writeln!(out, "degree {}", h.degree);
            }
        }
        Command::Decompose(input) => {
            let s = Session::new(cli, &read_input(input)?)?;
            let t = s.table(err)?;
            let degs = apery::module_decomposition(&t)?;
            if json {
                emit(out, s.header(), "decomposition", json!(degs))?;
            } else {
                let a1 = t.base() as u128 * t.lambda() as u128;
                let parts: Vec<String> = degs.iter().map(|d| format!("K[t^{a1}]·t^{d}")).collect();
                let _ = writeln!(out, "{}", parts.join(" ⊕ "));
            }
        }
        Command::N3(input) => {
            let raw = read_input(input)?;
            let &[a, b, c] = raw.as_slice() else {
                return Err(CliError::Input(Error::DegenerateInput(format!(
                    "n3 needs exactly 3 generators, got {}",
                    raw.len()
                ))));
            };
            for x in [a, b, c] {
                if x <= 0 {
                    return Err(Error::NonPositiveGenerator(x).into());
                }
            }
            let r = euclid3::gb3(a as u64, b as u64, c as u64)?;
            if r.fallback {
                let _ = writeln!(
                    err,
                    "warning: closed form failed its count check; used the general engine"
                );
            }
            if json {
                let t = &r.table;
                let payload = json!({
                    "generators": [a, b, c],
                    "q": t.q, "s": t.s, "p": t.p, "r": t.r, "mu": t.mu,
                    "groebner": r.binomials.iter().map(binomial_json).collect::<Vec<_>>(),
                    "standard": r.staircase.standard.iter().map(monomial_json).collect::<Vec<_>>(),
                    "initial": r.staircase.generators.iter().map(monomial_json).collect::<Vec<_>>(),
                    "frobenius": r.frobenius,
                    "fallback": r.fallback,
                });
                let _ = writeln!(out, "{payload}");
            } else {
                let t = &r.table;
                let _ = writeln!(
                    out,
                    "s = {:?}\np = {:?}\nr = {:?}\nmu = {}",
                    t.s, t.p, t.r, t.mu
                );
                for bn in &r.binomials {
                    let _ = writeln!(out, "{bn}");
                }
                let _ = writeln!(out, "staircase size {}", r.staircase.standard.len());
                let _ = writeln!(out, "frobenius {}", r.frobenius);
            }
        }
        Command::Verify { input, spairs } => {
            let s = Session::new(cli, &read_input(input)?)?;
            let report = verify(&s, *spairs, err)?;
            if json {
                emit(out, s.header(), "verification", json!(report))?;
            } else {
                for c in &report.checks {
                    let _ = writeln!(
                        out,
                        "{} {}: {}",
                        if c.passed { "PASS" } else { "FAIL" },
                        c.name,
                        c.detail
                    );
                }
            }
            if !report.overall {
                return Err(CliError::Verification);
            }
        }
        Command::Bench {
            input,
            preset,
            repeat,
        } => {
            let raw = match preset {
                Some(Preset::Paper17) => {
                    if !input.generators.is_empty() || input.file.is_some() {
                        return Err(CliError::Usage(
                            "--preset replaces the generator list".into(),
                        ));
                    }
                    PAPER17.to_vec()
                }
                None => read_input(input)?,
            };
            let s = Session::new(cli, &raw)?;
            let mut runs = Vec::new();
            let mut summary = Value::Null;
            for _ in 0..(*repeat).max(1) {
                let start = Instant::now();
                let t = s.table(err)?;
                let apery_time = start.elapsed();
                let gb = grobner::groebner_basis(&s.g, &t)?;
                let total = start.elapsed();
                runs.push(json!({
                    "apery_ms": apery_time.as_secs_f64() * 1e3,
                    "total_ms": total.as_secs_f64() * 1e3,
                }));
                summary = json!({
                    "levels_scanned": t.levels_scanned(),
                    "stop_reason": t.stop_reason(),
                    "apery_size": t.len(),
                    "max_element": t.max_value() as u128 * t.lambda() as u128,
                    "frobenius": apery::frobenius(&t)?,
                    "groebner_size": gb.len(),
                    "threads": s.opts.threads,
                });
            }
            if json {
                let mut h = s.header();
                h.insert("runs".into(), Value::Array(runs));
                emit(out, h, "bench", summary)?;
            } else {
                for (i, r) in runs.iter().enumerate() {
                    let _ = writeln!(
                        out,
                        "run {i}: apery {:.3} ms, total {:.3} ms",
                        r["apery_ms"].as_f64().unwrap_or(0.0),
                        r["total_ms"].as_f64().unwrap_or(0.0)
                    );
                }
                let _ = writeln!(out, "{summary}");
            }
        }
    }
    Ok(())
}

fn monomial_list(
    out: &mut dyn Write,
    json: bool,
    header: serde_json::Map<String, Value>,
    key: &str,
    list: &[ExponentVector],
) -> Result<(), CliError> {
    if json {
        emit(out, header, key, list.iter().map(monomial_json).collect())
    } else {
        for m in list {
            let _ = writeln!(out, "{m}");
        }
        Ok(())
    }
}

/// Engine versus oracles: Apéry values, membership up to
/// `g + a1 + max generator`, and the Gröbner structure checks.
pub fn verify_session(
    g: &GeneratorSet,
    opts: &ScanOptions,
    spairs: bool,
) -> Result<oracle::VerificationReport, Error> {
    let t = apery::compute_apery_with(g, opts)?;
    let gb = grobner::groebner_basis(g, &t)?;
    let run_spairs = spairs || t.base() <= SPAIR_AUTO_LIMIT;
    let mut report = oracle::verify_groebner(g, &gb, &t, run_spairs);

    let path = oracle::apery_shortest_path(g)?;
    let apery_ok = path == t.values();
    report.checks.push(oracle::Check {
        name: "apery_vs_shortest_path".into(),
        passed: apery_ok,
        detail: if apery_ok {
            "ok".into()
        } else {
            "tables differ".into()
        },
    });
    report.overall &= apery_ok;

    let frob = apery::frobenius(&t)?;
    let bound = (frob.max(0) as u64)
        .checked_add(g.sorted()[g.param_index()])
        .and_then(|b| b.checked_add(*g.sorted().last().expect("nonempty")))
        .ok_or(Error::Overflow("membership bound"))?;
    let check = if bound > DP_LIMIT {
        oracle::Check {
            name: "membership_vs_dp".into(),
            passed: true,
            detail: format!("skipped: bound {bound} above {DP_LIMIT}"),
        }
    } else {
        let reach = oracle::reachability(g, bound);
        let mut bad = None;
        for b in 0..=bound {
            let cert = apery::is_member(&t, g, b as i64)?;
            let ok = cert.is_member() == reach[b as usize]
                && match &cert {
                    MembershipCertificate::Member { representation } => {
                        representation
                            .iter()
                            .zip(g.sorted())
                            .map(|(&k, &a)| k as u128 * a as u128)
                            .sum::<u128>()
                            == b as u128
                    }
                    MembershipCertificate::NotMember { .. } => true,
                };
            if !ok {
                bad = Some(b);
                break;
            }
        }
        oracle::Check {
            name: "membership_vs_dp".into(),
            passed: bad.is_none(),
            detail: match bad {
                None => format!("ok up to {bound}"),
                Some(b) => format!("disagreement at {b}"),
            },
        }
    };
    report.overall &= check.passed;
    report.checks.push(check);

    let h = apery::hilbert_series(&t)?;
    let counts_ok = grobner::standard_monomials(&t).len() as u64 == t.base() && h.degree == frob;
    report.checks.push(oracle::Check {
        name: "structural_counts".into(),
        passed: counts_ok,
        detail: if counts_ok {
            "ok".into()
        } else {
            "count or degree mismatch".into()
        },
    });
    report.overall &= counts_ok;

    // normal forms of the leads reproduce the tails
    let nf_ok = gb.iter().all(|b| {
        grobner::normal_form(g, &t, &Monomial::new(0, b.lead.clone()))
            .map(|(e, w)| e == b.tail_param_exp && w == b.tail_witness)
            .unwrap_or(false)
    });
    report.checks.push(oracle::Check {
        name: "normal_forms".into(),
        passed: nf_ok,
        detail: if nf_ok {
            "ok".into()
        } else {
            "lead normal form differs from tail".into()
        },
    });
    report.overall &= nf_ok;
    Ok(report)
}

fn verify(
    s: &Session,
    spairs: bool,
    _err: &mut dyn Write,
) -> Result<oracle::VerificationReport, CliError> {
    Ok(verify_session(&s.g, &s.opts, spairs)?)
}

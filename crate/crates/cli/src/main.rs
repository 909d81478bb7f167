//! `dioph`: command-line front door for the approximation pipelines.
//!
//! Every subcommand prints one JSON report (or CSV plot data) to stdout or
//! `--out`. Numbers are serialized as decimal strings. Exit codes: 0 success,
//! 2 validation failure, 3 precision/budget exhaustion, 4 audit mismatch.

use std::fmt::Write as _;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use serde_json::{json, Value};

use dioph_core::bounds::{self, ExponentPoint};
use dioph_core::constants::{self, Certificate};
use dioph_core::exponents;
use dioph_core::psi::{self, EngineConfig, RecordSequence, Variant, Witness};
use dioph_core::theta::{default_precision_bits, GeneratorKind, ThetaPair};
use dioph_core::{maxmin, rat};

/// Decimal digits used when serializing exact rationals.
const DIGITS: u32 = 30;

#[derive(Parser)]
#[command(name = "dioph", version, about = "Diophantine approximation pipelines with positive integers")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    Plain,
    Star,
    Plus,
}

impl VariantArg {
    fn to_variant(self) -> Variant {
        match self {
            VariantArg::Plain => Variant::Plain,
            VariantArg::Star => Variant::Star,
            VariantArg::Plus => Variant::Plus,
        }
    }
    fn as_str(self) -> &'static str {
        match self {
            VariantArg::Plain => "plain",
            VariantArg::Star => "star",
            VariantArg::Plus => "plus",
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputArg {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Cmd {
    /// Record sequence of one approximation variant up to height T.
    Psi {
        /// Pair spec: rational:P1/Q1,P2/Q2 | quadratic:D1,D2 | random:SEED |
        /// liouville:LAMBDA,BASE | literal:DEC1,DEC2
        #[arg(long)]
        theta: String,
        #[arg(long, short = 'T')]
        t: u64,
        #[arg(long, value_enum, default_value = "plain")]
        variant: VariantArg,
        #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
        allow_zero: bool,
        #[arg(long)]
        precision_bits: Option<u32>,
        #[arg(long, value_enum, default_value = "json")]
        output: OutputArg,
        #[arg(long)]
        out: Option<std::path::PathBuf>,
    },
    /// Empirical exponent table (all three variants) for one pair.
    Exponents {
        #[arg(long)]
        theta: String,
        #[arg(long, short = 'T')]
        t: u64,
        #[arg(long, default_value_t = 0.5)]
        tail_fraction: f64,
        #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
        allow_zero: bool,
        #[arg(long)]
        precision_bits: Option<u32>,
        #[arg(long)]
        out: Option<std::path::PathBuf>,
    },
    /// Closed-form lower bounds at a point (omega, omega_hat).
    Bounds {
        /// omega, or "inf"
        #[arg(long)]
        omega: String,
        #[arg(long)]
        omega_hat: f64,
        /// Optional omega_star for the Thurnheer bound.
        #[arg(long)]
        omega_star: Option<f64>,
        #[arg(long)]
        out: Option<std::path::PathBuf>,
    },
    /// Exact LP verification of the max-min inequality vs the closed form.
    Maxmin {
        /// Rational omega, e.g. 31103/10000
        #[arg(long)]
        omega: String,
        #[arg(long)]
        omega_hat: String,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long)]
        out: Option<std::path::PathBuf>,
    },
    /// Audit the counterexample constants against their printed values.
    AuditCounterexample {
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        #[arg(long)]
        out: Option<std::path::PathBuf>,
    },
    /// Check a positive lower-bound certificate over a height window.
    Certificate {
        #[arg(long)]
        theta: String,
        /// Rational exponent gamma, e.g. 2 or 39/20
        #[arg(long)]
        exponent: String,
        /// log2 of the constant c (reference scale: -300)
        #[arg(long, default_value_t = -300)]
        constant_log2: i64,
        #[arg(long, default_value_t = 1)]
        m_min: u64,
        #[arg(long)]
        m_max: u64,
        #[arg(long)]
        precision_bits: Option<u32>,
        #[arg(long)]
        out: Option<std::path::PathBuf>,
    },
    /// Construct a generator-backed pair and print its enclosures.
    Forge {
        #[arg(long)]
        theta: String,
        #[arg(long, default_value_t = 128)]
        precision_bits: u32,
        #[arg(long)]
        out: Option<std::path::PathBuf>,
    },
}

enum CliError {
    Validation(String),
    Exhausted(String),
}

impl From<psi::PsiError> for CliError {
    fn from(e: psi::PsiError) -> Self {
        CliError::Exhausted(e.to_string())
    }
}

fn dec(r: &BigRational) -> String {
    rat::decimal_string(r, DIGITS)
}

fn dec_f64(x: f64) -> String {
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let s = format!("{x:.12}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s.is_empty() { "0".into() } else { s.to_string() }
}

fn scalar_json(s: &dioph_core::PreciseScalar) -> Value {
    json!({ "midpoint": dec(s.midpoint()), "radius": dec(s.radius()) })
}

fn witness_json(w: &Witness) -> Value {
    match w {
        Witness::Pair(m1, m2) => json!([m1, m2]),
        Witness::Single(x) => json!([x]),
    }
}

fn parse_theta(spec: &str, bits: u32) -> Result<ThetaPair, CliError> {
    let bad = |m: &str| CliError::Validation(format!("bad --theta spec {spec:?}: {m}"));
    let (kind, rest) = spec.split_once(':').ok_or_else(|| bad("expected kind:params"))?;
    let parts: Vec<&str> = rest.split(',').collect();
    let pair = match kind {
        "rational" => {
            if parts.len() != 2 {
                return Err(bad("rational needs P1/Q1,P2/Q2"));
            }
            let pq = |s: &str| -> Result<(i64, i64), CliError> {
                let (p, q) = s.split_once('/').unwrap_or((s, "1"));
                Ok((
                    p.trim().parse().map_err(|_| bad("bad numerator"))?,
                    q.trim().parse().map_err(|_| bad("bad denominator"))?,
                ))
            };
            let (p1, q1) = pq(parts[0])?;
            let (p2, q2) = pq(parts[1])?;
            ThetaPair::forge(GeneratorKind::Rational { p1, q1, p2, q2 }, bits)
        }
        "quadratic" => {
            if parts.len() != 2 {
                return Err(bad("quadratic needs D1,D2"));
            }
            let d1 = parts[0].trim().parse().map_err(|_| bad("bad d1"))?;
            let d2 = parts[1].trim().parse().map_err(|_| bad("bad d2"))?;
            ThetaPair::forge(GeneratorKind::Quadratic { d1, d2 }, bits)
        }
        "random" => {
            let seed = rest.trim().parse().map_err(|_| bad("bad seed"))?;
            ThetaPair::forge(GeneratorKind::RandomDyadic { seed }, bits)
        }
        "liouville" => {
            if parts.len() != 2 {
                return Err(bad("liouville needs LAMBDA,BASE"));
            }
            let (ln, ld) = parts[0].split_once('/').unwrap_or((parts[0], "1"));
            let lambda_num = ln.trim().parse().map_err(|_| bad("bad lambda"))?;
            let lambda_den = ld.trim().parse().map_err(|_| bad("bad lambda"))?;
            let base = parts[1].trim().parse().map_err(|_| bad("bad base"))?;
            ThetaPair::forge(GeneratorKind::Liouville { lambda_num, lambda_den, base }, bits)
        }
        "literal" => {
            if parts.len() != 2 {
                return Err(bad("literal needs DEC1,DEC2"));
            }
            ThetaPair::literal(parts[0].trim(), parts[1].trim())
        }
        other => return Err(bad(&format!("unknown kind {other:?}"))),
    };
    pair.map_err(|e| CliError::Validation(e.to_string()))
}

fn parse_big_rational(s: &str, what: &str) -> Result<BigRational, CliError> {
    rat::parse_rational(s).ok_or_else(|| CliError::Validation(format!("bad {what}: {s:?}")))
}

fn emit_plot_data(records: &RecordSequence) -> String {
    let mut out = String::from("t_start,value,log2_t_start,log2_inv_value,witness_1,witness_2\n");
    for ev in &records.events {
        let log_inv = if ev.value.is_exact_zero() {
            String::new()
        } else {
            dec_f64(-rat::to_f64(ev.value.midpoint()).log2())
        };
        let (w1, w2) = match ev.witness {
            Witness::Pair(a, b) => (a.to_string(), b.to_string()),
            Witness::Single(x) => (x.to_string(), String::new()),
        };
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            ev.t_start,
            dec(ev.value.midpoint()),
            dec_f64((ev.t_start as f64).log2()),
            log_inv,
            w1,
            w2
        );
    }
    out
}

fn audits_json(audits: &[constants::AuditEntry]) -> Value {
    Value::Array(
        audits
            .iter()
            .map(|a| {
                json!({
                    "name": a.name,
                    "computed": dec_f64(a.computed),
                    "paper_value": dec_f64(a.paper_value),
                    "abs_diff": dec_f64(a.abs_diff),
                    "pass": a.pass,
                })
            })
            .collect(),
    )
}

/// Report payload, audit-mismatch flag and optional raw (CSV) body.
struct Outcome {
    report: Value,
    audit_failed: bool,
    raw: Option<String>,
    out: Option<std::path::PathBuf>,
}

fn run(cmd: Cmd, started: Instant) -> Result<Outcome, CliError> {
    let cfg = EngineConfig::default();
    match cmd {
        Cmd::Psi { theta, t, variant, allow_zero, precision_bits, output, out } => {
            if t == 0 {
                return Err(CliError::Validation("T must be >= 1".into()));
            }
            let bits = precision_bits.unwrap_or_else(|| default_precision_bits(t));
            let pair = parse_theta(&theta, bits)?;
            let outcome = psi::accelerated_records(&pair, t, variant.to_variant(), allow_zero, &cfg)?;
            let seq = &outcome.sequence;
            if let OutputArg::Csv = output {
                return Ok(Outcome {
                    report: Value::Null,
                    audit_failed: false,
                    raw: Some(emit_plot_data(seq)),
                    out,
                });
            }
            let events: Vec<Value> = seq
                .events
                .iter()
                .map(|ev| {
                    json!({
                        "t_start": ev.t_start,
                        "value": scalar_json(&ev.value),
                        "witness": witness_json(&ev.witness),
                    })
                })
                .collect();
            let report = json!({
                "schema_version": "1",
                "command": "psi",
                "config": {
                    "theta": theta,
                    "T": t,
                    "variant": variant.as_str(),
                    "allow_zero": allow_zero,
                    "precision_bits": bits,
                    "decimal_digits": DIGITS,
                },
                "results": {
                    "events": events,
                    "fallback_used": outcome.fallback_used,
                    "ends_in_zero": seq.ends_in_zero(),
                },
                "audits": [],
                "timings_ms": { "total": dec_f64(started.elapsed().as_secs_f64() * 1e3) },
            });
            Ok(Outcome { report, audit_failed: false, raw: None, out })
        }

        Cmd::Exponents { theta, t, tail_fraction, allow_zero, precision_bits, out } => {
            if t == 0 {
                return Err(CliError::Validation("T must be >= 1".into()));
            }
            let bits = precision_bits.unwrap_or_else(|| default_precision_bits(t));
            let pair = parse_theta(&theta, bits)?;
            let table = exponents::estimate_all(&pair, t, allow_zero, tail_fraction, &cfg)
                .map_err(|e| match e {
                    exponents::ExponentError::BadTailFraction => {
                        CliError::Validation("tail fraction must lie in (0, 1]".into())
                    }
                    other => CliError::Exhausted(other.to_string()),
                })?;
            let est = |e: &exponents::ExponentEstimate| {
                json!({
                    "ordinary": dec_f64(e.ordinary),
                    "uniform": dec_f64(e.uniform),
                    "window": [e.window.0, e.window.1],
                    "truncation_flag": e.truncation_flag,
                })
            };
            let report = json!({
                "schema_version": "1",
                "command": "exponents",
                "config": {
                    "theta": theta,
                    "T": t,
                    "tail_fraction": dec_f64(tail_fraction),
                    "allow_zero": allow_zero,
                    "precision_bits": bits,
                    "decimal_digits": DIGITS,
                },
                "results": {
                    "plain": est(&table.plain),
                    "star": est(&table.star),
                    "plus": est(&table.plus),
                    "omega": dec_f64(table.omega()),
                    "omega_hat": dec_f64(table.omega_hat()),
                    "omega_star": dec_f64(table.omega_star()),
                    "omega_plus": dec_f64(table.omega_plus()),
                    "omega_hat_plus": dec_f64(table.omega_hat_plus()),
                },
                "audits": [],
                "timings_ms": { "total": dec_f64(started.elapsed().as_secs_f64() * 1e3) },
            });
            Ok(Outcome { report, audit_failed: false, raw: None, out })
        }

        Cmd::Bounds { omega, omega_hat, omega_star, out } => {
            let omega_v = if omega.trim() == "inf" {
                f64::INFINITY
            } else {
                omega.trim().parse().map_err(|_| CliError::Validation(format!("bad --omega: {omega:?}")))?
            };
            let point = ExponentPoint::new(omega_v, omega_hat);
            let mut rep = bounds::theorem2_bound(&point)
                .map_err(|e| CliError::Validation(e.to_string()))?;
            if let Some(ws) = omega_star {
                rep.thurnheer = Some(
                    bounds::thurnheer_bound(ws).map_err(|e| CliError::Validation(e.to_string()))?,
                );
            }
            let report = json!({
                "schema_version": "1",
                "command": "bounds",
                "config": {
                    "omega": dec_f64(omega_v),
                    "omega_hat": dec_f64(omega_hat),
                    "omega_star": omega_star.map(dec_f64),
                    "decimal_digits": DIGITS,
                },
                "results": {
                    "region": rep.region.as_str(),
                    "schmidt_combined": dec_f64(rep.schmidt_combined),
                    "uniform_plus": dec_f64(rep.uniform_plus),
                    "g_value": dec_f64(rep.g_value),
                    "ooa_value": dec_f64(rep.ooa_value),
                    "theorem2": dec_f64(rep.theorem2),
                    "thurnheer": rep.thurnheer.map(dec_f64),
                },
                "audits": [],
                "timings_ms": { "total": dec_f64(started.elapsed().as_secs_f64() * 1e3) },
            });
            Ok(Outcome { report, audit_failed: false, raw: None, out })
        }

        Cmd::Maxmin { omega, omega_hat, tol, out } => {
            let omega = parse_big_rational(&omega, "--omega")?;
            let omega_hat = parse_big_rational(&omega_hat, "--omega-hat")?;
            let rep = maxmin::compare_closed_form(&omega, &omega_hat, tol).map_err(|e| match e {
                maxmin::MaxMinError::NotAdmissible | maxmin::MaxMinError::BadExponent(_) => {
                    CliError::Validation(e.to_string())
                }
                other => CliError::Exhausted(other.to_string()),
            })?;
            let report = json!({
                "schema_version": "1",
                "command": "maxmin",
                "config": {
                    "omega": dec(&omega),
                    "omega_hat": dec(&omega_hat),
                    "tol": dec_f64(tol),
                    "decimal_digits": DIGITS,
                },
                "results": {
                    "region": rep.region.as_str(),
                    "lp_value": dec_f64(rep.lp_value),
                    "closed_form_value": dec_f64(rep.closed_form_value),
                },
                "audits": [{
                    "name": "maxmin_vs_closed_form",
                    "computed": dec_f64(rep.lp_value),
                    "paper_value": dec_f64(rep.closed_form_value),
                    "abs_diff": dec_f64(rep.abs_diff),
                    "pass": rep.pass,
                }],
                "timings_ms": { "total": dec_f64(started.elapsed().as_secs_f64() * 1e3) },
            });
            Ok(Outcome { report, audit_failed: !rep.pass, raw: None, out })
        }

        Cmd::AuditCounterexample { tol, out } => {
            let cc = constants::counterexample_constants(tol)
                .map_err(|e| CliError::Exhausted(e.to_string()))?;
            let audit_failed = cc.any_audit_failed() || !cc.identity_ok || !cc.admissible;
            let report = json!({
                "schema_version": "1",
                "command": "audit-counterexample",
                "config": { "tol": dec_f64(tol), "decimal_digits": DIGITS },
                "results": {
                    "sigma": scalar_json(&cc.sigma.enclosure),
                    "sigma_bracket": [dec(&cc.sigma.bracket.0), dec(&cc.sigma.bracket.1)],
                    "omega": scalar_json(&cc.omega),
                    "omega_hat": scalar_json(&cc.omega_hat),
                    "omega_plus_claim": scalar_json(&cc.omega_plus_claim),
                    "paper_ooa_value": scalar_json(&cc.paper_ooa_value),
                    "ooa_recomputed": scalar_json(&cc.ooa_recomputed),
                    "region": cc.region.as_str(),
                    "admissible": cc.admissible,
                    "identity_ok": cc.identity_ok,
                },
                "audits": audits_json(&cc.audits),
                "timings_ms": { "total": dec_f64(started.elapsed().as_secs_f64() * 1e3) },
            });
            Ok(Outcome { report, audit_failed, raw: None, out })
        }

        Cmd::Certificate { theta, exponent, constant_log2, m_min, m_max, precision_bits, out } => {
            let bits = precision_bits.unwrap_or_else(|| default_precision_bits(m_max.max(2)));
            let pair = parse_theta(&theta, bits)?;
            let exponent = parse_big_rational(&exponent, "--exponent")?;
            if exponent <= rat::big(1) {
                return Err(CliError::Validation("exponent must be > 1".into()));
            }
            let cert = Certificate { pair, exponent: exponent.clone(), constant_log2, range: (m_min, m_max) };
            let rep = constants::verify_certificate(&cert).map_err(|e| match e {
                constants::ConstantsError::BudgetExceeded(_)
                | constants::ConstantsError::PrecisionExhausted(_, _) => {
                    CliError::Exhausted(e.to_string())
                }
                other => CliError::Validation(other.to_string()),
            })?;
            let violations: Vec<Value> = rep
                .violations
                .iter()
                .map(|(m1, m2, v)| json!({ "m1": m1, "m2": m2, "value": scalar_json(v) }))
                .collect();
            let report = json!({
                "schema_version": "1",
                "command": "certificate",
                "config": {
                    "theta": theta,
                    "exponent": dec(&exponent),
                    "constant_log2": constant_log2,
                    "m_min": m_min,
                    "m_max": m_max,
                    "precision_bits": bits,
                    "decimal_digits": DIGITS,
                },
                "results": {
                    "holds": rep.holds,
                    "violations": violations,
                    "candidates_checked": rep.candidates_checked.to_string(),
                },
                "audits": [],
                "timings_ms": { "total": dec_f64(started.elapsed().as_secs_f64() * 1e3) },
            });
            Ok(Outcome { report, audit_failed: false, raw: None, out })
        }

        Cmd::Forge { theta, precision_bits, out } => {
            let pair = parse_theta(&theta, precision_bits)?;
            let report = json!({
                "schema_version": "1",
                "command": "forge",
                "config": { "theta": theta, "precision_bits": precision_bits, "decimal_digits": DIGITS },
                "results": {
                    "theta1": scalar_json(pair.theta1()),
                    "theta2": scalar_json(pair.theta2()),
                },
                "audits": [],
                "timings_ms": { "total": dec_f64(started.elapsed().as_secs_f64() * 1e3) },
            });
            Ok(Outcome { report, audit_failed: false, raw: None, out })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let started = Instant::now();
    match run(cli.cmd, started) {
        Ok(outcome) => {
            let body = match &outcome.raw {
                Some(csv) => csv.clone(),
                None => {
                    let mut s = serde_json::to_string_pretty(&outcome.report).expect("serializable");
                    s.push('\n');
                    s
                }
            };
            if let Some(path) = &outcome.out {
                if let Err(e) = std::fs::write(path, &body) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return ExitCode::from(2);
                }
            } else {
                print!("{body}");
            }
            if outcome.audit_failed {
                ExitCode::from(4)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(CliError::Validation(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Exhausted(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}

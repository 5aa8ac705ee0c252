//! The `alphanum` command line.
//!
//! [`run_command`] parses an argument vector, runs the library operation and
//! returns the exit code with the bytes meant for stdout and stderr, so the
//! binary is a thin wrapper and tests need no subprocess.

mod report;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigUint;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

pub use report::{
    canonical, canonical_bytes, csv_bytes, digest, emit_report, table_bytes, Format, Report,
    AUDIT_COLUMNS, RECORD_COLUMNS,
};

use crate::classifier::{Order, Variant, Verdict};
use crate::error::{Error, Result};
use crate::exact_arith::{factorize, sigma_k_exact};
use crate::hyper_arith::{rounded_modulus, sigma_general, Precision, Quaternion, RoundMode};
use crate::search::{
    audit_tables, count_alpha_with, cross_check_odd, enumerate_alpha_with, generator_table,
    make_record, seed_search_odd_stats, verify_with_sieve, AuditStatus, Parity, TheoremId,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_MISMATCH: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;

/// Provenance attached to every JSON result.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub parameters: BTreeMap<String, String>,
    pub tool_version: String,
    pub duration_ms: u64,
    /// Hex SHA-256 of the canonical `result` encoding.
    pub result_digest: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CommandOutput {
    pub exit_code: i32,
    pub stdout: Vec<u8>,
    pub stderr: Vec<u8>,
}

impl CommandOutput {
    pub fn stdout_text(&self) -> String {
        String::from_utf8_lossy(&self.stdout).into_owned()
    }
}

#[derive(Parser, Debug)]
#[command(name = "alphanum", version, about = "Divisor sums and @-number classification")]
struct Cli {
    /// Canonical JSON with a run manifest.
    #[arg(long, global = true, conflicts_with = "csv")]
    json: bool,

    /// CSV output.
    #[arg(long, global = true)]
    csv: bool,

    /// Floating tolerances: `eps_rel[,boundary_eps]`.
    #[arg(long, global = true, value_name = "EPS[,BOUNDARY]")]
    precision: Option<String>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct OrderArgs {
    /// Integer order `a,b`.
    #[arg(long, value_name = "A,B", conflicts_with_all = ["under", "upper"])]
    order: Option<String>,

    /// Quaternion exponent of σ, e.g. `0.5`, `i`, `1+2i-j`.
    #[arg(long, allow_hyphen_values = true)]
    under: Option<String>,

    /// Quaternion power of n.
    #[arg(long, allow_hyphen_values = true)]
    upper: Option<String>,

    /// exact, floored or ceiled.
    #[arg(long, default_value = "exact")]
    variant: String,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// σ_x(n) for a quaternion exponent.
    Sigma {
        n: String,
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        exponent: String,
    },
    /// Classify one integer.
    Classify {
        n: String,
        #[command(flatten)]
        order: OrderArgs,
    },
    /// List @-numbers up to a bound.
    Enumerate {
        #[arg(long, value_parser = parse_bound)]
        bound: u64,
        #[command(flatten)]
        order: OrderArgs,
        /// Comma-separated verdicts.
        #[arg(long, default_value = "strong,weak,very-weak")]
        classes: String,
        #[arg(long, default_value = "all")]
        parity: String,
    },
    /// Tally verdicts up to a bound.
    Count {
        #[arg(long, value_parser = parse_bound)]
        bound: u64,
        #[command(flatten)]
        order: OrderArgs,
        #[arg(long, default_value = "all")]
        parity: String,
    },
    /// Seed-pruned search for odd strong numbers of order (1,1).
    SearchOdd {
        #[arg(long, value_parser = parse_bound, default_value = "100000")]
        bound: u64,
        /// Also run the sieve and compare.
        #[arg(long)]
        cross_check: bool,
    },
    /// Exhaustively check a theorem, or `all`.
    Verify {
        id: String,
        #[arg(long, value_parser = parse_bound)]
        bound: Option<u64>,
    },
    /// Recompute the reference tables.
    AuditTables,
}

/// Accepts `100000`, `100_000` and `1e5`.
fn parse_bound(s: &str) -> std::result::Result<u64, String> {
    let t = s.trim().replace('_', "");
    if let Ok(v) = t.parse::<u64>() {
        return Ok(v);
    }
    if let Some((m, e)) = t.split_once(['e', 'E']) {
        if let (Ok(m), Ok(e)) = (m.parse::<u64>(), e.parse::<u32>()) {
            if let Some(v) = 10u64.checked_pow(e).and_then(|p| p.checked_mul(m)) {
                return Ok(v);
            }
        }
    }
    Err(format!("{s:?} is not a nonnegative integer"))
}

/// Default bound per theorem when `--bound` is absent.
pub fn default_theorem_bound(id: TheoremId) -> u64 {
    match id {
        TheoremId::T3_1r | TheoremId::T3_8 => 100_000,
        TheoremId::T3_10 => 10_000,
        _ => 1_000_000,
    }
}

fn parse_precision(s: Option<&str>) -> Result<Precision> {
    let Some(s) = s else {
        return Ok(Precision::default());
    };
    let num = |t: &str| {
        t.trim()
            .parse::<f64>()
            .map_err(|_| Error::InvalidPrecision(format!("{t:?} is not a number")))
    };
    match s.split_once(',') {
        Some((a, b)) => Precision::new(num(a)?, num(b)?),
        None => Precision::new(num(s)?, Precision::default().boundary_eps),
    }
}

fn parse_n(s: &str) -> Result<BigUint> {
    s.trim()
        .replace('_', "")
        .parse::<BigUint>()
        .map_err(|_| Error::Parse(format!("{s:?} is not a positive integer")))
}

fn resolve_order(a: &OrderArgs) -> Result<(Order, Variant)> {
    let variant: Variant = a.variant.parse()?;
    let order = match (&a.order, &a.under, &a.upper) {
        (Some(o), _, _) => o.parse()?,
        (None, None, None) => Order::integer(1, 1),
        (None, under, upper) => {
            let q = |s: &Option<String>| -> Result<Quaternion> {
                s.as_deref().map_or(Ok(Quaternion::ONE), str::parse)
            };
            Order::general(q(under)?, q(upper)?)?
        }
    };
    Ok((order, variant))
}

fn parse_classes(s: &str) -> Result<Vec<Verdict>> {
    if s.trim().eq_ignore_ascii_case("all") {
        return Ok(vec![Verdict::Strong, Verdict::Weak, Verdict::VeryWeak, Verdict::NotAlpha]);
    }
    s.split(',').map(str::parse).collect()
}

fn exit_for(err: &Error) -> i32 {
    if err.is_resource() {
        EXIT_RESOURCE
    } else {
        EXIT_USAGE
    }
}

/// What a subcommand produced before encoding.
struct Outcome {
    command: &'static str,
    parameters: BTreeMap<String, String>,
    result: Value,
    human: Vec<u8>,
    csv: Vec<u8>,
    exit_code: i32,
}

fn params<const N: usize>(pairs: [(&str, String); N]) -> BTreeMap<String, String> {
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

fn order_params(order: &Order, variant: Variant) -> [(&'static str, String); 2] {
    [("order", order.to_string()), ("variant", variant.to_string())]
}

fn lines(text: String) -> Vec<u8> {
    text.into_bytes()
}

fn run_sigma(n: &str, exponent: &str, prec: &Precision) -> Result<Outcome> {
    let n = parse_n(n)?;
    let f = factorize(&n)?;
    let x: Quaternion = exponent.parse()?;
    let mut result = BTreeMap::new();
    result.insert("n".to_string(), json!(n.to_string()));
    result.insert("exponent".to_string(), json!(x.to_string()));
    let mut pairs = BTreeMap::new();
    pairs.insert("n".to_string(), n.to_string());
    pairs.insert("exponent".to_string(), x.to_string());
    if let Some(k) = x.as_nonneg_integer() {
        let exact = sigma_k_exact(&f, k).to_string();
        result.insert("exact".to_string(), json!(exact));
        pairs.insert("exact".to_string(), exact);
    }
    let v = sigma_general(&f, x, prec)?;
    let floor = rounded_modulus(v, RoundMode::Floor, prec)?;
    let ceil = rounded_modulus(v, RoundMode::Ceiling, prec)?;
    result.insert("value".to_string(), canonical(&v));
    result.insert("modulus".to_string(), json!(v.norm()));
    result.insert("floor".to_string(), json!(floor.value.to_string()));
    result.insert("ceiling".to_string(), json!(ceil.value.to_string()));
    result.insert("boundary_flag".to_string(), json!(floor.boundary || ceil.boundary));
    pairs.insert("value".to_string(), v.to_string());
    pairs.insert("modulus".to_string(), v.norm().to_string());
    pairs.insert("floor".to_string(), floor.value.to_string());
    pairs.insert("ceiling".to_string(), ceil.value.to_string());
    Ok(Outcome {
        command: "sigma",
        parameters: params([("n", n.to_string()), ("exponent", x.to_string())]),
        result: canonical(&result),
        human: report::pairs_bytes(&pairs, Format::Table),
        csv: report::pairs_bytes(&pairs, Format::Csv),
        exit_code: EXIT_OK,
    })
}

fn run_classify(n: &str, order_args: &OrderArgs, prec: &Precision) -> Result<Outcome> {
    let n = parse_n(n)?;
    let f = factorize(&n)?;
    let (order, variant) = resolve_order(order_args)?;
    let record = make_record(&f, &order, variant, prec)?;
    let records = std::slice::from_ref(&record);
    let c = &record.classification;
    let mut human = emit_report(Report::Records(records), Format::Table);
    human.extend(lines(format!(
        "{} ({},{}){}\n",
        c.verdict,
        c.ratio.num(),
        c.ratio.den(),
        if c.boundary_flag { " [near an integer boundary]" } else { "" }
    )));
    let [o, v] = order_params(&order, variant);
    Ok(Outcome {
        command: "classify",
        parameters: params([("n", n.to_string()), o, v]),
        result: json!({ "record": canonical(&record) }),
        human,
        csv: emit_report(Report::Records(records), Format::Csv),
        exit_code: EXIT_OK,
    })
}

fn run_enumerate(
    bound: u64,
    order_args: &OrderArgs,
    classes: &str,
    parity: &str,
    prec: &Precision,
) -> Result<Outcome> {
    let (order, variant) = resolve_order(order_args)?;
    let classes_v = parse_classes(classes)?;
    let parity_v: Parity = parity.parse()?;
    let records = enumerate_alpha_with(bound, &order, variant, prec, &classes_v, parity_v)?;
    let mut human = emit_report(Report::Records(&records), Format::Table);
    human.extend(lines(format!("{} found\n", records.len())));
    let [o, v] = order_params(&order, variant);
    let class_names: Vec<&str> = classes_v.iter().map(Verdict::as_str).collect();
    Ok(Outcome {
        command: "enumerate",
        parameters: params([
            ("bound", bound.to_string()),
            o,
            v,
            ("classes", class_names.join(",")),
            ("parity", parity_v.to_string()),
        ]),
        result: json!({ "count": records.len(), "records": canonical(&records) }),
        human,
        csv: emit_report(Report::Records(&records), Format::Csv),
        exit_code: EXIT_OK,
    })
}

fn run_count(bound: u64, order_args: &OrderArgs, parity: &str, prec: &Precision) -> Result<Outcome> {
    let (order, variant) = resolve_order(order_args)?;
    let parity_v: Parity = parity.parse()?;
    let c = count_alpha_with(bound, &order, variant, prec, parity_v)?;
    let pairs: BTreeMap<String, String> = [
        Verdict::Strong,
        Verdict::Weak,
        Verdict::VeryWeak,
        Verdict::NotAlpha,
    ]
    .iter()
    .map(|v| (v.to_string(), c.get(*v).to_string()))
    .collect();
    let [o, v] = order_params(&order, variant);
    Ok(Outcome {
        command: "count",
        parameters: params([("bound", bound.to_string()), o, v, ("parity", parity_v.to_string())]),
        result: canonical(&c),
        human: report::pairs_bytes(&pairs, Format::Table),
        csv: report::pairs_bytes(&pairs, Format::Csv),
        exit_code: EXIT_OK,
    })
}

fn run_search_odd(bound: u64, cross: bool) -> Result<Outcome> {
    let generators: Vec<String> = generator_table(bound).iter().map(|g| g.prime.to_string()).collect();
    let (seed, sieve, stats, agree) = if cross {
        let c = cross_check_odd(bound)?;
        let agree = c.agree();
        (c.seed, Some(c.sieve), c.stats, Some(agree))
    } else {
        let (seed, stats) = seed_search_odd_stats(bound)?;
        (seed, None, stats, None)
    };
    let mut human = format!("{} found", seed.len());
    match agree {
        Some(true) => human.push_str("; methods agree"),
        Some(false) => human.push_str(&format!(
            "; methods DISAGREE (sieve found {})",
            sieve.as_ref().map_or(0, Vec::len)
        )),
        None => {}
    }
    human.push('\n');
    let mut human = human.into_bytes();
    if !seed.is_empty() {
        human.extend(emit_report(Report::Records(&seed), Format::Table));
    }
    human.extend(lines(format!(
        "generators {}; roots {}; nodes {}; pruned {}\n",
        generators.join(","),
        stats.roots,
        stats.nodes,
        stats.pruned
    )));
    let mut result = json!({
        "bound": bound.to_string(),
        "generators": generators,
        "seed": canonical(&seed),
        "stats": canonical(&stats),
    });
    if let (Some(s), Some(a)) = (&sieve, agree) {
        result["sieve"] = canonical(s);
        result["agree"] = json!(a);
    }
    Ok(Outcome {
        command: "search-odd",
        parameters: params([("bound", bound.to_string()), ("cross_check", cross.to_string())]),
        result,
        human,
        csv: emit_report(Report::Records(&seed), Format::Csv),
        exit_code: if agree == Some(false) { EXIT_MISMATCH } else { EXIT_OK },
    })
}

fn run_verify(id: &str, bound: Option<u64>) -> Result<Outcome> {
    let ids: Vec<TheoremId> = if id.trim().eq_ignore_ascii_case("all") {
        TheoremId::ALL.to_vec()
    } else {
        vec![id.parse()?]
    };
    let bounds: Vec<u64> = ids
        .iter()
        .map(|&t| bound.unwrap_or_else(|| default_theorem_bound(t)))
        .collect();
    let top = bounds.iter().copied().max().unwrap_or(2).max(2);
    let sieve = crate::exact_arith::SieveTable::build(top)?;
    let mut reports = Vec::new();
    for (&t, &b) in ids.iter().zip(&bounds) {
        reports.push(verify_with_sieve(t, &sieve, b)?);
    }
    let failed = reports.iter().any(|r| !r.passed());
    let rows: Vec<Vec<String>> = reports
        .iter()
        .map(|r| {
            vec![
                r.id.to_string(),
                r.bound.to_string(),
                r.checked.to_string(),
                if r.passed() { "pass".into() } else { "FAIL".into() },
                r.counterexample.map_or(String::new(), |n| n.to_string()),
            ]
        })
        .collect();
    let header = ["theorem", "bound", "checked", "status", "counterexample"];
    let result: Vec<Value> = reports
        .iter()
        .map(|r| {
            json!({
                "id": r.id.as_str(),
                "bound": r.bound.to_string(),
                "checked": r.checked,
                "passed": r.passed(),
                "counterexample": r.counterexample.map(|n| n.to_string()),
            })
        })
        .collect();
    let mut p = params([("id", id.to_string())]);
    if let Some(b) = bound {
        p.insert("bound".into(), b.to_string());
    }
    Ok(Outcome {
        command: "verify",
        parameters: p,
        result: json!({ "reports": result }),
        human: table_bytes(&header, &rows),
        csv: csv_bytes(&header, &rows),
        exit_code: if failed { EXIT_MISMATCH } else { EXIT_OK },
    })
}

fn run_audit() -> Result<Outcome> {
    let rows = audit_tables()?;
    let mismatches = rows.iter().filter(|r| r.status == AuditStatus::Mismatch).count();
    let mut human = emit_report(Report::Audit(&rows), Format::Table);
    human.extend(lines(format!("{} rows, {} mismatches\n", rows.len(), mismatches)));
    Ok(Outcome {
        command: "audit-tables",
        parameters: BTreeMap::new(),
        result: json!({ "mismatches": mismatches, "rows": canonical(&rows) }),
        human,
        csv: emit_report(Report::Audit(&rows), Format::Csv),
        exit_code: if mismatches > 0 { EXIT_MISMATCH } else { EXIT_OK },
    })
}

fn dispatch(cli: &Cli) -> Result<Outcome> {
    let prec = parse_precision(cli.precision.as_deref())?;
    match &cli.command {
        Command::Sigma { n, exponent } => run_sigma(n, exponent, &prec),
        Command::Classify { n, order } => run_classify(n, order, &prec),
        Command::Enumerate {
            bound,
            order,
            classes,
            parity,
        } => run_enumerate(*bound, order, classes, parity, &prec),
        Command::Count {
            bound,
            order,
            parity,
        } => run_count(*bound, order, parity, &prec),
        Command::SearchOdd { bound, cross_check } => run_search_odd(*bound, *cross_check),
        Command::Verify { id, bound } => run_verify(id, *bound),
        Command::AuditTables => run_audit(),
    }
}

/// Parses `argv` (program name first) and runs it.
pub fn run_command<I, T>(argv: I) -> CommandOutput
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let start = Instant::now();
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string().into_bytes();
            return if e.use_stderr() {
                CommandOutput {
                    exit_code: EXIT_USAGE,
                    stdout: Vec::new(),
                    stderr: text,
                }
            } else {
                CommandOutput {
                    exit_code: EXIT_OK,
                    stdout: text,
                    stderr: Vec::new(),
                }
            };
        }
    };
    let outcome = match dispatch(&cli) {
        Ok(o) => o,
        Err(e) => {
            return CommandOutput {
                exit_code: exit_for(&e),
                stdout: Vec::new(),
                stderr: format!("error: {e}\n").into_bytes(),
            }
        }
    };
    let stdout = if cli.json {
        let manifest = RunManifest {
            command: outcome.command.to_string(),
            parameters: outcome.parameters,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            duration_ms: start.elapsed().as_millis() as u64,
            result_digest: digest(&outcome.result),
        };
        let mut b = canonical_bytes(&json!({
            "manifest": canonical(&manifest),
            "result": outcome.result,
        }));
        b.push(b'\n');
        b
    } else if cli.csv {
        outcome.csv
    } else {
        outcome.human
    };
    CommandOutput {
        exit_code: outcome.exit_code,
        stdout,
        stderr: Vec::new(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(args: &[&str]) -> CommandOutput {
        run_command(std::iter::once("alphanum").chain(args.iter().copied()))
    }

    #[test]
    fn classify_six() {
        let out = run(&["classify", "6", "--order", "1,1"]);
        assert_eq!(out.exit_code, 0);
        assert!(out.stdout_text().contains("Strong (2,1)"));
    }

    #[test]
    fn usage_errors() {
        assert_eq!(run(&["frobnicate"]).exit_code, EXIT_USAGE);
        assert_eq!(run(&["classify", "6", "--order", "1;1"]).exit_code, EXIT_USAGE);
        assert_eq!(run(&["classify", "0"]).exit_code, EXIT_USAGE);
        assert_eq!(run(&["classify", "6", "--variant", "rounded"]).exit_code, EXIT_USAGE);
        assert_eq!(run(&["--help"]).exit_code, EXIT_OK);
    }

    #[test]
    fn bound_parsing() {
        assert_eq!(parse_bound("1e5"), Ok(100_000));
        assert_eq!(parse_bound("100_000"), Ok(100_000));
        assert!(parse_bound("-4").is_err());
    }

    #[test]
    fn precision_parsing() {
        assert_eq!(parse_precision(None).unwrap(), Precision::default());
        assert_eq!(parse_precision(Some("1e-10,1e-6")).unwrap(), Precision::new(1e-10, 1e-6).unwrap());
        assert!(parse_precision(Some("1e-6,1e-10")).is_err());
    }

    #[test]
    fn general_orders() {
        let out = run(&["classify", "24", "--under", "i", "--upper", "0", "--variant", "floored"]);
        assert_eq!(out.exit_code, 0);
        assert!(out.stdout_text().contains("Weak (4,1)"), "{}", out.stdout_text());
        let out = run(&["classify", "24", "--under", "0.5", "--variant", "exact"]);
        assert_eq!(out.exit_code, EXIT_USAGE);
    }
}

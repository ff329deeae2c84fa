//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 on any mismatch, healthiness failure or
//! resource error, 2 on parse or usage errors.

pub mod warehouse;

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::denotational::{is_healthy_pair_set, is_healthy_set, TracePairSet, TraceSet};
use crate::equivalence::campaign::{
    check_terms, lemma_operands, random_terms, run_lemma_suite, CampaignReport, CaseOutcome,
    KindSelection, LemmaSuiteReport,
};
use crate::equivalence::{check_compensable, check_standard, Enumerator, Lemma, VerdictRecord};
use crate::operational::{build_lts, Explorer, LtsNode, DEFAULT_STATE_CAP};
use crate::parallel::Strategy;
use crate::parser::{parse_compensable, parse_standard};
use crate::syntax::{validate_user_term, Event, Term, TermKind};

pub const EXIT_OK: u8 = 0;
pub const EXIT_FAILURE: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

#[derive(Parser, Debug)]
#[command(name = "ccsp", version, about = "Compensating CSP semantics engine")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the trace set of a term.
    Traces(TracesArgs),
    /// Compare the derived traces of a term with its trace semantics.
    Check(CheckArgs),
    /// Write the labelled transition system of a term in dot format.
    Lts(LtsArgs),
    /// Randomized correspondence campaign.
    Prop(PropArgs),
    /// Enumerate all terms up to a number of operators.
    Enumerate(EnumerateArgs),
    /// Run a bundled example.
    Example(ExampleArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum KindArg {
    Std,
    Comp,
}

impl From<KindArg> for TermKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Std => TermKind::Standard,
            KindArg::Comp => TermKind::Compensable,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum KindsArg {
    Std,
    Comp,
    Both,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum SemanticsArg {
    Denotational,
    Operational,
    Both,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Default)]
enum Format {
    #[default]
    Text,
    Machine,
}

#[derive(Args, Debug)]
struct TermArgs {
    /// Term in concrete syntax.
    term: String,
    #[arg(long, value_enum, default_value = "std")]
    kind: KindArg,
    /// Declared alphabet; defaults to the events occurring in the term.
    #[arg(long, value_delimiter = ',')]
    alphabet: Option<Vec<String>>,
}

#[derive(Args, Debug)]
struct TracesArgs {
    #[command(flatten)]
    term: TermArgs,
    #[arg(long, value_enum, default_value = "denotational")]
    semantics: SemanticsArg,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Args, Debug)]
struct CheckArgs {
    #[command(flatten)]
    term: TermArgs,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Args, Debug)]
struct LtsArgs {
    #[command(flatten)]
    term: TermArgs,
    /// Maximum number of states.
    #[arg(long, default_value_t = DEFAULT_STATE_CAP)]
    cap: usize,
}

#[derive(Args, Debug)]
struct CampaignArgs {
    #[arg(long, value_delimiter = ',', default_value = "a,b")]
    alphabet: Vec<String>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Check terms one after another instead of in parallel.
    #[arg(long)]
    sequential: bool,
    #[arg(long, default_value_t = DEFAULT_STATE_CAP)]
    cap: usize,
}

#[derive(Args, Debug)]
struct PropArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 100)]
    cases: usize,
    #[arg(long, default_value_t = 4)]
    max_depth: usize,
    #[arg(long, value_enum, default_value = "both")]
    kind: KindsArg,
    /// Also run the decomposition lemma suites.
    #[arg(long)]
    lemmas: bool,
    /// Operand tuples per lemma.
    #[arg(long, default_value_t = 500)]
    lemma_cases: usize,
    #[command(flatten)]
    common: CampaignArgs,
}

#[derive(Args, Debug)]
struct EnumerateArgs {
    #[arg(long)]
    max_ops: usize,
    #[arg(long, value_enum, default_value = "std")]
    kind: KindArg,
    /// Bound on the operator count of each compensation pair operand.
    #[arg(long)]
    pair_operand_ops: Option<usize>,
    /// Check every enumerated term instead of printing it.
    #[arg(long)]
    check: bool,
    #[command(flatten)]
    common: CampaignArgs,
}

#[derive(Args, Debug)]
struct ExampleArgs {
    #[arg(value_enum)]
    name: ExampleName,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum ExampleName {
    Warehouse,
}

/// A failure that ends the command with a particular exit code.
struct Failure(u8, String);

type CmdResult = Result<u8, Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure(EXIT_USAGE, msg.into())
}

fn io_failure(e: std::io::Error) -> Failure {
    Failure(EXIT_FAILURE, e.to_string())
}

pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    let result = match cli.command {
        Command::Traces(a) => traces(a, out),
        Command::Check(a) => check(a, out),
        Command::Lts(a) => lts(a, out),
        Command::Prop(a) => prop(a, out),
        Command::Enumerate(a) => enumerate(a, out),
        Command::Example(a) => match a.name {
            ExampleName::Warehouse => example_warehouse(out),
        },
    };
    match result {
        Ok(code) => code,
        Err(Failure(code, msg)) => {
            let _ = writeln!(err, "error: {msg}");
            code
        }
    }
}

fn parse_alphabet(names: &[String]) -> Result<Vec<Event>, Failure> {
    let events: Vec<Event> = names
        .iter()
        .map(|n| Event::new(n.trim()).map_err(|e| usage(e.to_string())))
        .collect::<Result<_, _>>()?;
    if events.is_empty() {
        return Err(usage("alphabet must be nonempty"));
    }
    let unique: BTreeSet<&Event> = events.iter().collect();
    if unique.len() != events.len() {
        return Err(usage("alphabet lists an event twice"));
    }
    Ok(events)
}

fn parse_term(args: &TermArgs) -> Result<Term, Failure> {
    let term = match args.kind {
        KindArg::Std => parse_standard(&args.term).map(Term::Standard),
        KindArg::Comp => parse_compensable(&args.term).map(Term::Compensable),
    }
    .map_err(|e| usage(format!("cannot parse `{}`: {e}", args.term)))?;
    if let Some(names) = &args.alphabet {
        let alphabet: BTreeSet<Event> = parse_alphabet(names)?.into_iter().collect();
        let violations = validate_user_term(&term, Some(&alphabet));
        if !violations.is_empty() {
            let text: Vec<String> = violations.iter().map(|v| v.to_string()).collect();
            return Err(usage(text.join("; ")));
        }
    }
    Ok(term)
}

fn strategy(sequential: bool) -> Strategy {
    if sequential {
        Strategy::Sequential
    } else {
        Strategy::default()
    }
}

fn traces(args: TracesArgs, out: &mut dyn Write) -> CmdResult {
    let term = parse_term(&args.term)?;
    let fail = |e: &dyn std::fmt::Display| Failure(EXIT_FAILURE, e.to_string());
    let wanted: &[&str] = match args.semantics {
        SemanticsArg::Operational => &["operational"],
        SemanticsArg::Denotational => &["denotational"],
        SemanticsArg::Both => &["operational", "denotational"],
    };
    let mut healthy = true;
    for (i, which) in wanted.iter().enumerate() {
        let operational = *which == "operational";
        let (text, tokens) = match &term {
            Term::Standard(p) => {
                let set: TraceSet = if operational {
                    TraceSet((*Explorer::default().derived_traces(p).map_err(|e| fail(&e))?).clone())
                } else {
                    crate::denotational::traces_standard(p).map_err(|e| fail(&e))?
                };
                healthy &= is_healthy_set(&set);
                (set.to_string(), serde_json::to_value(set.to_tokens()).unwrap())
            }
            Term::Compensable(pp) => {
                let set: TracePairSet = if operational {
                    TracePairSet(Explorer::default().derived_pairs(pp).map_err(|e| fail(&e))?)
                } else {
                    crate::denotational::traces_compensable(pp).map_err(|e| fail(&e))?
                };
                healthy &= is_healthy_pair_set(&set);
                (set.to_string(), serde_json::to_value(set.to_tokens()).unwrap())
            }
        };
        match args.format {
            Format::Text => {
                if wanted.len() > 1 {
                    if i > 0 {
                        writeln!(out).map_err(io_failure)?;
                    }
                    writeln!(out, "{which}:").map_err(io_failure)?;
                }
                write!(out, "{text}").map_err(io_failure)?;
            }
            Format::Machine => {
                let record = json!({
                    "term": term.to_string(),
                    "kind": kind_name(term.kind()),
                    "semantics": which,
                    "traces": tokens,
                });
                writeln!(out, "{record}").map_err(io_failure)?;
            }
        }
    }
    Ok(if healthy { EXIT_OK } else { EXIT_FAILURE })
}

fn kind_name(kind: TermKind) -> &'static str {
    match kind {
        TermKind::Standard => "std",
        TermKind::Compensable => "comp",
    }
}

fn check(args: CheckArgs, out: &mut dyn Write) -> CmdResult {
    let term = parse_term(&args.term)?;
    let fail = |e: crate::equivalence::CheckError| Failure(EXIT_FAILURE, e.to_string());
    let (passed, text, record) = match &term {
        Term::Standard(p) => {
            let v = check_standard(p).map_err(fail)?;
            let ok = v.status == crate::equivalence::Status::Equal
                && is_healthy_set(&v.operational)
                && is_healthy_set(&v.denotational);
            (ok, v.to_string(), VerdictRecord::from(&v))
        }
        Term::Compensable(pp) => {
            let v = check_compensable(pp).map_err(fail)?;
            let ok = v.status == crate::equivalence::Status::Equal
                && is_healthy_pair_set(&v.operational)
                && is_healthy_pair_set(&v.denotational);
            (ok, v.to_string(), VerdictRecord::from(&v))
        }
    };
    match args.format {
        Format::Text => write!(out, "{text}"),
        Format::Machine => writeln!(out, "{}", serde_json::to_string(&record).unwrap()),
    }
    .map_err(io_failure)?;
    Ok(if passed { EXIT_OK } else { EXIT_FAILURE })
}

fn lts(args: LtsArgs, out: &mut dyn Write) -> CmdResult {
    let root = match parse_term(&args.term)? {
        Term::Standard(p) => LtsNode::Standard(p),
        Term::Compensable(pp) => LtsNode::Compensable(pp),
    };
    let lts = build_lts(root, args.cap).map_err(|e| Failure(EXIT_FAILURE, e.to_string()))?;
    out.write_all(lts.to_dot().as_bytes()).map_err(io_failure)?;
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct CaseLine<'a> {
    case: usize,
    kind: &'static str,
    status: String,
    healthy: bool,
    term: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<&'a str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    mismatch: Option<&'a VerdictRecord>,
}

fn case_line<'a>(o: &'a CaseOutcome, term: &Term) -> CaseLine<'a> {
    CaseLine {
        case: o.index,
        kind: kind_name(term.kind()),
        status: o.status.map_or("Error".to_string(), |s| s.to_string()),
        healthy: o.healthy,
        term: term.to_string(),
        error: o.error.as_deref(),
        mismatch: o.mismatch.as_deref(),
    }
}

fn write_case(out: &mut dyn Write, format: Format, o: &CaseOutcome, term: &Term) -> Result<(), Failure> {
    match format {
        Format::Text => {
            let status = o.status.map_or("Error".to_string(), |s| s.to_string());
            let health = if o.healthy { "" } else { " unhealthy" };
            writeln!(out, "case {} {} {status}{health} {term}", o.index, kind_name(term.kind()))
                .map_err(io_failure)?;
            if let Some(e) = &o.error {
                writeln!(out, "  error: {e}").map_err(io_failure)?;
            }
            if let Some(m) = &o.mismatch {
                writeln!(out, "  {}", serde_json::to_string(m).unwrap()).map_err(io_failure)?;
            }
            Ok(())
        }
        Format::Machine => {
            writeln!(out, "{}", serde_json::to_string(&case_line(o, term)).unwrap()).map_err(io_failure)
        }
    }
}

fn write_summary(out: &mut dyn Write, format: Format, label: &str, r: &CampaignReport) -> Result<(), Failure> {
    match format {
        Format::Text => writeln!(
            out,
            "{label}: {}/{} Equal, {} mismatches, {} unhealthy, {} errors, max states {}",
            r.equal, r.total, r.mismatches, r.unhealthy, r.errors, r.max_states
        ),
        Format::Machine => writeln!(out, "{}", json!({ "summary": label, "report": r })),
    }
    .map_err(io_failure)
}

fn write_lemma(out: &mut dyn Write, format: Format, r: &LemmaSuiteReport) -> Result<(), Failure> {
    match format {
        Format::Text => {
            let yes = |b: bool| if b { "yes" } else { "no" };
            let mut line = format!("lemma {}: {}/{} Equal, {} errors", r.lemma, r.equal, r.total, r.errors);
            if r.lemma == Lemma::SeqCompensable.id() {
                line += &format!(
                    " (cond true: {}, cond false: {})",
                    yes(r.coverage.cond_true),
                    yes(r.coverage.cond_false)
                );
            }
            if r.lemma == Lemma::Pair.id() {
                line += &format!(" (forward throw: {})", yes(r.coverage.forward_throw));
            }
            writeln!(out, "{line}").map_err(io_failure)?;
            for f in &r.failures {
                writeln!(out, "  {}", serde_json::to_string(f).unwrap()).map_err(io_failure)?;
            }
            Ok(())
        }
        Format::Machine => writeln!(out, "{}", serde_json::to_string(r).unwrap()).map_err(io_failure),
    }
}

fn prop(args: PropArgs, out: &mut dyn Write) -> CmdResult {
    let alphabet = parse_alphabet(&args.common.alphabet)?;
    if args.max_depth == 0 {
        return Err(usage("--max-depth must be at least 1"));
    }
    let kinds = match args.kind {
        KindsArg::Std => KindSelection::Standard,
        KindsArg::Comp => KindSelection::Compensable,
        KindsArg::Both => KindSelection::Both,
    };
    let strategy = strategy(args.common.sequential);
    let terms = random_terms(args.seed, args.cases, args.max_depth, &alphabet, kinds)
        .map_err(|e| usage(e.to_string()))?;
    let outcomes = check_terms(&terms, strategy, args.common.cap);
    for (o, t) in outcomes.iter().zip(&terms) {
        write_case(out, args.common.format, o, t)?;
    }
    let report = CampaignReport::from_outcomes(&outcomes);
    write_summary(out, args.common.format, "theorem", &report)?;
    let mut passed = report.passed();
    if args.lemmas {
        for lemma in Lemma::ALL {
            let tuples =
                lemma_operands(lemma, args.seed, args.lemma_cases, args.max_depth, &alphabet)
                    .map_err(|e| usage(e.to_string()))?;
            let r = run_lemma_suite(lemma, &tuples, strategy, args.common.cap);
            passed &= r.passed();
            write_lemma(out, args.common.format, &r)?;
        }
    }
    Ok(if passed { EXIT_OK } else { EXIT_FAILURE })
}

fn enumerate(args: EnumerateArgs, out: &mut dyn Write) -> CmdResult {
    let alphabet = parse_alphabet(&args.common.alphabet)?;
    let mut enumerator = Enumerator::new(&alphabet);
    if let Some(bound) = args.pair_operand_ops {
        enumerator = enumerator.with_pair_operand_ops(bound);
    }
    let terms = enumerator.up_to(args.max_ops, args.kind.into());
    drop(enumerator);
    if !args.check {
        for t in &terms {
            writeln!(out, "{t}").map_err(io_failure)?;
        }
        return Ok(EXIT_OK);
    }
    let outcomes = check_terms(&terms, strategy(args.common.sequential), args.common.cap);
    for o in outcomes.iter().filter(|o| !o.passed()) {
        write_case(out, args.common.format, o, &terms[o.index])?;
    }
    let report = CampaignReport::from_outcomes(&outcomes);
    let label = format!("enumerate {} max-ops {}", kind_name(args.kind.into()), args.max_ops);
    write_summary(out, args.common.format, &label, &report)?;
    Ok(if report.passed() { EXIT_OK } else { EXIT_FAILURE })
}

fn example_warehouse(out: &mut dyn Write) -> CmdResult {
    let r = warehouse::warehouse_example().map_err(|e| Failure(EXIT_FAILURE, e.to_string()))?;
    let ok = |b: bool| if b { "ok" } else { "FAILED" };
    let mut text = format!("term: {}\n", r.term);
    text += &format!("semantics agree: {}\n", r.status);
    text += &format!("traces ({}, {} with a failed credit check):\n", r.traces.len(), r.failed_orders);
    text += &r.traces.to_string();
    text += &format!("(a) every trace ends with *: {}\n", ok(r.all_succeed));
    text += &format!(
        "(b) every action of a failed order is compensated later: {}\n",
        ok(r.failures_compensated)
    );
    text += &format!(
        "    successful orders run no compensation: {}\n",
        ok(r.successes_uncompensated)
    );
    text += &format!(
        "(c) compensations run in reverse order of sequential steps: {}\n",
        ok(r.reverse_order)
    );
    out.write_all(text.as_bytes()).map_err(io_failure)?;
    Ok(if r.passed() { EXIT_OK } else { EXIT_FAILURE })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (u8, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(std::iter::once("ccsp").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn check_equal() {
        let (code, out, _) = run_args(&["check", "SKIP ; THROW"]);
        assert_eq!(code, 0);
        assert!(out.contains("status: Equal"));
        assert!(out.contains("<!>"));
    }

    #[test]
    fn null_is_a_usage_error() {
        let (code, _, err) = run_args(&["check", "0"]);
        assert_eq!(code, 2);
        assert!(err.contains("cannot parse"));
    }

    #[test]
    fn alphabet_is_enforced() {
        let (code, _, err) = run_args(&["check", "a ; c", "--alphabet", "a,b"]);
        assert_eq!(code, 2);
        assert!(err.contains("not in the alphabet"));
    }

    #[test]
    fn traces_both() {
        let (code, out, _) = run_args(&["traces", "a [] b", "--semantics", "both"]);
        assert_eq!(code, 0);
        assert_eq!(out, "operational:\n<a,*>\n<b,*>\n\ndenotational:\n<a,*>\n<b,*>\n");
    }

    #[test]
    fn unknown_subcommand() {
        let (code, _, _) = run_args(&["frobnicate"]);
        assert_eq!(code, 2);
    }
}

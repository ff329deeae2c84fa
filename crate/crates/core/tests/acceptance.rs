//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use ccsp::cli;
use ccsp::denotational::TraceOperators;
use ccsp::equivalence::campaign::{
    check_terms, lemma_operands, random_terms, run_lemma_suite, CampaignReport, KindSelection,
};
use ccsp::equivalence::{
    check_compensable, check_standard, check_standard_with, Enumerator, Lemma, Status,
};
use ccsp::operational::DEFAULT_STATE_CAP;
use ccsp::parallel::Strategy;
use ccsp::parser::{parse_compensable, parse_standard};
use ccsp::{Event, Term, TermKind, Terminal, Trace, TracePair};

const BUDGET: Duration = Duration::from_secs(300);

struct Outcome {
    name: &'static str,
    passed: bool,
    detail: String,
}

fn alphabet() -> Vec<Event> {
    vec![Event::new("a").unwrap(), Event::new("b").unwrap()]
}

fn run_cli(args: &[&str]) -> (u8, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = cli::run(std::iter::once("ccsp").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap())
}

fn exhaustive(kind: TermKind, max_ops: usize, pair_ops: Option<usize>) -> (CampaignReport, Duration) {
    let start = Instant::now();
    let mut enumerator = Enumerator::new(&alphabet());
    if let Some(bound) = pair_ops {
        enumerator = enumerator.with_pair_operand_ops(bound);
    }
    let terms = enumerator.up_to(max_ops, kind);
    drop(enumerator);
    let outcomes = check_terms(&terms, Strategy::default(), DEFAULT_STATE_CAP);
    (CampaignReport::from_outcomes(&outcomes), start.elapsed())
}

fn exhaustive_outcome(name: &'static str, report: &CampaignReport, elapsed: Duration) -> Outcome {
    Outcome {
        name,
        passed: report.total > 0
            && report.equal == report.total
            && report.errors == 0
            && report.max_states < DEFAULT_STATE_CAP
            && elapsed < BUDGET,
        detail: format!(
            "{}/{} Equal, {} errors, max states {} of cap {}, {:.1}s",
            report.equal,
            report.total,
            report.errors,
            report.max_states,
            DEFAULT_STATE_CAP,
            elapsed.as_secs_f64()
        ),
    }
}

fn randomized() -> (Outcome, CampaignReport) {
    let args = [
        "prop", "--seed", "42", "--cases", "2000", "--max-depth", "5", "--kind", "both",
        "--format", "machine",
    ];
    let (code, first) = run_cli(&args);
    let (_, second) = run_cli(&args);
    let mut seq_args = args.to_vec();
    seq_args.push("--sequential");
    let (_, sequential) = run_cli(&seq_args);
    let terms = random_terms(42, 2000, 5, &alphabet(), KindSelection::Both).unwrap();
    let report =
        CampaignReport::from_outcomes(&check_terms(&terms, Strategy::default(), DEFAULT_STATE_CAP));
    let deterministic = first == second && first == sequential;
    let outcome = Outcome {
        name: "randomized correspondence, seed 42, 2000 cases, depth 5, both kinds",
        passed: code == 0 && report.total == 2000 && report.equal == 2000 && deterministic,
        detail: format!(
            "{}/{} Equal, exit {code}, transcript identical across 3 runs: {deterministic}",
            report.equal, report.total
        ),
    };
    (outcome, report)
}

fn lemma_suites() -> Outcome {
    let mut passed = true;
    let mut parts = Vec::new();
    for lemma in Lemma::ALL {
        let tuples = lemma_operands(lemma, 42, 500, 5, &alphabet()).unwrap();
        let r = run_lemma_suite(lemma, &tuples, Strategy::default(), DEFAULT_STATE_CAP);
        passed &= r.passed() && r.total == 500;
        let mut part = format!("L{} {}/{}", r.lemma, r.equal, r.total);
        if lemma == Lemma::SeqCompensable {
            passed &= r.coverage.cond_true && r.coverage.cond_false;
            part += &format!(" cond {}/{}", r.coverage.cond_true, r.coverage.cond_false);
        }
        if lemma == Lemma::Pair {
            passed &= r.coverage.forward_throw;
            part += &format!(" throw {}", r.coverage.forward_throw);
        }
        parts.push(part);
    }
    Outcome { name: "decomposition lemmas 1-7, 500 tuples each", passed, detail: parts.join(", ") }
}

fn parse_golden(text: &str) -> Vec<(Term, Vec<String>)> {
    let mut cases = Vec::new();
    for block in text.split("\n\n") {
        let lines: Vec<&str> =
            block.lines().filter(|l| !l.trim().is_empty() && !l.starts_with('#')).collect();
        let Some((head, rest)) = lines.split_first() else { continue };
        let (kind, src) = head.split_once(':').expect("golden header is `kind: term`");
        let term = match kind {
            "std" => Term::Standard(parse_standard(src.trim()).unwrap()),
            "comp" => Term::Compensable(parse_compensable(src.trim()).unwrap()),
            other => panic!("unknown kind {other}"),
        };
        cases.push((term, rest.iter().map(|s| s.to_string()).collect()));
    }
    cases
}

fn pinned() -> Outcome {
    let cases = parse_golden(include_str!("golden/pinned.txt"));
    let mut failures = Vec::new();
    for (term, expected) in &cases {
        let ok = match term {
            Term::Standard(p) => {
                let want: BTreeSet<Trace> = expected.iter().map(|s| s.parse().unwrap()).collect();
                let v = check_standard(p).unwrap();
                v.operational.0 == want && v.denotational.0 == want
            }
            Term::Compensable(pp) => {
                let want: BTreeSet<TracePair> =
                    expected.iter().map(|s| s.parse().unwrap()).collect();
                let v = check_compensable(pp).unwrap();
                v.operational.0 == want && v.denotational.0 == want
            }
        };
        if !ok {
            failures.push(term.to_string());
        }
    }
    Outcome {
        name: "pinned trace sets of worked examples",
        passed: failures.is_empty() && !cases.is_empty(),
        detail: if failures.is_empty() {
            format!("{} golden cases match in both semantics", cases.len())
        } else {
            format!("differ: {}", failures.join(" | "))
        },
    }
}

fn warehouse() -> Outcome {
    let (code, out) = run_cli(&["example", "warehouse"]);
    let checks = out.lines().filter(|l| l.ends_with(": ok")).count();
    Outcome {
        name: "warehouse example",
        passed: code == 0 && checks == 4 && !out.contains("FAILED"),
        detail: format!("exit {code}, {checks}/4 property checks ok"),
    }
}

/// Sequential composition that continues after `!` instead of `✓`.
struct FlippedSeq;

impl TraceOperators for FlippedSeq {
    fn seq(&self, p: &Trace, q: &Trace) -> Trace {
        if p.terminal() == Terminal::Throw {
            p.splice(q)
        } else {
            p.clone()
        }
    }
}

fn mutation() -> Outcome {
    let terms = Enumerator::new(&alphabet()).up_to(1, TermKind::Standard);
    let caught = terms.iter().find(|t| {
        let p = t.as_standard().unwrap();
        check_standard_with(p, FlippedSeq, DEFAULT_STATE_CAP).unwrap().status == Status::Mismatch
    });
    Outcome {
        name: "mutation sensitivity (seq continues on ! instead of *)",
        passed: caught.is_some(),
        detail: match caught {
            Some(t) => format!("first mismatch on `{t}` among {} terms", terms.len()),
            None => format!("no mismatch among {} terms", terms.len()),
        },
    }
}

fn main() {
    // Accept and ignore libtest flags passed by `cargo test`.
    let filters: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    if !filters.is_empty() && !filters.iter().any(|f| "acceptance".contains(f.as_str())) {
        return;
    }

    let mut outcomes = Vec::new();

    let (std_report, std_time) = exhaustive(TermKind::Standard, 3, None);
    outcomes.push(exhaustive_outcome(
        "exhaustive standard terms, <= 3 operators over {a,b}",
        &std_report,
        std_time,
    ));
    let (comp_report, comp_time) = exhaustive(TermKind::Compensable, 2, Some(1));
    outcomes.push(exhaustive_outcome(
        "exhaustive compensable terms, <= 2 operators over {a,b}, pair operands <= 1",
        &comp_report,
        comp_time,
    ));
    let (random, random_report) = randomized();
    outcomes.push(random);
    outcomes.push(lemma_suites());

    let unhealthy = std_report.unhealthy + comp_report.unhealthy + random_report.unhealthy;
    let checked = std_report.total + comp_report.total + random_report.total;
    outcomes.push(Outcome {
        name: "healthiness of every checked term",
        passed: unhealthy == 0 && checked > 0,
        detail: format!("{unhealthy} failures among {checked} terms"),
    });
    outcomes.push(pinned());
    outcomes.push(warehouse());
    outcomes.push(mutation());

    let mut failed = 0;
    for o in &outcomes {
        let tag = if o.passed { "PASS" } else { "FAIL" };
        println!("{tag} {}: {}", o.name, o.detail);
        failed += usize::from(!o.passed);
    }
    println!("acceptance: {}/{} criteria passed", outcomes.len() - failed, outcomes.len());
    if failed > 0 {
        std::process::exit(1);
    }
}

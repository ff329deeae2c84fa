//! Batch checking of many terms. Outcomes are returned in input order no
//! matter how the work was scheduled.

use serde::Serialize;

use super::generate::{GenConfig, TermGenerator};
use super::lemmas::{self, Coverage, Lemma, LemmaReport};
use super::{check_compensable_with, check_standard_with, Status, VerdictRecord};
use crate::denotational::{is_healthy_pair_set, is_healthy_set, StandardOperators};
use crate::operational::Explorer;
use crate::parallel::Strategy;
use crate::syntax::{Event, Term, TermKind};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CaseOutcome {
    pub index: usize,
    /// `None` when the check failed with an error.
    pub status: Option<Status>,
    /// Both semantics contain a trace ending with `✓` or `!`.
    pub healthy: bool,
    pub states: usize,
    pub error: Option<String>,
    /// Present for mismatches only.
    pub mismatch: Option<Box<VerdictRecord>>,
}

impl CaseOutcome {
    pub fn passed(&self) -> bool {
        self.status == Some(Status::Equal) && self.healthy
    }
}

pub fn check_term(index: usize, term: &Term, cap: usize) -> CaseOutcome {
    let result = match term {
        Term::Standard(p) => check_standard_with(p, StandardOperators, cap).map(|v| {
            let healthy = is_healthy_set(&v.operational) && is_healthy_set(&v.denotational);
            let rec = (v.status == Status::Mismatch).then(|| Box::new(VerdictRecord::from(&v)));
            (v.status, healthy, v.states, rec)
        }),
        Term::Compensable(pp) => check_compensable_with(pp, StandardOperators, cap).map(|v| {
            let healthy =
                is_healthy_pair_set(&v.operational) && is_healthy_pair_set(&v.denotational);
            let rec = (v.status == Status::Mismatch).then(|| Box::new(VerdictRecord::from(&v)));
            (v.status, healthy, v.states, rec)
        }),
    };
    match result {
        Ok((status, healthy, states, mismatch)) => {
            CaseOutcome { index, status: Some(status), healthy, states, error: None, mismatch }
        }
        Err(e) => CaseOutcome {
            index,
            status: None,
            healthy: false,
            states: 0,
            error: Some(e.to_string()),
            mismatch: None,
        },
    }
}

pub fn check_terms(terms: &[Term], strategy: Strategy, cap: usize) -> Vec<CaseOutcome> {
    let indexed: Vec<(usize, &Term)> = terms.iter().enumerate().collect();
    strategy.map(&indexed, |(i, t)| check_term(*i, t, cap))
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct CampaignReport {
    pub total: usize,
    pub equal: usize,
    pub mismatches: usize,
    pub unhealthy: usize,
    pub errors: usize,
    pub max_states: usize,
    /// Index of the first failing case, if any.
    pub first_failure: Option<usize>,
}

impl CampaignReport {
    pub fn from_outcomes(outcomes: &[CaseOutcome]) -> Self {
        let mut r = CampaignReport { total: outcomes.len(), ..Default::default() };
        for o in outcomes {
            match o.status {
                Some(Status::Equal) => r.equal += 1,
                Some(Status::Mismatch) => r.mismatches += 1,
                None => r.errors += 1,
            }
            if !o.healthy {
                r.unhealthy += 1;
            }
            r.max_states = r.max_states.max(o.states);
            if !o.passed() && r.first_failure.is_none() {
                r.first_failure = Some(o.index);
            }
        }
        r
    }

    pub fn passed(&self) -> bool {
        self.total == self.equal && self.unhealthy == 0 && self.errors == 0
    }
}

/// Which kinds a randomized campaign draws.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KindSelection {
    Standard,
    Compensable,
    /// Even cases standard, odd cases compensable.
    Both,
}

impl KindSelection {
    pub fn kind_of(self, case: usize) -> TermKind {
        match self {
            KindSelection::Standard => TermKind::Standard,
            KindSelection::Compensable => TermKind::Compensable,
            KindSelection::Both if case.is_multiple_of(2) => TermKind::Standard,
            KindSelection::Both => TermKind::Compensable,
        }
    }
}

/// Seed of case `case` in a campaign seeded with `seed` (splitmix64).
pub fn case_seed(seed: u64, case: u64) -> u64 {
    let mut z = seed.wrapping_add(case.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn random_terms(
    seed: u64,
    cases: usize,
    max_depth: usize,
    alphabet: &[Event],
    kinds: KindSelection,
) -> Result<Vec<Term>, super::CheckError> {
    (0..cases)
        .map(|i| {
            let kind = kinds.kind_of(i);
            let cfg = GenConfig::new(case_seed(seed, i as u64), max_depth, alphabet.to_vec(), kind);
            super::gen_term(&cfg)
        })
        .collect()
}

/// Seeded operand tuples for `lemma`.
pub fn lemma_operands(
    lemma: Lemma,
    seed: u64,
    count: usize,
    max_depth: usize,
    alphabet: &[Event],
) -> Result<Vec<Vec<Term>>, super::CheckError> {
    let base = seed ^ (u64::from(lemma.id()) << 48);
    (0..count)
        .map(|i| {
            let cfg =
                GenConfig::new(case_seed(base, i as u64), max_depth, alphabet.to_vec(), TermKind::Standard);
            let mut generator = TermGenerator::new(&cfg)?;
            Ok(lemma.operand_kinds().iter().map(|k| generator.term(*k)).collect())
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LemmaSuiteReport {
    pub lemma: u8,
    pub total: usize,
    pub equal: usize,
    pub errors: usize,
    pub coverage: Coverage,
    pub failures: Vec<LemmaReport>,
}

impl LemmaSuiteReport {
    pub fn passed(&self) -> bool {
        self.total == self.equal && self.errors == 0
    }
}

pub fn run_lemma_suite(
    lemma: Lemma,
    tuples: &[Vec<Term>],
    strategy: Strategy,
    cap: usize,
) -> LemmaSuiteReport {
    let results = strategy.map(tuples, |ops| lemmas::check(lemma, ops, &mut Explorer::new(cap)));
    let mut report = LemmaSuiteReport {
        lemma: lemma.id(),
        total: tuples.len(),
        equal: 0,
        errors: 0,
        coverage: Coverage::default(),
        failures: Vec::new(),
    };
    for r in results {
        match r {
            Ok(r) => {
                report.coverage = report.coverage.merge(r.coverage);
                if r.status == Status::Equal {
                    report.equal += 1;
                } else {
                    report.failures.push(r);
                }
            }
            Err(_) => report.errors += 1,
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operational::DEFAULT_STATE_CAP;

    fn alphabet() -> Vec<Event> {
        vec![Event::new("a").unwrap(), Event::new("b").unwrap()]
    }

    #[test]
    fn seeds_are_distinct_and_stable() {
        assert_eq!(case_seed(42, 0), case_seed(42, 0));
        assert_ne!(case_seed(42, 0), case_seed(42, 1));
        assert_ne!(case_seed(42, 0), case_seed(43, 0));
    }

    #[test]
    fn both_alternates() {
        let terms = random_terms(3, 6, 3, &alphabet(), KindSelection::Both).unwrap();
        let kinds: Vec<TermKind> = terms.iter().map(Term::kind).collect();
        assert_eq!(kinds[0], TermKind::Standard);
        assert_eq!(kinds[1], TermKind::Compensable);
    }

    #[test]
    fn strategies_agree() {
        let terms = random_terms(9, 40, 4, &alphabet(), KindSelection::Both).unwrap();
        let outcomes: Vec<_> = Strategy::available()
            .into_iter()
            .map(|s| check_terms(&terms, s, DEFAULT_STATE_CAP))
            .collect();
        for o in &outcomes[1..] {
            assert_eq!(o, &outcomes[0]);
        }
        let report = CampaignReport::from_outcomes(&outcomes[0]);
        assert!(report.passed(), "{report:?}");
    }

    #[test]
    fn small_lemma_suite() {
        for lemma in Lemma::ALL {
            let tuples = lemma_operands(lemma, 5, 20, 3, &alphabet()).unwrap();
            let r = run_lemma_suite(lemma, &tuples, Strategy::default(), DEFAULT_STATE_CAP);
            assert!(r.passed(), "{r:?}");
        }
    }
}

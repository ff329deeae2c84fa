//! Executable correspondence checks between the two semantics.
//!
//! [`check_standard`] and [`check_compensable`] compare the traces derived
//! from the transition relation with the compositional trace semantics by
//! exact set equality. [`lemmas`] checks the per-operator decomposition
//! laws, [`generate`] produces terms, and [`campaign`] runs batches.

pub mod campaign;
pub mod generate;
pub mod lemmas;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::denotational::{
    Denotation, DenotationError, StandardOperators, TraceOperators, TracePairSet, TraceSet,
};
use crate::operational::{Explorer, OperationalError, DEFAULT_STATE_CAP};
use crate::syntax::{validate_user_term, CompensableTerm, StandardTerm, Term, Violation};

pub use campaign::{CampaignReport, CaseOutcome};
pub use generate::{enumerate_terms, gen_term, Enumerator, GenConfig, Weights};
pub use lemmas::{check_lemma, Lemma, LemmaReport};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CheckError {
    #[error("not a user term: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
    #[error(transparent)]
    Operational(#[from] OperationalError),
    #[error(transparent)]
    Denotational(#[from] DenotationError),
    #[error("{0}")]
    Operands(String),
    #[error("invalid generator configuration: {0}")]
    Config(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Status {
    Equal,
    Mismatch,
}

impl Status {
    pub fn from_equal(equal: bool) -> Status {
        if equal {
            Status::Equal
        } else {
            Status::Mismatch
        }
    }
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Status::Equal => "Equal",
            Status::Mismatch => "Mismatch",
        })
    }
}

/// Outcome of comparing the derived traces of a term with its trace semantics.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict<S> {
    pub status: Status,
    pub only_operational: S,
    pub only_denotational: S,
    pub term: Term,
    /// The full operational set (equal to the denotational one on `Equal`).
    pub operational: S,
    pub denotational: S,
    /// Distinct states the operational exploration visited.
    pub states: usize,
}

pub type StandardVerdict = Verdict<TraceSet>;
pub type CompensableVerdict = Verdict<TracePairSet>;

/// Set tokens in the machine-readable format.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SetTokens {
    Traces(Vec<Vec<String>>),
    Pairs(Vec<[Vec<String>; 2]>),
}

impl From<&TraceSet> for SetTokens {
    fn from(s: &TraceSet) -> Self {
        SetTokens::Traces(s.to_tokens())
    }
}

impl From<&TracePairSet> for SetTokens {
    fn from(s: &TracePairSet) -> Self {
        SetTokens::Pairs(s.to_tokens())
    }
}

/// Machine-readable verdict: one JSON object per line.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictRecord {
    pub term: String,
    pub kind: String,
    pub status: Status,
    pub only_operational: SetTokens,
    pub only_denotational: SetTokens,
}

impl From<&StandardVerdict> for VerdictRecord {
    fn from(v: &StandardVerdict) -> Self {
        VerdictRecord {
            term: v.term.to_string(),
            kind: "std".into(),
            status: v.status,
            only_operational: (&v.only_operational).into(),
            only_denotational: (&v.only_denotational).into(),
        }
    }
}

impl From<&CompensableVerdict> for VerdictRecord {
    fn from(v: &CompensableVerdict) -> Self {
        VerdictRecord {
            term: v.term.to_string(),
            kind: "comp".into(),
            status: v.status,
            only_operational: (&v.only_operational).into(),
            only_denotational: (&v.only_denotational).into(),
        }
    }
}

impl<S: std::fmt::Display> std::fmt::Display for Verdict<S> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "term: {}", self.term)?;
        writeln!(f, "status: {}", self.status)?;
        match self.status {
            Status::Equal => {
                writeln!(f, "traces:")?;
                write!(f, "{}", self.operational)
            }
            Status::Mismatch => {
                writeln!(f, "only operational:")?;
                write!(f, "{}", self.only_operational)?;
                writeln!(f, "only denotational:")?;
                write!(f, "{}", self.only_denotational)
            }
        }
    }
}

fn ensure_user_term(term: &Term) -> Result<(), CheckError> {
    let violations = validate_user_term(term, None);
    if violations.is_empty() {
        Ok(())
    } else {
        Err(CheckError::Invalid(violations))
    }
}

pub fn check_standard(term: &StandardTerm) -> Result<StandardVerdict, CheckError> {
    check_standard_with(term, StandardOperators, DEFAULT_STATE_CAP)
}

pub fn check_compensable(term: &CompensableTerm) -> Result<CompensableVerdict, CheckError> {
    check_compensable_with(term, StandardOperators, DEFAULT_STATE_CAP)
}

/// [`check_standard`] with a given trace operator set and state cap.
pub fn check_standard_with<O: TraceOperators>(
    term: &StandardTerm,
    ops: O,
    cap: usize,
) -> Result<StandardVerdict, CheckError> {
    let wrapped = Term::Standard(term.clone());
    ensure_user_term(&wrapped)?;
    let mut explorer = Explorer::new(cap);
    let operational = TraceSet((*explorer.derived_traces(term)?).clone());
    let denotational = (*Denotation::with_operators(ops).standard(term)?).clone();
    let (only_operational, only_denotational) = operational.differences(&denotational);
    Ok(Verdict {
        status: Status::from_equal(only_operational.is_empty() && only_denotational.is_empty()),
        only_operational,
        only_denotational,
        term: wrapped,
        operational,
        denotational,
        states: explorer.states_visited(),
    })
}

pub fn check_compensable_with<O: TraceOperators>(
    term: &CompensableTerm,
    ops: O,
    cap: usize,
) -> Result<CompensableVerdict, CheckError> {
    let wrapped = Term::Compensable(term.clone());
    ensure_user_term(&wrapped)?;
    let mut explorer = Explorer::new(cap);
    let operational = TracePairSet(explorer.derived_pairs(term)?);
    let denotational = (*Denotation::with_operators(ops).compensable(term)?).clone();
    let (only_operational, only_denotational) = operational.differences(&denotational);
    Ok(Verdict {
        status: Status::from_equal(only_operational.is_empty() && only_denotational.is_empty()),
        only_operational,
        only_denotational,
        term: wrapped,
        operational,
        denotational,
        states: explorer.states_visited(),
    })
}

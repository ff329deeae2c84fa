//! Per-operator decomposition laws of the lifted transition relation.
//!
//! Each law equates runs of a composite term (left side, computed by
//! exploring the transition relation) with a set built from the runs of its
//! operands through the trace operators (right side).

use std::collections::BTreeSet;
use std::fmt::Display;

use serde::Serialize;

use super::{ensure_user_term, CheckError, Status};
use crate::denotational::{block_traces, pair_traces, par_traces, seq_traces};
use crate::operational::Explorer;
use crate::syntax::{CompensableTerm, StandardTerm, Term, TermKind, Terminal, Trace, TracePair};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Lemma {
    /// `(P ; Q) →t 0 = ∃p,q. t = p;q ∧ P →p 0 ∧ Q →q 0`
    SeqStandard = 1,
    /// `(P ∥ Q) →t 0 = ∃p,q. t ∈ p∥q ∧ P →p 0 ∧ Q →q 0`
    ParStandard = 2,
    /// Forward runs of `PP ; QQ` with conditional accumulation of compensations.
    SeqCompensable = 3,
    /// `<QQ,P> →t R = ∃Q. QQ →t Q ∧ R = Q ; P`
    AuxRemoval = 4,
    /// Forward runs of `PP ∥ QQ` with compensations placed in parallel.
    ParCompensable = 5,
    /// `(P ÷ Q) →(t,t') 0 = ∃p,q. (t,t') = p÷q ∧ P →p 0 ∧ Q →q 0`
    Pair = 6,
    /// `[PP] →t 0 = ∃p,p'. t = [p,p'] ∧ PP →(p,p') 0`
    Block = 7,
}

impl Lemma {
    pub const ALL: [Lemma; 7] = [
        Lemma::SeqStandard,
        Lemma::ParStandard,
        Lemma::SeqCompensable,
        Lemma::AuxRemoval,
        Lemma::ParCompensable,
        Lemma::Pair,
        Lemma::Block,
    ];

    pub fn from_id(id: u8) -> Option<Lemma> {
        Lemma::ALL.get(usize::from(id).wrapping_sub(1)).copied()
    }

    pub fn id(self) -> u8 {
        self as u8
    }

    pub fn operand_kinds(self) -> &'static [TermKind] {
        use TermKind::{Compensable as C, Standard as S};
        match self {
            Lemma::SeqStandard | Lemma::ParStandard | Lemma::Pair => &[S, S],
            Lemma::SeqCompensable | Lemma::ParCompensable => &[C, C],
            Lemma::AuxRemoval => &[C, S],
            Lemma::Block => &[C],
        }
    }
}

/// Which disjuncts of a law the operands exercised.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Coverage {
    /// Lemma 3: some forward run of the first operand ended with `✓`.
    pub cond_true: bool,
    /// Lemma 3: some forward run of the first operand ended otherwise.
    pub cond_false: bool,
    /// Lemma 6: some forward run of `P` ended with `!`.
    pub forward_throw: bool,
}

impl Coverage {
    pub fn merge(self, other: Coverage) -> Coverage {
        Coverage {
            cond_true: self.cond_true || other.cond_true,
            cond_false: self.cond_false || other.cond_false,
            forward_throw: self.forward_throw || other.forward_throw,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LemmaReport {
    pub lemma: u8,
    pub operands: Vec<String>,
    pub status: Status,
    pub only_lhs: Vec<String>,
    pub only_rhs: Vec<String>,
    pub size: usize,
    pub coverage: Coverage,
}

fn compare<T: Ord + Display>(
    lemma: Lemma,
    operands: &[Term],
    lhs: BTreeSet<T>,
    rhs: BTreeSet<T>,
    coverage: Coverage,
) -> LemmaReport {
    let only_lhs: Vec<String> = lhs.difference(&rhs).map(|x| x.to_string()).collect();
    let only_rhs: Vec<String> = rhs.difference(&lhs).map(|x| x.to_string()).collect();
    LemmaReport {
        lemma: lemma.id(),
        operands: operands.iter().map(|t| t.to_string()).collect(),
        status: Status::from_equal(only_lhs.is_empty() && only_rhs.is_empty()),
        only_lhs,
        only_rhs,
        size: lhs.len(),
        coverage,
    }
}

/// A forward run rendered as `(t, R)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
struct ForwardRun(Trace, StandardTerm);

impl Display for ForwardRun {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {})", self.0, self.1)
    }
}

fn runs(set: &BTreeSet<(Trace, StandardTerm)>) -> BTreeSet<ForwardRun> {
    set.iter().map(|(t, r)| ForwardRun(t.clone(), r.clone())).collect()
}

/// Checks lemma `id` (1 to 7) on `operands`, whose kinds must match
/// [`Lemma::operand_kinds`].
pub fn check_lemma(id: u8, operands: &[Term]) -> Result<LemmaReport, CheckError> {
    let lemma =
        Lemma::from_id(id).ok_or_else(|| CheckError::Operands(format!("no lemma {id} (1 to 7)")))?;
    check(lemma, operands, &mut Explorer::default())
}

pub fn check(
    lemma: Lemma,
    operands: &[Term],
    explorer: &mut Explorer,
) -> Result<LemmaReport, CheckError> {
    let kinds: Vec<TermKind> = operands.iter().map(Term::kind).collect();
    if kinds != lemma.operand_kinds() {
        return Err(CheckError::Operands(format!(
            "lemma {} takes {:?}, got {:?}",
            lemma.id(),
            lemma.operand_kinds(),
            kinds
        )));
    }
    for t in operands {
        ensure_user_term(t)?;
    }
    let std = |i: usize| operands[i].as_standard().unwrap();
    let comp = |i: usize| operands[i].as_compensable().unwrap();

    let report = match lemma {
        Lemma::SeqStandard | Lemma::ParStandard => {
            let (p, q) = (std(0), std(1));
            let composite = if lemma == Lemma::SeqStandard {
                StandardTerm::seq(p.clone(), q.clone())
            } else {
                StandardTerm::par(p.clone(), q.clone())
            };
            let lhs = (*explorer.derived_traces(&composite)?).clone();
            let (dp, dq) = (explorer.derived_traces(p)?, explorer.derived_traces(q)?);
            let mut rhs = BTreeSet::new();
            for p in dp.iter() {
                for q in dq.iter() {
                    if lemma == Lemma::SeqStandard {
                        rhs.insert(seq_traces(p, q));
                    } else {
                        rhs.extend(par_traces(p, q));
                    }
                }
            }
            compare(lemma, operands, lhs, rhs, Coverage::default())
        }
        Lemma::SeqCompensable => {
            let (pp, qq) = (comp(0), comp(1));
            let composite = CompensableTerm::seq(pp.clone(), qq.clone());
            let lhs = runs(&*explorer.derived_forward(&composite)?);
            let (fp, fq) = (explorer.derived_forward(pp)?, explorer.derived_forward(qq)?);
            let mut rhs = BTreeSet::new();
            let mut coverage = Coverage::default();
            for (p, stored_p) in fp.iter() {
                let succeeded = p.terminal() == Terminal::Tick;
                coverage.cond_true |= succeeded;
                coverage.cond_false |= !succeeded;
                for (q, stored_q) in fq.iter() {
                    let r = if succeeded {
                        StandardTerm::seq(stored_q.clone(), stored_p.clone())
                    } else {
                        stored_p.clone()
                    };
                    rhs.insert(ForwardRun(seq_traces(p, q), r));
                }
            }
            compare(lemma, operands, lhs, rhs, coverage)
        }
        Lemma::AuxRemoval => {
            let (qq, p) = (comp(0), std(1));
            // Runtime-only construct, built here on purpose.
            let composite = CompensableTerm::aux(qq.clone(), p.clone());
            let lhs = runs(&*explorer.derived_forward(&composite)?);
            let rhs = explorer
                .derived_forward(qq)?
                .iter()
                .map(|(t, q)| ForwardRun(t.clone(), StandardTerm::seq(q.clone(), p.clone())))
                .collect();
            compare(lemma, operands, lhs, rhs, Coverage::default())
        }
        Lemma::ParCompensable => {
            let (pp, qq) = (comp(0), comp(1));
            let composite = CompensableTerm::par(pp.clone(), qq.clone());
            let lhs = runs(&*explorer.derived_forward(&composite)?);
            let (fp, fq) = (explorer.derived_forward(pp)?, explorer.derived_forward(qq)?);
            let mut rhs = BTreeSet::new();
            for (p, stored_p) in fp.iter() {
                for (q, stored_q) in fq.iter() {
                    let r = StandardTerm::par(stored_p.clone(), stored_q.clone());
                    for t in par_traces(p, q) {
                        rhs.insert(ForwardRun(t, r.clone()));
                    }
                }
            }
            compare(lemma, operands, lhs, rhs, Coverage::default())
        }
        Lemma::Pair => {
            let (p, q) = (std(0), std(1));
            let composite = CompensableTerm::pair(p.clone(), q.clone());
            let lhs = explorer.derived_pairs(&composite)?;
            let (dp, dq) = (explorer.derived_traces(p)?, explorer.derived_traces(q)?);
            let coverage = Coverage {
                forward_throw: dp.iter().any(|t| t.terminal() == Terminal::Throw),
                ..Coverage::default()
            };
            let rhs: BTreeSet<TracePair> = dp
                .iter()
                .flat_map(|p| dq.iter().map(move |q| pair_traces(p, q)))
                .collect();
            compare(lemma, operands, lhs, rhs, coverage)
        }
        Lemma::Block => {
            let pp = comp(0);
            let composite = StandardTerm::block(pp.clone());
            let lhs = (*explorer.derived_traces(&composite)?).clone();
            let rhs: BTreeSet<Trace> = explorer
                .derived_pairs(pp)?
                .iter()
                .filter_map(|tp| block_traces(&tp.forward, &tp.compensation))
                .collect();
            compare(lemma, operands, lhs, rhs, Coverage::default())
        }
    };
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use StandardTerm::{Skip, Throw};

    fn a(name: &str) -> StandardTerm {
        StandardTerm::atom(name).unwrap()
    }

    #[test]
    fn seq_with_throw() {
        let r = check_lemma(1, &[a("a").into(), Throw.into()]).unwrap();
        assert_eq!(r.status, Status::Equal);
        assert_eq!(r.size, 1);
    }

    #[test]
    fn aux_removal() {
        let r = check_lemma(4, &[CompensableTerm::pair(Skip, a("q")).into(), a("p").into()]).unwrap();
        assert_eq!(r.status, Status::Equal);
    }

    #[test]
    fn block_of_throww() {
        let r = check_lemma(7, &[CompensableTerm::pair(Throw, Skip).into()]).unwrap();
        assert_eq!(r.status, Status::Equal);
        assert_eq!(r.size, 1);
    }

    #[test]
    fn cond_coverage() {
        let pp = CompensableTerm::pair(StandardTerm::choice(Skip, Throw), a("c"));
        let r = check_lemma(3, &[pp.into(), CompensableTerm::pair(a("b"), Skip).into()]).unwrap();
        assert_eq!(r.status, Status::Equal);
        assert!(r.coverage.cond_true && r.coverage.cond_false);
    }

    #[test]
    fn operand_kinds_are_checked() {
        assert!(matches!(check_lemma(4, &[a("a").into(), a("b").into()]), Err(CheckError::Operands(_))));
        assert!(matches!(check_lemma(7, &[]), Err(CheckError::Operands(_))));
        assert!(matches!(check_lemma(8, &[]), Err(CheckError::Operands(_))));
        assert!(matches!(check_lemma(0, &[]), Err(CheckError::Operands(_))));
    }
}

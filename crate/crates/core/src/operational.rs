//! Small-step transition relation, lifted runs, derived traces and LTS export.
//!
//! Normal transitions carry an event; terminal transitions carry a terminal
//! and end the run. A standard term terminates into [`StandardTerm::Null`]; a
//! compensable term terminates into the standard term holding its stored
//! compensation.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt::Write as _;
use std::sync::Arc;

use thiserror::Error;

use crate::syntax::{CompensableTerm, Event, StandardTerm, Terminal, Trace, TransitionLabel};

/// Default bound on distinct states visited by one exploration.
pub const DEFAULT_STATE_CAP: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OperationalError {
    #[error("the null process has no transitions")]
    NullTerm,
    #[error("state cap of {cap} states exceeded")]
    StateCapExceeded { cap: usize },
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct StandardStep {
    pub label: TransitionLabel,
    /// `Null` exactly when `label` is terminal.
    pub successor: StandardTerm,
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum CompensableStep {
    Normal(Event, CompensableTerm),
    /// Carries the stored compensation.
    Terminal(Terminal, StandardTerm),
}

impl CompensableStep {
    pub fn label(&self) -> TransitionLabel {
        match self {
            CompensableStep::Normal(e, _) => TransitionLabel::Normal(e.clone()),
            CompensableStep::Terminal(w, _) => TransitionLabel::Term(*w),
        }
    }

    fn successor_text(&self) -> String {
        match self {
            CompensableStep::Normal(_, pp) => pp.to_string(),
            CompensableStep::Terminal(_, p) => p.to_string(),
        }
    }
}

/// Terminal synchronisation of parallel branches: the join under `✓ < ? < !`.
pub(crate) fn join(left: Terminal, right: Terminal) -> Terminal {
    left.max(right)
}

fn normal(event: Event, successor: StandardTerm) -> StandardStep {
    StandardStep { label: TransitionLabel::Normal(event), successor }
}

fn terminal(w: Terminal) -> StandardStep {
    StandardStep { label: TransitionLabel::Term(w), successor: StandardTerm::Null }
}

/// Unordered, possibly duplicated steps of a standard term.
pub(crate) fn standard_steps(term: &StandardTerm, out: &mut Vec<StandardStep>) {
    match term {
        StandardTerm::Null => {}
        StandardTerm::Atom(e) => out.push(normal(e.clone(), StandardTerm::Skip)),
        StandardTerm::Skip => out.push(terminal(Terminal::Tick)),
        StandardTerm::Throw => out.push(terminal(Terminal::Throw)),
        StandardTerm::Yield => {
            out.push(terminal(Terminal::Yield));
            out.push(terminal(Terminal::Tick));
        }
        StandardTerm::Seq(p, q) => continuation_steps(p, q, Terminal::Tick, true, out),
        StandardTerm::Interrupt(p, q) => continuation_steps(p, q, Terminal::Throw, false, out),
        StandardTerm::Choice(p, q) => {
            standard_steps(p, out);
            standard_steps(q, out);
        }
        StandardTerm::Par(p, q) => {
            let mut left = Vec::new();
            let mut right = Vec::new();
            standard_steps(p, &mut left);
            standard_steps(q, &mut right);
            let mut left_terms = Vec::new();
            for s in left {
                match s.label {
                    TransitionLabel::Normal(e) => {
                        out.push(normal(e, StandardTerm::Par(Arc::new(s.successor), q.clone())))
                    }
                    TransitionLabel::Term(w) => left_terms.push(w),
                }
            }
            let mut right_terms = Vec::new();
            for s in right {
                match s.label {
                    TransitionLabel::Normal(e) => {
                        out.push(normal(e, StandardTerm::Par(p.clone(), Arc::new(s.successor))))
                    }
                    TransitionLabel::Term(w) => right_terms.push(w),
                }
            }
            for &l in &left_terms {
                for &r in &right_terms {
                    out.push(terminal(join(l, r)));
                }
            }
        }
        StandardTerm::Block(pp) => {
            let mut inner = Vec::new();
            compensable_steps(pp, &mut inner);
            for s in inner {
                match s {
                    CompensableStep::Normal(e, next) => {
                        out.push(normal(e, StandardTerm::Block(Arc::new(next))))
                    }
                    // Success discards the stored compensation.
                    CompensableStep::Terminal(Terminal::Tick, _) => out.push(terminal(Terminal::Tick)),
                    // A throw hands control to the stored compensation.
                    CompensableStep::Terminal(Terminal::Throw, comp) => standard_steps(&comp, out),
                    // A yielding forward run has no block transition.
                    CompensableStep::Terminal(Terminal::Yield, _) => {}
                }
            }
        }
    }
}

/// Shared rules of `;` and `|>`: `p` runs; when it terminates with `handoff`
/// control passes to `q`, any other terminal ends the composite.
fn continuation_steps(
    p: &Arc<StandardTerm>,
    q: &Arc<StandardTerm>,
    handoff: Terminal,
    is_seq: bool,
    out: &mut Vec<StandardStep>,
) {
    let mut first = Vec::new();
    standard_steps(p, &mut first);
    let mut handed_off = false;
    for s in first {
        match s.label {
            TransitionLabel::Normal(e) => {
                let rest = Arc::new(s.successor);
                let next = if is_seq {
                    StandardTerm::Seq(rest, q.clone())
                } else {
                    StandardTerm::Interrupt(rest, q.clone())
                };
                out.push(normal(e, next));
            }
            TransitionLabel::Term(w) if w == handoff => {
                if !handed_off {
                    standard_steps(q, out);
                    handed_off = true;
                }
            }
            TransitionLabel::Term(w) => out.push(terminal(w)),
        }
    }
}

/// Unordered, possibly duplicated steps of a compensable term.
pub(crate) fn compensable_steps(term: &CompensableTerm, out: &mut Vec<CompensableStep>) {
    match term {
        CompensableTerm::Pair(p, q) => {
            let mut fwd = Vec::new();
            standard_steps(p, &mut fwd);
            for s in fwd {
                match s.label {
                    TransitionLabel::Normal(e) => out.push(CompensableStep::Normal(
                        e,
                        CompensableTerm::Pair(Arc::new(s.successor), q.clone()),
                    )),
                    TransitionLabel::Term(Terminal::Tick) => {
                        out.push(CompensableStep::Terminal(Terminal::Tick, (**q).clone()))
                    }
                    TransitionLabel::Term(w) => {
                        out.push(CompensableStep::Terminal(w, StandardTerm::Skip))
                    }
                }
            }
        }
        CompensableTerm::Seq(pp, qq) => {
            let mut first = Vec::new();
            compensable_steps(pp, &mut first);
            let mut second: Option<Vec<CompensableStep>> = None;
            for s in first {
                match s {
                    CompensableStep::Normal(e, next) => out.push(CompensableStep::Normal(
                        e,
                        CompensableTerm::Seq(Arc::new(next), qq.clone()),
                    )),
                    CompensableStep::Terminal(Terminal::Tick, stored) => {
                        let second = second.get_or_insert_with(|| {
                            let mut v = Vec::new();
                            compensable_steps(qq, &mut v);
                            v
                        });
                        let stored = Arc::new(stored);
                        for s2 in second.iter() {
                            out.push(accumulate(s2.clone(), &stored));
                        }
                    }
                    CompensableStep::Terminal(w, stored) => {
                        out.push(CompensableStep::Terminal(w, stored))
                    }
                }
            }
        }
        CompensableTerm::Aux(qq, stored) => {
            let mut inner = Vec::new();
            compensable_steps(qq, &mut inner);
            for s in inner {
                out.push(accumulate(s, stored));
            }
        }
        CompensableTerm::Choice(pp, qq) => {
            compensable_steps(pp, out);
            compensable_steps(qq, out);
        }
        CompensableTerm::Par(pp, qq) => {
            let mut left = Vec::new();
            let mut right = Vec::new();
            compensable_steps(pp, &mut left);
            compensable_steps(qq, &mut right);
            let mut left_terms = Vec::new();
            for s in left {
                match s {
                    CompensableStep::Normal(e, next) => out.push(CompensableStep::Normal(
                        e,
                        CompensableTerm::Par(Arc::new(next), qq.clone()),
                    )),
                    CompensableStep::Terminal(w, comp) => left_terms.push((w, Arc::new(comp))),
                }
            }
            let mut right_terms = Vec::new();
            for s in right {
                match s {
                    CompensableStep::Normal(e, next) => out.push(CompensableStep::Normal(
                        e,
                        CompensableTerm::Par(pp.clone(), Arc::new(next)),
                    )),
                    CompensableStep::Terminal(w, comp) => right_terms.push((w, Arc::new(comp))),
                }
            }
            for (l, lc) in &left_terms {
                for (r, rc) in &right_terms {
                    out.push(CompensableStep::Terminal(
                        join(*l, *r),
                        StandardTerm::Par(lc.clone(), rc.clone()),
                    ));
                }
            }
        }
    }
}

/// A step of the second component of a compensable sequence, with the first
/// component's compensation `stored`: normal steps stay under `<_, stored>`,
/// terminal steps put the new compensation in front of `stored`.
fn accumulate(step: CompensableStep, stored: &Arc<StandardTerm>) -> CompensableStep {
    match step {
        CompensableStep::Normal(e, next) => {
            CompensableStep::Normal(e, CompensableTerm::Aux(Arc::new(next), stored.clone()))
        }
        CompensableStep::Terminal(w, comp) => {
            CompensableStep::Terminal(w, StandardTerm::Seq(Arc::new(comp), stored.clone()))
        }
    }
}

/// Steps of a standard term in canonical order: by label text, then by the
/// printed successor.
pub fn step_standard(term: &StandardTerm) -> Result<Vec<StandardStep>, OperationalError> {
    if *term == StandardTerm::Null {
        return Err(OperationalError::NullTerm);
    }
    let mut steps = Vec::new();
    standard_steps(term, &mut steps);
    let mut keyed: Vec<_> = steps
        .into_iter()
        .map(|s| ((s.label.to_string(), s.successor.to_string()), s))
        .collect();
    keyed.sort_by(|a, b| a.0.cmp(&b.0));
    keyed.dedup_by(|a, b| a.1 == b.1);
    Ok(keyed.into_iter().map(|(_, s)| s).collect())
}

pub fn step_compensable(term: &CompensableTerm) -> Vec<CompensableStep> {
    let mut steps = Vec::new();
    compensable_steps(term, &mut steps);
    let mut keyed: Vec<_> = steps
        .into_iter()
        .map(|s| ((s.label().to_string(), s.successor_text()), s))
        .collect();
    keyed.sort_by(|a, b| a.0.cmp(&b.0));
    keyed.dedup_by(|a, b| a.1 == b.1);
    keyed.into_iter().map(|(_, s)| s).collect()
}

/// Does `term` reach `0` by performing exactly `trace`?
pub fn run_lifted(term: &StandardTerm, trace: &Trace) -> Result<bool, OperationalError> {
    if *term == StandardTerm::Null {
        return Err(OperationalError::NullTerm);
    }
    Ok(runs(term, trace.events(), trace.terminal()))
}

fn runs(term: &StandardTerm, events: &[Event], w: Terminal) -> bool {
    let mut steps = Vec::new();
    standard_steps(term, &mut steps);
    steps.into_iter().any(|s| match (&s.label, events.split_first()) {
        (TransitionLabel::Term(t), None) => *t == w,
        (TransitionLabel::Normal(e), Some((head, rest))) => e == head && runs(&s.successor, rest, w),
        _ => false,
    })
}

/// Does `term` perform `trace` as its forward behaviour, leaving `compensation`?
pub fn run_lifted_forward(term: &CompensableTerm, trace: &Trace, compensation: &StandardTerm) -> bool {
    fn go(term: &CompensableTerm, events: &[Event], w: Terminal, comp: &StandardTerm) -> bool {
        let mut steps = Vec::new();
        compensable_steps(term, &mut steps);
        steps.into_iter().any(|s| match (s, events.split_first()) {
            (CompensableStep::Terminal(t, c), None) => t == w && c == *comp,
            (CompensableStep::Normal(e, next), Some((head, rest))) => {
                e == *head && go(&next, rest, w, comp)
            }
            _ => false,
        })
    }
    go(term, trace.events(), trace.terminal(), compensation)
}

/// Memoising explorer of the transition relation. Every distinct term visited
/// counts against the state cap.
pub struct Explorer {
    cap: usize,
    visited: usize,
    standard: HashMap<StandardTerm, Arc<BTreeSet<Trace>>>,
    forward: HashMap<CompensableTerm, Arc<BTreeSet<(Trace, StandardTerm)>>>,
}

impl Default for Explorer {
    fn default() -> Self {
        Explorer::new(DEFAULT_STATE_CAP)
    }
}

impl Explorer {
    pub fn new(cap: usize) -> Self {
        Explorer { cap, visited: 0, standard: HashMap::new(), forward: HashMap::new() }
    }

    pub fn states_visited(&self) -> usize {
        self.visited
    }

    fn visit(&mut self) -> Result<(), OperationalError> {
        self.visited += 1;
        if self.visited > self.cap {
            Err(OperationalError::StateCapExceeded { cap: self.cap })
        } else {
            Ok(())
        }
    }

    /// `{ t | term →t 0 }`
    pub fn derived_traces(
        &mut self,
        term: &StandardTerm,
    ) -> Result<Arc<BTreeSet<Trace>>, OperationalError> {
        if let Some(hit) = self.standard.get(term) {
            return Ok(hit.clone());
        }
        self.visit()?;
        let mut steps = Vec::new();
        standard_steps(term, &mut steps);
        let mut out = BTreeSet::new();
        for s in steps {
            debug_assert!(s.successor.measure() < term.measure(), "{term} does not shrink");
            match s.label {
                TransitionLabel::Term(w) => {
                    debug_assert_eq!(s.successor, StandardTerm::Null);
                    out.insert(Trace::terminal_only(w));
                }
                TransitionLabel::Normal(e) => {
                    let tails = self.derived_traces(&s.successor)?;
                    out.extend(tails.iter().map(|t| t.prefixed(&e)));
                }
            }
        }
        let out = Arc::new(out);
        self.standard.insert(term.clone(), out.clone());
        Ok(out)
    }

    /// `{ (t, R) | term →t R }`
    pub fn derived_forward(
        &mut self,
        term: &CompensableTerm,
    ) -> Result<Arc<BTreeSet<(Trace, StandardTerm)>>, OperationalError> {
        if let Some(hit) = self.forward.get(term) {
            return Ok(hit.clone());
        }
        self.visit()?;
        let mut steps = Vec::new();
        compensable_steps(term, &mut steps);
        let mut out = BTreeSet::new();
        for s in steps {
            match s {
                CompensableStep::Terminal(w, comp) => {
                    debug_assert!(comp.measure() < term.measure(), "{term} does not shrink");
                    out.insert((Trace::terminal_only(w), comp));
                }
                CompensableStep::Normal(e, next) => {
                    debug_assert!(next.measure() < term.measure(), "{term} does not shrink");
                    let tails = self.derived_forward(&next)?;
                    out.extend(tails.iter().map(|(t, r)| (t.prefixed(&e), r.clone())));
                }
            }
        }
        let out = Arc::new(out);
        self.forward.insert(term.clone(), out.clone());
        Ok(out)
    }

    /// `{ (t, t') | ∃R. term →t R ∧ R →t' 0 }`
    pub fn derived_pairs(
        &mut self,
        term: &CompensableTerm,
    ) -> Result<BTreeSet<crate::syntax::TracePair>, OperationalError> {
        let forward = self.derived_forward(term)?;
        let mut out = BTreeSet::new();
        for (t, comp) in forward.iter() {
            for t2 in self.derived_traces(comp)?.iter() {
                out.insert(crate::syntax::TracePair::new(t.clone(), t2.clone()));
            }
        }
        Ok(out)
    }
}

pub fn derived_traces_standard(term: &StandardTerm) -> Result<BTreeSet<Trace>, OperationalError> {
    if *term == StandardTerm::Null {
        return Err(OperationalError::NullTerm);
    }
    Ok((*Explorer::default().derived_traces(term)?).clone())
}

pub fn derived_forward(
    term: &CompensableTerm,
) -> Result<BTreeSet<(Trace, StandardTerm)>, OperationalError> {
    Ok((*Explorer::default().derived_forward(term)?).clone())
}

pub fn derived_traces_compensable(
    term: &CompensableTerm,
) -> Result<BTreeSet<crate::syntax::TracePair>, OperationalError> {
    Explorer::default().derived_pairs(term)
}

/// A state of an LTS. Compensable states terminate into the standard state
/// holding their compensation, which is explored in turn.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum LtsNode {
    Standard(StandardTerm),
    Compensable(CompensableTerm),
}

impl std::fmt::Display for LtsNode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            LtsNode::Standard(p) => write!(f, "{p}"),
            LtsNode::Compensable(pp) => write!(f, "{pp}"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Lts {
    /// Index 0 is the root; indices follow breadth-first discovery.
    pub nodes: Vec<LtsNode>,
    pub edges: Vec<(usize, TransitionLabel, usize)>,
}

impl Lts {
    pub fn root(&self) -> &LtsNode {
        &self.nodes[0]
    }

    pub fn terminal_edges(&self) -> impl Iterator<Item = &(usize, TransitionLabel, usize)> {
        self.edges.iter().filter(|(_, l, _)| l.is_terminal())
    }

    /// Graphviz rendering. Edge labels use `*` for successful termination.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph lts {\n    node [shape=box];\n");
        for (i, node) in self.nodes.iter().enumerate() {
            let shape = match node {
                LtsNode::Standard(StandardTerm::Null) => ", shape=doublecircle",
                LtsNode::Compensable(_) => ", style=rounded",
                LtsNode::Standard(_) => "",
            };
            let _ = writeln!(out, "    n{i} [label=\"{}\"{shape}];", escape(&node.to_string()));
        }
        for (from, label, to) in &self.edges {
            let _ = writeln!(out, "    n{from} -> n{to} [label=\"{}\"];", escape(&label.to_string()));
        }
        out.push_str("}\n");
        out
    }
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

pub fn build_lts(root: LtsNode, cap: usize) -> Result<Lts, OperationalError> {
    if root == LtsNode::Standard(StandardTerm::Null) {
        return Err(OperationalError::NullTerm);
    }
    let mut index: HashMap<LtsNode, usize> = HashMap::new();
    let mut nodes = vec![root.clone()];
    let mut edges = Vec::new();
    let mut queue = VecDeque::from([0usize]);
    index.insert(root, 0);
    while let Some(i) = queue.pop_front() {
        let successors: Vec<(TransitionLabel, LtsNode)> = match &nodes[i] {
            LtsNode::Standard(StandardTerm::Null) => Vec::new(),
            LtsNode::Standard(p) => step_standard(p)?
                .into_iter()
                .map(|s| (s.label, LtsNode::Standard(s.successor)))
                .collect(),
            LtsNode::Compensable(pp) => step_compensable(pp)
                .into_iter()
                .map(|s| match s {
                    CompensableStep::Normal(e, next) => {
                        (TransitionLabel::Normal(e), LtsNode::Compensable(next))
                    }
                    CompensableStep::Terminal(w, comp) => {
                        (TransitionLabel::Term(w), LtsNode::Standard(comp))
                    }
                })
                .collect(),
        };
        for (label, node) in successors {
            let j = match index.get(&node) {
                Some(&j) => j,
                None => {
                    if nodes.len() >= cap {
                        return Err(OperationalError::StateCapExceeded { cap });
                    }
                    let j = nodes.len();
                    index.insert(node.clone(), j);
                    nodes.push(node);
                    queue.push_back(j);
                    j
                }
            };
            edges.push((i, label, j));
        }
    }
    Ok(Lts { nodes, edges })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::TracePair;
    use StandardTerm::{Null, Skip, Throw, Yield};

    fn a(name: &str) -> StandardTerm {
        StandardTerm::atom(name).unwrap()
    }

    fn ev(name: &str) -> Event {
        Event::new(name).unwrap()
    }

    fn tr(s: &str) -> Trace {
        s.parse().unwrap()
    }

    fn traces(items: &[&str]) -> BTreeSet<Trace> {
        items.iter().map(|s| tr(s)).collect()
    }

    #[test]
    fn base_rules() {
        assert_eq!(step_standard(&Skip).unwrap(), vec![terminal(Terminal::Tick)]);
        assert_eq!(step_standard(&Throw).unwrap(), vec![terminal(Terminal::Throw)]);
        assert_eq!(
            step_standard(&Yield).unwrap(),
            vec![terminal(Terminal::Tick), terminal(Terminal::Yield)]
        );
        assert_eq!(step_standard(&a("a")).unwrap(), vec![normal(ev("a"), Skip)]);
        assert_eq!(step_standard(&Null), Err(OperationalError::NullTerm));
    }

    #[test]
    fn seq_skip_throw() {
        let t = StandardTerm::seq(Skip, Throw);
        assert_eq!(step_standard(&t).unwrap(), vec![terminal(Terminal::Throw)]);
    }

    #[test]
    fn par_waits_for_both_sides() {
        let t = StandardTerm::par(a("a"), Throw);
        assert_eq!(step_standard(&t).unwrap(), vec![normal(ev("a"), StandardTerm::par(Skip, Throw))]);
    }

    #[test]
    fn block_runs_compensation_of_throw() {
        let t = StandardTerm::block(CompensableTerm::pair(Throw, a("b")));
        // The throwing pair stores SKIP, so the block succeeds at once.
        assert_eq!(step_standard(&t).unwrap(), vec![terminal(Terminal::Tick)]);
    }

    #[test]
    fn compensable_pair_rules() {
        assert_eq!(
            step_compensable(&CompensableTerm::pair(Skip, a("b"))),
            vec![CompensableStep::Terminal(Terminal::Tick, a("b"))]
        );
        assert_eq!(
            step_compensable(&CompensableTerm::pair(Throw, a("b"))),
            vec![CompensableStep::Terminal(Terminal::Throw, Skip)]
        );
    }

    #[test]
    fn aux_accumulates_in_front() {
        let t = CompensableTerm::aux(CompensableTerm::pair(Skip, a("q")), a("p"));
        assert_eq!(
            step_compensable(&t),
            vec![CompensableStep::Terminal(Terminal::Tick, StandardTerm::seq(a("q"), a("p")))]
        );
    }

    #[test]
    fn lifted_runs() {
        assert!(run_lifted(&Skip, &tr("<*>")).unwrap());
        assert!(run_lifted(&StandardTerm::seq(a("a"), Throw), &tr("<a,!>")).unwrap());
        assert!(!run_lifted(&Throw, &tr("<*>")).unwrap());
        assert!(!run_lifted(&StandardTerm::seq(a("a"), Throw), &tr("<a,*>")).unwrap());
    }

    #[test]
    fn derived_standard() {
        assert_eq!(derived_traces_standard(&Skip).unwrap(), traces(&["<*>"]));
        assert_eq!(
            derived_traces_standard(&StandardTerm::seq(a("a"), Throw)).unwrap(),
            traces(&["<a,!>"])
        );
        assert_eq!(derived_traces_standard(&Yield).unwrap(), traces(&["<?>", "<*>"]));
    }

    #[test]
    fn derived_forward_examples() {
        assert_eq!(
            derived_forward(&CompensableTerm::pair(a("a"), a("b"))).unwrap(),
            [(tr("<a,*>"), a("b"))].into()
        );
        assert_eq!(
            derived_forward(&CompensableTerm::pair(Throw, a("b"))).unwrap(),
            [(tr("<!>"), Skip)].into()
        );
        let seq = CompensableTerm::seq(
            CompensableTerm::pair(a("a"), a("a'")),
            CompensableTerm::pair(a("b"), a("b'")),
        );
        assert_eq!(
            derived_forward(&seq).unwrap(),
            [(tr("<a,b,*>"), StandardTerm::seq(a("b'"), a("a'")))].into()
        );
    }

    #[test]
    fn derived_pairs_examples() {
        let pairs = |items: &[&str]| -> BTreeSet<TracePair> {
            items.iter().map(|s| s.parse().unwrap()).collect()
        };
        assert_eq!(
            derived_traces_compensable(&CompensableTerm::pair(a("a"), a("b"))).unwrap(),
            pairs(&["(<a,*>,<b,*>)"])
        );
        assert_eq!(
            derived_traces_compensable(&CompensableTerm::pair(Throw, Skip)).unwrap(),
            pairs(&["(<!>,<*>)"])
        );
        assert_eq!(
            derived_traces_compensable(&CompensableTerm::pair(Yield, Skip)).unwrap(),
            pairs(&["(<?>,<*>)", "(<*>,<*>)"])
        );
    }

    #[test]
    fn lts_shapes() {
        let lts = build_lts(LtsNode::Standard(Skip), DEFAULT_STATE_CAP).unwrap();
        assert_eq!((lts.nodes.len(), lts.edges.len()), (2, 1));

        let diamond = build_lts(LtsNode::Standard(StandardTerm::par(a("a"), a("b"))), 100).unwrap();
        assert_eq!(diamond.nodes.len(), 5);
        assert_eq!(diamond.edges.len(), 5);
        assert_eq!(diamond.terminal_edges().count(), 1);

        let block = StandardTerm::block(CompensableTerm::pair(Throw, a("b")));
        let lts = build_lts(LtsNode::Standard(block), 100).unwrap();
        let terms: Vec<_> = lts.terminal_edges().map(|(_, l, _)| l.clone()).collect();
        assert_eq!(terms, vec![TransitionLabel::Term(Terminal::Tick)]);
    }

    #[test]
    fn lts_cap() {
        let t = StandardTerm::par(a("a"), a("b"));
        assert_eq!(
            build_lts(LtsNode::Standard(t), 3).unwrap_err(),
            OperationalError::StateCapExceeded { cap: 3 }
        );
        let mut ex = Explorer::new(2);
        assert!(ex.derived_traces(&StandardTerm::seq(a("a"), a("b"))).is_err());
    }

    #[test]
    fn dot_output() {
        let lts = build_lts(LtsNode::Standard(StandardTerm::seq(a("a"), Throw)), 10).unwrap();
        let dot = lts.to_dot();
        assert!(dot.starts_with("digraph lts {"));
        assert!(dot.contains("n0 [label=\"a ; THROW\"]"));
        assert!(dot.contains("n0 -> n1 [label=\"a\"]"));
        assert!(dot.contains("[label=\"!\"]"));
    }
}

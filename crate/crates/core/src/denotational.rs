//! Trace operators and the compositional trace semantics.
//!
//! The operators on single traces are exposed as free functions and bundled
//! behind [`TraceOperators`], so an evaluator can be instantiated with an
//! alternative operator set.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::syntax::{CompensableTerm, Event, StandardTerm, Terminal, Term, Trace, TracePair};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DenotationError {
    #[error("the null process has no trace semantics")]
    NullTerm,
    #[error("the auxiliary construct has no trace semantics")]
    AuxTerm,
}

/// A finite set of traces in canonical order.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct TraceSet(pub BTreeSet<Trace>);

/// A finite set of trace pairs in canonical order.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct TracePairSet(pub BTreeSet<TracePair>);

macro_rules! set_newtype {
    ($name:ident, $item:ty) => {
        impl $name {
            pub fn new() -> Self {
                $name(BTreeSet::new())
            }

            pub fn len(&self) -> usize {
                self.0.len()
            }

            pub fn is_empty(&self) -> bool {
                self.0.is_empty()
            }

            pub fn iter(&self) -> impl Iterator<Item = &$item> {
                self.0.iter()
            }

            pub fn contains(&self, item: &$item) -> bool {
                self.0.contains(item)
            }

            /// `(self \ other, other \ self)`
            pub fn differences(&self, other: &Self) -> (Self, Self) {
                (
                    $name(self.0.difference(&other.0).cloned().collect()),
                    $name(other.0.difference(&self.0).cloned().collect()),
                )
            }
        }

        impl FromIterator<$item> for $name {
            fn from_iter<I: IntoIterator<Item = $item>>(iter: I) -> Self {
                $name(iter.into_iter().collect())
            }
        }

        impl From<BTreeSet<$item>> for $name {
            fn from(set: BTreeSet<$item>) -> Self {
                $name(set)
            }
        }

        impl IntoIterator for $name {
            type Item = $item;
            type IntoIter = std::collections::btree_set::IntoIter<$item>;
            fn into_iter(self) -> Self::IntoIter {
                self.0.into_iter()
            }
        }

        impl<'a> IntoIterator for &'a $name {
            type Item = &'a $item;
            type IntoIter = std::collections::btree_set::Iter<'a, $item>;
            fn into_iter(self) -> Self::IntoIter {
                self.0.iter()
            }
        }

        /// One member per line.
        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                for item in &self.0 {
                    writeln!(f, "{item}")?;
                }
                Ok(())
            }
        }

        impl fmt::Debug for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.debug_set().entries(self.0.iter()).finish()
            }
        }
    };
}

set_newtype!(TraceSet, Trace);
set_newtype!(TracePairSet, TracePair);

impl TraceSet {
    /// Token arrays, e.g. `[["a","*"],["!"]]`.
    pub fn to_tokens(&self) -> Vec<Vec<String>> {
        self.0.iter().map(Trace::tokens).collect()
    }
}

impl TracePairSet {
    pub fn to_tokens(&self) -> Vec<[Vec<String>; 2]> {
        self.0.iter().map(|p| [p.forward.tokens(), p.compensation.tokens()]).collect()
    }
}

/// `ω & ω'`. Always a singleton: the join under `✓ < ? < !`.
pub fn sync_terminals(left: Terminal, right: Terminal) -> BTreeSet<Terminal> {
    [left.max(right)].into()
}

/// `p ; q`: `q` follows `p` only when `p` ends with `✓`.
pub fn seq_traces(p: &Trace, q: &Trace) -> Trace {
    if p.terminal() == Terminal::Tick {
        p.splice(q)
    } else {
        p.clone()
    }
}

/// `p ▷ q`: `q` follows `p` only when `p` ends with `!`.
pub fn interrupt_traces(p: &Trace, q: &Trace) -> Trace {
    if p.terminal() == Terminal::Throw {
        p.splice(q)
    } else {
        p.clone()
    }
}

/// All shuffles of `s` and `u` preserving the order within each.
pub fn interleave_events(s: &[Event], u: &[Event]) -> BTreeSet<Vec<Event>> {
    let mut out = BTreeSet::new();
    let mut buf = Vec::with_capacity(s.len() + u.len());
    shuffle(s, u, &mut buf, &mut out);
    out
}

fn shuffle(s: &[Event], u: &[Event], buf: &mut Vec<Event>, out: &mut BTreeSet<Vec<Event>>) {
    match (s.split_first(), u.split_first()) {
        (None, None) => {
            out.insert(buf.clone());
        }
        (left, right) => {
            if let Some((head, rest)) = left {
                buf.push(head.clone());
                shuffle(rest, u, buf, out);
                buf.pop();
            }
            if let Some((head, rest)) = right {
                buf.push(head.clone());
                shuffle(s, rest, buf, out);
                buf.pop();
            }
        }
    }
}

/// `p ∥ q`: every shuffle of the events, closed by the synchronised terminal.
pub fn par_traces(p: &Trace, q: &Trace) -> TraceSet {
    let terminals = sync_terminals(p.terminal(), q.terminal());
    let mut out = BTreeSet::new();
    for events in interleave_events(p.events(), q.events()) {
        for &w in &terminals {
            out.insert(Trace::new(events.clone(), w));
        }
    }
    TraceSet(out)
}

/// `p ÷ q`: the compensation is kept only after successful forward behaviour.
pub fn pair_traces(p: &Trace, q: &Trace) -> TracePair {
    if p.terminal() == Terminal::Tick {
        TracePair::new(p.clone(), q.clone())
    } else {
        TracePair::new(p.clone(), Trace::terminal_only(Terminal::Tick))
    }
}

/// `[p, p']`: success discards the compensation, a throw runs it, a yield
/// contributes nothing.
pub fn block_traces(p: &Trace, compensation: &Trace) -> Option<Trace> {
    match p.terminal() {
        Terminal::Tick => Some(p.clone()),
        Terminal::Throw => Some(p.splice(compensation)),
        Terminal::Yield => None,
    }
}

/// The trace-level operators used by [`Denotation`].
pub trait TraceOperators {
    fn seq(&self, p: &Trace, q: &Trace) -> Trace {
        seq_traces(p, q)
    }

    fn interrupt(&self, p: &Trace, q: &Trace) -> Trace {
        interrupt_traces(p, q)
    }

    fn par(&self, p: &Trace, q: &Trace) -> TraceSet {
        par_traces(p, q)
    }

    fn pair(&self, p: &Trace, q: &Trace) -> TracePair {
        pair_traces(p, q)
    }

    fn block(&self, p: &Trace, compensation: &Trace) -> Option<Trace> {
        block_traces(p, compensation)
    }
}

/// The operator set defined in this module.
#[derive(Debug, Clone, Copy, Default)]
pub struct StandardOperators;

impl TraceOperators for StandardOperators {}

/// Bottom-up evaluator of `T(P)` and `T(PP)`, memoised per subterm.
pub struct Denotation<O = StandardOperators> {
    ops: O,
    standard: HashMap<StandardTerm, Arc<TraceSet>>,
    compensable: HashMap<CompensableTerm, Arc<TracePairSet>>,
}

impl Default for Denotation<StandardOperators> {
    fn default() -> Self {
        Denotation::with_operators(StandardOperators)
    }
}

impl<O: TraceOperators> Denotation<O> {
    pub fn with_operators(ops: O) -> Self {
        Denotation { ops, standard: HashMap::new(), compensable: HashMap::new() }
    }

    pub fn standard(&mut self, term: &StandardTerm) -> Result<Arc<TraceSet>, DenotationError> {
        if let Some(hit) = self.standard.get(term) {
            return Ok(hit.clone());
        }
        let tick = || Trace::terminal_only(Terminal::Tick);
        let set: TraceSet = match term {
            StandardTerm::Null => return Err(DenotationError::NullTerm),
            StandardTerm::Atom(e) => [Trace::new(vec![e.clone()], Terminal::Tick)].into_iter().collect(),
            StandardTerm::Skip => [tick()].into_iter().collect(),
            StandardTerm::Throw => [Trace::terminal_only(Terminal::Throw)].into_iter().collect(),
            StandardTerm::Yield => {
                [Trace::terminal_only(Terminal::Yield), tick()].into_iter().collect()
            }
            StandardTerm::Seq(p, q) => {
                let (tp, tq) = (self.standard(p)?, self.standard(q)?);
                tp.iter()
                    .flat_map(|p| tq.iter().map(move |q| (p, q)))
                    .map(|(p, q)| self.ops.seq(p, q))
                    .collect()
            }
            StandardTerm::Interrupt(p, q) => {
                let (tp, tq) = (self.standard(p)?, self.standard(q)?);
                tp.iter()
                    .flat_map(|p| tq.iter().map(move |q| (p, q)))
                    .map(|(p, q)| self.ops.interrupt(p, q))
                    .collect()
            }
            StandardTerm::Choice(p, q) => {
                let (tp, tq) = (self.standard(p)?, self.standard(q)?);
                tp.iter().chain(tq.iter()).cloned().collect()
            }
            StandardTerm::Par(p, q) => {
                let (tp, tq) = (self.standard(p)?, self.standard(q)?);
                let mut out = BTreeSet::new();
                for p in tp.iter() {
                    for q in tq.iter() {
                        out.extend(self.ops.par(p, q));
                    }
                }
                TraceSet(out)
            }
            StandardTerm::Block(pp) => {
                let tpp = self.compensable(pp)?;
                tpp.iter().filter_map(|tp| self.ops.block(&tp.forward, &tp.compensation)).collect()
            }
        };
        let set = Arc::new(set);
        self.standard.insert(term.clone(), set.clone());
        Ok(set)
    }

    pub fn compensable(
        &mut self,
        term: &CompensableTerm,
    ) -> Result<Arc<TracePairSet>, DenotationError> {
        if let Some(hit) = self.compensable.get(term) {
            return Ok(hit.clone());
        }
        let set: TracePairSet = match term {
            CompensableTerm::Aux(..) => return Err(DenotationError::AuxTerm),
            CompensableTerm::Pair(p, q) => {
                let (tp, tq) = (self.standard(p)?, self.standard(q)?);
                tp.iter()
                    .flat_map(|p| tq.iter().map(move |q| (p, q)))
                    .map(|(p, q)| self.ops.pair(p, q))
                    .collect()
            }
            CompensableTerm::Seq(pp, qq) => {
                let (tpp, tqq) = (self.compensable(pp)?, self.compensable(qq)?);
                let mut out = BTreeSet::new();
                for p in tpp.iter() {
                    if p.forward.terminal() == Terminal::Tick {
                        for q in tqq.iter() {
                            out.insert(TracePair::new(
                                self.ops.seq(&p.forward, &q.forward),
                                self.ops.seq(&q.compensation, &p.compensation),
                            ));
                        }
                    } else if !tqq.is_empty() {
                        out.insert(p.clone());
                    }
                }
                TracePairSet(out)
            }
            CompensableTerm::Choice(pp, qq) => {
                let (tpp, tqq) = (self.compensable(pp)?, self.compensable(qq)?);
                tpp.iter().chain(tqq.iter()).cloned().collect()
            }
            CompensableTerm::Par(pp, qq) => {
                let (tpp, tqq) = (self.compensable(pp)?, self.compensable(qq)?);
                let mut out = BTreeSet::new();
                for p in tpp.iter() {
                    for q in tqq.iter() {
                        let comps = self.ops.par(&p.compensation, &q.compensation);
                        for fwd in self.ops.par(&p.forward, &q.forward) {
                            for comp in comps.iter() {
                                out.insert(TracePair::new(fwd.clone(), comp.clone()));
                            }
                        }
                    }
                }
                TracePairSet(out)
            }
        };
        let set = Arc::new(set);
        self.compensable.insert(term.clone(), set.clone());
        Ok(set)
    }
}

pub fn traces_standard(term: &StandardTerm) -> Result<TraceSet, DenotationError> {
    Ok((*Denotation::default().standard(term)?).clone())
}

pub fn traces_compensable(term: &CompensableTerm) -> Result<TracePairSet, DenotationError> {
    Ok((*Denotation::default().compensable(term)?).clone())
}

/// Some trace ends with `✓` or `!` (for compensable terms: some forward trace).
pub fn check_healthiness(term: &Term) -> Result<bool, DenotationError> {
    let healthy = |w: Terminal| matches!(w, Terminal::Tick | Terminal::Throw);
    Ok(match term {
        Term::Standard(p) => traces_standard(p)?.iter().any(|t| healthy(t.terminal())),
        Term::Compensable(pp) => {
            traces_compensable(pp)?.iter().any(|t| healthy(t.forward.terminal()))
        }
    })
}

pub fn is_healthy_set(set: &TraceSet) -> bool {
    set.iter().any(|t| matches!(t.terminal(), Terminal::Tick | Terminal::Throw))
}

pub fn is_healthy_pair_set(set: &TracePairSet) -> bool {
    set.iter().any(|t| matches!(t.forward.terminal(), Terminal::Tick | Terminal::Throw))
}

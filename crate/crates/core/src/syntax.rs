//! Process terms, traces and their canonical rendering.
//!
//! Standard processes ([`StandardTerm`]) and compensable processes
//! ([`CompensableTerm`]) are immutable trees with structural equality. Children
//! are reference counted so that successor terms produced by the transition
//! relation share structure with their predecessors.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use thiserror::Error;

/// Names that can never be used as events.
pub const RESERVED_WORDS: [&str; 6] = ["SKIP", "THROW", "YIELD", "SKIPP", "THROWW", "YIELDD"];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SyntaxError {
    #[error("invalid event name `{0}`")]
    InvalidEvent(String),
    #[error("`{0}` is not a compensable alias (expected SKIPP, THROWW or YIELDD)")]
    UnknownAlias(String),
    #[error("malformed trace `{0}`")]
    MalformedTrace(String),
}

/// A normal observable action.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Event(Arc<str>);

impl Event {
    pub fn new(name: &str) -> Result<Self, SyntaxError> {
        if is_identifier(name) && !RESERVED_WORDS.contains(&name) {
            Ok(Event(Arc::from(name)))
        } else {
            Err(SyntaxError::InvalidEvent(name.to_string()))
        }
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Display for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// `alpha (alnum | '_')* '\''*`
pub(crate) fn is_identifier(name: &str) -> bool {
    let body = name.trim_end_matches('\'');
    let mut chars = body.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Terminal events. The derived order `Tick < Yield < Throw` is the order
/// used when two parallel branches synchronise on termination.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Terminal {
    Tick,
    Yield,
    Throw,
}

impl Terminal {
    pub const ALL: [Terminal; 3] = [Terminal::Tick, Terminal::Yield, Terminal::Throw];

    /// ASCII glyph: `*` for success, `!` for throw, `?` for yield.
    pub fn glyph(self) -> &'static str {
        match self {
            Terminal::Tick => "*",
            Terminal::Throw => "!",
            Terminal::Yield => "?",
        }
    }

    pub fn from_glyph(s: &str) -> Option<Terminal> {
        match s {
            "*" => Some(Terminal::Tick),
            "!" => Some(Terminal::Throw),
            "?" => Some(Terminal::Yield),
            _ => None,
        }
    }
}

impl fmt::Display for Terminal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.glyph())
    }
}

/// A finite sequence of events closed by exactly one terminal.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Trace {
    events: Vec<Event>,
    terminal: Terminal,
}

impl Trace {
    pub fn new(events: Vec<Event>, terminal: Terminal) -> Self {
        Trace { events, terminal }
    }

    /// The minimal trace `<ω>`.
    pub fn terminal_only(terminal: Terminal) -> Self {
        Trace { events: Vec::new(), terminal }
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    pub fn terminal(&self) -> Terminal {
        self.terminal
    }

    /// Number of symbols including the terminal.
    pub fn len(&self) -> usize {
        self.events.len() + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `<a>t`
    pub fn prefixed(&self, event: &Event) -> Trace {
        let mut events = Vec::with_capacity(self.events.len() + 1);
        events.push(event.clone());
        events.extend_from_slice(&self.events);
        Trace { events, terminal: self.terminal }
    }

    /// Events of `self` followed by all of `rest` (keeping `rest`'s terminal).
    pub fn splice(&self, rest: &Trace) -> Trace {
        let mut events = Vec::with_capacity(self.events.len() + rest.events.len());
        events.extend_from_slice(&self.events);
        events.extend_from_slice(&rest.events);
        Trace { events, terminal: rest.terminal }
    }

    /// Token strings, terminal last: `["a", "b", "*"]`.
    pub fn tokens(&self) -> Vec<String> {
        self.events
            .iter()
            .map(|e| e.name().to_string())
            .chain(std::iter::once(self.terminal.glyph().to_string()))
            .collect()
    }

    pub fn from_tokens<S: AsRef<str>>(tokens: &[S]) -> Result<Trace, SyntaxError> {
        let joined = || tokens.iter().map(|t| t.as_ref()).collect::<Vec<_>>().join(",");
        let (last, init) = tokens
            .split_last()
            .ok_or_else(|| SyntaxError::MalformedTrace(String::new()))?;
        let terminal = Terminal::from_glyph(last.as_ref())
            .ok_or_else(|| SyntaxError::MalformedTrace(joined()))?;
        let events = init
            .iter()
            .map(|t| Event::new(t.as_ref()))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| SyntaxError::MalformedTrace(joined()))?;
        Ok(Trace { events, terminal })
    }
}

// Canonical order: shorter traces first, then lexicographic on events, then terminal.
impl Ord for Trace {
    fn cmp(&self, other: &Self) -> Ordering {
        self.events
            .len()
            .cmp(&other.events.len())
            .then_with(|| self.events.cmp(&other.events))
            .then_with(|| self.terminal.cmp(&other.terminal))
    }
}

impl PartialOrd for Trace {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Trace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("<")?;
        for e in &self.events {
            write!(f, "{e},")?;
        }
        write!(f, "{}>", self.terminal)
    }
}

impl fmt::Debug for Trace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Trace {
    type Err = SyntaxError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let inner = s
            .trim()
            .strip_prefix('<')
            .and_then(|s| s.strip_suffix('>'))
            .ok_or_else(|| SyntaxError::MalformedTrace(s.to_string()))?;
        let tokens: Vec<&str> = inner.split(',').map(str::trim).collect();
        Trace::from_tokens(&tokens).map_err(|_| SyntaxError::MalformedTrace(s.to_string()))
    }
}

/// Forward behaviour together with its compensation.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TracePair {
    pub forward: Trace,
    pub compensation: Trace,
}

impl TracePair {
    pub fn new(forward: Trace, compensation: Trace) -> Self {
        TracePair { forward, compensation }
    }
}

impl fmt::Display for TracePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.forward, self.compensation)
    }
}

impl fmt::Debug for TracePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for TracePair {
    type Err = SyntaxError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || SyntaxError::MalformedTrace(s.to_string());
        let inner = s
            .trim()
            .strip_prefix('(')
            .and_then(|s| s.strip_suffix(')'))
            .ok_or_else(bad)?;
        let split = inner.find('>').ok_or_else(bad)? + 1;
        let (fwd, rest) = inner.split_at(split);
        let comp = rest.trim_start().strip_prefix(',').ok_or_else(bad)?;
        Ok(TracePair { forward: fwd.parse()?, compensation: comp.parse()? })
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StandardTerm {
    Atom(Event),
    Skip,
    Throw,
    Yield,
    Seq(Arc<StandardTerm>, Arc<StandardTerm>),
    Choice(Arc<StandardTerm>, Arc<StandardTerm>),
    Par(Arc<StandardTerm>, Arc<StandardTerm>),
    Interrupt(Arc<StandardTerm>, Arc<StandardTerm>),
    Block(Arc<CompensableTerm>),
    /// The terminated process. Never part of a user term.
    Null,
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CompensableTerm {
    Pair(Arc<StandardTerm>, Arc<StandardTerm>),
    Seq(Arc<CompensableTerm>, Arc<CompensableTerm>),
    Choice(Arc<CompensableTerm>, Arc<CompensableTerm>),
    Par(Arc<CompensableTerm>, Arc<CompensableTerm>),
    /// `<QQ, P>`: `QQ` still running, `P` the compensation already stored.
    /// Only arises during execution.
    Aux(Arc<CompensableTerm>, Arc<StandardTerm>),
}

impl StandardTerm {
    pub fn atom(name: &str) -> Result<Self, SyntaxError> {
        Event::new(name).map(StandardTerm::Atom)
    }

    pub fn seq(p: StandardTerm, q: StandardTerm) -> Self {
        StandardTerm::Seq(Arc::new(p), Arc::new(q))
    }

    pub fn choice(p: StandardTerm, q: StandardTerm) -> Self {
        StandardTerm::Choice(Arc::new(p), Arc::new(q))
    }

    pub fn par(p: StandardTerm, q: StandardTerm) -> Self {
        StandardTerm::Par(Arc::new(p), Arc::new(q))
    }

    pub fn interrupt(p: StandardTerm, q: StandardTerm) -> Self {
        StandardTerm::Interrupt(Arc::new(p), Arc::new(q))
    }

    pub fn block(pp: CompensableTerm) -> Self {
        StandardTerm::Block(Arc::new(pp))
    }

    pub fn is_leaf(&self) -> bool {
        matches!(
            self,
            StandardTerm::Atom(_)
                | StandardTerm::Skip
                | StandardTerm::Throw
                | StandardTerm::Yield
                | StandardTerm::Null
        )
    }

    /// Number of operator nodes. Leaves and compensation pairs count zero.
    pub fn operator_count(&self) -> usize {
        match self {
            StandardTerm::Atom(_)
            | StandardTerm::Skip
            | StandardTerm::Throw
            | StandardTerm::Yield
            | StandardTerm::Null => 0,
            StandardTerm::Seq(p, q)
            | StandardTerm::Choice(p, q)
            | StandardTerm::Par(p, q)
            | StandardTerm::Interrupt(p, q) => 1 + p.operator_count() + q.operator_count(),
            StandardTerm::Block(pp) => 1 + pp.operator_count(),
        }
    }

    /// Height, with leaves at depth 1 and compensation pairs not adding a level.
    pub fn depth(&self) -> usize {
        match self {
            StandardTerm::Atom(_)
            | StandardTerm::Skip
            | StandardTerm::Throw
            | StandardTerm::Yield
            | StandardTerm::Null => 1,
            StandardTerm::Seq(p, q)
            | StandardTerm::Choice(p, q)
            | StandardTerm::Par(p, q)
            | StandardTerm::Interrupt(p, q) => 1 + p.depth().max(q.depth()),
            StandardTerm::Block(pp) => 1 + pp.depth(),
        }
    }

    /// Weighted size that strictly decreases along every transition.
    pub fn measure(&self) -> usize {
        match self {
            StandardTerm::Null => 0,
            StandardTerm::Skip | StandardTerm::Throw | StandardTerm::Yield => 1,
            StandardTerm::Atom(_) => 2,
            StandardTerm::Seq(p, q)
            | StandardTerm::Choice(p, q)
            | StandardTerm::Par(p, q)
            | StandardTerm::Interrupt(p, q) => 1 + p.measure() + q.measure(),
            StandardTerm::Block(pp) => 1 + pp.measure(),
        }
    }

    pub fn events(&self) -> BTreeSet<Event> {
        let mut out = BTreeSet::new();
        collect_std_events(self, &mut out);
        out
    }
}

impl CompensableTerm {
    pub fn pair(p: StandardTerm, q: StandardTerm) -> Self {
        CompensableTerm::Pair(Arc::new(p), Arc::new(q))
    }

    pub fn seq(pp: CompensableTerm, qq: CompensableTerm) -> Self {
        CompensableTerm::Seq(Arc::new(pp), Arc::new(qq))
    }

    pub fn choice(pp: CompensableTerm, qq: CompensableTerm) -> Self {
        CompensableTerm::Choice(Arc::new(pp), Arc::new(qq))
    }

    pub fn par(pp: CompensableTerm, qq: CompensableTerm) -> Self {
        CompensableTerm::Par(Arc::new(pp), Arc::new(qq))
    }

    pub fn aux(qq: CompensableTerm, p: StandardTerm) -> Self {
        CompensableTerm::Aux(Arc::new(qq), Arc::new(p))
    }

    pub fn operator_count(&self) -> usize {
        match self {
            CompensableTerm::Pair(p, q) => p.operator_count() + q.operator_count(),
            CompensableTerm::Seq(p, q) | CompensableTerm::Choice(p, q) | CompensableTerm::Par(p, q) => {
                1 + p.operator_count() + q.operator_count()
            }
            CompensableTerm::Aux(qq, p) => 1 + qq.operator_count() + p.operator_count(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            CompensableTerm::Pair(p, q) => p.depth().max(q.depth()),
            CompensableTerm::Seq(p, q) | CompensableTerm::Choice(p, q) | CompensableTerm::Par(p, q) => {
                1 + p.depth().max(q.depth())
            }
            CompensableTerm::Aux(qq, p) => 1 + qq.depth().max(p.depth()),
        }
    }

    pub fn measure(&self) -> usize {
        match self {
            CompensableTerm::Pair(p, q) => 1 + p.measure() + q.measure(),
            CompensableTerm::Seq(p, q) | CompensableTerm::Choice(p, q) | CompensableTerm::Par(p, q) => {
                1 + p.measure() + q.measure()
            }
            CompensableTerm::Aux(qq, p) => 1 + qq.measure() + p.measure(),
        }
    }

    pub fn events(&self) -> BTreeSet<Event> {
        let mut out = BTreeSet::new();
        collect_comp_events(self, &mut out);
        out
    }
}

fn collect_std_events(term: &StandardTerm, out: &mut BTreeSet<Event>) {
    match term {
        StandardTerm::Atom(e) => {
            out.insert(e.clone());
        }
        StandardTerm::Skip | StandardTerm::Throw | StandardTerm::Yield | StandardTerm::Null => {}
        StandardTerm::Seq(p, q)
        | StandardTerm::Choice(p, q)
        | StandardTerm::Par(p, q)
        | StandardTerm::Interrupt(p, q) => {
            collect_std_events(p, out);
            collect_std_events(q, out);
        }
        StandardTerm::Block(pp) => collect_comp_events(pp, out),
    }
}

fn collect_comp_events(term: &CompensableTerm, out: &mut BTreeSet<Event>) {
    match term {
        CompensableTerm::Pair(p, q) => {
            collect_std_events(p, out);
            collect_std_events(q, out);
        }
        CompensableTerm::Seq(p, q) | CompensableTerm::Choice(p, q) | CompensableTerm::Par(p, q) => {
            collect_comp_events(p, out);
            collect_comp_events(q, out);
        }
        CompensableTerm::Aux(qq, p) => {
            collect_comp_events(qq, out);
            collect_std_events(p, out);
        }
    }
}

/// Either kind of process term.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Standard(StandardTerm),
    Compensable(CompensableTerm),
}

impl Term {
    pub fn kind(&self) -> TermKind {
        match self {
            Term::Standard(_) => TermKind::Standard,
            Term::Compensable(_) => TermKind::Compensable,
        }
    }

    pub fn operator_count(&self) -> usize {
        match self {
            Term::Standard(p) => p.operator_count(),
            Term::Compensable(pp) => pp.operator_count(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Term::Standard(p) => p.depth(),
            Term::Compensable(pp) => pp.depth(),
        }
    }

    pub fn as_standard(&self) -> Option<&StandardTerm> {
        match self {
            Term::Standard(p) => Some(p),
            Term::Compensable(_) => None,
        }
    }

    pub fn as_compensable(&self) -> Option<&CompensableTerm> {
        match self {
            Term::Compensable(pp) => Some(pp),
            Term::Standard(_) => None,
        }
    }
}

impl From<StandardTerm> for Term {
    fn from(p: StandardTerm) -> Self {
        Term::Standard(p)
    }
}

impl From<CompensableTerm> for Term {
    fn from(pp: CompensableTerm) -> Self {
        Term::Compensable(pp)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TermKind {
    Standard,
    Compensable,
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TransitionLabel {
    Normal(Event),
    Term(Terminal),
}

impl TransitionLabel {
    pub fn is_terminal(&self) -> bool {
        matches!(self, TransitionLabel::Term(_))
    }
}

impl fmt::Display for TransitionLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TransitionLabel::Normal(e) => write!(f, "{e}"),
            TransitionLabel::Term(w) => write!(f, "{w}"),
        }
    }
}

impl fmt::Debug for TransitionLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A reason a term is not an admissible user term.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Violation {
    /// `path` lists child indices from the root.
    NullNode { path: Vec<usize> },
    AuxNode { path: Vec<usize> },
    EventOutsideAlphabet { path: Vec<usize>, event: Event },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let at = |path: &[usize]| {
            if path.is_empty() {
                "root".to_string()
            } else {
                path.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(".")
            }
        };
        match self {
            Violation::NullNode { path } => write!(f, "null process at {}", at(path)),
            Violation::AuxNode { path } => write!(f, "auxiliary construct at {}", at(path)),
            Violation::EventOutsideAlphabet { path, event } => {
                write!(f, "event `{event}` at {} is not in the alphabet", at(path))
            }
        }
    }
}

/// Reports every Null node, Aux node, and (when an alphabet is given) every
/// event outside the alphabet. An empty result means the term is admissible.
pub fn validate_user_term(term: &Term, alphabet: Option<&BTreeSet<Event>>) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut path = Vec::new();
    match term {
        Term::Standard(p) => validate_std(p, alphabet, &mut path, &mut out),
        Term::Compensable(pp) => validate_comp(pp, alphabet, &mut path, &mut out),
    }
    out
}

fn validate_std(
    term: &StandardTerm,
    alphabet: Option<&BTreeSet<Event>>,
    path: &mut Vec<usize>,
    out: &mut Vec<Violation>,
) {
    match term {
        StandardTerm::Atom(e) => {
            if alphabet.is_some_and(|a| !a.contains(e)) {
                out.push(Violation::EventOutsideAlphabet { path: path.clone(), event: e.clone() });
            }
        }
        StandardTerm::Skip | StandardTerm::Throw | StandardTerm::Yield => {}
        StandardTerm::Null => out.push(Violation::NullNode { path: path.clone() }),
        StandardTerm::Seq(p, q)
        | StandardTerm::Choice(p, q)
        | StandardTerm::Par(p, q)
        | StandardTerm::Interrupt(p, q) => {
            path.push(0);
            validate_std(p, alphabet, path, out);
            *path.last_mut().unwrap() = 1;
            validate_std(q, alphabet, path, out);
            path.pop();
        }
        StandardTerm::Block(pp) => {
            path.push(0);
            validate_comp(pp, alphabet, path, out);
            path.pop();
        }
    }
}

fn validate_comp(
    term: &CompensableTerm,
    alphabet: Option<&BTreeSet<Event>>,
    path: &mut Vec<usize>,
    out: &mut Vec<Violation>,
) {
    match term {
        CompensableTerm::Pair(p, q) => {
            path.push(0);
            validate_std(p, alphabet, path, out);
            *path.last_mut().unwrap() = 1;
            validate_std(q, alphabet, path, out);
            path.pop();
        }
        CompensableTerm::Seq(p, q) | CompensableTerm::Choice(p, q) | CompensableTerm::Par(p, q) => {
            path.push(0);
            validate_comp(p, alphabet, path, out);
            *path.last_mut().unwrap() = 1;
            validate_comp(q, alphabet, path, out);
            path.pop();
        }
        CompensableTerm::Aux(qq, p) => {
            out.push(Violation::AuxNode { path: path.clone() });
            path.push(0);
            validate_comp(qq, alphabet, path, out);
            *path.last_mut().unwrap() = 1;
            validate_std(p, alphabet, path, out);
            path.pop();
        }
    }
}

/// Expands `SKIPP`, `THROWW` and `YIELDD` into compensation pairs.
pub fn desugar_alias(name: &str) -> Result<CompensableTerm, SyntaxError> {
    let forward = match name {
        "SKIPP" => StandardTerm::Skip,
        "THROWW" => StandardTerm::Throw,
        "YIELDD" => StandardTerm::Yield,
        other => return Err(SyntaxError::UnknownAlias(other.to_string())),
    };
    Ok(CompensableTerm::pair(forward, StandardTerm::Skip))
}

// Pretty printing. Operands of a binary operator are parenthesised whenever
// they are themselves a different binary operator; chains of one operator are
// printed left-associatively. Compensation pair operands are parenthesised
// unless they are leaves or blocks.

#[derive(Clone, Copy, PartialEq, Eq)]
enum Op {
    Seq,
    Choice,
    Par,
    Interrupt,
}

impl Op {
    fn symbol(self) -> &'static str {
        match self {
            Op::Seq => ";",
            Op::Choice => "[]",
            Op::Par => "||",
            Op::Interrupt => "|>",
        }
    }
}

fn std_op(term: &StandardTerm) -> Option<(Op, &StandardTerm, &StandardTerm)> {
    match term {
        StandardTerm::Seq(p, q) => Some((Op::Seq, p, q)),
        StandardTerm::Choice(p, q) => Some((Op::Choice, p, q)),
        StandardTerm::Par(p, q) => Some((Op::Par, p, q)),
        StandardTerm::Interrupt(p, q) => Some((Op::Interrupt, p, q)),
        _ => None,
    }
}

fn comp_op(term: &CompensableTerm) -> Option<(Op, &CompensableTerm, &CompensableTerm)> {
    match term {
        CompensableTerm::Seq(p, q) => Some((Op::Seq, p, q)),
        CompensableTerm::Choice(p, q) => Some((Op::Choice, p, q)),
        CompensableTerm::Par(p, q) => Some((Op::Par, p, q)),
        _ => None,
    }
}

fn write_std(term: &StandardTerm, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if let Some((op, p, q)) = std_op(term) {
        match std_op(p) {
            Some((inner, ..)) if inner != op => write_std_parens(p, f)?,
            _ => write_std(p, f)?,
        }
        write!(f, " {} ", op.symbol())?;
        return if std_op(q).is_some() { write_std_parens(q, f) } else { write_std(q, f) };
    }
    match term {
        StandardTerm::Atom(e) => write!(f, "{e}"),
        StandardTerm::Skip => f.write_str("SKIP"),
        StandardTerm::Throw => f.write_str("THROW"),
        StandardTerm::Yield => f.write_str("YIELD"),
        StandardTerm::Null => f.write_str("0"),
        StandardTerm::Block(pp) => {
            f.write_str("[ ")?;
            write_comp(pp, f)?;
            f.write_str(" ]")
        }
        _ => unreachable!("binary operators handled above"),
    }
}

fn write_std_parens(term: &StandardTerm, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    f.write_str("(")?;
    write_std(term, f)?;
    f.write_str(")")
}

fn write_pair_operand(term: &StandardTerm, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if std_op(term).is_some() {
        write_std_parens(term, f)
    } else {
        write_std(term, f)
    }
}

fn write_comp(term: &CompensableTerm, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if let Some((op, p, q)) = comp_op(term) {
        match comp_op(p) {
            Some((inner, ..)) if inner != op => write_comp_parens(p, f)?,
            _ => write_comp(p, f)?,
        }
        write!(f, " {} ", op.symbol())?;
        return if comp_op(q).is_some() { write_comp_parens(q, f) } else { write_comp(q, f) };
    }
    match term {
        CompensableTerm::Pair(p, q) => {
            if **q == StandardTerm::Skip {
                match **p {
                    StandardTerm::Skip => return f.write_str("SKIPP"),
                    StandardTerm::Throw => return f.write_str("THROWW"),
                    StandardTerm::Yield => return f.write_str("YIELDD"),
                    _ => {}
                }
            }
            write_pair_operand(p, f)?;
            f.write_str(" % ")?;
            write_pair_operand(q, f)
        }
        CompensableTerm::Aux(qq, p) => {
            f.write_str("<")?;
            write_comp(qq, f)?;
            f.write_str(", ")?;
            write_std(p, f)?;
            f.write_str(">")
        }
        _ => unreachable!("binary operators handled above"),
    }
}

fn write_comp_parens(term: &CompensableTerm, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    f.write_str("(")?;
    write_comp(term, f)?;
    f.write_str(")")
}

impl fmt::Display for StandardTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_std(self, f)
    }
}

impl fmt::Debug for StandardTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_std(self, f)
    }
}

impl fmt::Display for CompensableTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_comp(self, f)
    }
}

impl fmt::Debug for CompensableTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_comp(self, f)
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Standard(p) => write_std(p, f),
            Term::Compensable(pp) => write_comp(pp, f),
        }
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Canonical concrete syntax of a term.
pub fn pretty_print(term: &Term) -> String {
    term.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(name: &str) -> StandardTerm {
        StandardTerm::atom(name).unwrap()
    }

    #[test]
    fn event_names() {
        assert!(Event::new("a").is_ok());
        assert!(Event::new("PackItem1").is_ok());
        assert!(Event::new("a''").is_ok());
        assert!(Event::new("").is_err());
        assert!(Event::new("1a").is_err());
        assert!(Event::new("a'b").is_err());
        for w in RESERVED_WORDS {
            assert!(Event::new(w).is_err(), "{w}");
        }
    }

    #[test]
    fn terminal_order() {
        assert!(Terminal::Tick < Terminal::Yield);
        assert!(Terminal::Yield < Terminal::Throw);
    }

    #[test]
    fn trace_order_is_length_then_lexicographic() {
        let t1: Trace = "<b,*>".parse().unwrap();
        let t2: Trace = "<a,a,*>".parse().unwrap();
        let t3: Trace = "<a,*>".parse().unwrap();
        let t4: Trace = "<*>".parse().unwrap();
        let mut v = vec![t2.clone(), t1.clone(), t3.clone(), t4.clone()];
        v.sort();
        assert_eq!(v, vec![t4, t3, t1, t2]);
    }

    #[test]
    fn trace_text_round_trip() {
        for s in ["<*>", "<!>", "<?>", "<a,b',*>"] {
            let t: Trace = s.parse().unwrap();
            assert_eq!(t.to_string(), s);
            assert_eq!(Trace::from_tokens(&t.tokens()).unwrap(), t);
        }
        let p: TracePair = "(<a,!>,<b,*>)".parse().unwrap();
        assert_eq!(p.to_string(), "(<a,!>,<b,*>)");
        assert!("<a>".parse::<Trace>().is_err());
        assert!("<*,a>".parse::<Trace>().is_err());
        assert!("a,*".parse::<Trace>().is_err());
    }

    #[test]
    fn validate_examples() {
        assert!(validate_user_term(&Term::Standard(a("a")), None).is_empty());
        assert_eq!(
            validate_user_term(&Term::Standard(StandardTerm::Null), None),
            vec![Violation::NullNode { path: vec![] }]
        );
        let aux = CompensableTerm::aux(CompensableTerm::pair(a("a"), a("b")), StandardTerm::Skip);
        assert_eq!(
            validate_user_term(&Term::Compensable(aux), None),
            vec![Violation::AuxNode { path: vec![] }]
        );
        let alphabet: BTreeSet<Event> = [Event::new("a").unwrap()].into();
        let t = Term::Standard(StandardTerm::seq(a("a"), a("c")));
        assert_eq!(
            validate_user_term(&t, Some(&alphabet)),
            vec![Violation::EventOutsideAlphabet { path: vec![1], event: Event::new("c").unwrap() }]
        );
    }

    #[test]
    fn aliases() {
        use StandardTerm::*;
        assert_eq!(desugar_alias("SKIPP").unwrap(), CompensableTerm::pair(Skip, Skip));
        assert_eq!(desugar_alias("YIELDD").unwrap(), CompensableTerm::pair(Yield, Skip));
        assert_eq!(desugar_alias("THROWW").unwrap(), CompensableTerm::pair(Throw, Skip));
        assert!(desugar_alias("SKIP").is_err());
    }

    #[test]
    fn printing() {
        let t = StandardTerm::seq(a("a"), StandardTerm::Throw);
        assert_eq!(t.to_string(), "a ; THROW");
        let b = StandardTerm::block(CompensableTerm::pair(a("a"), a("b")));
        assert_eq!(b.to_string(), "[ a % b ]");
        let p = StandardTerm::par(StandardTerm::seq(a("a"), a("b")), StandardTerm::Skip);
        assert_eq!(p.to_string(), "(a ; b) || SKIP");
        let chain = StandardTerm::seq(StandardTerm::seq(a("a"), a("b")), a("c"));
        assert_eq!(chain.to_string(), "a ; b ; c");
        let right = StandardTerm::seq(a("a"), StandardTerm::seq(a("b"), a("c")));
        assert_eq!(right.to_string(), "a ; (b ; c)");
        let pair = CompensableTerm::pair(StandardTerm::seq(a("a"), a("b")), StandardTerm::Skip);
        assert_eq!(pair.to_string(), "(a ; b) % SKIP");
        assert_eq!(desugar_alias("THROWW").unwrap().to_string(), "THROWW");
    }

    #[test]
    fn measures() {
        let t = StandardTerm::par(a("a"), StandardTerm::Throw);
        assert_eq!(t.operator_count(), 1);
        assert_eq!(t.depth(), 2);
        let b = StandardTerm::block(CompensableTerm::pair(a("a"), a("b")));
        assert_eq!(b.operator_count(), 1);
        assert_eq!(b.depth(), 2);
        assert_eq!(CompensableTerm::pair(a("a"), a("b")).operator_count(), 0);
    }
}

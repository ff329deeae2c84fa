//! Compensating CSP: an executable operational semantics, a compositional
//! trace semantics, and a checker that compares the two.
//!
//! ```
//! use ccsp::equivalence::{check_standard, Status};
//! use ccsp::parser::parse_standard;
//!
//! let term = parse_standard("[ a % b ; THROWW ]").unwrap();
//! let verdict = check_standard(&term).unwrap();
//! assert_eq!(verdict.status, Status::Equal);
//! assert_eq!(verdict.operational.to_string(), "<a,b,*>\n");
//! ```

pub mod cli;
pub mod denotational;
pub mod equivalence;
pub mod operational;
pub mod parallel;
pub mod parser;
pub mod syntax;

pub use syntax::{CompensableTerm, Event, StandardTerm, Term, TermKind, Terminal, Trace, TracePair};

//! Concrete ASCII syntax.
//!
//! ```text
//! std  := par
//! par  := int ("||" int)*
//! int  := cho ("|>" cho)*
//! cho  := seq ("[]" seq)*
//! seq  := atom (";" atom)*
//! atom := IDENT | "SKIP" | "THROW" | "YIELD" | "(" std ")" | "[" comp "]"
//!
//! comp  := cpar
//! cpar  := ccho ("||" ccho)*
//! ccho  := cseq ("[]" cseq)*
//! cseq  := pair (";" pair)*
//! pair  := atom "%" atom | "SKIPP" | "THROWW" | "YIELDD" | "(" comp ")"
//! ```
//!
//! Binary operators associate to the left; `%` does not associate.

use std::fmt;

use thiserror::Error;

use crate::syntax::{desugar_alias, is_identifier, CompensableTerm, Event, StandardTerm};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("at byte {position}: expected {expected}, found {found}")]
    Syntax { position: usize, expected: String, found: String },
    #[error("at byte {position}: {message}")]
    KindMismatch { position: usize, message: String },
}

impl ParseError {
    pub fn position(&self) -> usize {
        match self {
            ParseError::Syntax { position, .. } | ParseError::KindMismatch { position, .. } => {
                *position
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Skip,
    Throw,
    Yield,
    Alias(&'static str),
    Semi,
    Bar2,
    Box,
    Interrupt,
    Percent,
    LBrack,
    RBrack,
    LParen,
    RParen,
    Invalid(char),
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Skip => f.write_str("`SKIP`"),
            Tok::Throw => f.write_str("`THROW`"),
            Tok::Yield => f.write_str("`YIELD`"),
            Tok::Alias(a) => write!(f, "`{a}`"),
            Tok::Semi => f.write_str("`;`"),
            Tok::Bar2 => f.write_str("`||`"),
            Tok::Box => f.write_str("`[]`"),
            Tok::Interrupt => f.write_str("`|>`"),
            Tok::Percent => f.write_str("`%`"),
            Tok::LBrack => f.write_str("`[`"),
            Tok::RBrack => f.write_str("`]`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::Invalid(c) => write!(f, "`{c}`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

/// Tokens with byte offsets. Lexing stops at the first invalid character,
/// which becomes an `Invalid` token followed by `Eof`.
fn lex(text: &str) -> Vec<(usize, Tok)> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = text[i..].chars().next().unwrap();
        if c.is_whitespace() {
            i += c.len_utf8();
            continue;
        }
        let two = text.get(i..i + 2);
        let (tok, len) = match (c, two) {
            (_, Some("||")) => (Tok::Bar2, 2),
            (_, Some("|>")) => (Tok::Interrupt, 2),
            (_, Some("[]")) => (Tok::Box, 2),
            (';', _) => (Tok::Semi, 1),
            ('%', _) => (Tok::Percent, 1),
            ('[', _) => (Tok::LBrack, 1),
            (']', _) => (Tok::RBrack, 1),
            ('(', _) => (Tok::LParen, 1),
            (')', _) => (Tok::RParen, 1),
            (c, _) if c.is_ascii_alphabetic() => {
                let mut end = i;
                while end < bytes.len() && (bytes[end].is_ascii_alphanumeric() || bytes[end] == b'_')
                {
                    end += 1;
                }
                while end < bytes.len() && bytes[end] == b'\'' {
                    end += 1;
                }
                let word = &text[i..end];
                let tok = match word {
                    "SKIP" => Tok::Skip,
                    "THROW" => Tok::Throw,
                    "YIELD" => Tok::Yield,
                    "SKIPP" => Tok::Alias("SKIPP"),
                    "THROWW" => Tok::Alias("THROWW"),
                    "YIELDD" => Tok::Alias("YIELDD"),
                    _ => {
                        debug_assert!(is_identifier(word));
                        Tok::Ident(word.to_string())
                    }
                };
                (tok, end - i)
            }
            (c, _) => {
                out.push((i, Tok::Invalid(c)));
                out.push((bytes.len(), Tok::Eof));
                return out;
            }
        };
        out.push((i, tok));
        i += len;
    }
    out.push((bytes.len(), Tok::Eof));
    out
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
}

type PResult<T> = Result<T, ParseError>;

impl Parser {
    fn new(text: &str) -> Self {
        Parser { toks: lex(text), pos: 0 }
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].1
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].0
    }

    fn bump(&mut self) -> Tok {
        let tok = self.toks[self.pos].1.clone();
        if tok != Tok::Eof {
            self.pos += 1;
        }
        tok
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == tok {
            self.bump();
            true
        } else {
            false
        }
    }

    fn error(&self, expected: &str) -> ParseError {
        ParseError::Syntax {
            position: self.offset(),
            expected: expected.to_string(),
            found: self.peek().to_string(),
        }
    }

    fn expect(&mut self, tok: Tok) -> PResult<()> {
        if self.eat(&tok) {
            Ok(())
        } else {
            Err(self.error(&tok.to_string()))
        }
    }

    fn finish(&self) -> PResult<()> {
        if *self.peek() == Tok::Eof {
            Ok(())
        } else {
            Err(self.error("end of input"))
        }
    }

    fn standard(&mut self) -> PResult<StandardTerm> {
        let mut lhs = self.interrupt()?;
        while self.eat(&Tok::Bar2) {
            lhs = StandardTerm::par(lhs, self.interrupt()?);
        }
        Ok(lhs)
    }

    fn interrupt(&mut self) -> PResult<StandardTerm> {
        let mut lhs = self.choice()?;
        while self.eat(&Tok::Interrupt) {
            lhs = StandardTerm::interrupt(lhs, self.choice()?);
        }
        Ok(lhs)
    }

    fn choice(&mut self) -> PResult<StandardTerm> {
        let mut lhs = self.sequence()?;
        while self.eat(&Tok::Box) {
            lhs = StandardTerm::choice(lhs, self.sequence()?);
        }
        Ok(lhs)
    }

    fn sequence(&mut self) -> PResult<StandardTerm> {
        let mut lhs = self.standard_operand()?;
        while self.eat(&Tok::Semi) {
            lhs = StandardTerm::seq(lhs, self.standard_operand()?);
        }
        Ok(lhs)
    }

    /// An atom in a position where `%` must not follow.
    fn standard_operand(&mut self) -> PResult<StandardTerm> {
        let atom = self.atom()?;
        if *self.peek() == Tok::Percent {
            return Err(ParseError::KindMismatch {
                position: self.offset(),
                message: "compensation pair where a standard process is required".into(),
            });
        }
        Ok(atom)
    }

    fn atom(&mut self) -> PResult<StandardTerm> {
        let position = self.offset();
        match self.peek().clone() {
            Tok::Ident(name) => {
                self.bump();
                Ok(StandardTerm::Atom(Event::new(&name).expect("lexer yields identifiers")))
            }
            Tok::Skip => {
                self.bump();
                Ok(StandardTerm::Skip)
            }
            Tok::Throw => {
                self.bump();
                Ok(StandardTerm::Throw)
            }
            Tok::Yield => {
                self.bump();
                Ok(StandardTerm::Yield)
            }
            Tok::LParen => {
                self.bump();
                let inner = self.standard()?;
                self.expect(Tok::RParen)?;
                Ok(inner)
            }
            Tok::LBrack => {
                self.bump();
                let inner = self.compensable()?;
                self.expect(Tok::RBrack)?;
                Ok(StandardTerm::block(inner))
            }
            Tok::Alias(name) => Err(ParseError::KindMismatch {
                position,
                message: format!("compensable process `{name}` where a standard process is required"),
            }),
            _ => Err(self.error("a standard process")),
        }
    }

    fn compensable(&mut self) -> PResult<CompensableTerm> {
        let mut lhs = self.comp_choice()?;
        loop {
            if self.eat(&Tok::Bar2) {
                lhs = CompensableTerm::par(lhs, self.comp_choice()?);
            } else if *self.peek() == Tok::Interrupt {
                return Err(ParseError::KindMismatch {
                    position: self.offset(),
                    message: "interrupt handler applied to compensable processes".into(),
                });
            } else {
                return Ok(lhs);
            }
        }
    }

    fn comp_choice(&mut self) -> PResult<CompensableTerm> {
        let mut lhs = self.comp_sequence()?;
        while self.eat(&Tok::Box) {
            lhs = CompensableTerm::choice(lhs, self.comp_sequence()?);
        }
        Ok(lhs)
    }

    fn comp_sequence(&mut self) -> PResult<CompensableTerm> {
        let mut lhs = self.pair()?;
        while self.eat(&Tok::Semi) {
            lhs = CompensableTerm::seq(lhs, self.pair()?);
        }
        Ok(lhs)
    }

    fn pair(&mut self) -> PResult<CompensableTerm> {
        match self.peek().clone() {
            Tok::Alias(name) => {
                self.bump();
                Ok(desugar_alias(name).expect("lexer yields known aliases"))
            }
            Tok::LParen => {
                // Either a parenthesised compensable process or a parenthesised
                // standard operand of `%`. Keep whichever attempt got further.
                let start = self.pos;
                self.bump();
                let grouped = self.compensable().and_then(|c| {
                    self.expect(Tok::RParen)?;
                    Ok(c)
                });
                let grouped_err = match grouped {
                    Ok(c) => return Ok(c),
                    Err(e) => e,
                };
                self.pos = start;
                match self.pair_of_atoms() {
                    Ok(c) => Ok(c),
                    Err(e) if e.position() >= grouped_err.position() => Err(e),
                    Err(_) => Err(grouped_err),
                }
            }
            _ => self.pair_of_atoms(),
        }
    }

    fn pair_of_atoms(&mut self) -> PResult<CompensableTerm> {
        let start = self.offset();
        let forward = self.atom()?;
        if !self.eat(&Tok::Percent) {
            return match self.peek() {
                Tok::Semi
                | Tok::Bar2
                | Tok::Box
                | Tok::Interrupt
                | Tok::RParen
                | Tok::RBrack
                | Tok::Eof => Err(ParseError::KindMismatch {
                    position: start,
                    message: "standard process where a compensable process is required".into(),
                }),
                _ => Err(self.error("`%`")),
            };
        }
        let compensation = self.atom()?;
        if *self.peek() == Tok::Percent {
            return Err(ParseError::Syntax {
                position: self.offset(),
                expected: "`;`, `[]`, `||` or end of compensable process (`%` does not associate)"
                    .into(),
                found: self.peek().to_string(),
            });
        }
        Ok(CompensableTerm::pair(forward, compensation))
    }
}

pub fn parse_standard(text: &str) -> Result<StandardTerm, ParseError> {
    let mut p = Parser::new(text);
    let term = p.standard()?;
    p.finish()?;
    Ok(term)
}

pub fn parse_compensable(text: &str) -> Result<CompensableTerm, ParseError> {
    let mut p = Parser::new(text);
    let term = p.compensable()?;
    p.finish()?;
    Ok(term)
}

#[cfg(test)]
mod tests {
    use super::*;
    use StandardTerm::{Skip, Throw, Yield};

    fn a(name: &str) -> StandardTerm {
        StandardTerm::atom(name).unwrap()
    }

    #[test]
    fn keywords() {
        assert_eq!(parse_standard("SKIP ; THROW").unwrap(), StandardTerm::seq(Skip, Throw));
        assert_eq!(parse_standard("YIELD").unwrap(), Yield);
    }

    #[test]
    fn block_with_alias() {
        let expected = StandardTerm::block(CompensableTerm::seq(
            CompensableTerm::pair(a("a"), a("b")),
            CompensableTerm::pair(Throw, Skip),
        ));
        assert_eq!(parse_standard("[ a % b ; THROWW ]").unwrap(), expected);
    }

    #[test]
    fn precedence() {
        assert_eq!(
            parse_standard("a [] b ; c").unwrap(),
            StandardTerm::choice(a("a"), StandardTerm::seq(a("b"), a("c")))
        );
        assert_eq!(
            parse_standard("a ; b || SKIP").unwrap(),
            StandardTerm::par(StandardTerm::seq(a("a"), a("b")), Skip)
        );
        assert_eq!(
            parse_standard("a |> b [] c").unwrap(),
            StandardTerm::interrupt(a("a"), StandardTerm::choice(a("b"), a("c")))
        );
        assert_eq!(
            parse_standard("a ; b ; c").unwrap(),
            StandardTerm::seq(StandardTerm::seq(a("a"), a("b")), a("c"))
        );
    }

    #[test]
    fn compensable_forms() {
        assert_eq!(parse_compensable("a % b").unwrap(), CompensableTerm::pair(a("a"), a("b")));
        assert_eq!(parse_compensable("SKIPP").unwrap(), CompensableTerm::pair(Skip, Skip));
        assert_eq!(
            parse_compensable("(a % a') ; (b % b')").unwrap(),
            CompensableTerm::seq(
                CompensableTerm::pair(a("a"), a("a'")),
                CompensableTerm::pair(a("b"), a("b'"))
            )
        );
        assert_eq!(
            parse_compensable("(a ; b) % [ c % d ]").unwrap(),
            CompensableTerm::pair(
                StandardTerm::seq(a("a"), a("b")),
                StandardTerm::block(CompensableTerm::pair(a("c"), a("d")))
            )
        );
    }

    #[test]
    fn kind_mismatches() {
        assert!(matches!(parse_standard("a % b"), Err(ParseError::KindMismatch { position: 2, .. })));
        assert!(matches!(parse_standard("SKIPP"), Err(ParseError::KindMismatch { position: 0, .. })));
        assert!(matches!(parse_compensable("a"), Err(ParseError::KindMismatch { position: 0, .. })));
        assert!(matches!(
            parse_compensable("a % b |> c % d"),
            Err(ParseError::KindMismatch { position: 6, .. })
        ));
        assert!(matches!(
            parse_compensable("a % b ; c"),
            Err(ParseError::KindMismatch { position: 8, .. })
        ));
    }

    #[test]
    fn syntax_errors() {
        assert_eq!(
            parse_standard("0"),
            Err(ParseError::Syntax {
                position: 0,
                expected: "a standard process".into(),
                found: "`0`".into()
            })
        );
        assert_eq!(parse_standard("a ;").unwrap_err().position(), 3);
        assert_eq!(parse_standard("a b").unwrap_err().position(), 2);
        assert_eq!(parse_standard("(a ; b").unwrap_err().position(), 6);
        assert_eq!(parse_standard("[ ]").unwrap_err().position(), 2);
        assert_eq!(parse_compensable("a % b % c").unwrap_err().position(), 6);
        assert_eq!(parse_standard("a ; ; b #").unwrap_err().position(), 4);
        assert_eq!(parse_standard("").unwrap_err().position(), 0);
    }
}

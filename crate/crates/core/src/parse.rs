//! Parser for the line-oriented `.crn` network format.
//!
//! ```text
//! # comment
//! 2A + C <-> A + D ; kf=1, kr=2.5
//! B + C -> E ; k=1e-3
//! 0 -> A ; k=1          # `0` is the empty complex
//! ```

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use thiserror::Error;

use crate::network::{Complex, NetworkError, Reaction, ReactionNetwork};

#[derive(Clone, Debug, PartialEq, Error)]
pub enum ParseErrorKind {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("unknown token `{0}`")]
    UnknownToken(String),
    #[error("duplicate reaction")]
    DuplicateReaction,
    #[error("nonpositive rate `{0}`")]
    NonPositiveRate(String),
    #[error("missing rate `{0}`")]
    MissingRate(&'static str),
    #[error("stoichiometric coefficient `{0}` out of range")]
    BadCoefficient(String),
    #[error("source and product are identical")]
    TrivialReaction,
    #[error("no reactions")]
    Empty,
    #[error(transparent)]
    Network(NetworkError),
}

/// A parse failure with a 1-based position in the input.
#[derive(Clone, Debug, PartialEq, Error)]
#[error("line {line}, column {column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

struct Cursor {
    chars: Vec<char>,
    pos: usize,
    line: usize,
}

impl Cursor {
    fn new(src: &str, line: usize) -> Self {
        Cursor { chars: src.chars().collect(), pos: 0, line }
    }

    fn err(&self, kind: ParseErrorKind) -> ParseError {
        self.err_at(self.pos, kind)
    }

    fn err_at(&self, pos: usize, kind: ParseErrorKind) -> ParseError {
        ParseError { line: self.line, column: pos + 1, kind }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos >= self.chars.len()
    }

    fn eat(&mut self, s: &str) -> bool {
        self.skip_ws();
        let n = s.chars().count();
        if self.chars.len() >= self.pos + n && s.chars().zip(&self.chars[self.pos..]).all(|(a, &b)| a == b) {
            self.pos += n;
            true
        } else {
            false
        }
    }

    fn take_while<F: Fn(char) -> bool>(&mut self, f: F) -> String {
        let start = self.pos;
        while self.pos < self.chars.len() && f(self.chars[self.pos]) {
            self.pos += 1;
        }
        self.chars[start..self.pos].iter().collect()
    }

    /// The offending token at the cursor, for error messages.
    fn token_here(&self) -> String {
        let rest = &self.chars[self.pos..];
        let end = rest
            .iter()
            .position(|c| c.is_whitespace())
            .unwrap_or(rest.len())
            .max(1)
            .min(rest.len());
        rest[..end].iter().collect()
    }

    fn unknown(&self) -> ParseError {
        if self.pos >= self.chars.len() {
            self.err(ParseErrorKind::Syntax("unexpected end of line".into()))
        } else {
            self.err(ParseErrorKind::UnknownToken(self.token_here()))
        }
    }
}

struct Builder {
    names: Vec<String>,
    index: BTreeMap<String, usize>,
}

impl Builder {
    fn species(&mut self, name: String) -> usize {
        if let Some(&i) = self.index.get(&name) {
            return i;
        }
        self.names.push(name.clone());
        self.index.insert(name, self.names.len() - 1);
        self.names.len() - 1
    }
}

fn parse_complex(cur: &mut Cursor, b: &mut Builder) -> Result<Complex, ParseError> {
    cur.skip_ws();
    let start = cur.pos;
    // `0` alone is the empty complex; `0A` is a zero coefficient.
    if cur.peek() == Some('0') {
        let save = cur.pos;
        cur.pos += 1;
        let next = cur.peek();
        if !next.is_some_and(|c| c.is_ascii_alphanumeric() || c == '_') {
            return Ok(Complex::empty());
        }
        cur.pos = save;
    }
    let mut terms = Vec::new();
    loop {
        cur.skip_ws();
        let term_start = cur.pos;
        let digits = cur.take_while(|c| c.is_ascii_digit());
        let coeff = if digits.is_empty() {
            1u32
        } else {
            match digits.parse::<u32>() {
                Ok(c) if c > 0 => c,
                _ => return Err(cur.err_at(term_start, ParseErrorKind::BadCoefficient(digits))),
            }
        };
        cur.skip_ws();
        match cur.peek() {
            Some(c) if c.is_ascii_alphabetic() => {}
            _ => return Err(cur.unknown()),
        }
        let name = cur.take_while(|c| c.is_ascii_alphanumeric() || c == '_');
        terms.push((b.species(name), coeff));
        let save = cur.pos;
        cur.skip_ws();
        if cur.peek() == Some('+') {
            cur.pos += 1;
        } else {
            cur.pos = save;
            break;
        }
    }
    Complex::from_terms(terms).map_err(|_| {
        cur.err_at(start, ParseErrorKind::BadCoefficient("sum exceeds 32 bits".into()))
    })
}

fn parse_params(cur: &mut Cursor) -> Result<Vec<(String, f64, usize)>, ParseError> {
    let mut params = Vec::new();
    loop {
        cur.skip_ws();
        let start = cur.pos;
        match cur.peek() {
            Some(c) if c.is_ascii_alphabetic() => {}
            _ => return Err(cur.unknown()),
        }
        let key = cur.take_while(|c| c.is_ascii_alphanumeric() || c == '_');
        if !cur.eat("=") {
            return Err(cur.unknown());
        }
        cur.skip_ws();
        let vstart = cur.pos;
        let text = cur.take_while(|c| c.is_ascii_digit() || matches!(c, '.' | 'e' | 'E' | '+' | '-'));
        let value: f64 = text
            .parse()
            .map_err(|_| cur.err_at(vstart, ParseErrorKind::Syntax(alloc::format!("invalid number `{}`", text))))?;
        if !(value.is_finite() && value > 0.0) {
            return Err(cur.err_at(vstart, ParseErrorKind::NonPositiveRate(text)));
        }
        params.push((key, value, start));
        if cur.at_end() {
            return Ok(params);
        }
        if !cur.eat(",") {
            return Err(cur.unknown());
        }
    }
}

fn take_rate(
    cur: &Cursor,
    params: &mut Vec<(String, f64, usize)>,
    key: &'static str,
) -> Result<f64, ParseError> {
    match params.iter().position(|(k, _, _)| k == key) {
        Some(i) => Ok(params.remove(i).1),
        None => Err(cur.err(ParseErrorKind::MissingRate(key))),
    }
}

/// Parses a network from `.crn` text. Species are indexed in order of first
/// appearance; `<->` yields a forward and a reverse reaction.
pub fn parse_network(text: &str) -> Result<ReactionNetwork, ParseError> {
    let mut b = Builder { names: Vec::new(), index: BTreeMap::new() };
    let mut reactions: Vec<Reaction> = Vec::new();
    let mut seen: BTreeMap<(Complex, Complex), ()> = BTreeMap::new();

    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        let mut cur = Cursor::new(line, lineno + 1);
        if cur.at_end() {
            continue;
        }
        let source = parse_complex(&mut cur, &mut b)?;
        cur.skip_ws();
        let arrow_start = cur.pos;
        let reversible = if cur.eat("<->") {
            true
        } else if cur.eat("->") {
            false
        } else {
            return Err(cur.unknown());
        };
        let product = parse_complex(&mut cur, &mut b)?;
        if !cur.eat(";") {
            return Err(cur.unknown());
        }
        let mut params = parse_params(&mut cur)?;
        let mut new = Vec::new();
        if reversible {
            let kf = take_rate(&cur, &mut params, "kf")?;
            let kr = take_rate(&cur, &mut params, "kr")?;
            new.push(Reaction { source: source.clone(), product: product.clone(), rate: kf });
            new.push(Reaction { source: product, product: source, rate: kr });
        } else {
            let k = take_rate(&cur, &mut params, "k")?;
            new.push(Reaction { source, product, rate: k });
        }
        if let Some((key, _, pos)) = params.into_iter().next() {
            return Err(cur.err_at(pos, ParseErrorKind::UnknownToken(key)));
        }
        for rx in new {
            if rx.source == rx.product {
                return Err(cur.err_at(arrow_start, ParseErrorKind::TrivialReaction));
            }
            if seen.insert((rx.source.clone(), rx.product.clone()), ()).is_some() {
                return Err(cur.err_at(0, ParseErrorKind::DuplicateReaction));
            }
            reactions.push(rx);
        }
    }
    if reactions.is_empty() {
        return Err(ParseError { line: 1, column: 1, kind: ParseErrorKind::Empty });
    }
    ReactionNetwork::new(b.names, reactions).map_err(|e| ParseError {
        line: 1,
        column: 1,
        kind: ParseErrorKind::Network(e),
    })
}

impl core::str::FromStr for ReactionNetwork {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_network(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use alloc::vec;

    #[test]
    fn minimal_network() {
        let net = parse_network("A -> B ; k=1").unwrap();
        assert_eq!(net.species_count(), 2);
        assert_eq!(net.reactions().len(), 1);
        assert_eq!(net.reactions()[0].source.terms(), &[(0, 1)]);
        assert_eq!(net.reactions()[0].product.terms(), &[(1, 1)]);
        assert_eq!(net.distinct_complexes().len(), 2);
    }

    #[test]
    fn reversible_expands_to_two_reactions() {
        let net = parse_network("2A + C <-> A + D ; kf=1, kr=1").unwrap();
        let r = net.reactions();
        assert_eq!(r.len(), 2);
        assert_eq!(r[0].source, r[1].product);
        assert_eq!(r[0].product, r[1].source);
        assert_eq!(net.species_names(), vec!["A", "C", "D"]);
    }

    #[test]
    fn chain_of_reversible_reactions() {
        let net = parse_network("2A <-> A+B ; kf=1, kr=2\nA+B <-> B+C ; kf=3, kr=4").unwrap();
        assert_eq!(net.species_count(), 3);
        assert_eq!(net.distinct_complexes().len(), 3);
        assert_eq!(net.reactions().len(), 4);
        assert_eq!(net.rates(), vec![1.0, 2.0, 3.0, 4.0]);
    }

    #[test]
    fn comments_blank_lines_and_whitespace() {
        let net = parse_network("# header\n\n  2 A+B ->  C ; k = 2.5e-1  # trailing\n").unwrap();
        assert_eq!(net.reactions()[0].source.terms(), &[(0, 2), (1, 1)]);
        assert_eq!(net.reactions()[0].rate, 0.25);
    }

    fn err(text: &str) -> ParseError {
        parse_network(text).unwrap_err()
    }

    #[test]
    fn error_positions_and_kinds() {
        let e = err("A -> B ; k=1\nA => B ; k=1");
        assert_eq!((e.line, e.column), (2, 3));
        assert!(matches!(e.kind, ParseErrorKind::UnknownToken(ref t) if t == "=>"));

        let e = err("A -> B ; k=0");
        assert_eq!((e.line, e.column), (1, 12));
        assert!(matches!(e.kind, ParseErrorKind::NonPositiveRate(_)));
        assert!(matches!(err("A -> B ; k=-2").kind, ParseErrorKind::NonPositiveRate(_)));

        assert_eq!(err("A -> B ; k=1\nA -> B ; k=2").kind, ParseErrorKind::DuplicateReaction);
        assert_eq!(err("A <-> B ; kf=1, kr=1\nB -> A ; k=2").kind, ParseErrorKind::DuplicateReaction);
        assert_eq!(err("A -> B ; kf=1").kind, ParseErrorKind::MissingRate("k"));
        assert_eq!(err("A <-> B ; kf=1").kind, ParseErrorKind::MissingRate("kr"));
        assert!(matches!(err("A -> B ; k=1, q=2").kind, ParseErrorKind::UnknownToken(ref t) if t == "q"));
        assert!(matches!(err("A -> B").kind, ParseErrorKind::UnknownToken(_) | ParseErrorKind::Syntax(_)));
        assert!(matches!(err("A -> B ; k=abc").kind, ParseErrorKind::UnknownToken(_) | ParseErrorKind::Syntax(_)));
        assert_eq!(err("A + B -> B + A ; k=1").kind, ParseErrorKind::TrivialReaction);
        assert!(matches!(err("0A -> B ; k=1").kind, ParseErrorKind::BadCoefficient(_)));
        assert!(matches!(err("99999999999A -> B ; k=1").kind, ParseErrorKind::BadCoefficient(_)));
        assert_eq!(err("# nothing\n").kind, ParseErrorKind::Empty);
        assert!(matches!(err("A -> B ; k=1 extra").kind, ParseErrorKind::UnknownToken(_)));
        assert!(matches!(err("A + -> B ; k=1").kind, ParseErrorKind::UnknownToken(_)));
    }

    #[test]
    fn display_includes_position() {
        let e = err("A -> B ; k=1\n\nA ~ B");
        assert!(e.to_string().starts_with("line 3, column 3"));
    }
}

//! Formulas of the coalition language: abstract syntax, surface syntax with
//! abbreviations, parsing, printing and name resolution.
//!
//! The core connectives are `¬`, `∧`, `⟨⟨G⟩⟩◯`, `⟨⟨G⟩⟩□` and `⟨⟨G⟩⟩U`,
//! plus the constants `⊤`/`⊥`. Everything else is sugar:
//!
//! | surface           | core                                   |
//! |-------------------|----------------------------------------|
//! | `a \| b`          | `~(~a & ~b)`                           |
//! | `a -> b`          | `~(a & ~b)`                            |
//! | `a <-> b`         | `(a -> b) & (b -> a)`, expanded        |
//! | `<<G>> F a`       | `<<G>> true U a`                       |
//! | `K{i} a`          | `<<i>> a U a`                          |
//! | `D{G} a`          | `<<G>> a U a`                          |
//! | `Kh{i} a`         | `~<<i>> ~a U ~a`                       |
//! | `Dh{G} a`         | `~<<G>> ~a U ~a`                       |
//!
//! Precedence, tightest first: unary (`~`, `K`, `D`, coalition operators),
//! `&`, `|`, `->` (right associative), `<->` (non-associative). The operands
//! of `U` are unary formulas, and an until nested inside an until operand
//! must be parenthesized.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::model::{Coalition, Model, PropId};

pub type AgentSet = BTreeSet<String>;

/// Core (desugared) formula over agent and proposition names.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Top,
    Bot,
    Prop(String),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Next(AgentSet, Box<Formula>),
    Always(AgentSet, Box<Formula>),
    Until(AgentSet, Box<Formula>, Box<Formula>),
}

/// Surface syntax, before abbreviations are expanded.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Sugar {
    Top,
    Bot,
    Prop(String),
    Not(Box<Sugar>),
    And(Box<Sugar>, Box<Sugar>),
    Or(Box<Sugar>, Box<Sugar>),
    Implies(Box<Sugar>, Box<Sugar>),
    Iff(Box<Sugar>, Box<Sugar>),
    Next(AgentSet, Box<Sugar>),
    Always(AgentSet, Box<Sugar>),
    Eventually(AgentSet, Box<Sugar>),
    Until(AgentSet, Box<Sugar>, Box<Sugar>),
    Know(String, Box<Sugar>),
    DistKnow(AgentSet, Box<Sugar>),
    KnowDual(String, Box<Sugar>),
    DistKnowDual(AgentSet, Box<Sugar>),
}

pub fn agents<S: AsRef<str>>(names: impl IntoIterator<Item = S>) -> AgentSet {
    names.into_iter().map(|s| s.as_ref().to_string()).collect()
}

impl Formula {
    pub fn prop(name: &str) -> Formula {
        Formula::Prop(name.to_string())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::not(Formula::and(Formula::not(a), Formula::not(b)))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::not(Formula::and(a, Formula::not(b)))
    }

    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::and(Formula::implies(a.clone(), b.clone()), Formula::implies(b, a))
    }

    pub fn next(g: AgentSet, f: Formula) -> Formula {
        Formula::Next(g, Box::new(f))
    }

    pub fn always(g: AgentSet, f: Formula) -> Formula {
        Formula::Always(g, Box::new(f))
    }

    pub fn until(g: AgentSet, a: Formula, b: Formula) -> Formula {
        Formula::Until(g, Box::new(a), Box::new(b))
    }

    pub fn eventually(g: AgentSet, f: Formula) -> Formula {
        Formula::until(g, Formula::Top, f)
    }

    pub fn dist_know(g: AgentSet, f: Formula) -> Formula {
        Formula::until(g, f.clone(), f)
    }

    pub fn know(agent: &str, f: Formula) -> Formula {
        Formula::dist_know(agents([agent]), f)
    }

    pub fn dist_know_dual(g: AgentSet, f: Formula) -> Formula {
        Formula::not(Formula::dist_know(g, Formula::not(f)))
    }

    pub fn know_dual(agent: &str, f: Formula) -> Formula {
        Formula::dist_know_dual(agents([agent]), f)
    }

    /// True when no coalition operator occurs.
    pub fn is_propositional(&self) -> bool {
        match self {
            Formula::Top | Formula::Bot | Formula::Prop(_) => true,
            Formula::Not(f) => f.is_propositional(),
            Formula::And(a, b) => a.is_propositional() && b.is_propositional(),
            _ => false,
        }
    }

    /// Nesting depth of coalition operators.
    pub fn temporal_depth(&self) -> usize {
        match self {
            Formula::Top | Formula::Bot | Formula::Prop(_) => 0,
            Formula::Not(f) => f.temporal_depth(),
            Formula::And(a, b) => a.temporal_depth().max(b.temporal_depth()),
            Formula::Next(_, f) | Formula::Always(_, f) => 1 + f.temporal_depth(),
            Formula::Until(_, a, b) => 1 + a.temporal_depth().max(b.temporal_depth()),
        }
    }

    fn fmt_operand(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Top | Formula::Bot | Formula::Prop(_) => write!(f, "{self}"),
            _ => write!(f, "({self})"),
        }
    }
}

fn fmt_coalition(g: &AgentSet, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    write!(f, "<<")?;
    for (k, a) in g.iter().enumerate() {
        if k > 0 {
            write!(f, ",")?;
        }
        write!(f, "{a}")?;
    }
    write!(f, ">>")
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Top => write!(f, "true"),
            Formula::Bot => write!(f, "false"),
            Formula::Prop(p) => write!(f, "{p}"),
            Formula::Not(a) => write!(f, "~{a}"),
            Formula::And(a, b) => write!(f, "({a} & {b})"),
            Formula::Next(g, a) => {
                fmt_coalition(g, f)?;
                write!(f, " X {a}")
            }
            Formula::Always(g, a) => {
                fmt_coalition(g, f)?;
                write!(f, " G {a}")
            }
            Formula::Until(g, a, b) => {
                fmt_coalition(g, f)?;
                write!(f, " ")?;
                a.fmt_operand(f)?;
                write!(f, " U ")?;
                b.fmt_operand(f)
            }
        }
    }
}

impl From<Formula> for Sugar {
    fn from(f: Formula) -> Sugar {
        let b = |x: Formula| Box::new(Sugar::from(x));
        match f {
            Formula::Top => Sugar::Top,
            Formula::Bot => Sugar::Bot,
            Formula::Prop(p) => Sugar::Prop(p),
            Formula::Not(a) => Sugar::Not(b(*a)),
            Formula::And(x, y) => Sugar::And(b(*x), b(*y)),
            Formula::Next(g, a) => Sugar::Next(g, b(*a)),
            Formula::Always(g, a) => Sugar::Always(g, b(*a)),
            Formula::Until(g, x, y) => Sugar::Until(g, b(*x), b(*y)),
        }
    }
}

/// Expands every abbreviation.
pub fn desugar(s: &Sugar) -> Formula {
    match s {
        Sugar::Top => Formula::Top,
        Sugar::Bot => Formula::Bot,
        Sugar::Prop(p) => Formula::Prop(p.clone()),
        Sugar::Not(a) => Formula::not(desugar(a)),
        Sugar::And(a, b) => Formula::and(desugar(a), desugar(b)),
        Sugar::Or(a, b) => Formula::or(desugar(a), desugar(b)),
        Sugar::Implies(a, b) => Formula::implies(desugar(a), desugar(b)),
        Sugar::Iff(a, b) => Formula::iff(desugar(a), desugar(b)),
        Sugar::Next(g, a) => Formula::next(g.clone(), desugar(a)),
        Sugar::Always(g, a) => Formula::always(g.clone(), desugar(a)),
        Sugar::Eventually(g, a) => Formula::eventually(g.clone(), desugar(a)),
        Sugar::Until(g, a, b) => Formula::until(g.clone(), desugar(a), desugar(b)),
        Sugar::Know(i, a) => Formula::know(i, desugar(a)),
        Sugar::DistKnow(g, a) => Formula::dist_know(g.clone(), desugar(a)),
        Sugar::KnowDual(i, a) => Formula::know_dual(i, desugar(a)),
        Sugar::DistKnowDual(g, a) => Formula::dist_know_dual(g.clone(), desugar(a)),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("formula syntax error at column {column}: {message}")]
pub struct ParseError {
    pub column: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Word(String),
    Open2,  // <<
    Close2, // >>
    LParen,
    RParen,
    LBrace,
    RBrace,
    Comma,
    Not,
    And,
    Or,
    Arrow,
    Iff,
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Tok::Word(w) => return write!(f, "`{w}`"),
            Tok::Open2 => "`<<`",
            Tok::Close2 => "`>>`",
            Tok::LParen => "`(`",
            Tok::RParen => "`)`",
            Tok::LBrace => "`{`",
            Tok::RBrace => "`}`",
            Tok::Comma => "`,`",
            Tok::Not => "`~`",
            Tok::And => "`&`",
            Tok::Or => "`|`",
            Tok::Arrow => "`->`",
            Tok::Iff => "`<->`",
            Tok::End => "end of input",
        };
        write!(f, "{s}")
    }
}

const KEYWORDS: &[&str] = &["X", "G", "F", "U", "K", "D", "Kh", "Dh", "true", "false"];

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut k = 0;
    while k < chars.len() {
        let c = chars[k];
        let col = k + 1;
        if c.is_whitespace() {
            k += 1;
            continue;
        }
        let two: String = chars[k..(k + 2).min(chars.len())].iter().collect();
        let three: String = chars[k..(k + 3).min(chars.len())].iter().collect();
        let (tok, width) = match (c, two.as_str()) {
            _ if three == "<->" => (Tok::Iff, 3),
            (_, "<<") => (Tok::Open2, 2),
            (_, ">>") => (Tok::Close2, 2),
            (_, "->") => (Tok::Arrow, 2),
            ('(', _) => (Tok::LParen, 1),
            (')', _) => (Tok::RParen, 1),
            ('{', _) => (Tok::LBrace, 1),
            ('}', _) => (Tok::RBrace, 1),
            (',', _) => (Tok::Comma, 1),
            ('~' | '!', _) => (Tok::Not, 1),
            ('&', _) => (Tok::And, 1),
            ('|', _) => (Tok::Or, 1),
            _ if c.is_alphanumeric() || c == '_' => {
                let word: String = chars[k..]
                    .iter()
                    .take_while(|&&c| c.is_alphanumeric() || c == '_' || c == '\'' || c == '.')
                    .collect();
                let n = word.chars().count();
                (Tok::Word(word), n)
            }
            _ => return Err(ParseError { column: col, message: format!("unexpected character `{c}`") }),
        };
        out.push((col, tok));
        k += width;
    }
    out.push((chars.len() + 1, Tok::End));
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].1
    }

    fn column(&self) -> usize {
        self.toks[self.pos].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].1.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError { column: self.column(), message: message.into() })
    }

    fn expect(&mut self, tok: Tok) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            self.error(format!("expected {tok}, found {}", self.peek()))
        }
    }

    fn is_word(&self, w: &str) -> bool {
        matches!(self.peek(), Tok::Word(x) if x == w)
    }

    fn biconditional(&mut self) -> Result<Sugar, ParseError> {
        let lhs = self.implication()?;
        if *self.peek() == Tok::Iff {
            self.bump();
            let rhs = self.implication()?;
            if *self.peek() == Tok::Iff {
                return self.error("`<->` is not associative; add parentheses");
            }
            return Ok(Sugar::Iff(Box::new(lhs), Box::new(rhs)));
        }
        Ok(lhs)
    }

    fn implication(&mut self) -> Result<Sugar, ParseError> {
        let lhs = self.disjunction()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let rhs = self.implication()?;
            return Ok(Sugar::Implies(Box::new(lhs), Box::new(rhs)));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Sugar, ParseError> {
        let mut lhs = self.conjunction()?;
        while *self.peek() == Tok::Or {
            self.bump();
            let rhs = self.conjunction()?;
            lhs = Sugar::Or(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<Sugar, ParseError> {
        let mut lhs = self.unary(false)?;
        while *self.peek() == Tok::And {
            self.bump();
            let rhs = self.unary(false)?;
            lhs = Sugar::And(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn agent_list(&mut self, close: Tok) -> Result<AgentSet, ParseError> {
        let mut g = AgentSet::new();
        if *self.peek() == close {
            return self.error("empty coalition");
        }
        loop {
            match self.bump() {
                Tok::Word(w) => {
                    g.insert(w);
                }
                t => {
                    self.pos -= 1;
                    return self.error(format!("expected agent name, found {t}"));
                }
            }
            if *self.peek() == Tok::Comma {
                self.bump();
                continue;
            }
            self.expect(close)?;
            return Ok(g);
        }
    }

    /// `in_operand`: parsing an operand of `U`, where a bare until is ambiguous.
    fn unary(&mut self, in_operand: bool) -> Result<Sugar, ParseError> {
        let col = self.column();
        match self.peek().clone() {
            Tok::Not => {
                self.bump();
                Ok(Sugar::Not(Box::new(self.unary(in_operand)?)))
            }
            Tok::LParen => {
                self.bump();
                let f = self.biconditional()?;
                self.expect(Tok::RParen)?;
                Ok(f)
            }
            Tok::Open2 => {
                self.bump();
                let g = self.agent_list(Tok::Close2)?;
                if self.is_word("X") || self.is_word("G") || self.is_word("F") {
                    let Tok::Word(op) = self.bump() else { unreachable!() };
                    let body = Box::new(self.unary(in_operand)?);
                    return Ok(match op.as_str() {
                        "X" => Sugar::Next(g, body),
                        "G" => Sugar::Always(g, body),
                        _ => Sugar::Eventually(g, body),
                    });
                }
                if in_operand {
                    return Err(ParseError { column: col, message: "nested until must be parenthesized".into() });
                }
                let lhs = self.unary(true)?;
                if !self.is_word("U") {
                    return self.error(format!("expected `X`, `G`, `F` or `U`, found {}", self.peek()));
                }
                self.bump();
                let rhs = self.unary(true)?;
                Ok(Sugar::Until(g, Box::new(lhs), Box::new(rhs)))
            }
            Tok::Word(w) => match w.as_str() {
                "true" => {
                    self.bump();
                    Ok(Sugar::Top)
                }
                "false" => {
                    self.bump();
                    Ok(Sugar::Bot)
                }
                "K" | "D" | "Kh" | "Dh" => {
                    self.bump();
                    self.expect(Tok::LBrace)?;
                    let g = self.agent_list(Tok::RBrace)?;
                    if w.starts_with('K') && g.len() != 1 {
                        return Err(ParseError { column: col, message: "K takes exactly one agent".into() });
                    }
                    let body = Box::new(self.unary(in_operand)?);
                    let agent = || g.iter().next().cloned().unwrap_or_default();
                    Ok(match w.as_str() {
                        "K" => Sugar::Know(agent(), body),
                        "Kh" => Sugar::KnowDual(agent(), body),
                        "D" => Sugar::DistKnow(g, body),
                        _ => Sugar::DistKnowDual(g, body),
                    })
                }
                _ if KEYWORDS.contains(&w.as_str()) => self.error(format!("unexpected keyword `{w}`")),
                _ => {
                    self.bump();
                    Ok(Sugar::Prop(w))
                }
            },
            t => self.error(format!("unexpected {t}")),
        }
    }
}

/// Parses surface syntax without expanding abbreviations.
pub fn parse_sugar(text: &str) -> Result<Sugar, ParseError> {
    let mut p = Parser { toks: lex(text)?, pos: 0 };
    let f = p.biconditional()?;
    if *p.peek() != Tok::End {
        return p.error(format!("unexpected {} after formula", p.peek()));
    }
    Ok(f)
}

/// Parses and desugars.
pub fn parse(text: &str) -> Result<Formula, ParseError> {
    parse_sugar(text).map(|s| desugar(&s))
}

/// A formula bound to a model's agent and proposition ids.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Resolved {
    Top,
    Bot,
    Prop(PropId),
    Not(Box<Resolved>),
    And(Box<Resolved>, Box<Resolved>),
    Next(Coalition, Box<Resolved>),
    Always(Coalition, Box<Resolved>),
    Until(Coalition, Box<Resolved>, Box<Resolved>),
}

impl Resolved {
    pub fn is_propositional(&self) -> bool {
        match self {
            Resolved::Top | Resolved::Bot | Resolved::Prop(_) => true,
            Resolved::Not(f) => f.is_propositional(),
            Resolved::And(a, b) => a.is_propositional() && b.is_propositional(),
            _ => false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResolvedFormula {
    pub formula: Resolved,
    pub source: Formula,
    /// Nesting depth of coalition operators; a horizon below this cannot
    /// discharge every `X`.
    pub temporal_depth: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ResolveError {
    #[error("unknown agent {0}")]
    UnknownAgent(String),
    #[error("unknown proposition {0}")]
    UnknownProp(String),
}

/// Binds every name in `f` to `m`'s ids.
pub fn resolve(f: &Formula, m: &Model) -> Result<ResolvedFormula, ResolveError> {
    fn coalition(g: &AgentSet, m: &Model) -> Result<Coalition, ResolveError> {
        g.iter()
            .map(|a| m.agent_id(a).ok_or_else(|| ResolveError::UnknownAgent(a.clone())))
            .collect::<Result<Vec<_>, _>>()
            .map(Coalition::from_agents)
    }
    fn go(f: &Formula, m: &Model) -> Result<Resolved, ResolveError> {
        let b = |x: &Formula| go(x, m).map(Box::new);
        Ok(match f {
            Formula::Top => Resolved::Top,
            Formula::Bot => Resolved::Bot,
            Formula::Prop(p) => Resolved::Prop(m.prop_id(p).ok_or_else(|| ResolveError::UnknownProp(p.clone()))?),
            Formula::Not(a) => Resolved::Not(b(a)?),
            Formula::And(x, y) => Resolved::And(b(x)?, b(y)?),
            Formula::Next(g, a) => Resolved::Next(coalition(g, m)?, b(a)?),
            Formula::Always(g, a) => Resolved::Always(coalition(g, m)?, b(a)?),
            Formula::Until(g, x, y) => Resolved::Until(coalition(g, m)?, b(x)?, b(y)?),
        })
    }
    Ok(ResolvedFormula { formula: go(f, m)?, source: f.clone(), temporal_depth: f.temporal_depth() })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Formula {
        Formula::prop(s)
    }

    #[test]
    fn coalition_next() {
        assert_eq!(parse("<<g1,g2>> X win").unwrap(), Formula::next(agents(["g1", "g2"]), p("win")));
    }

    #[test]
    fn knowledge_is_until_abbreviation() {
        assert_eq!(parse("K{g1} p").unwrap(), Formula::until(agents(["g1"]), p("p"), p("p")));
        assert_eq!(
            parse("Dh{a,b} p").unwrap(),
            Formula::not(Formula::until(agents(["a", "b"]), Formula::not(p("p")), Formula::not(p("p"))))
        );
    }

    #[test]
    fn empty_coalition_is_rejected() {
        let e = parse("<<>> X p").unwrap_err();
        assert_eq!(e.message, "empty coalition");
        assert_eq!(e.column, 3);
    }

    #[test]
    fn eventually_expands_to_top_until() {
        assert_eq!(parse("<<a>> F p").unwrap(), Formula::until(agents(["a"]), Formula::Top, p("p")));
    }

    #[test]
    fn coalitions_are_canonical() {
        assert_eq!(parse("<<b,a,b>> G p").unwrap(), parse("<<a,b>> G p").unwrap());
    }

    #[test]
    fn precedence() {
        // ~ binds tighter than &, & tighter than |, | tighter than ->
        let f = parse("~a & b | c -> d").unwrap();
        let expect = Formula::implies(Formula::or(Formula::and(Formula::not(p("a")), p("b")), p("c")), p("d"));
        assert_eq!(f, expect);
        // -> is right associative
        assert_eq!(parse("a -> b -> c").unwrap(), Formula::implies(p("a"), Formula::implies(p("b"), p("c"))));
        assert_eq!(parse("a -> b <-> c").unwrap(), Formula::iff(Formula::implies(p("a"), p("b")), p("c")));
        assert!(parse("a <-> b <-> c").is_err());
    }

    #[test]
    fn until_operands_are_unary() {
        let f = parse("<<1>> K{1} p U K{1} q").unwrap();
        assert_eq!(f, Formula::until(agents(["1"]), Formula::know("1", p("p")), Formula::know("1", p("q"))));
        assert!(parse("<<1>> <<1>> p U q U r").is_err());
        assert!(parse("<<1>> (<<1>> p U q) U r").is_ok());
        assert!(parse("<<1>> X p U q").is_err());
    }

    #[test]
    fn syntax_errors_have_positions() {
        let e = parse("p & & q").unwrap_err();
        assert_eq!(e.column, 5);
        let e = parse("(p & q").unwrap_err();
        assert_eq!(e.column, 7);
        assert!(parse("p $ q").is_err());
        assert!(parse("X").is_err());
    }

    #[test]
    fn desugar_is_idempotent_on_core() {
        let f = parse("Kh{a} (p -> <<a,b>> F q) | D{b} <<a>> G r").unwrap();
        assert_eq!(desugar(&Sugar::from(f.clone())), f);
    }

    #[test]
    fn printer_round_trips() {
        for text in [
            "<<g1,g2>> X win",
            "~(p & ~q)",
            "<<1>> (K{1} p) U (K{1} q)",
            "<<a>> X <<a>> G p",
            "~<<a>> p U q",
            "<<a>> (<<b>> true U p) U false",
        ] {
            let f = parse(text).unwrap();
            assert_eq!(parse(&f.to_string()).unwrap(), f, "{text} printed as {f}");
        }
    }

    #[test]
    fn temporal_depth_counts_nesting() {
        assert_eq!(parse("<<g1>> X win").unwrap().temporal_depth(), 1);
        assert_eq!(parse("<<g1>> X <<g1>> G p").unwrap().temporal_depth(), 2);
        assert_eq!(parse("p & ~q").unwrap().temporal_depth(), 0);
    }
}

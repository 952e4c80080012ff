//! The plain-text model format and the built-in example models.
//!
//! ```text
//! # comment
//! agents: s, g1, g2
//! states: q0, q1, q1', q2
//! alphabet: L, R, n          # optional; fixes the action order
//! props:
//!   win = q2
//! actions:
//!   s: q0 = L, R             # agent: states = menu
//! indist:
//!   g2 = {q1, q1'}           # agent = blocks; singletons may be omitted
//! transitions:
//!   q0 (L,n,n) -> q1         # actions in agent order
//!   q2 * -> q2               # every available joint action
//! ```
//!
//! Sections may appear in any order. Content may follow a header on the same
//! line.

use std::fmt::{self, Write as _};

use thiserror::Error;

use crate::model::{ActionId, JointAction, Model, ModelBuilder, ModelError, Violation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LoadError {
    #[error("line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("invalid model: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
}

const SECTIONS: [&str; 7] = ["agents", "states", "alphabet", "props", "actions", "indist", "transitions"];

struct Line<'a> {
    number: usize,
    text: &'a str,
    // byte offset of `text` within the source line
    offset: usize,
}

struct Cursor<'a> {
    line: &'a Line<'a>,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(line: &'a Line<'a>) -> Self {
        Cursor { line, pos: 0 }
    }

    fn rest(&self) -> &'a str {
        &self.line.text[self.pos..]
    }

    fn skip_ws(&mut self) {
        let r = self.rest();
        self.pos += r.len() - r.trim_start().len();
    }

    fn column(&self) -> usize {
        self.line.offset + self.pos + 1
    }

    fn error(&self, message: impl Into<String>) -> LoadError {
        LoadError::Syntax { line: self.line.number, column: self.column(), message: message.into() }
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.rest().is_empty()
    }

    fn eat(&mut self, tok: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(tok) {
            self.pos += tok.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: &str) -> Result<(), LoadError> {
        if self.eat(tok) {
            Ok(())
        } else {
            Err(self.error(format!("expected `{tok}`")))
        }
    }

    fn name(&mut self, what: &str) -> Result<(usize, &'a str), LoadError> {
        self.skip_ws();
        let col = self.column();
        let len: usize = self.rest().chars().take_while(|&c| is_name_char(c)).map(char::len_utf8).sum();
        if len == 0 {
            return Err(self.error(format!("expected {what}")));
        }
        let s = &self.rest()[..len];
        self.pos += len;
        Ok((col, s))
    }

    /// `a, b, c` up to (not including) `stop` or the end of the line.
    fn names(&mut self, what: &str, stop: Option<&str>) -> Result<Vec<(usize, &'a str)>, LoadError> {
        let mut out = Vec::new();
        if self.at_end() || stop.is_some_and(|s| self.rest().starts_with(s)) {
            return Ok(out);
        }
        loop {
            out.push(self.name(what)?);
            if !self.eat(",") {
                return Ok(out);
            }
        }
    }

    fn finish(&mut self) -> Result<(), LoadError> {
        if self.at_end() {
            Ok(())
        } else {
            Err(self.error("unexpected trailing input"))
        }
    }
}

pub(crate) fn is_name_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '\'' || c == '.'
}

fn at(line: &Line<'_>, column: usize, e: ModelError) -> LoadError {
    LoadError::Syntax { line: line.number, column, message: e.to_string() }
}

/// Parses and validates a model document.
pub fn load_model(text: &str) -> Result<Model, LoadError> {
    let mut sections: Vec<(usize, Vec<Line<'_>>)> = Vec::new();
    let mut seen: [Option<usize>; 7] = [None; 7];
    for (n, raw) in text.lines().enumerate() {
        let number = n + 1;
        let body = raw.split('#').next().unwrap_or("");
        let trimmed = body.trim_start();
        if trimmed.trim().is_empty() {
            continue;
        }
        let indent = body.len() - trimmed.len();
        let header =
            SECTIONS.iter().position(|s| trimmed.strip_prefix(s).is_some_and(|r| r.trim_start().starts_with(':')));
        if let Some(k) = header {
            if let Some(first) = seen[k] {
                return Err(LoadError::Syntax {
                    line: number,
                    column: indent + 1,
                    message: format!("section `{}` already given on line {first}", SECTIONS[k]),
                });
            }
            seen[k] = Some(number);
            let colon = body.find(':').unwrap_or(0) + 1;
            let mut lines = Vec::new();
            if !body[colon..].trim().is_empty() {
                lines.push(Line { number, text: &body[colon..], offset: colon });
            }
            sections.push((k, lines));
        } else {
            match sections.last_mut() {
                Some((_, lines)) => lines.push(Line { number, text: body, offset: 0 }),
                None => {
                    return Err(LoadError::Syntax {
                        line: number,
                        column: indent + 1,
                        message: "expected a section header".into(),
                    })
                }
            }
        }
    }
    for (k, required) in [(0, "agents"), (1, "states")] {
        if seen[k].is_none() {
            return Err(LoadError::Syntax { line: 1, column: 1, message: format!("missing `{required}` section") });
        }
    }
    sections.sort_by_key(|(k, _)| *k);

    let mut b = ModelBuilder::new();
    for (k, lines) in &sections {
        for line in lines {
            let mut c = Cursor::new(line);
            match SECTIONS[*k] {
                "agents" => {
                    for (col, name) in c.names("agent name", None)? {
                        b.agent(name).map_err(|e| at(line, col, e))?;
                    }
                }
                "states" => {
                    for (col, name) in c.names("state name", None)? {
                        b.state(name).map_err(|e| at(line, col, e))?;
                    }
                }
                "alphabet" => {
                    for (_, name) in c.names("action name", None)? {
                        b.action(name);
                    }
                }
                "props" => {
                    let (_, p) = c.name("proposition name")?;
                    b.prop(p);
                    c.expect("=")?;
                    for (col, s) in c.names("state name", None)? {
                        b.label(p, s).map_err(|e| at(line, col, e))?;
                    }
                }
                "actions" => {
                    let (col, agent) = c.name("agent name")?;
                    let i = b.agent_id(agent).map_err(|e| at(line, col, e))?;
                    c.expect(":")?;
                    let states = c.names("state name", Some("="))?;
                    c.expect("=")?;
                    let menu = c.names("action name", None)?;
                    for &(col, s) in &states {
                        let w = b.state_id(s).map_err(|e| at(line, col, e))?;
                        for &(_, a) in &menu {
                            let a = b.action(a);
                            let mut cur = b.available_ids(i, w);
                            if !cur.contains(&a) {
                                cur.push(a);
                                b.set_available_ids(i, w, &cur);
                            }
                        }
                    }
                }
                "indist" => {
                    let (col, agent) = c.name("agent name")?;
                    let i = b.agent_id(agent).map_err(|e| at(line, col, e))?;
                    c.expect("=")?;
                    loop {
                        c.expect("{")?;
                        let mut group = Vec::new();
                        for (col, s) in c.names("state name", Some("}"))? {
                            group.push(b.state_id(s).map_err(|e| at(line, col, e))?);
                        }
                        c.expect("}")?;
                        b.indist_ids(i, group);
                        if !c.eat(",") {
                            break;
                        }
                    }
                }
                "transitions" => {
                    let (col, from) = c.name("state name")?;
                    let w = b.state_id(from).map_err(|e| at(line, col, e))?;
                    let action = if c.eat("*") {
                        None
                    } else {
                        c.expect("(")?;
                        let start = c.column();
                        let mut ids = Vec::new();
                        for (col, a) in c.names("action name", Some(")"))? {
                            ids.push(b.action_id(a).map_err(|e| at(line, col, e))?);
                        }
                        if ids.len() != b.agent_count() {
                            return Err(at(
                                line,
                                start,
                                ModelError::Arity { expected: b.agent_count(), got: ids.len() },
                            ));
                        }
                        c.expect(")")?;
                        Some(JointAction::new(ids))
                    };
                    c.expect("->")?;
                    let (col, to) = c.name("state name")?;
                    let v = b.state_id(to).map_err(|e| at(line, col, e))?;
                    match action {
                        Some(ja) => b.transition_ids(w, ja, v),
                        None => {
                            for ja in b.joint_actions(w) {
                                b.transition_ids(w, ja, v);
                            }
                        }
                    }
                }
                _ => unreachable!(),
            }
            c.finish()?;
        }
    }
    match b.build() {
        Ok(m) => Ok(m),
        Err(ModelError::Invalid(v)) => Err(LoadError::Invalid(v)),
        Err(e) => Err(LoadError::Syntax { line: 1, column: 1, message: e.to_string() }),
    }
}

fn list<'a>(items: impl IntoIterator<Item = &'a str>) -> String {
    items.into_iter().collect::<Vec<_>>().join(", ")
}

/// Canonical document for `m`; `load_model` reproduces `m` exactly.
pub fn save_model(m: &Model) -> String {
    let mut out = String::new();
    let names = |ids: &[ActionId]| list(ids.iter().map(|&a| m.action_name(a)));
    writeln!(out, "agents: {}", list(m.agent_names().iter().map(String::as_str))).unwrap();
    writeln!(out, "states: {}", list(m.state_names().iter().map(String::as_str))).unwrap();
    writeln!(out, "alphabet: {}", list(m.action_names().iter().map(String::as_str))).unwrap();
    out.push_str("props:\n");
    for p in m.props() {
        let states = list(m.valuation(p).iter().map(|&w| m.state_name(w)));
        let line = format!("  {} = {}", m.prop_name(p), states);
        writeln!(out, "{}", line.trim_end()).unwrap();
    }
    out.push_str("actions:\n");
    for i in m.agents() {
        let mut groups: Vec<(&[ActionId], Vec<&str>)> = Vec::new();
        for w in m.states() {
            let menu = m.available(i, w);
            match groups.iter_mut().find(|(g, _)| *g == menu) {
                Some((_, ws)) => ws.push(m.state_name(w)),
                None => groups.push((menu, vec![m.state_name(w)])),
            }
        }
        for (menu, ws) in groups {
            writeln!(out, "  {}: {} = {}", m.agent_name(i), list(ws), names(menu)).unwrap();
        }
    }
    out.push_str("indist:\n");
    for i in m.agents() {
        let blocks: Vec<String> = m
            .partition(i)
            .into_iter()
            .filter(|b| b.len() > 1)
            .map(|b| format!("{{{}}}", list(b.iter().map(|&w| m.state_name(w)))))
            .collect();
        if !blocks.is_empty() {
            writeln!(out, "  {} = {}", m.agent_name(i), blocks.join(", ")).unwrap();
        }
    }
    out.push_str("transitions:\n");
    for (w, ja, v) in m.transitions() {
        writeln!(out, "  {} {} -> {}", m.state_name(w), m.joint_action_text(ja), m.state_name(v)).unwrap();
    }
    out
}

/// One expected verdict for a built-in model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub history: &'static str,
    pub formula: &'static str,
    pub horizon: u32,
    pub expected: bool,
}

#[derive(Debug, Clone)]
pub struct BuiltinSuite {
    pub name: &'static str,
    pub document: &'static str,
    pub model: Model,
    pub checks: Vec<Check>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown built-in model `{0}` (expected one of M1, M2, M3, M4)")]
pub struct UnknownBuiltin(pub String);

pub const BUILTINS: [&str; 4] = ["M1", "M2", "M3", "M4"];

const fn check(history: &'static str, formula: &'static str, horizon: u32, expected: bool) -> Check {
    Check { history, formula, horizon, expected }
}

pub fn builtin(name: &str) -> Result<BuiltinSuite, UnknownBuiltin> {
    let (name, document, checks) = match name {
        "M1" => (
            "M1",
            include_str!("../models/m1.icgs"),
            vec![
                check("q0 -(L,n,n)-> q1", "<<g1>> X win", 1, false),
                check("q0 -(L,n,n)-> q1", "<<g2>> X win", 1, false),
                check("q0 -(L,n,n)-> q1", "<<g1,g2>> X win", 1, true),
                check("q0", "<<g1,g2>> F win", 2, true),
                check("q0", "<<g2>> F win", 2, false),
                check("q0 -(L,n,n)-> q1", "K{g2} ~win", 1, true),
            ],
        ),
        "M2" => (
            "M2",
            include_str!("../models/m2.icgs"),
            vec![
                check("q0 -(L,n,n)-> q1", "<<g1>> X win", 1, true),
                check("q0 -(L,n,n)-> q1", "<<g1,g2>> X win", 1, true),
                check("q0 -(L,n,n)-> q1", "<<g2>> X win", 1, false),
            ],
        ),
        "M3" => (
            "M3",
            include_str!("../models/m3.icgs"),
            vec![
                check("q0 -(n,a)-> q1", "<<1>> p U q", 2, true),
                check("q0 -(n,a)-> q1", "<<1>> (K{1} p) U (K{1} q)", 2, false),
                check("q0 -(n,a)-> q1", "<<1>> F q", 2, true),
                check("q0 -(n,a)-> q1", "<<1,2>> X q", 1, true),
            ],
        ),
        "M4" => (
            "M4",
            include_str!("../models/m4.icgs"),
            vec![
                check("q0 -(n,a)-> q1", "p", 3, true),
                check("q0 -(n,a)-> q1", "<<1>> X <<1>> G p", 3, true),
                check("q0 -(n,a)-> q1", "<<1>> G p", 3, false),
            ],
        ),
        other => return Err(UnknownBuiltin(other.to_string())),
    };
    let model = load_model(document).expect("built-in models are valid");
    Ok(BuiltinSuite { name, document, model, checks })
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at {} (H={}) = {}", self.formula, self.history, self.horizon, self.expected)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn m3_has_the_stated_valuation() {
        let m = builtin("M3").unwrap().model;
        assert_eq!(m.state_count(), 5);
        assert_eq!(m.agent_count(), 2);
        let at = |s: &str| m.props_at(m.state_id(s).unwrap()).unwrap();
        assert_eq!(at("q1"), vec!["p"]);
        assert_eq!(at("q1'"), vec!["q"]);
        assert_eq!(at("q2"), vec!["q"]);
        assert!(at("q2'").is_empty());
    }

    #[test]
    fn builtins_round_trip() {
        for name in BUILTINS {
            let m = builtin(name).unwrap().model;
            assert_eq!(load_model(&save_model(&m)).unwrap(), m, "{name}");
        }
    }

    #[test]
    fn missing_transition_is_reported() {
        let doc = "agents: a\nstates: s, t\nactions:\n a: s, t = x, y\ntransitions:\n s (x) -> t\n t * -> t\n";
        match load_model(doc) {
            Err(LoadError::Invalid(v)) => {
                assert_eq!(v.len(), 1);
                assert_eq!(v[0].to_string(), "transition not total at (s, (y))");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn incoherent_menus_are_reported() {
        let doc = "agents: a\nstates: s, t\nactions:\n a: s = x\n a: t = x, y\nindist:\n a = {s, t}\ntransitions:\n s * -> s\n t * -> t\n";
        match load_model(doc) {
            Err(LoadError::Invalid(v)) => {
                assert!(v[0].to_string().starts_with("action-knowledge coherence"))
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn syntax_errors_carry_positions() {
        let doc = "agents: a\nstates: s\nactions:\n  a: s = x\ntransitions:\n  s (x) => s\n";
        assert_eq!(load_model(doc), Err(LoadError::Syntax { line: 6, column: 9, message: "expected `->`".into() }));
        let doc = "agents: a\nstates: s\nactions:\n  b: s = x\n";
        assert!(matches!(load_model(doc), Err(LoadError::Syntax { line: 4, column: 3, .. })));
        let doc = "agents: a, b\nstates: s\nactions:\n  a: s = x\n  b: s = x\ntransitions:\n  s (x) -> s\n";
        assert!(matches!(load_model(doc), Err(LoadError::Syntax { line: 7, column: 6, .. })));
    }

    #[test]
    fn sections_are_order_insensitive() {
        let a = "agents: a\nstates: s\nactions:\n  a: s = x\ntransitions:\n  s * -> s\nprops:\n  p = s\n";
        let b = "transitions:\n  s * -> s\nprops:\n  p = s\nactions:\n  a: s = x\nstates: s\nagents: a\n";
        assert_eq!(load_model(a).unwrap(), load_model(b).unwrap());
    }

    #[test]
    fn agent_order_is_preserved() {
        let m = builtin("M1").unwrap().model;
        let again = load_model(&save_model(&m)).unwrap();
        assert_eq!(again.agent_names(), ["s", "g1", "g2"]);
    }
}

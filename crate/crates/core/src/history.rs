//! Finite histories and the perfect-recall indistinguishability relations.
//!
//! Two histories are equivalent for agent `i` when they have the same
//! length, their states are pairwise `R_i`-related, and `i` played the same
//! action at every step. A coalition's relation is the intersection of its
//! members' relations.

use std::fmt;

use thiserror::Error;

use crate::model::{AgentId, Coalition, JointAction, Model, ModelError, StateId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HistoryError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("history syntax error at column {column}: {message}")]
    Syntax { column: usize, message: String },
    #[error("history is not transition-consistent at step {step}: {message}")]
    Inconsistent { step: usize, message: String },
}

/// `w_0 -α_1-> w_1 ... -α_m-> w_m`. Its length is the number of actions.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct History {
    states: Vec<StateId>,
    actions: Vec<JointAction>,
}

impl History {
    /// The length-0 history `⟨w⟩`.
    pub fn start(w: StateId) -> Self {
        History { states: vec![w], actions: Vec::new() }
    }

    /// Builds a history and checks it against the transition table.
    pub fn from_parts(m: &Model, states: Vec<StateId>, actions: Vec<JointAction>) -> Result<Self, HistoryError> {
        if states.len() != actions.len() + 1 {
            return Err(HistoryError::Inconsistent {
                step: 0,
                message: format!("{} states but {} actions", states.len(), actions.len()),
            });
        }
        if states[0].index() >= m.state_count() {
            return Err(ModelError::StateOutOfRange(states[0].0).into());
        }
        for (k, a) in actions.iter().enumerate() {
            let next = m.successor(states[k], a)?;
            if next != states[k + 1] {
                return Err(HistoryError::Inconsistent {
                    step: k + 1,
                    message: format!(
                        "{} {} leads to {}, not {}",
                        m.state_name(states[k]),
                        m.joint_action_text(a),
                        m.state_name(next),
                        m.state_name(states[k + 1])
                    ),
                });
            }
        }
        Ok(History { states, actions })
    }

    pub fn len(&self) -> usize {
        self.actions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.actions.is_empty()
    }

    pub fn first(&self) -> StateId {
        self.states[0]
    }

    pub fn last(&self) -> StateId {
        *self.states.last().expect("histories are nonempty")
    }

    pub fn states(&self) -> &[StateId] {
        &self.states
    }

    pub fn actions(&self) -> &[JointAction] {
        &self.actions
    }

    /// `h[0, j]`.
    pub fn prefix(&self, j: usize) -> History {
        History { states: self.states[..=j].to_vec(), actions: self.actions[..j].to_vec() }
    }

    /// Appends `α` and `δ(last, α)`.
    pub fn extend(&self, m: &Model, action: &JointAction) -> Result<History, HistoryError> {
        let next = m.successor(self.last(), action)?;
        Ok(self.pushed(action.clone(), next))
    }

    /// Appends without consulting the model; the caller guarantees consistency.
    pub(crate) fn pushed(&self, action: JointAction, next: StateId) -> History {
        let mut h = self.clone();
        h.actions.push(action);
        h.states.push(next);
        h
    }

    pub fn display<'a>(&'a self, m: &'a Model) -> HistoryDisplay<'a> {
        HistoryDisplay { h: self, m }
    }
}

pub struct HistoryDisplay<'a> {
    h: &'a History,
    m: &'a Model,
}

impl fmt::Display for HistoryDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.m.state_name(self.h.states[0]))?;
        for (a, w) in self.h.actions.iter().zip(&self.h.states[1..]) {
            write!(f, " -{}-> {}", self.m.joint_action_text(a), self.m.state_name(*w))?;
        }
        Ok(())
    }
}

/// `h ≈_i h′`.
pub fn equiv_agent(m: &Model, h: &History, other: &History, agent: AgentId) -> bool {
    h.len() == other.len()
        && h.states.iter().zip(&other.states).all(|(&w, &v)| m.indistinguishable(agent, w, v))
        && h.actions.iter().zip(&other.actions).all(|(a, b)| a.get(agent) == b.get(agent))
}

/// `h ≈_G h′`.
pub fn equiv_coalition(m: &Model, h: &History, other: &History, g: Coalition) -> bool {
    g.agents().all(|i| equiv_agent(m, h, other, i))
}

/// An `≈_G` equivalence class of same-length histories, sorted; the first
/// member is the canonical representative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InfoClass {
    pub coalition: Coalition,
    pub members: Vec<History>,
}

impl InfoClass {
    pub fn representative(&self) -> &History {
        &self.members[0]
    }

    pub fn contains(&self, h: &History) -> bool {
        self.members.binary_search(h).is_ok()
    }
}

/// All histories `≈_G`-equivalent to `h`, from any start state.
///
/// Walks forward in lockstep with `h`: only joint actions whose coalition
/// components match `h`'s, and only successors `R_G`-related to `h`'s state
/// at that index, survive each step.
pub fn equiv_class(m: &Model, h: &History, g: Coalition) -> InfoClass {
    let mut frontier: Vec<History> =
        m.states().filter(|&w| m.coalition_indistinguishable(g, w, h.first())).map(History::start).collect();
    for (k, a) in h.actions.iter().enumerate() {
        let target = h.states[k + 1];
        let mut next = Vec::new();
        for f in &frontier {
            for b in m.joint_actions(f.last()).unwrap_or_default() {
                if !b.agrees_on(a, g) {
                    continue;
                }
                let Ok(v) = m.successor(f.last(), &b) else { continue };
                if m.coalition_indistinguishable(g, v, target) {
                    next.push(f.pushed(b, v));
                }
            }
        }
        frontier = next;
    }
    frontier.sort();
    InfoClass { coalition: g, members: frontier }
}

/// Every history of exactly `len` actions, from every state, in sorted order.
pub fn all_histories(m: &Model, len: usize) -> Vec<History> {
    let mut out: Vec<History> = m.states().map(History::start).collect();
    for _ in 0..len {
        let mut next = Vec::new();
        for h in &out {
            for a in m.joint_actions(h.last()).unwrap_or_default() {
                if let Ok(v) = m.successor(h.last(), &a) {
                    next.push(h.pushed(a, v));
                }
            }
        }
        out = next;
    }
    out.sort();
    out
}

/// Every history of length at most `max_len`, shortest first.
pub fn histories_up_to(m: &Model, max_len: usize) -> Vec<History> {
    (0..=max_len).flat_map(|n| all_histories(m, n)).collect()
}

fn is_name_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '\'' || c == '.'
}

/// Parses `q0 -(L,n,l)-> q1 -(n,n,l)-> q2` against a model.
pub fn parse_history(m: &Model, text: &str) -> Result<History, HistoryError> {
    let mut lx = Scanner { text, pos: 0 };
    let mut states = Vec::new();
    let mut actions = Vec::new();
    let name = lx.name("state name")?;
    states.push(m.state_id(name.1).ok_or_else(|| lx.error_at(name.0, format!("unknown state `{}`", name.1)))?);
    loop {
        lx.skip_ws();
        if lx.at_end() {
            break;
        }
        lx.expect("-(")?;
        let mut ja = Vec::new();
        loop {
            let (col, a) = lx.name("action name")?;
            ja.push(m.action_id(a).ok_or_else(|| lx.error_at(col, format!("unknown action `{a}`")))?);
            lx.skip_ws();
            if lx.eat(",") {
                continue;
            }
            lx.expect(")->")?;
            break;
        }
        if ja.len() != m.agent_count() {
            return Err(lx.error(format!(
                "joint action has {} components, model has {} agents",
                ja.len(),
                m.agent_count()
            )));
        }
        actions.push(JointAction::new(ja));
        let (col, s) = lx.name("state name")?;
        states.push(m.state_id(s).ok_or_else(|| lx.error_at(col, format!("unknown state `{s}`")))?);
    }
    History::from_parts(m, states, actions)
}

struct Scanner<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Scanner<'a> {
    fn rest(&self) -> &'a str {
        &self.text[self.pos..]
    }

    fn at_end(&self) -> bool {
        self.pos >= self.text.len()
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.text.len() - trimmed.len();
    }

    fn column(&self, pos: usize) -> usize {
        self.text[..pos].chars().count() + 1
    }

    fn error(&self, message: String) -> HistoryError {
        HistoryError::Syntax { column: self.column(self.pos), message }
    }

    fn error_at(&self, column: usize, message: String) -> HistoryError {
        HistoryError::Syntax { column, message }
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

    fn expect(&mut self, tok: &str) -> Result<(), HistoryError> {
        if self.eat(tok) {
            Ok(())
        } else {
            let common: usize =
                self.rest().chars().zip(tok.chars()).take_while(|(a, b)| a == b).map(|(a, _)| a.len_utf8()).sum();
            let column = self.column(self.pos + common);
            Err(self.error_at(column, format!("expected `{tok}`")))
        }
    }

    fn name(&mut self, what: &str) -> Result<(usize, &'a str), HistoryError> {
        self.skip_ws();
        let start = self.pos;
        let len: usize = self.rest().chars().take_while(|&c| is_name_char(c)).map(char::len_utf8).sum();
        if len == 0 {
            return Err(self.error(format!("expected {what}")));
        }
        self.pos += len;
        Ok((self.column(start), &self.text[start..self.pos]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{ActionId, ModelBuilder};

    /// Single agent, `q0 -a-> q1`, `q0 -b-> q1`.
    fn same_effect() -> Model {
        let mut b = ModelBuilder::new();
        b.agent("i").unwrap();
        b.state("q0").unwrap();
        b.state("q1").unwrap();
        b.add_available("i", "q0", "a").unwrap();
        b.add_available("i", "q0", "b").unwrap();
        b.add_available("i", "q1", "a").unwrap();
        b.transition("q0", &["a"], "q1").unwrap();
        b.transition("q0", &["b"], "q1").unwrap();
        b.self_loop("q1").unwrap();
        b.build().unwrap()
    }

    #[test]
    fn different_own_actions_are_distinguished() {
        let m = same_effect();
        let h = parse_history(&m, "q0 -(a)-> q1").unwrap();
        let g = parse_history(&m, "q0 -(b)-> q1").unwrap();
        assert!(!equiv_agent(&m, &h, &g, AgentId(0)));
        assert!(equiv_agent(&m, &h, &h, AgentId(0)));
    }

    #[test]
    fn extend_appends_one_step() {
        let m = same_effect();
        let h = History::start(StateId(0));
        let e = h.extend(&m, &JointAction::new([ActionId(0)])).unwrap();
        assert_eq!(e.len(), 1);
        assert_eq!(e.last(), StateId(1));
        // `b` is unavailable at q1
        assert!(e.extend(&m, &JointAction::new([ActionId(1)])).is_err());
    }

    #[test]
    fn history_text_round_trips() {
        let m = same_effect();
        let text = "q0 -(b)-> q1 -(a)-> q1";
        let h = parse_history(&m, text).unwrap();
        assert_eq!(h.display(&m).to_string(), text);
    }

    #[test]
    fn history_syntax_errors_carry_columns() {
        let m = same_effect();
        match parse_history(&m, "q0 -(a) q1") {
            Err(HistoryError::Syntax { column, .. }) => assert_eq!(column, 8),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse_history(&m, "q9"), Err(HistoryError::Syntax { column: 1, .. })));
        assert!(matches!(parse_history(&m, "q1 -(a)-> q0"), Err(HistoryError::Inconsistent { step: 1, .. })));
    }

    #[test]
    fn identity_relations_give_singleton_classes() {
        let m = same_effect();
        for h in histories_up_to(&m, 3) {
            let c = equiv_class(&m, &h, Coalition::singleton(AgentId(0)));
            assert_eq!(c.members, vec![h]);
        }
    }
}

//! Imperfect-information concurrent game structures.
//!
//! A [`Model`] holds a finite set of agents and states, a single global
//! action alphabet with per-(agent, state) availability, a deterministic
//! joint-action transition table, and one indistinguishability partition per
//! agent. Names are interned to dense ids; everything user-facing prints
//! names again.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::Serialize;
use smallvec::SmallVec;
use thiserror::Error;

/// Hard cap so coalitions fit a 64-bit mask.
pub const MAX_AGENTS: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct AgentId(pub u16);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct StateId(pub u32);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ActionId(pub u16);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct PropId(pub u16);

impl AgentId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl StateId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl ActionId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl PropId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// One action per agent, in the model's agent order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct JointAction(pub SmallVec<[ActionId; 4]>);

impl JointAction {
    pub fn new(actions: impl IntoIterator<Item = ActionId>) -> Self {
        JointAction(actions.into_iter().collect())
    }

    pub fn get(&self, agent: AgentId) -> ActionId {
        self.0[agent.index()]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = ActionId> + '_ {
        self.0.iter().copied()
    }

    /// True when every member of `coalition` plays the same action in both.
    pub fn agrees_on(&self, other: &JointAction, coalition: Coalition) -> bool {
        coalition.agents().all(|i| self.get(i) == other.get(i))
    }
}

/// A set of agents, stored as a bit mask.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Coalition(pub u64);

impl Coalition {
    pub fn empty() -> Self {
        Coalition(0)
    }

    pub fn singleton(agent: AgentId) -> Self {
        Coalition(1u64 << agent.0)
    }

    pub fn all(agent_count: usize) -> Self {
        if agent_count >= 64 {
            Coalition(u64::MAX)
        } else {
            Coalition((1u64 << agent_count) - 1)
        }
    }

    pub fn from_agents(agents: impl IntoIterator<Item = AgentId>) -> Self {
        agents.into_iter().fold(Coalition(0), |c, a| Coalition(c.0 | (1u64 << a.0)))
    }

    pub fn contains(self, agent: AgentId) -> bool {
        self.0 & (1u64 << agent.0) != 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn union(self, other: Coalition) -> Coalition {
        Coalition(self.0 | other.0)
    }

    pub fn intersection(self, other: Coalition) -> Coalition {
        Coalition(self.0 & other.0)
    }

    pub fn is_subset(self, other: Coalition) -> bool {
        self.0 & !other.0 == 0
    }

    /// Agents of an `agent_count`-agent model not in this coalition.
    pub fn complement(self, agent_count: usize) -> Coalition {
        Coalition(!self.0 & Coalition::all(agent_count).0)
    }

    pub fn agents(self) -> impl Iterator<Item = AgentId> {
        let mask = self.0;
        (0..64u16).filter(move |i| mask & (1u64 << i) != 0).map(AgentId)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("unknown {kind} `{name}`")]
    UnknownName { kind: &'static str, name: String },
    #[error("duplicate {kind} `{name}`")]
    DuplicateName { kind: &'static str, name: String },
    #[error("state index {0} out of range")]
    StateOutOfRange(u32),
    #[error("joint action {action} is not available at {state}")]
    IllegalAction { state: String, action: String },
    #[error("joint action has {got} components, model has {expected} agents")]
    Arity { expected: usize, got: usize },
    #[error("at most {MAX_AGENTS} agents are supported")]
    TooManyAgents,
    #[error("model has no {0}")]
    Empty(&'static str),
    #[error("invalid model: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
}

/// A broken model invariant, phrased with model names.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Violation {
    NoActions { agent: String, state: String },
    NotTotal { state: String, action: String },
    UnavailableTransition { state: String, action: String },
    Incoherent { agent: String, state: String, other: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NoActions { agent, state } => {
                write!(f, "no actions available to {agent} at {state}")
            }
            Violation::NotTotal { state, action } => {
                write!(f, "transition not total at ({state}, {action})")
            }
            Violation::UnavailableTransition { state, action } => {
                write!(f, "transition defined for unavailable joint action at ({state}, {action})")
            }
            Violation::Incoherent { agent, state, other } => write!(
                f,
                "action-knowledge coherence: {agent} cannot distinguish {state} and {other} but has different actions"
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Model {
    agents: Vec<String>,
    states: Vec<String>,
    actions: Vec<String>,
    props: Vec<String>,
    valuation: Vec<BTreeSet<StateId>>,
    // [agent][state], sorted by id
    available: Vec<Vec<Vec<ActionId>>>,
    transitions: BTreeMap<(StateId, JointAction), StateId>,
    // [agent][state] -> block id, blocks numbered by first occurrence
    indist: Vec<Vec<u32>>,
}

impl Model {
    pub fn agent_count(&self) -> usize {
        self.agents.len()
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn agents(&self) -> impl Iterator<Item = AgentId> {
        (0..self.agents.len() as u16).map(AgentId)
    }

    pub fn states(&self) -> impl Iterator<Item = StateId> {
        (0..self.states.len() as u32).map(StateId)
    }

    pub fn props(&self) -> impl Iterator<Item = PropId> {
        (0..self.props.len() as u16).map(PropId)
    }

    pub fn agent_names(&self) -> &[String] {
        &self.agents
    }

    pub fn state_names(&self) -> &[String] {
        &self.states
    }

    pub fn action_names(&self) -> &[String] {
        &self.actions
    }

    pub fn prop_names(&self) -> &[String] {
        &self.props
    }

    pub fn agent_name(&self, a: AgentId) -> &str {
        &self.agents[a.index()]
    }

    pub fn state_name(&self, s: StateId) -> &str {
        &self.states[s.index()]
    }

    pub fn action_name(&self, a: ActionId) -> &str {
        &self.actions[a.index()]
    }

    pub fn prop_name(&self, p: PropId) -> &str {
        &self.props[p.index()]
    }

    pub fn agent_id(&self, name: &str) -> Option<AgentId> {
        self.agents.iter().position(|n| n == name).map(|i| AgentId(i as u16))
    }

    pub fn state_id(&self, name: &str) -> Option<StateId> {
        self.states.iter().position(|n| n == name).map(|i| StateId(i as u32))
    }

    pub fn action_id(&self, name: &str) -> Option<ActionId> {
        self.actions.iter().position(|n| n == name).map(|i| ActionId(i as u16))
    }

    pub fn prop_id(&self, name: &str) -> Option<PropId> {
        self.props.iter().position(|n| n == name).map(|i| PropId(i as u16))
    }

    pub fn full_coalition(&self) -> Coalition {
        Coalition::all(self.agents.len())
    }

    pub fn holds(&self, p: PropId, w: StateId) -> bool {
        self.valuation[p.index()].contains(&w)
    }

    /// States where `p` holds.
    pub fn valuation(&self, p: PropId) -> &BTreeSet<StateId> {
        &self.valuation[p.index()]
    }

    /// `d_i(w)`, sorted by action id.
    pub fn available(&self, agent: AgentId, w: StateId) -> &[ActionId] {
        &self.available[agent.index()][w.index()]
    }

    /// Block id of `w` in agent `i`'s indistinguishability partition.
    pub fn block(&self, agent: AgentId, w: StateId) -> u32 {
        self.indist[agent.index()][w.index()]
    }

    pub fn indistinguishable(&self, agent: AgentId, w: StateId, v: StateId) -> bool {
        self.block(agent, w) == self.block(agent, v)
    }

    /// `w R_G v`: indistinguishable for every member of the coalition.
    pub fn coalition_indistinguishable(&self, g: Coalition, w: StateId, v: StateId) -> bool {
        g.agents().all(|i| self.indistinguishable(i, w, v))
    }

    /// The partition of `W` induced by the intersection of the members'
    /// relations, as a block id per state (numbered by first occurrence).
    pub fn coalition_blocks(&self, g: Coalition) -> Vec<u32> {
        let mut ids: HashMap<Vec<u32>, u32> = HashMap::new();
        self.states()
            .map(|w| {
                let key: Vec<u32> = g.agents().map(|i| self.block(i, w)).collect();
                let next = ids.len() as u32;
                *ids.entry(key).or_insert(next)
            })
            .collect()
    }

    /// Blocks of agent `i`'s partition, as state lists in first-occurrence order.
    pub fn partition(&self, agent: AgentId) -> Vec<Vec<StateId>> {
        let mut blocks: Vec<Vec<StateId>> = Vec::new();
        for w in self.states() {
            let b = self.block(agent, w) as usize;
            if b == blocks.len() {
                blocks.push(Vec::new());
            }
            blocks[b].push(w);
        }
        blocks
    }

    fn check_state(&self, w: StateId) -> Result<(), ModelError> {
        if w.index() < self.states.len() {
            Ok(())
        } else {
            Err(ModelError::StateOutOfRange(w.0))
        }
    }

    /// `D(w)`: the Cartesian product of the agents' available actions, with
    /// the first agent varying slowest.
    pub fn joint_actions(&self, w: StateId) -> Result<Vec<JointAction>, ModelError> {
        self.check_state(w)?;
        let mut out = vec![JointAction(SmallVec::new())];
        for i in self.agents() {
            let menu = self.available(i, w);
            let mut next = Vec::with_capacity(out.len() * menu.len());
            for prefix in &out {
                for &a in menu {
                    let mut ja = prefix.clone();
                    ja.0.push(a);
                    next.push(ja);
                }
            }
            out = next;
        }
        Ok(out)
    }

    pub fn is_available(&self, w: StateId, action: &JointAction) -> bool {
        action.len() == self.agents.len()
            && self.agents().all(|i| self.available(i, w).binary_search(&action.get(i)).is_ok())
    }

    /// `δ(w, α)`.
    pub fn successor(&self, w: StateId, action: &JointAction) -> Result<StateId, ModelError> {
        self.check_state(w)?;
        if action.len() != self.agents.len() {
            return Err(ModelError::Arity { expected: self.agents.len(), got: action.len() });
        }
        if !self.is_available(w, action) {
            return Err(self.illegal(w, action));
        }
        self.transitions.get(&(w, action.clone())).copied().ok_or_else(|| self.illegal(w, action))
    }

    fn illegal(&self, w: StateId, action: &JointAction) -> ModelError {
        ModelError::IllegalAction { state: self.state_name(w).to_string(), action: self.joint_action_text(action) }
    }

    /// Propositions true at `w`, in declaration order.
    pub fn props_at(&self, w: StateId) -> Result<Vec<&str>, ModelError> {
        self.check_state(w)?;
        Ok(self.props().filter(|&p| self.holds(p, w)).map(|p| self.prop_name(p)).collect())
    }

    /// `(a1,...,ak)` with action names.
    pub fn joint_action_text(&self, action: &JointAction) -> String {
        let names: Vec<&str> =
            action.iter().map(|a| self.actions.get(a.index()).map(String::as_str).unwrap_or("?")).collect();
        format!("({})", names.join(","))
    }

    pub fn transitions(&self) -> impl Iterator<Item = (StateId, &JointAction, StateId)> {
        self.transitions.iter().map(|((w, a), v)| (*w, a, *v))
    }

    /// Checks every model invariant and reports each violation found.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        for i in self.agents() {
            for w in self.states() {
                if self.available(i, w).is_empty() {
                    out.push(Violation::NoActions {
                        agent: self.agent_name(i).to_string(),
                        state: self.state_name(w).to_string(),
                    });
                }
            }
        }
        for w in self.states() {
            // joint_actions cannot fail on an in-range state
            for ja in self.joint_actions(w).unwrap_or_default() {
                if !self.transitions.contains_key(&(w, ja.clone())) {
                    out.push(Violation::NotTotal {
                        state: self.state_name(w).to_string(),
                        action: self.joint_action_text(&ja),
                    });
                }
            }
        }
        for (w, ja) in self.transitions.keys() {
            if !self.is_available(*w, ja) {
                out.push(Violation::UnavailableTransition {
                    state: self.state_name(*w).to_string(),
                    action: self.joint_action_text(ja),
                });
            }
        }
        for i in self.agents() {
            for block in self.partition(i) {
                let first = block[0];
                for &w in &block[1..] {
                    if self.available(i, w) != self.available(i, first) {
                        out.push(Violation::Incoherent {
                            agent: self.agent_name(i).to_string(),
                            state: self.state_name(first).to_string(),
                            other: self.state_name(w).to_string(),
                        });
                    }
                }
            }
        }
        out
    }
}

/// `validate_model`: `Ok` iff every invariant holds.
pub fn validate_model(m: &Model) -> Result<(), Vec<Violation>> {
    let v = m.validate();
    if v.is_empty() {
        Ok(())
    } else {
        Err(v)
    }
}

/// Incremental construction by name. Agents and states must be declared
/// before anything refers to them; actions and propositions are interned on
/// first use.
#[derive(Debug, Clone, Default)]
pub struct ModelBuilder {
    agents: Vec<String>,
    states: Vec<String>,
    actions: Vec<String>,
    props: Vec<String>,
    valuation: Vec<BTreeSet<StateId>>,
    available: BTreeMap<(u16, u32), BTreeSet<ActionId>>,
    transitions: BTreeMap<(StateId, JointAction), StateId>,
    groups: Vec<(AgentId, Vec<StateId>)>,
}

impl ModelBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    /// A builder holding every component of `m`, for editing.
    pub fn from_model(m: &Model) -> Self {
        let mut b = ModelBuilder {
            agents: m.agents.clone(),
            states: m.states.clone(),
            actions: m.actions.clone(),
            props: m.props.clone(),
            valuation: m.valuation.clone(),
            transitions: m.transitions.clone(),
            ..Default::default()
        };
        for i in m.agents() {
            for w in m.states() {
                b.available.insert((i.0, w.0), m.available(i, w).iter().copied().collect());
            }
            for block in m.partition(i) {
                if block.len() > 1 {
                    b.groups.push((i, block));
                }
            }
        }
        b
    }

    pub fn agent(&mut self, name: &str) -> Result<AgentId, ModelError> {
        if self.agents.iter().any(|a| a == name) {
            return Err(ModelError::DuplicateName { kind: "agent", name: name.into() });
        }
        if self.agents.len() == MAX_AGENTS {
            return Err(ModelError::TooManyAgents);
        }
        self.agents.push(name.to_string());
        Ok(AgentId(self.agents.len() as u16 - 1))
    }

    pub fn state(&mut self, name: &str) -> Result<StateId, ModelError> {
        if self.states.iter().any(|s| s == name) {
            return Err(ModelError::DuplicateName { kind: "state", name: name.into() });
        }
        self.states.push(name.to_string());
        Ok(StateId(self.states.len() as u32 - 1))
    }

    /// Interns an action name into the global alphabet.
    pub fn action(&mut self, name: &str) -> ActionId {
        match self.actions.iter().position(|a| a == name) {
            Some(i) => ActionId(i as u16),
            None => {
                self.actions.push(name.to_string());
                ActionId(self.actions.len() as u16 - 1)
            }
        }
    }

    /// Declares a proposition; repeated declarations are merged.
    pub fn prop(&mut self, name: &str) -> PropId {
        match self.props.iter().position(|p| p == name) {
            Some(i) => PropId(i as u16),
            None => {
                self.props.push(name.to_string());
                self.valuation.push(BTreeSet::new());
                PropId(self.props.len() as u16 - 1)
            }
        }
    }

    pub fn agent_id(&self, name: &str) -> Result<AgentId, ModelError> {
        self.agents
            .iter()
            .position(|a| a == name)
            .map(|i| AgentId(i as u16))
            .ok_or_else(|| ModelError::UnknownName { kind: "agent", name: name.into() })
    }

    pub fn state_id(&self, name: &str) -> Result<StateId, ModelError> {
        self.states
            .iter()
            .position(|s| s == name)
            .map(|i| StateId(i as u32))
            .ok_or_else(|| ModelError::UnknownName { kind: "state", name: name.into() })
    }

    pub fn action_id(&self, name: &str) -> Result<ActionId, ModelError> {
        self.actions
            .iter()
            .position(|a| a == name)
            .map(|i| ActionId(i as u16))
            .ok_or_else(|| ModelError::UnknownName { kind: "action", name: name.into() })
    }

    pub fn agent_count(&self) -> usize {
        self.agents.len()
    }

    pub fn label(&mut self, prop: &str, state: &str) -> Result<(), ModelError> {
        let w = self.state_id(state)?;
        let p = self.prop(prop);
        self.valuation[p.index()].insert(w);
        Ok(())
    }

    pub fn add_available(&mut self, agent: &str, state: &str, action: &str) -> Result<(), ModelError> {
        let i = self.agent_id(agent)?;
        let w = self.state_id(state)?;
        let a = self.action(action);
        self.available.entry((i.0, w.0)).or_default().insert(a);
        Ok(())
    }

    pub fn set_available_ids(&mut self, agent: AgentId, state: StateId, actions: &[ActionId]) {
        self.available.insert((agent.0, state.0), actions.iter().copied().collect());
    }

    pub fn available_ids(&self, agent: AgentId, state: StateId) -> Vec<ActionId> {
        self.available.get(&(agent.0, state.0)).map(|s| s.iter().copied().collect()).unwrap_or_default()
    }

    /// Adds (or overwrites) `δ(from, actions) = to`, actions named in agent order.
    pub fn transition(&mut self, from: &str, actions: &[&str], to: &str) -> Result<(), ModelError> {
        if actions.len() != self.agents.len() {
            return Err(ModelError::Arity { expected: self.agents.len(), got: actions.len() });
        }
        let w = self.state_id(from)?;
        let v = self.state_id(to)?;
        let ja = actions.iter().map(|a| self.action_id(a)).collect::<Result<SmallVec<_>, _>>()?;
        self.transitions.insert((w, JointAction(ja)), v);
        Ok(())
    }

    pub fn transition_ids(&mut self, from: StateId, action: JointAction, to: StateId) {
        self.transitions.insert((from, action), to);
    }

    pub fn remove_transition(&mut self, from: StateId, action: &JointAction) -> Option<StateId> {
        self.transitions.remove(&(from, action.clone()))
    }

    /// `D(w)` as currently declared.
    pub fn joint_actions(&self, w: StateId) -> Vec<JointAction> {
        let mut out = vec![JointAction(SmallVec::new())];
        for i in 0..self.agents.len() as u16 {
            let menu = self.available_ids(AgentId(i), w);
            out = out
                .iter()
                .flat_map(|p| {
                    menu.iter().map(move |&a| {
                        let mut ja = p.clone();
                        ja.0.push(a);
                        ja
                    })
                })
                .collect();
        }
        out
    }

    /// Routes every available joint action at `state` back to `state`.
    pub fn self_loop(&mut self, state: &str) -> Result<(), ModelError> {
        let w = self.state_id(state)?;
        for ja in self.joint_actions(w) {
            self.transitions.insert((w, ja), w);
        }
        Ok(())
    }

    /// Declares the named states mutually indistinguishable for `agent`.
    pub fn indist(&mut self, agent: &str, states: &[&str]) -> Result<(), ModelError> {
        let i = self.agent_id(agent)?;
        let ws = states.iter().map(|s| self.state_id(s)).collect::<Result<Vec<_>, _>>()?;
        self.groups.push((i, ws));
        Ok(())
    }

    pub fn indist_ids(&mut self, agent: AgentId, states: Vec<StateId>) {
        self.groups.push((agent, states));
    }

    /// Assembles the model without checking the semantic invariants.
    pub fn build_unchecked(&self) -> Result<Model, ModelError> {
        if self.agents.is_empty() {
            return Err(ModelError::Empty("agents"));
        }
        if self.states.is_empty() {
            return Err(ModelError::Empty("states"));
        }
        let n = self.states.len();
        let mut available = vec![vec![Vec::new(); n]; self.agents.len()];
        for (&(i, w), acts) in &self.available {
            available[i as usize][w as usize] = acts.iter().copied().collect();
        }
        // union-find over declared groups, then renumber by first occurrence
        let mut indist = Vec::with_capacity(self.agents.len());
        for i in 0..self.agents.len() as u16 {
            let mut parent: Vec<usize> = (0..n).collect();
            fn find(p: &mut [usize], x: usize) -> usize {
                let mut r = x;
                while p[r] != r {
                    r = p[r];
                }
                let mut y = x;
                while p[y] != r {
                    let nx = p[y];
                    p[y] = r;
                    y = nx;
                }
                r
            }
            for (a, ws) in &self.groups {
                if a.0 != i {
                    continue;
                }
                for pair in ws.windows(2) {
                    let (x, y) = (find(&mut parent, pair[0].index()), find(&mut parent, pair[1].index()));
                    parent[x] = y;
                }
            }
            let mut ids: HashMap<usize, u32> = HashMap::new();
            let blocks: Vec<u32> = (0..n)
                .map(|w| {
                    let r = find(&mut parent, w);
                    let next = ids.len() as u32;
                    *ids.entry(r).or_insert(next)
                })
                .collect();
            indist.push(blocks);
        }
        Ok(Model {
            agents: self.agents.clone(),
            states: self.states.clone(),
            actions: self.actions.clone(),
            props: self.props.clone(),
            valuation: self.valuation.clone(),
            available,
            transitions: self.transitions.clone(),
            indist,
        })
    }

    /// Assembles and validates.
    pub fn build(&self) -> Result<Model, ModelError> {
        let m = self.build_unchecked()?;
        validate_model(&m).map_err(ModelError::Invalid)?;
        Ok(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_state(coherent: bool) -> ModelBuilder {
        let mut b = ModelBuilder::new();
        b.agent("a").unwrap();
        b.state("q").unwrap();
        b.state("r").unwrap();
        b.add_available("a", "q", "x").unwrap();
        b.add_available("a", "r", "x").unwrap();
        if !coherent {
            b.add_available("a", "r", "y").unwrap();
        }
        b.self_loop("q").unwrap();
        b.self_loop("r").unwrap();
        b.indist("a", &["q", "r"]).unwrap();
        b
    }

    #[test]
    fn coherent_model_validates() {
        assert!(two_state(true).build().is_ok());
    }

    #[test]
    fn incoherent_menus_are_reported() {
        let m = two_state(false).build_unchecked().unwrap();
        let v = m.validate();
        assert_eq!(v.len(), 1);
        assert!(v[0].to_string().starts_with("action-knowledge coherence"), "{}", v[0]);
    }

    #[test]
    fn singleton_product() {
        let m = two_state(true).build().unwrap();
        let q = m.state_id("q").unwrap();
        let d = m.joint_actions(q).unwrap();
        assert_eq!(d.len(), 1);
        assert_eq!(m.joint_action_text(&d[0]), "(x)");
        assert_eq!(m.successor(q, &d[0]).unwrap(), q);
    }

    #[test]
    fn out_of_range_state_is_an_error() {
        let m = two_state(true).build().unwrap();
        assert!(matches!(m.joint_actions(StateId(9)), Err(ModelError::StateOutOfRange(9))));
    }

    #[test]
    fn illegal_action_is_an_error() {
        let m = two_state(false).build_unchecked().unwrap();
        let q = m.state_id("q").unwrap();
        let y = m.action_id("y").unwrap();
        let err = m.successor(q, &JointAction::new([y])).unwrap_err();
        assert!(matches!(err, ModelError::IllegalAction { .. }));
    }

    #[test]
    fn missing_transition_breaks_totality() {
        let mut b = two_state(true);
        let q = b.state_id("q").unwrap();
        let x = b.action_id("x").unwrap();
        b.remove_transition(q, &JointAction::new([x]));
        let v = b.build_unchecked().unwrap().validate();
        assert_eq!(v, vec![Violation::NotTotal { state: "q".into(), action: "(x)".into() }]);
        assert_eq!(v[0].to_string(), "transition not total at (q, (x))");
    }

    #[test]
    fn partitions_merge_overlapping_groups() {
        let mut b = ModelBuilder::new();
        b.agent("a").unwrap();
        for s in ["s0", "s1", "s2", "s3"] {
            b.state(s).unwrap();
            b.add_available("a", s, "n").unwrap();
        }
        for s in ["s0", "s1", "s2", "s3"] {
            b.self_loop(s).unwrap();
        }
        b.indist("a", &["s0", "s2"]).unwrap();
        b.indist("a", &["s2", "s3"]).unwrap();
        let m = b.build().unwrap();
        let a = AgentId(0);
        assert_eq!(m.partition(a), vec![vec![StateId(0), StateId(2), StateId(3)], vec![StateId(1)]]);
        assert!(m.indistinguishable(a, StateId(0), StateId(3)));
    }

    #[test]
    fn coalition_mask_ops() {
        let g = Coalition::from_agents([AgentId(0), AgentId(2)]);
        assert_eq!(g.len(), 2);
        assert!(g.contains(AgentId(2)));
        assert_eq!(g.complement(3), Coalition::singleton(AgentId(1)));
        assert!(Coalition::singleton(AgentId(0)).is_subset(g));
        assert_eq!(g.agents().collect::<Vec<_>>(), vec![AgentId(0), AgentId(2)]);
    }
}

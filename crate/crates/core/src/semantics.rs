//! Bounded satisfaction by AND-OR search over the coalition knowledge tree.
//!
//! A formula is evaluated at a finite history (the current stage is its
//! last index) with a transition budget. `X` is exact and consumes one unit;
//! `G` and `U` explore stages `0..=budget`, evaluating stage `t` with the
//! remaining budget `budget - t`.
//!
//! Coalition operators are decided on `≈_G` classes: the verdict at `h` only
//! depends on the class of `h`. A search node is a class together with the
//! members whose obligation is still open (all of them for `X` and `G`;
//! for `U`, the ones that have not yet reached the target). The coalition
//! picks one joint action per node, which makes the resulting strategy
//! uniform by construction; the successors of a class under one choice split
//! into whole classes again, grouped by the `R_G` block of their last state.

use std::collections::{BTreeMap, HashMap};
use std::rc::Rc;

use serde::Serialize;
use smallvec::SmallVec;
use thiserror::Error;

use crate::formula::{Resolved, ResolvedFormula};
use crate::history::{equiv_class, History, HistoryError};
use crate::model::{ActionId, Coalition, JointAction, Model, PropId, StateId};
use crate::strategy::{Choice, StrategyProfile};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("insufficient budget: `X` needs at least one transition left (raise the horizon)")]
    InsufficientBudget,
    #[error("unsupported query: {0}")]
    Unsupported(String),
    #[error("strategy has no choice for the class of {0}")]
    IncompleteStrategy(String),
    #[error(transparent)]
    History(#[from] HistoryError),
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Stats {
    pub nodes_explored: u64,
    pub classes_built: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerdictReport {
    pub verdict: bool,
    pub horizon: u32,
    pub witness: Option<StrategyProfile>,
    /// Whether the verdict is unchanged at `horizon + 1`, when requested.
    pub horizon_stable: Option<bool>,
    pub stats: Stats,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct EvalOptions {
    pub horizon: u32,
    pub witness: bool,
    pub stable_check: bool,
}

impl EvalOptions {
    pub fn horizon(horizon: u32) -> Self {
        EvalOptions { horizon, ..Default::default() }
    }
}

type NodeId = u32;
type ClassId = u32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Node {
    Top,
    Bot,
    Prop(PropId),
    Not(NodeId),
    And(NodeId, NodeId),
    Next(Coalition, NodeId),
    Always(Coalition, NodeId),
    Until(Coalition, NodeId, NodeId),
}

struct ClassData {
    coalition: Coalition,
    members: Vec<History>,
}

#[derive(Clone, PartialEq, Eq, Hash)]
struct SearchKey {
    node: NodeId,
    class: ClassId,
    live: Vec<u32>,
    budget: u32,
}

enum Stage {
    Done(bool),
    Open(Vec<u32>),
}

/// Evaluation context for one model. Caches classes, hash-consed formula
/// nodes and search results across queries; not shared between threads.
pub struct Checker<'m> {
    model: &'m Model,
    moves: Vec<Vec<(JointAction, StateId)>>,
    nodes: Vec<Node>,
    node_ids: HashMap<Node, NodeId>,
    blocks: HashMap<Coalition, Rc<Vec<u32>>>,
    classes: Vec<Rc<ClassData>>,
    class_ids: HashMap<(Coalition, History), ClassId>,
    memo: HashMap<SearchKey, bool>,
    stats: Stats,
}

impl<'m> Checker<'m> {
    pub fn new(model: &'m Model) -> Self {
        let moves = model
            .states()
            .map(|w| {
                model
                    .joint_actions(w)
                    .unwrap_or_default()
                    .into_iter()
                    .filter_map(|a| model.successor(w, &a).ok().map(|v| (a, v)))
                    .collect()
            })
            .collect();
        Checker {
            model,
            moves,
            nodes: Vec::new(),
            node_ids: HashMap::new(),
            blocks: HashMap::new(),
            classes: Vec::new(),
            class_ids: HashMap::new(),
            memo: HashMap::new(),
            stats: Stats::default(),
        }
    }

    pub fn model(&self) -> &'m Model {
        self.model
    }

    pub fn stats(&self) -> Stats {
        self.stats
    }

    fn intern(&mut self, f: &Resolved) -> NodeId {
        let node = match f {
            Resolved::Top => Node::Top,
            Resolved::Bot => Node::Bot,
            Resolved::Prop(p) => Node::Prop(*p),
            Resolved::Not(a) => Node::Not(self.intern(a)),
            Resolved::And(a, b) => {
                let (a, b) = (self.intern(a), self.intern(b));
                Node::And(a, b)
            }
            Resolved::Next(g, a) => Node::Next(*g, self.intern(a)),
            Resolved::Always(g, a) => Node::Always(*g, self.intern(a)),
            Resolved::Until(g, a, b) => {
                let (a, b) = (self.intern(a), self.intern(b));
                Node::Until(*g, a, b)
            }
        };
        if let Some(&id) = self.node_ids.get(&node) {
            return id;
        }
        let id = self.nodes.len() as NodeId;
        self.nodes.push(node);
        self.node_ids.insert(node, id);
        id
    }

    fn blocks(&mut self, g: Coalition) -> Rc<Vec<u32>> {
        let m = self.model;
        self.blocks.entry(g).or_insert_with(|| Rc::new(m.coalition_blocks(g))).clone()
    }

    fn register(&mut self, g: Coalition, members: Vec<History>) -> ClassId {
        if let Some(&id) = self.class_ids.get(&(g, members[0].clone())) {
            return id;
        }
        let id = self.classes.len() as ClassId;
        for h in &members {
            self.class_ids.insert((g, h.clone()), id);
        }
        self.classes.push(Rc::new(ClassData { coalition: g, members }));
        self.stats.classes_built += 1;
        id
    }

    fn class_of(&mut self, h: &History, g: Coalition) -> ClassId {
        if let Some(&id) = self.class_ids.get(&(g, h.clone())) {
            return id;
        }
        let class = equiv_class(self.model, h, g);
        self.register(g, class.members)
    }

    /// The `≈_G` class of `h`, sorted.
    pub fn class_members(&mut self, h: &History, g: Coalition) -> Vec<History> {
        let id = self.class_of(h, g);
        self.classes[id as usize].members.clone()
    }

    /// Legal uniform coalition choices at a class, lexicographic with the
    /// lowest-numbered agent most significant.
    fn choices(&self, class: ClassId) -> Vec<Choice> {
        let data = &self.classes[class as usize];
        let w = data.members[0].last();
        let mut out: Vec<Choice> = vec![SmallVec::new()];
        for i in data.coalition.agents() {
            let menu = self.model.available(i, w);
            out = out
                .iter()
                .flat_map(|p| {
                    menu.iter().map(move |&a| {
                        let mut c = p.clone();
                        c.push(a);
                        c
                    })
                })
                .collect();
        }
        out
    }

    fn conforms(g: Coalition, action: &JointAction, choice: &[ActionId]) -> bool {
        g.agents().zip(choice).all(|(i, &a)| action.get(i) == a)
    }

    /// Successors of the class under `choice`, split into child classes;
    /// each child carries the indices of successors of `live` members.
    fn children(&mut self, class: ClassId, live: &[u32], choice: &[ActionId]) -> Vec<(ClassId, Vec<u32>)> {
        let data = self.classes[class as usize].clone();
        let g = data.coalition;
        let blocks = self.blocks(g);
        let mut is_live = vec![false; data.members.len()];
        for &k in live {
            is_live[k as usize] = true;
        }
        let mut groups: BTreeMap<u32, Vec<(History, bool)>> = BTreeMap::new();
        for (k, h) in data.members.iter().enumerate() {
            for (a, v) in &self.moves[h.last().index()] {
                if Self::conforms(g, a, choice) {
                    groups.entry(blocks[v.index()]).or_default().push((h.pushed(a.clone(), *v), is_live[k]));
                }
            }
        }
        groups
            .into_values()
            .map(|mut group| {
                group.sort_by(|x, y| x.0.cmp(&y.0));
                let live: Vec<u32> = group.iter().enumerate().filter(|(_, (_, l))| *l).map(|(k, _)| k as u32).collect();
                let id = self.register(g, group.into_iter().map(|(h, _)| h).collect());
                (id, live)
            })
            .collect()
    }

    fn holds_node(&mut self, h: &History, n: NodeId, budget: u32) -> Result<bool, EvalError> {
        match self.nodes[n as usize] {
            Node::Top => Ok(true),
            Node::Bot => Ok(false),
            Node::Prop(p) => Ok(self.model.holds(p, h.last())),
            Node::Not(a) => Ok(!self.holds_node(h, a, budget)?),
            Node::And(a, b) => Ok(self.holds_node(h, a, budget)? && self.holds_node(h, b, budget)?),
            Node::Next(g, _) | Node::Always(g, _) | Node::Until(g, _, _) => {
                if matches!(self.nodes[n as usize], Node::Next(..)) && budget == 0 {
                    return Err(EvalError::InsufficientBudget);
                }
                let class = self.class_of(h, g);
                let all = (0..self.classes[class as usize].members.len() as u32).collect();
                self.search(n, class, all, budget)
            }
        }
    }

    fn search(&mut self, n: NodeId, class: ClassId, live: Vec<u32>, budget: u32) -> Result<bool, EvalError> {
        let key = SearchKey { node: n, class, live, budget };
        if let Some(&v) = self.memo.get(&key) {
            return Ok(v);
        }
        self.stats.nodes_explored += 1;
        let v = match self.stage(n, class, &key.live, budget)? {
            Stage::Done(v) => v,
            Stage::Open(pending) => {
                let mut found = false;
                for choice in self.choices(class) {
                    if self.choice_works(n, class, &pending, &choice, budget)? {
                        found = true;
                        break;
                    }
                }
                found
            }
        };
        self.memo.insert(key, v);
        Ok(v)
    }

    /// Checks the current stage; returns the members still owing the goal.
    fn stage(&mut self, n: NodeId, class: ClassId, live: &[u32], budget: u32) -> Result<Stage, EvalError> {
        let data = self.classes[class as usize].clone();
        match self.nodes[n as usize] {
            Node::Next(..) => Ok(Stage::Open(live.to_vec())),
            Node::Always(_, phi) => {
                for &k in live {
                    if !self.holds_node(&data.members[k as usize], phi, budget)? {
                        return Ok(Stage::Done(false));
                    }
                }
                Ok(if budget == 0 { Stage::Done(true) } else { Stage::Open(live.to_vec()) })
            }
            Node::Until(_, phi, psi) => {
                let mut pending = Vec::new();
                for &k in live {
                    let h = &data.members[k as usize];
                    if self.holds_node(h, psi, budget)? {
                        continue;
                    }
                    if !self.holds_node(h, phi, budget)? {
                        return Ok(Stage::Done(false));
                    }
                    pending.push(k);
                }
                Ok(if pending.is_empty() {
                    Stage::Done(true)
                } else if budget == 0 {
                    Stage::Done(false)
                } else {
                    Stage::Open(pending)
                })
            }
            _ => unreachable!("search on a non-coalition node"),
        }
    }

    fn choice_works(
        &mut self,
        n: NodeId,
        class: ClassId,
        pending: &[u32],
        choice: &[ActionId],
        budget: u32,
    ) -> Result<bool, EvalError> {
        if let Node::Next(g, phi) = self.nodes[n as usize] {
            let data = self.classes[class as usize].clone();
            for &k in pending {
                let h = &data.members[k as usize];
                for idx in 0..self.moves[h.last().index()].len() {
                    let (a, v) = self.moves[h.last().index()][idx].clone();
                    if Self::conforms(g, &a, choice) && !self.holds_node(&h.pushed(a, v), phi, budget - 1)? {
                        return Ok(false);
                    }
                }
            }
            return Ok(true);
        }
        for (child, live) in self.children(class, pending, choice) {
            if live.is_empty() {
                continue;
            }
            if !self.search(n, child, live, budget - 1)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Reads back the lexicographically least winning strategy from the
    /// search results. Classes reached only by already-satisfied plays get
    /// the least legal choice so the profile covers the whole horizon.
    fn extract(
        &mut self,
        n: NodeId,
        class: ClassId,
        live: Vec<u32>,
        budget: u32,
        out: &mut BTreeMap<History, Choice>,
    ) -> Result<(), EvalError> {
        let pending = match self.stage(n, class, &live, budget)? {
            Stage::Done(_) => return self.fill_default(class, budget, out),
            Stage::Open(p) => p,
        };
        for choice in self.choices(class) {
            if !self.choice_works(n, class, &pending, &choice, budget)? {
                continue;
            }
            let rep = self.classes[class as usize].members[0].clone();
            out.insert(rep, choice.clone());
            if matches!(self.nodes[n as usize], Node::Next(..)) {
                return Ok(());
            }
            for (child, live) in self.children(class, &pending, &choice) {
                if live.is_empty() {
                    self.fill_default(child, budget - 1, out)?;
                } else {
                    self.extract(n, child, live, budget - 1, out)?;
                }
            }
            return Ok(());
        }
        unreachable!("extract called on a losing node")
    }

    fn fill_default(
        &mut self,
        class: ClassId,
        budget: u32,
        out: &mut BTreeMap<History, Choice>,
    ) -> Result<(), EvalError> {
        if budget == 0 {
            return Ok(());
        }
        let rep = self.classes[class as usize].members[0].clone();
        if out.contains_key(&rep) {
            return Ok(());
        }
        let choice = self.choices(class).swap_remove(0);
        out.insert(rep, choice.clone());
        for (child, _) in self.children(class, &[], &choice) {
            self.fill_default(child, budget - 1, out)?;
        }
        Ok(())
    }

    /// Bounded satisfaction of `f` at `h` with `budget` transitions left.
    pub fn holds(&mut self, h: &History, f: &Resolved, budget: u32) -> Result<bool, EvalError> {
        let n = self.intern(f);
        self.holds_node(h, n, budget)
    }

    /// Direct distributed-knowledge check: `f` holds at every history
    /// `≈_G`-equivalent to `h`.
    pub fn dist_knows(&mut self, h: &History, g: Coalition, f: &Resolved, budget: u32) -> Result<bool, EvalError> {
        for member in equiv_class(self.model, h, g).members {
            if !self.holds(&member, f, budget)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// A witness strategy for a coalition-operator formula, if it holds.
    pub fn synthesize(&mut self, h: &History, f: &Resolved, budget: u32) -> Result<Option<StrategyProfile>, EvalError> {
        let g = match f {
            Resolved::Next(g, _) | Resolved::Always(g, _) | Resolved::Until(g, _, _) => *g,
            _ => return Err(EvalError::Unsupported("strategy synthesis needs a coalition operator at the top".into())),
        };
        if !self.holds(h, f, budget)? {
            return Ok(None);
        }
        let n = self.intern(f);
        let class = self.class_of(h, g);
        let all = (0..self.classes[class as usize].members.len() as u32).collect();
        let mut choices = BTreeMap::new();
        self.extract(n, class, all, budget, &mut choices)?;
        Ok(Some(StrategyProfile::new(g, choices)))
    }

    pub fn eval(&mut self, h: &History, f: &ResolvedFormula, opts: EvalOptions) -> Result<VerdictReport, EvalError> {
        History::from_parts(self.model, h.states().to_vec(), h.actions().to_vec())?;
        let before = self.stats;
        let verdict = self.holds(h, &f.formula, opts.horizon)?;
        let witness = if opts.witness && verdict && is_coalition_op(&f.formula) {
            self.synthesize(h, &f.formula, opts.horizon)?
        } else {
            None
        };
        let horizon_stable =
            if opts.stable_check { Some(self.holds(h, &f.formula, opts.horizon + 1)? == verdict) } else { None };
        let stats = Stats {
            nodes_explored: self.stats.nodes_explored - before.nodes_explored,
            classes_built: self.stats.classes_built - before.classes_built,
        };
        Ok(VerdictReport { verdict, horizon: opts.horizon, witness, horizon_stable, stats })
    }
}

pub(crate) fn is_coalition_op(f: &Resolved) -> bool {
    matches!(f, Resolved::Next(..) | Resolved::Always(..) | Resolved::Until(..))
}

/// One-shot evaluation at `h` with horizon `horizon`.
pub fn eval(m: &Model, h: &History, f: &ResolvedFormula, horizon: u32) -> Result<VerdictReport, EvalError> {
    Checker::new(m).eval(h, f, EvalOptions::horizon(horizon))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{parse, resolve};
    use crate::history::{histories_up_to, parse_history};
    use crate::model::{AgentId, ModelBuilder};

    /// One agent who cannot tell q1 from q2 and must guess the exit.
    fn guess() -> Model {
        let mut b = ModelBuilder::new();
        for a in ["env", "me"] {
            b.agent(a).unwrap();
        }
        for s in ["q0", "q1", "q2", "good", "bad"] {
            b.state(s).unwrap();
        }
        b.add_available("env", "q0", "u").unwrap();
        b.add_available("env", "q0", "d").unwrap();
        for s in ["q1", "q2", "good", "bad"] {
            b.add_available("env", s, "n").unwrap();
        }
        for s in ["q0", "good", "bad"] {
            b.add_available("me", s, "n").unwrap();
        }
        for s in ["q1", "q2"] {
            b.add_available("me", s, "a").unwrap();
            b.add_available("me", s, "b").unwrap();
        }
        b.transition("q0", &["u", "n"], "q1").unwrap();
        b.transition("q0", &["d", "n"], "q2").unwrap();
        b.transition("q1", &["n", "a"], "good").unwrap();
        b.transition("q1", &["n", "b"], "bad").unwrap();
        b.transition("q2", &["n", "a"], "bad").unwrap();
        b.transition("q2", &["n", "b"], "good").unwrap();
        b.self_loop("good").unwrap();
        b.self_loop("bad").unwrap();
        b.label("win", "good").unwrap();
        b.indist("me", &["q1", "q2"]).unwrap();
        b.build().unwrap()
    }

    fn check(m: &Model, h: &str, f: &str, horizon: u32) -> Result<bool, EvalError> {
        let h = parse_history(m, h).unwrap();
        let f = resolve(&parse(f).unwrap(), m).unwrap();
        Checker::new(m).holds(&h, &f.formula, horizon)
    }

    #[test]
    fn uncertainty_blocks_single_agent() {
        let m = guess();
        assert!(!check(&m, "q0 -(u,n)-> q1", "<<me>> X win", 1).unwrap());
        assert!(check(&m, "q0 -(u,n)-> q1", "<<env,me>> X win", 1).unwrap());
        // at the root nobody knows which branch env will take, but me can
        // always reach some terminal state
        assert!(check(&m, "q0", "<<env,me>> F win", 2).unwrap());
        assert!(!check(&m, "q0", "<<me>> F win", 2).unwrap());
    }

    #[test]
    fn next_without_budget_is_an_error() {
        let m = guess();
        assert_eq!(check(&m, "q0", "<<me>> X win", 0), Err(EvalError::InsufficientBudget));
        // boxes and untils degrade to their stage-0 check
        assert!(!check(&m, "q0", "<<me>> G win", 0).unwrap());
        assert!(check(&m, "q0", "<<me>> win U ~win", 0).unwrap());
    }

    #[test]
    fn knowledge_matches_direct_class_check() {
        let m = guess();
        let mut c = Checker::new(&m);
        let k = resolve(&parse("K{me} ~win").unwrap(), &m).unwrap();
        let body = resolve(&parse("~win").unwrap(), &m).unwrap();
        for h in histories_up_to(&m, 2) {
            let g = Coalition::singleton(AgentId(1));
            assert_eq!(c.holds(&h, &k.formula, 1).unwrap(), c.dist_knows(&h, g, &body.formula, 1).unwrap());
        }
    }

    #[test]
    fn child_classes_match_synchronized_walk() {
        let m = guess();
        let mut c = Checker::new(&m);
        let g = Coalition::singleton(AgentId(1));
        let root = c.class_of(&parse_history(&m, "q0").unwrap(), g);
        for choice in c.choices(root) {
            for (child, _) in c.children(root, &[0], &choice) {
                let data = c.classes[child as usize].clone();
                assert_eq!(equiv_class(&m, &data.members[0], g).members, data.members);
            }
        }
    }
}

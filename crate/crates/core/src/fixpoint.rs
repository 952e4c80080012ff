//! A second evaluator built from one-step unfolding recurrences, used to
//! cross-check the strategy search.
//!
//! For a propositional target `φ` and remaining budget `r`:
//!
//! ```text
//! G^r φ      = D_G φ                          (r = 0)
//!            = D_G φ ∧ <<G>>X G^(r-1) φ       (r > 0)
//! ```
//!
//! Until cannot be unfolded with plain distributed knowledge: members of the
//! class that already satisfy the target drop out, while the others must
//! keep going, and both kinds can end up in the same class one step later.
//! The recurrence therefore runs on a class together with its pending
//! subset `S`:
//!
//! ```text
//! U^r(S) = true                                   if no s ∈ S lacks ψ
//!        = false                                  if some s ∈ S has neither φ nor ψ,
//!                                                 or r = 0 and some s lacks ψ
//!        = ∃c. ∀ child class C' of the successors of S∖ψ under c:
//!              U^(r-1)(successors ∩ C')
//! ```
//!
//! With `S` the whole class this is `D_G ψ ∨ (D_G φ ∧ <<G>>X U)` whenever the
//! class agrees on `ψ`; it generalizes that unfolding to mixed classes.

use std::collections::{BTreeMap, HashMap};
use std::rc::Rc;

use crate::formula::{Resolved, ResolvedFormula};
use crate::history::{equiv_class, History};
use crate::model::{ActionId, Coalition, Model};
use crate::semantics::{EvalError, Stats, VerdictReport};

pub struct FixpointEvaluator<'m> {
    model: &'m Model,
    classes: HashMap<(Coalition, History), Rc<Vec<History>>>,
    memo: HashMap<(Resolved, Vec<History>, u32), bool>,
    stats: Stats,
}

impl<'m> FixpointEvaluator<'m> {
    pub fn new(model: &'m Model) -> Self {
        FixpointEvaluator { model, classes: HashMap::new(), memo: HashMap::new(), stats: Stats::default() }
    }

    fn class(&mut self, h: &History, g: Coalition) -> Rc<Vec<History>> {
        if let Some(c) = self.classes.get(&(g, h.clone())) {
            return c.clone();
        }
        let members = Rc::new(equiv_class(self.model, h, g).members);
        self.stats.classes_built += 1;
        for x in members.iter() {
            self.classes.insert((g, x.clone()), members.clone());
        }
        members
    }

    fn propositional(&self, h: &History, f: &Resolved) -> bool {
        match f {
            Resolved::Top => true,
            Resolved::Bot => false,
            Resolved::Prop(p) => self.model.holds(*p, h.last()),
            Resolved::Not(a) => !self.propositional(h, a),
            Resolved::And(a, b) => self.propositional(h, a) && self.propositional(h, b),
            _ => unreachable!("checked by the caller"),
        }
    }

    fn choices(&self, g: Coalition, h: &History) -> Vec<Vec<ActionId>> {
        let mut out = vec![Vec::new()];
        for i in g.agents() {
            let menu = self.model.available(i, h.last());
            out = out
                .into_iter()
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

    fn step(&self, g: Coalition, h: &History, choice: &[ActionId]) -> Vec<History> {
        self.model
            .joint_actions(h.last())
            .unwrap_or_default()
            .into_iter()
            .filter(|a| g.agents().zip(choice).all(|(i, &c)| a.get(i) == c))
            .filter_map(|a| h.extend(self.model, &a).ok())
            .collect()
    }

    pub fn holds(&mut self, h: &History, f: &Resolved, budget: u32) -> Result<bool, EvalError> {
        match f {
            Resolved::Top | Resolved::Bot | Resolved::Prop(_) => Ok(self.propositional(h, f)),
            Resolved::Not(a) => Ok(!self.holds(h, a, budget)?),
            Resolved::And(a, b) => Ok(self.holds(h, a, budget)? && self.holds(h, b, budget)?),
            Resolved::Next(g, phi) => {
                if budget == 0 {
                    return Err(EvalError::InsufficientBudget);
                }
                let class = self.class(h, *g);
                for choice in self.choices(*g, h) {
                    let mut ok = true;
                    'all: for x in class.iter() {
                        for y in self.step(*g, x, &choice) {
                            if !self.holds(&y, phi, budget - 1)? {
                                ok = false;
                                break 'all;
                            }
                        }
                    }
                    if ok {
                        return Ok(true);
                    }
                }
                Ok(false)
            }
            Resolved::Always(g, phi) => {
                require_propositional(phi)?;
                Ok(self.always(h, *g, f, phi, budget))
            }
            Resolved::Until(g, phi, psi) => {
                require_propositional(phi)?;
                require_propositional(psi)?;
                let class = self.class(h, *g);
                Ok(self.until(*g, f, phi, psi, class.to_vec(), budget))
            }
        }
    }

    fn always(&mut self, h: &History, g: Coalition, goal: &Resolved, phi: &Resolved, budget: u32) -> bool {
        let class = self.class(h, g);
        let key = (goal.clone(), class.to_vec(), budget);
        if let Some(&v) = self.memo.get(&key) {
            return v;
        }
        self.stats.nodes_explored += 1;
        let knows = class.iter().all(|x| self.propositional(x, phi));
        let v = knows
            && (budget == 0
                || self.choices(g, h).into_iter().any(|choice| {
                    class
                        .iter()
                        .flat_map(|x| self.step(g, x, &choice))
                        .collect::<Vec<_>>()
                        .iter()
                        .all(|y| self.always(y, g, goal, phi, budget - 1))
                }));
        self.memo.insert(key, v);
        v
    }

    fn until(
        &mut self,
        g: Coalition,
        goal: &Resolved,
        phi: &Resolved,
        psi: &Resolved,
        pending: Vec<History>,
        budget: u32,
    ) -> bool {
        let key = (goal.clone(), pending, budget);
        if let Some(&v) = self.memo.get(&key) {
            return v;
        }
        self.stats.nodes_explored += 1;
        let open: Vec<History> = key.1.iter().filter(|x| !self.propositional(x, psi)).cloned().collect();
        let v = if open.is_empty() {
            true
        } else if budget == 0 || !open.iter().all(|x| self.propositional(x, phi)) {
            false
        } else {
            self.choices(g, &open[0]).into_iter().any(|choice| {
                let mut by_class: BTreeMap<History, Vec<History>> = BTreeMap::new();
                for x in &open {
                    for y in self.step(g, x, &choice) {
                        let rep = self.class(&y, g)[0].clone();
                        by_class.entry(rep).or_default().push(y);
                    }
                }
                by_class.into_values().all(|mut next| {
                    next.sort();
                    self.until(g, goal, phi, psi, next, budget - 1)
                })
            })
        };
        self.memo.insert(key, v);
        v
    }

    pub fn eval(&mut self, h: &History, f: &ResolvedFormula, horizon: u32) -> Result<VerdictReport, EvalError> {
        let before = self.stats;
        let verdict = self.holds(h, &f.formula, horizon)?;
        Ok(VerdictReport {
            verdict,
            horizon,
            witness: None,
            horizon_stable: None,
            stats: Stats {
                nodes_explored: self.stats.nodes_explored - before.nodes_explored,
                classes_built: self.stats.classes_built - before.classes_built,
            },
        })
    }
}

fn require_propositional(f: &Resolved) -> Result<(), EvalError> {
    if f.is_propositional() {
        Ok(())
    } else {
        Err(EvalError::Unsupported("the fixed-point evaluator needs propositional targets under G and U".into()))
    }
}

/// One-shot fixed-point evaluation.
pub fn eval_fixedpoint(m: &Model, h: &History, f: &ResolvedFormula, horizon: u32) -> Result<VerdictReport, EvalError> {
    FixpointEvaluator::new(m).eval(h, f, horizon)
}

//! Uniform perfect-recall joint strategies and their outcomes.

use std::collections::BTreeMap;

use serde::Serialize;
use smallvec::SmallVec;

use crate::formula::Resolved;
use crate::history::{equiv_class, History};
use crate::model::{ActionId, Coalition, Model};
use crate::semantics::{Checker, EvalError};

/// One action per coalition member, in agent order.
pub type Choice = SmallVec<[ActionId; 4]>;

/// A joint strategy for a coalition, given as one choice per `≈_G` class;
/// classes are keyed by their least member.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrategyProfile {
    coalition: Coalition,
    choices: BTreeMap<History, Choice>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProfileEntry {
    pub class: String,
    pub actions: BTreeMap<String, String>,
}

impl StrategyProfile {
    pub fn new(coalition: Coalition, choices: BTreeMap<History, Choice>) -> Self {
        StrategyProfile { coalition, choices }
    }

    pub fn coalition(&self) -> Coalition {
        self.coalition
    }

    pub fn entries(&self) -> impl Iterator<Item = (&History, &Choice)> {
        self.choices.iter()
    }

    pub fn len(&self) -> usize {
        self.choices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.choices.is_empty()
    }

    /// `F_G(h)`: the choice for the class of `h`.
    pub fn choice_for(&self, m: &Model, h: &History) -> Option<&Choice> {
        let class = equiv_class(m, h, self.coalition);
        self.choices.get(class.representative())
    }

    pub fn describe(&self, m: &Model) -> Vec<ProfileEntry> {
        self.choices
            .iter()
            .map(|(h, c)| ProfileEntry {
                class: h.display(m).to_string(),
                actions: self
                    .coalition
                    .agents()
                    .zip(c)
                    .map(|(i, a)| (m.agent_name(i).to_string(), m.action_name(*a).to_string()))
                    .collect(),
            })
            .collect()
    }
}

/// `P(h, F_G)` cut to `steps` further transitions: coalition members follow
/// the profile, everyone else plays anything legal.
pub fn outcomes(m: &Model, h: &History, f: &StrategyProfile, steps: u32) -> Result<Vec<History>, EvalError> {
    let mut frontier = vec![h.clone()];
    for _ in 0..steps {
        let mut next = Vec::new();
        for x in &frontier {
            let choice = f.choice_for(m, x).ok_or_else(|| EvalError::IncompleteStrategy(x.display(m).to_string()))?;
            for a in m.joint_actions(x.last()).map_err(|e| EvalError::History(e.into()))? {
                if f.coalition.agents().zip(choice).all(|(i, &c)| a.get(i) == c) {
                    next.push(x.extend(m, &a)?);
                }
            }
        }
        frontier = next;
    }
    Ok(frontier)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct WitnessCheck {
    /// Every choice is available at the last state of every class member.
    pub legal: bool,
    /// No two entries belong to the same class.
    pub uniform: bool,
    /// Replaying the profile re-derives the goal on every outcome.
    pub replays: bool,
}

impl WitnessCheck {
    pub fn ok(&self) -> bool {
        self.legal && self.uniform && self.replays
    }
}

/// Structural checks plus replay of a witness for the coalition formula `goal`
/// at `h` with the given budget.
pub fn validate_witness(
    m: &Model,
    h: &History,
    goal: &Resolved,
    budget: u32,
    profile: &StrategyProfile,
) -> Result<WitnessCheck, EvalError> {
    let g = profile.coalition;
    let mut legal = true;
    let mut uniform = true;
    for (rep, choice) in &profile.choices {
        let class = equiv_class(m, rep, g);
        uniform &= class.representative() == rep;
        legal &= choice.len() == g.len()
            && class.members.iter().all(|x| g.agents().zip(choice).all(|(i, a)| m.available(i, x.last()).contains(a)));
    }
    let mut checker = Checker::new(m);
    let j = h.len();
    let mut replays = true;
    'members: for start in equiv_class(m, h, g).members {
        match goal {
            Resolved::Next(gg, phi) if *gg == g => {
                for y in outcomes(m, &start, profile, 1)? {
                    if !checker.holds(&y, phi, budget - 1)? {
                        replays = false;
                        break 'members;
                    }
                }
            }
            Resolved::Always(gg, phi) if *gg == g => {
                for y in outcomes(m, &start, profile, budget)? {
                    for t in 0..=budget {
                        if !checker.holds(&y.prefix(j + t as usize), phi, budget - t)? {
                            replays = false;
                            break 'members;
                        }
                    }
                }
            }
            Resolved::Until(gg, phi, psi) if *gg == g => {
                for y in outcomes(m, &start, profile, budget)? {
                    let mut reached = false;
                    for t in 0..=budget {
                        let x = y.prefix(j + t as usize);
                        if checker.holds(&x, psi, budget - t)? {
                            reached = true;
                            break;
                        }
                        if !checker.holds(&x, phi, budget - t)? {
                            break;
                        }
                    }
                    if !reached {
                        replays = false;
                        break 'members;
                    }
                }
            }
            _ => {
                return Err(EvalError::Unsupported(
                    "witness goal must be a coalition operator of the profile's coalition".into(),
                ))
            }
        }
    }
    Ok(WitnessCheck { legal, uniform, replays })
}

//! Random models, validity schemata and the campaigns that check them.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::fixpoint::FixpointEvaluator;
use crate::format::{builtin, BUILTINS};
use crate::formula::{parse, resolve, Formula, Resolved};
use crate::history::{histories_up_to, parse_history, History};
use crate::model::{ActionId, AgentId, Coalition, Model, ModelBuilder, StateId};
use crate::semantics::{Checker, EvalError};
use crate::strategy::validate_witness;

pub const FORMAT_TAG: &str = "dkatl-suite/1";

/// Shape of a random model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GenParams {
    pub agents: usize,
    pub states: usize,
    /// Upper bound on the menu size of each agent.
    pub actions: usize,
    pub props: usize,
    /// Probability that a state joins an earlier state's block, per agent.
    pub density: f64,
    pub seed: u64,
}

impl GenParams {
    /// Random shape within the desk-scale bounds (at most 3 agents, 6 states,
    /// 3 actions, 3 propositions).
    pub fn sample(seed: u64, min_agents: usize) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let agents = rng.gen_range(min_agents.max(1)..=3);
        let states = rng.gen_range(2..=6);
        let actions = if agents == 3 { rng.gen_range(1..=2) } else { rng.gen_range(1..=3) };
        GenParams {
            agents,
            states,
            actions,
            props: rng.gen_range(1..=3),
            density: [0.0, 0.3, 0.5, 0.8][rng.gen_range(0..4)],
            seed: rng.gen(),
        }
    }
}

/// A valid model drawn from `p`, determined by `p.seed`.
pub fn random_model(p: &GenParams) -> Model {
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let mut b = ModelBuilder::new();
    for i in 0..p.agents {
        b.agent(&format!("a{i}")).expect("distinct names");
    }
    for w in 0..p.states {
        b.state(&format!("s{w}")).expect("distinct names");
    }
    let alphabet: Vec<ActionId> = (0..p.actions.max(1)).map(|k| b.action(&format!("c{k}"))).collect();
    for k in 0..p.props {
        let name = format!("p{k}");
        b.prop(&name);
        for w in 0..p.states {
            if rng.gen_bool(0.5) {
                b.label(&name, &format!("s{w}")).expect("declared");
            }
        }
    }
    for i in 0..p.agents {
        let agent = AgentId(i as u16);
        let mut block: Vec<usize> = Vec::with_capacity(p.states);
        for w in 0..p.states {
            let joined = w > 0 && rng.gen_bool(p.density);
            block.push(if joined { block[rng.gen_range(0..w)] } else { w });
        }
        let mut menus: BTreeMap<usize, Vec<ActionId>> = BTreeMap::new();
        for (w, &r) in block.iter().enumerate() {
            let menu = menus.entry(r).or_insert_with(|| {
                let k = rng.gen_range(1..=alphabet.len());
                let mut m: Vec<ActionId> = alphabet.choose_multiple(&mut rng, k).copied().collect();
                m.sort();
                m
            });
            b.set_available_ids(agent, StateId(w as u32), menu);
        }
        for r in 0..p.states {
            let members: Vec<StateId> = (0..p.states).filter(|&w| block[w] == r).map(|w| StateId(w as u32)).collect();
            if members.len() > 1 {
                b.indist_ids(agent, members);
            }
        }
    }
    for w in 0..p.states {
        let from = StateId(w as u32);
        for ja in b.joint_actions(from) {
            let to = StateId(rng.gen_range(0..p.states) as u32);
            b.transition_ids(from, ja, to);
        }
    }
    b.build().expect("generated models satisfy every invariant")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Polarity {
    Valid,
    Falsifiable,
}

/// How the coalition placeholders of a schema are filled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Shape {
    /// `{G}`: any nonempty coalition.
    One,
    /// `{G1} ⊆ {G2}`.
    Subset,
    /// `{G1}`, `{G2}` nonempty and disjoint; `{G12}` is their union.
    Disjoint,
    /// `{G}` a proper subset of the agents; `{NG}` its complement.
    Proper,
    /// `{i}`: a single agent.
    Agent,
}

impl Shape {
    fn min_agents(self) -> usize {
        match self {
            Shape::Disjoint | Shape::Proper => 2,
            _ => 1,
        }
    }
}

/// A formula template checked as `lhs → rhs` (or `lhs ↔ rhs`).
///
/// Placeholders: `{phi}`, `{psi}` and the coalition placeholders of
/// [`Shape`]. Templates are formula text, so `D{{G}}` reads as `D{…}`
/// around the coalition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Schema {
    pub name: &'static str,
    pub lhs: &'static str,
    pub rhs: &'static str,
    pub iff: bool,
    pub shape: Shape,
    pub polarity: Polarity,
    /// Largest horizon; random trials cycle through `1..=horizon`.
    pub horizon: u32,
}

impl Schema {
    pub fn text(&self) -> String {
        format!("{} {} {}", self.lhs, if self.iff { "<->" } else { "->" }, self.rhs)
    }

    fn uses_psi(&self) -> bool {
        self.lhs.contains("{psi}") || self.rhs.contains("{psi}")
    }
}

const fn valid(
    name: &'static str,
    lhs: &'static str,
    rhs: &'static str,
    iff: bool,
    shape: Shape,
    horizon: u32,
) -> Schema {
    Schema { name, lhs, rhs, iff, shape, polarity: Polarity::Valid, horizon }
}

const fn falsifiable(name: &'static str, lhs: &'static str, rhs: &'static str) -> Schema {
    Schema { name, lhs, rhs, iff: false, shape: Shape::One, polarity: Polarity::Falsifiable, horizon: 3 }
}

use Shape::*;

pub const SCHEMAS: &[Schema] = &[
    // coalition-logic laws, one-step form plus bounded always/until forms
    valid("next-no-falsum", "true", "~<<{G}>> X false", false, One, 1),
    valid("always-no-falsum", "true", "~<<{G}>> G false", false, One, 3),
    valid("until-no-falsum", "true", "~<<{G}>> {phi} U false", false, One, 3),
    valid("next-verum", "true", "<<{G}>> X true", false, One, 1),
    valid("always-verum", "true", "<<{G}>> G true", false, One, 3),
    valid("until-verum", "true", "<<{G}>> {phi} U true", false, One, 3),
    valid("next-target-monotone", "<<{G}>> X ({phi} & {psi})", "<<{G}>> X {phi}", false, One, 1),
    valid("always-target-monotone", "<<{G}>> G ({phi} & {psi})", "<<{G}>> G {phi}", false, One, 3),
    valid("until-target-monotone", "<<{G}>> {phi} U ({phi} & {psi})", "<<{G}>> {phi} U {psi}", false, One, 3),
    valid("next-coalition-monotone", "<<{G1}>> X {phi}", "<<{G2}>> X {phi}", false, Subset, 1),
    valid("always-coalition-monotone", "<<{G1}>> G {phi}", "<<{G2}>> G {phi}", false, Subset, 3),
    valid("until-coalition-monotone", "<<{G1}>> {phi} U {psi}", "<<{G2}>> {phi} U {psi}", false, Subset, 3),
    valid(
        "next-superadditive",
        "<<{G1}>> X {phi} & <<{G2}>> X {psi}",
        "<<{G12}>> X ({phi} & {psi})",
        false,
        Disjoint,
        1,
    ),
    valid(
        "always-superadditive",
        "<<{G1}>> G {phi} & <<{G2}>> G {psi}",
        "<<{G12}>> G ({phi} & {psi})",
        false,
        Disjoint,
        3,
    ),
    valid(
        "until-superadditive",
        "<<{G1}>> F {psi} & <<{G2}>> G {phi}",
        "<<{G12}>> {phi} U ({phi} & {psi})",
        false,
        Disjoint,
        3,
    ),
    valid("next-regular", "<<{G}>> X {phi}", "~<<{NG}>> X ~{phi}", false, Proper, 1),
    valid("always-regular", "<<{G}>> G {phi}", "~<<{NG}>> F ~{phi}", false, Proper, 3),
    valid("until-regular", "<<{G}>> {phi} U {psi}", "~<<{NG}>> G ~{psi}", false, Proper, 3),
    // knowledge and ability
    valid("next-knows-target", "<<{G}>> X {phi}", "<<{G}>> X D{{G}} {phi}", true, One, 1),
    valid("next-knows-ability", "<<{G}>> X {phi}", "D{{G}} <<{G}>> X {phi}", true, One, 1),
    valid("always-knows-target", "<<{G}>> G {phi}", "<<{G}>> G D{{G}} {phi}", true, One, 3),
    valid("always-knows-ability", "<<{G}>> G {phi}", "D{{G}} <<{G}>> G {phi}", true, One, 3),
    valid("until-known-operands", "<<{G}>> (D{{G}} {phi}) U (D{{G}} {psi})", "<<{G}>> {phi} U {psi}", false, One, 3),
    valid("until-knows-ability", "<<{G}>> {phi} U {psi}", "D{{G}} (<<{G}>> {phi} U {psi})", true, One, 3),
    valid("next-knowledge-interchange", "<<{G}>> X D{{G}} {phi}", "D{{G}} <<{G}>> X {phi}", true, One, 1),
    valid("always-knowledge-interchange", "<<{G}>> G D{{G}} {phi}", "D{{G}} <<{G}>> G {phi}", true, One, 3),
    // unfolding laws
    valid("always-unfold", "<<{G}>> G {phi}", "{phi} & <<{G}>> X <<{G}>> G {phi}", false, One, 3),
    valid("always-fixpoint", "<<{G}>> G {phi}", "D{{G}} {phi} & <<{G}>> X <<{G}>> G {phi}", true, One, 3),
    valid("eventually-necessary", "<<{G}>> F {phi}", "Dh{{G}} {phi} | <<{G}>> X <<{G}>> F {phi}", false, One, 3),
    valid("eventually-sufficient", "D{{G}} {phi} | <<{G}>> X <<{G}>> F {phi}", "<<{G}>> F {phi}", false, One, 3),
    valid(
        "until-necessary",
        "<<{G}>> {phi} U {psi}",
        "Dh{{G}} {psi} | (D{{G}} {phi} & <<{G}>> X <<{G}>> {phi} U {psi})",
        false,
        One,
        3,
    ),
    valid(
        "until-sufficient",
        "D{{G}} {psi} | (D{{G}} {phi} & <<{G}>> X <<{G}>> {phi} U {psi})",
        "<<{G}>> {phi} U {psi}",
        false,
        One,
        3,
    ),
    valid("agent-always-fixpoint", "<<{i}>> G {phi}", "K{{i}} {phi} & <<{i}>> X <<{i}>> G {phi}", true, Agent, 3),
    valid(
        "agent-eventually-necessary",
        "<<{i}>> F {phi}",
        "Kh{{i}} {phi} | <<{i}>> X <<{i}>> F {phi}",
        false,
        Agent,
        3,
    ),
    valid(
        "agent-eventually-sufficient",
        "K{{i}} {phi} | <<{i}>> X <<{i}>> F {phi}",
        "<<{i}>> F {phi}",
        false,
        Agent,
        3,
    ),
    valid(
        "agent-until-necessary",
        "<<{i}>> {phi} U {psi}",
        "Kh{{i}} {psi} | (K{{i}} {phi} & <<{i}>> X <<{i}>> {phi} U {psi})",
        false,
        Agent,
        3,
    ),
    valid(
        "agent-until-sufficient",
        "K{{i}} {psi} | (K{{i}} {phi} & <<{i}>> X <<{i}>> {phi} U {psi})",
        "<<{i}>> {phi} U {psi}",
        false,
        Agent,
        3,
    ),
    // classical unfoldings that fail once coalitions pool knowledge
    falsifiable("box-fixpoint-lhs", "{phi} & <<{G}>> X <<{G}>> G {phi}", "<<{G}>> G {phi}"),
    falsifiable("eventually-fixpoint-lhs", "{phi} | <<{G}>> X <<{G}>> F {phi}", "<<{G}>> F {phi}"),
    falsifiable("eventually-fixpoint-rhs", "<<{G}>> F {phi}", "{phi} | <<{G}>> X <<{G}>> F {phi}"),
    falsifiable("until-fixpoint-lhs", "{psi} | ({phi} & <<{G}>> X <<{G}>> {phi} U {psi})", "<<{G}>> {phi} U {psi}"),
    falsifiable("until-fixpoint-rhs", "<<{G}>> {phi} U {psi}", "{psi} | ({phi} & <<{G}>> X <<{G}>> {phi} U {psi})"),
    falsifiable("until-knowledge-converse", "<<{G}>> {phi} U {psi}", "<<{G}>> (D{{G}} {phi}) U (D{{G}} {psi})"),
];

pub fn schema(name: &str) -> Option<&'static Schema> {
    SCHEMAS.iter().find(|s| s.name == name)
}

/// Values for the placeholders of a schema.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Instantiation {
    pub phi: String,
    pub psi: String,
    /// `{G}`, `{G1}` or `{i}`.
    pub first: Vec<String>,
    /// `{G2}`; empty for shapes with one coalition.
    pub second: Vec<String>,
}

impl Instantiation {
    /// The schema as a formula text against `m`.
    pub fn apply(&self, s: &Schema, m: &Model) -> (String, String) {
        let g1 = self.first.join(",");
        let g2 = self.second.join(",");
        let union: Vec<&str> = m
            .agent_names()
            .iter()
            .filter(|a| self.first.contains(a) || self.second.contains(a))
            .map(String::as_str)
            .collect();
        let complement: Vec<&str> =
            m.agent_names().iter().filter(|a| !self.first.contains(a)).map(String::as_str).collect();
        let fill = |t: &str| {
            t.replace("{phi}", &format!("({})", self.phi))
                .replace("{psi}", &format!("({})", self.psi))
                .replace("{G12}", &union.join(","))
                .replace("{NG}", &complement.join(","))
                .replace("{G1}", &g1)
                .replace("{G2}", &g2)
                .replace("{G}", &g1)
                .replace("{i}", &g1)
        };
        (fill(s.lhs), fill(s.rhs))
    }
}

fn names(m: &Model, g: Coalition) -> Vec<String> {
    g.agents().map(|i| m.agent_name(i).to_string()).collect()
}

fn coalition_pairs(m: &Model, shape: Shape) -> Vec<(Coalition, Coalition)> {
    let n = m.agent_count();
    let full = m.full_coalition();
    let all: Vec<Coalition> = (1..(1u64 << n)).map(Coalition).collect();
    match shape {
        Shape::One => all.iter().map(|&g| (g, Coalition::empty())).collect(),
        Shape::Subset => {
            all.iter().flat_map(|&a| all.iter().filter(move |b| a.is_subset(**b)).map(move |&b| (a, b))).collect()
        }
        Shape::Disjoint => all
            .iter()
            .flat_map(|&a| all.iter().filter(move |b| a.intersection(**b).is_empty()).map(move |&b| (a, b)))
            .collect(),
        Shape::Proper => all.iter().filter(|&&g| g != full).map(|&g| (g, Coalition::empty())).collect(),
        Shape::Agent => m.agents().map(|i| (Coalition::singleton(i), Coalition::empty())).collect(),
    }
}

fn random_coalitions(m: &Model, shape: Shape, rng: &mut ChaCha8Rng) -> (Coalition, Coalition) {
    let pairs = coalition_pairs(m, shape);
    pairs[rng.gen_range(0..pairs.len())]
}

/// Random propositional formula of depth at most `depth` over the model's
/// propositions.
pub fn random_propositional(m: &Model, depth: u32, rng: &mut ChaCha8Rng) -> Formula {
    if depth == 0 || rng.gen_bool(0.4) {
        let props = m.prop_names();
        return match rng.gen_range(0..10) {
            0 => Formula::Top,
            1 => Formula::Bot,
            _ if props.is_empty() => Formula::Top,
            _ => Formula::prop(&props[rng.gen_range(0..props.len())]),
        };
    }
    let a = random_propositional(m, depth - 1, rng);
    match rng.gen_range(0..3) {
        0 => Formula::not(a),
        1 => Formula::and(a, random_propositional(m, depth - 1, rng)),
        _ => Formula::or(a, random_propositional(m, depth - 1, rng)),
    }
}

fn literals(m: &Model) -> Vec<String> {
    let mut out = vec!["true".to_string()];
    for p in m.prop_names() {
        out.push(p.clone());
        out.push(format!("~{p}"));
    }
    out
}

/// Every instantiation over literals, `true` and all coalition choices.
fn exhaustive(m: &Model, s: &Schema) -> Vec<Instantiation> {
    let lits = literals(m);
    let psis = if s.uses_psi() { lits.clone() } else { vec!["true".to_string()] };
    let mut out = Vec::new();
    for (g1, g2) in coalition_pairs(m, s.shape) {
        for phi in &lits {
            for psi in &psis {
                out.push(Instantiation {
                    phi: phi.clone(),
                    psi: psi.clone(),
                    first: names(m, g1),
                    second: names(m, g2),
                });
            }
        }
    }
    out
}

fn sampled(m: &Model, s: &Schema, count: usize, rng: &mut ChaCha8Rng) -> Vec<Instantiation> {
    (0..count)
        .map(|_| {
            let (g1, g2) = random_coalitions(m, s.shape, rng);
            Instantiation {
                phi: random_propositional(m, 2, rng).to_string(),
                psi: random_propositional(m, 2, rng).to_string(),
                first: names(m, g1),
                second: names(m, g2),
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum ModelSource {
    Builtin(String),
    Random(GenParams),
}

impl ModelSource {
    pub fn model(&self) -> Model {
        match self {
            ModelSource::Builtin(name) => builtin(name).expect("recorded names are built-ins").model,
            ModelSource::Random(p) => random_model(p),
        }
    }
}

/// A point where `lhs → rhs` (or `lhs ↔ rhs`) fails.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Counterexample {
    pub schema: String,
    pub source: ModelSource,
    pub history: String,
    pub instantiation: Instantiation,
    pub horizon: u32,
    pub lhs: bool,
    pub rhs: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct CampaignReport {
    pub schema: String,
    pub polarity: Polarity,
    pub trials: usize,
    pub points: u64,
    pub counterexamples_found: u64,
    /// Every counterexample on a built-in model, then the first few random ones.
    pub counterexamples: Vec<Counterexample>,
    pub errors: Vec<String>,
    #[serde(skip)]
    pub wall_time: Duration,
}

impl CampaignReport {
    pub fn passed(&self) -> bool {
        self.errors.is_empty()
            && match self.polarity {
                Polarity::Valid => self.counterexamples_found == 0,
                Polarity::Falsifiable => self.counterexamples_found > 0,
            }
    }
}

const RANDOM_RECORD_CAP: usize = 20;
const INSTANTIATIONS_PER_TRIAL: usize = 2;

#[derive(Default)]
struct Tally {
    points: u64,
    found: u64,
    records: Vec<Counterexample>,
    errors: Vec<String>,
}

impl Tally {
    fn merge(&mut self, other: Tally, cap: Option<usize>) {
        self.points += other.points;
        self.found += other.found;
        for r in other.records {
            if cap.is_none_or(|c| self.records.len() < c) {
                self.records.push(r);
            }
        }
        self.errors.extend(other.errors);
    }
}

fn resolve_text(text: &str, m: &Model) -> Result<Resolved, String> {
    let f = parse(text).map_err(|e| format!("{text}: {e}"))?;
    Ok(resolve(&f, m).map_err(|e| format!("{text}: {e}"))?.formula)
}

fn run_on_model(
    s: &Schema,
    m: &Model,
    source: &ModelSource,
    insts: &[Instantiation],
    horizon: u32,
    points: &[History],
) -> Tally {
    let mut t = Tally::default();
    let mut checker = Checker::new(m);
    for inst in insts {
        let (lt, rt) = inst.apply(s, m);
        let (lhs, rhs) = match (resolve_text(&lt, m), resolve_text(&rt, m)) {
            (Ok(l), Ok(r)) => (l, r),
            (Err(e), _) | (_, Err(e)) => {
                t.errors.push(e);
                continue;
            }
        };
        for h in points {
            t.points += 1;
            let verdicts = checker.holds(h, &lhs, horizon).and_then(|a| Ok((a, checker.holds(h, &rhs, horizon)?)));
            match verdicts {
                Ok((a, b)) => {
                    if (a && !b) || (s.iff && b && !a) {
                        t.found += 1;
                        t.records.push(Counterexample {
                            schema: s.name.to_string(),
                            source: source.clone(),
                            history: h.display(m).to_string(),
                            instantiation: inst.clone(),
                            horizon,
                            lhs: a,
                            rhs: b,
                        });
                    }
                }
                Err(e) => t.errors.push(format!("{} at {}: {e}", s.text(), h.display(m))),
            }
        }
    }
    t
}

fn mix(seed: u64, salt: &str, k: u64) -> u64 {
    // FNV-1a over the salt, folded with seed and index through splitmix64
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in salt.bytes() {
        h = (h ^ b as u64).wrapping_mul(0x0100_0000_01b3);
    }
    let mut z = seed ^ h ^ k.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn builtin_corpus(s: &Schema) -> &'static [&'static str] {
    match s.polarity {
        Polarity::Valid => &BUILTINS,
        Polarity::Falsifiable => &["M3", "M4"],
    }
}

/// Evaluation points: every history of length at most 2.
pub fn evaluation_points(m: &Model) -> Vec<History> {
    histories_up_to(m, 2)
}

/// Checks `s` on the built-in corpus (exhaustively instantiated) and on
/// `trials` random models.
pub fn check_schema(s: &Schema, seed: u64, trials: usize) -> CampaignReport {
    let start = Instant::now();
    let mut tally = Tally::default();
    for name in builtin_corpus(s) {
        let m = builtin(name).expect("known built-in").model;
        if m.agent_count() < s.shape.min_agents() {
            continue;
        }
        let insts = exhaustive(&m, s);
        let part =
            run_on_model(s, &m, &ModelSource::Builtin(name.to_string()), &insts, s.horizon, &evaluation_points(&m));
        tally.merge(part, None);
    }
    let builtin_records = tally.records.len();
    let parts: Vec<Tally> = (0..trials as u64)
        .into_par_iter()
        .map(|k| {
            let trial_seed = mix(seed, s.name, k);
            let params = GenParams::sample(trial_seed, s.shape.min_agents());
            let m = random_model(&params);
            let mut rng = ChaCha8Rng::seed_from_u64(trial_seed ^ 0x5eed);
            let insts = sampled(&m, s, INSTANTIATIONS_PER_TRIAL, &mut rng);
            let horizon = 1 + (k as u32 % s.horizon);
            run_on_model(s, &m, &ModelSource::Random(params), &insts, horizon, &evaluation_points(&m))
        })
        .collect();
    for part in parts {
        tally.merge(part, Some(builtin_records + RANDOM_RECORD_CAP));
    }
    CampaignReport {
        schema: s.name.to_string(),
        polarity: s.polarity,
        trials,
        points: tally.points,
        counterexamples_found: tally.found,
        counterexamples: tally.records,
        errors: tally.errors,
        wall_time: start.elapsed(),
    }
}

/// Re-evaluates a recorded counterexample; true when it still fails the
/// same way.
pub fn replay(cx: &Counterexample) -> Result<bool, String> {
    let s = schema(&cx.schema).ok_or_else(|| format!("unknown schema `{}`", cx.schema))?;
    let m = cx.source.model();
    let h = parse_history(&m, &cx.history).map_err(|e| e.to_string())?;
    let (lt, rt) = cx.instantiation.apply(s, &m);
    let mut checker = Checker::new(&m);
    let a = checker.holds(&h, &resolve_text(&lt, &m)?, cx.horizon).map_err(|e| e.to_string())?;
    let b = checker.holds(&h, &resolve_text(&rt, &m)?, cx.horizon).map_err(|e| e.to_string())?;
    Ok(a == cx.lhs && b == cx.rhs && ((a && !b) || (s.iff && b && !a)))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Disagreement {
    pub source: ModelSource,
    pub history: String,
    pub formula: String,
    pub horizon: u32,
    pub search: Result<bool, String>,
    pub fixpoint: Result<bool, String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CrossCheckReport {
    pub models: usize,
    pub queries: u64,
    pub disagreements: u64,
    pub examples: Vec<Disagreement>,
    #[serde(skip)]
    pub wall_time: Duration,
}

impl CrossCheckReport {
    pub fn passed(&self) -> bool {
        self.disagreements == 0 && self.queries > 0
    }
}

fn temporal_queries(m: &Model, rng: &mut ChaCha8Rng, count: usize) -> Vec<Formula> {
    let all: Vec<Coalition> = (1..(1u64 << m.agent_count())).map(Coalition).collect();
    let mut out = Vec::new();
    for k in 0..count {
        let g = names(m, all[rng.gen_range(0..all.len())]);
        let g: crate::formula::AgentSet = g.into_iter().collect();
        let phi = random_propositional(m, 2, rng);
        let psi = random_propositional(m, 2, rng);
        out.push(match k % 3 {
            0 => Formula::always(g, phi),
            1 => Formula::eventually(g, phi),
            _ => Formula::until(g, phi, psi),
        });
    }
    out
}

fn crosscheck_model(
    m: &Model,
    source: &ModelSource,
    queries: &[Formula],
    points: &[History],
) -> (u64, Vec<Disagreement>) {
    let mut checker = Checker::new(m);
    let mut fix = FixpointEvaluator::new(m);
    let mut n = 0;
    let mut bad = Vec::new();
    for f in queries {
        let r = resolve(f, m).expect("queries use model names").formula;
        for h in points {
            for horizon in 0..=3 {
                n += 1;
                let a = checker.holds(h, &r, horizon).map_err(|e| e.to_string());
                let b = fix.holds(h, &r, horizon).map_err(|e| e.to_string());
                if a != b {
                    bad.push(Disagreement {
                        source: source.clone(),
                        history: h.display(m).to_string(),
                        formula: f.to_string(),
                        horizon,
                        search: a,
                        fixpoint: b,
                    });
                }
            }
        }
    }
    (n, bad)
}

/// Strategy search against the fixed-point evaluator on always, eventually
/// and until queries with propositional targets, at horizons 0 to 3.
pub fn oracle_crosscheck(seed: u64, trials: usize) -> CrossCheckReport {
    let start = Instant::now();
    let mut queries = 0;
    let mut examples = Vec::new();
    for name in BUILTINS {
        let m = builtin(name).expect("known built-in").model;
        let mut rng = ChaCha8Rng::seed_from_u64(mix(seed, name, 0));
        let mut fs = Vec::new();
        for g in (1..(1u64 << m.agent_count())).map(Coalition) {
            let g: crate::formula::AgentSet = names(&m, g).into_iter().collect();
            for lit in literals(&m) {
                let a = parse(&lit).expect("literal");
                fs.push(Formula::always(g.clone(), a.clone()));
                fs.push(Formula::eventually(g.clone(), a.clone()));
                for lit2 in literals(&m) {
                    fs.push(Formula::until(g.clone(), a.clone(), parse(&lit2).expect("literal")));
                }
            }
        }
        fs.extend(temporal_queries(&m, &mut rng, 6));
        let (n, bad) = crosscheck_model(&m, &ModelSource::Builtin(name.into()), &fs, &evaluation_points(&m));
        queries += n;
        examples.extend(bad);
    }
    let parts: Vec<(u64, Vec<Disagreement>)> = (0..trials as u64)
        .into_par_iter()
        .map(|k| {
            let trial_seed = mix(seed, "oracle", k);
            let params = GenParams::sample(trial_seed, 1);
            let m = random_model(&params);
            let mut rng = ChaCha8Rng::seed_from_u64(trial_seed ^ 0x5eed);
            let fs = temporal_queries(&m, &mut rng, 3);
            crosscheck_model(&m, &ModelSource::Random(params), &fs, &histories_up_to(&m, 1))
        })
        .collect();
    for (n, bad) in parts {
        queries += n;
        examples.extend(bad);
    }
    let disagreements = examples.len() as u64;
    examples.truncate(RANDOM_RECORD_CAP);
    CrossCheckReport { models: trials + BUILTINS.len(), queries, disagreements, examples, wall_time: start.elapsed() }
}

#[derive(Debug, Clone, Serialize)]
pub struct AgreementReport {
    pub models: usize,
    pub points: u64,
    pub disagreements: u64,
    pub examples: Vec<String>,
    #[serde(skip)]
    pub wall_time: Duration,
}

impl AgreementReport {
    pub fn passed(&self) -> bool {
        self.disagreements == 0 && self.points > 0
    }
}

/// Knowledge through its until abbreviation against the direct check over
/// the information class.
pub fn epistemic_check(seed: u64, trials: usize) -> AgreementReport {
    let start = Instant::now();
    let parts: Vec<(u64, Vec<String>)> = (0..trials as u64)
        .into_par_iter()
        .map(|k| {
            let trial_seed = mix(seed, "epistemic", k);
            let params = GenParams::sample(trial_seed, 1);
            let m = random_model(&params);
            let mut rng = ChaCha8Rng::seed_from_u64(trial_seed ^ 0x5eed);
            let all: Vec<Coalition> = (1..(1u64 << m.agent_count())).map(Coalition).collect();
            let mut checker = Checker::new(&m);
            let mut n = 0;
            let mut bad = Vec::new();
            for _ in 0..3 {
                let g = all[rng.gen_range(0..all.len())];
                let gs: crate::formula::AgentSet = names(&m, g).into_iter().collect();
                let mut target = random_propositional(&m, 2, &mut rng);
                if rng.gen_bool(0.3) {
                    let h = all[rng.gen_range(0..all.len())];
                    target = Formula::dist_know(names(&m, h).into_iter().collect(), target);
                }
                let abbrev = resolve(&Formula::dist_know(gs, target.clone()), &m).expect("model names").formula;
                let target = resolve(&target, &m).expect("model names").formula;
                for h in histories_up_to(&m, 2) {
                    n += 1;
                    let a = checker.holds(&h, &abbrev, 1).map_err(|e| e.to_string());
                    let b = checker.dist_knows(&h, g, &target, 1).map_err(|e| e.to_string());
                    if a != b {
                        bad.push(format!("seed {}: {abbrev:?} at {}: {a:?} vs {b:?}", params.seed, h.display(&m)));
                    }
                }
            }
            (n, bad)
        })
        .collect();
    let mut points = 0;
    let mut examples = Vec::new();
    for (n, bad) in parts {
        points += n;
        examples.extend(bad);
    }
    let disagreements = examples.len() as u64;
    examples.truncate(RANDOM_RECORD_CAP);
    AgreementReport { models: trials, points, disagreements, examples, wall_time: start.elapsed() }
}

#[derive(Debug, Clone, Serialize)]
pub struct WitnessReport {
    pub queries: u64,
    pub witnesses: u64,
    pub failures: u64,
    pub examples: Vec<String>,
    #[serde(skip)]
    pub wall_time: Duration,
}

impl WitnessReport {
    pub fn passed(&self) -> bool {
        self.failures == 0 && self.witnesses > 0
    }
}

fn witness_model(
    m: &Model,
    queries: &[Resolved],
    points: &[History],
    horizon_of: impl Fn(usize) -> u32,
) -> (u64, u64, Vec<String>) {
    let mut checker = Checker::new(m);
    let (mut n, mut found) = (0, 0);
    let mut bad = Vec::new();
    for (k, q) in queries.iter().enumerate() {
        let horizon = horizon_of(k);
        for h in points {
            n += 1;
            let outcome = checker.synthesize(h, q, horizon).and_then(|w| match w {
                None => Ok(None),
                Some(w) => validate_witness(m, h, q, horizon, &w).map(Some),
            });
            match outcome {
                Ok(None) => {}
                Ok(Some(check)) => {
                    found += 1;
                    if !check.ok() {
                        bad.push(format!("{q:?} at {} (H={horizon}): {check:?}", h.display(m)));
                    }
                }
                Err(e) => bad.push(format!("{q:?} at {} (H={horizon}): {e}", h.display(m))),
            }
        }
    }
    (n, found, bad)
}

/// Synthesizes witnesses for true coalition queries and checks each one
/// for legality, uniformity and replay.
pub fn witness_campaign(seed: u64, trials: usize) -> WitnessReport {
    let start = Instant::now();
    let mut parts: Vec<(u64, u64, Vec<String>)> = Vec::new();
    for name in BUILTINS {
        let suite = builtin(name).expect("known built-in");
        let m = &suite.model;
        let mut qs = Vec::new();
        let mut hs = Vec::new();
        for c in &suite.checks {
            let f = resolve(&parse(c.formula).expect("built-in formulas parse"), m).expect("built-in names");
            if crate::semantics::is_coalition_op(&f.formula) {
                qs.push((f.formula, c.horizon));
                hs.push(parse_history(m, c.history).expect("built-in histories parse"));
            }
        }
        for ((q, horizon), h) in qs.iter().zip(&hs) {
            let horizon = *horizon;
            parts.push(witness_model(m, std::slice::from_ref(q), std::slice::from_ref(h), |_| horizon));
        }
    }
    parts.extend(
        (0..trials as u64)
            .into_par_iter()
            .map(|k| {
                let trial_seed = mix(seed, "witness", k);
                let params = GenParams::sample(trial_seed, 1);
                let m = random_model(&params);
                let mut rng = ChaCha8Rng::seed_from_u64(trial_seed ^ 0x5eed);
                let mut qs: Vec<Resolved> = temporal_queries(&m, &mut rng, 3)
                    .iter()
                    .map(|f| resolve(f, &m).expect("model names").formula)
                    .collect();
                let all: Vec<Coalition> = (1..(1u64 << m.agent_count())).map(Coalition).collect();
                let g = names(&m, all[rng.gen_range(0..all.len())]).into_iter().collect();
                let next = Formula::next(g, random_propositional(&m, 2, &mut rng));
                qs.push(resolve(&next, &m).expect("model names").formula);
                witness_model(&m, &qs, &histories_up_to(&m, 1), |k| 1 + (k as u32 % 3))
            })
            .collect::<Vec<_>>(),
    );
    let (mut queries, mut witnesses, mut examples) = (0, 0, Vec::new());
    for (n, w, bad) in parts {
        queries += n;
        witnesses += w;
        examples.extend(bad);
    }
    let failures = examples.len() as u64;
    examples.truncate(RANDOM_RECORD_CAP);
    WitnessReport { queries, witnesses, failures, examples, wall_time: start.elapsed() }
}

#[derive(Debug, Clone, Serialize)]
pub struct BuiltinResult {
    pub model: String,
    pub history: String,
    pub formula: String,
    pub horizon: u32,
    pub expected: bool,
    pub got: Result<bool, String>,
}

impl BuiltinResult {
    pub fn passed(&self) -> bool {
        self.got == Ok(self.expected)
    }
}

pub fn builtin_regression() -> Vec<BuiltinResult> {
    let mut out = Vec::new();
    for name in BUILTINS {
        let suite = builtin(name).expect("known built-in");
        let m = &suite.model;
        let mut checker = Checker::new(m);
        for c in &suite.checks {
            let got = parse_history(m, c.history).map_err(|e| e.to_string()).and_then(|h| {
                let f = resolve_text(c.formula, m)?;
                checker.holds(&h, &f, c.horizon).map_err(|e: EvalError| e.to_string())
            });
            out.push(BuiltinResult {
                model: name.to_string(),
                history: c.history.to_string(),
                formula: c.formula.to_string(),
                horizon: c.horizon,
                expected: c.expected,
                got,
            });
        }
    }
    out
}

/// Campaign sizes derived from one trial count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SuiteConfig {
    pub seed: u64,
    pub validity_trials: usize,
    pub falsify_trials: usize,
    pub oracle_trials: usize,
    pub epistemic_trials: usize,
    pub witness_trials: usize,
}

impl SuiteConfig {
    /// `trials` random models per validity schema, and proportional sizes
    /// for the other campaigns (200 gives 500, 300, 50 and 100).
    pub fn scaled(seed: u64, trials: usize) -> Self {
        SuiteConfig {
            seed,
            validity_trials: trials,
            falsify_trials: trials * 5 / 2,
            oracle_trials: trials * 3 / 2,
            epistemic_trials: (trials / 4).max(1),
            witness_trials: (trials / 2).max(1),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub format: &'static str,
    pub config: SuiteConfig,
    pub builtin: Vec<BuiltinResult>,
    pub schemas: Vec<CampaignReport>,
    pub oracle: CrossCheckReport,
    pub epistemic: AgreementReport,
    pub witness: WitnessReport,
    pub passed: bool,
}

pub fn run_suite(config: SuiteConfig) -> SuiteReport {
    let builtin = builtin_regression();
    let schemas: Vec<CampaignReport> = SCHEMAS
        .iter()
        .map(|s| {
            let trials = match s.polarity {
                Polarity::Valid => config.validity_trials,
                Polarity::Falsifiable => config.falsify_trials,
            };
            check_schema(s, config.seed, trials)
        })
        .collect();
    let oracle = oracle_crosscheck(config.seed, config.oracle_trials);
    let epistemic = epistemic_check(config.seed, config.epistemic_trials);
    let witness = witness_campaign(config.seed, config.witness_trials);
    let passed = builtin.iter().all(BuiltinResult::passed)
        && schemas.iter().all(CampaignReport::passed)
        && oracle.passed()
        && epistemic.passed()
        && witness.passed();
    SuiteReport { format: FORMAT_TAG, config, builtin, schemas, oracle, epistemic, witness, passed }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::validate_model;

    fn params(seed: u64) -> GenParams {
        GenParams::sample(seed, 1)
    }

    #[test]
    fn same_seed_same_model() {
        for seed in 0..20 {
            assert_eq!(random_model(&params(seed)), random_model(&params(seed)));
        }
    }

    #[test]
    fn generated_models_are_valid() {
        for seed in 0..1000 {
            let m = random_model(&params(seed));
            assert_eq!(validate_model(&m), Ok(()), "seed {seed}");
        }
    }

    #[test]
    fn zero_density_gives_identity_relations() {
        let p = GenParams { agents: 3, states: 6, actions: 2, props: 2, density: 0.0, seed: 9 };
        let m = random_model(&p);
        for i in m.agents() {
            for w in m.states() {
                for v in m.states() {
                    assert_eq!(m.indistinguishable(i, w, v), w == v);
                }
            }
        }
    }

    #[test]
    fn product_cardinality() {
        for seed in 0..50 {
            let m = random_model(&params(seed));
            for w in m.states() {
                let expect: usize = m.agents().map(|i| m.available(i, w).len()).product();
                assert_eq!(m.joint_actions(w).unwrap().len(), expect);
            }
        }
    }

    #[test]
    fn every_template_instantiates() {
        let m = builtin("M1").unwrap().model;
        for s in SCHEMAS {
            for inst in exhaustive(&m, s).into_iter().take(5) {
                let (l, r) = inst.apply(s, &m);
                resolve_text(&l, &m).unwrap();
                resolve_text(&r, &m).unwrap();
            }
        }
    }

    #[test]
    fn placeholders_fill_coalitions() {
        let m = builtin("M1").unwrap().model;
        let s = schema("next-regular").unwrap();
        let inst = Instantiation { phi: "win".into(), psi: "true".into(), first: vec!["g1".into()], second: vec![] };
        assert_eq!(inst.apply(s, &m), ("<<g1>> X (win)".into(), "~<<s,g2>> X ~(win)".into()));
    }
}

//! One PASS/FAIL line per acceptance criterion; exits nonzero if any fails.

use std::process::Command;
use std::time::{Duration, Instant};

use dkatl::format::builtin;
use dkatl::harness::{
    check_schema, epistemic_check, oracle_crosscheck, replay, schema, witness_campaign, ModelSource, Polarity, SCHEMAS,
};
use dkatl::{parse, parse_history, resolve, Checker};

const SEED: u64 = 7;

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: String) -> Outcome {
    Outcome { ok, detail }
}

/// The published verdicts, restated here rather than read from the built-in check lists.
fn verdict_regression() -> Outcome {
    let cases = [
        ("M1", "q0 -(L,n,n)-> q1", "<<g1>> X win", 1, false),
        ("M1", "q0 -(L,n,n)-> q1", "<<g2>> X win", 1, false),
        ("M1", "q0 -(L,n,n)-> q1", "<<g1,g2>> X win", 1, true),
        ("M2", "q0 -(L,n,n)-> q1", "<<g1>> X win", 1, true),
        ("M2", "q0 -(L,n,n)-> q1", "<<g1,g2>> X win", 1, true),
        ("M3", "q0 -(n,a)-> q1", "<<1>> p U q", 2, true),
        ("M3", "q0 -(n,a)-> q1", "<<1>> (K{1} p) U (K{1} q)", 2, false),
        ("M4", "q0 -(n,a)-> q1", "p", 3, true),
        ("M4", "q0 -(n,a)-> q1", "<<1>> X <<1>> G p", 3, true),
        ("M4", "q0 -(n,a)-> q1", "<<1>> G p", 3, false),
    ];
    let start = Instant::now();
    let mut wrong = Vec::new();
    for (name, history, formula, horizon, expected) in cases {
        let m = builtin(name).unwrap().model;
        let h = parse_history(&m, history).unwrap();
        let f = resolve(&parse(formula).unwrap(), &m).unwrap().formula;
        let got = Checker::new(&m).holds(&h, &f, horizon);
        if got != Ok(expected) {
            wrong.push(format!("{name}: {formula} gave {got:?}"));
        }
    }
    let elapsed = start.elapsed();
    outcome(
        wrong.is_empty() && elapsed < Duration::from_secs(1),
        format!("{} verdicts, {} wrong, {elapsed:.2?} {}", cases.len(), wrong.len(), wrong.join("; ")),
    )
}

fn validity_suites() -> Outcome {
    let start = Instant::now();
    let mut schemata = 0;
    let mut points = 0;
    let mut bad = Vec::new();
    for s in SCHEMAS.iter().filter(|s| s.polarity == Polarity::Valid) {
        let r = check_schema(s, SEED, 200);
        schemata += 1;
        points += r.points;
        if r.trials < 200 || r.counterexamples_found > 0 || !r.errors.is_empty() {
            bad.push(format!("{} ({} counterexamples, {} errors)", s.name, r.counterexamples_found, r.errors.len()));
        }
    }
    let elapsed = start.elapsed();
    outcome(
        bad.is_empty() && elapsed < Duration::from_secs(300),
        format!("{schemata} schemata x 200 random models, {points} points, {elapsed:.1?} {}", bad.join("; ")),
    )
}

fn non_validity_suite() -> Outcome {
    let names = [
        "box-fixpoint-lhs",
        "eventually-fixpoint-lhs",
        "eventually-fixpoint-rhs",
        "until-fixpoint-lhs",
        "until-fixpoint-rhs",
    ];
    let mut bad = Vec::new();
    let mut counts = Vec::new();
    for name in names {
        let r = check_schema(schema(name).unwrap(), SEED, 500);
        counts.push(format!("{name}={}", r.counterexamples_found));
        if r.counterexamples_found == 0 || !r.errors.is_empty() {
            bad.push(format!("{name}: none found"));
        }
        if let Some(c) = r.counterexamples.iter().find(|c| replay(c) != Ok(true)) {
            bad.push(format!("{name}: {c:?} does not replay"));
        }
        if name == "box-fixpoint-lhs"
            && !r.counterexamples.iter().any(|c| {
                c.source == ModelSource::Builtin("M4".into())
                    && c.history == "q0 -(n,a)-> q1"
                    && c.instantiation.phi == "p"
            })
        {
            bad.push("M4 counterexample at q0 -(n,a)-> q1 with phi = p missing".into());
        }
    }
    outcome(bad.is_empty(), format!("{} {}", counts.join(" "), bad.join("; ")))
}

fn oracle_equivalence() -> Outcome {
    let r = oracle_crosscheck(SEED, 300);
    outcome(
        r.passed() && r.models >= 300,
        format!("{} models, {} queries, {} disagreements", r.models, r.queries, r.disagreements),
    )
}

fn epistemic_equivalence() -> Outcome {
    let r = epistemic_check(SEED, 50);
    outcome(r.passed() && r.points >= 1000, format!("{} points, {} disagreements", r.points, r.disagreements))
}

fn witness_soundness() -> Outcome {
    let r = witness_campaign(SEED, 100);
    outcome(r.passed(), format!("{} witnesses checked, {} failures", r.witnesses, r.failures))
}

fn determinism() -> Outcome {
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_dkatl"))
            .args(["suite", "--seed", &SEED.to_string(), "--trials", "200", "--format", "structured"])
            .output()
            .expect("binary runs")
    };
    let a = run();
    let b = run();
    let tagged = String::from_utf8_lossy(&a.stdout).contains("\"format\": \"dkatl-suite/1\"");
    outcome(
        a.status.success() && b.status.success() && a.stdout == b.stdout && tagged,
        format!(
            "exit {:?}/{:?}, {} bytes, identical: {}",
            a.status.code(),
            b.status.code(),
            a.stdout.len(),
            a.stdout == b.stdout
        ),
    )
}

type Criterion = fn() -> Outcome;

fn main() {
    let criteria: [(&str, Criterion); 7] = [
        ("published verdicts", verdict_regression),
        ("validity schemata", validity_suites),
        ("non-validity schemata", non_validity_suite),
        ("search vs fixed-point evaluator", oracle_equivalence),
        ("knowledge abbreviation vs direct check", epistemic_equivalence),
        ("witness soundness", witness_soundness),
        ("suite determinism", determinism),
    ];
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let o = f();
        if !o.ok {
            failed += 1;
        }
        println!("{} criterion {}: {name}: {}", if o.ok { "PASS" } else { "FAIL" }, k + 1, o.detail.trim_end());
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}

use dkatl::harness::{
    check_schema, epistemic_check, oracle_crosscheck, replay, schema, witness_campaign, ModelSource, Polarity, SCHEMAS,
};

#[test]
fn box_fixpoint_counterexample_on_m4() {
    let r = check_schema(schema("box-fixpoint-lhs").unwrap(), 7, 10);
    assert!(r.passed());
    let hit = r.counterexamples.iter().find(|c| {
        c.source == ModelSource::Builtin("M4".into())
            && c.history == "q0 -(n,a)-> q1"
            && c.instantiation.phi == "p"
            && c.instantiation.first == ["1"]
    });
    let hit = hit.expect("the M4 counterexample is recorded");
    assert!(hit.lhs && !hit.rhs);
}

#[test]
fn until_knowledge_converse_fails_on_m3() {
    let r = check_schema(schema("until-knowledge-converse").unwrap(), 7, 10);
    assert!(r.counterexamples.iter().any(|c| c.source == ModelSource::Builtin("M3".into())));
}

#[test]
fn every_counterexample_replays() {
    for s in SCHEMAS.iter().filter(|s| s.polarity == Polarity::Falsifiable) {
        let r = check_schema(s, 11, 40);
        assert!(r.passed(), "{}", s.name);
        for c in &r.counterexamples {
            assert_eq!(replay(c), Ok(true), "{c:?}");
        }
    }
}

#[test]
fn coalition_monotonicity_has_no_counterexample() {
    let r = check_schema(schema("next-coalition-monotone").unwrap(), 7, 200);
    assert_eq!(r.counterexamples_found, 0);
    assert!(r.errors.is_empty());
    assert!(r.points > 0);
}

#[test]
fn campaigns_are_deterministic() {
    let s = schema("until-fixpoint-lhs").unwrap();
    let a = serde_json::to_string(&check_schema(s, 3, 30)).unwrap();
    let b = serde_json::to_string(&check_schema(s, 3, 30)).unwrap();
    assert_eq!(a, b);
    let a = serde_json::to_string(&oracle_crosscheck(3, 10)).unwrap();
    let b = serde_json::to_string(&oracle_crosscheck(3, 10)).unwrap();
    assert_eq!(a, b);
}

#[test]
fn small_cross_checks_agree() {
    assert!(oracle_crosscheck(5, 30).passed());
    assert!(epistemic_check(5, 10).passed());
    assert!(witness_campaign(5, 10).passed());
}

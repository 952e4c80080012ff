use std::collections::BTreeSet;

use dkatl::format::{load_model, save_model};
use dkatl::harness::{random_model, GenParams};
use dkatl::history::{all_histories, equiv_agent, equiv_coalition, histories_up_to};
use dkatl::model::Coalition;
use dkatl::{equiv_class, parse, resolve, Checker, Formula, Model};
use proptest::prelude::*;

fn model_strategy() -> impl Strategy<Value = Model> {
    any::<u64>().prop_map(|seed| random_model(&GenParams::sample(seed, 1)))
}

fn coalitions(m: &Model) -> Vec<Coalition> {
    (1..(1u64 << m.agent_count())).map(Coalition).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn agent_equivalence_is_an_equivalence(m in model_strategy()) {
        let hs = histories_up_to(&m, 2);
        let hs: Vec<_> = hs.iter().step_by(1 + hs.len() / 40).collect();
        for i in m.agents() {
            for a in &hs {
                prop_assert!(equiv_agent(&m, a, a, i));
                for b in &hs {
                    let ab = equiv_agent(&m, a, b, i);
                    prop_assert_eq!(ab, equiv_agent(&m, b, a, i));
                    if a.len() != b.len() {
                        prop_assert!(!ab);
                    }
                    if ab {
                        for c in &hs {
                            if equiv_agent(&m, b, c, i) {
                                prop_assert!(equiv_agent(&m, a, c, i));
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn coalition_equivalence_intersects_and_refines(m in model_strategy()) {
        let hs = histories_up_to(&m, 2);
        let hs: Vec<_> = hs.iter().step_by(1 + hs.len() / 60).collect();
        let gs = coalitions(&m);
        for a in &hs {
            for b in &hs {
                for &g in &gs {
                    let eq = equiv_coalition(&m, a, b, g);
                    prop_assert_eq!(eq, g.agents().all(|i| equiv_agent(&m, a, b, i)));
                    for &bigger in gs.iter().filter(|x| g.is_subset(**x)) {
                        if equiv_coalition(&m, a, b, bigger) {
                            prop_assert!(eq);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn information_classes_match_filtering(m in model_strategy()) {
        for len in 0..=3 {
            let all = all_histories(&m, len);
            for h in all.iter().step_by(1 + all.len() / 12) {
                for g in coalitions(&m) {
                    let class = equiv_class(&m, h, g);
                    let expected: Vec<_> =
                        all.iter().filter(|x| equiv_coalition(&m, h, x, g)).cloned().collect();
                    prop_assert_eq!(&class.members, &expected);
                    prop_assert!(class.contains(h));
                }
            }
        }
    }

    #[test]
    fn coalition_verdicts_are_constant_on_classes(m in model_strategy(), k in 0usize..64) {
        let mut checker = Checker::new(&m);
        let gs = coalitions(&m);
        let g = gs[k % gs.len()];
        let names: BTreeSet<String> = g.agents().map(|i| m.agent_name(i).to_string()).collect();
        let p = Formula::prop(&m.prop_names()[k % m.prop_names().len()]);
        let goals = [
            Formula::next(names.clone(), p.clone()),
            Formula::always(names.clone(), p.clone()),
            Formula::until(names.clone(), Formula::not(p.clone()), p.clone()),
        ];
        for f in &goals {
            let r = resolve(f, &m).unwrap().formula;
            for h in histories_up_to(&m, 1) {
                let v = checker.holds(&h, &r, 2).unwrap();
                for other in equiv_class(&m, &h, g).members {
                    prop_assert_eq!(checker.holds(&other, &r, 2).unwrap(), v);
                }
            }
        }
    }
}

fn name() -> impl Strategy<Value = String> {
    prop_oneof![Just("p".to_string()), Just("q1".to_string()), Just("x'".to_string()), Just("a.b".to_string())]
}

fn group() -> impl Strategy<Value = BTreeSet<String>> {
    prop::collection::btree_set(
        prop_oneof![Just("1".to_string()), Just("g2".to_string()), Just("s".to_string())],
        1..=3,
    )
}

fn formula() -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![Just(Formula::Top), Just(Formula::Bot), name().prop_map(Formula::Prop)];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|a| Formula::Not(Box::new(a))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::And(Box::new(a), Box::new(b))),
            (group(), inner.clone()).prop_map(|(g, a)| Formula::Next(g, Box::new(a))),
            (group(), inner.clone()).prop_map(|(g, a)| Formula::Always(g, Box::new(a))),
            (group(), inner.clone(), inner).prop_map(|(g, a, b)| Formula::Until(g, Box::new(a), Box::new(b))),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn printed_formulas_parse_back(f in formula()) {
        let text = f.to_string();
        prop_assert_eq!(parse(&text), Ok(f), "{}", text);
    }
}

#[test]
fn saved_models_load_back() {
    for seed in 0..200u64 {
        let m = random_model(&GenParams::sample(seed, 1));
        let text = save_model(&m);
        let back = load_model(&text).unwrap_or_else(|e| panic!("seed {seed}: {e}\n{text}"));
        assert_eq!(back, m, "seed {seed}");
        assert_eq!(save_model(&back), text, "seed {seed}");
    }
}

use dkatl::fixpoint::eval_fixedpoint;
use dkatl::format::{builtin, BUILTINS};
use dkatl::semantics::EvalError;
use dkatl::{eval, parse, parse_history, resolve};

#[test]
fn every_builtin_check_holds() {
    for name in BUILTINS {
        let suite = builtin(name).unwrap();
        let m = &suite.model;
        for c in &suite.checks {
            let h = parse_history(m, c.history).unwrap();
            let f = resolve(&parse(c.formula).unwrap(), m).unwrap();
            let got = eval(m, &h, &f, c.horizon).unwrap().verdict;
            assert_eq!(got, c.expected, "{name}: {c}");
        }
    }
}

#[test]
fn evaluators_agree_on_builtin_checks() {
    for name in BUILTINS {
        let suite = builtin(name).unwrap();
        let m = &suite.model;
        for c in &suite.checks {
            let h = parse_history(m, c.history).unwrap();
            let f = resolve(&parse(c.formula).unwrap(), m).unwrap();
            match eval_fixedpoint(m, &h, &f, c.horizon) {
                Ok(r) => assert_eq!(r.verdict, c.expected, "{name}: {c}"),
                Err(EvalError::Unsupported(_)) => {}
                Err(e) => panic!("{name}: {c}: {e}"),
            }
        }
    }
}

#[test]
fn canonical_saves_match_golden_files() {
    let golden = [
        ("M1", include_str!("golden/m1.icgs")),
        ("M2", include_str!("golden/m2.icgs")),
        ("M3", include_str!("golden/m3.icgs")),
        ("M4", include_str!("golden/m4.icgs")),
    ];
    for (name, text) in golden {
        let m = dkatl::format::builtin(name).unwrap().model;
        assert_eq!(dkatl::format::save_model(&m), text, "{name}");
        assert_eq!(dkatl::format::load_model(text).unwrap(), m, "{name}");
    }
}

use crank::logic::{
    eval, is_perpendicular, is_satisfiable, is_subconditional, models, parse_conditional,
    parse_formula, parse_kb, Conditional, Formula, Indicator, Signature,
};
use crank::Error;

fn sig(atoms: &[&str]) -> Signature {
    Signature::new(atoms.iter().copied()).unwrap()
}

fn penguin_kb() -> crank::KnowledgeBase {
    parse_kb(include_str!("../../../kb/penguin.ckb")).unwrap()
}

#[test]
fn parse_conjunction() {
    let s = sig(&["p", "b"]);
    let f = parse_formula("p, b", &s).unwrap();
    assert_eq!(f, Formula::and(Formula::Atom(0), Formula::Atom(1)));
}

#[test]
fn parse_negation() {
    let s = sig(&["f"]);
    let f = parse_formula("!f", &s).unwrap();
    assert_eq!(f, Formula::not(Formula::Atom(0)));
}

#[test]
fn parse_excluded_middle_is_tautologous() {
    let s = sig(&["a"]);
    let f = parse_formula("a; !a", &s).unwrap();
    assert_eq!(models(&f, &s).card(), s.world_count());
}

#[test]
fn parse_reports_positions() {
    let s = sig(&["a", "b"]);
    match parse_formula("a, q", &s) {
        Err(Error::UnknownAtom { name, column, .. }) => {
            assert_eq!(name, "q");
            assert_eq!(column, 4);
        }
        other => panic!("expected unknown atom, got {other:?}"),
    }
    assert!(matches!(
        parse_formula("(a, b", &s),
        Err(Error::Syntax { .. })
    ));
    assert!(matches!(
        parse_formula("a &", &s),
        Err(Error::Syntax { column: 3, .. })
    ));
}

#[test]
fn parse_kb_penguin() {
    let kb = penguin_kb();
    assert_eq!(kb.len(), 5);
    assert_eq!(kb.signature().world_count(), 32);
    assert_eq!(kb.label(0), "r1");
    assert_eq!(kb.label(4), "r5");
}

#[test]
fn parse_kb_signature_only() {
    let kb = parse_kb("sig: a\n").unwrap();
    assert_eq!(kb.len(), 0);
    assert_eq!(kb.signature().atom_count(), 1);
}

#[test]
fn parse_kb_rejects_unsatisfiable_antecedent() {
    let err = parse_kb("signature: a, b\n(b | a, !a)\n").unwrap_err();
    assert!(matches!(err, Error::UnsatisfiableAntecedent { .. }));
}

#[test]
fn parse_kb_rejects_duplicate_labels() {
    let err = parse_kb("signature: a, b\nr1: (b | a)\nr1: (a | b)\n").unwrap_err();
    assert_eq!(err, Error::DuplicateLabel("r1".into()));
}

#[test]
fn parse_kb_requires_signature_first() {
    assert_eq!(parse_kb("(b | a)\n").unwrap_err(), Error::MissingSignature);
}

#[test]
fn eval_on_named_world() {
    let kb = penguin_kb();
    let s = kb.signature();
    let pbfwa = s.world(&[true; 5]);
    assert!(eval(&parse_formula("p, b", s).unwrap(), pbfwa, s));
    assert!(!eval(&parse_formula("!f", s).unwrap(), pbfwa, s));
    assert!(eval(&Formula::Top, pbfwa, s));
}

#[test]
fn models_of_atom_and_constants() {
    let s = sig(&["a", "b"]);
    let worlds: Vec<String> = models(&Formula::Atom(0), &s)
        .iter()
        .map(|w| s.render_world(w))
        .collect();
    assert_eq!(worlds, vec!["ab", "a!b"]);
    assert!(models(&Formula::Bottom, &s).is_empty());
    let s5 = penguin_kb().signature().clone();
    assert_eq!(models(&Formula::Top, &s5).card(), 32);
}

#[test]
fn world_enumeration_order_matches_rendering() {
    let s = sig(&["a", "b"]);
    let rendered: Vec<String> = s.worlds().map(|w| s.render_world(w)).collect();
    assert_eq!(rendered, vec!["ab", "a!b", "!ab", "!a!b"]);
    for w in s.worlds() {
        assert_eq!(s.parse_world(&s.render_world(w)).unwrap(), w);
    }
}

// Example base with rules (c|a), (c|b) over atoms a, b, c.
fn two_rule_kb() -> crank::KnowledgeBase {
    parse_kb("signature: a, b, c\nr1: (c | a)\nr2: (c | b)\n").unwrap()
}

#[test]
fn indicator_values() {
    let kb = two_rule_kb();
    let s = kb.signature();
    let c_given_a = kb.conditional(0);
    let abc = s.world(&[true, true, true]);
    let nabc = s.world(&[false, true, true]);
    let ab_nc = s.world(&[true, false, false]);
    assert_eq!(c_given_a.indicator(abc, s), Indicator::Verifies);
    assert_eq!(c_given_a.indicator(nabc, s), Indicator::NotApplicable);
    assert_eq!(c_given_a.indicator(ab_nc, s), Indicator::Falsifies);
}

#[test]
fn indicator_partitions_worlds() {
    let kb = penguin_kb();
    let s = kb.signature();
    for c in kb.conditionals() {
        for w in s.worlds() {
            // exactly one case applies by construction; cross-check both sides
            let v = eval(&c.antecedent, w, s) && eval(&c.consequent, w, s);
            let f = eval(&c.antecedent, w, s) && !eval(&c.consequent, w, s);
            let u = !eval(&c.antecedent, w, s);
            assert_eq!(u8::from(v) + u8::from(f) + u8::from(u), 1);
            let expected = if v {
                Indicator::Verifies
            } else if f {
                Indicator::Falsifies
            } else {
                Indicator::NotApplicable
            };
            assert_eq!(c.indicator(w, s), expected);
        }
    }
}

#[test]
fn subconditional_by_strengthening() {
    let s = sig(&["a", "b", "c"]);
    let b_given_ac = parse_conditional("(b | a, c)", &s).unwrap();
    let b_given_a = parse_conditional("(b | a)", &s).unwrap();
    assert!(is_subconditional(&b_given_ac, &b_given_a, &s));
    assert!(!is_subconditional(&b_given_a, &b_given_ac, &s));
    assert!(is_subconditional(&b_given_a, &b_given_a, &s));
}

#[test]
fn subconditional_with_negated_literal() {
    let s = sig(&["s", "f", "t"]);
    let f_given_snt = parse_conditional("(f | s, !t)", &s).unwrap();
    let f_given_s = parse_conditional("(f | s)", &s).unwrap();
    assert!(is_subconditional(&f_given_snt, &f_given_s, &s));
}

#[test]
fn perpendicular_cases() {
    let s = sig(&["a", "b", "c", "d"]);
    let b_given_a = parse_conditional("(b | a)", &s).unwrap();
    let d_given_ab = parse_conditional("(d | a, b)", &s).unwrap();
    let d_given_na = parse_conditional("(d | !a)", &s).unwrap();
    assert!(is_perpendicular(&d_given_ab, &b_given_a, &s));
    assert!(is_perpendicular(&d_given_na, &b_given_a, &s));

    let kb = two_rule_kb();
    let s3 = kb.signature();
    assert!(!is_perpendicular(kb.conditional(0), kb.conditional(1), s3));
}

#[test]
fn conditional_parser_accepts_bare_and_nested_forms() {
    let s = sig(&["a", "b"]);
    let bare = parse_conditional("b | a", &s).unwrap();
    let wrapped = parse_conditional("((b | a))", &s).unwrap();
    assert_eq!(bare.antecedent, wrapped.antecedent);
    assert!(parse_conditional("b | a | b", &s).is_err());
    assert!(parse_conditional("(b, a)", &s).is_err());
}

#[test]
fn facts_are_conditionals_over_top() {
    let s = sig(&["a", "b"]);
    let fact = parse_conditional("(b | top)", &s).unwrap();
    assert_eq!(models(&fact.antecedent, &s).card(), 4);
    assert!(is_satisfiable(&fact.antecedent, &s));
}

mod properties {
    use super::*;
    use proptest::prelude::*;

    fn arb_formula(atoms: usize) -> impl Strategy<Value = Formula> {
        let leaf = prop_oneof![
            (0..atoms).prop_map(Formula::Atom),
            Just(Formula::Top),
            Just(Formula::Bottom),
        ];
        leaf.prop_recursive(3, 16, 2, |inner| {
            prop_oneof![
                inner.clone().prop_map(Formula::not),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
                (inner.clone(), inner).prop_map(|(a, b)| Formula::or(a, b)),
            ]
        })
    }

    fn arb_conditional(atoms: usize) -> impl Strategy<Value = Conditional> {
        (arb_formula(atoms), arb_formula(atoms))
            .prop_map(|(c, a)| Conditional::new(c, a))
            .prop_filter("satisfiable antecedent", move |c| {
                is_satisfiable(&c.antecedent, &sig(&["a", "b", "c"][..atoms]))
            })
    }

    proptest! {
        #[test]
        fn models_distribute(f in arb_formula(3), g in arb_formula(3)) {
            let s = sig(&["a", "b", "c"]);
            let and = models(&Formula::and(f.clone(), g.clone()), &s);
            prop_assert_eq!(and, models(&f, &s).intersection(&models(&g, &s)));
            let neg = models(&Formula::not(f.clone()), &s);
            prop_assert_eq!(neg, models(&f, &s).complement());
        }

        #[test]
        fn render_parse_round_trip(f in arb_formula(3)) {
            let s = sig(&["a", "b", "c"]);
            let reparsed = parse_formula(&f.render(&s), &s).unwrap();
            prop_assert_eq!(models(&reparsed, &s), models(&f, &s));
        }

        #[test]
        fn subconditional_is_transitive(
            c1 in arb_conditional(3),
            c2 in arb_conditional(3),
            c3 in arb_conditional(3),
        ) {
            let s = sig(&["a", "b", "c"]);
            if is_subconditional(&c1, &c2, &s) && is_subconditional(&c2, &c3, &s) {
                prop_assert!(is_subconditional(&c1, &c3, &s));
            }
            prop_assert!(is_subconditional(&c1, &c1, &s));
        }
    }
}

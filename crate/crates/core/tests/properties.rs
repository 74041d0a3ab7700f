use proptest::prelude::*;
use stonean_core::algebra::b4;
use stonean_core::stonean::adjoin_bottom;
use stonean_core::corpus::{enumerate_with, Constraints, Options, HARD_LIMIT};
use stonean_core::hom::{compose, inverse, is_homomorphism};
use stonean_core::terms::{eval, parse_equation, satisfies, translate_dense, Assignment, BinOp, Term};
use stonean_core::{are_isomorphic, FiniteAlgebra};

fn corpus(n: usize, bounded: bool) -> Vec<FiniteAlgebra> {
    enumerate_with(
        n,
        &Options {
            constraints: Constraints {
                bounded,
                ..Constraints::default()
            },
            limit: Some(HARD_LIMIT),
            ..Options::default()
        },
    )
    .unwrap()
}

fn arb_term() -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![
        Just(Term::Top),
        Just(Term::Bottom),
        Just(Term::var("x")),
        Just(Term::var("y")),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        (0..4usize, inner.clone(), inner).prop_map(|(op, l, r)| {
            let op = [BinOp::Meet, BinOp::Join, BinOp::Mult, BinOp::Res][op];
            Term::bin(op, l, r)
        })
    })
}

proptest! {
    #[test]
    fn eval_respects_substitution(
        t in arb_term(),
        s in arb_term(),
        which in 0..36usize,
        x in 0..5usize,
        y in 0..5usize,
    ) {
        let all = corpus(5, true);
        let a = &all[which % all.len()];
        let (x, y) = (x % a.size(), y % a.size());
        let sigma = Assignment::from([("x".to_string(), x), ("y".to_string(), y)]);
        let substituted = t.substitute(&|v| (v == "x").then(|| s.clone()));
        let mut shifted = sigma.clone();
        shifted.insert("x".into(), eval(a, &s, &sigma).unwrap());
        prop_assert_eq!(eval(a, &substituted, &sigma).unwrap(), eval(a, &t, &shifted).unwrap());
    }
}

#[test]
fn dense_translation_over_unbounded_corpus() {
    let battery = [
        "x -> x * x = T",
        "(x -> y) v (y -> x) = T",
        "(x ^ y) -> x * (x -> y) = T",
        "x = T",
        "x * y -> y * x = T",
        "((x -> y) -> y) -> (y -> x) -> x = T",
    ];
    for d in corpus(4, false) {
        let s = adjoin_bottom(&d);
        for text in battery {
            let eq = parse_equation(text).unwrap();
            let here = satisfies(&d, &eq).unwrap().holds;
            let lifted = satisfies(&s, &translate_dense(&eq).unwrap()).unwrap().holds;
            assert_eq!(here, lifted, "{text} on {}", d.name());
        }
    }
}

#[test]
fn isomorphism_is_an_equivalence() {
    let all = corpus(5, true);
    for a in &all {
        let id = are_isomorphic(a, a).expect("reflexive");
        assert!(is_homomorphism(a, a, &id, true));
    }
    let relabeled: Vec<FiniteAlgebra> = all
        .iter()
        .map(|a| {
            let reversed = reverse_inner(a);
            assert!(stonean_core::algebra::validate(&reversed).is_ok());
            reversed
        })
        .collect();
    for (a, r) in all.iter().zip(&relabeled) {
        let f = are_isomorphic(a, r).expect("relabeling is an isomorphism");
        let g = are_isomorphic(r, a).expect("symmetric");
        assert!(is_homomorphism(r, a, &inverse(&f).unwrap(), true));
        assert!(is_homomorphism(a, a, &compose(&f, &g), true));
        let twice = reverse_inner(r);
        let h = are_isomorphic(a, &twice).expect("transitive");
        assert!(is_homomorphism(a, &twice, &h, true));
    }
    for (i, a) in all.iter().enumerate() {
        for r in &relabeled[..i] {
            assert!(are_isomorphic(a, r).is_none());
        }
    }
    assert!(are_isomorphic(&b4(), &all[0]).is_none());
}

/// The same algebra with its inner elements listed in reverse.
fn reverse_inner(a: &FiniteAlgebra) -> FiniteAlgebra {
    let n = a.size();
    let (bot, top) = (a.bottom().unwrap(), a.top());
    let inner: Vec<usize> = a.elements().filter(|&x| x != bot && x != top).collect();
    let mut perm: Vec<usize> = a.elements().collect();
    for (i, &x) in inner.iter().enumerate() {
        perm[x] = inner[inner.len() - 1 - i];
    }
    let back = inverse(&perm).unwrap();
    let names = (0..n).map(|i| a.element_name(back[i]).to_string()).collect();
    let table = |op| stonean_core::Table::from_fn(n, |x, y| perm[a.apply(op, back[x], back[y])]);
    use stonean_core::Op;
    FiniteAlgebra::new(
        a.name(),
        names,
        table(Op::Meet),
        table(Op::Join),
        table(Op::Mult),
        table(Op::Res),
        perm[top],
        Some(perm[bot]),
    )
    .unwrap()
}

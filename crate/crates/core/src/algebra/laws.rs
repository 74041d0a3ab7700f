//! Exhaustive law checks over operation tables.

use super::{ElementId, FiniteAlgebra};
use crate::report::{tuples, ValidationReport};

/// Checks that `a` is a commutative integral residuated lattice (bounded when it
/// has a bottom). Each failed law is reported once, with its lexicographically
/// first witness.
pub fn validate(a: &FiniteAlgebra) -> ValidationReport {
    let n = a.size();
    let top = a.top();
    let mut r = ValidationReport::new();
    let t1 = || tuples(n, 1);
    let t2 = || tuples(n, 2);
    let t3 = || tuples(n, 3);

    r.first_failure("meet-idempotent", t1(), |w| a.meet(w[0], w[0]) == w[0]);
    r.first_failure("meet-commutative", t2(), |w| a.meet(w[0], w[1]) == a.meet(w[1], w[0]));
    r.first_failure("meet-associative", t3(), |w| {
        a.meet(a.meet(w[0], w[1]), w[2]) == a.meet(w[0], a.meet(w[1], w[2]))
    });
    r.first_failure("join-idempotent", t1(), |w| a.join(w[0], w[0]) == w[0]);
    r.first_failure("join-commutative", t2(), |w| a.join(w[0], w[1]) == a.join(w[1], w[0]));
    r.first_failure("join-associative", t3(), |w| {
        a.join(a.join(w[0], w[1]), w[2]) == a.join(w[0], a.join(w[1], w[2]))
    });
    r.first_failure("absorption", t2(), |w| {
        a.meet(w[0], a.join(w[0], w[1])) == w[0] && a.join(w[0], a.meet(w[0], w[1])) == w[0]
    });
    r.first_failure("top-maximum", t1(), |w| a.leq(w[0], top));
    if let Some(bot) = a.bottom() {
        r.first_failure("bottom-minimum", t1(), |w| a.leq(bot, w[0]));
    }
    r.first_failure("mult-commutative", t2(), |w| a.mult(w[0], w[1]) == a.mult(w[1], w[0]));
    r.first_failure("mult-associative", t3(), |w| {
        a.mult(a.mult(w[0], w[1]), w[2]) == a.mult(w[0], a.mult(w[1], w[2]))
    });
    r.first_failure("mult-identity", t1(), |w| a.mult(w[0], top) == w[0]);
    r.first_failure("integrality", t2(), |w| a.leq(a.mult(w[0], w[1]), a.meet(w[0], w[1])));
    r.first_failure("residuation", t3(), |w| {
        a.leq(a.mult(w[0], w[1]), w[2]) == a.leq(w[0], a.res(w[1], w[2]))
    });
    r
}

/// Cross-checks the standard consequences of residuation, of having a bottom,
/// and of complementation on the Boolean elements. A correct implementation
/// reports nothing for every valid algebra.
pub fn identity_battery(a: &FiniteAlgebra) -> ValidationReport {
    let n = a.size();
    let top = a.top();
    let mut r = ValidationReport::new();
    let t1 = || tuples(n, 1);
    let t2 = || tuples(n, 2);
    let t3 = || tuples(n, 3);
    let res = |x, y| a.res(x, y);

    r.first_failure("order-iff-residuum-top", t2(), |w| {
        a.leq(w[0], w[1]) == (res(w[0], w[1]) == top)
    });
    r.first_failure("top-residuum-identity", t1(), |w| res(top, w[0]) == w[0]);
    r.first_failure("suffixing", t3(), |w| {
        let (x, y, z) = (w[0], w[1], w[2]);
        res(res(x, y), res(res(y, z), res(x, z))) == top
    });
    r.first_failure("weakening", t2(), |w| res(w[0], res(w[1], w[0])) == top);
    r.first_failure("exchange", t3(), |w| {
        let (x, y, z) = (w[0], w[1], w[2]);
        res(a.mult(x, y), z) == res(x, res(y, z))
    });
    r.first_failure("join-antecedent", t3(), |w| {
        let (x, y, z) = (w[0], w[1], w[2]);
        res(a.join(x, y), z) == a.meet(res(x, z), res(y, z))
    });
    r.first_failure("meet-consequent", t3(), |w| {
        let (x, y, z) = (w[0], w[1], w[2]);
        res(x, a.meet(y, z)) == a.meet(res(x, y), res(x, z))
    });
    r.first_failure("mult-distributes-over-join", t3(), |w| {
        let (x, y, z) = (w[0], w[1], w[2]);
        a.mult(x, a.join(y, z)) == a.join(a.mult(x, y), a.mult(x, z))
    });

    let Some(bot) = a.bottom() else {
        return r;
    };
    let neg = |x| res(x, bot);
    r.first_failure("negation-antitone", t2(), |w| {
        !a.leq(w[0], w[1]) || a.leq(neg(w[1]), neg(w[0]))
    });
    r.first_failure("double-negation-inflationary", t1(), |w| a.leq(w[0], neg(neg(w[0]))));
    r.first_failure("triple-negation", t1(), |w| neg(w[0]) == neg(neg(neg(w[0]))));
    r.first_failure("negation-contraposition", t2(), |w| {
        res(w[0], neg(w[1])) == res(w[1], neg(w[0]))
    });
    r.first_failure("negation-double-antecedent", t2(), |w| {
        res(w[0], neg(w[1])) == res(neg(neg(w[0])), neg(w[1]))
    });
    r.first_failure("negated-residuum-regular", t2(), |w| {
        let v = res(w[0], neg(w[1]));
        neg(neg(v)) == v
    });
    r.first_failure("de-morgan-join", t2(), |w| {
        neg(a.join(w[0], w[1])) == a.meet(neg(w[0]), neg(w[1]))
    });

    let is_bool = |x: ElementId| a.join(x, neg(x)) == top && a.meet(x, neg(x)) == bot;
    let booleans: Vec<ElementId> = a.elements().filter(|&x| is_bool(x)).collect();
    let over_b = || t2().filter(|w| is_bool(w[0]));
    r.first_failure(
        "boolean-negation-closed",
        booleans.iter().map(|&b| vec![b]),
        |w| is_bool(neg(w[0])) && neg(neg(w[0])) == w[0],
    );
    r.first_failure("boolean-iff-excluded-middle", t1(), |w| {
        is_bool(w[0]) == (a.join(w[0], neg(w[0])) == top)
    });
    r.first_failure("boolean-mult-is-meet", over_b(), |w| {
        a.mult(w[0], w[1]) == a.meet(w[0], w[1])
    });
    r.first_failure("boolean-residuum-is-join", over_b(), |w| {
        res(w[0], w[1]) == a.join(neg(w[0]), w[1])
    });
    r.first_failure("boolean-split", over_b(), |w| {
        let (b, x) = (w[0], w[1]);
        x == a.join(a.meet(x, b), a.meet(x, neg(b)))
    });
    r.first_failure(
        "boolean-cancellation",
        t3().filter(|w| is_bool(w[0])),
        |w| {
            let (b, x, y) = (w[0], w[1], w[2]);
            let premise = a.leq(neg(b), a.meet(x, y)) && a.meet(b, x) == a.meet(b, y);
            !premise || x == y
        },
    );
    r.first_failure(
        "boolean-subalgebra",
        tuples(booleans.len(), 2).map(|w| vec![booleans[w[0]], booleans[w[1]]]),
        |w| {
            let (x, y) = (w[0], w[1]);
            [a.meet(x, y), a.join(x, y), a.mult(x, y), res(x, y)]
                .into_iter()
                .all(is_bool)
        },
    );
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{b2, g3, l3, Table};

    #[test]
    fn fixtures_pass_both_checks() {
        for a in [g3(), l3(), b2()] {
            assert!(validate(&a).is_ok());
            assert!(identity_battery(&a).is_ok(), "{}", identity_battery(&a).display(&a));
        }
    }

    #[test]
    fn broken_square_is_caught() {
        let g = g3();
        let mut mult = g.table(crate::algebra::Op::Mult).clone();
        mult.set(1, 1, 2);
        let broken = FiniteAlgebra::new(
            "broken",
            g.element_names().to_vec(),
            g.table(crate::algebra::Op::Meet).clone(),
            g.table(crate::algebra::Op::Join).clone(),
            mult,
            g.table(crate::algebra::Op::Res).clone(),
            2,
            Some(0),
        )
        .unwrap();
        let report = validate(&broken);
        assert!(!report.is_ok());
        let v = report.find("integrality").expect("integrality violated");
        assert_eq!(v.witness, vec![1, 1]);
        assert!(report.find("residuation").is_some());
    }

    #[test]
    fn witnesses_are_first_in_lexicographic_order() {
        // a meet table that is not commutative at (0,1) and (1,2)
        let meet = Table::from_rows(&[vec![0, 0, 0], vec![1, 1, 1], vec![0, 2, 2]]).unwrap();
        let g = g3();
        let a = FiniteAlgebra::new(
            "m",
            g.element_names().to_vec(),
            meet,
            g.table(crate::algebra::Op::Join).clone(),
            g.table(crate::algebra::Op::Mult).clone(),
            g.table(crate::algebra::Op::Res).clone(),
            2,
            Some(0),
        )
        .unwrap();
        let v = validate(&a);
        assert_eq!(v.find("meet-commutative").unwrap().witness, vec![0, 1]);
    }
}

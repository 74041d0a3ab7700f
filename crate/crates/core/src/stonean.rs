//! Stonean algebras: the Stone equation `¬x ∨ ¬¬x = ⊤`, its equivalent forms,
//! the bottom adjunction `S(A)`, and the decomposition `x = ¬¬x * (¬¬x → x)`.

use crate::algebra::{ElementId, FiniteAlgebra, Op, Table};
use crate::error::{Error, Result};
use crate::filters::{ifilter, quotient, ElementSet, FilterSet};
use crate::hom::{are_isomorphic, is_homomorphism, Hom, HomSearch};
use crate::report::{tuples, ValidationReport};

/// First `x` with `¬x ∨ ¬¬x ≠ ⊤`, if any.
pub fn stone_witness(a: &FiniteAlgebra) -> Result<Option<ElementId>> {
    let bot = a.require_bottom()?;
    let neg = |x| a.res(x, bot);
    Ok(a.elements().find(|&x| a.join(neg(x), neg(neg(x))) != a.top()))
}

pub fn is_stonean(a: &FiniteAlgebra) -> Result<bool> {
    Ok(stone_witness(a)?.is_none())
}

/// The three equivalent characterisations of Stonean algebras, evaluated
/// independently.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StoneanConditions {
    /// `¬x ∨ ¬¬x = ⊤` for all `x`.
    pub stone_equation: bool,
    /// `¬x ∧ x = ⊥` and `¬(x ∧ y) = ¬x ∨ ¬y` for all `x, y`.
    pub pseudo_de_morgan: bool,
    /// Every negation is Boolean.
    pub negations_boolean: bool,
    /// First witness of each failed condition.
    pub report: ValidationReport,
}

impl StoneanConditions {
    pub fn agree(&self) -> bool {
        self.stone_equation == self.pseudo_de_morgan && self.pseudo_de_morgan == self.negations_boolean
    }
}

/// Evaluates the three conditions and fails with an invariant error if they
/// disagree.
pub fn stonean_equivalence_battery(a: &FiniteAlgebra) -> Result<StoneanConditions> {
    let bot = a.require_bottom()?;
    let n = a.size();
    let neg = |x| a.res(x, bot);
    let booleans = a.boolean_elements()?;
    let mut report = ValidationReport::new();
    report.first_failure("stone-equation", tuples(n, 1), |w| {
        a.join(neg(w[0]), neg(neg(w[0]))) == a.top()
    });
    report.first_failure("pseudocomplement", tuples(n, 1), |w| a.meet(neg(w[0]), w[0]) == bot);
    report.first_failure("de-morgan-meet", tuples(n, 2), |w| {
        neg(a.meet(w[0], w[1])) == a.join(neg(w[0]), neg(w[1]))
    });
    report.first_failure("negations-boolean", tuples(n, 1), |w| booleans.contains(neg(w[0])));
    let conditions = StoneanConditions {
        stone_equation: report.find("stone-equation").is_none(),
        pseudo_de_morgan: report.find("pseudocomplement").is_none()
            && report.find("de-morgan-meet").is_none(),
        negations_boolean: report.find("negations-boolean").is_none(),
        report,
    };
    if !conditions.agree() {
        return Err(Error::Invariant(format!(
            "Stonean characterisations disagree on {}: {:?}",
            a.name(),
            conditions.report
        )));
    }
    Ok(conditions)
}

/// `S(A)`: a fresh bottom `o` placed after the elements of `A`, which keep their
/// indices. `x * o = o`, `x → o = o` for `x ∈ A`, `o → y = ⊤`.
pub fn adjoin_bottom(a: &FiniteAlgebra) -> FiniteAlgebra {
    let n = a.size();
    let o = n;
    let in_a = |x: usize| x < n;
    let table = |op: Op| {
        Table::from_fn(n + 1, |x, y| match (in_a(x), in_a(y)) {
            (true, true) => a.apply(op, x, y),
            _ => match op {
                Op::Meet | Op::Mult => o,
                Op::Join => {
                    if in_a(x) {
                        x
                    } else {
                        y
                    }
                }
                Op::Res => {
                    if in_a(x) {
                        o
                    } else {
                        a.top()
                    }
                }
            },
        })
    };
    let mut names = a.element_names().to_vec();
    names.push(fresh_name(&names, "o"));
    FiniteAlgebra::new(
        format!("S({})", a.name()),
        names,
        table(Op::Meet),
        table(Op::Join),
        table(Op::Mult),
        table(Op::Res),
        a.top(),
        Some(o),
    )
    .expect("bottom adjunction is well formed")
}

fn fresh_name(taken: &[String], base: &str) -> String {
    std::iter::once(base.to_string())
        .chain((1..).map(|i| format!("{base}{i}")))
        .find(|c| !taken.contains(c))
        .expect("unbounded supply of names")
}

/// `S(h)`: extends a homomorphism `h: A → C` by `o ↦ o`.
pub fn lift_hom(src: &FiniteAlgebra, dst: &FiniteAlgebra, h: &[ElementId]) -> Result<Hom> {
    if !is_homomorphism(src, dst, h, false) {
        return Err(Error::Contract("lift_hom needs a homomorphism".into()));
    }
    let mut lifted = h.to_vec();
    lifted.push(dst.size());
    Ok(lifted)
}

/// Splits `x` as `(¬¬x, ¬¬x → x)`, a Boolean and a dense element.
///
/// Also checks that the dense part is the only dense element above `¬x` whose
/// product with `¬¬x` is `x`, and that no other Boolean element factors `x`.
pub fn decompose(a: &FiniteAlgebra, x: ElementId) -> Result<(ElementId, ElementId)> {
    a.check_element(x)?;
    if !is_stonean(a)? {
        return Err(Error::Precondition(format!("{} is not Stonean", a.name())));
    }
    let bot = a.require_bottom()?;
    let neg = |y| a.res(y, bot);
    let b = neg(neg(x));
    let d = a.res(b, x);
    let booleans = a.boolean_elements()?;
    let dense = a.dense_set()?;
    let fail = |what: &str| {
        Err(Error::Invariant(format!(
            "decomposition of {} in {}: {what}",
            a.element_name(x),
            a.name()
        )))
    };
    if !booleans.contains(b) || !dense.contains(d) {
        return fail("parts are not Boolean and dense");
    }
    if a.mult(b, d) != x || a.meet(b, d) != x || !a.leq(neg(x), d) {
        return fail("product does not recover the element");
    }
    let others = dense
        .iter()
        .filter(|&e| e != d && a.leq(neg(x), e) && a.mult(b, e) == x)
        .count();
    if others > 0 {
        return fail("dense part is not unique");
    }
    let forced = booleans
        .iter()
        .all(|c| c == b || dense.iter().all(|e| a.mult(c, e) != x));
    if !forced {
        return fail("Boolean part is not forced");
    }
    Ok((b, d))
}

/// `y ∨ (¬¬z ∧ x) = (y ∨ ¬¬z) ∧ (y ∨ x)` over all triples.
pub fn weak_distributivity_check(a: &FiniteAlgebra) -> Result<ValidationReport> {
    let bot = a.require_bottom()?;
    let nn = |z| a.res(a.res(z, bot), bot);
    let mut r = ValidationReport::new();
    r.first_failure("weak-distributivity", tuples(a.size(), 3), |w| {
        let (x, y, z) = (w[0], w[1], w[2]);
        a.join(y, a.meet(nn(z), x)) == a.meet(a.join(y, nn(z)), a.join(y, x))
    });
    Ok(r)
}

/// Both sides of `S(A/F) ≅ S(A)/F`.
#[derive(Clone, Debug)]
pub struct SQuotientCheck {
    pub lifted_quotient: FiniteAlgebra,
    pub quotient_of_lift: FiniteAlgebra,
    pub witness: Option<Hom>,
}

/// Builds `S(A/F)` and `S(A)/F` (with `F` read inside `S(A)`) and searches for
/// an isomorphism between them.
pub fn squotient_iso_check(a: &FiniteAlgebra, f: &FilterSet) -> Result<SQuotientCheck> {
    let base = a.without_bottom();
    let lifted_quotient = adjoin_bottom(&quotient(&base, f)?.quotient);
    let s = adjoin_bottom(&base);
    let inside = ifilter(&s, ElementSet::from_indices(s.size(), f.members.iter()))?;
    let quotient_of_lift = quotient(&s, &inside)?.quotient;
    let witness = are_isomorphic(&lifted_quotient, &quotient_of_lift);
    Ok(SQuotientCheck {
        lifted_quotient,
        quotient_of_lift,
        witness,
    })
}

/// Outcome of the search for retractions of `A` onto its Boolean skeleton.
#[derive(Clone, Debug)]
pub struct RetractionCheck {
    /// Set when the algebra is too large for exhaustive enumeration.
    pub skipped: bool,
    /// Every qualifying retraction, as maps into the carrier of `A`.
    pub retractions: Vec<Hom>,
    pub report: ValidationReport,
}

/// Largest algebra for which [`boolean_retraction_check`] enumerates maps.
pub const RETRACTION_LIMIT: usize = 8;

/// Enumerates the homomorphisms `h: A → B(A)` with `h ∘ h = h` and `x <= h(x)`
/// and checks that double negation is the only one.
pub fn boolean_retraction_check(a: &FiniteAlgebra) -> Result<RetractionCheck> {
    let bot = a.require_bottom()?;
    if !is_stonean(a)? {
        return Err(Error::Precondition(format!("{} is not Stonean", a.name())));
    }
    let mut report = ValidationReport::new();
    if a.size() > RETRACTION_LIMIT {
        return Ok(RetractionCheck {
            skipped: true,
            retractions: Vec::new(),
            report,
        });
    }
    let skel = a.boolean_skeleton()?;
    let double_neg: Hom = a.elements().map(|x| a.res(a.res(x, bot), bot)).collect();
    let retractions: Vec<Hom> = HomSearch::new(a, &skel.algebra)
        .all()
        .into_iter()
        .map(|h| h.iter().map(|&i| skel.embedding[i]).collect::<Hom>())
        .filter(|h| a.elements().all(|x| h[h[x]] == h[x] && a.leq(x, h[x])))
        .collect();
    if !retractions.contains(&double_neg) {
        report.push("double-negation-is-retraction", vec![]);
    }
    for h in &retractions {
        if let Some(x) = a.elements().find(|&x| h[x] != double_neg[x]) {
            report.push("retraction-is-double-negation", vec![x]);
        }
    }
    Ok(RetractionCheck {
        skipped: false,
        retractions,
        report,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{b2, b4, g3, h2, h2_squared, l3, validate, FiniteAlgebra};
    use crate::filters::{generate_ifilter, principal_lattice_filter};

    #[test]
    fn stone_equation_on_fixtures() {
        assert!(is_stonean(&g3()).unwrap());
        assert!(is_stonean(&b4()).unwrap());
        assert_eq!(stone_witness(&l3()).unwrap(), Some(1));
        let l3 = l3();
        // ¬a ∨ ¬¬a = a on the three-element MV-chain
        assert_eq!(l3.join(l3.neg(1).unwrap(), l3.neg(l3.neg(1).unwrap()).unwrap()), 1);
        assert!(matches!(is_stonean(&h2()), Err(Error::Unsupported(_))));
    }

    #[test]
    fn equivalence_battery() {
        for a in [g3(), b2()] {
            let c = stonean_equivalence_battery(&a).unwrap();
            assert!(c.stone_equation && c.pseudo_de_morgan && c.negations_boolean);
        }
        let c = stonean_equivalence_battery(&l3()).unwrap();
        assert!(!c.stone_equation && !c.pseudo_de_morgan && !c.negations_boolean);
        assert_eq!(c.report.find("stone-equation").unwrap().witness, vec![1]);
    }

    #[test]
    fn adjoining_a_bottom() {
        let s = adjoin_bottom(&h2());
        assert!(validate(&s).is_ok());
        assert!(are_isomorphic(&s, &g3()).is_some());
        assert_eq!(s.element_names(), &["d", "1", "o"]);

        let s1 = adjoin_bottom(&FiniteAlgebra::trivial(false));
        assert!(are_isomorphic(&s1, &b2()).is_some());

        let s4 = adjoin_bottom(&h2_squared());
        assert_eq!(s4.size(), 5);
        assert!(validate(&s4).is_ok());
        assert!(is_stonean(&s4).unwrap());
        assert!(s4.is_directly_indecomposable().unwrap());
        assert_eq!(s4.dense_set().unwrap().to_vec(), vec![0, 1, 2, 3]);

        // a bounded input still receives a new bottom
        let sg = adjoin_bottom(&g3());
        assert_eq!(sg.size(), 4);
        assert_eq!(sg.bottom(), Some(3));
        assert_eq!(sg.element_name(3), "o");
    }

    #[test]
    fn lifting_homomorphisms() {
        let h2 = h2();
        let s = adjoin_bottom(&h2);
        assert_eq!(lift_hom(&h2, &h2, &[0, 1]).unwrap(), vec![0, 1, 2]);

        let triv = FiniteAlgebra::trivial(false);
        let collapse = lift_hom(&h2, &triv, &[0, 0]).unwrap();
        assert_eq!(collapse, vec![0, 0, 1]);
        assert!(is_homomorphism(&s, &adjoin_bottom(&triv), &collapse, true));

        let sq = h2_squared();
        let first: Hom = sq.elements().map(|x| x / 2).collect();
        let lifted = lift_hom(&sq, &h2, &first).unwrap();
        assert!(is_homomorphism(&adjoin_bottom(&sq), &s, &lifted, true));

        assert!(matches!(lift_hom(&h2, &h2, &[1, 0]), Err(Error::Contract(_))));
    }

    #[test]
    fn decompositions() {
        let g3 = g3();
        assert_eq!(decompose(&g3, 1).unwrap(), (2, 1));
        assert_eq!(decompose(&g3, 0).unwrap(), (0, 2));
        let b4 = b4();
        assert_eq!(decompose(&b4, 1).unwrap(), (1, 3));
        assert!(matches!(decompose(&l3(), 1), Err(Error::Precondition(_))));
    }

    #[test]
    fn weak_distributivity() {
        for a in [g3(), b4(), adjoin_bottom(&h2_squared())] {
            assert!(weak_distributivity_check(&a).unwrap().is_ok());
        }
    }

    #[test]
    fn squotients() {
        let h2 = h2();
        let identity = generate_ifilter(&h2, &ElementSet::from_indices(2, []));
        let c = squotient_iso_check(&h2, &identity).unwrap();
        assert!(c.witness.is_some());
        assert!(are_isomorphic(&c.lifted_quotient, &g3()).is_some());

        let whole = generate_ifilter(&h2, &ElementSet::full(2));
        let c = squotient_iso_check(&h2, &whole).unwrap();
        assert!(c.witness.is_some());
        assert!(are_isomorphic(&c.quotient_of_lift, &b2()).is_some());

        let sq = h2_squared();
        let first = generate_ifilter(&sq, &principal_lattice_filter(&sq, 2).members);
        assert_eq!(first.to_vec(), vec![2, 3]);
        let c = squotient_iso_check(&sq, &first).unwrap();
        assert!(c.witness.is_some());
        assert!(are_isomorphic(&c.quotient_of_lift, &g3()).is_some());
    }

    #[test]
    fn retractions() {
        let c = boolean_retraction_check(&g3()).unwrap();
        assert_eq!(c.retractions, vec![vec![0, 2, 2]]);
        assert!(c.report.is_ok());
        for a in [b2(), b4()] {
            let c = boolean_retraction_check(&a).unwrap();
            assert_eq!(c.retractions, vec![crate::hom::identity(a.size())]);
        }
        let big = crate::algebra::boolean_algebra(4);
        assert!(boolean_retraction_check(&big).unwrap().skipped);
    }
}

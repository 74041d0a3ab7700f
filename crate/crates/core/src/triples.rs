//! Triples `(B, D, φ)`, where `φ` is a bounded lattice homomorphism from the
//! Boolean algebra `B` into the i-filters of `D`.
//!
//! Includes the functor `T` on algebras and homomorphisms, triple morphisms,
//! reconstruction of algebra homomorphisms from triple morphisms, the bridge to
//! product triples `(B, C, ∨_e)`, and a text format.

use crate::algebra::{parse_algebra_lines, write_algebra, ElementId, FiniteAlgebra, LineReader, Subalgebra};
use crate::error::{Error, Result};
use crate::filters::{
    all_ifilters, generate_ifilter, is_central_filter, is_ifilter, rho, ElementSet, FilterKind,
    FilterSet,
};
use crate::hom::{hom_report, inverse, is_homomorphism, Hom};
use crate::report::{tuples, ValidationReport};
use crate::stonean::is_stonean;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Triple {
    pub name: String,
    pub b: FiniteAlgebra,
    pub d: FiniteAlgebra,
    /// `phi[a]` is the i-filter of `D` assigned to the element `a` of `B`.
    pub phi: Vec<FilterSet>,
}

/// A pair of maps `h: B₁ → B₂`, `k: D₁ → D₂`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TripleMorphism {
    pub h: Hom,
    pub k: Hom,
}

impl TripleMorphism {
    pub fn identity(t: &Triple) -> Self {
        TripleMorphism {
            h: crate::hom::identity(t.b.size()),
            k: crate::hom::identity(t.d.size()),
        }
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &TripleMorphism) -> Self {
        TripleMorphism {
            h: crate::hom::compose(&self.h, &next.h),
            k: crate::hom::compose(&self.k, &next.k),
        }
    }
}

impl Triple {
    /// Builds a triple from `phi` given as member lists.
    pub fn new(
        name: impl Into<String>,
        b: FiniteAlgebra,
        d: FiniteAlgebra,
        phi: Vec<Vec<ElementId>>,
    ) -> Result<Self> {
        let n = d.size();
        let phi = phi
            .into_iter()
            .map(|members| {
                if let Some(&x) = members.iter().find(|&&x| x >= n) {
                    return Err(Error::out_of_range(x, n));
                }
                Ok(FilterSet {
                    members: ElementSet::from_indices(n, members),
                    kind: FilterKind::Implicative,
                })
            })
            .collect::<Result<_>>()?;
        Ok(Triple {
            name: name.into(),
            b,
            d,
            phi,
        })
    }

    pub fn phi(&self, a: ElementId) -> &FilterSet {
        &self.phi[a]
    }
}

/// Checks the object axioms: `B` Boolean, `D` a residuated lattice, every
/// `φ(a)` an i-filter, and `φ` a lattice homomorphism with `φ(⊥) = {⊤}` and
/// `φ(⊤) = D`.
pub fn validate_triple(t: &Triple) -> ValidationReport {
    let mut r = ValidationReport::new();
    let (b, d) = (&t.b, &t.d);
    if !crate::algebra::validate(b).is_ok() {
        r.push("B-valid", vec![]);
    }
    match b.boolean_elements() {
        Ok(s) if s.len() == b.size() => {}
        _ => r.push("B-boolean", vec![]),
    }
    if !crate::algebra::validate(d).is_ok() {
        r.push("D-valid", vec![]);
    }
    if t.phi.len() != b.size() || t.phi.iter().any(|f| f.members.universe() != d.size()) {
        r.push("phi-shape", vec![]);
        return r;
    }
    if !r.is_ok() {
        return r;
    }
    let bot = b.bottom().expect("checked Boolean");
    r.first_failure("phi-ifilter", tuples(b.size(), 1), |w| {
        is_ifilter(d, &t.phi[w[0]].members)
    });
    if t.phi[bot].members != ElementSet::from_indices(d.size(), [d.top()]) {
        r.push("phi-bottom", vec![bot]);
    }
    if t.phi[b.top()].members != ElementSet::full(d.size()) {
        r.push("phi-top", vec![b.top()]);
    }
    r.first_failure("phi-meet", tuples(b.size(), 2), |w| {
        t.phi[b.meet(w[0], w[1])].members == t.phi[w[0]].members.intersection(&t.phi[w[1]].members)
    });
    r.first_failure("phi-join", tuples(b.size(), 2), |w| {
        let joined = t.phi[w[0]].members.union(&t.phi[w[1]].members);
        t.phi[b.join(w[0], w[1])].members == generate_ifilter(d, &joined).members
    });
    r
}

/// Checks M1 (Boolean homomorphism), M2 (residuated lattice homomorphism) and
/// M3 (`k(φ₁(a)) ⊆ φ₂(h(a))`). M3 is also checked in its quotient form
/// (`d ≡ e mod φ₁(a)` implies `k(d) ≡ k(e) mod φ₂(h(a))`) and the two forms must
/// agree.
pub fn validate_morphism(t1: &Triple, t2: &Triple, m: &TripleMorphism) -> ValidationReport {
    let mut r = ValidationReport::new();
    let m1 = hom_report(&t1.b, &t2.b, &m.h, true);
    if let Some(v) = m1.violations.first() {
        r.push("M1", v.witness.clone());
    }
    let m2 = hom_report(&t1.d, &t2.d, &m.k, false);
    if let Some(v) = m2.violations.first() {
        r.push("M2", v.witness.clone());
    }
    if !r.is_ok() {
        return r;
    }
    let (d1, d2) = (&t1.d, &t2.d);
    r.first_failure(
        "M3",
        tuples(t1.b.size(), 1).flat_map(|w| t1.phi[w[0]].members.iter().map(move |d| vec![w[0], d])),
        |w| t2.phi[m.h[w[0]]].contains(m.k[w[1]]),
    );
    r.first_failure("M3-quotient", tuples(t1.b.size(), 1).flat_map(|w| {
        tuples(d1.size(), 2).map(move |p| vec![w[0], p[0], p[1]])
    }), |w| {
        let (a, x, y) = (w[0], w[1], w[2]);
        !t1.phi[a].contains(d1.biresiduum(x, y))
            || t2.phi[m.h[a]].contains(d2.biresiduum(m.k[x], m.k[y]))
    });
    if r.find("M3").is_some() != r.find("M3-quotient").is_some() {
        r.push("M3-equivalence", vec![]);
    }
    r
}

/// A valid morphism whose components are bijections and with
/// `k(φ₁(a)) = φ₂(h(a))` for every `a`.
pub fn is_triple_iso(t1: &Triple, t2: &Triple, m: &TripleMorphism) -> bool {
    if !validate_morphism(t1, t2, m).is_ok() {
        return false;
    }
    if t1.b.size() != t2.b.size() || t1.d.size() != t2.d.size() {
        return false;
    }
    if inverse(&m.h).is_none() || inverse(&m.k).is_none() {
        return false;
    }
    t1.b.elements().all(|a| {
        t1.phi[a].members.image(t2.d.size(), |x| m.k[x]) == t2.phi[m.h[a]].members
    })
}

/// `T(A)` together with the inclusions of `B(A)` and `D(A)` into `A`.
#[derive(Clone, Debug)]
pub struct AlgebraTriple {
    pub triple: Triple,
    pub skeleton: Subalgebra,
    pub dense: Subalgebra,
}

impl AlgebraTriple {
    /// Element of `A` for the `B`-element `a`.
    pub fn boolean(&self, a: ElementId) -> ElementId {
        self.skeleton.embedding[a]
    }

    /// Element of `A` for the `D`-element `d`.
    pub fn dense(&self, d: ElementId) -> ElementId {
        self.dense.embedding[d]
    }
}

/// `T(A) = (B(A), D(A), φ_A)` with `φ_A(a) = [¬a) ∩ D(A)`.
pub fn functor_t_object(a: &FiniteAlgebra) -> Result<AlgebraTriple> {
    if !is_stonean(a)? {
        return Err(Error::Precondition(format!("{} is not Stonean", a.name())));
    }
    let bot = a.require_bottom()?;
    let skeleton = a.boolean_skeleton()?;
    let dense = a.dense_elements()?;
    let phi = skeleton
        .embedding
        .iter()
        .map(|&x| {
            let nx = a.res(x, bot);
            dense
                .embedding
                .iter()
                .enumerate()
                .filter(|&(_, &e)| a.leq(nx, e))
                .map(|(i, _)| i)
                .collect()
        })
        .collect();
    let triple = Triple::new(
        format!("T({})", a.name()),
        skeleton.algebra.clone(),
        dense.algebra.clone(),
        phi,
    )?;
    Ok(AlgebraTriple {
        triple,
        skeleton,
        dense,
    })
}

/// `T(f)`: the restrictions of `f` to the Boolean and dense parts.
pub fn functor_t_morphism(
    a1: &FiniteAlgebra,
    a2: &FiniteAlgebra,
    f: &[ElementId],
) -> Result<TripleMorphism> {
    if !is_homomorphism(a1, a2, f, true) {
        return Err(Error::Contract(
            "T on morphisms needs a bounded homomorphism".into(),
        ));
    }
    let (t1, t2) = (functor_t_object(a1)?, functor_t_object(a2)?);
    functor_t_morphism_between(&t1, &t2, f)
}

/// [`functor_t_morphism`] with both triples already computed.
pub fn functor_t_morphism_between(
    t1: &AlgebraTriple,
    t2: &AlgebraTriple,
    f: &[ElementId],
) -> Result<TripleMorphism> {
    let restrict = |from: &Subalgebra, to: &Subalgebra| -> Result<Hom> {
        from.embedding
            .iter()
            .map(|&x| {
                to.index_of(f[x]).ok_or_else(|| {
                    Error::Invariant("homomorphism leaves the Boolean or dense part".into())
                })
            })
            .collect()
    };
    let m = TripleMorphism {
        h: restrict(&t1.skeleton, &t2.skeleton)?,
        k: restrict(&t1.dense, &t2.dense)?,
    };
    let r = validate_morphism(&t1.triple, &t2.triple, &m);
    if !r.is_ok() {
        return Err(Error::Invariant(format!("T(f) is not a morphism: {r:?}")));
    }
    Ok(m)
}

/// `f(x) = h(¬¬x) * k(¬¬x → x)`, the algebra homomorphism induced by a triple
/// morphism `T(A₁) → T(A₂)`.
///
/// Checks that the value does not depend on the dense witness, that `f` is a
/// bounded homomorphism and that `T(f)` gives back `(h, k)`.
pub fn reconstruct_hom(
    a1: &FiniteAlgebra,
    a2: &FiniteAlgebra,
    m: &TripleMorphism,
) -> Result<Hom> {
    let (t1, t2) = (functor_t_object(a1)?, functor_t_object(a2)?);
    reconstruct_hom_between(a1, a2, &t1, &t2, m)
}

/// [`reconstruct_hom`] with both triples already computed.
pub fn reconstruct_hom_between(
    a1: &FiniteAlgebra,
    a2: &FiniteAlgebra,
    t1: &AlgebraTriple,
    t2: &AlgebraTriple,
    m: &TripleMorphism,
) -> Result<Hom> {
    let r = validate_morphism(&t1.triple, &t2.triple, m);
    if !r.is_ok() {
        return Err(Error::Precondition(format!("not a triple morphism: {r:?}")));
    }
    let bot = a1.require_bottom()?;
    let hh = |b: ElementId| t2.boolean(m.h[t1.skeleton.index_of(b).expect("Boolean")]);
    let kk = |d: ElementId| t2.dense(m.k[t1.dense.index_of(d).expect("dense")]);
    let f: Hom = a1
        .elements()
        .map(|x| {
            let b = a1.res(a1.res(x, bot), bot);
            a2.mult(hh(b), kk(a1.res(b, x)))
        })
        .collect();
    let transfer = lemma_checks_between(a1, a2, t1, t2, m);
    if transfer.find("cancellation-transfer").is_some() {
        return Err(Error::Invariant(
            "reconstructed map depends on the dense witness".into(),
        ));
    }
    if !is_homomorphism(a1, a2, &f, true) {
        return Err(Error::Invariant("reconstructed map is not a homomorphism".into()));
    }
    if functor_t_morphism_between(t1, t2, &f)? != *m {
        return Err(Error::Invariant("T(f) differs from the given morphism".into()));
    }
    Ok(f)
}

/// Checks, over `B(A₁) × D(A₁)`, that `a * d = a * e` implies
/// `h(a) * k(d) = h(a) * k(e)` and that `k(a ∨ d) = h(a) ∨ k(d)`. Witnesses are
/// elements of `A₁`.
pub fn lemma_checks(
    a1: &FiniteAlgebra,
    a2: &FiniteAlgebra,
    m: &TripleMorphism,
) -> Result<ValidationReport> {
    let (t1, t2) = (functor_t_object(a1)?, functor_t_object(a2)?);
    let r = validate_morphism(&t1.triple, &t2.triple, m);
    if !r.is_ok() {
        return Err(Error::Precondition(format!("not a triple morphism: {r:?}")));
    }
    Ok(lemma_checks_between(a1, a2, &t1, &t2, m))
}

fn lemma_checks_between(
    a1: &FiniteAlgebra,
    a2: &FiniteAlgebra,
    t1: &AlgebraTriple,
    t2: &AlgebraTriple,
    m: &TripleMorphism,
) -> ValidationReport {
    let nb = t1.skeleton.embedding.len();
    let nd = t1.dense.embedding.len();
    let mut r = ValidationReport::new();
    let hh = |i: usize| t2.boolean(m.h[i]);
    let kk = |j: usize| t2.dense(m.k[j]);
    r.first_failure(
        "cancellation-transfer",
        tuples(nb, 1).flat_map(|w| tuples(nd, 2).map(move |p| vec![w[0], p[0], p[1]])),
        |w| {
            let (a, d, e) = (t1.boolean(w[0]), t1.dense(w[1]), t1.dense(w[2]));
            a1.mult(a, d) != a1.mult(a, e) || a2.mult(hh(w[0]), kk(w[1])) == a2.mult(hh(w[0]), kk(w[2]))
        },
    );
    r.first_failure(
        "join-transfer",
        tuples(nb, 1).flat_map(|w| (0..nd).map(move |j| vec![w[0], j])),
        |w| match t1.dense.index_of(a1.join(t1.boolean(w[0]), t1.dense(w[1]))) {
            Some(j) => kk(j) == a2.join(hh(w[0]), kk(w[1])),
            None => false,
        },
    );
    for v in &mut r.violations {
        v.witness = vec![
            t1.boolean(v.witness[0]),
            t1.dense(v.witness[1]),
        ]
        .into_iter()
        .chain(v.witness.get(2).map(|&e| t1.dense(e)))
        .collect();
    }
    r
}

/// Every valid triple with the given `B` and `D`, in lexicographic order of
/// `φ` (as lists of filter positions in [`all_ifilters`] order).
pub fn enumerate_triples(b: &FiniteAlgebra, d: &FiniteAlgebra) -> Vec<Triple> {
    let filters = all_ifilters(d).filters;
    let name = format!("({},{})", b.name(), d.name());
    tuples(filters.len(), b.size())
        .filter_map(|choice| {
            let t = Triple {
                name: name.clone(),
                b: b.clone(),
                d: d.clone(),
                phi: choice.iter().map(|&i| filters[i].clone()).collect(),
            };
            validate_triple(&t).is_ok().then_some(t)
        })
        .collect()
}

/// The operator `∨_e : B × D → D` of a product triple, `table[b][d]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vee {
    pub table: Vec<Vec<ElementId>>,
}

impl Vee {
    pub fn apply(&self, b: ElementId, d: ElementId) -> ElementId {
        self.table[b][d]
    }
}

/// `b ∨_Q d = ρ_¬b(d)`, where `[d) ∩ φ(¬b) = [ρ_¬b(d))`.
///
/// Needs a distributive lattice reduct on `D` and every `φ(b)` central among the
/// lattice filters of `D`.
pub fn vee_from_phi(t: &Triple) -> Result<Vee> {
    if !t.d.is_distributive_lattice() {
        return Err(Error::Precondition(format!(
            "{} does not have a distributive lattice reduct",
            t.d.name()
        )));
    }
    let lattice_phi: Vec<FilterSet> = t
        .phi
        .iter()
        .map(|f| FilterSet {
            members: f.members.clone(),
            kind: FilterKind::Lattice,
        })
        .collect();
    for (b, f) in lattice_phi.iter().enumerate() {
        if is_central_filter(&t.d, f).is_none() {
            return Err(Error::Precondition(format!(
                "phi({}) is not a central filter",
                t.b.element_name(b)
            )));
        }
    }
    let table = t
        .b
        .elements()
        .map(|b| {
            let not_b = t.b.neg(b)?;
            t.d.elements()
                .map(|d| rho(&t.d, &lattice_phi[not_b], d))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Vee { table })
}

/// Checks `ρ_b(d) = ¬b ∨ d` (computed in `A`) for every `b ∈ B(A)`, `d ∈ D(A)`.
/// Witnesses are elements of `A`.
pub fn rho_matches_algebra(a: &FiniteAlgebra, ta: &AlgebraTriple) -> Result<ValidationReport> {
    let t = &ta.triple;
    let mut r = ValidationReport::new();
    for b in t.b.elements() {
        let g = FilterSet {
            members: t.phi[b].members.clone(),
            kind: FilterKind::Lattice,
        };
        for d in t.d.elements() {
            let z = ta.dense(rho(&t.d, &g, d)?);
            let expect = a.join(a.neg(ta.boolean(b))?, ta.dense(d));
            if z != expect {
                r.push("rho-is-negation-join", vec![ta.boolean(b), ta.dense(d)]);
                return Ok(r);
            }
        }
    }
    Ok(r)
}

fn axiom(axiom: &'static str, detail: String) -> Error {
    Error::ProductAxiom { axiom, detail }
}

/// Checks the product-triple axioms V1–V4 for `∨_e` on `B × C`.
pub fn check_product_axioms(b: &FiniteAlgebra, c: &FiniteAlgebra, vee: &Vee) -> Result<()> {
    let (nb, nc) = (b.size(), c.size());
    if vee.table.len() != nb || vee.table.iter().any(|row| row.len() != nc || row.iter().any(|&x| x >= nc)) {
        return Err(Error::Structure("vee table has the wrong shape".into()));
    }
    let v = |x, y| vee.apply(x, y);
    let bot = b.require_bottom()?;
    let name = |x: ElementId| b.element_name(x).to_string();
    for x in b.elements() {
        let row: Hom = c.elements().map(|y| v(x, y)).collect();
        if !is_homomorphism(c, c, &row, false) {
            return Err(axiom("V1", format!("{} ∨e - is not a homomorphism", name(x))));
        }
    }
    for y in c.elements() {
        for (x1, x2) in tuples(nb, 2).map(|w| (w[0], w[1])) {
            if v(b.meet(x1, x2), y) != c.meet(v(x1, y), v(x2, y))
                || v(b.join(x1, x2), y) != c.join(v(x1, y), v(x2, y))
            {
                return Err(axiom(
                    "V1",
                    format!("- ∨e {} is not a lattice morphism", c.element_name(y)),
                ));
            }
        }
    }
    for y in c.elements() {
        if v(bot, y) != y || v(b.top(), y) != c.top() {
            return Err(axiom("V2", format!("fails at {}", c.element_name(y))));
        }
    }
    for w in tuples(nb, 2) {
        let (x1, x2) = (w[0], w[1]);
        for p in tuples(nc, 2) {
            let (y1, y2) = (p[0], p[1]);
            let lhs = c.join(v(x1, y1), v(x2, y2));
            let mid = v(b.join(x1, x2), c.join(y1, y2));
            let rhs = v(x1, v(x2, c.join(y1, y2)));
            if lhs != mid || mid != rhs {
                return Err(axiom("V3", format!("fails at {}, {}", name(x1), name(x2))));
            }
        }
    }
    for x in b.elements() {
        let nx = b.neg(x)?;
        for p in tuples(nc, 2) {
            let (y1, y2) = (p[0], p[1]);
            if c.mult(v(x, y1), y2) != c.meet(v(nx, y2), v(x, c.mult(y1, y2))) {
                return Err(axiom("V4", format!("fails at {}", name(x))));
            }
        }
    }
    Ok(())
}

/// `φ_R(b) = { d : d = ¬b ∨_e d }` after checking V1–V4.
pub fn phi_from_vee(b: &FiniteAlgebra, c: &FiniteAlgebra, vee: &Vee) -> Result<Triple> {
    check_product_axioms(b, c, vee)?;
    let phi = b
        .elements()
        .map(|x| {
            let nx = b.neg(x)?;
            Ok(c.elements().filter(|&d| vee.apply(nx, d) == d).collect())
        })
        .collect::<Result<Vec<Vec<_>>>>()?;
    let t = Triple::new(format!("({},{})", b.name(), c.name()), b.clone(), c.clone(), phi)?;
    let r = validate_triple(&t);
    if !r.is_ok() {
        return Err(Error::Invariant(format!(
            "product triple does not give a triple: {r:?}"
        )));
    }
    Ok(t)
}

/// Text form: a `triple <name>` line, the two algebras, then one
/// `phi <b> : <indices>` line per element of `B`.
pub fn write_triple(t: &Triple) -> String {
    let mut out = format!("triple {}\n", t.name);
    out.push_str(&write_algebra(&t.b));
    out.push_str(&write_algebra(&t.d));
    for (i, f) in t.phi.iter().enumerate() {
        let idx: Vec<String> = f.members.iter().map(|x| x.to_string()).collect();
        out.push_str(&format!("phi {i} : {}\n", idx.join(" ")).replace(" \n", "\n"));
    }
    out
}

pub fn parse_triple(text: &str) -> Result<Triple> {
    let mut reader = LineReader::new(text);
    let (_, name) = reader.keyword("triple")?;
    let b = parse_algebra_lines(&mut reader)?;
    let d = parse_algebra_lines(&mut reader)?;
    let mut phi = Vec::with_capacity(b.size());
    for i in 0..b.size() {
        let (line, rest) = reader.keyword("phi")?;
        let bad = |message: String| Error::Format { line, message };
        let (idx, members) = rest
            .split_once(':')
            .ok_or_else(|| bad("expected `phi <b> : <indices>`".into()))?;
        if idx.trim().parse::<usize>().ok() != Some(i) {
            return Err(bad(format!("expected phi line for element {i}")));
        }
        let members = members
            .split_whitespace()
            .map(|t| t.parse::<usize>().map_err(|_| bad(format!("bad index {t:?}"))))
            .collect::<Result<Vec<_>>>()?;
        phi.push(members);
    }
    if let Some((line, rest)) = reader.next() {
        return Err(Error::Format {
            line,
            message: format!("unexpected trailing content {rest:?}"),
        });
    }
    Triple::new(name, b, d, phi)
}

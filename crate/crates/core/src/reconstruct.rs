//! From a triple back to a Stonean algebra.
//!
//! For a finite Boolean algebra the Stone space is its set of atoms with the
//! discrete topology, so every section is continuous and the algebra of global
//! sections is the product of the stalks `S(D/F_x)`, one per atom `x`, with
//! `F_x = φ(¬x)`.

use crate::algebra::{ElementId, FiniteAlgebra};
use crate::error::{Error, Result};
use crate::filters::{crt_solve, quotient, ElementSet, FilterSet, QuotientResult};
use crate::hom::{are_isomorphic, inverse, Hom};
use crate::report::ValidationReport;
use crate::stonean::adjoin_bottom;
use crate::triples::{
    functor_t_object, is_triple_iso, reconstruct_hom_between, validate_triple, AlgebraTriple,
    Triple, TripleMorphism,
};

fn require_boolean(b: &FiniteAlgebra) -> Result<ElementId> {
    let bot = b.bottom().ok_or_else(|| Error::Contract(format!("{} has no bottom", b.name())))?;
    if b.boolean_elements()?.len() != b.size() {
        return Err(Error::Contract(format!("{} is not Boolean", b.name())));
    }
    Ok(bot)
}

/// The atoms of a Boolean algebra in index order.
pub fn atoms_of(b: &FiniteAlgebra) -> Result<Vec<ElementId>> {
    let bot = require_boolean(b)?;
    let atoms: Vec<ElementId> = b
        .elements()
        .filter(|&x| x != bot && b.elements().all(|y| y == bot || y == x || !b.leq(y, x)))
        .collect();
    for x in b.elements() {
        let join = atoms
            .iter()
            .filter(|&&p| b.leq(p, x))
            .fold(bot, |acc, &p| b.join(acc, p));
        if join != x {
            return Err(Error::Invariant(format!(
                "{} is not the join of the atoms below it",
                b.element_name(x)
            )));
        }
    }
    Ok(atoms)
}

/// Stalk data per atom `x`: the filter `F_x = φ(¬x)`, the quotient `D/F_x` and
/// the stalk `S(D/F_x)`.
#[derive(Clone, Debug)]
pub struct StalkSystem {
    pub atoms: Vec<ElementId>,
    pub stalk_filters: Vec<FilterSet>,
    pub quotients: Vec<QuotientResult>,
    pub stalks: Vec<FiniteAlgebra>,
}

pub fn stalk_system(t: &Triple) -> Result<StalkSystem> {
    let atoms = atoms_of(&t.b)?;
    let mut stalk_filters = Vec::with_capacity(atoms.len());
    let mut quotients = Vec::with_capacity(atoms.len());
    let mut stalks = Vec::with_capacity(atoms.len());
    for &x in &atoms {
        let f = t.phi[t.b.neg(x)?].clone();
        let q = quotient(&t.d, &f)?;
        let stalk = adjoin_bottom(&q.quotient)
            .with_name(format!("S({}/F{})", t.d.name(), t.b.element_name(x)));
        stalk_filters.push(f);
        quotients.push(q);
        stalks.push(stalk);
    }
    Ok(StalkSystem {
        atoms,
        stalk_filters,
        quotients,
        stalks,
    })
}

/// The reconstructed algebra with the maps `h: B → A` and `k: D → A` (into the
/// carrier of `A`) and the same maps read as a triple isomorphism onto `T(A)`.
#[derive(Clone, Debug)]
pub struct GlobalSections {
    pub algebra: FiniteAlgebra,
    pub stalks: StalkSystem,
    pub h: Hom,
    pub k: Hom,
    pub triple_of_algebra: AlgebraTriple,
    pub morphism: TripleMorphism,
}

/// Product of the stalks over the atoms of `B`.
///
/// `h(a)` has `⊤` at the atoms below `a` and `o` elsewhere; `k(d)` is the tuple of
/// classes `d/F_x`. Fails unless `(h, k)` is a triple isomorphism
/// `t → T(A)`.
pub fn global_sections(t: &Triple) -> Result<GlobalSections> {
    if t.b.is_trivial() {
        return Err(Error::Unsupported(
            "global sections need a nontrivial Boolean algebra".into(),
        ));
    }
    let r = validate_triple(t);
    if !r.is_ok() {
        return Err(Error::Precondition(format!("invalid triple: {r:?}")));
    }
    let stalks = stalk_system(t)?;
    let factors: Vec<&FiniteAlgebra> = stalks.stalks.iter().collect();
    let algebra = FiniteAlgebra::product_of(&factors, format!("A({})", t.name))?;
    let encode = |coords: Vec<ElementId>| {
        coords
            .iter()
            .zip(&stalks.stalks)
            .fold(0, |acc, (&c, s)| acc * s.size() + c)
    };
    let h: Hom = t
        .b
        .elements()
        .map(|a| {
            encode(
                stalks
                    .atoms
                    .iter()
                    .zip(&stalks.stalks)
                    .map(|(&x, s)| if t.b.leq(x, a) { s.top() } else { s.bottom().unwrap() })
                    .collect(),
            )
        })
        .collect();
    let k: Hom = t
        .d
        .elements()
        .map(|d| encode(stalks.quotients.iter().map(|q| q.projection[d]).collect()))
        .collect();
    let ta = functor_t_object(&algebra)?;
    let lookup = |map: &Hom, sub: &crate::algebra::Subalgebra, what: &str| -> Result<Hom> {
        map.iter()
            .map(|&x| {
                sub.index_of(x).ok_or_else(|| {
                    Error::Invariant(format!("section {} is not {what}", algebra.element_name(x)))
                })
            })
            .collect()
    };
    let morphism = TripleMorphism {
        h: lookup(&h, &ta.skeleton, "Boolean")?,
        k: lookup(&k, &ta.dense, "dense")?,
    };
    if !is_triple_iso(t, &ta.triple, &morphism) {
        return Err(Error::Invariant(
            "sections do not give a triple isomorphism".into(),
        ));
    }
    Ok(GlobalSections {
        algebra,
        stalks,
        h,
        k,
        triple_of_algebra: ta,
        morphism,
    })
}

/// Checks `⋂ { F_x : x atom, x <= b } = φ(¬b)` for every `b`, with the empty
/// intersection read as `D`, and separately that all stalk filters meet in `{⊤}`.
pub fn intersection_property_check(t: &Triple) -> Result<ValidationReport> {
    let stalks = stalk_system(t)?;
    let n = t.d.size();
    let mut r = ValidationReport::new();
    for b in t.b.elements() {
        let meet = stalks
            .atoms
            .iter()
            .zip(&stalks.stalk_filters)
            .filter(|(&x, _)| t.b.leq(x, b))
            .fold(ElementSet::full(n), |acc, (_, f)| acc.intersection(&f.members));
        if meet != t.phi[t.b.neg(b)?].members {
            r.push("intersection", vec![b]);
        }
    }
    let all = stalks
        .stalk_filters
        .iter()
        .fold(ElementSet::full(n), |acc, f| acc.intersection(&f.members));
    if all != ElementSet::from_indices(n, [t.d.top()]) {
        r.push("global-intersection", vec![]);
    }
    Ok(r)
}

/// A single `d ∈ D` whose classes agree with `values` on the atoms `ys`.
///
/// `values[i]` is an element of the quotient `D/F_{ys[i]}`, given by its index.
pub fn section_extension(t: &Triple, ys: &[ElementId], values: &[ElementId]) -> Result<ElementId> {
    if ys.len() != values.len() {
        return Err(Error::Contract("one value per atom is needed".into()));
    }
    let stalks = stalk_system(t)?;
    let mut constraints = Vec::with_capacity(ys.len());
    for (&y, &v) in ys.iter().zip(values) {
        let i = stalks.atoms.iter().position(|&x| x == y).ok_or_else(|| {
            Error::Contract(format!("{} is not an atom", t.b.element_name(y)))
        })?;
        let q = &stalks.quotients[i];
        if v >= q.representatives.len() {
            return Err(Error::Precondition(format!(
                "value {v} at atom {} is not a dense stalk element",
                t.b.element_name(y)
            )));
        }
        constraints.push((q.representatives[v], stalks.stalk_filters[i].clone()));
    }
    crt_solve(&t.d, &constraints).map_err(|e| match e {
        Error::Infeasible(i, j) => Error::Invariant(format!(
            "partial section is not extendable (constraints {i} and {j})"
        )),
        other => other,
    })
}

/// `A → global_sections(T(A))` as an explicit isomorphism.
#[derive(Clone, Debug)]
pub struct RoundTrip {
    pub sections: GlobalSections,
    /// Isomorphism from `A` onto the reconstructed algebra.
    pub iso: Hom,
}

/// Runs `T` and the reconstruction on `a` and builds the isomorphism from the
/// triple isomorphism via `f(x) = h(¬¬x) * k(¬¬x → x)`. The witness is
/// cross-checked against an independent isomorphism search.
pub fn roundtrip(a: &FiniteAlgebra) -> Result<RoundTrip> {
    let ta = functor_t_object(a)?;
    let sections = global_sections(&ta.triple)?;
    let iso = reconstruct_hom_between(
        a,
        &sections.algebra,
        &ta,
        &sections.triple_of_algebra,
        &sections.morphism,
    )?;
    if inverse(&iso).is_none() || iso.len() != sections.algebra.size() {
        return Err(Error::Invariant("reconstructed map is not a bijection".into()));
    }
    if are_isomorphic(a, &sections.algebra).is_none() {
        return Err(Error::Invariant("isomorphism search disagrees".into()));
    }
    Ok(RoundTrip { sections, iso })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{b2, b4, boolean_algebra, g3, h2, h2_squared};
    use crate::hom::is_homomorphism;

    #[test]
    fn atoms() {
        assert_eq!(atoms_of(&b2()).unwrap(), vec![1]);
        assert_eq!(atoms_of(&b4()).unwrap(), vec![1, 2]);
        assert_eq!(atoms_of(&boolean_algebra(3)).unwrap(), vec![1, 2, 4]);
        assert!(matches!(atoms_of(&g3()), Err(Error::Contract(_))));
    }

    #[test]
    fn sections_of_g3() {
        let t = functor_t_object(&g3()).unwrap().triple;
        let gs = global_sections(&t).unwrap();
        assert_eq!(gs.stalks.atoms.len(), 1);
        assert_eq!(gs.stalks.stalk_filters[0].len(), 1);
        assert!(are_isomorphic(&gs.algebra, &g3()).is_some());
        assert!(intersection_property_check(&t).unwrap().is_ok());
    }

    /// `(B4, H2×H2, φ)` with each atom's complement sent to a coordinate filter.
    fn coordinate_triple() -> Triple {
        // H2×H2: (d,d)=0 (d,1)=1 (1,d)=2 (1,1)=3
        Triple::new(
            "coords",
            b4(),
            h2_squared(),
            vec![vec![3], vec![2, 3], vec![1, 3], vec![0, 1, 2, 3]],
        )
        .unwrap()
    }

    #[test]
    fn sections_of_coordinate_triple() {
        let t = coordinate_triple();
        assert!(validate_triple(&t).is_ok());
        let gs = global_sections(&t).unwrap();
        assert_eq!(gs.algebra.size(), 9);
        let g3 = g3();
        assert!(are_isomorphic(&gs.algebra, &g3.product(&g3).unwrap()).is_some());
        assert!(intersection_property_check(&t).unwrap().is_ok());
    }

    #[test]
    fn sections_over_trivial_d() {
        let t = functor_t_object(&b2()).unwrap().triple;
        let gs = global_sections(&t).unwrap();
        assert!(are_isomorphic(&gs.algebra, &b2()).is_some());
        let triv = functor_t_object(&FiniteAlgebra::trivial(true)).unwrap().triple;
        assert!(matches!(global_sections(&triv), Err(Error::Unsupported(_))));
    }

    #[test]
    fn extensions() {
        let t = functor_t_object(&g3()).unwrap().triple;
        // the single stalk quotient is D itself; its class of a is index 0
        assert_eq!(section_extension(&t, &[1], &[0]).unwrap(), 0);
        assert_eq!(section_extension(&t, &[], &[]).unwrap(), t.d.top());
        let t = coordinate_triple();
        // at the atom (0,1) the filter is {(d,1),(1,1)} and the quotient keeps the second coordinate
        let d = section_extension(&t, &[1], &[0]).unwrap();
        assert_eq!(d, 0);
        let d = section_extension(&t, &[1, 2], &[1, 0]).unwrap();
        // second coordinate 1 from the atom (0,1), first coordinate d from the atom (1,0)
        assert_eq!(d, 1);
    }

    #[test]
    fn roundtrips() {
        for a in [g3(), b2(), b4(), adjoin_bottom(&h2_squared()), adjoin_bottom(&h2())] {
            let rt = roundtrip(&a).unwrap();
            assert!(is_homomorphism(&a, &rt.sections.algebra, &rt.iso, true));
        }
    }
}

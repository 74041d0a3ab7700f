//! Implicative filters, lattice filters, congruence quotients, the Chinese
//! remainder solver and central lattice filters.

use std::fmt;

use bitvec::prelude::*;

use crate::algebra::{ElementId, FiniteAlgebra, Op, Table};
use crate::error::{Error, Result};

/// A subset of a carrier, stored as a bit vector.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ElementSet {
    bits: BitVec,
}

impl ElementSet {
    pub fn empty(n: usize) -> Self {
        ElementSet {
            bits: bitvec![0; n],
        }
    }

    pub fn full(n: usize) -> Self {
        ElementSet {
            bits: bitvec![1; n],
        }
    }

    pub fn from_indices(n: usize, xs: impl IntoIterator<Item = ElementId>) -> Self {
        let mut s = ElementSet::empty(n);
        for x in xs {
            s.insert(x);
        }
        s
    }

    pub fn from_predicate(n: usize, mut p: impl FnMut(ElementId) -> bool) -> Self {
        ElementSet {
            bits: (0..n).map(&mut p).collect(),
        }
    }

    pub fn universe(&self) -> usize {
        self.bits.len()
    }

    pub fn contains(&self, x: ElementId) -> bool {
        self.bits.get(x).is_some_and(|b| *b)
    }

    pub fn insert(&mut self, x: ElementId) -> bool {
        let was = self.bits[x];
        self.bits.set(x, true);
        !was
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.not_any()
    }

    pub fn iter(&self) -> impl Iterator<Item = ElementId> + '_ {
        self.bits.iter_ones()
    }

    pub fn to_vec(&self) -> Vec<ElementId> {
        self.iter().collect()
    }

    pub fn is_subset(&self, other: &ElementSet) -> bool {
        self.iter().all(|x| other.contains(x))
    }

    pub fn intersection(&self, other: &ElementSet) -> ElementSet {
        ElementSet {
            bits: self.bits.clone() & other.bits.clone(),
        }
    }

    pub fn union(&self, other: &ElementSet) -> ElementSet {
        ElementSet {
            bits: self.bits.clone() | other.bits.clone(),
        }
    }

    /// `{ f(x) : x in self }` inside a carrier of size `n`.
    pub fn image(&self, n: usize, f: impl Fn(ElementId) -> ElementId) -> ElementSet {
        ElementSet::from_indices(n, self.iter().map(f))
    }
}

impl fmt::Debug for ElementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FilterKind {
    Implicative,
    Lattice,
}

/// A filter of some algebra: an i-filter (closed under modus ponens) or a
/// lattice filter (upward closed and closed under meets).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FilterSet {
    pub members: ElementSet,
    pub kind: FilterKind,
}

impl FilterSet {
    pub fn contains(&self, x: ElementId) -> bool {
        self.members.contains(x)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn to_vec(&self) -> Vec<ElementId> {
        self.members.to_vec()
    }

    /// `<algebra name> <sorted indices>`.
    pub fn serialize(&self, algebra: &FiniteAlgebra) -> String {
        let idx: Vec<String> = self.members.iter().map(|x| x.to_string()).collect();
        format!("{} {}", algebra.name(), idx.join(" "))
    }

    fn sort_key(&self) -> (usize, Vec<ElementId>) {
        (self.len(), self.to_vec())
    }
}

pub fn is_ifilter(a: &FiniteAlgebra, s: &ElementSet) -> bool {
    s.contains(a.top())
        && s.iter().all(|x| {
            a.elements()
                .all(|y| !s.contains(a.res(x, y)) || s.contains(y))
        })
}

pub fn is_lattice_filter(a: &FiniteAlgebra, s: &ElementSet) -> bool {
    s.contains(a.top())
        && s.iter().all(|x| {
            a.elements().all(|y| {
                (!a.leq(x, y) || s.contains(y)) && (!s.contains(y) || s.contains(a.meet(x, y)))
            })
        })
}

/// Wraps `members` as an i-filter after checking closure.
pub fn ifilter(a: &FiniteAlgebra, members: ElementSet) -> Result<FilterSet> {
    if members.universe() != a.size() || !is_ifilter(a, &members) {
        return Err(Error::Contract(format!(
            "{members:?} is not an i-filter of {}",
            a.name()
        )));
    }
    Ok(FilterSet {
        members,
        kind: FilterKind::Implicative,
    })
}

/// The least i-filter containing `generators`: modus-ponens closure of
/// `generators ∪ {⊤}` computed by a worklist.
pub fn generate_ifilter(a: &FiniteAlgebra, generators: &ElementSet) -> FilterSet {
    let mut members = generators.clone();
    members.insert(a.top());
    let mut changed = true;
    while changed {
        changed = false;
        for y in a.elements() {
            if members.contains(y) {
                continue;
            }
            if members.iter().any(|x| members.contains(a.res(x, y))) {
                members.insert(y);
                changed = true;
            }
        }
    }
    FilterSet {
        members,
        kind: FilterKind::Implicative,
    }
}

/// `[x) = { y : x <= y }`.
pub fn principal_lattice_filter(a: &FiniteAlgebra, x: ElementId) -> FilterSet {
    FilterSet {
        members: ElementSet::from_predicate(a.size(), |y| a.leq(x, y)),
        kind: FilterKind::Lattice,
    }
}

/// The least lattice filter containing `generators` (and ⊤).
pub fn generate_lattice_filter(a: &FiniteAlgebra, generators: &ElementSet) -> FilterSet {
    let m = generators.iter().fold(a.top(), |acc, x| a.meet(acc, x));
    principal_lattice_filter(a, m)
}

/// A bounded lattice of filters with its meet and join tables.
#[derive(Clone, Debug)]
pub struct FilterLattice {
    pub filters: Vec<FilterSet>,
    pub meet: Table,
    pub join: Table,
}

impl FilterLattice {
    pub fn position(&self, f: &ElementSet) -> Option<usize> {
        self.filters.iter().position(|g| &g.members == f)
    }

    pub fn is_distributive(&self) -> bool {
        let n = self.filters.len();
        (0..n).all(|x| {
            (0..n).all(|y| {
                (0..n).all(|z| {
                    self.meet.get(x, self.join.get(y, z))
                        == self.join.get(self.meet.get(x, y), self.meet.get(x, z))
                })
            })
        })
    }
}

fn lattice_of(filters: Vec<FilterSet>, join: impl Fn(&ElementSet) -> ElementSet) -> FilterLattice {
    let mut filters = filters;
    filters.sort_by_key(FilterSet::sort_key);
    filters.dedup();
    let find = |s: &ElementSet| {
        filters
            .iter()
            .position(|f| &f.members == s)
            .expect("filter lattice is closed")
    };
    let n = filters.len();
    let meet = Table::from_fn(n, |i, j| {
        find(&filters[i].members.intersection(&filters[j].members))
    });
    let joins = Table::from_fn(n, |i, j| {
        find(&join(&filters[i].members.union(&filters[j].members)))
    });
    FilterLattice {
        filters,
        meet,
        join: joins,
    }
}

/// Every i-filter, ordered by size then members; meets are intersections,
/// joins are generated unions.
///
/// In a finite residuated lattice every i-filter is generated by a single
/// element, so the list is obtained from the principal ones.
pub fn all_ifilters(a: &FiniteAlgebra) -> FilterLattice {
    let n = a.size();
    let filters = a
        .elements()
        .map(|x| generate_ifilter(a, &ElementSet::from_indices(n, [x])))
        .collect();
    lattice_of(filters, |s| generate_ifilter(a, s).members)
}

/// Every lattice filter; in a finite lattice these are exactly the `[x)`.
pub fn all_lattice_filters(a: &FiniteAlgebra) -> FilterLattice {
    let filters = a.elements().map(|x| principal_lattice_filter(a, x)).collect();
    lattice_of(filters, |s| generate_lattice_filter(a, s).members)
}

/// The quotient `A/F` with its projection.
#[derive(Clone, Debug)]
pub struct QuotientResult {
    pub quotient: FiniteAlgebra,
    /// `projection[x]` is the class of `x`.
    pub projection: Vec<ElementId>,
    /// Least member of each class.
    pub representatives: Vec<ElementId>,
}

/// Quotient by the congruence `x θ y iff x ↔ y ∈ F`. Classes are ordered by
/// least member; each class is named after that member.
pub fn quotient(a: &FiniteAlgebra, filter: &FilterSet) -> Result<QuotientResult> {
    if filter.kind != FilterKind::Implicative || !is_ifilter(a, &filter.members) {
        return Err(Error::Contract("quotients need an i-filter".into()));
    }
    let n = a.size();
    let mut projection = vec![usize::MAX; n];
    let mut representatives = Vec::new();
    for x in a.elements() {
        if projection[x] != usize::MAX {
            continue;
        }
        let class = representatives.len();
        representatives.push(x);
        for y in x..n {
            if filter.contains(a.biresiduum(x, y)) {
                projection[y] = class;
            }
        }
    }
    let m = representatives.len();
    let table = |op: Op| {
        Table::from_fn(m, |i, j| {
            projection[a.apply(op, representatives[i], representatives[j])]
        })
    };
    let names = representatives
        .iter()
        .map(|&r| a.element_name(r).to_string())
        .collect();
    let quotient = FiniteAlgebra::new(
        format!("{}/F", a.name()),
        names,
        table(Op::Meet),
        table(Op::Join),
        table(Op::Mult),
        table(Op::Res),
        projection[a.top()],
        a.bottom().map(|b| projection[b]),
    )?;
    // the projection must be a homomorphism; a failure means F was not a congruence kernel
    for op in Op::ALL {
        for x in a.elements() {
            for y in a.elements() {
                if projection[a.apply(op, x, y)] != quotient.apply(op, projection[x], projection[y])
                {
                    return Err(Error::Invariant(format!(
                        "projection does not respect {} at ({x}, {y})",
                        op.keyword()
                    )));
                }
            }
        }
    }
    Ok(QuotientResult {
        quotient,
        projection,
        representatives,
    })
}

/// Finds `a` with `a/F_i = a_i/F_i` for every constraint.
///
/// Pairwise compatibility (`a_i ≡ a_j` modulo `F_i ∨ F_j`) is checked first and
/// the first failing pair is reported. Candidates are then tried in the order:
/// the given `a_i`, then every element by increasing index. An empty system is
/// solved by ⊤.
pub fn crt_solve(a: &FiniteAlgebra, constraints: &[(ElementId, FilterSet)]) -> Result<ElementId> {
    for (x, f) in constraints {
        a.check_element(*x)?;
        if f.kind != FilterKind::Implicative || !is_ifilter(a, &f.members) {
            return Err(Error::Contract("CRT constraints need i-filters".into()));
        }
    }
    for i in 0..constraints.len() {
        for j in i + 1..constraints.len() {
            let (ai, fi) = &constraints[i];
            let (aj, fj) = &constraints[j];
            let joined = generate_ifilter(a, &fi.members.union(&fj.members));
            if !joined.contains(a.biresiduum(*ai, *aj)) {
                return Err(Error::Infeasible(i, j));
            }
        }
    }
    let solves = |x: ElementId| {
        constraints
            .iter()
            .all(|(ai, fi)| fi.contains(a.biresiduum(x, *ai)))
    };
    if constraints.is_empty() {
        return Ok(a.top());
    }
    constraints
        .iter()
        .map(|(ai, _)| *ai)
        .chain(a.elements())
        .find(|&x| solves(x))
        .ok_or_else(|| Error::Invariant("compatible CRT system has no solution".into()))
}

/// If the lattice filter `g` is central, returns a complement `g'` such that
/// every lattice filter `F` satisfies `F = (F ∩ g) ∨ (F ∩ g') = (F ∨ g) ∩ (F ∨ g')`.
/// Checked against all lattice filters.
pub fn is_central_filter(a: &FiniteAlgebra, g: &FilterSet) -> Option<FilterSet> {
    if !is_lattice_filter(a, &g.members) {
        return None;
    }
    let lattice = all_lattice_filters(a);
    let join = |x: &ElementSet, y: &ElementSet| generate_lattice_filter(a, &x.union(y)).members;
    lattice
        .filters
        .iter()
        .find(|candidate| {
            let gc = &candidate.members;
            lattice.filters.iter().all(|f| {
                let f = &f.members;
                let lhs = join(&f.intersection(&g.members), &f.intersection(gc));
                let rhs = join(f, &g.members).intersection(&join(f, gc));
                &lhs == f && &rhs == f
            })
        })
        .cloned()
}

/// The unique `z` with `[d) ∩ g = [z)`.
pub fn rho(a: &FiniteAlgebra, g: &FilterSet, d: ElementId) -> Result<ElementId> {
    a.check_element(d)?;
    let cut = principal_lattice_filter(a, d)
        .members
        .intersection(&g.members);
    let mut found = cut
        .iter()
        .filter(|&z| principal_lattice_filter(a, z).members == cut);
    match (found.next(), found.next()) {
        (Some(z), None) => Ok(z),
        (Some(_), Some(_)) => Err(Error::Invariant(
            "principal generator of [d) ∩ G is not unique".into(),
        )),
        (None, _) => Err(Error::Contract(format!(
            "[{}) ∩ G is not a principal filter",
            a.element_name(d)
        ))),
    }
}

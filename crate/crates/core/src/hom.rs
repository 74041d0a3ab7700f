//! Homomorphism checks and searches, isomorphism search among them.
//!
//! Every search runs through [`HomSearch`]: a depth-first search that assigns
//! source elements in index order, tries targets in increasing index order and
//! closes each partial map under the four operations. Maps are therefore
//! produced in lexicographic order, and the first one found is the least.

use std::collections::BTreeMap;

use crate::algebra::{ElementId, FiniteAlgebra, Op};
use crate::report::{tuples, ValidationReport};

/// A map between carriers, `map[x]` is the image of `x`.
pub type Hom = Vec<ElementId>;

const UNSET: usize = usize::MAX;

/// Checks that `map` preserves the four operations and ⊤, and ⊥ when
/// `preserve_bottom` is set.
pub fn is_homomorphism(
    src: &FiniteAlgebra,
    dst: &FiniteAlgebra,
    map: &[ElementId],
    preserve_bottom: bool,
) -> bool {
    hom_report(src, dst, map, preserve_bottom).is_ok()
}

/// Like [`is_homomorphism`] but names each failed preservation law with its first
/// witness.
pub fn hom_report(
    src: &FiniteAlgebra,
    dst: &FiniteAlgebra,
    map: &[ElementId],
    preserve_bottom: bool,
) -> ValidationReport {
    let mut r = ValidationReport::new();
    if map.len() != src.size() || map.iter().any(|&y| y >= dst.size()) {
        r.push("map-shape", vec![]);
        return r;
    }
    for op in Op::ALL {
        r.first_failure(
            &format!("preserves-{}", op.keyword()),
            tuples(src.size(), 2),
            |w| map[src.apply(op, w[0], w[1])] == dst.apply(op, map[w[0]], map[w[1]]),
        );
    }
    if map[src.top()] != dst.top() {
        r.push("preserves-top", vec![src.top()]);
    }
    if preserve_bottom {
        match (src.bottom(), dst.bottom()) {
            (Some(a), Some(b)) if map[a] == b => {}
            (Some(a), _) => r.push("preserves-bottom", vec![a]),
            (None, _) => r.push("preserves-bottom", vec![]),
        }
    }
    r
}

pub fn identity(n: usize) -> Hom {
    (0..n).collect()
}

/// `g ∘ f`.
pub fn compose(f: &[ElementId], g: &[ElementId]) -> Hom {
    f.iter().map(|&y| g[y]).collect()
}

/// Inverse of a bijection of `0..map.len()`.
pub fn inverse(map: &[ElementId]) -> Option<Hom> {
    let mut inv = vec![UNSET; map.len()];
    for (x, &y) in map.iter().enumerate() {
        if y >= map.len() || inv[y] != UNSET {
            return None;
        }
        inv[y] = x;
    }
    Some(inv)
}

/// Configurable search for homomorphisms `src → dst`.
#[derive(Clone)]
pub struct HomSearch<'a> {
    src: &'a FiniteAlgebra,
    dst: &'a FiniteAlgebra,
    injective: bool,
    preserve_bottom: bool,
    fixed: Vec<(ElementId, ElementId)>,
    colours: Option<(Vec<u32>, Vec<u32>)>,
}

struct State {
    map: Vec<usize>,
    preimage: Vec<usize>,
    trail: Vec<usize>,
}

impl<'a> HomSearch<'a> {
    /// Bottom preservation defaults to on when both algebras are bounded.
    pub fn new(src: &'a FiniteAlgebra, dst: &'a FiniteAlgebra) -> Self {
        HomSearch {
            src,
            dst,
            injective: false,
            preserve_bottom: src.is_bounded() && dst.is_bounded(),
            fixed: Vec::new(),
            colours: None,
        }
    }

    pub fn injective(mut self) -> Self {
        self.injective = true;
        self
    }

    pub fn preserve_bottom(mut self, yes: bool) -> Self {
        self.preserve_bottom = yes;
        self
    }

    /// Forces `x ↦ y`.
    pub fn fix(mut self, x: ElementId, y: ElementId) -> Self {
        self.fixed.push((x, y));
        self
    }

    /// Least homomorphism in lexicographic order, if any.
    pub fn first(&self) -> Option<Hom> {
        let mut found = None;
        self.for_each(|m| {
            found = Some(m.to_vec());
            false
        });
        found
    }

    /// Every homomorphism, in lexicographic order.
    pub fn all(&self) -> Vec<Hom> {
        let mut out = Vec::new();
        self.for_each(|m| {
            out.push(m.to_vec());
            true
        });
        out
    }

    /// Calls `visit` on each homomorphism in lexicographic order until it
    /// returns `false`.
    pub fn for_each(&self, mut visit: impl FnMut(&[ElementId]) -> bool) {
        if self.preserve_bottom && !(self.src.is_bounded() && self.dst.is_bounded()) {
            return;
        }
        let mut st = State {
            map: vec![UNSET; self.src.size()],
            preimage: vec![UNSET; self.dst.size()],
            trail: Vec::new(),
        };
        let mut seeds = vec![(self.src.top(), self.dst.top())];
        if self.preserve_bottom {
            seeds.push((self.src.bottom().unwrap(), self.dst.bottom().unwrap()));
        }
        seeds.extend(self.fixed.iter().copied());
        for (x, y) in seeds {
            if x >= self.src.size() || y >= self.dst.size() || !self.set(&mut st, x, y) {
                return;
            }
        }
        if !self.propagate(&mut st, 0) {
            return;
        }
        self.dfs(&mut st, 0, &mut visit);
    }

    fn dfs(&self, st: &mut State, from: usize, visit: &mut dyn FnMut(&[ElementId]) -> bool) -> bool {
        let Some(x) = (from..self.src.size()).find(|&x| st.map[x] == UNSET) else {
            return visit(&st.map);
        };
        for y in 0..self.dst.size() {
            let mark = st.trail.len();
            if self.set(st, x, y) && self.propagate(st, mark) && !self.dfs(st, x + 1, visit) {
                return false;
            }
            self.undo(st, mark);
        }
        true
    }

    fn set(&self, st: &mut State, x: usize, y: usize) -> bool {
        if st.map[x] != UNSET {
            return st.map[x] == y;
        }
        if let Some((cs, cd)) = &self.colours {
            if cs[x] != cd[y] {
                return false;
            }
        }
        if self.injective {
            if st.preimage[y] != UNSET {
                return false;
            }
            st.preimage[y] = x;
        }
        st.map[x] = y;
        st.trail.push(x);
        true
    }

    /// Closes the map under the operations, starting from trail position `head`.
    fn propagate(&self, st: &mut State, mut head: usize) -> bool {
        let (s, d) = (self.src, self.dst);
        while head < st.trail.len() {
            let x = st.trail[head];
            head += 1;
            let mut i = 0;
            while i < st.trail.len() {
                let z = st.trail[i];
                i += 1;
                let (mx, mz) = (st.map[x], st.map[z]);
                for op in Op::ALL {
                    if !self.set(st, s.apply(op, x, z), d.apply(op, mx, mz))
                        || !self.set(st, s.apply(op, z, x), d.apply(op, mz, mx))
                    {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn undo(&self, st: &mut State, mark: usize) {
        while st.trail.len() > mark {
            let x = st.trail.pop().unwrap();
            if self.injective {
                st.preimage[st.map[x]] = UNSET;
            }
            st.map[x] = UNSET;
        }
    }
}

/// All homomorphisms `src → dst`, bottom-preserving when both are bounded.
pub fn homomorphisms(src: &FiniteAlgebra, dst: &FiniteAlgebra) -> Vec<Hom> {
    HomSearch::new(src, dst).all()
}

/// The lexicographically least isomorphism `a → b`, if one exists.
pub fn are_isomorphic(a: &FiniteAlgebra, b: &FiniteAlgebra) -> Option<Hom> {
    if a.size() != b.size() || a.is_bounded() != b.is_bounded() {
        return None;
    }
    let (ca, cb) = joint_colours(a, b);
    let mut sa = ca.clone();
    let mut sb = cb.clone();
    sa.sort_unstable();
    sb.sort_unstable();
    if sa != sb {
        return None;
    }
    let mut search = HomSearch::new(a, b).injective();
    search.colours = Some((ca, cb));
    search.first()
}

/// Numbers the distinct signatures of both lists with one shared palette.
fn palette<S: Ord>(sa: &[S], sb: &[S]) -> (Vec<u32>, Vec<u32>, usize) {
    let mut ids = BTreeMap::new();
    for s in sa.iter().chain(sb) {
        let next = ids.len() as u32;
        ids.entry(s).or_insert(next);
    }
    let ca = sa.iter().map(|s| ids[s]).collect();
    let cb = sb.iter().map(|s| ids[s]).collect();
    (ca, cb, ids.len())
}

/// Colour refinement run on both algebras with a shared palette, so equal
/// colours are comparable across them. Isomorphisms preserve colours.
fn joint_colours(a: &FiniteAlgebra, b: &FiniteAlgebra) -> (Vec<u32>, Vec<u32>) {
    let initial = |alg: &FiniteAlgebra| -> Vec<(bool, bool, usize, usize)> {
        alg.elements()
            .map(|x| {
                let down = alg.elements().filter(|&y| alg.leq(y, x)).count();
                let up = alg.elements().filter(|&y| alg.leq(x, y)).count();
                (x == alg.top(), Some(x) == alg.bottom(), down, up)
            })
            .collect()
    };
    let (ia, ib) = (initial(a), initial(b));
    let (mut ca, mut cb, mut classes) = palette(&ia, &ib);
    loop {
        let refine = |alg: &FiniteAlgebra, c: &[u32]| -> Vec<(u32, Vec<(u8, u32, u32)>)> {
            alg.elements()
                .map(|x| {
                    let mut around: Vec<(u8, u32, u32)> = Vec::with_capacity(5 * alg.size());
                    for y in alg.elements() {
                        for (k, op) in Op::ALL.iter().enumerate() {
                            around.push((k as u8, c[y], c[alg.apply(*op, x, y)]));
                        }
                        around.push((4, c[y], c[alg.res(y, x)]));
                    }
                    around.sort_unstable();
                    (c[x], around)
                })
                .collect()
        };
        let (ra, rb) = (refine(a, &ca), refine(b, &cb));
        let (na, nb, n) = palette(&ra, &rb);
        if n == classes {
            return (ca, cb);
        }
        ca = na;
        cb = nb;
        classes = n;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{b2, b4, boolean_algebra, g3, g4, goedel_hoop, h2, h2_squared, l3};

    /// Homomorphisms by trying every map.
    fn brute_homs(src: &FiniteAlgebra, dst: &FiniteAlgebra, bottom: bool) -> Vec<Hom> {
        tuples(dst.size(), src.size())
            .filter(|m| is_homomorphism(src, dst, m, bottom))
            .collect()
    }

    #[test]
    fn enumeration_matches_brute_force() {
        let algs = [b2(), b4(), g3(), g4(), l3()];
        for s in &algs {
            for d in &algs {
                assert_eq!(homomorphisms(s, d), brute_homs(s, d, true), "{} -> {}", s.name(), d.name());
            }
        }
        let hoops = [h2(), goedel_hoop(3), h2_squared()];
        for s in &hoops {
            for d in &hoops {
                assert_eq!(homomorphisms(s, d), brute_homs(s, d, false));
            }
        }
    }

    #[test]
    fn isomorphism_examples() {
        let b4 = b4();
        let b2 = b2();
        let prod = b2.product(&b2).unwrap();
        let w = are_isomorphic(&b4, &prod).unwrap();
        assert!(is_homomorphism(&b4, &prod, &w, true));
        assert!(are_isomorphic(&g3(), &b4).is_none());
        assert!(are_isomorphic(&g3(), &l3()).is_none());
        assert_eq!(are_isomorphic(&g4(), &g4()).unwrap(), identity(4));
    }

    #[test]
    fn witness_is_lexicographically_least() {
        let b8 = boolean_algebra(3);
        let all: Vec<Hom> = HomSearch::new(&b8, &b8).injective().all();
        assert_eq!(all.len(), 6);
        assert_eq!(are_isomorphic(&b8, &b8).unwrap(), all[0]);
    }

    #[test]
    fn isomorphism_is_symmetric() {
        let a = h2_squared();
        let b = h2().product(&h2()).unwrap();
        let f = are_isomorphic(&a, &b).unwrap();
        let g = are_isomorphic(&b, &a).unwrap();
        assert_eq!(compose(&f, &g), identity(4));
        assert_eq!(inverse(&f).unwrap(), g);
    }

    #[test]
    fn fixed_points_constrain_search() {
        let g3 = g3();
        let b2 = b2();
        // G3 → B2 sending a to 1 is the only one with that value; a ↦ 0 is none
        assert_eq!(HomSearch::new(&g3, &b2).fix(1, 1).all(), vec![vec![0, 1, 1]]);
        assert!(HomSearch::new(&g3, &b2).fix(1, 0).all().is_empty());
    }

    #[test]
    fn reports_name_the_failed_operation() {
        let g3 = g3();
        let r = hom_report(&g3, &g3, &[0, 0, 2], true);
        assert!(r.find("preserves-res").is_some());
        assert!(r.find("preserves-meet").is_none());
    }
}

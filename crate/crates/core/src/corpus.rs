//! Enumeration of small residuated lattices up to isomorphism.
//!
//! Lattices come first, as partial orders on `0..n` refining the index order
//! with `0` least and `n - 1` greatest. For each lattice the product table is
//! filled by backtracking over the cells between inner elements, and the
//! residuum is derived. Survivors are reduced to a canonical form: the
//! lexicographically least `(meet, mult)` tables over all relabelings fixing
//! the bounds.

use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::algebra::{ElementId, FiniteAlgebra, Table};
use crate::error::{Error, Result};
use crate::stonean::is_stonean;

/// Largest size the enumerator accepts at all.
pub const HARD_LIMIT: usize = 7;
pub const DEFAULT_LIMIT: usize = 6;

/// Size limit from `STONEAN_LAB_LIMIT`, else [`DEFAULT_LIMIT`].
pub fn configured_limit() -> usize {
    std::env::var("STONEAN_LAB_LIMIT")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_LIMIT)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Constraints {
    pub bounded: bool,
    pub stonean: bool,
    pub distributive: bool,
}

impl Default for Constraints {
    fn default() -> Self {
        Constraints {
            bounded: true,
            stonean: false,
            distributive: false,
        }
    }
}

impl Constraints {
    pub fn bounded() -> Self {
        Self::default()
    }

    pub fn stonean() -> Self {
        Constraints {
            stonean: true,
            ..Self::default()
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct Options {
    pub constraints: Constraints,
    /// Randomizes the processing order and the labeling of each lattice.
    pub seed: Option<u64>,
    pub parallel: bool,
    /// Overrides [`configured_limit`].
    pub limit: Option<usize>,
}

/// Every residuated lattice with `2..=n_max` elements, one per isomorphism
/// class, sorted by size and canonical form.
pub fn enumerate(n_max: usize, constraints: Constraints) -> Result<Vec<FiniteAlgebra>> {
    enumerate_with(
        n_max,
        &Options {
            constraints,
            ..Options::default()
        },
    )
}

pub fn enumerate_with(n_max: usize, options: &Options) -> Result<Vec<FiniteAlgebra>> {
    let limit = options.limit.unwrap_or_else(configured_limit).min(HARD_LIMIT);
    if n_max > limit {
        return Err(Error::SizeLimit(format!(
            "enumeration up to size {n_max} exceeds the limit {limit} (set STONEAN_LAB_LIMIT, at most {HARD_LIMIT})"
        )));
    }
    let c = options.constraints;
    if c.stonean && !c.bounded {
        return Err(Error::Contract("Stonean algebras are bounded".into()));
    }
    let mut rng = options.seed.map(ChaCha8Rng::seed_from_u64);
    let mut out = Vec::new();
    for n in 2..=n_max {
        let mut lattices = lattices(n);
        if let Some(rng) = rng.as_mut() {
            lattices.shuffle(rng);
            for l in lattices.iter_mut() {
                let mut inner: Vec<usize> = (1..n - 1).collect();
                inner.shuffle(rng);
                let p: Vec<usize> = std::iter::once(0).chain(inner).chain([n - 1]).collect();
                *l = relabel_order(l, &p);
            }
        }
        let found: Vec<Key> = if options.parallel {
            lattices.par_iter().flat_map_iter(products).collect()
        } else {
            lattices.iter().flat_map(products).collect()
        };
        let classes: BTreeSet<Key> = found.into_iter().collect();
        for (i, key) in classes.iter().enumerate() {
            let a = build(n, key, format!("R{n}_{}", i + 1))?;
            if c.stonean && !is_stonean(&a)? {
                continue;
            }
            if c.distributive && !a.is_distributive_lattice() {
                continue;
            }
            out.push(if c.bounded { a } else { a.without_bottom() });
        }
    }
    Ok(out)
}

type Order = Vec<Vec<bool>>;

/// Canonical `(meet, mult)` cells.
type Key = (Vec<ElementId>, Vec<ElementId>);

fn relabel_order(leq: &Order, p: &[usize]) -> Order {
    let n = leq.len();
    let mut out = vec![vec![false; n]; n];
    for x in 0..n {
        for y in 0..n {
            out[p[x]][p[y]] = leq[x][y];
        }
    }
    out
}

fn meet_of(leq: &Order) -> Option<Vec<ElementId>> {
    let n = leq.len();
    let mut cells = Vec::with_capacity(n * n);
    for x in 0..n {
        for y in 0..n {
            let lower: Vec<usize> = (0..n).filter(|&z| leq[z][x] && leq[z][y]).collect();
            cells.push(*lower.iter().find(|&&m| lower.iter().all(|&z| leq[z][m]))?);
        }
    }
    Some(cells)
}

fn join_of(leq: &Order) -> Option<Vec<ElementId>> {
    let n = leq.len();
    let flipped: Order = (0..n).map(|x| (0..n).map(|y| leq[y][x]).collect()).collect();
    meet_of(&flipped)
}

/// Lattices on `n` points, one per isomorphism class.
fn lattices(n: usize) -> Vec<Order> {
    let inner: Vec<(usize, usize)> = (1..n - 1).tuple_combinations().collect();
    let mut seen = BTreeMap::new();
    for mask in 0u64..1 << inner.len() {
        let mut leq = vec![vec![false; n]; n];
        for x in 0..n {
            leq[x][x] = true;
            leq[0][x] = true;
            leq[x][n - 1] = true;
        }
        for (bit, &(x, y)) in inner.iter().enumerate() {
            leq[x][y] = mask >> bit & 1 == 1;
        }
        let transitive = (0..n)
            .cartesian_product(0..n)
            .all(|(x, y)| !leq[x][y] || (0..n).all(|z| !leq[y][z] || leq[x][z]));
        if !transitive || meet_of(&leq).is_none() || join_of(&leq).is_none() {
            continue;
        }
        let key = relabelings(n)
            .map(|p| relabel_order(&leq, &p))
            .min()
            .expect("at least one relabeling");
        seen.entry(key).or_insert(leq);
    }
    seen.into_values().collect()
}

/// Permutations of `0..n` fixing `0` and `n - 1`.
fn relabelings(n: usize) -> impl Iterator<Item = Vec<usize>> {
    (1..n - 1).permutations(n - 2).map(move |inner| {
        std::iter::once(0)
            .chain(inner)
            .chain(std::iter::once(n - 1))
            .collect()
    })
}

struct Search<'a> {
    n: usize,
    leq: &'a Order,
    meet: Vec<ElementId>,
    join: Vec<ElementId>,
    cells: Vec<(usize, usize)>,
    mult: Vec<Option<ElementId>>,
    found: Vec<Key>,
}

impl Search<'_> {
    fn get(&self, x: usize, y: usize) -> Option<ElementId> {
        self.mult[x * self.n + y]
    }

    fn put(&mut self, x: usize, y: usize, v: Option<ElementId>) {
        self.mult[x * self.n + y] = v;
        self.mult[y * self.n + x] = v;
    }

    /// Laws of a residuated product, checked on the cells assigned so far.
    fn consistent(&self, x: usize, y: usize, v: ElementId) -> bool {
        let n = self.n;
        let leq = self.leq;
        for a in 0..n {
            for b in 0..n {
                let Some(w) = self.get(a, b) else { continue };
                if leq[a][x] && leq[b][y] && !leq[w][v] {
                    return false;
                }
                if leq[x][a] && leq[y][b] && !leq[v][w] {
                    return false;
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                let Some(ab) = self.get(a, b) else { continue };
                for c in 0..n {
                    let (Some(l), Some(bc)) = (self.get(ab, c), self.get(b, c)) else { continue };
                    if let Some(r) = self.get(a, bc) {
                        if l != r {
                            return false;
                        }
                    }
                }
                for c in 0..n {
                    let bc = self.join[b * n + c];
                    if let (Some(l), Some(ac)) = (self.get(a, bc), self.get(a, c)) {
                        if l != self.join[ab * n + ac] {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    fn run(&mut self, i: usize) {
        let Some(&(x, y)) = self.cells.get(i) else {
            let mult: Vec<ElementId> = self.mult.iter().map(|v| v.expect("filled")).collect();
            self.found.push(canonical(self.n, &self.meet, &mult));
            return;
        };
        let bound = self.meet[x * self.n + y];
        for v in 0..self.n {
            if !self.leq[v][bound] {
                continue;
            }
            self.put(x, y, Some(v));
            if self.consistent(x, y, v) {
                self.run(i + 1);
            }
            self.put(x, y, None);
        }
    }
}

/// Canonical keys of all residuated products on the lattice `leq`.
fn products(leq: &Order) -> Vec<Key> {
    let n = leq.len();
    let meet = meet_of(leq).expect("lattice");
    let join = join_of(leq).expect("lattice");
    let mut mult = vec![None; n * n];
    for x in 0..n {
        mult[x * n + n - 1] = Some(x);
        mult[(n - 1) * n + x] = Some(x);
        mult[x] = Some(0);
        mult[x * n] = Some(0);
    }
    let cells = (1..n - 1)
        .flat_map(|y| (1..=y).map(move |x| (x, y)))
        .collect();
    let mut s = Search {
        n,
        leq,
        meet,
        join,
        cells,
        mult,
        found: Vec::new(),
    };
    s.run(0);
    s.found
}

fn canonical(n: usize, meet: &[ElementId], mult: &[ElementId]) -> Key {
    let permute = |t: &[ElementId], p: &[usize]| {
        let mut out = vec![0; n * n];
        for x in 0..n {
            for y in 0..n {
                out[p[x] * n + p[y]] = p[t[x * n + y]];
            }
        }
        out
    };
    relabelings(n)
        .map(|p| (permute(meet, &p), permute(mult, &p)))
        .min()
        .expect("at least one relabeling")
}

fn element_names(n: usize) -> Vec<String> {
    std::iter::once("0".to_string())
        .chain((0..n - 2).map(|i| ((b'a' + i as u8) as char).to_string()))
        .chain(std::iter::once("1".to_string()))
        .collect()
}

fn build(n: usize, key: &Key, name: String) -> Result<FiniteAlgebra> {
    let (meet, mult) = key;
    FiniteAlgebra::from_order(
        name,
        element_names(n),
        |x, y| meet[x * n + y] == x,
        Table::from_fn(n, |x, y| mult[x * n + y]),
        n - 1,
        Some(0),
    )
}

/// Size counts of an enumeration, in increasing size.
pub fn counts_by_size(algebras: &[FiniteAlgebra]) -> BTreeMap<usize, usize> {
    let mut out = BTreeMap::new();
    for a in algebras {
        *out.entry(a.size()).or_insert(0) += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{g3, l3, validate};
    use crate::hom::are_isomorphic;

    fn opts(seed: Option<u64>, parallel: bool) -> Options {
        Options {
            seed,
            parallel,
            limit: Some(HARD_LIMIT),
            ..Options::default()
        }
    }

    #[test]
    fn small_sizes() {
        let two = enumerate_with(2, &opts(None, false)).unwrap();
        assert_eq!(two.len(), 1);
        let three: Vec<_> = enumerate_with(3, &opts(None, false))
            .unwrap()
            .into_iter()
            .filter(|a| a.size() == 3)
            .collect();
        assert_eq!(three.len(), 2);
        assert!(three.iter().any(|a| are_isomorphic(a, &g3()).is_some()));
        assert!(three.iter().any(|a| are_isomorphic(a, &l3()).is_some()));
        let st: Vec<_> = enumerate(3, Constraints::stonean())
            .unwrap()
            .into_iter()
            .filter(|a| a.size() == 3)
            .collect();
        assert_eq!(st.len(), 1);
        assert!(are_isomorphic(&st[0], &g3()).is_some());
    }

    #[test]
    fn lattice_counts() {
        let counts: Vec<usize> = (2..=7).map(|n| lattices(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 5, 15, 53]);
    }

    /// All labeled lattices fixing the bounds, all commutative tables on the
    /// inner cells, kept when the laws hold, then deduplicated by search.
    fn brute_force(n: usize) -> Vec<FiniteAlgebra> {
        let inner: Vec<(usize, usize)> = (1..n - 1)
            .flat_map(|x| (1..n - 1).filter(move |&y| y != x).map(move |y| (x, y)))
            .collect();
        let cells: Vec<(usize, usize)> = (1..n - 1)
            .flat_map(|y| (1..=y).map(move |x| (x, y)))
            .collect();
        let mut classes: Vec<FiniteAlgebra> = Vec::new();
        for mask in 0u64..1 << inner.len() {
            let related = |x: usize, y: usize| {
                x == y
                    || x == 0
                    || y == n - 1
                    || inner
                        .iter()
                        .position(|&p| p == (x, y))
                        .is_some_and(|b| mask >> b & 1 == 1)
            };
            for values in (0..cells.len()).map(|_| 0..n).multi_cartesian_product() {
                let mut t = vec![vec![0; n]; n];
                for x in 0..n {
                    t[x][n - 1] = x;
                    t[n - 1][x] = x;
                }
                for (&(x, y), &v) in cells.iter().zip(&values) {
                    t[x][y] = v;
                    t[y][x] = v;
                }
                let Ok(a) = FiniteAlgebra::from_order(
                    "bf",
                    element_names(n),
                    related,
                    Table::from_rows(&t).unwrap(),
                    n - 1,
                    Some(0),
                ) else {
                    continue;
                };
                if validate(&a).is_ok() && !classes.iter().any(|c| are_isomorphic(c, &a).is_some()) {
                    classes.push(a);
                }
            }
        }
        classes
    }

    #[test]
    fn matches_brute_force() {
        let all = enumerate_with(5, &opts(None, false)).unwrap();
        for n in 2..=5 {
            let ours: Vec<_> = all.iter().filter(|a| a.size() == n).collect();
            let oracle = brute_force(n);
            assert_eq!(ours.len(), oracle.len(), "size {n}");
            for o in &oracle {
                assert_eq!(ours.iter().filter(|a| are_isomorphic(a, o).is_some()).count(), 1);
            }
        }
    }

    #[test]
    fn emitted_algebras_are_valid_and_distinct() {
        let all = enumerate_with(5, &opts(None, false)).unwrap();
        for (i, a) in all.iter().enumerate() {
            assert!(validate(a).is_ok(), "{}", a.name());
            for b in &all[..i] {
                assert!(are_isomorphic(a, b).is_none());
            }
        }
    }

    #[test]
    fn order_independent() {
        let base = enumerate_with(5, &opts(None, false)).unwrap();
        for seed in [1, 7, 42] {
            assert_eq!(enumerate_with(5, &opts(Some(seed), false)).unwrap(), base);
        }
        assert_eq!(enumerate_with(5, &opts(Some(3), true)).unwrap(), base);
    }

    #[test]
    fn filters_and_limits() {
        let all = enumerate_with(4, &opts(None, false)).unwrap();
        let unb = enumerate_with(
            4,
            &Options {
                constraints: Constraints {
                    bounded: false,
                    ..Constraints::default()
                },
                limit: Some(HARD_LIMIT),
                ..Options::default()
            },
        )
        .unwrap();
        assert_eq!(all.len(), unb.len());
        assert!(unb.iter().all(|a| !a.is_bounded()));
        assert!(matches!(
            enumerate_with(8, &opts(None, false)),
            Err(Error::SizeLimit(_))
        ));
        assert!(matches!(
            enumerate_with(5, &Options { limit: Some(4), ..Options::default() }),
            Err(Error::SizeLimit(_))
        ));
        let bad = Options {
            constraints: Constraints {
                bounded: false,
                stonean: true,
                distributive: false,
            },
            limit: Some(HARD_LIMIT),
            ..Options::default()
        };
        assert!(matches!(enumerate_with(3, &bad), Err(Error::Contract(_))));
        let dist = enumerate_with(
            4,
            &Options {
                constraints: Constraints {
                    distributive: true,
                    ..Constraints::default()
                },
                limit: Some(HARD_LIMIT),
                ..Options::default()
            },
        )
        .unwrap();
        assert!(dist.iter().all(FiniteAlgebra::is_distributive_lattice));
        assert_eq!(counts_by_size(&dist).values().sum::<usize>(), dist.len());
    }
}

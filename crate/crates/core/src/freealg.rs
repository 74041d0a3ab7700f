//! Finitely generated free algebras as products
//! `Free_V(n) ≅ ∏ₖ S(Free_{V*}(k))^C(n,k)`.
//!
//! The term closure inside a power of generating algebras gives an independent
//! construction to compare against.

use std::collections::HashMap;

use crate::algebra::{boolean_algebra, goedel_chain, goedel_hoop, ElementId, FiniteAlgebra, MixedRadix, Op, Table};
use crate::error::{Error, Result};
use crate::hom::{is_homomorphism, HomSearch};
use crate::report::{tuples, ValidationReport};
use crate::stonean::adjoin_bottom;
use crate::triples::{functor_t_object, is_triple_iso, validate_triple, AlgebraTriple, Triple, TripleMorphism};

pub const DEFAULT_SIZE_CAP: usize = 10_000;

/// `k_j = min { k : C(n,0) + … + C(n,k) ≥ j }` for `1 ≤ j ≤ 2ⁿ`.
pub fn k_index(n: usize, j: usize) -> Result<usize> {
    if n >= usize::BITS as usize - 1 || j == 0 || j > 1usize << n {
        return Err(Error::Contract(format!("j = {j} is outside 1..=2^{n}")));
    }
    let mut sum = 0;
    for k in 0..=n {
        sum += binomial(n, k);
        if sum >= j {
            return Ok(k);
        }
    }
    unreachable!("binomials sum to 2^n")
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k.min(n - k)).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// `(k₁, …, k_{2ⁿ})`.
pub fn k_sequence(n: usize) -> Result<Vec<usize>> {
    (1..=1usize << n).map(|j| k_index(n, j)).collect()
}

fn check_stalks(n: usize, stalks: &[FiniteAlgebra]) -> Result<()> {
    if stalks.len() != n + 1 {
        return Err(Error::Contract(format!(
            "expected {} stalk algebras for n = {n}, got {}",
            n + 1,
            stalks.len()
        )));
    }
    if n >= 1 && stalks[1..].iter().all(FiniteAlgebra::is_trivial) {
        return Err(Error::Precondition(
            "trivial stalks describe Boolean algebras; the free Boolean algebra on n generators is B2^(2^n)"
                .into(),
        ));
    }
    Ok(())
}

fn product_size(sizes: impl IntoIterator<Item = usize>, cap: usize) -> Result<usize> {
    let mut total = 1usize;
    for s in sizes {
        total = total
            .checked_mul(s)
            .filter(|&t| t <= cap)
            .ok_or_else(|| Error::SizeLimit(format!("product exceeds {cap} elements")))?;
    }
    Ok(total)
}

/// `∏_j S(stalks[k_j])`, factors in `j` order. `stalks[k]` is the free
/// `V*`-algebra on `k` generators.
pub fn assemble_free(n: usize, stalks: &[FiniteAlgebra]) -> Result<FiniteAlgebra> {
    assemble_free_capped(n, stalks, DEFAULT_SIZE_CAP)
}

pub fn assemble_free_capped(n: usize, stalks: &[FiniteAlgebra], cap: usize) -> Result<FiniteAlgebra> {
    check_stalks(n, stalks)?;
    let ks = k_sequence(n)?;
    product_size(ks.iter().map(|&k| stalks[k].size() + 1), cap)?;
    let lifted: Vec<FiniteAlgebra> = stalks.iter().map(|s| adjoin_bottom(&s.without_bottom())).collect();
    let factors: Vec<&FiniteAlgebra> = ks.iter().map(|&k| &lifted[k]).collect();
    FiniteAlgebra::product_of(&factors, format!("Free({n})"))
}

/// The triple `(B2^(2ⁿ), ∏_j stalks[k_j], φ)` with `φ(b)_j = {⊤}` when
/// `b_j = 0` and the whole factor when `b_j = 1`, along with an isomorphism
/// onto `T` of the assembled algebra.
#[derive(Clone, Debug)]
pub struct FreeTriple {
    pub triple: Triple,
    pub free: FiniteAlgebra,
    pub of_free: AlgebraTriple,
    pub witness: TripleMorphism,
}

pub fn triple_of_free(n: usize, stalks: &[FiniteAlgebra]) -> Result<FreeTriple> {
    let free = assemble_free(n, stalks)?;
    let ks = k_sequence(n)?;
    let width = ks.len();
    let dense: Vec<FiniteAlgebra> = ks.iter().map(|&k| stalks[k].without_bottom()).collect();
    let b = boolean_algebra(width);
    let d = FiniteAlgebra::product_of(&dense.iter().collect::<Vec<_>>(), format!("D({n})"))?;
    let b_radix = MixedRadix::new(vec![2; width]);
    let d_radix = MixedRadix::new(dense.iter().map(FiniteAlgebra::size).collect());
    let a_radix = MixedRadix::new(dense.iter().map(|f| f.size() + 1).collect());

    let phi = b
        .elements()
        .map(|x| {
            let bits = b_radix.digits(x);
            d.elements()
                .filter(|&e| {
                    let digits = d_radix.digits(e);
                    (0..width).all(|j| bits[j] == 1 || digits[j] == dense[j].top())
                })
                .collect()
        })
        .collect();
    let triple = Triple::new(format!("FreeTriple({n})"), b.clone(), d.clone(), phi)?;
    let report = validate_triple(&triple);
    if !report.is_ok() {
        return Err(Error::Invariant(format!(
            "free triple is invalid: {:?}",
            report.violations.first()
        )));
    }

    let of_free = functor_t_object(&free)?;
    let missing = || Error::Invariant("coordinate map leaves the expected part".into());
    let h = b
        .elements()
        .map(|x| {
            let coords: Vec<ElementId> = b_radix
                .digits(x)
                .iter()
                .zip(&dense)
                .map(|(&bit, f)| if bit == 1 { f.top() } else { f.size() })
                .collect();
            of_free.skeleton.index_of(a_radix.encode(&coords)).ok_or_else(missing)
        })
        .collect::<Result<Vec<_>>>()?;
    let k = d
        .elements()
        .map(|e| of_free.dense.index_of(a_radix.encode(&d_radix.digits(e))).ok_or_else(missing))
        .collect::<Result<Vec<_>>>()?;
    let witness = TripleMorphism { h, k };
    if !is_triple_iso(&triple, &of_free.triple, &witness) {
        return Err(Error::Invariant("coordinate map is not a triple isomorphism".into()));
    }
    Ok(FreeTriple {
        triple,
        free,
        of_free,
        witness,
    })
}

/// Subalgebra of `∏_{C ∈ K} C^(C^n)` generated by the projection tuples.
#[derive(Clone, Debug)]
pub struct TermClosure {
    pub algebra: FiniteAlgebra,
    /// Element for each free generator.
    pub generators: Vec<ElementId>,
    /// `(member of K, assignment)` for every coordinate of the product.
    pub coordinates: Vec<(usize, Vec<ElementId>)>,
    /// Coordinate values of each element.
    pub tuples: Vec<Vec<ElementId>>,
}

impl TermClosure {
    /// Value at coordinate `c` as a map from the closure into the `K`-member.
    pub fn projection(&self, c: usize) -> Vec<ElementId> {
        self.tuples.iter().map(|t| t[c]).collect()
    }
}

pub fn free_by_term_closure(k: &[FiniteAlgebra], n: usize, size_cap: usize) -> Result<TermClosure> {
    let first = k
        .first()
        .ok_or_else(|| Error::Contract("the generating class is empty".into()))?;
    let bounded = first.is_bounded();
    if k.iter().any(|c| c.is_bounded() != bounded) {
        return Err(Error::Contract(
            "generating algebras mix bounded and unbounded members".into(),
        ));
    }
    let coordinates: Vec<(usize, Vec<ElementId>)> = k
        .iter()
        .enumerate()
        .flat_map(|(i, c)| tuples(c.size(), n).map(move |w| (i, w)))
        .collect();
    let constant = |f: &dyn Fn(&FiniteAlgebra) -> ElementId| -> Vec<ElementId> {
        coordinates.iter().map(|(i, _)| f(&k[*i])).collect()
    };

    let mut elems: Vec<Vec<ElementId>> = Vec::new();
    let mut index: HashMap<Vec<ElementId>, ElementId> = HashMap::new();
    let mut intern = |t: Vec<ElementId>, elems: &mut Vec<Vec<ElementId>>| -> Result<ElementId> {
        if let Some(&i) = index.get(&t) {
            return Ok(i);
        }
        if elems.len() == size_cap {
            return Err(Error::SizeLimit(format!(
                "term closure reached {} elements (cap {size_cap})",
                elems.len() + 1
            )));
        }
        index.insert(t.clone(), elems.len());
        elems.push(t);
        Ok(elems.len() - 1)
    };

    let generators = (0..n)
        .map(|g| intern(coordinates.iter().map(|(_, w)| w[g]).collect(), &mut elems))
        .collect::<Result<Vec<_>>>()?;
    let top = intern(constant(&|c| c.top()), &mut elems)?;
    let bottom = if bounded {
        Some(intern(constant(&|c| c.bottom().expect("bounded")), &mut elems)?)
    } else {
        None
    };

    let combine = |op: Op, x: &[ElementId], y: &[ElementId]| -> Vec<ElementId> {
        coordinates
            .iter()
            .enumerate()
            .map(|(c, (i, _))| k[*i].apply(op, x[c], y[c]))
            .collect()
    };
    let mut next = 0;
    while next < elems.len() {
        let i = next;
        next += 1;
        for j in 0..=i {
            for op in Op::ALL {
                let t = combine(op, &elems[i], &elems[j]);
                intern(t, &mut elems)?;
                if op == Op::Res {
                    let t = combine(op, &elems[j], &elems[i]);
                    intern(t, &mut elems)?;
                }
            }
        }
    }

    let size = elems.len();
    let table = |op: Op| Table::from_fn(size, |x, y| index[&combine(op, &elems[x], &elems[y])]);
    let names: Vec<String> = (0..size)
        .map(|x| {
            if x == top {
                "1".to_string()
            } else if Some(x) == bottom {
                "0".to_string()
            } else if let Some(g) = generators.iter().position(|&g| g == x) {
                if n == 1 {
                    "x".to_string()
                } else {
                    format!("x{}", g + 1)
                }
            } else {
                format!("t{x}")
            }
        })
        .collect();
    let names_of_k: Vec<&str> = k.iter().map(FiniteAlgebra::name).collect();
    let algebra = FiniteAlgebra::new(
        format!("F({};{n})", names_of_k.join(",")),
        names,
        table(Op::Meet),
        table(Op::Join),
        table(Op::Mult),
        table(Op::Res),
        top,
        bottom,
    )?;
    Ok(TermClosure {
        algebra,
        generators,
        coordinates,
        tuples: elems,
    })
}

/// Every coordinate projection is a homomorphism into its `K`-member, and every
/// homomorphism into a `K`-member is fixed by its values on the generators.
pub fn universal_property_check(closure: &TermClosure, k: &[FiniteAlgebra]) -> ValidationReport {
    let mut r = ValidationReport::new();
    let f = &closure.algebra;
    for (c, (i, w)) in closure.coordinates.iter().enumerate() {
        let target = &k[*i];
        let p = closure.projection(c);
        if !is_homomorphism(f, target, &p, f.is_bounded()) {
            r.push("projection-hom", vec![c]);
        }
        let mut search = HomSearch::new(f, target).preserve_bottom(f.is_bounded());
        for (&g, &v) in closure.generators.iter().zip(w) {
            search = search.fix(g, v);
        }
        let all = search.all();
        if all.len() != 1 || all[0] != p {
            r.push("unique-extension", vec![c]);
        }
    }
    r
}

/// `Free_{V*}(k)` for Gödel hoops, `k = 0..=n`, each from the chain with
/// `k + 1` elements.
pub fn goedel_hoop_stalks(n: usize, size_cap: usize) -> Result<Vec<FiniteAlgebra>> {
    (0..=n)
        .map(|k| {
            let c = free_by_term_closure(&[goedel_hoop(k + 1)], k, size_cap)?;
            Ok(c.algebra.with_name(format!("FreeGH({k})")))
        })
        .collect()
}

/// Term-closure oracle for `Free_Gödel(n)` over the chains with up to `n + 2`
/// elements.
pub fn goedel_free_oracle(n: usize, size_cap: usize) -> Result<TermClosure> {
    let chains: Vec<FiniteAlgebra> = (3..=n + 2).map(goedel_chain).collect();
    let chains = if chains.is_empty() { vec![goedel_chain(2)] } else { chains };
    free_by_term_closure(&chains, n, size_cap)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{b2, b4, g3, g4, h2};
    use crate::hom::are_isomorphic;

    #[test]
    fn k_indices() {
        assert_eq!(k_sequence(2).unwrap(), vec![0, 1, 1, 2]);
        assert_eq!(k_sequence(1).unwrap(), vec![0, 1]);
        assert_eq!(k_sequence(0).unwrap(), vec![0]);
        assert!(k_index(2, 0).is_err());
        assert!(k_index(2, 5).is_err());
        for n in 0..8 {
            let ks = k_sequence(n).unwrap();
            for k in 0..=n {
                assert_eq!(ks.iter().filter(|&&x| x == k).count(), binomial(n, k));
            }
        }
    }

    #[test]
    fn closures() {
        let c = free_by_term_closure(&[b2()], 1, DEFAULT_SIZE_CAP).unwrap();
        assert_eq!(c.algebra.size(), 4);
        assert!(are_isomorphic(&c.algebra, &b4()).is_some());
        let c = free_by_term_closure(&[h2()], 1, DEFAULT_SIZE_CAP).unwrap();
        assert_eq!(c.algebra.size(), 2);
        assert!(are_isomorphic(&c.algebra, &h2()).is_some());
        let c = free_by_term_closure(&[g3(), g4()], 1, DEFAULT_SIZE_CAP).unwrap();
        assert_eq!(c.algebra.size(), 6);
        assert!(crate::algebra::validate(&c.algebra).is_ok());
        assert!(matches!(
            free_by_term_closure(&[g3(), g4()], 1, 5),
            Err(Error::SizeLimit(_))
        ));
        assert!(free_by_term_closure(&[g3(), h2()], 1, 10).is_err());
    }

    #[test]
    fn universal_property() {
        for k in [vec![g3(), g4()], vec![b2()], vec![h2()]] {
            let c = free_by_term_closure(&k, 1, DEFAULT_SIZE_CAP).unwrap();
            assert!(universal_property_check(&c, &k).is_ok());
        }
    }

    #[test]
    fn goedel_one_generator() {
        let stalks = goedel_hoop_stalks(1, DEFAULT_SIZE_CAP).unwrap();
        assert_eq!(stalks[0].size(), 1);
        assert!(are_isomorphic(&stalks[1], &h2()).is_some());
        let free = assemble_free(1, &stalks).unwrap();
        assert_eq!(free.size(), 6);
        assert!(are_isomorphic(&free, &b2().product(&g3()).unwrap()).is_some());
        let oracle = free_by_term_closure(&[g3(), g4()], 1, DEFAULT_SIZE_CAP).unwrap();
        assert!(are_isomorphic(&free, &oracle.algebra).is_some());
        let ft = triple_of_free(1, &stalks).unwrap();
        assert_eq!(ft.triple.b.size(), 4);
        assert_eq!(ft.triple.d.size(), 2);
    }

    #[test]
    fn zero_generators() {
        let stalks = vec![FiniteAlgebra::trivial(false)];
        let free = assemble_free(0, &stalks).unwrap();
        assert!(are_isomorphic(&free, &b2()).is_some());
        let ft = triple_of_free(0, &stalks).unwrap();
        assert_eq!(ft.triple.b.size(), 2);
        assert_eq!(ft.triple.d.size(), 1);
    }

    #[test]
    fn refusals() {
        let trivial = FiniteAlgebra::trivial(false);
        assert!(matches!(
            assemble_free(2, &[trivial.clone(), trivial.clone(), trivial.clone()]),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(assemble_free(1, &[trivial]), Err(Error::Contract(_))));
        let big = goedel_hoop(200);
        let stalks = vec![FiniteAlgebra::trivial(false), big.clone(), big];
        assert!(matches!(assemble_free(2, &stalks), Err(Error::SizeLimit(_))));
    }

    #[test]
    fn skeleton_is_boolean_power() {
        let stalks = goedel_hoop_stalks(1, DEFAULT_SIZE_CAP).unwrap();
        let free = assemble_free(1, &stalks).unwrap();
        let skel = free.boolean_skeleton().unwrap().algebra;
        assert!(are_isomorphic(&skel, &boolean_algebra(2)).is_some());
    }

    #[test]
    fn goedel_two_generators() {
        if std::env::var_os("STONEAN_LONG_TESTS").is_none() {
            return;
        }
        let stalks = goedel_hoop_stalks(2, DEFAULT_SIZE_CAP).unwrap();
        let free = assemble_free(2, &stalks).unwrap();
        let oracle = goedel_free_oracle(2, DEFAULT_SIZE_CAP).unwrap();
        eprintln!("free goedel hoop on 2: {}, free goedel on 2: {} / {}", stalks[2].size(), free.size(), oracle.algebra.size());
        assert_eq!(free.size(), oracle.algebra.size());
        assert!(are_isomorphic(&free, &oracle.algebra).is_some());
        triple_of_free(2, &stalks).unwrap();
    }
}

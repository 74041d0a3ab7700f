//! Small named algebras used across the crate and its tests.

use super::{FiniteAlgebra, Table};

fn chain_names(n: usize) -> Vec<String> {
    let mut names = vec!["0".to_string()];
    names.extend((0..n.saturating_sub(2)).map(|i| ((b'a' + i as u8) as char).to_string()));
    names.push("1".into());
    names
}

/// The Boolean algebra with `2^k` elements, as a power of the two-element one.
pub fn boolean_algebra(k: usize) -> FiniteAlgebra {
    let b2 = goedel_chain(2).with_name("B2");
    match k {
        0 => FiniteAlgebra::trivial(true).with_name("B1"),
        1 => b2,
        _ => {
            let factors = vec![&b2; k];
            FiniteAlgebra::product_of(&factors, format!("B{}", 1usize << k))
                .expect("powers of B2 are well formed")
        }
    }
}

/// The `n`-element Gödel chain `0 < a < b < ... < 1`: product is meet and
/// `x → y` is `1` when `x <= y`, else `y`.
pub fn goedel_chain(n: usize) -> FiniteAlgebra {
    assert!(n >= 2, "a bounded chain needs two elements");
    let mult = Table::from_fn(n, |x, y| x.min(y));
    FiniteAlgebra::from_order(format!("G{n}"), chain_names(n), |x, y| x <= y, mult, n - 1, Some(0))
        .expect("Gödel chains are residuated")
}

/// The `n`-element MV-chain: `x * y = max(0, x + y - (n - 1))`.
pub fn lukasiewicz_chain(n: usize) -> FiniteAlgebra {
    assert!(n >= 2, "a bounded chain needs two elements");
    let mult = Table::from_fn(n, |x, y| (x + y).saturating_sub(n - 1));
    FiniteAlgebra::from_order(format!("L{n}"), chain_names(n), |x, y| x <= y, mult, n - 1, Some(0))
        .expect("MV-chains are residuated")
}

/// The `n`-element Gödel hoop: an idempotent chain with no bottom constant.
pub fn goedel_hoop(n: usize) -> FiniteAlgebra {
    assert!(n >= 1);
    let names: Vec<String> = match n {
        1 => vec!["1".into()],
        2 => vec!["d".into(), "1".into()],
        _ => (1..n)
            .map(|i| format!("d{i}"))
            .chain(std::iter::once("1".into()))
            .collect(),
    };
    let mult = Table::from_fn(n, |x, y| x.min(y));
    FiniteAlgebra::from_order(format!("H{n}"), names, |x, y| x <= y, mult, n - 1, None)
        .expect("Gödel hoops are residuated")
}

pub fn b2() -> FiniteAlgebra {
    boolean_algebra(1)
}

pub fn b4() -> FiniteAlgebra {
    boolean_algebra(2)
}

pub fn g3() -> FiniteAlgebra {
    goedel_chain(3)
}

pub fn g4() -> FiniteAlgebra {
    goedel_chain(4)
}

pub fn l3() -> FiniteAlgebra {
    lukasiewicz_chain(3)
}

pub fn h2() -> FiniteAlgebra {
    goedel_hoop(2)
}

pub fn h2_squared() -> FiniteAlgebra {
    let h = h2();
    h.product(&h).expect("H2 x H2").with_name("H2xH2")
}

/// Every named fixture, in a fixed order.
pub fn fixtures() -> Vec<FiniteAlgebra> {
    vec![b2(), b4(), g3(), g4(), l3(), h2(), h2_squared()]
}

/// Looks a fixture up by its (case-insensitive) name.
pub fn fixture(name: &str) -> Option<FiniteAlgebra> {
    fixtures()
        .into_iter()
        .find(|a| a.name().eq_ignore_ascii_case(name))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::validate;

    #[test]
    fn fixtures_validate() {
        for a in fixtures() {
            assert!(validate(&a).is_ok(), "{} fails validation", a.name());
        }
        assert!(validate(&boolean_algebra(3)).is_ok());
        assert!(validate(&goedel_hoop(3)).is_ok());
    }

    #[test]
    fn goedel_residuum() {
        let g3 = g3();
        // x → y = 1 if x <= y else y
        for x in 0..3 {
            for y in 0..3 {
                let expect = if x <= y { 2 } else { y };
                assert_eq!(g3.res(x, y), expect);
            }
        }
    }

    #[test]
    fn lukasiewicz_three_chain() {
        let l3 = l3();
        assert_eq!(l3.mult(1, 1), 0);
        assert_eq!(l3.res(1, 0), 1);
        assert_eq!(l3.element_name(1), "a");
    }
}

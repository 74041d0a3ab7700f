//! Finite residuated lattices given by operation tables.
//!
//! An algebra carries four binary tables (meet, join, product, residuum), a top
//! element and optionally a bottom element. The order is never stored: `x <= y`
//! is read off the meet table.

mod fixtures;
mod format;
mod laws;

use std::fmt;
use std::ops::Range;

use crate::error::{Error, Result};
use crate::filters::ElementSet;

pub use fixtures::*;
pub use format::{parse_algebra, parse_algebra_lines, write_algebra, LineReader};
pub use laws::{identity_battery, validate};

/// Index of an element inside a [`FiniteAlgebra`]; meaningful only relative to it.
pub type ElementId = usize;

/// A square operation table over `0..size`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Table {
    size: usize,
    cells: Vec<ElementId>,
}

impl Table {
    pub fn from_fn(size: usize, mut f: impl FnMut(ElementId, ElementId) -> ElementId) -> Self {
        let mut cells = Vec::with_capacity(size * size);
        for x in 0..size {
            for y in 0..size {
                cells.push(f(x, y));
            }
        }
        Table { size, cells }
    }

    /// Builds a table from rows, checking shape and range.
    pub fn from_rows(rows: &[Vec<ElementId>]) -> Result<Self> {
        let size = rows.len();
        let mut cells = Vec::with_capacity(size * size);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != size {
                return Err(Error::Structure(format!(
                    "row {i} has {} entries, expected {size}",
                    row.len()
                )));
            }
            for &v in row {
                if v >= size {
                    return Err(Error::out_of_range(v, size));
                }
                cells.push(v);
            }
        }
        Ok(Table { size, cells })
    }

    #[inline]
    pub fn get(&self, x: ElementId, y: ElementId) -> ElementId {
        self.cells[x * self.size + y]
    }

    pub(crate) fn set(&mut self, x: ElementId, y: ElementId, v: ElementId) {
        self.cells[x * self.size + y] = v;
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn rows(&self) -> impl Iterator<Item = &[ElementId]> {
        self.cells.chunks(self.size.max(1)).take(self.size)
    }

    pub(crate) fn cells(&self) -> &[ElementId] {
        &self.cells
    }
}

/// Which operation of the signature.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Op {
    Meet,
    Join,
    Mult,
    Res,
}

impl Op {
    pub const ALL: [Op; 4] = [Op::Meet, Op::Join, Op::Mult, Op::Res];

    pub fn keyword(self) -> &'static str {
        match self {
            Op::Meet => "meet",
            Op::Join => "join",
            Op::Mult => "mult",
            Op::Res => "res",
        }
    }
}

/// A finite commutative integral residuated lattice, bounded when `bottom` is set.
///
/// Constructors only check the shape of the tables. Use [`validate`] to check the
/// laws; the rest of the crate assumes a valid algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteAlgebra {
    name: String,
    elements: Vec<String>,
    meet: Table,
    join: Table,
    mult: Table,
    res: Table,
    top: ElementId,
    bottom: Option<ElementId>,
}

impl FiniteAlgebra {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        name: impl Into<String>,
        elements: Vec<String>,
        meet: Table,
        join: Table,
        mult: Table,
        res: Table,
        top: ElementId,
        bottom: Option<ElementId>,
    ) -> Result<Self> {
        let n = elements.len();
        if n == 0 {
            return Err(Error::Structure("an algebra needs at least one element".into()));
        }
        for (op, t) in [("meet", &meet), ("join", &join), ("mult", &mult), ("res", &res)] {
            if t.size() != n {
                return Err(Error::Structure(format!(
                    "{op} table has size {}, expected {n}",
                    t.size()
                )));
            }
            if let Some(&v) = t.cells().iter().find(|&&v| v >= n) {
                return Err(Error::out_of_range(v, n));
            }
        }
        if top >= n {
            return Err(Error::out_of_range(top, n));
        }
        if let Some(b) = bottom {
            if b >= n {
                return Err(Error::out_of_range(b, n));
            }
        }
        for (i, e) in elements.iter().enumerate() {
            if e.is_empty() || e.chars().any(char::is_whitespace) {
                return Err(Error::Structure(format!("invalid element name {e:?}")));
            }
            if elements[..i].contains(e) {
                return Err(Error::Structure(format!("duplicate element name {e:?}")));
            }
        }
        Ok(FiniteAlgebra {
            name: name.into(),
            elements,
            meet,
            join,
            mult,
            res,
            top,
            bottom,
        })
    }

    /// Builds an algebra from a partial order and a product table.
    ///
    /// Meet and join are the greatest lower and least upper bounds of `leq`; the
    /// residuum is `res(y, z) = max { x : x * y <= z }`. Fails when `leq` is not a
    /// lattice order or when that maximum does not exist (the product is not
    /// residuated).
    pub fn from_order(
        name: impl Into<String>,
        elements: Vec<String>,
        leq: impl Fn(ElementId, ElementId) -> bool,
        mult: Table,
        top: ElementId,
        bottom: Option<ElementId>,
    ) -> Result<Self> {
        let n = elements.len();
        let order: Vec<Vec<bool>> = (0..n).map(|x| (0..n).map(|y| leq(x, y)).collect()).collect();
        let meet = bound_table(&order, true)
            .ok_or_else(|| Error::Structure("order has no meets".into()))?;
        let join = bound_table(&order, false)
            .ok_or_else(|| Error::Structure("order has no joins".into()))?;
        if mult.size() != n {
            return Err(Error::Structure("mult table has the wrong size".into()));
        }
        let res = residuum_table(&order, &mult)
            .ok_or_else(|| Error::Structure("product is not residuated".into()))?;
        FiniteAlgebra::new(name, elements, meet, join, mult, res, top, bottom)
    }

    /// The one-element algebra `{⊤}`, bounded (`⊥ = ⊤`) or not.
    pub fn trivial(bounded: bool) -> Self {
        let t = Table::from_fn(1, |_, _| 0);
        FiniteAlgebra::new(
            "trivial",
            vec!["1".into()],
            t.clone(),
            t.clone(),
            t.clone(),
            t,
            0,
            bounded.then_some(0),
        )
        .expect("trivial algebra is well formed")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn size(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> Range<ElementId> {
        0..self.size()
    }

    pub fn element_names(&self) -> &[String] {
        &self.elements
    }

    pub fn element_name(&self, x: ElementId) -> &str {
        &self.elements[x]
    }

    pub fn element_by_name(&self, name: &str) -> Option<ElementId> {
        self.elements.iter().position(|e| e == name)
    }

    /// Looks an element up by name, falling back to a decimal index.
    pub fn resolve(&self, token: &str) -> Result<ElementId> {
        if let Some(x) = self.element_by_name(token) {
            return Ok(x);
        }
        match token.parse::<usize>() {
            Ok(x) if x < self.size() => Ok(x),
            Ok(x) => Err(Error::out_of_range(x, self.size())),
            Err(_) => Err(Error::Structure(format!(
                "no element named {token:?} in {}",
                self.name
            ))),
        }
    }

    pub fn check_element(&self, x: ElementId) -> Result<ElementId> {
        if x < self.size() {
            Ok(x)
        } else {
            Err(Error::out_of_range(x, self.size()))
        }
    }

    pub fn table(&self, op: Op) -> &Table {
        match op {
            Op::Meet => &self.meet,
            Op::Join => &self.join,
            Op::Mult => &self.mult,
            Op::Res => &self.res,
        }
    }

    #[inline]
    pub fn apply(&self, op: Op, x: ElementId, y: ElementId) -> ElementId {
        self.table(op).get(x, y)
    }

    #[inline]
    pub fn meet(&self, x: ElementId, y: ElementId) -> ElementId {
        self.meet.get(x, y)
    }

    #[inline]
    pub fn join(&self, x: ElementId, y: ElementId) -> ElementId {
        self.join.get(x, y)
    }

    #[inline]
    pub fn mult(&self, x: ElementId, y: ElementId) -> ElementId {
        self.mult.get(x, y)
    }

    #[inline]
    pub fn res(&self, x: ElementId, y: ElementId) -> ElementId {
        self.res.get(x, y)
    }

    pub fn top(&self) -> ElementId {
        self.top
    }

    pub fn bottom(&self) -> Option<ElementId> {
        self.bottom
    }

    pub fn is_bounded(&self) -> bool {
        self.bottom.is_some()
    }

    pub fn is_trivial(&self) -> bool {
        self.size() == 1
    }

    pub fn require_bottom(&self) -> Result<ElementId> {
        self.bottom.ok_or_else(|| {
            Error::Unsupported(format!("{} has no bottom constant", self.name))
        })
    }

    /// `x <= y`, read off the meet table.
    #[inline]
    pub fn leq(&self, x: ElementId, y: ElementId) -> bool {
        self.meet(x, y) == x
    }

    /// Range-checked [`leq`](Self::leq).
    pub fn try_leq(&self, x: ElementId, y: ElementId) -> Result<bool> {
        self.check_element(x)?;
        self.check_element(y)?;
        Ok(self.leq(x, y))
    }

    /// `¬x = x → ⊥`.
    pub fn neg(&self, x: ElementId) -> Result<ElementId> {
        let bot = self.require_bottom()?;
        self.check_element(x)?;
        Ok(self.res(x, bot))
    }

    /// `x ↔ y = (x → y) * (y → x)`.
    pub fn biresiduum(&self, x: ElementId, y: ElementId) -> ElementId {
        self.mult(self.res(x, y), self.res(y, x))
    }

    /// The lattice least element, whether or not it is a constant of the signature.
    pub fn least(&self) -> ElementId {
        self.elements()
            .find(|&x| self.elements().all(|y| self.leq(x, y)))
            .expect("finite lattice has a least element")
    }

    /// Complemented elements: `a ∨ ¬a = ⊤` and `a ∧ ¬a = ⊥`.
    pub fn boolean_elements(&self) -> Result<ElementSet> {
        let bot = self.require_bottom()?;
        Ok(ElementSet::from_predicate(self.size(), |a| {
            let na = self.res(a, bot);
            self.join(a, na) == self.top && self.meet(a, na) == bot
        }))
    }

    /// The Boolean skeleton as a subalgebra, with its inclusion map.
    pub fn boolean_skeleton(&self) -> Result<Subalgebra> {
        let members = self.boolean_elements()?;
        self.subalgebra(&members, format!("B({})", self.name), true)
    }

    /// `D(A) = { x : ¬x = ⊥ }`.
    pub fn dense_set(&self) -> Result<ElementSet> {
        let bot = self.require_bottom()?;
        Ok(ElementSet::from_predicate(self.size(), |x| {
            self.res(x, bot) == bot
        }))
    }

    /// The dense elements as a residuated lattice without bottom constant.
    pub fn dense_elements(&self) -> Result<Subalgebra> {
        let members = self.dense_set()?;
        if !crate::filters::is_ifilter(self, &members) {
            return Err(Error::Invariant(format!(
                "dense elements of {} are not an i-filter",
                self.name
            )));
        }
        self.subalgebra(&members, format!("D({})", self.name), false)
    }

    /// Directly indecomposable iff the skeleton has exactly two elements.
    pub fn is_directly_indecomposable(&self) -> Result<bool> {
        self.require_bottom()?;
        if self.is_trivial() {
            return Err(Error::Precondition(
                "direct indecomposability needs more than one element".into(),
            ));
        }
        Ok(self.boolean_elements()?.len() == 2)
    }

    pub fn is_distributive_lattice(&self) -> bool {
        self.first_non_distributive().is_none()
    }

    pub(crate) fn first_non_distributive(&self) -> Option<[ElementId; 3]> {
        let n = self.size();
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    if self.meet(x, self.join(y, z))
                        != self.join(self.meet(x, y), self.meet(x, z))
                    {
                        return Some([x, y, z]);
                    }
                }
            }
        }
        None
    }

    /// Same tables, bottom constant dropped.
    pub fn without_bottom(&self) -> Self {
        FiniteAlgebra {
            bottom: None,
            ..self.clone()
        }
    }

    /// Restriction to `members`, which must be closed under all operations and
    /// contain the constants. Element order follows `members`.
    pub fn subalgebra(
        &self,
        members: &ElementSet,
        name: impl Into<String>,
        keep_bottom: bool,
    ) -> Result<Subalgebra> {
        let embedding: Vec<ElementId> = members.iter().collect();
        let mut index = vec![usize::MAX; self.size()];
        for (i, &x) in embedding.iter().enumerate() {
            index[x] = i;
        }
        let lookup = |x: ElementId| -> Result<ElementId> {
            match index[x] {
                usize::MAX => Err(Error::Contract(format!(
                    "subset of {} is not closed (reaches {})",
                    self.name,
                    self.element_name(x)
                ))),
                i => Ok(i),
            }
        };
        let top = lookup(self.top)?;
        let bottom = if keep_bottom {
            Some(lookup(self.require_bottom()?)?)
        } else {
            None
        };
        let m = embedding.len();
        let mut tables = Vec::with_capacity(4);
        for op in Op::ALL {
            let mut t = Table::from_fn(m, |_, _| 0);
            for i in 0..m {
                for j in 0..m {
                    t.set(i, j, lookup(self.apply(op, embedding[i], embedding[j]))?);
                }
            }
            tables.push(t);
        }
        let [meet, join, mult, res]: [Table; 4] = tables.try_into().expect("four tables");
        let names = embedding.iter().map(|&x| self.elements[x].clone()).collect();
        let algebra = FiniteAlgebra::new(name, names, meet, join, mult, res, top, bottom)?;
        Ok(Subalgebra {
            algebra,
            embedding,
            index,
        })
    }

    /// Direct product of `factors`, elements in row-major order (first factor
    /// most significant). The empty product is the trivial algebra.
    pub fn product_of(factors: &[&FiniteAlgebra], name: impl Into<String>) -> Result<Self> {
        let bounded = factors.iter().all(|f| f.is_bounded());
        let mixed = factors.iter().any(|f| f.is_bounded()) && !bounded;
        if mixed {
            return Err(Error::Contract(
                "cannot multiply bounded and unbounded algebras".into(),
            ));
        }
        if factors.is_empty() {
            return Ok(FiniteAlgebra::trivial(true).with_name(name));
        }
        let sizes: Vec<usize> = factors.iter().map(|f| f.size()).collect();
        let total = sizes
            .iter()
            .try_fold(1usize, |acc, &s| acc.checked_mul(s))
            .ok_or_else(|| Error::SizeLimit("product size overflows".into()))?;
        let radix = MixedRadix::new(sizes);
        let names: Vec<String> = (0..total)
            .map(|code| {
                let parts: Vec<&str> = radix
                    .digits(code)
                    .iter()
                    .zip(factors)
                    .map(|(&d, f)| f.element_name(d))
                    .collect();
                format!("({})", parts.join(","))
            })
            .collect();
        let digits: Vec<Vec<ElementId>> = (0..total).map(|c| radix.digits(c)).collect();
        let make = |op: Op| {
            Table::from_fn(total, |x, y| {
                let combined: Vec<ElementId> = factors
                    .iter()
                    .enumerate()
                    .map(|(i, f)| f.apply(op, digits[x][i], digits[y][i]))
                    .collect();
                radix.encode(&combined)
            })
        };
        let top = radix.encode(&factors.iter().map(|f| f.top()).collect::<Vec<_>>());
        let bottom = bounded.then(|| {
            radix.encode(
                &factors
                    .iter()
                    .map(|f| f.bottom().expect("bounded"))
                    .collect::<Vec<_>>(),
            )
        });
        FiniteAlgebra::new(
            name,
            names,
            make(Op::Meet),
            make(Op::Join),
            make(Op::Mult),
            make(Op::Res),
            top,
            bottom,
        )
    }

    pub fn product(&self, other: &FiniteAlgebra) -> Result<Self> {
        let name = format!("{}x{}", self.name, other.name);
        FiniteAlgebra::product_of(&[self, other], name)
    }
}

impl fmt::Display for FiniteAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&write_algebra(self))
    }
}

/// A subalgebra together with its inclusion into the parent.
#[derive(Clone, Debug)]
pub struct Subalgebra {
    pub algebra: FiniteAlgebra,
    /// `embedding[i]` is the parent element of sub-element `i`.
    pub embedding: Vec<ElementId>,
    index: Vec<usize>,
}

impl Subalgebra {
    /// Sub-element corresponding to parent element `x`, if it is a member.
    pub fn index_of(&self, x: ElementId) -> Option<ElementId> {
        match self.index.get(x) {
            Some(&usize::MAX) | None => None,
            Some(&i) => Some(i),
        }
    }

    pub fn contains(&self, x: ElementId) -> bool {
        self.index_of(x).is_some()
    }
}

/// Mixed-radix coding of tuples, first digit most significant.
#[derive(Clone, Debug)]
pub(crate) struct MixedRadix {
    sizes: Vec<usize>,
}

impl MixedRadix {
    pub(crate) fn new(sizes: Vec<usize>) -> Self {
        MixedRadix { sizes }
    }

    pub(crate) fn digits(&self, mut code: usize) -> Vec<usize> {
        let mut out = vec![0; self.sizes.len()];
        for (slot, &s) in out.iter_mut().zip(&self.sizes).rev() {
            *slot = code % s;
            code /= s;
        }
        out
    }

    pub(crate) fn encode(&self, digits: &[usize]) -> usize {
        digits
            .iter()
            .zip(&self.sizes)
            .fold(0, |acc, (&d, &s)| acc * s + d)
    }
}

fn bound_table(order: &[Vec<bool>], lower: bool) -> Option<Table> {
    let n = order.len();
    let below = |x: usize, y: usize| if lower { order[x][y] } else { order[y][x] };
    let mut t = Table::from_fn(n, |_, _| 0);
    for x in 0..n {
        for y in 0..n {
            // greatest common lower bound (or least common upper bound)
            let common: Vec<usize> = (0..n).filter(|&z| below(z, x) && below(z, y)).collect();
            let best = common
                .iter()
                .copied()
                .find(|&z| common.iter().all(|&w| below(w, z)))?;
            t.set(x, y, best);
        }
    }
    Some(t)
}

fn residuum_table(order: &[Vec<bool>], mult: &Table) -> Option<Table> {
    let n = order.len();
    let mut t = Table::from_fn(n, |_, _| 0);
    for y in 0..n {
        for z in 0..n {
            let fits: Vec<usize> = (0..n).filter(|&x| order[mult.get(x, y)][z]).collect();
            let max = fits
                .iter()
                .copied()
                .find(|&m| fits.iter().all(|&w| order[w][m]))?;
            // residuation needs the solution set to be exactly the down-set of max
            if (0..n).any(|x| order[x][max] && !fits.contains(&x)) {
                return None;
            }
            t.set(y, z, max);
        }
    }
    Some(t)
}

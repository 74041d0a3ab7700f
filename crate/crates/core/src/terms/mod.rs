//! Terms and equations over the signature `∧ ∨ * → ⊤ ⊥`, evaluated in finite
//! algebras. The dense translation substitutes `¬¬x → x` for each variable.

mod parser;

use std::collections::BTreeMap;
use std::fmt;

use crate::algebra::{ElementId, FiniteAlgebra, Op};
use crate::error::{Error, Result};
use crate::report::tuples;
use crate::stonean::adjoin_bottom;

pub use parser::{parse, parse_equation, parse_equation_strict, parse_term, Parsed};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BinOp {
    Meet,
    Join,
    Mult,
    Res,
}

impl BinOp {
    fn op(self) -> Op {
        match self {
            BinOp::Meet => Op::Meet,
            BinOp::Join => Op::Join,
            BinOp::Mult => Op::Mult,
            BinOp::Res => Op::Res,
        }
    }

    fn symbol(self) -> &'static str {
        match self {
            BinOp::Meet => "^",
            BinOp::Join => "v",
            BinOp::Mult => "*",
            BinOp::Res => "->",
        }
    }

    /// Binding strength; higher binds tighter.
    fn level(self) -> u8 {
        match self {
            BinOp::Res => 1,
            BinOp::Join => 2,
            BinOp::Meet => 3,
            BinOp::Mult => 4,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    Var(String),
    Top,
    Bottom,
    Bin(BinOp, Box<Term>, Box<Term>),
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(name.to_string())
    }

    pub fn bin(op: BinOp, l: Term, r: Term) -> Term {
        Term::Bin(op, Box::new(l), Box::new(r))
    }

    pub fn meet(l: Term, r: Term) -> Term {
        Term::bin(BinOp::Meet, l, r)
    }

    pub fn join(l: Term, r: Term) -> Term {
        Term::bin(BinOp::Join, l, r)
    }

    pub fn mult(l: Term, r: Term) -> Term {
        Term::bin(BinOp::Mult, l, r)
    }

    pub fn res(l: Term, r: Term) -> Term {
        Term::bin(BinOp::Res, l, r)
    }

    /// `¬t = t → ⊥`.
    #[allow(clippy::should_implement_trait)]
    pub fn neg(t: Term) -> Term {
        Term::res(t, Term::Bottom)
    }

    /// `t ↔ s = (t → s) * (s → t)`.
    pub fn biresiduum(t: Term, s: Term) -> Term {
        Term::mult(Term::res(t.clone(), s.clone()), Term::res(s, t))
    }

    /// Variables in alphabetical order, without repetition.
    pub fn variables(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out.sort();
        out.dedup();
        out
    }

    fn collect_vars(&self, out: &mut Vec<String>) {
        match self {
            Term::Var(v) => out.push(v.clone()),
            Term::Top | Term::Bottom => {}
            Term::Bin(_, l, r) => {
                l.collect_vars(out);
                r.collect_vars(out);
            }
        }
    }

    pub fn mentions_bottom(&self) -> bool {
        match self {
            Term::Bottom => true,
            Term::Var(_) | Term::Top => false,
            Term::Bin(_, l, r) => l.mentions_bottom() || r.mentions_bottom(),
        }
    }

    /// Replaces every occurrence of each variable by the term `f` gives for it.
    pub fn substitute(&self, f: &dyn Fn(&str) -> Option<Term>) -> Term {
        match self {
            Term::Var(v) => f(v).unwrap_or_else(|| self.clone()),
            Term::Top | Term::Bottom => self.clone(),
            Term::Bin(op, l, r) => Term::bin(*op, l.substitute(f), r.substitute(f)),
        }
    }

    fn negated(&self) -> Option<&Term> {
        match self {
            Term::Bin(BinOp::Res, l, r) if **r == Term::Bottom => Some(l),
            _ => None,
        }
    }

    fn level(&self) -> u8 {
        match self {
            Term::Var(_) | Term::Top | Term::Bottom => 6,
            _ if self.negated().is_some() => 5,
            Term::Bin(op, ..) => op.level(),
        }
    }

    fn write(&self, f: &mut fmt::Formatter<'_>, min_level: u8) -> fmt::Result {
        let paren = self.level() < min_level;
        if paren {
            f.write_str("(")?;
        }
        match self {
            Term::Var(v) => f.write_str(v)?,
            Term::Top => f.write_str("T")?,
            Term::Bottom => f.write_str("F")?,
            _ if self.negated().is_some() => {
                f.write_str("~")?;
                self.negated().unwrap().write(f, 5)?;
            }
            Term::Bin(op, l, r) => {
                let lv = op.level();
                // `->` associates to the right, the others to the left
                let (ll, rl) = if *op == BinOp::Res { (lv + 1, lv) } else { (lv, lv + 1) };
                l.write(f, ll)?;
                write!(f, " {} ", op.symbol())?;
                r.write(f, rl)?;
            }
        }
        if paren {
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(f, 0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Equation {
    pub lhs: Term,
    pub rhs: Term,
}

impl Equation {
    pub fn new(lhs: Term, rhs: Term) -> Self {
        Equation { lhs, rhs }
    }

    pub fn variables(&self) -> Vec<String> {
        let mut v = self.lhs.variables();
        v.extend(self.rhs.variables());
        v.sort();
        v.dedup();
        v
    }

    pub fn mentions_bottom(&self) -> bool {
        self.lhs.mentions_bottom() || self.rhs.mentions_bottom()
    }
}

impl fmt::Display for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.lhs, self.rhs)
    }
}

/// Values of variables, by name.
pub type Assignment = BTreeMap<String, ElementId>;

/// Folds `t` over the tables of `a`.
pub fn eval(a: &FiniteAlgebra, t: &Term, assignment: &Assignment) -> Result<ElementId> {
    match t {
        Term::Var(v) => {
            let x = *assignment
                .get(v)
                .ok_or_else(|| Error::Contract(format!("variable {v} is unassigned")))?;
            a.check_element(x)
        }
        Term::Top => Ok(a.top()),
        Term::Bottom => a.require_bottom(),
        Term::Bin(op, l, r) => Ok(a.apply(op.op(), eval(a, l, assignment)?, eval(a, r, assignment)?)),
    }
}

/// Outcome of checking an equation over every assignment.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Satisfaction {
    pub holds: bool,
    /// First failing assignment, variables in alphabetical order and values in
    /// lexicographic order.
    pub countermodel: Option<Assignment>,
}

impl Satisfaction {
    /// `x=a y=0`, with element names of `a`.
    pub fn describe(&self, a: &FiniteAlgebra) -> String {
        match &self.countermodel {
            None => "ok".into(),
            Some(m) => m
                .iter()
                .map(|(v, &x)| format!("{v}={}", a.element_name(x)))
                .collect::<Vec<_>>()
                .join(" "),
        }
    }
}

pub fn satisfies(a: &FiniteAlgebra, eq: &Equation) -> Result<Satisfaction> {
    if eq.mentions_bottom() {
        a.require_bottom()?;
    }
    let vars = eq.variables();
    for w in tuples(a.size(), vars.len()) {
        let assignment: Assignment = vars.iter().cloned().zip(w).collect();
        if eval(a, &eq.lhs, &assignment)? != eval(a, &eq.rhs, &assignment)? {
            return Ok(Satisfaction {
                holds: false,
                countermodel: Some(assignment),
            });
        }
    }
    Ok(Satisfaction {
        holds: true,
        countermodel: None,
    })
}

/// `τ(x₁, …, xₙ) = ⊤` becomes `τ(¬¬x₁ → x₁, …, ¬¬xₙ → xₙ) = ⊤`.
pub fn translate_dense(eq: &Equation) -> Result<Equation> {
    if eq.rhs != Term::Top {
        return Err(Error::Contract(
            "the dense translation applies to equations of the form t = T".into(),
        ));
    }
    let lhs = eq.lhs.substitute(&|v| {
        let x = Term::var(v);
        Some(Term::res(Term::neg(Term::neg(x.clone())), x))
    });
    Ok(Equation::new(lhs, Term::Top))
}

/// Satisfaction of `eq` in `a` (read without bottom) and in `S(a)`.
pub fn star_equation_check(a: &FiniteAlgebra, eq: &Equation) -> Result<(bool, bool)> {
    let base = a.without_bottom();
    let here = satisfies(&base, eq)?.holds;
    let lifted = satisfies(&adjoin_bottom(&base), eq)?.holds;
    Ok((here, lifted))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{b2, g3, h2, l3};

    fn eq(s: &str) -> Equation {
        parse_equation(s).unwrap()
    }

    #[test]
    fn evaluation() {
        let g3 = g3();
        let stone = parse_term("~x v ~~x").unwrap();
        let at = |x| Assignment::from([("x".to_string(), x)]);
        assert_eq!(eval(&g3, &stone, &at(1)).unwrap(), 2);
        assert_eq!(eval(&l3(), &stone, &at(1)).unwrap(), 1);
        assert_eq!(eval(&g3, &Term::Top, &Assignment::new()).unwrap(), 2);
        assert!(matches!(
            eval(&h2(), &stone, &at(0)),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn satisfaction() {
        let prelinearity = eq("(x -> y) v (y -> x) = T");
        assert!(satisfies(&g3(), &prelinearity).unwrap().holds);
        let stone = eq("-x v --x = T");
        let s = satisfies(&l3(), &stone).unwrap();
        assert!(!s.holds);
        assert_eq!(s.describe(&l3()), "x=a");
        assert!(satisfies(&b2(), &eq("T = T")).unwrap().holds);
        assert!(matches!(satisfies(&h2(), &stone), Err(Error::Unsupported(_))));
    }

    #[test]
    fn dense_translation() {
        let t = translate_dense(&eq("x = T")).unwrap();
        assert_eq!(t.to_string(), "~~x -> x = T");
        let p = translate_dense(&eq("(x -> y) v (y -> x) = T")).unwrap();
        assert_eq!(
            p.to_string(),
            "((~~x -> x) -> ~~y -> y) v ((~~y -> y) -> ~~x -> x) = T"
        );
        assert!(satisfies(&g3(), &p).unwrap().holds);
        assert!(matches!(translate_dense(&eq("x = y")), Err(Error::Contract(_))));
    }

    #[test]
    fn star_checks() {
        let h2 = h2();
        assert_eq!(star_equation_check(&h2, &eq("x * x = x")).unwrap(), (true, true));
        assert_eq!(star_equation_check(&h2, &eq("x = T")).unwrap(), (false, false));
        let triv = FiniteAlgebra::trivial(false);
        assert_eq!(star_equation_check(&triv, &eq("x * x = x")).unwrap(), (true, true));
        assert_eq!(
            star_equation_check(&triv, &eq("x v (x -> y) = T")).unwrap(),
            (true, true)
        );
    }

    #[test]
    fn printing() {
        let t = parse_term("x -> y -> z").unwrap();
        assert_eq!(t.to_string(), "x -> y -> z");
        let t = parse_term("(x -> y) -> z").unwrap();
        assert_eq!(t.to_string(), "(x -> y) -> z");
        let t = parse_term("x * (y v z)").unwrap();
        assert_eq!(t.to_string(), "x * (y v z)");
        let t = parse_term("x * y * z").unwrap();
        assert_eq!(t.to_string(), "x * y * z");
        let t = parse_term("x * (y * z)").unwrap();
        assert_eq!(t.to_string(), "x * (y * z)");
        let t = parse_term("-(x ^ y)").unwrap();
        assert_eq!(t.to_string(), "~(x ^ y)");
        assert_eq!(parse_term("x -> F").unwrap().to_string(), "~x");
    }
}

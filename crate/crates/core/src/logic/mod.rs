//! Formulas: AST, concrete syntax, and syntactic transformations.
//!
//! The AST covers first-order logic over a vocabulary plus the numeric atoms,
//! second-order relation quantifiers, and the function-style binders
//! `EXINJ f.` / `EXFUN f.` whose variables are applied as terms `f(x)`.
//! [`elaborate`] removes the function sugar.

mod parse;
mod print;
mod transform;

use alloc::{
    collections::BTreeSet,
    string::{String, ToString},
    vec::Vec,
};

pub use parse::{parse_formula, parse_sentence, parse_with, ParseError, ParseOptions, Position};
pub use transform::{
    elaborate, forget_ranges, rename_free, simplify, substitute, LogicError, NameSupply,
    RESERVED_PREFIX,
};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(String),
    /// A constant symbol of the vocabulary.
    Const(String),
    Zero,
    Max,
    /// `f(t)` for a variable bound by a function-style binder.
    Apply(String, alloc::boxed::Box<Term>),
}

impl Term {
    pub fn var(name: &str) -> Self {
        Term::Var(name.to_string())
    }

    fn contains_apply(&self) -> bool {
        matches!(self, Term::Apply(..))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NumericOp {
    Eq,
    Le,
    Lt,
    Bit,
    Suc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Connective {
    And,
    Or,
    Implies,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Quantifier {
    Forall,
    Exists,
}

/// What a second-order quantifier ranges over.
///
/// `Functions` and `Injections` only apply to binary variables and restrict
/// them to graphs of total (resp. total injective) unary functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SoRange {
    Relations,
    Functions,
    Injections,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FunctionKind {
    Total,
    Injective,
}

use alloc::boxed::Box;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    True,
    False,
    /// Atom over a vocabulary relation.
    Rel(String, Vec<Term>),
    /// Atom over a second-order variable.
    SoAtom(String, Vec<Term>),
    Numeric(NumericOp, Term, Term),
    Not(Box<Formula>),
    Binary(Connective, Box<Formula>, Box<Formula>),
    Quant(Quantifier, String, Box<Formula>),
    SoQuant {
        quantifier: Quantifier,
        var: String,
        arity: usize,
        range: SoRange,
        body: Box<Formula>,
    },
    FunctionBinder {
        kind: FunctionKind,
        var: String,
        body: Box<Formula>,
    },
}

impl Formula {
    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::Binary(Connective::And, Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Binary(Connective::Or, Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Self {
        Formula::Binary(Connective::Implies, Box::new(a), Box::new(b))
    }

    pub fn forall(var: &str, body: Formula) -> Self {
        Formula::Quant(Quantifier::Forall, var.to_string(), Box::new(body))
    }

    pub fn exists(var: &str, body: Formula) -> Self {
        Formula::Quant(Quantifier::Exists, var.to_string(), Box::new(body))
    }

    pub fn eq(a: Term, b: Term) -> Self {
        Formula::Numeric(NumericOp::Eq, a, b)
    }

    /// Conjunction of all items; `true` when empty.
    pub fn all<I: IntoIterator<Item = Formula>>(items: I) -> Self {
        items
            .into_iter()
            .reduce(Formula::and)
            .unwrap_or(Formula::True)
    }

    /// Disjunction of all items; `false` when empty.
    pub fn any<I: IntoIterator<Item = Formula>>(items: I) -> Self {
        items
            .into_iter()
            .reduce(Formula::or)
            .unwrap_or(Formula::False)
    }

    pub fn is_atom(&self) -> bool {
        matches!(
            self,
            Formula::True
                | Formula::False
                | Formula::Rel(..)
                | Formula::SoAtom(..)
                | Formula::Numeric(..)
        )
    }

    /// Free first-order variables.
    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        let mut bound = Vec::new();
        collect_free(self, &mut bound, &mut out);
        out
    }

    /// Second-order variables used but not bound (function-style binders count
    /// as binders).
    pub fn free_so_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        let mut bound = Vec::new();
        collect_free_so(self, &mut bound, &mut out);
        out
    }

    pub fn is_sentence(&self) -> bool {
        self.free_vars().is_empty() && self.free_so_vars().is_empty()
    }

    /// True if function sugar remains (function binders or `f(x)` terms).
    pub fn has_sugar(&self) -> bool {
        let mut found = false;
        self.visit(&mut |f| match f {
            Formula::FunctionBinder { .. } => found = true,
            Formula::Rel(_, ts) | Formula::SoAtom(_, ts) => {
                found |= ts.iter().any(Term::contains_apply)
            }
            Formula::Numeric(_, a, b) => found |= a.contains_apply() || b.contains_apply(),
            _ => {}
        });
        found
    }

    pub fn has_second_order(&self) -> bool {
        let mut found = false;
        self.visit(&mut |f| {
            found |= matches!(
                f,
                Formula::SoQuant { .. } | Formula::FunctionBinder { .. } | Formula::SoAtom(..)
            )
        });
        found
    }

    /// Pre-order traversal.
    pub fn visit<F: FnMut(&Formula)>(&self, f: &mut F) {
        f(self);
        match self {
            Formula::Not(g) => g.visit(f),
            Formula::Binary(_, a, b) => {
                a.visit(f);
                b.visit(f);
            }
            Formula::Quant(_, _, body)
            | Formula::SoQuant { body, .. }
            | Formula::FunctionBinder { body, .. } => body.visit(f),
            _ => {}
        }
    }

    /// Every variable name occurring in the formula, bound or free, first- or
    /// second-order.
    pub fn names(&self) -> BTreeSet<String> {
        fn term_names(t: &Term, out: &mut BTreeSet<String>) {
            match t {
                Term::Var(v) => {
                    out.insert(v.clone());
                }
                Term::Apply(g, inner) => {
                    out.insert(g.clone());
                    term_names(inner, out);
                }
                _ => {}
            }
        }
        let mut out = BTreeSet::new();
        self.visit(&mut |f| match f {
            Formula::Rel(_, ts) => ts.iter().for_each(|t| term_names(t, &mut out)),
            Formula::SoAtom(x, ts) => {
                out.insert(x.clone());
                ts.iter().for_each(|t| term_names(t, &mut out));
            }
            Formula::Numeric(_, a, b) => {
                term_names(a, &mut out);
                term_names(b, &mut out);
            }
            Formula::Quant(_, v, _)
            | Formula::SoQuant { var: v, .. }
            | Formula::FunctionBinder { var: v, .. } => {
                out.insert(v.clone());
            }
            _ => {}
        });
        out
    }
}

fn term_free(t: &Term, bound: &[&str], out: &mut BTreeSet<String>) {
    match t {
        Term::Var(v) if !bound.contains(&v.as_str()) => {
            out.insert(v.clone());
        }
        Term::Apply(_, inner) => term_free(inner, bound, out),
        _ => {}
    }
}

fn collect_free<'a>(f: &'a Formula, bound: &mut Vec<&'a str>, out: &mut BTreeSet<String>) {
    match f {
        Formula::True | Formula::False => {}
        Formula::Rel(_, ts) | Formula::SoAtom(_, ts) => {
            ts.iter().for_each(|t| term_free(t, bound, out))
        }
        Formula::Numeric(_, a, b) => {
            term_free(a, bound, out);
            term_free(b, bound, out);
        }
        Formula::Not(g) => collect_free(g, bound, out),
        Formula::Binary(_, a, b) => {
            collect_free(a, bound, out);
            collect_free(b, bound, out);
        }
        Formula::Quant(_, v, body) => {
            bound.push(v);
            collect_free(body, bound, out);
            bound.pop();
        }
        Formula::SoQuant { body, .. } | Formula::FunctionBinder { body, .. } => {
            collect_free(body, bound, out)
        }
    }
}

fn collect_free_so<'a>(f: &'a Formula, bound: &mut Vec<&'a str>, out: &mut BTreeSet<String>) {
    fn term_apps(t: &Term, bound: &[&str], out: &mut BTreeSet<String>) {
        if let Term::Apply(g, inner) = t {
            if !bound.contains(&g.as_str()) {
                out.insert(g.clone());
            }
            term_apps(inner, bound, out);
        }
    }
    match f {
        Formula::True | Formula::False => {}
        Formula::Rel(_, ts) => ts.iter().for_each(|t| term_apps(t, bound, out)),
        Formula::SoAtom(x, ts) => {
            if !bound.contains(&x.as_str()) {
                out.insert(x.clone());
            }
            ts.iter().for_each(|t| term_apps(t, bound, out));
        }
        Formula::Numeric(_, a, b) => {
            term_apps(a, bound, out);
            term_apps(b, bound, out);
        }
        Formula::Not(g) => collect_free_so(g, bound, out),
        Formula::Binary(_, a, b) => {
            collect_free_so(a, bound, out);
            collect_free_so(b, bound, out);
        }
        Formula::Quant(_, _, body) => collect_free_so(body, bound, out),
        Formula::SoQuant { var, body, .. } | Formula::FunctionBinder { var, body, .. } => {
            bound.push(var);
            collect_free_so(body, bound, out);
            bound.pop();
        }
    }
}

/// True iff every atom is numeric: no vocabulary relations, no vocabulary
/// constants, no second-order variables.
pub fn is_numerical(formula: &Formula) -> bool {
    numeric_only(formula, false)
}

/// Like [`is_numerical`] but vocabulary constants may appear as terms. Truth
/// of such a formula depends only on the universe size, the assignment, and
/// the constants' values.
pub fn is_numerical_with_constants(formula: &Formula) -> bool {
    numeric_only(formula, true)
}

fn numeric_only(formula: &Formula, constants_ok: bool) -> bool {
    let term_ok = |t: &Term| match t {
        Term::Var(_) | Term::Zero | Term::Max => true,
        Term::Const(_) => constants_ok,
        Term::Apply(..) => false,
    };
    let mut ok = true;
    formula.visit(&mut |f| match f {
        Formula::Rel(..)
        | Formula::SoAtom(..)
        | Formula::SoQuant { .. }
        | Formula::FunctionBinder { .. } => ok = false,
        Formula::Numeric(_, a, b) => ok &= term_ok(a) && term_ok(b),
        _ => {}
    });
    ok
}

/// Shape of a formula with respect to second-order quantification.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SentenceClass {
    FirstOrder,
    /// A block of relation quantifiers over a first-order matrix.
    SoPrefix(Vec<(Quantifier, String, usize)>),
    /// Second-order quantifiers below connectives or first-order quantifiers.
    SecondOrder,
}

pub fn classify(formula: &Formula) -> SentenceClass {
    let mut prefix = Vec::new();
    let mut f = formula;
    loop {
        match f {
            Formula::SoQuant {
                quantifier,
                var,
                arity,
                body,
                ..
            } => {
                prefix.push((*quantifier, var.clone(), *arity));
                f = body;
            }
            Formula::FunctionBinder { var, body, .. } => {
                prefix.push((Quantifier::Exists, var.clone(), 2));
                f = body;
            }
            _ => break,
        }
    }
    let mut nested = false;
    f.visit(&mut |g| {
        nested |= matches!(g, Formula::SoQuant { .. } | Formula::FunctionBinder { .. })
    });
    match (nested, prefix.is_empty()) {
        (true, _) => SentenceClass::SecondOrder,
        (false, true) => SentenceClass::FirstOrder,
        (false, false) => SentenceClass::SoPrefix(prefix),
    }
}

//! Fresh names, capture-avoiding substitution, elaboration of function sugar,
//! and simplification.

use alloc::{
    boxed::Box,
    collections::{BTreeMap, BTreeSet},
    format,
    string::{String, ToString},
    vec::Vec,
};

use super::{Connective, Formula, FunctionKind, NumericOp, Quantifier, SoRange, Term};

/// Generated variables are named `_v0`, `_v1`, ...; the parser rejects this
/// namespace in user text.
pub const RESERVED_PREFIX: &str = "_v";

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LogicError {
    #[error("function term `{0}(..)` used outside its binder")]
    FunctionTermOutsideBinder(String),
}

/// Source of fresh variable names, disjoint from every name it was seeded with.
#[derive(Debug, Clone, Default)]
pub struct NameSupply {
    next: usize,
    avoid: BTreeSet<String>,
}

impl NameSupply {
    pub fn new() -> Self {
        Self::default()
    }

    /// A supply avoiding every name in the given formulas.
    pub fn avoiding<'a, I: IntoIterator<Item = &'a Formula>>(formulas: I) -> Self {
        let mut s = Self::new();
        for f in formulas {
            s.avoid_all(f.names());
        }
        s
    }

    pub fn avoid(&mut self, name: &str) {
        if let Some(n) = name
            .strip_prefix(RESERVED_PREFIX)
            .and_then(|d| d.parse::<usize>().ok())
        {
            self.next = self.next.max(n + 1);
        }
        self.avoid.insert(name.to_string());
    }

    pub fn avoid_all<I: IntoIterator<Item = String>>(&mut self, names: I) {
        for n in names {
            self.avoid(&n);
        }
    }

    pub fn fresh(&mut self) -> String {
        loop {
            let name = format!("{RESERVED_PREFIX}{}", self.next);
            self.next += 1;
            if !self.avoid.contains(&name) {
                self.avoid.insert(name.clone());
                return name;
            }
        }
    }
}

fn subst_term(t: &Term, map: &BTreeMap<String, Term>) -> Term {
    match t {
        Term::Var(v) => map.get(v).cloned().unwrap_or_else(|| t.clone()),
        Term::Apply(g, inner) => Term::Apply(g.clone(), Box::new(subst_term(inner, map))),
        _ => t.clone(),
    }
}

fn term_vars(t: &Term, out: &mut BTreeSet<String>) {
    match t {
        Term::Var(v) => {
            out.insert(v.clone());
        }
        Term::Apply(_, inner) => term_vars(inner, out),
        _ => {}
    }
}

/// Replaces free first-order variables by terms, renaming bound variables that
/// would capture a variable of a replacement term.
pub fn substitute(
    formula: &Formula,
    map: &BTreeMap<String, Term>,
    supply: &mut NameSupply,
) -> Formula {
    supply.avoid_all(formula.names());
    for t in map.values() {
        let mut vs = BTreeSet::new();
        term_vars(t, &mut vs);
        supply.avoid_all(vs);
    }
    subst(formula, map, supply)
}

fn subst(f: &Formula, map: &BTreeMap<String, Term>, supply: &mut NameSupply) -> Formula {
    if map.is_empty() {
        return f.clone();
    }
    match f {
        Formula::True | Formula::False => f.clone(),
        Formula::Rel(r, ts) => {
            Formula::Rel(r.clone(), ts.iter().map(|t| subst_term(t, map)).collect())
        }
        Formula::SoAtom(r, ts) => {
            Formula::SoAtom(r.clone(), ts.iter().map(|t| subst_term(t, map)).collect())
        }
        Formula::Numeric(op, a, b) => Formula::Numeric(*op, subst_term(a, map), subst_term(b, map)),
        Formula::Not(g) => Formula::not(subst(g, map, supply)),
        Formula::Binary(op, a, b) => Formula::Binary(
            *op,
            Box::new(subst(a, map, supply)),
            Box::new(subst(b, map, supply)),
        ),
        Formula::Quant(q, v, body) => {
            let mut inner = map.clone();
            inner.remove(v);
            let body_free = body.free_vars();
            inner.retain(|k, _| body_free.contains(k));
            let captures = inner.values().any(|t| {
                let mut vs = BTreeSet::new();
                term_vars(t, &mut vs);
                vs.contains(v)
            });
            if captures {
                let fresh = supply.fresh();
                inner.insert(v.clone(), Term::Var(fresh.clone()));
                Formula::Quant(*q, fresh, Box::new(subst(body, &inner, supply)))
            } else {
                Formula::Quant(*q, v.clone(), Box::new(subst(body, &inner, supply)))
            }
        }
        Formula::SoQuant {
            quantifier,
            var,
            arity,
            range,
            body,
        } => Formula::SoQuant {
            quantifier: *quantifier,
            var: var.clone(),
            arity: *arity,
            range: *range,
            body: Box::new(subst(body, map, supply)),
        },
        Formula::FunctionBinder { kind, var, body } => Formula::FunctionBinder {
            kind: *kind,
            var: var.clone(),
            body: Box::new(subst(body, map, supply)),
        },
    }
}

/// Renames free variables (`from -> to`), avoiding capture.
pub fn rename_free(
    formula: &Formula,
    renames: &[(String, String)],
    supply: &mut NameSupply,
) -> Formula {
    let map = renames
        .iter()
        .map(|(a, b)| (a.clone(), Term::Var(b.clone())))
        .collect();
    substitute(formula, &map, supply)
}

/// Replaces every second-order range restriction by plain relations.
///
/// On elaborated formulas this is the raw relational reading: the bodies of
/// restricted quantifiers already conjoin the totality/injectivity axioms.
pub fn forget_ranges(formula: &Formula) -> Formula {
    match formula {
        Formula::Not(g) => Formula::not(forget_ranges(g)),
        Formula::Binary(op, a, b) => {
            Formula::Binary(*op, Box::new(forget_ranges(a)), Box::new(forget_ranges(b)))
        }
        Formula::Quant(q, v, body) => Formula::Quant(*q, v.clone(), Box::new(forget_ranges(body))),
        Formula::SoQuant {
            quantifier,
            var,
            arity,
            body,
            ..
        } => Formula::SoQuant {
            quantifier: *quantifier,
            var: var.clone(),
            arity: *arity,
            range: SoRange::Relations,
            body: Box::new(forget_ranges(body)),
        },
        Formula::FunctionBinder { kind, var, body } => Formula::FunctionBinder {
            kind: *kind,
            var: var.clone(),
            body: Box::new(forget_ranges(body)),
        },
        _ => formula.clone(),
    }
}

/// Expands function-style binders into second-order relation quantifiers.
///
/// `EXINJ f. φ` becomes `EX2 f/2 inj. (Tot(f) & Inj(f)) & φ'` and `EXFUN f. φ`
/// becomes `EX2 f/2 fun. Tot(f) & φ'`, where `Tot(f)` says `f` is the graph of
/// a total function, `Inj(f)` says it is one-to-one, and `φ'` replaces every
/// atom `A[f(t)]` by `ex y. (f(t,y) & A[y])`. Totality plus injectivity on a
/// finite universe already forces a bijection, so no surjectivity axiom is
/// added. Already elaborated formulas are returned unchanged.
pub fn elaborate(formula: &Formula) -> Result<Formula, LogicError> {
    let mut supply = NameSupply::avoiding([formula]);
    let mut scope = Vec::new();
    elab(formula, &mut scope, &mut supply)
}

fn totality(f: &str, supply: &mut NameSupply) -> Formula {
    let (a, b, c) = (supply.fresh(), supply.fresh(), supply.fresh());
    let so =
        |x: &str, y: &str| Formula::SoAtom(f.to_string(), alloc::vec![Term::var(x), Term::var(y)]);
    let defined = Formula::forall(&a, Formula::exists(&b, so(&a, &b)));
    let functional = Formula::forall(
        &a,
        Formula::forall(
            &b,
            Formula::forall(
                &c,
                Formula::implies(
                    Formula::and(so(&a, &b), so(&a, &c)),
                    Formula::eq(Term::var(&b), Term::var(&c)),
                ),
            ),
        ),
    );
    Formula::and(defined, functional)
}

fn injectivity(f: &str, supply: &mut NameSupply) -> Formula {
    let (a, b, c) = (supply.fresh(), supply.fresh(), supply.fresh());
    let so =
        |x: &str, y: &str| Formula::SoAtom(f.to_string(), alloc::vec![Term::var(x), Term::var(y)]);
    Formula::forall(
        &a,
        Formula::forall(
            &b,
            Formula::forall(
                &c,
                Formula::implies(
                    Formula::and(so(&a, &c), so(&b, &c)),
                    Formula::eq(Term::var(&a), Term::var(&b)),
                ),
            ),
        ),
    )
}

fn elab(
    f: &Formula,
    scope: &mut Vec<String>,
    supply: &mut NameSupply,
) -> Result<Formula, LogicError> {
    Ok(match f {
        Formula::True | Formula::False => f.clone(),
        Formula::Rel(..) | Formula::SoAtom(..) | Formula::Numeric(..) => {
            expand_atom(f.clone(), scope, supply)?
        }
        Formula::Not(g) => Formula::not(elab(g, scope, supply)?),
        Formula::Binary(op, a, b) => Formula::Binary(
            *op,
            Box::new(elab(a, scope, supply)?),
            Box::new(elab(b, scope, supply)?),
        ),
        Formula::Quant(q, v, body) => {
            Formula::Quant(*q, v.clone(), Box::new(elab(body, scope, supply)?))
        }
        Formula::SoQuant {
            quantifier,
            var,
            arity,
            range,
            body,
        } => {
            // A relation variable hides an outer function variable of the same name.
            let hidden = scope.iter().position(|s| s == var);
            let saved = hidden.map(|i| scope.remove(i));
            let body = elab(body, scope, supply);
            if let (Some(i), Some(s)) = (hidden, saved) {
                scope.insert(i, s);
            }
            Formula::SoQuant {
                quantifier: *quantifier,
                var: var.clone(),
                arity: *arity,
                range: *range,
                body: Box::new(body?),
            }
        }
        Formula::FunctionBinder { kind, var, body } => {
            scope.push(var.clone());
            let body = elab(body, scope, supply);
            scope.pop();
            let body = body?;
            let (range, axioms) = match kind {
                FunctionKind::Total => (SoRange::Functions, totality(var, supply)),
                FunctionKind::Injective => {
                    let tot = totality(var, supply);
                    (
                        SoRange::Injections,
                        Formula::and(tot, injectivity(var, supply)),
                    )
                }
            };
            Formula::SoQuant {
                quantifier: Quantifier::Exists,
                var: var.clone(),
                arity: 2,
                range,
                body: Box::new(Formula::and(axioms, body)),
            }
        }
    })
}

/// Finds the leftmost innermost application in a term, replaces it by `y`, and
/// returns the removed `(function, argument)`.
fn take_application(t: &mut Term, y: &str) -> Option<(String, Term)> {
    match t {
        Term::Apply(g, inner) => {
            if let Some(found) = take_application(inner, y) {
                return Some(found);
            }
            let g = g.clone();
            let arg = (**inner).clone();
            *t = Term::var(y);
            Some((g, arg))
        }
        _ => None,
    }
}

fn atom_terms_mut(f: &mut Formula) -> Vec<&mut Term> {
    match f {
        Formula::Rel(_, ts) | Formula::SoAtom(_, ts) => ts.iter_mut().collect(),
        Formula::Numeric(_, a, b) => alloc::vec![a, b],
        _ => Vec::new(),
    }
}

fn expand_atom(
    mut atom: Formula,
    scope: &[String],
    supply: &mut NameSupply,
) -> Result<Formula, LogicError> {
    let has_apply = atom_terms_mut(&mut atom).iter().any(|t| t.contains_apply());
    if !has_apply {
        return Ok(atom);
    }
    let y = supply.fresh();
    let mut taken = None;
    for t in atom_terms_mut(&mut atom) {
        if let Some(found) = take_application(t, &y) {
            taken = Some(found);
            break;
        }
    }
    let (g, arg) = taken.expect("atom has an application");
    if !scope.contains(&g) {
        return Err(LogicError::FunctionTermOutsideBinder(g));
    }
    let graph = Formula::SoAtom(g, alloc::vec![arg, Term::var(&y)]);
    let rest = expand_atom(atom, scope, supply)?;
    Ok(Formula::exists(&y, Formula::and(graph, rest)))
}

/// Eliminates double negation, pushes negation through connectives to the
/// literals (not through quantifiers), and folds `true`/`false`.
pub fn simplify(formula: &Formula) -> Formula {
    positive(formula)
}

fn fold_and(a: Formula, b: Formula) -> Formula {
    match (a, b) {
        (Formula::False, _) | (_, Formula::False) => Formula::False,
        (Formula::True, x) | (x, Formula::True) => x,
        (a, b) => Formula::and(a, b),
    }
}

fn fold_or(a: Formula, b: Formula) -> Formula {
    match (a, b) {
        (Formula::True, _) | (_, Formula::True) => Formula::True,
        (Formula::False, x) | (x, Formula::False) => x,
        (a, b) => Formula::or(a, b),
    }
}

fn fold_implies(a: Formula, b: Formula) -> Formula {
    match (a, b) {
        (Formula::False, _) | (_, Formula::True) => Formula::True,
        (Formula::True, x) => x,
        (a, Formula::False) => negative(&a),
        (a, b) => Formula::implies(a, b),
    }
}

fn positive(f: &Formula) -> Formula {
    match f {
        Formula::Not(g) => negative(g),
        Formula::Binary(Connective::And, a, b) => fold_and(positive(a), positive(b)),
        Formula::Binary(Connective::Or, a, b) => fold_or(positive(a), positive(b)),
        Formula::Binary(Connective::Implies, a, b) => fold_implies(positive(a), positive(b)),
        Formula::Quant(q, v, body) => Formula::Quant(*q, v.clone(), Box::new(positive(body))),
        Formula::SoQuant {
            quantifier,
            var,
            arity,
            range,
            body,
        } => Formula::SoQuant {
            quantifier: *quantifier,
            var: var.clone(),
            arity: *arity,
            range: *range,
            body: Box::new(positive(body)),
        },
        Formula::FunctionBinder { kind, var, body } => Formula::FunctionBinder {
            kind: *kind,
            var: var.clone(),
            body: Box::new(positive(body)),
        },
        _ => f.clone(),
    }
}

fn negative(f: &Formula) -> Formula {
    match f {
        Formula::True => Formula::False,
        Formula::False => Formula::True,
        Formula::Not(g) => positive(g),
        Formula::Binary(Connective::And, a, b) => fold_or(negative(a), negative(b)),
        Formula::Binary(Connective::Or, a, b) => fold_and(negative(a), negative(b)),
        Formula::Binary(Connective::Implies, a, b) => fold_and(positive(a), negative(b)),
        Formula::Rel(..) | Formula::SoAtom(..) | Formula::Numeric(..) => Formula::not(f.clone()),
        _ => Formula::not(positive(f)),
    }
}

#[allow(dead_code)]
fn is_eq(f: &Formula) -> bool {
    matches!(f, Formula::Numeric(NumericOp::Eq, ..))
}

//! Random formula generation shared by the property tests.
#![allow(dead_code)]

use fopkit_core::logic::{Connective, Formula, FunctionKind, NumericOp, Quantifier, SoRange, Term};

pub const FO_VARS: &[&str] = &["x", "y", "z", "w", "u"];

/// Draws bounded choices from a proptest-generated tape; an exhausted tape
/// always answers 0, which steers generation towards atoms.
pub struct Tape(pub std::vec::IntoIter<u32>);

impl Tape {
    pub fn gen_range(&mut self, r: std::ops::Range<usize>) -> usize {
        r.start + self.0.next().map_or(0, |c| c as usize % (r.end - r.start))
    }

    pub fn gen_bool(&mut self) -> bool {
        self.gen_range(0..2) == 1
    }
}

#[derive(Clone, Default)]
pub struct Scope {
    so: Vec<(String, usize)>,
    funcs: Vec<String>,
}

pub fn term(rng: &mut Tape, scope: &Scope, allow_apply: bool) -> Term {
    match rng.gen_range(0..10) {
        0 => Term::Zero,
        1 => Term::Max,
        2 => Term::Const("k".into()),
        3 if allow_apply && !scope.funcs.is_empty() => {
            let f = scope.funcs[rng.gen_range(0..scope.funcs.len())].clone();
            Term::Apply(f, Box::new(term(rng, scope, false)))
        }
        _ => Term::var(FO_VARS[rng.gen_range(0..FO_VARS.len())]),
    }
}

pub fn atom(rng: &mut Tape, scope: &Scope) -> Formula {
    match rng.gen_range(0..9) {
        0 => Formula::True,
        1 => Formula::False,
        2 | 3 => Formula::Rel(
            "E".into(),
            vec![term(rng, scope, true), term(rng, scope, true)],
        ),
        4 if !scope.so.is_empty() => {
            let (name, arity) = scope.so[rng.gen_range(0..scope.so.len())].clone();
            Formula::SoAtom(name, (0..arity).map(|_| term(rng, scope, true)).collect())
        }
        _ => {
            let op = [
                NumericOp::Eq,
                NumericOp::Le,
                NumericOp::Lt,
                NumericOp::Bit,
                NumericOp::Suc,
            ][rng.gen_range(0..5)];
            Formula::Numeric(op, term(rng, scope, true), term(rng, scope, true))
        }
    }
}

pub fn formula(rng: &mut Tape, scope: &Scope, depth: u32) -> Formula {
    if depth == 0 || rng.gen_range(0..4) == 0 {
        return atom(rng, scope);
    }
    let sub = |rng: &mut Tape, scope: &Scope| formula(rng, scope, depth - 1);
    match rng.gen_range(0..8) {
        0 => Formula::not(sub(rng, scope)),
        1..=3 => {
            let op = [Connective::And, Connective::Or, Connective::Implies][rng.gen_range(0..3)];
            Formula::Binary(op, Box::new(sub(rng, scope)), Box::new(sub(rng, scope)))
        }
        4 | 5 => {
            let q = if rng.gen_bool() {
                Quantifier::Forall
            } else {
                Quantifier::Exists
            };
            let v = FO_VARS[rng.gen_range(0..FO_VARS.len())];
            Formula::Quant(q, v.into(), Box::new(sub(rng, scope)))
        }
        6 => {
            let var = ["P", "R"][rng.gen_range(0..2)].to_string();
            let (arity, range) = match rng.gen_range(0..4) {
                0 => (2, SoRange::Functions),
                1 => (2, SoRange::Injections),
                _ => (rng.gen_range(1..3), SoRange::Relations),
            };
            let mut inner = scope.clone();
            inner.so.retain(|(n, _)| *n != var);
            inner.so.push((var.clone(), arity));
            let quantifier = if rng.gen_bool() {
                Quantifier::Forall
            } else {
                Quantifier::Exists
            };
            Formula::SoQuant {
                quantifier,
                var,
                arity,
                range,
                body: Box::new(sub(rng, &inner)),
            }
        }
        _ => {
            let var = ["f", "g"][rng.gen_range(0..2)].to_string();
            let kind = if rng.gen_bool() {
                FunctionKind::Total
            } else {
                FunctionKind::Injective
            };
            let mut inner = scope.clone();
            inner.funcs.retain(|n| *n != var);
            inner.funcs.push(var.clone());
            Formula::FunctionBinder {
                kind,
                var,
                body: Box::new(sub(rng, &inner)),
            }
        }
    }
}

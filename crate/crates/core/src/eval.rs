//! Brute-force model checking.
//!
//! Formulas are compiled against a vocabulary into an index-based tree, then
//! evaluated by direct recursion. Second-order quantifiers enumerate every
//! interpretation of their variable: all `2^(n^a)` relations, or only the
//! `n^n` function graphs / `n!` permutation graphs when the quantifier carries
//! a range restriction. Interpretations are visited in a fixed order, so the
//! first witness found is reproducible.

use alloc::{
    boxed::Box,
    collections::BTreeMap,
    string::{String, ToString},
    sync::Arc,
    vec,
    vec::Vec,
};

use crate::logic::{Connective, Formula, NumericOp, Quantifier, SoRange, Term};
use crate::model::{checked_pow, ModelError, Structure, StructureSpace, TupleSet, Vocabulary};
use crate::DEFAULT_BUDGET;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EvalError {
    #[error("free variable `{0}` has no value")]
    UnassignedFreeVariable(String),
    #[error("sentence has free variable `{0}`")]
    FreeVariableInSentence(String),
    #[error("formula has second-order quantifiers")]
    NotFirstOrder,
    #[error("formula still contains function-style binders or terms; elaborate it first")]
    NotElaborated,
    #[error("symbol `{0}` is not in the vocabulary")]
    UnknownSymbol(String),
    #[error("`{symbol}` used with {found} arguments, expected {expected}")]
    ArityMismatch {
        symbol: String,
        expected: usize,
        found: usize,
    },
    #[error("second-order variable `{0}`: function and injection ranges need arity 2")]
    InvalidRange(String),
    #[error("evaluation needs about {estimate} interpretations, over the budget of {budget}")]
    BudgetExceeded { estimate: u64, budget: u64 },
    #[error("sentence does not start with an existential second-order quantifier")]
    NotExistentialPrefix,
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Values for free variables: elements for first-order ones, tuple sets for
/// second-order ones.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Assignment {
    fo: BTreeMap<String, usize>,
    so: BTreeMap<String, TupleSet>,
}

impl Assignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, var: &str, value: usize) -> Self {
        self.set(var, value);
        self
    }

    pub fn with_relation(mut self, var: &str, value: TupleSet) -> Self {
        self.set_relation(var, value);
        self
    }

    pub fn set(&mut self, var: &str, value: usize) {
        self.fo.insert(var.to_string(), value);
    }

    pub fn set_relation(&mut self, var: &str, value: TupleSet) {
        self.so.insert(var.to_string(), value);
    }

    pub fn get(&self, var: &str) -> Option<usize> {
        self.fo.get(var).copied()
    }

    pub fn relation(&self, var: &str) -> Option<&TupleSet> {
        self.so.get(var)
    }
}

#[derive(Debug, Clone, Copy)]
enum Val {
    Slot(usize),
    Const(usize),
    Zero,
    Max,
}

#[derive(Debug, Clone)]
enum Node {
    True,
    False,
    Rel(usize, Vec<Val>),
    So(usize, Vec<Val>),
    Num(NumericOp, Val, Val),
    Not(Box<Node>),
    And(Box<Node>, Box<Node>),
    Or(Box<Node>, Box<Node>),
    Implies(Box<Node>, Box<Node>),
    Quant(Quantifier, usize, Box<Node>),
    SoQuant {
        quantifier: Quantifier,
        slot: usize,
        range: SoRange,
        body: Box<Node>,
    },
}

/// A formula compiled for one vocabulary, with an ordered list of first- and
/// second-order parameters supplied at evaluation time.
#[derive(Debug, Clone)]
pub struct Program {
    vocab: Arc<Vocabulary>,
    root: Node,
    fo_params: usize,
    fo_slots: usize,
    so_arities: Vec<usize>,
    so_params: usize,
}

struct Compiler<'a> {
    vocab: &'a Vocabulary,
    fo_scope: Vec<(String, usize)>,
    so_scope: Vec<(String, usize)>,
    fo_slots: usize,
    so_arities: Vec<usize>,
}

impl Compiler<'_> {
    fn term(&self, t: &Term) -> Result<Val, EvalError> {
        match t {
            Term::Var(v) => self
                .fo_scope
                .iter()
                .rev()
                .find(|(name, _)| name == v)
                .map(|&(_, slot)| Val::Slot(slot))
                .ok_or_else(|| EvalError::UnassignedFreeVariable(v.clone())),
            Term::Const(c) => self
                .vocab
                .constant_index(c)
                .map(Val::Const)
                .ok_or_else(|| EvalError::UnknownSymbol(c.clone())),
            Term::Zero => Ok(Val::Zero),
            Term::Max => Ok(Val::Max),
            Term::Apply(..) => Err(EvalError::NotElaborated),
        }
    }

    fn terms(&self, ts: &[Term]) -> Result<Vec<Val>, EvalError> {
        ts.iter().map(|t| self.term(t)).collect()
    }

    fn node(&mut self, f: &Formula) -> Result<Node, EvalError> {
        Ok(match f {
            Formula::True => Node::True,
            Formula::False => Node::False,
            Formula::Rel(r, ts) => {
                let idx = self
                    .vocab
                    .relation_index(r)
                    .ok_or_else(|| EvalError::UnknownSymbol(r.clone()))?;
                let expected = self.vocab.relations()[idx].1;
                if expected != ts.len() {
                    return Err(EvalError::ArityMismatch {
                        symbol: r.clone(),
                        expected,
                        found: ts.len(),
                    });
                }
                Node::Rel(idx, self.terms(ts)?)
            }
            Formula::SoAtom(x, ts) => {
                let &(_, slot) = self
                    .so_scope
                    .iter()
                    .rev()
                    .find(|(name, _)| name == x)
                    .ok_or_else(|| EvalError::UnassignedFreeVariable(x.clone()))?;
                let expected = self.so_arities[slot];
                if expected != ts.len() {
                    return Err(EvalError::ArityMismatch {
                        symbol: x.clone(),
                        expected,
                        found: ts.len(),
                    });
                }
                Node::So(slot, self.terms(ts)?)
            }
            Formula::Numeric(op, a, b) => Node::Num(*op, self.term(a)?, self.term(b)?),
            Formula::Not(g) => Node::Not(Box::new(self.node(g)?)),
            Formula::Binary(op, a, b) => {
                let (a, b) = (Box::new(self.node(a)?), Box::new(self.node(b)?));
                match op {
                    Connective::And => Node::And(a, b),
                    Connective::Or => Node::Or(a, b),
                    Connective::Implies => Node::Implies(a, b),
                }
            }
            Formula::Quant(q, v, body) => {
                let slot = self.fo_slots;
                self.fo_slots += 1;
                self.fo_scope.push((v.clone(), slot));
                let body = self.node(body);
                self.fo_scope.pop();
                Node::Quant(*q, slot, Box::new(body?))
            }
            Formula::SoQuant {
                quantifier,
                var,
                arity,
                range,
                body,
            } => {
                if *range != SoRange::Relations && *arity != 2 {
                    return Err(EvalError::InvalidRange(var.clone()));
                }
                let slot = self.so_arities.len();
                self.so_arities.push(*arity);
                self.so_scope.push((var.clone(), slot));
                let body = self.node(body);
                self.so_scope.pop();
                Node::SoQuant {
                    quantifier: *quantifier,
                    slot,
                    range: *range,
                    body: Box::new(body?),
                }
            }
            Formula::FunctionBinder { .. } => return Err(EvalError::NotElaborated),
        })
    }
}

impl Program {
    /// Compiles `formula`; its free first-order variables must all be among
    /// `fo_params` and its free second-order variables among `so_params`
    /// (name, arity).
    pub fn compile(
        formula: &Formula,
        vocab: &Arc<Vocabulary>,
        fo_params: &[String],
        so_params: &[(String, usize)],
    ) -> Result<Self, EvalError> {
        let mut c = Compiler {
            vocab,
            fo_scope: fo_params.iter().cloned().zip(0..).collect(),
            so_scope: so_params
                .iter()
                .map(|(name, _)| name.clone())
                .zip(0..)
                .collect(),
            fo_slots: fo_params.len(),
            so_arities: so_params.iter().map(|&(_, a)| a).collect(),
        };
        let root = c.node(formula)?;
        Ok(Program {
            vocab: vocab.clone(),
            root,
            fo_params: fo_params.len(),
            fo_slots: c.fo_slots,
            so_arities: c.so_arities,
            so_params: so_params.len(),
        })
    }

    /// Compiles a sentence (no free variables of either order).
    pub fn sentence(formula: &Formula, vocab: &Arc<Vocabulary>) -> Result<Self, EvalError> {
        if let Some(v) = formula.free_vars().into_iter().next() {
            return Err(EvalError::FreeVariableInSentence(v));
        }
        if let Some(v) = formula.free_so_vars().into_iter().next() {
            return Err(EvalError::FreeVariableInSentence(v));
        }
        Self::compile(formula, vocab, &[], &[])
    }

    pub fn vocab(&self) -> &Arc<Vocabulary> {
        &self.vocab
    }

    /// Number of second-order interpretations a full evaluation on a universe
    /// of `size` elements may visit, saturating at `u64::MAX`.
    pub fn estimate(&self, size: usize) -> u64 {
        estimate(&self.root, size, &self.so_arities)
    }

    pub fn eval(
        &self,
        structure: &Structure,
        fo_args: &[usize],
        so_args: &[TupleSet],
        budget: u64,
    ) -> Result<bool, EvalError> {
        let mut ctx = self.context(structure, fo_args, so_args, budget)?;
        Ok(eval_node(&self.root, &mut ctx))
    }

    /// Evaluates a sentence compiled with [`Program::sentence`].
    pub fn holds(&self, structure: &Structure, budget: u64) -> Result<bool, EvalError> {
        self.eval(structure, &[], &[], budget)
    }

    fn context<'s>(
        &self,
        structure: &'s Structure,
        fo_args: &[usize],
        so_args: &[TupleSet],
        budget: u64,
    ) -> Result<Ctx<'s>, EvalError> {
        structure.check_vocab(&self.vocab)?;
        let n = structure.size();
        assert_eq!(fo_args.len(), self.fo_params, "first-order argument count");
        assert_eq!(so_args.len(), self.so_params, "second-order argument count");
        if let Some(&v) = fo_args.iter().find(|&&v| v >= n) {
            return Err(ModelError::OutOfRange {
                symbol: "assignment".into(),
                value: v,
                size: n,
            }
            .into());
        }
        for (arg, &arity) in so_args.iter().zip(&self.so_arities) {
            if arg.arity() != arity || arg.size() != n {
                return Err(EvalError::ArityMismatch {
                    symbol: "second-order argument".into(),
                    expected: arity,
                    found: arg.arity(),
                });
            }
        }
        let est = self.estimate(n);
        if est > budget {
            return Err(EvalError::BudgetExceeded {
                estimate: est,
                budget,
            });
        }
        let mut fo = vec![0; self.fo_slots];
        fo[..fo_args.len()].copy_from_slice(fo_args);
        let mut so: Vec<TupleSet> = self
            .so_arities
            .iter()
            .map(|&a| TupleSet::empty(n, a))
            .collect();
        for (slot, arg) in so.iter_mut().zip(so_args) {
            slot.clone_from(arg);
        }
        Ok(Ctx {
            s: structure,
            n,
            fo,
            so,
        })
    }
}

fn range_size(range: SoRange, n: usize, arity: usize) -> u64 {
    match range {
        SoRange::Relations => match checked_pow(n, arity) {
            Some(cap) if cap < 64 => 1u64 << cap,
            _ => u64::MAX,
        },
        SoRange::Functions => (0..n).fold(1u64, |acc, _| acc.saturating_mul(n as u64)),
        SoRange::Injections => (1..=n as u64).fold(1u64, |acc, i| acc.saturating_mul(i)),
    }
}

fn estimate(node: &Node, n: usize, arities: &[usize]) -> u64 {
    match node {
        Node::True | Node::False | Node::Rel(..) | Node::So(..) | Node::Num(..) => 0,
        Node::Not(g) => estimate(g, n, arities),
        Node::And(a, b) | Node::Or(a, b) | Node::Implies(a, b) => {
            estimate(a, n, arities).saturating_add(estimate(b, n, arities))
        }
        Node::Quant(_, _, body) => estimate(body, n, arities).saturating_mul(n as u64),
        Node::SoQuant {
            slot, range, body, ..
        } => range_size(*range, n, arities[*slot])
            .saturating_mul(estimate(body, n, arities).saturating_add(1)),
    }
}

struct Ctx<'s> {
    s: &'s Structure,
    n: usize,
    fo: Vec<usize>,
    so: Vec<TupleSet>,
}

impl Ctx<'_> {
    #[inline]
    fn val(&self, v: Val) -> usize {
        match v {
            Val::Slot(i) => self.fo[i],
            Val::Const(i) => self.s.constants()[i],
            Val::Zero => 0,
            Val::Max => self.n - 1,
        }
    }

    #[inline]
    fn index(&self, args: &[Val]) -> usize {
        args.iter().fold(0, |acc, &v| acc * self.n + self.val(v))
    }
}

fn eval_node(node: &Node, ctx: &mut Ctx) -> bool {
    match node {
        Node::True => true,
        Node::False => false,
        Node::Rel(r, args) => {
            let i = ctx.index(args);
            ctx.s.relations()[*r].contains_index(i)
        }
        Node::So(slot, args) => {
            let i = ctx.index(args);
            ctx.so[*slot].contains_index(i)
        }
        Node::Num(op, a, b) => {
            let (a, b) = (ctx.val(*a), ctx.val(*b));
            match op {
                NumericOp::Eq => a == b,
                NumericOp::Le => a <= b,
                NumericOp::Lt => a < b,
                NumericOp::Bit => a.checked_shr(b as u32).is_some_and(|v| v & 1 == 1),
                NumericOp::Suc => a.checked_add(1) == Some(b),
            }
        }
        Node::Not(g) => !eval_node(g, ctx),
        Node::And(a, b) => eval_node(a, ctx) && eval_node(b, ctx),
        Node::Or(a, b) => eval_node(a, ctx) || eval_node(b, ctx),
        Node::Implies(a, b) => !eval_node(a, ctx) || eval_node(b, ctx),
        Node::Quant(q, slot, body) => {
            let want = *q == Quantifier::Exists;
            for v in 0..ctx.n {
                ctx.fo[*slot] = v;
                if eval_node(body, ctx) == want {
                    return want;
                }
            }
            !want
        }
        Node::SoQuant {
            quantifier,
            slot,
            range,
            body,
        } => {
            let want = *quantifier == Quantifier::Exists;
            let stopped = enumerate(ctx, *slot, *range, &mut |c| eval_node(body, c) == want);
            if stopped {
                want
            } else {
                !want
            }
        }
    }
}

fn set_graph(set: &mut TupleSet, n: usize, values: &[usize]) {
    set.clear();
    for (a, &b) in values.iter().enumerate() {
        set.insert_index(a * n + b);
    }
}

/// Rearranges `perm` into the next permutation in lexicographic order;
/// false once the last one has been passed.
fn next_permutation(perm: &mut [usize]) -> bool {
    let Some(i) = (1..perm.len()).rev().find(|&i| perm[i - 1] < perm[i]) else {
        return false;
    };
    let j = (i..perm.len())
        .rev()
        .find(|&j| perm[j] > perm[i - 1])
        .expect("pivot exists");
    perm.swap(i - 1, j);
    perm[i..].reverse();
    true
}

/// Assigns every interpretation in the range to `slot` in turn and stops as
/// soon as `visit` returns true. Returns whether it stopped early.
///
/// Relations are visited by bit counter (empty set first); functions as value
/// vectors in lexicographic order; injections as permutations in
/// lexicographic order.
fn enumerate(
    ctx: &mut Ctx,
    slot: usize,
    range: SoRange,
    visit: &mut dyn FnMut(&mut Ctx) -> bool,
) -> bool {
    let n = ctx.n;
    match range {
        SoRange::Relations => {
            let cap = ctx.so[slot].capacity();
            debug_assert!(cap < 64, "budget check admits only small relation spaces");
            for code in 0..(1u64 << cap) {
                ctx.so[slot].set_code(code);
                if visit(ctx) {
                    return true;
                }
            }
            false
        }
        SoRange::Functions => {
            let mut values = vec![0; n];
            loop {
                set_graph(&mut ctx.so[slot], n, &values);
                if visit(ctx) {
                    return true;
                }
                let Some(i) = values.iter().rposition(|&v| v + 1 < n) else {
                    return false;
                };
                values[i] += 1;
                values[i + 1..].iter_mut().for_each(|v| *v = 0);
            }
        }
        SoRange::Injections => {
            let mut perm: Vec<usize> = (0..n).collect();
            loop {
                set_graph(&mut ctx.so[slot], n, &perm);
                if visit(ctx) {
                    return true;
                }
                if !next_permutation(&mut perm) {
                    return false;
                }
            }
        }
    }
}

fn compile_with_assignment(
    structure: &Structure,
    formula: &Formula,
    assignment: &Assignment,
) -> Result<(Program, Vec<usize>, Vec<TupleSet>), EvalError> {
    let fo_names: Vec<String> = formula.free_vars().into_iter().collect();
    let fo_args = fo_names
        .iter()
        .map(|v| {
            assignment
                .get(v)
                .ok_or_else(|| EvalError::UnassignedFreeVariable(v.clone()))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut so_params = Vec::new();
    let mut so_args = Vec::new();
    for x in formula.free_so_vars() {
        let set = assignment
            .relation(&x)
            .ok_or_else(|| EvalError::UnassignedFreeVariable(x.clone()))?;
        so_params.push((x, set.arity()));
        so_args.push(set.clone());
    }
    let program = Program::compile(formula, structure.vocab(), &fo_names, &so_params)?;
    Ok((program, fo_args, so_args))
}

/// Truth of an arbitrary (elaborated) formula under an assignment.
pub fn eval(
    structure: &Structure,
    formula: &Formula,
    assignment: &Assignment,
    budget: u64,
) -> Result<bool, EvalError> {
    let (program, fo, so) = compile_with_assignment(structure, formula, assignment)?;
    program.eval(structure, &fo, &so, budget)
}

/// Truth of a first-order formula under an assignment.
pub fn eval_fo(
    structure: &Structure,
    formula: &Formula,
    assignment: &Assignment,
) -> Result<bool, EvalError> {
    let mut second_order = false;
    formula.visit(&mut |f| {
        second_order |= matches!(f, Formula::SoQuant { .. } | Formula::FunctionBinder { .. })
    });
    if second_order {
        return Err(EvalError::NotFirstOrder);
    }
    eval(structure, formula, assignment, DEFAULT_BUDGET)
}

/// Truth of a sentence, with the default budget.
pub fn eval_so(structure: &Structure, sentence: &Formula) -> Result<bool, EvalError> {
    eval_so_with_budget(structure, sentence, DEFAULT_BUDGET)
}

pub fn eval_so_with_budget(
    structure: &Structure,
    sentence: &Formula,
    budget: u64,
) -> Result<bool, EvalError> {
    Program::sentence(sentence, structure.vocab())?.holds(structure, budget)
}

/// All structures of one size satisfying a sentence, in enumeration order.
pub fn models(
    vocab: &Arc<Vocabulary>,
    size: usize,
    sentence: &Formula,
) -> Result<Vec<Structure>, EvalError> {
    let program = Program::sentence(sentence, vocab)?;
    let space = StructureSpace::new(vocab, size..=size)?;
    if space.len() > DEFAULT_BUDGET {
        return Err(EvalError::BudgetExceeded {
            estimate: space.len(),
            budget: DEFAULT_BUDGET,
        });
    }
    let mut out = Vec::new();
    for s in space.iter() {
        if program.holds(&s, DEFAULT_BUDGET)? {
            out.push(s);
        }
    }
    Ok(out)
}

/// Interpretations of the leading existential second-order variables under
/// which the rest of the sentence holds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub relations: Vec<(String, TupleSet)>,
}

/// Splits off the leading block of existential second-order quantifiers.
fn existential_prefix(sentence: &Formula) -> (Vec<(String, usize, SoRange)>, &Formula) {
    let mut prefix = Vec::new();
    let mut f = sentence;
    while let Formula::SoQuant {
        quantifier: Quantifier::Exists,
        var,
        arity,
        range,
        body,
    } = f
    {
        prefix.push((var.clone(), *arity, *range));
        f = body;
    }
    (prefix, f)
}

impl Witness {
    /// Re-evaluates the matrix of `sentence` under this witness.
    pub fn verify(&self, structure: &Structure, sentence: &Formula) -> Result<bool, EvalError> {
        let (prefix, matrix) = existential_prefix(sentence);
        let names: Vec<&str> = prefix.iter().map(|(v, ..)| v.as_str()).collect();
        let given: Vec<&str> = self.relations.iter().map(|(v, _)| v.as_str()).collect();
        if names != given {
            return Ok(false);
        }
        let assignment = self
            .relations
            .iter()
            .fold(Assignment::new(), |a, (v, set)| {
                a.with_relation(v, set.clone())
            });
        eval(structure, matrix, &assignment, DEFAULT_BUDGET)
    }
}

impl core::fmt::Display for Witness {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        for (i, (v, set)) in self.relations.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{v} = {set}")?;
        }
        Ok(())
    }
}

/// The first witness, in enumeration order, for the leading existential block
/// of a sentence.
pub fn find_witness(
    structure: &Structure,
    sentence: &Formula,
) -> Result<Option<Witness>, EvalError> {
    let (prefix, matrix) = existential_prefix(sentence);
    if prefix.is_empty() {
        return Err(EvalError::NotExistentialPrefix);
    }
    let whole = Program::sentence(sentence, structure.vocab())?;
    let params: Vec<(String, usize)> = prefix.iter().map(|(v, a, _)| (v.clone(), *a)).collect();
    if let Some((v, _, _)) = prefix
        .iter()
        .find(|(_, a, r)| *r != SoRange::Relations && *a != 2)
    {
        return Err(EvalError::InvalidRange(v.clone()));
    }
    let program = Program::compile(matrix, structure.vocab(), &[], &params)?;
    let est = whole.estimate(structure.size());
    if est > DEFAULT_BUDGET {
        return Err(EvalError::BudgetExceeded {
            estimate: est,
            budget: DEFAULT_BUDGET,
        });
    }
    let empty: Vec<TupleSet> = params
        .iter()
        .map(|&(_, a)| TupleSet::empty(structure.size(), a))
        .collect();
    let mut ctx = program.context(structure, &[], &empty, u64::MAX)?;
    let ranges: Vec<SoRange> = prefix.iter().map(|&(_, _, r)| r).collect();
    if search(&program.root, &ranges, 0, &mut ctx) {
        let relations = prefix
            .into_iter()
            .zip(ctx.so)
            .map(|((v, ..), set)| (v, set))
            .collect();
        Ok(Some(Witness { relations }))
    } else {
        Ok(None)
    }
}

fn search(matrix: &Node, ranges: &[SoRange], i: usize, ctx: &mut Ctx) -> bool {
    if i == ranges.len() {
        return eval_node(matrix, ctx);
    }
    enumerate(ctx, i, ranges[i], &mut |c| search(matrix, ranges, i + 1, c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::{elaborate, forget_ranges, parse_formula, parse_sentence};
    use crate::model::{enumerate_structures, make_structure, string_to_structure};

    fn graph(n: usize, edges: &[[usize; 2]], k: usize) -> Structure {
        make_structure(&Vocabulary::graph(), n, [("E", edges.iter())], [("k", k)]).unwrap()
    }

    fn sentence(text: &str) -> Formula {
        elaborate(&parse_sentence(text, &Vocabulary::graph()).unwrap()).unwrap()
    }

    const PSI_IS: &str = "EXINJ f. all x y. (x != y & f(x) <= k & f(y) <= k -> !E(x,y))";

    #[test]
    fn first_order_examples() {
        let a = graph(3, &[[0, 1]], 0);
        assert!(eval_so(&a, &sentence("ex x. ex y. E(x,y)")).unwrap());
        let bit = parse_formula("BIT(x,y)", &Vocabulary::graph()).unwrap();
        let at = |x, y| eval_fo(&a, &bit, &Assignment::new().with("x", x).with("y", y)).unwrap();
        assert!(at(2, 1));
        assert!(!at(2, 0));
        assert!(eval_so(&a, &sentence("0 <= max")).unwrap());
        assert_eq!(
            eval_fo(&a, &bit, &Assignment::new().with("x", 2)),
            Err(EvalError::UnassignedFreeVariable("y".into()))
        );
    }

    #[test]
    fn second_order_examples() {
        let all_r = sentence("ALL2 R/1. ex x. R(x)");
        for n in 1..=3 {
            for s in enumerate_structures(&Vocabulary::graph(), n).unwrap() {
                assert!(!eval_so(&s, &all_r).unwrap());
            }
        }
        let psi = sentence(PSI_IS);
        assert!(eval_so(&graph(3, &[], 1), &psi).unwrap());
        let complete = [[0, 1], [0, 2], [1, 0], [1, 2], [2, 0], [2, 1]];
        assert!(!eval_so(&graph(3, &complete, 1), &psi).unwrap());
    }

    #[test]
    fn free_variables_in_sentences_are_rejected() {
        let f = parse_formula("E(x,x)", &Vocabulary::graph()).unwrap();
        assert_eq!(
            eval_so(&graph(1, &[], 0), &f),
            Err(EvalError::FreeVariableInSentence("x".into()))
        );
    }

    #[test]
    fn models_examples() {
        let q = Vocabulary::string();
        let f = parse_sentence("Q(0)", &q).unwrap();
        assert_eq!(models(&q, 1, &f).unwrap().len(), 1);
        let g = Vocabulary::graph();
        assert_eq!(
            models(&g, 2, &sentence("ex x. ex y. E(x,y)"))
                .unwrap()
                .len(),
            30
        );
        let all: Vec<_> = enumerate_structures(&g, 2).unwrap().collect();
        assert_eq!(models(&g, 2, &Formula::True).unwrap(), all);
    }

    #[test]
    fn witnesses() {
        let psi = sentence(PSI_IS);
        let a = graph(3, &[], 1);
        let w = find_witness(&a, &psi).unwrap().unwrap();
        assert!(w.verify(&a, &psi).unwrap());
        assert_eq!(
            w.relations[0].1.iter().collect::<Vec<_>>(),
            [[0, 0], [1, 1], [2, 2]]
        );
        let complete = [[0, 1], [0, 2], [1, 0], [1, 2], [2, 0], [2, 1]];
        assert_eq!(find_witness(&graph(3, &complete, 1), &psi).unwrap(), None);

        let s = string_to_structure("00").unwrap();
        let f = parse_sentence("EX2 R/1. all x. R(x)", &Vocabulary::string()).unwrap();
        let w = find_witness(&s, &f).unwrap().unwrap();
        assert_eq!(w.to_string(), "R = {(0),(1)}");
        assert_eq!(
            find_witness(&s, &Formula::True),
            Err(EvalError::NotExistentialPrefix)
        );
    }

    #[test]
    fn function_ranges_match_raw_relations() {
        let psi = sentence(PSI_IS);
        let raw = forget_ranges(&psi);
        for n in 1..=3 {
            for s in enumerate_structures(&Vocabulary::graph(), n).unwrap() {
                assert_eq!(
                    eval_so(&s, &psi).unwrap(),
                    eval_so(&s, &raw).unwrap(),
                    "{s}"
                );
            }
        }
        let fun = sentence("EXFUN g. all x. g(x) != x");
        let fun_raw = forget_ranges(&fun);
        for n in 1..=3 {
            let s = graph(n, &[], 0);
            assert_eq!(eval_so(&s, &fun).unwrap(), n > 1);
            assert_eq!(eval_so(&s, &fun_raw).unwrap(), n > 1);
        }
    }

    #[test]
    fn budget_is_enforced() {
        let f = sentence("EX2 R/2. R(0,0)");
        let s = graph(5, &[], 0);
        assert!(matches!(
            eval_so(&s, &f),
            Err(EvalError::BudgetExceeded { .. })
        ));
        assert!(eval_so_with_budget(&graph(4, &[], 0), &f, 1 << 16).unwrap());
    }

    #[test]
    fn permutations_in_lexicographic_order() {
        let mut p = [0, 1, 2];
        let mut seen = vec![p];
        while next_permutation(&mut p) {
            seen.push(p);
        }
        assert_eq!(
            seen,
            [
                [0, 1, 2],
                [0, 2, 1],
                [1, 0, 2],
                [1, 2, 0],
                [2, 0, 1],
                [2, 1, 0]
            ]
        );
    }
}

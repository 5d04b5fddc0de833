//! First-order queries and projections.
//!
//! A query of arity `k` from `τ` to `σ` is given by a universe formula over
//! `k` variables, one formula over `k·a` variables per `a`-ary relation of
//! `σ`, and one defining conjunction `x1 = c1 & ... & xk = ck` per constant of
//! `σ`. Applying it to a `τ`-structure keeps the `k`-tuples satisfying the
//! universe formula, numbered by lexicographic rank.

use alloc::{
    collections::BTreeMap,
    format,
    string::{String, ToString},
    sync::Arc,
    vec,
    vec::Vec,
};
use core::ops::{Deref, RangeInclusive};

use crate::eval::{EvalError, Program};
use crate::logic::{
    is_numerical, is_numerical_with_constants, parse_formula, Connective, Formula, NumericOp,
    ParseError, Term,
};
use crate::model::{checked_pow, ModelError, Structure, StructureSpace, TupleSet, Vocabulary};
use crate::DEFAULT_BUDGET;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum QueryError {
    #[error("query arity must be at least 1")]
    ZeroArity,
    #[error("`{0}` is not a symbol of the target vocabulary")]
    UnknownTargetSymbol(String),
    #[error("no definition for target symbol `{0}`")]
    MissingComponent(String),
    #[error("target symbol `{0}` defined twice")]
    DuplicateComponent(String),
    #[error("component `{component}` takes {expected} variables, {found} given")]
    ParamCount {
        component: String,
        expected: usize,
        found: usize,
    },
    #[error("component `{component}` repeats variable `{var}`")]
    DuplicateParam { component: String, var: String },
    #[error("component `{component}` uses variable `{var}` that is not one of its parameters")]
    StrayVariable { component: String, var: String },
    #[error("component `{0}` must be an elaborated first-order formula")]
    NotFirstOrder(String),
    #[error("constant `{0}` must be defined by a conjunction `x1 = c1 & ...` naming one term per parameter")]
    BadConstantShape(String),
    #[error("no tuple satisfies the universe formula")]
    EmptyImageUniverse,
    #[error("the tuple defining constant `{0}` is outside the image universe")]
    ConstantUndefined(String),
    #[error("structure is over `{found}`, the query reads `{expected}`")]
    SourceMismatch { expected: String, found: String },
    #[error("{count} structures to check, over the budget of {budget}")]
    BudgetExceeded { count: u64, budget: u64 },
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// A formula together with the ordered variables it is read over.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Component {
    pub params: Vec<String>,
    pub formula: Formula,
}

impl Component {
    pub fn new<S: AsRef<str>>(params: &[S], formula: Formula) -> Self {
        Component {
            params: params.iter().map(|p| p.as_ref().to_string()).collect(),
            formula,
        }
    }
}

/// A target constant: its defining component and the tuple of source terms
/// (constants, `0` or `max`) extracted from it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstantDef {
    pub component: Component,
    pub tuple: Vec<Term>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Query {
    name: String,
    source: Arc<Vocabulary>,
    target: Arc<Vocabulary>,
    arity: usize,
    universe: Component,
    relations: Vec<Component>,
    constants: Vec<ConstantDef>,
}

/// Default parameter names `x1..xk`.
pub fn default_params(k: usize) -> Vec<String> {
    (1..=k).map(|i| format!("x{i}")).collect()
}

fn check_component(name: &str, c: &Component, expected: usize) -> Result<(), QueryError> {
    if c.params.len() != expected {
        return Err(QueryError::ParamCount {
            component: name.to_string(),
            expected,
            found: c.params.len(),
        });
    }
    for (i, p) in c.params.iter().enumerate() {
        if c.params[..i].contains(p) {
            return Err(QueryError::DuplicateParam {
                component: name.to_string(),
                var: p.clone(),
            });
        }
    }
    if let Some(var) = c
        .formula
        .free_vars()
        .into_iter()
        .find(|v| !c.params.contains(v))
    {
        return Err(QueryError::StrayVariable {
            component: name.to_string(),
            var,
        });
    }
    if c.formula.has_second_order() || c.formula.has_sugar() {
        return Err(QueryError::NotFirstOrder(name.to_string()));
    }
    Ok(())
}

fn conjuncts(f: &Formula) -> Vec<&Formula> {
    match f {
        Formula::Binary(Connective::And, a, b) => {
            let mut out = conjuncts(a);
            out.extend(conjuncts(b));
            out
        }
        Formula::True => Vec::new(),
        _ => vec![f],
    }
}

fn disjuncts(f: &Formula) -> Vec<&Formula> {
    match f {
        Formula::Binary(Connective::Or, a, b) => {
            let mut out = disjuncts(a);
            out.extend(disjuncts(b));
            out
        }
        _ => vec![f],
    }
}

/// Reads `x1 = t1 & ... & xk = tk` (in any order, either side) into the tuple
/// `t1..tk`.
fn constant_tuple(name: &str, c: &Component) -> Result<Vec<Term>, QueryError> {
    let bad = || QueryError::BadConstantShape(name.to_string());
    let mut tuple: Vec<Option<Term>> = vec![None; c.params.len()];
    for conj in conjuncts(&c.formula) {
        let Formula::Numeric(NumericOp::Eq, a, b) = conj else {
            return Err(bad());
        };
        let (var, value) = match (a, b) {
            (Term::Var(v), t) | (t, Term::Var(v)) if !matches!(t, Term::Var(_)) => (v, t),
            _ => return Err(bad()),
        };
        if !matches!(value, Term::Const(_) | Term::Zero | Term::Max) {
            return Err(bad());
        }
        let i = c.params.iter().position(|p| p == var).ok_or_else(bad)?;
        if tuple[i].replace(value.clone()).is_some() {
            return Err(bad());
        }
    }
    tuple.into_iter().map(|t| t.ok_or_else(bad)).collect()
}

impl Query {
    /// Validates and assembles a query. `relations` and `constants` may come
    /// in any order but must cover the target vocabulary exactly.
    pub fn new(
        name: &str,
        source: &Arc<Vocabulary>,
        target: &Arc<Vocabulary>,
        arity: usize,
        universe: Component,
        relations: Vec<(String, Component)>,
        constants: Vec<(String, Component)>,
    ) -> Result<Self, QueryError> {
        if arity == 0 {
            return Err(QueryError::ZeroArity);
        }
        check_component("universe", &universe, arity)?;
        let mut rels: Vec<Option<Component>> = vec![None; target.relations().len()];
        for (sym, c) in relations {
            let i = target
                .relation_index(&sym)
                .ok_or_else(|| QueryError::UnknownTargetSymbol(sym.clone()))?;
            check_component(&sym, &c, arity * target.relations()[i].1)?;
            if rels[i].replace(c).is_some() {
                return Err(QueryError::DuplicateComponent(sym));
            }
        }
        let mut consts: Vec<Option<ConstantDef>> = vec![None; target.constants().len()];
        for (sym, c) in constants {
            let i = target
                .constant_index(&sym)
                .ok_or_else(|| QueryError::UnknownTargetSymbol(sym.clone()))?;
            check_component(&sym, &c, arity)?;
            let tuple = constant_tuple(&sym, &c)?;
            if let Some(Term::Const(s)) = tuple
                .iter()
                .find(|t| matches!(t, Term::Const(s) if source.constant_index(s).is_none()))
            {
                return Err(EvalError::UnknownSymbol(s.clone()).into());
            }
            if consts[i]
                .replace(ConstantDef {
                    component: c,
                    tuple,
                })
                .is_some()
            {
                return Err(QueryError::DuplicateComponent(sym));
            }
        }
        let relations = rels
            .into_iter()
            .zip(target.relations())
            .map(|(c, (sym, _))| c.ok_or_else(|| QueryError::MissingComponent(sym.clone())))
            .collect::<Result<Vec<_>, _>>()?;
        let constants = consts
            .into_iter()
            .zip(target.constants())
            .map(|(c, sym)| c.ok_or_else(|| QueryError::MissingComponent(sym.clone())))
            .collect::<Result<Vec<_>, _>>()?;
        let q = Query {
            name: name.to_string(),
            source: source.clone(),
            target: target.clone(),
            arity,
            universe,
            relations,
            constants,
        };
        // Surfaces unknown source symbols and arity errors now rather than on first use.
        q.compile()?;
        Ok(q)
    }

    /// Builds a query from component texts parsed over the source vocabulary.
    /// Each entry is `(symbol, parameters, formula)`.
    pub fn from_text(
        name: &str,
        source: &Arc<Vocabulary>,
        target: &Arc<Vocabulary>,
        arity: usize,
        universe: (&[&str], &str),
        relations: &[(&str, &[&str], &str)],
        constants: &[(&str, &[&str], &str)],
    ) -> Result<Self, QueryError> {
        let component = |params: &[&str], text: &str| -> Result<Component, QueryError> {
            Ok(Component::new(params, parse_formula(text, source)?))
        };
        let universe = component(universe.0, universe.1)?;
        let rels = relations
            .iter()
            .map(|(s, p, t)| Ok((s.to_string(), component(p, t)?)))
            .collect::<Result<Vec<_>, QueryError>>()?;
        let consts = constants
            .iter()
            .map(|(s, p, t)| Ok((s.to_string(), component(p, t)?)))
            .collect::<Result<Vec<_>, QueryError>>()?;
        Query::new(name, source, target, arity, universe, rels, consts)
    }

    /// The query that copies every relation and constant of a vocabulary.
    pub fn identity(vocab: &Arc<Vocabulary>) -> Self {
        let x = default_params(1);
        let rels = vocab
            .relations()
            .iter()
            .map(|(sym, a)| {
                let params = default_params(*a);
                let atom = Formula::Rel(sym.clone(), params.iter().map(|p| Term::var(p)).collect());
                (sym.clone(), Component::new(&params, atom))
            })
            .collect();
        let consts = vocab
            .constants()
            .iter()
            .map(|c| {
                (
                    c.clone(),
                    Component::new(&x, Formula::eq(Term::var(&x[0]), Term::Const(c.clone()))),
                )
            })
            .collect();
        Query::new(
            "id_query",
            vocab,
            vocab,
            1,
            Component::new(&x, Formula::True),
            rels,
            consts,
        )
        .expect("identity query is well formed")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn source(&self) -> &Arc<Vocabulary> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Vocabulary> {
        &self.target
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn universe(&self) -> &Component {
        &self.universe
    }

    /// Relation components in target vocabulary order.
    pub fn relations(&self) -> &[Component] {
        &self.relations
    }

    /// Constant definitions in target vocabulary order.
    pub fn constants(&self) -> &[ConstantDef] {
        &self.constants
    }

    /// The component defining a target relation.
    pub fn relation(&self, symbol: &str) -> Option<&Component> {
        self.target
            .relation_index(symbol)
            .map(|i| &self.relations[i])
    }

    pub fn compile(&self) -> Result<CompiledQuery, QueryError> {
        let prog = |c: &Component| Program::compile(&c.formula, &self.source, &c.params, &[]);
        Ok(CompiledQuery {
            query: self.clone(),
            universe: prog(&self.universe)?,
            relations: self.relations.iter().map(prog).collect::<Result<_, _>>()?,
        })
    }

    /// Number of `k`-tuples satisfying the universe formula on a source
    /// structure, i.e. the size of the image.
    pub fn image_size(&self, structure: &Structure) -> Result<usize, QueryError> {
        self.compile()?.image_size(structure)
    }
}

impl core::fmt::Display for Query {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        let join = |ps: &[String]| ps.join(",");
        writeln!(
            f,
            "query {} : {} -> {} arity {} {{",
            self.name,
            self.source.name(),
            self.target.name(),
            self.arity
        )?;
        writeln!(
            f,
            "  universe({}): {};",
            join(&self.universe.params),
            self.universe.formula
        )?;
        for ((sym, _), c) in self.target.relations().iter().zip(&self.relations) {
            writeln!(f, "  {sym}({}): {};", join(&c.params), c.formula)?;
        }
        for (sym, c) in self.target.constants().iter().zip(&self.constants) {
            writeln!(
                f,
                "  {sym}({}): {};",
                join(&c.component.params),
                c.component.formula
            )?;
        }
        f.write_str("}")
    }
}

/// A query with its components compiled, for repeated application.
#[derive(Debug, Clone)]
pub struct CompiledQuery {
    query: Query,
    universe: Program,
    relations: Vec<Program>,
}

fn digits(mut code: usize, n: usize, out: &mut [usize]) {
    for slot in out.iter_mut().rev() {
        *slot = code % n;
        code /= n;
    }
}

impl CompiledQuery {
    pub fn query(&self) -> &Query {
        &self.query
    }

    fn check_source(&self, structure: &Structure) -> Result<(), QueryError> {
        if **structure.vocab() != *self.query.source {
            return Err(QueryError::SourceMismatch {
                expected: self.query.source.name().to_string(),
                found: structure.vocab().name().to_string(),
            });
        }
        Ok(())
    }

    /// Image universe as tuple codes (base `n`, lexicographic), in rank order.
    fn image_universe(&self, structure: &Structure) -> Result<Vec<usize>, QueryError> {
        self.check_source(structure)?;
        let n = structure.size();
        let k = self.query.arity;
        let total = checked_pow(n, k).ok_or(ModelError::TooLarge)?;
        let mut tuple = vec![0; k];
        let mut out = Vec::new();
        for code in 0..total {
            digits(code, n, &mut tuple);
            if self.universe.eval(structure, &tuple, &[], DEFAULT_BUDGET)? {
                out.push(code);
            }
        }
        Ok(out)
    }

    pub fn image_size(&self, structure: &Structure) -> Result<usize, QueryError> {
        Ok(self.image_universe(structure)?.len())
    }

    pub fn apply(&self, structure: &Structure) -> Result<Structure, QueryError> {
        let n = structure.size();
        let k = self.query.arity;
        let universe = self.image_universe(structure)?;
        let m = universe.len();
        if m == 0 {
            return Err(QueryError::EmptyImageUniverse);
        }
        let elements: Vec<Vec<usize>> = universe
            .iter()
            .map(|&code| {
                let mut t = vec![0; k];
                digits(code, n, &mut t);
                t
            })
            .collect();
        let mut relations = Vec::with_capacity(self.relations.len());
        for (program, (_, a)) in self.relations.iter().zip(self.query.target.relations()) {
            let mut set = TupleSet::empty(m, *a);
            let mut ranks = vec![0; *a];
            let mut args = vec![0; k * a];
            for idx in 0..set.capacity() {
                digits(idx, m, &mut ranks);
                for (chunk, &r) in args.chunks_mut(k).zip(&ranks) {
                    chunk.copy_from_slice(&elements[r]);
                }
                if program.eval(structure, &args, &[], DEFAULT_BUDGET)? {
                    set.insert_index(idx);
                }
            }
            relations.push(set);
        }
        let mut constants = Vec::with_capacity(self.query.constants.len());
        for (def, sym) in self
            .query
            .constants
            .iter()
            .zip(self.query.target.constants())
        {
            let code = def.tuple.iter().fold(0, |acc, t| {
                let v = match t {
                    Term::Const(c) => structure.constant(c).expect("validated source constant"),
                    Term::Max => n - 1,
                    _ => 0,
                };
                acc * n + v
            });
            let rank = universe
                .binary_search(&code)
                .map_err(|_| QueryError::ConstantUndefined(sym.clone()))?;
            constants.push(rank);
        }
        Ok(Structure::from_parts(
            self.query.target.clone(),
            m,
            relations,
            constants,
        )?)
    }
}

/// Applies a query to a source structure.
pub fn apply_query(query: &Query, structure: &Structure) -> Result<Structure, QueryError> {
    query.compile()?.apply(structure)
}

/// Why a query is not a first-order projection.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FopViolation {
    #[error("the universe formula is not numerical")]
    UniverseNotNumerical,
    #[error("component `{0}` is not a disjunction of numerical guards, each optionally conjoined with one literal")]
    NotGuardedForm(String),
    #[error("component `{relation}`: guards {first} and {second} both hold at size {size} on {tuple:?} with constants {constants:?}")]
    GuardsOverlap {
        relation: String,
        first: usize,
        second: usize,
        size: usize,
        tuple: Vec<usize>,
        constants: Vec<usize>,
    },
    #[error(transparent)]
    Query(#[from] QueryError),
}

fn is_literal(f: &Formula) -> bool {
    match f {
        Formula::Rel(..) => true,
        Formula::Not(g) => matches!(**g, Formula::Rel(..)),
        _ => false,
    }
}

/// Splits a relation component into its guards, or `None` if it is not of the
/// form `α0 | (α1 & λ1) | ... | (αr & λr)` with numerical `α`s (which may
/// mention source constants) and literals `λ`.
pub fn guards(formula: &Formula) -> Option<Vec<Formula>> {
    disjuncts(formula)
        .into_iter()
        .map(|d| {
            let parts = conjuncts(d);
            let (numeric, rest): (Vec<&Formula>, Vec<&Formula>) = parts
                .into_iter()
                .partition(|c| is_numerical_with_constants(c));
            match rest.as_slice() {
                [] => Some(d.clone()),
                [lit] if is_literal(lit) => Some(Formula::all(numeric.into_iter().cloned())),
                _ => None,
            }
        })
        .collect()
}

/// Checks the projection shape; guard exclusivity is tested on all universe
/// sizes up to `size_bound`, every parameter tuple and every valuation of the
/// source constants.
pub fn is_fop(query: &Query, size_bound: usize) -> Result<(), FopViolation> {
    if !is_numerical(&query.universe.formula) {
        return Err(FopViolation::UniverseNotNumerical);
    }
    let empty_vocab_space = |n: usize| -> Result<Vec<Structure>, QueryError> {
        let src = &query.source;
        let c = src.constants().len();
        let count = checked_pow(n, c).ok_or(ModelError::TooLarge)?;
        let mut values = vec![0; c];
        (0..count)
            .map(|code| {
                digits(code, n, &mut values);
                let rels = src
                    .relations()
                    .iter()
                    .map(|&(_, a)| TupleSet::empty(n, a))
                    .collect();
                Ok(Structure::from_parts(src.clone(), n, rels, values.clone())?)
            })
            .collect()
    };
    for ((sym, a), comp) in query.target.relations().iter().zip(&query.relations) {
        let gs = guards(&comp.formula).ok_or_else(|| FopViolation::NotGuardedForm(sym.clone()))?;
        if gs.len() < 2 {
            continue;
        }
        let programs = gs
            .iter()
            .map(|g| Program::compile(g, &query.source, &comp.params, &[]))
            .collect::<Result<Vec<_>, _>>()
            .map_err(QueryError::from)?;
        let width = query.arity * a;
        for n in 1..=size_bound {
            let total = checked_pow(n, width)
                .ok_or(ModelError::TooLarge)
                .map_err(QueryError::from)?;
            let mut tuple = vec![0; width];
            for s in empty_vocab_space(n)? {
                for code in 0..total {
                    digits(code, n, &mut tuple);
                    let mut first = None;
                    for (i, p) in programs.iter().enumerate() {
                        if p.eval(&s, &tuple, &[], DEFAULT_BUDGET)
                            .map_err(QueryError::from)?
                        {
                            if let Some(first) = first {
                                return Err(FopViolation::GuardsOverlap {
                                    relation: sym.clone(),
                                    first,
                                    second: i,
                                    size: n,
                                    tuple,
                                    constants: s.constants().to_vec(),
                                });
                            }
                            first = Some(i);
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

/// A query certified to have projection shape (guard exclusivity up to the
/// bound it was checked at).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fop(Query);

impl Fop {
    pub fn new(query: Query, size_bound: usize) -> Result<Self, FopViolation> {
        is_fop(&query, size_bound)?;
        Ok(Fop(query))
    }

    pub fn query(&self) -> &Query {
        &self.0
    }

    pub fn into_query(self) -> Query {
        self.0
    }
}

impl Deref for Fop {
    type Target = Query;

    fn deref(&self) -> &Query {
        &self.0
    }
}

/// Two distinct sources with the same image.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Collision {
    pub first: Structure,
    pub second: Structure,
    pub image: Structure,
}

/// Applies the query to every source structure with size in `sizes` and
/// returns the first pair of inputs (in enumeration order) with equal outputs.
pub fn check_injective(
    query: &Query,
    sizes: RangeInclusive<usize>,
    budget: u64,
) -> Result<Option<Collision>, QueryError> {
    let space = StructureSpace::new(&query.source, sizes)?;
    if space.len() > budget {
        return Err(QueryError::BudgetExceeded {
            count: space.len(),
            budget,
        });
    }
    let compiled = query.compile()?;
    let mut seen: BTreeMap<Structure, Structure> = BTreeMap::new();
    for a in space.iter() {
        let image = compiled.apply(&a)?;
        if let Some(first) = seen.get(&image) {
            return Ok(Some(Collision {
                first: first.clone(),
                second: a,
                image,
            }));
        }
        seen.insert(image, a);
    }
    Ok(None)
}

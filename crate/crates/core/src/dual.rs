//! The dual of a query: translating formulas about `I(A)` into formulas
//! about `A`.
//!
//! For a query `I : τ → σ` of arity `k` and a `σ`-formula `θ`, the dual
//! `Î(θ)` is a `τ`-formula with `A ⊨ Î(θ)` iff `I(A) ⊨ θ`. Each variable of
//! `θ` becomes a `k`-tuple of variables; quantifiers are relativized to the
//! universe formula `φ0`; atoms are replaced by the defining components.
//!
//! Numeric atoms speak about ranks in `I(A)`, which is ordered
//! lexicographically:
//!
//! | atom            | translation                                                     |
//! |-----------------|-----------------------------------------------------------------|
//! | `s = t`         | componentwise equality                                           |
//! | `s < t`, `s <= t` | lexicographic comparison                                       |
//! | `suc(s,t)`      | `s < t` with no `φ0`-tuple strictly between                      |
//! | `0`, `max`      | a fresh tuple, `φ0`-least / `φ0`-greatest (plain `0̄`/`max̄` if `φ0` is `true`) |
//! | `BIT(s,t)`      | rejected, except when `I` keeps the universe as is               |
//! | constant `c`    | the tuple named by its definition `x1 = c1 & ...`                |
//!
//! When `k = 1` and `φ0` is literally `true`, the image has the same universe
//! and order as the source, so variables keep their names and numeric atoms,
//! `BIT` included, are copied unchanged. Second-order variables of arity `a`
//! become variables of arity `k·a`; range restrictions survive only in that
//! unchanged-universe case.

use alloc::{
    collections::{BTreeMap, BTreeSet},
    format,
    string::{String, ToString},
    vec,
    vec::Vec,
};
use core::ops::RangeInclusive;

use crate::eval::{eval_so_with_budget, EvalError, Program};
use crate::exec::{Executor, Verdict};
use crate::logic::{
    is_numerical, substitute, Formula, NameSupply, NumericOp, Quantifier, SoRange, Term,
};
use crate::model::{ModelError, Structure, StructureSpace};
use crate::query::{CompiledQuery, Query, QueryError};
use crate::DEFAULT_BUDGET;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DualError {
    #[error("formula contains function-style binders or terms; elaborate it first")]
    NonElaboratedInput,
    #[error("cannot translate `{atom}`: {reason}")]
    UnsupportedNumericAtom { atom: String, reason: String },
    #[error("`{0}` is not a symbol of the query's target vocabulary")]
    UnknownSymbol(String),
    #[error("{count} structures to search, over the budget of {budget}")]
    BudgetExceeded { count: u64, budget: u64 },
    #[error(transparent)]
    Query(#[from] QueryError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualResult {
    /// The translated formula, over the query's source vocabulary.
    pub formula: Formula,
    /// Which translation rules fired, for reporting.
    pub notes: Vec<String>,
    /// For each free variable of the input, the variables standing for its
    /// components in the output.
    pub free_map: Vec<(String, Vec<String>)>,
}

struct Dualizer<'q> {
    query: &'q Query,
    k: usize,
    /// Universe kept as is: `k = 1` and `φ0 = true`.
    same_universe: bool,
    full_universe: bool,
    supply: NameSupply,
    fo: Vec<(String, Vec<String>)>,
    so: Vec<(String, String)>,
    notes: BTreeSet<&'static str>,
}

impl Dualizer<'_> {
    fn fresh_for(&mut self, name: &str) -> String {
        if self.query.source().has_symbol(name) {
            self.notes
                .insert("renamed variables clashing with source symbols");
            self.supply.fresh()
        } else {
            name.to_string()
        }
    }

    fn bind_fo(&mut self, name: &str) -> Vec<String> {
        if self.same_universe {
            vec![self.fresh_for(name)]
        } else {
            (0..self.k).map(|_| self.supply.fresh()).collect()
        }
    }

    fn lookup(&self, v: &str) -> Vec<Term> {
        let (_, names) = self
            .fo
            .iter()
            .rev()
            .find(|(name, _)| name == v)
            .expect("every variable is bound or mapped as free");
        names.iter().map(|n| Term::var(n)).collect()
    }

    fn universe_at(&mut self, terms: &[Term]) -> Formula {
        let u = self.query.universe();
        let map: BTreeMap<String, Term> = u
            .params
            .iter()
            .cloned()
            .zip(terms.iter().cloned())
            .collect();
        substitute(&u.formula, &map, &mut self.supply)
    }

    fn lex_lt(&self, a: &[Term], b: &[Term]) -> Formula {
        Formula::any((0..a.len()).map(|i| {
            let prefix = (0..i).map(|j| Formula::eq(a[j].clone(), b[j].clone()));
            Formula::all(prefix.chain([Formula::Numeric(
                NumericOp::Lt,
                a[i].clone(),
                b[i].clone(),
            )]))
        }))
    }

    fn lex_le(&self, a: &[Term], b: &[Term]) -> Formula {
        if a.len() == 1 {
            return Formula::Numeric(NumericOp::Le, a[0].clone(), b[0].clone());
        }
        Formula::or(self.lex_lt(a, b), self.all_eq(a, b))
    }

    fn all_eq(&self, a: &[Term], b: &[Term]) -> Formula {
        Formula::all(
            a.iter()
                .zip(b)
                .map(|(x, y)| Formula::eq(x.clone(), y.clone())),
        )
    }

    fn quantify(&mut self, q: Quantifier, names: &[String], body: Formula) -> Formula {
        let vars: Vec<Term> = names.iter().map(|n| Term::var(n)).collect();
        let body = if self.query.universe().formula == Formula::True {
            body
        } else {
            let guard = self.universe_at(&vars);
            match q {
                Quantifier::Forall => Formula::implies(guard, body),
                Quantifier::Exists => Formula::and(guard, body),
            }
        };
        names.iter().rev().fold(body, |acc, n| {
            Formula::Quant(q, n.clone(), alloc::boxed::Box::new(acc))
        })
    }

    fn fresh_tuple(&mut self) -> Vec<String> {
        (0..self.k).map(|_| self.supply.fresh()).collect()
    }

    /// Expands the terms of an atom. Occurrences of `0` and `max` that need a
    /// witness tuple are recorded in `extremes` as (is_max, tuple).
    fn expand(&mut self, t: &Term, extremes: &mut Vec<(bool, Vec<String>)>) -> Vec<Term> {
        match t {
            Term::Var(v) => self.lookup(v),
            Term::Const(c) => {
                let i = self
                    .query
                    .target()
                    .constant_index(c)
                    .expect("checked symbol");
                self.query.constants()[i].tuple.clone()
            }
            Term::Zero | Term::Max if self.same_universe || self.full_universe => {
                vec![t.clone(); self.k]
            }
            Term::Zero | Term::Max => {
                let is_max = matches!(t, Term::Max);
                if let Some((_, names)) = extremes.iter().find(|(m, _)| *m == is_max) {
                    return names.iter().map(|n| Term::var(n)).collect();
                }
                let names = self.fresh_tuple();
                extremes.push((is_max, names.clone()));
                names.iter().map(|n| Term::var(n)).collect()
            }
            Term::Apply(..) => unreachable!("sugar rejected up front"),
        }
    }

    /// Wraps an atom translation in the witnesses for `0` / `max`.
    fn bind_extremes(&mut self, atom: Formula, extremes: Vec<(bool, Vec<String>)>) -> Formula {
        let mut out = atom;
        for (is_max, names) in extremes.into_iter().rev() {
            self.notes.insert(if is_max {
                "max -> lexicographically greatest universe tuple"
            } else {
                "0 -> lexicographically least universe tuple"
            });
            let z: Vec<Term> = names.iter().map(|n| Term::var(n)).collect();
            let others = self.fresh_tuple();
            let u: Vec<Term> = others.iter().map(|n| Term::var(n)).collect();
            let order = if is_max {
                self.lex_le(&u, &z)
            } else {
                self.lex_le(&z, &u)
            };
            let extreme = self.quantify(Quantifier::Forall, &others, order);
            out = self.quantify(Quantifier::Exists, &names, Formula::and(extreme, out));
        }
        out
    }

    fn atom_text(f: &Formula) -> String {
        format!("{f}")
    }

    fn numeric(
        &mut self,
        op: NumericOp,
        a: &Term,
        b: &Term,
        original: &Formula,
    ) -> Result<Formula, DualError> {
        if self.same_universe {
            let mut none = Vec::new();
            let a = self.expand(a, &mut none).remove(0);
            let b = self.expand(b, &mut none).remove(0);
            return Ok(Formula::Numeric(op, a, b));
        }
        if op == NumericOp::Bit {
            return Err(DualError::UnsupportedNumericAtom {
                atom: Self::atom_text(original),
                reason: "ranks in the image are not first-order definable from the components"
                    .into(),
            });
        }
        let mut extremes = Vec::new();
        let ea = self.expand(a, &mut extremes);
        let eb = self.expand(b, &mut extremes);
        let f = match op {
            NumericOp::Eq => self.all_eq(&ea, &eb),
            NumericOp::Lt => {
                self.notes.insert("< -> lexicographic comparison");
                self.lex_lt(&ea, &eb)
            }
            NumericOp::Le => {
                self.notes.insert("<= -> lexicographic comparison");
                self.lex_le(&ea, &eb)
            }
            NumericOp::Suc => {
                self.notes
                    .insert("suc -> lexicographic successor within the universe");
                let between = self.fresh_tuple();
                let u: Vec<Term> = between.iter().map(|n| Term::var(n)).collect();
                let inside = Formula::and(self.lex_lt(&ea, &u), self.lex_lt(&u, &eb));
                let gap = self.quantify(Quantifier::Exists, &between, inside);
                Formula::and(self.lex_lt(&ea, &eb), Formula::not(gap))
            }
            NumericOp::Bit => unreachable!(),
        };
        Ok(self.bind_extremes(f, extremes))
    }

    fn tr(&mut self, f: &Formula) -> Result<Formula, DualError> {
        Ok(match f {
            Formula::True | Formula::False => f.clone(),
            Formula::Rel(r, ts) => {
                let i = self
                    .query
                    .target()
                    .relation_index(r)
                    .ok_or_else(|| DualError::UnknownSymbol(r.clone()))?;
                let mut extremes = Vec::new();
                let args: Vec<Term> = ts
                    .iter()
                    .flat_map(|t| self.expand(t, &mut extremes))
                    .collect();
                let comp = &self.query.relations()[i];
                let map: BTreeMap<String, Term> = comp.params.iter().cloned().zip(args).collect();
                let body = substitute(&comp.formula, &map, &mut self.supply);
                self.bind_extremes(body, extremes)
            }
            Formula::SoAtom(x, ts) => {
                let (_, renamed) = self
                    .so
                    .iter()
                    .rev()
                    .find(|(n, _)| n == x)
                    .expect("bound")
                    .clone();
                let mut extremes = Vec::new();
                let args: Vec<Term> = ts
                    .iter()
                    .flat_map(|t| self.expand(t, &mut extremes))
                    .collect();
                self.bind_extremes(Formula::SoAtom(renamed, args), extremes)
            }
            Formula::Numeric(op, a, b) => {
                for t in [a, b] {
                    if let Term::Const(c) = t {
                        if self.query.target().constant_index(c).is_none() {
                            return Err(DualError::UnknownSymbol(c.clone()));
                        }
                    }
                }
                self.numeric(*op, a, b, f)?
            }
            Formula::Not(g) => Formula::not(self.tr(g)?),
            Formula::Binary(op, a, b) => Formula::Binary(
                *op,
                alloc::boxed::Box::new(self.tr(a)?),
                alloc::boxed::Box::new(self.tr(b)?),
            ),
            Formula::Quant(q, v, body) => {
                let names = self.bind_fo(v);
                self.fo.push((v.clone(), names.clone()));
                let body = self.tr(body);
                self.fo.pop();
                self.quantify(*q, &names, body?)
            }
            Formula::SoQuant {
                quantifier,
                var,
                arity,
                range,
                body,
            } => {
                let renamed = self.fresh_for(var);
                self.so.push((var.clone(), renamed.clone()));
                let body = self.tr(body);
                self.so.pop();
                let range = if self.same_universe {
                    *range
                } else {
                    SoRange::Relations
                };
                Formula::SoQuant {
                    quantifier: *quantifier,
                    var: renamed,
                    arity: arity * self.k,
                    range,
                    body: alloc::boxed::Box::new(body?),
                }
            }
            Formula::FunctionBinder { .. } => return Err(DualError::NonElaboratedInput),
        })
    }
}

/// Computes `Î(θ)` for a query `I` and an elaborated formula `θ` over the
/// query's target vocabulary.
pub fn syntactic_dual(query: &Query, theta: &Formula) -> Result<DualResult, DualError> {
    if theta.has_sugar() {
        return Err(DualError::NonElaboratedInput);
    }
    let k = query.arity();
    let phi0 = &query.universe().formula;
    let mut supply = NameSupply::avoiding([theta, phi0]);
    for c in query.relations() {
        supply.avoid_all(c.formula.names());
        supply.avoid_all(c.params.iter().cloned());
    }
    supply.avoid_all(query.universe().params.iter().cloned());
    let mut d = Dualizer {
        query,
        k,
        same_universe: k == 1 && *phi0 == Formula::True,
        full_universe: *phi0 == Formula::True,
        supply,
        fo: Vec::new(),
        so: Vec::new(),
        notes: BTreeSet::new(),
    };
    let mut free_map = Vec::new();
    for v in theta.free_vars() {
        let names = d.bind_fo(&v);
        d.fo.push((v.clone(), names.clone()));
        free_map.push((v, names));
    }
    for x in theta.free_so_vars() {
        d.so.push((x.clone(), x));
    }
    let formula = d.tr(theta)?;
    Ok(DualResult {
        formula,
        notes: d.notes.into_iter().map(String::from).collect(),
        free_map,
    })
}

/// `I(A) ⊨ θ`, computed by applying the query.
pub fn semantic_dual_eval(
    query: &Query,
    theta: &Formula,
    structure: &Structure,
) -> Result<bool, DualError> {
    let image = query.compile()?.apply(structure)?;
    Ok(eval_so_with_budget(&image, theta, DEFAULT_BUDGET)?)
}

fn universe_count(
    compiled: &CompiledQuery,
    space: &StructureSpace,
) -> Result<Option<usize>, DualError> {
    if space.is_empty() || !is_numerical(&compiled.query().universe().formula) {
        return Ok(None);
    }
    Ok(Some(compiled.image_size(&space.get(0))?))
}

/// Searches sources of sizes `1..=max_preimage_size` for one that the query
/// maps onto `target`; returns the first in enumeration order.
pub fn image_membership(
    query: &Query,
    target: &Structure,
    max_preimage_size: usize,
    budget: u64,
) -> Result<Option<Structure>, DualError> {
    let compiled = query.compile()?;
    let mut spent: u64 = 0;
    for m in 1..=max_preimage_size {
        let space = StructureSpace::new(query.source(), m..=m)?;
        if let Some(count) = universe_count(&compiled, &space)? {
            if count != target.size() {
                continue;
            }
        }
        spent = spent.saturating_add(space.len());
        if spent > budget {
            return Err(DualError::BudgetExceeded {
                count: spent,
                budget,
            });
        }
        for a in space.iter() {
            match compiled.apply(&a) {
                Ok(b) if b == *target => return Ok(Some(a)),
                Ok(_)
                | Err(QueryError::EmptyImageUniverse)
                | Err(QueryError::ConstantUndefined(_)) => {}
                Err(e) => return Err(e.into()),
            }
        }
    }
    Ok(None)
}

/// Image of a query over all sources up to a size, keyed by image with the
/// first source producing it.
pub fn image_index(
    query: &Query,
    max_preimage_size: usize,
    max_image_size: usize,
    budget: u64,
) -> Result<BTreeMap<Structure, Structure>, DualError> {
    let compiled = query.compile()?;
    let space = StructureSpace::new(query.source(), 1..=max_preimage_size)?;
    if space.len() > budget {
        return Err(DualError::BudgetExceeded {
            count: space.len(),
            budget,
        });
    }
    let mut index = BTreeMap::new();
    for a in space.iter() {
        match compiled.apply(&a) {
            Ok(b) if b.size() <= max_image_size => {
                index.entry(b).or_insert(a);
            }
            Ok(_) | Err(QueryError::EmptyImageUniverse) | Err(QueryError::ConstantUndefined(_)) => {
            }
            Err(e) => return Err(e.into()),
        }
    }
    Ok(index)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharacteristicCounterexample {
    pub structure: Structure,
    /// Truth of the candidate sentence.
    pub sentence: bool,
    /// A preimage, when the structure is in the image.
    pub preimage: Option<Structure>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharacteristicReport {
    pub verdict: Verdict,
    pub counterexample: Option<CharacteristicCounterexample>,
    /// Target structures compared.
    pub checked: u64,
    pub sizes: RangeInclusive<usize>,
    pub preimage_bound: usize,
}

/// Compares a candidate characteristic sentence with image membership on
/// every target structure with size in `sizes`. Membership is decided by
/// exhaustive search over sources of size up to `preimage_bound`.
pub fn verify_characteristic<X: Executor>(
    beta: &Formula,
    query: &Query,
    sizes: RangeInclusive<usize>,
    preimage_bound: usize,
    budget: u64,
    exec: &X,
) -> Result<CharacteristicReport, DualError> {
    let program = Program::sentence(beta, query.target())?;
    let index = image_index(query, preimage_bound, *sizes.end(), budget)?;
    let space = StructureSpace::new(query.target(), sizes.clone())?;
    if space.len() > budget {
        return Err(DualError::BudgetExceeded {
            count: space.len(),
            budget,
        });
    }
    let hit = exec.find_first(space.len(), |i| {
        let b = space.get(i);
        let sentence = program.holds(&b, budget)?;
        let preimage = index.get(&b);
        Ok::<_, DualError>(
            (sentence != preimage.is_some()).then(|| CharacteristicCounterexample {
                preimage: preimage.cloned(),
                sentence,
                structure: b,
            }),
        )
    })?;
    Ok(match hit {
        Some((i, cx)) => CharacteristicReport {
            verdict: Verdict::Counterexample,
            counterexample: Some(cx),
            checked: i + 1,
            sizes,
            preimage_bound,
        },
        None => CharacteristicReport {
            verdict: Verdict::Verified,
            counterexample: None,
            checked: space.len(),
            sizes,
            preimage_bound,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::eval_so;
    use crate::exec::Sequential;
    use crate::logic::{elaborate, parse_sentence, simplify};
    use crate::model::{enumerate_structures, Vocabulary};
    use alloc::sync::Arc;

    fn graph() -> Arc<Vocabulary> {
        Vocabulary::graph()
    }

    fn complement() -> Query {
        Query::from_text(
            "comp",
            &graph(),
            &graph(),
            1,
            (&["x1"], "true"),
            &[("E", &["x1", "y1"], "!E(x1,y1)")],
            &[("k", &["x1"], "x1 = k")],
        )
        .unwrap()
    }

    fn pairs() -> Query {
        // Arity 2, universe restricted to pairs (a, b) with a <= b.
        Query::from_text(
            "pairs",
            &graph(),
            &graph(),
            2,
            (&["a", "b"], "a <= b"),
            &[("E", &["a", "b", "c", "d"], "E(a,c) | b = d & !E(b,d)")],
            &[("k", &["a", "b"], "a = 0 & b = k")],
        )
        .unwrap()
    }

    fn prefix() -> Query {
        // Arity 1 with the universe cut down to {0..k}.
        Query::from_text(
            "prefix",
            &graph(),
            &graph(),
            1,
            (&["x"], "x <= k"),
            &[("E", &["x", "y"], "E(y,x)")],
            &[("k", &["x"], "x = k")],
        )
        .unwrap()
    }

    fn sentence(text: &str) -> Formula {
        elaborate(&parse_sentence(text, &graph()).unwrap()).unwrap()
    }

    fn check_law(q: &Query, theta: &Formula, max: usize) {
        let dual = syntactic_dual(q, theta).unwrap().formula;
        for n in 1..=max {
            for a in enumerate_structures(q.source(), n).unwrap() {
                let Ok(expected) = semantic_dual_eval(q, theta, &a) else {
                    continue;
                };
                assert_eq!(
                    eval_so(&a, &dual).unwrap(),
                    expected,
                    "{theta} on {a}: dual {dual}"
                );
            }
        }
    }

    const CORPUS: &[&str] = &[
        "ex x. E(x,x)",
        "all x. ex y. E(x,y) & x != y",
        "E(0,max)",
        "E(max,0) | E(k,k)",
        "all x y. suc(x,y) -> E(x,y)",
        "ex x. x < k & E(x,k)",
        "ex x. k <= x & !E(x,0)",
        "all x. x = 0 | ex y. suc(y,x)",
        "EX2 R/1. all x. (R(x) -> E(x,x)) & R(max)",
        "all x. x <= max & 0 <= x",
        "ex x y. x < y & suc(0,y)",
        "k = max | k = 0",
    ];

    #[test]
    fn law_for_identity_and_complement() {
        for text in CORPUS.iter().chain(["all x. BIT(x,0) -> E(x,x)"].iter()) {
            let theta = sentence(text);
            check_law(&Query::identity(&graph()), &theta, 3);
            check_law(&complement(), &theta, 3);
        }
    }

    #[test]
    fn law_for_pair_query() {
        for text in CORPUS {
            if text.contains("EX2") {
                continue;
            }
            check_law(&pairs(), &sentence(text), 2);
        }
    }

    #[test]
    fn law_for_restricted_universe() {
        for text in CORPUS {
            check_law(&prefix(), &sentence(text), 3);
        }
    }

    #[test]
    fn complement_turns_is_into_clique() {
        let is = sentence("EXINJ f. all x y. (x != y & f(x) <= k & f(y) <= k -> !E(x,y))");
        let cl = sentence("EXINJ f. all x y. (x != y & f(x) <= k & f(y) <= k -> E(x,y))");
        let dual = syntactic_dual(&complement(), &is).unwrap();
        assert_eq!(simplify(&dual.formula), cl);
    }

    #[test]
    fn bit_rejected_for_pairs() {
        let theta = sentence("ex x y. BIT(x,y)");
        assert!(matches!(
            syntactic_dual(&pairs(), &theta),
            Err(DualError::UnsupportedNumericAtom { .. })
        ));
        let sugar = parse_sentence("EXINJ f. f(0) = 0", &graph()).unwrap();
        assert_eq!(
            syntactic_dual(&complement(), &sugar),
            Err(DualError::NonElaboratedInput)
        );
    }

    #[test]
    fn free_variables_are_mapped() {
        let theta = crate::logic::parse_formula("E(x,k)", &graph()).unwrap();
        let d = syntactic_dual(&pairs(), &theta).unwrap();
        assert_eq!(d.free_map.len(), 1);
        assert_eq!(d.free_map[0].1.len(), 2);
        assert_eq!(d.formula.free_vars().len(), 2);
    }

    #[test]
    fn characteristic_sentences() {
        let r = verify_characteristic(
            &Formula::True,
            &complement(),
            1..=3,
            3,
            1 << 20,
            &Sequential,
        )
        .unwrap();
        assert_eq!(r.verdict, Verdict::Verified);
        let r = verify_characteristic(
            &Formula::False,
            &complement(),
            1..=3,
            3,
            1 << 20,
            &Sequential,
        )
        .unwrap();
        assert_eq!(r.verdict, Verdict::Counterexample);
        let cx = r.counterexample.unwrap();
        assert_eq!(cx.structure.size(), 1);
        assert!(cx.preimage.is_some());
    }

    #[test]
    fn preimage_search() {
        let q = complement();
        for b in enumerate_structures(&graph(), 2).unwrap() {
            let a = image_membership(&q, &b, 2, 1 << 20).unwrap().unwrap();
            assert_eq!(crate::query::apply_query(&q, &a).unwrap(), b);
        }
    }
}

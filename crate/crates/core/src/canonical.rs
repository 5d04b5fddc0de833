//! Problems, reductions, and canonical decompositions, with a built-in library.
//!
//! Every verifier here is an exhaustive loop over all structures up to a size
//! bound, reporting the first failure in enumeration order.

use alloc::{
    boxed::Box,
    format,
    string::{String, ToString},
    sync::Arc,
    vec,
    vec::Vec,
};
use core::fmt;
use core::ops::RangeInclusive;

use crate::dual::{syntactic_dual, DualError, DualResult};
use crate::eval::{EvalError, Program};
use crate::exec::{Executor, Verdict};
use crate::logic::{elaborate, parse_sentence, Formula, LogicError, ParseError};
use crate::model::{ModelError, Structure, StructureSpace, Vocabulary};
use crate::query::{Query, QueryError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CanonError {
    #[error("no built-in named `{0}`")]
    UnknownName(String),
    #[error("`{name}` is a {found}, expected a {expected}")]
    WrongKind {
        name: String,
        expected: &'static str,
        found: &'static str,
    },
    #[error("problem `{0}` has neither a sentence nor an oracle")]
    NoMembershipTest(String),
    #[error("expected a structure over `{expected}`, got one over `{found}`")]
    VocabularyMismatch { expected: String, found: String },
    #[error("{count} structures to check, over the budget of {budget}")]
    BudgetExceeded { count: u64, budget: u64 },
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Logic(#[from] LogicError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Query(#[from] QueryError),
    #[error(transparent)]
    Dual(#[from] DualError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// How the built-in sentences read their size thresholds.
///
/// `Verbatim` keeps `f(x) <= k` in the independent-set and clique sentences
/// (sets of `k+1` vertices) and `f(x) < k` in the subgraph sentence. `Strict`
/// uses `<` everywhere, so all three speak about `k` elements.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Threshold {
    #[default]
    Verbatim,
    Strict,
}

impl Threshold {
    /// Number of vertices the independent-set and clique problems ask for.
    pub fn set_size(self, k: usize) -> usize {
        match self {
            Threshold::Verbatim => k + 1,
            Threshold::Strict => k,
        }
    }

    fn op(self) -> &'static str {
        match self {
            Threshold::Verbatim => "<=",
            Threshold::Strict => "<",
        }
    }
}

pub type Oracle = Arc<dyn Fn(&Structure) -> bool + Send + Sync>;

/// A decision problem: a vocabulary with a defining sentence, a direct
/// membership test, or both.
#[derive(Clone)]
pub struct Problem {
    name: String,
    vocab: Arc<Vocabulary>,
    sentence: Option<Formula>,
    oracle: Option<Oracle>,
}

impl fmt::Debug for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Problem")
            .field("name", &self.name)
            .field("vocab", &self.vocab.name())
            .field("sentence", &self.sentence)
            .field("oracle", &self.oracle.is_some())
            .finish()
    }
}

impl Problem {
    /// The sentence, if given, must be elaborated.
    pub fn new(
        name: &str,
        vocab: &Arc<Vocabulary>,
        sentence: Option<Formula>,
        oracle: Option<Oracle>,
    ) -> Self {
        Problem {
            name: name.to_string(),
            vocab: vocab.clone(),
            sentence,
            oracle,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn vocab(&self) -> &Arc<Vocabulary> {
        &self.vocab
    }

    pub fn sentence(&self) -> Option<&Formula> {
        self.sentence.as_ref()
    }

    pub fn has_oracle(&self) -> bool {
        self.oracle.is_some()
    }

    /// The same problem decided by its sentence only.
    pub fn without_oracle(&self) -> Self {
        Problem {
            oracle: None,
            ..self.clone()
        }
    }

    /// A reusable membership test, preferring the oracle.
    pub fn tester(&self) -> Result<Tester, CanonError> {
        let how = match (&self.oracle, &self.sentence) {
            (Some(o), _) => How::Oracle(o.clone()),
            (None, Some(s)) => How::Sentence(Box::new(Program::sentence(s, &self.vocab)?)),
            (None, None) => return Err(CanonError::NoMembershipTest(self.name.clone())),
        };
        Ok(Tester {
            vocab: self.vocab.clone(),
            how,
        })
    }

    pub fn contains(&self, structure: &Structure) -> Result<bool, CanonError> {
        self.tester()?.contains(structure, crate::DEFAULT_BUDGET)
    }
}

enum How {
    Oracle(Oracle),
    Sentence(Box<Program>),
}

/// Compiled membership test of a [`Problem`].
pub struct Tester {
    vocab: Arc<Vocabulary>,
    how: How,
}

impl Tester {
    pub fn contains(&self, structure: &Structure, budget: u64) -> Result<bool, CanonError> {
        if **structure.vocab() != *self.vocab {
            return Err(CanonError::VocabularyMismatch {
                expected: self.vocab.name().to_string(),
                found: structure.vocab().name().to_string(),
            });
        }
        match &self.how {
            How::Oracle(o) => Ok(o(structure)),
            How::Sentence(p) => Ok(p.holds(structure, budget)?),
        }
    }
}

/// `A ≅ B` for a problem: both members or both non-members.
pub fn cong(problem: &Problem, a: &Structure, b: &Structure) -> Result<bool, CanonError> {
    let t = problem.tester()?;
    Ok(t.contains(a, crate::DEFAULT_BUDGET)? == t.contains(b, crate::DEFAULT_BUDGET)?)
}

/// The first failing case of an exhaustive check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub structure: Structure,
    /// Intermediate structures derived from it, labelled (e.g. `p(A)`).
    pub images: Vec<(String, Structure)>,
    /// The two memberships that disagree, labelled.
    pub memberships: Vec<(String, bool)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionReport {
    pub verdict: Verdict,
    pub counterexample: Option<Counterexample>,
    /// Structures examined (up to and including a counterexample).
    pub checked: u64,
    pub sizes: RangeInclusive<usize>,
}

fn exhaustive<X, F>(
    vocab: &Arc<Vocabulary>,
    sizes: RangeInclusive<usize>,
    budget: u64,
    exec: &X,
    check: F,
) -> Result<ReductionReport, CanonError>
where
    X: Executor,
    F: Fn(Structure) -> Result<Option<Counterexample>, CanonError> + Sync,
{
    let space = StructureSpace::new(vocab, sizes.clone())?;
    if space.len() > budget {
        return Err(CanonError::BudgetExceeded {
            count: space.len(),
            budget,
        });
    }
    let found = exec.find_first(space.len(), |i| check(space.get(i)))?;
    Ok(match found {
        Some((i, cx)) => ReductionReport {
            verdict: Verdict::Counterexample,
            counterexample: Some(cx),
            checked: i + 1,
            sizes,
        },
        None => ReductionReport {
            verdict: Verdict::Verified,
            counterexample: None,
            checked: space.len(),
            sizes,
        },
    })
}

fn expect_vocab(found: &Arc<Vocabulary>, expected: &Arc<Vocabulary>) -> Result<(), CanonError> {
    if **found != **expected {
        return Err(CanonError::VocabularyMismatch {
            expected: expected.name().to_string(),
            found: found.name().to_string(),
        });
    }
    Ok(())
}

/// Checks `A ∈ source ⇔ p(A) ∈ target` for every source structure with size
/// in `sizes`.
pub fn verify_reduction<X: Executor>(
    p: &Query,
    source: &Problem,
    target: &Problem,
    sizes: RangeInclusive<usize>,
    budget: u64,
    exec: &X,
) -> Result<ReductionReport, CanonError> {
    expect_vocab(source.vocab(), p.source())?;
    expect_vocab(target.vocab(), p.target())?;
    let (p_c, src, tgt) = (p.compile()?, source.tester()?, target.tester()?);
    exhaustive(p.source(), sizes, budget, exec, |a| {
        let a_in = src.contains(&a, budget)?;
        let b = p_c.apply(&a)?;
        let b_in = tgt.contains(&b, budget)?;
        Ok((a_in != b_in).then(|| Counterexample {
            memberships: vec![
                (format!("A in {}", source.name()), a_in),
                (format!("{}(A) in {}", p.name(), target.name()), b_in),
            ],
            images: vec![(format!("{}(A)", p.name()), b)],
            structure: a,
        }))
    })
}

/// Checks `I(p(A)) ≅ A` for the problem, for every `A` with size in `sizes`.
pub fn verify_condition_c<X: Executor>(
    back: &Query,
    p: &Query,
    problem: &Problem,
    sizes: RangeInclusive<usize>,
    budget: u64,
    exec: &X,
) -> Result<ReductionReport, CanonError> {
    expect_vocab(problem.vocab(), p.source())?;
    expect_vocab(back.source(), p.target())?;
    expect_vocab(back.target(), p.source())?;
    let (p_c, i_c, t) = (p.compile()?, back.compile()?, problem.tester()?);
    exhaustive(p.source(), sizes, budget, exec, |a| {
        let b = p_c.apply(&a)?;
        let c = i_c.apply(&b)?;
        let (a_in, c_in) = (t.contains(&a, budget)?, t.contains(&c, budget)?);
        Ok((a_in != c_in).then(|| Counterexample {
            memberships: vec![
                (format!("A in {}", problem.name()), a_in),
                (
                    format!("{}({}(A)) in {}", back.name(), p.name(), problem.name()),
                    c_in,
                ),
            ],
            images: vec![
                (format!("{}(A)", p.name()), b),
                (format!("{}({}(A))", back.name(), p.name()), c),
            ],
            structure: a,
        }))
    })
}

/// The sentence `(β ∧ Î(Ψ)) ∨ (¬β ∧ Λ)` with its ingredients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    pub fop: Query,
    pub back: Query,
    pub psi: Formula,
    pub residue: Formula,
    pub beta: Formula,
    pub dual: DualResult,
    pub sentence: Formula,
}

/// Assembles the canonical sentence for a reduction `p : τ → σ`, a back query
/// `I : σ → τ`, a `τ`-sentence `Ψ`, and `σ`-sentences `Λ` and `β`.
pub fn build_decomposition(
    p: &Query,
    back: &Query,
    psi: &Formula,
    residue: &Formula,
    beta: &Formula,
) -> Result<Decomposition, CanonError> {
    expect_vocab(back.source(), p.target())?;
    expect_vocab(back.target(), p.source())?;
    let dual = syntactic_dual(back, psi)?;
    let sentence = Formula::or(
        Formula::and(beta.clone(), dual.formula.clone()),
        Formula::and(Formula::not(beta.clone()), residue.clone()),
    );
    Ok(Decomposition {
        fop: p.clone(),
        back: back.clone(),
        psi: psi.clone(),
        residue: residue.clone(),
        beta: beta.clone(),
        dual,
        sentence,
    })
}

/// Checks `B ∈ target ⇔ B ⊨ decomposition` for every `σ`-structure with size
/// in `sizes`.
pub fn verify_decomposition<X: Executor>(
    decomposition: &Decomposition,
    target: &Problem,
    sizes: RangeInclusive<usize>,
    budget: u64,
    exec: &X,
) -> Result<ReductionReport, CanonError> {
    let vocab = decomposition.fop.target();
    expect_vocab(target.vocab(), vocab)?;
    let program = Program::sentence(&decomposition.sentence, vocab)?;
    let t = target.tester()?;
    exhaustive(vocab, sizes, budget, exec, |b| {
        let member = t.contains(&b, budget)?;
        let holds = program.holds(&b, budget)?;
        Ok((member != holds).then(|| Counterexample {
            memberships: vec![
                (format!("B in {}", target.name()), member),
                ("B satisfies the decomposition".into(), holds),
            ],
            images: Vec::new(),
            structure: b,
        }))
    })
}

fn subsets_of_size(n: usize, size: usize, mut ok: impl FnMut(&[usize]) -> bool) -> bool {
    fn go(
        start: usize,
        n: usize,
        left: usize,
        chosen: &mut Vec<usize>,
        ok: &mut dyn FnMut(&[usize]) -> bool,
    ) -> bool {
        if left == 0 {
            return ok(chosen);
        }
        for v in start..n {
            if n - v < left {
                break;
            }
            chosen.push(v);
            if go(v + 1, n, left - 1, chosen, ok) {
                return true;
            }
            chosen.pop();
        }
        false
    }
    size <= n && go(0, n, size, &mut Vec::new(), &mut ok)
}

/// Some set of `set_size(k)` vertices with no `E` pair (resp. every `E` pair)
/// between distinct members.
fn vertex_set_oracle(threshold: Threshold, want_edges: bool) -> Oracle {
    Arc::new(move |s: &Structure| {
        let e = &s.relations()[0];
        let k = s.constants()[0];
        subsets_of_size(s.size(), threshold.set_size(k), |set| {
            set.iter().all(|&u| {
                set.iter()
                    .all(|&v| u == v || e.contains_index(u * s.size() + v) == want_edges)
            })
        })
    })
}

/// An injective `h : {0..k-1} → universe` with `H(a,b) ⇒ F(h(a),h(b))` for
/// distinct `a, b`.
fn subgraph_oracle(s: &Structure) -> bool {
    let n = s.size();
    let (f, h) = (&s.relations()[0], &s.relations()[1]);
    let k = s.constants()[0];
    fn extend(
        i: usize,
        k: usize,
        n: usize,
        map: &mut Vec<usize>,
        ok: &dyn Fn(usize, usize, &[usize]) -> bool,
    ) -> bool {
        if i == k {
            return true;
        }
        for v in 0..n {
            if map.contains(&v) || !ok(i, v, map) {
                continue;
            }
            map.push(v);
            if extend(i + 1, k, n, map, ok) {
                return true;
            }
            map.pop();
        }
        false
    }
    let ok = |i: usize, v: usize, map: &[usize]| {
        map.iter().enumerate().all(|(j, &w)| {
            (!h.contains_index(i * n + j) || f.contains_index(v * n + w))
                && (!h.contains_index(j * n + i) || f.contains_index(w * n + v))
        })
    };
    extend(0, k, n, &mut Vec::new(), &ok)
}

fn ones(s: &Structure, upto: usize) -> usize {
    let q = &s.relations()[0];
    (0..upto).filter(|&i| q.contains_index(i)).count()
}

/// A library object.
#[derive(Debug, Clone)]
pub enum Builtin {
    Problem(Problem),
    Query(Query),
    Sentence {
        vocab: Arc<Vocabulary>,
        formula: Formula,
    },
}

impl Builtin {
    fn kind(&self) -> &'static str {
        match self {
            Builtin::Problem(_) => "problem",
            Builtin::Query(_) => "query",
            Builtin::Sentence { .. } => "sentence",
        }
    }
}

/// Size bounds at which the library's claims are checked by the test suite.
pub const GRAPH_BOUND: usize = 4;
pub const SUBGRAPH_BOUND: usize = 3;
pub const STRING_BOUND: usize = 8;

/// Built-in vocabularies, problems, queries and sentences.
#[derive(Debug, Clone, Copy, Default)]
pub struct Library {
    pub threshold: Threshold,
}

pub const PROBLEM_NAMES: &[&str] = &["IS", "CLIQUE", "SUBGRAPHISO", "PARITY", "PARITY_PADDED"];
pub const QUERY_NAMES: &[&str] = &[
    "fop_complement",
    "fop_clique_to_sgi",
    "fop_padding",
    "query_sgi_back",
    "id_query",
];
pub const SENTENCE_NAMES: &[&str] = &["beta_true", "beta_sgi", "beta_sgi_image", "beta_padding"];
pub const CASE_NAMES: &[&str] = &[
    "clique",
    "subgraphiso",
    "subgraphiso-no-residue",
    "subgraphiso-verbatim",
    "identity",
];

/// `sgi = ⟨F/2, H/2, k⟩`: a host graph, a pattern graph, and a size.
pub fn sgi_vocabulary() -> Arc<Vocabulary> {
    Vocabulary::new("sgi", [("F", 2), ("H", 2)], ["k"]).expect("valid vocabulary")
}

/// Built-in vocabulary by name: `graph`, `sgi`, `string`.
pub fn vocabulary(name: &str) -> Option<Arc<Vocabulary>> {
    match name {
        "graph" => Some(Vocabulary::graph()),
        "sgi" => Some(sgi_vocabulary()),
        "string" => Some(Vocabulary::string()),
        _ => None,
    }
}

fn sentence(vocab: &Arc<Vocabulary>, text: &str) -> Formula {
    elaborate(&parse_sentence(text, vocab).expect("library sentence parses"))
        .expect("library sentence elaborates")
}

const PARITY_CHAIN: &str = "(P(0) & Q(0) | !P(0) & !Q(0)) & \
    (all x y. (suc(x,y) -> (P(y) & (P(x) & !Q(y) | !P(x) & Q(y)) | !P(y) & (P(x) & Q(y) | !P(x) & !Q(y)))))";

impl Library {
    pub fn new(threshold: Threshold) -> Self {
        Library { threshold }
    }

    /// Source text of a built-in sentence, before elaboration.
    pub fn sentence_text(&self, name: &str) -> Option<String> {
        let op = self.threshold.op();
        Some(match name {
            "IS" => format!("EXINJ f. all x y. (x != y & f(x) {op} k & f(y) {op} k -> !E(x,y))"),
            "CLIQUE" => format!("EXINJ f. all x y. (x != y & f(x) {op} k & f(y) {op} k -> E(x,y))"),
            "SUBGRAPHISO" => {
                "EXINJ f. all x y. (x != y & f(x) < k & f(y) < k -> (H(f(x),f(y)) -> F(x,y)))"
                    .into()
            }
            "PARITY" => format!("EX2 P/1. {PARITY_CHAIN} & P(max)"),
            "PARITY_PADDED" => format!("EX2 P/1. {PARITY_CHAIN} & (ex z. suc(z,max) & P(z))"),
            "beta_true" => "true".into(),
            "beta_sgi" => "all x y. (x < k & y < k -> F(x,y))".into(),
            "beta_sgi_image" => {
                "all x y. ((H(x,y) -> x < k & y < k) & (x < k & y < k -> H(x,y)))".into()
            }
            "beta_padding" => "max = 0 | (ex z. suc(0,z) & z != max) & Q(max)".into(),
            _ => return None,
        })
    }

    fn sentence_vocab(name: &str) -> Option<Arc<Vocabulary>> {
        match name {
            "IS" | "CLIQUE" | "beta_true" => Some(Vocabulary::graph()),
            "SUBGRAPHISO" | "beta_sgi" | "beta_sgi_image" => Some(sgi_vocabulary()),
            "PARITY" | "PARITY_PADDED" | "beta_padding" => Some(Vocabulary::string()),
            _ => None,
        }
    }

    pub fn problem(&self, name: &str) -> Result<Problem, CanonError> {
        let oracle: Oracle = match name {
            "IS" => vertex_set_oracle(self.threshold, false),
            "CLIQUE" => vertex_set_oracle(self.threshold, true),
            "SUBGRAPHISO" => Arc::new(subgraph_oracle),
            "PARITY" => Arc::new(|s: &Structure| ones(s, s.size()) % 2 == 1),
            "PARITY_PADDED" => {
                Arc::new(|s: &Structure| s.size() >= 2 && ones(s, s.size() - 1) % 2 == 1)
            }
            _ => return self.get(name).and_then(|b| Err(wrong(name, "problem", &b))),
        };
        let (vocab, formula) = self.sentence(name)?;
        Ok(Problem::new(name, &vocab, Some(formula), Some(oracle)))
    }

    /// A built-in sentence; problems also name their defining sentence.
    pub fn sentence(&self, name: &str) -> Result<(Arc<Vocabulary>, Formula), CanonError> {
        match (Self::sentence_vocab(name), self.sentence_text(name)) {
            (Some(v), Some(text)) => {
                let f = sentence(&v, &text);
                Ok((v, f))
            }
            _ => self
                .get(name)
                .and_then(|b| Err(wrong(name, "sentence", &b))),
        }
    }

    pub fn query(&self, name: &str) -> Result<Query, CanonError> {
        let graph = Vocabulary::graph();
        let sgi = sgi_vocabulary();
        let string = Vocabulary::string();
        let x: &[&str] = &["x1"];
        let xy: &[&str] = &["x1", "y1"];
        let q = match name {
            "fop_complement" => Query::from_text(
                name,
                &graph,
                &graph,
                1,
                (x, "true"),
                &[("E", xy, "!E(x1,y1)")],
                &[("k", x, "x1 = k")],
            ),
            "fop_clique_to_sgi" => Query::from_text(
                name,
                &graph,
                &sgi,
                1,
                (x, "true"),
                &[("F", xy, "E(x1,y1)"), ("H", xy, "x1 < k & y1 < k")],
                &[("k", x, "x1 = k")],
            ),
            "query_sgi_back" => Query::from_text(
                name,
                &sgi,
                &graph,
                1,
                (x, "true"),
                &[("E", xy, "F(x1,y1)")],
                &[("k", x, "x1 = k")],
            ),
            "fop_padding" => Query::from_text(
                name,
                &string,
                &string,
                2,
                (&["x", "y"], "x = 0 | (ex z. suc(0,z) & x = z) & y = 0"),
                &[(
                    "Q",
                    &["x", "y"],
                    "x = 0 & Q(y) | (ex z. suc(0,z) & x = z) & y = 0",
                )],
                &[],
            ),
            "id_query" => Ok(Query::identity(&graph)),
            _ => return self.get(name).and_then(|b| Err(wrong(name, "query", &b))),
        };
        Ok(q.expect("library query is well formed"))
    }

    pub fn get(&self, name: &str) -> Result<Builtin, CanonError> {
        if PROBLEM_NAMES.contains(&name) {
            self.problem(name).map(Builtin::Problem)
        } else if QUERY_NAMES.contains(&name) {
            self.query(name).map(Builtin::Query)
        } else if SENTENCE_NAMES.contains(&name) {
            self.sentence(name)
                .map(|(vocab, formula)| Builtin::Sentence { vocab, formula })
        } else {
            Err(CanonError::UnknownName(name.to_string()))
        }
    }

    /// Named decomposition set-ups. The subgraph cases other than
    /// `subgraphiso-verbatim` use strict thresholds regardless of `self`: with
    /// `<= k` the clique sentence asks for `k+1` vertices while the reduction
    /// only plants a `k`-vertex pattern.
    pub fn case(&self, name: &str) -> Result<Case, CanonError> {
        let strict = Library::new(Threshold::Strict);
        let verbatim = Library::new(Threshold::Verbatim);
        let (lib, p, back, psi, residue, beta, target, bound) = match name {
            "clique" => (
                *self,
                "fop_complement",
                "fop_complement",
                "IS",
                None,
                "beta_true",
                "CLIQUE",
                GRAPH_BOUND,
            ),
            "subgraphiso" => (
                strict,
                "fop_clique_to_sgi",
                "query_sgi_back",
                "CLIQUE",
                Some("SUBGRAPHISO"),
                "beta_sgi",
                "SUBGRAPHISO",
                SUBGRAPH_BOUND,
            ),
            "subgraphiso-no-residue" => (
                strict,
                "fop_clique_to_sgi",
                "query_sgi_back",
                "CLIQUE",
                None,
                "beta_sgi",
                "SUBGRAPHISO",
                SUBGRAPH_BOUND,
            ),
            "subgraphiso-verbatim" => (
                verbatim,
                "fop_clique_to_sgi",
                "query_sgi_back",
                "CLIQUE",
                Some("SUBGRAPHISO"),
                "beta_sgi",
                "SUBGRAPHISO",
                SUBGRAPH_BOUND,
            ),
            "identity" => (
                *self,
                "id_query",
                "id_query",
                "IS",
                None,
                "beta_true",
                "IS",
                GRAPH_BOUND,
            ),
            _ => return Err(CanonError::UnknownName(name.to_string())),
        };
        let fop = lib.query(p)?;
        let back = lib.query(back)?;
        let (_, psi) = lib.sentence(psi)?;
        let residue = match residue {
            Some(r) => lib.sentence(r)?.1,
            None => Formula::False,
        };
        let (_, beta) = lib.sentence(beta)?;
        Ok(Case {
            name: name.to_string(),
            decomposition: build_decomposition(&fop, &back, &psi, &residue, &beta)?,
            target: lib.problem(target)?,
            bound,
        })
    }
}

fn wrong(name: &str, expected: &'static str, found: &Builtin) -> CanonError {
    CanonError::WrongKind {
        name: name.to_string(),
        expected,
        found: found.kind(),
    }
}

/// A decomposition together with the problem it should define and the size
/// bound it is checked at.
#[derive(Debug, Clone)]
pub struct Case {
    pub name: String,
    pub decomposition: Decomposition,
    pub target: Problem,
    pub bound: usize,
}

/// Looks up any built-in with verbatim thresholds.
pub fn builtin(name: &str) -> Result<Builtin, CanonError> {
    Library::default().get(name)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::eval_so;
    use crate::exec::Sequential;
    use crate::model::{enumerate_structures, make_structure, word_to_structure};
    use crate::query::{apply_query, is_fop};

    const BUDGET: u64 = 1 << 24;

    #[test]
    fn sentences_agree_with_oracles_small() {
        for t in [Threshold::Verbatim, Threshold::Strict] {
            let lib = Library::new(t);
            for name in ["IS", "CLIQUE"] {
                let p = lib.problem(name).unwrap();
                for n in 1..=3 {
                    for s in enumerate_structures(p.vocab(), n).unwrap() {
                        let by_sentence = eval_so(&s, p.sentence().unwrap()).unwrap();
                        assert_eq!(p.contains(&s).unwrap(), by_sentence, "{name} {t:?} {s}");
                    }
                }
            }
        }
        let p = Library::default().problem("SUBGRAPHISO").unwrap();
        for n in 1..=2 {
            for s in enumerate_structures(p.vocab(), n).unwrap() {
                assert_eq!(
                    p.contains(&s).unwrap(),
                    eval_so(&s, p.sentence().unwrap()).unwrap(),
                    "{s}"
                );
            }
        }
        for name in ["PARITY", "PARITY_PADDED"] {
            let p = Library::default().problem(name).unwrap();
            for n in 1..=6 {
                for s in enumerate_structures(p.vocab(), n).unwrap() {
                    assert_eq!(
                        p.contains(&s).unwrap(),
                        eval_so(&s, p.sentence().unwrap()).unwrap(),
                        "{name} {s}"
                    );
                }
            }
        }
    }

    #[test]
    fn cong_examples() {
        let is = Library::default().problem("IS").unwrap();
        let g = Vocabulary::graph();
        let empty = make_structure(&g, 3, [("E", [[0, 0]; 0])], [("k", 1)]).unwrap();
        let full = make_structure(&g, 2, [("E", [[0, 1], [1, 0]])], [("k", 1)]).unwrap();
        let empty2 = make_structure(&g, 2, [("E", [[0, 0]; 0])], [("k", 0)]).unwrap();
        assert!(cong(&is, &empty, &empty2).unwrap());
        assert!(!cong(&is, &empty, &full).unwrap());
        assert!(cong(&is, &full, &full).unwrap());
    }

    #[test]
    fn library_queries_are_fops() {
        let lib = Library::default();
        for name in [
            "fop_complement",
            "fop_clique_to_sgi",
            "fop_padding",
            "id_query",
        ] {
            assert_eq!(is_fop(&lib.query(name).unwrap(), 3), Ok(()), "{name}");
        }
        assert!(matches!(lib.query("IS"), Err(CanonError::WrongKind { .. })));
        assert!(matches!(builtin("nope"), Err(CanonError::UnknownName(_))));
    }

    #[test]
    fn clique_to_sgi_plants_a_complete_pattern() {
        let g = Vocabulary::graph();
        let a = make_structure(&g, 3, [("E", [[0, 1]])], [("k", 2)]).unwrap();
        let b = apply_query(&Library::default().query("fop_clique_to_sgi").unwrap(), &a).unwrap();
        assert_eq!(b.relation("F"), a.relation("E"));
        assert_eq!(
            b.relation("H").unwrap().iter().collect::<Vec<_>>(),
            [[0, 0], [0, 1], [1, 0], [1, 1]]
        );
        assert_eq!(b.constant("k"), Some(2));
    }

    #[test]
    fn padded_parity_membership() {
        let p = Library::default().problem("PARITY_PADDED").unwrap();
        assert!(p
            .contains(&word_to_structure(&Vocabulary::string(), "101").unwrap())
            .unwrap());
        assert!(!p
            .contains(&word_to_structure(&Vocabulary::string(), "001").unwrap())
            .unwrap());
    }

    #[test]
    fn reductions() {
        let lib = Library::default();
        let comp = lib.query("fop_complement").unwrap();
        let (is, clique) = (lib.problem("IS").unwrap(), lib.problem("CLIQUE").unwrap());
        let r = verify_reduction(&comp, &is, &clique, 1..=3, BUDGET, &Sequential).unwrap();
        assert_eq!(r.verdict, Verdict::Verified);
        let r = verify_reduction(&comp, &is, &is, 1..=3, BUDGET, &Sequential).unwrap();
        assert_eq!(r.verdict, Verdict::Counterexample);
        let cx = r.counterexample.unwrap();
        assert_ne!(cx.memberships[0].1, cx.memberships[1].1);
        let pad = lib.query("fop_padding").unwrap();
        let r = verify_reduction(
            &pad,
            &lib.problem("PARITY").unwrap(),
            &lib.problem("PARITY_PADDED").unwrap(),
            2..=6,
            BUDGET,
            &Sequential,
        )
        .unwrap();
        assert_eq!(r.verdict, Verdict::Verified);
    }

    #[test]
    fn condition_c() {
        let lib = Library::new(Threshold::Strict);
        let comp = lib.query("fop_complement").unwrap();
        let r = verify_condition_c(
            &comp,
            &comp,
            &lib.problem("IS").unwrap(),
            1..=3,
            BUDGET,
            &Sequential,
        )
        .unwrap();
        assert_eq!(r.verdict, Verdict::Verified);
        let p = lib.query("fop_clique_to_sgi").unwrap();
        let back = lib.query("query_sgi_back").unwrap();
        let clique = lib.problem("CLIQUE").unwrap();
        let r = verify_condition_c(&back, &p, &clique, 1..=3, BUDGET, &Sequential).unwrap();
        assert_eq!(r.verdict, Verdict::Verified);
        let broken = Query::from_text(
            "broken",
            &sgi_vocabulary(),
            &Vocabulary::graph(),
            1,
            (&["x"], "true"),
            &[("E", &["x", "y"], "!F(x,y)")],
            &[("k", &["x"], "x = k")],
        )
        .unwrap();
        let r = verify_condition_c(&broken, &p, &clique, 1..=3, BUDGET, &Sequential).unwrap();
        assert_eq!(r.verdict, Verdict::Counterexample);
    }

    #[test]
    fn small_decompositions() {
        let lib = Library::default();
        let clique = lib.case("clique").unwrap();
        let r = verify_decomposition(
            &clique.decomposition,
            &clique.target,
            1..=3,
            BUDGET,
            &Sequential,
        )
        .unwrap();
        assert_eq!(r.verdict, Verdict::Verified);
        let id = lib.case("identity").unwrap();
        let r = verify_decomposition(&id.decomposition, &id.target, 1..=3, BUDGET, &Sequential)
            .unwrap();
        assert_eq!(r.verdict, Verdict::Verified);
        for (name, verdict) in [
            ("subgraphiso", Verdict::Verified),
            ("subgraphiso-no-residue", Verdict::Counterexample),
            ("subgraphiso-verbatim", Verdict::Counterexample),
        ] {
            let case = lib.case(name).unwrap();
            let r = verify_decomposition(
                &case.decomposition,
                &case.target,
                1..=2,
                BUDGET,
                &Sequential,
            )
            .unwrap();
            assert_eq!(r.verdict, verdict, "{name}");
        }
    }
}

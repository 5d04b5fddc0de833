//! Command-line interface.

use std::ffi::OsString;
use std::io::Write;
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fopkit_core::canonical::{
    self, build_decomposition, verify_condition_c, verify_decomposition, verify_reduction,
    CanonError, Library, Problem, ReductionReport, Threshold, CASE_NAMES, PROBLEM_NAMES,
    QUERY_NAMES, SENTENCE_NAMES,
};
use fopkit_core::dual::{
    image_membership, semantic_dual_eval, syntactic_dual, verify_characteristic, DualError,
};
use fopkit_core::eval::{eval_so_with_budget, find_witness, EvalError, Program};
use fopkit_core::logic::{
    elaborate, parse_with, simplify, Formula, LogicError, ParseError, ParseOptions,
};
use fopkit_core::model::{structure_to_word, word_to_structure, ModelError, StructureSpace};
use fopkit_core::query::{check_injective, QueryError};
use fopkit_core::{Query, Structure, Vocabulary, DEFAULT_BUDGET};

use crate::exec::Parallel;
use crate::report::{self, Labelled, Report, Sizes};
use crate::text::{parse_document, print_structure, vocabulary_preamble, TextError, Vocabularies};

/// Environment variable overriding the evaluation and enumeration budget.
pub const BUDGET_VAR: &str = "FOPKIT_BUDGET";

#[derive(Debug, Parser)]
#[command(
    name = "fopkit",
    version,
    about = "Finite structures, first-order projections and reduction checks"
)]
pub struct Cli {
    /// Print a JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads for exhaustive checks (results do not depend on it).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// How the independent-set and clique sentences read `f(x) <= k`.
    #[arg(long, global = true, value_enum, default_value_t = ThresholdArg::Verbatim)]
    threshold: ThresholdArg,
    /// Extra files declaring vocabularies.
    #[arg(long = "vocab", global = true, value_name = "FILE")]
    vocab_files: Vec<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ThresholdArg {
    Verbatim,
    Strict,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate a sentence on a structure.
    Eval(EvalArgs),
    /// Apply a query to a structure.
    Apply(ApplyArgs),
    /// Exhaustively check a claim up to a size bound.
    Verify {
        #[command(subcommand)]
        kind: VerifyKind,
    },
    /// Rewrite a sentence about query outputs into one about query inputs.
    Dual(DualArgs),
    /// Search for a preimage of a structure under a query.
    Image(ImageArgs),
    /// List the built-in objects.
    List,
    /// Print a built-in object.
    Show { name: String },
}

#[derive(Debug, Args)]
struct Input {
    /// Structure file (the first structure in it is used).
    #[arg(long = "struct", value_name = "FILE", conflicts_with = "string")]
    structure: Option<PathBuf>,
    /// A bit string, read as a structure over the relevant string vocabulary.
    #[arg(long)]
    string: Option<String>,
}

#[derive(Debug, Args)]
struct SentenceArg {
    /// Built-in sentence or problem name.
    #[arg(long, conflicts_with = "formula")]
    builtin: Option<String>,
    /// File holding a sentence.
    #[arg(long, value_name = "FILE")]
    formula: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct EvalArgs {
    #[command(flatten)]
    input: Input,
    #[command(flatten)]
    sentence: SentenceArg,
    /// Also print interpretations of the leading existential block.
    #[arg(long)]
    witness: bool,
}

#[derive(Debug, Args)]
struct ApplyArgs {
    /// Query file.
    #[arg(long, value_name = "FILE", conflicts_with = "builtin")]
    query: Option<PathBuf>,
    /// Built-in query name.
    #[arg(long)]
    builtin: Option<String>,
    #[command(flatten)]
    input: Input,
    /// Write the output structure to a file.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct Bounds {
    /// Largest structure size checked (default 3, or 6 for strings).
    #[arg(long)]
    max_size: Option<usize>,
    /// Smallest structure size checked.
    #[arg(long, default_value_t = 1)]
    min_size: usize,
    /// Cap the size bound at 2 for a quick run.
    #[arg(long)]
    fast: bool,
}

impl Bounds {
    fn range(&self, vocab: &Vocabulary) -> RangeInclusive<usize> {
        let default = if vocab.is_string_vocabulary() { 6 } else { 3 };
        let mut max = self.max_size.unwrap_or(default);
        if self.fast {
            max = max.min(2);
        }
        self.min_size.max(1)..=max
    }
}

#[derive(Debug, Subcommand)]
enum VerifyKind {
    /// `A in SOURCE  <=>  fop(A) in TARGET` for all A.
    Reduction {
        /// Query: built-in name or file.
        #[arg(long)]
        fop: String,
        /// Problem: built-in name or sentence file over the query's source.
        #[arg(long)]
        source: String,
        /// Problem: built-in name or sentence file over the query's target.
        #[arg(long)]
        target: String,
        #[command(flatten)]
        bounds: Bounds,
    },
    /// `back(fop(A)) ~ A` with respect to PROBLEM for all A.
    ConditionC {
        #[arg(long)]
        back: String,
        #[arg(long)]
        fop: String,
        #[arg(long)]
        problem: String,
        #[command(flatten)]
        bounds: Bounds,
    },
    /// BETA holds exactly on the image of the query.
    Characteristic {
        /// Sentence over the query's target: built-in name or file.
        #[arg(long)]
        beta: String,
        #[arg(long)]
        fop: String,
        /// Largest source size searched for preimages (default: the size bound).
        #[arg(long)]
        preimage_bound: Option<usize>,
        #[command(flatten)]
        bounds: Bounds,
    },
    /// The assembled canonical sentence defines the target problem.
    Decomposition {
        /// A named set-up; the other options build a custom one instead.
        #[arg(long, conflicts_with_all = ["fop", "back", "psi", "residue", "beta", "target"])]
        case: Option<String>,
        #[arg(long)]
        fop: Option<String>,
        #[arg(long)]
        back: Option<String>,
        /// Sentence over the back query's target.
        #[arg(long)]
        psi: Option<String>,
        /// Sentence used outside the image (default `false`).
        #[arg(long)]
        residue: Option<String>,
        #[arg(long)]
        beta: Option<String>,
        #[arg(long)]
        target: Option<String>,
        /// Print the assembled sentence.
        #[arg(long)]
        print: bool,
        #[command(flatten)]
        bounds: Bounds,
    },
    /// Distinct inputs have distinct outputs.
    Injective {
        #[arg(long)]
        fop: String,
        #[command(flatten)]
        bounds: Bounds,
    },
}

#[derive(Debug, Args)]
struct DualArgs {
    /// Query: built-in name (`id` for the identity) or file.
    #[arg(long)]
    query: String,
    #[command(flatten)]
    sentence: SentenceArg,
    /// Push negations inward and fold constants in the result.
    #[arg(long)]
    simplify: bool,
    /// Compare with applying the query and evaluating, on all sources up to this size.
    #[arg(long, value_name = "N")]
    semantic_check: Option<usize>,
    /// Write the formula to a file.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ImageArgs {
    #[arg(long)]
    query: String,
    #[command(flatten)]
    input: Input,
    /// Largest source size searched (default: the structure's size).
    #[arg(long)]
    max_preimage: Option<usize>,
}

/// A failed command: message plus whether a smaller bound might help.
#[derive(Debug)]
struct Failure {
    message: String,
    budget: bool,
}

impl Failure {
    fn new(message: impl Into<String>) -> Self {
        Failure {
            message: message.into(),
            budget: false,
        }
    }
}

macro_rules! failure_from {
    ($($t:ty $(=> $budget:pat)?),* $(,)?) => {$(
        impl From<$t> for Failure {
            fn from(e: $t) -> Self {
                let budget = false $(|| matches!(e, $budget))?;
                Failure { budget, message: e.to_string() }
            }
        }
    )*};
}

failure_from! {
    CanonError => CanonError::BudgetExceeded { .. } | CanonError::Eval(EvalError::BudgetExceeded { .. }),
    DualError => DualError::BudgetExceeded { .. } | DualError::Eval(EvalError::BudgetExceeded { .. }),
    QueryError => QueryError::BudgetExceeded { .. } | QueryError::Eval(EvalError::BudgetExceeded { .. }),
    EvalError => EvalError::BudgetExceeded { .. },
    ModelError => ModelError::TooLarge,
    ParseError,
    LogicError,
    TextError,
}

type Res<T> = Result<T, Failure>;

struct Ctx {
    lib: Library,
    vocabs: Vocabularies,
    budget: u64,
    exec: Parallel,
}

impl Ctx {
    fn read(&self, path: &Path) -> Res<String> {
        std::fs::read_to_string(path).map_err(|e| Failure::new(format!("{}: {e}", path.display())))
    }

    fn document(&self, path: &Path) -> Res<crate::text::Document> {
        let text = self.read(path)?;
        let mut vocabs = self.vocabs.clone();
        parse_document(&text, &mut vocabs)
            .map_err(|e| Failure::new(format!("{}: {e}", path.display())))
    }

    fn structure(&self, input: &Input, string_vocab: &Arc<Vocabulary>) -> Res<(String, Structure)> {
        match (&input.structure, &input.string) {
            (Some(path), _) => {
                let mut doc = self.document(path)?;
                if doc.structures.is_empty() {
                    return Err(Failure::new(format!(
                        "{}: no structure declared",
                        path.display()
                    )));
                }
                Ok(doc.structures.remove(0))
            }
            (None, Some(word)) => Ok(("input".into(), word_to_structure(string_vocab, word)?)),
            (None, None) => Err(Failure::new("give --struct FILE or --string BITS")),
        }
    }

    fn query(&self, arg: &str) -> Res<Query> {
        let name = if arg == "id" { "id_query" } else { arg };
        match self.lib.query(name) {
            Ok(q) => return Ok(q),
            Err(CanonError::UnknownName(_)) => {}
            Err(e) => return Err(e.into()),
        }
        let path = Path::new(arg);
        if !path.exists() {
            return Err(Failure::new(format!(
                "`{arg}` is neither a built-in query nor a file"
            )));
        }
        let mut doc = self.document(path)?;
        if doc.queries.is_empty() {
            return Err(Failure::new(format!("{arg}: no query declared")));
        }
        Ok(doc.queries.remove(0))
    }

    fn sentence_file(&self, path: &Path, vocab: &Arc<Vocabulary>) -> Res<Formula> {
        let text = self.read(path)?;
        let options = ParseOptions {
            closed: true,
            allow_reserved: true,
        };
        let f = parse_with(&text, vocab, options)
            .map_err(|e| Failure::new(format!("{}: {e}", path.display())))?;
        Ok(elaborate(&f)?)
    }

    /// A built-in sentence or a sentence file, over `vocab`.
    fn sentence(&self, arg: &str, vocab: &Arc<Vocabulary>) -> Res<Formula> {
        match self.lib.sentence(arg) {
            Ok((v, f)) => {
                expect_vocab(&v, vocab, arg)?;
                Ok(f)
            }
            Err(CanonError::UnknownName(_)) if Path::new(arg).exists() => {
                self.sentence_file(Path::new(arg), vocab)
            }
            Err(CanonError::UnknownName(_)) => Err(Failure::new(format!(
                "`{arg}` is neither a built-in sentence nor a file"
            ))),
            Err(e) => Err(e.into()),
        }
    }

    fn sentence_arg(&self, arg: &SentenceArg, vocab: &Arc<Vocabulary>) -> Res<(String, Formula)> {
        match (&arg.builtin, &arg.formula) {
            (Some(name), _) => {
                let (v, f) = self.lib.sentence(name)?;
                expect_vocab(&v, vocab, name)?;
                Ok((name.clone(), f))
            }
            (None, Some(path)) => {
                Ok((path.display().to_string(), self.sentence_file(path, vocab)?))
            }
            (None, None) => Err(Failure::new("give --builtin NAME or --formula FILE")),
        }
    }

    fn problem(&self, arg: &str, vocab: &Arc<Vocabulary>) -> Res<Problem> {
        match self.lib.problem(arg) {
            Ok(p) => {
                expect_vocab(p.vocab(), vocab, arg)?;
                Ok(p)
            }
            Err(CanonError::UnknownName(_)) if Path::new(arg).exists() => {
                let f = self.sentence_file(Path::new(arg), vocab)?;
                Ok(Problem::new(arg, vocab, Some(f), None))
            }
            Err(CanonError::UnknownName(_)) => Err(Failure::new(format!(
                "`{arg}` is neither a built-in problem nor a file"
            ))),
            Err(e) => Err(e.into()),
        }
    }
}

fn expect_vocab(found: &Vocabulary, expected: &Vocabulary, what: &str) -> Res<()> {
    if found != expected {
        return Err(Failure::new(format!(
            "`{what}` is over `{}`, expected `{}`",
            found.name(),
            expected.name()
        )));
    }
    Ok(())
}

fn sizes(range: &RangeInclusive<usize>) -> Option<Sizes> {
    Some(Sizes {
        min: *range.start(),
        max: *range.end(),
    })
}

fn struct_text(name: &str, s: &Structure) -> String {
    format!(
        "{}{}",
        vocabulary_preamble(s.vocab()),
        print_structure(name, s)
    )
}

fn reduction_report(command: &str, r: ReductionReport) -> Report {
    let mut out = Report::new(command, r.verdict.into());
    out.sizes = sizes(&r.sizes);
    out.checked = Some(r.checked);
    out.counterexample = r.counterexample.map(|cx| report::Counterexample {
        structure: struct_text("counterexample", &cx.structure),
        images: cx
            .images
            .iter()
            .map(|(label, s)| Labelled {
                label: label.clone(),
                value: print_structure("image", s),
            })
            .collect(),
        memberships: cx
            .memberships
            .into_iter()
            .map(|(label, value)| Labelled { label, value })
            .collect(),
    });
    out
}

fn write_out(path: &Option<PathBuf>, text: &str) -> Res<()> {
    if let Some(p) = path {
        std::fs::write(p, format!("{text}\n"))
            .map_err(|e| Failure::new(format!("{}: {e}", p.display())))?;
    }
    Ok(())
}

fn eval_cmd(ctx: &Ctx, args: &EvalArgs) -> Res<Report> {
    let string = Vocabulary::string();
    let (name, s) = ctx.structure(&args.input, &string)?;
    let (_, f) = ctx.sentence_arg(&args.sentence, s.vocab())?;
    let value = eval_so_with_budget(&s, &f, ctx.budget)?;
    let mut r = Report::new(
        "eval",
        if value {
            report::Verdict::Ok
        } else {
            report::Verdict::Counterexample
        },
    );
    r.value = Some(value);
    let mut output = value.to_string();
    if args.witness && value {
        if let Some(w) = find_witness(&s, &f)? {
            output.push_str(&format!("\n{w}"));
        }
    }
    r.output = Some(output);
    if !value {
        r.counterexample = Some(report::Counterexample {
            structure: struct_text(&name, &s),
            images: Vec::new(),
            memberships: Vec::new(),
        });
    }
    Ok(r)
}

fn apply_cmd(ctx: &Ctx, args: &ApplyArgs) -> Res<Report> {
    let q = match (&args.query, &args.builtin) {
        (Some(path), _) => ctx.query(&path.display().to_string())?,
        (None, Some(name)) => ctx.query(name)?,
        (None, None) => return Err(Failure::new("give --query FILE or --builtin NAME")),
    };
    let (name, s) = ctx.structure(&args.input, q.source())?;
    let image = q.compile()?.apply(&s)?;
    let text = if args.input.string.is_some() && image.vocab().is_string_vocabulary() {
        structure_to_word(&image)?
    } else {
        struct_text(&name, &image)
    };
    write_out(&args.out, &text)?;
    let mut r = Report::new("apply", report::Verdict::Ok);
    r.output = Some(text);
    Ok(r)
}

fn verify_cmd(ctx: &Ctx, kind: &VerifyKind) -> Res<Report> {
    let (lib, budget, exec) = (&ctx.lib, ctx.budget, &ctx.exec);
    match kind {
        VerifyKind::Reduction {
            fop,
            source,
            target,
            bounds,
        } => {
            let p = ctx.query(fop)?;
            let (s, t) = (
                ctx.problem(source, p.source())?,
                ctx.problem(target, p.target())?,
            );
            let r = verify_reduction(&p, &s, &t, bounds.range(p.source()), budget, exec)?;
            Ok(reduction_report("verify reduction", r))
        }
        VerifyKind::ConditionC {
            back,
            fop,
            problem,
            bounds,
        } => {
            let (p, back) = (ctx.query(fop)?, ctx.query(back)?);
            let problem = ctx.problem(problem, p.source())?;
            let r =
                verify_condition_c(&back, &p, &problem, bounds.range(p.source()), budget, exec)?;
            Ok(reduction_report("verify condition-c", r))
        }
        VerifyKind::Characteristic {
            beta,
            fop,
            preimage_bound,
            bounds,
        } => {
            let p = ctx.query(fop)?;
            let beta = ctx.sentence(beta, p.target())?;
            let range = bounds.range(p.target());
            let pre = preimage_bound.unwrap_or(*range.end());
            let c = verify_characteristic(&beta, &p, range.clone(), pre, budget, exec)?;
            let mut r = Report::new("verify characteristic", c.verdict.into());
            r.sizes = sizes(&c.sizes);
            r.checked = Some(c.checked);
            r.notes.push(format!(
                "preimages searched up to size {}",
                c.preimage_bound
            ));
            r.counterexample = c.counterexample.map(|cx| report::Counterexample {
                structure: struct_text("counterexample", &cx.structure),
                images: cx
                    .preimage
                    .iter()
                    .map(|a| Labelled {
                        label: "preimage".into(),
                        value: print_structure("preimage", a),
                    })
                    .collect(),
                memberships: vec![
                    Labelled {
                        label: "sentence holds".into(),
                        value: cx.sentence,
                    },
                    Labelled {
                        label: "in the image".into(),
                        value: cx.preimage.is_some(),
                    },
                ],
            });
            Ok(r)
        }
        VerifyKind::Decomposition {
            case,
            fop,
            back,
            psi,
            residue,
            beta,
            target,
            print,
            bounds,
        } => {
            let (decomposition, target, note) = match case {
                Some(name) => {
                    let c = lib.case(name)?;
                    let note = (name.starts_with("subgraphiso") && name != "subgraphiso-verbatim")
                        .then(|| "this case uses strict thresholds".to_string());
                    (c.decomposition, c.target, note)
                }
                None => {
                    let need = |o: &Option<String>, flag: &str| {
                        o.clone()
                            .ok_or_else(|| Failure::new(format!("give --case NAME or --{flag}")))
                    };
                    let p = ctx.query(&need(fop, "fop")?)?;
                    let back = ctx.query(&need(back, "back")?)?;
                    let psi = ctx.sentence(&need(psi, "psi")?, back.target())?;
                    let residue = match residue {
                        Some(r) => ctx.sentence(r, p.target())?,
                        None => Formula::False,
                    };
                    let beta = ctx.sentence(&need(beta, "beta")?, p.target())?;
                    let target = ctx.problem(&need(target, "target")?, p.target())?;
                    (
                        build_decomposition(&p, &back, &psi, &residue, &beta)?,
                        target,
                        None,
                    )
                }
            };
            let range = bounds.range(decomposition.fop.target());
            let r = verify_decomposition(&decomposition, &target, range, budget, exec)?;
            let mut report = reduction_report("verify decomposition", r);
            if *print {
                report.output = Some(decomposition.sentence.to_string());
            }
            report.notes.extend(note);
            Ok(report)
        }
        VerifyKind::Injective { fop, bounds } => {
            let p = ctx.query(fop)?;
            let range = bounds.range(p.source());
            let collision = check_injective(&p, range.clone(), budget)?;
            let verdict = if collision.is_some() {
                report::Verdict::Counterexample
            } else {
                report::Verdict::Ok
            };
            let mut r = Report::new("verify injective", verdict);
            r.sizes = sizes(&range);
            r.checked = Some(StructureSpace::new(p.source(), range)?.len());
            r.counterexample = collision.map(|c| report::Counterexample {
                structure: struct_text("first", &c.first),
                images: vec![
                    Labelled {
                        label: "second input".into(),
                        value: print_structure("second", &c.second),
                    },
                    Labelled {
                        label: "common image".into(),
                        value: print_structure("image", &c.image),
                    },
                ],
                memberships: Vec::new(),
            });
            Ok(r)
        }
    }
}

fn dual_cmd(ctx: &Ctx, args: &DualArgs) -> Res<Report> {
    let q = ctx.query(&args.query)?;
    let (_, theta) = ctx.sentence_arg(&args.sentence, q.target())?;
    let dual = syntactic_dual(&q, &theta)?;
    let formula = if args.simplify {
        simplify(&dual.formula)
    } else {
        dual.formula.clone()
    };
    let text = formula.to_string();
    write_out(&args.out, &text)?;
    let mut r = Report::new("dual", report::Verdict::Ok);
    r.output = Some(text);
    r.notes = dual.notes.clone();
    if let Some(n) = args.semantic_check {
        let range = 1..=n;
        let program = Program::sentence(&formula, q.source())?;
        let space = StructureSpace::new(q.source(), range.clone())?;
        if space.len() > ctx.budget {
            return Err(Failure {
                message: format!(
                    "{} structures to check, over the budget of {}",
                    space.len(),
                    ctx.budget
                ),
                budget: true,
            });
        }
        let mut checked = 0;
        for a in space.iter() {
            checked += 1;
            let expected = match semantic_dual_eval(&q, &theta, &a) {
                Ok(b) => b,
                Err(DualError::Query(
                    QueryError::EmptyImageUniverse | QueryError::ConstantUndefined(_),
                )) => continue,
                Err(e) => return Err(e.into()),
            };
            let found = program.holds(&a, ctx.budget)?;
            if found != expected {
                r.verdict = report::Verdict::Counterexample;
                r.counterexample = Some(report::Counterexample {
                    structure: struct_text("counterexample", &a),
                    images: Vec::new(),
                    memberships: vec![
                        Labelled {
                            label: "dual holds".into(),
                            value: found,
                        },
                        Labelled {
                            label: "sentence holds on the image".into(),
                            value: expected,
                        },
                    ],
                });
                break;
            }
        }
        r.sizes = sizes(&range);
        r.checked = Some(checked);
    }
    Ok(r)
}

fn image_cmd(ctx: &Ctx, args: &ImageArgs) -> Res<Report> {
    let q = ctx.query(&args.query)?;
    let (_, target) = ctx.structure(&args.input, q.target())?;
    expect_vocab(target.vocab(), q.target(), "the structure")?;
    let bound = args.max_preimage.unwrap_or(target.size());
    let pre = image_membership(&q, &target, bound, ctx.budget)?;
    let mut r = Report::new(
        "image",
        if pre.is_some() {
            report::Verdict::Ok
        } else {
            report::Verdict::Counterexample
        },
    );
    r.value = Some(pre.is_some());
    r.output = Some(match &pre {
        Some(a) if args.input.string.is_some() && a.vocab().is_string_vocabulary() => {
            structure_to_word(a)?
        }
        Some(a) => struct_text("preimage", a),
        None => format!("no preimage of size at most {bound}"),
    });
    Ok(r)
}

fn list_cmd() -> Report {
    let mut r = Report::new("list", report::Verdict::Ok);
    r.output = Some(format!(
        "problems: {}\nqueries: {}\nsentences: {}\ncases: {}\nvocabularies: graph, sgi, string",
        PROBLEM_NAMES.join(", "),
        QUERY_NAMES.join(", "),
        SENTENCE_NAMES.join(", "),
        CASE_NAMES.join(", ")
    ));
    r
}

fn show_cmd(ctx: &Ctx, name: &str) -> Res<Report> {
    let text = if let Some(v) = canonical::vocabulary(name) {
        v.to_string()
    } else {
        match ctx.lib.get(name)? {
            canonical::Builtin::Query(q) => q.to_string(),
            canonical::Builtin::Problem(_) | canonical::Builtin::Sentence { .. } => ctx
                .lib
                .sentence_text(name)
                .expect("named sentence has text"),
        }
    };
    let mut r = Report::new("show", report::Verdict::Ok);
    r.output = Some(text);
    Ok(r)
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Eval(_) => "eval",
        Command::Apply(_) => "apply",
        Command::Verify { kind } => match kind {
            VerifyKind::Reduction { .. } => "verify reduction",
            VerifyKind::ConditionC { .. } => "verify condition-c",
            VerifyKind::Characteristic { .. } => "verify characteristic",
            VerifyKind::Decomposition { .. } => "verify decomposition",
            VerifyKind::Injective { .. } => "verify injective",
        },
        Command::Dual(_) => "dual",
        Command::Image(_) => "image",
        Command::List => "list",
        Command::Show { .. } => "show",
    }
}

fn max_size(c: &Command) -> Option<usize> {
    match c {
        Command::Verify { kind } => match kind {
            VerifyKind::Reduction { bounds, .. }
            | VerifyKind::ConditionC { bounds, .. }
            | VerifyKind::Characteristic { bounds, .. }
            | VerifyKind::Decomposition { bounds, .. }
            | VerifyKind::Injective { bounds, .. } => bounds.max_size,
        },
        Command::Dual(d) => d.semantic_check,
        _ => None,
    }
}

fn budget() -> Res<u64> {
    match std::env::var(BUDGET_VAR) {
        Ok(v) => v.trim().parse().map_err(|_| {
            Failure::new(format!(
                "{BUDGET_VAR} must be a non-negative integer, got `{v}`"
            ))
        }),
        Err(_) => Ok(DEFAULT_BUDGET),
    }
}

fn execute(cli: &Cli) -> Res<Report> {
    let threshold = match cli.threshold {
        ThresholdArg::Verbatim => Threshold::Verbatim,
        ThresholdArg::Strict => Threshold::Strict,
    };
    let mut vocabs = Vocabularies::default();
    for path in &cli.vocab_files {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::new(format!("{}: {e}", path.display())))?;
        parse_document(&text, &mut vocabs)
            .map_err(|e| Failure::new(format!("{}: {e}", path.display())))?;
    }
    let ctx = Ctx {
        lib: Library::new(threshold),
        vocabs,
        budget: budget()?,
        exec: cli.jobs.map_or_else(Parallel::default, Parallel::new),
    };
    match &cli.command {
        Command::Eval(a) => eval_cmd(&ctx, a),
        Command::Apply(a) => apply_cmd(&ctx, a),
        Command::Verify { kind } => verify_cmd(&ctx, kind),
        Command::Dual(a) => dual_cmd(&ctx, a),
        Command::Image(a) => image_cmd(&ctx, a),
        Command::List => Ok(list_cmd()),
        Command::Show { name } => show_cmd(&ctx, name),
    }
}

/// Runs the command line and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                let _ = write!(err, "{e}");
                2
            } else {
                let _ = write!(out, "{e}");
                0
            };
            return code;
        }
    };
    let command = command_name(&cli.command);
    let start = Instant::now();
    let mut report = execute(&cli).unwrap_or_else(|f| {
        let mut message = f.message;
        if f.budget {
            match max_size(&cli.command) {
                Some(n) if n > 1 => {
                    message.push_str(&format!("; try a smaller bound such as {}", n - 1))
                }
                _ => message.push_str(&format!("; try a smaller bound or raise {BUDGET_VAR}")),
            }
        }
        Report::error(command, message)
    });
    report.duration_ms = start.elapsed().as_secs_f64() * 1e3;
    if cli.json {
        let _ = writeln!(out, "{}", report.to_json());
    } else {
        let text = report.render();
        if report.verdict == report::Verdict::Error {
            let _ = write!(err, "{text}");
        } else {
            let _ = write!(out, "{text}");
            if report.sizes.is_some() {
                let _ = writeln!(err, "elapsed: {:.3} s", report.duration_ms / 1e3);
            }
        }
    }
    report.verdict.exit_code()
}

mod common;

use common::{formula, Scope, Tape};
use fopkit_core::canonical::{Library, Threshold, PROBLEM_NAMES, QUERY_NAMES, SENTENCE_NAMES};
use fopkit_core::logic::{elaborate, parse_with, Formula, ParseOptions};
use fopkit_core::Vocabulary;
use proptest::prelude::*;

fn reparse(f: &Formula, vocab: &std::sync::Arc<Vocabulary>) -> Formula {
    let text = f.to_string();
    parse_with(
        &text,
        vocab,
        ParseOptions {
            closed: false,
            allow_reserved: true,
        },
    )
    .unwrap_or_else(|e| panic!("{text}: {e}"))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]
    #[test]
    fn random_formulas_survive_print_parse(tape in proptest::collection::vec(any::<u32>(), 1..200)) {
        let mut rng = Tape(tape.into_iter());
        let f = formula(&mut rng, &Scope::default(), 6);
        let vocab = Vocabulary::graph();
        prop_assert_eq!(reparse(&f, &vocab), f);
    }
}

#[test]
fn builtins_survive_print_parse() {
    for t in [Threshold::Verbatim, Threshold::Strict] {
        let lib = Library::new(t);
        for name in PROBLEM_NAMES.iter().chain(SENTENCE_NAMES) {
            let (vocab, f) = lib.sentence(name).unwrap();
            assert_eq!(reparse(&f, &vocab), f, "{name}");
            let raw = parse_with(
                &lib.sentence_text(name).unwrap(),
                &vocab,
                ParseOptions::default(),
            )
            .unwrap();
            assert_eq!(reparse(&raw, &vocab), raw, "{name}");
            assert_eq!(elaborate(&raw).unwrap(), f);
        }
        for name in QUERY_NAMES {
            let q = lib.query(name).unwrap();
            for c in std::iter::once(q.universe())
                .chain(q.relations())
                .chain(q.constants().iter().map(|c| &c.component))
            {
                assert_eq!(reparse(&c.formula, q.source()), c.formula, "{name}");
            }
        }
    }
}

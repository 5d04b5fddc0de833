//! Printer producing text that parses back to the same AST.

use core::fmt::{self, Display, Formatter, Write};

use super::{Connective, Formula, FunctionKind, NumericOp, Quantifier, SoRange, Term};

impl Display for Term {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) | Term::Const(v) => f.write_str(v),
            Term::Zero => f.write_str("0"),
            Term::Max => f.write_str("max"),
            Term::Apply(g, t) => write!(f, "{g}({t})"),
        }
    }
}

impl Display for Formula {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        write_formula(f, self, 0)
    }
}

const IMPLIES: u8 = 1;
const OR: u8 = 2;
const AND: u8 = 3;
const UNARY: u8 = 4;

fn write_args(f: &mut Formatter<'_>, args: &[Term]) -> fmt::Result {
    f.write_char('(')?;
    for (i, t) in args.iter().enumerate() {
        if i > 0 {
            f.write_char(',')?;
        }
        write!(f, "{t}")?;
    }
    f.write_char(')')
}

fn is_binder(g: &Formula) -> bool {
    matches!(
        g,
        Formula::Quant(..) | Formula::SoQuant { .. } | Formula::FunctionBinder { .. }
    )
}

/// `min` is the weakest operator precedence allowed without parentheses;
/// binders only go unparenthesized at `min == 0` since they extend right.
fn write_formula(f: &mut Formatter<'_>, g: &Formula, min: u8) -> fmt::Result {
    match g {
        Formula::True => f.write_str("true"),
        Formula::False => f.write_str("false"),
        Formula::Rel(r, args) | Formula::SoAtom(r, args) => {
            f.write_str(r)?;
            write_args(f, args)
        }
        Formula::Numeric(op, a, b) => match op {
            NumericOp::Eq => write!(f, "{a} = {b}"),
            NumericOp::Le => write!(f, "{a} <= {b}"),
            NumericOp::Lt => write!(f, "{a} < {b}"),
            NumericOp::Bit => write!(f, "BIT({a},{b})"),
            NumericOp::Suc => write!(f, "suc({a},{b})"),
        },
        Formula::Not(inner) => match &**inner {
            Formula::Numeric(NumericOp::Eq, a, b) => write!(f, "{a} != {b}"),
            Formula::Not(h) if matches!(**h, Formula::Numeric(NumericOp::Eq, ..)) => {
                f.write_str("!(")?;
                write_formula(f, inner, 0)?;
                f.write_char(')')
            }
            _ => {
                f.write_char('!')?;
                write_formula(f, inner, UNARY)
            }
        },
        Formula::Binary(op, a, b) => {
            let (prec, sym, lmin, rmin) = match op {
                Connective::And => (AND, " & ", AND, UNARY),
                Connective::Or => (OR, " | ", OR, AND),
                Connective::Implies => (IMPLIES, " -> ", OR, IMPLIES),
            };
            let paren = prec < min;
            if paren {
                f.write_char('(')?;
            }
            write_formula(f, a, lmin)?;
            f.write_str(sym)?;
            write_formula(f, b, rmin)?;
            if paren {
                f.write_char(')')?;
            }
            Ok(())
        }
        _ => {
            debug_assert!(is_binder(g));
            let paren = min > 0;
            if paren {
                f.write_char('(')?;
            }
            write_binders(f, g)?;
            if paren {
                f.write_char(')')?;
            }
            Ok(())
        }
    }
}

fn write_binders(f: &mut Formatter<'_>, g: &Formula) -> fmt::Result {
    match g {
        Formula::Quant(q, v, body) => {
            f.write_str(match q {
                Quantifier::Forall => "all ",
                Quantifier::Exists => "ex ",
            })?;
            f.write_str(v)?;
            // Collapse `all x. all y.` into `all x y.`.
            let mut body = &**body;
            while let Formula::Quant(q2, v2, inner) = body {
                if q2 != q {
                    break;
                }
                write!(f, " {v2}")?;
                body = inner;
            }
            f.write_str(". ")?;
            write_formula(f, body, 0)
        }
        Formula::SoQuant {
            quantifier,
            var,
            arity,
            range,
            body,
        } => {
            let q = match quantifier {
                Quantifier::Forall => "ALL2",
                Quantifier::Exists => "EX2",
            };
            write!(f, "{q} {var}/{arity}")?;
            match range {
                SoRange::Relations => {}
                SoRange::Functions => f.write_str(" fun")?,
                SoRange::Injections => f.write_str(" inj")?,
            }
            f.write_str(". ")?;
            write_formula(f, body, 0)
        }
        Formula::FunctionBinder { kind, var, body } => {
            let b = match kind {
                FunctionKind::Total => "EXFUN",
                FunctionKind::Injective => "EXINJ",
            };
            write!(f, "{b} {var}. ")?;
            write_formula(f, body, 0)
        }
        _ => unreachable!("not a binder"),
    }
}

#[cfg(test)]
mod tests {
    use super::super::{parse_formula, parse_with, ParseOptions};
    use crate::model::Vocabulary;
    use alloc::string::ToString;

    fn round_trip(text: &str) {
        let v = Vocabulary::graph();
        let f = parse_formula(text, &v).unwrap();
        let printed = f.to_string();
        let opts = ParseOptions {
            allow_reserved: true,
            ..Default::default()
        };
        assert_eq!(
            parse_with(&printed, &v, opts).unwrap(),
            f,
            "printed as {printed}"
        );
    }

    #[test]
    fn prints_canonical_text() {
        let v = Vocabulary::graph();
        let f = parse_formula(
            "EXINJ f. all x. all y. (x != y & f(x) <= k & f(y) <= k -> !E(x,y))",
            &v,
        )
        .unwrap();
        assert_eq!(
            f.to_string(),
            "EXINJ f. all x y. x != y & f(x) <= k & f(y) <= k -> !E(x,y)"
        );
    }

    #[test]
    fn round_trips() {
        round_trip("EXINJ f. all x y. (x != y & f(x) <= k & f(y) <= k -> !E(x,y))");
        round_trip("EX2 R/2. ALL2 S/1 . all x. R(x,x) | S(x) -> S(0)");
        round_trip("(ex x. E(x,x)) & E(0,0)");
        round_trip("E(0,0) & (ex x. E(x,x)) | true");
        round_trip("!(ex x. E(x,x)) -> !!E(0,0)");
        round_trip("!(x != y)");
        round_trip("!!(x = y)");
        round_trip("(a = 0 -> b = 0) -> c = 0");
        round_trip("a = 0 & (b = 0 | c = 0)");
        round_trip("a = 0 | (b = 0 | c = 0)");
        round_trip("a = 0 & (b = 0 & c = 0)");
        round_trip("!(a = 0 & b = 0)");
        round_trip("all x. ex y. all z. BIT(x,y) & suc(y,z)");
        round_trip("EX2 f/2 inj. ex x. f(x,max)");
        round_trip("EXFUN g. g(g(0)) = max");
    }

    #[test]
    fn non_atomic_operands_are_parenthesized() {
        let v = Vocabulary::graph();
        let f = parse_formula("(ex x. E(x,x)) | E(0,0)", &v).unwrap();
        assert_eq!(f.to_string(), "(ex x. E(x,x)) | E(0,0)");
        let f = parse_formula("!(E(0,0) | E(max,max))", &v).unwrap();
        assert_eq!(f.to_string(), "!(E(0,0) | E(max,max))");
        assert_eq!(
            parse_formula("!!E(0,0)", &v).unwrap().to_string(),
            "!!E(0,0)"
        );
    }
}

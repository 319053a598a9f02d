//! Readers for programs, types, demand literals and input bindings.
//!
//! Programs are s-expressions:
//!
//! ```text
//! (params (xs (list nat)) (ys (T (list nat))))
//! (body (foldr (fun x y (tick (cons x y))) (force ys) xs))
//! ```
//!
//! Demand literals use `_` for an unevaluated thunk, `(thunk d)`, `nil`,
//! `(cons d d)`, `(pair d d)`, `true`, `false` and natural numbers. Total
//! values are written in the same grammar without `_`; `thunk` wrappers are
//! accepted and ignored, and `[1, 2, 3]` abbreviates a list.

use lazycost_core::calculus::{Program, Term, Ty};
use lazycost_core::lattice::{ApproxValue, TotalValue, ValueEnv};

use crate::sexpr::{read_all, read_one, Sexp};
use crate::ParseError;

const KEYWORDS: [&str; 15] = [
    "let", "tick", "lazy", "force", "cons", "nil", "foldr", "fun", "pair", "fst", "snd", "true", "false",
    "if", "T",
];

fn err<X>(message: impl Into<String>) -> Result<X, ParseError> {
    Err(ParseError::new(message))
}

fn arity<'s>(items: &'s [Sexp], n: usize, what: &str) -> Result<&'s [Sexp], ParseError> {
    if items.len() == n {
        Ok(items)
    } else {
        err(format!("`{what}` takes {n} argument(s), found {}", items.len()))
    }
}

fn name(s: &Sexp) -> Result<String, ParseError> {
    match s.atom() {
        Some(a) if is_identifier(a) => Ok(a.to_string()),
        _ => err(format!("expected a variable name, found `{s}`")),
    }
}

fn is_identifier(a: &str) -> bool {
    let mut chars = a.chars();
    chars
        .next()
        .is_some_and(|c| c.is_alphabetic() || c == '_' && a.len() > 1)
        && chars.all(|c| c.is_alphanumeric() || "_'-".contains(c))
        && !KEYWORDS.contains(&a)
}

pub fn ty(s: &Sexp) -> Result<Ty, ParseError> {
    match s {
        Sexp::Atom(a) => match a.as_str() {
            "bool" => Ok(Ty::Bool),
            "nat" => Ok(Ty::Nat),
            _ => err(format!("unknown type `{a}`")),
        },
        Sexp::List(items) => match items.as_slice() {
            [Sexp::Atom(h), rest @ ..] => match h.as_str() {
                "list" => Ok(Ty::list(ty(&arity(rest, 1, h)?[0])?)),
                "T" => Ok(Ty::thunked(ty(&arity(rest, 1, h)?[0])?)),
                "prod" => {
                    let r = arity(rest, 2, h)?;
                    Ok(Ty::prod(ty(&r[0])?, ty(&r[1])?))
                }
                _ => err(format!("unknown type constructor `{h}`")),
            },
            _ => err(format!("malformed type `{s}`")),
        },
    }
}

pub fn term(s: &Sexp) -> Result<Term, ParseError> {
    let items = match s {
        Sexp::Atom(a) => {
            return match a.as_str() {
                "nil" => Ok(Term::Nil),
                "true" => Ok(Term::True),
                "false" => Ok(Term::False),
                _ if is_identifier(a) => Ok(Term::var(a)),
                _ => err(format!("unexpected atom `{a}`")),
            }
        }
        Sexp::List(items) => items,
    };
    let [Sexp::Atom(h), rest @ ..] = items.as_slice() else {
        return err(format!("malformed term `{s}`"));
    };
    let one = |rest| -> Result<Term, ParseError> { term(&arity(rest, 1, h)?[0]) };
    Ok(match h.as_str() {
        "let" => {
            let r = arity(rest, 2, h)?;
            let binding = r[0]
                .list()
                .filter(|b| b.len() == 2)
                .ok_or_else(|| ParseError::new(format!("malformed binding `{}`", r[0])))?;
            Term::let_(&name(&binding[0])?, term(&binding[1])?, term(&r[1])?)
        }
        "tick" => Term::tick(one(rest)?),
        "lazy" => Term::lazy(one(rest)?),
        "force" => Term::force(one(rest)?),
        "fst" => Term::fst(one(rest)?),
        "snd" => Term::snd(one(rest)?),
        "cons" => {
            let r = arity(rest, 2, h)?;
            Term::cons(term(&r[0])?, term(&r[1])?)
        }
        "pair" => {
            let r = arity(rest, 2, h)?;
            Term::pair(term(&r[0])?, term(&r[1])?)
        }
        "if" => {
            let r = arity(rest, 3, h)?;
            Term::if_(term(&r[0])?, term(&r[1])?, term(&r[2])?)
        }
        "foldr" => {
            let r = arity(rest, 3, h)?;
            let f = r[0]
                .tagged("fun")
                .filter(|f| f.len() == 3)
                .ok_or_else(|| ParseError::new(format!("expected `(fun x y step)`, found `{}`", r[0])))?;
            Term::foldr(
                &name(&f[0])?,
                &name(&f[1])?,
                term(&f[2])?,
                term(&r[1])?,
                term(&r[2])?,
            )
        }
        _ => return err(format!("unknown form `{h}`")),
    })
}

/// Parses and typechecks a program file.
pub fn program(src: &str) -> Result<Program, ParseError> {
    let all = read_all(src)?;
    let [params, body] = all.as_slice() else {
        return err("a program is `(params ...)` followed by `(body ...)`");
    };
    let params = params
        .tagged("params")
        .ok_or_else(|| ParseError::new("expected `(params ...)`"))?
        .iter()
        .map(|p| match p.list() {
            Some([x, t]) => Ok((name(x)?, ty(t)?)),
            _ => err(format!("malformed parameter `{p}`")),
        })
        .collect::<Result<Vec<_>, _>>()?;
    let body = match body.tagged("body") {
        Some([b]) => term(b)?,
        _ => return err("expected `(body term)`"),
    };
    let p = Program { params, body };
    p.typecheck()
        .map_err(|e| ParseError::new(format!("type error: {e}")))?;
    Ok(p)
}

fn nat(a: &str) -> Option<u32> {
    a.parse().ok().filter(|_| a.bytes().all(|b| b.is_ascii_digit()))
}

pub fn demand_sexp(s: &Sexp) -> Result<ApproxValue, ParseError> {
    match s {
        Sexp::Atom(a) => match a.as_str() {
            "_" => Ok(ApproxValue::Bot),
            "nil" => Ok(ApproxValue::NilA),
            "true" => Ok(ApproxValue::BoolA(true)),
            "false" => Ok(ApproxValue::BoolA(false)),
            _ => nat(a)
                .map(ApproxValue::NatA)
                .ok_or_else(|| ParseError::new(format!("unexpected atom `{a}` in demand"))),
        },
        Sexp::List(items) => match items.as_slice() {
            [Sexp::Atom(h), rest @ ..] => match h.as_str() {
                "thunk" => Ok(ApproxValue::thunk(demand_sexp(&arity(rest, 1, h)?[0])?)),
                "cons" => {
                    let r = arity(rest, 2, h)?;
                    Ok(ApproxValue::cons(demand_sexp(&r[0])?, demand_sexp(&r[1])?))
                }
                "pair" => {
                    let r = arity(rest, 2, h)?;
                    Ok(ApproxValue::pair(demand_sexp(&r[0])?, demand_sexp(&r[1])?))
                }
                _ => err(format!("unknown demand form `{h}`")),
            },
            _ => err(format!("malformed demand `{s}`")),
        },
    }
}

/// Parses a demand literal.
pub fn demand(src: &str) -> Result<ApproxValue, ParseError> {
    demand_sexp(&read_one(src)?)
}

/// Forgets the thunk layering of a fully defined approximation.
fn to_total(a: &ApproxValue) -> Result<TotalValue, ParseError> {
    Ok(match a {
        ApproxValue::Bot => return err("`_` is not allowed in a total value"),
        ApproxValue::Thunk(a) => to_total(a)?,
        ApproxValue::BoolA(b) => TotalValue::BoolV(*b),
        ApproxValue::NatA(n) => TotalValue::NatV(*n),
        ApproxValue::NilA => TotalValue::NilV,
        ApproxValue::ConsA(h, t) => TotalValue::cons(to_total(h)?, to_total(t)?),
        ApproxValue::PairA(a, b) => TotalValue::pair(to_total(a)?, to_total(b)?),
    })
}

/// Parses a total value: a demand literal without `_`, or `[v, ...]`.
pub fn total(src: &str) -> Result<TotalValue, ParseError> {
    let src = src.trim();
    if let Some(inner) = src.strip_prefix('[') {
        let inner = inner
            .strip_suffix(']')
            .ok_or_else(|| ParseError::new(format!("unclosed list `{src}`")))?;
        let items = split_top_level(inner)
            .into_iter()
            .filter(|s| !s.trim().is_empty())
            .map(total)
            .collect::<Result<Vec<_>, _>>()?;
        return Ok(TotalValue::list(items));
    }
    to_total(&demand(src)?)
}

/// Splits on commas that are not nested inside brackets or parentheses.
fn split_top_level(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let (mut depth, mut start) = (0i32, 0);
    for (i, c) in s.char_indices() {
        match c {
            '[' | '(' => depth += 1,
            ']' | ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

/// Splits `src` into whitespace-separated values, each an atom or one
/// balanced bracketed group.
pub fn split_values(src: &str) -> Result<Vec<&str>, ParseError> {
    let mut out = Vec::new();
    let mut rest = src.trim_start();
    while !rest.is_empty() {
        let end = value_end(rest)?;
        out.push(&rest[..end]);
        rest = rest[end..].trim_start();
    }
    Ok(out)
}

/// Splits `name=value ...` into names and unparsed values.
pub fn bindings(src: &str) -> Result<Vec<(String, &str)>, ParseError> {
    let mut out: Vec<(String, &str)> = Vec::new();
    let mut rest = src.trim();
    while !rest.is_empty() {
        let eq = rest
            .find('=')
            .ok_or_else(|| ParseError::new(format!("expected `name=value`, found `{rest}`")))?;
        let x = rest[..eq].trim();
        if !is_identifier(x) {
            return err(format!("bad variable name `{x}`"));
        }
        if out.iter().any(|(y, _)| y == x) {
            return err(format!("`{x}` is bound twice"));
        }
        let value = rest[eq + 1..].trim_start();
        let end = value_end(value)?;
        out.push((x.to_string(), &value[..end]));
        rest = value[end..].trim_start();
    }
    Ok(out)
}

/// Parses whitespace-separated bindings of total values such as
/// `xs=[1,2,3] ys=[4]`.
pub fn env(src: &str) -> Result<ValueEnv, ParseError> {
    bindings(src)?
        .into_iter()
        .map(|(x, v)| Ok((x, total(v)?)))
        .collect()
}

/// Length of the value at the start of `s`: one balanced bracketed group or
/// one atom.
fn value_end(s: &str) -> Result<usize, ParseError> {
    let mut depth = 0i32;
    for (i, c) in s.char_indices() {
        match c {
            '[' | '(' => depth += 1,
            ']' | ')' => {
                depth -= 1;
                if depth < 0 {
                    return err(format!("unbalanced value `{s}`"));
                }
                if depth == 0 {
                    return Ok(i + 1);
                }
            }
            c if c.is_whitespace() && depth == 0 => return Ok(i),
            _ => {}
        }
    }
    if depth != 0 {
        return err(format!("unbalanced value `{s}`"));
    }
    Ok(s.len())
}

/// Renders an approximation for people: lists as `a:b:⊥`, unevaluated
/// thunks as `⊥`.
pub fn pretty(a: &ApproxValue) -> String {
    match a {
        ApproxValue::Bot => "⊥".into(),
        ApproxValue::Thunk(a) => pretty(a),
        ApproxValue::BoolA(b) => b.to_string(),
        ApproxValue::NatA(n) => n.to_string(),
        ApproxValue::NilA => "nil".into(),
        ApproxValue::ConsA(h, t) => {
            let head = match h.unthunk() {
                Some(inner @ ApproxValue::ConsA(..)) => format!("({})", pretty(inner)),
                _ => pretty(h),
            };
            format!("{head}:{}", pretty(t))
        }
        ApproxValue::PairA(a, b) => format!("({}, {})", pretty(a), pretty(b)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const APPEND: &str = "(params (xs (list nat)) (ys (T (list nat))))\n\
                          (body (foldr (fun x y (tick (cons x y))) (force ys) xs))";

    #[test]
    fn programs_round_trip_through_display() {
        let p = program(APPEND).unwrap();
        assert_eq!(p.params.len(), 2);
        assert_eq!(program(&p.to_string()).unwrap(), p);
    }

    #[test]
    fn ill_typed_programs_are_rejected() {
        assert!(program("(params) (body (force true))").is_err());
        assert!(program("(params (x bool)) (body y)").is_err());
        assert!(program("(params (if bool)) (body true)").is_err());
    }

    #[test]
    fn demand_literals() {
        let d = demand("(cons (thunk 1) (thunk (cons (thunk 2) _)))").unwrap();
        assert_eq!(pretty(&d), "1:2:⊥");
        assert_eq!(demand(&d.to_string()).unwrap(), d);
        assert_eq!(pretty(&demand("_").unwrap()), "⊥");
        assert!(demand("(cons 1)").is_err());
        assert!(demand("-3").is_err());
    }

    #[test]
    fn bindings() {
        let g = env("xs=[1,2,3] ys=[4]").unwrap();
        assert_eq!(g["xs"], TotalValue::nat_list(&[1, 2, 3]));
        assert_eq!(g["ys"], TotalValue::nat_list(&[4]));
        let g = env("b=true p=(pair (thunk nil) (cons (thunk 0) nil)) zs=[[0], []]").unwrap();
        assert_eq!(g["b"], TotalValue::BoolV(true));
        assert_eq!(
            g["p"],
            TotalValue::pair(TotalValue::NilV, TotalValue::nat_list(&[0]))
        );
        assert_eq!(
            g["zs"],
            TotalValue::list(vec![TotalValue::nat_list(&[0]), TotalValue::NilV])
        );
        assert!(env("xs=[1,_]").is_err());
        assert!(env("xs=[1] xs=[2]").is_err());
        assert!(env("xs").is_err());
        assert_eq!(
            split_values(" 2  [1, 2] (cons 1 nil)").unwrap(),
            ["2", "[1, 2]", "(cons 1 nil)"]
        );
    }
}

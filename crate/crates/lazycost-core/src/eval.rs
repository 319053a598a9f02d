//! Forward (pure) evaluation over total environments.
//!
//! `lazy`, `force` and `tick` are identities on values: the pure semantics
//! forgets both laziness and cost. Environments are persistent maps that
//! are copied on extension; an inner binding shadows an outer one.

use alloc::boxed::Box;
use alloc::string::String;
use core::fmt;

use crate::calculus::Term;
use crate::lattice::{TotalValue, ValueEnv};

/// Raised only for ill-typed or open terms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EvalError {
    UnboundVariable(String),
    /// A destructor met a value of the wrong shape, e.g. `fst` of a list.
    IllTyped(Term),
}

impl fmt::Display for EvalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EvalError::UnboundVariable(x) => write!(f, "unbound variable `{x}`"),
            EvalError::IllTyped(t) => write!(f, "ill-typed term `{t}`"),
        }
    }
}

/// Evaluates `term` under the total environment `env`.
pub fn eval(env: &ValueEnv, term: &Term) -> Result<TotalValue, EvalError> {
    Ok(match term {
        Term::Var(x) => env
            .get(x)
            .cloned()
            .ok_or_else(|| EvalError::UnboundVariable(x.clone()))?,
        Term::Let(x, m, n) => {
            let v = eval(env, m)?;
            let mut inner = env.clone();
            inner.insert(x.clone(), v);
            eval(&inner, n)?
        }
        Term::Tick(m) | Term::Lazy(m) | Term::Force(m) => eval(env, m)?,
        Term::Cons(m, n) => TotalValue::cons(eval(env, m)?, eval(env, n)?),
        Term::Nil => TotalValue::NilV,
        Term::Foldr {
            x,
            y,
            step,
            base,
            list,
        } => {
            let l = eval(env, list)?;
            foldr_eval(env, x, y, step, base, &l)?
        }
        Term::Pair(a, b) => TotalValue::pair(eval(env, a)?, eval(env, b)?),
        Term::Fst(m) | Term::Snd(m) => match eval(env, m)? {
            TotalValue::PairV(a, b) => {
                if matches!(term, Term::Fst(_)) {
                    *a
                } else {
                    *b
                }
            }
            _ => return Err(EvalError::IllTyped(term.clone())),
        },
        Term::True => TotalValue::BoolV(true),
        Term::False => TotalValue::BoolV(false),
        Term::If(c, t, e) => match eval(env, c)? {
            TotalValue::BoolV(true) => eval(env, t)?,
            TotalValue::BoolV(false) => eval(env, e)?,
            _ => return Err(EvalError::IllTyped(term.clone())),
        },
    })
}

/// Right fold of `step` over the total list `v`, binding the head to `x` and
/// the folded tail to `y`.
pub fn foldr_eval(
    env: &ValueEnv,
    x: &str,
    y: &str,
    step: &Term,
    base: &Term,
    v: &TotalValue,
) -> Result<TotalValue, EvalError> {
    match v {
        TotalValue::NilV => eval(env, base),
        TotalValue::ConsV(head, tail) => {
            let rest = foldr_eval(env, x, y, step, base, tail)?;
            let mut inner = env.clone();
            inner.insert(String::from(x), (**head).clone());
            inner.insert(String::from(y), rest);
            eval(&inner, step)
        }
        _ => Err(EvalError::IllTyped(Term::Foldr {
            x: String::from(x),
            y: String::from(y),
            step: Box::new(step.clone()),
            base: Box::new(base.clone()),
            list: Box::new(Term::Nil),
        })),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::TotalValue as V;

    fn append() -> Term {
        Term::foldr(
            "x",
            "y",
            Term::tick(Term::cons(Term::var("x"), Term::var("y"))),
            Term::var("ys"),
            Term::var("xs"),
        )
    }

    #[test]
    fn force_of_lazy_is_identity() {
        let t = Term::force(Term::lazy(Term::True));
        assert_eq!(eval(&ValueEnv::new(), &t), Ok(V::BoolV(true)));
    }

    #[test]
    fn append_example() {
        let mut env = ValueEnv::new();
        env.insert("xs".into(), V::nat_list(&[1, 2, 3]));
        env.insert("ys".into(), V::nat_list(&[4]));
        assert_eq!(eval(&env, &append()), Ok(V::nat_list(&[1, 2, 3, 4])));
    }

    #[test]
    fn foldr_over_nil_is_base() {
        let mut env = ValueEnv::new();
        env.insert("xs".into(), V::NilV);
        env.insert("ys".into(), V::nat_list(&[7]));
        assert_eq!(eval(&env, &append()), Ok(V::nat_list(&[7])));
    }

    #[test]
    fn foldr_single_cell() {
        let env = ValueEnv::new();
        let step = Term::cons(Term::var("x"), Term::var("y"));
        let v = V::nat_list(&[5]);
        let out = foldr_eval(&env, "x", "y", &step, &Term::Nil, &v).unwrap();
        assert_eq!(out, V::cons(V::NatV(5), V::NilV));
    }

    #[test]
    fn inner_binding_shadows() {
        let t = Term::let_("x", Term::True, Term::let_("x", Term::False, Term::var("x")));
        assert_eq!(eval(&ValueEnv::new(), &t), Ok(V::BoolV(false)));
    }
}

//! Syntax and static semantics of the first-order lazy calculus.
//!
//! Thunks are explicit: `lazy M` suspends `M`, `force M` runs a suspension,
//! and every list cell holds a thunked head and a thunked tail. The only
//! recursion is `foldr`, so every well-typed program terminates.
//!
//! `nil` is polymorphic, so the checker solves element types by first-order
//! unification. Types that remain unconstrained at the end (for instance the
//! element type of a bare `nil`) cannot influence any value and default to
//! `bool`.

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

/// Types: `bool | nat | list A | T A | A × B`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Ty {
    Bool,
    /// Opaque natural-number leaves; the calculus has no operations on them.
    Nat,
    List(Box<Ty>),
    Thunked(Box<Ty>),
    Prod(Box<Ty>, Box<Ty>),
}

impl Ty {
    pub fn list(elem: Ty) -> Ty {
        Ty::List(Box::new(elem))
    }

    pub fn thunked(inner: Ty) -> Ty {
        Ty::Thunked(Box::new(inner))
    }

    pub fn prod(left: Ty, right: Ty) -> Ty {
        Ty::Prod(Box::new(left), Box::new(right))
    }
}

impl fmt::Display for Ty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ty::Bool => f.write_str("bool"),
            Ty::Nat => f.write_str("nat"),
            Ty::List(e) => write!(f, "(list {e})"),
            Ty::Thunked(e) => write!(f, "(T {e})"),
            Ty::Prod(a, b) => write!(f, "(prod {a} {b})"),
        }
    }
}

/// Terms of the calculus.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Var(String),
    Let(String, Box<Term>, Box<Term>),
    Tick(Box<Term>),
    Lazy(Box<Term>),
    Force(Box<Term>),
    Cons(Box<Term>, Box<Term>),
    Nil,
    /// `foldr (λ x y. step) base list`.
    Foldr {
        x: String,
        y: String,
        step: Box<Term>,
        base: Box<Term>,
        list: Box<Term>,
    },
    Pair(Box<Term>, Box<Term>),
    Fst(Box<Term>),
    Snd(Box<Term>),
    True,
    False,
    If(Box<Term>, Box<Term>, Box<Term>),
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(name.to_string())
    }

    pub fn let_(name: &str, bound: Term, body: Term) -> Term {
        Term::Let(name.to_string(), Box::new(bound), Box::new(body))
    }

    pub fn tick(t: Term) -> Term {
        Term::Tick(Box::new(t))
    }

    pub fn lazy(t: Term) -> Term {
        Term::Lazy(Box::new(t))
    }

    pub fn force(t: Term) -> Term {
        Term::Force(Box::new(t))
    }

    pub fn cons(h: Term, t: Term) -> Term {
        Term::Cons(Box::new(h), Box::new(t))
    }

    pub fn foldr(x: &str, y: &str, step: Term, base: Term, list: Term) -> Term {
        Term::Foldr {
            x: x.to_string(),
            y: y.to_string(),
            step: Box::new(step),
            base: Box::new(base),
            list: Box::new(list),
        }
    }

    pub fn pair(a: Term, b: Term) -> Term {
        Term::Pair(Box::new(a), Box::new(b))
    }

    pub fn fst(t: Term) -> Term {
        Term::Fst(Box::new(t))
    }

    pub fn snd(t: Term) -> Term {
        Term::Snd(Box::new(t))
    }

    pub fn if_(c: Term, t: Term, e: Term) -> Term {
        Term::If(Box::new(c), Box::new(t), Box::new(e))
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(x) => f.write_str(x),
            Term::Let(x, m, n) => write!(f, "(let ({x} {m}) {n})"),
            Term::Tick(m) => write!(f, "(tick {m})"),
            Term::Lazy(m) => write!(f, "(lazy {m})"),
            Term::Force(m) => write!(f, "(force {m})"),
            Term::Cons(m, n) => write!(f, "(cons {m} {n})"),
            Term::Nil => f.write_str("nil"),
            Term::Foldr {
                x,
                y,
                step,
                base,
                list,
            } => write!(f, "(foldr (fun {x} {y} {step}) {base} {list})"),
            Term::Pair(a, b) => write!(f, "(pair {a} {b})"),
            Term::Fst(m) => write!(f, "(fst {m})"),
            Term::Snd(m) => write!(f, "(snd {m})"),
            Term::True => f.write_str("true"),
            Term::False => f.write_str("false"),
            Term::If(c, t, e) => write!(f, "(if {c} {t} {e})"),
        }
    }
}

/// Typing context.
pub type TyEnv = BTreeMap<String, Ty>;

/// A closed program: declared parameters and a body.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Program {
    /// Parameters in declaration order.
    pub params: Vec<(String, Ty)>,
    pub body: Term,
}

impl Program {
    pub fn ty_env(&self) -> TyEnv {
        self.params.iter().cloned().collect()
    }

    /// Type of the body under the declared parameters.
    pub fn typecheck(&self) -> Result<Ty, TypeError> {
        let mut seen = TyEnv::new();
        for (name, ty) in &self.params {
            if seen.insert(name.clone(), ty.clone()).is_some() {
                return Err(TypeError::DuplicateParam(name.clone()));
            }
        }
        typecheck(&seen, &self.body)
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(params")?;
        for (name, ty) in &self.params {
            write!(f, " ({name} {ty})")?;
        }
        write!(f, ")\n(body {})", self.body)
    }
}

/// Static errors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TypeError {
    UnboundVariable(String),
    DuplicateParam(String),
    /// `foldr` binds its element and accumulator to the same name.
    DuplicateBinder(String),
    Mismatch {
        subterm: Term,
        expected: String,
        found: String,
    },
}

impl fmt::Display for TypeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TypeError::UnboundVariable(x) => write!(f, "unbound variable `{x}`"),
            TypeError::DuplicateParam(x) => write!(f, "parameter `{x}` declared twice"),
            TypeError::DuplicateBinder(x) => {
                write!(f, "foldr binds `{x}` as both element and accumulator")
            }
            TypeError::Mismatch {
                subterm,
                expected,
                found,
            } => write!(
                f,
                "type mismatch in `{subterm}`: expected {expected}, found {found}"
            ),
        }
    }
}

/// Type with unification variables, used only inside the checker.
#[derive(Clone, Debug, PartialEq, Eq)]
enum IT {
    Bool,
    Nat,
    List(Box<IT>),
    Thunked(Box<IT>),
    Prod(Box<IT>, Box<IT>),
    Meta(usize),
}

impl IT {
    fn from_ty(ty: &Ty) -> IT {
        match ty {
            Ty::Bool => IT::Bool,
            Ty::Nat => IT::Nat,
            Ty::List(e) => IT::List(Box::new(IT::from_ty(e))),
            Ty::Thunked(e) => IT::Thunked(Box::new(IT::from_ty(e))),
            Ty::Prod(a, b) => IT::Prod(Box::new(IT::from_ty(a)), Box::new(IT::from_ty(b))),
        }
    }
}

struct Checker {
    subst: Vec<Option<IT>>,
    /// Inferred type of every visited node, keyed by node address.
    nodes: Vec<(usize, IT)>,
}

impl Checker {
    fn fresh(&mut self) -> IT {
        self.subst.push(None);
        IT::Meta(self.subst.len() - 1)
    }

    /// Resolves the outermost metavariables of `t`.
    fn shallow(&self, t: &IT) -> IT {
        let mut cur = t.clone();
        while let IT::Meta(m) = cur {
            match &self.subst[m] {
                Some(next) => cur = next.clone(),
                None => return IT::Meta(m),
            }
        }
        cur
    }

    fn occurs(&self, m: usize, t: &IT) -> bool {
        match self.shallow(t) {
            IT::Meta(n) => n == m,
            IT::List(e) | IT::Thunked(e) => self.occurs(m, &e),
            IT::Prod(a, b) => self.occurs(m, &a) || self.occurs(m, &b),
            IT::Bool | IT::Nat => false,
        }
    }

    fn unify(&mut self, a: &IT, b: &IT) -> bool {
        match (self.shallow(a), self.shallow(b)) {
            (IT::Meta(m), IT::Meta(n)) if m == n => true,
            (IT::Meta(m), t) | (t, IT::Meta(m)) => {
                if self.occurs(m, &t) {
                    return false;
                }
                self.subst[m] = Some(t);
                true
            }
            (IT::Bool, IT::Bool) | (IT::Nat, IT::Nat) => true,
            (IT::List(x), IT::List(y)) | (IT::Thunked(x), IT::Thunked(y)) => self.unify(&x, &y),
            (IT::Prod(a1, b1), IT::Prod(a2, b2)) => self.unify(&a1, &a2) && self.unify(&b1, &b2),
            _ => false,
        }
    }

    fn render(&self, t: &IT) -> String {
        match self.shallow(t) {
            IT::Bool => "bool".to_string(),
            IT::Nat => "nat".to_string(),
            IT::List(e) => format!("(list {})", self.render(&e)),
            IT::Thunked(e) => format!("(T {})", self.render(&e)),
            IT::Prod(a, b) => format!("(prod {} {})", self.render(&a), self.render(&b)),
            IT::Meta(m) => format!("?{m}"),
        }
    }

    /// Zonks `t`, defaulting unconstrained metavariables to `bool`.
    fn resolve(&self, t: &IT) -> Ty {
        match self.shallow(t) {
            IT::Bool | IT::Meta(_) => Ty::Bool,
            IT::Nat => Ty::Nat,
            IT::List(e) => Ty::list(self.resolve(&e)),
            IT::Thunked(e) => Ty::thunked(self.resolve(&e)),
            IT::Prod(a, b) => Ty::prod(self.resolve(&a), self.resolve(&b)),
        }
    }

    fn expect(&mut self, subterm: &Term, expected: &IT, found: &IT) -> Result<(), TypeError> {
        if self.unify(expected, found) {
            Ok(())
        } else {
            Err(TypeError::Mismatch {
                subterm: subterm.clone(),
                expected: self.render(expected),
                found: self.render(found),
            })
        }
    }

    fn infer(&mut self, env: &BTreeMap<String, IT>, term: &Term) -> Result<IT, TypeError> {
        let t = self.infer_node(env, term)?;
        self.nodes.push((term as *const Term as usize, t.clone()));
        Ok(t)
    }

    fn infer_node(&mut self, env: &BTreeMap<String, IT>, term: &Term) -> Result<IT, TypeError> {
        Ok(match term {
            Term::Var(x) => env
                .get(x)
                .cloned()
                .ok_or_else(|| TypeError::UnboundVariable(x.clone()))?,
            Term::Let(x, m, n) => {
                let a = self.infer(env, m)?;
                let mut inner = env.clone();
                inner.insert(x.clone(), a);
                self.infer(&inner, n)?
            }
            Term::Tick(m) => self.infer(env, m)?,
            Term::Lazy(m) => IT::Thunked(Box::new(self.infer(env, m)?)),
            Term::Force(m) => {
                let t = self.infer(env, m)?;
                let a = self.fresh();
                self.expect(m, &IT::Thunked(Box::new(a.clone())), &t)?;
                a
            }
            Term::Cons(m, n) => {
                let a = self.fresh();
                let tm = self.infer(env, m)?;
                self.expect(m, &IT::Thunked(Box::new(a.clone())), &tm)?;
                let list = IT::List(Box::new(a));
                let tn = self.infer(env, n)?;
                self.expect(n, &IT::Thunked(Box::new(list.clone())), &tn)?;
                list
            }
            Term::Nil => IT::List(Box::new(self.fresh())),
            Term::Foldr {
                x,
                y,
                step,
                base,
                list,
            } => {
                if x == y {
                    return Err(TypeError::DuplicateBinder(x.clone()));
                }
                let a = self.fresh();
                let tl = self.infer(env, list)?;
                self.expect(list, &IT::List(Box::new(a.clone())), &tl)?;
                let b = self.infer(env, base)?;
                let mut inner = env.clone();
                inner.insert(x.clone(), IT::Thunked(Box::new(a)));
                inner.insert(y.clone(), IT::Thunked(Box::new(b.clone())));
                let ts = self.infer(&inner, step)?;
                self.expect(step, &b, &ts)?;
                b
            }
            Term::Pair(a, b) => IT::Prod(Box::new(self.infer(env, a)?), Box::new(self.infer(env, b)?)),
            Term::Fst(m) | Term::Snd(m) => {
                let t = self.infer(env, m)?;
                let (l, r) = (self.fresh(), self.fresh());
                self.expect(m, &IT::Prod(Box::new(l.clone()), Box::new(r.clone())), &t)?;
                if matches!(term, Term::Fst(_)) {
                    l
                } else {
                    r
                }
            }
            Term::True | Term::False => IT::Bool,
            Term::If(c, t, e) => {
                let tc = self.infer(env, c)?;
                self.expect(c, &IT::Bool, &tc)?;
                let tt = self.infer(env, t)?;
                let te = self.infer(env, e)?;
                self.expect(e, &tt, &te)?;
                tt
            }
        })
    }
}

/// Computes the type of `term` under `env`.
pub fn typecheck(env: &TyEnv, term: &Term) -> Result<Ty, TypeError> {
    annotate(env, term).map(|(ty, _)| ty)
}

/// Resolved types of every subterm of one borrowed term.
///
/// Entries are keyed by node address, so an `Annotations` value is only
/// meaningful for the exact term it was computed from.
#[derive(Clone, Debug, Default)]
pub struct Annotations {
    types: BTreeMap<usize, Ty>,
}

impl Annotations {
    /// The type of `node`, which must be a subterm of the annotated term.
    pub fn type_of(&self, node: &Term) -> Option<&Ty> {
        self.types.get(&(node as *const Term as usize))
    }
}

/// Typechecks `term` and records the resolved type of each subterm.
///
/// Subterm types are resolved only after the whole term has been checked,
/// so every use site contributes to them.
pub fn annotate(env: &TyEnv, term: &Term) -> Result<(Ty, Annotations), TypeError> {
    let mut checker = Checker {
        subst: Vec::new(),
        nodes: Vec::new(),
    };
    let ienv = env.iter().map(|(k, v)| (k.clone(), IT::from_ty(v))).collect();
    let t = checker.infer(&ienv, term)?;
    let types = checker
        .nodes
        .iter()
        .map(|(addr, it)| (*addr, checker.resolve(it)))
        .collect();
    Ok((checker.resolve(&t), Annotations { types }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn empty() -> TyEnv {
        TyEnv::new()
    }

    #[test]
    fn lazy_true_is_thunked_bool() {
        assert_eq!(
            typecheck(&empty(), &Term::lazy(Term::True)),
            Ok(Ty::thunked(Ty::Bool))
        );
    }

    #[test]
    fn cons_requires_thunked_fields() {
        let t = Term::cons(Term::lazy(Term::True), Term::lazy(Term::Nil));
        assert_eq!(typecheck(&empty(), &t), Ok(Ty::list(Ty::Bool)));
        let bad = Term::cons(Term::True, Term::lazy(Term::Nil));
        assert!(matches!(
            typecheck(&empty(), &bad),
            Err(TypeError::Mismatch { .. })
        ));
    }

    #[test]
    fn force_of_non_thunk_is_rejected() {
        let err = typecheck(&empty(), &Term::force(Term::True)).unwrap_err();
        match err {
            TypeError::Mismatch { subterm, found, .. } => {
                assert_eq!(subterm, Term::True);
                assert_eq!(found, "bool");
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn foldr_identity_over_thunked_elements() {
        let mut env = empty();
        let elem = Ty::thunked(Ty::Bool);
        env.insert("xs".into(), Ty::list(elem.clone()));
        let t = Term::foldr(
            "x",
            "y",
            Term::cons(Term::var("x"), Term::var("y")),
            Term::Nil,
            Term::var("xs"),
        );
        assert_eq!(typecheck(&env, &t), Ok(Ty::list(elem)));
    }

    #[test]
    fn unbound_variable() {
        assert_eq!(
            typecheck(&empty(), &Term::var("z")),
            Err(TypeError::UnboundVariable("z".into()))
        );
    }

    #[test]
    fn if_needs_bool_and_equal_branches() {
        let ok = Term::if_(Term::True, Term::False, Term::True);
        assert_eq!(typecheck(&empty(), &ok), Ok(Ty::Bool));
        let bad = Term::if_(Term::True, Term::False, Term::Nil);
        assert!(typecheck(&empty(), &bad).is_err());
        let bad_scrutinee = Term::if_(Term::Nil, Term::True, Term::True);
        assert!(typecheck(&empty(), &bad_scrutinee).is_err());
    }

    #[test]
    fn pair_does_not_thunk_fields() {
        let t = Term::fst(Term::pair(Term::True, Term::Nil));
        assert_eq!(typecheck(&empty(), &t), Ok(Ty::Bool));
    }

    #[test]
    fn let_extends_context_and_shadows() {
        let t = Term::let_(
            "x",
            Term::lazy(Term::tick(Term::True)),
            Term::let_("x", Term::force(Term::var("x")), Term::var("x")),
        );
        assert_eq!(typecheck(&empty(), &t), Ok(Ty::Bool));
    }

    #[test]
    fn annotations_see_constraints_from_later_uses() {
        // `z` is only constrained to `list nat` by the fold that consumes it.
        let mut env = empty();
        env.insert("xs".into(), Ty::list(Ty::Nat));
        let bound = Term::Nil;
        let t = Term::let_(
            "z",
            bound,
            Term::foldr(
                "a",
                "b",
                Term::cons(Term::var("a"), Term::var("b")),
                Term::var("z"),
                Term::var("xs"),
            ),
        );
        let (ty, ann) = annotate(&env, &t).unwrap();
        assert_eq!(ty, Ty::list(Ty::Nat));
        let Term::Let(_, m, _) = &t else { unreachable!() };
        assert_eq!(ann.type_of(m), Some(&Ty::list(Ty::Nat)));
    }

    #[test]
    fn unconstrained_nil_defaults_to_bool_elements() {
        assert_eq!(typecheck(&empty(), &Term::Nil), Ok(Ty::list(Ty::Bool)));
    }
}

//! The backward demand semantics.
//!
//! Given a total input environment `g` and a demand `a` on the output of a
//! term, [`demand`] computes the cost of lazily evaluating the term just far
//! enough to satisfy `a`, together with the least input demand that suffices.
//! Evaluation runs backwards: a rule receives the demand on its result and
//! distributes it over its subterms, consulting the forward semantics where
//! it needs the value of an intermediate (the bound term of a `let`, the
//! folded tail of a list).
//!
//! Demand environments are dense: every variable in scope has an entry, and a
//! variable that a rule does not touch carries its least approximation. When
//! a binder shadows an outer variable, the outer variable's entry is reset to
//! its least approximation once the binder's own demand has been split off,
//! because the body could not have referred to it.

use alloc::string::String;
use core::fmt;

use crate::calculus::{annotate, Annotations, Term, Ty, TyEnv, TypeError};
use crate::eval::{eval, foldr_eval, EvalError};
use crate::lattice::{
    is_approx, join_env, least_approx, shaped_by, ApproxValue, DemandEnv, JoinError, Tick, TotalValue,
    ValueEnv,
};

/// Why a demand could not be computed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DemandError {
    Type(TypeError),
    Eval(EvalError),
    /// A variable of the type environment has no value, or vice versa.
    EnvMismatch(String),
    /// The output demand does not approximate the value the term produces.
    NotApprox {
        out: ApproxValue,
        value: TotalValue,
    },
    /// The output demand does not have the thunk layering of the output type.
    IllShaped {
        out: ApproxValue,
        ty: Ty,
    },
    /// A rule received a demand whose constructor does not fit the term.
    /// Unreachable when the boundary precondition holds.
    Mismatch {
        term: Term,
        out: ApproxValue,
    },
    Join(JoinError),
}

impl fmt::Display for DemandError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DemandError::Type(e) => write!(f, "type error: {e}"),
            DemandError::Eval(e) => write!(f, "evaluation error: {e}"),
            DemandError::EnvMismatch(x) => {
                write!(
                    f,
                    "variable `{x}` is not bound in both the value and type environments"
                )
            }
            DemandError::NotApprox { out, value } => {
                write!(f, "demand {out} does not approximate the result {value}")
            }
            DemandError::IllShaped { out, ty } => {
                write!(f, "demand {out} is not shaped like type {ty}")
            }
            DemandError::Mismatch { term, out } => {
                write!(f, "demand {out} does not fit term {term}")
            }
            DemandError::Join(e) => write!(f, "{e}"),
        }
    }
}

impl From<TypeError> for DemandError {
    fn from(e: TypeError) -> Self {
        DemandError::Type(e)
    }
}

impl From<EvalError> for DemandError {
    fn from(e: EvalError) -> Self {
        DemandError::Eval(e)
    }
}

impl From<JoinError> for DemandError {
    fn from(e: JoinError) -> Self {
        DemandError::Join(e)
    }
}

/// Variables in scope with their values and types.
#[derive(Clone, Debug)]
struct Scope {
    values: ValueEnv,
    types: TyEnv,
}

impl Scope {
    fn least(&self) -> DemandEnv {
        self.values
            .iter()
            .map(|(x, v)| (x.clone(), least_approx(v, &self.types[x])))
            .collect()
    }

    fn extend(&self, x: &str, v: TotalValue, ty: Ty) -> Scope {
        let mut s = self.clone();
        s.values.insert(String::from(x), v);
        s.types.insert(String::from(x), ty);
        s
    }

    /// Removes `x` from a demand environment computed in `self` extended with
    /// `x`, restoring the least demand on an outer `x` that it shadowed.
    fn split(&self, d: &mut DemandEnv, x: &str) -> ApproxValue {
        let b = d.remove(x).unwrap_or(ApproxValue::Bot);
        if let Some(v) = self.values.get(x) {
            d.insert(String::from(x), least_approx(v, &self.types[x]));
        }
        b
    }
}

/// Result of [`foldr_dem`]: cost, demand on the environment, and demand on
/// the folded list (`Bot` or a thunk).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FoldrDemand {
    pub cost: u64,
    pub env: DemandEnv,
    pub list: ApproxValue,
}

/// Cost and least input demand of evaluating `term` under `g` so that its
/// result satisfies `out`.
///
/// `tys` gives the types of the variables of `g`; both maps must have the
/// same domain. The demand must approximate the forward result and be shaped
/// by the term's type.
pub fn demand(
    g: &ValueEnv,
    tys: &TyEnv,
    term: &Term,
    out: &ApproxValue,
) -> Result<Tick<DemandEnv>, DemandError> {
    Analyzed::new(tys, term)?.demand(g, out)
}

/// A typechecked term, ready for repeated demand queries.
#[derive(Clone, Debug)]
pub struct Analyzed<'t> {
    term: &'t Term,
    tys: TyEnv,
    ty: Ty,
    ann: Annotations,
}

impl<'t> Analyzed<'t> {
    pub fn new(tys: &TyEnv, term: &'t Term) -> Result<Self, DemandError> {
        let (ty, ann) = annotate(tys, term)?;
        Ok(Analyzed {
            term,
            tys: tys.clone(),
            ty,
            ann,
        })
    }

    pub fn term(&self) -> &'t Term {
        self.term
    }

    /// The output type of the term.
    pub fn ty(&self) -> &Ty {
        &self.ty
    }

    pub fn ty_env(&self) -> &TyEnv {
        &self.tys
    }

    /// See [`demand`].
    pub fn demand(&self, g: &ValueEnv, out: &ApproxValue) -> Result<Tick<DemandEnv>, DemandError> {
        let scope = make_scope(g, &self.tys)?;
        let value = eval(g, self.term)?;
        if !shaped_by(out, &self.ty) {
            return Err(DemandError::IllShaped {
                out: out.clone(),
                ty: self.ty.clone(),
            });
        }
        if !is_approx(out, &value) {
            return Err(DemandError::NotApprox {
                out: out.clone(),
                value,
            });
        }
        Demander { ann: &self.ann }.dem(&scope, self.term, out)
    }
}

/// The fold-specific part of the demand semantics.
///
/// `fold` must be a `foldr` term; `list` is the (total) list being folded
/// and `out` the demand on the thunk of the fold's result: `Bot` when the
/// result is not needed, otherwise `Thunk d`. The list argument of `fold`
/// itself is not consulted.
pub fn foldr_dem(
    g: &ValueEnv,
    tys: &TyEnv,
    fold: &Term,
    list: &TotalValue,
    out: &ApproxValue,
) -> Result<FoldrDemand, DemandError> {
    let Term::Foldr {
        x,
        y,
        step,
        base,
        list: list_term,
    } = fold
    else {
        return Err(DemandError::Mismatch {
            term: fold.clone(),
            out: out.clone(),
        });
    };
    let (_, ann) = annotate(tys, fold)?;
    let scope = make_scope(g, tys)?;
    let fold_ty = ann.type_of(base).cloned().unwrap_or(Ty::Bool);
    let elem_ty = match ann.type_of(list_term) {
        Some(Ty::List(a)) => (**a).clone(),
        _ => Ty::Bool,
    };
    let value = foldr_eval(g, x, y, step, base, list)?;
    if !shaped_by(out, &Ty::thunked(fold_ty.clone())) {
        return Err(DemandError::IllShaped {
            out: out.clone(),
            ty: Ty::thunked(fold_ty),
        });
    }
    if !is_approx(out, &value) {
        return Err(DemandError::NotApprox {
            out: out.clone(),
            value,
        });
    }
    let fold = Fold {
        x,
        y,
        step,
        base,
        elem_ty: Ty::thunked(elem_ty),
        acc_ty: Ty::thunked(fold_ty),
    };
    Demander { ann: &ann }.foldr_dem(&scope, &fold, list, out)
}

fn make_scope(g: &ValueEnv, tys: &TyEnv) -> Result<Scope, DemandError> {
    if let Some(x) = g.keys().find(|x| !tys.contains_key(*x)) {
        return Err(DemandError::EnvMismatch(x.clone()));
    }
    if let Some(x) = tys.keys().find(|x| !g.contains_key(*x)) {
        return Err(DemandError::EnvMismatch(x.clone()));
    }
    Ok(Scope {
        values: g.clone(),
        types: tys.clone(),
    })
}

struct Fold<'t> {
    x: &'t str,
    y: &'t str,
    step: &'t Term,
    base: &'t Term,
    /// Type of the head binder, `T A`.
    elem_ty: Ty,
    /// Type of the accumulator binder, `T B`.
    acc_ty: Ty,
}

struct Demander<'a> {
    ann: &'a Annotations,
}

impl Demander<'_> {
    fn ty(&self, t: &Term) -> Ty {
        self.ann.type_of(t).cloned().expect("every subterm is annotated")
    }

    fn dem(&self, s: &Scope, term: &Term, out: &ApproxValue) -> Result<Tick<DemandEnv>, DemandError> {
        use ApproxValue as A;
        let mismatch = || DemandError::Mismatch {
            term: term.clone(),
            out: out.clone(),
        };
        Ok(match term {
            Term::Var(x) => {
                let mut d = s.least();
                d.insert(x.clone(), out.clone());
                Tick::ret(d)
            }
            Term::Tick(m) => self.dem(s, m, out)?.plus(1),
            Term::Force(m) => self.dem(s, m, &A::thunk(out.clone()))?,
            Term::Lazy(m) => match out {
                A::Bot => Tick::ret(s.least()),
                A::Thunk(a) => self.dem(s, m, a)?,
                _ => return Err(mismatch()),
            },
            Term::Let(x, m, n) => {
                let v = eval(&s.values, m)?;
                let inner = s.extend(x, v, self.ty(m));
                let Tick {
                    cost: cn,
                    value: mut dn,
                } = self.dem(&inner, n, out)?;
                let b = s.split(&mut dn, x);
                let Tick { cost: cm, value: dm } = self.dem(s, m, &b)?;
                Tick::new(add(cn, cm), join_env(&dn, &dm)?)
            }
            Term::Cons(m, n) => match out {
                A::ConsA(a, b) => self.lubplus(self.dem(s, m, a)?, self.dem(s, n, b)?)?,
                _ => return Err(mismatch()),
            },
            Term::Pair(m, n) => match out {
                A::PairA(a, b) => self.lubplus(self.dem(s, m, a)?, self.dem(s, n, b)?)?,
                _ => return Err(mismatch()),
            },
            Term::Fst(m) | Term::Snd(m) => {
                let (Ty::Prod(lt, rt), TotalValue::PairV(l, r)) = (self.ty(m), eval(&s.values, m)?) else {
                    return Err(mismatch());
                };
                let whole = if matches!(term, Term::Fst(_)) {
                    A::pair(out.clone(), least_approx(&r, &rt))
                } else {
                    A::pair(least_approx(&l, &lt), out.clone())
                };
                self.dem(s, m, &whole)?
            }
            Term::If(c, t, e) => {
                let TotalValue::BoolV(b) = eval(&s.values, c)? else {
                    return Err(mismatch());
                };
                let dc = self.dem(s, c, &A::BoolA(b))?;
                let dt = self.dem(s, if b { t } else { e }, out)?;
                self.lubplus(dc, dt)?
            }
            Term::Nil | Term::True | Term::False => Tick::ret(s.least()),
            Term::Foldr {
                x,
                y,
                step,
                base,
                list,
            } => {
                let elem_ty = match self.ty(list) {
                    Ty::List(a) => *a,
                    _ => return Err(mismatch()),
                };
                let fold = Fold {
                    x,
                    y,
                    step,
                    base,
                    elem_ty: Ty::thunked(elem_ty),
                    acc_ty: Ty::thunked(self.ty(base)),
                };
                let l = eval(&s.values, list)?;
                let fd = self.foldr_dem(s, &fold, &l, &A::thunk(out.clone()))?;
                let A::Thunk(n) = fd.list else {
                    return Err(mismatch());
                };
                self.lubplus(Tick::new(fd.cost, fd.env), self.dem(s, list, &n)?)?
            }
        })
    }

    fn lubplus(&self, a: Tick<DemandEnv>, b: Tick<DemandEnv>) -> Result<Tick<DemandEnv>, DemandError> {
        Ok(Tick::new(add(a.cost, b.cost), join_env(&a.value, &b.value)?))
    }

    fn foldr_dem(
        &self,
        s: &Scope,
        f: &Fold<'_>,
        list: &TotalValue,
        out: &ApproxValue,
    ) -> Result<FoldrDemand, DemandError> {
        let d = match out {
            ApproxValue::Bot => {
                return Ok(FoldrDemand {
                    cost: 0,
                    env: s.least(),
                    list: ApproxValue::Bot,
                })
            }
            ApproxValue::Thunk(d) => d,
            _ => {
                return Err(DemandError::Mismatch {
                    term: f.step.clone(),
                    out: out.clone(),
                })
            }
        };
        match list {
            TotalValue::NilV => {
                let t = self.dem(s, f.base, d)?;
                Ok(FoldrDemand {
                    cost: t.cost,
                    env: t.value,
                    list: ApproxValue::thunk(ApproxValue::NilA),
                })
            }
            TotalValue::ConsV(head, tail) => {
                let rest = foldr_eval(&s.values, f.x, f.y, f.step, f.base, tail)?;
                let inner =
                    s.extend(f.x, (**head).clone(), f.elem_ty.clone())
                        .extend(f.y, rest, f.acc_ty.clone());
                let Tick {
                    cost: c1,
                    value: mut g1,
                } = self.dem(&inner, f.step, d)?;
                let (a1, b2) = split_binders(s, &mut g1, f.x, f.y);
                let r = self.foldr_dem(s, f, tail, &b2)?;
                Ok(FoldrDemand {
                    cost: add(c1, r.cost),
                    env: join_env(&g1, &r.env)?,
                    list: ApproxValue::thunk(ApproxValue::cons(a1, r.list)),
                })
            }
            _ => Err(DemandError::Mismatch {
                term: f.step.clone(),
                out: out.clone(),
            }),
        }
    }
}

/// Splits the demands on the fold binders `x` and `y` off `d`, restoring the
/// least demand on any outer variables they shadowed.
fn split_binders(s: &Scope, d: &mut DemandEnv, x: &str, y: &str) -> (ApproxValue, ApproxValue) {
    let a = d.remove(x).unwrap_or(ApproxValue::Bot);
    let b = d.remove(y).unwrap_or(ApproxValue::Bot);
    for z in [x, y] {
        if let Some(v) = s.values.get(z) {
            d.insert(String::from(z), least_approx(v, &s.types[z]));
        }
    }
    (a, b)
}

fn add(a: u64, b: u64) -> u64 {
    a.checked_add(b).expect("cost overflow")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{exact, ApproxValue as A, TotalValue as V};

    fn append() -> Term {
        Term::foldr(
            "x",
            "y",
            Term::tick(Term::cons(Term::var("x"), Term::var("y"))),
            Term::var("ys"),
            Term::var("xs"),
        )
    }

    fn nat_lists(xs: &[u32], ys: &[u32]) -> (ValueEnv, TyEnv) {
        let mut g = ValueEnv::new();
        g.insert("xs".into(), V::nat_list(xs));
        g.insert("ys".into(), V::nat_list(ys));
        let mut t = TyEnv::new();
        t.insert("xs".into(), Ty::list(Ty::Nat));
        t.insert("ys".into(), Ty::list(Ty::Nat));
        (g, t)
    }

    #[test]
    fn var_rule() {
        let (g, t) = nat_lists(&[1], &[]);
        let out = A::cons(A::thunk(A::NatA(1)), A::Bot);
        let d = demand(&g, &t, &Term::var("xs"), &out).unwrap();
        assert_eq!(d.cost, 0);
        assert_eq!(d.value["xs"], out);
        assert_eq!(d.value["ys"], A::NilA);
    }

    #[test]
    fn lazy_of_bot_is_free() {
        let (g, t) = nat_lists(&[1, 2], &[3]);
        let term = Term::lazy(Term::tick(Term::var("xs")));
        let d = demand(&g, &t, &term, &A::Bot).unwrap();
        assert_eq!(d.cost, 0);
        assert_eq!(d.value["xs"], A::cons(A::Bot, A::Bot));
        assert_eq!(d.value["ys"], A::cons(A::Bot, A::Bot));
    }

    #[test]
    fn append_prefix_demand() {
        let (g, t) = nat_lists(&[1, 2, 3], &[4]);
        let out = A::cons(
            A::thunk(A::NatA(1)),
            A::thunk(A::cons(A::thunk(A::NatA(2)), A::Bot)),
        );
        let d = demand(&g, &t, &append(), &out).unwrap();
        assert_eq!(d.cost, 2);
        assert_eq!(
            d.value["xs"],
            A::cons(
                A::thunk(A::NatA(1)),
                A::thunk(A::cons(A::thunk(A::NatA(2)), A::Bot))
            )
        );
        assert_eq!(d.value["ys"], A::cons(A::Bot, A::Bot));
    }

    #[test]
    fn append_full_demand_reaches_ys() {
        let (g, t) = nat_lists(&[1, 2], &[4]);
        let full = exact(&V::nat_list(&[1, 2, 4]), &Ty::list(Ty::Nat));
        let d = demand(&g, &t, &append(), &full).unwrap();
        assert_eq!(d.cost, 2);
        assert_eq!(d.value["xs"], exact(&V::nat_list(&[1, 2]), &Ty::list(Ty::Nat)));
        assert_eq!(d.value["ys"], exact(&V::nat_list(&[4]), &Ty::list(Ty::Nat)));
    }

    #[test]
    fn foldr_dem_rows() {
        let (g, t) = nat_lists(&[1, 2], &[]);
        let ident = Term::foldr(
            "x",
            "y",
            Term::cons(Term::var("x"), Term::var("y")),
            Term::Nil,
            Term::var("xs"),
        );
        let l = V::nat_list(&[1, 2]);
        let r = foldr_dem(&g, &t, &ident, &l, &A::Bot).unwrap();
        assert_eq!((r.cost, r.list), (0, A::Bot));
        let out = A::thunk(A::cons(A::thunk(A::NatA(1)), A::Bot));
        let r = foldr_dem(&g, &t, &ident, &l, &out).unwrap();
        assert_eq!(r.list, A::thunk(A::cons(A::thunk(A::NatA(1)), A::Bot)));
        let r = foldr_dem(&g, &t, &ident, &V::NilV, &A::thunk(A::NilA)).unwrap();
        assert_eq!(r.list, A::thunk(A::NilA));
    }

    #[test]
    fn rejects_non_approximating_demand() {
        let (g, t) = nat_lists(&[1], &[]);
        let out = A::cons(A::thunk(A::NatA(9)), A::Bot);
        assert!(matches!(
            demand(&g, &t, &Term::var("xs"), &out),
            Err(DemandError::NotApprox { .. })
        ));
        assert!(matches!(
            demand(&g, &t, &Term::var("xs"), &A::Bot),
            Err(DemandError::IllShaped { .. })
        ));
    }

    #[test]
    fn let_shadowing_restores_outer_least() {
        let mut g = ValueEnv::new();
        g.insert("x".into(), V::BoolV(true));
        let mut t = TyEnv::new();
        t.insert("x".into(), Ty::thunked(Ty::Bool));
        // let x = lazy false in force x: the outer x is never needed.
        let term = Term::let_(
            "x",
            Term::lazy(Term::tick(Term::False)),
            Term::force(Term::var("x")),
        );
        let d = demand(&g, &t, &term, &A::BoolA(false)).unwrap();
        assert_eq!(d.cost, 1);
        assert_eq!(d.value["x"], A::Bot);
    }

    #[test]
    fn fst_and_if() {
        let mut g = ValueEnv::new();
        g.insert("b".into(), V::BoolV(false));
        let mut t = TyEnv::new();
        t.insert("b".into(), Ty::Bool);
        let term = Term::fst(Term::pair(
            Term::if_(
                Term::var("b"),
                Term::lazy(Term::True),
                Term::lazy(Term::tick(Term::False)),
            ),
            Term::lazy(Term::tick(Term::True)),
        ));
        let d = demand(&g, &t, &term, &A::thunk(A::BoolA(false))).unwrap();
        assert_eq!(d.cost, 1);
        assert_eq!(d.value["b"], A::BoolA(false));
        let d = demand(&g, &t, &term, &A::Bot).unwrap();
        assert_eq!(d.cost, 0);
    }
}

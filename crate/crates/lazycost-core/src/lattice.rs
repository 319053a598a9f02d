//! Total values, approximations and the definedness lattice.
//!
//! A *total value* is a fully evaluated value of some type; a thunked
//! position of a total value simply holds the underlying value. An
//! *approximation* may leave thunked positions unevaluated (`Bot`). The same
//! type doubles as a *demand*: an approximation of an output describes how
//! much of that output some consumer needs.
//!
//! Two relations connect the two worlds and must never be conflated:
//!
//! * [`less_defined`] (`a ≤ b`) orders approximations by definedness;
//! * [`is_approx`] (`a ≺ v`) says that approximation `a` agrees with the
//!   total value `v` everywhere it is defined.
//!
//! Approximations carry no type tag. [`shaped_by`] checks that an
//! approximation has the thunk layering a given [`Ty`] prescribes.

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::calculus::{Ty, TyEnv};

/// A fully evaluated value.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TotalValue {
    BoolV(bool),
    /// Natural-number leaf, used by element payloads and the native stdlib.
    NatV(u32),
    NilV,
    ConsV(Box<TotalValue>, Box<TotalValue>),
    PairV(Box<TotalValue>, Box<TotalValue>),
}

impl TotalValue {
    pub fn cons(head: TotalValue, tail: TotalValue) -> Self {
        TotalValue::ConsV(Box::new(head), Box::new(tail))
    }

    pub fn pair(left: TotalValue, right: TotalValue) -> Self {
        TotalValue::PairV(Box::new(left), Box::new(right))
    }

    /// Builds a list from its elements.
    pub fn list<I>(items: I) -> Self
    where
        I: IntoIterator<Item = TotalValue>,
        I::IntoIter: DoubleEndedIterator,
    {
        items
            .into_iter()
            .rev()
            .fold(TotalValue::NilV, |tail, head| TotalValue::cons(head, tail))
    }

    /// Builds a list of naturals.
    pub fn nat_list(items: &[u32]) -> Self {
        TotalValue::list(items.iter().map(|&n| TotalValue::NatV(n)))
    }

    /// The elements of a list value, or `None` if `self` is not a list.
    pub fn list_items(&self) -> Option<Vec<&TotalValue>> {
        let mut out = Vec::new();
        let mut cur = self;
        loop {
            match cur {
                TotalValue::NilV => return Some(out),
                TotalValue::ConsV(h, t) => {
                    out.push(&**h);
                    cur = t;
                }
                _ => return None,
            }
        }
    }
}

/// A partially evaluated value; `Bot` marks an unevaluated thunk.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ApproxValue {
    Bot,
    Thunk(Box<ApproxValue>),
    BoolA(bool),
    NatA(u32),
    NilA,
    /// Both fields sit at thunked positions (`Bot` or `Thunk _`).
    ConsA(Box<ApproxValue>, Box<ApproxValue>),
    PairA(Box<ApproxValue>, Box<ApproxValue>),
}

impl ApproxValue {
    pub fn thunk(inner: ApproxValue) -> Self {
        ApproxValue::Thunk(Box::new(inner))
    }

    pub fn cons(head: ApproxValue, tail: ApproxValue) -> Self {
        ApproxValue::ConsA(Box::new(head), Box::new(tail))
    }

    pub fn pair(left: ApproxValue, right: ApproxValue) -> Self {
        ApproxValue::PairA(Box::new(left), Box::new(right))
    }

    pub fn is_bot(&self) -> bool {
        matches!(self, ApproxValue::Bot)
    }

    /// Removes one `Thunk` layer; `None` on `Bot` or a non-thunk.
    pub fn unthunk(&self) -> Option<&ApproxValue> {
        match self {
            ApproxValue::Thunk(a) => Some(a),
            _ => None,
        }
    }
}

/// Raised when two approximations cannot be joined because they disagree on
/// a constructor or a leaf value, i.e. they approximate different totals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JoinError {
    pub left: ApproxValue,
    pub right: ApproxValue,
}

impl fmt::Display for JoinError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "cannot join mismatched approximations {} and {}",
            self.left, self.right
        )
    }
}

/// Definedness order `a ≤ b`.
pub fn less_defined(a: &ApproxValue, b: &ApproxValue) -> bool {
    use ApproxValue::*;
    match (a, b) {
        (Bot, _) => true,
        (Thunk(x), Thunk(y)) => less_defined(x, y),
        (BoolA(x), BoolA(y)) => x == y,
        (NatA(x), NatA(y)) => x == y,
        (NilA, NilA) => true,
        (ConsA(h1, t1), ConsA(h2, t2)) | (PairA(h1, t1), PairA(h2, t2)) => {
            less_defined(h1, h2) && less_defined(t1, t2)
        }
        _ => false,
    }
}

/// Approximation relation `a ≺ v`.
pub fn is_approx(a: &ApproxValue, v: &TotalValue) -> bool {
    use ApproxValue as A;
    use TotalValue as V;
    match (a, v) {
        (A::Bot, _) => true,
        (A::Thunk(x), _) => is_approx(x, v),
        (A::BoolA(x), V::BoolV(y)) => x == y,
        (A::NatA(x), V::NatV(y)) => x == y,
        (A::NilA, V::NilV) => true,
        (A::ConsA(h, t), V::ConsV(hv, tv)) | (A::PairA(h, t), V::PairV(hv, tv)) => {
            is_approx(h, hv) && is_approx(t, tv)
        }
        _ => false,
    }
}

/// Least upper bound of two approximations of a common total value.
pub fn join(a: &ApproxValue, b: &ApproxValue) -> Result<ApproxValue, JoinError> {
    use ApproxValue::*;
    let mismatch = || JoinError {
        left: a.clone(),
        right: b.clone(),
    };
    Ok(match (a, b) {
        (Bot, x) | (x, Bot) => x.clone(),
        (Thunk(x), Thunk(y)) => ApproxValue::thunk(join(x, y)?),
        (BoolA(x), BoolA(y)) if x == y => BoolA(*x),
        (NatA(x), NatA(y)) if x == y => NatA(*x),
        (NilA, NilA) => NilA,
        (ConsA(h1, t1), ConsA(h2, t2)) => ApproxValue::cons(join(h1, h2)?, join(t1, t2)?),
        (PairA(l1, r1), PairA(l2, r2)) => ApproxValue::pair(join(l1, l2)?, join(r1, r2)?),
        _ => return Err(mismatch()),
    })
}

/// The least approximation `⊥_v` of `v` at type `ty`: `Bot` at thunked
/// types, otherwise the head constructor with least fields.
pub fn least_approx(v: &TotalValue, ty: &Ty) -> ApproxValue {
    match (ty, v) {
        (Ty::Thunked(_), _) => ApproxValue::Bot,
        (Ty::Prod(l, r), TotalValue::PairV(a, b)) => {
            ApproxValue::pair(least_approx(a, l), least_approx(b, r))
        }
        (_, v) => least_head(v),
    }
}

/// Head constructor of `v` with every field `Bot`. List fields are always
/// thunked, so this is the least approximation at any non-thunked,
/// non-product type.
fn least_head(v: &TotalValue) -> ApproxValue {
    match v {
        TotalValue::BoolV(b) => ApproxValue::BoolA(*b),
        TotalValue::NatV(n) => ApproxValue::NatA(*n),
        TotalValue::NilV => ApproxValue::NilA,
        TotalValue::ConsV(..) => ApproxValue::cons(ApproxValue::Bot, ApproxValue::Bot),
        TotalValue::PairV(..) => ApproxValue::pair(ApproxValue::Bot, ApproxValue::Bot),
    }
}

/// The fully defined approximation of `v` at type `ty`.
pub fn exact(v: &TotalValue, ty: &Ty) -> ApproxValue {
    match (ty, v) {
        (Ty::Thunked(inner), _) => ApproxValue::thunk(exact(v, inner)),
        (Ty::List(elem), TotalValue::ConsV(h, t)) => ApproxValue::cons(
            ApproxValue::thunk(exact(h, elem)),
            ApproxValue::thunk(exact(t, ty)),
        ),
        (Ty::Prod(l, r), TotalValue::PairV(a, b)) => ApproxValue::pair(exact(a, l), exact(b, r)),
        (_, v) => least_head(v),
    }
}

/// Does `a` have the thunk layering prescribed by `ty`?
pub fn shaped_by(a: &ApproxValue, ty: &Ty) -> bool {
    use ApproxValue::*;
    match (ty, a) {
        (Ty::Thunked(_), Bot) => true,
        (Ty::Thunked(inner), Thunk(x)) => shaped_by(x, inner),
        (Ty::Bool, BoolA(_)) | (Ty::Nat, NatA(_)) | (Ty::List(_), NilA) => true,
        (Ty::List(elem), ConsA(h, t)) => {
            shaped_by(h, &Ty::thunked((**elem).clone())) && shaped_by(t, &Ty::thunked(ty.clone()))
        }
        (Ty::Prod(l, r), PairA(a, b)) => shaped_by(a, l) && shaped_by(b, r),
        _ => false,
    }
}

/// Does the total value `v` inhabit `ty`?
pub fn has_type(v: &TotalValue, ty: &Ty) -> bool {
    match (ty, v) {
        (Ty::Thunked(inner), _) => has_type(v, inner),
        (Ty::Bool, TotalValue::BoolV(_)) | (Ty::Nat, TotalValue::NatV(_)) => true,
        (Ty::List(_), TotalValue::NilV) => true,
        (Ty::List(elem), TotalValue::ConsV(h, t)) => has_type(h, elem) && has_type(t, ty),
        (Ty::Prod(l, r), TotalValue::PairV(a, b)) => has_type(a, l) && has_type(b, r),
        _ => false,
    }
}

/// Every approximation `a` with `a ≺ v` and `shaped_by(a, ty)`.
pub fn approximations(v: &TotalValue, ty: &Ty) -> Vec<ApproxValue> {
    match (ty, v) {
        (Ty::Thunked(inner), _) => {
            let mut out = vec![ApproxValue::Bot];
            out.extend(approximations(v, inner).into_iter().map(ApproxValue::thunk));
            out
        }
        (Ty::List(elem), TotalValue::ConsV(h, t)) => {
            let heads = approximations(h, &Ty::thunked((**elem).clone()));
            let tails = approximations(t, &Ty::thunked(ty.clone()));
            product(&heads, &tails, ApproxValue::cons)
        }
        (Ty::Prod(l, r), TotalValue::PairV(a, b)) => {
            product(&approximations(a, l), &approximations(b, r), ApproxValue::pair)
        }
        (_, v) => vec![least_head(v)],
    }
}

fn product(
    xs: &[ApproxValue],
    ys: &[ApproxValue],
    mk: fn(ApproxValue, ApproxValue) -> ApproxValue,
) -> Vec<ApproxValue> {
    let mut out = Vec::with_capacity(xs.len() * ys.len());
    for x in xs {
        for y in ys {
            out.push(mk(x.clone(), y.clone()));
        }
    }
    out
}

/// Every total value of `ty` whose lists have length at most `max_len`,
/// drawing booleans from `{false, true}` and naturals from `nats`.
pub fn totals(ty: &Ty, max_len: usize, nats: &[u32]) -> Vec<TotalValue> {
    match ty {
        Ty::Bool => vec![TotalValue::BoolV(false), TotalValue::BoolV(true)],
        Ty::Nat => nats.iter().map(|&n| TotalValue::NatV(n)).collect(),
        Ty::Thunked(inner) => totals(inner, max_len, nats),
        Ty::Prod(l, r) => {
            let ls = totals(l, max_len, nats);
            let rs = totals(r, max_len, nats);
            let mut out = Vec::new();
            for a in &ls {
                for b in &rs {
                    out.push(TotalValue::pair(a.clone(), b.clone()));
                }
            }
            out
        }
        Ty::List(elem) => {
            let elems = totals(elem, max_len, nats);
            let mut out = vec![TotalValue::NilV];
            let mut layer = vec![TotalValue::NilV];
            for _ in 0..max_len {
                let mut next = Vec::new();
                for tail in &layer {
                    for e in &elems {
                        next.push(TotalValue::cons(e.clone(), tail.clone()));
                    }
                }
                out.extend(next.iter().cloned());
                layer = next;
            }
            out
        }
    }
}

/// Every approximation shaped by `ty` that approximates some value of
/// `totals(ty, max_len, nats)`, without duplicates, in ascending order.
pub fn all_approximations(ty: &Ty, max_len: usize, nats: &[u32]) -> Vec<ApproxValue> {
    let mut out: Vec<ApproxValue> = totals(ty, max_len, nats)
        .iter()
        .flat_map(|v| approximations(v, ty))
        .collect();
    out.sort();
    out.dedup();
    out
}

/// Demand environment: one approximation per variable in scope.
pub type DemandEnv = BTreeMap<String, ApproxValue>;

/// Total environment: one total value per variable in scope.
pub type ValueEnv = BTreeMap<String, TotalValue>;

/// Every demand environment `d` with `d ≺ g`, each entry shaped by its
/// type in `tys`. Variables missing from `tys` are skipped.
pub fn env_approximations(g: &ValueEnv, tys: &TyEnv) -> Vec<DemandEnv> {
    let mut out = vec![DemandEnv::new()];
    for (x, v) in g {
        let Some(ty) = tys.get(x) else { continue };
        let choices = approximations(v, ty);
        let mut next = Vec::with_capacity(out.len() * choices.len());
        for d in &out {
            for a in &choices {
                let mut d = d.clone();
                d.insert(x.clone(), a.clone());
                next.push(d);
            }
        }
        out = next;
    }
    out
}

/// Every total environment over the variables of `tys`, each drawn from
/// `totals(ty, max_len, nats)`.
pub fn total_envs(tys: &TyEnv, max_len: usize, nats: &[u32]) -> Vec<ValueEnv> {
    let mut out = vec![ValueEnv::new()];
    for (x, ty) in tys {
        let choices = totals(ty, max_len, nats);
        let mut next = Vec::with_capacity(out.len() * choices.len());
        for g in &out {
            for v in &choices {
                let mut g = g.clone();
                g.insert(x.clone(), v.clone());
                next.push(g);
            }
        }
        out = next;
    }
    out
}

/// The pointwise least approximation of an environment.
pub fn least_env(g: &ValueEnv, tys: &TyEnv) -> DemandEnv {
    g.iter()
        .filter_map(|(x, v)| tys.get(x).map(|ty| (x.clone(), least_approx(v, ty))))
        .collect()
}

/// The pointwise exact approximation of an environment.
pub fn exact_env(g: &ValueEnv, tys: &TyEnv) -> DemandEnv {
    g.iter()
        .filter_map(|(x, v)| tys.get(x).map(|ty| (x.clone(), exact(v, ty))))
        .collect()
}

/// Pointwise join of two demand environments over the same domain.
pub fn join_env(a: &DemandEnv, b: &DemandEnv) -> Result<DemandEnv, JoinError> {
    let mut out = a.clone();
    for (k, v) in b {
        let merged = match out.get(k) {
            Some(existing) => join(existing, v)?,
            None => v.clone(),
        };
        out.insert(k.clone(), merged);
    }
    Ok(out)
}

/// Pointwise definedness order; a missing binding counts as `Bot`.
pub fn less_defined_env(a: &DemandEnv, b: &DemandEnv) -> bool {
    a.iter().all(|(k, x)| match b.get(k) {
        Some(y) => less_defined(x, y),
        None => x.is_bot(),
    })
}

/// Pointwise approximation relation between a demand and a total environment.
pub fn is_approx_env(a: &DemandEnv, g: &ValueEnv) -> bool {
    a.iter().all(|(k, x)| g.get(k).is_some_and(|v| is_approx(x, v)))
}

/// Cost-annotated value: the writer monad over natural-number costs.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Tick<X> {
    pub cost: u64,
    pub value: X,
}

impl<X> Tick<X> {
    pub fn new(cost: u64, value: X) -> Self {
        Tick { cost, value }
    }

    pub fn ret(value: X) -> Self {
        Tick { cost: 0, value }
    }

    /// Adds `extra` to the cost.
    pub fn plus(self, extra: u64) -> Self {
        Tick {
            cost: self.cost.checked_add(extra).expect("cost overflow"),
            value: self.value,
        }
    }
}

/// `(c1, d1) ⊕⊔ (c2, d2) = (c1 + c2, d1 ⊔ d2)`.
pub fn lubplus(a: &Tick<DemandEnv>, b: &Tick<DemandEnv>) -> Result<Tick<DemandEnv>, JoinError> {
    Ok(Tick {
        cost: a.cost.checked_add(b.cost).expect("cost overflow"),
        value: join_env(&a.value, &b.value)?,
    })
}

impl fmt::Display for TotalValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TotalValue::BoolV(b) => write!(f, "{b}"),
            TotalValue::NatV(n) => write!(f, "{n}"),
            TotalValue::NilV => f.write_str("nil"),
            TotalValue::ConsV(h, t) => write!(f, "(cons {h} {t})"),
            TotalValue::PairV(a, b) => write!(f, "(pair {a} {b})"),
        }
    }
}

impl fmt::Display for ApproxValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ApproxValue::Bot => f.write_str("_"),
            ApproxValue::Thunk(a) => write!(f, "(thunk {a})"),
            ApproxValue::BoolA(b) => write!(f, "{b}"),
            ApproxValue::NatA(n) => write!(f, "{n}"),
            ApproxValue::NilA => f.write_str("nil"),
            ApproxValue::ConsA(h, t) => write!(f, "(cons {h} {t})"),
            ApproxValue::PairA(a, b) => write!(f, "(pair {a} {b})"),
        }
    }
}

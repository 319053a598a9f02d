//! The implicit queue: a persistent FIFO queue built by implicit recursive
//! slowdown.
//!
//! A queue is either empty or a front of one or two elements, a middle
//! queue of *pairs* of elements, and a rear of zero or one element. Pushing
//! onto a full rear moves a pair into the middle queue; popping a
//! one-element front refills it with a pair from the middle. The middle is
//! suspended, so these recursive calls are paid for lazily.
//!
//! The element type changes at every level (elements, pairs, pairs of
//! pairs, ...). Rather than threading a type descriptor, elements carry
//! their shape: an [`Elem`] is an atom or a pair, and an [`ElemA`]
//! approximation is an atom or a pair of thunks, either of which may stay
//! undefined. Pure values are fully evaluated; demands on them are the
//! approximations of the `*A` types.
//!
//! The potential of a demand counts, at every level, the front weight (two
//! when the front is undemanded) minus the rear weight, so that `push`
//! costs at most [`PUSH_BUDGET`] and `pop` at most [`POP_BUDGET`] amortized.

use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::banker::label;
use crate::lattice::Tick;
use crate::nondet::Branches;
use crate::thunk::{potential_t, T};

/// Amortized cost of `push`.
pub const PUSH_BUDGET: u64 = 2;
/// Amortized cost of `pop`.
pub const POP_BUDGET: u64 = 3;

/// A queue element: a natural number at the top level, nested pairs below.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Elem {
    Atom(u32),
    Pair(Box<Elem>, Box<Elem>),
}

/// One or two elements at the front.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Front<E> {
    One(E),
    Two(E, E),
}

/// Zero or one element at the rear.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Rear<E> {
    Zero,
    One(E),
}

/// A pure implicit queue.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum IQueue {
    Nil,
    Deep(Front<Elem>, Box<IQueue>, Rear<Elem>),
}

/// Approximation of an evaluated element.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ElemA {
    Atom(u32),
    Pair(Box<T<ElemA>>, Box<T<ElemA>>),
}

/// Approximation of a suspended element.
pub type TE = T<ElemA>;

/// Approximation of an evaluated queue: every component of a deep queue is
/// suspended.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum IQueueA {
    Nil,
    Deep(T<Front<TE>>, Box<T<IQueueA>>, T<Rear<TE>>),
}

/// Demand on (or clairvoyant result of) `pop`: absent for the empty queue,
/// else a suspended pair of the element and the remaining queue.
pub type PopOut = Option<T<(TE, T<IQueueA>)>>;

/// A demand function received a demand that cannot describe its output.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Impossible {
    pub function: &'static str,
}

impl fmt::Display for Impossible {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: output demand does not approximate the result",
            self.function
        )
    }
}

type DResult<X> = Result<Tick<X>, Impossible>;

// ---------------------------------------------------------------------------
// Pure queue

impl Elem {
    pub fn pair(a: Elem, b: Elem) -> Self {
        Elem::Pair(Box::new(a), Box::new(b))
    }

    /// The atoms in left-to-right order.
    pub fn atoms(&self, out: &mut Vec<u32>) {
        match self {
            Elem::Atom(n) => out.push(*n),
            Elem::Pair(a, b) => {
                a.atoms(out);
                b.atoms(out);
            }
        }
    }
}

impl IQueue {
    /// The atoms in FIFO order.
    pub fn to_vec(&self) -> Vec<u32> {
        let mut out = Vec::new();
        self.collect(&mut out);
        out
    }

    fn collect(&self, out: &mut Vec<u32>) {
        if let IQueue::Deep(f, m, r) = self {
            match f {
                Front::One(x) => x.atoms(out),
                Front::Two(x, y) => {
                    x.atoms(out);
                    y.atoms(out);
                }
            }
            m.collect(out);
            if let Rear::One(y) = r {
                y.atoms(out);
            }
        }
    }

    /// Number of nested levels.
    pub fn depth(&self) -> usize {
        match self {
            IQueue::Nil => 0,
            IQueue::Deep(_, m, _) => 1 + m.depth(),
        }
    }
}

pub fn push(q: &IQueue, x: Elem) -> IQueue {
    match q {
        IQueue::Nil => IQueue::Deep(Front::One(x), Box::new(IQueue::Nil), Rear::Zero),
        IQueue::Deep(f, m, r) => match r {
            Rear::Zero => IQueue::Deep(f.clone(), m.clone(), Rear::One(x)),
            Rear::One(y) => IQueue::Deep(f.clone(), Box::new(push(m, Elem::pair(y.clone(), x))), Rear::Zero),
        },
    }
}

pub fn pop(q: &IQueue) -> Option<(Elem, IQueue)> {
    let IQueue::Deep(f, m, r) = q else {
        return None;
    };
    Some(match f {
        Front::One(x) => {
            let rest = match pop(m) {
                Some((Elem::Pair(y, z), m2)) => IQueue::Deep(Front::Two(*y, *z), Box::new(m2), r.clone()),
                Some((Elem::Atom(_), _)) => unreachable!("middle queues hold pairs"),
                None => match r {
                    Rear::One(y) => IQueue::Deep(Front::One(y.clone()), Box::new(IQueue::Nil), Rear::Zero),
                    Rear::Zero => IQueue::Nil,
                },
            };
            (x.clone(), rest)
        }
        Front::Two(x, y) => (
            x.clone(),
            IQueue::Deep(Front::One(y.clone()), m.clone(), r.clone()),
        ),
    })
}

pub fn push_atom(q: &IQueue, x: u32) -> IQueue {
    push(q, Elem::Atom(x))
}

/// Every queue reachable from `Nil` by at most `ops` pushes (of atoms from
/// `0..alphabet`) and pops.
pub fn reachable(ops: usize, alphabet: u32) -> BTreeSet<IQueue> {
    let mut seen = BTreeSet::from([IQueue::Nil]);
    let mut layer = vec![IQueue::Nil];
    for _ in 0..ops {
        let mut next = Vec::new();
        for q in &layer {
            let succ = (0..alphabet)
                .map(|x| push_atom(q, x))
                .chain(pop(q).map(|(_, r)| r));
            for r in succ {
                if seen.insert(r.clone()) {
                    next.push(r);
                }
            }
        }
        layer = next;
    }
    seen
}

// ---------------------------------------------------------------------------
// Approximations

pub fn exact_elem(e: &Elem) -> ElemA {
    match e {
        Elem::Atom(n) => ElemA::Atom(*n),
        Elem::Pair(a, b) => ElemA::Pair(
            Box::new(T::Thunk(exact_elem(a))),
            Box::new(T::Thunk(exact_elem(b))),
        ),
    }
}

fn exact_te(e: &Elem) -> TE {
    T::Thunk(exact_elem(e))
}

pub fn exact(q: &IQueue) -> IQueueA {
    match q {
        IQueue::Nil => IQueueA::Nil,
        IQueue::Deep(f, m, r) => IQueueA::Deep(
            T::Thunk(match f {
                Front::One(x) => Front::One(exact_te(x)),
                Front::Two(x, y) => Front::Two(exact_te(x), exact_te(y)),
            }),
            Box::new(T::Thunk(exact(m))),
            T::Thunk(match r {
                Rear::Zero => Rear::Zero,
                Rear::One(y) => Rear::One(exact_te(y)),
            }),
        ),
    }
}

/// The least demand on an evaluated queue.
pub fn least(q: &IQueue) -> IQueueA {
    match q {
        IQueue::Nil => IQueueA::Nil,
        IQueue::Deep(..) => IQueueA::Deep(T::Undefined, Box::new(T::Undefined), T::Undefined),
    }
}

pub fn less_defined_elem(a: &ElemA, b: &ElemA) -> bool {
    match (a, b) {
        (ElemA::Atom(x), ElemA::Atom(y)) => x == y,
        (ElemA::Pair(a1, a2), ElemA::Pair(b1, b2)) => less_defined_te(a1, b1) && less_defined_te(a2, b2),
        _ => false,
    }
}

fn less_defined_te(a: &TE, b: &TE) -> bool {
    a.less_defined_by(b, less_defined_elem)
}

fn less_defined_front(a: &Front<TE>, b: &Front<TE>) -> bool {
    match (a, b) {
        (Front::One(x), Front::One(y)) => less_defined_te(x, y),
        (Front::Two(x1, x2), Front::Two(y1, y2)) => less_defined_te(x1, y1) && less_defined_te(x2, y2),
        _ => false,
    }
}

fn less_defined_rear(a: &Rear<TE>, b: &Rear<TE>) -> bool {
    match (a, b) {
        (Rear::Zero, Rear::Zero) => true,
        (Rear::One(x), Rear::One(y)) => less_defined_te(x, y),
        _ => false,
    }
}

pub fn less_defined_q(a: &IQueueA, b: &IQueueA) -> bool {
    match (a, b) {
        (IQueueA::Nil, IQueueA::Nil) => true,
        (IQueueA::Deep(f1, m1, r1), IQueueA::Deep(f2, m2, r2)) => {
            f1.less_defined_by(f2, less_defined_front)
                && m1.less_defined_by(m2, less_defined_q)
                && r1.less_defined_by(r2, less_defined_rear)
        }
        _ => false,
    }
}

/// Two approximations of different values cannot be joined.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Mismatch;

impl fmt::Display for Mismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("cannot join approximations of different queues")
    }
}

pub fn join_elem(a: &ElemA, b: &ElemA) -> Result<ElemA, Mismatch> {
    match (a, b) {
        (ElemA::Atom(x), ElemA::Atom(y)) if x == y => Ok(ElemA::Atom(*x)),
        (ElemA::Pair(a1, a2), ElemA::Pair(b1, b2)) => Ok(ElemA::Pair(
            Box::new(join_te(a1, b1)?),
            Box::new(join_te(a2, b2)?),
        )),
        _ => Err(Mismatch),
    }
}

fn join_te(a: &TE, b: &TE) -> Result<TE, Mismatch> {
    a.join_by(b, join_elem)
}

fn join_front(a: &Front<TE>, b: &Front<TE>) -> Result<Front<TE>, Mismatch> {
    match (a, b) {
        (Front::One(x), Front::One(y)) => Ok(Front::One(join_te(x, y)?)),
        (Front::Two(x1, x2), Front::Two(y1, y2)) => Ok(Front::Two(join_te(x1, y1)?, join_te(x2, y2)?)),
        _ => Err(Mismatch),
    }
}

fn join_rear(a: &Rear<TE>, b: &Rear<TE>) -> Result<Rear<TE>, Mismatch> {
    match (a, b) {
        (Rear::Zero, Rear::Zero) => Ok(Rear::Zero),
        (Rear::One(x), Rear::One(y)) => Ok(Rear::One(join_te(x, y)?)),
        _ => Err(Mismatch),
    }
}

pub fn join_q(a: &IQueueA, b: &IQueueA) -> Result<IQueueA, Mismatch> {
    match (a, b) {
        (IQueueA::Nil, IQueueA::Nil) => Ok(IQueueA::Nil),
        (IQueueA::Deep(f1, m1, r1), IQueueA::Deep(f2, m2, r2)) => Ok(IQueueA::Deep(
            f1.join_by(f2, join_front)?,
            Box::new(m1.join_by(m2, join_q)?),
            r1.join_by(r2, join_rear)?,
        )),
        _ => Err(Mismatch),
    }
}

/// Does `a` approximate the queue `q`?
pub fn approximates(a: &IQueueA, q: &IQueue) -> bool {
    less_defined_q(a, &exact(q))
}

fn te_approximations(e: &Elem) -> Vec<TE> {
    let mut out = vec![T::Undefined];
    out.extend(elem_approximations(e).into_iter().map(T::Thunk));
    out
}

/// Every approximation of an evaluated element.
pub fn elem_approximations(e: &Elem) -> Vec<ElemA> {
    match e {
        Elem::Atom(n) => vec![ElemA::Atom(*n)],
        Elem::Pair(a, b) => {
            let bs = te_approximations(b);
            let mut out = Vec::new();
            for x in te_approximations(a) {
                for y in &bs {
                    out.push(ElemA::Pair(Box::new(x.clone()), Box::new(y.clone())));
                }
            }
            out
        }
    }
}

/// Every approximation of an evaluated queue.
pub fn approximations(q: &IQueue) -> Vec<IQueueA> {
    match q {
        IQueue::Nil => vec![IQueueA::Nil],
        IQueue::Deep(f, m, r) => {
            let mut fronts = vec![T::Undefined];
            match f {
                Front::One(x) => {
                    fronts.extend(te_approximations(x).into_iter().map(|a| T::Thunk(Front::One(a))))
                }
                Front::Two(x, y) => {
                    let ys = te_approximations(y);
                    for a in te_approximations(x) {
                        for b in &ys {
                            fronts.push(T::Thunk(Front::Two(a.clone(), b.clone())));
                        }
                    }
                }
            }
            let mut mids = vec![T::Undefined];
            mids.extend(approximations(m).into_iter().map(T::Thunk));
            let mut rears = vec![T::Undefined];
            match r {
                Rear::Zero => rears.push(T::Thunk(Rear::Zero)),
                Rear::One(y) => {
                    rears.extend(te_approximations(y).into_iter().map(|a| T::Thunk(Rear::One(a))))
                }
            }
            let mut out = Vec::new();
            for f in &fronts {
                for m in &mids {
                    for r in &rears {
                        out.push(IQueueA::Deep(f.clone(), Box::new(m.clone()), r.clone()));
                    }
                }
            }
            out
        }
    }
}

/// Every demand on the result of `pop q`.
pub fn pop_demands(q: &IQueue) -> Vec<PopOut> {
    match pop(q) {
        None => vec![None],
        Some((x, rest)) => {
            let mut out = vec![Some(T::Undefined)];
            let mut rests = vec![T::Undefined];
            rests.extend(approximations(&rest).into_iter().map(T::Thunk));
            for xd in te_approximations(&x) {
                for r in &rests {
                    out.push(Some(T::Thunk((xd.clone(), r.clone()))));
                }
            }
            out
        }
    }
}

// ---------------------------------------------------------------------------
// Potential

fn front_weight(f: &T<Front<TE>>) -> u64 {
    match f {
        T::Undefined => 2,
        T::Thunk(Front::One(_)) => 1,
        T::Thunk(Front::Two(..)) => 2,
    }
}

fn rear_weight(r: &T<Rear<TE>>) -> u64 {
    match r {
        T::Thunk(Rear::One(_)) => 1,
        _ => 0,
    }
}

/// Potential of a queue demand: at every demanded level, the front weight
/// minus the rear weight, truncated at zero. An undemanded front weighs two,
/// an undemanded rear nothing.
pub fn potential(q: &IQueueA) -> u64 {
    match q {
        IQueueA::Nil => 0,
        IQueueA::Deep(f, m, r) => front_weight(f).saturating_sub(rear_weight(r)) + potential_t(m, potential),
    }
}

// ---------------------------------------------------------------------------
// Demand functions

/// Demand function of `push q x`: the demands on `q` and on `x`.
pub fn push_d(q: &IQueue, x: &Elem, out: &IQueueA) -> DResult<(T<IQueueA>, TE)> {
    let IQueueA::Deep(fd, md, _) = out else {
        return Err(Impossible { function: "push" });
    };
    let r = match q {
        IQueue::Nil => Tick::ret(T::Thunk(IQueueA::Nil)),
        IQueue::Deep(_, m, r) => match r {
            Rear::Zero => Tick::ret(T::Thunk(IQueueA::Deep(
                fd.clone(),
                md.clone(),
                T::Thunk(Rear::Zero),
            ))),
            Rear::One(y) => {
                let u = match &**md {
                    T::Undefined => Tick::ret((T::Undefined, T::Undefined)),
                    T::Thunk(ma) => push_d(m, &Elem::pair(y.clone(), x.clone()), ma)?,
                };
                let (m_in, pd) = u.value;
                let yd = match pd {
                    T::Thunk(ElemA::Pair(yd, _)) => *yd,
                    _ => T::Undefined,
                };
                Tick::new(
                    u.cost,
                    T::Thunk(IQueueA::Deep(fd.clone(), Box::new(m_in), T::Thunk(Rear::One(yd)))),
                )
            }
        },
    };
    Ok(Tick::new(r.cost + 1, (r.value, exact_te(x))))
}

/// Demand function of `pop q`: the demand on `q`.
pub fn pop_d(q: &IQueue, out: &PopOut) -> DResult<T<IQueueA>> {
    let IQueue::Deep(f, m, r) = q else {
        return Ok(Tick::new(1, T::Thunk(IQueueA::Nil)));
    };
    let (xd, qd) = match out {
        Some(T::Thunk((xd, qd))) => (xd.clone(), qd.clone()),
        _ => (T::Undefined, T::Undefined),
    };
    let parts = match f {
        Front::One(_) => {
            let (pd, rd): (T<PopOut>, T<Rear<TE>>) = match pop(m) {
                Some(_) => match &qd {
                    T::Thunk(IQueueA::Deep(fd, md2, rd)) => {
                        let yzd = match fd {
                            T::Thunk(Front::Two(yd, zd)) => {
                                ElemA::Pair(Box::new(yd.clone()), Box::new(zd.clone()))
                            }
                            _ => ElemA::Pair(Box::new(T::Undefined), Box::new(T::Undefined)),
                        };
                        (
                            T::Thunk(Some(T::Thunk((T::Thunk(yzd), (**md2).clone())))),
                            rd.clone(),
                        )
                    }
                    _ => (T::Undefined, T::Undefined),
                },
                None => {
                    let rd = match r {
                        Rear::Zero => T::Thunk(Rear::Zero),
                        Rear::One(_) => {
                            let yd = match &qd {
                                T::Thunk(IQueueA::Deep(T::Thunk(Front::One(yd)), _, _)) => yd.clone(),
                                _ => T::Undefined,
                            };
                            T::Thunk(Rear::One(yd))
                        }
                    };
                    (T::Thunk(None), rd)
                }
            };
            let md = match &pd {
                T::Undefined => Tick::ret(T::Undefined),
                T::Thunk(p) => pop_d(m, p)?,
            };
            Tick::new(md.cost, (T::Thunk(Front::One(xd)), md.value, rd))
        }
        Front::Two(..) => {
            let (yd, md, rd) = match &qd {
                T::Thunk(IQueueA::Deep(fd, md, rd)) => {
                    let yd = match fd {
                        T::Thunk(Front::One(yd)) => yd.clone(),
                        _ => T::Undefined,
                    };
                    (yd, (**md).clone(), rd.clone())
                }
                _ => (T::Undefined, T::Undefined, T::Undefined),
            };
            Tick::ret((T::Thunk(Front::Two(xd, yd)), md, rd))
        }
    };
    let (fd, md, rd) = parts.value;
    Ok(Tick::new(
        parts.cost + 1,
        T::Thunk(IQueueA::Deep(fd, Box::new(md), rd)),
    ))
}

// ---------------------------------------------------------------------------
// Clairvoyant translations

fn lazy<X: Ord + Clone>(go: impl FnOnce() -> Branches<X>) -> Branches<T<X>> {
    Branches::ret(T::Undefined).union(go().map(T::Thunk))
}

/// Clairvoyant `push`: the queue and, when deep, its rear are forced.
pub fn push_a(q: &T<IQueueA>, x: &TE) -> Branches<IQueueA> {
    let out = match q {
        T::Undefined => Branches::none(),
        T::Thunk(IQueueA::Nil) => Branches::ret(IQueueA::Deep(
            T::Thunk(Front::One(x.clone())),
            Box::new(T::Thunk(IQueueA::Nil)),
            T::Thunk(Rear::Zero),
        )),
        T::Thunk(IQueueA::Deep(f, m, r)) => match r {
            T::Undefined => Branches::none(),
            T::Thunk(Rear::Zero) => Branches::ret(IQueueA::Deep(
                f.clone(),
                m.clone(),
                T::Thunk(Rear::One(x.clone())),
            )),
            T::Thunk(Rear::One(y)) => {
                let pair = T::Thunk(ElemA::Pair(Box::new(y.clone()), Box::new(x.clone())));
                lazy(|| push_a(m, &pair))
                    .map(|m2| IQueueA::Deep(f.clone(), Box::new(m2), T::Thunk(Rear::Zero)))
            }
        },
    };
    out.tick()
}

/// Clairvoyant `pop`: the queue is forced; the result pair and the
/// remaining queue inside it are suspended.
pub fn pop_a(q: &T<IQueueA>) -> Branches<PopOut> {
    let out = match q {
        T::Undefined => Branches::none(),
        T::Thunk(IQueueA::Nil) => Branches::ret(None),
        T::Thunk(IQueueA::Deep(f, m, r)) => lazy(|| pop_pair_a(f, m, r)).map(Some),
    };
    out.tick()
}

fn pop_pair_a(f: &T<Front<TE>>, m: &T<IQueueA>, r: &T<Rear<TE>>) -> Branches<(TE, T<IQueueA>)> {
    match f {
        T::Undefined => Branches::none(),
        T::Thunk(Front::One(x)) => lazy(|| refill_a(m, r)).map(|q| (x.clone(), q)),
        T::Thunk(Front::Two(x, y)) => Branches::ret((
            x.clone(),
            T::Thunk(IQueueA::Deep(
                T::Thunk(Front::One(y.clone())),
                Box::new(m.clone()),
                r.clone(),
            )),
        )),
    }
}

/// The queue left after popping a one-element front.
fn refill_a(m: &T<IQueueA>, r: &T<Rear<TE>>) -> Branches<IQueueA> {
    pop_a(m).bind(|p| match p {
        Some(T::Thunk((T::Thunk(ElemA::Pair(y, z)), m2))) => Branches::ret(IQueueA::Deep(
            T::Thunk(Front::Two(*y, *z)),
            Box::new(m2),
            r.clone(),
        )),
        Some(_) => Branches::none(),
        None => match r {
            T::Thunk(Rear::One(y)) => Branches::ret(IQueueA::Deep(
                T::Thunk(Front::One(y.clone())),
                Box::new(T::Thunk(IQueueA::Nil)),
                T::Thunk(Rear::Zero),
            )),
            T::Thunk(Rear::Zero) => Branches::ret(IQueueA::Nil),
            T::Undefined => Branches::none(),
        },
    })
}

/// Does a clairvoyant pop result cover the demand `out`?
pub fn pop_result_covers(out: &PopOut, r: &PopOut) -> bool {
    match (out, r) {
        (None, None) => true,
        (Some(a), Some(b)) => a.less_defined_by(b, |(x1, q1), (x2, q2)| {
            less_defined_te(x1, x2) && q1.less_defined_by(q2, less_defined_q)
        }),
        _ => false,
    }
}

// ---------------------------------------------------------------------------
// Printing

struct Labels<'a, X>(&'a X, bool);

fn atom(n: u32, labels: bool) -> String {
    if labels {
        label(n)
    } else {
        alloc::format!("{n}")
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        Labels(self, false).fmt(f)
    }
}

impl fmt::Display for Labels<'_, Elem> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            Elem::Atom(n) => f.write_str(&atom(*n, self.1)),
            Elem::Pair(a, b) => write!(f, "(pair {} {})", Labels(&**a, self.1), Labels(&**b, self.1)),
        }
    }
}

impl fmt::Display for IQueue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IQueue::Nil => f.write_str("nil"),
            IQueue::Deep(fr, m, r) => {
                match fr {
                    Front::One(x) => write!(f, "(deep (one {x}) ")?,
                    Front::Two(x, y) => write!(f, "(deep (two {x} {y}) ")?,
                }
                write!(f, "{m} ")?;
                match r {
                    Rear::Zero => f.write_str("zero)"),
                    Rear::One(y) => write!(f, "(one {y}))"),
                }
            }
        }
    }
}

impl fmt::Display for Labels<'_, TE> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            T::Undefined => f.write_str("_"),
            T::Thunk(ElemA::Atom(n)) => f.write_str(&atom(*n, self.1)),
            T::Thunk(ElemA::Pair(a, b)) => {
                write!(f, "(pair {} {})", Labels(&**a, self.1), Labels(&**b, self.1))
            }
        }
    }
}

impl fmt::Display for Labels<'_, IQueueA> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let l = self.1;
        match self.0 {
            IQueueA::Nil => f.write_str("nil"),
            IQueueA::Deep(fr, m, r) => {
                f.write_str("(deep ")?;
                match fr {
                    T::Undefined => f.write_str("_")?,
                    T::Thunk(Front::One(x)) => write!(f, "(one {})", Labels(x, l))?,
                    T::Thunk(Front::Two(x, y)) => write!(f, "(two {} {})", Labels(x, l), Labels(y, l))?,
                }
                match &**m {
                    T::Undefined => f.write_str(" _ ")?,
                    T::Thunk(m) => write!(f, " {} ", Labels(m, l))?,
                }
                match r {
                    T::Undefined => f.write_str("_)"),
                    T::Thunk(Rear::Zero) => f.write_str("zero)"),
                    T::Thunk(Rear::One(y)) => write!(f, "(one {}))", Labels(y, l)),
                }
            }
        }
    }
}

impl fmt::Display for IQueueA {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        Labels(self, false).fmt(f)
    }
}

/// Renders a queue demand with element labels, `⊥` when unevaluated.
pub fn render(d: &T<IQueueA>) -> String {
    match d {
        T::Undefined => String::from("⊥"),
        T::Thunk(d) => alloc::format!("{}", Labels(d, true)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn queue_of(xs: &[u32]) -> IQueue {
        xs.iter().fold(IQueue::Nil, |q, &x| push_atom(&q, x))
    }

    #[test]
    fn fifo_order() {
        let mut q = queue_of(&[0, 1, 2, 3, 4, 5, 6]);
        assert_eq!(q.to_vec(), vec![0, 1, 2, 3, 4, 5, 6]);
        let mut seen = Vec::new();
        while let Some((Elem::Atom(x), r)) = pop(&q) {
            seen.push(x);
            q = r;
        }
        assert_eq!(seen, vec![0, 1, 2, 3, 4, 5, 6]);
        assert_eq!(q, IQueue::Nil);
    }

    #[test]
    fn single_push_and_pop() {
        let q = push_atom(&IQueue::Nil, 7);
        assert_eq!(
            q,
            IQueue::Deep(Front::One(Elem::Atom(7)), Box::new(IQueue::Nil), Rear::Zero)
        );
        assert_eq!(pop(&q), Some((Elem::Atom(7), IQueue::Nil)));
        assert_eq!(q.to_string(), "(deep (one 7) nil zero)");
    }

    #[test]
    fn push_onto_nil_costs_one() {
        let q = IQueue::Nil;
        let r = push_atom(&q, 0);
        let d = push_d(&q, &Elem::Atom(0), &least(&r)).unwrap();
        assert_eq!(d.cost, 1);
        assert_eq!(d.value.0, T::Thunk(IQueueA::Nil));
    }

    #[test]
    fn potential_examples() {
        assert_eq!(potential(&IQueueA::Nil), 0);
        let d = IQueueA::Deep(T::Undefined, Box::new(T::Undefined), T::Thunk(Rear::Zero));
        assert_eq!(potential(&d), 2);
        let d = IQueueA::Deep(
            T::Thunk(Front::One(T::Undefined)),
            Box::new(T::Undefined),
            T::Thunk(Rear::One(T::Undefined)),
        );
        assert_eq!(potential(&d), 0);
    }

    #[test]
    fn approximations_are_below_exact() {
        let q = queue_of(&[0, 1, 2, 3]);
        let e = exact(&q);
        let all = approximations(&q);
        assert!(all.contains(&e));
        assert!(all.contains(&least(&q)));
        for a in &all {
            assert!(less_defined_q(a, &e));
            assert_eq!(join_q(a, &e), Ok(e.clone()));
        }
    }

    #[test]
    fn rendering() {
        let q = queue_of(&[0, 1]);
        assert_eq!(render(&T::Thunk(exact(&q))), "(deep (one a) nil (one b))");
        assert_eq!(render(&T::Thunk(least(&q))), "(deep _ _ _)");
        assert_eq!(render(&T::Undefined), "⊥");
    }
}

//! The banker's queue: a persistent FIFO queue with amortized constant cost
//! under lazy evaluation.
//!
//! A queue is a front list, a back list and their lengths. `push` conses
//! onto the back; `pop` takes from the front. Whenever the back would grow
//! longer than the front, `mk_queue` rebalances into the lazy list
//! `front ++ rev back` and an empty back. The append is incremental, one
//! cell per force, while the reversal is monolithic.
//!
//! Demands on a queue version are `T BQueueA`: the record itself is either
//! unevaluated or evaluated, and its two lists are approximated as
//! `T (listA nat)` values. Element heads may stay `Bot`.
//!
//! The reversal is length-indexed: `rev` walks exactly `nback` cells and
//! never inspects the final tail. Consequently a demand on a rebalanced
//! front never demands the terminal `nil` of the old back list, and the
//! demand on the back of the empty queue after one push is `Bot` rather
//! than `nil`.
//!
//! The potential of a queue demand is twice the number of demanded front
//! cells in excess of the back length. With it, every operation costs at
//! most [`BUDGET`] amortized.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::lattice::{join, less_defined, ApproxValue, JoinError, Tick};
use crate::nondet::Branches;
use crate::stdlib::{exact_list, size_x, Absurd};
use crate::thunk::T;

type A = ApproxValue;

/// Amortized cost of every queue operation.
pub const BUDGET: u64 = 7;

/// A pure banker's queue. `back` is in list order, most recent push first.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BQueue {
    pub nfront: usize,
    pub front: Vec<u32>,
    pub nback: usize,
    pub back: Vec<u32>,
}

/// Approximation of an evaluated queue record. The lengths are strict; the
/// lists are `T (listA nat)` approximations.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BQueueA {
    pub nfront: usize,
    pub front: ApproxValue,
    pub nback: usize,
    pub back: ApproxValue,
}

/// Demand on the result of `pop`: `None` when the queue was empty, else
/// demands on the popped element and on the remaining queue.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PopDemand {
    None,
    Some(ApproxValue, T<BQueueA>),
}

// ---------------------------------------------------------------------------
// Pure queue

impl BQueue {
    pub fn empty() -> Self {
        BQueue {
            nfront: 0,
            front: Vec::new(),
            nback: 0,
            back: Vec::new(),
        }
    }

    /// The elements in FIFO order.
    pub fn to_vec(&self) -> Vec<u32> {
        let mut out = self.front.clone();
        out.extend(self.back.iter().rev());
        out
    }

    /// Lengths match the lists and the back is no longer than the front.
    pub fn well_formed(&self) -> bool {
        self.nfront == self.front.len() && self.nback == self.back.len() && self.nback <= self.nfront
    }
}

/// Smart constructor: rebalances when the back outgrows the front.
pub fn mk_queue(nfront: usize, front: Vec<u32>, nback: usize, back: Vec<u32>) -> BQueue {
    if nfront < nback {
        let mut front = front;
        front.extend(back.iter().rev());
        BQueue {
            nfront: nfront + nback,
            front,
            nback: 0,
            back: Vec::new(),
        }
    } else {
        BQueue {
            nfront,
            front,
            nback,
            back,
        }
    }
}

pub fn push(q: &BQueue, x: u32) -> BQueue {
    let mut back = vec![x];
    back.extend(&q.back);
    mk_queue(q.nfront, q.front.clone(), q.nback + 1, back)
}

pub fn pop(q: &BQueue) -> Option<(u32, BQueue)> {
    let (&x, rest) = q.front.split_first()?;
    Some((x, mk_queue(q.nfront - 1, rest.to_vec(), q.nback, q.back.clone())))
}

// ---------------------------------------------------------------------------
// Lattice operations on queue demands

/// The least demand on an evaluated queue: the record with both lists
/// unevaluated.
pub fn least(q: &BQueue) -> BQueueA {
    BQueueA {
        nfront: q.nfront,
        front: A::Bot,
        nback: q.nback,
        back: A::Bot,
    }
}

/// The fully defined approximation of `q`.
pub fn exact(q: &BQueue) -> BQueueA {
    BQueueA {
        nfront: q.nfront,
        front: A::thunk(exact_list(&q.front)),
        nback: q.nback,
        back: A::thunk(exact_list(&q.back)),
    }
}

pub fn less_defined_q(a: &BQueueA, b: &BQueueA) -> bool {
    a.nfront == b.nfront
        && a.nback == b.nback
        && less_defined(&a.front, &b.front)
        && less_defined(&a.back, &b.back)
}

pub fn join_q(a: &BQueueA, b: &BQueueA) -> Result<BQueueA, JoinError> {
    if a.nfront != b.nfront || a.nback != b.nback {
        return Err(JoinError {
            left: A::NatA(a.nfront as u32),
            right: A::NatA(b.nfront as u32),
        });
    }
    Ok(BQueueA {
        nfront: a.nfront,
        front: join(&a.front, &b.front)?,
        nback: a.nback,
        back: join(&a.back, &b.back)?,
    })
}

/// Does `a` approximate the queue `q`?
pub fn approximates(a: &BQueueA, q: &BQueue) -> bool {
    less_defined_q(a, &exact(q))
}

/// Every well-formed queue with at most `max` elements drawn from
/// `0..alphabet`.
pub fn queues(max: usize, alphabet: u32) -> Vec<BQueue> {
    let mut out = Vec::new();
    for nf in 0..=max {
        for nb in 0..=nf.min(max - nf) {
            for elems in words(nf + nb, alphabet) {
                out.push(BQueue {
                    nfront: nf,
                    front: elems[..nf].to_vec(),
                    nback: nb,
                    back: elems[nf..].to_vec(),
                });
            }
        }
    }
    out
}

fn words(len: usize, alphabet: u32) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|w| {
                (0..alphabet).map(move |x| {
                    let mut w = w.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    out
}

fn thunked_list_demands(xs: &[u32]) -> Vec<ApproxValue> {
    let mut out = vec![ApproxValue::Bot];
    out.extend(
        crate::stdlib::list_demands(xs)
            .into_iter()
            .map(ApproxValue::thunk),
    );
    out
}

/// Every demand on the evaluated queue `q`.
pub fn demands(q: &BQueue) -> Vec<BQueueA> {
    let backs = thunked_list_demands(&q.back);
    let mut out = Vec::new();
    for f in thunked_list_demands(&q.front) {
        for b in &backs {
            out.push(BQueueA {
                front: f.clone(),
                back: b.clone(),
                ..least(q)
            });
        }
    }
    out
}

/// Every demand on the result of `pop q`.
pub fn pop_demands(q: &BQueue) -> Vec<PopDemand> {
    match pop(q) {
        None => vec![PopDemand::None],
        Some((x, rest)) => {
            let mut out = Vec::new();
            for xd in [ApproxValue::Bot, ApproxValue::thunk(ApproxValue::NatA(x))] {
                out.push(PopDemand::Some(xd.clone(), T::Undefined));
                for d in demands(&rest) {
                    out.push(PopDemand::Some(xd.clone(), T::Thunk(d)));
                }
            }
            out
        }
    }
}

/// Potential of a queue demand: `2 * (|front demand| - nback)`, truncated
/// at zero.
pub fn potential(q: &BQueueA) -> u64 {
    2 * size_x(0, &q.front).saturating_sub(q.nback as u64)
}

// ---------------------------------------------------------------------------
// Demand functions

fn absurd(function: &'static str, out: &ApproxValue) -> Absurd {
    Absurd {
        function,
        out: out.clone(),
    }
}

/// Demand function of `append f ys` against a demand on its result. Returns
/// the demands on `f` and on `ys`.
fn append_d(f: &[u32], out: &ApproxValue) -> Result<Tick<(ApproxValue, ApproxValue)>, Absurd> {
    match f.split_first() {
        None => Ok(Tick::new(1, (A::thunk(A::NilA), A::thunk(out.clone())))),
        Some((_, rest)) => match out {
            A::ConsA(h, t) => match &**t {
                A::Bot => Ok(Tick::new(1, (A::thunk(A::cons((**h).clone(), A::Bot)), A::Bot))),
                A::Thunk(inner) => {
                    let r = append_d(rest, inner)?;
                    let (fd, ysd) = r.value;
                    Ok(Tick::new(r.cost + 1, (A::thunk(A::cons((**h).clone(), fd)), ysd)))
                }
                _ => Err(absurd("append", out)),
            },
            _ => Err(absurd("append", out)),
        },
    }
}

/// Demand function of the length-indexed `rev b` against a thunked demand
/// on its result. Forcing the reversal walks all `|b|` cells and costs
/// `|b| + 1`; element `i` of `b` is demanded exactly when the matching
/// output head is.
fn rev_d(b: &[u32], out: &ApproxValue) -> Result<Tick<ApproxValue>, Absurd> {
    let mut cell = match out {
        A::Bot => return Ok(Tick::ret(A::Bot)),
        A::Thunk(l) => &**l,
        _ => return Err(absurd("rev", out)),
    };
    let mut heads = Vec::new();
    while let A::ConsA(h, t) = cell {
        heads.push((**h).clone());
        match &**t {
            A::Thunk(l) => cell = l,
            _ => break,
        }
    }
    let n = b.len();
    let mut demand = A::Bot;
    for i in (0..n).rev() {
        let head = heads.get(n - 1 - i).cloned().unwrap_or(A::Bot);
        demand = A::thunk(A::cons(head, demand));
    }
    Ok(Tick::new(n as u64 + 1, demand))
}

/// Demand function of `mk_queue`: the demands on the front and back lists
/// passed in.
pub fn mk_queue_d(
    nfront: usize,
    front: &[u32],
    nback: usize,
    back: &[u32],
    out: &BQueueA,
) -> Result<Tick<(ApproxValue, ApproxValue)>, Absurd> {
    if nfront < nback {
        match &out.front {
            A::Bot => Ok(Tick::new(1, (A::Bot, A::Bot))),
            A::Thunk(l) => {
                let app = append_d(front, l)?;
                let (fd, ysd) = app.value;
                let rev = rev_d(back, &ysd)?;
                Ok(Tick::new(1 + app.cost + rev.cost, (fd, rev.value)))
            }
            _ => Err(absurd("mkQueue", &out.front)),
        }
    } else {
        Ok(Tick::new(1, (out.front.clone(), out.back.clone())))
    }
}

/// The tail of a thunked cons demand.
fn tail_x(d: &ApproxValue) -> ApproxValue {
    match d {
        A::Thunk(l) => match &**l {
            A::ConsA(_, t) => (**t).clone(),
            _ => A::Bot,
        },
        _ => A::Bot,
    }
}

/// Demand function of `push q x`: the demands on `q` and on `x`.
pub fn push_d(q: &BQueue, x: u32, out: &BQueueA) -> Result<Tick<(T<BQueueA>, ApproxValue)>, Absurd> {
    let mut back = vec![x];
    back.extend(&q.back);
    let r = mk_queue_d(q.nfront, &q.front, q.nback + 1, &back, out)?;
    let (front, back) = r.value;
    let qd = BQueueA {
        nfront: q.nfront,
        front,
        nback: q.nback,
        back: tail_x(&back),
    };
    Ok(Tick::new(r.cost + 1, (T::Thunk(qd), A::thunk(A::NatA(x)))))
}

/// Demand function of `pop q`: the demand on `q`.
pub fn pop_d(q: &BQueue, out: &PopDemand) -> Result<Tick<T<BQueueA>>, Absurd> {
    match (q.front.split_first(), out) {
        (None, _) => Ok(Tick::new(1, T::Thunk(exact(q)))),
        (Some((_, rest)), PopDemand::Some(xd, qd)) => {
            let r = match qd {
                T::Undefined => Tick::ret((A::Bot, A::Bot)),
                T::Thunk(qa) => mk_queue_d(q.nfront - 1, rest, q.nback, &q.back, qa)?,
            };
            let (fd, bd) = r.value;
            Ok(Tick::new(
                r.cost + 1,
                T::Thunk(BQueueA {
                    nfront: q.nfront,
                    front: A::thunk(A::cons(xd.clone(), fd)),
                    nback: q.nback,
                    back: bd,
                }),
            ))
        }
        (Some(_), PopDemand::None) => Err(absurd("pop", &A::Bot)),
    }
}

// ---------------------------------------------------------------------------
// Clairvoyant translations

fn lazy(go: impl FnOnce() -> Branches<ApproxValue>) -> Branches<ApproxValue> {
    Branches::ret(A::Bot).union(go().map(A::thunk))
}

fn append_a(f: &ApproxValue, ys: &ApproxValue) -> Branches<ApproxValue> {
    match f.unthunk() {
        Some(A::NilA) => match ys.unthunk() {
            Some(l) => Branches::ret(l.clone()),
            None => Branches::none(),
        },
        Some(A::ConsA(h, t)) => lazy(|| append_a(t, ys)).map(|r| A::cons((**h).clone(), r)),
        _ => Branches::none(),
    }
    .tick()
}

fn rev_a(n: usize, b: &ApproxValue) -> Branches<ApproxValue> {
    let mut heads = Vec::new();
    let mut cur = b;
    for _ in 0..n {
        match cur.unthunk() {
            Some(A::ConsA(h, t)) => {
                heads.push((**h).clone());
                cur = t;
            }
            _ => return Branches::none(),
        }
    }
    let out = heads
        .into_iter()
        .fold(A::NilA, |acc, h| A::cons(h, A::thunk(acc)));
    Branches::with_cost(n as u64 + 1, out)
}

/// Clairvoyant `mk_queue` on approximate lists.
pub fn mk_queue_a(nfront: usize, front: &ApproxValue, nback: usize, back: &ApproxValue) -> Branches<BQueueA> {
    if nfront < nback {
        lazy(|| lazy(|| rev_a(nback, back)).bind(|ys| append_a(front, &ys)))
            .map(|f| BQueueA {
                nfront: nfront + nback,
                front: f,
                nback: 0,
                back: A::thunk(A::NilA),
            })
            .tick()
    } else {
        Branches::with_cost(
            1,
            BQueueA {
                nfront,
                front: front.clone(),
                nback,
                back: back.clone(),
            },
        )
    }
}

/// Clairvoyant `push`: `q` must be evaluated.
pub fn push_a(q: &T<BQueueA>, x: &ApproxValue) -> Branches<BQueueA> {
    match q {
        T::Undefined => Branches::none(),
        T::Thunk(q) => mk_queue_a(
            q.nfront,
            &q.front,
            q.nback + 1,
            &A::thunk(A::cons(x.clone(), q.back.clone())),
        )
        .tick(),
    }
}

/// Result of a clairvoyant `pop`: the popped element and the remaining
/// queue, suspended.
pub type PopResultA = Option<(ApproxValue, T<BQueueA>)>;

/// Clairvoyant `pop`: `q` and its front must be evaluated.
pub fn pop_a(q: &T<BQueueA>) -> Branches<PopResultA> {
    let T::Thunk(q) = q else {
        return Branches::none();
    };
    match q.front.unthunk() {
        Some(A::NilA) => Branches::with_cost(1, None),
        Some(A::ConsA(x, f)) => {
            let rest = Branches::ret(T::Undefined)
                .union(mk_queue_a(q.nfront - 1, f, q.nback, &q.back).map(T::Thunk));
            rest.map(|r| Some(((**x).clone(), r))).tick()
        }
        _ => Branches::none(),
    }
}

/// Does a clairvoyant pop result cover the demand `out`?
pub fn pop_result_covers(out: &PopDemand, r: &PopResultA) -> bool {
    match (out, r) {
        (PopDemand::None, None) => true,
        (PopDemand::Some(xd, qd), Some((x, q))) => {
            less_defined(xd, x) && qd.less_defined_by(q, less_defined_q)
        }
        _ => false,
    }
}

// ---------------------------------------------------------------------------
// Rendering

/// Single-letter name of an element: `a`, `b`, ... and numbers past `z`.
pub fn label(x: u32) -> String {
    match char::from_u32(u32::from(b'a') + x) {
        Some(c) if x < 26 => String::from(c),
        _ => alloc::format!("{x}"),
    }
}

/// Renders a list demand with element labels: `a:b:⊥`, `a:nil`, `⊥`.
pub fn render_list(xs: &[u32], d: &ApproxValue) -> String {
    let mut out = String::new();
    let mut cur = d;
    let mut i = 0;
    loop {
        match cur.unthunk() {
            Some(A::ConsA(_, t)) => {
                out.push_str(&xs.get(i).map_or(String::from("?"), |&x| label(x)));
                out.push(':');
                cur = t;
                i += 1;
            }
            Some(A::NilA) => {
                out.push_str("nil");
                return out;
            }
            _ => {
                out.push('⊥');
                return out;
            }
        }
    }
}

/// Renders a queue demand as `(front, back)`, or `⊥` when unevaluated.
pub fn render(q: &BQueue, d: &T<BQueueA>) -> String {
    match d {
        T::Undefined => String::from("⊥"),
        T::Thunk(d) => alloc::format!(
            "({}, {})",
            render_list(&q.front, &d.front),
            render_list(&q.back, &d.back)
        ),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn queue_of(xs: &[u32]) -> BQueue {
        xs.iter().fold(BQueue::empty(), |q, &x| push(&q, x))
    }

    #[test]
    fn fifo_order() {
        let mut q = queue_of(&[0, 1, 2, 3]);
        assert!(q.well_formed());
        let mut seen = Vec::new();
        while let Some((x, r)) = pop(&q) {
            assert!(r.well_formed());
            seen.push(x);
            q = r;
        }
        assert_eq!(seen, vec![0, 1, 2, 3]);
    }

    #[test]
    fn push_onto_empty_demands_nil_front() {
        let q0 = BQueue::empty();
        let q1 = push(&q0, 0);
        let out = BQueueA {
            front: A::thunk(A::cons(A::Bot, A::thunk(A::NilA))),
            ..least(&q1)
        };
        let d = push_d(&q0, 0, &out).unwrap();
        // push, mkQueue, one append call, a one-cell reversal.
        assert_eq!(d.cost, 1 + 1 + 1 + 2);
        let (T::Thunk(qd), _) = d.value else { panic!() };
        assert_eq!(render(&q0, &T::Thunk(qd)), "(nil, ⊥)");
    }

    #[test]
    fn unforced_rebalance_is_cheap() {
        let q = queue_of(&[0, 1]);
        let q2 = push(&q, 2);
        let d = push_d(&q, 2, &least(&q2)).unwrap();
        assert_eq!(d.cost, 2);
        assert_eq!(d.value.0, T::Thunk(least(&q)));
    }

    #[test]
    fn pop_of_empty_is_exact() {
        let q = BQueue::empty();
        let d = pop_d(&q, &PopDemand::None).unwrap();
        assert_eq!(d.cost, 1);
        assert_eq!(d.value, T::Thunk(exact(&q)));
    }

    #[test]
    fn potential_counts_unpaid_front_cells() {
        let q = queue_of(&[0, 1, 2, 3]);
        assert_eq!((q.nfront, q.nback), (3, 1));
        assert_eq!(potential(&exact(&q)), 4);
        assert_eq!(potential(&least(&q)), 0);
    }

    #[test]
    fn clairvoyant_push_matches_demand() {
        let q = queue_of(&[0, 1]);
        let q2 = push(&q, 2);
        let out = exact(&q2);
        let d = push_d(&q, 2, &out).unwrap();
        let (qd, xd) = d.value;
        let b = push_a(&qd, &xd);
        let best = b.min_matching(|r| less_defined_q(&out, r)).unwrap();
        assert_eq!(best.0, d.cost);
    }

    #[test]
    fn labels() {
        assert_eq!(label(0), "a");
        assert_eq!(label(25), "z");
        assert_eq!(label(26), "26");
    }
}

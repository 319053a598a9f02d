//! Text formats for queue states, queue demands and traces, and a runner
//! for single queue operations.
//!
//! A banker's queue is written `(queue NF (f ...) NB (b ...))` with the rear
//! list most-recent-first; its demand replaces both lists by demand literals
//! of type `T (list nat)`. An implicit queue is `nil` or
//! `(deep FRONT MIDDLE REAR)` with `FRONT = (one e) | (two e e)`,
//! `REAR = zero | (one e)` and elements `n | (pair e e)`; its demand allows
//! `_` at every suspended position.
//!
//! Traces have one event per line: `empty`, `push VALUE @INDEX` or
//! `pop @INDEX`, with `#` starting a comment.

use lazycost_core::banker::{self, BQueue, BQueueA, PopDemand};
use lazycost_core::implicit::{self, Elem, ElemA, Front, IQueue, IQueueA, PopOut, Rear, TE};
use lazycost_core::thunk::{potential_t, T};
use lazycost_core::trace::{Event, Trace};
use serde::Serialize;

use crate::sexpr::{read_one, Sexp};
use crate::syntax::demand_sexp;
use crate::ParseError;

fn err<X>(message: impl Into<String>) -> Result<X, ParseError> {
    Err(ParseError::new(message))
}

fn nat(s: &Sexp) -> Result<u32, ParseError> {
    s.atom()
        .filter(|a| a.bytes().all(|b| b.is_ascii_digit()))
        .and_then(|a| a.parse().ok())
        .ok_or_else(|| ParseError::new(format!("expected a natural number, found `{s}`")))
}

fn nats(s: &Sexp) -> Result<Vec<u32>, ParseError> {
    s.list()
        .ok_or_else(|| ParseError::new(format!("expected a list of naturals, found `{s}`")))?
        .iter()
        .map(nat)
        .collect()
}

fn queue_fields(s: &Sexp) -> Result<&[Sexp], ParseError> {
    match s.tagged("queue") {
        Some(f) if f.len() == 4 => Ok(f),
        _ => err(format!("expected `(queue NF FRONT NB BACK)`, found `{s}`")),
    }
}

pub fn banker_state(src: &str) -> Result<BQueue, ParseError> {
    let s = read_one(src)?;
    let f = queue_fields(&s)?;
    let q = BQueue {
        nfront: nat(&f[0])? as usize,
        front: nats(&f[1])?,
        nback: nat(&f[2])? as usize,
        back: nats(&f[3])?,
    };
    if q.front.len() != q.nfront || q.back.len() != q.nback {
        return err("queue lengths disagree with the lists");
    }
    if !q.well_formed() {
        return err("the rear list is longer than the front list");
    }
    Ok(q)
}

fn banker_demand_sexp(s: &Sexp) -> Result<BQueueA, ParseError> {
    let f = queue_fields(s)?;
    Ok(BQueueA {
        nfront: nat(&f[0])? as usize,
        front: demand_sexp(&f[1])?,
        nback: nat(&f[2])? as usize,
        back: demand_sexp(&f[3])?,
    })
}

pub fn banker_demand(src: &str) -> Result<BQueueA, ParseError> {
    banker_demand_sexp(&read_one(src)?)
}

/// `none`, or `(some X Q)` with `X` a demand on the element and `Q` either
/// `_` or a queue demand.
pub fn banker_pop_demand(src: &str) -> Result<PopDemand, ParseError> {
    let s = read_one(src)?;
    if s.atom() == Some("none") {
        return Ok(PopDemand::None);
    }
    match s.tagged("some") {
        Some([x, q]) => Ok(PopDemand::Some(
            demand_sexp(x)?,
            suspended(q, banker_demand_sexp)?,
        )),
        _ => err(format!("expected `none` or `(some X Q)`, found `{s}`")),
    }
}

fn suspended<X>(s: &Sexp, inner: impl Fn(&Sexp) -> Result<X, ParseError>) -> Result<T<X>, ParseError> {
    if s.atom() == Some("_") {
        Ok(T::Undefined)
    } else {
        Ok(T::Thunk(inner(s)?))
    }
}

fn elem(s: &Sexp) -> Result<Elem, ParseError> {
    match s.tagged("pair") {
        Some([a, b]) => Ok(Elem::pair(elem(a)?, elem(b)?)),
        _ => Ok(Elem::Atom(nat(s)?)),
    }
}

fn front<E>(s: &Sexp, e: impl Fn(&Sexp) -> Result<E, ParseError>) -> Result<Front<E>, ParseError> {
    if let Some([x]) = s.tagged("one") {
        Ok(Front::One(e(x)?))
    } else if let Some([x, y]) = s.tagged("two") {
        Ok(Front::Two(e(x)?, e(y)?))
    } else {
        err(format!("expected `(one e)` or `(two e e)`, found `{s}`"))
    }
}

fn rear<E>(s: &Sexp, e: impl Fn(&Sexp) -> Result<E, ParseError>) -> Result<Rear<E>, ParseError> {
    if s.atom() == Some("zero") {
        Ok(Rear::Zero)
    } else if let Some([x]) = s.tagged("one") {
        Ok(Rear::One(e(x)?))
    } else {
        err(format!("expected `zero` or `(one e)`, found `{s}`"))
    }
}

fn iqueue(s: &Sexp) -> Result<IQueue, ParseError> {
    if s.atom() == Some("nil") {
        return Ok(IQueue::Nil);
    }
    match s.tagged("deep") {
        Some([f, m, r]) => Ok(IQueue::Deep(
            front(f, elem)?,
            Box::new(iqueue(m)?),
            rear(r, elem)?,
        )),
        _ => err(format!("expected `nil` or `(deep F M R)`, found `{s}`")),
    }
}

pub fn implicit_state(src: &str) -> Result<IQueue, ParseError> {
    iqueue(&read_one(src)?)
}

fn elem_a(s: &Sexp) -> Result<TE, ParseError> {
    suspended(s, |s| match s.tagged("pair") {
        Some([a, b]) => Ok(ElemA::Pair(Box::new(elem_a(a)?), Box::new(elem_a(b)?))),
        _ => Ok(ElemA::Atom(nat(s)?)),
    })
}

fn iqueue_a(s: &Sexp) -> Result<IQueueA, ParseError> {
    if s.atom() == Some("nil") {
        return Ok(IQueueA::Nil);
    }
    match s.tagged("deep") {
        Some([f, m, r]) => Ok(IQueueA::Deep(
            suspended(f, |f| front(f, elem_a))?,
            Box::new(suspended(m, iqueue_a)?),
            suspended(r, |r| rear(r, elem_a))?,
        )),
        _ => err(format!("expected `nil` or `(deep F M R)`, found `{s}`")),
    }
}

pub fn implicit_demand(src: &str) -> Result<IQueueA, ParseError> {
    iqueue_a(&read_one(src)?)
}

/// `none`, `_`, or `(some E Q)`.
pub fn implicit_pop_demand(src: &str) -> Result<PopOut, ParseError> {
    let s = read_one(src)?;
    match (s.atom(), s.tagged("some")) {
        (Some("none"), _) => Ok(None),
        (Some("_"), _) => Ok(Some(T::Undefined)),
        (_, Some([e, q])) => Ok(Some(T::Thunk((elem_a(e)?, suspended(q, iqueue_a)?)))),
        _ => err(format!("expected `none`, `_` or `(some E Q)`, found `{s}`")),
    }
}

/// Parses a trace file.
pub fn trace(src: &str) -> Result<Trace, ParseError> {
    let mut out = Vec::new();
    for (n, line) in src.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let at = |word: &str| -> Result<usize, ParseError> {
            word.strip_prefix('@')
                .and_then(|i| i.parse().ok())
                .ok_or_else(|| ParseError::at(n + 1, format!("expected `@INDEX`, found `{word}`")))
        };
        let words: Vec<&str> = line.split_whitespace().collect();
        let event = match words.as_slice() {
            ["empty"] => Event::empty(),
            ["pop", i] => Event::pop(at(i)?),
            ["push", v, i] => {
                let v = v
                    .parse()
                    .map_err(|_| ParseError::at(n + 1, format!("bad value `{v}`")))?;
                Event::push(v, at(i)?)
            }
            _ => return Err(ParseError::at(n + 1, format!("unknown event `{line}`"))),
        };
        out.push(event);
    }
    Ok(out)
}

/// Renders a trace in the file format, one event per line.
pub fn render_trace(t: &[Event]) -> String {
    t.iter().map(|e| format!("{e}\n")).collect()
}

/// A queue operation as given on the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum QueueOp {
    Push(u32),
    Pop,
}

impl std::str::FromStr for QueueOp {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, ParseError> {
        match s.split_whitespace().collect::<Vec<_>>().as_slice() {
            ["pop"] => Ok(QueueOp::Pop),
            ["push", x] => x
                .parse()
                .map(QueueOp::Push)
                .map_err(|_| ParseError::new(format!("bad value `{x}`"))),
            _ => err(format!("expected `push X` or `pop`, found `{s}`")),
        }
    }
}

/// The input demand and amortized-cost accounting of one operation:
/// `cost + Φ(input demand) ≤ budget + Φ(output demand)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OpReport {
    pub cost: u64,
    /// The demand on the input queue, in the demand format.
    pub input_demand: String,
    pub potential_in: u64,
    pub potential_out: u64,
    pub budget: u64,
    pub holds: bool,
}

impl OpReport {
    fn new(cost: u64, input_demand: String, potential_in: u64, potential_out: u64, budget: u64) -> Self {
        OpReport {
            cost,
            input_demand,
            potential_in,
            potential_out,
            budget,
            holds: cost + potential_in <= budget + potential_out,
        }
    }
}

fn show_banker(d: &T<BQueueA>) -> String {
    match d {
        T::Undefined => "_".into(),
        T::Thunk(d) => format!("(queue {} {} {} {})", d.nfront, d.front, d.nback, d.back),
    }
}

/// Runs `op` on a banker's queue with the given output demand text.
pub fn run_banker(q: &BQueue, op: QueueOp, out: &str) -> Result<Result<OpReport, String>, ParseError> {
    Ok(match op {
        QueueOp::Push(x) => {
            let out = banker_demand(out)?;
            banker::push_d(q, x, &out).map_err(|e| e.to_string()).map(|d| {
                let qd = &d.value.0;
                OpReport::new(
                    d.cost,
                    show_banker(qd),
                    potential_t(qd, banker::potential),
                    banker::potential(&out),
                    banker::BUDGET,
                )
            })
        }
        QueueOp::Pop => {
            let out = banker_pop_demand(out)?;
            let phi_out = match &out {
                PopDemand::None => 0,
                PopDemand::Some(_, q) => potential_t(q, banker::potential),
            };
            banker::pop_d(q, &out).map_err(|e| e.to_string()).map(|d| {
                OpReport::new(
                    d.cost,
                    show_banker(&d.value),
                    potential_t(&d.value, banker::potential),
                    phi_out,
                    banker::BUDGET,
                )
            })
        }
    })
}

fn show_implicit(d: &T<IQueueA>) -> String {
    match d {
        T::Undefined => "_".into(),
        T::Thunk(d) => d.to_string(),
    }
}

/// Runs `op` on an implicit queue with the given output demand text.
pub fn run_implicit(q: &IQueue, op: QueueOp, out: &str) -> Result<Result<OpReport, String>, ParseError> {
    Ok(match op {
        QueueOp::Push(x) => {
            let out = implicit_demand(out)?;
            implicit::push_d(q, &Elem::Atom(x), &out)
                .map_err(|e| e.to_string())
                .map(|d| {
                    let qd = &d.value.0;
                    OpReport::new(
                        d.cost,
                        show_implicit(qd),
                        potential_t(qd, implicit::potential),
                        implicit::potential(&out),
                        implicit::PUSH_BUDGET,
                    )
                })
        }
        QueueOp::Pop => {
            let out = implicit_pop_demand(out)?;
            let phi_out = match &out {
                Some(T::Thunk((_, q))) => potential_t(q, implicit::potential),
                _ => 0,
            };
            implicit::pop_d(q, &out).map_err(|e| e.to_string()).map(|d| {
                OpReport::new(
                    d.cost,
                    show_implicit(&d.value),
                    potential_t(&d.value, implicit::potential),
                    phi_out,
                    implicit::POP_BUDGET,
                )
            })
        }
    })
}

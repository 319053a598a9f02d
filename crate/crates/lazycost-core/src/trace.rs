//! Persistent-usage traces of queue operations and the amortized cost
//! checks over them.
//!
//! A trace is a sequence of events. Event `e` applies an operation to the
//! results of earlier events, named by index, and its own result is queue
//! version `e`. Versions may be reused any number of times, so a trace
//! describes a DAG of persistent updates. An event whose arguments do not
//! name an existing version (a forward reference, or the result of popping
//! an empty queue) is skipped, or rejected in strict mode.
//!
//! Three interpreters run over a trace:
//!
//! * [`eval_trace`]: the pure values of all versions;
//! * [`exec_trace`]: the clairvoyant execution, where each version has one
//!   approximation shared by all its uses; its cost is the cheapest
//!   execution that evaluates every version to weak head normal form;
//! * [`demand_trace`]: the backward pass. Starting from the least demand on
//!   every version, it walks the events from last to first, runs each
//!   demand function against the demand accumulated on its result, and
//!   joins the input demand into the argument's demand. The snapshots form
//!   the table `q^D_{i@j}`: the demand on version `i` from events `j` and
//!   later.
//!
//! [`check_trace`] combines them: the clairvoyant cost is within the sum of
//! the per-operation budgets, every event satisfies the single-operation
//! potential inequality, demands only shrink as `j` grows, and for every
//! interval `[i, j)` of events
//!
//! ```text
//! cost[i, j) <= S(j) - S(i) + budget[i, j)
//! ```
//!
//! where `S(j)` sums the potentials of `q^D_{k@j}` over all versions
//! `k < j`.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::banker::{self, BQueue, BQueueA, PopDemand};
use crate::implicit::{self, Elem, IQueue, IQueueA};
use crate::lattice::Tick;
use crate::nondet::Branches;
use crate::thunk::T;

// ---------------------------------------------------------------------------
// Traces

/// A queue operation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Op {
    Empty,
    Push(u32),
    Pop,
}

/// An operation applied to earlier versions, named by event index.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Event {
    pub op: Op,
    pub args: Vec<usize>,
}

impl Event {
    pub fn empty() -> Self {
        Event {
            op: Op::Empty,
            args: Vec::new(),
        }
    }

    pub fn push(x: u32, at: usize) -> Self {
        Event {
            op: Op::Push(x),
            args: vec![at],
        }
    }

    pub fn pop(at: usize) -> Self {
        Event {
            op: Op::Pop,
            args: vec![at],
        }
    }
}

impl fmt::Display for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.op {
            Op::Empty => f.write_str("empty")?,
            Op::Push(x) => write!(f, "push {x}")?,
            Op::Pop => f.write_str("pop")?,
        }
        for a in &self.args {
            write!(f, " @{a}")?;
        }
        Ok(())
    }
}

pub type Trace = Vec<Event>;

/// The eight-event program with two pops of the same version:
///
/// ```text
/// q0 = empty; q1 = push q0 a; q2 = push q1 b; q3 = push q2 c;
/// q4 = push q3 d; q5 = pop q4; q6 = pop q5; q7 = pop q4
/// ```
pub fn example_trace() -> Trace {
    vec![
        Event::empty(),
        Event::push(0, 0),
        Event::push(1, 1),
        Event::push(2, 2),
        Event::push(3, 3),
        Event::pop(4),
        Event::pop(5),
        Event::pop(4),
    ]
}

/// Every trace of exactly `len` events whose arguments refer to earlier
/// events, with pushed elements drawn from `0..alphabet`.
pub fn enumerate_traces(len: usize, alphabet: u32) -> Vec<Trace> {
    let mut layer: Vec<Trace> = vec![Vec::new()];
    for e in 0..len {
        let mut next = Vec::new();
        for t in &layer {
            let mut add = |ev: Event| {
                let mut t = t.clone();
                t.push(ev);
                next.push(t);
            };
            add(Event::empty());
            for i in 0..e {
                for x in 0..alphabet {
                    add(Event::push(x, i));
                }
                add(Event::pop(i));
            }
        }
        layer = next;
    }
    layer
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TraceError {
    /// Strict mode: the event's arguments do not name an existing version.
    InvalidEvent { index: usize, event: Event },
    /// A demand function rejected the demand built by the backward pass.
    Demand { index: usize, message: String },
    /// Two demands on one version could not be joined.
    Join { version: usize },
    /// No clairvoyant execution evaluates every version.
    Stuck { index: usize },
    /// The clairvoyant execution exceeded its state budget.
    TooManyStates { cap: usize },
}

impl fmt::Display for TraceError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TraceError::InvalidEvent { index, event } => {
                write!(
                    f,
                    "event {index} (`{event}`) does not refer to an existing version"
                )
            }
            TraceError::Demand { index, message } => write!(f, "event {index}: {message}"),
            TraceError::Join { version } => write!(f, "cannot join demands on version {version}"),
            TraceError::Stuck { index } => {
                write!(f, "no clairvoyant execution gets past event {index}")
            }
            TraceError::TooManyStates { cap } => {
                write!(f, "clairvoyant execution exceeded {cap} states")
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Queue implementations

/// Per-operation budgets.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budgets {
    pub empty: u64,
    pub push: u64,
    pub pop: u64,
}

impl Budgets {
    pub fn of(&self, op: Op) -> u64 {
        match op {
            Op::Empty => self.empty,
            Op::Push(_) => self.push,
            Op::Pop => self.pop,
        }
    }
}

/// A persistent queue with demand functions, a potential and clairvoyant
/// translations. Demands (`D`) are approximations of an *evaluated* queue:
/// every version in a trace is evaluated at least to its outermost
/// constructor.
pub trait QueueImpl {
    type Q: Clone + fmt::Debug + PartialEq;
    type D: Clone + fmt::Debug + Ord;

    fn name() -> &'static str;
    fn budgets() -> Budgets;

    fn empty() -> Self::Q;
    fn push(q: &Self::Q, x: u32) -> Self::Q;
    fn pop(q: &Self::Q) -> Option<Self::Q>;

    fn least(q: &Self::Q) -> Self::D;
    fn join(a: &Self::D, b: &Self::D) -> Option<Self::D>;
    fn less_defined(a: &Self::D, b: &Self::D) -> bool;
    fn potential(d: &Self::D) -> u64;

    /// Demand of `push q x` on `q`, given the demand on the result.
    fn push_d(q: &Self::Q, x: u32, out: &Self::D) -> Result<Tick<Self::D>, String>;
    /// Demand of `pop q` on `q`, given the demand on the remaining queue
    /// (`None` when the queue is empty). The popped element is undemanded.
    fn pop_d(q: &Self::Q, out: Option<&Self::D>) -> Result<Tick<Self::D>, String>;

    fn empty_a() -> Self::D;
    fn push_a(q: &Self::D, x: u32) -> Branches<Self::D>;
    /// Clairvoyant `pop`; `None` when no evaluated remaining queue comes
    /// out (the queue was empty or the remainder was skipped).
    fn pop_a(q: &Self::D) -> Branches<Option<Self::D>>;

    fn render(q: &Self::Q, d: &Self::D) -> String;
}

/// The banker's queue.
pub struct Banker;

/// The implicit queue.
pub struct Implicit;

fn thunked<D>(t: Tick<T<D>>, function: &str) -> Result<Tick<D>, String> {
    match t.value {
        T::Thunk(d) => Ok(Tick::new(t.cost, d)),
        T::Undefined => Err(alloc::format!("{function}: input queue left unevaluated")),
    }
}

impl QueueImpl for Banker {
    type Q = BQueue;
    type D = BQueueA;

    fn name() -> &'static str {
        "banker"
    }

    fn budgets() -> Budgets {
        Budgets {
            empty: banker::BUDGET,
            push: banker::BUDGET,
            pop: banker::BUDGET,
        }
    }

    fn empty() -> BQueue {
        BQueue::empty()
    }

    fn push(q: &BQueue, x: u32) -> BQueue {
        banker::push(q, x)
    }

    fn pop(q: &BQueue) -> Option<BQueue> {
        banker::pop(q).map(|(_, r)| r)
    }

    fn least(q: &BQueue) -> BQueueA {
        banker::least(q)
    }

    fn join(a: &BQueueA, b: &BQueueA) -> Option<BQueueA> {
        banker::join_q(a, b).ok()
    }

    fn less_defined(a: &BQueueA, b: &BQueueA) -> bool {
        banker::less_defined_q(a, b)
    }

    fn potential(d: &BQueueA) -> u64 {
        banker::potential(d)
    }

    fn push_d(q: &BQueue, x: u32, out: &BQueueA) -> Result<Tick<BQueueA>, String> {
        let d = banker::push_d(q, x, out).map_err(|e| e.to_string())?;
        thunked(Tick::new(d.cost, d.value.0), "push")
    }

    fn pop_d(q: &BQueue, out: Option<&BQueueA>) -> Result<Tick<BQueueA>, String> {
        let out = match out {
            None => PopDemand::None,
            Some(d) => PopDemand::Some(crate::lattice::ApproxValue::Bot, T::Thunk(d.clone())),
        };
        thunked(banker::pop_d(q, &out).map_err(|e| e.to_string())?, "pop")
    }

    fn empty_a() -> BQueueA {
        banker::exact(&BQueue::empty())
    }

    fn push_a(q: &BQueueA, x: u32) -> Branches<BQueueA> {
        banker::push_a(
            &T::Thunk(q.clone()),
            &crate::lattice::ApproxValue::thunk(crate::lattice::ApproxValue::NatA(x)),
        )
    }

    fn pop_a(q: &BQueueA) -> Branches<Option<BQueueA>> {
        banker::pop_a(&T::Thunk(q.clone())).map(|r| match r {
            Some((_, T::Thunk(d))) => Some(d),
            _ => None,
        })
    }

    fn render(q: &BQueue, d: &BQueueA) -> String {
        banker::render(q, &T::Thunk(d.clone()))
    }
}

impl QueueImpl for Implicit {
    type Q = IQueue;
    type D = IQueueA;

    fn name() -> &'static str {
        "implicit"
    }

    fn budgets() -> Budgets {
        Budgets {
            empty: 0,
            push: implicit::PUSH_BUDGET,
            pop: implicit::POP_BUDGET,
        }
    }

    fn empty() -> IQueue {
        IQueue::Nil
    }

    fn push(q: &IQueue, x: u32) -> IQueue {
        implicit::push_atom(q, x)
    }

    fn pop(q: &IQueue) -> Option<IQueue> {
        implicit::pop(q).map(|(_, r)| r)
    }

    fn least(q: &IQueue) -> IQueueA {
        implicit::least(q)
    }

    fn join(a: &IQueueA, b: &IQueueA) -> Option<IQueueA> {
        implicit::join_q(a, b).ok()
    }

    fn less_defined(a: &IQueueA, b: &IQueueA) -> bool {
        implicit::less_defined_q(a, b)
    }

    fn potential(d: &IQueueA) -> u64 {
        implicit::potential(d)
    }

    fn push_d(q: &IQueue, x: u32, out: &IQueueA) -> Result<Tick<IQueueA>, String> {
        let d = implicit::push_d(q, &Elem::Atom(x), out).map_err(|e| e.to_string())?;
        thunked(Tick::new(d.cost, d.value.0), "push")
    }

    fn pop_d(q: &IQueue, out: Option<&IQueueA>) -> Result<Tick<IQueueA>, String> {
        let out = out.map(|d| T::Thunk((T::Undefined, T::Thunk(d.clone()))));
        thunked(implicit::pop_d(q, &out).map_err(|e| e.to_string())?, "pop")
    }

    fn empty_a() -> IQueueA {
        IQueueA::Nil
    }

    fn push_a(q: &IQueueA, x: u32) -> Branches<IQueueA> {
        implicit::push_a(&T::Thunk(q.clone()), &T::Thunk(implicit::ElemA::Atom(x)))
    }

    fn pop_a(q: &IQueueA) -> Branches<Option<IQueueA>> {
        implicit::pop_a(&T::Thunk(q.clone())).map(|r| match r {
            Some(T::Thunk((_, T::Thunk(d)))) => Some(d),
            _ => None,
        })
    }

    fn render(_: &IQueue, d: &IQueueA) -> String {
        implicit::render(&T::Thunk(d.clone()))
    }
}

// ---------------------------------------------------------------------------
// Pure interpretation

/// The pure interpretation of a trace: which events run, on which version,
/// and the value of every version.
#[derive(Clone, Debug)]
pub struct Evaluated<Q> {
    /// The argument version of each event; `None` for `empty`.
    pub input: Vec<Option<usize>>,
    /// Whether each event runs (is not skipped).
    pub active: Vec<bool>,
    /// The value of each version; `None` for skipped events and for pops of
    /// an empty queue.
    pub versions: Vec<Option<Q>>,
}

impl<Q> Evaluated<Q> {
    pub fn len(&self) -> usize {
        self.versions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.versions.is_empty()
    }
}

/// Runs a trace on pure queues. Ill-formed events are skipped, or rejected
/// when `strict` is set.
pub fn eval_trace<I: QueueImpl>(t: &[Event], strict: bool) -> Result<Evaluated<I::Q>, TraceError> {
    let mut out = Evaluated {
        input: Vec::with_capacity(t.len()),
        active: Vec::with_capacity(t.len()),
        versions: Vec::with_capacity(t.len()),
    };
    for (e, ev) in t.iter().enumerate() {
        let arg = match (ev.op, ev.args.as_slice()) {
            (Op::Empty, []) => Some(None),
            (Op::Push(_) | Op::Pop, &[a]) if a < e && out.versions[a].is_some() => Some(Some(a)),
            _ => None,
        };
        let Some(input) = arg else {
            if strict {
                return Err(TraceError::InvalidEvent {
                    index: e,
                    event: ev.clone(),
                });
            }
            out.input.push(None);
            out.active.push(false);
            out.versions.push(None);
            continue;
        };
        let q = input.and_then(|a| out.versions[a].as_ref());
        let v = match (ev.op, q) {
            (Op::Empty, _) => Some(I::empty()),
            (Op::Push(x), Some(q)) => Some(I::push(q, x)),
            (Op::Pop, Some(q)) => I::pop(q),
            _ => unreachable!("arguments were checked"),
        };
        out.input.push(input);
        out.active.push(true);
        out.versions.push(v);
    }
    Ok(out)
}

/// Sum of the budgets of the events that run.
pub fn budget_trace<Q>(ev: &Evaluated<Q>, t: &[Event], budgets: &Budgets) -> u64 {
    t.iter()
        .zip(&ev.active)
        .filter(|(_, &a)| a)
        .map(|(e, _)| budgets.of(e.op))
        .sum()
}

// ---------------------------------------------------------------------------
// Clairvoyant interpretation

/// Default bound on the number of distinct states in [`exec_trace`].
pub const DEFAULT_STATE_CAP: usize = 1 << 16;

/// Result of the clairvoyant execution of a trace.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Execution {
    /// Cost of the cheapest execution that evaluates every version.
    pub cost: u64,
    /// Largest number of distinct live states held at once.
    pub peak_states: usize,
}

/// Runs a trace clairvoyantly. Every version gets one approximation, shared
/// by all its uses; branches that leave some version unevaluated are
/// discarded. States are the approximations of the versions still used by
/// later events, so executions that agree on them are merged, keeping the
/// cheaper.
pub fn exec_trace<I: QueueImpl>(
    t: &[Event],
    ev: &Evaluated<I::Q>,
    cap: usize,
) -> Result<Execution, TraceError> {
    let n = ev.len();
    let mut last_use = vec![None; n];
    for (e, input) in ev.input.iter().enumerate() {
        if let Some(v) = input {
            last_use[*v] = Some(e);
        }
    }
    let mut states: BTreeMap<Vec<Option<I::D>>, u64> = BTreeMap::new();
    states.insert(vec![None; n], 0);
    let mut peak = 1;
    for (e, event) in t.iter().enumerate() {
        if !ev.active[e] {
            continue;
        }
        let keep_result = last_use[e].is_some();
        let mut next: BTreeMap<Vec<Option<I::D>>, u64> = BTreeMap::new();
        for (state, cost) in &states {
            let q = ev.input[e].map(|v| state[v].as_ref().expect("live version has a state"));
            let branches: Branches<Option<I::D>> = match (event.op, q) {
                (Op::Empty, _) => Branches::ret(Some(I::empty_a())),
                (Op::Push(x), Some(q)) => I::push_a(q, x).map(Some),
                (Op::Pop, Some(q)) => {
                    let exists = ev.versions[e].is_some();
                    I::pop_a(q).filter(|r| r.is_some() == exists)
                }
                _ => unreachable!("arguments were checked"),
            };
            for (c, r) in branches {
                let mut s = state.clone();
                if keep_result {
                    s[e] = r;
                }
                if let Some(v) = ev.input[e] {
                    if last_use[v] == Some(e) {
                        s[v] = None;
                    }
                }
                let total = cost + c;
                next.entry(s)
                    .and_modify(|old| *old = (*old).min(total))
                    .or_insert(total);
            }
        }
        if next.is_empty() {
            return Err(TraceError::Stuck { index: e });
        }
        if next.len() > cap {
            return Err(TraceError::TooManyStates { cap });
        }
        peak = peak.max(next.len());
        states = next;
    }
    let cost = states.values().copied().min().unwrap_or(0);
    Ok(Execution {
        cost,
        peak_states: peak,
    })
}

// ---------------------------------------------------------------------------
// Demand interpretation

/// The backward pass over a trace.
#[derive(Clone, Debug)]
pub struct DemandTable<D> {
    /// `table[j][i]` is `q^D_{i@j}`, for `0 <= j <= len`; `None` where
    /// version `i` does not exist.
    pub table: Vec<Vec<Option<D>>>,
    /// Cost of each event's demand function (zero for skipped events and
    /// `empty`).
    pub costs: Vec<u64>,
    /// Demand of each event on its argument.
    pub inputs: Vec<Option<D>>,
}

impl<D> DemandTable<D> {
    pub fn total_cost(&self) -> u64 {
        self.costs.iter().sum()
    }

    /// `q^D_{i@j}`.
    pub fn at(&self, i: usize, j: usize) -> Option<&D> {
        self.table[j][i].as_ref()
    }
}

/// Computes `q^D_{i@j}` for every version and program point.
pub fn demand_trace<I: QueueImpl>(
    t: &[Event],
    ev: &Evaluated<I::Q>,
) -> Result<DemandTable<I::D>, TraceError> {
    let n = ev.len();
    let mut table = vec![Vec::new(); n + 1];
    table[n] = ev.versions.iter().map(|v| v.as_ref().map(I::least)).collect();
    let mut costs = vec![0; n];
    let mut inputs = vec![None; n];
    for e in (0..n).rev() {
        let mut row = table[e + 1].clone();
        if let (true, Some(v)) = (ev.active[e], ev.input[e]) {
            let q = ev.versions[v].as_ref().expect("argument exists");
            let out = table[e + 1][e].as_ref();
            let d = match t[e].op {
                Op::Push(x) => I::push_d(q, x, out.expect("push result exists")),
                Op::Pop => I::pop_d(q, out),
                Op::Empty => unreachable!("empty takes no argument"),
            }
            .map_err(|message| TraceError::Demand { index: e, message })?;
            let joined = match &row[v] {
                Some(old) => I::join(old, &d.value).ok_or(TraceError::Join { version: v })?,
                None => d.value.clone(),
            };
            row[v] = Some(joined);
            costs[e] = d.cost;
            inputs[e] = Some(d.value);
        }
        table[e] = row;
    }
    Ok(DemandTable { table, costs, inputs })
}

/// Renders `q^D_{i@j}` for every version `i` and every `j` from `i` to the
/// end of the trace.
pub fn render_table<I: QueueImpl>(ev: &Evaluated<I::Q>, dt: &DemandTable<I::D>) -> Vec<String> {
    let mut lines = Vec::new();
    for (i, v) in ev.versions.iter().enumerate() {
        let Some(q) = v else { continue };
        let mut line = alloc::format!("q{i}:");
        for j in i..=ev.len() {
            let d = dt.at(i, j).map_or_else(|| String::from("⊥"), |d| I::render(q, d));
            line.push_str(&alloc::format!(" @{j}={d}"));
        }
        lines.push(line);
    }
    lines
}

// ---------------------------------------------------------------------------
// Checks

/// Which check a trace failed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Failure {
    /// The clairvoyant cost exceeds the sum of the budgets.
    Amortized { cost: u64, budget: u64 },
    /// One event violates the single-operation potential inequality.
    Physicist { event: usize, lhs: u64, rhs: u64 },
    /// `cost[i, j) > S(j) - S(i) + budget[i, j)`.
    Interval { i: usize, j: usize, lhs: i64, rhs: i64 },
    /// `q^D_{i@j+1}` is not below `q^D_{i@j}`.
    Monotonicity { version: usize, at: usize },
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Amortized { cost, budget } => {
                write!(f, "clairvoyant cost {cost} exceeds budget {budget}")
            }
            Failure::Physicist { event, lhs, rhs } => write!(
                f,
                "event {event}: potential(in) + cost = {lhs} > budget + potential(out) = {rhs}"
            ),
            Failure::Interval { i, j, lhs, rhs } => {
                write!(f, "interval [{i}, {j}): cost {lhs} > bound {rhs}")
            }
            Failure::Monotonicity { version, at } => {
                write!(f, "demand on q{version} grows between @{at} and @{}", at + 1)
            }
        }
    }
}

/// Outcome of checking one trace.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceReport {
    pub clairvoyant_cost: u64,
    pub demand_cost: u64,
    pub budget: u64,
    /// Smallest margin over all inequalities checked (negative on failure).
    pub slack: i64,
    pub failures: Vec<Failure>,
}

impl TraceReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Runs all three interpreters on `t` and checks every inequality.
pub fn check_trace<I: QueueImpl>(
    t: &[Event],
    budgets: &Budgets,
    strict: bool,
    cap: usize,
) -> Result<TraceReport, TraceError> {
    let ev = eval_trace::<I>(t, strict)?;
    let dt = demand_trace::<I>(t, &ev)?;
    let exec = exec_trace::<I>(t, &ev, cap)?;
    let budget = budget_trace(&ev, t, budgets);
    let n = ev.len();
    let phi = |d: Option<&I::D>| d.map_or(0, I::potential);
    let mut failures = Vec::new();
    let mut slack = budget as i64 - exec.cost as i64;
    if exec.cost > budget {
        failures.push(Failure::Amortized {
            cost: exec.cost,
            budget,
        });
    }
    for (e, event) in t.iter().enumerate().take(n) {
        if let Some(d) = &dt.inputs[e] {
            let lhs = I::potential(d) + dt.costs[e];
            let rhs = budgets.of(event.op) + phi(dt.at(e, e + 1));
            slack = slack.min(rhs as i64 - lhs as i64);
            if lhs > rhs {
                failures.push(Failure::Physicist { event: e, lhs, rhs });
            }
        }
    }
    // S(j): potential of all versions created before j, demanded from j on.
    let s: Vec<i64> = (0..=n)
        .map(|j| (0..j).map(|k| phi(dt.at(k, j)) as i64).sum())
        .collect();
    let budget_of = |e: usize| if ev.active[e] { budgets.of(t[e].op) } else { 0 };
    for i in 0..=n {
        let (mut cost, mut bud) = (0i64, 0i64);
        for j in i..=n {
            if j > i {
                cost += dt.costs[j - 1] as i64;
                bud += budget_of(j - 1) as i64;
            }
            let rhs = s[j] - s[i] + bud;
            slack = slack.min(rhs - cost);
            if cost > rhs {
                failures.push(Failure::Interval { i, j, lhs: cost, rhs });
            }
        }
    }
    for k in 0..n {
        for j in k..n {
            if let (Some(later), Some(earlier)) = (dt.at(k, j + 1), dt.at(k, j)) {
                if !I::less_defined(later, earlier) {
                    failures.push(Failure::Monotonicity { version: k, at: j });
                }
            }
        }
    }
    Ok(TraceReport {
        clairvoyant_cost: exec.cost,
        demand_cost: dt.total_cost(),
        budget,
        slack,
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn example_versions() {
        let ev = eval_trace::<Banker>(&example_trace(), true).unwrap();
        let q4 = ev.versions[4].as_ref().unwrap();
        assert_eq!(q4.to_vec(), vec![0, 1, 2, 3]);
        assert_eq!(ev.versions[5], ev.versions[7]);
        assert_eq!(ev.versions[6].as_ref().unwrap().to_vec(), vec![2, 3]);
    }

    #[test]
    fn skipped_and_strict() {
        let t = vec![Event::empty(), Event::pop(0), Event::push(0, 1), Event::pop(5)];
        let ev = eval_trace::<Banker>(&t, false).unwrap();
        assert_eq!(ev.active, vec![true, true, false, false]);
        assert!(ev.versions[1].is_none());
        assert_eq!(
            eval_trace::<Banker>(&t, true).unwrap_err(),
            TraceError::InvalidEvent {
                index: 2,
                event: Event::push(0, 1)
            }
        );
    }

    #[test]
    fn empty_trace_and_single_empty() {
        let r = check_trace::<Banker>(&[], &Banker::budgets(), false, DEFAULT_STATE_CAP).unwrap();
        assert_eq!((r.clairvoyant_cost, r.budget), (0, 0));
        let r =
            check_trace::<Banker>(&[Event::empty()], &Banker::budgets(), false, DEFAULT_STATE_CAP).unwrap();
        assert_eq!(r.clairvoyant_cost, 0);
        assert_eq!(r.budget, 7);
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_traces(0, 2).len(), 1);
        assert_eq!(enumerate_traces(1, 2).len(), 1);
        assert_eq!(enumerate_traces(2, 2).len(), 4);
        assert_eq!(enumerate_traces(3, 2).len(), 4 * 7);
    }

    #[test]
    fn event_display() {
        assert_eq!(Event::push(3, 1).to_string(), "push 3 @1");
        assert_eq!(Event::pop(4).to_string(), "pop @4");
        assert_eq!(Event::empty().to_string(), "empty");
    }
}

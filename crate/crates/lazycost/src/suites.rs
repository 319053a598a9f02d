//! Exhaustive check suites, run in parallel.
//!
//! Every suite enumerates its instances, checks them with rayon, and then
//! folds the results in enumeration order. Its report is therefore the same
//! whatever the thread count, including which counterexample is shown
//! first.

use std::collections::BTreeMap;

use lazycost_core::banker::{self, PopDemand};
use lazycost_core::calculus::Program;
use lazycost_core::clairvoyant::CvError;
use lazycost_core::demand::Analyzed;
use lazycost_core::implicit::{self, Elem};
use lazycost_core::lattice::{total_envs, ApproxValue, Tick};
use lazycost_core::stdlib::*;
use lazycost_core::theorems::{check_env, CheckError, EnvReport, Selection};
use lazycost_core::thunk::{potential_t, T};
use lazycost_core::trace::{
    check_trace, enumerate_traces, Budgets, QueueImpl, TraceError, DEFAULT_STATE_CAP,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

/// Summary of one suite run.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Outcome {
    pub suite: String,
    /// Number of checked instances.
    pub checked: u64,
    /// Instances per property, when the suite distinguishes them.
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub properties: BTreeMap<String, u64>,
    /// Smallest margin of any checked inequality, when meaningful.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub worst_slack: Option<i64>,
    /// The first violation in enumeration order.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
    /// Number of violations found.
    pub violations: u64,
    /// Set when a resource cap stopped some check.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub resource_cap: Option<String>,
}

impl Outcome {
    fn new(suite: impl Into<String>) -> Self {
        Outcome {
            suite: suite.into(),
            ..Outcome::default()
        }
    }

    pub fn passed(&self) -> bool {
        self.violations == 0 && self.resource_cap.is_none()
    }

    fn violation(&mut self, what: String) {
        self.violations += 1;
        self.counterexample.get_or_insert(what);
    }

    fn slack(&mut self, s: i64) {
        self.worst_slack = Some(self.worst_slack.map_or(s, |w| w.min(s)));
    }

    /// Folds per-instance results, in order, into one outcome.
    fn collect(suite: &str, parts: Vec<Partial>) -> Self {
        let mut out = Outcome::new(suite);
        for p in parts {
            out.checked += p.checked;
            for v in p.violations {
                out.violation(v);
            }
            if let Some(s) = p.slack {
                out.slack(s);
            }
        }
        out
    }
}

/// The result of checking one enumerated input.
#[derive(Default)]
struct Partial {
    checked: u64,
    violations: Vec<String>,
    slack: Option<i64>,
}

impl Partial {
    /// Records one instance of `lhs ≤ rhs`.
    fn le(&mut self, lhs: u64, rhs: u64, what: impl FnOnce() -> String) {
        self.checked += 1;
        let s = rhs as i64 - lhs as i64;
        self.slack = Some(self.slack.map_or(s, |w| w.min(s)));
        if lhs > rhs {
            self.violations.push(format!("{}: {lhs} > {rhs}", what()));
        }
    }

    fn holds(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.violations.push(what());
        }
    }
}

// ---------------------------------------------------------------------------
// Correspondence between the demand and clairvoyant semantics

/// Checks the selected theorems of one program on every total environment
/// with lists of length at most `max_len` over `nats`.
pub fn correspondence(
    name: &str,
    prog: &Program,
    max_len: usize,
    nats: &[u32],
    cap: usize,
    sel: Selection,
) -> Result<Outcome, CheckError> {
    let tys = prog.ty_env();
    let analyzed = Analyzed::new(&tys, &prog.body)?;
    let envs = total_envs(&tys, max_len, nats);
    let reports: Vec<Result<EnvReport, CheckError>> = envs
        .par_iter()
        .map(|g| check_env(&analyzed, g, cap, sel))
        .collect();
    let mut merged = EnvReport::default();
    let mut out = Outcome::new(name);
    for r in reports {
        match r {
            Ok(r) => merged.merge(r),
            Err(CheckError::Cv(e @ CvError::TooManyBranches { .. })) => {
                out.resource_cap.get_or_insert(e.to_string());
            }
            Err(e) => return Err(e),
        }
    }
    for v in &merged.violations {
        out.violation(v.to_string());
    }
    for (p, n) in &merged.checked {
        out.checked += n;
        out.properties.insert(p.name().to_string(), *n);
    }
    // Cost minimality rules out the semantics that charges nothing; record
    // whether the run could tell the two apart.
    out.properties
        .insert("positive-cost-demands".into(), merged.saw_positive_cost as u64);
    Ok(out)
}

// ---------------------------------------------------------------------------
// List functions

fn demand_ok(d: &ApproxValue, xs: &[u32]) -> bool {
    match d {
        ApproxValue::Bot => true,
        ApproxValue::Thunk(l) => approximates_list(l, xs),
        _ => false,
    }
}

fn show(xs: &[u32]) -> String {
    format!("{xs:?}")
}

/// Every demand on the result of `select x xs`.
pub fn select_demands(x: u32, xs: &[u32]) -> Vec<ApproxValue> {
    let (m, rest) = select(x, xs);
    let mut tails = vec![ApproxValue::Bot];
    tails.extend(list_demands(&rest).into_iter().map(ApproxValue::thunk));
    let mut out = Vec::new();
    for h in [ApproxValue::Bot, ApproxValue::thunk(ApproxValue::NatA(m))] {
        for t in &tails {
            out.push(ApproxValue::pair(h.clone(), t.clone()));
        }
    }
    out
}

/// The list functions with demand functions and cost bounds. Each takes a
/// natural-number argument (a count, an element or the fuel) and a list.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum ListFn {
    Take,
    Insert,
    Isort,
    Select,
    Ssort,
    TakeIsort,
    TakeSsort,
}

impl ListFn {
    pub const ALL: [ListFn; 7] = [
        ListFn::Take,
        ListFn::Insert,
        ListFn::Isort,
        ListFn::Select,
        ListFn::Ssort,
        ListFn::TakeIsort,
        ListFn::TakeSsort,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ListFn::Take => "take",
            ListFn::Insert => "insert",
            ListFn::Isort => "isort",
            ListFn::Select => "select",
            ListFn::Ssort => "ssort",
            ListFn::TakeIsort => "take-isort",
            ListFn::TakeSsort => "take-ssort",
        }
    }

    /// Whether the function reads its natural-number argument.
    pub fn uses_arg(self) -> bool {
        self != ListFn::Isort
    }

    /// The total result, as an approximation.
    pub fn result(self, arg: u32, xs: &[u32]) -> ApproxValue {
        let n = arg as usize;
        match self {
            ListFn::Take => exact_list(&take(n, xs)),
            ListFn::Insert => exact_list(&insert(arg, xs)),
            ListFn::Isort => exact_list(&insertion_sort(xs)),
            ListFn::Select => {
                let (m, rest) = select(arg, xs);
                ApproxValue::pair(
                    ApproxValue::thunk(ApproxValue::NatA(m)),
                    ApproxValue::thunk(exact_list(&rest)),
                )
            }
            ListFn::Ssort => exact_list(&selection_sort(xs, n)),
            ListFn::TakeIsort => exact_list(&take_insertion_sort(n, xs)),
            ListFn::TakeSsort => exact_list(&take_selection_sort(n, xs)),
        }
    }

    /// Every valid demand on the result.
    pub fn demands(self, arg: u32, xs: &[u32]) -> Vec<ApproxValue> {
        let n = arg as usize;
        match self {
            ListFn::Take => list_demands(&take(n, xs)),
            ListFn::Insert => list_demands(&insert(arg, xs)),
            ListFn::Isort => list_demands(&insertion_sort(xs)),
            ListFn::Select => select_demands(arg, xs),
            ListFn::Ssort => list_demands(&selection_sort(xs, n)),
            ListFn::TakeIsort => list_demands(&take_insertion_sort(n, xs)),
            ListFn::TakeSsort => list_demands(&take_selection_sort(n, xs)),
        }
    }

    /// The demand function.
    pub fn demand(self, arg: u32, xs: &[u32], out: &ApproxValue) -> Result<Tick<ApproxValue>, Absurd> {
        let n = arg as usize;
        match self {
            ListFn::Take => take_d(n, xs, out),
            ListFn::Insert => insert_d(arg, xs, out),
            ListFn::Isort => insertion_sort_d(xs, out),
            ListFn::Select => select_d(arg, xs, out),
            ListFn::Ssort => selection_sort_d(xs, n, out),
            ListFn::TakeIsort => take_insertion_sort_d(n, xs, out),
            ListFn::TakeSsort => take_selection_sort_d(n, xs, out),
        }
    }

    /// The upper bounds on the cost of demanding `out`, as
    /// `(description, bound)`. Selection sort is only bounded when its fuel
    /// covers the list.
    pub fn bounds(self, arg: u32, xs: &[u32], out: &ApproxValue) -> Vec<(&'static str, u64)> {
        let (a, len) = (arg as u64, xs.len() as u64);
        let size = || size_x1(out);
        match self {
            ListFn::Take => vec![("1 + n", 1 + a), ("sizeX1(out)", size())],
            ListFn::Insert => vec![
                ("leb_count + 1", leb_count(arg, xs) + 1),
                ("sizeX1(out)", size()),
                ("length + 1", len + 1),
            ],
            ListFn::Isort => vec![("(sizeX1(out) + 1) * (length + 1)", (size() + 1) * (len + 1))],
            ListFn::Select => vec![("length + 1", len + 1)],
            ListFn::Ssort if a >= len => vec![("sizeX1(out) * (length + 1)", size() * (len + 1))],
            ListFn::Ssort => vec![],
            ListFn::TakeIsort => vec![("(n + 1) * (length + 2) + 1", (a + 1) * (len + 2) + 1)],
            ListFn::TakeSsort => vec![("n * (length + 2) + 1", a * (len + 2) + 1)],
        }
    }

    /// The arguments the suites try for a list of length `len`.
    fn args(self, len: usize, max_elem: u32) -> Vec<u32> {
        match self {
            ListFn::Take | ListFn::TakeIsort | ListFn::TakeSsort => (0..=len as u32 + 1).collect(),
            ListFn::Insert | ListFn::Select => (0..=max_elem).collect(),
            ListFn::Isort => vec![0],
            ListFn::Ssort => vec![len as u32, len as u32 + 1],
        }
    }
}

/// Runs `check` on every call the list suites make for the input `xs`:
/// each function with each argument and each valid output demand.
fn each_call(
    xs: &[u32],
    max_elem: u32,
    mut check: impl FnMut(ListFn, u32, &ApproxValue, Result<Tick<ApproxValue>, Absurd>),
) {
    for f in ListFn::ALL {
        for arg in f.args(xs.len(), max_elem) {
            for out in f.demands(arg, xs) {
                check(f, arg, &out, f.demand(arg, xs, &out));
            }
        }
    }
}

/// The cost bounds of the list functions, exhaustively over lists of
/// length at most `max_len` with elements in `0..=max_elem`.
pub fn stdlib_costs(max_len: usize, max_elem: u32) -> Outcome {
    let parts = lists(max_len, max_elem)
        .par_iter()
        .map(|xs| {
            let mut p = Partial::default();
            each_call(xs, max_elem, |f, arg, out, r| {
                let what = || format!("{} {arg} {} demanded {out}", f.name(), show(xs));
                match r {
                    Ok(d) => {
                        for (name, bound) in f.bounds(arg, xs, out) {
                            p.le(d.cost, bound, || format!("{}: cost vs {name}", what()));
                        }
                    }
                    Err(e) => p.holds(false, || format!("{}: {e}", what())),
                }
            });
            p
        })
        .collect();
    Outcome::collect("stdlib-costs", parts)
}

/// Functional correctness of the list demand functions: every input demand
/// approximates the input.
pub fn stdlib_approx(max_len: usize, max_elem: u32) -> Outcome {
    let parts = lists(max_len, max_elem)
        .par_iter()
        .map(|xs| {
            let mut p = Partial::default();
            each_call(xs, max_elem, |f, arg, out, r| {
                let ok = r.as_ref().is_ok_and(|d| demand_ok(&d.value, xs));
                p.holds(ok, || {
                    format!(
                        "{} {arg} {} demanded {out}: input demand {r:?}",
                        f.name(),
                        show(xs)
                    )
                });
            });
            p
        })
        .collect();
    Outcome::collect("stdlib-approx", parts)
}

// ---------------------------------------------------------------------------
// Queues, one operation at a time

/// The banker's queue inequalities `cost + Φ(in) ≤ budget + Φ(out)` for
/// push and pop on every well-formed queue of at most `max` elements.
pub fn banker_ops(budget: u64, max: usize) -> Outcome {
    let parts = banker::queues(max, 2)
        .par_iter()
        .map(|q| {
            let mut p = Partial::default();
            for x in 0..2 {
                for out in banker::demands(&banker::push(q, x)) {
                    let what = || format!("push {x} onto {q:?} demanded {out:?}");
                    match banker::push_d(q, x, &out) {
                        Ok(d) => {
                            let qd = &d.value.0;
                            p.holds(qd.value().is_some_and(|a| banker::approximates(a, q)), what);
                            let lhs = d.cost + potential_t(qd, banker::potential);
                            p.le(lhs, budget + banker::potential(&out), what);
                        }
                        Err(e) => p.holds(false, || format!("{}: {e}", what())),
                    }
                }
            }
            for out in banker::pop_demands(q) {
                let what = || format!("pop {q:?} demanded {out:?}");
                let phi_out = match &out {
                    PopDemand::None => 0,
                    PopDemand::Some(_, r) => potential_t(r, banker::potential),
                };
                match banker::pop_d(q, &out) {
                    Ok(d) => {
                        p.holds(d.value.value().is_some_and(|a| banker::approximates(a, q)), what);
                        let lhs = d.cost + potential_t(&d.value, banker::potential);
                        p.le(lhs, budget + phi_out, what);
                    }
                    Err(e) => p.holds(false, || format!("{}: {e}", what())),
                }
            }
            p
        })
        .collect();
    Outcome::collect("banker-ops", parts)
}

/// Compares the banker's potential of `samples` random queue demands with
/// an independent count of demanded front cells.
pub fn banker_potential_random(samples: usize, seed: u64) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut p = Partial::default();
    for _ in 0..samples {
        let nf = rng.gen_range(0..=6usize);
        let nb = rng.gen_range(0..=nf);
        let q = banker::BQueue {
            nfront: nf,
            front: (0..nf).map(|_| rng.gen_range(0..4)).collect(),
            nback: nb,
            back: (0..nb).map(|_| rng.gen_range(0..4)).collect(),
        };
        let ds = banker::demands(&q);
        let d = &ds[rng.gen_range(0..ds.len())];
        let mut cells = 0i64;
        let mut cur = &d.front;
        while let Some(ApproxValue::ConsA(_, t)) = cur.unthunk() {
            cells += 1;
            cur = t;
        }
        let expect = (2 * (cells - nb as i64)).max(0) as u64;
        let got = banker::potential(d);
        p.holds(got == expect, || {
            format!("potential of {d:?} is {got}, expected {expect}")
        });
    }
    Outcome::collect("banker-potential", vec![p])
}

/// The implicit queue inequalities for push and pop on every queue
/// reachable by at most `ops` operations.
pub fn implicit_ops(push_budget: u64, pop_budget: u64, ops: usize) -> Outcome {
    let queues: Vec<_> = implicit::reachable(ops, 2).into_iter().collect();
    let parts = queues
        .par_iter()
        .map(|q| {
            let mut p = Partial::default();
            for x in 0..2 {
                for out in implicit::approximations(&implicit::push_atom(q, x)) {
                    let what = || format!("push {x} onto {q} demanded {out}");
                    match implicit::push_d(q, &Elem::Atom(x), &out) {
                        Ok(d) => {
                            let qd = &d.value.0;
                            p.holds(qd.value().is_some_and(|a| implicit::approximates(a, q)), what);
                            let lhs = d.cost + potential_t(qd, implicit::potential);
                            p.le(lhs, push_budget + implicit::potential(&out), what);
                        }
                        Err(e) => p.holds(false, || format!("{}: {e}", what())),
                    }
                }
            }
            for out in implicit::pop_demands(q) {
                let what = || format!("pop {q} demanded {out:?}");
                let phi_out = match &out {
                    Some(T::Thunk((_, r))) => potential_t(r, implicit::potential),
                    _ => 0,
                };
                match implicit::pop_d(q, &out) {
                    Ok(d) => {
                        p.holds(
                            d.value.value().is_some_and(|a| implicit::approximates(a, q)),
                            what,
                        );
                        let lhs = d.cost + potential_t(&d.value, implicit::potential);
                        p.le(lhs, pop_budget + phi_out, what);
                    }
                    Err(e) => p.holds(false, || format!("{}: {e}", what())),
                }
            }
            p
        })
        .collect();
    Outcome::collect("implicit-ops", parts)
}

// ---------------------------------------------------------------------------
// Traces

fn show_trace(t: &[lazycost_core::trace::Event]) -> String {
    t.iter().map(|e| e.to_string()).collect::<Vec<_>>().join("; ")
}

/// Checks every trace of at most `max_len` events over the values `{0, 1}`,
/// skipping events that refer to missing versions.
pub fn traces<I: QueueImpl>(max_len: usize, budgets: &Budgets) -> Outcome {
    let all: Vec<_> = (0..=max_len).flat_map(|n| enumerate_traces(n, 2)).collect();
    let results: Vec<Result<_, TraceError>> = all
        .par_iter()
        .map(|t| check_trace::<I>(t, budgets, false, DEFAULT_STATE_CAP))
        .collect();
    let mut out = Outcome::new(format!("{}-traces", I::name()));
    for (t, r) in all.iter().zip(results) {
        out.checked += 1;
        match r {
            Ok(r) => {
                out.slack(r.slack);
                if !r.passed() {
                    let failures: Vec<String> = r.failures.iter().map(|f| f.to_string()).collect();
                    out.violation(format!("[{}]: {}", show_trace(t), failures.join("; ")));
                }
            }
            Err(e @ TraceError::TooManyStates { .. }) => {
                out.resource_cap
                    .get_or_insert(format!("[{}]: {e}", show_trace(t)));
            }
            Err(e) => out.violation(format!("[{}]: {e}", show_trace(t))),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use lazycost_core::trace::{Banker, Implicit};

    #[test]
    fn small_suites_pass() {
        assert!(stdlib_costs(2, 2).passed());
        assert!(stdlib_approx(2, 2).passed());
        assert!(banker_ops(banker::BUDGET, 3).passed());
        assert!(implicit_ops(implicit::PUSH_BUDGET, implicit::POP_BUDGET, 3).passed());
        assert!(banker_potential_random(20, 1).passed());
        let r = traces::<Banker>(3, &Banker::budgets());
        assert!(r.passed(), "{r:?}");
        assert!(r.worst_slack.unwrap() >= 0);
        assert!(traces::<Implicit>(3, &Implicit::budgets()).passed());
    }

    #[test]
    fn starved_budgets_fail() {
        let r = banker_ops(0, 2);
        assert!(!r.passed() && r.counterexample.is_some());
        let r = implicit_ops(1, implicit::POP_BUDGET, 2);
        assert!(!r.passed() && r.counterexample.is_some());
    }

    #[test]
    fn select_demand_enumeration() {
        // Element ⊥ or defined, times ⊥ or a thunked approximation of [1].
        assert_eq!(select_demands(0, &[1]).len(), 2 * 5);
    }
}

//! Lazy list functions on natural numbers with hand-written demand functions.
//!
//! Each function comes in three flavours:
//!
//! * the pure function on `&[u32]`;
//! * its demand function (suffix `_d`): given the total input and a demand on
//!   the output, the cost of lazily producing that much output and the least
//!   demand on the input list, as a `T (listA nat)` (`Bot` or a thunk);
//! * its clairvoyant translation (suffix `_a`): run on an approximation of
//!   the input, every suspension may be skipped or run; a demand function is
//!   validated by checking that its answer is the cheapest clairvoyant run
//!   producing the demanded output (see [`check_agreement`]).
//!
//! Every function call costs one tick, taken before anything else. Natural
//! numbers are not approximated: heads of demanded cells are always defined
//! and a demand on an output head is ignored.
//!
//! `insert_d` differs from the textbook transcription in one branch. When
//! the inserted element goes in front (`y > x`), the output tail *is* the
//! input list, so the input demand is the demand on the output tail, joined
//! with the first cell of the input: deciding `y > x` already evaluated it.
//! Returning only the tail demand would undercount the comparison whenever
//! the output tail is not demanded.

use alloc::vec::Vec;
use core::fmt;

use crate::lattice::{join, less_defined, ApproxValue, Tick};
use crate::nondet::Branches;

type A = ApproxValue;

/// A demand function received an output demand that cannot describe its
/// output.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Absurd {
    pub function: &'static str,
    pub out: ApproxValue,
}

impl fmt::Display for Absurd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: impossible output demand {}", self.function, self.out)
    }
}

type DResult = Result<Tick<ApproxValue>, Absurd>;

// ---------------------------------------------------------------------------
// Size measures and helpers

/// Number of cells of a thunked list demand; a terminal `nil` weighs
/// `nil_weight`, a terminal `Bot` weighs nothing.
pub fn size_x(nil_weight: u64, xs: &ApproxValue) -> u64 {
    match xs {
        A::Thunk(l) => match &**l {
            A::NilA => nil_weight,
            A::ConsA(_, t) => 1 + size_x(nil_weight, t),
            _ => 0,
        },
        _ => 0,
    }
}

/// [`size_x`] with `nil` weighing one, on an unthunked list demand.
pub fn size_x1(xs: &ApproxValue) -> u64 {
    size_x(1, &A::thunk(xs.clone()))
}

/// Number of elements `y` of `xs` with `y <= x`.
pub fn leb_count(x: u32, xs: &[u32]) -> u64 {
    xs.iter().filter(|&&y| y <= x).count() as u64
}

/// The fully defined `listA` of `xs`.
pub fn exact_list(xs: &[u32]) -> ApproxValue {
    xs.iter()
        .rev()
        .fold(A::NilA, |t, &x| A::cons(A::thunk(A::NatA(x)), A::thunk(t)))
}

/// Does the list demand `a` (a `listA`) approximate `xs`?
pub fn approximates_list(a: &ApproxValue, xs: &[u32]) -> bool {
    crate::lattice::is_approx(a, &crate::lattice::TotalValue::nat_list(xs))
}

/// Every list of length at most `max_len` over `0..=max_elem`, shortest
/// first.
pub fn lists(max_len: usize, max_elem: u32) -> Vec<Vec<u32>> {
    let mut out = alloc::vec![Vec::new()];
    let mut layer = alloc::vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for l in &layer {
            for x in 0..=max_elem {
                let mut l = l.clone();
                l.push(x);
                next.push(l);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// Every `listA` approximation of `xs`, including those with undefined
/// heads.
pub fn list_demands(xs: &[u32]) -> Vec<ApproxValue> {
    use crate::calculus::Ty;
    crate::lattice::approximations(&crate::lattice::TotalValue::nat_list(xs), &Ty::list(Ty::Nat))
}

/// Every `T (listA nat)` approximation of `xs` whose cells have defined
/// heads: the inputs a clairvoyant run can start from.
pub fn input_approximations(xs: &[u32]) -> Vec<ApproxValue> {
    let mut out = alloc::vec![A::Bot];
    match xs.split_first() {
        None => out.push(A::thunk(A::NilA)),
        Some((&x, rest)) => {
            for t in input_approximations(rest) {
                out.push(A::thunk(A::cons(A::thunk(A::NatA(x)), t)));
            }
        }
    }
    out
}

/// Runs `f` on the demand inside a thunk; an unneeded thunk costs nothing
/// and demands nothing.
fn thunk_d(out: &ApproxValue, f: impl FnOnce(&ApproxValue) -> DResult) -> DResult {
    match out {
        A::Bot => Ok(Tick::ret(A::Bot)),
        A::Thunk(d) => f(d),
        _ => Err(Absurd {
            function: "thunk",
            out: out.clone(),
        }),
    }
}

/// The clairvoyant suspension: skip (`Bot`) or run now (`Thunk`).
fn lazy(go: impl FnOnce() -> Branches<ApproxValue>) -> Branches<ApproxValue> {
    Branches::ret(A::Bot).union(go().map(A::thunk))
}

/// Forces a thunk; a skipped thunk kills the branch.
fn force(xs: &ApproxValue) -> Option<&ApproxValue> {
    xs.unthunk()
}

fn head_nat(h: &ApproxValue) -> Option<u32> {
    match h.unthunk() {
        Some(A::NatA(n)) => Some(*n),
        _ => None,
    }
}

// ---------------------------------------------------------------------------
// take

pub fn take(n: usize, xs: &[u32]) -> Vec<u32> {
    xs.iter().take(n).copied().collect()
}

pub fn take_d(n: usize, xs: &[u32], out: &ApproxValue) -> DResult {
    let r = match (n, xs, out) {
        (0, _, _) => Tick::ret(A::Bot),
        (_, [], _) => Tick::ret(A::thunk(A::NilA)),
        (_, [x, rest @ ..], A::ConsA(_, zs)) => {
            let ys = thunk_d(zs, |d| take_d(n - 1, rest, d))?;
            Tick::new(ys.cost, A::thunk(A::cons(A::thunk(A::NatA(*x)), ys.value)))
        }
        _ => {
            return Err(Absurd {
                function: "take",
                out: out.clone(),
            })
        }
    };
    Ok(r.plus(1))
}

pub fn take_a(n: usize, xs: &ApproxValue) -> Branches<ApproxValue> {
    let r = if n == 0 {
        Branches::ret(A::NilA)
    } else {
        match force(xs) {
            None => Branches::none(),
            Some(A::NilA) => Branches::ret(A::NilA),
            Some(A::ConsA(h, t)) => lazy(|| take_a(n - 1, t)).map(|ys| A::cons((**h).clone(), ys)),
            Some(_) => Branches::none(),
        }
    };
    r.tick()
}

// ---------------------------------------------------------------------------
// insertion sort

pub fn insert(x: u32, xs: &[u32]) -> Vec<u32> {
    match xs.split_first() {
        None => alloc::vec![x],
        Some((&y, ys)) if y <= x => {
            let mut out = alloc::vec![y];
            out.extend(insert(x, ys));
            out
        }
        Some(_) => {
            let mut out = alloc::vec![x];
            out.extend_from_slice(xs);
            out
        }
    }
}

pub fn insertion_sort(xs: &[u32]) -> Vec<u32> {
    match xs.split_first() {
        None => Vec::new(),
        Some((&y, ys)) => insert(y, &insertion_sort(ys)),
    }
}

pub fn insert_d(x: u32, xs: &[u32], out: &ApproxValue) -> DResult {
    let absurd = || Absurd {
        function: "insert",
        out: out.clone(),
    };
    let A::ConsA(_, zs) = out else {
        return Err(absurd());
    };
    let r = match xs.split_first() {
        None => Tick::ret(A::thunk(A::NilA)),
        Some((&y, ys)) if y <= x => {
            let ys_d = thunk_d(zs, |d| insert_d(x, ys, d))?;
            Tick::new(ys_d.cost, A::thunk(A::cons(A::thunk(A::NatA(y)), ys_d.value)))
        }
        Some((&y, _)) => {
            let cell = A::thunk(A::cons(A::thunk(A::NatA(y)), A::Bot));
            Tick::ret(join(&cell, zs).map_err(|_| absurd())?)
        }
    };
    Ok(r.plus(1))
}

pub fn insertion_sort_d(xs: &[u32], out: &ApproxValue) -> DResult {
    let r = match xs.split_first() {
        None => Tick::ret(A::thunk(A::NilA)),
        Some((&y, ys)) => {
            let zs = insertion_sort(ys);
            let zs_d = insert_d(y, &zs, out)?;
            let ys_d = thunk_d(&zs_d.value, |d| insertion_sort_d(ys, d))?;
            Tick::new(
                zs_d.cost + ys_d.cost,
                A::thunk(A::cons(A::thunk(A::NatA(y)), ys_d.value)),
            )
        }
    };
    Ok(r.plus(1))
}

pub fn insert_a(x: u32, xs: &ApproxValue) -> Branches<ApproxValue> {
    let r = match force(xs) {
        None => Branches::none(),
        Some(A::NilA) => Branches::ret(A::cons(A::thunk(A::NatA(x)), A::thunk(A::NilA))),
        Some(A::ConsA(h, t)) => match head_nat(h) {
            None => Branches::none(),
            Some(y) if y <= x => lazy(|| insert_a(x, t)).map(|zs| A::cons((**h).clone(), zs)),
            Some(_) => Branches::ret(A::cons(A::thunk(A::NatA(x)), xs.clone())),
        },
        Some(_) => Branches::none(),
    };
    r.tick()
}

pub fn insertion_sort_a(xs: &ApproxValue) -> Branches<ApproxValue> {
    let r = match force(xs) {
        None => Branches::none(),
        Some(A::NilA) => Branches::ret(A::NilA),
        Some(A::ConsA(h, t)) => match head_nat(h) {
            None => Branches::none(),
            Some(y) => lazy(|| insertion_sort_a(t)).bind(|zs| insert_a(y, &zs)),
        },
        Some(_) => Branches::none(),
    };
    r.tick()
}

// ---------------------------------------------------------------------------
// selection sort

/// The least of `x` and `xs`, and the remaining elements.
pub fn select(x: u32, xs: &[u32]) -> (u32, Vec<u32>) {
    match xs.split_first() {
        None => (x, Vec::new()),
        Some((&h, t)) => {
            let (keep, pass) = if x <= h { (h, x) } else { (x, h) };
            let (j, mut rest) = select(pass, t);
            rest.insert(0, keep);
            (j, rest)
        }
    }
}

/// Selection sort with `fuel` rounds; out of fuel, the result is `[]`.
pub fn selection_sort(xs: &[u32], fuel: usize) -> Vec<u32> {
    match (fuel, xs.split_first()) {
        (0, _) | (_, None) => Vec::new(),
        (_, Some((&x, r))) => {
            let (y, rest) = select(x, r);
            let mut out = alloc::vec![y];
            out.extend(selection_sort(&rest, fuel - 1));
            out
        }
    }
}

/// Demand of `select x xs` on `xs`. Finding the minimum traverses the whole
/// list, so the demand is always the entire list.
pub fn select_d(x: u32, xs: &[u32], out: &ApproxValue) -> DResult {
    if !matches!(out, A::PairA(..)) {
        return Err(Absurd {
            function: "select",
            out: out.clone(),
        });
    }
    let r = match xs.split_first() {
        None => Tick::ret(A::thunk(A::NilA)),
        Some((&h, t)) => {
            let rest = select_d(x.min(h), t, out)?;
            Tick::new(rest.cost, A::thunk(A::cons(A::thunk(A::NatA(h)), rest.value)))
        }
    };
    Ok(r.plus(1))
}

pub fn selection_sort_d(xs: &[u32], fuel: usize, out: &ApproxValue) -> DResult {
    let r = match (fuel, xs.split_first()) {
        (0, _) => Tick::ret(A::Bot),
        (_, None) => Tick::ret(A::thunk(A::NilA)),
        (_, Some((&x, r))) => {
            let A::ConsA(_, zs) = out else {
                return Err(Absurd {
                    function: "selection_sort",
                    out: out.clone(),
                });
            };
            let (y, rest) = select(x, r);
            let rest_d = thunk_d(zs, |d| selection_sort_d(&rest, fuel - 1, d))?;
            let r_d = select_d(x, r, &A::pair(A::thunk(A::NatA(y)), rest_d.value))?;
            Tick::new(
                rest_d.cost + r_d.cost,
                A::thunk(A::cons(A::thunk(A::NatA(x)), r_d.value)),
            )
        }
    };
    Ok(r.plus(1))
}

pub fn select_a(x: u32, xs: &ApproxValue) -> Branches<ApproxValue> {
    let r = match force(xs) {
        None => Branches::none(),
        Some(A::NilA) => Branches::ret(A::pair(A::thunk(A::NatA(x)), A::thunk(A::NilA))),
        Some(A::ConsA(h, t)) => match head_nat(h) {
            None => Branches::none(),
            Some(h) => {
                let (keep, pass) = if x <= h { (h, x) } else { (x, h) };
                select_a(pass, t).bind(|p| match p {
                    A::PairA(j, rest) => {
                        Branches::ret(A::pair(*j, A::thunk(A::cons(A::thunk(A::NatA(keep)), *rest))))
                    }
                    _ => Branches::none(),
                })
            }
        },
        Some(_) => Branches::none(),
    };
    r.tick()
}

pub fn selection_sort_a(xs: &ApproxValue, fuel: usize) -> Branches<ApproxValue> {
    let r = if fuel == 0 {
        Branches::ret(A::NilA)
    } else {
        match force(xs) {
            None => Branches::none(),
            Some(A::NilA) => Branches::ret(A::NilA),
            Some(A::ConsA(h, r)) => match head_nat(h) {
                None => Branches::none(),
                Some(x) => select_a(x, r).bind(|p| match p {
                    A::PairA(y, rest) => {
                        lazy(|| selection_sort_a(&rest, fuel - 1)).map(|zs| A::cons((*y).clone(), zs))
                    }
                    _ => Branches::none(),
                }),
            },
            Some(_) => Branches::none(),
        }
    };
    r.tick()
}

// ---------------------------------------------------------------------------
// compositions

pub fn take_insertion_sort(n: usize, xs: &[u32]) -> Vec<u32> {
    take(n, &insertion_sort(xs))
}

pub fn take_selection_sort(n: usize, xs: &[u32]) -> Vec<u32> {
    take(n, &selection_sort(xs, xs.len()))
}

pub fn take_insertion_sort_d(n: usize, xs: &[u32], out: &ApproxValue) -> DResult {
    let sorted = insertion_sort(xs);
    let s = take_d(n, &sorted, out)?;
    let xs_d = thunk_d(&s.value, |d| insertion_sort_d(xs, d))?;
    Ok(Tick::new(s.cost + xs_d.cost, xs_d.value))
}

/// The sort runs with fuel `xs.len()`.
pub fn take_selection_sort_d(n: usize, xs: &[u32], out: &ApproxValue) -> DResult {
    let sorted = selection_sort(xs, xs.len());
    let s = take_d(n, &sorted, out)?;
    let xs_d = thunk_d(&s.value, |d| selection_sort_d(xs, xs.len(), d))?;
    Ok(Tick::new(s.cost + xs_d.cost, xs_d.value))
}

pub fn take_insertion_sort_a(n: usize, xs: &ApproxValue) -> Branches<ApproxValue> {
    lazy(|| insertion_sort_a(xs)).bind(|s| take_a(n, &s))
}

pub fn take_selection_sort_a(n: usize, xs: &ApproxValue, fuel: usize) -> Branches<ApproxValue> {
    lazy(|| selection_sort_a(xs, fuel)).bind(|s| take_a(n, &s))
}

// ---------------------------------------------------------------------------
// agreement with the clairvoyant translations

/// Precomputed clairvoyant runs of one function on every head-defined
/// approximation of one input list.
pub struct ClairvoyantRuns {
    runs: Vec<(ApproxValue, Branches<ApproxValue>)>,
}

impl ClairvoyantRuns {
    pub fn new(xs: &[u32], run: impl Fn(&ApproxValue) -> Branches<ApproxValue>) -> Self {
        ClairvoyantRuns {
            runs: input_approximations(xs)
                .into_iter()
                .map(|a| {
                    let b = run(&a);
                    (a, b)
                })
                .collect(),
        }
    }
}

/// Checks a demand function's answer `dem` for output demand `out` against
/// the clairvoyant runs:
///
/// * **existence**: from every input at least as defined as `dem.value`,
///   some run costs exactly `dem.cost` and produces at least `out`;
/// * **minimality**: every run producing at least `out` costs at least
///   `dem.cost` and starts from an input at least as defined as `dem.value`.
///
/// Returns a description of the first failure.
pub fn check_agreement(
    runs: &ClairvoyantRuns,
    out: &ApproxValue,
    dem: &Tick<ApproxValue>,
) -> Result<(), alloc::string::String> {
    use alloc::format;
    for (input, branches) in &runs.runs {
        if let Some((n, a)) = branches.min_matching(|a| less_defined(out, a)) {
            if *n < dem.cost {
                return Err(format!(
                    "run from {input} produces {a} at cost {n}, below the demand cost {}",
                    dem.cost
                ));
            }
            if !less_defined(&dem.value, input) {
                return Err(format!(
                    "run from {input} produces {a}, but the demand requires {}",
                    dem.value
                ));
            }
        }
        if less_defined(&dem.value, input)
            && !branches
                .iter()
                .any(|(n, a)| *n == dem.cost && less_defined(out, a))
        {
            return Err(format!("no run from {input} produces {out} at cost {}", dem.cost));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn cell(x: u32, t: ApproxValue) -> ApproxValue {
        A::cons(A::thunk(A::NatA(x)), t)
    }

    #[test]
    fn size_measures() {
        assert_eq!(size_x(0, &A::Bot), 0);
        assert_eq!(size_x1(&cell(0, A::thunk(cell(1, A::Bot)))), 2);
        assert_eq!(size_x1(&A::NilA), 1);
        assert_eq!(size_x(0, &A::thunk(exact_list(&[1, 2]))), 2);
        assert_eq!(size_x(1, &A::thunk(exact_list(&[1, 2]))), 3);
    }

    #[test]
    fn leb_count_rows() {
        assert_eq!(leb_count(3, &[]), 0);
        assert_eq!(leb_count(3, &[1, 4, 2]), 2);
    }

    #[test]
    fn take_d_rows() {
        let r = take_d(0, &[1, 2], &A::NilA).unwrap();
        assert_eq!((r.cost, r.value), (1, A::Bot));
        let out = cell(1, A::thunk(A::NilA));
        let r = take_d(1, &[1, 2], &out).unwrap();
        assert_eq!(r.cost, 2);
        assert_eq!(r.value, A::thunk(cell(1, A::Bot)));
        let r = take_d(3, &[1], &exact_list(&[1])).unwrap();
        assert_eq!(r.value, A::thunk(exact_list(&[1])));
    }

    #[test]
    fn insert_d_rows() {
        let r = insert_d(5, &[], &cell(5, A::Bot)).unwrap();
        assert_eq!((r.cost, r.value), (1, A::thunk(A::NilA)));
        // 0 goes in front of [1, 2]: only the first cell is inspected.
        let r = insert_d(0, &[1, 2], &cell(0, A::Bot)).unwrap();
        assert_eq!((r.cost, r.value), (1, A::thunk(cell(1, A::Bot))));
    }

    #[test]
    fn insertion_sort_head_demand() {
        // head (isort [1, 2]): isort [1,2] and isort [2] and isort [] tick,
        // then insert 2 [] and insert 1 [2] each tick once.
        let r = insertion_sort_d(&[1, 2], &cell(1, A::Bot)).unwrap();
        assert_eq!(r.cost, 5);
        assert_eq!(r.value, A::thunk(exact_list(&[1, 2])));
    }

    #[test]
    fn pure_functions() {
        assert_eq!(insertion_sort(&[3, 1, 2]), vec![1, 2, 3]);
        assert_eq!(select(3, &[1, 4, 2]), (1, vec![3, 4, 2]));
        assert_eq!(selection_sort(&[3, 1, 2], 3), vec![1, 2, 3]);
        assert_eq!(selection_sort(&[3, 1, 2], 1), vec![1]);
        assert_eq!(take(2, &[5, 6, 7]), vec![5, 6]);
    }

    #[test]
    fn select_d_demands_whole_list() {
        let r = select_d(3, &[1, 4], &A::pair(A::thunk(A::NatA(1)), A::Bot)).unwrap();
        assert_eq!(r.cost, 3);
        assert_eq!(r.value, A::thunk(exact_list(&[1, 4])));
    }

    #[test]
    fn demand_functions_agree_with_clairvoyant_runs() {
        let xs = [2, 0, 1];
        let sorted = insertion_sort(&xs);
        let runs = ClairvoyantRuns::new(&xs, insertion_sort_a);
        for out in list_demands(&sorted) {
            let dem = insertion_sort_d(&xs, &out).unwrap();
            check_agreement(&runs, &out, &dem).unwrap();
        }
        let runs = ClairvoyantRuns::new(&xs, |a| take_selection_sort_a(2, a, xs.len()));
        for out in list_demands(&take_selection_sort(2, &xs)) {
            let dem = take_selection_sort_d(2, &xs, &out).unwrap();
            check_agreement(&runs, &out, &dem).unwrap();
        }
    }
}

//! Cost bounds, functional correctness and clairvoyant agreement of the list
//! demand functions, checked exhaustively on small inputs.

use lazycost_core::lattice::{less_defined, ApproxValue};
use lazycost_core::stdlib::*;

fn xs_demand_ok(d: &ApproxValue, xs: &[u32]) -> bool {
    match d {
        ApproxValue::Bot => true,
        ApproxValue::Thunk(l) => approximates_list(l, xs),
        _ => false,
    }
}

#[test]
fn take_bounds() {
    for xs in lists(4, 3) {
        for n in 0..=xs.len() + 1 {
            for out in list_demands(&take(n, &xs)) {
                let d = take_d(n, &xs, &out).unwrap();
                assert!(d.cost <= 1 + n as u64, "take {n} {xs:?} {out}");
                assert!(d.cost <= size_x1(&out), "take {n} {xs:?} {out}");
                assert!(xs_demand_ok(&d.value, &xs));
            }
        }
    }
}

#[test]
fn insert_bounds() {
    for xs in lists(4, 3) {
        for x in 0..=3 {
            for out in list_demands(&insert(x, &xs)) {
                let d = insert_d(x, &xs, &out).unwrap();
                let n = xs.len() as u64;
                assert!(d.cost <= leb_count(x, &xs) + 1, "insert {x} {xs:?} {out}");
                assert!(d.cost <= size_x1(&out), "insert {x} {xs:?} {out}");
                assert!(d.cost <= n + 1);
                assert!(xs_demand_ok(&d.value, &xs));
            }
        }
    }
}

#[test]
fn sort_bounds() {
    for xs in lists(4, 3) {
        let n = xs.len() as u64;
        for out in list_demands(&insertion_sort(&xs)) {
            let d = insertion_sort_d(&xs, &out).unwrap();
            assert!(d.cost <= (size_x1(&out) + 1) * (n + 1), "isort {xs:?} {out}");
            assert!(xs_demand_ok(&d.value, &xs));
        }
        for out in list_demands(&selection_sort(&xs, xs.len())) {
            let d = selection_sort_d(&xs, xs.len(), &out).unwrap();
            assert!(
                d.cost <= size_x1(&out) * (n + 1),
                "ssort {xs:?} {out} cost {}",
                d.cost
            );
            assert!(xs_demand_ok(&d.value, &xs));
        }
        for k in 0..=xs.len() + 1 {
            for out in list_demands(&take_insertion_sort(k, &xs)) {
                let d = take_insertion_sort_d(k, &xs, &out).unwrap();
                assert!(d.cost <= (k as u64 + 1) * (n + 2) + 1);
            }
            for out in list_demands(&take_selection_sort(k, &xs)) {
                let d = take_selection_sort_d(k, &xs, &out).unwrap();
                assert!(d.cost <= k as u64 * (n + 2) + 1, "tssort {k} {xs:?} {out}");
            }
        }
    }
}

#[test]
fn select_demands_everything() {
    for xs in lists(4, 3) {
        for x in 0..=3 {
            let (m, rest) = select(x, &xs);
            let full = ApproxValue::thunk(exact_list(&xs));
            for out in [
                ApproxValue::pair(ApproxValue::thunk(ApproxValue::NatA(m)), ApproxValue::Bot),
                ApproxValue::pair(ApproxValue::Bot, ApproxValue::thunk(exact_list(&rest))),
            ] {
                let d = select_d(x, &xs, &out).unwrap();
                assert_eq!(d.cost, xs.len() as u64 + 1);
                assert!(less_defined(&full, &d.value));
            }
        }
    }
}

#[test]
fn clairvoyant_agreement() {
    for xs in lists(3, 2) {
        let n = xs.len();
        let runs = ClairvoyantRuns::new(&xs, insertion_sort_a);
        for out in list_demands(&insertion_sort(&xs)) {
            check_agreement(&runs, &out, &insertion_sort_d(&xs, &out).unwrap())
                .unwrap_or_else(|e| panic!("isort {xs:?} {out}: {e}"));
        }
        let runs = ClairvoyantRuns::new(&xs, |a| selection_sort_a(a, n));
        for out in list_demands(&selection_sort(&xs, n)) {
            check_agreement(&runs, &out, &selection_sort_d(&xs, n, &out).unwrap())
                .unwrap_or_else(|e| panic!("ssort {xs:?} {out}: {e}"));
        }
        for x in 0..=2 {
            let runs = ClairvoyantRuns::new(&xs, |a| insert_a(x, a));
            for out in list_demands(&insert(x, &xs)) {
                check_agreement(&runs, &out, &insert_d(x, &xs, &out).unwrap())
                    .unwrap_or_else(|e| panic!("insert {x} {xs:?} {out}: {e}"));
            }
        }
        for k in 0..=n + 1 {
            let runs = ClairvoyantRuns::new(&xs, |a| take_a(k, a));
            for out in list_demands(&take(k, &xs)) {
                check_agreement(&runs, &out, &take_d(k, &xs, &out).unwrap())
                    .unwrap_or_else(|e| panic!("take {k} {xs:?} {out}: {e}"));
            }
            let runs = ClairvoyantRuns::new(&xs, |a| take_insertion_sort_a(k, a));
            for out in list_demands(&take_insertion_sort(k, &xs)) {
                check_agreement(&runs, &out, &take_insertion_sort_d(k, &xs, &out).unwrap())
                    .unwrap_or_else(|e| panic!("take-isort {k} {xs:?} {out}: {e}"));
            }
        }
    }
}

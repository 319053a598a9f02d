//! The demand table of the eight-event example program, and the amortized
//! cost checks over every trace of up to six events.

use lazycost_core::trace::*;

fn table<I: QueueImpl>(t: &[Event]) -> (Evaluated<I::Q>, DemandTable<I::D>) {
    let ev = eval_trace::<I>(t, true).unwrap();
    let dt = demand_trace::<I>(t, &ev).unwrap();
    (ev, dt)
}

fn cell<I: QueueImpl>(ev: &Evaluated<I::Q>, dt: &DemandTable<I::D>, i: usize, j: usize) -> String {
    I::render(ev.versions[i].as_ref().unwrap(), dt.at(i, j).unwrap())
}

#[test]
fn example_demand_table() {
    let (ev, dt) = table::<Banker>(&example_trace());
    let q2: Vec<String> = (2..=8).map(|j| cell::<Banker>(&ev, &dt, 2, j)).collect();
    assert_eq!(
        q2,
        [
            "(a:nil, b:⊥)",
            "(a:nil, b:⊥)",
            "(⊥, ⊥)",
            "(⊥, ⊥)",
            "(⊥, ⊥)",
            "(⊥, ⊥)",
            "(⊥, ⊥)"
        ]
    );
    let q4: Vec<String> = (4..=8).map(|j| cell::<Banker>(&ev, &dt, 4, j)).collect();
    // The last pop of q4 (event 7) still demands its first front cell.
    assert_eq!(q4, ["(a:b:⊥, ⊥)", "(a:b:⊥, ⊥)", "(a:⊥, ⊥)", "(a:⊥, ⊥)", "(⊥, ⊥)"]);
    assert_eq!(cell::<Banker>(&ev, &dt, 5, 6), "(b:⊥, ⊥)");
    assert_eq!(cell::<Banker>(&ev, &dt, 5, 7), "(⊥, ⊥)");
    assert_eq!(cell::<Banker>(&ev, &dt, 3, 4), "(a:b:⊥, ⊥)");
    assert_eq!(cell::<Banker>(&ev, &dt, 1, 2), "(a:nil, ⊥)");
    // The length-indexed reversal never demands the back list of q0.
    assert_eq!(cell::<Banker>(&ev, &dt, 0, 1), "(nil, ⊥)");
    for i in 0..8 {
        assert_eq!(cell::<Banker>(&ev, &dt, i, 8), "(⊥, ⊥)");
    }
}

#[test]
fn example_costs() {
    let t = example_trace();
    let r = check_trace::<Banker>(&t, &Banker::budgets(), true, DEFAULT_STATE_CAP).unwrap();
    assert!(r.passed(), "{:?}", r.failures);
    assert_eq!(r.budget, 56);
    assert!(r.clairvoyant_cost <= r.demand_cost);
    // Popping q4 a second time re-uses the already evaluated front cell.
    let once = check_trace::<Banker>(&t[..7], &Banker::budgets(), true, DEFAULT_STATE_CAP).unwrap();
    assert!(r.clairvoyant_cost - once.clairvoyant_cost <= 7);
    let r = check_trace::<Implicit>(&t, &Implicit::budgets(), true, DEFAULT_STATE_CAP).unwrap();
    assert!(r.passed(), "{:?}", r.failures);
}

fn exhaustive<I: QueueImpl>(max_len: usize) -> (usize, i64) {
    let mut count = 0;
    let mut slack = i64::MAX;
    for len in 0..=max_len {
        for t in enumerate_traces(len, 2) {
            let r = check_trace::<I>(&t, &I::budgets(), false, DEFAULT_STATE_CAP).unwrap();
            assert!(
                r.passed(),
                "{}: {:?} on {}",
                I::name(),
                r.failures,
                t.iter().map(|e| e.to_string()).collect::<Vec<_>>().join("; ")
            );
            slack = slack.min(r.slack);
            count += 1;
        }
    }
    (count, slack)
}

#[test]
fn banker_amortized_and_persistent() {
    let (count, slack) = exhaustive::<Banker>(6);
    assert_eq!(count, 1 + 1 + 4 + 28 + 280 + 3640 + 58240);
    assert!(slack >= 0);
}

#[test]
fn implicit_amortized_and_persistent() {
    let (_, slack) = exhaustive::<Implicit>(6);
    assert!(slack >= 0);
}

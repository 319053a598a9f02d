//! Printing and parsing are inverse on demands, types, programs, traces and
//! queue states.

use lazycost::corpus::programs;
use lazycost::{queues, syntax};
use lazycost_core::banker::{self, BQueue};
use lazycost_core::calculus::Ty;
use lazycost_core::implicit::{self, IQueue};
use lazycost_core::lattice::{approximations, TotalValue};
use lazycost_core::trace::{enumerate_traces, Event};
use proptest::prelude::*;

fn ty() -> impl Strategy<Value = Ty> {
    let leaf = prop_oneof![Just(Ty::Nat), Just(Ty::Bool)];
    leaf.prop_recursive(4, 16, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Ty::list),
            inner.clone().prop_map(Ty::thunked),
            (inner.clone(), inner).prop_map(|(a, b)| Ty::prod(a, b)),
        ]
    })
}

fn event(len: usize) -> impl Strategy<Value = Event> {
    let at = 0..len.max(1);
    prop_oneof![
        Just(Event::empty()),
        (0..4u32, at.clone()).prop_map(|(x, i)| Event::push(x, i)),
        at.prop_map(Event::pop),
    ]
}

fn banker_queue(q: &BQueue) -> String {
    let list = |xs: &[u32]| xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
    format!(
        "(queue {} ({}) {} ({}))",
        q.nfront,
        list(&q.front),
        q.nback,
        list(&q.back)
    )
}

#[test]
fn corpus_programs_round_trip() {
    for (name, p) in programs() {
        let again = syntax::program(&p.to_string()).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(again, p, "{name}");
    }
}

#[test]
fn enumerated_traces_round_trip() {
    for t in (0..=4).flat_map(|n| enumerate_traces(n, 2)) {
        assert_eq!(queues::trace(&queues::render_trace(&t)).unwrap(), t);
    }
}

proptest! {
    #[test]
    fn types_round_trip(t in ty()) {
        let s = lazycost::sexpr::read_one(&t.to_string()).unwrap();
        prop_assert_eq!(syntax::ty(&s).unwrap(), t);
    }

    #[test]
    fn demands_round_trip(xs in prop::collection::vec(0..5u32, 0..5)) {
        let ty = Ty::thunked(Ty::list(Ty::Nat));
        let v = TotalValue::nat_list(&xs);
        for a in approximations(&v, &ty) {
            prop_assert_eq!(syntax::demand(&a.to_string()).unwrap(), a);
        }
        prop_assert_eq!(syntax::total(&v.to_string()).unwrap(), v);
    }

    #[test]
    fn traces_round_trip(t in (1..10usize).prop_flat_map(|n| prop::collection::vec(event(n), n))) {
        prop_assert_eq!(queues::trace(&queues::render_trace(&t)).unwrap(), t);
    }

    #[test]
    fn queue_states_round_trip(xs in prop::collection::vec(prop::option::of(0..4u32), 0..20)) {
        let mut q = BQueue::empty();
        let mut iq = IQueue::Nil;
        for x in xs {
            match x {
                Some(x) => {
                    q = banker::push(&q, x);
                    iq = implicit::push_atom(&iq, x);
                }
                None => {
                    q = banker::pop(&q).map_or(q, |(_, r)| r);
                    iq = implicit::pop(&iq).map_or(iq, |(_, r)| r);
                }
            }
        }
        prop_assert_eq!(queues::banker_state(&banker_queue(&q)).unwrap(), q);
        prop_assert_eq!(queues::implicit_state(&iq.to_string()).unwrap(), iq);
    }
}

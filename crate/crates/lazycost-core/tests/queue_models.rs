//! Both persistent queues agree with a `VecDeque` on random operation
//! sequences, and their demand functions stay within the queue they are
//! applied to.

use std::collections::VecDeque;

use lazycost_core::banker::{self, BQueue};
use lazycost_core::implicit::{self, Elem, IQueue};
use proptest::prelude::*;

/// `Some(x)` pushes `x`, `None` pops.
fn ops() -> impl Strategy<Value = Vec<Option<u32>>> {
    prop::collection::vec(prop::option::weighted(0.6, 0..4u32), 0..40)
}

/// Short sequences, for checks that enumerate every demand on the result.
fn few_ops() -> impl Strategy<Value = Vec<Option<u32>>> {
    prop::collection::vec(prop::option::weighted(0.6, 0..4u32), 0..10)
}

proptest! {
    #[test]
    fn banker_queue_is_fifo(ops in ops()) {
        let mut q = BQueue::empty();
        let mut model = VecDeque::new();
        for op in ops {
            match op {
                Some(x) => {
                    q = banker::push(&q, x);
                    model.push_back(x);
                }
                None => match banker::pop(&q) {
                    Some((x, rest)) => {
                        prop_assert_eq!(Some(x), model.pop_front());
                        q = rest;
                    }
                    None => prop_assert!(model.is_empty()),
                },
            }
            prop_assert!(q.well_formed());
            prop_assert_eq!(q.to_vec(), Vec::from(model.clone()));
        }
    }

    #[test]
    fn implicit_queue_is_fifo(ops in ops()) {
        let mut q = IQueue::Nil;
        let mut model = VecDeque::new();
        for op in ops {
            match op {
                Some(x) => {
                    q = implicit::push_atom(&q, x);
                    model.push_back(x);
                }
                None => match implicit::pop(&q) {
                    Some((x, rest)) => {
                        prop_assert_eq!(x, Elem::Atom(model.pop_front().unwrap()));
                        q = rest;
                    }
                    None => prop_assert!(model.is_empty()),
                },
            }
            prop_assert_eq!(q.to_vec(), Vec::from(model.clone()));
        }
    }

    #[test]
    fn banker_potential_is_monotone(ops in few_ops()) {
        let mut q = BQueue::empty();
        for x in ops.into_iter().flatten() {
            q = banker::push(&q, x);
        }
        let ds = banker::demands(&q);
        for a in &ds {
            for b in &ds {
                if banker::less_defined_q(a, b) {
                    prop_assert!(banker::potential(a) <= banker::potential(b), "{:?} {:?}", a, b);
                }
            }
        }
    }

    #[test]
    fn pop_demands_approximate_the_input(ops in few_ops()) {
        let mut q = BQueue::empty();
        let mut iq = IQueue::Nil;
        for op in ops {
            match op {
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
        for out in banker::pop_demands(&q) {
            let d = banker::pop_d(&q, &out).unwrap();
            prop_assert!(d.value.value().is_none_or(|a| banker::approximates(a, &q)));
        }
        for out in implicit::pop_demands(&iq) {
            let d = implicit::pop_d(&iq, &out).unwrap();
            prop_assert!(d.value.value().is_none_or(|a| implicit::approximates(a, &iq)));
        }
    }
}

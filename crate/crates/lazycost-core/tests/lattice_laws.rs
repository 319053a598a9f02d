//! Partial-order and join laws of the definedness lattice, checked
//! exhaustively on small approximations and by random testing on larger ones.

use lazycost_core::calculus::Ty;
use lazycost_core::lattice::*;
use proptest::prelude::*;

type A = ApproxValue;

/// The types whose approximations are enumerated, with lists of length ≤ 3.
fn types() -> Vec<Ty> {
    vec![
        Ty::thunked(Ty::list(Ty::Nat)),
        Ty::thunked(Ty::list(Ty::thunked(Ty::Bool))),
        Ty::prod(Ty::thunked(Ty::Bool), Ty::thunked(Ty::list(Ty::Bool))),
    ]
}

fn universe(ty: &Ty) -> Vec<A> {
    let depth = if matches!(ty, Ty::Prod(..)) { 2 } else { 3 };
    all_approximations(ty, depth, &[0, 1])
}

#[test]
fn partial_order_laws() {
    for ty in types() {
        let u = universe(&ty);
        for a in &u {
            assert!(less_defined(a, a), "reflexivity {a}");
            for b in &u {
                let ab = less_defined(a, b);
                if ab && less_defined(b, a) {
                    assert_eq!(a, b, "antisymmetry");
                }
                if !ab {
                    continue;
                }
                for c in &u {
                    if less_defined(b, c) {
                        assert!(less_defined(a, c), "transitivity {a} {b} {c}");
                    }
                }
            }
        }
    }
}

#[test]
fn bottom_is_least() {
    for ty in types() {
        for a in universe(&ty) {
            if matches!(ty, Ty::Thunked(_)) {
                assert!(less_defined(&A::Bot, &a));
            }
            if a != A::Bot {
                assert!(!less_defined(&a, &A::Bot), "{a}");
            }
        }
    }
}

#[test]
fn join_is_the_supremum() {
    for ty in types() {
        let u = universe(&ty);
        for a in &u {
            for b in &u {
                let uppers: Vec<&A> = u
                    .iter()
                    .filter(|c| less_defined(a, c) && less_defined(b, c))
                    .collect();
                match join(a, b) {
                    Ok(j) => {
                        assert!(less_defined(a, &j) && less_defined(b, &j), "upper bound {a} {b}");
                        for c in &uppers {
                            assert!(less_defined(&j, c), "least {a} {b} {c}");
                        }
                        assert!(shaped_by(&j, &ty));
                    }
                    // Within the universe an upper bound is itself a value,
                    // so a failed join must mean there is none.
                    Err(_) => assert!(uppers.is_empty(), "{a} ⊔ {b} failed"),
                }
            }
        }
    }
}

#[test]
fn approximation_is_downward_closed() {
    let ty = Ty::thunked(Ty::list(Ty::Nat));
    let u = universe(&ty);
    for v in totals(&ty, 3, &[0, 1]) {
        let below: Vec<&A> = u.iter().filter(|a| is_approx(a, &v)).collect();
        assert_eq!(below.len(), approximations(&v, &ty).len());
        for a in &u {
            for b in &below {
                if less_defined(a, b) {
                    assert!(is_approx(a, &v), "{a} ≤ {b} ≺ {v}");
                }
            }
        }
        assert!(below.contains(&&least_approx(&v, &ty)));
        assert!(below.contains(&&exact(&v, &ty)));
    }
}

/// An approximation of the thunked list `xs`: `cut` cells are evaluated,
/// and the head of cell `i` is evaluated when bit `i` of `heads` is set.
fn approx_list(xs: &[u32], cut: usize, heads: u32) -> A {
    let mut out = if cut >= xs.len() {
        A::thunk(A::NilA)
    } else {
        A::Bot
    };
    for i in (0..xs.len().min(cut)).rev() {
        let h = if heads >> i & 1 == 1 {
            A::thunk(A::NatA(xs[i]))
        } else {
            A::Bot
        };
        out = A::thunk(A::cons(h, out));
    }
    out
}

fn list_and_three_approximations() -> impl Strategy<Value = (Vec<u32>, A, A, A)> {
    prop::collection::vec(0u32..3, 0..10).prop_flat_map(|xs| {
        let n = xs.len();
        let one = (0..=n + 1, any::<u32>());
        (Just(xs), one.clone(), one.clone(), one).prop_map(|(xs, (c1, h1), (c2, h2), (c3, h3))| {
            let a = approx_list(&xs, c1, h1);
            let b = approx_list(&xs, c2, h2);
            let c = approx_list(&xs, c3, h3);
            (xs, a, b, c)
        })
    })
}

proptest! {
    #[test]
    fn joins_of_compatible_approximations(
        (xs, a, b, c) in list_and_three_approximations()
    ) {
        let v = TotalValue::nat_list(&xs);
        prop_assert!(is_approx(&a, &v) && is_approx(&b, &v));
        let ab = join(&a, &b).unwrap();
        prop_assert!(is_approx(&ab, &v));
        prop_assert_eq!(&ab, &join(&b, &a).unwrap());
        prop_assert_eq!(&join(&a, &a).unwrap(), &a);
        prop_assert_eq!(
            join(&ab, &c).unwrap(),
            join(&a, &join(&b, &c).unwrap()).unwrap()
        );
        prop_assert_eq!(less_defined(&a, &b), join(&a, &b).unwrap() == b);
    }

    #[test]
    fn distinct_lists_have_incompatible_exact_approximations(
        xs in prop::collection::vec(0u32..3, 0..8),
        ys in prop::collection::vec(0u32..3, 0..8),
    ) {
        let ty = Ty::thunked(Ty::list(Ty::Nat));
        let a = exact(&TotalValue::nat_list(&xs), &ty);
        let b = exact(&TotalValue::nat_list(&ys), &ty);
        prop_assert_eq!(join(&a, &b).is_ok(), xs == ys);
    }
}

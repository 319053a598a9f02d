//! The acceptance criteria, one line each. Every criterion is evaluated and
//! printed, and the test then fails if any of them did not pass. The target
//! runs without the libtest harness so the lines are never captured.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use lazycost::corpus::programs;
use lazycost::suites::{
    banker_ops, banker_potential_random, correspondence, implicit_ops, stdlib_approx, stdlib_costs, traces,
    Outcome,
};
use lazycost_core::banker::BUDGET;
use lazycost_core::calculus::Ty;
use lazycost_core::clairvoyant::DEFAULT_CAP;
use lazycost_core::implicit::{POP_BUDGET, PUSH_BUDGET};
use lazycost_core::lattice::{all_approximations, join, less_defined, ApproxValue};
use lazycost_core::theorems::Selection;
use lazycost_core::trace::*;

struct Verdict {
    passed: bool,
    detail: String,
}

impl Verdict {
    fn of(outcomes: &[Outcome]) -> Self {
        let failed = outcomes.iter().find(|o| !o.passed());
        let checked: u64 = outcomes.iter().map(|o| o.checked).sum();
        match failed {
            None => Verdict {
                passed: true,
                detail: format!("{checked} checks"),
            },
            Some(o) => Verdict {
                passed: false,
                detail: format!(
                    "{}: {}",
                    o.suite,
                    o.counterexample
                        .as_deref()
                        .or(o.resource_cap.as_deref())
                        .unwrap_or("?")
                ),
            },
        }
    }

    fn and(self, ok: bool, why: &str) -> Self {
        if self.passed && !ok {
            Verdict {
                passed: false,
                detail: why.to_string(),
            }
        } else {
            self
        }
    }
}

fn corpus_suite(sel: Selection) -> Vec<Outcome> {
    programs()
        .iter()
        .map(|(name, p)| correspondence(name, p, 3, &[0, 1], DEFAULT_CAP, sel).unwrap())
        .collect()
}

fn criterion_1() -> Verdict {
    let start = Instant::now();
    let sel = Selection {
        correspondence: true,
        lemmas: false,
    };
    let outcomes = corpus_suite(sel);
    let elapsed = start.elapsed();
    let positive = outcomes
        .iter()
        .any(|o| o.properties["positive-cost-demands"] == 1);
    let v = Verdict::of(&outcomes)
        .and(outcomes.len() >= 6, "fewer than six programs")
        .and(positive, "no demand had a positive cost")
        .and(elapsed < Duration::from_secs(300), "slower than five minutes");
    Verdict {
        detail: format!("{} programs, {}, {elapsed:.1?}", outcomes.len(), v.detail),
        ..v
    }
}

fn criterion_4() -> Verdict {
    Verdict::of(&[banker_ops(BUDGET, 6), banker_potential_random(100, 0x5eed)])
}

fn criterion_5() -> Verdict {
    Verdict::of(&[implicit_ops(PUSH_BUDGET, POP_BUDGET, 6)])
}

fn figure_cells() -> bool {
    let t = example_trace();
    let ev = eval_trace::<Banker>(&t, true).unwrap();
    let dt = demand_trace::<Banker>(&t, &ev).unwrap();
    let cell = |i: usize, j: usize| Banker::render(ev.versions[i].as_ref().unwrap(), dt.at(i, j).unwrap());
    let q2: Vec<String> = (2..=8).map(|j| cell(2, j)).collect();
    let q4: Vec<String> = (4..=8).map(|j| cell(4, j)).collect();
    q2 == [
        "(a:nil, b:⊥)",
        "(a:nil, b:⊥)",
        "(⊥, ⊥)",
        "(⊥, ⊥)",
        "(⊥, ⊥)",
        "(⊥, ⊥)",
        "(⊥, ⊥)",
    ] && q4 == ["(a:b:⊥, ⊥)", "(a:b:⊥, ⊥)", "(a:⊥, ⊥)", "(a:⊥, ⊥)", "(⊥, ⊥)"]
}

fn criterion_6() -> Verdict {
    Verdict::of(&[
        traces::<Banker>(6, &Banker::budgets()),
        traces::<Implicit>(6, &Implicit::budgets()),
    ])
    .and(figure_cells(), "demand table of the example trace differs")
}

/// Order and join laws over every approximation of small values; returns
/// the first failure.
fn lattice_laws() -> Result<u64, String> {
    let types = [
        (Ty::thunked(Ty::list(Ty::Nat)), 3),
        (Ty::thunked(Ty::list(Ty::thunked(Ty::Bool))), 3),
        (
            Ty::prod(Ty::thunked(Ty::Bool), Ty::thunked(Ty::list(Ty::Bool))),
            2,
        ),
    ];
    let mut checked = 0;
    for (ty, depth) in types {
        let u: Vec<ApproxValue> = all_approximations(&ty, depth, &[0, 1]);
        for a in &u {
            if !less_defined(a, a) {
                return Err(format!("{a} is not below itself"));
            }
            for b in &u {
                checked += 1;
                let ab = less_defined(a, b);
                if ab && less_defined(b, a) && a != b {
                    return Err(format!("{a} and {b} are equivalent but distinct"));
                }
                let mut uppers = u.iter().filter(|c| less_defined(a, c) && less_defined(b, c));
                match join(a, b) {
                    Ok(j) => {
                        if !less_defined(a, &j) || !less_defined(b, &j) {
                            return Err(format!("{a} ⊔ {b} = {j} is no upper bound"));
                        }
                        if let Some(c) = uppers.find(|c| !less_defined(&j, c)) {
                            return Err(format!("{a} ⊔ {b} = {j} is not below {c}"));
                        }
                    }
                    Err(_) if uppers.next().is_some() => return Err(format!("{a} ⊔ {b} failed")),
                    Err(_) => {}
                }
                for c in u.iter().filter(|_| ab) {
                    if less_defined(b, c) && !less_defined(a, c) {
                        return Err(format!("{a} ≤ {b} ≤ {c} is not transitive"));
                    }
                }
            }
        }
    }
    Ok(checked)
}

fn criterion_7() -> Verdict {
    let sel = Selection {
        correspondence: false,
        lemmas: true,
    };
    let outcomes = corpus_suite(sel);
    let lemmas = Verdict::of(&outcomes);
    let counted = |p: &str| {
        outcomes
            .iter()
            .map(|o| o.properties.get(p).copied().unwrap_or(0))
            .sum::<u64>()
    };
    let lemmas = lemmas.and(
        counted("monotonicity") > 0 && counted("join-homomorphism") > 0,
        "the lemmas were never exercised",
    );
    match lattice_laws() {
        Ok(n) => Verdict {
            detail: format!("{n} lattice pairs; corpus {}", lemmas.detail),
            ..lemmas
        },
        Err(e) => Verdict {
            passed: false,
            detail: e,
        },
    }
}

/// A mutant is killed when its suite fails with a counterexample.
fn killed(o: &Outcome) -> Option<String> {
    (!o.passed()).then(|| o.counterexample.clone()).flatten()
}

fn criterion_8() -> Verdict {
    let starved = Budgets {
        push: 0,
        pop: 0,
        ..Banker::budgets()
    };
    let one_push = Budgets {
        push: 1,
        ..Implicit::budgets()
    };
    let mutants = [
        ("banker const 0, ops", banker_ops(0, 6)),
        ("banker const 0, traces", traces::<Banker>(6, &starved)),
        ("implicit push 1, ops", implicit_ops(1, POP_BUDGET, 6)),
        ("implicit push 1, traces", traces::<Implicit>(6, &one_push)),
    ];
    for (name, o) in &mutants {
        if killed(o).is_none() {
            return Verdict {
                passed: false,
                detail: format!("mutant survived: {name}"),
            };
        }
    }
    let (name, o) = &mutants[0];
    Verdict {
        passed: true,
        detail: format!("4 mutants killed, e.g. {name}: {}", killed(o).unwrap()),
    }
}

type Criterion = (u32, &'static str, fn() -> Verdict);

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        (1, "correspondence on the corpus", criterion_1),
        (2, "list function cost bounds", || {
            Verdict::of(&[stdlib_costs(5, 4)])
        }),
        (3, "list function demand correctness", || {
            Verdict::of(&[stdlib_approx(5, 4)])
        }),
        (4, "banker's queue bounds and potential", criterion_4),
        (5, "implicit queue bounds", criterion_5),
        (6, "amortized traces and demand table", criterion_6),
        (7, "lattice laws and demand lemmas", criterion_7),
        (8, "starved budgets are detected", criterion_8),
    ];
    let mut failed = Vec::new();
    for (n, what, run) in criteria {
        let start = Instant::now();
        let v = run();
        let status = if v.passed { "PASS" } else { "FAIL" };
        println!(
            "criterion {n}: {status} {what} ({}; {:.1?})",
            v.detail,
            start.elapsed()
        );
        if !v.passed {
            failed.push(n);
        }
    }
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        eprintln!("failed criteria: {failed:?}");
        ExitCode::FAILURE
    }
}

//! The clairvoyant semantics: a nondeterministic forward semantics over
//! approximations.
//!
//! Clairvoyant call-by-value guesses, at every `lazy`, whether the suspended
//! computation will ever be needed. If not, it skips it (the thunk stays
//! `Bot`, at no cost); otherwise it runs it right away. A `force` of a
//! skipped thunk is a wrong guess and the branch dies. Every other construct
//! is deterministic. Each surviving branch is one possible execution, and the
//! cost of lazy evaluation is the cost of the cheapest branch that produces
//! enough of the result.
//!
//! `let` is call-by-value: the bound term runs before the body. `foldr`
//! evaluates its list argument, then folds with the recursive result held in
//! a thunk, so the fold over a tail may itself be skipped or run.
//!
//! Branch sets can grow exponentially, so every intermediate set is checked
//! against a cap.

use alloc::string::String;
use core::fmt;

use crate::calculus::Term;
use crate::lattice::{less_defined, ApproxValue, DemandEnv};
use crate::nondet::Branches;

/// Default bound on the size of any intermediate branch set.
pub const DEFAULT_CAP: usize = 1 << 20;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CvError {
    UnboundVariable(String),
    /// A destructor met an approximation of the wrong shape.
    IllTyped(Term),
    /// Some branch set grew beyond the cap.
    TooManyBranches {
        cap: usize,
    },
}

impl fmt::Display for CvError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CvError::UnboundVariable(x) => write!(f, "unbound variable `{x}`"),
            CvError::IllTyped(t) => write!(f, "ill-typed term `{t}`"),
            CvError::TooManyBranches { cap } => {
                write!(f, "clairvoyant enumeration exceeded {cap} branches")
            }
        }
    }
}

/// Every clairvoyant execution of `term` under the approximate environment
/// `env`, as a set of `(cost, result)` pairs.
pub fn cv_enumerate(env: &DemandEnv, term: &Term, cap: usize) -> Result<Branches<ApproxValue>, CvError> {
    Cv { cap }.run(env, term)
}

/// The cheapest execution whose result is at least as defined as `out`.
pub fn cv_min_matching(
    env: &DemandEnv,
    term: &Term,
    out: &ApproxValue,
    cap: usize,
) -> Result<Option<(u64, ApproxValue)>, CvError> {
    Ok(cv_enumerate(env, term, cap)?
        .min_matching(|a| less_defined(out, a))
        .cloned())
}

struct Cv {
    cap: usize,
}

impl Cv {
    fn check(&self, b: Branches<ApproxValue>) -> Result<Branches<ApproxValue>, CvError> {
        if b.len() > self.cap {
            Err(CvError::TooManyBranches { cap: self.cap })
        } else {
            Ok(b)
        }
    }

    fn run(&self, env: &DemandEnv, term: &Term) -> Result<Branches<ApproxValue>, CvError> {
        use ApproxValue as A;
        let ill = || CvError::IllTyped(term.clone());
        let out = match term {
            Term::Var(x) => Branches::ret(
                env.get(x)
                    .cloned()
                    .ok_or_else(|| CvError::UnboundVariable(x.clone()))?,
            ),
            Term::Tick(m) => self.run(env, m)?.tick(),
            Term::Lazy(m) => Branches::ret(A::Bot).union(self.run(env, m)?.map(A::thunk)),
            Term::Force(m) => self.run(env, m)?.try_bind(|a| match a {
                A::Thunk(v) => Ok(Branches::ret(*v)),
                A::Bot => Ok(Branches::none()),
                _ => Err(ill()),
            })?,
            Term::Let(x, m, n) => self.run(env, m)?.try_bind(|v| {
                let mut inner = env.clone();
                inner.insert(x.clone(), v);
                self.run(&inner, n)
            })?,
            Term::Cons(m, n) => self.both(env, m, n, A::cons)?,
            Term::Pair(m, n) => self.both(env, m, n, A::pair)?,
            Term::Fst(m) | Term::Snd(m) => self.run(env, m)?.try_bind(|p| match p {
                A::PairA(l, r) => Ok(Branches::ret(if matches!(term, Term::Fst(_)) { *l } else { *r })),
                _ => Err(ill()),
            })?,
            Term::Nil => Branches::ret(A::NilA),
            Term::True => Branches::ret(A::BoolA(true)),
            Term::False => Branches::ret(A::BoolA(false)),
            Term::If(c, t, e) => self.run(env, c)?.try_bind(|b| match b {
                A::BoolA(true) => self.run(env, t),
                A::BoolA(false) => self.run(env, e),
                _ => Err(ill()),
            })?,
            Term::Foldr {
                x,
                y,
                step,
                base,
                list,
            } => {
                let fold = Fold {
                    env,
                    x,
                    y,
                    step,
                    base,
                };
                self.run(env, list)?.try_bind(|l| self.fold(&fold, &l))?
            }
        };
        self.check(out)
    }

    fn both(
        &self,
        env: &DemandEnv,
        m: &Term,
        n: &Term,
        mk: fn(ApproxValue, ApproxValue) -> ApproxValue,
    ) -> Result<Branches<ApproxValue>, CvError> {
        let right = self.run(env, n)?;
        let out = self
            .run(env, m)?
            .bind(|a| right.clone().map(|b| mk(a.clone(), b)));
        self.check(out)
    }

    fn fold(&self, f: &Fold<'_>, list: &ApproxValue) -> Result<Branches<ApproxValue>, CvError> {
        use ApproxValue as A;
        match list {
            A::NilA => self.run(f.env, f.base),
            A::ConsA(head, tail) => {
                let mut acc = Branches::ret(A::Bot);
                if let A::Thunk(rest) = &**tail {
                    acc = acc.union(self.fold(f, rest)?.map(A::thunk));
                }
                let acc = self.check(acc)?;
                let out = acc.try_bind(|r| {
                    let mut inner = f.env.clone();
                    inner.insert(String::from(f.x), (**head).clone());
                    inner.insert(String::from(f.y), r);
                    self.run(&inner, f.step)
                })?;
                self.check(out)
            }
            _ => Err(CvError::IllTyped(f.step.clone())),
        }
    }
}

struct Fold<'a> {
    env: &'a DemandEnv,
    x: &'a str,
    y: &'a str,
    step: &'a Term,
    base: &'a Term,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::ApproxValue as A;
    use alloc::vec;

    #[test]
    fn lazy_forks() {
        let b = cv_enumerate(
            &DemandEnv::new(),
            &Term::lazy(Term::tick(Term::True)),
            DEFAULT_CAP,
        )
        .unwrap();
        assert_eq!(b.into_vec(), vec![(0, A::Bot), (1, A::thunk(A::BoolA(true)))]);
    }

    #[test]
    fn force_prunes_skip_branch() {
        let t = Term::force(Term::lazy(Term::tick(Term::True)));
        let b = cv_enumerate(&DemandEnv::new(), &t, DEFAULT_CAP).unwrap();
        assert_eq!(b.into_vec(), vec![(1, A::BoolA(true))]);
    }

    #[test]
    fn append_single_element() {
        // append [1] [] with fully evaluated inputs.
        let t = Term::foldr(
            "x",
            "y",
            Term::tick(Term::cons(Term::var("x"), Term::var("y"))),
            Term::var("ys"),
            Term::var("xs"),
        );
        let mut env = DemandEnv::new();
        env.insert("xs".into(), A::cons(A::thunk(A::NatA(1)), A::thunk(A::NilA)));
        env.insert("ys".into(), A::NilA);
        let b = cv_enumerate(&env, &t, DEFAULT_CAP).unwrap();
        // The fold over the empty tail is either skipped or evaluated; the
        // single step always ticks.
        assert_eq!(
            b.into_vec(),
            vec![
                (1, A::cons(A::thunk(A::NatA(1)), A::Bot)),
                (1, A::cons(A::thunk(A::NatA(1)), A::thunk(A::NilA))),
            ]
        );
    }

    #[test]
    fn min_matching_and_absence() {
        let t = Term::lazy(Term::tick(Term::True));
        let env = DemandEnv::new();
        assert_eq!(
            cv_min_matching(&env, &t, &A::Bot, DEFAULT_CAP).unwrap(),
            Some((0, A::Bot))
        );
        let want = A::thunk(A::BoolA(true));
        assert_eq!(
            cv_min_matching(&env, &t, &want, DEFAULT_CAP).unwrap(),
            Some((1, want.clone()))
        );
        let wrong = A::thunk(A::BoolA(false));
        assert_eq!(cv_min_matching(&env, &t, &wrong, DEFAULT_CAP).unwrap(), None);
    }

    #[test]
    fn cap_is_enforced() {
        let t = Term::lazy(Term::tick(Term::True));
        assert_eq!(
            cv_enumerate(&DemandEnv::new(), &t, 1),
            Err(CvError::TooManyBranches { cap: 1 })
        );
    }
}

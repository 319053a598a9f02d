//! Executable versions of the correspondence theorems between the demand
//! semantics and the clairvoyant semantics, plus the algebraic lemmas of the
//! demand semantics.
//!
//! Every check is stated for one total input environment `g` and quantifies
//! over all output demands `a ≺ ⟦M⟧(g)` and all input approximations
//! `g' ≺ g`:
//!
//! * **totality**: the demand `(n, g₁)` of `a` exists and `g₁ ≺ g`;
//! * **cost existence**: for every `g'` with `g₁ ≤ g'`, some clairvoyant
//!   branch of `M` under `g'` costs exactly `n` and produces at least `a`;
//! * **cost minimality**: every branch under any `g'` producing at least `a`
//!   costs at least `n`, and then `g₁ ≤ g'`;
//! * **functional correctness**: every branch under any `g'` approximates
//!   `⟦M⟧(g)`;
//! * **monotonicity**: `a₁ ≤ a₂` implies smaller cost and input demand;
//! * **⊔-homomorphism**: the input demand of `a₁ ⊔ a₂` is the join of the
//!   two input demands, at no more than the sum of the costs.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::clairvoyant::{cv_enumerate, CvError};
use crate::demand::{Analyzed, DemandError};
use crate::eval::eval;
use crate::lattice::{
    approximations, env_approximations, is_approx, is_approx_env, join, join_env, less_defined,
    less_defined_env, ApproxValue, DemandEnv, Tick, ValueEnv,
};
use crate::nondet::Branches;

/// The properties checked per environment.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Property {
    Totality,
    CostExistence,
    CostMinimality,
    FunctionalCorrectness,
    Monotonicity,
    JoinHomomorphism,
}

impl Property {
    pub const ALL: [Property; 6] = [
        Property::Totality,
        Property::CostExistence,
        Property::CostMinimality,
        Property::FunctionalCorrectness,
        Property::Monotonicity,
        Property::JoinHomomorphism,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Property::Totality => "totality",
            Property::CostExistence => "cost-existence",
            Property::CostMinimality => "cost-minimality",
            Property::FunctionalCorrectness => "functional-correctness",
            Property::Monotonicity => "monotonicity",
            Property::JoinHomomorphism => "join-homomorphism",
        }
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One failed instance of a property.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub property: Property,
    pub env: ValueEnv,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} violated at {{", self.property)?;
        for (i, (x, v)) in self.env.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{x} = {v}")?;
        }
        write!(f, "}}: {}", self.detail)
    }
}

/// Counts of checked instances and the violations found for one environment.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EnvReport {
    /// Number of instances checked per property.
    pub checked: BTreeMap<Property, u64>,
    pub violations: Vec<Violation>,
    /// Whether some non-`Bot` output demand had a positive cost.
    pub saw_positive_cost: bool,
}

impl EnvReport {
    fn count(&mut self, p: Property, n: u64) {
        *self.checked.entry(p).or_insert(0) += n;
    }

    /// Adds the counts and violations of `other` to `self`.
    pub fn merge(&mut self, other: EnvReport) {
        for (p, n) in other.checked {
            self.count(p, n);
        }
        self.violations.extend(other.violations);
        self.saw_positive_cost |= other.saw_positive_cost;
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Errors that prevent a check from running at all.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CheckError {
    Demand(DemandError),
    Cv(CvError),
}

impl fmt::Display for CheckError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CheckError::Demand(e) => write!(f, "{e}"),
            CheckError::Cv(e) => write!(f, "{e}"),
        }
    }
}

impl From<CvError> for CheckError {
    fn from(e: CvError) -> Self {
        CheckError::Cv(e)
    }
}

impl From<DemandError> for CheckError {
    fn from(e: DemandError) -> Self {
        CheckError::Demand(e)
    }
}

/// Which property families to check.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Selection {
    /// Totality, existence, minimality and functional correctness.
    pub correspondence: bool,
    /// Monotonicity and ⊔-homomorphism.
    pub lemmas: bool,
}

impl Selection {
    pub const ALL: Selection = Selection {
        correspondence: true,
        lemmas: true,
    };
}

/// Runs the selected checks for one total environment `g`.
///
/// Only a demand failure on a valid output demand is reported as a
/// violation; failures of the clairvoyant enumerator (such as exceeding the
/// branch cap) abort the check.
pub fn check_env(
    prog: &Analyzed<'_>,
    g: &ValueEnv,
    cap: usize,
    sel: Selection,
) -> Result<EnvReport, CheckError> {
    let mut report = EnvReport::default();
    let value = eval(g, prog.term()).map_err(DemandError::from)?;
    let outs = approximations(&value, prog.ty());
    let violation = |property, detail: String| Violation {
        property,
        env: g.clone(),
        detail,
    };

    // Demand of every output demand; totality is checked on the way.
    let mut demands: BTreeMap<ApproxValue, Tick<DemandEnv>> = BTreeMap::new();
    for out in &outs {
        report.count(Property::Totality, 1);
        match prog.demand(g, out) {
            Ok(d) => {
                if !is_approx_env(&d.value, g) || d.value.len() != g.len() {
                    report.violations.push(violation(
                        Property::Totality,
                        format!("input demand of {out} does not approximate the input"),
                    ));
                }
                if !out.is_bot() && d.cost > 0 {
                    report.saw_positive_cost = true;
                }
                demands.insert(out.clone(), d);
            }
            Err(e) => report.violations.push(violation(
                Property::Totality,
                format!("demand of {out} failed: {e}"),
            )),
        }
    }

    if sel.correspondence {
        let inputs: Vec<(DemandEnv, Branches<ApproxValue>)> = env_approximations(g, prog.ty_env())
            .into_iter()
            .map(|d| cv_enumerate(&d, prog.term(), cap).map(|b| (d, b)))
            .collect::<Result<_, _>>()?;

        for (d, branches) in &inputs {
            report.count(Property::FunctionalCorrectness, branches.len() as u64);
            if let Some((n, a)) = branches.iter().find(|(_, a)| !is_approx(a, &value)) {
                report.violations.push(violation(
                    Property::FunctionalCorrectness,
                    format!(
                        "branch ({n}, {a}) under {} does not approximate {value}",
                        show_env(d)
                    ),
                ));
            }
        }

        for (out, dem) in &demands {
            let (n, g1) = (dem.cost, &dem.value);
            for (d, branches) in &inputs {
                // Cheapest branch refining `out` under `d`.
                let best = branches.min_matching(|a| less_defined(out, a));
                report.count(Property::CostMinimality, 1);
                if let Some((n2, a2)) = best {
                    if *n2 < n {
                        report.violations.push(violation(
                            Property::CostMinimality,
                            format!(
                                "demand {out} costs {n} but branch ({n2}, {a2}) under {} is cheaper",
                                show_env(d)
                            ),
                        ));
                    }
                    if !less_defined_env(g1, d) {
                        report.violations.push(violation(
                            Property::CostMinimality,
                            format!(
                                "demand {out} needs {} but branch ({n2}, {a2}) runs under {}",
                                show_env(g1),
                                show_env(d)
                            ),
                        ));
                    }
                }
                if less_defined_env(g1, d) {
                    report.count(Property::CostExistence, 1);
                    let exists = branches.iter().any(|(n2, a2)| *n2 == n && less_defined(out, a2));
                    if !exists {
                        report.violations.push(violation(
                            Property::CostExistence,
                            format!("no branch under {} produces {out} at cost {n}", show_env(d)),
                        ));
                    }
                }
            }
        }
    }

    if sel.lemmas {
        for (a1, d1) in &demands {
            for (a2, d2) in &demands {
                if less_defined(a1, a2) {
                    report.count(Property::Monotonicity, 1);
                    if d1.cost > d2.cost || !less_defined_env(&d1.value, &d2.value) {
                        report.violations.push(violation(
                            Property::Monotonicity,
                            format!(
                                "{a1} ≤ {a2} but ({}, {}) ≰ ({}, {})",
                                d1.cost,
                                show_env(&d1.value),
                                d2.cost,
                                show_env(&d2.value)
                            ),
                        ));
                    }
                }
                if a1 > a2 {
                    continue;
                }
                report.count(Property::JoinHomomorphism, 1);
                let joined = join(a1, a2).ok().and_then(|j| demands.get(&j).map(|d| (j, d)));
                let Some((j, dj)) = joined else {
                    report.violations.push(violation(
                        Property::JoinHomomorphism,
                        format!("{a1} ⊔ {a2} has no demand"),
                    ));
                    continue;
                };
                let env_ok = join_env(&d1.value, &d2.value).is_ok_and(|e| e == dj.value);
                if !env_ok || dj.cost > d1.cost + d2.cost {
                    report.violations.push(violation(
                        Property::JoinHomomorphism,
                        format!(
                            "demand of {j} is ({}, {}), expected the join of ({}, {}) and ({}, {})",
                            dj.cost,
                            show_env(&dj.value),
                            d1.cost,
                            show_env(&d1.value),
                            d2.cost,
                            show_env(&d2.value)
                        ),
                    ));
                }
            }
        }
    }
    Ok(report)
}

/// Renders a demand environment as `{x = a, ...}`.
pub fn show_env(d: &DemandEnv) -> String {
    let mut s = String::from("{");
    for (i, (x, a)) in d.iter().enumerate() {
        if i > 0 {
            s.push_str(", ");
        }
        s.push_str(&format!("{x} = {a}"));
    }
    s.push('}');
    s
}

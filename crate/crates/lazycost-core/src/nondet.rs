//! Finite sets of cost-annotated branches: the clairvoyance monad.
//!
//! A `Branches<T>` is the set of `(cost, value)` outcomes of a
//! nondeterministic computation. Sets are kept sorted and deduplicated, so
//! two computations with the same outcomes compare equal and iterate in the
//! same order. Nondeterminism enters only through [`Branches::fork`], which
//! offers the choice between skipping a suspended computation and running it
//! now.

use alloc::vec;
use alloc::vec::Vec;

/// A deduplicated set of `(cost, value)` branches in ascending order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Branches<T> {
    items: Vec<(u64, T)>,
}

impl<T: Ord + Clone> Branches<T> {
    /// No branch at all: a stuck computation.
    pub fn none() -> Self {
        Branches { items: Vec::new() }
    }

    /// A single branch with cost 0.
    pub fn ret(value: T) -> Self {
        Branches {
            items: vec![(0, value)],
        }
    }

    /// A single branch with the given cost.
    pub fn with_cost(cost: u64, value: T) -> Self {
        Branches {
            items: vec![(cost, value)],
        }
    }

    /// Builds a branch set from arbitrary outcomes.
    pub fn from_vec(mut items: Vec<(u64, T)>) -> Self {
        items.sort();
        items.dedup();
        Branches { items }
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn iter(&self) -> core::slice::Iter<'_, (u64, T)> {
        self.items.iter()
    }

    pub fn into_vec(self) -> Vec<(u64, T)> {
        self.items
    }

    /// Adds `n` to the cost of every branch.
    pub fn tick_by(mut self, n: u64) -> Self {
        for (c, _) in &mut self.items {
            *c = c.checked_add(n).expect("cost overflow");
        }
        self
    }

    /// Adds one to the cost of every branch.
    pub fn tick(self) -> Self {
        self.tick_by(1)
    }

    /// Applies a deterministic function to every value.
    pub fn map<U: Ord + Clone>(self, mut f: impl FnMut(T) -> U) -> Branches<U> {
        Branches::from_vec(self.items.into_iter().map(|(c, v)| (c, f(v))).collect())
    }

    /// Sequential composition: costs along a path add up.
    pub fn bind<U: Ord + Clone>(self, mut f: impl FnMut(T) -> Branches<U>) -> Branches<U> {
        let mut out = Vec::new();
        for (c, v) in self.items {
            for (d, w) in f(v).items {
                out.push((c.checked_add(d).expect("cost overflow"), w));
            }
        }
        Branches::from_vec(out)
    }

    /// [`Branches::bind`] with a fallible continuation; the first error
    /// aborts the whole computation.
    pub fn try_bind<U: Ord + Clone, E>(
        self,
        mut f: impl FnMut(T) -> Result<Branches<U>, E>,
    ) -> Result<Branches<U>, E> {
        let mut out = Vec::new();
        for (c, v) in self.items {
            for (d, w) in f(v)?.items {
                out.push((c.checked_add(d).expect("cost overflow"), w));
            }
        }
        Ok(Branches::from_vec(out))
    }

    /// Set union of two computations' outcomes.
    pub fn union(mut self, other: Self) -> Self {
        self.items.extend(other.items);
        Branches::from_vec(self.items)
    }

    /// Keeps only the branches whose value satisfies `keep`.
    pub fn filter(self, mut keep: impl FnMut(&T) -> bool) -> Self {
        Branches {
            items: self.items.into_iter().filter(|(_, v)| keep(v)).collect(),
        }
    }

    /// The cheapest branch whose value satisfies `keep`; ties resolve to the
    /// least value.
    pub fn min_matching(&self, mut keep: impl FnMut(&T) -> bool) -> Option<&(u64, T)> {
        self.items.iter().find(|(_, v)| keep(v))
    }
}

impl<T: Ord + Clone> Branches<Option<T>> {
    /// The clairvoyant choice at a suspension: either skip it (cost 0,
    /// `None`) or run `go` now and keep its result.
    pub fn fork(go: impl FnOnce() -> Branches<T>) -> Self {
        Branches::ret(None).union(go().map(Some))
    }
}

impl<T> IntoIterator for Branches<T> {
    type Item = (u64, T);
    type IntoIter = alloc::vec::IntoIter<(u64, T)>;

    fn into_iter(self) -> Self::IntoIter {
        self.items.into_iter()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dedup_and_order() {
        let b = Branches::from_vec(vec![(2, 'b'), (1, 'a'), (2, 'b')]);
        assert_eq!(b.into_vec(), vec![(1, 'a'), (2, 'b')]);
    }

    #[test]
    fn bind_adds_costs() {
        let b = Branches::from_vec(vec![(1, 10u32), (2, 20)])
            .bind(|v| Branches::from_vec(vec![(0, v), (5, v + 1)]));
        assert_eq!(b.into_vec(), vec![(1, 10), (2, 20), (6, 11), (7, 21)]);
    }

    #[test]
    fn fork_offers_skip_and_go() {
        let b = Branches::fork(|| Branches::with_cost(3, 'x'));
        assert_eq!(b.into_vec(), vec![(0, None), (3, Some('x'))]);
    }

    #[test]
    fn stuck_branches_vanish() {
        let b = Branches::from_vec(vec![(0, None), (1, Some(4u8))]).bind(|v| match v {
            Some(x) => Branches::ret(x),
            None => Branches::none(),
        });
        assert_eq!(b.into_vec(), vec![(1, 4)]);
    }

    #[test]
    fn min_matching_prefers_cheapest() {
        let b = Branches::from_vec(vec![(4, 1u8), (2, 3), (3, 2)]);
        assert_eq!(b.min_matching(|v| *v >= 2), Some(&(2, 3)));
        assert_eq!(b.min_matching(|v| *v > 9), None);
    }
}

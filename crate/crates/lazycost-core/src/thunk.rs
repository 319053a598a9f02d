//! A typed thunk approximation, `T A = Undefined | Thunk A`.
//!
//! [`crate::lattice::ApproxValue`] is untyped and covers the calculus. The
//! queue modules use their own approximation types and wrap suspended
//! positions in `T`.

/// Approximation of a suspended value: either never evaluated or evaluated
/// to (an approximation of) `A`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum T<A> {
    Undefined,
    Thunk(A),
}

impl<A> T<A> {
    pub fn is_undefined(&self) -> bool {
        matches!(self, T::Undefined)
    }

    pub fn as_ref(&self) -> T<&A> {
        match self {
            T::Undefined => T::Undefined,
            T::Thunk(a) => T::Thunk(a),
        }
    }

    pub fn map<B>(self, f: impl FnOnce(A) -> B) -> T<B> {
        match self {
            T::Undefined => T::Undefined,
            T::Thunk(a) => T::Thunk(f(a)),
        }
    }

    /// The evaluated value, if any.
    pub fn value(&self) -> Option<&A> {
        match self {
            T::Undefined => None,
            T::Thunk(a) => Some(a),
        }
    }

    /// Definedness order, given the order on `A`.
    pub fn less_defined_by(&self, other: &T<A>, le: impl FnOnce(&A, &A) -> bool) -> bool {
        match (self, other) {
            (T::Undefined, _) => true,
            (T::Thunk(a), T::Thunk(b)) => le(a, b),
            (T::Thunk(_), T::Undefined) => false,
        }
    }

    /// Least upper bound, given the join on `A`.
    pub fn join_by<E>(&self, other: &T<A>, join: impl FnOnce(&A, &A) -> Result<A, E>) -> Result<T<A>, E>
    where
        A: Clone,
    {
        Ok(match (self, other) {
            (T::Undefined, x) | (x, T::Undefined) => x.clone(),
            (T::Thunk(a), T::Thunk(b)) => T::Thunk(join(a, b)?),
        })
    }
}

/// Potential of a thunk: an unevaluated thunk carries none.
pub fn potential_t<A>(t: &T<A>, potential: impl FnOnce(&A) -> u64) -> u64 {
    t.value().map_or(0, potential)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_and_join() {
        let le = |a: &u8, b: &u8| a == b;
        assert!(T::Undefined.less_defined_by(&T::Thunk(3u8), le));
        assert!(!T::Thunk(3u8).less_defined_by(&T::Undefined, le));
        let j = |a: &u8, b: &u8| if a == b { Ok(*a) } else { Err(()) };
        assert_eq!(T::Undefined.join_by(&T::Thunk(3u8), j), Ok(T::Thunk(3)));
        assert_eq!(T::Thunk(2u8).join_by(&T::Thunk(3u8), j), Err(()));
    }
}

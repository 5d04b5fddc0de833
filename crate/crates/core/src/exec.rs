//! Strategy for running an exhaustive search over an indexed space.

/// Runs `check` over the indices `0..len` and reports the smallest index whose
/// check returned a hit or an error.
///
/// Implementations may evaluate indices in any order or in parallel, but the
/// result must be the same as the sequential scan's, so reports do not depend
/// on how the work was split.
pub trait Executor {
    fn find_first<T, E, F>(&self, len: u64, check: F) -> Result<Option<(u64, T)>, E>
    where
        T: Send,
        E: Send,
        F: Fn(u64) -> Result<Option<T>, E> + Sync;
}

/// Outcome of an exhaustive check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    /// Every case in the bounded space passed.
    Verified,
    /// Some case failed; the report carries the first one in enumeration order.
    Counterexample,
}

impl Verdict {
    pub fn is_verified(self) -> bool {
        self == Verdict::Verified
    }
}

/// Plain in-order scan on the calling thread.
#[derive(Debug, Clone, Copy, Default)]
pub struct Sequential;

impl Executor for Sequential {
    fn find_first<T, E, F>(&self, len: u64, check: F) -> Result<Option<(u64, T)>, E>
    where
        T: Send,
        E: Send,
        F: Fn(u64) -> Result<Option<T>, E> + Sync,
    {
        for i in 0..len {
            if let Some(hit) = check(i)? {
                return Ok(Some((i, hit)));
            }
        }
        Ok(None)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reports_first_hit_or_error() {
        let r: Result<_, ()> = Sequential.find_first(10, |i| Ok((i % 4 == 3).then_some(i * 10)));
        assert_eq!(r, Ok(Some((3, 30))));
        let r: Result<Option<(u64, ())>, u64> =
            Sequential.find_first(10, |i| if i == 5 { Err(i) } else { Ok(None) });
        assert_eq!(r, Err(5));
        let r: Result<Option<(u64, ())>, ()> = Sequential.find_first(0, |_| unreachable!());
        assert_eq!(r, Ok(None));
    }
}

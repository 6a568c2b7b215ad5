use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

/// An exponent vector `a ∈ Z^m`.
///
/// Ordered graded-lexicographically: total degree first, then lexicographic.
/// The order is compatible with addition, which is what leading-term
/// elimination in exact division relies on.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Exponent(Vec<i64>);

impl Exponent {
    pub fn new(v: Vec<i64>) -> Self {
        Self(v)
    }

    pub fn zero(m: usize) -> Self {
        Self(vec![0; m])
    }

    pub fn unit(m: usize, i: usize) -> Self {
        let mut v = vec![0; m];
        v[i] = 1;
        Self(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[i64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<i64> {
        self.0
    }

    pub fn degree(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn add(&self, other: &Exponent) -> Exponent {
        Exponent(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Exponent) -> Exponent {
        Exponent(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn neg(&self) -> Exponent {
        Exponent(self.0.iter().map(|a| -a).collect())
    }

    pub fn scale(&self, s: i64) -> Exponent {
        Exponent(self.0.iter().map(|a| a * s).collect())
    }

    /// Reindexes coordinates: entry `i` moves to position `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Exponent {
        let mut out = vec![0; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            out[perm[i]] = x;
        }
        Exponent(out)
    }
}

impl From<Vec<i64>> for Exponent {
    fn from(v: Vec<i64>) -> Self {
        Self(v)
    }
}

impl From<&[i64]> for Exponent {
    fn from(v: &[i64]) -> Self {
        Self(v.to_vec())
    }
}

impl Ord for Exponent {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Exponent {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

/// Componentwise bounds of a support, used to cap quotient supports.
pub(crate) fn support_box<'a>(m: usize, support: impl Iterator<Item = &'a Exponent>) -> (Vec<i64>, Vec<i64>) {
    let mut lo = vec![i64::MAX; m];
    let mut hi = vec![i64::MIN; m];
    for a in support {
        for (i, &x) in a.as_slice().iter().enumerate() {
            lo[i] = lo[i].min(x);
            hi[i] = hi[i].max(x);
        }
    }
    (lo, hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graded_lex_order() {
        let a = Exponent::new(vec![1, 0]);
        let b = Exponent::new(vec![0, 1]);
        let c = Exponent::new(vec![-1, 0]);
        assert!(b < a);
        assert!(c < b);
        assert!(Exponent::new(vec![2, -1]) > Exponent::new(vec![0, 1]));
    }

    #[test]
    fn order_is_translation_invariant() {
        let a = Exponent::new(vec![3, -2, 1]);
        let b = Exponent::new(vec![1, 1, 0]);
        let t = Exponent::new(vec![-7, 4, 2]);
        assert_eq!(a.cmp(&b), a.add(&t).cmp(&b.add(&t)));
    }
}

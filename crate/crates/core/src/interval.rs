//! Finite unions of disjoint open intervals with endpoints in `ℚ ∪ {±∞}`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::pl::PlMap;
use crate::rational::{ExtPoint, Rational};

/// An open interval `(lo, hi)` with `lo < hi`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct OpenInterval {
    pub lo: ExtPoint,
    pub hi: ExtPoint,
}

impl OpenInterval {
    /// Returns `None` when `lo >= hi`.
    pub fn new(lo: ExtPoint, hi: ExtPoint) -> Option<Self> {
        (lo < hi).then_some(OpenInterval { lo, hi })
    }

    pub fn finite(lo: Rational, hi: Rational) -> Option<Self> {
        Self::new(ExtPoint::Finite(lo), ExtPoint::Finite(hi))
    }

    pub fn whole_line() -> Self {
        OpenInterval {
            lo: ExtPoint::NegInf,
            hi: ExtPoint::PosInf,
        }
    }

    pub fn contains(&self, x: &Rational) -> bool {
        self.lo.cmp_rational(x).is_lt() && self.hi.cmp_rational(x).is_gt()
    }

    pub fn intersect(&self, other: &OpenInterval) -> Option<OpenInterval> {
        OpenInterval::new(
            (&self.lo).max(&other.lo).clone(),
            (&self.hi).min(&other.hi).clone(),
        )
    }

    pub fn is_bounded(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }

    /// `other ⊆ self`.
    pub fn contains_interval(&self, other: &OpenInterval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    /// Some rational strictly inside the interval.
    pub fn sample_point(&self) -> Rational {
        use crate::rational::{int, one};
        match (&self.lo, &self.hi) {
            (ExtPoint::Finite(a), ExtPoint::Finite(b)) => (a + b) / int(2),
            (ExtPoint::Finite(a), _) => a + one(),
            (_, ExtPoint::Finite(b)) => b - one(),
            _ => int(0),
        }
    }

    /// Image under an increasing homeomorphism (infinite endpoints are fixed).
    pub fn image(&self, f: &PlMap) -> OpenInterval {
        OpenInterval {
            lo: f.eval_ext(&self.lo),
            hi: f.eval_ext(&self.hi),
        }
    }
}

impl fmt::Display for OpenInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.lo, self.hi)
    }
}

/// Sorted, pairwise disjoint open intervals. Overlapping inputs are merged;
/// intervals that only share an endpoint stay separate, since that endpoint
/// is not in the set.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct IntervalSet {
    parts: Vec<OpenInterval>,
}

impl IntervalSet {
    pub fn empty() -> Self {
        IntervalSet { parts: Vec::new() }
    }

    pub fn single(iv: OpenInterval) -> Self {
        IntervalSet { parts: vec![iv] }
    }

    pub fn from_intervals(mut parts: Vec<OpenInterval>) -> Self {
        parts.sort();
        let mut out: Vec<OpenInterval> = Vec::with_capacity(parts.len());
        for iv in parts {
            match out.last_mut() {
                Some(last) if iv.lo < last.hi => {
                    if iv.hi > last.hi {
                        last.hi = iv.hi;
                    }
                }
                _ => out.push(iv),
            }
        }
        IntervalSet { parts: out }
    }

    pub fn parts(&self) -> &[OpenInterval] {
        &self.parts
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn as_single(&self) -> Option<&OpenInterval> {
        match self.parts.as_slice() {
            [iv] => Some(iv),
            _ => None,
        }
    }

    pub fn contains(&self, x: &Rational) -> bool {
        self.parts.iter().any(|iv| iv.contains(x))
    }

    /// Smallest open interval containing the set.
    pub fn hull(&self) -> Option<OpenInterval> {
        let first = self.parts.first()?;
        let last = self.parts.last()?;
        Some(OpenInterval {
            lo: first.lo.clone(),
            hi: last.hi.clone(),
        })
    }

    pub fn is_bounded(&self) -> bool {
        self.hull().is_none_or(|h| h.is_bounded())
    }

    pub fn union(&self, other: &IntervalSet) -> IntervalSet {
        let mut all = self.parts.clone();
        all.extend(other.parts.iter().cloned());
        IntervalSet::from_intervals(all)
    }

    pub fn intersect(&self, other: &IntervalSet) -> IntervalSet {
        let mut out = Vec::new();
        for a in &self.parts {
            for b in &other.parts {
                if let Some(c) = a.intersect(b) {
                    out.push(c);
                }
            }
        }
        IntervalSet::from_intervals(out)
    }

    pub fn is_disjoint(&self, other: &IntervalSet) -> bool {
        self.intersect(other).is_empty()
    }

    /// Image under an increasing PL homeomorphism, computed endpoint-wise.
    pub fn image(&self, f: &PlMap) -> IntervalSet {
        IntervalSet {
            parts: self.parts.iter().map(|iv| iv.image(f)).collect(),
        }
    }

    /// Component-wise inclusion.
    pub fn is_subset(&self, other: &IntervalSet) -> bool {
        self.parts
            .iter()
            .all(|a| other.parts.iter().any(|b| b.contains_interval(a)))
    }
}

impl fmt::Display for IntervalSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return write!(f, "∅");
        }
        for (i, iv) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, " ∪ ")?;
            }
            write!(f, "{iv}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn iv(a: i64, b: i64) -> OpenInterval {
        OpenInterval::finite(int(a), int(b)).unwrap()
    }

    #[test]
    fn merges_overlaps_keeps_touching() {
        let s = IntervalSet::from_intervals(vec![iv(2, 4), iv(0, 3), iv(4, 5)]);
        assert_eq!(s.parts(), &[iv(0, 4), iv(4, 5)]);
        assert!(!s.contains(&int(4)));
    }

    #[test]
    fn intersection_and_hull() {
        let s = IntervalSet::from_intervals(vec![iv(0, 2), iv(3, 6)]);
        let t = IntervalSet::single(iv(1, 4));
        assert_eq!(s.intersect(&t).parts(), &[iv(1, 2), iv(3, 4)]);
        assert_eq!(s.hull().unwrap(), iv(0, 6));
        assert!(s.is_disjoint(&IntervalSet::single(iv(2, 3))));
    }

    #[test]
    fn degenerate_interval_rejected() {
        assert!(OpenInterval::finite(int(1), int(1)).is_none());
        assert!(OpenInterval::new(ExtPoint::PosInf, ExtPoint::NegInf).is_none());
    }
}

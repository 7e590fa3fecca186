//! Bit-set over a universe of at most 128 elements, plus lexicographic
//! combination enumeration.

use std::fmt;
use std::ops::{BitAnd, BitAndAssign, BitOr, BitOrAssign, Sub, SubAssign};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub const MAX_ELEMENTS: usize = 128;

/// Rejects universes that do not fit in a [`Subset`].
pub fn check_universe(n: usize) -> Result<()> {
    if n > MAX_ELEMENTS {
        Err(Error::UniverseTooLarge {
            n,
            max: MAX_ELEMENTS,
        })
    } else {
        Ok(())
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Subset(u128);

impl Subset {
    pub const EMPTY: Subset = Subset(0);

    pub const fn from_bits(bits: u128) -> Self {
        Subset(bits)
    }

    pub const fn bits(self) -> u128 {
        self.0
    }

    pub fn singleton(e: usize) -> Self {
        debug_assert!(e < MAX_ELEMENTS);
        Subset(1u128 << e)
    }

    /// Elements `lo..hi`.
    pub fn range(lo: usize, hi: usize) -> Self {
        if hi <= lo {
            return Subset::EMPTY;
        }
        let width = hi - lo;
        let ones = if width >= 128 {
            u128::MAX
        } else {
            (1u128 << width) - 1
        };
        Subset(ones << lo)
    }

    /// Elements `0..n`.
    pub fn full(n: usize) -> Self {
        Subset::range(0, n)
    }

    pub fn contains(self, e: usize) -> bool {
        e < MAX_ELEMENTS && self.0 >> e & 1 == 1
    }

    pub fn insert(&mut self, e: usize) {
        self.0 |= 1u128 << e;
    }

    pub fn remove(&mut self, e: usize) {
        self.0 &= !(1u128 << e);
    }

    pub fn with(self, e: usize) -> Self {
        Subset(self.0 | 1u128 << e)
    }

    pub fn without(self, e: usize) -> Self {
        Subset(self.0 & !(1u128 << e))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_disjoint(self, other: Subset) -> bool {
        self.0 & other.0 == 0
    }

    pub fn is_subset(self, other: Subset) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn min(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    pub fn max(self) -> Option<usize> {
        (self.0 != 0).then(|| 127 - self.0.leading_zeros() as usize)
    }

    pub fn iter(self) -> Iter {
        Iter(self.0)
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }
}

pub struct Iter(u128);

impl Iterator for Iter {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let e = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(e)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl IntoIterator for Subset {
    type Item = usize;
    type IntoIter = Iter;
    fn into_iter(self) -> Iter {
        self.iter()
    }
}

impl FromIterator<usize> for Subset {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = Subset::EMPTY;
        for e in iter {
            s.insert(e);
        }
        s
    }
}

impl<'a> FromIterator<&'a usize> for Subset {
    fn from_iter<I: IntoIterator<Item = &'a usize>>(iter: I) -> Self {
        iter.into_iter().copied().collect()
    }
}

macro_rules! bit_op {
    ($tr:ident, $f:ident, $atr:ident, $af:ident, $op:tt) => {
        impl $tr for Subset {
            type Output = Subset;
            fn $f(self, rhs: Subset) -> Subset {
                Subset(self.0 $op rhs.0)
            }
        }
        impl $atr for Subset {
            fn $af(&mut self, rhs: Subset) {
                self.0 = self.0 $op rhs.0;
            }
        }
    };
}

bit_op!(BitOr, bitor, BitOrAssign, bitor_assign, |);
bit_op!(BitAnd, bitand, BitAndAssign, bitand_assign, &);

impl Sub for Subset {
    type Output = Subset;
    fn sub(self, rhs: Subset) -> Subset {
        Subset(self.0 & !rhs.0)
    }
}

impl SubAssign for Subset {
    fn sub_assign(&mut self, rhs: Subset) {
        self.0 &= !rhs.0;
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl Serialize for Subset {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.iter())
    }
}

impl<'de> Deserialize<'de> for Subset {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let elems = Vec::<usize>::deserialize(d)?;
        if let Some(&bad) = elems.iter().find(|&&e| e >= MAX_ELEMENTS) {
            return Err(serde::de::Error::custom(format!(
                "element {bad} exceeds the supported universe"
            )));
        }
        Ok(elems.into_iter().collect())
    }
}

/// Saturating binomial coefficient.
pub fn binomial(n: usize, r: usize) -> u128 {
    if r > n {
        return 0;
    }
    let r = r.min(n - r);
    let mut acc: u128 = 1;
    for i in 0..r {
        // acc * (n - i) / (i + 1) stays integral at every step
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

/// All `r`-element subsets of `pool`, in lexicographic order of their sorted
/// element lists.
pub struct Combinations {
    pool: Vec<usize>,
    idx: Vec<usize>,
    done: bool,
}

impl Combinations {
    pub fn new(pool: Subset, r: usize) -> Self {
        let pool = pool.to_vec();
        let done = r > pool.len();
        Combinations {
            pool,
            idx: (0..r).collect(),
            done,
        }
    }
}

impl Iterator for Combinations {
    type Item = Subset;

    fn next(&mut self) -> Option<Subset> {
        if self.done {
            return None;
        }
        let out: Subset = self.idx.iter().map(|&i| self.pool[i]).collect();
        let r = self.idx.len();
        let n = self.pool.len();
        let mut i = r;
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.idx[i] < n - r + i {
                self.idx[i] += 1;
                for j in i + 1..r {
                    self.idx[j] = self.idx[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_ops() {
        let a: Subset = [0, 3, 5].iter().collect();
        let b: Subset = [3, 4].iter().collect();
        assert_eq!((a | b).to_vec(), vec![0, 3, 4, 5]);
        assert_eq!((a & b).to_vec(), vec![3]);
        assert_eq!((a - b).to_vec(), vec![0, 5]);
        assert_eq!(a.min(), Some(0));
        assert_eq!(a.max(), Some(5));
        assert!(!a.is_disjoint(b));
        assert!(Subset::singleton(3).is_subset(a));
        assert_eq!(Subset::full(128).len(), 128);
        assert_eq!(Subset::range(126, 128).to_vec(), vec![126, 127]);
        assert_eq!(format!("{a:?}"), "{0, 3, 5}");
    }

    #[test]
    fn combinations_are_lexicographic() {
        let all: Vec<Vec<usize>> = Combinations::new(Subset::full(4), 2)
            .map(Subset::to_vec)
            .collect();
        assert_eq!(
            all,
            vec![
                vec![0, 1],
                vec![0, 2],
                vec![0, 3],
                vec![1, 2],
                vec![1, 3],
                vec![2, 3]
            ]
        );
        assert_eq!(Combinations::new(Subset::full(3), 0).count(), 1);
        assert_eq!(Combinations::new(Subset::full(3), 4).count(), 0);
        assert_eq!(Combinations::new(Subset::full(12), 5).count(), 792);
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(12, 5), 792);
        assert_eq!(binomial(5, 0), 1);
        assert_eq!(binomial(3, 4), 0);
        assert_eq!(binomial(60, 30), 118_264_581_564_861_424);
    }

    #[test]
    fn serde_as_element_list() {
        let a: Subset = [1, 2, 7].iter().collect();
        let json = serde_json::to_string(&a).unwrap();
        assert_eq!(json, "[1,2,7]");
        let back: Subset = serde_json::from_str(&json).unwrap();
        assert_eq!(back, a);
        assert!(serde_json::from_str::<Subset>("[200]").is_err());
    }
}

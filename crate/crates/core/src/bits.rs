//! Fixed-width bitsets used for subsets of finite point sets.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{BitAnd, BitOr, Sub};

const WORDS: usize = 4;

/// Largest universe a [`Bits`] value can index.
pub const MAX_BITS: usize = 64 * WORDS;

/// A subset of `0..MAX_BITS`, ordered numerically (bit `i` has weight `2^i`).
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct Bits([u64; WORDS]);

impl Bits {
    pub const EMPTY: Bits = Bits([0; WORDS]);

    /// The set `{0, ..., n-1}`.
    pub fn full(n: usize) -> Bits {
        assert!(n <= MAX_BITS, "universe of {n} exceeds {MAX_BITS}");
        let mut w = [0u64; WORDS];
        for (i, word) in w.iter_mut().enumerate() {
            let lo = i * 64;
            if n >= lo + 64 {
                *word = u64::MAX;
            } else if n > lo {
                *word = (1u64 << (n - lo)) - 1;
            }
        }
        Bits(w)
    }

    pub fn singleton(i: usize) -> Bits {
        let mut b = Bits::EMPTY;
        b.insert(i);
        b
    }

    pub fn from_u64(v: u64) -> Bits {
        Bits([v, 0, 0, 0])
    }

    /// Low 64 bits; callers use this only for universes of at most 64 elements.
    pub fn low_u64(self) -> u64 {
        self.0[0]
    }

    #[inline]
    pub fn contains(self, i: usize) -> bool {
        i < MAX_BITS && self.0[i / 64] >> (i % 64) & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, i: usize) {
        assert!(i < MAX_BITS, "bit {i} exceeds {MAX_BITS}");
        self.0[i / 64] |= 1 << (i % 64);
    }

    #[inline]
    pub fn remove(&mut self, i: usize) {
        if i < MAX_BITS {
            self.0[i / 64] &= !(1 << (i % 64));
        }
    }

    pub fn with(mut self, i: usize) -> Bits {
        self.insert(i);
        self
    }

    #[inline]
    pub fn union(self, o: Bits) -> Bits {
        let mut w = self.0;
        for (a, b) in w.iter_mut().zip(o.0) {
            *a |= b;
        }
        Bits(w)
    }

    #[inline]
    pub fn inter(self, o: Bits) -> Bits {
        let mut w = self.0;
        for (a, b) in w.iter_mut().zip(o.0) {
            *a &= b;
        }
        Bits(w)
    }

    #[inline]
    pub fn minus(self, o: Bits) -> Bits {
        let mut w = self.0;
        for (a, b) in w.iter_mut().zip(o.0) {
            *a &= !b;
        }
        Bits(w)
    }

    /// Complement relative to `{0, ..., n-1}`.
    pub fn complement(self, n: usize) -> Bits {
        Bits::full(n).minus(self)
    }

    #[inline]
    pub fn is_subset(self, o: Bits) -> bool {
        self.minus(o).is_empty()
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }

    #[inline]
    pub fn intersects(self, o: Bits) -> bool {
        !self.inter(o).is_empty()
    }

    pub fn count(self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn first(self) -> Option<usize> {
        self.iter().next()
    }

    pub fn iter(self) -> BitsIter {
        BitsIter { bits: self, word: 0 }
    }
}

pub struct BitsIter {
    bits: Bits,
    word: usize,
}

impl Iterator for BitsIter {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        while self.word < WORDS {
            let w = self.bits.0[self.word];
            if w != 0 {
                let t = w.trailing_zeros() as usize;
                self.bits.0[self.word] &= w - 1;
                return Some(self.word * 64 + t);
            }
            self.word += 1;
        }
        None
    }
}

impl FromIterator<usize> for Bits {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut b = Bits::EMPTY;
        for i in iter {
            b.insert(i);
        }
        b
    }
}

impl Ord for Bits {
    fn cmp(&self, other: &Self) -> Ordering {
        for i in (0..WORDS).rev() {
            match self.0[i].cmp(&other.0[i]) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        Ordering::Equal
    }
}

impl PartialOrd for Bits {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl BitOr for Bits {
    type Output = Bits;
    fn bitor(self, o: Bits) -> Bits {
        self.union(o)
    }
}

impl BitAnd for Bits {
    type Output = Bits;
    fn bitand(self, o: Bits) -> Bits {
        self.inter(o)
    }
}

impl Sub for Bits {
    type Output = Bits;
    fn sub(self, o: Bits) -> Bits {
        self.minus(o)
    }
}

impl fmt::Debug for Bits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// Iterate over all subsets of `mask` (including empty and `mask` itself).
pub fn subsets_of(mask: u64) -> impl Iterator<Item = u64> {
    let mut cur = Some(0u64);
    std::iter::from_fn(move || {
        let out = cur?;
        cur = if out == mask { None } else { Some((out.wrapping_sub(mask)) & mask) };
        Some(out)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_and_complement() {
        assert_eq!(Bits::full(0), Bits::EMPTY);
        assert_eq!(Bits::full(3).iter().collect::<Vec<_>>(), vec![0, 1, 2]);
        assert_eq!(Bits::full(130).count(), 130);
        assert_eq!(Bits::singleton(1).complement(3), [0, 2].into_iter().collect());
    }

    #[test]
    fn numeric_order_spans_words() {
        assert!(Bits::singleton(70) > Bits::full(64));
        assert!(Bits::singleton(1) > Bits::singleton(0));
    }

    #[test]
    fn subset_enumeration_counts() {
        assert_eq!(subsets_of(0b1011).count(), 8);
        assert_eq!(subsets_of(0).collect::<Vec<_>>(), vec![0]);
    }
}

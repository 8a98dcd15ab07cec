use std::fmt;

use crate::bits::Bits;
use crate::error::{Error, Result};
use crate::finspace::FinSpace;

/// A relation between the points of two models, stored row by row.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Relation {
    left: usize,
    right: usize,
    rows: Vec<Bits>,
}

impl Relation {
    pub fn empty(left: usize, right: usize) -> Relation {
        Relation { left, right, rows: vec![Bits::EMPTY; left] }
    }

    pub fn full(left: usize, right: usize) -> Relation {
        Relation { left, right, rows: vec![Bits::full(right); left] }
    }

    pub fn identity(n: usize) -> Relation {
        Relation { left: n, right: n, rows: (0..n).map(Bits::singleton).collect() }
    }

    pub fn from_pairs(left: usize, right: usize, pairs: &[(usize, usize)]) -> Result<Relation> {
        let mut r = Relation::empty(left, right);
        for &(x, y) in pairs {
            if x >= left {
                return Err(Error::OutOfRange { index: x, len: left });
            }
            if y >= right {
                return Err(Error::OutOfRange { index: y, len: right });
            }
            r.insert(x, y);
        }
        Ok(r)
    }

    pub fn left_len(&self) -> usize {
        self.left
    }

    pub fn right_len(&self) -> usize {
        self.right
    }

    pub fn contains(&self, x: usize, y: usize) -> bool {
        self.rows[x].contains(y)
    }

    pub fn insert(&mut self, x: usize, y: usize) {
        self.rows[x].insert(y);
    }

    pub fn remove(&mut self, x: usize, y: usize) {
        self.rows[x].remove(y);
    }

    pub fn row(&self, x: usize) -> Bits {
        self.rows[x]
    }

    pub fn pairs(&self) -> Vec<(usize, usize)> {
        (0..self.left).flat_map(|x| self.rows[x].iter().map(move |y| (x, y))).collect()
    }

    pub fn len(&self) -> usize {
        self.rows.iter().map(|r| r.count()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.iter().all(|r| r.is_empty())
    }

    pub fn union(&self, other: &Relation) -> Relation {
        let rows = self.rows.iter().zip(&other.rows).map(|(&a, &b)| a | b).collect();
        Relation { left: self.left, right: self.right, rows }
    }

    pub fn intersection(&self, other: &Relation) -> Relation {
        let rows = self.rows.iter().zip(&other.rows).map(|(&a, &b)| a & b).collect();
        Relation { left: self.left, right: self.right, rows }
    }

    pub fn is_subset(&self, other: &Relation) -> bool {
        self.rows.iter().zip(&other.rows).all(|(a, b)| a.is_subset(*b))
    }

    /// `B[a]`.
    pub fn image(&self, a: Bits) -> Bits {
        a.iter().fold(Bits::EMPTY, |acc, x| acc | self.rows[x])
    }

    /// `B⁻¹[b]`.
    pub fn preimage(&self, b: Bits) -> Bits {
        (0..self.left).filter(|&x| self.rows[x].intersects(b)).collect()
    }

    pub fn inverse(&self) -> Relation {
        let mut r = Relation::empty(self.right, self.left);
        for (x, y) in self.pairs() {
            r.insert(y, x);
        }
        r
    }

    pub fn render(&self, left: &FinSpace, right: &FinSpace) -> Vec<(String, String)> {
        self.pairs().into_iter().map(|(x, y)| (left.name(x).to_string(), right.name(y).to_string())).collect()
    }
}

impl fmt::Debug for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.pairs()).finish()
    }
}

/// Largest number of open pairs examined for coherence.
pub const MAX_OPEN_PAIRS: usize = 1 << 16;

/// All `(a, a')` of opens with `B[a] ⊆ a'` and `B⁻¹[a'] ⊆ a`.
pub fn coherent_pairs(b: &Relation, left: &FinSpace, right: &FinSpace) -> Result<Vec<(Bits, Bits)>> {
    let (lo, ro) = (left.opens(), right.opens());
    if lo.len() * ro.len() > MAX_OPEN_PAIRS {
        return Err(Error::resource("open pairs for coherence", MAX_OPEN_PAIRS));
    }
    let mut out = Vec::new();
    for &a in &lo {
        let img = b.image(a);
        for &a2 in &ro {
            if img.is_subset(a2) && b.preimage(a2).is_subset(a) {
                out.push((a, a2));
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_relation_makes_every_pair_coherent() {
        let x = FinSpace::discrete_n(2);
        let pairs = coherent_pairs(&Relation::empty(2, 2), &x, &x).unwrap();
        assert_eq!(pairs.len(), 16);
    }

    #[test]
    fn identity_gives_the_diagonal() {
        let x = FinSpace::sierpinski();
        let pairs = coherent_pairs(&Relation::identity(2), &x, &x).unwrap();
        assert!(pairs.iter().all(|(a, b)| a == b));
        assert_eq!(pairs.len(), x.opens().len());
    }

    #[test]
    fn full_relation_on_two_points() {
        // B[a] is everything once a is non-empty, so a non-empty a needs a' full
        // and then B⁻¹[a'] is everything, forcing a full as well
        let x = FinSpace::discrete_n(2);
        let pairs = coherent_pairs(&Relation::full(2, 2), &x, &x).unwrap();
        assert_eq!(pairs, vec![(Bits::EMPTY, Bits::EMPTY), (Bits::full(2), Bits::full(2))]);
    }

    #[test]
    fn pairs_round_trip() {
        let r = Relation::from_pairs(2, 3, &[(0, 2), (1, 0)]).unwrap();
        assert_eq!(r.pairs(), vec![(0, 2), (1, 0)]);
        assert_eq!(r.inverse().inverse(), r);
        assert!(Relation::from_pairs(2, 3, &[(2, 0)]).is_err());
    }
}

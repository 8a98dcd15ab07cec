use crate::bits::Bits;
use crate::error::{Error, Result};

use super::space::FinSpace;

/// A total map between finite spaces. Continuity is a checked property, not a
/// construction invariant, so candidate maps can be represented and rejected.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContMap {
    source: FinSpace,
    target: FinSpace,
    map: Vec<usize>,
}

impl ContMap {
    pub fn new(source: FinSpace, target: FinSpace, map: Vec<usize>) -> Result<ContMap> {
        if map.len() != source.len() {
            return Err(Error::Invalid(format!(
                "assignment has {} entries for {} source points",
                map.len(),
                source.len()
            )));
        }
        if let Some(&bad) = map.iter().find(|&&y| y >= target.len()) {
            return Err(Error::OutOfRange { index: bad, len: target.len() });
        }
        Ok(ContMap { source, target, map })
    }

    /// Same as [`ContMap::new`] but also rejects discontinuous assignments.
    pub fn continuous(source: FinSpace, target: FinSpace, map: Vec<usize>) -> Result<ContMap> {
        let f = ContMap::new(source, target, map)?;
        if let Some(y) = f.discontinuity() {
            return Err(Error::NotContinuous(format!(
                "preimage of the neighbourhood {} of `{}` is not open",
                f.target.render(f.target.nbhd(y)),
                f.target.name(y)
            )));
        }
        Ok(f)
    }

    /// Build from `(source name, target name)` pairs.
    pub fn from_names(source: FinSpace, target: FinSpace, pairs: &[(&str, &str)]) -> Result<ContMap> {
        let mut map = vec![usize::MAX; source.len()];
        for (a, b) in pairs {
            let x = source.index_of(a)?;
            map[x] = target.index_of(b)?;
        }
        if let Some(x) = map.iter().position(|&y| y == usize::MAX) {
            return Err(Error::Invalid(format!("no image given for `{}`", source.name(x))));
        }
        ContMap::new(source, target, map)
    }

    pub fn identity(x: &FinSpace) -> ContMap {
        ContMap { source: x.clone(), target: x.clone(), map: (0..x.len()).collect() }
    }

    pub fn source(&self) -> &FinSpace {
        &self.source
    }

    pub fn target(&self) -> &FinSpace {
        &self.target
    }

    pub fn assignment(&self) -> &[usize] {
        &self.map
    }

    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    pub fn preimage(&self, s: Bits) -> Bits {
        (0..self.map.len()).filter(|&x| s.contains(self.map[x])).collect()
    }

    pub fn image(&self, s: Bits) -> Bits {
        s.iter().map(|x| self.map[x]).collect()
    }

    /// A target point whose minimal neighbourhood has a non-open preimage.
    fn discontinuity(&self) -> Option<usize> {
        (0..self.target.len()).find(|&y| !self.source.is_open(self.preimage(self.target.nbhd(y))))
    }

    /// Preimages of all target opens are open. Checking the minimal
    /// neighbourhoods suffices since they form a base.
    pub fn is_continuous(&self) -> bool {
        self.discontinuity().is_none()
    }

    /// `g ∘ self`.
    pub fn then(&self, g: &ContMap) -> Result<ContMap> {
        if self.target != g.source {
            return Err(Error::Invalid("maps are not composable".into()));
        }
        Ok(ContMap {
            source: self.source.clone(),
            target: g.target.clone(),
            map: self.map.iter().map(|&y| g.map[y]).collect(),
        })
    }

    pub fn is_bijective(&self) -> bool {
        self.source.len() == self.target.len() && self.image(self.source.full()) == self.target.full()
    }

    pub fn is_injective(&self) -> bool {
        self.image(self.source.full()).count() == self.source.len()
    }

    /// Bijective, and carries each minimal neighbourhood onto the minimal
    /// neighbourhood of the image point.
    pub fn is_homeomorphism(&self) -> bool {
        self.is_bijective()
            && (0..self.source.len()).all(|x| self.image(self.source.nbhd(x)) == self.target.nbhd(self.map[x]))
    }

    pub fn inverse(&self) -> Option<ContMap> {
        if !self.is_bijective() {
            return None;
        }
        let mut inv = vec![0; self.map.len()];
        for (x, &y) in self.map.iter().enumerate() {
            inv[y] = x;
        }
        Some(ContMap { source: self.target.clone(), target: self.source.clone(), map: inv })
    }
}

/// Search for a homeomorphism `a → b` by backtracking over points, pruning on
/// the sizes of up- and down-sets in the specialisation order.
pub fn find_homeomorphism(a: &FinSpace, b: &FinSpace) -> Option<ContMap> {
    let n = a.len();
    if n != b.len() {
        return None;
    }
    let sig = |s: &FinSpace, x: usize| {
        let up = s.nbhd(x).count();
        let down = (0..s.len()).filter(|&y| s.nbhd(y).contains(x)).count();
        (up, down)
    };
    let sa: Vec<_> = (0..n).map(|x| sig(a, x)).collect();
    let sb: Vec<_> = (0..n).map(|y| sig(b, y)).collect();
    let mut ca = sa.clone();
    let mut cb = sb.clone();
    ca.sort();
    cb.sort();
    if ca != cb {
        return None;
    }
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn go(
        x: usize,
        a: &FinSpace,
        b: &FinSpace,
        sa: &[(usize, usize)],
        sb: &[(usize, usize)],
        map: &mut Vec<usize>,
        used: &mut Vec<bool>,
    ) -> bool {
        if x == a.len() {
            return true;
        }
        for y in 0..b.len() {
            if used[y] || sa[x] != sb[y] {
                continue;
            }
            let consistent = (0..x).all(|x2| {
                let y2 = map[x2];
                a.nbhd(x).contains(x2) == b.nbhd(y).contains(y2) && a.nbhd(x2).contains(x) == b.nbhd(y2).contains(y)
            });
            if !consistent {
                continue;
            }
            map[x] = y;
            used[y] = true;
            if go(x + 1, a, b, sa, sb, map, used) {
                return true;
            }
            used[y] = false;
        }
        map[x] = usize::MAX;
        false
    }
    if go(0, a, b, &sa, &sb, &mut map, &mut used) {
        let f = ContMap::new(a.clone(), b.clone(), map).ok()?;
        debug_assert!(f.is_homeomorphism());
        Some(f)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_on_sierpinski_is_continuous() {
        assert!(ContMap::identity(&FinSpace::sierpinski()).is_continuous());
    }

    #[test]
    fn constant_map_is_continuous() {
        let d = FinSpace::discrete(vec!["0".into(), "1".into()]).unwrap();
        let f = ContMap::from_names(d, FinSpace::sierpinski(), &[("0", "1"), ("1", "1")]).unwrap();
        assert!(f.is_continuous());
    }

    #[test]
    fn swap_on_sierpinski_is_not_continuous() {
        let s = FinSpace::sierpinski();
        let f = ContMap::new(s.clone(), s, vec![1, 0]).unwrap();
        assert!(!f.is_continuous());
        assert_eq!(f.preimage(Bits::singleton(1)), Bits::singleton(0));
    }

    #[test]
    fn assignment_outside_target_rejected() {
        let s = FinSpace::sierpinski();
        assert!(matches!(ContMap::new(s.clone(), s, vec![0, 5]), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn homeomorphism_search_respects_orientation() {
        let s = FinSpace::sierpinski();
        let flipped = FinSpace::new(vec!["a".into(), "b".into()], &[Bits::singleton(0)]).unwrap();
        let h = find_homeomorphism(&s, &flipped).unwrap();
        assert_eq!(h.assignment(), &[1, 0]);
        assert!(find_homeomorphism(&s, &FinSpace::two_trivial()).is_none());
    }
}

use std::collections::{HashMap, HashSet};
use std::fmt;

use crate::bits::{Bits, MAX_BITS};
use crate::error::{Error, Result};

/// A finite topological space.
///
/// A finite topology is determined by the minimal open neighbourhood `U_x` of
/// each point; the opens are exactly the unions of these. The neighbourhood
/// vector is therefore the canonical representation, and [`FinSpace::opens`]
/// enumerates the open sets in canonical bitmask order on demand.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FinSpace {
    points: Vec<String>,
    nbhd: Vec<Bits>,
}

impl FinSpace {
    /// Topology generated by `subbase` (closed under finite unions and intersections,
    /// with the empty set and the whole space adjoined).
    pub fn new(points: Vec<String>, subbase: &[Bits]) -> Result<FinSpace> {
        check_points(&points)?;
        let n = points.len();
        let full = Bits::full(n);
        for s in subbase {
            if !s.is_subset(full) {
                return Err(Error::Invalid(format!("subbase member {s:?} is not a subset of the points")));
            }
        }
        let nbhd = (0..n)
            .map(|x| subbase.iter().filter(|s| s.contains(x)).fold(full, |acc, s| acc & *s))
            .collect();
        Ok(FinSpace { points, nbhd })
    }

    /// Convenience constructor from names.
    pub fn from_names(points: &[&str], subbase: &[&[&str]]) -> Result<FinSpace> {
        let pts: Vec<String> = points.iter().map(|s| s.to_string()).collect();
        check_points(&pts)?;
        let index: HashMap<&str, usize> = points.iter().enumerate().map(|(i, p)| (*p, i)).collect();
        let mut sb = Vec::new();
        for set in subbase {
            let mut b = Bits::EMPTY;
            for p in *set {
                b.insert(*index.get(p).ok_or_else(|| Error::UnknownPoint(p.to_string()))?);
            }
            sb.push(b);
        }
        FinSpace::new(pts, &sb)
    }

    /// Build from an explicit list of opens, which must already be a topology.
    pub fn from_opens(points: Vec<String>, opens: &[Bits]) -> Result<FinSpace> {
        check_points(&points)?;
        let full = Bits::full(points.len());
        let family: HashSet<Bits> = opens.iter().copied().collect();
        if !family.contains(&Bits::EMPTY) {
            return Err(Error::NotATopology("the empty set is not listed as open".into()));
        }
        if !family.contains(&full) {
            return Err(Error::NotATopology("the whole space is not listed as open".into()));
        }
        for a in &family {
            if !a.is_subset(full) {
                return Err(Error::NotATopology(format!("{a:?} is not a subset of the points")));
            }
            for b in &family {
                if !family.contains(&(*a | *b)) || !family.contains(&(*a & *b)) {
                    return Err(Error::NotATopology(format!(
                        "opens {} and {} are not closed under union and intersection",
                        render_set(&points, *a),
                        render_set(&points, *b)
                    )));
                }
            }
        }
        FinSpace::new(points, opens)
    }

    pub fn discrete(points: Vec<String>) -> Result<FinSpace> {
        let sb: Vec<Bits> = (0..points.len()).map(Bits::singleton).collect();
        FinSpace::new(points, &sb)
    }

    pub fn indiscrete(points: Vec<String>) -> Result<FinSpace> {
        FinSpace::new(points, &[])
    }

    /// Discrete space on `n` points named `x0, x1, ...`.
    pub fn discrete_n(n: usize) -> FinSpace {
        FinSpace::discrete(numbered(n)).expect("numbered points are distinct")
    }

    /// The Sierpinski space: points `0`, `1`, with `{1}` open.
    pub fn sierpinski() -> FinSpace {
        FinSpace::new(vec!["0".into(), "1".into()], &[Bits::singleton(1)]).unwrap()
    }

    /// Two points `0`, `1` with the trivial topology.
    pub fn two_trivial() -> FinSpace {
        FinSpace::indiscrete(vec!["0".into(), "1".into()]).unwrap()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.points
    }

    pub fn name(&self, i: usize) -> &str {
        &self.points[i]
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.points.iter().position(|p| p == name).ok_or_else(|| Error::UnknownPoint(name.to_string()))
    }

    /// Subset from point names.
    pub fn set_of(&self, names: &[&str]) -> Result<Bits> {
        names.iter().map(|n| self.index_of(n)).collect::<Result<Vec<_>>>().map(|v| v.into_iter().collect())
    }

    pub fn full(&self) -> Bits {
        Bits::full(self.len())
    }

    /// Minimal open neighbourhood of point `x`.
    pub fn nbhd(&self, x: usize) -> Bits {
        self.nbhd[x]
    }

    pub fn nbhds(&self) -> &[Bits] {
        &self.nbhd
    }

    pub fn is_open(&self, s: Bits) -> bool {
        s.is_subset(self.full()) && s.iter().all(|x| self.nbhd[x].is_subset(s))
    }

    pub fn is_closed(&self, s: Bits) -> bool {
        self.is_open(s.complement(self.len()))
    }

    /// Largest open contained in `s`.
    pub fn interior(&self, s: Bits) -> Bits {
        (0..self.len()).filter(|&x| self.nbhd[x].is_subset(s)).collect()
    }

    /// Smallest closed set containing `s`.
    pub fn closure(&self, s: Bits) -> Bits {
        let n = self.len();
        self.interior(s.complement(n)).complement(n)
    }

    /// Smallest open containing `s`.
    pub fn saturation(&self, s: Bits) -> Bits {
        s.iter().fold(Bits::EMPTY, |acc, x| acc | self.nbhd[x])
    }

    /// Specialisation preorder: `x ⊑ y` iff every open containing `x` contains `y`.
    pub fn specializes(&self, x: usize, y: usize) -> bool {
        self.nbhd[x].contains(y)
    }

    pub fn is_t0(&self) -> bool {
        let distinct: HashSet<Bits> = self.nbhd.iter().copied().collect();
        distinct.len() == self.len()
    }

    pub fn is_discrete(&self) -> bool {
        self.nbhd.iter().enumerate().all(|(x, u)| *u == Bits::singleton(x))
    }

    /// Number of opens, computed without materialising them when the space is discrete.
    pub fn open_count_hint(&self) -> Option<usize> {
        if self.is_discrete() && self.len() < 63 {
            Some(1usize << self.len())
        } else {
            None
        }
    }

    /// All opens in canonical (numeric bitmask) order.
    pub fn opens(&self) -> Vec<Bits> {
        self.try_opens(usize::MAX).expect("unbounded enumeration")
    }

    /// All opens, failing with a resource error once more than `limit` are found.
    pub fn try_opens(&self, limit: usize) -> Result<Vec<Bits>> {
        let mut seen: HashSet<Bits> = HashSet::new();
        seen.insert(Bits::EMPTY);
        let mut all = vec![Bits::EMPTY];
        for x in 0..self.len() {
            let u = self.nbhd[x];
            let k = all.len();
            for i in 0..k {
                let o = all[i] | u;
                if seen.insert(o) {
                    if all.len() >= limit {
                        return Err(Error::resource("number of opens", limit));
                    }
                    all.push(o);
                }
            }
        }
        all.sort();
        Ok(all)
    }

    pub fn closed_sets(&self) -> Vec<Bits> {
        let n = self.len();
        let mut c: Vec<Bits> = self.opens().into_iter().map(|o| o.complement(n)).collect();
        c.sort();
        c
    }

    /// Product space with points named `a,b`.
    pub fn product(&self, other: &FinSpace) -> FinSpace {
        let m = other.len();
        let mut names = Vec::with_capacity(self.len() * m);
        for a in &self.points {
            for b in &other.points {
                names.push(format!("({a},{b})"));
            }
        }
        let nbhd = (0..self.len() * m)
            .map(|i| {
                let (x, y) = (i / m, i % m);
                let mut u = Bits::EMPTY;
                for x2 in self.nbhd[x].iter() {
                    for y2 in other.nbhd[y].iter() {
                        u.insert(x2 * m + y2);
                    }
                }
                u
            })
            .collect();
        FinSpace { points: names, nbhd }
    }

    /// The `n`-fold power with points named by concatenating coordinate names.
    pub fn power(&self, n: usize) -> FinSpace {
        let mut acc = FinSpace { points: vec![String::new()], nbhd: vec![Bits::singleton(0)] };
        for _ in 0..n {
            let names = acc.points.iter().flat_map(|a| self.points.iter().map(move |b| format!("{a}{b}"))).collect();
            acc = FinSpace { points: names, nbhd: acc.product(self).nbhd };
        }
        acc
    }

    /// Subspace on the points in `keep`, with the inclusion as index list.
    pub fn subspace(&self, keep: Bits) -> (FinSpace, Vec<usize>) {
        let incl: Vec<usize> = keep.iter().filter(|&x| x < self.len()).collect();
        let pos: HashMap<usize, usize> = incl.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        let nbhd = incl
            .iter()
            .map(|&x| self.nbhd[x].iter().filter_map(|y| pos.get(&y).copied()).collect())
            .collect();
        let points = incl.iter().map(|&x| self.points[x].clone()).collect();
        (FinSpace { points, nbhd }, incl)
    }

    /// Disjoint union; point names are prefixed by the summand tag when they clash.
    pub fn disjoint_union(parts: &[&FinSpace]) -> Result<(FinSpace, Vec<usize>)> {
        let mut points = Vec::new();
        let mut nbhd = Vec::new();
        let mut offsets = Vec::new();
        let mut names: HashSet<String> = HashSet::new();
        let clash = parts.iter().flat_map(|p| p.points.iter()).any(|p| !names.insert(p.clone()));
        for (k, part) in parts.iter().enumerate() {
            let off = points.len();
            if off + part.len() > MAX_BITS {
                return Err(Error::resource("points in a disjoint union", MAX_BITS));
            }
            offsets.push(off);
            for (x, p) in part.points.iter().enumerate() {
                points.push(if clash { format!("{k}.{p}") } else { p.clone() });
                nbhd.push(part.nbhd[x].iter().map(|y| y + off).collect());
            }
        }
        Ok((FinSpace { points, nbhd }, offsets))
    }

    /// Render a subset with point names, e.g. `{x,y}`.
    pub fn render(&self, s: Bits) -> String {
        render_set(&self.points, s)
    }

    /// Names of the points in `s`, in point order.
    pub fn names_of(&self, s: Bits) -> Vec<String> {
        s.iter().filter(|&x| x < self.len()).map(|x| self.points[x].clone()).collect()
    }

    /// Same space with points renamed.
    pub fn renamed(&self, points: Vec<String>) -> Result<FinSpace> {
        if points.len() != self.len() {
            return Err(Error::Invalid("renaming must keep the number of points".into()));
        }
        check_points(&points)?;
        Ok(FinSpace { points, nbhd: self.nbhd.clone() })
    }
}

impl fmt::Debug for FinSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let opens: Vec<String> = if self.len() <= 12 {
            self.opens().into_iter().map(|o| self.render(o)).collect()
        } else {
            self.nbhd.iter().map(|o| self.render(*o)).collect()
        };
        f.debug_struct("FinSpace").field("points", &self.points).field("opens", &opens).finish()
    }
}

pub(crate) fn render_set(points: &[String], s: Bits) -> String {
    let names: Vec<&str> = s.iter().filter(|&x| x < points.len()).map(|x| points[x].as_str()).collect();
    format!("{{{}}}", names.join(","))
}

pub(crate) fn numbered(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("x{i}")).collect()
}

fn check_points(points: &[String]) -> Result<()> {
    if points.len() > MAX_BITS {
        return Err(Error::resource("points in a space", MAX_BITS));
    }
    let mut seen = HashSet::new();
    for p in points {
        if !seen.insert(p.as_str()) {
            return Err(Error::DuplicatePoint(p.clone()));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(x: &FinSpace) -> Vec<String> {
        x.opens().into_iter().map(|o| x.render(o)).collect()
    }

    #[test]
    fn singleton_has_two_opens() {
        let x = FinSpace::from_names(&["x"], &[]).unwrap();
        assert_eq!(names(&x), vec!["{}", "{x}"]);
    }

    #[test]
    fn sierpinski_opens() {
        let s = FinSpace::from_names(&["0", "1"], &[&["1"]]).unwrap();
        assert_eq!(names(&s), vec!["{}", "{1}", "{0,1}"]);
        assert_eq!(s, FinSpace::sierpinski());
    }

    #[test]
    fn closure_of_two_singletons() {
        let x = FinSpace::from_names(&["a", "b", "c"], &[&["a"], &["b"]]).unwrap();
        assert_eq!(names(&x), vec!["{}", "{a}", "{b}", "{a,b}", "{a,b,c}"]);
    }

    #[test]
    fn duplicate_points_rejected() {
        let e = FinSpace::from_names(&["a", "a"], &[]).unwrap_err();
        assert_eq!(e, Error::DuplicatePoint("a".into()));
    }

    #[test]
    fn from_opens_validates_closure() {
        let pts = vec!["a".to_string(), "b".to_string()];
        let bad = FinSpace::from_opens(pts.clone(), &[Bits::EMPTY, Bits::singleton(0), Bits::singleton(1)]);
        assert!(matches!(bad, Err(Error::NotATopology(_))));
        let ok = FinSpace::from_opens(pts, &[Bits::EMPTY, Bits::singleton(0), Bits::full(2)]).unwrap();
        assert_eq!(ok.opens().len(), 3);
    }

    #[test]
    fn product_of_sierpinski_squares() {
        let s2 = FinSpace::sierpinski().power(2);
        assert_eq!(s2.names(), &["00", "01", "10", "11"]);
        // up-sets of the product order on {0,1}^2
        assert_eq!(s2.opens().len(), 6);
    }

    #[test]
    fn subspace_restricts_neighbourhoods() {
        let s = FinSpace::sierpinski();
        let (sub, incl) = s.subspace(Bits::singleton(0));
        assert_eq!(incl, vec![0]);
        assert_eq!(sub.opens().len(), 2);
    }

    #[test]
    fn interior_closure_saturation() {
        let s = FinSpace::sierpinski();
        assert_eq!(s.closure(Bits::singleton(1)), Bits::full(2));
        assert_eq!(s.closure(Bits::singleton(0)), Bits::singleton(0));
        assert_eq!(s.interior(Bits::singleton(0)), Bits::EMPTY);
        assert_eq!(s.saturation(Bits::singleton(0)), Bits::full(2));
    }
}

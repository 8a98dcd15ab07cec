use crate::bits::{Bits, MAX_BITS};
use crate::error::{Error, Result};
use crate::finspace::FinSpace;

use super::presentation::{CTerm, Presentation, RelKind};

/// Bounds for point enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SolveBounds {
    pub max_generators: usize,
    /// Search nodes visited before giving up.
    pub max_nodes: u64,
}

impl Default for SolveBounds {
    fn default() -> Self {
        SolveBounds { max_generators: 24, max_nodes: 1 << 26 }
    }
}

/// The points of a presented frame.
#[derive(Clone, Debug)]
pub struct PresentationPoints {
    pub space: FinSpace,
    /// For each point, the generators it sends to 1.
    pub assignments: Vec<Bits>,
    pub generators: Vec<String>,
}

impl PresentationPoints {
    /// The subbasic open `g̃` of points sending generator `g` to 1.
    pub fn gen_open(&self, g: usize) -> Bits {
        (0..self.assignments.len()).filter(|&p| self.assignments[p].contains(g)).collect()
    }

    pub fn gen_open_named(&self, name: &str) -> Result<Bits> {
        let g = self
            .generators
            .iter()
            .position(|x| x == name)
            .ok_or_else(|| Error::UnknownGenerator(name.to_string()))?;
        Ok(self.gen_open(g))
    }
}

/// Enumerate the assignments of generators into 2 satisfying every relation,
/// by depth-first search that checks each relation as soon as its last
/// generator is assigned.
pub fn presentation_points(p: &Presentation, bounds: SolveBounds) -> Result<PresentationPoints> {
    let n = p.generators().len();
    if n > bounds.max_generators {
        return Err(Error::resource("generators for point enumeration", bounds.max_generators));
    }
    if n > MAX_BITS {
        return Err(Error::resource("generators", MAX_BITS));
    }
    let mut by_level: Vec<Vec<(CTerm, RelKind, CTerm)>> = vec![Vec::new(); n + 1];
    for r in p.relations() {
        let (l, rr) = (p.compile(&r.lhs), p.compile(&r.rhs));
        let level = match (l.max_gen(), rr.max_gen()) {
            (None, None) => 0,
            (a, b) => a.max(b).unwrap() + 1,
        };
        by_level[level].push((l, r.rel, rr));
    }
    let holds = |rels: &[(CTerm, RelKind, CTerm)], a: &Bits| {
        rels.iter().all(|(l, k, r)| {
            let (x, y) = (l.eval(a), r.eval(a));
            match k {
                RelKind::Leq => !x || y,
                RelKind::Eq => x == y,
            }
        })
    };
    let mut found = Vec::new();
    if holds(&by_level[0], &Bits::EMPTY) {
        let mut nodes = 0u64;
        let mut stack: Vec<(usize, Bits)> = vec![(0, Bits::EMPTY)];
        while let Some((k, a)) = stack.pop() {
            nodes += 1;
            if nodes > bounds.max_nodes {
                return Err(Error::resource("search nodes for point enumeration", bounds.max_nodes as usize));
            }
            if k == n {
                found.push(a);
                continue;
            }
            for v in [true, false] {
                let next = if v { a.with(k) } else { a };
                if holds(&by_level[k + 1], &next) {
                    stack.push((k + 1, next));
                }
            }
        }
    }
    found.sort();
    let names = (0..found.len()).map(|i| format!("p{i}")).collect();
    let subbase: Vec<Bits> = (0..n).map(|g| (0..found.len()).filter(|&i| found[i].contains(g)).collect()).collect();
    let space = FinSpace::new(names, &subbase)?;
    Ok(PresentationPoints { space, assignments: found, generators: p.generators().to_vec() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finspace::{find_homeomorphism, FinFrame};
    use crate::framealg::monotone::{present_m, PresentOptions};
    use crate::framealg::presentation::{LatticeTerm, Relation};

    #[test]
    fn m_of_two_has_three_points() {
        let p = present_m(&FinFrame::two(), PresentOptions::default());
        let pts = presentation_points(&p, SolveBounds::default()).unwrap();
        assert_eq!(pts.space.len(), 3);
        // d0 = ¬b1, d1 = ¬b0, b0 ≤ b1
        let idx = |g: &str| p.generator_index(g).unwrap();
        for a in &pts.assignments {
            assert_eq!(a.contains(idx("dia:0")), !a.contains(idx("box:1")));
            assert_eq!(a.contains(idx("dia:1")), !a.contains(idx("box:0")));
            assert!(!a.contains(idx("box:0")) || a.contains(idx("box:1")));
        }
    }

    #[test]
    fn free_on_one_generator_is_sierpinski() {
        let p = Presentation::new(vec!["g".into()], vec![]).unwrap();
        let pts = presentation_points(&p, SolveBounds::default()).unwrap();
        assert!(find_homeomorphism(&pts.space, &FinSpace::sierpinski()).is_some());
    }

    #[test]
    fn generator_equal_top_leaves_one_point() {
        let p = Presentation::new(vec!["g".into()], vec![Relation::eq(LatticeTerm::gen("g"), LatticeTerm::top())])
            .unwrap();
        assert_eq!(presentation_points(&p, SolveBounds::default()).unwrap().space.len(), 1);
    }

    #[test]
    fn generator_bound_is_a_resource_error() {
        let gens = (0..30).map(|i| format!("g{i}")).collect();
        let p = Presentation::new(gens, vec![]).unwrap();
        assert!(presentation_points(&p, SolveBounds::default()).unwrap_err().is_resource());
    }

    #[test]
    fn inconsistent_constant_relation_has_no_points() {
        let p = Presentation::new(vec![], vec![Relation::leq(LatticeTerm::top(), LatticeTerm::bottom())]).unwrap();
        assert_eq!(presentation_points(&p, SolveBounds::default()).unwrap().space.len(), 0);
    }
}

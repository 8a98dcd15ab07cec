//! Presented frames on few generators, by congruence closure on the free
//! distributive lattice.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::finspace::FinFrame;

use super::presentation::{CTerm, Presentation, RelKind};

pub const MAX_FREE_GENERATORS: usize = 5;

/// An element of the free bounded distributive lattice on `n ≤ 5` generators,
/// held as its monotone DNF: an antichain of generator sets, each set a meet.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Dnf(Vec<u32>);

impl Dnf {
    fn generator(g: usize) -> Dnf {
        Dnf(vec![1 << g])
    }

    fn bottom() -> Dnf {
        Dnf(vec![])
    }

    fn top() -> Dnf {
        Dnf(vec![0])
    }

    /// Keep only the minimal terms, sorted.
    fn reduce(mut terms: Vec<u32>) -> Dnf {
        terms.sort_by_key(|t| (t.count_ones(), *t));
        terms.dedup();
        let mut out: Vec<u32> = Vec::new();
        for t in terms {
            if !out.iter().any(|&s| s & t == s) {
                out.push(t);
            }
        }
        out.sort();
        Dnf(out)
    }

    fn join(&self, o: &Dnf) -> Dnf {
        Dnf::reduce(self.0.iter().chain(o.0.iter()).copied().collect())
    }

    fn meet(&self, o: &Dnf) -> Dnf {
        Dnf::reduce(self.0.iter().flat_map(|&a| o.0.iter().map(move |&b| a | b)).collect())
    }

    fn render(&self, gens: &[String]) -> String {
        if self.0.is_empty() {
            return "bot".into();
        }
        let terms: Vec<String> = self
            .0
            .iter()
            .map(|&t| {
                if t == 0 {
                    "top".to_string()
                } else {
                    (0..gens.len()).filter(|g| t >> g & 1 == 1).map(|g| gens[g].clone()).collect::<Vec<_>>().join("&")
                }
            })
            .collect();
        terms.join(" | ")
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra.max(rb)] = ra.min(rb);
        true
    }
}

/// The free lattice with operation tables over element indices.
struct FreeLattice {
    elems: Vec<Dnf>,
    meet: Vec<u32>,
    join: Vec<u32>,
}

impl FreeLattice {
    fn build(n: usize) -> FreeLattice {
        let mut elems: Vec<Dnf> = vec![Dnf::bottom(), Dnf::top()];
        elems.extend((0..n).map(Dnf::generator));
        let mut index: HashMap<Dnf, usize> = elems.iter().cloned().enumerate().map(|(i, d)| (d, i)).collect();
        let mut i = 0;
        while i < elems.len() {
            for j in 0..=i {
                for c in [elems[i].meet(&elems[j]), elems[i].join(&elems[j])] {
                    if !index.contains_key(&c) {
                        index.insert(c.clone(), elems.len());
                        elems.push(c);
                    }
                }
            }
            i += 1;
        }
        let m = elems.len();
        let mut meet = vec![0u32; m * m];
        let mut join = vec![0u32; m * m];
        for a in 0..m {
            for b in a..m {
                let x = index[&elems[a].meet(&elems[b])] as u32;
                let y = index[&elems[a].join(&elems[b])] as u32;
                meet[a * m + b] = x;
                meet[b * m + a] = x;
                join[a * m + b] = y;
                join[b * m + a] = y;
            }
        }
        FreeLattice { elems, meet, join }
    }

    fn eval(&self, t: &CTerm) -> usize {
        let m = self.elems.len();
        t.eval_in(&|g| g + 2, 1, 0, &|a, b| self.meet[a * m + b] as usize, &|a, b| self.join[a * m + b] as usize)
    }
}

/// The presented frame with the image of each generator.
#[derive(Clone, Debug)]
pub struct PresentedFrame {
    pub frame: FinFrame,
    pub generators: Vec<usize>,
}

/// Quotient of the free distributive lattice on the generators by the least
/// congruence containing the relations.
pub fn presented_frame_small(p: &Presentation) -> Result<PresentedFrame> {
    let n = p.generators().len();
    if n > MAX_FREE_GENERATORS {
        return Err(Error::resource("generators for the free lattice", MAX_FREE_GENERATORS));
    }
    let free = FreeLattice::build(n);
    let m = free.elems.len();
    let rels: Vec<(CTerm, RelKind, CTerm)> =
        p.relations().iter().map(|r| (p.compile(&r.lhs), r.rel, p.compile(&r.rhs))).collect();
    let mut pending: Vec<(usize, usize)> = Vec::new();
    for (l, k, r) in &rels {
        let (x, y) = (free.eval(l), free.eval(r));
        match k {
            RelKind::Eq => pending.push((x, y)),
            RelKind::Leq => pending.push((x, free.meet[x * m + y] as usize)),
        }
    }
    let mut uf = UnionFind::new(m);
    while let Some((a, b)) = pending.pop() {
        if uf.union(a, b) {
            for c in 0..m {
                pending.push((free.meet[a * m + c] as usize, free.meet[b * m + c] as usize));
                pending.push((free.join[a * m + c] as usize, free.join[b * m + c] as usize));
            }
        }
    }
    // each class is an interval; name it by its least element
    let mut least: HashMap<usize, usize> = HashMap::new();
    for x in 0..m {
        let r = uf.find(x);
        let e = least.entry(r).or_insert(x);
        *e = free.meet[*e * m + x] as usize;
    }
    let mut classes: Vec<(usize, usize)> = least.into_iter().collect();
    classes.sort_by(|a, b| free.elems[a.1].cmp(&free.elems[b.1]));
    let q = classes.len();
    if q > crate::finspace::MAX_FRAME {
        return Err(Error::resource("elements of the presented frame", crate::finspace::MAX_FRAME));
    }
    let class_of: HashMap<usize, usize> = classes.iter().enumerate().map(|(i, (r, _))| (*r, i)).collect();
    let mut cls = |x: usize| class_of[&uf.find(x)];
    let reps: Vec<usize> = classes.iter().map(|c| c.1).collect();
    let mut qmeet = vec![0u16; q * q];
    let mut qjoin = vec![0u16; q * q];
    for a in 0..q {
        for b in 0..q {
            qmeet[a * q + b] = cls(free.meet[reps[a] * m + reps[b]] as usize) as u16;
            qjoin[a * q + b] = cls(free.join[reps[a] * m + reps[b]] as usize) as u16;
        }
    }
    let names = reps.iter().map(|&r| free.elems[r].render(p.generators())).collect();
    let frame = FinFrame::from_tables(names, qmeet, qjoin)?;
    let generators: Vec<usize> = (0..n).map(|g| cls(g + 2)).collect();
    for (l, k, r) in &rels {
        let (x, y) = (cls(free.eval(l)), cls(free.eval(r)));
        let ok = match k {
            RelKind::Eq => x == y,
            RelKind::Leq => frame.leq(x, y),
        };
        if !ok {
            return Err(Error::Invariant("quotient does not satisfy a relation".into()));
        }
    }
    Ok(PresentedFrame { frame, generators })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finspace::find_frame_iso;
    use crate::framealg::presentation::{LatticeTerm, Relation};

    #[test]
    fn free_lattice_sizes() {
        // Dedekind numbers
        let sizes: Vec<usize> = (0..=4).map(|n| FreeLattice::build(n).elems.len()).collect();
        assert_eq!(sizes, vec![2, 3, 6, 20, 168]);
    }

    #[test]
    fn one_free_generator_is_three_chain() {
        let p = Presentation::new(vec!["g".into()], vec![]).unwrap();
        let f = presented_frame_small(&p).unwrap().frame;
        assert!(find_frame_iso(&f, &FinFrame::chain(3)).is_some());
    }

    #[test]
    fn identified_generators_collapse() {
        let p = Presentation::new(
            vec!["g1".into(), "g2".into()],
            vec![Relation::eq(LatticeTerm::gen("g1"), LatticeTerm::gen("g2"))],
        )
        .unwrap();
        let r = presented_frame_small(&p).unwrap();
        assert!(find_frame_iso(&r.frame, &FinFrame::chain(3)).is_some());
        assert_eq!(r.generators[0], r.generators[1]);
    }

    #[test]
    fn monotone_presentation_of_two_is_boolean_eight() {
        use crate::finspace::opn_frame;
        use crate::framealg::{present_m, presentation_points, PresentOptions, SolveBounds};
        let p = present_m(&FinFrame::two(), PresentOptions::default());
        let f = presented_frame_small(&p).unwrap().frame;
        assert_eq!(f.len(), 8);
        assert!(find_frame_iso(&f, &FinFrame::boolean(3)).is_some());
        let pts = presentation_points(&p, SolveBounds::default()).unwrap();
        assert!(find_frame_iso(&f, &opn_frame(&pts.space).unwrap().frame).is_some());
    }

    #[test]
    fn too_many_generators() {
        let p = Presentation::new((0..6).map(|i| format!("g{i}")).collect(), vec![]).unwrap();
        assert!(presented_frame_small(&p).unwrap_err().is_resource());
    }
}

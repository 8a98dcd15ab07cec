use std::collections::{HashMap, HashSet};

use crate::bits::Bits;
use crate::error::{Error, Result};

/// Largest frame with materialised operation tables.
pub const MAX_FRAME: usize = 1024;
/// Largest frame accepted from a bare order relation (validation is cubic).
pub const MAX_ORDER_FRAME: usize = 256;

/// A finite bounded distributive lattice, i.e. a finite frame.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinFrame {
    names: Vec<String>,
    meet: Vec<u16>,
    join: Vec<u16>,
    bottom: usize,
    top: usize,
}

impl FinFrame {
    /// Build from an order relation, checking that it is a distributive lattice.
    pub fn from_order(names: Vec<String>, leq: impl Fn(usize, usize) -> bool) -> Result<FinFrame> {
        let n = names.len();
        if n == 0 {
            return Err(Error::NotAFrame("a frame has at least one element".into()));
        }
        if n > MAX_ORDER_FRAME {
            return Err(Error::resource("elements of a frame given by its order", MAX_ORDER_FRAME));
        }
        check_names(&names)?;
        let le: Vec<Vec<bool>> = (0..n).map(|a| (0..n).map(|b| leq(a, b)).collect()).collect();
        for a in 0..n {
            if !le[a][a] {
                return Err(Error::NotAFrame(format!("order is not reflexive at `{}`", names[a])));
            }
            for b in 0..n {
                if a != b && le[a][b] && le[b][a] {
                    return Err(Error::NotAFrame(format!(
                        "order is not antisymmetric at `{}`, `{}`",
                        names[a], names[b]
                    )));
                }
                if le[a][b] {
                    for c in 0..n {
                        if le[b][c] && !le[a][c] {
                            return Err(Error::NotAFrame(format!(
                                "order is not transitive at `{}`, `{}`, `{}`",
                                names[a], names[b], names[c]
                            )));
                        }
                    }
                }
            }
        }
        let bound = |upper: bool, a: usize, b: usize| -> Option<usize> {
            let rel = |x: usize, y: usize| if upper { le[y][x] } else { le[x][y] };
            let cands: Vec<usize> = (0..n).filter(|&c| rel(c, a) && rel(c, b)).collect();
            cands.iter().copied().find(|&c| cands.iter().all(|&d| rel(d, c)))
        };
        let mut meet = vec![0u16; n * n];
        let mut join = vec![0u16; n * n];
        for a in 0..n {
            for b in 0..n {
                let m = bound(false, a, b).ok_or_else(|| {
                    Error::NotAFrame(format!("`{}` and `{}` have no meet", names[a], names[b]))
                })?;
                let j = bound(true, a, b).ok_or_else(|| {
                    Error::NotAFrame(format!("`{}` and `{}` have no join", names[a], names[b]))
                })?;
                meet[a * n + b] = m as u16;
                join[a * n + b] = j as u16;
            }
        }
        let bottom = (0..n).find(|&a| (0..n).all(|b| le[a][b])).expect("finite lattice has a bottom");
        let top = (0..n).find(|&a| (0..n).all(|b| le[b][a])).expect("finite lattice has a top");
        let f = FinFrame { names, meet, join, bottom, top };
        f.check_distributive()?;
        Ok(f)
    }

    /// Build from a family of sets closed under union and intersection; the
    /// order is inclusion. Distributivity is automatic.
    pub fn from_sets(names: Vec<String>, sets: &[Bits]) -> Result<FinFrame> {
        let n = sets.len();
        if n == 0 || names.len() != n {
            return Err(Error::NotAFrame("need one name per set and at least one set".into()));
        }
        if n > MAX_FRAME {
            return Err(Error::resource("elements of a frame", MAX_FRAME));
        }
        check_names(&names)?;
        let index: HashMap<Bits, usize> = sets.iter().enumerate().map(|(i, s)| (*s, i)).collect();
        if index.len() != n {
            return Err(Error::NotAFrame("repeated set in family".into()));
        }
        let mut meet = vec![0u16; n * n];
        let mut join = vec![0u16; n * n];
        for a in 0..n {
            for b in 0..n {
                let m = index.get(&(sets[a] & sets[b]));
                let j = index.get(&(sets[a] | sets[b]));
                match (m, j) {
                    (Some(&m), Some(&j)) => {
                        meet[a * n + b] = m as u16;
                        join[a * n + b] = j as u16;
                    }
                    _ => {
                        return Err(Error::NotAFrame(format!(
                            "family not closed under union and intersection at `{}`, `{}`",
                            names[a], names[b]
                        )))
                    }
                }
            }
        }
        let all = sets.iter().fold(Bits::EMPTY, |acc, s| acc | *s);
        let none = sets.iter().fold(all, |acc, s| acc & *s);
        Ok(FinFrame { names, meet, join, bottom: index[&none], top: index[&all] })
    }

    /// Build from operation tables of a lattice already known to be distributive
    /// (e.g. a quotient of one). Lattice laws are checked; distributivity is
    /// checked when the frame is small enough for the cubic test.
    pub(crate) fn from_tables(names: Vec<String>, meet: Vec<u16>, join: Vec<u16>) -> Result<FinFrame> {
        let n = names.len();
        if n > MAX_FRAME {
            return Err(Error::resource("elements of a frame", MAX_FRAME));
        }
        let at = |t: &Vec<u16>, a: usize, b: usize| t[a * n + b] as usize;
        for a in 0..n {
            if at(&meet, a, a) != a || at(&join, a, a) != a {
                return Err(Error::Invariant("operation tables are not idempotent".into()));
            }
            for b in 0..n {
                if at(&meet, a, b) != at(&meet, b, a) || at(&join, a, b) != at(&join, b, a) {
                    return Err(Error::Invariant("operation tables are not commutative".into()));
                }
                if at(&meet, a, at(&join, a, b)) != a {
                    return Err(Error::Invariant("operation tables violate absorption".into()));
                }
            }
        }
        let bottom = (0..n).find(|&a| (0..n).all(|b| at(&meet, a, b) == a)).ok_or_else(|| {
            Error::Invariant("no bottom element".into())
        })?;
        let top = (0..n).find(|&a| (0..n).all(|b| at(&join, a, b) == a)).ok_or_else(|| {
            Error::Invariant("no top element".into())
        })?;
        let f = FinFrame { names, meet, join, bottom, top };
        if n <= 128 {
            f.check_distributive().map_err(|e| Error::Invariant(e.to_string()))?;
        }
        Ok(f)
    }

    fn check_distributive(&self) -> Result<()> {
        let n = self.len();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if self.meet(a, self.join(b, c)) != self.join(self.meet(a, b), self.meet(a, c)) {
                        return Err(Error::NotAFrame(format!(
                            "not distributive at `{}`, `{}`, `{}`",
                            self.names[a], self.names[b], self.names[c]
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// The `n`-element chain `0 < 1 < ... < n-1`.
    pub fn chain(n: usize) -> FinFrame {
        FinFrame::from_order((0..n).map(|i| i.to_string()).collect(), |a, b| a <= b).expect("chains are frames")
    }

    /// The two-element frame `{0 < 1}`.
    pub fn two() -> FinFrame {
        FinFrame::chain(2)
    }

    /// The Boolean algebra on `k` atoms, elements named by their atom sets.
    pub fn boolean(k: usize) -> FinFrame {
        let sets: Vec<Bits> = (0..1u64 << k).map(Bits::from_u64).collect();
        let names = sets
            .iter()
            .map(|s| format!("{{{}}}", s.iter().map(|i| format!("a{i}")).collect::<Vec<_>>().join(",")))
            .collect();
        FinFrame::from_sets(names, &sets).expect("powersets are frames")
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, a: usize) -> &str {
        &self.names[a]
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.names
            .iter()
            .position(|p| p == name)
            .ok_or_else(|| Error::Invalid(format!("unknown frame element `{name}`")))
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn top(&self) -> usize {
        self.top
    }

    #[inline]
    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.meet[a * self.len() + b] as usize
    }

    #[inline]
    pub fn join(&self, a: usize, b: usize) -> usize {
        self.join[a * self.len() + b] as usize
    }

    #[inline]
    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.meet(a, b) == a
    }

    pub fn meet_all(&self, it: impl IntoIterator<Item = usize>) -> usize {
        it.into_iter().fold(self.top, |acc, a| self.meet(acc, a))
    }

    pub fn join_all(&self, it: impl IntoIterator<Item = usize>) -> usize {
        it.into_iter().fold(self.bottom, |acc, a| self.join(acc, a))
    }

    /// A family is directed when it is non-empty and every two members have an
    /// upper bound inside it.
    pub fn is_directed(&self, family: &[usize]) -> bool {
        !family.is_empty()
            && family
                .iter()
                .all(|&a| family.iter().all(|&b| family.iter().any(|&c| self.leq(a, c) && self.leq(b, c))))
    }

    /// Join of a directed family, computed as its maximum.
    pub fn directed_join(&self, family: &[usize]) -> Result<usize> {
        if !self.is_directed(family) {
            let names: Vec<&str> = family.iter().map(|&a| self.name(a)).collect();
            return Err(Error::NotDirected(format!("[{}]", names.join(", "))));
        }
        let max = family
            .iter()
            .copied()
            .find(|&m| family.iter().all(|&a| self.leq(a, m)))
            .ok_or_else(|| Error::Invariant("finite directed family without a maximum".into()))?;
        Ok(max)
    }

    /// Elements `j ≠ ⊥` that are not the join of the elements strictly below them.
    pub fn join_irreducibles(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&j| {
                j != self.bottom && self.join_all((0..self.len()).filter(|&b| b != j && self.leq(b, j))) != j
            })
            .collect()
    }
}

fn check_names(names: &[String]) -> Result<()> {
    let mut seen = HashSet::new();
    for n in names {
        if !seen.insert(n.as_str()) {
            return Err(Error::NotAFrame(format!("duplicate element name `{n}`")));
        }
    }
    Ok(())
}

/// A map between finite frames. Preservation of the frame operations is a
/// checked property.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrameHom {
    source: FinFrame,
    target: FinFrame,
    map: Vec<usize>,
}

impl FrameHom {
    pub fn new(source: FinFrame, target: FinFrame, map: Vec<usize>) -> Result<FrameHom> {
        if map.len() != source.len() {
            return Err(Error::Invalid("assignment must cover every source element".into()));
        }
        if let Some(&bad) = map.iter().find(|&&b| b >= target.len()) {
            return Err(Error::OutOfRange { index: bad, len: target.len() });
        }
        Ok(FrameHom { source, target, map })
    }

    pub fn identity(f: &FinFrame) -> FrameHom {
        FrameHom { source: f.clone(), target: f.clone(), map: (0..f.len()).collect() }
    }

    pub fn source(&self) -> &FinFrame {
        &self.source
    }

    pub fn target(&self) -> &FinFrame {
        &self.target
    }

    pub fn assignment(&self) -> &[usize] {
        &self.map
    }

    pub fn apply(&self, a: usize) -> usize {
        self.map[a]
    }

    /// Preserves ⊥, ⊤ and binary meets and joins.
    pub fn is_frame_hom(&self) -> bool {
        let (s, t) = (&self.source, &self.target);
        if self.map[s.bottom()] != t.bottom() || self.map[s.top()] != t.top() {
            return false;
        }
        (0..s.len()).all(|a| {
            (0..s.len()).all(|b| {
                self.map[s.meet(a, b)] == t.meet(self.map[a], self.map[b])
                    && self.map[s.join(a, b)] == t.join(self.map[a], self.map[b])
            })
        })
    }

    pub fn is_bijective(&self) -> bool {
        let img: HashSet<usize> = self.map.iter().copied().collect();
        self.source.len() == self.target.len() && img.len() == self.map.len()
    }

    pub fn is_isomorphism(&self) -> bool {
        self.is_bijective() && self.is_frame_hom()
    }

    /// `g ∘ self`.
    pub fn then(&self, g: &FrameHom) -> Result<FrameHom> {
        if self.target != g.source {
            return Err(Error::Invalid("homomorphisms are not composable".into()));
        }
        Ok(FrameHom {
            source: self.source.clone(),
            target: g.target.clone(),
            map: self.map.iter().map(|&b| g.map[b]).collect(),
        })
    }
}

/// Search for a frame isomorphism by matching the posets of join-irreducibles
/// and extending by joins; the result is verified before it is returned.
pub fn find_frame_iso(f: &FinFrame, g: &FinFrame) -> Option<FrameHom> {
    if f.len() != g.len() {
        return None;
    }
    let jf = f.join_irreducibles();
    let jg = g.join_irreducibles();
    if jf.len() != jg.len() {
        return None;
    }
    let below = |fr: &FinFrame, js: &[usize], j: usize| js.iter().filter(|&&k| fr.leq(k, j)).count();
    let above = |fr: &FinFrame, js: &[usize], j: usize| js.iter().filter(|&&k| fr.leq(j, k)).count();
    let mut phi = vec![usize::MAX; jf.len()];
    let mut used = vec![false; jg.len()];
    fn go(
        i: usize,
        f: &FinFrame,
        g: &FinFrame,
        jf: &[usize],
        jg: &[usize],
        sig: &dyn Fn(bool, usize) -> (usize, usize),
        phi: &mut Vec<usize>,
        used: &mut Vec<bool>,
    ) -> Option<FrameHom> {
        if i == jf.len() {
            let map: Vec<usize> = (0..f.len())
                .map(|a| g.join_all((0..jf.len()).filter(|&k| f.leq(jf[k], a)).map(|k| jg[phi[k]])))
                .collect();
            let h = FrameHom::new(f.clone(), g.clone(), map).ok()?;
            return h.is_isomorphism().then_some(h);
        }
        for k in 0..jg.len() {
            if used[k] || sig(true, jf[i]) != sig(false, jg[k]) {
                continue;
            }
            let ok = (0..i).all(|i2| {
                let k2 = phi[i2];
                f.leq(jf[i], jf[i2]) == g.leq(jg[k], jg[k2]) && f.leq(jf[i2], jf[i]) == g.leq(jg[k2], jg[k])
            });
            if !ok {
                continue;
            }
            phi[i] = k;
            used[k] = true;
            if let Some(h) = go(i + 1, f, g, jf, jg, sig, phi, used) {
                return Some(h);
            }
            used[k] = false;
        }
        None
    }
    let sig = |left: bool, j: usize| {
        if left {
            (below(f, &jf, j), above(f, &jf, j))
        } else {
            (below(g, &jg, j), above(g, &jg, j))
        }
    };
    go(0, f, g, &jf, &jg, &sig, &mut phi, &mut used)
}

/// All finite frames with between 1 and `max` elements, as labelled orders with
/// fixed bottom `0` and top `n-1` (isomorphic copies included).
pub fn enumerate_frames(max: usize) -> Vec<FinFrame> {
    let mut out = Vec::new();
    if max >= 1 {
        out.push(FinFrame::chain(1));
    }
    for n in 2..=max {
        let mids: Vec<usize> = (1..n - 1).collect();
        let pairs: Vec<(usize, usize)> =
            mids.iter().flat_map(|&i| mids.iter().filter(move |&&j| j > i).map(move |&j| (i, j))).collect();
        let total = 3usize.pow(pairs.len() as u32);
        for code in 0..total {
            let mut rel = vec![vec![false; n]; n];
            for a in 0..n {
                rel[a][a] = true;
                rel[0][a] = true;
                rel[a][n - 1] = true;
            }
            let mut c = code;
            for &(i, j) in &pairs {
                match c % 3 {
                    1 => rel[i][j] = true,
                    2 => rel[j][i] = true,
                    _ => {}
                }
                c /= 3;
            }
            let names = (0..n).map(|i| format!("e{i}")).collect();
            if let Ok(f) = FinFrame::from_order(names, |a, b| rel[a][b]) {
                out.push(f);
            }
        }
    }
    out
}

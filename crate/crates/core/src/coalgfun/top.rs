use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use serde_json::Value;

use crate::bits::{Bits, MAX_BITS};
use crate::error::{Error, Result};
use crate::finspace::{ContMap, FinSpace};
use crate::kkplift::{self, KkpSignature};

use super::set::{preimage, render_collection, SetFunctor};

/// Largest space on which the D_kh carrier is enumerated.
pub const MAX_DKH_POINTS: usize = 4;
/// Largest space on which the Vietoris carrier is enumerated.
pub const MAX_VIETORIS_POINTS: usize = 8;

/// Endofunctors on finite spaces.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum TopFunctor {
    /// Closed subsets with the upper and lower Vietoris cells.
    Vietoris,
    /// Monotone neighbourhood collections.
    Dkh,
    /// Constant functor onto the two-point indiscrete space.
    Trivial,
    /// Topological lift of a set functor along a set of its liftings.
    Kkp(KkpSignature),
}

/// The two kinds of subbasic cell of the Vietoris and D_kh carriers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Cell {
    Box,
    Dia,
}

/// `T X` with the codes of its points. For lifted functors a point is a class
/// of base elements; `index` sends every base code in a class to the class.
#[derive(Debug)]
pub struct Carrier {
    pub space: FinSpace,
    pub elems: Vec<u64>,
    index: HashMap<u64, usize>,
}

impl Carrier {
    pub fn new(space: FinSpace, elems: Vec<u64>) -> Carrier {
        let index = elems.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        Carrier { space, elems, index }
    }

    pub(crate) fn with_index(space: FinSpace, elems: Vec<u64>, index: HashMap<u64, usize>) -> Carrier {
        Carrier { space, elems, index }
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn position(&self, code: u64) -> Option<usize> {
        self.index.get(&code).copied()
    }
}

type CacheKey = (TopFunctor, FinSpace);

fn cache() -> &'static Mutex<HashMap<CacheKey, Arc<Carrier>>> {
    static CACHE: OnceLock<Mutex<HashMap<CacheKey, Arc<Carrier>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

impl fmt::Display for TopFunctor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TopFunctor::Vietoris => write!(f, "vietoris"),
            TopFunctor::Dkh => write!(f, "dkh"),
            TopFunctor::Trivial => write!(f, "trivial"),
            TopFunctor::Kkp(sig) => write!(f, "{sig}"),
        }
    }
}

impl TopFunctor {
    /// Accepts `vietoris`, `dkh`, `trivial` and `kkp:BASE:L1,L2,...`.
    pub fn parse(name: &str) -> Result<TopFunctor> {
        match name {
            "vietoris" => Ok(TopFunctor::Vietoris),
            "dkh" => Ok(TopFunctor::Dkh),
            "trivial" => Ok(TopFunctor::Trivial),
            _ if name.starts_with("kkp:") => Ok(TopFunctor::Kkp(KkpSignature::parse(name)?)),
            _ => Err(Error::UnknownFunctor(name.to_string())),
        }
    }

    /// `T X`, cached per space.
    pub fn carrier(&self, x: &FinSpace) -> Result<Arc<Carrier>> {
        let key = (self.clone(), x.clone());
        if let Some(c) = cache().lock().expect("carrier cache poisoned").get(&key) {
            return Ok(c.clone());
        }
        let c = Arc::new(self.build_carrier(x)?);
        cache().lock().expect("carrier cache poisoned").insert(key, c.clone());
        Ok(c)
    }

    fn build_carrier(&self, x: &FinSpace) -> Result<Carrier> {
        match self {
            TopFunctor::Vietoris => {
                if x.len() > MAX_VIETORIS_POINTS {
                    return Err(Error::resource("points for the Vietoris carrier", MAX_VIETORIS_POINTS));
                }
                let elems: Vec<u64> = x.closed_sets().into_iter().map(|c| c.low_u64()).collect();
                let names = elems.iter().map(|&c| x.render(Bits::from_u64(c))).collect();
                let subbase = self.subbase(x, &elems);
                Ok(Carrier::new(FinSpace::new(names, &subbase)?, elems))
            }
            TopFunctor::Dkh => {
                let elems = dkh_elements(x)?;
                if elems.len() > MAX_BITS {
                    return Err(Error::resource("elements of the D_kh carrier", MAX_BITS));
                }
                let names = elems.iter().map(|&w| render_collection(x.names(), w)).collect();
                let subbase = self.subbase(x, &elems);
                Ok(Carrier::new(FinSpace::new(names, &subbase)?, elems))
            }
            TopFunctor::Trivial => Ok(Carrier::new(FinSpace::two_trivial(), vec![0, 1])),
            TopFunctor::Kkp(sig) => kkplift::kkp_carrier(sig, x),
        }
    }

    fn subbase(&self, x: &FinSpace, elems: &[u64]) -> Vec<Bits> {
        let mut out = Vec::new();
        for a in x.opens() {
            for cell in [Cell::Box, Cell::Dia] {
                out.push((0..elems.len()).filter(|&i| self.cell_contains(x, cell, a, elems[i])).collect());
            }
        }
        out
    }

    /// Membership of a carrier element in the cell over the open `a`:
    /// Vietoris `⊡a = {c | c ⊆ a}`, `◇a = {c | c ∩ a ≠ ∅}`;
    /// D_kh `⊡̄a = {W | a ∈ W}`, `⟋a = {W | X∖a ∉ W}`.
    pub(crate) fn cell_contains(&self, x: &FinSpace, cell: Cell, a: Bits, code: u64) -> bool {
        let a = a.low_u64();
        match (self, cell) {
            (TopFunctor::Vietoris, Cell::Box) => code & !a == 0,
            (TopFunctor::Vietoris, Cell::Dia) => code & a != 0,
            (TopFunctor::Dkh, Cell::Box) => code >> a & 1 == 1,
            (TopFunctor::Dkh, Cell::Dia) => code >> (x.full().low_u64() & !a) & 1 == 0,
            _ => panic!("functor {self} has no {cell:?} cell"),
        }
    }

    /// The cell as a subset of the carrier.
    pub fn cell(&self, x: &FinSpace, cell: Cell, a: Bits) -> Result<Bits> {
        let c = self.carrier(x)?;
        Ok((0..c.len()).filter(|&i| self.cell_contains(x, cell, a, c.elems[i])).collect())
    }

    /// The set-level image of an element along `f`, without checking that it
    /// lies in the target carrier.
    pub fn image_code(&self, f: &ContMap, code: u64) -> Result<u64> {
        match self {
            TopFunctor::Vietoris => Ok(SetFunctor::Powerset.on_fun(f.assignment(), f.target().len(), code)),
            TopFunctor::Dkh => {
                let m = f.target().len();
                if m > 6 {
                    return Err(Error::resource("points for D_kh codes", 6));
                }
                let mut out = 0u64;
                for b in 0..1u64 << m {
                    if code >> preimage(f.assignment(), b) & 1 == 1 {
                        out |= 1 << b;
                    }
                }
                Ok(out)
            }
            TopFunctor::Trivial => Ok(code),
            TopFunctor::Kkp(sig) => Ok(sig.base.on_fun(f.assignment(), f.target().len(), code)),
        }
    }

    /// Image of the carrier point `i` of `T(source)` as a point of `T(target)`.
    pub fn map_point(&self, f: &ContMap, i: usize) -> Result<usize> {
        let src = self.carrier(f.source())?;
        let tgt = self.carrier(f.target())?;
        let img = self.image_code(f, src.elems[i])?;
        tgt.position(img).ok_or_else(|| {
            Error::NotInCarrier(format!(
                "{} (image of {} under {self})",
                self.render_code(f.target(), img),
                src.space.name(i)
            ))
        })
    }

    /// `T f`, verified continuous.
    pub fn on_map(&self, f: &ContMap) -> Result<ContMap> {
        let src = self.carrier(f.source())?;
        let tgt = self.carrier(f.target())?;
        let map = (0..src.len()).map(|i| self.map_point(f, i)).collect::<Result<Vec<_>>>()?;
        let tf = ContMap::new(src.space.clone(), tgt.space.clone(), map)?;
        if !tf.is_continuous() {
            return Err(Error::NotContinuous(format!("{self} applied to a continuous map")));
        }
        Ok(tf)
    }

    pub fn render_code(&self, x: &FinSpace, code: u64) -> String {
        match self {
            TopFunctor::Vietoris => x.render(Bits::from_u64(code)),
            TopFunctor::Dkh => render_collection(x.names(), code),
            TopFunctor::Trivial => code.to_string(),
            TopFunctor::Kkp(sig) => sig.base.render(x.names(), code),
        }
    }

    /// JSON encoding: point names for subsets, arrays of those for
    /// collections, and `0`/`1` for the trivial functor.
    pub fn encode(&self, x: &FinSpace, code: u64) -> Value {
        let subset = |m: u64| Value::from(x.names_of(Bits::from_u64(m)));
        let collection = |w: u64| Value::Array(Bits::from_u64(w).iter().map(|u| subset(u as u64)).collect());
        match self {
            TopFunctor::Vietoris | TopFunctor::Kkp(KkpSignature { base: SetFunctor::Powerset, .. }) => subset(code),
            TopFunctor::Dkh | TopFunctor::Kkp(KkpSignature { base: SetFunctor::Monotone, .. }) => collection(code),
            TopFunctor::Trivial => Value::from(code),
        }
    }

    /// Decode and locate an element in the carrier of `x`.
    pub fn decode(&self, x: &FinSpace, v: &Value) -> Result<usize> {
        let subset = |v: &Value| -> Result<u64> {
            let arr = v.as_array().ok_or_else(|| Error::Invalid(format!("expected an array of point names, got {v}")))?;
            let mut m = 0u64;
            for p in arr {
                let name = p.as_str().ok_or_else(|| Error::Invalid(format!("expected a point name, got {p}")))?;
                m |= 1 << x.index_of(name)?;
            }
            Ok(m)
        };
        let code = match self {
            TopFunctor::Vietoris | TopFunctor::Kkp(KkpSignature { base: SetFunctor::Powerset, .. }) => subset(v)?,
            TopFunctor::Dkh | TopFunctor::Kkp(KkpSignature { base: SetFunctor::Monotone, .. }) => {
                let arr = v.as_array().ok_or_else(|| Error::Invalid(format!("expected an array of subsets, got {v}")))?;
                arr.iter().try_fold(0u64, |acc, s| subset(s).map(|m| acc | 1 << m))?
            }
            TopFunctor::Trivial => v.as_u64().ok_or_else(|| Error::Invalid(format!("expected 0 or 1, got {v}")))?,
        };
        self.carrier(x)?.position(code).ok_or_else(|| Error::NotInCarrier(v.to_string()))
    }
}

/// Collections `W ⊆ P(X)` with `u ∈ W` iff some closed `c ⊆ u` has every open
/// superset in `W`. Exhaustive over all `2^(2^|X|)` collections.
pub fn dkh_elements(x: &FinSpace) -> Result<Vec<u64>> {
    let n = x.len();
    if n > MAX_DKH_POINTS {
        return Err(Error::resource("points for the D_kh carrier", MAX_DKH_POINTS));
    }
    let opens: Vec<u64> = x.opens().into_iter().map(|o| o.low_u64()).collect();
    let closed: Vec<u64> = x.closed_sets().into_iter().map(|c| c.low_u64()).collect();
    // for each closed c, the collection of its open supersets
    let sup: Vec<(u64, u64)> = closed
        .iter()
        .map(|&c| (c, opens.iter().filter(|&&o| c & !o == 0).fold(0u64, |acc, &o| acc | 1 << o)))
        .collect();
    let subsets = 1u64 << n;
    Ok((0..1u64 << subsets)
        .filter(|&w| {
            (0..subsets).all(|u| {
                let core = sup.iter().any(|&(c, s)| c & !u == 0 && s & !w == 0);
                (w >> u & 1 == 1) == core
            })
        })
        .collect())
}

pub fn is_finite_kh(x: &FinSpace) -> bool {
    x.is_discrete()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finspace::{all_topologies, continuous_maps};

    #[test]
    fn vietoris_on_discrete_two() {
        let c = TopFunctor::Vietoris.carrier(&FinSpace::discrete_n(2)).unwrap();
        assert_eq!(c.len(), 4);
        assert!(c.space.is_discrete());
    }

    #[test]
    fn vietoris_on_sierpinski() {
        let s = FinSpace::sierpinski();
        let c = TopFunctor::Vietoris.carrier(&s).unwrap();
        let names: Vec<&str> = c.space.names().iter().map(|n| n.as_str()).collect();
        assert_eq!(names, vec!["{}", "{0}", "{0,1}"]);
        let bx = TopFunctor::Vietoris.cell(&s, Cell::Box, s.set_of(&["1"]).unwrap()).unwrap();
        assert_eq!(c.space.names_of(bx), vec!["{}"]);
    }

    #[test]
    fn dkh_carrier_sizes_on_discrete() {
        let sizes: Vec<usize> =
            (1..=3).map(|n| TopFunctor::Dkh.carrier(&FinSpace::discrete_n(n)).unwrap().len()).collect();
        assert_eq!(sizes, vec![3, 6, 20]);
        let one = TopFunctor::Dkh.carrier(&FinSpace::discrete_n(1)).unwrap();
        assert_eq!(one.space.opens().len(), 8);
    }

    #[test]
    fn dkh_on_discrete_is_up_closed_collections() {
        for n in 0..=3 {
            let x = FinSpace::discrete_n(n);
            assert_eq!(dkh_elements(&x).unwrap(), SetFunctor::Monotone.on_set(n).unwrap());
        }
    }

    #[test]
    fn trivial_functor() {
        let c = TopFunctor::Trivial.carrier(&FinSpace::sierpinski()).unwrap();
        assert_eq!(c.space.opens().len(), 2);
        let f = ContMap::identity(&FinSpace::sierpinski());
        assert_eq!(TopFunctor::Trivial.on_map(&f).unwrap().assignment(), &[0, 1]);
    }

    #[test]
    fn identity_laws_on_all_small_spaces() {
        for n in 0..=3 {
            for x in all_topologies(n) {
                for t in [TopFunctor::Vietoris, TopFunctor::Dkh, TopFunctor::Trivial] {
                    let id = ContMap::identity(&x);
                    let tid = t.on_map(&id).unwrap();
                    assert_eq!(tid, ContMap::identity(&t.carrier(&x).unwrap().space));
                }
            }
        }
    }

    #[test]
    fn composition_and_subbase_pullback_on_discrete_spaces() {
        let spaces: Vec<FinSpace> = (0..=3).map(FinSpace::discrete_n).collect();
        for x in &spaces {
            for y in &spaces[..3] {
                for f in continuous_maps(x, y) {
                    let df = TopFunctor::Dkh.on_map(&f).unwrap();
                    // pullback of the generating cells
                    for a in y.opens() {
                        for cell in [Cell::Box, Cell::Dia] {
                            let lhs = df.preimage(TopFunctor::Dkh.cell(y, cell, a).unwrap());
                            let rhs = TopFunctor::Dkh.cell(x, cell, f.preimage(a)).unwrap();
                            assert_eq!(lhs, rhs);
                        }
                    }
                    for z in &spaces[..3] {
                        for g in continuous_maps(y, z) {
                            for t in [TopFunctor::Vietoris, TopFunctor::Dkh] {
                                let lhs = t.on_map(&f.then(&g).unwrap()).unwrap();
                                let rhs = t.on_map(&f).unwrap().then(&t.on_map(&g).unwrap()).unwrap();
                                assert_eq!(lhs, rhs);
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn image_outside_carrier_is_reported() {
        // a point sent to the open point of the Sierpinski space has image {1}, not closed
        let one = FinSpace::discrete_n(1);
        let f = ContMap::new(one, FinSpace::sierpinski(), vec![1]).unwrap();
        assert!(matches!(TopFunctor::Vietoris.on_map(&f), Err(Error::NotInCarrier(_))));
    }

    #[test]
    fn json_codes_round_trip() {
        let x = FinSpace::discrete_n(2);
        for t in [TopFunctor::Vietoris, TopFunctor::Dkh, TopFunctor::Trivial] {
            let c = t.carrier(&x).unwrap();
            for i in 0..c.len() {
                assert_eq!(t.decode(&x, &t.encode(&x, c.elems[i])).unwrap(), i);
            }
        }
    }
}

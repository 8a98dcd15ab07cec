//! The topological lift of a set functor along a set of its predicate
//! liftings: the generated subframe, its Scott quotient, its points, and the
//! lifted liftings.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use crate::bits::{Bits, MAX_BITS};
use crate::coalgfun::{Carrier, Cell, SetFunctor, TopFunctor};
use crate::error::{Error, Result};
use crate::finspace::{find_homeomorphism, frame_points, render_set, ContMap, FinFrame, FinSpace, MAX_FRAME};
use crate::framealg::directed_subsets;
use crate::liftings::{builtin_lifting, builtin_liftings, check_characteristic, check_scott, OpenLifting, SetLifting};

/// A base set functor with a list of its liftings; printed as `kkp:BASE:L1,L2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct KkpSignature {
    pub base: SetFunctor,
    pub liftings: Vec<SetLifting>,
}

impl fmt::Display for KkpSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ls: Vec<&str> = self.liftings.iter().map(|l| l.name()).collect();
        write!(f, "kkp:{}:{}", self.base.name(), ls.join(","))
    }
}

impl KkpSignature {
    pub fn new(base: SetFunctor, liftings: &[SetLifting]) -> KkpSignature {
        KkpSignature { base, liftings: liftings.to_vec() }
    }

    pub fn parse(text: &str) -> Result<KkpSignature> {
        let bad = || Error::UnknownFunctor(text.to_string());
        let rest = text.strip_prefix("kkp:").ok_or_else(bad)?;
        let (base, ls) = rest.split_once(':').unwrap_or((rest, ""));
        let base = SetFunctor::parse(base)?;
        let mut liftings = Vec::new();
        for name in ls.split(',').filter(|s| !s.is_empty()) {
            let l = SetLifting::parse(name)?;
            if liftings.contains(&l) {
                return Err(Error::Invalid(format!("lifting `{name}` listed twice in `{text}`")));
            }
            liftings.push(l);
        }
        Ok(KkpSignature { base, liftings })
    }

    pub fn functor(&self) -> TopFunctor {
        TopFunctor::Kkp(self.clone())
    }
}

/// `λ(a)` as positions in the base carrier, for every lifting and open.
struct Generators {
    base: Vec<u64>,
    images: Vec<(SetLifting, Bits, Bits)>,
}

fn generators(sig: &KkpSignature, x: &FinSpace) -> Result<Generators> {
    let base = sig.base.on_set(x.len())?;
    if base.len() > MAX_BITS {
        return Err(Error::resource("elements of the base carrier", MAX_BITS));
    }
    let mut images = Vec::new();
    for &l in &sig.liftings {
        for a in x.opens() {
            images.push((l, a, l.image(sig.base, x.len(), &base, a.low_u64())));
        }
    }
    Ok(Generators { base, images })
}

/// The lifted carrier: base elements identified when no generator separates
/// them, topologised by the generator images.
pub(crate) fn kkp_carrier(sig: &KkpSignature, x: &FinSpace) -> Result<Carrier> {
    let g = generators(sig, x)?;
    let mut classes: Vec<Vec<usize>> = Vec::new();
    let mut by_profile: HashMap<Vec<bool>, usize> = HashMap::new();
    for i in 0..g.base.len() {
        let profile: Vec<bool> = g.images.iter().map(|(_, _, img)| img.contains(i)).collect();
        let k = *by_profile.entry(profile).or_insert_with(|| {
            classes.push(Vec::new());
            classes.len() - 1
        });
        classes[k].push(i);
    }
    let mut class_of = vec![0usize; g.base.len()];
    for (k, c) in classes.iter().enumerate() {
        for &i in c {
            class_of[i] = k;
        }
    }
    let names = classes
        .iter()
        .map(|c| {
            let parts: Vec<String> = c.iter().map(|&i| sig.base.render(x.names(), g.base[i])).collect();
            if parts.len() == 1 {
                parts[0].clone()
            } else {
                format!("[{}]", parts.join(" | "))
            }
        })
        .collect();
    let subbase: Vec<Bits> =
        g.images.iter().map(|(_, _, img)| img.iter().map(|i| class_of[i]).collect()).collect();
    let space = FinSpace::new(names, &subbase)?;
    let elems = classes.iter().map(|c| g.base[c[0]]).collect();
    let index = (0..g.base.len()).map(|i| (g.base[i], class_of[i])).collect();
    Ok(Carrier::with_index(space, elems, index))
}

/// The subframe of the powerset of the base carrier generated by the images.
#[derive(Clone, Debug)]
pub struct Fdot {
    pub frame: FinFrame,
    /// Each frame element as a set of base-carrier positions, in frame order.
    pub sets: Vec<Bits>,
    pub base: Vec<u64>,
}

impl Fdot {
    pub fn element_of(&self, s: Bits) -> Option<usize> {
        self.sets.binary_search(&s).ok()
    }
}

pub fn fdot_frame(sig: &KkpSignature, x: &FinSpace) -> Result<Fdot> {
    let g = generators(sig, x)?;
    let full = Bits::full(g.base.len());
    let mut seen: HashSet<Bits> = HashSet::new();
    let mut sets: Vec<Bits> = Vec::new();
    for s in [Bits::EMPTY, full].into_iter().chain(g.images.iter().map(|(_, _, img)| *img)) {
        if seen.insert(s) {
            sets.push(s);
        }
    }
    let mut i = 0;
    while i < sets.len() {
        for j in 0..i {
            for s in [sets[i] | sets[j], sets[i] & sets[j]] {
                if seen.insert(s) {
                    if sets.len() >= MAX_FRAME {
                        return Err(Error::resource("elements of the generated subframe", MAX_FRAME));
                    }
                    sets.push(s);
                }
            }
        }
        i += 1;
    }
    sets.sort();
    let base_names: Vec<String> = g.base.iter().map(|&e| sig.base.render(x.names(), e)).collect();
    let names = sets.iter().map(|&s| render_set(&base_names, s)).collect();
    let frame = FinFrame::from_sets(names, &sets)?;
    Ok(Fdot { frame, sets, base: g.base })
}

/// Instances of the Scott congruence examined while forming the quotient.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CongruenceReport {
    /// Pairs `⋁ λ(d) ~ λ(⋁ D)` compared.
    pub instances: usize,
    /// Liftings not monotone on the opens, for which no instances are generated.
    pub skipped: Vec<SetLifting>,
}

/// Largest number of opens for which every directed family is enumerated.
pub const MAX_DIRECTED_OPENS: usize = 16;

/// The quotient of [`fdot_frame`] by the Scott congruence. Every generating
/// pair is checked to be an equality already; any that is not is reported as
/// an invariant failure rather than quotiented.
pub fn fhat_frame(sig: &KkpSignature, x: &FinSpace) -> Result<(Fdot, CongruenceReport)> {
    let fdot = fdot_frame(sig, x)?;
    let opens = x.opens();
    if opens.len() > MAX_DIRECTED_OPENS {
        return Err(Error::resource("opens for directed-family enumeration", MAX_DIRECTED_OPENS));
    }
    let of = crate::finspace::opn_frame(x)?;
    let families = directed_subsets(&of.frame);
    let mut report = CongruenceReport::default();
    for &l in &sig.liftings {
        let img = |a: Bits| l.image(sig.base, x.len(), &fdot.base, a.low_u64());
        let monotone = opens.iter().all(|&a| opens.iter().filter(|b| a.is_subset(**b)).all(|&b| img(a).is_subset(img(b))));
        if !monotone {
            report.skipped.push(l);
            continue;
        }
        for (fam, max) in &families {
            let joined = fam.iter().fold(Bits::EMPTY, |acc, &d| acc | img(of.opens[d]));
            report.instances += 1;
            if joined != img(of.opens[*max]) {
                return Err(Error::Invariant(format!(
                    "Scott congruence identifies distinct elements for `{l}` at {}",
                    x.render(of.opens[*max])
                )));
            }
        }
    }
    Ok((fdot, report))
}

pub fn kkp_space(sig: &KkpSignature, x: &FinSpace) -> Result<FinSpace> {
    Ok(sig.functor().carrier(x)?.space.clone())
}

/// `T̂ f`, sending the class of `e` to the class of `T f (e)`.
pub fn kkp_map(sig: &KkpSignature, f: &ContMap) -> Result<ContMap> {
    sig.functor().on_map(f)
}

/// The point of `pt(Ḟ X)` corresponding to each carrier class: the filter of
/// frame elements containing the class representative.
fn class_filters(sig: &KkpSignature, x: &FinSpace, fdot: &Fdot) -> Result<Vec<Bits>> {
    let carrier = sig.functor().carrier(x)?;
    carrier
        .elems
        .iter()
        .map(|&e| {
            let i = fdot.base.binary_search(&e).map_err(|_| Error::Invariant("representative not in base".into()))?;
            Ok((0..fdot.sets.len()).filter(|&u| fdot.sets[u].contains(i)).collect())
        })
        .collect()
}

/// `pt(Ḟ X)` by frame points, with the homeomorphism from the lifted carrier.
pub fn kkp_points_via_frame(sig: &KkpSignature, x: &FinSpace) -> Result<ContMap> {
    let fdot = fdot_frame(sig, x)?;
    let pts = frame_points(&fdot.frame)?;
    let filters = class_filters(sig, x, &fdot)?;
    let map = filters
        .iter()
        .map(|f| pts.filters.binary_search(f).map_err(|_| Error::Invariant("class filter is not a point".into())))
        .collect::<Result<Vec<_>>>()?;
    ContMap::new(kkp_space(sig, x)?, pts.space, map)
}

/// `T̂ f` computed as `pt` of the preimage homomorphism `Ḟ Y → Ḟ X`.
pub fn kkp_map_via_frames(sig: &KkpSignature, f: &ContMap) -> Result<ContMap> {
    let (x, y) = (f.source(), f.target());
    let (fx, fy) = (fdot_frame(sig, x)?, fdot_frame(sig, y)?);
    let base_y: HashMap<u64, usize> = fy.base.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    let image: Vec<usize> = fx.base.iter().map(|&e| base_y[&sig.base.on_fun(f.assignment(), y.len(), e)]).collect();
    let hom = fy
        .sets
        .iter()
        .map(|&u| {
            let pre: Bits = (0..fx.base.len()).filter(|&i| u.contains(image[i])).collect();
            fx.element_of(pre).ok_or_else(|| Error::Invariant("preimage leaves the generated subframe".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    let (px, py) = (class_filters(sig, x, &fx)?, class_filters(sig, y, &fy)?);
    let map = px
        .iter()
        .map(|p| {
            let q: Bits = (0..fy.sets.len()).filter(|&u| p.contains(hom[u])).collect();
            py.iter().position(|c| *c == q).ok_or_else(|| Error::Invariant("composite is not a point".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    ContMap::new(kkp_space(sig, x)?, kkp_space(sig, y)?, map)
}

/// The lifted lifting `λ̂`, true at a class when the class lies in `λ(a)`.
pub fn lift_lifting(sig: &KkpSignature, l: SetLifting) -> Result<OpenLifting> {
    builtin_lifting(&sig.functor(), l.name())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftReport {
    pub characteristic: bool,
    /// Lifted liftings whose base lifting is monotone, with their Scott verdict.
    pub scott: BTreeMap<String, bool>,
    pub t0: bool,
    pub congruence: CongruenceReport,
    /// Whether the carrier matches `pt(Ḟ X)`; absent when the frame is too large.
    pub frame_points_agree: Option<bool>,
}

impl LiftReport {
    pub fn all_hold(&self) -> bool {
        self.characteristic && self.scott.values().all(|&b| b) && self.t0 && self.frame_points_agree != Some(false)
    }
}

pub fn check_lift_theorems(sig: &KkpSignature, x: &FinSpace) -> Result<LiftReport> {
    let functor = sig.functor();
    let lifted = builtin_liftings(&functor);
    let characteristic = check_characteristic(&functor, &lifted, x)?;
    let (_, congruence) = fhat_frame(sig, x)?;
    let mut scott = BTreeMap::new();
    for l in &lifted {
        let base = SetLifting::parse(l.id())?;
        if !congruence.skipped.contains(&base) {
            scott.insert(l.id().to_string(), check_scott(l, x)?);
        }
    }
    let t0 = functor.carrier(x)?.space.is_t0();
    let frame_points_agree = match kkp_points_via_frame(sig, x) {
        Ok(m) => Some(m.is_homeomorphism()),
        Err(e) if e.is_resource() => None,
        Err(e) => return Err(e),
    };
    Ok(LiftReport { characteristic, scott, t0, congruence, frame_points_agree })
}

/// A homeomorphism from the lifted carrier onto another functor's carrier.
#[derive(Clone, Debug)]
pub struct LiftIso {
    pub map: ContMap,
    /// Found by matching generators (`box` with `⊡`, `dia` with `◇`) rather than by search.
    pub canonical: bool,
}

/// Match each class with the target element lying in the corresponding cells;
/// fall back to a homeomorphism search when that fails.
pub fn kkp_iso(sig: &KkpSignature, target: &TopFunctor, x: &FinSpace) -> Result<Option<LiftIso>> {
    let src = sig.functor().carrier(x)?;
    let tgt = target.carrier(x)?;
    if let Some(map) = canonical_map(sig, target, x, &src, &tgt)? {
        if map.is_homeomorphism() {
            return Ok(Some(LiftIso { map, canonical: true }));
        }
    }
    Ok(find_homeomorphism(&src.space, &tgt.space).map(|map| LiftIso { map, canonical: false }))
}

fn canonical_map(
    sig: &KkpSignature,
    target: &TopFunctor,
    x: &FinSpace,
    src: &Carrier,
    tgt: &Carrier,
) -> Result<Option<ContMap>> {
    if !matches!(target, TopFunctor::Vietoris | TopFunctor::Dkh) {
        return Ok(None);
    }
    let mut cells = Vec::new();
    for &l in &sig.liftings {
        let cell = match l {
            SetLifting::Box => Cell::Box,
            SetLifting::Dia => Cell::Dia,
            SetLifting::Avoid => return Ok(None),
        };
        let lifted = lift_lifting(sig, l)?;
        for a in x.opens() {
            cells.push((lifted.eval(x, &[a])?, target.cell(x, cell, a)?));
        }
    }
    let profile_t: HashMap<Vec<bool>, usize> =
        (0..tgt.len()).map(|j| (cells.iter().map(|(_, c)| c.contains(j)).collect(), j)).collect();
    let mut map = Vec::with_capacity(src.len());
    for i in 0..src.len() {
        let p: Vec<bool> = cells.iter().map(|(c, _)| c.contains(i)).collect();
        match profile_t.get(&p) {
            Some(&j) => map.push(j),
            None => return Ok(None),
        }
    }
    Ok(Some(ContMap::new(src.space.clone(), tgt.space.clone(), map)?))
}

/// `iso_Y ∘ T̂ f = T f ∘ iso_X`.
pub fn iso_commutes(sig: &KkpSignature, target: &TopFunctor, f: &ContMap) -> Result<bool> {
    let iso_x = kkp_iso(sig, target, f.source())?.ok_or_else(|| Error::Invalid("no isomorphism on the source".into()))?;
    let iso_y = kkp_iso(sig, target, f.target())?.ok_or_else(|| Error::Invalid("no isomorphism on the target".into()))?;
    let lhs = kkp_map(sig, f)?.then(&iso_y.map)?;
    let rhs = iso_x.map.then(&target.on_map(f)?)?;
    Ok(lhs.assignment() == rhs.assignment())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finspace::{all_topologies, continuous_maps, find_frame_iso};

    fn pd() -> KkpSignature {
        KkpSignature::new(SetFunctor::Powerset, &[SetLifting::Box, SetLifting::Dia])
    }

    fn md() -> KkpSignature {
        KkpSignature::new(SetFunctor::Monotone, &[SetLifting::Box, SetLifting::Dia])
    }

    #[test]
    fn signature_names_round_trip() {
        for s in ["kkp:powerset:box,dia", "kkp:monotone:box", "kkp:powerset:"] {
            assert_eq!(KkpSignature::parse(s).unwrap().to_string(), s);
        }
        assert!(KkpSignature::parse("kkp:lists:box").is_err());
    }

    #[test]
    fn fdot_examples() {
        let one = FinSpace::discrete_n(1);
        assert!(find_frame_iso(&fdot_frame(&pd(), &one).unwrap().frame, &FinFrame::boolean(2)).is_some());
        assert!(find_frame_iso(&fdot_frame(&md(), &one).unwrap().frame, &FinFrame::boolean(3)).is_some());
        let empty = KkpSignature::new(SetFunctor::Powerset, &[]);
        assert_eq!(fdot_frame(&empty, &one).unwrap().frame.len(), 2);
        assert_eq!(kkp_space(&empty, &FinSpace::discrete_n(2)).unwrap().len(), 1);
    }

    #[test]
    fn congruence_skips_antitone_liftings() {
        let sig = KkpSignature::new(SetFunctor::Powerset, &[SetLifting::Box, SetLifting::Avoid]);
        let (_, report) = fhat_frame(&sig, &FinSpace::discrete_n(2)).unwrap();
        assert_eq!(report.skipped, vec![SetLifting::Avoid]);
        assert!(report.instances > 0);
    }

    #[test]
    fn agreement_with_vietoris_and_dkh() {
        for n in 0..=3 {
            let x = FinSpace::discrete_n(n);
            let iso = kkp_iso(&pd(), &TopFunctor::Vietoris, &x).unwrap().unwrap();
            assert!(iso.canonical);
        }
        for (n, size) in [(1, 3), (2, 6)] {
            let x = FinSpace::discrete_n(n);
            assert_eq!(kkp_space(&md(), &x).unwrap().len(), size);
            assert!(kkp_iso(&md(), &TopFunctor::Dkh, &x).unwrap().unwrap().canonical);
        }
    }

    #[test]
    fn lifted_map_matches_frame_route_and_is_functorial() {
        for sig in [pd(), md()] {
            let spaces: Vec<FinSpace> = (0..=2).flat_map(all_topologies).collect();
            for x in &spaces {
                assert!(kkp_points_via_frame(&sig, x).unwrap().is_homeomorphism());
                let id = ContMap::identity(x);
                assert_eq!(kkp_map(&sig, &id).unwrap(), ContMap::identity(&kkp_space(&sig, x).unwrap()));
                for y in &spaces {
                    for f in continuous_maps(x, y) {
                        let direct = kkp_map(&sig, &f).unwrap();
                        assert_eq!(direct, kkp_map_via_frames(&sig, &f).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn lift_theorems_on_small_spaces() {
        for x in (0..=2).flat_map(all_topologies) {
            for sig in [pd(), md()] {
                let r = check_lift_theorems(&sig, &x).unwrap();
                assert!(r.all_hold(), "{sig} on {x:?}: {r:?}");
            }
        }
    }
}

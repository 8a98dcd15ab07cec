use crate::bits::Bits;
use crate::error::{Error, Result};

use super::frame::{FinFrame, FrameHom};
use super::map::ContMap;
use super::space::FinSpace;

/// The frame of opens of a space, with each element's underlying open set.
#[derive(Clone, Debug)]
pub struct OpenFrame {
    pub frame: FinFrame,
    pub opens: Vec<Bits>,
}

impl OpenFrame {
    pub fn element_of(&self, open: Bits) -> Option<usize> {
        self.opens.binary_search(&open).ok()
    }
}

/// opn X, ordered by inclusion; elements follow the canonical order of opens.
pub fn opn_frame(x: &FinSpace) -> Result<OpenFrame> {
    let opens = x.try_opens(super::frame::MAX_FRAME + 1)?;
    let names = opens.iter().map(|o| x.render(*o)).collect();
    let frame = FinFrame::from_sets(names, &opens)?;
    Ok(OpenFrame { frame, opens })
}

/// opn f = f⁻¹ : opn Y → opn X.
pub fn opn_map(f: &ContMap) -> Result<FrameHom> {
    if !f.is_continuous() {
        return Err(Error::NotContinuous("opn is only defined on continuous maps".into()));
    }
    let src = opn_frame(f.target())?;
    let tgt = opn_frame(f.source())?;
    let map = src
        .opens
        .iter()
        .map(|&o| tgt.element_of(f.preimage(o)).expect("preimage of an open is open"))
        .collect();
    let h = FrameHom::new(src.frame, tgt.frame, map)?;
    if !h.is_frame_hom() {
        return Err(Error::Invariant("preimage map is not a frame homomorphism".into()));
    }
    Ok(h)
}

/// The points of a frame: its homomorphisms into 2.
#[derive(Clone, Debug)]
pub struct FramePoints {
    /// pt F with the topology `{ã | a ∈ F}`.
    pub space: FinSpace,
    /// For each point, the set of elements it sends to 1.
    pub filters: Vec<Bits>,
    /// For each element `a`, the open `ã` of points sending `a` to 1.
    pub tilde: Vec<Bits>,
}

impl FramePoints {
    fn assemble(f: &FinFrame, mut filters: Vec<Bits>) -> Result<FramePoints> {
        filters.sort();
        let names = filters
            .iter()
            .map(|fl| {
                let least = f.meet_all(fl.iter());
                format!("up:{}", f.name(least))
            })
            .collect();
        let tilde: Vec<Bits> =
            (0..f.len()).map(|a| (0..filters.len()).filter(|&p| filters[p].contains(a)).collect()).collect();
        let space = FinSpace::new(names, &tilde)?;
        Ok(FramePoints { space, filters, tilde })
    }

    pub fn value(&self, point: usize, element: usize) -> bool {
        self.filters[point].contains(element)
    }
}

/// Largest frame for which points are found by exhaustive enumeration.
pub const BRUTE_FORCE_POINTS: usize = 20;

/// Points by exhaustive enumeration of the `2^|F|` candidate maps into 2.
pub fn frame_points_exhaustive(f: &FinFrame) -> Result<FramePoints> {
    let n = f.len();
    if n > BRUTE_FORCE_POINTS {
        return Err(Error::resource("elements for exhaustive point enumeration", BRUTE_FORCE_POINTS));
    }
    let mut found = Vec::new();
    for mask in 0u64..(1u64 << n) {
        let val = |a: usize| mask >> a & 1 == 1;
        if val(f.bottom()) || !val(f.top()) {
            continue;
        }
        let hom = (0..n).all(|a| {
            (0..n).all(|b| val(f.meet(a, b)) == (val(a) && val(b)) && val(f.join(a, b)) == (val(a) || val(b)))
        });
        if hom {
            found.push(Bits::from_u64(mask));
        }
    }
    FramePoints::assemble(f, found)
}

/// Points via join-irreducibles: in a finite distributive lattice every point
/// is `a ↦ [j ≤ a]` for a unique join-irreducible `j`.
pub fn frame_points(f: &FinFrame) -> Result<FramePoints> {
    let filters = f
        .join_irreducibles()
        .into_iter()
        .map(|j| (0..f.len()).filter(|&a| f.leq(j, a)).collect())
        .collect();
    FramePoints::assemble(f, filters)
}

/// pt(opn X) with the unit `x ↦ p_x`.
#[derive(Clone, Debug)]
pub struct Sobrification {
    pub opens: OpenFrame,
    pub points: FramePoints,
    pub unit: ContMap,
    /// The unit is a homeomorphism.
    pub is_sober: bool,
}

pub fn sobrify(x: &FinSpace) -> Result<Sobrification> {
    let opens = opn_frame(x)?;
    let points = frame_points(&opens.frame)?;
    let mut unit = Vec::with_capacity(x.len());
    for p in 0..x.len() {
        let filter: Bits = (0..opens.opens.len()).filter(|&a| opens.opens[a].contains(p)).collect();
        let idx = points
            .filters
            .binary_search(&filter)
            .map_err(|_| Error::Invariant(format!("p_{} is not a point of opn X", x.name(p))))?;
        unit.push(idx);
    }
    let unit = ContMap::new(x.clone(), points.space.clone(), unit)?;
    if !unit.is_continuous() {
        return Err(Error::Invariant("sobrification unit is not continuous".into()));
    }
    let is_sober = unit.is_homeomorphism();
    Ok(Sobrification { opens, points, unit, is_sober })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finspace::find_homeomorphism;

    #[test]
    fn opn_of_one_point_is_two() {
        let x = FinSpace::discrete_n(1);
        let o = opn_frame(&x).unwrap();
        assert_eq!(o.frame.len(), 2);
    }

    #[test]
    fn opn_of_sierpinski_is_three_chain() {
        let o = opn_frame(&FinSpace::sierpinski()).unwrap();
        assert_eq!(o.frame.names(), &["{}", "{1}", "{0,1}"]);
        assert!(o.frame.leq(0, 1) && o.frame.leq(1, 2));
    }

    #[test]
    fn opn_of_identity_is_identity() {
        let s = FinSpace::sierpinski();
        let h = opn_map(&ContMap::identity(&s)).unwrap();
        assert_eq!(h, FrameHom::identity(&opn_frame(&s).unwrap().frame));
    }

    #[test]
    fn points_of_small_frames() {
        assert_eq!(frame_points(&FinFrame::two()).unwrap().space.len(), 1);
        let chain = frame_points(&FinFrame::chain(3)).unwrap();
        assert!(find_homeomorphism(&chain.space, &FinSpace::sierpinski()).is_some());
        let b4 = frame_points(&FinFrame::boolean(2)).unwrap();
        assert!(b4.space.is_discrete() && b4.space.len() == 2);
    }

    #[test]
    fn exhaustive_and_irreducible_routes_agree() {
        for f in crate::finspace::enumerate_frames(6) {
            let a = frame_points_exhaustive(&f).unwrap();
            let b = frame_points(&f).unwrap();
            assert_eq!(a.filters, b.filters);
            assert_eq!(a.space, b.space);
        }
    }

    #[test]
    fn sobrify_examples() {
        let s = sobrify(&FinSpace::sierpinski()).unwrap();
        assert!(s.is_sober);
        let t = sobrify(&FinSpace::two_trivial()).unwrap();
        assert!(!t.is_sober);
        assert_eq!(t.points.space.len(), 1);
        let d = sobrify(&FinSpace::discrete_n(3)).unwrap();
        assert!(d.is_sober);
    }
}

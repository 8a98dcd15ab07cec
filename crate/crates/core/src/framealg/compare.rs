use crate::bits::Bits;
use crate::coalgfun::{Cell, TopFunctor};
use crate::error::{Error, Result};
use crate::finspace::{find_homeomorphism, opn_frame, ContMap, FinSpace, FrameHom};

use super::monotone::{box_gen, dia_gen, present_m, PresentOptions};
use super::presentation::Presentation;
use super::solve::{presentation_points, PresentationPoints, SolveBounds};

/// Outcome of comparing the point spaces of two presentations.
#[derive(Clone, Debug)]
pub struct IsoReport {
    pub left: PresentationPoints,
    pub right: PresentationPoints,
    /// A homeomorphism from the left point space to the right one, if any.
    pub witness: Option<ContMap>,
}

impl IsoReport {
    pub fn isomorphic(&self) -> bool {
        self.witness.is_some()
    }
}

pub fn compare_presentations(p: &Presentation, q: &Presentation, bounds: SolveBounds) -> Result<IsoReport> {
    let left = presentation_points(p, bounds)?;
    let right = presentation_points(q, bounds)?;
    let witness = find_homeomorphism(&left.space, &right.space);
    Ok(IsoReport { left, right, witness })
}

/// Comparison of `pt(M(opn X))` with `D_kh X`.
#[derive(Clone, Debug)]
pub struct DualityReport {
    pub points: PresentationPoints,
    pub carrier_size: usize,
    /// `ζ(p) = W_p`, or `None` when some `W_p` is not in the carrier.
    pub zeta: Option<ContMap>,
    pub zeta_homeomorphism: bool,
    /// `θ(ζ(p)) = p`, where `θ(W)` sends `□a` to `[a ∈ W]` and `◇a` to `[X∖a ∉ W]`.
    pub theta_inverse: bool,
    /// `ζ` carries each generator open `g̃` onto `η(g)`: `⊡̄a` for `□a`, `⟋a` for `◇a`.
    pub eta_on_generators: bool,
    /// The open-set map induced by `ζ` is a frame isomorphism; absent when the frames are too large.
    pub eta_frame_iso: Option<bool>,
}

impl DualityReport {
    pub fn holds(&self) -> bool {
        self.zeta_homeomorphism && self.theta_inverse && self.eta_on_generators && self.eta_frame_iso != Some(false)
    }
}

/// Check the monotone duality on `X`: enumerate `pt(M(opn X))`, send each
/// point `p` to `W_p = ↑{X∖a | p(◇a) = 0}`, and test the result against `D_kh X`.
pub fn check_monotone_duality(x: &FinSpace) -> Result<DualityReport> {
    let of = opn_frame(x)?;
    let f = &of.frame;
    let p = present_m(f, PresentOptions::default());
    let bounds = SolveBounds { max_generators: p.generators().len().max(SolveBounds::default().max_generators), ..SolveBounds::default() };
    let points = presentation_points(&p, bounds)?;
    let dkh = TopFunctor::Dkh.carrier(x)?;
    let full = x.full().low_u64();
    let subsets = 1u64 << x.len();
    let boxes: Vec<usize> = (0..f.len()).map(|a| p.generator_index(&box_gen(f, a))).collect::<Result<_>>()?;
    let dias: Vec<usize> = (0..f.len()).map(|a| p.generator_index(&dia_gen(f, a))).collect::<Result<_>>()?;

    let mut zeta = Vec::with_capacity(points.assignments.len());
    for asg in &points.assignments {
        let cores: Vec<u64> =
            (0..f.len()).filter(|&a| !asg.contains(dias[a])).map(|a| full & !of.opens[a].low_u64()).collect();
        let w = (0..subsets).filter(|&u| cores.iter().any(|&c| c & !u == 0)).fold(0u64, |acc, u| acc | 1 << u);
        match dkh.position(w) {
            Some(i) => zeta.push(i),
            None => break,
        }
    }
    let zeta = if zeta.len() == points.assignments.len() {
        Some(ContMap::new(points.space.clone(), dkh.space.clone(), zeta)?)
    } else {
        None
    };
    let Some(z) = zeta.clone() else {
        return Ok(DualityReport {
            points,
            carrier_size: dkh.len(),
            zeta: None,
            zeta_homeomorphism: false,
            theta_inverse: false,
            eta_on_generators: false,
            eta_frame_iso: None,
        });
    };
    let zeta_homeomorphism = z.is_homeomorphism();

    let theta = |w: u64| -> Bits {
        let mut out = Bits::EMPTY;
        for a in 0..f.len() {
            let o = of.opens[a].low_u64();
            if w >> o & 1 == 1 {
                out.insert(boxes[a]);
            }
            if w >> (full & !o) & 1 == 0 {
                out.insert(dias[a]);
            }
        }
        out
    };
    let theta_inverse =
        (0..points.assignments.len()).all(|i| theta(dkh.elems[z.apply(i)]) == points.assignments[i]);

    let mut eta_on_generators = true;
    for a in 0..f.len() {
        for (g, cell) in [(boxes[a], Cell::Box), (dias[a], Cell::Dia)] {
            let image = z.image(points.gen_open(g));
            eta_on_generators &= image == TopFunctor::Dkh.cell(x, cell, of.opens[a])?;
        }
    }

    let eta_frame_iso = if zeta_homeomorphism {
        match (opn_frame(&points.space), opn_frame(&dkh.space)) {
            (Ok(src), Ok(tgt)) => {
                let map = src
                    .opens
                    .iter()
                    .map(|&o| tgt.element_of(z.image(o)).ok_or_else(|| Error::Invariant("image of an open".into())))
                    .collect::<Result<Vec<_>>>();
                match map {
                    Ok(map) => Some(FrameHom::new(src.frame, tgt.frame, map)?.is_isomorphism()),
                    Err(_) => Some(false),
                }
            }
            (Err(e), _) | (_, Err(e)) if e.is_resource() => None,
            (Err(e), _) | (_, Err(e)) => return Err(e),
        }
    } else {
        Some(false)
    };

    Ok(DualityReport {
        points,
        carrier_size: dkh.len(),
        zeta,
        zeta_homeomorphism,
        theta_inverse,
        eta_on_generators,
        eta_frame_iso,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finspace::FinFrame;
    use crate::framealg::monotone::{present_m, present_mprime, PresentOptions};

    #[test]
    fn m_and_mprime_agree_on_two() {
        let f = FinFrame::two();
        let p = present_m(&f, PresentOptions::default());
        let q = present_mprime(&f, PresentOptions::default()).unwrap();
        let bounds = SolveBounds { max_generators: 64, ..SolveBounds::default() };
        let r = compare_presentations(&p, &q, bounds).unwrap();
        assert!(r.isomorphic());
        assert_eq!(r.left.space.len(), 3);
    }

    #[test]
    fn monotone_duality_on_small_discrete_spaces() {
        for (n, size) in [(1, 3), (2, 6)] {
            let r = check_monotone_duality(&FinSpace::discrete_n(n)).unwrap();
            assert_eq!(r.carrier_size, size);
            assert_eq!(r.points.space.len(), size);
            assert!(r.holds(), "{r:?}");
            assert_eq!(r.eta_frame_iso, Some(true));
        }
    }

    #[test]
    fn eta_extends_to_the_presented_frame_on_one_point() {
        use crate::framealg::presented_frame_small;
        let x = FinSpace::discrete_n(1);
        let f = opn_frame(&x).unwrap().frame;
        let p = present_m(&f, PresentOptions::default());
        let pf = presented_frame_small(&p).unwrap();
        let dkh = TopFunctor::Dkh.carrier(&x).unwrap();
        let target = opn_frame(&dkh.space).unwrap();
        // send each generator to its cell and extend by joins of meets
        let cell_of = |g: usize| {
            let name = &p.generators()[g];
            let (kind, elem) = name.split_once(':').unwrap();
            let a = f.index_of(elem).unwrap();
            let open = opn_frame(&x).unwrap().opens[a];
            let cell = if kind == "box" { Cell::Box } else { Cell::Dia };
            TopFunctor::Dkh.cell(&x, cell, open).unwrap()
        };
        let mut map = vec![usize::MAX; pf.frame.len()];
        let n = p.generators().len();
        for sel in 0u32..1 << (1 << n) {
            // element = join over chosen generator subsets of their meets
            let mut elem = pf.frame.bottom();
            let mut open = Bits::EMPTY;
            for s in 0..1usize << n {
                if sel >> s & 1 == 1 {
                    let gens: Vec<usize> = (0..n).filter(|g| s >> g & 1 == 1).collect();
                    elem = pf.frame.join(elem, pf.frame.meet_all(gens.iter().map(|&g| pf.generators[g])));
                    open = open | gens.iter().fold(dkh.space.full(), |acc, &g| acc & cell_of(g));
                }
            }
            let t = target.element_of(open).unwrap();
            assert!(map[elem] == usize::MAX || map[elem] == t, "well defined");
            map[elem] = t;
        }
        assert!(map.iter().all(|&t| t != usize::MAX));
        let hom = FrameHom::new(pf.frame, target.frame, map).unwrap();
        assert!(hom.is_isomorphism());
    }

    #[test]
    fn different_sizes_are_not_isomorphic() {
        let one = Presentation::new(vec!["g".into()], vec![]).unwrap();
        let two = Presentation::new(vec!["g".into(), "h".into()], vec![]).unwrap();
        let r = compare_presentations(&one, &two, SolveBounds::default()).unwrap();
        assert!(!r.isomorphic());
    }
}

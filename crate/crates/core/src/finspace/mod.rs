//! Finite spaces, continuous maps, finite frames, and the pt/opn duality on
//! finite objects.

mod duality;
mod frame;
mod map;
mod space;

use std::collections::HashSet;

pub use duality::{
    frame_points, frame_points_exhaustive, opn_frame, opn_map, sobrify, FramePoints, OpenFrame, Sobrification,
    BRUTE_FORCE_POINTS,
};
pub use frame::{enumerate_frames, find_frame_iso, FinFrame, FrameHom, MAX_FRAME, MAX_ORDER_FRAME};
pub use map::{find_homeomorphism, ContMap};
pub use space::FinSpace;

pub(crate) use space::{numbered, render_set};

use crate::bits::Bits;

/// Every topology on `n ≤ 4` labelled points, obtained by generating from every
/// possible subbase and removing duplicates. Points are named `x0, x1, ...`.
pub fn all_topologies(n: usize) -> Vec<FinSpace> {
    assert!(n <= 4, "subbase enumeration is limited to four points");
    let subsets: Vec<Bits> = (0..1u64 << n).map(Bits::from_u64).collect();
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for family in 0u64..(1u64 << subsets.len()) {
        let subbase: Vec<Bits> = (0..subsets.len()).filter(|&i| family >> i & 1 == 1).map(|i| subsets[i]).collect();
        let x = FinSpace::new(numbered(n), &subbase).expect("numbered points are distinct");
        if seen.insert(x.nbhds().to_vec()) {
            out.push(x);
        }
    }
    out
}

/// All continuous maps `x → y`, enumerated in lexicographic order of assignments.
pub fn continuous_maps(x: &FinSpace, y: &FinSpace) -> Vec<ContMap> {
    let n = x.len();
    let m = y.len();
    let mut out = Vec::new();
    if m == 0 {
        if n == 0 {
            out.push(ContMap::new(x.clone(), y.clone(), vec![]).unwrap());
        }
        return out;
    }
    let mut assign = vec![0usize; n];
    loop {
        // continuity = monotonicity in the specialisation preorder
        let ok = (0..n).all(|a| x.nbhd(a).iter().all(|b| y.nbhd(assign[a]).contains(assign[b])));
        if ok {
            out.push(ContMap::new(x.clone(), y.clone(), assign.clone()).unwrap());
        }
        let mut i = 0;
        loop {
            if i == n {
                return out;
            }
            assign[i] += 1;
            if assign[i] < m {
                break;
            }
            assign[i] = 0;
            i += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn topology_counts() {
        // Number of topologies on a labelled n-set.
        let counts: Vec<usize> = (0..=4).map(|n| all_topologies(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 4, 29, 355]);
    }

    #[test]
    fn continuous_maps_agree_with_check() {
        for x in all_topologies(2) {
            for y in all_topologies(2) {
                let fast = continuous_maps(&x, &y).len();
                let mut slow = 0;
                for a in 0..4 {
                    let f = ContMap::new(x.clone(), y.clone(), vec![a % 2, a / 2]).unwrap();
                    if f.is_continuous() {
                        slow += 1;
                    }
                }
                assert_eq!(fast, slow);
            }
        }
    }
}

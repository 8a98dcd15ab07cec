//! Frame predicates, presentations by generators and relations, and the
//! presentations of the monotone-neighbourhood frame.

mod compare;
mod free;
mod monotone;
mod predicates;
mod presentation;
mod solve;

pub use compare::{check_monotone_duality, compare_presentations, DualityReport, IsoReport};
pub use free::{presented_frame_small, PresentedFrame, MAX_FREE_GENERATORS};
pub use monotone::{
    box_gen, dia_gen, directed_subsets, pair_gen, present_m, present_mprime, PresentOptions, MAX_MPRIME_FRAME,
};
pub use predicates::{is_regular_element, is_regular_frame, negation, well_inside};
pub use presentation::{LatticeTerm, Presentation, RelKind, Relation};
pub use solve::{presentation_points, PresentationPoints, SolveBounds};

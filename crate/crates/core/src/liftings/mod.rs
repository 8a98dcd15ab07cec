//! Predicate liftings for set functors, open predicate liftings for
//! topological functors, their property checks, and Sierpinski codes.

mod code;
mod open;
mod set;

pub use code::{
    check_strong_openness, extend_builtin, lifting_from_code, sierpinski_code, strong_extension, top_extension,
    Disagreement, SierpinskiCode, StrongLifting, MAX_CODE_ARITY,
};
pub use open::{
    builtin_lifting, builtin_liftings, check_characteristic, check_monotone, check_naturality, check_scott,
    lifting_ids, open_tuples, sierpinski_power, LiftingKind, OpenLifting, SCOTT_FAMILY_LIMIT,
};
pub use set::{set_code, set_lifting_from_code, SetLifting};

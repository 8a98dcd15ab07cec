//! Geometric modal formulas: syntax, semantics on models, normal forms,
//! definable opens and the quotient by modal equivalence.

mod equiv;
mod formula;
mod normal;
mod random;
mod semantics;

pub use equiv::{
    definable_opens, joint_definable_opens, modal_equiv, modal_equiv_across, theory_quotient, DefinableOpens,
    QuotientFailure, TheoryQuotient, MAX_DEFINABLE,
};
pub use formula::Formula;
pub use normal::{is_normal, normal_form};
pub use random::{enumerate_formulas, random_formula, RANDOM_FORMULA_NODES};
pub use semantics::{satisfying_points, truth_set, LiftingFlags, Signature};

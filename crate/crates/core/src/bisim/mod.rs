//! Λ-bisimulations, Aczel–Mendler bisimulations and how they compare with
//! modal and behavioural equivalence.

mod am;
mod compare;
mod lambda;
mod relation;

pub use am::{is_am_bisim, relation_space, search_am_transition, AmBounds, AmOutcome, RelationSpace};
pub use compare::{
    behavioural_equiv, compare_equivalences, modal_equiv_relation, relation_from_rows, BehaviouralVerdict,
    EquivalenceFlags, EquivalenceReport,
};
pub use lambda::{
    greatest_lambda_bisim, greatest_lambda_bisim_within, is_lambda_bisim, letter_agreement, BisimCounterexample,
    MAX_COHERENT_TUPLES,
};
pub use relation::{coherent_pairs, Relation, MAX_OPEN_PAIRS};

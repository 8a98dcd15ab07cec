//! Consequence pairs, rule schemata, one-step axiom systems, a derivation
//! checker and semantic soundness checks.

mod derivation;
mod pattern;
mod soundness;
mod system;

pub use derivation::{check_derivation, resolve_rule, DerivationFailure, DerivationReport, DerivationStep, FailureKind};
pub use pattern::{Level, OpenContext, OpenSubst, Pattern};
pub use soundness::{find_countermodel, soundness_sweep, validity, SoundnessReport, SweepBounds, Violation};
pub use system::{
    axiom_system, geometric_rules, is_directed, AxiomSystem, ConsequencePair, Instance, PremiseSchema, Schema,
    SideCondition, SYSTEMS,
};

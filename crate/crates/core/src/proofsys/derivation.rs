use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::error::{Error, Result};
use crate::logic::Formula;

use super::system::{axiom_system, geometric_rules, ConsequencePair, Schema};

/// One line of a derivation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivationStep {
    pub id: u64,
    /// A structural rule name, or `onestep:SYSTEM:NAME`.
    pub rule: String,
    pub premises: Vec<u64>,
    pub conclusion: ConsequencePair,
    pub subst: BTreeMap<String, Formula>,
}

/// Look up a structural rule or a one-step schema.
pub fn resolve_rule(rule: &str) -> Result<Schema> {
    if let Some(rest) = rule.strip_prefix("onestep:") {
        let (system, name) = rest.split_once(':').ok_or_else(|| Error::UnknownRule(rule.to_string()))?;
        return axiom_system(system)?.schema(name).cloned();
    }
    geometric_rules().into_iter().find(|s| s.name == rule).ok_or_else(|| Error::UnknownRule(rule.to_string()))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FailureKind {
    DuplicateId,
    DanglingPremise(u64),
    Rule(Error),
    PremiseCount { expected: usize, found: usize },
    PremiseMismatch { index: usize, expected: ConsequencePair, found: ConsequencePair },
    ConclusionMismatch { expected: ConsequencePair, found: ConsequencePair },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivationFailure {
    pub step: u64,
    pub kind: FailureKind,
}

impl fmt::Display for DerivationFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "step {}: ", self.step)?;
        match &self.kind {
            FailureKind::DuplicateId => f.write_str("identifier used twice"),
            FailureKind::DanglingPremise(p) => write!(f, "premise {p} does not occur earlier"),
            FailureKind::Rule(e) => write!(f, "{e}"),
            FailureKind::PremiseCount { expected, found } => write!(f, "expected {expected} premises, found {found}"),
            FailureKind::PremiseMismatch { index, expected, found } => {
                write!(f, "premise {index}: expected {expected}, found {found}")
            }
            FailureKind::ConclusionMismatch { expected, found } => write!(f, "expected {expected}, found {found}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivationReport {
    pub steps: usize,
    pub failure: Option<DerivationFailure>,
}

impl DerivationReport {
    pub fn valid(&self) -> bool {
        self.failure.is_none()
    }
}

/// Check every step against its rule, with formulas compared up to the
/// order and nesting of disjunctions. Stops at the first failure.
pub fn check_derivation(steps: &[DerivationStep]) -> DerivationReport {
    let mut proved: HashMap<u64, &ConsequencePair> = HashMap::new();
    for step in steps {
        if let Err(kind) = check_step(step, &proved) {
            return DerivationReport { steps: steps.len(), failure: Some(DerivationFailure { step: step.id, kind }) };
        }
        proved.insert(step.id, &step.conclusion);
    }
    DerivationReport { steps: steps.len(), failure: None }
}

fn check_step(step: &DerivationStep, proved: &HashMap<u64, &ConsequencePair>) -> std::result::Result<(), FailureKind> {
    if proved.contains_key(&step.id) {
        return Err(FailureKind::DuplicateId);
    }
    let premises = step
        .premises
        .iter()
        .map(|p| proved.get(p).copied().ok_or(FailureKind::DanglingPremise(*p)))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    let schema = resolve_rule(&step.rule).map_err(FailureKind::Rule)?;
    let inst = schema.instantiate(&step.subst).map_err(FailureKind::Rule)?;
    if inst.premises.len() != premises.len() {
        return Err(FailureKind::PremiseCount { expected: inst.premises.len(), found: premises.len() });
    }
    for (index, (want, got)) in inst.premises.iter().zip(&premises).enumerate() {
        if !want.equiv_syntax(got) {
            return Err(FailureKind::PremiseMismatch { index, expected: want.clone(), found: (*got).clone() });
        }
    }
    if !inst.conclusion.equiv_syntax(&step.conclusion) {
        return Err(FailureKind::ConclusionMismatch { expected: inst.conclusion, found: step.conclusion.clone() });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(t: &str) -> Formula {
        Formula::parse_unchecked(t).unwrap()
    }

    fn step(id: u64, rule: &str, premises: &[u64], lhs: &str, rhs: &str, subst: &[(&str, &str)]) -> DerivationStep {
        DerivationStep {
            id,
            rule: rule.into(),
            premises: premises.to_vec(),
            conclusion: ConsequencePair::new(f(lhs), f(rhs)),
            subst: subst.iter().map(|(k, v)| (k.to_string(), f(v))).collect(),
        }
    }

    #[test]
    fn identity_and_top() {
        assert!(check_derivation(&[step(1, "identity", &[], "p:p", "p:p", &[("phi", "p:p")])]).valid());
        assert!(check_derivation(&[step(1, "conj-top", &[], "p:q", "top", &[("phi", "p:q")])]).valid());
    }

    #[test]
    fn dangling_premise() {
        let r = check_derivation(&[step(1, "cut", &[7, 8], "p:a", "p:c", &[("phi", "p:a"), ("psi", "p:b"), ("chi", "p:c")])]);
        assert_eq!(r.failure.unwrap().kind, FailureKind::DanglingPremise(7));
    }

    #[test]
    fn a_small_monotone_derivation() {
        // p & q <| p, hence <box>(p & q) <| <box>(p); then cut with identity
        let d = vec![
            step(1, "conj-left", &[], "(p:p & p:q)", "p:p", &[("phi", "p:p"), ("psi", "p:q")]),
            step(2, "onestep:monotone:m1", &[1], "<box>((p:p & p:q))", "<box>(p:p)", &[("a", "(p:p & p:q)"), ("b", "p:p")]),
            step(3, "identity", &[], "<box>(p:p)", "<box>(p:p)", &[("phi", "<box>(p:p)")]),
            step(4, "cut", &[2, 3], "<box>((p:p & p:q))", "<box>(p:p)", &[
                ("phi", "<box>((p:p & p:q))"),
                ("psi", "<box>(p:p)"),
                ("chi", "<box>(p:p)"),
            ]),
        ];
        let r = check_derivation(&d);
        assert!(r.valid(), "{:?}", r.failure);
    }

    #[test]
    fn mismatch_is_reported() {
        let r = check_derivation(&[step(1, "conj-left", &[], "(p:p & p:q)", "p:q", &[("phi", "p:p"), ("psi", "p:q")])]);
        assert!(matches!(r.failure.unwrap().kind, FailureKind::ConclusionMismatch { .. }));
    }

    #[test]
    fn disjunction_order_is_ignored() {
        let d = [step(1, "disj-inj", &[], "p:b", "\\/[p:b, p:a]", &[("phi", "p:b"), ("S", "\\/[p:a, p:b]")])];
        assert!(check_derivation(&d).valid());
    }

    #[test]
    fn unknown_rule() {
        let r = check_derivation(&[step(1, "magic", &[], "top", "top", &[])]);
        assert!(matches!(r.failure.unwrap().kind, FailureKind::Rule(Error::UnknownRule(_))));
    }
}

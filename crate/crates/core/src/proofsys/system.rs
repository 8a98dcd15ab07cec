use std::collections::BTreeMap;
use std::fmt;

use crate::bits::Bits;
use crate::error::{Error, Result};
use crate::logic::Formula;

use super::pattern::{OpenSubst, Pattern};

/// `lhs ◁ rhs`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConsequencePair {
    pub lhs: Formula,
    pub rhs: Formula,
}

impl ConsequencePair {
    pub fn new(lhs: Formula, rhs: Formula) -> ConsequencePair {
        ConsequencePair { lhs, rhs }
    }

    pub fn equiv_syntax(&self, other: &ConsequencePair) -> bool {
        self.lhs.equiv_syntax(&other.lhs) && self.rhs.equiv_syntax(&other.rhs)
    }
}

impl fmt::Display for ConsequencePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} <| {}", self.lhs, self.rhs)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PremiseSchema {
    Single(Pattern, Pattern),
    /// One premise per member of `family`, with the member bound to `bound`.
    ForEach { family: String, bound: String, lhs: Pattern, rhs: Pattern },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SideCondition {
    /// The value of `var` is a member of `family`.
    Member { var: String, family: String },
    /// The family is non-empty and directed.
    Directed(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Schema {
    pub name: String,
    pub premises: Vec<PremiseSchema>,
    pub conclusion: (Pattern, Pattern),
    pub side: Vec<SideCondition>,
}

/// A schema with its premises and conclusion filled in.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    pub premises: Vec<ConsequencePair>,
    pub conclusion: ConsequencePair,
}

impl Schema {
    pub fn new(name: &str, premises: Vec<PremiseSchema>, lhs: Pattern, rhs: Pattern) -> Schema {
        Schema { name: name.to_string(), premises, conclusion: (lhs, rhs), side: vec![] }
    }

    pub fn with_side(mut self, side: SideCondition) -> Schema {
        self.side.push(side);
        self
    }

    pub fn is_axiom(&self) -> bool {
        self.premises.is_empty()
    }

    pub fn metavariables(&self) -> (Vec<String>, Vec<String>) {
        let (mut vars, mut fams) = (vec![], vec![]);
        for p in &self.premises {
            match p {
                PremiseSchema::Single(l, r) => {
                    l.metavariables(&mut vars, &mut fams);
                    r.metavariables(&mut vars, &mut fams);
                }
                PremiseSchema::ForEach { family, bound, lhs, rhs } => {
                    // the bound name is local to the premise
                    let (mut v, mut f) = (vec![], vec![]);
                    Pattern::join_map(family, bound, Pattern::and(lhs.clone(), rhs.clone())).metavariables(&mut v, &mut f);
                    for x in v {
                        if !vars.contains(&x) {
                            vars.push(x);
                        }
                    }
                    for x in f {
                        if !fams.contains(&x) {
                            fams.push(x);
                        }
                    }
                }
            }
        }
        self.conclusion.0.metavariables(&mut vars, &mut fams);
        self.conclusion.1.metavariables(&mut vars, &mut fams);
        for s in &self.side {
            let (v, f) = match s {
                SideCondition::Member { var, family } => (Some(var), family),
                SideCondition::Directed(family) => (None, family),
            };
            if let Some(v) = v {
                if !vars.contains(v) {
                    vars.push(v.clone());
                }
            }
            if !fams.contains(f) {
                fams.push(f.clone());
            }
        }
        (vars, fams)
    }

    /// Instantiate with formulas. Membership is syntactic up to disjunction
    /// order; directedness is witnessed by the premises.
    pub fn instantiate(&self, s: &BTreeMap<String, Formula>) -> Result<Instance> {
        for c in &self.side {
            match c {
                SideCondition::Member { var, family } => {
                    let v = s.get(var).ok_or_else(|| Error::Invalid(format!("metavariable `{var}` is not bound")))?;
                    let members = match s.get(family) {
                        Some(Formula::Or(ms)) => ms,
                        _ => return Err(Error::Invalid(format!("family `{family}` must be bound to a disjunction"))),
                    };
                    if !members.iter().any(|m| m.equiv_syntax(v)) {
                        return Err(Error::Invalid(format!("{v} is not a member of the family `{family}`")));
                    }
                }
                SideCondition::Directed(family) => {
                    if matches!(s.get(family), Some(Formula::Or(ms)) if ms.is_empty()) {
                        return Err(Error::NotDirected(format!("family `{family}` is empty")));
                    }
                }
            }
        }
        let mut premises = Vec::new();
        for p in &self.premises {
            match p {
                PremiseSchema::Single(l, r) => premises.push(ConsequencePair::new(l.instantiate(s)?, r.instantiate(s)?)),
                PremiseSchema::ForEach { family, bound, lhs, rhs } => {
                    let members = match s.get(family) {
                        Some(Formula::Or(ms)) => ms.clone(),
                        _ => return Err(Error::Invalid(format!("family `{family}` must be bound to a disjunction"))),
                    };
                    for m in members {
                        let mut inner = s.clone();
                        inner.insert(bound.clone(), m);
                        premises.push(ConsequencePair::new(lhs.instantiate(&inner)?, rhs.instantiate(&inner)?));
                    }
                }
            }
        }
        let conclusion = ConsequencePair::new(self.conclusion.0.instantiate(s)?, self.conclusion.1.instantiate(s)?);
        Ok(Instance { premises, conclusion })
    }

    /// Check side conditions on an open substitution.
    pub fn check_open_side(&self, s: &OpenSubst) -> Result<()> {
        for c in &self.side {
            match c {
                SideCondition::Member { var, family } => {
                    let v = s.vars.get(var).copied().unwrap_or_default();
                    if !s.families.get(family).is_some_and(|f| f.contains(&v)) {
                        return Err(Error::Invalid(format!("`{var}` is not a member of `{family}`")));
                    }
                }
                SideCondition::Directed(family) => {
                    let fam = s.families.get(family).map(Vec::as_slice).unwrap_or_default();
                    if !is_directed(fam) {
                        return Err(Error::NotDirected(format!("family `{family}`")));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Non-empty, and every two members lie below a common member.
pub fn is_directed(fam: &[Bits]) -> bool {
    !fam.is_empty()
        && fam.iter().all(|&a| fam.iter().all(|&b| fam.iter().any(|&c| a.is_subset(c) && b.is_subset(c))))
}

impl fmt::Display for Schema {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prem: Vec<String> = self
            .premises
            .iter()
            .map(|p| match p {
                PremiseSchema::Single(l, r) => format!("{l} <| {r}"),
                PremiseSchema::ForEach { family, bound, lhs, rhs } => format!("{lhs} <| {rhs} ({bound} in {family})"),
            })
            .collect();
        write!(f, "{}: ", self.name)?;
        if !prem.is_empty() {
            write!(f, "{} / ", prem.join(", "))?;
        }
        write!(f, "{} <| {}", self.conclusion.0, self.conclusion.1)
    }
}

/// A named collection of one-step schemata.
#[derive(Clone, Debug)]
pub struct AxiomSystem {
    pub name: String,
    pub schemata: Vec<Schema>,
}

impl AxiomSystem {
    pub fn schema(&self, name: &str) -> Result<&Schema> {
        self.schemata.iter().find(|s| s.name == name).ok_or_else(|| Error::UnknownRule(format!("{}:{name}", self.name)))
    }

    /// Lifting identifiers the schemata use.
    pub fn lifting_ids(&self) -> Vec<String> {
        fn go(p: &Pattern, out: &mut Vec<String>) {
            match p {
                Pattern::Modal(id, ps) => {
                    if !out.contains(id) {
                        out.push(id.clone());
                    }
                    ps.iter().for_each(|q| go(q, out));
                }
                Pattern::And(a, b) => {
                    go(a, out);
                    go(b, out);
                }
                Pattern::Or(ps) => ps.iter().for_each(|q| go(q, out)),
                Pattern::JoinMap { body, .. } => go(body, out),
                Pattern::Top | Pattern::Var(_) | Pattern::Join(_) => {}
            }
        }
        let mut out = Vec::new();
        for s in &self.schemata {
            go(&s.conclusion.0, &mut out);
            go(&s.conclusion.1, &mut out);
        }
        out
    }

    /// Replace a schema by name, for building deliberately broken systems.
    pub fn replaced(&self, schema: Schema) -> AxiomSystem {
        let mut out = self.clone();
        for s in &mut out.schemata {
            if s.name == schema.name {
                *s = schema.clone();
            }
        }
        out
    }
}

pub const SYSTEMS: &[&str] = &["monotone", "positive-vietoris"];

fn v(name: &str) -> Pattern {
    Pattern::var(name)
}

fn bx(p: Pattern) -> Pattern {
    Pattern::modal("box", vec![p])
}

fn dm(p: Pattern) -> Pattern {
    Pattern::modal("dia", vec![p])
}

fn mono(name: &str, op: fn(Pattern) -> Pattern) -> Schema {
    Schema::new(name, vec![PremiseSchema::Single(v("a"), v("b"))], op(v("a")), op(v("b")))
}

/// `op(⋁A) ◁ ⋁{op(x) | x ∈ A}` for a family `A` with greatest member `m`.
fn directed(name: &str, op: fn(Pattern) -> Pattern) -> Schema {
    Schema::new(
        name,
        vec![PremiseSchema::ForEach { family: "A".into(), bound: "x".into(), lhs: v("x"), rhs: v("m") }],
        op(Pattern::join("A")),
        Pattern::join_map("A", "x", op(v("x"))),
    )
    .with_side(SideCondition::Member { var: "m".into(), family: "A".into() })
    .with_side(SideCondition::Directed("A".into()))
}

/// The registered one-step systems over the liftings `box` and `dia`.
pub fn axiom_system(name: &str) -> Result<AxiomSystem> {
    let schemata = match name {
        "monotone" => vec![
            mono("m1", bx),
            Schema::new(
                "m2",
                vec![PremiseSchema::Single(Pattern::and(v("a"), v("b")), Pattern::bot())],
                Pattern::and(bx(v("a")), dm(v("b"))),
                Pattern::bot(),
            ),
            directed("m3", bx),
            mono("m4", dm),
            Schema::new(
                "m5",
                vec![PremiseSchema::Single(Pattern::Top, Pattern::or2(v("a"), v("b")))],
                Pattern::Top,
                Pattern::or2(bx(v("a")), dm(v("b"))),
            ),
            directed("m6", dm),
        ],
        "positive-vietoris" => vec![
            Schema::new("box-meet", vec![], Pattern::and(bx(v("a")), bx(v("b"))), bx(Pattern::and(v("a"), v("b")))),
            Schema::new("box-top", vec![], Pattern::Top, bx(Pattern::Top)),
            Schema::new("dia-join", vec![], dm(Pattern::or2(v("a"), v("b"))), Pattern::or2(dm(v("a")), dm(v("b")))),
            Schema::new("dia-bot", vec![], dm(Pattern::bot()), Pattern::bot()),
            Schema::new("box-join", vec![], bx(Pattern::or2(v("a"), v("b"))), Pattern::or2(bx(v("a")), dm(v("b")))),
            Schema::new("dia-meet", vec![], Pattern::and(bx(v("a")), dm(v("b"))), dm(Pattern::and(v("a"), v("b")))),
            mono("box-mono", bx),
            mono("dia-mono", dm),
            directed("box-directed", bx),
            directed("dia-directed", dm),
        ],
        _ => return Err(Error::UnknownSystem(name.to_string())),
    };
    Ok(AxiomSystem { name: name.to_string(), schemata })
}

/// The structural rules of geometric logic.
pub fn geometric_rules() -> Vec<Schema> {
    let (phi, psi, chi) = (v("phi"), v("psi"), v("chi"));
    let single = |l: &Pattern, r: &Pattern| PremiseSchema::Single(l.clone(), r.clone());
    vec![
        Schema::new("identity", vec![], phi.clone(), phi.clone()),
        Schema::new("cut", vec![single(&phi, &psi), single(&psi, &chi)], phi.clone(), chi.clone()),
        Schema::new("conj-top", vec![], phi.clone(), Pattern::Top),
        Schema::new("conj-left", vec![], Pattern::and(phi.clone(), psi.clone()), phi.clone()),
        Schema::new("conj-right", vec![], Pattern::and(phi.clone(), psi.clone()), psi.clone()),
        Schema::new(
            "conj-intro",
            vec![single(&phi, &psi), single(&phi, &chi)],
            phi.clone(),
            Pattern::and(psi.clone(), chi.clone()),
        ),
        Schema::new("disj-inj", vec![], phi.clone(), Pattern::join("S"))
            .with_side(SideCondition::Member { var: "phi".into(), family: "S".into() }),
        Schema::new(
            "disj-elim",
            vec![PremiseSchema::ForEach { family: "S".into(), bound: "s".into(), lhs: v("s"), rhs: psi.clone() }],
            Pattern::join("S"),
            psi.clone(),
        ),
        Schema::new(
            "frame-dist",
            vec![],
            Pattern::and(phi.clone(), Pattern::join("S")),
            Pattern::join_map("S", "s", Pattern::and(phi.clone(), v("s"))),
        ),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(t: &str) -> Formula {
        Formula::parse_unchecked(t).unwrap()
    }

    #[test]
    fn monotone_m2_and_m5_shapes() {
        let sys = axiom_system("monotone").unwrap();
        let s = BTreeMap::from([("a".to_string(), f("p:p")), ("b".to_string(), f("p:q"))]);
        let m2 = sys.schema("m2").unwrap().instantiate(&s).unwrap();
        assert_eq!(m2.premises[0].to_string(), "(p:p & p:q) <| \\/[]");
        assert_eq!(m2.conclusion.to_string(), "(<box>(p:p) & <dia>(p:q)) <| \\/[]");
        let m5 = sys.schema("m5").unwrap().instantiate(&s).unwrap();
        assert_eq!(m5.premises[0].to_string(), "top <| \\/[p:p, p:q]");
        assert_eq!(m5.conclusion.to_string(), "top <| \\/[<box>(p:p), <dia>(p:q)]");
    }

    #[test]
    fn m3_on_a_singleton_family() {
        let sys = axiom_system("monotone").unwrap();
        let s = BTreeMap::from([("A".to_string(), f("\\/[p:a]")), ("m".to_string(), f("p:a"))]);
        let inst = sys.schema("m3").unwrap().instantiate(&s).unwrap();
        assert_eq!(inst.premises, vec![ConsequencePair::new(f("p:a"), f("p:a"))]);
        assert!(inst.conclusion.equiv_syntax(&ConsequencePair::new(f("<box>(\\/[p:a])"), f("\\/[<box>(p:a)]"))));
    }

    #[test]
    fn non_member_maximum_rejected() {
        let sys = axiom_system("monotone").unwrap();
        let s = BTreeMap::from([("A".to_string(), f("\\/[p:a, p:b]")), ("m".to_string(), f("p:c"))]);
        assert!(sys.schema("m3").unwrap().instantiate(&s).is_err());
    }

    #[test]
    fn open_directedness() {
        let a = Bits::from_u64(0b01);
        let b = Bits::from_u64(0b10);
        let ab = Bits::from_u64(0b11);
        assert!(is_directed(&[a, ab]));
        assert!(!is_directed(&[a, b]));
        assert!(!is_directed(&[]));
        let sys = axiom_system("monotone").unwrap();
        let s = OpenSubst {
            vars: BTreeMap::from([("m".into(), a)]),
            families: BTreeMap::from([("A".into(), vec![a, b])]),
        };
        assert!(matches!(sys.schema("m3").unwrap().check_open_side(&s), Err(Error::NotDirected(_))));
    }

    #[test]
    fn unknown_system() {
        assert!(matches!(axiom_system("nope"), Err(Error::UnknownSystem(_))));
    }

    #[test]
    fn systems_use_box_and_dia() {
        for name in SYSTEMS {
            assert_eq!(axiom_system(name).unwrap().lifting_ids(), vec!["box", "dia"]);
        }
    }
}

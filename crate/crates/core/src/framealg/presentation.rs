use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::bits::Bits;
use crate::error::{Error, Result};

/// Term in finite meets and joins over generator names. The empty meet is ⊤
/// and the empty join is ⊥.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LatticeTerm {
    Gen(String),
    Meet(Vec<LatticeTerm>),
    Join(Vec<LatticeTerm>),
}

impl LatticeTerm {
    pub fn gen(name: impl Into<String>) -> LatticeTerm {
        LatticeTerm::Gen(name.into())
    }

    pub fn top() -> LatticeTerm {
        LatticeTerm::Meet(vec![])
    }

    pub fn bottom() -> LatticeTerm {
        LatticeTerm::Join(vec![])
    }

    fn collect_gens<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            LatticeTerm::Gen(g) => out.push(g),
            LatticeTerm::Meet(ts) | LatticeTerm::Join(ts) => ts.iter().for_each(|t| t.collect_gens(out)),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RelKind {
    Leq,
    Eq,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Relation {
    pub lhs: LatticeTerm,
    pub rel: RelKind,
    pub rhs: LatticeTerm,
}

impl Relation {
    pub fn leq(lhs: LatticeTerm, rhs: LatticeTerm) -> Relation {
        Relation { lhs, rel: RelKind::Leq, rhs }
    }

    pub fn eq(lhs: LatticeTerm, rhs: LatticeTerm) -> Relation {
        Relation { lhs, rel: RelKind::Eq, rhs }
    }
}

/// Generators and relations ⟨G | R⟩.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawPresentation")]
pub struct Presentation {
    generators: Vec<String>,
    relations: Vec<Relation>,
    #[serde(skip)]
    index: HashMap<String, usize>,
}

#[derive(Deserialize)]
struct RawPresentation {
    generators: Vec<String>,
    relations: Vec<Relation>,
}

impl TryFrom<RawPresentation> for Presentation {
    type Error = Error;
    fn try_from(raw: RawPresentation) -> Result<Presentation> {
        Presentation::new(raw.generators, raw.relations)
    }
}

impl Presentation {
    pub fn new(generators: Vec<String>, relations: Vec<Relation>) -> Result<Presentation> {
        let mut index = HashMap::new();
        for (i, g) in generators.iter().enumerate() {
            if index.insert(g.clone(), i).is_some() {
                return Err(Error::Invalid(format!("duplicate generator `{g}`")));
            }
        }
        for r in &relations {
            let mut used = Vec::new();
            r.lhs.collect_gens(&mut used);
            r.rhs.collect_gens(&mut used);
            if let Some(g) = used.into_iter().find(|g| !index.contains_key(*g)) {
                return Err(Error::UnknownGenerator(g.to_string()));
            }
        }
        Ok(Presentation { generators, relations, index })
    }

    pub fn generators(&self) -> &[String] {
        &self.generators
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn generator_index(&self, name: &str) -> Result<usize> {
        self.index.get(name).copied().ok_or_else(|| Error::UnknownGenerator(name.to_string()))
    }

    pub(crate) fn compile(&self, t: &LatticeTerm) -> CTerm {
        match t {
            LatticeTerm::Gen(g) => CTerm::Gen(self.index[g]),
            LatticeTerm::Meet(ts) => CTerm::Meet(ts.iter().map(|t| self.compile(t)).collect()),
            LatticeTerm::Join(ts) => CTerm::Join(ts.iter().map(|t| self.compile(t)).collect()),
        }
    }

    /// Distinct relations only; instance generation may produce repeats.
    pub(crate) fn dedup(mut self) -> Presentation {
        let mut seen = HashSet::new();
        self.relations.retain(|r| seen.insert(r.clone()));
        self
    }
}

/// A term with generators resolved to indices.
#[derive(Clone, Debug)]
pub(crate) enum CTerm {
    Gen(usize),
    Meet(Vec<CTerm>),
    Join(Vec<CTerm>),
}

impl CTerm {
    /// Value in the two-element frame under an assignment of generators.
    pub fn eval(&self, a: &Bits) -> bool {
        match self {
            CTerm::Gen(g) => a.contains(*g),
            CTerm::Meet(ts) => ts.iter().all(|t| t.eval(a)),
            CTerm::Join(ts) => ts.iter().any(|t| t.eval(a)),
        }
    }

    /// Value in a lattice given by operations on a carrier type.
    pub fn eval_in<T: Copy>(&self, gen: &dyn Fn(usize) -> T, top: T, bot: T, meet: &dyn Fn(T, T) -> T, join: &dyn Fn(T, T) -> T) -> T {
        match self {
            CTerm::Gen(g) => gen(*g),
            CTerm::Meet(ts) => ts.iter().fold(top, |acc, t| meet(acc, t.eval_in(gen, top, bot, meet, join))),
            CTerm::Join(ts) => ts.iter().fold(bot, |acc, t| join(acc, t.eval_in(gen, top, bot, meet, join))),
        }
    }

    pub fn max_gen(&self) -> Option<usize> {
        match self {
            CTerm::Gen(g) => Some(*g),
            CTerm::Meet(ts) | CTerm::Join(ts) => ts.iter().filter_map(|t| t.max_gen()).max(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_generator_rejected() {
        let r = Relation::leq(LatticeTerm::gen("a"), LatticeTerm::gen("b"));
        let e = Presentation::new(vec!["a".into()], vec![r]).unwrap_err();
        assert_eq!(e, Error::UnknownGenerator("b".into()));
    }

    #[test]
    fn json_round_trip() {
        let text = r#"{"generators":["g"],"relations":[{"lhs":{"gen":"g"},"rel":"eq","rhs":{"meet":[]}}]}"#;
        let p: Presentation = serde_json::from_str(text).unwrap();
        assert_eq!(p.relations()[0].rhs, LatticeTerm::top());
        assert_eq!(serde_json::to_string(&p).unwrap(), text);
        let bad = r#"{"generators":["g"],"relations":[{"lhs":{"gen":"h"},"rel":"eq","rhs":{"meet":[]}}]}"#;
        assert!(serde_json::from_str::<Presentation>(bad).is_err());
    }
}

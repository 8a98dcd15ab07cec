use std::collections::BTreeMap;
use std::fmt;

use crate::bits::Bits;
use crate::error::{Error, Result};
use crate::finspace::FinSpace;
use crate::logic::{Formula, Signature};

/// Formula schemata over metavariables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Pattern {
    Top,
    Var(String),
    And(Box<Pattern>, Box<Pattern>),
    Or(Vec<Pattern>),
    Modal(String, Vec<Pattern>),
    /// `⋁S` for a family metavariable `S`.
    Join(String),
    /// `⋁{body | bound ∈ S}`.
    JoinMap { family: String, bound: String, body: Box<Pattern> },
}

impl Pattern {
    pub fn var(v: &str) -> Pattern {
        Pattern::Var(v.to_string())
    }

    pub fn bot() -> Pattern {
        Pattern::Or(vec![])
    }

    pub fn and(a: Pattern, b: Pattern) -> Pattern {
        Pattern::And(Box::new(a), Box::new(b))
    }

    pub fn or2(a: Pattern, b: Pattern) -> Pattern {
        Pattern::Or(vec![a, b])
    }

    pub fn modal(id: &str, args: Vec<Pattern>) -> Pattern {
        Pattern::Modal(id.to_string(), args)
    }

    pub fn join(family: &str) -> Pattern {
        Pattern::Join(family.to_string())
    }

    pub fn join_map(family: &str, bound: &str, body: Pattern) -> Pattern {
        Pattern::JoinMap { family: family.to_string(), bound: bound.to_string(), body: Box::new(body) }
    }

    pub fn has_modal(&self) -> bool {
        match self {
            Pattern::Top | Pattern::Var(_) | Pattern::Join(_) => false,
            Pattern::Modal(..) => true,
            Pattern::And(a, b) => a.has_modal() || b.has_modal(),
            Pattern::Or(ps) => ps.iter().any(Pattern::has_modal),
            Pattern::JoinMap { body, .. } => body.has_modal(),
        }
    }

    /// Free formula metavariables and family metavariables.
    pub fn metavariables(&self, vars: &mut Vec<String>, families: &mut Vec<String>) {
        fn push(v: &str, out: &mut Vec<String>) {
            if !out.iter().any(|w| w == v) {
                out.push(v.to_string());
            }
        }
        fn go(p: &Pattern, bound: &[String], vars: &mut Vec<String>, families: &mut Vec<String>) {
            match p {
                Pattern::Top => {}
                Pattern::Var(v) => {
                    if !bound.contains(v) {
                        push(v, vars);
                    }
                }
                Pattern::And(a, b) => {
                    go(a, bound, vars, families);
                    go(b, bound, vars, families);
                }
                Pattern::Or(ps) | Pattern::Modal(_, ps) => ps.iter().for_each(|q| go(q, bound, vars, families)),
                Pattern::Join(f) => push(f, families),
                Pattern::JoinMap { family, bound: b, body } => {
                    push(family, families);
                    let mut inner = bound.to_vec();
                    inner.push(b.clone());
                    go(body, &inner, vars, families);
                }
            }
        }
        go(self, &[], vars, families)
    }

    /// Replace metavariables by formulas. A family metavariable must be bound
    /// to a disjunction, whose disjuncts are the members.
    pub fn instantiate(&self, s: &BTreeMap<String, Formula>) -> Result<Formula> {
        Ok(match self {
            Pattern::Top => Formula::Top,
            Pattern::Var(v) => s.get(v).cloned().ok_or_else(|| unbound(v))?,
            Pattern::And(a, b) => Formula::and(a.instantiate(s)?, b.instantiate(s)?),
            Pattern::Or(ps) => Formula::Or(ps.iter().map(|p| p.instantiate(s)).collect::<Result<_>>()?),
            Pattern::Modal(id, ps) => {
                Formula::Modal(id.clone(), ps.iter().map(|p| p.instantiate(s)).collect::<Result<_>>()?)
            }
            Pattern::Join(f) => Formula::Or(family_members(s, f)?.to_vec()),
            Pattern::JoinMap { family, bound, body } => {
                let mut parts = Vec::new();
                for m in family_members(s, family)? {
                    let mut inner = s.clone();
                    inner.insert(bound.clone(), m.clone());
                    parts.push(body.instantiate(&inner)?);
                }
                Formula::Or(parts)
            }
        })
    }

    /// Value of the pattern under an open substitution: subsets of `X` at the
    /// zero-step level, subsets of the carrier of `T X` at the one-step level.
    pub fn eval(&self, ctx: &OpenContext<'_>, s: &OpenSubst, level: Level) -> Result<Bits> {
        Ok(match self {
            Pattern::Top => match level {
                Level::Zero => ctx.space.full(),
                Level::One => Bits::full(ctx.carrier_len()?),
            },
            Pattern::Var(v) => match level {
                Level::Zero => s.vars.get(v).copied().ok_or_else(|| unbound(v))?,
                Level::One => return Err(Error::Invalid(format!("metavariable `{v}` outside a modal operator"))),
            },
            Pattern::And(a, b) => a.eval(ctx, s, level)? & b.eval(ctx, s, level)?,
            Pattern::Or(ps) => ps.iter().try_fold(Bits::EMPTY, |acc, p| Ok::<_, Error>(acc | p.eval(ctx, s, level)?))?,
            Pattern::Modal(id, ps) => match level {
                Level::Zero => return Err(Error::Invalid(format!("modal operator `{id}` inside a modal argument"))),
                Level::One => {
                    let args = ps.iter().map(|p| p.eval(ctx, s, Level::Zero)).collect::<Result<Vec<_>>>()?;
                    ctx.sig.lifting(id)?.eval(ctx.space, &args)?
                }
            },
            Pattern::Join(f) => match level {
                Level::Zero => open_members(s, f)?.iter().fold(Bits::EMPTY, |acc, &a| acc | a),
                Level::One => return Err(Error::Invalid(format!("family `{f}` outside a modal operator"))),
            },
            Pattern::JoinMap { family, bound, body } => {
                let mut acc = Bits::EMPTY;
                for &m in open_members(s, family)? {
                    let mut inner = s.clone();
                    inner.vars.insert(bound.clone(), m);
                    acc = acc | body.eval(ctx, &inner, level)?;
                }
                acc
            }
        })
    }
}

fn unbound(v: &str) -> Error {
    Error::Invalid(format!("metavariable `{v}` is not bound by the substitution"))
}

fn family_members<'a>(s: &'a BTreeMap<String, Formula>, f: &str) -> Result<&'a [Formula]> {
    match s.get(f) {
        Some(Formula::Or(ms)) => Ok(ms),
        Some(other) => Err(Error::Invalid(format!("family `{f}` must be bound to a disjunction, found {other}"))),
        None => Err(unbound(f)),
    }
}

fn open_members<'a>(s: &'a OpenSubst, f: &str) -> Result<&'a [Bits]> {
    s.families.get(f).map(Vec::as_slice).ok_or_else(|| unbound(f))
}

/// Zero-step formulas denote opens of `X`; one-step formulas denote opens of `T X`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Level {
    Zero,
    One,
}

/// Space and signature for evaluating patterns on opens.
pub struct OpenContext<'a> {
    pub space: &'a FinSpace,
    pub sig: &'a Signature,
}

impl OpenContext<'_> {
    fn carrier_len(&self) -> Result<usize> {
        Ok(self.sig.functor().carrier(self.space)?.len())
    }
}

/// Metavariables bound to opens and families bound to lists of opens.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OpenSubst {
    pub vars: BTreeMap<String, Bits>,
    pub families: BTreeMap<String, Vec<Bits>>,
}

impl OpenSubst {
    pub fn render(&self, x: &FinSpace) -> String {
        let mut parts: Vec<String> = self.vars.iter().map(|(k, &v)| format!("{k} = {}", x.render(v))).collect();
        for (k, fam) in &self.families {
            let members: Vec<String> = fam.iter().map(|&a| x.render(a)).collect();
            parts.push(format!("{k} = [{}]", members.join(", ")));
        }
        parts.join("; ")
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |f: &mut fmt::Formatter<'_>, ps: &[Pattern]| -> fmt::Result {
            for (i, p) in ps.iter().enumerate() {
                if i > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{p}")?;
            }
            Ok(())
        };
        match self {
            Pattern::Top => f.write_str("top"),
            Pattern::Var(v) => f.write_str(v),
            Pattern::And(a, b) => write!(f, "({a} & {b})"),
            Pattern::Or(ps) => {
                f.write_str("\\/[")?;
                list(f, ps)?;
                f.write_str("]")
            }
            Pattern::Modal(id, ps) => {
                write!(f, "<{id}>(")?;
                list(f, ps)?;
                f.write_str(")")
            }
            Pattern::Join(s) => write!(f, "\\/{s}"),
            Pattern::JoinMap { family, bound, body } => write!(f, "\\/{{{body} | {bound} in {family}}}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coalgfun::TopFunctor;

    #[test]
    fn instantiate_join_map() {
        let p = Pattern::join_map("A", "x", Pattern::modal("box", vec![Pattern::var("x")]));
        let s = BTreeMap::from([("A".to_string(), Formula::Or(vec![Formula::prop("p"), Formula::prop("q")]))]);
        assert_eq!(p.instantiate(&s).unwrap().to_string(), "\\/[<box>(p:p), <box>(p:q)]");
        let bad = BTreeMap::from([("A".to_string(), Formula::prop("p"))]);
        assert!(p.instantiate(&bad).is_err());
    }

    #[test]
    fn metavariables_skip_bound_names() {
        let p = Pattern::and(Pattern::var("a"), Pattern::join_map("S", "s", Pattern::and(Pattern::var("a"), Pattern::var("s"))));
        let (mut v, mut f) = (vec![], vec![]);
        p.metavariables(&mut v, &mut f);
        assert_eq!(v, vec!["a"]);
        assert_eq!(f, vec!["S"]);
    }

    #[test]
    fn levels_are_enforced() {
        let x = FinSpace::discrete_n(1);
        let sig = Signature::builtin(TopFunctor::Vietoris);
        let ctx = OpenContext { space: &x, sig: &sig };
        let s = OpenSubst { vars: BTreeMap::from([("a".into(), x.full())]), families: BTreeMap::new() };
        assert!(Pattern::var("a").eval(&ctx, &s, Level::One).is_err());
        let boxed = Pattern::modal("box", vec![Pattern::var("a")]);
        assert!(boxed.eval(&ctx, &s, Level::Zero).is_err());
        assert_eq!(boxed.eval(&ctx, &s, Level::One).unwrap(), Bits::full(2));
    }
}

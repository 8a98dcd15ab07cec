use crate::bits::Bits;
use crate::coalgfun::{all_coalgebras, all_models, GeomModel};
use crate::error::Result;
use crate::finspace::{all_topologies, FinSpace};
use crate::logic::{truth_set, Signature};

use super::pattern::{Level, OpenContext, OpenSubst, Pattern};
use super::system::{AxiomSystem, ConsequencePair, PremiseSchema, Schema};

/// `⟦lhs⟧ ⊆ ⟦rhs⟧` in `m`.
pub fn validity(pair: &ConsequencePair, m: &GeomModel, sig: &Signature) -> Result<bool> {
    Ok(truth_set(m, &pair.lhs, sig)?.is_subset(truth_set(m, &pair.rhs, sig)?))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SweepBounds {
    pub max_points: usize,
    /// Largest family size for family metavariables.
    pub max_family: usize,
}

impl Default for SweepBounds {
    fn default() -> Self {
        SweepBounds { max_points: 2, max_family: 4 }
    }
}

/// A schema instance whose premises hold and whose conclusion fails.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub schema: String,
    pub space: Vec<Vec<String>>,
    /// The transition map, or `None` when the failure is already in `T X`.
    pub gamma: Option<Vec<String>>,
    pub substitution: String,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SoundnessReport {
    pub system: String,
    pub functor: String,
    pub spaces: usize,
    pub coalgebras: usize,
    pub instances: usize,
    pub violations: Vec<Violation>,
}

impl SoundnessReport {
    pub fn sound(&self) -> bool {
        self.violations.is_empty()
    }
}

fn substitutions(schema: &Schema, opens: &[Bits], max_family: usize) -> Vec<OpenSubst> {
    let (vars, fams) = schema.metavariables();
    let families: Vec<Vec<Bits>> = (0u64..1 << opens.len())
        .map(|m| Bits::from_u64(m).iter().map(|i| opens[i]).collect::<Vec<_>>())
        .filter(|f| f.len() <= max_family)
        .collect();
    let mut out = vec![OpenSubst::default()];
    for v in vars {
        out = out
            .into_iter()
            .flat_map(|s| {
                let v = v.clone();
                opens.iter().map(move |&o| {
                    let mut t = s.clone();
                    t.vars.insert(v.clone(), o);
                    t
                })
            })
            .collect();
    }
    for f in fams {
        out = out
            .into_iter()
            .flat_map(|s| {
                let f = f.clone();
                families.iter().map(move |fam| {
                    let mut t = s.clone();
                    t.families.insert(f.clone(), fam.clone());
                    t
                })
            })
            .collect();
    }
    out.into_iter().filter(|s| schema.check_open_side(s).is_ok()).collect()
}

fn premises_hold(schema: &Schema, ctx: &OpenContext<'_>, s: &OpenSubst) -> Result<bool> {
    let holds = |l: &Pattern, r: &Pattern, s: &OpenSubst| -> Result<bool> {
        let level = if l.has_modal() || r.has_modal() { Level::One } else { Level::Zero };
        Ok(l.eval(ctx, s, level)?.is_subset(r.eval(ctx, s, level)?))
    };
    for p in &schema.premises {
        match p {
            PremiseSchema::Single(l, r) => {
                if !holds(l, r, s)? {
                    return Ok(false);
                }
            }
            PremiseSchema::ForEach { family, bound, lhs, rhs } => {
                for &m in s.families.get(family).map(Vec::as_slice).unwrap_or_default() {
                    let mut inner = s.clone();
                    inner.vars.insert(bound.clone(), m);
                    if !holds(lhs, rhs, &inner)? {
                        return Ok(false);
                    }
                }
            }
        }
    }
    Ok(true)
}

/// Check every schema of `system` on every space with at most
/// `bounds.max_points` points: for each open substitution whose premises
/// hold, the conclusion must hold in `T X` and after pulling back along
/// every transition map.
pub fn soundness_sweep(system: &AxiomSystem, sig: &Signature, bounds: SweepBounds) -> Result<SoundnessReport> {
    for id in system.lifting_ids() {
        sig.lifting(&id)?;
    }
    let mut report =
        SoundnessReport { system: system.name.clone(), functor: sig.functor().to_string(), ..Default::default() };
    for n in 0..=bounds.max_points {
        for x in all_topologies(n) {
            report.spaces += 1;
            let coalgebras = all_coalgebras(&x, sig.functor())?;
            report.coalgebras += coalgebras.len();
            let opens = x.opens();
            let ctx = OpenContext { space: &x, sig };
            for schema in &system.schemata {
                let (l, r) = &schema.conclusion;
                let level = if l.has_modal() || r.has_modal() { Level::One } else { Level::Zero };
                for s in substitutions(schema, &opens, bounds.max_family) {
                    report.instances += 1;
                    if !premises_hold(schema, &ctx, &s)? {
                        continue;
                    }
                    let (lv, rv) = (l.eval(&ctx, &s, level)?, r.eval(&ctx, &s, level)?);
                    let violation = |gamma: Option<Vec<String>>, a: String, b: String| Violation {
                        schema: schema.name.clone(),
                        space: render_space(&x),
                        gamma,
                        substitution: s.render(&x),
                        lhs: a,
                        rhs: b,
                    };
                    let carrier = sig.functor().carrier(&x)?;
                    let render_up = |v: Bits| match level {
                        Level::Zero => x.render(v),
                        Level::One => carrier.space.render(v),
                    };
                    if !lv.is_subset(rv) {
                        report.violations.push(violation(None, render_up(lv), render_up(rv)));
                        continue;
                    }
                    if level == Level::One {
                        for c in &coalgebras {
                            let (pl, pr) = (c.pullback(lv), c.pullback(rv));
                            if !pl.is_subset(pr) {
                                let gamma = c.gamma().iter().map(|&g| carrier.space.name(g).to_string()).collect();
                                report.violations.push(violation(Some(gamma), x.render(pl), x.render(pr)));
                                break;
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(report)
}

fn render_space(x: &FinSpace) -> Vec<Vec<String>> {
    x.opens().into_iter().map(|o| x.names_of(o)).collect()
}

/// A model on at most `max_points` points where `pair` fails, if any.
pub fn find_countermodel(pair: &ConsequencePair, sig: &Signature, max_points: usize) -> Result<Option<GeomModel>> {
    let mut letters = pair.lhs.props();
    for p in pair.rhs.props() {
        if !letters.contains(&p) {
            letters.push(p);
        }
    }
    let letters: Vec<&str> = letters.iter().map(String::as_str).collect();
    for n in 0..=max_points {
        for x in all_topologies(n) {
            for m in all_models(&x, sig.functor(), &letters)? {
                if !validity(pair, &m, sig)? {
                    return Ok(Some(m));
                }
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coalgfun::TopFunctor;
    use crate::logic::Formula;
    use crate::proofsys::axiom_system;

    #[test]
    fn monotone_system_is_sound_on_dkh() {
        let r = soundness_sweep(&axiom_system("monotone").unwrap(), &Signature::builtin(TopFunctor::Dkh), SweepBounds::default())
            .unwrap();
        assert!(r.sound(), "{:?}", r.violations.first());
        assert!(r.instances > 0 && r.coalgebras > 0);
    }

    #[test]
    fn positive_system_is_sound_on_vietoris() {
        let r = soundness_sweep(
            &axiom_system("positive-vietoris").unwrap(),
            &Signature::builtin(TopFunctor::Vietoris),
            SweepBounds::default(),
        )
        .unwrap();
        assert!(r.sound(), "{:?}", r.violations.first());
    }

    #[test]
    fn dropping_the_premise_of_m2_is_unsound() {
        let sys = axiom_system("monotone").unwrap();
        let m2 = sys.schema("m2").unwrap().clone();
        let broken = Schema { premises: vec![], ..m2 };
        let r = soundness_sweep(&sys.replaced(broken), &Signature::builtin(TopFunctor::Dkh), SweepBounds::default()).unwrap();
        assert!(!r.sound());
        assert!(r.violations.iter().all(|v| v.schema == "m2"));
    }

    #[test]
    fn validity_examples() {
        let sig = Signature::builtin(TopFunctor::Vietoris);
        let m = crate::fixtures::vietoris_two_point();
        let f = |t: &str| Formula::parse(t, &sig).unwrap();
        assert!(validity(&ConsequencePair::new(f("p:p"), f("top")), &m, &sig).unwrap());
        assert!(!validity(&ConsequencePair::new(f("<dia>(p:p)"), f("<box>(p:p)")), &m, &sig).unwrap());
        let cm = find_countermodel(&ConsequencePair::new(f("<dia>(p:p)"), f("<box>(p:p)")), &sig, 2).unwrap();
        assert!(cm.is_some());
        assert!(find_countermodel(&ConsequencePair::new(f("(p:p & p:q)"), f("p:q")), &sig, 2).unwrap().is_none());
    }
}

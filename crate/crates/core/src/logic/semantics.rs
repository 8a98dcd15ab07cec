use std::collections::BTreeMap;
use std::sync::OnceLock;

use crate::bits::Bits;
use crate::coalgfun::{GeomModel, TopFunctor};
use crate::error::{Error, Result};
use crate::finspace::{all_topologies, continuous_maps, FinSpace};
use crate::liftings::{
    builtin_liftings, check_characteristic, check_monotone, check_scott, strong_extension, OpenLifting,
};

use super::formula::Formula;

/// A functor together with the open liftings that interpret modal operators.
#[derive(Clone, Debug)]
pub struct Signature {
    functor: TopFunctor,
    liftings: Vec<OpenLifting>,
    flags: OnceLock<BTreeMap<String, LiftingFlags>>,
    characteristic: OnceLock<bool>,
}

/// Properties of a lifting. Monotonicity and Scott continuity are checked on
/// every space with at most two points; strength (the extension to all
/// subsets is monotone and natural) on discrete spaces with at most two points.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct LiftingFlags {
    pub monotone: bool,
    pub scott: bool,
    pub strong: bool,
}

impl Signature {
    pub fn new(functor: TopFunctor, liftings: Vec<OpenLifting>) -> Result<Signature> {
        for l in &liftings {
            if *l.functor() != functor {
                return Err(Error::FunctorMismatch(functor.to_string(), l.functor().to_string()));
            }
        }
        for (i, l) in liftings.iter().enumerate() {
            if liftings[..i].iter().any(|m| m.id() == l.id()) {
                return Err(Error::Invalid(format!("lifting `{}` registered twice", l.id())));
            }
        }
        Ok(Signature { functor, liftings, flags: OnceLock::new(), characteristic: OnceLock::new() })
    }

    /// All builtin liftings of `functor`.
    pub fn builtin(functor: TopFunctor) -> Signature {
        let liftings = builtin_liftings(&functor);
        Signature { functor, liftings, flags: OnceLock::new(), characteristic: OnceLock::new() }
    }

    /// The builtin liftings of `functor` named in `ids`.
    pub fn select(functor: TopFunctor, ids: &[&str]) -> Result<Signature> {
        let all = builtin_liftings(&functor);
        let picked = ids
            .iter()
            .map(|id| all.iter().find(|l| l.id() == *id).cloned().ok_or_else(|| Error::UnknownLifting(id.to_string())))
            .collect::<Result<Vec<_>>>()?;
        Signature::new(functor, picked)
    }

    pub fn functor(&self) -> &TopFunctor {
        &self.functor
    }

    pub fn liftings(&self) -> &[OpenLifting] {
        &self.liftings
    }

    pub fn ids(&self) -> Vec<&str> {
        self.liftings.iter().map(|l| l.id()).collect()
    }

    pub fn lifting(&self, id: &str) -> Result<&OpenLifting> {
        self.liftings.iter().find(|l| l.id() == id).ok_or_else(|| Error::UnknownLifting(id.to_string()))
    }

    pub fn flags(&self) -> Result<&BTreeMap<String, LiftingFlags>> {
        if let Some(f) = self.flags.get() {
            return Ok(f);
        }
        let spaces: Vec<FinSpace> = (0..=2).flat_map(all_topologies).collect();
        let discrete: Vec<FinSpace> = (0..=2).map(FinSpace::discrete_n).collect();
        let mut out = BTreeMap::new();
        for l in &self.liftings {
            let mut flags = LiftingFlags { monotone: true, scott: true, strong: true };
            for x in &spaces {
                flags.monotone &= check_monotone(l, x)?;
                flags.scott &= check_scott(l, x)?;
            }
            let ext = strong_extension(l);
            for x in &discrete {
                flags.strong &= ext.is_monotone_on(x)?;
                for y in &discrete {
                    for f in continuous_maps(x, y) {
                        flags.strong &= ext.check_naturality(&f)?;
                    }
                }
            }
            out.insert(l.id().to_string(), flags);
        }
        Ok(self.flags.get_or_init(|| out))
    }

    /// Do the lifted opens generate the carrier topology, on every discrete
    /// space with one to three points?
    pub fn is_characteristic(&self) -> Result<bool> {
        if let Some(&c) = self.characteristic.get() {
            return Ok(c);
        }
        let mut ok = true;
        for n in 1..=3 {
            ok &= check_characteristic(&self.functor, &self.liftings, &FinSpace::discrete_n(n))?;
        }
        Ok(*self.characteristic.get_or_init(|| ok))
    }

    pub fn all_strong(&self) -> Result<bool> {
        Ok(self.flags()?.values().all(|f| f.strong))
    }

    pub fn is_scott(&self, id: &str) -> Result<bool> {
        self.lifting(id)?;
        Ok(self.flags()?[id].scott)
    }

    pub fn all_scott(&self) -> Result<bool> {
        Ok(self.flags()?.values().all(|f| f.scott))
    }

    pub fn all_monotone(&self) -> Result<bool> {
        Ok(self.flags()?.values().all(|f| f.monotone))
    }

    fn check_model(&self, m: &GeomModel) -> Result<()> {
        if *m.functor() != self.functor {
            return Err(Error::FunctorMismatch(self.functor.to_string(), m.functor().to_string()));
        }
        Ok(())
    }
}

/// `⟦φ⟧` in `m`; every modal operator must be registered in `sig`.
pub fn truth_set(m: &GeomModel, phi: &Formula, sig: &Signature) -> Result<Bits> {
    sig.check_model(m)?;
    phi.check(sig)?;
    let out = eval(m, phi, sig)?;
    if !m.space().is_open(out) {
        return Err(Error::Invariant(format!("truth set of {phi} is not open")));
    }
    Ok(out)
}

fn eval(m: &GeomModel, phi: &Formula, sig: &Signature) -> Result<Bits> {
    match phi {
        Formula::Top => Ok(m.space().full()),
        Formula::Prop(p) => m.prop(p),
        Formula::And(a, b) => Ok(eval(m, a, sig)? & eval(m, b, sig)?),
        Formula::Or(fs) => fs.iter().try_fold(Bits::EMPTY, |acc, f| Ok(acc | eval(m, f, sig)?)),
        Formula::Modal(id, fs) => {
            let args = fs.iter().map(|f| eval(m, f, sig)).collect::<Result<Vec<_>>>()?;
            let lifted = sig.lifting(id)?.eval(m.space(), &args)?;
            Ok(m.coalgebra.pullback(lifted))
        }
    }
}

/// Points of `m` satisfying `phi`, by name.
pub fn satisfying_points(m: &GeomModel, phi: &Formula, sig: &Signature) -> Result<Vec<String>> {
    Ok(m.space().names_of(truth_set(m, phi, sig)?))
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    pub(crate) fn vietoris_example() -> GeomModel {
        crate::fixtures::vietoris_two_point()
    }

    #[test]
    fn box_and_dia_on_the_example() {
        let m = vietoris_example();
        let sig = Signature::builtin(TopFunctor::Vietoris);
        let f = |t: &str| satisfying_points(&m, &Formula::parse(t, &sig).unwrap(), &sig).unwrap();
        assert_eq!(f("<box>(p:p)"), vec!["y"]);
        assert_eq!(f("<dia>(p:p)"), vec!["x"]);
        assert_eq!(f("top"), vec!["x", "y"]);
        assert!(f("bot").is_empty());
    }

    #[test]
    fn unknown_letter_is_an_error() {
        let m = vietoris_example();
        let sig = Signature::builtin(TopFunctor::Vietoris);
        assert!(matches!(truth_set(&m, &Formula::prop("q"), &sig), Err(Error::UnknownProposition(_))));
    }

    #[test]
    fn functor_must_match() {
        let m = vietoris_example();
        let sig = Signature::builtin(TopFunctor::Dkh);
        assert!(matches!(truth_set(&m, &Formula::Top, &sig), Err(Error::FunctorMismatch(..))));
    }

    #[test]
    fn builtin_flags() {
        for t in [TopFunctor::Vietoris, TopFunctor::Dkh, TopFunctor::Trivial] {
            let sig = Signature::builtin(t);
            assert!(sig.all_scott().unwrap());
            assert!(sig.all_monotone().unwrap());
            assert!(sig.all_strong().unwrap());
            assert!(sig.is_characteristic().unwrap());
        }
        let only_box = Signature::select(TopFunctor::Vietoris, &["box"]).unwrap();
        assert!(!only_box.is_characteristic().unwrap());
    }
}

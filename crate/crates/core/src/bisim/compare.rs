use rand::Rng;

use crate::bits::Bits;
use crate::coalgfun::{GeomModel, TopFunctor};
use crate::error::Result;
use crate::finspace::{all_topologies, FinSpace};
use crate::logic::{joint_definable_opens, theory_quotient, QuotientFailure, Signature};

use super::am::{search_am_transition, AmBounds, AmOutcome};
use super::lambda::{greatest_lambda_bisim, greatest_lambda_bisim_within, is_lambda_bisim};
use super::relation::Relation;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BehaviouralVerdict {
    /// Identified by the theory maps into the quotient.
    Equivalent,
    /// Some formula separates the points, so no pair of morphisms can identify them.
    Inequivalent,
    /// Modally equivalent, but the quotient carries no transition.
    Indeterminate(QuotientFailure),
}

/// Behavioural equivalence of `x` in `m` and `y` in `m2`.
pub fn behavioural_equiv(m: &GeomModel, x: usize, m2: &GeomModel, y: usize, sig: &Signature) -> Result<BehaviouralVerdict> {
    let q = theory_quotient(&[m, m2], sig)?;
    if q.class_of(0, x) != q.class_of(1, y) {
        return Ok(BehaviouralVerdict::Inequivalent);
    }
    Ok(match q.failure {
        None => BehaviouralVerdict::Equivalent,
        Some(f) => BehaviouralVerdict::Indeterminate(f),
    })
}

/// Modal equivalence between the points of two models.
pub fn modal_equiv_relation(m: &GeomModel, m2: &GeomModel, sig: &Signature) -> Result<Relation> {
    let d = joint_definable_opens(&[m, m2], sig)?;
    let mut r = Relation::empty(m.space().len(), m2.space().len());
    for x in 0..m.space().len() {
        let p = d.profile(d.global(0, x));
        for y in 0..m2.space().len() {
            if d.profile(d.global(1, y)) == p {
                r.insert(x, y);
            }
        }
    }
    Ok(r)
}

/// The hypotheses under which the equivalences are expected to coincide.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct EquivalenceFlags {
    pub monotone: bool,
    pub scott: bool,
    pub strong: bool,
    pub characteristic: bool,
    /// The functor sends every tested space to a T0 (on finite spaces,
    /// sober) space. Without it modal equivalence need not give a cospan.
    pub sober: bool,
}

impl EquivalenceFlags {
    pub fn of(sig: &Signature) -> Result<EquivalenceFlags> {
        Ok(EquivalenceFlags {
            monotone: sig.all_monotone()?,
            scott: sig.all_scott()?,
            strong: sig.all_strong()?,
            characteristic: sig.is_characteristic()?,
            sober: preserves_t0(sig.functor())?,
        })
    }

    pub fn all(&self) -> bool {
        self.monotone && self.scott && self.strong && self.characteristic && self.sober
    }
}

/// Is `T X` T0 for every topology on at most two points and for the
/// discrete three-point space? Spaces beyond the carrier bounds are skipped.
fn preserves_t0(functor: &TopFunctor) -> Result<bool> {
    let spaces = (0..=2).flat_map(all_topologies).chain(std::iter::once(FinSpace::discrete_n(3)));
    for x in spaces {
        match functor.carrier(&x) {
            Ok(c) if !c.space.is_t0() => return Ok(false),
            Ok(_) => {}
            Err(e) if e.is_resource() => {}
            Err(e) => return Err(e),
        }
    }
    Ok(true)
}

#[derive(Clone, Debug)]
pub struct EquivalenceReport {
    pub flags: EquivalenceFlags,
    pub lambda: Relation,
    pub modal: Relation,
    /// Equal to `modal` when the quotient carries a transition.
    pub behavioural: Option<Relation>,
    pub quotient_failure: Option<QuotientFailure>,
    /// Set when the quotient is too large for the functor's carrier bounds,
    /// in which case `behavioural` is unknown.
    pub quotient_bound: Option<String>,
    /// Relations given to the transition search, with their outcomes.
    pub am: Vec<(Relation, AmOutcome)>,
    /// Union of the relations for which a transition was found.
    pub am_union: Relation,
    pub lambda_in_modal: bool,
    /// Every relation with a transition is a Λ-bisimulation, and so their
    /// union lies inside `lambda`.
    pub am_in_lambda: bool,
    pub coincides: bool,
}

impl EquivalenceReport {
    pub fn coincidence_expected(&self) -> bool {
        self.flags.all()
    }

    /// The inclusions that hold unconditionally, plus coincidence when the
    /// hypotheses are met.
    pub fn ok(&self) -> bool {
        self.lambda_in_modal
            && (!self.flags.monotone || self.am_in_lambda)
            && (!self.coincidence_expected() || self.quotient_bound.is_some() || self.coincides)
    }
}

/// Compute `↔_Λ`, modal and behavioural equivalence between `m` and `m2`,
/// and run the transition search on `↔_Λ` and on the largest
/// Λ-bisimulations inside `samples` random sub-relations of it.
pub fn compare_equivalences<R: Rng>(
    m: &GeomModel,
    m2: &GeomModel,
    sig: &Signature,
    samples: usize,
    rng: &mut R,
) -> Result<EquivalenceReport> {
    let flags = EquivalenceFlags::of(sig)?;
    let lambda = greatest_lambda_bisim(m, m2, sig)?;
    let modal = modal_equiv_relation(m, m2, sig)?;
    let (quotient_failure, quotient_bound) = match theory_quotient(&[m, m2], sig) {
        Ok(q) => (q.failure, None),
        Err(e) if e.is_resource() => (None, Some(e.to_string())),
        Err(e) => return Err(e),
    };
    let behavioural = (quotient_bound.is_none() && quotient_failure.is_none()).then(|| modal.clone());

    let mut candidates = vec![lambda.clone()];
    for _ in 0..samples {
        let mut s = Relation::empty(lambda.left_len(), lambda.right_len());
        for (x, y) in lambda.pairs() {
            if rng.gen_bool(0.5) {
                s.insert(x, y);
            }
        }
        let b = greatest_lambda_bisim_within(&s, m, m2, sig)?;
        if !candidates.contains(&b) {
            candidates.push(b);
        }
    }
    let mut am = Vec::new();
    let mut am_in_lambda = true;
    let mut am_union = Relation::empty(lambda.left_len(), lambda.right_len());
    for b in candidates {
        let out = search_am_transition(&b, m, m2, AmBounds::default())?;
        if out.is_found() {
            am_in_lambda &= is_lambda_bisim(&b, m, m2, sig)?.is_none();
            am_union = am_union.union(&b);
        }
        am.push((b, out));
    }
    am_in_lambda &= am_union.is_subset(&lambda);
    let coincides = lambda == modal && behavioural.as_ref() == Some(&modal);
    Ok(EquivalenceReport {
        flags,
        lambda_in_modal: lambda.is_subset(&modal),
        lambda,
        modal,
        behavioural,
        quotient_failure,
        quotient_bound,
        am,
        am_union,
        am_in_lambda,
        coincides,
    })
}

/// Relations between the two models given as row masks, for tests and fixtures.
pub fn relation_from_rows(right: usize, rows: &[u64]) -> Relation {
    let mut r = Relation::empty(rows.len(), right);
    for (x, &row) in rows.iter().enumerate() {
        for y in Bits::from_u64(row).iter() {
            r.insert(x, y);
        }
    }
    r
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::fixtures::vietoris_two_point;

    #[test]
    fn example_against_itself() {
        let m = vietoris_two_point();
        let sig = Signature::builtin(TopFunctor::Vietoris);
        let r = compare_equivalences(&m, &m, &sig, 8, &mut ChaCha8Rng::seed_from_u64(1)).unwrap();
        assert!(r.coincidence_expected());
        assert!(r.ok(), "{r:?}");
        assert_eq!(r.lambda, Relation::identity(2));
        assert!(r.am.iter().all(|(_, o)| o.is_found()));
    }

    #[test]
    fn verdicts() {
        let m = vietoris_two_point();
        let sig = Signature::builtin(TopFunctor::Vietoris);
        assert_eq!(behavioural_equiv(&m, 0, &m, 0, &sig).unwrap(), BehaviouralVerdict::Equivalent);
        assert_eq!(behavioural_equiv(&m, 0, &m, 1, &sig).unwrap(), BehaviouralVerdict::Inequivalent);
    }

    #[test]
    fn trivial_functor_is_not_sober() {
        let flags = EquivalenceFlags::of(&Signature::builtin(TopFunctor::Trivial)).unwrap();
        assert!(flags.monotone && flags.characteristic && !flags.sober);
        assert!(EquivalenceFlags::of(&Signature::builtin(TopFunctor::Dkh)).unwrap().all());
    }

    #[test]
    fn rows_build_relations() {
        let r = relation_from_rows(3, &[0b101, 0]);
        assert_eq!(r.pairs(), vec![(0, 0), (0, 2)]);
    }
}

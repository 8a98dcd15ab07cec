use std::collections::{BTreeSet, HashMap};

use crate::bits::Bits;
use crate::coalgfun::GeomModel;
use crate::error::{Error, Result};
use crate::logic::Signature;

use super::relation::{coherent_pairs, Relation};

/// Largest number of coherent tuples examined for one lifting.
pub const MAX_COHERENT_TUPLES: usize = 1 << 18;

/// Why a relation is not a Λ-bisimulation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BisimCounterexample {
    Letter { left: usize, right: usize, letter: String },
    Modal { left: usize, right: usize, lifting: String, args: Vec<(Bits, Bits)> },
}

impl BisimCounterexample {
    pub fn describe(&self, m: &GeomModel, m2: &GeomModel) -> String {
        match self {
            BisimCounterexample::Letter { left, right, letter } => format!(
                "({}, {}) disagree on `{letter}`",
                m.space().name(*left),
                m2.space().name(*right)
            ),
            BisimCounterexample::Modal { left, right, lifting, args } => {
                let args: Vec<String> =
                    args.iter().map(|&(a, b)| format!("({}, {})", m.space().render(a), m2.space().render(b))).collect();
                format!(
                    "({}, {}) disagree on `{lifting}` at the coherent pairs {}",
                    m.space().name(*left),
                    m2.space().name(*right),
                    args.join(", ")
                )
            }
        }
    }
}

fn letters(m: &GeomModel, m2: &GeomModel) -> Result<Vec<(String, Bits, Bits)>> {
    let names: BTreeSet<&String> = m.valuation().keys().chain(m2.valuation().keys()).collect();
    names.into_iter().map(|p| Ok((p.clone(), m.prop(p)?, m2.prop(p)?))).collect()
}

fn check_models(m: &GeomModel, m2: &GeomModel, sig: &Signature) -> Result<()> {
    for x in [m, m2] {
        if x.functor() != sig.functor() {
            return Err(Error::FunctorMismatch(sig.functor().to_string(), x.functor().to_string()));
        }
    }
    Ok(())
}

/// Lifting id, `γ⁻¹ λ(a⃗)`, `γ'⁻¹ λ(a⃗')` and the coherent pairs used.
type ModalTest = (String, Bits, Bits, Vec<(Bits, Bits)>);

/// One test for every tuple of coherent pairs.
fn modal_tests(b: &Relation, m: &GeomModel, m2: &GeomModel, sig: &Signature) -> Result<Vec<ModalTest>> {
    let pairs = coherent_pairs(b, m.space(), m2.space())?;
    let mut out = Vec::new();
    for l in sig.liftings() {
        let n = l.arity();
        let count = pairs.len().checked_pow(n as u32).unwrap_or(usize::MAX);
        if count > MAX_COHERENT_TUPLES {
            return Err(Error::resource("coherent tuples", MAX_COHERENT_TUPLES));
        }
        let mut left_cache: HashMap<Vec<Bits>, Bits> = HashMap::new();
        let mut right_cache: HashMap<Vec<Bits>, Bits> = HashMap::new();
        let mut idx = vec![0usize; n];
        if n > 0 && pairs.is_empty() {
            continue;
        }
        loop {
            let tuple: Vec<(Bits, Bits)> = idx.iter().map(|&i| pairs[i]).collect();
            let la: Vec<Bits> = tuple.iter().map(|p| p.0).collect();
            let ra: Vec<Bits> = tuple.iter().map(|p| p.1).collect();
            let lv = match left_cache.get(&la) {
                Some(&v) => v,
                None => {
                    let v = m.coalgebra.pullback(l.eval(m.space(), &la)?);
                    left_cache.insert(la, v);
                    v
                }
            };
            let rv = match right_cache.get(&ra) {
                Some(&v) => v,
                None => {
                    let v = m2.coalgebra.pullback(l.eval(m2.space(), &ra)?);
                    right_cache.insert(ra, v);
                    v
                }
            };
            out.push((l.id().to_string(), lv, rv, tuple));
            let mut pos = 0;
            while pos < n {
                idx[pos] += 1;
                if idx[pos] < pairs.len() {
                    break;
                }
                idx[pos] = 0;
                pos += 1;
            }
            if pos == n {
                break;
            }
        }
    }
    Ok(out)
}

/// Is `b` a Λ-bisimulation between `m` and `m2`? Returns the first failure.
pub fn is_lambda_bisim(b: &Relation, m: &GeomModel, m2: &GeomModel, sig: &Signature) -> Result<Option<BisimCounterexample>> {
    check_models(m, m2, sig)?;
    check_shape(b, m, m2)?;
    let letters = letters(m, m2)?;
    for (x, y) in b.pairs() {
        for (p, v, v2) in &letters {
            if v.contains(x) != v2.contains(y) {
                return Ok(Some(BisimCounterexample::Letter { left: x, right: y, letter: p.clone() }));
            }
        }
    }
    for (id, lv, rv, args) in modal_tests(b, m, m2, sig)? {
        for (x, y) in b.pairs() {
            if lv.contains(x) != rv.contains(y) {
                return Ok(Some(BisimCounterexample::Modal { left: x, right: y, lifting: id, args }));
            }
        }
    }
    Ok(None)
}

fn check_shape(b: &Relation, m: &GeomModel, m2: &GeomModel) -> Result<()> {
    if b.left_len() != m.space().len() || b.right_len() != m2.space().len() {
        return Err(Error::Invalid("relation does not fit the two models".into()));
    }
    Ok(())
}

/// Pairs of points satisfying the same letters.
pub fn letter_agreement(m: &GeomModel, m2: &GeomModel) -> Result<Relation> {
    let letters = letters(m, m2)?;
    let mut r = Relation::empty(m.space().len(), m2.space().len());
    for x in 0..m.space().len() {
        for y in 0..m2.space().len() {
            if letters.iter().all(|(_, v, v2)| v.contains(x) == v2.contains(y)) {
                r.insert(x, y);
            }
        }
    }
    Ok(r)
}

/// The largest Λ-bisimulation contained in `start`: repeatedly drop pairs
/// that fail a biconditional for the coherent pairs of the current relation.
pub fn greatest_lambda_bisim_within(start: &Relation, m: &GeomModel, m2: &GeomModel, sig: &Signature) -> Result<Relation> {
    check_models(m, m2, sig)?;
    check_shape(start, m, m2)?;
    let mut b = start.intersection(&letter_agreement(m, m2)?);
    loop {
        let tests = modal_tests(&b, m, m2, sig)?;
        let mut next = b.clone();
        for (x, y) in b.pairs() {
            if tests.iter().any(|(_, lv, rv, _)| lv.contains(x) != rv.contains(y)) {
                next.remove(x, y);
            }
        }
        if next == b {
            break;
        }
        b = next;
    }
    if let Some(c) = is_lambda_bisim(&b, m, m2, sig)? {
        return Err(Error::Invariant(format!("fixpoint is not a bisimulation: {}", c.describe(m, m2))));
    }
    Ok(b)
}

/// `↔_Λ`, the greatest Λ-bisimulation.
pub fn greatest_lambda_bisim(m: &GeomModel, m2: &GeomModel, sig: &Signature) -> Result<Relation> {
    greatest_lambda_bisim_within(&Relation::full(m.space().len(), m2.space().len()), m, m2, sig)
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;

    use super::*;
    use crate::coalgfun::{Coalgebra, TopFunctor};
    use crate::finspace::FinSpace;
    use crate::fixtures::vietoris_two_point;

    fn sig() -> Signature {
        Signature::builtin(TopFunctor::Vietoris)
    }

    #[test]
    fn trivial_relations() {
        let m = vietoris_two_point();
        assert!(is_lambda_bisim(&Relation::empty(2, 2), &m, &m, &sig()).unwrap().is_none());
        assert!(is_lambda_bisim(&Relation::identity(2), &m, &m, &sig()).unwrap().is_none());
    }

    #[test]
    fn letter_mismatch_is_reported() {
        let m = vietoris_two_point();
        let b = Relation::from_pairs(2, 2, &[(0, 1)]).unwrap();
        let c = is_lambda_bisim(&b, &m, &m, &sig()).unwrap().unwrap();
        assert_eq!(c, BisimCounterexample::Letter { left: 0, right: 1, letter: "p".into() });
    }

    #[test]
    fn gfp_on_the_example_is_the_identity() {
        let m = vietoris_two_point();
        assert_eq!(greatest_lambda_bisim(&m, &m, &sig()).unwrap(), Relation::identity(2));
    }

    #[test]
    fn disjoint_valuations_give_nothing() {
        let x = FinSpace::discrete_n(1);
        let c = Coalgebra::from_codes(x.clone(), TopFunctor::Vietoris, &[1]).unwrap();
        let a = GeomModel::new(c.clone(), BTreeMap::from([("p".to_string(), x.full())])).unwrap();
        let b = GeomModel::new(c, BTreeMap::from([("p".to_string(), Bits::EMPTY)])).unwrap();
        assert!(greatest_lambda_bisim(&a, &b, &sig()).unwrap().is_empty());
    }

    #[test]
    fn mirror_pairs_in_a_copy() {
        // two states looping on each other; the swap is a bisimulation
        let x = FinSpace::discrete_n(2);
        let c = Coalgebra::from_codes(x, TopFunctor::Vietoris, &[0b10, 0b01]).unwrap();
        let m = GeomModel::new(c, BTreeMap::new()).unwrap();
        let g = greatest_lambda_bisim(&m, &m, &sig()).unwrap();
        assert!(g.contains(0, 0) && g.contains(1, 1));
        assert_eq!(g, Relation::full(2, 2));
    }
}

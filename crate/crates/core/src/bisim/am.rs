//! Relations carrying a transition structure of their own: `B` as a subspace
//! of `X × X'` together with a continuous `β : B → T B` making both
//! projections coalgebra morphisms.

use std::sync::Arc;

use crate::bits::Bits;
use crate::coalgfun::{Carrier, GeomModel};
use crate::error::{Error, Result};
use crate::finspace::{ContMap, FinSpace};

use super::lambda::letter_agreement;
use super::relation::Relation;

/// `B` with its projections.
#[derive(Clone, Debug)]
pub struct RelationSpace {
    pub space: FinSpace,
    pub pairs: Vec<(usize, usize)>,
    pub left: ContMap,
    pub right: ContMap,
}

pub fn relation_space(b: &Relation, x: &FinSpace, y: &FinSpace) -> Result<RelationSpace> {
    let prod = x.product(y);
    let m = y.len();
    let keep: Bits = b.pairs().iter().map(|&(a, c)| a * m + c).collect();
    let (space, incl) = prod.subspace(keep);
    let pairs: Vec<(usize, usize)> = incl.iter().map(|&i| (i / m, i % m)).collect();
    let left = ContMap::continuous(space.clone(), x.clone(), pairs.iter().map(|p| p.0).collect())?;
    let right = ContMap::continuous(space.clone(), y.clone(), pairs.iter().map(|p| p.1).collect())?;
    Ok(RelationSpace { space, pairs, left, right })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AmOutcome {
    /// A witnessing `β`, as carrier positions of `T B`.
    Found(Vec<usize>),
    Absent,
    BoundHit(String),
}

impl AmOutcome {
    pub fn is_found(&self) -> bool {
        matches!(self, AmOutcome::Found(_))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AmBounds {
    /// Search nodes before giving up.
    pub max_nodes: usize,
}

impl Default for AmBounds {
    fn default() -> Self {
        AmBounds { max_nodes: 1 << 20 }
    }
}

/// For each pair `(x, x')` of `B`, the carrier positions `w` of `T B` with
/// `T π(w) = γ(x)` and `T π'(w) = γ'(x')`. Elements whose image leaves the
/// carrier are never candidates. Building the carrier of `T B` is where
/// the size bounds of the functor apply.
fn candidates(rs: &RelationSpace, m: &GeomModel, m2: &GeomModel) -> Result<(Arc<Carrier>, Vec<Vec<usize>>)> {
    let functor = m.functor();
    let carrier = functor.carrier(&rs.space)?;
    let mut images = Vec::with_capacity(carrier.len());
    for w in 0..carrier.len() {
        let l = functor.map_point(&rs.left, w);
        let r = functor.map_point(&rs.right, w);
        images.push(match (l, r) {
            (Ok(l), Ok(r)) => Some((l, r)),
            (Err(Error::NotInCarrier(_)), _) | (_, Err(Error::NotInCarrier(_))) => None,
            (Err(e), _) | (_, Err(e)) => return Err(e),
        });
    }
    let cands = rs
        .pairs
        .iter()
        .map(|&(x, y)| {
            let want = (m.coalgebra.gamma()[x], m2.coalgebra.gamma()[y]);
            (0..carrier.len()).filter(|&w| images[w] == Some(want)).collect()
        })
        .collect();
    Ok((carrier, cands))
}

/// Does `beta` make `B` an Aczel–Mendler bisimulation between `m` and `m2`?
pub fn is_am_bisim(b: &Relation, beta: &[usize], m: &GeomModel, m2: &GeomModel) -> Result<bool> {
    if m.functor() != m2.functor() {
        return Err(Error::FunctorMismatch(m.functor().to_string(), m2.functor().to_string()));
    }
    if !b.is_subset(&letter_agreement(m, m2)?) {
        return Ok(false);
    }
    let rs = relation_space(b, m.space(), m2.space())?;
    if beta.len() != rs.pairs.len() {
        return Err(Error::Invalid(format!("transition has {} entries for {} pairs", beta.len(), rs.pairs.len())));
    }
    let functor = m.functor();
    let carrier = functor.carrier(&rs.space)?;
    if beta.iter().any(|&w| w >= carrier.len()) {
        return Ok(false);
    }
    let beta_map = ContMap::new(rs.space.clone(), carrier.space.clone(), beta.to_vec())?;
    if !beta_map.is_continuous() {
        return Ok(false);
    }
    for (i, &(x, y)) in rs.pairs.iter().enumerate() {
        let l = functor.map_point(&rs.left, beta[i]);
        let r = functor.map_point(&rs.right, beta[i]);
        match (l, r) {
            (Ok(l), Ok(r)) => {
                if l != m.coalgebra.gamma()[x] || r != m2.coalgebra.gamma()[y] {
                    return Ok(false);
                }
            }
            (Err(Error::NotInCarrier(_)), _) | (_, Err(Error::NotInCarrier(_))) => return Ok(false),
            (Err(e), _) | (_, Err(e)) => return Err(e),
        }
    }
    Ok(true)
}

/// Search for a `β` witnessing that `b` is an Aczel–Mendler bisimulation.
/// Points of `B` are assigned in order and every partial assignment is kept
/// continuous: `j ∈ nbhd(i)` forces `β(j) ∈ nbhd(β(i))`.
pub fn search_am_transition(b: &Relation, m: &GeomModel, m2: &GeomModel, bounds: AmBounds) -> Result<AmOutcome> {
    if m.functor() != m2.functor() {
        return Err(Error::FunctorMismatch(m.functor().to_string(), m2.functor().to_string()));
    }
    if !b.is_subset(&letter_agreement(m, m2)?) {
        return Ok(AmOutcome::Absent);
    }
    let rs = relation_space(b, m.space(), m2.space())?;
    let (carrier, cands) = match candidates(&rs, m, m2) {
        Ok(c) => c,
        Err(e) if e.is_resource() => return Ok(AmOutcome::BoundHit(e.to_string())),
        Err(e) => return Err(e),
    };
    if cands.iter().any(Vec::is_empty) {
        return Ok(AmOutcome::Absent);
    }
    let tb = &carrier.space;
    let n = rs.pairs.len();
    let mut beta: Vec<usize> = Vec::with_capacity(n);
    let mut nodes = 0usize;
    // iterative backtracking over candidate indices
    let mut choice = vec![0usize; n];
    let mut i = 0usize;
    loop {
        if i == n {
            return Ok(AmOutcome::Found(beta));
        }
        let mut placed = false;
        while choice[i] < cands[i].len() {
            nodes += 1;
            if nodes > bounds.max_nodes {
                return Ok(AmOutcome::BoundHit(format!("search stopped after {} nodes", bounds.max_nodes)));
            }
            let w = cands[i][choice[i]];
            choice[i] += 1;
            let ok = (0..i).all(|j| {
                (!rs.space.nbhd(i).contains(j) || tb.nbhd(w).contains(beta[j]))
                    && (!rs.space.nbhd(j).contains(i) || tb.nbhd(beta[j]).contains(w))
            });
            if ok {
                beta.push(w);
                placed = true;
                break;
            }
        }
        if placed {
            i += 1;
            if i < n {
                choice[i] = 0;
            }
        } else {
            if i == 0 {
                return Ok(AmOutcome::Absent);
            }
            i -= 1;
            beta.pop();
        }
    }
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;

    use super::*;
    use crate::coalgfun::{Coalgebra, TopFunctor};
    use crate::fixtures::vietoris_two_point;

    #[test]
    fn empty_relation_has_the_empty_transition() {
        let m = vietoris_two_point();
        let out = search_am_transition(&Relation::empty(2, 2), &m, &m, AmBounds::default()).unwrap();
        assert_eq!(out, AmOutcome::Found(vec![]));
    }

    #[test]
    fn the_diagonal_is_found_and_verified() {
        let m = vietoris_two_point();
        let id = Relation::identity(2);
        let AmOutcome::Found(beta) = search_am_transition(&id, &m, &m, AmBounds::default()).unwrap() else {
            panic!("diagonal should carry a transition");
        };
        assert!(is_am_bisim(&id, &beta, &m, &m).unwrap());
    }

    #[test]
    fn letter_mismatch_is_absent() {
        let m = vietoris_two_point();
        let b = Relation::from_pairs(2, 2, &[(0, 1)]).unwrap();
        assert_eq!(search_am_transition(&b, &m, &m, AmBounds::default()).unwrap(), AmOutcome::Absent);
    }

    #[test]
    fn oversized_dkh_relation_hits_the_bound() {
        let x = FinSpace::discrete_n(3);
        let c = Coalgebra::new(x, TopFunctor::Dkh, vec![0; 3]).unwrap();
        let m = GeomModel::new(c, BTreeMap::new()).unwrap();
        let out = search_am_transition(&Relation::full(3, 3), &m, &m, AmBounds::default()).unwrap();
        assert!(matches!(out, AmOutcome::BoundHit(_)));
    }

    #[test]
    fn wrong_transition_is_rejected() {
        let m = vietoris_two_point();
        let id = Relation::identity(2);
        let size = TopFunctor::Vietoris.carrier(&relation_space(&id, m.space(), m.space()).unwrap().space).unwrap().len();
        let mut rejected = 0;
        for a in 0..size {
            for b in 0..size {
                if !is_am_bisim(&id, &[a, b], &m, &m).unwrap() {
                    rejected += 1;
                }
            }
        }
        assert!(rejected > 0 && rejected < size * size);
    }

    #[test]
    fn dkh_bisimulation_without_transition() {
        let (m, m2, b) = crate::fixtures::dkh_without_transition();
        let sig = crate::logic::Signature::builtin(TopFunctor::Dkh);
        assert!(crate::bisim::is_lambda_bisim(&b, &m, &m2, &sig).unwrap().is_none());
        assert_eq!(search_am_transition(&b, &m, &m2, AmBounds::default()).unwrap(), AmOutcome::Absent);
    }

    #[test]
    fn graph_of_a_morphism_carries_a_transition() {
        // collapsing the two looping states of the left model onto one state
        let (m, _, _) = crate::fixtures::dkh_without_transition();
        let one = FinSpace::discrete_n(1);
        let target = GeomModel::new(Coalgebra::from_codes(one, TopFunctor::Dkh, &[0b10]).unwrap(), BTreeMap::new()).unwrap();
        let graph = Relation::from_pairs(2, 1, &[(0, 0), (1, 0)]).unwrap();
        let AmOutcome::Found(beta) = search_am_transition(&graph, &m, &target, AmBounds::default()).unwrap() else {
            panic!("graph of a morphism should carry a transition");
        };
        assert!(is_am_bisim(&graph, &beta, &m, &target).unwrap());
    }
}

use std::collections::BTreeMap;

use crate::bits::Bits;
use crate::error::Result;
use crate::finspace::{continuous_maps, FinSpace};

use super::coalgebra::{Coalgebra, GeomModel};
use super::top::TopFunctor;

/// Every coalgebra structure on `x`.
pub fn all_coalgebras(x: &FinSpace, functor: &TopFunctor) -> Result<Vec<Coalgebra>> {
    let carrier = functor.carrier(x)?;
    continuous_maps(x, &carrier.space)
        .into_iter()
        .map(|g| Coalgebra::new(x.clone(), functor.clone(), g.assignment().to_vec()))
        .collect()
}

/// Every valuation of `letters` in the opens of `x`.
pub fn all_valuations(x: &FinSpace, letters: &[&str]) -> Vec<BTreeMap<String, Bits>> {
    let opens = x.opens();
    let mut out = vec![BTreeMap::new()];
    for p in letters {
        out = out
            .into_iter()
            .flat_map(|v: BTreeMap<String, Bits>| {
                opens.iter().map(move |&o| {
                    let mut w = v.clone();
                    w.insert(p.to_string(), o);
                    w
                })
            })
            .collect();
    }
    out
}

/// Every model on `x` over `letters`.
pub fn all_models(x: &FinSpace, functor: &TopFunctor, letters: &[&str]) -> Result<Vec<GeomModel>> {
    let valuations = all_valuations(x, letters);
    let mut out = Vec::new();
    for c in all_coalgebras(x, functor)? {
        for v in &valuations {
            out.push(GeomModel::new(c.clone(), v.clone())?);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_on_discrete_spaces() {
        let x = FinSpace::discrete_n(2);
        assert_eq!(all_coalgebras(&x, &TopFunctor::Dkh).unwrap().len(), 36);
        assert_eq!(all_models(&x, &TopFunctor::Trivial, &["p"]).unwrap().len(), 16);
    }
}

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::bits::Bits;
use crate::error::{Error, Result};
use crate::finspace::{ContMap, FinSpace};

use super::top::{Carrier, TopFunctor};

/// A continuous map `γ : X → T X`, stored as carrier positions.
#[derive(Clone, Debug)]
pub struct Coalgebra {
    space: FinSpace,
    functor: TopFunctor,
    carrier: Arc<Carrier>,
    gamma: Vec<usize>,
}

impl Coalgebra {
    /// `gamma[x]` is a position in the carrier of `functor` on `space`.
    pub fn new(space: FinSpace, functor: TopFunctor, gamma: Vec<usize>) -> Result<Coalgebra> {
        let carrier = functor.carrier(&space)?;
        if gamma.len() != space.len() {
            return Err(Error::Invalid(format!("transition map has {} entries for {} points", gamma.len(), space.len())));
        }
        if let Some(&g) = gamma.iter().find(|&&g| g >= carrier.len()) {
            return Err(Error::OutOfRange { index: g, len: carrier.len() });
        }
        let map = ContMap::new(space.clone(), carrier.space.clone(), gamma.clone())?;
        if !map.is_continuous() {
            return Err(Error::NotContinuous("transition map into the carrier".into()));
        }
        Ok(Coalgebra { space, functor, carrier, gamma })
    }

    /// Build from element codes rather than carrier positions.
    pub fn from_codes(space: FinSpace, functor: TopFunctor, codes: &[u64]) -> Result<Coalgebra> {
        let carrier = functor.carrier(&space)?;
        let gamma = codes
            .iter()
            .map(|&c| carrier.position(c).ok_or_else(|| Error::NotInCarrier(functor.render_code(&space, c))))
            .collect::<Result<Vec<_>>>()?;
        Coalgebra::new(space, functor, gamma)
    }

    pub fn space(&self) -> &FinSpace {
        &self.space
    }

    pub fn functor(&self) -> &TopFunctor {
        &self.functor
    }

    pub fn carrier(&self) -> &Carrier {
        &self.carrier
    }

    pub fn gamma(&self) -> &[usize] {
        &self.gamma
    }

    pub fn gamma_map(&self) -> ContMap {
        ContMap::new(self.space.clone(), self.carrier.space.clone(), self.gamma.clone()).expect("validated")
    }

    /// `γ⁻¹(s)` for a subset `s` of the carrier.
    pub fn pullback(&self, s: Bits) -> Bits {
        (0..self.space.len()).filter(|&x| s.contains(self.gamma[x])).collect()
    }
}

/// A coalgebra with an open-valued valuation of proposition letters.
#[derive(Clone, Debug)]
pub struct GeomModel {
    pub coalgebra: Coalgebra,
    valuation: BTreeMap<String, Bits>,
}

impl GeomModel {
    pub fn new(coalgebra: Coalgebra, valuation: BTreeMap<String, Bits>) -> Result<GeomModel> {
        for (p, &v) in &valuation {
            if !coalgebra.space.is_open(v) {
                return Err(Error::NotOpen(format!("{} (valuation of `{p}`)", coalgebra.space.render(v))));
            }
        }
        Ok(GeomModel { coalgebra, valuation })
    }

    pub fn space(&self) -> &FinSpace {
        &self.coalgebra.space
    }

    pub fn functor(&self) -> &TopFunctor {
        &self.coalgebra.functor
    }

    pub fn valuation(&self) -> &BTreeMap<String, Bits> {
        &self.valuation
    }

    pub fn prop(&self, p: &str) -> Result<Bits> {
        self.valuation.get(p).copied().ok_or_else(|| Error::UnknownProposition(p.to_string()))
    }

    /// Disjoint union of models over the same functor, with the offset of each summand.
    pub fn disjoint_union(models: &[&GeomModel]) -> Result<(GeomModel, Vec<usize>)> {
        let functor = models.first().map(|m| m.functor().clone()).unwrap_or(TopFunctor::Trivial);
        for m in models {
            if *m.functor() != functor {
                return Err(Error::FunctorMismatch(functor.to_string(), m.functor().to_string()));
            }
        }
        let spaces: Vec<&FinSpace> = models.iter().map(|m| m.space()).collect();
        let (space, offsets) = FinSpace::disjoint_union(&spaces)?;
        let mut gamma = Vec::with_capacity(space.len());
        for (k, m) in models.iter().enumerate() {
            let incl = ContMap::new(m.space().clone(), space.clone(), (0..m.space().len()).map(|x| x + offsets[k]).collect())?;
            for x in 0..m.space().len() {
                gamma.push(functor.map_point(&incl, m.coalgebra.gamma[x])?);
            }
        }
        let mut valuation: BTreeMap<String, Bits> = BTreeMap::new();
        for (k, m) in models.iter().enumerate() {
            for (p, v) in &m.valuation {
                let shifted: Bits = v.iter().map(|x| x + offsets[k]).collect();
                let e = valuation.entry(p.clone()).or_default();
                *e = *e | shifted;
            }
        }
        let coalgebra = Coalgebra::new(space, functor, gamma)?;
        Ok((GeomModel::new(coalgebra, valuation)?, offsets))
    }
}

/// Does `T f ∘ γ = γ' ∘ f` hold pointwise? Elements whose set-level image
/// leaves the target carrier cannot match and make the square fail.
pub fn is_coalg_morphism(f: &ContMap, a: &Coalgebra, b: &Coalgebra) -> Result<bool> {
    if a.functor != b.functor {
        return Err(Error::FunctorMismatch(a.functor.to_string(), b.functor.to_string()));
    }
    if f.source() != a.space() || f.target() != b.space() {
        return Err(Error::Invalid("map does not run between the coalgebra spaces".into()));
    }
    if !f.is_continuous() {
        return Ok(false);
    }
    for x in 0..a.space.len() {
        let img = a.functor.image_code(f, a.carrier.elems[a.gamma[x]])?;
        if b.carrier.position(img) != Some(b.gamma[f.apply(x)]) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Morphism of models: a coalgebra morphism with `f⁻¹ ∘ V' = V` on the letters of both.
pub fn is_model_morphism(f: &ContMap, a: &GeomModel, b: &GeomModel) -> Result<bool> {
    if !is_coalg_morphism(f, &a.coalgebra, &b.coalgebra)? {
        return Ok(false);
    }
    let letters: std::collections::BTreeSet<&String> = a.valuation.keys().chain(b.valuation.keys()).collect();
    Ok(letters.into_iter().all(|p| {
        let va = a.valuation.get(p).copied().unwrap_or_default();
        let vb = b.valuation.get(p).copied().unwrap_or_default();
        f.preimage(vb) == va
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vietoris_pair() -> (Coalgebra, Coalgebra, ContMap) {
        // two points each seeing both; quotient onto one point seeing itself
        let x = FinSpace::discrete_n(2);
        let a = Coalgebra::from_codes(x.clone(), TopFunctor::Vietoris, &[0b11, 0b11]).unwrap();
        let y = FinSpace::discrete_n(1);
        let b = Coalgebra::from_codes(y.clone(), TopFunctor::Vietoris, &[0b1]).unwrap();
        let f = ContMap::new(x, y, vec![0, 0]).unwrap();
        (a, b, f)
    }

    #[test]
    fn identity_is_a_morphism() {
        let (a, _, _) = vietoris_pair();
        assert!(is_coalg_morphism(&ContMap::identity(a.space()), &a, &a).unwrap());
    }

    #[test]
    fn collapse_respects_images() {
        let (a, b, f) = vietoris_pair();
        assert!(is_coalg_morphism(&f, &a, &b).unwrap());
    }

    #[test]
    fn perturbed_transition_breaks_the_square() {
        let (a, _, f) = vietoris_pair();
        let b = Coalgebra::from_codes(f.target().clone(), TopFunctor::Vietoris, &[0]).unwrap();
        assert!(!is_coalg_morphism(&f, &a, &b).unwrap());
    }

    #[test]
    fn functor_mismatch_is_an_error() {
        let (a, _, f) = vietoris_pair();
        let b = Coalgebra::new(f.target().clone(), TopFunctor::Trivial, vec![0]).unwrap();
        assert!(matches!(is_coalg_morphism(&f, &a, &b), Err(Error::FunctorMismatch(..))));
    }

    #[test]
    fn discontinuous_transition_rejected() {
        // on the Sierpinski space, γ must be monotone for specialisation
        let s = FinSpace::sierpinski();
        let c = TopFunctor::Vietoris.carrier(&s).unwrap();
        let ok = (0..c.len()).flat_map(|i| (0..c.len()).map(move |j| (i, j)));
        let mut rejected = 0;
        for (i, j) in ok {
            if Coalgebra::new(s.clone(), TopFunctor::Vietoris, vec![i, j]).is_err() {
                rejected += 1;
            }
        }
        assert!(rejected > 0);
    }

    #[test]
    fn valuation_must_be_open() {
        let s = FinSpace::sierpinski();
        let c = Coalgebra::new(s.clone(), TopFunctor::Trivial, vec![0, 0]).unwrap();
        let v = BTreeMap::from([("p".to_string(), s.set_of(&["0"]).unwrap())]);
        assert!(matches!(GeomModel::new(c, v), Err(Error::NotOpen(_))));
    }
}

use std::collections::BTreeMap;

use rand::Rng;

use crate::bits::Bits;
use crate::error::Result;
use crate::finspace::{numbered, FinSpace};

use super::coalgebra::{Coalgebra, GeomModel};
use super::top::TopFunctor;

/// A space on `n` points named `x0, x1, ...`, discrete or generated by a few
/// random subsets.
pub fn random_space<R: Rng>(rng: &mut R, n: usize, discrete: bool) -> FinSpace {
    if discrete {
        return FinSpace::discrete_n(n);
    }
    let k = rng.gen_range(0..=n + 1);
    let subbase: Vec<Bits> = (0..k).map(|_| Bits::from_u64(rng.gen_range(0..1u64 << n))).collect();
    FinSpace::new(numbered(n), &subbase).expect("numbered points are distinct")
}

/// A random continuous transition map. Candidates are drawn uniformly and
/// rejected when discontinuous; after enough failures a constant map is used.
pub fn random_coalgebra<R: Rng>(rng: &mut R, x: &FinSpace, functor: &TopFunctor) -> Result<Coalgebra> {
    let size = functor.carrier(x)?.len();
    for _ in 0..256 {
        let gamma: Vec<usize> = (0..x.len()).map(|_| rng.gen_range(0..size)).collect();
        if let Ok(c) = Coalgebra::new(x.clone(), functor.clone(), gamma) {
            return Ok(c);
        }
    }
    let c = rng.gen_range(0..size);
    Coalgebra::new(x.clone(), functor.clone(), vec![c; x.len()])
}

/// A random model whose letters are valued in uniformly chosen opens.
pub fn random_model<R: Rng>(rng: &mut R, x: &FinSpace, functor: &TopFunctor, letters: &[&str]) -> Result<GeomModel> {
    let coalgebra = random_coalgebra(rng, x, functor)?;
    let opens = x.opens();
    let valuation: BTreeMap<String, Bits> =
        letters.iter().map(|p| (p.to_string(), opens[rng.gen_range(0..opens.len())])).collect();
    GeomModel::new(coalgebra, valuation)
}

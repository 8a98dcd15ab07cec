use rand::Rng;

use super::formula::Formula;
use super::semantics::Signature;

/// Largest number of connectives in a random formula.
pub const RANDOM_FORMULA_NODES: usize = 16;

/// A random formula of modal depth at most `depth` over `letters` and the
/// liftings of `sig`. Disjunctions have at most three disjuncts, and at most
/// [`RANDOM_FORMULA_NODES`] connectives are used; once they run out the
/// remaining positions are filled with atoms.
pub fn random_formula<R: Rng>(rng: &mut R, sig: &Signature, letters: &[String], depth: usize) -> Formula {
    let mut budget = RANDOM_FORMULA_NODES;
    build(rng, sig, letters, depth, &mut budget)
}

fn atom<R: Rng>(rng: &mut R, letters: &[String]) -> Formula {
    if letters.is_empty() || rng.gen_bool(0.2) {
        if rng.gen_bool(0.8) {
            Formula::Top
        } else {
            Formula::bot()
        }
    } else {
        Formula::Prop(letters[rng.gen_range(0..letters.len())].clone())
    }
}

fn build<R: Rng>(rng: &mut R, sig: &Signature, letters: &[String], depth: usize, budget: &mut usize) -> Formula {
    if *budget == 0 || depth == 0 && rng.gen_bool(0.5) {
        return atom(rng, letters);
    }
    let modal_ok = depth > 0 && !sig.liftings().is_empty();
    match rng.gen_range(0..if modal_ok { 4 } else { 3 }) {
        0 => atom(rng, letters),
        1 => {
            *budget -= 1;
            let a = build(rng, sig, letters, depth, budget);
            Formula::and(a, build(rng, sig, letters, depth, budget))
        }
        2 => {
            *budget -= 1;
            let n = rng.gen_range(0..=3);
            Formula::Or((0..n).map(|_| build(rng, sig, letters, depth.saturating_sub(1), budget)).collect())
        }
        _ => {
            *budget -= 1;
            let l = &sig.liftings()[rng.gen_range(0..sig.liftings().len())];
            let args = (0..l.arity()).map(|_| build(rng, sig, letters, depth - 1, budget)).collect();
            Formula::Modal(l.id().to_string(), args)
        }
    }
}

/// Every formula up to modal depth `depth` built from `top`, letters,
/// binary `&`, binary `\/` and the liftings, without repeats, capped at `limit`.
pub fn enumerate_formulas(sig: &Signature, letters: &[String], depth: usize, limit: usize) -> Vec<Formula> {
    let mut layer: Vec<Formula> = std::iter::once(Formula::Top)
        .chain(std::iter::once(Formula::bot()))
        .chain(letters.iter().map(|p| Formula::Prop(p.clone())))
        .collect();
    for _ in 0..depth {
        let mut next = layer.clone();
        for l in sig.liftings() {
            let mut tuples: Vec<Vec<Formula>> = vec![vec![]];
            for _ in 0..l.arity() {
                tuples = tuples
                    .into_iter()
                    .flat_map(|t| layer.iter().map(move |f| [t.clone(), vec![f.clone()]].concat()))
                    .collect();
            }
            next.extend(tuples.into_iter().map(|args| Formula::Modal(l.id().to_string(), args)));
        }
        let base = next.clone();
        for (i, a) in base.iter().enumerate() {
            for b in &base[i + 1..] {
                if next.len() >= limit {
                    break;
                }
                next.push(Formula::and(a.clone(), b.clone()));
                next.push(Formula::Or(vec![a.clone(), b.clone()]));
            }
        }
        next.truncate(limit);
        layer = next;
    }
    layer
}

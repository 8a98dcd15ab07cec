use std::collections::{BTreeMap, BTreeSet, HashSet};

use crate::bits::Bits;
use crate::coalgfun::{is_model_morphism, Coalgebra, GeomModel};
use crate::error::{Error, Result};
use crate::finspace::{ContMap, FinSpace};

use super::semantics::Signature;

/// Upper bound on the size of a definable-open family.
pub const MAX_DEFINABLE: usize = 1 << 12;

/// The definable opens of a family of models, computed jointly: each entry
/// is a subset of the concatenated point set whose part in every model is
/// the truth set there of one and the same formula.
#[derive(Clone, Debug)]
pub struct DefinableOpens {
    pub offsets: Vec<usize>,
    pub sizes: Vec<usize>,
    pub opens: Vec<Bits>,
}

impl DefinableOpens {
    pub fn total(&self) -> usize {
        self.sizes.iter().sum()
    }

    /// The part of a joint set lying in model `k`, in that model's indices.
    pub fn restrict(&self, k: usize, s: Bits) -> Bits {
        (0..self.sizes[k]).filter(|&x| s.contains(x + self.offsets[k])).collect()
    }

    pub fn global(&self, k: usize, x: usize) -> usize {
        self.offsets[k] + x
    }

    /// Definable opens containing the global point `g`.
    pub fn profile(&self, g: usize) -> Vec<bool> {
        self.opens.iter().map(|o| o.contains(g)).collect()
    }

    /// Class index of every global point, classes numbered by first occurrence.
    pub fn classes(&self) -> (Vec<usize>, usize) {
        let mut seen: BTreeMap<Vec<bool>, usize> = BTreeMap::new();
        let mut out = Vec::with_capacity(self.total());
        for g in 0..self.total() {
            let n = seen.len();
            out.push(*seen.entry(self.profile(g)).or_insert(n));
        }
        (out, seen.len())
    }
}

fn check_family(models: &[&GeomModel], sig: &Signature) -> Result<BTreeSet<String>> {
    for m in models {
        if m.functor() != sig.functor() {
            return Err(Error::FunctorMismatch(sig.functor().to_string(), m.functor().to_string()));
        }
    }
    let letters: BTreeSet<String> = models.iter().flat_map(|m| m.valuation().keys().cloned()).collect();
    for m in models {
        for p in &letters {
            m.prop(p)?;
        }
    }
    Ok(letters)
}

/// Least family of joint sets containing `∅`, everything and each letter,
/// closed under `∩`, `∪` and `γ⁻¹ ∘ λ` for every lifting of `sig`.
pub fn joint_definable_opens(models: &[&GeomModel], sig: &Signature) -> Result<DefinableOpens> {
    let letters = check_family(models, sig)?;
    let sizes: Vec<usize> = models.iter().map(|m| m.space().len()).collect();
    let offsets: Vec<usize> = sizes.iter().scan(0, |acc, &n| Some(std::mem::replace(acc, *acc + n))).collect();
    let total: usize = sizes.iter().sum();
    if total > crate::bits::MAX_BITS {
        return Err(Error::resource("points across the model family", crate::bits::MAX_BITS));
    }
    let mut fam = DefinableOpens { offsets, sizes, opens: Vec::new() };
    let mut seen: HashSet<Bits> = HashSet::new();
    let mut items: Vec<Bits> = Vec::new();
    let push = |s: Bits, items: &mut Vec<Bits>, seen: &mut HashSet<Bits>| -> Result<()> {
        if seen.insert(s) {
            items.push(s);
            if items.len() > MAX_DEFINABLE {
                return Err(Error::resource("definable opens", MAX_DEFINABLE));
            }
        }
        Ok(())
    };
    push(Bits::EMPTY, &mut items, &mut seen)?;
    push(Bits::full(total), &mut items, &mut seen)?;
    for p in &letters {
        let mut s = Bits::EMPTY;
        for (k, m) in models.iter().enumerate() {
            s = s | m.prop(p)?.iter().map(|x| fam.global(k, x)).collect();
        }
        push(s, &mut items, &mut seen)?;
    }

    let modal = |args: &[Bits], l: &crate::liftings::OpenLifting, fam: &DefinableOpens| -> Result<Bits> {
        let mut out = Bits::EMPTY;
        for (k, m) in models.iter().enumerate() {
            let local: Vec<Bits> = args.iter().map(|&a| fam.restrict(k, a)).collect();
            let pulled = m.coalgebra.pullback(l.eval(m.space(), &local)?);
            out = out | pulled.iter().map(|x| fam.global(k, x)).collect();
        }
        Ok(out)
    };

    let mut done = 0;
    while done < items.len() {
        let len = items.len();
        for i in 0..len {
            for j in done.max(i)..len {
                let (a, b) = (items[i], items[j]);
                push(a & b, &mut items, &mut seen)?;
                push(a | b, &mut items, &mut seen)?;
            }
        }
        for l in sig.liftings() {
            let n = l.arity();
            if n == 0 {
                if done == 0 {
                    push(modal(&[], l, &fam)?, &mut items, &mut seen)?;
                }
                continue;
            }
            let mut idx = vec![0usize; n];
            loop {
                if idx.iter().any(|&i| i >= done) {
                    let args: Vec<Bits> = idx.iter().map(|&i| items[i]).collect();
                    push(modal(&args, l, &fam)?, &mut items, &mut seen)?;
                }
                let mut pos = 0;
                while pos < n {
                    idx[pos] += 1;
                    if idx[pos] < len {
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
        done = len;
    }
    items.sort();
    fam.opens = items;
    Ok(fam)
}

/// The definable opens of a single model.
pub fn definable_opens(m: &GeomModel, sig: &Signature) -> Result<Vec<Bits>> {
    Ok(joint_definable_opens(&[m], sig)?.opens)
}

/// Do `x` and `y` satisfy the same formulas of `sig` in `m`?
pub fn modal_equiv(m: &GeomModel, x: usize, y: usize, sig: &Signature) -> Result<bool> {
    for p in [x, y] {
        if p >= m.space().len() {
            return Err(Error::OutOfRange { index: p, len: m.space().len() });
        }
    }
    let d = joint_definable_opens(&[m], sig)?;
    Ok(d.profile(x) == d.profile(y))
}

/// Modal equivalence of `x` in `a` and `y` in `b`.
pub fn modal_equiv_across(a: &GeomModel, x: usize, b: &GeomModel, y: usize, sig: &Signature) -> Result<bool> {
    if a.functor() != b.functor() {
        return Err(Error::FunctorMismatch(a.functor().to_string(), b.functor().to_string()));
    }
    for (m, p) in [(a, x), (b, y)] {
        if p >= m.space().len() {
            return Err(Error::OutOfRange { index: p, len: m.space().len() });
        }
    }
    let d = joint_definable_opens(&[a, b], sig)?;
    Ok(d.profile(d.global(0, x)) == d.profile(d.global(1, y)))
}

/// Why the quotient by modal equivalence carries no transition. Points are
/// given as `(model, point)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QuotientFailure {
    /// Two modally equivalent points whose transitions have different images.
    Disagree { left: (usize, usize), right: (usize, usize), left_image: String, right_image: String },
    /// The image of a transition is not an element of the functor on the quotient.
    Outside { point: (usize, usize) },
    /// The induced transition is well defined but not continuous.
    Discontinuous,
}

/// The quotient of a model family by modal equivalence.
#[derive(Clone, Debug)]
pub struct TheoryQuotient {
    pub definable: DefinableOpens,
    pub space: FinSpace,
    /// `(model, point)` members of each class.
    pub classes: Vec<Vec<(usize, usize)>>,
    /// The theory map of each model.
    pub maps: Vec<ContMap>,
    /// The quotient model, present when the transition is well defined.
    pub model: Option<GeomModel>,
    pub failure: Option<QuotientFailure>,
}

impl TheoryQuotient {
    pub fn class_of(&self, k: usize, x: usize) -> usize {
        self.maps[k].apply(x)
    }
}

/// The finest topology on the classes making every theory map continuous,
/// as minimal neighbourhoods: close `{c}` under images of neighbourhoods of
/// points landing inside it.
fn final_nbhds(models: &[&GeomModel], d: &DefinableOpens, class: &[usize], count: usize) -> Vec<Bits> {
    (0..count)
        .map(|c| {
            let mut u = Bits::singleton(c);
            loop {
                let mut next = u;
                for (k, m) in models.iter().enumerate() {
                    for x in 0..m.space().len() {
                        if u.contains(class[d.global(k, x)]) {
                            next = next | m.space().nbhd(x).iter().map(|y| class[d.global(k, y)]).collect();
                        }
                    }
                }
                if next == u {
                    return u;
                }
                u = next;
            }
        })
        .collect()
}

/// Identify modally equivalent points across `models`, give the classes the
/// final topology of the theory maps (every image of a definable open is
/// open in it), and set `ζ([x]) = (T th)(γ(x))`. Every
/// representative is checked to give the same transition, and each theory
/// map is checked to be a model morphism.
pub fn theory_quotient(models: &[&GeomModel], sig: &Signature) -> Result<TheoryQuotient> {
    let definable = joint_definable_opens(models, sig)?;
    let (class, count) = definable.classes();
    let union_names = {
        let spaces: Vec<&FinSpace> = models.iter().map(|m| m.space()).collect();
        FinSpace::disjoint_union(&spaces)?.0.names().to_vec()
    };
    let mut classes: Vec<Vec<(usize, usize)>> = vec![Vec::new(); count];
    for (k, m) in models.iter().enumerate() {
        for x in 0..m.space().len() {
            classes[class[definable.global(k, x)]].push((k, x));
        }
    }
    let names: Vec<String> = classes
        .iter()
        .map(|c| {
            let (k, x) = c[0];
            format!("[{}]", union_names[definable.global(k, x)])
        })
        .collect();
    let space = FinSpace::new(names, &final_nbhds(models, &definable, &class, count))?;
    let maps = models
        .iter()
        .enumerate()
        .map(|(k, m)| {
            let assignment = (0..m.space().len()).map(|x| class[definable.global(k, x)]).collect();
            ContMap::continuous(m.space().clone(), space.clone(), assignment)
        })
        .collect::<Result<Vec<_>>>()?;

    let functor = sig.functor();
    let mut zeta: Vec<Option<usize>> = vec![None; count];
    let mut witness: Vec<(usize, usize)> = vec![(0, 0); count];
    let mut failure = None;
    'outer: for (c, members) in classes.iter().enumerate() {
        for &(k, x) in members {
            let gamma = models[k].coalgebra.gamma()[x];
            let image = match functor.map_point(&maps[k], gamma) {
                Ok(i) => i,
                Err(Error::NotInCarrier(_)) => {
                    failure = Some(QuotientFailure::Outside { point: (k, x) });
                    break 'outer;
                }
                Err(e) => return Err(e),
            };
            match zeta[c] {
                None => {
                    zeta[c] = Some(image);
                    witness[c] = (k, x);
                }
                Some(prev) if prev != image => {
                    let carrier = functor.carrier(&space)?;
                    let render = |i: usize| functor.render_code(&space, carrier.elems[i]);
                    failure = Some(QuotientFailure::Disagree {
                        left: witness[c],
                        right: (k, x),
                        left_image: render(prev),
                        right_image: render(image),
                    });
                    break 'outer;
                }
                Some(_) => {}
            }
        }
    }

    let mut coalgebra = None;
    if failure.is_none() {
        let gamma: Vec<usize> = zeta.into_iter().map(|z| z.expect("every class has a member")).collect();
        match Coalgebra::new(space.clone(), functor.clone(), gamma) {
            Ok(c) => coalgebra = Some(c),
            Err(Error::NotContinuous(_)) => failure = Some(QuotientFailure::Discontinuous),
            Err(e) => return Err(e),
        }
    }
    let model = if let Some(coalgebra) = coalgebra {
        let mut valuation = BTreeMap::new();
        if let Some(first) = models.first() {
            for p in first.valuation().keys() {
                let mut s = Bits::EMPTY;
                for (k, m) in models.iter().enumerate() {
                    s = s | maps[k].image(m.prop(p)?);
                }
                valuation.insert(p.clone(), s);
            }
        }
        let z = GeomModel::new(coalgebra, valuation)?;
        for (k, m) in models.iter().enumerate() {
            if !is_model_morphism(&maps[k], m, &z)? {
                return Err(Error::Invariant(format!("theory map of model {k} is not a model morphism")));
            }
        }
        Some(z)
    } else {
        None
    };

    Ok(TheoryQuotient { definable, space, classes, maps, model, failure })
}

use std::fmt;

use crate::bits::Bits;
use crate::coalgfun::{Cell, TopFunctor};
use crate::error::{Error, Result};
use crate::finspace::{ContMap, FinSpace};

use super::set::SetLifting;

/// How an open lifting computes its images.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LiftingKind {
    /// A subbasic cell of the Vietoris or D_kh carrier.
    Cell(Cell),
    /// The constant lifting onto the whole carrier.
    Triv,
    /// A set-level lifting read on the classes of a lifted functor.
    Lifted(SetLifting),
    /// Pullback of a subset of `T(Sⁿ)` along `T⟨χ_a1, ..., χ_an⟩`.
    Code(Bits),
    /// `{c | c ⊊ a}` on the Vietoris carrier. Not natural; kept as a known-bad lifting.
    StrictBox,
}

/// An `n`-ary lifting for a topological functor: tuples of opens of `X` to
/// subsets of the carrier of `T X`, given as carrier positions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OpenLifting {
    id: String,
    functor: TopFunctor,
    arity: usize,
    kind: LiftingKind,
}

impl fmt::Display for OpenLifting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.functor, self.id)
    }
}

impl OpenLifting {
    pub fn new(id: impl Into<String>, functor: TopFunctor, arity: usize, kind: LiftingKind) -> OpenLifting {
        OpenLifting { id: id.into(), functor, arity, kind }
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn functor(&self) -> &TopFunctor {
        &self.functor
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn kind(&self) -> &LiftingKind {
        &self.kind
    }

    /// Same lifting under a different identifier.
    pub fn renamed(&self, id: impl Into<String>) -> OpenLifting {
        OpenLifting { id: id.into(), ..self.clone() }
    }

    /// The deliberately non-natural strict box on the Vietoris functor.
    pub fn strict_box() -> OpenLifting {
        OpenLifting::new("sbox", TopFunctor::Vietoris, 1, LiftingKind::StrictBox)
    }

    /// `λ_X(a_1, ..., a_n)`. Arguments are not required to be open; callers
    /// wanting the open-lifting semantics pass opens.
    pub fn eval(&self, x: &FinSpace, args: &[Bits]) -> Result<Bits> {
        if args.len() != self.arity {
            return Err(Error::ArityMismatch { id: self.id.clone(), expected: self.arity, found: args.len() });
        }
        let carrier = self.functor.carrier(x)?;
        match &self.kind {
            LiftingKind::Cell(cell) => self.functor.cell(x, *cell, args[0]),
            LiftingKind::Triv => Ok(Bits::full(carrier.len())),
            LiftingKind::Lifted(l) => {
                let TopFunctor::Kkp(sig) = &self.functor else {
                    return Err(Error::Invalid(format!("lifted lifting `{}` on a non-lifted functor", self.id)));
                };
                let a = args[0].low_u64();
                Ok((0..carrier.len()).filter(|&i| l.holds(sig.base, x.len(), a, carrier.elems[i])).collect())
            }
            LiftingKind::Code(code) => {
                let s = sierpinski_power(self.arity);
                let chi = (0..x.len())
                    .map(|p| args.iter().fold(0usize, |acc, a| acc * 2 + a.contains(p) as usize))
                    .collect();
                let chi = ContMap::new(x.clone(), s, chi)?;
                let t = self.functor.on_map(&chi)?;
                Ok(t.preimage(*code))
            }
            LiftingKind::StrictBox => {
                let a = args[0].low_u64();
                Ok((0..carrier.len()).filter(|&i| carrier.elems[i] & !a == 0 && carrier.elems[i] != a).collect())
            }
        }
    }
}

/// `Sⁿ` with points named by their coordinate strings, e.g. `01`.
pub fn sierpinski_power(n: usize) -> FinSpace {
    FinSpace::sierpinski().power(n)
}

/// Identifiers of the registered liftings of a functor.
pub fn lifting_ids(functor: &TopFunctor) -> Vec<String> {
    match functor {
        TopFunctor::Vietoris | TopFunctor::Dkh => vec!["box".into(), "dia".into()],
        TopFunctor::Trivial => vec!["triv".into()],
        TopFunctor::Kkp(sig) => sig.liftings.iter().map(|l| l.name().to_string()).collect(),
    }
}

pub fn builtin_lifting(functor: &TopFunctor, name: &str) -> Result<OpenLifting> {
    let kind = match (functor, name) {
        (TopFunctor::Vietoris | TopFunctor::Dkh, "box") => LiftingKind::Cell(Cell::Box),
        (TopFunctor::Vietoris | TopFunctor::Dkh, "dia") => LiftingKind::Cell(Cell::Dia),
        (TopFunctor::Trivial, "triv") => LiftingKind::Triv,
        (TopFunctor::Kkp(sig), _) => {
            let l = SetLifting::parse(name)?;
            if !sig.liftings.contains(&l) {
                return Err(Error::UnknownLifting(format!("{name} for {functor}")));
            }
            LiftingKind::Lifted(l)
        }
        _ => return Err(Error::UnknownLifting(format!("{name} for {functor}"))),
    };
    Ok(OpenLifting::new(name, functor.clone(), 1, kind))
}

pub fn builtin_liftings(functor: &TopFunctor) -> Vec<OpenLifting> {
    lifting_ids(functor).iter().map(|id| builtin_lifting(functor, id).expect("registered")).collect()
}

/// Every `n`-tuple of opens of `x`, in lexicographic order.
pub fn open_tuples(x: &FinSpace, n: usize) -> Vec<Vec<Bits>> {
    let opens = x.opens();
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out.into_iter().flat_map(|t| opens.iter().map(move |&o| [t.clone(), vec![o]].concat())).collect();
    }
    out
}

/// `λ_X(f⁻¹ a'_1, ...) = (T f)⁻¹ λ_Y(a'_1, ...)` for every tuple of opens of the target.
pub fn check_naturality(l: &OpenLifting, f: &ContMap) -> Result<bool> {
    let tf = l.functor.on_map(f)?;
    for args in open_tuples(f.target(), l.arity) {
        let pulled: Vec<Bits> = args.iter().map(|&a| f.preimage(a)).collect();
        if l.eval(f.source(), &pulled)? != tf.preimage(l.eval(f.target(), &args)?) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Argumentwise monotonicity over all pairs of open tuples differing in one place.
pub fn check_monotone(l: &OpenLifting, x: &FinSpace) -> Result<bool> {
    let opens = x.opens();
    for args in open_tuples(x, l.arity) {
        let base = l.eval(x, &args)?;
        for i in 0..l.arity {
            for &b in opens.iter().filter(|&&b| args[i].is_subset(b) && args[i] != b) {
                let mut bigger = args.clone();
                bigger[i] = b;
                if !base.is_subset(l.eval(x, &bigger)?) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Largest family size enumerated exhaustively by [`check_scott`].
pub const SCOTT_FAMILY_LIMIT: usize = 4;

/// `λ(…, ⋃D, …) = ⋃_{d∈D} λ(…, d, …)` for directed families `D` of opens of
/// size at most [`SCOTT_FAMILY_LIMIT`], and for the family of all opens below
/// each open (the largest directed family with that union).
pub fn check_scott(l: &OpenLifting, x: &FinSpace) -> Result<bool> {
    let opens = x.opens();
    let mut families: Vec<Vec<Bits>> = Vec::new();
    let mut frontier: Vec<Vec<usize>> = (0..opens.len()).map(|i| vec![i]).collect();
    for _ in 0..SCOTT_FAMILY_LIMIT {
        let mut next = Vec::new();
        for fam in frontier {
            families.push(fam.iter().map(|&i| opens[i]).collect());
            for j in fam.last().unwrap() + 1..opens.len() {
                next.push([fam.clone(), vec![j]].concat());
            }
        }
        frontier = next;
    }
    for &o in &opens {
        families.push(opens.iter().copied().filter(|d| d.is_subset(o)).collect());
    }
    let directed = |fam: &[Bits]| fam.iter().all(|&a| fam.iter().all(|&b| fam.iter().any(|&c| (a | b).is_subset(c))));
    for args in open_tuples(x, l.arity) {
        for i in 0..l.arity {
            for fam in families.iter().filter(|f| directed(f)) {
                let union = fam.iter().fold(Bits::EMPTY, |acc, &d| acc | d);
                let mut at = args.clone();
                at[i] = union;
                let lhs = l.eval(x, &at)?;
                let mut rhs = Bits::EMPTY;
                for &d in fam {
                    at[i] = d;
                    rhs = rhs | l.eval(x, &at)?;
                }
                if lhs != rhs {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// The images of all liftings over all open tuples generate the carrier topology.
pub fn check_characteristic(functor: &TopFunctor, ls: &[OpenLifting], x: &FinSpace) -> Result<bool> {
    let carrier = functor.carrier(x)?;
    let mut subbase = Vec::new();
    for l in ls {
        if l.functor != *functor {
            return Err(Error::FunctorMismatch(functor.to_string(), l.functor.to_string()));
        }
        for args in open_tuples(x, l.arity) {
            subbase.push(l.eval(x, &args)?);
        }
    }
    let generated = FinSpace::new(carrier.space.names().to_vec(), &subbase)?;
    Ok(generated == carrier.space)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finspace::{all_topologies, continuous_maps};

    #[test]
    fn dkh_box_on_one_point() {
        let x = FinSpace::discrete_n(1);
        let b = builtin_lifting(&TopFunctor::Dkh, "box").unwrap();
        assert_eq!(b.eval(&x, &[x.full()]).unwrap().count(), 2);
    }

    #[test]
    fn vietoris_dia_of_empty_is_empty() {
        let x = FinSpace::discrete_n(2);
        let d = builtin_lifting(&TopFunctor::Vietoris, "dia").unwrap();
        assert!(d.eval(&x, &[Bits::EMPTY]).unwrap().is_empty());
    }

    #[test]
    fn trivial_lifting_is_everything() {
        let x = FinSpace::sierpinski();
        let t = builtin_lifting(&TopFunctor::Trivial, "triv").unwrap();
        assert_eq!(t.eval(&x, &[Bits::EMPTY]).unwrap(), Bits::full(2));
        assert!(check_characteristic(&TopFunctor::Trivial, &[t], &FinSpace::two_trivial()).unwrap());
    }

    #[test]
    fn unknown_pair_rejected() {
        assert!(matches!(builtin_lifting(&TopFunctor::Trivial, "box"), Err(Error::UnknownLifting(_))));
    }

    #[test]
    fn builtins_are_natural_on_small_discrete_spaces() {
        let spaces: Vec<FinSpace> = (0..=2).map(FinSpace::discrete_n).collect();
        for t in [TopFunctor::Vietoris, TopFunctor::Dkh, TopFunctor::Trivial] {
            for l in builtin_liftings(&t) {
                for x in &spaces {
                    for y in &spaces {
                        for f in continuous_maps(x, y) {
                            assert!(check_naturality(&l, &f).unwrap(), "{l} on {f:?}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn strict_box_is_not_natural() {
        let x = FinSpace::discrete_n(2);
        let y = FinSpace::discrete_n(1);
        let broken = OpenLifting::strict_box();
        let found = continuous_maps(&x, &y).iter().any(|f| !check_naturality(&broken, f).unwrap());
        assert!(found);
    }

    #[test]
    fn monotone_agrees_with_scott() {
        for n in 0..=2 {
            for x in all_topologies(n) {
                for t in [TopFunctor::Vietoris, TopFunctor::Dkh, TopFunctor::Trivial] {
                    let mut ls = builtin_liftings(&t);
                    if t == TopFunctor::Vietoris {
                        ls.push(OpenLifting::strict_box());
                    }
                    for l in ls {
                        assert_eq!(check_monotone(&l, &x).unwrap(), check_scott(&l, &x).unwrap(), "{l}");
                    }
                }
            }
        }
    }

    #[test]
    fn vietoris_pair_is_characteristic_on_discrete_two() {
        let x = FinSpace::discrete_n(2);
        let v = TopFunctor::Vietoris;
        assert!(check_characteristic(&v, &builtin_liftings(&v), &x).unwrap());
        let only_box = [builtin_lifting(&v, "box").unwrap()];
        assert!(!check_characteristic(&v, &only_box, &x).unwrap());
    }
}

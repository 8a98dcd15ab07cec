use crate::bits::Bits;
use crate::coalgfun::{SetFunctor, TopFunctor};
use crate::error::{Error, Result};
use crate::finspace::{ContMap, FinSpace};
use crate::kkplift::KkpSignature;

use super::open::{builtin_lifting, open_tuples, sierpinski_power, LiftingKind, OpenLifting};
use super::set::SetLifting;

/// Largest arity for which codes are built.
pub const MAX_CODE_ARITY: usize = 2;

/// A subset of the carrier of `T(Sⁿ)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SierpinskiCode {
    pub functor: TopFunctor,
    pub arity: usize,
    pub code: Bits,
}

/// `π_i⁻¹({1})` in an `n`-fold power of a two-point space; coordinate 0 is
/// the most significant digit of the point index.
fn coordinate_opens(n: usize) -> Vec<Bits> {
    (0..n).map(|i| (0..1usize << n).filter(|p| p >> (n - 1 - i) & 1 == 1).collect()).collect()
}

fn check_arity(n: usize) -> Result<()> {
    if n > MAX_CODE_ARITY {
        return Err(Error::resource("arity for Sierpinski codes", MAX_CODE_ARITY));
    }
    Ok(())
}

/// `λ_{Sⁿ}(π_1⁻¹{1}, ..., π_n⁻¹{1})`.
pub fn sierpinski_code(l: &OpenLifting) -> Result<SierpinskiCode> {
    check_arity(l.arity())?;
    let s = sierpinski_power(l.arity());
    let code = l.eval(&s, &coordinate_opens(l.arity()))?;
    Ok(SierpinskiCode { functor: l.functor().clone(), arity: l.arity(), code })
}

/// The lifting `λᶜ_X(a⃗) = (T⟨χ_a1, ..., χ_an⟩)⁻¹(c)`; the code must be open.
pub fn lifting_from_code(c: &SierpinskiCode, id: &str) -> Result<OpenLifting> {
    check_arity(c.arity)?;
    let carrier = c.functor.carrier(&sierpinski_power(c.arity))?;
    if !carrier.space.is_open(c.code) {
        return Err(Error::NotOpen(format!("{} in {}(S^{})", carrier.space.render(c.code), c.functor, c.arity)));
    }
    Ok(OpenLifting::new(id, c.functor.clone(), c.arity, LiftingKind::Code(c.code)))
}

/// The lifted functor that agrees with a builtin on discrete spaces and is
/// defined on every finite space: the powerset lift for Vietoris, the
/// monotone lift for D_kh. Other functors are returned unchanged.
pub fn top_extension(functor: &TopFunctor) -> TopFunctor {
    let lift = |base| TopFunctor::Kkp(KkpSignature { base, liftings: vec![SetLifting::Box, SetLifting::Dia] });
    match functor {
        TopFunctor::Vietoris => lift(SetFunctor::Powerset),
        TopFunctor::Dkh => lift(SetFunctor::Monotone),
        other => other.clone(),
    }
}

/// The lifting of [`top_extension`] with the same identifier.
pub fn extend_builtin(l: &OpenLifting) -> Result<OpenLifting> {
    match (l.functor(), l.kind()) {
        (TopFunctor::Vietoris | TopFunctor::Dkh, LiftingKind::Cell(_)) => {
            builtin_lifting(&top_extension(l.functor()), l.id())
        }
        _ => Ok(l.clone()),
    }
}

/// `λ̃(b⃗) = ⋂{λ(a⃗) | a_i open, a_i ⊇ b_i}` on arbitrary subsets.
#[derive(Clone, Debug)]
pub struct StrongLifting {
    base: OpenLifting,
}

pub fn strong_extension(l: &OpenLifting) -> StrongLifting {
    StrongLifting { base: l.clone() }
}

/// A subset tuple where the extension and the set-level formula differ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Disagreement {
    pub args: Vec<Bits>,
    pub extension: Bits,
    pub direct: Bits,
}

impl StrongLifting {
    pub fn base(&self) -> &OpenLifting {
        &self.base
    }

    pub fn eval(&self, x: &FinSpace, args: &[Bits]) -> Result<Bits> {
        let n = self.base.functor().carrier(x)?.len();
        let mut acc = Bits::full(n);
        for opens in open_tuples(x, self.base.arity()) {
            if opens.iter().zip(args).all(|(a, b)| b.is_subset(*a)) {
                acc = acc & self.base.eval(x, &opens)?;
            }
        }
        Ok(acc)
    }

    /// The extension agrees with the lifting on opens.
    pub fn check_restriction(&self, x: &FinSpace) -> Result<()> {
        for opens in open_tuples(x, self.base.arity()) {
            if self.eval(x, &opens)? != self.base.eval(x, &opens)? {
                return Err(Error::Invariant(format!("strong extension of {} differs on opens", self.base)));
            }
        }
        Ok(())
    }

    /// The builtin's own formula read on arbitrary subsets, where one exists.
    pub fn direct(&self, x: &FinSpace, args: &[Bits]) -> Result<Option<Bits>> {
        match self.base.kind() {
            LiftingKind::Cell(_) | LiftingKind::Triv => self.base.eval(x, args).map(Some),
            _ => Ok(None),
        }
    }

    /// Every subset tuple on which [`Self::eval`] and [`Self::direct`] differ.
    pub fn disagreements(&self, x: &FinSpace) -> Result<Vec<Disagreement>> {
        let mut out = Vec::new();
        for args in subset_tuples(x.len(), self.base.arity()) {
            if let Some(direct) = self.direct(x, &args)? {
                let extension = self.eval(x, &args)?;
                if extension != direct {
                    out.push(Disagreement { args, extension, direct });
                }
            }
        }
        Ok(out)
    }

    /// `λ̃_X(f⁻¹ b⃗) = (T f)⁻¹ λ̃_Y(b⃗)` for every subset tuple of the target.
    pub fn check_naturality(&self, f: &ContMap) -> Result<bool> {
        let tf = self.base.functor().on_map(f)?;
        for args in subset_tuples(f.target().len(), self.base.arity()) {
            let pulled: Vec<Bits> = args.iter().map(|&b| f.preimage(b)).collect();
            if self.eval(f.source(), &pulled)? != tf.preimage(self.eval(f.target(), &args)?) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `λ̃_{𝟚ⁿ}(π_1⁻¹{1}, ...)`, a subset of the carrier of `T(𝟚ⁿ)`.
    pub fn code(&self) -> Result<Bits> {
        check_arity(self.base.arity())?;
        let n = self.base.arity();
        self.eval(&FinSpace::two_trivial().power(n), &coordinate_opens(n))
    }

    pub fn is_monotone_on(&self, x: &FinSpace) -> Result<bool> {
        let tuples = subset_tuples(x.len(), self.base.arity());
        for a in &tuples {
            let va = self.eval(x, a)?;
            for b in &tuples {
                if a.iter().zip(b).all(|(p, q)| p.is_subset(*q)) && !va.is_subset(self.eval(x, b)?) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

fn subset_tuples(points: usize, n: usize) -> Vec<Vec<Bits>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|t: Vec<Bits>| (0..1u64 << points).map(move |s| [t.clone(), vec![Bits::from_u64(s)]].concat()))
            .collect();
    }
    out
}

/// Is `(T sⁿ)⁻¹(c)` open in `T(Sⁿ)`, for `s : S → 𝟚` the identity on points?
pub fn check_strong_openness(functor: &TopFunctor, arity: usize, c: Bits) -> Result<bool> {
    check_arity(arity)?;
    let s = sierpinski_power(arity);
    let two = FinSpace::two_trivial().power(arity);
    let sn = ContMap::new(s.clone(), two, (0..s.len()).collect())?;
    let t = functor.on_map(&sn)?;
    Ok(functor.carrier(&s)?.space.is_open(t.preimage(c)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finspace::all_topologies;
    use crate::liftings::builtin_liftings;

    fn kkp(base: SetFunctor, ls: &[SetLifting]) -> TopFunctor {
        TopFunctor::Kkp(KkpSignature { base, liftings: ls.to_vec() })
    }

    #[test]
    fn kripke_diamond_code_on_the_lifted_powerset() {
        let t = kkp(SetFunctor::Powerset, &[SetLifting::Box, SetLifting::Dia]);
        let c = sierpinski_code(&builtin_lifting(&t, "dia").unwrap()).unwrap();
        let carrier = t.carrier(&sierpinski_power(1)).unwrap();
        assert_eq!(carrier.space.names_of(c.code), vec!["{1}", "{0,1}"]);
    }

    #[test]
    fn trivial_code_is_everything() {
        let c = sierpinski_code(&builtin_lifting(&TopFunctor::Trivial, "triv").unwrap()).unwrap();
        assert_eq!(c.code, Bits::full(2));
    }

    #[test]
    fn codes_round_trip_on_extensions() {
        for t in [TopFunctor::Vietoris, TopFunctor::Dkh, TopFunctor::Trivial] {
            for l in builtin_liftings(&t) {
                let ext = extend_builtin(&l).unwrap();
                let c = sierpinski_code(&ext).unwrap();
                let back = lifting_from_code(&c, ext.id()).unwrap();
                assert_eq!(sierpinski_code(&back).unwrap(), c);
                for n in 0..=2 {
                    for x in all_topologies(n) {
                        for a in x.opens() {
                            assert_eq!(back.eval(&x, &[a]).unwrap(), ext.eval(&x, &[a]).unwrap());
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn non_open_code_rejected() {
        let c = SierpinskiCode { functor: TopFunctor::Trivial, arity: 1, code: Bits::singleton(1) };
        assert!(matches!(lifting_from_code(&c, "bad"), Err(Error::NotOpen(_))));
    }

    #[test]
    fn vietoris_box_extension_is_the_subset_formula() {
        let b = builtin_lifting(&TopFunctor::Vietoris, "box").unwrap();
        let s = strong_extension(&b);
        for n in 0..=3 {
            let x = FinSpace::discrete_n(n);
            s.check_restriction(&x).unwrap();
            assert!(s.disagreements(&x).unwrap().is_empty());
        }
    }

    #[test]
    fn strong_openness_examples() {
        let t = kkp(SetFunctor::Powerset, &[SetLifting::Box, SetLifting::Dia]);
        let code = strong_extension(&builtin_lifting(&t, "box").unwrap()).code().unwrap();
        assert!(check_strong_openness(&t, 1, code).unwrap());
        assert!(check_strong_openness(&t, 1, Bits::EMPTY).unwrap());
        assert!(!check_strong_openness(&TopFunctor::Trivial, 1, Bits::singleton(1)).unwrap());
        // with box alone the lifted space over 𝟚 is Sierpinski-like and the
        // class of non-empty sets is not open upstairs
        let only_box = kkp(SetFunctor::Powerset, &[SetLifting::Box]);
        let two = only_box.carrier(&FinSpace::two_trivial()).unwrap();
        let nonempty = (0..two.len()).filter(|&i| two.elems[i] != 0).collect();
        assert!(!check_strong_openness(&only_box, 1, nonempty).unwrap());
    }
}

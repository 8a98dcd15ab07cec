//! The presentations M(F) and M′(F) of the monotone-neighbourhood frame.

use crate::bits::{subsets_of, Bits};
use crate::error::{Error, Result};
use crate::finspace::FinFrame;

use super::presentation::{LatticeTerm as T, Presentation, Relation};

/// Largest frame for which M′ generators (pairs of subsets) are produced.
pub const MAX_MPRIME_FRAME: usize = 4;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct PresentOptions {
    /// Also instantiate the directed-join relations over every directed subset.
    pub directed: bool,
}

pub fn box_gen(f: &FinFrame, a: usize) -> String {
    format!("box:{}", f.name(a))
}

pub fn dia_gen(f: &FinFrame, a: usize) -> String {
    format!("dia:{}", f.name(a))
}

fn bx(f: &FinFrame, a: usize) -> T {
    T::Gen(box_gen(f, a))
}

fn dm(f: &FinFrame, a: usize) -> T {
    T::Gen(dia_gen(f, a))
}

/// Non-empty directed subsets of `f`, each paired with its maximum.
pub fn directed_subsets(f: &FinFrame) -> Vec<(Vec<usize>, usize)> {
    let n = f.len();
    assert!(n <= 20, "directed subset enumeration is exponential");
    (1u64..1 << n)
        .filter_map(|mask| {
            let fam: Vec<usize> = Bits::from_u64(mask).iter().collect();
            f.directed_join(&fam).ok().map(|m| (fam, m))
        })
        .collect()
}

/// Generators `box:a`, `dia:a` for every element, with relation instances
/// M1, M2, M4, M5 over all pairs, and the directed-join relations on request.
pub fn present_m(f: &FinFrame, opts: PresentOptions) -> Presentation {
    let n = f.len();
    let mut gens: Vec<String> = (0..n).map(|a| box_gen(f, a)).collect();
    gens.extend((0..n).map(|a| dia_gen(f, a)));
    let mut rels = Vec::new();
    for a in 0..n {
        for b in 0..n {
            rels.push(Relation::leq(bx(f, f.meet(a, b)), bx(f, a)));
        }
    }
    for a in 0..n {
        for b in 0..n {
            if f.meet(a, b) == f.bottom() {
                rels.push(Relation::eq(T::Meet(vec![bx(f, a), dm(f, b)]), T::bottom()));
            }
        }
    }
    for a in 0..n {
        for b in 0..n {
            rels.push(Relation::leq(dm(f, a), dm(f, f.join(a, b))));
        }
    }
    for a in 0..n {
        for b in 0..n {
            if f.join(a, b) == f.top() {
                rels.push(Relation::leq(T::top(), T::Join(vec![bx(f, a), dm(f, b)])));
            }
        }
    }
    if opts.directed {
        for (fam, max) in directed_subsets(f) {
            rels.push(Relation::eq(bx(f, max), T::Join(fam.iter().map(|&a| bx(f, a)).collect())));
            rels.push(Relation::eq(dm(f, max), T::Join(fam.iter().map(|&a| dm(f, a)).collect())));
        }
    }
    Presentation::new(gens, rels).expect("generated relations use declared generators").dedup()
}

/// Name of the M′ generator for the pair of element sets `(γ, δ)`.
pub fn pair_gen(f: &FinFrame, gamma: u64, delta: u64) -> String {
    let names = |m: u64| Bits::from_u64(m).iter().map(|a| f.name(a).to_string()).collect::<Vec<_>>().join(",");
    format!("({{{}}}|{{{}}})", names(gamma), names(delta))
}

/// Generators are pairs `(γ, δ)` of element sets, with the join law
/// `(γ, δ) = ⋁_{c∈γ} ({c}, ∅) ∨ ⋁_{d∈δ} (∅, {d})` and instances of
/// M′1, M′2, M′4, M′5 over all `γ, δ, a, b`.
pub fn present_mprime(f: &FinFrame, opts: PresentOptions) -> Result<Presentation> {
    let n = f.len();
    if n > MAX_MPRIME_FRAME {
        return Err(Error::resource("frame elements for the pair presentation", MAX_MPRIME_FRAME));
    }
    let all = (1u64 << n) - 1;
    let g = |gamma: u64, delta: u64| T::Gen(pair_gen(f, gamma, delta));
    // singletons first so that the join law determines the rest during search
    let mut gens = Vec::new();
    for a in 0..n {
        gens.push(pair_gen(f, 1 << a, 0));
    }
    for a in 0..n {
        gens.push(pair_gen(f, 0, 1 << a));
    }
    for gamma in subsets_of(all) {
        for delta in subsets_of(all) {
            if (gamma.count_ones() + delta.count_ones()) != 1 {
                gens.push(pair_gen(f, gamma, delta));
            }
        }
    }
    let mut rels = Vec::new();
    for gamma in subsets_of(all) {
        for delta in subsets_of(all) {
            if gamma.count_ones() + delta.count_ones() == 1 {
                continue;
            }
            let parts = Bits::from_u64(gamma)
                .iter()
                .map(|c| g(1 << c, 0))
                .chain(Bits::from_u64(delta).iter().map(|d| g(0, 1 << d)))
                .collect();
            rels.push(Relation::eq(g(gamma, delta), T::Join(parts)));
        }
    }
    for gamma in subsets_of(all) {
        for delta in subsets_of(all) {
            for a in 0..n {
                for b in 0..n {
                    let ab_meet = 1u64 << f.meet(a, b);
                    let ab_join = 1u64 << f.join(a, b);
                    rels.push(Relation::leq(g(gamma | ab_meet, delta), g(gamma | 1 << a, delta)));
                    if f.meet(a, b) == f.bottom() {
                        rels.push(Relation::leq(
                            T::Meet(vec![g(gamma | 1 << a, delta), g(gamma, delta | 1 << b)]),
                            g(gamma, delta),
                        ));
                    }
                    rels.push(Relation::leq(g(gamma, delta | 1 << a), g(gamma, delta | ab_join)));
                    if f.join(a, b) == f.top() {
                        rels.push(Relation::leq(T::top(), g(gamma | 1 << a, delta | 1 << b)));
                    }
                }
            }
            if opts.directed {
                for (fam, max) in directed_subsets(f) {
                    rels.push(Relation::leq(
                        g(gamma | 1 << max, delta),
                        T::Join(fam.iter().map(|&a| g(gamma | 1 << a, delta)).collect()),
                    ));
                    rels.push(Relation::leq(
                        g(gamma, delta | 1 << max),
                        T::Join(fam.iter().map(|&a| g(gamma, delta | 1 << a)).collect()),
                    ));
                }
            }
        }
    }
    Ok(Presentation::new(gens, rels).expect("generated relations use declared generators").dedup())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::framealg::presentation::RelKind;

    fn instances(p: &Presentation, shape: impl Fn(&Relation) -> bool) -> usize {
        p.relations().iter().filter(|r| shape(r)).count()
    }

    #[test]
    fn m_over_two() {
        let f = FinFrame::two();
        let p = present_m(&f, PresentOptions::default());
        assert_eq!(p.generators().len(), 4);
        // M2 instances: (0,0), (0,1), (1,0)
        let m2 = |r: &Relation| r.rel == RelKind::Eq && r.rhs == T::bottom();
        assert_eq!(instances(&p, m2), 3);
        let m5 = |r: &Relation| r.lhs == T::top();
        assert_eq!(instances(&p, m5), 3);
        let m2_pairs: Vec<T> = p.relations().iter().filter(|r| m2(r)).map(|r| r.lhs.clone()).collect();
        assert!(m2_pairs.contains(&T::Meet(vec![T::gen("box:1"), T::gen("dia:0")])));
        assert!(!m2_pairs.contains(&T::Meet(vec![T::gen("box:1"), T::gen("dia:1")])));
    }

    #[test]
    fn m_over_trivial_frame() {
        let f = FinFrame::chain(1);
        let p = present_m(&f, PresentOptions::default());
        assert_eq!(p.generators(), &["box:0", "dia:0"]);
        assert!(p.relations().contains(&Relation::eq(T::Meet(vec![T::gen("box:0"), T::gen("dia:0")]), T::bottom())));
        assert!(p.relations().contains(&Relation::leq(T::top(), T::Join(vec![T::gen("box:0"), T::gen("dia:0")]))));
    }

    #[test]
    fn mprime_over_two() {
        let f = FinFrame::two();
        let p = present_mprime(&f, PresentOptions::default()).unwrap();
        assert_eq!(p.generators().len(), 16);
        assert!(p.relations().contains(&Relation::eq(T::gen("({}|{})"), T::bottom())));
        // M′5 at a = b = ⊤ with γ = δ = ∅
        assert!(p.relations().contains(&Relation::leq(T::top(), T::gen("({1}|{1})"))));
    }
}

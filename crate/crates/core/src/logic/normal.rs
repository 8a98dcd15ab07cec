use crate::error::{Error, Result};

use super::formula::Formula;
use super::semantics::Signature;

/// Rewrite `phi` as a disjunction of disjunction-free conjunctions of atoms,
/// where the argument of every modal atom is a finite disjunction of such
/// conjunctions. A modal operator applied to `ψ_1 ∨ ... ∨ ψ_m` becomes the
/// join over the chain of prefixes `ψ_1 ∨ ... ∨ ψ_k`, `0 ≤ k ≤ m`, which
/// needs Scott continuity of the lifting.
pub fn normal_form(phi: &Formula, sig: &Signature) -> Result<Formula> {
    phi.check(sig)?;
    for id in phi.liftings() {
        if !sig.is_scott(&id)? {
            return Err(Error::Invalid(format!(
                "normal form needs Scott-continuous liftings, and `{id}` is not Scott-continuous"
            )));
        }
    }
    let mut ds = disjuncts(phi);
    Ok(if ds.len() == 1 { ds.pop().unwrap() } else { Formula::Or(ds) })
}

fn disjuncts(phi: &Formula) -> Vec<Formula> {
    match phi {
        Formula::Top | Formula::Prop(_) => vec![phi.clone()],
        Formula::Or(fs) => fs.iter().flat_map(disjuncts).collect(),
        Formula::And(a, b) => {
            let (da, db) = (disjuncts(a), disjuncts(b));
            da.iter().flat_map(|x| db.iter().map(move |y| Formula::and(x.clone(), y.clone()))).collect()
        }
        Formula::Modal(id, args) => {
            let chains: Vec<Vec<Formula>> = args
                .iter()
                .map(|a| {
                    let ds = disjuncts(a);
                    (0..=ds.len()).map(|k| Formula::Or(ds[..k].to_vec())).collect()
                })
                .collect();
            let mut out: Vec<Vec<Formula>> = vec![vec![]];
            for chain in chains {
                out = out
                    .into_iter()
                    .flat_map(|prefix| {
                        chain.iter().map(move |c| {
                            let mut p = prefix.clone();
                            p.push(c.clone());
                            p
                        })
                    })
                    .collect();
            }
            out.into_iter().map(|args| Formula::Modal(id.clone(), args)).collect()
        }
    }
}

/// Is `phi` of the shape produced by [`normal_form`]?
pub fn is_normal(phi: &Formula) -> bool {
    fn conj(f: &Formula) -> bool {
        match f {
            Formula::Top | Formula::Prop(_) => true,
            Formula::And(a, b) => conj(a) && conj(b),
            Formula::Or(_) => false,
            Formula::Modal(_, args) => {
                args.iter().all(|a| matches!(a, Formula::Or(ds) if ds.iter().all(conj)))
            }
        }
    }
    match phi {
        Formula::Or(ds) => ds.iter().all(conj),
        f => conj(f),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coalgfun::TopFunctor;

    fn sig() -> Signature {
        Signature::builtin(TopFunctor::Vietoris)
    }

    fn p(t: &str) -> Formula {
        Formula::parse(t, &sig()).unwrap()
    }

    #[test]
    fn distributes_conjunction_over_disjunction() {
        let nf = normal_form(&p("(p:p & \\/[p:q, p:r])"), &sig()).unwrap();
        assert_eq!(nf, p("\\/[(p:p & p:q), (p:p & p:r)]"));
    }

    #[test]
    fn top_is_fixed() {
        assert_eq!(normal_form(&Formula::Top, &sig()).unwrap(), Formula::Top);
    }

    #[test]
    fn modal_argument_becomes_prefix_chain() {
        let nf = normal_form(&p("<box>(\\/[p:p, p:q])"), &sig()).unwrap();
        assert_eq!(nf, p("\\/[<box>(\\/[]), <box>(\\/[p:p]), <box>(\\/[p:p, p:q])]"));
        assert!(is_normal(&nf));
        assert!(!is_normal(&p("(p:p & \\/[p:q])")));
    }

    #[test]
    fn non_scott_lifting_rejected() {
        let sig = Signature::builtin(TopFunctor::parse("kkp:powerset:avoid").unwrap());
        assert!(!sig.is_scott("avoid").unwrap());
        let phi = Formula::modal("avoid", vec![Formula::Top]);
        assert!(matches!(normal_form(&phi, &sig), Err(Error::Invalid(_))));
    }
}

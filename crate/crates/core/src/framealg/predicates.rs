use crate::error::{Error, Result};
use crate::finspace::FinFrame;

/// Pseudocomplement `∼a = ⋁{b | a ∧ b = ⊥}`.
pub fn negation(f: &FinFrame, a: usize) -> usize {
    f.join_all((0..f.len()).filter(|&b| f.meet(a, b) == f.bottom()))
}

/// `a ⋖ b`: some `c` has `c ∧ a = ⊥` and `c ∨ b = ⊤`. The equivalent
/// criterion `∼a ∨ b = ⊤` is evaluated alongside; disagreement is reported.
pub fn well_inside(f: &FinFrame, a: usize, b: usize) -> Result<bool> {
    let witness = (0..f.len()).any(|c| f.meet(c, a) == f.bottom() && f.join(c, b) == f.top());
    let via_negation = f.join(negation(f, a), b) == f.top();
    if witness != via_negation {
        return Err(Error::Invariant(format!(
            "well-inside criteria disagree at `{}`, `{}`",
            f.name(a),
            f.name(b)
        )));
    }
    Ok(witness)
}

/// `a = ⋁{b | b ⋖ a}`.
pub fn is_regular_element(f: &FinFrame, a: usize) -> Result<bool> {
    let mut acc = f.bottom();
    for b in 0..f.len() {
        if well_inside(f, b, a)? {
            acc = f.join(acc, b);
        }
    }
    Ok(acc == a)
}

pub fn is_regular_frame(f: &FinFrame) -> Result<bool> {
    for a in 0..f.len() {
        if !is_regular_element(f, a)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finspace::{enumerate_frames, opn_frame, FinSpace};

    #[test]
    fn negation_examples() {
        let b = FinFrame::boolean(2);
        let x = b.index_of("{a0}").unwrap();
        assert_eq!(b.name(negation(&b, x)), "{a1}");
        for f in [FinFrame::chain(3), FinFrame::boolean(2)] {
            assert_eq!(negation(&f, f.bottom()), f.top());
        }
        let s = opn_frame(&FinSpace::sierpinski()).unwrap().frame;
        assert_eq!(s.name(negation(&s, s.index_of("{1}").unwrap())), "{}");
    }

    #[test]
    fn well_inside_examples() {
        let b = FinFrame::boolean(2);
        for a in 0..b.len() {
            assert!(well_inside(&b, a, a).unwrap());
        }
        let s = opn_frame(&FinSpace::sierpinski()).unwrap().frame;
        let one = s.index_of("{1}").unwrap();
        assert!(!well_inside(&s, one, one).unwrap());
        for f in enumerate_frames(5) {
            for b in 0..f.len() {
                assert!(well_inside(&f, f.bottom(), b).unwrap());
            }
        }
    }

    #[test]
    fn regularity_examples() {
        assert!(is_regular_frame(&FinFrame::boolean(3)).unwrap());
        assert!(is_regular_frame(&FinFrame::two()).unwrap());
        let s = opn_frame(&FinSpace::sierpinski()).unwrap().frame;
        assert!(!is_regular_frame(&s).unwrap());
        assert!(!is_regular_element(&s, s.index_of("{1}").unwrap()).unwrap());
    }

    #[test]
    fn regular_elements_closed_under_meet_and_join() {
        for f in enumerate_frames(6) {
            let reg: Vec<usize> = (0..f.len()).filter(|&a| is_regular_element(&f, a).unwrap()).collect();
            for &a in &reg {
                for &b in &reg {
                    assert!(is_regular_element(&f, f.join(a, b)).unwrap());
                    assert!(is_regular_element(&f, f.meet(a, b)).unwrap());
                }
            }
        }
    }
}

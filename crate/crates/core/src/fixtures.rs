//! Small hand-built models used by tests, the acceptance suite and the CLI.

use std::collections::BTreeMap;

use crate::coalgfun::{Coalgebra, GeomModel, TopFunctor};
use crate::finspace::FinSpace;

/// Discrete `{x, y}` over Vietoris with `γ(x) = {x, y}`, `γ(y) = ∅` and `V(p) = {x}`.
pub fn vietoris_two_point() -> GeomModel {
    let x = FinSpace::from_names(&["x", "y"], &[&["x"], &["y"]]).expect("valid space");
    let c = Coalgebra::from_codes(x.clone(), TopFunctor::Vietoris, &[0b11, 0b00]).expect("valid coalgebra");
    GeomModel::new(c, BTreeMap::from([("p".to_string(), x.set_of(&["x"]).expect("known point"))])).expect("open valuation")
}

/// Two `D_kh` models on discrete two-point spaces and a Λ-bisimulation
/// between them that carries no transition. On the left both states have
/// `{X}` as neighbourhood system; on the right `u` has `↑{u}` and `v` has
/// `{X}`. The relation is `{(s, u), (s, v), (t, v)}`. Its only coherent pairs
/// are `(∅, ∅)` and `(X, X')`, so the modal clauses hold, but any `β(s, u)`
/// projecting to `↑{u}` on the right must contain `π⁻¹{s}` and so projects
/// to a collection containing `{s}` on the left.
pub fn dkh_without_transition() -> (GeomModel, GeomModel, crate::bisim::Relation) {
    let left = FinSpace::from_names(&["s", "t"], &[&["s"], &["t"]]).expect("valid space");
    let right = FinSpace::from_names(&["u", "v"], &[&["u"], &["v"]]).expect("valid space");
    // D_kh codes: bit `b` set means the subset with mask `b` is a neighbourhood
    let whole = 1 << 0b11;
    let up_first = 1 << 0b01 | 1 << 0b11;
    let m = Coalgebra::from_codes(left, TopFunctor::Dkh, &[whole, whole]).expect("valid coalgebra");
    let m2 = Coalgebra::from_codes(right, TopFunctor::Dkh, &[up_first, whole]).expect("valid coalgebra");
    let b = crate::bisim::Relation::from_pairs(2, 2, &[(0, 0), (0, 1), (1, 1)]).expect("points exist");
    (GeomModel::new(m, BTreeMap::new()).expect("no letters"), GeomModel::new(m2, BTreeMap::new()).expect("no letters"), b)
}

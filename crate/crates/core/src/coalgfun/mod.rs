//! Set functors, topological functors with their carriers, coalgebras and
//! geometric models.

mod coalgebra;
mod enumerate;
mod random;
mod set;
mod top;

pub use coalgebra::{is_coalg_morphism, is_model_morphism, Coalgebra, GeomModel};
pub use enumerate::{all_coalgebras, all_models, all_valuations};
pub use random::{random_coalgebra, random_model, random_space};
pub use set::{render_collection, SetFunctor, MAX_MONOTONE_POINTS, MAX_POWERSET_POINTS};
pub use top::{dkh_elements, is_finite_kh, Carrier, Cell, TopFunctor, MAX_DKH_POINTS, MAX_VIETORIS_POINTS};

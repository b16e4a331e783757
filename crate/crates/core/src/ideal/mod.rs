pub mod algebra;
pub mod groebner;
pub mod ops;
pub mod tags;

pub use algebra::{Algebra, AlgebraElement, AlgebraPresentation, Localization};
pub use groebner::{groebner, groebner_tracked, GroebnerBasis};
pub use ops::{colon, eliminate, intersect, member, member_traced, power_exponent, radical_member, saturate, Ideal, RadicalVerdict};
pub use tags::{subalg_member, Subalgebra};

pub mod linsolve;
pub mod matrix;
pub mod mono;
pub mod parse;
pub mod poly;
pub mod univ;

pub use linsolve::Combiner;
pub use matrix::PolyMatrix;
pub use mono::{Exp, Monomial, MonomialOrder};
pub use parse::{parse_poly, parse_poly_infer, poly};
pub use poly::{q, qf, Ctx, Polynomial, Vars, Q};

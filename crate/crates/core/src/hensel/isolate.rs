//! Isolating a simple zero: after normalizing the Jacobian at the point to
//! the identity, f = (I - M)·X with M over ⟨X⟩, and e = det(I - M) is an
//! idempotent with e·x_i = 0 in the quotient.

use crate::error::{EngineError, Result};
use crate::ideal::{member, Ideal};
use crate::ring::{q, Ctx, PolyMatrix, Polynomial, Q};

#[derive(Clone, Debug)]
pub struct IsolationData {
    /// M with f̃ = (I - M)·X, in translated coordinates
    pub m_matrix: PolyMatrix,
    /// det(I - M), moved back to the original coordinates
    pub e: Polynomial,
    pub translated: bool,
    /// Jac(point)^{-1}, constant
    pub jacobian_normalizer: PolyMatrix,
    /// Jac(point)^{-1}·f in translated coordinates
    pub normalized: Vec<Polynomial>,
}

/// `eqs` live in `ctx`, whose first `n` variables are the unknowns and
/// whose remaining variables are not allowed to appear (the ring is Q[X]).
pub fn isolate_zero(ctx: &Ctx, n: usize, eqs: &[Polynomial], point: &[Q]) -> Result<IsolationData> {
    if eqs.len() != n || point.len() != n || ctx.len() < n {
        return Err(EngineError::ShapeError("isolation needs n equations, n unknowns and a point".into()));
    }
    let allowed: Vec<bool> = (0..ctx.len()).map(|i| i < n).collect();
    if eqs.iter().any(|f| !f.uses_only(&allowed)) {
        return Err(EngineError::Unsupported("isolation works over the rationals only".into()));
    }
    let translated = point.iter().any(|c| !num_traits::Zero::is_zero(c));
    let shift = |sign: i64| -> Vec<Polynomial> {
        (0..ctx.len())
            .map(|i| {
                let x = Polynomial::var(ctx, i);
                if i < n {
                    &x + &Polynomial::constant(ctx, &point[i] * q(sign))
                } else {
                    x
                }
            })
            .collect()
    };
    let fwd = shift(1);
    let f: Vec<Polynomial> = eqs.iter().map(|g| g.embed(ctx).map(|g| g.eval_map(&fwd, ctx))).collect::<Result<_>>()?;
    for (i, g) in f.iter().enumerate() {
        if !num_traits::Zero::is_zero(&g.constant_term()) {
            return Err(EngineError::HypothesisNotSatisfied(format!("f_{} does not vanish at the point", i + 1)));
        }
    }
    let zero: Vec<Polynomial> = (0..ctx.len()).map(|_| Polynomial::zero(ctx)).collect();
    let j0 = PolyMatrix::from_fn(ctx, n, n, |j, i| f[j].derivative(i).eval_map(&zero, ctx));
    let det = j0.det_ff()?.constant_value().unwrap_or_else(|| q(0));
    if num_traits::Zero::is_zero(&det) {
        return Err(EngineError::JacobianNotUnit);
    }
    let inv = j0.adjugate()?.scale(&Polynomial::constant(ctx, q(1) / det));
    let normalized = inv.mul_vec(&f)?;
    // g_i = X_i - f̃_i has order at least two; split each monomial at its
    // lowest-index variable
    let mut m = PolyMatrix::zeros(ctx, n, n);
    for (i, fi) in normalized.iter().enumerate() {
        let g = &Polynomial::var(ctx, i) - fi;
        for (mono, c) in g.terms() {
            if mono.degree() < 2 {
                return Err(EngineError::InvariantRecheckFailed("normalized system has a nontrivial linear part".into()));
            }
            let j = (0..n).find(|&j| mono.exp(j) > 0).unwrap();
            let mut rest = mono.clone();
            rest.set(j, rest.exp(j) - 1);
            let entry = m.get(i, j) + &Polynomial::monomial(ctx, rest, c.clone());
            m.set(i, j, entry);
        }
    }
    let e_shifted = PolyMatrix::identity(ctx, n).sub(&m)?.det_ff()?;
    let e = e_shifted.eval_map(&shift(-1), ctx);

    let rels = Ideal::new(ctx, eqs.iter().cloned());
    if !member(&(&(&e * &e) - &e), &rels)? {
        return Err(EngineError::InvariantRecheckFailed("e is not idempotent".into()));
    }
    for i in 0..n {
        let xi = &Polynomial::var(ctx, i) - &Polynomial::constant(ctx, point[i].clone());
        if !member(&(&e * &xi), &rels)? {
            return Err(EngineError::InvariantRecheckFailed(format!("e·(x_{} - a_{}) is not zero", i + 1, i + 1)));
        }
    }
    Ok(IsolationData { m_matrix: m, e, translated, jacobian_normalizer: inv, normalized })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{poly, Vars};

    #[test]
    fn single_quadratic() {
        let c = Vars::new(&["x"]);
        let d = isolate_zero(&c, 1, &[poly("x-x^2", &c)], &[q(0)]).unwrap();
        assert_eq!(d.e, poly("1-x", &c));
        assert_eq!(d.m_matrix.get(0, 0), &poly("x", &c));
        assert!(!d.translated);
    }

    #[test]
    fn already_isolated() {
        let c = Vars::new(&["x", "y"]);
        let d = isolate_zero(&c, 2, &[poly("x", &c), poly("y", &c)], &[q(0), q(0)]).unwrap();
        assert!(d.e.is_one());
    }

    #[test]
    fn translated_point_and_scaled_jacobian() {
        // zero at x = 1 of x^2 - x, Jacobian 1 there; 2y - y^2 at y = 0
        let c = Vars::new(&["x", "y"]);
        let eqs = [poly("x^2-x", &c), poly("2*y-y^2", &c)];
        let d = isolate_zero(&c, 2, &eqs, &[q(1), q(0)]).unwrap();
        assert!(d.translated);
        let rels = Ideal::new(&c, eqs.iter().cloned());
        // e = 1 at the point and vanishes at the other zeros
        assert_eq!(d.e.eval_rational(&[q(1), q(0)]), q(1));
        for pt in [[q(0), q(0)], [q(1), q(2)], [q(0), q(2)]] {
            assert_eq!(d.e.eval_rational(&pt), q(0));
        }
        assert!(member(&(&(&d.e * &d.e) - &d.e), &rels).unwrap());
    }

    #[test]
    fn singular_point() {
        let c = Vars::new(&["x"]);
        assert!(matches!(isolate_zero(&c, 1, &[poly("x^2", &c)], &[q(0)]), Err(EngineError::JacobianNotUnit)));
    }
}

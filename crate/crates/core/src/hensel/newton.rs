//! Newton iteration for a Hensel system, modulo powers of an ideal I of A.

use super::system::HenselSystem;
use crate::error::{EngineError, Result};
use crate::ideal::Ideal;
use crate::ring::{PolyMatrix, Polynomial};

#[derive(Clone, Debug)]
pub struct NewtonState {
    /// the approximate zero, in the base context
    pub point: Vec<Polynomial>,
    /// approximate inverse of Jac(point)
    pub u: PolyMatrix,
    /// f(point) ∈ I^(2^k) and Jac(point)·U - 1 ∈ I^(2^k)
    pub k: u32,
}

fn at(sys: &HenselSystem, p: &Polynomial, point: &[Polynomial]) -> Result<Polynomial> {
    let bctx = sys.base.ctx();
    let n = sys.n();
    let imgs: Vec<Polynomial> = (0..sys.ctx.len())
        .map(|i| if i < n { point[i].clone() } else { Polynomial::var(bctx, i - n) })
        .collect();
    Ok(p.embed(&sys.ctx)?.eval_map(&imgs, bctx))
}

fn jacobian_at(sys: &HenselSystem, point: &[Polynomial]) -> Result<PolyMatrix> {
    let entries = sys.jacobian().entries().iter().map(|e| at(sys, e, point)).collect::<Result<_>>()?;
    PolyMatrix::new(sys.base.ctx(), sys.n(), sys.n(), entries)
}

/// Which invariants fail at `state` for the ideal `i`.
pub fn newton_failures(sys: &HenselSystem, i: &[Polynomial], state: &NewtonState) -> Result<Vec<String>> {
    let bctx = sys.base.ctx();
    let pw = Ideal::new(bctx, i.iter().cloned()).power(1u32 << state.k);
    let mut out = Vec::new();
    for (j, f) in sys.eqs.iter().enumerate() {
        if !sys.base.in_ideal(&at(sys, f, &state.point)?, pw.gens())? {
            out.push(format!("f_{}(a) is not in I^{}", j + 1, 1u32 << state.k));
        }
    }
    let r = jacobian_at(sys, &state.point)?.mul(&state.u)?.add_scalar(&-&Polynomial::one(bctx))?;
    for e in r.entries() {
        if !sys.base.in_ideal(e, pw.gens())? {
            out.push(format!("Jac(a)·U is not the identity modulo I^{}", 1u32 << state.k));
            break;
        }
    }
    Ok(out)
}

/// The starting state at the origin with U = Jac(0)^{-1} modulo I when
/// Jac(0) is the identity modulo I, else U = adj(Jac(0)) scaled by the
/// inverse of det(Jac(0)) when that is a nonzero rational.
pub fn newton_start(sys: &HenselSystem, i: &[Polynomial]) -> Result<NewtonState> {
    let bctx = sys.base.ctx();
    let n = sys.n();
    let point = vec![Polynomial::zero(bctx); n];
    let j0 = jacobian_at(sys, &point)?;
    let det = j0.det_ff()?;
    let u = match det.constant_value() {
        Some(d) if !num_traits::Zero::is_zero(&d) => j0.adjugate()?.scale(&Polynomial::constant(bctx, crate::ring::q(1) / d)),
        _ => PolyMatrix::identity(bctx, n),
    };
    let st = NewtonState { point, u, k: 0 };
    let bad = newton_failures(sys, i, &st)?;
    if !bad.is_empty() {
        return Err(EngineError::Precondition(bad.join("; ")));
    }
    Ok(st)
}

/// b = a - U·f(a), U' = U·(2 - Jac(b)·U); both invariants are rechecked
/// modulo I^(2^(k+1)).
pub fn newton_step(sys: &HenselSystem, i: &[Polynomial], state: &NewtonState) -> Result<NewtonState> {
    let bctx = sys.base.ctx();
    let fa: Vec<Polynomial> = sys.eqs.iter().map(|f| at(sys, f, &state.point)).collect::<Result<_>>()?;
    let corr = state.u.mul_vec(&fa)?;
    let b: Vec<Polynomial> = state.point.iter().zip(&corr).map(|(a, c)| a - c).collect();
    let jb = jacobian_at(sys, &b)?;
    let two = Polynomial::int(bctx, 2);
    let inner = jb.mul(&state.u)?.scale(&-&Polynomial::one(bctx)).add_scalar(&two)?;
    let u = state.u.mul(&inner)?;
    let next = NewtonState { point: b, u, k: state.k + 1 };
    let bad = newton_failures(sys, i, &next)?;
    if !bad.is_empty() {
        return Err(EngineError::InvariantRecheckFailed(bad.join("; ")));
    }
    Ok(next)
}

#[cfg(test)]
mod tests {
    use super::super::system::tests::worked_example;
    use super::*;
    use crate::ideal::{AlgebraPresentation, Localization};
    use crate::ring::{poly, Vars};

    #[test]
    fn quadratic_growth_on_the_worked_example() {
        let s = worked_example();
        let a = s.base.ctx().clone();
        let m = s.maximal.clone();
        let st = newton_start(&s, &m).unwrap();
        let st1 = newton_step(&s, &m, &st).unwrap();
        assert_eq!(st1.point, vec![poly("a", &a), poly("b", &a)]);
        // f_1(a, b) = a·b^2 + 2a^2·b lies in I^3
        let f1 = at(&s, &s.eqs[0], &st1.point).unwrap();
        assert_eq!(f1, poly("a*b^2+2*a^2*b", &a));
        let mut cur = st1;
        for _ in 0..2 {
            cur = newton_step(&s, &m, &cur).unwrap();
        }
        assert_eq!(cur.k, 3);
    }

    #[test]
    fn exact_zero_is_fixed() {
        let a = Vars::new(&["a"]);
        let base = AlgebraPresentation::new(&a, vec![], Localization::PointIdeal(vec!["a".into()])).unwrap();
        let c = Vars::new(&["x", "a"]);
        let s = HenselSystem::new(&base, &[poly("a", &a)], &["x".into()], &[poly("x-a", &c)]).unwrap();
        let st = newton_start(&s, &s.maximal).unwrap();
        let st1 = newton_step(&s, &s.maximal, &st).unwrap();
        assert_eq!(st1.point, vec![poly("a", &a)]);
        let st2 = newton_step(&s, &s.maximal, &st1).unwrap();
        assert_eq!(st2.point, st1.point);
    }

    #[test]
    fn broken_state_is_reported() {
        let s = worked_example();
        let m = s.maximal.clone();
        let mut st = newton_start(&s, &m).unwrap();
        st.u = st.u.scale(&Polynomial::int(s.base.ctx(), 2));
        assert!(matches!(newton_step(&s, &m, &st), Err(EngineError::InvariantRecheckFailed(_))));
    }
}

//! One generator: B = A[x]/(relations) with p(x) ∈ I·B and p monic.
//!
//! A relation P(x) = 0 with P ≡ p mod I·A[X] gives an Emmanuel sequence
//! u_1..u_n whose ideal contains 1 modulo I·B.  Then s = Σ u_j g_j(u) lies in
//! 1 + I·B, and s, s·x live in the rank-n ring N, which certifies both.

use super::problem::{ZmtProblem, ZmtResult};
use crate::error::{EngineError, Result};
use crate::ideal::{member_traced, Algebra, Ideal};
use crate::integrality::{emmanuel, lying_over_unit, CoefficientLocation, IntegralityCertificate};
use crate::ring::{q, univ, Polynomial};

/// Coefficients of P over A with P(x) = 0 in B and P ≡ p mod I.
fn base_relation(b: &Algebra, x: &str, ideal: &[Polynomial], p: &[Polynomial]) -> Result<Vec<Polynomial>> {
    let octx = b.ctx();
    let xi = octx.require(x)?;
    let xv = Polynomial::var(octx, xi);
    let px = univ::horner(p, &xv);
    let igb = Ideal::new(octx, ideal.iter().cloned()).gb()?;
    let np = igb.reduce(&px);
    if !np.is_zero() {
        // a single relation that is a multiple of p modulo I
        let (lm, lc) = np.leading().cloned().unwrap();
        for r in b.relations().gens() {
            let nr = igb.reduce(r);
            let lam = nr.coeff(&lm) / &lc;
            if num_traits::Zero::is_zero(&lam) || nr != np.scale(&lam) {
                continue;
            }
            return Ok(r.scale(&(q(1) / lam)).coeffs_in(xi));
        }
    }
    let mut gens = ideal.to_vec();
    gens.extend(b.relations().gens().iter().cloned());
    let all = Ideal::new(octx, gens);
    let cof = member_traced(&px, &all)?.ok_or_else(|| EngineError::HypothesisNotSatisfied("p(x) is not in I·B".into()))?;
    let mut rel = px.clone();
    for (c, g) in cof.iter().zip(ideal) {
        rel = &rel - &(c * g);
    }
    Ok(rel.coeffs_in(xi))
}

pub fn zmt_base(p: &ZmtProblem) -> Result<ZmtResult> {
    if p.gens.len() != 1 {
        return Err(EngineError::Precondition("the base case takes exactly one generator".into()));
    }
    let b = &p.b;
    let octx = b.ctx();
    let xname = &p.gens[0];
    let x = p.gen(0);
    let rel = base_relation(b, xname, &p.ideal, &p.residual[0])?;
    let seq = emmanuel(b, &rel, &p.base_vars, &x)?;
    let bs: Vec<Polynomial> = seq.u[1..].to_vec();
    let unit = lying_over_unit(b, &bs, &p.base_vars, &p.ideal)?;
    let s = unit.value.clone();
    let loc = CoefficientLocation::OverBase;
    let (s_cert, sx_cert) = match &seq.ring {
        None => {
            let t = vec![Polynomial::zero(octx), Polynomial::one(octx)];
            let c = IntegralityCertificate::new(b, s.clone(), &p.base_vars, t.clone(), loc.clone(), "Emmanuel")?;
            let cx = IntegralityCertificate::new(b, &s * &x, &p.base_vars, t, loc, "Emmanuel")?;
            (c, cx)
        }
        Some(ring) => {
            let gens: Vec<(String, Vec<Polynomial>)> =
                unit.tags.iter().enumerate().map(|(j, t)| (t.clone(), ring.u(j + 1))).collect();
            let mut se = ring.scalar(&Polynomial::zero(ring.ctx()));
            let mut sxe = se.clone();
            for (j, g) in unit.g.iter().enumerate() {
                let gv = ring.eval(g, &gens)?;
                se = ring.add(&se, &ring.mul(&ring.u(j + 1), &gv));
                sxe = ring.add(&sxe, &ring.mul(&ring.ux(j + 1), &gv));
            }
            let c = IntegralityCertificate::new(b, s.clone(), &p.base_vars, ring.char_poly(&se)?, loc.clone(), "Emmanuel")?
                .with_provenance("LyingOver");
            let cx = IntegralityCertificate::new(b, &s * &x, &p.base_vars, ring.char_poly(&sxe)?, loc, "Emmanuel")?
                .with_provenance("LyingOver");
            (c, cx)
        }
    };
    crate::integrality::require_verified(&s_cert)?;
    crate::integrality::require_verified(&sx_cert)?;
    ZmtResult::assemble(p, s, s_cert, vec![sx_cert])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ideal::{AlgebraPresentation, Localization};
    use crate::ring::{poly, Vars};
    use crate::zmt::verify_zmt;

    #[test]
    fn already_integral() {
        let c = Vars::new(&["x", "a"]);
        let b = AlgebraPresentation::new(&c, vec![poly("x^2-a*x", &c)], Localization::None).unwrap();
        let res = vec![vec![poly("0", &c), poly("0", &c), poly("1", &c)]];
        let p = ZmtProblem::new(&b, &["a".into()], &["x".into()], &[poly("a", &c)], res).unwrap();
        let r = zmt_base(&p).unwrap();
        assert!(r.s.is_one());
        assert!(verify_zmt(&p, &r).unwrap().is_empty());
    }

    #[test]
    fn generator_in_the_ideal() {
        let c = Vars::new(&["x", "a"]);
        let b = AlgebraPresentation::new(&c, vec![poly("x-a", &c)], Localization::None).unwrap();
        let res = vec![vec![poly("0", &c), poly("1", &c)]];
        let p = ZmtProblem::new(&b, &["a".into()], &["x".into()], &[poly("a", &c)], res).unwrap();
        let r = zmt_base(&p).unwrap();
        assert!(verify_zmt(&p, &r).unwrap().is_empty());
    }

    #[test]
    fn first_step_of_the_two_equation_example() {
        let c = Vars::new(&["x", "y", "a", "b"]);
        let rels = vec![poly("-a + x + b*x*y + 2*b*x^2", &c), poly("-b + y + a*x^2 + a*x*y + b*y^2", &c)];
        let b = AlgebraPresentation::new(&c, rels, Localization::None).unwrap();
        let base: Vec<String> = ["a", "b", "x"].iter().map(|s| s.to_string()).collect();
        let res = vec![vec![poly("0", &c), poly("1", &c)]];
        let p = ZmtProblem::new(&b, &base, &["y".into()], &[poly("a", &c), poly("b", &c)], res).unwrap();
        let r = zmt_base(&p).unwrap();
        assert!(b.equal(&r.s, &poly("1+a*x+b*y", &c)).unwrap());
        assert!(verify_zmt(&p, &r).unwrap().is_empty());
        assert_eq!(r.s_cert.degree(), 2);
    }
}

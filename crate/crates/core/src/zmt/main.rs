//! The general driver.  With generators x_1..x_n, the problem over
//! A' = A[x_1] with generators x_2..x_n gives s with s, s·x_j integral over
//! A'.  A power t = s^N with p_1(x_1)·t ∈ √(I·A[x_1, t]) feeds the induction
//! step, the family it returns is turned into w ∈ 1 + I·B, and gluing w
//! with s gives u = w^M s with u and every u·x_j integral over A.

use super::base::zmt_base;
use super::problem::{ZmtProblem, ZmtResult};
use super::step::zmt_step;
use crate::error::{Caps, EngineError, Result};
use crate::ideal::{radical_member, Subalgebra};
use crate::integrality::{certify_expression, glue, lying_over_unit, CoefficientLocation, IntegralityCertificate};
use crate::ring::{univ, Polynomial, Vars};

pub fn zmt_main(p: &ZmtProblem) -> Result<ZmtResult> {
    let b = &p.b;
    let octx = b.ctx();
    match p.gens.len() {
        0 => {
            let one = Polynomial::one(octx);
            let c = IntegralityCertificate::new(
                b,
                one.clone(),
                &p.base_vars,
                vec![-&one, one.clone()],
                CoefficientLocation::OverBase,
                "Trivial",
            )?;
            return ZmtResult::assemble(p, one, c, vec![]);
        }
        1 => return zmt_base(p),
        _ => {}
    }
    let x1 = p.gens[0].clone();
    let mut inner_base = p.base_vars.clone();
    inner_base.push(x1.clone());
    let inner = ZmtProblem::new(b, &inner_base, &p.gens[1..], &p.ideal, p.residual[1..].to_vec())?;
    let r = zmt_main(&inner)?;
    let s = r.s.clone();
    let x = p.gen(0);
    let px = univ::horner(&p.residual[0], &x);

    // t = s^N with p(x)·t in the radical of I·A[x, t]
    let mut chosen = None;
    for n in 1..=Caps::current().exponent {
        let t = s.pow(n);
        let sub = Subalgebra::new(b, &p.base_vars, &[x.clone(), t.clone()], "G")?;
        let pt = sub.require_member(&(&px * &t))?;
        let mut gens: Vec<Polynomial> = sub.kernel().to_vec();
        gens.extend(p.ideal.iter().map(|g| g.embed_unchecked(sub.ctx())));
        if radical_member(&pt, &crate::ideal::Ideal::new(sub.ctx(), gens))?.member {
            chosen = Some((n, t));
            break;
        }
    }
    let (n, t) = chosen.ok_or(EngineError::ExponentCapExceeded { cap: Caps::current().exponent })?;
    let t_cert = if n == 1 {
        r.s_cert.clone()
    } else {
        let e = Vars::new(&["E0"]).extend(&inner_base);
        let tag = vec!["E0".to_string()];
        let expr = Polynomial::var(&e, 0).pow(n);
        certify_expression(b, &inner_base, std::slice::from_ref(&r.s_cert), &tag, &expr, "Power")?
    };
    let step = zmt_step(b, &p.base_vars, &x1, &t, &t_cert.coeffs, &p.ideal, &p.residual[0])?;

    // w = Σ b_k g_k(b) ≡ 1 mod I·B
    let unit = lying_over_unit(b, &step.bs, &p.base_vars, &p.ideal)?;
    let w = unit.value.clone();
    let nb = step.bs.len();
    let btags: Vec<String> = unit.tags.clone();
    let xtags: Vec<String> = (0..nb).map(|k| unit.ctx.fresh(&format!("X{k}_"))).collect();
    let ectx = unit.ctx.extend(&xtags);
    let mut wexpr = Polynomial::zero(&ectx);
    let mut wxexpr = Polynomial::zero(&ectx);
    for (k, g) in unit.g.iter().enumerate() {
        let g = g.embed(&ectx)?;
        wexpr = &wexpr + &(&Polynomial::var_named(&ectx, &btags[k])? * &g);
        wxexpr = &wxexpr + &(&Polynomial::var_named(&ectx, &xtags[k])? * &g);
    }
    let mut parts = step.b_certs.clone();
    parts.extend(step.bx_certs.iter().cloned());
    let mut tags = btags.clone();
    tags.extend(xtags.iter().cloned());
    let w_cert = certify_expression(b, &p.base_vars, &parts, &tags, &wexpr, "LyingOver")?;
    let wx_cert = certify_expression(b, &p.base_vars, &parts, &tags, &wxexpr, "LyingOver")?;
    if !b.equal(&w_cert.element, &w)? {
        return Err(EngineError::InvariantRecheckFailed("unit expression does not evaluate to w".into()));
    }

    let ys: Vec<Polynomial> = (1..p.gens.len()).map(|j| p.gen(j)).collect();
    let ty_rels: Vec<Vec<Polynomial>> = r.x_certs.iter().map(|c| c.coeffs.clone()).collect();
    let g = glue(b, &s, &x, &ys, &w_cert, &wx_cert, &r.s_cert.coeffs, &ty_rels, &x1, &p.base_vars)?;
    let mut x_certs = vec![g.wx_cert.clone()];
    x_certs.extend(g.wy_certs.iter().cloned());
    ZmtResult::assemble(p, g.w.clone(), g.w_cert.clone(), x_certs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ideal::{AlgebraPresentation, Localization};
    use crate::ring::poly;
    use crate::zmt::{find_residual, verify_zmt};

    #[test]
    fn no_generators() {
        let c = Vars::new(&["a"]);
        let b = AlgebraPresentation::polynomial_ring(&c);
        let p = ZmtProblem::new(&b, &["a".into()], &[], &[poly("a", &c)], vec![]).unwrap();
        let r = zmt_main(&p).unwrap();
        assert!(r.s.is_one());
        assert!(verify_zmt(&p, &r).unwrap().is_empty());
    }

    #[test]
    fn two_equation_system() {
        let c = Vars::new(&["x", "y", "a", "b"]);
        let rels = vec![poly("-a + x + b*x*y + 2*b*x^2", &c), poly("-b + y + a*x^2 + a*x*y + b*y^2", &c)];
        let b = AlgebraPresentation::new(&c, rels, Localization::None).unwrap();
        let base = vec!["a".to_string(), "b".to_string()];
        let gens = vec!["x".to_string(), "y".to_string()];
        let ideal = vec![poly("a", &c), poly("b", &c)];
        let res = find_residual(&b, &base, &gens, &ideal).unwrap();
        let p = ZmtProblem::new(&b, &base, &gens, &ideal, res).unwrap();
        let r = zmt_main(&p).unwrap();
        assert!(verify_zmt(&p, &r).unwrap().is_empty());
        assert!(b.in_ideal(&(&r.s - &poly("1", &c)), &ideal).unwrap());
        // u = t·w^2 with t = 1+ax+by, w = 1+2bx+by and its quartic
        let u = poly("(1+a*x+b*y)*(1+2*b*x+b*y)^2", &c);
        assert!(b.equal(&r.s, &u).unwrap());
        let f = poly(
            "-U^4 + (1+4*a*b+a^2+3*b^2)*U^3 \
             + b*(b^5+8*a*b^4+7*a^2*b^3-a^3*b^2-4*b*a^4+a^5-6*a^2*b-a^3+4*a*b^2)*U^2 \
             - a^2*b^2*(a-b)*(a+2*b)*(2*b^2-9*a*b+a^2)*U + a^4*b^3*(a-4*b)*(a+2*b)^2*(a-b)^2",
            &Vars::new(&["U", "a", "b"]),
        );
        let coeffs: Vec<Polynomial> = f.coeffs_in(0).iter().map(|q| -&q.embed(&c).unwrap()).collect();
        let cert = IntegralityCertificate::new(&b, u, &base, coeffs, CoefficientLocation::OverBase, "Worked").unwrap();
        assert_eq!(crate::integrality::verify_cert(&cert), Ok(()));
    }

    #[test]
    fn generators_already_in_the_ideal() {
        let c = Vars::new(&["x", "y", "a", "b"]);
        let b = AlgebraPresentation::new(&c, vec![poly("x^2-a*x", &c), poly("y^2-b*y", &c)], Localization::None).unwrap();
        let base = vec!["a".to_string(), "b".to_string()];
        let gens = vec!["x".to_string(), "y".to_string()];
        let ideal = vec![poly("a", &c), poly("b", &c)];
        let res = find_residual(&b, &base, &gens, &ideal).unwrap();
        let p = ZmtProblem::new(&b, &base, &gens, &ideal, res).unwrap();
        let r = zmt_main(&p).unwrap();
        assert!(verify_zmt(&p, &r).unwrap().is_empty());
    }
}

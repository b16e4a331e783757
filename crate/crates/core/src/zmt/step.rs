//! The induction step: t integral over A[x] with p(x)·t ∈ √(I·B) gives
//! elements b_k of B with b_k, b_k·x integral over A and ⟨b⟩ meeting
//! t^N + I·B.
//!
//! With y = p(x) the work happens in S = A[y, t] ⊆ B, where x is integral
//! over A[y].  The crucial lemma either puts t in √(I·S), and the zero
//! family works, or produces a shifted element v integral over A.  When v·y
//! lies in A[v] and ⟨v⟩ meets t^N + I·B, the family is {v}; b·x is then
//! certified from b and b·y through the relation p(x) = y, or by
//! elimination when v·y is outside A[v].

use crate::crucial::{crucial_lemma, CrucialBranch, CrucialWitness};
use crate::error::{Caps, EngineError, Result};
use crate::ideal::{member_traced, radical_member, subalg_member, Algebra, AlgebraPresentation, Ideal, Localization, Subalgebra};
use crate::integrality::{
    certify_expression, require_verified, CoefficientLocation, IntegralityCertificate, Tower,
};
use crate::ring::{univ, Polynomial, Vars};
use super::problem::element_relation;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StepRoute {
    /// t^m ∈ I·S: the family {0}
    Radical,
    /// the shifted element of the crucial lemma
    Shifted,
}

#[derive(Clone, Debug)]
pub struct StepResult {
    pub bs: Vec<Polynomial>,
    pub b_certs: Vec<IntegralityCertificate>,
    pub bx_certs: Vec<IntegralityCertificate>,
    /// N and cofactors with t^N = Σ c_k b_k + (element of I·B)
    pub meet_exponent: u32,
    pub meet_cofactors: Vec<Polynomial>,
    pub crucial: CrucialWitness,
    pub route: StepRoute,
}

fn t_cert(owner: &Algebra, e: Polynomial, vars: &[String]) -> Result<IntegralityCertificate> {
    let ctx = owner.ctx();
    IntegralityCertificate::new(owner, e, vars, vec![Polynomial::zero(ctx), Polynomial::one(ctx)], CoefficientLocation::OverBase, "Step")
}

/// Relation for t over A[Y] from its relation over A[X] and p(X) = Y;
/// coefficients are returned as polynomials in coeff_vars and `yname`.
fn relation_over_y(coeff_vars: &[String], xvar: &str, p: &[Polynomial], t_rel: &[Polynomial], yname: &str) -> Result<Vec<Polynomial>> {
    let mut names = coeff_vars.to_vec();
    names.push(yname.to_string());
    let mut tower = Tower::new(&names);
    let bctx = tower.base_ctx();
    let yv = Polynomial::var(&bctx, names.len() - 1);
    let mut pc: Vec<Polynomial> = p.iter().map(|c| c.embed(&bctx)).collect::<Result<_>>()?;
    pc[0] = &pc[0] - &yv;
    let xl = tower.push(&bctx.fresh("X"), &pc)?;
    let rel_names: Vec<String> = coeff_vars.iter().cloned().chain([xvar.to_string()]).collect();
    let rctx = Vars::new(&rel_names);
    let tctx = tower.ctx().clone();
    let imgs: Vec<Polynomial> = (0..rel_names.len())
        .map(|i| if i + 1 == rel_names.len() { xl.clone() } else { Polynomial::var(&tctx, i) })
        .collect();
    let cs: Vec<Polynomial> = t_rel.iter().map(|c| Ok(c.embed(&rctx)?.eval_map(&imgs, &tctx))).collect::<Result<_>>()?;
    let tl = tower.push(&tctx.fresh("T"), &cs)?;
    tower.min_poly(&tl)
}

/// `t_rel`: monic relation for t with coefficients in coeff_vars and `xvar`;
/// `p`: monic over coeff_vars with p(x)·t ∈ √(I·B).
pub fn zmt_step(
    b: &Algebra,
    coeff_vars: &[String],
    xvar: &str,
    t: &Polynomial,
    t_rel: &[Polynomial],
    ideal: &[Polynomial],
    p: &[Polynomial],
) -> Result<StepResult> {
    let octx = b.ctx();
    let x = Polynomial::var_named(octx, xvar)?;
    let t = t.embed(octx)?;
    let p: Vec<Polynomial> = p.iter().map(|c| c.embed(octx)).collect::<Result<_>>()?;
    if !p.last().is_some_and(|c| c.is_one()) {
        return Err(EngineError::Precondition("p must be monic".into()));
    }
    let y = univ::horner(&p, &x);
    let ib = b.relations().with(ideal);
    if !radical_member(&(&y * &t), &ib)?.member {
        return Err(EngineError::HypothesisNotSatisfied("p(x)·t is not in the radical of I·B".into()));
    }
    let direct = p.len() == 2 && p[0].is_zero();

    // S = A[y, t] presented by its kernel; tags G0 = y, G1 = t
    let sub = Subalgebra::new(b, coeff_vars, &[y.clone(), t.clone()], "G")?;
    let s = AlgebraPresentation::new(sub.ctx(), sub.kernel().to_vec(), Localization::None)?;
    let sctx = s.ctx().clone();
    let yname = sub.tags()[0].clone();
    let rel_y = if direct {
        t_rel.to_vec()
    } else {
        relation_over_y(coeff_vars, xvar, &p, t_rel, &yname)?
    };
    let from_names: Vec<String> = coeff_vars.iter().cloned().chain([if direct { xvar.to_string() } else { yname.clone() }]).collect();
    let fctx = Vars::new(&from_names);
    let imgs: Vec<Polynomial> = (0..from_names.len())
        .map(|i| if i + 1 == from_names.len() { sub.tag(0) } else { Polynomial::var_named(&sctx, &from_names[i]).unwrap() })
        .collect();
    let rel_s: Vec<Polynomial> = rel_y.iter().map(|c| Ok(c.embed(&fctx)?.eval_map(&imgs, &sctx))).collect::<Result<_>>()?;
    let ideal_s: Vec<Polynomial> = ideal.iter().map(|g| g.embed(&sctx)).collect::<Result<_>>()?;
    let w = crucial_lemma(&s, coeff_vars, &[], &sub.tag(0), &sub.tag(1), &rel_s, &yname, &ideal_s)?;

    let (bs, b_certs, bx_certs, route) = match w.branch {
        CrucialBranch::Radical => {
            let z = Polynomial::zero(octx);
            (vec![z.clone()], vec![t_cert(b, z.clone(), coeff_vars)?], vec![t_cert(b, z, coeff_vars)?], StepRoute::Radical)
        }
        _ => {
            let vc = w.new_elements.last().unwrap();
            let v = sub.evaluate(&vc.element)?;
            let v_cert = IntegralityCertificate::new(b, v.clone(), coeff_vars, vc.coeffs.clone(), CoefficientLocation::OverBase, "Crucial")?
                .with_provenance("Shift");
            require_verified(&v_cert)?;
            let vx_cert = match subalg_member(b, coeff_vars, std::slice::from_ref(&v), &(&v * &y))? {
                Some(h) => {
                    let htag = h.ctx().names()[0].clone();
                    let vy_cert = certify_expression(b, coeff_vars, std::slice::from_ref(&v_cert), &[htag], &h, "Step")?;
                    if direct {
                        vy_cert
                    } else {
                        times_x(b, coeff_vars, &p, &v_cert, &vy_cert, &x)?
                    }
                }
                None => {
                    // v·x directly, by elimination
                    let vx = &v * &x;
                    let cs = element_relation(b, coeff_vars, &vx)?.ok_or_else(|| {
                        EngineError::Unsupported("no relation found for the shifted element times x".into())
                    })?;
                    let c = IntegralityCertificate::new(b, vx, coeff_vars, cs, CoefficientLocation::OverBase, "Step")?;
                    require_verified(&c)?;
                    c
                }
            };
            (vec![v], vec![v_cert], vec![vx_cert], StepRoute::Shifted)
        }
    };

    // ⟨b⟩ meets t^N + I·B
    let mut gens = bs.clone();
    gens.extend(ideal.iter().cloned());
    gens.extend(b.relations().gens().iter().cloned());
    let all = Ideal::new(octx, gens);
    for n in 1..=Caps::current().exponent {
        if let Some(cof) = member_traced(&t.pow(n), &all)? {
            let meet_cofactors = cof[..bs.len()].to_vec();
            return Ok(StepResult { bs, b_certs, bx_certs, meet_exponent: n, meet_cofactors, crucial: w, route });
        }
    }
    Err(EngineError::MembershipSearchExhausted("no power of t lies in ⟨b⟩ + I·B".into()))
}

/// b·x from b and b·y with y = p(x): Z = b·x satisfies
/// Z^k + Σ_{i<k} p_i b^(k-i) Z^i - b^(k-1)·(b·y) = 0.
fn times_x(
    owner: &Algebra,
    coeff_vars: &[String],
    p: &[Polynomial],
    bc: &IntegralityCertificate,
    byc: &IntegralityCertificate,
    x: &Polynomial,
) -> Result<IntegralityCertificate> {
    let k = p.len() - 1;
    let mut tower = Tower::new(coeff_vars);
    let bctx = tower.base_ctx();
    let emb = |c: &IntegralityCertificate| -> Result<Vec<Polynomial>> { c.coeffs.iter().map(|q| q.embed(&bctx)).collect() };
    let bl = tower.push("Lb", &emb(bc)?)?;
    let vl = tower.push("Lv", &emb(byc)?)?;
    let tctx = tower.ctx().clone();
    let bl = bl.embed_unchecked(&tctx);
    let mut zc: Vec<Polynomial> = (0..k).map(|i| &p[i].embed(&bctx).unwrap().embed_unchecked(&tctx) * &bl.pow((k - i) as u32)).collect();
    zc[0] = &zc[0] - &(&bl.pow(k as u32 - 1) * &vl);
    zc.push(Polynomial::one(&tctx));
    let zl = tower.push("Lz", &zc)?;
    let mp = tower.min_poly(&zl)?;
    let octx = owner.ctx();
    let cs: Vec<Polynomial> = mp.iter().map(|c| c.embed(octx)).collect::<Result<_>>()?;
    let cert = IntegralityCertificate::new(owner, &bc.element * x, coeff_vars, cs, CoefficientLocation::OverBase, "Step")?;
    require_verified(&cert)?;
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ideal::AlgebraPresentation;
    use crate::integrality::verify_cert;
    use crate::ring::poly;

    fn example() -> (Algebra, Vec<String>) {
        let c = Vars::new(&["x", "y", "a", "b"]);
        let rels = vec![poly("-a + x + b*x*y + 2*b*x^2", &c), poly("-b + y + a*x^2 + a*x*y + b*y^2", &c)];
        (AlgebraPresentation::new(&c, rels, Localization::None).unwrap(), vec!["a".into(), "b".into()])
    }

    #[test]
    fn two_equation_example_gives_the_shifted_element() {
        let (b, vars) = example();
        let c = b.ctx().clone();
        let t = poly("1+a*x+b*y", &c);
        let rel = vec![poly("-b^2+a*b*x^2", &c), poly("-(1+a*x)", &c), poly("1", &c)];
        let ideal = vec![poly("a", &c), poly("b", &c)];
        let p = vec![poly("0", &c), poly("1", &c)];
        let r = zmt_step(&b, &vars, "x", &t, &rel, &ideal, &p).unwrap();
        assert_eq!(r.route, StepRoute::Shifted);
        assert!(b.equal(&r.bs[0], &poly("1+2*b*x+b*y", &c)).unwrap());
        assert_eq!(r.meet_exponent, 1);
        for cert in r.b_certs.iter().chain(&r.bx_certs) {
            assert_eq!(verify_cert(cert), Ok(()));
        }
        assert!(b.equal(&r.bx_certs[0].element, &poly("a", &c)).unwrap());
    }

    #[test]
    fn element_in_the_radical() {
        let c = Vars::new(&["x", "t", "a"]);
        let b = AlgebraPresentation::new(&c, vec![poly("t^2-a*t", &c), poly("x^2-a", &c)], Localization::None).unwrap();
        let rel = vec![poly("0", &c), poly("-a", &c), poly("1", &c)];
        let ideal = vec![poly("a", &c)];
        let p = vec![poly("0", &c), poly("1", &c)];
        let r = zmt_step(&b, &["a".into()], "x", &poly("t", &c), &rel, &ideal, &p).unwrap();
        assert_eq!(r.route, StepRoute::Radical);
        assert!(r.bs[0].is_zero());
    }

    #[test]
    fn unit_ideal_collapses() {
        let c = Vars::new(&["x", "a"]);
        let b = AlgebraPresentation::new(&c, vec![poly("x^2-a", &c)], Localization::None).unwrap();
        let rel = vec![poly("-1", &c), poly("1", &c)];
        let p = vec![poly("0", &c), poly("1", &c)];
        let r = zmt_step(&b, &["a".into()], "x", &poly("1", &c), &rel, &[poly("1", &c)], &p).unwrap();
        assert_eq!(r.route, StepRoute::Radical);
    }

    #[test]
    fn substitution_through_p() {
        let c = Vars::new(&["x", "a"]);
        let b = AlgebraPresentation::new(&c, vec![poly("x^3-a*x", &c)], Localization::None).unwrap();
        let rel = vec![poly("-1", &c), poly("1", &c)];
        let p = vec![poly("0", &c), poly("0", &c), poly("1", &c)];
        // t = 1 is integral over A[x]; p(x)·1 = x^2 with x^4 = a x^2 ∈ I·B
        let r = zmt_step(&b, &["a".into()], "x", &poly("1", &c), &rel, &[poly("a", &c)], &p);
        let r = r.unwrap();
        for cert in r.b_certs.iter().chain(&r.bx_certs) {
            assert_eq!(verify_cert(cert), Ok(()));
        }
    }
}

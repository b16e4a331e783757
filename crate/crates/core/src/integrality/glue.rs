//! Gluing: from t, t·y_k integral over R[x] and s, s·x integral over R, the
//! element w = s^N t has w, w·x, w·y_k integral over R for N large enough.
//!
//! For P(T) = Σ c_k(x) T^k of degree n, z = s^e t is a root of
//! Z^n + Σ_k s^(e(n-k)) c_k(x) Z^k, whose coefficients are polynomials in s
//! and s·x as soon as every x-degree i in c_k satisfies i ≤ e(n-k).  Writing
//! e(P) for the least such e, N = max(e(P_t) + 1, e(P_ty_k)) works with
//! w = S^(N-e)·Z, w·x = V·S^(N-1-e)·Z and w·y_k = S^(N-e_k)·Z_k.  The
//! certificates come from minimal polynomials in the formal tower R[S, V, Z]
//! with V standing for s·x.
use super::cert::{require_verified, CoefficientLocation, IntegralityCertificate};
use super::tower::Tower;
use crate::error::{EngineError, Result};
use crate::ideal::Algebra;
use crate::ring::{Polynomial, Vars};

#[derive(Clone, Debug)]
pub struct GlueResult {
    pub n: u32,
    pub w: Polynomial,
    pub w_cert: IntegralityCertificate,
    pub wx_cert: IntegralityCertificate,
    pub wy_certs: Vec<IntegralityCertificate>,
}

/// Least e with deg_x c_k ≤ e·(n - k) for every k < n.
fn exponent_bound(rel: &[Polynomial], xi: usize) -> u32 {
    let n = rel.len() - 1;
    rel[..n]
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(k, c)| c.degree_in(xi).div_ceil((n - k) as u32))
        .max()
        .unwrap_or(0)
}

/// Coefficients of the relation for s^d·t given P(T) = Σ c_k(x) T^k, in the
/// tower context where `sv` and `vv` are the S and V layers.
fn scaled_relation(rel: &[Polynomial], xi: usize, d: u32, sv: &Polynomial, vv: &Polynomial) -> Vec<Polynomial> {
    let n = rel.len() - 1;
    let tctx = sv.ctx();
    rel.iter()
        .enumerate()
        .map(|(k, c)| {
            let total = d * (n - k) as u32;
            let mut acc = Polynomial::zero(tctx);
            for (i, part) in c.coeffs_in(xi).iter().enumerate() {
                if part.is_zero() {
                    continue;
                }
                let i = i as u32;
                let term = &(&vv.pow(i) * &sv.pow(total - i)) * &part.embed_unchecked(tctx);
                acc = &acc + &term;
            }
            acc
        })
        .collect()
}

/// `t_rel` and `ty_rels[k]` are monic relations for t and t·y_k whose
/// coefficients are polynomials in `coeff_vars` and `xvar` (standing for x).
#[allow(clippy::too_many_arguments)]
pub fn glue(
    owner: &Algebra,
    t: &Polynomial,
    x: &Polynomial,
    ys: &[Polynomial],
    s: &IntegralityCertificate,
    sx: &IntegralityCertificate,
    t_rel: &[Polynomial],
    ty_rels: &[Vec<Polynomial>],
    xvar: &str,
    coeff_vars: &[String],
) -> Result<GlueResult> {
    let octx = owner.ctx();
    if ys.len() != ty_rels.len() {
        return Err(EngineError::ShapeError("one relation per y is required".into()));
    }
    for r in std::iter::once(t_rel).chain(ty_rels.iter().map(|r| r.as_slice())) {
        if !r.last().is_some_and(|c| c.is_one()) || r.len() < 2 {
            return Err(EngineError::Precondition("the relations must be monic of positive degree".into()));
        }
    }
    let names: Vec<String> = coeff_vars.iter().cloned().chain([xvar.to_string()]).collect();
    let rctx = Vars::new(&names);
    let xi = rctx.len() - 1;
    let t_rel: Vec<Polynomial> = t_rel.iter().map(|c| c.embed(&rctx)).collect::<Result<_>>()?;
    let ty_rels: Vec<Vec<Polynomial>> = ty_rels
        .iter()
        .map(|r| r.iter().map(|c| c.embed(&rctx)).collect::<Result<_>>())
        .collect::<Result<_>>()?;
    let e_t = exponent_bound(&t_rel, xi);
    let e_y: Vec<u32> = ty_rels.iter().map(|r| exponent_bound(r, xi)).collect();
    let n = e_y.iter().copied().fold(e_t + 1, u32::max);
    let t = t.embed(octx)?;
    let x = x.embed(octx)?;
    let ys: Vec<Polynomial> = ys.iter().map(|y| y.embed(octx)).collect::<Result<_>>()?;
    let sval = s.element.clone();
    if !owner.equal(&sx.element, &(&sval * &x))? {
        return Err(EngineError::Precondition("the second certificate must be for s·x".into()));
    }
    let w = &sval.pow(n) * &t;
    let mut targets = vec![(w.clone(), false, None), (&w * &x, true, None)];
    for (k, y) in ys.iter().enumerate() {
        targets.push((&w * y, false, Some(k)));
    }
    let mut certs = Vec::new();
    for (elem, times_x, times_y) in targets {
        let mut tower = Tower::new(coeff_vars);
        let scoeffs: Vec<Polynomial> = s.coeffs.iter().map(|c| c.embed(&tower.base_ctx())).collect::<Result<_>>()?;
        let sv = tower.push("S", &scoeffs)?;
        let vcoeffs: Vec<Polynomial> = sx.coeffs.iter().map(|c| c.embed(&tower.base_ctx())).collect::<Result<_>>()?;
        let vv = tower.push("V", &vcoeffs)?;
        let sv = sv.embed_unchecked(tower.ctx());
        let (rel, e) = match times_y {
            Some(k) => (&ty_rels[k], e_y[k]),
            None => (&t_rel, e_t),
        };
        let zc = scaled_relation(rel, xi, e, &sv, &vv);
        let z = tower.push("Z", &zc)?;
        let sv = sv.embed_unchecked(tower.ctx());
        let vv = vv.embed_unchecked(tower.ctx());
        // Z = s^e·t (or s^e·t·y)
        let target = if times_x { &(&vv * &sv.pow(n - 1 - e)) * &z } else { &sv.pow(n - e) * &z };
        let mp = tower.min_poly(&target)?;
        let cs: Vec<Polynomial> = mp.iter().map(|c| c.embed(octx)).collect::<Result<_>>()?;
        let cert = IntegralityCertificate::new(owner, elem, coeff_vars, cs, CoefficientLocation::OverBase, "Glue")?.inherit([s, sx]);
        require_verified(&cert)?;
        certs.push(cert);
    }
    let wy_certs = certs.split_off(2);
    let wx_cert = certs.pop().unwrap();
    let w_cert = certs.pop().unwrap();
    Ok(GlueResult { n, w, w_cert, wx_cert, wy_certs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ideal::{AlgebraPresentation, Localization};
    use crate::integrality::verify_cert;
    use crate::ring::poly;

    fn over_base(owner: &Algebra, e: &str, cs: &[&str], vars: &[String]) -> IntegralityCertificate {
        let c = owner.ctx();
        let cs = cs.iter().map(|s| poly(s, c)).collect();
        IntegralityCertificate::new(owner, poly(e, c), vars, cs, CoefficientLocation::OverBase, "input").unwrap()
    }

    #[test]
    fn elements_of_the_base_glue_with_exponent_one() {
        let c = Vars::new(&["x", "y", "a"]);
        let b = AlgebraPresentation::polynomial_ring(&c);
        let vars = vec!["a".to_string()];
        let zero = poly("0", &c);
        let s = over_base(&b, "a", &["-a", "1"], &vars);
        let sx = over_base(&b, "0", &["0", "1"], &vars);
        let t_rel = vec![poly("-2", &c), poly("1", &c)];
        let ty_rel = vec![poly("0", &c), poly("1", &c)];
        let g = glue(&b, &poly("2", &c), &zero, std::slice::from_ref(&zero), &s, &sx, &t_rel, &[ty_rel], "x", &vars).unwrap();
        assert_eq!(g.n, 1);
        assert_eq!(g.w, poly("2*a", &c));
        for cert in [&g.w_cert, &g.wx_cert, &g.wy_certs[0]] {
            assert_eq!(verify_cert(cert), Ok(()));
        }
    }

    #[test]
    fn two_variable_local_example() {
        let c = Vars::new(&["x", "y", "a", "b"]);
        let rels = vec![poly("-a + x + b*x*y + 2*b*x^2", &c), poly("-b + y + a*x^2 + a*x*y + b*y^2", &c)];
        let b = AlgebraPresentation::new(&c, rels, Localization::None).unwrap();
        let vars = vec!["a".to_string(), "b".to_string()];
        let t = poly("1+a*x+b*y", &c);
        let t_rel = vec![poly("-b^2+a*b*x^2", &c), poly("-(1+a*x)", &c), poly("1", &c)];
        let ty_rel = vec![poly("-(b-a*x^2)", &c), poly("1", &c)];
        // s = 1+2bx+by with s·x = a; its quartic was obtained by elimination
        let s = over_base(
            &b,
            "1+2*b*x+b*y",
            &["4*a^2*b^2-a^3*b", "2*a*b-a^2", "a^2-4*a*b-b^2", "-1", "1"],
            &vars,
        );
        let sx = over_base(&b, "a", &["-a", "1"], &vars);
        let g = glue(&b, &t, &poly("x", &c), &[poly("y", &c)], &s, &sx, &t_rel, &[ty_rel], "x", &vars).unwrap();
        // u = t·w^2, as in the worked example
        assert_eq!(g.n, 2);
        assert!(b.equal(&g.w, &poly("(1+a*x+b*y)*(1+2*b*x+b*y)^2", &c)).unwrap());
        for cert in [&g.w_cert, &g.wx_cert, &g.wy_certs[0]] {
            assert_eq!(verify_cert(cert), Ok(()));
            assert!(cert.degree() <= 8);
        }
    }

    #[test]
    fn mismatched_certificates_are_rejected() {
        let c = Vars::new(&["x", "a"]);
        let b = AlgebraPresentation::polynomial_ring(&c);
        let vars = vec!["a".to_string()];
        let s = over_base(&b, "a", &["-a", "1"], &vars);
        let rel = vec![poly("0", &c), poly("1", &c)];
        let err = glue(&b, &poly("0", &c), &poly("x", &c), &[poly("0", &c)], &s, &s, &rel, std::slice::from_ref(&rel), "x", &vars);
        assert!(matches!(err, Err(EngineError::Precondition(_))));
    }
}

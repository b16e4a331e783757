//! Shifting an element integral over R[x] into one integral over R.
//!
//! If t is integral over R[x] and t·p(x) = r(x) with p monic, then Euclidean
//! division r = p·q + r_1 gives v = t - q(x) with v·p(x) = r_1(x), and v is a
//! root of the monic Res_X(V·p(X) - r_1(X), P(X, V + q(X))) in V.  For a
//! leading coefficient a_k of p that is not a unit, the same is done for
//! a_k^m·t over R[a_k x].

use super::cert::{require_verified, verify_cert, CoefficientLocation, IntegralityCertificate};
use crate::error::{EngineError, Result};
use crate::ideal::{Algebra, Subalgebra};
use crate::ring::{univ, Ctx, Polynomial, Vars};

#[derive(Clone, Debug)]
pub struct ShiftResult {
    /// q as an owner element (q(x), or q(a_k x) in the general case)
    pub q: Polynomial,
    /// power of the leading coefficient of p multiplying t
    pub m: u32,
    /// the element a_k^m·t - q, integral over R
    pub element: Polynomial,
    pub cert: IntegralityCertificate,
}

struct Formal {
    ctx: Ctx,
    x: usize,
    v: usize,
}

impl Formal {
    fn new(coeff_vars: &[String], xname: &str) -> Self {
        let base = Vars::new(coeff_vars);
        let xn = base.fresh(xname);
        let with_x = base.extend(&[xn.as_str()]);
        let vn = with_x.fresh("V");
        let ctx = with_x.extend(&[vn.as_str()]);
        Formal { x: ctx.len() - 2, v: ctx.len() - 1, ctx }
    }

    fn var(&self, i: usize) -> Polynomial {
        Polynomial::var(&self.ctx, i)
    }

    fn univariate(&self, coeffs: &[Polynomial]) -> Polynomial {
        let mut acc = Polynomial::zero(&self.ctx);
        for c in coeffs.iter().rev() {
            acc = &(&acc * &self.var(self.x)) + &c.embed_unchecked(&self.ctx);
        }
        acc
    }

    /// Image of a formal polynomial in X and R in the owner, with X ↦ x.
    fn to_owner(&self, p: &Polynomial, x: &Polynomial) -> Polynomial {
        let octx = x.ctx();
        let images: Vec<Polynomial> = self
            .ctx
            .names()
            .iter()
            .enumerate()
            .map(|(i, n)| if i == self.x { x.clone() } else if i == self.v { Polynomial::zero(octx) } else { Polynomial::var_named(octx, n).unwrap() })
            .collect();
        p.eval_map(&images, octx)
    }
}

/// Monic case: p monic in X, t·p(x) = r(x), P(t) = 0 with P's coefficients
/// in R[X].  All formal inputs live in `fm.ctx`.
fn shift_monic(
    owner: &Algebra,
    t: &Polynomial,
    x: &Polynomial,
    fm: &Formal,
    p: &Polynomial,
    r: &Polynomial,
    rel: &[Polynomial],
    coeff_vars: &[String],
    m: u32,
) -> Result<ShiftResult> {
    let octx = owner.ctx();
    let (q, r1) = univ::divide_by_monic(r, p, fm.x);
    let qo = fm.to_owner(&q, x);
    let v_elem = t - &qo;
    let loc = CoefficientLocation::OverBase;
    let vars = coeff_vars.to_vec();
    let make = |coeffs: Vec<Polynomial>| -> Result<IntegralityCertificate> {
        let cs = coeffs.iter().map(|c| c.embed(octx)).collect::<Result<Vec<_>>>()?;
        IntegralityCertificate::new(owner, v_elem.clone(), &vars, cs, loc.clone(), "Shift")
    };
    if p.degree_in(fm.x) == 0 {
        // p = 1, so v = r_1 = 0
        let c = make(vec![Polynomial::zero(&fm.ctx), Polynomial::one(&fm.ctx)])?;
        require_verified(&c)?;
        return Ok(ShiftResult { q: qo, m, element: v_elem, cert: c });
    }
    let vv = fm.var(fm.v);
    let a = &(&vv * p) - &r1;
    let shifted = &vv + &q;
    let mut b = Polynomial::zero(&fm.ctx);
    for c in rel.iter().rev() {
        b = &(&b * &shifted) + c;
    }
    let res = univ::resultant(&a, &b, fm.x)?;
    let mut coeffs = res.coeffs_in(fm.v);
    let lc = coeffs.last().and_then(|c| c.constant_value()).filter(|c| !num_traits::Zero::is_zero(c));
    let lc = lc.ok_or_else(|| EngineError::InvariantRecheckFailed("resultant is not monic in V".into()))?;
    coeffs = coeffs.iter().map(|c| c.scale(&(crate::ring::q(1) / &lc))).collect();
    let mut cert = make(coeffs)?;
    require_verified(&cert)?;
    while cert.coeffs.len() > 2 && cert.coeffs[0].is_zero() {
        let trimmed = make(cert.coeffs[1..].to_vec())?;
        if verify_cert(&trimmed).is_err() {
            break;
        }
        cert = trimmed;
    }
    Ok(ShiftResult { q: qo, m, element: v_elem, cert })
}

/// Shift certificate for t.  `p` are the coefficients of p over R (owner
/// polynomials in `coeff_vars`); `rel` is a monic relation P(Y) for t whose
/// coefficients are polynomials in `coeff_vars` and the variable `xvar`
/// standing for x.
pub fn shift_cert(
    owner: &Algebra,
    t: &Polynomial,
    x: &Polynomial,
    p: &[Polynomial],
    rel: &[Polynomial],
    xvar: &str,
    coeff_vars: &[String],
) -> Result<ShiftResult> {
    let octx = owner.ctx();
    let t = t.embed(octx)?;
    let x = x.embed(octx)?;
    let mut p: Vec<Polynomial> = p.to_vec();
    while p.len() > 1 && p.last().unwrap().is_zero() {
        p.pop();
    }
    if p.is_empty() || p.last().unwrap().is_zero() {
        return Err(EngineError::Precondition("p must be nonzero".into()));
    }
    if !rel.last().is_some_and(|c| c.is_one()) {
        return Err(EngineError::Precondition("the relation for t must be monic".into()));
    }
    let fm = Formal::new(coeff_vars, xvar);
    let rctx = Vars::new(coeff_vars);
    let p: Vec<Polynomial> = p.iter().map(|c| c.embed(&rctx)).collect::<Result<_>>()?;
    // formal coefficients of the relation, with xvar renamed to the formal X
    let rel_names: Vec<String> = coeff_vars.iter().cloned().chain([xvar.to_string()]).collect();
    let rel_ctx = Vars::new(&rel_names);
    let rel_img: Vec<Polynomial> = (0..rel_names.len()).map(|i| fm.var(i)).collect();
    let rel: Vec<Polynomial> =
        rel.iter().map(|c| Ok(c.embed(&rel_ctx)?.eval_map(&rel_img, &fm.ctx))).collect::<Result<_>>()?;
    // the witness r with t·p(x) = r(x)
    let px = univ::horner(&p.iter().map(|c| c.embed_unchecked(octx)).collect::<Vec<_>>(), &x);
    let sub = Subalgebra::new(owner, coeff_vars, std::slice::from_ref(&x), "Y")?;
    let w = sub.member(&(&t * &px))?.ok_or_else(|| {
        EngineError::SubalgebraWitnessMissing(format!("t·p(x) is not in the subalgebra generated by {x}"))
    })?;
    let w_img: Vec<Polynomial> = (0..sub.ctx().len())
        .map(|i| if i == 0 { fm.var(fm.x) } else { Polynomial::var_named(&fm.ctx, &sub.ctx().names()[i]).unwrap() })
        .collect();
    let r = w.eval_map(&w_img, &fm.ctx);
    let k = p.len() - 1;
    let ak = p[k].clone();
    if let Some(c) = ak.constant_value() {
        let inv = crate::ring::q(1) / c;
        let pm = fm.univariate(&p.iter().map(|c| c.scale(&inv)).collect::<Vec<_>>());
        return shift_monic(owner, &t, &x, &fm, &pm, &r.scale(&inv), &rel, coeff_vars, 0);
    }
    // general case: y = a_k x, t' = a_k^m t with m = max(ℓ, deg r - k + 1)
    let n = rel.len() - 1;
    let ell = rel.iter().map(|c| c.degree_in(fm.x)).max().unwrap_or(0);
    let deg_r = r.degree_in(fm.x);
    let m = ell.max((deg_r + 1).saturating_sub(k as u32));
    let akf = ak.embed_unchecked(&fm.ctx);
    // c'_i(Y) = a_k^(m(n-i)) c_i(Y / a_k)
    let scale_x = |c: &Polynomial, total: u32| -> Polynomial {
        let parts = c.coeffs_in(fm.x);
        let mut acc = Polynomial::zero(&fm.ctx);
        for (e, part) in parts.iter().enumerate() {
            if part.is_zero() {
                continue;
            }
            acc = &acc + &(&(part * &akf.pow(total - e as u32)) * &fm.var(fm.x).pow(e as u32));
        }
        acc
    };
    let rel2: Vec<Polynomial> = rel.iter().enumerate().map(|(i, c)| scale_x(c, m * (n - i) as u32)).collect();
    // p~(Y) = a_k^(k-1) p(Y/a_k), monic; r'(Y) = a_k^(m+k-1) r(Y/a_k)
    let mut pt: Vec<Polynomial> = (0..k).map(|i| &p[i] * &ak.pow((k - 1 - i) as u32)).collect();
    pt.push(Polynomial::one(&rctx));
    let p2 = fm.univariate(&pt);
    let r2 = scale_x(&r, m + k as u32 - 1);
    let t2 = &ak.embed_unchecked(octx).pow(m) * &t;
    let y = &ak.embed_unchecked(octx) * &x;
    shift_monic(owner, &t2, &y, &fm, &p2, &r2, &rel2, coeff_vars, m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ideal::{AlgebraPresentation, Localization};
    use crate::ring::poly;

    #[test]
    fn nilpotent_shift() {
        let c = Vars::new(&["x", "t"]);
        let s = AlgebraPresentation::new(&c, vec![poly("t^2-x^2", &c), poly("t*x-x^2", &c)], Localization::None).unwrap();
        let rel = vec![poly("-x^2", &c), poly("0", &c), poly("1", &c)];
        let out = shift_cert(&s, &poly("t", &c), &poly("x", &c), &[poly("0", &c), poly("1", &c)], &rel, "x", &[]).unwrap();
        assert_eq!(out.q, poly("x", &c));
        assert_eq!(out.cert.monic_string("T"), "T^2");
    }

    #[test]
    fn trivial_shifts() {
        let c = Vars::new(&["x", "a"]);
        let s = AlgebraPresentation::polynomial_ring(&c);
        let t = poly("a*x+1", &c);
        let rel = vec![-&t, poly("1", &c)];
        let out = shift_cert(&s, &t, &poly("x", &c), &[poly("1", &c)], &rel, "x", &["a".into()]).unwrap();
        assert_eq!(out.q, t);
        assert_eq!(out.cert.monic_string("T"), "T");
        let x = poly("x", &c);
        let rel = vec![-&x, poly("1", &c)];
        let out = shift_cert(&s, &x, &x, &[poly("0", &c), poly("1", &c)], &rel, "x", &["a".into()]).unwrap();
        assert_eq!(out.q, x);
        assert_eq!(out.cert.coeffs.len(), 2);
    }

    #[test]
    fn non_monic_leading_coefficient() {
        let c = Vars::new(&["x", "t", "a"]);
        let s = AlgebraPresentation::new(&c, vec![poly("t-x^2", &c)], Localization::None).unwrap();
        let rel = vec![poly("-x^2", &c), poly("1", &c)];
        let p = [poly("0", &c), poly("a", &c)];
        let out = shift_cert(&s, &poly("t", &c), &poly("x", &c), &p, &rel, "x", &["a".into()]).unwrap();
        assert_eq!(out.m, 3);
        assert_eq!(out.q, poly("a^3*x^2", &c));
        assert_eq!(out.cert.monic_string("T"), "T");
        let u = poly("t*x", &c);
        let rel = vec![poly("-x^3", &c), poly("1", &c)];
        let p = [poly("a", &c), poly("a", &c)];
        let out = shift_cert(&s, &u, &poly("x", &c), &p, &rel, "x", &["a".into()]).unwrap();
        assert_eq!(verify_cert(&out.cert), Ok(()));
    }

    #[test]
    fn witness_missing() {
        let c = Vars::new(&["x", "t"]);
        let s = AlgebraPresentation::new(&c, vec![poly("t^2-x", &c)], Localization::None).unwrap();
        let rel = vec![poly("-x", &c), poly("0", &c), poly("1", &c)];
        let err = shift_cert(&s, &poly("t", &c), &poly("x", &c), &[poly("1", &c)], &rel, "x", &[]).unwrap_err();
        assert!(matches!(err, EngineError::SubalgebraWitnessMissing(_)));
    }
}

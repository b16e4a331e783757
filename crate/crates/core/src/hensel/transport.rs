//! The zero z_i = ν_i(t)/q(t), t = 1 + x, in A[x]/⟨f⟩ localized at
//! 1 + M + x·A[x], checked directly: q(t) is a unit and every numerator
//! q(t)^D·f_i(z) vanishes there.

use super::mhl::MhlResult;
use super::system::HenselSystem;
use crate::error::{EngineError, Result};
use crate::ideal::{Algebra, AlgebraPresentation, Localization};
use crate::ring::{Ctx, Monomial, Polynomial};

#[derive(Clone, Debug)]
pub struct TransportedZero {
    /// A_{⟨f⟩} on the variables [X] + base
    pub local: Algebra,
    pub numerators: Vec<Polynomial>,
    pub denominator: Polynomial,
}

fn at_t(r: &MhlResult, p: &Polynomial) -> Result<Polynomial> {
    let fctx = &r.fctx;
    let mut imgs = vec![&Polynomial::var(fctx, 0) + &Polynomial::one(fctx)];
    imgs.extend((1..fctx.len()).map(|i| Polynomial::var(fctx, i)));
    Ok(p.embed(&r.tctx)?.eval_map(&imgs, fctx))
}

/// q^D·g(num/q) with D the total degree of g in the unknowns.
pub fn cleared(sys: &HenselSystem, local: &Algebra, g: &Polynomial, nums: &[Polynomial], den: &Polynomial) -> Result<Polynomial> {
    let n = sys.n();
    let lctx = local.ctx();
    let g = g.embed(&sys.ctx)?;
    let deg = g.terms().iter().map(|(m, _)| m.exps()[..n].iter().copied().sum::<u32>()).max().unwrap_or(0);
    let mut acc = Polynomial::zero(lctx);
    for (m, c) in g.terms() {
        let mut e = vec![0];
        e.extend_from_slice(&m.exps()[n..]);
        let mut t = Polynomial::monomial(lctx, Monomial::from_exps(&e), c.clone());
        let mut used = 0;
        for i in 0..n {
            let k = m.exp(i);
            used += k;
            t = &t * &nums[i].pow(k);
        }
        acc = &acc + &(&t * &den.pow(deg - used));
    }
    Ok(acc)
}

fn check(sys: &HenselSystem, z: &TransportedZero) -> Result<Vec<String>> {
    let mut out = Vec::new();
    if !z.local.is_unit(&z.denominator)? {
        out.push("DenominatorNotUnit".to_string());
    }
    let point = z.local.point_ideal().unwrap_or_default();
    for (i, nu) in z.numerators.iter().enumerate() {
        if !z.local.in_ideal(nu, &point)? {
            out.push(format!("z_{} is not in the maximal ideal", i + 1));
        }
    }
    for (j, f) in sys.eqs.iter().enumerate() {
        let c = cleared(sys, &z.local, f, &z.numerators, &z.denominator)?;
        if !z.local.is_zero(&c)? {
            out.push(format!("f_{}(z) is not zero", j + 1));
        }
    }
    Ok(out)
}

/// A[X]/⟨f⟩ localized at the ideal generated by X and M, on `fctx` = [X] + base.
pub fn localized_at_f(sys: &HenselSystem, fctx: &Ctx, f: &Polynomial) -> Result<Algebra> {
    let vs = sys
        .point_vars()
        .ok_or_else(|| EngineError::Unsupported("transport needs A localized at a point with M its ideal".into()))?;
    let mut rels = vec![f.embed(fctx)?];
    rels.extend(sys.base.relations().gens().iter().map(|g| g.embed(fctx)).collect::<Result<Vec<_>>>()?);
    let mut pts = vec![fctx.names()[0].clone()];
    pts.extend(vs);
    AlgebraPresentation::new(fctx, rels, Localization::PointIdeal(pts))
}

pub fn transport_zero(sys: &HenselSystem, r: &MhlResult) -> Result<TransportedZero> {
    let local = localized_at_f(sys, &r.fctx, &r.f)?;
    let numerators = r.nu.iter().map(|nu| at_t(r, nu)).collect::<Result<_>>()?;
    let denominator = at_t(r, &r.qpoly)?;
    let z = TransportedZero { local, numerators, denominator };
    let bad = check(sys, &z)?;
    if !bad.is_empty() {
        return Err(EngineError::ZeroCheckFailed(bad.join("; ")));
    }
    Ok(z)
}

/// Failures of a transported zero, empty when it is a zero of the system.
pub fn verify_transport(sys: &HenselSystem, z: &TransportedZero) -> Result<Vec<String>> {
    if z.numerators.len() != sys.n() {
        return Ok(vec!["one numerator per unknown is required".into()]);
    }
    check(sys, z)
}

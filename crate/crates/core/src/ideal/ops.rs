use super::groebner::{groebner, groebner_tracked, GroebnerBasis};
use crate::error::{Caps, Result};
use crate::ring::{Ctx, MonomialOrder, Polynomial, Vars};
use serde::{Deserialize, Serialize};
use std::sync::Arc;

/// Finitely generated ideal in a polynomial ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ideal {
    ctx: Ctx,
    gens: Vec<Polynomial>,
}

impl Ideal {
    pub fn new(ctx: &Ctx, gens: impl IntoIterator<Item = Polynomial>) -> Self {
        let gens = gens
            .into_iter()
            .map(|g| g.embed(ctx).expect("generator outside the ideal context"))
            .filter(|g| !g.is_zero())
            .collect();
        Ideal { ctx: ctx.clone(), gens }
    }

    pub fn zero(ctx: &Ctx) -> Self {
        Ideal { ctx: ctx.clone(), gens: vec![] }
    }

    pub fn unit(ctx: &Ctx) -> Self {
        Ideal { ctx: ctx.clone(), gens: vec![Polynomial::one(ctx)] }
    }

    /// Ideal generated by a list of variables.
    pub fn of_vars(ctx: &Ctx, names: &[String]) -> Result<Self> {
        let gens = names
            .iter()
            .map(|n| Polynomial::var_named(ctx, n))
            .collect::<Result<Vec<_>>>()?;
        Ok(Ideal::new(ctx, gens))
    }

    pub fn ctx(&self) -> &Ctx {
        &self.ctx
    }

    pub fn gens(&self) -> &[Polynomial] {
        &self.gens
    }

    pub fn embed(&self, ctx: &Ctx) -> Result<Ideal> {
        Ok(Ideal {
            ctx: ctx.clone(),
            gens: self.gens.iter().map(|g| g.embed(ctx)).collect::<Result<_>>()?,
        })
    }

    pub fn groebner(&self, order: &MonomialOrder) -> Result<Arc<GroebnerBasis>> {
        groebner(&self.gens, &self.ctx, order)
    }

    pub fn gb(&self) -> Result<Arc<GroebnerBasis>> {
        self.groebner(&MonomialOrder::DegRevLex)
    }

    pub fn sum(&self, o: &Ideal) -> Ideal {
        let mut g = self.gens.clone();
        g.extend(o.gens.iter().map(|p| p.embed_unchecked(&self.ctx)));
        Ideal::new(&self.ctx, g)
    }

    pub fn with(&self, extra: &[Polynomial]) -> Ideal {
        let mut g = self.gens.clone();
        g.extend(extra.iter().map(|p| p.embed_unchecked(&self.ctx)));
        Ideal::new(&self.ctx, g)
    }

    pub fn product(&self, o: &Ideal) -> Ideal {
        let mut g = Vec::new();
        for a in &self.gens {
            for b in &o.gens {
                g.push(a * b);
            }
        }
        Ideal::new(&self.ctx, g)
    }

    /// k-th power, generated by all k-fold products of generators.
    pub fn power(&self, k: u32) -> Ideal {
        let mut acc = Ideal::unit(&self.ctx);
        for _ in 0..k {
            acc = acc.product(self);
            let gb = acc.gb();
            if let Ok(gb) = gb {
                acc = Ideal::new(&self.ctx, gb.basis().to_vec());
            }
        }
        acc
    }

    pub fn contains(&self, p: &Polynomial) -> Result<bool> {
        member(p, self)
    }

    pub fn contains_ideal(&self, o: &Ideal) -> Result<bool> {
        let gb = self.gb()?;
        Ok(o.gens.iter().all(|g| gb.contains(&g.embed_unchecked(&self.ctx))))
    }

    pub fn is_unit(&self) -> Result<bool> {
        Ok(self.gb()?.is_unit())
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.gens.iter().map(|g| g.to_string()).collect()
    }
}

pub fn member(p: &Polynomial, i: &Ideal) -> Result<bool> {
    if p.is_zero() {
        return Ok(true);
    }
    if i.gens.is_empty() {
        return Ok(false);
    }
    Ok(i.gb()?.contains(p))
}

/// Cofactors c with p = sum c_k gens_k, when p is in the ideal.
pub fn member_traced(p: &Polynomial, i: &Ideal) -> Result<Option<Vec<Polynomial>>> {
    if i.gens.is_empty() {
        return Ok(if p.is_zero() { Some(vec![]) } else { None });
    }
    let gb = groebner_tracked(&i.gens, i.gens.len(), &i.ctx, &MonomialOrder::DegRevLex)?;
    Ok(gb.express(&p.embed(&i.ctx)?))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RadicalVerdict {
    pub member: bool,
    /// Smallest k with p^k in the ideal; None if the search cap ran out.
    pub exponent: Option<u32>,
}

pub fn radical_member(p: &Polynomial, i: &Ideal) -> Result<RadicalVerdict> {
    let ctx = &i.ctx;
    let p = p.embed(ctx)?;
    let tname = ctx.fresh("T_rab");
    let big = ctx.extend(&[tname.as_str()]);
    let t = Polynomial::var(&big, big.len() - 1);
    let mut gens: Vec<Polynomial> = i.gens.iter().map(|g| g.embed_unchecked(&big)).collect();
    gens.push(&Polynomial::one(&big) - &(&t * &p.embed_unchecked(&big)));
    let unit = groebner(&gens, &big, &MonomialOrder::DegRevLex)?.is_unit();
    if !unit {
        return Ok(RadicalVerdict { member: false, exponent: None });
    }
    Ok(RadicalVerdict { member: true, exponent: power_exponent(&p, i)? })
}

/// Smallest k ≤ cap with p^k ∈ i.
pub fn power_exponent(p: &Polynomial, i: &Ideal) -> Result<Option<u32>> {
    let cap = Caps::current().exponent;
    if p.is_zero() {
        return Ok(Some(1));
    }
    if i.gens.is_empty() {
        return Ok(None);
    }
    let gb = i.gb()?;
    let mut r = gb.reduce(p);
    for k in 1..=cap {
        if r.is_zero() {
            return Ok(Some(k));
        }
        r = gb.reduce(&(&r * p));
    }
    Ok(None)
}

/// Generators of i ∩ Q[remaining variables], in the same context.
pub fn eliminate(i: &Ideal, drop: &[String]) -> Result<Ideal> {
    let ctx = &i.ctx;
    for d in drop {
        ctx.require(d)?;
    }
    if drop.is_empty() {
        return Ok(i.clone());
    }
    let mut names: Vec<String> = ctx.names().iter().filter(|n| drop.contains(n)).cloned().collect();
    let k = names.len();
    names.extend(ctx.names().iter().filter(|n| !drop.contains(n)).cloned());
    let big = Vars::new(&names);
    let gens: Vec<Polynomial> = i.gens.iter().map(|g| g.embed_unchecked(&big)).collect();
    let gb = groebner(&gens, &big, &MonomialOrder::Block(vec![k]))?;
    let keep: Vec<bool> = (0..big.len()).map(|j| j >= k).collect();
    Ok(Ideal::new(
        ctx,
        gb.basis().iter().filter(|g| g.uses_only(&keep)).map(|g| g.embed_unchecked(ctx)),
    ))
}

/// (i : f^∞)
pub fn saturate(i: &Ideal, f: &Polynomial) -> Result<Ideal> {
    let ctx = &i.ctx;
    let tname = ctx.fresh("T_sat");
    let big = ctx.extend(&[tname.as_str()]);
    let t = Polynomial::var(&big, big.len() - 1);
    let mut gens: Vec<Polynomial> = i.gens.iter().map(|g| g.embed_unchecked(&big)).collect();
    gens.push(&Polynomial::one(&big) - &(&t * &f.embed(&big)?));
    let e = eliminate(&Ideal::new(&big, gens), &[tname])?;
    e.embed(ctx)
}

pub fn intersect(i: &Ideal, j: &Ideal) -> Result<Ideal> {
    let ctx = &i.ctx;
    let tname = ctx.fresh("T_int");
    let big = ctx.extend(&[tname.as_str()]);
    let t = Polynomial::var(&big, big.len() - 1);
    let omt = &Polynomial::one(&big) - &t;
    let mut gens: Vec<Polynomial> = i.gens.iter().map(|g| &g.embed_unchecked(&big) * &t).collect();
    gens.extend(j.gens.iter().map(|g| &g.embed_unchecked(&big) * &omt));
    let e = eliminate(&Ideal::new(&big, gens), &[tname])?;
    e.embed(ctx)
}

/// (i : f)
pub fn colon(i: &Ideal, f: &Polynomial) -> Result<Ideal> {
    let ctx = &i.ctx;
    let f = f.embed(ctx)?;
    if f.is_zero() {
        return Ok(Ideal::unit(ctx));
    }
    if member(&f, i)? {
        return Ok(Ideal::unit(ctx));
    }
    let inter = intersect(i, &Ideal::new(ctx, [f.clone()]))?;
    Ok(Ideal::new(
        ctx,
        inter.gens.iter().map(|g| g.div_exact(&f).expect("intersection with ⟨f⟩ is divisible by f")),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::poly;

    fn c() -> Ctx {
        Vars::new(&["x", "y", "a", "b", "T"])
    }

    fn id(gs: &[&str]) -> Ideal {
        Ideal::new(&c(), gs.iter().map(|s| poly(s, &c())))
    }

    #[test]
    fn membership_examples() {
        let i = id(&["x^2-1", "x*y-1"]);
        assert!(member(&poly("y^2-1", &c()), &i).unwrap());
        assert!(!member(&poly("1", &c()), &id(&["x"])).unwrap());
        let p = poly("x^3*y - a*b + 7", &c());
        assert!(member(&p, &Ideal::new(&c(), [p.clone()])).unwrap());
    }

    #[test]
    fn radical_examples() {
        let v = radical_member(&poly("x", &c()), &id(&["x^2"])).unwrap();
        assert_eq!(v, RadicalVerdict { member: true, exponent: Some(2) });
        assert!(!radical_member(&poly("x", &c()), &id(&["y"])).unwrap().member);
        let v = radical_member(&poly("a*b", &c()), &id(&["a^2*b^2"])).unwrap();
        assert_eq!(v.exponent, Some(2));
    }

    #[test]
    fn saturation_examples() {
        let s = saturate(&id(&["x*y"]), &poly("x", &c())).unwrap();
        assert_eq!(s.gb().unwrap().basis(), id(&["y"]).gb().unwrap().basis());
        let s = saturate(&id(&["x"]), &poly("y", &c())).unwrap();
        assert_eq!(s.gb().unwrap().basis(), id(&["x"]).gb().unwrap().basis());
        assert!(saturate(&id(&["x"]), &poly("x", &c())).unwrap().is_unit().unwrap());
    }

    #[test]
    fn elimination_examples() {
        let e = eliminate(&id(&["T-x^2", "x-1"]), &["x".into()]).unwrap();
        assert_eq!(e.gb().unwrap().basis(), &[poly("T-1", &c())]);
        assert!(eliminate(&id(&["x"]), &["x".into()]).unwrap().gens().is_empty());
        assert!(eliminate(&id(&["1"]), &["x".into()]).unwrap().is_unit().unwrap());
    }

    #[test]
    fn colon_and_intersection() {
        let q = colon(&id(&["x^2*y", "x*y^2"]), &poly("x*y", &c())).unwrap();
        assert!(q.contains(&poly("x", &c())).unwrap());
        assert!(q.contains(&poly("y", &c())).unwrap());
        assert!(!q.is_unit().unwrap());
        let i = intersect(&id(&["x"]), &id(&["y"])).unwrap();
        assert_eq!(i.gb().unwrap().basis(), &[poly("x*y", &c())]);
    }

    #[test]
    fn traced_membership() {
        let i = id(&["x^2-a", "x*y-b"]);
        let p = poly("y*x^3 - a*b", &c());
        let cf = member_traced(&p, &i).unwrap().unwrap();
        let s = &(&cf[0] * &i.gens()[0]) + &(&cf[1] * &i.gens()[1]);
        assert_eq!(s, p);
    }
}

//! Finitely presented, possibly localized, Q-algebras and their zero tests.

use super::groebner::GroebnerBasis;
use super::ops::{colon, eliminate, member, saturate, Ideal};
use crate::error::{EngineError, Result};
use crate::ring::{Ctx, Polynomial};
use std::sync::{Arc, OnceLock};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Localization {
    None,
    /// Invert every polynomial in the listed variables with nonzero
    /// constant term.
    PointIdeal(Vec<String>),
    /// Invert the multiplicative monoid generated by these elements.
    Monoid(Vec<Polynomial>),
}

#[derive(Debug)]
pub struct AlgebraPresentation {
    ctx: Ctx,
    relations: Ideal,
    local: Localization,
    gb: OnceLock<Arc<GroebnerBasis>>,
    effective: OnceLock<Ideal>,
}

pub type Algebra = Arc<AlgebraPresentation>;

impl AlgebraPresentation {
    pub fn new(ctx: &Ctx, relations: Vec<Polynomial>, local: Localization) -> Result<Algebra> {
        if let Localization::PointIdeal(vs) = &local {
            for v in vs {
                ctx.require(v)?;
            }
        }
        let relations = Ideal::new(ctx, relations.into_iter().map(|r| r.embed(ctx)).collect::<Result<Vec<_>>>()?);
        Ok(Arc::new(AlgebraPresentation {
            ctx: ctx.clone(),
            relations,
            local,
            gb: OnceLock::new(),
            effective: OnceLock::new(),
        }))
    }

    pub fn polynomial_ring(ctx: &Ctx) -> Algebra {
        Self::new(ctx, vec![], Localization::None).unwrap()
    }

    pub fn ctx(&self) -> &Ctx {
        &self.ctx
    }

    pub fn relations(&self) -> &Ideal {
        &self.relations
    }

    pub fn localization(&self) -> &Localization {
        &self.local
    }

    /// Same relations, different localization.
    pub fn with_localization(&self, local: Localization) -> Result<Algebra> {
        Self::new(&self.ctx, self.relations.gens().to_vec(), local)
    }

    pub fn with_relations(&self, extra: &[Polynomial]) -> Result<Algebra> {
        let mut r = self.relations.gens().to_vec();
        r.extend(extra.iter().cloned());
        Self::new(&self.ctx, r, self.local.clone())
    }

    pub fn gb(&self) -> Result<Arc<GroebnerBasis>> {
        if let Some(g) = self.gb.get() {
            return Ok(g.clone());
        }
        let g = self.relations.gb()?;
        Ok(self.gb.get_or_init(|| g).clone())
    }

    pub fn reduce(&self, p: &Polynomial) -> Result<Polynomial> {
        Ok(self.gb()?.reduce(&p.embed(&self.ctx)?))
    }

    pub fn var(&self, name: &str) -> Result<Polynomial> {
        Polynomial::var_named(&self.ctx, name)
    }

    pub fn parse(&self, s: &str) -> Result<Polynomial> {
        crate::ring::parse_poly(s, &self.ctx)
    }

    /// Relations of the ring with a monoid localization folded in.
    fn effective_relations(&self) -> Result<Ideal> {
        if let Some(e) = self.effective.get() {
            return Ok(e.clone());
        }
        let e = match &self.local {
            Localization::Monoid(ss) => {
                let mut prod = Polynomial::one(&self.ctx);
                for s in ss {
                    prod = &prod * &s.embed(&self.ctx)?;
                }
                saturate(&self.relations, &prod)?
            }
            _ => self.relations.clone(),
        };
        Ok(self.effective.get_or_init(|| e).clone())
    }

    /// Is p in (extra)·B, where B is this (localized) algebra?
    pub fn in_ideal(&self, p: &Polynomial, extra: &[Polynomial]) -> Result<bool> {
        let p = p.embed(&self.ctx)?;
        if p.is_zero() {
            return Ok(true);
        }
        let base = self.relations.with(extra);
        if member(&p, &base)? {
            return Ok(true);
        }
        match &self.local {
            Localization::None => Ok(false),
            Localization::Monoid(_) => {
                let eff = self.effective_relations()?.with(extra);
                member(&p, &eff)
            }
            Localization::PointIdeal(vs) => {
                let c = colon(&base, &p)?;
                let drop: Vec<String> =
                    self.ctx.names().iter().filter(|n| !vs.contains(n)).cloned().collect();
                let e = eliminate(&c, &drop)?;
                Ok(e.gens().iter().any(|g| !num_traits::Zero::is_zero(&g.constant_term())))
            }
        }
    }

    pub fn is_zero(&self, p: &Polynomial) -> Result<bool> {
        self.in_ideal(p, &[])
    }

    pub fn equal(&self, a: &Polynomial, b: &Polynomial) -> Result<bool> {
        self.is_zero(&(a - b))
    }

    /// Does some v ∈ 1 + m·B satisfy v·u ∈ i·B?  (Localization at 1 + m.)
    pub fn local_member(&self, u: &Polynomial, i: &[Polynomial], m: &[Polynomial]) -> Result<bool> {
        let u = u.embed(&self.ctx)?;
        if u.is_zero() {
            return Ok(true);
        }
        let base = self.effective_relations()?.with(i);
        if member(&u, &base)? {
            return Ok(true);
        }
        let c = colon(&base, &u)?;
        c.with(m).is_unit()
    }

    /// The ideal of the localization's "point", when it has one.
    pub fn point_ideal(&self) -> Option<Vec<Polynomial>> {
        match &self.local {
            Localization::PointIdeal(vs) => {
                Some(vs.iter().map(|v| Polynomial::var_named(&self.ctx, v).unwrap()).collect())
            }
            _ => None,
        }
    }

    /// Is p a unit of the (localized) algebra?
    pub fn is_unit(&self, p: &Polynomial) -> Result<bool> {
        let p = p.embed(&self.ctx)?;
        if self.relations.with(std::slice::from_ref(&p)).is_unit()? {
            return Ok(true);
        }
        match &self.local {
            Localization::None => Ok(false),
            Localization::Monoid(_) => self.effective_relations()?.with(&[p]).is_unit(),
            Localization::PointIdeal(vs) => {
                // unit iff 1 ∈ (⟨p⟩ + rel) localized, i.e. some σ with σ(0) ≠ 0 lies in ⟨p⟩ + rel
                let e = eliminate(
                    &self.relations.with(&[p]),
                    &self.ctx.names().iter().filter(|n| !vs.contains(n)).cloned().collect::<Vec<_>>(),
                )?;
                Ok(e.gens().iter().any(|g| !num_traits::Zero::is_zero(&g.constant_term())))
            }
        }
    }
}

/// Element of a presented algebra: numerator over a unit denominator.
#[derive(Clone, Debug)]
pub struct AlgebraElement {
    pub owner: Algebra,
    pub num: Polynomial,
    pub den: Polynomial,
}

impl AlgebraElement {
    pub fn new(owner: &Algebra, num: Polynomial) -> Result<Self> {
        let num = num.embed(owner.ctx())?;
        Ok(AlgebraElement { owner: owner.clone(), den: Polynomial::one(owner.ctx()), num })
    }

    pub fn fraction(owner: &Algebra, num: Polynomial, den: Polynomial) -> Result<Self> {
        let den = den.embed(owner.ctx())?;
        if !den.is_one() {
            if owner.localization() == &Localization::None {
                return Err(EngineError::Precondition("denominators need a localization".into()));
            }
            if !owner.is_unit(&den)? {
                return Err(EngineError::Precondition(format!("{den} is not a unit")));
            }
        }
        Ok(AlgebraElement { owner: owner.clone(), num: num.embed(owner.ctx())?, den })
    }

    pub fn is_zero(&self) -> Result<bool> {
        self.owner.is_zero(&self.num)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{poly, Vars};

    fn example_b() -> Algebra {
        let c = Vars::new(&["x", "y", "a", "b"]);
        AlgebraPresentation::new(
            &c,
            vec![poly("-a + x + b*x*y + 2*b*x^2", &c), poly("-b + y + a*x^2 + a*x*y + b*y^2", &c)],
            Localization::PointIdeal(vec!["a".into(), "b".into()]),
        )
        .unwrap()
    }

    #[test]
    fn local_member_examples() {
        let b = example_b();
        let c = b.ctx().clone();
        let m = [poly("a", &c), poly("b", &c)];
        let s = poly("1+a*x+b*y", &c);
        assert!(b.local_member(&(&s - &poly("1", &c)), &m, &m).unwrap());
        let base = AlgebraPresentation::new(&Vars::new(&["a", "b"]), vec![], Localization::None).unwrap();
        let bc = base.ctx().clone();
        let mm = [poly("a", &bc), poly("b", &bc)];
        assert!(!base.local_member(&poly("1", &bc), &mm, &mm).unwrap());
        assert!(b.local_member(&Polynomial::zero(&c), &m, &m).unwrap());
    }

    #[test]
    fn point_localization_zero_test() {
        // in Q[a,x]/⟨(1+a)x⟩ localized at ⟨a⟩, x is zero; not so without localization
        let c = Vars::new(&["x", "a"]);
        let rel = vec![poly("(1+a)*x", &c)];
        let loc = AlgebraPresentation::new(&c, rel.clone(), Localization::PointIdeal(vec!["a".into()])).unwrap();
        let plain = AlgebraPresentation::new(&c, rel, Localization::None).unwrap();
        assert!(loc.is_zero(&poly("x", &c)).unwrap());
        assert!(!plain.is_zero(&poly("x", &c)).unwrap());
        // a·x is not annihilated by anything with nonzero constant term in Q[a]/⟨a x⟩
        let loc2 = AlgebraPresentation::new(&c, vec![poly("a*x", &c)], Localization::PointIdeal(vec!["a".into()])).unwrap();
        assert!(!loc2.is_zero(&poly("x", &c)).unwrap());
        assert!(loc.is_unit(&poly("1+a", &c)).unwrap());
        assert!(!loc.is_unit(&poly("a", &c)).unwrap());
    }

    #[test]
    fn monoid_localization() {
        let c = Vars::new(&["x", "a"]);
        let b = AlgebraPresentation::new(&c, vec![poly("a*x", &c)], Localization::Monoid(vec![poly("a", &c)])).unwrap();
        assert!(b.is_zero(&poly("x", &c)).unwrap());
    }
}

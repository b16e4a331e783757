//! Problem and result types, residual finiteness search and re-checks.

use crate::error::{EngineError, Result};
use crate::ideal::{groebner, member_traced, Algebra, Ideal};
use crate::integrality::{verify_cert, IntegralityCertificate};
use crate::ring::{univ, MonomialOrder, Polynomial, Vars};

#[derive(Clone, Debug)]
pub struct ZmtProblem {
    pub b: Algebra,
    pub base_vars: Vec<String>,
    pub gens: Vec<String>,
    /// generators of the ideal of A
    pub ideal: Vec<Polynomial>,
    /// monic p_j (coefficients over A) with p_j(x_j) ∈ I·B
    pub residual: Vec<Vec<Polynomial>>,
}

impl ZmtProblem {
    pub fn new(
        b: &Algebra,
        base_vars: &[String],
        gens: &[String],
        ideal: &[Polynomial],
        residual: Vec<Vec<Polynomial>>,
    ) -> Result<Self> {
        let ctx = b.ctx();
        for v in base_vars.iter().chain(gens) {
            ctx.require(v)?;
        }
        if ctx.names().iter().any(|n| !base_vars.contains(n) && !gens.contains(n)) {
            return Err(EngineError::Precondition("every variable must be a base variable or a generator".into()));
        }
        let ideal: Vec<Polynomial> = ideal.iter().map(|g| g.embed(ctx)).collect::<Result<_>>()?;
        for g in &ideal {
            if !g.uses_only_named(base_vars) {
                return Err(EngineError::Precondition(format!("ideal generator {g} is not in the base")));
            }
        }
        if residual.len() != gens.len() {
            return Err(EngineError::ShapeError("one residual polynomial per generator is required".into()));
        }
        let residual: Vec<Vec<Polynomial>> = residual
            .iter()
            .map(|p| p.iter().map(|c| c.embed(ctx)).collect::<Result<Vec<_>>>())
            .collect::<Result<_>>()?;
        for (p, x) in residual.iter().zip(gens) {
            if !p.last().is_some_and(|c| c.is_one()) || p.iter().any(|c| !c.uses_only_named(base_vars)) {
                return Err(EngineError::Precondition(format!("the residual polynomial for {x} must be monic over the base")));
            }
            let px = univ::horner(p, &Polynomial::var_named(ctx, x)?);
            if !b.in_ideal(&px, &ideal)? {
                return Err(EngineError::HypothesisNotSatisfied(format!("p({x}) is not in I·B")));
            }
        }
        Ok(ZmtProblem { b: b.clone(), base_vars: base_vars.to_vec(), gens: gens.to_vec(), ideal, residual })
    }

    pub fn gen(&self, j: usize) -> Polynomial {
        Polynomial::var_named(self.b.ctx(), &self.gens[j]).unwrap()
    }
}

/// Monic polynomial over Q[keep] in `x` belonging to `gens`, found in a
/// basis whose order eliminates the other variables and then x.
fn monic_in(owner: &Algebra, gens: &[Polynomial], keep: &[String], x: &str) -> Result<Option<Vec<Polynomial>>> {
    let octx = owner.ctx();
    let others: Vec<String> = octx.names().iter().filter(|n| !keep.contains(n) && *n != x).cloned().collect();
    let mut names = others.clone();
    names.push(x.to_string());
    names.extend(keep.iter().cloned());
    let big = Vars::new(&names);
    let emb: Vec<Polynomial> = gens.iter().map(|g| g.embed(&big)).collect::<Result<_>>()?;
    let k = others.len();
    let gb = groebner(&emb, &big, &MonomialOrder::Block(vec![k, k + 1]))?;
    if gb.is_unit() {
        return Ok(Some(vec![Polynomial::zero(octx), Polynomial::one(octx)]));
    }
    let mut best: Option<Vec<Polynomial>> = None;
    for g in gb.basis() {
        if (0..k).any(|i| g.uses_var(i)) || g.degree_in(k) == 0 {
            continue;
        }
        let lc = match g.lc_in(k).constant_value() {
            Some(c) => c,
            None => continue,
        };
        let g = g.scale(&(crate::ring::q(1) / lc));
        let cs: Vec<Polynomial> = g.coeffs_in(k).iter().map(|c| c.embed(octx)).collect::<Result<_>>()?;
        if best.as_ref().is_none_or(|b| cs.len() < b.len()) {
            best = Some(cs);
        }
    }
    Ok(best)
}

/// Monic relation for the variable x over Q[coeff_vars], when the
/// relations contain one.
pub fn integral_relation(owner: &Algebra, coeff_vars: &[String], x: &str) -> Result<Option<Vec<Polynomial>>> {
    monic_in(owner, owner.relations().gens(), coeff_vars, x)
}

/// Monic relation for an arbitrary element e over Q[coeff_vars], found by
/// adjoining W = e and eliminating.
pub fn element_relation(owner: &Algebra, coeff_vars: &[String], e: &Polynomial) -> Result<Option<Vec<Polynomial>>> {
    let octx = owner.ctx();
    let w = octx.fresh("W");
    let ctx = octx.extend(&[w.as_str()]);
    let mut rels: Vec<Polynomial> = owner.relations().gens().iter().map(|r| r.embed(&ctx)).collect::<Result<_>>()?;
    rels.push(&Polynomial::var_named(&ctx, &w)? - &e.embed(&ctx)?);
    let ext = crate::ideal::AlgebraPresentation::polynomial_ring(&ctx);
    match monic_in(&ext, &rels, coeff_vars, &w)? {
        Some(cs) => Ok(Some(cs.iter().map(|c| c.embed(octx)).collect::<Result<_>>()?)),
        None => Ok(None),
    }
}

/// Search for the residual finiteness polynomials: monic p_j over the
/// base with p_j(x_j) ∈ I·B.
pub fn find_residual(b: &Algebra, base_vars: &[String], gens: &[String], ideal: &[Polynomial]) -> Result<Vec<Vec<Polynomial>>> {
    let all = b.relations().with(ideal);
    gens.iter()
        .map(|x| {
            monic_in(b, all.gens(), base_vars, x)?
                .ok_or_else(|| EngineError::WitnessSearchExhausted(format!("no monic polynomial for {x} modulo I·B")))
        })
        .collect()
}

#[derive(Clone, Debug)]
pub struct ZmtResult {
    pub s: Polynomial,
    pub s_cert: IntegralityCertificate,
    /// certificates for s·x_j, one per generator
    pub x_certs: Vec<IntegralityCertificate>,
    /// cofactors c_k with s - 1 = Σ c_k i_k modulo the relations
    pub one_minus_s: Vec<Polynomial>,
}

impl ZmtResult {
    /// Build the result after computing the cofactors of s - 1.
    pub fn assemble(
        p: &ZmtProblem,
        s: Polynomial,
        s_cert: IntegralityCertificate,
        x_certs: Vec<IntegralityCertificate>,
    ) -> Result<Self> {
        let one = Polynomial::one(p.b.ctx());
        let mut gens = p.ideal.clone();
        gens.extend(p.b.relations().gens().iter().cloned());
        let cof = member_traced(&(&s - &one), &Ideal::new(p.b.ctx(), gens))?
            .ok_or_else(|| EngineError::InvariantRecheckFailed("s is not in 1 + I·B".into()))?;
        Ok(ZmtResult { s, s_cert, x_certs, one_minus_s: cof[..p.ideal.len()].to_vec() })
    }
}

/// Independent re-check; returns the list of failed invariants.
pub fn verify_zmt(p: &ZmtProblem, r: &ZmtResult) -> Result<Vec<String>> {
    let mut failures = Vec::new();
    let one = Polynomial::one(p.b.ctx());
    let mut combo = Polynomial::zero(p.b.ctx());
    for (c, g) in r.one_minus_s.iter().zip(&p.ideal) {
        combo = &combo + &(c * g);
    }
    if r.one_minus_s.len() != p.ideal.len() || !p.b.equal(&(&r.s - &one), &combo)? {
        failures.push("s - 1 is not the recorded combination of I".to_string());
    }
    if !p.b.equal(&r.s_cert.element, &r.s)? {
        failures.push("certificate element differs from s".into());
    }
    if let Err(f) = verify_cert(&r.s_cert) {
        failures.push(format!("certificate for s: {f}"));
    }
    if r.x_certs.len() != p.gens.len() {
        failures.push("one certificate per generator is required".into());
    }
    for (j, c) in r.x_certs.iter().enumerate() {
        if p.gens.len() > j && !p.b.equal(&c.element, &(&r.s * &p.gen(j)))? {
            failures.push(format!("certificate {j} is not for s·{}", p.gens[j]));
        }
        if let Err(f) = verify_cert(c) {
            failures.push(format!("certificate for s·{}: {f}", p.gens.get(j).cloned().unwrap_or_default()));
        }
    }
    for c in std::iter::once(&r.s_cert).chain(&r.x_certs) {
        if c.coeff_vars.iter().any(|v| !p.base_vars.contains(v)) {
            failures.push(format!("certificate for {} is not over the base", c.element));
        }
    }
    Ok(failures)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ideal::{AlgebraPresentation, Localization};
    use crate::ring::poly;

    #[test]
    fn residual_search() {
        let c = Vars::new(&["x", "y", "a", "b"]);
        let rels = vec![poly("-a + x + b*x*y + 2*b*x^2", &c), poly("-b + y + a*x^2 + a*x*y + b*y^2", &c)];
        let b = AlgebraPresentation::new(&c, rels, Localization::None).unwrap();
        let base = vec!["a".to_string(), "b".to_string()];
        let gens = vec!["x".to_string(), "y".to_string()];
        let ideal = vec![poly("a", &c), poly("b", &c)];
        let r = find_residual(&b, &base, &gens, &ideal).unwrap();
        assert_eq!(r[0], vec![poly("0", &c), poly("1", &c)]);
        assert_eq!(r[1], vec![poly("0", &c), poly("1", &c)]);
        assert!(ZmtProblem::new(&b, &base, &gens, &ideal, r).is_ok());
        let bad = vec![vec![poly("-1", &c), poly("1", &c)], vec![poly("0", &c), poly("1", &c)]];
        assert!(matches!(ZmtProblem::new(&b, &base, &gens, &ideal, bad), Err(EngineError::HypothesisNotSatisfied(_))));
    }

    #[test]
    fn integral_relations() {
        let c = Vars::new(&["x", "a"]);
        let b = AlgebraPresentation::new(&c, vec![poly("x^2-a*x", &c)], Localization::None).unwrap();
        let r = integral_relation(&b, &["a".into()], "x").unwrap().unwrap();
        assert_eq!(r, vec![poly("0", &c), poly("-a", &c), poly("1", &c)]);
        let b = AlgebraPresentation::new(&c, vec![poly("a*x-1", &c)], Localization::None).unwrap();
        assert!(integral_relation(&b, &["a".into()], "x").unwrap().is_none());
    }
}

//! Splitting algebras, Kronecker's lemma and the Gauss–Joyal content bound.
//!
//! Polynomials in X are passed as coefficient lists, lowest degree first,
//! with coefficients in the base context.

use super::cert::{require_verified, CoefficientLocation, IntegralityCertificate};
use crate::error::{Caps, EngineError, Result};
use crate::ideal::{power_exponent, radical_member, Algebra, AlgebraPresentation, Ideal, RadicalVerdict};
use crate::ring::{Ctx, Monomial, Polynomial};

/// Universal algebra over which a monic f = X^k + a_{k-1}X^{k-1} + ... + a_0
/// splits as ∏(X - t_i).
#[derive(Clone, Debug)]
pub struct SplittingAlgebra {
    pub base: Algebra,
    pub monic_input: Vec<Polynomial>,
    pub root_vars: Vec<String>,
    /// g_i(t_i) with g_1 = f and g_(i+1) = (g_i(X) - g_i(t_i)) / (X - t_i)
    pub rewrite_rules: Vec<Polynomial>,
    pub algebra: Algebra,
}

/// Largest input degree for which the splitting algebra is built.
pub const MAX_SPLIT_DEGREE: usize = 4;

fn check_monic(f: &[Polynomial], what: &str) -> Result<()> {
    match f.last() {
        Some(l) if l.is_one() => Ok(()),
        _ => Err(EngineError::Precondition(format!("{what} must be monic of degree at least 0"))),
    }
}

/// Quotient and remainder of g(X) by X - t (synthetic division).
fn synthetic_division(g: &[Polynomial], t: &Polynomial) -> (Vec<Polynomial>, Polynomial) {
    let mut q = vec![Polynomial::zero(t.ctx()); g.len().saturating_sub(1)];
    let mut carry = Polynomial::zero(t.ctx());
    for k in (0..g.len()).rev() {
        let v = &g[k].embed_unchecked(t.ctx()) + &(&carry * t);
        if k == 0 {
            return (q, v);
        }
        q[k - 1] = v.clone();
        carry = v;
    }
    (q, carry)
}

impl SplittingAlgebra {
    pub fn new(base: &Algebra, f: &[Polynomial]) -> Result<Self> {
        check_monic(f, "the splitting input")?;
        let k = f.len() - 1;
        if k > MAX_SPLIT_DEGREE {
            return Err(EngineError::Unsupported(format!(
                "splitting algebras are built up to degree {MAX_SPLIT_DEGREE}, got {k}"
            )));
        }
        let bctx = base.ctx();
        let mut roots = Vec::new();
        let mut ctx = bctx.clone();
        for i in 0..k {
            let name = ctx.fresh(&format!("t{}", i + 1));
            ctx = ctx.extend(&[name.as_str()]);
            roots.push(name);
        }
        let mut g: Vec<Polynomial> = f.iter().map(|c| c.embed(&ctx)).collect::<Result<_>>()?;
        let mut rules = Vec::new();
        for r in &roots {
            let t = Polynomial::var_named(&ctx, r)?;
            let (q, rem) = synthetic_division(&g, &t);
            rules.push(rem);
            g = q;
        }
        let mut rels: Vec<Polynomial> = base.relations().gens().iter().map(|p| p.embed_unchecked(&ctx)).collect();
        rels.extend(rules.iter().cloned());
        let algebra = AlgebraPresentation::new(&ctx, rels, base.localization().clone())?;
        Ok(SplittingAlgebra {
            base: base.clone(),
            monic_input: f.iter().map(|c| c.embed_unchecked(bctx)).collect(),
            root_vars: roots,
            rewrite_rules: rules,
            algebra,
        })
    }

    pub fn ctx(&self) -> &Ctx {
        self.algebra.ctx()
    }

    pub fn degree(&self) -> usize {
        self.root_vars.len()
    }

    pub fn root(&self, i: usize) -> Polynomial {
        Polynomial::var_named(self.ctx(), &self.root_vars[i]).unwrap()
    }

    /// Standard monomials t_1^e_1 ⋯ t_k^e_k with e_i ≤ k - i.
    pub fn basis(&self) -> Vec<Polynomial> {
        let ctx = self.ctx();
        let k = self.degree();
        let idx: Vec<usize> = self.root_vars.iter().map(|r| ctx.index(r).unwrap()).collect();
        let mut out = vec![vec![0u32; ctx.len()]];
        for (i, &v) in idx.iter().enumerate() {
            let bound = (k - 1 - i) as u32;
            out = out
                .into_iter()
                .flat_map(|e| {
                    (0..=bound).map(move |p| {
                        let mut e = e.clone();
                        e[v] = p;
                        e
                    })
                })
                .collect();
        }
        out.into_iter().map(|e| Polynomial::monomial(ctx, Monomial::from_exps(&e), crate::ring::q(1))).collect()
    }

    pub fn rank(&self) -> usize {
        (1..=self.degree()).product()
    }

    /// Does ∏(X - t_i) - f vanish coefficientwise in the algebra?
    pub fn splits(&self) -> Result<bool> {
        let ctx = self.ctx();
        let mut prod = vec![Polynomial::one(ctx)];
        for i in 0..self.degree() {
            let t = self.root(i);
            let mut next = vec![Polynomial::zero(ctx); prod.len() + 1];
            for (j, c) in prod.iter().enumerate() {
                next[j + 1] = &next[j + 1] + c;
                next[j] = &next[j] - &(c * &t);
            }
            prod = next;
        }
        for (p, a) in prod.iter().zip(&self.monic_input) {
            if !self.algebra.equal(p, &a.embed_unchecked(ctx))? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// h(T) as a certificate for the root t_i, over the ideal of the lower
    /// coefficients of the monic h (which f must divide).
    pub fn root_cert(&self, i: usize, h: &[Polynomial]) -> Result<IntegralityCertificate> {
        check_monic(h, "h")?;
        require_divides(&self.base, &self.monic_input, h)?;
        let ctx = self.ctx();
        let coeffs: Vec<Polynomial> = h.iter().map(|c| c.embed_unchecked(ctx)).collect();
        let ideal = coeffs[..coeffs.len() - 1].to_vec();
        let cert = IntegralityCertificate::new(
            &self.algebra,
            self.root(i),
            self.base.ctx().names(),
            coeffs,
            CoefficientLocation::OverIdeal(ideal),
            "Kronecker",
        )?;
        require_verified(&cert)?;
        Ok(cert)
    }
}

/// Remainder of h modulo a monic f, coefficientwise.
pub fn remainder_by_monic(h: &[Polynomial], f: &[Polynomial]) -> Vec<Polynomial> {
    let k = f.len() - 1;
    let mut r: Vec<Polynomial> = h.to_vec();
    while r.len() > k {
        let lead = r.pop().unwrap();
        let shift = r.len() - k;
        for (j, c) in f[..k].iter().enumerate() {
            r[shift + j] = &r[shift + j] - &(&lead * c);
        }
    }
    r
}

fn require_divides(base: &Algebra, f: &[Polynomial], h: &[Polynomial]) -> Result<()> {
    for c in remainder_by_monic(h, f) {
        if !base.is_zero(&c)? {
            return Err(EngineError::NotADivisor);
        }
    }
    Ok(())
}

/// Certificate that the coefficient a_j of the monic f is integral over the
/// ideal generated by the lower coefficients of the monic h, when f | h.
///
/// Every root of f is a root of h, so t^n lies in that ideal times the
/// splitting algebra; a_j is a homogeneous symmetric function of the roots
/// and therefore a_j^N does as well for N = C(k, k-j)(n-1)+1.  The splitting
/// algebra is free over the base with 1 in its basis, so the membership
/// descends, and T^N - a_j^N is the certificate.
pub fn kronecker_cert(base: &Algebra, f: &[Polynomial], h: &[Polynomial], j: usize) -> Result<IntegralityCertificate> {
    check_monic(f, "f")?;
    check_monic(h, "h")?;
    let bctx = base.ctx();
    let f: Vec<Polynomial> = f.iter().map(|c| c.embed(bctx)).collect::<Result<_>>()?;
    let h: Vec<Polynomial> = h.iter().map(|c| c.embed(bctx)).collect::<Result<_>>()?;
    let k = f.len() - 1;
    let n = h.len() - 1;
    if j >= k {
        return Err(EngineError::Precondition(format!("coefficient index {j} is not below deg f = {k}")));
    }
    require_divides(base, &f, &h)?;
    let aj = &f[j];
    let lower = h[..n].to_vec();
    let bound = (binomial(k, k - j) as u64 * n.saturating_sub(1) as u64 + 1).min(Caps::current().exponent as u64) as u32;
    let gens: Vec<Polynomial> = lower.iter().chain(base.relations().gens()).cloned().collect();
    let ideal = Ideal::new(bctx, gens);
    let exp = if aj.is_zero() {
        1
    } else {
        match power_exponent(aj, &ideal)? {
            Some(e) if e <= bound => e,
            Some(e) => {
                return Err(EngineError::InvariantRecheckFailed(format!("exponent {e} exceeds the bound {bound}")))
            }
            None => return Err(EngineError::ExponentCapExceeded { cap: Caps::current().exponent }),
        }
    };
    let mut coeffs = vec![Polynomial::zero(bctx); exp as usize + 1];
    coeffs[0] = -&aj.pow(exp);
    coeffs[exp as usize] = Polynomial::one(bctx);
    let cert = IntegralityCertificate::new(
        base,
        aj.clone(),
        bctx.names(),
        coeffs,
        CoefficientLocation::OverIdeal(lower),
        "Kronecker",
    )?;
    require_verified(&cert)?;
    Ok(cert)
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

pub fn poly_mul(f: &[Polynomial], g: &[Polynomial]) -> Vec<Polynomial> {
    if f.is_empty() || g.is_empty() {
        return vec![];
    }
    let ctx = f[0].ctx().clone();
    let mut out = vec![Polynomial::zero(&ctx); f.len() + g.len() - 1];
    for (i, a) in f.iter().enumerate() {
        for (j, b) in g.iter().enumerate() {
            out[i + j] = &out[i + j] + &(a * b);
        }
    }
    out
}

/// Exponent k with (f_i g_j)^k in the content ideal of f·g.
pub fn gauss_joyal(f: &[Polynomial], g: &[Polynomial], i: usize, j: usize) -> Result<RadicalVerdict> {
    if i >= f.len() || j >= g.len() {
        return Err(EngineError::Precondition("coefficient index out of range".into()));
    }
    let ctx = f[i].ctx().clone();
    let g: Vec<Polynomial> = g.iter().map(|c| c.embed(&ctx)).collect::<Result<_>>()?;
    let h = poly_mul(f, &g);
    let content = Ideal::new(&ctx, h.into_iter().filter(|c| !c.is_zero()));
    let p = &f[i] * &g[j];
    let v = radical_member(&p, &content)?;
    if !v.member {
        return Err(EngineError::InvariantRecheckFailed(format!("{p} is not in the radical of the content")));
    }
    Ok(v)
}

//! Monic form of a Hensel polynomial a_0 + a_1 X + ... + a_n X^n with a_1
//! a unit and a_0 ∈ M.  With h(X) = X^n - X^{n-1} + Σ_{j≥2} (-1)^j a_j
//! a_0^{j-1} a_1^{-j} X^{n-j}, g(X) = h(X + 1) satisfies
//! a_0·g(X) = (X + 1)^n f(-a_0 a_1^{-1}/(X + 1)).  Everything is kept over
//! the denominator a_1^n.

use super::system::HenselSystem;
use crate::error::{EngineError, Result};
use crate::ring::{q, Ctx, Polynomial};

#[derive(Clone, Debug)]
pub struct MonicizationResult {
    /// [X] + base
    pub ctx: Ctx,
    pub f: Polynomial,
    /// g = g_num / den, monic as a polynomial over A
    pub g_num: Polynomial,
    pub den: Polynomial,
    /// a_0·g_num - Σ_j a_j (-a_0)^j a_1^{n-j} (X+1)^{n-j}, which is zero
    pub identity_check: Polynomial,
}

impl MonicizationResult {
    /// g itself when the denominator is a rational number.
    pub fn g(&self) -> Option<Polynomial> {
        let c = self.den.constant_value()?;
        Some(self.g_num.scale(&(q(1) / c)))
    }
}

pub fn monicize(sys: &HenselSystem, ctx: &Ctx, f: &Polynomial) -> Result<MonicizationResult> {
    let f = f.embed(ctx)?;
    let bctx = sys.base.ctx();
    let a: Vec<Polynomial> = f.coeffs_in(0);
    let n = a.len().saturating_sub(1);
    if n < 1 {
        return Err(EngineError::Precondition("a Hensel polynomial has positive degree".into()));
    }
    let a0 = a[0].clone();
    let a1 = a[1].clone();
    if !sys.base.is_unit(&a1.embed(bctx)?)? {
        return Err(EngineError::A1NotUnit);
    }
    if !sys.in_maximal(&a0.embed(bctx)?)? {
        return Err(EngineError::Precondition("the constant coefficient is not in M".into()));
    }
    let x = Polynomial::var(ctx, 0);
    let one = Polynomial::one(ctx);
    let xp1 = &x + &one;
    let a1n = a1.pow(n as u32);
    let mut h = &(&a1n * &x.pow(n as u32)) - &(&a1n * &x.pow(n as u32 - 1));
    for j in 2..=n {
        let mut t = &(&a[j] * &a0.pow(j as u32 - 1)) * &a1.pow((n - j) as u32);
        if j % 2 == 1 {
            t = -&t;
        }
        h = &h + &(&t * &x.pow((n - j) as u32));
    }
    let mut imgs = vec![xp1.clone()];
    imgs.extend((1..ctx.len()).map(|i| Polynomial::var(ctx, i)));
    let mut g_num = h.eval_map(&imgs, ctx);
    let neg_a0 = -&a0;
    let mut rhs = Polynomial::zero(ctx);
    for (j, aj) in a.iter().enumerate() {
        rhs = &rhs + &(&(&(aj * &neg_a0.pow(j as u32)) * &a1.pow((n - j) as u32)) * &xp1.pow((n - j) as u32));
    }
    let mut den = a1n;
    if let Some(c) = den.constant_value() {
        let inv = q(1) / &c;
        g_num = g_num.scale(&inv);
        rhs = rhs.scale(&inv);
        den = one.clone();
    }
    let identity_check = &(&a0 * &g_num) - &rhs;
    let res = MonicizationResult { ctx: ctx.clone(), f, g_num, den, identity_check };
    let bad = monic_failures(sys, &res)?;
    if !bad.is_empty() {
        return Err(EngineError::InvariantRecheckFailed(bad.join("; ")));
    }
    Ok(res)
}

pub fn monic_failures(sys: &HenselSystem, r: &MonicizationResult) -> Result<Vec<String>> {
    let bctx = sys.base.ctx();
    let mut out = Vec::new();
    if !r.identity_check.is_zero() {
        out.push("identity".to_string());
    }
    let g = r.g_num.coeffs_in(0);
    if g.last() != Some(&r.den) {
        out.push("NotMonic".into());
    }
    let b0 = g.first().cloned().unwrap_or_else(|| Polynomial::zero(&r.ctx));
    if !sys.in_maximal(&b0.embed(bctx)?)? {
        out.push("b_0 is not in M".into());
    }
    let b1 = g.get(1).cloned().unwrap_or_else(|| Polynomial::zero(&r.ctx));
    if !sys.in_maximal(&(&b1 - &r.den).embed(bctx)?)? {
        out.push("b_1 is not in 1 + M".into());
    }
    Ok(out)
}

//! Treating a multivariate polynomial as univariate in one chosen variable.

use super::matrix::PolyMatrix;
use super::poly::{Ctx, Polynomial};
use crate::error::{EngineError, Result};

pub fn degree(f: &Polynomial, v: usize) -> Option<u32> {
    if f.is_zero() {
        None
    } else {
        Some(f.degree_in(v))
    }
}

/// Returns (q, r, power) with lc(g)^power·f = q·g + r and deg r < deg g.
pub fn pseudo_divide(f: &Polynomial, g: &Polynomial, v: usize) -> (Polynomial, Polynomial, u32) {
    assert!(!g.is_zero(), "division by zero polynomial");
    let ctx = f.ctx().clone();
    let g = g.embed_unchecked(&ctx);
    let dg = g.degree_in(v);
    let lc = g.lc_in(v);
    let zero = Polynomial::zero(&ctx);
    if lc.is_one() {
        let mut r = f.clone();
        let mut qt = zero.clone();
        while !r.is_zero() && r.degree_in(v) >= dg {
            let dr = r.degree_in(v);
            let s = r.lc_in(v).mul_var_pow(v, dr - dg);
            r = &r - &(&s * &g);
            qt = &qt + &s;
        }
        return (qt, r, 0);
    }
    let df = f.degree_in(v);
    if f.is_zero() || df < dg {
        return (zero, f.clone(), 0);
    }
    let power = df - dg + 1;
    let mut e = power;
    let mut r = f.clone();
    let mut qt = zero;
    while !r.is_zero() && r.degree_in(v) >= dg {
        let dr = r.degree_in(v);
        let s = r.lc_in(v).mul_var_pow(v, dr - dg);
        qt = &(&qt * &lc) + &s;
        r = &(&r * &lc) - &(&s * &g);
        e -= 1;
    }
    if e > 0 {
        let k = lc.pow(e);
        qt = &qt * &k;
        r = &r * &k;
    }
    (qt, r, power)
}

/// Sylvester matrix of f (degree df) and g (degree dg) in variable v,
/// columns indexed by descending powers.
pub fn sylvester_matrix(f: &Polynomial, g: &Polynomial, v: usize) -> PolyMatrix {
    let ctx: Ctx = f.ctx().clone();
    let fc = f.coeffs_in(v);
    let gc = g.embed_unchecked(&ctx).coeffs_in(v);
    let (df, dg) = (fc.len() - 1, gc.len() - 1);
    let n = df + dg;
    PolyMatrix::from_fn(&ctx, n, n, |i, j| {
        if i < dg {
            // f shifted right by i
            if j >= i && j - i <= df {
                fc[df - (j - i)].clone()
            } else {
                Polynomial::zero(&ctx)
            }
        } else {
            let s = i - dg;
            if j >= s && j - s <= dg {
                gc[dg - (j - s)].clone()
            } else {
                Polynomial::zero(&ctx)
            }
        }
    })
}

pub fn resultant(f: &Polynomial, g: &Polynomial, v: usize) -> Result<Polynomial> {
    let ctx = f.ctx().clone();
    let g = g.embed(&ctx)?;
    if f.is_zero() || g.is_zero() {
        return Ok(Polynomial::zero(&ctx));
    }
    let (df, dg) = (f.degree_in(v), g.degree_in(v));
    if df == 0 && dg == 0 {
        return Err(EngineError::DegenerateResultant);
    }
    sylvester_matrix(f, &g, v).det_ff()
}

/// Euclidean division by a polynomial whose leading coefficient in v is a
/// nonzero constant.
pub fn divide_by_monic(f: &Polynomial, g: &Polynomial, v: usize) -> (Polynomial, Polynomial) {
    let lc = g.lc_in(v).constant_value().expect("leading coefficient must be constant");
    let gm = g.scale(&(super::poly::q(1) / &lc));
    let (qt, r, _) = pseudo_divide(f, &gm, v);
    (qt.scale(&(super::poly::q(1) / lc)), r)
}

/// Derivative-free Horner evaluation of univariate coefficients at `x`.
pub fn horner(coeffs: &[Polynomial], x: &Polynomial) -> Polynomial {
    let ctx = x.ctx().clone();
    let mut acc = Polynomial::zero(&ctx);
    for c in coeffs.iter().rev() {
        acc = &(&acc * x) + &c.embed_unchecked(&ctx);
    }
    acc
}

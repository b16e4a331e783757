//! Subresultants as determinant polynomials.
//!
//! For f of degree d and g of degree at most δ in X, and j < d, let M_j be
//! the matrix whose rows are the coefficient vectors of X^(δ-j-1)f, ..., f,
//! X^(d-j-1)g, ..., g.  Sr_j is the determinant polynomial of M_j: the first
//! rows-1 columns are kept and the last column is replaced by the row
//! polynomials themselves.  Expanding along that column gives Sr_j = U_j f +
//! V_j g directly.
//!
//! The bound used is δ = max(deg g, d - 1).  Raising δ by one multiplies
//! every Sr_j by lc(f), so for monic f the chain does not depend on δ, and
//! Sr_0 = lc(f)^(δ - deg g) · Res(f, g) with the Sylvester matrix of
//! `univ::sylvester_matrix`.

use crate::error::{EngineError, Result};
use crate::ring::{PolyMatrix, Polynomial};

#[derive(Clone, Debug)]
pub struct SubresultantChain {
    pub var: usize,
    pub f: Polynomial,
    pub g: Polynomial,
    pub delta: u32,
    /// Sr_0, ..., Sr_d (the last one is f)
    pub chain: Vec<Polynomial>,
    /// s_j, the coefficient of X^j in Sr_j
    pub principal: Vec<Polynomial>,
    /// (U_j, V_j) with Sr_j = U_j f + V_j g
    pub cofactors: Vec<(Polynomial, Polynomial)>,
}

impl SubresultantChain {
    pub fn degree(&self) -> usize {
        self.chain.len() - 1
    }

    /// Least j with s_j ≠ 0 as a polynomial.
    pub fn first_nonzero(&self) -> usize {
        self.principal.iter().position(|s| !s.is_zero()).unwrap_or(self.degree())
    }

    /// Re-check Sr_j = U_j f + V_j g and deg Sr_j ≤ j for every j.
    pub fn check(&self) -> bool {
        self.chain.iter().zip(&self.cofactors).enumerate().all(|(j, (s, (u, v)))| {
            let lhs = &(u * &self.f) + &(v * &self.g);
            &lhs == s && (s.is_zero() || s.degree_in(self.var) as usize <= j)
        })
    }
}

struct Rows {
    polys: Vec<Polynomial>,
    from_f: Vec<bool>,
    shift: Vec<u32>,
    cols: usize,
}

fn rows(f: &Polynomial, g: &Polynomial, v: usize, d: u32, delta: u32, j: u32) -> Rows {
    let mut polys = Vec::new();
    let mut from_f = Vec::new();
    let mut shift = Vec::new();
    for e in (0..delta - j).rev() {
        polys.push(f.mul_var_pow(v, e));
        from_f.push(true);
        shift.push(e);
    }
    for e in (0..d - j).rev() {
        polys.push(g.mul_var_pow(v, e));
        from_f.push(false);
        shift.push(e);
    }
    Rows { polys, from_f, shift, cols: (d + delta - j) as usize }
}

/// Coefficient matrix of the rows restricted to the given powers of X.
fn coefficient_block(r: &Rows, v: usize, powers: &[usize]) -> Result<PolyMatrix> {
    let ctx = r.polys[0].ctx().clone();
    let coeffs: Vec<Vec<Polynomial>> = r.polys.iter().map(|p| p.coeffs_in(v)).collect();
    let zero = Polynomial::zero(&ctx);
    let entries = coeffs
        .iter()
        .flat_map(|c| powers.iter().map(|&e| c.get(e).cloned().unwrap_or_else(|| zero.clone())))
        .collect();
    PolyMatrix::new(r.polys[0].ctx(), r.polys.len(), powers.len(), entries)
}

fn leading_powers(r: &Rows) -> Vec<usize> {
    // columns X^(cols-1), ..., X^(cols-rows+1)
    let n = r.polys.len();
    (0..n - 1).map(|c| r.cols - 1 - c).collect()
}

/// The determinant polynomial Σ_i det(first columns | column of X^i) X^i,
/// computed without cofactors.
pub fn determinant_polynomial(f: &Polynomial, g: &Polynomial, v: usize, j: u32) -> Result<Polynomial> {
    let ctx = f.ctx().clone();
    let g = g.embed(&ctx)?;
    let d = f.degree_in(v);
    let delta = g.degree_in(v).max(d.saturating_sub(1));
    let r = rows(f, &g, v, d, delta, j);
    let lead = leading_powers(&r);
    let mut acc = Polynomial::zero(&ctx);
    for i in 0..=j as usize {
        let mut powers = lead.clone();
        powers.push(i);
        let det = coefficient_block(&r, v, &powers)?.det_ff()?;
        acc = &acc + &det.mul_var_pow(v, i as u32);
    }
    Ok(acc)
}

pub fn subresultant_chain(f: &Polynomial, g: &Polynomial, v: usize) -> Result<SubresultantChain> {
    let ctx = f.ctx().clone();
    let g = g.embed(&ctx)?;
    let d = f.degree_in(v);
    if f.is_zero() || d == 0 {
        return Err(EngineError::Precondition("f must have positive degree in the main variable".into()));
    }
    let delta = g.degree_in(v).max(d - 1);
    let zero = Polynomial::zero(&ctx);
    let mut chain = Vec::new();
    let mut cofactors = Vec::new();
    for j in 0..d {
        let r = rows(f, &g, v, d, delta, j);
        let n = r.polys.len();
        let lead = leading_powers(&r);
        let block = coefficient_block(&r, v, &lead)?;
        let (mut u, mut w) = (zero.clone(), zero.clone());
        for k in 0..n {
            let minor = if n == 1 {
                Polynomial::one(&ctx)
            } else {
                let entries = (0..n)
                    .filter(|&i| i != k)
                    .flat_map(|i| (0..n - 1).map(move |c| (i, c)))
                    .map(|(i, c)| block.get(i, c).clone())
                    .collect();
                PolyMatrix::new(&ctx, n - 1, n - 1, entries)?.det_ff()?
            };
            if minor.is_zero() {
                continue;
            }
            let signed = if (k + n - 1).is_multiple_of(2) { minor } else { -&minor };
            let term = signed.mul_var_pow(v, r.shift[k]);
            if r.from_f[k] {
                u = &u + &term;
            } else {
                w = &w + &term;
            }
        }
        let sr = &(&u * f) + &(&w * &g);
        chain.push(sr);
        cofactors.push((u, w));
    }
    chain.push(f.clone());
    cofactors.push((Polynomial::one(&ctx), zero.clone()));
    let principal = chain
        .iter()
        .enumerate()
        .map(|(j, s)| s.coeffs_in(v).get(j).cloned().unwrap_or_else(|| zero.clone()))
        .collect();
    Ok(SubresultantChain { var: v, f: f.clone(), g, delta, chain, principal, cofactors })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{poly, univ, Vars};

    #[test]
    fn quadratic_and_derivative() {
        let c = Vars::new(&["X", "a", "b"]);
        let f = poly("X^2+a*X+b", &c);
        let g = poly("2*X+a", &c);
        let ch = subresultant_chain(&f, &g, 0).unwrap();
        assert!(ch.check());
        assert_eq!(ch.chain[1], g);
        assert_eq!(ch.chain[0], poly("4*b-a^2", &c));
        assert_eq!(ch.chain[0], univ::resultant(&f, &g, 0).unwrap());
        let at = ch.chain[0].substitute(&[("a", poly("0", &c)), ("b", poly("-1", &c))]).unwrap();
        assert_eq!(at, poly("-4", &c));
    }

    #[test]
    fn zero_second_argument() {
        let c = Vars::new(&["X", "a"]);
        let f = poly("X^3+a", &c);
        let ch = subresultant_chain(&f, &poly("0", &c), 0).unwrap();
        assert!(ch.chain[..3].iter().all(|s| s.is_zero()));
        assert_eq!(ch.first_nonzero(), 3);
    }

    #[test]
    fn matches_determinant_polynomials() {
        let c = Vars::new(&["X", "a"]);
        let f = poly("X^4+a*X^2-3*X+1", &c);
        let g = poly("a*X^2+X-2", &c);
        let ch = subresultant_chain(&f, &g, 0).unwrap();
        assert!(ch.check());
        for j in 0..4 {
            assert_eq!(ch.chain[j], determinant_polynomial(&f, &g, 0, j as u32).unwrap());
        }
        // padded bound: lc(f) = 1, so Sr_0 is still the Sylvester resultant
        assert_eq!(ch.chain[0], univ::resultant(&f, &g, 0).unwrap());
    }

    #[test]
    fn common_factor_degree() {
        let c = Vars::new(&["X"]);
        let f = poly("(X-1)*(X-2)*(X+3)", &c);
        let g = poly("(X-1)*(X-2)*5", &c);
        let ch = subresultant_chain(&f, &g, 0).unwrap();
        assert_eq!(ch.first_nonzero(), 2);
        let g = poly("(X-1)*(X+7)", &c);
        assert_eq!(subresultant_chain(&f, &g, 0).unwrap().first_nonzero(), 1);
    }
}

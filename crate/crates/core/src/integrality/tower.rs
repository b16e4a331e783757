//! Formal towers R[Z_1]/(P_1)[Z_2]/(P_2)... of monic extensions over a
//! polynomial ring R, with minimal polynomials of elements found by Krylov
//! iteration on the cyclic vector 1.

use super::cert::{require_verified, CoefficientLocation, IntegralityCertificate};
use crate::error::{EngineError, Result};
use crate::ideal::Algebra;
use crate::ring::{univ, Ctx, PolyMatrix, Polynomial, Vars, Q};
use num_traits::Zero;
use std::collections::BTreeMap;

#[derive(Clone, Debug)]
pub struct Tower {
    ctx: Ctx,
    nbase: usize,
    /// coefficient lists c_0..c_d (c_d = 1), in `ctx`
    layers: Vec<Vec<Polynomial>>,
}

impl Tower {
    pub fn new<S: AsRef<str>>(base: &[S]) -> Self {
        let ctx = Vars::new(base);
        Tower { nbase: ctx.len(), ctx, layers: vec![] }
    }

    pub fn ctx(&self) -> &Ctx {
        &self.ctx
    }

    pub fn base_ctx(&self) -> Ctx {
        Vars::new(&self.ctx.names()[..self.nbase])
    }

    pub fn depth(&self) -> usize {
        self.layers.len()
    }

    pub fn dim(&self) -> usize {
        self.layers.iter().map(|l| l.len() - 1).product()
    }

    /// Adjoin a root `name` of the monic polynomial with the given
    /// coefficients (last one 1), which may use the base and earlier layers.
    /// Returns the new variable.
    pub fn push(&mut self, name: &str, coeffs: &[Polynomial]) -> Result<Polynomial> {
        match coeffs.last() {
            Some(c) if c.is_one() && coeffs.len() >= 2 => {}
            _ => return Err(EngineError::Precondition("tower layers need a monic relation of degree ≥ 1".into())),
        }
        let ctx = self.ctx.extend(&[name]);
        let cs = coeffs.iter().map(|c| c.embed(&self.ctx).and_then(|c| c.embed(&ctx))).collect::<Result<Vec<_>>>()?;
        for l in self.layers.iter_mut() {
            for c in l.iter_mut() {
                *c = c.embed_unchecked(&ctx);
            }
        }
        self.layers.push(cs);
        self.ctx = ctx;
        Ok(Polynomial::var(&self.ctx, self.ctx.len() - 1))
    }

    pub fn layer_var(&self, k: usize) -> Polynomial {
        Polynomial::var(&self.ctx, self.nbase + k)
    }

    /// Remainder modulo all layer relations, top layer first.
    pub fn reduce(&self, p: &Polynomial) -> Result<Polynomial> {
        let mut r = p.embed(&self.ctx)?;
        for (k, l) in self.layers.iter().enumerate().rev() {
            let v = self.nbase + k;
            if r.degree_in(v) as usize >= l.len() - 1 {
                let rel = Polynomial::from_coeffs_in(&self.ctx, v, l);
                r = univ::pseudo_divide(&r, &rel, v).1;
            }
        }
        Ok(r)
    }

    /// Coordinates of a reduced element: layer exponent vector -> base coefficient.
    fn coords(&self, p: &Polynomial) -> Coords {
        let bctx = self.base_ctx();
        let mut parts: BTreeMap<Vec<u32>, Vec<(crate::ring::Monomial, Q)>> = BTreeMap::new();
        for (m, c) in p.terms() {
            let e = m.exps();
            let key: Vec<u32> = (0..self.layers.len()).map(|k| e.get(self.nbase + k).copied().unwrap_or(0)).collect();
            let base = crate::ring::Monomial::from_exps(&(0..self.nbase).map(|i| e.get(i).copied().unwrap_or(0)).collect::<Vec<_>>());
            parts.entry(key).or_default().push((base, c.clone()));
        }
        parts.into_iter().map(|(k, t)| (k, Polynomial::from_terms(&bctx, t))).collect()
    }

    /// Monic minimal polynomial (coefficients c_0..c_k over the base) of a
    /// tower element.  Falls back to the characteristic polynomial of the
    /// multiplication matrix if the Krylov solve does not close.
    pub fn min_poly(&self, target: &Polynomial) -> Result<Vec<Polynomial>> {
        let target = self.reduce(target)?;
        let bctx = self.base_ctx();
        let mut cur = Polynomial::one(&self.ctx);
        let start = self.coords(&cur);
        let found = krylov_min_poly(&bctx, self.dim(), start, |_| {
            cur = self.reduce(&(&cur * &target))?;
            Ok(self.coords(&cur))
        })?;
        match found {
            Some(c) => Ok(c),
            None => self.char_poly(&target),
        }
    }

    /// Matrix of multiplication by `target` on the monomial basis.
    pub fn multiplication_matrix(&self, target: &Polynomial) -> Result<PolyMatrix> {
        let target = self.reduce(target)?;
        let degs: Vec<usize> = self.layers.iter().map(|l| l.len() - 1).collect();
        let mut basis: Vec<Vec<u32>> = vec![vec![]];
        for &d in &degs {
            basis = basis
                .into_iter()
                .flat_map(|b| (0..d as u32).map(move |e| {
                    let mut b2 = b.clone();
                    b2.push(e);
                    b2
                }))
                .collect();
        }
        let bctx = self.base_ctx();
        let n = basis.len();
        let mut cols = Vec::with_capacity(n);
        for b in &basis {
            let mut exps = vec![0u32; self.ctx.len()];
            for (k, &e) in b.iter().enumerate() {
                exps[self.nbase + k] = e;
            }
            let mono = Polynomial::monomial(&self.ctx, crate::ring::Monomial::from_exps(&exps), Q::from_integer(1.into()));
            cols.push(self.coords(&self.reduce(&(&mono * &target))?));
        }
        let zero = Polynomial::zero(&bctx);
        Ok(PolyMatrix::from_fn(&bctx, n, n, |i, j| cols[j].get(&basis[i]).cloned().unwrap_or_else(|| zero.clone())))
    }

    pub fn char_poly(&self, target: &Polynomial) -> Result<Vec<Polynomial>> {
        self.multiplication_matrix(target)?.char_poly_coeffs()
    }
}

pub(crate) type Coords = BTreeMap<Vec<u32>, Polynomial>;

/// Minimal monic relation of the sequence start, step(start), ... over the
/// base, found by numeric rank detection and exact Cramer solves.  `step`
/// maps the current vector to the next one.  None if no relation of degree
/// below `dim` exists; a full-length relation is left to the characteristic
/// polynomial, which is cheaper to get than the full Cramer solve.
/// Certificate over Q[coeff_vars] for a polynomial expression in certified
/// elements.  `expr` lives in a context whose variables are either one of
/// `tags` (standing for `parts[i].element`) or a coefficient variable.  Each
/// part used becomes a tower layer; parts of degree one are substituted.
pub fn certify_expression(
    owner: &Algebra,
    coeff_vars: &[String],
    parts: &[IntegralityCertificate],
    tags: &[String],
    expr: &Polynomial,
    provenance: &str,
) -> Result<IntegralityCertificate> {
    let octx = owner.ctx();
    let ectx = expr.ctx().clone();
    let mut tower = Tower::new(coeff_vars);
    let bctx = tower.base_ctx();
    // images of expr variables: Err(i) marks a tag still to be pushed
    let mut plan: Vec<std::result::Result<Polynomial, usize>> = Vec::new();
    let mut value_imgs = Vec::new();
    for name in ectx.names() {
        if let Some(i) = tags.iter().position(|t| t == name) {
            let c = &parts[i];
            if c.coeff_vars.iter().any(|v| !coeff_vars.contains(v)) || c.location != CoefficientLocation::OverBase {
                return Err(EngineError::Precondition(format!("certificate for {} is not over the base", c.element)));
            }
            value_imgs.push(c.element.embed(octx)?);
            if c.degree() == 1 {
                plan.push(Ok(-&c.coeffs[0].embed(&bctx)?));
            } else {
                plan.push(Err(i));
            }
        } else {
            value_imgs.push(Polynomial::var_named(octx, name)?);
            plan.push(Ok(Polynomial::var_named(&bctx, name)?));
        }
    }
    let used = expr.support_vars();
    let mut used_parts: Vec<usize> = Vec::new();
    for &j in &used {
        if let Some(i) = tags.iter().position(|t| t == &ectx.names()[j]) {
            if !used_parts.contains(&i) {
                used_parts.push(i);
            }
        }
    }
    let mut layer_of: BTreeMap<usize, Polynomial> = BTreeMap::new();
    for (j, step) in plan.iter().enumerate() {
        if let Err(i) = step {
            if !used.contains(&j) || layer_of.contains_key(i) {
                continue;
            }
            let cs: Vec<Polynomial> = parts[*i].coeffs.iter().map(|c| c.embed(&bctx)).collect::<Result<_>>()?;
            let name = tower.ctx().fresh("L");
            let v = tower.push(&name, &cs)?;
            layer_of.insert(*i, v);
        }
    }
    let tctx = tower.ctx().clone();
    let imgs: Vec<Polynomial> = plan
        .iter()
        .map(|step| match step {
            Ok(p) => p.embed_unchecked(&tctx),
            Err(i) => layer_of.get(i).map(|v| v.embed_unchecked(&tctx)).unwrap_or_else(|| Polynomial::zero(&tctx)),
        })
        .collect();
    let target = expr.eval_map(&imgs, &tctx);
    let mp = if tower.depth() == 0 { vec![-&target, Polynomial::one(&tctx)] } else { tower.min_poly(&target)? };
    let cs: Vec<Polynomial> = mp.iter().map(|c| c.embed(octx)).collect::<Result<_>>()?;
    let value = expr.eval_map(&value_imgs, octx);
    let cert = IntegralityCertificate::new(owner, value, coeff_vars, cs, CoefficientLocation::OverBase, provenance)?
        .inherit(used_parts.iter().map(|&i| &parts[i]));
    require_verified(&cert)?;
    Ok(cert)
}

pub(crate) fn krylov_min_poly(
    bctx: &Ctx,
    dim: usize,
    start: Coords,
    mut step: impl FnMut(&Coords) -> Result<Coords>,
) -> Result<Option<Vec<Polynomial>>> {
    let mut vecs: Vec<Coords> = vec![start];
    let mut point = 0usize;
    for _ in 1..dim.max(1) {
        let next = step(vecs.last().unwrap())?;
        let mut tries = 0;
        while tries < 3 {
            match try_close(&vecs, &next, bctx, point) {
                Closure::Closed(c) => {
                    let mut out: Vec<Polynomial> = c.into_iter().map(|x| -x).collect();
                    out.push(Polynomial::one(bctx));
                    return Ok(Some(out));
                }
                Closure::Independent => break,
                Closure::Unlucky => {
                    point += 1;
                    tries += 1;
                }
            }
        }
        vecs.push(next);
    }
    Ok(None)
}

fn try_close(
    vecs: &[Coords],
    next: &Coords,
    bctx: &Ctx,
    point: usize,
) -> Closure {
    let k = vecs.len();
    let mut keys: Vec<&Vec<u32>> = vecs.iter().flat_map(|v| v.keys()).chain(next.keys()).collect();
    keys.sort();
    keys.dedup();
    let pt = sample_point(bctx.len(), point);
    let zero = Polynomial::zero(bctx);
    let entry = |v: &Coords, key: &Vec<u32>| v.get(key).cloned().unwrap_or_else(|| zero.clone());
    // numeric matrix rows = keys, columns = vecs + next
    let mut rows: Vec<Vec<Q>> = keys
        .iter()
        .map(|key| {
            vecs.iter().chain(std::iter::once(next)).map(|v| entry(v, key).eval_rational(&pt)).collect()
        })
        .collect();
    let pivots = echelon_pivot_rows(&mut rows, k);
    let pivots = match pivots {
        Some(p) => p,
        None => return Closure::Unlucky,
    };
    // is the last column in the span numerically?
    if rows.iter().skip(k).any(|r| !r[k].is_zero()) {
        return Closure::Independent;
    }
    let sel: Vec<&Vec<u32>> = pivots.iter().map(|&i| keys[i]).collect();
    let mat = PolyMatrix::from_fn(bctx, k, k, |i, j| entry(&vecs[j], sel[i]));
    let rhs: Vec<Polynomial> = sel.iter().map(|key| entry(next, key)).collect();
    let (det, nums) = match mat.solve_ff(&rhs) {
        Ok(Some(x)) => x,
        _ => return Closure::Unlucky,
    };
    let mut sol = Vec::with_capacity(k);
    for nj in &nums {
        match nj.div_exact(&det) {
            Some(c) => sol.push(c),
            None => return Closure::Unlucky,
        }
    }
    // exact check over every coordinate
    for key in &keys {
        let mut s = -entry(next, key);
        for (j, v) in vecs.iter().enumerate() {
            s = &s + &(&sol[j] * &entry(v, key));
        }
        if !s.is_zero() {
            return Closure::Unlucky;
        }
    }
    Closure::Closed(sol)
}

enum Closure {
    Closed(Vec<Polynomial>),
    Independent,
    Unlucky,
}

/// Deterministic integer evaluation points.
fn sample_point(n: usize, seed: usize) -> Vec<Q> {
    (0..n)
        .map(|i| {
            let v = ((i as i64 + 1) * 7919 + (seed as i64 + 1) * 104_729) % 1009 + 3;
            Q::from_integer(v.into())
        })
        .collect()
}

/// Row-echelon on the first k columns with row swaps; returns the original
/// indices of the pivot rows, or None if the first k columns are dependent.
/// Leaves the remaining rows (after position k) with the k-th column reduced.
fn echelon_pivot_rows(rows: &mut [Vec<Q>], k: usize) -> Option<Vec<usize>> {
    let n = rows.len();
    let mut order: Vec<usize> = (0..n).collect();
    for c in 0..k {
        let p = (c..n).find(|&r| !rows[r][c].is_zero())?;
        rows.swap(c, p);
        order.swap(c, p);
        let piv = rows[c].clone();
        for r in 0..n {
            if r != c && !rows[r][c].is_zero() {
                let f = &rows[r][c] / &piv[c];
                for j in c..rows[r].len() {
                    let d = &f * &piv[j];
                    rows[r][j] -= d;
                }
            }
        }
    }
    Some(order[..k].to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{poly, q};

    #[test]
    fn sqrt_sum_minimal_polynomial() {
        // sqrt(a) + sqrt(b): minimal polynomial T^4 - 2(a+b)T^2 + (a-b)^2
        let mut t = Tower::new(&["a", "b"]);
        let c0 = t.ctx().clone();
        let r = t.push("R", &[poly("-a", &c0), poly("0", &c0), poly("1", &c0)]).unwrap();
        let c1 = t.ctx().clone();
        let s = t.push("S", &[poly("-b", &c1), poly("0", &c1), poly("1", &c1)]).unwrap();
        assert_eq!(t.dim(), 4);
        let mp = t.min_poly(&(&r + &s)).unwrap();
        let b = t.base_ctx();
        let want = [poly("(a-b)^2", &b), poly("0", &b), poly("-2*a-2*b", &b), poly("0", &b), poly("1", &b)];
        assert_eq!(mp, want);
        let cp = t.char_poly(&(&r + &s)).unwrap();
        assert_eq!(cp, want);
        // R*S = sqrt(ab): degree 2
        let mp = t.min_poly(&(&r * &s)).unwrap();
        assert_eq!(mp, vec![poly("-a*b", &b), poly("0", &b), poly("1", &b)]);
        // a base element has degree 1
        let mp = t.min_poly(&Polynomial::constant(t.ctx(), q(3))).unwrap();
        assert_eq!(mp, vec![poly("-3", &b), poly("1", &b)]);
    }

    #[test]
    fn reduction_uses_lower_layers() {
        let mut t = Tower::new(&["a"]);
        let c0 = t.ctx().clone();
        t.push("R", &[poly("-a", &c0), poly("0", &c0), poly("1", &c0)]).unwrap();
        let c1 = t.ctx().clone();
        t.push("S", &[poly("-R", &c1), poly("0", &c1), poly("1", &c1)]).unwrap();
        let c = t.ctx().clone();
        assert_eq!(t.reduce(&poly("S^4", &c)).unwrap(), poly("a", &c));
        assert_eq!(t.min_poly(&poly("S", &c)).unwrap().len(), 5);
    }
}

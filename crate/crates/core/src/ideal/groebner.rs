//! Buchberger's algorithm over Q with integer-primitive internal
//! representation, normal selection strategy with sugar, and the
//! Gebauer–Möller pair criteria.

use crate::error::{Caps, EngineError, Result};
use crate::ring::{Ctx, Monomial, MonomialOrder, Polynomial, Q};
use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Zero};
use std::cmp::Ordering;
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

type Term = (Monomial, BigInt);

#[derive(Clone, Debug)]
struct IPoly {
    terms: Vec<Term>,
}

impl IPoly {
    fn from_poly(p: &Polynomial, ord: &MonomialOrder) -> (IPoly, Q) {
        let (mut terms, l) = p.clear_denominators();
        terms.sort_by(|a, b| ord.cmp(&b.0, &a.0));
        let mut ip = IPoly { terms };
        let c = ip.make_primitive();
        // ip = (l / c) p
        (ip, Q::new(l, c))
    }

    fn lm(&self) -> &Monomial {
        &self.terms[0].0
    }

    fn lc(&self) -> &BigInt {
        &self.terms[0].1
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for (_, c) in &self.terms {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Divide by the content with sign making the leading coefficient
    /// positive; returns the signed divisor.
    fn make_primitive(&mut self) -> BigInt {
        if self.terms.is_empty() {
            return BigInt::one();
        }
        let mut g = self.content();
        if self.terms[0].1.sign() == Sign::Minus {
            g = -g;
        }
        if !g.is_one() {
            for t in self.terms.iter_mut() {
                t.1 = &t.1 / &g;
            }
        }
        g
    }

    fn to_poly(&self, ctx: &Ctx) -> Polynomial {
        Polynomial::from_terms(
            ctx,
            self.terms.iter().map(|(m, c)| (m.clone(), Q::from_integer(c.clone()))),
        )
    }
}

/// alpha·a − beta·u·b, both inputs sorted by `ord`.
fn axpy(alpha: &BigInt, a: &[Term], beta: &BigInt, u: &Monomial, b: &[Term], ord: &MonomialOrder) -> Vec<Term> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    let one = alpha.is_one();
    let mut bj: Option<Monomial> = b.first().map(|t| t.0.mul(u));
    while i < a.len() && j < b.len() {
        let mb = bj.as_ref().unwrap();
        match ord.cmp(&a[i].0, mb) {
            Ordering::Greater => {
                let c = if one { a[i].1.clone() } else { alpha * &a[i].1 };
                out.push((a[i].0.clone(), c));
                i += 1;
            }
            Ordering::Less => {
                out.push((bj.take().unwrap(), -(beta * &b[j].1)));
                j += 1;
                bj = b.get(j).map(|t| t.0.mul(u));
            }
            Ordering::Equal => {
                let c = if one { a[i].1.clone() } else { alpha * &a[i].1 } - beta * &b[j].1;
                if !c.is_zero() {
                    out.push((a[i].0.clone(), c));
                }
                i += 1;
                j += 1;
                bj = b.get(j).map(|t| t.0.mul(u));
            }
        }
    }
    while i < a.len() {
        let c = if one { a[i].1.clone() } else { alpha * &a[i].1 };
        out.push((a[i].0.clone(), c));
        i += 1;
    }
    while j < b.len() {
        out.push((b[j].0.mul(u), -(beta * &b[j].1)));
        j += 1;
    }
    out
}

#[derive(Clone, Debug)]
struct Elem {
    p: IPoly,
    sugar: u64,
    /// p equals sum cof_i f_i (basis elements) or, during a traced
    /// reduction, p = scale·p0 + sum cof_i f_i.
    cof: Option<Vec<Polynomial>>,
}

fn cof_update(cof: &mut Option<Vec<Polynomial>>, alpha: &BigInt, beta: &BigInt, u: &Monomial, other: &Option<Vec<Polynomial>>) {
    if let (Some(c), Some(o)) = (cof.as_mut(), other.as_ref()) {
        let a = Q::from_integer(alpha.clone());
        let b = Q::from_integer(-beta.clone());
        for (ci, oi) in c.iter_mut().zip(o.iter()) {
            let t = &ci.scale(&a) + &oi.mul_monomial(u, &b);
            *ci = t;
        }
    }
}

fn cof_div(cof: &mut Option<Vec<Polynomial>>, d: &BigInt) {
    if d.is_one() {
        return;
    }
    if let Some(c) = cof.as_mut() {
        let inv = Q::new(BigInt::one(), d.clone());
        for ci in c.iter_mut() {
            *ci = ci.scale(&inv);
        }
    }
}

struct Reducer<'a> {
    ord: &'a MonomialOrder,
}

impl<'a> Reducer<'a> {
    fn find_divisor(&self, m: &Monomial, basis: &[Elem], active: &[usize]) -> Option<usize> {
        active.iter().copied().find(|&k| basis[k].p.lm().divides(m))
    }

    /// Fully reduce `e` by the active basis elements. `scale` accumulates the
    /// factor applied to the original input.
    fn reduce(&self, mut e: Elem, basis: &[Elem], active: &[usize], scale: &mut Q, top_only: bool) -> Elem {
        let mut done: Vec<Term> = Vec::new();
        let mut rest = std::mem::take(&mut e.p.terms);
        let mut pos = 0usize;
        let mut steps = 0usize;
        while pos < rest.len() {
            let m = &rest[pos].0;
            match self.find_divisor(m, basis, active) {
                None => {
                    if top_only && done.is_empty() {
                        done.extend(rest.drain(pos..));
                        break;
                    }
                    done.push(rest[pos].clone());
                    pos += 1;
                }
                Some(k) => {
                    let g = &basis[k];
                    let c = &rest[pos].1;
                    let lc = g.p.lc();
                    let d = c.gcd(lc);
                    let alpha = lc / &d;
                    let beta = c / &d;
                    let u = g.p.lm().quotient_of(m).unwrap();
                    rest = axpy(&alpha, &rest[pos + 1..], &beta, &u, &g.p.terms[1..], self.ord);
                    pos = 0;
                    if !alpha.is_one() {
                        for t in done.iter_mut() {
                            t.1 *= &alpha;
                        }
                        *scale *= Q::from_integer(alpha.clone());
                    }
                    cof_update(&mut e.cof, &alpha, &beta, &u, &g.cof);
                    e.sugar = e.sugar.max(g.sugar + u.degree());
                    steps += 1;
                    if steps.is_multiple_of(8) {
                        let mut cont = BigInt::zero();
                        for t in done.iter().chain(rest.iter()) {
                            cont = cont.gcd(&t.1);
                            if cont.is_one() {
                                break;
                            }
                        }
                        if !cont.is_one() && !cont.is_zero() {
                            for t in done.iter_mut().chain(rest.iter_mut()) {
                                t.1 = &t.1 / &cont;
                            }
                            *scale /= Q::from_integer(cont.clone());
                            cof_div(&mut e.cof, &cont);
                        }
                    }
                }
            }
        }
        e.p.terms = done;
        let g = e.p.make_primitive();
        if !g.is_one() {
            *scale /= Q::from_integer(g.clone());
            cof_div(&mut e.cof, &g);
        }
        e
    }
}

#[derive(Clone, Debug)]
struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
    sugar: u64,
}

fn spoly(a: &Elem, b: &Elem, lcm: &Monomial, ord: &MonomialOrder) -> Elem {
    let ua = a.p.lm().quotient_of(lcm).unwrap();
    let ub = b.p.lm().quotient_of(lcm).unwrap();
    let d = a.p.lc().gcd(b.p.lc());
    let ca = b.p.lc() / &d;
    let cb = a.p.lc() / &d;
    // ca·ua·a − cb·ub·b
    let left: Vec<Term> = a.p.terms[1..].iter().map(|(m, c)| (m.mul(&ua), c * &ca)).collect();
    let terms = axpy(&BigInt::one(), &left, &cb, &ub, &b.p.terms[1..], ord);
    let cof = match (&a.cof, &b.cof) {
        (Some(x), Some(y)) => {
            let qa = Q::from_integer(ca.clone());
            let qb = Q::from_integer(-cb.clone());
            Some(
                x.iter()
                    .zip(y.iter())
                    .map(|(xi, yi)| &xi.mul_monomial(&ua, &qa) + &yi.mul_monomial(&ub, &qb))
                    .collect(),
            )
        }
        _ => None,
    };
    Elem {
        p: IPoly { terms },
        sugar: (a.sugar + ua.degree()).max(b.sugar + ub.degree()),
        cof,
    }
}

struct Engine<'a> {
    ord: &'a MonomialOrder,
    all: Vec<Elem>,
    active: Vec<usize>,
    pairs: Vec<Pair>,
}

impl<'a> Engine<'a> {
    fn update(&mut self, h: usize) {
        let lh = self.all[h].p.lm().clone();
        let mut c: Vec<Pair> = self
            .active
            .iter()
            .map(|&g| {
                let lcm = self.all[g].p.lm().lcm(&lh);
                let sugar = {
                    let (a, b) = (&self.all[g], &self.all[h]);
                    let ua = a.p.lm().quotient_of(&lcm).unwrap().degree();
                    let ub = b.p.lm().quotient_of(&lcm).unwrap().degree();
                    (a.sugar + ua).max(b.sugar + ub)
                };
                Pair { i: g, j: h, lcm, sugar }
            })
            .collect();
        let mut d: Vec<Pair> = Vec::new();
        let mut idx = 0;
        while idx < c.len() {
            let p = c[idx].clone();
            let coprime = self.all[p.i].p.lm().coprime(&lh);
            let dominated = c[idx + 1..]
                .iter()
                .chain(d.iter())
                .any(|o| o.lcm.divides(&p.lcm));
            if coprime || !dominated {
                d.push(p);
            }
            idx += 1;
        }
        c.clear();
        let e: Vec<Pair> = d
            .into_iter()
            .filter(|p| !self.all[p.i].p.lm().coprime(&lh))
            .collect();
        let all = &self.all;
        self.pairs.retain(|p| {
            let l1 = all[p.i].p.lm().lcm(&lh);
            let l2 = all[p.j].p.lm().lcm(&lh);
            !(lh.divides(&p.lcm) && l1 != p.lcm && l2 != p.lcm)
        });
        self.pairs.extend(e);
        let all = &self.all;
        self.active.retain(|&g| !lh.divides(all[g].p.lm()));
        self.active.push(h);
    }

    fn select(&mut self) -> Option<Pair> {
        if self.pairs.is_empty() {
            return None;
        }
        let ord = self.ord;
        let mut best = 0;
        for k in 1..self.pairs.len() {
            let (a, b) = (&self.pairs[k], &self.pairs[best]);
            let c = a
                .sugar
                .cmp(&b.sugar)
                .then_with(|| ord.cmp(&a.lcm, &b.lcm))
                .then_with(|| (a.i, a.j).cmp(&(b.i, b.j)));
            if c == Ordering::Less {
                best = k;
            }
        }
        Some(self.pairs.swap_remove(best))
    }

    fn add(&mut self, e: Elem) -> Result<()> {
        let red = Reducer { ord: self.ord };
        let mut s = Q::one();
        let r = red.reduce(e, &self.all, &self.active, &mut s, false);
        if r.p.is_zero() {
            return Ok(());
        }
        if r.p.lm().is_one() {
            // unit ideal: keep only this element
            self.all.push(r);
            let h = self.all.len() - 1;
            self.active = vec![h];
            self.pairs.clear();
            return Ok(());
        }
        self.all.push(r);
        let h = self.all.len() - 1;
        self.update(h);
        Ok(())
    }

    fn run(&mut self) -> Result<()> {
        let cap = Caps::current().degree;
        while let Some(p) = self.select() {
            if p.sugar > cap {
                return Err(EngineError::DegreeCapExceeded { cap, degree: p.sugar });
            }
            let s = spoly(&self.all[p.i], &self.all[p.j], &p.lcm, self.ord);
            if s.p.is_zero() {
                continue;
            }
            self.add(s)?;
        }
        Ok(())
    }

    /// Interreduce the active elements into a reduced basis.
    fn finish(mut self) -> Vec<Elem> {
        let red = Reducer { ord: self.ord };
        let ord = self.ord;
        let mut act = self.active.clone();
        act.sort_by(|&a, &b| ord.cmp(self.all[a].p.lm(), self.all[b].p.lm()));
        let mut out = Vec::with_capacity(act.len());
        for (k, &g) in act.iter().enumerate() {
            let others: Vec<usize> =
                act.iter().enumerate().filter(|(j, _)| *j != k).map(|(_, &x)| x).collect();
            let e = self.all[g].clone();
            let lead = e.p.terms[0].clone();
            let tail = Elem {
                p: IPoly { terms: e.p.terms[1..].to_vec() },
                sugar: 0,
                cof: e.cof.as_ref().map(|c| zero_like(c)),
            };
            // tr = s·tail + tcof·f, hence s·g + tcof·f = s·lead + tr
            let mut s = Q::one();
            let tr = red.reduce(tail, &self.all, &others, &mut s, false);
            let mut terms = vec![(lead.0.clone(), Q::from_integer(lead.1.clone()) * &s)];
            terms.extend(tr.p.terms.iter().map(|(m, c)| (m.clone(), Q::from_integer(c.clone()))));
            let cof = match (&e.cof, &tr.cof) {
                (Some(ec), Some(tc)) => {
                    Some(ec.iter().zip(tc.iter()).map(|(a, b)| &a.scale(&s) + b).collect::<Vec<_>>())
                }
                _ => None,
            };
            let mut l = BigInt::one();
            for (_, c) in &terms {
                l = l.lcm(c.denom());
            }
            let lq = Q::from_integer(l);
            let iterms: Vec<Term> = terms.iter().map(|(m, c)| (m.clone(), (c * &lq).to_integer())).collect();
            let mut ip = IPoly { terms: iterms };
            let fac = lq / Q::from_integer(ip.make_primitive());
            let cof = cof.map(|v| v.into_iter().map(|c| c.scale(&fac)).collect());
            out.push(Elem { p: ip, sugar: e.sugar, cof });
            self.all[g] = out.last().unwrap().clone();
        }
        out
    }
}

fn zero_like(c: &[Polynomial]) -> Vec<Polynomial> {
    c.iter().map(|p| Polynomial::zero(p.ctx())).collect()
}

/// Reduced Gröbner basis with respect to `order`.
#[derive(Clone, Debug)]
pub struct GroebnerBasis {
    ctx: Ctx,
    order: MonomialOrder,
    basis: Vec<Polynomial>,
    internal: Vec<Elem>,
    cofactors: Option<Vec<Vec<Polynomial>>>,
    ngens: usize,
}

impl GroebnerBasis {
    pub fn ctx(&self) -> &Ctx {
        &self.ctx
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    /// Monic basis elements sorted by increasing leading monomial.
    pub fn basis(&self) -> &[Polynomial] {
        &self.basis
    }

    pub fn is_unit(&self) -> bool {
        self.basis.len() == 1 && self.basis[0].is_constant()
    }

    pub fn is_zero_ideal(&self) -> bool {
        self.basis.is_empty()
    }

    /// Cofactors expressing basis[k] in the tracked generators.
    pub fn cofactors(&self) -> Option<&[Vec<Polynomial>]> {
        self.cofactors.as_deref()
    }

    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.internal.iter().map(|e| e.p.lm().clone()).collect()
    }

    fn run_reduce(&self, p: &Polynomial, traced: bool) -> (IPoly, Q, Option<Vec<Polynomial>>) {
        let p = p.embed(&self.ctx).expect("polynomial outside the basis context");
        let (ip, s0) = IPoly::from_poly(&p, &self.order);
        let cof = if traced { Some(vec![Polynomial::zero(&self.ctx); self.ngens]) } else { None };
        let e = Elem { p: ip, sugar: 0, cof };
        let active: Vec<usize> = (0..self.internal.len()).collect();
        let red = Reducer { ord: &self.order };
        let mut scale = s0;
        let r = red.reduce(e, &self.internal, &active, &mut scale, false);
        (r.p, scale, r.cof)
    }

    /// Normal form of p.
    pub fn reduce(&self, p: &Polynomial) -> Polynomial {
        if p.is_zero() {
            return Polynomial::zero(&self.ctx);
        }
        let (r, scale, _) = self.run_reduce(p, false);
        r.to_poly(&self.ctx).scale(&(Q::one() / scale))
    }

    pub fn contains(&self, p: &Polynomial) -> bool {
        if p.is_zero() {
            return true;
        }
        if self.is_unit() {
            return true;
        }
        self.run_reduce(p, false).0.is_zero()
    }

    /// For p in the ideal, cofactors c with p = sum c_i f_i over the tracked
    /// generators.
    pub fn express(&self, p: &Polynomial) -> Option<Vec<Polynomial>> {
        self.cofactors.as_ref()?;
        if p.is_zero() {
            return Some(vec![Polynomial::zero(&self.ctx); self.ngens]);
        }
        let (r, scale, cof) = self.run_reduce(p, true);
        if !r.is_zero() {
            return None;
        }
        // 0 = scale·p + sum cof_i f_i
        let f = -Q::one() / scale;
        Some(cof.unwrap().into_iter().map(|c| c.scale(&f)).collect())
    }
}

fn compute(gens: &[Polynomial], ctx: &Ctx, order: &MonomialOrder, tracked: Option<usize>) -> Result<GroebnerBasis> {
    let mut elems: Vec<Elem> = Vec::new();
    for (k, g) in gens.iter().enumerate() {
        let g = g.embed(ctx)?;
        if g.is_zero() {
            continue;
        }
        Caps::check_degree(g.total_degree())?;
        let (ip, s) = IPoly::from_poly(&g, order);
        let cof = tracked.map(|n| {
            let mut v = vec![Polynomial::zero(ctx); n];
            if k < n {
                v[k] = Polynomial::constant(ctx, s.clone());
            }
            v
        });
        let sugar = g.total_degree();
        elems.push(Elem { p: ip, sugar, cof });
    }
    elems.sort_by(|a, b| order.cmp(a.p.lm(), b.p.lm()).then_with(|| a.p.terms.len().cmp(&b.p.terms.len())));
    let mut eng = Engine { ord: order, all: vec![], active: vec![], pairs: vec![] };
    for e in elems {
        eng.add(e)?;
        if eng.active.len() == 1 && eng.all[eng.active[0]].p.lm().is_one() && tracked.is_none() {
            break;
        }
    }
    eng.run()?;
    let fin = eng.finish();
    let mut basis = Vec::with_capacity(fin.len());
    let mut cofs = tracked.map(|_| Vec::with_capacity(fin.len()));
    let mut internal = Vec::with_capacity(fin.len());
    for e in fin {
        let p = e.p.to_poly(ctx);
        let lc = Q::from_integer(e.p.lc().clone());
        basis.push(p.scale(&(Q::one() / &lc)));
        if let (Some(cs), Some(c)) = (cofs.as_mut(), e.cof.as_ref()) {
            cs.push(c.iter().map(|x| x.scale(&(Q::one() / &lc))).collect());
        }
        internal.push(e);
    }
    Ok(GroebnerBasis {
        ctx: ctx.clone(),
        order: order.clone(),
        basis,
        internal,
        cofactors: cofs,
        ngens: tracked.unwrap_or(0),
    })
}

type CacheKey = (Vec<String>, MonomialOrder, Vec<Polynomial>);

fn cache() -> &'static Mutex<HashMap<CacheKey, Arc<GroebnerBasis>>> {
    static C: OnceLock<Mutex<HashMap<CacheKey, Arc<GroebnerBasis>>>> = OnceLock::new();
    C.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Gröbner basis of the ideal generated by `gens` (memoized).
pub fn groebner(gens: &[Polynomial], ctx: &Ctx, order: &MonomialOrder) -> Result<Arc<GroebnerBasis>> {
    let mut key_gens: Vec<Polynomial> = Vec::with_capacity(gens.len());
    for g in gens {
        let g = g.embed(ctx)?;
        if !g.is_zero() {
            key_gens.push(g);
        }
    }
    let key = (ctx.names().to_vec(), order.clone(), key_gens);
    if let Some(g) = cache().lock().unwrap().get(&key) {
        return Ok(g.clone());
    }
    let gb = Arc::new(compute(&key.2, ctx, order, None)?);
    let mut c = cache().lock().unwrap();
    if c.len() > 2048 {
        c.clear();
    }
    c.insert(key, gb.clone());
    Ok(gb)
}

/// Gröbner basis remembering cofactors for the first `tracked` generators;
/// later generators contribute with zero cofactors.
pub fn groebner_tracked(gens: &[Polynomial], tracked: usize, ctx: &Ctx, order: &MonomialOrder) -> Result<GroebnerBasis> {
    compute(gens, ctx, order, Some(tracked))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{poly, Vars};

    #[test]
    fn lex_example() {
        let c = Vars::new(&["x", "y"]);
        let g = groebner(&[poly("x^2-1", &c), poly("x*y-1", &c)], &c, &MonomialOrder::Lex).unwrap();
        let shown: Vec<String> = g.basis().iter().map(|p| p.to_string()).collect();
        assert_eq!(shown, vec!["y^2 - 1", "x - y"]);
        assert!(g.contains(&poly("y^2-1", &c)));
    }

    #[test]
    fn trivial_ideals() {
        let c = Vars::new(&["x"]);
        let z = groebner(&[Polynomial::zero(&c)], &c, &MonomialOrder::DegRevLex).unwrap();
        assert!(z.basis().is_empty());
        let o = groebner(&[poly("3", &c), poly("x", &c)], &c, &MonomialOrder::DegRevLex).unwrap();
        assert_eq!(o.basis().len(), 1);
        assert!(o.basis()[0].is_one());
    }

    #[test]
    fn cofactors_reconstruct() {
        let c = Vars::new(&["x", "y", "z"]);
        let gens = vec![poly("x^2+y*z-2", &c), poly("x*y-z^2+1", &c), poly("y^3-x*z", &c)];
        let g = groebner_tracked(&gens, 3, &c, &MonomialOrder::DegRevLex).unwrap();
        for (b, cf) in g.basis().iter().zip(g.cofactors().unwrap()) {
            let mut s = Polynomial::zero(&c);
            for (ci, fi) in cf.iter().zip(&gens) {
                s = &s + &(ci * fi);
            }
            assert_eq!(&s, b);
        }
        let target = &(&poly("x+z", &c) * &gens[0]) + &(&poly("y^2", &c) * &gens[2]);
        let cf = g.express(&target).unwrap();
        let mut s = Polynomial::zero(&c);
        for (ci, fi) in cf.iter().zip(&gens) {
            s = &s + &(ci * fi);
        }
        assert_eq!(s, target);
    }

    #[test]
    fn normal_form_is_exact() {
        let c = Vars::new(&["x", "y"]);
        let g = groebner(&[poly("x^2-2*y", &c), poly("y^2-3", &c)], &c, &MonomialOrder::DegRevLex).unwrap();
        assert_eq!(g.reduce(&poly("x^2+1/2", &c)), poly("2*y+1/2", &c));
        assert_eq!(g.reduce(&poly("5*x^4", &c)), poly("60", &c));
    }
}

//! From s ∈ 1 + M·B with s, s·x_i integral over A to one Hensel polynomial.
//!
//! D = A[s, s·x_1, ..., s·x_n] is presented by the kernel K of
//! Q[G_1..G_n, G_0, A] → B with G_0 ↦ s and G_i ↦ s·x_i.  For an exponent
//! r_0, each s^{r_0}·m (m a monomial in the G_i) is written modulo K as a
//! combination of M; reducing the cofactors modulo K keeps the G-monomials
//! among the standard ones, which bounds the module generators.  With
//! s^{r_0}·m = R(s)·m + μ_0(s) and d = det(T^{r_0} - R), d(s)·m = adj·μ_0.
//! The same exponent gives s^{r_0}(s - 1) ∈ M·D, hence μ(s) = s^q d(s)(s - 1)
//! with μ ∈ M·A[T] and h = T^q d (T - 1) - μ.

use super::system::HenselSystem;
use crate::error::{Caps, EngineError, Result};
use crate::ideal::{groebner, groebner_tracked, Algebra, GroebnerBasis, Subalgebra};
use crate::integrality::IntegralityCertificate;
use crate::ring::{q, univ, Ctx, Exp, Monomial, MonomialOrder, PolyMatrix, Polynomial, Vars};
use std::collections::BTreeMap;

#[derive(Clone, Debug)]
pub struct MhlResult {
    pub s: Polynomial,
    /// the variable T, then the base variables
    pub tctx: Ctx,
    /// module generators m_1..m_ℓ as exponent vectors in s·x_1..s·x_n
    pub module_keys: Vec<Vec<Exp>>,
    /// the same generators as elements of B
    pub module_gens: Vec<Polynomial>,
    pub r0: u32,
    pub q: u32,
    /// d ≡ T^N modulo M
    pub n_exp: u32,
    /// R[j][i]: coefficient of m_i in s^{r_0}·m_j
    pub matrix: PolyMatrix,
    pub mu0: Vec<Polynomial>,
    pub d: Polynomial,
    /// d(s)·m_j = ν_j(s)
    pub nu_module: Vec<Polynomial>,
    /// μ(s) = s^q d(s)(s - 1)
    pub mu: Polynomial,
    pub h: Polynomial,
    /// q(T) = T·d(T), with q(s)·x_i = ν_i(s)
    pub qpoly: Polynomial,
    pub nu: Vec<Polynomial>,
    /// f(X) = h(1 + X), in [X] + base
    pub fctx: Ctx,
    pub f: Polynomial,
}

/// A combination Σ_key coeff(T, A)·G^key.
type Rep = BTreeMap<Vec<Exp>, Polynomial>;

struct Reducer {
    n: usize,
    kctx: Ctx,
    tctx: Ctx,
    kernel: std::sync::Arc<GroebnerBasis>,
    traced: GroebnerBasis,
    maximal: Vec<Polynomial>,
    ps: Polynomial,
}

impl Reducer {
    fn split(&self, p: &Polynomial) -> Rep {
        let mut out: BTreeMap<Vec<Exp>, Vec<(Monomial, crate::ring::Q)>> = BTreeMap::new();
        for (m, c) in p.terms() {
            let key = m.exps()[..self.n].to_vec();
            out.entry(key).or_default().push((Monomial::from_exps(&m.exps()[self.n..]), c.clone()));
        }
        out.into_iter()
            .map(|(k, ts)| (k, univ::divide_by_monic(&Polynomial::from_terms(&self.tctx, ts), &self.ps, 0).1))
            .filter(|(_, c)| !c.is_zero())
            .collect()
    }

    /// p = Σ_key μ_key(s)·G^key with every μ_key in M·A[T], when p ∈ K + M.
    fn over_maximal(&self, p: &Polynomial) -> Option<Rep> {
        let cof = self.traced.express(p)?;
        let mut acc = Polynomial::zero(&self.kctx);
        for (c, m) in cof.iter().zip(&self.maximal) {
            acc = &acc + &(&self.kernel.reduce(c) * m);
        }
        Some(self.split(&acc))
    }

    fn key_poly(&self, key: &[Exp]) -> Polynomial {
        let mut e = key.to_vec();
        e.resize(self.kctx.len(), 0);
        Polynomial::monomial(&self.kctx, Monomial::from_exps(&e), q(1))
    }

    fn g0_pow(&self, r: u32) -> Polynomial {
        Polynomial::var(&self.kctx, self.n).pow(r)
    }
}

struct Attempt {
    keys: Vec<Vec<Exp>>,
    rows: Vec<Rep>,
    v_rep: Rep,
}

fn attempt(red: &Reducer, r0: u32, seeds: &[Vec<Exp>]) -> Result<Option<Attempt>> {
    let zero_key = vec![0; red.n];
    let g0r = red.g0_pow(r0);
    let v = &g0r * &(&red.g0_pow(1) - &Polynomial::one(&red.kctx));
    let Some(v_rep) = red.over_maximal(&v) else { return Ok(None) };
    let mut keys: Vec<Vec<Exp>> = Vec::new();
    let push = |k: &Vec<Exp>, keys: &mut Vec<Vec<Exp>>| {
        if *k != zero_key && !keys.contains(k) {
            keys.push(k.clone());
        }
    };
    for k in seeds.iter().chain(v_rep.keys()) {
        push(k, &mut keys);
    }
    let mut rows = Vec::new();
    let mut j = 0;
    while j < keys.len() {
        if keys.len() as u32 > Caps::current().branch {
            return Err(EngineError::BranchBlowup { cap: Caps::current().branch });
        }
        let target = &g0r * &red.key_poly(&keys[j]);
        let Some(rep) = red.over_maximal(&target) else { return Ok(None) };
        for k in rep.keys() {
            push(k, &mut keys);
        }
        rows.push(rep);
        j += 1;
    }
    Ok(Some(Attempt { keys, rows, v_rep }))
}

fn combine(rep: &Rep, keys: &[Vec<Exp>], nu: &[Polynomial], d: &Polynomial) -> Polynomial {
    let mut acc = Polynomial::zero(d.ctx());
    for (k, c) in rep {
        if k.iter().all(|&e| e == 0) {
            acc = &acc + &(c * d);
        } else {
            let i = keys.iter().position(|x| x == k).expect("key among the module generators");
            acc = &acc + &(c * &nu[i]);
        }
    }
    acc
}

pub fn mhl_reduce(sys: &HenselSystem, b: &Algebra, s: &Polynomial, s_cert: &IntegralityCertificate) -> Result<MhlResult> {
    let n = sys.n();
    let octx = b.ctx().clone();
    let base_vars = sys.base_vars();
    let s = s.embed(&octx)?;
    let mut gens = vec![s.clone()];
    for i in 0..n {
        gens.push(&s * &Polynomial::var_named(&octx, &sys.xs[i])?);
    }
    let sub = Subalgebra::new(b, &base_vars, &gens, "G")?;
    let tags = sub.tags().to_vec();
    let mut names: Vec<String> = tags[1..].to_vec();
    names.push(tags[0].clone());
    names.extend(base_vars.iter().cloned());
    let kctx = Vars::new(&names);
    let kernel_gens: Vec<Polynomial> = sub.kernel().iter().map(|k| k.embed(&kctx)).collect::<Result<_>>()?;
    let order = MonomialOrder::Block(vec![n, n + 1]);
    let kernel = groebner(&kernel_gens, &kctx, &order)?;
    let maximal: Vec<Polynomial> = sys.maximal.iter().map(|m| m.embed(&kctx)).collect::<Result<_>>()?;
    let mut tracked_gens = maximal.clone();
    tracked_gens.extend(kernel_gens.iter().cloned());
    let traced = groebner_tracked(&tracked_gens, maximal.len(), &kctx, &order)?;

    let t = sys.base.ctx().fresh("T");
    let tctx = Vars::new(&[t.as_str()]).extend(&base_vars);
    let ps_coeffs: Vec<Polynomial> = s_cert.coeffs.iter().map(|c| c.embed(&tctx)).collect::<Result<_>>()?;
    let ps = Polynomial::from_coeffs_in(&tctx, 0, &ps_coeffs);
    if !ps.lc_in(0).is_one() {
        return Err(EngineError::Precondition("the certificate for s is not monic".into()));
    }
    let red = Reducer { n, kctx: kctx.clone(), tctx: tctx.clone(), kernel, traced, maximal, ps };

    // s·x_i written over the standard monomials
    let x_reps: Vec<Rep> = (0..n).map(|i| red.split(&red.kernel.reduce(&Polynomial::var(&kctx, i)))).collect();
    let seeds: Vec<Vec<Exp>> = x_reps.iter().flat_map(|r| r.keys().cloned()).collect();

    let tvar = Polynomial::var(&tctx, 0);
    let one = Polynomial::one(&tctx);
    let cap = Caps::current().exponent;
    for r0 in 0..=cap {
        let Some(at) = attempt(&red, r0, &seeds)? else { continue };
        let l = at.keys.len();
        let mut mat = PolyMatrix::zeros(&tctx, l, l);
        let mut mu0 = vec![Polynomial::zero(&tctx); l];
        for (j, row) in at.rows.iter().enumerate() {
            for (k, c) in row {
                match at.keys.iter().position(|x| x == k) {
                    Some(i) => mat.set(j, i, c.clone()),
                    None => mu0[j] = c.clone(),
                }
            }
        }
        let tr = tvar.pow(r0);
        let a = PolyMatrix::identity(&tctx, l).scale(&tr).sub(&mat)?;
        let d = a.det_ff()?;
        if !d.lc_in(0).is_one() || d.degree_in(0) != r0 * l as u32 {
            continue;
        }
        let nu_module: Vec<Polynomial> = if l == 0 {
            vec![]
        } else {
            a.adjugate()?.mul_vec(&mu0)?.iter().map(|v| univ::divide_by_monic(v, &red.ps, 0).1).collect()
        };
        let qexp = r0;
        let mu = univ::divide_by_monic(&combine(&at.v_rep, &at.keys, &nu_module, &d), &red.ps, 0).1;
        let g = &(&tvar.pow(qexp) * &d) * &(&tvar - &one);
        let h = &g - &mu;
        if !h.lc_in(0).is_one() {
            continue;
        }
        let qpoly = &tvar * &d;
        let nu: Vec<Polynomial> = x_reps
            .iter()
            .map(|r| univ::divide_by_monic(&combine(r, &at.keys, &nu_module, &d), &red.ps, 0).1)
            .collect();
        let xname = sys.base.ctx().fresh("X");
        let fctx = Vars::new(&[xname.as_str()]).extend(&base_vars);
        let mut fimgs = vec![&Polynomial::var(&fctx, 0) + &Polynomial::one(&fctx)];
        fimgs.extend((1..fctx.len()).map(|i| Polynomial::var(&fctx, i)));
        let f = h.eval_map(&fimgs, &fctx);
        let module_gens: Vec<Polynomial> = at
            .keys
            .iter()
            .map(|k| {
                let mut p = Polynomial::one(&octx);
                for (i, &e) in k.iter().enumerate() {
                    p = &p * &gens[i + 1].pow(e);
                }
                p
            })
            .collect();
        let res = MhlResult {
            s: s.clone(),
            tctx: tctx.clone(),
            module_keys: at.keys,
            module_gens,
            r0,
            q: qexp,
            n_exp: r0 * l as u32,
            matrix: mat,
            mu0,
            d,
            nu_module,
            mu,
            h,
            qpoly,
            nu,
            fctx,
            f,
        };
        let bad = reduce_failures(sys, b, &res)?;
        if !bad.is_empty() {
            return Err(EngineError::InvariantRecheckFailed(bad.join("; ")));
        }
        return Ok(res);
    }
    Err(EngineError::ExponentCapExceeded { cap })
}

/// Evaluate a polynomial of [T] + base at T = s in B.
pub fn at_s(b: &Algebra, tctx: &Ctx, p: &Polynomial, s: &Polynomial) -> Result<Polynomial> {
    let octx = b.ctx();
    let mut imgs = vec![s.embed(octx)?];
    for name in &tctx.names()[1..] {
        imgs.push(Polynomial::var_named(octx, name)?);
    }
    Ok(p.embed(tctx)?.eval_map(&imgs, octx))
}

/// Zero in B, falling back to B localized at its point when A is local.
fn zero_in_b(sys: &HenselSystem, b: &Algebra, p: &Polynomial) -> Result<bool> {
    if b.is_zero(p)? {
        return Ok(true);
    }
    match sys.local_quotient() {
        Ok(l) => l.is_zero(&p.embed(l.ctx())?),
        Err(_) => Ok(false),
    }
}

/// Checks of a Hensel polynomial h for s ∈ B: monic, h(s) = 0, h ≡
/// T^k (T - 1) modulo M, h'(1) ∈ 1 + M.  Failure reasons by name.
pub fn check_hensel_polynomial(sys: &HenselSystem, b: &Algebra, tctx: &Ctx, s: &Polynomial, h: &Polynomial) -> Result<Vec<String>> {
    let mut out = Vec::new();
    let h = h.embed(tctx)?;
    if !h.lc_in(0).is_one() {
        out.push("NotMonic".to_string());
        return Ok(out);
    }
    if !zero_in_b(sys, b, &at_s(b, tctx, &h, s)?)? {
        out.push("NotAnnihilating".into());
    }
    let k = h.degree_in(0).saturating_sub(1);
    let tv = Polynomial::var(tctx, 0);
    let shape = &h - &(&tv.pow(k) * &(&tv - &Polynomial::one(tctx)));
    let bctx = sys.base.ctx();
    let mut shape_ok = h.degree_in(0) >= 1;
    for c in shape.coeffs_in(0) {
        if shape_ok && !sys.in_maximal(&c.embed(bctx)?)? {
            shape_ok = false;
        }
    }
    if !shape_ok {
        out.push("ResidualShape".into());
    }
    let mut ones = vec![Polynomial::one(tctx)];
    ones.extend((1..tctx.len()).map(|i| Polynomial::var(tctx, i)));
    let h1 = &h.derivative(0).eval_map(&ones, tctx) - &Polynomial::one(tctx);
    if !sys.in_maximal(&h1.embed(bctx)?)? {
        out.push("DerivativeAtOne".into());
    }
    Ok(out)
}

/// Every invariant of a reduction result, by failure name.
pub fn reduce_failures(sys: &HenselSystem, b: &Algebra, r: &MhlResult) -> Result<Vec<String>> {
    let mut out = check_hensel_polynomial(sys, b, &r.tctx, &r.s, &r.h)?;
    let octx = b.ctx();
    let qs = at_s(b, &r.tctx, &r.qpoly, &r.s)?;
    let mut recovery = r.nu.len() == sys.n();
    for (i, nu) in r.nu.iter().enumerate() {
        if !recovery {
            break;
        }
        let x = Polynomial::var_named(octx, &sys.xs[i])?;
        recovery = zero_in_b(sys, b, &(&(&qs * &x) - &at_s(b, &r.tctx, nu, &r.s)?))?;
    }
    if !recovery {
        out.push("RecoveryIdentity".into());
    }
    let mut fimgs = vec![&Polynomial::var(&r.fctx, 0) + &Polynomial::one(&r.fctx)];
    fimgs.extend((1..r.fctx.len()).map(|i| Polynomial::var(&r.fctx, i)));
    if r.h.embed(&r.tctx)?.eval_map(&fimgs, &r.fctx) != r.f {
        out.push("ShiftedPolynomial".into());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ideal::{AlgebraPresentation, Localization};
    use crate::integrality::CoefficientLocation;
    use crate::ring::poly;

    #[test]
    fn no_unknowns() {
        let a = Vars::new(&["a"]);
        let base = AlgebraPresentation::new(&a, vec![], Localization::PointIdeal(vec!["a".into()])).unwrap();
        let sys = HenselSystem::new(&base, &[poly("a", &a)], &[], &[]).unwrap();
        let b = sys.quotient().unwrap();
        let one = Polynomial::one(b.ctx());
        let cert = IntegralityCertificate::new(&b, one.clone(), &["a".into()], vec![-&one, one.clone()], CoefficientLocation::OverBase, "Trivial").unwrap();
        let r = mhl_reduce(&sys, &b, &one, &cert).unwrap();
        assert_eq!(r.h, poly("T-1", &r.tctx));
        assert!(r.module_keys.is_empty());
    }

    #[test]
    fn tampered_polynomials_are_rejected() {
        let a = Vars::new(&["a"]);
        let base = AlgebraPresentation::new(&a, vec![], Localization::PointIdeal(vec!["a".into()])).unwrap();
        let sys = HenselSystem::new(&base, &[poly("a", &a)], &[], &[]).unwrap();
        let b = sys.quotient().unwrap();
        let tctx = Vars::new(&["T", "a"]);
        let one = Polynomial::one(b.ctx());
        let ok = check_hensel_polynomial(&sys, &b, &tctx, &one, &poly("T^2-T+a*T-a", &tctx)).unwrap();
        assert!(ok.is_empty(), "{ok:?}");
        let bad = check_hensel_polynomial(&sys, &b, &tctx, &one, &poly("T^2-1", &tctx)).unwrap();
        assert!(bad.contains(&"ResidualShape".to_string()));
        let bad = check_hensel_polynomial(&sys, &b, &tctx, &one, &poly("T-2", &tctx)).unwrap();
        assert!(bad.contains(&"NotAnnihilating".to_string()));
        let bad = check_hensel_polynomial(&sys, &b, &tctx, &one, &poly("2*T-2", &tctx)).unwrap();
        assert_eq!(bad, vec!["NotMonic".to_string()]);
    }
}

//! The crucial lemma: t integral over R[x] with t·x ∈ √(I·S), S = R[x,t],
//! gives m and y ∈ I·S with a = t^m - y in the conductor J = (R[x] : S).
//!
//! R is carried as Q[coeff_vars] plus certified elements.  The relation Q of
//! t·x over I·R[x] is combined with the relation P of t through the
//! subresultant chain of P and Q in T.  Principal coefficients that vanish
//! in S are branches closed by a zero test; the first one that does not
//! vanish decides the collapse.  A degree-one collapse s_1(x)·t = -c(x) is
//! shifted into an element v integral over R, after which t lies in
//! R[v][x] up to a power of the leading coefficient of s_1.

use super::subresultant::{subresultant_chain, SubresultantChain};
use crate::error::{Caps, EngineError, Result};
use crate::ideal::{member_traced, radical_member, Algebra, Ideal, Subalgebra};
use crate::integrality::{lying_over_cert, shift_cert, IntegralityCertificate, ShiftResult};
use crate::ring::{Ctx, Polynomial, Vars};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Transcendence {
    Holds,
    /// u·c_index ≠ 0
    FailsAt { index: usize },
}

#[derive(Clone, Debug)]
pub struct StrongTranscendenceReport {
    pub u: Polynomial,
    pub coeffs: Vec<Polynomial>,
    pub x: Polynomial,
    pub verdict: Transcendence,
}

/// One instance of the strong transcendence condition: given
/// u·Σ c_j x^j = 0, check u·c_j = 0 for every j.
pub fn strong_transcendence_check(
    owner: &Algebra,
    u: &Polynomial,
    coeffs: &[Polynomial],
    x: &Polynomial,
) -> Result<StrongTranscendenceReport> {
    let octx = owner.ctx();
    let u = u.embed(octx)?;
    let x = x.embed(octx)?;
    let coeffs: Vec<Polynomial> = coeffs.iter().map(|c| c.embed(octx)).collect::<Result<_>>()?;
    let value = crate::ring::univ::horner(&coeffs, &x);
    if !owner.is_zero(&(&u * &value))? {
        return Err(EngineError::HypothesisNotSatisfied("u·(Σ c_j x^j) is not zero".into()));
    }
    let mut verdict = Transcendence::Holds;
    for (j, c) in coeffs.iter().enumerate() {
        if !owner.is_zero(&(&u * c))? {
            verdict = Transcendence::FailsAt { index: j };
            break;
        }
    }
    Ok(StrongTranscendenceReport { u, coeffs, x, verdict })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CrucialBranch {
    /// t itself lies in √(I·S)
    Radical,
    /// x = 0 in S, so t is integral over R
    XVanishes,
    /// the relation for t does not involve x
    FreeOfX,
    /// gcd collapse at subresultant index 1
    Collapse,
}

#[derive(Clone, Debug)]
pub struct CrucialWitness {
    pub m: u32,
    pub y: Polynomial,
    pub a: Polynomial,
    pub n: usize,
    /// generators of R[x] over Q[kept]: x, then the elements of R used
    pub kept: Vec<String>,
    pub r_gens: Vec<Polynomial>,
    /// a·t^i for i < n as polynomials in the tags of r_gens and kept
    pub conductor_evidence: Vec<Polynomial>,
    /// new elements of R found on the way, with their certificates
    pub new_elements: Vec<IntegralityCertificate>,
    pub shift: Option<ShiftResult>,
    pub branch: CrucialBranch,
    pub trace: Vec<String>,
}

struct Formal {
    ctx: Ctx,
    x: usize,
    t: usize,
    names: Vec<String>,
}

impl Formal {
    fn new(coeff_vars: &[String]) -> Self {
        let base = Vars::new(coeff_vars);
        let xn = base.fresh("X");
        let with_x = base.extend(&[xn.as_str()]);
        let tn = with_x.fresh("T");
        let ctx = with_x.extend(&[tn.as_str()]);
        Formal { x: ctx.len() - 2, t: ctx.len() - 1, names: coeff_vars.to_vec(), ctx }
    }

    /// Formal image of a polynomial in coeff_vars and `xvar`.
    fn from_coeff(&self, c: &Polynomial, xvar: &str) -> Result<Polynomial> {
        let names: Vec<String> = self.names.iter().cloned().chain([xvar.to_string()]).collect();
        let src = Vars::new(&names);
        let imgs: Vec<Polynomial> = (0..names.len()).map(|i| Polynomial::var(&self.ctx, i)).collect();
        Ok(c.embed(&src)?.eval_map(&imgs, &self.ctx))
    }

    fn in_t(&self, coeffs: &[Polynomial]) -> Polynomial {
        Polynomial::from_coeffs_in(&self.ctx, self.t, coeffs)
    }

    /// Owner image with X ↦ x and T ↦ t.
    fn to_owner(&self, p: &Polynomial, x: &Polynomial, t: &Polynomial) -> Polynomial {
        let octx = x.ctx();
        let imgs: Vec<Polynomial> = (0..self.ctx.len())
            .map(|i| {
                if i == self.x {
                    x.clone()
                } else if i == self.t {
                    t.clone()
                } else {
                    Polynomial::var_named(octx, &self.names[i]).unwrap()
                }
            })
            .collect();
        p.eval_map(&imgs, octx)
    }

    /// Coefficients in X of a polynomial free of T, as owner polynomials.
    fn x_coeffs(&self, p: &Polynomial, octx: &Ctx) -> Vec<Polynomial> {
        let zero_x = Polynomial::zero(octx);
        p.coeffs_in(self.x).iter().map(|c| self.to_owner(c, &zero_x, &zero_x)).collect()
    }
}

/// Relation for t·x over I·Q[coeff_vars][x] as formal coefficients in T: a
/// degree-one witness t·x = μ(x) when one exists, lying over otherwise.
fn relation_for_tx(
    owner: &Algebra,
    fm: &Formal,
    t: &Polynomial,
    x: &Polynomial,
    xvar: &str,
    n: usize,
    ideal: &[Polynomial],
    coeff_vars: &[String],
    trace: &mut Vec<String>,
) -> Result<Vec<Polynomial>> {
    let tx = t * x;
    let rctx = Vars::new(coeff_vars);
    let rideal = Ideal::new(&rctx, ideal.iter().map(|g| g.embed_unchecked(&rctx)));
    let sub = Subalgebra::new(owner, coeff_vars, std::slice::from_ref(x), "Y")?;
    if let Some(w) = sub.member(&tx)? {
        let parts = w.coeffs_in(0);
        let mut inside = true;
        for p in &parts {
            if !crate::ideal::member(&p.embed(&rctx)?, &rideal)? {
                inside = false;
                break;
            }
        }
        if inside {
            // Q = X·T - μ(X)
            let imgs: Vec<Polynomial> = (0..sub.ctx().len())
                .map(|i| {
                    if i == 0 {
                        Polynomial::var(&fm.ctx, fm.x)
                    } else {
                        Polynomial::var_named(&fm.ctx, &sub.ctx().names()[i]).unwrap()
                    }
                })
                .collect();
            let mu = w.eval_map(&imgs, &fm.ctx);
            trace.push(format!("degree one relation: t·x = {w}"));
            return Ok(vec![-&mu, Polynomial::var(&fm.ctx, fm.x)]);
        }
    }
    let octx = owner.ctx();
    if octx.index(xvar).map(|i| Polynomial::var(octx, i)) != Some(x.clone()) {
        return Err(EngineError::Unsupported("lying over on t·x needs x to be a variable of S".into()));
    }
    let mut lvars = coeff_vars.to_vec();
    lvars.push(xvar.to_string());
    let gens: Vec<Polynomial> = (0..n as u32).map(|i| t.pow(i)).collect();
    let lo = lying_over_cert(owner, &tx, ideal, &gens, &lvars, None)?;
    let cert = lo.minimal.unwrap_or(lo.cert);
    let e = lo.exponent as usize;
    trace.push(format!("lying over: (t·x)^{e} has a relation of degree {}", cert.degree()));
    // Q(X, T) = Σ c_k(X) (X T)^(e k)
    let xt = &Polynomial::var(&fm.ctx, fm.x) * &Polynomial::var(&fm.ctx, fm.t);
    let mut q = Polynomial::zero(&fm.ctx);
    for (k, c) in cert.coeffs.iter().enumerate() {
        let cf = fm.from_coeff(&c.embed(&Vars::new(&lvars))?, xvar)?;
        q = &q + &(&cf * &xt.pow((e * k) as u32));
    }
    Ok(q.coeffs_in(fm.t))
}

fn conductor_evidence(
    sub: &Subalgebra,
    a: &Polynomial,
    t: &Polynomial,
    n: usize,
) -> Result<Option<Vec<Polynomial>>> {
    let mut out = Vec::new();
    let mut p = a.clone();
    for _ in 0..n {
        match sub.member(&p)? {
            Some(w) => out.push(w),
            None => return Ok(None),
        }
        p = &p * t;
    }
    Ok(Some(out))
}

/// `rel`: monic relation for t with coefficients in `coeff_vars` and `xvar`
/// (standing for x).  `r_elems`: elements of S known to be integral over
/// Q[coeff_vars], which are treated as part of R.
#[allow(clippy::too_many_arguments)]
pub fn crucial_lemma(
    owner: &Algebra,
    coeff_vars: &[String],
    r_elems: &[IntegralityCertificate],
    x: &Polynomial,
    t: &Polynomial,
    rel: &[Polynomial],
    xvar: &str,
    ideal: &[Polynomial],
) -> Result<CrucialWitness> {
    let octx = owner.ctx();
    let x = x.embed(octx)?;
    let t = t.embed(octx)?;
    let ideal: Vec<Polynomial> = ideal.iter().map(|g| g.embed(octx)).collect::<Result<_>>()?;
    if rel.len() < 2 || !rel.last().unwrap().is_one() {
        return Err(EngineError::Precondition("the relation for t must be monic of positive degree".into()));
    }
    let n = rel.len() - 1;
    let is = owner.relations().with(&ideal);
    let mut trace = Vec::new();
    let hyp = radical_member(&(&t * &x), &is)?;
    if !hyp.member {
        return Err(EngineError::HypothesisNotSatisfied("t·x is not in the radical of I·S".into()));
    }
    let mut r_gens = vec![x.clone()];
    r_gens.extend(r_elems.iter().map(|c| c.element.clone()));
    let finish = |m: u32,
                  y: Polynomial,
                  a: Polynomial,
                  r_gens: Vec<Polynomial>,
                  new_elements: Vec<IntegralityCertificate>,
                  shift: Option<ShiftResult>,
                  branch: CrucialBranch,
                  trace: Vec<String>|
     -> Result<CrucialWitness> {
        let sub = Subalgebra::new(owner, coeff_vars, &r_gens, "R")?;
        let ev = conductor_evidence(&sub, &a, &t, n)?.ok_or_else(|| {
            EngineError::InvariantRecheckFailed("conductor criterion fails for the produced element".into())
        })?;
        Ok(CrucialWitness {
            m,
            y,
            a,
            n,
            kept: coeff_vars.to_vec(),
            r_gens,
            conductor_evidence: ev,
            new_elements,
            shift,
            branch,
            trace,
        })
    };

    let rad = radical_member(&t, &is)?;
    if rad.member {
        let m = rad.exponent.ok_or(EngineError::ExponentCapExceeded { cap: Caps::current().exponent })?;
        trace.push(format!("t^{m} ∈ I·S"));
        let y = t.pow(m);
        return finish(m, y, Polynomial::zero(octx), r_gens, vec![], None, CrucialBranch::Radical, trace);
    }

    let fm = Formal::new(coeff_vars);
    let p_formal = fm.in_t(&rel.iter().map(|c| fm.from_coeff(c, xvar)).collect::<Result<Vec<_>>>()?);

    let vanishes = owner.is_zero(&x)?;
    if vanishes || !p_formal.uses_var(fm.x) {
        // t is integral over R: drop x from its relation
        let zero = Polynomial::zero(octx);
        let coeffs: Vec<Polynomial> =
            p_formal.coeffs_in(fm.t).iter().map(|c| fm.to_owner(c, &zero, &zero)).collect();
        let cert = IntegralityCertificate::new(
            owner,
            t.clone(),
            coeff_vars,
            coeffs,
            crate::integrality::CoefficientLocation::OverBase,
            "Crucial",
        )?;
        crate::integrality::require_verified(&cert)?;
        let branch = if vanishes { CrucialBranch::XVanishes } else { CrucialBranch::FreeOfX };
        trace.push(if vanishes { "x = 0 in S" } else { "the relation for t is free of x" }.into());
        r_gens.push(t.clone());
        return finish(1, zero, t.clone(), r_gens, vec![cert], None, branch, trace);
    }

    let q_coeffs = relation_for_tx(owner, &fm, &t, &x, xvar, n, &ideal, coeff_vars, &mut trace)?;
    let q_formal = fm.in_t(&q_coeffs);
    let chain: SubresultantChain = subresultant_chain(&p_formal, &q_formal, fm.t)?;
    let cap = Caps::current().branch;
    let mut ell = None;
    for j in 0..chain.degree() {
        if j as u32 >= cap {
            return Err(EngineError::BranchBlowup { cap });
        }
        let sj = fm.to_owner(&chain.principal[j], &x, &t);
        if owner.is_zero(&sj)? {
            trace.push(format!("s_{j} = 0 in S"));
            continue;
        }
        trace.push(format!("s_{j} ≠ 0 in S"));
        ell = Some(j);
        break;
    }
    let ell = match ell {
        Some(j) => j,
        None => {
            return Err(EngineError::Unsupported("every principal subresultant coefficient vanishes".into()));
        }
    };
    if ell != 1 {
        return Err(EngineError::Unsupported(format!("gcd collapse at subresultant index {ell}")));
    }
    // Sr_1 = s_1(X)·T + c(X) vanishes at (x, t)
    let sr1 = &chain.chain[1];
    let parts = sr1.coeffs_in(fm.t);
    let s1 = fm.x_coeffs(&parts[1], octx);
    let sr = shift_cert(owner, &t, &x, &s1, rel, xvar, coeff_vars)?;
    trace.push(format!("shift: v = {} with certificate of degree {}", sr.element, sr.cert.degree()));
    let lead = s1.iter().rev().find(|c| !c.is_zero()).cloned().unwrap();
    let u = lead.pow(sr.m * (n as u32 - 1));
    r_gens.push(sr.element.clone());
    let new_elements = vec![sr.cert.clone()];
    let sub = Subalgebra::new(owner, coeff_vars, &r_gens, "R")?;
    // a = t^m itself when it already satisfies the conductor criterion
    for m in 1..=Caps::current().exponent {
        let tm = t.pow(m);
        if conductor_evidence(&sub, &tm, &t, n)?.is_some() {
            let zero = Polynomial::zero(octx);
            return finish(m, zero, tm, r_gens, new_elements, Some(sr), CrucialBranch::Collapse, trace);
        }
        let mut gens = ideal.clone();
        gens.push(u.clone());
        let k = gens.len();
        gens.extend(owner.relations().gens().iter().cloned());
        if let Some(cof) = member_traced(&tm, &Ideal::new(octx, gens))? {
            let a = &u * &cof[k - 1];
            let y = &tm - &a;
            return finish(m, y, a, r_gens, new_elements, Some(sr), CrucialBranch::Collapse, trace);
        }
    }
    Err(EngineError::ExponentCapExceeded { cap: Caps::current().exponent })
}

/// Independent re-check of a crucial witness against t and I.
pub fn verify_crucial(owner: &Algebra, w: &CrucialWitness, t: &Polynomial, ideal: &[Polynomial]) -> Result<bool> {
    let t = t.embed(owner.ctx())?;
    if w.a != &t.pow(w.m) - &w.y {
        return Ok(false);
    }
    if !owner.in_ideal(&w.y, ideal)? {
        return Ok(false);
    }
    let sub = Subalgebra::new(owner, &w.kept, &w.r_gens, "R")?;
    let mut p = w.a.clone();
    for ev in &w.conductor_evidence {
        if sub.member(&p)?.is_none() || !owner.equal(&sub.evaluate(ev)?, &p)? {
            return Ok(false);
        }
        p = &p * &t;
    }
    Ok(w.conductor_evidence.len() == w.n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ideal::{AlgebraPresentation, Localization};
    use crate::integrality::verify_cert;
    use crate::ring::poly;

    #[test]
    fn strong_transcendence_examples() {
        let c = Vars::new(&["x"]);
        let d = AlgebraPresentation::polynomial_ring(&c);
        let r = strong_transcendence_check(&d, &poly("1", &c), &[poly("0", &c)], &poly("x", &c)).unwrap();
        assert_eq!(r.verdict, Transcendence::Holds);

        let c = Vars::new(&["x", "c"]);
        let d = AlgebraPresentation::new(&c, vec![poly("c*x", &c)], Localization::None).unwrap();
        let r = strong_transcendence_check(&d, &poly("1", &c), &[poly("0", &c), poly("c", &c)], &poly("x", &c))
            .unwrap();
        assert_eq!(r.verdict, Transcendence::FailsAt { index: 1 });
        let r = strong_transcendence_check(&d, &poly("0", &c), &[poly("1", &c)], &poly("x", &c)).unwrap();
        assert_eq!(r.verdict, Transcendence::Holds);
        let e = strong_transcendence_check(&d, &poly("1", &c), &[poly("1", &c)], &poly("x", &c));
        assert!(matches!(e, Err(EngineError::HypothesisNotSatisfied(_))));
    }

    /// S = A[x, t] inside the two-equation example, presented by its kernel.
    fn example_s() -> (Algebra, Vec<String>) {
        let c = Vars::new(&["x", "y", "a", "b"]);
        let rels = vec![poly("-a + x + b*x*y + 2*b*x^2", &c), poly("-b + y + a*x^2 + a*x*y + b*y^2", &c)];
        let b = AlgebraPresentation::new(&c, rels, Localization::None).unwrap();
        let vars = vec!["a".to_string(), "b".to_string()];
        let sub = Subalgebra::new(&b, &vars, &[poly("x", &c), poly("1+a*x+b*y", &c)], "G").unwrap();
        let s = AlgebraPresentation::new(sub.ctx(), sub.kernel().to_vec(), Localization::None).unwrap();
        (s, vars)
    }

    #[test]
    fn degree_one_collapse() {
        let (s, vars) = example_s();
        let c = s.ctx().clone();
        let (x, t) = (poly("G0", &c), poly("G1", &c));
        let rel = vec![poly("-b^2+a*b*G0^2", &c), poly("-(1+a*G0)", &c), poly("1", &c)];
        let ideal = vec![poly("a", &c), poly("b", &c)];
        let w = crucial_lemma(&s, &vars, &[], &x, &t, &rel, "G0", &ideal).unwrap();
        assert_eq!(w.branch, CrucialBranch::Collapse);
        let sh = w.shift.as_ref().unwrap();
        assert_eq!(sh.element, poly("G1-(a-2*b)*G0", &c));
        assert!(s.equal(&(&sh.element * &x), &poly("a", &c)).unwrap());
        assert_eq!(verify_cert(&sh.cert), Ok(()));
        assert!(verify_crucial(&s, &w, &t, &ideal).unwrap());
    }

    #[test]
    fn element_already_in_the_ideal() {
        let c = Vars::new(&["x", "t", "a"]);
        let s = AlgebraPresentation::new(&c, vec![poly("t^2-a*t", &c)], Localization::None).unwrap();
        let vars = vec!["a".to_string()];
        let rel = vec![poly("0", &c), poly("-a", &c), poly("1", &c)];
        let ideal = vec![poly("a", &c)];
        let w = crucial_lemma(&s, &vars, &[], &poly("x", &c), &poly("t", &c), &rel, "x", &ideal).unwrap();
        assert_eq!(w.branch, CrucialBranch::Radical);
        assert!(w.a.is_zero());
        assert!(verify_crucial(&s, &w, &poly("t", &c), &ideal).unwrap());
    }

    #[test]
    fn vanishing_x() {
        let c = Vars::new(&["x", "t", "a"]);
        let s = AlgebraPresentation::new(&c, vec![poly("x", &c), poly("t^2-t-a", &c)], Localization::None).unwrap();
        let vars = vec!["a".to_string()];
        let rel = vec![poly("-a", &c), poly("-1", &c), poly("1", &c)];
        let ideal = vec![poly("a", &c)];
        let w = crucial_lemma(&s, &vars, &[], &poly("x", &c), &poly("t", &c), &rel, "x", &ideal).unwrap();
        assert_eq!(w.branch, CrucialBranch::XVanishes);
        assert!(verify_crucial(&s, &w, &poly("t", &c), &ideal).unwrap());
    }

    #[test]
    fn hypothesis_checked() {
        let c = Vars::new(&["x", "t", "a"]);
        let s = AlgebraPresentation::new(&c, vec![poly("t-1", &c)], Localization::None).unwrap();
        let rel = vec![poly("-1", &c), poly("1", &c)];
        let e = crucial_lemma(&s, &["a".into()], &[], &poly("x", &c), &poly("t", &c), &rel, "x", &[poly("a", &c)]);
        assert!(matches!(e, Err(EngineError::HypothesisNotSatisfied(_))));
    }
}

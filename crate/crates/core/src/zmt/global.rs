//! The global form for quasi-finite algebras.
//!
//! A witness is a list a_1..a_p of base elements together with, for every
//! subset I of indices, monic relations for the generators over
//! (A/⟨a_i, i ∈ I⟩)[1/Π_{i∉I} a_i].  The inverse of a_i is written with a
//! dedicated variable z_i, so all relations live in B's context extended by
//! the z's.  Induction on p: the quotient by a = a_p gives s_1..s_m, the main
//! theorem on A[s_i, s_i x_j] with I = aA gives w, inverting a gives t_k,
//! and the family is (w s_i, a^N t_k).

use super::main::zmt_main;
use super::problem::{find_residual, integral_relation, ZmtProblem};
use crate::error::{Caps, EngineError, Result};
use crate::ideal::{member_traced, Algebra, AlgebraPresentation, Ideal, Localization, Subalgebra};
use crate::integrality::{require_verified, verify_cert, CoefficientLocation, IntegralityCertificate};
use crate::ring::{Ctx, Polynomial};

#[derive(Clone, Debug)]
pub struct QuasiFiniteComponent {
    /// indices i with a_i killed; the others are inverted
    pub killed: Vec<usize>,
    /// one monic relation per generator, coefficients over the base and the z's
    pub relations: Vec<Vec<Polynomial>>,
}

#[derive(Clone, Debug)]
pub struct QuasiFiniteWitness {
    pub elements: Vec<Polynomial>,
    /// names of the inverse variables z_i
    pub inverses: Vec<String>,
    /// context of the relations: B's variables then the z's
    pub ctx: Ctx,
    pub components: Vec<QuasiFiniteComponent>,
}

/// The ring B_(a,I) and its coefficient variables.
fn component_ring(
    b: &Algebra,
    base: &[String],
    elements: &[Polynomial],
    inverses: &[String],
    ctx: &Ctx,
    killed: &[usize],
) -> Result<(Algebra, Vec<String>)> {
    let mut rels: Vec<Polynomial> = b.relations().gens().iter().map(|r| r.embed(ctx)).collect::<Result<_>>()?;
    let mut coeff = base.to_vec();
    for (i, a) in elements.iter().enumerate() {
        let a = a.embed(ctx)?;
        if killed.contains(&i) {
            rels.push(a);
        } else {
            let z = Polynomial::var_named(ctx, &inverses[i])?;
            rels.push(&(&a * &z) - &Polynomial::one(ctx));
            coeff.push(inverses[i].clone());
        }
    }
    Ok((AlgebraPresentation::new(ctx, rels, Localization::None)?, coeff))
}

fn subsets(p: usize) -> Vec<Vec<usize>> {
    (0..1usize << p).map(|m| (0..p).filter(|i| m >> i & 1 == 1).collect()).collect()
}

impl QuasiFiniteWitness {
    /// Fill in the relations for every subset by elimination.
    pub fn search(b: &Algebra, base: &[String], gens: &[String], elements: &[Polynomial]) -> Result<Self> {
        let stems: Vec<String> = (0..elements.len()).map(|i| b.ctx().fresh(&format!("Z{}_", i + 1))).collect();
        let ctx = b.ctx().extend(&stems);
        let mut components = Vec::new();
        for killed in subsets(elements.len()) {
            let (ring, coeff) = component_ring(b, base, elements, &stems, &ctx, &killed)?;
            let relations = gens
                .iter()
                .map(|x| {
                    integral_relation(&ring, &coeff, x)?.ok_or_else(|| {
                        EngineError::WitnessSearchExhausted(format!("{x} is not integral on the component {killed:?}"))
                    })
                })
                .collect::<Result<_>>()?;
            components.push(QuasiFiniteComponent { killed, relations });
        }
        Ok(QuasiFiniteWitness { elements: elements.to_vec(), inverses: stems, ctx, components })
    }

    fn component(&self, killed: &[usize]) -> Result<&QuasiFiniteComponent> {
        self.components
            .iter()
            .find(|c| {
                let mut k = c.killed.clone();
                k.sort_unstable();
                k == killed
            })
            .ok_or_else(|| EngineError::ShapeError(format!("the witness has no component for {killed:?}")))
    }

    /// Check every relation in its component ring.
    pub fn verify(&self, b: &Algebra, base: &[String], gens: &[String]) -> Result<Vec<String>> {
        let mut failures = Vec::new();
        for killed in subsets(self.elements.len()) {
            let comp = match self.component(&killed) {
                Ok(c) => c,
                Err(e) => {
                    failures.push(e.to_string());
                    continue;
                }
            };
            if comp.relations.len() != gens.len() {
                failures.push(format!("component {killed:?} needs one relation per generator"));
                continue;
            }
            let (ring, coeff) = component_ring(b, base, &self.elements, &self.inverses, &self.ctx, &killed)?;
            for (x, r) in gens.iter().zip(&comp.relations) {
                let cert = IntegralityCertificate::new(
                    &ring,
                    Polynomial::var_named(ring.ctx(), x)?,
                    &coeff,
                    r.clone(),
                    CoefficientLocation::OverBase,
                    "Witness",
                )?;
                if let Err(f) = verify_cert(&cert) {
                    failures.push(format!("component {killed:?}, generator {x}: {f}"));
                }
            }
        }
        Ok(failures)
    }
}

#[derive(Clone, Debug)]
pub struct GlobalZmtResult {
    pub family: Vec<Polynomial>,
    /// c_i with 1 = Σ c_i s_i modulo the relations
    pub comaximality: Vec<Polynomial>,
    pub certs: Vec<IntegralityCertificate>,
    /// certs[i][j] is for s_i·x_j
    pub x_certs: Vec<Vec<IntegralityCertificate>>,
}

struct Level {
    b: Algebra,
    base: Vec<String>,
    /// indices still to be split, in order
    pending: Vec<usize>,
    killed: Vec<usize>,
}

struct Member {
    s: Polynomial,
    cert: IntegralityCertificate,
    x_certs: Vec<IntegralityCertificate>,
}

fn unit_member(b: &Algebra, base: &[String], x_rels: Vec<(Polynomial, Vec<Polynomial>)>) -> Result<Member> {
    let ctx = b.ctx();
    let one = Polynomial::one(ctx);
    let cert =
        IntegralityCertificate::new(b, one.clone(), base, vec![-&one, one.clone()], CoefficientLocation::OverBase, "Witness")?;
    let x_certs = x_rels
        .into_iter()
        .map(|(x, r)| {
            let c = IntegralityCertificate::new(b, x, base, r, CoefficientLocation::OverBase, "Witness")?;
            require_verified(&c)?;
            Ok(c)
        })
        .collect::<Result<_>>()?;
    Ok(Member { s: one, cert, x_certs })
}

/// a^N·Σ c_e z^e = Σ c_e a^(N-e) when every e ≤ N.
fn clear(p: &Polynomial, z: usize, a: &Polynomial, n: u32, target: &Ctx) -> Option<Polynomial> {
    let cs = p.coeffs_in(z);
    if cs.len() as u32 > n + 1 && cs[n as usize + 1..].iter().any(|c| !c.is_zero()) {
        return None;
    }
    let mut acc = Polynomial::zero(p.ctx());
    for (e, c) in cs.iter().enumerate() {
        acc = &acc + &(c * &a.pow(n - e as u32));
    }
    acc.embed(target).ok()
}

/// Certificate for a^N·e in the ring without z, from one for e over base ∪ {z}.
fn scaled_cert(
    b: &Algebra,
    base: &[String],
    c: &IntegralityCertificate,
    z: usize,
    a: &Polynomial,
    n: u32,
) -> Option<IntegralityCertificate> {
    let lctx = c.owner.ctx();
    let ctx = b.ctx();
    let al = a.embed(lctx).ok()?;
    let element = clear(&c.element, z, &al, n, ctx)?;
    let d = c.coeffs.len() - 1;
    let mut coeffs = Vec::with_capacity(d + 1);
    for (k, q) in c.coeffs.iter().enumerate() {
        let q = q.embed(lctx).ok()?;
        coeffs.push(clear(&q, z, &al, n * (d - k) as u32, ctx)?);
    }
    let cert = IntegralityCertificate::new(b, element, base, coeffs, CoefficientLocation::OverBase, "Global").ok()?;
    verify_cert(&cert).ok()?;
    Some(cert)
}

fn family(w: &QuasiFiniteWitness, lv: &Level, gens: &[String]) -> Result<Vec<Member>> {
    let b = &lv.b;
    let ctx = b.ctx().clone();
    let xs: Vec<Polynomial> = gens.iter().map(|x| Polynomial::var_named(&ctx, x)).collect::<Result<_>>()?;
    let Some((&i, rest)) = lv.pending.split_last() else {
        let mut killed = lv.killed.clone();
        killed.sort_unstable();
        let comp = w.component(&killed)?;
        let rels = xs
            .iter()
            .zip(&comp.relations)
            .map(|(x, r)| Ok((x.clone(), r.iter().map(|c| c.embed(&ctx)).collect::<Result<Vec<_>>>()?)))
            .collect::<Result<_>>()?;
        return Ok(vec![unit_member(b, &lv.base, rels)?]);
    };
    let a = w.elements[i].embed(&ctx)?;

    // modulo a
    let mut killed = lv.killed.clone();
    killed.push(i);
    let quot = Level { b: b.with_relations(std::slice::from_ref(&a))?, base: lv.base.clone(), pending: rest.to_vec(), killed };
    let ss = family(w, &quot, gens)?;
    let mut bgens = Vec::new();
    for m in &ss {
        bgens.push(m.s.clone());
        for x in &xs {
            bgens.push(&m.s * x);
        }
    }
    let sub = Subalgebra::new(b, &lv.base, &bgens, "S")?;
    let bp = AlgebraPresentation::new(sub.ctx(), sub.kernel().to_vec(), Localization::None)?;
    let ideal = vec![a.embed(sub.ctx())?];
    let tags = sub.tags().to_vec();
    let residual = find_residual(&bp, &lv.base, &tags, &ideal)?;
    let prob = ZmtProblem::new(&bp, &lv.base, &tags, &ideal, residual)?;
    let r = zmt_main(&prob)?;
    let wv = sub.evaluate(&r.s)?;
    let transport = |c: &IntegralityCertificate| -> Result<IntegralityCertificate> {
        let coeffs = c.coeffs.iter().map(|q| q.embed(&ctx)).collect::<Result<_>>()?;
        let e = sub.evaluate(&c.element)?;
        let t = IntegralityCertificate::new(b, e, &lv.base, coeffs, CoefficientLocation::OverBase, "Global")?;
        require_verified(&t)?;
        Ok(t)
    };
    let mut out = Vec::new();
    let stride = xs.len() + 1;
    for (k, m) in ss.iter().enumerate() {
        let cert = transport(&r.x_certs[k * stride])?;
        let x_certs = (1..stride).map(|j| transport(&r.x_certs[k * stride + j])).collect::<Result<_>>()?;
        out.push(Member { s: &wv * &m.s, cert, x_certs });
    }

    // inverting a
    let zname = &w.inverses[i];
    let lctx = ctx.extend(&[zname.as_str()]);
    let zi = lctx.require(zname)?;
    let al = a.embed(&lctx)?;
    let mut rels: Vec<Polynomial> = b.relations().gens().iter().map(|g| g.embed(&lctx)).collect::<Result<_>>()?;
    rels.push(&(&al * &Polynomial::var(&lctx, zi)) - &Polynomial::one(&lctx));
    let mut lbase = lv.base.clone();
    lbase.push(zname.clone());
    let loc = Level {
        b: AlgebraPresentation::new(&lctx, rels, Localization::None)?,
        base: lbase,
        pending: rest.to_vec(),
        killed: lv.killed.clone(),
    };
    let ts = family(w, &loc, gens)?;

    // N with every a^N t_k, a^N t_k x_j certified over the base and
    // 1 ∈ ⟨w s_i, a^N t_k⟩
    let one = Polynomial::one(&ctx);
    'search: for n in 0..=Caps::current().exponent {
        let mut scaled = Vec::new();
        for m in &ts {
            let Some(cert) = scaled_cert(b, &lv.base, &m.cert, zi, &a, n) else { continue 'search };
            let mut x_certs = Vec::new();
            for c in &m.x_certs {
                let Some(c) = scaled_cert(b, &lv.base, c, zi, &a, n) else { continue 'search };
                x_certs.push(c);
            }
            scaled.push(Member { s: cert.element.clone(), cert, x_certs });
        }
        let mut gs: Vec<Polynomial> = out.iter().chain(&scaled).map(|m| m.s.clone()).collect();
        gs.extend(b.relations().gens().iter().cloned());
        if member_traced(&one, &Ideal::new(&ctx, gs))?.is_some() {
            out.extend(scaled);
            return Ok(out);
        }
    }
    Err(EngineError::MembershipSearchExhausted("no power of a is a combination of the localized family".into()))
}

pub fn zmt_global(b: &Algebra, base: &[String], gens: &[String], w: &QuasiFiniteWitness) -> Result<GlobalZmtResult> {
    let failures = w.verify(b, base, gens)?;
    if !failures.is_empty() {
        return Err(EngineError::HypothesisNotSatisfied(format!("witness does not verify: {}", failures.join("; "))));
    }
    let top = Level { b: b.clone(), base: base.to_vec(), pending: (0..w.elements.len()).rev().collect(), killed: vec![] };
    let mut members = family(w, &top, gens)?;
    // zero members contribute nothing; repeated members are kept once
    let mut kept: Vec<Member> = Vec::new();
    for m in members.drain(..) {
        if b.is_zero(&m.s)? {
            continue;
        }
        let mut dup = false;
        for k in &kept {
            if b.equal(&k.s, &m.s)? {
                dup = true;
                break;
            }
        }
        if !dup {
            kept.push(m);
        }
    }
    let ctx = b.ctx();
    let mut gs: Vec<Polynomial> = kept.iter().map(|m| m.s.clone()).collect();
    gs.extend(b.relations().gens().iter().cloned());
    let cof = member_traced(&Polynomial::one(ctx), &Ideal::new(ctx, gs))?
        .ok_or_else(|| EngineError::InvariantRecheckFailed("the family is not comaximal".into()))?;
    let comaximality = cof[..kept.len()].to_vec();
    Ok(GlobalZmtResult {
        family: kept.iter().map(|m| m.s.clone()).collect(),
        comaximality,
        certs: kept.iter().map(|m| m.cert.clone()).collect(),
        x_certs: kept.into_iter().map(|m| m.x_certs).collect(),
    })
}

/// Independent re-check; returns the list of failed invariants.
pub fn verify_global(b: &Algebra, base: &[String], gens: &[String], r: &GlobalZmtResult) -> Result<Vec<String>> {
    let ctx = b.ctx();
    let mut failures = Vec::new();
    let mut combo = Polynomial::zero(ctx);
    for (c, s) in r.comaximality.iter().zip(&r.family) {
        combo = &combo + &(c * s);
    }
    if r.comaximality.len() != r.family.len() || !b.equal(&combo, &Polynomial::one(ctx))? {
        failures.push("1 is not the recorded combination of the family".to_string());
    }
    if r.certs.len() != r.family.len() || r.x_certs.len() != r.family.len() {
        failures.push("one certificate set per family member is required".into());
        return Ok(failures);
    }
    for (i, s) in r.family.iter().enumerate() {
        let c = &r.certs[i];
        if !b.equal(&c.element, s)? {
            failures.push(format!("certificate {i} is not for {s}"));
        }
        if r.x_certs[i].len() != gens.len() {
            failures.push(format!("member {i} needs one certificate per generator"));
            continue;
        }
        for (j, x) in gens.iter().enumerate() {
            let cx = &r.x_certs[i][j];
            if !b.equal(&cx.element, &(s * &Polynomial::var_named(ctx, x)?))? {
                failures.push(format!("certificate for member {i} times {x} has the wrong element"));
            }
        }
        for c in std::iter::once(c).chain(&r.x_certs[i]) {
            if let Err(f) = verify_cert(c) {
                failures.push(format!("certificate for {}: {f}", c.element));
            }
            if c.coeff_vars.iter().any(|v| !base.contains(v)) {
                failures.push(format!("certificate for {} is not over the base", c.element));
            }
        }
    }
    Ok(failures)
}

//! Lying over: elements of √(I·S) are integral over I, with the relation
//! read off the characteristic polynomial of a multiplication matrix.

use super::cert::{require_verified, CoefficientLocation, IntegralityCertificate};
use super::tower::{krylov_min_poly, Coords};
use crate::error::{Caps, EngineError, Result};
use crate::ideal::{member, Algebra, AlgebraPresentation, Ideal, Subalgebra};
use crate::ring::{Combiner, Ctx, Monomial, PolyMatrix, Polynomial, Vars, Q};

#[derive(Clone, Debug)]
pub struct LyingOver {
    /// n with x^n ∈ I·S
    pub exponent: u32,
    /// multiplication by x^n on the module generators, entries in I
    pub matrix: PolyMatrix,
    /// characteristic polynomial certificate for x^n
    pub cert: IntegralityCertificate,
    /// minimal relation on the cyclic vector 1, when it also lies over I
    pub minimal: Option<IntegralityCertificate>,
}

fn degree_ladder() -> impl Iterator<Item = u32> {
    [0u32, 1, 2, 4, 8, 16].into_iter()
}

fn monomials_upto(n: usize, d: u32) -> Vec<Monomial> {
    let mut out = vec![Monomial::one(n)];
    let mut frontier = out.clone();
    for _ in 0..d {
        let mut next = Vec::new();
        for m in &frontier {
            let last = m.exps().iter().rposition(|&e| e > 0).unwrap_or(0);
            for i in last..n {
                next.push(m.mul(&Monomial::var(n, i, 1)));
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// Express each x^n·s_j as Σ_i M_ij s_i with M_ij ∈ I (coefficients in the
/// coefficient variables), by linear solves with a growing degree bound.
fn multiplication_matrix(
    owner: &Algebra,
    xn: &Polynomial,
    ideal: &[Polynomial],
    gens: &[Polynomial],
    rctx: &Ctx,
) -> Result<Option<PolyMatrix>> {
    let octx = owner.ctx();
    let gb = owner.gb()?;
    let ridx: Vec<usize> = rctx.names().iter().map(|n| octx.index(n).unwrap()).collect();
    let m = gens.len();
    let mut comb = Combiner::new();
    // candidate labels: (ideal generator, monomial of R, module generator)
    let mut labels: Vec<(usize, Monomial, usize)> = Vec::new();
    let mut seen = 0usize;
    let targets: Vec<Polynomial> = gens.iter().map(|s| gb.reduce(&(xn * s))).collect();
    for d in degree_ladder() {
        Caps::check_degree(d as u64)?;
        let monos = monomials_upto(rctx.len(), d);
        for mono in monos.iter().skip(seen) {
            let mut exps = vec![0u32; octx.len()];
            for (k, &i) in ridx.iter().enumerate() {
                exps[i] = mono.exp(k);
            }
            let om = Monomial::from_exps(&exps);
            for (gi, g) in ideal.iter().enumerate() {
                for (si, s) in gens.iter().enumerate() {
                    let cand = gb.reduce(&(g * s).mul_monomial(&om, &Q::from_integer(1.into())));
                    comb.push(&cand);
                    labels.push((gi, mono.clone(), si));
                }
            }
        }
        seen = monos.len();
        let sols: Vec<Option<Vec<Q>>> = targets.iter().map(|t| comb.express(t)).collect();
        if sols.iter().all(|s| s.is_some()) {
            let rideal: Vec<Polynomial> = ideal.iter().map(|g| g.embed(rctx)).collect::<Result<_>>()?;
            let mut mat = PolyMatrix::zeros(rctx, m, m);
            for (j, sol) in sols.into_iter().enumerate() {
                for (c, (gi, mono, si)) in sol.unwrap().into_iter().zip(labels.iter()) {
                    if num_traits::Zero::is_zero(&c) {
                        continue;
                    }
                    let add = rideal[*gi].mul_monomial(mono, &c);
                    let cur = mat.get(*si, j).clone();
                    mat.set(*si, j, &cur + &add);
                }
            }
            return Ok(Some(mat));
        }
    }
    Ok(None)
}

/// Certificate for x^n over the ideal I of the coefficient ring Q[coeff_vars].
/// `module_gens` should generate the finite extension as a module; when the
/// first one is 1 the minimal relation is also attempted.
pub fn lying_over_cert(
    owner: &Algebra,
    x: &Polynomial,
    ideal: &[Polynomial],
    module_gens: &[Polynomial],
    coeff_vars: &[String],
    exponent: Option<u32>,
) -> Result<LyingOver> {
    let octx = owner.ctx();
    let rctx = Vars::new(coeff_vars);
    let x = x.embed(octx)?;
    let ideal: Vec<Polynomial> = ideal.iter().map(|g| g.embed(octx)).collect::<Result<_>>()?;
    for g in &ideal {
        if !g.uses_only_named(coeff_vars) {
            return Err(EngineError::Precondition(format!("ideal generator {g} is not in the coefficient ring")));
        }
    }
    let gens: Vec<Polynomial> = module_gens.iter().map(|g| g.embed(octx)).collect::<Result<_>>()?;
    if gens.is_empty() {
        return Err(EngineError::ModuleGensInsufficient("no module generators".into()));
    }
    let in_base = x.uses_only_named(coeff_vars);
    let exps: Vec<u32> = match exponent {
        Some(n) => vec![n],
        None => (1..=Caps::current().exponent).collect(),
    };
    let rideal = Ideal::new(&rctx, ideal.iter().map(|g| g.embed_unchecked(&rctx)));
    for n in exps {
        let xn = x.try_pow(n)?;
        let matrix = if in_base {
            let xr = xn.embed(&rctx)?;
            if !member(&xr, &rideal)? {
                continue;
            }
            PolyMatrix::identity(&rctx, gens.len()).scale(&xr)
        } else {
            if !owner.in_ideal(&xn, &ideal)? {
                continue;
            }
            match multiplication_matrix(owner, &xn, &ideal, &gens, &rctx)? {
                Some(m) => m,
                None => {
                    if exponent.is_some() {
                        return Err(EngineError::ModuleGensInsufficient(format!(
                            "multiplication by {xn} is not expressible on the given generators"
                        )));
                    }
                    continue;
                }
            }
        };
        let loc = CoefficientLocation::OverIdeal(ideal.clone());
        let cp = matrix.char_poly_coeffs()?;
        let cert = IntegralityCertificate::new(owner, xn.clone(), coeff_vars, cp, loc.clone(), "LyingOver")?;
        require_verified(&cert)?;
        let minimal = if gens[0].constant_value().is_some_and(|c| !num_traits::Zero::is_zero(&c)) {
            minimal_on_one(&matrix, &rctx)?.and_then(|mp| {
                if mp.len() >= cert.coeffs.len() {
                    return None;
                }
                let c = IntegralityCertificate::new(owner, xn.clone(), coeff_vars, mp, loc.clone(), "LyingOver").ok()?;
                super::cert::verify_cert(&c).ok().map(|_| c)
            })
        } else {
            None
        };
        return Ok(LyingOver { exponent: n, matrix, cert, minimal });
    }
    Err(EngineError::ModuleGensInsufficient(format!(
        "no power of {x} up to the exponent cap has an expressible multiplication matrix over the ideal"
    )))
}

fn minimal_on_one(m: &PolyMatrix, rctx: &Ctx) -> Result<Option<Vec<Polynomial>>> {
    let n = m.rows();
    let to_coords = |v: &[Polynomial]| -> Coords {
        v.iter().enumerate().filter(|(_, p)| !p.is_zero()).map(|(i, p)| (vec![i as u32], p.clone())).collect()
    };
    let mut e0 = vec![Polynomial::zero(rctx); n];
    e0[0] = Polynomial::one(rctx);
    let mut cur = e0.clone();
    krylov_min_poly(rctx, n, to_coords(&e0), |_| {
        cur = m.mul_vec(&cur)?;
        Ok(to_coords(&cur))
    })
}

/// Polynomials g_i in the tags (standing for the b's) and the coefficient
/// variables with 1 = Σ b_i·g_i(b) modulo `modulo`·S.
#[derive(Clone, Debug)]
pub struct UnitExpression {
    /// context: tags then coefficient variables
    pub ctx: Ctx,
    pub tags: Vec<String>,
    pub g: Vec<Polynomial>,
    /// the owner images Σ b_i g_i(b)
    pub value: Polynomial,
}

pub fn lying_over_unit(
    owner: &Algebra,
    bs: &[Polynomial],
    coeff_vars: &[String],
    modulo: &[Polynomial],
) -> Result<UnitExpression> {
    let ring: Algebra = if modulo.is_empty() { owner.clone() } else { owner.with_relations(modulo)? };
    let sub = Subalgebra::new(&ring, coeff_vars, bs, "B")?;
    let tags: Vec<Polynomial> = (0..bs.len()).map(|j| sub.tag(j)).collect();
    let one = Polynomial::one(owner.ctx());
    let g = sub.ideal_member(&one, &tags)?.ok_or_else(|| {
        EngineError::WitnessSearchExhausted("1 is not in the ideal generated by the given elements".into())
    })?;
    let mut sum = Polynomial::zero(sub.ctx());
    for (t, gi) in tags.iter().zip(&g) {
        sum = &sum + &(t * gi);
    }
    let value = sub.evaluate(&sum)?;
    if !AlgebraPresentation::in_ideal(owner, &(&value - &one), modulo)? {
        return Err(EngineError::InvariantRecheckFailed("unit expression does not reproduce 1".into()));
    }
    Ok(UnitExpression { ctx: sub.ctx().clone(), tags: sub.tags().to_vec(), g, value })
}

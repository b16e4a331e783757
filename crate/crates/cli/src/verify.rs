//! Re-checks of stored artifacts.  Positive claims are checked from their
//! certificates (cofactor identities, certificate relations, zero tests);
//! negative claims such as non-membership have no certificate and are
//! decided again.

use crate::error::{CliError, CliResult};
use crate::execute::hensel_system;
use crate::problem::{parse_order, ProblemFile};
use crate::schema::*;
use zmtforge_core::hensel::{
    check_hensel_polynomial, localized_at_f, monicize, newton_failures, verify_transport, HenselSystem, NewtonState,
    TransportedZero,
};
use zmtforge_core::ideal::{groebner, member, radical_member, Ideal};
use zmtforge_core::integrality::verify_cert;
use zmtforge_core::ring::{Polynomial, Vars};
use zmtforge_core::zmt::{verify_global, verify_zmt, GlobalZmtResult, ZmtProblem, ZmtResult};

fn eng<T>(stage: &str, r: zmtforge_core::Result<T>) -> CliResult<T> {
    r.map_err(|e| CliError::engine(stage, e))
}

fn combination(cof: &[Polynomial], gens: &[Polynomial]) -> Option<Polynomial> {
    if cof.len() != gens.len() {
        return None;
    }
    let ctx = gens.first().map(|g| g.ctx().clone())?;
    Some(cof.iter().zip(gens).fold(Polynomial::zero(&ctx), |acc, (c, g)| &acc + &(c * g)))
}

fn input_matches(p: &ProblemFile, input: &[String]) -> CliResult<Verdict> {
    let ctx = p.ctx();
    let mut expect = p.relations_in(&ctx)?;
    expect.extend(p.ideal_in(&ctx)?);
    let got = read_all("input", input, &ctx)?;
    let bad = if got == expect { vec![] } else { vec!["stored input differs from the problem".to_string()] };
    Ok(Verdict::new("input echo", bad))
}

/// Check a bundle without recomputing it.
pub fn verify_bundle(b: &CertificateBundle) -> CliResult<Vec<Verdict>> {
    let mut vs = vec![Verdict::new(
        "schema",
        if b.schema == BUNDLE_SCHEMA && b.version == BUNDLE_VERSION { vec![] } else { vec!["unknown schema".into()] },
    )];
    b.problem.validate()?;
    if let Some(t) = b.problem.task {
        if t != b.task {
            vs.push(Verdict::new("task echo", vec![format!("problem is for {}, bundle for {}", t.name(), b.task.name())]));
        }
    }
    let caps = b.problem.caps();
    vs.extend(caps.scope(|| check_artifacts(&b.problem, &b.artifacts))?);
    Ok(vs)
}

pub fn check_artifacts(p: &ProblemFile, a: &Artifacts) -> CliResult<Vec<Verdict>> {
    let ctx = p.ctx();
    let mut out = Vec::new();
    match a {
        Artifacts::Gb { order, input, basis, cofactors } => {
            out.push(input_matches(p, input)?);
            let input = read_all("input", input, &ctx)?;
            let basis = read_all("basis", basis, &ctx)?;
            let mut bad = Vec::new();
            if cofactors.len() != basis.len() {
                bad.push("one cofactor row per basis element is required".to_string());
            }
            for (i, (g, row)) in basis.iter().zip(cofactors).enumerate() {
                let row = read_all("cofactors", row, &ctx)?;
                if combination(&row, &input).as_ref() != Some(g) {
                    bad.push(format!("basis[{i}] is not the recorded combination"));
                }
            }
            out.push(Verdict::new("basis lies in the ideal", bad));
            let ord = parse_order(order)?;
            let gb = eng("gb", groebner(&basis, &ctx, &ord))?;
            let mut bad = Vec::new();
            if gb.basis() != basis.as_slice() {
                bad.push("the basis is not a reduced Gröbner basis".to_string());
            }
            for (j, g) in input.iter().enumerate() {
                if !gb.reduce(g).is_zero() {
                    bad.push(format!("input[{j}] does not reduce to zero"));
                }
            }
            out.push(Verdict::new("reduced basis of the same ideal", bad));
        }
        Artifacts::Member { input, member: claim, cofactors } => {
            out.push(input_matches(p, input)?);
            let input = read_all("input", input, &ctx)?;
            let e = p.element_in(&ctx)?;
            match (claim, cofactors) {
                (true, Some(c)) => {
                    let c = read_all("cofactors", c, &ctx)?;
                    let ok = combination(&c, &input).as_ref() == Some(&e) || (input.is_empty() && e.is_zero());
                    out.push(Verdict::new("cofactor identity", if ok { vec![] } else { vec!["element ≠ Σ c_j g_j".into()] }));
                }
                _ => {
                    let again = if p.base.local_at.is_some() {
                        let b = p.algebra()?.with_localization(p.base_localization()).map_err(|e| CliError::engine("algebra", e))?;
                        eng("member", b.in_ideal(&e, &p.ideal_in(&ctx)?))?
                    } else {
                        eng("member", member(&e, &Ideal::new(&ctx, input)))?
                    };
                    let bad = if again == *claim { vec![] } else { vec![format!("recomputed membership is {again}")] };
                    out.push(Verdict::new("membership decided again", bad));
                }
            }
        }
        Artifacts::Radical { input, member: claim, exponent, cofactors } => {
            out.push(input_matches(p, input)?);
            let input = read_all("input", input, &ctx)?;
            let e = p.element_in(&ctx)?;
            match (claim, exponent, cofactors) {
                (true, Some(k), Some(c)) => {
                    let c = read_all("cofactors", c, &ctx)?;
                    let ok = combination(&c, &input).as_ref() == Some(&e.pow(*k));
                    out.push(Verdict::new("power identity", if ok { vec![] } else { vec![format!("element^{k} ≠ Σ c_j g_j")] }));
                }
                (true, _, _) => out.push(Verdict::new("power identity", vec!["no exponent within the cap".into()])),
                (false, _, _) => {
                    let again = eng("radical", radical_member(&e, &Ideal::new(&ctx, input)))?;
                    let bad = if again.member { vec!["the element is in the radical".to_string()] } else { vec![] };
                    out.push(Verdict::new("radical membership decided again", bad));
                }
            }
        }
        Artifacts::IntegralCert { cert } => {
            let c = cert.to_cert()?;
            let e = p.element_in(c.owner.ctx())?;
            let mut bad = Vec::new();
            if c.element != e || !c.denominator.is_one() {
                bad.push("the certificate is for another element".to_string());
            }
            if c.coeff_vars != p.base.vars {
                bad.push("coefficients are not over the base".into());
            }
            out.push(Verdict::new("certificate subject", bad));
            out.push(cert_verdict("integrality certificate", &c));
        }
        Artifacts::Zmt { residual, s, s_cert, x_certs, one_minus_s } => {
            let b = p.algebra()?;
            let ideal = p.ideal_in(&ctx)?;
            let residual = residual.iter().map(|r| read_all("residual", r, &ctx)).collect::<CliResult<Vec<_>>>()?;
            let zp = eng("zmt", ZmtProblem::new(&b, &p.base.vars, &p.gens, &ideal, residual))?;
            let r = ZmtResult {
                s: read("s", s, &ctx)?,
                s_cert: s_cert.to_cert()?,
                x_certs: certs_from(x_certs)?,
                one_minus_s: read_all("one_minus_s", one_minus_s, &ctx)?,
            };
            out.push(Verdict::new("zmt certificates", eng("zmt", verify_zmt(&zp, &r))?));
        }
        Artifacts::ZmtGlobal { family, comaximality, certs, x_certs } => {
            let b = p.algebra()?;
            let r = GlobalZmtResult {
                family: read_all("family", family, &ctx)?,
                comaximality: read_all("comaximality", comaximality, &ctx)?,
                certs: certs_from(certs)?,
                x_certs: x_certs.iter().map(|c| certs_from(c)).collect::<CliResult<_>>()?,
            };
            out.push(Verdict::new("global family", eng("zmt-global", verify_global(&b, &p.base.vars, &p.gens, &r))?));
        }
        Artifacts::Newton { states } => {
            let sys = hensel_system(p)?;
            let bctx = sys.base.ctx().clone();
            let i = sys.maximal.clone();
            for (j, s) in states.iter().enumerate() {
                let st = NewtonState { point: read_all("point", &s.point, &bctx)?, u: s.u.to_matrix(&bctx)?, k: s.k };
                let mut bad = eng("newton", newton_failures(&sys, &i, &st))?;
                if s.k != j as u32 {
                    bad.push(format!("state {j} records k = {}", s.k));
                }
                out.push(Verdict::new(&format!("newton state k={}", s.k), bad));
            }
        }
        Artifacts::Hensel {
            system_xs,
            system_eqs,
            e,
            s,
            s_cert,
            tvars,
            h,
            fvars,
            f,
            numerators,
            denominator,
            monic,
            ..
        } => {
            let input = hensel_system(p)?;
            let (sys, bad) = extended_system(&input, system_xs, system_eqs, e)?;
            out.push(Verdict::new("system echo", bad));
            let b = eng("quotient", sys.quotient())?;
            let octx = b.ctx().clone();
            let s = read("s", s, &octx)?;
            let cert = s_cert.to_cert()?;
            let mut bad = Vec::new();
            if !eng("quotient", b.equal(&cert.element.embed(&octx).map_err(|e| CliError::engine("s", e))?, &s))? {
                bad.push("the certificate is for another element".to_string());
            }
            out.push(Verdict::new("certificate subject", bad));
            out.push(cert_verdict("integrality of s", &cert));
            let tctx = Vars::new(tvars);
            let h = read("h", h, &tctx)?;
            out.push(Verdict::new("Hensel polynomial", eng("hensel", check_hensel_polynomial(&sys, &b, &tctx, &s, &h))?));
            let fctx = Vars::new(fvars);
            let f = read("f", f, &fctx)?;
            let mut imgs = vec![&Polynomial::var(&fctx, 0) + &Polynomial::one(&fctx)];
            imgs.extend((1..fctx.len()).map(|i| Polynomial::var(&fctx, i)));
            let shifted = h.embed(&tctx).map(|h| h.eval_map(&imgs, &fctx));
            let bad = if shifted.as_ref().ok() == Some(&f) { vec![] } else { vec!["f ≠ h(1 + X)".to_string()] };
            out.push(Verdict::new("shift", bad));
            let local = eng("transport", localized_at_f(&sys, &fctx, &f))?;
            let z = TransportedZero {
                local,
                numerators: read_all("numerators", numerators, &fctx)?,
                denominator: read("denominator", denominator, &fctx)?,
            };
            out.push(Verdict::new("transported zero", eng("transport", verify_transport(&sys, &z))?));
            if let Some(m) = monic {
                let again = eng("monic", monicize(&sys, &fctx, &f))?;
                let ok = text(&again.g_num) == m.g_num && text(&again.den) == m.den;
                out.push(Verdict::new("monic form", if ok { vec![] } else { vec!["stored monic form differs".into()] }));
            }
        }
        Artifacts::Verify { .. } => return Err(CliError::Config("a verify report is not a bundle to check".into())),
    }
    Ok(out)
}

fn cert_verdict(name: &str, c: &zmtforge_core::integrality::IntegralityCertificate) -> Verdict {
    match verify_cert(c) {
        Ok(()) => Verdict::passed(name, c.provenance.join(" > ")),
        Err(f) => Verdict::new(name, vec![f.to_string()]),
    }
}

/// The input system, possibly with one more unknown X and the equation
/// 1 - (1 - X)·e; anything else is reported.
fn extended_system(
    input: &HenselSystem,
    xs: &[String],
    eqs: &[String],
    e: &str,
) -> CliResult<(HenselSystem, Vec<String>)> {
    let n = input.n();
    let mut bad = Vec::new();
    if xs.len() < n || xs[..n] != input.xs[..] || xs.len() > n + 1 || eqs.len() != xs.len() {
        bad.push("the unknowns are not the input unknowns plus at most one".to_string());
        return Ok((input.clone(), bad));
    }
    let mut names = xs.to_vec();
    names.extend(input.base_vars());
    let ctx = Vars::new(&names);
    let eqs = read_all("system_eqs", eqs, &ctx)?;
    for (j, f) in input.eqs.iter().enumerate() {
        if f.embed(&ctx).ok().as_ref() != Some(&eqs[j]) {
            bad.push(format!("equation {} differs from the input", j + 1));
        }
    }
    if xs.len() == n + 1 {
        let one = Polynomial::one(&ctx);
        let e = read("e", e, &Vars::new(&input.xs))?.embed(&ctx).map_err(|e| CliError::engine("e", e))?;
        let x = Polynomial::var(&ctx, n);
        if eqs[n] != &one - &(&(&one - &x) * &e) {
            bad.push("the extra equation is not 1 - (1 - X)·e".into());
        }
    }
    let sys = eng("system", HenselSystem::new(&input.base, &input.maximal, xs, &eqs))?;
    Ok((sys, bad))
}

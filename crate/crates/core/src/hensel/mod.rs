//! Multivariate Hensel lemma: isolation of a simple zero, Newton steps,
//! extension of the system, reduction to one Hensel polynomial, transport
//! of the zero and monic forms.

pub mod isolate;
pub mod mhl;
pub mod monic;
pub mod newton;
pub mod system;
pub mod transport;

pub use isolate::{isolate_zero, IsolationData};
pub use mhl::{check_hensel_polynomial, mhl_reduce, reduce_failures, MhlResult};
pub use monic::{monic_failures, monicize, MonicizationResult};
pub use newton::{newton_failures, newton_start, newton_step, NewtonState};
pub use system::{extend_system, HenselSystem};
pub use transport::{localized_at_f, transport_zero, verify_transport, TransportedZero};

use crate::error::{EngineError, Result};
use crate::ring::{q, Polynomial, Vars};
use crate::zmt::{zmt_main, ZmtProblem, ZmtResult};

/// Everything produced by one run of the pipeline.
#[derive(Clone, Debug)]
pub struct MhlBundle {
    pub input: HenselSystem,
    pub isolation: IsolationData,
    /// the input system, extended when e ≠ 1
    pub system: HenselSystem,
    pub zmt: ZmtResult,
    pub reduction: MhlResult,
    pub monic: Option<MonicizationResult>,
    pub zero: TransportedZero,
}

pub fn mhl_pipeline(input: &HenselSystem) -> Result<MhlBundle> {
    let n = input.n();
    let kctx = Vars::new(&input.xs);
    let residual = input.residual()?;
    let isolation = isolate_zero(&kctx, n, &residual, &vec![q(0); n])?;
    let system = if isolation.e.is_one() { input.clone() } else { extend_system(input, &isolation.e)? };
    let b = system.quotient()?;
    for i in 0..system.n() {
        let x = system.x(i);
        if !b.in_ideal(&x, &system.maximal)? {
            return Err(EngineError::HypothesisNotSatisfied(format!("{} is not in M·B", system.xs[i])));
        }
    }
    let octx = b.ctx().clone();
    let lin = vec![Polynomial::zero(&octx), Polynomial::one(&octx)];
    let p = ZmtProblem::new(&b, &system.base_vars(), &system.xs, &system.maximal, vec![lin; system.n()])?;
    let zmt = zmt_main(&p)?;
    let reduction = mhl_reduce(&system, &b, &zmt.s, &zmt.s_cert)?;
    let monic = if reduction.f.lc_in(0).is_one() {
        None
    } else {
        Some(monicize(&system, &reduction.fctx, &reduction.f)?)
    };
    let zero = transport_zero(&system, &reduction)?;
    Ok(MhlBundle { input: input.clone(), isolation, system, zmt, reduction, monic, zero })
}

/// Independent re-check of a bundle; returns the failure reasons.
pub fn verify_mhl(bundle: &MhlBundle) -> Result<Vec<String>> {
    let sys = &bundle.system;
    let b = sys.quotient()?;
    let mut out = reduce_failures(sys, &b, &bundle.reduction)?;
    if !b.equal(&bundle.reduction.s, &bundle.zmt.s)? {
        out.push("the reduction uses another s".into());
    }
    if let Err(f) = crate::integrality::verify_cert(&bundle.zmt.s_cert) {
        out.push(format!("certificate for s: {f}"));
    }
    if let Some(m) = &bundle.monic {
        out.extend(monic_failures(sys, m)?);
    }
    out.extend(verify_transport(sys, &bundle.zero)?);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::system::tests::worked_example;
    use super::*;
    use crate::ideal::{AlgebraPresentation, Localization};
    use crate::ring::poly;

    fn local_line() -> (crate::ideal::Algebra, Vec<Polynomial>) {
        let a = Vars::new(&["a"]);
        let base = AlgebraPresentation::new(&a, vec![], Localization::PointIdeal(vec!["a".into()])).unwrap();
        (base, vec![poly("a", &a)])
    }

    #[test]
    fn linear_system() {
        let (base, m) = local_line();
        let c = Vars::new(&["x", "a"]);
        let sys = HenselSystem::new(&base, &m, &["x".into()], &[poly("x-a", &c)]).unwrap();
        let r = mhl_pipeline(&sys).unwrap();
        assert!(r.isolation.e.is_one());
        assert!(verify_mhl(&r).unwrap().is_empty());
        // x = ν(t)/q(t) is a
        let z = &r.zero;
        let a = poly("a", z.local.ctx());
        assert!(z.local.is_zero(&(&z.numerators[0] - &(&a * &z.denominator))).unwrap());
    }

    #[test]
    fn extension_path() {
        let (base, m) = local_line();
        let c = Vars::new(&["x1", "a"]);
        let sys = HenselSystem::new(&base, &m, &["x1".into()], &[poly("x1-x1^2-a", &c)]).unwrap();
        let r = mhl_pipeline(&sys).unwrap();
        assert_eq!(r.isolation.e, poly("1-x1", &Vars::new(&["x1"])));
        assert_eq!(r.system.n(), 2);
        assert!(verify_mhl(&r).unwrap().is_empty());
    }

    #[test]
    fn worked_example_end_to_end() {
        let sys = worked_example();
        let r = mhl_pipeline(&sys).unwrap();
        assert!(r.isolation.e.is_one());
        assert!(verify_mhl(&r).unwrap().is_empty());
        let h = &r.reduction.h;
        assert!(h.lc_in(0).is_one());
        // the quartic from the literature, negated, also annihilates u = s
        let b = sys.quotient().unwrap();
        let t = &r.reduction.tctx;
        let quartic = poly(
            "U^4 - (1+4*a*b+a^2+3*b^2)*U^3 \
             - b*(b^5+8*a*b^4+7*a^2*b^3-a^3*b^2-4*b*a^4+a^5-6*a^2*b-a^3+4*a*b^2)*U^2 \
             + a^2*b^2*(a-b)*(a+2*b)*(2*b^2-9*a*b+a^2)*U - a^4*b^3*(a-4*b)*(a+2*b)^2*(a-b)^2",
            &Vars::new(&["U", "a", "b"]),
        );
        let quartic = quartic.eval_map(&[Polynomial::var(t, 0), Polynomial::var(t, 1), Polynomial::var(t, 2)], t);
        assert!(check_hensel_polynomial(&sys, &b, t, &r.reduction.s, &quartic).unwrap().is_empty());
    }

    #[test]
    fn tampered_bundles() {
        let (base, m) = local_line();
        let c = Vars::new(&["x", "a"]);
        let sys = HenselSystem::new(&base, &m, &["x".into()], &[poly("x-a+x^2", &c)]).unwrap();
        let mut r = mhl_pipeline(&sys).unwrap();
        assert!(verify_mhl(&r).unwrap().is_empty());
        let good = r.clone();
        let t = r.reduction.tctx.clone();
        r.reduction.h = r.reduction.h.div_exact(&poly("T-1", &t)).unwrap_or_else(|| poly("T^2", &t));
        assert!(verify_mhl(&r).unwrap().contains(&"ResidualShape".to_string()));
        let mut r = good;
        r.reduction.nu[0] = &r.reduction.nu[0] + &poly("a", &t);
        assert!(verify_mhl(&r).unwrap().contains(&"RecoveryIdentity".to_string()));
    }

    #[test]
    fn no_unknowns() {
        let (base, m) = local_line();
        let sys = HenselSystem::new(&base, &m, &[], &[]).unwrap();
        let r = mhl_pipeline(&sys).unwrap();
        assert_eq!(r.reduction.h, poly("T-1", &r.reduction.tctx));
        assert!(verify_mhl(&r).unwrap().is_empty());
    }
}

use crate::error::{EngineError, Result};
use crate::ideal::{Algebra, AlgebraPresentation, Ideal, Localization};
use crate::ring::{Polynomial, Vars};
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CoefficientLocation {
    OverBase,
    /// Non-leading coefficients lie in the ideal generated by these
    /// polynomials of the coefficient ring.
    OverIdeal(Vec<Polynomial>),
}

/// Monic relation c_0 + c_1 T + ... + T^n annihilating num/den in `owner`.
#[derive(Clone, Debug)]
pub struct IntegralityCertificate {
    pub owner: Algebra,
    pub element: Polynomial,
    pub denominator: Polynomial,
    pub coeff_vars: Vec<String>,
    pub coeffs: Vec<Polynomial>,
    pub location: CoefficientLocation,
    pub provenance: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CertFailure {
    NotMonic,
    CoefficientLocation(String),
    NotAnnihilating,
    Malformed(String),
}

impl fmt::Display for CertFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CertFailure::NotMonic => write!(f, "NotMonic"),
            CertFailure::CoefficientLocation(s) => write!(f, "CoefficientLocation: {s}"),
            CertFailure::NotAnnihilating => write!(f, "NotAnnihilating"),
            CertFailure::Malformed(s) => write!(f, "Malformed: {s}"),
        }
    }
}

impl IntegralityCertificate {
    pub fn new(
        owner: &Algebra,
        element: Polynomial,
        coeff_vars: &[String],
        coeffs: Vec<Polynomial>,
        location: CoefficientLocation,
        provenance: &str,
    ) -> Result<Self> {
        let ctx = owner.ctx();
        Ok(IntegralityCertificate {
            owner: owner.clone(),
            element: element.embed(ctx)?,
            denominator: Polynomial::one(ctx),
            coeff_vars: coeff_vars.to_vec(),
            coeffs: coeffs.into_iter().map(|c| c.embed(ctx)).collect::<Result<_>>()?,
            location,
            provenance: vec![provenance.to_string()],
        })
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn with_provenance(mut self, step: &str) -> Self {
        self.provenance.push(step.to_string());
        self
    }

    /// Put the steps of the certificates this one was built from in front
    /// of its own, each tag once.
    pub fn inherit<'a>(mut self, from: impl IntoIterator<Item = &'a IntegralityCertificate>) -> Self {
        let mut tags: Vec<String> = Vec::new();
        for t in from.into_iter().flat_map(|c| c.provenance.iter()).chain(self.provenance.iter()) {
            if !tags.contains(t) {
                tags.push(t.clone());
            }
        }
        self.provenance = tags;
        self
    }

    /// The monic polynomial in descending powers of `var` (for display).
    pub fn monic_string(&self, var: &str) -> String {
        let mut parts = Vec::new();
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let pw = match k {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{k}"),
            };
            let cs = c.to_string();
            parts.push(if pw.is_empty() {
                cs
            } else if c.is_one() {
                pw
            } else if c.nterms() == 1 {
                format!("{cs}*{pw}")
            } else {
                format!("({cs})*{pw}")
            });
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }

    /// Evaluate the relation at the element, cleared of the denominator.
    pub fn evaluate(&self) -> Result<Polynomial> {
        let gb = self.owner.gb()?;
        let n = self.degree();
        let e = &self.element;
        let d = &self.denominator;
        // sum c_k e^k d^(n-k) by Horner with reduction at each step
        let mut acc = Polynomial::zero(self.owner.ctx());
        let mut dpow = Polynomial::one(self.owner.ctx());
        let dpows: Vec<Polynomial> = (0..=n)
            .map(|_| {
                let r = dpow.clone();
                dpow = gb.reduce(&(&dpow * d));
                r
            })
            .collect();
        for k in (0..=n).rev() {
            acc = gb.reduce(&(&(&acc * e) + &(&self.coeffs[k] * &dpows[n - k])));
        }
        Ok(acc)
    }
}

fn coefficient_ring(owner: &Algebra, vars: &[String]) -> Result<Algebra> {
    let ctx = Vars::new(vars);
    let local = match owner.localization() {
        Localization::PointIdeal(vs) if vs.iter().all(|v| vars.contains(v)) => Localization::PointIdeal(vs.clone()),
        _ => Localization::None,
    };
    AlgebraPresentation::new(&ctx, vec![], local)
}

/// Independent re-check of a certificate using only ideal-engine primitives.
pub fn verify_cert(c: &IntegralityCertificate) -> std::result::Result<(), CertFailure> {
    let ctx = c.owner.ctx();
    for v in &c.coeff_vars {
        if ctx.index(v).is_none() {
            return Err(CertFailure::Malformed(format!("coefficient variable {v} not in the owner")));
        }
    }
    match c.coeffs.last() {
        Some(l) if l.is_one() => {}
        _ => return Err(CertFailure::NotMonic),
    }
    for (k, co) in c.coeffs.iter().enumerate() {
        if !co.uses_only_named(&c.coeff_vars) {
            return Err(CertFailure::CoefficientLocation(format!(
                "coefficient of T^{k} uses variables outside {:?}",
                c.coeff_vars
            )));
        }
    }
    if let CoefficientLocation::OverIdeal(gens) = &c.location {
        let ring = coefficient_ring(&c.owner, &c.coeff_vars).map_err(|e| CertFailure::Malformed(e.to_string()))?;
        let rctx = ring.ctx().clone();
        let gens: Vec<Polynomial> = match gens.iter().map(|g| g.embed(&rctx)).collect::<Result<Vec<_>>>() {
            Ok(g) => g,
            Err(e) => return Err(CertFailure::Malformed(e.to_string())),
        };
        let plain = Ideal::new(&rctx, gens.clone());
        for (k, co) in c.coeffs[..c.coeffs.len() - 1].iter().enumerate() {
            let co = co.embed(&rctx).map_err(|e| CertFailure::Malformed(e.to_string()))?;
            let ok = plain.contains(&co).unwrap_or(false) || ring.in_ideal(&co, &gens).unwrap_or(false);
            if !ok {
                return Err(CertFailure::CoefficientLocation(format!(
                    "coefficient of T^{k} ({co}) is outside the tagged ideal"
                )));
            }
        }
    }
    let val = c.evaluate().map_err(|e| CertFailure::Malformed(e.to_string()))?;
    match c.owner.is_zero(&val) {
        Ok(true) => Ok(()),
        Ok(false) => Err(CertFailure::NotAnnihilating),
        Err(e) => Err(CertFailure::Malformed(e.to_string())),
    }
}

pub fn require_verified(c: &IntegralityCertificate) -> Result<()> {
    verify_cert(c).map_err(|f| {
        EngineError::InvariantRecheckFailed(format!("certificate for {} failed: {f}", c.element))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{poly, Vars};

    fn setup() -> (Algebra, Vec<String>) {
        let c = Vars::new(&["x", "b"]);
        let s = AlgebraPresentation::new(&c, vec![poly("x^2-b", &c)], Localization::None).unwrap();
        (s, vec!["b".to_string()])
    }

    #[test]
    fn accepts_valid_and_rejects_tampered() {
        let (s, cv) = setup();
        let c = s.ctx().clone();
        let good = IntegralityCertificate::new(
            &s,
            poly("x", &c),
            &cv,
            vec![poly("-b", &c), poly("0", &c), poly("1", &c)],
            CoefficientLocation::OverIdeal(vec![poly("b", &c)]),
            "test",
        )
        .unwrap();
        assert_eq!(verify_cert(&good), Ok(()));
        let mut bad = good.clone();
        bad.coeffs[2] = poly("2", &c);
        assert_eq!(verify_cert(&bad), Err(CertFailure::NotMonic));
        let mut bad = good.clone();
        bad.coeffs[0] = poly("1-b", &c);
        bad.coeffs[2] = poly("1", &c);
        assert!(matches!(verify_cert(&bad), Err(CertFailure::CoefficientLocation(_))));
        let mut bad = good.clone();
        bad.coeffs[0] = poly("-2*b", &c);
        assert_eq!(verify_cert(&bad), Err(CertFailure::NotAnnihilating));
        let mut bad = good;
        bad.coeffs[1] = poly("x", &c);
        assert!(matches!(verify_cert(&bad), Err(CertFailure::CoefficientLocation(_))));
    }
}

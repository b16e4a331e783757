//! The Emmanuel sequence of a (not necessarily monic) relation
//! a_n x^n + ... + a_0 = 0, and the rank-n ring N it generates.
//!
//! N has R-basis ζ_0 = 1 and ζ_k = a_n x^k + a_{n-1} x^(k-1) + ... + a_(n-k+1) x
//! for 1 ≤ k < n, with ζ_n = -a_0.  The products
//!   ζ_i ζ_j = Σ_{k=j+1}^{min(i+j,n)} a_(n+k-i-j) ζ_k - Σ_{k=max(i+j-n,1)}^{i} a_(n+k-i-j) ζ_k
//! (i ≤ j) hold in R[X]/(P) generically, so every element of N is integral
//! over R through the characteristic polynomial of its multiplication matrix.

use super::cert::{require_verified, CoefficientLocation, IntegralityCertificate};
use crate::error::{EngineError, Result};
use crate::ideal::Algebra;
use crate::ring::{Ctx, PolyMatrix, Polynomial, Vars};

#[derive(Clone, Debug)]
pub struct EmmanuelRing {
    ctx: Ctx,
    a: Vec<Polynomial>,
}

pub type NElem = Vec<Polynomial>;

impl EmmanuelRing {
    /// `a`: coefficients a_0..a_n (n ≥ 1) in a formal coefficient context.
    pub fn new(ctx: &Ctx, a: &[Polynomial]) -> Result<Self> {
        if a.len() < 2 {
            return Err(EngineError::Precondition("the relation needs degree at least 1".into()));
        }
        let a = a.iter().map(|c| c.embed(ctx)).collect::<Result<_>>()?;
        Ok(EmmanuelRing { ctx: ctx.clone(), a })
    }

    pub fn ctx(&self) -> &Ctx {
        &self.ctx
    }

    pub fn rank(&self) -> usize {
        self.a.len() - 1
    }

    pub fn coeffs(&self) -> &[Polynomial] {
        &self.a
    }

    fn zero(&self) -> NElem {
        vec![Polynomial::zero(&self.ctx); self.rank()]
    }

    pub fn scalar(&self, c: &Polynomial) -> NElem {
        let mut v = self.zero();
        v[0] = c.embed_unchecked(&self.ctx);
        v
    }

    /// ζ_k for 0 ≤ k ≤ n.
    pub fn zeta(&self, k: usize) -> NElem {
        let n = self.rank();
        if k == n {
            return self.scalar(&-&self.a[0]);
        }
        let mut v = self.zero();
        v[k] = Polynomial::one(&self.ctx);
        v
    }

    fn basis_product(&self, i: usize, j: usize) -> NElem {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        if i == 0 {
            return self.zeta(j);
        }
        let n = self.rank();
        let mut acc = self.zero();
        let mut add = |k: usize, sign: bool| {
            let c = &self.a[n + k - i - j];
            let z = self.zeta(k);
            for (slot, zk) in acc.iter_mut().zip(z) {
                let t = &zk * c;
                *slot = if sign { &*slot + &t } else { &*slot - &t };
            }
        };
        for k in j + 1..=(i + j).min(n) {
            add(k, true);
        }
        for k in (i + j).saturating_sub(n).max(1)..=i {
            add(k, false);
        }
        acc
    }

    pub fn mul(&self, u: &NElem, v: &NElem) -> NElem {
        let mut acc = self.zero();
        for (i, ui) in u.iter().enumerate() {
            if ui.is_zero() {
                continue;
            }
            for (j, vj) in v.iter().enumerate() {
                if vj.is_zero() {
                    continue;
                }
                let c = ui * vj;
                for (slot, p) in acc.iter_mut().zip(self.basis_product(i, j)) {
                    if !p.is_zero() {
                        *slot = &*slot + &(&p * &c);
                    }
                }
            }
        }
        acc
    }

    pub fn add(&self, u: &NElem, v: &NElem) -> NElem {
        u.iter().zip(v).map(|(x, y)| x + y).collect()
    }

    pub fn multiplication_matrix(&self, u: &NElem) -> PolyMatrix {
        let n = self.rank();
        let cols: Vec<NElem> = (0..n).map(|j| self.mul(u, &self.zeta(j))).collect();
        PolyMatrix::from_fn(&self.ctx, n, n, |i, j| cols[j][i].clone())
    }

    pub fn char_poly(&self, u: &NElem) -> Result<Vec<Polynomial>> {
        self.multiplication_matrix(u).char_poly_coeffs()
    }

    /// u_j for 0 ≤ j ≤ n.
    pub fn u(&self, j: usize) -> NElem {
        let n = self.rank();
        match j {
            0 => self.zero(),
            _ if j == n => self.scalar(&self.a[n]),
            _ => self.add(&self.zeta(n - j), &self.scalar(&self.a[j])),
        }
    }

    /// u_j·x for 0 ≤ j ≤ n.
    pub fn ux(&self, j: usize) -> NElem {
        if j == 0 {
            self.zero()
        } else {
            self.zeta(self.rank() - j + 1)
        }
    }

    /// Value of a polynomial expression in elements `gens` (one per variable
    /// of `ctx` beyond the coefficient context, which maps to scalars).
    pub fn eval(&self, p: &Polynomial, gens: &[(String, NElem)]) -> Result<NElem> {
        let pctx = p.ctx().clone();
        let mut acc = self.zero();
        for (m, c) in p.terms() {
            let mut term = self.scalar(&Polynomial::constant(&self.ctx, c.clone()));
            for (i, &e) in m.exps().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let name = &pctx.names()[i];
                if let Some((_, g)) = gens.iter().find(|(n, _)| n == name) {
                    for _ in 0..e {
                        term = self.mul(&term, g);
                    }
                } else {
                    let v = Polynomial::var_named(&self.ctx, name)?.pow(e);
                    term = term.into_iter().map(|t| &t * &v).collect();
                }
            }
            acc = self.add(&acc, &term);
        }
        Ok(acc)
    }

    /// Image in an owner where x and the coefficient variables have the
    /// given images (one per variable of the coefficient context).
    pub fn image(&self, u: &NElem, x: &Polynomial, coeff_images: &[Polynomial]) -> Polynomial {
        let octx = x.ctx().clone();
        let n = self.rank();
        let a: Vec<Polynomial> = self.a.iter().map(|c| c.eval_map(coeff_images, &octx)).collect();
        let mut acc = Polynomial::zero(&octx);
        for (k, uk) in u.iter().enumerate() {
            if uk.is_zero() {
                continue;
            }
            let z = if k == 0 {
                Polynomial::one(&octx)
            } else {
                let mut s = Polynomial::zero(&octx);
                for l in 1..=k {
                    s = &s + &(&a[n - k + l] * &x.pow(l as u32));
                }
                s
            };
            acc = &acc + &(&uk.eval_map(coeff_images, &octx) * &z);
        }
        acc
    }
}

/// T^n + a_{n-1} T^{n-1} + a_{n-2} a_n T^{n-2} + ... + a_0 a_n^{n-1}, a
/// monic relation for a_n·x.
pub fn basic_emmanuel(a: &[Polynomial]) -> Vec<Polynomial> {
    let n = a.len() - 1;
    let mut out: Vec<Polynomial> = (0..n).map(|k| &a[k] * &a[n].pow((n - 1 - k) as u32)).collect();
    out.push(Polynomial::one(a[n].ctx()));
    out
}

#[derive(Clone, Debug)]
pub struct EmmanuelSequence {
    pub a: Vec<Polynomial>,
    pub x: Polynomial,
    pub u: Vec<Polynomial>,
    pub ring: Option<EmmanuelRing>,
    pub u_certs: Vec<IntegralityCertificate>,
    pub ux_certs: Vec<IntegralityCertificate>,
}

/// Emmanuel sequence for a_0..a_n (owner polynomials in `coeff_vars`) at x,
/// with verified certificates over Q[coeff_vars] for every u_j and u_j·x.
pub fn emmanuel(owner: &Algebra, a: &[Polynomial], coeff_vars: &[String], x: &Polynomial) -> Result<EmmanuelSequence> {
    let octx = owner.ctx();
    let x = x.embed(octx)?;
    let a: Vec<Polynomial> = a.iter().map(|c| c.embed(octx)).collect::<Result<_>>()?;
    if a.is_empty() {
        return Err(EngineError::Precondition("empty relation".into()));
    }
    for c in &a {
        if !c.uses_only_named(coeff_vars) {
            return Err(EngineError::Precondition(format!("coefficient {c} is outside the coefficient ring")));
        }
    }
    let px = crate::ring::univ::horner(&a, &x);
    if !owner.is_zero(&px)? {
        return Err(EngineError::PNotAnnihilating);
    }
    let n = a.len() - 1;
    let mut u = vec![Polynomial::zero(octx); n + 1];
    u[n] = a[n].clone();
    for j in (0..n).rev() {
        u[j] = &(&u[j + 1] * &x) + &a[j];
    }
    // the ideal identities a_j = u_j - x·u_{j+1} and u_j = Σ a_i x^(i-j)
    for j in 0..n {
        if &u[j] - &(&x * &u[j + 1]) != a[j] {
            return Err(EngineError::InvariantRecheckFailed("Emmanuel ideal identity failed".into()));
        }
    }
    let loc = CoefficientLocation::OverBase;
    let t_one = |el: &Polynomial| -> Result<IntegralityCertificate> {
        IntegralityCertificate::new(owner, el.clone(), coeff_vars, vec![Polynomial::zero(octx), Polynomial::one(octx)], loc.clone(), "Emmanuel")
    };
    if n == 0 {
        let c = t_one(&u[0])?;
        require_verified(&c)?;
        let cx = t_one(&(&u[0] * &x))?;
        require_verified(&cx)?;
        return Ok(EmmanuelSequence { a, x, u, ring: None, u_certs: vec![c], ux_certs: vec![cx] });
    }
    let rctx = Vars::new(coeff_vars);
    let ra: Vec<Polynomial> = a.iter().map(|c| c.embed(&rctx)).collect::<Result<_>>()?;
    let ring = EmmanuelRing::new(&rctx, &ra)?;
    let images: Vec<Polynomial> = coeff_vars.iter().map(|v| Polynomial::var_named(octx, v)).collect::<Result<_>>()?;
    let mut u_certs = Vec::new();
    let mut ux_certs = Vec::new();
    for j in 0..=n {
        for (elem, store, which) in [(ring.u(j), &mut u_certs, &u[j]), (ring.ux(j), &mut ux_certs, &(&u[j] * &x))] {
            debug_assert!(owner.equal(&ring.image(&elem, &x, &images), which).unwrap_or(true));
            let cp = ring.char_poly(&elem)?;
            let c = IntegralityCertificate::new(owner, which.clone(), coeff_vars, cp, loc.clone(), "Emmanuel")?;
            require_verified(&c)?;
            store.push(c);
        }
    }
    Ok(EmmanuelSequence { a, x, u, ring: Some(ring), u_certs, ux_certs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ideal::{AlgebraPresentation, Localization};
    use crate::integrality::verify_cert;
    use crate::ring::poly;

    #[test]
    fn quadratic_example() {
        let c = Vars::new(&["x", "a"]);
        let b = AlgebraPresentation::new(&c, vec![poly("x^2-a*x", &c)], Localization::None).unwrap();
        let e = emmanuel(&b, &[poly("0", &c), poly("-a", &c), poly("1", &c)], &["a".into()], &poly("x", &c)).unwrap();
        assert_eq!(e.u[2], poly("1", &c));
        assert_eq!(e.u[1], poly("x-a", &c));
        assert!(b.is_zero(&e.u[0]).unwrap());
        for cert in e.u_certs.iter().chain(&e.ux_certs) {
            assert_eq!(verify_cert(cert), Ok(()));
        }
    }

    #[test]
    fn degenerate_cases() {
        let c = Vars::new(&["x", "a0", "a1"]);
        let b = AlgebraPresentation::new(&c, vec![poly("a1*x+a0", &c)], Localization::None).unwrap();
        let e = emmanuel(&b, &[poly("a0", &c), poly("a1", &c)], &["a0".into(), "a1".into()], &poly("x", &c)).unwrap();
        assert_eq!(e.u[1], poly("a1", &c));
        assert_eq!(e.ux_certs[1].coeffs, vec![poly("a0", &c), poly("1", &c)]);
        let z = AlgebraPresentation::polynomial_ring(&c);
        let zero = poly("0", &c);
        let e = emmanuel(&z, &[zero.clone(), zero.clone(), zero.clone()], &[], &poly("x", &c)).unwrap();
        for cert in e.u_certs.iter().chain(&e.ux_certs) {
            assert!(cert.element.is_zero());
        }
        assert!(matches!(
            emmanuel(&z, &[poly("1", &c), poly("1", &c)], &[], &poly("x", &c)),
            Err(EngineError::PNotAnnihilating)
        ));
    }

    #[test]
    fn multiplication_table_matches_owner() {
        let c = Vars::new(&["x", "a0", "a1", "a2", "a3"]);
        let names: Vec<String> = ["a0", "a1", "a2", "a3"].iter().map(|s| s.to_string()).collect();
        let rel = poly("a3*x^3+a2*x^2+a1*x+a0", &c);
        let b = AlgebraPresentation::new(&c, vec![rel], Localization::None).unwrap();
        let r = Vars::new(&names);
        let ring = EmmanuelRing::new(&r, &[poly("a0", &r), poly("a1", &r), poly("a2", &r), poly("a3", &r)]).unwrap();
        let imgs: Vec<Polynomial> = names.iter().map(|n| Polynomial::var_named(&c, n).unwrap()).collect();
        let x = poly("x", &c);
        for i in 0..3 {
            for j in 0..3 {
                let p = ring.mul(&ring.zeta(i), &ring.zeta(j));
                let lhs = &ring.image(&ring.zeta(i), &x, &imgs) * &ring.image(&ring.zeta(j), &x, &imgs);
                assert!(b.equal(&ring.image(&p, &x, &imgs), &lhs).unwrap(), "{i} {j}");
            }
        }
        let bm = basic_emmanuel(&[poly("a0", &r), poly("a1", &r), poly("a2", &r), poly("a3", &r)]);
        let cert = IntegralityCertificate::new(&b, poly("a3*x", &c), &names, bm, CoefficientLocation::OverBase, "Emmanuel").unwrap();
        assert_eq!(verify_cert(&cert), Ok(()));
    }
}

//! Subalgebras generated by kept variables and tagged elements.
//!
//! With relations `rel` in the owner ring, the ideal rel + ⟨T_j − g_j⟩ is
//! eliminated with respect to the owner variables that are not kept. The
//! kernel K ⊂ Q[T, kept] presents the subalgebra, and the normal form of an
//! owner element lies in Q[T, kept] exactly when the element belongs to it.

use super::algebra::Algebra;
use super::groebner::{groebner, groebner_tracked, GroebnerBasis};
use crate::error::{EngineError, Result};
use crate::ring::{Ctx, MonomialOrder, Polynomial, Vars};
use std::sync::Arc;

#[derive(Clone, Debug)]
pub struct Subalgebra {
    owner: Algebra,
    kept: Vec<String>,
    gens: Vec<Polynomial>,
    tags: Vec<String>,
    big: Ctx,
    small: Ctx,
    nelim: usize,
    gb: Arc<GroebnerBasis>,
    kernel: Vec<Polynomial>,
}

impl Subalgebra {
    /// `kept`: owner variables that belong to the subalgebra as they are;
    /// `gens`: further generators, named by tags `{stem}0, {stem}1, ...`.
    pub fn new(owner: &Algebra, kept: &[String], gens: &[Polynomial], stem: &str) -> Result<Self> {
        let octx = owner.ctx();
        for k in kept {
            octx.require(k)?;
        }
        let elim: Vec<String> = octx.names().iter().filter(|n| !kept.contains(n)).cloned().collect();
        let mut tags = Vec::new();
        let mut taken: Vec<String> = octx.names().to_vec();
        for j in 0..gens.len() {
            let mut name = format!("{stem}{j}");
            while taken.contains(&name) {
                name.push('_');
            }
            taken.push(name.clone());
            tags.push(name);
        }
        // owner vars in the fixed order: eliminated block, then tags, then kept
        let mut names = elim.clone();
        names.extend(tags.iter().cloned());
        names.extend(kept.iter().cloned());
        let big = Vars::new(&names);
        let mut small_names = tags.clone();
        small_names.extend(kept.iter().cloned());
        let small = Vars::new(&small_names);
        let mut ideal: Vec<Polynomial> =
            owner.relations().gens().iter().map(|r| r.embed_unchecked(&big)).collect();
        for (j, g) in gens.iter().enumerate() {
            let t = Polynomial::var(&big, elim.len() + j);
            ideal.push(&t - &g.embed(&big)?);
        }
        let gb = groebner(&ideal, &big, &MonomialOrder::Block(vec![elim.len()]))?;
        let keep: Vec<bool> = (0..big.len()).map(|j| j >= elim.len()).collect();
        let kernel = gb
            .basis()
            .iter()
            .filter(|g| g.uses_only(&keep))
            .map(|g| g.embed_unchecked(&small))
            .collect();
        Ok(Subalgebra {
            owner: owner.clone(),
            kept: kept.to_vec(),
            gens: gens.iter().map(|g| g.embed_unchecked(octx)).collect(),
            tags,
            big,
            small,
            nelim: elim.len(),
            gb,
            kernel,
        })
    }

    pub fn owner(&self) -> &Algebra {
        &self.owner
    }

    pub fn tags(&self) -> &[String] {
        &self.tags
    }

    pub fn kept(&self) -> &[String] {
        &self.kept
    }

    pub fn gens(&self) -> &[Polynomial] {
        &self.gens
    }

    /// Context of the subalgebra presentation: tags then kept variables.
    pub fn ctx(&self) -> &Ctx {
        &self.small
    }

    /// Relations among tags and kept variables.
    pub fn kernel(&self) -> &[Polynomial] {
        &self.kernel
    }

    pub fn tag(&self, j: usize) -> Polynomial {
        Polynomial::var(&self.small, j)
    }

    /// Expression of u in tags and kept variables, if u is in the subalgebra.
    pub fn member(&self, u: &Polynomial) -> Result<Option<Polynomial>> {
        let u = u.embed(&self.big)?;
        let nf = self.gb.reduce(&u);
        let keep: Vec<bool> = (0..self.big.len()).map(|j| j >= self.nelim).collect();
        if nf.uses_only(&keep) {
            Ok(Some(nf.embed_unchecked(&self.small)))
        } else {
            Ok(None)
        }
    }

    /// Reduce an expression modulo the kernel.
    pub fn normalize(&self, w: &Polynomial) -> Result<Polynomial> {
        Ok(self.gb.reduce(&w.embed(&self.big)?).embed_unchecked(&self.small))
    }

    /// Substitute the generators for the tags.
    pub fn evaluate(&self, w: &Polynomial) -> Result<Polynomial> {
        let octx = self.owner.ctx();
        let images: Vec<Polynomial> = self
            .small
            .names()
            .iter()
            .enumerate()
            .map(|(j, n)| {
                if j < self.tags.len() {
                    self.gens[j].clone()
                } else {
                    Polynomial::var_named(octx, n).unwrap()
                }
            })
            .collect();
        Ok(w.embed(&self.small)?.eval_map(&images, octx))
    }

    /// Tracked basis of i + K in the subalgebra context; `i` are polynomials
    /// in tags and kept variables.
    pub fn ideal_basis(&self, i: &[Polynomial]) -> Result<GroebnerBasis> {
        let mut gens: Vec<Polynomial> = i.iter().map(|p| p.embed(&self.small)).collect::<Result<_>>()?;
        let n = gens.len();
        gens.extend(self.kernel.iter().cloned());
        groebner_tracked(&gens, n, &self.small, &MonomialOrder::DegRevLex)
    }

    /// Cofactors c (in tags and kept variables) with u = sum c_k i_k in the
    /// owner, when u ∈ i·(subalgebra).
    pub fn ideal_member(&self, u: &Polynomial, i: &[Polynomial]) -> Result<Option<Vec<Polynomial>>> {
        let w = match self.member(u)? {
            Some(w) => w,
            None => return Ok(None),
        };
        let gb = self.ideal_basis(i)?;
        Ok(gb.express(&w))
    }

    pub fn require_member(&self, u: &Polynomial) -> Result<Polynomial> {
        self.member(u)?
            .ok_or_else(|| EngineError::SubalgebraWitnessMissing(format!("{u} is not in the subalgebra")))
    }
}

/// Witness-returning membership of u in the subalgebra generated by `gens`
/// over the kept variables.
pub fn subalg_member(owner: &Algebra, kept: &[String], gens: &[Polynomial], u: &Polynomial) -> Result<Option<Polynomial>> {
    Subalgebra::new(owner, kept, gens, "T")?.member(u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ideal::algebra::{AlgebraPresentation, Localization};
    use crate::ring::poly;

    #[test]
    fn subalgebra_examples() {
        let c = Vars::new(&["x"]);
        let r = AlgebraPresentation::polynomial_ring(&c);
        let x = poly("x", &c);
        let w = subalg_member(&r, &[], std::slice::from_ref(&x), &poly("x^2", &c)).unwrap().unwrap();
        assert_eq!(w.to_string(), "T0^2");
        assert!(subalg_member(&r, &[], &[poly("x^2", &c)], &x).unwrap().is_none());

        let c = Vars::new(&["x", "t"]);
        let s = AlgebraPresentation::new(&c, vec![poly("t^2-x^2", &c), poly("t*x-x^2", &c)], Localization::None).unwrap();
        let w = subalg_member(&s, &["x".into()], &[], &poly("t*x", &c)).unwrap().unwrap();
        assert_eq!(w.to_string(), "x^2");
    }

    #[test]
    fn ideal_member_cofactors() {
        let c = Vars::new(&["x", "y", "a"]);
        let b = AlgebraPresentation::new(&c, vec![poly("x*y-a", &c)], Localization::None).unwrap();
        let sub = Subalgebra::new(&b, &["a".into()], &[poly("x", &c), poly("y", &c)], "T").unwrap();
        let a = poly("a", &sub.ctx().clone());
        let cf = sub.ideal_member(&poly("a*x + x^2*y", &c), std::slice::from_ref(&a)).unwrap().unwrap();
        let back = sub.evaluate(&(&cf[0] * &a)).unwrap();
        assert!(b.equal(&back, &poly("a*x + x^2*y", &c)).unwrap());
        assert!(sub.ideal_member(&poly("x", &c), &[a]).unwrap().is_none());
    }
}

//! Hensel systems: f_1..f_n over a local ring (A, M) with a residually
//! simple zero at the origin.

use crate::error::{EngineError, Result};
use crate::ideal::{groebner, Algebra, AlgebraPresentation, Localization};
use crate::ring::{Ctx, MonomialOrder, PolyMatrix, Polynomial, Vars};

#[derive(Clone, Debug)]
pub struct HenselSystem {
    pub base: Algebra,
    /// generators of M, in the base context
    pub maximal: Vec<Polynomial>,
    pub xs: Vec<String>,
    /// the unknowns, then the base variables
    pub ctx: Ctx,
    pub eqs: Vec<Polynomial>,
}

impl HenselSystem {
    pub fn new(base: &Algebra, maximal: &[Polynomial], xs: &[String], eqs: &[Polynomial]) -> Result<Self> {
        if xs.len() != eqs.len() {
            return Err(EngineError::ShapeError("a Hensel system has as many equations as unknowns".into()));
        }
        let bctx = base.ctx();
        for x in xs {
            if bctx.index(x).is_some() {
                return Err(EngineError::Precondition(format!("unknown {x} clashes with a base variable")));
            }
        }
        let mut names = xs.to_vec();
        names.extend(bctx.names().iter().cloned());
        let ctx = Vars::new(&names);
        let maximal: Vec<Polynomial> = maximal.iter().map(|m| m.embed(bctx)).collect::<Result<_>>()?;
        let eqs: Vec<Polynomial> = eqs.iter().map(|f| f.embed(&ctx)).collect::<Result<_>>()?;
        let sys = HenselSystem { base: base.clone(), maximal, xs: xs.to_vec(), ctx, eqs };
        for (i, f) in sys.eqs.iter().enumerate() {
            if !sys.in_maximal(&sys.at_origin(f)?)? {
                return Err(EngineError::HypothesisNotSatisfied(format!("f_{} does not vanish residually at the origin", i + 1)));
            }
        }
        let j0 = sys.at_origin_matrix(&sys.jacobian())?.det_ff()?;
        if sys.in_maximal(&j0)? {
            return Err(EngineError::JacobianNotUnit);
        }
        Ok(sys)
    }

    pub fn n(&self) -> usize {
        self.xs.len()
    }

    pub fn x(&self, i: usize) -> Polynomial {
        Polynomial::var(&self.ctx, i)
    }

    pub fn base_vars(&self) -> Vec<String> {
        self.base.ctx().names().to_vec()
    }

    /// J[j][i] = ∂f_j/∂X_i
    pub fn jacobian(&self) -> PolyMatrix {
        let n = self.n();
        PolyMatrix::from_fn(&self.ctx, n, n, |j, i| self.eqs[j].derivative(i))
    }

    /// Value at X = 0, in the base context.
    pub fn at_origin(&self, p: &Polynomial) -> Result<Polynomial> {
        let bctx = self.base.ctx();
        let imgs: Vec<Polynomial> = (0..self.ctx.len())
            .map(|i| if i < self.n() { Polynomial::zero(bctx) } else { Polynomial::var(bctx, i - self.n()) })
            .collect();
        Ok(p.embed(&self.ctx)?.eval_map(&imgs, bctx))
    }

    pub fn at_origin_matrix(&self, m: &PolyMatrix) -> Result<PolyMatrix> {
        let entries = m.entries().iter().map(|e| self.at_origin(e)).collect::<Result<_>>()?;
        PolyMatrix::new(self.base.ctx(), m.rows(), m.cols(), entries)
    }

    /// Membership in M·A (A possibly localized).
    pub fn in_maximal(&self, p: &Polynomial) -> Result<bool> {
        self.base.in_ideal(p, &self.maximal)
    }

    /// The residual system over A/M, which must be Q: coefficients are
    /// reduced modulo M and must become constants.
    pub fn residual(&self) -> Result<Vec<Polynomial>> {
        let n = self.n();
        let mut gens: Vec<Polynomial> = self.maximal.iter().map(|m| m.embed(&self.ctx)).collect::<Result<_>>()?;
        gens.extend(self.base.relations().gens().iter().map(|r| r.embed(&self.ctx)).collect::<Result<Vec<_>>>()?);
        let gb = groebner(&gens, &self.ctx, &MonomialOrder::Block(vec![n]))?;
        if gb.is_unit() {
            return Err(EngineError::Precondition("M is the unit ideal".into()));
        }
        let kctx = Vars::new(&self.xs);
        let keep: Vec<bool> = (0..self.ctx.len()).map(|i| i < n).collect();
        self.eqs
            .iter()
            .map(|f| {
                let r = gb.reduce(f);
                if !r.uses_only(&keep) {
                    return Err(EngineError::Unsupported("the residue field is not the rationals".into()));
                }
                r.embed(&kctx)
            })
            .collect()
    }

    /// B = A[X]/⟨f⟩ without localization.
    pub fn quotient(&self) -> Result<Algebra> {
        let mut rels = self.eqs.clone();
        rels.extend(self.base.relations().gens().iter().map(|r| r.embed(&self.ctx)).collect::<Result<Vec<_>>>()?);
        AlgebraPresentation::new(&self.ctx, rels, Localization::None)
    }

    /// The point variables when A is the localization of a polynomial
    /// ring at the origin and M is generated by those variables.
    pub fn point_vars(&self) -> Option<Vec<String>> {
        let Localization::PointIdeal(vs) = self.base.localization() else { return None };
        let bctx = self.base.ctx();
        let gens: Vec<Polynomial> = vs.iter().map(|v| Polynomial::var_named(bctx, v).unwrap()).collect();
        let same = crate::ideal::Ideal::new(bctx, gens.clone()).contains_ideal(&crate::ideal::Ideal::new(bctx, self.maximal.clone()));
        let back = crate::ideal::Ideal::new(bctx, self.maximal.clone()).contains_ideal(&crate::ideal::Ideal::new(bctx, gens));
        match (same, back) {
            (Ok(true), Ok(true)) => Some(vs.clone()),
            _ => None,
        }
    }

    /// B localized at 1 + M_B, when A is a point localization.
    pub fn local_quotient(&self) -> Result<Algebra> {
        let vs = self
            .point_vars()
            .ok_or_else(|| EngineError::Unsupported("local checks need A localized at a point with M its ideal".into()))?;
        let mut pts = self.xs.clone();
        pts.extend(vs);
        let b = self.quotient()?;
        AlgebraPresentation::new(&self.ctx, b.relations().gens().to_vec(), Localization::PointIdeal(pts))
    }
}

/// Add the unknown X_{n+1} with the equation 1 - (1 - X_{n+1})·e(X).
pub fn extend_system(sys: &HenselSystem, e: &Polynomial) -> Result<HenselSystem> {
    let name = {
        let mut k = sys.n() + 1;
        loop {
            let cand = format!("x{k}");
            if sys.ctx.index(&cand).is_none() {
                break cand;
            }
            k += 1;
        }
    };
    let mut xs = sys.xs.clone();
    xs.push(name.clone());
    let mut names = xs.clone();
    names.extend(sys.base.ctx().names().iter().cloned());
    let ctx = Vars::new(&names);
    let one = Polynomial::one(&ctx);
    let xn = Polynomial::var_named(&ctx, &name)?;
    let mut eqs: Vec<Polynomial> = sys.eqs.iter().map(|f| f.embed(&ctx)).collect::<Result<_>>()?;
    eqs.push(&one - &(&(&one - &xn) * &e.embed(&ctx)?));
    HenselSystem::new(&sys.base, &sys.maximal, &xs, &eqs)
}

//! Exact linear combinations over Q, with vectors stored as polynomials
//! (each monomial is a coordinate).

use super::mono::Monomial;
use super::poly::{Polynomial, Q};
use num_traits::{One, Zero};
use std::collections::HashMap;

/// Incremental echelon basis of candidate vectors that remembers how each
/// basis vector was formed from the candidates.
pub struct Combiner {
    ncand: usize,
    rows: Vec<(Polynomial, Vec<Q>)>,
    pivots: HashMap<Monomial, usize>,
}

impl Combiner {
    pub fn new() -> Self {
        Combiner { ncand: 0, rows: vec![], pivots: HashMap::new() }
    }

    pub fn len(&self) -> usize {
        self.ncand
    }

    pub fn is_empty(&self) -> bool {
        self.ncand == 0
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, v: &Polynomial, combo: &mut [Q]) -> Polynomial {
        let mut v = v.clone();
        loop {
            let hit = v
                .terms()
                .iter()
                .find_map(|(m, c)| self.pivots.get(m).map(|&r| (r, c.clone())));
            match hit {
                None => return v,
                Some((r, c)) => {
                    let (row, rc) = &self.rows[r];
                    v = &v - &row.scale(&c);
                    for (i, x) in rc.iter().enumerate() {
                        if !x.is_zero() {
                            combo[i] -= &c * x;
                        }
                    }
                }
            }
        }
    }

    /// Add the next candidate; returns false if it was dependent.
    pub fn push(&mut self, v: &Polynomial) -> bool {
        let idx = self.ncand;
        self.ncand += 1;
        for (_, c) in self.rows.iter_mut() {
            c.push(Q::zero());
        }
        let mut combo = vec![Q::zero(); self.ncand];
        combo[idx] = Q::one();
        let r = self.reduce(v, &mut combo);
        if r.is_zero() {
            return false;
        }
        let (lm, lc) = r.terms()[0].clone();
        let inv = Q::one() / lc;
        let r = r.scale(&inv);
        for x in combo.iter_mut() {
            *x *= &inv;
        }
        // keep rows fully reduced against the new pivot
        for (row, rc) in self.rows.iter_mut() {
            let c = row.coeff(&lm);
            if !c.is_zero() {
                *row = &*row - &r.scale(&c);
                for (i, x) in combo.iter().enumerate() {
                    if !x.is_zero() {
                        rc[i] -= &c * x;
                    }
                }
            }
        }
        self.pivots.insert(lm, self.rows.len());
        self.rows.push((r, combo));
        true
    }

    /// Coefficients c with target = sum c_i candidate_i, if any.
    pub fn express(&self, target: &Polynomial) -> Option<Vec<Q>> {
        let mut combo = vec![Q::zero(); self.ncand];
        // afterwards target + sum combo_i cand_i = 0 when fully reduced
        let r = self.reduce(target, &mut combo);
        if !r.is_zero() {
            return None;
        }
        Some(combo.into_iter().map(|x| -x).collect())
    }
}

impl Default for Combiner {
    fn default() -> Self {
        Self::new()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::parse::poly;
    use crate::ring::poly::Vars;

    #[test]
    fn finds_combination() {
        let c = Vars::new(&["x", "y"]);
        let cands = [poly("x+y", &c), poly("x-y", &c), poly("2*x", &c), poly("y^2", &c)];
        let mut cb = Combiner::new();
        let indep: Vec<bool> = cands.iter().map(|v| cb.push(v)).collect();
        assert_eq!(indep, vec![true, true, false, true]);
        let t = poly("3*x + y - y^2", &c);
        let co = cb.express(&t).unwrap();
        let mut s = Polynomial::zero(&c);
        for (k, v) in cands.iter().enumerate() {
            s = &s + &v.scale(&co[k]);
        }
        assert_eq!(s, t);
        assert!(cb.express(&poly("x*y", &c)).is_none());
    }
}

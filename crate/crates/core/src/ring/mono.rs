use serde::{Deserialize, Serialize};
use smallvec::SmallVec;
use std::cmp::Ordering;

pub type Exp = u32;

/// Exponent vector; its length always equals the ambient variable count.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(SmallVec<[Exp; 8]>);

impl Monomial {
    pub fn one(n: usize) -> Self {
        Monomial(SmallVec::from_elem(0, n))
    }

    pub fn from_exps(e: &[Exp]) -> Self {
        Monomial(SmallVec::from_slice(e))
    }

    pub fn var(n: usize, i: usize, e: Exp) -> Self {
        let mut m = Self::one(n);
        m.0[i] = e;
        m
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn exps(&self) -> &[Exp] {
        &self.0
    }

    pub fn exp(&self, i: usize) -> Exp {
        self.0[i]
    }

    pub fn set(&mut self, i: usize, e: Exp) {
        self.0[i] = e;
    }

    pub fn degree(&self) -> u64 {
        self.0.iter().map(|&e| e as u64).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, o: &Monomial) -> Monomial {
        debug_assert_eq!(self.0.len(), o.0.len());
        Monomial(self.0.iter().zip(o.0.iter()).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, o: &Monomial) -> bool {
        self.0.iter().zip(o.0.iter()).all(|(a, b)| a <= b)
    }

    /// `o / self` when self divides o.
    pub fn quotient_of(&self, o: &Monomial) -> Option<Monomial> {
        if self.divides(o) {
            Some(Monomial(
                o.0.iter().zip(self.0.iter()).map(|(a, b)| a - b).collect(),
            ))
        } else {
            None
        }
    }

    pub fn lcm(&self, o: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(o.0.iter()).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn gcd(&self, o: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(o.0.iter()).map(|(a, b)| *a.min(b)).collect())
    }

    pub fn coprime(&self, o: &Monomial) -> bool {
        self.0.iter().zip(o.0.iter()).all(|(a, b)| *a == 0 || *b == 0)
    }

    pub fn uses_only(&self, allowed: &[bool]) -> bool {
        self.0.iter().zip(allowed).all(|(e, ok)| *ok || *e == 0)
    }
}

/// Term orders. `Block(starts)` splits the variables at the listed indices;
/// blocks are compared left to right, each by degrevlex.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[derive(Default)]
pub enum MonomialOrder {
    #[default]
    DegRevLex,
    Lex,
    Block(Vec<usize>),
}


fn grevlex(a: &[Exp], b: &[Exp]) -> Ordering {
    let da: u64 = a.iter().map(|&e| e as u64).sum();
    let db: u64 = b.iter().map(|&e| e as u64).sum();
    if da != db {
        return da.cmp(&db);
    }
    for i in (0..a.len()).rev() {
        if a[i] != b[i] {
            return b[i].cmp(&a[i]);
        }
    }
    Ordering::Equal
}

impl MonomialOrder {
    pub fn elimination(split: usize) -> Self {
        MonomialOrder::Block(vec![split])
    }

    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        let (x, y) = (a.exps(), b.exps());
        match self {
            MonomialOrder::DegRevLex => grevlex(x, y),
            MonomialOrder::Lex => x.cmp(y),
            MonomialOrder::Block(starts) => {
                let mut lo = 0;
                for &s in starts.iter().chain(std::iter::once(&x.len())) {
                    let s = s.min(x.len());
                    if s > lo {
                        let c = grevlex(&x[lo..s], &y[lo..s]);
                        if c != Ordering::Equal {
                            return c;
                        }
                        lo = s;
                    }
                }
                Ordering::Equal
            }
        }
    }

    pub fn name(&self) -> String {
        match self {
            MonomialOrder::DegRevLex => "degrevlex".into(),
            MonomialOrder::Lex => "lex".into(),
            MonomialOrder::Block(s) => format!(
                "block({})",
                s.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(",")
            ),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(e: &[Exp]) -> Monomial {
        Monomial::from_exps(e)
    }

    #[test]
    fn grevlex_basics() {
        let o = MonomialOrder::DegRevLex;
        // x^2 > xy > y^2 > x > y > 1
        let chain = [m(&[2, 0]), m(&[1, 1]), m(&[0, 2]), m(&[1, 0]), m(&[0, 1]), m(&[0, 0])];
        for w in chain.windows(2) {
            assert_eq!(o.cmp(&w[0], &w[1]), Ordering::Greater);
        }
        // degrevlex vs lex differ on x z vs y^2 in three variables
        assert_eq!(o.cmp(&m(&[1, 0, 1]), &m(&[0, 2, 0])), Ordering::Less);
        assert_eq!(MonomialOrder::Lex.cmp(&m(&[1, 0, 1]), &m(&[0, 2, 0])), Ordering::Greater);
    }

    #[test]
    fn block_eliminates_first_block() {
        let o = MonomialOrder::elimination(1);
        assert_eq!(o.cmp(&m(&[1, 0]), &m(&[0, 5])), Ordering::Greater);
        assert_eq!(o.cmp(&m(&[1, 2]), &m(&[1, 1])), Ordering::Greater);
    }

    #[test]
    fn lcm_gcd_divide() {
        let a = m(&[2, 1]);
        let b = m(&[1, 3]);
        assert_eq!(a.lcm(&b), m(&[2, 3]));
        assert_eq!(a.gcd(&b), m(&[1, 1]));
        assert!(a.gcd(&b).divides(&a));
        assert_eq!(m(&[1, 1]).quotient_of(&a), Some(m(&[1, 0])));
        assert!(!a.coprime(&b));
    }
}

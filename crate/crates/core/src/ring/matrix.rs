use super::poly::{q, Ctx, Polynomial, Q};
use crate::error::{EngineError, Result};
use num_traits::One;

/// Dense row-major matrix of polynomials sharing one context.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMatrix {
    rows: usize,
    cols: usize,
    ctx: Ctx,
    entries: Vec<Polynomial>,
}

impl PolyMatrix {
    pub fn new(ctx: &Ctx, rows: usize, cols: usize, entries: Vec<Polynomial>) -> Result<Self> {
        if rows * cols != entries.len() {
            return Err(EngineError::ShapeError(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        let entries = entries
            .into_iter()
            .map(|e| e.embed(ctx))
            .collect::<Result<Vec<_>>>()?;
        Ok(PolyMatrix { rows, cols, ctx: ctx.clone(), entries })
    }

    pub fn from_fn(
        ctx: &Ctx,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> Polynomial,
    ) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j).embed_unchecked(ctx));
            }
        }
        PolyMatrix { rows, cols, ctx: ctx.clone(), entries }
    }

    pub fn zeros(ctx: &Ctx, rows: usize, cols: usize) -> Self {
        Self::from_fn(ctx, rows, cols, |_, _| Polynomial::zero(ctx))
    }

    pub fn identity(ctx: &Ctx, n: usize) -> Self {
        Self::from_fn(ctx, n, n, |i, j| {
            if i == j {
                Polynomial::one(ctx)
            } else {
                Polynomial::zero(ctx)
            }
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn ctx(&self) -> &Ctx {
        &self.ctx
    }
    pub fn entries(&self) -> &[Polynomial] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> &Polynomial {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: Polynomial) {
        self.entries[i * self.cols + j] = p.embed_unchecked(&self.ctx);
    }

    pub fn column(&self, j: usize) -> Vec<Polynomial> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn map(&self, f: impl Fn(&Polynomial) -> Polynomial, ctx: &Ctx) -> PolyMatrix {
        PolyMatrix::from_fn(ctx, self.rows, self.cols, |i, j| f(self.get(i, j)))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    fn need_square(&self) -> Result<()> {
        if self.is_square() {
            Ok(())
        } else {
            Err(EngineError::ShapeError(format!("{}x{} is not square", self.rows, self.cols)))
        }
    }

    pub fn mul(&self, o: &PolyMatrix) -> Result<PolyMatrix> {
        if self.cols != o.rows {
            return Err(EngineError::ShapeError(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, o.rows, o.cols
            )));
        }
        Ok(PolyMatrix::from_fn(&self.ctx, self.rows, o.cols, |i, j| {
            let mut s = Polynomial::zero(&self.ctx);
            for k in 0..self.cols {
                s = &s + &(self.get(i, k) * o.get(k, j));
            }
            s
        }))
    }

    pub fn add(&self, o: &PolyMatrix) -> Result<PolyMatrix> {
        if (self.rows, self.cols) != (o.rows, o.cols) {
            return Err(EngineError::ShapeError("size mismatch".into()));
        }
        Ok(PolyMatrix::from_fn(&self.ctx, self.rows, self.cols, |i, j| self.get(i, j) + o.get(i, j)))
    }

    pub fn sub(&self, o: &PolyMatrix) -> Result<PolyMatrix> {
        if (self.rows, self.cols) != (o.rows, o.cols) {
            return Err(EngineError::ShapeError("size mismatch".into()));
        }
        Ok(PolyMatrix::from_fn(&self.ctx, self.rows, self.cols, |i, j| self.get(i, j) - o.get(i, j)))
    }

    pub fn scale(&self, p: &Polynomial) -> PolyMatrix {
        self.map(|e| e * p, &self.ctx.clone())
    }

    pub fn add_scalar(&self, p: &Polynomial) -> Result<PolyMatrix> {
        self.need_square()?;
        let mut m = self.clone();
        for i in 0..self.rows {
            let v = m.get(i, i) + p;
            m.set(i, i, v);
        }
        Ok(m)
    }

    pub fn transpose(&self) -> PolyMatrix {
        PolyMatrix::from_fn(&self.ctx, self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn trace(&self) -> Polynomial {
        let mut s = Polynomial::zero(&self.ctx);
        for i in 0..self.rows.min(self.cols) {
            s = &s + self.get(i, i);
        }
        s
    }

    pub fn mul_vec(&self, v: &[Polynomial]) -> Result<Vec<Polynomial>> {
        if v.len() != self.cols {
            return Err(EngineError::ShapeError("vector length".into()));
        }
        Ok((0..self.rows)
            .map(|i| {
                let mut s = Polynomial::zero(&self.ctx);
                for j in 0..self.cols {
                    s = &s + &(self.get(i, j) * &v[j]);
                }
                s
            })
            .collect())
    }

    /// Fraction-free (Bareiss) determinant.
    pub fn det_ff(&self) -> Result<Polynomial> {
        self.need_square()?;
        let n = self.rows;
        if n == 0 {
            return Ok(Polynomial::one(&self.ctx));
        }
        let mut a: Vec<Vec<Polynomial>> =
            (0..n).map(|i| (0..n).map(|j| self.get(i, j).clone()).collect()).collect();
        let mut sign = false;
        let mut prev = Polynomial::one(&self.ctx);
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                // prefer the sparsest available pivot
                let piv = (k + 1..n)
                    .filter(|&r| !a[r][k].is_zero())
                    .min_by_key(|&r| a[r][k].nterms());
                match piv {
                    Some(r) => {
                        a.swap(k, r);
                        sign = !sign;
                    }
                    None => return Ok(Polynomial::zero(&self.ctx)),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &(&a[k][k] * &a[i][j]) - &(&a[i][k] * &a[k][j]);
                    a[i][j] = num.div_exact(&prev).expect("Bareiss division is exact");
                }
                a[i][k] = Polynomial::zero(&self.ctx);
            }
            prev = a[k][k].clone();
        }
        let d = a[n - 1][n - 1].clone();
        Ok(if sign { -d } else { d })
    }

    /// Fraction-free solve of M·x = rhs for square nonsingular M: returns
    /// (D, [D·x_j]) with D = ±det M, or None when M is singular.
    pub fn solve_ff(&self, rhs: &[Polynomial]) -> Result<Option<(Polynomial, Vec<Polynomial>)>> {
        self.need_square()?;
        let n = self.rows;
        if rhs.len() != n {
            return Err(EngineError::ShapeError("right-hand side length".into()));
        }
        if n == 0 {
            return Ok(Some((Polynomial::one(&self.ctx), vec![])));
        }
        let mut a: Vec<Vec<Polynomial>> = (0..n)
            .map(|i| (0..n).map(|j| self.get(i, j).clone()).chain([rhs[i].embed_unchecked(&self.ctx)]).collect())
            .collect();
        let mut prev = Polynomial::one(&self.ctx);
        for k in 0..n {
            if a[k][k].is_zero() {
                let piv = (k + 1..n).filter(|&r| !a[r][k].is_zero()).min_by_key(|&r| a[r][k].nterms());
                match piv {
                    Some(r) => a.swap(k, r),
                    None => return Ok(None),
                }
            }
            for i in k + 1..n {
                for j in k + 1..=n {
                    let num = &(&a[k][k] * &a[i][j]) - &(&a[i][k] * &a[k][j]);
                    a[i][j] = num.div_exact(&prev).expect("Bareiss division is exact");
                }
                a[i][k] = Polynomial::zero(&self.ctx);
            }
            prev = a[k][k].clone();
        }
        let d = a[n - 1][n - 1].clone();
        let mut xs = vec![Polynomial::zero(&self.ctx); n];
        for i in (0..n).rev() {
            let mut s = &a[i][n] * &d;
            for j in i + 1..n {
                s = &s - &(&a[i][j] * &xs[j]);
            }
            xs[i] = s.div_exact(&a[i][i]).ok_or_else(|| EngineError::InvariantRecheckFailed("inexact back substitution".into()))?;
        }
        Ok(Some((d, xs)))
    }

    /// Faddeev–LeVerrier: returns (c_0, ..., c_n) with c_n = 1 and
    /// det(T I - M) = sum c_k T^k, together with M_n (adj = (-1)^(n+1) M_n).
    fn leverrier(&self) -> Result<(Vec<Polynomial>, PolyMatrix)> {
        self.need_square()?;
        let n = self.rows;
        let mut c = vec![Polynomial::zero(&self.ctx); n + 1];
        c[n] = Polynomial::one(&self.ctx);
        let mut mk = PolyMatrix::zeros(&self.ctx, n, n);
        for k in 1..=n {
            // M_k = A M_{k-1} + c_{n-k+1} I
            mk = self.mul(&mk)?.add_scalar(&c[n - k + 1])?;
            let am = self.mul(&mk)?;
            c[n - k] = am.trace().scale(&(-Q::one() / q(k as i64)));
        }
        Ok((c, mk))
    }

    pub fn char_poly_coeffs(&self) -> Result<Vec<Polynomial>> {
        Ok(self.leverrier()?.0)
    }

    /// Characteristic polynomial det(var·I − M) in the context extended by `var`.
    pub fn char_poly(&self, var: &str) -> Result<Polynomial> {
        let c = self.char_poly_coeffs()?;
        let ctx = self.ctx.extend(&[var]);
        let t = ctx.index(var).unwrap();
        Ok(Polynomial::from_coeffs_in(&ctx, t, &c))
    }

    pub fn adjugate(&self) -> Result<PolyMatrix> {
        self.need_square()?;
        let n = self.rows;
        if n == 0 {
            return Ok(self.clone());
        }
        let (_, mn) = self.leverrier()?;
        Ok(if n % 2 == 1 { mn } else { mn.scale(&Polynomial::int(&self.ctx, -1)) })
    }

    /// sum_k coeffs[k] M^k
    pub fn eval_poly(&self, coeffs: &[Polynomial]) -> Result<PolyMatrix> {
        self.need_square()?;
        let mut acc = PolyMatrix::zeros(&self.ctx, self.rows, self.cols);
        for c in coeffs.iter().rev() {
            acc = self.mul(&acc)?.add_scalar(c)?;
        }
        Ok(acc)
    }

    /// Determinant by cofactor expansion; used as a check on small inputs.
    pub fn det_cofactor(&self) -> Result<Polynomial> {
        self.need_square()?;
        let n = self.rows;
        if n == 0 {
            return Ok(Polynomial::one(&self.ctx));
        }
        if n == 1 {
            return Ok(self.get(0, 0).clone());
        }
        let mut s = Polynomial::zero(&self.ctx);
        for j in 0..n {
            if self.get(0, j).is_zero() {
                continue;
            }
            let minor = PolyMatrix::from_fn(&self.ctx, n - 1, n - 1, |r, c| {
                self.get(r + 1, if c < j { c } else { c + 1 }).clone()
            });
            let t = self.get(0, j) * &minor.det_cofactor()?;
            s = if j % 2 == 0 { &s + &t } else { &s - &t };
        }
        Ok(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::parse::poly;
    use crate::ring::poly::Vars;

    fn m(ctx: &Ctx, n: usize, es: &[&str]) -> PolyMatrix {
        PolyMatrix::new(ctx, n, es.len() / n, es.iter().map(|s| poly(s, ctx)).collect()).unwrap()
    }

    #[test]
    fn determinant_examples() {
        let c = Vars::new(&["a", "b", "c", "d", "T"]);
        assert_eq!(m(&c, 1, &["1"]).det_ff().unwrap(), poly("1", &c));
        assert_eq!(m(&c, 2, &["a", "b", "c", "d"]).det_ff().unwrap(), poly("a*d-b*c", &c));
        let t = m(&c, 2, &["T", "-1", "0", "T"]);
        assert_eq!(t.det_ff().unwrap(), poly("T^2", &c));
        assert_eq!(t.det_cofactor().unwrap(), poly("T^2", &c));
        assert!(m(&c, 1, &["a", "b"]).det_ff().is_err());
    }

    #[test]
    fn zero_pivot_needs_swap() {
        let c = Vars::new(&["a"]);
        let x = m(&c, 3, &["0", "1", "a", "1", "0", "2", "a", "3", "0"]);
        assert_eq!(x.det_ff().unwrap(), x.det_cofactor().unwrap());
    }

    #[test]
    fn char_poly_examples() {
        let c = Vars::new(&["a", "b", "c", "d"]);
        let i2 = PolyMatrix::identity(&c, 2);
        assert_eq!(i2.char_poly("T").unwrap().to_string(), "T^2 - 2*T + 1");
        let bb = m(&c, 2, &["b", "0", "0", "b"]);
        let e = bb.char_poly("T").unwrap();
        assert_eq!(e, poly("T^2 - 2*b*T + b^2", e.ctx()));
        let g = m(&c, 2, &["a", "b", "c", "d"]).char_poly("T").unwrap();
        assert_eq!(g, poly("T^2 - (a+d)*T + a*d - b*c", g.ctx()));
    }

    #[test]
    fn adjugate_times_matrix_is_det() {
        let c = Vars::new(&["a", "b"]);
        let x = m(&c, 3, &["a", "1", "b", "2", "a*b", "0", "1", "b", "a+1"]);
        let adj = x.adjugate().unwrap();
        let d = x.det_ff().unwrap();
        let prod = adj.mul(&x).unwrap();
        assert_eq!(prod, PolyMatrix::identity(&c, 3).scale(&d));
    }
}

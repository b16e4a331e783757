use super::mono::{Exp, Monomial, MonomialOrder};
use crate::error::{Caps, EngineError, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qf(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Ordered list of variable names.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Vars {
    names: Vec<String>,
}

pub type Ctx = Arc<Vars>;

impl Vars {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Ctx {
        let names: Vec<String> = names.iter().map(|s| s.as_ref().to_string()).collect();
        for (i, n) in names.iter().enumerate() {
            assert!(!names[..i].contains(n), "duplicate variable {n}");
        }
        Arc::new(Vars { names })
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn require(&self, name: &str) -> Result<usize> {
        self.index(name).ok_or_else(|| EngineError::UnknownVariable(name.to_string()))
    }

    /// Union of two contexts, sorted by name.
    pub fn union(a: &Vars, b: &Vars) -> Ctx {
        let mut all: Vec<String> = a.names.iter().chain(b.names.iter()).cloned().collect();
        all.sort();
        all.dedup();
        Arc::new(Vars { names: all })
    }

    /// Append names not yet present, keeping the current order.
    pub fn extend<S: AsRef<str>>(&self, extra: &[S]) -> Ctx {
        let mut names = self.names.clone();
        for e in extra {
            if !names.iter().any(|n| n == e.as_ref()) {
                names.push(e.as_ref().to_string());
            }
        }
        Arc::new(Vars { names })
    }

    /// A name starting with `stem` not present in the context.
    pub fn fresh(&self, stem: &str) -> String {
        if self.index(stem).is_none() {
            return stem.to_string();
        }
        let mut i = 0;
        loop {
            let c = format!("{stem}{i}");
            if self.index(&c).is_none() {
                return c;
            }
            i += 1;
        }
    }
}

pub fn same_ctx(a: &Ctx, b: &Ctx) -> bool {
    Arc::ptr_eq(a, b) || a.names == b.names
}

/// Sparse polynomial with rational coefficients, terms kept in descending
/// degrevlex order.
#[derive(Clone, Debug)]
pub struct Polynomial {
    ctx: Ctx,
    terms: Vec<(Monomial, Q)>,
}

impl PartialEq for Polynomial {
    fn eq(&self, o: &Self) -> bool {
        same_ctx(&self.ctx, &o.ctx) && self.terms == o.terms
    }
}
impl Eq for Polynomial {}

impl std::hash::Hash for Polynomial {
    fn hash<H: std::hash::Hasher>(&self, h: &mut H) {
        self.ctx.names.hash(h);
        self.terms.hash(h);
    }
}

const CANON: MonomialOrder = MonomialOrder::DegRevLex;

fn canon_sort(terms: &mut Vec<(Monomial, Q)>) {
    terms.sort_by(|a, b| CANON.cmp(&b.0, &a.0));
}

/// Coefficient accumulator used by products and substitutions.
pub(crate) struct Acc {
    map: HashMap<Monomial, Q>,
}

impl Acc {
    pub fn new() -> Self {
        Acc { map: HashMap::new() }
    }
    pub fn add(&mut self, m: Monomial, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.map.entry(m) {
            std::collections::hash_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
            std::collections::hash_map::Entry::Vacant(e) => {
                e.insert(c);
            }
        }
    }
    pub fn finish(self, ctx: &Ctx) -> Polynomial {
        let mut terms: Vec<_> = self.map.into_iter().collect();
        canon_sort(&mut terms);
        Polynomial { ctx: ctx.clone(), terms }
    }
}

impl Polynomial {
    pub fn zero(ctx: &Ctx) -> Self {
        Polynomial { ctx: ctx.clone(), terms: vec![] }
    }

    pub fn one(ctx: &Ctx) -> Self {
        Self::constant(ctx, Q::one())
    }

    pub fn constant(ctx: &Ctx, c: Q) -> Self {
        if c.is_zero() {
            return Self::zero(ctx);
        }
        Polynomial { ctx: ctx.clone(), terms: vec![(Monomial::one(ctx.len()), c)] }
    }

    pub fn int(ctx: &Ctx, c: i64) -> Self {
        Self::constant(ctx, q(c))
    }

    pub fn var(ctx: &Ctx, i: usize) -> Self {
        Self::monomial(ctx, Monomial::var(ctx.len(), i, 1), Q::one())
    }

    pub fn var_named(ctx: &Ctx, name: &str) -> Result<Self> {
        Ok(Self::var(ctx, ctx.require(name)?))
    }

    pub fn monomial(ctx: &Ctx, m: Monomial, c: Q) -> Self {
        assert_eq!(m.nvars(), ctx.len());
        if c.is_zero() {
            return Self::zero(ctx);
        }
        Polynomial { ctx: ctx.clone(), terms: vec![(m, c)] }
    }

    /// Build from arbitrary (possibly repeated, unordered) terms.
    pub fn from_terms(ctx: &Ctx, terms: impl IntoIterator<Item = (Monomial, Q)>) -> Self {
        let mut acc = Acc::new();
        for (m, c) in terms {
            assert_eq!(m.nvars(), ctx.len());
            acc.add(m, c);
        }
        acc.finish(ctx)
    }

    pub fn ctx(&self) -> &Ctx {
        &self.ctx
    }

    pub fn terms(&self) -> &[(Monomial, Q)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(Monomial, Q)> {
        self.terms
    }

    pub fn nterms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.constant_value().is_some_and(|c| c.is_one())
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].0.is_one())
    }

    pub fn constant_value(&self) -> Option<Q> {
        if self.terms.is_empty() {
            Some(Q::zero())
        } else if self.is_constant() {
            Some(self.terms[0].1.clone())
        } else {
            None
        }
    }

    /// Coefficient of the constant monomial.
    pub fn constant_term(&self) -> Q {
        match self.terms.last() {
            Some((m, c)) if m.is_one() => c.clone(),
            _ => Q::zero(),
        }
    }

    pub fn coeff(&self, m: &Monomial) -> Q {
        self.terms
            .iter()
            .find(|(t, _)| t == m)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Q::zero)
    }

    pub fn total_degree(&self) -> u64 {
        self.terms.iter().map(|(m, _)| m.degree()).max().unwrap_or(0)
    }

    pub fn degree_in(&self, i: usize) -> Exp {
        self.terms.iter().map(|(m, _)| m.exp(i)).max().unwrap_or(0)
    }

    pub fn uses_var(&self, i: usize) -> bool {
        self.terms.iter().any(|(m, _)| m.exp(i) > 0)
    }

    /// Indices of variables occurring in the polynomial.
    pub fn support_vars(&self) -> Vec<usize> {
        (0..self.ctx.len()).filter(|&i| self.uses_var(i)).collect()
    }

    /// True when only variables flagged in `allowed` occur.
    pub fn uses_only(&self, allowed: &[bool]) -> bool {
        self.terms.iter().all(|(m, _)| m.uses_only(allowed))
    }

    pub fn uses_only_named(&self, names: &[String]) -> bool {
        let allowed: Vec<bool> = self.ctx.names.iter().map(|n| names.contains(n)).collect();
        self.uses_only(&allowed)
    }

    pub fn leading(&self) -> Option<&(Monomial, Q)> {
        self.terms.first()
    }

    pub fn scale(&self, c: &Q) -> Polynomial {
        if c.is_zero() {
            return Self::zero(&self.ctx);
        }
        Polynomial {
            ctx: self.ctx.clone(),
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &Q) -> Polynomial {
        if c.is_zero() {
            return Self::zero(&self.ctx);
        }
        // multiplication by a monomial preserves any term order
        Polynomial {
            ctx: self.ctx.clone(),
            terms: self.terms.iter().map(|(t, a)| (t.mul(m), a * c)).collect(),
        }
    }

    /// Multiply by a power of one variable.
    pub fn mul_var_pow(&self, i: usize, e: Exp) -> Polynomial {
        self.mul_monomial(&Monomial::var(self.ctx.len(), i, e), &Q::one())
    }

    /// Make monic with respect to the canonical order.
    pub fn monic(&self) -> Polynomial {
        match self.terms.first() {
            None => self.clone(),
            Some((_, c)) => self.scale(&(Q::one() / c)),
        }
    }

    fn binary(&self, o: &Polynomial, sign: bool) -> Polynomial {
        if !same_ctx(&self.ctx, &o.ctx) {
            let (a, b) = align(self, o);
            return a.binary(&b, sign);
        }
        let mut out = Vec::with_capacity(self.terms.len() + o.terms.len());
        let (mut i, mut j) = (0, 0);
        let (x, y) = (&self.terms, &o.terms);
        while i < x.len() && j < y.len() {
            match CANON.cmp(&x[i].0, &y[j].0) {
                std::cmp::Ordering::Greater => {
                    out.push(x[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Less => {
                    let c = if sign { y[j].1.clone() } else { -&y[j].1 };
                    out.push((y[j].0.clone(), c));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = if sign { &x[i].1 + &y[j].1 } else { &x[i].1 - &y[j].1 };
                    if !c.is_zero() {
                        out.push((x[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(x[i..].iter().cloned());
        for t in &y[j..] {
            let c = if sign { t.1.clone() } else { -&t.1 };
            out.push((t.0.clone(), c));
        }
        Polynomial { ctx: self.ctx.clone(), terms: out }
    }

    fn product(&self, o: &Polynomial) -> Polynomial {
        if !same_ctx(&self.ctx, &o.ctx) {
            let (a, b) = align(self, o);
            return a.product(&b);
        }
        if self.is_zero() || o.is_zero() {
            return Self::zero(&self.ctx);
        }
        if o.terms.len() == 1 {
            return self.mul_monomial(&o.terms[0].0, &o.terms[0].1);
        }
        if self.terms.len() == 1 {
            return o.mul_monomial(&self.terms[0].0, &self.terms[0].1);
        }
        let mut acc = Acc::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                acc.add(m1.mul(m2), c1 * c2);
            }
        }
        acc.finish(&self.ctx)
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut result = Self::one(&self.ctx);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// `pow` guarded by the configured degree cap.
    pub fn try_pow(&self, e: u32) -> Result<Polynomial> {
        Caps::check_degree(self.total_degree() * e as u64)?;
        Ok(self.pow(e))
    }

    pub fn derivative(&self, i: usize) -> Polynomial {
        let mut acc = Acc::new();
        for (m, c) in &self.terms {
            let e = m.exp(i);
            if e > 0 {
                let mut m2 = m.clone();
                m2.set(i, e - 1);
                acc.add(m2, c * q(e as i64));
            }
        }
        acc.finish(&self.ctx)
    }

    /// Evaluate with `images[i]` substituted for variable i; all images must
    /// share the target context.
    pub fn eval_map(&self, images: &[Polynomial], target: &Ctx) -> Polynomial {
        assert_eq!(images.len(), self.ctx.len());
        let mut cache: HashMap<(usize, Exp), Polynomial> = HashMap::new();
        let mut acc = Acc::new();
        for (m, c) in &self.terms {
            let mut term = Polynomial::constant(target, c.clone());
            for (i, &e) in m.exps().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let p = cache
                    .entry((i, e))
                    .or_insert_with(|| images[i].embed_unchecked(target).pow(e))
                    .clone();
                term = &term * &p;
                if term.is_zero() {
                    break;
                }
            }
            for (tm, tc) in term.terms {
                acc.add(tm, tc);
            }
        }
        acc.finish(target)
    }

    /// Substitute named variables. Replaced variables stay in the context.
    pub fn substitute(&self, bindings: &[(&str, Polynomial)]) -> Result<Polynomial> {
        let mut target = self.ctx.clone();
        for (name, img) in bindings {
            self.ctx.require(name)?;
            if !same_ctx(&target, img.ctx()) {
                target = Vars::union(&target, img.ctx());
            }
        }
        let mut images: Vec<Polynomial> = self
            .ctx
            .names
            .iter()
            .map(|n| Polynomial::var(&target, target.index(n).unwrap()))
            .collect();
        for (name, img) in bindings {
            let i = self.ctx.index(name).unwrap();
            images[i] = img.embed(&target)?;
        }
        Ok(self.eval_map(&images, &target))
    }

    /// Rename into another context by name; fails if a used variable is missing.
    pub fn embed(&self, target: &Ctx) -> Result<Polynomial> {
        if same_ctx(&self.ctx, target) {
            return Ok(self.clone());
        }
        let mut map = Vec::with_capacity(self.ctx.len());
        for (i, n) in self.ctx.names.iter().enumerate() {
            match target.index(n) {
                Some(j) => map.push(Some(j)),
                None => {
                    if self.uses_var(i) {
                        return Err(EngineError::UnknownVariable(n.clone()));
                    }
                    map.push(None);
                }
            }
        }
        let terms = self.terms.iter().map(|(m, c)| {
            let mut e = vec![0; target.len()];
            for (i, &x) in m.exps().iter().enumerate() {
                if let Some(j) = map[i] {
                    e[j] = x;
                }
            }
            (Monomial::from_exps(&e), c.clone())
        });
        Ok(Polynomial::from_terms(target, terms))
    }

    pub(crate) fn embed_unchecked(&self, target: &Ctx) -> Polynomial {
        self.embed(target).expect("embedding into a context missing a used variable")
    }

    /// Coefficients with respect to variable i: result[k] multiplies x_i^k.
    pub fn coeffs_in(&self, i: usize) -> Vec<Polynomial> {
        let d = self.degree_in(i) as usize;
        let mut parts: Vec<Vec<(Monomial, Q)>> = vec![vec![]; d + 1];
        for (m, c) in &self.terms {
            let e = m.exp(i) as usize;
            let mut m2 = m.clone();
            m2.set(i, 0);
            parts[e].push((m2, c.clone()));
        }
        if self.is_zero() {
            return vec![Polynomial::zero(&self.ctx)];
        }
        parts
            .into_iter()
            .map(|mut t| {
                canon_sort(&mut t);
                Polynomial { ctx: self.ctx.clone(), terms: t }
            })
            .collect()
    }

    pub fn from_coeffs_in(ctx: &Ctx, i: usize, coeffs: &[Polynomial]) -> Polynomial {
        let mut acc = Acc::new();
        for (k, c) in coeffs.iter().enumerate() {
            let c = c.embed_unchecked(ctx);
            for (m, a) in c.terms {
                let mut m2 = m;
                let e = m2.exp(i);
                m2.set(i, e + k as Exp);
                acc.add(m2, a);
            }
        }
        acc.finish(ctx)
    }

    /// Leading coefficient with respect to variable i.
    pub fn lc_in(&self, i: usize) -> Polynomial {
        self.coeffs_in(i).pop().unwrap()
    }

    pub fn eval_rational(&self, point: &[Q]) -> Q {
        let mut s = Q::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.exps().iter().enumerate() {
                if e > 0 {
                    t *= num_traits::pow(point[i].clone(), e as usize);
                }
            }
            s += t;
        }
        s
    }

    /// Exact multivariate division; None when `d` does not divide.
    pub fn div_exact(&self, d: &Polynomial) -> Option<Polynomial> {
        if d.is_zero() {
            return None;
        }
        if !same_ctx(&self.ctx, &d.ctx) {
            let (a, b) = align(self, d);
            return a.div_exact(&b);
        }
        if let Some(c) = d.constant_value() {
            return Some(self.scale(&(Q::one() / c)));
        }
        let (lm, lc) = d.terms[0].clone();
        let inv = Q::one() / lc;
        let mut r = self.clone();
        let mut quot = Vec::new();
        while let Some((m, c)) = r.terms.first().cloned() {
            let u = lm.quotient_of(&m)?;
            let cu = c * &inv;
            r = &r - &d.mul_monomial(&u, &cu);
            quot.push((u, cu));
        }
        Some(Polynomial { ctx: self.ctx.clone(), terms: quot })
    }

    /// Least common denominator of the coefficients.
    pub fn denominator_lcm(&self) -> BigInt {
        let mut l = BigInt::one();
        for (_, c) in &self.terms {
            l = num_integer::Integer::lcm(&l, c.denom());
        }
        l
    }

    /// Integer coefficient vector after clearing denominators, and the factor used.
    pub fn clear_denominators(&self) -> (Vec<(Monomial, BigInt)>, BigInt) {
        let l = self.denominator_lcm();
        let v = self
            .terms
            .iter()
            .map(|(m, c)| (m.clone(), (c * Q::from_integer(l.clone())).to_integer()))
            .collect();
        (v, l)
    }

    pub fn max_coeff_bits(&self) -> u64 {
        self.terms
            .iter()
            .map(|(_, c)| c.numer().bits().max(c.denom().bits()))
            .max()
            .unwrap_or(0)
    }

    pub fn is_negative_leading(&self) -> bool {
        self.terms.first().is_some_and(|(_, c)| c.is_negative())
    }
}

/// Bring two polynomials into a joint context (sorted union of names).
pub fn align(a: &Polynomial, b: &Polynomial) -> (Polynomial, Polynomial) {
    let u = Vars::union(&a.ctx, &b.ctx);
    (a.embed_unchecked(&u), b.embed_unchecked(&u))
}

macro_rules! binop {
    ($tr:ident, $f:ident, $body:expr) => {
        impl<'a> $tr<&'a Polynomial> for &'a Polynomial {
            type Output = Polynomial;
            fn $f(self, o: &'a Polynomial) -> Polynomial {
                $body(self, o)
            }
        }
        impl $tr<Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $f(self, o: Polynomial) -> Polynomial {
                $body(&self, &o)
            }
        }
        impl<'a> $tr<&'a Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $f(self, o: &'a Polynomial) -> Polynomial {
                $body(&self, o)
            }
        }
        impl<'a> $tr<Polynomial> for &'a Polynomial {
            type Output = Polynomial;
            fn $f(self, o: Polynomial) -> Polynomial {
                $body(self, &o)
            }
        }
    };
}

binop!(Add, add, |a: &Polynomial, b: &Polynomial| a.binary(b, true));
binop!(Sub, sub, |a: &Polynomial, b: &Polynomial| a.binary(b, false));
binop!(Mul, mul, |a: &Polynomial, b: &Polynomial| a.product(b));

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(&q(-1))
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(&q(-1))
    }
}

fn fmt_q(c: &Q) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            let a = c.abs();
            let mono: Vec<String> = m
                .exps()
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| {
                    if e == 1 {
                        self.ctx.names[i].clone()
                    } else {
                        format!("{}^{}", self.ctx.names[i], e)
                    }
                })
                .collect();
            if mono.is_empty() {
                write!(f, "{}", fmt_q(&a))?;
            } else if a.is_one() {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "{}*{}", fmt_q(&a), mono.join("*"))?;
            }
        }
        Ok(())
    }
}

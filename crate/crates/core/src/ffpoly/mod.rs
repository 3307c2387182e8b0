//! Sparse multivariate polynomials over a prime field.
//!
//! Terms live in a `BTreeMap` keyed by exponent vectors under graded-lex
//! order, so iteration and serialization are deterministic. Stored
//! coefficients are never zero.

mod compose;
mod parse;

pub use compose::{compose_gamma, compose_polynomial, Composed, GammaTable};
pub use parse::{parse_poly, parse_poly_list};

use crate::error::{Error, Result};
use crate::field::{FieldCtx, Points};
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

/// Exponent vector of a single term. Ordered by total degree, then
/// lexicographically with `x1` most significant.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn one(n: usize) -> Self {
        Monomial(vec![0; n])
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Reduced exponent under `x^p = x`: keeps 0, maps e >= 1 into `1..p`.
#[inline]
fn reduce_exponent(e: u32, p: u32) -> u32 {
    if e < p {
        e
    } else {
        (e - 1) % (p - 1) + 1
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    ctx: FieldCtx,
    n: usize,
    terms: BTreeMap<Monomial, u32>,
}

impl MultiPoly {
    pub fn zero(ctx: FieldCtx, n: usize) -> Self {
        MultiPoly {
            ctx,
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(ctx: FieldCtx, n: usize, c: i64) -> Self {
        let mut f = Self::zero(ctx, n);
        f.add_term(Monomial::one(n), ctx.reduce_i64(c));
        f
    }

    /// The variable `x_{i+1}` (0-based index `i`).
    pub fn var(ctx: FieldCtx, n: usize, i: usize) -> Self {
        assert!(i < n, "variable index {i} out of range for n = {n}");
        let mut e = vec![0; n];
        e[i] = 1;
        let mut f = Self::zero(ctx, n);
        f.add_term(Monomial(e), 1);
        f
    }

    /// Affine linear form `sum a_i x_i + b`.
    pub fn linear(ctx: FieldCtx, coeffs: &[u32], b: u32) -> Self {
        let n = coeffs.len();
        let mut f = Self::constant(ctx, n, b as i64);
        for (i, &a) in coeffs.iter().enumerate() {
            let mut e = vec![0; n];
            e[i] = 1;
            f.add_term(Monomial(e), a % ctx.p());
        }
        f
    }

    pub fn from_terms<I>(ctx: FieldCtx, n: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, i64)>,
    {
        let mut f = Self::zero(ctx, n);
        for (e, c) in terms {
            if e.len() != n {
                return Err(Error::input(format!(
                    "exponent vector has length {}, expected {n}",
                    e.len()
                )));
            }
            f.add_term(Monomial(e), ctx.reduce_i64(c));
        }
        Ok(f)
    }

    fn add_term(&mut self, m: Monomial, c: u32) {
        if c == 0 {
            return;
        }
        let ctx = self.ctx;
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = ctx.add(*o.get(), c);
                if s == 0 {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn ctx(&self) -> FieldCtx {
        self.ctx
    }

    pub fn p(&self) -> u32 {
        self.ctx.p()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, u32)> {
        self.terms.iter().map(|(m, &c)| (m, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, exponents: &[u32]) -> u32 {
        self.terms
            .get(&Monomial(exponents.to_vec()))
            .copied()
            .unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.degree() == 0)
    }

    pub fn constant_term(&self) -> u32 {
        self.coeff(&vec![0; self.n])
    }

    /// Total degree; the zero polynomial has degree 0.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    fn check_compatible(&self, other: &MultiPoly) {
        assert_eq!(self.ctx, other.ctx, "polynomials over different fields");
        assert_eq!(self.n, other.n, "polynomials in different variable counts");
    }

    pub fn add(&self, other: &MultiPoly) -> MultiPoly {
        self.check_compatible(other);
        let mut out = self.clone();
        for (m, &c) in &other.terms {
            out.add_term(m.clone(), c);
        }
        out
    }

    pub fn sub(&self, other: &MultiPoly) -> MultiPoly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> MultiPoly {
        self.scale(self.ctx.neg(1))
    }

    pub fn scale(&self, a: u32) -> MultiPoly {
        let a = a % self.p();
        let mut out = Self::zero(self.ctx, self.n);
        if a == 0 {
            return out;
        }
        for (m, &c) in &self.terms {
            out.terms.insert(m.clone(), self.ctx.mul(c, a));
        }
        out
    }

    pub fn mul(&self, other: &MultiPoly) -> MultiPoly {
        self.check_compatible(other);
        let mut out = Self::zero(self.ctx, self.n);
        for (ma, &ca) in &self.terms {
            for (mb, &cb) in &other.terms {
                out.add_term(ma.mul(mb), self.ctx.mul(ca, cb));
            }
        }
        out
    }

    pub fn pow(&self, r: u32) -> MultiPoly {
        let mut acc = Self::constant(self.ctx, self.n, 1);
        for _ in 0..r {
            acc = acc.mul(self);
        }
        acc
    }

    /// `sum a_i f_i`; all inputs share field and arity with `self`'s shape.
    pub fn linear_combination(ctx: FieldCtx, n: usize, polys: &[MultiPoly], coeffs: &[u32]) -> Self {
        let mut out = Self::zero(ctx, n);
        for (f, &a) in polys.iter().zip(coeffs) {
            if a % ctx.p() == 0 {
                continue;
            }
            for (m, &c) in &f.terms {
                out.add_term(m.clone(), ctx.mul(c, a));
            }
        }
        out
    }

    pub fn eval(&self, x: &[u32]) -> Result<u32> {
        if x.len() != self.n {
            return Err(Error::input(format!(
                "point has {} coordinates, polynomial has {} variables",
                x.len(),
                self.n
            )));
        }
        if let Some(v) = x.iter().find(|&&v| v >= self.p()) {
            return Err(Error::input(format!("coordinate {v} is not in [0, {})", self.p())));
        }
        Ok(self.eval_unchecked(x))
    }

    /// Evaluation without the shape checks; `x` must hold reduced values.
    pub fn eval_unchecked(&self, x: &[u32]) -> u32 {
        let ctx = self.ctx;
        let mut acc = 0u32;
        for (m, &c) in &self.terms {
            let mut t = c;
            for (&xi, &e) in x.iter().zip(&m.0) {
                if e > 0 {
                    t = ctx.mul(t, ctx.pow(xi, e as u64));
                    if t == 0 {
                        break;
                    }
                }
            }
            acc = ctx.add(acc, t);
        }
        acc
    }

    /// Values on every point of `F_p^n` in lexicographic order.
    pub fn truth_table(&self) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.ctx.size_f64(self.n) as usize);
        let mut pts = Points::new(self.p(), self.n);
        loop {
            out.push(self.eval_unchecked(pts.current()));
            if !pts.advance() {
                break;
            }
        }
        out
    }

    /// Substitute `x_i -> images[i]`. The result lives in the images' ring.
    pub fn substitute(&self, images: &[MultiPoly]) -> Result<MultiPoly> {
        if images.len() != self.n {
            return Err(Error::input(format!(
                "substitution has {} images for {} variables",
                images.len(),
                self.n
            )));
        }
        let (ctx, m) = match images.first() {
            Some(g) => (g.ctx, g.n),
            None => (self.ctx, 0),
        };
        if images.iter().any(|g| g.ctx != ctx || g.n != m) {
            return Err(Error::input("substitution images disagree on field or arity"));
        }
        // cache powers per variable
        let mut powers: Vec<Vec<MultiPoly>> = images
            .iter()
            .map(|g| vec![MultiPoly::constant(ctx, m, 1), g.clone()])
            .collect();
        let mut out = MultiPoly::zero(ctx, m);
        for (mono, &c) in &self.terms {
            let mut term = MultiPoly::constant(ctx, m, c as i64);
            for (i, &e) in mono.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = powers[i].last().unwrap().mul(&images[i]);
                    powers[i].push(next);
                }
                term = term.mul(&powers[i][e as usize]);
            }
            for (tm, tc) in term.terms {
                out.add_term(tm, tc);
            }
        }
        Ok(out)
    }

    /// `f(x + h)` as a polynomial.
    pub fn translate(&self, h: &[u32]) -> Result<MultiPoly> {
        if h.len() != self.n {
            return Err(Error::input(format!(
                "direction has {} coordinates, polynomial has {} variables",
                h.len(),
                self.n
            )));
        }
        let images: Vec<MultiPoly> = (0..self.n)
            .map(|i| {
                MultiPoly::var(self.ctx, self.n, i).add(&MultiPoly::constant(
                    self.ctx,
                    self.n,
                    (h[i] % self.p()) as i64,
                ))
            })
            .collect();
        if self.n == 0 {
            return Ok(self.clone());
        }
        self.substitute(&images)
    }

    /// `D_h f(x) = f(x + h) - f(x)`.
    pub fn derivative(&self, h: &[u32]) -> Result<MultiPoly> {
        Ok(self.translate(h)?.sub(self))
    }

    /// Iterated derivative `D_{h_1} ... D_{h_m} f`.
    pub fn derivative_along(&self, dirs: &[Vec<u32>]) -> Result<MultiPoly> {
        let mut f = self.clone();
        for h in dirs {
            if f.is_zero() {
                break;
            }
            f = f.derivative(h)?;
        }
        Ok(f)
    }

    /// Canonical representative as a function: every exponent below p.
    pub fn functional_reduce(&self) -> MultiPoly {
        let p = self.p();
        let mut out = Self::zero(self.ctx, self.n);
        for (m, &c) in &self.terms {
            let e = m.0.iter().map(|&e| reduce_exponent(e, p)).collect();
            out.add_term(Monomial(e), c);
        }
        out
    }

    pub fn is_reduced(&self) -> bool {
        self.terms.keys().all(|m| m.0.iter().all(|&e| e < self.p()))
    }

    /// Degree-`k` homogeneous component.
    pub fn homogeneous_part(&self, k: u32) -> MultiPoly {
        let mut out = Self::zero(self.ctx, self.n);
        for (m, &c) in &self.terms {
            if m.degree() == k {
                out.terms.insert(m.clone(), c);
            }
        }
        out
    }

    /// Top-degree homogeneous part; requires `deg f < p` so that the Taylor
    /// identity `f_d(x) = D_{x,...,x} f(0) / d!` is available.
    pub fn homogeneous_top(&self) -> Result<MultiPoly> {
        let d = self.degree();
        if d >= self.p() {
            return Err(Error::Unsupported(format!(
                "degree {d} is not below p = {}; d! is not invertible",
                self.p()
            )));
        }
        Ok(self.homogeneous_part(d))
    }

    /// Restrict to the hyperplane `x_{var+1} = value` (0-based `var`),
    /// renumbering the remaining variables.
    pub fn restrict(&self, var: usize, value: u32) -> Result<MultiPoly> {
        if var >= self.n {
            return Err(Error::input(format!(
                "variable index {} out of range 1..={}",
                var + 1,
                self.n
            )));
        }
        let ctx = self.ctx;
        let mut out = Self::zero(ctx, self.n - 1);
        for (m, &c) in &self.terms {
            let e = m.0[var];
            let factor = ctx.pow(value % ctx.p(), e as u64);
            let coeff = ctx.mul(c, factor);
            let mut rest = m.0.clone();
            rest.remove(var);
            out.add_term(Monomial(rest), coeff);
        }
        Ok(out)
    }

    /// Restrict to the general hyperplane `<a, x> = b` by solving for the
    /// first variable with nonzero coefficient and substituting.
    pub fn restrict_affine(&self, a: &[u32], b: u32) -> Result<MultiPoly> {
        if a.len() != self.n {
            return Err(Error::input("hyperplane normal has the wrong length"));
        }
        let ctx = self.ctx;
        let pivot = a
            .iter()
            .position(|&v| v % ctx.p() != 0)
            .ok_or_else(|| Error::input("hyperplane normal is zero"))?;
        let inv = ctx.inv(a[pivot]).unwrap();
        let m = self.n - 1;
        let mut images = Vec::with_capacity(self.n);
        for i in 0..self.n {
            if i == pivot {
                let mut coeffs = vec![0u32; m];
                for (j, &aj) in a.iter().enumerate() {
                    if j == pivot {
                        continue;
                    }
                    let slot = if j < pivot { j } else { j - 1 };
                    coeffs[slot] = ctx.neg(ctx.mul(aj % ctx.p(), inv));
                }
                images.push(MultiPoly::linear(ctx, &coeffs, ctx.mul(b % ctx.p(), inv)));
            } else {
                let slot = if i < pivot { i } else { i - 1 };
                images.push(MultiPoly::var(ctx, m, slot));
            }
        }
        if m == 0 {
            let x = [ctx.mul(b % ctx.p(), inv)];
            return Ok(MultiPoly::constant(ctx, 0, self.eval_unchecked(&x) as i64));
        }
        self.substitute(&images)
    }

    /// Embed into `m >= n` variables; the new variables are appended.
    pub fn extend_vars(&self, m: usize) -> MultiPoly {
        assert!(m >= self.n);
        let mut out = Self::zero(self.ctx, m);
        for (mono, &c) in &self.terms {
            let mut e = mono.0.clone();
            e.resize(m, 0);
            out.terms.insert(Monomial(e), c);
        }
        out
    }

    /// Canonical text: descending graded-lex, coefficients in `[1, p)`.
    pub fn to_canonical_string(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(m, &c)| {
                let vars: Vec<String> = m
                    .0
                    .iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .map(|(i, &e)| {
                        if e == 1 {
                            format!("x{}", i + 1)
                        } else {
                            format!("x{}^{}", i + 1, e)
                        }
                    })
                    .collect();
                if vars.is_empty() {
                    c.to_string()
                } else if c == 1 {
                    vars.join("*")
                } else {
                    format!("{}*{}", c, vars.join("*"))
                }
            })
            .collect();
        parts.join(" + ")
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_canonical_string())
    }
}

/// Exponent vectors of total degree `<= max_degree` with every exponent `< p`,
/// in ascending graded-lex order.
pub fn monomials_up_to(n: usize, max_degree: u32, p: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut current = vec![0u32; n];
    fn rec(i: usize, left: u32, p: u32, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if i == cur.len() {
            out.push(Monomial(cur.clone()));
            return;
        }
        let hi = left.min(p - 1);
        for e in 0..=hi {
            cur[i] = e;
            rec(i + 1, left - e, p, cur, out);
        }
        cur[i] = 0;
    }
    rec(0, max_degree, p, &mut current, &mut out);
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(p: u32) -> FieldCtx {
        FieldCtx::new(p).unwrap()
    }

    fn parse(p: u32, s: &str, n: usize) -> MultiPoly {
        parse_poly(ctx(p), s, Some(n)).unwrap()
    }

    #[test]
    fn eval_examples() {
        assert_eq!(parse(5, "x1*x2", 2).eval(&[2, 3]).unwrap(), 1);
        assert_eq!(MultiPoly::zero(ctx(5), 2).eval(&[4, 4]).unwrap(), 0);
        assert_eq!(parse(5, "3*x1^2", 1).eval(&[4]).unwrap(), 3);
        assert!(parse(5, "x1", 1).eval(&[1, 2]).is_err());
        assert!(parse(5, "x1", 1).eval(&[5]).is_err());
    }

    #[test]
    fn derivative_examples() {
        let f = parse(5, "x1^2", 1);
        assert_eq!(f.derivative(&[1]).unwrap(), parse(5, "2*x1 + 1", 1));
        let g = parse(3, "x1*x2", 2);
        assert_eq!(g.derivative(&[1, 0]).unwrap(), parse(3, "x2", 2));
        assert!(g.derivative(&[1]).is_err());
    }

    #[test]
    fn homogeneous_top_examples() {
        assert_eq!(
            parse(5, "x1^2 + x1", 1).homogeneous_top().unwrap(),
            parse(5, "x1^2", 1)
        );
        assert_eq!(
            parse(5, "3", 1).homogeneous_top().unwrap(),
            parse(5, "3", 1)
        );
        assert!(parse(3, "x1^3", 1).homogeneous_top().is_err());
    }

    #[test]
    fn restrict_examples() {
        let f = parse(5, "x1*x2 + x2", 2);
        assert_eq!(f.restrict(0, 0).unwrap(), parse(5, "x1", 1));
        assert_eq!(
            parse(5, "x1^2", 1).restrict(0, 2).unwrap(),
            MultiPoly::constant(ctx(5), 0, 4)
        );
        assert!(f.restrict(2, 0).is_err());
    }

    #[test]
    fn restrict_affine_matches_substitution_pointwise() {
        // x1 + x2 = 1 over F_5: x1 = 1 - x2, so with y = x2: f = (1-y)*y.
        let f = parse(5, "x1*x2", 2);
        let r = f.restrict_affine(&[1, 1], 1).unwrap();
        assert_eq!(r, parse(5, "4*x1^2 + x1", 1));
        // an axis-aligned normal agrees with restrict
        assert_eq!(
            f.restrict_affine(&[1, 0], 3).unwrap(),
            f.restrict(0, 3).unwrap()
        );
    }

    #[test]
    fn functional_reduce_examples() {
        assert_eq!(parse(5, "x1^5", 1).functional_reduce(), parse(5, "x1", 1));
        let q = parse(5, "x1^2", 1);
        assert_eq!(q.functional_reduce(), q);
        let f = parse(3, "x1^7 + x1", 1);
        let r = f.functional_reduce();
        assert!(r.is_reduced());
        for x in 0..3 {
            assert_eq!(f.eval(&[x]).unwrap(), r.eval(&[x]).unwrap());
        }
    }

    #[test]
    fn canonical_text_is_graded_lex_descending() {
        let f = parse(5, "1 + 3*x3 + 2*x1^2*x2", 3);
        assert_eq!(f.to_canonical_string(), "2*x1^2*x2 + 3*x3 + 1");
        assert_eq!(MultiPoly::zero(ctx(5), 3).to_canonical_string(), "0");
        assert_eq!(parse(5, "x2 + x1", 2).to_canonical_string(), "x1 + x2");
    }

    #[test]
    fn monomial_enumeration_counts() {
        // C(n + d, d) when d < p
        assert_eq!(monomials_up_to(3, 2, 5).len(), 10);
        // per-variable cap kicks in: exponents < 2 in 2 vars, total <= 2
        assert_eq!(monomials_up_to(2, 2, 2).len(), 4);
        assert_eq!(monomials_up_to(0, 3, 3).len(), 1);
    }
}

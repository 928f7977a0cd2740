//! Sparse multivariate polynomials with exact coefficients.
//!
//! Terms are kept in graded-lexicographic descending order with no zero
//! coefficients and no repeated monomials, so structural equality is
//! mathematical equality.

mod gcd;
mod matrix;
mod parse;

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::One;

use crate::error::{Error, Result};
use crate::field::{Field, Fp, PrimeField, Rational};

pub use gcd::{gcd, gcd_all, is_reduced};
pub use matrix::PolyMatrix;
pub use parse::{parse, parse_in};

pub type QPoly = Polynomial<Rational>;

/// Exponent vector of fixed length.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(Box<[u32]>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents.into_boxed_slice())
    }

    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars].into_boxed_slice())
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(other.0.iter()).map(|(a, b)| a + b).collect())
    }

    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(Monomial::new)
    }

    /// All exponent vectors of total degree `degree` in `nvars` variables, in
    /// graded-lex descending order.
    pub fn all_of_degree(nvars: usize, degree: u32) -> Vec<Monomial> {
        fn rec(prefix: &mut Vec<u32>, left: usize, remaining: u32, out: &mut Vec<Monomial>) {
            if left == 1 {
                prefix.push(remaining);
                out.push(Monomial::new(prefix.clone()));
                prefix.pop();
                return;
            }
            for e in (0..=remaining).rev() {
                prefix.push(e);
                rec(prefix, left - 1, remaining - e, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        if nvars == 0 {
            if degree == 0 {
                out.push(Monomial::one(0));
            }
            return out;
        }
        rec(&mut Vec::with_capacity(nvars), nvars, degree, &mut out);
        out
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Polynomial<K: Field> {
    nvars: usize,
    ctx: K::Ctx,
    terms: Vec<(Monomial, K)>,
}

impl<K: Field> Polynomial<K> {
    pub fn zero(nvars: usize, ctx: K::Ctx) -> Self {
        Polynomial { nvars, ctx, terms: Vec::new() }
    }

    pub fn constant(c: K, nvars: usize) -> Self {
        let ctx = c.ctx();
        if c.is_zero() {
            return Self::zero(nvars, ctx);
        }
        Polynomial { nvars, ctx, terms: vec![(Monomial::one(nvars), c)] }
    }

    pub fn one(nvars: usize, ctx: K::Ctx) -> Self {
        Self::constant(K::one(&ctx), nvars)
    }

    /// The variable `x_i`. Panics if `i >= nvars`.
    pub fn var(i: usize, nvars: usize, ctx: K::Ctx) -> Self {
        assert!(i < nvars, "variable index {i} out of range for {nvars} variables");
        let mut e = vec![0; nvars];
        e[i] = 1;
        let one = K::one(&ctx);
        Polynomial { nvars, ctx, terms: vec![(Monomial::new(e), one)] }
    }

    pub fn monomial(coeff: K, mono: Monomial) -> Self {
        let nvars = mono.nvars();
        let ctx = coeff.ctx();
        if coeff.is_zero() {
            return Self::zero(nvars, ctx);
        }
        Polynomial { nvars, ctx, terms: vec![(mono, coeff)] }
    }

    /// Linear form `sum_i c_i x_i`.
    pub fn linear_form(coeffs: &[K], ctx: K::Ctx) -> Self {
        let n = coeffs.len();
        Self::from_terms(
            n,
            ctx,
            coeffs.iter().enumerate().map(|(i, c)| {
                let mut e = vec![0; n];
                e[i] = 1;
                (Monomial::new(e), c.clone())
            }),
        )
    }

    /// Canonicalize an arbitrary list of terms: combine duplicates, drop zeros, sort.
    pub fn from_terms<I>(nvars: usize, ctx: K::Ctx, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, K)>,
    {
        let mut acc: HashMap<Monomial, K> = HashMap::new();
        for (m, c) in terms {
            debug_assert_eq!(m.nvars(), nvars);
            accumulate(&mut acc, m, c);
        }
        Self::from_map(nvars, ctx, acc)
    }

    fn from_map(nvars: usize, ctx: K::Ctx, acc: HashMap<Monomial, K>) -> Self {
        let mut terms: Vec<(Monomial, K)> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        Polynomial { nvars, ctx, terms }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn ctx(&self) -> &K::Ctx {
        &self.ctx
    }

    pub fn terms(&self) -> &[(Monomial, K)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].0.degree() == 0)
    }

    /// Total degree; `None` for the zero polynomial, which orders below every degree.
    pub fn degree(&self) -> Option<u32> {
        self.terms.first().map(|(m, _)| m.degree())
    }

    pub fn min_degree(&self) -> Option<u32> {
        self.terms.last().map(|(m, _)| m.degree())
    }

    /// The common degree of all terms when the polynomial is a nonzero form.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        match (self.degree(), self.min_degree()) {
            (Some(a), Some(b)) if a == b => Some(a),
            _ => None,
        }
    }

    pub fn is_homogeneous(&self) -> bool {
        self.is_zero() || self.homogeneous_degree().is_some()
    }

    pub fn leading(&self) -> Option<&(Monomial, K)> {
        self.terms.first()
    }

    pub fn leading_coefficient(&self) -> Option<&K> {
        self.terms.first().map(|(_, c)| c)
    }

    pub fn degree_in(&self, v: usize) -> u32 {
        self.terms.iter().map(|(m, _)| m.0[v]).max().unwrap_or(0)
    }

    /// Indices of variables that occur with positive exponent.
    pub fn support_vars(&self) -> Vec<usize> {
        (0..self.nvars).filter(|&v| self.terms.iter().any(|(m, _)| m.0[v] > 0)).collect()
    }

    /// Coefficient of `x_v^k` as a polynomial free of `x_v`.
    pub fn coefficient_in(&self, v: usize, k: u32) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.0[v] == k)
            .map(|(m, c)| {
                let mut e = m.0.to_vec();
                e[v] = 0;
                (Monomial::new(e), c.clone())
            });
        Self::from_terms(self.nvars, self.ctx.clone(), terms)
    }

    pub fn coefficient_of(&self, mono: &Monomial) -> K {
        match self.terms.binary_search_by(|(m, _)| mono.cmp(m)) {
            Ok(i) => self.terms[i].1.clone(),
            Err(_) => K::zero(&self.ctx),
        }
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::VariableCount(self.nvars, other.nvars));
        }
        if self.ctx != other.ctx {
            return Err(Error::FieldMismatch);
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(self.merge(other, false))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(self.merge(other, true))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(self.mul_unchecked(other))
    }

    fn merge(&self, other: &Self, negate: bool) -> Self {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &other.terms);
        let conv = |c: &K| if negate { c.neg() } else { c.clone() };
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push((b[j].0.clone(), conv(&b[j].1)));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate { a[i].1.sub(&b[j].1) } else { a[i].1.add(&b[j].1) };
                    if !c.is_zero() {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a[i..].iter().cloned());
        out.extend(b[j..].iter().map(|(m, c)| (m.clone(), conv(c))));
        Polynomial { nvars: self.nvars, ctx: self.ctx.clone(), terms: out }
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.nvars, self.ctx.clone());
        }
        if other.terms.len() == 1 {
            return self.mul_term(&other.terms[0].0, &other.terms[0].1);
        }
        if self.terms.len() == 1 {
            return other.mul_term(&self.terms[0].0, &self.terms[0].1);
        }
        let mut acc: HashMap<Monomial, K> =
            HashMap::with_capacity(self.terms.len() * other.terms.len() / 2 + 1);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                accumulate(&mut acc, ma.mul(mb), ca.mul(cb));
            }
        }
        Self::from_map(self.nvars, self.ctx.clone(), acc)
    }

    /// Multiply by a single term; order is preserved so no re-sort is needed.
    pub fn mul_term(&self, mono: &Monomial, coeff: &K) -> Self {
        if coeff.is_zero() {
            return Self::zero(self.nvars, self.ctx.clone());
        }
        let terms = self.terms.iter().map(|(m, c)| (m.mul(mono), c.mul(coeff))).collect();
        Polynomial { nvars: self.nvars, ctx: self.ctx.clone(), terms }
    }

    pub fn scale(&self, c: &K) -> Self {
        self.mul_term(&Monomial::one(self.nvars), c)
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut result = Self::one(self.nvars, self.ctx.clone());
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul_unchecked(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_unchecked(&base);
            }
        }
        result
    }

    /// Formal partial derivative with respect to `x_i`.
    pub fn partial(&self, i: usize) -> Result<Self> {
        if i >= self.nvars {
            return Err(Error::IndexOutOfRange { index: i, nvars: self.nvars });
        }
        let terms = self.terms.iter().filter(|(m, _)| m.0[i] > 0).map(|(m, c)| {
            let mut e = m.0.to_vec();
            let k = e[i];
            e[i] -= 1;
            (Monomial::new(e), c.mul_u64(k as u64))
        });
        // differentiation can reorder terms, so canonicalize
        Ok(Self::from_terms(self.nvars, self.ctx.clone(), terms))
    }

    pub fn gradient(&self) -> Vec<Self> {
        (0..self.nvars).map(|i| self.partial(i).expect("index in range")).collect()
    }

    /// Directional derivative `sum_i v_i * df/dx_i`.
    pub fn directional(&self, v: &[K]) -> Result<Self> {
        if v.len() != self.nvars {
            return Err(Error::Length { expected: self.nvars, got: v.len() });
        }
        let mut acc = Self::zero(self.nvars, self.ctx.clone());
        for (i, vi) in v.iter().enumerate() {
            if !vi.is_zero() {
                acc = acc + self.partial(i)?.scale(vi);
            }
        }
        Ok(acc)
    }

    pub fn evaluate(&self, point: &[K]) -> Result<K> {
        if point.len() != self.nvars {
            return Err(Error::Length { expected: self.nvars, got: point.len() });
        }
        if point.iter().any(|p| p.ctx() != self.ctx) {
            return Err(Error::FieldMismatch);
        }
        let mut powers: Vec<Vec<K>> = Vec::with_capacity(self.nvars);
        for (v, p) in point.iter().enumerate() {
            let maxe = self.degree_in(v) as usize;
            let mut pw = Vec::with_capacity(maxe + 1);
            pw.push(K::one(&self.ctx));
            for k in 1..=maxe {
                let next = pw[k - 1].mul(p);
                pw.push(next);
            }
            powers.push(pw);
        }
        let mut acc = K::zero(&self.ctx);
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t = t.mul(&powers[v][e as usize]);
                }
            }
            acc = acc.add(&t);
        }
        Ok(acc)
    }

    /// Substitute `x_i -> args[i]` and expand. The result lives in the
    /// variables of the arguments.
    pub fn compose(&self, args: &[Self]) -> Result<Self> {
        if args.len() != self.nvars {
            return Err(Error::Length { expected: self.nvars, got: args.len() });
        }
        let Some(first) = args.first() else {
            return Err(Error::InvalidArgument("compose needs at least one argument".into()));
        };
        let target = first.nvars;
        for a in args {
            if a.nvars != target {
                return Err(Error::VariableCount(target, a.nvars));
            }
            if a.ctx != self.ctx {
                return Err(Error::FieldMismatch);
            }
        }
        let mut powers: Vec<Vec<Self>> = Vec::with_capacity(self.nvars);
        for (v, a) in args.iter().enumerate() {
            let maxe = self.degree_in(v) as usize;
            let mut pw = Vec::with_capacity(maxe + 1);
            pw.push(Self::one(target, self.ctx.clone()));
            for k in 1..=maxe {
                let next = pw[k - 1].mul_unchecked(a);
                pw.push(next);
            }
            powers.push(pw);
        }
        let mut acc: HashMap<Monomial, K> = HashMap::new();
        for (m, c) in &self.terms {
            let mut prod = Self::constant(c.clone(), target);
            for (v, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    prod = prod.mul_unchecked(&powers[v][e as usize]);
                    if prod.is_zero() {
                        break;
                    }
                }
            }
            for (pm, pc) in prod.terms {
                accumulate(&mut acc, pm, pc);
            }
        }
        Ok(Self::from_map(target, self.ctx.clone(), acc))
    }

    /// Re-embed into `nvars` variables by sending `x_i -> x_{map[i]}`.
    pub fn rename_vars(&self, map: &[usize], nvars: usize) -> Result<Self> {
        if map.len() != self.nvars {
            return Err(Error::Length { expected: self.nvars, got: map.len() });
        }
        if let Some(&bad) = map.iter().find(|&&t| t >= nvars) {
            return Err(Error::IndexOutOfRange { index: bad, nvars });
        }
        let terms = self.terms.iter().map(|(m, c)| {
            let mut e = vec![0; nvars];
            for (i, &x) in m.0.iter().enumerate() {
                e[map[i]] += x;
            }
            (Monomial::new(e), c.clone())
        });
        Ok(Self::from_terms(nvars, self.ctx.clone(), terms))
    }

    /// Embed into a larger ring, keeping variable indices.
    pub fn extend_vars(&self, nvars: usize) -> Result<Self> {
        let map: Vec<usize> = (0..self.nvars).collect();
        self.rename_vars(&map, nvars)
    }

    /// Scale so the leading coefficient (graded-lex) is one.
    pub fn monic(&self) -> Self {
        match self.leading_coefficient() {
            Some(lc) if !lc.is_one() => self.scale(&lc.inv().expect("nonzero leading coefficient")),
            _ => self.clone(),
        }
    }

    /// Exact division. Returns `None` if `divisor` does not divide `self`.
    pub fn div_exact(&self, divisor: &Self) -> Option<Self> {
        if divisor.is_zero() || self.check_compatible(divisor).is_err() {
            return None;
        }
        if self.is_zero() {
            return Some(self.clone());
        }
        let (lm, lc) = divisor.terms[0].clone();
        let lc_inv = lc.inv()?;
        if divisor.terms.len() == 1 {
            let terms = self
                .terms
                .iter()
                .map(|(m, c)| m.div(&lm).map(|q| (q, c.mul(&lc_inv))))
                .collect::<Option<Vec<_>>>()?;
            return Some(Polynomial { nvars: self.nvars, ctx: self.ctx.clone(), terms });
        }
        let mut rem: BTreeMap<Monomial, K> = self.terms.iter().cloned().collect();
        let mut quotient = Vec::new();
        while let Some((m, c)) = rem.pop_last() {
            let qm = m.div(&lm)?;
            let qc = c.mul(&lc_inv);
            for (dm, dc) in &divisor.terms[1..] {
                let key = dm.mul(&qm);
                let delta = dc.mul(&qc);
                match rem.get_mut(&key) {
                    Some(v) => {
                        *v = v.sub(&delta);
                        if v.is_zero() {
                            rem.remove(&key);
                        }
                    }
                    None => {
                        rem.insert(key, delta.neg());
                    }
                }
            }
            quotient.push((qm, qc));
        }
        Some(Polynomial { nvars: self.nvars, ctx: self.ctx.clone(), terms: quotient })
    }

    pub fn map_coefficients<L: Field, F>(&self, ctx: L::Ctx, f: F) -> Option<Polynomial<L>>
    where
        F: Fn(&K) -> Option<L>,
    {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| f(c).map(|c| (m.clone(), c)))
            .collect::<Option<Vec<_>>>()?;
        Some(Polynomial::from_terms(self.nvars, ctx, terms))
    }

    /// Printable form using `prefix` for variable names.
    pub fn display_with<'a>(&'a self, prefix: &'a str) -> Display<'a, K> {
        Display { poly: self, prefix }
    }
}

impl QPoly {
    /// Reduce the coefficients modulo a prime; `None` if a denominator vanishes.
    pub fn reduce_mod(&self, field: PrimeField) -> Option<Polynomial<Fp>> {
        self.map_coefficients(field, |c| Fp::from_rational(c, &field))
    }

    /// Rational content and primitive part with integer coprime coefficients.
    /// The sign of the leading coefficient is kept.
    pub fn primitive(&self) -> (Rational, QPoly) {
        match crate::field::rational_content(self.terms.iter().map(|(_, c)| c)) {
            Some(c) => {
                let pp = self.scale(&c.recip());
                (c, pp)
            }
            None => (<Rational as One>::one(), self.clone()),
        }
    }
}

fn accumulate<K: Field>(acc: &mut HashMap<Monomial, K>, m: Monomial, c: K) {
    match acc.get_mut(&m) {
        Some(v) => *v = v.add(&c),
        None => {
            acc.insert(m, c);
        }
    }
}

impl<K: Field> Add for Polynomial<K> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        self.checked_add(&rhs).expect("incompatible polynomials")
    }
}

impl<K: Field> Sub for Polynomial<K> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self.checked_sub(&rhs).expect("incompatible polynomials")
    }
}

impl<K: Field> Mul for Polynomial<K> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        self.checked_mul(&rhs).expect("incompatible polynomials")
    }
}

impl<K: Field> Add for &Polynomial<K> {
    type Output = Polynomial<K>;
    fn add(self, rhs: Self) -> Polynomial<K> {
        self.checked_add(rhs).expect("incompatible polynomials")
    }
}

impl<K: Field> Sub for &Polynomial<K> {
    type Output = Polynomial<K>;
    fn sub(self, rhs: Self) -> Polynomial<K> {
        self.checked_sub(rhs).expect("incompatible polynomials")
    }
}

impl<K: Field> Mul for &Polynomial<K> {
    type Output = Polynomial<K>;
    fn mul(self, rhs: Self) -> Polynomial<K> {
        self.checked_mul(rhs).expect("incompatible polynomials")
    }
}

impl<K: Field> Neg for Polynomial<K> {
    type Output = Self;
    fn neg(self) -> Self {
        let terms = self.terms.into_iter().map(|(m, c)| (m, c.neg())).collect();
        Polynomial { nvars: self.nvars, ctx: self.ctx, terms }
    }
}

pub struct Display<'a, K: Field> {
    poly: &'a Polynomial<K>,
    prefix: &'a str,
}

impl<K: Field> fmt::Display for Display<'_, K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return f.write_str("0");
        }
        for (idx, (m, c)) in self.poly.terms.iter().enumerate() {
            let (negative, magnitude) = c.signed_parts();
            match (idx, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let constant = m.degree() == 0;
            let mut first = true;
            if constant || magnitude != "1" {
                f.write_str(&magnitude)?;
                first = false;
            }
            for (v, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if !first {
                    f.write_str("*")?;
                }
                first = false;
                write!(f, "{}{}", self.prefix, v)?;
                if e > 1 {
                    write!(f, "^{e}")?;
                }
            }
        }
        Ok(())
    }
}

impl<K: Field> fmt::Display for Polynomial<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.display_with("x"), f)
    }
}

impl<K: Field> fmt::Debug for Polynomial<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial[{}]({})", self.nvars, self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::rational;

    fn p(s: &str) -> QPoly {
        parse(s, "x").unwrap()
    }

    fn pn(s: &str, n: usize) -> QPoly {
        parse(s, "x").unwrap().extend_vars(n).unwrap()
    }

    #[test]
    fn graded_lex_order() {
        let a = Monomial::new(vec![1, 0, 1]);
        let b = Monomial::new(vec![0, 2, 0]);
        let c = Monomial::new(vec![0, 0, 3]);
        assert!(a > b);
        assert!(c > a);
        let all = Monomial::all_of_degree(3, 2);
        assert_eq!(all.len(), 6);
        assert!(all.windows(2).all(|w| w[0] > w[1]));
    }

    #[test]
    fn difference_of_squares() {
        assert_eq!(&p("x0 + x1") * &p("x0 - x1"), p("x0^2 - x1^2"));
    }

    #[test]
    fn additive_identity_and_binomial() {
        let q = p("3*x0*x1 - 1/2*x1^2");
        assert_eq!(&q + &QPoly::zero(2, ()), q);
        assert_eq!(p("x0 + x1").pow(2), p("x0^2 + 2*x0*x1 + x1^2"));
        assert_eq!(p("x0 + x1").pow(0), QPoly::one(2, ()));
    }

    #[test]
    fn arithmetic_rejects_mismatched_rings() {
        let a = p("x0");
        let b = p("x1");
        assert_eq!(a.checked_add(&b), Err(Error::VariableCount(1, 2)));
    }

    #[test]
    fn partials() {
        assert_eq!(pn("x0*x3^2", 5).partial(3).unwrap(), pn("2*x0*x3", 5));
        let cubic = p("x0*x3^2 + 2*x1*x3*x4 + x2*x4^2");
        assert_eq!(cubic.partial(0).unwrap(), pn("x3^2", 5));
        assert!(pn("7", 3).partial(2).unwrap().is_zero());
        assert_eq!(cubic.partial(5), Err(Error::IndexOutOfRange { index: 5, nvars: 5 }));
    }

    #[test]
    fn evaluation() {
        let f = pn("x0*x3^2", 5);
        let pt: Vec<Rational> = [1, 0, 0, 2, 0].iter().map(|&v| rational(v)).collect();
        assert_eq!(f.evaluate(&pt).unwrap(), rational(4));
        assert!(matches!(f.evaluate(&pt[..3]), Err(Error::Length { .. })));
    }

    #[test]
    fn prime_field_evaluation_rejects_other_modulus() {
        let f = pn("x0 + x1", 2).reduce_mod(PrimeField::default()).unwrap();
        let other = PrimeField::new(4611686018427387847).unwrap();
        let pt = vec![other.element(1), other.element(2)];
        assert_eq!(f.evaluate(&pt), Err(Error::FieldMismatch));
    }

    #[test]
    fn polar_relation_composes_to_zero() {
        let cubic = p("x0*x3^2 + 2*x1*x3*x4 + x2*x4^2");
        let grads = cubic.gradient();
        let g = parse("y1^2 - 4*y0*y2", "y").unwrap().extend_vars(5).unwrap();
        assert!(g.compose(&grads).unwrap().is_zero());
        let y0 = QPoly::var(0, 5, ());
        assert_eq!(y0.compose(&grads).unwrap(), grads[0]);
    }

    #[test]
    fn exact_division() {
        let a = p("x0^2 - x1^2");
        assert_eq!(a.div_exact(&p("x0 - x1")).unwrap(), pn("x0 + x1", 2));
        assert!(a.div_exact(&p("x0 + 2*x1")).is_none());
        assert_eq!(pn("6*x0^2*x1", 2).div_exact(&pn("3*x0", 2)).unwrap(), pn("2*x0*x1", 2));
    }

    #[test]
    fn printing() {
        assert_eq!(p("x2*x4^2 + x0*x3^2 + 2*x1*x3*x4").to_string(), "x0*x3^2 + 2*x1*x3*x4 + x2*x4^2");
        assert_eq!(p("-x0 + 1/2").to_string(), "-x0 + 1/2");
        assert_eq!(p("-3").to_string(), "-3");
        assert_eq!(QPoly::zero(2, ()).to_string(), "0");
        assert_eq!(parse("y1^2 - 4*y0*y2", "y").unwrap().display_with("y").to_string(), "-4*y0*y2 + y1^2");
    }

    #[test]
    fn degree_sentinel() {
        let z = QPoly::zero(3, ());
        assert_eq!(z.degree(), None);
        assert!(z.degree() < Some(0));
        assert!(z.is_homogeneous());
        assert_eq!(p("x0^3 + x1^3 + x2^3").homogeneous_degree(), Some(3));
        assert_eq!(p("x0^2 + x1").homogeneous_degree(), None);
    }
}

//! Multivariate gcd by recursive primitive polynomial remainder sequences.
//!
//! The main variable is the highest-index variable occurring in either
//! argument; contents with respect to it are polynomials in the remaining
//! variables and are handled recursively.

use rand::Rng;

use super::{Monomial, Polynomial, QPoly};
use crate::error::{Error, Result};
use crate::field::{Field, PrimeField, Rational};
use crate::rng::Seed;

/// Greatest common divisor, normalized to leading coefficient one.
pub fn gcd<K: Field>(a: &Polynomial<K>, b: &Polynomial<K>) -> Result<Polynomial<K>> {
    a.check_compatible(b)?;
    match (a.is_zero(), b.is_zero()) {
        (true, true) => Err(Error::GcdOfZeros),
        (true, false) => Ok(b.monic()),
        (false, true) => Ok(a.monic()),
        (false, false) => Ok(gcd_nonzero(a, b).monic()),
    }
}

/// Fold [`gcd`] over a list, skipping zeros. Errors if every entry is zero.
pub fn gcd_all<K: Field>(polys: &[Polynomial<K>]) -> Result<Polynomial<K>> {
    let mut acc: Option<Polynomial<K>> = None;
    for p in polys {
        if p.is_zero() {
            continue;
        }
        acc = Some(match acc {
            None => p.monic(),
            Some(g) => {
                if g.is_constant() {
                    return Ok(g);
                }
                gcd(&g, p)?
            }
        });
    }
    acc.ok_or(Error::GcdOfZeros)
}

fn main_var<K: Field>(a: &Polynomial<K>, b: &Polynomial<K>) -> Option<usize> {
    (0..a.nvars()).rev().find(|&v| a.degree_in(v) > 0 || b.degree_in(v) > 0)
}

fn gcd_nonzero<K: Field>(a: &Polynomial<K>, b: &Polynomial<K>) -> Polynomial<K> {
    if a.is_constant() || b.is_constant() {
        return Polynomial::one(a.nvars(), a.ctx().clone());
    }
    if a.terms.len() == 1 && b.terms.len() == 1 {
        let e: Vec<u32> =
            a.terms[0].0.exponents().iter().zip(b.terms[0].0.exponents()).map(|(x, y)| *x.min(y)).collect();
        return Polynomial::monomial(K::one(a.ctx()), Monomial::new(e));
    }
    let v = main_var(a, b).expect("non-constant input");
    match (a.degree_in(v), b.degree_in(v)) {
        (0, _) => gcd_nonzero(a, &content(b, v)),
        (_, 0) => gcd_nonzero(&content(a, v), b),
        _ => {
            let ca = content(a, v);
            let cb = content(b, v);
            let c = gcd_nonzero(&ca, &cb);
            let pa = a.div_exact(&ca).expect("content divides");
            let pb = b.div_exact(&cb).expect("content divides");
            let g = primitive_prs(pa, pb, v);
            (&c * &g).monic()
        }
    }
}

/// Gcd of the coefficients of `p` viewed as a polynomial in `x_v`.
fn content<K: Field>(p: &Polynomial<K>, v: usize) -> Polynomial<K> {
    let mut coeffs: Vec<Polynomial<K>> =
        (0..=p.degree_in(v)).map(|k| p.coefficient_in(v, k)).filter(|c| !c.is_zero()).collect();
    coeffs.sort_by_key(|c| c.len());
    let mut g = coeffs[0].monic();
    for c in &coeffs[1..] {
        if g.is_constant() {
            break;
        }
        g = gcd_nonzero(&g, c).monic();
    }
    g
}

fn primitive_part<K: Field>(p: &Polynomial<K>, v: usize) -> Polynomial<K> {
    let c = content(p, v);
    p.div_exact(&c).expect("content divides").monic()
}

/// Pseudo-remainder of `a` by `b` with respect to `x_v`.
fn prem<K: Field>(a: &Polynomial<K>, b: &Polynomial<K>, v: usize) -> Polynomial<K> {
    let db = b.degree_in(v);
    let lcb = b.coefficient_in(v, db);
    let mut r = a.clone();
    while !r.is_zero() && r.degree_in(v) >= db {
        let dr = r.degree_in(v);
        let lcr = r.coefficient_in(v, dr);
        let mut e = vec![0; r.nvars()];
        e[v] = dr - db;
        let shift = lcr.mul_term(&Monomial::new(e), &K::one(r.ctx()));
        r = &(&r * &lcb) - &(&shift * b);
    }
    r
}

fn primitive_prs<K: Field>(a: Polynomial<K>, b: Polynomial<K>, v: usize) -> Polynomial<K> {
    let (mut a, mut b) = if a.degree_in(v) >= b.degree_in(v) { (a, b) } else { (b, a) };
    loop {
        let r = prem(&a, &b, v);
        if r.is_zero() {
            return b;
        }
        if r.degree_in(v) == 0 {
            return Polynomial::one(a.nvars(), a.ctx().clone());
        }
        a = b;
        b = primitive_part(&r, v);
    }
}

/// Squarefreeness proxy: `gcd(f, D_v f)` is constant for a seeded random
/// direction `v`. A non-constant answer is confirmed with a second direction.
pub fn is_reduced(f: &QPoly, seed: Seed) -> Result<bool> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if f.degree() == Some(0) {
        return Ok(true);
    }
    let dir = |s: Seed| -> Vec<Rational> {
        let mut rng = s.rng();
        (0..f.nvars()).map(|_| Rational::from_integer(rng.gen_range(-1000i64..=1000).into())).collect()
    };
    let g1 = constant_gcd_or(f, &f.directional(&dir(seed.derive("reduced").index(0)))?)?;
    let Some(g1) = g1 else { return Ok(true) };
    let g2 = constant_gcd_or(&g1, &f.directional(&dir(seed.derive("reduced").index(1)))?)?;
    Ok(g2.is_none())
}

/// `None` when `gcd(a, b)` is constant, otherwise the gcd. A constant gcd of
/// the reductions modulo a large prime already certifies a constant gcd over
/// the rationals for forms, so the exact computation only runs when needed.
fn constant_gcd_or(a: &QPoly, b: &QPoly) -> Result<Option<QPoly>> {
    if b.is_zero() {
        return Ok(if a.is_constant() { None } else { Some(a.monic()) });
    }
    if a.is_homogeneous() && b.is_homogeneous() {
        let field = PrimeField::default();
        let (_, pa) = a.primitive();
        let (_, pb) = b.primitive();
        if let (Some(ra), Some(rb)) = (pa.reduce_mod(field), pb.reduce_mod(field)) {
            if ra.degree() == a.degree() && rb.degree() == b.degree() && gcd(&ra, &rb)?.is_constant() {
                return Ok(None);
            }
        }
    }
    let g = gcd(a, b)?;
    Ok(if g.is_constant() { None } else { Some(g) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse, parse_in};

    fn p5(s: &str) -> QPoly {
        parse_in(s, "x", 5).unwrap()
    }

    #[test]
    fn monomial_gcd() {
        assert_eq!(gcd(&p5("x3^2*x4"), &p5("x3*x4^2")).unwrap(), p5("x3*x4"));
    }

    #[test]
    fn coprime_list() {
        let g: Vec<QPoly> = ["-4*x4^2", "4*x3*x4", "-4*x3^2", "0", "0"].iter().map(|s| p5(s)).collect();
        let r = gcd_all(&g).unwrap();
        assert!(r.is_constant());
        // oracle: trial division by each linear factor of the first entry
        assert!(g[2].div_exact(&p5("x4")).is_none());
    }

    #[test]
    fn idempotent_and_normalized() {
        let f = p5("2*x0*x3^2 + 4*x1*x3*x4 + 2*x2*x4^2");
        let g = gcd(&f, &f).unwrap();
        assert_eq!(g, f.monic());
        assert!(g.leading_coefficient().unwrap().is_one());
    }

    #[test]
    fn shared_nonmonomial_factor() {
        let a = parse("(x0 + x1)^2*(x0 - 2*x2)", "x").unwrap();
        let b = parse("(x0 + x1)*(x1 + x2)*(x0 - 2*x2)", "x").unwrap();
        let g = gcd(&a, &b).unwrap();
        assert_eq!(g, parse("(x0 + x1)*(x0 - 2*x2)", "x").unwrap().monic());
        assert!(a.div_exact(&g).is_some() && b.div_exact(&g).is_some());
    }

    #[test]
    fn zero_arguments() {
        let z = QPoly::zero(2, ());
        assert_eq!(gcd(&z, &z), Err(Error::GcdOfZeros));
        let x = parse("3*x1", "x").unwrap();
        assert_eq!(gcd(&z, &x).unwrap(), parse("x1", "x").unwrap());
    }

    #[test]
    fn reducedness() {
        let s = Seed(7);
        assert!(!is_reduced(&parse("x0^2*x1", "x").unwrap(), s).unwrap());
        assert!(is_reduced(&p5("x0*x3^2 + 2*x1*x3*x4 + x2*x4^2"), s).unwrap());
        assert!(is_reduced(&parse("x0*x1*x2", "x").unwrap(), s).unwrap());
        assert!(!is_reduced(&parse("(x0^2 + x1*x2)^2*x1", "x").unwrap(), s).unwrap());
        assert_eq!(is_reduced(&QPoly::zero(2, ()), s), Err(Error::ZeroPolynomial));
    }
}

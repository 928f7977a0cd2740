//! Hessian matrices, symbolic determinants and randomized vanishing tests.

use std::collections::HashMap;

use num_bigint::BigInt;
use rand::Rng;

use crate::error::{Error, Result};
use crate::field::{Field, Fp, PrimeField, Rational};
use crate::linalg::ScalarMatrix;
use crate::par::Exec;
use crate::poly::{PolyMatrix, Polynomial, QPoly};
use crate::rng::Seed;

/// Largest matrix accepted by [`symbolic_determinant`].
pub const SIZE_CAP: usize = 8;

pub const DEFAULT_TRIALS: u32 = 5;
pub const DEFAULT_RANK_SAMPLES: u32 = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum DetAlgorithm {
    /// Expansion along rows with memoized minors over column subsets.
    #[default]
    MinorExpansion,
    /// Bareiss elimination with exact polynomial division.
    FractionFree,
}

/// Matrix of second partials.
pub fn hessian_matrix<K: Field>(f: &Polynomial<K>) -> Result<PolyMatrix<K>> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let grad = f.gradient();
    let n = f.nvars();
    let mut rows: Vec<Vec<Polynomial<K>>> = vec![Vec::with_capacity(n); n];
    for i in 0..n {
        for j in 0..n {
            let e = if j < i { rows[j][i].clone() } else { grad[i].partial(j)? };
            rows[i].push(e);
        }
    }
    let h = PolyMatrix::new(rows)?;
    debug_assert!(h.is_symmetric());
    Ok(h)
}

pub fn symbolic_determinant<K: Field>(m: &PolyMatrix<K>, algorithm: DetAlgorithm) -> Result<Polynomial<K>> {
    symbolic_determinant_with(m, algorithm, Exec::default())
}

pub fn symbolic_determinant_with<K: Field>(
    m: &PolyMatrix<K>,
    algorithm: DetAlgorithm,
    exec: Exec,
) -> Result<Polynomial<K>> {
    if !m.is_square() {
        return Err(Error::Dimension(format!("determinant of a {}x{} matrix", m.rows(), m.cols())));
    }
    let n = m.rows();
    if n == 0 {
        return Err(Error::Dimension("determinant of an empty matrix".into()));
    }
    if n > SIZE_CAP {
        return Err(Error::SizeCap { size: n, cap: SIZE_CAP });
    }
    match algorithm {
        DetAlgorithm::MinorExpansion => Ok(minor_expansion(m, exec)),
        DetAlgorithm::FractionFree => fraction_free(m),
    }
}

/// Level k holds the determinants of the submatrices on rows `0..k` and every
/// k-subset of columns, each obtained by expanding along row `k - 1`. Levels
/// depend only on their predecessor, so each level is computed in parallel.
fn minor_expansion<K: Field>(m: &PolyMatrix<K>, exec: Exec) -> Polynomial<K> {
    let n = m.rows();
    let nvars = m.get(0, 0).nvars();
    let ctx = m.get(0, 0).ctx().clone();
    let mut prev: HashMap<u32, Polynomial<K>> = HashMap::new();
    prev.insert(0, Polynomial::one(nvars, ctx.clone()));
    for k in 1..=n {
        let subsets: Vec<u32> = (0u32..(1 << n)).filter(|s| s.count_ones() as usize == k).collect();
        let row = k - 1;
        let minors = exec.map(&subsets, |&s| {
            let mut acc = Polynomial::zero(nvars, ctx.clone());
            let mut pos = 0;
            for j in 0..n {
                if s & (1 << j) == 0 {
                    continue;
                }
                let entry = m.get(row, j);
                let sub = &prev[&(s & !(1 << j))];
                if !entry.is_zero() && !sub.is_zero() {
                    let t = entry * sub;
                    acc = if (row + pos) % 2 == 0 { &acc + &t } else { &acc - &t };
                }
                pos += 1;
            }
            acc
        });
        prev = subsets.into_iter().zip(minors).collect();
    }
    prev.remove(&((1u32 << n) - 1)).expect("full minor")
}

fn fraction_free<K: Field>(m: &PolyMatrix<K>) -> Result<Polynomial<K>> {
    let n = m.rows();
    let mut a = m.to_rows();
    let nvars = a[0][0].nvars();
    let ctx = a[0][0].ctx().clone();
    let mut prev = Polynomial::one(nvars, ctx.clone());
    let mut negate = false;
    for k in 0..n {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return Ok(Polynomial::zero(nvars, ctx));
            };
            a.swap(k, p);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&a[k][k] * &a[i][j]) - &(&a[i][k] * &a[k][j]);
                a[i][j] = num.div_exact(&prev).ok_or(Error::InexactDivision)?;
            }
            a[i][k] = Polynomial::zero(nvars, ctx.clone());
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    Ok(if negate { -det } else { det })
}

/// Where probabilistic evaluation points are drawn from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SampleDomain {
    /// Uniform elements of a large prime field.
    Prime(PrimeField),
    /// Uniform integers in `[-bound, bound]`, evaluated exactly over the rationals.
    Integers { bound: u64 },
}

impl Default for SampleDomain {
    fn default() -> Self {
        SampleDomain::Prime(PrimeField::default())
    }
}

impl SampleDomain {
    pub fn size(&self) -> BigInt {
        match self {
            SampleDomain::Prime(p) => BigInt::from(p.modulus()),
            SampleDomain::Integers { bound } => BigInt::from(*bound) * 2 + 1,
        }
    }

    pub fn modulus(&self) -> Option<u64> {
        match self {
            SampleDomain::Prime(p) => Some(p.modulus()),
            SampleDomain::Integers { .. } => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HessianMode {
    Symbolic,
    Probabilistic { trials: u32, domain: SampleDomain },
}

impl HessianMode {
    pub fn probabilistic(trials: u32) -> Self {
        HessianMode::Probabilistic { trials, domain: SampleDomain::default() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VerdictMode {
    Symbolic,
    Probabilistic,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HessianVerdict {
    pub mode: VerdictMode,
    pub vanishes: bool,
    pub trials: u32,
    pub modulus: Option<u64>,
    /// Upper bound on the probability that `vanishes` is a false positive.
    pub error_bound: Rational,
    pub degree_bound: u32,
    /// The determinant, when computed symbolically.
    pub determinant: Option<QPoly>,
}

fn form_degree(f: &QPoly, min: u32) -> Result<u32> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let d = f.homogeneous_degree().ok_or(Error::NotHomogeneous)?;
    if d < min {
        return Err(Error::DegreeTooLow(d, min));
    }
    Ok(d)
}

/// `(n + 1) * max(d - 2, 0)`, the trivial bound on the degree of the Hessian polynomial.
pub fn hessian_degree_bound(f: &QPoly) -> u32 {
    let d = f.degree().unwrap_or(0);
    f.nvars() as u32 * d.saturating_sub(2)
}

pub fn hessian_vanishes(f: &QPoly, mode: HessianMode, seed: Seed) -> Result<HessianVerdict> {
    hessian_vanishes_with(f, mode, seed, Exec::default())
}

pub fn hessian_vanishes_with(f: &QPoly, mode: HessianMode, seed: Seed, exec: Exec) -> Result<HessianVerdict> {
    form_degree(f, 1)?;
    let degree_bound = hessian_degree_bound(f);
    let h = hessian_matrix(f)?;
    match mode {
        HessianMode::Symbolic => {
            let det = symbolic_determinant_with(&h, DetAlgorithm::MinorExpansion, exec)?;
            Ok(HessianVerdict {
                mode: VerdictMode::Symbolic,
                vanishes: det.is_zero(),
                trials: 0,
                modulus: None,
                error_bound: Rational::from_integer(0.into()),
                degree_bound,
                determinant: Some(det),
            })
        }
        HessianMode::Probabilistic { trials, domain } => {
            if trials < 1 {
                return Err(Error::InvalidArgument("probabilistic mode needs at least one trial".into()));
            }
            let n = f.nvars();
            let stream = seed.derive("hessian-trial");
            let reduced = match domain {
                SampleDomain::Prime(field) => Some(reduce_matrix(&h, field)?),
                SampleDomain::Integers { .. } => None,
            };
            let zero_at = |t: usize| -> Result<bool> {
                let mut rng = stream.index(t as u64).rng();
                match domain {
                    SampleDomain::Prime(field) => {
                        let hp = reduced.as_ref().expect("reduced above");
                        let pt: Vec<Fp> = (0..n).map(|_| field.element(rng.gen_range(0..field.modulus()))).collect();
                        Ok(hp.eval(&pt)?.determinant()?.is_zero())
                    }
                    SampleDomain::Integers { bound } => {
                        let b = bound as i64;
                        let pt: Vec<Rational> =
                            (0..n).map(|_| Rational::from_integer(rng.gen_range(-b..=b).into())).collect();
                        Ok(h.eval(&pt)?.determinant()?.is_zero())
                    }
                }
            };
            let outcomes = exec.map_range(trials as usize, zero_at);
            let mut vanishes = true;
            for o in outcomes {
                vanishes &= o?;
            }
            let ratio = Rational::new(BigInt::from(degree_bound), domain.size());
            let error_bound = if vanishes { num_traits::pow(ratio, trials as usize) } else { Rational::from_integer(0.into()) };
            Ok(HessianVerdict {
                mode: VerdictMode::Probabilistic,
                vanishes,
                trials,
                modulus: domain.modulus(),
                error_bound,
                degree_bound,
                determinant: None,
            })
        }
    }
}

fn reduce_matrix(h: &PolyMatrix<Rational>, field: PrimeField) -> Result<PolyMatrix<Fp>> {
    let rows = h
        .to_rows()
        .into_iter()
        .map(|r| {
            r.into_iter()
                .map(|e| {
                    e.reduce_mod(field).ok_or_else(|| {
                        Error::InvalidArgument(format!("a coefficient denominator vanishes modulo {}", field.modulus()))
                    })
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    PolyMatrix::new(rows)
}

/// Maximum rank of the Hessian over seeded random prime-field points.
pub fn generic_hessian_rank(f: &QPoly, samples: u32, seed: Seed) -> Result<usize> {
    generic_hessian_rank_with(f, samples, seed, Exec::default())
}

pub fn generic_hessian_rank_with(f: &QPoly, samples: u32, seed: Seed, exec: Exec) -> Result<usize> {
    form_degree(f, 2)?;
    if samples < 1 {
        return Err(Error::InvalidArgument("rank sampling needs at least one sample".into()));
    }
    let field = PrimeField::default();
    let h = reduce_matrix(&hessian_matrix(f)?, field)?;
    let n = f.nvars();
    let stream = seed.derive("hessian-rank");
    let ranks = exec.map_range(samples as usize, |i| -> Result<usize> {
        let mut rng = stream.index(i as u64).rng();
        let pt: Vec<Fp> = (0..n).map(|_| field.element(rng.gen_range(0..field.modulus()))).collect();
        Ok(h.eval(&pt)?.rank())
    });
    let mut best = 0;
    for r in ranks {
        best = best.max(r?);
    }
    Ok(best)
}

/// Dimension of the closure of the polar image: generic Hessian rank minus one.
pub fn polar_image_dim(f: &QPoly, samples: u32, seed: Seed) -> Result<usize> {
    Ok(generic_hessian_rank(f, samples, seed)? - 1)
}

/// Hessian evaluated at a rational point.
pub fn hessian_at(f: &QPoly, point: &[Rational]) -> Result<ScalarMatrix<Rational>> {
    hessian_matrix(f)?.eval(point)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::rational;
    use crate::poly::{parse, parse_in};

    fn cubic() -> QPoly {
        parse("x0*x3^2 + 2*x1*x3*x4 + x2*x4^2", "x").unwrap()
    }

    #[test]
    fn quadric_hessian_is_diagonal() {
        let f = parse_in("x0^2 + x1^2 + x2^2", "x", 4).unwrap();
        let h = hessian_matrix(&f).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let expect = if i == j && i < 3 { 2 } else { 0 };
                assert_eq!(h.get(i, j), &QPoly::constant(rational(expect), 4));
            }
        }
        assert!(symbolic_determinant(&h, DetAlgorithm::MinorExpansion).unwrap().is_zero());
    }

    #[test]
    fn cubic_hessian_entries() {
        // second partials by hand
        let h = hessian_matrix(&cubic()).unwrap();
        let e = |s: &str| parse_in(s, "x", 5).unwrap();
        assert_eq!(h.get(0, 3), &e("2*x3"));
        assert_eq!(h.get(1, 3), &e("2*x4"));
        assert_eq!(h.get(1, 4), &e("2*x3"));
        assert_eq!(h.get(2, 4), &e("2*x4"));
        assert_eq!(h.get(3, 3), &e("2*x0"));
        assert_eq!(h.get(3, 4), &e("2*x1"));
        assert_eq!(h.get(4, 4), &e("2*x2"));
        assert!(h.get(0, 0).is_zero() && h.get(0, 4).is_zero() && h.get(2, 3).is_zero());
    }

    #[test]
    fn small_determinants() {
        let e = |s: &str| parse_in(s, "x", 2).unwrap();
        let m = PolyMatrix::new(vec![vec![e("x0"), e("x1")], vec![e("x1"), e("x0")]]).unwrap();
        for alg in [DetAlgorithm::MinorExpansion, DetAlgorithm::FractionFree] {
            assert_eq!(symbolic_determinant(&m, alg).unwrap(), e("x0^2 - x1^2"));
        }
        let r = PolyMatrix::new(vec![vec![e("x0"), e("x1")]]).unwrap();
        assert!(matches!(symbolic_determinant(&r, DetAlgorithm::MinorExpansion), Err(Error::Dimension(_))));
        let big = PolyMatrix::new(vec![vec![e("1"); 9]; 9]).unwrap();
        assert_eq!(symbolic_determinant(&big, DetAlgorithm::MinorExpansion), Err(Error::SizeCap { size: 9, cap: 8 }));
    }

    #[test]
    fn fraction_free_needs_pivoting() {
        let e = |s: &str| parse_in(s, "x", 2).unwrap();
        let m = PolyMatrix::new(vec![
            vec![e("0"), e("x0"), e("1")],
            vec![e("x1"), e("0"), e("x0")],
            vec![e("1"), e("x1"), e("0")],
        ])
        .unwrap();
        let a = symbolic_determinant(&m, DetAlgorithm::MinorExpansion).unwrap();
        let b = symbolic_determinant(&m, DetAlgorithm::FractionFree).unwrap();
        assert_eq!(a, b);
        assert_eq!(a, e("x0^2 + x1^2"));
    }

    #[test]
    fn example_cubic_vanishes() {
        let v = hessian_vanishes(&cubic(), HessianMode::Symbolic, Seed(1)).unwrap();
        assert!(v.vanishes);
        assert_eq!(v.error_bound, rational(0));
        let p = hessian_vanishes(&cubic(), HessianMode::probabilistic(5), Seed(1)).unwrap();
        assert!(p.vanishes);
    }

    #[test]
    fn fermat_cubic_does_not_vanish() {
        let f = parse("x0^3 + x1^3 + x2^3", "x").unwrap();
        let v = hessian_vanishes(&f, HessianMode::Symbolic, Seed(0)).unwrap();
        assert!(!v.vanishes);
        assert_eq!(v.determinant.unwrap(), parse("216*x0*x1*x2", "x").unwrap());
        assert!(!hessian_vanishes(&f, HessianMode::probabilistic(3), Seed(0)).unwrap().vanishes);
    }

    #[test]
    fn cone_error_bound() {
        let f = parse_in("x0^3 + x1^3", "x", 4).unwrap();
        let v = hessian_vanishes(&f, HessianMode::probabilistic(3), Seed(3)).unwrap();
        assert!(v.vanishes);
        assert_eq!(v.degree_bound, 4);
        let p = Rational::from_integer(BigInt::from(crate::field::DEFAULT_MODULUS));
        assert!(v.error_bound <= num_traits::pow(rational(8) / p, 3));
        assert!(hessian_vanishes(&f, HessianMode::probabilistic(0), Seed(3)).is_err());
        let z = hessian_vanishes(&f, HessianMode::Probabilistic { trials: 2, domain: SampleDomain::Integers { bound: 100 } }, Seed(3)).unwrap();
        assert!(z.vanishes && z.modulus.is_none());
        assert_eq!(z.error_bound, num_traits::pow(Rational::new(4.into(), 201.into()), 2));
    }

    #[test]
    fn ranks_and_polar_dimension() {
        assert_eq!(generic_hessian_rank(&cubic(), 5, Seed(9)).unwrap(), 4);
        assert_eq!(polar_image_dim(&cubic(), 5, Seed(9)).unwrap(), 3);
        // oracle: row-reduce the Hessian at the all-ones point
        let ones = vec![rational(1); 5];
        assert_eq!(hessian_at(&cubic(), &ones).unwrap().rank(), 4);
        let q = parse("x0^2 + x1^2 + x2^2 + x3^2", "x").unwrap();
        assert_eq!(polar_image_dim(&q, 5, Seed(9)).unwrap(), 3);
        let cone = parse_in("x0^3 + x1^3", "x", 4).unwrap();
        assert_eq!(polar_image_dim(&cone, 5, Seed(9)).unwrap(), 1);
        assert_eq!(generic_hessian_rank(&parse("x0 + x1", "x").unwrap(), 5, Seed(9)), Err(Error::DegreeTooLow(1, 2)));
    }
}

//! Cones, vertices, singular points and hyperplane restrictions.

use std::collections::BTreeMap;

use rand::Rng;

use crate::error::{Error, Result};
use crate::field::{rational, Field, Rational};
use crate::linalg::{proportional, KernelBasis, ScalarMatrix};
use crate::poly::{Monomial, Polynomial, QPoly};
use crate::rng::{small_int, Seed};

/// Directions `v` with `sum_i v_i * df/dx_i = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexSubspace {
    pub basis: KernelBasis<Rational>,
}

impl VertexSubspace {
    /// Projective dimension; `-1` when empty.
    pub fn projective_dim(&self) -> i64 {
        self.basis.len() as i64 - 1
    }

    pub fn is_cone(&self) -> bool {
        !self.basis.is_empty()
    }
}

/// Matrix whose column `j` holds the coefficients of `polys[j]` in the
/// monomial basis of their combined support.
pub fn coefficient_matrix<K: Field>(polys: &[Polynomial<K>], ctx: &K::Ctx) -> ScalarMatrix<K> {
    let mut index: BTreeMap<Monomial, usize> = BTreeMap::new();
    for p in polys {
        for (m, _) in p.terms() {
            index.entry(m.clone()).or_insert(0);
        }
    }
    for (i, v) in index.values_mut().rev().enumerate() {
        *v = i;
    }
    let mut m = ScalarMatrix::zeros(index.len(), polys.len(), ctx);
    for (j, p) in polys.iter().enumerate() {
        for (mono, c) in p.terms() {
            m.set(index[mono], j, c.clone());
        }
    }
    m
}

pub fn cone_test(f: &QPoly) -> Result<VertexSubspace> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if !f.is_homogeneous() {
        return Err(Error::NotHomogeneous);
    }
    let grad = f.gradient();
    let m = coefficient_matrix(&grad, &());
    let basis = if m.rows() == 0 {
        ScalarMatrix::<Rational>::zeros(1, f.nvars(), &()).kernel()
    } else {
        m.kernel()
    };
    debug_assert!(basis.vectors.iter().all(|v| f.directional(v).map(|d| d.is_zero()).unwrap_or(false)));
    Ok(VertexSubspace { basis })
}

/// `f(x + λv) - f(x)` expanded in `n + 2` variables, the last one being λ.
pub fn translation_difference(f: &QPoly, v: &[QPoly]) -> Result<QPoly> {
    let n = f.nvars();
    if v.len() != n {
        return Err(Error::Length { expected: n, got: v.len() });
    }
    let lambda = QPoly::var(n, n + 1, ());
    let args = (0..n)
        .map(|i| Ok(&QPoly::var(i, n + 1, ()) + &(&lambda * &v[i].extend_vars(n + 1)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(&f.compose(&args)? - &f.extend_vars(n + 1)?)
}

/// The vertex certificate: `f(x + λv) = f(x)` identically.
pub fn vertex_certificate(f: &QPoly, v: &[Rational]) -> Result<bool> {
    let n = f.nvars();
    let consts: Vec<QPoly> = v.iter().map(|c| QPoly::constant(c.clone(), n)).collect();
    Ok(translation_difference(f, &consts)?.is_zero())
}

/// Whether every partial derivative vanishes at `point`.
pub fn sing_membership<K: Field>(f: &Polynomial<K>, point: &[K]) -> Result<bool> {
    if point.iter().all(|x| x.is_zero()) {
        return Err(Error::ZeroPoint);
    }
    for g in f.gradient() {
        if !g.evaluate(point)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A hyperplane `H = {h . x = 0}` with an explicit parametrization
/// `x = P u`, `P` of shape `(n + 1) x n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HyperplaneChart {
    param: ScalarMatrix<Rational>,
    dual: Vec<Rational>,
}

impl HyperplaneChart {
    pub fn new(param: ScalarMatrix<Rational>, dual: Vec<Rational>) -> Result<Self> {
        let n1 = dual.len();
        if n1 < 2 || param.rows() != n1 || param.cols() != n1 - 1 {
            return Err(Error::InvalidChart(format!(
                "parametrization is {}x{}, expected {}x{}",
                param.rows(),
                param.cols(),
                n1,
                n1.saturating_sub(1)
            )));
        }
        if dual.iter().all(Field::is_zero) {
            return Err(Error::InvalidChart("dual point is zero".into()));
        }
        let image = param.transpose().mul_vec(&dual)?;
        if image.iter().any(|x| !Field::is_zero(x)) {
            return Err(Error::InvalidChart("parametrization leaves the hyperplane".into()));
        }
        if param.rank() != n1 - 1 {
            return Err(Error::InvalidChart("parametrization is not of full rank".into()));
        }
        Ok(HyperplaneChart { param, dual })
    }

    /// Chart whose columns are the reduced kernel basis of `h`.
    pub fn from_dual(dual: Vec<Rational>) -> Result<Self> {
        let n1 = dual.len();
        let row = ScalarMatrix::new(vec![dual.clone()])?;
        let basis = row.kernel().vectors;
        if basis.len() + 1 != n1 {
            return Err(Error::InvalidChart("dual point is zero".into()));
        }
        let cols: Vec<Vec<Rational>> = basis;
        let param = ScalarMatrix::new(cols).map(|m| m.transpose())?;
        Self::new(param, dual)
    }

    /// Chart with a seeded random full-rank parametrization of `h^perp`.
    pub fn random(dual: Vec<Rational>, seed: Seed) -> Result<Self> {
        let base = Self::from_dual(dual.clone())?;
        let k = base.param.cols();
        let mut rng = seed.derive("chart").rng();
        for _ in 0..64 {
            let a = ScalarMatrix::from_flat(k, k, (0..k * k).map(|_| rational(small_int(&mut rng, 3))).collect());
            if a.rank() == k {
                let rows = (0..base.param.rows())
                    .map(|r| {
                        (0..k)
                            .map(|c| {
                                (0..k).fold(rational(0), |acc, j| acc + base.param.get(r, j) * a.get(j, c))
                            })
                            .collect()
                    })
                    .collect();
                return Self::new(ScalarMatrix::new(rows)?, dual);
            }
        }
        Ok(base)
    }

    pub fn param(&self) -> &ScalarMatrix<Rational> {
        &self.param
    }

    pub fn dual(&self) -> &[Rational] {
        &self.dual
    }

    pub fn ambient_vars(&self) -> usize {
        self.dual.len()
    }

    pub fn chart_vars(&self) -> usize {
        self.dual.len() - 1
    }

    /// The point `P u` of the ambient space.
    pub fn embed(&self, u: &[Rational]) -> Result<Vec<Rational>> {
        self.param.mul_vec(u)
    }

    /// `f o P`, a form in the chart variables.
    pub fn restrict(&self, f: &QPoly) -> Result<QPoly> {
        if f.nvars() != self.ambient_vars() {
            return Err(Error::VariableCount(f.nvars(), self.ambient_vars()));
        }
        let k = self.chart_vars();
        let args: Vec<QPoly> = (0..self.ambient_vars())
            .map(|r| QPoly::linear_form(self.param.row(r), ()))
            .collect();
        debug_assert!(args.iter().all(|a| a.nvars() == k));
        let g = f.compose(&args)?;
        if g.is_zero() {
            return Err(Error::HyperplaneInHypersurface);
        }
        Ok(g)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjectionCheck {
    pub checked: usize,
    pub skipped: usize,
    pub passed: bool,
}

/// Seeded chart points with entries in `[-bound, bound]`, never zero.
pub fn random_points(nvars: usize, count: usize, bound: i64, seed: Seed) -> Vec<Vec<Rational>> {
    (0..count)
        .map(|i| {
            let mut rng = seed.index(i as u64).rng();
            loop {
                let p: Vec<i64> = (0..nvars).map(|_| rng.gen_range(-bound..=bound)).collect();
                if p.iter().any(|&x| x != 0) {
                    return p.into_iter().map(rational).collect();
                }
            }
        })
        .collect()
}

/// At seeded chart points, the gradient of the restriction is projectively
/// equal to the projection from `h` of the ambient gradient, i.e. `P^T grad f(Pu)`.
pub fn projection_lemma_check(f: &QPoly, chart: &HyperplaneChart, count: usize, seed: Seed) -> Result<ProjectionCheck> {
    let points = random_points(chart.chart_vars(), count, 50, seed.derive("projection"));
    projection_lemma_check_at(f, chart, &points, None)
}

/// As [`projection_lemma_check`] at given points, optionally with a
/// replacement for the ambient gradient.
pub fn projection_lemma_check_at(
    f: &QPoly,
    chart: &HyperplaneChart,
    points: &[Vec<Rational>],
    gradient: Option<&[QPoly]>,
) -> Result<ProjectionCheck> {
    let g = chart.restrict(f)?;
    let grad_g = g.gradient();
    let own;
    let grad_f: &[QPoly] = match gradient {
        Some(gr) => gr,
        None => {
            own = f.gradient();
            &own
        }
    };
    let pt = chart.param.transpose();
    let (mut checked, mut skipped, mut passed) = (0, 0, true);
    for u in points {
        let x = chart.embed(u)?;
        let lhs = grad_g.iter().map(|p| p.evaluate(u)).collect::<Result<Vec<_>>>()?;
        let amb = grad_f.iter().map(|p| p.evaluate(&x)).collect::<Result<Vec<_>>>()?;
        let rhs = pt.mul_vec(&amb)?;
        let zero = |v: &[Rational]| v.iter().all(Field::is_zero);
        if zero(&lhs) || zero(&rhs) {
            skipped += 1;
            continue;
        }
        checked += 1;
        passed &= proportional(&lhs, &rhs);
    }
    if checked == 0 {
        return Err(Error::AllSamplesDegenerate);
    }
    Ok(ProjectionCheck { checked, skipped, passed })
}

/// Seeded invertible matrix with entries in `[-bound, bound]`.
pub fn random_invertible(n: usize, bound: i64, seed: Seed) -> ScalarMatrix<Rational> {
    let mut rng = seed.derive("change").rng();
    loop {
        let m = ScalarMatrix::from_flat(n, n, (0..n * n).map(|_| rational(small_int(&mut rng, bound))).collect());
        if m.rank() == n {
            return m;
        }
    }
}

/// `f(A x)`.
pub fn linear_change(f: &QPoly, a: &ScalarMatrix<Rational>) -> Result<QPoly> {
    if a.rows() != f.nvars() || a.cols() != f.nvars() {
        return Err(Error::Dimension(format!("{}x{} change for {} variables", a.rows(), a.cols(), f.nvars())));
    }
    let args: Vec<QPoly> = (0..a.rows()).map(|r| QPoly::linear_form(a.row(r), ())).collect();
    f.compose(&args)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse, parse_in};

    fn cubic() -> QPoly {
        parse("x0*x3^2 + 2*x1*x3*x4 + x2*x4^2", "x").unwrap()
    }

    #[test]
    fn example_cubic_is_not_a_cone() {
        let v = cone_test(&cubic()).unwrap();
        assert_eq!(v.projective_dim(), -1);
        // oracle: the five partials are independent in the monomial basis
        let m = coefficient_matrix(&cubic().gradient(), &());
        assert_eq!(m.rank(), 5);
    }

    #[test]
    fn binary_cubic_cone() {
        let f = parse_in("x0^3 + x1^3", "x", 4).unwrap();
        let v = cone_test(&f).unwrap();
        assert_eq!(v.projective_dim(), 1);
        for b in &v.basis.vectors {
            assert!(Field::is_zero(&b[0]) && Field::is_zero(&b[1]));
            assert!(vertex_certificate(&f, b).unwrap());
        }
    }

    #[test]
    fn cone_survives_coordinate_change() {
        let f = parse_in("x0^3 + x1^3", "x", 4).unwrap();
        let a = random_invertible(4, 3, Seed(11));
        let g = linear_change(&f, &a).unwrap();
        let v = cone_test(&g).unwrap();
        assert_eq!(v.projective_dim(), 1);
        for b in &v.basis.vectors {
            assert!(vertex_certificate(&g, b).unwrap());
        }
        // A^{-1} e_2 is a vertex direction of f(Ax)
        let e2 = vec![rational(0), rational(0), rational(1), rational(0)];
        let w = a.solve(&e2).unwrap().unwrap();
        assert!(g.directional(&w).unwrap().is_zero());
    }

    #[test]
    fn singular_points() {
        let one = vec![rational(1), rational(0), rational(0), rational(0), rational(0)];
        assert!(sing_membership(&cubic(), &one).unwrap());
        let fermat = parse("x0^3 + x1^3 + x2^3", "x").unwrap();
        assert!(!sing_membership(&fermat, &[rational(1), rational(0), rational(0)]).unwrap());
        assert_eq!(sing_membership(&fermat, &vec![rational(0); 3]), Err(Error::ZeroPoint));
    }

    fn chart_x4_eq_cx3(c: i64) -> HyperplaneChart {
        // u -> (u0, u1, u2, u3, c*u3)
        let mut rows = vec![vec![rational(0); 4]; 5];
        for i in 0..4 {
            rows[i][i] = rational(1);
        }
        rows[4][3] = rational(c);
        let dual = vec![rational(0), rational(0), rational(0), rational(c), rational(-1)];
        HyperplaneChart::new(ScalarMatrix::new(rows).unwrap(), dual).unwrap()
    }

    #[test]
    fn restriction_through_the_core() {
        for c in [1, 2, -3] {
            let g = chart_x4_eq_cx3(c).restrict(&cubic()).unwrap();
            let v = |i| QPoly::var(i, 4, ());
            let lin = &(&v(0) + &v(1).scale(&rational(2 * c))) + &v(2).scale(&rational(c * c));
            let expect = &v(3).pow(2) * &lin;
            assert_eq!(g, expect);
        }
        let q = parse("x0^2 + x1^2 + x2^2", "x").unwrap();
        let chart = HyperplaneChart::from_dual(vec![rational(0), rational(0), rational(1)]).unwrap();
        assert_eq!(chart.restrict(&q).unwrap(), parse("x0^2 + x1^2", "x").unwrap());
        let lin = parse("x0*x2", "x").unwrap();
        assert_eq!(chart.restrict(&lin), Err(Error::HyperplaneInHypersurface));
    }

    #[test]
    fn chart_validation() {
        let bad = ScalarMatrix::new(vec![vec![rational(1)], vec![rational(1)]]).unwrap();
        assert!(HyperplaneChart::new(bad, vec![rational(1), rational(0)]).is_err());
        let r = HyperplaneChart::random(vec![rational(1), rational(2), rational(-1)], Seed(4)).unwrap();
        assert_eq!(r.param().rank(), 2);
    }

    #[test]
    fn projection_lemma() {
        let chart = chart_x4_eq_cx3(1);
        let r = projection_lemma_check(&cubic(), &chart, 10, Seed(5)).unwrap();
        assert!(r.passed);
        assert!(r.checked > 0);
        let q = parse("x0^2 + x1^2 + x2^2 + x3^2", "x").unwrap();
        let qc = HyperplaneChart::from_dual(vec![rational(0), rational(0), rational(0), rational(1)]).unwrap();
        assert!(projection_lemma_check(&q, &qc, 10, Seed(5)).unwrap().passed);
        // mutation: negate one partial
        let mut grad = cubic().gradient();
        grad[0] = -grad[0].clone();
        let pts = random_points(4, 10, 50, Seed(6));
        assert!(!projection_lemma_check_at(&cubic(), &chart, &pts, Some(&grad)).unwrap().passed);
    }

    #[test]
    fn chain_rule_at_one_point() {
        // hand computation at u = (1, 1, 1, 1) on x4 = x3: x = (1,1,1,1,1),
        // grad f = (1, 2, 1, 4, 4), P^T grad f = (1, 2, 1, 8); g = x3^2 (x0 + 2 x1 + x2)
        let chart = chart_x4_eq_cx3(1);
        let g = chart.restrict(&cubic()).unwrap();
        let u = vec![rational(1); 4];
        let grad: Vec<Rational> = g.gradient().iter().map(|p| p.evaluate(&u).unwrap()).collect();
        assert_eq!(grad, vec![rational(1), rational(2), rational(1), rational(8)]);
    }
}

//! Polar relations and the map `psi_g = (h_0 : ... : h_n)`.
//!
//! A polar relation is a form `g(y)` with `g(f_0, ..., f_n) = 0`. With
//! `g_i = (dg/dy_i)(f_0, ..., f_n)` and `rho` their gcd, `h_i = g_i / rho`.

use std::cmp::Ordering;

use rand::Rng;

use crate::cone::{coefficient_matrix, sing_membership, translation_difference};
use crate::error::{Error, Result};
use crate::field::{rational, rational_content, Field, Fp, PrimeField, Rational};
use crate::hessian::hessian_matrix;
use crate::linalg::{normalize_projective, proportional, ScalarMatrix};
use crate::par::Exec;
use crate::poly::{gcd_all, Monomial, QPoly};
use crate::rng::Seed;

pub const DEFAULT_MAX_RELATION_DEGREE: u32 = 4;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolarRelation {
    /// A form in `y_0..y_n`.
    pub g: QPoly,
    pub degree: u32,
    /// `g(f_0, ..., f_n)`, the zero polynomial.
    pub certificate: QPoly,
}

impl PolarRelation {
    /// A linear relation among the partials: the hypersurface is a cone.
    pub fn is_linear(&self) -> bool {
        self.degree == 1
    }

    /// Recompute the certificate against `f`.
    pub fn verify(&self, f: &QPoly) -> Result<bool> {
        Ok(self.g.compose(&f.gradient())?.is_zero())
    }
}

/// `(dg/dy_i)(grad f)` for every `i`.
pub fn derivative_compositions(g: &QPoly, f: &QPoly) -> Result<Vec<QPoly>> {
    let grad = f.gradient();
    (0..g.nvars()).map(|i| g.partial(i)?.compose(&grad)).collect()
}

/// Primitive integer coefficient vector with positive leading entry.
fn normalize_candidate(v: &[Rational]) -> Vec<Rational> {
    let c = rational_content(v).expect("nonzero kernel vector");
    let lead_negative = v.iter().find(|x| !Field::is_zero(*x)).is_some_and(|x| x < &rational(0));
    let c = if lead_negative { -c } else { c };
    v.iter().map(|x| x / &c).collect()
}

/// Lowest-degree relation up to `max_degree`, or `None`.
///
/// Kernel basis vectors at the first degree with a nontrivial kernel are
/// normalized to primitive integer vectors with positive leading coefficient
/// and ordered by greatest leading monomial, then by lexicographically
/// smallest coefficient vector; the first one with a non-vanishing
/// derivative composition is returned.
pub fn find_polar_relation(f: &QPoly, max_degree: u32) -> Result<Option<PolarRelation>> {
    find_polar_relation_with(f, max_degree, Exec::default())
}

pub fn find_polar_relation_with(f: &QPoly, max_degree: u32, exec: Exec) -> Result<Option<PolarRelation>> {
    if max_degree < 1 {
        return Err(Error::InvalidArgument("maximum relation degree must be at least 1".into()));
    }
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let d = f.homogeneous_degree().ok_or(Error::NotHomogeneous)?;
    if d < 2 {
        return Err(Error::DegreeTooLow(d, 2));
    }
    let n1 = f.nvars();
    let grad = f.gradient();
    for e in 1..=max_degree {
        let monos = Monomial::all_of_degree(n1, e);
        let images = exec.map(&monos, |m| {
            let mut acc = QPoly::one(n1, ());
            for (i, &k) in m.exponents().iter().enumerate() {
                if k > 0 {
                    acc = &acc * &grad[i].pow(k);
                }
            }
            acc
        });
        let matrix = coefficient_matrix(&images, &());
        let kernel = matrix.kernel();
        if kernel.is_empty() {
            continue;
        }
        let mut candidates: Vec<(usize, Vec<Rational>)> = kernel
            .vectors
            .iter()
            .map(|v| {
                let nv = normalize_candidate(v);
                let lead = nv.iter().position(|x| !Field::is_zero(x)).expect("nonzero");
                (lead, nv)
            })
            .collect();
        // monomials are in descending order, so a smaller index is a greater monomial
        candidates.sort_by(|(la, a), (lb, b)| la.cmp(lb).then_with(|| lex_cmp(a, b)));
        for (_, coeffs) in candidates {
            let g = QPoly::from_terms(n1, (), monos.iter().cloned().zip(coeffs));
            let certificate = g.compose(&grad)?;
            debug_assert!(certificate.is_zero());
            if derivative_compositions(&g, f)?.iter().any(|gi| !gi.is_zero()) {
                return Ok(Some(PolarRelation { g, degree: e, certificate }));
            }
        }
    }
    Ok(None)
}

fn lex_cmp(a: &[Rational], b: &[Rational]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.cmp(y) {
            Ordering::Equal => continue,
            o => return o,
        }
    }
    Ordering::Equal
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PsiMap {
    pub relation: PolarRelation,
    /// `g_i = (dg/dy_i)(grad f)`.
    pub raw: Vec<QPoly>,
    /// Rational content of the `g_i` times their monic gcd.
    pub rho: QPoly,
    /// `h_i = g_i / rho`.
    pub components: Vec<QPoly>,
}

pub fn build_psi(f: &QPoly, relation: PolarRelation, allow_cone: bool) -> Result<PsiMap> {
    if relation.is_linear() && !allow_cone {
        return Err(Error::ConeRelation);
    }
    if !relation.verify(f)? {
        return Err(Error::InvalidArgument("g(f_0, ..., f_n) is not zero".into()));
    }
    let raw = derivative_compositions(&relation.g, f)?;
    if raw.iter().all(|g| g.is_zero()) {
        return Err(Error::DegenerateRelation);
    }
    let content = rational_content(raw.iter().flat_map(|g| g.terms().iter().map(|(_, c)| c))).expect("nonzero");
    let rho = gcd_all(&raw)?.scale(&content);
    let components = raw
        .iter()
        .map(|g| g.div_exact(&rho).ok_or(Error::InexactDivision))
        .collect::<Result<Vec<_>>>()?;
    for (g, h) in raw.iter().zip(&components) {
        if &(&rho * h) != g {
            return Err(Error::InexactDivision);
        }
    }
    debug_assert!(gcd_all(&components)?.is_constant());
    Ok(PsiMap { relation, raw, rho, components })
}

impl PsiMap {
    pub fn nvars(&self) -> usize {
        self.components.len()
    }

    /// The same relation with replaced components; used to inject faults.
    pub fn with_components(&self, components: Vec<QPoly>) -> PsiMap {
        PsiMap { components, ..self.clone() }
    }

    /// `psi(p)`, or `None` at a point of indeterminacy.
    pub fn eval(&self, p: &[Rational]) -> Result<Option<Vec<Rational>>> {
        let v = self.components.iter().map(|h| h.evaluate(p)).collect::<Result<Vec<_>>>()?;
        Ok(if v.iter().all(Field::is_zero) { None } else { Some(v) })
    }

    pub fn degree(&self) -> Option<u32> {
        self.components.iter().filter_map(|h| h.degree()).max()
    }
}

/// `H_f (h_0, ..., h_n)^T = 0`.
pub fn check_second_derivative_relation(f: &QPoly, psi: &PsiMap) -> Result<bool> {
    let h = hessian_matrix(f)?;
    Ok(h.mul_vec(&psi.components)?.iter().all(|p| p.is_zero()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheckMode {
    Symbolic,
    /// Evaluate at this many seeded points, three λ values each, over the default prime field.
    Sampled { points: u32 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct InvarianceCheck {
    /// `sum_i dF/dx_i h_i = 0`.
    pub sum_rule: bool,
    /// `F(x + λ h(x)) = F(x)`.
    pub translation: bool,
}

impl InvarianceCheck {
    /// The two sides agree, as they must.
    pub fn consistent(&self) -> bool {
        self.sum_rule == self.translation
    }

    pub fn holds(&self) -> bool {
        self.sum_rule && self.translation
    }
}

pub fn check_invariance(big_f: &QPoly, psi: &PsiMap, mode: CheckMode, seed: Seed) -> Result<InvarianceCheck> {
    if big_f.nvars() != psi.nvars() {
        return Err(Error::VariableCount(big_f.nvars(), psi.nvars()));
    }
    let mut sum = QPoly::zero(big_f.nvars(), ());
    for (fi, hi) in big_f.gradient().iter().zip(&psi.components) {
        sum = &sum + &(fi * hi);
    }
    let sum_rule = sum.is_zero();
    let translation = match mode {
        CheckMode::Symbolic => translation_difference(big_f, &psi.components)?.is_zero(),
        CheckMode::Sampled { points } => sampled_translation(big_f, psi, points, seed)?,
    };
    Ok(InvarianceCheck { sum_rule, translation })
}

fn sampled_translation(big_f: &QPoly, psi: &PsiMap, points: u32, seed: Seed) -> Result<bool> {
    let field = PrimeField::default();
    let reduce = |p: &QPoly| {
        p.reduce_mod(field)
            .ok_or_else(|| Error::InvalidArgument("a coefficient denominator vanishes modulo the sampling prime".into()))
    };
    let fp = reduce(big_f)?;
    let hp = psi.components.iter().map(reduce).collect::<Result<Vec<_>>>()?;
    let stream = seed.derive("invariance");
    for i in 0..points {
        let mut rng = stream.index(i as u64).rng();
        let x: Vec<Fp> = (0..big_f.nvars()).map(|_| field.element(rng.gen_range(0..field.modulus()))).collect();
        let hx = hp.iter().map(|h| h.evaluate(&x)).collect::<Result<Vec<_>>>()?;
        let base = fp.evaluate(&x)?;
        for _ in 0..3 {
            let lambda = field.element(rng.gen_range(0..field.modulus()));
            let moved: Vec<Fp> = x.iter().zip(&hx).map(|(a, b)| a.add(&lambda.mul(b))).collect();
            if fp.evaluate(&moved)? != base {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `F(h_0, ..., h_n) = 0`.
pub fn taylor_check(big_f: &QPoly, psi: &PsiMap) -> Result<bool> {
    Ok(big_f.compose(&psi.components)?.is_zero())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SetLabel {
    PolarImage,
    PsiImage,
    BaseLocus,
    Singular,
    Core { t: usize },
}

impl SetLabel {
    pub fn name(&self) -> String {
        match self {
            SetLabel::PolarImage => "Z(f)".into(),
            SetLabel::PsiImage => "S*_Z image".into(),
            SetLabel::BaseLocus => "Bs(psi_g)".into(),
            SetLabel::Singular => "Sing(X)".into(),
            SetLabel::Core { t } => format!("core x{}..=0", t + 1),
        }
    }
}

/// Finitely many projective points standing in for a variety.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SampledSet {
    pub label: SetLabel,
    pub points: Vec<Vec<Rational>>,
    /// For images, the point each image point came from.
    pub preimages: Vec<Vec<Rational>>,
    pub seed: Seed,
}

impl SampledSet {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Indices of points failing the label's membership predicate.
    pub fn verify(&self, f: &QPoly, psi: Option<&PsiMap>) -> Result<Vec<usize>> {
        let mut bad = Vec::new();
        for (i, p) in self.points.iter().enumerate() {
            let ok = match self.label {
                SetLabel::PolarImage => {
                    let grad = f.gradient();
                    let pre = &self.preimages[i];
                    let img = grad.iter().map(|g| g.evaluate(pre)).collect::<Result<Vec<_>>>()?;
                    proportional(&img, p)
                }
                SetLabel::PsiImage => match (psi, self.preimages.get(i)) {
                    (Some(psi), Some(pre)) => psi.eval(pre)?.is_some_and(|img| proportional(&img, p)),
                    _ => false,
                },
                SetLabel::BaseLocus => match psi {
                    Some(psi) => psi.eval(p)?.is_none(),
                    None => false,
                },
                SetLabel::Singular => sing_membership(f, p)?,
                SetLabel::Core { t } => p[t + 1..].iter().all(Field::is_zero),
            };
            if !ok {
                bad.push(i);
            }
        }
        Ok(bad)
    }
}

/// Integer preimage candidates with entries in `[-20, 20]`.
fn candidate(nvars: usize, seed: Seed) -> Vec<Rational> {
    let mut rng = seed.rng();
    loop {
        let p: Vec<i64> = (0..nvars).map(|_| rng.gen_range(-20..=20)).collect();
        if p.iter().any(|&x| x != 0) {
            return p.into_iter().map(rational).collect();
        }
    }
}

/// Push `count` seeded points through `psi`, skipping indeterminacy. Image
/// points are normalized to primitive integer vectors.
pub fn sample_image(psi: &PsiMap, count: usize, seed: Seed) -> Result<SampledSet> {
    let stream = seed.derive("image");
    let mut points = Vec::with_capacity(count);
    let mut preimages = Vec::with_capacity(count);
    let budget = 20 * count + 20;
    let mut i = 0;
    while points.len() < count {
        if i >= budget {
            return Err(Error::AllSamplesDegenerate);
        }
        let p = candidate(psi.nvars(), stream.index(i as u64));
        i += 1;
        if let Some(q) = psi.eval(&p)? {
            points.push(normalize_projective(&q));
            preimages.push(p);
        }
    }
    Ok(SampledSet { label: SetLabel::PsiImage, points, preimages, seed })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InclusionReport {
    pub checked: usize,
    /// Points where some `h_i` is nonzero.
    pub base_locus_violators: Vec<usize>,
    /// Points where some partial of `f` is nonzero.
    pub sing_violators: Vec<usize>,
    /// The input is a cone, outside the setting where the inclusions are asserted.
    pub cone_caveat: bool,
}

impl InclusionReport {
    pub fn passed(&self) -> bool {
        self.base_locus_violators.is_empty() && self.sing_violators.is_empty()
    }
}

/// Every image point lies in the base locus of `psi` and in `Sing(X)`.
pub fn check_inclusions(f: &QPoly, psi: &PsiMap, image: &SampledSet, cone: bool) -> Result<InclusionReport> {
    let mut base = Vec::new();
    let mut sing = Vec::new();
    for (i, q) in image.points.iter().enumerate() {
        if psi.eval(q)?.is_some() {
            base.push(i);
        }
        if !sing_membership(f, q)? {
            sing.push(i);
        }
    }
    Ok(InclusionReport { checked: image.points.len(), base_locus_violators: base, sing_violators: sing, cone_caveat: cone })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberReport {
    pub image_points: usize,
    pub preimages: usize,
    pub witnesses: usize,
    /// `psi(p + λq) = q` for every preimage `p`.
    pub fiber_cone: bool,
    /// `h` and the partials of `f` vanish on `w + λq` for every witness `w`.
    pub lines_in_base_locus: bool,
    pub failures: Vec<String>,
}

impl FiberReport {
    pub fn passed(&self) -> bool {
        self.fiber_cone && self.lines_in_base_locus
    }
}

const LAMBDAS: [i64; 4] = [0, 1, 2, 3];

/// For each image point `q` with preimage `p0`: further preimages are found
/// along kernel directions of `[J_h(p0) | -q]` and kept when `psi(p) = q`.
/// Every preimage `p` must satisfy `psi(p + λq) = q`. Other image points `w`
/// in the linear span of the fiber are witnesses; the line through `w` and
/// `q` must lie in the base locus and in `Sing(X)`.
pub fn check_fiber_lines(f: &QPoly, psi: &PsiMap, image: &SampledSet, samples: usize, seed: Seed) -> Result<FiberReport> {
    let n1 = psi.nvars();
    let jac: Vec<Vec<QPoly>> = psi.components.iter().map(|h| h.gradient()).collect();
    let grad_f = f.gradient();
    let mut report = FiberReport {
        image_points: 0,
        preimages: 0,
        witnesses: 0,
        fiber_cone: true,
        lines_in_base_locus: true,
        failures: Vec::new(),
    };
    for (idx, (q, p0)) in image.points.iter().zip(&image.preimages).enumerate() {
        report.image_points += 1;
        let mut rows = Vec::with_capacity(n1);
        for (i, row) in jac.iter().enumerate() {
            let mut r = row.iter().map(|g| g.evaluate(p0)).collect::<Result<Vec<_>>>()?;
            r.push(-q[i].clone());
            rows.push(r);
        }
        let kernel = ScalarMatrix::new(rows)?.kernel();
        let mut rng = seed.derive("fiber").index(idx as u64).rng();
        let mut fiber = vec![p0.clone()];
        for v in kernel.vectors.iter().take(samples.max(1)) {
            let step = rational(rng.gen_range(1..=5));
            let p: Vec<Rational> = p0.iter().zip(v).map(|(a, b)| a + &step * b).collect();
            if let Some(img) = psi.eval(&p)? {
                if proportional(&img, q) {
                    fiber.push(p);
                }
            }
        }
        report.preimages += fiber.len();
        for p in &fiber {
            for &l in &LAMBDAS {
                let moved: Vec<Rational> = p.iter().zip(q).map(|(a, b)| a + rational(l) * b).collect();
                match psi.eval(&moved)? {
                    Some(img) if proportional(&img, q) => {}
                    _ => {
                        report.fiber_cone = false;
                        report.failures.push(format!("point {idx}: psi(p + {l}q) is not q"));
                    }
                }
            }
        }
        // witnesses: other image points in the span of the fiber and q
        let mut span_rows: Vec<Vec<Rational>> = fiber.clone();
        span_rows.push(q.clone());
        let span_rank = ScalarMatrix::new(span_rows.clone())?.rank();
        for (j, w) in image.points.iter().enumerate() {
            if j == idx || proportional(w, q) {
                continue;
            }
            let mut with_w = span_rows.clone();
            with_w.push(w.clone());
            if ScalarMatrix::new(with_w)?.rank() != span_rank {
                continue;
            }
            report.witnesses += 1;
            for &l in &LAMBDAS[1..] {
                let pt: Vec<Rational> = w.iter().zip(q).map(|(a, b)| a + rational(l) * b).collect();
                let h_zero = psi.eval(&pt)?.is_none();
                let sing = grad_f.iter().map(|g| g.evaluate(&pt)).collect::<Result<Vec<_>>>()?.iter().all(Field::is_zero);
                if !h_zero || !sing {
                    report.lines_in_base_locus = false;
                    report.failures.push(format!("point {idx}: line to witness {j} leaves the base locus at λ = {l}"));
                }
            }
        }
    }
    Ok(report)
}

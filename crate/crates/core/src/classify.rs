//! Sample-level checks of the classification of hypersurfaces with vanishing
//! Hessian: the Hesse equivalence up to `P^3`, cones with small polar image,
//! and the plane-curve and hyperplane-section structure in `P^4`.

use rand::Rng;

use crate::cone::{cone_test, linear_change, random_invertible, HyperplaneChart};
use crate::error::{Error, Result};
use crate::field::{rational, Rational};
use crate::gn::{random_form, random_instance, GnSkeleton};
use crate::hessian::{hessian_vanishes, polar_image_dim, HessianMode, DEFAULT_RANK_SAMPLES};
use crate::linalg::{normalize_projective, ScalarMatrix};
use crate::par::Exec;
use crate::poly::{gcd, is_reduced, parse, Monomial, QPoly};
use crate::psi::{build_psi, find_polar_relation, sample_image, PsiMap, DEFAULT_MAX_RELATION_DEGREE};
use crate::rng::{small_nonzero, Seed};

pub const DEFAULT_IMAGE_SAMPLES: usize = 40;
pub const DEFAULT_SECTIONS: usize = 5;
pub const MAX_CURVE_DEGREE: u32 = 6;
const SECTION_ATTEMPTS: u32 = 16;

/// The cubic `x0 x3^2 + 2 x1 x3 x4 + x2 x4^2`.
pub fn example_cubic() -> QPoly {
    parse("x0*x3^2 + 2*x1*x3*x4 + x2*x4^2", "x").expect("valid")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FormKind {
    Cone { vars: usize },
    Generic,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LowDimCase {
    pub id: String,
    /// Projective dimension of the ambient space.
    pub n: usize,
    pub degree: u32,
    pub kind: FormKind,
    pub f: QPoly,
    pub vanishes: bool,
    pub cone: bool,
    pub dim_z: Option<usize>,
    pub reduced: Option<bool>,
}

impl LowDimCase {
    pub fn biconditional(&self) -> bool {
        self.vanishes == self.cone
    }

    /// `P^3` cones over reduced forms have `dim Z(f)` equal to 1 or 2.
    pub fn dim_z_ok(&self) -> bool {
        match (self.kind, self.reduced, self.dim_z) {
            (FormKind::Cone { .. }, Some(true), Some(k)) if self.n == 3 => (1..=2).contains(&k),
            _ => true,
        }
    }

    pub fn passed(&self) -> bool {
        let construction = !matches!(self.kind, FormKind::Cone { .. }) || self.cone;
        self.biconditional() && self.dim_z_ok() && construction
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LowDimReport {
    pub seed: Seed,
    pub count: usize,
    pub cases: Vec<LowDimCase>,
}

impl LowDimReport {
    pub fn failures(&self) -> Vec<&LowDimCase> {
        self.cases.iter().filter(|c| !c.passed()).collect()
    }

    pub fn passed(&self) -> bool {
        self.failures().is_empty()
    }

    /// Generic draws that turned out to have vanishing Hessian.
    pub fn degenerate_generic(&self) -> usize {
        self.cases.iter().filter(|c| c.kind == FormKind::Generic && c.vanishes).count()
    }
}

/// Cone in `n + 1` variables: a random form in `k` of them, moved by a random
/// invertible change of coordinates.
pub fn random_cone(nvars: usize, k: usize, degree: u32, seed: Seed) -> Result<QPoly> {
    if k == 0 || k >= nvars {
        return Err(Error::InvalidArgument(format!("a cone needs 1 <= k < {nvars} variables, got {k}")));
    }
    let mut rng = seed.derive("cone-form").rng();
    let vars: Vec<usize> = (0..k).collect();
    let g = random_form(&vars, nvars, degree, &mut rng);
    linear_change(&g, &random_invertible(nvars, 3, seed))
}

pub fn random_generic(nvars: usize, degree: u32, seed: Seed) -> QPoly {
    let mut rng = seed.derive("generic-form").rng();
    let vars: Vec<usize> = (0..nvars).collect();
    random_form(&vars, nvars, degree, &mut rng)
}

fn low_dim_case(n: usize, i: usize, cone: bool, seed: Seed) -> Result<LowDimCase> {
    let nvars = n + 1;
    let degree = 2 + (i % 3) as u32;
    let (kind, f, id) = if cone {
        // P^3 cones over forms in 2 or 3 variables; below that any k < n + 1
        let k = if n == 3 { 2 + i % 2 } else { 1 + i % n };
        let s = seed.derive("cone").index(i as u64);
        (FormKind::Cone { vars: k }, random_cone(nvars, k, degree, s)?, format!("P{n}-cone-{i}"))
    } else {
        let s = seed.derive("generic").index(i as u64);
        (FormKind::Generic, random_generic(nvars, degree, s), format!("P{n}-generic-{i}"))
    };
    let vanishes = hessian_vanishes(&f, HessianMode::Symbolic, seed)?.vanishes;
    let is_cone = cone_test(&f)?.is_cone();
    let (dim_z, reduced) = if n == 3 && matches!(kind, FormKind::Cone { .. }) {
        let s = seed.derive("dimz").index(i as u64);
        (Some(polar_image_dim(&f, DEFAULT_RANK_SAMPLES, s)?), Some(is_reduced(&f, s)?))
    } else {
        (None, None)
    };
    Ok(LowDimCase { id, n, degree, kind, f, vanishes, cone: is_cone, dim_z, reduced })
}

/// `count` seeded cones and `count` seeded generic forms in each of `P^1`,
/// `P^2`, `P^3`, degrees cycling through 2, 3, 4.
pub fn low_dim_hesse_suite(count: usize, seed: Seed, exec: Exec) -> Result<LowDimReport> {
    if count < 1 {
        return Err(Error::InvalidArgument("count must be at least 1".into()));
    }
    let jobs: Vec<(usize, usize, bool)> = (1..=3)
        .flat_map(|n| (0..count).flat_map(move |i| [(n, i, true), (n, i, false)]))
        .collect();
    let cases = exec
        .map(&jobs, |&(n, i, cone)| low_dim_case(n, i, cone, seed.derive(&format!("P{n}"))))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    Ok(LowDimReport { seed, count, cases })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LowPolarDim {
    pub dim_z: usize,
    /// `dim Z(f) <= 2`, so the check is not vacuous.
    pub applicable: bool,
    pub cone: bool,
    pub vertex_dim: i64,
}

impl LowPolarDim {
    pub fn passed(&self) -> bool {
        !self.applicable || self.cone
    }
}

/// In five or more variables, `dim Z(f) <= 2` forces a cone.
pub fn low_polar_dim_check(f: &QPoly, seed: Seed) -> Result<LowPolarDim> {
    if f.nvars() < 5 {
        return Err(Error::InvalidArgument(format!("needs at least 5 variables, got {}", f.nvars())));
    }
    let dim_z = polar_image_dim(f, DEFAULT_RANK_SAMPLES, seed.derive("dimz"))?;
    let vertex = cone_test(f)?;
    Ok(LowPolarDim { dim_z, applicable: dim_z <= 2, cone: vertex.is_cone(), vertex_dim: vertex.projective_dim() })
}

/// Seeded cones in `P^4` over forms in at most 3 variables.
pub fn p4_cone_suite(count: usize, seed: Seed, exec: Exec) -> Result<Vec<(QPoly, LowPolarDim)>> {
    exec.map_range(count, |i| {
        let s = seed.derive("p4-cone").index(i as u64);
        let k = 1 + i % 3;
        let degree = 2 + (i % 4) as u32;
        let f = random_cone(5, k, degree, s)?;
        let r = low_polar_dim_check(&f, s)?;
        Ok((f, r))
    })
    .into_iter()
    .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlaneCurveReport {
    pub samples: usize,
    pub span_rank: usize,
    /// Reduced basis of the span of the sample; columns `pivots` of the
    /// basis form the identity, so a point's coordinates are its pivot entries.
    pub basis: Vec<Vec<Rational>>,
    pub pivots: Vec<usize>,
    /// Lowest-degree form in `z0, z1, z2` vanishing on the sample.
    pub curve: Option<QPoly>,
    pub curve_degree: Option<u32>,
    pub irreducibility_unverified: bool,
    /// The sample is a single point, which only happens for cones.
    pub collapsed: bool,
    pub points: Vec<Vec<Rational>>,
}

impl PlaneCurveReport {
    pub fn passed(&self) -> bool {
        self.span_rank == 3 && self.curve.is_some()
    }

    /// Plane coordinates of an ambient point of the span.
    pub fn plane_coordinates(&self, p: &[Rational]) -> Vec<Rational> {
        self.pivots.iter().map(|&c| p[c].clone()).collect()
    }
}

/// Lowest-degree form, from degree 2 up to `max_degree`, vanishing on all
/// `points` (each of length 3). Needs at least `C(e + 2, 2)` points at degree `e`.
pub fn interpolate_plane_curve(points: &[Vec<Rational>], max_degree: u32) -> Result<Option<QPoly>> {
    for e in 2..=max_degree {
        let monos = Monomial::all_of_degree(3, e);
        if points.len() < monos.len() {
            return Ok(None);
        }
        let rows = points
            .iter()
            .map(|p| monos.iter().map(|m| QPoly::monomial(rational(1), m.clone()).evaluate(p)).collect())
            .collect::<Result<Vec<Vec<Rational>>>>()?;
        let kernel = ScalarMatrix::new(rows)?.kernel();
        if let Some(v) = kernel.vectors.first() {
            let v = normalize_projective(v);
            return Ok(Some(QPoly::from_terms(3, (), monos.into_iter().zip(v))));
        }
    }
    Ok(None)
}

pub fn p4_plane_curve_check(f: &QPoly, psi: &PsiMap, samples: usize, seed: Seed) -> Result<PlaneCurveReport> {
    if f.nvars() != 5 {
        return Err(Error::VariableCount(f.nvars(), 5));
    }
    if cone_test(f)?.is_cone() {
        return Err(Error::InvalidArgument("precondition violated: the input is a cone".into()));
    }
    let image = sample_image(psi, samples, seed.derive("curve"))?;
    let ech = ScalarMatrix::new(image.points.clone())?.echelon();
    let span_rank = ech.rank();
    let basis: Vec<Vec<Rational>> = (0..span_rank).map(|r| ech.rref.row(r).to_vec()).collect();
    let pivots = ech.pivots.clone();
    let mut report = PlaneCurveReport {
        samples: image.len(),
        span_rank,
        basis,
        pivots,
        curve: None,
        curve_degree: None,
        irreducibility_unverified: true,
        collapsed: span_rank == 1,
        points: image.points.clone(),
    };
    if span_rank == 3 {
        let coords: Vec<Vec<Rational>> = image.points.iter().map(|p| report.plane_coordinates(p)).collect();
        report.curve = interpolate_plane_curve(&coords, MAX_CURVE_DEGREE)?;
        report.curve_degree = report.curve.as_ref().and_then(|c| c.degree());
    }
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tangency {
    /// The line meets the curve in a repeated point, given when rational.
    Tangent { point: Option<Vec<Rational>> },
    NotTangent,
    Inconclusive(String),
}

/// Substitute the line `s a + w b` into `curve` and look for a repeated root
/// of the binary form, i.e. a non-constant `gcd(F_s, F_w)`.
pub fn tangency_test(curve: &QPoly, a: &[Rational], b: &[Rational]) -> Result<Tangency> {
    if curve.degree().unwrap_or(0) < 2 {
        return Ok(Tangency::Inconclusive("curve of degree below 2".into()));
    }
    let line: Vec<QPoly> = a
        .iter()
        .zip(b)
        .map(|(x, y)| QPoly::linear_form(&[x.clone(), y.clone()], ()))
        .collect();
    let form = curve.compose(&line)?;
    if form.is_zero() {
        return Ok(Tangency::Inconclusive("line lies on the curve".into()));
    }
    let g = gcd(&form.partial(0)?, &form.partial(1)?)?;
    if g.is_constant() {
        return Ok(Tangency::NotTangent);
    }
    let point = (g.degree() == Some(1)).then(|| {
        let (cs, cw) = (g.coefficient_of(&Monomial::new(vec![1, 0])), g.coefficient_of(&Monomial::new(vec![0, 1])));
        // root (s, w) = (cw, -cs)
        let p: Vec<Rational> = a.iter().zip(b).map(|(x, y)| &cw * x - &cs * y).collect();
        normalize_projective(&p)
    });
    Ok(Tangency::Tangent { point })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SectionReport {
    /// `H = a l1 + b l2`.
    pub pencil: (Rational, Rational),
    pub dual: Vec<Rational>,
    pub section: QPoly,
    pub hessian_vanishes: bool,
    pub vertex_dim: i64,
    /// The vertex meets the core plane in this line (plane coordinates).
    pub core_line: Option<[Vec<Rational>; 2]>,
    pub tangency: Tangency,
    pub resampled: u32,
}

impl SectionReport {
    pub fn passed(&self, curve_degree: Option<u32>) -> bool {
        let tangency_ok = match &self.tangency {
            Tangency::Tangent { .. } => true,
            Tangency::NotTangent => false,
            Tangency::Inconclusive(_) => curve_degree.is_none_or(|e| e < 2),
        };
        self.hessian_vanishes && self.vertex_dim >= 1 && tangency_ok
    }
}

/// Dual points of the two hyperplanes cutting out the span in `curve`.
fn core_equations(curve: &PlaneCurveReport) -> Result<(Vec<Rational>, Vec<Rational>)> {
    let k = ScalarMatrix::new(curve.basis.clone())?.kernel().vectors;
    match k.as_slice() {
        [l1, l2] => Ok((l1.clone(), l2.clone())),
        _ => Err(Error::Dimension(format!("core plane cut by {} equations, expected 2", k.len()))),
    }
}

/// One hyperplane `H = a l1 + b l2` through the core plane.
pub fn section_through_core(f: &QPoly, curve: &PlaneCurveReport, a: Rational, b: Rational) -> Result<SectionReport> {
    let (l1, l2) = core_equations(curve)?;
    let dual: Vec<Rational> = l1.iter().zip(&l2).map(|(x, y)| &a * x + &b * y).collect();
    // v with l1(v) = b, l2(v) = -a lies on H and off the core
    let v = ScalarMatrix::new(vec![l1.clone(), l2.clone()])?
        .solve(&[b.clone(), -a.clone()])?
        .ok_or_else(|| Error::InvalidChart("no transversal direction".into()))?;
    let mut cols = curve.basis.clone();
    cols.push(v);
    let param = ScalarMatrix::new(cols)?.transpose();
    let chart = HyperplaneChart::new(param, dual.clone())?;
    let section = chart.restrict(f)?;
    let hessian = hessian_vanishes(&section, HessianMode::Symbolic, Seed(0))?.vanishes;
    let vertex = cone_test(&section)?;
    // vertex directions with u3 = 0
    let core_line = if vertex.basis.is_empty() {
        None
    } else {
        let row = vec![vertex.basis.vectors.iter().map(|w| w[3].clone()).collect::<Vec<_>>()];
        let combos = ScalarMatrix::new(row)?.kernel().vectors;
        let pts: Vec<Vec<Rational>> = combos
            .iter()
            .map(|c| {
                (0..3)
                    .map(|j| c.iter().zip(&vertex.basis.vectors).fold(rational(0), |acc, (x, w)| acc + x * &w[j]))
                    .collect()
            })
            .collect();
        match pts.as_slice() {
            [p, q] => Some([p.clone(), q.clone()]),
            _ => None,
        }
    };
    let tangency = match (&curve.curve, &core_line) {
        (Some(c), Some([p, q])) => tangency_test(c, p, q)?,
        (None, _) => Tangency::Inconclusive("no curve equation".into()),
        (_, None) => Tangency::Inconclusive(format!(
            "vertex of dimension {} does not meet the core plane in a line",
            vertex.projective_dim()
        )),
    };
    Ok(SectionReport {
        pencil: (a, b),
        dual,
        section,
        hessian_vanishes: hessian,
        vertex_dim: vertex.projective_dim(),
        core_line,
        tangency,
        resampled: 0,
    })
}

/// `charts` seeded hyperplanes through the core plane, with pairwise distinct
/// pencil parameters. Hyperplanes inside the hypersurface are redrawn.
pub fn p4_section_check(f: &QPoly, curve: &PlaneCurveReport, charts: usize, seed: Seed) -> Result<Vec<SectionReport>> {
    if curve.span_rank != 3 {
        return Err(Error::Dimension(format!("core span has rank {}, expected 3", curve.span_rank)));
    }
    let stream = seed.derive("sections");
    let mut used: Vec<Vec<Rational>> = Vec::new();
    let mut out = Vec::with_capacity(charts);
    for i in 0..charts {
        let mut rng = stream.index(i as u64).rng();
        let mut resampled = 0;
        loop {
            if resampled >= SECTION_ATTEMPTS {
                return Err(Error::RetriesExhausted {
                    attempts: SECTION_ATTEMPTS,
                    reason: "every hyperplane through the core lies in the hypersurface".into(),
                });
            }
            let (a, b) = (rational(small_nonzero(&mut rng)), rational(rng.gen_range(-9..=9)));
            let key = normalize_projective(&[a.clone(), b.clone()]);
            if used.contains(&key) {
                resampled += 1;
                continue;
            }
            match section_through_core(f, curve, a, b) {
                Ok(mut r) => {
                    used.push(key);
                    r.resampled = resampled;
                    out.push(r);
                    break;
                }
                Err(Error::HyperplaneInHypersurface) => resampled += 1,
                Err(e) => return Err(e),
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassificationReport {
    pub id: String,
    pub n: usize,
    pub seed: Seed,
    pub f: QPoly,
    pub vanishes: bool,
    pub cone: bool,
    pub dim_z: usize,
    pub low_polar_dim: Option<LowPolarDim>,
    pub psi: Option<PsiMap>,
    pub plane_curve: Option<PlaneCurveReport>,
    pub sections: Vec<SectionReport>,
    pub failures: Vec<String>,
}

impl ClassificationReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Hessian (symbolic), cone test and polar image dimension, followed by the
/// `P^4` structure checks for non-cones with vanishing Hessian.
pub fn classify(id: &str, f: &QPoly, seed: Seed) -> Result<ClassificationReport> {
    let vanishes = hessian_vanishes(f, HessianMode::Symbolic, seed)?.vanishes;
    let cone = cone_test(f)?.is_cone();
    let dim_z = polar_image_dim(f, DEFAULT_RANK_SAMPLES, seed.derive("dimz"))?;
    let mut report = ClassificationReport {
        id: id.to_string(),
        n: f.nvars() - 1,
        seed,
        f: f.clone(),
        vanishes,
        cone,
        dim_z,
        low_polar_dim: None,
        psi: None,
        plane_curve: None,
        sections: Vec::new(),
        failures: Vec::new(),
    };
    if f.nvars() <= 4 && vanishes != cone {
        report.failures.push(format!("vanishing Hessian is {vanishes} but cone is {cone}"));
    }
    if f.nvars() >= 5 && vanishes {
        let lp = low_polar_dim_check(f, seed)?;
        if !lp.passed() {
            report.failures.push(format!("dim Z(f) = {} but not a cone", lp.dim_z));
        }
        report.low_polar_dim = Some(lp);
    }
    if f.nvars() == 5 && vanishes && !cone {
        let rel = find_polar_relation(f, DEFAULT_MAX_RELATION_DEGREE)?
            .ok_or_else(|| Error::Degenerate(format!("no polar relation up to degree {DEFAULT_MAX_RELATION_DEGREE}")))?;
        let psi = build_psi(f, rel, false)?;
        let curve = p4_plane_curve_check(f, &psi, DEFAULT_IMAGE_SAMPLES, seed)?;
        if curve.collapsed {
            report.failures.push("image collapsed to a point for a non-cone".into());
        }
        if curve.span_rank != 3 {
            report.failures.push(format!("image span has rank {}, expected 3", curve.span_rank));
        } else if curve.curve.is_none() {
            report.failures.push(format!("no plane curve up to degree {MAX_CURVE_DEGREE}"));
        } else {
            let sections = p4_section_check(f, &curve, DEFAULT_SECTIONS, seed)?;
            for (i, s) in sections.iter().enumerate() {
                if !s.passed(curve.curve_degree) {
                    report.failures.push(format!(
                        "section {i}: vanishing {}, vertex dim {}, tangency {:?}",
                        s.hessian_vanishes, s.vertex_dim, s.tangency
                    ));
                }
            }
            report.sections = sections;
        }
        report.plane_curve = Some(curve);
        report.psi = Some(psi);
    }
    Ok(report)
}

/// The example cubic and `count` seeded instances of type `(4, 2, 1)`, with
/// `d` alternating between 3 and 4.
pub fn p4_suite(count: usize, seed: Seed, exec: Exec) -> Result<Vec<ClassificationReport>> {
    let jobs: Vec<usize> = (0..=count).collect();
    exec.map(&jobs, |&i| {
        if i == 0 {
            return classify("example-cubic", &example_cubic(), seed.derive("p4").index(0));
        }
        let d = 3 + ((i - 1) % 2) as u32;
        let skel = GnSkeleton { n: 4, t: 2, m: 1, hdeg: 2, psideg: 1, d };
        let s = seed.derive("p4").index(i as u64);
        let inst = random_instance(&skel, s)?;
        classify(&format!("gn-4-2-1-d{d}-{}", i - 1), &inst.f, s)
    })
    .into_iter()
    .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{ratio, Field};
    use crate::poly::parse_in;

    fn q(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| rational(x)).collect()
    }

    #[test]
    fn small_suite_passes() {
        let r = low_dim_hesse_suite(6, Seed(7), Exec::Sequential).unwrap();
        assert_eq!(r.cases.len(), 36);
        assert!(r.passed(), "{:?}", r.failures());
        assert_eq!(r, low_dim_hesse_suite(6, Seed(7), Exec::Parallel).unwrap());
        assert!(low_dim_hesse_suite(0, Seed(7), Exec::Sequential).is_err());
    }

    #[test]
    fn singular_quadric() {
        let f = parse_in("x0^2 + x1^2", "x", 3).unwrap();
        assert!(hessian_vanishes(&f, HessianMode::Symbolic, Seed(0)).unwrap().vanishes);
        assert!(cone_test(&f).unwrap().is_cone());
    }

    #[test]
    fn low_polar_dim_examples() {
        let f = parse_in("x0^3 + x1^3 + x2^3", "x", 5).unwrap();
        let r = low_polar_dim_check(&f, Seed(1)).unwrap();
        assert_eq!((r.dim_z, r.applicable, r.cone), (2, true, true));
        let r = low_polar_dim_check(&example_cubic(), Seed(1)).unwrap();
        assert_eq!((r.dim_z, r.applicable, r.passed()), (3, false, true));
        let f = parse_in("x0^3", "x", 5).unwrap();
        assert_eq!(low_polar_dim_check(&f, Seed(1)).unwrap().dim_z, 0);
        assert!(low_polar_dim_check(&parse("x0^3 + x1^3", "x").unwrap(), Seed(1)).is_err());
        for (_, r) in p4_cone_suite(6, Seed(2), Exec::Sequential).unwrap() {
            assert!(r.applicable && r.passed());
        }
    }

    #[test]
    fn curve_of_the_cubic() {
        let f = example_cubic();
        let rel = find_polar_relation(&f, 2).unwrap().unwrap();
        let psi = build_psi(&f, rel, false).unwrap();
        let c = p4_plane_curve_check(&f, &psi, 20, Seed(4)).unwrap();
        assert_eq!(c.span_rank, 3);
        assert_eq!(c.pivots, vec![0, 1, 2]);
        assert_eq!(c.curve, Some(parse_in("z0*z2 - z1^2", "z", 3).unwrap()));
        assert_eq!(c.curve_degree, Some(2));
        assert!(c.irreducibility_unverified && !c.collapsed);
        let cone = parse_in("x0^3 + x1^3", "x", 5).unwrap();
        assert!(p4_plane_curve_check(&cone, &psi, 20, Seed(4)).is_err());
    }

    #[test]
    fn interpolation_needs_enough_points() {
        let pts: Vec<Vec<Rational>> = (1..=4).map(|a| q(&[1, a, a * a])).collect();
        assert_eq!(interpolate_plane_curve(&pts, 6).unwrap(), None);
        let pts: Vec<Vec<Rational>> = (1..=12).map(|a| q(&[1, a, a * a * a])).collect();
        let c = interpolate_plane_curve(&pts, 6).unwrap().unwrap();
        assert_eq!(c.degree(), Some(3));
        for p in &pts {
            assert!(Field::is_zero(&c.evaluate(p).unwrap()));
        }
    }

    #[test]
    fn hand_section_of_the_cubic() {
        let f = example_cubic();
        let rel = find_polar_relation(&f, 2).unwrap().unwrap();
        let psi = build_psi(&f, rel, false).unwrap();
        let curve = p4_plane_curve_check(&f, &psi, 20, Seed(4)).unwrap();
        // core equations are x3 and x4; H = a x3 + b x4 is x4 = c x3 with c = -a/b
        let mut points = Vec::new();
        for (a, b) in [(-1, 1), (-2, 1), (3, 1)] {
            let s = section_through_core(&f, &curve, rational(a), rational(b)).unwrap();
            assert!(s.hessian_vanishes);
            assert_eq!(s.vertex_dim, 1);
            let c = ratio(-a, b);
            match &s.tangency {
                Tangency::Tangent { point: Some(p) } => {
                    // tangent point (c^2 : -c : 1) of z0 z2 = z1^2
                    assert!(crate::linalg::proportional(p, &[&c * &c, -c.clone(), rational(1)]));
                    points.push(p.clone());
                }
                t => panic!("{t:?}"),
            }
        }
        points.dedup();
        assert_eq!(points.len(), 3);
    }

    #[test]
    fn corrupted_curve_is_not_tangent() {
        // vertex line z0 + 2 z1 + z2 = 0 for c = 1
        let (p, r) = (q(&[1, 0, -1]), q(&[2, -1, 0]));
        let good = parse_in("z0*z2 - z1^2", "z", 3).unwrap();
        let bad = parse_in("z0*z2 + z1^2", "z", 3).unwrap();
        assert!(matches!(tangency_test(&good, &p, &r).unwrap(), Tangency::Tangent { .. }));
        assert_eq!(tangency_test(&bad, &p, &r).unwrap(), Tangency::NotTangent);
        let line = parse_in("z0", "z", 3).unwrap();
        assert!(matches!(tangency_test(&line, &p, &r).unwrap(), Tangency::Inconclusive(_)));
    }

    #[test]
    fn classify_the_cubic() {
        let r = classify("cubic", &example_cubic(), Seed(0)).unwrap();
        assert!(r.passed(), "{:?}", r.failures);
        assert!(r.vanishes && !r.cone);
        assert_eq!(r.dim_z, 3);
        assert_eq!(r.sections.len(), DEFAULT_SECTIONS);
    }

    #[test]
    fn classify_gn_instances() {
        for (d, s) in [(3, 0), (4, 1)] {
            let skel = GnSkeleton { n: 4, t: 2, m: 1, hdeg: 2, psideg: 1, d };
            let inst = random_instance(&skel, Seed(s)).unwrap();
            let r = classify("gn", &inst.f, Seed(s)).unwrap();
            assert!(r.passed(), "d = {d}: {:?}", r.failures);
            assert_eq!(r.plane_curve.unwrap().span_rank, 3);
        }
    }
}

//! Gordan-Noether polynomials.
//!
//! For data `h_0..h_t` in `y_0..y_m`, `psi_0..psi_m` in `x_{t+1}..x_n` and
//! constants `a^(l)`, each `Q_l` is the determinant of the `(t+1) x (t+1)`
//! matrix with first row `x_0..x_t`, then the rows `dh_i/dy_j` evaluated at
//! `y = psi`, then the constant rows. Expanding along the first row gives
//! `Q_l = sum_i M_{l,i} x_i`. With `s = deg Q_l` and `mu = floor(d / s)`,
//!
//! ```text
//! f = sum_{k=0}^{mu} P_k(Q_1, ..., Q_{t-m}, x_{t+1}, ..., x_n)
//! ```
//!
//! where `P_k` has bidegree `(k, d - k s)`. Biforms are written in variables
//! `z_0..z_{n-m-1}`: the first `t - m` stand for the `Q_l`, the rest for
//! `x_{t+1}..x_n`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::cone::cone_test;
use crate::error::{Error, Result};
use crate::field::{parse_rational, rational, Rational};
use crate::hessian::{symbolic_determinant, DetAlgorithm};
use crate::poly::{parse_in, Monomial, PolyMatrix, QPoly};
use crate::rng::{small_nonzero, Seed};

/// Retry budget for degenerate random draws.
pub const MAX_ATTEMPTS: u32 = 8;

/// Integer data of a construction; coefficients are drawn at random.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GnSkeleton {
    pub n: usize,
    pub t: usize,
    pub m: usize,
    pub hdeg: u32,
    pub psideg: u32,
    pub d: u32,
}

/// Violated constraints among `t >= m+1`, `2 <= t <= n-2`, `1 <= m <= n-t-1`.
pub fn shape_violations(n: usize, t: usize, m: usize) -> Vec<String> {
    let (n, t, m) = (n as i64, t as i64, m as i64);
    let mut v = Vec::new();
    if t < m + 1 {
        v.push(format!("t ≥ m+1 violated: t = {t} < m + 1 = {}", m + 1));
    }
    if t < 2 {
        v.push(format!("2 ≤ t violated: t = {t}"));
    }
    if t > n - 2 {
        v.push(format!("t ≤ n−2 violated: t = {t} > n − 2 = {}", n - 2));
    }
    if m < 1 {
        v.push(format!("1 ≤ m violated: m = {m}"));
    }
    if m > n - t - 1 {
        v.push(format!("m ≤ n−t−1 violated: m = {m} > n − t − 1 = {}", n - t - 1));
    }
    v
}

impl GnSkeleton {
    pub fn validate(&self) -> Result<()> {
        let mut v = shape_violations(self.n, self.t, self.m);
        if self.hdeg < 1 {
            v.push("h-degree ≥ 1 violated".into());
        }
        if self.psideg < 1 {
            v.push("psi-degree ≥ 1 violated".into());
        }
        if self.d < 1 {
            v.push("d ≥ 1 violated".into());
        }
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::Validation(v))
        }
    }

    /// Whether the non-cone statement for general members applies (`mu > n - t - 2`).
    pub fn genericity_applies(&self, mu: u32) -> bool {
        mu as i64 > self.n as i64 - self.t as i64 - 2
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GnParams {
    pub n: usize,
    pub t: usize,
    pub m: usize,
    pub d: u32,
    /// `t + 1` forms in `y_0..y_m`.
    pub h_forms: Vec<QPoly>,
    /// `m + 1` forms in `x_0..x_n` involving only `x_{t+1}..x_n`.
    pub psi_forms: Vec<QPoly>,
    /// `a[l][u][v]`, shape `(t - m) x (t - m - 1) x (t + 1)`.
    pub a: Vec<Vec<Vec<Rational>>>,
    /// `P_0..P_mu` in `z_0..z_{n-m-1}`.
    pub biforms: Vec<QPoly>,
}

fn common_degree(forms: &[QPoly], what: &str, v: &mut Vec<String>) -> Option<u32> {
    let mut deg = None;
    for (i, f) in forms.iter().enumerate() {
        match f.homogeneous_degree() {
            None => v.push(format!("{what} {i} is not a nonzero form")),
            Some(e) => match deg {
                None => deg = Some(e),
                Some(d0) if d0 != e => v.push(format!("{what} {i} has degree {e}, expected {d0}")),
                _ => {}
            },
        }
    }
    deg
}

impl GnParams {
    /// Checks everything that does not depend on `s`.
    pub fn validate(&self) -> Result<()> {
        let (n, t, m) = (self.n, self.t, self.m);
        let mut v = shape_violations(n, t, m);
        if !v.is_empty() {
            return Err(Error::Validation(v));
        }
        if self.h_forms.len() != t + 1 {
            v.push(format!("expected {} h-forms, got {}", t + 1, self.h_forms.len()));
        }
        if self.h_forms.iter().any(|h| h.nvars() != m + 1) {
            v.push(format!("h-forms must be in y0..y{m}"));
        }
        common_degree(&self.h_forms, "h-form", &mut v);
        if self.psi_forms.len() != m + 1 {
            v.push(format!("expected {} psi-forms, got {}", m + 1, self.psi_forms.len()));
        }
        for (j, p) in self.psi_forms.iter().enumerate() {
            if p.nvars() != n + 1 {
                v.push(format!("psi-form {j} must be in x0..x{n}"));
            } else if p.support_vars().iter().any(|&x| x <= t) {
                v.push(format!("psi-form {j} involves x0..x{t}"));
            }
        }
        common_degree(&self.psi_forms, "psi-form", &mut v);
        let ok_a = self.a.len() == t - m
            && self.a.iter().all(|rows| rows.len() == t - m - 1 && rows.iter().all(|r| r.len() == t + 1));
        if !ok_a {
            v.push(format!("constants must have shape {} x {} x {}", t - m, t - m - 1, t + 1));
        }
        if self.biforms.iter().any(|p| p.nvars() != n - m) {
            v.push(format!("biforms must be in z0..z{}", n - m - 1));
        }
        if self.d < 1 {
            v.push("d ≥ 1 violated".into());
        }
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::Validation(v))
        }
    }

    /// Rows `dh_i/dy_j (psi)`, one per `j`.
    pub fn derivative_rows(&self) -> Result<Vec<Vec<QPoly>>> {
        (0..=self.m)
            .map(|j| self.h_forms.iter().map(|h| h.partial(j)?.compose(&self.psi_forms)).collect())
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GnInstance {
    pub params: GnParams,
    pub q: Vec<QPoly>,
    /// `m_coeffs[l][i] = M_{l,i}`.
    pub m_coeffs: Vec<Vec<QPoly>>,
    pub f: QPoly,
    pub s: u32,
    pub mu: u32,
    pub attempts: u32,
    pub cone_rejections: u32,
}

/// `Q_l` and the Laplace cofactors `M_{l,i}` for every `l`.
pub fn build_q(params: &GnParams) -> Result<(Vec<QPoly>, Vec<Vec<QPoly>>)> {
    params.validate()?;
    let (n, t) = (params.n, params.t);
    let deriv = params.derivative_rows()?;
    let mut qs = Vec::new();
    let mut ms = Vec::new();
    for (l, consts) in params.a.iter().enumerate() {
        let mut lower: Vec<Vec<QPoly>> = deriv.clone();
        for row in consts {
            lower.push(row.iter().map(|c| QPoly::constant(c.clone(), n + 1)).collect());
        }
        let mut cof = Vec::with_capacity(t + 1);
        let mut q = QPoly::zero(n + 1, ());
        for i in 0..=t {
            let minor: Vec<Vec<QPoly>> = lower
                .iter()
                .map(|r| r.iter().enumerate().filter(|(c, _)| *c != i).map(|(_, e)| e.clone()).collect())
                .collect();
            let det = symbolic_determinant(&PolyMatrix::new(minor)?, DetAlgorithm::MinorExpansion)?;
            let mi = if i % 2 == 0 { det } else { -det };
            q = &q + &(&mi * &QPoly::var(i, n + 1, ()));
            cof.push(mi);
        }
        if q.is_zero() {
            return Err(Error::Degenerate(format!("Q_{} vanishes identically", l + 1)));
        }
        qs.push(q);
        ms.push(cof);
    }
    Ok((qs, ms))
}

/// Assemble `f` from validated data.
pub fn build_f(params: &GnParams) -> Result<GnInstance> {
    let (q, m_coeffs) = build_q(params)?;
    let (n, t, m, d) = (params.n, params.t, params.m, params.d);
    let s = q[0].homogeneous_degree().ok_or_else(|| Error::Degenerate("Q is not homogeneous".into()))?;
    if q.iter().any(|ql| ql.homogeneous_degree() != Some(s)) {
        return Err(Error::Degenerate("the Q_l have different degrees".into()));
    }
    if d < s {
        return Err(Error::Validation(vec![format!("d > s violated: d = {d} < s = {s}")]));
    }
    let mu = d / s;
    let mut v = Vec::new();
    if params.biforms.len() != mu as usize + 1 {
        v.push(format!("expected {} biforms P_0..P_{mu}, got {}", mu + 1, params.biforms.len()));
    }
    let nz = t - m;
    for (k, p) in params.biforms.iter().enumerate() {
        let want = (k as u32, d as i64 - k as i64 * s as i64);
        let bad = p.terms().iter().any(|(mono, _)| {
            let e = mono.exponents();
            let zdeg: u32 = e[..nz].iter().sum();
            let xdeg: u32 = e[nz..].iter().sum();
            (zdeg, xdeg as i64) != want
        });
        if bad {
            v.push(format!("P_{k} is not of bidegree ({}, {})", want.0, want.1));
        }
    }
    if !v.is_empty() {
        return Err(Error::Validation(v));
    }
    let mut args: Vec<QPoly> = q.clone();
    args.extend((t + 1..=n).map(|i| QPoly::var(i, n + 1, ())));
    let mut f = QPoly::zero(n + 1, ());
    for p in &params.biforms {
        if !p.is_zero() {
            f = &f + &p.compose(&args)?;
        }
    }
    if f.is_zero() {
        return Err(Error::Degenerate("f vanishes identically".into()));
    }
    if f.homogeneous_degree() != Some(d) {
        return Err(Error::Degenerate(format!("f is not a form of degree {d}")));
    }
    Ok(GnInstance { params: params.clone(), q, m_coeffs, f, s, mu, attempts: 1, cone_rejections: 0 })
}

impl GnInstance {
    /// Least total degree in `x_{t+1}..x_n` over the monomials of `f`.
    pub fn core_multiplicity(&self) -> u32 {
        core_multiplicity(&self.f, self.params.t)
    }

    pub fn expected_core_multiplicity(&self) -> u32 {
        self.params.d - self.mu
    }

    pub fn genericity_applies(&self) -> bool {
        self.mu as i64 > self.params.n as i64 - self.params.t as i64 - 2
    }

    /// `sum_i M_{l,i} x_i = Q_l` and each `M_{l,i}` is zero or a form of
    /// degree `s - 1` in `x_{t+1}..x_n`.
    pub fn laplace_consistent(&self) -> bool {
        let (n, t) = (self.params.n, self.params.t);
        self.q.iter().zip(&self.m_coeffs).all(|(q, row)| {
            let sum = row
                .iter()
                .enumerate()
                .fold(QPoly::zero(n + 1, ()), |acc, (i, mi)| &acc + &(mi * &QPoly::var(i, n + 1, ())));
            let degrees_ok = row.iter().all(|mi| {
                mi.is_zero()
                    || (mi.homogeneous_degree() == Some(self.s - 1) && mi.support_vars().iter().all(|&v| v > t))
            });
            &sum == q && degrees_ok
        })
    }
}

/// Least total degree in `x_{t+1}..` over the monomials of `f`.
pub fn core_multiplicity(f: &QPoly, t: usize) -> u32 {
    f.terms().iter().map(|(m, _)| m.exponents()[t + 1..].iter().sum::<u32>()).min().unwrap_or(0)
}

/// Dense form of the given degree in the variables `vars` with coefficients
/// from `{-9..9} \ {0}`.
pub fn random_form<R: Rng>(vars: &[usize], nvars: usize, degree: u32, rng: &mut R) -> QPoly {
    let terms = Monomial::all_of_degree(vars.len(), degree).into_iter().map(|sub| {
        let mut e = vec![0; nvars];
        for (k, &v) in vars.iter().enumerate() {
            e[v] = sub.exponents()[k];
        }
        (Monomial::new(e), rational(small_nonzero(rng)))
    });
    QPoly::from_terms(nvars, (), terms.collect::<Vec<_>>())
}

fn random_biform<R: Rng>(nz: usize, nx: usize, zdeg: u32, xdeg: u32, rng: &mut R) -> QPoly {
    let mut terms = Vec::new();
    for zm in Monomial::all_of_degree(nz, zdeg) {
        for xm in Monomial::all_of_degree(nx, xdeg) {
            let mut e = zm.exponents().to_vec();
            e.extend_from_slice(xm.exponents());
            terms.push((Monomial::new(e), rational(small_nonzero(rng))));
        }
    }
    QPoly::from_terms(nz + nx, (), terms)
}

fn random_data<R: Rng>(skel: &GnSkeleton, rng: &mut R) -> GnParams {
    let GnSkeleton { n, t, m, hdeg, psideg, d } = *skel;
    let yvars: Vec<usize> = (0..=m).collect();
    let xvars: Vec<usize> = (t + 1..=n).collect();
    let h_forms = (0..=t).map(|_| random_form(&yvars, m + 1, hdeg, rng)).collect();
    let psi_forms = (0..=m).map(|_| random_form(&xvars, n + 1, psideg, rng)).collect();
    let a = (0..t - m)
        .map(|_| (0..t - m - 1).map(|_| (0..=t).map(|_| rational(small_nonzero(rng))).collect()).collect())
        .collect();
    GnParams { n, t, m, d, h_forms, psi_forms, a, biforms: Vec::new() }
}

/// Seeded random instance. Draws with `Q = 0` or `f = 0`, and cone draws when
/// `mu > n - t - 2`, are retried up to [`MAX_ATTEMPTS`] times.
pub fn random_instance(skel: &GnSkeleton, seed: Seed) -> Result<GnInstance> {
    skel.validate()?;
    let stream = seed.derive("gn");
    let mut cone_rejections = 0;
    let mut last_reason = String::new();
    for attempt in 0..MAX_ATTEMPTS {
        let mut rng = stream.index(attempt as u64).rng();
        let mut params = random_data(skel, &mut rng);
        let (q, _) = match build_q(&params) {
            Ok(x) => x,
            Err(Error::Degenerate(r)) => {
                last_reason = r;
                continue;
            }
            Err(e) => return Err(e),
        };
        let s = q[0].degree().unwrap_or(0);
        if skel.d < s {
            return Err(Error::Validation(vec![format!("d > s violated: d = {} < s = {s}", skel.d)]));
        }
        let mu = skel.d / s;
        let (nz, nx) = (skel.t - skel.m, skel.n - skel.t);
        params.biforms = (0..=mu).map(|k| random_biform(nz, nx, k, skel.d - k * s, &mut rng)).collect();
        let mut inst = match build_f(&params) {
            Ok(i) => i,
            Err(Error::Degenerate(r)) => {
                last_reason = r;
                continue;
            }
            Err(e) => return Err(e),
        };
        if skel.genericity_applies(mu) && cone_test(&inst.f)?.is_cone() {
            cone_rejections += 1;
            last_reason = "every draw was a cone".into();
            continue;
        }
        inst.attempts = attempt + 1;
        inst.cone_rejections = cone_rejections;
        return Ok(inst);
    }
    Err(Error::RetriesExhausted { attempts: MAX_ATTEMPTS, reason: last_reason })
}

/// Text form of [`GnParams`] for JSON files.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GnParamsDoc {
    pub n: usize,
    pub t: usize,
    pub m: usize,
    pub d: u32,
    pub h_forms: Vec<String>,
    pub psi_forms: Vec<String>,
    pub a: Vec<Vec<Vec<String>>>,
    pub biforms: Vec<String>,
}

impl From<&GnParams> for GnParamsDoc {
    fn from(p: &GnParams) -> Self {
        GnParamsDoc {
            n: p.n,
            t: p.t,
            m: p.m,
            d: p.d,
            h_forms: p.h_forms.iter().map(|h| h.display_with("y").to_string()).collect(),
            psi_forms: p.psi_forms.iter().map(|h| h.to_string()).collect(),
            a: p.a.iter().map(|l| l.iter().map(|r| r.iter().map(|c| c.to_string()).collect()).collect()).collect(),
            biforms: p.biforms.iter().map(|b| b.display_with("z").to_string()).collect(),
        }
    }
}

impl GnParamsDoc {
    pub fn to_params(&self) -> Result<GnParams> {
        let v = shape_violations(self.n, self.t, self.m);
        if !v.is_empty() {
            return Err(Error::Validation(v));
        }
        let parse_all = |xs: &[String], prefix: &str, nvars: usize| -> Result<Vec<QPoly>> {
            xs.iter().map(|s| parse_in(s, prefix, nvars)).collect()
        };
        let a = self
            .a
            .iter()
            .map(|l| {
                l.iter()
                    .map(|r| {
                        r.iter()
                            .map(|c| parse_rational(c).ok_or_else(|| Error::Syntax { pos: 0, msg: format!("bad rational `{c}`") }))
                            .collect()
                    })
                    .collect()
            })
            .collect::<Result<Vec<Vec<Vec<Rational>>>>>()?;
        Ok(GnParams {
            n: self.n,
            t: self.t,
            m: self.m,
            d: self.d,
            h_forms: parse_all(&self.h_forms, "y", self.m + 1)?,
            psi_forms: parse_all(&self.psi_forms, "x", self.n + 1)?,
            a,
            biforms: parse_all(&self.biforms, "z", self.n - self.m)?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hessian::{hessian_vanishes, HessianMode};
    use crate::poly::parse;

    fn hand_built(biforms: &[&str]) -> GnParams {
        GnParams {
            n: 4,
            t: 2,
            m: 1,
            d: 3,
            h_forms: ["y0^2", "y0*y1", "y1^2"].iter().map(|s| parse_in(s, "y", 2).unwrap()).collect(),
            psi_forms: ["x4", "x3"].iter().map(|s| parse_in(s, "x", 5).unwrap()).collect(),
            a: vec![vec![]],
            biforms: biforms.iter().map(|s| parse_in(s, "z", 3).unwrap()).collect(),
        }
    }

    #[test]
    fn shapes() {
        assert!(shape_violations(4, 2, 1).is_empty());
        assert!(shape_violations(5, 3, 1).is_empty());
        let v = shape_violations(4, 3, 1);
        assert!(v.iter().any(|s| s.contains("t ≤ n−2 violated")));
    }

    #[test]
    fn q_by_hand() {
        // det [[x0,x1,x2],[2x4,x3,0],[0,x4,2x3]] expanded by hand
        let (q, m) = build_q(&hand_built(&[])).unwrap();
        assert_eq!(q[0], parse("2*x0*x3^2 - 4*x1*x3*x4 + 2*x2*x4^2", "x").unwrap());
        assert_eq!(m[0][1], parse_in("-4*x3*x4", "x", 5).unwrap());
    }

    #[test]
    fn f_from_linear_biform() {
        let inst = build_f(&hand_built(&["0", "z0"])).unwrap();
        assert_eq!(inst.s, 3);
        assert_eq!(inst.mu, 1);
        assert_eq!(inst.f, parse("2*x0*x3^2 - 4*x1*x3*x4 + 2*x2*x4^2", "x").unwrap());
        assert_eq!(inst.core_multiplicity(), 2);
        assert!(inst.laplace_consistent());
        assert!(!cone_test(&inst.f).unwrap().is_cone());
        assert!(hessian_vanishes(&inst.f, HessianMode::Symbolic, Seed(0)).unwrap().vanishes);
    }

    #[test]
    fn p0_only_is_a_cone() {
        let inst = build_f(&hand_built(&["z1^3 + z2^3", "0"])).unwrap();
        assert!(cone_test(&inst.f).unwrap().is_cone());
        assert_eq!(inst.core_multiplicity(), 3);
    }

    #[test]
    fn repeated_h_is_degenerate() {
        let mut p = hand_built(&["0", "z0"]);
        p.h_forms = vec![parse_in("y0*y1", "y", 2).unwrap(); 3];
        assert!(matches!(build_q(&p), Err(Error::Degenerate(_))));
    }

    #[test]
    fn biform_degree_checked() {
        let r = build_f(&hand_built(&["0", "z0*z1"]));
        assert!(matches!(r, Err(Error::Validation(_))));
    }

    #[test]
    fn seeded_instances() {
        let skel = GnSkeleton { n: 4, t: 2, m: 1, hdeg: 2, psideg: 1, d: 3 };
        let a = random_instance(&skel, Seed(0)).unwrap();
        let b = random_instance(&skel, Seed(1)).unwrap();
        assert_ne!(a.f, b.f);
        assert_eq!(a, random_instance(&skel, Seed(0)).unwrap());
        assert!(hessian_vanishes(&a.f, HessianMode::Symbolic, Seed(0)).unwrap().vanishes);
        assert_eq!(a.core_multiplicity(), a.expected_core_multiplicity());
        let low = GnSkeleton { d: 2, ..skel };
        match random_instance(&low, Seed(0)) {
            Err(Error::Validation(v)) => assert_eq!(v, vec!["d > s violated: d = 2 < s = 3".to_string()]),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn params_doc_round_trip() {
        let p = hand_built(&["0", "z0"]);
        let doc = GnParamsDoc::from(&p);
        assert_eq!(doc.biforms, vec!["0".to_string(), "z0".to_string()]);
        assert_eq!(doc.to_params().unwrap(), p);
    }
}

//! Invariant suites run by `verify`. Each returns a JSON block and a list of
//! failures; an empty list means the suite passed.

use std::collections::BTreeMap;

use hesse_core::classify::{example_cubic, low_dim_hesse_suite, p4_cone_suite, p4_suite, FormKind};
use hesse_core::cone::{projection_lemma_check, HyperplaneChart};
use hesse_core::field::rational;
use hesse_core::gn::{random_instance, GnSkeleton};
use hesse_core::hessian::{hessian_matrix, symbolic_determinant, DetAlgorithm};
use hesse_core::psi::{build_psi, find_polar_relation, DEFAULT_MAX_RELATION_DEGREE};
use hesse_core::{Error, Exec, Monomial, PolyMatrix, QPoly, Rational, Seed};
use rand::Rng;
use serde_json::{json, Value};

use crate::analyze::{corrupt, psi_checks};
use crate::args::Common;
use crate::generate::{properties, properties_doc};
use crate::report;

pub const LOWDIM_COUNT: usize = 100;
pub const P4_CONES: usize = 20;
pub const GN_COUNT: usize = 10;
pub const PSI_COUNT: usize = 3;
pub const P4_COUNT: usize = 5;
pub const DET_MATRICES: usize = 50;
pub const PROJECTION_INSTANCES: usize = 10;
pub const PROJECTION_POINTS: usize = 10;
/// Non-cone draws required per skeleton where genericity applies, out of 10.
pub const GENERICITY_PER_TEN: usize = 9;

pub struct SuiteResult {
    pub value: Value,
    pub failures: Vec<String>,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

pub fn gn_skeletons() -> Vec<GnSkeleton> {
    let mut v: Vec<GnSkeleton> =
        [3, 4, 6].iter().map(|&d| GnSkeleton { n: 4, t: 2, m: 1, hdeg: 2, psideg: 1, d }).collect();
    // d = 3 = s leaves four quadrics in two variables, always dependent, so every draw is a cone
    v.push(GnSkeleton { n: 5, t: 3, m: 1, hdeg: 2, psideg: 1, d: 4 });
    v
}

pub fn lowdim(count: usize, seed: Seed, exec: Exec) -> Result<SuiteResult, Error> {
    let r = low_dim_hesse_suite(count, seed.derive("lowdim"), exec)?;
    let mut failures: Vec<String> = r.failures().iter().map(|c| format!("{}: {}", c.id, c.f)).collect();
    let mut per_space = Vec::new();
    for n in 1..=3 {
        let cases: Vec<_> = r.cases.iter().filter(|c| c.n == n).collect();
        let cones: Vec<_> = cases.iter().filter(|c| matches!(c.kind, FormKind::Cone { .. })).collect();
        let generic: Vec<_> = cases.iter().filter(|c| c.kind == FormKind::Generic).collect();
        let mut dims: BTreeMap<String, usize> = BTreeMap::new();
        for c in &cones {
            if let Some(k) = c.dim_z {
                *dims.entry(k.to_string()).or_default() += 1;
            }
        }
        per_space.push(json!({
            "n": n,
            "cones": cones.len(),
            "cones_vanishing": cones.iter().filter(|c| c.vanishes).count(),
            "cones_detected": cones.iter().filter(|c| c.cone).count(),
            "generic": generic.len(),
            "generic_vanishing": generic.iter().filter(|c| c.vanishes).count(),
            "generic_cones": generic.iter().filter(|c| c.cone).count(),
            "biconditional_exceptions": cases.iter().filter(|c| !c.biconditional()).count(),
            "cone_dim_z": dims,
            "non_reduced_cones": cones.iter().filter(|c| c.reduced == Some(false)).count(),
        }));
    }
    let p4 = p4_cone_suite(P4_CONES, seed.derive("p4-cones"), exec)?;
    for (i, (f, c)) in p4.iter().enumerate() {
        if !c.applicable {
            failures.push(format!("P4 cone {i}: dim Z(f) = {} > 2", c.dim_z));
        }
        if !c.passed() {
            failures.push(format!("P4 cone {i}: {f} has dim Z(f) = {} but fails the cone test", c.dim_z));
        }
    }
    let value = json!({
        "count": count,
        "spaces": per_space,
        "p4_cones": p4.iter().map(|(f, c)| json!({
            "f": report::poly(f, "x"),
            "dim_z": c.dim_z,
            "cone": c.cone,
            "vertex_dim": c.vertex_dim,
        })).collect::<Vec<_>>(),
        "failures": failures,
    });
    Ok(SuiteResult { value, failures })
}

/// Instances use seeds `seed, seed + 1, ...`.
pub fn gn(count: usize, seed: Seed, common: &Common) -> Result<SuiteResult, Error> {
    let mut failures = Vec::new();
    let mut blocks = Vec::new();
    for skel in gn_skeletons() {
        let mut instances = Vec::new();
        let mut first_draw_general = 0;
        let mut applies = false;
        for i in 0..count {
            let s = Seed(seed.0.wrapping_add(i as u64));
            let inst = random_instance(&skel, s)?;
            let p = properties(&inst, common, s)?;
            applies = inst.genericity_applies();
            if inst.cone_rejections == 0 {
                first_draw_general += 1;
            }
            for msg in p.failures() {
                failures.push(format!("{skel:?} seed {}: {msg}", s.0));
            }
            if applies && p.cone {
                failures.push(format!("{skel:?} seed {}: returned a cone", s.0));
            }
            instances.push(json!({
                "seed": s.0,
                "terms": inst.f.len(),
                "s": inst.s,
                "mu": inst.mu,
                "properties": properties_doc(&inst, &p),
            }));
        }
        // at least 9 in 10, rounded up
        let needed = (count * GENERICITY_PER_TEN).div_ceil(10);
        if applies && first_draw_general < needed {
            failures.push(format!("{skel:?}: only {first_draw_general} of {count} draws were not cones"));
        }
        blocks.push(json!({
            "skeleton": skel,
            "genericity_applies": applies,
            "general_draws": first_draw_general,
            "instances": instances,
        }));
    }
    Ok(SuiteResult { value: json!({ "count": count, "skeletons": blocks, "failures": failures }), failures })
}

pub fn psi(count: usize, seed: Seed, inject_fault: bool) -> Result<SuiteResult, Error> {
    let mut inputs = vec![("example-cubic".to_string(), example_cubic())];
    for i in 0..count {
        let d = 3 + (i % 2) as u32;
        let skel = GnSkeleton { n: 4, t: 2, m: 1, hdeg: 2, psideg: 1, d };
        let inst = random_instance(&skel, seed.derive("psi-instances").index(i as u64))?;
        inputs.push((format!("gn-4-2-1-d{d}-{i}"), inst.f));
    }
    let mut failures = Vec::new();
    let mut blocks = Vec::new();
    for (k, (id, f)) in inputs.iter().enumerate() {
        let rel = find_polar_relation(f, DEFAULT_MAX_RELATION_DEGREE)?;
        let Some(rel) = rel else {
            failures.push(format!("{id}: no polar relation up to degree {DEFAULT_MAX_RELATION_DEGREE}"));
            continue;
        };
        let mut map = build_psi(f, rel, false)?;
        if inject_fault {
            map = corrupt(&map);
        }
        let mut local = Vec::new();
        let checks = psi_checks(f, &map, seed.derive("psi").index(k as u64), &mut local)?;
        failures.extend(local.iter().map(|m| format!("{id}: {m}")));
        blocks.push(json!({
            "id": id,
            "f": report::poly(f, "x"),
            "relation": report::relation(&map.relation),
            "psi": report::psi(&map),
            "checks": checks,
        }));
    }
    Ok(SuiteResult { value: json!({ "instances": blocks, "failures": failures }), failures })
}

pub fn p4(count: usize, seed: Seed, exec: Exec) -> Result<SuiteResult, Error> {
    let reports = p4_suite(count, seed.derive("p4"), exec)?;
    let mut failures = Vec::new();
    for r in &reports {
        failures.extend(r.failures.iter().map(|m| format!("{}: {m}", r.id)));
        if r.plane_curve.is_none() {
            failures.push(format!("{}: no plane-curve check ran", r.id));
        }
    }
    let value = json!({
        "instances": reports.iter().map(report::classification).collect::<Vec<_>>(),
        "failures": failures,
    });
    Ok(SuiteResult { value, failures })
}

/// Seeded 4x4 matrix of polynomials of degree at most 2 in 3 variables.
pub fn seeded_poly_matrix(seed: Seed) -> PolyMatrix<Rational> {
    let mut rng = seed.rng();
    let mut rows = Vec::new();
    for _ in 0..4 {
        let mut row = Vec::new();
        for _ in 0..4 {
            let deg = rng.gen_range(0..=2);
            let mut terms = Vec::new();
            for m in Monomial::all_of_degree(3, deg) {
                if rng.gen_bool(0.6) {
                    terms.push((m, rational(rng.gen_range(-3..=3))));
                }
            }
            row.push(QPoly::from_terms(3, (), terms));
        }
        rows.push(row);
    }
    PolyMatrix::new(rows).expect("square")
}

/// `sum x_i f_i = d f` and `H x = (d - 1) grad f`.
pub fn euler_identities(f: &QPoly) -> Result<bool, Error> {
    let n1 = f.nvars();
    let d = f.degree().unwrap_or(0);
    let x: Vec<QPoly> = (0..n1).map(|i| QPoly::var(i, n1, ())).collect();
    let grad = f.gradient();
    let euler = x.iter().zip(&grad).fold(QPoly::zero(n1, ()), |acc, (xi, fi)| &acc + &(xi * fi));
    if euler != f.scale(&rational(d as i64)) {
        return Ok(false);
    }
    if d < 2 {
        return Ok(true);
    }
    let hx = hessian_matrix(f)?.mul_vec(&x)?;
    Ok(hx.iter().zip(&grad).all(|(a, b)| *a == b.scale(&rational(d as i64 - 1))))
}

pub fn kernels(seed: Seed) -> Result<SuiteResult, Error> {
    let mut failures = Vec::new();
    let mut agree = 0;
    for i in 0..DET_MATRICES {
        let m = seeded_poly_matrix(seed.derive("det").index(i as u64));
        let a = symbolic_determinant(&m, DetAlgorithm::MinorExpansion)?;
        let b = symbolic_determinant(&m, DetAlgorithm::FractionFree)?;
        if a == b {
            agree += 1;
        } else {
            failures.push(format!("determinant algorithms disagree on matrix {i}"));
        }
    }

    let mut polys = vec![example_cubic()];
    for skel in gn_skeletons() {
        for i in 0..2 {
            polys.push(random_instance(&skel, seed.derive("kernel-gn").index(i))?.f);
        }
    }
    let euler_ok = polys.iter().map(euler_identities).collect::<Result<Vec<_>, _>>()?;
    for (i, ok) in euler_ok.iter().enumerate() {
        if !ok {
            failures.push(format!("Euler identities fail on polynomial {i}"));
        }
    }

    let mut projection = Vec::new();
    for i in 0..PROJECTION_INSTANCES {
        let d = 3 + (i % 2) as u32;
        let skel = GnSkeleton { n: 4, t: 2, m: 1, hdeg: 2, psideg: 1, d };
        let s = seed.derive("projection").index(i as u64);
        let f = random_instance(&skel, s)?.f;
        let mut rng = s.rng();
        let check = loop {
            let dual: Vec<Rational> = (0..5).map(|_| rational(rng.gen_range(-3..=3))).collect();
            if dual.iter().all(|c| *c == rational(0)) {
                continue;
            }
            let chart = HyperplaneChart::random(dual, s)?;
            match projection_lemma_check(&f, &chart, PROJECTION_POINTS, s) {
                Err(Error::HyperplaneInHypersurface) => continue,
                other => break other?,
            }
        };
        if !check.passed {
            failures.push(format!("projection check fails on instance {i}"));
        }
        projection.push(json!({ "checked": check.checked, "skipped": check.skipped, "passed": check.passed }));
    }
    let value = json!({
        "determinants": { "matrices": DET_MATRICES, "agree": agree },
        "euler": { "polynomials": polys.len(), "passed": euler_ok.iter().filter(|x| **x).count() },
        "projection": projection,
        "failures": failures,
    });
    Ok(SuiteResult { value, failures })
}

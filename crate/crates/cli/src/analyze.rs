use std::time::Instant;

use hesse_core::classify::{p4_plane_curve_check, p4_section_check, DEFAULT_IMAGE_SAMPLES, DEFAULT_SECTIONS};
use hesse_core::cone::cone_test;
use hesse_core::hessian::{hessian_vanishes, polar_image_dim, HessianMode, SampleDomain, DEFAULT_RANK_SAMPLES};
use hesse_core::poly::parse;
use hesse_core::psi::{
    build_psi, check_fiber_lines, check_inclusions, check_invariance, check_second_derivative_relation,
    find_polar_relation, sample_image, taylor_check, CheckMode, PsiMap,
};
use hesse_core::{Error, PrimeField, QPoly, Seed};
use serde_json::{json, Map, Value};

use crate::args::{Common, FieldChoice};
use crate::report::{self, Report};
use crate::CliError;

pub const IMAGE_SAMPLES: usize = 16;
pub const FIBER_SAMPLES: usize = 4;
pub const SAMPLED_INVARIANCE_POINTS: u32 = 8;
/// Integer sampling range `[-B, B]` for `--field rational`.
pub const RATIONAL_SAMPLE_BOUND: u64 = 1 << 20;

pub fn sample_domain(field: FieldChoice) -> SampleDomain {
    match field {
        FieldChoice::Rational => SampleDomain::Integers { bound: RATIONAL_SAMPLE_BOUND },
        FieldChoice::Prime(p) => SampleDomain::Prime(PrimeField::new(p).expect("validated by the argument parser")),
    }
}

/// Symbolic determinants up to 6 variables and degree 6, unless forced.
pub fn hessian_mode(f: &QPoly, common: &Common) -> HessianMode {
    let d = f.degree().unwrap_or(0);
    if common.symbolic || (f.nvars() <= 6 && d <= 6) {
        HessianMode::Symbolic
    } else {
        HessianMode::Probabilistic { trials: common.trials, domain: sample_domain(common.field) }
    }
}

/// Replace `h_0` by `h_0 + x_0^e`, which breaks every identity.
pub fn corrupt(psi: &PsiMap) -> PsiMap {
    let n1 = psi.nvars();
    let e = psi.degree().unwrap_or(1);
    let mut comps = psi.components.clone();
    comps[0] = &comps[0] + &QPoly::var(0, n1, ()).pow(e);
    psi.with_components(comps)
}

/// Every identity of the psi map, with failures appended to `failures`.
pub fn psi_checks(f: &QPoly, psi: &PsiMap, seed: Seed, failures: &mut Vec<String>) -> Result<Value, Error> {
    let mut out = Map::new();
    let second = check_second_derivative_relation(f, psi)?;
    if !second {
        failures.push("H_f h != 0".into());
    }
    out.insert("hessian_times_h".into(), json!(second));

    let d = f.degree().unwrap_or(0);
    let e = psi.degree().unwrap_or(0);
    let mode = if d * e <= 8 && f.nvars() <= 6 {
        CheckMode::Symbolic
    } else {
        CheckMode::Sampled { points: SAMPLED_INVARIANCE_POINTS }
    };
    out.insert(
        "invariance_mode".into(),
        json!(match mode {
            CheckMode::Symbolic => "symbolic",
            CheckMode::Sampled { .. } => "sampled",
        }),
    );
    let inv = check_invariance(f, psi, mode, seed.derive("invariance-f"))?;
    if !inv.holds() {
        failures.push("f is not invariant along psi".into());
    }
    if !inv.consistent() {
        failures.push("sum rule and translation disagree for f".into());
    }
    out.insert("invariance_f".into(), report::invariance(&inv));

    let mut comps = Vec::new();
    for (k, h) in psi.components.iter().enumerate() {
        if h.is_zero() {
            comps.push(json!({ "index": k, "zero": true }));
            continue;
        }
        let c = check_invariance(h, psi, mode, seed.derive("invariance-h").index(k as u64))?;
        let t = taylor_check(h, psi)?;
        if !c.holds() {
            failures.push(format!("h_{k} is not invariant along psi"));
        }
        if !t {
            failures.push(format!("h_{k}(h) != 0"));
        }
        comps.push(json!({ "index": k, "invariance": report::invariance(&c), "vanishes_on_h": t }));
    }
    out.insert("components".into(), Value::Array(comps));

    match sample_image(psi, IMAGE_SAMPLES, seed.derive("image")) {
        Ok(img) => {
            let inc = check_inclusions(f, psi, &img, false)?;
            if !inc.passed() {
                failures.push(format!(
                    "image points outside the base locus {:?} or Sing(X) {:?}",
                    inc.base_locus_violators, inc.sing_violators
                ));
            }
            out.insert("image".into(), report::mat_q(&img.points));
            out.insert("inclusions".into(), report::inclusions(&inc));
            let fib = check_fiber_lines(f, psi, &img, FIBER_SAMPLES, seed.derive("fibers"))?;
            if !fib.passed() {
                failures.push(format!("fiber lines: {}", fib.failures.join("; ")));
            }
            out.insert("fibers".into(), report::fibers(&fib));
        }
        Err(Error::AllSamplesDegenerate) => {
            failures.push("every image sample hit the base locus".into());
        }
        Err(e) => return Err(e),
    }
    Ok(Value::Object(out))
}

/// `P^4` plane-curve and hyperplane-section fragments.
pub fn p4_fragments(f: &QPoly, psi: &PsiMap, seed: Seed, failures: &mut Vec<String>) -> Result<Value, Error> {
    let curve = p4_plane_curve_check(f, psi, DEFAULT_IMAGE_SAMPLES, seed.derive("classify"))?;
    let mut out = Map::new();
    out.insert("plane_curve".into(), report::plane_curve(&curve));
    if curve.span_rank != 3 {
        failures.push(format!("image span has rank {}, expected 3", curve.span_rank));
    } else if curve.curve.is_none() {
        failures.push("no plane curve found".into());
    } else {
        let sections = p4_section_check(f, &curve, DEFAULT_SECTIONS, seed.derive("classify"))?;
        for (i, s) in sections.iter().enumerate() {
            if !s.passed(curve.curve_degree) {
                failures.push(format!("hyperplane section {i} failed"));
            }
        }
        out.insert(
            "sections".into(),
            Value::Array(sections.iter().map(|s| report::section(s, curve.curve_degree)).collect()),
        );
    }
    Ok(Value::Object(out))
}

pub fn analyze(text: &str, max_relation_degree: u32, inject_fault: bool, common: &Common) -> Result<Report, CliError> {
    let t0 = Instant::now();
    let seed = Seed(common.seed);
    let mut r = Report::new("analyze");
    r.input.insert("poly".into(), json!(text));
    r.input.insert("field".into(), json!(common.field.to_string()));
    r.input.insert("symbolic".into(), json!(common.symbolic));
    r.input.insert("trials".into(), json!(common.trials));
    r.input.insert("max_relation_degree".into(), json!(max_relation_degree));
    r.seeds.insert("root".into(), json!(common.seed));

    let f = parse(text, "x")?;
    if f.is_zero() {
        return Err(Error::ZeroPolynomial.into());
    }
    if !f.is_homogeneous() {
        return Err(Error::NotHomogeneous.into());
    }
    r.results.insert("f".into(), report::poly(&f, "x"));
    r.results.insert("nvars".into(), json!(f.nvars()));
    r.results.insert("degree".into(), json!(f.degree()));

    let t = Instant::now();
    let verdict = hessian_vanishes(&f, hessian_mode(&f, common), seed.derive("hessian"))?;
    r.time("hessian", t.elapsed());
    r.results.insert("hessian".into(), report::hessian(&verdict));

    let vertex = cone_test(&f)?;
    r.results.insert("cone".into(), report::vertex(&vertex));
    // a linear form has constant partials, so its polar image is a point
    let dim_z = if f.degree() >= Some(2) { polar_image_dim(&f, DEFAULT_RANK_SAMPLES, seed.derive("dimz"))? } else { 0 };
    r.results.insert("dim_z".into(), json!(dim_z));
    if f.nvars() <= 4 && verdict.vanishes != vertex.is_cone() {
        r.fail("vanishing Hessian and cone disagree in at most 4 variables");
    }
    if !verdict.vanishes || vertex.is_cone() {
        r.time("total", t0.elapsed());
        return Ok(r);
    }

    let t = Instant::now();
    let rel = find_polar_relation(&f, max_relation_degree)?;
    r.time("polar_relation", t.elapsed());
    let Some(rel) = rel else {
        r.results.insert("polar_relation".into(), Value::Null);
        r.results.insert(
            "note".into(),
            json!(format!("no polar relation up to degree {max_relation_degree}")),
        );
        r.time("total", t0.elapsed());
        return Ok(r);
    };
    r.results.insert("polar_relation".into(), report::relation(&rel));
    let mut psi = build_psi(&f, rel, false)?;
    if inject_fault {
        psi = corrupt(&psi);
        r.input.insert("inject_fault".into(), json!(true));
    }
    r.results.insert("psi".into(), report::psi(&psi));

    let t = Instant::now();
    let mut failures = Vec::new();
    let checks = psi_checks(&f, &psi, seed.derive("psi"), &mut failures)?;
    r.results.insert("psi_checks".into(), checks);
    r.time("psi_checks", t.elapsed());

    if f.nvars() == 5 {
        let t = Instant::now();
        let frag = p4_fragments(&f, &psi, seed, &mut failures)?;
        r.results.insert("classification".into(), frag);
        r.time("classification", t.elapsed());
    }
    for msg in failures {
        r.fail(msg);
    }
    r.time("total", t0.elapsed());
    Ok(r)
}

//! Acceptance run: one PASS/FAIL line per criterion. Exits nonzero if any fails.

use std::process::Command;
use std::time::{Duration, Instant};

use hesse_core::classify::{low_dim_hesse_suite, p4_cone_suite, p4_suite, FormKind};
use hesse_core::gn::random_instance;
use hesse_core::hessian::{hessian_vanishes, HessianMode, VerdictMode, DEFAULT_TRIALS};
use hesse_core::poly::parse_in;
use hesse_core::{Exec, QPoly, Seed};
use hesse_lab::analyze::analyze;
use hesse_lab::args::{Common, FieldChoice};
use hesse_lab::generate::error_threshold;
use hesse_lab::report::without_timings;
use hesse_lab::suites::{euler_identities, gn_skeletons, kernels, GENERICITY_PER_TEN};
use serde_json::Value;

const CUBIC: &str = "x0*x3^2 + 2*x1*x3*x4 + x2*x4^2";
const LIMIT_1: Duration = Duration::from_secs(10);
const LIMIT_2: Duration = Duration::from_secs(300);
const LIMIT_4: Duration = Duration::from_secs(120);
const LIMIT_5: Duration = Duration::from_secs(60);
const LIMIT_6: Duration = Duration::from_secs(300);
const LIMIT_7: Duration = Duration::from_secs(120);
const GN_SEEDS: u64 = 10;
const LOWDIM_COUNT: usize = 100;
const P4_CONES: usize = 20;
const P4_INSTANCES: usize = 5;
const MIN_IMAGE_SAMPLES: usize = 12;
const SECTIONS: usize = 5;
const MAX_CURVE_DEGREE: u32 = 6;
const PROJECTION_POINTS: usize = 10;
const PROJECTION_INSTANCES: usize = 10;

fn common() -> Common {
    Common {
        seed: 0,
        json: None,
        field: FieldChoice::Prime(hesse_core::field::DEFAULT_MODULUS),
        symbolic: false,
        trials: DEFAULT_TRIALS,
    }
}

struct Outcome {
    ok: bool,
    detail: String,
}

fn check(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome { ok, detail: detail.into() }
}

fn criterion_1() -> Outcome {
    let r = match analyze(CUBIC, 4, false, &common()) {
        Ok(r) => r.to_value(),
        Err(e) => return check(false, e.to_string()),
    };
    let res = &r["results"];
    let g = res["polar_relation"]["g"].as_str().unwrap_or("");
    let g = parse_in(g, "y", 5).ok();
    let target = parse_in("y1^2 - 4*y0*y2", "y", 5).unwrap();
    let relation_ok = g.is_some_and(|g| proportional(&g, &target));
    let checks = &res["psi_checks"];
    let mut bad = Vec::new();
    let mut want = |ok: bool, what: &str| {
        if !ok {
            bad.push(what.to_string());
        }
    };
    want(res["hessian"]["mode"] == "symbolic" && res["hessian"]["determinant"] == "0", "symbolic determinant");
    want(res["hessian"]["vanishes"] == true, "vanishing");
    want(res["cone"]["is_cone"] == false, "cone");
    want(res["dim_z"] == 3, "dim Z");
    want(relation_ok && res["polar_relation"]["degree"] == 2, "relation");
    want(checks["invariance_mode"] == "symbolic", "symbolic invariance");
    want(checks["hessian_times_h"] == true, "H h = 0");
    want(checks["invariance_f"]["sum_rule"] == true && checks["invariance_f"]["translation"] == true, "invariance");
    let comps_ok = checks["components"].as_array().is_some_and(|cs| {
        cs.iter().all(|c| {
            c["zero"] == true
                || (c["vanishes_on_h"] == true
                    && c["invariance"]["sum_rule"] == true
                    && c["invariance"]["translation"] == true)
        })
    });
    want(comps_ok, "component identities");
    want(checks["inclusions"]["passed"] == true, "inclusions");
    want(checks["fibers"]["fiber_cone"] == true && checks["fibers"]["lines_in_base_locus"] == true, "fibers");
    want(res["passed"] == true, "report");
    check(bad.is_empty(), if bad.is_empty() { format!("g = {}", res["polar_relation"]["g"]) } else { bad.join(", ") })
}

fn proportional(a: &QPoly, b: &QPoly) -> bool {
    let (_, pa) = a.primitive();
    let (_, pb) = b.primitive();
    pa == pb || pa == -pb
}

fn criteria_2_3() -> (Outcome, Outcome) {
    let threshold = error_threshold();
    let mut failures = Vec::new();
    let mut generic = Vec::new();
    let mut instances = 0;
    for skel in gn_skeletons() {
        let mut general = 0;
        let mut logged = 0;
        let mut applies = false;
        for s in 0..GN_SEEDS {
            let inst = match random_instance(&skel, Seed(s)) {
                Ok(i) => i,
                Err(e) => {
                    failures.push(format!("{skel:?} seed {s}: {e}"));
                    continue;
                }
            };
            instances += 1;
            applies = inst.genericity_applies();
            let mode = if skel.n == 4 { HessianMode::Symbolic } else { HessianMode::probabilistic(DEFAULT_TRIALS) };
            let v = hessian_vanishes(&inst.f, mode, Seed(s)).unwrap();
            let mode_ok = match skel.n {
                4 => v.mode == VerdictMode::Symbolic,
                _ => v.mode == VerdictMode::Probabilistic && v.error_bound < threshold,
            };
            if !v.vanishes || !mode_ok {
                failures.push(format!("{skel:?} seed {s}: vanishing {} mode {:?} bound {}", v.vanishes, v.mode, v.error_bound));
            }
            if inst.core_multiplicity() != inst.expected_core_multiplicity() {
                failures.push(format!("{skel:?} seed {s}: core {} != {}", inst.core_multiplicity(), inst.expected_core_multiplicity()));
            }
            if inst.cone_rejections == 0 {
                general += 1;
            }
            logged += inst.cone_rejections;
        }
        if applies {
            generic.push((skel, general, logged));
        }
    }
    let c2 = check(failures.is_empty(), if failures.is_empty() { format!("{instances} instances") } else { failures.join("; ") });
    let needed = GN_SEEDS as usize * GENERICITY_PER_TEN / 10;
    let ok3 = generic.len() == gn_skeletons().len() && generic.iter().all(|(_, g, _)| *g >= needed);
    let detail = generic
        .iter()
        .map(|(s, g, l)| format!("({},{},{}) d={}: {g}/{GN_SEEDS} non-cones, {l} non-general draws logged", s.n, s.t, s.m, s.d))
        .collect::<Vec<_>>()
        .join("; ");
    (c2, check(ok3, detail))
}

fn criterion_4(polys: &mut Vec<QPoly>) -> Outcome {
    let r = match low_dim_hesse_suite(LOWDIM_COUNT, Seed(0), Exec::default()) {
        Ok(r) => r,
        Err(e) => return check(false, e.to_string()),
    };
    polys.extend(r.cases.iter().map(|c| c.f.clone()));
    let exceptions = r.cases.iter().filter(|c| !c.biconditional()).count();
    let missed = r.cases.iter().filter(|c| matches!(c.kind, FormKind::Cone { .. }) && !c.cone).count();
    let p3_cones: Vec<_> = r.cases.iter().filter(|c| c.n == 3 && matches!(c.kind, FormKind::Cone { .. })).collect();
    let bad_dims = p3_cones.iter().filter(|c| !matches!(c.dim_z, Some(1 | 2))).count();
    let counts_ok = (1..=3).all(|n| {
        let cs = r.cases.iter().filter(|c| c.n == n);
        cs.clone().filter(|c| c.kind == FormKind::Generic).count() == LOWDIM_COUNT
            && cs.filter(|c| c.kind != FormKind::Generic).count() == LOWDIM_COUNT
    });
    check(
        exceptions == 0 && missed == 0 && bad_dims == 0 && counts_ok,
        format!(
            "{} forms, {exceptions} biconditional exceptions, {missed} undetected cones, {bad_dims} P3 cones with dim Z outside {{1,2}}, {} generic with vanishing Hessian",
            r.cases.len(),
            r.degenerate_generic()
        ),
    )
}

fn criterion_5() -> Outcome {
    match p4_cone_suite(P4_CONES, Seed(0), Exec::default()) {
        Ok(rs) => {
            let small = rs.iter().filter(|(_, c)| c.dim_z <= 2).count();
            let passed = rs.iter().filter(|(_, c)| c.cone).count();
            check(rs.len() == P4_CONES && small == P4_CONES && passed == P4_CONES, format!("{passed}/{P4_CONES} pass the cone test, {small} with dim Z <= 2"))
        }
        Err(e) => check(false, e.to_string()),
    }
}

fn criterion_6(polys: &mut Vec<QPoly>) -> Outcome {
    let reports = match p4_suite(P4_INSTANCES, Seed(0), Exec::default()) {
        Ok(r) => r,
        Err(e) => return check(false, e.to_string()),
    };
    let mut bad = Vec::new();
    for r in &reports {
        polys.push(r.f.clone());
        let Some(c) = &r.plane_curve else {
            bad.push(format!("{}: no curve check", r.id));
            continue;
        };
        if c.samples < MIN_IMAGE_SAMPLES || c.span_rank != 3 {
            bad.push(format!("{}: {} samples, span rank {}", r.id, c.samples, c.span_rank));
        }
        if !c.curve_degree.is_some_and(|e| e <= MAX_CURVE_DEGREE) {
            bad.push(format!("{}: no curve of degree <= {MAX_CURVE_DEGREE}", r.id));
        }
        if r.sections.len() != SECTIONS || !r.sections.iter().all(|s| s.passed(c.curve_degree)) {
            bad.push(format!("{}: sections {:?}", r.id, r.failures));
        }
        if !r.passed() {
            bad.push(format!("{}: {:?}", r.id, r.failures));
        }
    }
    let degrees: Vec<String> = reports
        .iter()
        .map(|r| format!("{}", r.plane_curve.as_ref().and_then(|c| c.curve_degree).unwrap_or(0)))
        .collect();
    check(
        bad.is_empty() && reports.len() == P4_INSTANCES + 1,
        if bad.is_empty() { format!("{} inputs, curve degrees [{}]", reports.len(), degrees.join(", ")) } else { bad.join("; ") },
    )
}

fn criterion_7(polys: &[QPoly]) -> Outcome {
    let k = match kernels(Seed(0)) {
        Ok(k) => k,
        Err(e) => return check(false, e.to_string()),
    };
    let v = &k.value;
    let det_ok = v["determinants"]["agree"] == 50;
    let euler_fail = polys.iter().filter(|f| !euler_identities(f).unwrap_or(false)).count();
    let proj = v["projection"].as_array().cloned().unwrap_or_default();
    let proj_ok = proj.len() == PROJECTION_INSTANCES
        && proj.iter().all(|p| {
            p["passed"] == true && p["checked"].as_u64().unwrap_or(0) + p["skipped"].as_u64().unwrap_or(0) == PROJECTION_POINTS as u64
        });
    let checked: u64 = proj.iter().map(|p| p["checked"].as_u64().unwrap_or(0)).sum();
    check(
        k.passed() && det_ok && euler_fail == 0 && proj_ok,
        format!(
            "50/50 determinants agree: {det_ok}; Euler and H x on {} polynomials, {euler_fail} failures; projection {checked} points checked on {} instances",
            polys.len(),
            proj.len()
        ),
    )
}

fn run_verify() -> Result<Value, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_hesse-lab"))
        .args(["verify", "--suite", "all", "--seed", "42"])
        .output()
        .map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!("exit {:?}", out.status.code()));
    }
    serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())
}

fn criterion_8() -> Outcome {
    match (run_verify(), run_verify()) {
        (Ok(a), Ok(b)) => {
            let (a, b) = (without_timings(&a), without_timings(&b));
            let same = serde_json::to_vec(&a).unwrap() == serde_json::to_vec(&b).unwrap();
            check(same, format!("{} bytes, identical: {same}", serde_json::to_vec(&a).unwrap().len()))
        }
        (Err(e), _) | (_, Err(e)) => check(false, e),
    }
}

fn report(n: &str, o: Outcome, elapsed: Duration, limit: Option<Duration>, all: &mut bool) {
    let in_time = limit.is_none_or(|l| elapsed <= l);
    let ok = o.ok && in_time;
    *all &= ok;
    let limit = limit.map(|l| format!(" (limit {}s)", l.as_secs())).unwrap_or_default();
    println!(
        "criterion {n}: {} - {} [{:.2}s{limit}]",
        if ok { "PASS" } else { "FAIL" },
        o.detail,
        elapsed.as_secs_f64()
    );
}

fn main() {
    let mut all = true;
    let mut polys = vec![hesse_core::classify::example_cubic()];

    let t = Instant::now();
    let o = criterion_1();
    report("1", o, t.elapsed(), Some(LIMIT_1), &mut all);

    let t = Instant::now();
    let (o2, o3) = criteria_2_3();
    let e = t.elapsed();
    report("2", o2, e, Some(LIMIT_2), &mut all);
    report("3", o3, e, Some(LIMIT_2), &mut all);
    for skel in gn_skeletons() {
        for s in 0..GN_SEEDS {
            if let Ok(i) = random_instance(&skel, Seed(s)) {
                polys.push(i.f);
            }
        }
    }

    let t = Instant::now();
    let o = criterion_4(&mut polys);
    report("4", o, t.elapsed(), Some(LIMIT_4), &mut all);

    let t = Instant::now();
    report("5", criterion_5(), t.elapsed(), Some(LIMIT_5), &mut all);

    let t = Instant::now();
    let o = criterion_6(&mut polys);
    report("6", o, t.elapsed(), Some(LIMIT_6), &mut all);

    let t = Instant::now();
    let o = criterion_7(&polys);
    report("7", o, t.elapsed(), Some(LIMIT_7), &mut all);

    let t = Instant::now();
    report("8", criterion_8(), t.elapsed(), None, &mut all);

    if !all {
        std::process::exit(1);
    }
}

use std::fs;
use std::time::Instant;

use hesse_core::cone::cone_test;
use hesse_core::field::ratio;
use hesse_core::gn::{build_f, random_instance, GnInstance, GnParamsDoc, GnSkeleton};
use hesse_core::hessian::{hessian_vanishes, HessianMode, HessianVerdict};
use hesse_core::{Error, Rational, Seed};
use serde_json::{json, Value};

use crate::analyze::sample_domain;
use crate::args::{Common, GenerateArgs};
use crate::report::{self, Report};
use crate::CliError;

/// Largest admissible false-positive bound for a probabilistic verdict.
pub fn error_threshold() -> Rational {
    ratio(1, 1 << 40)
}

/// Symbolic for at most 5 variables, probabilistic above, unless forced.
pub fn instance_mode(inst: &GnInstance, common: &Common) -> HessianMode {
    if common.symbolic || inst.params.n <= 4 {
        HessianMode::Symbolic
    } else {
        HessianMode::Probabilistic { trials: common.trials, domain: sample_domain(common.field) }
    }
}

pub struct Properties {
    pub verdict: HessianVerdict,
    pub cone: bool,
    pub core: u32,
    pub expected_core: u32,
    pub laplace: bool,
}

impl Properties {
    pub fn failures(&self) -> Vec<String> {
        let mut v = Vec::new();
        if !self.verdict.vanishes {
            v.push("Hessian does not vanish".into());
        }
        if self.verdict.error_bound >= error_threshold() {
            v.push(format!("error bound {} is not below 2^-40", self.verdict.error_bound));
        }
        if self.core != self.expected_core {
            v.push(format!("core multiplicity {} != d - mu = {}", self.core, self.expected_core));
        }
        if !self.laplace {
            v.push("Laplace expansion of Q is inconsistent".into());
        }
        v
    }
}

pub fn properties(inst: &GnInstance, common: &Common, seed: Seed) -> Result<Properties, Error> {
    Ok(Properties {
        verdict: hessian_vanishes(&inst.f, instance_mode(inst, common), seed.derive("hessian"))?,
        cone: cone_test(&inst.f)?.is_cone(),
        core: inst.core_multiplicity(),
        expected_core: inst.expected_core_multiplicity(),
        laplace: inst.laplace_consistent(),
    })
}

pub fn instance_doc(inst: &GnInstance, seed: Option<Seed>) -> Value {
    json!({
        "params": GnParamsDoc::from(&inst.params),
        "f": report::poly(&inst.f, "x"),
        "q": report::polys(&inst.q, "x"),
        "s": inst.s,
        "mu": inst.mu,
        "attempts": inst.attempts,
        "cone_rejections": inst.cone_rejections,
        "seed": seed.map(|s| s.0),
    })
}

pub fn properties_doc(inst: &GnInstance, p: &Properties) -> Value {
    json!({
        "hessian": report::hessian(&p.verdict),
        "cone": p.cone,
        "core_multiplicity": p.core,
        "expected_core_multiplicity": p.expected_core,
        "laplace_consistent": p.laplace,
        "genericity_applies": inst.genericity_applies(),
        "non_general_draws": inst.cone_rejections,
    })
}

pub fn generate(args: &GenerateArgs, common: &Common) -> Result<Report, CliError> {
    let t0 = Instant::now();
    let mut r = Report::new("generate");
    r.seeds.insert("root".into(), json!(common.seed));
    let (inst, seed) = match &args.params {
        Some(path) => {
            r.input.insert("params".into(), json!(path.display().to_string()));
            let doc: GnParamsDoc = serde_json::from_str(&fs::read_to_string(path)?)?;
            (build_f(&doc.to_params()?)?, None)
        }
        None => {
            let skel = GnSkeleton { n: args.n, t: args.t, m: args.m, hdeg: args.hdeg, psideg: args.psideg, d: args.d };
            r.input.insert("skeleton".into(), json!(skel));
            let seed = Seed(common.seed);
            (random_instance(&skel, seed)?, Some(seed))
        }
    };
    r.time("build", t0.elapsed());
    let doc = instance_doc(&inst, seed);
    if let Some(path) = &args.instance {
        fs::write(path, serde_json::to_string_pretty(&doc)?)?;
    }
    let t = Instant::now();
    let props = properties(&inst, common, Seed(common.seed))?;
    r.time("properties", t.elapsed());
    for msg in props.failures() {
        r.fail(msg);
    }
    r.results.insert("instance".into(), doc);
    r.results.insert("properties".into(), properties_doc(&inst, &props));
    r.time("total", t0.elapsed());
    Ok(r)
}

/// `n,t,m,hdeg,psideg,d` separated by `;`. Every malformed or invalid entry is reported.
pub fn parse_types(text: &str) -> Result<Vec<GnSkeleton>, Error> {
    let mut out = Vec::new();
    let mut problems = Vec::new();
    for (i, item) in text.split(';').map(str::trim).filter(|s| !s.is_empty()).enumerate() {
        let nums: Result<Vec<u32>, _> = item.split(',').map(|x| x.trim().parse::<u32>()).collect();
        match nums.as_deref() {
            Ok(&[n, t, m, hdeg, psideg, d]) => {
                let skel = GnSkeleton { n: n as usize, t: t as usize, m: m as usize, hdeg, psideg, d };
                match skel.validate() {
                    Ok(()) => out.push(skel),
                    Err(Error::Validation(v)) => problems.extend(v.into_iter().map(|m| format!("type {i} ({item}): {m}"))),
                    Err(e) => problems.push(format!("type {i} ({item}): {e}")),
                }
            }
            _ => problems.push(format!("type {i} ({item}): expected six integers n,t,m,hdeg,psideg,d")),
        }
    }
    if !problems.is_empty() {
        return Err(Error::Validation(problems));
    }
    Ok(out)
}

fn type_label(s: &GnSkeleton) -> String {
    format!("{},{},{},{},{},{}", s.n, s.t, s.m, s.hdeg, s.psideg, s.d)
}

pub fn catalog(types: &str, count: usize, common: &Common) -> Result<(Value, bool), CliError> {
    let skels = parse_types(types)?;
    let mut entries = Vec::new();
    let mut passed = true;
    for skel in &skels {
        let label = type_label(skel);
        for i in 0..count {
            let seed = Seed(common.seed).derive(&label).index(i as u64);
            let inst = random_instance(skel, seed)?;
            let p = properties(&inst, common, seed)?;
            passed &= p.failures().is_empty();
            entries.push(json!({
                "type": [skel.n, skel.t, skel.m, skel.hdeg, skel.psideg],
                "d": skel.d,
                "s": inst.s,
                "mu": inst.mu,
                "seed": seed.0,
                "f": report::poly(&inst.f, "x"),
                "cone": p.cone,
                "core_multiplicity": p.core,
                "expected_core_multiplicity": p.expected_core,
                "hessian_mode": report::hessian(&p.verdict)["mode"],
                "vanishes": p.verdict.vanishes,
                "error_bound": report::q(&p.verdict.error_bound),
                "non_general_draws": inst.cone_rejections,
            }));
        }
    }
    Ok((Value::Array(entries), passed))
}

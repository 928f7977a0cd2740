//! JSON report assembly. Polynomials are grammar strings, rationals are
//! strings, and timings live under their own key so they can be dropped
//! before comparing reports.

use std::time::Duration;

use hesse_core::classify::{ClassificationReport, PlaneCurveReport, SectionReport, Tangency};
use hesse_core::cone::VertexSubspace;
use hesse_core::hessian::{HessianVerdict, VerdictMode};
use hesse_core::psi::{FiberReport, InclusionReport, InvarianceCheck, PolarRelation, PsiMap};
use hesse_core::{QPoly, Rational};
use serde_json::{json, Map, Value};

pub const SCHEMA: &str = "hesse-lab/1";

#[derive(Debug, Default)]
pub struct Report {
    pub input: Map<String, Value>,
    pub results: Map<String, Value>,
    pub seeds: Map<String, Value>,
    pub timings: Map<String, Value>,
    pub failures: Vec<String>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        let mut r = Report::default();
        r.input.insert("command".into(), json!(command));
        r
    }

    pub fn time(&mut self, key: &str, d: Duration) {
        self.timings.insert(key.into(), json!(d.as_secs_f64()));
    }

    pub fn fail(&mut self, msg: impl Into<String>) {
        self.failures.push(msg.into());
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn to_value(&self) -> Value {
        let mut results = self.results.clone();
        results.insert("passed".into(), json!(self.passed()));
        results.insert("failures".into(), json!(self.failures));
        json!({
            "schema": SCHEMA,
            "input": self.input,
            "results": results,
            "seeds": self.seeds,
            "timings": self.timings,
        })
    }
}

/// The report without its timing block, for byte comparisons.
pub fn without_timings(v: &Value) -> Value {
    let mut v = v.clone();
    if let Some(obj) = v.as_object_mut() {
        obj.remove("timings");
    }
    v
}

pub fn q(x: &Rational) -> Value {
    json!(x.to_string())
}

pub fn vec_q(v: &[Rational]) -> Value {
    Value::Array(v.iter().map(q).collect())
}

pub fn mat_q(rows: &[Vec<Rational>]) -> Value {
    Value::Array(rows.iter().map(|r| vec_q(r)).collect())
}

pub fn poly(p: &QPoly, prefix: &str) -> Value {
    json!(p.display_with(prefix).to_string())
}

pub fn polys(ps: &[QPoly], prefix: &str) -> Value {
    Value::Array(ps.iter().map(|p| poly(p, prefix)).collect())
}

pub fn hessian(v: &HessianVerdict) -> Value {
    json!({
        "mode": match v.mode { VerdictMode::Symbolic => "symbolic", VerdictMode::Probabilistic => "probabilistic" },
        "vanishes": v.vanishes,
        "trials": v.trials,
        "modulus": v.modulus.map(|m| m.to_string()),
        "error_bound": q(&v.error_bound),
        "degree_bound": v.degree_bound,
        "determinant": v.determinant.as_ref().map(|d| poly(d, "x")),
    })
}

pub fn vertex(v: &VertexSubspace) -> Value {
    json!({
        "is_cone": v.is_cone(),
        "vertex_dim": v.projective_dim(),
        "vertex_basis": mat_q(&v.basis.vectors),
    })
}

pub fn relation(r: &PolarRelation) -> Value {
    json!({ "g": poly(&r.g, "y"), "degree": r.degree, "linear": r.is_linear() })
}

pub fn psi(p: &PsiMap) -> Value {
    json!({
        "raw": polys(&p.raw, "x"),
        "rho": poly(&p.rho, "x"),
        "components": polys(&p.components, "x"),
    })
}

pub fn invariance(c: &InvarianceCheck) -> Value {
    json!({ "sum_rule": c.sum_rule, "translation": c.translation, "consistent": c.consistent() })
}

pub fn inclusions(r: &InclusionReport) -> Value {
    json!({
        "checked": r.checked,
        "passed": r.passed(),
        "base_locus_violators": r.base_locus_violators,
        "sing_violators": r.sing_violators,
        "cone_caveat": r.cone_caveat,
    })
}

pub fn fibers(r: &FiberReport) -> Value {
    json!({
        "image_points": r.image_points,
        "preimages": r.preimages,
        "witnesses": r.witnesses,
        "fiber_cone": r.fiber_cone,
        "lines_in_base_locus": r.lines_in_base_locus,
        "failures": r.failures,
    })
}

pub fn plane_curve(c: &PlaneCurveReport) -> Value {
    json!({
        "samples": c.samples,
        "span_rank": c.span_rank,
        "span_basis": mat_q(&c.basis),
        "coordinates": c.pivots,
        "curve": c.curve.as_ref().map(|p| poly(p, "z")),
        "curve_degree": c.curve_degree,
        "irreducibility_unverified": c.irreducibility_unverified,
        "collapsed": c.collapsed,
    })
}

pub fn tangency(t: &Tangency) -> Value {
    match t {
        Tangency::Tangent { point } => json!({ "verdict": "tangent", "point": point.as_ref().map(|p| vec_q(p)) }),
        Tangency::NotTangent => json!({ "verdict": "not tangent" }),
        Tangency::Inconclusive(why) => json!({ "verdict": "inconclusive", "reason": why }),
    }
}

pub fn section(s: &SectionReport, curve_degree: Option<u32>) -> Value {
    json!({
        "pencil": [q(&s.pencil.0), q(&s.pencil.1)],
        "hyperplane": vec_q(&s.dual),
        "section": poly(&s.section, "u"),
        "hessian_vanishes": s.hessian_vanishes,
        "vertex_dim": s.vertex_dim,
        "core_line": s.core_line.as_ref().map(|[a, b]| json!([vec_q(a), vec_q(b)])),
        "tangency": tangency(&s.tangency),
        "resampled": s.resampled,
        "passed": s.passed(curve_degree),
    })
}

pub fn classification(r: &ClassificationReport) -> Value {
    let degree = r.plane_curve.as_ref().and_then(|c| c.curve_degree);
    json!({
        "id": r.id,
        "n": r.n,
        "seed": r.seed.0,
        "f": poly(&r.f, "x"),
        "vanishes": r.vanishes,
        "cone": r.cone,
        "dim_z": r.dim_z,
        "low_polar_dim": r.low_polar_dim.as_ref().map(|l| json!({
            "dim_z": l.dim_z, "applicable": l.applicable, "cone": l.cone, "passed": l.passed(),
        })),
        "polar_relation": r.psi.as_ref().map(|p| relation(&p.relation)),
        "plane_curve": r.plane_curve.as_ref().map(plane_curve),
        "sections": r.sections.iter().map(|s| section(s, degree)).collect::<Vec<_>>(),
        "passed": r.passed(),
        "failures": r.failures,
    })
}

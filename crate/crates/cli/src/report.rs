//! JSON and text renderings. JSON objects use sorted keys, so output is
//! byte-for-byte reproducible.

use serde_json::{json, Value};

use sphericity_core::curvature::{ComponentLabel, ObstructionReport, TransportCheck, Verdict};
use sphericity_core::hypersurface::SurfacePoint;
use sphericity_core::{GaussianRational, Multidegree, TruncatedSeries, Vars};

pub const SCHEMA_VERSION: &str = "1.0";

pub fn coeff(c: &GaussianRational) -> Value {
    json!({
        "re": GaussianRational::fmt_part(c.re()),
        "im": GaussianRational::fmt_part(c.im()),
    })
}

fn exponents(m: &Multidegree, nvars: usize) -> Value {
    json!(m.exponents(nvars))
}

pub fn series(s: &TruncatedSeries) -> Value {
    let nv = s.nvars();
    json!({
        "order": s.order(),
        "terms": s
            .terms()
            .map(|(m, c)| json!({"exponents": exponents(m, nv), "coefficient": coeff(c)}))
            .collect::<Vec<_>>(),
    })
}

fn label(l: &ComponentLabel) -> Value {
    json!([l.k1, l.k2, l.l1, l.l2])
}

pub fn point(p: &SurfacePoint) -> Value {
    json!({
        "z": p.z().iter().map(coeff).collect::<Vec<_>>(),
        "w": coeff(p.w()),
    })
}

pub fn verdict(v: &Verdict, nvars: usize) -> Value {
    match v {
        Verdict::VanishesToOrder(k) => json!({"kind": "VanishesToOrder", "order": k}),
        Verdict::NonzeroAt {
            component,
            multidegree,
            coefficient,
        } => json!({
            "kind": "NonzeroAt",
            "component": label(component),
            "exponents": exponents(multidegree, nvars),
            "coefficient": coeff(coefficient),
        }),
        Verdict::NotApplicableLeviDegenerate => json!({"kind": "NotApplicableLeviDegenerate"}),
    }
}

pub fn obstruction(r: &ObstructionReport, with_components: bool) -> Value {
    let nvars = r.vars.as_ref().map_or(0, Vars::len);
    let mut v = json!({
        "certified_order": r.certified_order,
        "certified_identical": r.certified_identical,
        "levi_nondegenerate": r.levi_nondegenerate,
        "signature": r.signature.map(|(a, b)| json!([a, b])),
        "verdict": verdict(&r.verdict, nvars),
        "variables": r.vars.as_ref().map(|vs| vs.names().to_vec()).unwrap_or_default(),
        "notes": r.notes,
    });
    if with_components {
        v["components"] = r
            .components
            .iter()
            .map(|(l, s)| json!({"label": label(l), "series": series(s)}))
            .collect();
    }
    v
}

pub fn transport(t: &TransportCheck) -> Value {
    json!({
        "order": t.order,
        "holds": t.holds,
        "mismatched": t.mismatched.iter().map(label).collect::<Vec<_>>(),
    })
}

/// Short human description of a verdict.
pub fn verdict_text(r: &ObstructionReport) -> String {
    match &r.verdict {
        Verdict::VanishesToOrder(k) => {
            if r.certified_identical {
                format!("vanishes identically (checked past the degree bound; reported through order {k})")
            } else {
                format!("vanishes through order {k}")
            }
        }
        Verdict::NonzeroAt {
            component,
            multidegree,
            coefficient,
        } => {
            let names = r.vars.as_ref().map(|v| v.names().to_vec()).unwrap_or_default();
            let mono: Vec<String> = multidegree
                .exponents(names.len())
                .iter()
                .zip(&names)
                .filter(|(e, _)| **e > 0)
                .map(|(e, n)| if *e == 1 { n.clone() } else { format!("{n}^{e}") })
                .collect();
            let mono = if mono.is_empty() {
                "1".to_string()
            } else {
                mono.join("*")
            };
            if r.n == 1 {
                format!("nonzero: coefficient {coefficient} at {mono}")
            } else {
                format!("nonzero: component {component} has coefficient {coefficient} at {mono}")
            }
        }
        Verdict::NotApplicableLeviDegenerate => "not applicable: the Levi form is degenerate at the point".to_string(),
    }
}

pub fn point_text(p: &SurfacePoint) -> String {
    let z: Vec<String> = p.z().iter().map(ToString::to_string).collect();
    format!("z = ({}), w = {}", z.join(", "), p.w())
}

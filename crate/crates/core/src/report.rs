//! JSON views of results. Every number that comes from the field is rendered as a
//! string (`a/b` or an integer), so documents never contain floating point.

use serde_json::{json, Value};

use crate::fiber::{CurveDegree, FiberKind, FiberReport, LowDegreeSat, ProjPoint};
use crate::fitting::FittingGenerators;
use crate::linalg::ExactMatrix;
use crate::matrix_rep::{CheckStatus, MatrixRep, SatInfo, ValidationReport};

pub fn matrix(m: &ExactMatrix) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|r| Value::Array(m.row(r).iter().map(|e| Value::String(e.to_string())).collect()))
            .collect(),
    )
}

pub fn matrix_rep(m: &MatrixRep, admissible: bool) -> Value {
    let ring = m.parameterization.ring();
    let labels: Vec<String> = m.row_labels.iter().map(|l| l.render(ring.var_names())).collect();
    let entries: Vec<Vec<String>> = (0..m.rows())
        .map(|r| (0..m.cols()).map(|c| m.entry(r, c).render()).collect())
        .collect();
    json!({
        "index": m.index.to_string(),
        "rows": m.rows(),
        "cols": m.cols(),
        "below_threshold": !admissible,
        "row_labels": labels,
        "entries": entries,
        "coefficients": m.coefficients.iter().map(matrix).collect::<Vec<_>>(),
    })
}

pub fn sat_info(s: &SatInfo, field: crate::field::Field) -> Value {
    json!({
        "indeg_sat": s.indeg_sat,
        "nu0": s.nu0,
        "base_locus_degree": s.base_locus_degree,
        "sat_pieces": s.sat_pieces.iter().map(|(mu, basis)| json!({
            "degree": mu,
            "basis": basis.iter().map(|b| b.to_multi(field).render()).collect::<Vec<_>>(),
        })).collect::<Vec<_>>(),
    })
}

pub fn fiber(p: &ProjPoint, r: &FiberReport, field: crate::field::Field) -> Value {
    let mut out = json!({ "point": p.to_string() });
    let obj = out.as_object_mut().unwrap();
    match &r.kind {
        FiberKind::OffSurface => {
            obj.insert("kind".into(), json!("off_surface"));
        }
        FiberKind::Finite { degree } => {
            obj.insert("kind".into(), json!("finite"));
            obj.insert("degree".into(), json!(degree));
        }
        FiberKind::Curve(c) => {
            obj.insert("kind".into(), json!("curve"));
            match c.degree {
                CurveDegree::Degree(delta) => {
                    obj.insert("delta".into(), json!(delta));
                }
                CurveDegree::Bidegree(e1, e2) => {
                    obj.insert("bidegree".into(), json!([e1, e2]));
                }
            }
            obj.insert("hilbert_constant".into(), json!(c.hilbert_constant));
            if let Some(n) = c.residual_finite_degree {
                obj.insert("residual_finite_degree".into(), json!(n));
            }
            obj.insert(
                "curve_equation".into(),
                c.curve_equation
                    .as_ref()
                    .map_or(Value::Null, |h| json!(h.to_multi(field).render())),
            );
        }
    }
    obj.insert(
        "coranks".into(),
        Value::Array(
            r.coranks
                .iter()
                .map(|(nu, c)| json!({ "index": nu.to_string(), "corank": c }))
                .collect(),
        ),
    );
    obj.insert("below_threshold".into(), json!(r.below_threshold));
    obj.insert("notes".into(), json!(r.notes));
    out
}

/// One-word summary used by the heatmap and the text summary.
pub fn fiber_label(r: &FiberReport) -> String {
    match &r.kind {
        FiberKind::OffSurface => "off_surface".into(),
        FiberKind::Finite { degree } => format!("finite:{degree}"),
        FiberKind::Curve(c) => match c.degree {
            CurveDegree::Degree(d) => format!("curve:{d}"),
            CurveDegree::Bidegree(a, b) => format!("curve:({a},{b})"),
        },
    }
}

pub fn validation(r: &ValidationReport) -> Vec<Value> {
    r.checks
        .iter()
        .map(|(name, status)| {
            let (s, detail) = match status {
                CheckStatus::Pass => ("pass", None),
                CheckStatus::ProbabilisticPass => ("probabilistic pass", None),
                CheckStatus::Fail(m) => ("fail", Some(m.clone())),
                CheckStatus::Warning(m) => ("warning", Some(m.clone())),
                CheckStatus::Skipped(m) => ("skipped", Some(m.clone())),
            };
            json!({ "check": name, "status": s, "detail": detail })
        })
        .collect()
}

pub fn low_degree_sat(s: &LowDegreeSat, field: crate::field::Field) -> Vec<Value> {
    match s {
        LowDegreeSat::NoCurveFibers => vec![json!({ "marker": "no 1-dimensional fibers possible" })],
        LowDegreeSat::Elements(pieces) => pieces
            .iter()
            .map(|(mu, basis)| {
                json!({
                    "degree": mu,
                    "basis": basis.iter().map(|b| b.to_multi(field).render()).collect::<Vec<_>>(),
                })
            })
            .collect(),
    }
}

pub fn fitting(g: &FittingGenerators) -> Value {
    match g {
        FittingGenerators::UnitIdeal => json!({ "unit_ideal": true }),
        FittingGenerators::Minors {
            size,
            total,
            truncated,
            examined,
            minors,
        } => json!({
            "unit_ideal": false,
            "size": size,
            "total": total.to_string(),
            "examined": examined,
            "truncated": truncated,
            "minors": minors.iter().map(|m| json!({
                "rows": m.rows,
                "cols": m.cols,
                "poly": m.poly.render(),
            })).collect::<Vec<_>>(),
        }),
    }
}

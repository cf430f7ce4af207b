//! Build transcripts: the construction inputs, `F`, `θ`, `π` and the graded
//! certificate, as sorted-key JSON.

use padic_ortho::builder::{ConstructionResult, OrthogonalBasis};
use padic_ortho::field::{FieldDescriptor, Ramification};
use padic_ortho::ortho::{check_orthogonal_graded, GradedReport, Verdict};
use padic_ortho::padic::Prime;
use padic_ortho::poly::RationalPoly;
use padic_ortho::serial::{
    element_from_json, element_to_json, parse_rationals, rationals_to_json, FORMAT_VERSION,
};
use padic_ortho::{Error, Result};
use serde_json::{json, Value};

pub fn verdict_json(v: &Verdict) -> Value {
    match v {
        Verdict::Orthogonal => json!("orthogonal"),
        Verdict::Violation { digits } => json!({ "violation": digits }),
    }
}

pub fn report_json(report: &GradedReport) -> Value {
    json!(report
        .grades
        .iter()
        .map(|g| json!({
            "grade": g.grade,
            "valuation": g.valuation.to_string(),
            "size": g.size,
            "verdict": verdict_json(&g.verdict),
        }))
        .collect::<Vec<_>>())
}

fn grid_json(basis: &OrthogonalBasis) -> Value {
    json!((0..basis.e())
        .flat_map(|j| (0..basis.f()).map(move |i| (i, j)))
        .map(|(i, j)| json!({ "i": i, "j": j, "valuation": basis.element(i, j).valuation().to_string() }))
        .collect::<Vec<_>>())
}

pub fn transcript(r: &ConstructionResult) -> Value {
    let p = &r.params;
    json!({
        "version": FORMAT_VERSION,
        "params": {
            "p": p.p.get(),
            "q": p.q,
            "e": p.e,
            "f": p.f(),
            "n": p.n(),
            "a": rationals_to_json(&p.a),
            "G": rationals_to_json(p.g.coeffs()),
            "allow_custom_a": p.allow_custom_a,
        },
        "H": rationals_to_json(r.h.coeffs()),
        "F": rationals_to_json(r.field.modulus().coeffs()),
        "theta": element_to_json(&r.theta),
        "pi": element_to_json(&r.pi),
        "basis": { "grid": grid_json(&r.basis), "grades": report_json(&r.certificate) },
        "certificate": if r.certificate.is_orthogonal() { "orthogonal" } else { "failed" },
    })
}

/// One line per grade row: the valuations `v(θ^i π^j)` for `i = 0 .. f-1`.
pub fn valuation_grid_text(basis: &OrthogonalBasis) -> String {
    (0..basis.e())
        .map(|j| {
            let row: Vec<String> = (0..basis.f())
                .map(|i| basis.element(i, j).valuation().to_string())
                .collect();
            format!("j={j}: {}", row.join(" "))
        })
        .collect::<Vec<_>>()
        .join("\n")
}

fn field_u64(v: &Value, path: &[&str]) -> Result<u64> {
    path.iter()
        .try_fold(v, |acc, k| acc.get(k))
        .and_then(Value::as_u64)
        .ok_or_else(|| {
            Error::Parse(format!(
                "$.{}: expected a nonnegative integer",
                path.join(".")
            ))
        })
}

/// Re-derives the basis from a transcript and certifies it again.
pub fn recertify(text: &str) -> Result<(OrthogonalBasis, GradedReport)> {
    let v: Value = serde_json::from_str(text)
        .map_err(|e| Error::Parse(format!("line {}, column {}: {e}", e.line(), e.column())))?;
    let p = Prime::new(field_u64(&v, &["params", "p"])?)?;
    let e = field_u64(&v, &["params", "e"])? as usize;
    let f = field_u64(&v, &["params", "f"])? as usize;
    let modulus = RationalPoly::new(parse_rationals(v.get("F").unwrap_or(&Value::Null), "$.F")?);
    let field = FieldDescriptor::new(p, modulus, Some(Ramification { e, f }))?.into_arc();
    let theta = element_from_json(v.get("theta").unwrap_or(&Value::Null), &field, "$.theta")?;
    let pi = element_from_json(v.get("pi").unwrap_or(&Value::Null), &field, "$.pi")?;
    let basis = OrthogonalBasis::from_generators(&theta, &pi, f, e)?;
    let report = check_orthogonal_graded(&basis.family()?)?;
    Ok((basis, report))
}

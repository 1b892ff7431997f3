use gersten_core::algebra::{make_ring, AnyRing, Dvr};
use gersten_core::category::{classify, CategoryError};
use gersten_core::chain::ChainComplex;
use gersten_core::k0::{k0_class, telescope_witness, K0Error};
use serde_json::{json, Value};

use crate::CliError;

/// Result of a single command: `Ok` holds the output document, `Err` a
/// structured mathematical error such as `NotInC`.
pub type CommandOutcome = Result<Value, Value>;

fn error_doc(kind: &str, message: String, extra: Value) -> Value {
    let mut e = json!({ "kind": kind, "message": message });
    if let (Value::Object(e), Value::Object(extra)) = (&mut e, extra) {
        e.extend(extra);
    }
    json!({ "error": e })
}

fn category_error(e: CategoryError) -> Value {
    let message = e.to_string();
    match e {
        CategoryError::NotInC(a) => error_doc("NotInC", message, json!({ "exponent": a })),
        CategoryError::NotInjective => error_doc("NotInjective", message, json!({})),
        CategoryError::RankMismatch { rows, cols } => error_doc("RankMismatch", message, json!({ "rows": rows, "cols": cols })),
        CategoryError::ShapeMismatch(_) => error_doc("ShapeMismatch", message, json!({})),
        _ => error_doc("Classification", message, json!({})),
    }
}

fn classify_in<R: Dvr>(ring: R, value: &Value) -> Result<CommandOutcome, CliError> {
    let x = ChainComplex::from_json(ring, value).map_err(|e| CliError::Parse(e.to_string()))?;
    Ok(match classify(&x) {
        Ok(c) => Ok(json!({
            "ring": ring.descriptor(),
            "n": c.object.n,
            "m": c.object.m,
            "witness": c.witness.to_json(),
        })),
        Err(e) => Err(category_error(e)),
    })
}

/// Classifies a two-term complex given as `{ranks, d}` JSON, optionally
/// with a `ring` descriptor. An explicit `ring` argument takes precedence.
pub fn classify_document(value: &Value, ring: Option<&str>) -> Result<CommandOutcome, CliError> {
    let descriptor = match (ring, value.get("ring").and_then(Value::as_str)) {
        (Some(r), _) | (None, Some(r)) => r,
        (None, None) => "Z@5",
    };
    match make_ring(descriptor).map_err(|e| CliError::ConfigInvalid(e.to_string()))? {
        AnyRing::Integers(r) => classify_in(r, value),
        AnyRing::Polynomials(r) => classify_in(r, value),
    }
}

fn k0_in<R: Dvr>(ring: R, element: &str) -> Result<CommandOutcome, CliError> {
    let f = ring.parse(element).map_err(|e| CliError::Parse(e.to_string()))?;
    Ok(match telescope_witness(ring, &f) {
        Ok(t) => Ok(json!({
            "ring": ring.descriptor(),
            "f": ring.format(&f),
            "class": k0_class(&t.witness.quotient),
            "class_from_sequence": t.quotient_class,
            "length": t.witness.quotient.length(),
            "witness": t.witness.to_json(),
        })),
        Err(e) => {
            let kind = match e {
                K0Error::UnitElement => "UnitElement",
                K0Error::ZeroElement => "ZeroElement",
                _ => "K0",
            };
            Err(error_doc(kind, e.to_string(), json!({ "f": ring.format(&f) })))
        }
    })
}

/// `0 → R --f--> R → R/(f) → 0` and the class of `R/(f)`.
pub fn k0_document(element: &str, ring: &str) -> Result<CommandOutcome, CliError> {
    match make_ring(ring).map_err(|e| CliError::ConfigInvalid(e.to_string()))? {
        AnyRing::Integers(r) => k0_in(r, element),
        AnyRing::Polynomials(r) => k0_in(r, element),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn explicit_ring_wins() {
        let doc = json!({ "ranks": { "0": 1, "1": 1 }, "d": { "1": { "rows": 1, "cols": 1, "entries": ["5"] } }, "ring": "Z@7" });
        let out = classify_document(&doc, Some("Z@5")).unwrap().unwrap();
        assert_eq!((out["n"].as_u64(), out["m"].as_u64()), (Some(1), Some(0)));
        // 5 is a unit at 7.
        let out = classify_document(&doc, None).unwrap().unwrap();
        assert_eq!((out["n"].as_u64(), out["m"].as_u64()), (Some(0), Some(1)));
    }

    #[test]
    fn structured_errors() {
        let zero = json!({ "ranks": { "0": 1, "1": 1 } });
        let err = classify_document(&zero, None).unwrap().unwrap_err();
        assert_eq!(err["error"]["kind"], "NotInjective");
        assert_eq!(k0_document("0", "Z@5").unwrap().unwrap_err()["error"]["kind"], "ZeroElement");
        assert!(matches!(k0_document("x", "Z@5"), Err(CliError::Parse(_))));
        assert!(matches!(classify_document(&json!({}), None), Err(CliError::Parse(_))));
    }
}

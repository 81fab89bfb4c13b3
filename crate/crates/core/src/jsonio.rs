//! JSON encoding conventions shared by the library fixtures and the CLI:
//! rationals as strings ("3/2"), Q(sqrt n) scalars as [a, b] pairs meaning
//! a + b sqrt(n), small integer invariants as plain JSON numbers.

use num_traits::One;
use serde_json::{json, Map, Value};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::lattice::{CVec, ExtVec, IntVec, QVec, Sublattice};
use crate::period::MarkedPeriod;
use crate::scalar::{ExtScalar, Int, Rat};
use crate::walls::{Cone, WallSet};

fn bad(msg: impl Into<String>) -> Error {
    Error::InvalidSpec(msg.into())
}

pub fn rat_to_value(r: &Rat) -> Value {
    if r.denom().is_one() {
        if let Ok(i) = i64::try_from(r.numer().clone()) {
            return json!(i);
        }
    }
    Value::String(r.to_string())
}

pub fn rat_from_value(v: &Value) -> Result<Rat> {
    match v {
        Value::Number(n) => {
            let i = n
                .as_i64()
                .ok_or_else(|| bad(format!("non-integer number {n}; use a \"p/q\" string")))?;
            Ok(Rat::from_integer(Int::from(i)))
        }
        Value::String(s) => {
            Rat::from_str(s.trim()).map_err(|_| bad(format!("cannot parse rational `{s}`")))
        }
        _ => Err(bad(format!("expected rational, got {v}"))),
    }
}

pub fn int_to_value(i: &Int) -> Value {
    match i64::try_from(i.clone()) {
        Ok(v) => json!(v),
        Err(_) => Value::String(i.to_string()),
    }
}

pub fn int_from_value(v: &Value) -> Result<Int> {
    let r = rat_from_value(v)?;
    if !r.denom().is_one() {
        return Err(bad(format!("expected integer, got {v}")));
    }
    Ok(r.numer().clone())
}

pub fn intvec_to_value(v: &IntVec) -> Value {
    Value::Array(v.0.iter().map(int_to_value).collect())
}

pub fn intvec_from_value(v: &Value) -> Result<IntVec> {
    let arr = v.as_array().ok_or_else(|| bad("expected coordinate array"))?;
    Ok(IntVec(
        arr.iter().map(int_from_value).collect::<Result<Vec<_>>>()?,
    ))
}

pub fn qvec_to_value(v: &QVec) -> Value {
    Value::Array(v.0.iter().map(rat_to_value).collect())
}

pub fn qvec_from_value(v: &Value) -> Result<QVec> {
    let arr = v.as_array().ok_or_else(|| bad("expected coordinate array"))?;
    Ok(QVec(
        arr.iter().map(rat_from_value).collect::<Result<Vec<_>>>()?,
    ))
}

pub fn ext_scalar_to_value(s: &ExtScalar) -> Value {
    Value::Array(vec![rat_to_value(s.a()), rat_to_value(s.b())])
}

/// Standalone scalar results render as {"a": ..., "b": ...} objects.
pub fn ext_scalar_to_obj(s: &ExtScalar) -> Value {
    json!({"a": rat_to_value(s.a()), "b": rat_to_value(s.b())})
}

/// A coordinate is a bare rational (meaning b = 0), an [a, b] pair, or an
/// {"a", "b"} object.
pub fn ext_scalar_from_value(v: &Value, n: u64) -> Result<ExtScalar> {
    match v {
        Value::Object(m) => {
            let a = rat_from_value(m.get("a").ok_or_else(|| bad("missing a"))?)?;
            let b = rat_from_value(m.get("b").ok_or_else(|| bad("missing b"))?)?;
            Ok(ExtScalar::new(a, b, n))
        }
        Value::Array(pair) => {
            if pair.len() != 2 {
                return Err(bad("scalar pair must have exactly two entries"));
            }
            Ok(ExtScalar::new(
                rat_from_value(&pair[0])?,
                rat_from_value(&pair[1])?,
                n,
            ))
        }
        _ => Ok(ExtScalar::from_rat(rat_from_value(v)?, n)),
    }
}

pub fn extvec_to_value(v: &ExtVec) -> Value {
    Value::Array(v.coords().iter().map(ext_scalar_to_value).collect())
}

pub fn extvec_from_value(v: &Value, n: u64) -> Result<ExtVec> {
    let arr = v.as_array().ok_or_else(|| bad("expected coordinate array"))?;
    ExtVec::new(
        arr.iter()
            .map(|x| ext_scalar_from_value(x, n))
            .collect::<Result<Vec<_>>>()?,
    )
}

pub fn cvec_to_value(v: &CVec) -> Value {
    json!({"re": extvec_to_value(&v.re), "im": extvec_to_value(&v.im)})
}

pub fn cvec_from_value(v: &Value, n: u64) -> Result<CVec> {
    let obj = v.as_object().ok_or_else(|| bad("expected {re, im} object"))?;
    let re = extvec_from_value(obj.get("re").ok_or_else(|| bad("missing re"))?, n)?;
    let im = extvec_from_value(obj.get("im").ok_or_else(|| bad("missing im"))?, n)?;
    CVec::new(re, im)
}

/// Period JSON: {"n": 2, "alpha": {"re": [...], "im": [...]}, "beta": [...],
/// "x": [...]} with every coordinate an [a, b] pair or bare rational.
pub fn period_to_value(p: &MarkedPeriod) -> Value {
    json!({
        "n": p.radicand(),
        "alpha": cvec_to_value(&p.alpha),
        "beta": extvec_to_value(&p.beta),
        "x": extvec_to_value(&p.x),
    })
}

pub fn period_from_value(v: &Value) -> Result<MarkedPeriod> {
    let obj = v.as_object().ok_or_else(|| bad("expected period object"))?;
    let n = obj
        .get("n")
        .and_then(Value::as_u64)
        .ok_or_else(|| bad("missing or invalid n"))?;
    if n == 0 {
        return Err(bad("n must be a positive integer"));
    }
    let alpha = cvec_from_value(obj.get("alpha").ok_or_else(|| bad("missing alpha"))?, n)?;
    let beta = extvec_from_value(obj.get("beta").ok_or_else(|| bad("missing beta"))?, n)?;
    let x = extvec_from_value(obj.get("x").ok_or_else(|| bad("missing x"))?, n)?;
    MarkedPeriod::new(alpha, beta, x)
}

pub fn cone_from_value(v: &Value) -> Result<Cone> {
    let arr = v.as_array().ok_or_else(|| bad("expected generator list"))?;
    Cone::new(
        arr.iter()
            .map(qvec_from_value)
            .collect::<Result<Vec<_>>>()?,
    )
}

pub fn wallset_to_value(w: &WallSet) -> Value {
    Value::Array(w.walls.iter().map(intvec_to_value).collect())
}

pub fn sublattice_to_value(s: &Sublattice) -> Value {
    let gram: Vec<Value> = s
        .gram
        .iter()
        .map(|row| Value::Array(row.iter().map(int_to_value).collect()))
        .collect();
    let mut m = Map::new();
    m.insert(
        "basis".into(),
        Value::Array(s.basis.iter().map(intvec_to_value).collect()),
    );
    m.insert("gram".into(), Value::Array(gram));
    m.insert("degenerate".into(), json!(s.degenerate));
    Value::Object(m)
}

pub fn gram_to_value(g: &[Vec<Int>]) -> Value {
    Value::Array(
        g.iter()
            .map(|row| Value::Array(row.iter().map(int_to_value).collect()))
            .collect(),
    )
}

impl std::fmt::Display for IntVec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", intvec_to_value(self))
    }
}

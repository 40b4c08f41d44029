//! Canonical JSON:
//! `[{"m": int, "n": int, "k": int, "coeff": [[p, q, re_num, re_den, im_num, im_den], ...]}, ...]`
//! sorted by `(m, n, k)` and, inside a coefficient, by `(p, q)`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde_json::{json, Value};

use super::coeff::CoeffPoly;
use super::expr::OperatorExpr;
use super::rational::RationalComplex;
use super::scalar::TimeScalar;
use super::AlgebraError;

fn int(v: &BigInt) -> Result<Value, AlgebraError> {
    v.to_i64().map(Value::from).ok_or_else(|| AlgebraError::CoefficientOverflow(v.to_string()))
}

fn coeff_to_json(c: &CoeffPoly) -> Result<Value, AlgebraError> {
    let mut rows = Vec::with_capacity(c.len());
    for (p, q, v) in c.terms() {
        rows.push(Value::Array(vec![
            Value::from(p),
            Value::from(q),
            int(v.re.numer())?,
            int(v.re.denom())?,
            int(v.im.numer())?,
            int(v.im.denom())?,
        ]));
    }
    Ok(Value::Array(rows))
}

fn entry(m: u32, n: u32, k: i32, c: &CoeffPoly) -> Result<Value, AlgebraError> {
    Ok(json!({ "m": m, "n": n, "k": k, "coeff": coeff_to_json(c)? }))
}

pub fn expr_to_json(x: &OperatorExpr) -> Result<Value, AlgebraError> {
    x.terms().map(|(m, n, k, c)| entry(m, n, k, c)).collect::<Result<Vec<_>, _>>().map(Value::Array)
}

pub fn scalar_to_json(s: &TimeScalar) -> Result<Value, AlgebraError> {
    s.buckets().map(|(k, c)| entry(0, 0, k, c)).collect::<Result<Vec<_>, _>>().map(Value::Array)
}

fn bad(msg: impl Into<String>) -> AlgebraError {
    AlgebraError::Json(msg.into())
}

fn field_i64(obj: &Value, key: &str) -> Result<i64, AlgebraError> {
    obj.get(key).and_then(Value::as_i64).ok_or_else(|| bad(format!("missing integer field `{key}`")))
}

fn coeff_from_json(v: &Value) -> Result<CoeffPoly, AlgebraError> {
    let rows = v.as_array().ok_or_else(|| bad("`coeff` must be an array"))?;
    let mut out = CoeffPoly::zero();
    for row in rows {
        let r = row.as_array().filter(|r| r.len() == 6).ok_or_else(|| bad("coefficient rows have 6 integers"))?;
        let ints: Vec<i64> = r
            .iter()
            .map(|x| x.as_i64().ok_or_else(|| bad("coefficient entries must be integers")))
            .collect::<Result<_, _>>()?;
        if ints[3] == 0 || ints[5] == 0 {
            return Err(bad("zero denominator"));
        }
        let p = u32::try_from(ints[0]).map_err(|_| bad("negative power"))?;
        let q = u32::try_from(ints[1]).map_err(|_| bad("negative power"))?;
        let c = RationalComplex::new(
            BigRational::new(ints[2].into(), ints[3].into()),
            BigRational::new(ints[4].into(), ints[5].into()),
        );
        out.add_term(p, q, c);
    }
    Ok(out)
}

fn entries(v: &Value) -> Result<Vec<(u32, u32, i32, CoeffPoly)>, AlgebraError> {
    let arr = v.as_array().ok_or_else(|| bad("expected an array of monomials"))?;
    arr.iter()
        .map(|obj| {
            let m = u32::try_from(field_i64(obj, "m")?).map_err(|_| bad("negative m"))?;
            let n = u32::try_from(field_i64(obj, "n")?).map_err(|_| bad("negative n"))?;
            let k = i32::try_from(field_i64(obj, "k")?).map_err(|_| bad("k out of range"))?;
            let c = coeff_from_json(obj.get("coeff").ok_or_else(|| bad("missing `coeff`"))?)?;
            Ok((m, n, k, c))
        })
        .collect()
}

pub fn expr_from_json(v: &Value) -> Result<OperatorExpr, AlgebraError> {
    let mut out = OperatorExpr::zero();
    for (m, n, k, c) in entries(v)? {
        out = out.add(&OperatorExpr::monomial(c, m, n, k));
    }
    Ok(out)
}

pub fn scalar_from_json(v: &Value) -> Result<TimeScalar, AlgebraError> {
    let mut out = TimeScalar::zero();
    for (m, n, k, c) in entries(v)? {
        if m != 0 || n != 0 {
            return Err(bad("time scalars carry only m = n = 0 entries"));
        }
        out.add_bucket(k, &c);
    }
    Ok(out)
}

//! Kets as `[[re, im], …]`, operators as row-major rows of the same pairs.

use nalgebra::{DMatrix, DVector};
use serde_json::Value;

use super::{FockError, FockOperator, FockSpace, Ket};
use crate::C64;

fn pair(v: C64) -> Value {
    Value::from(vec![v.re, v.im])
}

fn parse_pair(v: &Value) -> Result<C64, FockError> {
    match v.as_array().map(Vec::as_slice) {
        Some([re, im]) => match (re.as_f64(), im.as_f64()) {
            (Some(re), Some(im)) => Ok(C64::new(re, im)),
            _ => Err(FockError::InvalidInput(format!("non-numeric pair {v}"))),
        },
        _ => Err(FockError::InvalidInput(format!("expected [re, im], got {v}"))),
    }
}

fn parse_row(v: &Value) -> Result<Vec<C64>, FockError> {
    v.as_array()
        .ok_or_else(|| FockError::InvalidInput("expected an array of pairs".into()))?
        .iter()
        .map(parse_pair)
        .collect()
}

pub fn ket_to_json(psi: &Ket) -> Value {
    Value::from(psi.amplitudes().iter().map(|&v| pair(v)).collect::<Vec<_>>())
}

/// The tail mass of a decoded ket is unknown and recorded as zero.
pub fn ket_from_json(v: &Value) -> Result<Ket, FockError> {
    let amps = parse_row(v)?;
    let space = FockSpace::new(amps.len())?;
    Ket::from_amplitudes(space, DVector::from_vec(amps), 0.0)
}

pub fn operator_to_json(op: &FockOperator) -> Value {
    let m = op.matrix();
    Value::from((0..m.nrows()).map(|i| Value::from((0..m.ncols()).map(|j| pair(m[(i, j)])).collect::<Vec<_>>())).collect::<Vec<_>>())
}

pub fn operator_from_json(v: &Value) -> Result<FockOperator, FockError> {
    let rows = v
        .as_array()
        .ok_or_else(|| FockError::InvalidInput("expected an array of rows".into()))?
        .iter()
        .map(parse_row)
        .collect::<Result<Vec<_>, _>>()?;
    let d = rows.len();
    if rows.iter().any(|r| r.len() != d) {
        return Err(FockError::InvalidInput("operator matrix is not square".into()));
    }
    let space = FockSpace::new(d)?;
    FockOperator::from_matrix(space, DMatrix::from_fn(d, d, |i, j| rows[i][j]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{coherent_ket, ladder_matrices};

    #[test]
    fn round_trip() {
        let space = FockSpace::new(8).unwrap();
        let (a, _) = ladder_matrices(space);
        let op = a.scaled(C64::new(0.5, -0.25));
        assert_eq!(operator_from_json(&operator_to_json(&op)).unwrap(), op);
        let psi = coherent_ket(C64::new(0.1, 0.2), FockSpace::new(16).unwrap()).unwrap();
        let back = ket_from_json(&ket_to_json(&psi)).unwrap();
        assert_eq!(back.amplitudes(), psi.amplitudes());
    }

    #[test]
    fn layout_is_row_major() {
        let space = FockSpace::new(2).unwrap();
        let (a, _) = ladder_matrices(space);
        assert_eq!(operator_to_json(&a).to_string(), "[[[0.0,0.0],[1.0,0.0]],[[0.0,0.0],[0.0,0.0]]]");
    }

    #[test]
    fn malformed_input() {
        assert!(ket_from_json(&serde_json::json!([[1.0]])).is_err());
        assert!(ket_from_json(&serde_json::json!([[1.0, 0.0]])).is_err());
        assert!(operator_from_json(&serde_json::json!([[[1.0, 0.0]], []])).is_err());
    }
}

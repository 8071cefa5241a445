//! JSON matrix files: `{"n": 2, "field": "real", "data": [[1, 0], [0, 1]]}`.
//!
//! Complex files use `"field": "complex"` and `[re, im]` pairs as entries.
//! Parsed floats round-trip bit-exactly through [`emit`] and [`parse_matrix`].

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::matrix::{ComplexMatrix, Matrix, RealMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Field {
    Real,
    Complex,
}

/// Parse failure; `line`/`column` are set for syntax errors.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("{message}{}", location(*line, *column))]
pub struct FormatError {
    pub message: String,
    pub line: Option<usize>,
    pub column: Option<usize>,
}

fn location(line: Option<usize>, column: Option<usize>) -> String {
    match (line, column) {
        (Some(l), Some(c)) => format!(" at line {l} column {c}"),
        _ => String::new(),
    }
}

impl FormatError {
    fn at_field(message: String) -> Self {
        FormatError {
            message,
            line: None,
            column: None,
        }
    }
}

impl From<serde_json::Error> for FormatError {
    fn from(e: serde_json::Error) -> Self {
        let (line, column) = if e.line() > 0 {
            (Some(e.line()), Some(e.column()))
        } else {
            (None, None)
        };
        FormatError {
            message: e.to_string().split(" at line ").next().unwrap_or_default().to_string(),
            line,
            column,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ParsedMatrix {
    Real(RealMatrix),
    Complex(ComplexMatrix),
}

impl ParsedMatrix {
    pub fn dim(&self) -> usize {
        match self {
            ParsedMatrix::Real(m) => m.dim(),
            ParsedMatrix::Complex(m) => m.dim(),
        }
    }

    pub fn field(&self) -> Field {
        match self {
            ParsedMatrix::Real(_) => Field::Real,
            ParsedMatrix::Complex(_) => Field::Complex,
        }
    }

    pub fn to_complex(&self) -> ComplexMatrix {
        match self {
            ParsedMatrix::Real(m) => m.to_complex(),
            ParsedMatrix::Complex(m) => m.clone(),
        }
    }

    pub fn into_real(self) -> Option<RealMatrix> {
        match self {
            ParsedMatrix::Real(m) => Some(m),
            ParsedMatrix::Complex(_) => None,
        }
    }

    pub fn to_value(&self) -> Value {
        match self {
            ParsedMatrix::Real(m) => emit(m),
            ParsedMatrix::Complex(m) => emit(m),
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMatrixFile {
    n: usize,
    field: Field,
    data: Vec<Vec<Value>>,
}

/// Parses and validates a matrix file.
pub fn parse_matrix(bytes: &[u8]) -> Result<ParsedMatrix, FormatError> {
    let raw: RawMatrixFile = serde_json::from_slice(bytes)?;
    from_raw(raw)
}

/// Validates an already-decoded JSON value as a matrix file.
pub fn parse_matrix_value(value: &Value) -> Result<ParsedMatrix, FormatError> {
    let raw = RawMatrixFile::deserialize(value).map_err(|e| FormatError::at_field(e.to_string()))?;
    from_raw(raw)
}

fn number(v: &Value, path: &str) -> Result<f64, FormatError> {
    v.as_f64()
        .filter(|x| x.is_finite())
        .ok_or_else(|| FormatError::at_field(format!("{path}: expected a finite number, found {v}")))
}

fn from_raw(raw: RawMatrixFile) -> Result<ParsedMatrix, FormatError> {
    let n = raw.n;
    if n == 0 {
        return Err(FormatError::at_field("n: dimension must be positive".into()));
    }
    if raw.data.len() != n {
        return Err(FormatError::at_field(format!(
            "data: expected {n} rows, found {}",
            raw.data.len()
        )));
    }
    for (i, row) in raw.data.iter().enumerate() {
        if row.len() != n {
            return Err(FormatError::at_field(format!(
                "data[{i}]: expected {n} entries, found {}",
                row.len()
            )));
        }
    }
    let entries = raw
        .data
        .iter()
        .enumerate()
        .flat_map(|(i, row)| row.iter().enumerate().map(move |(j, v)| (i, j, v)));
    match raw.field {
        Field::Real => {
            let data = entries
                .map(|(i, j, v)| {
                    if v.is_array() {
                        return Err(FormatError::at_field(format!(
                            "data[{i}][{j}]: complex entry in a real-field file"
                        )));
                    }
                    number(v, &format!("data[{i}][{j}]"))
                })
                .collect::<Result<Vec<_>, _>>()?;
            Ok(ParsedMatrix::Real(
                Matrix::new(n, data).map_err(|e| FormatError::at_field(e.to_string()))?,
            ))
        }
        Field::Complex => {
            let data = entries
                .map(|(i, j, v)| {
                    let path = format!("data[{i}][{j}]");
                    match v.as_array().map(Vec::as_slice) {
                        Some([re, im]) => Ok(Complex64::new(
                            number(re, &format!("{path}[0]"))?,
                            number(im, &format!("{path}[1]"))?,
                        )),
                        _ => Err(FormatError::at_field(format!(
                            "{path}: expected a [re, im] pair, found {v}"
                        ))),
                    }
                })
                .collect::<Result<Vec<_>, _>>()?;
            Ok(ParsedMatrix::Complex(
                Matrix::new(n, data).map_err(|e| FormatError::at_field(e.to_string()))?,
            ))
        }
    }
}

/// Entry encodings for [`emit`].
pub trait FileEntry: crate::scalar::Scalar {
    const FIELD: Field;
    fn to_json(self) -> Value;
}

fn float(x: f64) -> Value {
    serde_json::Number::from_f64(x).map(Value::Number).unwrap_or(Value::Null)
}

impl FileEntry for f64 {
    const FIELD: Field = Field::Real;
    fn to_json(self) -> Value {
        float(self)
    }
}

impl FileEntry for Complex64 {
    const FIELD: Field = Field::Complex;
    fn to_json(self) -> Value {
        Value::Array(vec![float(self.re), float(self.im)])
    }
}

/// Matrix file for `m` as a JSON value.
pub fn emit<T: FileEntry>(m: &Matrix<T>) -> Value {
    let n = m.dim();
    let data: Vec<Value> = (0..n)
        .map(|i| Value::Array(m.row(i).iter().map(|&x| x.to_json()).collect()))
        .collect();
    serde_json::json!({
        "n": n,
        "field": T::FIELD,
        "data": data,
    })
}

pub fn emit_string<T: FileEntry>(m: &Matrix<T>) -> String {
    serde_json::to_string_pretty(&emit(m)).expect("matrix values serialize")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn real_scalar() {
        let m = parse_matrix(br#"{"n":1,"field":"real","data":[[2]]}"#).unwrap();
        assert_eq!(m, ParsedMatrix::Real(RealMatrix::from_diag(&[2.0])));
    }

    #[test]
    fn complex_scalar() {
        let m = parse_matrix(br#"{"n":1,"field":"complex","data":[[[0,1]]]}"#).unwrap();
        assert_eq!(
            m,
            ParsedMatrix::Complex(ComplexMatrix::from_diag(&[Complex64::new(0.0, 1.0)]))
        );
    }

    #[test]
    fn shape_mismatch() {
        let e = parse_matrix(br#"{"n":2,"field":"real","data":[[1]]}"#).unwrap_err();
        assert!(e.message.contains("expected 2 rows"), "{e}");
        let e = parse_matrix(br#"{"n":2,"field":"real","data":[[1,2],[3]]}"#).unwrap_err();
        assert!(e.message.contains("data[1]"), "{e}");
    }

    #[test]
    fn syntax_error_has_location() {
        let e = parse_matrix(b"{\n\"n\": 1,\n\"field\": \"real\",\n\"data\": [[1,]]}").unwrap_err();
        assert_eq!(e.line, Some(4));
        assert!(e.column.is_some());
    }

    #[test]
    fn field_mismatches() {
        let e = parse_matrix(br#"{"n":1,"field":"real","data":[[[1,0]]]}"#).unwrap_err();
        assert!(e.message.contains("complex entry"), "{e}");
        let e = parse_matrix(br#"{"n":1,"field":"complex","data":[[1]]}"#).unwrap_err();
        assert!(e.message.contains("[re, im]"), "{e}");
        let e = parse_matrix(br#"{"n":1,"field":"quaternion","data":[[1]]}"#).unwrap_err();
        assert!(e.message.contains("unknown variant"), "{e}");
        assert!(parse_matrix(br#"{"n":1,"field":"real","data":[[1]],"x":0}"#).is_err());
        assert!(parse_matrix(br#"{"n":0,"field":"real","data":[]}"#).is_err());
        assert!(parse_matrix(br#"{"n":1,"field":"real","data":[["1"]]}"#).is_err());
    }

    #[test]
    fn awkward_floats_round_trip() {
        let vals = [-0.0, 5e-324, f64::MAX, 0.1 + 0.2, -1.0 / 3.0, 1e300, 123456789.0];
        let m = RealMatrix::from_fn(3, |i, j| vals[(i * 3 + j) % vals.len()]);
        let back = parse_matrix(emit_string(&m).as_bytes()).unwrap().into_real().unwrap();
        for (a, b) in m.as_slice().iter().zip(back.as_slice()) {
            assert_eq!(a.to_bits(), b.to_bits());
        }
    }
}

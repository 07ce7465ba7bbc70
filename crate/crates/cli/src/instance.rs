//! Instance files: a Gram matrix, one or two operators and a list of intervals.
//!
//! ```json
//! {
//!   "schema_version": "1.0",
//!   "gram": [[[1, 0], [0, 0]], [[0, 0], [-1, 0]]],
//!   "a1": [[[1, 0], [0, 1]], [[0, 1], [-1, 0]]],
//!   "a2": [[[0.5, 0], [0, 0]], [[0, 0], [1, 0]]],
//!   "intervals": [{"lower": 0.25, "upper": "+inf"}]
//! }
//! ```
//!
//! Complex entries are `[re, im]` pairs and matrices are row-major nested
//! arrays. Each interval may carry an `expected` object whose fields are
//! compared against the computed report by `verify`.

use std::sync::Arc;

use num_complex::Complex64;
use pontryagin::gen::Fixture;
use pontryagin::spectral::endpoint;
use pontryagin::{
    ComplexMatrix, Error, IndefiniteSpace, Interval, OperatorPair, PiSelfadjointOperator, Tolerance,
};
use serde::{Deserialize, Serialize};

use crate::json;
use crate::SCHEMA_VERSION;

pub type RawMatrix = Vec<Vec<[f64; 2]>>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub schema_version: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub gram: RawMatrix,
    pub a1: RawMatrix,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a2: Option<RawMatrix>,
    #[serde(default)]
    pub intervals: Vec<IntervalSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntervalSpec {
    #[serde(with = "endpoint")]
    pub lower: f64,
    #[serde(with = "endpoint")]
    pub upper: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected: Option<Expected>,
}

impl IntervalSpec {
    pub fn plain(iv: Interval) -> Self {
        Self {
            lower: iv.lower,
            upper: iv.upper,
            expected: None,
        }
    }
}

/// Values a report must reproduce; absent fields are not checked.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Expected {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kappa: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eig1: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eig2: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sig1: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sig2: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub slack: Option<i64>,
}

/// A rejected input, addressed by 1-based line number in the source text.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("line {line}: {message}")]
pub struct InputError {
    pub line: usize,
    pub message: String,
}

/// Operators built from a validated file.
#[derive(Debug, Clone)]
pub struct Loaded {
    pub space: Arc<IndefiniteSpace>,
    pub op1: PiSelfadjointOperator,
    pub op2: Option<PiSelfadjointOperator>,
    pub pair: Option<OperatorPair>,
}

/// Line of the first occurrence of `"key"`, or 1.
fn key_line(text: &str, key: &str) -> usize {
    let needle = format!("\"{key}\"");
    text.lines()
        .position(|l| l.contains(&needle))
        .map_or(1, |i| i + 1)
}

pub fn parse(text: &str) -> Result<InstanceFile, InputError> {
    let file: InstanceFile = serde_json::from_str(text).map_err(|e| InputError {
        line: e.line().max(1),
        message: e.to_string(),
    })?;
    if file.schema_version != SCHEMA_VERSION {
        return Err(InputError {
            line: key_line(text, "schema_version"),
            message: format!(
                "unsupported schema_version {:?}, expected {SCHEMA_VERSION:?}",
                file.schema_version
            ),
        });
    }
    Ok(file)
}

pub fn emit(file: &InstanceFile) -> String {
    json::render(&json::to_value(file))
}

pub fn encode_matrix(m: &ComplexMatrix) -> RawMatrix {
    m.to_rows()
        .iter()
        .map(|row| row.iter().map(|z| [z.re, z.im]).collect())
        .collect()
}

fn decode_matrix(raw: &RawMatrix, key: &str, text: &str) -> Result<ComplexMatrix, InputError> {
    let err = |message: String| InputError {
        line: key_line(text, key),
        message: format!("{key}: {message}"),
    };
    let rows = raw.len();
    if rows == 0 {
        return Err(err("matrix is empty".into()));
    }
    if let Some((i, r)) = raw.iter().enumerate().find(|(_, r)| r.len() != rows) {
        return Err(err(format!(
            "matrix must be square: row {i} has {} entries, expected {rows}",
            r.len()
        )));
    }
    let data: Vec<Complex64> = raw
        .iter()
        .flatten()
        .map(|[re, im]| Complex64::new(*re, *im))
        .collect();
    ComplexMatrix::from_row_major(rows, rows, data).map_err(|e| err(e.to_string()))
}

fn describe(key: &str, e: &Error) -> String {
    match e {
        Error::Linalg(pontryagin::linalg::LinalgError::NotHermitian { defect, bound }) => {
            format!("{key} is not Hermitian (‖G − G†‖_F = {defect:.3e} > {bound:.3e})")
        }
        Error::DegenerateGram { zero } => format!("{key} is singular ({zero} zero eigenvalue(s))"),
        Error::NotSelfadjoint { defect, bound } => {
            format!("{key} is not J-selfadjoint (‖JA − (JA)†‖_F = {defect:.3e} > {bound:.3e})")
        }
        other => format!("{key}: {other}"),
    }
}

impl InstanceFile {
    /// Builds and validates the space and operators.
    pub fn load(&self, text: &str, tol: &Tolerance) -> Result<Loaded, InputError> {
        let at = |key: &str, e: Error| InputError {
            line: key_line(text, key),
            message: describe(key, &e),
        };
        let gram = decode_matrix(&self.gram, "gram", text)?;
        let a1 = decode_matrix(&self.a1, "a1", text)?;
        let a2 = self
            .a2
            .as_ref()
            .map(|m| decode_matrix(m, "a2", text))
            .transpose()?;
        for (key, m) in [("a1", Some(&a1)), ("a2", a2.as_ref())] {
            if let Some(m) = m {
                if m.rows() != gram.rows() {
                    return Err(InputError {
                        line: key_line(text, key),
                        message: format!(
                            "{key} is {0}×{0} but gram is {1}×{1}",
                            m.rows(),
                            gram.rows()
                        ),
                    });
                }
            }
        }
        let space = Arc::new(IndefiniteSpace::new(gram, tol).map_err(|e| at("gram", e))?);
        let op1 = PiSelfadjointOperator::new(space.clone(), a1, tol).map_err(|e| at("a1", e))?;
        let op2 = a2
            .map(|m| PiSelfadjointOperator::new(space.clone(), m, tol).map_err(|e| at("a2", e)))
            .transpose()?;
        let pair = op2
            .as_ref()
            .map(|op2| OperatorPair::new(op1.clone(), op2.clone(), tol).map_err(|e| at("a2", e)))
            .transpose()?;
        Ok(Loaded {
            space,
            op1,
            op2,
            pair,
        })
    }

    /// Intervals after validation, each with its optional expectations.
    pub fn intervals(&self, text: &str) -> Result<Vec<(Interval, Option<Expected>)>, InputError> {
        self.intervals
            .iter()
            .map(|spec| {
                Interval::new(spec.lower, spec.upper)
                    .map(|iv| (iv, spec.expected.clone()))
                    .map_err(|e| InputError {
                        line: key_line(text, "intervals"),
                        message: format!("intervals: {e}"),
                    })
            })
            .collect()
    }

    pub fn from_pair(
        name: Option<String>,
        pair: &OperatorPair,
        intervals: Vec<IntervalSpec>,
    ) -> Self {
        Self {
            schema_version: SCHEMA_VERSION.into(),
            name,
            gram: encode_matrix(pair.space().gram()),
            a1: encode_matrix(pair.op1.matrix()),
            a2: Some(encode_matrix(pair.op2.matrix())),
            intervals,
        }
    }

    pub fn from_fixture(f: &Fixture) -> Self {
        let e = f.expected;
        Self {
            schema_version: SCHEMA_VERSION.into(),
            name: Some(f.name.into()),
            gram: encode_matrix(&f.gram),
            a1: encode_matrix(&f.a1),
            a2: Some(encode_matrix(&f.a2)),
            intervals: vec![IntervalSpec {
                lower: f.interval.lower,
                upper: f.interval.upper,
                expected: Some(Expected {
                    n: Some(e.n),
                    kappa: Some(e.kappa),
                    eig1: Some(e.eig1),
                    eig2: Some(e.eig2),
                    sig1: None,
                    sig2: None,
                    slack: Some(e.slack),
                }),
            }],
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use pontryagin::gen::builtin_fixtures;

    #[test]
    fn fixture_files_round_trip() {
        for f in builtin_fixtures() {
            let file = InstanceFile::from_fixture(&f);
            let text = emit(&file);
            let back = parse(&text).unwrap();
            assert_eq!(back, file);
            assert_eq!(emit(&back), text);
            let loaded = back.load(&text, &Tolerance::default()).unwrap();
            assert_eq!(loaded.op1.matrix(), &f.a1);
            assert_eq!(loaded.pair.unwrap().n(), f.expected.n);
        }
    }

    #[test]
    fn infinite_endpoints_are_literals() {
        let f = pontryagin::gen::fixture("example3").unwrap();
        let text = emit(&InstanceFile::from_fixture(&f));
        assert!(text.contains("\"upper\": \"+inf\""), "{text}");
    }

    #[test]
    fn parse_errors_carry_lines() {
        let e =
            parse("{\n  \"schema_version\": \"1.0\",\n  \"gram\": [[[1, 0]]],\n  \"a1\": oops\n}")
                .unwrap_err();
        assert_eq!(e.line, 4);
        let e = parse("{\"schema_version\": \"9\", \"gram\": [[[1,0]]], \"a1\": [[[0,0]]]}")
            .unwrap_err();
        assert!(e.message.contains("schema_version"));
    }

    #[test]
    fn validation_names_the_invariant() {
        let text = "{\n  \"schema_version\": \"1.0\",\n  \"gram\": [[[1, 0], [1, 0]], [[0, 0], [-1, 0]]],\n  \"a1\": [[[0, 0], [0, 0]], [[0, 0], [0, 0]]]\n}";
        let file = parse(text).unwrap();
        let e = file.load(text, &Tolerance::default()).unwrap_err();
        assert_eq!(e.line, 3);
        assert!(e.message.contains("not Hermitian"), "{}", e.message);

        let text = "{\n  \"schema_version\": \"1.0\",\n  \"gram\": [[[1, 0], [0, 0]], [[0, 0], [-1, 0]]],\n  \"a1\": [[[0, 0], [1, 0]], [[0, 0], [0, 0]]]\n}";
        let e = parse(text)
            .unwrap()
            .load(text, &Tolerance::default())
            .unwrap_err();
        assert_eq!(e.line, 4);
        assert!(e.message.contains("J-selfadjoint"), "{}", e.message);

        let text =
            "{\"schema_version\": \"1.0\", \"gram\": [[[1, 0]]], \"a1\": [[[0, 0], [0, 0]]]}";
        assert!(parse(text)
            .unwrap()
            .load(text, &Tolerance::default())
            .unwrap_err()
            .message
            .contains("square"));
    }
}

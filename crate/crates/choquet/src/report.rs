//! Input parsing, report serialization and the polygon CSV export.
//!
//! Reports serialize with a fixed field order and floats rendered at 17
//! significant digits, so identical runs produce byte-identical documents
//! that re-parse losslessly.

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::classify::{BoundaryStatus, EnvelopeVerdict, OperatorDescriptor, UnitarySpectrum};
use crate::config::ToleranceConfig;
use crate::linalg::{c64, CMatrix, Cplx};
use crate::numrange::NumericalRangeApprox;

/// Serde adapter: one complex number as `[re, im]`.
pub mod cplx_pair {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(z: &Cplx, s: S) -> Result<S::Ok, S::Error> {
        (z.re, z.im).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Cplx, D::Error> {
        let (re, im) = <(f64, f64)>::deserialize(d)?;
        Ok(c64(re, im))
    }
}

/// Serde adapter: a list of complex numbers as `[[re, im], ...]`.
pub mod cplx_seq {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(zs: &[Cplx], s: S) -> Result<S::Ok, S::Error> {
        let pairs: Vec<(f64, f64)> = zs.iter().map(|z| (z.re, z.im)).collect();
        pairs.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Cplx>, D::Error> {
        let pairs: Vec<(f64, f64)> = Vec::deserialize(d)?;
        Ok(pairs.into_iter().map(|(re, im)| c64(re, im)).collect())
    }
}

/// Serde adapter: a list of complex vectors.
pub mod cplx_mat {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(zs: &[Vec<Cplx>], s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<(f64, f64)>> = zs
            .iter()
            .map(|r| r.iter().map(|z| (z.re, z.im)).collect())
            .collect();
        rows.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<Cplx>>, D::Error> {
        let rows: Vec<Vec<(f64, f64)>> = Vec::deserialize(d)?;
        Ok(rows
            .into_iter()
            .map(|r| r.into_iter().map(|(re, im)| c64(re, im)).collect())
            .collect())
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ReportError {
    #[error("parse error at {path}: {message}")]
    Parse { path: String, message: String },
    #[error("validation error at {path}: {message}")]
    Validation { path: String, message: String },
}

fn parse_err(path: &str, message: impl Into<String>) -> ReportError {
    ReportError::Parse {
        path: path.to_string(),
        message: message.into(),
    }
}

fn validation_err(path: &str, message: impl Into<String>) -> ReportError {
    ReportError::Validation {
        path: path.to_string(),
        message: message.into(),
    }
}

fn as_finite_number(v: &Value, path: &str) -> Result<f64, ReportError> {
    let x = v
        .as_f64()
        .ok_or_else(|| parse_err(path, "expected a number"))?;
    if !x.is_finite() {
        return Err(validation_err(path, "number must be finite"));
    }
    Ok(x)
}

fn as_pair(v: &Value, path: &str) -> Result<Cplx, ReportError> {
    let arr = v
        .as_array()
        .ok_or_else(|| parse_err(path, "expected an [re, im] pair"))?;
    if arr.len() != 2 {
        return Err(parse_err(
            path,
            format!("expected exactly 2 components, got {}", arr.len()),
        ));
    }
    let re = as_finite_number(&arr[0], &format!("{path}[0]"))?;
    let im = as_finite_number(&arr[1], &format!("{path}[1]"))?;
    Ok(c64(re, im))
}

fn as_pair_list(v: &Value, path: &str) -> Result<Vec<Cplx>, ReportError> {
    let arr = v
        .as_array()
        .ok_or_else(|| parse_err(path, "expected a list of [re, im] pairs"))?;
    arr.iter()
        .enumerate()
        .map(|(k, item)| as_pair(item, &format!("{path}[{k}]")))
        .collect()
}

fn field<'a>(obj: &'a serde_json::Map<String, Value>, name: &str, path: &str) -> Result<&'a Value, ReportError> {
    obj.get(name)
        .ok_or_else(|| parse_err(path, format!("missing field \"{name}\"")))
}

/// Parses the JSON operator-descriptor schema, reporting the path of the
/// offending field on failure. Structural problems are parse errors; finite
/// values violating a type invariant are validation errors.
pub fn parse_descriptor(text: &str) -> Result<OperatorDescriptor, ReportError> {
    let value: Value =
        serde_json::from_str(text).map_err(|e| parse_err("$", e.to_string()))?;
    descriptor_from_value(&value, "$")
}

fn descriptor_from_value(value: &Value, path: &str) -> Result<OperatorDescriptor, ReportError> {
    let obj = value
        .as_object()
        .ok_or_else(|| parse_err(path, "expected an object"))?;
    let ty = field(obj, "type", path)?
        .as_str()
        .ok_or_else(|| parse_err(&format!("{path}.type"), "expected a string"))?;
    match ty {
        "matrix" => {
            let data_path = format!("{path}.data");
            let data = field(obj, "data", path)?
                .as_array()
                .ok_or_else(|| parse_err(&data_path, "expected an array of rows"))?;
            let n = data.len();
            if n == 0 {
                return Err(validation_err(&data_path, "matrix must be nonempty"));
            }
            if n > crate::config::MAX_DIM {
                return Err(validation_err(
                    &data_path,
                    format!("dimension {n} exceeds the supported limit {}", crate::config::MAX_DIM),
                ));
            }
            let mut rows = Vec::with_capacity(n);
            for (i, row) in data.iter().enumerate() {
                let row_path = format!("{data_path}[{i}]");
                let entries = as_pair_list(row, &row_path)?;
                if entries.len() != n {
                    return Err(validation_err(
                        &row_path,
                        format!("matrix is not square: row has {} entries, expected {n}", entries.len()),
                    ));
                }
                rows.push(entries);
            }
            let m = CMatrix::from_rows(rows)
                .map_err(|e| validation_err(&data_path, e.to_string()))?;
            Ok(OperatorDescriptor::Matrix { data: m })
        }
        "direct_sum" => {
            let blocks_path = format!("{path}.blocks");
            let blocks = field(obj, "blocks", path)?
                .as_array()
                .ok_or_else(|| parse_err(&blocks_path, "expected an array of descriptors"))?;
            if blocks.is_empty() {
                return Err(validation_err(&blocks_path, "direct sum must be nonempty"));
            }
            let parsed = blocks
                .iter()
                .enumerate()
                .map(|(i, b)| descriptor_from_value(b, &format!("{blocks_path}[{i}]")))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(OperatorDescriptor::DirectSum { blocks: parsed })
        }
        "finite_shift" => {
            let wpath = format!("{path}.weights");
            let weights = as_pair_list(field(obj, "weights", path)?, &wpath)?;
            if weights.is_empty() {
                return Err(validation_err(&wpath, "need at least one weight"));
            }
            for (k, w) in weights.iter().enumerate() {
                if w.norm() == 0.0 {
                    return Err(validation_err(
                        &format!("{wpath}[{k}]"),
                        "shift weights must be nonzero",
                    ));
                }
            }
            Ok(OperatorDescriptor::FiniteShift { weights })
        }
        "periodic_shift" => {
            let wpath = format!("{path}.weights");
            let arr = field(obj, "weights", path)?
                .as_array()
                .ok_or_else(|| parse_err(&wpath, "expected an array of numbers"))?;
            if arr.is_empty() {
                return Err(validation_err(&wpath, "need at least one weight"));
            }
            let mut weights = Vec::with_capacity(arr.len());
            for (k, item) in arr.iter().enumerate() {
                let entry_path = format!("{wpath}[{k}]");
                let w = as_finite_number(item, &entry_path)?;
                if w <= 0.0 {
                    return Err(validation_err(
                        &entry_path,
                        "periodic shift weights must be strictly positive",
                    ));
                }
                weights.push(w);
            }
            Ok(OperatorDescriptor::PeriodicShift { weights })
        }
        "unilateral_shift" => Ok(OperatorDescriptor::UnilateralShift),
        "unitary" => {
            let spath = format!("{path}.spectrum");
            let spectrum = field(obj, "spectrum", path)?;
            match spectrum {
                Value::String(s) if s == "circle" => Ok(OperatorDescriptor::Unitary {
                    spectrum: UnitarySpectrum::FullCircle,
                }),
                Value::String(other) => Err(validation_err(
                    &spath,
                    format!("unknown spectrum keyword \"{other}\"; expected \"circle\""),
                )),
                Value::Array(_) => {
                    let pts = as_pair_list(spectrum, &spath)?;
                    if pts.is_empty() {
                        return Err(validation_err(&spath, "spectrum must be nonempty"));
                    }
                    for (k, z) in pts.iter().enumerate() {
                        if (z.norm() - 1.0).abs() > 1e-12 {
                            return Err(validation_err(
                                &format!("{spath}[{k}]"),
                                format!("spectrum point has modulus {}, expected 1", z.norm()),
                            ));
                        }
                    }
                    Ok(OperatorDescriptor::Unitary {
                        spectrum: UnitarySpectrum::FiniteSet(pts),
                    })
                }
                _ => Err(parse_err(
                    &spath,
                    "expected \"circle\" or a list of [re, im] pairs",
                )),
            }
        }
        "normal" => {
            let epath = format!("{path}.eigenvalues");
            let eigenvalues = as_pair_list(field(obj, "eigenvalues", path)?, &epath)?;
            if eigenvalues.is_empty() {
                return Err(validation_err(&epath, "need at least one eigenvalue"));
            }
            Ok(OperatorDescriptor::Normal { eigenvalues })
        }
        other => Err(validation_err(
            &format!("{path}.type"),
            format!("unknown descriptor type \"{other}\""),
        )),
    }
}

/// Complete record of one classification run; serializes losslessly and
/// carries enough evidence to re-run every certificate check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub tool: String,
    pub version: String,
    pub input: OperatorDescriptor,
    pub tolerances: ToleranceConfig,
    pub rng_seed: u64,
    pub statuses: Vec<BoundaryStatus>,
    pub verdict: EnvelopeVerdict,
}

impl ReportDocument {
    pub fn new(
        input: OperatorDescriptor,
        cfg: &ToleranceConfig,
        statuses: Vec<BoundaryStatus>,
        verdict: EnvelopeVerdict,
    ) -> Self {
        ReportDocument {
            tool: "choquet".to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            input,
            tolerances: cfg.clone(),
            rng_seed: cfg.rng_seed,
            statuses,
            verdict,
        }
    }
}

/// JSON formatter rendering every float with 17 significant digits, enough
/// to round-trip f64 exactly.
struct SciFormatter;

impl serde_json::ser::Formatter for SciFormatter {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> std::io::Result<()>
    where
        W: ?Sized + std::io::Write,
    {
        if value.is_finite() {
            write!(writer, "{value:.16e}")
        } else {
            writer.write_all(b"null")
        }
    }
}

/// Serializes any value with the 17-significant-digit float convention.
pub fn to_json_precise<T: Serialize>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, SciFormatter);
    value
        .serialize(&mut ser)
        .expect("report serialization cannot fail");
    String::from_utf8(buf).expect("serde_json emits UTF-8")
}

/// Deterministic report text: fixed field order, 17-significant-digit floats.
pub fn emit_report(doc: &ReportDocument) -> String {
    to_json_precise(doc)
}

/// Re-parses an emitted report.
pub fn parse_report(text: &str) -> Result<ReportDocument, ReportError> {
    serde_json::from_str(text).map_err(|e| parse_err("$", e.to_string()))
}

/// Polygon CSV: header `theta,support,re,im`, one row per sweep sample,
/// CRLF line endings.
pub fn emit_polygon_csv(nr: &NumericalRangeApprox) -> String {
    let mut out = String::with_capacity(32 * (nr.angles.len() + 1));
    out.push_str("theta,support,re,im\r\n");
    for k in 0..nr.angles.len() {
        let p = nr.boundary_points[k];
        out.push_str(&format!(
            "{},{},{},{}\r\n",
            nr.angles[k], nr.support_values[k], p.re, p.im
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::{classify_descriptor, EnvelopeShape};
    use crate::numrange::numrange_sweep;

    fn cfg() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    #[test]
    fn parses_periodic_shift() {
        let d = parse_descriptor(r#"{"type":"periodic_shift","weights":[1,2]}"#).unwrap();
        assert_eq!(
            d,
            OperatorDescriptor::PeriodicShift {
                weights: vec![1.0, 2.0]
            }
        );
    }

    #[test]
    fn parses_nilpotent_matrix() {
        let d =
            parse_descriptor(r#"{"type":"matrix","data":[[[0,0],[1,0]],[[0,0],[0,0]]]}"#).unwrap();
        match d {
            OperatorDescriptor::Matrix { data } => {
                assert_eq!(data.dim(), 2);
                assert_eq!(data[(0, 1)], c64(1.0, 0.0));
            }
            other => panic!("unexpected descriptor {other:?}"),
        }
    }

    #[test]
    fn rejects_non_square_matrix_with_path() {
        let err = parse_descriptor(r#"{"type":"matrix","data":[[[0,0]],[[1,0]]]}"#).unwrap_err();
        match err {
            ReportError::Validation { path, message } => {
                assert!(path.starts_with("$.data"), "path = {path}");
                assert!(message.contains("square"), "message = {message}");
            }
            other => panic!("expected validation error, got {other}"),
        }
    }

    #[test]
    fn rejects_nonpositive_periodic_weight_with_path() {
        let err =
            parse_descriptor(r#"{"type":"periodic_shift","weights":[1,-2]}"#).unwrap_err();
        match err {
            ReportError::Validation { path, .. } => assert_eq!(path, "$.weights[1]"),
            other => panic!("expected validation error, got {other}"),
        }
    }

    #[test]
    fn rejects_non_unimodular_unitary_spectrum() {
        let err = parse_descriptor(r#"{"type":"unitary","spectrum":[[0.5,0]]}"#).unwrap_err();
        assert!(matches!(err, ReportError::Validation { .. }));
    }

    #[test]
    fn rejects_malformed_json() {
        assert!(matches!(
            parse_descriptor("{"),
            Err(ReportError::Parse { .. })
        ));
        assert!(matches!(
            parse_descriptor(r#"{"type":"widget"}"#),
            Err(ReportError::Validation { .. })
        ));
    }

    #[test]
    fn unitary_circle_round_trips() {
        let d = parse_descriptor(r#"{"type":"unitary","spectrum":"circle"}"#).unwrap();
        let text = to_json_precise(&d);
        assert!(text.contains("\"circle\""));
        let again: OperatorDescriptor = serde_json::from_str(&text).unwrap();
        assert_eq!(d, again);
    }

    #[test]
    fn report_round_trips_and_is_deterministic() {
        let cfg = cfg();
        let d = parse_descriptor(r#"{"type":"periodic_shift","weights":[1,2]}"#).unwrap();
        let (statuses, verdict) = classify_descriptor(&d, &cfg).unwrap();
        let doc = ReportDocument::new(d, &cfg, statuses, verdict);
        let text = emit_report(&doc);
        let text2 = emit_report(&doc);
        assert_eq!(text, text2);
        let parsed = parse_report(&text).unwrap();
        assert_eq!(parsed, doc);
        assert!(text.contains("\"circle_matrices\""));
        assert!(text.contains("\"compact_operators\""));
    }

    #[test]
    fn verdict_serialization_shapes() {
        let v = EnvelopeShape::BlockSum(vec![2, 1]);
        assert_eq!(serde_json::to_string(&v).unwrap(), r#"{"block_sum":[2,1]}"#);
        let v = EnvelopeShape::TwoPoints;
        assert_eq!(serde_json::to_string(&v).unwrap(), r#""two_points""#);
        let v = EnvelopeShape::CircleMatrices { p: 2 };
        assert_eq!(
            serde_json::to_string(&v).unwrap(),
            r#"{"circle_matrices":{"p":2}}"#
        );
    }

    #[test]
    fn seventeen_digit_floats_round_trip() {
        // A value with no short decimal representation.
        let x = 0.1 + 0.2;
        let text = to_json_precise(&x);
        let back: f64 = serde_json::from_str(&text).unwrap();
        assert_eq!(x, back);
        assert!(text.contains('e'));
    }

    #[test]
    fn polygon_csv_has_one_row_per_angle() {
        let cfg = ToleranceConfig {
            angle_count: 16,
            ..cfg()
        };
        let t = CMatrix::diag(&[c64(0.0, 0.0), c64(1.0, 0.0)]);
        let nr = numrange_sweep(&t, &cfg).unwrap();
        let csv = emit_polygon_csv(&nr);
        let lines: Vec<&str> = csv.split("\r\n").filter(|l| !l.is_empty()).collect();
        assert_eq!(lines.len(), 17);
        assert_eq!(lines[0], "theta,support,re,im");
    }

    #[test]
    fn classify_report_contains_expected_verdict() {
        let cfg = cfg();
        let d = parse_descriptor(
            r#"{"type":"direct_sum","blocks":[
                {"type":"matrix","data":[[[0,0],[1,0]],[[0,0],[0,0]]]},
                {"type":"matrix","data":[[[0.6,0]]]}
            ]}"#,
        )
        .unwrap();
        let (statuses, verdict) = classify_descriptor(&d, &cfg).unwrap();
        assert_eq!(verdict.shape, EnvelopeShape::BlockSum(vec![2, 1]));
        let doc = ReportDocument::new(d, &cfg, statuses, verdict);
        let text = emit_report(&doc);
        assert!(text.contains("\"block_sum\""));
    }
}

//! Exact-text I/O: scalar parsing, point-set CSV, and JSON file helpers.
//!
//! Everything on disk is exact text. Scalars accept integers, fractions,
//! quadratic surds in the display form (`"1/2+1/2√5"`), and decimal or
//! scientific notation (`"0.25"`, `"1e-3"`) — decimals are converted to
//! rationals digit by digit, never through floating point. Point sets
//! travel as CSV with one `color` column and exact coordinate strings, so
//! files diff cleanly and round-trip without loss.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cps::CutProjectScheme;
use crate::modelset::WindowFamily;
use crate::numeric::QuadExt;
use crate::pointset::{MultiPointSet, PointSetError};
use crate::region::RBox;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    File {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {message}")]
    Malformed { path: PathBuf, message: String },
    #[error("cannot parse {0:?} as an exact scalar")]
    Scalar(String),
    #[error("CSV: {0}")]
    Csv(String),
    #[error(transparent)]
    Points(#[from] PointSetError),
}

/// Parses an exact scalar from any accepted text form: integer (`"-3"`),
/// fraction (`"5/2"`), quadratic surd (`"1/2+1/2√5"`), or decimal and
/// scientific notation (`"0.25"`, `"1e-3"`, `"-1.5e2"`) converted exactly.
pub fn parse_exact_scalar(text: &str) -> Result<QuadExt, IoError> {
    let t = text.trim();
    let fail = || IoError::Scalar(t.to_string());
    if t.contains('\u{221a}') || t.contains('/') {
        return t.parse().map_err(|_| fail());
    }
    if t.contains(['.', 'e', 'E']) {
        return parse_decimal(t).ok_or_else(fail);
    }
    t.parse().map_err(|_| fail())
}

/// `[sign] digits [. digits] [e [sign] digits]`, exactly, as a rational.
fn parse_decimal(t: &str) -> Option<QuadExt> {
    let (mantissa, exp) = match t.split_once(['e', 'E']) {
        Some((m, e)) => (m, e.parse::<i32>().ok()?),
        None => (t, 0),
    };
    let (int_part, frac_part) = match mantissa.split_once('.') {
        Some((i, f)) => (i, f),
        None => (mantissa, ""),
    };
    let neg = int_part.starts_with('-');
    let int_digits = int_part.strip_prefix(['+', '-']).unwrap_or(int_part);
    if int_digits.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_digits.chars().all(|c| c.is_ascii_digit())
        || !frac_part.chars().all(|c| c.is_ascii_digit())
    {
        return None;
    }
    let mut num: BigInt = format!("0{int_digits}{frac_part}").parse().ok()?;
    if neg {
        num = -num;
    }
    let shift = exp - i32::try_from(frac_part.len()).ok()?;
    let rat = if shift >= 0 {
        BigRational::from_integer(num * BigInt::from(10u32).pow(shift as u32))
    } else {
        BigRational::new(num, BigInt::from(10u32).pow(shift.unsigned_abs()))
    };
    Some(QuadExt::from_rational(rat))
}

/// Renders a multiple set as CSV: header `color,x0,...,x{d-1}`, one row per
/// point, coordinates as exact display strings. Rows come out sorted by
/// color and then by point, so equal sets give byte-identical files.
pub fn points_to_csv(set: &MultiPointSet) -> Result<String, IoError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["color".to_string()];
    header.extend((0..set.dim()).map(|i| format!("x{i}")));
    w.write_record(&header).map_err(|e| IoError::Csv(e.to_string()))?;
    for (color, points) in set.colors() {
        for p in points {
            let mut row = vec![color.to_string()];
            row.extend(p.iter().map(ToString::to_string));
            w.write_record(&row).map_err(|e| IoError::Csv(e.to_string()))?;
        }
    }
    let bytes = w.into_inner().map_err(|e| IoError::Csv(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| IoError::Csv(e.to_string()))
}

/// Reads a multiple set from CSV text (the [`points_to_csv`] format). The
/// carrier is the supplied box when given, otherwise the componentwise hull
/// of the points (a point, or `[0,0]^d`, for degenerate inputs).
pub fn points_from_csv(text: &str, carrier: Option<RBox>) -> Result<MultiPointSet, IoError> {
    let mut r = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(false)
        .from_reader(text.as_bytes());
    let headers = r.headers().map_err(|e| IoError::Csv(e.to_string()))?.clone();
    if headers.len() < 2 || &headers[0] != "color" {
        return Err(IoError::Csv(
            "header must be color,x0,...,x{d-1}".to_string(),
        ));
    }
    let dim = headers.len() - 1;
    if let Some(bx) = &carrier {
        if bx.dim() != dim {
            return Err(IoError::Csv(format!(
                "carrier has dimension {}, CSV has {dim}",
                bx.dim()
            )));
        }
    }
    let mut rows: Vec<(String, Vec<QuadExt>)> = Vec::new();
    for record in r.records() {
        let record = record.map_err(|e| IoError::Csv(e.to_string()))?;
        let color = record[0].to_string();
        let point = record
            .iter()
            .skip(1)
            .map(parse_exact_scalar)
            .collect::<Result<Vec<_>, _>>()?;
        rows.push((color, point));
    }
    let carrier = match carrier {
        Some(bx) => bx,
        None => hull_box(dim, rows.iter().map(|(_, p)| p.as_slice())),
    };
    let mut colors: BTreeMap<String, Vec<Vec<QuadExt>>> = BTreeMap::new();
    for (color, point) in rows {
        colors.entry(color).or_default().push(point);
    }
    Ok(MultiPointSet::from_parts(dim, carrier, colors)?)
}

/// Componentwise hull of a list of points; `[0,0]^dim` when the list is
/// empty.
fn hull_box<'a>(dim: usize, points: impl Iterator<Item = &'a [QuadExt]>) -> RBox {
    let mut acc: Option<Vec<(QuadExt, QuadExt)>> = None;
    for p in points {
        match &mut acc {
            None => acc = Some(p.iter().map(|x| (x.clone(), x.clone())).collect()),
            Some(iv) => {
                for (slot, x) in iv.iter_mut().zip(p) {
                    slot.0 = slot.0.min_of(x);
                    slot.1 = slot.1.max_of(x);
                }
            }
        }
    }
    let iv = acc.unwrap_or_else(|| vec![(QuadExt::zero(), QuadExt::zero()); dim]);
    RBox::new(iv).expect("hull intervals are ordered")
}

/// Reads a whole file as UTF-8 text.
pub fn read_text(path: impl AsRef<Path>) -> Result<String, IoError> {
    let path = path.as_ref();
    fs::read_to_string(path).map_err(|source| IoError::File { path: path.to_path_buf(), source })
}

/// Writes text atomically: to a sibling temporary file first, then renamed
/// into place, so readers never observe a half-written artifact.
pub fn write_text_atomic(path: impl AsRef<Path>, content: &str) -> Result<(), IoError> {
    let path = path.as_ref();
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    let fail = |source| IoError::File { path: path.to_path_buf(), source };
    fs::write(&tmp, content).map_err(fail)?;
    fs::rename(&tmp, path).map_err(fail)
}

/// Loads a JSON value from a file; parse failures report the file and the
/// line/column of the offending token.
pub fn load_json<T: DeserializeOwned>(path: impl AsRef<Path>) -> Result<T, IoError> {
    let path = path.as_ref();
    let text = read_text(path)?;
    serde_json::from_str(&text).map_err(|e| IoError::Malformed {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}

/// Pretty JSON with a trailing newline — the one serialization every report
/// and artifact uses, so identical values give byte-identical files.
pub fn to_json_pretty<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}

/// Combined scheme-plus-windows input (the `minimize --input` file format).
#[derive(Clone, Serialize, Deserialize)]
pub struct SchemeWithWindows {
    pub cps: CutProjectScheme,
    pub windows: WindowFamily,
}

/// Morphism specification file: source and target schemes plus the integer
/// lattice map, rows listed top to bottom.
#[derive(Clone, Serialize, Deserialize)]
pub struct MorphismSpec {
    pub source: CutProjectScheme,
    pub target: CutProjectScheme,
    pub map: Vec<Vec<i64>>,
}

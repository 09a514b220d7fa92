//! Window files: CSV `index,value_num,value_den[,value_decimal]` and JSON
//! `{"offset": "...", "values": ["num/den", ...]}`.

use std::fmt::Write as _;

use num_bigint::BigUint;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{parse_ratio, ratio_to_string, render_decimal, to_big_ratio, ExactInt};
use crate::sequence::SeqWindow;

pub const CSV_HEADER: &str = "index,value_num,value_den";

/// Render a window as CSV; `decimals` adds a presentation-only column.
pub fn to_csv<I: ExactInt>(w: &SeqWindow<I>, decimals: Option<usize>) -> String {
    let mut out = String::from(CSV_HEADER);
    if decimals.is_some() {
        out.push_str(",value_decimal");
    }
    out.push('\n');
    let mut index = w.offset().clone();
    for v in w.values() {
        write!(out, "{index},{},{}", v.numer(), v.denom()).expect("write to String");
        if let Some(places) = decimals {
            write!(out, ",{}", render_decimal(&to_big_ratio(v), places)).expect("write to String");
        }
        out.push('\n');
        index += 1u32;
    }
    out
}

/// Parse CSV produced by [`to_csv`] (or by hand). Indices must be
/// consecutive; errors carry 1-based line numbers.
pub fn from_csv<I: ExactInt>(text: &str) -> Result<SeqWindow<I>> {
    let mut offset: Option<BigUint> = None;
    let mut values = Vec::new();
    let mut saw_header = false;
    for (lineno, line) in text.lines().enumerate() {
        let line_no = lineno + 1;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if !saw_header {
            saw_header = true;
            if line.starts_with("index") {
                let cols: Vec<&str> = line.split(',').map(str::trim).collect();
                if cols.len() < 3 || cols[..3] != ["index", "value_num", "value_den"] {
                    return Err(Error::Parse { line: line_no, msg: format!("unexpected header {line:?}") });
                }
                continue;
            }
        }
        let cols: Vec<&str> = line.split(',').map(str::trim).collect();
        if cols.len() < 3 || cols.len() > 4 {
            return Err(Error::Parse { line: line_no, msg: format!("expected 3 or 4 columns, found {}", cols.len()) });
        }
        let index: BigUint = cols[0]
            .parse()
            .map_err(|e| Error::Parse { line: line_no, msg: format!("bad index {:?}: {e}", cols[0]) })?;
        let expected = match &offset {
            None => {
                offset = Some(index.clone());
                index.clone()
            }
            Some(o) => o + BigUint::from(values.len()),
        };
        if index != expected {
            return Err(Error::Parse { line: line_no, msg: format!("index {index} breaks the run, expected {expected}") });
        }
        let value: Ratio<I> = parse_ratio(&format!("{}/{}", cols[1], cols[2]))
            .map_err(|msg| Error::Parse { line: line_no, msg })?;
        values.push(value);
    }
    let offset = offset.ok_or(Error::Parse { line: 0, msg: "no data rows".into() })?;
    SeqWindow::new(offset, values).map_err(|e| Error::Parse { line: 0, msg: e.to_string() })
}

#[derive(Serialize, Deserialize)]
struct WindowJson {
    offset: String,
    values: Vec<String>,
}

pub fn to_json<I: ExactInt>(w: &SeqWindow<I>) -> String {
    let doc = WindowJson {
        offset: w.offset().to_string(),
        values: w.values().iter().map(ratio_to_string).collect(),
    };
    serde_json::to_string_pretty(&doc).expect("window serializes")
}

pub fn from_json<I: ExactInt>(text: &str) -> Result<SeqWindow<I>> {
    let doc: WindowJson = serde_json::from_str(text)
        .map_err(|e| Error::Parse { line: e.line(), msg: e.to_string() })?;
    let offset: BigUint = doc
        .offset
        .parse()
        .map_err(|e| Error::Parse { line: 0, msg: format!("bad offset: {e}") })?;
    let values = doc
        .values
        .iter()
        .enumerate()
        .map(|(i, s)| {
            parse_ratio::<I>(s).map_err(|msg| Error::Parse { line: 0, msg: format!("value {i}: {msg}") })
        })
        .collect::<Result<Vec<_>>>()?;
    SeqWindow::new(offset, values)
}

/// Convert a window between scalar types (values must fit).
pub fn convert<I: ExactInt, J: ExactInt>(w: &SeqWindow<I>) -> Result<SeqWindow<J>> {
    let values = w
        .values()
        .iter()
        .map(|v| crate::scalar::from_big_ratio::<J>(&to_big_ratio(v)))
        .collect::<Result<Vec<_>>>()?;
    SeqWindow::new(w.offset().clone(), values)
}

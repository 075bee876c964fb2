//! Plain-text matrix dumps.
//!
//! First line `rows cols`, then one line per row holding `cols` pairs
//! `re im`, all separated by single spaces. Floats are written with 17
//! significant digits so a round trip is lossless.

use std::fmt::Write as _;

use super::{CMat, NumericsError, C64};

pub fn format_matrix(m: &CMat) -> String {
    let mut out = String::new();
    writeln!(out, "{} {}", m.rows(), m.cols()).unwrap();
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            if j > 0 {
                out.push(' ');
            }
            let z = m[(i, j)];
            write!(out, "{:.16e} {:.16e}", z.re, z.im).unwrap();
        }
        out.push('\n');
    }
    out
}

fn bad(msg: impl Into<String>) -> NumericsError {
    NumericsError::Parse(msg.into())
}

pub fn parse_matrix(text: &str) -> Result<CMat, NumericsError> {
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| bad("empty input"))?;
    let dims: Vec<usize> = header
        .split(' ')
        .map(|t| {
            t.parse::<usize>()
                .map_err(|_| bad(format!("bad header {header:?}")))
        })
        .collect::<Result<_, _>>()?;
    let [rows, cols] = dims[..] else {
        return Err(bad(format!("header needs two integers, got {header:?}")));
    };
    if rows == 0 || cols == 0 {
        return Err(bad("dimensions must be positive"));
    }
    let mut data = Vec::with_capacity(rows * cols);
    for i in 0..rows {
        let line = lines
            .next()
            .ok_or_else(|| bad(format!("missing row {i}")))?;
        let nums: Vec<f64> = line
            .split(' ')
            .map(|t| {
                t.parse::<f64>()
                    .map_err(|_| bad(format!("bad number {t:?} in row {i}")))
            })
            .collect::<Result<_, _>>()?;
        if nums.len() != 2 * cols {
            return Err(bad(format!(
                "row {i} has {} numbers, expected {}",
                nums.len(),
                2 * cols
            )));
        }
        for pair in nums.chunks(2) {
            if !pair[0].is_finite() || !pair[1].is_finite() {
                return Err(bad(format!("non-finite entry in row {i}")));
            }
            data.push(C64::new(pair[0], pair[1]));
        }
    }
    if lines.any(|l| !l.is_empty()) {
        return Err(bad("trailing content after last row"));
    }
    Ok(CMat::from_vec(rows, cols, data))
}

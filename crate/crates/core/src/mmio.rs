//! Matrix Market I/O for dense complex matrices.
//!
//! Reads `array` and `coordinate` layouts with `real`, `integer` or `complex`
//! fields and `general` symmetry. Writes `array complex general` with 17
//! significant digits, so a write/read cycle is bit-exact.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::scalar::{cplx, Complex};

const BANNER: &str = "%%MatrixMarket";

#[derive(Clone, Copy, PartialEq)]
enum Field {
    Real,
    Complex,
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

pub fn read_matrix_market_str(text: &str) -> Result<CMatrix<f64>> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let (_, header) = lines.next().ok_or_else(|| parse_err(1, "empty file"))?;
    let words: Vec<String> = header
        .split_whitespace()
        .map(|w| w.to_ascii_lowercase())
        .collect();
    if words.len() != 5 || words[0] != BANNER.to_ascii_lowercase() || words[1] != "matrix" {
        return Err(parse_err(
            1,
            format!("not a Matrix Market header: '{header}'"),
        ));
    }
    let coordinate = match words[2].as_str() {
        "array" => false,
        "coordinate" => true,
        other => return Err(parse_err(1, format!("unsupported layout '{other}'"))),
    };
    let field = match words[3].as_str() {
        "real" | "integer" => Field::Real,
        "complex" => Field::Complex,
        other => return Err(parse_err(1, format!("unsupported field '{other}'"))),
    };
    if words[4] != "general" {
        return Err(parse_err(1, format!("unsupported symmetry '{}'", words[4])));
    }

    let mut data = lines.filter(|(_, l)| {
        let t = l.trim();
        !t.is_empty() && !t.starts_with('%')
    });
    let (size_line, size) = data
        .next()
        .ok_or_else(|| parse_err(2, "missing size line"))?;
    let dims: Vec<usize> = size
        .split_whitespace()
        .map(|s| {
            s.parse()
                .map_err(|_| parse_err(size_line, format!("bad size '{s}'")))
        })
        .collect::<Result<_>>()?;
    let expected = if coordinate { 3 } else { 2 };
    if dims.len() != expected {
        return Err(parse_err(size_line, "wrong number of size fields"));
    }
    let (rows, cols) = (dims[0], dims[1]);
    if rows == 0 || cols == 0 {
        return Err(Error::EmptyDimension);
    }
    let mut m = vec![cplx(0.0, 0.0); rows * cols];

    let value = |line: usize, parts: &[&str]| -> Result<Complex<f64>> {
        let num = |s: &str| {
            s.parse::<f64>()
                .map_err(|_| parse_err(line, format!("bad number '{s}'")))
        };
        match (field, parts.len()) {
            (Field::Real, 1) => Ok(cplx(num(parts[0])?, 0.0)),
            (Field::Complex, 2) => Ok(cplx(num(parts[0])?, num(parts[1])?)),
            _ => Err(parse_err(line, "wrong number of value fields")),
        }
    };

    if coordinate {
        let nnz = dims[2];
        for k in 0..nnz {
            let (line, text) = data.next().ok_or_else(|| {
                parse_err(size_line, format!("expected {nnz} entries, found {k}"))
            })?;
            let parts: Vec<&str> = text.split_whitespace().collect();
            if parts.len() < 3 {
                return Err(parse_err(line, "expected 'row col value'"));
            }
            let idx = |s: &str, bound: usize| -> Result<usize> {
                match s.parse::<usize>() {
                    Ok(i) if (1..=bound).contains(&i) => Ok(i - 1),
                    _ => Err(parse_err(line, format!("index '{s}' out of range"))),
                }
            };
            let (i, j) = (idx(parts[0], rows)?, idx(parts[1], cols)?);
            m[i * cols + j] += value(line, &parts[2..])?;
        }
    } else {
        // column-major
        for k in 0..rows * cols {
            let (line, text) = data.next().ok_or_else(|| {
                parse_err(
                    size_line,
                    format!("expected {} entries, found {k}", rows * cols),
                )
            })?;
            let parts: Vec<&str> = text.split_whitespace().collect();
            m[(k % rows) * cols + k / rows] = value(line, &parts)?;
        }
    }
    if let Some((line, _)) = data.next() {
        return Err(parse_err(line, "trailing data after the last entry"));
    }
    CMatrix::from_vec(rows, cols, m)
}

pub fn write_matrix_market_string(a: &CMatrix<f64>) -> String {
    let (rows, cols) = a.shape();
    let mut out = format!("{BANNER} matrix array complex general\n{rows} {cols}\n");
    for j in 0..cols {
        for i in 0..rows {
            let z = a[(i, j)];
            out.push_str(&format!("{:.16e} {:.16e}\n", z.re, z.im));
        }
    }
    out
}

pub fn read_matrix_market(path: &Path) -> Result<CMatrix<f64>> {
    let text =
        fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    read_matrix_market_str(&text)
}

pub fn write_matrix_market(path: &Path, a: &CMatrix<f64>) -> Result<()> {
    fs::write(path, write_matrix_market_string(a))
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

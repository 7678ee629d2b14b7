//! Matrix and vector files.
//!
//! Text files use the MatrixMarket dense array format (column-major, one
//! value per line). Binary files start with the 8-byte magic `RNLADNS1`,
//! then rows and cols as little-endian `u64`, then the row-major `f64`
//! payload in little-endian order. Readers sniff the magic; writers pick the
//! binary format for a `.bin` extension.

use std::fs;
use std::io::Write;
use std::path::Path;

use crate::error::{Result, RnlaError};
use crate::linalg::DenseMatrix;

pub const BINARY_MAGIC: &[u8; 8] = b"RNLADNS1";
const MM_HEADER: &str = "%%MatrixMarket matrix array real general";

fn io_err(path: &Path, source: std::io::Error) -> RnlaError {
    RnlaError::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn parse_err(path: &Path, line: usize, msg: impl Into<String>) -> RnlaError {
    RnlaError::Parse {
        path: path.to_path_buf(),
        line,
        msg: msg.into(),
    }
}

pub fn read_matrix(path: impl AsRef<Path>) -> Result<DenseMatrix> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| io_err(path, e))?;
    if bytes.starts_with(BINARY_MAGIC) {
        return parse_binary(path, &bytes);
    }
    let text = String::from_utf8(bytes).map_err(|_| parse_err(path, 0, "not UTF-8 text"))?;
    parse_matrix_market(path, &text)
}

pub fn write_matrix(path: impl AsRef<Path>, m: &DenseMatrix) -> Result<()> {
    let path = path.as_ref();
    let bytes = if path.extension().is_some_and(|e| e == "bin") {
        encode_binary(m)
    } else {
        encode_matrix_market(m).into_bytes()
    };
    write_bytes(path, &bytes)
}

/// Reads an `n x 1` matrix file, or plain whitespace-separated numbers.
pub fn read_vector(path: impl AsRef<Path>) -> Result<Vec<f64>> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| io_err(path, e))?;
    if bytes.starts_with(BINARY_MAGIC) {
        return column_of(path, parse_binary(path, &bytes)?);
    }
    let text = String::from_utf8(bytes).map_err(|_| parse_err(path, 0, "not UTF-8 text"))?;
    if text.trim_start().starts_with("%%") {
        return column_of(path, parse_matrix_market(path, &text)?);
    }
    let mut out = Vec::new();
    for (no, line) in text.lines().enumerate() {
        for tok in line.split_whitespace() {
            out.push(parse_value(path, no + 1, tok)?);
        }
    }
    if out.is_empty() {
        return Err(parse_err(path, 0, "no values"));
    }
    Ok(out)
}

pub fn write_vector(path: impl AsRef<Path>, v: &[f64]) -> Result<()> {
    let m = DenseMatrix::column_vector(v)?;
    write_matrix(path, &m)
}

fn column_of(path: &Path, m: DenseMatrix) -> Result<Vec<f64>> {
    if m.cols() != 1 {
        return Err(parse_err(
            path,
            0,
            format!("expected one column, found {}", m.cols()),
        ));
    }
    Ok(m.into_vec())
}

fn write_bytes(path: &Path, bytes: &[u8]) -> Result<()> {
    let mut f = fs::File::create(path).map_err(|e| io_err(path, e))?;
    f.write_all(bytes).map_err(|e| io_err(path, e))?;
    f.sync_all().map_err(|e| io_err(path, e))
}

fn parse_value(path: &Path, line: usize, tok: &str) -> Result<f64> {
    let v: f64 = tok
        .parse()
        .map_err(|_| parse_err(path, line, format!("invalid number {tok:?}")))?;
    if !v.is_finite() {
        return Err(parse_err(path, line, format!("non-finite value {tok}")));
    }
    Ok(v)
}

fn parse_matrix_market(path: &Path, text: &str) -> Result<DenseMatrix> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or_else(|| parse_err(path, 1, "empty file"))?;
    let tokens: Vec<String> = header.split_whitespace().map(str::to_ascii_lowercase).collect();
    let expected: Vec<String> = MM_HEADER
        .split_whitespace()
        .map(str::to_ascii_lowercase)
        .collect();
    if tokens != expected {
        return Err(parse_err(
            path,
            1,
            format!("unsupported header {header:?}; expected {MM_HEADER:?}"),
        ));
    }

    let mut dims = None;
    let mut values = Vec::new();
    for (no, line) in lines {
        let line_no = no + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('%') {
            continue;
        }
        match dims {
            None => {
                let parts: Vec<&str> = trimmed.split_whitespace().collect();
                let parsed: Option<Vec<usize>> = parts.iter().map(|t| t.parse().ok()).collect();
                match parsed.as_deref() {
                    Some(&[r, c]) => {
                        dims = Some((r, c));
                        values.reserve(r.saturating_mul(c).min(1 << 24));
                    }
                    _ => return Err(parse_err(path, line_no, "expected size line `rows cols`")),
                }
            }
            Some(_) => {
                for tok in trimmed.split_whitespace() {
                    values.push(parse_value(path, line_no, tok)?);
                }
            }
        }
    }
    let (rows, cols) = dims.ok_or_else(|| parse_err(path, 0, "missing size line"))?;
    if rows == 0 || cols == 0 {
        return Err(RnlaError::EmptyMatrix);
    }
    if values.len() != rows * cols {
        return Err(parse_err(
            path,
            0,
            format!("expected {} values, found {}", rows * cols, values.len()),
        ));
    }
    Ok(DenseMatrix::from_fn(rows, cols, |i, j| values[j * rows + i]))
}

fn encode_matrix_market(m: &DenseMatrix) -> String {
    let mut out = String::with_capacity(32 + m.rows() * m.cols() * 25);
    out.push_str(MM_HEADER);
    out.push('\n');
    out.push_str(&format!("{} {}\n", m.rows(), m.cols()));
    for j in 0..m.cols() {
        for i in 0..m.rows() {
            out.push_str(&format!("{:.16e}\n", m[(i, j)]));
        }
    }
    out
}

fn encode_binary(m: &DenseMatrix) -> Vec<u8> {
    let mut out = Vec::with_capacity(24 + 8 * m.as_slice().len());
    out.extend_from_slice(BINARY_MAGIC);
    out.extend_from_slice(&(m.rows() as u64).to_le_bytes());
    out.extend_from_slice(&(m.cols() as u64).to_le_bytes());
    for v in m.as_slice() {
        out.extend_from_slice(&v.to_le_bytes());
    }
    out
}

fn parse_binary(path: &Path, bytes: &[u8]) -> Result<DenseMatrix> {
    let word = |at: usize| -> Result<u64> {
        bytes
            .get(at..at + 8)
            .map(|b| u64::from_le_bytes(b.try_into().expect("8 bytes")))
            .ok_or_else(|| parse_err(path, 0, "truncated binary header"))
    };
    let rows = word(8)? as usize;
    let cols = word(16)? as usize;
    let len = rows
        .checked_mul(cols)
        .ok_or_else(|| parse_err(path, 0, "dimensions overflow"))?;
    let payload = &bytes[24..];
    if payload.len() != len * 8 {
        return Err(parse_err(
            path,
            0,
            format!("expected {} payload bytes, found {}", len * 8, payload.len()),
        ));
    }
    if len == 0 {
        return Err(RnlaError::EmptyMatrix);
    }
    let data = payload
        .chunks_exact(8)
        .map(|b| f64::from_le_bytes(b.try_into().expect("8 bytes")))
        .collect();
    DenseMatrix::new(rows, cols, data)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> DenseMatrix {
        DenseMatrix::from_rows(&[vec![1.0, -2.5e-300], vec![1.0 / 3.0, 7.0e12], vec![0.0, -0.1]]).unwrap()
    }

    #[test]
    fn text_round_trip_is_exact() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("a.mtx");
        write_matrix(&path, &sample()).unwrap();
        assert_eq!(read_matrix(&path).unwrap(), sample());
    }

    #[test]
    fn binary_round_trip_is_exact() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("a.bin");
        write_matrix(&path, &sample()).unwrap();
        assert!(fs::read(&path).unwrap().starts_with(BINARY_MAGIC));
        assert_eq!(read_matrix(&path).unwrap(), sample());
    }

    #[test]
    fn text_is_column_major() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("a.mtx");
        fs::write(&path, format!("{MM_HEADER}\n% note\n2 2\n1\n2\n3\n4\n")).unwrap();
        let m = read_matrix(&path).unwrap();
        assert_eq!(m.row(0), &[1.0, 3.0]);
        assert_eq!(m.row(1), &[2.0, 4.0]);
    }

    #[test]
    fn nan_is_rejected_with_line() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("a.mtx");
        fs::write(&path, format!("{MM_HEADER}\n2 1\n1.0\nNaN\n")).unwrap();
        match read_matrix(&path) {
            Err(RnlaError::Parse { line, .. }) => assert_eq!(line, 4),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn wrong_count_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("a.mtx");
        fs::write(&path, format!("{MM_HEADER}\n2 2\n1\n2\n3\n")).unwrap();
        assert!(matches!(read_matrix(&path), Err(RnlaError::Parse { .. })));
    }

    #[test]
    fn coordinate_format_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("a.mtx");
        fs::write(
            &path,
            "%%MatrixMarket matrix coordinate real general\n1 1 1\n1 1 2\n",
        )
        .unwrap();
        assert!(matches!(
            read_matrix(&path),
            Err(RnlaError::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn truncated_binary_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("a.bin");
        let mut bytes = encode_binary(&sample());
        bytes.pop();
        fs::write(&path, bytes).unwrap();
        assert!(matches!(read_matrix(&path), Err(RnlaError::Parse { .. })));
    }

    #[test]
    fn plain_vector() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("b.txt");
        fs::write(&path, "1 2\n3.5\n").unwrap();
        assert_eq!(read_vector(&path).unwrap(), vec![1.0, 2.0, 3.5]);
        let mm = dir.path().join("b.mtx");
        write_vector(&mm, &[0.25, -1.0]).unwrap();
        assert_eq!(read_vector(&mm).unwrap(), vec![0.25, -1.0]);
    }

    #[test]
    fn missing_file() {
        assert!(matches!(
            read_matrix("/nonexistent/x.mtx"),
            Err(RnlaError::Io { .. })
        ));
    }
}

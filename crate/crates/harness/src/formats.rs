//! Text formats: big integers and lattice bases.

use std::fmt::Write as _;

use fhe_lattice::lattice::LatticeBasis;
use num_bigint::BigInt;
use num_traits::Num;

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("invalid integer {0:?}")]
    Integer(String),
    #[error("line {line}: {msg}")]
    Basis { line: usize, msg: String },
    #[error(transparent)]
    Lattice(#[from] fhe_lattice::Error),
}

/// Parses a decimal integer or a `0x`-prefixed lowercase hex integer, with an
/// optional leading minus sign.
pub fn parse_bigint(s: &str) -> Result<BigInt, FormatError> {
    let t = s.trim();
    let (neg, body) = match t.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, t),
    };
    let v = match body.strip_prefix("0x") {
        Some(hex) if !hex.is_empty() && hex.chars().all(|c| c.is_ascii_digit() || ('a'..='f').contains(&c)) => {
            BigInt::from_str_radix(hex, 16).ok()
        }
        Some(_) => None,
        None if !body.is_empty() && body.chars().all(|c| c.is_ascii_digit()) => BigInt::from_str_radix(body, 10).ok(),
        None => None,
    }
    .ok_or_else(|| FormatError::Integer(s.to_string()))?;
    Ok(if neg { -v } else { v })
}

pub fn to_strings(v: &[BigInt]) -> Vec<String> {
    v.iter().map(BigInt::to_string).collect()
}

pub fn parse_all(v: &[String]) -> Result<Vec<BigInt>, FormatError> {
    v.iter().map(|s| parse_bigint(s)).collect()
}

/// One row per line, entries separated by single spaces, preceded by an
/// `n m` header line.
pub fn write_basis(basis: &LatticeBasis) -> String {
    let mut out = format!("{} {}\n", basis.rank(), basis.ambient_dim());
    for row in basis.rows() {
        let line: Vec<String> = row.iter().map(BigInt::to_string).collect();
        writeln!(out, "{}", line.join(" ")).expect("writing to a String");
    }
    out
}

/// Reads rows of whitespace-separated integers. A first line with exactly two
/// entries that matches the shape of the remaining rows is taken as the
/// `n m` header; blank lines and `#` comments are skipped.
pub fn read_basis(text: &str) -> Result<LatticeBasis, FormatError> {
    let mut rows: Vec<(usize, Vec<BigInt>)> = Vec::new();
    for (no, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let row = line
            .split_whitespace()
            .map(parse_bigint)
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| FormatError::Basis {
                line: no + 1,
                msg: e.to_string(),
            })?;
        rows.push((no + 1, row));
    }
    if let Some((line, header)) = rows.first().cloned() {
        let rest = &rows[1..];
        if header.len() == 2 && !rest.is_empty() {
            let n = usize::try_from(&header[0]).ok();
            let m = usize::try_from(&header[1]).ok();
            let shape_matches = n == Some(rest.len()) && rest.iter().all(|(_, r)| Some(r.len()) == m);
            if shape_matches {
                rows.remove(0);
            } else if rest.iter().any(|(_, r)| r.len() != 2) {
                return Err(FormatError::Basis {
                    line,
                    msg: format!("header does not match {} rows", rest.len()),
                });
            }
        }
    }
    Ok(LatticeBasis::new(rows.into_iter().map(|(_, r)| r).collect())?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integers() {
        assert_eq!(parse_bigint("-123").unwrap(), BigInt::from(-123));
        assert_eq!(parse_bigint("0xff").unwrap(), BigInt::from(255));
        assert_eq!(parse_bigint("-0x10").unwrap(), BigInt::from(-16));
        assert!(parse_bigint("0xFF").is_err());
        assert!(parse_bigint("12a").is_err());
        assert!(parse_bigint("").is_err());
        assert!(parse_bigint("-").is_err());
    }

    #[test]
    fn basis_roundtrip() {
        let b = LatticeBasis::from_i64(&[&[1, -2, 3], &[4, 5, -6]]).unwrap();
        let text = write_basis(&b);
        assert_eq!(text, "2 3\n1 -2 3\n4 5 -6\n");
        assert_eq!(read_basis(&text).unwrap(), b);
        assert_eq!(read_basis("# no header\n1 -2 3\n4 5 -6\n").unwrap(), b);
    }

    #[test]
    fn two_column_bases_without_header() {
        let b = read_basis("201 37\n1648 297\n").unwrap();
        assert_eq!(b.rank(), 2);
        let b = read_basis("2 2\n201 37\n1648 297\n").unwrap();
        assert_eq!(b.rank(), 2);
    }

    #[test]
    fn bad_header() {
        assert!(read_basis("3 3\n1 0 0\n0 1 0\n").is_err());
        assert!(read_basis("1 x\n").is_err());
    }
}
